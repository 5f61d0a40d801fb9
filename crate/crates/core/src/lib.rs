pub mod analysis;
pub mod bootstrap;
pub mod catalog;
pub mod cli;
pub mod dynamics;
pub mod exact;
pub mod experiment;
pub mod family;
pub mod geometry;
pub mod lattice;
pub mod oracle;
