//! Fixation certificates, good droplets and blocks, block components and flipper statistics.

mod blocks;
mod certificate;
mod flippers;

use thiserror::Error;

use crate::geometry::GeometryError;

pub use blocks::{
    block_region, estimate_good_block_probability, good_block_check, good_droplet_check, non_fixed_components,
    wilson_interval, BlockGrid, Estimate, FrozenMarks,
};
pub use certificate::{reachability_oracle, well_fixed_certificate, WellFixedReport, REACHABILITY_LIMIT};
pub use flippers::{
    flipper_stats, flipper_stats_from_records, forced_flipper_sites, forced_flipper_sites_in_marks,
    shield_violations, FlipperStats, ShieldViolation,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("{0} unfrozen sites exceed the exhaustive search limit")]
    TooManyUnfrozen(usize),
    #[error("good blocks of supercritical families need a family without disjoint rules")]
    DisjointRules,
    #[error("block size {l} is below the minimum {min}")]
    BlockTooSmall { l: i64, min: i64 },
    #[error("operation requires a two-dimensional family")]
    NeedsTwoDimensions,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
