//! Built-in update families with their expected classifications.

use crate::family::{classify, Classification, Kind, UpdateFamily};

#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub text: &'static str,
    pub kind: Kind,
    pub has_disjoint_rules: bool,
    pub description: &'static str,
}

impl CatalogEntry {
    pub fn family(&self) -> UpdateFamily {
        UpdateFamily::parse(self.text).expect("catalog families parse")
    }

    /// Whether `classify` reproduces the stored kind and disjointness.
    pub fn self_test(&self) -> Result<(), Classification> {
        let c = classify(&self.family());
        if c.kind == self.kind && c.has_disjoint_rules == self.has_disjoint_rules {
            Ok(())
        } else {
            Err(c)
        }
    }
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        key: "fig1",
        text: "dim 2\nrule (-1,0) (-1,1)\nrule (-1,0) (-1,-1)\n",
        kind: Kind::Supercritical,
        has_disjoint_rules: false,
        description: "two rules sharing the left neighbour",
    },
    CatalogEntry {
        key: "nn2d-2",
        text: "dim 2\nrule (1,0) (-1,0)\nrule (1,0) (0,1)\nrule (1,0) (0,-1)\nrule (-1,0) (0,1)\nrule (-1,0) (0,-1)\nrule (0,1) (0,-1)\n",
        kind: Kind::Critical,
        has_disjoint_rules: true,
        description: "all 2-subsets of the nearest neighbours",
    },
    CatalogEntry {
        key: "voter1d",
        text: "dim 1\nrule (1)\nrule (-1)\n",
        kind: Kind::Supercritical,
        has_disjoint_rules: true,
        description: "one-dimensional nearest-neighbour voter",
    },
    CatalogEntry {
        key: "chain1d",
        text: "dim 1\nrule (1)\nrule (1) (2)\n",
        kind: Kind::Supercritical,
        has_disjoint_rules: false,
        description: "right-looking rules sharing the site 1",
    },
    CatalogEntry {
        key: "cross-subcritical",
        text: "dim 2\nrule (1,0) (-1,0)\nrule (0,1) (0,-1)\n",
        kind: Kind::Subcritical,
        has_disjoint_rules: true,
        description: "horizontal and vertical pairs",
    },
    CatalogEntry {
        key: "both1d",
        text: "dim 1\nrule (-1) (1)\n",
        kind: Kind::Subcritical,
        has_disjoint_rules: false,
        description: "both neighbours at once",
    },
];

pub fn lookup(key: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.key == key)
}

pub fn family(key: &str) -> Option<UpdateFamily> {
    lookup(key).map(CatalogEntry::family)
}

/// The two-dimensional family {{(1,0)},{(−1,0)}}, the 2D counterpart of `voter1d`.
pub fn horizontal_voter() -> UpdateFamily {
    UpdateFamily::from_pairs(&[&[(1, 0)], &[(-1, 0)]]).expect("valid family")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_self_test() {
        for e in CATALOG {
            assert_eq!(e.self_test(), Ok(()), "{}", e.key);
        }
    }

    #[test]
    fn figure_one_range() {
        assert_eq!(family("fig1").unwrap().range_sq(), 2);
        assert!(lookup("nope").is_none());
    }
}
