//! Update families: parsing, range, disjoint rules and classification.
//!
//! A family file is line oriented:
//!
//! ```text
//! # Figure-1 style family
//! dim 2
//! rule (-1,0) (-1,1)
//! rule (-1,0) (-1,-1)
//! ```
//!
//! `;` also separates statements, so `dim 1; rule (1); rule (-1)` is a
//! complete family on one line.

mod arcs;
mod classify;
mod direction;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::Site;

pub use arcs::{Arc, ArcSet};
pub use classify::{
    classify, classify_1d, classify_2d, destabilizing_arc, grid_classify_oracle, stable_set,
    unstable_set, Classification, Kind, SemicircleReading,
};
pub use direction::CircleDirection;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    One,
    Two,
}

impl Dim {
    pub fn as_u8(self) -> u8 {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: empty rule")]
    EmptyRule { line: usize },
    #[error("line {line}: zero offset is not allowed in an update rule")]
    ZeroOffset { line: usize },
    #[error("line {line}: offset has {found} coordinates but the family has dimension {dim}")]
    MixedDimension { line: usize, dim: u8, found: usize },
    #[error("family has no rules")]
    NoRules,
    #[error("operation requires a {expected}-dimensional family")]
    WrongDimension { expected: u8 },
}

/// A finite nonempty set of nonzero offsets, stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UpdateRule {
    offsets: Vec<Site>,
}

impl UpdateRule {
    pub fn new(offsets: impl IntoIterator<Item = Site>) -> Option<Self> {
        let mut offsets: Vec<Site> = offsets.into_iter().collect();
        offsets.sort_unstable();
        offsets.dedup();
        if offsets.is_empty() || offsets.iter().any(|o| o.is_zero()) {
            return None;
        }
        Some(UpdateRule { offsets })
    }

    pub fn offsets(&self) -> &[Site] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn is_disjoint(&self, other: &UpdateRule) -> bool {
        // both sorted
        let (mut i, mut j) = (0, 0);
        while i < self.offsets.len() && j < other.offsets.len() {
            match self.offsets[i].cmp(&other.offsets[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, o) in self.offsets.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, "}}")
    }
}

/// A finite collection of distinct update rules of one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UpdateFamily {
    dim: Dim,
    rules: Vec<UpdateRule>,
    range_sq: i64,
}

impl UpdateFamily {
    /// Builds a family, collapsing duplicate rules (first occurrence wins).
    pub fn new(dim: Dim, rules: Vec<UpdateRule>) -> Result<Self, FamilyError> {
        if rules.is_empty() {
            return Err(FamilyError::NoRules);
        }
        let mut distinct: Vec<UpdateRule> = Vec::with_capacity(rules.len());
        for rule in rules {
            if dim == Dim::One && rule.offsets.iter().any(|o| o.y != 0) {
                return Err(FamilyError::MixedDimension {
                    line: 0,
                    dim: 1,
                    found: 2,
                });
            }
            if !distinct.contains(&rule) {
                distinct.push(rule);
            }
        }
        let range_sq = distinct
            .iter()
            .flat_map(|r| r.offsets.iter())
            .map(|o| o.norm_sq())
            .max()
            .unwrap_or(0);
        Ok(UpdateFamily {
            dim,
            rules: distinct,
            range_sq,
        })
    }

    /// Convenience constructor from coordinate tuples (2D) used by the catalog and tests.
    pub fn from_pairs(rules: &[&[(i32, i32)]]) -> Result<Self, FamilyError> {
        let rules = rules
            .iter()
            .map(|r| {
                UpdateRule::new(r.iter().map(|&p| Site::from(p))).ok_or(FamilyError::ZeroOffset { line: 0 })
            })
            .collect::<Result<Vec<_>, _>>()?;
        UpdateFamily::new(Dim::Two, rules)
    }

    /// Convenience constructor for one-dimensional families.
    pub fn from_ints(rules: &[&[i32]]) -> Result<Self, FamilyError> {
        let rules = rules
            .iter()
            .map(|r| {
                UpdateRule::new(r.iter().map(|&x| Site::new(x, 0))).ok_or(FamilyError::ZeroOffset { line: 0 })
            })
            .collect::<Result<Vec<_>, _>>()?;
        UpdateFamily::new(Dim::One, rules)
    }

    pub fn parse(text: &str) -> Result<Self, FamilyError> {
        parse_family(text)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn rules(&self) -> &[UpdateRule] {
        &self.rules
    }

    /// Maximal squared Euclidean norm over all offsets.
    pub fn range_sq(&self) -> i64 {
        self.range_sq
    }

    /// The range r, i.e. the maximal Euclidean norm of an offset.
    pub fn range(&self) -> f64 {
        (self.range_sq as f64).sqrt()
    }

    /// Smallest integer that is at least the range.
    pub fn range_ceil(&self) -> i32 {
        let mut r = (self.range_sq as f64).sqrt().floor() as i64;
        while r * r < self.range_sq {
            r += 1;
        }
        while r > 0 && (r - 1) * (r - 1) >= self.range_sq {
            r -= 1;
        }
        r as i32
    }

    /// Maximal sup-norm of an offset.
    pub fn chebyshev_range(&self) -> i32 {
        self.rules
            .iter()
            .flat_map(|r| r.offsets.iter())
            .map(|o| o.chebyshev())
            .max()
            .unwrap_or(0)
    }

    /// First pair `(i, j)`, `i < j`, of rules with empty intersection.
    pub fn disjoint_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.rules.len() {
            for j in i + 1..self.rules.len() {
                if self.rules[i].is_disjoint(&self.rules[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn has_disjoint_rules(&self) -> bool {
        self.disjoint_pair().is_some()
    }

    /// The same rules viewed as a two-dimensional family on the x axis.
    pub fn embed_2d(&self) -> UpdateFamily {
        UpdateFamily {
            dim: Dim::Two,
            rules: self.rules.clone(),
            range_sq: self.range_sq,
        }
    }

    /// Serializes back into the family file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\n", self.dim.as_u8());
        for rule in &self.rules {
            out.push_str("rule");
            for o in rule.offsets() {
                match self.dim {
                    Dim::One => out.push_str(&format!(" ({})", o.x)),
                    Dim::Two => out.push_str(&format!(" ({},{})", o.x, o.y)),
                }
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for UpdateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, r) in self.rules.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if self.dim == Dim::One {
                let xs: Vec<String> = r.offsets().iter().map(|o| o.x.to_string()).collect();
                write!(f, "{{{}}}", xs.join(", "))?;
            } else {
                write!(f, "{r}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Parses the line-oriented family format.
pub fn parse_family(text: &str) -> Result<UpdateFamily, FamilyError> {
    let mut dim: Option<Dim> = None;
    let mut rules = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("");
        for stmt in line.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            let (head, rest) = match stmt.find(|c: char| c.is_whitespace() || c == '(') {
                Some(pos) => (&stmt[..pos], stmt[pos..].trim()),
                None => (stmt, ""),
            };
            match head {
                "dim" => {
                    if dim.is_some() {
                        return Err(syntax(line_no, "duplicate dim statement"));
                    }
                    dim = Some(match rest {
                        "1" => Dim::One,
                        "2" => Dim::Two,
                        other => return Err(syntax(line_no, &format!("unsupported dimension `{other}`"))),
                    });
                }
                "rule" => {
                    let d = dim.ok_or_else(|| syntax(line_no, "`rule` before `dim`"))?;
                    rules.push(parse_rule(rest, d, line_no)?);
                }
                other => return Err(syntax(line_no, &format!("unknown statement `{other}`"))),
            }
        }
    }
    let dim = dim.ok_or_else(|| syntax(1, "missing `dim` statement"))?;
    UpdateFamily::new(dim, rules)
}

fn syntax(line: usize, msg: &str) -> FamilyError {
    FamilyError::Syntax {
        line,
        msg: msg.to_string(),
    }
}

fn parse_rule(text: &str, dim: Dim, line: usize) -> Result<UpdateRule, FamilyError> {
    let mut offsets = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(syntax(line, &format!("expected `(` at `{rest}`")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| syntax(line, "unterminated offset"))?;
        let inner = &rest[1..close];
        let coords = inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<i32>()
                    .map_err(|_| syntax(line, &format!("invalid coordinate `{}`", c.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let offset = match (dim, coords.as_slice()) {
            (Dim::One, [x]) => Site::new(*x, 0),
            (Dim::Two, [x, y]) => Site::new(*x, *y),
            _ => {
                return Err(FamilyError::MixedDimension {
                    line,
                    dim: dim.as_u8(),
                    found: coords.len(),
                })
            }
        };
        if offset.is_zero() {
            return Err(FamilyError::ZeroOffset { line });
        }
        offsets.push(offset);
        rest = rest[close + 1..].trim_start();
    }
    UpdateRule::new(offsets).ok_or(FamilyError::EmptyRule { line })
}
