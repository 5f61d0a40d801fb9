//! Text formats: snapshot grids and flip-trace CSV.
//!
//! A snapshot is one row of characters per lattice row, top row first:
//! `+`/`-` for unfrozen states, `P`/`M` for sites frozen at +/−, `.` for
//! bounding-box cells outside the window. Header lines starting with `#`
//! carry the dimension, the lower-left corner, the boundary and the seal
//! width.

use std::fmt::Write as _;

use super::{Boundary, DynamicsError, DynamicsKind, FlipRecord, FlipTrace, Frozen, Spin, SpinConfiguration};
use crate::family::{Dim, UpdateFamily};
use crate::lattice::Site;

fn cell(c: &SpinConfiguration, s: Site) -> char {
    match (c.frozen(s), c.spin(s)) {
        (None, _) => '.',
        (Some(Frozen::FrozenPlus), _) => 'P',
        (Some(Frozen::FrozenMinus), _) => 'M',
        (Some(Frozen::Unfrozen), Some(sp)) => sp.symbol(),
        (Some(Frozen::Unfrozen), None) => unreachable!("window sites carry a state"),
    }
}

pub fn write_grid(c: &SpinConfiguration) -> String {
    let mut out = String::new();
    let (lo, hi) = (c.lo(), c.hi());
    writeln!(out, "# dim {}", c.dim().as_u8()).unwrap();
    writeln!(out, "# lo {} {}", lo.x, lo.y).unwrap();
    writeln!(out, "# boundary {}", c.boundary().name()).unwrap();
    writeln!(out, "# seal {}", c.seal_width()).unwrap();
    for y in (lo.y..=hi.y).rev() {
        for x in lo.x..=hi.x {
            out.push(cell(c, Site::new(x, y)));
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> DynamicsError {
    DynamicsError::Parse { line, msg: msg.into() }
}

pub fn parse_grid(text: &str) -> Result<SpinConfiguration, DynamicsError> {
    let mut dim = None;
    let mut lo = Site::ORIGIN;
    let mut boundary = Boundary::StaticOutside(Spin::Plus);
    let mut seal = 0;
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(h) = line.strip_prefix('#') {
            let mut it = h.split_whitespace();
            match it.next() {
                Some("dim") => {
                    dim = Some(match it.next() {
                        Some("1") => Dim::One,
                        Some("2") => Dim::Two,
                        _ => return Err(parse_err(i + 1, "dim must be 1 or 2")),
                    })
                }
                Some("lo") => {
                    let v: Vec<i32> = it.filter_map(|t| t.parse().ok()).collect();
                    if v.len() != 2 {
                        return Err(parse_err(i + 1, "lo needs two integers"));
                    }
                    lo = Site::new(v[0], v[1]);
                }
                Some("boundary") => {
                    boundary = it
                        .next()
                        .and_then(Boundary::parse)
                        .ok_or_else(|| parse_err(i + 1, "unknown boundary"))?
                }
                Some("seal") => {
                    seal = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| parse_err(i + 1, "seal needs an integer"))?
                }
                _ => {}
            }
            continue;
        }
        if !line.is_empty() {
            rows.push((i + 1, line));
        }
    }
    if rows.is_empty() {
        return Err(parse_err(0, "empty grid"));
    }
    let width = rows[0].1.chars().count();
    let height = rows.len();
    let dim = dim.unwrap_or(if height == 1 { Dim::One } else { Dim::Two });
    if dim == Dim::One && height != 1 {
        return Err(parse_err(rows[1].0, "one-dimensional grid has more than one row"));
    }
    let mut c = SpinConfiguration::blank(dim, lo, width as i32, height as i32, boundary, seal);
    for (r, (line_no, row)) in rows.iter().enumerate() {
        if row.chars().count() != width {
            return Err(parse_err(*line_no, "ragged row"));
        }
        let y = lo.y + (height - 1 - r) as i32;
        for (k, ch) in row.chars().enumerate() {
            let s = Site::new(lo.x + k as i32, y);
            match ch {
                '+' | '-' => c.set_spin(s, Spin::from_symbol(ch).unwrap()).unwrap(),
                'P' => c.set_frozen(s, Frozen::FrozenPlus).unwrap(),
                'M' => c.set_frozen(s, Frozen::FrozenMinus).unwrap(),
                '.' => c.exclude(s),
                _ => return Err(parse_err(*line_no, format!("unexpected character {ch:?}"))),
            }
        }
    }
    Ok(c)
}

/// One-line family text for CSV headers.
pub fn family_line(f: &UpdateFamily) -> String {
    f.to_text().trim_end().replace('\n', "; ")
}

pub const TRACE_HEADER: &str = "time,x,y,from,to,rule_index";

pub fn write_trace_csv(t: &FlipTrace) -> String {
    let mut out = String::new();
    writeln!(out, "# family {}", family_line(&t.family)).unwrap();
    writeln!(out, "# kind {}", t.kind.name()).unwrap();
    writeln!(out, "# seed {}", t.seed).unwrap();
    writeln!(out, "# horizon {}", t.horizon).unwrap();
    writeln!(out, "# rings {}", t.rings).unwrap();
    writeln!(out, "{TRACE_HEADER}").unwrap();
    for r in &t.records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.time, r.site.x, r.site.y, r.from, r.to, r.rule_index
        )
        .unwrap();
    }
    out
}

/// Records and metadata read back from a trace CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceCsv {
    pub family: Option<UpdateFamily>,
    pub kind: Option<DynamicsKind>,
    pub seed: Option<u64>,
    pub horizon: Option<f64>,
    pub records: Vec<FlipRecord>,
}

pub fn parse_trace_csv(text: &str) -> Result<TraceCsv, DynamicsError> {
    let mut out = TraceCsv {
        family: None,
        kind: None,
        seed: None,
        horizon: None,
        records: Vec::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let line_no = i + 1;
        if line.is_empty() || line == TRACE_HEADER {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            let h = h.trim();
            let (key, value) = h.split_once(' ').unwrap_or((h, ""));
            match key {
                "family" => {
                    out.family = Some(
                        UpdateFamily::parse(value).map_err(|e| parse_err(line_no, e.to_string()))?,
                    )
                }
                "kind" => out.kind = DynamicsKind::parse(value.trim()),
                "seed" => out.seed = value.trim().parse().ok(),
                "horizon" => out.horizon = value.trim().parse().ok(),
                _ => {}
            }
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(parse_err(line_no, "expected 6 columns"));
        }
        let num = |k: usize| -> Result<i64, DynamicsError> {
            cols[k].trim().parse().map_err(|_| parse_err(line_no, format!("bad number in column {}", k + 1)))
        };
        let spin = |k: usize| -> Result<Spin, DynamicsError> {
            let t = cols[k].trim();
            let mut ch = t.chars();
            match (ch.next(), ch.next()) {
                (Some(c), None) => Spin::from_symbol(c),
                _ => None,
            }
            .ok_or_else(|| parse_err(line_no, "state must be + or -"))
        };
        out.records.push(FlipRecord {
            time: cols[0].trim().parse().map_err(|_| parse_err(line_no, "bad time"))?,
            site: Site::new(num(1)? as i32, num(2)? as i32),
            from: spin(3)?,
            to: spin(4)?,
            rule_index: num(5)? as usize,
        });
    }
    Ok(out)
}
