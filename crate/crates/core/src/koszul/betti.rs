//! Tables of `dim K_{p,q}(C; B, L)` over a finite range.
//!
//! Cells that were not computed (or hit a size cap) are absent, never zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{KoszulComplex, KoszulError, Limits};
use crate::curve::{Divisor, PlaneCurve};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiCell {
    pub p: usize,
    pub q: i64,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettiTable {
    pub curve: String,
    pub b: String,
    pub l: String,
    pub seed: u64,
    pub p_max: usize,
    pub q_range: (i64, i64),
    pub cells: Vec<BettiCell>,
    /// Cells skipped because of a size cap, with the reason.
    pub skipped: Vec<(usize, i64, String)>,
    pub seconds: f64,
}

impl BettiTable {
    /// Computes `K_{p,q}` for `0 <= p <= p_max`, `q` in `q_range` (inclusive).
    /// Size-cap failures leave the cell absent; other errors propagate.
    pub fn compute(
        curve: &PlaneCurve,
        b: &Divisor,
        l: &Divisor,
        p_max: usize,
        q_range: (i64, i64),
        limits: Limits,
        seed: u64,
    ) -> Result<BettiTable, KoszulError> {
        let start = std::time::Instant::now();
        let k = KoszulComplex::new(curve, b, l, limits)?;
        let mut cells = Vec::new();
        let mut skipped = Vec::new();
        for q in q_range.0..=q_range.1 {
            for p in 0..=p_max {
                match k.cohomology_dim(p, q) {
                    Ok(dim) => cells.push(BettiCell { p, q, dim }),
                    Err(e @ KoszulError::SizeCapExceeded { .. }) => skipped.push((p, q, e.to_string())),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(BettiTable {
            curve: curve.name().to_string(),
            b: b.to_string(),
            l: l.to_string(),
            seed,
            p_max,
            q_range,
            cells,
            skipped,
            seconds: start.elapsed().as_secs_f64(),
        })
    }

    pub fn get(&self, p: usize, q: i64) -> Option<usize> {
        self.cells.iter().find(|c| c.p == p && c.q == q).map(|c| c.dim)
    }

    fn grid(&self) -> BTreeMap<(i64, usize), usize> {
        self.cells.iter().map(|c| ((c.q, c.p), c.dim)).collect()
    }

    /// Rows `q`, columns `p`; absent cells are `-`.
    pub fn to_csv(&self) -> String {
        let grid = self.grid();
        let mut out = String::from("q");
        for p in 0..=self.p_max {
            write!(out, ",p={p}").unwrap();
        }
        out.push('\n');
        for q in self.q_range.0..=self.q_range.1 {
            write!(out, "{q}").unwrap();
            for p in 0..=self.p_max {
                match grid.get(&(q, p)) {
                    Some(d) => write!(out, ",{d}").unwrap(),
                    None => out.push_str(",-"),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let grid = self.grid();
        let mut out = format!("K_{{p,q}}(C; B, L) on {}\nB = {}\nL = {}\n", self.curve, self.b, self.l);
        write!(out, "{:>6}", "q\\p").unwrap();
        for p in 0..=self.p_max {
            write!(out, "{p:>7}").unwrap();
        }
        out.push('\n');
        for q in self.q_range.0..=self.q_range.1 {
            write!(out, "{q:>6}").unwrap();
            for p in 0..=self.p_max {
                match grid.get(&(q, p)) {
                    Some(d) => write!(out, "{d:>7}").unwrap(),
                    None => write!(out, "{:>7}", "-").unwrap(),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn absent_cells_are_marked() {
        let c = PlaneCurve::from_terms(Field::prime(101).unwrap(), &[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1)])
            .unwrap();
        let limits = Limits { max_entries: 600, ..Limits::default() };
        let t = BettiTable::compute(&c, &Divisor::zero(), &Divisor::hyperplane(1), 3, (1, 3), limits, 0).unwrap();
        assert_eq!(t.get(1, 3), Some(1));
        assert!(!t.skipped.is_empty());
        let csv = t.to_csv();
        assert!(csv.starts_with("q,p=0,p=1,p=2,p=3\n"));
        assert!(csv.contains('-'));
        assert_eq!(t.get(0, 1), Some(0));
    }
}
