//! Property (N_p) as vanishing of `K_{i,1}(C; L, L)` for `i <= p`.
//!
//! `K_{0,1}(C; L, L)` is the cokernel of `Sym^2 H^0(L) -> H^0(2L)` and
//! `K_{0,2}(C; L, L)` that of `H^0(L) (x) H^0(2L) -> H^0(3L)`; together they
//! witness projective normality in the degrees that matter here.

use serde::{Deserialize, Serialize};

use super::{KoszulComplex, KoszulError, Limits};
use crate::curve::riemann_roch::h1;
use crate::curve::{Divisor, PlaneCurve};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpEntry {
    pub p: usize,
    pub q: i64,
    /// `dim K_{p,q}(C; L, L)`.
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NpVerdict {
    pub p: i64,
    pub holds: bool,
    pub entries: Vec<NpEntry>,
}

impl NpVerdict {
    /// First nonvanishing entry, if any.
    pub fn first_failure(&self) -> Option<&NpEntry> {
        self.entries.iter().find(|e| e.dim != 0)
    }

    pub fn dim(&self, p: usize, q: i64) -> Option<usize> {
        self.entries.iter().find(|e| e.p == p && e.q == q).map(|e| e.dim)
    }
}

pub fn property_np(curve: &PlaneCurve, l: &Divisor, p: i64) -> Result<NpVerdict, KoszulError> {
    property_np_with(curve, l, p, Limits::default())
}

pub fn property_np_with(curve: &PlaneCurve, l: &Divisor, p: i64, limits: Limits) -> Result<NpVerdict, KoszulError> {
    if p < 0 {
        return Ok(NpVerdict { p, holds: true, entries: Vec::new() });
    }
    if h1(curve, l)? > 0 {
        return Err(KoszulError::Special(l.to_string()));
    }
    let k = KoszulComplex::new(curve, l, l, limits)?;
    let mut entries = vec![NpEntry { p: 0, q: 2, dim: k.cohomology_dim(0, 2)? }];
    for i in 0..=p as usize {
        entries.push(NpEntry { p: i, q: 1, dim: k.cohomology_dim(i, 1)? });
    }
    let holds = entries.iter().all(|e| e.dim == 0);
    Ok(NpVerdict { p, holds, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::sampling::{random_class, random_effective};
    use crate::field::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quartic() -> PlaneCurve {
        PlaneCurve::from_terms(Field::prime(101).unwrap(), &[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1)]).unwrap()
    }

    #[test]
    fn vacuous_below_zero() {
        let v = property_np(&quartic(), &Divisor::hyperplane(1), -1).unwrap();
        assert!(v.holds && v.entries.is_empty());
    }

    #[test]
    fn special_bundle_is_rejected() {
        assert!(matches!(property_np(&quartic(), &Divisor::hyperplane(1), 0), Err(KoszulError::Special(_))));
    }

    #[test]
    fn high_degree_holds_and_canonical_plus_xi_fails() {
        let c = quartic();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = random_class(&c, 8, &mut rng).unwrap();
        assert!(property_np(&c, &l, 1).unwrap().holds);
        let xi = random_effective(&c, 3, &mut rng).unwrap();
        let v = property_np(&c, &Divisor::canonical(&c).add(&xi), 1).unwrap();
        assert!(!v.holds);
        assert!(v.dim(1, 1).unwrap() >= 1);
        assert_eq!(v.dim(0, 1), Some(0));
    }
}
