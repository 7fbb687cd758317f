//! Base loci and k-very-ampleness probes.
//!
//! `L` is k-very ample iff no effective `xi` of degree `k + 1` satisfies
//! `h^1(L - xi) > h^1(L)`, i.e. `l(K - L + xi) > l(K - L)`. Failures are
//! certified by an explicit `xi`; success is certified by degree, or for a
//! nonspecial `L` of degree `2g + k - c` by the criterion "`2K - L` is
//! nonspecial and (c-2)-very ample" (for c = 1: nonspecial alone; for c = 2:
//! nonspecial and base-point-free). Everything else is sampled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::riemann_roch::{h1, rr_dim, rr_space};
use super::sampling::support_of;
use super::{CurveError, CurvePoint, Divisor, PlaneCurve};
use crate::form::monomials;
use crate::linalg::Matrix;

/// Degree of the base locus of `|M|`, or `None` when `l(M) = 0`.
///
/// Computed exactly as the corank of `H^0(M) x H^0(tH) -> H^0(M + tH)` with
/// `t d - deg M >= 2g - 1`: the image is `H^0(M + tH - B)` and the target is
/// nonspecial, so the corank equals `deg B`.
pub fn base_locus_degree(curve: &PlaneCurve, m: &Divisor) -> Result<Option<usize>, CurveError> {
    let space = rr_space(curve, m)?;
    if space.dim() == 0 {
        return Ok(None);
    }
    let d = curve.degree() as i64;
    let g = curve.genus() as i64;
    let e = m.degree(curve.degree());
    let t = ((2 * g - 1 + e) as f64 / d as f64).ceil().max(0.0) as u32;
    let n = space.numerator_degree() as u32;
    let mut columns = Vec::new();
    for g_i in space.numerators() {
        for mu in monomials(t) {
            columns.push(curve.normal_form(&g_i.shift(mu)));
        }
    }
    let rank = Matrix::from_columns(curve.field(), curve.plan(n + t).dim(), &columns).rank();
    let target = (e + t as i64 * d - g + 1) as usize;
    debug_assert!(rank <= target);
    Ok(Some(target - rank))
}

/// Points of `candidates` outside the support of `m` where every section
/// of `M` vanishes.
pub fn rational_base_points(
    curve: &PlaneCurve,
    m: &Divisor,
    candidates: &[CurvePoint],
) -> Result<Vec<CurvePoint>, CurveError> {
    let space = rr_space(curve, m)?;
    let f = curve.field();
    Ok(candidates
        .iter()
        .filter(|p| space.is_regular_at(f, p) && space.dim() > 0)
        .filter(|p| space.numerators().iter().all(|g| g.eval(f, &p.coords) == 0))
        .copied()
        .collect())
}

/// `x` is a base point of `|L|` iff `l(L - x) = l(L) > 0`.
pub fn is_base_point(curve: &PlaneCurve, l: &Divisor, x: &CurvePoint) -> Result<bool, CurveError> {
    let full = rr_dim(curve, l)?;
    Ok(full > 0 && rr_dim(curve, &l.sub(&Divisor::point(*x, 1)))? == full)
}

/// Whether `K - D` is very ample for a reduced divisor `D` of six points
/// on a plane sextic (`K = 3H`), or `None` outside that setting.
///
/// `K - D` fails to be very ample iff some `D + xi`, `deg xi = 2`, fails to
/// impose independent conditions on cubics. Eight points fail on cubics iff
/// five are collinear or all eight lie on a conic, so the test reduces to:
/// no three points of `D` collinear and `D` not on a conic.
pub fn sextic_residual_very_ample(curve: &PlaneCurve, d: &Divisor) -> Option<bool> {
    if curve.degree() != 6 || d.twist() != 0 || d.support().len() != 6 {
        return None;
    }
    if d.support().iter().any(|&(p, m)| m != 1 || p.field_degree != curve.field().degree()) {
        return None;
    }
    let f = curve.field();
    let pts: Vec<[u64; 3]> = d.support().iter().map(|(p, _)| p.coords).collect();
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                let m = Matrix::from_rows(f, 3, vec![pts[i].to_vec(), pts[j].to_vec(), pts[k].to_vec()]).expect("3x3");
                if m.rank() < 3 {
                    return Some(false);
                }
            }
        }
    }
    let conic_rows = pts
        .iter()
        .map(|&[x, y, z]| vec![f.mul(x, x), f.mul(x, y), f.mul(x, z), f.mul(y, y), f.mul(y, z), f.mul(z, z)])
        .collect();
    Some(Matrix::from_rows(f, 6, conic_rows).expect("6x6").rank() == 6)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProbeVerdict {
    /// `witness` is an effective divisor of degree k+1 (or, when
    /// `witness_is_class`, a divisor class containing one) with
    /// `h^1(L - witness) > h^1(L)`.
    CertifiedFailure { witness: String, witness_is_class: bool, evidence: String },
    CertifiedSuccess { evidence: String },
    ProbableSuccess { trials: usize, extension_degrees: Vec<u32> },
}

impl ProbeVerdict {
    pub fn is_failure(&self) -> bool {
        matches!(self, ProbeVerdict::CertifiedFailure { .. })
    }

    pub fn is_success(&self) -> bool {
        !self.is_failure()
    }
}

#[derive(Debug, Clone)]
pub struct ProbeOptions {
    pub k: u32,
    pub trials: usize,
    pub seed: u64,
    /// Clifford-regime context `c` with `deg L = 2g + k - c`.
    pub clifford: Option<u32>,
    /// Field degrees to draw random `xi` from (base-changing a prime-field curve).
    pub extension_degrees: Vec<u32>,
}

impl ProbeOptions {
    pub fn new(k: u32, trials: usize, seed: u64) -> Self {
        ProbeOptions { k, trials, seed, clifford: None, extension_degrees: vec![1] }
    }

    pub fn with_clifford(mut self, c: u32) -> Self {
        self.clifford = Some(c);
        self
    }
}

/// Probe with default options: `trials` random reduced `xi` over the base field.
pub fn very_ample_probe(
    curve: &PlaneCurve,
    l: &Divisor,
    k: u32,
    trials: usize,
    seed: u64,
) -> Result<ProbeVerdict, CurveError> {
    very_ample_probe_with(curve, l, &ProbeOptions::new(k, trials, seed))
}

fn failure_if_jumps(
    curve: &PlaneCurve,
    l: &Divisor,
    xi: &Divisor,
    h1_l: usize,
) -> Result<Option<ProbeVerdict>, CurveError> {
    let jumped = h1(curve, &l.sub(xi))?;
    Ok((jumped > h1_l).then(|| ProbeVerdict::CertifiedFailure {
        witness: xi.to_string(),
        witness_is_class: false,
        evidence: format!("h1(L - xi) = {jumped} > h1(L) = {h1_l}"),
    }))
}

pub fn very_ample_probe_with(curve: &PlaneCurve, l: &Divisor, opts: &ProbeOptions) -> Result<ProbeVerdict, CurveError> {
    let g = curve.genus() as i64;
    let k = opts.k as i64;
    let deg = l.degree(curve.degree());
    if deg >= 2 * g + k {
        return Ok(ProbeVerdict::CertifiedSuccess {
            evidence: format!("deg L = {deg} >= 2g + k = {}, so h1(L - xi) = 0 for every xi", 2 * g + k),
        });
    }
    let h1_l = h1(curve, l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let avoid = support_of(&[l]);

    // The formal difference L - K, when it is a point sum of degree <= k+1,
    // is the obvious candidate (it is exact for L = K + xi).
    let formal = l.sub(&Divisor::canonical(curve));
    let positive: Vec<(CurvePoint, i64)> = formal.positive_part();
    let pos_deg: i64 = positive.iter().map(|&(_, m)| m).sum();
    if formal.twist() == 0 && pos_deg > 0 && pos_deg <= k + 1 {
        let pad = super::sampling::random_effective_avoiding(curve, (k + 1 - pos_deg) as usize, &mut rng, &avoid)?;
        let xi = Divisor::new(0, positive).add(&pad);
        if let Some(v) = failure_if_jumps(curve, l, &xi, h1_l)? {
            return Ok(v);
        }
    }

    if let Some(c) = opts.clifford {
        if c >= 1 && h1_l == 0 && deg == 2 * g + k - c as i64 && c <= 2 {
            let two_k_minus_l = Divisor::canonical(curve).scale(2).sub(l);
            let special = rr_dim(curve, &formal)? > 0;
            if special {
                return Ok(ProbeVerdict::CertifiedFailure {
                    witness: formal.to_string(),
                    witness_is_class: true,
                    evidence: format!("2K - L is special: l(L - K) > 0 with deg(L - K) = {}", k + 1 - c as i64),
                });
            }
            if c == 1 {
                return Ok(ProbeVerdict::CertifiedSuccess {
                    evidence: "c = 1: L nonspecial and 2K - L nonspecial".into(),
                });
            }
            match base_locus_degree(curve, &two_k_minus_l)? {
                Some(0) => {
                    return Ok(ProbeVerdict::CertifiedSuccess {
                        evidence: "c = 2: 2K - L nonspecial and base-point-free".into(),
                    })
                }
                Some(b) => {
                    return Ok(ProbeVerdict::CertifiedFailure {
                        witness: formal.to_string(),
                        witness_is_class: true,
                        evidence: format!("c = 2: 2K - L has a base locus of degree {b}"),
                    })
                }
                None => {
                    return Ok(ProbeVerdict::CertifiedFailure {
                        witness: formal.to_string(),
                        witness_is_class: true,
                        evidence: "c = 2: 2K - L has no sections".into(),
                    })
                }
            }
        }
    }

    let mut sampled = Vec::new();
    for &ext in &opts.extension_degrees {
        if ext == curve.field().degree() {
            for _ in 0..opts.trials {
                let xi = super::sampling::random_effective_avoiding(curve, opts.k as usize + 1, &mut rng, &avoid)?;
                if let Some(v) = failure_if_jumps(curve, l, &xi, h1_l)? {
                    return Ok(v);
                }
            }
        } else {
            let big = curve.base_change(ext)?;
            let lifted = Divisor::new(l.twist(), l.support().iter().map(|&(p, m)| (big.embed_point(&p), m)).collect());
            let lifted_avoid = support_of(&[&lifted]);
            let h1_big = h1(&big, &lifted)?;
            for _ in 0..opts.trials {
                let xi = super::sampling::random_effective_avoiding(&big, opts.k as usize + 1, &mut rng, &lifted_avoid)?;
                if let Some(v) = failure_if_jumps(&big, &lifted, &xi, h1_big)? {
                    return Ok(v);
                }
            }
        }
        sampled.push(ext);
    }
    Ok(ProbeVerdict::ProbableSuccess { trials: opts.trials * sampled.len(), extension_degrees: sampled })
}
