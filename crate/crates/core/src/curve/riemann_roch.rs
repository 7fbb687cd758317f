//! Riemann-Roch spaces `L(D)` on a smooth plane curve.
//!
//! Write `D = a H + D+ - D-` with `M = deg D+`. For every point `P_i` of `D+`
//! (multiplicity `m_i`) pick two lines through it, `l_i` and `l'_i`, and set
//! `H1 = prod l_i^{m_i}`, `H2 = prod l'_i^{m_i}`. A rational function `G1/H1`
//! with `deg G1 = a + M` lies in `L(D)` exactly when
//!
//! * it also equals some `G2/H2` on the curve (`G1 H2 - G2 H1` is a multiple
//!   of `F`), which confines its poles to `gcd(div H1, div H2) = D+` as long
//!   as the residual intersections of the two line families are disjoint;
//! * `G1` vanishes to order `n_Q` at each point `Q` of `D-`.
//!
//! Both conditions are linear in `(G1, G2)`; the residual intersection
//! points never have to be computed, so they may live in any extension.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{CurveError, CurvePoint, Divisor, PlaneCurve};
use crate::field::{Elem, Field};
use crate::form::{Form, PowerTable};
use crate::linalg::Matrix;
use crate::series::{monomial_series, Branch};

/// Line-pair resampling budget before giving up.
pub const MAX_AUXILIARY_ATTEMPTS: usize = 32;

/// Cached spaces are dropped wholesale past this many entries.
const CACHE_LIMIT: usize = 4096;

/// A basis of `L(D)`: functions `numerators[i] / denominator`, homogeneous of
/// degree `twist(D)`.
#[derive(Debug, Clone)]
pub struct RRSpace {
    divisor: Divisor,
    denominator: Form,
    numerators: Vec<Form>,
    numerator_degree: i64,
}

impl RRSpace {
    pub fn dim(&self) -> usize {
        self.numerators.len()
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn denominator(&self) -> &Form {
        &self.denominator
    }

    pub fn numerators(&self) -> &[Form] {
        &self.numerators
    }

    /// `a + M`; may be negative for the zero space.
    pub fn numerator_degree(&self) -> i64 {
        self.numerator_degree
    }

    /// Whether every basis function has a well-defined value at `p` that is
    /// also a faithful section value (no denominator zero, off the support).
    pub fn is_regular_at(&self, f: &Field, p: &CurvePoint) -> bool {
        self.divisor.multiplicity(p) == 0 && self.denominator.eval(f, &p.coords) != 0
    }

    /// Values of the basis functions at a regular point.
    pub fn eval_basis(&self, f: &Field, p: &CurvePoint) -> Vec<Elem> {
        if self.numerators.is_empty() {
            return Vec::new();
        }
        let den = self.denominator.eval(f, &p.coords);
        assert!(den != 0, "evaluation at a denominator zero");
        let inv = f.inv(den);
        let deg = self.numerators[0].degree();
        let pows = PowerTable::new(f, &p.coords, deg);
        self.numerators
            .iter()
            .map(|g| {
                let v = g.terms().fold(0, |acc, (e, c)| f.add(acc, f.mul(c, pows.monomial(f, e))));
                f.mul(v, inv)
            })
            .collect()
    }

    /// Numerator of the combination `sum coords[i] * basis[i]`.
    pub fn combine(&self, f: &Field, coords: &[Elem]) -> Form {
        assert_eq!(coords.len(), self.dim());
        let deg = self.numerator_degree.max(0) as u32;
        coords
            .iter()
            .zip(&self.numerators)
            .fold(Form::zero(deg), |acc, (&c, g)| if c == 0 { acc } else { acc.add(f, &g.scale(f, c)) })
    }
}

/// Cache of raw (unverified) spaces plus the set of divisors whose
/// Riemann-Roch identity has been checked.
#[derive(Debug, Default)]
pub(crate) struct RrCache {
    raw: HashMap<Divisor, Arc<RRSpace>>,
    verified: HashSet<Divisor>,
}

/// `L(D)`, with the Riemann-Roch identity `l(D) - l(K-D) = deg D - g + 1`
/// checked on construction.
pub fn rr_space(curve: &PlaneCurve, d: &Divisor) -> Result<Arc<RRSpace>, CurveError> {
    validate_support(curve, d)?;
    let space = raw_space(curve, d)?;
    if curve.rr_cache.lock().expect("cache poisoned").verified.contains(d) {
        return Ok(space);
    }
    let g = curve.genus() as i64;
    let deg = d.degree(curve.degree());
    let dual = Divisor::canonical(curve).sub(d);
    let l_kd = if dual.degree(curve.degree()) < 0 { 0 } else { raw_space(curve, &dual)?.dim() };
    let l_d = space.dim();
    if l_d as i64 - l_kd as i64 != deg - g + 1 {
        return Err(CurveError::RiemannRochViolation {
            divisor: d.to_string(),
            l_d,
            l_kd,
            degree: deg,
            genus: curve.genus(),
        });
    }
    curve.rr_cache.lock().expect("cache poisoned").verified.insert(d.clone());
    Ok(space)
}

/// `l(D)`; zero without any computation when `deg D < 0`.
pub fn rr_dim(curve: &PlaneCurve, d: &Divisor) -> Result<usize, CurveError> {
    if d.degree(curve.degree()) < 0 {
        validate_support(curve, d)?;
        return Ok(0);
    }
    Ok(rr_space(curve, d)?.dim())
}

/// `h^1(D) = l(K - D)`.
pub fn h1(curve: &PlaneCurve, d: &Divisor) -> Result<usize, CurveError> {
    rr_dim(curve, &Divisor::canonical(curve).sub(d))
}

fn validate_support(curve: &PlaneCurve, d: &Divisor) -> Result<(), CurveError> {
    for (p, _) in d.support() {
        if p.field_degree != curve.field().degree() || !curve.contains(&p.coords) {
            return Err(CurveError::UnsupportedDivisor(p.to_string()));
        }
    }
    Ok(())
}

/// Deterministic RNG keyed by the curve, a purpose tag and a divisor list.
pub(crate) fn keyed_rng(curve: &PlaneCurve, tag: &str, divisors: &[&Divisor]) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(curve.field().order().to_le_bytes());
    for &c in curve.form().coeffs() {
        h.update(c.to_le_bytes());
    }
    h.update(tag.as_bytes());
    for d in divisors {
        h.update(d.to_string().as_bytes());
        h.update([0u8]);
    }
    ChaCha8Rng::from_seed(h.finalize().into())
}

fn raw_space(curve: &PlaneCurve, d: &Divisor) -> Result<Arc<RRSpace>, CurveError> {
    if let Some(s) = curve.rr_cache.lock().expect("cache poisoned").raw.get(d) {
        return Ok(s.clone());
    }
    let space = Arc::new(compute(curve, d)?);
    let mut cache = curve.rr_cache.lock().expect("cache poisoned");
    if cache.raw.len() >= CACHE_LIMIT {
        cache.raw.clear();
        cache.verified.clear();
    }
    cache.raw.insert(d.clone(), space.clone());
    Ok(space)
}

fn empty(d: &Divisor, numerator_degree: i64) -> RRSpace {
    RRSpace { divisor: d.clone(), denominator: Form::one(), numerators: Vec::new(), numerator_degree }
}

fn cross(f: &Field, a: &[Elem; 3], b: &[Elem; 3]) -> [Elem; 3] {
    [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ]
}

fn dot(f: &Field, a: &[Elem; 3], b: &[Elem; 3]) -> Elem {
    (0..3).fold(0, |acc, i| f.add(acc, f.mul(a[i], b[i])))
}

/// A random line through `p` (as a coefficient vector).
fn line_through<R: Rng>(f: &Field, p: &CurvePoint, rng: &mut R) -> [Elem; 3] {
    let chart = p.coords.iter().position(|&c| c != 0).expect("projective point");
    let others: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
    loop {
        let (alpha, beta) = (f.random(rng), f.random(rng));
        if alpha == 0 && beta == 0 {
            continue;
        }
        let mut l = [0; 3];
        l[others[0]] = alpha;
        l[others[1]] = beta;
        l[chart] = f.neg(f.add(f.mul(alpha, p.coords[others[0]]), f.mul(beta, p.coords[others[1]])));
        return l;
    }
}

/// Chooses the two line families point by point, redrawing only the pair
/// of lines through the current point; `None` if some point exhausts its
/// attempts.
fn choose_lines<R: Rng>(
    curve: &PlaneCurve,
    positive: &[(CurvePoint, i64)],
    all_support: &[CurvePoint],
    rng: &mut R,
) -> Option<(Vec<[Elem; 3]>, Vec<[Elem; 3]>)> {
    let f = curve.field();
    let avoids_others = |l: &[Elem; 3], own: &CurvePoint| {
        all_support.iter().all(|q| q == own || dot(f, l, &q.coords) != 0)
    };
    let meets_off_curve = |a: &[Elem; 3], b: &[Elem; 3]| {
        let x = cross(f, a, b);
        x != [0, 0, 0] && !curve.contains(&x)
    };
    let mut first: Vec<[Elem; 3]> = Vec::new();
    let mut second: Vec<[Elem; 3]> = Vec::new();
    for (p, _) in positive {
        let tangent = curve.gradient(&p.coords);
        let found = (0..MAX_AUXILIARY_ATTEMPTS).find_map(|_| {
            let l1 = line_through(f, p, rng);
            let l2 = line_through(f, p, rng);
            let ok = avoids_others(&l1, p)
                && avoids_others(&l2, p)
                && cross(f, &l2, &tangent) != [0, 0, 0]
                && cross(f, &l1, &l2) != [0, 0, 0]
                && first.iter().zip(&second).all(|(a, b)| meets_off_curve(a, &l2) && meets_off_curve(&l1, b));
            ok.then_some((l1, l2))
        })?;
        first.push(found.0);
        second.push(found.1);
    }
    Some((first, second))
}

fn product_of_lines(f: &Field, lines: &[[Elem; 3]], mults: &[i64]) -> Form {
    lines.iter().zip(mults).fold(Form::one(), |acc, (l, &m)| acc.mul(f, &Form::linear(*l).pow(f, m as u32)))
}

fn compute(curve: &PlaneCurve, d: &Divisor) -> Result<RRSpace, CurveError> {
    let f = curve.field();
    let positive = d.positive_part();
    let negative = d.negative_part();
    let big_m: i64 = positive.iter().map(|&(_, m)| m).sum();
    let n = d.twist() + big_m;
    if n < 0 || d.degree(curve.degree()) < 0 {
        return Ok(empty(d, n));
    }
    let n = n as u32;
    let mut rng = keyed_rng(curve, "rr", &[d]);
    let support: Vec<CurvePoint> = d.support().iter().map(|&(p, _)| p).collect();
    let plan_n = curve.plan(n);
    let s1 = plan_n.dim();
    let std_exps: Vec<_> = plan_n.standard_exponents().collect();

    let (h1, h2) = if big_m == 0 {
        (Form::one(), None)
    } else {
        let mut chosen = None;
        for _ in 0..MAX_AUXILIARY_ATTEMPTS {
            if let Some(lines) = choose_lines(curve, &positive, &support, &mut rng) {
                chosen = Some(lines);
                break;
            }
        }
        let (l1, l2) = chosen.ok_or(CurveError::DegenerateAuxiliary(MAX_AUXILIARY_ATTEMPTS))?;
        let mults: Vec<i64> = positive.iter().map(|&(_, m)| m).collect();
        (product_of_lines(f, &l1, &mults), Some(product_of_lines(f, &l2, &mults)))
    };

    let mut entries: Vec<(usize, usize, Elem)> = Vec::new();
    let mut row = 0;
    let cols = if h2.is_some() { 2 * s1 } else { s1 };
    if let Some(h2) = &h2 {
        // NF(G1 H2) - NF(G2 H1) = 0 in degree n + M.
        let target_dim = curve.plan(n + big_m as u32).dim();
        for (j, &e) in std_exps.iter().enumerate() {
            for (r, v) in curve.normal_form(&h2.shift(e)).into_iter().enumerate() {
                if v != 0 {
                    entries.push((r, j, v));
                }
            }
            for (r, v) in curve.normal_form(&h1.shift(e)).into_iter().enumerate() {
                if v != 0 {
                    entries.push((r, s1 + j, f.neg(v)));
                }
            }
        }
        row = target_dim;
    }
    // ord_Q(G1) >= n_Q at every point of D-.
    for &(q, mult) in &negative {
        let mult = mult as usize;
        let prec = mult + 2;
        let branch = Branch::expand(f, curve.form(), &q.coords, prec);
        let tables = branch.power_tables(f, n);
        for (j, &e) in std_exps.iter().enumerate() {
            let s = monomial_series(f, &tables, e);
            debug_assert_eq!(s.precision(), prec);
            for (t, &v) in s.coeffs().iter().take(mult).enumerate() {
                if v != 0 {
                    entries.push((row + t, j, v));
                }
            }
        }
        row += mult;
    }
    let kernel = if row == 0 {
        (0..cols)
            .map(|j| {
                let mut v = vec![0; cols];
                v[j] = 1;
                v
            })
            .collect()
    } else {
        Matrix::from_triplets(f, row, cols, entries)?.kernel_basis()
    };
    let numerators: Vec<Form> = kernel.iter().map(|v| curve.lift(n, &v[..s1])).collect();
    debug_assert_eq!(
        Matrix::from_columns(f, s1, &kernel.iter().map(|v| v[..s1].to_vec()).collect::<Vec<_>>()).rank(),
        kernel.len(),
        "numerator projection must be injective"
    );
    Ok(RRSpace { divisor: d.clone(), denominator: h1, numerators, numerator_degree: n as i64 })
}
