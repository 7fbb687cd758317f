//! Smooth plane curves over finite fields: validation, point enumeration,
//! divisors, Riemann-Roch spaces, section products and very-ampleness probes.

pub mod catalog;
pub mod divisor;
pub mod riemann_roch;
pub mod sampling;
pub mod sections;
pub mod very_ample;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, Field, FieldError};
use crate::form::{monomial_count, monomial_exponents, monomial_index, monomials, Exponents, Form};
use crate::linalg::{LinalgError, Matrix};
use crate::upoly::UPoly;

pub use divisor::Divisor;
pub use riemann_roch::{rr_space, RRSpace};
pub use sections::{Section, SectionAlgebra};

/// Fields with at most this many elements get their full point set cached.
const POINT_CACHE_LIMIT: u64 = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("the defining polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("plane curves of degree {0} are not supported (need degree >= 3)")]
    DegreeTooSmall(u32),
    #[error("curve is singular{}", .witness.as_ref().map(|p| format!(" at {p}")).unwrap_or_default())]
    SingularCurve { witness: Option<CurvePoint> },
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("only {found} points exist over GF({order}), {wanted} requested")]
    InsufficientPoints { found: usize, wanted: usize, order: u64 },
    #[error("divisor support point {0} is not on the curve")]
    UnsupportedDivisor(String),
    #[error("could not find auxiliary lines in general position after {0} attempts")]
    DegenerateAuxiliary(usize),
    #[error("sample points degenerate: {0}")]
    SampleDegeneracy(String),
    #[error("inconsistent interpolation system: {0}")]
    InconsistentSystem(String),
    #[error("Riemann-Roch check failed for {divisor}: l(D) = {l_d}, l(K-D) = {l_kd}, deg = {degree}, g = {genus}")]
    RiemannRochViolation { divisor: String, l_d: usize, l_kd: usize, degree: i64, genus: u32 },
    #[error("base change needs a curve over a prime field")]
    BaseChange,
    #[error("sections live on different curves or spaces")]
    Mismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Asserted invariants carried by catalog curves (never computed).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogInvariants {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clifford_index: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_bielliptic: Option<bool>,
}

/// A point of a plane curve, normalized so that its first nonzero
/// coordinate is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CurvePoint {
    pub coords: [Elem; 3],
    /// Extension degree of the field the coordinates live in.
    pub field_degree: u32,
}

impl CurvePoint {
    /// Normalizes projective coordinates. Panics on the zero vector.
    pub fn normalized(f: &Field, coords: [Elem; 3]) -> CurvePoint {
        let lead = coords.iter().copied().find(|&c| c != 0).expect("zero vector is not a projective point");
        let inv = f.inv(lead);
        CurvePoint { coords: coords.map(|c| f.mul(c, inv)), field_degree: f.degree() }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.coords[0], self.coords[1], self.coords[2])?;
        if self.field_degree > 1 {
            write!(f, "@{}", self.field_degree)?;
        }
        Ok(())
    }
}

/// Normal forms modulo the curve equation in one degree.
///
/// The monomial order is lexicographic with a variable priority chosen so
/// that a pure power `v^d` of the equation leads whenever one exists.
#[derive(Debug)]
pub struct ReductionPlan {
    pub degree: u32,
    /// Monomials divisible by the leading monomial, in decreasing order.
    divisible_desc: Vec<usize>,
    /// Standard monomials (not divisible by the leading monomial), by index.
    pub standard: Vec<usize>,
    /// Position of a monomial index inside `standard`, or `usize::MAX`.
    std_pos: Vec<usize>,
}

impl ReductionPlan {
    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    pub fn position(&self, monomial: usize) -> Option<usize> {
        let p = self.std_pos[monomial];
        (p != usize::MAX).then_some(p)
    }

    pub fn standard_exponents(&self) -> impl Iterator<Item = Exponents> + '_ {
        self.standard.iter().map(move |&i| monomial_exponents(self.degree, i))
    }
}

/// A smooth plane curve `F(x, y, z) = 0`.
#[derive(Debug)]
pub struct PlaneCurve {
    name: String,
    field: Field,
    form: Form,
    genus: u32,
    invariants: CatalogInvariants,
    partials: [Form; 3],
    var_order: [usize; 3],
    lead: Exponents,
    /// Terms of `F / lc(F)` other than the leading one.
    tail: Vec<(Exponents, Elem)>,
    plans: Mutex<HashMap<u32, Arc<ReductionPlan>>>,
    points: OnceLock<Vec<CurvePoint>>,
    pub(crate) rr_cache: Mutex<riemann_roch::RrCache>,
}

impl PlaneCurve {
    /// Validates `form` as a smooth plane curve of degree at least 3.
    pub fn new(field: Field, form: Form) -> Result<PlaneCurve, CurveError> {
        let d = form.degree();
        if d < 3 {
            return Err(CurveError::DegreeTooSmall(d));
        }
        if form.is_zero() {
            return Err(CurveError::SingularCurve { witness: None });
        }
        let partials = [form.derivative(&field, 0), form.derivative(&field, 1), form.derivative(&field, 2)];
        let var_order = [1usize, 0, 2]
            .into_iter()
            .chain([0, 1, 2])
            .find(|&v| {
                let mut e = [0; 3];
                e[v] = d;
                form.coeff(e) != 0
            })
            .map(|v| {
                let mut rest = [0usize, 1, 2].into_iter().filter(|&w| w != v);
                [v, rest.next().unwrap(), rest.next().unwrap()]
            })
            .unwrap_or([0, 1, 2]);
        let key = |e: &Exponents| (e[var_order[0]], e[var_order[1]]);
        let (lead, lc) = form.terms().max_by_key(|(e, _)| key(e)).expect("nonzero form");
        let lc_inv = field.inv(lc);
        let tail = form.terms().filter(|(e, _)| *e != lead).map(|(e, c)| (e, field.mul(c, lc_inv))).collect();
        let genus = (d - 1) * (d - 2) / 2;
        let curve = PlaneCurve {
            name: String::new(),
            field,
            form,
            genus,
            invariants: CatalogInvariants::default(),
            partials,
            var_order,
            lead,
            tail,
            plans: Mutex::new(HashMap::new()),
            points: OnceLock::new(),
            rr_cache: Mutex::new(Default::default()),
        };
        if !curve.jacobian_ideal_is_irrelevant() {
            let witness = curve.find_singular_point();
            return Err(CurveError::SingularCurve { witness });
        }
        Ok(curve)
    }

    /// Builds from `(exponents, integer coefficient)` terms.
    pub fn from_terms(field: Field, terms: &[(Exponents, i64)]) -> Result<PlaneCurve, CurveError> {
        let form = Form::from_terms(&field, terms).ok_or(CurveError::NotHomogeneous)?;
        PlaneCurve::new(field, form)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_invariants(mut self, invariants: CatalogInvariants) -> Self {
        self.invariants = invariants;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn invariants(&self) -> &CatalogInvariants {
        &self.invariants
    }

    /// The same curve over GF(p^k). Requires a curve over a prime field.
    pub fn base_change(&self, k: u32) -> Result<PlaneCurve, CurveError> {
        if !self.field.is_prime_field() {
            return Err(CurveError::BaseChange);
        }
        let field = Field::extension(self.field.characteristic(), k)?;
        // Prime-field elements embed as themselves in the packed encoding.
        let form = Form::from_coeffs(self.degree(), self.form.coeffs().to_vec());
        let name = if k == 1 { self.name.clone() } else { format!("{}@{}", self.name, k) };
        Ok(PlaneCurve::new(field, form)?.with_name(name).with_invariants(self.invariants.clone()))
    }

    /// Embeds a point of the base curve into a base change.
    pub fn embed_point(&self, pt: &CurvePoint) -> CurvePoint {
        CurvePoint { coords: pt.coords, field_degree: self.field.degree() }
    }

    pub fn contains(&self, coords: &[Elem; 3]) -> bool {
        self.form.eval(&self.field, coords) == 0
    }

    /// Validates and normalizes a point.
    pub fn point(&self, coords: [Elem; 3]) -> Result<CurvePoint, CurveError> {
        let label = format!("({}:{}:{})", coords[0], coords[1], coords[2]);
        if coords.iter().all(|&c| c == 0) || coords.iter().any(|&c| !self.field.contains(c)) {
            return Err(CurveError::NotOnCurve(label));
        }
        if !self.contains(&coords) {
            return Err(CurveError::NotOnCurve(label));
        }
        Ok(CurvePoint::normalized(&self.field, coords))
    }

    pub fn gradient(&self, coords: &[Elem; 3]) -> [Elem; 3] {
        [
            self.partials[0].eval(&self.field, coords),
            self.partials[1].eval(&self.field, coords),
            self.partials[2].eval(&self.field, coords),
        ]
    }

    /// Smoothness test: the ideal `(F, F_x, F_y, F_z)` has no projective zero
    /// over the algebraic closure iff it contains every form of degree
    /// `3d - 2`.
    fn jacobian_ideal_is_irrelevant(&self) -> bool {
        let d = self.degree();
        let target = 3 * d - 2;
        let rows = monomial_count(target);
        let mut entries = Vec::new();
        let mut col = 0;
        let gens = self.partials.iter().chain(std::iter::once(&self.form));
        for g in gens {
            let terms: Vec<_> = g.terms().collect();
            for mu in monomials(target - g.degree()) {
                for &(e, c) in &terms {
                    entries.push((monomial_index([e[0] + mu[0], e[1] + mu[1], e[2] + mu[2]]), col, c));
                }
                col += 1;
            }
        }
        let m = Matrix::from_triplets(&self.field, rows, col, entries).expect("distinct monomials per column");
        m.rank() == rows
    }

    fn find_singular_point(&self) -> Option<CurvePoint> {
        if self.field.order() > POINT_CACHE_LIMIT {
            return None;
        }
        self.all_points().into_iter().find(|p| self.gradient(&p.coords) == [0, 0, 0])
    }

    /// Plan for reducing degree-`n` forms modulo the curve equation.
    pub fn plan(&self, n: u32) -> Arc<ReductionPlan> {
        let mut plans = self.plans.lock().expect("plan cache poisoned");
        plans.entry(n).or_insert_with(|| Arc::new(self.build_plan(n))).clone()
    }

    fn build_plan(&self, n: u32) -> ReductionPlan {
        let count = monomial_count(n);
        let divides = |e: &Exponents| (0..3).all(|i| e[i] >= self.lead[i]);
        let key = |e: &Exponents| (e[self.var_order[0]], e[self.var_order[1]]);
        let mut divisible: Vec<(usize, Exponents)> =
            (0..count).map(|i| (i, monomial_exponents(n, i))).filter(|(_, e)| divides(e)).collect();
        divisible.sort_by(|a, b| key(&b.1).cmp(&key(&a.1)));
        let mut std_pos = vec![usize::MAX; count];
        let mut standard = Vec::new();
        for i in 0..count {
            if !divides(&monomial_exponents(n, i)) {
                std_pos[i] = standard.len();
                standard.push(i);
            }
        }
        ReductionPlan { degree: n, divisible_desc: divisible.into_iter().map(|(i, _)| i).collect(), standard, std_pos }
    }

    /// Normal form of a form modulo `F`, as coordinates on the standard monomials.
    pub fn normal_form(&self, g: &Form) -> Vec<Elem> {
        let plan = self.plan(g.degree());
        let mut c = g.coeffs().to_vec();
        self.reduce_in_place(&plan, &mut c);
        plan.standard.iter().map(|&i| c[i]).collect()
    }

    fn reduce_in_place(&self, plan: &ReductionPlan, c: &mut [Elem]) {
        let f = &self.field;
        for &idx in &plan.divisible_desc {
            let v = c[idx];
            if v == 0 {
                continue;
            }
            c[idx] = 0;
            let e = monomial_exponents(plan.degree, idx);
            let q = [e[0] - self.lead[0], e[1] - self.lead[1], e[2] - self.lead[2]];
            for &(t, tc) in &self.tail {
                let j = monomial_index([q[0] + t[0], q[1] + t[1], q[2] + t[2]]);
                c[j] = f.sub(c[j], f.mul(v, tc));
            }
        }
    }

    /// Lifts standard-monomial coordinates back to a form.
    pub fn lift(&self, degree: u32, coords: &[Elem]) -> Form {
        let plan = self.plan(degree);
        let mut out = vec![0; monomial_count(degree)];
        for (k, &i) in plan.standard.iter().enumerate() {
            out[i] = coords[k];
        }
        Form::from_coeffs(degree, out)
    }

    /// Restriction of `F` to the line `(x0 : y : 1)`, as a polynomial in `y`.
    fn fiber_poly(&self, x0: Elem) -> UPoly {
        let f = &self.field;
        let mut coeffs = vec![0; self.degree() as usize + 1];
        for (e, c) in self.form.terms() {
            let v = f.mul(c, f.pow(x0, e[0] as u64));
            coeffs[e[1] as usize] = f.add(coeffs[e[1] as usize], v);
        }
        UPoly::new(coeffs)
    }

    fn points_at_infinity(&self) -> Vec<CurvePoint> {
        let f = &self.field;
        let mut out = Vec::new();
        // (x : 1 : 0)
        let mut coeffs = vec![0; self.degree() as usize + 1];
        for (e, c) in self.form.terms() {
            if e[2] == 0 {
                coeffs[e[0] as usize] = f.add(coeffs[e[0] as usize], c);
            }
        }
        for x in UPoly::new(coeffs).roots(f) {
            out.push(CurvePoint::normalized(f, [x, 1, 0]));
        }
        if self.contains(&[1, 0, 0]) {
            out.push(CurvePoint::normalized(f, [1, 0, 0]));
        }
        out
    }

    fn affine_points_over(&self, x0: Elem) -> Vec<CurvePoint> {
        let f = &self.field;
        let poly = self.fiber_poly(x0);
        if poly.is_zero() {
            // The whole line x = x0 z lies on the curve; impossible for a smooth curve.
            return Vec::new();
        }
        poly.roots(f).into_iter().map(|y| CurvePoint::normalized(f, [x0, y, 1])).collect()
    }

    /// Up to `max_count` points over the curve's own field, sweeping `x`
    /// through the field in packed order, then the line at infinity.
    pub fn points(&self, max_count: usize) -> Vec<CurvePoint> {
        let mut out = Vec::new();
        if max_count == 0 {
            return out;
        }
        for x0 in self.field.elements() {
            for p in self.affine_points_over(x0) {
                out.push(p);
                if out.len() == max_count {
                    return out;
                }
            }
        }
        for p in self.points_at_infinity() {
            out.push(p);
            if out.len() == max_count {
                return out;
            }
        }
        out
    }

    /// Every point over the curve's field (cached; small fields only).
    pub fn all_points(&self) -> Vec<CurvePoint> {
        assert!(self.field.order() <= POINT_CACHE_LIMIT, "field too large for full enumeration");
        self.points.get_or_init(|| self.points(usize::MAX)).clone()
    }

    /// `count` distinct random points accepted by `keep`.
    pub fn random_points<R: Rng + ?Sized>(
        &self,
        count: usize,
        rng: &mut R,
        keep: impl Fn(&CurvePoint) -> bool,
    ) -> Result<Vec<CurvePoint>, CurveError> {
        let mut out: Vec<CurvePoint> = Vec::with_capacity(count);
        if count == 0 {
            return Ok(out);
        }
        if self.field.order() <= POINT_CACHE_LIMIT {
            let all = self.points.get_or_init(|| self.points(usize::MAX));
            let mut pool: Vec<&CurvePoint> = all.iter().filter(|p| keep(p)).collect();
            if pool.len() < count {
                return Err(CurveError::InsufficientPoints {
                    found: pool.len(),
                    wanted: count,
                    order: self.field.order(),
                });
            }
            pool.shuffle(rng);
            return Ok(pool.into_iter().take(count).copied().collect());
        }
        let mut attempts = 0usize;
        while out.len() < count {
            attempts += 1;
            if attempts > 1000 * (count + 10) {
                return Err(CurveError::InsufficientPoints { found: out.len(), wanted: count, order: self.field.order() });
            }
            let x0 = self.field.random(rng);
            let candidates = self.affine_points_over(x0);
            if let Some(p) = candidates.choose(rng) {
                if keep(p) && !out.contains(p) {
                    out.push(*p);
                }
            }
        }
        Ok(out)
    }
}

/// Points of `curve` over GF(p^k): the curve's own field when `k` matches its
/// degree, otherwise a base change of a prime-field curve.
pub fn rational_points(curve: &PlaneCurve, k: u32, max_count: usize) -> Result<Vec<CurvePoint>, CurveError> {
    if max_count == 0 {
        return Ok(Vec::new());
    }
    let pts = if k == curve.field().degree() {
        curve.points(max_count)
    } else {
        curve.base_change(k)?.points(max_count)
    };
    if pts.len() < max_count && max_count != usize::MAX {
        return Err(CurveError::InsufficientPoints {
            found: pts.len(),
            wanted: max_count,
            order: curve.field().order(),
        });
    }
    Ok(pts)
}
