//! Engine results against independent computations: brute-force point
//! counts, section counts of `aH - sum P_i` from monomial evaluation,
//! Euler characteristics of Koszul diagonals, and hand-checked plane
//! configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secant_core::curve::catalog::Catalog;
use secant_core::curve::riemann_roch::rr_dim;
use secant_core::curve::sampling::random_class;
use secant_core::curve::very_ample::sextic_residual_very_ample;
use secant_core::curve::{CurvePoint, Divisor, PlaneCurve};
use secant_core::field::{Elem, Field};
use secant_core::koszul::{KoszulComplex, Limits};
use secant_core::linalg::Matrix;

fn monomials(a: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for i in (0..=a).rev() {
        for j in (0..=a - i).rev() {
            out.push([i, j, a - i - j]);
        }
    }
    out
}

fn eval_monomial(f: &Field, m: [u32; 3], p: &[Elem; 3]) -> Elem {
    (0..3).fold(f.one(), |acc, i| f.mul(acc, f.pow(p[i], m[i] as u64)))
}

/// Evaluates the catalog polynomial directly from its coefficient list.
fn on_curve(f: &Field, coeffs: &[[u64; 4]], p: &[Elem; 3]) -> bool {
    coeffs.iter().fold(f.zero(), |acc, &[i, j, k, c]| {
        f.add(acc, f.mul(f.from_i64(c as i64), eval_monomial(f, [i as u32, j as u32, k as u32], p)))
    }) == 0
}

#[test]
fn point_counts_match_brute_force() {
    let catalog = Catalog::shipped();
    for name in ["fermat-quartic-101", "random-quartic-1009", "fermat-sextic-1009"] {
        let entry = catalog.get(name).unwrap();
        let curve = entry.build().unwrap();
        let f = curve.field().clone();
        let q = f.order();
        let mut count = 0usize;
        for x in 0..q {
            for y in 0..q {
                count += on_curve(&f, &entry.coefficients, &[x, y, 1]) as usize;
            }
        }
        for x in 0..q {
            count += on_curve(&f, &entry.coefficients, &[x, 1, 0]) as usize;
        }
        count += on_curve(&f, &entry.coefficients, &[1, 0, 0]) as usize;
        let engine = curve.all_points();
        assert_eq!(engine.len(), count, "{name}");
        assert!(engine.iter().all(|p| on_curve(&f, &entry.coefficients, &p.coords)));
    }
}

/// `h0(aH - P_1 - ... - P_n)` for `a < deg C`: forms of degree `a` (none
/// divisible by the equation) vanishing at the points.
fn h0_oracle(f: &Field, a: u32, pts: &[CurvePoint]) -> usize {
    let mons = monomials(a);
    let rows = pts.iter().map(|p| mons.iter().map(|&m| eval_monomial(f, m, &p.coords)).collect()).collect();
    mons.len() - Matrix::from_rows(f, mons.len(), rows).unwrap().rank()
}

#[test]
fn sections_vanishing_at_points() {
    let catalog = Catalog::shipped();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["fermat-quartic-101", "random-quartic-1009", "random-sextic-1009"] {
        let curve = catalog.curve(name).unwrap();
        let f = curve.field().clone();
        for _ in 0..25 {
            let a = rng.gen_range(1..curve.degree());
            let n = rng.gen_range(0..=(a as usize + 1) * (a as usize + 2) / 2 + 1);
            let pts = curve.random_points(n, &mut rng, |_| true).unwrap();
            let d = Divisor::hyperplane(a as i64).sub(&Divisor::reduced(&pts));
            assert_eq!(rr_dim(&curve, &d).unwrap(), h0_oracle(&f, a, &pts), "{name}: {d}");
        }
    }
}

/// Collinear triples, including the whole line `y = 0` meeting the curve
/// in six rational points.
#[test]
fn sextic_residual_configurations() {
    let curve = Catalog::shipped().curve("fermat-sextic-1009").unwrap();
    let f = curve.field().clone();
    let on_line: Vec<CurvePoint> = curve.all_points().into_iter().filter(|p| p.coords[1] == 0).collect();
    assert_eq!(on_line.len(), 6, "1009 = 1 mod 12, so z^6 = -1 has six roots");
    let d = Divisor::reduced(&on_line);
    assert_eq!(sextic_residual_very_ample(&curve, &d), Some(false));

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let others = curve.random_points(3, &mut rng, |p| p.coords[1] != 0).unwrap();
    let mut mixed = on_line[..3].to_vec();
    mixed.extend(&others);
    assert_eq!(sextic_residual_very_ample(&curve, &Divisor::reduced(&mixed)), Some(false));

    // Six points on a conic through five random ones.
    let all = curve.all_points();
    let conic_row = |p: &CurvePoint| {
        let [x, y, z] = p.coords;
        vec![f.mul(x, x), f.mul(x, y), f.mul(x, z), f.mul(y, y), f.mul(y, z), f.mul(z, z)]
    };
    let mut found = false;
    for _ in 0..200 {
        let five = curve.random_points(5, &mut rng, |_| true).unwrap();
        let m = Matrix::from_rows(&f, 6, five.iter().map(conic_row).collect()).unwrap();
        let kernel = m.kernel_basis();
        if kernel.len() != 1 {
            continue;
        }
        let sixth = all.iter().find(|p| {
            !five.contains(p)
                && conic_row(p).iter().zip(&kernel[0]).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b))) == 0
        });
        if let Some(&sixth) = sixth {
            let mut six = five.clone();
            six.push(sixth);
            let no_triple = (0..6).all(|i| {
                (i + 1..6).all(|j| {
                    (j + 1..6).all(|k| {
                        Matrix::from_rows(&f, 3, vec![six[i].coords.to_vec(), six[j].coords.to_vec(), six[k].coords.to_vec()])
                            .unwrap()
                            .rank()
                            == 3
                    })
                })
            });
            if no_triple {
                assert_eq!(sextic_residual_very_ample(&curve, &Divisor::reduced(&six)), Some(false));
                found = true;
                break;
            }
        }
    }
    assert!(found, "no six rational points on a conic found");

    // General position: accepted, and h0(K - D) = 10 - 6 = 4.
    let general = curve.random_points(6, &mut rng, |_| true).unwrap();
    let d = Divisor::reduced(&general);
    if sextic_residual_very_ample(&curve, &d) == Some(true) {
        assert_eq!(rr_dim(&curve, &Divisor::canonical(&curve).sub(&d)).unwrap(), 4);
    }
    assert_eq!(sextic_residual_very_ample(&curve, &Divisor::hyperplane(1)), None);
}

/// On the diagonal `p + q = n` the alternating sum of chain dimensions equals
/// the alternating sum of cohomology dimensions.
#[test]
fn koszul_euler_characteristic() {
    let curve: PlaneCurve = Catalog::shipped().curve("fermat-quartic-101").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..8 {
        let l = random_class(&curve, rng.gen_range(4..=7), &mut rng).unwrap();
        let b = random_class(&curve, rng.gen_range(-3..=3), &mut rng).unwrap();
        let k = KoszulComplex::new(&curve, &b, &l, Limits::default()).unwrap();
        let r = k.dim_v();
        for n in 0..=3i64 {
            let (mut chain, mut homology) = (0i64, 0i64);
            for p in 0..=r {
                let sign = if p % 2 == 0 { 1 } else { -1 };
                let q = n - p as i64;
                chain += sign * k.piece_dim(p, q).unwrap() as i64;
                homology += sign * k.cohomology_dim(p, q).unwrap() as i64;
            }
            assert_eq!(chain, homology, "B = {b}, L = {l}, n = {n}");
        }
    }
}

/// The hyperplane section ring of a plane curve of degree d is
/// `S / (F)`, so `K_{p,q}(C; 0, H)` is 1 at (0,0) and (1, d-1), else 0.
#[test]
fn hypersurface_betti_numbers() {
    let catalog = Catalog::shipped();
    for name in ["fermat-quartic-101", "random-sextic-1009"] {
        let curve = catalog.curve(name).unwrap();
        let d = curve.degree() as i64;
        let k = KoszulComplex::new(&curve, &Divisor::zero(), &Divisor::hyperplane(1), Limits::default()).unwrap();
        for p in 0..=3usize {
            for q in 0..=d {
                let expected = usize::from((p, q) == (0, 0) || (p, q) == (1, d - 1));
                assert_eq!(k.cohomology_dim(p, q).unwrap(), expected, "{name}: K_{p},{q}");
            }
        }
    }
}
