//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p secant-core --test acceptance`. Exits non-zero if
//! any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secant_core::conjecture::{run_campaign, CheckKind, ExperimentConfig, ExperimentReport};
use secant_core::curve::catalog::Catalog;
use secant_core::curve::riemann_roch::{h1, rr_dim};
use secant_core::curve::sampling::random_class;
use secant_core::curve::{Divisor, PlaneCurve};
use secant_core::field::{Elem, Field};
use secant_core::koszul::{KoszulComplex, Limits};
use secant_core::linalg::Matrix;
use secant_core::predict::{expected_h0, secant_degree, sym_product_dims};

const QUARTIC: &str = "fermat-quartic-101";
const SEXTIC: &str = "fermat-sextic-1009";

// Runtime ceilings per criterion.
const LIMIT_C2: Duration = Duration::from_secs(5 * 60);
const LIMIT_QUARTIC: Duration = Duration::from_secs(2 * 60);
const LIMIT_SEXTIC_NP: Duration = Duration::from_secs(10 * 60);

// Sample counts.
const C2_TRIALS: usize = 10;
const DUALITY_TRIALS: usize = 20;
const FORWARD_TRIALS: usize = 20;
const CONVERSE_TRIALS: usize = 10;
const SEXTIC_TRIALS: usize = 5;
const VANISHING_TRIALS: usize = 50;
const GREEN_TRIALS: usize = 100;
const DD_PAIRS: usize = 50;
const RR_DIVISORS: usize = 200;
const RANK_MATRICES: usize = 100;
const DETERMINISM_CAMPAIGNS: usize = 3;
const H0_SAMPLES: usize = 20;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn campaign(curve: &str, c: u32, p: &[u32], trials: usize, check: CheckKind, degree: Option<i64>) -> ExperimentReport {
    let mut cfg = ExperimentConfig::new(curve, c, p, trials, 0, &[check]);
    cfg.degree = degree;
    run_campaign(&cfg, &Catalog::shipped()).expect("campaign runs")
}

fn no_errors(r: &ExperimentReport) -> Result<(), String> {
    ensure(r.summary.error == 0 && r.summary.skipped == 0, || {
        format!("{} error and {} skipped records", r.summary.error, r.summary.skipped)
    })
}

fn dims_of(r: &ExperimentReport, key: &str) -> Vec<i64> {
    r.records.iter().filter_map(|t| t.dims.get(key).copied()).collect()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() <= limit, || format!("took {:.1}s > {}s", start.elapsed().as_secs_f64(), limit.as_secs()))
}

fn c2_fiber(p: u32, expected: i64) -> Verdict {
    let start = Instant::now();
    let r = campaign(SEXTIC, 2, &[p], C2_TRIALS, CheckKind::C2Fiber, None);
    no_errors(&r)?;
    let dims = dims_of(&r, "K_2,1(K-L,L-D)");
    ensure(dims.len() == C2_TRIALS && dims.iter().all(|&d| d == expected), || format!("dimensions {dims:?}"))?;
    for t in &r.records {
        ensure(t.dims["h0(D)"] == 1, || format!("h0(D) = {} in trial {}", t.dims["h0(D)"], t.trial))?;
    }
    within(start, LIMIT_C2)?;
    Ok(format!("{C2_TRIALS}/{C2_TRIALS} trials with dim = {expected}, {:.1}s", start.elapsed().as_secs_f64()))
}

fn criterion_1() -> Verdict {
    c2_fiber(6, 1)
}

fn criterion_2() -> Verdict {
    c2_fiber(5, 0)
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let r = campaign(QUARTIC, 1, &[1, 2], DUALITY_TRIALS, CheckKind::Duality, None);
    no_errors(&r)?;
    for t in &r.records {
        let (a, b) = (t.dims["K_p,1(L,L)"], t.dims["K_g-c,1(K-L,L)"]);
        ensure(a == b, || format!("p={} trial {}: {a} != {b}", t.p, t.trial))?;
    }
    ensure(r.records.len() == 2 * DUALITY_TRIALS, || "missing records".into())?;
    within(start, LIMIT_QUARTIC)?;
    Ok(format!("{} equalities, {:.1}s", r.records.len(), start.elapsed().as_secs_f64()))
}

fn criterion_4() -> Verdict {
    // The criterion fixes deg L = 8 rather than the regime formula.
    let start = Instant::now();
    let r = campaign(QUARTIC, 1, &[1], FORWARD_TRIALS, CheckKind::SecantForward, Some(8));
    no_errors(&r)?;
    for t in &r.records {
        ensure(t.probe.as_ref().is_some_and(|v| v.is_success()), || format!("trial {} failed the probe", t.trial))?;
        ensure(t.dims["K_1,1(L,L)"] == 0, || format!("trial {}: K_1,1 = {}", t.trial, t.dims["K_1,1(L,L)"]))?;
    }
    ensure(r.records.len() == FORWARD_TRIALS, || "missing records".into())?;
    within(start, LIMIT_QUARTIC)?;
    Ok(format!("{FORWARD_TRIALS}/{FORWARD_TRIALS} with K_1,1 = 0, {:.1}s", start.elapsed().as_secs_f64()))
}

fn criterion_5() -> Verdict {
    let catalog = Catalog::shipped();
    let curve = catalog.curve(QUARTIC).unwrap();
    let g = curve.genus() as usize;
    let r = campaign(QUARTIC, 1, &[1, 2], CONVERSE_TRIALS, CheckKind::SecantConverse, None);
    no_errors(&r)?;
    for t in &r.records {
        let key = format!("K_{},1(L,L)", t.p);
        ensure(t.probe.as_ref().is_some_and(|v| v.is_failure()), || format!("p={} trial {}: no certificate", t.p, t.trial))?;
        ensure(t.dims[&key] >= 1, || format!("p={} trial {}: {key} = 0", t.p, t.trial))?;
        // Independent witness check: xi imposes only p + 1 conditions on L = K + xi.
        let l = Divisor::parse(&curve, &t.divisors["L"]).unwrap();
        let xi = Divisor::parse(&curve, &t.divisors["xi"]).unwrap();
        let (h0_l, h0_res) = (rr_dim(&curve, &l).unwrap(), rr_dim(&curve, &l.sub(&xi)).unwrap());
        ensure(h0_res == g && h0_l == g + t.p as usize + 1, || format!("h0(L) = {h0_l}, h0(L - xi) = {h0_res}"))?;
    }
    Ok(format!("{} certified failures with K_p,1 >= 1", r.records.len()))
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let r = campaign(SEXTIC, 2, &[1], SEXTIC_TRIALS, CheckKind::SecantForward, None);
    no_errors(&r)?;
    for t in &r.records {
        ensure(t.dims["h0(L)"] == 11, || format!("trial {}: h0(L) = {}", t.trial, t.dims["h0(L)"]))?;
        ensure(t.probe.as_ref().is_some_and(|v| v.is_success()), || format!("trial {} failed the probe", t.trial))?;
        ensure(t.dims["K_1,1(L,L)"] == 0, || format!("trial {}: K_1,1 = {}", t.trial, t.dims["K_1,1(L,L)"]))?;
    }
    within(start, LIMIT_SEXTIC_NP)?;
    Ok(format!("{SEXTIC_TRIALS}/{SEXTIC_TRIALS} degree-20 bundles with K_1,1 = 0, {:.1}s", start.elapsed().as_secs_f64()))
}

fn criterion_7() -> Verdict {
    let per_p = VANISHING_TRIALS.div_ceil(3);
    let r = campaign(QUARTIC, 1, &[1, 2, 3], per_p, CheckKind::VanishingCriterion, None);
    ensure(r.summary.error == 0, || "error records".into())?;
    let fails = r.summary.fail;
    ensure(fails == 0, || format!("{fails} counterexamples: {:?}", r.summary.failures))?;
    let s = &r.summary;
    ensure(s.implication_ok > 0, || "no trial exercised the implication".into())?;
    Ok(format!(
        "{} trials: {} implication_ok, {} vacuous, {} skipped (h0(B) > 0), 0 counterexamples",
        r.records.len(),
        s.implication_ok,
        s.vacuous,
        s.skipped
    ))
}

fn criterion_8() -> Verdict {
    let mut pass = 0;
    for curve in ["fermat-quartic-101", "random-quartic-1009"] {
        let r = campaign(curve, 1, &[1, 2, 3, 4], GREEN_TRIALS.div_ceil(8), CheckKind::GreenVanishing, None);
        ensure(r.summary.error == 0, || format!("{curve}: error records"))?;
        ensure(r.summary.fail == 0, || format!("{curve}: {:?}", r.summary.failures))?;
        pass += r.summary.pass;
    }
    ensure(pass >= GREEN_TRIALS, || format!("only {pass} trials with h0(B+L) <= p"))?;
    Ok(format!("{pass} trials with Z_p,1 = 0"))
}

/// Rank by fraction-free elimination: rows are combined as
/// `r <- piv * r - a * pivot_row`, never dividing.
fn rank_oracle(f: &Field, mut rows: Vec<Vec<Elem>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(i) = (rank..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(rank, i);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let a = row[c];
            if a != 0 {
                for k in 0..cols {
                    row[k] = f.sub(f.mul(pivot[c], row[k]), f.mul(a, pivot[k]));
                }
            }
        }
        rank += 1;
    }
    rank
}

fn criterion_9() -> Verdict {
    let catalog = Catalog::shipped();
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    // d o d = 0.
    let quartic = catalog.curve(QUARTIC).unwrap();
    let mut checked = 0;
    while checked < DD_PAIRS {
        let l = random_class(&quartic, rng.gen_range(4..=8), &mut rng).unwrap();
        let b = random_class(&quartic, rng.gen_range(-2..=4), &mut rng).unwrap();
        let k = KoszulComplex::new(&quartic, &b, &l, Limits::default()).map_err(|e| e.to_string())?;
        let p = rng.gen_range(1..=3.min(k.dim_v()));
        let q = rng.gen_range(0..=2);
        let (outer, inner) = (k.matrix(p, q).unwrap(), k.matrix(p + 1, q - 1).unwrap());
        if outer.rows() == 0 || inner.cols() == 0 {
            continue;
        }
        ensure(outer.mul(&inner).unwrap().is_zero(), || format!("d o d != 0 for B = {b}, L = {l}, p = {p}, q = {q}"))?;
        checked += 1;
    }

    // Riemann-Roch.
    let mut rr = 0;
    for entry in &catalog.curves {
        let curve = entry.build().unwrap();
        let g = curve.genus() as i64;
        let pts = curve.points(40);
        for _ in 0..RR_DIVISORS {
            let support: Vec<_> =
                (0..rng.gen_range(0..=4)).map(|_| (pts[rng.gen_range(0..pts.len())], rng.gen_range(-2..=3))).collect();
            let d = Divisor::new(rng.gen_range(-1..=3), support);
            let deg = d.degree(curve.degree());
            let h0 = rr_dim(&curve, &d).map_err(|e| format!("{}: {d}: {e}", entry.name))? as i64;
            let h1 = h1(&curve, &d).map_err(|e| format!("{}: {d}: {e}", entry.name))? as i64;
            ensure(h0 - h1 == deg - g + 1, || format!("{}: D = {d}: h0 = {h0}, h1 = {h1}", entry.name))?;
            rr += 1;
        }
    }

    // Rank-nullity against the fraction-free oracle.
    let f = Field::prime(101).unwrap();
    for _ in 0..RANK_MATRICES {
        let (r, c) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
        let zero_rate = rng.gen_range(0.0..0.9);
        let rows: Vec<Vec<Elem>> =
            (0..r).map(|_| (0..c).map(|_| if rng.gen_bool(zero_rate) { 0 } else { f.random(&mut rng) }).collect()).collect();
        let m = Matrix::from_rows(&f, c, rows.clone()).unwrap();
        let kernel = m.kernel_basis();
        ensure(m.rank() + kernel.len() == c, || "rank + nullity != cols".into())?;
        ensure(m.rank() == rank_oracle(&f, rows), || "rank disagrees with oracle".into())?;
        ensure(kernel.iter().all(|v| m.mul_vec(v).iter().all(|&x| x == 0)), || "kernel vector not killed".into())?;
    }

    // Determinism.
    let configs = [
        ExperimentConfig::new(QUARTIC, 1, &[1, 2], 5, 11, &[CheckKind::Duality, CheckKind::VanishingCriterion]),
        ExperimentConfig::new("random-quartic-1009", 1, &[1], 5, 12, &[CheckKind::SecantConverse, CheckKind::Projection]),
        ExperimentConfig::new(SEXTIC, 2, &[5], 3, 13, &[CheckKind::C2Fiber]),
    ];
    assert_eq!(configs.len(), DETERMINISM_CAMPAIGNS);
    for cfg in &configs {
        let a = run_campaign(cfg, &catalog).unwrap().deterministic().to_json();
        let b = run_campaign(cfg, &catalog).unwrap().deterministic().to_json();
        ensure(a == b, || format!("campaign on {} not reproducible", cfg.curve))?;
    }
    Ok(format!(
        "d o d on {DD_PAIRS} pairs, RR on {rr} divisors, rank-nullity on {RANK_MATRICES} matrices, {DETERMINISM_CAMPAIGNS} reproducible campaigns"
    ))
}

fn criterion_10() -> Verdict {
    let catalog = Catalog::shipped();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut total = 0;
    for entry in &catalog.curves {
        let curve: PlaneCurve = entry.build().unwrap();
        let g = curve.genus() as i64;
        let c = i64::from(entry.clifford_index.unwrap_or(1));
        let mut n = 0;
        for p in (0..4).cycle() {
            if n >= H0_SAMPLES {
                break;
            }
            let l = random_class(&curve, secant_degree(g, p, c), &mut rng).unwrap();
            if h1(&curve, &l).unwrap() > 0 {
                continue;
            }
            let measured = rr_dim(&curve, &l).unwrap() as i64;
            ensure(measured == expected_h0(g, p, c), || format!("{}: L = {l}: h0 = {measured}", entry.name))?;
            n += 1;
        }
        total += n;
    }
    let cases = [((2, 0, 4, 0), (6, 10)), ((2, 1, 4, 0), (0, 0)), ((2, 1, 3, 2), (6, 6)), ((3, 0, 5, 1), (10, 35))];
    for ((n, i, h0, h1), want) in cases {
        let got = sym_product_dims(n, i, h0, h1);
        ensure(got == want, || format!("sym_product_dims({n},{i},{h0},{h1}) = {got:?}, want {want:?}"))?;
    }
    Ok(format!("{total} nonspecial bundles match expected_h0; {} binomial instances", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("c=2 fiber dimension, g = p + 4", criterion_1),
        ("c=2 fiber dimension, g != p + 4", criterion_2),
        ("duality on the quartic", criterion_3),
        ("secant forward, c = 1", criterion_4),
        ("secant converse", criterion_5),
        ("secant forward, c = 2, sextic", criterion_6),
        ("vanishing criterion implication", criterion_7),
        ("Green's vanishing", criterion_8),
        ("structural suites", criterion_9),
        ("predictor consistency", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let verdict = std::panic::catch_unwind(*run).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
