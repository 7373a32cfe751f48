//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! the lines are always visible; exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Pow;

use pinned_walkers::chain::{build_shape_chain, exact_sigma2_from};
use pinned_walkers::involution::{involution, involution_star, marked_paths, marked_paths_free};
use pinned_walkers::lazy::{
    asymptotic_ratio_scan, inequality_ii_check, inequality_iii_check, lazy_pmf, rational_f64, sigma2_from_pmf,
    sigma2_star, u_k, HRule, LazyWalk,
};
use pinned_walkers::motzkin::{motzkin_count, motzkin_enumerate, phi_plus, phi_plus_inverse};
use pinned_walkers::path::{anchored_free_shapes, anchored_shapes, gamma_plus, neighbors, twice_area};
use pinned_walkers::sim::{estimate_variance, InitialShape, Parallelism};
use pinned_walkers::sums::{a_kh, sigma2_closed_form, sigma2_star_bruteforce, total_area_sum_star_bruteforce};
use pinned_walkers::sums::total_area_sum_bruteforce;
use pinned_walkers::{Limits, PathZ, ShapeBar, WalkParams};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: pinned_walkers::Error) -> String {
    e.to_string()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn shapes(params: WalkParams, limits: &Limits) -> Result<Vec<PathZ>, String> {
    Ok(anchored_shapes(params, limits).map_err(err)?.map(ShapeBar::into_path).collect())
}

fn triple_agreement(limits: &Limits) -> Outcome {
    let mut cases = 0;
    for pmf in LazyWalk::new().take(13).skip(1) {
        let k = pmf.n();
        for params in WalkParams::all_for_k(k) {
            let model = build_shape_chain(params, limits).map_err(err)?;
            let v = exact_sigma2_from(&model);
            let llt = sigma2_from_pmf(&pmf, params.h() as i64);
            ensure(v.agree() && v.closed_form == llt, || {
                format!("{params}: closed form {} / stationary {} / local limit {llt}", v.closed_form, v.stationary)
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (K, h) pairs agree exactly"))
}

fn spot_values() -> Outcome {
    let mut checks = vec![((1, 1), rat(1, 1)), ((2, 0), rat(2, 3)), ((3, 1), rat(5, 9)), ((4, 0), rat(8, 19))];
    checks.extend((1..=12).map(|k| ((k, k), rat(1, 1))));
    for ((k, h), expected) in &checks {
        let params = WalkParams::new(*k, *h).map_err(err)?;
        let got = sigma2_closed_form(params);
        ensure(&got == expected, || format!("{params}: {got} != {expected}"))?;
        let llt = sigma2_from_pmf(&lazy_pmf(params.k()), params.h() as i64);
        ensure(&llt == expected, || format!("{params}: local limit {llt} != {expected}"))?;
    }
    Ok(format!("{} values exact", checks.len()))
}

fn zerosum(limits: &Limits) -> Outcome {
    let mut cases = 0;
    for k in 1..=8 {
        for params in WalkParams::all_for_k(k) {
            for z in shapes(params, limits)? {
                let base = twice_area(&z).value();
                let sum: i128 = neighbors(&z).iter().map(|w| twice_area(w).value() - base).sum();
                let signed: i64 = marked_paths(&z).iter().map(|m| m.sign() as i64).sum();
                ensure(sum == 0 && signed == 0, || format!("{params} z={z}: ΔA sum {sum}/2, signed marks {signed}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} anchored paths"))
}

fn total_area(limits: &Limits) -> Outcome {
    let mut cases = 0;
    for k in 1..=12 {
        for params in WalkParams::all_for_k(k) {
            let brute = total_area_sum_bruteforce(params, limits).map_err(err)?;
            let closed = BigInt::from(a_kh(params));
            ensure(brute == closed, || format!("{params}: brute force {brute} != {closed}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (K, h) pairs"))
}

fn bijection(limits: &Limits) -> Outcome {
    let mut pairs_total = 0u64;
    for k in 1..=10 {
        for params in WalkParams::all_for_k(k) {
            let mut pairs = 0u64;
            for z in shapes(params, limits)? {
                for zp in gamma_plus(&z) {
                    pairs += 1;
                    let m = phi_plus(&z, &zp).map_err(err)?;
                    let back = phi_plus_inverse(0, &m).map_err(err)?;
                    ensure(back == (z.clone(), zp.clone()), || format!("{params} z={z} z'={zp}: no round trip"))?;
                }
            }
            let count = motzkin_count(params);
            ensure(BigUint::from(pairs) == count, || format!("{params}: {pairs} pairs, |M| = {count}"))?;
            let mut listed = 0u64;
            for m in motzkin_enumerate(params, limits).map_err(err)? {
                listed += 1;
                let (z, zp) = phi_plus_inverse(0, &m).map_err(err)?;
                ensure(phi_plus(&z, &zp).map_err(err)? == m, || format!("{params} M={:?}: no round trip", m.steps()))?;
            }
            ensure(listed == pairs, || format!("{params}: enumerated {listed} Motzkin paths, {pairs} pairs"))?;
            pairs_total += pairs;
        }
    }
    Ok(format!("{pairs_total} pairs"))
}

fn involutions(limits: &Limits) -> Outcome {
    let mut constrained = 0;
    for k in 1..=8 {
        for params in WalkParams::all_for_k(k) {
            for z in shapes(params, limits)? {
                for m in marked_paths(&z) {
                    let im = involution(&m).map_err(err)?;
                    ensure(im.sign() == -m.sign() && involution(&im).map_err(err)? == m, || {
                        format!("{params} z={z} z'={} mark={:?}", m.neighbor, m.mark)
                    })?;
                    constrained += 1;
                }
            }
        }
    }
    let mut free = 0;
    for k in 1..=6 {
        for z in anchored_free_shapes(k, limits).map_err(err)?.map(ShapeBar::into_path) {
            for m in marked_paths_free(&z) {
                let im = involution_star(&m).map_err(err)?;
                ensure(im.sign() == -m.sign() && involution_star(&im).map_err(err)? == m, || {
                    format!("K={k} z={z} z'={} mark={:?} (unconstrained)", m.neighbor, m.mark)
                })?;
                free += 1;
            }
        }
    }
    Ok(format!("I on {constrained} marked paths, I* on {free}"))
}

fn unconstrained(limits: &Limits) -> Outcome {
    for k in 1..=10 {
        let brute = total_area_sum_star_bruteforce(k, limits).map_err(err)?;
        let expected = BigInt::from(2) * BigInt::from(3u32).pow(k as u32);
        ensure(brute == expected, || format!("K={k}: Σ ΔA* = {brute}, expected {expected}"))?;
        let s = sigma2_star_bruteforce(k, limits).map_err(err)?;
        ensure(s == sigma2_star(k), || format!("K={k}: σ²_* = {s}"))?;
    }
    Ok("K = 1..10".into())
}

fn inequality_ii() -> Outcome {
    let r = inequality_ii_check(400);
    ensure(r.passed(), || format!("violated at K = {:?}", r.violations))?;
    Ok(format!("{} even K", r.checked.len()))
}

fn inequality_iii() -> Outcome {
    let r = inequality_iii_check(400);
    ensure(r.violations.is_empty(), || format!("violated at K = {:?}", r.violations))?;
    let u500 = rational_f64(&u_k(&lazy_pmf(500)));
    let gap = (u500 - 8.0 / 3.0).abs();
    ensure(gap <= 0.15, || format!("u_500 = {u500}"))?;
    Ok(format!("{} even K; u_500 = {u500:.6}, |u_500 - 8/3| = {gap:.6}", r.u_table.len()))
}

fn asymptotic() -> Outcome {
    let s200 = sigma2_from_pmf(&lazy_pmf(200), 0) * BigRational::from_integer(200.into());
    let v200 = rational_f64(&s200);
    ensure((v200 - 2.0).abs() <= 0.02, || format!("K σ² at K=200, h=0 is {v200}"))?;
    let row = asymptotic_ratio_scan(HRule::Power(0.5), 400)
        .map_err(err)?
        .into_iter()
        .find(|r| r.k == 400)
        .ok_or("no row for K=400")?;
    ensure(row.h == 20, || format!("h at K=400 is {}", row.h))?;
    ensure((row.k_times_sigma2 - 2.0).abs() <= 0.02, || format!("K σ² at K=400, h=20 is {}", row.k_times_sigma2))?;
    Ok(format!("K=200,h=0: {v200:.6}; K=400,h=20: {:.6}", row.k_times_sigma2))
}

fn monte_carlo() -> Outcome {
    let mut parts = Vec::new();
    for (k, h) in [(2, 0), (4, 0), (2, 2)] {
        let params = WalkParams::new(k, h).map_err(err)?;
        let exact = rational_f64(&sigma2_closed_form(params));
        let est = estimate_variance(params, 10_000, 10_000, 42, Parallelism::available(), InitialShape::DownThenUp)
            .map_err(err)?;
        let z = est.z_score(exact);
        ensure(z.abs() < 3.0, || format!("{params}: estimate {} vs {exact}, z = {z:.3}", est.estimate))?;
        parts.push(format!("{params}: z = {z:+.2}"));
    }
    Ok(parts.join("; "))
}

fn determinism() -> Outcome {
    let params = WalkParams::new(6, 2).map_err(err)?;
    let runs: Vec<_> = [1, 4, 16]
        .into_iter()
        .map(|p| estimate_variance(params, 500, 200, 2024, Parallelism::from_count(p), InitialShape::Uniform))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    for r in &runs[1..] {
        ensure(
            r.finals == runs[0].finals && r.estimate.to_bits() == runs[0].estimate.to_bits(),
            || "reports differ between thread counts".into(),
        )?;
    }
    Ok("parallelism 1, 4, 16 bit-identical".into())
}

fn main() -> ExitCode {
    let limits = Limits::default();
    let criteria: Vec<Criterion> = vec![
        ("triple variance agreement, K <= 12", Box::new(|| triple_agreement(&limits))),
        ("spot values", Box::new(spot_values)),
        ("zero-sum generator, K <= 8", Box::new(|| zerosum(&limits))),
        ("total area sum, K <= 12", Box::new(|| total_area(&limits))),
        ("Motzkin bijection, K <= 10", Box::new(|| bijection(&limits))),
        ("sign-reversing involutions", Box::new(|| involutions(&limits))),
        ("unconstrained sums, K <= 10", Box::new(|| unconstrained(&limits))),
        ("P[S_K=1] < P[S_K=0], even K <= 400", Box::new(inequality_ii)),
        ("sigma2 > 2/(K+2) and u_K -> 8/3", Box::new(inequality_iii)),
        ("K sigma2 -> 2", Box::new(asymptotic)),
        ("Monte Carlo variance within 3 SE", Box::new(monte_carlo)),
        ("determinism across thread counts", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
