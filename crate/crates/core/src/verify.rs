//! Exhaustive verification of every identity at small `K`, used by the
//! `verify` command. Cases run in ascending `(K, h, path)` order and each
//! check stops at its first failure, so a reported counterexample is the
//! smallest one found.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use crate::chain::{build_shape_chain, cross_term_from, exact_sigma2_from, martingale_generator_check, stationary};
use crate::error::Result;
use crate::involution::{involution, involution_star, marked_paths, marked_paths_free};
use crate::lazy::{sigma2_from_pmf, sigma2_star, LazyWalk};
use crate::limits::Limits;
use crate::motzkin::{motzkin_count, motzkin_enumerate, phi_plus, phi_plus_inverse};
use crate::path::{anchored_free_shapes, anchored_shapes, gamma_plus, neighbors, neighbors_free, twice_area, twice_area_star, PathZ, ShapeBar, WalkParams};
use crate::sums::{a_kh, sigma2_star_bruteforce, total_area_sum_bruteforce, total_area_sum_star_bruteforce};

/// A deliberately broken identity, for checking that failures are caught.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negates the sign of the first marked path of every base path in the
    /// zero-sum check.
    ZeroSumSign,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub k_max: usize,
    pub limits: Limits,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { k_max: 8, limits: Limits::default(), fault: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "PASS {:<22} {} cases", self.name, self.cases),
            Some(c) => write!(f, "FAIL {:<22} counterexample: {c}", self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub k_max: usize,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }
}

type CaseResult = std::result::Result<(), String>;

struct Check {
    name: &'static str,
    cases: usize,
    counterexample: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, cases: 0, counterexample: None }
    }

    fn failed(&self) -> bool {
        self.counterexample.is_some()
    }

    fn record(&mut self, r: CaseResult) {
        self.cases += 1;
        if let Err(e) = r {
            self.counterexample.get_or_insert(e);
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome { name: self.name, cases: self.cases, counterexample: self.counterexample }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CaseResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn shapes(params: WalkParams, limits: &Limits) -> Result<Vec<PathZ>> {
    Ok(anchored_shapes(params, limits)?.map(ShapeBar::into_path).collect())
}

pub fn run_suite(opts: &VerifyOptions) -> Result<VerifyReport> {
    let limits = &opts.limits;
    let mut bijection = Check::new("bijection");
    let mut invol = Check::new("involution");
    let mut invol_star = Check::new("involution_star");
    let mut zerosum = Check::new("zerosum");
    let mut total_area = Check::new("total_area");
    let mut star = Check::new("unconstrained_sums");
    let mut generator = Check::new("martingale_generator");
    let mut balance = Check::new("detailed_balance");
    let mut cross = Check::new("cross_term");
    let mut variance = Check::new("variance_agreement");

    for pmf in LazyWalk::new().take(opts.k_max + 1).skip(1) {
        let k = pmf.n();
        for params in WalkParams::all_for_k(k) {
            let paths = shapes(params, limits)?;
            let label = |z: &PathZ| format!("{params} z={z}");

            if !bijection.failed() {
                let mut pairs = 0u64;
                let mut r = Ok(());
                'outer: for z in &paths {
                    for zp in gamma_plus(z) {
                        pairs += 1;
                        let m = phi_plus(z, &zp).map_err(|e| e.to_string());
                        let back = m.as_ref().ok().and_then(|m| phi_plus_inverse(0, m).ok());
                        if back != Some((z.clone(), zp.clone())) {
                            r = Err(format!("{} z'={zp}: Φ⁺ does not round-trip", label(z)));
                            break 'outer;
                        }
                    }
                }
                bijection.record(r.and_then(|_| {
                    let count = motzkin_count(params);
                    ensure(BigUint::from(pairs) == count, || {
                        format!("{params}: {pairs} up-neighbour pairs but |M| = {count}")
                    })
                }));
                if !bijection.failed() {
                    for m in motzkin_enumerate(params, limits)? {
                        let ok = phi_plus_inverse(0, &m)
                            .ok()
                            .and_then(|(z, zp)| phi_plus(&z, &zp).ok())
                            .as_ref()
                            == Some(&m);
                        bijection.record(ensure(ok, || format!("{params} M={:?}: inverse does not round-trip", m.steps())));
                        if bijection.failed() {
                            break;
                        }
                    }
                }
            }

            for z in &paths {
                let marks = marked_paths(z);
                if !invol.failed() {
                    for m in &marks {
                        let r = involution(m).map_err(|e| e.to_string()).and_then(|im| {
                            ensure(im.sign() == -m.sign(), || format!("{} z'={} mark={:?}: sign not reversed", label(z), m.neighbor, m.mark))?;
                            let back = involution(&im).map_err(|e| e.to_string())?;
                            ensure(&back == m, || format!("{} z'={} mark={:?}: I(I(m)) != m", label(z), m.neighbor, m.mark))
                        });
                        invol.record(r);
                        if invol.failed() {
                            break;
                        }
                    }
                }
                if !zerosum.failed() {
                    let signed: i64 = marks
                        .iter()
                        .enumerate()
                        .map(|(i, m)| {
                            let s = m.sign() as i64;
                            if i == 0 && opts.fault == Some(Fault::ZeroSumSign) {
                                -s
                            } else {
                                s
                            }
                        })
                        .sum();
                    let base = twice_area(z).value();
                    let area_sum: i128 = neighbors(z).iter().map(|w| twice_area(w).value() - base).sum();
                    zerosum.record(ensure(signed == 0 && area_sum == 0, || {
                        format!("{}: signed mark sum {signed}, doubled area sum {area_sum}", label(z))
                    }));
                }
            }

            if !total_area.failed() {
                let brute = total_area_sum_bruteforce(params, limits)?;
                let closed = BigInt::from(a_kh(params));
                total_area.record(ensure(brute == closed, || format!("{params}: brute force {brute} != A = {closed}")));
            }

            if !generator.failed() {
                let g = martingale_generator_check(params, limits)?;
                generator.record(ensure(g.passed(), || {
                    let (z, s) = &g.violations[0];
                    format!("{params} z={z}: doubled generator sum {s}")
                }));
            }

            let model = build_shape_chain(params, limits)?;
            if !balance.failed() {
                let pi = stationary(&model);
                let erg = model.ergodicity();
                balance.record(ensure(
                    model.rows_stochastic()
                        && pi.sums_to_one()
                        && pi.detailed_balance(&model)
                        && pi.is_invariant(&model)
                        && erg.irreducible
                        && erg.aperiodic,
                    || format!("{params}: shape chain is not a reversible ergodic chain for π_S"),
                ));
            }
            if !cross.failed() {
                let c = cross_term_from(&model);
                cross.record(ensure(c.is_zero(), || format!("{params}: cross term {c}")));
            }
            if !variance.failed() {
                let v = exact_sigma2_from(&model);
                let llt = sigma2_from_pmf(&pmf, params.h() as i64);
                variance.record(ensure(v.agree() && llt == v.closed_form, || {
                    format!(
                        "{params}: stationary {} / closed form {} / local limit {llt}",
                        v.stationary, v.closed_form
                    )
                }));
            }
        }

        // Unconstrained model.
        for z in anchored_free_shapes(k, limits)?.map(ShapeBar::into_path) {
            if invol_star.failed() && star.failed() {
                break;
            }
            let marks = marked_paths_free(&z);
            if !invol_star.failed() {
                for m in &marks {
                    let r = involution_star(m).map_err(|e| e.to_string()).and_then(|im| {
                        ensure(im.sign() == -m.sign(), || format!("K={k} z={z} z'={} mark={:?}: sign not reversed", m.neighbor, m.mark))?;
                        let back = involution_star(&im).map_err(|e| e.to_string())?;
                        ensure(&back == m, || format!("K={k} z={z} z'={} mark={:?}: I*(I*(m)) != m", m.neighbor, m.mark))
                    });
                    invol_star.record(r);
                    if invol_star.failed() {
                        break;
                    }
                }
            }
            if !star.failed() {
                let base = twice_area_star(&z);
                let sum: i128 = neighbors_free(&z).iter().map(|w| twice_area_star(w) - base).sum();
                star.record(ensure(sum == 0, || format!("K={k} z={z}: doubled A* generator sum {sum}")));
            }
        }
        if !star.failed() {
            let brute = total_area_sum_star_bruteforce(k, limits)?;
            let expected = BigInt::from(2) * BigInt::from(3u32).pow(k as u32);
            star.record(ensure(brute == expected, || format!("K={k}: Σ ΔA* = {brute}, expected {expected}")));
            let s = sigma2_star_bruteforce(k, limits)?;
            star.record(ensure(s == sigma2_star(k), || format!("K={k}: σ²_* = {s}, expected {}", sigma2_star(k))));
        }
    }

    Ok(VerifyReport {
        k_max: opts.k_max,
        outcomes: [bijection, invol, invol_star, zerosum, total_area, star, generator, balance, cross, variance]
            .into_iter()
            .map(Check::finish)
            .collect(),
    })
}

/// `(1/K) A_{K,h} / B_{K,h}`, the stationary value and the local-limit value
/// for one `(K, h)`, or the first disagreement.
pub fn triple_agreement(params: WalkParams, limits: &Limits) -> Result<std::result::Result<BigRational, String>> {
    let model = build_shape_chain(params, limits)?;
    let v = exact_sigma2_from(&model);
    let llt = crate::lazy::sigma2_via_llt(params);
    Ok(if v.agree() && llt == v.closed_form {
        Ok(v.closed_form)
    } else {
        Err(format!("{params}: {} / {} / {llt}", v.stationary, v.closed_form))
    })
}
