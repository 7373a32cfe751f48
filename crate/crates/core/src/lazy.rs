//! The lazy walk `S_n` with steps uniform on `{-1, 0, +1}` and the limit
//! statements that follow from its local behaviour.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::path::WalkParams;

/// Exact law of `S_n`: `P[S_n = x] = counts[x + n] / 3^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyWalkPmf {
    n: usize,
    counts: Vec<BigUint>,
}

impl LazyWalkPmf {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of `{-1,0,+1}` sequences of length `n` ending at `x`.
    pub fn count(&self, x: i64) -> BigUint {
        if x.unsigned_abs() as usize > self.n {
            return BigUint::zero();
        }
        self.counts[(x + self.n as i64) as usize].clone()
    }

    pub fn count_ref(&self, x: i64) -> Option<&BigUint> {
        if x.unsigned_abs() as usize > self.n {
            return None;
        }
        Some(&self.counts[(x + self.n as i64) as usize])
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::from(3u32).pow(self.n as u32)
    }

    pub fn prob(&self, x: i64) -> BigRational {
        BigRational::new(BigInt::from(self.count(x)), BigInt::from(self.denominator()))
    }

    /// Support points with their probabilities, ascending.
    pub fn probs(&self) -> BTreeMap<i64, BigRational> {
        let n = self.n as i64;
        (-n..=n).map(|x| (x, self.prob(x))).collect()
    }

    pub fn prob_f64(&self, x: i64) -> f64 {
        ratio_f64(&BigInt::from(self.count(x)), &BigInt::from(self.denominator()))
    }

    fn advance(&self) -> LazyWalkPmf {
        let width = self.counts.len() + 2;
        let mut next = vec![BigUint::zero(); width];
        for (i, c) in self.counts.iter().enumerate() {
            // Old index i holds x = i - n; it feeds new indices i, i+1, i+2.
            next[i] += c;
            next[i + 1] += c;
            next[i + 2] += c;
        }
        LazyWalkPmf { n: self.n + 1, counts: next }
    }
}

/// Exact dynamic-programming convolution of `n` uniform `{-1,0,+1}` steps.
pub fn lazy_pmf(n: usize) -> LazyWalkPmf {
    LazyWalk::new().nth(n).expect("the lazy walk iterator is infinite")
}

/// Successive laws of `S_0, S_1, S_2, ...`.
pub struct LazyWalk {
    current: LazyWalkPmf,
}

impl LazyWalk {
    pub fn new() -> Self {
        LazyWalk {
            current: LazyWalkPmf { n: 0, counts: vec![BigUint::one()] },
        }
    }
}

impl Default for LazyWalk {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for LazyWalk {
    type Item = LazyWalkPmf;

    fn next(&mut self) -> Option<LazyWalkPmf> {
        let next = self.current.advance();
        Some(std::mem::replace(&mut self.current, next))
    }
}

/// `a / b` as the nearest-ish `f64`, robust to operands far beyond `f64`
/// range.
pub fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    BigRational::new(a.clone(), b.clone()).to_f64().unwrap_or(f64::NAN)
}

pub fn rational_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `(1/K) (P[S_K = h+1] + P[S_K = h-1]) / P[S_K = h]` from a precomputed law
/// of `S_K`.
pub fn sigma2_from_pmf(pmf: &LazyWalkPmf, h: i64) -> BigRational {
    let k = pmf.n() as i64;
    let num = BigInt::from(pmf.count(h + 1) + pmf.count(h - 1));
    BigRational::new(num, BigInt::from(pmf.count(h)) * BigInt::from(k))
}

pub fn sigma2_via_llt(params: WalkParams) -> BigRational {
    sigma2_from_pmf(&lazy_pmf(params.k()), params.h() as i64)
}

/// How `h` follows `K` in a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HRule {
    Fixed(usize),
    /// `h = ⌊K^α⌋`, lowered by one (raised to 1 from 0) when `K - h` is odd.
    Power(f64),
}

impl HRule {
    pub fn h_for(&self, k: usize) -> Option<usize> {
        match *self {
            HRule::Fixed(h) => (h <= k && (k - h).is_multiple_of(2)).then_some(h),
            HRule::Power(alpha) => {
                let mut h = ((k as f64).powf(alpha).floor() as usize).min(k);
                if (k - h) % 2 == 1 {
                    h = if h == 0 { 1 } else { h - 1 };
                }
                Some(h)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            HRule::Power(alpha) if !(alpha.is_finite() && (0.0..=1.0).contains(&alpha)) => {
                Err(Error::InvalidArgument(format!("exponent {alpha} must lie in [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub k: usize,
    pub h: usize,
    pub sigma2: BigRational,
    pub sigma2_f64: f64,
    pub k_times_sigma2: f64,
    /// Only for `h = 0`.
    pub u_k: Option<f64>,
}

/// `u_K = 2 P[S_K=0] / ((K+2)(P[S_K=0] - P[S_K=1]))`.
pub fn u_k(pmf: &LazyWalkPmf) -> BigRational {
    let k = pmf.n() as i64;
    let p0 = BigInt::from(pmf.count(0));
    let p1 = BigInt::from(pmf.count(1));
    BigRational::new(&p0 * 2, (p0 - p1) * BigInt::from(k + 2))
}

fn scan_row(pmf: &LazyWalkPmf, h: usize) -> ScanRow {
    let k = pmf.n();
    let sigma2 = sigma2_from_pmf(pmf, h as i64);
    let sigma2_f64 = rational_f64(&sigma2);
    ScanRow {
        k,
        h,
        k_times_sigma2: rational_f64(&(&sigma2 * BigInt::from(k))),
        sigma2_f64,
        sigma2,
        u_k: (h == 0).then(|| rational_f64(&u_k(pmf))),
    }
}

/// `K σ²_{K,h(K)}` for every `1 ≤ K ≤ k_max` where the rule yields a valid `h`.
pub fn asymptotic_ratio_scan(rule: HRule, k_max: usize) -> Result<Vec<ScanRow>> {
    rule.validate()?;
    Ok(LazyWalk::new()
        .take(k_max + 1)
        .skip(1)
        .filter_map(|pmf| rule.h_for(pmf.n()).map(|h| scan_row(&pmf, h)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub checked: Vec<usize>,
    pub violations: Vec<usize>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `σ²_{K,0} < 2/K`, i.e. `P[S_K = 1] < P[S_K = 0]`, for every even
/// `2 ≤ K ≤ k_max`, compared exactly.
pub fn inequality_ii_check(k_max: usize) -> InequalityReport {
    let mut report = InequalityReport { checked: Vec::new(), violations: Vec::new() };
    for pmf in LazyWalk::new().take(k_max + 1).skip(2).step_by(2) {
        report.checked.push(pmf.n());
        if pmf.count_ref(1) >= pmf.count_ref(0) {
            report.violations.push(pmf.n());
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityIiiReport {
    /// Smallest even `K` from which `σ²_{K,0} > 2/(K+2)` holds through `k_max`.
    pub first_k_holding: Option<usize>,
    /// Even `K` where the inequality fails.
    pub violations: Vec<usize>,
    /// `(K, u_K)` for every even `K` checked.
    pub u_table: Vec<(usize, f64)>,
}

/// `σ²_{K,0} > 2/(K+2)` for even `2 ≤ K ≤ k_max`, as the exact integer
/// comparison `(K+2) P[S_K=1] > K P[S_K=0]`.
pub fn inequality_iii_check(k_max: usize) -> InequalityIiiReport {
    let mut violations = Vec::new();
    let mut u_table = Vec::new();
    let mut checked = Vec::new();
    for pmf in LazyWalk::new().take(k_max + 1).skip(2).step_by(2) {
        let k = pmf.n();
        let p0 = pmf.count(0);
        let p1 = pmf.count(1);
        if BigUint::from(k + 2) * p1 <= BigUint::from(k) * p0 {
            violations.push(k);
        }
        checked.push(k);
        u_table.push((k, rational_f64(&u_k(&pmf))));
    }
    let first_k_holding = match violations.last() {
        None => checked.first().copied(),
        Some(&bad) => checked.iter().copied().find(|&k| k > bad),
    };
    InequalityIiiReport { first_k_holding, violations, u_table }
}

/// `√3 exp(-3x²/(4n)) / (2 √(π n))`, the Gaussian local approximation of
/// `P[S_n = x]`.
pub fn gaussian_llt(n: usize, x: i64) -> f64 {
    let n = n as f64;
    let x = x as f64;
    3f64.sqrt() * (-3.0 * x * x / (4.0 * n)).exp() / (2.0 * (std::f64::consts::PI * n).sqrt())
}

/// `max_x n^{3/2} |P[S_n = x] - gaussian_llt(n, x)|` for `1 ≤ n ≤ n_max`.
pub fn llt_constant_scan(n_max: usize) -> Vec<(usize, f64)> {
    LazyWalk::new()
        .take(n_max + 1)
        .skip(1)
        .map(|pmf| {
            let n = pmf.n();
            let worst = (-(n as i64)..=n as i64)
                .map(|x| (pmf.prob_f64(x) - gaussian_llt(n, x)).abs())
                .fold(0.0, f64::max);
            (n, worst * (n as f64).powf(1.5))
        })
        .collect()
}

/// `σ²_{K,*} = 2/(K+2)` for the walk without the pinned gap.
pub fn sigma2_star(k: usize) -> BigRational {
    BigRational::new(BigInt::from(2), BigInt::from(k + 2))
}

/// `2 Σ_l P[N_0 = l] / (K + 2 - l)`, the variance of the Gaussian mixture
/// for walkers whose steps lie in `{-1, 0, +1}`, given the law of the number
/// of flat steps of the initial path.
pub fn mixture_variance(k: usize, n0_pmf: &BTreeMap<usize, BigRational>) -> Result<BigRational> {
    let mut total = BigRational::zero();
    let mut mass = BigRational::zero();
    for (&l, p) in n0_pmf {
        if l > k {
            return Err(Error::InvalidPmf(format!("support point {l} outside [0, {k}]")));
        }
        if p.is_negative() {
            return Err(Error::InvalidPmf(format!("negative mass at {l}")));
        }
        mass += p;
        total += p / BigInt::from(k + 2 - l);
    }
    if !mass.is_one() {
        return Err(Error::InvalidPmf(format!("masses sum to {mass}, not 1")));
    }
    Ok(total * BigInt::from(2))
}
