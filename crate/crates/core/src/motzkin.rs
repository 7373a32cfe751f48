//! Grand Motzkin paths and the `Φ⁺` bijection with up-neighbour pairs.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::binomial::binomial;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::path::{check_enum_cap, displacement, PathZ, WalkParams};

/// A sequence of steps in `{-1, 0, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotzkinPath {
    steps: Vec<i8>,
}

impl MotzkinPath {
    pub fn new(steps: Vec<i8>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidPath("a Motzkin path needs at least one step".into()));
        }
        if steps.iter().any(|s| !(-1..=1).contains(s)) {
            return Err(Error::InvalidPath("Motzkin steps must be -1, 0 or +1".into()));
        }
        Ok(MotzkinPath { steps })
    }

    pub fn steps(&self) -> &[i8] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Final height, the sum of the steps.
    pub fn height(&self) -> i64 {
        self.steps.iter().map(|&s| s as i64).sum()
    }

    pub fn flat_steps(&self) -> usize {
        self.steps.iter().filter(|&&s| s == 0).count()
    }
}

/// `|M_{K,h}| = Σ_k C(K, 2k) C(K - 2k, g - k)`.
pub fn motzkin_count(params: WalkParams) -> BigUint {
    let k = params.k() as i64;
    let g = params.g() as i64;
    (0..=k / 2)
        .map(|j| binomial(k, 2 * j) * binomial(k - 2 * j, g - j))
        .sum()
}

/// Number of length-`n` sequences over `{-1, 0, +1}` summing to `x`, for any
/// integer `x` (zero outside `[-n, n]`). Sums over the number of flat steps.
pub fn motzkin_count_general(n: usize, x: i64) -> BigUint {
    let n = n as i64;
    if x.abs() > n {
        return BigUint::zero();
    }
    (0..=n)
        .filter(|flats| (n - flats - x) % 2 == 0)
        .map(|flats| binomial(n, flats) * binomial(n - flats, (n - flats - x) / 2))
        .sum()
}

/// Streams `M_{K,h}` in lexicographic order (`-1 < 0 < +1`).
pub fn motzkin_enumerate(params: WalkParams, limits: &Limits) -> Result<MotzkinIter> {
    check_enum_cap(params.k(), limits)?;
    Ok(MotzkinIter::new(params.k(), params.h() as i64))
}

/// Iterator behind [`motzkin_enumerate`]; also usable for any target height.
pub struct MotzkinIter {
    target: i64,
    current: Option<Vec<i8>>,
}

impl MotzkinIter {
    pub fn new(k: usize, target: i64) -> Self {
        let current = if target.unsigned_abs() as usize <= k {
            let mut v = vec![0i8; k];
            fill_smallest(&mut v, target);
            Some(v)
        } else {
            None
        };
        MotzkinIter { target, current }
    }
}

/// Lexicographically smallest completion of `v` summing to `sum`.
fn fill_smallest(v: &mut [i8], mut sum: i64) {
    let m = v.len() as i64;
    for (j, slot) in v.iter_mut().enumerate() {
        let rest = m - 1 - j as i64;
        let s = (-1).max(sum - rest);
        *slot = s as i8;
        sum -= s;
    }
}

impl Iterator for MotzkinIter {
    type Item = MotzkinPath;

    fn next(&mut self) -> Option<MotzkinPath> {
        let cur = self.current.take()?;
        let k = cur.len();
        let mut prefix = vec![0i64; k + 1];
        for i in 0..k {
            prefix[i + 1] = prefix[i] + cur[i] as i64;
        }
        for i in (0..k).rev() {
            if cur[i] == 1 {
                continue;
            }
            let need = self.target - prefix[i] - (cur[i] as i64 + 1);
            if need.unsigned_abs() as usize <= k - 1 - i {
                let mut succ = cur.clone();
                succ[i] += 1;
                fill_smallest(&mut succ[i + 1..], need);
                self.current = Some(succ);
                break;
            }
        }
        Some(MotzkinPath { steps: cur })
    }
}

/// `Φ⁺(z, z')`: `M_i = F_i` where the two shapes agree, `0` where they differ.
/// Requires `z' ∈ Γ⁺(z)`.
pub fn phi_plus(z: &PathZ, zp: &PathZ) -> Result<MotzkinPath> {
    if zp.gap() != z.gap() {
        return Err(Error::NotNeighbor(format!("{zp} is not in the same C_(K,h) as {z}")));
    }
    phi_plus_free(z, zp)
}

/// `Φ⁺` on the unconstrained space: only `z'_1 = z_1 + 1` is required.
pub fn phi_plus_free(z: &PathZ, zp: &PathZ) -> Result<MotzkinPath> {
    let d = displacement(z, zp)?;
    if d[0] != 1 {
        return Err(Error::NotNeighbor(format!("{zp} is not an up-neighbour of {z}")));
    }
    let steps = (0..z.k())
        .map(|i| {
            let (f, fp) = (z.step(i), zp.step(i));
            if f == fp {
                f
            } else {
                0
            }
        })
        .collect();
    Ok(MotzkinPath { steps })
}

/// Rebuilds the unique pair `(z, z')` with `z_1 = z1`, `z'_1 = z1 + 1` and
/// `Φ⁺(z, z') = m`. An even number of flat steps gives `z' ∈ Γ⁺(z)` in
/// `C_{K,h}`; an odd number gives an unconstrained pair of `C_K`.
pub fn phi_plus_inverse(z1: i64, m: &MotzkinPath) -> Result<(PathZ, PathZ)> {
    let k = m.len();
    let mut z = Vec::with_capacity(k + 1);
    let mut zp = Vec::with_capacity(k + 1);
    z.push(z1);
    zp.push(z1.checked_add(1).ok_or(Error::Overflow("starting height"))?);
    let mut d = 1i64;
    for &s in &m.steps {
        let (f, fp) = if s != 0 {
            (s as i64, s as i64)
        } else {
            // Crossing: z steps towards z', z' steps towards z.
            let f = d;
            d = -d;
            (f, -f)
        };
        z.push(z[z.len() - 1] + f);
        zp.push(zp[zp.len() - 1] + fp);
    }
    Ok((PathZ::new(z)?, PathZ::new(zp)?))
}
