//! Exact binomial coefficients and the binomial sums built from them.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `C(n, k)` as an exact big integer, with `C(n, k) = 0` whenever
/// `k < 0`, `k > n` or `n < 0`.
///
/// Uses the multiplicative formula. Each factor pair is reduced by its gcd
/// with the running product before dividing, so the division is always exact
/// and intermediates stay small.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        let mut num = n - i;
        let mut den = i + 1;
        let g = num.gcd(&den);
        num /= g;
        den /= g;
        // acc * num / den is an integer and gcd(num, den) = 1, so den | acc.
        acc = (acc / den) * num;
    }
    acc
}
