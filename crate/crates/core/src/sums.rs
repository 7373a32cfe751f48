//! Closed-form binomial sums and the brute-force area sums they count.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::binomial::binomial;
use crate::error::Result;
use crate::limits::Limits;
use crate::motzkin::motzkin_count;
use crate::path::{
    anchored_free_shapes, anchored_shapes, check_enum_cap, degree, degree_free, neighbors_free, twice_area,
    twice_area_star, gamma_plus, ShapeBar, WalkParams,
};

/// `A_{K,h} = Σ_k C(K, 2k+1) C(K - 2k, g - k)`.
pub fn a_kh(params: WalkParams) -> BigUint {
    let k = params.k() as i64;
    let g = params.g() as i64;
    (0..=k / 2)
        .map(|j| binomial(k, 2 * j + 1) * binomial(k - 2 * j, g - j))
        .sum()
}

/// `B_{K,h} = Σ_k C(K, 2k) C(K - 2k, g - k) = |M_{K,h}|`.
pub fn b_kh(params: WalkParams) -> BigUint {
    motzkin_count(params)
}

/// `σ²_{K,h} = A_{K,h} / (K B_{K,h})`.
pub fn sigma2_closed_form(params: WalkParams) -> BigRational {
    BigRational::new(
        BigInt::from(a_kh(params)),
        BigInt::from(b_kh(params)) * BigInt::from(params.k()),
    )
}

/// `Σ_{z anchored} Σ_{z' ∈ Γ⁺(z)} (A(z') - A(z))` by direct enumeration.
/// The sum does not depend on where `z` starts, so anchoring loses nothing.
pub fn total_area_sum_bruteforce(params: WalkParams, limits: &Limits) -> Result<BigInt> {
    let mut twice: i128 = 0;
    for z in anchored_shapes(params, limits)?.map(ShapeBar::into_path) {
        let base = twice_area(&z).value();
        for w in gamma_plus(&z) {
            twice += twice_area(&w).value() - base;
        }
    }
    debug_assert_eq!(twice % 2, 0);
    Ok(BigInt::from(twice / 2))
}

/// The unconstrained counterpart over `C_K`: pairs with `z'_1 = z_1 + 1`,
/// summing `A*(z') - A*(z)`. Equals `2 · 3^K`.
pub fn total_area_sum_star_bruteforce(k: usize, limits: &Limits) -> Result<BigInt> {
    let mut twice: i128 = 0;
    for z in anchored_free_shapes(k, limits)?.map(ShapeBar::into_path) {
        let base = twice_area_star(&z);
        for w in neighbors_free(&z).into_iter().filter(|w| w.first() > z.first()) {
            twice += twice_area_star(&w) - base;
        }
    }
    debug_assert_eq!(twice % 2, 0);
    Ok(BigInt::from(twice / 2))
}

/// `Σ_F (deg_S(F) + 1)` over anchored shapes, i.e. the sum of degrees in
/// `C_{K,h}`; equals `2 |M_{K,h}|`.
pub fn degree_sum_bruteforce(params: WalkParams, limits: &Limits) -> Result<BigUint> {
    let total: u128 = anchored_shapes(params, limits)?
        .map(|s| degree(s.path()))
        .sum();
    Ok(BigUint::from(total))
}

/// Sum of unconstrained degrees over anchored paths of `C_K`; equals `2 · 3^K`.
pub fn degree_sum_free_bruteforce(k: usize, limits: &Limits) -> Result<BigUint> {
    check_enum_cap(k, limits)?;
    let total: u128 = anchored_free_shapes(k, limits)?
        .map(|s| degree_free(s.path()))
        .sum();
    Ok(BigUint::from(total))
}

/// `σ²_{K,*} = A*_K / ((K+2) B*_K)` with `A*_K = 2 Σ_{Γ⁺} (A*(z') - A*(z))`
/// and `B*_K` the degree sum over `C_K`, both by enumeration.
pub fn sigma2_star_bruteforce(k: usize, limits: &Limits) -> Result<BigRational> {
    let a_star = total_area_sum_star_bruteforce(k, limits)? * 2;
    let b_star = BigInt::from(degree_sum_free_bruteforce(k, limits)?);
    Ok(BigRational::new(a_star, b_star * BigInt::from(k + 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Pow;

    fn w(k: i64, h: i64) -> WalkParams {
        WalkParams::new(k, h).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(a_kh(w(2, 0)), BigUint::from(4u32));
        assert_eq!(b_kh(w(2, 0)), BigUint::from(3u32));
        assert_eq!(a_kh(w(4, 0)), BigUint::from(32u32));
        assert_eq!(b_kh(w(4, 0)), BigUint::from(19u32));
        assert_eq!(a_kh(w(3, 1)), BigUint::from(10u32));
        assert_eq!(b_kh(w(3, 1)), BigUint::from(6u32));
        for k in 1..=30 {
            assert_eq!(a_kh(w(k, k)), BigUint::from(k as u64));
            assert_eq!(b_kh(w(k, k)), BigUint::from(1u32));
        }
    }

    #[test]
    fn brute_force_examples() {
        let l = Limits::default();
        assert_eq!(total_area_sum_bruteforce(w(2, 0), &l).unwrap(), BigInt::from(4));
        assert_eq!(total_area_sum_bruteforce(w(2, 2), &l).unwrap(), BigInt::from(2));
        assert_eq!(total_area_sum_star_bruteforce(1, &l).unwrap(), BigInt::from(6));
        assert_eq!(total_area_sum_star_bruteforce(2, &l).unwrap(), BigInt::from(18));
    }

    #[test]
    fn brute_force_matches_closed_form() {
        let l = Limits::default();
        for k in 1..=10usize {
            for params in WalkParams::all_for_k(k) {
                assert_eq!(
                    total_area_sum_bruteforce(params, &l).unwrap(),
                    BigInt::from(a_kh(params)),
                    "{params}"
                );
                assert_eq!(degree_sum_bruteforce(params, &l).unwrap(), b_kh(params) * 2u32);
            }
            let three_k = BigUint::from(3u32).pow(k as u32);
            assert_eq!(total_area_sum_star_bruteforce(k, &l).unwrap(), BigInt::from(&three_k * 2u32));
            assert_eq!(degree_sum_free_bruteforce(k, &l).unwrap(), three_k * 2u32);
            assert_eq!(
                sigma2_star_bruteforce(k, &l).unwrap(),
                BigRational::new(BigInt::from(2), BigInt::from(k + 2))
            );
        }
    }

    #[test]
    fn pascal_step_used_in_the_count() {
        for k in 1..=40i64 {
            for g in 0..=k / 2 {
                for j in 0..=k / 2 {
                    if 2 * j + 1 > k || j > g {
                        continue;
                    }
                    assert_eq!(
                        binomial(k - 2 * j - 1, g - j - 1) + binomial(k - 2 * j - 1, g - j),
                        binomial(k - 2 * j, g - j)
                    );
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let l = Limits { enumeration_cap: 4, ..Limits::default() };
        assert!(total_area_sum_bruteforce(w(6, 0), &l).unwrap_err().is_resource_cap());
        assert!(total_area_sum_star_bruteforce(5, &l).unwrap_err().is_resource_cap());
    }
}
