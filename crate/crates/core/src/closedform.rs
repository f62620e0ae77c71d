//! Closed forms for the `m = 2` bidiagonal limit and the `q(n)` family.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{binomial, poly_mul, IntPolynomial};
use crate::error::{Error, Result};

/// `f(k,h) = 2 [C(k-2, 3(h-1)-k) + C(k-2, 3(h-1)-k-1) + C(k-2, 3(h-1)-k-2)]`,
/// with binomials outside `0 <= j <= n` read as zero.
pub fn f_kh(k: u32, h: u32) -> BigInt {
    let n = i64::from(k) - 2;
    let j = 3 * (i64::from(h) - 1) - i64::from(k);
    2 * (binomial(n, j) + binomial(n, j - 1) + binomial(n, j - 2))
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Range of `k` paired with a given height: `ceil(3(h-1)/2) <= k <= 3h - 3`.
pub fn k_range(h: u32) -> std::ops::RangeInclusive<u32> {
    let h = i64::from(h);
    let lo = ceil_div(3 * (h - 1), 2).max(1);
    let hi = 3 * h - 3;
    lo as u32..=hi.max(0) as u32
}

/// Range of heights paired with a given `k`: `ceil((k+3)/3) <= h <= floor((2k+3)/3)`.
pub fn h_range(k: u32) -> std::ops::RangeInclusive<u32> {
    let k = i64::from(k);
    let lo = ceil_div(k + 3, 3);
    let hi = (2 * k + 3).div_euclid(3);
    lo as u32..=hi as u32
}

/// Coefficient of `z^j` in the Ehrhart limit of `P_{2,d}`.
///
/// `j = 0, 1` give 1; otherwise `sum f(k, j)` over `k` in [`k_range`].
pub fn thm_m2_coefficient(j: u32) -> BigInt {
    if j <= 1 {
        return BigInt::one();
    }
    k_range(j).map(|k| f_kh(k, j)).sum()
}

pub fn m2_limit_prefix(r: u32) -> Vec<BigInt> {
    (0..=r).map(thm_m2_coefficient).collect()
}

/// `sum f(k, h)` over `h` in [`h_range`], evaluated literally.
///
/// For `k >= 2` this is `2^(k-1)`. For `k = 1` the range is empty and the
/// sum is 0: the lone `k = 1` point sits at height 1 and is accounted for
/// by the special case `h_1 = 1`, not by `f`.
pub fn lemma_sum(k: u32) -> BigInt {
    h_range(k).map(|h| f_kh(k, h)).sum()
}

/// Numerators `n_{-1}, n_0, ..., n_{k-2}` of
/// `lambda_{k-j} = 2^{-(j+2)} sum_{i=0}^{j+1} (-1)^i 2^{j+1-i}`,
/// which start 1, 1, 3, 5, 11 (Jacobsthal).
pub fn jacobsthal_lambda_numerators(k: u32) -> Vec<BigInt> {
    (-1..=i64::from(k) - 2)
        .map(|j| {
            (0..=j + 1)
                .map(|i| {
                    let term = BigInt::one() << (j + 1 - i) as usize;
                    if i % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect()
}

/// `lambda_{k-j}` for `j = -1, ..., k-2`, as exact fractions.
pub fn jacobsthal_lambdas(k: u32) -> Vec<BigRational> {
    jacobsthal_lambda_numerators(k)
        .into_iter()
        .enumerate()
        .map(|(idx, num)| BigRational::new(num, BigInt::one() << (idx + 1)))
        .collect()
}

/// `h_i = 4 h_{i-1} + h_{i-2}` for every `4 <= i <= n`.
pub fn recursion_check(n: u32) -> bool {
    let h = m2_limit_prefix(n);
    (4..=n as usize).all(|i| h[i] == 4 * &h[i - 1] + &h[i - 2])
}

/// `(1 + z^2 + ... + z^{2n-2}) (1 + 7z + 14z^2 + 7z^3 + z^4)`.
pub fn q_of_n_hstar(n: u64) -> Result<IntPolynomial> {
    if n < 2 {
        return Err(Error::param("the q(n) product formula holds for n >= 2"));
    }
    let mut even = vec![BigInt::zero(); (2 * n - 1) as usize];
    for c in even.iter_mut().step_by(2) {
        *c = BigInt::one();
    }
    Ok(poly_mul(
        &IntPolynomial::new(even),
        &IntPolynomial::from_i64s(&[1, 7, 14, 7, 1]),
    ))
}

/// Coefficients `0..=r` of the limit `lim_n h*(Delta_(1, q(n)))`.
pub fn q_of_n_limit_prefix(r: usize) -> Vec<BigInt> {
    let n = (r as u64 / 2 + 2).max(2);
    let h = q_of_n_hstar(n).expect("n >= 2");
    (0..=r).map(|i| h.coeff(i)).collect()
}
