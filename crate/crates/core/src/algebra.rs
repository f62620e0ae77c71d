//! Exact integer polynomials and truncated power series.
//!
//! Everything here works over arbitrary-precision integers. An
//! [`IntPolynomial`] is stored lowest degree first with trailing zeros
//! trimmed, so the zero polynomial is the empty coefficient list. A
//! [`SeriesPrefix`] is a fixed-length initial segment of a formal power
//! series together with a per-coefficient tag recording how much each
//! coefficient can be trusted.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().copied().map(BigInt::from).collect())
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Self::new(coeffs.iter().copied().map(BigInt::from).collect())
    }

    /// `1 + z + ... + z^d`.
    pub fn geometric(d: usize) -> Self {
        Self::new(vec![BigInt::one(); d + 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of a nonzero polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `z^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Value at `z = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.coeffs.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl fmt::Display for IntPolynomial {
    /// Space-separated coefficients, lowest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Exact convolution product.
pub fn poly_mul(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    if a.is_zero() || b.is_zero() {
        return IntPolynomial::zero();
    }
    let mut out = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    IntPolynomial::new(out)
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        poly_mul(self, rhs)
    }
}

/// Binomial coefficient with `C(n, k) = 0` whenever `k < 0` or `k > n`.
///
/// Negative `n` is treated the same way (every `k` falls outside `0..=n`),
/// which is the convention the closed forms are evaluated under.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// How far a series coefficient can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    /// Computed directly from a closed rational function; no limit involved.
    Exact,
    /// Backed by a height bound: re-running at higher dimension cannot change it.
    Certified,
    /// Agreed across a window of consecutive dimensions.
    Empirical,
    /// Did not settle before the dimension cap.
    Unstable,
}

impl Stability {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Certified => "certified",
            Self::Empirical => "empirical",
            Self::Unstable => "unstable",
        }
    }
}

/// Coefficients `0..=r` of a power series in `Z[[z]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPrefix {
    coeffs: Vec<BigInt>,
    stability: Vec<Stability>,
}

impl SeriesPrefix {
    /// Builds a prefix with one tag for every coefficient. `coeffs` must be nonempty.
    pub fn new(coeffs: Vec<BigInt>, stability: Vec<Stability>) -> Self {
        assert!(!coeffs.is_empty(), "a series prefix holds at least z^0");
        assert_eq!(
            coeffs.len(),
            stability.len(),
            "one stability tag per coefficient"
        );
        Self { coeffs, stability }
    }

    pub fn uniform(coeffs: Vec<BigInt>, tag: Stability) -> Self {
        let stability = vec![tag; coeffs.len()];
        Self::new(coeffs, stability)
    }

    pub fn exact(coeffs: Vec<BigInt>) -> Self {
        Self::uniform(coeffs, Stability::Exact)
    }

    /// Truncation of a polynomial, padded with zeros up to degree `r`.
    pub fn from_polynomial(p: &IntPolynomial, r: usize, tag: Stability) -> Self {
        Self::uniform((0..=r).map(|i| p.coeff(i)).collect(), tag)
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn stability(&self) -> &[Stability] {
        &self.stability
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    /// Restriction to degrees `0..=r`.
    pub fn truncate(&self, r: usize) -> Result<Self> {
        self.require(r)?;
        Ok(Self {
            coeffs: self.coeffs[..=r].to_vec(),
            stability: self.stability[..=r].to_vec(),
        })
    }

    fn require(&self, r: usize) -> Result<()> {
        if self.degree_bound() < r {
            return Err(Error::InsufficientTruncation {
                needed: r,
                available: self.degree_bound(),
            });
        }
        Ok(())
    }

    /// Cauchy product truncated to the shorter of the two bounds.
    ///
    /// The tag of each output coefficient is the weakest tag among the inputs
    /// it depends on.
    pub fn product(&self, other: &Self) -> Self {
        let r = self.degree_bound().min(other.degree_bound());
        let mut coeffs = vec![BigInt::zero(); r + 1];
        let mut stability = vec![Stability::Exact; r + 1];
        for n in 0..=r {
            for i in 0..=n {
                coeffs[n] += &self.coeffs[i] * &other.coeffs[n - i];
                stability[n] = weaker(
                    stability[n],
                    weaker(self.stability[i], other.stability[n - i]),
                );
            }
        }
        Self { coeffs, stability }
    }
}

fn weaker(a: Stability, b: Stability) -> Stability {
    use Stability::*;
    let rank = |s| match s {
        Exact => 0,
        Certified => 1,
        Empirical => 2,
        Unstable => 3,
    };
    if rank(a) >= rank(b) {
        a
    } else {
        b
    }
}

impl fmt::Display for SeriesPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Expands `numer / (1 - z)^pole_order` through `z^r`.
///
/// The coefficient of `z^t` is `sum_j numer_j * C(t - j + pole_order - 1, pole_order - 1)`.
/// With `pole_order = 0` the numerator is returned, truncated or zero-padded.
pub fn expand_rational_prefix(numer: &IntPolynomial, pole_order: usize, r: usize) -> SeriesPrefix {
    let coeffs = if pole_order == 0 {
        (0..=r).map(|t| numer.coeff(t)).collect()
    } else {
        let k = pole_order as i64 - 1;
        (0..=r)
            .map(|t| {
                numer
                    .coeffs()
                    .iter()
                    .enumerate()
                    .take_while(|(j, _)| *j <= t)
                    .map(|(j, c)| c * binomial((t - j) as i64 + k, k))
                    .sum()
            })
            .collect()
    };
    SeriesPrefix::exact(coeffs)
}

/// Whether coefficients `0..=r` of the two prefixes coincide.
pub fn prefix_agree(a: &SeriesPrefix, b: &SeriesPrefix, r: usize) -> Result<bool> {
    a.require(r)?;
    b.require(r)?;
    Ok(a.coeffs[..=r] == b.coeffs[..=r])
}
