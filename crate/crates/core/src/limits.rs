//! Prefixes of Ehrhart limits of dimension-indexed families.
//!
//! Two modes, never mixed in one report:
//!
//! * **certified**: a height lower bound guarantees that parallelepiped
//!   points which only appear beyond a computed dimension sit above the
//!   requested degree, so one evaluation there fixes coefficients `0..=r`
//!   for good. Available for the bidiagonal family and for multidiagonal
//!   families with `gcd(a_1, a_2) = 1`.
//! * **empirical**: walk the family's dimension schedule until the prefix
//!   is unchanged across a window of consecutive members.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{expand_rational_prefix, IntPolynomial, SeriesPrefix, Stability};
use crate::combinators::{self, VertexPolytope};
use crate::error::{Error, Result};
use crate::fpp;
use crate::simplex::{self, FamilySpec, LatticeSimplex};

pub const DEFAULT_BUDGET: u64 = 1 << 22;
pub const DEFAULT_WINDOW: usize = 3;

/// A sequence of polytopes indexed by a dimension parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `S_d`, indexed by `d`.
    StandardReflexive,
    /// `Delta_(1, q(n))`, indexed by `n >= 2`.
    QOfN,
    /// `P_{m,d}`, indexed by `d >= 3` (dimension `d - 1`).
    Bidiagonal { m: u64 },
    /// `P(a; d)`, indexed by `d >= s`.
    Multidiagonal { a: Vec<u64> },
    /// `S_1 ⊕ ... ⊕ S_1` (`d` summands), indexed by `d`.
    Crosspolytope,
    /// `(S_d ⊕ ... ⊕ S_d) ⊕ Q` with `k` copies of `S_d`, indexed by `d`.
    FreeSum { base: FamilySpec, k: usize },
    /// Member-wise join of two families, indexed by schedule step.
    Join {
        left: Box<Family>,
        right: Box<Family>,
    },
}

/// One evaluated family member.
#[derive(Clone, Debug)]
pub enum Member {
    Simplex(LatticeSimplex),
    Polytope(VertexPolytope),
}

impl Member {
    pub fn hstar(&self, budget: u64) -> Result<IntPolynomial> {
        match self {
            Self::Simplex(s) => hstar_within_budget(s, budget),
            Self::Polytope(p) => p.hstar(),
        }
    }

    fn into_polytope(self) -> VertexPolytope {
        match self {
            Self::Simplex(s) => s.into(),
            Self::Polytope(p) => p,
        }
    }
}

/// [`fpp::hstar`] refusing simplices with more than `budget` parallelepiped points.
pub fn hstar_within_budget(s: &LatticeSimplex, budget: u64) -> Result<IntPolynomial> {
    let volume = s.normalized_volume();
    if volume > BigInt::from(budget) {
        return Err(Error::BudgetExceeded {
            required: volume,
            budget,
        });
    }
    fpp::hstar(s)
}

impl Family {
    /// First index of the schedule.
    pub fn start(&self) -> usize {
        match self {
            Self::QOfN => 2,
            Self::Bidiagonal { .. } => 3,
            Self::Multidiagonal { a } => a.len().max(1),
            Self::Join { .. } => 0,
            Self::StandardReflexive | Self::Crosspolytope | Self::FreeSum { .. } => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Bidiagonal { m } if *m < 2 => Err(Error::param("bidiagonal family needs m >= 2")),
            Self::Multidiagonal { a } => simplex::validate_multidiagonal(a, a.len()),
            Self::FreeSum { base, k } => {
                if *k == 0 {
                    return Err(Error::param("free-sum family needs k >= 1"));
                }
                if !base.build()?.contains_origin_in_interior() {
                    return Err(Error::Precondition(
                        "free-sum base must contain the origin in its interior".into(),
                    ));
                }
                Ok(())
            }
            Self::Join { left, right } => {
                left.validate()?;
                right.validate()
            }
            _ => Ok(()),
        }
    }

    /// The member at schedule index `index` (not a step offset).
    pub fn member(&self, index: usize) -> Result<Member> {
        Ok(match self {
            Self::StandardReflexive => Member::Simplex(simplex::make_s(index)?),
            Self::QOfN => Member::Simplex(simplex::make_q_of_n(index as u64)?),
            Self::Bidiagonal { m } => Member::Simplex(simplex::make_bidiagonal(*m, index)?),
            Self::Multidiagonal { a } => Member::Simplex(simplex::make_multidiagonal(a, index)?),
            Self::Crosspolytope => {
                let s1: VertexPolytope = simplex::make_s(1)?.into();
                Member::Polytope(combinators::free_sum_power(&s1, index)?)
            }
            Self::FreeSum { base, k } => {
                let sd: VertexPolytope = simplex::make_s(index)?.into();
                let reflexive_part = combinators::free_sum_power(&sd, *k)?;
                let q: VertexPolytope = base.build()?.into();
                Member::Polytope(combinators::free_sum(&reflexive_part, &q)?)
            }
            Self::Join { left, right } => {
                let p = left.member(left.start() + index)?;
                let q = right.member(right.start() + index)?;
                match (p, q) {
                    (Member::Simplex(a), Member::Simplex(b))
                        if a.is_triangular() && b.is_triangular() =>
                    {
                        Member::Simplex(combinators::triangular_join(&a, &b)?)
                    }
                    (p, q) => {
                        Member::Polytope(combinators::join(&p.into_polytope(), &q.into_polytope()))
                    }
                }
            }
        })
    }
}

/// Result of a stabilization run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitReport {
    pub family: Family,
    pub prefix: SeriesPrefix,
    /// Schedule indices evaluated, in order.
    pub dimensions: Vec<usize>,
    /// Number of consecutive agreeing members required (1 for certified runs).
    pub window: usize,
}

impl LimitReport {
    /// Indices that did not settle; empty for a successful run.
    pub fn unstable(&self) -> Vec<usize> {
        self.prefix
            .stability()
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Stability::Unstable)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_stable(&self) -> bool {
        self.unstable().is_empty()
    }

    /// Canonical JSON with keys `family, prefix, modes, dimensions, window, stable, unstable`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            family: &'a Family,
            prefix: Vec<serde_json::Number>,
            modes: &'a [Stability],
            dimensions: &'a [usize],
            window: usize,
            stable: bool,
            unstable: Vec<usize>,
        }
        let wire = Wire {
            family: &self.family,
            prefix: self.prefix.coeffs().iter().map(json_integer).collect(),
            modes: self.prefix.stability(),
            dimensions: &self.dimensions,
            window: self.window,
            stable: self.is_stable(),
            unstable: self.unstable(),
        };
        serde_json::to_string(&wire).expect("report serializes")
    }
}

/// A JSON number carrying an arbitrary-precision integer exactly.
pub fn json_integer(x: &BigInt) -> serde_json::Number {
    x.to_string()
        .parse()
        .expect("integers are valid JSON numbers")
}

/// Smallest schedule index from which coefficients `0..=r` are certified.
///
/// Bidiagonal `P_{m,d}`: a point whose `lambda_2` has denominator `m^k`
/// first appears at `d = k + 2` and has height at least `floor(k/2)/m`, so
/// every point new beyond `d = 2rm + 3` has height above `r`.
///
/// Multidiagonal `P(a; d)`: a point with support ending at `k` has height
/// at least `floor(k/s)/a_1`; beyond `d = s (r a_1 + 1)` that exceeds `r`.
pub fn certified_dimension(family: &Family, r: usize) -> Result<usize> {
    match family {
        Family::Bidiagonal { m } => {
            family.validate()?;
            Ok(2 * r * (*m as usize) + 3)
        }
        Family::Multidiagonal { a } => {
            family.validate()?;
            match simplex::gcd_a1_a2(a) {
                Some(1) => Ok(a.len() * (r * a[0] as usize + 1)),
                Some(g) => Err(Error::Precondition(format!(
                    "no certificate: gcd(a_1, a_2) = {g}, the height bound needs 1"
                ))),
                None => Err(Error::Precondition(
                    "no certificate: the height bound needs s >= 2".into(),
                )),
            }
        }
        other => Err(Error::Precondition(format!(
            "no certified height bound for the {} family",
            family_name(other)
        ))),
    }
}

fn family_name(f: &Family) -> &'static str {
    match f {
        Family::StandardReflexive => "standard reflexive",
        Family::QOfN => "q(n)",
        Family::Bidiagonal { .. } => "bidiagonal",
        Family::Multidiagonal { .. } => "multidiagonal",
        Family::Crosspolytope => "crosspolytope",
        Family::FreeSum { .. } => "free-sum",
        Family::Join { .. } => "join",
    }
}

fn truncated(h: &IntPolynomial, r: usize) -> Vec<BigInt> {
    (0..=r).map(|i| h.coeff(i)).collect()
}

/// Coefficients `0..=r` evaluated at [`certified_dimension`] and tagged certified.
///
/// Multidiagonal certificates are also re-evaluated at the next two
/// indices when they fit the budget; a disagreement is reported as
/// [`Error::CertificateViolated`].
pub fn limit_prefix_certified(family: &Family, r: usize, budget: u64) -> Result<LimitReport> {
    let dim = certified_dimension(family, r)?;
    let h = family.member(dim)?.hstar(budget)?;
    let coeffs = truncated(&h, r);
    let mut dimensions = vec![dim];
    if let Family::Multidiagonal { .. } = family {
        for later in [dim + 1, dim + 2] {
            let member = family.member(later)?;
            let observed = match member.hstar(budget) {
                Ok(h) => truncated(&h, r),
                Err(Error::BudgetExceeded { .. }) => break,
                Err(e) => return Err(e),
            };
            if let Some(degree) = (0..=r).find(|&i| observed[i] != coeffs[i]) {
                return Err(Error::CertificateViolated {
                    degree,
                    certified: coeffs[degree].clone(),
                    certified_dim: dim,
                    observed: observed[degree].clone(),
                    observed_dim: later,
                });
            }
            dimensions.push(later);
        }
    }
    Ok(LimitReport {
        family: family.clone(),
        prefix: SeriesPrefix::uniform(coeffs, Stability::Certified),
        dimensions,
        window: 1,
    })
}

/// Walks the schedule from its start up to `d_max` until coefficients
/// `0..=r` agree across `window` consecutive members.
///
/// Reaching `d_max` first is not an error: the report tags the indices that
/// still moved within the last window as [`Stability::Unstable`].
pub fn stabilize_empirical(
    family: &Family,
    r: usize,
    window: usize,
    d_max: usize,
    budget: u64,
) -> Result<LimitReport> {
    if window < 2 {
        return Err(Error::param("empirical window must be at least 2"));
    }
    family.validate()?;
    let start = family.start();
    if d_max < start {
        return Err(Error::param(format!(
            "d_max = {d_max} is below the schedule start {start}"
        )));
    }
    let mut history: Vec<Vec<BigInt>> = Vec::new();
    let mut dimensions = Vec::new();
    for index in start..=d_max {
        let h = family.member(index)?.hstar(budget)?;
        history.push(truncated(&h, r));
        dimensions.push(index);
        if history.len() >= window {
            let tail = &history[history.len() - window..];
            if tail.iter().all(|p| *p == tail[0]) {
                return Ok(LimitReport {
                    family: family.clone(),
                    prefix: SeriesPrefix::uniform(tail[0].clone(), Stability::Empirical),
                    dimensions,
                    window,
                });
            }
        }
    }
    let tail = &history[history.len().saturating_sub(window)..];
    let last = tail.last().expect("at least one member evaluated").clone();
    let stability = (0..=r)
        .map(|i| {
            if tail.len() == window && tail.iter().all(|p| p[i] == last[i]) {
                Stability::Empirical
            } else {
                Stability::Unstable
            }
        })
        .collect();
    Ok(LimitReport {
        family: family.clone(),
        prefix: SeriesPrefix::new(last, stability),
        dimensions,
        window,
    })
}

/// Prefix of the limit `h*(Q) / (1 - z)^k` of `Q ⊕ (⊕^k S_d)` as `d` grows.
pub fn free_sum_limit_prefix(q_hstar: &IntPolynomial, k: usize, r: usize) -> Result<SeriesPrefix> {
    if q_hstar.coeff(0) != BigInt::one() {
        return Err(Error::Precondition(
            "h*(Q) must have constant term 1".into(),
        ));
    }
    if k == 0 {
        return Err(Error::param("free-sum limit needs k >= 1"));
    }
    Ok(expand_rational_prefix(q_hstar, k, r))
}

/// Member-wise product of two limit prefixes; Ehrhart limits are closed
/// under multiplication via joins.
pub fn product_prefix(a: &SeriesPrefix, b: &SeriesPrefix) -> SeriesPrefix {
    a.product(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly_mul;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().copied().map(BigInt::from).collect()
    }

    #[test]
    fn certified_dimensions() {
        let bi = Family::Bidiagonal { m: 2 };
        assert_eq!(certified_dimension(&bi, 2).unwrap(), 11);
        assert_eq!(certified_dimension(&bi, 0).unwrap(), 3);
        assert_eq!(certified_dimension(&bi, 5).unwrap(), 23);
        let md = Family::Multidiagonal { a: vec![3, 2] };
        assert_eq!(certified_dimension(&md, 1).unwrap(), 8);
        let bad = Family::Multidiagonal { a: vec![4, 2] };
        assert!(matches!(
            certified_dimension(&bad, 1),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            certified_dimension(&Family::QOfN, 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn certified_bidiagonal_small() {
        let rep = limit_prefix_certified(&Family::Bidiagonal { m: 2 }, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.prefix.coeffs(), big(&[1, 1, 4, 20]).as_slice());
        assert!(rep
            .prefix
            .stability()
            .iter()
            .all(|s| *s == Stability::Certified));
        assert_eq!(rep.dimensions, vec![15]);
    }

    #[test]
    fn certified_multidiagonal_spot_checks() {
        let rep =
            limit_prefix_certified(&Family::Multidiagonal { a: vec![3, 2] }, 1, DEFAULT_BUDGET)
                .unwrap();
        assert_eq!(rep.dimensions, vec![8, 9, 10]);
        let direct = fpp::hstar(&simplex::make_multidiagonal(&[3, 2], 9).unwrap()).unwrap();
        assert_eq!(rep.prefix.coeffs(), truncated(&direct, 1).as_slice());
    }

    #[test]
    fn budget_is_enforced() {
        let err = limit_prefix_certified(&Family::Bidiagonal { m: 2 }, 5, 1 << 10).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                required: BigInt::from(1u64 << 21),
                budget: 1 << 10
            }
        );
    }

    #[test]
    fn empirical_q_of_n() {
        let rep = stabilize_empirical(&Family::QOfN, 8, 2, 20, DEFAULT_BUDGET).unwrap();
        assert!(rep.is_stable());
        assert_eq!(
            rep.prefix.coeffs(),
            big(&[1, 7, 15, 14, 16, 14, 16, 14, 16]).as_slice()
        );
    }

    #[test]
    fn crosspolytope_never_settles() {
        let rep = stabilize_empirical(&Family::Crosspolytope, 1, 3, 10, DEFAULT_BUDGET).unwrap();
        assert!(!rep.is_stable());
        assert_eq!(rep.unstable(), vec![1]);
        assert_eq!(rep.prefix.stability()[0], Stability::Empirical);
        assert_eq!(rep.dimensions, (1..=10).collect::<Vec<_>>());
    }

    #[test]
    fn free_sum_limits() {
        let s = free_sum_limit_prefix(&IntPolynomial::from_i64s(&[1, 1]), 1, 4).unwrap();
        assert_eq!(s.coeffs(), big(&[1, 2, 2, 2, 2]).as_slice());
        let s = free_sum_limit_prefix(&IntPolynomial::one(), 2, 3).unwrap();
        assert_eq!(s.coeffs(), big(&[1, 2, 3, 4]).as_slice());
        assert!(free_sum_limit_prefix(&IntPolynomial::from_i64s(&[2, 1]), 1, 3).is_err());
    }

    #[test]
    fn free_sum_family_matches_closed_form() {
        let base = FamilySpec::StandardReflexive { d: 1 };
        let fam = Family::FreeSum { base, k: 2 };
        let r = 4;
        let h = fam.member(r).unwrap().hstar(DEFAULT_BUDGET).unwrap();
        let expected = poly_mul(
            &IntPolynomial::from_i64s(&[1, 1]),
            &poly_mul(&IntPolynomial::geometric(r), &IntPolynomial::geometric(r)),
        );
        assert_eq!(h, expected);
        let limit = free_sum_limit_prefix(&IntPolynomial::from_i64s(&[1, 1]), 2, r).unwrap();
        assert_eq!(truncated(&h, r), limit.coeffs());
    }

    #[test]
    fn report_json_shape() {
        let rep = limit_prefix_certified(&Family::Bidiagonal { m: 2 }, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            rep.to_json(),
            r#"{"family":{"kind":"bidiagonal","m":2},"prefix":[1,1,4],"modes":["certified","certified","certified"],"dimensions":[11],"window":1,"stable":true,"unstable":[]}"#
        );
    }

    #[test]
    fn empirical_bidiagonal_m2() {
        let rep =
            stabilize_empirical(&Family::Bidiagonal { m: 2 }, 5, 3, 20, DEFAULT_BUDGET).unwrap();
        assert!(rep.is_stable());
        assert_eq!(rep.prefix.coeffs(), big(&[1, 1, 4, 20, 84, 356]).as_slice());
        assert!(*rep.dimensions.last().unwrap() <= 16);
    }

    #[test]
    fn empirical_multidiagonal_3_2() {
        let rep = stabilize_empirical(
            &Family::Multidiagonal { a: vec![3, 2] },
            2,
            3,
            12,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(rep.is_stable(), "{rep:?}");
        let cert =
            limit_prefix_certified(&Family::Multidiagonal { a: vec![3, 2] }, 2, DEFAULT_BUDGET);
        if let Ok(cert) = cert {
            assert_eq!(cert.prefix.coeffs(), rep.prefix.coeffs());
        }
    }

    #[test]
    fn join_family_is_multiplicative() {
        let left = Family::Bidiagonal { m: 2 };
        let right = Family::QOfN;
        let r = 3;
        let a = stabilize_empirical(&left, r, 3, 12, DEFAULT_BUDGET).unwrap();
        let b = stabilize_empirical(&right, r, 3, 12, DEFAULT_BUDGET).unwrap();
        let join = Family::Join {
            left: Box::new(left),
            right: Box::new(right),
        };
        let j = stabilize_empirical(&join, r, 3, 12, DEFAULT_BUDGET).unwrap();
        assert!(j.is_stable());
        assert_eq!(
            product_prefix(&a.prefix, &b.prefix).coeffs(),
            j.prefix.coeffs()
        );
    }
}
