//! Named desk-scale check suites shared by the CLI and the test harness.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::algebra::{expand_rational_prefix, IntPolynomial};
use crate::closedform;
use crate::combinators::{self, VertexPolytope};
use crate::error::{Error, Result};
use crate::fpp;
use crate::oracle;
use crate::simplex::{self, LatticeSimplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Eq1Consistency,
    FreeSumProduct,
    JoinProduct,
    PyramidInvariance,
    M2ClosedForm,
    LemmaPowers,
    FkhCensus,
    Jacobsthal,
    Recursion,
    HeightBounds,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Eq1Consistency,
        Suite::FreeSumProduct,
        Suite::JoinProduct,
        Suite::PyramidInvariance,
        Suite::M2ClosedForm,
        Suite::LemmaPowers,
        Suite::FkhCensus,
        Suite::Jacobsthal,
        Suite::Recursion,
        Suite::HeightBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Eq1Consistency => "eq1-consistency",
            Suite::FreeSumProduct => "freesum-product",
            Suite::JoinProduct => "join-product",
            Suite::PyramidInvariance => "pyramid-invariance",
            Suite::M2ClosedForm => "m2-closedform",
            Suite::LemmaPowers => "lemma-powers",
            Suite::FkhCensus => "fkh-census",
            Suite::Jacobsthal => "jacobsthal",
            Suite::Recursion => "recursion",
            Suite::HeightBounds => "height-bounds",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::param(format!("unknown suite `{s}`")))
    }
}

/// Optional size knobs; each suite reads the ones that apply.
#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteOptions {
    /// Upper index for `lemma-powers`, `recursion` and `jacobsthal`.
    pub max: Option<u32>,
    /// Dimension parameter for `fkh-census`.
    pub d: Option<usize>,
    /// Dilate bound for the oracle-backed suites.
    pub t_max: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn equal<T: PartialEq + fmt::Debug>(name: impl Into<String>, got: T, want: T) -> Self {
        let passed = got == want;
        let detail = if passed {
            String::new()
        } else {
            format!("got {got:?}, expected {want:?}")
        };
        Self::new(name, passed, detail)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        write!(f, "{verdict} {}", self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, opts: SuiteOptions) -> Result<Vec<Check>> {
    match suite {
        Suite::Eq1Consistency => eq1_consistency(opts.t_max.unwrap_or(4)),
        Suite::FreeSumProduct => freesum_product(opts.t_max.unwrap_or(3)),
        Suite::JoinProduct => join_product(opts.t_max.unwrap_or(3)),
        Suite::PyramidInvariance => pyramid_invariance(opts.t_max.unwrap_or(3)),
        Suite::M2ClosedForm => m2_closedform(),
        Suite::LemmaPowers => Ok(lemma_powers(opts.max.unwrap_or(40))),
        Suite::FkhCensus => fkh_census(opts.d.unwrap_or(14)),
        Suite::Jacobsthal => Ok(jacobsthal(opts.max.unwrap_or(20))),
        Suite::Recursion => Ok(recursion(opts.max.unwrap_or(40))),
        Suite::HeightBounds => height_bounds(),
    }
}

/// Desk-scale family members of dimension at most 6.
pub fn desk_members() -> Result<Vec<(String, LatticeSimplex)>> {
    let mut out = Vec::new();
    for d in 1..=6 {
        out.push((format!("S_{d}"), simplex::make_s(d)?));
    }
    for m in [2u64, 3] {
        for d in 3..=7 {
            out.push((format!("P_{{{m},{d}}}"), simplex::make_bidiagonal(m, d)?));
        }
    }
    for d in 2..=6 {
        out.push((
            format!("P((3,2);{d})"),
            simplex::make_multidiagonal(&[3, 2], d)?,
        ));
    }
    for d in 3..=6 {
        out.push((
            format!("P((4,3,2);{d})"),
            simplex::make_multidiagonal(&[4, 3, 2], d)?,
        ));
    }
    out.push((
        "Delta_(1,(1,1))".into(),
        simplex::make_delta_one_q(&[1, 1])?,
    ));
    out.push((
        "Delta_(1,(1,2,3))".into(),
        simplex::make_delta_one_q(&[1, 2, 3])?,
    ));
    Ok(out)
}

fn counted_vs_hstar(
    name: String,
    vertices: &[Vec<BigInt>],
    dim: usize,
    h: &IntPolynomial,
    t_max: u64,
) -> Result<Check> {
    let counted = oracle::ehrhart_prefix_of_hull(vertices, t_max)?;
    let expanded = expand_rational_prefix(h, dim + 1, t_max as usize);
    Ok(Check::equal(name, counted.coeffs(), expanded.coeffs()))
}

fn eq1_consistency(t_max: u64) -> Result<Vec<Check>> {
    desk_members()?
        .into_iter()
        .map(|(name, p)| {
            let counted = oracle::ehrhart_prefix_by_counting(&p, t_max)?;
            let expanded = expand_rational_prefix(&fpp::hstar(&p)?, p.dim() + 1, t_max as usize);
            Ok(Check::equal(name, counted.coeffs(), expanded.coeffs()))
        })
        .collect()
}

fn s(d: usize) -> Result<VertexPolytope> {
    Ok(simplex::make_s(d)?.into())
}

fn product_check(
    name: &str,
    p: &VertexPolytope,
    factors: [&VertexPolytope; 2],
    t_max: u64,
) -> Result<Vec<Check>> {
    let h = p.hstar()?;
    let product = &factors[0].hstar()? * &factors[1].hstar()?;
    Ok(vec![
        Check::equal(format!("{name} h* product"), h.clone(), product),
        counted_vs_hstar(format!("{name} oracle"), p.vertices(), p.dim(), &h, t_max)?,
    ])
}

fn freesum_product(t_max: u64) -> Result<Vec<Check>> {
    let (s1, s2) = (s(1)?, s(2)?);
    let mut checks = product_check(
        "S_2 + S_1",
        &combinators::free_sum(&s2, &s1)?,
        [&s2, &s1],
        t_max,
    )?;
    let square = combinators::free_sum(&s1, &s1)?;
    checks.extend(product_check("S_1 + S_1", &square, [&s1, &s1], t_max)?);
    checks.push(Check::equal(
        "S_1 + S_1 is (1+z)^2",
        square.hstar()?,
        IntPolynomial::from_i64s(&[1, 2, 1]),
    ));
    Ok(checks)
}

fn join_product(t_max: u64) -> Result<Vec<Check>> {
    let (s1, s2) = (s(1)?, s(2)?);
    product_check("S_1 * S_2", &combinators::join(&s1, &s2), [&s1, &s2], t_max)
}

fn pyramid_invariance(t_max: u64) -> Result<Vec<Check>> {
    let s2 = s(2)?;
    let base = s2.hstar()?;
    let once = combinators::pyramid(&s2);
    let twice = combinators::pyramid(&once);
    let mut checks = Vec::new();
    for (name, p) in [("pyramid(S_2)", &once), ("pyramid^2(S_2)", &twice)] {
        let h = p.hstar()?;
        checks.push(Check::equal(
            format!("{name} h* unchanged"),
            h.clone(),
            base.clone(),
        ));
        checks.push(counted_vs_hstar(
            format!("{name} oracle"),
            p.vertices(),
            p.dim(),
            &h,
            t_max,
        )?);
    }
    Ok(checks)
}

/// Leading coefficients of the `m = 2` bidiagonal limit.
pub const M2_SERIES: [u64; 11] = [1, 1, 4, 20, 84, 356, 1508, 6388, 27060, 114_628, 485_572];

fn m2_closedform() -> Result<Vec<Check>> {
    let want: Vec<BigInt> = M2_SERIES.iter().copied().map(BigInt::from).collect();
    let mut checks = vec![Check::equal(
        "closed form j = 0..10",
        closedform::m2_limit_prefix(10),
        want,
    )];
    for j in 0..=6u32 {
        let d = (3 * j as usize).max(3);
        let h = fpp::hstar(&simplex::make_bidiagonal(2, d)?)?;
        checks.push(Check::equal(
            format!("coefficient {j} at d = {d}"),
            h.coeff(j as usize),
            closedform::thm_m2_coefficient(j),
        ));
    }
    Ok(checks)
}

fn lemma_powers(max: u32) -> Vec<Check> {
    (1..=max)
        .map(|k| {
            Check::equal(
                format!("k = {k}"),
                closedform::lemma_sum(k),
                BigInt::from(1) << (k - 1),
            )
        })
        .collect()
}

fn fkh_census(d: usize) -> Result<Vec<Check>> {
    let census = fpp::bidiagonal_census(2, d)?;
    let mut checks = Vec::new();
    for k in 1..=d.saturating_sub(2) as u32 {
        for h in closedform::h_range(k) {
            let observed = census.get(&(k, h as usize)).copied().unwrap_or(0);
            checks.push(Check::equal(
                format!("k = {k}, h = {h}"),
                BigInt::from(observed),
                closedform::f_kh(k, h),
            ));
        }
    }
    Ok(checks)
}

fn jacobsthal(max: u32) -> Vec<Check> {
    let n = closedform::jacobsthal_lambda_numerators(max + 2);
    let start: Vec<BigInt> = [1, 1, 3, 5, 11].into_iter().map(BigInt::from).collect();
    let mut checks = vec![Check::equal("first numerators", n[..5].to_vec(), start)];
    let recurrence_holds = (2..n.len()).all(|j| n[j] == &n[j - 1] + 2 * &n[j - 2]);
    checks.push(Check::new(
        format!("n_j = n_(j-1) + 2 n_(j-2) through j = {max}"),
        recurrence_holds,
        "",
    ));
    checks
}

fn recursion(max: u32) -> Vec<Check> {
    let h = closedform::m2_limit_prefix(max);
    (4..=max as usize)
        .map(|i| Check::equal(format!("i = {i}"), h[i].clone(), 4 * &h[i - 1] + &h[i - 2]))
        .collect()
}

fn height_bounds() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for m in [2u64, 3] {
        for d in 3..=10 {
            let ok = fpp::check_bidiagonal_height_bound(m, d)?;
            checks.push(Check::new(format!("P_{{{m},{d}}}"), ok, ""));
        }
    }
    for a in [vec![3u64, 2], vec![4, 3, 2]] {
        for d in a.len()..=8 {
            let ok = fpp::check_multidiagonal_height_bound(&a, d)?;
            checks.push(Check::new(format!("P({a:?};{d})"), ok, ""));
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(checks: &[Check]) -> bool {
        checks.iter().all(|c| c.passed)
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_suites_pass() {
        for suite in [
            Suite::FreeSumProduct,
            Suite::JoinProduct,
            Suite::PyramidInvariance,
            Suite::Jacobsthal,
            Suite::Recursion,
        ] {
            let checks = run_suite(suite, SuiteOptions::default()).unwrap();
            assert!(all_pass(&checks), "{suite}: {checks:?}");
        }
    }

    #[test]
    fn lemma_fails_only_at_one() {
        let checks = run_suite(
            Suite::LemmaPowers,
            SuiteOptions {
                max: Some(40),
                ..Default::default()
            },
        )
        .unwrap();
        let failing: Vec<_> = checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        assert_eq!(failing, vec!["k = 1"]);
    }

    #[test]
    fn census_small() {
        let checks = run_suite(
            Suite::FkhCensus,
            SuiteOptions {
                d: Some(9),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(all_pass(&checks), "{checks:?}");
    }

    #[test]
    fn check_display() {
        assert_eq!(Check::new("x", true, "").to_string(), "pass x");
        assert_eq!(
            Check::equal("y", 1, 2).to_string(),
            "FAIL y: got 1, expected 2"
        );
    }
}
