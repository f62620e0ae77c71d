use num_bigint::BigInt;
use proptest::prelude::*;

use ehrlimit::algebra::{poly_mul, IntPolynomial, Stability};
use ehrlimit::fpp;
use ehrlimit::limits::{self, Family, DEFAULT_BUDGET};
use ehrlimit::simplex::{self, FamilySpec};

fn prefix(h: &IntPolynomial, r: usize) -> Vec<BigInt> {
    (0..=r).map(|i| h.coeff(i)).collect()
}

#[test]
fn certified_matches_empirical_bidiagonal() {
    for (m, r_max) in [(2u64, 5usize), (3, 3)] {
        let fam = Family::Bidiagonal { m };
        for r in 0..=r_max {
            let Ok(cert) = limits::limit_prefix_certified(&fam, r, DEFAULT_BUDGET) else {
                continue;
            };
            let emp = limits::stabilize_empirical(&fam, r, 3, 30, DEFAULT_BUDGET).unwrap();
            assert!(emp.is_stable(), "m = {m}, r = {r}");
            assert_eq!(
                cert.prefix.coeffs(),
                emp.prefix.coeffs(),
                "m = {m}, r = {r}"
            );
        }
    }
}

#[test]
fn certified_coefficients_persist_above_certificate() {
    let families = [
        Family::Bidiagonal { m: 2 },
        Family::Bidiagonal { m: 3 },
        Family::Multidiagonal { a: vec![3, 2] },
        Family::Multidiagonal { a: vec![4, 3, 2] },
    ];
    for fam in &families {
        for r in 0..=2 {
            let dim = limits::certified_dimension(fam, r).unwrap();
            let Ok(cert) = limits::limit_prefix_certified(fam, r, DEFAULT_BUDGET) else {
                continue;
            };
            assert!(cert
                .prefix
                .stability()
                .iter()
                .all(|s| *s == Stability::Certified));
            assert_eq!(cert.dimensions[0], dim);
            for later in [dim + 1, dim + 2] {
                match fam.member(later).unwrap().hstar(DEFAULT_BUDGET) {
                    Ok(h) => assert_eq!(
                        prefix(&h, r),
                        cert.prefix.coeffs(),
                        "{fam:?} r = {r} at {later}"
                    ),
                    Err(ehrlimit::error::Error::BudgetExceeded { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

fn geometric_power(d: usize, k: usize) -> IntPolynomial {
    (0..k).fold(IntPolynomial::one(), |acc, _| {
        poly_mul(&acc, &IntPolynomial::geometric(d))
    })
}

#[test]
fn free_sum_limit_matches_finite_members() {
    for (q, k) in [
        (vec![1u64], 1usize),
        (vec![1], 2),
        (vec![1, 1], 1),
        (vec![1, 2, 3], 2),
    ] {
        let base = FamilySpec::Weighted { q };
        let q_hstar = fpp::hstar(&base.build().unwrap()).unwrap();
        for r in 0..=4 {
            let limit = limits::free_sum_limit_prefix(&q_hstar, k, r).unwrap();
            let finite = poly_mul(&q_hstar, &geometric_power(r, k));
            assert_eq!(limit.coeffs(), prefix(&finite, r).as_slice());

            let d = r.max(1);
            let fam = Family::FreeSum {
                base: base.clone(),
                k,
            };
            let member = fam.member(d).unwrap().hstar(DEFAULT_BUDGET).unwrap();
            assert_eq!(member, poly_mul(&q_hstar, &geometric_power(d, k)));
        }
    }
}

#[test]
fn join_family_limit_is_product_of_limits() {
    let left = Family::Multidiagonal { a: vec![3, 2] };
    let right = Family::QOfN;
    let r = 2;
    let a = limits::stabilize_empirical(&left, r, 3, 12, DEFAULT_BUDGET).unwrap();
    let b = limits::stabilize_empirical(&right, r, 3, 12, DEFAULT_BUDGET).unwrap();
    let join = Family::Join {
        left: Box::new(left),
        right: Box::new(right),
    };
    let j = limits::stabilize_empirical(&join, r, 3, 10, DEFAULT_BUDGET).unwrap();
    assert!(j.is_stable());
    assert_eq!(
        limits::product_prefix(&a.prefix, &b.prefix).coeffs(),
        j.prefix.coeffs()
    );
}

#[test]
fn report_json_is_stable_and_ordered() {
    let rep = limits::stabilize_empirical(&Family::QOfN, 4, 2, 10, DEFAULT_BUDGET).unwrap();
    let json = rep.to_json();
    let keys = [
        "\"family\"",
        "\"prefix\"",
        "\"modes\"",
        "\"dimensions\"",
        "\"window\"",
        "\"stable\"",
        "\"unstable\"",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string(&v).unwrap(), json);
    let family: Family = serde_json::from_value(v["family"].clone()).unwrap();
    assert_eq!(family, Family::QOfN);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certified_prefix_agrees_with_direct_enumeration(m in 2u64..=3, r in 0usize..=2) {
        let fam = Family::Bidiagonal { m };
        let rep = limits::limit_prefix_certified(&fam, r, DEFAULT_BUDGET).unwrap();
        let d = limits::certified_dimension(&fam, r).unwrap();
        let h = fpp::hstar(&simplex::make_bidiagonal(m, d).unwrap()).unwrap();
        let direct = prefix(&h, r);
        prop_assert_eq!(rep.prefix.coeffs(), direct.as_slice());
    }

    #[test]
    fn empirical_prefix_is_monotone_in_degree(r in 0usize..=4) {
        let fam = Family::QOfN;
        let short = limits::stabilize_empirical(&fam, r, 2, 12, DEFAULT_BUDGET).unwrap();
        let long = limits::stabilize_empirical(&fam, r + 1, 2, 12, DEFAULT_BUDGET).unwrap();
        let head = &long.prefix.coeffs()[..=r];
        prop_assert_eq!(short.prefix.coeffs(), head);
    }
}
