//! Brute-force lattice point counting in dilates.
//!
//! Deliberately slow and simple. Simplex membership uses an integer
//! adjugate computed here by cofactor expansion, so nothing is shared with
//! the parallelepiped enumerator's back-substitution.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{expand_rational_prefix, SeriesPrefix};
use crate::error::{Error, Result};
use crate::fpp;
use crate::linalg::facet_inequalities;
use crate::simplex::LatticeSimplex;

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    // Laplace expansion along the first row; n stays below ten here.
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `(adj B, det B)` with `B^{-1} = adj B / det B`.
#[allow(clippy::needless_range_loop)]
fn adjugate(m: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let n = m.len();
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let c = det(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    (adj, det(m))
}

/// Iterates the integer points of a box, calling `visit` with each point.
fn for_each_box_point(lo: &[i64], hi: &[i64], mut visit: impl FnMut(&[i64])) {
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return;
    }
    let mut p = lo.to_vec();
    loop {
        visit(&p);
        let mut i = 0;
        loop {
            if i == p.len() {
                return;
            }
            if p[i] < hi[i] {
                p[i] += 1;
                break;
            }
            p[i] = lo[i];
            i += 1;
        }
    }
}

fn bounding_box(vertices: &[Vec<BigInt>], t: u64) -> Result<(Vec<i64>, Vec<i64>)> {
    let n = vertices.first().map_or(0, Vec::len);
    let t = BigInt::from(t);
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let coords = vertices.iter().map(|v| &v[i] * &t);
        let min = coords.clone().min().unwrap_or_default();
        let max = coords.max().unwrap_or_default();
        lo.push(
            min.to_i64()
                .ok_or_else(|| Error::UnsupportedForm("bounding box too large".into()))?,
        );
        hi.push(
            max.to_i64()
                .ok_or_else(|| Error::UnsupportedForm("bounding box too large".into()))?,
        );
    }
    Ok((lo, hi))
}

fn small(x: &BigInt) -> Result<i128> {
    x.to_i128().filter(|v| v.abs() < 1 << 60).ok_or_else(|| {
        Error::UnsupportedForm("matrix entries too large for the counting oracle".into())
    })
}

/// `|tP ∩ Z^n|` for a simplex: a box point `p` is inside iff the solution of
/// `B lambda = (t, p)` is componentwise nonnegative.
pub fn count_dilate_points(p: &LatticeSimplex, t: u64) -> Result<BigInt> {
    if t == 0 {
        return Ok(BigInt::one());
    }
    let b = p.homogenized();
    let rows: Vec<Vec<BigInt>> = (0..b.rows()).map(|i| b.row(i).to_vec()).collect();
    let (adj, d) = adjugate(&rows);
    let sign: i128 = if d.is_negative() { -1 } else { 1 };
    let adj: Vec<Vec<i128>> = adj
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| small(x).map(|v| v * sign))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let (lo, hi) = bounding_box(p.vertices(), t)?;
    let n = adj.len();
    let mut count = 0u64;
    let mut scaled = vec![0i128; n];
    for_each_box_point(&lo, &hi, |x| {
        for (i, row) in adj.iter().enumerate() {
            let mut s = row[0] * i128::from(t);
            for (a, xi) in row[1..].iter().zip(x) {
                s += a * i128::from(*xi);
            }
            scaled[i] = s;
        }
        if scaled.iter().all(|s| *s >= 0) {
            count += 1;
        }
    });
    Ok(BigInt::from(count))
}

/// `|tP ∩ Z^n|` for the convex hull of full-dimensional `vertices`, by
/// testing every box point against brute-force facet inequalities.
pub fn count_dilate_points_of_hull(vertices: &[Vec<BigInt>], t: u64) -> Result<BigInt> {
    if t == 0 {
        return Ok(BigInt::one());
    }
    let facets: Vec<(Vec<i128>, i128)> = facet_inequalities(vertices)
        .iter()
        .map(|(a, b)| Ok((a.iter().map(small).collect::<Result<_>>()?, small(b)?)))
        .collect::<Result<_>>()?;
    if facets.is_empty() {
        return Err(Error::Degenerate(
            "vertices do not span their ambient space".into(),
        ));
    }
    let (lo, hi) = bounding_box(vertices, t)?;
    let t = i128::from(t);
    let mut count = 0u64;
    for_each_box_point(&lo, &hi, |x| {
        let inside = facets.iter().all(|(a, b)| {
            let lhs: i128 = a.iter().zip(x).map(|(ai, xi)| ai * i128::from(*xi)).sum();
            lhs <= b * t
        });
        if inside {
            count += 1;
        }
    });
    Ok(BigInt::from(count))
}

/// `i(P; 0), ..., i(P; T)` as an exact series prefix.
pub fn ehrhart_prefix_by_counting(p: &LatticeSimplex, t_max: u64) -> Result<SeriesPrefix> {
    let coeffs = (0..=t_max)
        .map(|t| count_dilate_points(p, t))
        .collect::<Result<_>>()?;
    Ok(SeriesPrefix::exact(coeffs))
}

pub fn ehrhart_prefix_of_hull(vertices: &[Vec<BigInt>], t_max: u64) -> Result<SeriesPrefix> {
    let coeffs = (0..=t_max)
        .map(|t| count_dilate_points_of_hull(vertices, t))
        .collect::<Result<_>>()?;
    Ok(SeriesPrefix::exact(coeffs))
}

/// Counted Ehrhart prefix equals the expansion of `h*(P) / (1 - z)^(dim + 1)`.
pub fn consistency_check(p: &LatticeSimplex, t_max: u64) -> Result<bool> {
    let counted = ehrhart_prefix_by_counting(p, t_max)?;
    let h = fpp::hstar(p)?;
    let expanded = expand_rational_prefix(&h, p.dim() + 1, t_max as usize);
    Ok(counted.coeffs() == expanded.coeffs())
}
