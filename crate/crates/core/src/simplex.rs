//! Lattice simplices and the named families built from them.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

/// Full-dimensional lattice simplex stored by its vertex list.
///
/// The homogenized matrix has an all-ones top row and the vertices as
/// columns below it; it is derived on first use and cached.
#[derive(Debug)]
pub struct LatticeSimplex {
    dim: usize,
    vertices: Vec<Vec<BigInt>>,
    homogenized: OnceLock<IntMatrix>,
}

impl Clone for LatticeSimplex {
    fn clone(&self) -> Self {
        Self {
            dim: self.dim,
            vertices: self.vertices.clone(),
            homogenized: self.homogenized.clone(),
        }
    }
}

impl PartialEq for LatticeSimplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for LatticeSimplex {}

impl LatticeSimplex {
    /// Validates `d + 1` affinely independent vertices in `Z^d`.
    pub fn from_vertices(vertices: Vec<Vec<BigInt>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::Degenerate("no vertices".into()));
        };
        let n = first.len();
        if vertices.iter().any(|v| v.len() != n) {
            return Err(Error::Degenerate("vertices have mixed lengths".into()));
        }
        if vertices.len() != n + 1 {
            return Err(Error::Degenerate(format!(
                "{} vertices in Z^{n}; a full-dimensional simplex needs {}",
                vertices.len(),
                n + 1
            )));
        }
        let s = Self {
            dim: n,
            vertices,
            homogenized: OnceLock::new(),
        };
        if s.homogenized().determinant().is_zero() {
            return Err(Error::Degenerate("vertices are affinely dependent".into()));
        }
        Ok(s)
    }

    pub fn from_i64_vertices(vertices: &[Vec<i64>]) -> Result<Self> {
        Self::from_vertices(
            vertices
                .iter()
                .map(|v| v.iter().copied().map(BigInt::from).collect())
                .collect(),
        )
    }

    /// Builds a simplex from a `d x (d+1)` matrix whose columns are the
    /// vertices, or a `d x d` matrix of nonzero vertices with the origin implicit.
    pub fn from_columns(matrix: &[Vec<BigInt>]) -> Result<Self> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::Degenerate("ragged matrix".into()));
        }
        let mut vertices: Vec<Vec<BigInt>> = (0..cols)
            .map(|j| (0..rows).map(|i| matrix[i][j].clone()).collect())
            .collect();
        if cols == rows {
            vertices.insert(0, vec![BigInt::zero(); rows]);
        } else if cols != rows + 1 {
            return Err(Error::Degenerate(format!(
                "a {rows}x{cols} matrix does not describe a {rows}-simplex"
            )));
        }
        Self::from_vertices(vertices)
    }

    pub fn from_i64_columns(matrix: &[Vec<i64>]) -> Result<Self> {
        Self::from_columns(
            &matrix
                .iter()
                .map(|r| r.iter().copied().map(BigInt::from).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    pub fn homogenized(&self) -> &IntMatrix {
        self.homogenized.get_or_init(|| {
            let n = self.dim + 1;
            let mut m = IntMatrix::zeros(n, n);
            for (j, v) in self.vertices.iter().enumerate() {
                m.set(0, j, BigInt::one());
                for (i, x) in v.iter().enumerate() {
                    m.set(i + 1, j, x.clone());
                }
            }
            m
        })
    }

    /// `|det|` of the homogenized matrix.
    pub fn normalized_volume(&self) -> BigInt {
        self.homogenized().determinant().abs()
    }

    /// Vertex 0 is the origin and the homogenized matrix is upper triangular
    /// with positive diagonal. This is all the parallelepiped enumerator needs.
    pub fn is_triangular(&self) -> bool {
        let b = self.homogenized();
        let n = b.rows();
        self.vertices[0].iter().all(Zero::is_zero)
            && (0..n).all(|i| b.get(i, i).is_positive() && (0..i).all(|j| b.get(i, j).is_zero()))
    }

    /// Hermite normal form: triangular, and every off-diagonal vertex entry
    /// lies in `[0, diagonal)` of its column.
    pub fn is_hnf(&self) -> bool {
        let b = self.homogenized();
        self.is_triangular()
            && (1..b.cols()).all(|j| {
                let diag = b.get(j, j);
                (1..j).all(|i| !b.get(i, j).is_negative() && b.get(i, j) < diag)
            })
    }

    /// Barycentric coordinates of `p` with respect to the vertices.
    pub fn barycentric(&self, p: &[BigInt]) -> Vec<BigRational> {
        let b = self.homogenized();
        let rows: Vec<Vec<BigRational>> = (0..b.rows())
            .map(|i| linalg::to_rational(b.row(i)))
            .collect();
        let mut rhs = vec![BigRational::one()];
        rhs.extend(linalg::to_rational(p));
        linalg::solve(&rows, &rhs).expect("homogenized matrix is nonsingular")
    }

    /// Origin strictly inside: every barycentric coordinate of `0` is positive.
    pub fn contains_origin_in_interior(&self) -> bool {
        self.barycentric(&vec![BigInt::zero(); self.dim])
            .iter()
            .all(Signed::is_positive)
    }

    /// Reflexive: origin interior and every facet lies on `{x : <a, x> = 1}`
    /// with `a` integral.
    pub fn is_reflexive(&self) -> bool {
        let d = self.dim;
        for skip in 0..=d {
            // normal a with <a, v> = 1 for every vertex of the facet opposite `skip`
            let rows: Vec<Vec<BigRational>> = self
                .vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, v)| linalg::to_rational(v))
                .collect();
            let ones = vec![BigRational::one(); d];
            let Some(a) = linalg::solve(&rows, &ones) else {
                // facet hyperplane passes through the origin
                return false;
            };
            let opposite: BigRational = linalg::to_rational(&self.vertices[skip])
                .iter()
                .zip(&a)
                .map(|(x, y)| x * y)
                .sum();
            if opposite >= BigRational::one() {
                return false;
            }
            if !a.iter().all(BigRational::is_integer) {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for LatticeSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        write!(f, "conv{{{}}}", verts.join(", "))
    }
}

fn unit(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// `S_d = conv{e_1, ..., e_d, -(e_1 + ... + e_d)}`.
pub fn make_s(d: usize) -> Result<LatticeSimplex> {
    if d < 1 {
        return Err(Error::param("S_d needs d >= 1"));
    }
    make_delta_one_q(&vec![1; d])
}

/// `conv{e_1, ..., e_d, -q}`.
pub fn make_delta_one_q(q: &[u64]) -> Result<LatticeSimplex> {
    if q.is_empty() {
        return Err(Error::param("q must be nonempty"));
    }
    if q.contains(&0) {
        return Err(Error::param("entries of q must be at least 1"));
    }
    let d = q.len();
    let mut vertices: Vec<Vec<BigInt>> = (0..d).map(|i| unit(d, i)).collect();
    vertices.push(q.iter().map(|&x| -BigInt::from(x)).collect());
    LatticeSimplex::from_vertices(vertices)
}

/// `q(n) = (1, ..., 1, 3n, 10n, 15n)` with `2n - 1` leading ones.
pub fn q_of_n(n: u64) -> Result<Vec<u64>> {
    if n < 1 {
        return Err(Error::param("q(n) needs n >= 1"));
    }
    let mut q = vec![1; (2 * n - 1) as usize];
    q.extend([3 * n, 10 * n, 15 * n]);
    Ok(q)
}

/// `Delta_(1, q(n))`, of dimension `2n + 2`.
///
/// Reflexivity and the product formula for h* are only known for `n >= 2`;
/// the `n = 1` member is built but carries no such guarantee.
pub fn make_q_of_n(n: u64) -> Result<LatticeSimplex> {
    make_delta_one_q(&q_of_n(n)?)
}

/// `P_{m,d}`: the `(d-1)`-simplex whose nonzero vertices are `e_1` and
/// `e_{j-1} + m e_j` for `2 <= j <= d - 1`.
///
/// The homogenized matrix is upper triangular with diagonal `(1, 1, m, ..., m)`.
pub fn make_bidiagonal(m: u64, d: usize) -> Result<LatticeSimplex> {
    if m < 2 {
        return Err(Error::param("P_{m,d} needs m >= 2"));
    }
    if d < 3 {
        return Err(Error::param("P_{m,d} needs d >= 3"));
    }
    make_banded(&[BigInt::from(m), BigInt::one()], d - 1)
}

/// `P(a; d)`: the `d`-simplex with banded upper-triangular vertex matrix.
///
/// Column `j >= s` carries `a_1` on the diagonal and `a_l` at row `j - l + 1`;
/// the `s - 1` leading columns, where the band would be cut off, are unit
/// vectors. With `a = (m, 1)` this is `P_{m, d+1}`. Normalized volume is
/// `a_1^(d - s + 1)`.
pub fn make_multidiagonal(a: &[u64], d: usize) -> Result<LatticeSimplex> {
    validate_multidiagonal(a, d)?;
    make_banded(&a.iter().copied().map(BigInt::from).collect::<Vec<_>>(), d)
}

pub(crate) fn validate_multidiagonal(a: &[u64], d: usize) -> Result<()> {
    let Some((&a1, rest)) = a.split_first() else {
        return Err(Error::param("a must be nonempty"));
    };
    if a.contains(&0) {
        return Err(Error::param("entries of a must be at least 1"));
    }
    if let Some(&aj) = rest.iter().find(|&&aj| aj >= a1) {
        return Err(Error::param(format!(
            "need a_1 > a_j for j >= 2, got a_1 = {a1}, a_j = {aj}"
        )));
    }
    if d < a.len() {
        return Err(Error::param(format!("P(a; d) needs d >= s = {}", a.len())));
    }
    Ok(())
}

fn make_banded(band: &[BigInt], d: usize) -> Result<LatticeSimplex> {
    let s = band.len();
    let mut vertices = vec![vec![BigInt::zero(); d]];
    for j in 1..=d {
        if j < s {
            vertices.push(unit(d, j - 1));
        } else {
            let mut v = vec![BigInt::zero(); d];
            for (l, a) in band.iter().enumerate() {
                v[j - 1 - l] = a.clone();
            }
            vertices.push(v);
        }
    }
    LatticeSimplex::from_vertices(vertices)
}

pub fn gcd_a1_a2(a: &[u64]) -> Option<u64> {
    match a {
        [a1, a2, ..] => Some(a1.gcd(a2)),
        _ => None,
    }
}

/// A single named simplex, fully parameterized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `S_d`.
    StandardReflexive { d: usize },
    /// `Delta_(1, q)`.
    Weighted { q: Vec<u64> },
    /// `Delta_(1, q(n))`.
    QOfN { n: u64 },
    /// `P_{m,d}`, of dimension `d - 1`.
    Bidiagonal { m: u64, d: usize },
    /// `P(a; d)`, of dimension `d`.
    Multidiagonal { a: Vec<u64>, d: usize },
}

impl FamilySpec {
    pub fn build(&self) -> Result<LatticeSimplex> {
        match self {
            Self::StandardReflexive { d } => make_s(*d),
            Self::Weighted { q } => make_delta_one_q(q),
            Self::QOfN { n } => make_q_of_n(*n),
            Self::Bidiagonal { m, d } => make_bidiagonal(*m, *d),
            Self::Multidiagonal { a, d } => make_multidiagonal(a, *d),
        }
    }
}

/// Parses the simplex file formats accepted by the CLI.
///
/// * JSON `{"vertices": [[..], ..]}`: all `d + 1` vertices, or `d` nonzero
///   vertices with the origin implicit.
/// * Plain text: one matrix row per line, whitespace separated, columns are
///   vertices; a square matrix means the origin is implicit.
pub fn parse_simplex(text: &str) -> Result<LatticeSimplex> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        #[derive(Deserialize)]
        struct VertexFile {
            vertices: Vec<Vec<serde_json::Number>>,
        }
        let file: VertexFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut vertices = file
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| {
                        x.to_string().parse::<BigInt>().map_err(|_| {
                            Error::Parse(format!("vertex entry {x} is not an integer"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = vertices.first().map_or(0, Vec::len);
        if vertices.len() == n {
            vertices.insert(0, vec![BigInt::zero(); n]);
        }
        return LatticeSimplex::from_vertices(vertices);
    }
    let rows = trimmed
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("not an integer: {tok}")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    LatticeSimplex::from_columns(&rows)
}
