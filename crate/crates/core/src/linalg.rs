//! Small dense exact linear algebra over `Z` and `Q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec_rational(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| x * BigRational::from_integer(a.clone()))
                    .sum()
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }
}

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `a x = b` for square nonsingular `a`; `None` when singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// A basis of the right kernel of `rows`.
pub fn kernel(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Outward facet inequalities `a . x <= b` of the convex hull of `points`,
/// which must affinely span their ambient space. Brute force over
/// `dim`-subsets, fine for the handful of vertices used here.
pub fn facet_inequalities(points: &[Vec<BigInt>]) -> Vec<(Vec<BigInt>, BigInt)> {
    let Some(n) = points.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut facets: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    let mut subset: Vec<usize> = (0..n).collect();
    if n == 0 || points.len() < n {
        return facets;
    }
    loop {
        // hyperplane a.x - b = 0 through the chosen points: kernel of [x | -1]
        let rows: Vec<Vec<BigRational>> = subset
            .iter()
            .map(|&i| {
                let mut r = to_rational(&points[i]);
                r.push(-BigRational::one());
                r
            })
            .collect();
        let ker = kernel(&rows, n + 1);
        if ker.len() == 1 {
            let h = primitive_integer(&ker[0]);
            let (a, b) = (h[..n].to_vec(), h[n].clone());
            let eval = |p: &Vec<BigInt>| p.iter().zip(&a).map(|(x, y)| x * y).sum::<BigInt>() - &b;
            let vals: Vec<BigInt> = points.iter().map(eval).collect();
            let below = vals.iter().all(|v| !v.is_positive());
            let above = vals.iter().all(|v| !v.is_negative());
            let oriented = if below {
                Some((a, b))
            } else if above {
                Some((a.iter().map(|x| -x).collect(), -b))
            } else {
                None
            };
            if let Some(f) = oriented {
                if !facets.contains(&f) {
                    facets.push(f);
                }
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return facets;
            }
            i -= 1;
            if subset[i] < points.len() - n + i {
                break;
            }
        }
        subset[i] += 1;
        for j in i + 1..n {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().copied().map(BigInt::from).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(m(&[&[2, 0], &[0, 3]]).determinant(), BigInt::from(6));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), BigInt::zero());
        assert_eq!(
            m(&[&[1, 1, 1], &[1, 0, -1], &[0, 1, -1]]).determinant(),
            BigInt::from(3)
        );
    }

    #[test]
    fn square_facets() {
        let pts: Vec<Vec<BigInt>> = [[1, 0], [-1, 0], [0, 1], [0, -1]]
            .iter()
            .map(|p| p.iter().copied().map(BigInt::from).collect())
            .collect();
        let f = facet_inequalities(&pts);
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|(_, b)| *b == BigInt::one()));
    }
}
