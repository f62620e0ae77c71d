//! Lattice points of the fundamental parallelepiped and h*-polynomials.
//!
//! For a simplex with homogenized matrix `B`, the lattice points of the
//! half-open parallelepiped `{B lambda : 0 <= lambda_i < 1}` are in bijection
//! with `Z^{d+1} / B Z^{d+1}`, and the h*-polynomial is the generating
//! function of their first coordinates (heights).
//!
//! When `B` is upper triangular the mixed-radix vectors `z` with
//! `0 <= z_i < B_ii` index the points. Solving `B lambda = z` from the
//! bottom row up and reducing each `lambda_i` modulo 1 as soon as it is
//! known gives a point `p` with `p_i = z_i (mod B_ii)`, so distinct `z`
//! give distinct points and all `det B` of them are reached.
//!
//! Every `lambda_i` has a denominator dividing `D_i = B_ii * ... * B_dd`,
//! which lets the counting kernel carry integer numerators against fixed
//! denominators.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::algebra::IntPolynomial;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::simplex::{self, LatticeSimplex};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FppPoint {
    /// Coefficients in `[0, 1)` of the homogenized vertices.
    pub lambda: Vec<BigRational>,
    /// The homogenized lattice point `B lambda`.
    pub point: Vec<BigInt>,
    /// First coordinate of `point`.
    pub height: usize,
}

impl FppPoint {
    fn from_lambda(b: &IntMatrix, lambda: Vec<BigRational>) -> Self {
        let point: Vec<BigInt> = b
            .mul_vec_rational(&lambda)
            .into_iter()
            .map(|x| {
                debug_assert!(x.is_integer(), "parallelepiped point must be integral");
                x.to_integer()
            })
            .collect();
        let height = point[0]
            .to_usize()
            .expect("height is a small nonnegative integer");
        Self {
            lambda,
            point,
            height,
        }
    }

    /// Largest index with a nonzero coefficient; `None` for the zero point.
    pub fn support_end(&self) -> Option<usize> {
        self.lambda.iter().rposition(|l| !l.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.iter().all(Zero::is_zero)
    }
}

/// Sorts points into a canonical order so streams can be compared as multisets.
pub fn canonical_multiset(points: impl IntoIterator<Item = FppPoint>) -> Vec<Vec<BigInt>> {
    let mut keys: Vec<Vec<BigInt>> = points.into_iter().map(|p| p.point).collect();
    keys.sort();
    keys
}

fn require_triangular(p: &LatticeSimplex) -> Result<()> {
    if p.is_triangular() {
        Ok(())
    } else {
        Err(Error::UnsupportedForm(
            "parallelepiped enumeration needs the origin as vertex 0 and an upper-triangular vertex matrix"
                .into(),
        ))
    }
}

fn diagonal(b: &IntMatrix) -> Vec<BigInt> {
    (0..b.rows()).map(|i| b.get(i, i).clone()).collect()
}

/// Streams the parallelepiped points of a triangular simplex.
///
/// Representatives `z` are visited in colexicographic order (`z_0` varies
/// fastest), so the zero point comes first. Only the levels at or below
/// the digit that changed are recomputed between consecutive points.
pub struct FppStream<'a> {
    b: &'a IntMatrix,
    diag: Vec<BigInt>,
    /// `denom[i] = diag[i] * ... * diag[n-1]`, with `denom[n] = 1`.
    denom: Vec<BigInt>,
    z: Vec<BigInt>,
    numer: Vec<BigInt>,
    dirty_from: Option<usize>,
    done: bool,
}

impl<'a> FppStream<'a> {
    fn new(b: &'a IntMatrix) -> Self {
        let n = b.rows();
        let diag = diagonal(b);
        let mut denom = vec![BigInt::one(); n + 1];
        for i in (0..n).rev() {
            denom[i] = &denom[i + 1] * &diag[i];
        }
        Self {
            b,
            diag,
            denom,
            z: vec![BigInt::zero(); n],
            numer: vec![BigInt::zero(); n],
            dirty_from: Some(n - 1),
            done: false,
        }
    }

    fn solve_level(&mut self, i: usize) {
        let n = self.numer.len();
        // lambda_i * D_i = z_i * D_{i+1} - sum_{j > i} B_ij * N_j * (D_{i+1} / D_j)
        let mut acc = &self.z[i] * &self.denom[i + 1];
        for j in i + 1..n {
            let bij = self.b.get(i, j);
            if !bij.is_zero() {
                acc -= bij * &self.numer[j] * (&self.denom[i + 1] / &self.denom[j]);
            }
        }
        self.numer[i] = acc.mod_floor(&self.denom[i]);
    }

    fn current(&self) -> FppPoint {
        let lambda = self
            .numer
            .iter()
            .zip(&self.denom)
            .map(|(num, den)| BigRational::new(num.clone(), den.clone()))
            .collect();
        FppPoint::from_lambda(self.b, lambda)
    }
}

impl Iterator for FppStream<'_> {
    type Item = FppPoint;

    fn next(&mut self) -> Option<FppPoint> {
        if self.done {
            return None;
        }
        if let Some(top) = self.dirty_from.take() {
            for i in (0..=top).rev() {
                self.solve_level(i);
            }
        }
        let out = self.current();
        // odometer with z_0 fastest
        let mut i = 0;
        loop {
            if i == self.z.len() {
                self.done = true;
                break;
            }
            self.z[i] += 1;
            if self.z[i] < self.diag[i] {
                self.dirty_from = Some(i);
                break;
            }
            self.z[i] = BigInt::zero();
            i += 1;
        }
        Some(out)
    }
}

/// Streams all `det B` parallelepiped points of a triangular simplex, zero point first.
pub fn enumerate_fpp(p: &LatticeSimplex) -> Result<FppStream<'_>> {
    require_triangular(p)?;
    Ok(FppStream::new(p.homogenized()))
}

/// Reference enumeration: `lambda = frac(B^{-1} z)` by a full rational
/// back-substitution for every representative `z`, in the same order as
/// [`enumerate_fpp`]. Slow; kept to check the other paths against.
pub fn enumerate_fpp_reference(p: &LatticeSimplex) -> Result<Vec<FppPoint>> {
    require_triangular(p)?;
    let b = p.homogenized();
    let n = b.rows();
    let diag = diagonal(b);
    let mut out = Vec::new();
    let mut z = vec![BigInt::zero(); n];
    loop {
        let mut lambda = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut rhs = BigRational::from_integer(z[i].clone());
            for (j, l) in lambda.iter().enumerate().skip(i + 1) {
                rhs -= BigRational::from_integer(b.get(i, j).clone()) * l;
            }
            lambda[i] = rhs / BigRational::from_integer(diag[i].clone());
        }
        let frac = lambda.into_iter().map(|l| &l - l.floor()).collect();
        out.push(FppPoint::from_lambda(b, frac));
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            z[i] += 1;
            if z[i] < diag[i] {
                break;
            }
            z[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Parallelepiped points of an arbitrary full-dimensional simplex.
///
/// With `N = |det B|`, the coefficient vectors `frac(B^{-1} z)` form the
/// subgroup of `(N^{-1} Z / Z)^{d+1}` generated by the columns of
/// `B^{-1}`; it is closed off by breadth-first search from zero.
pub fn enumerate_fpp_general(p: &LatticeSimplex) -> Result<Vec<FppPoint>> {
    let b = p.homogenized();
    let n = b.rows();
    let det = b.determinant().abs();
    let modulus = det.to_i64().ok_or_else(|| {
        Error::UnsupportedForm(format!(
            "determinant {det} too large for closure enumeration"
        ))
    })?;
    let rows: Vec<Vec<BigRational>> = (0..n).map(|i| linalg::to_rational(b.row(i))).collect();
    let mut generators: Vec<Vec<i64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[i] = BigRational::one();
        let col = linalg::solve(&rows, &e).expect("homogenized matrix is nonsingular");
        let g: Vec<i64> = col
            .iter()
            .map(|x| {
                let scaled = x * BigRational::from_integer(det.clone());
                debug_assert!(scaled.is_integer());
                scaled
                    .to_integer()
                    .mod_floor(&det)
                    .to_i64()
                    .expect("reduced modulo det")
            })
            .collect();
        if g.iter().any(|&x| x != 0) && !generators.contains(&g) {
            generators.push(g);
        }
    }
    let zero = vec![0i64; n];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
    let mut order = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for g in &generators {
            let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| (a + b) % modulus).collect();
            if seen.insert(w.clone()) {
                order.push(w.clone());
                queue.push_back(w);
            }
        }
    }
    debug_assert_eq!(order.len() as i64, modulus);
    let den = BigInt::from(modulus);
    Ok(order
        .into_iter()
        .map(|v| {
            let lambda = v
                .into_iter()
                .map(|x| BigRational::new(BigInt::from(x), den.clone()))
                .collect();
            FppPoint::from_lambda(b, lambda)
        })
        .collect())
}

/// Integer kernel for counting heights of a triangular simplex.
///
/// Numerators are `i128` against per-level denominators; construction
/// fails (and callers fall back to the arbitrary-precision stream) when a
/// bound on any intermediate value does not fit.
#[derive(Clone, Debug)]
pub(crate) struct HeightKernel {
    diag: Vec<i128>,
    denom: Vec<i128>,
    /// Row `i`: `(j, B_ij * D_{i+1} / D_j)` for nonzero entries right of the diagonal.
    terms: Vec<Vec<(usize, i128)>>,
    /// `D_0 / D_i`.
    weight: Vec<i128>,
}

impl HeightKernel {
    const LIMIT: i128 = i128::MAX / 8;

    pub(crate) fn new(b: &IntMatrix) -> Option<Self> {
        let n = b.rows();
        let diag: Vec<i128> = (0..n)
            .map(|i| b.get(i, i).to_i128())
            .collect::<Option<_>>()?;
        let mut denom = vec![1i128; n + 1];
        for i in (0..n).rev() {
            denom[i] = denom[i + 1]
                .checked_mul(diag[i])
                .filter(|v| *v < Self::LIMIT)?;
        }
        let mut terms = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::new();
            let mut bound = diag[i];
            for j in i + 1..n {
                let bij = b.get(i, j).to_i128()?;
                if bij != 0 {
                    row.push((j, bij.checked_mul(denom[i + 1] / denom[j])?));
                    bound = bound.checked_add(bij.checked_abs()?)?;
                }
            }
            bound
                .checked_mul(denom[i + 1])
                .filter(|v| *v < Self::LIMIT)?;
            terms.push(row);
        }
        let weight: Vec<i128> = (0..n).map(|i| denom[0] / denom[i]).collect();
        (n as i128)
            .checked_mul(denom[0])
            .filter(|v| *v < Self::LIMIT)?;
        Some(Self {
            diag,
            denom,
            terms,
            weight,
        })
    }

    fn levels(&self) -> usize {
        self.diag.len()
    }

    #[inline]
    fn numerator(&self, i: usize, z: i128, numer: &[i128]) -> i128 {
        let mut acc = z * self.denom[i + 1];
        for &(j, c) in &self.terms[i] {
            acc -= c * numer[j];
        }
        acc.rem_euclid(self.denom[i])
    }

    /// Counts heights below `level`, given numerators for all higher levels.
    fn fold(&self, level: usize, numer: &mut [i128], partial: i128, counts: &mut [u64]) {
        for z in 0..self.diag[level] {
            let x = self.numerator(level, z, numer);
            numer[level] = x;
            let s = partial + x * self.weight[level];
            if level == 0 {
                debug_assert_eq!(s % self.denom[0], 0, "height must be integral");
                counts[(s / self.denom[0]) as usize] += 1;
            } else {
                self.fold(level - 1, numer, s, counts);
            }
        }
    }

    pub(crate) fn count_heights(&self, parallel: bool) -> Vec<u64> {
        let n = self.levels();
        let mut counts = vec![0u64; n];
        let mut numer = vec![0i128; n];
        if !parallel || n < 2 {
            self.fold(n - 1, &mut numer, 0, &mut counts);
            return counts;
        }
        // Expand the top levels into independent partitions; each carries
        // the numerators fixed so far and the partial height sum.
        let mut tasks: Vec<(Vec<i128>, i128)> = vec![(numer, 0)];
        let mut level = n - 1;
        while tasks.len() < 1024 && level > 0 {
            let mut next = Vec::with_capacity(tasks.len() * self.diag[level] as usize);
            for (num, partial) in &tasks {
                for z in 0..self.diag[level] {
                    let mut num = num.clone();
                    let x = self.numerator(level, z, &num);
                    num[level] = x;
                    next.push((num, partial + x * self.weight[level]));
                }
            }
            tasks = next;
            level -= 1;
        }
        tasks
            .into_par_iter()
            .fold(
                || vec![0u64; n],
                |mut acc, (mut num, partial)| {
                    self.fold(level, &mut num, partial, &mut acc);
                    acc
                },
            )
            .reduce(|| vec![0u64; n], merge_counts)
    }
}

fn merge_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn counts_to_polynomial(counts: impl IntoIterator<Item = u64>) -> IntPolynomial {
    IntPolynomial::new(counts.into_iter().map(BigInt::from).collect())
}

fn heights_to_polynomial(dim: usize, points: impl IntoIterator<Item = FppPoint>) -> IntPolynomial {
    let mut counts = vec![0u64; dim + 1];
    for p in points {
        counts[p.height] += 1;
    }
    counts_to_polynomial(counts)
}

/// Whether the counting kernel may split work across threads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

/// h*-polynomial of a lattice simplex: the height generating function of
/// its parallelepiped points.
///
/// Triangular simplices use the integer counting kernel (or the exact
/// stream if the kernel's bounds overflow); anything else goes through
/// the group-closure enumeration.
pub fn hstar(p: &LatticeSimplex) -> Result<IntPolynomial> {
    hstar_with(p, Parallelism::Parallel)
}

pub fn hstar_with(p: &LatticeSimplex, parallelism: Parallelism) -> Result<IntPolynomial> {
    if !p.is_triangular() {
        return Ok(heights_to_polynomial(p.dim(), enumerate_fpp_general(p)?));
    }
    match HeightKernel::new(p.homogenized()) {
        Some(kernel) => Ok(counts_to_polynomial(
            kernel.count_heights(parallelism == Parallelism::Parallel),
        )),
        None => Ok(heights_to_polynomial(p.dim(), enumerate_fpp(p)?)),
    }
}

/// A nonzero parallelepiped point of `P_{m,d}`, named by `lambda_2 = b / m^k`.
///
/// `m` does not divide `b`, so the reduced denominator of `lambda_2` is exactly `m^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BidiagonalCode {
    pub k: u32,
    pub b: u64,
}

fn check_bidiagonal(m: u64, d: usize) -> Result<()> {
    if m < 2 || d < 3 {
        return Err(Error::param(format!(
            "P_{{m,d}} needs m >= 2 and d >= 3, got m = {m}, d = {d}"
        )));
    }
    Ok(())
}

/// All codes for `P_{m,d}`: `1 <= k <= d - 2`, `0 < b < m^k`, `m` not dividing `b`.
pub fn bidiagonal_codes(m: u64, d: usize) -> Result<impl Iterator<Item = BidiagonalCode>> {
    check_bidiagonal(m, d)?;
    let max_k = (d - 2) as u32;
    m.checked_pow(max_k)
        .ok_or_else(|| Error::param(format!("{m}^{max_k} overflows")))?;
    Ok((1..=max_k).flat_map(move |k| {
        (1..m.pow(k))
            .filter(move |b| b % m != 0)
            .map(move |b| BidiagonalCode { k, b })
    }))
}

/// Coefficient vector of the point named by `code`.
///
/// `lambda_1 = 1 - lambda_2`, then `lambda_{t+1} = frac(-m lambda_t)` for
/// `t >= 2`; each step strips one factor of `m` from the denominator, so
/// the chain ends after `lambda_{k+1}` (denominator `m`). `lambda_0` makes
/// the coordinate sum integral.
pub fn decode_bidiagonal(m: u64, d: usize, code: BidiagonalCode) -> Result<Vec<BigRational>> {
    check_bidiagonal(m, d)?;
    let BidiagonalCode { k, b } = code;
    let mk = m
        .checked_pow(k)
        .ok_or_else(|| Error::param(format!("{m}^{k} overflows")))?;
    if k == 0 || k as usize > d - 2 || b == 0 || b >= mk || b % m == 0 {
        return Err(Error::param(format!(
            "{code:?} is not a valid code for P_{{{m},{d}}}"
        )));
    }
    let mut lambda = vec![BigRational::zero(); d];
    let one = BigRational::one();
    let mr = BigRational::from_integer(BigInt::from(m));
    lambda[2] = BigRational::new(BigInt::from(b), BigInt::from(mk));
    lambda[1] = &one - &lambda[2];
    for t in 2..d - 1 {
        let x = -(&mr * &lambda[t]);
        lambda[t + 1] = &x - x.floor();
    }
    let rest: BigRational = lambda[1..].iter().sum();
    let x = -rest;
    lambda[0] = &x - x.floor();
    Ok(lambda)
}

/// The specialized enumerator for `P_{m,d}`: the zero point, then one point
/// per [`BidiagonalCode`] in increasing `(k, b)` order.
pub fn enumerate_bidiagonal(
    m: u64,
    d: usize,
) -> Result<impl Iterator<Item = (Option<BidiagonalCode>, FppPoint)>> {
    let simplex = simplex::make_bidiagonal(m, d)?;
    let b = simplex.homogenized().clone();
    let zero = FppPoint::from_lambda(&b, vec![BigRational::zero(); d]);
    let codes = bidiagonal_codes(m, d)?;
    Ok(std::iter::once((None, zero)).chain(codes.map(move |code| {
        let lambda = decode_bidiagonal(m, d, code).expect("codes are valid by construction");
        (Some(code), FppPoint::from_lambda(&b, lambda))
    })))
}

/// Number of nonzero points of `P_{m,d}` per `(k, height)`.
pub fn bidiagonal_census(m: u64, d: usize) -> Result<BTreeMap<(u32, usize), u64>> {
    let mut census = BTreeMap::new();
    for (code, point) in enumerate_bidiagonal(m, d)? {
        if let Some(code) = code {
            *census.entry((code.k, point.height)).or_insert(0) += 1;
        }
    }
    Ok(census)
}

/// `height >= floor(k/2) / m` for every nonzero point of `P_{m,d}`.
pub fn check_bidiagonal_height_bound(m: u64, d: usize) -> Result<bool> {
    for (code, point) in enumerate_bidiagonal(m, d)? {
        if let Some(code) = code {
            if (point.height as u64) * m < u64::from(code.k / 2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `p_0 >= floor(k/s) / a_1` for every nonzero point of `P(a; d)`, where `k`
/// is the point's largest index with nonzero coefficient.
pub fn check_multidiagonal_height_bound(a: &[u64], d: usize) -> Result<bool> {
    match simplex::gcd_a1_a2(a) {
        Some(1) => {}
        Some(g) => {
            return Err(Error::Precondition(format!(
                "gcd(a_1, a_2) = {g}, expected 1"
            )))
        }
        None => return Err(Error::Precondition("the height bound needs s >= 2".into())),
    }
    let p = simplex::make_multidiagonal(a, d)?;
    let s = a.len();
    let a1 = a[0] as usize;
    for point in enumerate_fpp(&p)? {
        if let Some(k) = point.support_end() {
            if point.height * a1 < k / s {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
