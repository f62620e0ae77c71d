//! Free sums, joins and lattice pyramids, with h* tracked through the
//! construction tree rather than re-enumerated.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{poly_mul, IntPolynomial};
use crate::error::{Error, Result};
use crate::fpp;
use crate::simplex::LatticeSimplex;

/// How a [`VertexPolytope`] was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Simplex(LatticeSimplex),
    /// The single lattice point `R^0`.
    Point,
    FreeSum {
        left: Box<VertexPolytope>,
        right: Box<VertexPolytope>,
        left_reflexive: bool,
    },
    Join(Box<VertexPolytope>, Box<VertexPolytope>),
    Pyramid(Box<VertexPolytope>),
}

/// A full-dimensional lattice polytope given by its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPolytope {
    dim: usize,
    vertices: Vec<Vec<BigInt>>,
    provenance: Provenance,
}

impl From<LatticeSimplex> for VertexPolytope {
    fn from(s: LatticeSimplex) -> Self {
        Self {
            dim: s.dim(),
            vertices: s.vertices().to_vec(),
            provenance: Provenance::Simplex(s),
        }
    }
}

impl VertexPolytope {
    pub fn point() -> Self {
        Self {
            dim: 0,
            vertices: vec![Vec::new()],
            provenance: Provenance::Point,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The polytope as a simplex when it has `dim + 1` vertices.
    pub fn as_simplex(&self) -> Option<LatticeSimplex> {
        match &self.provenance {
            Provenance::Simplex(s) => Some(s.clone()),
            _ if self.dim > 0 && self.vertices.len() == self.dim + 1 => {
                LatticeSimplex::from_vertices(self.vertices.clone()).ok()
            }
            _ => None,
        }
    }

    /// Origin strictly inside. Joins and pyramids always have the origin on
    /// a facet (the last coordinate is `>= 0` with equality at the origin).
    pub fn contains_origin_in_interior(&self) -> bool {
        match &self.provenance {
            Provenance::Simplex(s) => s.contains_origin_in_interior(),
            Provenance::FreeSum { left, right, .. } => {
                left.contains_origin_in_interior() && right.contains_origin_in_interior()
            }
            Provenance::Point | Provenance::Join(..) | Provenance::Pyramid(_) => false,
        }
    }

    /// Reflexivity for simplices and free sums of them; a free sum of
    /// origin-interior polytopes is reflexive iff both summands are.
    pub fn is_reflexive(&self) -> bool {
        match &self.provenance {
            Provenance::Simplex(s) => s.is_reflexive(),
            Provenance::FreeSum { left, right, .. } => left.is_reflexive() && right.is_reflexive(),
            Provenance::Point | Provenance::Join(..) | Provenance::Pyramid(_) => false,
        }
    }

    /// h* from the construction tree: parallelepiped enumeration at
    /// simplex leaves, products at joins and at free sums with a reflexive
    /// left summand, unchanged through pyramids.
    pub fn hstar(&self) -> Result<IntPolynomial> {
        match &self.provenance {
            Provenance::Simplex(s) => fpp::hstar(s),
            Provenance::Point => Ok(IntPolynomial::one()),
            Provenance::FreeSum {
                left,
                right,
                left_reflexive,
            } => {
                if !left_reflexive {
                    return Err(Error::NotReflexive(
                        "the left summand of this free sum is not reflexive".into(),
                    ));
                }
                Ok(poly_mul(&left.hstar()?, &right.hstar()?))
            }
            Provenance::Join(p, q) => Ok(poly_mul(&p.hstar()?, &q.hstar()?)),
            Provenance::Pyramid(p) => p.hstar(),
        }
    }
}

fn padded(v: &[BigInt], before: usize, after: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); before];
    out.extend_from_slice(v);
    out.extend(std::iter::repeat_n(BigInt::zero(), after));
    out
}

/// `P ⊕ Q = conv(P × {0} ∪ {0} × Q)`; both must contain the origin in their interior.
pub fn free_sum(p: &VertexPolytope, q: &VertexPolytope) -> Result<VertexPolytope> {
    if !p.contains_origin_in_interior() {
        return Err(Error::Precondition(
            "free sum: left summand does not contain the origin in its interior".into(),
        ));
    }
    if !q.contains_origin_in_interior() {
        return Err(Error::Precondition(
            "free sum: right summand does not contain the origin in its interior".into(),
        ));
    }
    let mut vertices: Vec<Vec<BigInt>> = p.vertices.iter().map(|v| padded(v, 0, q.dim)).collect();
    vertices.extend(q.vertices.iter().map(|w| padded(w, p.dim, 0)));
    Ok(VertexPolytope {
        dim: p.dim + q.dim,
        vertices,
        provenance: Provenance::FreeSum {
            left: Box::new(p.clone()),
            right: Box::new(q.clone()),
            left_reflexive: p.is_reflexive(),
        },
    })
}

/// `P ⋆ Q = conv(P × {0} × {0} ∪ {0} × Q × {1})`.
pub fn join(p: &VertexPolytope, q: &VertexPolytope) -> VertexPolytope {
    let mut vertices: Vec<Vec<BigInt>> = p
        .vertices
        .iter()
        .map(|v| {
            let mut x = padded(v, 0, q.dim);
            x.push(BigInt::zero());
            x
        })
        .collect();
    vertices.extend(q.vertices.iter().map(|w| {
        let mut x = padded(w, p.dim, 0);
        x.push(BigInt::one());
        x
    }));
    VertexPolytope {
        dim: p.dim + q.dim + 1,
        vertices,
        provenance: Provenance::Join(Box::new(p.clone()), Box::new(q.clone())),
    }
}

/// Lattice pyramid: `conv(P × {0} ∪ {(0, ..., 0, 1)})`.
pub fn pyramid(p: &VertexPolytope) -> VertexPolytope {
    let mut vertices: Vec<Vec<BigInt>> = p.vertices.iter().map(|v| padded(v, 0, 1)).collect();
    let mut apex = vec![BigInt::zero(); p.dim];
    apex.push(BigInt::one());
    vertices.push(apex);
    VertexPolytope {
        dim: p.dim + 1,
        vertices,
        provenance: Provenance::Pyramid(Box::new(p.clone())),
    }
}

/// `⊕^k P`, built as `P ⊕ (P ⊕ (... ⊕ P))`.
pub fn free_sum_power(p: &VertexPolytope, k: usize) -> Result<VertexPolytope> {
    if k == 0 {
        return Err(Error::param("free-sum power needs k >= 1"));
    }
    let mut acc = p.clone();
    for _ in 1..k {
        acc = free_sum(p, &acc)?;
    }
    Ok(acc)
}

/// The join of two triangular simplices with coordinates reordered to
/// `(x_P, e, x_Q)`, so that the result is triangular again. This is a
/// coordinate permutation of [`join`], hence unimodularly equivalent.
pub fn triangular_join(p: &LatticeSimplex, q: &LatticeSimplex) -> Result<LatticeSimplex> {
    if !p.is_triangular() || !q.is_triangular() {
        return Err(Error::UnsupportedForm(
            "triangular join needs triangular summands".into(),
        ));
    }
    let (dp, dq) = (p.dim(), q.dim());
    let mut vertices: Vec<Vec<BigInt>> =
        p.vertices().iter().map(|v| padded(v, 0, dq + 1)).collect();
    for w in q.vertices() {
        let mut x = vec![BigInt::zero(); dp];
        x.push(BigInt::one());
        x.extend_from_slice(w);
        vertices.push(x);
    }
    LatticeSimplex::from_vertices(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{make_bidiagonal, make_s};

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn s(d: usize) -> VertexPolytope {
        make_s(d).unwrap().into()
    }

    fn unit(d: usize) -> VertexPolytope {
        let cols: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
            .collect();
        LatticeSimplex::from_i64_columns(&cols).unwrap().into()
    }

    #[test]
    fn crosspolytope_square() {
        let sq = free_sum(&s(1), &s(1)).unwrap();
        assert_eq!(sq.dim(), 2);
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.hstar().unwrap(), poly(&[1, 2, 1]));
        assert!(sq.is_reflexive());
    }

    #[test]
    fn free_sum_product() {
        let fs = free_sum(&s(2), &s(1)).unwrap();
        assert_eq!(
            fs.hstar().unwrap(),
            poly_mul(&poly(&[1, 1, 1]), &poly(&[1, 1]))
        );
    }

    #[test]
    fn free_sum_needs_interior_origin() {
        assert!(matches!(
            free_sum(&unit(2), &s(1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn free_sum_with_non_reflexive_left_refuses_product() {
        // origin interior but a facet at lattice distance 2
        let q: VertexPolytope = LatticeSimplex::from_i64_vertices(&[vec![2], vec![-1]])
            .unwrap()
            .into();
        assert!(q.contains_origin_in_interior());
        assert!(!q.is_reflexive());
        let fs = free_sum(&q, &s(1)).unwrap();
        assert!(matches!(fs.hstar(), Err(Error::NotReflexive(_))));
        assert!(free_sum(&s(1), &q).unwrap().hstar().is_ok());
    }

    #[test]
    fn join_of_segments() {
        let j = join(&s(1), &s(1));
        assert_eq!(j.dim(), 3);
        assert!(j.as_simplex().is_some());
        assert_eq!(j.hstar().unwrap(), poly(&[1, 2, 1]));
        assert_eq!(j.as_simplex().unwrap().normalized_volume(), BigInt::from(4));
    }

    #[test]
    fn join_with_point_is_pyramid() {
        let p = s(2);
        let jp = join(&p, &VertexPolytope::point());
        let py = pyramid(&p);
        assert_eq!(jp.vertices(), py.vertices());
        assert_eq!(jp.hstar().unwrap(), p.hstar().unwrap());
    }

    #[test]
    fn pyramid_of_unit_simplex() {
        let py = pyramid(&unit(3));
        assert_eq!(py.vertices(), unit(4).vertices());
        assert_eq!(py.hstar().unwrap(), IntPolynomial::one());
        let twice = pyramid(&pyramid(&s(2)));
        assert_eq!(twice.hstar().unwrap(), poly(&[1, 1, 1]));
    }

    #[test]
    fn triangular_join_volume_and_hstar() {
        let p = make_bidiagonal(2, 4).unwrap();
        let q = make_bidiagonal(3, 4).unwrap();
        let placed = triangular_join(&p, &q).unwrap();
        assert!(placed.is_triangular());
        assert_eq!(
            placed.normalized_volume(),
            p.normalized_volume() * q.normalized_volume()
        );
        let provenance = join(&p.clone().into(), &q.clone().into()).hstar().unwrap();
        assert_eq!(fpp::hstar(&placed).unwrap(), provenance);
    }

    #[test]
    fn free_sum_power_of_segments() {
        let c = free_sum_power(&s(1), 3).unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.hstar().unwrap(), poly(&[1, 3, 3, 1]));
    }
}
