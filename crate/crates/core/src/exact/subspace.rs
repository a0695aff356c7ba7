//! Linear subspaces of `Q^d` in canonical (reduced row-echelon) form.
//!
//! Matrix subspaces of `M_n` live in `Q^{n^2}` through row-major
//! flattening, so the trace pairing `tr(x^T y)` is the ordinary dot product
//! and subspace equality is basis equality.

use serde::{Deserialize, Serialize};

use super::elim::row_reduce;
use super::{Mat, Scalar};
use crate::error::{ensure_dim, Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr", into = "SubspaceRepr")]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl TryFrom<SubspaceRepr> for Subspace {
    type Error = Error;
    fn try_from(r: SubspaceRepr) -> Result<Self> {
        Subspace::span(r.ambient, r.basis)
    }
}

impl From<Subspace> for SubspaceRepr {
    fn from(s: Subspace) -> Self {
        SubspaceRepr {
            ambient: s.ambient,
            basis: s.basis,
        }
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in Q^{})", self.dim(), self.ambient)
    }
}

impl Subspace {
    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        for v in &vectors {
            ensure_dim(ambient, v.len())?;
        }
        let e = row_reduce(&vectors, ambient);
        Ok(Subspace {
            ambient,
            basis: e.rows,
        })
    }

    pub(crate) fn from_echelon_nullspace(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        Subspace::span(ambient, vectors).expect("nullspace vectors have ambient length")
    }

    /// Span of `n x n` matrices under row-major flattening.
    pub fn from_matrices(n: usize, mats: &[Mat]) -> Result<Self> {
        let mut vecs = Vec::with_capacity(mats.len());
        for m in mats {
            ensure_dim(n, m.rows())?;
            ensure_dim(n, m.cols())?;
            vecs.push(m.flatten());
        }
        Subspace::span(n * n, vecs)
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| {
                        if i == j {
                            Scalar::one()
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Subspace { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// The basis reshaped to `n x n` matrices (requires `ambient = n^2`).
    pub fn matrices(&self) -> Result<Vec<Mat>> {
        let n = matrix_side(self.ambient)?;
        self.basis.iter().map(|v| Mat::from_flat(n, v)).collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        // RREF: subtract the combination read off the pivot columns.
        let mut r = v.to_vec();
        for row in &self.basis {
            let p = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("nonzero basis row");
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &(&c * b);
                }
            }
        }
        r.iter().all(Scalar::is_zero)
    }

    pub fn contains_matrix(&self, m: &Mat) -> bool {
        self.contains(&m.flatten())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }

    /// Intersection and sum. The intersection is computed from the kernel of
    /// `[S | T]`, so it does not depend on `ortho_complement`.
    pub fn meet_join(&self, other: &Subspace) -> Result<(Subspace, Subspace)> {
        ensure_dim(self.ambient, other.ambient)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        let join = Subspace::span(self.ambient, all)?;

        let s = self.dim();
        let t = other.dim();
        // columns are the basis vectors of S then T
        let cols: Vec<&Vec<Scalar>> = self.basis.iter().chain(&other.basis).collect();
        let rows: Vec<Vec<Scalar>> = (0..self.ambient)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let kernel = row_reduce(&rows, s + t).nullspace();
        let meet_vectors = kernel
            .iter()
            .map(|coeffs| {
                (0..self.ambient)
                    .map(|i| {
                        self.basis
                            .iter()
                            .zip(&coeffs[..s])
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(b, c)| &b[i] * c)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let meet = Subspace::span(self.ambient, meet_vectors)?;
        Ok((meet, join))
    }

    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.meet_join(other)?.0)
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.meet_join(other)?.1)
    }

    /// Orthogonal complement for the dot product (the trace pairing on
    /// flattened matrices).
    pub fn ortho_complement(&self) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        let e = row_reduce(&self.basis, self.ambient);
        Subspace::from_echelon_nullspace(self.ambient, e.nullspace())
    }

    /// Whether `g S g^{-1} = S`.
    pub fn conj_invariant(&self, g: &Mat) -> Result<bool> {
        let n = matrix_side(self.ambient)?;
        ensure_dim(n, g.rows())?;
        let g_inv = g.inverse()?;
        for x in self.matrices()? {
            let y = &(g * &x) * &g_inv;
            if !self.contains_matrix(&y) {
                return Ok(false);
            }
        }
        // conjugation is injective, so containment forces equality
        Ok(true)
    }

    /// Whether `[a, S] ⊆ S` for every `a` in `generators`.
    pub fn bracket_invariant(&self, generators: &[Mat]) -> Result<bool> {
        let mats = self.matrices()?;
        for a in generators {
            for x in &mats {
                if !self.contains_matrix(&a.commutator(x)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `[x, y] ∈ S` for all basis pairs.
    pub fn is_bracket_closed(&self) -> Result<bool> {
        let mats = self.matrices()?;
        for (i, x) in mats.iter().enumerate() {
            for y in &mats[i + 1..] {
                if !self.contains_matrix(&x.commutator(y)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub(crate) fn matrix_side(ambient: usize) -> Result<usize> {
    let n = (ambient as f64).sqrt().round() as usize;
    if n * n == ambient {
        Ok(n)
    } else {
        Err(Error::Format(format!(
            "ambient dimension {ambient} is not a perfect square"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from(x)).collect()
    }

    fn skew3() -> Subspace {
        let mats: Vec<Mat> = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| &Mat::unit(3, i, j) - &Mat::unit(3, j, i))
            .collect();
        Subspace::from_matrices(3, &mats).unwrap()
    }

    #[test]
    fn complement_of_full_is_zero() {
        assert!(Subspace::full(9).ortho_complement().is_zero());
        assert_eq!(Subspace::zero(4).ortho_complement(), Subspace::full(4));
    }

    #[test]
    fn skew_complement_is_symmetric() {
        let sym = skew3().ortho_complement();
        assert_eq!(sym.dim(), 6);
        for m in sym.matrices().unwrap() {
            assert!(m.is_symmetric());
        }
        assert!(skew3().meet(&sym).unwrap().is_zero());
    }

    #[test]
    fn meet_join_of_equal() {
        let s = skew3();
        let (m, j) = s.meet_join(&s).unwrap();
        assert_eq!(m, s);
        assert_eq!(j, s);
    }

    #[test]
    fn meet_join_mismatch() {
        assert!(Subspace::zero(3).meet_join(&Subspace::zero(4)).is_err());
    }

    #[test]
    fn conj_identity_and_singular() {
        let s = skew3();
        assert!(s.conj_invariant(&Mat::identity(3)).unwrap());
        assert_eq!(
            s.conj_invariant(&Mat::zeros(3, 3)),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn skew_is_bracket_closed() {
        assert!(skew3().is_bracket_closed().unwrap());
    }

    #[test]
    fn json_canonicalizes() {
        let j = serde_json::json!({"ambient": 2, "basis": [["2", "2"], ["1", "1"]]});
        let s: Subspace = serde_json::from_value(j).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis()[0], v(&[1, 1]));
    }

    fn small_vectors(d: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-3i64..=3, d), 0..5)
    }

    proptest! {
        #[test]
        fn modular_identity(a in small_vectors(5), b in small_vectors(5)) {
            let s = Subspace::span(5, a.iter().map(|x| v(x)).collect()).unwrap();
            let t = Subspace::span(5, b.iter().map(|x| v(x)).collect()).unwrap();
            let (meet, join) = s.meet_join(&t).unwrap();
            prop_assert_eq!(meet.dim() + join.dim(), s.dim() + t.dim());
            prop_assert!(meet.is_subspace_of(&s));
            prop_assert!(meet.is_subspace_of(&t));
            prop_assert!(s.is_subspace_of(&join));
            prop_assert!(t.is_subspace_of(&join));
        }

        #[test]
        fn canonical_form_idempotent(a in small_vectors(4)) {
            let s = Subspace::span(4, a.iter().map(|x| v(x)).collect()).unwrap();
            let again = Subspace::span(4, s.basis().to_vec()).unwrap();
            prop_assert_eq!(again, s);
        }

        #[test]
        fn complement_is_involution(a in small_vectors(6)) {
            let s = Subspace::span(6, a.iter().map(|x| v(x)).collect()).unwrap();
            let c = s.ortho_complement();
            prop_assert_eq!(c.dim() + s.dim(), 6);
            prop_assert!(s.meet(&c).unwrap().is_zero());
            prop_assert_eq!(c.ortho_complement(), s);
        }
    }
}
