//! Group elements as exponentials of exact Lie-algebra elements.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::comass::restart_rng;
use super::Frame;
use crate::error::{Error, Result};
use crate::exact::Subspace;

/// `exp(Σ c_i b_i)` for the basis `b_i` of a matrix subspace.
pub fn group_element(algebra: &Subspace, coeffs: &[f64]) -> Result<DMatrix<f64>> {
    let basis = algebra.matrices()?;
    if coeffs.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: coeffs.len(),
        });
    }
    let n = crate::exact::matrix_side(algebra.ambient())?;
    let mut x = DMatrix::zeros(n, n);
    for (b, c) in basis.iter().zip(coeffs) {
        x += b.to_f64() * *c;
    }
    Ok(x.exp())
}

pub fn sample_algebra_coeffs<R: Rng>(rng: &mut R, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// The `index`-th sample of the seeded stream: `exp` of an algebra element
/// with coefficients uniform in `[-1, 1]`.
pub fn sample_group(algebra: &Subspace, seed: u64, index: u64) -> Result<DMatrix<f64>> {
    let mut rng = restart_rng(seed, index);
    let coeffs = sample_algebra_coeffs(&mut rng, algebra.dim());
    group_element(algebra, &coeffs)
}

/// The complex `m x m` matrix of a real `2m x 2m` matrix commuting with
/// `J(m)`, for complex coordinates `z_k = x_k + i x_{m+k}`.
pub fn to_complex(a: &DMatrix<f64>) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    if !n.is_multiple_of(2) || a.ncols() != n {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let m = n / 2;
    Ok(DMatrix::from_fn(m, m, |i, j| {
        Complex64::new(a[(i, j)], a[(m + i, j)])
    }))
}

pub fn det_complex(a: &DMatrix<Complex64>) -> Complex64 {
    a.determinant()
}

/// `A e_1, ..., A e_m` for a real `2m x 2m` matrix `A`.
pub fn unitary_frame(a: &DMatrix<f64>) -> Result<Frame> {
    let m = a.nrows() / 2;
    Frame::with_tolerance(
        a.nrows(),
        (0..m)
            .map(|j| a.column(j).iter().copied().collect())
            .collect(),
        1,
        1e-10,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibnum::NumForm;
    use crate::catalog::{self, CatalogKey};
    use crate::stabilizer::{stab_algebra, FormSystem, SystemName};

    #[test]
    fn zero_coefficients_give_identity() {
        let su3 = catalog::get_space(CatalogKey::Su(3)).unwrap();
        let g = group_element(&su3, &[0.0; 8]).unwrap();
        assert_eq!(g, DMatrix::identity(6, 6));
        assert!(group_element(&su3, &[0.0; 3]).is_err());
    }

    #[test]
    fn sampled_g2_preserves_phi() {
        let sys = FormSystem::named(SystemName::G2);
        let g2 = stab_algebra(&sys);
        for i in 0..5 {
            let g = sample_group(&g2, 42, i).unwrap();
            for a in sys.generators() {
                let f = NumForm::from(a);
                assert!(f.pullback(&g).max_abs_diff(&f) < 1e-10);
            }
        }
    }

    #[test]
    fn sampled_su3_is_unitary_with_unit_det() {
        let su3 = catalog::get_space(CatalogKey::Su(3)).unwrap();
        let j = catalog::j_split(3).to_f64();
        for i in 0..5 {
            let a = sample_group(&su3, 1, i).unwrap();
            assert!((a.transpose() * &a - DMatrix::identity(6, 6)).amax() < 1e-10);
            assert!((&a * &j - &j * &a).amax() < 1e-10);
            let d = det_complex(&to_complex(&a).unwrap());
            assert!((d - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn stabilizer_exponentials_preserve_generators() {
        for name in [SystemName::Su3, SystemName::G2, SystemName::Sp2Sp1] {
            let sys = FormSystem::named(name);
            let g = stab_algebra(&sys);
            for x in g.matrices().unwrap() {
                let e = x.to_f64().exp();
                for a in sys.generators() {
                    let f = NumForm::from(a);
                    assert!(f.pullback(&e).max_abs_diff(&f) < 1e-10, "{name}");
                }
            }
        }
    }
}
