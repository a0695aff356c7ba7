//! Self-dual triples on `R^4`, the product G2-structure on `R^4 ⊕ R^3`,
//! and the constant torus-metric correspondence `g ↔ h`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{ensure_dim, Error, Result};
use crate::exact::{Mat, Scalar};
use crate::exterior::AltForm;

/// Three 2-forms on `R^4` and a reference volume form `Φ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SDTriple {
    pub omegas: [AltForm; 3],
    pub volume: AltForm,
}

impl SDTriple {
    /// `Ω_2, Ω_3, Ω_4` of the coordinate 4-plane with `Φ = dx^{1234}`.
    pub fn standard() -> Self {
        let w = |i| catalog::omega_cal(i).unwrap().restrict(4).unwrap();
        SDTriple {
            omegas: [w(2), w(3), w(4)],
            volume: AltForm::volume(4),
        }
    }

    /// `A^*` of every form; with `Φ` rescaled by `det A`, the Gram matrix is
    /// unchanged.
    pub fn pullback(&self, a: &Mat) -> Result<Self> {
        let omegas = [
            self.omegas[0].pullback(a)?,
            self.omegas[1].pullback(a)?,
            self.omegas[2].pullback(a)?,
        ];
        let volume = self.volume.pullback(a)?;
        Ok(SDTriple { omegas, volume })
    }

    fn validate(&self) -> Result<()> {
        for w in &self.omegas {
            ensure_dim(4, w.dim())?;
            ensure_dim(2, w.degree())?;
        }
        ensure_dim(4, self.volume.dim())?;
        ensure_dim(4, self.volume.degree())?;
        Ok(())
    }

    /// `c` with `Φ = c dx^{1234}`; the Gram matrix is reported relative to `Φ`,
    /// so `c` is the rescaling from the coordinate volume form.
    pub fn volume_factor(&self) -> Result<Scalar> {
        self.validate()?;
        let c = self.volume.coefficient(&[1, 2, 3, 4]);
        if c.is_zero() {
            return Err(Error::DegenerateTriple(
                "reference volume form is zero".into(),
            ));
        }
        Ok(c)
    }
}

/// `a` with `Ω_i ∧ Ω_j = 2 a_ij Φ`.
pub fn sd_gram(t: &SDTriple) -> Result<Mat> {
    let c = t.volume_factor()?;
    let two_c = &c * &Scalar::from(2);
    let mut a = Mat::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let w = t.omegas[i].wedge(&t.omegas[j])?;
            a.set(i, j, &w.coefficient(&[1, 2, 3, 4]) / &two_c);
        }
    }
    Ok(a)
}

/// Sylvester's criterion on a symmetric matrix.
pub fn is_positive_definite(m: &Mat) -> bool {
    if !m.is_square() || !m.is_symmetric() {
        return false;
    }
    (1..=m.rows()).all(|k| {
        Mat::from_fn(k, k, |i, j| m.get(i, j).clone())
            .determinant()
            .map(|d| d.is_positive())
            .unwrap_or(false)
    })
}

fn require_identity_gram(t: &SDTriple) -> Result<()> {
    let a = sd_gram(t)?;
    if !is_positive_definite(&a) {
        return Err(Error::DegenerateTriple(format!(
            "Gram matrix {a:?} is not positive definite"
        )));
    }
    if a != Mat::identity(3) {
        return Err(Error::DegenerateTriple(format!(
            "Gram matrix {a:?} is positive definite but not the identity; orthonormalize first"
        )));
    }
    Ok(())
}

/// A coframe `α^0..α^3`, as rows in the `dx` basis, with the residuals of
/// the three structure identities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coframe {
    pub alphas: [[f64; 4]; 4],
    pub residuals: [f64; 3],
}

impl Coframe {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(4, 4, |i, j| self.alphas[i][j])
    }
}

/// Skew matrix `M` with `Ω(u, v) = u^T M v`.
fn skew_matrix(w: &AltForm) -> Mat {
    let mut m = Mat::zeros(4, 4);
    for (b, c) in w.terms() {
        let idx = b.indices();
        m.set(idx[0] - 1, idx[1] - 1, c.clone());
        m.set(idx[1] - 1, idx[0] - 1, -c);
    }
    m
}

fn wedge1(a: &[f64], b: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(4, 4, |i, j| a[i] * b[j] - a[j] * b[i])
}

/// Residuals `max |Ω_i - (α^0∧α^i + α^j∧α^k)|` for cyclic `(i, j, k)`.
pub fn coframe_residuals(t: &SDTriple, alphas: &[[f64; 4]; 4]) -> [f64; 3] {
    let cyc = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];
    let mut out = [0.0; 3];
    for (n, &(i, j, k)) in cyc.iter().enumerate() {
        let model = wedge1(&alphas[0], &alphas[i]) + wedge1(&alphas[j], &alphas[k]);
        out[n] = (skew_matrix(&t.omegas[n]).to_f64() - model).amax();
    }
    out
}

/// Recover an oriented orthonormal coframe with
/// `Ω_1 = α^0∧α^1 + α^2∧α^3`, `Ω_2 = α^0∧α^2 + α^3∧α^1`,
/// `Ω_3 = α^0∧α^3 + α^1∧α^2`. Requires Gram matrix exactly the identity.
pub fn standardize_sd_triple(t: &SDTriple) -> Result<Coframe> {
    require_identity_gram(t)?;
    // Everything up to the final square root is exact.
    let m: Vec<Mat> = t.omegas.iter().map(skew_matrix).collect();
    let degenerate = |_| Error::DegenerateTriple("a 2-form of the triple is degenerate".into());
    let inv: Vec<Mat> = m
        .iter()
        .map(|x| x.inverse().map_err(degenerate))
        .collect::<Result<_>>()?;
    // L_ij = M_i^{-1} M_j is a complex structure; the dual frame is e_0,
    // e_k = -L_ij e_0 for cyclic (i, j, k).
    let e0 = Mat::from_i64(&[&[1], &[0], &[0], &[0]]);
    let e_k = |i: usize, j: usize| (&(&inv[i] * &m[j]) * &e0).scale(&Scalar::from(-1));
    let cols = [e0.clone(), e_k(1, 2), e_k(2, 0), e_k(0, 1)];
    let e = Mat::from_fn(4, 4, |r, c| cols[c].get(r, 0).clone());
    let lambda = (&(&e.transpose() * &m[0]) * &e).get(0, 1).clone();
    if !lambda.is_positive() {
        return Err(Error::DegenerateTriple(format!(
            "normalization factor {lambda} is not positive"
        )));
    }
    // coframe = rows of (E / sqrt λ)^{-1} = sqrt λ · E^{-1}
    let e_inv = e
        .inverse()
        .map_err(|_| Error::DegenerateTriple("recovered frame is singular".into()))?;
    let root = lambda.to_f64().sqrt();
    let mut alphas = [[0.0; 4]; 4];
    for (i, row) in alphas.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = root * e_inv.get(i, j).to_f64();
        }
    }
    let residuals = coframe_residuals(t, &alphas);
    Ok(Coframe { alphas, residuals })
}

/// `φ̄` and `*φ̄` on `R^4 ⊕ R^3` (coordinates `x^1..x^4, y^1..y^3` as
/// indices 1..7), with a witness `u` satisfying `u^* φ_0 ≈ φ̄`.
#[derive(Clone, Debug, Serialize)]
pub struct G2Structure {
    pub phibar: AltForm,
    pub star_phibar: AltForm,
    /// Rows 1-4 are the recovered coframe, rows 5-7 are `dy`.
    pub witness: Vec<Vec<f64>>,
    /// `max |u^* φ_0 - φ̄|` over coefficients.
    pub witness_residual: f64,
}

pub fn build_g2_structure(t: &SDTriple) -> Result<G2Structure> {
    let coframe = standardize_sd_triple(t)?;
    let ext = |f: &AltForm| f.extend_dim(7).expect("4 <= 7");
    let w: Vec<AltForm> = t.omegas.iter().map(ext).collect();
    let dy = |k: &[usize]| AltForm::basis(7, &k.iter().map(|i| i + 4).collect::<Vec<_>>());

    let mut phibar = dy(&[1, 2, 3]);
    for (k, wk) in w.iter().enumerate() {
        phibar = &phibar - &dy(&[k + 1]).wedge(wk)?;
    }
    // *_g 1 = α^{0123}, and Ω_1 ∧ Ω_1 = 2 α^{0123} = 2Φ, so it is Φ itself
    let mut star = ext(&t.volume);
    for (pair, wk) in [[2, 3], [3, 1], [1, 2]].iter().zip(&w) {
        star = &star - &dy(pair).wedge(wk)?;
    }

    let mut u = DMatrix::zeros(7, 7);
    for i in 0..4 {
        for j in 0..4 {
            u[(i, j)] = coframe.alphas[i][j];
        }
    }
    for i in 4..7 {
        u[(i, i)] = 1.0;
    }
    let phi0 = crate::calibnum::NumForm::from(&catalog::phi0());
    let residual = phi0
        .pullback(&u)
        .max_abs_diff(&crate::calibnum::NumForm::from(&phibar));
    Ok(G2Structure {
        phibar,
        star_phibar: star,
        witness: (0..7).map(|i| u.row(i).iter().copied().collect()).collect(),
        witness_residual: residual,
    })
}

/// The first permutation `σ` of `1..7` (lexicographic) with
/// `φ_0` relabelled by `dx^i ↦ dx^{σ(i)}` equal to `form`.
pub fn slot_permutation(form: &AltForm) -> Option<Vec<usize>> {
    let phi0 = catalog::phi0();
    let mut perm: Vec<usize> = (1..=7).collect();
    loop {
        if &phi0.relabel(7, &perm) == form {
            return Some(perm);
        }
        // next lexicographic permutation
        let i = (0..6).rev().find(|&i| perm[i] < perm[i + 1])?;
        let j = (i + 1..7)
            .rev()
            .find(|&j| perm[j] > perm[i])
            .expect("exists");
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusRoundTrip<M> {
    pub m: usize,
    /// `det(g)^{1/2} g^{-1}`.
    pub h: M,
    /// `det(h)^{1/(m-2)} h^{-1}`.
    pub g_back: M,
    /// Whether `g_back` reproduces `g` (exactly, or within 1e-12 for floats).
    pub roundtrip_ok: bool,
    /// `∂_j h^{ij} = 0`, trivially true for constant coefficients.
    pub divergence_ok: bool,
}

fn check_metric_shape(rows: usize, cols: usize) -> Result<()> {
    if rows != cols {
        return Err(Error::InvalidMetric(format!(
            "{rows}x{cols} matrix is not square"
        )));
    }
    if rows < 3 {
        return Err(Error::InvalidMetric(format!(
            "dimension m = {rows}: the exponent 1/(m-2) needs m >= 3"
        )));
    }
    Ok(())
}

/// Exact round trip for a rational SPD `g` whose determinant is a rational
/// square.
pub fn torus_metric_roundtrip(g: &Mat) -> Result<TorusRoundTrip<Mat>> {
    check_metric_shape(g.rows(), g.cols())?;
    if !is_positive_definite(g) {
        return Err(Error::InvalidMetric(
            "not symmetric positive definite".into(),
        ));
    }
    let m = g.rows();
    let delta = g.determinant()?;
    let root = delta.exact_root(2).ok_or_else(|| {
        Error::InvalidMetric(format!(
            "det g = {delta} is not a rational square; use the floating-point variant"
        ))
    })?;
    let h = g.inverse()?.scale(&root);
    let det_h = h.determinant()?;
    let factor = det_h
        .exact_root((m - 2) as u32)
        .ok_or_else(|| Error::InvariantViolation("det h has no rational root".into()))?;
    let g_back = h.inverse()?.scale(&factor);
    Ok(TorusRoundTrip {
        m,
        roundtrip_ok: &g_back == g,
        h,
        g_back,
        divergence_ok: true,
    })
}

pub fn torus_metric_roundtrip_f64(g: &DMatrix<f64>) -> Result<TorusRoundTrip<DMatrix<f64>>> {
    check_metric_shape(g.nrows(), g.ncols())?;
    if (g - g.transpose()).amax() > 1e-12 || g.clone().cholesky().is_none() {
        return Err(Error::InvalidMetric(
            "not symmetric positive definite".into(),
        ));
    }
    let m = g.nrows();
    let inv = |x: &DMatrix<f64>| x.clone().try_inverse().ok_or(Error::SingularMatrix);
    let h = inv(g)? * g.determinant().sqrt();
    let g_back = inv(&h)? * h.determinant().powf(1.0 / (m as f64 - 2.0));
    let ok = (&g_back - g).amax() <= 1e-12 * g.amax().max(1.0);
    Ok(TorusRoundTrip {
        m,
        h,
        g_back,
        roundtrip_ok: ok,
        divergence_ok: true,
    })
}
