//! Calibrated, special Lagrangian and coassociative planes.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{eval_frame, increasing_tuples, Frame, NumForm};
use crate::catalog;
use crate::error::{ensure_dim, Error, Result};
use crate::exterior::AltForm;

/// Whether `form(E) = orientation(E)` within `tol`.
pub fn is_calibrated_plane(form: &AltForm, frame: &Frame, tol: f64) -> Result<bool> {
    let v = eval_frame(&NumForm::from(form), frame)?;
    Ok((v - f64::from(frame.orientation())).abs() <= tol)
}

/// The orientation (if any) for which the plane is calibrated by `form`.
pub fn calibrated_orientation(form: &AltForm, frame: &Frame, tol: f64) -> Result<Option<i8>> {
    let v = eval_frame(&NumForm::from(form), frame)?;
    Ok([1i8, -1]
        .into_iter()
        .find(|&s| (v - f64::from(s)).abs() <= tol))
}

fn max_on_subframes(form: &NumForm, m: &DMatrix<f64>) -> f64 {
    increasing_tuples(m.ncols(), form.degree())
        .into_iter()
        .map(|cols| form.eval_mat(&m.select_columns(&cols)).abs())
        .fold(0.0, f64::max)
}

/// `max |form(e_I)|` over increasing sub-frames; zero iff `ι_E^* form = 0`.
pub fn restriction_max(form: &AltForm, frame: &Frame) -> Result<f64> {
    ensure_dim(form.dim(), frame.n())?;
    Ok(max_on_subframes(&NumForm::from(form), &frame.to_matrix()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlVerdict {
    pub is_lagrangian: bool,
    /// `max |ω_0(e_a, e_b)|` over frame pairs.
    pub lagrangian_residual: f64,
    /// `λ(E)` as `(re, im)`, with `ι_E^* Υ_0 = λ(E) Ω_E`; absent when `E` is
    /// not Lagrangian.
    pub phase: Option<(f64, f64)>,
    /// `λ(E) = 1` within tolerance; absent when `E` is not Lagrangian.
    pub is_special: Option<bool>,
}

/// Special-Lagrangian test for an oriented 3-plane in `C^3 = R^6`. The
/// volume `Ω_E` is positive on the frame exactly when its orientation is +1.
pub fn sl_predicate(frame: &Frame, tol: f64) -> Result<SlVerdict> {
    ensure_dim(6, frame.n())?;
    ensure_dim(3, frame.p())?;
    let m = frame.to_matrix();
    let residual = max_on_subframes(&NumForm::from(&catalog::omega0(3)), &m);
    if residual > tol {
        return Ok(SlVerdict {
            is_lagrangian: false,
            lagrangian_residual: residual,
            phase: None,
            is_special: None,
        });
    }
    let (re, im) = catalog::upsilon0(3);
    let s = f64::from(frame.orientation());
    let lam = (
        s * NumForm::from(&re).eval_mat(&m),
        s * NumForm::from(&im).eval_mat(&m),
    );
    let special = (lam.0 - 1.0).hypot(lam.1) <= tol;
    Ok(SlVerdict {
        is_lagrangian: true,
        lagrangian_residual: residual,
        phase: Some(lam),
        is_special: Some(special),
    })
}

/// Orthonormal basis of the orthogonal complement, as matrix columns.
pub fn normal_complement(frame: &Frame) -> DMatrix<f64> {
    let n = frame.n();
    let p = frame.p();
    let mut m = DMatrix::zeros(n, p + n);
    m.view_mut((0, 0), (n, p)).copy_from(&frame.to_matrix());
    m.view_mut((0, p), (n, n)).fill_with_identity();
    let q = m.qr().q();
    q.columns(p, n - p).into_owned()
}

/// The 2-form `β = -ι_E^*(v ⌟ φ_0)` on a coassociative 4-plane, in the
/// frame basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalImage {
    /// Coefficients on `e^{12}, e^{13}, e^{14}, e^{23}, e^{24}, e^{34}`.
    pub coefficients: [f64; 6],
    /// The calibrated orientation `sign *φ_0(E)` used for the Hodge star.
    pub orientation: i8,
    pub self_dual_residual: f64,
    pub self_dual: bool,
    pub norm: f64,
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// `β ↦ *β` on `Λ^2(R^4)` in the coefficient order of [`NormalImage`].
fn hodge4(b: &[f64; 6]) -> [f64; 6] {
    [b[5], -b[4], b[3], b[2], -b[1], b[0]]
}

pub fn coassoc_normal_iso(frame: &Frame, v: &[f64], tol: f64) -> Result<NormalImage> {
    ensure_dim(7, frame.n())?;
    ensure_dim(4, frame.p())?;
    ensure_dim(7, v.len())?;
    let phi = NumForm::from(&catalog::phi0());
    let m = frame.to_matrix();
    let restricted = max_on_subframes(&phi, &m);
    if restricted > tol {
        return Err(Error::NotCoassociative(restricted));
    }
    let vv = DMatrix::from_column_slice(7, 1, v);
    let along = (m.transpose() * &vv).amax();
    if along > tol {
        return Err(Error::NotNormal(along));
    }
    let vol = NumForm::from(&catalog::star_phi0()).eval_mat(&m);
    let orientation: i8 = if vol >= 0.0 { 1 } else { -1 };
    let mut coefficients = [0.0; 6];
    for (k, &(a, b)) in PAIRS.iter().enumerate() {
        let cols = DMatrix::from_columns(&[vv.column(0), m.column(a), m.column(b)]);
        // `+ 0.0` normalizes -0.0
        coefficients[k] = -phi.eval_mat(&cols) + 0.0;
    }
    let star = hodge4(&coefficients);
    let s = f64::from(orientation);
    let residual = coefficients
        .iter()
        .zip(&star)
        .map(|(b, sb)| (b - s * sb).abs())
        .fold(0.0, f64::max);
    Ok(NormalImage {
        coefficients,
        orientation,
        self_dual_residual: residual,
        self_dual: residual <= tol,
        norm: coefficients.iter().map(|x| x * x).sum::<f64>().sqrt(),
    })
}

/// Rank of `v ↦ β(v)` over an orthonormal basis of `E^⊥`.
pub fn coassoc_family_rank(frame: &Frame, tol: f64) -> Result<usize> {
    let normals = normal_complement(frame);
    let mut rows = Vec::new();
    for j in 0..normals.ncols() {
        let v: Vec<f64> = normals.column(j).iter().copied().collect();
        rows.push(coassoc_normal_iso(frame, &v, tol)?.coefficients);
    }
    let m = DMatrix::from_fn(rows.len(), 6, |i, k| rows[i][k]);
    Ok(m.rank(tol))
}
