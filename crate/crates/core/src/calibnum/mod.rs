//! Floating-point certification: comass by Stiefel ascent, calibrated-plane
//! predicates and group sampling.

mod comass;
mod group;
mod planes;

pub(crate) use comass::restart_rng;
pub use comass::{calibration_bound, comass_estimate, BoundCheck, ComassConfig, ComassResult};
pub use group::{
    det_complex, group_element, sample_algebra_coeffs, sample_group, to_complex, unitary_frame,
};
pub use planes::{
    calibrated_orientation, coassoc_family_rank, coassoc_normal_iso, is_calibrated_plane,
    normal_complement, restriction_max, sl_predicate, NormalImage, SlVerdict,
};

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::AltForm;

/// Default Gram tolerance for frames built internally.
pub const FRAME_TOL: f64 = 1e-12;

/// A constant `p`-form with `f64` coefficients and 0-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct NumForm {
    dim: usize,
    degree: usize,
    terms: Vec<(Vec<usize>, f64)>,
}

impl From<&AltForm> for NumForm {
    fn from(f: &AltForm) -> Self {
        NumForm {
            dim: f.dim(),
            degree: f.degree(),
            terms: f.to_f64_terms(),
        }
    }
}

impl NumForm {
    pub fn new(dim: usize, degree: usize, terms: Vec<(Vec<usize>, f64)>) -> Self {
        NumForm { dim, degree, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(Vec<usize>, f64)] {
        &self.terms
    }

    /// Value on the columns of the `n x p` matrix `v`.
    pub fn eval_mat(&self, v: &DMatrix<f64>) -> f64 {
        let p = self.degree;
        let mut buf = vec![0.0; p * p];
        let mut total = 0.0;
        for (idx, c) in &self.terms {
            for (r, &i) in idx.iter().enumerate() {
                for s in 0..p {
                    buf[r * p + s] = v[(i, s)];
                }
            }
            total += c * det(&mut buf, p);
        }
        total
    }

    /// Euclidean gradient of `v ↦ eval_mat(v)`.
    pub(crate) fn grad_mat(&self, v: &DMatrix<f64>) -> DMatrix<f64> {
        let p = self.degree;
        let mut g = DMatrix::zeros(self.dim, p);
        let mut minor = vec![0.0; p * p];
        let mut sub = vec![0.0; p * p];
        for (idx, c) in &self.terms {
            for (r, &i) in idx.iter().enumerate() {
                for s in 0..p {
                    minor[r * p + s] = v[(i, s)];
                }
            }
            // d det / d m_rs is the (r, s) cofactor
            for r in 0..p {
                for s in 0..p {
                    let mut k = 0;
                    for rr in (0..p).filter(|&rr| rr != r) {
                        for ss in (0..p).filter(|&ss| ss != s) {
                            sub[k] = minor[rr * p + ss];
                            k += 1;
                        }
                    }
                    let sign = if (r + s) % 2 == 0 { 1.0 } else { -1.0 };
                    g[(idx[r], s)] += c * sign * det(&mut sub[..k], p - 1);
                }
            }
        }
        g
    }

    /// Coefficients of `A^* α`, evaluated on every increasing index tuple.
    pub fn pullback(&self, a: &DMatrix<f64>) -> NumForm {
        let n = self.dim;
        let mut terms = Vec::new();
        for idx in increasing_tuples(n, self.degree) {
            let cols = DMatrix::from_fn(n, self.degree, |i, s| a[(i, idx[s])]);
            let c = self.eval_mat(&cols);
            if c != 0.0 {
                terms.push((idx, c));
            }
        }
        NumForm::new(n, self.degree, terms)
    }

    /// Largest coefficient difference, over all index tuples.
    pub fn max_abs_diff(&self, other: &NumForm) -> f64 {
        let mut all: std::collections::BTreeMap<&[usize], f64> = Default::default();
        for (idx, c) in &self.terms {
            *all.entry(idx).or_default() += c;
        }
        for (idx, c) in &other.terms {
            *all.entry(idx).or_default() -= c;
        }
        all.values().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// All strictly increasing `p`-tuples from `0..n`.
pub fn increasing_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Determinant of a row-major `p x p` matrix (destroys the buffer).
pub(crate) fn det(m: &mut [f64], p: usize) -> f64 {
    match p {
        0 => 1.0,
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => {
            let mut d = 1.0;
            for col in 0..p {
                let piv = (col..p)
                    .max_by(|&a, &b| m[a * p + col].abs().total_cmp(&m[b * p + col].abs()))
                    .expect("nonempty range");
                if m[piv * p + col] == 0.0 {
                    return 0.0;
                }
                if piv != col {
                    for s in 0..p {
                        m.swap(piv * p + s, col * p + s);
                    }
                    d = -d;
                }
                let a = m[col * p + col];
                d *= a;
                for r in col + 1..p {
                    let f = m[r * p + col] / a;
                    if f != 0.0 {
                        for s in col..p {
                            m[r * p + s] -= f * m[col * p + s];
                        }
                    }
                }
            }
            d
        }
    }
}

/// `p` orthonormal vectors in `R^n` with an orientation sign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameRepr", into = "FrameRepr")]
pub struct Frame {
    n: usize,
    vectors: Vec<Vec<f64>>,
    orientation: i8,
}

#[derive(Serialize, Deserialize)]
struct FrameRepr {
    n: usize,
    vectors: Vec<Vec<f64>>,
    #[serde(default = "positive")]
    orientation: i8,
}

fn positive() -> i8 {
    1
}

impl TryFrom<FrameRepr> for Frame {
    type Error = Error;
    fn try_from(r: FrameRepr) -> Result<Self> {
        // files carry decimal digits, so accept a looser residual
        Frame::with_tolerance(r.n, r.vectors, r.orientation, 1e-9)
    }
}

impl From<Frame> for FrameRepr {
    fn from(f: Frame) -> Self {
        FrameRepr {
            n: f.n,
            vectors: f.vectors,
            orientation: f.orientation,
        }
    }
}

impl Frame {
    pub fn new(n: usize, vectors: Vec<Vec<f64>>, orientation: i8) -> Result<Self> {
        Frame::with_tolerance(n, vectors, orientation, FRAME_TOL)
    }

    pub fn with_tolerance(
        n: usize,
        vectors: Vec<Vec<f64>>,
        orientation: i8,
        tol: f64,
    ) -> Result<Self> {
        if orientation != 1 && orientation != -1 {
            return Err(Error::Format(format!(
                "orientation must be ±1, got {orientation}"
            )));
        }
        if vectors.len() > n {
            return Err(Error::OutOfRange {
                what: "frame size",
                value: vectors.len(),
                max: n,
            });
        }
        for v in &vectors {
            crate::error::ensure_dim(n, v.len())?;
        }
        let f = Frame {
            n,
            vectors,
            orientation,
        };
        let res = f.gram_residual();
        if res > tol {
            return Err(Error::NotOrthonormal(res));
        }
        Ok(f)
    }

    /// Columns of an `n x p` matrix with orthonormal columns.
    pub fn from_columns(v: &DMatrix<f64>, orientation: i8) -> Result<Self> {
        let vectors = (0..v.ncols())
            .map(|j| v.column(j).iter().copied().collect())
            .collect();
        Frame::new(v.nrows(), vectors, orientation)
    }

    /// `e_{i_1}, ..., e_{i_p}` (1-based).
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let vectors = indices
            .iter()
            .map(|&i| (0..n).map(|k| if k + 1 == i { 1.0 } else { 0.0 }).collect())
            .collect();
        Frame::new(n, vectors, 1).expect("coordinate frames are orthonormal")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn with_orientation(&self, orientation: i8) -> Frame {
        Frame {
            orientation,
            ..self.clone()
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.p(), |i, j| self.vectors[j][i])
    }

    /// `max |<v_i, v_j> - δ_ij|`.
    pub fn gram_residual(&self) -> f64 {
        let m = self.to_matrix();
        let g = m.transpose() * &m;
        let mut r: f64 = 0.0;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let target = if i == j { 1.0 } else { 0.0 };
                r = r.max((g[(i, j)] - target).abs());
            }
        }
        r
    }

    /// `g` applied to each vector.
    pub fn transform(&self, g: &DMatrix<f64>) -> Result<Frame> {
        Frame::from_columns(&(g * self.to_matrix()), self.orientation)
    }
}

/// Value of `form` on the frame vectors, in order (orientation ignored).
pub fn eval_frame(form: &NumForm, frame: &Frame) -> Result<f64> {
    if form.degree() != frame.p() {
        return Err(Error::ArityMismatch {
            degree: form.degree(),
            given: frame.p(),
        });
    }
    crate::error::ensure_dim(form.dim(), frame.n())?;
    Ok(form.eval_mat(&frame.to_matrix()))
}

/// Thin QR factor with positive diagonal in `R`.
pub(crate) fn qf(m: &DMatrix<f64>) -> DMatrix<f64> {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..q.ncols() {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// A Haar-distributed point of the Stiefel manifold `V_p(R^n)`.
pub(crate) fn random_stiefel<R: Rng>(rng: &mut R, n: usize, p: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, p, |_, _| rng.sample::<f64, _>(StandardNormal));
    qf(&g)
}
