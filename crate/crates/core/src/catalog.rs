//! Named constant forms, matrices and matrix subspaces.
//!
//! Keys are written `name` or `name(p1,p2)`, e.g. `omega0(3)`, `wirtinger(3,2)`,
//! `J(1)`, `W14`. Parameterless spellings of the `m`-families default to
//! `m = 3`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Mat, Scalar, Subspace};
use crate::exterior::AltForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogKey {
    Omega0(usize),
    Upsilon0(usize),
    ReUpsilon0(usize),
    ImUpsilon0(usize),
    OmegaStar(usize),
    UpsilonStar(usize),
    ReUpsilonStar(usize),
    ImUpsilonStar(usize),
    Phi0,
    StarPhi0,
    /// `Ω_i` for `i ∈ {2,3,4}`, on `R^7`.
    OmegaCal(usize),
    Wirtinger(usize, usize),
    Kraines,
    J(usize),
    JStar(usize),
    R6,
    R7,
    W5,
    W14,
    W22,
    Su(usize),
    SuStar(usize),
    U(usize),
}

/// Every accepted key name, for help text.
pub const KEY_NAMES: &[&str] = &[
    "omega0(m)",
    "upsilon0(m)",
    "re_upsilon0(m)",
    "im_upsilon0(m)",
    "omega_star(m)",
    "upsilon_star(m)",
    "re_upsilon_star(m)",
    "im_upsilon_star(m)",
    "phi0",
    "star_phi0",
    "omega_cal(i)",
    "wirtinger(m,p)",
    "kraines",
    "J(m)",
    "Jstar(m)",
    "R6",
    "R7",
    "W5",
    "W14",
    "W22",
    "su(m)",
    "su_star(m)",
    "u(m)",
];

/// What a key resolves to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Form,
    Matrix,
    Space,
}

impl CatalogKey {
    pub fn kind(self) -> Kind {
        use CatalogKey::*;
        match self {
            J(_) | JStar(_) | R6 | R7 => Kind::Matrix,
            W5 | W14 | W22 | Su(_) | SuStar(_) | U(_) => Kind::Space,
            _ => Kind::Form,
        }
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CatalogKey::*;
        match self {
            Omega0(m) => write!(f, "omega0({m})"),
            Upsilon0(m) => write!(f, "upsilon0({m})"),
            ReUpsilon0(m) => write!(f, "re_upsilon0({m})"),
            ImUpsilon0(m) => write!(f, "im_upsilon0({m})"),
            OmegaStar(m) => write!(f, "omega_star({m})"),
            UpsilonStar(m) => write!(f, "upsilon_star({m})"),
            ReUpsilonStar(m) => write!(f, "re_upsilon_star({m})"),
            ImUpsilonStar(m) => write!(f, "im_upsilon_star({m})"),
            Phi0 => write!(f, "phi0"),
            StarPhi0 => write!(f, "star_phi0"),
            OmegaCal(i) => write!(f, "omega_cal({i})"),
            Wirtinger(m, p) => write!(f, "wirtinger({m},{p})"),
            Kraines => write!(f, "kraines"),
            J(m) => write!(f, "J({m})"),
            JStar(m) => write!(f, "Jstar({m})"),
            R6 => write!(f, "R6"),
            R7 => write!(f, "R7"),
            W5 => write!(f, "W5"),
            W14 => write!(f, "W14"),
            W22 => write!(f, "W22"),
            Su(m) => write!(f, "su({m})"),
            SuStar(m) => write!(f, "su_star({m})"),
            U(m) => write!(f, "u({m})"),
        }
    }
}

impl FromStr for CatalogKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = match s.find('(') {
            Some(open) => {
                let close = s
                    .strip_suffix(')')
                    .ok_or_else(|| Error::UnknownKey(s.to_string()))?;
                let params: Vec<usize> = close[open + 1..]
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<usize>().map_err(|_| Error::InvalidParams {
                            key: s.to_string(),
                            reason: format!("`{}` is not a nonnegative integer", p.trim()),
                        })
                    })
                    .collect::<Result<_>>()?;
                (&s[..open], params)
            }
            None => (s, Vec::new()),
        };
        let bad = |reason: &str| Error::InvalidParams {
            key: s.to_string(),
            reason: reason.to_string(),
        };
        let m_param = |default: usize| -> Result<usize> {
            let m = match params.as_slice() {
                [] => default,
                [m] => *m,
                _ => return Err(bad("expected one parameter")),
            };
            if m == 0 || 2 * m > crate::exterior::MAX_DIM {
                return Err(bad("m must satisfy 1 <= m <= 8"));
            }
            Ok(m)
        };
        let none = |key: CatalogKey| -> Result<CatalogKey> {
            if params.is_empty() {
                Ok(key)
            } else {
                Err(bad("takes no parameters"))
            }
        };
        use CatalogKey::*;
        match name {
            "omega0" => Ok(Omega0(m_param(3)?)),
            "upsilon0" => Ok(Upsilon0(m_param(3)?)),
            "re_upsilon0" => Ok(ReUpsilon0(m_param(3)?)),
            "im_upsilon0" => Ok(ImUpsilon0(m_param(3)?)),
            "omega_star" => Ok(OmegaStar(m_param(3)?)),
            "upsilon_star" => Ok(UpsilonStar(m_param(3)?)),
            "re_upsilon_star" => Ok(ReUpsilonStar(m_param(3)?)),
            "im_upsilon_star" => Ok(ImUpsilonStar(m_param(3)?)),
            "phi0" => none(Phi0),
            "star_phi0" => none(StarPhi0),
            "omega_cal" => match params.as_slice() {
                [i] if (2..=4).contains(i) => Ok(OmegaCal(*i)),
                _ => Err(bad("expected one index in 2..=4")),
            },
            "wirtinger" => match params.as_slice() {
                [m, p] if *m >= 1 && 2 * m <= crate::exterior::MAX_DIM && *p <= *m => {
                    Ok(Wirtinger(*m, *p))
                }
                _ => Err(bad("expected (m,p) with 0 <= p <= m <= 8")),
            },
            "kraines" => none(Kraines),
            "J" => Ok(J(m_param(3)?)),
            "Jstar" => Ok(JStar(m_param(3)?)),
            "R6" => none(R6),
            "R7" => none(R7),
            "W5" => none(W5),
            "W14" => none(W14),
            "W22" => none(W22),
            "su" => Ok(Su(m_param(3)?)),
            "su_star" => Ok(SuStar(m_param(3)?)),
            "u" => Ok(U(m_param(3)?)),
            _ => Err(Error::UnknownKey(s.to_string())),
        }
    }
}

/// A real form, or a complex form as its real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FormValue {
    Real(AltForm),
    Complex { re: AltForm, im: AltForm },
}

impl FormValue {
    /// The real form, or the real part.
    pub fn re(&self) -> &AltForm {
        match self {
            FormValue::Real(f) => f,
            FormValue::Complex { re, .. } => re,
        }
    }

    pub fn into_real(self) -> Result<AltForm> {
        match self {
            FormValue::Real(f) => Ok(f),
            FormValue::Complex { .. } => Err(Error::Format("form is complex".into())),
        }
    }
}

/// Catalog object of any kind, for generic dumping.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum CatalogValue {
    Form(FormValue),
    Matrix(Mat),
    Space(Subspace),
}

pub fn get(key: CatalogKey) -> Result<CatalogValue> {
    Ok(match key.kind() {
        Kind::Form => CatalogValue::Form(get_form(key)?),
        Kind::Matrix => CatalogValue::Matrix(get_matrix(key)?),
        Kind::Space => CatalogValue::Space(get_space(key)?),
    })
}

fn wrong_kind(key: CatalogKey, what: &str) -> Error {
    Error::InvalidParams {
        key: key.to_string(),
        reason: format!("not a {what}"),
    }
}

pub fn get_form(key: CatalogKey) -> Result<FormValue> {
    use CatalogKey::*;
    Ok(match key {
        Omega0(m) => FormValue::Real(omega0(m)),
        Upsilon0(m) => {
            let (re, im) = upsilon0(m);
            FormValue::Complex { re, im }
        }
        ReUpsilon0(m) => FormValue::Real(upsilon0(m).0),
        ImUpsilon0(m) => FormValue::Real(upsilon0(m).1),
        OmegaStar(m) => FormValue::Real(omega_star(m)),
        UpsilonStar(m) => {
            let (re, im) = upsilon_star(m);
            FormValue::Complex { re, im }
        }
        ReUpsilonStar(m) => FormValue::Real(upsilon_star(m).0),
        ImUpsilonStar(m) => FormValue::Real(upsilon_star(m).1),
        Phi0 => FormValue::Real(phi0()),
        StarPhi0 => FormValue::Real(star_phi0()),
        OmegaCal(i) => FormValue::Real(omega_cal(i)?),
        Wirtinger(m, p) => FormValue::Real(wirtinger(m, p)),
        Kraines => FormValue::Real(kraines()),
        _ => return Err(wrong_kind(key, "form")),
    })
}

pub fn get_matrix(key: CatalogKey) -> Result<Mat> {
    use CatalogKey::*;
    Ok(match key {
        J(m) => j_split(m),
        JStar(m) => j_star(m),
        R6 => reflection(3, 3),
        R7 => reflection(4, 3),
        _ => return Err(wrong_kind(key, "matrix")),
    })
}

pub fn get_space(key: CatalogKey) -> Result<Subspace> {
    use CatalogKey::*;
    match key {
        W5 => param_space(&W5_TABLE, 5),
        W14 => param_space(&W14_TABLE, 14),
        W22 => param_space(&W22_TABLE, 22),
        Su(m) => Ok(su_blocks(m)),
        SuStar(m) => Ok(commutant(&j_star(m), true)),
        U(m) => Ok(commutant(&j_split(m), false)),
        _ => Err(wrong_kind(key, "subspace")),
    }
}

// ---- forms ------------------------------------------------------------

/// `sum_i dx^i ∧ dx^{m+i}`.
pub fn omega0(m: usize) -> AltForm {
    let mut f = AltForm::zero(2 * m, 2);
    for i in 1..=m {
        f.add_term(&[i, m + i], Scalar::one());
    }
    f
}

/// Wedge product of the complex 1-forms `dx^{a_i} + i dx^{b_i}`.
fn complex_volume(n: usize, pairs: &[(usize, usize)]) -> (AltForm, AltForm) {
    let mut re = AltForm::constant(n, Scalar::one());
    let mut im = AltForm::zero(n, 0);
    for &(a, b) in pairs {
        let (c, d) = (AltForm::dx(n, a), AltForm::dx(n, b));
        let wedge = |x: &AltForm, y: &AltForm| x.wedge(y).expect("same dimension");
        let next_re = &wedge(&re, &c) - &wedge(&im, &d);
        let next_im = &wedge(&re, &d) + &wedge(&im, &c);
        re = next_re;
        im = next_im;
    }
    (re, im)
}

/// `(Re, Im)` of `(dx^1 + i dx^{m+1}) ∧ ... ∧ (dx^m + i dx^{2m})`.
pub fn upsilon0(m: usize) -> (AltForm, AltForm) {
    let pairs: Vec<_> = (1..=m).map(|i| (i, m + i)).collect();
    complex_volume(2 * m, &pairs)
}

/// `sum_i dx^{2i-1} ∧ dx^{2i}`.
pub fn omega_star(m: usize) -> AltForm {
    let mut f = AltForm::zero(2 * m, 2);
    for i in 1..=m {
        f.add_term(&[2 * i - 1, 2 * i], Scalar::one());
    }
    f
}

/// `(Re, Im)` of `(dx^1 + i dx^2) ∧ ... ∧ (dx^{2m-1} + i dx^{2m})`.
pub fn upsilon_star(m: usize) -> (AltForm, AltForm) {
    let pairs: Vec<_> = (1..=m).map(|i| (2 * i - 1, 2 * i)).collect();
    complex_volume(2 * m, &pairs)
}

/// The three 2-forms on the coordinate 4-plane, `Ω_2, Ω_3, Ω_4`, on `R^7`.
pub fn omega_cal(i: usize) -> Result<AltForm> {
    let terms: [(&[usize], i64); 2] = match i {
        2 => [(&[1, 2], 1), (&[3, 4], 1)],
        3 => [(&[1, 3], 1), (&[4, 2], 1)],
        4 => [(&[1, 4], 1), (&[2, 3], 1)],
        _ => {
            return Err(Error::InvalidParams {
                key: format!("omega_cal({i})"),
                reason: "index must be 2, 3 or 4".into(),
            })
        }
    };
    Ok(AltForm::from_terms(7, 2, &terms))
}

/// `dx^{567} - dx^5∧Ω_2 - dx^6∧Ω_3 - dx^7∧Ω_4`.
pub fn phi0() -> AltForm {
    let mut f = AltForm::basis(7, &[5, 6, 7]);
    for (y, i) in [(5, 2), (6, 3), (7, 4)] {
        let t = AltForm::dx(7, y).wedge(&omega_cal(i).unwrap()).unwrap();
        f = &f - &t;
    }
    f
}

/// `dx^{1234} - dx^{67}∧Ω_2 - dx^{75}∧Ω_3 - dx^{56}∧Ω_4`, written out
/// independently of the Hodge star.
pub fn star_phi0() -> AltForm {
    let mut f = AltForm::basis(7, &[1, 2, 3, 4]);
    for (pair, i) in [([6, 7], 2), ([7, 5], 3), ([5, 6], 4)] {
        let t = AltForm::basis(7, &pair)
            .wedge(&omega_cal(i).unwrap())
            .unwrap();
        f = &f - &t;
    }
    f
}

/// `ω_0^p / p!` on `R^{2m}`.
pub fn wirtinger(m: usize, p: usize) -> AltForm {
    let w = omega0(m);
    let mut acc = AltForm::constant(2 * m, Scalar::one());
    let mut fact = 1i64;
    for k in 1..=p {
        acc = acc.wedge(&w).expect("same dimension");
        fact *= k as i64;
    }
    acc.scale(&Scalar::new(1, fact))
}

/// Right multiplication by `i`, `j`, `k` on `H = R^4` in the basis `1, i, j, k`.
pub fn quaternion_right_mult() -> [Mat; 3] {
    [
        Mat::from_i64(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]),
        Mat::from_i64(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]),
        Mat::from_i64(&[&[0, 0, 0, -1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[1, 0, 0, 0]]),
    ]
}

/// Kähler form `ω(u, v) = <X u, v>` of a complex structure `X` acting
/// diagonally on `R^8 = H ⊕ H`.
fn kahler_h2(x: &Mat) -> AltForm {
    let mut f = AltForm::zero(8, 2);
    for offset in [0, 4] {
        for a in 0..4 {
            for b in a + 1..4 {
                f.add_term(&[offset + a + 1, offset + b + 1], x.get(b, a).clone());
            }
        }
    }
    f
}

/// `ω_I∧ω_I + ω_J∧ω_J + ω_K∧ω_K` on `R^8`.
pub fn kraines() -> AltForm {
    let mut f = AltForm::zero(8, 4);
    for x in quaternion_right_mult() {
        let w = kahler_h2(&x);
        f = &f + &w.wedge(&w).expect("same dimension");
    }
    f
}

// ---- matrices ---------------------------------------------------------

/// `[[0, I_m], [-I_m, 0]]`.
pub fn j_split(m: usize) -> Mat {
    Mat::from_fn(2 * m, 2 * m, |i, j| {
        if j == i + m {
            Scalar::one()
        } else if i == j + m {
            Scalar::from(-1)
        } else {
            Scalar::zero()
        }
    })
}

/// Block diagonal with `m` copies of `J(1)`.
pub fn j_star(m: usize) -> Mat {
    Mat::block_diag(&vec![j_split(1); m])
}

/// `diag(I_a, -I_b)`.
pub fn reflection(a: usize, b: usize) -> Mat {
    let d: Vec<Scalar> = (0..a + b)
        .map(|i| Scalar::from(if i < a { 1 } else { -1 }))
        .collect();
    Mat::diag(&d)
}

/// The permutation matrix `P` with `P^*(split forms) = interleaved forms`:
/// `P^* dx^i = dx^{2i-1}` and `P^* dx^{m+i} = dx^{2i}`.
pub fn interleave_permutation(m: usize) -> Mat {
    let mut p = Mat::zeros(2 * m, 2 * m);
    for i in 1..=m {
        p.set(i - 1, 2 * i - 2, Scalar::one());
        p.set(m + i - 1, 2 * i - 1, Scalar::one());
    }
    p
}

// ---- subspaces --------------------------------------------------------

/// `[[a, b], [-b, a]]` with `a` skew and `b` symmetric traceless.
fn su_blocks(m: usize) -> Subspace {
    let n = 2 * m;
    let mut gens = Vec::new();
    let put = |x: &mut Mat, i: usize, j: usize, v: i64| {
        let cur = x.get(i, j).clone();
        x.set(i, j, cur + Scalar::from(v));
    };
    // a = E_ij - E_ji
    for i in 0..m {
        for j in i + 1..m {
            let mut x = Mat::zeros(n, n);
            for off in [0, m] {
                put(&mut x, off + i, off + j, 1);
                put(&mut x, off + j, off + i, -1);
            }
            gens.push(x);
        }
    }
    // b symmetric traceless: off-diagonal E_ij + E_ji, diagonal E_ii - E_{i+1,i+1}
    let mut bs: Vec<Vec<(usize, usize, i64)>> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            bs.push(vec![(i, j, 1), (j, i, 1)]);
        }
    }
    for i in 0..m.saturating_sub(1) {
        bs.push(vec![(i, i, 1), (i + 1, i + 1, -1)]);
    }
    for b in bs {
        let mut x = Mat::zeros(n, n);
        for (i, j, v) in b {
            put(&mut x, i, m + j, v);
            put(&mut x, m + i, j, -v);
        }
        gens.push(x);
    }
    Subspace::from_matrices(n, &gens).expect("square generators")
}

/// `{x : x + x^T = 0, xJ = Jx}` and, if `traceless`, `tr(Jx) = 0`.
pub fn commutant(j: &Mat, traceless: bool) -> Subspace {
    let n = j.rows();
    let basis: Vec<Mat> = (0..n * n).map(|k| Mat::unit(n, k / n, k % n)).collect();
    // one row per linear condition, one column per matrix entry
    let mut conds: Vec<Vec<Scalar>> = Vec::new();
    let images: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|e| {
            let mut v = (e + &e.transpose()).flatten();
            v.extend(e.commutator(j).flatten());
            if traceless {
                v.push((j * e).trace());
            }
            v
        })
        .collect();
    for r in 0..images[0].len() {
        conds.push(images.iter().map(|col| col[r].clone()).collect());
    }
    let m = Mat::from_rows(conds).expect("rectangular");
    m.rank_nullspace().1
}

/// A matrix subspace given as a table of entries, each a signed sum of
/// parameters `x_1..x_k`; the basis is the coefficient matrices.
fn param_space(table: &[[&str; 6]; 6], params: usize) -> Result<Subspace> {
    let mut gens = vec![Mat::zeros(6, 6); params];
    for (i, row) in table.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            for (sign, p) in parse_cell(cell)? {
                if p == 0 || p > params {
                    return Err(Error::Format(format!("parameter x{p} out of range")));
                }
                let cur = gens[p - 1].get(i, j).clone();
                gens[p - 1].set(i, j, cur + Scalar::from(sign));
            }
        }
    }
    let s = Subspace::from_matrices(6, &gens)?;
    if s.dim() != params {
        return Err(Error::InvariantViolation(format!(
            "parameterized space has dimension {} instead of {params}",
            s.dim()
        )));
    }
    Ok(s)
}

/// Parse `"-x14+x16"` into `[(-1, 14), (1, 16)]`; `"0"` is empty.
fn parse_cell(cell: &str) -> Result<Vec<(i64, usize)>> {
    let cell: String = cell.chars().filter(|c| !c.is_whitespace()).collect();
    if cell == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = cell.as_str();
    while !rest.is_empty() {
        let (sign, tail) = match rest.as_bytes()[0] {
            b'-' => (-1, &rest[1..]),
            b'+' => (1, &rest[1..]),
            _ => (1, rest),
        };
        let tail = tail
            .strip_prefix('x')
            .ok_or_else(|| Error::Format(format!("bad cell `{cell}`")))?;
        let end = tail.find(['+', '-']).unwrap_or(tail.len());
        let p = tail[..end]
            .parse()
            .map_err(|_| Error::Format(format!("bad cell `{cell}`")))?;
        out.push((sign, p));
        rest = &tail[end..];
    }
    Ok(out)
}

const W5_TABLE: [[&str; 6]; 6] = [
    ["x5", "0", "0", "0", "0", "0"],
    ["0", "x5", "0", "0", "0", "0"],
    ["0", "0", "x5", "0", "0", "0"],
    ["x4", "x3", "-x2", "0", "0", "0"],
    ["-x3", "x4", "x1", "0", "0", "0"],
    ["x2", "-x1", "x4", "0", "0", "0"],
];

const W14_TABLE: [[&str; 6]; 6] = [
    ["x5+x10", "x11", "x12", "x8", "0", "0"],
    ["-x14", "x5+x9", "0", "x6", "0", "0"],
    ["-x13", "0", "x5+x9", "x7", "0", "0"],
    ["x4", "x3", "-x2", "x9+x10", "0", "0"],
    ["-x3+x6", "x4-x8", "x1", "x11+x14", "0", "0"],
    ["x2+x7", "-x1", "x4-x8", "x12+x13", "0", "0"],
];

const W22_TABLE: [[&str; 6]; 6] = [
    ["x5+x10", "x11", "x12", "x8", "x15", "0"],
    ["-x14+x16", "x5+x9+x17", "x18", "x6-x15", "x19", "0"],
    ["-x13", "-x21", "x5+x9+x22", "x7", "x20", "0"],
    ["x4-x19", "x3", "-x2", "x9+x10+x22", "x16", "0"],
    ["-x3+x6", "x4-x8", "x1", "x11+x14", "x17+x22", "0"],
    ["x2+x7", "-x1+x20", "x4-x8-x19", "x12+x13", "x18+x21", "0"],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Vector;

    fn key(s: &str) -> CatalogKey {
        s.parse().unwrap()
    }

    #[test]
    fn key_parsing() {
        assert_eq!(key("omega0(3)"), CatalogKey::Omega0(3));
        assert_eq!(key("omega0"), CatalogKey::Omega0(3));
        assert_eq!(key("wirtinger(3, 2)"), CatalogKey::Wirtinger(3, 2));
        assert_eq!(key("Jstar(2)"), CatalogKey::JStar(2));
        assert!(matches!(
            "nope".parse::<CatalogKey>(),
            Err(Error::UnknownKey(_))
        ));
        assert!(matches!(
            "omega_cal(5)".parse::<CatalogKey>(),
            Err(Error::InvalidParams { .. })
        ));
        assert!(matches!(
            "phi0(2)".parse::<CatalogKey>(),
            Err(Error::InvalidParams { .. })
        ));
        for k in [
            CatalogKey::Wirtinger(3, 2),
            CatalogKey::W22,
            CatalogKey::SuStar(3),
        ] {
            assert_eq!(key(&k.to_string()), k);
        }
    }

    #[test]
    fn phi0_terms() {
        let expected = AltForm::from_terms(
            7,
            3,
            &[
                (&[5, 6, 7], 1),
                (&[1, 2, 5], -1),
                (&[3, 4, 5], -1),
                (&[1, 3, 6], -1),
                (&[2, 4, 6], 1),
                (&[1, 4, 7], -1),
                (&[2, 3, 7], -1),
            ],
        );
        assert_eq!(phi0(), expected);
    }

    #[test]
    fn star_phi0_is_hodge_of_phi0() {
        assert_eq!(phi0().hodge(), star_phi0());
        assert_eq!(star_phi0().num_terms(), 7);
    }

    #[test]
    fn upsilon_expansion() {
        let (re, im) = upsilon0(3);
        let re_expected = AltForm::from_terms(
            6,
            3,
            &[
                (&[1, 2, 3], 1),
                (&[1, 5, 6], -1),
                (&[2, 4, 6], 1),
                (&[3, 4, 5], -1),
            ],
        );
        let im_expected = AltForm::from_terms(
            6,
            3,
            &[
                (&[1, 2, 6], 1),
                (&[1, 3, 5], -1),
                (&[2, 3, 4], 1),
                (&[4, 5, 6], -1),
            ],
        );
        assert_eq!(re, re_expected);
        assert_eq!(im, im_expected);
    }

    #[test]
    fn upsilon_by_brute_force() {
        // Υ(e_a, e_b, e_c) = det of the complex 3x3 minor of [I | iI]
        let (re, im) = upsilon0(3);
        let col = |k: usize| -> [(i64, i64); 3] {
            let mut c = [(0, 0); 3];
            if k <= 3 {
                c[k - 1] = (1, 0);
            } else {
                c[k - 4] = (0, 1);
            }
            c
        };
        let mul = |a: (i64, i64), b: (i64, i64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        for a in 1..=6 {
            for b in a + 1..=6 {
                for c in b + 1..=6 {
                    let m = [col(a), col(b), col(c)];
                    let mut det = (0, 0);
                    for (p, sign) in [
                        ([0, 1, 2], 1),
                        ([1, 2, 0], 1),
                        ([2, 0, 1], 1),
                        ([0, 2, 1], -1),
                        ([2, 1, 0], -1),
                        ([1, 0, 2], -1),
                    ] {
                        let t = mul(mul(m[0][p[0]], m[1][p[1]]), m[2][p[2]]);
                        det = (det.0 + sign * t.0, det.1 + sign * t.1);
                    }
                    assert_eq!(re.coefficient(&[a, b, c]), Scalar::from(det.0));
                    assert_eq!(im.coefficient(&[a, b, c]), Scalar::from(det.1));
                }
            }
        }
    }

    #[test]
    fn omega0_cubed() {
        let w = omega0(3);
        let cube = w.wedge(&w).unwrap().wedge(&w).unwrap();
        let expected = AltForm::basis(6, &[1, 4, 2, 5, 3, 6]).scale(&Scalar::from(6));
        assert_eq!(cube, expected);
        assert_eq!(
            wirtinger(3, 3).coefficient(&[1, 2, 3, 4, 5, 6]).abs(),
            Scalar::one()
        );
        assert_eq!(wirtinger(3, 1), w);
    }

    #[test]
    fn omega_cal_squares() {
        let vol = AltForm::basis(7, &[1, 2, 3, 4]);
        for i in 2..=4 {
            for j in 2..=4 {
                let w = omega_cal(i).unwrap().wedge(&omega_cal(j).unwrap()).unwrap();
                let expected = if i == j {
                    vol.scale(&Scalar::from(2))
                } else {
                    AltForm::zero(7, 4)
                };
                assert_eq!(w, expected);
            }
        }
    }

    #[test]
    fn golden_evaluations() {
        let e = |i| Vector::unit(7, i);
        assert_eq!(phi0().eval(&[e(5), e(6), e(7)]).unwrap(), Scalar::one());
        assert_eq!(
            star_phi0().eval(&[e(1), e(2), e(3), e(4)]).unwrap(),
            Scalar::one()
        );
        assert!(phi0().restrict(4).unwrap().is_zero());
        assert_eq!(star_phi0().restrict(4).unwrap(), AltForm::volume(4));
        let i5 = phi0().interior(&e(5)).unwrap();
        let expected = AltForm::from_terms(7, 2, &[(&[6, 7], 1), (&[1, 2], -1), (&[3, 4], -1)]);
        assert_eq!(i5, expected);
    }

    #[test]
    fn involutions() {
        let r6 = get_matrix(CatalogKey::R6).unwrap();
        let (re, im) = upsilon0(3);
        assert_eq!(omega0(3).pullback(&r6).unwrap(), -&omega0(3));
        assert_eq!(re.pullback(&r6).unwrap(), re);
        assert_eq!(im.pullback(&r6).unwrap(), -&im);
        let minus = Mat::identity(7).scale(&Scalar::from(-1));
        assert_eq!(phi0().pullback(&minus).unwrap(), -&phi0());
        assert_eq!(star_phi0().pullback(&minus).unwrap(), star_phi0());
    }

    #[test]
    fn matrices() {
        assert_eq!(j_split(1), Mat::from_i64(&[&[0, 1], &[-1, 0]]));
        assert_eq!(j_star(2), Mat::block_diag(&[j_split(1), j_split(1)]));
        let r7 = get_matrix(CatalogKey::R7).unwrap();
        assert_eq!(r7.trace(), Scalar::from(1));
        assert!(get_matrix(CatalogKey::Phi0).is_err());
    }

    #[test]
    fn interleaving_relates_presentations() {
        for m in 1..=4 {
            let p = interleave_permutation(m);
            assert_eq!(omega0(m).pullback(&p).unwrap(), omega_star(m));
            let (re, im) = upsilon0(m);
            let (sre, sim) = upsilon_star(m);
            assert_eq!(re.pullback(&p).unwrap(), sre);
            assert_eq!(im.pullback(&p).unwrap(), sim);
            // the conjugating orthogonal matrix carries J to J*
            let q = p.transpose();
            assert_eq!(&(&q * &j_split(m)) * &p, j_star(m));
        }
    }

    #[test]
    fn w_spaces() {
        let w5 = get_space(CatalogKey::W5).unwrap();
        let w14 = get_space(CatalogKey::W14).unwrap();
        let w22 = get_space(CatalogKey::W22).unwrap();
        assert_eq!((w5.dim(), w14.dim(), w22.dim()), (5, 14, 22));
        assert!(w5.is_subspace_of(&w14));
        assert!(w14.is_subspace_of(&w22));
        let d: Vec<Scalar> = [1, 1, 1, 0, 0, 0]
            .iter()
            .map(|&x| Scalar::from(x))
            .collect();
        assert!(w5.contains_matrix(&Mat::diag(&d)));
    }

    #[test]
    fn su_block_description_matches_commutant() {
        for m in 1..=4 {
            let su = get_space(CatalogKey::Su(m)).unwrap();
            assert_eq!(su.dim(), m * m - 1);
            assert_eq!(su, commutant(&j_split(m), true));
            assert_eq!(get_space(CatalogKey::SuStar(m)).unwrap().dim(), m * m - 1);
            assert_eq!(get_space(CatalogKey::U(m)).unwrap().dim(), m * m);
        }
    }

    #[test]
    fn su3_annihilates_forms() {
        let (re, im) = upsilon0(3);
        for x in get_space(CatalogKey::Su(3)).unwrap().matrices().unwrap() {
            assert!(x.is_skew());
            for f in [&omega0(3), &re, &im] {
                assert!(f.inf_action(&x).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn kraines_shape() {
        let k = kraines();
        assert_eq!((k.dim(), k.degree()), (8, 4));
        for x in quaternion_right_mult() {
            assert_eq!(&x * &x, Mat::identity(4).scale(&Scalar::from(-1)));
            assert!(x.is_skew());
        }
        let [i, j, kk] = quaternion_right_mult();
        // right multiplication reverses order: R_j R_i = R_{ij} = R_k
        assert_eq!(&j * &i, kk);
    }

    #[test]
    fn cell_parser() {
        assert_eq!(parse_cell("-x14+x16").unwrap(), vec![(-1, 14), (1, 16)]);
        assert_eq!(
            parse_cell("x4-x8-x19").unwrap(),
            vec![(1, 4), (-1, 8), (-1, 19)]
        );
        assert!(parse_cell("0").unwrap().is_empty());
        assert!(parse_cell("y3").is_err());
    }
}
