//! Constant-coefficient alternating forms on `R^n` with exact coefficients.
//!
//! Form indices are 1-based, as in `dx^1 ∧ dx^2 = dx^{12}`. Matrices act as
//! in [`crate::exact::Mat`]: the pullback of `dx^i` by `A` is
//! `sum_j A^i_j dx^j`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::exact::{Mat, Scalar};

/// Largest ambient dimension supported by the bitmask blade encoding.
pub const MAX_DIM: usize = 16;

/// A basis monomial `dx^{i_1 ... i_p}` with `i_1 < ... < i_p`, stored as a
/// bitmask (bit `k` is index `k + 1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Blade(u32);

impl Blade {
    pub fn from_mask(mask: u32) -> Self {
        Blade(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based strictly increasing indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32)
            .filter(|k| self.0 >> k & 1 == 1)
            .map(|k| k + 1)
            .collect()
    }

    /// Sort an ordered list of 1-based indices into a blade and the sign of
    /// the sorting permutation. `None` if an index repeats.
    pub fn from_ordered(indices: &[usize]) -> Option<(Blade, i32)> {
        let mut mask = 0u32;
        let mut sign = 1;
        for &i in indices {
            debug_assert!(i >= 1);
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return None;
            }
            // every already-placed index greater than i is an inversion
            if (mask & !(bit | (bit - 1))).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        Some((Blade(mask), sign))
    }

    /// Sign of `dx^self ∧ dx^other`, or `None` if they share an index.
    pub fn wedge_sign(self, other: Blade) -> Option<i32> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (i in self, j in other) with i > j
        let mut inversions = 0;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            inversions += (self.0 >> (j + 1)).count_ones();
        }
        Some(if inversions % 2 == 0 { 1 } else { -1 })
    }

    fn is_within(self, k: usize) -> bool {
        k >= 32 || self.0 >> k == 0
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the increasing index tuples (for equal degrees).
impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let low = (self.0 ^ other.0).trailing_zeros();
        if self.0 >> low & 1 == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(ToString::to_string).collect();
        write!(f, "dx^{{{}}}", idx.join(""))
    }
}

/// A vector in `Q^n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Vector {
    components: Vec<Scalar>,
}

impl Vector {
    pub fn new(components: Vec<Scalar>) -> Self {
        Vector { components }
    }

    pub fn from_i64(xs: &[i64]) -> Self {
        Vector::new(xs.iter().map(|&x| Scalar::from(x)).collect())
    }

    /// The standard basis vector `e_i` (1-based).
    pub fn unit(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "basis index out of range");
        Vector::new(
            (1..=n)
                .map(|k| {
                    if k == i {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.components
    }

    /// Component `i` (1-based).
    pub fn get(&self, i: usize) -> &Scalar {
        &self.components[i - 1]
    }
}

/// A homogeneous alternating form of degree `p` on `R^n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AltFormRepr", into = "AltFormRepr")]
pub struct AltForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, Scalar>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    idx: Vec<usize>,
    coef: Scalar,
}

#[derive(Serialize, Deserialize)]
struct AltFormRepr {
    dim: usize,
    degree: usize,
    terms: Vec<TermRepr>,
}

impl TryFrom<AltFormRepr> for AltForm {
    type Error = Error;
    fn try_from(r: AltFormRepr) -> Result<Self> {
        let mut form = AltForm::zero(r.dim, r.degree);
        for t in r.terms {
            if t.idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Format(format!(
                    "index tuple {:?} is not strictly increasing",
                    t.idx
                )));
            }
            if t.idx.iter().any(|&i| i == 0 || i > r.dim) {
                return Err(Error::Format(format!(
                    "index tuple {:?} out of range",
                    t.idx
                )));
            }
            ensure_dim(r.degree, t.idx.len())?;
            form.add_term(&t.idx, t.coef);
        }
        Ok(form)
    }
}

impl From<AltForm> for AltFormRepr {
    fn from(f: AltForm) -> Self {
        AltFormRepr {
            dim: f.dim,
            degree: f.degree,
            terms: f
                .terms
                .into_iter()
                .map(|(b, c)| TermRepr {
                    idx: b.indices(),
                    coef: c,
                })
                .collect(),
        }
    }
}

impl AltForm {
    /// The zero form. A degree above `dim` is allowed only for zero forms,
    /// which is what a wedge product overflowing the top degree returns.
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        AltForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant 0-form `c`.
    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut f = AltForm::zero(dim, 0);
        if !c.is_zero() {
            f.terms.insert(Blade(0), c);
        }
        f
    }

    /// `dx^{i_1} ∧ ... ∧ dx^{i_p}` for 1-based indices in any order.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        let mut f = AltForm::zero(dim, indices.len());
        f.add_term(indices, Scalar::one());
        f
    }

    pub fn dx(dim: usize, i: usize) -> Self {
        AltForm::basis(dim, &[i])
    }

    /// The coordinate volume form `dx^{1...n}`.
    pub fn volume(dim: usize) -> Self {
        AltForm::basis(dim, &(1..=dim).collect::<Vec<_>>())
    }

    /// Build from `(indices, coefficient)` pairs; indices in any order.
    pub fn from_terms(dim: usize, degree: usize, terms: &[(&[usize], i64)]) -> Self {
        let mut f = AltForm::zero(dim, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "term degree mismatch");
            f.add_term(idx, Scalar::from(*c));
        }
        f
    }

    /// Add `coef · dx^{indices}`, sorting the indices with sign.
    pub fn add_term(&mut self, indices: &[usize], coef: Scalar) {
        assert_eq!(indices.len(), self.degree, "term degree mismatch");
        assert!(
            indices.iter().all(|&i| (1..=self.dim).contains(&i)),
            "index out of range"
        );
        if let Some((blade, sign)) = Blade::from_ordered(indices) {
            let c = if sign < 0 { -coef } else { coef };
            self.accumulate(blade, c);
        }
    }

    fn accumulate(&mut self, blade: Blade, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(blade).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&blade);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic order of their index tuples.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, &Scalar)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    /// Coefficient of `dx^{indices}` (indices in any order, with sign).
    pub fn coefficient(&self, indices: &[usize]) -> Scalar {
        match Blade::from_ordered(indices) {
            Some((b, sign)) => {
                let c = self.terms.get(&b).cloned().unwrap_or_default();
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
            None => Scalar::zero(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> AltForm {
        let mut out = AltForm::zero(self.dim, self.degree);
        if !s.is_zero() {
            for (b, c) in &self.terms {
                out.terms.insert(*b, c * s);
            }
        }
        out
    }

    /// Same form regarded on `R^m`, `m >= dim` (indices unchanged).
    pub fn extend_dim(&self, m: usize) -> Result<AltForm> {
        if m < self.dim {
            return Err(Error::OutOfRange {
                what: "target dimension",
                value: self.dim,
                max: m,
            });
        }
        let mut out = AltForm::zero(m, self.degree);
        out.terms = self.terms.clone();
        Ok(out)
    }

    /// Relabel indices: `dx^i` becomes `dx^{map[i-1]}` on `R^dim`.
    pub fn relabel(&self, dim: usize, map: &[usize]) -> AltForm {
        assert_eq!(map.len(), self.dim);
        let mut out = AltForm::zero(dim, self.degree);
        for (b, c) in &self.terms {
            let idx: Vec<usize> = b.indices().iter().map(|&i| map[i - 1]).collect();
            out.add_term(&idx, c.clone());
        }
        out
    }

    pub fn wedge(&self, other: &AltForm) -> Result<AltForm> {
        ensure_dim(self.dim, other.dim)?;
        let mut out = AltForm::zero(self.dim, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(sign) = a.wedge_sign(*b) {
                    let c = ca * cb;
                    out.accumulate(Blade(a.0 | b.0), if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `v ⌟ self`.
    pub fn interior(&self, v: &Vector) -> Result<AltForm> {
        ensure_dim(self.dim, v.dim())?;
        if self.degree == 0 {
            return Ok(AltForm::zero(self.dim, 0));
        }
        let mut out = AltForm::zero(self.dim, self.degree - 1);
        for (b, c) in &self.terms {
            for (pos, i) in b.indices().into_iter().enumerate() {
                let vi = v.get(i);
                if vi.is_zero() {
                    continue;
                }
                let term = c * vi;
                let term = if pos % 2 == 1 { -term } else { term };
                out.accumulate(Blade(b.0 & !(1 << (i - 1))), term);
            }
        }
        Ok(out)
    }

    /// `A^* self`, with `(A^* α)(v_1, ..., v_p) = α(A v_1, ..., A v_p)`.
    pub fn pullback(&self, a: &Mat) -> Result<AltForm> {
        ensure_dim(self.dim, a.rows())?;
        ensure_dim(self.dim, a.cols())?;
        let images: Vec<AltForm> = (1..=self.dim)
            .map(|i| {
                let mut f = AltForm::zero(self.dim, 1);
                for j in 1..=self.dim {
                    f.accumulate(Blade(1 << (j - 1)), a.get(i - 1, j - 1).clone());
                }
                f
            })
            .collect();
        let mut out = AltForm::zero(self.dim, self.degree);
        for (b, c) in &self.terms {
            let mut acc = AltForm::constant(self.dim, c.clone());
            for i in b.indices() {
                acc = acc.wedge(&images[i - 1])?;
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Hodge star for the standard metric and orientation `dx^{1...n}`:
    /// `α ∧ *β = <α, β> dx^{1...n}`.
    pub fn hodge(&self) -> AltForm {
        let full = if self.dim == 32 {
            u32::MAX
        } else {
            (1u32 << self.dim) - 1
        };
        let mut out = AltForm::zero(self.dim, self.dim.saturating_sub(self.degree));
        for (b, c) in &self.terms {
            let comp = Blade(full & !b.0);
            let sign = b.wedge_sign(comp).expect("disjoint by construction");
            out.accumulate(comp, if sign < 0 { -c } else { c.clone() });
        }
        out
    }

    /// Pullback to `R^k` along the inclusion of the first `k` coordinates.
    pub fn restrict(&self, k: usize) -> Result<AltForm> {
        if k > self.dim {
            return Err(Error::OutOfRange {
                what: "restriction dimension",
                value: k,
                max: self.dim,
            });
        }
        let mut out = AltForm::zero(k, self.degree);
        for (b, c) in &self.terms {
            if b.is_within(k) {
                out.terms.insert(*b, c.clone());
            }
        }
        Ok(out)
    }

    /// The infinitesimal action `x · α = d/dt|_{t=0} exp(t x)^* α`, i.e.
    /// `(x·α)(v_1, ..., v_p) = sum_i α(v_1, ..., x v_i, ..., v_p)`.
    pub fn inf_action(&self, x: &Mat) -> Result<AltForm> {
        ensure_dim(self.dim, x.rows())?;
        ensure_dim(self.dim, x.cols())?;
        let mut out = AltForm::zero(self.dim, self.degree);
        let mut slots = Vec::with_capacity(self.degree);
        for (b, c) in &self.terms {
            let idx = b.indices();
            for pos in 0..idx.len() {
                let row = idx[pos] - 1;
                for j in 1..=self.dim {
                    let xij = x.get(row, j - 1);
                    if xij.is_zero() {
                        continue;
                    }
                    slots.clear();
                    slots.extend_from_slice(&idx);
                    slots[pos] = j;
                    if let Some((blade, sign)) = Blade::from_ordered(&slots) {
                        let t = c * xij;
                        out.accumulate(blade, if sign < 0 { -t } else { t });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Full antisymmetric evaluation `α(v_1, ..., v_p)`.
    pub fn eval(&self, vs: &[Vector]) -> Result<Scalar> {
        if vs.len() != self.degree {
            return Err(Error::ArityMismatch {
                degree: self.degree,
                given: vs.len(),
            });
        }
        for v in vs {
            ensure_dim(self.dim, v.dim())?;
        }
        let mut total = Scalar::zero();
        for (b, c) in &self.terms {
            let idx = b.indices();
            let minor = Mat::from_fn(self.degree, self.degree, |r, s| vs[s].get(idx[r]).clone());
            total += c * &minor.determinant()?;
        }
        Ok(total)
    }

    /// The standard inner product `<α, β> = sum_I α_I β_I`.
    pub fn inner(&self, other: &AltForm) -> Result<Scalar> {
        ensure_dim(self.dim, other.dim)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(b, c)| other.terms.get(b).map(|d| c * d))
            .sum())
    }

    /// Coefficients as `(0-based indices, value)` pairs in `f64`.
    pub fn to_f64_terms(&self) -> Vec<(Vec<usize>, f64)> {
        self.terms
            .iter()
            .map(|(b, c)| (b.indices().iter().map(|i| i - 1).collect(), c.to_f64()))
            .collect()
    }
}

impl fmt::Display for AltForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (b, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let idx: String = b.indices().iter().map(ToString::to_string).collect();
            if b.degree() == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "dx^{idx}")?;
            } else {
                write!(f, "{mag}·dx^{idx}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AltForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AltForm[n={}, p={}]({})", self.dim, self.degree, self)
    }
}

impl Add for &AltForm {
    type Output = AltForm;
    fn add(self, rhs: &AltForm) -> AltForm {
        assert_eq!(
            (self.dim, self.degree),
            (rhs.dim, rhs.degree),
            "adding forms of different type"
        );
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.accumulate(*b, c.clone());
        }
        out
    }
}

impl Sub for &AltForm {
    type Output = AltForm;
    fn sub(self, rhs: &AltForm) -> AltForm {
        self + &(-rhs)
    }
}

impl Neg for &AltForm {
    type Output = AltForm;
    fn neg(self) -> AltForm {
        self.scale(&Scalar::from(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dx(n: usize, idx: &[usize]) -> AltForm {
        AltForm::basis(n, idx)
    }

    fn omega0() -> AltForm {
        AltForm::from_terms(6, 2, &[(&[1, 4], 1), (&[2, 5], 1), (&[3, 6], 1)])
    }

    #[test]
    fn blade_order_is_lexicographic() {
        let a = Blade::from_ordered(&[1, 4]).unwrap().0;
        let b = Blade::from_ordered(&[2, 3]).unwrap().0;
        let c = Blade::from_ordered(&[1, 2]).unwrap().0;
        assert!(c < a && a < b);
    }

    #[test]
    fn sorting_sign() {
        assert_eq!(Blade::from_ordered(&[2, 1]).unwrap().1, -1);
        assert_eq!(Blade::from_ordered(&[4, 5, 3]).unwrap().1, 1);
        assert!(Blade::from_ordered(&[1, 1]).is_none());
    }

    #[test]
    fn wedge_basic() {
        let w = dx(3, &[1]).wedge(&dx(3, &[2])).unwrap();
        assert_eq!(w, dx(3, &[1, 2]));
        let w = dx(3, &[2]).wedge(&dx(3, &[1])).unwrap();
        assert_eq!(w, -&dx(3, &[1, 2]));
        assert!(dx(3, &[1]).wedge(&dx(3, &[1])).unwrap().is_zero());
        assert!(dx(2, &[1]).wedge(&dx(3, &[1])).is_err());
    }

    #[test]
    fn wedge_above_top_degree_is_zero() {
        let w = dx(2, &[1, 2]).wedge(&dx(2, &[1])).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.degree(), 3);
    }

    #[test]
    fn interior_examples() {
        let f = dx(2, &[1, 2]).interior(&Vector::unit(2, 1)).unwrap();
        assert_eq!(f, dx(2, &[2]));
        let f = omega0().interior(&Vector::unit(6, 1)).unwrap();
        assert_eq!(f, dx(6, &[4]));
        let zero = AltForm::constant(3, Scalar::one())
            .interior(&Vector::unit(3, 1))
            .unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn hodge_in_plane() {
        assert_eq!(dx(2, &[1]).hodge(), dx(2, &[2]));
        assert_eq!(dx(2, &[2]).hodge(), -&dx(2, &[1]));
        assert_eq!(
            AltForm::constant(3, Scalar::one()).hodge(),
            AltForm::volume(3)
        );
    }

    #[test]
    fn restrict_examples() {
        let f = &dx(4, &[1, 2]) + &dx(4, &[3, 4]);
        assert_eq!(f.restrict(2).unwrap(), dx(2, &[1, 2]));
        assert!(f.restrict(5).is_err());
    }

    #[test]
    fn euler_scaling() {
        let f = &dx(4, &[1, 3]) + &dx(4, &[2, 4]).scale(&Scalar::new(3, 2));
        let g = f.inf_action(&Mat::identity(4)).unwrap();
        assert_eq!(g, f.scale(&Scalar::from(2)));
    }

    #[test]
    fn omega0_h2_coefficient() {
        // restrict(x · ω_0, 2) = (x^4_2 - x^5_1) dx^{12} for a generic x
        let x = Mat::from_fn(6, 6, |i, j| Scalar::from((7 * i + 3 * j * j + 1) as i64));
        let r = omega0().inf_action(&x).unwrap().restrict(2).unwrap();
        let expected = x.get(3, 1) - x.get(4, 0);
        assert_eq!(r, dx(2, &[1, 2]).scale(&expected));
    }

    #[test]
    fn eval_examples() {
        let f = dx(2, &[1, 2]);
        let e = [Vector::unit(2, 1), Vector::unit(2, 2)];
        assert_eq!(f.eval(&e).unwrap(), Scalar::one());
        assert_eq!(
            f.eval(&[e[1].clone(), e[0].clone()]).unwrap(),
            Scalar::from(-1)
        );
        assert!(matches!(f.eval(&e[..1]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let f = &dx(3, &[1, 2]) - &dx(3, &[2, 3]).scale(&Scalar::new(1, 2));
        let j = serde_json::to_value(&f).unwrap();
        assert_eq!(
            j,
            serde_json::json!({"dim": 3, "degree": 2, "terms": [
                {"idx": [1, 2], "coef": "1"}, {"idx": [2, 3], "coef": "-1/2"}]})
        );
        assert_eq!(serde_json::from_value::<AltForm>(j).unwrap(), f);
        let bad =
            serde_json::json!({"dim": 3, "degree": 2, "terms": [{"idx": [2, 1], "coef": "1"}]});
        assert!(serde_json::from_value::<AltForm>(bad).is_err());
    }

    #[test]
    fn display() {
        let f = &dx(6, &[1, 4]) - &dx(6, &[2, 5]).scale(&Scalar::from(2));
        assert_eq!(f.to_string(), "dx^14 - 2·dx^25");
    }

    // ---- property tests -------------------------------------------------

    fn arb_form(n: usize, p: usize) -> impl Strategy<Value = AltForm> {
        prop::collection::vec((prop::collection::btree_set(1..=n, p), -3i64..=3), 0..6).prop_map(
            move |terms| {
                let mut f = AltForm::zero(n, p);
                for (idx, c) in terms {
                    let idx: Vec<usize> = idx.into_iter().collect();
                    if idx.len() == p {
                        f.add_term(&idx, Scalar::from(c));
                    }
                }
                f
            },
        )
    }

    fn arb_mat(n: usize) -> impl Strategy<Value = Mat> {
        prop::collection::vec(-2i64..=2, n * n)
            .prop_map(move |v| Mat::from_fn(n, n, |i, j| Scalar::from(v[i * n + j])))
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = Vector> {
        prop::collection::vec(-3i64..=3, n).prop_map(|v| Vector::from_i64(&v))
    }

    proptest! {
        #[test]
        fn graded_anticommutativity(a in arb_form(5, 2), b in arb_form(5, 3)) {
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            prop_assert_eq!(ab, ba); // (-1)^{2·3} = 1
            let c = AltForm::dx(5, 4);
            let bc = b.wedge(&c).unwrap();
            let cb = c.wedge(&b).unwrap();
            prop_assert_eq!(bc, -&cb); // (-1)^{3·1} = -1
        }

        #[test]
        fn interior_is_antiderivation(a in arb_form(5, 2), b in arb_form(5, 2), v in arb_vec(5)) {
            let lhs = a.wedge(&b).unwrap().interior(&v).unwrap();
            let rhs = &a.interior(&v).unwrap().wedge(&b).unwrap()
                + &a.wedge(&b.interior(&v).unwrap()).unwrap(); // (-1)^2
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn pullback_is_contravariant(a in arb_mat(4), b in arb_mat(4), f in arb_form(4, 2)) {
            let ab = &a * &b;
            prop_assert_eq!(f.pullback(&ab).unwrap(), f.pullback(&a).unwrap().pullback(&b).unwrap());
        }

        #[test]
        fn inf_action_is_derivation(x in arb_mat(5), a in arb_form(5, 2), b in arb_form(5, 1)) {
            let lhs = a.wedge(&b).unwrap().inf_action(&x).unwrap();
            let rhs = &a.inf_action(&x).unwrap().wedge(&b).unwrap()
                + &a.wedge(&b.inf_action(&x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn double_hodge(f in arb_form(5, 2), g in arb_form(6, 3)) {
            // (-1)^{p(n-p)}
            prop_assert_eq!(f.hodge().hodge(), f.clone());
            prop_assert_eq!(g.hodge().hodge(), -&g);
        }

        #[test]
        fn hodge_pairing(a in arb_form(5, 2), b in arb_form(5, 2)) {
            let lhs = a.wedge(&b.hodge()).unwrap();
            prop_assert_eq!(lhs, AltForm::volume(5).scale(&a.inner(&b).unwrap()));
        }
    }
}
