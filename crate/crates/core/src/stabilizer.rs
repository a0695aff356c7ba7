//! Infinitesimal stabilizers of form systems and the symbol-rank test for
//! strong admissibility.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog;
use crate::error::{ensure_dim, Error, Result};
use crate::exact::{row_reduce, Mat, Scalar, Subspace};
use crate::exterior::{AltForm, Blade};

/// The named systems used throughout the toolkit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemName {
    /// `{ω_0, Re Υ_0, Im Υ_0}` on `R^6`.
    Su3,
    /// `{φ_0, *φ_0}` on `R^7`.
    G2,
    /// The Kraines 4-form on `R^8`.
    Sp2Sp1,
    /// `{ω_0}` on `R^6`.
    OmegaOnly,
    /// The interleaved presentation `{ω*, Re Υ*, Im Υ*}` on `R^6`.
    Su3Star,
}

impl SystemName {
    pub const ALL: [SystemName; 5] = [
        SystemName::Su3,
        SystemName::G2,
        SystemName::Sp2Sp1,
        SystemName::OmegaOnly,
        SystemName::Su3Star,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemName::Su3 => "su3",
            SystemName::G2 => "g2",
            SystemName::Sp2Sp1 => "sp2sp1",
            SystemName::OmegaOnly => "omega-only",
            SystemName::Su3Star => "su3-star",
        }
    }
}

impl fmt::Display for SystemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SystemName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownKey(s.to_string()))
    }
}

/// A nonempty list of constant forms on a common `R^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormSystem {
    dim: usize,
    generators: Vec<AltForm>,
}

impl FormSystem {
    pub fn new(generators: Vec<AltForm>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Format("a form system needs at least one generator".into()))?;
        let dim = first.dim();
        for g in &generators {
            ensure_dim(dim, g.dim())?;
        }
        Ok(FormSystem { dim, generators })
    }

    pub fn named(name: SystemName) -> Self {
        let gens = match name {
            SystemName::Su3 => {
                let (re, im) = catalog::upsilon0(3);
                vec![catalog::omega0(3), re, im]
            }
            SystemName::G2 => vec![catalog::phi0(), catalog::star_phi0()],
            SystemName::Sp2Sp1 => vec![catalog::kraines()],
            SystemName::OmegaOnly => vec![catalog::omega0(3)],
            SystemName::Su3Star => {
                let (re, im) = catalog::upsilon_star(3);
                vec![catalog::omega_star(3), re, im]
            }
        };
        FormSystem::new(gens).expect("catalog forms share a dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[AltForm] {
        &self.generators
    }
}

/// Coordinates of one column of a linear map into a direct sum of form
/// spaces: `(generator index, blade) -> coefficient`.
pub(crate) type Column = Vec<((usize, Blade), Scalar)>;

pub(crate) fn form_column(forms: impl IntoIterator<Item = (usize, AltForm)>) -> Column {
    let mut col = Vec::new();
    for (g, f) in forms {
        for (b, c) in f.terms() {
            col.push(((g, b), c.clone()));
        }
    }
    col
}

/// Dense row matrix of a linear map given by its columns; rows that are
/// identically zero never appear.
pub(crate) fn columns_to_rows(columns: &[Column]) -> Vec<Vec<Scalar>> {
    let mut index: BTreeMap<(usize, Blade), usize> = BTreeMap::new();
    for col in columns {
        for (key, _) in col {
            let next = index.len();
            index.entry(*key).or_insert(next);
        }
    }
    let mut rows = vec![vec![Scalar::zero(); columns.len()]; index.len()];
    for (j, col) in columns.iter().enumerate() {
        for (key, c) in col {
            rows[index[key]][j] = c.clone();
        }
    }
    rows
}

/// Kernel of `x ↦ (f(x, α))_α` over `M_n`, with `f` linear in `x`.
pub(crate) fn matrix_kernel(
    system: &FormSystem,
    f: impl Fn(&Mat, &AltForm) -> AltForm + Sync,
) -> Subspace {
    let n = system.dim;
    let columns: Vec<Column> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let e = Mat::unit(n, k / n, k % n);
            form_column(
                system
                    .generators
                    .iter()
                    .enumerate()
                    .map(|(g, a)| (g, f(&e, a))),
            )
        })
        .collect();
    let rows = columns_to_rows(&columns);
    let echelon = row_reduce(&rows, n * n);
    Subspace::span(n * n, echelon.nullspace()).expect("nullspace vectors have length n^2")
}

/// `{x ∈ M_n : x · α = 0 for every generator α}`.
pub fn stab_algebra(system: &FormSystem) -> Subspace {
    matrix_kernel(system, |x, a| a.inf_action(x).expect("dimensions agree"))
}

/// Columns of the symbol map `Φ(X) = Σ_i dx^i ∧ (X(e_i) · α)` in the basis
/// `X = e^i ⊗ E_ab`, ordered by `(i, a, b)`.
fn symbol_columns(system: &FormSystem) -> Vec<Column> {
    let n = system.dim;
    (0..n * n * n)
        .into_par_iter()
        .map(|k| {
            let i = k / (n * n);
            let e = Mat::unit(n, (k / n) % n, k % n);
            let dxi = AltForm::dx(n, i + 1);
            form_column(system.generators.iter().enumerate().map(|(g, a)| {
                let xa = a.inf_action(&e).expect("dimensions agree");
                (g, dxi.wedge(&xa).expect("dimensions agree"))
            }))
        })
        .collect()
}

/// Rank of the symbol map on `Hom(R^n, M_n)`.
pub fn symbol_rank(system: &FormSystem) -> usize {
    let n = system.dim;
    let rows = columns_to_rows(&symbol_columns(system));
    row_reduce(&rows, n * n * n).rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongAdmissibility {
    pub n: usize,
    pub g_dim: usize,
    pub symbol_rank: usize,
    /// `n (n(n-1)/2 - dim g)`.
    pub expected_rank: usize,
    pub kernel_dim: usize,
    /// `n dim g + n^2 (n+1)/2`: the part of the kernel forced by `g` and
    /// the symmetric family.
    pub forced_kernel_dim: usize,
    /// Whether `kernel_dim == forced_kernel_dim`.
    pub kernel_cross_check: bool,
    pub verdict: bool,
}

pub fn strong_admissibility(system: &FormSystem) -> Result<StrongAdmissibility> {
    let g = stab_algebra(system);
    let not_skew = g.matrices()?.iter().filter(|x| !x.is_skew()).count();
    if not_skew > 0 {
        return Err(Error::StabilizerNotSkew(not_skew));
    }
    let n = system.dim;
    let rank = symbol_rank(system);
    let expected_rank = n * (n * (n - 1) / 2 - g.dim());
    let kernel_dim = n * n * n - rank;
    let forced = n * g.dim() + n * n * (n + 1) / 2;
    Ok(StrongAdmissibility {
        n,
        g_dim: g.dim(),
        symbol_rank: rank,
        expected_rank,
        kernel_dim,
        forced_kernel_dim: forced,
        kernel_cross_check: kernel_dim == forced,
        verdict: rank == expected_rank,
    })
}

/// The sign `s` with `[x, y] · α = s (x·(y·α) - y·(x·α))` for all `x, y, α`,
/// found by testing random integer pairs. `None` if neither sign fits.
pub fn inf_action_bracket_sign(n: usize, trials: usize, seed: u64) -> Option<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rand_mat =
        |rng: &mut ChaCha8Rng| Mat::from_fn(n, n, |_, _| Scalar::from(rng.random_range(-3i64..=3)));
    let mut plus = true;
    let mut minus = true;
    for _ in 0..trials {
        let x = rand_mat(&mut rng);
        let y = rand_mat(&mut rng);
        let mut a = AltForm::zero(n, 2);
        for _ in 0..4 {
            let i = rng.random_range(1..=n);
            let j = rng.random_range(1..=n);
            if i != j {
                a.add_term(&[i, j], Scalar::from(rng.random_range(-3i64..=3)));
            }
        }
        let act = |m: &Mat, f: &AltForm| f.inf_action(m).expect("dimensions agree");
        let lhs = act(&x.commutator(&y), &a);
        let rhs = &act(&x, &act(&y, &a)) - &act(&y, &act(&x, &a));
        plus &= lhs == rhs;
        minus &= lhs == -&rhs;
    }
    match (plus, minus) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    }
}
