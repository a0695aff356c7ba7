//! Polar spaces `h_k`, Cartan's test, extension ranks and restraining
//! subspaces.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Mat, Scalar, Subspace};
use crate::exterior::AltForm;
use crate::stabilizer::{matrix_kernel, stab_algebra, symbol_rank, FormSystem};

/// `h_k = {x ∈ M_n : ι_k^*(x · α) = 0 for every generator α}`.
pub fn polar_h(system: &FormSystem, k: usize) -> Result<Subspace> {
    let n = system.dim();
    if k > n {
        return Err(Error::OutOfRange {
            what: "polar index k",
            value: k,
            max: n,
        });
    }
    Ok(matrix_kernel(system, |x, a| {
        a.inf_action(x)
            .and_then(|f| f.restrict(k))
            .expect("dimensions agree")
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarProfile {
    pub n: usize,
    /// `dim h_0, ..., dim h_n`.
    pub h_dims: Vec<usize>,
    /// `c_k = n^2 - dim h_k`.
    pub c_seq: Vec<usize>,
    pub g_dim: usize,
}

impl PolarProfile {
    /// `c_0 + ... + c_{n-1}`.
    pub fn c_sum(&self) -> usize {
        self.c_seq[..self.n].iter().sum()
    }

    pub fn extension_rank(&self, k: usize) -> Result<ExtensionRank> {
        if k >= self.n {
            return Err(Error::OutOfRange {
                what: "flag index k",
                value: k,
                max: self.n - 1,
            });
        }
        let dim_s = self.n + self.n * self.n - self.g_dim;
        let dim_h = dim_s - self.c_seq[k];
        Ok(ExtensionRank {
            k,
            dim_s,
            dim_h,
            r: dim_h as i64 - k as i64 - 1,
        })
    }
}

pub fn polar_profile(system: &FormSystem) -> PolarProfile {
    let n = system.dim();
    let nn = n * n;
    let (h_dims, g_dim) = rayon::join(
        || {
            (0..=n)
                .into_par_iter()
                .map(|k| polar_h(system, k).expect("k <= n").dim())
                .collect::<Vec<_>>()
        },
        || stab_algebra(system).dim(),
    );
    let c_seq = h_dims.iter().map(|d| nn - d).collect();
    PolarProfile {
        n,
        h_dims,
        c_seq,
        g_dim,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanTest {
    pub profile: PolarProfile,
    pub c_sum: usize,
    pub symbol_rank: usize,
    /// Cartan's test holds with equality: `c_0 + ... + c_{n-1} = rank`.
    pub regular: bool,
}

pub fn cartan_test(system: &FormSystem) -> CartanTest {
    let (profile, rank) = rayon::join(|| polar_profile(system), || symbol_rank(system));
    let c_sum = profile.c_sum();
    CartanTest {
        profile,
        c_sum,
        symbol_rank: rank,
        regular: c_sum == rank,
    }
}

/// Extension data for the flat flag element `E_k` of the bundle `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionRank {
    pub k: usize,
    /// `n + n^2 - dim g`.
    pub dim_s: usize,
    /// `dim_s - c_k`.
    pub dim_h: usize,
    /// `dim_h - k - 1`.
    pub r: i64,
}

pub fn extension_rank_s(system: &FormSystem, k: usize) -> Result<ExtensionRank> {
    let n = system.dim();
    if k >= n {
        return Err(Error::OutOfRange {
            what: "flag index k",
            value: k,
            max: n - 1,
        });
    }
    let h = polar_h(system, k)?;
    let g = stab_algebra(system);
    let mut c_seq = vec![0; n + 1];
    c_seq[k] = n * n - h.dim();
    PolarProfile {
        n,
        h_dims: Vec::new(),
        c_seq,
        g_dim: g.dim(),
    }
    .extension_rank(k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrainingCheck {
    pub k: usize,
    pub w_dim: usize,
    pub h_dim: usize,
    pub meet_dim: usize,
    pub join_dim: usize,
    /// `W ∩ h_k = 0` and `dim W + dim h_k = n^2`.
    pub complementary: bool,
    /// One entry per group element: `g W g^{-1} = W`.
    pub conj_invariant: Vec<bool>,
    /// One entry per algebra element: `[a, W] ⊆ W`.
    pub bracket_invariant: Vec<bool>,
    pub pass: bool,
}

/// Check that `W` is a symmetric complement to `h_k`.
pub fn restraining_check(
    w: &Subspace,
    system: &FormSystem,
    k: usize,
    sym_group: &[Mat],
    sym_algebra: &[Mat],
) -> Result<RestrainingCheck> {
    let h = polar_h(system, k)?;
    let (meet, join) = w.meet_join(&h)?;
    let n = system.dim();
    let complementary = meet.is_zero() && w.dim() + h.dim() == n * n;
    let conj_invariant = sym_group
        .iter()
        .map(|g| w.conj_invariant(g))
        .collect::<Result<Vec<_>>>()?;
    let bracket_invariant = sym_algebra
        .iter()
        .map(|a| w.bracket_invariant(std::slice::from_ref(a)))
        .collect::<Result<Vec<_>>>()?;
    let pass =
        complementary && conj_invariant.iter().all(|&b| b) && bracket_invariant.iter().all(|&b| b);
    Ok(RestrainingCheck {
        k,
        w_dim: w.dim(),
        h_dim: h.dim(),
        meet_dim: meet.dim(),
        join_dim: join.dim(),
        complementary,
        conj_invariant,
        bracket_invariant,
        pass,
    })
}

/// The subalgebra fixing `φ_0, dx^5, dx^6, dx^7`.
pub fn g2_su2() -> Subspace {
    let gens = vec![
        crate::catalog::phi0(),
        AltForm::dx(7, 5),
        AltForm::dx(7, 6),
        AltForm::dx(7, 7),
    ];
    stab_algebra(&FormSystem::new(gens).expect("same dimension"))
}

#[derive(Clone, Debug, Serialize)]
pub struct G2Restrainers {
    pub w5: Subspace,
    pub w15: Subspace,
    pub w28: Subspace,
}

impl G2Restrainers {
    /// `(k, W)` pairs: `W` is complementary to `h_k`.
    pub fn by_level(&self) -> [(usize, &Subspace); 3] {
        [(4, &self.w5), (5, &self.w15), (6, &self.w28)]
    }
}

/// Trace-orthogonal complements of `h_4, h_5, h_6`, checked to be nested and
/// invariant under `R7` and the `su(2)` fixing `dx^5, dx^6, dx^7`.
pub fn build_g2_restrainers(system: &FormSystem) -> Result<G2Restrainers> {
    if system.dim() != 7 {
        return Err(Error::DimensionMismatch {
            expected: 7,
            found: system.dim(),
        });
    }
    let spaces: Vec<Subspace> = [4, 5, 6]
        .par_iter()
        .map(|&k| polar_h(system, k).map(|h| h.ortho_complement()))
        .collect::<Result<_>>()?;
    let r7 = crate::catalog::reflection(4, 3);
    let su2 = g2_su2().matrices()?;
    for (k, w) in [4, 5, 6].iter().zip(&spaces) {
        if !w.conj_invariant(&r7)? {
            return Err(Error::InvariantViolation(format!(
                "complement of h_{k} is not R7-invariant"
            )));
        }
        if !w.bracket_invariant(&su2)? {
            return Err(Error::InvariantViolation(format!(
                "complement of h_{k} is not su(2)-invariant"
            )));
        }
    }
    if !(spaces[0].is_subspace_of(&spaces[1]) && spaces[1].is_subspace_of(&spaces[2])) {
        return Err(Error::InvariantViolation(
            "complements are not nested".into(),
        ));
    }
    let mut it = spaces.into_iter();
    Ok(G2Restrainers {
        w5: it.next().unwrap(),
        w15: it.next().unwrap(),
        w28: it.next().unwrap(),
    })
}

/// A linear functional on `M_n` written as `(coef, row, col)` terms with
/// 1-based indices, i.e. `Σ coef · x^row_col`.
pub type Equation<'a> = &'a [(i64, usize, usize)];

/// Common zero locus of the given functionals.
pub fn equations_space(n: usize, equations: &[Equation<'_>]) -> Result<Subspace> {
    let rows = equations
        .iter()
        .map(|eq| {
            let mut v = vec![Scalar::zero(); n * n];
            for &(c, i, j) in eq.iter() {
                if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
                    return Err(Error::OutOfRange {
                        what: "matrix index",
                        value: i.max(j),
                        max: n,
                    });
                }
                v[(i - 1) * n + (j - 1)] += Scalar::from(c);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::span(n * n, rows)?.ortho_complement())
}

/// The five published equations cutting out `h_3` for the SU(3) system.
pub const SU3_H3_EQUATIONS: [Equation<'static>; 5] = [
    &[(1, 4, 2), (-1, 5, 1)],
    &[(1, 5, 3), (-1, 6, 2)],
    &[(1, 6, 1), (-1, 4, 3)],
    &[(1, 1, 1), (1, 2, 2), (1, 3, 3)],
    &[(1, 4, 1), (1, 5, 2), (1, 6, 3)],
];

/// The single published equation for `h_3` of the G2 system.
pub const G2_H3_EQUATIONS: [Equation<'static>; 1] = [&[(1, 5, 3), (-1, 6, 2), (1, 7, 1)]];

/// The four further published equations cutting `h_4` out of `h_3` (G2).
pub const G2_H4_EXTRA_EQUATIONS: [Equation<'static>; 4] = [
    &[(1, 1, 1), (1, 2, 2), (1, 3, 3), (1, 4, 4)],
    &[(1, 5, 2), (1, 6, 3), (1, 7, 4)],
    &[(1, 5, 1), (1, 6, 4), (-1, 7, 3)],
    &[(1, 5, 4), (-1, 6, 1), (-1, 7, 2)],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::SystemName;

    #[test]
    fn h2_for_su3() {
        let sys = FormSystem::named(SystemName::Su3);
        let h2 = polar_h(&sys, 2).unwrap();
        assert_eq!(h2.dim(), 35);
        let eq = equations_space(6, &SU3_H3_EQUATIONS[..1]).unwrap();
        assert_eq!(h2, eq);
    }

    #[test]
    fn su3_h3_matches_printed_equations() {
        let sys = FormSystem::named(SystemName::Su3);
        let h3 = polar_h(&sys, 3).unwrap();
        assert_eq!(h3.dim(), 31);
        assert_eq!(h3, equations_space(6, &SU3_H3_EQUATIONS).unwrap());
    }

    #[test]
    fn g2_low_polar_spaces_match_printed_equations() {
        let sys = FormSystem::named(SystemName::G2);
        assert_eq!(
            polar_h(&sys, 3).unwrap(),
            equations_space(7, &G2_H3_EQUATIONS).unwrap()
        );
        let mut eqs = G2_H3_EQUATIONS.to_vec();
        eqs.extend(G2_H4_EXTRA_EQUATIONS);
        assert_eq!(polar_h(&sys, 4).unwrap(), equations_space(7, &eqs).unwrap());
    }

    #[test]
    fn out_of_range() {
        let sys = FormSystem::named(SystemName::Su3);
        assert!(polar_h(&sys, 7).is_err());
        assert!(extension_rank_s(&sys, 6).is_err());
    }

    #[test]
    fn polar_space_structure() {
        let sys = FormSystem::named(SystemName::Su3);
        let n = 6;
        let hs: Vec<Subspace> = (0..=n).map(|k| polar_h(&sys, k).unwrap()).collect();
        for k in 0..n {
            assert!(hs[k + 1].is_subspace_of(&hs[k]));
            // matrices whose first k columns vanish
            for i in 0..n {
                for j in k..n {
                    assert!(hs[k].contains_matrix(&Mat::unit(n, i, j)));
                }
            }
        }
        assert_eq!(hs[n], stab_algebra(&sys));
    }

    #[test]
    fn toy_profile() {
        // dx^{12} on R^2: h_0 = h_1 = M_2, h_2 = sl(2)
        let sys = FormSystem::new(vec![AltForm::basis(2, &[1, 2])]).unwrap();
        let p = polar_profile(&sys);
        assert_eq!(p.h_dims, vec![4, 4, 3]);
        assert_eq!(p.c_seq, vec![0, 0, 1]);
        assert_eq!(p.g_dim, 3);
        assert_eq!(p.c_sum(), 0);
        let e = p.extension_rank(1).unwrap();
        assert_eq!((e.dim_s, e.dim_h, e.r), (3, 3, 1));
    }
}
