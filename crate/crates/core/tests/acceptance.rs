//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! print.

use std::process::ExitCode;
use std::time::Instant;

use calibkit::calibnum::{
    calibration_bound, coassoc_family_rank, coassoc_normal_iso, comass_estimate,
    is_calibrated_plane, normal_complement, restriction_max, sample_group, to_complex,
    ComassConfig, Frame,
};
use calibkit::cartan::{
    build_g2_restrainers, cartan_test, extension_rank_s, g2_su2, polar_profile, restraining_check,
};
use calibkit::catalog::{self, CatalogKey};
use calibkit::exact::{Mat, Scalar};
use calibkit::exterior::AltForm;
use calibkit::models::{
    build_g2_structure, coframe_residuals, standardize_sd_triple, torus_metric_roundtrip, SDTriple,
};
use calibkit::report::random_gl4;
use calibkit::stabilizer::{stab_algebra, strong_admissibility, FormSystem, SystemName};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const SEED: u64 = 20240601;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn su3_polar() -> Verdict {
    let t = cartan_test(&FormSystem::named(SystemName::Su3));
    ensure(
        t.profile.h_dims == [36, 36, 35, 31, 22, 14, 8],
        format!("h_dims {:?}", t.profile.h_dims),
    )?;
    ensure(
        t.profile.c_seq == [0, 0, 1, 5, 14, 22, 28],
        format!("c_seq {:?}", t.profile.c_seq),
    )?;
    ensure(
        t.c_sum == 42 && t.symbol_rank == 42,
        format!("sum {} rank {}", t.c_sum, t.symbol_rank),
    )?;
    Ok(format!(
        "h = {:?}, Σc = {} = rank",
        t.profile.h_dims, t.c_sum
    ))
}

fn g2_polar() -> Verdict {
    let t = cartan_test(&FormSystem::named(SystemName::G2));
    ensure(
        t.profile.h_dims == [49, 49, 49, 48, 44, 34, 21, 14],
        format!("h_dims {:?}", t.profile.h_dims),
    )?;
    ensure(
        t.profile.c_seq == [0, 0, 0, 1, 5, 15, 28, 35],
        format!("c_seq {:?}", t.profile.c_seq),
    )?;
    let formula = 7 * (21 - t.profile.g_dim);
    ensure(
        t.c_sum == 49 && t.symbol_rank == 49 && formula == 49,
        format!("sum {} rank {} 7(21-g) {}", t.c_sum, t.symbol_rank, formula),
    )?;
    Ok(format!(
        "h = {:?}, Σc = 49 = rank = 7·(21−14)",
        t.profile.h_dims
    ))
}

fn stabilizers() -> Verdict {
    let cases = [
        ("su3", FormSystem::named(SystemName::Su3), 8),
        (
            "phi0",
            FormSystem::new(vec![catalog::phi0()]).map_err(err)?,
            14,
        ),
        ("omega0", FormSystem::named(SystemName::OmegaOnly), 21),
        ("kraines", FormSystem::named(SystemName::Sp2Sp1), 13),
    ];
    let mut dims = Vec::new();
    for (name, sys, dim) in cases {
        let g = stab_algebra(&sys);
        ensure(g.dim() == dim, format!("{name}: dim {} != {dim}", g.dim()))?;
        ensure(
            g.is_bracket_closed().map_err(err)?,
            format!("{name}: not bracket-closed"),
        )?;
        dims.push(g.dim());
    }
    Ok(format!("dims {dims:?}, all bracket-closed"))
}

fn admissibility() -> Verdict {
    let su3 = strong_admissibility(&FormSystem::named(SystemName::Su3)).map_err(err)?;
    let g2 = strong_admissibility(&FormSystem::named(SystemName::G2)).map_err(err)?;
    let sp = strong_admissibility(&FormSystem::named(SystemName::Sp2Sp1)).map_err(err)?;
    ensure(su3.verdict && su3.symbol_rank == 42, format!("su3 {su3:?}"))?;
    ensure(g2.verdict && g2.symbol_rank == 49, format!("g2 {g2:?}"))?;
    ensure(
        !sp.verdict && sp.expected_rank == 120 && sp.symbol_rank < 120 && sp.symbol_rank <= 56,
        format!("sp2sp1 {sp:?}"),
    )?;
    Ok(format!(
        "su3 rank 42 true, g2 rank 49 true, sp2sp1 rank {} of 120 false",
        sp.symbol_rank
    ))
}

fn interleaved() -> Verdict {
    let t = cartan_test(&FormSystem::named(SystemName::Su3Star));
    ensure(t.c_sum < 42, format!("Σc = {}", t.c_sum))?;
    ensure(
        t.c_sum == 38,
        format!("regression constant changed: Σc = {}", t.c_sum),
    )?;
    Ok(format!(
        "Σc = {} < 42 (h = {:?})",
        t.c_sum, t.profile.h_dims
    ))
}

fn restraining() -> Verdict {
    let su3 = FormSystem::named(SystemName::Su3);
    let r6 = catalog::get_matrix(CatalogKey::R6).map_err(err)?;
    for (key, k, w_dim, h_dim) in [
        (CatalogKey::W5, 3, 5, 31),
        (CatalogKey::W14, 4, 14, 22),
        (CatalogKey::W22, 5, 22, 14),
    ] {
        let w = catalog::get_space(key).map_err(err)?;
        let c = restraining_check(&w, &su3, k, std::slice::from_ref(&r6), &[]).map_err(err)?;
        ensure(
            c.meet_dim == 0
                && c.w_dim == w_dim
                && c.h_dim == h_dim
                && c.w_dim + c.h_dim == 36
                && c.pass,
            format!("{key}: {c:?}"),
        )?;
    }
    let g2 = FormSystem::named(SystemName::G2);
    let w = build_g2_restrainers(&g2).map_err(err)?;
    let dims = [w.w5.dim(), w.w15.dim(), w.w28.dim()];
    ensure(dims == [5, 15, 28], format!("G2 dims {dims:?}"))?;
    ensure(
        w.w5.is_subspace_of(&w.w15) && w.w15.is_subspace_of(&w.w28),
        "G2 spaces not nested",
    )?;
    let r7 = catalog::get_matrix(CatalogKey::R7).map_err(err)?;
    let su2 = g2_su2();
    ensure(su2.dim() == 3, "su(2) has wrong dimension")?;
    let su2 = su2.matrices().map_err(err)?;
    for (k, space) in w.by_level() {
        ensure(
            space.conj_invariant(&r7).map_err(err)?,
            format!("W at k={k} not R7-invariant"),
        )?;
        ensure(
            space.bracket_invariant(&su2).map_err(err)?,
            format!("W at k={k} not su(2)-invariant"),
        )?;
        let c = restraining_check(space, &g2, k, std::slice::from_ref(&r7), &su2).map_err(err)?;
        ensure(c.complementary, format!("W at k={k} not complementary"))?;
    }
    Ok("W5/W14/W22 complementary and R6-invariant; G2 spaces (5,15,28) nested, R7- and su(2)-invariant".into())
}

fn extension() -> Verdict {
    let su3 = FormSystem::named(SystemName::Su3);
    let rs: Vec<i64> = (3..6)
        .map(|k| extension_rank_s(&su3, k).map(|e| e.r))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let e3 = extension_rank_s(&su3, 3).map_err(err)?;
    ensure(
        rs == [25, 15, 6] && e3.dim_h == 29,
        format!("su3 r {rs:?}, dim H(E_3) {}", e3.dim_h),
    )?;
    let g2 = polar_profile(&FormSystem::named(SystemName::G2));
    let mut g2_rs = Vec::new();
    for (k, w_dim, codim) in [(4usize, 5usize, 10usize), (5, 15, 21), (6, 28, 35)] {
        let e = g2.extension_rank(k).map_err(err)?;
        // restraining codimension: dim S - (k + 1) - dim W = 42 - codim
        let restrained = e.dim_s as i64 - (k as i64 + 1) - w_dim as i64;
        ensure(
            e.dim_s == 42 && e.r == 42 - codim as i64 && e.r == restrained,
            format!("g2 k={k}: {e:?}"),
        )?;
        g2_rs.push(e.r);
    }
    Ok(format!("su3 r = {rs:?}, dim H(E_3) = 29; g2 r = {g2_rs:?}"))
}

fn golden_forms() -> Verdict {
    let b = |idx: &[usize]| AltForm::basis(7, idx);
    let pair = |a: &[usize], x: &[usize], y: &[usize]| b(a).wedge(&(&b(x) + &b(y))).unwrap();
    let printed_star = &(&(&b(&[1, 2, 3, 4]) - &pair(&[6, 7], &[1, 2], &[3, 4]))
        - &pair(&[7, 5], &[1, 3], &[4, 2]))
        - &pair(&[5, 6], &[1, 4], &[2, 3]);
    let hodge = catalog::phi0().hodge();
    ensure(
        hodge == printed_star,
        format!("hodge(φ0) = {hodge}, reference {printed_star}"),
    )?;
    let (re, im) = catalog::upsilon0(3);
    let f6 = |t: &[(&[usize], i64)]| AltForm::from_terms(6, 3, t);
    let printed_re = f6(&[
        (&[1, 2, 3], 1),
        (&[1, 5, 6], -1),
        (&[2, 4, 6], 1),
        (&[3, 4, 5], -1),
    ]);
    ensure(re == printed_re, format!("Re Υ0 = {re}"))?;
    // the reference listing of the imaginary part, taken literally
    let printed_im = f6(&[
        (&[2, 4, 6], 1),
        (&[2, 3, 4], 1),
        (&[1, 3, 5], -1),
        (&[4, 5, 6], -1),
    ]);
    let expansion = f6(&[
        (&[1, 2, 6], 1),
        (&[1, 3, 5], -1),
        (&[2, 3, 4], 1),
        (&[4, 5, 6], -1),
    ]);
    ensure(im == expansion, format!("Im Υ0 = {im}"))?;
    ensure(
        printed_im != expansion,
        "reference listing unexpectedly agrees",
    )?;
    Ok(format!(
        "*φ0 term-for-term, Re Υ0 exact; FLAGGED: listed Im Υ0 has dx^246 ({printed_im}), expansion oracle {expansion} used"
    ))
}

fn involutions() -> Verdict {
    let r6 = catalog::get_matrix(CatalogKey::R6).map_err(err)?;
    let (re, im) = catalog::upsilon0(3);
    let w = catalog::omega0(3);
    let pb = |f: &AltForm, a: &Mat| f.pullback(a).unwrap();
    ensure(
        pb(&w, &r6) == -&w && pb(&re, &r6) == re && pb(&im, &r6) == -&im,
        "R6 action",
    )?;
    let minus = Mat::identity(7).scale(&Scalar::from(-1));
    let (phi, star) = (catalog::phi0(), catalog::star_phi0());
    ensure(
        pb(&phi, &minus) == -&phi && pb(&star, &minus) == star,
        "-I7 action",
    )?;
    Ok("R6: (ω0, ReΥ0, ImΥ0) ↦ (−ω0, ReΥ0, −ImΥ0); −I7: (φ0, *φ0) ↦ (−φ0, *φ0)".into())
}

fn calibration() -> Verdict {
    const SAMPLES: usize = 100_000;
    let forms = [
        ("omega0", catalog::omega0(3)),
        ("Omega^[2]", catalog::wirtinger(3, 2)),
        ("re_upsilon0", catalog::upsilon0(3).0),
        ("phi0", catalog::phi0()),
        ("star_phi0", catalog::star_phi0()),
    ];
    let cfg = ComassConfig {
        seed: SEED,
        ..ComassConfig::default()
    };
    let mut summary = Vec::new();
    for (name, f) in forms {
        let bound = calibration_bound(&f, SAMPLES, SEED);
        ensure(
            bound.samples >= SAMPLES && bound.max_value <= 1.0 + TOL,
            format!("{name}: {bound:?}"),
        )?;
        let est = comass_estimate(&f, f.degree(), cfg).map_err(err)?;
        ensure(
            est.estimate >= 1.0 - 1e-3 && est.estimate <= 1.0 + TOL,
            format!("{name}: comass estimate {}", est.estimate),
        )?;
        summary.push(format!(
            "{name} max {:.6} est {:.12}",
            bound.max_value, est.estimate
        ));
    }
    Ok(format!(
        "seed {SEED}, {SAMPLES} frames each: {}",
        summary.join("; ")
    ))
}

/// `ω_0(u, v)` and `Υ_0(u, v, w)` straight from the coordinates, with
/// `z_k = x_k + i x_{k+3}`.
fn omega_direct(u: &[f64], v: &[f64]) -> f64 {
    (0..3).map(|k| u[k] * v[k + 3] - u[k + 3] * v[k]).sum()
}

fn upsilon_direct(cols: &DMatrix<f64>) -> Complex64 {
    DMatrix::from_fn(3, 3, |k, j| Complex64::new(cols[(k, j)], cols[(k + 3, j)])).determinant()
}

fn planes() -> Verdict {
    const N: u64 = 100;
    let su3 = catalog::get_space(CatalogKey::Su(3)).map_err(err)?;
    let u3 = catalog::get_space(CatalogKey::U(3)).map_err(err)?;
    let g2 = stab_algebra(&FormSystem::named(SystemName::G2));
    let (phi, star) = (catalog::phi0(), catalog::star_phi0());
    for i in 0..N {
        // special Lagrangian images of R^3
        let a = sample_group(&su3, SEED, i).map_err(err)?;
        let m = a.columns(0, 3).into_owned();
        let cols: Vec<Vec<f64>> = (0..3)
            .map(|j| m.column(j).iter().copied().collect())
            .collect();
        for p in 0..3 {
            for q in p + 1..3 {
                ensure(
                    omega_direct(&cols[p], &cols[q]).abs() <= TOL,
                    format!("SU(3) sample {i}: ι*ω ≠ 0"),
                )?;
            }
        }
        let ups = upsilon_direct(&m);
        ensure(
            (ups.re - 1.0).abs() <= TOL && ups.im.abs() <= TOL,
            format!("SU(3) sample {i}: Υ(E) = {ups}"),
        )?;

        // unitary images: λ(E) = det A
        let a = sample_group(&u3, SEED, i).map_err(err)?;
        let m = a.columns(0, 3).into_owned();
        let lam = upsilon_direct(&m);
        let det = to_complex(&a).map_err(err)?.determinant();
        ensure(
            (lam.norm() - 1.0).abs() <= TOL,
            format!("U(3) sample {i}: |λ| = {}", lam.norm()),
        )?;
        ensure(
            (lam - det).norm() <= TOL,
            format!("U(3) sample {i}: λ = {lam}, det = {det}"),
        )?;

        // coassociative images of E_0
        let a = sample_group(&g2, SEED, i).map_err(err)?;
        let frame = Frame::coordinate(7, &[1, 2, 3, 4])
            .transform(&a)
            .map_err(err)?;
        ensure(
            restriction_max(&phi, &frame).map_err(err)? <= TOL,
            format!("G2 sample {i}: ι*φ0 ≠ 0"),
        )?;
        ensure(
            is_calibrated_plane(&star, &frame, TOL).map_err(err)?,
            format!("G2 sample {i}: *φ0 ≠ 1"),
        )?;
        let normals = normal_complement(&frame);
        for j in 0..3 {
            let v: Vec<f64> = normals.column(j).iter().copied().collect();
            let img = coassoc_normal_iso(&frame, &v, TOL).map_err(err)?;
            ensure(img.self_dual, format!("G2 sample {i}: image not self-dual"))?;
            ensure(
                (img.norm - 2f64.sqrt()).abs() <= TOL,
                format!("G2 sample {i}: norm {}", img.norm),
            )?;
        }
        ensure(
            coassoc_family_rank(&frame, TOL).map_err(err)? == 3,
            format!("G2 sample {i}: rank"),
        )?;
    }
    Ok(format!(
        "seed {SEED}, {N} samples each: SL, unitary phase = det, coassociative, normal map rank 3"
    ))
}

fn models() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = SDTriple::standard()
            .pullback(&random_gl4(&mut rng))
            .map_err(err)?;
        let c = standardize_sd_triple(&t).map_err(err)?;
        worst = worst.max(
            coframe_residuals(&t, &c.alphas)
                .into_iter()
                .fold(0.0, f64::max),
        );
    }
    ensure(worst < TOL, format!("worst round-trip residual {worst:e}"))?;
    let g = build_g2_structure(&SDTriple::standard()).map_err(err)?;
    ensure(
        g.phibar.hodge() == g.star_phibar,
        "hodge(phibar) != star_phibar",
    )?;
    let stab = stab_algebra(&FormSystem::new(vec![g.phibar.clone()]).map_err(err)?).dim();
    ensure(stab == 14, format!("stab(phibar) dim {stab}"))?;
    for m in 3..=5usize {
        for _ in 0..5 {
            let b = Mat::from_fn(m, m, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => {
                    Scalar::new(rng.random_range(1..=4), rng.random_range(1..=3))
                }
                std::cmp::Ordering::Less => {
                    Scalar::new(rng.random_range(-3..=3), rng.random_range(1..=2))
                }
                std::cmp::Ordering::Greater => Scalar::zero(),
            });
            let gm = &b.transpose() * &b;
            let r = torus_metric_roundtrip(&gm).map_err(err)?;
            ensure(r.g_back == gm, format!("torus m={m}: round trip not exact"))?;
        }
    }
    ensure(
        torus_metric_roundtrip(&Mat::identity(2)).is_err(),
        "torus m=2 accepted",
    )?;
    Ok(format!("100 triples, worst residual {worst:.1e}; hodge(phibar) exact; stab 14; torus exact m=3,4,5, m=2 rejected"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("SU(3) polar dimensions", su3_polar),
        ("G2 polar dimensions", g2_polar),
        ("stabilizer dimensions", stabilizers),
        ("strong admissibility verdicts", admissibility),
        ("regular presentation contrast", interleaved),
        ("restraining spaces", restraining),
        ("extension ranks on S", extension),
        ("hodge/golden forms", golden_forms),
        ("involution identities", involutions),
        ("calibration property", calibration),
        ("plane characterizations", planes),
        ("models", models),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS  {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
