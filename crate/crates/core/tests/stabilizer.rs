use calibkit::stabilizer::{
    stab_algebra, strong_admissibility, symbol_rank, FormSystem, SystemName,
};

#[test]
fn su3_is_strongly_admissible() {
    let v = strong_admissibility(&FormSystem::named(SystemName::Su3)).unwrap();
    assert_eq!((v.g_dim, v.symbol_rank, v.expected_rank), (8, 42, 42));
    assert!(v.verdict && v.kernel_cross_check);
}

#[test]
fn g2_is_strongly_admissible() {
    let v = strong_admissibility(&FormSystem::named(SystemName::G2)).unwrap();
    assert_eq!((v.g_dim, v.symbol_rank, v.expected_rank), (14, 49, 49));
    assert!(v.verdict && v.kernel_cross_check);
}

#[test]
fn kraines_is_not_strongly_admissible() {
    let sys = FormSystem::named(SystemName::Sp2Sp1);
    let g = stab_algebra(&sys);
    assert_eq!(g.dim(), 13);
    assert!(g.is_bracket_closed().unwrap());
    let v = strong_admissibility(&sys).unwrap();
    assert_eq!(v.expected_rank, 120);
    assert!(v.symbol_rank <= 56);
    assert!(!v.verdict);
    assert_eq!(v.symbol_rank, symbol_rank(&sys));
    println!("kraines symbol rank = {}", v.symbol_rank);
}
