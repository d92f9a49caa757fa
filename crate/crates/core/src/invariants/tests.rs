use proptest::prelude::*;

use super::*;
use crate::poly::{rat, ratio, Ring};
use crate::strata::{candidates_hdv, hdv_monomial_ideal, BType};

fn mi(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::new(n, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
}

#[test]
fn minimal_generators_only() {
    let a = mi(2, &[&[2, 0], &[2, 1], &[0, 3], &[2, 0]]);
    assert_eq!(a.generators(), &[vec![0, 3], vec![2, 0]]);
    assert!(MonomialIdeal::new(2, vec![]).is_err());
    assert!(MonomialIdeal::new(2, vec![vec![1]]).is_err());
}

#[test]
fn parse_generator_lists() {
    let a = MonomialIdeal::parse("x^2, y^2, z^3", None).unwrap();
    assert_eq!(a.nvars(), 3);
    assert_eq!(lct_monomial(&a).unwrap().lct, ratio(4, 3));
    assert!(MonomialIdeal::parse("x + y", None).is_err());
}

#[test]
fn howald_values() {
    for n in 1..=5u32 {
        let a = mi(3, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, n + 1]]);
        let expected = ratio(n as i64 + 2, n as i64 + 1);
        assert_eq!(lct_monomial(&a).unwrap().lct, expected);
        assert_eq!(lct_by_vertex_enumeration(&a, 12).unwrap(), expected);
    }
    for k in [2usize, 4, 6] {
        let a = MonomialIdeal::maximal_squared(k);
        assert_eq!(lct_monomial(&a).unwrap().lct, ratio(k as i64, 2));
    }
    assert_eq!(lct_monomial(&mi(1, &[&[1]])).unwrap().lct, rat(1));
    assert_eq!(lct_monomial(&mi(2, &[&[1, 0]])).unwrap().lct, rat(1));
    assert!(matches!(lct_monomial(&mi(2, &[&[0, 0]])), Err(InvariantError::UnitIdeal)));
}

#[test]
fn oracle_cap() {
    let a = MonomialIdeal::maximal_squared(5);
    assert_eq!(a.generators().len(), 15);
    assert!(matches!(lct_by_vertex_enumeration(&a, 12), Err(InvariantError::TooManyGenerators { .. })));
}

#[test]
fn thom_sebastiani_examples() {
    let u2 = MonomialIdeal::maximal_squared(2);
    let b = mi(3, &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
    assert_eq!(lct_sum_disjoint(&u2, &b).unwrap(), ratio(5, 2));
    assert_eq!(lct_monomial(&u2.join(&b)).unwrap().lct, ratio(5, 2));
    let w = mi(1, &[&[1]]);
    assert_eq!(lct_sum_disjoint(&b, &w).unwrap(), ratio(5, 2));
    let u4 = MonomialIdeal::maximal_squared(4);
    let e6 = mi(3, &[&[0, 0, 2], &[3, 0, 0], &[0, 4, 0]]);
    let sum = lct_sum_disjoint(&u4, &e6).unwrap();
    assert_eq!(sum, rat(2) + lct_monomial(&e6).unwrap().lct);
    assert_eq!(lct_monomial(&u4.join(&e6)).unwrap().lct, sum);
    assert_eq!(lct_by_vertex_enumeration(&e6, 12).unwrap(), ratio(13, 12));
}

#[test]
fn hdv_lcts_exceed_e() {
    for e in 1..=3u32 {
        for b in BType::all_shipped() {
            let a = hdv_monomial_ideal(e, b);
            let l = lct_monomial(&a).unwrap();
            assert!(l.lct > rat(e as i64), "e={e} {b}");
            assert!(verify_lct(&a, &l));
        }
    }
}

#[test]
fn multiplicities() {
    let ring = Ring::rational(&["x", "y", "z"]);
    let p = |s: &str| crate::poly::parse_polynomial(s, &ring).unwrap();
    let zero = vec![rat(0); 3];
    assert_eq!(multiplicity_at(&[p("x*y - z^3")], &zero).unwrap(), 2);
    assert_eq!(multiplicity_at(&[p("x - y^2")], &zero).unwrap(), 1);
    assert_eq!(multiplicity_at(&[p("(x-1)^2 - y^3")], &[rat(1), rat(0), rat(0)]).unwrap(), 2);
    assert!(multiplicity_at(&[p("x - 1")], &zero).is_err());
    let fam = candidates_hdv(2, BType::E6, 1).unwrap();
    assert_eq!(multiplicity_at(fam.variety.polynomials(), fam.variety.point()).unwrap(), 2);
}

#[test]
fn blowup_bounds() {
    for e in 1..=3u32 {
        assert_eq!(blowup_log_discrepancy(2 * e + 1, &rat(e as i64), 2), rat(1));
    }
    assert_eq!(blowup_log_discrepancy(3, &rat(1), 2), rat(1));
    assert_eq!(blowup_log_discrepancy(4, &rat(0), 2), rat(4));
}

#[test]
fn ranks() {
    let m = vec![vec![rat(1), rat(2), rat(3)], vec![rat(2), rat(4), rat(6)], vec![rat(0), ratio(1, 2), rat(1)]];
    assert_eq!(matrix_rank(&m), 2);
    assert_eq!(matrix_rank(&[vec![rat(0), rat(0)]]), 0);
    let id: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| rat((i == j) as i64)).collect()).collect();
    assert_eq!(matrix_rank(&id), 4);
    let skip = vec![vec![rat(0), rat(2), rat(1)], vec![rat(0), rat(4), rat(3)], vec![rat(0), rat(6), rat(4)]];
    assert_eq!(matrix_rank(&skip), 2);
}

#[test]
fn embedding_dimensions() {
    let smooth = VarietySpec::parse(&["x", "y"], &["y - x^2"], None).unwrap();
    let d = edim_ecodim(&smooth, smooth.point()).unwrap();
    assert_eq!((d.edim, d.dim, d.ecodim), (1, 1, 0));
    assert!(check_mec_bound(&d, &rat(1)).equality);
    let a1 = VarietySpec::parse(&["x", "y", "z"], &["x*y - z^2"], None).unwrap();
    let d = edim_ecodim(&a1, a1.point()).unwrap();
    assert_eq!((d.edim, d.dim, d.ecodim), (3, 2, 1));
    let b = check_mec_bound(&d, &rat(1));
    assert!(b.holds && b.equality);
    assert!(!check_mec_bound(&d, &rat(2)).holds);
}

#[test]
fn certificates() {
    let c = hdv_certificate(1, BType::A(2), 11, 5).unwrap();
    assert_eq!(c.mld_verdict, Some(rat(1)));
    assert_eq!((c.checks.embedding.dim, c.checks.embedding.ecodim), (2, 1));
    let c = hdv_certificate(2, BType::E6, 11, 5).unwrap();
    assert_eq!(c.mld_verdict, Some(rat(1)));
    assert_eq!((c.checks.embedding.dim, c.checks.embedding.ecodim), (3, 2));
    assert!(c.checks.mec.equality);
    let json = serde_json::to_value(&c).unwrap();
    assert_eq!(json["mld_verdict"], "1");
    assert_eq!(json["seed"], 11);
}

#[test]
fn singular_lines_for_d_and_e7_in_higher_codimension() {
    for b in [BType::D(4), BType::D(5), BType::E7] {
        assert!(hdv_certificate(1, b, 3, 3).unwrap().certified(), "{b}");
        let c = hdv_certificate_attempts(2, b, 3, 3).unwrap();
        assert!(c.checks.complete_intersection);
        assert!(!c.checks.isolated_singularity);
        assert_eq!(c.checks.singular_locus_dim, 1);
        assert!(c.mld_verdict.is_none());
        assert!(matches!(hdv_certificate(2, b, 3, 3), Err(InvariantError::RedrawsExhausted(3))));
    }
}

#[test]
fn linear_part_breaks_the_certificate() {
    let mut fam = candidates_hdv(2, BType::A(1), 5).unwrap();
    let ring = fam.variety.ring().clone();
    let mut polys = fam.variety.polynomials().to_vec();
    polys[1] = &polys[1] + &Polynomial::var(&ring, 0);
    fam.variety = VarietySpec::new(&ring, polys, None, None).unwrap();
    let c = hdv_certificate_for(&fam, 1).unwrap();
    assert_ne!(c.checks.embedding.ecodim, 2);
    assert!(c.mld_verdict.is_none());
}

#[test]
fn slicing_a_compound_a1() {
    let v = VarietySpec::parse(&["x", "y", "z", "w"], &["x*y - z^2 - w^2"], None).unwrap();
    assert_eq!(hyperplane_section(&v, 0, 1, 5).unwrap().polynomials().len(), 1);
    let s = hyperplane_section(&v, 1, 1, 5).unwrap();
    let d = edim_ecodim(&s, s.point()).unwrap();
    assert_eq!((d.edim, d.dim, d.ecodim), (3, 2, 1));
    assert!(hyperplane_section(&v, 3, 1, 5).is_err());
}

fn small_ideal() -> impl Strategy<Value = MonomialIdeal> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0u32..4, n), 1..5).prop_filter_map("proper", move |gens| {
            let a = MonomialIdeal::new(n, gens).ok()?;
            a.is_proper().then_some(a)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lct_scales_inversely(a in small_ideal(), c in 2u32..=3) {
        let l = lct_monomial(&a).unwrap().lct;
        prop_assert_eq!(lct_monomial(&a.scaled(c)).unwrap().lct, l / rat(c as i64));
    }

    #[test]
    fn lct_is_monotone(a in small_ideal(), extra in prop::collection::vec(0u32..4, 3)) {
        // adding a generator enlarges the ideal
        let mut gens = a.generators().to_vec();
        let g: Vec<u32> = extra.into_iter().take(a.nvars()).collect();
        prop_assume!(g.len() == a.nvars() && g.iter().any(|&e| e > 0));
        gens.push(g);
        let b = MonomialIdeal::new(a.nvars(), gens).unwrap();
        prop_assert!(lct_monomial(&a).unwrap().lct <= lct_monomial(&b).unwrap().lct);
    }

    #[test]
    fn simplex_agrees_with_vertex_enumeration(a in small_ideal()) {
        let l = lct_monomial(&a).unwrap();
        prop_assert!(verify_lct(&a, &l));
        prop_assert_eq!(lct_by_vertex_enumeration(&a, 12).unwrap(), l.lct);
    }

    #[test]
    fn thom_sebastiani(a in small_ideal(), b in small_ideal()) {
        prop_assert_eq!(lct_sum_disjoint(&a, &b).unwrap(), lct_monomial(&a.join(&b)).unwrap().lct);
    }
}
