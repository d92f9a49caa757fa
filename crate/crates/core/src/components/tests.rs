use super::*;
use crate::jets::VarietySpec;
use crate::strata::candidates_node;

fn scenario(tag: &str) -> Scenario {
    Scenario::parse(tag, 7).unwrap()
}

#[test]
fn a1_single_component() {
    let sc = scenario("cA:1");
    for m in [2, 3] {
        let r = component_report(&sc, m, &ReportOptions::with_oracle(5)).unwrap();
        assert!(r.certified, "{:?}", r.diagnostics);
        assert_eq!(r.count, 1);
        let (_, fiber) = fiber_ideal(&sc.variety, m).unwrap();
        assert!(r.components[0].closure.equals(&fiber).unwrap());
        assert!(r.oracle.unwrap().agrees);
    }
}

#[test]
fn a2_two_components() {
    let sc = scenario("cA:2");
    let r = component_report(&sc, 3, &ReportOptions::with_oracle(5)).unwrap();
    assert!(r.certified, "{:?}", r.diagnostics);
    assert_eq!(r.count, 2);
    assert_eq!(r.arc_type_count(), 2);
    let o = r.oracle.unwrap();
    assert!(o.agrees && o.counts.all_private());
}

#[test]
fn node_branches_alone_do_not_cover() {
    let v = VarietySpec::parse(&["x", "y"], &["y^2 - x^2 - x^3"], Some(1)).unwrap();
    let (ctx, fiber) = fiber_ideal(&v, 3).unwrap();
    let plus = Ideal::parse(ctx.ring(), &["y#1 - x#1", "2*y#2 - 2*x#2 - x#1^2"]).unwrap();
    let minus = Ideal::parse(ctx.ring(), &["y#1 + x#1", "2*y#2 + 2*x#2 + x#1^2"]).unwrap();
    let r = certify_components(&fiber, &[("b+".into(), plus), ("b-".into(), minus)]).unwrap();
    assert!(!r.cover_certified);
    assert!(!r.certified);
    assert_eq!(r.count, 0);
}

#[test]
fn redundant_candidate_is_reported() {
    let sc = scenario("cA:2");
    let (ctx, fiber) = fiber_ideal(&sc.variety, 3).unwrap();
    let mut closures = sc.candidates(3).unwrap().closures().unwrap();
    let smaller = closures[0].1.add_generators(&[ctx.var(2, 1)]).unwrap();
    closures.push(("extra".into(), smaller));
    let r = certify_components(&fiber, &closures).unwrap();
    assert!(r.cover_certified && r.containment_certified);
    assert!(!r.irredundancy_certified);
}

#[test]
fn node_counts_and_erratum_note() {
    let sc = scenario("node");
    for m in 3..=5 {
        let r = component_report(&sc, m, &ReportOptions::default()).unwrap();
        assert!(r.certified, "{:?}", r.diagnostics);
        assert_eq!(r.count, m);
        assert_eq!(r.arc_type_count(), 2);
        assert!(r.notes.iter().any(|n| n.starts_with("erratum candidate")));
    }
    assert!(candidates_node(2).is_ok());
}

#[test]
fn a2_graph_has_two_chains() {
    let sc = scenario("cA:2");
    let (g, _) = build_graph(&sc, 5, &ReportOptions::default()).unwrap();
    assert!(g.is_order_graded());
    let counts: Vec<usize> = (0..=5).map(|m| g.at_order(m).count()).collect();
    assert_eq!(counts, vec![1, 1, 2, 2, 2, 2]);
    let c = chain_analysis(&g);
    assert_eq!(c.chains, 2);
    assert!(c.m0.unwrap() <= 3 && c.all_reach_max);
    let ws = sc.witnesses(5).unwrap();
    let flags = arc_type_flags(&g, &sc, &ws).unwrap();
    assert!(flags_form_chains(&g, &flags));
    let dot = g.to_dot();
    assert!(dot.contains("label=\"3/V1/"));
}

#[test]
fn a1_graph_is_one_chain_from_the_root() {
    let (g, _) = build_graph(&scenario("cA:1"), 4, &ReportOptions::default()).unwrap();
    let c = chain_analysis(&g);
    assert_eq!((c.m0, c.chains), (Some(0), 1));
    assert_eq!(g.roots().count(), 1);
}

#[test]
fn node_graph_is_not_a_chain_union() {
    let sc = scenario("node");
    let (g, _) = build_graph(&sc, 5, &ReportOptions::default()).unwrap();
    let c = chain_analysis(&g);
    assert_eq!(c.m0, None);
    assert!(c.report.contains("branching"));
    // the two arc-type families persist at every positive order
    for m in 1..=5 {
        let flagged = g.at_order(m).filter(|v| v.arc_type).count();
        assert_eq!(flagged, if m == 1 { 1 } else { 2 }, "order {m}");
    }
    let flags: Vec<bool> = g.vertices.iter().map(|v| v.arc_type).collect();
    assert!(flags_form_chains(&g, &flags));
}

#[test]
fn injectivity_on_node_and_a2() {
    for tag in ["node", "cA:2"] {
        let r = injectivity_check(&scenario(tag), 5, &ReportOptions::default()).unwrap();
        assert!(r.holds, "{tag}: {:?}", r.diagnostics);
        assert_eq!((r.mu, r.nu), (1, 1));
    }
}

#[test]
fn edge_transitivity_spot_check() {
    let (g, _) = build_graph(&scenario("cA:3"), 5, &ReportOptions::default()).unwrap();
    for e1 in &g.edges {
        for e2 in g.out_edges(e1.to) {
            let a = &g.vertices[e1.from].closure;
            let c = &g.vertices[e2.to].closure;
            let lower = c.generators().iter().map(|p| p.embed(a.ring()).unwrap()).collect::<Vec<_>>();
            for p in lower {
                assert!(a.radical_contains(&p).unwrap());
            }
        }
    }
}
