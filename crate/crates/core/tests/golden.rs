mod common;

use common::Golden;
use pseudodiagram::bounds::{
    doubled_change, genus_bound_check, unknotting_exact_small, unknotting_upper, virtual_unknotting_exact_small,
    virtual_unknotting_upper, Check,
};
use pseudodiagram::invariants::{f_polynomial, intersection_index_polynomial, j_invariant};
use pseudodiagram::numbers::{
    characteristic_report, cl_vir_bounds, trivializing_number_shadow, Classicality, NumbersConfig, ResolutionTable,
};
use pseudodiagram::oracle::{is_unknot, Budget, Verdict};
use pseudodiagram::parallel::max_parallel_subset;
use pseudodiagram::PseudoDiagram;

fn d(s: &str) -> PseudoDiagram {
    s.parse().unwrap()
}

#[test]
fn kishino_is_beyond_the_certificates() {
    let k = Golden::load("kishino.txt").diagram();
    assert_eq!(j_invariant(&k), Ok(0));
    assert!(intersection_index_polynomial(&k).unwrap().is_zero());
    assert!(f_polynomial(&k, 20).unwrap().is_one());
    assert!(matches!(
        is_unknot(&k, &Budget::default()).unwrap(),
        Verdict::Unknown { .. }
    ));
    // it is a composition of two trivial halves
    assert_eq!(k.carrier_genus(), 2);
}

#[test]
fn kishino_shadow_has_no_proven_classical_resolution() {
    let s = Golden::load("kishino.txt").diagram().shadow();
    let table = ResolutionTable::build(&s, &Budget::default()).unwrap();
    assert!(!table.classicality.contains(&Classicality::Classical));
    let r = characteristic_report(&s, &NumbersConfig::default()).unwrap();
    // every proper partial resolution has a proven non-classical completion
    assert_eq!(r.cl.lower(), s.n());
    assert_eq!(r.cl.upper(), None);
    assert!(r.consistency_errors().is_empty());
}

#[test]
fn trefoil_sum_needs_two_changes() {
    let t = Golden::load("trefoil_sum.txt");
    let u = unknotting_exact_small(&t.diagram(), &Budget::default(), 10).unwrap();
    assert_eq!(u.exact(), Some(t.number("u")));
    let up = unknotting_upper(&t.diagram(), &Budget::default()).unwrap();
    assert_eq!(up.check, Check::Verified);
    assert!(up.upper >= 2);
}

#[test]
fn minimal_diagram_with_virtual_unknotting_gap() {
    let g = Golden::load("minimal_vu_gap.txt");
    let m = g.diagram();
    // reduced alternating: the bracket spans four times the crossings
    let f = f_polynomial(&m, 20).unwrap();
    let exps: Vec<i64> = f.terms().map(|(e, _)| e).collect();
    assert_eq!(
        exps.iter().max().unwrap() - exps.iter().min().unwrap(),
        4 * m.n() as i64
    );
    let b = Budget::default();
    let u = unknotting_exact_small(&m, &b, 10).unwrap().exact().unwrap();
    let vu = virtual_unknotting_exact_small(&m, &b, 10).unwrap().exact().unwrap();
    assert_eq!((u, vu), (g.number("u"), g.number("vu")));
    // the knot admits vu <= 2u, so this diagram does not realize it
    assert!(vu > 2 * u);
}

#[test]
fn shadow_examples() {
    let b = Budget::default();
    assert_eq!(max_parallel_subset(&d("P1+P1+P2+P2+")).count_ones(), 2);
    let parallel = trivializing_number_shadow(&d("P1+P1+P2+P2+"), &b).unwrap();
    assert_eq!(parallel.exact(), Some(0));
    let r = characteristic_report(&d("P1+P1+P2+P2+"), &NumbersConfig::default()).unwrap();
    assert!(r.kn.is_infinite());
    let tref = trivializing_number_shadow(&d("P1+P2-P3+P1+P2-P3+"), &b).unwrap();
    assert_eq!(tref.exact(), Some(2));
    assert!(tref.notes().iter().any(|n| n.contains("verified on every")));
}

#[test]
fn general_examples() {
    let cfg = NumbersConfig::default();
    let unknot = characteristic_report(&d("O1+U1+"), &cfg).unwrap();
    assert_eq!(unknot.tr.exact(), Some(0));
    let trefoil = characteristic_report(&d("O1+U2+O3+U1+O2+U3+"), &cfg).unwrap();
    assert!(trefoil.tr.is_infinite());
}

#[test]
fn bound_examples() {
    let (cl, vir) = cl_vir_bounds(&d("P1+P2+P1+P2+"));
    assert_eq!(vir.upper(), Some(2));
    assert_eq!(cl.lower(), 2);
    let (cl, vir) = cl_vir_bounds(&d("P1+P2-P3+P1+P2-P3+"));
    assert_eq!((cl.lower(), vir.upper()), (0, None));
}

#[test]
fn trefoil_bound_reports() {
    let t = d("O1+U2+O3+U1+O2+U3+");
    let b = Budget::default();
    assert_eq!(unknotting_upper(&t, &b).unwrap().upper, 1);
    assert_eq!(virtual_unknotting_upper(&t, &b).unwrap().upper, 2);
    assert_eq!(genus_bound_check(&t).unwrap().check, Check::Verified);
    for c in 0..3 {
        let (big, del) = doubled_change(&t, c).unwrap();
        assert_eq!(
            big.delete_chords(1 << del[0] | 1 << del[1]).canonical_key(),
            t.switch_crossing(c).unwrap().canonical_key()
        );
    }
}
