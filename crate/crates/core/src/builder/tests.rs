use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::calculus::{verify, AxiomId, CalculusMode, Derivation};
use crate::formula::{Formula, OccurrenceSet, Substitution};

fn f(s: &str) -> Formula {
    s.parse().unwrap()
}

fn p(i: u32) -> Formula {
    Formula::var(i)
}

fn assert_proves(d: &Derivation, mode: &CalculusMode, concl: &Formula) {
    let r = verify(d, mode);
    assert!(r.ok, "{:?}", r.failures);
    assert_eq!(d.conclusion(), Some(concl));
}

#[test]
fn identity_takes_five_steps() {
    let mut h = HypotheticalDerivation::new(vec![p(0)]);
    h.push(p(0), HypJustification::Hypothesis(0));
    let dt = deduction_theorem(&h, 0).unwrap();
    assert!(dt.hypotheses.is_empty());
    assert_eq!(dt.steps.len(), 5);
    let d = ground(&dt).unwrap();
    assert_proves(&d, &CalculusMode::int(), &f("p0 -> p0"));
}

#[test]
fn vacuous_discharge_weakens() {
    let mut h = HypotheticalDerivation::new(vec![p(1)]);
    h.push_axiom(AxiomId::Ax0_3, Substitution::new());
    let dt = deduction_theorem(&h, 0).unwrap();
    let d = ground(&dt).unwrap();
    assert_proves(&d, &CalculusMode::int(), &Formula::imp(p(1), AxiomId::Ax0_3.base()));
}

#[test]
fn discharge_one_of_two_hypotheses() {
    // A, B ⊢ A ∧ B, discharging B
    let mut h = HypotheticalDerivation::new(vec![p(0), p(1)]);
    let a = h.push(p(0), HypJustification::Hypothesis(0));
    let b = h.push(p(1), HypJustification::Hypothesis(1));
    let ax = h.push_axiom(AxiomId::Ax0_3, Substitution::new());
    let m = h.push_mp(a, ax).unwrap();
    h.push_mp(b, m).unwrap();
    let dt = deduction_theorem(&h, 1).unwrap();
    assert_eq!(dt.hypotheses, vec![p(0)]);
    assert_eq!(dt.conclusion(), Some(&f("p1 -> p0 & p1")));
    assert!(matches!(ground(&dt), Err(BuildError::RemainingHypotheses(1))));
    let d = ground(&deduction_theorem(&dt, 0).unwrap()).unwrap();
    assert_proves(&d, &CalculusMode::int(), &f("p0 -> p1 -> p0 & p1"));
}

#[test]
fn deduction_theorem_rejects_bad_input() {
    let h = HypotheticalDerivation::new(vec![p(0)]);
    assert!(matches!(deduction_theorem(&h, 0), Err(BuildError::Empty)));
    let mut h = HypotheticalDerivation::new(vec![p(0)]);
    h.push(p(0), HypJustification::Hypothesis(0));
    assert!(deduction_theorem(&h, 3).is_err());
    let mut h = HypotheticalDerivation::new(vec![p(0)]);
    h.push(p(1), HypJustification::Hypothesis(0));
    assert!(deduction_theorem(&h, 0).is_err());
}

#[test]
fn builder_tactics() {
    let mut pb = ProofBuilder::new();
    // (p0 ∧ p1) → (p1 ∨ p2)
    let c = pb
        .assume(f("p0 & p1"), |pb, h| {
            let b = pb.and_right(h)?;
            pb.or_left(b, &p(2))
        })
        .unwrap();
    let d = pb.finish(c).unwrap();
    assert_proves(&d, &CalculusMode::int(), &f("p0 & p1 -> p1 | p2"));

    let mut pb = ProofBuilder::new();
    // (p0 ∨ p1) → (p1 ∨ p0)
    let c = pb
        .assume(f("p0 | p1"), |pb, h| {
            let ac = pb.assume(p(0), |pb, x| pb.or_right(&p(1), x))?;
            let bc = pb.assume(p(1), |pb, y| pb.or_left(y, &p(0)))?;
            pb.or_elim(h, ac, bc)
        })
        .unwrap();
    let d = pb.finish(c).unwrap();
    assert_proves(&d, &CalculusMode::int(), &f("p0 | p1 -> p1 | p0"));

    let mut pb = ProofBuilder::new();
    let c = pb
        .assume(f("p0 -> p1"), |pb, ab| {
            pb.assume(f("p1 -> p2"), |pb, bc| pb.compose(ab, bc))
        })
        .unwrap();
    let d = pb.finish(c).unwrap();
    assert_proves(&d, &CalculusMode::int(), &f("(p0 -> p1) -> (p1 -> p2) -> p0 -> p2"));
}

#[test]
fn builder_shape_errors() {
    let mut pb = ProofBuilder::new();
    let id = pb.identity(&p(0)).unwrap();
    assert!(matches!(pb.and_left(id), Err(BuildError::Shape { .. })));
    let ax = pb.axiom(AxiomId::Ax0_3, Substitution::new());
    assert!(matches!(pb.mp(ax, id), Err(BuildError::ModusPonens)));
}

#[test]
fn finish_prunes_unused_steps() {
    let mut pb = ProofBuilder::new();
    pb.axiom(AxiomId::Ax0_8, Substitution::new());
    let id = pb.identity(&p(3)).unwrap();
    let d = pb.finish(id).unwrap();
    assert_eq!(d.len(), 5);
}

#[test]
fn lemma26_instances_verify() {
    for (a, b) in [(p(0), p(1)), (f("[]p0"), p(0)), (f("p0 & ~p1"), f("[]p2 -> p0"))] {
        let d = lemma26(&a, &b);
        let concl = Formula::iff(
            Formula::imp(Formula::disj(a.clone(), Formula::imp(a.clone(), b.clone())), b.clone()),
            b.clone(),
        );
        let mode = if a.is_assertoric() && b.is_assertoric() {
            CalculusMode::int()
        } else {
            CalculusMode::int_box()
        };
        assert_proves(&d, &mode, &concl);
        assert_eq!(d.is_pure(), Ok(true));
    }
}

#[test]
fn lemma27_instances_verify() {
    let b = p(9);
    for n in 1..=4u32 {
        let as_: Vec<Formula> = (0..n).map(p).collect();
        let d = lemma27(&as_, &b).unwrap();
        let sc = stable_conjunction(&as_, &b).unwrap();
        assert_proves(
            &d,
            &CalculusMode::int(),
            &Formula::imp(Formula::imp(sc, b.clone()), b.clone()),
        );
    }
    assert!(lemma27(&[], &b).is_err());
    assert_eq!(
        stable_conjunction(&[p(0), p(1)], &p(2)),
        Some(f("(p0 | (p0 -> p2)) & (p1 | (p1 -> p2))"))
    );
}

#[test]
fn replacement_examples() {
    let a = p(0);
    let b = f("p1 & p2");
    let c = f("~p0 -> p0 | p3");
    let occ = c.occurrences(&a);
    assert_eq!(occ.len(), 2);
    let d = replacement_derivation(&a, &b, &c, &occ).unwrap();
    let c2 = f("~(p1 & p2) -> (p1 & p2) | p3");
    assert_proves(
        &d,
        &CalculusMode::int(),
        &Formula::imp(Formula::iff(a.clone(), b.clone()), Formula::iff(c.clone(), c2)),
    );

    // one of two occurrences
    let only = OccurrenceSet::from_paths([vec![1, 0]]);
    let d = replacement_derivation(&a, &b, &c, &only).unwrap();
    let c3 = f("~p0 -> (p1 & p2) | p3");
    assert_proves(
        &d,
        &CalculusMode::int(),
        &Formula::imp(Formula::iff(a.clone(), b.clone()), Formula::iff(c.clone(), c3)),
    );

    // no occurrences: identity pair
    let d = replacement_derivation(&a, &b, &c, &OccurrenceSet::new()).unwrap();
    assert_proves(
        &d,
        &CalculusMode::int(),
        &Formula::imp(Formula::iff(a, b), Formula::iff(c.clone(), c)),
    );
}

#[test]
fn replacement_inside_box_is_rejected() {
    let c = f("[]p0 -> p1");
    let occ = OccurrenceSet::from_paths([vec![0, 0]]);
    assert!(matches!(
        replacement_derivation(&p(0), &p(2), &c, &occ),
        Err(BuildError::OccurrenceInBox(_))
    ));
    // replacing the box itself is fine
    let occ = OccurrenceSet::from_paths([vec![0]]);
    let d = replacement_derivation(&f("[]p0"), &p(2), &c, &occ).unwrap();
    assert!(verify(&d, &CalculusMode::int_box()).ok);
}

#[test]
fn replacement_rejects_wrong_target() {
    let c = f("p0 -> p1");
    let occ = OccurrenceSet::from_paths([vec![1]]);
    assert!(replacement_derivation(&p(0), &p(2), &c, &occ).is_err());
}

#[test]
fn km_certificates_verify() {
    for id in AxiomId::ALL {
        let d = km_certificate(id).unwrap();
        assert_proves(&d, &CalculusMode::km(), &id.base());
    }
    assert!(km_certificate(AxiomId::MHC_K).unwrap().len() > 1);
}

#[test]
fn pull_back_composes_into_axiom() {
    let mut d = Derivation::default();
    d.push_axiom(AxiomId::Ax0_1a, Substitution::new());
    d.push_subst(0, Substitution::single(0, p(2))).unwrap();
    let r = pull_back_substitutions(&d).unwrap();
    assert_eq!(r.len(), 1);
    match &r.steps[0].justification {
        Justification::Axiom { id, subst } => {
            assert_eq!(*id, AxiomId::Ax0_1a);
            assert_eq!(*subst, Substitution::single(0, p(2)));
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(r.conclusion(), d.conclusion());
}

#[test]
fn pull_back_through_modus_ponens() {
    // p0 → p0 then substituted p0 := []p1
    let mut pb = ProofBuilder::new();
    let id = pb.identity(&p(0)).unwrap();
    let mut d = pb.finish(id).unwrap();
    d.push_subst(d.len() - 1, Substitution::single(0, f("[]p1"))).unwrap();
    d.push_subst(d.len() - 1, Substitution::single(1, f("p2 & p3")))
        .unwrap();
    let r = pull_back_substitutions(&d).unwrap();
    assert!(r.is_refined());
    assert_proves(&r, &CalculusMode::int_box(), &f("[](p2 & p3) -> [](p2 & p3)"));
    assert_eq!(r.len(), 5);
}

#[test]
fn pull_back_premises() {
    let mut d = Derivation::new(vec![f("p0 -> []p0")]);
    d.push_premise(0, Substitution::new()).unwrap();
    d.push_subst(0, Substitution::single(0, p(5))).unwrap();
    let r = pull_back_substitutions(&d).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r.conclusion(), Some(&f("p5 -> []p5")));
    assert!(r.is_refined());
}

#[test]
fn pull_back_refined_is_identity() {
    let d = crate::calculus::d0();
    assert_eq!(pull_back_substitutions(&d).unwrap(), d);
}

#[test]
fn pull_back_rejects_invalid() {
    let mut d = Derivation::default();
    d.push_axiom(AxiomId::Ax0_3, Substitution::new());
    d.steps[0].formula = p(0);
    assert!(matches!(pull_back_substitutions(&d), Err(BuildError::InvalidInput)));
}

#[test]
fn instantiate_refined() {
    let mut pb = ProofBuilder::new();
    let id = pb.identity(&p(0)).unwrap();
    let d = pb.finish(id).unwrap();
    let s = Substitution::single(0, f("~p4"));
    let r = instantiate(&d, &s).unwrap();
    assert_proves(&r, &CalculusMode::int(), &f("~p4 -> ~p4"));
}

#[test]
fn purify_abstracts_foreign_boxes() {
    // A proof of p0 -> p0 detouring through []p1 -> []p1.
    let mut pb = ProofBuilder::new();
    let bb = pb.identity(&f("[]p1")).unwrap();
    let aa = pb.identity(&p(0)).unwrap();
    let both = pb.and_intro(bb, aa).unwrap();
    let c = pb.and_right(both).unwrap();
    let d = pb.finish(c).unwrap();
    assert_eq!(d.is_pure(), Ok(false));
    let r = purify(&d).unwrap();
    assert_eq!(r.is_pure(), Ok(true));
    assert_proves(&r, &CalculusMode::int(), &f("p0 -> p0"));
}

#[test]
fn purify_keeps_conclusion_boxes() {
    let mut pb = ProofBuilder::new();
    let id = pb.identity(&f("[]p0")).unwrap();
    let d = pb.finish(id).unwrap();
    let r = purify(&d).unwrap();
    assert_eq!(r.is_pure(), Ok(true));
    assert_proves(&r, &CalculusMode::int_box(), &f("[]p0 -> []p0"));
}

#[test]
fn purify_rejects() {
    let d = crate::calculus::d0();
    assert!(matches!(purify(&d), Err(BuildError::HasPremises)));
    let mut d = Derivation::default();
    d.push_axiom(AxiomId::Ax1, Substitution::new());
    assert!(matches!(purify(&d), Err(BuildError::InvalidInput)));
}

fn small_formula() -> impl Strategy<Value = Formula> {
    let leaf = (0u32..3).prop_map(Formula::var);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::conj(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::disj(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.clone().prop_map(Formula::neg),
            inner.prop_map(Formula::boxed),
        ]
    })
}

proptest! {
    #[test]
    fn deduction_theorem_length_is_linear(a in small_formula(), b in small_formula(), n in 0usize..6) {
        // hypothesis a, then n axiom steps, then a (re-stated via mp chain)
        let mut h = HypotheticalDerivation::new(vec![a.clone()]);
        let x = h.push(a.clone(), HypJustification::Hypothesis(0));
        for _ in 0..n {
            h.push_axiom(AxiomId::Ax0_1a, Substitution::single(0, b.clone()));
        }
        let w = h.push_axiom(AxiomId::Ax0_1a, subst_of(&[&a, &b]));
        h.push_mp(x, w).unwrap();
        let len = h.steps.len();
        let dt = deduction_theorem(&h, 0).unwrap();
        prop_assert!(dt.steps.len() <= 3 * len + 5);
        let d = ground(&dt).unwrap();
        let r = verify(&d, &CalculusMode::int_box());
        prop_assert!(r.ok);
        prop_assert_eq!(d.conclusion(), Some(&Formula::imp(a.clone(), Formula::imp(b, a))));
    }

    #[test]
    fn replacement_verifies(c in small_formula(), b in small_formula()) {
        let a = Formula::var(0);
        let occ = OccurrenceSet::from_paths(
            c.occurrences(&a).positions.into_iter().filter(|path| !inside_box(&c, path)),
        );
        let d = replacement_derivation(&a, &b, &c, &occ).unwrap();
        let r = verify(&d, &CalculusMode::int_box());
        prop_assert!(r.ok, "{:?}", r.failures);
        prop_assert_eq!(
            d.conclusion().cloned(),
            Some(Formula::imp(Formula::iff(a, b.clone()), Formula::iff(c.clone(), c.replace_at(&occ, &b).unwrap())))
        );
    }

    #[test]
    fn pull_back_preserves_conclusion(a in small_formula(), s1 in small_formula(), s2 in small_formula()) {
        let mut pb = ProofBuilder::new();
        let id = pb.identity(&a).unwrap();
        let mut d = pb.finish(id).unwrap();
        d.push_subst(d.len() - 1, Substitution::single(0, s1)).unwrap();
        d.push_subst(d.len() - 1, Substitution::single(1, s2)).unwrap();
        let r = pull_back_substitutions(&d).unwrap();
        prop_assert!(r.is_refined());
        prop_assert!(verify(&r, &CalculusMode::int_box()).ok);
        prop_assert_eq!(r.conclusion(), d.conclusion());
    }
}

fn inside_box(host: &Formula, path: &[u8]) -> bool {
    (0..path.len()).any(|k| host.at(&path[..k]).is_some_and(Formula::is_box))
}
