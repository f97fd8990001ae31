#![allow(dead_code)]

use std::path::{Path, PathBuf};

use km_core::builder::{
    instantiate, km_certificate, lemma26, lemma27, replacement_derivation, BuildError, ProofBuilder,
};
use km_core::{AxiomId, Derivation, Formula, OccurrenceSet, Substitution};

pub fn f(s: &str) -> Formula {
    s.parse().unwrap()
}

pub fn p(i: u32) -> Formula {
    Formula::var(i)
}

pub fn subst(pairs: &[(u32, &str)]) -> Substitution {
    pairs.iter().map(|(k, v)| (*k, f(v))).collect()
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_km")
}

/// A corpus entry: file stem, one-line description, derivation.
pub struct Entry {
    pub name: &'static str,
    pub about: &'static str,
    pub derivation: Derivation,
}

fn entry(name: &'static str, about: &'static str, derivation: Derivation) -> Entry {
    Entry {
        name,
        about,
        derivation,
    }
}

fn proof(build: impl FnOnce(&mut ProofBuilder) -> Result<km_core::builder::Fact, BuildError>) -> Derivation {
    let mut pb = ProofBuilder::new();
    let c = build(&mut pb).unwrap();
    pb.finish(c).unwrap()
}

/// Steps proving `q ∨ (q → pk)` from premise `k` (which is `pk`).
fn d0_piece(d: &mut Derivation, k: usize, q: u32) -> usize {
    let pk = format!("p{k}");
    let a = d.push_premise(k, Substitution::new()).unwrap();
    let b = d.push_axiom(AxiomId::Ax1, subst(&[(0, &pk)]));
    let c = d.push_mp(a, b).unwrap();
    let e = d.push_axiom(AxiomId::Ax3, subst(&[(0, &pk), (1, &format!("p{q}"))]));
    d.push_mp(c, e).unwrap()
}

fn conj_steps(d: &mut Derivation, a: usize, b: usize) -> usize {
    let fa = d.steps[a].formula.clone();
    let fb = d.steps[b].formula.clone();
    let ax = d.push_axiom(AxiomId::Ax0_3, [(0, fa), (1, fb)].into_iter().collect());
    let m = d.push_mp(a, ax).unwrap();
    d.push_mp(b, m).unwrap()
}

/// p0 ⊢ p1 ∨ (p1 → p0).
pub fn d0() -> Derivation {
    let mut d = Derivation::new(vec![p(0)]);
    d0_piece(&mut d, 0, 1);
    d
}

/// ⊢ ((p1 ∨ (p1 → p0)) → p0) → p0.
pub fn ax2_ax3_theorem() -> Derivation {
    proof(|pb| {
        pb.assume(f("(p1 | (p1 -> p0)) -> p0"), |pb, h| {
            let ax3 = pb.axiom(AxiomId::Ax3, Substitution::new());
            let ax2 = pb.axiom(AxiomId::Ax2, Substitution::new());
            let bp = pb.compose(ax3, h)?;
            pb.mp(bp, ax2)
        })
    })
}

/// ⊢ p0 → p1 ∨ (p1 → p0).
pub fn d0_discharged() -> Derivation {
    proof(|pb| {
        let a1 = pb.axiom(AxiomId::Ax1, Substitution::new());
        let a3 = pb.axiom(AxiomId::Ax3, Substitution::new());
        pb.compose(a1, a3)
    })
}

/// p1 ⊢ p1 through □□p1 and an Ax3 instance over it.
pub fn exposing() -> Derivation {
    let mut d = Derivation::new(vec![p(1)]);
    let a = d.push_premise(0, Substitution::new()).unwrap();
    let b = d.push_axiom(AxiomId::Ax1, subst(&[(0, "p1")]));
    let c = d.push_mp(a, b).unwrap();
    let e = d.push_axiom(AxiomId::Ax1, subst(&[(0, "[]p1")]));
    let g = d.push_mp(c, e).unwrap();
    let h = d.push_axiom(AxiomId::Ax3, subst(&[(0, "[]p1"), (1, "p2")]));
    d.push_mp(g, h).unwrap();
    d.push_premise(0, Substitution::new()).unwrap();
    d
}

/// p0 → p1, p0 ⊢ p1 ∨ (p1 → p1) in mHC.
pub fn mhc_witness() -> Derivation {
    let mut d = Derivation::new(vec![f("p0 -> p1"), p(0)]);
    let a = d.push_premise(0, Substitution::new()).unwrap();
    let b = d.push_axiom(AxiomId::Ax1, subst(&[(0, "p0 -> p1")]));
    let c = d.push_mp(a, b).unwrap();
    let k = d.push_axiom(AxiomId::MHC_K, Substitution::new());
    let e = d.push_mp(c, k).unwrap();
    let g = d.push_premise(1, Substitution::new()).unwrap();
    let h = d.push_axiom(AxiomId::Ax1, Substitution::new());
    let i = d.push_mp(g, h).unwrap();
    let j = d.push_mp(i, e).unwrap();
    let l = d.push_axiom(AxiomId::Ax3, subst(&[(0, "p1"), (1, "p1")]));
    d.push_mp(j, l).unwrap();
    d
}

/// Premise-free KM theorems; together they use every KM axiom tag.
pub fn theorems() -> Vec<Entry> {
    let names = [
        "ax0_1a", "ax0_1b", "ax0_3", "ax0_4a", "ax0_4b", "ax0_5a", "ax0_5b", "ax0_6", "ax0_7", "ax0_8", "ax1", "ax2",
        "ax3",
    ];
    let mut out: Vec<Entry> = AxiomId::ALL
        .into_iter()
        .filter(|id| *id != AxiomId::MHC_K)
        .zip(names)
        .map(|(id, name)| {
            let mut d = Derivation::default();
            d.push_axiom(id, Substitution::new());
            entry(name, "base axiom", d)
        })
        .collect();
    out.push(entry("identity", "p0 -> p0", proof(|pb| pb.identity(&p(0)))));
    out.push(entry(
        "identity_box",
        "[]p0 -> []p0",
        proof(|pb| pb.identity(&f("[]p0"))),
    ));
    out.push(entry("ax2_ax3", "((p1 | (p1 -> p0)) -> p0) -> p0", ax2_ax3_theorem()));
    out.push(entry(
        "mhc_k",
        "KM certificate of the normality axiom",
        km_certificate(AxiomId::MHC_K).unwrap(),
    ));
    out.push(entry("lemma26", "lemma26 for p0, p1", lemma26(&p(0), &p(1))));
    out.push(entry(
        "lemma27",
        "lemma27 for p0 over p1, p2",
        lemma27(&[p(1), p(2)], &p(0)).unwrap(),
    ));
    out.push(entry(
        "box_box",
        "p0 -> [][]p0",
        proof(|pb| {
            let a = pb.axiom(AxiomId::Ax1, Substitution::new());
            let b = pb.axiom_with(AxiomId::Ax1, &[&f("[]p0")]);
            pb.compose(a, b)
        }),
    ));
    out.push(entry(
        "box_conj",
        "p0 & p1 -> []p0",
        proof(|pb| {
            let a = pb.axiom(AxiomId::Ax0_4a, Substitution::new());
            let b = pb.axiom(AxiomId::Ax1, Substitution::new());
            pb.compose(a, b)
        }),
    ));
    out.push(entry("d0_discharged", "p0 -> p1 | (p1 -> p0)", d0_discharged()));
    out.push(entry(
        "replacement",
        "replacement of p0 by p1 in []p2 & p0",
        replacement_derivation(&p(0), &p(1), &f("[]p2 & p0"), &OccurrenceSet::from_paths([vec![1]])).unwrap(),
    ));
    out.push(entry(
        "lob_neg",
        "([]~p0 -> ~p0) -> ~p0",
        proof(|pb| Ok(pb.axiom_with(AxiomId::Ax2, &[&f("~p0")]))),
    ));
    out
}

/// Refined KM derivations of rank 1 to 3 in which eliminating any maximal
/// box exposes no new one.
pub fn ranked() -> Vec<Entry> {
    let mut out = vec![
        entry("d0", "p0 |- p1 | (p1 -> p0)", d0()),
        entry("ax2_ax3", "((p1 | (p1 -> p0)) -> p0) -> p0", ax2_ax3_theorem()),
    ];
    let mut nested = Derivation::default();
    nested.push_axiom(AxiomId::Ax0_1a, subst(&[(0, "[][]p0"), (1, "p1")]));
    nested.push_axiom(AxiomId::Ax1, subst(&[(0, "p1")]));
    out.push(entry("nested", "rank 2 with a nested box", nested));
    let mut two = Derivation::default();
    two.push_axiom(AxiomId::Ax1, Substitution::new());
    two.push_axiom(AxiomId::Ax1, subst(&[(0, "p1")]));
    out.push(entry("two_boxes", "rank 2", two));
    let mut three = Derivation::default();
    for v in ["p0", "p1", "p2"] {
        three.push_axiom(AxiomId::Ax1, subst(&[(0, v)]));
    }
    out.push(entry("three_boxes", "rank 3", three));
    out.push(entry("d0_discharged", "p0 -> p1 | (p1 -> p0)", d0_discharged()));
    let mut pair = Derivation::new(vec![p(0), p(1)]);
    let a = d0_piece(&mut pair, 0, 1);
    let b = d0_piece(&mut pair, 1, 0);
    conj_steps(&mut pair, a, b);
    out.push(entry("pair", "p0, p1 |- (p1 | (p1 -> p0)) & (p0 | (p0 -> p1))", pair));
    let mut triple = Derivation::new(vec![p(0), p(1), p(2)]);
    let a = d0_piece(&mut triple, 0, 1);
    let b = d0_piece(&mut triple, 1, 2);
    let c = d0_piece(&mut triple, 2, 0);
    let ab = conj_steps(&mut triple, a, b);
    conj_steps(&mut triple, ab, c);
    out.push(entry("triple", "p0, p1, p2 |- rank 3 conjunction", triple));
    out.push(entry(
        "mhc_k",
        "KM certificate of the normality axiom",
        km_certificate(AxiomId::MHC_K).unwrap(),
    ));
    out.push(entry(
        "box_conj",
        "p0 & p1 -> []p0",
        proof(|pb| {
            let a = pb.axiom(AxiomId::Ax0_4a, Substitution::new());
            let b = pb.axiom(AxiomId::Ax1, Substitution::new());
            pb.compose(a, b)
        }),
    ));
    out.push(entry(
        "ax2_ax3_conj",
        "ax2_ax3 with p0 := p0 & p2",
        instantiate(&ax2_ax3_theorem(), &subst(&[(0, "p0 & p2")])).unwrap(),
    ));
    out
}

/// Files outside the theorem and rank sets.
pub fn misc() -> Vec<Entry> {
    let mut lem = Derivation::default();
    lem.push_axiom(AxiomId::Ax0_5a, subst(&[(1, "~p0")]));
    let last = lem.steps.len() - 1;
    lem.steps[last].formula = f("p0 | ~p0");
    vec![
        entry("claims_lem", "a bogus claim of p0 | ~p0", lem),
        entry("exposing", "p1 |- p1 with an exposed inner box", exposing()),
    ]
}

pub fn all_sets() -> Vec<(&'static str, Vec<Entry>)> {
    vec![("theorems", theorems()), ("ranked", ranked()), ("misc", misc())]
}

pub fn render(e: &Entry) -> String {
    km_tool::format::print_derivation(
        &e.derivation,
        &[
            "km-tool 0.1.0".to_string(),
            "mode: km".to_string(),
            format!("corpus: {}", e.about),
        ],
    )
}

/// Every corpus file with its set name and parsed derivation.
pub fn load_corpus() -> Vec<(String, PathBuf, Derivation)> {
    let mut out = Vec::new();
    for (set, _) in all_sets() {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir().join(set))
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "drv"))
            .collect();
        paths.sort();
        for path in paths {
            let text = std::fs::read_to_string(&path).unwrap();
            let d = km_tool::format::parse_derivation(&text).unwrap();
            out.push((set.to_string(), path, d));
        }
    }
    out
}
