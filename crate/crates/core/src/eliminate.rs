//! Elimination of maximal `□`-subformulas from refined KM derivations, the
//! iterated extraction of Int derivations, and the sublogic equipollence
//! harness.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::builder::{
    conclude_conjunct_replacement, gamma_implies_delta, instantiate, km_certificate, lemma27, pull_back_substitutions,
    purify, BuildError, ProofBuilder,
};
use crate::calculus::{verify, AxiomId, CalculusMode, Derivation, Failure, Justification};
use crate::formula::{Formula, OccurrenceSet};

/// How an input step was carried over by [`eliminate_step`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `Ax0` or premise instance, retagged.
    I,
    /// `Ax1` instance other than `γ → □γ`.
    II,
    /// `γ → □γ`.
    IIGamma,
    /// `Ax2` instance other than `(□γ → γ) → γ`.
    III,
    /// `(□γ → γ) → γ`.
    IIIGamma,
    /// `Ax3` instance whose antecedent is not `□γ`.
    IV,
    /// `Ax3` instance with antecedent `□γ`.
    IVGamma,
    /// Modus ponens.
    V,
}

impl CaseTag {
    pub const ALL: [CaseTag; 8] = [
        CaseTag::I,
        CaseTag::II,
        CaseTag::IIGamma,
        CaseTag::III,
        CaseTag::IIIGamma,
        CaseTag::IV,
        CaseTag::IVGamma,
        CaseTag::V,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::I => "I",
            CaseTag::II => "II",
            CaseTag::IIGamma => "IIγ",
            CaseTag::III => "III",
            CaseTag::IIIGamma => "IIIγ",
            CaseTag::IV => "IV",
            CaseTag::IVGamma => "IVγ",
            CaseTag::V => "V",
        }
    }

    /// Accepts the names produced by [`CaseTag::name`], and `g` in place of `γ`.
    pub fn from_name(name: &str) -> Option<CaseTag> {
        CaseTag::ALL
            .into_iter()
            .find(|t| t.name() == name || t.name().replace('γ', "g") == name)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Record of one elimination step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTrace {
    pub chosen_box: Formula,
    pub ax3_instances: Vec<Formula>,
    pub delta: Formula,
    pub case_tags: Vec<CaseTag>,
    pub input_rank: usize,
    pub output_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EliminateError {
    #[error("derivation is not refined")]
    NotRefined,
    #[error("derivation is not valid in mode {mode}: {} failure(s)", failures.len())]
    Invalid { mode: &'static str, failures: Vec<Failure> },
    #[error("derivation has rank 0")]
    RankZero,
    #[error("{0} is not a box formula")]
    NotBox(Formula),
    #[error("{0} is not a maximal subformula of the derivation")]
    NotMaximal(Formula),
    #[error("{0} occurs in a premise")]
    InPremise(Formula),
    #[error("{0} is not an instance of [] g -> (b | (b -> g)) over the eliminated box")]
    MalformedAx3(Formula),
    #[error("step {0}: premise instance does not survive the replacement")]
    PremiseCapture(usize),
    #[error("premises and conclusion must be box-free")]
    NotAssertoric,
    #[error("elimination made no progress")]
    NoProgress,
    #[error(transparent)]
    Build(#[from] BuildError),
}

fn require_valid(d: &Derivation, mode: &CalculusMode) -> Result<(), EliminateError> {
    let r = verify(d, mode);
    if r.ok {
        Ok(())
    } else {
        Err(EliminateError::Invalid {
            mode: mode.name,
            failures: r.failures,
        })
    }
}

/// The step formulas of `d`, in order, that are `Ax3` instances with
/// antecedent exactly `box_gamma`.
pub fn collect_ax3(d: &Derivation, box_gamma: &Formula) -> Vec<Formula> {
    d.steps
        .iter()
        .filter(|st| match (&st.justification, &st.formula) {
            (Justification::Axiom { id: AxiomId::Ax3, .. }, Formula::Impl(l, _)) => **l == *box_gamma,
            _ => false,
        })
        .map(|st| st.formula.clone())
        .collect()
}

/// `βⱼ` of an instance `□γ → (βⱼ ∨ (βⱼ → γ))`.
fn ax3_beta<'a>(inst: &'a Formula, gamma: &Formula) -> Option<&'a Formula> {
    let Formula::Impl(ante, cons) = inst else { return None };
    if !matches!(&**ante, Formula::Box(g) if **g == *gamma) {
        return None;
    }
    let Formula::Disj(b, rest) = &**cons else { return None };
    match &**rest {
        Formula::Impl(b2, g) if **b2 == **b && **g == *gamma => Some(b),
        _ => None,
    }
}

/// The `βⱼ[□γ:𝟏]` of the collected instances.
fn starred_betas(ax3: &[Formula], gamma: &Formula) -> Result<Vec<Formula>, EliminateError> {
    let box_gamma = Formula::boxed(gamma.clone());
    ax3.iter()
        .map(|inst| {
            ax3_beta(inst, gamma)
                .map(|b| b.replace_all(&box_gamma, &Formula::one()))
                .ok_or_else(|| EliminateError::MalformedAx3(inst.clone()))
        })
        .collect()
}

/// `δ`: the right-nested conjunction of the consequents of `ax3` with `□γ`
/// replaced by `𝟏`, or `𝟏` when `ax3` is empty.
pub fn compute_delta(ax3: &[Formula], gamma: &Formula) -> Result<Formula, EliminateError> {
    let betas = starred_betas(ax3, gamma)?;
    let parts: Vec<Formula> = betas
        .into_iter()
        .map(|b| Formula::disj(b.clone(), Formula::imp(b, gamma.clone())))
        .collect();
    Ok(Formula::conj_all(&parts).unwrap_or_else(Formula::one))
}

/// `(𝟏 → γ) → γ`.
fn one_stable(gamma: &Formula) -> Result<Derivation, BuildError> {
    let mut pb = ProofBuilder::new();
    let c = pb.assume(Formula::imp(Formula::one(), gamma.clone()), |pb, h| {
        let id = pb.identity(&Formula::var(0))?;
        pb.mp(id, h)
    })?;
    pb.finish(c)
}

/// Removes the maximal `□`-subformula `box_gamma` from a refined KM
/// derivation, replacing it by `δ` throughout.
///
/// Every block added for the cases `IIγ`, `IIIγ` and `IVγ` uses `Ax0` only
/// and is pure. The output rank is reported in the trace but not enforced:
/// when `γ` contains a `□`-subformula that was not maximal in the input, that
/// subformula becomes maximal in the output and the rank can stay the same.
pub fn eliminate_step(d: &Derivation, box_gamma: &Formula) -> Result<(Derivation, EliminationTrace), EliminateError> {
    if !d.is_refined() {
        return Err(EliminateError::NotRefined);
    }
    require_valid(d, &CalculusMode::km())?;
    let Formula::Box(gamma) = box_gamma else {
        return Err(EliminateError::NotBox(box_gamma.clone()));
    };
    let gamma: &Formula = gamma;
    let m = d.maximal_subformulas();
    if m.is_empty() {
        return Err(EliminateError::RankZero);
    }
    if !m.contains(box_gamma) {
        return Err(EliminateError::NotMaximal(box_gamma.clone()));
    }
    if d.premises.iter().any(|p| p.contains(box_gamma)) {
        return Err(EliminateError::InPremise(box_gamma.clone()));
    }

    let ax3 = collect_ax3(d, box_gamma);
    let betas = starred_betas(&ax3, gamma)?;
    let delta = compute_delta(&ax3, gamma)?;
    let star = |f: &Formula| f.replace_all(box_gamma, &delta);

    let mut out = Derivation::new(d.premises.clone());
    let mut index = Vec::with_capacity(d.steps.len());
    let mut tags = Vec::with_capacity(d.steps.len());
    let mut blocks: BTreeMap<Formula, Derivation> = BTreeMap::new();
    let mut add_block = |out: &mut Derivation, make: &dyn Fn() -> Result<Derivation, BuildError>| {
        let target = make()?;
        let block = match blocks.get(target.conclusion().expect("nonempty")) {
            Some(b) => b.clone(),
            None => {
                let b = purify(&target)?;
                blocks.insert(b.conclusion().expect("nonempty").clone(), b.clone());
                b
            }
        };
        Ok::<usize, EliminateError>(out.append(&block))
    };

    for (i, st) in d.steps.iter().enumerate() {
        let target = star(&st.formula);
        let (tag, idx) = match &st.justification {
            Justification::Axiom { id, subst } => {
                let gamma_case = subst.image(0) == *gamma;
                let tag = match (id, gamma_case) {
                    (AxiomId::Ax1, true) => CaseTag::IIGamma,
                    (AxiomId::Ax2, true) => CaseTag::IIIGamma,
                    (AxiomId::Ax3, true) => CaseTag::IVGamma,
                    (AxiomId::Ax1, false) => CaseTag::II,
                    (AxiomId::Ax2, false) => CaseTag::III,
                    (AxiomId::Ax3, false) => CaseTag::IV,
                    _ => CaseTag::I,
                };
                let idx = match tag {
                    CaseTag::IIGamma => add_block(&mut out, &|| gamma_implies_delta(gamma, &betas))?,
                    CaseTag::IIIGamma if betas.is_empty() => add_block(&mut out, &|| one_stable(gamma))?,
                    CaseTag::IIIGamma => add_block(&mut out, &|| lemma27(&betas, gamma))?,
                    CaseTag::IVGamma => {
                        let j = ax3.iter().position(|f| *f == st.formula).expect("collected");
                        let beta = ax3_beta(&ax3[j], gamma).expect("checked");
                        let occ: OccurrenceSet = beta.occurrences(box_gamma);
                        add_block(&mut out, &|| conclude_conjunct_replacement(gamma, &betas, j, &occ))?
                    }
                    _ => out.push_axiom(*id, subst.map_images(&star)),
                };
                (tag, idx)
            }
            Justification::Premise { index: k, subst } => {
                let idx = out
                    .push_premise(*k, subst.map_images(&star))
                    .map_err(|_| EliminateError::PremiseCapture(i))?;
                if out.steps[idx].formula != target {
                    return Err(EliminateError::PremiseCapture(i));
                }
                (CaseTag::I, idx)
            }
            Justification::ModusPonens { minor, major } => {
                let idx = out
                    .push_mp(index[*minor], index[*major])
                    .expect("replacement commutes with implication");
                (CaseTag::V, idx)
            }
            Justification::Subst { .. } => unreachable!("refined"),
        };
        debug_assert_eq!(out.steps[idx].formula, target, "step {i} ({tag})");
        if out.steps[idx].formula != target {
            return Err(EliminateError::MalformedAx3(st.formula.clone()));
        }
        index.push(idx);
        tags.push(tag);
    }
    let last = *index.last().expect("valid derivations are nonempty");
    if last + 1 != out.steps.len() {
        let again = out.steps[last].clone();
        out.steps.push(again);
    }
    debug_assert!(verify(&out, &CalculusMode::km()).ok);

    let trace = EliminationTrace {
        chosen_box: box_gamma.clone(),
        ax3_instances: ax3,
        delta,
        case_tags: tags,
        input_rank: m.len(),
        output_rank: out.maximal_subformulas().len(),
    };
    Ok((out, trace))
}

/// The maximal `□`-subformula of `d` whose first outermost occurrence, in
/// step order and then left to right, comes first. Boxes occurring in a
/// premise are skipped.
pub fn canonical_box(d: &Derivation) -> Option<Formula> {
    let m = d.maximal_subformulas();
    d.formulas()
        .flat_map(Formula::outermost_boxes)
        .find(|b| m.contains(*b) && !d.premises.iter().any(|p| p.contains(b)))
        .cloned()
}

/// Sizes of the maximal `□`-subformulas, largest first.
fn measure(d: &Derivation) -> Vec<usize> {
    let mut sizes: Vec<usize> = d.maximal_subformulas().iter().map(Formula::size).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Multiset-order comparison of two size lists sorted in decreasing order.
fn multiset_less(a: &[usize], b: &[usize]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    // Cancel common elements; a < b iff every remaining element of `a` is
    // dominated by some remaining element of `b`, and `b` keeps something.
    let mut common = Vec::new();
    for x in a.clone() {
        if let Some(k) = b.iter().position(|y| *y == x) {
            b.remove(k);
            common.push(x);
        }
    }
    for x in common {
        let k = a.iter().position(|y| *y == x).expect("present");
        a.remove(k);
    }
    !b.is_empty() && a.iter().all(|x| b.iter().any(|y| y > x))
}

/// [`extract_assertoric`], also returning the trace of every elimination.
pub fn extract_assertoric_traced(d: &Derivation) -> Result<(Derivation, Vec<EliminationTrace>), EliminateError> {
    require_valid(d, &CalculusMode::km())?;
    let assertoric = d.premises.iter().chain(d.conclusion()).all(Formula::is_assertoric);
    if !assertoric {
        return Err(EliminateError::NotAssertoric);
    }
    let mut cur = pull_back_substitutions(d)?;
    let mut traces = Vec::new();
    while let Some(b) = canonical_box(&cur) {
        let (next, trace) = eliminate_step(&cur, &b)?;
        if !multiset_less(&measure(&next), &measure(&cur)) {
            return Err(EliminateError::NoProgress);
        }
        cur = next;
        traces.push(trace);
    }
    debug_assert_eq!(cur.conclusion(), d.conclusion());
    require_valid(&cur, &CalculusMode::int())?;
    Ok((cur, traces))
}

/// A `□`-free derivation in Int of the same conclusion from the same
/// premises as the KM derivation `d`, whose premises and conclusion must be
/// `□`-free.
///
/// Terminates because each step removes one maximal `□`-subformula and can
/// only add strictly smaller ones.
pub fn extract_assertoric(d: &Derivation) -> Result<Derivation, EliminateError> {
    extract_assertoric_traced(d).map(|(out, _)| out)
}

/// The deducibility relation a witness derivation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Int,
    Sublogic,
    Km,
}

/// Witnesses of `Γ ⊢ A` in Int, the sublogic and KM, each verified in its
/// own mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquipollenceReport {
    pub int: Derivation,
    pub sublogic: Derivation,
    pub km: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EquipollenceError {
    #[error("premises and conclusion must be box-free")]
    NotAssertoric,
    #[error("witness premises or conclusion differ from the given ones")]
    WrongStatement,
    #[error("{0} has no KM certificate")]
    Uncertified(AxiomId),
    #[error("{relation:?} witness is not valid in mode {mode}")]
    Invalid { relation: Relation, mode: &'static str },
    #[error(transparent)]
    Eliminate(#[from] EliminateError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Replaces every axiom step outside KM by an instance of its KM
/// certificate.
pub fn splice_certificates(d: &Derivation) -> Result<Derivation, EquipollenceError> {
    let km = CalculusMode::km();
    let mut out = Derivation::new(d.premises.clone());
    let mut index = Vec::with_capacity(d.steps.len());
    for st in &d.steps {
        let idx = match &st.justification {
            Justification::Axiom { id, subst } if !km.axioms.contains(id) => {
                let cert = km_certificate(*id).ok_or(EquipollenceError::Uncertified(*id))?;
                out.append(&instantiate(&cert, subst)?)
            }
            Justification::Axiom { id, subst } => out.push_axiom(*id, subst.clone()),
            Justification::Premise { index: k, subst } => out
                .push_premise(*k, subst.clone())
                .map_err(|_| BuildError::InvalidInput)?,
            Justification::ModusPonens { minor, major } => out
                .push_mp(index[*minor], index[*major])
                .map_err(|_| BuildError::InvalidInput)?,
            Justification::Subst { source, subst } => out
                .push_subst(index[*source], subst.clone())
                .map_err(|_| BuildError::InvalidInput)?,
        };
        index.push(idx);
    }
    if let Some(&last) = index.last() {
        if last + 1 != out.steps.len() {
            let again = out.steps[last].clone();
            out.steps.push(again);
        }
    }
    Ok(out)
}

/// Given a witness of `Γ ⊢ A` in one of Int, the sublogic `mode`, or KM,
/// produces verified witnesses in all three.
pub fn check_sublogic_equipollence(
    mode: &CalculusMode,
    gamma: &[Formula],
    a: &Formula,
    witness: &Derivation,
    relation: Relation,
) -> Result<EquipollenceReport, EquipollenceError> {
    if !gamma.iter().chain([a]).all(Formula::is_assertoric) {
        return Err(EquipollenceError::NotAssertoric);
    }
    if witness.premises != gamma || witness.conclusion() != Some(a) {
        return Err(EquipollenceError::WrongStatement);
    }
    if let Some(id) = mode.non_km_axioms().find(|id| km_certificate(*id).is_none()) {
        return Err(EquipollenceError::Uncertified(id));
    }
    let km = CalculusMode::km();
    let int = CalculusMode::int();
    let check = |d: &Derivation, m: &CalculusMode, relation| {
        if verify(d, m).ok {
            Ok(())
        } else {
            Err(EquipollenceError::Invalid { relation, mode: m.name })
        }
    };
    let own_mode = match relation {
        Relation::Int => &int,
        Relation::Sublogic => mode,
        Relation::Km => &km,
    };
    check(witness, own_mode, relation)?;
    let report = match relation {
        Relation::Int => EquipollenceReport {
            int: witness.clone(),
            sublogic: witness.clone(),
            km: witness.clone(),
        },
        Relation::Sublogic => {
            let km_w = splice_certificates(witness)?;
            let int_w = extract_assertoric(&km_w)?;
            EquipollenceReport {
                int: int_w,
                sublogic: witness.clone(),
                km: km_w,
            }
        }
        Relation::Km => {
            let int_w = extract_assertoric(witness)?;
            EquipollenceReport {
                int: int_w.clone(),
                sublogic: int_w,
                km: witness.clone(),
            }
        }
    };
    check(&report.int, &int, Relation::Int)?;
    check(&report.sublogic, mode, Relation::Sublogic)?;
    check(&report.km, &km, Relation::Km)?;
    Ok(report)
}
