//! Refinement (pulling substitutions back to axioms and premises) and
//! purification of Int□ derivations.

use alloc::collections::{BTreeMap, BTreeSet};

use super::BuildError;
use crate::calculus::{verify, AxiomId, CalculusMode, Derivation, Justification, Restriction, Step};
use crate::formula::{Formula, Substitution};

fn permissive_mode() -> CalculusMode {
    CalculusMode {
        name: "any",
        axioms: AxiomId::ALL.into_iter().collect(),
        substitution: Restriction::Unrestricted,
        language: Restriction::Unrestricted,
    }
}

struct PullBack<'a> {
    input: &'a Derivation,
    out: Derivation,
    memo: BTreeMap<Formula, usize>,
}

impl PullBack<'_> {
    /// Emits a refined proof of `s(φ_i)`; returns its index in the output.
    fn emit(&mut self, i: usize, s: &Substitution) -> usize {
        let step = &self.input.steps[i];
        let target = step.formula.substitute(s);
        if let Some(&idx) = self.memo.get(&target) {
            return idx;
        }
        let idx = match &step.justification {
            Justification::Axiom { id, subst } => {
                let vars = id.base().variables();
                self.out.push_axiom(*id, subst.then(s).restricted(&vars))
            }
            Justification::Premise { index, subst } => {
                let vars = self.input.premises[*index].variables();
                self.out
                    .push_premise(*index, subst.then(s).restricted(&vars))
                    .expect("premise exists in a valid input")
            }
            Justification::ModusPonens { minor, major } => {
                let a = self.emit(*minor, s);
                let b = self.emit(*major, s);
                self.out.push_mp(a, b).expect("substitution commutes with modus ponens")
            }
            Justification::Subst { source, subst } => self.emit(*source, &subst.then(s)),
        };
        debug_assert_eq!(self.out.steps[idx].formula, target);
        self.memo.insert(target, idx);
        idx
    }
}

/// Makes a derivation refined: every substitution step is composed into the
/// axiom and premise instances it rests on, and modus ponens is replayed on
/// the substituted formulas. Already refined input is returned unchanged.
///
/// Only the steps needed for the conclusion are kept; a formula proved once
/// is reused rather than proved again.
pub fn pull_back_substitutions(d: &Derivation) -> Result<Derivation, BuildError> {
    if !verify(d, &permissive_mode()).ok {
        return Err(BuildError::InvalidInput);
    }
    if d.is_refined() {
        return Ok(d.clone());
    }
    let mut pb = PullBack {
        input: d,
        out: Derivation::new(d.premises.clone()),
        memo: BTreeMap::new(),
    };
    let last = pb.emit(d.steps.len() - 1, &Substitution::new());
    let mut out = pb.out;
    if last + 1 != out.steps.len() {
        let again = out.steps[last].clone();
        out.steps.push(again);
    }
    Ok(out)
}

/// Applies `s` to every step of a refined derivation by composing it into
/// every axiom and premise instance.
pub fn instantiate(d: &Derivation, s: &Substitution) -> Result<Derivation, BuildError> {
    if !d.is_refined() {
        return Err(BuildError::InvalidInput);
    }
    let steps = d
        .steps
        .iter()
        .map(|st| {
            let justification = match &st.justification {
                Justification::Axiom { id, subst } => Justification::Axiom {
                    id: *id,
                    subst: subst.then(s).restricted(&id.base().variables()),
                },
                Justification::Premise { index, subst } => Justification::Premise {
                    index: *index,
                    subst: subst.then(s).restricted(&d.premises[*index].variables()),
                },
                other => other.clone(),
            };
            Step {
                formula: st.formula.substitute(s),
                justification,
            }
        })
        .collect();
    Ok(Derivation {
        premises: d.premises.clone(),
        steps,
    })
}

/// Rewrites every outermost `□`-subformula that is not kept into its fresh
/// variable.
fn abstract_boxes(f: &Formula, keep: &BTreeSet<Formula>, fresh: &BTreeMap<Formula, u32>) -> Formula {
    match f {
        Formula::Var(_) => f.clone(),
        Formula::Box(_) if keep.contains(f) => f.clone(),
        Formula::Box(_) => Formula::Var(fresh[f]),
        Formula::Conj(l, r) => Formula::conj(abstract_boxes(l, keep, fresh), abstract_boxes(r, keep, fresh)),
        Formula::Disj(l, r) => Formula::disj(abstract_boxes(l, keep, fresh), abstract_boxes(r, keep, fresh)),
        Formula::Impl(l, r) => Formula::imp(abstract_boxes(l, keep, fresh), abstract_boxes(r, keep, fresh)),
        Formula::Neg(x) => Formula::neg(abstract_boxes(x, keep, fresh)),
    }
}

/// Turns a premise-free Int□ derivation into a pure one with the same
/// conclusion `α`.
///
/// After refinement, every outermost `□`-subformula of a step that is not an
/// outermost `□`-subformula of `α` is replaced by a fresh variable. The
/// result is still an Int□ derivation (axiom templates are `□`-free), and
/// the only `□`-formulas left come from `α`, so `M(D) = M(⟨α⟩)`.
pub fn purify(d: &Derivation) -> Result<Derivation, BuildError> {
    if !d.premises.is_empty() {
        return Err(BuildError::HasPremises);
    }
    if !verify(d, &CalculusMode::int_box()).ok {
        return Err(BuildError::InvalidInput);
    }
    let refined = pull_back_substitutions(d)?;
    if refined.is_pure() == Ok(true) {
        return Ok(refined);
    }
    let alpha = refined.conclusion().expect("nonempty").clone();
    let keep: BTreeSet<Formula> = alpha.outermost_boxes().into_iter().cloned().collect();
    let mut next = refined
        .formulas()
        .filter_map(Formula::max_var)
        .max()
        .map_or(0, |m| m + 1);
    let mut fresh = BTreeMap::new();
    for f in refined.formulas() {
        for b in f.outermost_boxes() {
            if !keep.contains(b) && !fresh.contains_key(b) {
                fresh.insert(b.clone(), next);
                next += 1;
            }
        }
    }
    let mut out = Derivation::default();
    for st in &refined.steps {
        let idx = match &st.justification {
            Justification::Axiom { id, subst } => {
                out.push_axiom(*id, subst.map_images(|x| abstract_boxes(x, &keep, &fresh)))
            }
            Justification::ModusPonens { minor, major } => {
                out.push_mp(*minor, *major).map_err(|_| BuildError::InvalidInput)?
            }
            _ => return Err(BuildError::InvalidInput),
        };
        debug_assert_eq!(out.steps[idx].formula, abstract_boxes(&st.formula, &keep, &fresh));
    }
    debug_assert_eq!(out.conclusion(), Some(&alpha));
    Ok(out)
}
