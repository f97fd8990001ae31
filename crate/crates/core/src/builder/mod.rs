//! Constructive producers of derivations.
//!
//! Proofs are assembled with a [`ProofBuilder`], a Hilbert-style derivation
//! under hypotheses. [`ProofBuilder::assume`] discharges its hypothesis with
//! the deduction theorem as soon as the body returns, so the builder reads
//! like natural deduction while only ever emitting axiom instances and modus
//! ponens. Every step added by discharge is an instance of `Ax0_1a` or
//! `Ax0_1b`.

mod refine;
mod schemas;

use alloc::vec;
use alloc::vec::Vec;

use crate::calculus::{AxiomId, Derivation, Justification, Step};
use crate::formula::{Formula, OccurrenceError, Substitution};

pub use refine::{instantiate, pull_back_substitutions, purify};
pub(crate) use schemas::{conclude_conjunct_replacement, gamma_implies_delta};
pub use schemas::{km_certificate, lemma26, lemma27, replacement_derivation, stable_conjunction};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypJustification {
    Axiom { id: AxiomId, subst: Substitution },
    Hypothesis(usize),
    ModusPonens { minor: usize, major: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypStep {
    pub formula: Formula,
    pub justification: HypJustification,
}

/// A derivation from hypotheses, without the substitution rule. Hypothesis
/// steps reproduce their hypothesis verbatim.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HypotheticalDerivation {
    pub hypotheses: Vec<Formula>,
    pub steps: Vec<HypStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("step {0} is not justified")]
    InvalidStep(usize),
    #[error("derivation has no steps")]
    Empty,
    #[error("hypothesis {0} does not exist")]
    NoSuchHypothesis(usize),
    #[error("{0} hypotheses remain undischarged")]
    RemainingHypotheses(usize),
    #[error("modus ponens does not apply")]
    ModusPonens,
    #[error("expected {expected}, found {found}")]
    Shape { expected: &'static str, found: Formula },
    #[error("occurrence at {0:?} lies inside a box")]
    OccurrenceInBox(Vec<u8>),
    #[error("occurrences do not address the formula being replaced")]
    WrongTarget,
    #[error(transparent)]
    Occurrence(#[from] OccurrenceError),
    #[error("input derivation is invalid")]
    InvalidInput,
    #[error("input derivation has premises")]
    HasPremises,
}

impl HypotheticalDerivation {
    pub fn new(hypotheses: Vec<Formula>) -> Self {
        HypotheticalDerivation {
            hypotheses,
            steps: Vec::new(),
        }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    /// Checks every step.
    pub fn check(&self) -> Result<(), BuildError> {
        for (i, st) in self.steps.iter().enumerate() {
            let ok = match &st.justification {
                HypJustification::Axiom { id, subst } => id.instance(subst) == st.formula,
                HypJustification::Hypothesis(k) => self.hypotheses.get(*k) == Some(&st.formula),
                HypJustification::ModusPonens { minor, major } => {
                    *minor < i
                        && *major < i
                        && matches!(&self.steps[*major].formula,
                            Formula::Impl(l, r) if **l == self.steps[*minor].formula && **r == st.formula)
                }
            };
            if !ok {
                return Err(BuildError::InvalidStep(i));
            }
        }
        Ok(())
    }

    fn push(&mut self, formula: Formula, justification: HypJustification) -> usize {
        self.steps.push(HypStep { formula, justification });
        self.steps.len() - 1
    }

    fn push_axiom(&mut self, id: AxiomId, subst: Substitution) -> usize {
        self.push(id.instance(&subst), HypJustification::Axiom { id, subst })
    }

    fn push_mp(&mut self, minor: usize, major: usize) -> Result<usize, BuildError> {
        match &self.steps[major].formula {
            Formula::Impl(l, r) if **l == self.steps[minor].formula => {
                let r = (**r).clone();
                Ok(self.push(r, HypJustification::ModusPonens { minor, major }))
            }
            _ => Err(BuildError::ModusPonens),
        }
    }
}

fn subst_of(images: &[&Formula]) -> Substitution {
    images
        .iter()
        .enumerate()
        .map(|(k, f)| (k as u32, (*f).clone()))
        .collect()
}

#[derive(Clone, Copy)]
enum Mapped {
    Plain(usize),
    Imp(usize),
}

/// Removes hypothesis `k` from `d`. Returns the new derivation and the index
/// of its step `H → φ`, where `H` is the hypothesis and `φ` the formula of
/// step `target`.
///
/// Steps that do not depend on the hypothesis are copied in place, so every
/// step before the first use of the hypothesis keeps its index.
fn discharge(
    d: &HypotheticalDerivation,
    k: usize,
    target: usize,
) -> Result<(HypotheticalDerivation, usize), BuildError> {
    let h = d.hypotheses.get(k).ok_or(BuildError::NoSuchHypothesis(k))?.clone();
    let mut hypotheses = d.hypotheses.clone();
    hypotheses.remove(k);
    let mut out = HypotheticalDerivation::new(hypotheses);
    let mut map: Vec<Mapped> = Vec::with_capacity(d.steps.len());
    let mut weakened: Vec<Option<usize>> = vec![None; d.steps.len()];
    let mut identity: Option<usize> = None;

    // `H → φ_u` for an already mapped step u
    fn imp_of(
        out: &mut HypotheticalDerivation,
        h: &Formula,
        map: &[Mapped],
        weakened: &mut [Option<usize>],
        u: usize,
    ) -> Result<usize, BuildError> {
        match map[u] {
            Mapped::Imp(x) => Ok(x),
            Mapped::Plain(x) => {
                if let Some(w) = weakened[u] {
                    return Ok(w);
                }
                let phi = out.steps[x].formula.clone();
                let ax = out.push_axiom(AxiomId::Ax0_1a, subst_of(&[&phi, h]));
                let w = out.push_mp(x, ax)?;
                weakened[u] = Some(w);
                Ok(w)
            }
        }
    }

    for (i, st) in d.steps.iter().enumerate() {
        let mapped = match &st.justification {
            HypJustification::Hypothesis(j) if *j == k => {
                let idx = match identity {
                    Some(idx) => idx,
                    None => {
                        let idx = identity_steps(&mut out, &h)?;
                        identity = Some(idx);
                        idx
                    }
                };
                Mapped::Imp(idx)
            }
            HypJustification::Hypothesis(j) => {
                let j = if *j > k { j - 1 } else { *j };
                Mapped::Plain(out.push(st.formula.clone(), HypJustification::Hypothesis(j)))
            }
            HypJustification::Axiom { .. } => Mapped::Plain(out.push(st.formula.clone(), st.justification.clone())),
            HypJustification::ModusPonens { minor, major } => {
                if *minor >= i || *major >= i {
                    return Err(BuildError::InvalidStep(i));
                }
                match (map[*minor], map[*major]) {
                    (Mapped::Plain(a), Mapped::Plain(b)) => Mapped::Plain(out.push_mp(a, b)?),
                    _ => {
                        let a = imp_of(&mut out, &h, &map, &mut weakened, *minor)?;
                        let b = imp_of(&mut out, &h, &map, &mut weakened, *major)?;
                        let phi_u = &d.steps[*minor].formula;
                        let ax = out.push_axiom(AxiomId::Ax0_1b, subst_of(&[&h, phi_u, &st.formula]));
                        let t = out.push_mp(a, ax)?;
                        Mapped::Imp(out.push_mp(b, t)?)
                    }
                }
            }
        };
        map.push(mapped);
    }
    if target >= map.len() {
        return Err(BuildError::InvalidStep(target));
    }
    let idx = imp_of(&mut out, &h, &map, &mut weakened, target)?;
    Ok((out, idx))
}

/// Emits the five-step proof of `a → a`; returns the index of its last step.
fn identity_steps(out: &mut HypotheticalDerivation, a: &Formula) -> Result<usize, BuildError> {
    let aa = Formula::imp(a.clone(), a.clone());
    let s1 = out.push_axiom(AxiomId::Ax0_1a, subst_of(&[a, a]));
    let s2 = out.push_axiom(AxiomId::Ax0_1a, subst_of(&[a, &aa]));
    let s3 = out.push_axiom(AxiomId::Ax0_1b, subst_of(&[a, &aa, a]));
    let s4 = out.push_mp(s1, s3)?;
    out.push_mp(s2, s4)
}

/// The deduction theorem: removes hypothesis `k` and concludes `H_k → C`,
/// where `C` is the conclusion of `d`.
pub fn deduction_theorem(d: &HypotheticalDerivation, k: usize) -> Result<HypotheticalDerivation, BuildError> {
    d.check()?;
    if d.steps.is_empty() {
        return Err(BuildError::Empty);
    }
    let (out, idx) = discharge(d, k, d.steps.len() - 1)?;
    debug_assert_eq!(idx, out.steps.len() - 1);
    Ok(out)
}

/// Turns a hypothesis-free derivation into a refined [`Derivation`].
pub fn ground(d: &HypotheticalDerivation) -> Result<Derivation, BuildError> {
    if !d.hypotheses.is_empty() {
        return Err(BuildError::RemainingHypotheses(d.hypotheses.len()));
    }
    let steps = d
        .steps
        .iter()
        .map(|st| {
            let justification = match &st.justification {
                HypJustification::Axiom { id, subst } => Justification::Axiom {
                    id: *id,
                    subst: subst.clone(),
                },
                HypJustification::ModusPonens { minor, major } => Justification::ModusPonens {
                    minor: *minor,
                    major: *major,
                },
                HypJustification::Hypothesis(_) => unreachable!("no hypotheses"),
            };
            Step {
                formula: st.formula.clone(),
                justification,
            }
        })
        .collect();
    Ok(Derivation {
        premises: Vec::new(),
        steps,
    })
}

/// Handle to a proved step of a [`ProofBuilder`]. Handles created inside the
/// body of [`ProofBuilder::assume`] are invalid once it returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fact(usize);

/// Natural-deduction style construction of Hilbert derivations.
#[derive(Clone, Debug, Default)]
pub struct ProofBuilder {
    d: HypotheticalDerivation,
}

impl ProofBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn formula(&self, f: Fact) -> &Formula {
        &self.d.steps[f.0].formula
    }

    pub fn axiom(&mut self, id: AxiomId, subst: Substitution) -> Fact {
        Fact(self.d.push_axiom(id, subst))
    }

    /// Axiom instance with `p0, p1, …` mapped to `images` in order.
    pub fn axiom_with(&mut self, id: AxiomId, images: &[&Formula]) -> Fact {
        self.axiom(id, subst_of(images))
    }

    pub fn mp(&mut self, minor: Fact, major: Fact) -> Result<Fact, BuildError> {
        self.d.push_mp(minor.0, major.0).map(Fact)
    }

    /// Proves `a → C` where `body` derives `C` from the hypothesis `a`.
    pub fn assume(
        &mut self,
        a: Formula,
        body: impl FnOnce(&mut Self, Fact) -> Result<Fact, BuildError>,
    ) -> Result<Fact, BuildError> {
        let k = self.d.hypotheses.len();
        self.d.hypotheses.push(a.clone());
        let h = Fact(self.d.push(a, HypJustification::Hypothesis(k)));
        let c = body(self, h)?;
        let (d, idx) = discharge(&self.d, k, c.0)?;
        self.d = d;
        Ok(Fact(idx))
    }

    /// `a → a`.
    pub fn identity(&mut self, a: &Formula) -> Result<Fact, BuildError> {
        identity_steps(&mut self.d, a).map(Fact)
    }

    fn split<'a>(&'a self, f: Fact, expected: &'static str) -> Result<(&'a Formula, &'a Formula), BuildError> {
        match self.formula(f) {
            Formula::Conj(l, r) | Formula::Disj(l, r) | Formula::Impl(l, r) => Ok((l, r)),
            other => Err(BuildError::Shape {
                expected,
                found: other.clone(),
            }),
        }
    }

    pub fn and_intro(&mut self, a: Fact, b: Fact) -> Result<Fact, BuildError> {
        let (fa, fb) = (self.formula(a).clone(), self.formula(b).clone());
        let ax = self.axiom_with(AxiomId::Ax0_3, &[&fa, &fb]);
        let t = self.mp(a, ax)?;
        self.mp(b, t)
    }

    pub fn and_left(&mut self, ab: Fact) -> Result<Fact, BuildError> {
        let (l, r) = self.conj_parts(ab)?;
        let ax = self.axiom_with(AxiomId::Ax0_4a, &[&l, &r]);
        self.mp(ab, ax)
    }

    pub fn and_right(&mut self, ab: Fact) -> Result<Fact, BuildError> {
        let (l, r) = self.conj_parts(ab)?;
        let ax = self.axiom_with(AxiomId::Ax0_4b, &[&l, &r]);
        self.mp(ab, ax)
    }

    fn conj_parts(&self, ab: Fact) -> Result<(Formula, Formula), BuildError> {
        match self.formula(ab) {
            Formula::Conj(l, r) => Ok(((**l).clone(), (**r).clone())),
            other => Err(BuildError::Shape {
                expected: "conjunction",
                found: other.clone(),
            }),
        }
    }

    /// `A ∨ rhs` from `A`.
    pub fn or_left(&mut self, a: Fact, rhs: &Formula) -> Result<Fact, BuildError> {
        let fa = self.formula(a).clone();
        let ax = self.axiom_with(AxiomId::Ax0_5a, &[&fa, rhs]);
        self.mp(a, ax)
    }

    /// `lhs ∨ B` from `B`.
    pub fn or_right(&mut self, lhs: &Formula, b: Fact) -> Result<Fact, BuildError> {
        let fb = self.formula(b).clone();
        let ax = self.axiom_with(AxiomId::Ax0_5b, &[lhs, &fb]);
        self.mp(b, ax)
    }

    /// `C` from `A ∨ B`, `A → C` and `B → C`.
    pub fn or_elim(&mut self, ab: Fact, ac: Fact, bc: Fact) -> Result<Fact, BuildError> {
        let (a, c) = self.split(ac, "implication").map(|(x, y)| (x.clone(), y.clone()))?;
        let (b, _) = self.split(bc, "implication").map(|(x, y)| (x.clone(), y.clone()))?;
        let ax = self.axiom_with(AxiomId::Ax0_6, &[&a, &b, &c]);
        let t = self.mp(ac, ax)?;
        let t = self.mp(bc, t)?;
        self.mp(ab, t)
    }

    /// `A → C` from `A → B` and `B → C`.
    pub fn compose(&mut self, ab: Fact, bc: Fact) -> Result<Fact, BuildError> {
        let a = self.split(ab, "implication")?.0.clone();
        self.assume(a, |b, x| {
            let y = b.mp(x, ab)?;
            b.mp(y, bc)
        })
    }

    /// Prunes steps outside the cone of `conclusion` and returns the
    /// derivation with `conclusion` as its last step.
    pub fn finish_hypothetical(self, conclusion: Fact) -> HypotheticalDerivation {
        let d = self.d;
        let mut needed = vec![false; d.steps.len()];
        needed[conclusion.0] = true;
        for i in (0..=conclusion.0).rev() {
            if needed[i] {
                if let HypJustification::ModusPonens { minor, major } = d.steps[i].justification {
                    needed[minor] = true;
                    needed[major] = true;
                }
            }
        }
        let mut renum = vec![usize::MAX; d.steps.len()];
        let mut out = HypotheticalDerivation::new(d.hypotheses);
        for (i, st) in d.steps.into_iter().enumerate().take(conclusion.0 + 1) {
            if !needed[i] {
                continue;
            }
            let justification = match st.justification {
                HypJustification::ModusPonens { minor, major } => HypJustification::ModusPonens {
                    minor: renum[minor],
                    major: renum[major],
                },
                other => other,
            };
            renum[i] = out.push(st.formula, justification);
        }
        out
    }

    /// Grounds the proof of `conclusion`. Fails if hypotheses remain open.
    pub fn finish(self, conclusion: Fact) -> Result<Derivation, BuildError> {
        ground(&self.finish_hypothetical(conclusion))
    }
}

#[cfg(test)]
mod tests;
