//! Axioms, calculus modes, Hilbert-style derivations and their verification.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{maximal_subformulas, parse, Formula, Substitution};

/// Axiom tags. `Ax0_*` are the intuitionistic axioms (Kleene's schemata at
/// variables `p0, p1, p2`), `Ax1`–`Ax3` the KM axioms, and `MHC_K` the
/// normality axiom of mHC.
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    Ax0_1a,
    Ax0_1b,
    Ax0_3,
    Ax0_4a,
    Ax0_4b,
    Ax0_5a,
    Ax0_5b,
    Ax0_6,
    Ax0_7,
    Ax0_8,
    Ax1,
    Ax2,
    Ax3,
    MHC_K,
}

impl AxiomId {
    pub const AX0: [AxiomId; 10] = [
        AxiomId::Ax0_1a,
        AxiomId::Ax0_1b,
        AxiomId::Ax0_3,
        AxiomId::Ax0_4a,
        AxiomId::Ax0_4b,
        AxiomId::Ax0_5a,
        AxiomId::Ax0_5b,
        AxiomId::Ax0_6,
        AxiomId::Ax0_7,
        AxiomId::Ax0_8,
    ];

    pub const ALL: [AxiomId; 14] = [
        AxiomId::Ax0_1a,
        AxiomId::Ax0_1b,
        AxiomId::Ax0_3,
        AxiomId::Ax0_4a,
        AxiomId::Ax0_4b,
        AxiomId::Ax0_5a,
        AxiomId::Ax0_5b,
        AxiomId::Ax0_6,
        AxiomId::Ax0_7,
        AxiomId::Ax0_8,
        AxiomId::Ax1,
        AxiomId::Ax2,
        AxiomId::Ax3,
        AxiomId::MHC_K,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Ax0_1a => "Ax0_1a",
            AxiomId::Ax0_1b => "Ax0_1b",
            AxiomId::Ax0_3 => "Ax0_3",
            AxiomId::Ax0_4a => "Ax0_4a",
            AxiomId::Ax0_4b => "Ax0_4b",
            AxiomId::Ax0_5a => "Ax0_5a",
            AxiomId::Ax0_5b => "Ax0_5b",
            AxiomId::Ax0_6 => "Ax0_6",
            AxiomId::Ax0_7 => "Ax0_7",
            AxiomId::Ax0_8 => "Ax0_8",
            AxiomId::Ax1 => "Ax1",
            AxiomId::Ax2 => "Ax2",
            AxiomId::Ax3 => "Ax3",
            AxiomId::MHC_K => "MHC_K",
        }
    }

    pub fn from_name(name: &str) -> Option<AxiomId> {
        AxiomId::ALL.into_iter().find(|a| a.name() == name)
    }

    pub fn is_ax0(self) -> bool {
        AxiomId::AX0.contains(&self)
    }

    fn base_text(self) -> &'static str {
        match self {
            AxiomId::Ax0_1a => "p0 -> (p1 -> p0)",
            AxiomId::Ax0_1b => "(p0 -> p1) -> ((p0 -> (p1 -> p2)) -> (p0 -> p2))",
            AxiomId::Ax0_3 => "p0 -> (p1 -> p0 & p1)",
            AxiomId::Ax0_4a => "p0 & p1 -> p0",
            AxiomId::Ax0_4b => "p0 & p1 -> p1",
            AxiomId::Ax0_5a => "p0 -> p0 | p1",
            AxiomId::Ax0_5b => "p1 -> p0 | p1",
            AxiomId::Ax0_6 => "(p0 -> p2) -> ((p1 -> p2) -> (p0 | p1 -> p2))",
            AxiomId::Ax0_7 => "(p0 -> p1) -> ((p0 -> ~p1) -> ~p0)",
            AxiomId::Ax0_8 => "~p0 -> (p0 -> p1)",
            AxiomId::Ax1 => "p0 -> []p0",
            AxiomId::Ax2 => "([]p0 -> p0) -> p0",
            AxiomId::Ax3 => "[]p0 -> (p1 | (p1 -> p0))",
            AxiomId::MHC_K => "[](p0 -> p1) -> ([]p0 -> []p1)",
        }
    }

    /// The base formula of the axiom, over `p0, p1, p2`.
    pub fn base(self) -> Formula {
        parse(self.base_text()).expect("axiom text parses")
    }

    /// The substitution turning the base formula into `f`, if `f` is an
    /// instance. Every variable of the base formula is bound.
    pub fn match_instance(self, f: &Formula) -> Option<Substitution> {
        self.base().match_onto(f)
    }

    pub fn instance(self, s: &Substitution) -> Formula {
        self.base().substitute(s)
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Restriction {
    Unrestricted,
    BoxFreeOnly,
}

/// An axiom set together with restrictions on substitution images and on
/// the formulas allowed in a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalculusMode {
    pub name: &'static str,
    pub axioms: BTreeSet<AxiomId>,
    pub substitution: Restriction,
    pub language: Restriction,
}

impl CalculusMode {
    pub fn int() -> Self {
        CalculusMode {
            name: "int",
            axioms: AxiomId::AX0.into_iter().collect(),
            substitution: Restriction::BoxFreeOnly,
            language: Restriction::BoxFreeOnly,
        }
    }

    pub fn int_box() -> Self {
        CalculusMode {
            name: "intbox",
            axioms: AxiomId::AX0.into_iter().collect(),
            substitution: Restriction::Unrestricted,
            language: Restriction::Unrestricted,
        }
    }

    pub fn km() -> Self {
        let mut axioms: BTreeSet<AxiomId> = AxiomId::AX0.into_iter().collect();
        axioms.extend([AxiomId::Ax1, AxiomId::Ax2, AxiomId::Ax3]);
        CalculusMode {
            name: "km",
            axioms,
            substitution: Restriction::Unrestricted,
            language: Restriction::Unrestricted,
        }
    }

    /// `Int□ + □(p0→p1)→(□p0→□p1) + Ax1 + Ax3`.
    pub fn mhc() -> Self {
        let mut axioms: BTreeSet<AxiomId> = AxiomId::AX0.into_iter().collect();
        axioms.extend([AxiomId::MHC_K, AxiomId::Ax1, AxiomId::Ax3]);
        CalculusMode {
            name: "mhc",
            axioms,
            substitution: Restriction::Unrestricted,
            language: Restriction::Unrestricted,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "int" => Some(Self::int()),
            "intbox" => Some(Self::int_box()),
            "km" => Some(Self::km()),
            "mhc" => Some(Self::mhc()),
            _ => None,
        }
    }

    /// Axioms of this mode that are not KM axioms and therefore need a KM
    /// certificate before the mode counts as a KM-sublogic.
    pub fn non_km_axioms(&self) -> impl Iterator<Item = AxiomId> + '_ {
        let km = CalculusMode::km();
        self.axioms.iter().copied().filter(move |a| !km.axioms.contains(a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom {
        id: AxiomId,
        subst: Substitution,
    },
    /// Instance of premise `index` (0-based).
    Premise {
        index: usize,
        subst: Substitution,
    },
    /// Modus ponens from `minor` (`A`) and `major` (`A → B`).
    ModusPonens {
        minor: usize,
        major: usize,
    },
    /// The substitution rule applied to an earlier step.
    Subst {
        source: usize,
        subst: Substitution,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

/// A derivation from a (possibly empty) list of premises. The conclusion is
/// the formula of the last step. Step indices are 0-based.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    pub premises: Vec<Formula>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CalculusError {
    #[error("derivation is not refined")]
    NotRefined,
    #[error("step {0} does not exist")]
    NoSuchStep(usize),
    #[error("premise {0} does not exist")]
    NoSuchPremise(usize),
    #[error("major premise at step {major} is not an implication with antecedent of step {minor}")]
    ModusPonensMismatch { minor: usize, major: usize },
}

impl Derivation {
    pub fn new(premises: Vec<Formula>) -> Self {
        Derivation {
            premises,
            steps: Vec::new(),
        }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.steps.iter().map(|s| &s.formula)
    }

    fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.steps.push(Step { formula, justification });
        self.steps.len() - 1
    }

    pub fn push_axiom(&mut self, id: AxiomId, subst: Substitution) -> usize {
        let formula = id.instance(&subst);
        self.push(formula, Justification::Axiom { id, subst })
    }

    pub fn push_premise(&mut self, index: usize, subst: Substitution) -> Result<usize, CalculusError> {
        let premise = self.premises.get(index).ok_or(CalculusError::NoSuchPremise(index))?;
        let formula = premise.substitute(&subst);
        Ok(self.push(formula, Justification::Premise { index, subst }))
    }

    pub fn push_mp(&mut self, minor: usize, major: usize) -> Result<usize, CalculusError> {
        let a = &self.steps.get(minor).ok_or(CalculusError::NoSuchStep(minor))?.formula;
        let ab = &self.steps.get(major).ok_or(CalculusError::NoSuchStep(major))?.formula;
        match ab {
            Formula::Impl(l, r) if **l == *a => {
                let b = (**r).clone();
                Ok(self.push(b, Justification::ModusPonens { minor, major }))
            }
            _ => Err(CalculusError::ModusPonensMismatch { minor, major }),
        }
    }

    pub fn push_subst(&mut self, source: usize, subst: Substitution) -> Result<usize, CalculusError> {
        let src = &self.steps.get(source).ok_or(CalculusError::NoSuchStep(source))?.formula;
        let formula = src.substitute(&subst);
        Ok(self.push(formula, Justification::Subst { source, subst }))
    }

    /// Appends a premise-free derivation, shifting its step references.
    /// Returns the index of its last step.
    pub fn append(&mut self, block: &Derivation) -> usize {
        debug_assert!(block.premises.is_empty());
        let offset = self.steps.len();
        for st in &block.steps {
            let justification = match &st.justification {
                Justification::ModusPonens { minor, major } => Justification::ModusPonens {
                    minor: minor + offset,
                    major: major + offset,
                },
                Justification::Subst { source, subst } => Justification::Subst {
                    source: source + offset,
                    subst: subst.clone(),
                },
                other => other.clone(),
            };
            self.steps.push(Step {
                formula: st.formula.clone(),
                justification,
            });
        }
        self.steps.len() - 1
    }

    /// True iff no step uses the stand-alone substitution rule.
    pub fn is_refined(&self) -> bool {
        self.steps
            .iter()
            .all(|s| !matches!(s.justification, Justification::Subst { .. }))
    }

    /// `M(D)`: the maximal `□`-subformulas of the list of step formulas.
    pub fn maximal_subformulas(&self) -> BTreeSet<Formula> {
        maximal_subformulas(self.formulas())
    }

    /// `M(⟨premises…, conclusion⟩)`.
    pub fn boundary_maximal(&self) -> BTreeSet<Formula> {
        maximal_subformulas(self.premises.iter().chain(self.conclusion()))
    }

    /// Purity: `M(D) ⊆ M(⟨premises…, conclusion⟩)`; defined for refined
    /// derivations only.
    pub fn is_pure(&self) -> Result<bool, CalculusError> {
        if !self.is_refined() {
            return Err(CalculusError::NotRefined);
        }
        Ok(self.maximal_subformulas().is_subset(&self.boundary_maximal()))
    }

    /// `|M(D)|`, defined for refined derivations.
    pub fn rank(&self) -> Result<usize, CalculusError> {
        if !self.is_refined() {
            return Err(CalculusError::NotRefined);
        }
        Ok(self.maximal_subformulas().len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureReason {
    EmptyDerivation,
    AxiomNotInMode(AxiomId),
    AxiomMismatch(AxiomId),
    NoSuchPremise(usize),
    PremiseMismatch(usize),
    ForwardReference(usize),
    NotModusPonens,
    SubstMismatch,
    SubstitutionNotBoxFree,
    BoxInLanguage,
    PremiseNotBoxFree(usize),
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::EmptyDerivation => f.write_str("derivation has no steps"),
            FailureReason::AxiomNotInMode(a) => write!(f, "axiom {a} is not available in this mode"),
            FailureReason::AxiomMismatch(a) => write!(f, "formula is not the stated instance of {a}"),
            FailureReason::NoSuchPremise(k) => write!(f, "premise {} does not exist", k + 1),
            FailureReason::PremiseMismatch(k) => write!(f, "formula is not the stated instance of premise {}", k + 1),
            FailureReason::ForwardReference(i) => {
                write!(f, "reference to step {} which does not precede this one", i + 1)
            }
            FailureReason::NotModusPonens => f.write_str("modus ponens does not apply to the referenced steps"),
            FailureReason::SubstMismatch => f.write_str("formula is not the stated substitution instance"),
            FailureReason::SubstitutionNotBoxFree => f.write_str("substitution image contains a box"),
            FailureReason::BoxInLanguage => f.write_str("formula contains a box"),
            FailureReason::PremiseNotBoxFree(k) => write!(f, "premise {} contains a box", k + 1),
        }
    }
}

/// A failed check. `step` is `None` for failures of the derivation as a whole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub step: Option<usize>,
    pub reason: FailureReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub ok: bool,
    pub mode: CalculusMode,
    pub failures: Vec<Failure>,
    pub refined: bool,
    pub pure: bool,
    pub rank: usize,
}

/// Checks every step of `d` under `mode`, collecting all failures.
pub fn verify(d: &Derivation, mode: &CalculusMode) -> VerificationReport {
    let mut failures = Vec::new();
    let mut fail = |step: Option<usize>, reason| failures.push(Failure { step, reason });
    let box_free_subst = mode.substitution == Restriction::BoxFreeOnly;
    let box_free_lang = mode.language == Restriction::BoxFreeOnly;

    if d.steps.is_empty() {
        fail(None, FailureReason::EmptyDerivation);
    }
    if box_free_lang {
        for (k, p) in d.premises.iter().enumerate() {
            if !p.is_assertoric() {
                fail(None, FailureReason::PremiseNotBoxFree(k));
            }
        }
    }
    let earlier = |i: usize, j: usize| if j < i { Some(&d.steps[j].formula) } else { None };
    for (i, step) in d.steps.iter().enumerate() {
        let at = Some(i);
        let check_subst = |s: &Substitution, fail: &mut dyn FnMut(Option<usize>, FailureReason)| {
            if box_free_subst && !s.is_assertoric() {
                fail(at, FailureReason::SubstitutionNotBoxFree);
            }
        };
        match &step.justification {
            Justification::Axiom { id, subst } => {
                if !mode.axioms.contains(id) {
                    fail(at, FailureReason::AxiomNotInMode(*id));
                }
                check_subst(subst, &mut fail);
                if id.instance(subst) != step.formula {
                    fail(at, FailureReason::AxiomMismatch(*id));
                }
            }
            Justification::Premise { index, subst } => {
                check_subst(subst, &mut fail);
                match d.premises.get(*index) {
                    None => fail(at, FailureReason::NoSuchPremise(*index)),
                    Some(p) if p.substitute(subst) != step.formula => fail(at, FailureReason::PremiseMismatch(*index)),
                    Some(_) => {}
                }
            }
            Justification::ModusPonens { minor, major } => match (earlier(i, *minor), earlier(i, *major)) {
                (None, _) => fail(at, FailureReason::ForwardReference(*minor)),
                (_, None) => fail(at, FailureReason::ForwardReference(*major)),
                (Some(a), Some(ab)) => match ab {
                    Formula::Impl(l, r) if **l == *a && **r == step.formula => {}
                    _ => fail(at, FailureReason::NotModusPonens),
                },
            },
            Justification::Subst { source, subst } => {
                check_subst(subst, &mut fail);
                match earlier(i, *source) {
                    None => fail(at, FailureReason::ForwardReference(*source)),
                    Some(src) if src.substitute(subst) != step.formula => fail(at, FailureReason::SubstMismatch),
                    Some(_) => {}
                }
            }
        }
        if box_free_lang && !step.formula.is_assertoric() {
            fail(at, FailureReason::BoxInLanguage);
        }
    }
    let refined = d.is_refined();
    VerificationReport {
        ok: failures.is_empty(),
        mode: mode.clone(),
        failures,
        refined,
        pure: d.is_pure().unwrap_or(false),
        rank: d.maximal_subformulas().len(),
    }
}

#[cfg(test)]
pub(crate) use tests::d0;
