//! The propositional modal language: formulas over `p0, p1, …` built with
//! `∧ ∨ → ¬ □`, substitutions, positional and global replacement, and the
//! maximal □-subformula machinery that drives the rank of a derivation.

mod subst;
mod syntax;

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub use subst::Substitution;
pub use syntax::{parse, ParseError};

/// A formula of the modal language.
///
/// Equality is syntactic identity. Subtrees are reference counted so that
/// substitution and replacement can share unchanged structure.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(u32),
    Conj(Arc<Formula>, Arc<Formula>),
    Disj(Arc<Formula>, Arc<Formula>),
    Impl(Arc<Formula>, Arc<Formula>),
    Neg(Arc<Formula>),
    Box(Arc<Formula>),
}

impl Formula {
    pub fn var(index: u32) -> Self {
        Formula::Var(index)
    }

    pub fn conj(left: Formula, right: Formula) -> Self {
        Formula::Conj(Arc::new(left), Arc::new(right))
    }

    pub fn disj(left: Formula, right: Formula) -> Self {
        Formula::Disj(Arc::new(left), Arc::new(right))
    }

    pub fn imp(left: Formula, right: Formula) -> Self {
        Formula::Impl(Arc::new(left), Arc::new(right))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: Formula) -> Self {
        Formula::Neg(Arc::new(inner))
    }

    pub fn boxed(inner: Formula) -> Self {
        Formula::Box(Arc::new(inner))
    }

    /// The constant `𝟏`, which abbreviates `p0 → p0`.
    pub fn one() -> Self {
        Formula::imp(Formula::Var(0), Formula::Var(0))
    }

    /// `(a → b) ∧ (b → a)`.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::conj(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Right-nested conjunction of `parts`; a single part is returned as is.
    ///
    /// Returns `None` for an empty list.
    pub fn conj_all(parts: &[Formula]) -> Option<Formula> {
        let (last, init) = parts.split_last()?;
        Some(
            init.iter()
                .rev()
                .fold(last.clone(), |acc, f| Formula::conj(f.clone(), acc)),
        )
    }

    /// The immediate subformulas, in child-index order.
    pub fn children(&self) -> impl Iterator<Item = &Formula> {
        let (a, b): (Option<&Formula>, Option<&Formula>) = match self {
            Formula::Var(_) => (None, None),
            Formula::Conj(l, r) | Formula::Disj(l, r) | Formula::Impl(l, r) => (Some(l), Some(r)),
            Formula::Neg(x) | Formula::Box(x) => (Some(x), None),
        };
        a.into_iter().chain(b)
    }

    /// Rebuilds a node of the same shape as `self` with new children.
    fn with_children(&self, mut kids: impl Iterator<Item = Formula>) -> Formula {
        let mut next = || kids.next().expect("arity mismatch");
        match self {
            Formula::Var(k) => Formula::Var(*k),
            Formula::Conj(..) => Formula::conj(next(), next()),
            Formula::Disj(..) => Formula::disj(next(), next()),
            Formula::Impl(..) => Formula::imp(next(), next()),
            Formula::Neg(_) => Formula::neg(next()),
            Formula::Box(_) => Formula::boxed(next()),
        }
    }

    pub fn is_box(&self) -> bool {
        matches!(self, Formula::Box(_))
    }

    /// True iff no `□` occurs anywhere in the formula.
    pub fn is_assertoric(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::Box(_) => false,
            _ => self.children().all(Formula::is_assertoric),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().map(Formula::size).sum::<usize>()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Var(k) => {
                out.insert(*k);
            }
            _ => self.children().for_each(|c| c.collect_vars(out)),
        }
    }

    /// Largest variable index occurring in the formula.
    pub fn max_var(&self) -> Option<u32> {
        match self {
            Formula::Var(k) => Some(*k),
            _ => self.children().filter_map(Formula::max_var).max(),
        }
    }

    /// Every subtree of `self`, including `self`, deduplicated.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.insert(self.clone()) {
            self.children().for_each(|c| c.collect_subformulas(out));
        }
    }

    /// True iff `target` occurs in `self` (possibly as `self`).
    pub fn contains(&self, target: &Formula) -> bool {
        self == target || self.children().any(|c| c.contains(target))
    }

    pub fn substitute(&self, s: &Substitution) -> Formula {
        match self {
            Formula::Var(k) => s.get(*k).cloned().unwrap_or(Formula::Var(*k)),
            _ => self.with_children(self.children().map(|c| c.substitute(s))),
        }
    }

    /// `self[target:replacement]`: every outermost occurrence of `target`
    /// becomes `replacement`. The replacement is not rescanned.
    pub fn replace_all(&self, target: &Formula, replacement: &Formula) -> Formula {
        if self == target {
            return replacement.clone();
        }
        if !self.contains(target) {
            return self.clone();
        }
        self.with_children(self.children().map(|c| c.replace_all(target, replacement)))
    }

    /// The subtree addressed by `path`, if the path is valid.
    pub fn at(&self, path: &[u8]) -> Option<&Formula> {
        let mut cur = self;
        for &step in path {
            cur = cur.children().nth(step as usize)?;
        }
        Some(cur)
    }

    /// Paths of the outermost occurrences of `target`, in preorder.
    pub fn occurrences(&self, target: &Formula) -> OccurrenceSet {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_occurrences(target, &mut path, &mut out);
        OccurrenceSet {
            positions: out.into_iter().collect(),
        }
    }

    fn collect_occurrences(&self, target: &Formula, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if self == target {
            out.push(path.clone());
            return;
        }
        for (i, c) in self.children().enumerate() {
            path.push(i as u8);
            c.collect_occurrences(target, path, out);
            path.pop();
        }
    }

    /// Replaces exactly the subtrees addressed by `occ` with `replacement`.
    pub fn replace_at(&self, occ: &OccurrenceSet, replacement: &Formula) -> Result<Formula, OccurrenceError> {
        occ.check(self)?;
        let paths: Vec<&[u8]> = occ.positions.iter().map(Vec::as_slice).collect();
        Ok(self.replace_paths(&paths, replacement))
    }

    fn replace_paths(&self, paths: &[&[u8]], replacement: &Formula) -> Formula {
        if paths.is_empty() {
            return self.clone();
        }
        if paths.iter().any(|p| p.is_empty()) {
            return replacement.clone();
        }
        let kids = self.children().enumerate().map(|(i, c)| {
            let sub: Vec<&[u8]> = paths.iter().filter(|p| p[0] as usize == i).map(|p| &p[1..]).collect();
            c.replace_paths(&sub, replacement)
        });
        self.with_children(kids)
    }

    /// One-sided matching: the substitution `s` on the variables of `self`
    /// with `self.substitute(s) == target`, if any.
    pub fn match_onto(&self, target: &Formula) -> Option<Substitution> {
        let mut s = Substitution::new();
        self.match_into(target, &mut s).then_some(s)
    }

    fn match_into(&self, target: &Formula, s: &mut Substitution) -> bool {
        match (self, target) {
            (Formula::Var(k), _) => match s.get(*k) {
                Some(bound) => bound == target,
                None => {
                    s.insert(*k, target.clone());
                    true
                }
            },
            (Formula::Conj(a, b), Formula::Conj(c, d))
            | (Formula::Disj(a, b), Formula::Disj(c, d))
            | (Formula::Impl(a, b), Formula::Impl(c, d)) => a.match_into(c, s) && b.match_into(d, s),
            (Formula::Neg(a), Formula::Neg(c)) | (Formula::Box(a), Formula::Box(c)) => a.match_into(c, s),
            _ => false,
        }
    }

    /// Visits every `□`-subformula occurrence in preorder, reporting whether
    /// it lies inside the scope of another `□`.
    fn visit_boxes<'a>(&'a self, in_scope: bool, f: &mut impl FnMut(&'a Formula, bool)) {
        if self.is_box() {
            f(self, in_scope);
        }
        let inner = in_scope || self.is_box();
        for c in self.children() {
            c.visit_boxes(inner, f);
        }
    }

    /// The `□`-subformulas of `self` that occur outside the scope of any `□`,
    /// in preorder of first occurrence, without duplicates.
    pub fn outermost_boxes(&self) -> Vec<&Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit_boxes(false, &mut |b, scoped| {
            if !scoped && seen.insert(b) {
                out.push(b);
            }
        });
        out
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A set of positions (child-index paths) into a host formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OccurrenceSet {
    pub positions: BTreeSet<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OccurrenceError {
    #[error("path {0:?} does not address a subformula")]
    InvalidPath(Vec<u8>),
    #[error("paths do not address identical subformulas")]
    NotIdentical,
    #[error("path {0:?} is a prefix of another path")]
    Nested(Vec<u8>),
}

impl OccurrenceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn root() -> Self {
        Self::from_paths([Vec::new()])
    }

    pub fn from_paths(paths: impl IntoIterator<Item = Vec<u8>>) -> Self {
        OccurrenceSet {
            positions: paths.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    /// Prepends `prefix` to every position.
    pub fn under(&self, prefix: &[u8]) -> Self {
        Self::from_paths(self.positions.iter().map(|p| [prefix, p].concat()))
    }

    /// Checks that every path is valid in `host`, that all of them address
    /// the same subformula and that none is a prefix of another.
    pub fn check(&self, host: &Formula) -> Result<(), OccurrenceError> {
        let mut addressed: Option<&Formula> = None;
        for p in &self.positions {
            let sub = host.at(p).ok_or_else(|| OccurrenceError::InvalidPath(p.clone()))?;
            match addressed {
                Some(prev) if prev != sub => return Err(OccurrenceError::NotIdentical),
                _ => addressed = Some(sub),
            }
        }
        // Sorted order puts a prefix immediately before some extension of it.
        let ps: Vec<&Vec<u8>> = self.positions.iter().collect();
        for w in ps.windows(2) {
            if w[1].starts_with(w[0]) {
                return Err(OccurrenceError::Nested(w[0].clone()));
            }
        }
        Ok(())
    }
}

/// `M(S)`: the `□`-formulas that occur in some member of `list` and never
/// inside the scope of a `□` in any member.
pub fn maximal_subformulas<'a>(list: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut boxes = BTreeSet::new();
    let mut scoped = BTreeSet::new();
    for f in list {
        f.visit_boxes(false, &mut |b, in_scope| {
            if in_scope {
                scoped.insert(b);
            } else {
                boxes.insert(b);
            }
        });
    }
    boxes.into_iter().filter(|b| !scoped.contains(b)).cloned().collect()
}

/// The rank of a list of formulas: `|M(list)|`.
pub fn rank<'a>(list: impl IntoIterator<Item = &'a Formula>) -> usize {
    maximal_subformulas(list).len()
}
