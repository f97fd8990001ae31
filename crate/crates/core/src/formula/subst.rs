use alloc::collections::BTreeMap;
use core::fmt;

use super::Formula;

/// A finite map from variable indices to formulas. Variables outside the map
/// are left fixed, so application is an endomorphism of the formula algebra.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    bindings: BTreeMap<u32, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(var: u32, image: Formula) -> Self {
        let mut s = Self::new();
        s.insert(var, image);
        s
    }

    pub fn get(&self, var: u32) -> Option<&Formula> {
        self.bindings.get(&var)
    }

    pub fn insert(&mut self, var: u32, image: Formula) -> Option<Formula> {
        self.bindings.insert(var, image)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Formula)> {
        self.bindings.iter().map(|(k, v)| (*k, v))
    }

    /// The image of variable `var`.
    pub fn image(&self, var: u32) -> Formula {
        self.get(var).cloned().unwrap_or(Formula::Var(var))
    }

    /// The substitution that applies `self` first and then `after`, i.e.
    /// `after ∘ self`.
    pub fn then(&self, after: &Substitution) -> Substitution {
        let mut bindings: BTreeMap<u32, Formula> =
            self.bindings.iter().map(|(k, v)| (*k, v.substitute(after))).collect();
        for (k, v) in &after.bindings {
            bindings.entry(*k).or_insert_with(|| v.clone());
        }
        Substitution { bindings }.normalized()
    }

    /// Drops identity bindings `x := x`.
    pub fn normalized(mut self) -> Substitution {
        self.bindings.retain(|k, v| *v != Formula::Var(*k));
        self
    }

    /// Keeps only the bindings of variables in `vars`.
    pub fn restricted(mut self, vars: &alloc::collections::BTreeSet<u32>) -> Substitution {
        self.bindings.retain(|k, _| vars.contains(k));
        self
    }

    /// Applies `f` to every image.
    pub fn map_images(&self, mut f: impl FnMut(&Formula) -> Formula) -> Substitution {
        Substitution {
            bindings: self.bindings.iter().map(|(k, v)| (*k, f(v))).collect(),
        }
    }

    /// True iff every image is `□`-free.
    pub fn is_assertoric(&self) -> bool {
        self.bindings.values().all(Formula::is_assertoric)
    }
}

impl FromIterator<(u32, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (u32, Formula)>>(iter: I) -> Self {
        Substitution {
            bindings: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "p{k}:={v}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
