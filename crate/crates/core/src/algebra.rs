//! Finite Heyting algebras, `□`-enrichments and a countermodel search.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("the carrier is empty")]
    Empty,
    #[error("order matrix is not square")]
    NotSquare,
    #[error("relation is not a partial order")]
    NotPartialOrder,
    #[error("order is not a lattice")]
    NotLattice,
    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("relative pseudocomplement does not exist")]
    NoImplication,
    #[error("box table has {found} entries, expected {expected}")]
    BoxSize { expected: usize, found: usize },
    #[error("element {0} is out of range")]
    OutOfRange(usize),
    #[error("formula contains a box but no box table was given")]
    MissingBox,
    #[error("variable p{0} has no value")]
    Unassigned(u32),
    #[error("search exceeded {0} nodes")]
    SearchLimit(u64),
}

/// A finite Heyting algebra on `0..size`, numbered along a linear extension
/// of the order: `0` is the bottom and `size - 1` the top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteHeytingAlgebra {
    size: usize,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    imp: Vec<usize>,
}

/// A unary operation table.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoxTable(pub Vec<usize>);

/// Variable assignment.
pub type Valuation = BTreeMap<u32, usize>;

/// The identities of a `□`-enrichment: `(i)` `□(x∧y) = □x∧□y`, `(ii)`
/// `x ≤ □x`, `(iii)` `□x ≤ y∨(y→x)`, `(iv)` `(□x→x)→x = 1`.
///
/// `(iv)` is read so that it says exactly that `(□p0→p0)→p0` is valid; in
/// the presence of `(ii)` it is equivalent to `□x→x = x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoxIdentity {
    I,
    II,
    III,
    IV,
}

impl BoxIdentity {
    pub const ALL: [BoxIdentity; 4] = [BoxIdentity::I, BoxIdentity::II, BoxIdentity::III, BoxIdentity::IV];

    pub fn name(self) -> &'static str {
        match self {
            BoxIdentity::I => "i",
            BoxIdentity::II => "ii",
            BoxIdentity::III => "iii",
            BoxIdentity::IV => "iv",
        }
    }

    pub fn from_name(s: &str) -> Option<BoxIdentity> {
        BoxIdentity::ALL.into_iter().find(|i| i.name() == s)
    }

    /// `{i, ii, iii}`.
    pub fn mhc() -> BTreeSet<BoxIdentity> {
        [BoxIdentity::I, BoxIdentity::II, BoxIdentity::III]
            .into_iter()
            .collect()
    }

    /// `{i, ii, iii, iv}`.
    pub fn km() -> BTreeSet<BoxIdentity> {
        BoxIdentity::ALL.into_iter().collect()
    }
}

impl fmt::Display for BoxIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn check_partial_order(n: usize, leq: &[bool]) -> Result<(), AlgebraError> {
    let r = |a: usize, b: usize| leq[a * n + b];
    for a in 0..n {
        if !r(a, a) {
            return Err(AlgebraError::NotPartialOrder);
        }
        for b in 0..n {
            if a != b && r(a, b) && r(b, a) {
                return Err(AlgebraError::NotPartialOrder);
            }
            for c in 0..n {
                if r(a, b) && r(b, c) && !r(a, c) {
                    return Err(AlgebraError::NotPartialOrder);
                }
            }
        }
    }
    Ok(())
}

fn square(rows: &[Vec<bool>]) -> Result<(usize, Vec<bool>), AlgebraError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::NotSquare);
    }
    Ok((n, rows.concat()))
}

impl FiniteHeytingAlgebra {
    /// Builds the algebra of a lattice order given as a matrix
    /// (`rows[a][b]` iff `a ≤ b`). Elements are renumbered by the size of
    /// their down-set, ties broken by the given index; the second component
    /// maps each given index to its new one.
    pub fn from_order(rows: &[Vec<bool>]) -> Result<(Self, Vec<usize>), AlgebraError> {
        let (n, leq) = square(rows)?;
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        check_partial_order(n, &leq)?;
        let down = |a: usize| (0..n).filter(|&b| leq[b * n + a]).count();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| (down(a), a));
        let mut new_index = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let mut sorted = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                sorted[new_index[a] * n + new_index[b]] = leq[a * n + b];
            }
        }
        Ok((Self::from_sorted_order(n, sorted)?, new_index))
    }

    fn from_sorted_order(n: usize, leq: Vec<bool>) -> Result<Self, AlgebraError> {
        let r = |a: usize, b: usize| leq[a * n + b];
        let greatest = |cands: &mut dyn Iterator<Item = usize>| -> Option<usize> {
            let c: Vec<usize> = cands.collect();
            c.iter().copied().find(|&x| c.iter().all(|&y| r(y, x)))
        };
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] =
                    greatest(&mut (0..n).filter(|&x| r(x, a) && r(x, b))).ok_or(AlgebraError::NotLattice)?;
                let ub: Vec<usize> = (0..n).filter(|&x| r(a, x) && r(b, x)).collect();
                join[a * n + b] = ub
                    .iter()
                    .copied()
                    .find(|&x| ub.iter().all(|&y| r(x, y)))
                    .ok_or(AlgebraError::NotLattice)?;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a * n + join[b * n + c]] != join[meet[a * n + b] * n + meet[a * n + c]] {
                        return Err(AlgebraError::NotDistributive);
                    }
                }
            }
        }
        let mut imp = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                imp[a * n + b] =
                    greatest(&mut (0..n).filter(|&x| r(meet[a * n + x], b))).ok_or(AlgebraError::NoImplication)?;
            }
        }
        Ok(FiniteHeytingAlgebra {
            size: n,
            leq,
            meet,
            join,
            imp,
        })
    }

    /// The algebra of upward-closed subsets of a finite poset
    /// (`rows[a][b]` iff `a ≤ b`).
    pub fn upsets(rows: &[Vec<bool>]) -> Result<Self, AlgebraError> {
        let (n, leq) = square(rows)?;
        check_partial_order(n, &leq)?;
        let sets: Vec<u32> = (0u32..1 << n)
            .filter(|&s| (0..n).all(|a| s & (1 << a) == 0 || (0..n).all(|b| !leq[a * n + b] || s & (1 << b) != 0)))
            .collect();
        let m = sets.len();
        let order: Vec<Vec<bool>> = sets
            .iter()
            .map(|&u| sets.iter().map(|&v| u & !v == 0).collect())
            .collect();
        let (alg, _) = Self::from_order(&order)?;
        debug_assert_eq!(alg.size, m);
        Ok(alg)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.size - 1
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    pub fn imp(&self, a: usize, b: usize) -> usize {
        self.imp[a * self.size + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.imp(a, self.bottom())
    }

    /// The order as a matrix.
    pub fn order_rows(&self) -> Vec<Vec<bool>> {
        (0..self.size)
            .map(|a| (0..self.size).map(|b| self.leq(a, b)).collect())
            .collect()
    }

    pub fn check_box(&self, b: &BoxTable) -> Result<(), AlgebraError> {
        if b.0.len() != self.size {
            return Err(AlgebraError::BoxSize {
                expected: self.size,
                found: b.0.len(),
            });
        }
        match b.0.iter().find(|&&x| x >= self.size) {
            Some(&x) => Err(AlgebraError::OutOfRange(x)),
            None => Ok(()),
        }
    }

    /// Value of `f` under `v`.
    pub fn evaluate(&self, f: &Formula, bx: Option<&BoxTable>, v: &Valuation) -> Result<usize, AlgebraError> {
        Ok(match f {
            Formula::Var(i) => {
                let x = *v.get(i).ok_or(AlgebraError::Unassigned(*i))?;
                if x >= self.size {
                    return Err(AlgebraError::OutOfRange(x));
                }
                x
            }
            Formula::Conj(a, b) => self.meet(self.evaluate(a, bx, v)?, self.evaluate(b, bx, v)?),
            Formula::Disj(a, b) => self.join(self.evaluate(a, bx, v)?, self.evaluate(b, bx, v)?),
            Formula::Impl(a, b) => self.imp(self.evaluate(a, bx, v)?, self.evaluate(b, bx, v)?),
            Formula::Neg(a) => self.neg(self.evaluate(a, bx, v)?),
            Formula::Box(a) => {
                let t = bx.ok_or(AlgebraError::MissingBox)?;
                t.0[self.evaluate(a, bx, v)?]
            }
        })
    }

    /// A valuation of the variables of `f` under which `f` is not the top,
    /// if there is one.
    pub fn falsify(&self, f: &Formula, bx: Option<&BoxTable>) -> Result<Option<Valuation>, AlgebraError> {
        if !f.is_assertoric() {
            self.check_box(bx.ok_or(AlgebraError::MissingBox)?)?;
        }
        let vars: Vec<u32> = f.variables().into_iter().collect();
        let mut vals = vec![0usize; vars.len()];
        loop {
            let v: Valuation = vars.iter().copied().zip(vals.iter().copied()).collect();
            if self.evaluate(f, bx, &v)? != self.top() {
                return Ok(Some(v));
            }
            // next valuation, odometer style
            let mut k = 0;
            loop {
                if k == vals.len() {
                    return Ok(None);
                }
                vals[k] += 1;
                if vals[k] < self.size {
                    break;
                }
                vals[k] = 0;
                k += 1;
            }
        }
    }

    /// True iff `f` evaluates to the top under every valuation.
    pub fn validates(&self, f: &Formula, bx: Option<&BoxTable>) -> Result<bool, AlgebraError> {
        Ok(self.falsify(f, bx)?.is_none())
    }

    fn holds(&self, id: BoxIdentity, b: &[usize]) -> bool {
        let n = self.size;
        match id {
            BoxIdentity::I => (0..n).all(|x| (0..n).all(|y| b[self.meet(x, y)] == self.meet(b[x], b[y]))),
            BoxIdentity::II => (0..n).all(|x| self.leq(x, b[x])),
            BoxIdentity::III => (0..n).all(|x| (0..n).all(|y| self.leq(b[x], self.join(y, self.imp(y, x))))),
            BoxIdentity::IV => (0..n).all(|x| self.imp(self.imp(b[x], x), x) == self.top()),
        }
    }

    /// The identities among `(i)`–`(iv)` that hold for `b`.
    pub fn box_identities(&self, b: &BoxTable) -> Result<BTreeSet<BoxIdentity>, AlgebraError> {
        self.check_box(b)?;
        Ok(BoxIdentity::ALL
            .into_iter()
            .filter(|&id| self.holds(id, &b.0))
            .collect())
    }

    /// `□a = ⋀_b (b ∨ (b → a))`.
    pub fn canonical_box(&self) -> BoxTable {
        let n = self.size;
        BoxTable(
            (0..n)
                .map(|a| (0..n).fold(self.top(), |acc, b| self.meet(acc, self.join(b, self.imp(b, a)))))
                .collect(),
        )
    }

    /// All box tables satisfying `required`, in lexicographic order. The
    /// search visits at most `limit` partial tables.
    pub fn search_boxes(&self, required: &BTreeSet<BoxIdentity>, limit: u64) -> Result<Vec<BoxTable>, AlgebraError> {
        let n = self.size;
        let has = |id| required.contains(&id);
        let bound: Vec<usize> = self.canonical_box().0;
        let domains: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .filter(|&c| !has(BoxIdentity::II) || self.leq(a, c))
                    .filter(|&c| !has(BoxIdentity::III) || self.leq(c, bound[a]))
                    .filter(|&c| !has(BoxIdentity::IV) || self.imp(self.imp(c, a), a) == self.top())
                    .collect()
            })
            .collect();
        let mut search = BoxSearch {
            alg: self,
            domains,
            meet_law: has(BoxIdentity::I),
            nodes: 0,
            limit,
            out: Vec::new(),
        };
        let mut table = Vec::with_capacity(n);
        search.go(&mut table)?;
        Ok(search.out)
    }
}

struct BoxSearch<'a> {
    alg: &'a FiniteHeytingAlgebra,
    domains: Vec<Vec<usize>>,
    meet_law: bool,
    nodes: u64,
    limit: u64,
    out: Vec<BoxTable>,
}

impl BoxSearch<'_> {
    fn go(&mut self, table: &mut Vec<usize>) -> Result<(), AlgebraError> {
        let a = table.len();
        if a == self.alg.size {
            self.out.push(BoxTable(table.clone()));
            return Ok(());
        }
        for k in 0..self.domains[a].len() {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(AlgebraError::SearchLimit(self.limit));
            }
            let c = self.domains[a][k];
            table.push(c);
            // meets of `a` with earlier elements lie below `a`, hence earlier
            let ok = !self.meet_law || (0..=a).all(|x| table[self.alg.meet(a, x)] == self.alg.meet(c, table[x]));
            if ok {
                self.go(table)?;
            }
            table.pop();
        }
        Ok(())
    }
}

/// Default node budget for [`FiniteHeytingAlgebra::search_boxes`].
pub const DEFAULT_SEARCH_LIMIT: u64 = 50_000_000;

/// All partial orders on `n` points up to isomorphism, as matrices, each
/// numbered along a linear extension.
pub fn posets(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let perms = permutations(n);
    for mask in 0u64..1 << pairs.len() {
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << k) != 0 {
                leq[i * n + j] = true;
            }
        }
        if check_partial_order(n, &leq).is_err() {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut m = vec![false; n * n];
                for a in 0..n {
                    for b in 0..n {
                        m[p[a] * n + p[b]] = leq[a * n + b];
                    }
                }
                m
            })
            .min()
            .expect("n! > 0");
        if seen.insert(canon) {
            out.push((0..n).map(|a| leq[a * n..(a + 1) * n].to_vec()).collect());
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// A KM-algebra and valuation separating premises from a goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub algebra: FiniteHeytingAlgebra,
    pub box_table: Option<BoxTable>,
    pub valuation: Valuation,
}

/// Looks for a KM-algebra, among the upset algebras of posets with at most
/// `max_poset_size` points and all their KM box tables, in which every
/// formula of `gamma` is valid while `a` is not. `None` is inconclusive.
pub fn refutes(gamma: &[Formula], a: &Formula, max_poset_size: usize) -> Result<Option<Refutation>, AlgebraError> {
    let modal = gamma.iter().chain([a]).any(|f| !f.is_assertoric());
    for n in 1..=max_poset_size {
        for poset in posets(n) {
            let alg = FiniteHeytingAlgebra::upsets(&poset)?;
            let tables: Vec<Option<BoxTable>> = if modal {
                alg.search_boxes(&BoxIdentity::km(), DEFAULT_SEARCH_LIMIT)?
                    .into_iter()
                    .map(Some)
                    .collect()
            } else {
                vec![None]
            };
            for t in tables {
                let bx = t.as_ref();
                if !gamma
                    .iter()
                    .map(|g| alg.validates(g, bx))
                    .collect::<Result<Vec<bool>, _>>()?
                    .into_iter()
                    .all(|x| x)
                {
                    continue;
                }
                if let Some(valuation) = alg.falsify(a, bx)? {
                    return Ok(Some(Refutation {
                        algebra: alg,
                        box_table: t,
                        valuation,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests;
