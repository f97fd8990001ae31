//! Fixed derivation schemata built on [`ProofBuilder`].

use alloc::vec::Vec;

use super::{BuildError, Fact, ProofBuilder};
use crate::calculus::{AxiomId, Derivation};
use crate::formula::{Formula, OccurrenceSet};

/// `A ∨ (A → B)`.
fn excluded_relative(a: &Formula, b: &Formula) -> Formula {
    Formula::disj(a.clone(), Formula::imp(a.clone(), b.clone()))
}

/// Proves `((A ∨ (A → B)) → B) → B`.
fn stable_disjunct(pb: &mut ProofBuilder, a: &Formula, b: &Formula) -> Result<Fact, BuildError> {
    let ab = Formula::imp(a.clone(), b.clone());
    let d = excluded_relative(a, b);
    pb.assume(Formula::imp(d, b.clone()), |pb, h| {
        let a_to_b = pb.assume(a.clone(), |pb, x| {
            let d = pb.or_left(x, &ab)?;
            pb.mp(d, h)
        })?;
        let d = pb.or_right(a, a_to_b)?;
        pb.mp(d, h)
    })
}

/// From `(X → B) → B` and `(Y → B) → B` proves `((X ∧ Y) → B) → B`.
fn stable_pair(pb: &mut ProofBuilder, kx: Fact, ky: Fact, b: &Formula) -> Result<Fact, BuildError> {
    let x = stable_core(pb, kx)?;
    let y = stable_core(pb, ky)?;
    pb.assume(Formula::imp(Formula::conj(x.clone(), y.clone()), b.clone()), |pb, h| {
        let x_to_b = pb.assume(x, |pb, xf| {
            let y_to_b = pb.assume(y, |pb, yf| {
                let xy = pb.and_intro(xf, yf)?;
                pb.mp(xy, h)
            })?;
            pb.mp(y_to_b, ky)
        })?;
        pb.mp(x_to_b, kx)
    })
}

/// `X` from a fact `(X → B) → B`.
fn stable_core(pb: &ProofBuilder, k: Fact) -> Result<Formula, BuildError> {
    match pb.formula(k) {
        Formula::Impl(l, _) => match &**l {
            Formula::Impl(x, _) => Ok((**x).clone()),
            other => Err(BuildError::Shape {
                expected: "implication",
                found: other.clone(),
            }),
        },
        other => Err(BuildError::Shape {
            expected: "implication",
            found: other.clone(),
        }),
    }
}

/// `⋀ᵢ (Aᵢ ∨ (Aᵢ → B))`, right-nested in the order of `as_`.
pub fn stable_conjunction(as_: &[Formula], b: &Formula) -> Option<Formula> {
    let parts: Vec<Formula> = as_.iter().map(|a| excluded_relative(a, b)).collect();
    Formula::conj_all(&parts)
}

/// Proves `(⋀ᵢ (Aᵢ ∨ (Aᵢ → B)) → B) → B` inside `pb`.
pub(crate) fn stable_conjunction_proof(
    pb: &mut ProofBuilder,
    as_: &[Formula],
    b: &Formula,
) -> Result<Fact, BuildError> {
    let (last, init) = as_.split_last().ok_or(BuildError::Empty)?;
    let mut acc = stable_disjunct(pb, last, b)?;
    for a in init.iter().rev() {
        let k = stable_disjunct(pb, a, b)?;
        acc = stable_pair(pb, k, acc, b)?;
    }
    Ok(acc)
}

/// Derivation of `((A ∨ (A → B)) → B) ↔ B` from `Ax0` instances.
pub fn lemma26(a: &Formula, b: &Formula) -> Derivation {
    let mut pb = ProofBuilder::new();
    let run = |pb: &mut ProofBuilder| -> Result<Fact, BuildError> {
        let fwd = stable_disjunct(pb, a, b)?;
        let d = excluded_relative(a, b);
        let bwd = pb.assume(b.clone(), |pb, y| pb.assume(d, |_, _| Ok(y)))?;
        pb.and_intro(fwd, bwd)
    };
    let c = run(&mut pb).expect("schema is well formed");
    pb.finish(c).expect("no open hypotheses")
}

/// Derivation of `(⋀ᵢ (Aᵢ ∨ (Aᵢ → B)) → B) → B` from `Ax0` instances. The
/// conjunction is right-nested in the order of `as_`.
pub fn lemma27(as_: &[Formula], b: &Formula) -> Result<Derivation, BuildError> {
    let mut pb = ProofBuilder::new();
    let c = stable_conjunction_proof(&mut pb, as_, b)?;
    pb.finish(c)
}

/// Proves `C → C'` and `C' → C`, where `C'` is `c` with the subtrees at
/// `paths` replaced. `eq` holds the facts `A → B` and `B → A`.
fn replacement_pair(
    pb: &mut ProofBuilder,
    c: &Formula,
    paths: &[&[u8]],
    prefix: &mut Vec<u8>,
    target: &Formula,
    replacement: &Formula,
    eq: (Fact, Fact),
) -> Result<(Fact, Fact, Formula), BuildError> {
    if paths.is_empty() {
        let id = pb.identity(c)?;
        return Ok((id, id, c.clone()));
    }
    if paths.iter().any(|p| p.is_empty()) {
        if c != target {
            return Err(BuildError::WrongTarget);
        }
        return Ok((eq.0, eq.1, replacement.clone()));
    }
    let arity = c.children().count();
    if paths.iter().any(|p| p[0] as usize >= arity) {
        return Err(BuildError::WrongTarget);
    }
    let mut kids = Vec::new();
    for (i, child) in c.children().enumerate() {
        let sub: Vec<&[u8]> = paths.iter().filter(|p| p[0] as usize == i).map(|p| &p[1..]).collect();
        prefix.push(i as u8);
        if !sub.is_empty() && c.is_box() {
            return Err(BuildError::OccurrenceInBox(prefix.clone()));
        }
        kids.push(replacement_pair(pb, child, &sub, prefix, target, replacement, eq)?);
        prefix.pop();
    }
    match c {
        Formula::Neg(x) => {
            let (f, g, x2) = kids.pop().expect("one child");
            let x = (**x).clone();
            let fwd = negation_step(pb, &x, &x2, g)?;
            let bwd = negation_step(pb, &x2, &x, f)?;
            Ok((fwd, bwd, Formula::neg(x2)))
        }
        Formula::Conj(l, r) => {
            let (fr, gr, r2) = kids.pop().expect("two children");
            let (fl, gl, l2) = kids.pop().expect("two children");
            let fwd = conj_step(pb, (**l).clone(), (**r).clone(), fl, fr)?;
            let bwd = conj_step(pb, l2.clone(), r2.clone(), gl, gr)?;
            Ok((fwd, bwd, Formula::conj(l2, r2)))
        }
        Formula::Disj(l, r) => {
            let (fr, gr, r2) = kids.pop().expect("two children");
            let (fl, gl, l2) = kids.pop().expect("two children");
            let fwd = disj_step(pb, (**l).clone(), (**r).clone(), &l2, &r2, fl, fr)?;
            let bwd = disj_step(pb, l2.clone(), r2.clone(), l, r, gl, gr)?;
            Ok((fwd, bwd, Formula::disj(l2, r2)))
        }
        Formula::Impl(l, r) => {
            let (fr, gr, r2) = kids.pop().expect("two children");
            let (fl, gl, l2) = kids.pop().expect("two children");
            let fwd = impl_step(pb, Formula::imp((**l).clone(), (**r).clone()), l2.clone(), gl, fr)?;
            let bwd = impl_step(pb, Formula::imp(l2.clone(), r2.clone()), (**l).clone(), fl, gr)?;
            Ok((fwd, bwd, Formula::imp(l2, r2)))
        }
        Formula::Var(_) | Formula::Box(_) => Err(BuildError::WrongTarget),
    }
}

/// `¬X → ¬Y` from `Y → X`.
fn negation_step(pb: &mut ProofBuilder, x: &Formula, y: &Formula, y_to_x: Fact) -> Result<Fact, BuildError> {
    pb.assume(Formula::neg(x.clone()), |pb, n| {
        let nx = Formula::neg(x.clone());
        let ax = pb.axiom_with(AxiomId::Ax0_7, &[y, x]);
        let t = pb.mp(y_to_x, ax)?;
        let w = pb.assume(y.clone(), |_, _| Ok(n))?;
        debug_assert_eq!(pb.formula(w), &Formula::imp(y.clone(), nx));
        pb.mp(w, t)
    })
}

/// `L ∧ R → L' ∧ R'` from `L → L'` and `R → R'`.
fn conj_step(pb: &mut ProofBuilder, l: Formula, r: Formula, fl: Fact, fr: Fact) -> Result<Fact, BuildError> {
    pb.assume(Formula::conj(l, r), |pb, h| {
        let a = pb.and_left(h)?;
        let a = pb.mp(a, fl)?;
        let b = pb.and_right(h)?;
        let b = pb.mp(b, fr)?;
        pb.and_intro(a, b)
    })
}

/// `L ∨ R → L' ∨ R'` from `L → L'` and `R → R'`.
fn disj_step(
    pb: &mut ProofBuilder,
    l: Formula,
    r: Formula,
    l2: &Formula,
    r2: &Formula,
    fl: Fact,
    fr: Fact,
) -> Result<Fact, BuildError> {
    let left = pb.assume(l.clone(), |pb, x| {
        let y = pb.mp(x, fl)?;
        pb.or_left(y, r2)
    })?;
    let right = pb.assume(r.clone(), |pb, x| {
        let y = pb.mp(x, fr)?;
        pb.or_right(l2, y)
    })?;
    pb.assume(Formula::disj(l, r), |pb, h| pb.or_elim(h, left, right))
}

/// `(L → R) → (L' → R')` from `L' → L` and `R → R'`.
fn impl_step(pb: &mut ProofBuilder, lr: Formula, l2: Formula, back: Fact, fr: Fact) -> Result<Fact, BuildError> {
    pb.assume(lr, |pb, h| {
        pb.assume(l2, |pb, x| {
            let y = pb.mp(x, back)?;
            let z = pb.mp(y, h)?;
            pb.mp(z, fr)
        })
    })
}

/// Derivation of `(A ↔ B) → (C ↔ C[occ:B])` from `Ax0` instances. No
/// addressed occurrence may lie inside a `□`-subformula of `C`.
pub fn replacement_derivation(
    a: &Formula,
    b: &Formula,
    c: &Formula,
    occ: &OccurrenceSet,
) -> Result<Derivation, BuildError> {
    occ.check(c)?;
    let mut pb = ProofBuilder::new();
    let paths: Vec<&[u8]> = occ.positions.iter().map(Vec::as_slice).collect();
    let concl = pb.assume(Formula::iff(a.clone(), b.clone()), |pb, h| {
        let ab = pb.and_left(h)?;
        let ba = pb.and_right(h)?;
        let (f, g, _) = replacement_pair(pb, c, &paths, &mut Vec::new(), a, b, (ab, ba))?;
        pb.and_intro(f, g)
    })?;
    let d = pb.finish(concl)?;
    debug_assert_eq!(
        d.conclusion(),
        Some(&Formula::imp(
            Formula::iff(a.clone(), b.clone()),
            Formula::iff(c.clone(), c.replace_at(occ, b)?)
        ))
    );
    Ok(d)
}

/// A KM derivation of the base formula of `id`, for every axiom that a
/// supported sublogic may use. KM axioms certify themselves.
pub fn km_certificate(id: AxiomId) -> Option<Derivation> {
    if id != AxiomId::MHC_K {
        let mut d = Derivation::default();
        d.push_axiom(id, Default::default());
        return Some(d);
    }
    let p = Formula::var(0);
    let q = Formula::var(1);
    let bq = Formula::boxed(q.clone());
    let pq = Formula::imp(p.clone(), q.clone());
    let mut pb = ProofBuilder::new();
    let run = |pb: &mut ProofBuilder| -> Result<Fact, BuildError> {
        pb.assume(Formula::boxed(pq.clone()), |pb, k1| {
            pb.assume(Formula::boxed(p.clone()), |pb, k2| {
                // □p → (□q ∨ (□q → p)) and □(p→q) → (□q ∨ (□q → (p → q)))
                let a1 = pb.axiom_with(AxiomId::Ax3, &[&p, &bq]);
                let d1 = pb.mp(k2, a1)?;
                let a2 = pb.axiom_with(AxiomId::Ax3, &[&pq, &bq]);
                let d2 = pb.mp(k1, a2)?;
                let id = pb.identity(&bq)?;
                let from_bq_p = pb.assume(Formula::imp(bq.clone(), p.clone()), |pb, e1| {
                    let from_bq_pq = pb.assume(Formula::imp(bq.clone(), pq.clone()), |pb, e2| {
                        let bq_to_q = pb.assume(bq.clone(), |pb, x| {
                            let pf = pb.mp(x, e1)?;
                            let pqf = pb.mp(x, e2)?;
                            pb.mp(pf, pqf)
                        })?;
                        let lob = pb.axiom_with(AxiomId::Ax2, &[&q]);
                        let qf = pb.mp(bq_to_q, lob)?;
                        let nec = pb.axiom_with(AxiomId::Ax1, &[&q]);
                        pb.mp(qf, nec)
                    })?;
                    pb.or_elim(d2, id, from_bq_pq)
                })?;
                pb.or_elim(d1, id, from_bq_p)
            })
        })
    };
    let c = run(&mut pb).expect("certificate is well formed");
    let d = pb.finish(c).expect("no open hypotheses");
    debug_assert_eq!(d.conclusion(), Some(&AxiomId::MHC_K.base()));
    Some(d)
}

/// `γ → δ` for the □-elimination step, where `δ` is `𝟏` when `betas` is
/// empty and the stable conjunction over `betas` and `γ` otherwise.
pub(crate) fn gamma_implies_delta(gamma: &Formula, betas: &[Formula]) -> Result<Derivation, BuildError> {
    let mut pb = ProofBuilder::new();
    let c = if betas.is_empty() {
        let id = pb.identity(&Formula::var(0))?;
        pb.assume(gamma.clone(), |_, _| Ok(id))?
    } else {
        pb.assume(gamma.clone(), |pb, g| {
            let mut parts = Vec::new();
            for beta in betas {
                let f = pb.assume(beta.clone(), |_, _| Ok(g))?;
                parts.push(pb.or_right(beta, f)?);
            }
            let mut acc = parts.pop().expect("nonempty");
            while let Some(prev) = parts.pop() {
                acc = pb.and_intro(prev, acc)?;
            }
            Ok(acc)
        })?
    };
    pb.finish(c)
}

/// `δ → (βⱼ* ∨ (βⱼ* → γ))` for the □-elimination step.
///
/// `betas` are the `βⱼ[□γ:𝟏]`, `occ` the positions in `betas[j]` where `𝟏`
/// replaced `□γ`; `δ` is the stable conjunction over `betas` and `gamma`.
pub(crate) fn conclude_conjunct_replacement(
    gamma: &Formula,
    betas: &[Formula],
    j: usize,
    occ: &OccurrenceSet,
) -> Result<Derivation, BuildError> {
    let delta = stable_conjunction(betas, gamma).ok_or(BuildError::Empty)?;
    let one = Formula::one();
    let conjunct = excluded_relative(&betas[j], gamma);
    let in_conjunct = OccurrenceSet::from_paths(
        occ.under(&[0])
            .positions
            .into_iter()
            .chain(occ.under(&[1, 0]).positions),
    );
    let paths: Vec<&[u8]> = in_conjunct.positions.iter().map(Vec::as_slice).collect();
    let mut pb = ProofBuilder::new();
    let id = pb.identity(&Formula::var(0))?;
    let c = pb.assume(delta.clone(), |pb, d| {
        let mut cur = d;
        for _ in 0..j {
            cur = pb.and_right(cur)?;
        }
        if j + 1 < betas.len() {
            cur = pb.and_left(cur)?;
        }
        let one_to_delta = pb.assume(one.clone(), |_, _| Ok(d))?;
        let delta_to_one = pb.assume(delta.clone(), |_, _| Ok(id))?;
        let (fwd, _, _) = replacement_pair(
            pb,
            &conjunct,
            &paths,
            &mut Vec::new(),
            &one,
            &delta,
            (one_to_delta, delta_to_one),
        )?;
        pb.mp(cur, fwd)
    })?;
    pb.finish(c)
}
