use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::calculus::AxiomId;

fn f(s: &str) -> Formula {
    s.parse().unwrap()
}

fn chain(n: usize) -> Vec<Vec<bool>> {
    (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect()
}

fn antichain(n: usize) -> Vec<Vec<bool>> {
    (0..n).map(|a| (0..n).map(|b| a == b).collect()).collect()
}

fn val(pairs: &[(u32, usize)]) -> Valuation {
    pairs.iter().copied().collect()
}

/// Heyting algebras of size at most `max`, from posets of at most 4 points.
fn small_algebras(max: usize) -> Vec<FiniteHeytingAlgebra> {
    (0..=4)
        .flat_map(posets)
        .map(|p| FiniteHeytingAlgebra::upsets(&p).unwrap())
        .filter(|a| a.size() <= max)
        .collect()
}

#[test]
fn upset_sizes() {
    assert_eq!(FiniteHeytingAlgebra::upsets(&chain(1)).unwrap().size(), 2);
    assert_eq!(FiniteHeytingAlgebra::upsets(&chain(2)).unwrap().size(), 3);
    assert_eq!(FiniteHeytingAlgebra::upsets(&antichain(2)).unwrap().size(), 4);
    assert_eq!(FiniteHeytingAlgebra::upsets(&chain(3)).unwrap().size(), 4);
    assert_eq!(FiniteHeytingAlgebra::upsets(&antichain(4)).unwrap().size(), 16);
    assert_eq!(FiniteHeytingAlgebra::upsets(&[]).unwrap().size(), 1);
}

#[test]
fn chain_matches_goedel_oracle() {
    for n in 1..5 {
        let alg = FiniteHeytingAlgebra::upsets(&chain(n)).unwrap();
        let m = n + 1;
        for a in 0..m {
            for b in 0..m {
                assert_eq!(alg.meet(a, b), a.min(b));
                assert_eq!(alg.join(a, b), a.max(b));
                assert_eq!(alg.imp(a, b), if a <= b { m - 1 } else { b });
            }
        }
    }
}

#[test]
fn boolean_matches_bitmask_oracle() {
    // 2-antichain: upsets are all subsets; down-set sizes order ∅, {0}, {1}, {0,1}
    let alg = FiniteHeytingAlgebra::upsets(&antichain(2)).unwrap();
    let mask = [0b00u8, 0b01, 0b10, 0b11];
    let idx = |m: u8| mask.iter().position(|x| *x == m).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(alg.meet(a, b), idx(mask[a] & mask[b]));
            assert_eq!(alg.join(a, b), idx(mask[a] | mask[b]));
            assert_eq!(alg.imp(a, b), idx((!mask[a] | mask[b]) & 0b11));
        }
        assert_eq!(alg.neg(a), idx(!mask[a] & 0b11));
    }
}

#[test]
fn residuation_holds() {
    for alg in small_algebras(16) {
        let n = alg.size();
        for a in 0..n {
            for b in 0..n {
                for x in 0..n {
                    assert_eq!(alg.leq(alg.meet(a, x), b), alg.leq(x, alg.imp(a, b)));
                }
            }
        }
    }
}

#[test]
fn from_order_renumbers() {
    // diamond given with top first
    let rows = vec![
        vec![true, false, false, false],
        vec![true, true, false, false],
        vec![true, false, true, false],
        vec![true, true, true, true],
    ];
    let (alg, new_index) = FiniteHeytingAlgebra::from_order(&rows).unwrap();
    assert_eq!(new_index, vec![3, 1, 2, 0]);
    assert_eq!(alg, FiniteHeytingAlgebra::upsets(&antichain(2)).unwrap());
}

#[test]
fn from_order_errors() {
    assert_eq!(
        FiniteHeytingAlgebra::from_order(&antichain(2)).unwrap_err(),
        AlgebraError::NotLattice
    );
    // M3: bottom, three atoms, top
    let mut m3 = vec![vec![false; 5]; 5];
    #[allow(clippy::needless_range_loop)]
    for a in 0..5 {
        m3[a][a] = true;
        m3[0][a] = true;
        m3[a][4] = true;
    }
    assert_eq!(
        FiniteHeytingAlgebra::from_order(&m3).unwrap_err(),
        AlgebraError::NotDistributive
    );
    let cyc = vec![vec![true, true], vec![true, true]];
    assert_eq!(
        FiniteHeytingAlgebra::from_order(&cyc).unwrap_err(),
        AlgebraError::NotPartialOrder
    );
    assert_eq!(
        FiniteHeytingAlgebra::from_order(&[vec![true, true]]).unwrap_err(),
        AlgebraError::NotSquare
    );
    assert_eq!(FiniteHeytingAlgebra::from_order(&[]).unwrap_err(), AlgebraError::Empty);
}

#[test]
fn evaluate_examples() {
    let c3 = FiniteHeytingAlgebra::upsets(&chain(2)).unwrap();
    for x in 0..3 {
        assert_eq!(c3.evaluate(&f("p0 -> p0"), None, &val(&[(0, x)])).unwrap(), 2);
    }
    assert_eq!(c3.evaluate(&f("p0 | ~p0"), None, &val(&[(0, 1)])).unwrap(), 1);
    let id = BoxTable(vec![0, 1, 2]);
    assert_eq!(c3.evaluate(&f("[]p0"), Some(&id), &val(&[(0, 1)])).unwrap(), 1);
    assert_eq!(
        c3.evaluate(&f("[]p0"), None, &val(&[(0, 1)])),
        Err(AlgebraError::MissingBox)
    );
    assert_eq!(
        c3.evaluate(&f("p1"), None, &val(&[(0, 1)])),
        Err(AlgebraError::Unassigned(1))
    );
}

#[test]
fn ax0_valid_on_small_algebras() {
    let algs = small_algebras(5);
    assert!(algs.len() >= 8);
    for alg in &algs {
        for id in AxiomId::AX0 {
            assert!(alg.validates(&id.base(), None).unwrap(), "{id} on size {}", alg.size());
        }
    }
}

#[test]
fn excluded_middle_fails_on_three_chain() {
    let c3 = FiniteHeytingAlgebra::upsets(&chain(2)).unwrap();
    assert_eq!(c3.falsify(&f("p0 | ~p0"), None).unwrap(), Some(val(&[(0, 1)])));
    let b4 = FiniteHeytingAlgebra::upsets(&antichain(2)).unwrap();
    assert!(b4.validates(&f("p0 | ~p0"), None).unwrap());
}

#[test]
fn identity_classification() {
    let b2 = FiniteHeytingAlgebra::upsets(&chain(1)).unwrap();
    assert_eq!(b2.box_identities(&BoxTable(vec![1, 1])).unwrap(), BoxIdentity::km());
    let c3 = FiniteHeytingAlgebra::upsets(&chain(2)).unwrap();
    let ids = c3.box_identities(&BoxTable(vec![0, 1, 2])).unwrap();
    assert!(ids.contains(&BoxIdentity::I) && ids.contains(&BoxIdentity::II));
    // x ≤ y ∨ (y → x) always, so the identity map satisfies (iii); (iv) fails at the bottom
    assert!(ids.contains(&BoxIdentity::III));
    assert!(!ids.contains(&BoxIdentity::IV));
    let down = c3.box_identities(&BoxTable(vec![0, 1, 0])).unwrap();
    assert!(!down.contains(&BoxIdentity::II));
    assert_eq!(
        c3.box_identities(&BoxTable(vec![0, 1])),
        Err(AlgebraError::BoxSize { expected: 3, found: 2 })
    );
}

#[test]
fn ax2_valid_under_canonical_box_on_three_chain() {
    let c3 = FiniteHeytingAlgebra::upsets(&chain(2)).unwrap();
    let cb = c3.canonical_box();
    assert_eq!(cb, BoxTable(vec![1, 2, 2]));
    assert!(c3.validates(&AxiomId::Ax2.base(), Some(&cb)).unwrap());
}

#[test]
fn canonical_box_top_and_classification() {
    for alg in small_algebras(16) {
        let cb = alg.canonical_box();
        assert_eq!(cb.0[alg.top()], alg.top());
        let ids = alg.box_identities(&cb).unwrap();
        // (ii) and (iii) hold by construction
        assert!(ids.contains(&BoxIdentity::II) && ids.contains(&BoxIdentity::III));
        let km = alg.search_boxes(&BoxIdentity::km(), DEFAULT_SEARCH_LIMIT).unwrap();
        assert_eq!(ids == BoxIdentity::km(), km.contains(&cb));
    }
}

#[test]
fn search_counts() {
    let b2 = FiniteHeytingAlgebra::upsets(&chain(1)).unwrap();
    assert_eq!(b2.search_boxes(&BTreeSet::new(), 100).unwrap().len(), 4);
    assert_eq!(
        b2.search_boxes(&BoxIdentity::km(), 100).unwrap(),
        vec![BoxTable(vec![1, 1])]
    );
    let c3 = FiniteHeytingAlgebra::upsets(&chain(2)).unwrap();
    let all = c3.search_boxes(&BTreeSet::new(), 1000).unwrap();
    assert_eq!(all.len(), 27);
    assert!(all.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(
        c3.search_boxes(&BTreeSet::new(), 10),
        Err(AlgebraError::SearchLimit(10))
    );
}

#[test]
fn search_agrees_with_brute_force() {
    for alg in small_algebras(5) {
        let n = alg.size();
        let mut tables = Vec::new();
        let mut t = vec![0usize; n];
        'outer: loop {
            tables.push(BoxTable(t.clone()));
            for k in (0..n).rev() {
                t[k] += 1;
                if t[k] < n {
                    continue 'outer;
                }
                t[k] = 0;
            }
            break;
        }
        for req in [
            BTreeSet::new(),
            BoxIdentity::mhc(),
            BoxIdentity::km(),
            [BoxIdentity::I].into_iter().collect(),
        ] {
            let brute: Vec<BoxTable> = tables
                .iter()
                .filter(|t| req.is_subset(&alg.box_identities(t).unwrap()))
                .cloned()
                .collect();
            assert_eq!(alg.search_boxes(&req, DEFAULT_SEARCH_LIMIT).unwrap(), brute);
        }
    }
}

#[test]
fn km_boxes_validate_km_axioms() {
    for alg in small_algebras(5) {
        for t in alg.search_boxes(&BoxIdentity::km(), DEFAULT_SEARCH_LIMIT).unwrap() {
            for id in [AxiomId::Ax1, AxiomId::Ax2, AxiomId::Ax3, AxiomId::MHC_K] {
                assert!(alg.validates(&id.base(), Some(&t)).unwrap(), "{id} {t:?}");
            }
        }
    }
}

#[test]
fn poset_counts() {
    let counts: Vec<usize> = (0..=4).map(|n| posets(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 5, 16]);
}

#[test]
fn validity_is_isomorphism_invariant() {
    // the 4-element Boolean algebra, presented with two numberings
    let a = FiniteHeytingAlgebra::upsets(&antichain(2)).unwrap();
    let rows = vec![
        vec![true, true, true, true],
        vec![false, true, false, true],
        vec![false, false, true, true],
        vec![false, false, false, true],
    ];
    let (b, _) = FiniteHeytingAlgebra::from_order(&rows).unwrap();
    for s in [
        "p0 | ~p0",
        "~~p0 -> p0",
        "(p0 -> p1) | (p1 -> p0)",
        "p0 -> p1",
        "((p0 -> p1) -> p0) -> p0",
    ] {
        assert_eq!(
            a.validates(&f(s), None).unwrap(),
            b.validates(&f(s), None).unwrap(),
            "{s}"
        );
    }
    let c3 = FiniteHeytingAlgebra::upsets(&chain(2)).unwrap();
    let (c3b, _) = FiniteHeytingAlgebra::from_order(&[
        vec![true, false, false],
        vec![true, true, true],
        vec![true, false, true],
    ])
    .unwrap();
    assert_eq!(c3, c3b);
}

#[test]
fn refute_excluded_middle() {
    let r = refutes(&[], &f("p0 | ~p0"), 2).unwrap().unwrap();
    assert_eq!(r.algebra, FiniteHeytingAlgebra::upsets(&chain(2)).unwrap());
    assert_eq!(r.valuation, val(&[(0, 1)]));
    assert_eq!(refutes(&[], &f("p0 | ~p0"), 1).unwrap(), None);
    assert_eq!(refutes(&[], &f("p0 -> p0"), 3).unwrap(), None);
}

#[test]
fn refute_with_premises() {
    // p0 valid as an identity only in the 1-element algebra, where nothing fails
    assert_eq!(refutes(&[f("p0")], &f("p1"), 3).unwrap(), None);
    // the only KM box on the 2-element algebra is constant top, so □p0 → p0 fails at the bottom
    let r = refutes(&[], &f("[]p0 -> p0"), 1).unwrap().unwrap();
    assert_eq!(r.box_table, Some(BoxTable(vec![1, 1])));
    // p1 ∨ (p1 → p0) follows from p0
    assert_eq!(refutes(&[f("p0")], &f("p1 | (p1 -> p0)"), 3).unwrap(), None);
    // (p0 → p1) ∨ (p1 → p0) holds on chains and Boolean algebras
    let r = refutes(&[], &f("(p0 -> p1) | (p1 -> p0)"), 3).unwrap().unwrap();
    assert!(r.algebra.size() >= 5);
}
