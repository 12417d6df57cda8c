use rustc_hash::FxHashSet;

use super::conj::involutions;
use super::{Bitset, Element, FiniteGroup};
use crate::error::{Error, Result};

/// A Sylow 2-subgroup of `H`, grown greedily: while `P` is not yet Sylow,
/// `N_H(P)/P` has even order, so some `x ∈ N_H(P) \ P` has `x² ∈ P` and
/// `<P, x>` is a 2-group of twice the order.
pub fn sylow_two<E: Element>(h: &FiniteGroup<E>) -> FiniteGroup<E> {
    let target = 1usize << h.order().trailing_zeros();
    let mut p = FiniteGroup::trivial(h.identity().clone());
    while p.order() < target {
        let x = h
            .elements()
            .find(|x| {
                !p.contains(x)
                    && p.contains(&x.op(x))
                    && p.generators().iter().all(|s| p.contains(&s.conj(x)))
            })
            .expect("a proper 2-subgroup has a normalizing 2-element outside it")
            .clone();
        p = p.extend(&[x], usize::MAX).expect("uncapped extension");
    }
    p
}

pub fn is_cyclic<E: Element>(g: &FiniteGroup<E>) -> bool {
    let n = g.order() as u64;
    g.elements().any(|x| x.order() == n)
}

fn require_two_group<E: Element>(p: &FiniteGroup<E>) -> Result<()> {
    if p.order().is_power_of_two() {
        Ok(())
    } else {
        Err(Error::invalid(format!("group of order {} is not a 2-group", p.order())))
    }
}

/// A 2-group with exactly one involution is cyclic or generalized quaternion;
/// this picks out the latter.
pub fn is_generalized_quaternion<E: Element>(p: &FiniteGroup<E>) -> Result<bool> {
    require_two_group(p)?;
    if p.order() < 8 {
        return Ok(false);
    }
    Ok(involutions(p).len() == 1 && !is_cyclic(p))
}

/// The 2-rank: largest `r` with an elementary abelian subgroup of order `2^r`.
/// Searched inside a Sylow 2-subgroup over sets of commuting involutions.
pub fn two_rank<E: Element>(h: &FiniteGroup<E>) -> u32 {
    let p = if h.order().is_power_of_two() {
        h.clone()
    } else {
        sylow_two(h)
    };
    let invols = involutions(&p);
    let n = invols.len();
    if n == 0 {
        return 0;
    }
    let commute: Vec<Bitset> = (0..n)
        .map(|i| {
            let mut row = Bitset::new(n);
            for j in 0..n {
                if i != j && invols[i].op(&invols[j]) == invols[j].op(&invols[i]) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let index: rustc_hash::FxHashMap<&E, usize> =
        invols.iter().enumerate().map(|(i, x)| (x, i)).collect();

    let mut search = RankSearch {
        invols: &invols,
        index: &index,
        commute: &commute,
        best: 1,
        seen: FxHashSet::default(),
    };
    let identity = p.identity().clone();
    for i in 0..n {
        let members = vec![identity.clone(), invols[i].clone()];
        search.grow(members, 1, commute[i].clone());
    }
    search.best
}

struct RankSearch<'a, E: Element> {
    invols: &'a [E],
    index: &'a rustc_hash::FxHashMap<&'a E, usize>,
    commute: &'a [Bitset],
    best: u32,
    seen: FxHashSet<Vec<usize>>,
}

impl<E: Element> RankSearch<'_, E> {
    /// `members` is an elementary abelian subgroup of rank `rank`;
    /// `candidates` holds involutions commuting with all of it.
    fn grow(&mut self, members: Vec<E>, rank: u32, candidates: Bitset) {
        let mut key: Vec<usize> = members[1..].iter().map(|x| self.index[x]).collect();
        key.sort_unstable();
        if !self.seen.insert(key) {
            return;
        }
        self.best = self.best.max(rank);
        let mut outside = candidates.clone();
        for x in &members[1..] {
            outside.remove(self.index[x]);
        }
        let remaining = outside.count();
        // Adding k more generators needs at least 2^k - 1 commuting involutions.
        if remaining == 0 || rank + (usize::BITS - remaining.leading_zeros()) <= self.best {
            return;
        }
        for j in outside.iter() {
            let x = &self.invols[j];
            let mut next = members.clone();
            next.extend(members.iter().map(|m| m.op(x)));
            let mut cand = candidates.clone();
            cand.intersect_with(&self.commute[j]);
            self.grow(next, rank + 1, cand);
        }
    }
}
