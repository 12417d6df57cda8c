//! Generic finite-group machinery over concrete elements.
//!
//! A [`FiniteGroup`] is always materialized: its element set is computed once
//! by breadth-first closure from the generators and never changes afterwards,
//! so it can be shared freely between threads. Elements carry their own
//! multiplication ([`Element`]); the group stores them in insertion order with
//! a hash index.

mod bitset;
mod classify;
mod conj;
mod element;
pub mod families;
mod normal;
pub mod action;
mod sylow;

use std::fmt::Debug;
use std::hash::Hash;

use indexmap::IndexSet;
use rustc_hash::FxBuildHasher;

use crate::error::{Error, Result};

pub use bitset::Bitset;
pub use classify::{classify_quaternion_structure, QuaternionStructure};
pub use conj::{
    centralizer, conj_class, conjugacy_classes, involutions, is_normal_in, normalizer,
    subgroup_conjugates,
};
pub(crate) use conj::orbit_under_conjugation as conj_orbit;
pub use element::{GroupElement, WreathPair};
pub use normal::{fitting, is_nilpotent, normal_subgroups, odd_core, quotient, Homomorphism};
pub use sylow::{is_cyclic, is_generalized_quaternion, sylow_two, two_rank};

/// Default maximum number of elements a closure may materialize.
pub const DEFAULT_CLOSURE_CAP: usize = 5_000_000;

/// Default maximum group order for normal-subgroup enumeration.
pub const DEFAULT_NORMAL_CAP: usize = 10_000;

/// Group elements with an intrinsic multiplication.
pub trait Element: Clone + Eq + Hash + Ord + Debug + Send + Sync {
    /// The product `self · other`.
    fn op(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    /// Identity of the group this element lives in.
    fn identity_like(&self) -> Self;
    fn is_identity(&self) -> bool;
    /// Whether the two elements can be multiplied together.
    fn compatible(&self, other: &Self) -> bool;

    /// `by⁻¹ · self · by`.
    fn conj(&self, by: &Self) -> Self {
        by.inv().op(self).op(by)
    }

    fn is_involution(&self) -> bool {
        !self.is_identity() && self.op(self).is_identity()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.identity_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.op(&base);
            }
            base = base.op(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order by repeated multiplication.
    fn order(&self) -> u64 {
        let mut k = 1;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = cur.op(self);
            k += 1;
        }
        k
    }
}

type ElementSet<E> = IndexSet<E, FxBuildHasher>;

/// A finite group given by generators together with its full element set.
#[derive(Clone)]
pub struct FiniteGroup<E: Element> {
    generators: Vec<E>,
    elements: ElementSet<E>,
}

impl<E: Element> Debug for FiniteGroup<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// Breadth-first closure of `generators` under multiplication.
///
/// Generators are sorted and deduplicated first so the element order is
/// deterministic. Fails with a resource-limit error carrying the partial count
/// once more than `cap` elements appear.
pub fn closure<E: Element>(generators: &[E], cap: usize) -> Result<FiniteGroup<E>> {
    let first = generators
        .first()
        .ok_or_else(|| Error::invalid("closure needs at least one generator"))?;
    if generators.iter().any(|g| !g.compatible(first)) {
        return Err(Error::invalid("generators have different shapes"));
    }
    let mut gens: Vec<E> = generators.to_vec();
    gens.sort();
    gens.dedup();
    let identity = first.identity_like();
    gens.retain(|g| !g.is_identity());

    let mut elements = ElementSet::default();
    elements.insert(identity);
    let mut next = 0;
    while next < elements.len() {
        let x = elements[next].clone();
        for s in &gens {
            let y = x.op(s);
            if !elements.contains(&y) {
                if elements.len() >= cap {
                    return Err(Error::resource("group closure", cap, elements.len()));
                }
                elements.insert(y);
            }
        }
        next += 1;
    }
    Ok(FiniteGroup {
        generators: gens,
        elements,
    })
}

impl<E: Element> FiniteGroup<E> {
    /// The trivial group containing only `identity`.
    pub fn trivial(identity: E) -> Self {
        let mut elements = ElementSet::default();
        elements.insert(identity);
        FiniteGroup {
            generators: Vec::new(),
            elements,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = &E> + '_ {
        self.elements.iter()
    }

    pub fn element(&self, index: usize) -> &E {
        &self.elements[index]
    }

    pub fn identity(&self) -> &E {
        &self.elements[0]
    }

    pub fn contains(&self, g: &E) -> bool {
        self.elements.contains(g)
    }

    pub fn index_of(&self, g: &E) -> Option<usize> {
        self.elements.get_index_of(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.op(b) == b.op(a)))
    }

    pub fn is_subgroup_of(&self, other: &FiniteGroup<E>) -> bool {
        self.order() <= other.order()
            && other.order() % self.order() == 0
            && self.generators.iter().all(|g| other.contains(g))
    }

    /// Same element set, regardless of generators.
    pub fn same_elements(&self, other: &FiniteGroup<E>) -> bool {
        self.order() == other.order() && self.elements.iter().all(|g| other.contains(g))
    }

    /// Sorted element list; a canonical key for the subgroup.
    pub fn sorted_elements(&self) -> Vec<E> {
        let mut v: Vec<E> = self.elements.iter().cloned().collect();
        v.sort();
        v
    }

    /// `<self, extra>`, grown coset by coset from the current element set.
    pub fn extend(&self, extra: &[E], cap: usize) -> Result<FiniteGroup<E>> {
        let mut gens = self.generators.clone();
        let mut elements = self.elements.clone();
        for x in extra {
            if elements.contains(x) {
                continue;
            }
            gens.push(x.clone());
            // The current set is a subgroup S; add right cosets S·r until
            // closed under right multiplication by every generator.
            let base: Vec<E> = elements.iter().cloned().collect();
            let mut reps = vec![elements[0].clone()];
            let mut r = 0;
            while r < reps.len() {
                let rep = reps[r].clone();
                for s in &gens {
                    let y = rep.op(s);
                    if !elements.contains(&y) {
                        if elements.len() + base.len() > cap {
                            return Err(Error::resource("group closure", cap, elements.len()));
                        }
                        for b in &base {
                            elements.insert(b.op(&y));
                        }
                        reps.push(y);
                    }
                }
                r += 1;
            }
        }
        gens.sort();
        gens.dedup();
        Ok(FiniteGroup {
            generators: gens,
            elements,
        })
    }

    /// Wraps a set of elements already known to form a subgroup, choosing a
    /// small generating set greedily.
    pub fn from_subgroup_elements(identity: E, members: &[E]) -> FiniteGroup<E> {
        let mut group = FiniteGroup::trivial(identity);
        for m in members {
            if !group.contains(m) {
                group = group
                    .extend(std::slice::from_ref(m), usize::MAX)
                    .expect("uncapped extension");
            }
        }
        group
    }

    /// Subgroup of `self` formed by the elements at the given indices.
    pub fn subgroup_from_indices(&self, indices: impl IntoIterator<Item = usize>) -> FiniteGroup<E> {
        let members: Vec<E> = indices.into_iter().map(|i| self.elements[i].clone()).collect();
        FiniteGroup::from_subgroup_elements(self.identity().clone(), &members)
    }

    /// Subgroup of `self` generated by `gens`.
    pub fn subgroup(&self, gens: &[E]) -> FiniteGroup<E> {
        FiniteGroup::trivial(self.identity().clone())
            .extend(gens, usize::MAX)
            .expect("uncapped extension")
    }

    /// Membership bitset of a subgroup relative to this group's indexing.
    pub fn bitset_of(&self, sub: &FiniteGroup<E>) -> Option<Bitset> {
        let mut bits = Bitset::new(self.order());
        for g in sub.elements() {
            bits.insert(self.index_of(g)?);
        }
        Some(bits)
    }

    /// Multiplicative orders of all elements, aligned with element indices.
    pub fn element_orders(&self) -> Vec<u64> {
        self.elements.iter().map(|g| g.order()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn s3() -> FiniteGroup<Perm> {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        closure(&[a, b], 100).unwrap()
    }

    #[test]
    fn closure_of_s3() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert!(g.identity().is_identity());
        assert!(!g.is_abelian());
    }

    #[test]
    fn closure_is_deterministic_and_capped() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let g1 = closure(&[a.clone(), b.clone()], 100).unwrap();
        let g2 = closure(&[b.clone(), a.clone()], 100).unwrap();
        assert!(g1.elements().eq(g2.elements()));
        match closure(&[a, b], 4) {
            Err(Error::ResourceLimit { partial, limit, .. }) => {
                assert_eq!(limit, 4);
                assert_eq!(partial, 4);
            }
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn closure_rejects_empty_and_mixed() {
        assert!(closure::<Perm>(&[], 10).is_err());
        let a = Perm::identity(3);
        let b = Perm::identity(4);
        assert!(closure(&[a, b], 10).is_err());
    }

    #[test]
    fn extend_matches_closure() {
        let a = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let full = closure(&[a.clone(), b.clone()], 100).unwrap();
        let partial = closure(&[a], 100).unwrap().extend(&[b], 100).unwrap();
        assert_eq!(full.order(), 24);
        assert!(full.same_elements(&partial));
    }

    #[test]
    fn from_subgroup_elements_recovers_group() {
        let g = s3();
        let members: Vec<Perm> = g.elements().cloned().collect();
        let h = FiniteGroup::from_subgroup_elements(Perm::identity(3), &members);
        assert!(h.same_elements(&g));
        assert!(h.generators().len() <= 2);
    }
}
