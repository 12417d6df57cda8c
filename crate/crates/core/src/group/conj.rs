use indexmap::IndexSet;
use rustc_hash::{FxBuildHasher, FxHashSet};

use super::{Element, FiniteGroup};
use crate::error::{Error, Result};

fn require_member<E: Element>(h: &FiniteGroup<E>, g: &E) -> Result<()> {
    if h.contains(g) {
        Ok(())
    } else {
        Err(Error::invalid("element is not in the group"))
    }
}

/// `C_H(g)`.
pub fn centralizer<E: Element>(h: &FiniteGroup<E>, g: &E) -> Result<FiniteGroup<E>> {
    require_member(h, g)?;
    let members: Vec<E> = h.elements().filter(|x| x.op(g) == g.op(x)).cloned().collect();
    Ok(FiniteGroup::from_subgroup_elements(h.identity().clone(), &members))
}

/// The conjugacy class `g^H`, as the orbit of `g` under conjugation by the
/// generators of `H`.
pub fn conj_class<E: Element>(h: &FiniteGroup<E>, g: &E) -> Result<Vec<E>> {
    require_member(h, g)?;
    Ok(orbit_under_conjugation(h.generators(), g))
}

pub(crate) fn orbit_under_conjugation<E: Element>(gens: &[E], g: &E) -> Vec<E> {
    let mut orbit: IndexSet<E, FxBuildHasher> = IndexSet::default();
    orbit.insert(g.clone());
    let inverses: Vec<E> = gens.iter().map(|s| s.inv()).collect();
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i].clone();
        for (s, si) in gens.iter().zip(&inverses) {
            orbit.insert(si.op(&x).op(s));
        }
        i += 1;
    }
    orbit.into_iter().collect()
}

/// All conjugacy classes of `H`, as lists of element indices. Classes appear
/// in order of their smallest index; the identity class comes first.
pub fn conjugacy_classes<E: Element>(h: &FiniteGroup<E>) -> Vec<Vec<usize>> {
    let mut seen = vec![false; h.order()];
    let mut classes = Vec::new();
    for i in 0..h.order() {
        if seen[i] {
            continue;
        }
        let class: Vec<usize> = orbit_under_conjugation(h.generators(), h.element(i))
            .iter()
            .map(|x| h.index_of(x).expect("conjugates stay in the group"))
            .collect();
        for &j in &class {
            seen[j] = true;
        }
        classes.push(class);
    }
    classes
}

/// All elements of order exactly 2.
pub fn involutions<E: Element>(h: &FiniteGroup<E>) -> Vec<E> {
    h.elements().filter(|x| x.is_involution()).cloned().collect()
}

/// `N_H(K)` for a subgroup `K` of `H`.
pub fn normalizer<E: Element>(h: &FiniteGroup<E>, k: &FiniteGroup<E>) -> FiniteGroup<E> {
    let members: Vec<E> = h
        .elements()
        .filter(|x| k.generators().iter().all(|s| k.contains(&s.conj(x))))
        .cloned()
        .collect();
    FiniteGroup::from_subgroup_elements(h.identity().clone(), &members)
}

/// Whether `N` is a normal subgroup of `H`.
pub fn is_normal_in<E: Element>(n: &FiniteGroup<E>, h: &FiniteGroup<E>) -> bool {
    n.is_subgroup_of(h)
        && h
            .generators()
            .iter()
            .all(|x| n.generators().iter().all(|s| n.contains(&s.conj(x))))
}

/// The distinct conjugates `K^x` (`x ∈ H`), each as a sorted element list.
pub fn subgroup_conjugates<E: Element>(h: &FiniteGroup<E>, k: &FiniteGroup<E>) -> Vec<Vec<E>> {
    let mut seen: FxHashSet<Vec<E>> = FxHashSet::default();
    let mut out = Vec::new();
    for x in h.elements() {
        let mut conj: Vec<E> = k.elements().map(|y| y.conj(x)).collect();
        conj.sort();
        if seen.insert(conj.clone()) {
            out.push(conj);
        }
    }
    out.sort();
    out
}
