//! Permutation-group actions: orbits, stabilizers, block systems, and coset
//! actions.

use rustc_hash::FxHashMap;

use super::{closure, Element, FiniteGroup};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Orbits of `<gens>` on `0..degree`, each sorted, ordered by least point.
pub fn orbits(gens: &[Perm], degree: usize) -> Vec<Vec<u32>> {
    let mut seen = vec![false; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start as u32];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for s in gens {
                let y = s.apply(x) as usize;
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y as u32);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

pub fn degree(g: &FiniteGroup<Perm>) -> usize {
    g.identity().degree()
}

pub fn is_transitive(g: &FiniteGroup<Perm>) -> bool {
    orbits(g.generators(), degree(g)).len() == 1
}

/// Transitivity on a subset of points, which must be invariant.
pub fn is_transitive_on(g: &FiniteGroup<Perm>, points: &[u32]) -> bool {
    let Some(&first) = points.first() else {
        return true;
    };
    let orbit = orbits(g.generators(), degree(g))
        .into_iter()
        .find(|o| o.contains(&first))
        .expect("every point lies in an orbit");
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    orbit == sorted
}

/// `G_α`.
pub fn stabilizer(g: &FiniteGroup<Perm>, point: u32) -> FiniteGroup<Perm> {
    let members: Vec<Perm> = g.elements().filter(|x| x.apply(point) == point).cloned().collect();
    FiniteGroup::from_subgroup_elements(g.identity().clone(), &members)
}

/// Points fixed by every element of `k`.
pub fn fixed_points(k: &FiniteGroup<Perm>) -> Vec<u32> {
    (0..degree(k) as u32)
        .filter(|&x| k.generators().iter().all(|s| s.apply(x) == x))
        .collect()
}

/// The finest block system in which `0` and `b` share a block (Atkinson's
/// union-find closure). Returns the block label of every point.
pub fn minimal_block(gens: &[Perm], degree: usize, b: u32) -> Vec<u32> {
    let mut parent: Vec<u32> = (0..degree as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut pending = vec![(0u32, b)];
    while let Some((x, y)) = pending.pop() {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx == ry {
            continue;
        }
        parent[ry as usize] = rx;
        for s in gens {
            pending.push((s.apply(x), s.apply(y)));
        }
    }
    (0..degree as u32).map(|x| find(&mut parent, x)).collect()
}

/// Transitive and without nontrivial blocks.
pub fn is_primitive(g: &FiniteGroup<Perm>) -> bool {
    let n = degree(g);
    if !is_transitive(g) {
        return false;
    }
    (1..n as u32).all(|b| {
        let labels = minimal_block(g.generators(), n, b);
        labels.iter().all(|&l| l == labels[0])
    })
}

/// The permutation action of `G` on the right cosets `H x`, with the cosets
/// numbered in order of first appearance along `G`'s element order.
pub fn coset_action<E: Element>(g: &FiniteGroup<E>, h: &FiniteGroup<E>) -> Result<FiniteGroup<Perm>> {
    if !h.is_subgroup_of(g) {
        return Err(Error::invalid("not a subgroup"));
    }
    let mut label: FxHashMap<usize, u32> = FxHashMap::default();
    let mut reps: Vec<E> = Vec::new();
    for (i, x) in g.elements().enumerate() {
        if label.contains_key(&i) {
            continue;
        }
        let c = reps.len() as u32;
        for m in h.elements() {
            label.insert(g.index_of(&m.op(x)).expect("closed"), c);
        }
        reps.push(x.clone());
    }
    let gens: Vec<Perm> = g
        .generators()
        .iter()
        .map(|s| {
            let images = reps
                .iter()
                .map(|r| label[&g.index_of(&r.op(s)).expect("closed")])
                .collect();
            Perm::from_images(images).expect("cosets are permuted")
        })
        .collect();
    if gens.is_empty() {
        return Ok(FiniteGroup::trivial(Perm::identity(reps.len())));
    }
    closure(&gens, usize::MAX)
}
