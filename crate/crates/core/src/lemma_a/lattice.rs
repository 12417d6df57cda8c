//! Multiplication tables and exhaustive subgroup lattices up to conjugacy.

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::group::{Bitset, Element, FiniteGroup};

/// Largest group for which a full multiplication table is built.
pub const TABLE_CAP: usize = 2500;

/// Full multiplication table of a materialized group, elements referred to
/// by their index in the group.
pub struct CayleyTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    orders: Vec<u64>,
    gens: Vec<u32>,
}

impl CayleyTable {
    pub fn new<E: Element>(g: &FiniteGroup<E>) -> Result<CayleyTable> {
        let n = g.order();
        if n > TABLE_CAP {
            return Err(Error::resource("multiplication table order", TABLE_CAP, n));
        }
        let elems: Vec<&E> = g.elements().collect();
        let mul: Vec<u32> = elems
            .par_iter()
            .flat_map_iter(|a| {
                elems
                    .iter()
                    .map(|b| g.index_of(&a.op(b)).expect("closed") as u32)
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut inv = vec![0u32; n];
        for i in 0..n {
            let j = (0..n).find(|&j| mul[i * n + j] == 0).expect("inverse exists");
            inv[i] = j as u32;
        }
        let gens = g
            .generators()
            .iter()
            .map(|s| g.index_of(s).expect("generator") as u32)
            .collect();
        Ok(CayleyTable {
            n,
            mul,
            inv,
            orders: g.element_orders(),
            gens,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// `by⁻¹ · x · by`.
    pub fn conj(&self, x: u32, by: u32) -> u32 {
        self.mul(self.mul(self.inv(by), x), by)
    }

    pub fn element_order(&self, a: u32) -> u64 {
        self.orders[a as usize]
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    /// The subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> Bitset {
        let mut set = Bitset::new(self.n);
        set.insert(0);
        let mut queue = vec![0u32];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for &s in gens {
                let y = self.mul(x, s);
                if set.insert(y as usize) {
                    queue.push(y);
                }
            }
            i += 1;
        }
        set
    }

    pub fn conj_set(&self, set: &Bitset, by: u32) -> Bitset {
        let mut out = Bitset::new(self.n);
        for x in set.iter() {
            out.insert(self.conj(x as u32, by) as usize);
        }
        out
    }

    /// Conjugates of `set` under the group generated by `by`.
    pub fn conj_orbit(&self, set: &Bitset, by: &[u32]) -> Vec<Bitset> {
        let mut seen: FxHashMap<Bitset, ()> = FxHashMap::default();
        seen.insert(set.clone(), ());
        let mut orbit = vec![set.clone()];
        let mut i = 0;
        while i < orbit.len() {
            for &s in by {
                let c = self.conj_set(&orbit[i], s);
                if seen.insert(c.clone(), ()).is_none() {
                    orbit.push(c);
                }
            }
            i += 1;
        }
        orbit
    }

    /// Conjugacy class of the element `x` under `<by>`.
    pub fn element_class(&self, x: u32, by: &[u32]) -> Vec<u32> {
        let mut seen = Bitset::new(self.n);
        seen.insert(x as usize);
        let mut orbit = vec![x];
        let mut i = 0;
        while i < orbit.len() {
            for &s in by {
                let y = self.conj(orbit[i], s);
                if seen.insert(y as usize) {
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit
    }
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub rep: Bitset,
    /// Generators of the representative, as element indices.
    pub gens: Vec<u32>,
    pub order: usize,
    /// Number of conjugates, `|G : N_G(H)|`.
    pub class_size: usize,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    pub classes: Vec<SubgroupClass>,
    pub truncated: bool,
}

impl Lattice {
    /// Total number of subgroups, counting every conjugate.
    pub fn subgroup_count(&self) -> usize {
        self.classes.iter().map(|c| c.class_size).sum()
    }
}

fn is_prime_power(mut n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if p * p > n {
        return true;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// All subgroups up to conjugacy. Every subgroup is generated by cyclic
/// subgroups of prime-power order, so joining each class representative with
/// each such cyclic subgroup (one per orbit of the representative) reaches
/// a conjugate of every subgroup. Stops early once `max_classes` is reached.
pub fn exhaustive_lattice(table: &CayleyTable, max_classes: usize) -> Lattice {
    let n = table.order();
    let mut cyclic: Vec<(u32, Bitset)> = Vec::new();
    let mut cyclic_index: FxHashMap<Bitset, usize> = FxHashMap::default();
    for x in 0..n as u32 {
        if !is_prime_power(table.element_order(x)) {
            continue;
        }
        let c = table.closure(&[x]);
        if !cyclic_index.contains_key(&c) {
            cyclic_index.insert(c.clone(), cyclic.len());
            cyclic.push((x, c));
        }
    }

    let mut known: FxHashMap<Bitset, usize> = FxHashMap::default();
    let mut classes: Vec<SubgroupClass> = Vec::new();
    let mut truncated = false;
    let register = |set: Bitset, gens: Vec<u32>, known: &mut FxHashMap<Bitset, usize>, classes: &mut Vec<SubgroupClass>| {
        let id = classes.len();
        let orbit = table.conj_orbit(&set, table.generators());
        let class_size = orbit.len();
        for c in orbit {
            known.insert(c, id);
        }
        classes.push(SubgroupClass {
            order: set.count(),
            rep: set,
            gens,
            class_size,
        });
    };
    register(table.closure(&[]), Vec::new(), &mut known, &mut classes);

    let mut next = 0;
    'classes: while next < classes.len() {
        let rep = classes[next].rep.clone();
        let gens = classes[next].gens.clone();
        next += 1;
        let mut done = vec![false; cyclic.len()];
        for (cid, (x, cset)) in cyclic.iter().enumerate() {
            if done[cid] {
                continue;
            }
            for c in table.conj_orbit(cset, &gens) {
                done[cyclic_index[&c]] = true;
            }
            if rep.contains(*x as usize) {
                continue;
            }
            let mut join_gens = gens.clone();
            join_gens.push(*x);
            let join = table.closure(&join_gens);
            if !known.contains_key(&join) {
                if classes.len() >= max_classes {
                    truncated = true;
                    break 'classes;
                }
                register(join, join_gens, &mut known, &mut classes);
            }
        }
    }
    classes.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.rep.cmp(&b.rep)));
    Lattice { classes, truncated }
}

/// Every subgroup, found by joining each known subgroup with every element
/// until nothing new appears. Quadratic in the subgroup count; test oracle
/// for small groups.
pub fn all_subgroups_by_joins(table: &CayleyTable) -> Vec<Bitset> {
    let n = table.order() as u32;
    let mut found: FxHashMap<Bitset, Vec<u32>> = FxHashMap::default();
    let mut list: Vec<Bitset> = vec![table.closure(&[])];
    found.insert(list[0].clone(), Vec::new());
    let mut i = 0;
    while i < list.len() {
        let s = list[i].clone();
        let gens = found[&s].clone();
        for x in 0..n {
            if s.contains(x as usize) {
                continue;
            }
            let mut g = gens.clone();
            g.push(x);
            let t = table.closure(&g);
            if !found.contains_key(&t) {
                found.insert(t.clone(), g);
                list.push(t);
            }
        }
        i += 1;
    }
    list
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::families::*;
    use crate::perm::Perm;

    fn lattice_of(g: &FiniteGroup<Perm>) -> (Lattice, usize) {
        let t = CayleyTable::new(g).unwrap();
        let lat = exhaustive_lattice(&t, usize::MAX);
        let oracle = all_subgroups_by_joins(&t).len();
        (lat, oracle)
    }

    #[test]
    fn s4_lattice() {
        let (lat, oracle) = lattice_of(&symmetric(4));
        assert_eq!(lat.classes.len(), 11);
        assert_eq!(lat.subgroup_count(), 30);
        assert_eq!(oracle, 30);
        assert!(!lat.truncated);
    }

    #[test]
    fn lattices_match_join_oracle() {
        for g in [alternating(5), dihedral(12), quaternion(16), affine(7, 6), cyclic(12)] {
            let (lat, oracle) = lattice_of(&g);
            assert_eq!(lat.subgroup_count(), oracle, "order {}", g.order());
        }
        let (lat, _) = lattice_of(&alternating(5));
        assert_eq!(lat.classes.len(), 9);
        assert_eq!(lat.subgroup_count(), 59);
    }

    #[test]
    fn truncation_flagged() {
        let t = CayleyTable::new(&symmetric(4)).unwrap();
        let lat = exhaustive_lattice(&t, 5);
        assert!(lat.truncated);
        assert_eq!(lat.classes.len(), 5);
    }

    #[test]
    fn table_matches_group() {
        let g = symmetric(4);
        let t = CayleyTable::new(&g).unwrap();
        for a in 0..24u32 {
            for b in 0..24u32 {
                let prod = g.element(a as usize).then(g.element(b as usize));
                assert_eq!(t.mul(a, b) as usize, g.index_of(&prod).unwrap());
            }
            assert_eq!(t.mul(a, t.inv(a)), 0);
        }
        assert!(CayleyTable::new(&symmetric(7)).is_err());
    }
}
