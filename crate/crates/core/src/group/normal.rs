use std::collections::BTreeMap;

use super::conj::{conjugacy_classes, is_normal_in};
use super::{Bitset, Element, FiniteGroup, DEFAULT_NORMAL_CAP};
use crate::error::{Error, Result};
use crate::part_arith::factorize_u64;
use crate::perm::Perm;

/// A homomorphism between materialized groups, stored as a table from domain
/// element indices to codomain element indices.
///
/// Built from generator images and extended multiplicatively along the
/// closure order of the domain; every step `φ(x·s) = φ(x)·φ(s)` is checked,
/// so a successful construction proves the map well defined.
#[derive(Clone, Debug)]
pub struct Homomorphism<E: Element, F: Element> {
    domain: FiniteGroup<E>,
    codomain: FiniteGroup<F>,
    table: Vec<u32>,
}

impl<E: Element, F: Element> Homomorphism<E, F> {
    pub fn from_generator_images(
        domain: FiniteGroup<E>,
        codomain: FiniteGroup<F>,
        images: &[F],
    ) -> Result<Self> {
        if images.len() != domain.generators().len() {
            return Err(Error::invalid("one image per domain generator is required"));
        }
        let gen_idx: Vec<usize> = images
            .iter()
            .map(|f| {
                codomain
                    .index_of(f)
                    .ok_or_else(|| Error::invalid("generator image outside the codomain"))
            })
            .collect::<Result<_>>()?;
        const UNSET: u32 = u32::MAX;
        let mut table = vec![UNSET; domain.order()];
        table[0] = 0;
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            let fx = codomain.element(table[x] as usize).clone();
            for (s, &si) in domain.generators().iter().zip(&gen_idx) {
                let y = domain
                    .index_of(&domain.element(x).op(s))
                    .expect("domain is closed");
                let fy = codomain
                    .index_of(&fx.op(codomain.element(si)))
                    .expect("codomain is closed") as u32;
                if table[y] == UNSET {
                    table[y] = fy;
                    queue.push(y);
                } else if table[y] != fy {
                    return Err(Error::invalid("generator images do not define a homomorphism"));
                }
            }
        }
        Ok(Homomorphism {
            domain,
            codomain,
            table,
        })
    }

    pub fn domain(&self) -> &FiniteGroup<E> {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteGroup<F> {
        &self.codomain
    }

    pub fn apply(&self, x: &E) -> Option<&F> {
        let i = self.domain.index_of(x)?;
        Some(self.codomain.element(self.table[i] as usize))
    }

    pub fn kernel(&self) -> FiniteGroup<E> {
        let members: Vec<usize> = (0..self.table.len()).filter(|&i| self.table[i] == 0).collect();
        self.domain.subgroup_from_indices(members)
    }

    pub fn image_order(&self) -> usize {
        let mut hit = Bitset::new(self.codomain.order());
        for &t in &self.table {
            hit.insert(t as usize);
        }
        hit.count()
    }
}

/// All normal subgroups of `H`, ordered by size.
pub fn normal_subgroups<E: Element>(h: &FiniteGroup<E>) -> Result<Vec<FiniteGroup<E>>> {
    normal_subgroups_capped(h, DEFAULT_NORMAL_CAP)
}

/// Normal subgroups via the class-union lattice: each class generates its
/// normal closure, and every normal subgroup is a join of such closures.
pub fn normal_subgroups_capped<E: Element>(
    h: &FiniteGroup<E>,
    cap: usize,
) -> Result<Vec<FiniteGroup<E>>> {
    if h.order() > cap {
        return Err(Error::resource("normal subgroup enumeration", cap, h.order()));
    }
    let classes = conjugacy_classes(h);
    let mut found: BTreeMap<Bitset, FiniteGroup<E>> = BTreeMap::new();
    let trivial = FiniteGroup::trivial(h.identity().clone());
    found.insert(h.bitset_of(&trivial).unwrap(), trivial);

    let mut closures: Vec<FiniteGroup<E>> = Vec::new();
    let mut closure_keys: Vec<Bitset> = Vec::new();
    for class in classes.iter().skip(1) {
        let members: Vec<E> = class.iter().map(|&i| h.element(i).clone()).collect();
        let n = h.subgroup(&members);
        let key = h.bitset_of(&n).unwrap();
        if !closure_keys.contains(&key) {
            closure_keys.push(key.clone());
            closures.push(n.clone());
            found.entry(key).or_insert(n);
        }
    }

    let mut frontier: Vec<Bitset> = found.keys().cloned().collect();
    while let Some(key) = frontier.pop() {
        let base = found[&key].clone();
        for (piece, piece_key) in closures.iter().zip(&closure_keys) {
            if piece_key.is_subset(&key) {
                continue;
            }
            let joined = base.extend(piece.generators(), usize::MAX)?;
            let jkey = h.bitset_of(&joined).unwrap();
            if !found.contains_key(&jkey) {
                found.insert(jkey.clone(), joined);
                frontier.push(jkey);
            }
        }
    }

    let mut out: Vec<(usize, Bitset, FiniteGroup<E>)> =
        found.into_iter().map(|(k, g)| (g.order(), k, g)).collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|t| t.2).collect())
}

/// `O(H)`: the largest normal subgroup of odd order.
pub fn odd_core<E: Element>(h: &FiniteGroup<E>) -> Result<FiniteGroup<E>> {
    let normals = normal_subgroups(h)?;
    let best = normals
        .into_iter()
        .filter(|n| n.order() % 2 == 1)
        .max_by_key(|n| n.order())
        .expect("the trivial subgroup is odd");
    Ok(best)
}

/// Nilpotency test: every Sylow subgroup is normal, which holds iff for each
/// prime `p` the elements of `p`-power order number exactly `|G|_p`.
pub fn is_nilpotent<E: Element>(g: &FiniteGroup<E>) -> bool {
    let order = g.order() as u64;
    let factors = factorize_u64(order);
    let orders = g.element_orders();
    factors.iter().all(|(&p, &e)| {
        let pe = p.pow(e);
        let count = orders.iter().filter(|&&o| pe % o == 0).count() as u64;
        count == pe
    })
}

/// `F(H)`: the join of all nilpotent normal subgroups.
pub fn fitting<E: Element>(h: &FiniteGroup<E>) -> Result<FiniteGroup<E>> {
    let normals = normal_subgroups(h)?;
    let mut join = FiniteGroup::trivial(h.identity().clone());
    for n in normals.iter().filter(|n| is_nilpotent(n)) {
        join = join.extend(n.generators(), usize::MAX)?;
    }
    if !is_nilpotent(&join) {
        return Err(Error::Internal("join of nilpotent normal subgroups is not nilpotent".into()));
    }
    Ok(join)
}

/// `H/N` realized as the permutation action of `H` on the cosets of `N`,
/// together with the projection.
pub fn quotient<E: Element>(
    h: &FiniteGroup<E>,
    n: &FiniteGroup<E>,
) -> Result<(FiniteGroup<Perm>, Homomorphism<E, Perm>)> {
    if !is_normal_in(n, h) {
        return Err(Error::invalid("subgroup is not normal"));
    }
    let (labels, reps) = coset_labels(h, n);
    let degree = reps.len();
    let image_of = |x: &E| -> Perm {
        let images: Vec<u32> = reps
            .iter()
            .map(|&r| labels[h.index_of(&h.element(r).op(x)).expect("closed")])
            .collect();
        Perm::from_images(images).expect("coset action is a permutation")
    };
    let gen_images: Vec<Perm> = h.generators().iter().map(image_of).collect();
    let quotient_group = if gen_images.is_empty() {
        FiniteGroup::trivial(Perm::identity(degree))
    } else {
        super::closure(&gen_images, usize::MAX)?
    };
    let hom = Homomorphism::from_generator_images(h.clone(), quotient_group.clone(), &gen_images)?;
    Ok((quotient_group, hom))
}

/// Labels every element of `H` by its right coset `N x`; returns the labels
/// and one representative index per coset.
pub(crate) fn coset_labels<E: Element>(
    h: &FiniteGroup<E>,
    n: &FiniteGroup<E>,
) -> (Vec<u32>, Vec<usize>) {
    let mut labels = vec![u32::MAX; h.order()];
    let mut reps = Vec::new();
    for i in 0..h.order() {
        if labels[i] != u32::MAX {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(i);
        let x = h.element(i);
        for m in n.elements() {
            let j = h.index_of(&m.op(x)).expect("subgroup inside group");
            labels[j] = c;
        }
    }
    (labels, reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::families::*;
    use crate::group::is_cyclic;

    fn orders<E: Element>(gs: &[FiniteGroup<E>]) -> Vec<usize> {
        gs.iter().map(|g| g.order()).collect()
    }

    #[test]
    fn normal_subgroups_of_s4() {
        let s4 = symmetric(4);
        assert_eq!(orders(&normal_subgroups(&s4).unwrap()), vec![1, 4, 12, 24]);
    }

    #[test]
    fn simple_group_has_two_normal_subgroups() {
        assert_eq!(orders(&normal_subgroups(&alternating(5)).unwrap()), vec![1, 60]);
    }

    #[test]
    fn cyclic_six_all_normal() {
        assert_eq!(orders(&normal_subgroups(&cyclic(6)).unwrap()), vec![1, 2, 3, 6]);
    }

    #[test]
    fn normal_enumeration_cap() {
        let s8 = symmetric(8);
        assert!(matches!(normal_subgroups(&s8), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn odd_cores() {
        assert_eq!(odd_core(&symmetric(3)).unwrap().order(), 3);
        assert_eq!(odd_core(&quaternion(16)).unwrap().order(), 1);
        let c3q8 = direct_product_perm(&[cyclic(3), quaternion(8)]);
        let o = odd_core(&c3q8).unwrap();
        assert_eq!(o.order(), 3);
        assert!(is_cyclic(&o));
    }

    #[test]
    fn fitting_subgroups() {
        assert_eq!(fitting(&symmetric(4)).unwrap().order(), 4);
        let q8 = quaternion(8);
        assert_eq!(fitting(&q8).unwrap().order(), 8);
        let g = direct_product_perm(&[symmetric(3), cyclic(4)]);
        let f = fitting(&g).unwrap();
        assert_eq!(f.order(), 12);
        assert!(f.is_abelian());
    }

    #[test]
    fn quotients() {
        let s4 = symmetric(4);
        let v4 = normal_subgroups(&s4).unwrap()[1].clone();
        let (q, hom) = quotient(&s4, &v4).unwrap();
        assert_eq!(q.order(), 6);
        assert!(!q.is_abelian());
        assert_eq!(hom.kernel().order(), 4);

        let c6 = cyclic(6);
        let c3 = c6.subgroup(&[c6.generators()[0].pow(2)]);
        let (q, _) = quotient(&c6, &c3).unwrap();
        assert_eq!(q.order(), 2);

        let (q, hom) = quotient(&s4, &FiniteGroup::trivial(s4.identity().clone())).unwrap();
        assert_eq!(q.order(), 24);
        assert_eq!(hom.kernel().order(), 1);

        let t = s4.subgroup(&[crate::perm::Perm::from_cycles(4, &[&[0, 1]]).unwrap()]);
        assert!(quotient(&s4, &t).is_err());
    }

    #[test]
    fn bad_homomorphism_rejected() {
        let c4 = lift(&cyclic(4));
        let c2 = lift(&cyclic(2));
        let gen = c4.generators()[0].clone();
        let onto = Homomorphism::from_generator_images(
            c4.clone(),
            c2.clone(),
            &[c2.generators()[0].clone()],
        )
        .unwrap();
        assert_eq!(onto.kernel().order(), 2);
        assert_eq!(onto.image_order(), 2);
        // An involution cannot map to an element of order 4.
        assert!(Homomorphism::from_generator_images(c2, c4, &[gen]).is_err());
    }

    #[test]
    fn quotient_sizes_multiply() {
        let g = direct_product_perm(&[symmetric(3), cyclic(4)]);
        for n in normal_subgroups(&g).unwrap() {
            let (q, _) = quotient(&g, &n).unwrap();
            assert_eq!(q.order() * n.order(), g.order());
        }
    }
}
