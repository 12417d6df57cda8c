//! Constructors for the standard small groups used by tests and campaigns.
//!
//! Everything here is a permutation group. Two-generator metacyclic groups
//! (dihedral, generalized quaternion, semidihedral) are built through their
//! right-regular representation on normal forms `a^i b^j`.

use super::{closure, Element, FiniteGroup, GroupElement};
use crate::perm::Perm;

fn close(gens: Vec<Perm>) -> FiniteGroup<Perm> {
    closure(&gens, usize::MAX).expect("uncapped closure")
}

/// Cyclic group of order `n` acting regularly on `n` points.
pub fn cyclic(n: usize) -> FiniteGroup<Perm> {
    assert!(n >= 1);
    let images: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    close(vec![Perm::from_images(images).unwrap()])
}

pub fn symmetric(n: usize) -> FiniteGroup<Perm> {
    if n < 2 {
        return FiniteGroup::trivial(Perm::identity(n.max(1)));
    }
    let t = Perm::from_cycles(n, &[&[0, 1]]).unwrap();
    let images: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    close(vec![t, Perm::from_images(images).unwrap()])
}

pub fn alternating(n: usize) -> FiniteGroup<Perm> {
    if n < 3 {
        return FiniteGroup::trivial(Perm::identity(n.max(1)));
    }
    let gens = (2..n as u32)
        .map(|k| Perm::from_cycles(n, &[&[0, 1, k]]).unwrap())
        .collect();
    close(gens)
}

/// Right-regular representation of `⟨a, b | a^m, b^t = a^s, b a = a^r b⟩` on
/// the normal forms `a^i b^j` (`0 <= i < m`, `0 <= j < t`), index `i + m j`.
/// The parameters must define a group of order `m t`.
pub fn metacyclic(m: usize, t: usize, r: usize, s: usize) -> FiniteGroup<Perm> {
    let n = m * t;
    let idx = |i: usize, j: usize| (i % m + m * j) as u32;
    // r^j mod m
    let rpow: Vec<usize> = (0..t)
        .scan(1usize, |acc, _| {
            let cur = *acc;
            *acc = *acc * r % m;
            Some(cur)
        })
        .collect();
    let mut by_a = vec![0u32; n];
    let mut by_b = vec![0u32; n];
    for j in 0..t {
        for i in 0..m {
            by_a[idx(i, j) as usize] = idx(i + rpow[j], j);
            by_b[idx(i, j) as usize] = if j + 1 < t { idx(i, j + 1) } else { idx(i + s, 0) };
        }
    }
    close(vec![
        Perm::from_images(by_a).expect("valid metacyclic parameters"),
        Perm::from_images(by_b).expect("valid metacyclic parameters"),
    ])
}

/// Dihedral group of the given order, in its regular representation.
pub fn dihedral(order: usize) -> FiniteGroup<Perm> {
    assert!(order >= 4 && order % 2 == 0);
    let m = order / 2;
    metacyclic(m, 2, m - 1, 0)
}

/// Generalized quaternion group of order `2^k`, `k >= 3`.
pub fn quaternion(order: usize) -> FiniteGroup<Perm> {
    assert!(order >= 8 && order.is_power_of_two());
    let m = order / 2;
    metacyclic(m, 2, m - 1, m / 2)
}

/// Semidihedral group of order `2^k`, `k >= 4`.
pub fn semidihedral(order: usize) -> FiniteGroup<Perm> {
    assert!(order >= 16 && order.is_power_of_two());
    let m = order / 2;
    metacyclic(m, 2, m / 2 - 1, 0)
}

/// Dicyclic extension `C_m : C_4` with the generator of order 4 inverting
/// `C_m` (`m` odd gives `C_m : Q`-type groups with a unique involution).
pub fn dicyclic(m: usize) -> FiniteGroup<Perm> {
    // <a, b | a^{2m}, b^2 = a^m, b a = a^{-1} b>
    metacyclic(2 * m, 2, 2 * m - 1, m)
}

/// `{x ↦ a x + b}` on `GF(p)` with `a` ranging over the subgroup of order
/// `d` of `GF(p)^*`.
pub fn affine(p: u32, d: u32) -> FiniteGroup<Perm> {
    assert!((p - 1) % d == 0);
    let translation: Vec<u32> = (0..p).map(|x| (x + 1) % p).collect();
    let mut gens = vec![Perm::from_images(translation).unwrap()];
    if d > 1 {
        let w = primitive_root(p);
        let a = mod_pow(w, ((p - 1) / d) as u64, p);
        let scaling: Vec<u32> = (0..p).map(|x| ((x as u64 * a as u64) % p as u64) as u32).collect();
        gens.push(Perm::from_images(scaling).unwrap());
    }
    close(gens)
}

/// `PSL_2(p)` acting on the `p + 1` points of the projective line, with
/// `∞` encoded as `p`.
pub fn psl2_natural(p: u32) -> FiniteGroup<Perm> {
    let inf = p;
    let shift: Vec<u32> = (0..=p).map(|x| if x == inf { inf } else { (x + 1) % p }).collect();
    let invert: Vec<u32> = (0..=p)
        .map(|x| {
            if x == inf {
                0
            } else if x == 0 {
                inf
            } else {
                // x ↦ -1/x
                let inv = mod_pow(x, (p - 2) as u64, p);
                (p - inv) % p
            }
        })
        .collect();
    let w = primitive_root(p);
    let w2 = mod_pow(w, 2, p);
    let scale: Vec<u32> = (0..=p)
        .map(|x| if x == inf { inf } else { ((x as u64 * w2 as u64) % p as u64) as u32 })
        .collect();
    close(vec![
        Perm::from_images(shift).unwrap(),
        Perm::from_images(invert).unwrap(),
        Perm::from_images(scale).unwrap(),
    ])
}

/// Generators of a Sylow 2-subgroup of `S_m`: an iterated wreath product of
/// `C_2` on each binary block of `m`.
pub fn sylow_two_symmetric_generators(m: usize) -> Vec<Perm> {
    let mut gens = Vec::new();
    let mut offset = 0;
    for bit in (0..usize::BITS).rev() {
        let size = 1usize << bit;
        if m & size == 0 {
            continue;
        }
        for level in 0..bit {
            let half = 1usize << level;
            let mut images: Vec<u32> = (0..m as u32).collect();
            for i in 0..half {
                images[offset + i] = (offset + i + half) as u32;
                images[offset + i + half] = (offset + i) as u32;
            }
            gens.push(Perm::from_images(images).unwrap());
        }
        offset += size;
    }
    gens
}

/// Direct product of permutation groups acting on the disjoint union of
/// their point sets.
pub fn direct_product_perm(factors: &[FiniteGroup<Perm>]) -> FiniteGroup<Perm> {
    let degrees: Vec<usize> = factors.iter().map(|g| g.identity().degree()).collect();
    let total: usize = degrees.iter().sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for (g, &deg) in factors.iter().zip(&degrees) {
        for s in g.generators() {
            let mut images: Vec<u32> = (0..total as u32).collect();
            for i in 0..deg {
                images[offset + i] = offset as u32 + s.apply(i as u32);
            }
            gens.push(Perm::from_images(images).unwrap());
        }
        offset += deg;
    }
    if gens.is_empty() {
        return FiniteGroup::trivial(Perm::identity(total));
    }
    close(gens)
}

/// Direct product as a group of tuples.
pub fn direct_product(factors: &[FiniteGroup<GroupElement>]) -> FiniteGroup<GroupElement> {
    let ids: Vec<GroupElement> = factors.iter().map(|g| g.identity().clone()).collect();
    let mut gens = Vec::new();
    for (k, g) in factors.iter().enumerate() {
        for s in g.generators() {
            let mut t = ids.clone();
            t[k] = s.clone();
            gens.push(GroupElement::tuple(t));
        }
    }
    if gens.is_empty() {
        return FiniteGroup::trivial(GroupElement::tuple(ids));
    }
    closure(&gens, usize::MAX).expect("uncapped closure")
}

/// Re-wraps a permutation group as tagged elements.
pub fn lift<E: Element + Into<GroupElement>>(g: &FiniteGroup<E>) -> FiniteGroup<GroupElement> {
    let id: GroupElement = g.identity().clone().into();
    let gens: Vec<GroupElement> = g.generators().iter().cloned().map(Into::into).collect();
    FiniteGroup::trivial(id)
        .extend(&gens, usize::MAX)
        .expect("uncapped closure")
}

pub(crate) fn mod_pow(b: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

pub(crate) fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let primes: Vec<u64> = crate::part_arith::factorize_u64((p - 1) as u64).into_keys().collect();
    (2..p)
        .find(|&g| primes.iter().all(|&r| mod_pow(g, (p as u64 - 1) / r, p) != 1))
        .expect("primitive root exists")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::involutions;

    #[test]
    fn orders() {
        assert_eq!(cyclic(16).order(), 16);
        assert_eq!(symmetric(4).order(), 24);
        assert_eq!(alternating(5).order(), 60);
        assert_eq!(dihedral(8).order(), 8);
        assert_eq!(quaternion(8).order(), 8);
        assert_eq!(quaternion(16).order(), 16);
        assert_eq!(semidihedral(32).order(), 32);
        assert_eq!(affine(7, 3).order(), 21);
        assert_eq!(psl2_natural(7).order(), 168);
        assert_eq!(psl2_natural(11).order(), 660);
        assert_eq!(dicyclic(3).order(), 12);
    }

    #[test]
    fn involution_counts() {
        assert_eq!(involutions(&quaternion(8)).len(), 1);
        assert_eq!(involutions(&quaternion(32)).len(), 1);
        assert_eq!(involutions(&dihedral(8)).len(), 5);
        // SD_{2^k} has 2^{k-2} + 1 involutions.
        assert_eq!(involutions(&semidihedral(32)).len(), 9);
        assert_eq!(involutions(&dicyclic(3)).len(), 1);
    }

    #[test]
    fn products() {
        let c2 = cyclic(2);
        let v = direct_product_perm(&[c2.clone(), c2.clone(), c2]);
        assert_eq!(v.order(), 8);
        assert!(v.is_abelian());
        let t = direct_product(&[lift(&cyclic(3)), lift(&symmetric(3))]);
        assert_eq!(t.order(), 18);
    }

    #[test]
    fn sylow_of_symmetric_groups() {
        // |S_m|_2 for m = 1..9.
        let expected = [1, 2, 2, 8, 8, 16, 16, 128, 128];
        for (m, &e) in (1..=9).zip(&expected) {
            let gens = sylow_two_symmetric_generators(m);
            let order = if gens.is_empty() { 1 } else { closure(&gens, 1000).unwrap().order() };
            assert_eq!(order, e, "m = {m}");
        }
    }
}
