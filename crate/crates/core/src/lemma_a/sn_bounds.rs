//! Order and class-size bounds for primitive permutation groups.

use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::action::{degree, is_primitive};
use crate::group::families::{affine, alternating, psl2_natural, symmetric};
use crate::group::{conj_orbit, Element, FiniteGroup};
use crate::perm::Perm;
use crate::report::{Verdict, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnBound {
    /// Odd order: `|H| < n^{log₂ n}`.
    OddOrder,
    /// Even order: some involution has `|H : C_H(g)| < 42^{(n-2)/2}`.
    Involutions,
}

impl SnBound {
    pub fn id(self) -> &'static str {
        match self {
            SnBound::OddOrder => "oddsn",
            SnBound::Involutions => "sninvolutions",
        }
    }
}

const START_BITS: u32 = 8;
const MAX_BITS: u32 = 24;

/// `⌊2^t · log₂ x⌋`, read off the bit length of `x^{2^t}`.
fn scaled_log2_floor(x: u64, t: u32) -> BigUint {
    let mut v = BigUint::from(x);
    for _ in 0..t {
        v = &v * &v;
    }
    BigUint::from(v.bits() - 1)
}

/// Decides `h < n^{log₂ n}` exactly, i.e. `log₂ h < (log₂ n)²`.
///
/// When `n` is a power of two the right side is an integer power of two.
/// Otherwise both logarithms are bracketed in intervals of width `2^{-t}`
/// and `t` grows until the intervals separate; `log₂ n` is irrational then,
/// so equality cannot occur. Returns the decision and the `t` used.
pub fn below_n_pow_log2_n(h: u64, n: u64) -> Result<(bool, u32)> {
    if h == 0 || n < 2 {
        return Err(Error::invalid("need h >= 1 and n >= 2"));
    }
    if n.is_power_of_two() {
        let k = n.trailing_zeros();
        let rhs = BigUint::one() << (k * k) as usize;
        return Ok((BigUint::from(h) < rhs, 0));
    }
    let mut t = START_BITS;
    while t <= MAX_BITS {
        let a = scaled_log2_floor(n, t);
        let b = scaled_log2_floor(h, t);
        let scale = BigUint::one() << t as usize;
        // log₂ n ∈ [a, a+1)/2^t, log₂ h ∈ [b, b+1)/2^t.
        if (&b + 1u32) * &scale <= &a * &a {
            return Ok((true, t));
        }
        if &b * &scale >= (&a + 1u32).pow(2u32) {
            return Ok((false, t));
        }
        t += 4;
    }
    Err(Error::Internal("precision escalation did not separate the bounds".into()))
}

/// Runs one of the two bound checks on a permutation group `H` of degree `n`.
/// Not applicable when `H` is imprimitive or its order has the wrong parity.
pub fn sn_bound_check(kind: SnBound, h: &FiniteGroup<Perm>) -> Result<VerificationReport> {
    let start = Instant::now();
    let id = kind.id();
    let n = degree(h) as u64;
    let order = h.order() as u64;
    if n < 2 {
        return Err(Error::invalid("degree must be at least 2"));
    }
    if !is_primitive(h) {
        return Ok(VerificationReport::not_applicable(id, "group is not primitive").param("n", n));
    }
    let odd = order % 2 == 1;
    let report = match kind {
        SnBound::OddOrder => {
            if !odd {
                return Ok(VerificationReport::not_applicable(id, "group has even order").param("n", n));
            }
            let (ok, bits) = below_n_pow_log2_n(order, n)?;
            let mut r = VerificationReport::new(id, Verdict::from_bool(ok))
                .param("n", n)
                .param("bound", format!("{n}^log2({n}) ~ {:.3}", (n as f64).powf((n as f64).log2())))
                .count("order", order)
                .count("precision_bits", bits as u64);
            if !ok {
                r = r.witness(json!({"order": order, "generators": debug_list(h)}));
            }
            r
        }
        SnBound::Involutions => {
            if odd {
                return Ok(VerificationReport::not_applicable(id, "group has odd order").param("n", n));
            }
            let min_class = involution_class_sizes(h).into_iter().min().expect("even order");
            // |class| < 42^{(n-2)/2}  ⟺  |class|² < 42^{n-2}.
            let rhs = BigUint::from(42u32).pow((n - 2) as u32);
            let ok = BigUint::from(min_class).pow(2u32) < rhs;
            let mut r = VerificationReport::new(id, Verdict::from_bool(ok))
                .param("n", n)
                .param("bound", format!("42^{}/2", n - 2))
                .count("order", order)
                .count("min_involution_class", min_class);
            if !ok {
                r = r.witness(json!({"min_class": min_class, "generators": debug_list(h)}));
            }
            r
        }
    };
    Ok(report.timed(start))
}

fn debug_list(h: &FiniteGroup<Perm>) -> Vec<String> {
    h.generators().iter().map(|g| format!("{g:?}")).collect()
}

fn involution_class_sizes(h: &FiniteGroup<Perm>) -> Vec<u64> {
    let mut seen = rustc_hash::FxHashSet::default();
    let mut sizes = Vec::new();
    for g in h.elements().filter(|g| g.is_involution()) {
        if seen.contains(g) {
            continue;
        }
        let class = conj_orbit(h.generators(), g);
        sizes.push(class.len() as u64);
        seen.extend(class);
    }
    sizes
}

/// Primitive groups of degree at most 13 used by the harness, with labels.
pub fn primitive_test_groups() -> Vec<(String, FiniteGroup<Perm>)> {
    let mut out: Vec<(String, FiniteGroup<Perm>)> = Vec::new();
    for (p, d) in [(5u32, 1u32), (7, 1), (7, 3), (11, 5), (13, 3), (5, 4), (7, 6), (11, 2), (13, 4)] {
        out.push((format!("C{p}:C{d}"), affine(p, d)));
    }
    for n in 5..=8 {
        out.push((format!("A{n}"), alternating(n)));
    }
    for n in 3..=7 {
        out.push((format!("S{n}"), symmetric(n)));
    }
    for p in [5u32, 7, 11] {
        out.push((format!("PSL2({p}) on {} points", p + 1), psl2_natural(p)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_log_comparison() {
        // 7^{log₂ 7} = 235.77…
        assert!(below_n_pow_log2_n(235, 7).unwrap().0);
        assert!(!below_n_pow_log2_n(236, 7).unwrap().0);
        assert!(below_n_pow_log2_n(21, 7).unwrap().0);
        // 8^3 = 512 exactly, and the bound is strict.
        assert_eq!(below_n_pow_log2_n(511, 8).unwrap(), (true, 0));
        assert_eq!(below_n_pow_log2_n(512, 8).unwrap(), (false, 0));
        assert!(below_n_pow_log2_n(5, 1).is_err());
    }

    #[test]
    fn escalation_near_the_boundary() {
        // 3^{log₂ 3} = 5.704…; 13^{log₂ 13} = 13 245.86…
        let (yes, t) = below_n_pow_log2_n(13_245, 13).unwrap();
        assert!(yes);
        assert!(t >= START_BITS);
        assert!(!below_n_pow_log2_n(13_246, 13).unwrap().0);
        assert!(below_n_pow_log2_n(5, 3).unwrap().0);
        assert!(!below_n_pow_log2_n(6, 3).unwrap().0);
    }

    #[test]
    fn harness_examples() {
        let r = sn_bound_check(SnBound::OddOrder, &affine(7, 3)).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.counts["order"], 21);
        let r = sn_bound_check(SnBound::Involutions, &symmetric(5)).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.counts["min_involution_class"], 10);
        let r = sn_bound_check(SnBound::Involutions, &alternating(4)).unwrap();
        assert_eq!(r.counts["min_involution_class"], 3);
        assert_eq!(r.verdict, Verdict::Verified);
        let r = sn_bound_check(SnBound::OddOrder, &symmetric(5)).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn imprimitive_is_not_applicable() {
        let d8 = crate::group::families::dihedral(8);
        let r = sn_bound_check(SnBound::Involutions, &d8).unwrap();
        assert_eq!(r.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn all_test_groups_primitive_and_bounded() {
        let groups = primitive_test_groups();
        assert!(groups.len() >= 10);
        for (name, g) in &groups {
            assert!(is_primitive(g), "{name}");
            assert!(degree(g) <= 13);
            let kind = if g.order() % 2 == 1 { SnBound::OddOrder } else { SnBound::Involutions };
            let r = sn_bound_check(kind, g).unwrap();
            assert_eq!(r.verdict, Verdict::Verified, "{name}");
        }
    }
}
