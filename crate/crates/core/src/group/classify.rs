use serde::Serialize;

use super::conj::involutions;
use super::normal::{normal_subgroups, odd_core, quotient};
use super::sylow::{is_cyclic, is_generalized_quaternion, sylow_two};
use super::{Element, FiniteGroup};
use crate::error::{Error, Result};
use crate::part_arith::prime_power;
use crate::perm::Perm;

/// Recognized shapes of `G/O(G)` for groups whose Sylow 2-subgroups are
/// cyclic or generalized quaternion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum QuaternionStructure {
    TwoGroup,
    /// `2·A_7`.
    ZA7,
    /// `SL_2(q).D` with `D` cyclic of odd order `d`.
    SL2qD { q: u64, d: u64 },
    Unknown,
}

/// Matches invariants of `G/O(G)` against the short list; no isomorphism
/// testing, so `Unknown` is a legitimate answer.
pub fn classify_quaternion_structure<E: Element>(g: &FiniteGroup<E>) -> Result<QuaternionStructure> {
    let p = sylow_two(g);
    if !(is_cyclic(&p) || is_generalized_quaternion(&p)?) {
        return Err(Error::invalid(
            "Sylow 2-subgroup is neither cyclic nor generalized quaternion",
        ));
    }
    let core = odd_core(g)?;
    let (bar, _) = quotient(g, &core)?;
    if bar.order().is_power_of_two() {
        return Ok(QuaternionStructure::TwoGroup);
    }
    if bar.order() == 5040 && is_central_double_cover_of_simple(&bar)? {
        return Ok(QuaternionStructure::ZA7);
    }
    for s in normal_subgroups(&bar)? {
        let Some(q) = sl2_order_parameter(s.order() as u64) else {
            continue;
        };
        if involutions(&s).len() != 1 {
            continue;
        }
        if q >= 5 && !is_central_double_cover_of_simple(&s)? {
            continue;
        }
        let (top, _) = quotient(&bar, &s)?;
        if top.order() % 2 == 1 && is_cyclic(&top) {
            return Ok(QuaternionStructure::SL2qD {
                q,
                d: top.order() as u64,
            });
        }
    }
    Ok(QuaternionStructure::Unknown)
}

/// `q` with `q(q²−1) = n` and `q` an odd prime power, if any.
fn sl2_order_parameter(n: u64) -> Option<u64> {
    let mut q = (n as f64).cbrt() as u64;
    q = q.saturating_sub(2).max(3);
    while q * (q * q - 1) <= n {
        if q * (q * q - 1) == n && q % 2 == 1 && prime_power(q).is_some() {
            return Some(q);
        }
        q += 1;
    }
    None
}

/// Unique involution, central, with simple quotient by it.
fn is_central_double_cover_of_simple(h: &FiniteGroup<Perm>) -> Result<bool> {
    let inv = involutions(h);
    if inv.len() != 1 {
        return Ok(false);
    }
    let z = &inv[0];
    if h.generators().iter().any(|x| x.op(z) != z.op(x)) {
        return Ok(false);
    }
    let center = h.subgroup(std::slice::from_ref(z));
    let (simple, _) = quotient(h, &center)?;
    Ok(normal_subgroups(&simple)?.len() == 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::closure;
    use crate::group::families::*;

    #[test]
    fn two_groups() {
        assert_eq!(
            classify_quaternion_structure(&quaternion(16)).unwrap(),
            QuaternionStructure::TwoGroup
        );
        assert_eq!(
            classify_quaternion_structure(&cyclic(8)).unwrap(),
            QuaternionStructure::TwoGroup
        );
        // C_3 : C_4 has odd core C_3 and quotient C_4.
        assert_eq!(
            classify_quaternion_structure(&dicyclic(3)).unwrap(),
            QuaternionStructure::TwoGroup
        );
    }

    #[test]
    fn sl2_seven() {
        let f = crate::gf::field_make(7, 1).unwrap();
        let m = |v: &[i64]| crate::matrix::Matrix::from_ints(&f, 2, v).unwrap();
        let sl = closure(&[m(&[1, 1, 0, 1]), m(&[0, 1, -1, 0])], 1000).unwrap();
        assert_eq!(
            classify_quaternion_structure(&sl).unwrap(),
            QuaternionStructure::SL2qD { q: 7, d: 1 }
        );
    }

    #[test]
    fn sl2_three_times_odd() {
        let f = crate::gf::field_make(3, 1).unwrap();
        let m = |v: &[i64]| crate::matrix::Matrix::from_ints(&f, 2, v).unwrap();
        let sl = closure(&[m(&[1, 1, 0, 1]), m(&[0, 1, -1, 0])], 1000).unwrap();
        assert_eq!(sl.order(), 24);
        assert_eq!(
            classify_quaternion_structure(&sl).unwrap(),
            QuaternionStructure::SL2qD { q: 3, d: 1 }
        );
    }

    #[test]
    fn precondition() {
        assert!(classify_quaternion_structure(&symmetric(4)).is_err());
        assert!(classify_quaternion_structure(&dihedral(8)).is_err());
    }

    #[test]
    fn order_parameter() {
        assert_eq!(sl2_order_parameter(24), Some(3));
        assert_eq!(sl2_order_parameter(120), Some(5));
        assert_eq!(sl2_order_parameter(336), Some(7));
        assert_eq!(sl2_order_parameter(720), Some(9));
        assert_eq!(sl2_order_parameter(60), None);
        assert_eq!(sl2_order_parameter(6), None);
    }
}
