//! Centralizer-index identities for involutions: odd normal subgroups, Sylow
//! fusion through a normal subgroup, and the projection tower of a subgroup
//! of a direct product.

mod campaign;

use std::time::Instant;

use serde_json::json;

use crate::error::{Error, Result};
use crate::group::{
    closure, is_normal_in, quotient, sylow_two, Element, FiniteGroup, GroupElement,
};
use crate::report::{Verdict, VerificationReport};

pub use campaign::{random_identity_campaign, random_identity_campaign_with};

/// `|{x ∈ T : x g = g x}|` for `g` anywhere in the ambient group.
fn centralizer_order<E: Element>(t: &FiniteGroup<E>, g: &E) -> usize {
    t.elements().filter(|x| x.op(g) == g.op(x)).count()
}

/// `|T : C_T(g)|`, exact.
fn centralizer_index<E: Element>(t: &FiniteGroup<E>, g: &E) -> u64 {
    let c = centralizer_order(t, g);
    debug_assert_eq!(t.order() % c, 0);
    (t.order() / c) as u64
}

/// `g^H` as the orbit under conjugation by generators of `H`.
fn class_of<E: Element>(h: &FiniteGroup<E>, g: &E) -> Vec<E> {
    crate::group::conj_orbit(h.generators(), g)
}

fn class_meet<E: Element>(h: &FiniteGroup<E>, g: &E, p: &FiniteGroup<E>) -> u64 {
    class_of(h, g).iter().filter(|x| p.contains(x)).count() as u64
}

fn dbg<T: std::fmt::Debug>(x: &T) -> String {
    format!("{x:?}")
}

fn gens_json<E: Element>(g: &FiniteGroup<E>) -> serde_json::Value {
    json!(g.generators().iter().map(dbg).collect::<Vec<_>>())
}

/// `|H:C_H(g)| = |N:C_N(g)| · |H/N : C_{H/N}(gN)|` for `N ⊲ H` of odd order.
pub fn verify_oddnormal<E: Element>(
    h: &FiniteGroup<E>,
    n: &FiniteGroup<E>,
    g: &E,
) -> Result<VerificationReport> {
    let start = Instant::now();
    const ID: &str = "oddnormal";
    if !h.contains(g) || !g.is_involution() {
        return Ok(VerificationReport::not_applicable(ID, "g is not an involution of H"));
    }
    if n.order() % 2 == 0 {
        return Ok(VerificationReport::not_applicable(ID, "N has even order"));
    }
    if !is_normal_in(n, h) {
        return Ok(VerificationReport::not_applicable(ID, "N is not normal in H"));
    }
    let lhs = centralizer_index(h, g);
    let in_n = centralizer_index(n, g);
    let (q, proj) = match quotient(h, n) {
        Ok(x) => x,
        Err(e) => return VerificationReport::from_error(ID, e),
    };
    let gbar = proj.apply(g).expect("g lies in H").clone();
    let in_quotient = centralizer_index(&q, &gbar);
    let rhs = in_n * in_quotient;
    let report = VerificationReport::new(ID, Verdict::from_bool(lhs == rhs))
        .param("h_order", h.order())
        .param("n_order", n.order())
        .count("lhs", lhs)
        .count("index_in_n", in_n)
        .count("index_in_quotient", in_quotient)
        .count("rhs", rhs);
    Ok(with_witness(report, || {
        json!({"h": gens_json(h), "n": gens_json(n), "g": dbg(g)})
    })
    .timed(start))
}

fn with_witness(
    report: VerificationReport,
    witness: impl FnOnce() -> serde_json::Value,
) -> VerificationReport {
    if report.verdict == Verdict::Violated {
        report.witness(witness())
    } else {
        report
    }
}

/// `|H:C_H(g)| = |N:C_N(g)| · |g^H ∩ P| / |g^N ∩ P|` for an involution `g` of
/// `N ⊲ H` and `P ∈ Syl_2(N)`.
pub fn verify_sylow_fusion<E: Element>(
    h: &FiniteGroup<E>,
    n: &FiniteGroup<E>,
    g: &E,
) -> Result<VerificationReport> {
    let start = Instant::now();
    const ID: &str = "sylowtwos";
    if !n.contains(g) || !g.is_involution() {
        return Ok(VerificationReport::not_applicable(ID, "g is not an involution of N"));
    }
    if !is_normal_in(n, h) {
        return Ok(VerificationReport::not_applicable(ID, "N is not normal in H"));
    }
    let p = sylow_two(n);
    let lhs = centralizer_index(h, g);
    let in_n = centralizer_index(n, g);
    let fused = class_meet(h, g, &p);
    let local = class_meet(n, g, &p);
    let numerator = in_n * fused;
    let report = VerificationReport::new(ID, Verdict::Verified)
        .param("h_order", h.order())
        .param("n_order", n.order())
        .param("p_order", p.order())
        .count("lhs", lhs)
        .count("index_in_n", in_n)
        .count("class_in_h_meet_p", fused)
        .count("class_in_n_meet_p", local);
    let report = if local == 0 || numerator % local != 0 {
        let mut r = report.param("failure", "non-integral fusion ratio");
        r.verdict = Verdict::Violated;
        r
    } else {
        let rhs = numerator / local;
        let mut r = report.count("rhs", rhs);
        r.verdict = Verdict::from_bool(lhs == rhs);
        r
    };
    Ok(with_witness(report, || {
        json!({"h": gens_json(h), "n": gens_json(n), "g": dbg(g)})
    })
    .timed(start))
}

/// One level of the projection tower.
#[derive(Clone, Debug)]
pub struct TowerLevel {
    /// Projection of `H` onto factors `i..r`.
    pub l: FiniteGroup<GroupElement>,
    /// Kernel of `L_i → L_{i+1}`; `T_r = L_r`.
    pub t: FiniteGroup<GroupElement>,
}

/// The projection tower of `H ≤ H_1 × ... × H_r`, in the given factor order.
#[derive(Clone, Debug)]
pub struct TowerDecomposition {
    pub r: usize,
    pub h: FiniteGroup<GroupElement>,
    pub levels: Vec<TowerLevel>,
    /// First level (0-based) whose kernel has even order; `None` if all are
    /// odd.
    pub k: Option<usize>,
}

/// Components `from..` of a tuple element.
pub fn project(g: &GroupElement, from: usize) -> GroupElement {
    let c = g.components().expect("tuple element");
    GroupElement::tuple(c[from..].to_vec())
}

fn project_group(h: &FiniteGroup<GroupElement>, from: usize) -> Result<FiniteGroup<GroupElement>> {
    let id = project(h.identity(), from);
    let gens: Vec<GroupElement> = h.generators().iter().map(|g| project(g, from)).collect();
    if gens.is_empty() {
        return Ok(FiniteGroup::trivial(id));
    }
    closure(&gens, usize::MAX)
}

pub fn build_tower(h: &FiniteGroup<GroupElement>, r: usize) -> Result<TowerDecomposition> {
    let comps = h
        .identity()
        .components()
        .ok_or_else(|| Error::invalid("tower needs tuple elements"))?;
    if comps.len() != r || r == 0 {
        return Err(Error::invalid(format!(
            "expected {r} factors, elements have {}",
            comps.len()
        )));
    }
    let mut ls = Vec::with_capacity(r);
    for i in 0..r {
        ls.push(project_group(h, i)?);
    }
    let mut levels = Vec::with_capacity(r);
    for i in 0..r {
        let l = ls[i].clone();
        let t = if i + 1 == r {
            l.clone()
        } else {
            let members: Vec<GroupElement> = l
                .elements()
                .filter(|x| x.components().unwrap()[1..].iter().all(|c| c.is_identity()))
                .cloned()
                .collect();
            FiniteGroup::from_subgroup_elements(l.identity().clone(), &members)
        };
        if i + 1 < r {
            if l.order() != t.order() * ls[i + 1].order() {
                return Err(Error::Internal(format!(
                    "tower level {i}: |L| = {} but |T|·|L'| = {}",
                    l.order(),
                    t.order() * ls[i + 1].order()
                )));
            }
            if !is_normal_in(&t, &l) {
                return Err(Error::Internal(format!("tower level {i}: kernel not normal")));
            }
        }
        levels.push(TowerLevel { l, t });
    }
    let k = levels.iter().position(|lv| lv.t.order() % 2 == 0);
    Ok(TowerDecomposition {
        r,
        h: h.clone(),
        levels,
        k,
    })
}

impl TowerDecomposition {
    /// `∏ |T_i|`, which must equal `|H|`.
    pub fn kernel_product(&self) -> u64 {
        self.levels.iter().map(|lv| lv.t.order() as u64).product()
    }

    /// Whether the tower identity applies to `g`: an involution of `H` whose
    /// image in `L_k` is a nontrivial element of `T_k`.
    pub fn applies_to(&self, g: &GroupElement) -> bool {
        let Some(k) = self.k else {
            return false;
        };
        if !self.h.contains(g) || !g.is_involution() {
            return false;
        }
        let gk = project(g, k);
        !gk.is_identity() && self.levels[k].t.contains(&gk)
    }
}

/// `|H:C_H(g)| = ∏_{i ≤ k} |T_i : C_{T_i}(g_i)| · |g_k^{L_k} ∩ P| / |g_k^{T_k} ∩ P|`
/// with `P ∈ Syl_2(T_k)`.
pub fn verify_tower_identity(
    tower: &TowerDecomposition,
    g: &GroupElement,
) -> Result<VerificationReport> {
    let start = Instant::now();
    const ID: &str = "invcentralizer";
    let Some(k) = tower.k else {
        return Ok(VerificationReport::not_applicable(ID, "every kernel has odd order"));
    };
    if !tower.h.contains(g) || !g.is_involution() {
        return Ok(VerificationReport::not_applicable(ID, "g is not an involution of H"));
    }
    let gk = project(g, k);
    if gk.is_identity() || !tower.levels[k].t.contains(&gk) {
        return Ok(VerificationReport::not_applicable(
            ID,
            "image of g in L_k is trivial or outside T_k",
        ));
    }
    let lhs = centralizer_index(&tower.h, g);
    let mut product = 1u64;
    let mut factors = Vec::new();
    for i in 0..=k {
        let gi = project(g, i);
        let idx = centralizer_index(&tower.levels[i].t, &gi);
        factors.push(idx);
        product *= idx;
    }
    let p = sylow_two(&tower.levels[k].t);
    let fused = class_meet(&tower.levels[k].l, &gk, &p);
    let local = class_meet(&tower.levels[k].t, &gk, &p);
    let numerator = product * fused;
    let mut report = VerificationReport::new(ID, Verdict::Verified)
        .param("r", tower.r)
        .param("k", k + 1)
        .param("h_order", tower.h.order())
        .param("kernel_indices", factors)
        .count("lhs", lhs)
        .count("class_in_l_meet_p", fused)
        .count("class_in_t_meet_p", local);
    if local == 0 || numerator % local != 0 {
        report = report.param("failure", "non-integral fusion ratio");
        report.verdict = Verdict::Violated;
    } else {
        let rhs = numerator / local;
        report = report.count("rhs", rhs);
        report.verdict = Verdict::from_bool(lhs == rhs);
    }
    Ok(with_witness(report, || {
        json!({"h": gens_json(&tower.h), "g": dbg(g)})
    })
    .timed(start))
}
