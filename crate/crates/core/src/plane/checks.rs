//! Collineation groups on planes and the checks run against them.

use std::sync::Arc;
use std::time::Instant;

use num_integer::Integer;
use rustc_hash::FxHashSet;
use serde_json::json;

use super::{Collineation, IncidencePlane};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::group::action::{fixed_points, is_transitive, is_transitive_on, orbits, stabilizer};
use crate::group::{closure, conj_class, normalizer, subgroup_conjugates, FiniteGroup, DEFAULT_CLOSURE_CAP};
use crate::matrix::Matrix;
use crate::perm::Perm;
use crate::report::{Verdict, VerificationReport};

/// A collineation group of a plane, acting on points, with the stabilizer of
/// the base point `α = 0` cached.
#[derive(Debug)]
pub struct PlaneGroup {
    plane: Arc<IncidencePlane>,
    group: FiniteGroup<Perm>,
    transitive: bool,
    alpha: u32,
    stabilizer: FiniteGroup<Perm>,
}

impl PlaneGroup {
    /// Closure of the given collineations. Incidence preservation is already
    /// checked on each generator, and products inherit it.
    pub fn new(plane: Arc<IncidencePlane>, gens: &[Collineation], cap: usize) -> Result<PlaneGroup> {
        let perms: Vec<Perm> = gens.iter().map(|c| c.points.clone()).collect();
        if perms.iter().any(|p| p.degree() != plane.num_points()) {
            return Err(Error::invalid("generator degree differs from the point count"));
        }
        let group = if perms.is_empty() {
            FiniteGroup::trivial(Perm::identity(plane.num_points()))
        } else {
            closure(&perms, cap)?
        };
        let transitive = is_transitive(&group);
        let stabilizer = stabilizer(&group, 0);
        Ok(PlaneGroup {
            plane,
            group,
            transitive,
            alpha: 0,
            stabilizer,
        })
    }

    pub fn plane(&self) -> &Arc<IncidencePlane> {
        &self.plane
    }

    pub fn group(&self) -> &FiniteGroup<Perm> {
        &self.group
    }

    pub fn is_transitive(&self) -> bool {
        self.transitive
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn stabilizer(&self) -> &FiniteGroup<Perm> {
        &self.stabilizer
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

/// Lexicographically first monic irreducible cubic over the prime field,
/// as `[c0, c1, c2]` for `x³ + c2x² + c1x + c0`.
fn irreducible_cubic(p: u32) -> [u32; 3] {
    for c2 in 0..p {
        for c1 in 0..p {
            for c0 in 1..p {
                let has_root = (0..p as u64).any(|x| {
                    let p = p as u64;
                    (x * x % p * x + c2 as u64 * x % p * x + c1 as u64 * x + c0 as u64) % p == 0
                });
                if !has_root {
                    return [c0, c1, c2];
                }
            }
        }
    }
    unreachable!("irreducible cubics exist over every prime field")
}

fn projective_order_is(m: &Matrix, n: u64) -> bool {
    if !m.pow(n).is_scalar() {
        return false;
    }
    let mut r = n;
    let mut d = 2;
    while d * d <= r {
        if r % d == 0 {
            if m.pow(n / d).is_scalar() {
                return false;
            }
            while r % d == 0 {
                r /= d;
            }
        }
        d += 1;
    }
    r == 1 || !m.pow(n / r).is_scalar()
}

/// A Singer element of `PGL_3(q)` together with the Frobenius automorphism
/// of `GF(q³)` over the prime field, written in the basis `1, ξ, ξ²`.
/// Returns the two collineations; they generate a transitive group of order
/// `3a(q²+q+1)` for `q = p^a`. Needs `gcd(a, 3) = 1` so that a cubic
/// irreducible over `GF(p)` stays irreducible over `GF(q)`.
pub fn singer_normalizer_generators(plane: &IncidencePlane) -> Result<(Collineation, Collineation)> {
    let f: Field = plane
        .field()
        .ok_or_else(|| Error::invalid("plane has no coordinates"))?
        .clone();
    let p = f.characteristic();
    if f.degree() % 3 == 0 {
        return Err(Error::invalid("q must not be a cube power of its prime"));
    }
    let cubic = irreducible_cubic(p);
    let coeffs: Vec<u32> = cubic.iter().map(|&c| f.from_int(c as i64)).collect();
    let c = Matrix::companion(&f, &coeffs)?;
    let c2 = c.mul(&c);
    let q = f.order() as u64;
    let n = q * q + q + 1;
    let mut singer = None;
    'scan: for a in f.elements() {
        for b in f.elements() {
            for d in f.elements() {
                let mut entries = vec![0u32; 9];
                for i in 0..9 {
                    let diag = if i % 4 == 0 { a } else { 0 };
                    let v = f.add(diag, f.add(f.mul(b, c.entries()[i]), f.mul(d, c2.entries()[i])));
                    entries[i] = v;
                }
                let Ok(w) = Matrix::new(&f, 3, entries) else {
                    continue;
                };
                if projective_order_is(&w, n) {
                    singer = Some(w);
                    break 'scan;
                }
            }
        }
    }
    let w = singer.ok_or_else(|| Error::Internal("no Singer element found".into()))?;
    // Row i of T is ξ^{p·i} in the basis 1, ξ, ξ².
    let mut t = Vec::with_capacity(9);
    for i in 0..3u64 {
        t.extend_from_slice(c.pow(p as u64 * i).row(0));
    }
    let t = Matrix::new(&f, 3, t)?;
    Ok((
        Collineation::semilinear(plane, &w, 0)?,
        Collineation::semilinear(plane, &t, 1)?,
    ))
}

/// The group generated by a Singer cycle and the field automorphisms of
/// `GF(q³)`, a transitive collineation group containing the Frobenius Baer
/// involution when `q` is a square.
pub fn singer_normalizer(plane: Arc<IncidencePlane>) -> Result<PlaneGroup> {
    let (w, phi) = singer_normalizer_generators(&plane)?;
    PlaneGroup::new(plane, &[w, phi], DEFAULT_CLOSURE_CAP)
}

fn square_root(x: u64) -> Option<u64> {
    let r = (x as f64).sqrt().round() as u64;
    (r * r == x).then_some(r)
}

/// The ratio `|g^G| / |g^G ∩ G_α|` for an involution `g` whose conjugates
/// all fix `u²+u+1` points, compared against `u²−u+1`, together with the
/// double count `|g^G|·(u²+u+1) = |points|·|g^G ∩ G_α|`.
pub fn counting_identity_check(g: &PlaneGroup, inv: &Collineation) -> Result<VerificationReport> {
    let start = Instant::now();
    let id = "counting";
    let x = g.plane().order();
    if !g.group().contains(&inv.points) {
        return Err(Error::invalid("collineation is not in the group"));
    }
    if inv.is_identity() || !inv.then(inv).is_identity() {
        return Err(Error::invalid("collineation is not an involution"));
    }
    if !g.is_transitive() {
        return Ok(VerificationReport::not_applicable(id, "group is not transitive on points"));
    }
    let Some(u) = square_root(x) else {
        return Ok(VerificationReport::not_applicable(id, format!("plane order {x} is not a square")));
    };
    let baer = u * u + u + 1;
    let class = conj_class(g.group(), &inv.points)?;
    let off_spectrum = class
        .iter()
        .filter(|c| c.fixed_points().len() as u64 != baer)
        .count();
    if off_spectrum > 0 {
        return Ok(VerificationReport::not_applicable(
            id,
            format!("{off_spectrum} conjugates do not fix u²+u+1 points"),
        )
        .param("u", u));
    }
    let alpha = g.alpha();
    let meet = class.iter().filter(|c| c.apply(alpha) == alpha).count() as u64;
    let size = class.len() as u64;
    let points = g.plane().num_points() as u64;
    let expected = u * u - u + 1;
    let double_count = size * baer == points * meet;
    let (ratio, rem) = if meet == 0 { (0, 1) } else { size.div_rem(&meet) };
    let ok = rem == 0 && ratio == expected && double_count;
    let mut report = VerificationReport::new(id, Verdict::from_bool(ok))
        .param("x", x)
        .param("u", u)
        .param("group_order", g.order() as u64)
        .param("nine_divides_u2_u_1", baer % 9 == 0)
        .count("class_size", size)
        .count("class_in_stabilizer", meet)
        .count("ratio", ratio)
        .count("expected_ratio", expected)
        .count("fixed_points", baer);
    if !ok {
        report = report.witness(json!({
            "class_size": size,
            "class_in_stabilizer": meet,
            "double_count_holds": double_count,
        }));
    }
    Ok(report.timed(start))
}

/// For `K ≤ G_α`: `N_G(K)` is transitive on `Fix(K)` exactly when
/// `K^G ∩ G_α = K^{G_α}`. Both sides are computed independently.
pub fn fixpoint_transitivity_check(
    group: &FiniteGroup<Perm>,
    alpha: u32,
    k: &FiniteGroup<Perm>,
    cap: usize,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let id = "fixtrans";
    if group.order() > cap {
        return Err(Error::resource("group order for subgroup conjugation", cap, group.order()));
    }
    if !is_transitive(group) {
        return Ok(VerificationReport::not_applicable(id, "group is not transitive"));
    }
    let stab = stabilizer(group, alpha);
    if !k.is_subgroup_of(&stab) {
        return Err(Error::invalid("K is not contained in the point stabilizer"));
    }
    let fix = fixed_points(k);
    let norm = normalizer(group, k);
    let side_a = is_transitive_on(&norm, &fix);

    let in_stab = |c: &Vec<Perm>| c.iter().all(|x| x.apply(alpha) == alpha);
    let global: Vec<Vec<Perm>> = subgroup_conjugates(group, k).into_iter().filter(in_stab).collect();
    let local = subgroup_conjugates(&stab, k);
    let side_b = global == local;

    let ok = side_a == side_b;
    let mut report = VerificationReport::new(id, Verdict::from_bool(ok))
        .param("alpha", alpha)
        .param("group_order", group.order() as u64)
        .param("k_order", k.order() as u64)
        .param("normalizer_transitive_on_fix", side_a)
        .param("conjugates_fuse_in_stabilizer", side_b)
        .count("fixed_points", fix.len() as u64)
        .count("normalizer_order", norm.order() as u64)
        .count("conjugates_in_stabilizer", global.len() as u64)
        .count("stabilizer_conjugates", local.len() as u64);
    if !ok {
        report = report.witness(json!({"fix": fix, "side_a": side_a, "side_b": side_b}));
    }
    Ok(report.timed(start))
}

/// Outcome of the odd-order transitive subgroup search.
#[derive(Debug)]
pub enum OddSearch {
    Witness(FiniteGroup<Perm>),
    Exhausted { candidates: usize },
}

const SEARCH_BUDGET: usize = 100_000;
const SEARCH_CANDIDATES: usize = 1_000;

fn is_odd_transitive(h: &FiniteGroup<Perm>, degree: usize) -> bool {
    h.order() % 2 == 1 && orbits(h.generators(), degree).len() == 1
}

/// Looks for a transitive subgroup of odd order: the group itself, then
/// cyclic subgroups, then subgroups generated by pairs of odd-order elements.
pub fn odd_transitive_search(g: &FiniteGroup<Perm>) -> OddSearch {
    odd_transitive_search_with(g, SEARCH_BUDGET, SEARCH_CANDIDATES)
}

pub fn odd_transitive_search_with(g: &FiniteGroup<Perm>, budget: usize, max_candidates: usize) -> OddSearch {
    let n = g.identity().degree();
    if is_odd_transitive(g, n) {
        return OddSearch::Witness(g.clone());
    }
    let orders = g.element_orders();
    // One representative per cyclic subgroup, larger orders first.
    let mut seen: FxHashSet<Vec<Perm>> = FxHashSet::default();
    let mut odd: Vec<(u64, usize)> = Vec::new();
    for (i, &o) in orders.iter().enumerate() {
        if o % 2 == 1 && o > 1 {
            odd.push((o, i));
        }
    }
    odd.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut reps = Vec::new();
    for &(_, i) in &odd {
        let x = g.element(i);
        let cyc = g.subgroup(std::slice::from_ref(x));
        if seen.insert(cyc.sorted_elements()) {
            reps.push(x.clone());
            if reps.len() >= max_candidates {
                break;
            }
        }
    }
    let mut tried = 0;
    for x in &reps {
        tried += 1;
        if orbits(std::slice::from_ref(x), n).len() == 1 {
            return OddSearch::Witness(g.subgroup(std::slice::from_ref(x)));
        }
    }
    'outer: for (i, x) in reps.iter().enumerate() {
        for y in &reps[i + 1..] {
            if tried >= max_candidates {
                break 'outer;
            }
            tried += 1;
            let pair = [x.clone(), y.clone()];
            if orbits(&pair, n).len() != 1 {
                continue;
            }
            if let Ok(h) = closure(&pair, budget) {
                if h.order() % 2 == 1 {
                    return OddSearch::Witness(h);
                }
            }
        }
    }
    OddSearch::Exhausted { candidates: tried }
}
