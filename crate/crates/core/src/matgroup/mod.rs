//! `GL_n(q)`: order data, constructive Sylow 2-subgroups, and involution
//! censuses.

mod statements;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{field_make, field_of_order, Field};
use crate::group::families::sylow_two_symmetric_generators;
use crate::group::{closure, Element, FiniteGroup, DEFAULT_CLOSURE_CAP};
use crate::matrix::Matrix;
use crate::part_arith::{factorize_u64, gl_order, gl_order_two_part};
use crate::perm::Perm;

pub use statements::{census_row, verify_sylowtwoingln, CensusRow};

/// `GL_n(q)` together with the hypothesis flags used by the verifiers.
#[derive(Clone, Debug)]
pub struct GLContext {
    n: usize,
    field: Field,
    order: BigUint,
}

pub fn gl_context(n: usize, p: u64, a: u32) -> Result<GLContext> {
    let field = field_make(p, a)?;
    GLContext::new(n, field)
}

impl GLContext {
    pub fn new(n: usize, field: Field) -> Result<GLContext> {
        if n == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        let order = gl_order(n as u32, field.order() as u64);
        Ok(GLContext { n, field, order })
    }

    pub fn of_order(n: usize, q: u64) -> Result<GLContext> {
        GLContext::new(n, field_of_order(q)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic() as u64
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn p_at_least_7(&self) -> bool {
        self.p() >= 7
    }

    pub fn p_one_mod_3(&self) -> bool {
        self.p() % 3 == 1
    }

    pub fn q_mod_4(&self) -> u64 {
        self.q() % 4
    }

    /// `p >= 7` and `p ≡ 1 (mod 3)`.
    pub fn satisfies_hypothesis(&self) -> bool {
        self.p_at_least_7() && self.p_one_mod_3()
    }

    /// Whether a matrix lives in this group.
    pub fn owns(&self, m: &Matrix) -> bool {
        m.dim() == self.n && **m.field() == *self.field
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Construction {
    /// `<a, b>` of order `4(q+1)_2` inside `GL_2(q)`, `q ≡ 3 (mod 4)`.
    Presentation4q1,
    /// `P_2 ≀ N_2` in even dimension, `q ≡ 3 (mod 4)`.
    WreathEven,
    /// `C_2 × P_{n-1}` in odd dimension, `q ≡ 3 (mod 4)`.
    OddSplit,
    /// Diagonal 2-torus extended by permutation matrices, `q ≡ 1 (mod 4)`.
    DiagonalWreath,
}

impl Construction {
    pub fn as_str(self) -> &'static str {
        match self {
            Construction::Presentation4q1 => "Presentation4q1",
            Construction::WreathEven => "WreathEven",
            Construction::OddSplit => "OddSplit",
            Construction::DiagonalWreath => "DiagonalWreath",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub total: u64,
    pub central: u64,
}

/// A constructed Sylow 2-subgroup of `GL_n(q)`.
#[derive(Clone, Debug)]
pub struct SylowTwoDescriptor {
    pub context: GLContext,
    pub generators: Vec<Matrix>,
    pub construction: Construction,
    pub group: FiniteGroup<Matrix>,
    pub census: Census,
    /// Defining relations checked on the generators, for the two-dimensional
    /// presentation; empty otherwise.
    pub relations: Vec<(String, bool)>,
}

/// Counts involutions of `P`, and among them the scalar ones.
pub fn involution_census(p: &FiniteGroup<Matrix>, ctx: &GLContext) -> Result<Census> {
    if !ctx.owns(p.identity()) {
        return Err(Error::invalid("group does not match the GL context"));
    }
    let elements: Vec<&Matrix> = p.elements().collect();
    let (total, central) = elements
        .par_iter()
        .filter(|m| m.is_involution())
        .map(|m| (1u64, m.is_scalar() as u64))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(Census { total, central })
}

/// Lexicographically smallest monic quadratic `x² + c_1 x + c_0` whose roots
/// generate `GF(q²)^*`, returned as `(c_0, c_1)`.
fn primitive_quadratic(f: &Field) -> (u32, u32) {
    let q = f.order() as u64;
    let full = q * q - 1;
    let primes: Vec<u64> = factorize_u64(full).into_keys().collect();
    for c1 in 0..f.order() {
        for c0 in 1..f.order() {
            let has_root = f
                .elements()
                .any(|x| f.add(f.add(f.mul(x, x), f.mul(c1, x)), c0) == 0);
            if has_root {
                continue;
            }
            let s = Matrix::companion(f, &[c0, c1]).expect("nonzero constant term");
            if primes.iter().all(|&r| !s.pow(full / r).is_identity()) {
                return (c0, c1);
            }
        }
    }
    unreachable!("GF(q^2)^* is cyclic")
}

fn odd_part(mut k: u64) -> u64 {
    while k % 2 == 0 {
        k /= 2;
    }
    k
}

/// The 2-dimensional generators `(a, b)` over `GF(q)`, `q ≡ 3 (mod 4)`, plus
/// the relation checks.
fn presentation_generators(f: &Field) -> Result<(Matrix, Matrix, Vec<(String, bool)>)> {
    let q = f.order() as u64;
    let (c0, c1) = primitive_quadratic(f);
    let s = Matrix::companion(f, &[c0, c1])?;
    let a = s.pow(odd_part(q * q - 1));
    // Frobenius y ↦ y^q on the basis (1, ω): 1 ↦ 1, ω ↦ -c_1 - ω.
    let frob = Matrix::new(f, 2, vec![1, 0, f.neg(c1), f.neg(1)])?;
    if frob.inverse().mul(&s).mul(&frob) != s.pow(q) {
        return Err(Error::Internal("Frobenius matrix does not act as x ↦ x^q".into()));
    }
    // b² = S^{j(q+1)} = -I forces j ≡ (q-1)/2 (mod q-1).
    let b = frob.mul(&s.pow((q - 1) / 2));
    let minus_one = Matrix::scalar(f, 2, f.neg(1))?;
    let relations = vec![
        ("a^(2(q+1)) = 1".to_string(), a.pow(2 * (q + 1)).is_identity()),
        ("b^4 = 1".to_string(), b.pow(4).is_identity()),
        ("a^(q+1) = b^2".to_string(), a.pow(q + 1) == b.pow(2)),
        ("b^2 = -1".to_string(), b.pow(2) == minus_one),
        ("b^-1 a b = a^q".to_string(), a.conj(&b) == a.pow(q)),
    ];
    if relations.iter().any(|r| !r.1) {
        return Err(Error::Internal(format!("presentation relations fail: {relations:?}")));
    }
    Ok((a, b, relations))
}

fn check_q(q: u64) -> Result<Field> {
    if q % 2 == 0 {
        return Err(Error::invalid("q must be odd"));
    }
    field_of_order(q)
}

/// The Sylow 2-subgroup `<a, b>` of `GL_2(q)` for `q ≡ 3 (mod 4)`.
pub fn sylow2_gl2(q: u64) -> Result<SylowTwoDescriptor> {
    let f = check_q(q)?;
    if q % 4 != 3 {
        return Err(Error::invalid("the two-generator presentation needs q ≡ 3 (mod 4)"));
    }
    let (a, b, relations) = presentation_generators(&f)?;
    let mut d = finish(
        GLContext::new(2, f)?,
        vec![a, b],
        Construction::Presentation4q1,
        DEFAULT_CLOSURE_CAP,
    )?;
    d.relations = relations;
    Ok(d)
}

/// Embeds `m` as the block at `offset` of an `n`-dimensional identity.
fn embed(m: &Matrix, n: usize, offset: usize) -> Matrix {
    let f = m.field();
    let mut blocks: Vec<Matrix> = Vec::new();
    if offset > 0 {
        blocks.push(Matrix::identity(f, offset));
    }
    blocks.push(m.clone());
    if offset + m.dim() < n {
        blocks.push(Matrix::identity(f, n - offset - m.dim()));
    }
    let refs: Vec<&Matrix> = blocks.iter().collect();
    Matrix::block_diagonal(&refs).expect("same field")
}

/// Permutation matrix moving blocks of size `block` according to `pi`.
fn block_permutation(f: &Field, pi: &Perm, block: usize, n: usize) -> Matrix {
    let mut images: Vec<u32> = (0..n as u32).collect();
    for i in 0..pi.degree() {
        for r in 0..block {
            images[i * block + r] = (pi.apply(i as u32) as usize * block + r) as u32;
        }
    }
    Matrix::permutation(f, &Perm::from_images(images).expect("block permutation"))
}

/// Generators and construction tag for a Sylow 2-subgroup of `GL_n(q)`.
fn sylow_generators(f: &Field, n: usize) -> Result<(Vec<Matrix>, Construction)> {
    let q = f.order() as u64;
    if q % 4 == 1 {
        let w = f.primitive_element();
        let zeta = f.pow(w, odd_part(q - 1));
        let mut gens = Vec::new();
        for slot in 0..n {
            let mut diag = vec![1u32; n];
            diag[slot] = zeta;
            gens.push(Matrix::diagonal(f, &diag)?);
        }
        for pi in sylow_two_symmetric_generators(n) {
            gens.push(Matrix::permutation(f, &pi));
        }
        return Ok((gens, Construction::DiagonalWreath));
    }
    if n % 2 == 1 {
        let mut diag = vec![1u32; n];
        diag[0] = f.neg(1);
        let mut gens = vec![Matrix::diagonal(f, &diag)?];
        if n > 1 {
            let (inner, _) = sylow_generators(f, n - 1)?;
            gens.extend(inner.iter().map(|m| embed(m, n, 1)));
        }
        return Ok((gens, Construction::OddSplit));
    }
    let (a, b, _) = presentation_generators(f)?;
    if n == 2 {
        return Ok((vec![a, b], Construction::Presentation4q1));
    }
    let k = n / 2;
    let mut gens = Vec::new();
    for block in 0..k {
        gens.push(embed(&a, n, 2 * block));
        gens.push(embed(&b, n, 2 * block));
    }
    for pi in sylow_two_symmetric_generators(k) {
        gens.push(block_permutation(f, &pi, 2, n));
    }
    Ok((gens, Construction::WreathEven))
}

/// A Sylow 2-subgroup of `GL_n(q)`, `q` odd, materialized within `cap`
/// elements; its order is checked against `|GL_n(q)|_2`.
pub fn sylow2_gl(n: usize, q: u64) -> Result<SylowTwoDescriptor> {
    sylow2_gl_capped(n, q, DEFAULT_CLOSURE_CAP)
}

pub fn sylow2_gl_capped(n: usize, q: u64, cap: usize) -> Result<SylowTwoDescriptor> {
    let f = check_q(q)?;
    let ctx = GLContext::new(n, f.clone())?;
    let (gens, construction) = sylow_generators(&f, n)?;
    let mut d = finish(ctx, gens, construction, cap)?;
    if construction == Construction::Presentation4q1 {
        d.relations = presentation_generators(&f)?.2;
    }
    Ok(d)
}

fn finish(
    ctx: GLContext,
    generators: Vec<Matrix>,
    construction: Construction,
    cap: usize,
) -> Result<SylowTwoDescriptor> {
    let expected = gl_order_two_part(ctx.n() as u32, ctx.q())?;
    if expected > BigUint::from(cap) {
        let expected = usize::try_from(&expected).unwrap_or(usize::MAX);
        return Err(Error::resource("Sylow 2-subgroup closure", cap, expected));
    }
    let group = closure(&generators, cap)?;
    if BigUint::from(group.order()) != expected {
        return Err(Error::Internal(format!(
            "constructed 2-subgroup has order {}, expected {expected}",
            group.order()
        )));
    }
    let census = involution_census(&group, &ctx)?;
    Ok(SylowTwoDescriptor {
        context: ctx,
        generators,
        construction,
        group,
        census,
        relations: Vec::new(),
    })
}

/// Number of involutions of `B ≀ N`, `N` acting on `k` points: for each
/// `h ∈ N` with `h² = 1`, the base tuple needs an element of order at most 2
/// in each fixed slot and a free choice, determining its partner, in each
/// 2-cycle.
pub fn wreath_involution_count(
    base_involutions: u64,
    base_order: u64,
    top: &FiniteGroup<Perm>,
) -> BigUint {
    let mut total = BigUint::from(0u32);
    for h in top.elements() {
        if !h.op(h).is_identity() {
            continue;
        }
        let k = h.degree() as u32;
        let fixed = h.fixed_points().len() as u32;
        total += BigUint::from(base_involutions + 1).pow(fixed)
            * BigUint::from(base_order).pow((k - fixed) / 2);
    }
    total - 1u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::families::{cyclic, symmetric};
    use crate::group::{is_generalized_quaternion, sylow_two};

    #[test]
    fn contexts() {
        assert_eq!(*gl_context(2, 7, 1).unwrap().order(), BigUint::from(2016u32));
        assert_eq!(*gl_context(1, 7, 1).unwrap().order(), BigUint::from(6u32));
        let c = gl_context(3, 7, 1).unwrap();
        assert_eq!(*c.order(), BigUint::from(33_784_128u64));
        assert!(c.satisfies_hypothesis());
        assert_eq!(c.q_mod_4(), 3);
        assert!(!gl_context(2, 5, 1).unwrap().satisfies_hypothesis());
        assert!(gl_context(0, 7, 1).is_err());
    }

    #[test]
    fn gl2_seven() {
        let d = sylow2_gl2(7).unwrap();
        assert_eq!(d.group.order(), 32);
        assert_eq!(d.census, Census { total: 9, central: 1 });
        assert!(d.relations.iter().all(|r| r.1));
    }

    #[test]
    fn gl2_thirty_one() {
        let d = sylow2_gl2(31).unwrap();
        assert_eq!(d.group.order(), 128);
        assert_eq!(d.census, Census { total: 33, central: 1 });
    }

    #[test]
    fn gl2_nineteen() {
        let d = sylow2_gl2(19).unwrap();
        assert_eq!(d.group.order(), 16);
        assert_eq!(d.census.total, 5);
        assert!(d.census.total <= 21);
    }

    #[test]
    fn presentation_needs_three_mod_four() {
        assert!(sylow2_gl2(13).is_err());
        assert!(sylow2_gl2(8).is_err());
    }

    #[test]
    fn sylow_orders_match_formula() {
        for &(n, q) in &[(1, 7), (2, 7), (3, 7), (4, 7), (2, 13), (3, 13), (2, 5), (3, 3), (5, 3), (6, 3), (2, 9), (3, 19)] {
            let d = sylow2_gl(n, q).unwrap();
            let expected = gl_order_two_part(n as u32, q).unwrap();
            assert_eq!(BigUint::from(d.group.order()), expected, "n={n} q={q}");
            assert!(d.group.order().is_power_of_two());
        }
    }

    #[test]
    fn sylow_matches_climb_in_gl2_5() {
        let f = field_of_order(5).unwrap();
        let m = |v: &[i64]| Matrix::from_ints(&f, 2, v).unwrap();
        let gl = closure(&[m(&[2, 0, 0, 1]), m(&[-1, 1, -1, 0])], 1000).unwrap();
        assert_eq!(gl.order(), 480);
        let climbed = sylow_two(&gl);
        let built = sylow2_gl(2, 5).unwrap();
        assert_eq!(climbed.order(), built.group.order());
        assert!(built.group.is_subgroup_of(&gl));
    }

    #[test]
    fn census_gl4_7_against_wreath_formula() {
        let d = sylow2_gl(4, 7).unwrap();
        assert_eq!(d.construction, Construction::WreathEven);
        assert_eq!(d.group.order(), 2048);
        let oracle = wreath_involution_count(9, 32, &cyclic(2));
        assert_eq!(oracle, BigUint::from(131u32));
        assert_eq!(d.census, Census { total: 131, central: 1 });
    }

    #[test]
    fn census_gl3_7() {
        let d = sylow2_gl(3, 7).unwrap();
        assert_eq!(d.construction, Construction::OddSplit);
        assert_eq!(d.group.order(), 64);
        assert_eq!(d.census.total, 2 * 9 + 1);
    }

    #[test]
    fn diagonal_wreath_census() {
        let d = sylow2_gl(2, 13).unwrap();
        assert_eq!(d.construction, Construction::DiagonalWreath);
        assert_eq!(d.group.order(), 32);
        // C_4 ≀ C_2: 2² + 4 - 1.
        assert_eq!(wreath_involution_count(1, 4, &cyclic(2)), BigUint::from(7u32));
        assert_eq!(d.census.total, 7);
        let d3 = sylow2_gl(3, 13).unwrap();
        let top = closure(&sylow_two_symmetric_generators(3), 10).unwrap();
        assert_eq!(BigUint::from(d3.census.total), wreath_involution_count(1, 4, &top));
    }

    #[test]
    fn sl2_subgroup_of_presentation_is_quaternion() {
        let d = sylow2_gl2(7).unwrap();
        let members: Vec<Matrix> =
            d.group.elements().filter(|m| m.det() == 1).cloned().collect();
        let q16 = FiniteGroup::from_subgroup_elements(d.group.identity().clone(), &members);
        assert_eq!(q16.order(), 16);
        assert!(is_generalized_quaternion(&q16).unwrap());
    }

    #[test]
    fn wreath_formula_against_enumeration() {
        use crate::group::{involutions, GroupElement};
        // C_2 ≀ S_3 built directly: base involutions 1, base order 2.
        let c2 = crate::group::families::lift(&cyclic(2));
        let e = c2.identity().clone();
        let t = c2.generators()[0].clone();
        let id3 = Perm::identity(3);
        let mut gens = vec![GroupElement::wreath(vec![t, e.clone(), e.clone()], id3)];
        for s in symmetric(3).generators() {
            gens.push(GroupElement::wreath(vec![e.clone(), e.clone(), e.clone()], s.clone()));
        }
        let w = closure(&gens, 1000).unwrap();
        assert_eq!(w.order(), 48);
        let oracle = wreath_involution_count(1, 2, &symmetric(3));
        assert_eq!(BigUint::from(involutions(&w).len()), oracle);
    }

    #[test]
    fn census_rejects_mismatched_context() {
        let d = sylow2_gl2(7).unwrap();
        let other = GLContext::of_order(3, 7).unwrap();
        assert!(involution_census(&d.group, &other).is_err());
    }
}
