//! Generators for `GL_n(q)` and seeded subgroup sampling from structured
//! families.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{closure, FiniteGroup};
use crate::matgroup::{sylow2_gl, GLContext};
use crate::matrix::Matrix;
use crate::part_arith::factorize_u64;
use crate::perm::Perm;

/// A generating set of `GL_n(q)`: `diag(ω,1,…,1)` and the elementary
/// transvections `I + λE_ij` with `λ ∈ {1, ω}`.
pub fn gl_generators(ctx: &GLContext) -> Vec<Matrix> {
    let f = ctx.field();
    let n = ctx.n();
    let w = f.primitive_element();
    let mut diag = vec![1u32; n];
    diag[0] = w;
    let mut gens = vec![Matrix::diagonal(f, &diag).expect("nonzero diagonal")];
    let lambdas: Vec<u32> = if w == 1 { vec![1] } else { vec![1, w] };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for &l in &lambdas {
                let mut e = Matrix::identity(f, n).entries().to_vec();
                e[i * n + j] = l;
                gens.push(Matrix::new(f, n, e).expect("unipotent"));
            }
        }
    }
    gens
}

fn has_exact_order(m: &Matrix, order: u64) -> bool {
    m.pow(order).is_identity()
        && factorize_u64(order)
            .keys()
            .all(|&r| !m.pow(order / r).is_identity())
}

/// A Singer cycle of order `q^n − 1`: the first companion matrix, in
/// lexicographic coefficient order, of that order.
pub fn singer_cycle(ctx: &GLContext) -> Result<Matrix> {
    let f = ctx.field();
    let n = ctx.n();
    let q = ctx.q();
    let order = q.pow(n as u32) - 1;
    let mut coeffs = vec![0u32; n];
    loop {
        if coeffs[0] != 0 {
            let c = Matrix::companion(f, &coeffs)?;
            if has_exact_order(&c, order) {
                return Ok(c);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return Err(Error::Internal("no Singer cycle found".into()));
            }
            coeffs[i] += 1;
            if coeffs[i] < q as u32 {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

/// The `q`-power map of `GF(q^n)` written on the basis `1, ξ, …` of the
/// companion matrix `c`; it normalizes `<c>`.
pub fn singer_frobenius(c: &Matrix, q: u64) -> Result<Matrix> {
    let n = c.dim();
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n as u64 {
        rows.extend_from_slice(c.pow(q * i).row(0));
    }
    Matrix::new(c.field(), n, rows)
}

/// Structured families subgroups are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Cyclic,
    Borel,
    Unitriangular,
    Monomial,
    SingerNormalizer,
    SylowTwo,
    Ambient,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::Borel => "borel",
            Family::Unitriangular => "unitriangular",
            Family::Monomial => "monomial",
            Family::SingerNormalizer => "singer-normalizer",
            Family::SylowTwo => "sylow-two",
            Family::Ambient => "ambient",
        }
    }
}

/// Seeded subgroup source for one `GL_n(q)`.
pub struct Sampler {
    ctx: GLContext,
    singer: Matrix,
    frobenius: Matrix,
    sylow_two: Option<FiniteGroup<Matrix>>,
    ambient_small: bool,
}

const SYLOW_SAMPLE_CAP: usize = 1 << 16;

impl Sampler {
    pub fn new(ctx: &GLContext, cap: usize) -> Result<Sampler> {
        let singer = singer_cycle(ctx)?;
        let frobenius = singer_frobenius(&singer, ctx.q())?;
        let sylow_two = if ctx.q() % 2 == 1 {
            match sylow2_gl(ctx.n(), ctx.q()) {
                Ok(d) if d.group.order() <= SYLOW_SAMPLE_CAP => Some(d.group),
                _ => None,
            }
        } else {
            None
        };
        let ambient_small = ctx.order() <= &num_bigint::BigUint::from(cap);
        Ok(Sampler {
            ctx: ctx.clone(),
            singer,
            frobenius,
            sylow_two,
            ambient_small,
        })
    }

    fn nonzero(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(1..self.ctx.q() as u32)
    }

    fn any(&self, rng: &mut ChaCha8Rng) -> u32 {
        rng.gen_range(0..self.ctx.q() as u32)
    }

    pub fn random_invertible(&self, rng: &mut ChaCha8Rng) -> Matrix {
        let n = self.ctx.n();
        loop {
            let e: Vec<u32> = (0..n * n).map(|_| self.any(rng)).collect();
            if let Ok(m) = Matrix::new(self.ctx.field(), n, e) {
                return m;
            }
        }
    }

    fn triangular(&self, rng: &mut ChaCha8Rng, unipotent: bool) -> Matrix {
        let n = self.ctx.n();
        let mut e = vec![0u32; n * n];
        for i in 0..n {
            e[i * n + i] = if unipotent { 1 } else { self.nonzero(rng) };
            for j in i + 1..n {
                e[i * n + j] = self.any(rng);
            }
        }
        Matrix::new(self.ctx.field(), n, e).expect("triangular with nonzero diagonal")
    }

    fn monomial(&self, rng: &mut ChaCha8Rng) -> Matrix {
        let n = self.ctx.n();
        let mut images: Vec<u32> = (0..n as u32).collect();
        images.shuffle(rng);
        let p = Matrix::permutation(self.ctx.field(), &Perm::from_images(images).expect("shuffle"));
        let d: Vec<u32> = (0..n).map(|_| self.nonzero(rng)).collect();
        Matrix::diagonal(self.ctx.field(), &d).expect("nonzero").mul(&p)
    }

    fn singer_normalizer_element(&self, rng: &mut ChaCha8Rng) -> Matrix {
        let order = self.ctx.q().pow(self.ctx.n() as u32) - 1;
        let i = rng.gen_range(0..order);
        let j = rng.gen_range(0..self.ctx.n() as u64);
        self.singer.pow(i).mul(&self.frobenius.pow(j))
    }

    fn pick_family(&self, rng: &mut ChaCha8Rng) -> Family {
        let mut options = vec![
            Family::Cyclic,
            Family::Borel,
            Family::Unitriangular,
            Family::Monomial,
            Family::SingerNormalizer,
        ];
        if self.sylow_two.is_some() {
            options.push(Family::SylowTwo);
        }
        if self.ambient_small {
            options.push(Family::Ambient);
        }
        *options.choose(rng).expect("nonempty")
    }

    /// Draws a family, 1–3 elements from it, optionally conjugates by a
    /// random element of `GL_n(q)`, and returns the generators.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> (Family, Vec<Matrix>) {
        let family = self.pick_family(rng);
        let count = if family == Family::Cyclic { 1 } else { rng.gen_range(1..=3) };
        let mut gens: Vec<Matrix> = (0..count)
            .map(|_| match family {
                Family::Cyclic | Family::Ambient => self.random_invertible(rng),
                Family::Borel => self.triangular(rng, false),
                Family::Unitriangular => self.triangular(rng, true),
                Family::Monomial => self.monomial(rng),
                Family::SingerNormalizer => self.singer_normalizer_element(rng),
                Family::SylowTwo => {
                    let p = self.sylow_two.as_ref().expect("family offered");
                    p.element(rng.gen_range(0..p.order())).clone()
                }
            })
            .collect();
        if rng.gen_bool(0.5) {
            let x = self.random_invertible(rng);
            let xi = x.inverse();
            gens = gens.iter().map(|g| xi.mul(g).mul(&x)).collect();
        }
        (family, gens)
    }

    /// The subgroup generated by a fresh draw, or `None` past `cap`.
    pub fn sample(&self, rng: &mut ChaCha8Rng, cap: usize) -> (Family, Vec<Matrix>, Option<FiniteGroup<Matrix>>) {
        let (family, gens) = self.draw(rng);
        let group = closure(&gens, cap).ok();
        (family, gens, group)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::part_arith::gl_order;
    use rand::SeedableRng;

    #[test]
    fn gl_generators_generate() {
        for (n, q) in [(2usize, 3u64), (2, 5), (2, 7), (3, 3), (2, 9)] {
            let ctx = GLContext::of_order(n, q).unwrap();
            let g = closure(&gl_generators(&ctx), 1 << 20).unwrap();
            assert_eq!(num_bigint::BigUint::from(g.order()), gl_order(n as u32, q), "GL_{n}({q})");
        }
    }

    #[test]
    fn singer_cycle_and_frobenius() {
        for (n, q) in [(2usize, 7u64), (3, 7), (2, 13), (3, 3)] {
            let ctx = GLContext::of_order(n, q).unwrap();
            let s = singer_cycle(&ctx).unwrap();
            let order = q.pow(n as u32) - 1;
            assert!(has_exact_order(&s, order));
            let f = singer_frobenius(&s, q).unwrap();
            assert!(f.pow(n as u64).is_identity());
            assert_eq!(f.inverse().mul(&s).mul(&f), s.pow(q));
            let norm = closure(&[s, f], 100_000).unwrap();
            assert_eq!(norm.order() as u64, order * n as u64);
        }
    }

    #[test]
    fn draws_are_deterministic() {
        let ctx = GLContext::of_order(3, 7).unwrap();
        let s = Sampler::new(&ctx, 20_000).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(s.draw(&mut a).1, s.draw(&mut b).1);
        }
    }
}
