//! Finite fields GF(p^a).
//!
//! Elements are packed as integers `Σ c_i p^i` over the polynomial basis
//! `1, x, ..., x^{a-1}`, reduced modulo the lexicographically smallest monic
//! irreducible polynomial of degree `a`. Multiplication goes through
//! discrete-log tables built from a primitive element found at construction,
//! which also proves the multiplicative group cyclic.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::part_arith::{factorize_u64, is_prime_u64};

/// Largest field size accepted by [`field_make`].
pub const FIELD_CAP: u64 = 1 << 20;

// Addition tables are only kept for small extension fields.
const ADD_TABLE_CAP: u32 = 1 << 10;

/// Shared handle to a field.
pub type Field = Arc<FieldSpec>;

/// A finite field GF(p^a) with its defining modulus and lookup tables.
pub struct FieldSpec {
    p: u32,
    a: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    frob: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.a == other.a && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.a, self.modulus)
    }
}

/// Builds GF(p^a) for an odd prime `p`.
pub fn field_make(p: u64, a: u32) -> Result<Field> {
    if p == 2 {
        return Err(Error::invalid("characteristic 2 is not supported"));
    }
    FieldSpec::build(p, a).map(Arc::new)
}

/// Builds GF(p^a) for any prime `p`, including 2. Only the plane module uses
/// even characteristic.
pub(crate) fn field_make_any_char(p: u64, a: u32) -> Result<Field> {
    FieldSpec::build(p, a).map(Arc::new)
}

/// Builds GF(q) from a prime power `q`.
pub fn field_of_order(q: u64) -> Result<Field> {
    let (p, a) = crate::part_arith::prime_power(q)
        .ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
    field_make(p, a)
}

pub(crate) fn field_of_order_any_char(q: u64) -> Result<Field> {
    let (p, a) = crate::part_arith::prime_power(q)
        .ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
    field_make_any_char(p, a)
}

// --- polynomials over GF(p), coefficient vectors low degree first ----------

fn poly_trim(f: &mut Vec<u32>) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

fn poly_is_zero(f: &[u32]) -> bool {
    f.iter().all(|&c| c == 0)
}

fn inv_mod_p(x: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = x as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    poly_trim(&mut r);
    let dg = g.len() - 1;
    let lead_inv = inv_mod_p(g[dg], p) as u64;
    while r.len() > dg && !poly_is_zero(&r) {
        let shift = r.len() - 1 - dg;
        let coef = r[r.len() - 1] as u64 * lead_inv % p as u64;
        for (i, &gc) in g.iter().enumerate() {
            let sub = coef * gc as u64 % p as u64;
            let cur = r[shift + i] as u64;
            r[shift + i] = ((cur + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(f: &[u32], g: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut base = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !poly_is_zero(&b) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style test: `f` of degree `a` is irreducible iff
/// `gcd(f, x^{p^i} - x) = 1` for every `1 <= i <= a/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let a = f.len() - 1;
    if a == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let mut xp = vec![0, 1];
    for _ in 1..=a / 2 {
        // xp <- xp^p mod f
        xp = poly_powmod(&xp, p as u64, f, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let g = poly_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn digits(mut v: u32, p: u32, a: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(a as usize);
    for _ in 0..a {
        out.push(v % p);
        v /= p;
    }
    out
}

fn pack(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl FieldSpec {
    fn build(p: u64, a: u32) -> Result<FieldSpec> {
        if !is_prime_u64(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if a == 0 {
            return Err(Error::invalid("field degree must be positive"));
        }
        let q = (p as u128).checked_pow(a).unwrap_or(u128::MAX);
        if q > FIELD_CAP as u128 {
            return Err(Error::resource(
                format!("field GF({p}^{a})"),
                FIELD_CAP as usize,
                q.min(usize::MAX as u128) as usize,
            ));
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = Self::smallest_irreducible(p, a);

        let mut field = FieldSpec {
            p,
            a,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            frob: Vec::new(),
            add_table: None,
        };
        field.build_tables()?;
        Ok(field)
    }

    /// Scans monic degree-`a` polynomials in increasing order of
    /// `(c_{a-1}, ..., c_0)` and returns the first irreducible one.
    fn smallest_irreducible(p: u32, a: u32) -> Vec<u32> {
        let count = p.pow(a);
        (0..count)
            .map(|n| {
                let mut f = digits(n, p, a);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree")
    }

    fn slow_mul(&self, x: u32, y: u32) -> u32 {
        let fx = digits(x, self.p, self.a);
        let fy = digits(y, self.p, self.a);
        let r = poly_mulmod(&fx, &fy, &self.modulus, self.p);
        pack(&r, self.p)
    }

    fn slow_pow(&self, x: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) -> Result<()> {
        let order = (self.q - 1) as u64;
        let primes: Vec<u64> = factorize_u64(order).into_keys().collect();
        let generator = (2..self.q)
            .chain(std::iter::once(1))
            .find(|&g| primes.iter().all(|&r| self.slow_pow(g, order / r) != 1))
            .ok_or_else(|| Error::Internal("multiplicative group is not cyclic".into()))?;

        let q = self.q as usize;
        let mut exp = vec![0u32; q - 1];
        let mut log = vec![u32::MAX; q];
        let mut cur = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            if log[cur as usize] != u32::MAX {
                return Err(Error::Internal("primitive element has short order".into()));
            }
            *slot = cur;
            log[cur as usize] = i as u32;
            cur = self.slow_mul(cur, generator);
        }
        if cur != 1 {
            return Err(Error::Internal("primitive element order mismatch".into()));
        }
        self.exp = exp;
        self.log = log;

        if self.a > 1 && self.q <= ADD_TABLE_CAP {
            let mut table = vec![0u32; q * q];
            for x in 0..self.q {
                for y in 0..self.q {
                    table[x as usize * q + y as usize] = self.digit_add(x, y);
                }
            }
            self.add_table = Some(table);
        }

        self.frob = (0..self.q).map(|x| self.pow(x, self.p as u64)).collect();
        Ok(())
    }

    fn digit_add(&self, mut x: u32, mut y: u32) -> u32 {
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.a {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        out
    }

    fn digit_neg(&self, mut x: u32) -> u32 {
        let p = self.p;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.a {
            let d = (p - x % p) % p;
            out += d * place;
            place *= p;
            x /= p;
        }
        out
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.a
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the monic modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Packed encoding of the primitive element used for the log tables.
    pub fn primitive_element(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        if self.a == 1 {
            let s = x + y;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if let Some(t) = &self.add_table {
            t[x as usize * self.q as usize + y as usize]
        } else {
            self.digit_add(x, y)
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        if self.a == 1 {
            if x == 0 {
                0
            } else {
                self.p - x
            }
        } else {
            self.digit_neg(x)
        }
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = self.log[x as usize] + self.log[y as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, x: u32) -> Result<u32> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[x as usize];
        Ok(self.exp[((n - l) % n) as usize])
    }

    pub fn pow(&self, x: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[x as usize] as u64;
        self.exp[((l * (e % n)) % n) as usize]
    }

    /// `x ↦ x^p`.
    #[inline]
    pub fn frob(&self, x: u32) -> u32 {
        self.frob[x as usize]
    }

    /// `x ↦ x^{p^k}`.
    pub fn frob_pow(&self, x: u32, k: u32) -> u32 {
        (0..k % self.a).fold(x, |acc, _| self.frob(acc))
    }

    pub fn mult_order(&self, x: u32) -> Result<u64> {
        if x == 0 {
            return Err(Error::invalid("zero has no multiplicative order"));
        }
        let n = (self.q - 1) as u64;
        let l = self.log[x as usize] as u64;
        Ok(n / num_integer::gcd(n, l))
    }

    /// Embeds an integer from the prime field.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn coeffs(&self, x: u32) -> Vec<u32> {
        digits(x, self.p, self.a)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

/// A field element tied to its field. Operations across different fields are
/// rejected rather than coerced.
#[derive(Clone)]
pub struct FieldElem {
    field: Field,
    value: u32,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && *self.field == *other.field
    }
}

impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.field.a.hash(state);
        self.value.hash(state);
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.a == 1 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{:?}", self.field.coeffs(self.value))
        }
    }
}

impl FieldElem {
    /// Wraps a packed value; fails if it is out of range.
    pub fn new(field: &Field, value: u32) -> Result<Self> {
        if value >= field.q {
            return Err(Error::invalid(format!(
                "{value} is not an element of GF({})",
                field.q
            )));
        }
        Ok(FieldElem {
            field: field.clone(),
            value,
        })
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u32]) -> Result<Self> {
        if coeffs.len() != field.a as usize || coeffs.iter().any(|&c| c >= field.p) {
            return Err(Error::invalid("coefficient vector out of range"));
        }
        Self::new(field, pack(coeffs, field.p))
    }

    pub fn zero(field: &Field) -> Self {
        FieldElem {
            field: field.clone(),
            value: 0,
        }
    }

    pub fn one(field: &Field) -> Self {
        FieldElem {
            field: field.clone(),
            value: 1,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElem) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::invalid("operands belong to different fields"))
        }
    }

    fn with(&self, value: u32) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElem {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.with(self.field.pow(self.value, e))
    }

    pub fn frobenius(&self) -> FieldElem {
        self.with(self.field.frob(self.value))
    }

    pub fn mult_order(&self) -> Result<u64> {
        self.field.mult_order(self.value)
    }
}
