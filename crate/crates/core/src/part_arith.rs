//! Exact "part" arithmetic on nonnegative integers.
//!
//! For an integer `k` and a prime `w`, the `w`-part `k_w` is the largest power
//! of `w` dividing `k` and `k_{w'} = k / k_w` is the complementary part. The
//! heart of `k` keeps the factor `gcd(k, 3)` together with the full `p`-parts
//! of `k` for every prime `p ≡ 1 (mod 3)`.
//!
//! Everything here is arbitrary precision: orders such as `|GL_6(49)|` do not
//! fit in 64 bits. Hot paths (class sizes during campaigns) use the `u64`
//! helpers, which agree with the big-integer versions.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_BASES_BIG: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES_U64 {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary-precision integers. Exact below 2^64; above that a
/// fixed-base Miller-Rabin over the first twenty primes.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    for &p in &MR_BASES_BIG {
        if (n % p).is_zero() {
            return false;
        }
    }
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in &MR_BASES_BIG {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization of a 64-bit integer.
pub fn factorize_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    if n < 2 {
        return out;
    }
    let tz = n.trailing_zeros();
    if tz > 0 {
        out.insert(2, tz);
        n >>= tz;
    }
    let mut d = 3u64;
    while n > 1 {
        if is_prime_u64(n) {
            *out.entry(n).or_insert(0) += 1;
            break;
        }
        if d.saturating_mul(d) > n {
            *out.entry(n).or_insert(0) += 1;
            break;
        }
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.insert(d, e);
        }
        d += 2;
    }
    out
}

/// Trial-division factorization with a primality shortcut on the cofactor.
pub fn factorize(n: &BigUint) -> BTreeMap<BigUint, u32> {
    if let Some(small) = n.to_u64() {
        return factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    let mut out = BTreeMap::new();
    let mut n = n.clone();
    let tz = n.trailing_zeros().unwrap_or(0) as u32;
    if tz > 0 {
        out.insert(BigUint::from(2u32), tz);
        n >>= tz;
    }
    let mut d = 3u64;
    loop {
        if let Some(small) = n.to_u64() {
            for (p, e) in factorize_u64(small) {
                *out.entry(BigUint::from(p)).or_insert(0) += e;
            }
            return out;
        }
        if is_prime(&n) {
            *out.entry(n).or_insert(0) += 1;
            return out;
        }
        let bd = BigUint::from(d);
        let mut e = 0;
        loop {
            let (quot, rem) = n.div_rem(&bd);
            if !rem.is_zero() {
                break;
            }
            n = quot;
            e += 1;
        }
        if e > 0 {
            out.insert(bd, e);
        }
        d += 2;
    }
}

/// A nonnegative integer carried together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartedInteger {
    value: BigUint,
    factors: BTreeMap<BigUint, u32>,
}

impl PartedInteger {
    pub fn new(value: impl Into<BigUint>) -> Self {
        let value = value.into();
        let factors = if value.is_zero() {
            BTreeMap::new()
        } else {
            factorize(&value)
        };
        PartedInteger { value, factors }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, u32> {
        &self.factors
    }

    /// Largest power of `w` dividing the value.
    pub fn part(&self, w: &BigUint) -> BigUint {
        match self.factors.get(w) {
            Some(&e) => num_traits::pow(w.clone(), e as usize),
            None => BigUint::one(),
        }
    }

    pub fn coprime_part(&self, w: &BigUint) -> BigUint {
        &self.value / self.part(w)
    }

    pub fn heart(&self) -> BigUint {
        let three = BigUint::from(3u32);
        let mut acc = BigUint::one();
        for (p, &e) in &self.factors {
            if *p == three {
                acc *= &three;
            } else if (p % 3u32) == BigUint::one() {
                acc *= num_traits::pow(p.clone(), e as usize);
            }
        }
        acc
    }
}

fn require_positive(k: &BigUint, what: &str) -> Result<()> {
    if k.is_zero() {
        return Err(Error::invalid(format!("{what} must be positive")));
    }
    Ok(())
}

fn require_prime(w: &BigUint) -> Result<()> {
    if !is_prime(w) {
        return Err(Error::invalid(format!("{w} is not prime")));
    }
    Ok(())
}

/// `k_w`: the largest divisor of `k` that is a power of the prime `w`.
pub fn part_pow(k: impl Into<BigUint>, w: impl Into<BigUint>) -> Result<BigUint> {
    let (k, w) = (k.into(), w.into());
    require_positive(&k, "k")?;
    require_prime(&w)?;
    let mut rest = k;
    let mut part = BigUint::one();
    loop {
        let (quot, rem) = rest.div_rem(&w);
        if !rem.is_zero() {
            return Ok(part);
        }
        rest = quot;
        part *= &w;
    }
}

/// `k_{w'} = k / k_w`.
pub fn part_coprime(k: impl Into<BigUint>, w: impl Into<BigUint>) -> Result<BigUint> {
    let (k, w) = (k.into(), w.into());
    let part = part_pow(k.clone(), w)?;
    Ok(k / part)
}

/// `gcd(k, 3)` times the full `p`-parts of `k` over primes `p ≡ 1 (mod 3)`.
pub fn heart(k: impl Into<BigUint>) -> Result<BigUint> {
    let k = k.into();
    require_positive(&k, "k")?;
    Ok(PartedInteger::new(k).heart())
}

/// The largest divisor of `heart(k)` coprime to `p`, computed as
/// `heart(k_{p'})`. The two agree because the heart is a product of full
/// prime-parts (plus at most one factor 3).
pub fn heart_coprime(k: impl Into<BigUint>, p: impl Into<BigUint>) -> Result<BigUint> {
    let (k, p) = (k.into(), p.into());
    let coprime = part_coprime(k, p)?;
    heart(coprime)
}

/// `q^{n-1} + ... + q + 1 = (q^n - 1)/(q - 1)`.
pub fn geom_sum(q: impl Into<BigUint>, n: u32) -> Result<BigUint> {
    let q = q.into();
    if q < BigUint::from(2u32) {
        return Err(Error::invalid("geom_sum requires q >= 2"));
    }
    if n == 0 {
        return Err(Error::invalid("geom_sum requires n >= 1"));
    }
    let top = num_traits::pow(q.clone(), n as usize) - 1u32;
    Ok(top / (q - 1u32))
}

/// Splits `q` as `p^a` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let factors = factorize_u64(q);
    if factors.len() == 1 {
        factors.into_iter().next()
    } else {
        None
    }
}

/// `|GL_n(q)| = ∏_{i=0}^{n-1} (q^n - q^i)`.
pub fn gl_order(n: u32, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let qn = num_traits::pow(q.clone(), n as usize);
    (0..n)
        .map(|i| &qn - num_traits::pow(q.clone(), i as usize))
        .product()
}

/// `|GL_n(q)|_2 = ∏_{i=1}^{n} (q^i - 1)_2` for an odd prime power `q`.
pub fn gl_order_two_part(n: u32, q: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    match prime_power(q) {
        Some((p, _)) if p != 2 => {}
        Some(_) => return Err(Error::invalid(format!("q = {q} is even"))),
        None => return Err(Error::invalid(format!("q = {q} is not a prime power"))),
    }
    let q_big = BigUint::from(q);
    let mut exponent: u64 = 0;
    for i in 1..=n {
        let term = num_traits::pow(q_big.clone(), i as usize) - 1u32;
        exponent += term.trailing_zeros().unwrap_or(0);
    }
    Ok(BigUint::one() << exponent)
}

/// `u64` fast path for [`heart_coprime`], used on class sizes.
pub fn heart_coprime_u64(k: u64, p: u64) -> u64 {
    debug_assert!(k >= 1);
    let mut k = k;
    while k % p == 0 {
        k /= p;
    }
    let mut acc = 1u64;
    for (r, e) in factorize_u64(k) {
        if r == 3 {
            acc *= 3;
        } else if r % 3 == 1 {
            acc *= r.pow(e);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    // Literal definitions, independent of the factorization path.
    fn part_oracle(k: u64, w: u64) -> u64 {
        (0..64)
            .map(|e| w.checked_pow(e))
            .take_while(|p| p.is_some())
            .flatten()
            .filter(|p| k % p == 0)
            .max()
            .unwrap()
    }

    fn heart_oracle(k: u64) -> u64 {
        let gcd3 = if k % 3 == 0 { 3 } else { 1 };
        let mut acc = gcd3;
        for r in 2..=k {
            if r % 3 == 1 && (2..r).all(|d| r % d != 0) && k % r == 0 {
                acc *= part_oracle(k, r);
            }
        }
        acc
    }

    fn heart_coprime_oracle(k: u64, p: u64) -> u64 {
        let h = heart_oracle(k);
        (1..=h).filter(|d| h % d == 0 && d % p != 0).max().unwrap()
    }

    #[test]
    fn part_pow_examples() {
        assert_eq!(part_pow(48u32, 2u32).unwrap(), big(16));
        assert_eq!(part_pow(7u32, 2u32).unwrap(), big(1));
        assert_eq!(part_pow(960u32, 2u32).unwrap(), big(part_oracle(960, 2)));
        assert_eq!(part_pow(960u32, 2u32).unwrap(), big(64));
    }

    #[test]
    fn part_coprime_examples() {
        assert_eq!(part_coprime(48u32, 2u32).unwrap(), big(3));
        assert_eq!(part_coprime(56u32, 7u32).unwrap(), big(8));
        assert_eq!(part_coprime(1u32, 5u32).unwrap(), big(1));
    }

    #[test]
    fn non_prime_modulus_rejected() {
        assert!(matches!(part_pow(48u32, 4u32), Err(Error::InvalidArgument(_))));
        assert!(matches!(part_coprime(48u32, 1u32), Err(Error::InvalidArgument(_))));
        assert!(part_pow(0u32, 2u32).is_err());
    }

    #[test]
    fn heart_examples() {
        assert_eq!(heart(21u32).unwrap(), big(21));
        assert_eq!(heart(1u32).unwrap(), big(1));
        assert_eq!(heart(20u32).unwrap(), big(1));
        assert_eq!(heart(9u32).unwrap(), big(3));
        for k in [21u64, 1, 20, 9, 91, 2016, 56] {
            assert_eq!(heart(k).unwrap(), big(heart_oracle(k)), "k={k}");
        }
    }

    #[test]
    fn heart_coprime_examples() {
        assert_eq!(heart_coprime(56u32, 7u32).unwrap(), big(1));
        assert_eq!(heart_coprime(21u32, 7u32).unwrap(), big(3));
        assert_eq!(heart_coprime(1u32, 7u32).unwrap(), big(1));
    }

    #[test]
    fn heart_coprime_matches_literal_definition() {
        for k in 1..=400u64 {
            for p in [2u64, 3, 5, 7, 13] {
                let want = heart_coprime_oracle(k, p);
                assert_eq!(heart_coprime(k, p).unwrap(), big(want), "k={k} p={p}");
                assert_eq!(heart_coprime_u64(k, p), want);
            }
        }
    }

    #[test]
    fn geom_sum_examples() {
        assert_eq!(geom_sum(7u32, 2).unwrap(), big(8));
        assert_eq!(geom_sum(9u32, 3).unwrap(), big(91));
        assert_eq!(geom_sum(31u32, 4).unwrap(), big(31 * 31 * 31 + 31 * 31 + 31 + 1));
        assert_eq!(geom_sum(31u32, 4).unwrap(), big(30784));
        assert!(geom_sum(1u32, 3).is_err());
    }

    #[test]
    fn gl_two_part_examples() {
        assert_eq!(gl_order_two_part(2, 7).unwrap(), big(32));
        assert_eq!(gl_order_two_part(2, 31).unwrap(), big(2 * 64));
        assert_eq!(gl_order_two_part(4, 31).unwrap(), big(2 * 64 * 2 * 128));
        assert_eq!(gl_order_two_part(3, 19).unwrap(), big(32));
        assert!(gl_order_two_part(2, 8).is_err());
        assert!(gl_order_two_part(2, 15).is_err());
    }

    #[test]
    fn gl_two_part_divides_full_order() {
        for q in [3u64, 5, 7, 9, 11, 13, 19, 25, 27, 31, 37, 43, 49] {
            for n in 1..=6 {
                let order = gl_order(n, q);
                let two = gl_order_two_part(n, q).unwrap();
                let full = PartedInteger::new(order.clone());
                assert_eq!(full.part(&big(2)), two, "n={n} q={q}");
                assert!((&order % &two).is_zero());
            }
        }
    }

    #[test]
    fn gl_order_small() {
        assert_eq!(gl_order(2, 7), big(2016));
        assert_eq!(gl_order(1, 7), big(6));
        assert_eq!(gl_order(3, 7), big(33_784_128));
    }

    #[test]
    fn factorization_of_large_order() {
        let order = gl_order(6, 49);
        let parted = PartedInteger::new(order.clone());
        let product: BigUint = parted
            .factors()
            .iter()
            .map(|(p, &e)| num_traits::pow(p.clone(), e as usize))
            .product();
        assert_eq!(product, order);
        assert!(parted.factors().keys().all(is_prime));
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let limit = 5000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                let mut j = i * i;
                while j < limit {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        for (n, &expected) in sieve.iter().enumerate() {
            assert_eq!(is_prime_u64(n as u64), expected, "n={n}");
        }
        // 2^89 - 1 is a Mersenne prime, 2^67 - 1 is not.
        assert!(is_prime(&((BigUint::one() << 89u32) - 1u32)));
        assert!(!is_prime(&((BigUint::one() << 67u32) - 1u32)));
    }

    proptest! {
        #[test]
        fn part_split_recombines(k in 1u64..1_000_000, w in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
            let a = part_pow(k, w).unwrap();
            let b = part_coprime(k, w).unwrap();
            prop_assert_eq!(a * b, big(k));
        }

        #[test]
        fn heart_divides_and_is_multiplicative(k in 1u64..20_000, m in 1u64..20_000) {
            let hk = heart(k).unwrap();
            prop_assert!((big(k) % &hk).is_zero());
            if k.gcd(&m) == 1 && !(k % 3 == 0 && m % 3 == 0) {
                prop_assert_eq!(heart(k * m).unwrap(), hk * heart(m).unwrap());
            }
        }

        #[test]
        fn heart_monotone_under_divisibility(a in 1u64..5_000, c in 1u64..200) {
            let b = a * c;
            let ha = heart(a).unwrap();
            let hb = heart(b).unwrap();
            prop_assert!((hb % ha).is_zero());
        }
    }
}
