use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::perm::Perm;

/// An invertible `n × n` matrix over a finite field, row-major.
///
/// Matrices act on row vectors from the right, so `v·(AB) = (v·A)·B` and the
/// product order agrees with permutation composition.
#[derive(Clone)]
pub struct Matrix {
    field: Field,
    n: usize,
    entries: Box<[u32]>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.entries == other.entries
            && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl PartialOrd for Matrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Matrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, &self.entries).cmp(&(other.n, &other.entries))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.n {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    /// Builds a matrix from packed field entries, rejecting singular input.
    pub fn new(field: &Field, n: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * n || n == 0 {
            return Err(Error::invalid("entry count does not match dimension"));
        }
        if entries.iter().any(|&e| e >= field.order()) {
            return Err(Error::invalid("matrix entry outside the field"));
        }
        let m = Matrix {
            field: field.clone(),
            n,
            entries: entries.into_boxed_slice(),
        };
        if m.det() == 0 {
            return Err(Error::invalid("matrix is singular"));
        }
        Ok(m)
    }

    /// Convenience constructor from integers of the prime field.
    pub fn from_ints(field: &Field, n: usize, entries: &[i64]) -> Result<Self> {
        Matrix::new(field, n, entries.iter().map(|&v| field.from_int(v)).collect())
    }

    pub(crate) fn from_raw(field: &Field, n: usize, entries: Vec<u32>) -> Self {
        Matrix {
            field: field.clone(),
            n,
            entries: entries.into_boxed_slice(),
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        Matrix::scalar_raw(field, n, 1)
    }

    fn scalar_raw(field: &Field, n: usize, c: u32) -> Self {
        let mut e = vec![0u32; n * n];
        for i in 0..n {
            e[i * n + i] = c;
        }
        Matrix::from_raw(field, n, e)
    }

    pub fn scalar(field: &Field, n: usize, c: u32) -> Result<Self> {
        if c == 0 {
            return Err(Error::invalid("zero scalar is singular"));
        }
        Ok(Matrix::scalar_raw(field, n, c))
    }

    pub fn diagonal(field: &Field, diag: &[u32]) -> Result<Self> {
        let n = diag.len();
        let mut e = vec![0u32; n * n];
        for (i, &d) in diag.iter().enumerate() {
            e[i * n + i] = d;
        }
        Matrix::new(field, n, e)
    }

    /// The permutation matrix sending basis vector `e_i` to `e_{i^π}`.
    pub fn permutation(field: &Field, perm: &Perm) -> Self {
        let n = perm.degree();
        let mut e = vec![0u32; n * n];
        for i in 0..n {
            e[i * n + perm.apply(i as u32) as usize] = 1;
        }
        Matrix::from_raw(field, n, e)
    }

    /// Block-diagonal sum of square matrices over the same field.
    pub fn block_diagonal(blocks: &[&Matrix]) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::invalid("no blocks given"))?;
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut e = vec![0u32; n * n];
        let mut off = 0;
        for b in blocks {
            if *b.field != *first.field {
                return Err(Error::invalid("blocks over different fields"));
            }
            for r in 0..b.n {
                for c in 0..b.n {
                    e[(off + r) * n + off + c] = b.get(r, c);
                }
            }
            off += b.n;
        }
        Ok(Matrix::from_raw(&first.field, n, e))
    }

    /// Companion matrix of the monic polynomial with the given low-to-high
    /// coefficients (leading 1 omitted). Represents multiplication by `x` on
    /// the basis `1, x, ..., x^{d-1}` acting on row vectors.
    pub fn companion(field: &Field, coeffs: &[u32]) -> Result<Self> {
        let d = coeffs.len();
        let mut e = vec![0u32; d * d];
        for i in 0..d - 1 {
            e[i * d + i + 1] = 1;
        }
        for (j, &c) in coeffs.iter().enumerate() {
            e[(d - 1) * d + j] = field.neg(c);
        }
        Matrix::new(field, d, e)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.n + c]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.n..(r + 1) * self.n]
    }

    pub fn same_shape(&self, other: &Matrix) -> bool {
        self.n == other.n && (Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        debug_assert!(self.same_shape(other));
        let n = self.n;
        let f = &self.field;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.entries[k * n + j];
                    if b != 0 {
                        let cell = &mut out[i * n + j];
                        *cell = f.add(*cell, f.mul(a, b));
                    }
                }
            }
        }
        Matrix::from_raw(f, n, out)
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn gauss(&self) -> (u32, Option<Matrix>) {
        let n = self.n;
        let f = &self.field;
        let mut a = self.entries.to_vec();
        let mut inv = Matrix::identity(f, n).entries.to_vec();
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return (0, None);
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    inv.swap(piv * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[col * n + col];
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("pivot is nonzero");
            for j in 0..n {
                a[col * n + j] = f.mul(a[col * n + j], pinv);
                inv[col * n + j] = f.mul(inv[col * n + j], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[col * n + j]));
                    inv[r * n + j] = f.sub(inv[r * n + j], f.mul(factor, inv[col * n + j]));
                }
            }
        }
        (det, Some(Matrix::from_raw(f, n, inv)))
    }

    pub fn det(&self) -> u32 {
        self.gauss().0
    }

    pub fn inverse(&self) -> Matrix {
        self.gauss()
            .1
            .expect("matrices are invertible by construction")
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.entries[0] == 1
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.n;
        let d = self.entries[0];
        (0..n).all(|i| (0..n).all(|j| self.entries[i * n + j] == if i == j { d } else { 0 }))
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[u32]) -> Vec<u32> {
        let n = self.n;
        let f = &self.field;
        (0..n)
            .map(|j| {
                (0..n).fold(0u32, |acc, k| f.add(acc, f.mul(v[k], self.entries[k * n + j])))
            })
            .collect()
    }

    /// Applies a field automorphism `x ↦ x^{p^k}` to every entry.
    pub fn frobenius_twist(&self, k: u32) -> Matrix {
        let f = &self.field;
        Matrix::from_raw(f, self.n, self.entries.iter().map(|&x| f.frob_pow(x, k)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_make;

    #[test]
    fn inverse_and_det() {
        let f = field_make(7, 1).unwrap();
        let m = Matrix::from_ints(&f, 2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(m.det(), f.from_int(-2));
        assert!(m.mul(&m.inverse()).is_identity());
        assert!(Matrix::from_ints(&f, 2, &[1, 2, 2, 4]).is_err());
    }

    #[test]
    fn permutation_matrix_acts_like_permutation() {
        let f = field_make(5, 1).unwrap();
        let a = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let pa = Matrix::permutation(&f, &a);
        let pb = Matrix::permutation(&f, &b);
        assert_eq!(pa.mul(&pb), Matrix::permutation(&f, &a.then(&b)));
        assert_eq!(pa.apply_row(&[1, 0, 0]), vec![0, 1, 0]);
    }

    #[test]
    fn companion_has_polynomial_as_minimal_relation() {
        // x^2 + 1 over GF(3): C^2 = -I
        let f = field_make(3, 1).unwrap();
        let c = Matrix::companion(&f, &[1, 0]).unwrap();
        assert_eq!(c.pow(2), Matrix::scalar(&f, 2, 2).unwrap());
        assert_eq!(c.pow(4), Matrix::identity(&f, 2));
    }
}
