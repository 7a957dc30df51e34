//! Exact dense linear algebra over prime fields.
//!
//! Entries are stored as `u8` residues, so every prime up to 251 is supported.
//! Elimination is deterministic: pivots are always the first nonzero column of
//! the vector being inserted, and rows are never reordered behind the caller's
//! back. For `p = 2` the echelon forms switch to bit-packed rows internally;
//! results are identical to the dense path.

mod echelon;
mod matrix;
pub mod poly;
mod subspace;

pub use echelon::Echelon;
pub use matrix::FpMatrix;
pub use subspace::{quotient_basis, QuotientBasis, SubspaceBasis};

use crate::error::{Error, Result};

pub const MAX_PRIME: u32 = 251;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) && p <= MAX_PRIME {
        Ok(())
    } else {
        Err(Error::NotAPrime(p))
    }
}

#[inline]
pub fn add(a: u8, b: u8, p: u32) -> u8 {
    ((a as u32 + b as u32) % p) as u8
}

#[inline]
pub fn sub(a: u8, b: u8, p: u32) -> u8 {
    ((a as u32 + p - b as u32) % p) as u8
}

#[inline]
pub fn mul(a: u8, b: u8, p: u32) -> u8 {
    ((a as u32 * b as u32) % p) as u8
}

#[inline]
pub fn neg(a: u8, p: u32) -> u8 {
    ((p - a as u32) % p) as u8
}

/// Multiplicative inverse of a nonzero residue.
pub fn inv(a: u8, p: u32) -> u8 {
    debug_assert!(!(a as u32).is_multiple_of(p));
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u8
}

/// Reduce an arbitrary integer into `[0, p)`.
pub fn residue(x: i64, p: u32) -> u8 {
    x.rem_euclid(p as i64) as u8
}

/// `dst += c * src` entrywise, modulo `p`.
#[inline]
pub fn axpy(dst: &mut [u8], c: u8, src: &[u8], p: u32) {
    if c == 0 {
        return;
    }
    let c = c as u32;
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = ((*d as u32 + c * s as u32) % p) as u8;
        }
    }
}

pub fn scale(v: &mut [u8], c: u8, p: u32) {
    for x in v.iter_mut() {
        *x = mul(*x, c, p);
    }
}

pub fn is_zero(v: &[u8]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Column space of `a`, as an RREF basis.
pub fn image_basis(a: &FpMatrix) -> SubspaceBasis {
    Echelon::from_rows(a.p(), a.rows(), a.transpose().rows_iter()).rref_basis()
}

/// `{ v : a v = 0 }`.
pub fn kernel_basis(a: &FpMatrix) -> SubspaceBasis {
    SubspaceBasis::from_independent(a.p(), a.cols(), right_kernel(a))
}

pub fn rank(a: &FpMatrix) -> usize {
    Echelon::from_rows(a.p(), a.cols(), a.rows_iter()).rank()
}

/// Basis of `{ v : a v = 0 }`, one vector per free column of the RREF.
pub fn right_kernel(a: &FpMatrix) -> Vec<Vec<u8>> {
    kernel_of_rows(&Echelon::from_rows(a.p(), a.cols(), a.rows_iter()))
}

/// Basis of the vectors orthogonal (under the plain dot product) to every row of `ech`.
pub fn kernel_of_rows(ech: &Echelon) -> Vec<Vec<u8>> {
    let p = ech.p();
    let n = ech.width();
    let rref = ech.rref_rows();
    let mut is_pivot = vec![None; n];
    for (i, (c, _)) in rref.iter().enumerate() {
        is_pivot[*c] = Some(i);
    }
    let mut out = Vec::new();
    for f in 0..n {
        if is_pivot[f].is_some() {
            continue;
        }
        let mut v = vec![0u8; n];
        v[f] = 1;
        for (c, row) in &rref {
            v[*c] = neg(row[f], p);
        }
        out.push(v);
    }
    out
}

/// Basis of `{ x : x^T a = 0 }`: the linear dependencies among the rows of `a`.
pub fn left_kernel(a: &FpMatrix) -> Vec<Vec<u8>> {
    let p = a.p();
    let (m, n) = (a.rows(), a.cols());
    let mut ech = Echelon::with_pivot_limit(p, n + m, n);
    let mut out = Vec::new();
    for i in 0..m {
        let mut v = vec![0u8; n + m];
        v[..n].copy_from_slice(a.row(i));
        v[n + i] = 1;
        if let Err(rem) = ech.insert(v) {
            out.push(rem[n..].to_vec());
        }
    }
    out
}

/// Some `x` with `a x = b`, free variables set to zero; `None` when `b` is not in the image.
pub fn solve(a: &FpMatrix, b: &[u8]) -> Result<Option<Vec<u8>>> {
    let p = a.p();
    let (m, n) = (a.rows(), a.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: b.len() });
    }
    // Augmented system [A | b]; pivots restricted to the coefficient columns.
    let mut ech = Echelon::with_pivot_limit(p, n + 1, n);
    for (i, &bi) in b.iter().enumerate() {
        let mut v = Vec::with_capacity(n + 1);
        v.extend_from_slice(a.row(i));
        v.push(bi % p as u8);
        if let Err(rem) = ech.insert(v) {
            if rem[n] != 0 {
                return Ok(None);
            }
        }
    }
    let rref = ech.rref_rows();
    let mut x = vec![0u8; n];
    for (c, row) in rref {
        x[c] = row[n];
    }
    Ok(Some(x))
}
