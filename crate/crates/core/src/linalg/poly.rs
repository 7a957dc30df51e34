//! Univariate polynomials over 𝔽_p, enough to split characteristic
//! polynomials for the MeatAxe.

use super::{add, inv, mul, neg, sub, FpMatrix};
use rand::Rng;

/// Coefficients low to high, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    p: u32,
    c: Vec<u8>,
}

impl Poly {
    pub fn new(p: u32, mut c: Vec<u8>) -> Self {
        for x in c.iter_mut() {
            *x = (*x as u32 % p) as u8;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { p, c }
    }

    pub fn zero(p: u32) -> Self {
        Poly { p, c: vec![] }
    }

    pub fn one(p: u32) -> Self {
        Poly { p, c: vec![1] }
    }

    pub fn x(p: u32) -> Self {
        Poly { p, c: vec![0, 1] }
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u8 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| add(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0), self.p)).collect();
        Poly::new(self.p, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| sub(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0), self.p)).collect();
        Poly::new(self.p, c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.p);
        }
        let mut c = vec![0u8; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = add(c[i + j], mul(a, b, self.p), self.p);
            }
        }
        Poly::new(self.p, c)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let s = inv(self.lead(), self.p);
        Poly::new(self.p, self.c.iter().map(|&a| mul(a, s, self.p)).collect())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        let dd = d.deg();
        if r.len() < d.c.len() {
            return (Poly::zero(p), self.clone());
        }
        let li = inv(d.lead(), p);
        let mut q = vec![0u8; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = mul(r[i + dd], li, p);
            q[i] = coef;
            if coef != 0 {
                for (j, &b) in d.c.iter().enumerate() {
                    r[i + j] = sub(r[i + j], mul(coef, b, p), p);
                }
            }
        }
        (Poly::new(p, q), Poly::new(p, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// `f(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &FpMatrix) -> FpMatrix {
        let n = a.rows();
        let mut acc = FpMatrix::zeros(self.p, n, n);
        for &coef in self.c.iter().rev() {
            acc = acc.mul(a);
            for i in 0..n {
                let v = add(acc.get(i, i), coef, self.p);
                acc.set(i, i, v);
            }
        }
        acc
    }
}

/// Characteristic polynomial `det(xI - A)` via reduction to Hessenberg form.
pub fn charpoly(a: &FpMatrix) -> Poly {
    let p = a.p();
    let n = a.rows();
    assert_eq!(n, a.cols(), "charpoly of a non-square matrix");
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h.get(i, j) != 0) else {
            continue;
        };
        if i != j + 1 {
            for c in 0..n {
                let (x, y) = (h.get(i, c), h.get(j + 1, c));
                h.set(i, c, y);
                h.set(j + 1, c, x);
            }
            for r in 0..n {
                let (x, y) = (h.get(r, i), h.get(r, j + 1));
                h.set(r, i, y);
                h.set(r, j + 1, x);
            }
        }
        let piv = inv(h.get(j + 1, j), p);
        for k in j + 2..n {
            let u = mul(h.get(k, j), piv, p);
            if u == 0 {
                continue;
            }
            // row_k -= u * row_{j+1}; col_{j+1} += u * col_k
            for c in 0..n {
                let v = sub(h.get(k, c), mul(u, h.get(j + 1, c), p), p);
                h.set(k, c, v);
            }
            for r in 0..n {
                let v = add(h.get(r, j + 1), mul(u, h.get(r, k), p), p);
                h.set(r, j + 1, v);
            }
        }
    }
    // Leading-block recurrence.
    let mut polys: Vec<Poly> = vec![Poly::one(p)];
    for m in 1..=n {
        let diag = Poly::new(p, vec![neg(h.get(m - 1, m - 1), p), 1]);
        let mut pm = diag.mul(&polys[m - 1]);
        let mut prod = 1u8;
        for i in 1..m {
            prod = mul(prod, h.get(m - i, m - i - 1), p);
            let coef = mul(h.get(m - 1 - i, m - 1), prod, p);
            if coef != 0 {
                let term = polys[m - 1 - i].mul(&Poly::new(p, vec![coef]));
                pm = pm.sub(&term);
            }
        }
        polys.push(pm);
    }
    polys.pop().unwrap()
}

/// One monic irreducible factor of smallest degree of a nonconstant `f`.
pub fn smallest_irreducible_factor<R: Rng>(f: &Poly, rng: &mut R) -> Poly {
    let p = f.p;
    let f = f.monic();
    let n = f.deg();
    assert!(n >= 1, "constant polynomial has no irreducible factor");
    let x = Poly::x(p);
    let mut h = x.rem(&f);
    for k in 1..=n {
        h = h.powmod(p as u64, &f);
        let g = f.gcd(&h.sub(&x));
        if g.deg() >= 1 {
            return equal_degree_factor(g, k, rng);
        }
    }
    unreachable!("every polynomial has an irreducible factor of degree at most its degree")
}

/// Split a product of distinct irreducibles of degree `k` down to one factor.
fn equal_degree_factor<R: Rng>(mut g: Poly, k: usize, rng: &mut R) -> Poly {
    let p = g.p;
    while g.deg() > k {
        let n = g.deg();
        let u = Poly::new(p, (0..n).map(|_| rng.gen_range(0..p) as u8).collect());
        if u.deg() == 0 {
            continue;
        }
        let h = if p == 2 {
            let mut t = u.rem(&g);
            let mut acc = t.clone();
            for _ in 1..k {
                t = t.mul(&t).rem(&g);
                acc = acc.add(&t);
            }
            acc
        } else {
            // u^((p^k - 1)/2) = prod_i (u^((p-1)/2))^(p^i)
            let mut w = u.powmod(((p - 1) / 2) as u64, &g);
            let mut acc = w.clone();
            for _ in 1..k {
                w = w.powmod(p as u64, &g);
                acc = acc.mul(&w).rem(&g);
            }
            acc.sub(&Poly::one(p))
        };
        let d = g.gcd(&h);
        let dd = d.deg();
        if dd > 0 && dd < n {
            let other = g.divrem(&d).0.monic();
            g = if dd <= other.deg() { d } else { other };
        }
    }
    g
}
