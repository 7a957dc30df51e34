use super::{axpy, Echelon};
use std::fmt;

/// Dense row-major matrix over 𝔽_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {}x{}) [", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "{:?}", self.row(r))?;
            if r + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries are reduced mod `p`.
    pub fn from_data(p: u32, rows: usize, cols: usize, mut data: Vec<u8>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match dimensions");
        for x in data.iter_mut() {
            *x = (*x as u32 % p) as u8;
        }
        FpMatrix { p, rows, cols, data }
    }

    /// All rows must have the same length; an empty list gives a 0x0 matrix.
    pub fn from_rows(p: u32, rows: Vec<Vec<u8>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(p, cols, rows)
    }

    pub fn from_rows_with_cols(p: u32, cols: usize, rows: Vec<Vec<u8>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Self::from_data(p, n, cols, data)
    }

    pub fn from_cols(p: u32, rows: usize, cols: Vec<Vec<u8>>) -> Self {
        Self::from_rows_with_cols(p, rows, cols).transpose()
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = (v as u32 % self.p) as u8;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u8] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[u8]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn col(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        assert_eq!(self.p, other.p, "mixed primes");
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, other.cols);
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a != 0 {
                    axpy(dst, a, other.row(k), p);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        let p = self.p;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % p as u64) as u8
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| super::add(a, b, p)).collect();
        FpMatrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| super::sub(a, b, p)).collect();
        FpMatrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, c: u8) -> FpMatrix {
        let p = self.p;
        let data = self.data.iter().map(|&a| super::mul(a, c, p)).collect();
        FpMatrix { p, rows: self.rows, cols: self.cols, data }
    }

    /// `self - λ I` for square matrices.
    pub fn minus_scalar(&self, lambda: u8) -> FpMatrix {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = super::sub(m.get(i, i), lambda, self.p);
            m.set(i, i, v);
        }
        m
    }

    pub fn kronecker(&self, other: &FpMatrix) -> FpMatrix {
        let p = self.p;
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = FpMatrix::zeros(p, r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let v = super::mul(a, other.get(k, l), p);
                        out.data[(i * r2 + k) * (c1 * c2) + j * c2 + l] = v;
                    }
                }
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows)
            .map(|r| {
                let mut v = self.row(r).to_vec();
                v.extend_from_slice(other.row(r));
                v
            })
            .collect();
        FpMatrix::from_rows_with_cols(self.p, self.cols + other.cols, rows)
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u8::from(r == c)))
    }

    pub fn rank(&self) -> usize {
        super::rank(self)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut ech = Echelon::with_pivot_limit(self.p, 2 * n, n);
        for r in 0..n {
            let mut v = self.row(r).to_vec();
            v.extend((0..n).map(|c| u8::from(c == r)));
            if ech.insert(v).is_err() {
                return None;
            }
        }
        let rows = ech.rref_rows().into_iter().map(|(_, row)| row[n..].to_vec()).collect();
        Some(FpMatrix::from_rows_with_cols(self.p, n, rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let a = FpMatrix::from_rows(7, vec![vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 2]]);
        let b = a.inverse().unwrap();
        assert!(a.mul(&b).is_identity());
        assert!(b.mul(&a).is_identity());
        let singular = FpMatrix::from_rows(2, vec![vec![1, 1], vec![1, 1]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn kronecker_ordering_is_lexicographic() {
        let a = FpMatrix::from_rows(5, vec![vec![1, 2], vec![3, 4]]);
        let i = FpMatrix::identity(5, 2);
        let k = a.kronecker(&i);
        // (i,j) basis index i*2 + j; a acts on the first factor.
        assert_eq!(k.get(0, 2), 2);
        assert_eq!(k.get(1, 3), 2);
        assert_eq!(k.get(2, 0), 3);
        assert_eq!(k.get(0, 1), 0);
    }
}
