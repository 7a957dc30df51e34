use super::{axpy, inv, neg, scale, subspace::SubspaceBasis};

/// Incremental semi-echelon basis.
///
/// Row `j` has pivot entry 1 at `pivots[j]` and is zero at the pivots of all
/// rows inserted before it. Reducing a vector against the rows in insertion
/// order therefore clears every pivot column, and the coefficients picked up
/// along the way are its unique coordinates in the span.
///
/// Pivots are only chosen among the first `pivot_limit` columns; the remaining
/// columns ride along (used for augmented systems and dependency tracking).
#[derive(Debug, Clone)]
pub struct Echelon {
    p: u32,
    width: usize,
    pivot_limit: usize,
    pivots: Vec<usize>,
    store: Store,
}

#[derive(Debug, Clone)]
enum Store {
    Dense(Vec<Vec<u8>>),
    Bits { words: usize, rows: Vec<Vec<u64>> },
}

fn pack(v: &[u8], words: usize) -> Vec<u64> {
    let mut out = vec![0u64; words];
    for (i, &x) in v.iter().enumerate() {
        if x & 1 == 1 {
            out[i >> 6] |= 1u64 << (i & 63);
        }
    }
    out
}

fn unpack(w: &[u64], width: usize) -> Vec<u8> {
    (0..width).map(|i| ((w[i >> 6] >> (i & 63)) & 1) as u8).collect()
}

#[inline]
fn bit(w: &[u64], i: usize) -> bool {
    (w[i >> 6] >> (i & 63)) & 1 == 1
}

fn first_set_bit(w: &[u64], limit: usize) -> Option<usize> {
    for (k, &word) in w.iter().enumerate() {
        if word != 0 {
            let i = k * 64 + word.trailing_zeros() as usize;
            return (i < limit).then_some(i);
        }
    }
    None
}

impl Echelon {
    pub fn new(p: u32, width: usize) -> Self {
        Self::with_pivot_limit(p, width, width)
    }

    pub fn with_pivot_limit(p: u32, width: usize, pivot_limit: usize) -> Self {
        assert!(pivot_limit <= width);
        let store = if p == 2 {
            Store::Bits { words: width.div_ceil(64).max(1), rows: Vec::new() }
        } else {
            Store::Dense(Vec::new())
        };
        Echelon { p, width, pivot_limit, pivots: Vec::new(), store }
    }

    pub fn from_rows<'a, I>(p: u32, width: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a [u8]>,
    {
        let mut e = Echelon::new(p, width);
        for r in rows {
            let _ = e.insert(r.to_vec());
        }
        e
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` in place; returns the coefficient of each row that was subtracted.
    pub fn reduce(&self, v: &mut Vec<u8>) -> Vec<u8> {
        assert_eq!(v.len(), self.width, "vector length does not match echelon width");
        let p = self.p;
        let mut coeffs = vec![0u8; self.pivots.len()];
        match &self.store {
            Store::Dense(rows) => {
                for (j, row) in rows.iter().enumerate() {
                    let c = v[self.pivots[j]];
                    if c != 0 {
                        coeffs[j] = c;
                        axpy(v, neg(c, p), row, p);
                    }
                }
            }
            Store::Bits { words, rows } => {
                let mut w = pack(v, *words);
                for (j, row) in rows.iter().enumerate() {
                    if bit(&w, self.pivots[j]) {
                        coeffs[j] = 1;
                        for (a, b) in w.iter_mut().zip(row) {
                            *a ^= b;
                        }
                    }
                }
                *v = unpack(&w, self.width);
            }
        }
        coeffs
    }

    /// Whether `v` lies in the span (ignoring columns past the pivot limit).
    pub fn contains(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w[..self.pivot_limit].iter().all(|&x| x == 0)
    }

    /// Insert `v`. Returns the new row index, or the reduced remainder when `v`
    /// is dependent on the rows so far (within the pivot columns).
    pub fn insert(&mut self, mut v: Vec<u8>) -> Result<usize, Vec<u8>> {
        let p = self.p;
        match &mut self.store {
            Store::Dense(rows) => {
                for (j, row) in rows.iter().enumerate() {
                    let c = v[self.pivots[j]];
                    if c != 0 {
                        axpy(&mut v, neg(c, p), row, p);
                    }
                }
                match v[..self.pivot_limit].iter().position(|&x| x != 0) {
                    None => Err(v),
                    Some(c) => {
                        let s = inv(v[c], p);
                        scale(&mut v, s, p);
                        rows.push(v);
                        self.pivots.push(c);
                        Ok(self.pivots.len() - 1)
                    }
                }
            }
            Store::Bits { words, rows } => {
                let mut w = pack(&v, *words);
                for (j, row) in rows.iter().enumerate() {
                    if bit(&w, self.pivots[j]) {
                        for (a, b) in w.iter_mut().zip(row) {
                            *a ^= b;
                        }
                    }
                }
                match first_set_bit(&w, self.pivot_limit) {
                    None => Err(unpack(&w, self.width)),
                    Some(c) => {
                        rows.push(w);
                        self.pivots.push(c);
                        Ok(self.pivots.len() - 1)
                    }
                }
            }
        }
    }

    pub fn row(&self, j: usize) -> Vec<u8> {
        match &self.store {
            Store::Dense(rows) => rows[j].clone(),
            Store::Bits { rows, .. } => unpack(&rows[j], self.width),
        }
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.rank()).map(|j| self.row(j)).collect()
    }

    /// Fully reduced rows sorted by pivot, as `(pivot, row)` pairs.
    pub fn rref_rows(&self) -> Vec<(usize, Vec<u8>)> {
        let p = self.p;
        let mut rows: Vec<(usize, Vec<u8>)> = self.pivots.iter().copied().zip(self.rows()).collect();
        rows.sort_by_key(|(c, _)| *c);
        // Back substitution from the largest pivot down; each row's entries left
        // of its pivot are already zero.
        for i in (0..rows.len()).rev() {
            for j in i + 1..rows.len() {
                let cj = rows[j].0;
                let c = rows[i].1[cj];
                if c != 0 {
                    let (head, tail) = rows.split_at_mut(j);
                    axpy(&mut head[i].1, neg(c, p), &tail[0].1, p);
                }
            }
        }
        rows
    }

    pub fn rref_basis(&self) -> SubspaceBasis {
        SubspaceBasis::from_rref(self.p, self.width, self.rref_rows().into_iter().map(|(_, r)| r).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_and_dense_paths_agree() {
        // Same vectors through p = 2 (packed) and an explicit dense reduction.
        let vecs: Vec<Vec<u8>> =
            (0..40u32).map(|s| (0..70).map(|i| (((s * 7 + i * 13) ^ (i * s)) % 2) as u8).collect()).collect();
        let mut packed = Echelon::new(2, 70);
        let mut dense = Echelon { p: 2, width: 70, pivot_limit: 70, pivots: vec![], store: Store::Dense(vec![]) };
        for v in &vecs {
            assert_eq!(packed.insert(v.clone()).is_ok(), dense.insert(v.clone()).is_ok());
        }
        assert_eq!(packed.pivots(), dense.pivots());
        assert_eq!(packed.rows(), dense.rows());
        assert_eq!(packed.rref_rows(), dense.rref_rows());
    }

    #[test]
    fn coefficients_reconstruct_vector() {
        let mut e = Echelon::new(5, 3);
        e.insert(vec![1, 2, 3]).unwrap();
        e.insert(vec![0, 1, 4]).unwrap();
        let target = vec![3, 1, 0];
        let mut v = target.clone();
        let c = e.reduce(&mut v);
        let mut back = v.clone();
        for (j, &cj) in c.iter().enumerate() {
            axpy(&mut back, cj, &e.row(j), 5);
        }
        assert_eq!(back, target);
    }
}
