use super::Echelon;
use crate::error::{Error, Result};

/// A subspace of 𝔽_p^n held as an RREF basis (pivots strictly increasing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    p: u32,
    ambient_dim: usize,
    basis: Vec<Vec<u8>>,
}

impl SubspaceBasis {
    pub(crate) fn from_rref(p: u32, ambient_dim: usize, basis: Vec<Vec<u8>>) -> Self {
        SubspaceBasis { p, ambient_dim, basis }
    }

    /// Span of arbitrary vectors.
    pub fn span(p: u32, ambient_dim: usize, vectors: impl IntoIterator<Item = Vec<u8>>) -> Self {
        let mut e = Echelon::new(p, ambient_dim);
        for v in vectors {
            let _ = e.insert(v);
        }
        e.rref_basis()
    }

    pub(crate) fn from_independent(p: u32, ambient_dim: usize, vectors: Vec<Vec<u8>>) -> Self {
        Self::span(p, ambient_dim, vectors)
    }

    pub fn whole(p: u32, n: usize) -> Self {
        Self::span(p, n, (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()))
    }

    pub fn zero(p: u32, n: usize) -> Self {
        SubspaceBasis { p, ambient_dim: n, basis: Vec::new() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vectors(&self) -> Vec<Vec<u8>> {
        self.basis.clone()
    }

    pub fn as_slice(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::from_rows(self.p, self.ambient_dim, self.basis.iter().map(|v| v.as_slice()))
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.echelon().contains(v)
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> bool {
        let e = self.echelon();
        other.basis.iter().all(|v| e.contains(v))
    }
}

/// `Z / B` with chosen representatives and a projection onto class coordinates.
#[derive(Debug, Clone)]
pub struct QuotientBasis {
    ech: Echelon,
    tags: Vec<Option<usize>>,
    reps: Vec<Vec<u8>>,
}

impl QuotientBasis {
    /// `sub` spans B; `cycles` spans Z. Containment is not checked here.
    pub(crate) fn build(sub: Echelon, cycles: impl IntoIterator<Item = Vec<u8>>) -> Self {
        let mut ech = sub;
        let mut tags = vec![None; ech.rank()];
        let mut reps = Vec::new();
        for z in cycles {
            if let Ok(j) = ech.insert(z) {
                debug_assert_eq!(j, tags.len());
                tags.push(Some(reps.len()));
                reps.push(ech.row(j));
            }
        }
        QuotientBasis { ech, tags, reps }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ech.width()
    }

    pub fn representatives(&self) -> &[Vec<u8>] {
        &self.reps
    }

    /// Coordinates of `z` in Z/B; errors when `z` is not in Z.
    pub fn project(&self, z: &[u8]) -> Result<Vec<u8>> {
        let mut v = z.to_vec();
        let coeffs = self.ech.reduce(&mut v);
        if v.iter().any(|&x| x != 0) {
            return Err(Error::NotContained);
        }
        let mut out = vec![0u8; self.reps.len()];
        for (j, c) in coeffs.into_iter().enumerate() {
            if let Some(k) = self.tags[j] {
                out[k] = c;
            }
        }
        Ok(out)
    }

    /// Whether `z` (assumed in Z) is zero in the quotient.
    pub fn is_trivial(&self, z: &[u8]) -> Result<bool> {
        Ok(self.project(z)?.iter().all(|&c| c == 0))
    }
}

/// Complete a basis of `b` to a basis of `z` modulo `b`.
pub fn quotient_basis(z: &SubspaceBasis, b: &SubspaceBasis) -> Result<QuotientBasis> {
    if z.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: z.ambient_dim(), got: b.ambient_dim() });
    }
    if !z.contains_subspace(b) {
        return Err(Error::NotContained);
    }
    Ok(QuotientBasis::build(b.echelon(), z.vectors()))
}
