//! Multi-indices, truncation boxes and truncated Hermite coefficient tensors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ln_factorial, SumMode};

/// A multi-index `α ∈ ℕᵈ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::domain("multi-index must have dimension d >= 1"));
        }
        Ok(MultiIndex(entries))
    }

    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = Σ αⱼ`.
    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `ln α! = Σ ln αⱼ!`.
    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&a| ln_factorial(a)).sum()
    }
}

impl From<MultiIndex> for Vec<usize> {
    fn from(m: MultiIndex) -> Self {
        m.0
    }
}

/// Per-axis maximum degrees. Enumerates `∏(Nⱼ+1)` multi-indices in lexicographic order
/// (last axis varies fastest).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncationBox(Vec<usize>);

impl TruncationBox {
    pub fn new(max_degree: Vec<usize>) -> Result<Self> {
        if max_degree.is_empty() {
            return Err(Error::domain("truncation box must have dimension d >= 1"));
        }
        Ok(TruncationBox(max_degree))
    }

    /// Box with the same degree `n` on each of `d` axes.
    pub fn cube(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![n; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn max_degree(&self) -> &[usize] {
        &self.0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.0.iter().map(|n| n + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|n| n + 1).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest order `|α|` such that every multi-index of that order lies in the box.
    pub fn complete_order(&self) -> usize {
        *self.0.iter().min().unwrap_or(&0)
    }

    pub fn max_order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn contains(&self, alpha: &[usize]) -> bool {
        alpha.len() == self.0.len() && alpha.iter().zip(&self.0).all(|(a, n)| a <= n)
    }

    pub fn flat_index(&self, alpha: &[usize]) -> Option<usize> {
        if !self.contains(alpha) {
            return None;
        }
        let mut idx = 0;
        for (a, n) in alpha.iter().zip(&self.0) {
            idx = idx * (n + 1) + a;
        }
        Some(idx)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (j, n) in self.0.iter().enumerate().rev() {
            out[j] = flat % (n + 1);
            flat /= n + 1;
        }
        out
    }

    /// Lexicographic enumeration of all multi-indices in the box.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.len()).map(move |i| self.multi_index(i))
    }

    /// `|α|` for every flat position, in storage order.
    pub fn orders(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.multi_index(i).iter().sum()).collect()
    }
}

/// Truncated Hermite coefficients `c(α)`, `α` ranging over a [`TruncationBox`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTensor {
    bx: TruncationBox,
    coeffs: Vec<Complex64>,
}

impl CoeffTensor {
    pub fn new(bx: TruncationBox, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != bx.len() {
            return Err(Error::domain(format!(
                "coefficient count {} does not match box size {}",
                coeffs.len(),
                bx.len()
            )));
        }
        Ok(CoeffTensor { bx, coeffs })
    }

    pub fn zeros(bx: TruncationBox) -> Self {
        let n = bx.len();
        CoeffTensor { bx, coeffs: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// The tensor with a single unit entry at `alpha`.
    pub fn unit(bx: TruncationBox, alpha: &[usize]) -> Result<Self> {
        let idx = bx
            .flat_index(alpha)
            .ok_or_else(|| Error::domain(format!("multi-index {alpha:?} outside box {:?}", bx.0)))?;
        let mut c = Self::zeros(bx);
        c.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(c)
    }

    /// Builds a tensor by evaluating `f` at every multi-index of the box.
    pub fn from_fn(bx: TruncationBox, mut f: impl FnMut(&[usize]) -> Complex64) -> Self {
        let coeffs = (0..bx.len()).map(|i| f(&bx.multi_index(i))).collect();
        CoeffTensor { bx, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.bx.dim()
    }

    pub fn truncation(&self) -> &TruncationBox {
        &self.bx
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn get(&self, alpha: &[usize]) -> Option<Complex64> {
        self.bx.flat_index(alpha).map(|i| self.coeffs[i])
    }

    pub fn set(&mut self, alpha: &[usize], value: Complex64) -> Result<()> {
        let i = self
            .bx
            .flat_index(alpha)
            .ok_or_else(|| Error::domain(format!("multi-index {alpha:?} outside box")))?;
        self.coeffs[i] = value;
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub(crate) fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::domain("coefficient tensor has non-finite entries"))
        }
    }

    /// Applies `f(α, c(α))` entrywise, keeping the box.
    pub fn map_indexed(&self, mut f: impl FnMut(&[usize], Complex64) -> Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f(&self.bx.multi_index(i), c))
            .collect();
        CoeffTensor { bx: self.bx.clone(), coeffs }
    }

    /// Copy of the tensor restricted to (or zero-padded into) another box of the same dimension.
    pub fn resized(&self, bx: TruncationBox) -> Result<Self> {
        if bx.dim() != self.dim() {
            return Err(Error::domain("dimension mismatch in resize"));
        }
        let mut out = Self::zeros(bx);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let alpha = self.bx.multi_index(i);
            if let Some(j) = out.bx.flat_index(&alpha) {
                out.coeffs[j] = c;
            }
        }
        Ok(out)
    }

    /// Smallest box holding every nonzero coefficient (at least degree 0 per axis).
    pub fn support_box(&self) -> TruncationBox {
        let mut max = vec![0; self.dim()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.norm_sqr() > 0.0 {
                for (m, a) in max.iter_mut().zip(self.bx.multi_index(i)) {
                    *m = (*m).max(a);
                }
            }
        }
        TruncationBox(max)
    }

    /// The tensor cut down to [`Self::support_box`].
    pub fn trimmed(&self) -> Self {
        let bx = self.support_box();
        if bx == self.bx {
            return self.clone();
        }
        self.resized(bx).expect("same dimension")
    }

    /// Largest `|α|` carrying a nonzero coefficient, `None` for the zero tensor.
    pub fn max_nonzero_order(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(i, _)| self.bx.multi_index(i).iter().sum())
            .max()
    }

    /// Shell maxima `m(k) = max_{|α| = k} |c(α)|` for the complete shells `k ≤ min Nⱼ`.
    pub fn shell_maxima(&self) -> Vec<f64> {
        let kmax = self.bx.complete_order();
        let mut m = vec![0.0f64; kmax + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k: usize = self.bx.multi_index(i).iter().sum();
            if k <= kmax {
                m[k] = m[k].max(c.norm());
            }
        }
        m
    }

    pub fn l2_norm_with(&self, mode: SumMode) -> f64 {
        let sq: Vec<f64> = self.coeffs.iter().map(|c| c.norm_sqr()).collect();
        mode.sum(&sq).sqrt()
    }
}

/// Euclidean norm of the coefficient tensor.
pub fn l2_norm(c: &CoeffTensor) -> f64 {
    c.l2_norm_with(SumMode::Sequential)
}
