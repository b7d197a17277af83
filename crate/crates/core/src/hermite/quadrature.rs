//! Tensor-product grids and Gauss–Hermite quadrature.
//!
//! Nodes come from the Golub–Welsch eigenproblem for the Jacobi matrix of the weight
//! `e^{-x²}` and are polished by Newton steps on the normalized recurrence. Weights are
//! stored pre-multiplied by `e^{x²}` so that `∫ g(x) dx ≈ Σ wₖ g(xₖ)` for integrands of
//! the form polynomial × `e^{-x²}`; in that form they never underflow.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::functions::ScaledSeq;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    Uniform,
    GaussHermite,
}

/// A tensor-product grid with per-axis quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    kind: GridKind,
    nodes: Vec<Vec<f64>>,
    weights: Vec<Vec<f64>>,
}

impl Grid {
    /// Uniformly spaced axes. Quadrature weights are the trapezoid weights.
    pub fn uniform(nodes: Vec<Vec<f64>>) -> Result<Self> {
        check_axes(&nodes)?;
        let mut weights = Vec::with_capacity(nodes.len());
        for axis in &nodes {
            if axis.len() < 2 {
                return Err(Error::domain("uniform axis needs at least two nodes"));
            }
            let h = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
            for w in axis.windows(2) {
                if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0) {
                    return Err(Error::domain("uniform axis is not equally spaced"));
                }
            }
            let mut wt = vec![h; axis.len()];
            wt[0] *= 0.5;
            *wt.last_mut().unwrap() *= 0.5;
            weights.push(wt);
        }
        Ok(Grid { kind: GridKind::Uniform, nodes, weights })
    }

    /// `n` equally spaced nodes on `[-half_width, half_width]` along each of `d` axes.
    pub fn uniform_cube(half_width: f64, n: usize, d: usize) -> Result<Self> {
        if n < 2 || !(half_width > 0.0) {
            return Err(Error::domain("uniform cube needs n >= 2 and positive half width"));
        }
        let axis: Vec<f64> = (0..n)
            .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
            .collect();
        Self::uniform(vec![axis; d])
    }

    /// Gauss–Hermite axes given explicitly.
    pub fn gauss_hermite(nodes: Vec<Vec<f64>>, weights: Vec<Vec<f64>>) -> Result<Self> {
        check_axes(&nodes)?;
        if nodes.len() != weights.len()
            || nodes.iter().zip(&weights).any(|(n, w)| n.len() != w.len())
        {
            return Err(Error::domain("node and weight counts differ"));
        }
        if weights.iter().flatten().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::domain("quadrature weights must be positive"));
        }
        Ok(Grid { kind: GridKind::GaussHermite, nodes, weights })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn axis(&self, j: usize) -> &[f64] {
        &self.nodes[j]
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn shape(&self) -> Vec<usize> {
        self.nodes.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.nodes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-axis positions of flat point `i` (lexicographic, last axis fastest).
    pub fn point_indices(&self, mut i: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for j in (0..self.dim()).rev() {
            let n = self.nodes[j].len();
            idx[j] = i % n;
            i /= n;
        }
        idx
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        self.point_indices(i)
            .iter()
            .enumerate()
            .map(|(j, &k)| self.nodes[j][k])
            .collect()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.point_indices(i)
            .iter()
            .enumerate()
            .map(|(j, &k)| self.weights[j][k])
            .product()
    }

    /// Whether the point sits on the outer face of the grid.
    pub fn on_boundary(&self, i: usize) -> bool {
        self.point_indices(i)
            .iter()
            .zip(&self.nodes)
            .any(|(&k, axis)| k == 0 || k + 1 == axis.len())
    }
}

fn check_axes(nodes: &[Vec<f64>]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::domain("grid must have dimension d >= 1"));
    }
    for axis in nodes {
        if axis.is_empty() {
            return Err(Error::domain("empty grid axis"));
        }
        if axis.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("non-finite grid node"));
        }
        if axis.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("grid nodes must be strictly increasing"));
        }
    }
    Ok(())
}

/// A one-dimensional Gauss–Hermite rule with `e^{x²}`-adjusted weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `ln` of the classical Christoffel weights (without the `e^{x²}` factor).
    pub ln_classical: Vec<f64>,
}

/// Cached `n`-point rule.
pub(crate) fn gauss_hermite_rule(n: usize) -> Arc<GaussHermiteRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussHermiteRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(compute_rule(n));
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

/// `n`-point Gauss–Hermite rule on each of `d` axes.
pub fn gauss_hermite_grid(n: usize, d: usize) -> Result<Grid> {
    if n == 0 {
        return Err(Error::domain("Gauss-Hermite rule needs n >= 1 nodes"));
    }
    if d == 0 {
        return Err(Error::domain("grid dimension must be >= 1"));
    }
    let rule = gauss_hermite_rule(n);
    Grid::gauss_hermite(vec![rule.nodes.clone(); d], vec![rule.weights.clone(); d])
}

fn compute_rule(n: usize) -> GaussHermiteRule {
    // Jacobi matrix of e^{-x²}: zero diagonal, off-diagonal sqrt(k/2).
    let diag = vec![0.0; n];
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut nodes = tridiagonal_eigenvalues(diag, off);
    nodes.sort_by(f64::total_cmp);
    for x in nodes.iter_mut() {
        *x = newton_polish(n, *x);
    }
    // Enforce exact symmetry.
    for i in 0..n / 2 {
        let a = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -a;
        nodes[n - 1 - i] = a;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    // Christoffel weight 1 / Σ_{k<n} p_k(x)², with p_k = h_k e^{x²/2}.
    let ln_classical: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let s = ScaledSeq::eval(n - 1, x);
            let (m, e) = s.common_exponent();
            let sum_sq: f64 = m.iter().map(|v| v * v).sum();
            -(sum_sq.ln() + 2.0 * e as f64 * std::f64::consts::LN_2)
        })
        .collect();
    let weights = nodes
        .iter()
        .zip(&ln_classical)
        .map(|(&x, &lw)| (lw + x * x).exp())
        .collect();
    GaussHermiteRule { nodes, weights, ln_classical }
}

fn newton_polish(n: usize, mut x: f64) -> f64 {
    // p_n'(x) = sqrt(2n) p_{n-1}(x) for the orthonormal polynomials p_k = h_k e^{x²/2}.
    for _ in 0..4 {
        let s = ScaledSeq::eval(n, x);
        let pn = s.mant[n];
        let pn1 = crate::numeric::ldexp(s.mant[n - 1], s.exp[n - 1] - s.exp[n]);
        if pn1 == 0.0 {
            break;
        }
        let dx = pn / ((2.0 * n as f64).sqrt() * pn1);
        x -= dx;
        if dx.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson shifts.
fn tridiagonal_eigenvalues(mut d: Vec<f64>, off: Vec<f64>) -> Vec<f64> {
    let n = d.len();
    if n == 0 {
        return d;
    }
    let mut e = off;
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = 0.0;
                let _ = f;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn one_point_rule() {
        let g = gauss_hermite_grid(1, 1).unwrap();
        assert_eq!(g.axis(0), &[0.0]);
        assert!((g.weights()[0][0] - PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule_closed_form() {
        let r = gauss_hermite_rule(2);
        assert!((r.nodes[1] - 0.5f64.sqrt()).abs() < 1e-15);
        // Classical weight √π/2, adjusted by e^{x²} = e^{1/2}.
        let expected = PI.sqrt() / 2.0 * 0.5f64.exp();
        assert!((r.weights[0] - expected).abs() < 1e-14);
    }

    #[test]
    fn integrates_gaussian_moments_exactly() {
        let r = gauss_hermite_rule(12);
        // ∫ x^{2m} e^{-x²} dx = Γ(m + 1/2)
        let gammas = [PI.sqrt(), PI.sqrt() / 2.0, 3.0 * PI.sqrt() / 4.0, 15.0 * PI.sqrt() / 8.0];
        for (m, want) in gammas.iter().enumerate() {
            let got: f64 = r
                .nodes
                .iter()
                .zip(&r.weights)
                .map(|(&x, &w)| w * x.powi(2 * m as i32) * (-x * x).exp())
                .sum();
            assert!((got - want).abs() < 1e-13, "m = {m}: {got} vs {want}");
        }
    }

    #[test]
    fn large_rules_are_symmetric_sorted_and_positive() {
        for n in [64usize, 160, 545] {
            let r = gauss_hermite_rule(n);
            assert_eq!(r.nodes.len(), n);
            assert!(r.nodes.windows(2).all(|w| w[1] > w[0]));
            assert!(r.weights.iter().all(|w| *w > 0.0 && w.is_finite()));
            for i in 0..n {
                assert_eq!(r.nodes[i], -r.nodes[n - 1 - i]);
            }
            // Largest node is close to the turning point sqrt(2n).
            assert!(r.nodes[n - 1] < (2.0 * n as f64).sqrt());
        }
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::uniform(vec![vec![0.0, 1.0, 1.0]]).is_err());
        assert!(Grid::uniform(vec![vec![0.0, 1.0, 3.0]]).is_err());
        assert!(Grid::gauss_hermite(vec![vec![0.0, 1.0]], vec![vec![1.0]]).is_err());
        assert!(Grid::gauss_hermite(vec![vec![0.0, 1.0]], vec![vec![1.0, -1.0]]).is_err());
        assert!(gauss_hermite_grid(0, 1).is_err());
        let g = gauss_hermite_grid(3, 2).unwrap();
        assert_eq!(g.shape(), vec![3, 3]);
        assert_eq!(g.point_indices(5), vec![1, 2]);
    }
}
