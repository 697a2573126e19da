//! Block diagonalization by an involutive vertex symmetry.
//!
//! For the reversal `i -> n + 1 - i` of a mirror-symmetric chain the even and
//! odd subspaces are invariant, so each is diagonalized on its own. This keeps
//! the two nearly degenerate edge states apart: they sit in different sectors
//! even when their splitting is far below double precision.

use crate::eigen::{sym_eigen, Spectrum};
use crate::error::{Error, Result};
use crate::graph::{Graph, SymMatrix};

/// Reversal permutation on `0..n`.
pub fn reversal(n: usize) -> Vec<usize> {
    (0..n).rev().collect()
}

pub fn is_automorphism(g: &Graph, perm: &[usize]) -> bool {
    g.edges()
        .iter()
        .all(|&(u, v)| g.has_edge(perm[u - 1] + 1, perm[v - 1] + 1))
}

#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    /// Spectrum on the symmetric subspace, vectors lifted to the full space.
    pub even: Spectrum,
    /// Spectrum on the antisymmetric subspace, vectors lifted to the full space.
    pub odd: Spectrum,
}

impl SectorSpectrum {
    /// Both sectors merged into one descending spectrum.
    pub fn merged(&self) -> Spectrum {
        let mut values = self.even.values.clone();
        values.extend_from_slice(&self.odd.values);
        let vectors = match (&self.even.vectors, &self.odd.vectors) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Spectrum::new(values, vectors)
    }
}

/// Basis vector as `(index, coefficient)` pairs.
type SparseVec = Vec<(usize, f64)>;

/// Orthonormal sector bases.
fn sector_bases(perm: &[usize]) -> (Vec<SparseVec>, Vec<SparseVec>) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (i, &j) in perm.iter().enumerate() {
        if i == j {
            even.push(vec![(i, 1.0)]);
        } else if i < j {
            even.push(vec![(i, h), (j, h)]);
            odd.push(vec![(i, h), (j, -h)]);
        }
    }
    (even, odd)
}

fn project(a: &SymMatrix, basis: &[Vec<(usize, f64)>]) -> SymMatrix {
    SymMatrix::from_fn(basis.len(), |x, y| {
        let mut s = 0.0;
        for &(i, ci) in &basis[x] {
            for &(j, cj) in &basis[y] {
                s += ci * cj * a.get(i, j);
            }
        }
        s
    })
}

fn lift(s: Spectrum, basis: &[Vec<(usize, f64)>], n: usize) -> Spectrum {
    let vectors = s.vectors.map(|vs| {
        vs.iter()
            .map(|y| {
                let mut x = vec![0.0; n];
                for (coef, b) in y.iter().zip(basis) {
                    for &(i, c) in b {
                        x[i] += coef * c;
                    }
                }
                x
            })
            .collect()
    });
    Spectrum::new(s.values, vectors)
}

/// Eigen-decomposition of `a` split by the involution `perm` (which must commute with `a`).
pub fn sector_eigen(a: &SymMatrix, perm: &[usize], want_vectors: bool) -> Result<SectorSpectrum> {
    let n = a.dim();
    if perm.len() != n || perm.iter().enumerate().any(|(i, &j)| j >= n || perm[j] != i) {
        return Err(Error::Solver("permutation is not an involution".to_string()));
    }
    for i in 0..n {
        for j in 0..n {
            if a.get(perm[i], perm[j]) != a.get(i, j) {
                return Err(Error::Solver("matrix does not commute with the involution".to_string()));
            }
        }
    }
    let (eb, ob) = sector_bases(perm);
    let even = lift(sym_eigen(&project(a, &eb), want_vectors)?, &eb, n);
    let odd = if ob.is_empty() {
        Spectrum::new(Vec::new(), want_vectors.then(Vec::new))
    } else {
        lift(sym_eigen(&project(a, &ob), want_vectors)?, &ob, n)
    };
    Ok(SectorSpectrum { even, odd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_delta;
    use crate::graph::adjacency_matrix;

    #[test]
    fn sectors_reproduce_full_spectrum() {
        let g = build_delta(22).unwrap();
        let a = adjacency_matrix(&g);
        let perm = reversal(g.n());
        assert!(is_automorphism(&g, &perm));
        let s = sector_eigen(&a, &perm, true).unwrap();
        assert_eq!(s.even.len(), 11);
        assert_eq!(s.odd.len(), 11);
        let merged = s.merged();
        let full = sym_eigen(&a, false).unwrap();
        for (x, y) in merged.values.iter().zip(&full.values) {
            assert!((x - y).abs() < 1e-12);
        }
        for (lam, v) in s.odd.values.iter().zip(s.odd.vectors.as_ref().unwrap()) {
            let av = a.mul_vec(v);
            for i in 0..v.len() {
                assert!((av[i] - lam * v[i]).abs() < 1e-10);
                assert!((v[i] + v[g.n() - 1 - i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_non_commuting() {
        let a = SymMatrix::from_fn(3, |i, j| if j == i + 1 { 1.0 } else { 0.0 });
        assert!(sector_eigen(&a, &[1, 0, 2], false).is_err());
        assert!(sector_eigen(&a, &[1, 2, 0], false).is_err());
    }
}
