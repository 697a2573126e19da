//! Equitable partitions, quotient matrices and the first/second-type split
//! of an adjacency spectrum.

use std::collections::HashMap;

use serde::Serialize;

use crate::eigen::{sym_eigen, tridiag_eigen_bisect, Spectrum, Tridiag};
use crate::error::{Error, Result};
use crate::families::FamilyDescriptor;
use crate::graph::{adjacency_matrix, Graph, SymMatrix};

/// Bisection width used for tridiagonal quotients.
pub const QUOTIENT_BISECT_TOL: f64 = 1e-14;
/// Absolute tolerance of the greedy first/second-type matching.
pub const SPLIT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    /// Disjoint 1-based vertex cells covering `1..=n`, each sorted.
    pub cells: Vec<Vec<usize>>,
    /// Indices of singleton cells holding a cut vertex.
    pub cut_cells: Vec<usize>,
}

impl Partition {
    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell index of every vertex, 0-based vertex.
    pub fn cell_of(&self, n: usize) -> Vec<usize> {
        let mut c = vec![usize::MAX; n];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                c[v - 1] = i;
            }
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientMatrix {
    pub dim: usize,
    /// `q[i][j]` = neighbours in cell `j` of any vertex of cell `i`.
    pub q: Vec<Vec<i64>>,
    pub weights: Vec<usize>,
}

/// Colour refinement from the given initial colours until the number of
/// classes stops growing. Cells come out ordered by their smallest vertex.
pub fn refine_partition(g: &Graph, initial: &[usize]) -> Partition {
    let n = g.n();
    let adj = g.neighbors();
    let mut colour = canonical_relabel(initial);
    let mut classes = count_classes(&colour);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = adj[v].iter().map(|&w| colour[w]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut ids: HashMap<&(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| {
                let k = ids.len();
                *ids.entry(s).or_insert(k)
            })
            .collect();
        let next_classes = count_classes(&next);
        colour = next;
        if next_classes == classes {
            break;
        }
        classes = next_classes;
    }
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for v in 0..n {
        cells[colour[v]].push(v + 1);
    }
    cells.sort_by_key(|c| c[0]);
    Partition {
        cells,
        cut_cells: Vec::new(),
    }
}

fn canonical_relabel(c: &[usize]) -> Vec<usize> {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    c.iter()
        .map(|&x| {
            let k = ids.len();
            *ids.entry(x).or_insert(k)
        })
        .collect()
}

fn count_classes(c: &[usize]) -> usize {
    c.iter().copied().max().map_or(0, |m| m + 1)
}

/// Coarsest equitable partition: refinement from the single-cell partition.
/// For a regular graph this is the trivial partition.
pub fn coarsest_equitable_partition(g: &Graph) -> Partition {
    refine_partition(g, &vec![0; g.n()])
}

/// Refinement seeded by which end of the chain a vertex is closer to,
/// `sign(d(v, 1) - d(v, n))`. On the family graphs this recovers the
/// block-structure partition without reading the block tables.
pub fn end_anchored_partition(g: &Graph) -> Partition {
    let from_first = g.bfs_distances(1);
    let from_last = g.bfs_distances(g.n());
    let seed: Vec<usize> = from_first
        .iter()
        .zip(&from_last)
        .map(|(&a, &b)| match a.cmp(&b) {
            std::cmp::Ordering::Less => 0,
            std::cmp::Ordering::Equal => 1,
            std::cmp::Ordering::Greater => 2,
        })
        .collect();
    refine_partition(g, &seed)
}

/// The partition read off the block structure, checked to be equitable.
pub fn structural_partition(fd: &FamilyDescriptor, g: &Graph) -> Result<Partition> {
    let asm = fd.assemble();
    if asm.graph != *g {
        return Err(Error::NotEquitable(
            "graph does not match its descriptor".to_string(),
        ));
    }
    let p = Partition {
        cells: asm.cells,
        cut_cells: asm.cut_cells,
    };
    quotient_matrix(g, &p)?;
    Ok(p)
}

pub fn is_equitable(g: &Graph, p: &Partition) -> bool {
    quotient_matrix(g, p).is_ok()
}

pub fn quotient_matrix(g: &Graph, p: &Partition) -> Result<QuotientMatrix> {
    let n = g.n();
    let cell = p.cell_of(n);
    if let Some(v) = cell.iter().position(|&c| c == usize::MAX) {
        return Err(Error::NotEquitable(format!("vertex {} is in no cell", v + 1)));
    }
    let covered: usize = p.cells.iter().map(Vec::len).sum();
    if covered != n {
        return Err(Error::NotEquitable("cells overlap".to_string()));
    }
    let adj = g.neighbors();
    let k = p.cells.len();
    let mut q = vec![vec![0i64; k]; k];
    for (i, c) in p.cells.iter().enumerate() {
        for (t, &v) in c.iter().enumerate() {
            let mut row = vec![0i64; k];
            for &w in &adj[v - 1] {
                row[cell[w]] += 1;
            }
            if t == 0 {
                q[i] = row;
            } else if row != q[i] {
                return Err(Error::NotEquitable(format!(
                    "vertices {} and {v} of cell {i} differ",
                    c[0]
                )));
            }
        }
    }
    Ok(QuotientMatrix {
        dim: k,
        q,
        weights: p.sizes(),
    })
}

/// `D^{1/2} Q D^{-1/2}` with `D = diag(weights)`, written as `sqrt(q_ij q_ji)` so it is exactly symmetric.
pub fn symmetrize_quotient(qm: &QuotientMatrix) -> Result<SymMatrix> {
    for i in 0..qm.dim {
        for j in 0..qm.dim {
            if qm.weights[i] as i64 * qm.q[i][j] != qm.weights[j] as i64 * qm.q[j][i] {
                return Err(Error::NotSelfAdjoint(i, j));
            }
        }
    }
    Ok(SymMatrix::from_fn(qm.dim, |i, j| {
        if i == j {
            qm.q[i][i] as f64
        } else {
            ((qm.q[i][j] * qm.q[j][i]) as f64).sqrt()
        }
    }))
}

/// Eigenvalues of the quotient: Sturm bisection when the symmetrized matrix is
/// an irreducible tridiagonal, Jacobi otherwise.
pub fn quotient_spectrum(qm: &QuotientMatrix) -> Result<Spectrum> {
    let s = symmetrize_quotient(qm)?;
    match Tridiag::from_sym(&s) {
        Some(t) if t.off.iter().all(|&b| b != 0.0) => tridiag_eigen_bisect(&t, QUOTIENT_BISECT_TOL),
        _ => sym_eigen(&s, false),
    }
}

/// Whether the symmetrized quotient is tridiagonal with nonzero off-diagonal,
/// which forces pairwise distinct quotient eigenvalues.
pub fn quotient_is_irreducible_tridiagonal(qm: &QuotientMatrix) -> bool {
    symmetrize_quotient(qm)
        .ok()
        .and_then(|s| Tridiag::from_sym(&s))
        .is_some_and(|t| t.off.iter().all(|&b| b != 0.0))
}

/// Removes the quotient eigenvalues from the full spectrum, matching sorted
/// lists greedily within `tol`.
pub fn split_spectra(full: &Spectrum, first: &Spectrum, tol: f64) -> Result<Spectrum> {
    let mut second = Vec::new();
    let (f, q) = (&full.values, &first.values);
    let (mut i, mut j) = (0, 0);
    while i < f.len() {
        if j < q.len() && (f[i] - q[j]).abs() <= tol {
            i += 1;
            j += 1;
        } else if j >= q.len() || f[i] > q[j] {
            second.push(f[i]);
            i += 1;
        } else {
            return Err(Error::MatchFailure(format!(
                "quotient eigenvalue {} has no partner within {tol}",
                q[j]
            )));
        }
    }
    if j < q.len() {
        return Err(Error::MatchFailure(format!(
            "quotient eigenvalue {} has no partner within {tol}",
            q[j]
        )));
    }
    Ok(Spectrum::new(second, None))
}

/// `(first, second)`: quotient eigenvalues, and the rest of the spectrum.
pub fn split_spectrum_by_type(g: &Graph, p: &Partition, tol: f64) -> Result<(Spectrum, Spectrum)> {
    let qm = quotient_matrix(g, p)?;
    let first = quotient_spectrum(&qm)?;
    let full = sym_eigen(&adjacency_matrix(g), false)?;
    let second = split_spectra(&full, &first, tol)?;
    Ok((first, second))
}
