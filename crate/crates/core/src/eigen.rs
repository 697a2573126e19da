//! Dense symmetric and Hermitian eigensolvers, tridiagonal Sturm bisection
//! and multiplicity clustering.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::fmt_num;
use crate::graph::SymMatrix;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;
pub const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_STOP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// `vectors[k]` is a unit eigenvector for `values[k]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<f64>>>,
    /// `(representative, multiplicity)` at [`DEFAULT_CLUSTER_TOL`], in value order.
    pub clusters: Vec<(f64, usize)>,
}

impl Spectrum {
    /// Sorts descending (carrying vectors along) and clusters at the default tolerance.
    pub fn new(values: Vec<f64>, vectors: Option<Vec<Vec<f64>>>) -> Spectrum {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
        let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let vectors = vectors.map(|vs| order.iter().map(|&i| vs[i].clone()).collect());
        let clusters = cluster_multiplicities(&sorted, DEFAULT_CLUSTER_TOL);
        Spectrum {
            values: sorted,
            vectors,
            clusters,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn clusters_with(&self, tol: f64) -> Vec<(f64, usize)> {
        cluster_multiplicities(&self.values, tol)
    }

    /// Number of eigenvalues within `tol` of `x`.
    pub fn count_near(&self, x: f64, tol: f64) -> usize {
        self.values.iter().filter(|&&v| (v - x).abs() <= tol).count()
    }

    pub fn min_distance_to(&self, x: f64) -> f64 {
        self.values
            .iter()
            .map(|v| (v - x).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// `index,value,multiplicity_cluster` rows, 1-based index.
    pub fn to_csv(&self, tol: f64) -> String {
        let mut out = String::from("index,value,multiplicity_cluster\n");
        let clusters = self.clusters_with(tol);
        let mut k = 0;
        for &(_, mult) in &clusters {
            for _ in 0..mult {
                out.push_str(&format!("{},{},{}\n", k + 1, fmt_num(self.values[k]), mult));
                k += 1;
            }
        }
        out
    }
}

/// Cyclic Jacobi on a copy of `a`. Stops once the off-diagonal Frobenius norm
/// falls below `1e-12 * ||A||_F`.
pub fn sym_eigen(a: &SymMatrix, want_vectors: bool) -> Result<Spectrum> {
    let n = a.dim();
    let mut m = a.as_slice().to_vec();
    // Rows of `vt` are the eigenvector estimates.
    let mut vt = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };
    let norm = a.frobenius_norm();
    let stop = OFF_DIAGONAL_STOP * norm;
    let mut converged = n <= 1 || norm == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, vt.as_deref_mut(), n, p, q, sweep);
            }
        }
        sweep += 1;
        converged = off_norm(&m, n) <= stop;
    }
    let values: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let vectors = vt.map(|vt| vt.chunks(n.max(1)).map(|r| r.to_vec()).collect());
    Ok(Spectrum::new(values, vectors))
}

fn off_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i * n + j] * m[i * n + j];
            }
        }
    }
    s.sqrt()
}

#[inline]
fn rotate(m: &mut [f64], vt: Option<&mut [f64]>, n: usize, p: usize, q: usize, sweep: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let g = 100.0 * apq.abs();
    if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
        m[p * n + q] = 0.0;
        m[q * n + p] = 0.0;
        return;
    }
    let h = aqq - app;
    let t = if h.abs() + g == h.abs() {
        apq / h
    } else {
        let theta = 0.5 * h / apq;
        let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);
    m[p * n + p] = app - t * apq;
    m[q * n + q] = aqq + t * apq;
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = m[r * n + p];
        let arq = m[r * n + q];
        let np = arp - s * (arq + tau * arp);
        let nq = arq + s * (arp - tau * arq);
        m[r * n + p] = np;
        m[p * n + r] = np;
        m[r * n + q] = nq;
        m[q * n + r] = nq;
    }
    if let Some(vt) = vt {
        let (lo, hi) = vt.split_at_mut(q * n);
        let vp = &mut lo[p * n..(p + 1) * n];
        let vq = &mut hi[..n];
        for (x, y) in vp.iter_mut().zip(vq.iter_mut()) {
            let (a, b) = (*x, *y);
            *x = a - s * (b + tau * a);
            *y = b + s * (a - tau * b);
        }
    }
}

/// Hermitian matrix stored as a symmetric real part and antisymmetric imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct HermMatrix {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl HermMatrix {
    pub fn zeros(dim: usize) -> HermMatrix {
        HermMatrix {
            dim,
            re: vec![0.0; dim * dim],
            im: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sets entry `(i, j)` to `z` and `(j, i)` to its conjugate. Diagonal entries keep only the real part.
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        let d = self.dim;
        if i == j {
            self.re[i * d + i] = z.re;
            return;
        }
        self.re[i * d + j] = z.re;
        self.re[j * d + i] = z.re;
        self.im[i * d + j] = z.im;
        self.im[j * d + i] = -z.im;
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[i * self.dim + j], self.im[i * self.dim + j])
    }

    /// The real symmetric embedding `[[Re, -Im], [Im, Re]]`.
    pub fn real_embedding(&self) -> SymMatrix {
        let d = self.dim;
        SymMatrix::from_fn(2 * d, |i, j| {
            let (bi, ri) = (i / d, i % d);
            let (bj, rj) = (j / d, j % d);
            match (bi, bj) {
                (0, 0) | (1, 1) => self.re[ri * d + rj],
                (0, 1) => -self.im[ri * d + rj],
                _ => self.im[ri * d + rj],
            }
        })
    }
}

/// Eigenvalues of a Hermitian matrix. The real embedding doubles every
/// eigenvalue; the pairs are checked and merged.
pub fn herm_eigen(h: &HermMatrix) -> Result<Spectrum> {
    let emb = sym_eigen(&h.real_embedding(), false)?;
    let scale = emb.values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let pair_tol = 1e-8 * scale;
    let mut values = Vec::with_capacity(h.dim);
    for pair in emb.values.chunks(2) {
        match pair {
            [a, b] if (a - b).abs() <= pair_tol => values.push(0.5 * (a + b)),
            [a, ..] => return Err(Error::OddMultiplicity(*a)),
            [] => unreachable!(),
        }
    }
    Ok(Spectrum::new(values, None))
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiag {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Tridiag {
        assert_eq!(off.len() + 1, diag.len().max(1), "off-diagonal length must be dim - 1");
        Tridiag { diag, off }
    }

    /// Reads the band of a symmetric matrix, or `None` if anything lies outside it.
    pub fn from_sym(a: &SymMatrix) -> Option<Tridiag> {
        let n = a.dim();
        for i in 0..n {
            for j in i + 2..n {
                if a.get(i, j) != 0.0 {
                    return None;
                }
            }
        }
        Some(Tridiag {
            diag: (0..n).map(|i| a.get(i, i)).collect(),
            off: (1..n).map(|i| a.get(i - 1, i)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`, from the signs of the `LDL^T` pivots of `T - xI`.
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / d };
            if d.abs() < pivmin {
                d = -pivmin;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }
}

/// All eigenvalues by Sturm-count bisection to absolute width `tol`.
pub fn tridiag_eigen_bisect(t: &Tridiag, tol: f64) -> Result<Spectrum> {
    if let Some(i) = t.off.iter().position(|&b| b == 0.0) {
        return Err(Error::ZeroOffDiagonal(i));
    }
    let n = t.dim();
    let (lo0, hi0) = t.gershgorin();
    let pad = 1e-12 * (lo0.abs().max(hi0.abs()) + 1.0);
    let (lo0, hi0) = (lo0 - pad, hi0 + pad);
    let tol = tol.max(4.0 * f64::EPSILON * (lo0.abs().max(hi0.abs())));
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        // k-th smallest: the smallest x with count_below(x) > k.
        let (mut lo, mut hi) = (lo0, hi0);
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if t.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        values.push(0.5 * (lo + hi));
    }
    Ok(Spectrum::new(values, None))
}

/// Greedy chain clustering of sorted values: neighbours within `tol` merge.
/// Representatives are cluster means; output follows the input order.
pub fn cluster_multiplicities(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    for &v in values {
        match prev {
            Some(p) if (v - p).abs() <= tol => {
                let last = out.last_mut().expect("cluster open");
                last.1 += 1;
                sum += v;
                last.0 = sum / last.1 as f64;
            }
            _ => {
                out.push((v, 1));
                sum = v;
            }
        }
        prev = Some(v);
    }
    out
}

pub fn spectral_gap(s: &Spectrum) -> Result<f64> {
    if s.values.len() < 2 {
        return Err(Error::TooSmall(2));
    }
    Ok(s.values[0] - s.values[1])
}

pub fn smallest_eigenvalue(s: &Spectrum) -> f64 {
    *s.values.last().expect("spectrum is nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_delta;
    use crate::graph::{adjacency_matrix, make_graph};

    fn k4() -> SymMatrix {
        SymMatrix::from_fn(4, |i, j| if i == j { 0.0 } else { 1.0 })
    }

    #[test]
    fn complete_graph_and_edge() {
        let s = sym_eigen(&k4(), true).unwrap();
        assert!((s.values[0] - 3.0).abs() < 1e-12);
        for v in &s.values[1..] {
            assert!((v + 1.0).abs() < 1e-12);
        }
        assert_eq!(s.clusters.len(), 2);
        assert_eq!(s.clusters[1].1, 3);
        let e = sym_eigen(&adjacency_matrix(&make_graph(2, &[(1, 2)]).unwrap()), false).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && (e.values[1] + 1.0).abs() < 1e-15);
        assert!((spectral_gap(&sym_eigen(&k4(), false).unwrap()).unwrap() - 4.0).abs() < 1e-12);
        assert!((smallest_eigenvalue(&s) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn residuals_and_orthonormality() {
        let a = adjacency_matrix(&build_delta(30).unwrap());
        let s = sym_eigen(&a, true).unwrap();
        let vs = s.vectors.as_ref().unwrap();
        let norm = a.frobenius_norm();
        for (lam, v) in s.values.iter().zip(vs) {
            let av = a.mul_vec(v);
            let r: f64 = av.iter().zip(v).map(|(x, y)| (x - lam * y).powi(2)).sum::<f64>().sqrt();
            assert!(r <= 1e-10 * norm, "residual {r}");
        }
        for i in 0..vs.len() {
            for j in 0..vs.len() {
                let d: f64 = vs[i].iter().zip(&vs[j]).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn tridiagonal_bisection() {
        let t = Tridiag::new(vec![0.0, 0.0], vec![1.0]);
        let s = tridiag_eigen_bisect(&t, 1e-14).unwrap();
        assert!((s.values[0] - 1.0).abs() < 1e-13 && (s.values[1] + 1.0).abs() < 1e-13);
        let z = Tridiag::new(vec![1.0, 2.0, 3.0], vec![1.0, 0.0]);
        assert_eq!(tridiag_eigen_bisect(&z, 1e-12), Err(Error::ZeroOffDiagonal(1)));
        assert!(Tridiag::from_sym(&k4()).is_none());
    }

    #[test]
    fn hermitian_embedding() {
        let mut h = HermMatrix::zeros(2);
        h.set(0, 1, Complex64::new(0.0, 1.0));
        let s = herm_eigen(&h).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.values[0] - 1.0).abs() < 1e-12 && (s.values[1] + 1.0).abs() < 1e-12);
        assert_eq!(h.get(1, 0), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn clustering() {
        assert_eq!(cluster_multiplicities(&[3.0, -1.0, -1.0, -1.0], 1e-8), vec![(3.0, 1), (-1.0, 3)]);
        let c = cluster_multiplicities(&[1.0, 1.0 + 0.6e-7, 1.0 + 1.2e-7, 2.0], 1e-7);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, 3);
        assert!(cluster_multiplicities(&[], 1e-7).is_empty());
    }

    #[test]
    fn csv_rows() {
        let s = sym_eigen(&k4(), false).unwrap();
        let csv = s.to_csv(1e-8);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "index,value,multiplicity_cluster");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("1,3") && lines[1].ends_with(",1"));
        assert!(lines[4].ends_with(",3"));
    }
}
