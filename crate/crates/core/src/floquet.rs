//! Bloch matrices of the two periodic chains, band sampling and gaps.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::{herm_eigen, HermMatrix};
use crate::error::{Error, Result};
use crate::format::fmt_num;

/// Endpoints closer than this are treated as touching when bands are merged.
pub const TOUCH_TOL: f64 = 1e-9;
pub const DEFAULT_SAMPLES: usize = 1024;

/// Fundamental domain of a Z-periodic graph. `hop[i][j] == 1` iff vertex `i`
/// is adjacent to the copy of vertex `j` in the next domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicLattice {
    pub name: &'static str,
    pub w: usize,
    pub degree: usize,
    pub intra: Vec<Vec<u8>>,
    pub hop: Vec<Vec<u8>>,
}

impl PeriodicLattice {
    fn from_edges(name: &'static str, w: usize, degree: usize, intra: &[(usize, usize)], hop: &[(usize, usize)]) -> Self {
        let mut a = vec![vec![0u8; w]; w];
        for &(i, j) in intra {
            a[i - 1][j - 1] = 1;
            a[j - 1][i - 1] = 1;
        }
        let mut h = vec![vec![0u8; w]; w];
        for &(i, j) in hop {
            h[i - 1][j - 1] = 1;
        }
        PeriodicLattice {
            name,
            w,
            degree,
            intra: a,
            hop: h,
        }
    }

    /// Row sums of `intra + hop + hop^T`.
    pub fn row_degrees(&self) -> Vec<usize> {
        (0..self.w)
            .map(|i| {
                (0..self.w)
                    .map(|j| (self.intra[i][j] + self.hop[i][j] + self.hop[j][i]) as usize)
                    .sum()
            })
            .collect()
    }
}

/// The cubic chain: a `K4` minus the edge `{1, 4}`, with 1 joined to the next copy of 4.
pub fn delta_lattice() -> PeriodicLattice {
    PeriodicLattice::from_edges("delta", 4, 3, &[(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)], &[(1, 4)])
}

/// The quartic chain: `K5` minus `{1, 4}` and `{1, 5}`, with 1 joined to the next copies of 4 and 5.
pub fn gamma_lattice() -> PeriodicLattice {
    PeriodicLattice::from_edges(
        "gamma",
        5,
        4,
        &[(1, 2), (1, 3), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
        &[(1, 4), (1, 5)],
    )
}

/// `intra + e^{i theta} hop + e^{-i theta} hop^T`.
pub fn build_bloch_matrix(l: &PeriodicLattice, theta: f64) -> HermMatrix {
    let mut h = HermMatrix::zeros(l.w);
    let phase = Complex64::from_polar(1.0, theta);
    for i in 0..l.w {
        for j in i..l.w {
            let z = Complex64::new(l.intra[i][j] as f64, 0.0)
                + phase * l.hop[i][j] as f64
                + phase.conj() * l.hop[j][i] as f64;
            h.set(i, j, z);
        }
    }
    h
}

/// Closed-form branch values of the cubic chain, in formula order (not sorted).
pub fn cubic_dispersion(theta: f64) -> [f64; 4] {
    use std::f64::consts::PI;
    let arg = ((5.0 + 27.0 * theta.cos()) / 32.0).clamp(-1.0, 1.0);
    let h = arg.asin() / 3.0;
    [
        1.0 / 3.0 - 8.0 / 3.0 * h.sin(),
        1.0 / 3.0 - 8.0 / 3.0 * (h + PI / 6.0).cos(),
        -1.0,
        1.0 / 3.0 + 8.0 / 3.0 * (h + PI / 3.0).sin(),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct BandStructure {
    /// `(theta, eigenvalues descending)`, sorted by theta.
    pub samples: Vec<(f64, Vec<f64>)>,
    /// `[min, max]` of the j-th largest eigenvalue over all samples.
    pub branch_bands: Vec<(f64, f64)>,
    /// Union of the branch bands, merged where they overlap or touch.
    pub bands: Vec<(f64, f64)>,
    /// Open intervals between consecutive merged bands.
    pub gaps: Vec<(f64, f64)>,
}

impl BandStructure {
    /// Branch bands with those contained in another branch band removed
    /// (drops flat bands lying inside a dispersive one), ascending.
    pub fn distinct_branch_bands(&self) -> Vec<(f64, f64)> {
        let bb = &self.branch_bands;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &(lo, hi)) in bb.iter().enumerate() {
            let contained = bb.iter().enumerate().any(|(j, &(l2, h2))| {
                j != i
                    && l2 - TOUCH_TOL <= lo
                    && hi <= h2 + TOUCH_TOL
                    && ((h2 - l2) > (hi - lo) + TOUCH_TOL || j < i)
            });
            if !contained {
                out.push((lo, hi));
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    pub fn to_csv(&self) -> String {
        let w = self.samples.first().map_or(0, |s| s.1.len());
        let mut out = String::from("theta");
        for j in 1..=w {
            out.push_str(&format!(",lambda{j}"));
        }
        out.push('\n');
        for (t, vals) in &self.samples {
            out.push_str(&fmt_num(*t));
            for v in vals {
                out.push(',');
                out.push_str(&fmt_num(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> String {
        let iv = |v: &[(f64, f64)]| -> Vec<[f64; 2]> { v.iter().map(|&(a, b)| [a, b]).collect() };
        serde_json::json!({
            "bands": iv(&self.bands),
            "gaps": iv(&self.gaps),
            "branch_bands": iv(&self.branch_bands),
        })
        .to_string()
    }
}

/// Uniform grid on `[-pi, pi]` (both ends included) plus `theta = 0`.
pub fn theta_grid(count: usize) -> Vec<f64> {
    use std::f64::consts::PI;
    let mut g: Vec<f64> = (0..count)
        .map(|k| -PI + 2.0 * PI * k as f64 / (count - 1) as f64)
        .collect();
    g[count - 1] = PI;
    if !g.contains(&0.0) {
        if count % 2 == 1 {
            g[count / 2] = 0.0;
        } else {
            g.push(0.0);
            g.sort_by(f64::total_cmp);
        }
    }
    g
}

pub fn sample_bands(l: &PeriodicLattice, count: usize) -> Result<BandStructure> {
    if count < 2 {
        return Err(Error::TooSmall(2));
    }
    let samples: Vec<(f64, Vec<f64>)> = theta_grid(count)
        .into_par_iter()
        .map(|t| herm_eigen(&build_bloch_matrix(l, t)).map(|s| (t, s.values)))
        .collect::<Result<_>>()?;
    let w = l.w;
    let branch_bands: Vec<(f64, f64)> = (0..w)
        .map(|j| {
            samples.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, v)| {
                (lo.min(v[j]), hi.max(v[j]))
            })
        })
        .collect();
    let bands = merge_intervals(&branch_bands);
    let gaps = bands.windows(2).map(|p| (p[0].1, p[1].0)).collect();
    Ok(BandStructure {
        samples,
        branch_bands,
        bands,
        gaps,
    })
}

/// Sorts and merges closed intervals that overlap or touch within [`TOUCH_TOL`].
pub fn merge_intervals(iv: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut v = iv.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in v {
        match out.last_mut() {
            Some(last) if lo <= last.1 + TOUCH_TOL => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    #[test]
    fn lattices_at_zero_are_complete_graphs() {
        for l in [delta_lattice(), gamma_lattice()] {
            let h = build_bloch_matrix(&l, 0.0);
            for i in 0..l.w {
                for j in 0..l.w {
                    let want = if i == j { 0.0 } else { 1.0 };
                    assert!((h.get(i, j) - Complex64::new(want, 0.0)).norm() < 1e-15);
                }
            }
            assert!(l.row_degrees().iter().all(|&d| d == l.degree));
        }
    }

    #[test]
    fn bloch_at_pi() {
        let h = build_bloch_matrix(&delta_lattice(), PI);
        assert!((h.get(0, 3).re + 1.0).abs() < 1e-15);
        let s = herm_eigen(&h).unwrap();
        let s5 = 5f64.sqrt();
        for (x, y) in s.values.iter().zip([s5, 1.0, -1.0, -s5]) {
            assert!((x - y).abs() < 1e-10);
        }
        let s = herm_eigen(&build_bloch_matrix(&gamma_lattice(), PI)).unwrap();
        let r = 17f64.sqrt();
        for (x, y) in s.values.iter().zip([3.0, (-1.0 + r) / 2.0, -1.0, -1.0, (-1.0 - r) / 2.0]) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn dispersion_special_points() {
        let d0 = sorted_desc(cubic_dispersion(0.0).to_vec());
        for (x, y) in d0.iter().zip([3.0, -1.0, -1.0, -1.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        let s5 = 5f64.sqrt();
        let dp = sorted_desc(cubic_dispersion(PI).to_vec());
        for (x, y) in dp.iter().zip([s5, 1.0, -1.0, -s5]) {
            assert!((x - y).abs() < 1e-10);
        }
        assert_eq!(cubic_dispersion(1.234)[2], -1.0);
    }

    #[test]
    fn merging() {
        let m = merge_intervals(&[(2.0, 3.0), (-1.0, 1.0), (-2.0, -1.0), (-1.0, -1.0)]);
        assert_eq!(m, vec![(-2.0, 1.0), (2.0, 3.0)]);
    }

    #[test]
    fn grid_has_forced_points() {
        let g = theta_grid(1024);
        assert_eq!(g.len(), 1025);
        assert_eq!(g[0], -PI);
        assert_eq!(*g.last().unwrap(), PI);
        assert!(g.contains(&0.0));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
