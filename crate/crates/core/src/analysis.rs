//! Audits over family spectra: gap intervals, simplicity, the multiplicity of
//! −1, convergence of the smallest eigenvalue, clique covers, interlacing,
//! Aldous–Fill ratios and edge-state localization.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::eigen::{spectral_gap, sym_eigen, Spectrum, DEFAULT_CLUSTER_TOL};
use crate::equitable::{
    quotient_is_irreducible_tridiagonal, quotient_matrix, quotient_spectrum, split_spectra,
    structural_partition, SPLIT_TOL,
};
use crate::error::{Error, Result};
use crate::families::{Family, FamilyDescriptor};
use crate::format::{csv_row, fmt_num};
use crate::graph::{adjacency_matrix, induced_subgraph, Graph};
use crate::recurrence::{
    cubic_excluded, cubic_limit_offsets, limit_eigenvalue, main_components_closed,
    recurrence_params, Kind,
};
use crate::sector::{reversal, sector_eigen};

/// One line of the audit JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct AuditRecord {
    pub check: String,
    pub family: String,
    pub n: usize,
    pub pass: bool,
    pub details: Value,
}

impl AuditRecord {
    pub fn new(check: &str, family: &str, n: usize, pass: bool, details: impl Serialize) -> AuditRecord {
        AuditRecord {
            check: check.to_string(),
            family: family.to_string(),
            n,
            pass,
            details: serde_json::to_value(details).unwrap_or(Value::Null),
        }
    }
}

pub fn recurrence_kind(family: Family) -> Kind {
    if family.is_cubic() {
        Kind::Cubic
    } else {
        Kind::Quartic
    }
}

fn spectrum_of(g: &Graph) -> Result<Spectrum> {
    sym_eigen(&adjacency_matrix(g), false)
}

// ---------------------------------------------------------------------------
// Gap intervals

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub closed_lo: bool,
    pub closed_hi: bool,
}

impl Interval {
    /// Membership with closed ends widened by `tol` and open ends narrowed by it.
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        let lo_ok = if self.closed_lo { x >= self.lo - tol } else { x > self.lo + tol };
        let hi_ok = if self.closed_hi { x <= self.hi + tol } else { x < self.hi - tol };
        lo_ok && hi_ok
    }

    pub fn distance(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GapAuditReport {
    pub family: Option<String>,
    pub n: usize,
    pub interval: Interval,
    pub tol: f64,
    pub offending: Vec<f64>,
    /// Distance from the spectrum to the closed hull `[lo, hi]`.
    pub min_distance: f64,
    pub pass: bool,
}

impl GapAuditReport {
    pub fn labelled(mut self, family: &str) -> GapAuditReport {
        self.family = Some(family.to_string());
        self
    }
}

pub fn gap_interval_audit(
    s: &Spectrum,
    lo: f64,
    hi: f64,
    closed_lo: bool,
    closed_hi: bool,
    tol: f64,
) -> GapAuditReport {
    let interval = Interval {
        lo,
        hi,
        closed_lo,
        closed_hi,
    };
    let offending: Vec<f64> = s
        .values
        .iter()
        .copied()
        .filter(|&x| interval.contains(x, tol))
        .collect();
    let min_distance = s
        .values
        .iter()
        .map(|&x| interval.distance(x))
        .fold(f64::INFINITY, f64::min);
    GapAuditReport {
        family: None,
        n: s.len(),
        interval,
        tol,
        pass: offending.is_empty(),
        offending,
        min_distance,
    }
}

// ---------------------------------------------------------------------------
// Simplicity

/// Values allowed to be multiple eigenvalues of a family graph.
pub fn exception_set(family: Family) -> Vec<f64> {
    match family {
        Family::Delta => vec![-1.0, 0.0],
        Family::Cubic => vec![-1.0],
        Family::Gamma | Family::Quartic => quartic_lambda_set(),
    }
}

/// `{-2, 0, ±1, -1 ± sqrt 2, (-1 ± sqrt 5)/2}`.
pub fn quartic_lambda_set() -> Vec<f64> {
    let (r2, r5) = (2f64.sqrt(), 5f64.sqrt());
    vec![-2.0, 0.0, 1.0, -1.0, -1.0 + r2, -1.0 - r2, (-1.0 + r5) / 2.0, (-1.0 - r5) / 2.0]
}

/// Where second-type eigenvalues may live.
pub fn second_type_reference(family: Family) -> Vec<f64> {
    let r5 = 5f64.sqrt();
    match family {
        Family::Delta => vec![0.0, -1.0],
        Family::Cubic => vec![0.0, -1.0, (-1.0 + r5) / 2.0, (-1.0 - r5) / 2.0],
        Family::Gamma | Family::Quartic => quartic_lambda_set(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterStatus {
    /// In the family's exception set.
    Exception,
    /// Numerically clustered, but every member is a quotient eigenvalue and
    /// the quotient separates them.
    CertifiedSimple,
    Violation,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterFinding {
    pub value: f64,
    pub multiplicity: usize,
    pub status: ClusterStatus,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplicityReport {
    pub family: Family,
    pub n: usize,
    pub tol: f64,
    pub non_simple: Vec<ClusterFinding>,
    /// Distinct second-type eigenvalues with multiplicities.
    pub second_type: Vec<(f64, usize)>,
    /// Second-type values lying outside [`second_type_reference`].
    pub second_type_unexpected: Vec<f64>,
    pub pass: bool,
}

impl SimplicityReport {
    pub fn ensure(&self) -> Result<()> {
        match self.non_simple.iter().find(|c| c.status == ClusterStatus::Violation) {
            None => Ok(()),
            Some(c) => Err(Error::AuditFailure(format!(
                "{} n={}: eigenvalue {} has multiplicity {}",
                self.family.as_str(),
                self.n,
                fmt_num(c.value),
                c.multiplicity
            ))),
        }
    }
}

pub fn simplicity_audit(fd: &FamilyDescriptor, tol: f64) -> Result<SimplicityReport> {
    let g = fd.build();
    let s = spectrum_of(&g)?;
    simplicity_audit_with(fd, &g, &s, tol)
}

/// As [`simplicity_audit`] on a precomputed spectrum of `g`.
pub fn simplicity_audit_with(
    fd: &FamilyDescriptor,
    g: &Graph,
    s: &Spectrum,
    tol: f64,
) -> Result<SimplicityReport> {
    let p = structural_partition(fd, g)?;
    let qm = quotient_matrix(g, &p)?;
    let first = quotient_spectrum(&qm)?;
    let tridiagonal = quotient_is_irreducible_tridiagonal(&qm);
    let second = split_spectra(s, &first, SPLIT_TOL)?;
    let exceptions = exception_set(fd.family);

    let mut non_simple = Vec::new();
    let mut start = 0;
    for (value, mult) in s.clusters_with(tol) {
        let members = &s.values[start..start + mult];
        start += mult;
        if mult == 1 {
            continue;
        }
        let (top, bottom) = (members[0], members[mult - 1]);
        let near = |x: f64| x <= top + tol && x >= bottom - tol;
        let (status, reason) = if exceptions.iter().any(|&e| (e - value).abs() <= tol) {
            (ClusterStatus::Exception, "listed exception".to_string())
        } else {
            let q: Vec<f64> = first.values.iter().copied().filter(|&x| near(x)).collect();
            let in_second = second.values.iter().filter(|&&x| near(x)).count();
            let spread = q.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
            if in_second > 0 || q.len() != mult {
                (ClusterStatus::Violation, format!("{in_second} second-type members"))
            } else if tridiagonal {
                (
                    ClusterStatus::CertifiedSimple,
                    "all members are eigenvalues of an irreducible tridiagonal quotient".to_string(),
                )
            } else if spread > 1e-10 {
                (
                    ClusterStatus::CertifiedSimple,
                    format!("quotient eigenvalues separated by {}", fmt_num(spread)),
                )
            } else {
                (ClusterStatus::Violation, "quotient does not separate the cluster".to_string())
            }
        };
        non_simple.push(ClusterFinding {
            value,
            multiplicity: mult,
            status,
            reason,
        });
    }

    let reference = second_type_reference(fd.family);
    let second_type = second.clusters_with(tol);
    let second_type_unexpected = second_type
        .iter()
        .map(|c| c.0)
        .filter(|x| !reference.iter().any(|r| (r - x).abs() <= 1e-6))
        .collect();
    let pass = non_simple.iter().all(|c| c.status != ClusterStatus::Violation);
    Ok(SimplicityReport {
        family: fd.family,
        n: fd.n,
        tol,
        non_simple,
        second_type,
        second_type_unexpected,
        pass,
    })
}

// ---------------------------------------------------------------------------
// Multiplicity of -1

/// `ceil((n-12)/4)` (cubic) or `ceil((2n-38)/5)` (quartic), zero when not positive.
pub fn minus_one_bound(family: Family, n: usize) -> usize {
    let (num, den) = if family.is_cubic() {
        (n as i64 - 12, 4)
    } else {
        (2 * n as i64 - 38, 5)
    };
    if num <= 0 {
        0
    } else {
        ((num + den - 1) / den) as usize
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplicityReport {
    pub family: Family,
    pub n: usize,
    pub multiplicity: usize,
    pub bound: usize,
    pub pass: bool,
}

impl MultiplicityReport {
    pub fn ensure(&self) -> Result<()> {
        if self.pass {
            Ok(())
        } else {
            Err(Error::AuditFailure(format!(
                "{} n={}: mult(-1) = {} < {}",
                self.family.as_str(),
                self.n,
                self.multiplicity,
                self.bound
            )))
        }
    }
}

pub fn minus_one_multiplicity_check(g: &Graph, family: Family) -> Result<MultiplicityReport> {
    Ok(minus_one_multiplicity_from(&spectrum_of(g)?, family))
}

pub fn minus_one_multiplicity_from(s: &Spectrum, family: Family) -> MultiplicityReport {
    let multiplicity = s.count_near(-1.0, DEFAULT_CLUSTER_TOL);
    let bound = minus_one_bound(family, s.len());
    MultiplicityReport {
        family,
        n: s.len(),
        multiplicity,
        bound,
        pass: multiplicity >= bound,
    }
}

// ---------------------------------------------------------------------------
// Convergence of the smallest eigenvalue

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub rho: f64,
    /// `|rho - limit|` from the computed spectrum.
    pub err: f64,
    /// `gap * n^2 / (2 pi^2)`.
    pub gap_ratio: f64,
    /// Eigenvalues in the window below the bottom band.
    pub window: Vec<f64>,
    pub window_max_err: f64,
    /// Δ only: `|rho - limit|` from the analytic offset equation, which stays
    /// accurate after `err` has fallen to rounding level.
    pub err_analytic: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceTable {
    pub family: Family,
    pub limit: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,rho,err,gap_ratio,err_analytic\n");
        for r in &self.rows {
            out.push_str(&csv_row(&[
                r.n.to_string(),
                fmt_num(r.rho),
                fmt_num(r.err),
                fmt_num(r.gap_ratio),
                r.err_analytic.map(fmt_num).unwrap_or_default(),
            ]));
        }
        out
    }
}

/// Window `[lo, hi]` below the bottom band where the limit point sits.
pub fn limit_window(family: Family) -> (f64, f64) {
    if family.is_cubic() {
        (-3.0, -(5f64.sqrt()))
    } else {
        (-4.0, -(1.0 + 17f64.sqrt()) / 2.0)
    }
}

pub fn gap_ratio(gap: f64, n: usize) -> f64 {
    gap * (n * n) as f64 / (2.0 * PI * PI)
}

pub fn convergence_study(family: Family, n_list: &[usize]) -> Result<ConvergenceTable> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let fds: Vec<FamilyDescriptor> = ns
        .iter()
        .map(|&n| FamilyDescriptor::for_family(family, n))
        .collect::<Result<_>>()?;
    let limit = limit_eigenvalue(recurrence_kind(family));
    let (wlo, whi) = limit_window(family);
    let rows = fds
        .par_iter()
        .map(|fd| -> Result<ConvergenceRow> {
            let s = spectrum_of(&fd.build())?;
            let rho = *s.values.last().ok_or(Error::TooSmall(1))?;
            let window: Vec<f64> = s.values.iter().copied().filter(|&x| x >= wlo && x <= whi).collect();
            let window_max_err = window.iter().map(|x| (x - limit).abs()).fold(0.0, f64::max);
            let err_analytic = if fd.family == Family::Delta && fd.m >= 1 {
                let (a, b) = cubic_limit_offsets(fd.m)?;
                Some(a.min(b).abs())
            } else {
                None
            };
            Ok(ConvergenceRow {
                n: fd.n,
                rho,
                err: (rho - limit).abs(),
                gap_ratio: gap_ratio(spectral_gap(&s)?, fd.n),
                window,
                window_max_err,
                err_analytic,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable { family, limit, rows })
}

// ---------------------------------------------------------------------------
// Clique covers

#[derive(Debug, Clone, Serialize)]
pub struct CliqueCoverDecomposition {
    pub n: usize,
    /// Vertex sets, 1-based, each of size 2 to 4.
    pub cliques: Vec<Vec<usize>>,
    /// Edges covered twice.
    pub b_edges: Vec<(usize, usize)>,
    /// Diagonal of `C`, indexed by vertex - 1.
    pub c_diag: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub cliques_valid: bool,
    pub max_abs_residual: i64,
    pub holds: bool,
}

impl CliqueCoverDecomposition {
    /// Vertex-clique incidence matrix `M`, `n x cliques`.
    pub fn incidence(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cliques.len()]; self.n];
        for (c, clique) in self.cliques.iter().enumerate() {
            for &v in clique {
                m[v - 1][c] = 1;
            }
        }
        m
    }

    /// Checks `M M^T = 2I + A + B + C` entrywise over the integers.
    pub fn check_identity(&self, g: &Graph) -> IdentityReport {
        let n = self.n;
        let cliques_valid = g.n() == n
            && self.cliques.iter().all(|c| {
                c.iter()
                    .enumerate()
                    .all(|(i, &u)| c[i + 1..].iter().all(|&v| g.has_edge(u, v)))
            });
        let m = self.incidence();
        let mut r = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                r[i][j] = m[i].iter().zip(&m[j]).map(|(a, b)| a * b).sum();
            }
            r[i][i] -= 2 + self.c_diag[i];
        }
        for &(u, v) in g.edges() {
            r[u - 1][v - 1] -= 1;
            r[v - 1][u - 1] -= 1;
        }
        for &(u, v) in &self.b_edges {
            r[u - 1][v - 1] -= 1;
            r[v - 1][u - 1] -= 1;
        }
        let max_abs_residual = r.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
        IdentityReport {
            cliques_valid,
            max_abs_residual,
            holds: cliques_valid && max_abs_residual == 0,
        }
    }
}

/// Edge-clique cover with the claimed `B` and `C`. Δ_n: triangles plus the
/// remaining edges as `K2`, `C = 1` at vertices 5 and n-4. Γ_n: `K4` and `K2`
/// on each end, `K3, K4, K3` on each middle block, `C = 2` at 5 and n-4 and
/// `C = 1` at 6 and n-5 (adding where they coincide). `B` is the set of
/// adjacent pairs forming a cell of the block partition.
pub fn build_clique_cover(fd: &FamilyDescriptor) -> Result<CliqueCoverDecomposition> {
    let asm = fd.assemble();
    let g = &asm.graph;
    let n = fd.n;
    let mut c_diag = vec![0i64; n];
    let cliques = match fd.family {
        Family::Delta => {
            let mut cliques = Vec::new();
            let mut in_triangle = std::collections::HashSet::new();
            for &(u, v) in g.edges() {
                for w in v + 1..=n {
                    if g.has_edge(u, w) && g.has_edge(v, w) {
                        cliques.push(vec![u, v, w]);
                        in_triangle.extend([(u, v), (u, w), (v, w)]);
                    }
                }
            }
            for &e in g.edges() {
                if !in_triangle.contains(&e) {
                    cliques.push(vec![e.0, e.1]);
                }
            }
            c_diag[4] += 1;
            c_diag[n - 5] += 1;
            cliques
        }
        Family::Gamma => {
            let mut cliques = vec![vec![1, 2, 3, 4], vec![1, 5], vec![2, 5], vec![3, 5], vec![4, 6], vec![5, 6]];
            for j in 0..fd.q {
                let c = 6 + 5 * j;
                cliques.push(vec![c, c + 1, c + 2]);
                cliques.push(vec![c + 1, c + 2, c + 3, c + 4]);
                cliques.push(vec![c + 3, c + 4, c + 5]);
            }
            let mirror = |v: usize| n + 1 - v;
            let right: Vec<Vec<usize>> = cliques[..6]
                .iter()
                .map(|c| c.iter().map(|&v| mirror(v)).collect())
                .collect();
            cliques.extend(right);
            c_diag[4] += 2;
            c_diag[n - 5] += 2;
            c_diag[5] += 1;
            c_diag[n - 6] += 1;
            cliques
        }
        other => return Err(Error::UnsupportedFamily(other.as_str().to_string())),
    };
    let b_edges = asm
        .cells
        .iter()
        .filter(|c| c.len() == 2 && g.has_edge(c[0], c[1]))
        .map(|c| (c[0], c[1]))
        .collect();
    Ok(CliqueCoverDecomposition {
        n,
        cliques,
        b_edges,
        c_diag,
    })
}

// ---------------------------------------------------------------------------
// Interlacing

#[derive(Debug, Clone, Serialize)]
pub struct InterlacingReport {
    pub n: usize,
    pub k: usize,
    pub holds: bool,
    pub violations: usize,
    pub rho_g: f64,
    pub rho_h: f64,
}

/// `lambda_i(G) >= lambda_i(H) >= lambda_{n-k+i}(G)` for the subgraph `H`
/// induced on `vs`.
pub fn interlacing_check(g: &Graph, vs: &[usize], tol: f64) -> Result<InterlacingReport> {
    let h = induced_subgraph(g, vs)?;
    let sg = spectrum_of(g)?;
    let sh = spectrum_of(&h)?;
    let (n, k) = (g.n(), h.n());
    let violations = (0..k)
        .filter(|&i| {
            let (upper, mid, lower) = (sg.values[i], sh.values[i], sg.values[n - k + i]);
            upper < mid - tol || mid < lower - tol
        })
        .count();
    Ok(InterlacingReport {
        n,
        k,
        holds: violations == 0,
        violations,
        rho_g: sg.values[n - 1],
        rho_h: sh.values[k - 1],
    })
}

/// Vertices `1..=e` where `e` closes the `count`-th graph block (cut vertex included).
pub fn leading_blocks(fd: &FamilyDescriptor, count: usize) -> Result<Vec<usize>> {
    let ends = fd.assemble().block_ends;
    if count == 0 || count > ends.len() {
        return Err(Error::BadBlocks(format!(
            "asked for {count} blocks of {}",
            ends.len()
        )));
    }
    Ok((1..=ends[count - 1]).collect())
}

// ---------------------------------------------------------------------------
// Aldous–Fill

#[derive(Debug, Clone, Serialize)]
pub struct AldousFillRow {
    pub n: usize,
    pub r: usize,
    pub gap: f64,
    /// `gap * 3n^2 / (2 r pi^2)`.
    pub af_ratio: f64,
    /// `gap * n^2 / (2 pi^2)`.
    pub gap_ratio: f64,
}

pub fn aldous_fill_ratio(family: Family, n: usize) -> Result<AldousFillRow> {
    let fd = FamilyDescriptor::for_family(family, n)?;
    let s = spectrum_of(&fd.build())?;
    aldous_fill_from(&s, family.degree())
}

pub fn aldous_fill_from(s: &Spectrum, r: usize) -> Result<AldousFillRow> {
    let gap = spectral_gap(s)?;
    let n = s.len();
    let nn = (n * n) as f64;
    Ok(AldousFillRow {
        n,
        r,
        gap,
        af_ratio: gap * 3.0 * nn / (2.0 * r as f64 * PI * PI),
        gap_ratio: gap_ratio(gap, n),
    })
}

// ---------------------------------------------------------------------------
// Eigenvectors

#[derive(Debug, Clone, Serialize)]
pub struct EdgeStateReport {
    pub n: usize,
    pub rho: f64,
    /// `x_1^2` of the unit rho-eigenvector (mirror-symmetric or antisymmetric).
    pub x1_sq: f64,
    /// Modulus of the decaying characteristic root at rho.
    pub s_abs: f64,
    /// Main components of the left-localized edge state.
    pub main: Vec<f64>,
    /// `(j, |a_{j+1} / a_j|)` over the middle third of the main cells.
    pub ratios: Vec<(usize, f64)>,
    pub max_rel_dev: f64,
}

/// Edge states of Δ_n, diagonalized per mirror sector. The left-localized
/// state is `(v_even + v_odd)/sqrt 2` with `x_1 > 0` in both.
pub fn edge_state_localization(n: usize) -> Result<EdgeStateReport> {
    let fd = FamilyDescriptor::delta(n)?;
    let asm = fd.assemble();
    let sec = sector_eigen(&adjacency_matrix(&asm.graph), &reversal(n), true)?;
    let bottom = |s: &Spectrum| -> Result<(f64, Vec<f64>)> {
        let k = s.len().checked_sub(1).ok_or(Error::TooSmall(1))?;
        let mut v = s.vectors.as_ref().expect("vectors requested")[k].clone();
        if v[0] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok((s.values[k], v))
    };
    let (le, ve) = bottom(&sec.even)?;
    let (lo, vo) = bottom(&sec.odd)?;
    let (rho, x1_sq) = if le <= lo { (le, ve[0] * ve[0]) } else { (lo, vo[0] * vo[0]) };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let left: Vec<f64> = ve.iter().zip(&vo).map(|(a, b)| h * (a + b)).collect();
    let main: Vec<f64> = asm.main_vertices.iter().map(|&v| left[v - 1]).collect();
    let p = recurrence_params(Kind::Cubic, rho)?;
    let s_abs = p.r.norm().min(p.s.norm());
    let len = main.len();
    let ratios: Vec<(usize, f64)> = (len / 3..(2 * len) / 3)
        .map(|j| (j, (main[j + 1] / main[j]).abs()))
        .collect();
    let max_rel_dev = ratios
        .iter()
        .map(|(_, r)| (r / s_abs - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(EdgeStateReport {
        n,
        rho,
        x1_sq,
        s_abs,
        main,
        ratios,
        max_rel_dev,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproductionReport {
    pub n: usize,
    /// `(lambda, relative error)` per simple eigenvalue tested.
    pub rows: Vec<(f64, f64)>,
    pub skipped: usize,
    pub max_rel_err: f64,
}

/// Compares the main components of every simple eigenvector of Δ_n with the
/// closed form at its eigenvalue, up to scale.
pub fn main_component_reproduction(n: usize) -> Result<ReproductionReport> {
    let fd = FamilyDescriptor::delta(n)?;
    let asm = fd.assemble();
    let s = sym_eigen(&adjacency_matrix(&asm.graph), true)?;
    let vectors = s.vectors.as_ref().expect("vectors requested");
    let excluded = cubic_excluded();
    let mut rows = Vec::new();
    let mut skipped = 0;
    for (k, &lam) in s.values.iter().enumerate() {
        let isolated = (k == 0 || s.values[k - 1] - lam > DEFAULT_CLUSTER_TOL)
            && (k + 1 == s.len() || lam - s.values[k + 1] > DEFAULT_CLUSTER_TOL);
        if !isolated || excluded.iter().any(|e| (e - lam).abs() < 1e-6) {
            skipped += 1;
            continue;
        }
        let x: Vec<f64> = asm.main_vertices.iter().map(|&v| vectors[k][v - 1]).collect();
        let a = main_components_closed(&recurrence_params(Kind::Cubic, lam)?, fd.m)?.a;
        let aa: f64 = a.iter().map(|t| t * t).sum();
        let c = x.iter().zip(&a).map(|(p, q)| p * q).sum::<f64>() / aa;
        let resid: f64 = x.iter().zip(&a).map(|(p, q)| (p - c * q).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        rows.push((lam, resid / norm));
    }
    let max_rel_err = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(ReproductionReport {
        n,
        rows,
        skipped,
        max_rel_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_delta, build_gamma, BlockKind};
    use crate::graph::make_graph;

    fn k4() -> Graph {
        make_graph(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn gap_audit_examples() {
        let s = spectrum_of(&k4()).unwrap();
        let r = gap_interval_audit(&s, -2.0, 0.0, false, false, 1e-8);
        assert_eq!(r.offending.len(), 3);
        assert!(!r.pass);
        let s = spectrum_of(&build_delta(42).unwrap()).unwrap();
        assert!(gap_interval_audit(&s, 1.0, 5f64.sqrt(), false, true, 1e-8).pass);
        let s = spectrum_of(&build_gamma(41).unwrap()).unwrap();
        assert!(gap_interval_audit(&s, (-1.0 + 17f64.sqrt()) / 2.0, 3.0, true, true, 1e-8).pass);
    }

    #[test]
    fn simplicity_examples() {
        let r = simplicity_audit(&FamilyDescriptor::delta(14).unwrap(), 1e-7).unwrap();
        assert!(r.pass, "{r:?}");
        let r = simplicity_audit(&FamilyDescriptor::min_cubic(16).unwrap(), 1e-7).unwrap();
        assert!(r.pass);
        assert!(r.non_simple.iter().all(|c| (c.value + 1.0).abs() < 1e-7));
        let r = simplicity_audit(&FamilyDescriptor::gamma(21).unwrap(), 1e-7).unwrap();
        assert!(r.pass);
        assert!(r.second_type_unexpected.is_empty());
    }

    #[test]
    fn minus_one_bounds() {
        assert_eq!(minus_one_bound(Family::Delta, 46), 9);
        assert_eq!(minus_one_bound(Family::Gamma, 41), 9);
        assert_eq!(minus_one_bound(Family::Delta, 10), 0);
        let r = minus_one_multiplicity_check(&build_delta(46).unwrap(), Family::Delta).unwrap();
        assert!(r.pass && r.bound == 9, "{r:?}");
        let r = minus_one_multiplicity_check(&build_gamma(41).unwrap(), Family::Gamma).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn clique_cover_delta_10() {
        let fd = FamilyDescriptor::delta(10).unwrap();
        let cover = build_clique_cover(&fd).unwrap();
        let mut got: Vec<Vec<usize>> = cover.cliques.clone();
        got.sort();
        let mut want = vec![
            vec![1, 2, 3],
            vec![1, 2, 4],
            vec![3, 5],
            vec![4, 5],
            vec![5, 6],
            vec![6, 7],
            vec![6, 8],
            vec![7, 9, 10],
            vec![8, 9, 10],
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(cover.b_edges, vec![(1, 2), (9, 10)]);
        assert!(cover.check_identity(&fd.build()).holds);
        let fd = FamilyDescriptor::delta(14).unwrap();
        assert_eq!(build_clique_cover(&fd).unwrap().b_edges, vec![(1, 2), (7, 8), (13, 14)]);
    }

    #[test]
    fn clique_cover_gamma() {
        for n in [11, 16, 21, 41] {
            let fd = FamilyDescriptor::gamma(n).unwrap();
            let cover = build_clique_cover(&fd).unwrap();
            let rep = cover.check_identity(&fd.build());
            assert!(rep.holds, "n = {n}: {rep:?}");
        }
        let fd = FamilyDescriptor::quartic(BlockKind::D2, 1, BlockKind::D3m).unwrap();
        assert!(matches!(build_clique_cover(&fd), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn interlacing_examples() {
        let fd = FamilyDescriptor::delta(42).unwrap();
        let vs = leading_blocks(&fd, 7).unwrap();
        assert_eq!(vs, (1..=17).collect::<Vec<_>>());
        let r = interlacing_check(&fd.build(), &vs, 1e-9).unwrap();
        assert!(r.holds && r.rho_h < -(5f64.sqrt()));
        let fd = FamilyDescriptor::gamma(26).unwrap();
        let vs = leading_blocks(&fd, 4).unwrap();
        assert_eq!(vs.len(), 21);
        let r = interlacing_check(&fd.build(), &vs, 1e-9).unwrap();
        assert!(r.holds && r.rho_h < -2.601);
        assert!(interlacing_check(&k4(), &[1, 3], 1e-12).unwrap().holds);
    }

    #[test]
    fn aldous_fill_k4() {
        let r = aldous_fill_from(&spectrum_of(&k4()).unwrap(), 3).unwrap();
        assert!((r.gap - 4.0).abs() < 1e-12);
        assert!((r.af_ratio - 4.0 * 48.0 / (6.0 * PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn convergence_small() {
        let t = convergence_study(Family::Delta, &[18, 10, 14]).unwrap();
        assert_eq!(t.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![10, 14, 18]);
        assert!(t.rows[0].rho < -1.0 - 2f64.sqrt());
        assert!((t.rows[1].rho + 1.0 + 2f64.sqrt()).abs() < 1e-10);
        for r in &t.rows[1..] {
            assert!((r.err - r.err_analytic.unwrap()).abs() < 1e-10);
        }
        assert!(t.to_csv().starts_with("n,rho,err,gap_ratio"));
        assert!(matches!(convergence_study(Family::Delta, &[12]), Err(Error::BadOrder { .. })));
    }

    #[test]
    fn reproduction_small() {
        let r = main_component_reproduction(30).unwrap();
        assert!(r.max_rel_err < 1e-6, "{r:?}");
        assert!(!r.rows.is_empty());
    }
}
