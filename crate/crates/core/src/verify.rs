//! The fourteen end-to-end checks behind `verify-all`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    aldous_fill_from, build_clique_cover, convergence_study, edge_state_localization,
    gap_interval_audit, main_component_reproduction, minus_one_multiplicity_from,
    simplicity_audit_with,
};
use crate::eigen::{sym_eigen, Spectrum};
use crate::error::Result;
use crate::families::{BlockKind, Family, FamilyDescriptor};
use crate::floquet::{cubic_dispersion, delta_lattice, gamma_lattice, sample_bands, DEFAULT_SAMPLES};
use crate::graph::{adjacency_matrix, Graph};
use crate::poly::polynomial_certificates;
use crate::recurrence::{
    boundary_residual, cubic_excluded, exceptional_values, k_of, main_components_closed,
    main_components_iterative, recurrence_params, Kind,
};

pub const CHECK_NAMES: [&str; 14] = [
    "gap-interval-cubic",
    "gap-interval-quartic",
    "convergence-cubic",
    "convergence-quartic",
    "lower-bounds",
    "simplicity",
    "minus-one-multiplicity",
    "floquet-bands",
    "recurrence-oracles",
    "exceptional-values",
    "polynomial-certificates",
    "clique-cover-identity",
    "gap-asymptotics",
    "edge-localization",
];

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub max_cubic_n: usize,
    pub max_quartic_n: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_cubic_n: 202,
            max_quartic_n: 101,
            seed: 20240601,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

/// A family graph with its spectrum.
pub struct Member {
    pub fd: FamilyDescriptor,
    pub graph: Graph,
    pub spectrum: Spectrum,
}

/// Spectra shared by the checks.
pub struct Corpus {
    pub delta: Vec<Member>,
    pub cubic0: Vec<Member>,
    pub gamma: Vec<Member>,
    pub quartic: Vec<Member>,
}

fn members(fds: Vec<FamilyDescriptor>) -> Result<Vec<Member>> {
    fds.into_par_iter()
        .map(|fd| {
            let graph = fd.build();
            let spectrum = sym_eigen(&adjacency_matrix(&graph), false)?;
            Ok(Member { fd, graph, spectrum })
        })
        .collect()
}

/// Non-canonical quartic assemblies: every left/right end pairing that is not
/// the canonical member of its order, at two chain lengths.
pub fn noncanonical_assemblies() -> Result<Vec<FamilyDescriptor>> {
    let mut out = Vec::new();
    for i in 1..=5 {
        for j in 1..=5 {
            let left = BlockKind::quartic_end(i).expect("D1..D5");
            let right = BlockKind::quartic_end(j).expect("D1..D5").mirror();
            for q in [1, 3] {
                let fd = FamilyDescriptor::quartic(left, q, right)?;
                if FamilyDescriptor::canonical_quartic(fd.n)?.blocks != fd.blocks {
                    out.push(fd);
                }
            }
        }
    }
    Ok(out)
}

impl Corpus {
    pub fn build(cfg: &VerifyConfig) -> Result<Corpus> {
        let delta = (10..=cfg.max_cubic_n).step_by(4).map(FamilyDescriptor::delta).collect::<Result<_>>()?;
        let cubic0 = (12..=cfg.max_cubic_n).step_by(4).map(FamilyDescriptor::min_cubic).collect::<Result<_>>()?;
        let gamma = (11..=cfg.max_quartic_n).step_by(5).map(FamilyDescriptor::gamma).collect::<Result<_>>()?;
        let mut quartic: Vec<FamilyDescriptor> = (11..=cfg.max_quartic_n)
            .filter(|n| (n - 11) % 5 != 0)
            .map(FamilyDescriptor::canonical_quartic)
            .collect::<Result<_>>()?;
        quartic.extend(noncanonical_assemblies()?);
        Ok(Corpus {
            delta: members(delta)?,
            cubic0: members(cubic0)?,
            gamma: members(gamma)?,
            quartic: members(quartic)?,
        })
    }
}

fn rho(s: &Spectrum) -> f64 {
    *s.values.last().expect("nonempty spectrum")
}

fn check(id: usize, pass: bool, details: Value) -> CheckResult {
    CheckResult {
        id,
        name: CHECK_NAMES[id - 1],
        pass,
        details,
    }
}

fn gap_cubic(c: &Corpus) -> CheckResult {
    let bad: Vec<Value> = c
        .delta
        .iter()
        .map(|m| gap_interval_audit(&m.spectrum, 1.0, 5f64.sqrt(), false, true, 1e-8))
        .filter(|r| !r.pass)
        .map(|r| json!({"n": r.n, "offending": r.offending}))
        .collect();
    check(1, bad.is_empty(), json!({"graphs": c.delta.len(), "failures": bad}))
}

fn gap_quartic(c: &Corpus) -> CheckResult {
    let lo = (-1.0 + 17f64.sqrt()) / 2.0;
    let bad: Vec<Value> = c
        .gamma
        .iter()
        .map(|m| gap_interval_audit(&m.spectrum, lo, 3.0, true, true, 1e-8))
        .filter(|r| !r.pass)
        .map(|r| json!({"n": r.n, "offending": r.offending}))
        .collect();
    check(2, bad.is_empty(), json!({"graphs": c.gamma.len(), "failures": bad}))
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn convergence_cubic(cfg: &VerifyConfig) -> Result<CheckResult> {
    let ns: Vec<usize> = (14..=cfg.max_cubic_n).step_by(4).collect();
    let t = convergence_study(Family::Delta, &ns)?;
    let errs: Vec<f64> = t.rows.iter().map(|r| r.err_analytic.expect("delta rows")).collect();
    // The analytic offsets must agree with the eigensolver wherever it resolves them.
    let agreement = t
        .rows
        .iter()
        .map(|r| (r.err - r.err_analytic.unwrap_or(f64::NAN)).abs())
        .fold(0.0, f64::max);
    let last = t.rows.last().expect("nonempty range");
    let pass = strictly_decreasing(&errs)
        && *errs.last().unwrap() < 1e-4
        && last.window_max_err < 1e-3
        && agreement < 1e-12;
    Ok(check(
        3,
        pass,
        json!({"n_last": last.n, "err_last": errs.last(), "window_max_err": last.window_max_err,
               "max_numeric_vs_analytic": agreement, "strictly_decreasing": strictly_decreasing(&errs)}),
    ))
}

fn convergence_quartic(cfg: &VerifyConfig) -> Result<CheckResult> {
    let ns: Vec<usize> = (11..=cfg.max_quartic_n).step_by(5).collect();
    let t = convergence_study(Family::Gamma, &ns)?;
    let errs: Vec<f64> = t.rows.iter().map(|r| r.err).collect();
    let pass = strictly_decreasing(&errs) && *errs.last().unwrap() < 1e-3;
    Ok(check(
        4,
        pass,
        json!({"err_last": errs.last(), "strictly_decreasing": strictly_decreasing(&errs)}),
    ))
}

fn lower_bounds(c: &Corpus) -> CheckResult {
    let s2 = -1.0 - 2f64.sqrt();
    let s3 = -1.0 - 3f64.sqrt();
    let acc = 1e-9;
    let mut bad = Vec::new();
    for m in c.delta.iter().filter(|m| m.fd.n >= 14) {
        let r = rho(&m.spectrum);
        if !(r > -2.406 + acc && r >= s2 - acc) {
            bad.push(json!({"family": "delta", "n": m.fd.n, "rho": r}));
        }
    }
    for m in &c.gamma {
        let r = rho(&m.spectrum);
        if !(r > -2.71 + acc && r >= s3 - acc && r < -2.601 - acc) {
            bad.push(json!({"family": "gamma", "n": m.fd.n, "rho": r}));
        }
    }
    check(5, bad.is_empty(), json!({"failures": bad}))
}

fn simplicity(c: &Corpus) -> Result<CheckResult> {
    let all: Vec<&Member> = c.delta.iter().chain(&c.cubic0).chain(&c.gamma).chain(&c.quartic).collect();
    let reports = all
        .par_iter()
        .map(|m| simplicity_audit_with(&m.fd, &m.graph, &m.spectrum, 1e-7))
        .collect::<Result<Vec<_>>>()?;
    let certified: usize = reports
        .iter()
        .map(|r| r.non_simple.iter().filter(|f| f.status == crate::analysis::ClusterStatus::CertifiedSimple).count())
        .sum();
    let bad: Vec<Value> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| json!({"family": r.family, "n": r.n, "non_simple": r.non_simple}))
        .collect();
    Ok(check(
        6,
        bad.is_empty(),
        json!({"graphs": reports.len(), "certified_clusters": certified, "failures": bad}),
    ))
}

fn multiplicity(c: &Corpus) -> CheckResult {
    let all = c.delta.iter().chain(&c.cubic0).chain(&c.gamma).chain(&c.quartic);
    let mut tested = 0;
    let mut bad = Vec::new();
    for m in all {
        let r = minus_one_multiplicity_from(&m.spectrum, m.fd.family);
        if r.bound > 0 {
            tested += 1;
            if !r.pass {
                bad.push(json!({"family": r.family, "n": r.n, "mult": r.multiplicity, "bound": r.bound}));
            }
        }
    }
    check(7, bad.is_empty(), json!({"tested": tested, "failures": bad}))
}

fn bands_close(got: &[(f64, f64)], want: &[(f64, f64)], tol: f64) -> bool {
    got.len() == want.len()
        && got
            .iter()
            .zip(want)
            .all(|(a, b)| (a.0 - b.0).abs() < tol && (a.1 - b.1).abs() < tol)
}

fn floquet() -> Result<CheckResult> {
    let (r5, r17) = (5f64.sqrt(), 17f64.sqrt());
    let d = sample_bands(&delta_lattice(), DEFAULT_SAMPLES)?;
    let g = sample_bands(&gamma_lattice(), DEFAULT_SAMPLES)?;
    let dw = [(-r5, -1.0), (-1.0, 1.0), (r5, 3.0)];
    let gw = [((-1.0 - r17) / 2.0, -1.0), (-1.0, (-1.0 + r17) / 2.0), (3.0, 4.0)];
    let d_ok = bands_close(&d.distinct_branch_bands(), &dw, 1e-6);
    let g_ok = bands_close(&g.distinct_branch_bands(), &gw, 1e-6);
    let mut disp_err: f64 = 0.0;
    for (t, vals) in &d.samples {
        let mut f = cubic_dispersion(*t);
        f.sort_by(|a, b| b.total_cmp(a));
        for (x, y) in f.iter().zip(vals) {
            disp_err = disp_err.max((x - y).abs());
        }
    }
    let pass = d_ok && g_ok && disp_err < 1e-9;
    Ok(check(
        8,
        pass,
        json!({"delta_bands": d.distinct_branch_bands(), "gamma_bands": g.distinct_branch_bands(),
               "dispersion_max_err": disp_err}),
    ))
}

/// Random `lambda` away from the excluded values, and random `m <= 60`.
pub fn random_recurrence_cases(kind: Kind, count: usize, seed: u64) -> Vec<(f64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = if kind == Kind::Cubic { 3.0 } else { 4.0 };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let l: f64 = rng.gen_range(-bound..bound);
        let m: usize = rng.gen_range(1..=60);
        let ok = match kind {
            Kind::Cubic => cubic_excluded().iter().all(|e| (e - l).abs() > 1e-3),
            Kind::Quartic => (k_of(kind, l).powi(2) - 4.0).abs() > 1e-3,
        };
        if ok {
            out.push((l, m));
        }
    }
    out
}

fn recurrence(cfg: &VerifyConfig) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for (kind, seed) in [(Kind::Cubic, cfg.seed), (Kind::Quartic, cfg.seed + 1)] {
        for (l, m) in random_recurrence_cases(kind, 200, seed) {
            let c = main_components_closed(&recurrence_params(kind, l)?, m)?.a;
            let it = main_components_iterative(kind, l, m).a;
            let scale = it.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let diff = c.iter().zip(&it).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            worst = worst.max(diff / scale);
        }
    }
    let ns: Vec<usize> = (10..=cfg.max_cubic_n.min(102)).step_by(4).collect();
    let reps = ns
        .par_iter()
        .map(|&n| main_component_reproduction(n))
        .collect::<Result<Vec<_>>>()?;
    let repro = reps.iter().map(|r| r.max_rel_err).fold(0.0, f64::max);
    let tested: usize = reps.iter().map(|r| r.rows.len()).sum();
    Ok(check(
        9,
        worst < 1e-8 && repro < 1e-6,
        json!({"closed_vs_iterative_max_rel": worst, "eigenvector_max_rel": repro, "eigenvectors_tested": tested}),
    ))
}

fn exceptional(c: &Corpus) -> Result<CheckResult> {
    let ms: Vec<usize> = (2..=50).collect();
    let mut min_res = f64::INFINITY;
    let mut min_dist = f64::INFINITY;
    let mut below_bound = 0;
    for kind in [Kind::Cubic, Kind::Quartic] {
        for v in exceptional_values(kind) {
            for &m in &ms {
                let r = boundary_residual(kind, v, m)?;
                min_res = min_res.min(r);
                if kind == Kind::Cubic && r < 2.0 / (4.0 * m as f64 + 5f64.sqrt() + 1.0) {
                    below_bound += 1;
                }
            }
            let spectra: &[Member] = if kind == Kind::Cubic { &c.delta } else { &c.gamma };
            for m in spectra {
                min_dist = min_dist.min(m.spectrum.min_distance_to(v));
            }
        }
    }
    Ok(check(
        10,
        min_res > 0.0 && below_bound == 0 && min_dist > 1e-6,
        json!({"min_residual": min_res, "cubic_below_explicit_bound": below_bound, "min_spectral_distance": min_dist}),
    ))
}

fn certificates() -> CheckResult {
    let certs = polynomial_certificates();
    let pass = certs.iter().all(|c| c.holds);
    check(11, pass, serde_json::to_value(&certs).unwrap_or(Value::Null))
}

fn clique_cover(c: &Corpus) -> Result<CheckResult> {
    let mut bad = Vec::new();
    for m in &c.delta {
        let cover = build_clique_cover(&m.fd)?;
        if !cover.check_identity(&m.graph).holds {
            bad.push(m.fd.n);
        }
    }
    Ok(check(12, bad.is_empty(), json!({"graphs": c.delta.len(), "failures": bad})))
}

/// `|r - 1|` strictly decreasing from its maximum on, with that maximum in the first half.
pub fn trends_to_one(ratios: &[f64]) -> bool {
    let dev: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs()).collect();
    let Some(peak) = dev
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
    else {
        return false;
    };
    peak < dev.len().div_ceil(2) && strictly_decreasing(&dev[peak..])
}

fn asymptotics(c: &Corpus) -> Result<CheckResult> {
    let mut rows = Vec::new();
    for m in c.delta.iter().filter(|m| m.fd.n >= 62) {
        rows.push((m.fd.n, aldous_fill_from(&m.spectrum, 3)?.gap_ratio));
    }
    let ratios: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let window = ratios.iter().all(|r| (0.8..=1.2).contains(r));
    let trend = trends_to_one(&ratios);
    Ok(check(13, !rows.is_empty() && window && trend, json!({"in_window": window, "trend": trend, "rows": rows})))
}

fn localization() -> Result<CheckResult> {
    let a = edge_state_localization(102)?;
    let b = edge_state_localization(210)?;
    let pass = a.x1_sq > 0.018 && b.x1_sq > 0.018 && b.max_rel_dev < 0.05;
    Ok(check(
        14,
        pass,
        json!({"x1_sq_102": a.x1_sq, "x1_sq_210": b.x1_sq, "s_abs": b.s_abs, "decay_max_rel_dev": b.max_rel_dev}),
    ))
}

pub fn run_check(id: usize, cfg: &VerifyConfig, c: &Corpus) -> Result<CheckResult> {
    match id {
        1 => Ok(gap_cubic(c)),
        2 => Ok(gap_quartic(c)),
        3 => convergence_cubic(cfg),
        4 => convergence_quartic(cfg),
        5 => Ok(lower_bounds(c)),
        6 => simplicity(c),
        7 => Ok(multiplicity(c)),
        8 => floquet(),
        9 => recurrence(cfg),
        10 => exceptional(c),
        11 => Ok(certificates()),
        12 => clique_cover(c),
        13 => asymptotics(c),
        14 => localization(),
        _ => Err(crate::error::Error::Parse(format!("no check {id}"))),
    }
}

pub fn verify_all(cfg: &VerifyConfig) -> Result<VerifySummary> {
    let corpus = Corpus::build(cfg)?;
    let checks = (1..=14).map(|id| run_check(id, cfg, &corpus)).collect::<Result<Vec<_>>>()?;
    Ok(VerifySummary {
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}
