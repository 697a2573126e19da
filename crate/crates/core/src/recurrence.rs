//! Main-component recurrences `a_i = k a_{i-1} - a_{i-2}` of first-type
//! eigenvectors, their closed forms, and the mirror boundary condition.

use num_complex::Complex64;
use serde::Serialize;

use crate::eigen::Spectrum;
use crate::error::{Error, Result};
use crate::poly::{bisect_root, cubic_limit_polynomial, quartic_limit_polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cubic,
    Quartic,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Cubic => "cubic",
            Kind::Quartic => "quartic",
        }
    }
}

/// Values of lambda excluded from the cubic closed form.
pub fn cubic_excluded() -> [f64; 6] {
    let s5 = 5f64.sqrt();
    [0.0, 1.0, -1.0, s5, -s5, 3.0]
}

/// The values where `k = -2` and the characteristic roots coincide.
///
/// At quartic `lambda = 3` the middle-block elimination behind the recurrence
/// divides by `(lambda - 1)^2 - 4 = 0`, and the iterated sequence has constant
/// modulus 3/2, so the mirror condition cannot exclude it.
pub fn exceptional_values(kind: Kind) -> Vec<f64> {
    match kind {
        Kind::Cubic => vec![5f64.sqrt(), -(5f64.sqrt())],
        Kind::Quartic => {
            let r = 17f64.sqrt();
            vec![(-1.0 + r) / 2.0, (-1.0 - r) / 2.0, 3.0]
        }
    }
}

pub fn k_of(kind: Kind, l: f64) -> f64 {
    match kind {
        Kind::Cubic => (l.powi(3) - l * l - 5.0 * l + 1.0) / 2.0,
        Kind::Quartic => (l.powi(3) - 2.0 * l * l - 7.0 * l + 4.0) / 4.0,
    }
}

/// Initial conditions `(a_0, a_1)` with the first vertex normalized to 1.
pub fn initial_conditions(kind: Kind, l: f64) -> (f64, f64) {
    match kind {
        Kind::Cubic => (
            (l - 1.0) / 2.0,
            (l.powi(4) - l.powi(3) - 7.0 * l * l + 3.0 * l + 4.0) / 4.0,
        ),
        Kind::Quartic => (
            (l * l - 2.0 * l - 6.0) / 2.0,
            (l.powi(5) - 4.0 * l.powi(4) - 9.0 * l.powi(3) + 32.0 * l * l + 24.0 * l - 24.0) / 8.0,
        ),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecurrenceParams {
    pub kind: Kind,
    pub lambda: f64,
    pub k: f64,
    #[serde(skip)]
    pub p: Complex64,
    /// 1 for the cubic form, `lambda^2 - 2 lambda - 6` for the quartic one.
    pub qc: f64,
    #[serde(skip)]
    pub r: Complex64,
    #[serde(skip)]
    pub s: Complex64,
}

pub fn recurrence_params(kind: Kind, lambda: f64) -> Result<RecurrenceParams> {
    let l = lambda;
    let k = k_of(kind, l);
    let excluded = match kind {
        Kind::Cubic => cubic_excluded().iter().any(|x| (x - l).abs() < 1e-12),
        Kind::Quartic => (k * k - 4.0).abs() < 1e-12,
    };
    if excluded {
        return Err(Error::ExcludedLambda(lambda));
    }
    let d = Complex64::new(k * k - 4.0, 0.0).sqrt();
    let (p, qc) = match kind {
        Kind::Cubic => ((-l.powi(3) + k + 7.0 * l + 4.0) / d, 1.0),
        Kind::Quartic => (
            (-l.powi(5) + 4.0 * l.powi(4) + 9.0 * l.powi(3) - 34.0 * l * l - 14.0 * l + 24.0) / (4.0 * d),
            l * l - 2.0 * l - 6.0,
        ),
    };
    Ok(RecurrenceParams {
        kind,
        lambda,
        k,
        p,
        qc,
        r: (k - d) / 2.0,
        s: (k + d) / 2.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MainComponentSeq {
    pub a: Vec<f64>,
    pub m: usize,
}

/// Index range of the main components: `0..=m+1` (cubic) or `0..=m` (quartic).
fn top(kind: Kind, m: usize) -> usize {
    match kind {
        Kind::Cubic => m + 1,
        Kind::Quartic => m,
    }
}

pub fn main_components_closed(p: &RecurrenceParams, m: usize) -> Result<MainComponentSeq> {
    let (lead, q) = match p.kind {
        Kind::Cubic => ((p.lambda - 1.0) / 4.0, 1.0),
        Kind::Quartic => (0.25, p.qc),
    };
    let plus = p.p + q;
    let minus = p.p - q;
    let mut a = Vec::with_capacity(top(p.kind, m) + 1);
    let (mut rj, mut sj) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for j in 0..=top(p.kind, m) {
        let (u, w) = (plus * rj, minus * sj);
        let z = (u - w) * lead;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NumericOverflow(j));
        }
        // Conjugate terms cancel in the imaginary part only up to their own size.
        let size = (u.norm() + w.norm()) * lead.abs();
        if z.im.abs() > 1e-9 * size.max(z.re.abs()).max(1e-300) {
            return Err(Error::Solver(format!(
                "closed form left imaginary part {} at j = {j}",
                z.im
            )));
        }
        a.push(z.re);
        rj *= p.r;
        sj *= p.s;
    }
    Ok(MainComponentSeq { a, m })
}

pub fn main_components_iterative(kind: Kind, lambda: f64, m: usize) -> MainComponentSeq {
    let k = k_of(kind, lambda);
    let (a0, a1) = initial_conditions(kind, lambda);
    let mut a = vec![a0, a1];
    while a.len() <= top(kind, m) {
        let n = a.len();
        a.push(k * a[n - 1] - a[n - 2]);
    }
    a.truncate(top(kind, m) + 1);
    MainComponentSeq { a, m }
}

/// Index pair `(p, q)` that reflection about the centre of the chain swaps.
pub fn boundary_pair(kind: Kind, m: usize) -> (usize, usize) {
    match (kind, m % 2) {
        (Kind::Cubic, 0) => (m / 2, m / 2 + 1),
        (Kind::Cubic, _) => ((m - 1) / 2, (m + 3) / 2),
        (Kind::Quartic, 0) => (m / 2 - 1, m / 2 + 1),
        (Kind::Quartic, _) => ((m - 1) / 2, m.div_ceil(2)),
    }
}

/// `min_± |a_p ∓ a_q| / max(|a_p|, |a_q|)` on the iterated sequence; zero
/// exactly when the mirror condition holds.
pub fn boundary_residual(kind: Kind, lambda: f64, m: usize) -> Result<f64> {
    let seq = main_components_iterative(kind, lambda, m);
    let (p, q) = boundary_pair(kind, m.max(2));
    let (ap, aq) = (seq.a[p], seq.a[q]);
    let scale = ap.abs().max(aq.abs());
    if scale < 1e-300 {
        return Err(Error::DegenerateSequence(m));
    }
    Ok((ap - aq).abs().min((ap + aq).abs()) / scale)
}

pub fn limit_eigenvalue(kind: Kind) -> f64 {
    match kind {
        Kind::Cubic => bisect_root(&cubic_limit_polynomial(), -3.0, -(5f64.sqrt()), 1e-14),
        Kind::Quartic => bisect_root(
            &quartic_limit_polynomial(),
            -4.0,
            -(1.0 + 17f64.sqrt()) / 2.0,
            1e-14,
        ),
    }
}

/// `(P + 1)/(P - 1)` of the cubic closed form; real on `(1, sqrt 5)`.
pub fn cubic_boundary_ratio(lambda: f64) -> Result<f64> {
    let p = recurrence_params(Kind::Cubic, lambda)?;
    let z = (p.p + 1.0) / (p.p - 1.0);
    Ok(z.re)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExceptionalReport {
    pub kind: Kind,
    pub value: f64,
    /// `(m, residual)` per tested chain length.
    pub residuals: Vec<(usize, f64)>,
    /// For `lambda = ±sqrt 5`: the explicit lower bound `2/(4m + sqrt 5 + 1)` per row.
    pub lower_bounds: Option<Vec<f64>>,
    pub min_residual: f64,
    pub fails_everywhere: bool,
    /// Smallest distance from `value` to the supplied finite spectra.
    pub min_spectral_distance: Option<f64>,
}

impl ExceptionalReport {
    pub fn with_spectra<'a>(mut self, spectra: impl IntoIterator<Item = &'a Spectrum>) -> ExceptionalReport {
        let d = spectra
            .into_iter()
            .map(|s| s.min_distance_to(self.value))
            .fold(f64::INFINITY, f64::min);
        self.min_spectral_distance = Some(d);
        self
    }
}

/// Evaluates the explicit `k = -2` sequences at an exceptional value and
/// confirms that the mirror condition fails for every `m` in `m_list`.
pub fn exceptional_value_check(kind: Kind, v: f64, m_list: &[usize]) -> Result<ExceptionalReport> {
    if !exceptional_values(kind).iter().any(|x| (x - v).abs() < 1e-12) {
        return Err(Error::UnsupportedValue(v));
    }
    let mut residuals = Vec::new();
    for &m in m_list {
        residuals.push((m, boundary_residual(kind, v, m)?));
    }
    let lower_bounds = (kind == Kind::Cubic).then(|| {
        m_list
            .iter()
            .map(|&m| 2.0 / (4.0 * m as f64 + 5f64.sqrt() + 1.0))
            .collect::<Vec<_>>()
    });
    let min_residual = residuals.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let fails_everywhere = match &lower_bounds {
        Some(lb) => residuals.iter().zip(lb).all(|(r, b)| r.1 >= *b),
        None => residuals.iter().all(|r| r.1 > 0.0),
    };
    Ok(ExceptionalReport {
        kind,
        value: v,
        residuals,
        lower_bounds,
        min_residual,
        fails_everywhere,
        min_spectral_distance: None,
    })
}

/// Offsets `delta = lambda - (1 - sqrt 33)/2` of the two cubic eigenvalues
/// below `-sqrt 5` for a chain with `m` middle blocks, as
/// `(mirror-symmetric, mirror-antisymmetric)`.
///
/// The boundary condition `(P+1) R^l (1 ∓ R) = (P-1) S^l (1 ∓ S)` (even `m`;
/// `R^2`, `S^2` for odd `m`) is rewritten using
/// `N^2 - D = (l+1)^2 (l-3) (l^2-l-8)` with `N = -(l+1)(l-3)(l+3)/2` and
/// `D = k^2 - 4`, giving
/// `delta = T(l) (N - sqrt D)^2 / ((l+1)^2 (l-3)(l - L'))`, `L' = (1+sqrt 33)/2`.
/// Solving for `delta` directly keeps full relative precision long after
/// `lambda` itself is indistinguishable from the limit in double precision.
pub fn cubic_limit_offsets(m: usize) -> Result<(f64, f64)> {
    Ok((cubic_offset(m, 1.0)?, cubic_offset(m, -1.0)?))
}

fn offset_map(m: usize, sigma: f64, delta: f64) -> f64 {
    let lim = (1.0 - 33f64.sqrt()) / 2.0;
    let lim2 = (1.0 + 33f64.sqrt()) / 2.0;
    let l = lim + delta;
    let k = k_of(Kind::Cubic, l);
    let sd = (k * k - 4.0).sqrt();
    let (r, s) = ((k - sd) / 2.0, (k + sd) / 2.0);
    let ratio = s / r;
    let t = if m.is_multiple_of(2) {
        ratio.powi((m / 2) as i32) * (1.0 - sigma * s) / (1.0 - sigma * r)
    } else {
        ratio.powi(((m - 1) / 2) as i32) * (1.0 - sigma * s * s) / (1.0 - sigma * r * r)
    };
    let n = -(l + 1.0) * (l - 3.0) * (l + 3.0) / 2.0;
    t * (n - sd).powi(2) / ((l + 1.0).powi(2) * (l - 3.0) * (l - lim2))
}

fn cubic_offset(m: usize, sigma: f64) -> Result<f64> {
    let f = |d: f64| d - offset_map(m, sigma, d);
    let mut d = 0.0;
    for _ in 0..200 {
        let next = offset_map(m, sigma, d);
        if !next.is_finite() || next.abs() > 0.5 {
            break;
        }
        if (next - d).abs() <= 1e-15 * next.abs() || next == d {
            return Ok(next);
        }
        d = next;
    }
    // Fixed point did not contract (short chains): bracket a root of
    // `f` on the admissible window and bisect. The window keeps
    // lambda inside (-3, -sqrt 5) where the form is valid.
    let lim = (1.0 - 33f64.sqrt()) / 2.0;
    let (lo_w, hi_w) = (-3.0 - lim + 1e-9, -(5f64.sqrt()) - lim - 1e-9);
    let steps = 20000;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| lo_w + (hi_w - lo_w) * i as f64 / steps as f64)
        .collect();
    let mut best: Option<(f64, f64)> = None;
    for w in grid.windows(2) {
        let (fa, fb) = (f(w[0]), f(w[1]));
        if fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() && (fa - fb).abs() < 0.1 {
            let closer = best.is_none_or(|(a, _)| w[0].abs().min(w[1].abs()) < a.abs().min(best.unwrap().1.abs()));
            if closer {
                best = Some((w[0], w[1]));
            }
        }
    }
    let (mut a, mut b) = best.ok_or_else(|| Error::Solver(format!("no offset root for m = {m}")))?;
    let fa0 = f(a).signum();
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            break;
        }
        if f(mid).signum() == fa0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_and_exclusions() {
        assert_eq!(recurrence_params(Kind::Cubic, 5f64.sqrt()).unwrap_err(), Error::ExcludedLambda(5f64.sqrt()));
        let l = (-1.0 + 5f64.sqrt()) / 2.0;
        let p = recurrence_params(Kind::Cubic, l).unwrap();
        assert!((p.k + 5f64.sqrt() / 2.0).abs() < 1e-14);
        let want = Complex64::new(-(5f64.sqrt()), -(11f64.sqrt())) / 4.0;
        assert!((p.r - want).norm() < 1e-14);
        assert_eq!(k_of(Kind::Quartic, -3.0), -5.0);
        for l in [1.3, -2.4, 0.7] {
            let p = recurrence_params(Kind::Quartic, l).unwrap();
            assert!((p.r * p.s - 1.0).norm() < 1e-12);
            assert!((p.r + p.s - p.k).norm() < 1e-12);
        }
    }

    #[test]
    fn initial_terms_match_closed_form() {
        for l in [2.0, -2.5, 0.3, 1.7, -1.3] {
            let c = main_components_closed(&recurrence_params(Kind::Cubic, l).unwrap(), 1).unwrap();
            let it = main_components_iterative(Kind::Cubic, l, 1);
            assert!((c.a[0] - (l - 1.0) / 2.0).abs() < 1e-12);
            for (x, y) in c.a.iter().zip(&it.a) {
                assert!((x - y).abs() < 1e-10 * y.abs().max(1.0));
            }
        }
        let l = 1.1;
        let q = main_components_closed(&recurrence_params(Kind::Quartic, l).unwrap(), 3).unwrap();
        assert!((q.a[0] - (l * l - 2.0 * l - 6.0) / 2.0).abs() < 1e-12);
        let a1 = (l.powi(5) - 4.0 * l.powi(4) - 9.0 * l.powi(3) + 32.0 * l * l + 24.0 * l - 24.0) / 8.0;
        assert!((q.a[1] - a1).abs() < 1e-12);
    }

    #[test]
    fn exceptional_sequences() {
        let s5 = 5f64.sqrt();
        let a = main_components_iterative(Kind::Cubic, s5, 6).a;
        for (j, x) in a.iter().enumerate() {
            let want = (-1f64).powi(j as i32) * (4.0 * j as f64 + s5 - 1.0) / 2.0;
            assert!((x - want).abs() < 1e-9);
        }
        let r = 17f64.sqrt();
        let a = main_components_iterative(Kind::Quartic, (-1.0 + r) / 2.0, 6).a;
        for (j, x) in a.iter().enumerate() {
            let want = (-1f64).powi(j as i32 + 1) * (3.0 * r + 1.0 + 8.0 * j as f64) / 4.0;
            assert!((x - want).abs() < 1e-9);
        }
        assert!(matches!(exceptional_value_check(Kind::Cubic, 2.0, &[2]), Err(Error::UnsupportedValue(_))));
        let ms: Vec<usize> = (2..=50).collect();
        for v in exceptional_values(Kind::Cubic) {
            assert!(exceptional_value_check(Kind::Cubic, v, &ms).unwrap().fails_everywhere);
        }
    }

    #[test]
    fn boundary_pairs() {
        assert_eq!(boundary_pair(Kind::Cubic, 4), (2, 3));
        assert_eq!(boundary_pair(Kind::Cubic, 5), (2, 4));
        assert_eq!(boundary_pair(Kind::Quartic, 4), (1, 3));
        assert_eq!(boundary_pair(Kind::Quartic, 3), (1, 2));
    }

    #[test]
    fn residual_in_gap_stays_large() {
        for l in [1.2, 1.7, 2.2] {
            for m in 4..=40 {
                assert!(boundary_residual(Kind::Cubic, l, m).unwrap() > 0.05, "l = {l}, m = {m}");
            }
        }
    }

    #[test]
    fn limits() {
        let c = limit_eigenvalue(Kind::Cubic);
        assert!((c - (1.0 - 33f64.sqrt()) / 2.0).abs() < 1e-13);
        assert!((c * c - c - 8.0).abs() < 1e-12);
        assert!((limit_eigenvalue(Kind::Quartic) - (1.0 - 13f64.sqrt())).abs() < 1e-13);
    }

    #[test]
    fn short_chain_offsets() {
        use crate::eigen::sym_eigen;
        use crate::families::build_delta;
        use crate::graph::adjacency_matrix;
        let lim = (1.0 - 33f64.sqrt()) / 2.0;
        for m in 1..=4 {
            let g = build_delta(10 + 4 * m).unwrap();
            let sp = sym_eigen(&adjacency_matrix(&g), false).unwrap();
            let mut low: Vec<f64> = sp.values.iter().rev().take(2).map(|x| x - lim).collect();
            low.sort_by(f64::total_cmp);
            let (s, a) = cubic_limit_offsets(m).unwrap();
            let mut ours = [s, a];
            ours.sort_by(f64::total_cmp);
            for (x, y) in ours.iter().zip(&low) {
                assert!((x - y).abs() < 1e-10, "m = {m}: {x} vs {y}");
            }
        }
    }
}
