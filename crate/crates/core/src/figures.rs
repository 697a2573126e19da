//! Chart builders for band diagrams, spectra across orders and eigenvector profiles.

use rayon::prelude::*;

use crate::eigen::sym_eigen;
use crate::error::{Error, Result};
use crate::families::{Family, FamilyDescriptor};
use crate::floquet::{delta_lattice, gamma_lattice, sample_bands, PeriodicLattice};
use crate::graph::adjacency_matrix;
use crate::sector::{reversal, sector_eigen};
use crate::svg::{Chart, Series};

pub fn lattice_for(family: Family) -> PeriodicLattice {
    if family.is_cubic() {
        delta_lattice()
    } else {
        gamma_lattice()
    }
}

/// Branches `lambda_j(theta)` over `[-pi, pi]`, gaps shaded.
pub fn band_diagram(family: Family, samples: usize) -> Result<Chart> {
    let lattice = lattice_for(family);
    let bs = sample_bands(&lattice, samples)?;
    let mut chart = Chart::new(
        &format!("Bloch bands of the {} lattice", lattice.name),
        "theta",
        "lambda",
    );
    for j in 0..lattice.w {
        let pts = bs.samples.iter().map(|(t, v)| (*t, v[j])).collect();
        chart.series.push(Series::line(&format!("lambda{}", j + 1), pts));
    }
    chart.bands = bs.gaps.clone();
    Ok(chart)
}

/// Every eigenvalue of the family graph against its order.
pub fn spectrum_scatter(family: Family, ns: &[usize]) -> Result<Chart> {
    let fds: Vec<FamilyDescriptor> = ns
        .iter()
        .map(|&n| FamilyDescriptor::for_family(family, n))
        .collect::<Result<_>>()?;
    let spectra = fds
        .par_iter()
        .map(|fd| sym_eigen(&adjacency_matrix(&fd.build()), false).map(|s| (fd.n, s.values)))
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = spectra
        .iter()
        .flat_map(|(n, vals)| vals.iter().map(move |&v| (*n as f64, v)))
        .collect();
    if pts.is_empty() {
        return Err(Error::EmptySeries);
    }
    let bs = sample_bands(&lattice_for(family), 256)?;
    let mut chart = Chart::new(
        &format!("Eigenvalues of {} graphs", family.as_str()),
        "n",
        "eigenvalue",
    )
    .with_series(Series::dots("eigenvalues", pts));
    chart.bands = bs.gaps;
    Ok(chart)
}

/// Components of unit eigenvectors of a mirror-symmetric family graph for the
/// `count` smallest eigenvalues, against vertex index.
pub fn eigenvector_chart(family: Family, n: usize, count: usize) -> Result<Chart> {
    let fd = FamilyDescriptor::for_family(family, n)?;
    if !fd.is_mirror_symmetric() {
        return Err(Error::UnsupportedFamily(format!("{} at n = {n} is not mirror symmetric", family.as_str())));
    }
    let g = fd.build();
    let merged = sector_eigen(&adjacency_matrix(&g), &reversal(n), true)?.merged();
    let vectors = merged.vectors.as_ref().expect("vectors requested");
    let mut chart = Chart::new(
        &format!("Eigenvectors of {} n = {n}", family.as_str()),
        "vertex",
        "component",
    );
    for k in (0..merged.len()).rev().take(count.max(1)) {
        let pts = vectors[k]
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64, x))
            .collect();
        chart
            .series
            .push(Series::line(&format!("lambda = {:.6}", merged.values[k]), pts));
    }
    Ok(chart)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_band_diagram() {
        let svg = band_diagram(Family::Delta, 1024).unwrap().to_svg().unwrap();
        assert_eq!(svg.matches("<polyline").count(), 4);
        assert!(svg.contains(r#"class="band""#));
    }

    #[test]
    fn eigenvector_profile_is_end_heavy() {
        let chart = eigenvector_chart(Family::Delta, 102, 1).unwrap();
        let pts = &chart.series[0].points;
        let end = pts[0].1.abs().max(pts[pts.len() - 1].1.abs());
        let mid = pts[pts.len() / 2].1.abs();
        assert!(end > 1e3 * mid);
        assert!(eigenvector_chart(Family::Cubic, 16, 1).is_err());
    }
}
