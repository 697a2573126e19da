use std::collections::BTreeSet;

use mingap_core::analysis::{build_clique_cover, edge_state_localization};
use mingap_core::eigen::{herm_eigen, sym_eigen, tridiag_eigen_bisect, HermMatrix, Tridiag};
use mingap_core::equitable::{
    end_anchored_partition, is_equitable, quotient_is_irreducible_tridiagonal, quotient_matrix,
    quotient_spectrum, split_spectra, structural_partition, symmetrize_quotient, SPLIT_TOL,
};
use mingap_core::families::{BlockKind, FamilyDescriptor};
use mingap_core::floquet::{
    build_bloch_matrix, cubic_dispersion, delta_lattice, gamma_lattice, sample_bands,
};
use mingap_core::graph::{adjacency_matrix, induced_subgraph, is_connected, is_regular, make_graph, Graph};
use mingap_core::recurrence::{
    cubic_boundary_ratio, cubic_excluded, k_of, main_components_closed, main_components_iterative,
    recurrence_params, Kind,
};
use mingap_core::sector::{is_automorphism, reversal};
use num_complex::Complex64;
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..=12).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = pairs.iter().zip(&keep).filter(|p| *p.1).map(|p| *p.0).collect();
            make_graph(n, &edges).unwrap()
        })
    })
}

fn delta_n() -> impl Strategy<Value = usize> {
    (0usize..=48).prop_map(|m| 10 + 4 * m)
}

fn cubic0_n() -> impl Strategy<Value = usize> {
    (0usize..=47).prop_map(|m| 12 + 4 * m)
}

fn gamma_n() -> impl Strategy<Value = usize> {
    (0usize..=37).prop_map(|q| 11 + 5 * q)
}

fn quartic_fd() -> impl Strategy<Value = FamilyDescriptor> {
    (1usize..=5, 1usize..=5, 0usize..=8).prop_map(|(i, j, q)| {
        FamilyDescriptor::quartic(
            BlockKind::quartic_end(i).unwrap(),
            q,
            BlockKind::quartic_end(j).unwrap().mirror(),
        )
        .unwrap()
    })
}

fn eigenvalues(g: &Graph) -> Vec<f64> {
    sym_eigen(&adjacency_matrix(g), false).unwrap().values
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjacency_nonzeros_are_twice_the_edges(g in arb_graph()) {
        prop_assert_eq!(adjacency_matrix(&g).count_nonzero(), 2 * g.edges().len());
    }

    #[test]
    fn induced_on_everything_is_identity(g in arb_graph()) {
        let all: Vec<usize> = (1..=g.n()).collect();
        prop_assert_eq!(induced_subgraph(&g, &all).unwrap(), g);
    }

    #[test]
    fn induced_subgraphs_interlace(g in arb_graph(), mask in proptest::collection::vec(any::<bool>(), 12)) {
        let vs: Vec<usize> = (1..=g.n()).filter(|v| mask[v - 1]).collect();
        prop_assume!(!vs.is_empty());
        let h = induced_subgraph(&g, &vs).unwrap();
        let (lg, lh) = (eigenvalues(&g), eigenvalues(&h));
        let (n, k) = (lg.len(), lh.len());
        for i in 0..k {
            prop_assert!(lg[i] >= lh[i] - 1e-9);
            prop_assert!(lh[i] >= lg[n - k + i] - 1e-9);
        }
    }

    #[test]
    fn trace_identities(g in arb_graph()) {
        let l = eigenvalues(&g);
        let e = g.edges().len() as f64;
        prop_assert!(l.iter().sum::<f64>().abs() <= 1e-8 * (1.0 + e));
        prop_assert!((l.iter().map(|x| x * x).sum::<f64>() - 2.0 * e).abs() <= 1e-8 * (1.0 + e));
    }

    #[test]
    fn hermitian_embedding_pairs(entries in proptest::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 10)) {
        let mut h = HermMatrix::zeros(4);
        let mut it = entries.iter();
        for i in 0..4 {
            for j in i..4 {
                let &(re, im) = it.next().unwrap();
                h.set(i, j, Complex64::new(re, if i == j { 0.0 } else { im }));
            }
        }
        let s = herm_eigen(&h).unwrap();
        prop_assert_eq!(s.len(), 4);
        let trace: f64 = (0..4).map(|i| h.get(i, i).re).sum();
        prop_assert!((s.values.iter().sum::<f64>() - trace).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cubic_families_are_cubic_and_connected(n in delta_n(), n0 in cubic0_n()) {
        for fd in [FamilyDescriptor::delta(n).unwrap(), FamilyDescriptor::min_cubic(n0).unwrap()] {
            let g = fd.build();
            prop_assert_eq!(g.n(), fd.n);
            prop_assert!(is_regular(&g, 3) && is_connected(&g));
        }
        prop_assert_eq!(10 + 4 * ((n - 10) / 4), n);
    }

    #[test]
    fn quartic_families_are_quartic_and_connected(n in gamma_n(), nc in 11usize..=200, fd in quartic_fd()) {
        for fd in [FamilyDescriptor::gamma(n).unwrap(), FamilyDescriptor::canonical_quartic(nc).unwrap(), fd] {
            let g = fd.build();
            prop_assert_eq!(g.n(), fd.n);
            prop_assert!(is_regular(&g, 4) && is_connected(&g));
        }
        prop_assert_eq!(11 + 5 * ((n - 11) / 5), n);
    }

    #[test]
    fn delta_and_gamma_are_mirror_symmetric(n in delta_n(), ng in gamma_n()) {
        for g in [FamilyDescriptor::delta(n).unwrap().build(), FamilyDescriptor::gamma(ng).unwrap().build()] {
            prop_assert!(is_automorphism(&g, &reversal(g.n())));
        }
    }

    #[test]
    fn block_cells_have_expected_sizes(fd in quartic_fd(), n in delta_n()) {
        for fd in [fd, FamilyDescriptor::delta(n).unwrap()] {
            let g = fd.build();
            let p = structural_partition(&fd, &g).unwrap();
            let sizes = p.sizes();
            let k = sizes.len();
            let end_size = |b: BlockKind| match b {
                BlockKind::D1 | BlockKind::D5 | BlockKind::D1m | BlockKind::D5m => 3,
                BlockKind::D2 | BlockKind::D4 | BlockKind::D2m | BlockKind::D4m => 4,
                _ => 2,
            };
            prop_assert_eq!(sizes[0], end_size(fd.blocks[0]));
            prop_assert_eq!(sizes[k - 1], end_size(*fd.blocks.last().unwrap()));
            prop_assert!(sizes[1..k - 1].iter().all(|&s| s <= 2));
        }
    }

    #[test]
    fn anchored_partition_is_equitable_and_matches_blocks(n in delta_n(), ng in gamma_n()) {
        for fd in [FamilyDescriptor::delta(n).unwrap(), FamilyDescriptor::gamma(ng).unwrap()] {
            let g = fd.build();
            let anchored = end_anchored_partition(&g);
            prop_assert!(is_equitable(&g, &anchored));
            let a: BTreeSet<Vec<usize>> = anchored.cells.into_iter().collect();
            let s: BTreeSet<Vec<usize>> = structural_partition(&fd, &g).unwrap().cells.into_iter().collect();
            prop_assert_eq!(a, s);
        }
    }

    #[test]
    fn quotient_spectrum_is_contained_in_graph_spectrum(fd in quartic_fd(), n in delta_n(), n0 in cubic0_n()) {
        for fd in [fd, FamilyDescriptor::delta(n).unwrap(), FamilyDescriptor::min_cubic(n0).unwrap()] {
            let g = fd.build();
            let qm = quotient_matrix(&g, &structural_partition(&fd, &g).unwrap()).unwrap();
            let full = sym_eigen(&adjacency_matrix(&g), false).unwrap();
            prop_assert!(split_spectra(&full, &quotient_spectrum(&qm).unwrap(), SPLIT_TOL).is_ok());
        }
    }

    #[test]
    fn symmetrized_quotient_keeps_eigenvalues(fd in quartic_fd(), n in delta_n()) {
        // Each eigenvector y of the symmetrized matrix gives D^{-1/2} y for the
        // raw quotient; checked against Q directly.
        for fd in [fd, FamilyDescriptor::delta(n).unwrap()] {
            let g = fd.build();
            let qm = quotient_matrix(&g, &structural_partition(&fd, &g).unwrap()).unwrap();
            let s = sym_eigen(&symmetrize_quotient(&qm).unwrap(), true).unwrap();
            for (lam, y) in s.values.iter().zip(s.vectors.as_ref().unwrap()) {
                let x: Vec<f64> = y.iter().zip(&qm.weights).map(|(v, &w)| v / (w as f64).sqrt()).collect();
                let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
                for i in 0..qm.dim {
                    let qx: f64 = (0..qm.dim).map(|j| qm.q[i][j] as f64 * x[j]).sum();
                    prop_assert!((qx - lam * x[i]).abs() < 1e-10 * norm);
                }
            }
        }
    }

    #[test]
    fn delta_quotient_is_irreducible_tridiagonal(n in delta_n()) {
        let fd = FamilyDescriptor::delta(n).unwrap();
        let g = fd.build();
        let qm = quotient_matrix(&g, &structural_partition(&fd, &g).unwrap()).unwrap();
        prop_assert!(quotient_is_irreducible_tridiagonal(&qm));
        let sym = symmetrize_quotient(&qm).unwrap();
        let t = Tridiag::from_sym(&sym).unwrap();
        let bis = tridiag_eigen_bisect(&t, 1e-14).unwrap();
        let jac = sym_eigen(&sym, false).unwrap();
        for (a, b) in bis.values.iter().zip(&jac.values) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        // Edge-state pairs split by less than double precision beyond n ~ 70.
        if n <= 58 {
            prop_assert!(bis.values.windows(2).all(|w| w[0] - w[1] > 1e-7));
        }
    }

    #[test]
    fn reconstruction_and_perron(n in delta_n(), ng in gamma_n()) {
        for (g, r) in [(FamilyDescriptor::delta(n).unwrap().build(), 3.0), (FamilyDescriptor::gamma(ng).unwrap().build(), 4.0)] {
            let a = adjacency_matrix(&g);
            let s = sym_eigen(&a, true).unwrap();
            let v = s.vectors.as_ref().unwrap();
            let dim = g.n();
            let mut err = 0.0;
            for i in 0..dim {
                for j in 0..dim {
                    let rec: f64 = (0..dim).map(|k| s.values[k] * v[k][i] * v[k][j]).sum();
                    err += (a.get(i, j) - rec).powi(2);
                }
            }
            prop_assert!(err.sqrt() <= 1e-9 * a.frobenius_norm());
            prop_assert!((s.values[0] - r).abs() < 1e-10);
            prop_assert!(s.values[0] - s.values[1] > 1e-6);
        }
    }

    #[test]
    fn clique_cover_identity(n in delta_n(), ng in gamma_n()) {
        for fd in [FamilyDescriptor::delta(n).unwrap(), FamilyDescriptor::gamma(ng).unwrap()] {
            let cover = build_clique_cover(&fd).unwrap();
            prop_assert!(cover.check_identity(&fd.build()).holds);
        }
    }

    #[test]
    fn first_component_mass(n in (23usize..=48).prop_map(|m| 10 + 4 * m)) {
        prop_assert!(edge_state_localization(n).unwrap().x1_sq > 0.018);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dispersion_matches_bloch_spectrum(theta in -std::f64::consts::PI..std::f64::consts::PI) {
        let mut f = cubic_dispersion(theta);
        f.sort_by(|a, b| b.total_cmp(a));
        let h = herm_eigen(&build_bloch_matrix(&delta_lattice(), theta)).unwrap();
        for (x, y) in f.iter().zip(&h.values) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn bloch_spectrum_is_even_in_theta(theta in -std::f64::consts::PI..std::f64::consts::PI) {
        for l in [delta_lattice(), gamma_lattice()] {
            let a = herm_eigen(&build_bloch_matrix(&l, theta)).unwrap();
            let b = herm_eigen(&build_bloch_matrix(&l, -theta)).unwrap();
            for (x, y) in a.values.iter().zip(&b.values) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn closed_form_matches_iteration(l in -3.0f64..3.0, lq in -4.0f64..4.0, m in 1usize..=60) {
        prop_assume!(cubic_excluded().iter().all(|e| (e - l).abs() > 1e-3));
        prop_assume!((k_of(Kind::Quartic, lq).powi(2) - 4.0).abs() > 1e-3);
        for (kind, lam) in [(Kind::Cubic, l), (Kind::Quartic, lq)] {
            let p = recurrence_params(kind, lam).unwrap();
            prop_assert!((p.r * p.s - 1.0).norm() < 1e-12 * (1.0 + p.k.abs()));
            prop_assert!((p.r + p.s - p.k).norm() < 1e-12 * (1.0 + p.k.abs()));
            let c = main_components_closed(&p, m).unwrap().a;
            let it = main_components_iterative(kind, lam, m).a;
            let scale = it.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            for (x, y) in c.iter().zip(&it) {
                prop_assert!((x - y).abs() <= 1e-8 * scale);
            }
        }
    }

    #[test]
    fn quartic_cut_vertex_elimination(l in -4.0f64..4.0, m in 2usize..=40) {
        let a = main_components_iterative(Kind::Quartic, l, m).a;
        let d = l.powi(3) - 2.0 * l * l - 7.0 * l + 4.0;
        let scale = a.iter().fold(0.0f64, |s, x| s.max(x.abs())) * (1.0 + d.abs());
        for i in 2..a.len() {
            prop_assert!((a[i - 1] * d - 4.0 * (a[i - 2] + a[i])).abs() <= 1e-9 * scale);
        }
    }
}

#[test]
fn boundary_ratio_exceeds_one_in_the_gap() {
    let (lo, hi) = (1.0, 5f64.sqrt());
    for i in 1..=1000 {
        let l = lo + (hi - lo) * i as f64 / 1001.0;
        assert!(cubic_boundary_ratio(l).unwrap() > 1.0, "lambda = {l}");
    }
}

#[test]
fn band_edges_sit_at_zero_and_pi() {
    for l in [delta_lattice(), gamma_lattice()] {
        let bs = sample_bands(&l, 1024).unwrap();
        let ends: Vec<&Vec<f64>> = bs
            .samples
            .iter()
            .filter(|(t, _)| *t == 0.0 || t.abs() == std::f64::consts::PI)
            .map(|(_, v)| v)
            .collect();
        for (j, &(lo, hi)) in bs.branch_bands.iter().enumerate() {
            let elo = ends.iter().map(|v| v[j]).fold(f64::INFINITY, f64::min);
            let ehi = ends.iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max);
            assert!((elo - lo).abs() < 1e-12 && (ehi - hi).abs() < 1e-12, "{} branch {j}", l.name);
        }
    }
}

#[test]
fn out_of_band_delta_eigenvalues_accumulate_at_the_limit() {
    let lim = (1.0 - 33f64.sqrt()) / 2.0;
    let r5 = 5f64.sqrt();
    let in_band = |x: f64| (-r5 - 1e-9..=1.0 + 1e-9).contains(&x) || (r5 - 1e-9..=3.0 + 1e-9).contains(&x);
    for n in (42..=202).step_by(20) {
        for x in eigenvalues(&FamilyDescriptor::delta(n).unwrap().build()) {
            if !in_band(x) {
                assert!(x < -r5 && (x - lim).abs() < 1e-3, "n = {n}: {x}");
            }
        }
    }
}

#[test]
fn bands_are_deterministic() {
    let a = sample_bands(&gamma_lattice(), 512).unwrap().to_csv();
    let b = sample_bands(&gamma_lattice(), 512).unwrap().to_csv();
    assert_eq!(a, b);
}
