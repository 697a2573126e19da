use mingap_web::{bands_svg, eigenvector_svg, scatter_svg};

#[test]
fn bands_for_both_lattices() {
    let cubic = bands_svg("delta", 512).unwrap();
    assert_eq!(cubic.matches("<polyline").count(), 4);
    let quartic = bands_svg("gamma", 512).unwrap();
    assert_eq!(quartic.matches("<polyline").count(), 5);
    assert!(bands_svg("delta", 2).is_err());
    assert!(bands_svg("hexagonal", 64).is_err());
}

#[test]
fn scatter_filters_orders() {
    let svg = scatter_svg("delta", 10, 30).unwrap();
    // Delta_10 .. Delta_30: 10 + 14 + 18 + 22 + 26 + 30 points
    assert_eq!(svg.matches("<circle").count(), 120);
    assert!(scatter_svg("delta", 11, 13).is_err());
    assert!(scatter_svg("delta", 10, 1000).is_err());
}

#[test]
fn eigenvector_needs_mirror_symmetry() {
    let svg = eigenvector_svg("gamma", 31, 2).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(eigenvector_svg("cubic", 16, 1).is_err());
    assert!(eigenvector_svg("delta", 13, 1).is_err());
}

#[test]
fn same_input_same_bytes() {
    assert_eq!(scatter_svg("gamma", 11, 41).unwrap(), scatter_svg("gamma", 11, 41).unwrap());
}
