use mstratio::constructions::{
    fig8, integer_checkerboard, near_collapse, seven_points, stretched_hex, supmax_check,
    SUPMAX_UPPER_BOUND,
};
use mstratio::search::{brute_force_max, local_search, random_coloring, Schedule};
use mstratio::{
    generate_rhombus, generate_square, make_basis, mst, mst_ratio, packing_coloring, Basis,
    Coloring, Metric, PackingFamily, PointCloud, Topology,
};

fn hex_torus(n: u32) -> PointCloud {
    generate_rhombus(&Basis::hexagonal(), n, Topology::torus(n).unwrap()).unwrap()
}

#[test]
fn row_by_row_tree_length() {
    for nu in [1.0f64, 1.2, 1.5] {
        let x = if nu == 1.0 { 0.5 } else { 0.3 };
        let basis = make_basis([1.0, 0.0], [x, (nu * nu - x * x).sqrt()]).unwrap();
        assert!((basis.nu() - nu).abs() < 1e-12);
        for n in [5u32, 10, 20] {
            let cloud = generate_rhombus(&basis, n + 1, Topology::Plane).unwrap();
            let len = mst(&cloud, Metric::EuclideanPlane).unwrap().total_length();
            let n = f64::from(n);
            assert!((len - ((n + 1.0) * n + n * nu)).abs() < 1e-9, "nu={nu} n={n}");
        }
    }
}

#[test]
fn quarter_packing_on_small_tori() {
    for n in [4u32, 6, 8, 10] {
        let t = hex_torus(n);
        let c = packing_coloring(&t, PackingFamily::Quarter).unwrap();
        let r = mst_ratio(&t, &c, Metric::EuclideanTorus).unwrap();
        let m = f64::from(n * n);
        let expected = (2.0 * (m / 4.0 - 1.0) + (3.0 * m / 4.0 - 1.0)) / (m - 1.0);
        assert!((r.ratio - expected).abs() < 1e-9, "n={n}");
    }
}

#[test]
fn stretched_lattice_matches_its_closed_form() {
    for r in [9.0, 12.5, 20.0, 37.0, 60.0] {
        let s = stretched_hex(r).unwrap();
        let report = mst_ratio(&s.cloud, &s.coloring, Metric::EuclideanPlane).unwrap();
        assert!((report.len_a - s.tree_length_formula()).abs() < 1e-9 * report.len_a);
        assert!((report.len_b - s.blue_tree_length_formula()).abs() < 1e-9 * report.len_a);
        assert!((report.ratio - s.boundary_corrected_ratio()).abs() < 1e-9, "r={r}");
        if s.blue_column_ends == 0 {
            assert!((report.ratio - s.closed_form_ratio()).abs() < 1e-9);
        }
    }
}

#[test]
fn stretched_column_count_at_r10() {
    let b = make_basis([9.0, 0.0], [4.5, 3f64.sqrt() / 2.0]).unwrap();
    let c = generate_square(&b, 10.0).unwrap();
    let mut cols: Vec<i64> = c.cartesian().iter().map(|p| (p[0] / 4.5).round() as i64).collect();
    cols.sort_unstable();
    cols.dedup();
    assert_eq!(cols.len(), 5);
}

#[test]
fn seven_points_limit() {
    let (cloud, c) = seven_points(1e-6).unwrap();
    let r = mst_ratio(&cloud, &c, Metric::EuclideanPlane).unwrap();
    let limit = (2.0 + 3f64.sqrt()) / 3f64.sqrt();
    assert!((r.ratio - limit).abs() < 1e-4);
    assert!(r.ratio < SUPMAX_UPPER_BOUND);
    assert!(supmax_check(&r));
}

#[test]
fn near_collapse_stays_close_to_one() {
    for n in [3usize, 10, 30] {
        let nc = near_collapse(n, 1e-4).unwrap();
        let r = mst_ratio(&nc.cloud, &nc.coloring, Metric::EuclideanPlane).unwrap();
        assert!(r.ratio < 1.01);
        let s = mst_ratio(&nc.cloud, &nc.singleton_coloring(), Metric::EuclideanPlane).unwrap();
        assert!(s.ratio <= 2.0 * (n as f64 - 2.0) * 1e-4);
    }
}

#[test]
fn checkerboard_parities_agree() {
    for n in [3u32, 4, 9, 10] {
        let (cloud, even) = integer_checkerboard(n, false).unwrap();
        let (_, odd) = integer_checkerboard(n, true).unwrap();
        let a = mst_ratio(&cloud, &even, Metric::EuclideanPlane).unwrap().ratio;
        let b = mst_ratio(&cloud, &odd, Metric::EuclideanPlane).unwrap().ratio;
        assert!((a - b).abs() < 1e-12);
        let m = f64::from(n * n);
        assert!((a - 2f64.sqrt() * (m - 2.0) / (m - 1.0)).abs() < 1e-9);
    }
}

#[test]
fn two_by_two_checkerboard_is_the_brute_force_maximum() {
    let (cloud, c) = integer_checkerboard(2, false).unwrap();
    let r = mst_ratio(&cloud, &c, Metric::EuclideanPlane).unwrap();
    let (_, best) = brute_force_max(&cloud, Metric::EuclideanPlane, 22).unwrap();
    assert!((r.ratio - best.ratio).abs() < 1e-12);
}

#[test]
fn brute_force_dominates_constructed_colorings() {
    let t = hex_torus(4);
    let (_, best) = brute_force_max(&t, Metric::EuclideanTorus, 22).unwrap();
    let quarter = packing_coloring(&t, PackingFamily::Quarter).unwrap();
    let q = mst_ratio(&t, &quarter, Metric::EuclideanTorus).unwrap();
    assert!(best.ratio >= q.ratio - 1e-12);
    for seed in 0..20 {
        let c = random_coloring(16, seed);
        let r = mst_ratio(&t, &c, Metric::EuclideanTorus).unwrap();
        assert!(best.ratio >= r.ratio - 1e-12);
    }
    assert!(best.ratio < 1.25);
}

#[test]
fn searching_from_the_maximum_stays_put() {
    let t = hex_torus(4);
    let (c, best) = brute_force_max(&t, Metric::EuclideanTorus, 22).unwrap();
    let trace = local_search(&t, Metric::EuclideanTorus, &c, 1, 500, Schedule::greedy()).unwrap();
    assert!(trace.local_max);
    assert!(trace.steps.iter().all(|s| s.ratio <= best.ratio + 1e-12));
    assert!((trace.best_ratio - best.ratio).abs() < 1e-12);
}

#[test]
fn annealing_on_torus6_reaches_the_quarter_value() {
    let t = hex_torus(6);
    let init = random_coloring(36, 2024);
    let trace = local_search(&t, Metric::EuclideanTorus, &init, 99, 10_000, Schedule::default()).unwrap();
    assert!(trace.best_ratio >= 1.2 - 1e-12, "{}", trace.best_ratio);
    let again = local_search(&t, Metric::EuclideanTorus, &init, 99, 10_000, Schedule::default()).unwrap();
    assert_eq!(trace, again);
}

#[test]
fn fig8_report() {
    let (cloud, c) = fig8().unwrap();
    let r = mst_ratio(&cloud, &c, Metric::EuclideanPlane).unwrap();
    assert!(supmax_check(&r));
    let swapped = mst_ratio(&cloud, &c.complement(), Metric::EuclideanPlane).unwrap();
    assert_eq!(r.ratio, swapped.ratio);
    assert_eq!(Coloring::uniform(100).counts(), vec![100, 0]);
}
