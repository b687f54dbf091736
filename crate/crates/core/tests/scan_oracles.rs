use chm_core::scan::center_candidates;
use chm_core::{
    ball_discrete_measure, estimate_geometry, gallery, scan_generation, Code, IfsSystem, PointCloud, ScanOptions,
};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// O(N^3) minimization straight from the definition.
fn brute_force(cloud: &PointCloud<'_>, tie_tol: f64) -> (f64, Vec<(Code, Code)>) {
    let s = cloud.system().dimension();
    let n = cloud.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if cloud.first_symbol(i) == cloud.first_symbol(j) {
                continue;
            }
            let d = dist(cloud.coords(i), cloud.coords(j));
            let lim = d + tie_tol * d.max(1.0);
            let mu: f64 =
                (0..n).filter(|&q| dist(cloud.coords(i), cloud.coords(q)) <= lim).map(|q| cloud.weight(q)).sum();
            pairs.push(((2.0 * d).powf(s) / mu, i, j));
        }
    }
    let best = pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let mut ties: Vec<(Code, Code)> = pairs
        .iter()
        .filter(|p| p.0 <= best * (1.0 + 1e-12))
        .map(|&(_, i, j)| (Code::from(cloud.code(i)), Code::from(cloud.code(j))))
        .collect();
    ties.sort();
    (best, ties)
}

fn gallery_systems() -> Vec<(String, IfsSystem)> {
    gallery::catalog().into_iter().map(|e| (e.name, e.system)).collect()
}

#[test]
fn scan_agrees_with_brute_force() {
    for (name, sys) in gallery_systems() {
        let g_max = if sys.len() > 3 { 2 } else { 3 };
        let mut cloud = PointCloud::initial(&sys);
        for g in 0..=g_max {
            if g > 0 {
                cloud = cloud.refine().unwrap();
            }
            let rec = scan_generation(&cloud, &ScanOptions::default());
            let (best, ties) = brute_force(&cloud, 1e-12);
            assert!((rec.m_tilde - best).abs() <= 1e-12 * best, "{name} g={g}: {} vs {best}", rec.m_tilde);
            let mut got = rec.all_minimizers.clone();
            got.sort();
            // the scan's measures are compensated sums, so borderline ties may differ in the last bit
            for t in &ties {
                assert!(got.contains(t), "{name} g={g}: missing pair {t:?}");
            }
            assert_eq!((rec.center.code.clone(), rec.witness.code.clone()), got[0], "{name} g={g}");
        }
    }
}

#[test]
fn sweep_measures_match_ball_queries() {
    let opts = ScanOptions::default();
    let mut checked = 0usize;
    for (name, sys) in gallery_systems() {
        let mut cloud = PointCloud::initial(&sys);
        for g in 0..=3 {
            if g > 0 {
                cloud = cloud.refine().unwrap();
            }
            let step = (cloud.len() / 24).max(1);
            for center in (0..cloud.len()).step_by(step) {
                for c in center_candidates(&cloud, center, &opts) {
                    let direct = ball_discrete_measure(&cloud, cloud.coords(center), c.distance, opts.tie_tol);
                    assert!((c.measure - direct).abs() <= 1e-12, "{name} g={g}: {} vs {direct}", c.measure);
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 10_000, "only {checked} comparisons");
}

#[test]
fn record_invariants_hold() {
    for (name, sys) in gallery_systems() {
        let geo = estimate_geometry(&sys, sys.default_geometry_depth()).unwrap();
        let mut cloud = PointCloud::initial(&sys);
        for g in 0..=3 {
            if g > 0 {
                cloud = cloud.refine().unwrap();
            }
            let rec = scan_generation(&cloud, &ScanOptions::default());
            let s = sys.dimension();
            assert_ne!(rec.center.code.first(), rec.witness.code.first(), "{name}");
            assert!(rec.d_tilde >= geo.gap_low - 2.0 * cloud.gap(&geo), "{name} g={g}");
            assert!(rec.d_tilde <= geo.diameter_up * (1.0 + 1e-12), "{name} g={g}");
            assert!(rec.ball_discrete_measure > 0.0 && rec.ball_discrete_measure <= 1.0 + 1e-12);
            let h = (2.0 * rec.d_tilde).powf(s) / rec.ball_discrete_measure;
            assert!((h - rec.m_tilde).abs() <= 1e-12 * h);
            assert!((dist(&rec.center.coords, &rec.witness.coords) - rec.d_tilde).abs() <= 1e-15);
        }
    }
}

#[cfg(feature = "parallel")]
#[test]
fn worker_count_does_not_change_records() {
    let sys = gallery::get("sierpinski(0.2)").unwrap().system;
    let cloud = PointCloud::generation_of(&sys, 4, 1 << 20).unwrap();
    let run = |k: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build().unwrap();
        pool.install(|| scan_generation(&cloud, &ScanOptions::default()))
    };
    let one = run(1);
    for k in [2, 3, 4] {
        assert_eq!(run(k), one);
    }
}
