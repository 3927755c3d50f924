use proptest::collection::vec;
use proptest::prelude::*;
use skycell::channel::{avg_path_loss, avg_path_loss_gain_free, EnvironmentKind};
use skycell::clustering::{ellipse_clustering, normalized_distance, split_cluster};
use skycell::geometry::{edge_distance, mvee};
use skycell::{
    Beam, ClusteringConfig, Ellipse, Environment, FitConfig, Point2, RadioConfig, Region, Scenario,
};

fn point() -> impl Strategy<Value = Point2> {
    (0.0..1000.0f64, 0.0..1000.0f64).prop_map(|(x, y)| Point2::new(x, y))
}

fn points(range: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Point2>> {
    vec(point(), range)
}

fn env_kind() -> impl Strategy<Value = EnvironmentKind> {
    prop::sample::select(EnvironmentKind::ALL.to_vec())
}

fn rotate(p: &Point2, angle: f64, about: &Point2) -> Point2 {
    let (s, c) = angle.sin_cos();
    let (dx, dy) = (p.x - about.x, p.y - about.y);
    Point2::new(about.x + c * dx - s * dy, about.y + s * dx + c * dy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mvee_covers_every_point(pts in points(1..60)) {
        let e = mvee(&pts, &FitConfig::default()).unwrap();
        for p in &pts {
            prop_assert!(e.contains(p), "level {}", e.level(p));
        }
        let (major, minor) = e.semi_axes();
        prop_assert!(major >= minor && minor >= 1.0 - 1e-9);
    }

    #[test]
    fn mvee_is_translation_equivariant(pts in points(3..30), dx in -500.0..500.0f64, dy in -500.0..500.0f64) {
        let cfg = FitConfig::default();
        let a = mvee(&pts, &cfg).unwrap();
        let moved: Vec<Point2> = pts.iter().map(|p| Point2::new(p.x + dx, p.y + dy)).collect();
        let b = mvee(&moved, &cfg).unwrap();
        prop_assert!((a.area() - b.area()).abs() <= 1e-4 * a.area());
        prop_assert!((a.center().x + dx - b.center().x).abs() < 1e-3);
        prop_assert!((a.center().y + dy - b.center().y).abs() < 1e-3);
    }

    #[test]
    fn mvee_is_rotation_equivariant(pts in points(3..30), angle in 0.0..std::f64::consts::TAU) {
        let cfg = FitConfig::default();
        let a = mvee(&pts, &cfg).unwrap();
        let pivot = Point2::new(500.0, 500.0);
        let turned: Vec<Point2> = pts.iter().map(|p| rotate(p, angle, &pivot)).collect();
        let b = mvee(&turned, &cfg).unwrap();
        prop_assert!((a.area() - b.area()).abs() <= 1e-4 * a.area());
        let expected = rotate(&a.center(), angle, &pivot);
        prop_assert!(expected.distance(&b.center()) < 1e-2);
    }

    #[test]
    fn mvee_area_grows_with_the_set(pts in points(3..30), extra in point()) {
        let cfg = FitConfig::default();
        let a = mvee(&pts, &cfg).unwrap();
        let mut more = pts.clone();
        more.push(extra);
        let b = mvee(&more, &cfg).unwrap();
        prop_assert!(b.area() >= a.area() * (1.0 - 1e-5), "{} < {}", b.area(), a.area());
    }

    #[test]
    fn ellipse_serialization_round_trips(
        cx in -1e4..1e4f64, cy in -1e4..1e4f64, major in 1.0..1e3f64, ratio in 0.01..1.0f64, angle in 0.0..3.0f64,
    ) {
        let e = Ellipse::from_center_axes(Point2::new(cx, cy), major, major * ratio, angle).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        let back: Ellipse = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn edge_distance_is_attained_by_a_member(pts in points(1..40)) {
        let e = mvee(&pts, &FitConfig::default()).unwrap();
        let d = edge_distance(&e, &pts).unwrap();
        let c = e.center();
        prop_assert!(pts.iter().all(|p| p.distance(&c) <= d));
        prop_assert!(pts.iter().any(|p| p.distance(&c) == d));
    }

    #[test]
    fn path_loss_is_monotone_in_distance(kind in env_kind(), h in 10.0..1000.0f64, r1 in 0.0..2000.0f64, dr in 0.0..500.0f64) {
        let env = Environment::preset(kind);
        let radio = RadioConfig::default();
        let beam = Beam::new(40.0, 30.0).unwrap();
        let near = avg_path_loss(h, r1, &env, &beam, &radio).unwrap();
        let far = avg_path_loss(h, r1 + dr, &env, &beam, &radio).unwrap();
        prop_assert!(far >= near * (1.0 - 1e-12));
    }

    #[test]
    fn path_loss_is_quasiconvex_in_altitude(kind in env_kind(), r in 1.0..800.0f64, a in 1.0..1000.0f64, b in 1.0..1000.0f64, t in 0.0..1.0f64) {
        let env = Environment::preset(kind);
        let radio = RadioConfig::default();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mid = lo + t * (hi - lo);
        let f = |h: f64| avg_path_loss_gain_free(h, r, &env, &radio).unwrap();
        prop_assert!(f(mid) <= f(lo).max(f(hi)) * (1.0 + 1e-12));
    }

    #[test]
    fn split_parts_are_a_partition(pts in points(2..50), seed in any::<u64>()) {
        if let Some(split) = split_cluster(&pts, seed) {
            let mut all: Vec<usize> = split.first.iter().chain(&split.second).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..pts.len()).collect::<Vec<_>>());
            prop_assert!(!split.first.is_empty() && !split.second.is_empty());
        }
    }

    #[test]
    fn normalized_distance_is_scale_invariant(pts in points(2..30), seed in any::<u64>(), k in -3i32..4) {
        let scale = 2f64.powi(k);
        // the floor is a length, so it scales with the coordinates
        let cfg = FitConfig::default();
        let scaled_cfg = FitConfig { min_semi_axis: cfg.min_semi_axis * scale, ..cfg };
        let e = mvee(&pts, &cfg).unwrap();
        let scaled: Vec<Point2> = pts.iter().map(|p| Point2::new(p.x * scale, p.y * scale)).collect();
        let es = mvee(&scaled, &scaled_cfg).unwrap();
        let d = normalized_distance(&pts, &e, seed);
        let ds = normalized_distance(&scaled, &es, seed);
        prop_assert_eq!(d.to_bits(), ds.to_bits(), "{} vs {}", d, ds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn clustering_partitions_disjointly(pts in points(1..120), seed in any::<u64>()) {
        let cfg = ClusteringConfig { rng_seed: seed, max_outer_iterations: 500, ..ClusteringConfig::default() };
        let out = ellipse_clustering(&pts, &cfg).unwrap();
        let cs = &out.cluster_set;
        prop_assert!(cs.is_partition());
        prop_assert_eq!(cs.multiply_covered_users(), 0);
        for c in &cs.clusters {
            for &m in &c.members {
                prop_assert!(c.ellipse.contains(&pts[m]));
            }
        }
        prop_assert!(out.trace.converged());
        prop_assert_eq!(*out.trace.u_cond_sequence().last().unwrap(), 0);
    }

    #[test]
    fn clustering_is_deterministic(pts in points(1..100), seed in any::<u64>()) {
        let cfg = ClusteringConfig { rng_seed: seed, max_outer_iterations: 500, ..ClusteringConfig::default() };
        let a = ellipse_clustering(&pts, &cfg).unwrap();
        let b = ellipse_clustering(&pts, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn clustering_memberships_are_scale_invariant(pts in points(1..80), k in -2i32..3) {
        let scale = 2f64.powi(k);
        let cfg = ClusteringConfig { max_outer_iterations: 500, ..ClusteringConfig::default() };
        let scaled_cfg = ClusteringConfig {
            fit: FitConfig { min_semi_axis: cfg.fit.min_semi_axis * scale, ..cfg.fit },
            ..cfg
        };
        let scaled: Vec<Point2> = pts.iter().map(|p| Point2::new(p.x * scale, p.y * scale)).collect();
        let a = ellipse_clustering(&pts, &cfg).unwrap();
        let b = ellipse_clustering(&scaled, &scaled_cfg).unwrap();
        let members = |o: &skycell::ClusteringOutcome| {
            o.cluster_set.clusters.iter().map(|c| c.members.clone()).collect::<Vec<_>>()
        };
        prop_assert_eq!(members(&a), members(&b));
    }

    #[test]
    fn scenario_json_round_trips(pts in points(1..50), kind in env_kind(), seed in any::<u64>()) {
        let s = Scenario {
            region: Region::default(),
            users: pts,
            environment: Environment::preset(kind),
            radio: RadioConfig::default(),
            clustering: ClusteringConfig { rng_seed: seed, ..ClusteringConfig::default() },
            pcp: None,
        };
        let text = s.to_json().unwrap();
        let (back, warnings) = Scenario::from_json(&text).unwrap();
        prop_assert!(warnings.is_empty());
        prop_assert_eq!(back.to_json().unwrap(), text);
        prop_assert_eq!(back, s);
    }
}
