use approx::assert_abs_diff_eq;
use polyslice::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(x: &Direction64, y: &Direction64, tol: f64) -> bool {
    x.coords().iter().zip(y.coords()).all(|(a, b)| (a - b).abs() < tol)
}

#[test]
fn cross_polytope_families() {
    let x3 = Body::cross_polytope(3);
    let pts = structured_critical_points(x3, 0.9, Functional::Volume).unwrap();
    assert_eq!(pts.len(), 1);
    assert!(close(&pts[0].a, &extremal_direction(x3), 1e-12));

    let pts = structured_critical_points(x3, 0.65, Functional::Volume).unwrap();
    assert!(pts.len() >= 2);
    assert!(pts.iter().any(|p| p.apex < 1.0 - 1e-6));
    for p in &pts {
        assert!(p.residual <= 1e-9, "{p:?}");
    }
}

#[test]
fn second_triangle_critical_point() {
    let s2 = Body::simplex(2);
    let t = 1.05 / 6f64.sqrt();
    let pts = structured_critical_points(s2, t, Functional::Volume).unwrap();
    let a1 = t + (t * t - 1.0 / 6.0).sqrt();
    let p = pts.iter().find(|p| (p.apex - a1).abs() < 1e-10).expect("off-apex critical point");
    assert_eq!(p.classification, Classification::LocalMax);
    let apex = pts.iter().find(|p| close(&p.a, &extremal_direction(s2), 1e-12)).unwrap();
    assert_eq!(apex.classification, Classification::LocalMin);
    assert!(section_value(s2, p.a.coords(), t, Functional::Volume).unwrap() > extremal_value(s2, t, Functional::Volume).value);
}

#[test]
fn structured_points_satisfy_the_lagrange_system() {
    for (body, t) in [
        (Body::simplex(3), 0.55),
        (Body::simplex(4), 0.45),
        (Body::simplex(5), 0.3),
        (Body::cross_polytope(4), 0.55),
        (Body::cube(3), 0.62),
        (Body::cube(4), 0.6),
        (Body::cube(5), 0.8),
    ] {
        for f in [Functional::Volume, Functional::Perimeter] {
            let pts = structured_critical_points(body, t, f).unwrap();
            assert!(!pts.is_empty());
            for p in &pts {
                assert!(p.residual <= 1e-9, "{body:?} {f:?} {p:?}");
                assert!(regime_check(&SectionQuery::new(body, p.a.clone(), t).unwrap()).is_separating());
                if body.kind == BodyKind::Simplex {
                    assert!(p.mu.is_some());
                } else {
                    assert!(p.mu.is_none());
                }
            }
        }
    }
}

#[test]
fn coefficient_examples() {
    let th = Body::simplex(4).thresholds::<f64>();
    assert_abs_diff_eq!(second_order_coefficient(Body::simplex(4), th.volume_flip, Functional::Volume).unwrap(), 0.0, epsilon = 1e-12);
    assert!(second_order_coefficient(Body::cross_polytope(6), 0.5, Functional::Volume).unwrap() > 0.0);
    assert!(second_order_coefficient(Body::cube(3), 0.5, Functional::Volume).unwrap() < 0.0);
    let r = Body::simplex(3).circumradius::<f64>();
    assert!(matches!(second_order_coefficient(Body::simplex(3), r, Functional::Volume), Err(SliceError::DomainError(_))));
}

#[test]
fn coefficient_zeros_are_the_tabulated_thresholds() {
    for n in 3..=10 {
        let s = Body::simplex(n).thresholds::<f64>();
        let c = Body::cube(n).thresholds::<f64>();
        let x = Body::cross_polytope(n).thresholds::<f64>();
        let z = |b: Body, t: f64, f| second_order_coefficient(b, t, f).unwrap();
        assert_abs_diff_eq!(z(Body::simplex(n), s.volume_flip, Functional::Volume), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(z(Body::simplex(n), s.perimeter_flip.unwrap(), Functional::Perimeter), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(z(Body::cross_polytope(n), x.volume_flip, Functional::Volume), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(z(Body::cube(n), c.volume_flip, Functional::Volume), 0.0, epsilon = 1e-12);
        if n >= 4 {
            assert_abs_diff_eq!(z(Body::cube(n), c.perimeter_flip.unwrap(), Functional::Perimeter), 0.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn classify_examples() {
    let x5 = Body::cross_polytope(5);
    assert_eq!(classify(x5, &extremal_direction(x5), 0.6, Functional::Volume).unwrap().classification, Classification::LocalMax);
    let c5 = Body::cube(5);
    assert_eq!(classify(c5, &extremal_direction(c5), 1.0, Functional::Volume).unwrap().classification, Classification::LocalMax);
    let s4 = Body::simplex(4);
    assert_eq!(classify(s4, &extremal_direction(s4), 0.1, Functional::Volume).unwrap().classification, Classification::LocalMin);

    let off = make_direction(&[0.9, 0.3, 0.2, 0.1, 0.05], c5).unwrap();
    assert!(matches!(classify(c5, &off, 0.6, Functional::Volume), Err(SliceError::NotCritical(_))));
}

#[test]
fn cube_perimeter_turns_at_eleven_thirtieths() {
    let c3 = Body::cube(3);
    let flip = 11.0 * 3f64.sqrt() / 30.0;
    let at = |t| classify(c3, &extremal_direction(c3), t, Functional::Perimeter).unwrap().classification;
    assert_eq!(at(flip - 0.01), Classification::LocalMin);
    assert_eq!(at(flip + 0.01), Classification::LocalMax);
    let c4 = Body::cube(4);
    assert_eq!(classify(c4, &extremal_direction(c4), 0.55, Functional::Volume).unwrap().classification, Classification::LocalMin);
}

#[test]
fn classification_follows_the_coefficient_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut checked = 0;
    while checked < 50 {
        let kind = [BodyKind::Simplex, BodyKind::CrossPolytope, BodyKind::Cube][rng.random_range(0..3)];
        let n = rng.random_range(3..=7);
        let body = Body::new(kind, n).unwrap();
        let th = body.thresholds::<f64>();
        let lo = if kind == BodyKind::Cube { th.cube_regime_floor.unwrap().max(0.0) } else { th.edge_midpoint.min(th.volume_flip) * 0.5 };
        let t = rng.random_range(lo..th.circumradius * 0.97);
        if (t - th.volume_flip).abs() < 1e-3 || !(t > lo) {
            continue;
        }
        let a = extremal_direction::<f64>(body);
        if !regime_check(&SectionQuery::new(body, a.clone(), t).unwrap()).is_separating() {
            continue;
        }
        let p = classify(body, &a, t, Functional::Volume).unwrap();
        let c = second_order_coefficient(body, t, Functional::Volume).unwrap();
        let want = if c > 0.0 { Classification::LocalMax } else { Classification::LocalMin };
        assert_eq!(p.classification, want, "{body:?} t={t} c={c}");
        checked += 1;
    }
}

#[test]
fn maximisers() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let c4 = Body::cube(4);
    let (d, v) = sphere_maximize(c4, 0.95, Functional::Volume, 64, &mut rng).unwrap();
    assert!(close(&d, &extremal_direction(c4), 1e-6), "{d:?}");
    assert_abs_diff_eq!(v, extremal_value(c4, 0.95, Functional::Volume).value, epsilon = 1e-12);

    let s2 = Body::simplex(2);
    let (d, v) = sphere_maximize(s2, 0.43, Functional::Volume, 64, &mut rng).unwrap();
    assert!(!close(&d, &extremal_direction(s2), 1e-3));
    assert!(v > extremal_value(s2, 0.43, Functional::Volume).value);

    let x4 = Body::cross_polytope(4);
    let (d, _) = sphere_maximize(x4, 0.8, Functional::Perimeter, 16, &mut rng).unwrap();
    assert!(close(&d, &extremal_direction(x4), 1e-6), "{d:?}");
}

#[test]
fn different_starts_reach_the_same_representative() {
    let body = Body::simplex(4);
    let t = 0.6;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (d, _) = sphere_maximize(body, t, Functional::Volume, 4, &mut rng).unwrap();
    for start in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + start);
        let (e, _) = sphere_maximize(body, t, Functional::Volume, 1, &mut rng).unwrap();
        assert!(close(&d, &e, 1e-6));
    }
}

#[test]
fn all_restarts_agree_above_the_edge_midpoints() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for body in [Body::simplex(4), Body::cross_polytope(4), Body::cube(4)] {
        let th = body.thresholds::<f64>();
        let t = 0.5 * (th.edge_midpoint + th.circumradius);
        let runs = multistart_ascent(body, t, Functional::Volume, 12, &mut rng).unwrap();
        assert_eq!(runs.len(), 12);
        for (d, _) in &runs {
            assert!(close(d, &runs[0].0, 1e-6), "{body:?}: {d:?} vs {:?}", runs[0].0);
        }
    }
}

#[test]
fn threshold_scans() {
    let r = threshold_scan(Body::simplex(5), Functional::Volume, 5).unwrap();
    assert!(r.gap <= 1e-6, "{r:?}");
    let r = threshold_scan(Body::cross_polytope(6), Functional::Volume, 6).unwrap();
    assert_abs_diff_eq!(r.empirical, 3.0 / 8.0, epsilon = 1e-6);
    let r = threshold_scan(Body::cube(3), Functional::Perimeter, 3).unwrap();
    assert_abs_diff_eq!(r.empirical, 11.0 * 3f64.sqrt() / 30.0, epsilon = 1e-6);
    assert_eq!(r.objective, Objective::Full(Functional::Perimeter));
    assert!(matches!(
        threshold_scan(Body::cross_polytope(4), Functional::Perimeter, 4),
        Err(SliceError::InvalidArgument(_))
    ));
}

#[test]
fn canonical_forms() {
    let x = make_direction(&[0.1, -0.9, 0.3], Body::cross_polytope(3)).unwrap();
    let c = canonicalize(&x);
    assert!(c.coords().windows(2).all(|w| w[0] >= w[1]));
    assert!(c.coords().iter().all(|&v| v >= 0.0));
    let s = make_direction(&[0.1, -0.9, 0.3, 0.5], Body::simplex(3)).unwrap();
    let c = canonicalize(&s);
    assert!(c.coords().windows(2).all(|w| w[0] >= w[1]));
    assert!(c.coords().iter().any(|&v| v < 0.0));
}
