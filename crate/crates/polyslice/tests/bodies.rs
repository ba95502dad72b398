use approx::assert_abs_diff_eq;
use polyslice::bodies::FaceDescriptor;
use polyslice::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn volumes_and_radii() {
    for n in 2..=7 {
        let nf = n as f64;
        let fact: f64 = factorial(n);
        assert_abs_diff_eq!(Body::simplex(n).volume::<f64>(), (nf + 1.0).sqrt() / fact, epsilon = 1e-15);
        assert_abs_diff_eq!(Body::cross_polytope(n).volume::<f64>(), 2f64.powi(n as i32) / fact, epsilon = 1e-15);
        assert_eq!(Body::cube(n).volume::<f64>(), 1.0);

        // circumradius = distance from the centre to a vertex
        for body in [Body::simplex(n), Body::cross_polytope(n), Body::cube(n)] {
            let c = body.center::<f64>();
            let v = body.vertex::<f64>(0);
            let r = v.iter().zip(&c).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            assert_abs_diff_eq!(body.circumradius::<f64>(), r, epsilon = 1e-14);
        }
    }
}

#[test]
fn edge_midpoint_distance_is_what_it_says() {
    for n in 2..=6 {
        for body in [Body::simplex(n), Body::cross_polytope(n), Body::cube(n)] {
            let c = body.center::<f64>();
            let mut best = f64::INFINITY;
            for u in 0..body.vertex_count() {
                for w in u + 1..body.vertex_count() {
                    if !body.adjacent(u, w) {
                        continue;
                    }
                    let (p, q) = (body.vertex::<f64>(u), body.vertex::<f64>(w));
                    let d = p.iter().zip(&q).zip(&c).map(|((x, y), z)| ((x + y) / 2.0 - z).powi(2)).sum::<f64>().sqrt();
                    best = best.min(d);
                }
            }
            assert_abs_diff_eq!(body.edge_midpoint_distance::<f64>(), best, epsilon = 1e-14);
        }
    }
}

#[test]
fn make_direction_examples() {
    let d = make_direction(&[2.0, 0.0, 0.0], Body::cube(3)).unwrap();
    assert_eq!(d.coords(), &[1.0, 0.0, 0.0]);

    let d = make_direction(&[1.0, 0.0, 0.0, 0.0], Body::simplex(3)).unwrap();
    let s = 12f64.sqrt();
    for (x, y) in d.coords().iter().zip([3.0 / s, -1.0 / s, -1.0 / s, -1.0 / s]) {
        assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
    }

    assert_eq!(make_direction(&[1.0; 4], Body::simplex(3)), Err(SliceError::ZeroVector));
    assert!(matches!(
        make_direction(&[1.0, 2.0], Body::cube(3)),
        Err(SliceError::DimensionMismatch { expected: 3, got: 2 })
    ));
}

#[test]
fn canonical_directions() {
    let a = canonical_direction::<f64>(Body::simplex(3), Canonical::Apex).unwrap();
    let b = -1.0 / (2.0 * 3f64.sqrt());
    for (x, y) in a.coords().iter().zip([0.75f64.sqrt(), b, b, b]) {
        assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
    }
    let a = canonical_direction::<f64>(Body::cube(4), Canonical::MainDiagonal).unwrap();
    assert_eq!(a.coords(), &[0.5; 4]);
    let a = canonical_direction::<f64>(Body::simplex(3), Canonical::Alternating).unwrap();
    assert_eq!(a.coords(), &[0.5, -0.5, 0.5, -0.5]);

    assert!(matches!(
        canonical_direction::<f64>(Body::cube(3), Canonical::Apex),
        Err(SliceError::Unsupported { which: Canonical::Apex, body: BodyKind::Cube })
    ));
    assert!(canonical_direction::<f64>(Body::simplex(4), Canonical::Alternating).is_err());
}

#[test]
fn regime_examples() {
    let cube = Body::cube(3);
    let q = SectionQuery::new(cube, extremal_direction(cube), 0.8).unwrap();
    // apex (1,1,1)/2 at height √3/2, its neighbours at 1/(2√3)
    assert!(3f64.sqrt() / 2.0 > 0.8 && 0.8 > 1.0 / (2.0 * 3f64.sqrt()));
    match regime_check(&q) {
        Regime::VertexSeparating { apex, .. } => assert_eq!(cube.vertex::<f64>(apex), vec![0.5; 3]),
        other => panic!("{other:?}"),
    }

    let x = Body::cross_polytope(3);
    let q = SectionQuery::from_raw(x, &[1.0, 0.0, 0.0], 0.5).unwrap();
    match regime_check(&q) {
        Regime::VertexSeparating { apex, .. } => assert_eq!(x.vertex::<f64>(apex), vec![1.0, 0.0, 0.0]),
        other => panic!("{other:?}"),
    }

    let q = SectionQuery::from_raw(cube, &[1.0, 0.0, 0.0], 0.0).unwrap();
    assert_eq!(regime_check(&q), Regime::General);
    let q = SectionQuery::from_raw(cube, &[1.0, 0.0, 0.0], 0.6).unwrap();
    assert_eq!(regime_check(&q), Regime::Empty);
    // a tie with the apex is not separating
    let q = SectionQuery::from_raw(x, &[1.0, 0.0, 0.0], 1.0).unwrap();
    assert!(!regime_check(&q).is_separating());
}

#[test]
fn threshold_table() {
    let th = Body::simplex(3).thresholds::<f64>();
    assert_abs_diff_eq!(th.edge_midpoint, 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(th.volume_flip, 7.0 * 3f64.sqrt() / 30.0, epsilon = 1e-15);

    let th = Body::cross_polytope(4).thresholds::<f64>();
    assert_abs_diff_eq!(th.cross_min_phi.unwrap(), 5.0 * 10f64.sqrt() / 32.0, epsilon = 1e-15);

    let th = Body::cube(3).thresholds::<f64>();
    let three = th.cube_three.unwrap();
    assert_abs_diff_eq!(three.t0, 0.7248, epsilon = 1e-4);
    assert_abs_diff_eq!(three.perimeter_flip, 11.0 * 3f64.sqrt() / 30.0, epsilon = 1e-15);

    for n in 3..=12 {
        let nf = n as f64;
        let s = Body::simplex(n).thresholds::<f64>();
        assert!(s.volume_flip < s.edge_midpoint, "c({n}) < d({n})");
        let c = Body::cube(n).thresholds::<f64>();
        if n >= 6 {
            assert!(c.perimeter_flip.unwrap() <= c.cube_regime_floor.unwrap());
        }
        assert_abs_diff_eq!(c.volume_flip, (nf + 1.0) / (4.0 * nf.sqrt()), epsilon = 1e-15);
    }
}

// Minimum of Φ(n, n-1, ·) over (1/√n, 1], located by brute force.
fn phi_min(n: usize) -> f64 {
    let (nf, m) = (n as f64, (n - 1) as f64);
    let phi = |a: f64| ((m + 1.0) * a * a + 2.0 * m - 1.0) * a / ((m + 1.0) * nf * a * a + 2.0 * m - nf);
    let lo = 1.0 / nf.sqrt();
    let k = 200_000;
    (1..=k).map(|i| phi(lo + (1.0 - lo) * i as f64 / k as f64)).fold(f64::INFINITY, f64::min)
}

#[test]
fn cross_polytope_phi_minimum_matches_table() {
    for n in 3..=8 {
        let table = Body::cross_polytope(n).thresholds::<f64>().cross_min_phi.unwrap();
        assert_abs_diff_eq!(table, phi_min(n), epsilon = 1e-9);
    }
}

#[test]
fn face_counts() {
    assert_eq!(face_lattice(Body::cube(3), 2).unwrap().len(), 6);
    assert_eq!(face_lattice(Body::cross_polytope(3), 2).unwrap().len(), 8);
    assert_eq!(face_lattice(Body::simplex(3), 1).unwrap().len(), 6);
    for n in 2..=6 {
        for k in 0..n {
            assert_eq!(face_lattice(Body::simplex(n), k).unwrap().len(), binom(n + 1, k + 1));
            assert_eq!(face_lattice(Body::cube(n), k).unwrap().len(), binom(n, k) << (n - k));
            assert_eq!(face_lattice(Body::cross_polytope(n), k).unwrap().len(), binom(n, k + 1) << (k + 1));
        }
    }
    assert!(matches!(face_lattice(Body::cube(3), 3), Err(SliceError::DimensionOutOfRange { dim: 3, max: 2 })));
}

#[test]
fn face_children_are_faces() {
    for body in [Body::simplex(4), Body::cross_polytope(4), Body::cube(4)] {
        for k in 1..body.n {
            let lower: Vec<FaceDescriptor> = face_lattice(body, k - 1).unwrap();
            for f in face_lattice(body, k).unwrap() {
                let verts = f.vertex_ids(body);
                for c in f.children() {
                    assert!(lower.contains(&c));
                    assert!(c.vertex_ids(body).iter().all(|v| verts.contains(v)));
                }
            }
        }
    }
}

#[test]
fn sampling_is_seeded_and_centred() {
    let cube = Body::cube(5);
    let a = sample_direction::<f64, _>(cube, &mut ChaCha8Rng::seed_from_u64(7));
    let b = sample_direction::<f64, _>(cube, &mut ChaCha8Rng::seed_from_u64(7));
    assert_eq!(a, b);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let d = sample_direction::<f64, _>(Body::simplex(4), &mut rng);
    assert_abs_diff_eq!(d.coords().iter().sum::<f64>(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(d.coords().iter().map(|x| x * x).sum::<f64>(), 1.0, epsilon = 1e-12);

    let k = 10_000;
    let mut mean = [0.0; 3];
    for _ in 0..k {
        let d = sample_direction::<f64, _>(Body::cube(3), &mut rng);
        mean.iter_mut().zip(d.coords()).for_each(|(m, x)| *m += x / k as f64);
    }
    assert!(mean.iter().all(|m| m.abs() < 4.0 / (k as f64).sqrt()));
}

#[test]
fn single_precision_directions() {
    let d = make_direction(&[1.0f32, 2.0, 2.0], Body::cube(3)).unwrap();
    assert!((d.coords()[0] - 1.0 / 3.0).abs() < 1e-6);
}

proptest! {
    #[test]
    fn separating_regime_holds_against_every_vertex(
        kind in prop::sample::select(vec![BodyKind::Simplex, BodyKind::CrossPolytope, BodyKind::Cube]),
        n in 2usize..=8,
        seed in any::<u64>(),
        s in 0.0f64..1.0,
    ) {
        let body = Body::new(kind, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample_direction::<f64, _>(body, &mut rng);
        let dots: Vec<f64> = (0..body.vertex_count()).map(|v| body.vertex_dot(a.coords(), v)).collect();
        let (lo, hi) = dots.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
        let t = lo + (hi - lo) * s;
        let q = SectionQuery::new(body, a, t).unwrap();
        if let Regime::VertexSeparating { apex, .. } = regime_check(&q) {
            prop_assert!(dots[apex] > t);
            for (v, &d) in dots.iter().enumerate() {
                if v != apex {
                    prop_assert!(d <= t);
                }
            }
        }
    }

    #[test]
    fn directions_are_unit(
        kind in prop::sample::select(vec![BodyKind::Simplex, BodyKind::CrossPolytope, BodyKind::Cube]),
        n in 2usize..=9,
        seed in any::<u64>(),
    ) {
        let body = Body::new(kind, n).unwrap();
        let d = sample_direction::<f64, _>(body, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!((d.coords().iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        if kind == BodyKind::Simplex {
            prop_assert!(d.coords().iter().sum::<f64>().abs() < 1e-12);
        }
    }
}
