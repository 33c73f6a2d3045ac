use ebcv::homogeneous::{char_connection_tables, metric_compatibility_residual, Torsion3};
use ebcv::manifold::{
    bracket_frame, coframe_matrix, connection_table, frame_matrix, metric_matrix, ricci_frame, riemann_frame,
    riemann_frame_cartan, scalar_curvature, structure_constants_table,
};
use ebcv::{CoordPoint, Error, ModelParams};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = CoordPoint> {
    proptest::array::uniform7(-0.5f64..0.5).prop_map(CoordPoint::from_array)
}

/// Parameters for which the whole box `[-0.5, 0.5]^7` lies in the chart.
fn params() -> impl Strategy<Value = ModelParams> {
    (-0.9f64..2.0, -2.0f64..2.0).prop_map(|(m, l)| ModelParams::new(m, l))
}

/// `[X_a, X_b]` in the frame by central differences of the coordinate frame.
fn bracket_fd(a: usize, b: usize, q: &CoordPoint, p: &ModelParams) -> [f64; 7] {
    let h = 1e-5;
    let col = |c: [f64; 7], i: usize| -> [f64; 7] {
        let f = frame_matrix(&CoordPoint::from_array(c), p).unwrap();
        std::array::from_fn(|mu| f[(mu, i)])
    };
    let c = q.to_array();
    let along = |i: usize, v: [f64; 7]| -> [f64; 7] {
        let fp = col(std::array::from_fn(|k| c[k] + h * v[k]), i);
        let fm = col(std::array::from_fn(|k| c[k] - h * v[k]), i);
        std::array::from_fn(|k| (fp[k] - fm[k]) / (2.0 * h))
    };
    let (xa, xb) = (col(c, a - 1), col(c, b - 1));
    let (db, da) = (along(b - 1, xa), along(a - 1, xb));
    let o = coframe_matrix(q, p).unwrap();
    std::array::from_fn(|alpha| (0..7).map(|mu| o[(alpha, mu)] * (db[mu] - da[mu])).sum())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frame_is_orthonormal_and_dual_to_coframe(q in point(), p in params()) {
        let f = frame_matrix(&q, &p).unwrap();
        let g = metric_matrix(&q, &p).unwrap();
        let o = coframe_matrix(&q, &p).unwrap();
        let gram = f.transpose() * g * f;
        let dual = o * f;
        for a in 0..7 {
            for b in 0..7 {
                let id = if a == b { 1.0 } else { 0.0 };
                prop_assert!((gram[(a, b)] - id).abs() < 1e-12);
                prop_assert!((dual[(a, b)] - id).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn brackets_match_finite_differences(q in point(), p in params(), a in 1usize..=7, b in 1usize..=7) {
        let exact = bracket_frame(a, b, &q, &p).unwrap();
        let fd = bracket_fd(a, b, &q, &p);
        for c in 0..7 {
            prop_assert!((exact[c] - fd[c]).abs() < 1e-6, "[X{a},X{b}] c={c}: {} vs {}", exact[c], fd[c]);
        }
    }

    #[test]
    fn levi_civita_is_metric_and_torsion_free(q in point(), p in params()) {
        let g = connection_table(&q, &p).unwrap();
        let c = structure_constants_table(&q, &p).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                for k in 0..7 {
                    prop_assert!((g[[a, b, k]] + g[[a, k, b]]).abs() < 1e-12);
                    prop_assert!((g[[a, b, k]] - g[[b, a, k]] - c[[a, b, k]]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn curvature_symmetries_and_two_routes(q in point(), p in params()) {
        let r = riemann_frame(&q, &p).unwrap();
        let rc = riemann_frame_cartan(&q, &p).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                for c in 0..7 {
                    for d in 0..7 {
                        let v = r[[a, b, c, d]];
                        prop_assert!((v - rc[[a, b, c, d]]).abs() < 1e-8);
                        prop_assert!((v + r[[b, a, c, d]]).abs() < 1e-9);
                        prop_assert!((v - r[[c, d, a, b]]).abs() < 1e-9);
                        let bianchi = v + r[[a, c, d, b]] + r[[a, d, b, c]];
                        prop_assert!(bianchi.abs() < 1e-9);
                    }
                }
            }
        }
        let ric = ricci_frame(&q, &p).unwrap();
        prop_assert!((ric - ric.transpose()).amax() < 1e-9);
    }

    #[test]
    fn scalar_curvature_closed_form(q in point(), p in params()) {
        let k = 1.0 + p.m * q.horizontal_norm2();
        let expected = 48.0 * p.m - 1.5 * p.l * p.l * (1.0 + k * k);
        prop_assert!((scalar_curvature(&q, &p).unwrap() - expected).abs() < 1e-8);
    }

    #[test]
    fn characteristic_connection_is_metric_with_skew_torsion_trace(q in point(), p in params()) {
        prop_assert!(metric_compatibility_residual(&q, &p).unwrap() < 1e-12);
        let t = Torsion3::at(&q, &p).unwrap();
        let via_p = Torsion3::at_via_p(&q, &p).unwrap();
        prop_assert_eq!(t.first_pair_symmetric_part(), 0.0);
        prop_assert!(t.c12().iter().all(|v| v.abs() < 1e-12));
        for (x, y) in t.0.as_slice().iter().zip(via_p.0.as_slice()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let (d, _) = char_connection_tables(&q, &p).unwrap();
        // D preserves both distributions
        for a in 0..7 {
            for b in 0..7 {
                for c in 0..7 {
                    if (b < 3) != (c < 3) {
                        prop_assert!(d[[a, b, c]].abs() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn flat_space_has_no_curvature() {
    let p = ModelParams::new(0.0, 0.0);
    let q = CoordPoint::from_array([0.3, -0.2, 0.1, 0.4, -0.1, 0.25, 0.05]);
    assert!(riemann_frame(&q, &p).unwrap().as_slice().iter().all(|v| *v == 0.0));
}

#[test]
fn outside_the_chart_is_a_domain_violation() {
    let p = ModelParams::new(-1.0, 1.0);
    let q = CoordPoint::from_array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    assert!(matches!(frame_matrix(&q, &p), Err(Error::DomainViolation { .. })));
    assert!(matches!(ricci_frame(&q, &p), Err(Error::DomainViolation { .. })));
}
