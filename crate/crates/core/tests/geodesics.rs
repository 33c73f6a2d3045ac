use ebcv::geodesic::{
    circle_check, closed_form_geodesic, hamilton_rhs, hamiltonian, integrate, momenta, poisson_check, unit_speed,
    CircleVerdict, ClosedFormInput, CotangentState, GeodesicMode, Quaternion,
};
use ebcv::sampling::{self, sample_points};
use ebcv::{CoordPoint, Error, ModelParams};
use proptest::prelude::*;
use rand::Rng;

const HZ: ModelParams = ModelParams::HEISENBERG;

fn state() -> impl Strategy<Value = CotangentState> {
    (proptest::array::uniform7(-0.5f64..0.5), proptest::array::uniform7(-1.0f64..1.0))
        .prop_map(|(q, p)| CotangentState::new(CoordPoint::from_array(q), p))
}

/// Hamilton's equations by central differences of H.
fn rhs_fd(s: &CotangentState, p: &ModelParams, mode: GeodesicMode) -> [f64; 14] {
    let h = 1e-6;
    let x = s.to_array();
    let partial = |i: usize| {
        let mut a = x;
        let mut b = x;
        a[i] += h;
        b[i] -= h;
        let ha = hamiltonian(&CotangentState::from_array(a), p, mode).unwrap();
        let hb = hamiltonian(&CotangentState::from_array(b), p, mode).unwrap();
        (ha - hb) / (2.0 * h)
    };
    std::array::from_fn(|i| if i < 7 { partial(i + 7) } else { -partial(i - 7) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn flow_is_hamiltonian(s in state(), m in -0.9f64..1.5, l in -2.0f64..2.0) {
        let p = ModelParams::new(m, l);
        for mode in [GeodesicMode::Subriemannian, GeodesicMode::Riemannian] {
            let exact = hamilton_rhs(&s, &p, mode).unwrap();
            let fd = rhs_fd(&s, &p, mode);
            for i in 0..14 {
                prop_assert!((exact[i] - fd[i]).abs() < 1e-6 * (1.0 + fd[i].abs()), "{:?} slot {}", mode, i);
            }
        }
    }

    #[test]
    fn unit_speed_normalises(s in state(), m in -0.9f64..1.5, l in -2.0f64..2.0) {
        let p = ModelParams::new(m, l);
        prop_assume!(momenta(&s, &p)[3..].iter().any(|v| v.abs() > 1e-3));
        let u = unit_speed(&s, &p, GeodesicMode::Subriemannian).unwrap();
        prop_assert!((hamiltonian(&u, &p, GeodesicMode::Subriemannian).unwrap() - 0.5).abs() < 1e-13);
        prop_assert_eq!(u.q, s.q);
    }

    #[test]
    fn poisson_brackets_of_momenta(s in state()) {
        for e in poisson_check(&s).unwrap() {
            prop_assert!(e.residual < 1e-12, "{:?}", e.pair);
        }
    }
}

#[test]
fn rk4_converges_to_the_closed_form_at_fourth_order() {
    let mut rng = sampling::rng(21);
    for q in sample_points(&HZ, 4, 22).unwrap() {
        let s = CotangentState::new(q, std::array::from_fn(|_| rng.random_range(-1.0..=1.0)));
        let s = unit_speed(&s, &HZ, GeodesicMode::Heisenberg).unwrap();
        let exact = closed_form_geodesic(&ClosedFormInput::from_state(&s), 1.0).unwrap().to_array();
        let err = |h: f64| {
            let t = integrate(&s, &HZ, GeodesicMode::Heisenberg, h, (1.0 / h).round() as usize).unwrap();
            t.last().state.q.to_array().iter().zip(exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(1e-2), err(5e-3));
        assert!((12.0..=20.0).contains(&(e1 / e2)), "ratio {}", e1 / e2);
    }
}

#[test]
fn horizontal_projection_is_a_circle_of_the_predicted_radius() {
    // P(0) = 2 (pure w-direction), Lambda = 0.5 j: radius |P| / |Lambda| = 4
    let s = CotangentState::new(CoordPoint::ORIGIN, [0.0, 0.5, 0.0, 2.0, 0.0, 0.0, 0.0]);
    let t = integrate(&s, &HZ, GeodesicMode::Heisenberg, 1e-3, 4000).unwrap();
    match circle_check(&t).unwrap() {
        CircleVerdict::Circle { radius, lambda, .. } => {
            assert!((radius / 4.0 - 1.0).abs() < 1e-4, "{radius}");
            assert!((lambda[1] - 0.5).abs() < 1e-4);
        }
        other => panic!("{other:?}"),
    }
    let drift = t.energy_drift();
    assert!(drift < 1e-10, "{drift}");
}

#[test]
fn closed_form_velocity_is_rotated_momentum() {
    let input = ClosedFormInput {
        omega0: Quaternion::new(0.1, 0.2, -0.1, 0.0),
        p0: Quaternion::new(0.3, -0.4, 0.5, 0.2),
        lambda: [0.2, -0.7, 0.4],
        vertical0: [0.0; 3],
    };
    for u in [0.0, 0.5, 2.0] {
        let (_, v) = input.horizontal_with_velocity(u);
        // |omega'| is constant because exp(-Lambda u) is a unit quaternion
        assert!((v.norm() - input.p0.norm()).abs() < 1e-14);
    }
}

#[test]
fn modes_reject_mismatched_parameters() {
    let s = CotangentState::new(CoordPoint::ORIGIN, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    let err = integrate(&s, &ModelParams::new(0.5, 1.0), GeodesicMode::Heisenberg, 1e-2, 10).unwrap_err();
    assert!(matches!(err, Error::ModeMismatch { .. }), "{err:?}");
}

#[test]
fn leaving_the_chart_returns_the_partial_trajectory() {
    let p = ModelParams::new(-1.0, 0.0);
    let s = CotangentState::new(CoordPoint::ORIGIN, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    match integrate(&s, &p, GeodesicMode::Riemannian, 0.7, 50) {
        Err(Error::DomainExit { step, partial }) => {
            assert_eq!(partial.samples.len(), step);
            assert!(partial.samples.iter().all(|smp| 1.0 - smp.state.q.horizontal_norm2() > 0.0));
        }
        other => panic!("{other:?}"),
    }
}
