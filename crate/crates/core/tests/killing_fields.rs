use ebcv::killing::{
    basis_rank, killing_basis_m0, killing_residual, max_abs_matrix, pde_killing_gap, pde_residuals_with, random_field,
    BracketField, PdeVariant, PolyVectorField,
};
use ebcv::sampling::{self, sample_points};
use ebcv::{CoordPoint, Error, ModelParams};

/// Lie derivative of the metric by central differences of the pulled-back
/// metric along the flow: `(L_X g)_{ij} = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k`,
/// returned in the frame.
fn lie_derivative_fd(field: &PolyVectorField, q: &CoordPoint, p: &ModelParams) -> [[f64; 7]; 7] {
    use ebcv::manifold::{frame_matrix, metric_matrix};
    let h = 1e-5;
    let c = q.to_array();
    let coord_field = |x: [f64; 7]| -> [f64; 7] {
        let pt = CoordPoint::from_array(x);
        let f = frame_matrix(&pt, p).unwrap();
        let coeffs = field.eval(&pt);
        std::array::from_fn(|mu| (0..7).map(|a| f[(mu, a)] * coeffs[a]).sum())
    };
    let shifted = |k: usize, s: f64| -> [f64; 7] {
        let mut x = c;
        x[k] += s;
        x
    };
    let v = coord_field(c);
    let g = metric_matrix(q, p).unwrap();
    let mut lie = [[0.0; 7]; 7];
    for k in 0..7 {
        let gp = metric_matrix(&CoordPoint::from_array(shifted(k, h)), p).unwrap();
        let gm = metric_matrix(&CoordPoint::from_array(shifted(k, -h)), p).unwrap();
        let vp = coord_field(shifted(k, h));
        let vm = coord_field(shifted(k, -h));
        for i in 0..7 {
            for j in 0..7 {
                lie[i][j] += v[k] * (gp[(i, j)] - gm[(i, j)]) / (2.0 * h);
            }
        }
        // d_k X^n
        for n in 0..7 {
            let dv = (vp[n] - vm[n]) / (2.0 * h);
            for j in 0..7 {
                lie[k][j] += g[(n, j)] * dv;
                lie[j][k] += g[(j, n)] * dv;
            }
        }
    }
    let f = frame_matrix(q, p).unwrap();
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut s = 0.0;
            for i in 0..7 {
                for j in 0..7 {
                    s += f[(i, a)] * lie[i][j] * f[(j, b)];
                }
            }
            s
        })
    })
}

#[test]
fn killing_residual_is_the_lie_derivative_of_the_metric() {
    let mut rng = sampling::rng(3);
    for (m, l) in [(0.0, 1.0), (0.6, -1.1), (-0.4, 2.0)] {
        let p = ModelParams::new(m, l);
        for q in sample_points(&p, 3, 4).unwrap() {
            let field = random_field(&mut rng);
            let k = killing_residual(&field, &q, &p).unwrap();
            let lie = lie_derivative_fd(&field, &q, &p);
            for a in 0..7 {
                for b in 0..7 {
                    let scale = 1.0 + lie[a][b].abs();
                    assert!(
                        (k[a][b] - lie[a][b]).abs() < 1e-5 * scale && (k[a][b] - k[b][a]).abs() < 1e-12,
                        "({m},{l}) entry ({a},{b}): {} vs {}",
                        k[a][b],
                        lie[a][b]
                    );
                }
            }
        }
    }
}

#[test]
fn corrected_pde_system_tracks_the_killing_residual() {
    let mut rng = sampling::rng(11);
    for (m, l) in [(0.0, 1.0), (1.0, 1.0), (-0.5, 2.0), (0.3, -0.8)] {
        let p = ModelParams::new(m, l);
        for q in sample_points(&p, 5, 12).unwrap() {
            let field = random_field(&mut rng);
            assert!(pde_killing_gap(&field, &q, &p, PdeVariant::Corrected).unwrap() < 1e-10);
        }
    }
}

#[test]
fn m0_basis_is_killing_for_several_twists() {
    for l in [1.0, -0.6, 2.5] {
        let p = ModelParams::new(0.0, l);
        let pts = sample_points(&p, 40, 9).unwrap();
        let basis = killing_basis_m0(l);
        assert_eq!(basis.len(), 13);
        for f in &basis {
            for q in &pts {
                assert!(max_abs_matrix(&killing_residual(f, q, &p).unwrap()) < 1e-12);
                let pde = pde_residuals_with(f, q, &p, PdeVariant::PrintedM0).unwrap();
                assert!(pde.iter().all(|v| v.abs() < 1e-12));
            }
        }
        assert_eq!(basis_rank(&basis, &pts).unwrap().rank, 13);
    }
}

#[test]
fn brackets_of_killing_fields_are_killing() {
    let p = ModelParams::new(0.0, 1.3);
    let basis = killing_basis_m0(p.l);
    let q = CoordPoint::from_array([0.1, 0.2, -0.3, 0.25, -0.15, 0.05, 0.3]);
    for i in [0, 4, 9, 12] {
        for j in [1, 6, 10] {
            let b = BracketField { u: &basis[i], v: &basis[j] };
            assert!(max_abs_matrix(&killing_residual(&b, &q, &p).unwrap()) < 1e-10, "[{i},{j}]");
        }
    }
}

#[test]
fn horizontal_frame_fields_are_not_killing_when_twisted() {
    let p = ModelParams::new(0.0, 1.0);
    for label in 4..=7 {
        let r = max_abs_matrix(&killing_residual(&PolyVectorField::frame(label), &CoordPoint::ORIGIN, &p).unwrap());
        assert!(r >= 1.0 - 1e-12, "X{label}: {r}");
    }
    let flat = ModelParams::new(0.0, 0.0);
    for label in 4..=7 {
        let r = max_abs_matrix(&killing_residual(&PolyVectorField::frame(label), &CoordPoint::ORIGIN, &flat).unwrap());
        assert_eq!(r, 0.0);
    }
}

#[test]
fn rank_needs_enough_points() {
    let basis = killing_basis_m0(1.0);
    match basis_rank(&basis, &[CoordPoint::ORIGIN]) {
        Err(Error::InsufficientSamples { rows: 7, fields: 13, .. }) => {}
        other => panic!("{other:?}"),
    }
}
