use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swopt_core::{x_norm, Partition, PiecewiseControl};
use swopt_optimality::{
    solve_theta, AffineFunctional, Branch, FunctionalTag, OptimalityError, Subproblem,
};
use swopt_sim::GradientRow;

const TOL: f64 = 1e-8;

fn row(u_per_interval: Vec<Vec<f64>>, d_per_interval: Vec<Vec<f64>>) -> GradientRow {
    GradientRow {
        u_coeffs: u_per_interval.into_iter().map(DVector::from_vec).collect(),
        d_coeffs: d_per_interval.into_iter().map(DVector::from_vec).collect(),
    }
}

fn single_interval_base(u: f64, d1: f64) -> PiecewiseControl {
    let p = Partition::new(vec![0.0, 1.0], 0).unwrap();
    PiecewiseControl::relaxed(
        p,
        vec![DVector::from_vec(vec![u])],
        vec![DVector::from_vec(vec![d1, 1.0 - d1])],
    )
    .unwrap()
}

fn two_interval_base(d1: [f64; 2]) -> PiecewiseControl {
    let p = Partition::new(vec![0.0, 0.5, 1.0], 1).unwrap();
    PiecewiseControl::relaxed(
        p,
        vec![DVector::zeros(0); 2],
        d1.iter()
            .map(|&v| DVector::from_vec(vec![v, 1.0 - v]))
            .collect(),
    )
    .unwrap()
}

#[test]
fn zero_coefficients_leave_the_base_point_fixed() {
    let base = single_interval_base(0.3, 0.6);
    let cost = AffineFunctional {
        row: row(vec![vec![0.0]], vec![vec![0.0, 0.0]]),
        offset: 0.0,
        tag: FunctionalTag::Cost,
    };
    let sp = Subproblem::new(base.clone(), vec![cost], Branch::Feasible, 1.0, vec![(-1.0, 1.0)], 2);
    let report = solve_theta(&sp, TOL).unwrap();
    assert_eq!(report.theta, 0.0);
    assert_eq!(report.step_norm, 0.0);
    assert_eq!(report.direction.u_values(), base.u_values());
    assert_eq!(report.direction.d_values(), base.d_values());
    assert_eq!(report.active, vec![FunctionalTag::Cost]);
}

/// ζ on a single unit-length interval with m = 1, q = 2, evaluated
/// directly from its definition.
fn zeta_single(
    functionals: &[(f64, [f64; 2], f64)],
    base_u: f64,
    base_d: f64,
    u: f64,
    d1: f64,
) -> f64 {
    let du = u - base_u;
    let dd = [d1 - base_d, (1.0 - d1) - (1.0 - base_d)];
    let max_term = functionals
        .iter()
        .map(|(cu, cd, off)| cu * du + cd[0] * dd[0] + cd[1] * dd[1] + off)
        .fold(f64::NEG_INFINITY, f64::max);
    max_term + du.abs() + (dd[0] * dd[0] + dd[1] * dd[1]).sqrt()
}

#[test]
fn grid_oracle_brackets_theta_on_one_interval() {
    let base_u = 0.3;
    let base_d = 0.6;
    let base = single_interval_base(base_u, base_d);
    let funcs = [(-0.8, [0.2, -0.5], 0.0)];
    let cost = AffineFunctional {
        row: row(vec![vec![-0.8]], vec![vec![0.2, -0.5]]),
        offset: 0.0,
        tag: FunctionalTag::Cost,
    };
    let sp = Subproblem::new(base, vec![cost], Branch::Feasible, 1.0, vec![(-1.0, 1.0)], 2);
    let report = solve_theta(&sp, TOL).unwrap();

    let mut grid_min = f64::INFINITY;
    for iu in 0..=2000 {
        let u = -1.0 + iu as f64 * 1e-3;
        for id in 0..=1000 {
            let d1 = id as f64 * 1e-3;
            grid_min = grid_min.min(zeta_single(&funcs, base_u, base_d, u, d1));
        }
    }
    assert!(report.theta <= 1e-9);
    assert!(
        (report.theta - grid_min).abs() <= 2e-3,
        "solver {} vs grid {}",
        report.theta,
        grid_min
    );
}

#[test]
fn grid_oracle_brackets_theta_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for case in 0..25 {
        if case % 2 == 0 {
            // one interval, one continuous input, two modes
            let base_u = rng.gen_range(-0.5..0.5);
            let base_d = rng.gen_range(0.0..1.0);
            let n_funcs = rng.gen_range(1..=2);
            let infeasible = rng.gen_bool(0.3);
            let psi = if infeasible {
                rng.gen_range(0.01..0.5)
            } else {
                -rng.gen_range(0.0..0.5)
            };
            let mut funcs: Vec<(f64, [f64; 2], f64)> = Vec::new();
            let mut affine = Vec::new();
            for i in 0..n_funcs {
                let cu = rng.gen_range(-1.0..1.0);
                let cd = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                let (offset, tag) = if i == 0 {
                    (
                        if infeasible { -psi } else { 0.0 },
                        FunctionalTag::Cost,
                    )
                } else {
                    (
                        if infeasible { 0.0 } else { 2.0 * psi },
                        FunctionalTag::Constraint { j: 0, k: i },
                    )
                };
                funcs.push((cu, cd, offset));
                affine.push(AffineFunctional {
                    row: row(vec![vec![cu]], vec![vec![cd[0], cd[1]]]),
                    offset,
                    tag,
                });
            }
            let base = single_interval_base(base_u, base_d);
            let branch = if infeasible { Branch::Infeasible } else { Branch::Feasible };
            let sp = Subproblem::new(base, affine, branch, 2.0, vec![(-1.0, 1.0)], 2);
            let report = solve_theta(&sp, TOL).unwrap();

            let mut grid_min = f64::INFINITY;
            for iu in 0..=2000 {
                let u = -1.0 + iu as f64 * 1e-3;
                for id in 0..=1000 {
                    let d1 = id as f64 * 1e-3;
                    grid_min = grid_min.min(zeta_single(&funcs, base_u, base_d, u, d1));
                }
            }
            assert!(
                (report.theta - grid_min).abs() <= 2e-3,
                "case {case}: solver {} vs grid {}",
                report.theta,
                grid_min
            );
        } else {
            // two intervals, no continuous input, two modes
            let base_d = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
            let cd: Vec<[f64; 2]> = (0..2)
                .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect();
            let base = two_interval_base(base_d);
            let cost = AffineFunctional {
                row: row(
                    vec![vec![], vec![]],
                    vec![vec![cd[0][0], cd[0][1]], vec![cd[1][0], cd[1][1]]],
                ),
                offset: 0.0,
                tag: FunctionalTag::Cost,
            };
            let sp = Subproblem::new(base, vec![cost], Branch::Feasible, 1.0, vec![], 2);
            let report = solve_theta(&sp, TOL).unwrap();

            let zeta = |d1a: f64, d1b: f64| {
                let da = [d1a - base_d[0], -(d1a - base_d[0])];
                let db = [d1b - base_d[1], -(d1b - base_d[1])];
                let lin = cd[0][0] * da[0] + cd[0][1] * da[1] + cd[1][0] * db[0] + cd[1][1] * db[1];
                let norm = (0.5 * (da[0] * da[0] + da[1] * da[1])
                    + 0.5 * (db[0] * db[0] + db[1] * db[1]))
                    .sqrt();
                lin + norm
            };
            let mut grid_min = f64::INFINITY;
            for ia in 0..=1000 {
                for ib in 0..=1000 {
                    grid_min = grid_min.min(zeta(ia as f64 * 1e-3, ib as f64 * 1e-3));
                }
            }
            assert!(
                (report.theta - grid_min).abs() <= 2e-3,
                "case {case}: solver {} vs grid {}",
                report.theta,
                grid_min
            );
        }
    }
}

fn random_subproblem<R: Rng>(rng: &mut R) -> Subproblem {
    let m = rng.gen_range(0..=2usize);
    let q = rng.gen_range(1..=3usize);
    let intervals = rng.gen_range(1..=6usize);
    // zero lengths are kept so zero-length intervals are exercised
    let mut lens: Vec<f64> = (0..intervals)
        .map(|_| {
            if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(0.01..0.4)
            }
        })
        .collect();
    if lens.iter().sum::<f64>() == 0.0 {
        lens[0] = 1.0;
    }
    let total: f64 = lens.iter().sum();
    let mut samples = vec![0.0];
    let mut run = 0.0;
    for l in &lens {
        run += l / total;
        samples.push(run);
    }
    *samples.last_mut().unwrap() = 1.0;
    let p = Partition::new(samples, 0).unwrap();
    let u_vals: Vec<DVector<f64>> = (0..intervals)
        .map(|_| DVector::from_fn(m, |_, _| rng.gen_range(-1.0..1.0)))
        .collect();
    let d_vals: Vec<DVector<f64>> = (0..intervals)
        .map(|_| {
            let raw = DVector::from_fn(q, |_, _| rng.gen_range(0.0..1.0f64));
            let sum: f64 = raw.iter().sum();
            raw / sum
        })
        .collect();
    let base = PiecewiseControl::relaxed(p, u_vals, d_vals).unwrap();

    let infeasible = rng.gen_bool(0.4);
    let psi = if infeasible {
        rng.gen_range(0.01..1.0)
    } else {
        -rng.gen_range(0.0..1.0)
    };
    let n_funcs = rng.gen_range(1..=5);
    let functionals = (0..n_funcs)
        .map(|i| {
            let u_coeffs = (0..intervals)
                .map(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let d_coeffs = (0..intervals)
                .map(|_| (0..q).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let (offset, tag) = if i == 0 {
                (if infeasible { -psi } else { 0.0 }, FunctionalTag::Cost)
            } else {
                (
                    if infeasible { 0.0 } else { 3.0 * psi },
                    FunctionalTag::Constraint { j: 0, k: i },
                )
            };
            AffineFunctional {
                row: row(u_coeffs, d_coeffs),
                offset,
                tag,
            }
        })
        .collect();
    let branch = if infeasible { Branch::Infeasible } else { Branch::Feasible };
    Subproblem::new(
        base,
        functionals,
        branch,
        3.0,
        (0..m).map(|_| (-1.5, 1.5)).collect(),
        q,
    )
}

#[test]
fn theta_is_never_positive_and_directions_stay_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    for case in 0..40 {
        let sp = random_subproblem(&mut rng);
        let report = solve_theta(&sp, TOL).unwrap();
        assert!(report.theta <= 1e-9, "case {case}: θ = {}", report.theta);
        assert!(report.theta <= sp.zeta(sp.base()).unwrap() + 1e-9);

        let dir = sp.base().direction_to(&report.direction).unwrap();
        assert!((report.step_norm - x_norm(&dir)).abs() <= 1e-12);
        let achieved = sp.zeta_direction(&dir);
        assert!(
            (achieved - report.theta).abs() <= 1e-9,
            "case {case}: reported {} vs achieved {achieved}",
            report.theta
        );
        assert!(!report.active.is_empty());
    }
}

#[test]
fn rescaled_functionals_keep_theta_non_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    for _ in 0..10 {
        let sp = random_subproblem(&mut rng);
        let scale = rng.gen_range(0.05..20.0);
        let scaled_funcs = sp
            .functionals()
            .iter()
            .map(|f| {
                let mut r = f.row.clone();
                for c in &mut r.u_coeffs {
                    *c *= scale;
                }
                for c in &mut r.d_coeffs {
                    *c *= scale;
                }
                AffineFunctional {
                    row: r,
                    offset: scale * f.offset,
                    tag: f.tag,
                }
            })
            .collect();
        let scaled = Subproblem::new(
            sp.base().clone(),
            scaled_funcs,
            sp.branch(),
            sp.gamma(),
            sp.input_box().to_vec(),
            sp.simplex_dim(),
        );
        let report = solve_theta(&scaled, TOL).unwrap();
        assert!(report.theta <= 1e-9);
    }
}

#[test]
fn impossible_tolerance_reports_a_stall() {
    let base = single_interval_base(0.3, 0.6);
    let cost = AffineFunctional {
        row: row(vec![vec![-0.8]], vec![vec![0.2, -0.5]]),
        offset: 0.0,
        tag: FunctionalTag::Cost,
    };
    let sp = Subproblem::new(base, vec![cost], Branch::Feasible, 1.0, vec![(-1.0, 1.0)], 2);
    // a negative tolerance can never be met, so the iteration cap must fire
    match solve_theta(&sp, -1.0) {
        Err(OptimalityError::SolverStall { residual, iters }) => {
            assert!(residual >= 0.0);
            assert!(iters >= 5000);
        }
        other => panic!("expected a stall, got {other:?}"),
    }
}
