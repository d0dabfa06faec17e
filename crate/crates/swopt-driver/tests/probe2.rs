use swopt_bench::{by_name, pure_init};
use swopt_core::Partition;
use swopt_optimality::{build_subproblem, solve_theta};

use swopt_search::{armijo_step, frequency_search, FrequencyOutcome};
use swopt_sim::{constraint_eval, cost, functional_gradients, integrate, transition_stack};

#[test]
fn probe_lqr_direction() {
    let (model, spec) = by_name("lqr").unwrap();
    let xi = pure_init(model.as_ref(), &spec).unwrap();
    let traj = integrate(model.as_ref(), &xi).unwrap();
    println!("J0 = {}", cost(model.as_ref(), &traj));
    let stack = transition_stack(model.as_ref(), &xi, &traj);
    let grads = functional_gradients(model.as_ref(), &xi, &traj, &stack);
    let sub = build_subproblem(model.as_ref(), &xi, &grads, spec.params.gamma);
    let report = solve_theta(&sub, spec.params.subproblem_tol).unwrap();
    println!(
        "theta = {:+.4e}, step_norm = {:.4e}, iters = {}, residual = {:.2e}",
        report.theta, report.step_norm, report.solver_iters, report.residual
    );
    let dir = &report.direction;
    let umax = dir
        .u_values()
        .iter()
        .map(|u| u[0].abs())
        .fold(0.0f64, f64::max);
    println!("direction max |u'| = {umax}");
    let mut moved = 0;
    for (a, b) in dir.d_values().iter().zip(xi.d_values()) {
        if (a - b).amax() > 1e-9 {
            moved += 1;
        }
    }
    println!("d rows moved: {moved}/{}", xi.d_values().len());
    for k in [0u32, 5, 10, 15, 20, 25, 30, 33, 35, 40] {
        let lambda = spec.params.beta.powi(k as i32);
        let cand = xi.step_towards(dir, lambda).unwrap();
        match integrate(model.as_ref(), &cand) {
            Ok(t) => println!(
                "k={k:2} lambda={lambda:.4e} J={:+.6e} target J0+{:+.3e}",
                cost(model.as_ref(), &t),
                spec.params.alpha * lambda * report.theta
            ),
            Err(e) => println!("k={k:2} lambda={lambda:.4e} blowup: {e}"),
        }
    }
}

#[test]
fn probe_tank_second_iterate() {
    let (model, spec) = by_name("tank").unwrap();
    let xi0 = pure_init(model.as_ref(), &spec).unwrap();
    let p = &spec.params;

    let traj = integrate(model.as_ref(), &xi0).unwrap();
    let stack = transition_stack(model.as_ref(), &xi0, &traj);
    let grads = functional_gradients(model.as_ref(), &xi0, &traj, &stack);
    let sub = build_subproblem(model.as_ref(), &xi0, &grads, p.gamma);
    let report = solve_theta(&sub, p.subproblem_tol).unwrap();
    println!("iter0: theta = {:+.4e}", report.theta);
    let step = armijo_step(model.as_ref(), &xi0, &report, p).unwrap();
    println!("iter0: mu = {}", step.mu);
    let level = p.n0;
    let outcome =
        frequency_search(model.as_ref(), &xi0, &report, &step, level + p.eta, p).unwrap();
    let FrequencyOutcome::Finite {
        nu,
        projected,
        new_partition,
        j_proj,
        ..
    } = outcome
    else {
        panic!("expected finite nu");
    };
    println!("iter0: nu = {nu}, j_proj = {j_proj}");
    let xi1 = if nu >= level {
        projected
    } else {
        let tau = new_partition.merge(&Partition::dyadic(level));
        swopt_core::refine_onto(&projected, &tau).unwrap()
    };
    println!(
        "xi1: {} samples, mesh {:.4e}, min delta {:.4e}",
        xi1.partition().num_samples(),
        xi1.partition().mesh(),
        (0..xi1.partition().num_intervals())
            .map(|k| xi1.partition().delta(k))
            .filter(|d| *d > 0.0)
            .fold(f64::INFINITY, f64::min)
    );

    let traj1 = integrate(model.as_ref(), &xi1).unwrap();
    println!("J1 = {}", cost(model.as_ref(), &traj1));
    let stack1 = transition_stack(model.as_ref(), &xi1, &traj1);
    let grads1 = functional_gradients(model.as_ref(), &xi1, &traj1, &stack1);
    let sub1 = build_subproblem(model.as_ref(), &xi1, &grads1, p.gamma);
    match solve_theta(&sub1, p.subproblem_tol) {
        Ok(r) => println!(
            "iter1: theta = {:+.4e}, step_norm = {:.4e}, iters = {}, residual = {:.2e}",
            r.theta, r.step_norm, r.solver_iters, r.residual
        ),
        Err(e) => println!("iter1 solve failed: {e}"),
    }

    // Dual-norm estimate of the cost row to distinguish a stall from a
    // genuine plateau.
    let row = &grads1.cost;
    let part = xi1.partition();
    let mut u_sq = 0.0f64;
    let mut d_sq = 0.0f64;
    for k in 0..part.num_intervals() {
        let dt = part.delta(k);
        if dt > 0.0 {
            u_sq += row.u_coeffs[k].norm_squared() / dt;
            d_sq += row.d_coeffs[k].norm_squared() / dt;
        }
    }
    println!(
        "cost row dual norms: u {:.4e}, d {:.4e}",
        u_sq.sqrt(),
        d_sq.sqrt()
    );
    let _ = constraint_eval(model.as_ref(), &traj1);
}
