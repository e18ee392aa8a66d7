//! Regression properties of the iteration on the three registered models.

use scaling_fv::iteration::{direct_solution, iterate, run_grid, sup_norm};
use scaling_fv::models::{model_by_name, MODEL_NAMES};
use scaling_fv::report::{convergence_table, l1_error};

#[test]
fn beta_is_inverse_sup_norm() {
    for name in MODEL_NAMES {
        let m = model_by_name(name).unwrap();
        let trace = iterate(&m, &m.defaults).unwrap();
        let product = trace.final_beta() * sup_norm(&trace.final_field);
        assert!((product - 1.0).abs() <= 1e-14, "{name}: {product}");
        assert!(trace.rows.iter().all(|r| r.beta > 0.0));
    }
}

#[test]
fn changes_shrink_until_convergence() {
    for name in MODEL_NAMES {
        let m = model_by_name(name).unwrap();
        let trace = iterate(&m, &m.defaults).unwrap();
        assert!(trace.converged, "{name}");
        let changes: Vec<f64> = trace.rows.iter().filter_map(|r| r.change).collect();
        let (last, before) = changes.split_last().unwrap();
        assert!(*last <= m.defaults.tol);
        assert!(
            before.iter().all(|&e| e > m.defaults.tol),
            "{name}: {changes:?}"
        );
        // rows n >= 3 carry E_2, E_3, ...
        for w in changes[1..].windows(2) {
            assert!(w[1] < w[0], "{name}: {changes:?}");
        }
    }
}

#[test]
fn iteration_counts() {
    for (name, limit) in [("advection-reaction", 16), ("burgers", 10), ("traffic", 10)] {
        let m = model_by_name(name).unwrap();
        let trace = iterate(&m, &m.defaults).unwrap();
        assert!(
            trace.iterations_used <= limit,
            "{name}: {}",
            trace.iterations_used
        );
    }
}

#[test]
fn errors_settle_onto_direct_error() {
    for name in MODEL_NAMES {
        let m = model_by_name(name).unwrap();
        let run = convergence_table(&m, &m.defaults).unwrap();
        let rows = &run.table.rows;
        for w in rows[1..].windows(2) {
            assert!(
                w[1].err <= w[0].err,
                "{name}: Err increased at n = {}",
                w[1].n
            );
        }
        let tau = rows.last().unwrap().tau;
        assert!((tau - 1.0).abs() <= 1e-4, "{name}: final tau {tau}");
        assert!(rows.iter().all(|r| r.err >= 0.0 && r.tau >= 0.0));
    }
}

#[test]
fn burgers_iterate_matches_direct_in_l1() {
    let m = model_by_name("burgers").unwrap();
    let trace = iterate(&m, &m.defaults).unwrap();
    let direct = direct_solution(&m, &m.defaults).unwrap();
    let grid = run_grid(&m, &m.defaults).unwrap();
    let d = l1_error(
        trace.final_field.final_level(),
        direct.final_level(),
        grid.dx(),
    )
    .unwrap();
    assert!(d <= 1e-6, "{d}");
}

#[test]
fn advection_reaction_first_iterate_error_from_mass_argument() {
    // The first iterate solves the source-free problem and keeps the IC mass,
    // while the exact solution carries e^{rT} times that mass.
    let m = model_by_name("advection-reaction").unwrap();
    let run = convergence_table(&m, &m.defaults).unwrap();
    let ic_mass: f64 = run
        .grid
        .sample(|x| m.initial_condition(x))
        .integral(run.grid.dx());
    let lower_bound = (2.5_f64.exp() - 1.0) * ic_mass;
    let err1 = run.table.rows[0].err;
    assert!(
        (err1 - lower_bound).abs() <= 1e-3 * lower_bound,
        "{err1} vs {lower_bound}"
    );
}
