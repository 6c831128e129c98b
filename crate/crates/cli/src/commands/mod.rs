//! One function per subcommand.

mod converge;
mod scan;
mod verify;

pub use converge::converge;
pub use scan::scan;
pub use verify::verify;

use serde_json::json;
use trimotion::discretize::{assemble, Grid};
use trimotion::eigensolve::{detect_degeneracies, lowest_eigs};
use trimotion::oracles::quadrant_levels;
use trimotion::reduction::ReducedProblem2D;
use trimotion::report::sig17;

use crate::config::{Format, LoadedConfig};
use crate::failure::{Failure, ResultExt};
use crate::output::Artifacts;

fn problem_context(problem: &ReducedProblem2D) -> Vec<(&'static str, String)> {
    vec![
        ("family", problem.base.family().to_string()),
        (
            "reduction",
            format!("{},Lx={},Ly={}", problem.dimension_label(), problem.lx, problem.ly),
        ),
        (
            "box",
            format!("{} x {}", sig17(problem.domain.x_max), sig17(problem.domain.y_max)),
        ),
    ]
}

fn grid_context(grid: &Grid) -> (&'static str, String) {
    (
        "grid",
        format!(
            "nx={},ny={},hx={},hy={},offset_x={},offset_y={}",
            grid.x.n,
            grid.y.n,
            sig17(grid.x.h),
            sig17(grid.y.h),
            grid.x.offset,
            grid.y.offset
        ),
    )
}

pub(crate) fn check_levels(m: usize, grid: &Grid) -> Result<(), Failure> {
    if m > grid.len() {
        return Err(Failure::config(format!(
            "{m} levels requested but the {}x{} grid has only {} unknowns",
            grid.x.n,
            grid.y.n,
            grid.len()
        )));
    }
    Ok(())
}

/// Lowest levels of the discretized reduced problem.
pub fn solve(loaded: &LoadedConfig) -> Result<Artifacts, Failure> {
    let solver = &loaded.config.solver;
    let problem = loaded.reduced_problem()?;
    let grid = loaded.grid(&problem, loaded.config.discretization.n)?;
    check_levels(solver.levels, &grid)?;
    let op = assemble(&problem, &grid).classify()?;
    let result = lowest_eigs(&op, solver.levels, solver.tol, solver.max_iter).classify()?;
    let report = detect_degeneracies(&result.levels_f64(), solver.degeneracy_tol);

    let mut out = Artifacts::new(loaded)?;
    let mut context = problem_context(&problem);
    context.push(grid_context(&grid));
    context.push(("converged", result.converged.to_string()));
    context.push(("max_residual", sig17(result.max_residual())));
    context.push(("tol", sig17(solver.tol)));
    if loaded.wants(Format::Csv) {
        out.csv(None, &context, &result.to_csv(&report))?;
    }
    if loaded.wants(Format::Json) {
        out.json(
            None,
            &json!({ "problem": problem, "grid": grid, "result": result, "clusters": report }),
        )?;
    }
    if !result.converged {
        return Err(Failure::numerical(format!(
            "eigensolver stopped after {} iterations with max residual {:e} (tol {:e}); partial results written",
            result.iterations,
            result.max_residual(),
            solver.tol
        )));
    }
    Ok(out)
}

/// Separated-variable levels of the reduced problem on the open quadrant.
pub fn oracle(loaded: &LoadedConfig) -> Result<Artifacts, Failure> {
    let problem = loaded.reduced_problem()?;
    let levels = quadrant_levels(&problem, loaded.config.solver.levels).classify()?;
    let mut out = Artifacts::new(loaded)?;
    if loaded.wants(Format::Csv) {
        let mut body = String::from("index,energy\n");
        for (i, e) in levels.iter().enumerate() {
            body.push_str(&format!("{i},{}\n", sig17(*e)));
        }
        out.csv(None, &problem_context(&problem), &body)?;
    }
    if loaded.wants(Format::Json) {
        out.json(None, &json!({ "problem": problem, "levels": levels }))?;
    }
    Ok(out)
}

/// Jacobi mapping of a three-body system to its planar problem.
pub fn map3(loaded: &LoadedConfig) -> Result<Artifacts, Failure> {
    let (frame, problem) = loaded.three_body()?;
    let mut out = Artifacts::new(loaded)?;
    out.json(None, &json!({ "frame": frame, "problem": problem }))?;
    Ok(out)
}
