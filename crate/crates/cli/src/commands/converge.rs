use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use trimotion::discretize::assemble;
use trimotion::eigensolve::lowest_eigs;
use trimotion::oracles::quadrant_levels;
use trimotion::report::sig17;
use trimotion::Error;

use super::{check_levels, problem_context};
use crate::config::{Format, LoadedConfig};
use crate::failure::{Failure, ResultExt};
use crate::output::Artifacts;

#[derive(Clone, Debug, Serialize)]
struct Rung {
    n: usize,
    h: f64,
    energies: Vec<f64>,
    residuals: Vec<f64>,
    converged: bool,
}

#[derive(Clone, Debug, Serialize)]
struct Row {
    h: f64,
    level: usize,
    energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<f64>,
    order: Option<f64>,
}

/// Order from errors against a reference on two grids.
fn order_from_errors(e0: f64, e1: f64, h0: f64, h1: f64) -> Option<f64> {
    let p = (e0.abs() / e1.abs()).ln() / (h0 / h1).ln();
    p.is_finite().then_some(p)
}

/// Order `p` with `(E₀ − E₁)/(E₁ − E₂) = (h₀ᵖ − h₁ᵖ)/(h₁ᵖ − h₂ᵖ)` from three
/// grids, for a ladder whose spacing ratios need not be equal.
fn order_from_three(e: [f64; 3], h: [f64; 3]) -> Option<f64> {
    let ratio = (e[0] - e[1]) / (e[1] - e[2]);
    if !ratio.is_finite() || ratio <= 0.0 {
        return None;
    }
    let g = |p: f64| (h[0].powf(p) - h[1].powf(p)) / (h[1].powf(p) - h[2].powf(p));
    let (mut lo, mut hi) = (0.05, 12.0);
    if ratio <= g(lo) || ratio >= g(hi) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < ratio {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn rows(rungs: &[Rung], oracle: Option<&[f64]>) -> Vec<Row> {
    let mut out = Vec::new();
    for (r, rung) in rungs.iter().enumerate() {
        for (level, &energy) in rung.energies.iter().enumerate() {
            let error = oracle.map(|o| energy - o[level]);
            let order = match oracle {
                Some(o) if r >= 1 => {
                    let prev = &rungs[r - 1];
                    order_from_errors(prev.energies[level] - o[level], energy - o[level], prev.h, rung.h)
                }
                None if r >= 2 => {
                    let (a, b) = (&rungs[r - 2], &rungs[r - 1]);
                    order_from_three([a.energies[level], b.energies[level], energy], [a.h, b.h, rung.h])
                }
                _ => None,
            };
            out.push(Row {
                h: rung.h,
                level,
                energy,
                error,
                order,
            });
        }
    }
    out
}

fn csv(rows: &[Row], with_error: bool) -> String {
    let opt = |v: Option<f64>| v.map(sig17).unwrap_or_default();
    let mut body = String::from(if with_error {
        "h,level,energy,error,order\n"
    } else {
        "h,level,energy,order\n"
    });
    for r in rows {
        if with_error {
            body.push_str(&format!(
                "{},{},{},{},{}\n",
                sig17(r.h),
                r.level,
                sig17(r.energy),
                opt(r.error),
                opt(r.order)
            ));
        } else {
            body.push_str(&format!(
                "{},{},{},{}\n",
                sig17(r.h),
                r.level,
                sig17(r.energy),
                opt(r.order)
            ));
        }
    }
    body
}

/// Grid-refinement table with errors against the oracle when one exists.
pub fn converge(loaded: &LoadedConfig) -> Result<Artifacts, Failure> {
    let solver = &loaded.config.solver;
    let ladder = loaded
        .config
        .discretization
        .ladder
        .clone()
        .ok_or_else(|| Failure::config("converge needs discretization.ladder"))?;
    if ladder.len() < 2 || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::config(
            "discretization.ladder needs at least two increasing sizes",
        ));
    }
    let problem = loaded.reduced_problem()?;
    let grids = ladder
        .iter()
        .map(|&n| loaded.grid(&problem, [n, n]))
        .collect::<Result<Vec<_>, _>>()?;
    for g in &grids {
        check_levels(solver.levels, g)?;
    }
    let oracle = match quadrant_levels(&problem, solver.levels) {
        Ok(levels) => Some(levels),
        Err(Error::OracleUnavailable { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    let rungs = grids
        .par_iter()
        .map(|grid| {
            let op = assemble(&problem, grid)?;
            let res = lowest_eigs(&op, solver.levels, solver.tol, solver.max_iter)?;
            Ok(Rung {
                n: grid.x.n,
                h: grid.x.h,
                converged: res.converged,
                energies: res.levels_f64(),
                residuals: res.residuals,
            })
        })
        .collect::<trimotion::Result<Vec<_>>>()
        .classify()?;
    let rows = rows(&rungs, oracle.as_deref());

    let mut out = Artifacts::new(loaded)?;
    let mut context = problem_context(&problem);
    context.push(("ladder", format!("{ladder:?}")));
    context.push((
        "oracle",
        if oracle.is_some() {
            "separated"
        } else {
            "unavailable; order from three consecutive grids"
        }
        .to_string(),
    ));
    if loaded.wants(Format::Csv) {
        out.csv(None, &context, &csv(&rows, oracle.is_some()))?;
    }
    if loaded.wants(Format::Json) {
        out.json(
            None,
            &json!({ "problem": problem, "oracle": oracle, "rungs": rungs, "rows": rows }),
        )?;
    }
    if let Some(bad) = rungs.iter().find(|r| !r.converged) {
        return Err(Failure::numerical(format!(
            "eigensolver did not converge on the n = {} grid; partial table written",
            bad.n
        )));
    }
    Ok(out)
}
