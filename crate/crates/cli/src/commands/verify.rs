use serde::Serialize;
use serde_json::{json, Value};
use trimotion::model::{eval_potential, Point, PotentialSpec, RationalOrReal, ThreeBodyConfig};
use trimotion::oracles::{pregauge_spectrum, radial_spectrum, PregaugeProblem, RadialProblem};
use trimotion::reduction::{
    build_jacobi, centrifugal_coefficient, equal_mass_line_frame, kinetic_gram, wolfes_to_ttw, IDENTITY_TOL,
};
use trimotion::report::sig17;
use trimotion::sampling::QuasiRandom;
use trimotion::superintegrability::{identity_check, integral_order, ttw_to_caged, Bridge, DEFAULT_SAMPLES};
use trimotion::Error;

use crate::config::{Format, LoadedConfig};
use crate::failure::{Failure, ResultExt, EXIT_CHECKS_FAILED};
use crate::output::Artifacts;

pub const CHECK_IDS: [&str; 8] = [
    "wolfes-ttw3",
    "gram-identity",
    "centrifugal-d3L0",
    "centrifugal-d1L0",
    "isospectral-gauge",
    "ttw1-caged",
    "calogero-wolfes-b0",
    "integral-order",
];

const SEED: u64 = 0x7e51_f1ed;

#[derive(Clone, Debug, Serialize)]
struct CheckOutcome {
    id: String,
    deviation: f64,
    tolerance: f64,
    passed: bool,
    details: Value,
}

fn outcome(id: &str, deviation: f64, tolerance: f64, details: Value) -> CheckOutcome {
    CheckOutcome {
        id: id.to_string(),
        deviation,
        tolerance,
        passed: deviation <= tolerance,
        details,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn wolfes_ttw3() -> trimotion::Result<CheckOutcome> {
    let (omega, pair, triple) = (1.0, 1.0, 2.0);
    let image = wolfes_to_ttw(omega, pair, triple)?;
    let wolfes = PotentialSpec::Wolfes { omega, pair, triple };
    let fresh = identity_check(
        &wolfes,
        &image.to_spec(),
        &Bridge::OrderedLineToJacobiPolar {
            frame: equal_mass_line_frame(),
        },
        DEFAULT_SAMPLES,
        IDENTITY_TOL,
    )?;
    Ok(outcome(
        "wolfes-ttw3",
        image.deviation.max(fresh.max_deviation),
        IDENTITY_TOL,
        json!({ "omega": image.omega, "alpha": image.alpha, "beta": image.beta, "samples": image.samples + fresh.samples }),
    ))
}

fn gram_identity() -> trimotion::Result<CheckOutcome> {
    let mut q = QuasiRandom::new(3, SEED);
    let mut worst: f64 = 0.0;
    let triples = 100;
    for _ in 0..triples {
        let u = q.next_in_box(&[-2.0; 3], &[2.0; 3]);
        // log-uniform masses over four decades
        let masses = [10f64.powf(u[0]), 10f64.powf(u[1]), 10f64.powf(u[2])];
        let g = kinetic_gram(&build_jacobi(masses, 3)?);
        for (a, row) in g.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                worst = worst.max((v - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    Ok(outcome("gram-identity", worst, 1e-13, json!({ "triples": triples })))
}

fn centrifugal_zero(id: &str, d: u32) -> trimotion::Result<CheckOutcome> {
    let c: f64 = centrifugal_coefficient(d, 0)?;
    Ok(outcome(id, c.abs(), 0.0, json!({ "d": d, "L": 0, "value": c })))
}

fn isospectral_gauge() -> trimotion::Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    let mut cases = Vec::new();
    for d in [2u32, 3, 5] {
        for l in 0..3u32 {
            let c: f64 = centrifugal_coefficient(d, l)?;
            let gauged = radial_spectrum(&RadialProblem::oscillator(1.0, c), 5)?;
            let pre = pregauge_spectrum(&PregaugeProblem::oscillator(d, l, 1.0)?, 5)?;
            let dev = gauged.iter().zip(&pre).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max);
            worst = worst.max(dev);
            cases.push(json!({ "d": d, "L": l, "deviation": dev }));
        }
    }
    Ok(outcome(
        "isospectral-gauge",
        worst,
        1e-6,
        json!({ "levels": 5, "cases": cases }),
    ))
}

fn ttw1_caged() -> trimotion::Result<CheckOutcome> {
    let ttw = PotentialSpec::Ttw {
        omega: 1.0,
        k: RationalOrReal::integer(1)?,
        alpha: 0.3,
        beta: 0.7,
    };
    let image = ttw_to_caged(&ttw)?;
    Ok(outcome(
        "ttw1-caged",
        image.check.max_deviation,
        IDENTITY_TOL,
        json!({ "dictionary": image.check.dictionary, "samples": image.check.samples }),
    ))
}

fn calogero_wolfes_b0() -> trimotion::Result<CheckOutcome> {
    let (omega, pair) = (1.0, 0.75);
    let calogero = PotentialSpec::Calogero { omega, pair };
    let wolfes = PotentialSpec::Wolfes {
        omega,
        pair,
        triple: 0.0,
    };
    let mut q = QuasiRandom::new(6, SEED);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    while samples < DEFAULT_SAMPLES {
        let p = q.next_in_box(&[-3.0; 6], &[3.0; 6]);
        let Ok(cfg) = ThreeBodyConfig::from_positions(&p[0..2], &p[2..4], &p[4..6]) else {
            continue;
        };
        let point = Point::Triple(cfg);
        let (Ok(a), Ok(b)) = (eval_potential(&calogero, &point), eval_potential(&wolfes, &point)) else {
            continue;
        };
        worst = worst.max(rel(a, b));
        samples += 1;
    }
    Ok(outcome("calogero-wolfes-b0", worst, 0.0, json!({ "samples": samples })))
}

fn integral_orders() -> trimotion::Result<CheckOutcome> {
    let cases = [
        ((1, 1), 2u64),
        ((3, 1), 6),
        ((3, 2), 8),
        ((6, 4), 8),
        ((1, 2), 4),
        ((5, 3), 14),
    ];
    let mut worst = 0u64;
    let mut rows = Vec::new();
    for ((m, n), expected) in cases {
        let got = integral_order(&RationalOrReal::<f64>::fraction(m, n)?)?;
        worst = worst.max(got.abs_diff(expected));
        rows.push(json!({ "k": format!("{m}/{n}"), "order": got, "expected": expected }));
    }
    let irrational = matches!(
        integral_order(&RationalOrReal::irrational(2f64.sqrt())?),
        Err(Error::NotRational)
    );
    if !irrational {
        worst = worst.max(1);
    }
    Ok(outcome(
        "integral-order",
        worst as f64,
        0.0,
        json!({ "cases": rows, "irrational_rejected": irrational }),
    ))
}

fn run_check(id: &str) -> trimotion::Result<CheckOutcome> {
    match id {
        "wolfes-ttw3" => wolfes_ttw3(),
        "gram-identity" => gram_identity(),
        "centrifugal-d3L0" => centrifugal_zero(id, 3),
        "centrifugal-d1L0" => centrifugal_zero(id, 1),
        "isospectral-gauge" => isospectral_gauge(),
        "ttw1-caged" => ttw1_caged(),
        "calogero-wolfes-b0" => calogero_wolfes_b0(),
        "integral-order" => integral_orders(),
        other => Err(Error::UnknownCheckId(other.to_string())),
    }
}

/// Runs the named built-in checks; every id is validated before any runs.
pub fn verify(loaded: &LoadedConfig) -> Result<Artifacts, Failure> {
    let requested = loaded.config.verify.clone().unwrap_or_default().checks;
    let ids: Vec<String> = if requested.is_empty() {
        CHECK_IDS.iter().map(|s| s.to_string()).collect()
    } else {
        requested
    };
    if let Some(bad) = ids.iter().find(|id| !CHECK_IDS.contains(&id.as_str())) {
        return Err(Error::UnknownCheckId(bad.clone()).into());
    }
    let outcomes = ids
        .iter()
        .map(|id| run_check(id))
        .collect::<trimotion::Result<Vec<_>>>()
        .classify()?;
    let all_passed = outcomes.iter().all(|o| o.passed);

    let mut out = Artifacts::new(loaded)?;
    if loaded.wants(Format::Csv) {
        let mut body = String::from("id,deviation,tolerance,passed\n");
        for o in &outcomes {
            body.push_str(&format!(
                "{},{},{},{}\n",
                o.id,
                sig17(o.deviation),
                sig17(o.tolerance),
                o.passed
            ));
        }
        out.csv(None, &[("passed", all_passed.to_string())], &body)?;
    }
    if loaded.wants(Format::Json) {
        out.json(None, &json!({ "passed": all_passed, "checks": outcomes }))?;
    }
    if !all_passed {
        let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.as_str()).collect();
        return Err(Failure {
            code: EXIT_CHECKS_FAILED,
            error: anyhow::anyhow!("checks failed: {}", failed.join(", ")),
        });
    }
    Ok(out)
}
