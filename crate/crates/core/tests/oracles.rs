use trimotion::model::{PotentialSpec, RationalOrReal};
use trimotion::oracles::{
    angular_levels, angular_levels_shooting, effective_cutoff, lowest_separated, pregauge_spectrum, quadrant_levels,
    radial_spectrum, radial_spectrum_shooting, AngularProblem, PregaugeProblem, RadialProblem, Weighting,
};
use trimotion::reduction::reduce_to_2d;
use trimotion::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `Λ_j = k² (λ_A + λ_B + 2j)²` with `λ = 1/2 + √(1/4 + A/k²)`.
fn pt_closed_form(k: f64, a: f64, b: f64, j: usize) -> f64 {
    let la = 0.5 + (0.25 + a / (k * k)).sqrt();
    let lb = 0.5 + (0.25 + b / (k * k)).sqrt();
    k * k * (la + lb + 2.0 * j as f64).powi(2)
}

#[test]
fn angular_levels_match_closed_form() {
    for (k, a, b) in [
        (1.0, 0.3, 1.1),
        (3.0, 2.0, -1.0),
        (1.5, 0.0, 0.5),
        (2f64.sqrt(), 0.1875, 0.1875),
    ] {
        let p = AngularProblem::new(k, a, b, Weighting::Plain);
        let fd = angular_levels(&p, 6).unwrap();
        let sh = angular_levels_shooting(&p, 6).unwrap();
        for j in 0..6 {
            let exact = pt_closed_form(k, a, b, j);
            assert!(rel(fd[j], exact) < 1e-9, "k={k} j={j}: fd {} vs {exact}", fd[j]);
            assert!(rel(sh[j], exact) < 1e-9, "k={k} j={j}: shooting {} vs {exact}", sh[j]);
        }
    }
}

#[test]
fn k_squared_weighting_scales_strengths() {
    let plain = angular_levels(&AngularProblem::new(3.0, 9.0 * 0.2, 9.0 * 0.4, Weighting::Plain), 3).unwrap();
    let weighted = angular_levels(&AngularProblem::new(3.0, 0.2, 0.4, Weighting::KSquared), 3).unwrap();
    for (a, b) in plain.iter().zip(&weighted) {
        assert!(rel(*a, *b) < 1e-12);
    }
}

#[test]
fn friedrichs_edge_of_angular_bound() {
    // A = −k²/4 is the critical strength
    let k = 2.0;
    let p = AngularProblem::new(k, -1.0, 0.0, Weighting::Plain);
    let fd = angular_levels(&p, 3).unwrap();
    for (j, v) in fd.iter().enumerate() {
        let exact = pt_closed_form(k, -1.0, 0.0, j);
        assert!(rel(*v, exact) < 1e-8, "j={j}: {v} vs {exact}");
    }
}

#[test]
fn radial_solvers_agree() {
    let cases = [
        RadialProblem::oscillator(1.0, 0.0),
        RadialProblem::oscillator(0.7, 3.3),
        RadialProblem::oscillator(2.0, -0.25),
        RadialProblem::coulomb(1.0, 0.0),
        RadialProblem::coulomb(0.5, 1.7),
    ];
    for p in cases {
        let m = 5;
        let cutoff = effective_cutoff(&p, m).unwrap();
        let fd = radial_spectrum(&p.with_cutoff(cutoff), m).unwrap();
        let sh = radial_spectrum_shooting(&p, m, cutoff).unwrap();
        for (a, b) in fd.iter().zip(&sh) {
            assert!(rel(*a, *b) < 1e-8, "{p:?}: {a} vs {b}");
        }
    }
}

#[test]
fn coulomb_levels_with_centrifugal_term() {
    // c = L(L+1): E = −Z²/(4(n + L + 1)²)
    for l in 0..3 {
        let c = (l * (l + 1)) as f64;
        let e = radial_spectrum(&RadialProblem::coulomb(2.0, c), 4).unwrap();
        for (n, v) in e.iter().enumerate() {
            let exact = -4.0 / (4.0 * ((n + l + 1) as f64).powi(2));
            assert!(rel(*v, exact) < 1e-9, "L={l} n={n}: {v}");
        }
    }
}

#[test]
fn pregauge_matches_gauged_form() {
    for d in [2u32, 3, 5] {
        for l in 0..3u32 {
            let c: f64 = trimotion::reduction::centrifugal_coefficient(d, l).unwrap();
            let gauged = radial_spectrum(&RadialProblem::oscillator(1.0, c), 5).unwrap();
            let pre = pregauge_spectrum(&PregaugeProblem::oscillator(d, l, 1.0).unwrap(), 5).unwrap();
            for (a, b) in gauged.iter().zip(&pre) {
                assert!(rel(*a, *b) < 1e-8, "d={d} L={l}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn ttw_quadrant_repeats_sector_levels() {
    let spec = PotentialSpec::Ttw {
        omega: 1.0,
        k: RationalOrReal::integer(2).unwrap(),
        alpha: 0.25,
        beta: 0.5,
    };
    let problem = reduce_to_2d(&spec, 3, 3, 0, 0, None).unwrap();
    let quadrant = quadrant_levels(&problem, 6).unwrap();
    let sector = lowest_separated(&spec, 3).unwrap().energies();
    for i in 0..6 {
        assert!(rel(quadrant[i], sector[i / 2]) < 1e-12);
    }
    let irrational = PotentialSpec::Ttw {
        omega: 1.0,
        k: RationalOrReal::irrational(2f64.sqrt()).unwrap(),
        alpha: 0.25,
        beta: 0.5,
    };
    let problem = reduce_to_2d(&irrational, 3, 3, 0, 0, None).unwrap();
    assert!(matches!(
        quadrant_levels(&problem, 4),
        Err(Error::OracleUnavailable { .. })
    ));
}

#[test]
fn ttw_closed_form_spectrum() {
    // E = 2ω(2 n_r + 1 + √Λ_j)
    let spec = PotentialSpec::Ttw {
        omega: 1.0,
        k: RationalOrReal::fraction(3, 2).unwrap(),
        alpha: 0.2,
        beta: 0.6,
    };
    let s = lowest_separated(&spec, 10).unwrap();
    for l in &s.levels {
        let exact = 2.0 * (2.0 * l.n_r as f64 + 1.0 + pt_closed_form(1.5, 0.2, 0.6, l.j).sqrt());
        assert!(rel(l.energy, exact) < 1e-9, "{l:?} vs {exact}");
    }
}
