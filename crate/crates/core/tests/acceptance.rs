//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use cp_nonreciprocal::atomics::{
    decay_rate_split, nonresonant_terms, resonant_shift_split, ChannelSplit, PopulationState, RateTable,
};
use cp_nonreciprocal::{
    circular_dipole, decay_rate, delta, evolve_populations, generalized_im, generalized_re,
    greens_nonreciprocal_mirror, greens_perfect_conductor, nonresonant_shift, resonant_shift,
    scattering_greens_numeric, AtomModel, ComplexDyadic, EvalOptions, EvaluationPoint, HalfSpaceMedium, Handedness,
    MirrorSign, Result, Transition,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const ORACLE_TOL: f64 = 1e-6;
const ORACLE_SECONDS: f64 = 5.0;
const CONTACT_ZETA: f64 = 1e-3;
const CONTACT_TOL: f64 = 1e-3;
const SLOPE_TOL: f64 = 0.05;
const PHASE_TOL: f64 = 0.01;
const SCALING_TOL: f64 = 1e-3;
const RATIO_TOL: f64 = 1e-3;
const SYMMETRY_TOL: f64 = 1e-12;
const RECIPROCAL_TOL: f64 = 1e-10;
const ALGEBRA_TOL: f64 = 1e-14;
const DECAY_TOL: f64 = 1e-8;
const CONSERVATION_TOL: f64 = 1e-9;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn plus() -> Transition {
    Transition::new(circular_dipole(1.0, Handedness::Plus), 1.0).unwrap()
}

fn minus() -> Transition {
    Transition::new(circular_dipole(1.0, Handedness::Minus), 1.0).unwrap()
}

const CONDUCTOR: HalfSpaceMedium = HalfSpaceMedium::PerfectConductor;
const MIRROR: HalfSpaceMedium = HalfSpaceMedium::PerfectNonreciprocalMirror {
    sign: MirrorSign::Minus,
};

fn axion(eps: f64, theta: f64) -> HalfSpaceMedium {
    HalfSpaceMedium::axion(eps, 1.0, theta).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Least-squares `s` minimizing `|a - s b|^2`.
fn scale(a: &[f64], b: &[f64]) -> f64 {
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let bb: f64 = b.iter().map(|y| y * y).sum();
    ab / bb
}

fn oracle_equivalence() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for zeta in log_grid(0.1, 20.0, 20) {
        let p = EvaluationPoint::real(zeta, 1.0)?;
        let g = scattering_greens_numeric(p, &CONDUCTOR)?;
        let c = greens_perfect_conductor(zeta, 1.0)?;
        worst = worst.max((g[(0, 0)] - c[(0, 0)]).norm() / c[(0, 0)].norm());
        let g = scattering_greens_numeric(p, &MIRROR)?;
        let c = greens_nonreciprocal_mirror(zeta, 1.0, MirrorSign::Minus)?;
        worst = worst.max((g[(0, 1)] - c[(0, 1)]).norm() / c[(0, 1)].norm());
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= ORACLE_TOL && secs <= ORACLE_SECONDS,
        format!("max rel err {worst:.2e} (tol {ORACLE_TOL:.0e}), {secs:.2} s (limit {ORACLE_SECONDS} s)"),
    )
}

fn contact_limits() -> Result<Outcome> {
    let opts = EvalOptions::numeric();
    let c = decay_rate(&plus(), CONTACT_ZETA, &CONDUCTOR, &opts)?;
    let m = decay_rate(&plus(), CONTACT_ZETA, &MIRROR, &opts)?;
    check(
        (c + 1.0).abs() <= CONTACT_TOL && m.abs() <= CONTACT_TOL,
        format!("conductor {c:.6}, mirror {m:.3e} at zeta {CONTACT_ZETA} (tol {CONTACT_TOL:.0e})"),
    )
}

fn asymptotic_slopes() -> Result<Outcome> {
    let opts = EvalOptions::default();
    let fit = |medium: &HalfSpaceMedium, lo: f64, hi: f64| -> Result<f64> {
        let zs = log_grid(lo, hi, 12);
        let mut ys = Vec::new();
        for &z in &zs {
            ys.push(nonresonant_shift(&plus(), z, medium, &opts)?.abs().ln());
        }
        let xs: Vec<f64> = zs.iter().map(|z| z.ln()).collect();
        Ok(slope(&xs, &ys))
    };
    let cases = [
        ("conductor far", fit(&CONDUCTOR, 30.0, 100.0)?, -4.0),
        ("mirror far", fit(&MIRROR, 30.0, 100.0)?, -5.0),
        ("conductor near", fit(&CONDUCTOR, 1e-3, 1e-2)?, -3.0),
        ("mirror near", fit(&MIRROR, 1e-3, 1e-2)?, -3.0),
    ];
    let pass = cases.iter().all(|(_, s, want)| (s - want).abs() <= SLOPE_TOL);
    let detail = cases
        .iter()
        .map(|(n, s, w)| format!("{n} {s:.4} (want {w})"))
        .collect::<Vec<_>>()
        .join(", ");
    check(pass, format!("{detail}; tol {SLOPE_TOL}"))
}

fn zeros(f: &dyn Fn(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<Vec<f64>> {
    let n = 2000;
    let h = (hi - lo) / n as f64;
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = f(a)?;
    for i in 1..=n {
        let b = lo + i as f64 * h;
        let fb = f(b)?;
        if fa.signum() != fb.signum() {
            let (mut x0, mut x1, mut f0) = (a, b, fa);
            for _ in 0..60 {
                let m = 0.5 * (x0 + x1);
                let fm = f(m)?;
                if fm.signum() == f0.signum() {
                    x0 = m;
                    f0 = fm;
                } else {
                    x1 = m;
                }
            }
            out.push(0.5 * (x0 + x1));
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}

fn phase_offset() -> Result<Outcome> {
    let opts = EvalOptions::default();
    let conductor = |z: f64| decay_rate(&plus(), z, &CONDUCTOR, &opts);
    let mirror = |z: f64| decay_rate(&plus(), z, &MIRROR, &opts);
    let zc = zeros(&conductor, 10.0, 30.0)?;
    let zm = zeros(&mirror, 10.0, 30.0)?;
    let quarter = PI / 4.0;
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for &c in &zc {
        if let Some(&m) = zm.iter().find(|&&m| m > c) {
            worst = worst.max(((m - c) - quarter).abs() / quarter);
            pairs += 1;
        }
    }
    check(
        pairs >= 10 && worst <= PHASE_TOL,
        format!("{pairs} zero pairs on [10, 30], max rel deviation from pi/4 {worst:.2e} (tol {PHASE_TOL})"),
    )
}

fn delta_half_scaling() -> Result<Outcome> {
    let opts = EvalOptions::default();
    let d = delta(0.0, PI);
    let mut worst: f64 = 0.0;
    let mut worst_full: f64 = 0.0;
    for (theta, sign) in [(PI, MirrorSign::Minus), (-PI, MirrorSign::Plus)] {
        let medium = axion(1.0, theta);
        let mirror = HalfSpaceMedium::PerfectNonreciprocalMirror { sign };
        for z in log_grid(0.2, 10.0, 25) {
            let pairs = [
                (
                    decay_rate_split(&plus(), z, &medium, &opts)?,
                    decay_rate(&plus(), z, &mirror, &opts)?,
                ),
                (
                    resonant_shift_split(&plus(), z, &medium, &opts)?,
                    resonant_shift(&plus(), z, &mirror, &opts)?,
                ),
            ];
            for (a, m) in pairs {
                let want = 0.5 * d.abs() * m;
                worst = worst.max((a.nonreciprocal - want).abs() / want.abs());
                worst_full = worst_full.max((a.total() - want).abs() / want.abs());
            }
        }
    }
    check(
        worst <= SCALING_TOL,
        format!(
            "nonreciprocal part max rel dev {worst:.2e} (tol {SCALING_TOL:.0e}); full value incl. Delta^2 reciprocal part {worst_full:.2e} (not gated)"
        ),
    )
}

fn difference_ratios() -> Result<Outcome> {
    let opts = EvalOptions::default();
    let with = axion(16.0, PI);
    let without = axion(16.0, 0.0);
    let pure = axion(1.0, PI);

    let far = log_grid(30.0, 100.0, 60);
    let mut diff_rate = Vec::new();
    let mut pure_rate = Vec::new();
    let mut diff_res = Vec::new();
    let mut pure_res = Vec::new();
    for &z in &far {
        diff_rate.push(decay_rate(&plus(), z, &with, &opts)? - decay_rate(&plus(), z, &without, &opts)?);
        pure_rate.push(decay_rate(&plus(), z, &pure, &opts)?);
        diff_res.push(resonant_shift(&plus(), z, &with, &opts)? - resonant_shift(&plus(), z, &without, &opts)?);
        pure_res.push(resonant_shift(&plus(), z, &pure, &opts)?);
    }
    let retarded = [
        scale(&diff_rate, &pure_rate) / (4.0 / 25.0),
        scale(&diff_res, &pure_res) / (4.0 / 25.0),
    ];

    let mut near_worst: f64 = 0.0;
    let mut near_full: f64 = 0.0;
    for z in log_grid(1e-4, 1e-3, 6) {
        let a = resonant_shift_split(&plus(), z, &with, &opts)?;
        let b = resonant_shift_split(&plus(), z, &pure, &opts)?;
        near_worst = near_worst.max((a.nonreciprocal / b.nonreciprocal / (2.0 / 17.0) - 1.0).abs());
        let full = a.total() - resonant_shift(&plus(), z, &without, &opts)?;
        near_full = near_full.max((full / b.total() / (2.0 / 17.0) - 1.0).abs());
    }
    let pass = retarded.iter().all(|r| (r - 1.0).abs() <= RATIO_TOL) && near_worst <= RATIO_TOL;
    check(
        pass,
        format!(
            "far [30, 100] fitted ratio/(4/25): rate {:.6}, resonant {:.6}; near [1e-4, 1e-3] Delta-odd resonant ratio/(2/17) max dev {near_worst:.2e}; tol {RATIO_TOL:.0e}; near full difference dev {near_full:.2e} (not gated)",
            retarded[0], retarded[1]
        ),
    )
}

fn symmetry_suite() -> Result<Outcome> {
    let opts = EvalOptions::default();
    let a_med = axion(1.0, PI);
    let b_med = axion(1.0, -PI);
    let mut worst: f64 = 0.0;
    let mut worst_full: f64 = 0.0;
    type Split = fn(&Transition, f64, &HalfSpaceMedium, &EvalOptions) -> Result<ChannelSplit>;
    let quantities: [Split; 2] = [decay_rate_split, resonant_shift_split];
    for z in log_grid(0.05, 20.0, 15) {
        for q in quantities {
            let base = q(&plus(), z, &a_med, &opts)?;
            let theta = q(&plus(), z, &b_med, &opts)?;
            let conj = q(&minus(), z, &a_med, &opts)?;
            let both = q(&minus(), z, &b_med, &opts)?;
            let r = base.nonreciprocal.abs();
            worst = worst
                .max((base.nonreciprocal + theta.nonreciprocal).abs() / r)
                .max((base.nonreciprocal + conj.nonreciprocal).abs() / r)
                .max((base.nonreciprocal - both.nonreciprocal).abs() / r);
            worst_full = worst_full.max((base.total() + theta.total()).abs() / base.total().abs());
        }
    }
    check(
        worst <= SYMMETRY_TOL,
        format!(
            "nonreciprocal part max rel asymmetry {worst:.2e} (tol {SYMMETRY_TOL:.0e}); full value {worst_full:.2e} (not gated)"
        ),
    )
}

fn reciprocal_reduction() -> Result<Outcome> {
    let opts = EvalOptions::default();
    let mut worst: f64 = 0.0;
    for medium in [axion(16.0, 0.0), axion(4.0, 0.0), CONDUCTOR] {
        for z in [0.01, 0.3, 3.0, 30.0] {
            let t = nonresonant_terms(&plus(), z, &medium, &opts)?;
            worst = worst.max(t.im_term.abs() / t.re_term.abs());
        }
    }
    check(
        worst <= RECIPROCAL_TOL,
        format!("max |Im-term|/|Re-term| {worst:.2e} (tol {RECIPROCAL_TOL:.0e})"),
    )
}

fn generalized_algebra() -> Result<Outcome> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    let mut hermitian = true;
    for _ in 0..100 {
        let a = ComplexDyadic::new(std::array::from_fn(|_| {
            std::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        }));
        let re = generalized_re(&a);
        let im = generalized_im(&a);
        let back = re + im * Complex64::new(0.0, 1.0);
        worst = worst.max(back.max_abs_diff(&a) / a.norm());
        hermitian &= re.max_abs_diff(&re.adjoint()) == 0.0 && im.max_abs_diff(&im.adjoint()) == 0.0;
    }
    check(
        worst <= ALGEBRA_TOL && hermitian,
        format!("max reconstruction err {worst:.2e} (tol {ALGEBRA_TOL:.0e}), outputs Hermitian: {hermitian}"),
    )
}

fn dynamics() -> Result<Outcome> {
    let d = circular_dipole(1e-29, Handedness::Plus);
    let two = AtomModel::new(vec![0.0, 1e-19], [((1, 0), d)])?;
    let gamma = 1.7;
    let rates = RateTable::new(2).with(1, 0, gamma)?;
    let t: Vec<f64> = (0..=500).map(|i| 10.0 / gamma * i as f64 / 500.0).collect();
    let traj = evolve_populations(&two, &rates, &PopulationState::excited(2, 1)?, &t)?;
    let decay_err = t
        .iter()
        .zip(&traj)
        .map(|(ti, s)| (s.populations()[1] - (-gamma * ti).exp()).abs())
        .fold(0.0, f64::max);

    let three = AtomModel::new(vec![0.0, 1e-19, 2e-19], [((1, 0), d), ((2, 1), d)])?;
    let rates = RateTable::new(3).with(2, 1, 0.8)?.with(1, 0, 2.3)?.with(2, 0, 0.4)?;
    let t: Vec<f64> = (0..=500).map(|i| 10.0 / 2.3 * i as f64 / 500.0).collect();
    let traj = evolve_populations(&three, &rates, &PopulationState::excited(3, 2)?, &t)?;
    let drift = traj.iter().map(|s| (s.total() - 1.0).abs()).fold(0.0, f64::max);
    check(
        decay_err <= DECAY_TOL && drift <= CONSERVATION_TOL,
        format!(
            "two-level max err {decay_err:.2e} (tol {DECAY_TOL:.0e}); cascade population drift {drift:.2e} (tol {CONSERVATION_TOL:.0e})"
        ),
    )
}

type Criterion = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 contact limits", contact_limits),
        ("3 asymptotic slopes", asymptotic_slopes),
        ("4 pi/2 phase offset", phase_offset),
        ("5 Delta/2 scaling", delta_half_scaling),
        ("6 difference ratios", difference_ratios),
        ("7 symmetry suite", symmetry_suite),
        ("8 reciprocal reduction", reciprocal_reduction),
        ("9 generalized parts", generalized_algebra),
        ("10 population dynamics", dynamics),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} [{name}] {detail} ({:.2} s)",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
