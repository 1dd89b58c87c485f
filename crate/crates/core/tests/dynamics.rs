use cp_nonreciprocal::atomics::{PopulationState, RateTable};
use cp_nonreciprocal::units::SPEED_OF_LIGHT;
use cp_nonreciprocal::{
    circular_dipole, evolve_populations, free_space_rate, AtomModel, Error, EvalOptions, HalfSpaceMedium, Handedness,
    UnitsPolicy,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn ladder(levels: usize) -> AtomModel {
    let d = circular_dipole(1e-29, Handedness::Plus);
    let energies = (0..levels).map(|i| i as f64 * 1e-19).collect();
    AtomModel::new(energies, (1..levels).map(|n| ((n, n - 1), d))).unwrap()
}

fn grid(t_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
}

// Scaling-and-squaring Taylor exponential applied to a vector.
fn expm_apply(m: &[Vec<f64>], t: f64, p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let norm: f64 = m
        .iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        * t;
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let h = t / 2f64.powi(squarings);
    let mul = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| {
        let mut c = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    };
    let a: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|x| x * h).collect()).collect();
    let mut e = vec![vec![0.0; n]; n];
    let mut term = vec![vec![0.0; n]; n];
    for i in 0..n {
        e[i][i] = 1.0;
        term[i][i] = 1.0;
    }
    for k in 1..30 {
        term = mul(&term, &a);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x /= k as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                e[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        e = mul(&e, &e);
    }
    (0..n).map(|i| (0..n).map(|j| e[i][j] * p[j]).sum()).collect()
}

#[test]
fn two_level_decay_is_exponential() {
    let gamma = 2.5;
    let rates = RateTable::new(2).with(1, 0, gamma).unwrap();
    let t = grid(10.0 / gamma, 200);
    let traj = evolve_populations(&ladder(2), &rates, &PopulationState::excited(2, 1).unwrap(), &t).unwrap();
    for (ti, s) in t.iter().zip(&traj) {
        let e = (-gamma * ti).exp();
        assert!((s.populations()[1] - e).abs() <= 1e-8);
        assert!((s.populations()[0] - (1.0 - e)).abs() <= 1e-8);
    }
}

#[test]
fn zero_rates_keep_populations() {
    let rates = RateTable::new(3);
    let p0 = PopulationState::new(vec![0.2, 0.3, 0.5]).unwrap();
    let traj = evolve_populations(&ladder(3), &rates, &p0, &[0.0, 1.0, 100.0]).unwrap();
    for s in traj {
        assert_eq!(s, p0);
    }
}

#[test]
fn cascade_matches_closed_form() {
    let (a, b) = (1.0, 3.0);
    let rates = RateTable::new(3).with(2, 1, a).unwrap().with(1, 0, b).unwrap();
    let t = grid(10.0 / b, 100);
    let traj = evolve_populations(&ladder(3), &rates, &PopulationState::excited(3, 2).unwrap(), &t).unwrap();
    for (ti, s) in t.iter().zip(&traj) {
        let p2 = (-a * ti).exp();
        let p1 = a / (b - a) * ((-a * ti).exp() - (-b * ti).exp());
        assert!((s.populations()[2] - p2).abs() <= 1e-12);
        assert!((s.populations()[1] - p1).abs() <= 1e-12);
        assert!((s.total() - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn branching_matches_taylor_exponential() {
    let rates = RateTable::new(4)
        .with(3, 2, 0.7)
        .unwrap()
        .with(3, 0, 0.2)
        .unwrap()
        .with(2, 1, 1.3)
        .unwrap()
        .with(2, 0, 0.4)
        .unwrap()
        .with(1, 0, 2.1)
        .unwrap();
    let mut m = vec![vec![0.0; 4]; 4];
    for (u, l, r) in [(3, 2, 0.7), (3, 0, 0.2), (2, 1, 1.3), (2, 0, 0.4), (1, 0, 2.1)] {
        m[u][u] -= r;
        m[l][u] += r;
    }
    let p0 = PopulationState::new(vec![0.0, 0.1, 0.3, 0.6]).unwrap();
    let t = grid(5.0, 25);
    let traj = evolve_populations(&ladder(4), &rates, &p0, &t).unwrap();
    for (ti, s) in t.iter().zip(&traj) {
        let want = expm_apply(&m, *ti, p0.populations());
        for (x, y) in s.populations().iter().zip(&want) {
            assert!((x - y).abs() <= 1e-12, "t {ti}: {x} vs {y}");
        }
    }
    assert_eq!(rates.total_out(3), 0.7 + 0.2);
    assert_eq!(rates.total_out(0), 0.0);
}

#[test]
fn invalid_inputs() {
    let atom = ladder(2);
    assert!(matches!(
        RateTable::new(2).set(0, 1, 1.0),
        Err(Error::UpwardTransition { .. })
    ));
    assert!(RateTable::new(2).set(2, 1, 1.0).is_err());
    let negative = RateTable::new(2).with(1, 0, -0.5).unwrap();
    let p0 = PopulationState::excited(2, 1).unwrap();
    assert!(matches!(
        evolve_populations(&atom, &negative, &p0, &[0.0, 1.0]),
        Err(Error::NegativeRate { level: 1, .. })
    ));
    let ok = RateTable::new(2).with(1, 0, 1.0).unwrap();
    assert!(evolve_populations(&atom, &ok, &p0, &[1.0, 0.5]).is_err());
    assert!(evolve_populations(&atom, &ok, &p0, &[-1.0, 0.5]).is_err());
    assert!(evolve_populations(&ladder(3), &ok, &p0, &[0.0]).is_err());
    assert!(PopulationState::new(vec![0.6, 0.6]).is_err());
    assert!(PopulationState::new(vec![-0.1, 0.6]).is_err());
}

#[test]
fn rates_from_atom_include_body_part() {
    let atom = ladder(2);
    let t = atom.transition(1, 0).unwrap().unwrap();
    let gamma0 = free_space_rate(&t, UnitsPolicy::Si);
    let z = 0.5 * SPEED_OF_LIGHT / t.frequency();
    let table = RateTable::for_atom(&atom, z, &HalfSpaceMedium::PerfectConductor, &EvalOptions::default()).unwrap();
    let zeta = 0.5f64;
    let x = 2.0 * zeta;
    let body = 0.75 * (-x.sin() / zeta - x.cos() / (2.0 * zeta * zeta) + x.sin() / (4.0 * zeta.powi(3)));
    assert!((table.get(1, 0) / gamma0 - (1.0 + body)).abs() < 1e-10);
}

#[test]
fn dipole_free_pairs_are_skipped() {
    let zero = [Complex64::new(0.0, 0.0); 3];
    let d = circular_dipole(1e-29, Handedness::Plus);
    let atom = AtomModel::new(vec![0.0, 1e-19, 2e-19], [((1, 0), d), ((2, 1), d), ((2, 0), zero)]).unwrap();
    let table = RateTable::for_atom(&atom, 1e-7, &HalfSpaceMedium::PerfectConductor, &EvalOptions::default()).unwrap();
    assert_eq!(table.get(2, 0), 0.0);
    assert!(table.get(2, 1) > 0.0);
}

proptest! {
    #[test]
    fn population_is_conserved(
        r in proptest::collection::vec(0.0f64..5.0, 3),
        t_max in 0.1f64..20.0,
    ) {
        let rates = RateTable::new(3).with(2, 1, r[0]).unwrap().with(2, 0, r[1]).unwrap().with(1, 0, r[2]).unwrap();
        let traj = evolve_populations(&ladder(3), &rates, &PopulationState::excited(3, 2).unwrap(), &grid(t_max, 10)).unwrap();
        for s in traj {
            prop_assert!((s.total() - 1.0).abs() <= 1e-9);
            prop_assert!(s.populations().iter().all(|p| *p >= 0.0));
        }
    }
}
