mod common;

use cesnet_core::equilibrium::{
    price_map, solve_cobb_douglas, solve_fixed_point, solve_fixed_point_from, solve_leontief,
    solve_uniform_ces, unit_cost, unit_cost_gradient,
};
use cesnet_core::structure::{equilibrium_structure, gradient_cost, hawkins_simon};
use cesnet_core::{Economy, FixedPointOptions, Numeraire, ShockVector, SolveStatus};
use common::{max_abs_diff, random_economy, random_gammas, rng};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, Normal};

fn log_normal_shock<R: Rng>(rng: &mut R, n: usize, sd: f64) -> ShockVector {
    let d = Normal::new(0.0, sd).unwrap();
    ShockVector::from_log(&(0..n).map(|_| d.sample(rng)).collect::<Vec<_>>()).unwrap()
}

fn tight() -> FixedPointOptions {
    FixedPointOptions {
        tol: 1e-13,
        max_iter: 100_000,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn benchmark_reached_from_any_start(seed in any::<u64>(), n in 1usize..12) {
        let mut r = rng(seed);
        let g = random_gammas(&mut r, n, -1.0, 1.5);
        let e = random_economy(&mut r, n, &g, 0.1);
        let start = DVector::from_fn(n, |_, _| r.random_range(0.2..5.0));
        let res = solve_fixed_point_from(&e, &ShockVector::ones(n), Numeraire::default(), &tight(), &start).unwrap();
        prop_assert_eq!(res.status, SolveStatus::Converged);
        prop_assert!(res.pi.iter().all(|p| (p - 1.0).abs() < 1e-9));
    }

    #[test]
    fn prices_scale_with_numeraire(seed in any::<u64>(), n in 1usize..8, scale in 0.1f64..10.0) {
        let mut r = rng(seed);
        let g = random_gammas(&mut r, n, -1.0, 1.5);
        let e = random_economy(&mut r, n, &g, 0.1);
        let z = log_normal_shock(&mut r, n, 0.1);
        let base = solve_fixed_point(&e, &z, Numeraire::default(), &tight()).unwrap();
        let scaled = solve_fixed_point(&e, &z, Numeraire::new(scale).unwrap(), &tight()).unwrap();
        prop_assume!(base.converged() && scaled.converged());
        for (a, b) in base.pi.iter().zip(scaled.pi.iter()) {
            prop_assert!((a * scale - b).abs() <= 1e-9 * b.abs());
        }
    }

    #[test]
    fn price_map_is_monotone(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let g = random_gammas(&mut r, n, -1.0, 1.5);
        let e = random_economy(&mut r, n, &g, 0.05);
        let z = log_normal_shock(&mut r, n, 0.2);
        let lo = DVector::from_fn(n, |_, _| r.random_range(0.1..3.0));
        let hi = lo.map(|v| v * r.random_range(1.0..2.0));
        let a = price_map(&e, &z, Numeraire::default(), &lo).unwrap();
        let b = price_map(&e, &z, Numeraire::default(), &hi).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            prop_assert!(*x <= *y * (1.0 + 1e-14));
        }
    }

    #[test]
    fn cobb_douglas_is_the_limit_of_small_gamma(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let e = random_economy(&mut r, n, &vec![0.0; n], 0.1);
        let z = log_normal_shock(&mut r, n, 0.1);
        let cd = solve_cobb_douglas(&e, &z, Numeraire::default()).unwrap();
        let near = solve_fixed_point(&e.clone().with_uniform_gamma(1e-7).unwrap(), &z, Numeraire::default(), &tight()).unwrap();
        let exact = solve_fixed_point(&e, &z, Numeraire::default(), &tight()).unwrap();
        let near_log: Vec<f64> = near.pi.iter().map(|p| p.ln()).collect();
        let exact_log: Vec<f64> = exact.pi.iter().map(|p| p.ln()).collect();
        prop_assert!(max_abs_diff(&near_log, cd.as_slice()) < 1e-6);
        prop_assert!(max_abs_diff(&exact_log, cd.as_slice()) < 1e-10);
    }

    #[test]
    fn gradient_matches_finite_differences(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let g = random_gammas(&mut r, n, -1.0, 1.5);
        let e = random_economy(&mut r, n, &g, 0.05);
        let pi = DVector::from_fn(n, |_, _| r.random_range(0.3..3.0));
        let pi0 = Numeraire::new(r.random_range(0.5..2.0)).unwrap();
        let j = r.random_range(0..n);
        let grad = unit_cost_gradient(&e, j, &pi, pi0).unwrap();
        for i in 0..=n {
            let h = 1e-6;
            let (up, dn) = if i == 0 {
                let up = unit_cost(&e, j, &pi, Numeraire::new(pi0.value() * (1.0 + h)).unwrap()).unwrap();
                let dn = unit_cost(&e, j, &pi, Numeraire::new(pi0.value() * (1.0 - h)).unwrap()).unwrap();
                (up, dn)
            } else {
                let mut p = pi.clone();
                p[i - 1] *= 1.0 + h;
                let up = unit_cost(&e, j, &p, pi0).unwrap();
                p[i - 1] = pi[i - 1] * (1.0 - h);
                (up, unit_cost(&e, j, &p, pi0).unwrap())
            };
            let x = if i == 0 { pi0.value() } else { pi[i - 1] };
            let fd = (up - dn) / (2.0 * h * x);
            let scale = grad[i].abs().max(1e-3);
            prop_assert!((fd - grad[i]).abs() / scale < 1e-6, "i={} fd={} grad={}", i, fd, grad[i]);
        }
    }

    #[test]
    fn euler_identity_and_share_adding_up(seed in any::<u64>(), n in 1usize..10) {
        let mut r = rng(seed);
        let g = random_gammas(&mut r, n, -1.0, 1.5);
        let e = random_economy(&mut r, n, &g, 0.1);
        let z = log_normal_shock(&mut r, n, 0.1);
        let pi0 = Numeraire::new(r.random_range(0.5..2.0)).unwrap();
        let res = solve_fixed_point(&e, &z, pi0, &tight()).unwrap();
        prop_assume!(res.converged());
        let st = equilibrium_structure(&e, &res.pi, pi0, &z).unwrap();
        let cg = gradient_cost(&e, &res.pi, pi0, &z).unwrap();
        for j in 0..n {
            let value = st.b0[j] * pi0.value() + (0..n).map(|i| st.b[(i, j)] * res.pi[i]).sum::<f64>();
            prop_assert!((value - res.pi[j]).abs() <= 1e-9 * res.pi[j]);
            let shares = st.s0[j] + st.s.column(j).sum();
            prop_assert!((shares - 1.0).abs() < 1e-9);
            let cost = cg.grad0[j] * pi0.value() + (0..n).map(|i| cg.grad[(i, j)] * res.pi[i]).sum::<f64>();
            prop_assert!((cost - z.levels()[j] * res.pi[j]).abs() <= 1e-9 * cost.abs());
        }
    }

    #[test]
    fn hawkins_simon_agrees_with_leading_minors(seed in any::<u64>(), n in 1usize..7, scale in 0.05f64..0.6) {
        let mut r = rng(seed);
        let b = DMatrix::from_fn(n, n, |_, _| r.random_range(0.0..1.0) * scale * 2.0);
        let m = DMatrix::identity(n, n) - &b;
        let minors: Vec<f64> = (1..=n).map(|k| m.view((0, 0), (k, k)).into_owned().determinant()).collect();
        prop_assume!(minors.iter().all(|d| d.abs() > 1e-9));
        prop_assert_eq!(hawkins_simon(&b), minors.iter().all(|d| *d > 0.0));
    }

    #[test]
    fn tables_round_trip(seed in any::<u64>(), n in 1usize..10) {
        let mut r = rng(seed);
        let sigma: Vec<f64> = (0..n).map(|_| r.random_range(0.0..2.5)).collect();
        let base = random_economy(&mut r, n, &vec![0.0; n], 0.05);
        let e = Economy::from_sigma(base.labels().to_vec(), base.a0().as_slice().to_vec(), base.a().into_owned(), &sigma).unwrap();
        let mut io = Vec::new();
        let mut el = Vec::new();
        e.write_io_table(&mut io).unwrap();
        e.write_elasticities(&mut el).unwrap();
        let back = Economy::from_readers(io.as_slice(), el.as_slice()).unwrap();
        prop_assert_eq!(back.labels(), e.labels());
        prop_assert_eq!(back.coefficients(), e.coefficients());
        prop_assert_eq!(back.gamma(), e.gamma());
    }
}

#[test]
fn closed_forms_agree_with_recursion() {
    let mut r = rng(7);
    for case in 0..60 {
        let n = r.random_range(2..10);
        let gamma = [1.0, 0.0, 0.5, -0.5, 1.3, -1.0][case % 6];
        let e = random_economy(&mut r, n, &vec![gamma; n], 0.1);
        let z = log_normal_shock(&mut r, n, 0.1);
        let pi0 = Numeraire::new(r.random_range(0.5..2.0)).unwrap();
        let it = solve_fixed_point(&e, &z, pi0, &tight()).unwrap();
        assert!(it.converged(), "case {case}");
        let closed: Vec<f64> = if gamma == 0.0 {
            solve_cobb_douglas(&e, &z, pi0)
                .unwrap()
                .iter()
                .map(|v| v.exp())
                .collect()
        } else if gamma == 1.0 {
            solve_leontief(&e, &z, pi0).unwrap().as_slice().to_vec()
        } else {
            solve_uniform_ces(&e, &z, gamma, pi0)
                .unwrap()
                .as_slice()
                .to_vec()
        };
        assert!(
            max_abs_diff(it.pi.as_slice(), &closed) < 1e-9,
            "case {case} gamma {gamma}"
        );
    }
}
