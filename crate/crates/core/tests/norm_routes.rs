use fockdyn::quadrature::{norm_parseval_log, norm_quadrature_log, norm_sup, QuadratureConfig, SupGrid};
use fockdyn::space::{monomial_norm_asymptotic_log, monomial_norm_log, monomial_norm_sup_log, tail_radius};
use fockdyn::special::ln_factorial;
use fockdyn::{SpaceParams, TaylorSeries};
use num_complex::Complex64;
use proptest::prelude::*;

fn poly(coeffs: &[(f64, f64)]) -> TaylorSeries {
    TaylorSeries::new(coeffs.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
}

fn coeffs_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quadrature_matches_parseval(
        coeffs in coeffs_strategy(),
        alpha in 0.3..2.5f64,
        m in 0.5..2.5f64,
    ) {
        let f = poly(&coeffs);
        prop_assume!(!f.is_zero());
        let space = SpaceParams::finite(2.0, alpha, m);
        let q = norm_quadrature_log(&space, &f, &QuadratureConfig::for_degree(f.degree())).unwrap();
        let exact = norm_parseval_log(&space, &f).unwrap();
        prop_assert!(((q - exact).exp() - 1.0).abs() < 1e-8, "quadrature {q} vs Parseval {exact}");
    }

    #[test]
    fn quadrature_norm_is_homogeneous(
        coeffs in coeffs_strategy(),
        p in prop::sample::select(vec![1.0, 3.0, 4.0]),
        scale in 0.01..100.0f64,
        phase in 0.0..std::f64::consts::TAU,
    ) {
        let f = poly(&coeffs);
        prop_assume!(!f.is_zero());
        let space = SpaceParams::finite(p, 1.0, 1.0);
        let cfg = QuadratureConfig::for_degree(f.degree());
        let c = Complex64::from_polar(scale, phase);
        let lhs = norm_quadrature_log(&space, &f.scale(&c), &cfg).unwrap();
        let rhs = scale.ln() + norm_quadrature_log(&space, &f, &cfg).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }

    #[test]
    fn quadrature_triangle_inequality(
        a in coeffs_strategy(),
        b in coeffs_strategy(),
        p in prop::sample::select(vec![1.0, 4.0]),
    ) {
        let (f, g) = (poly(&a), poly(&b));
        let sum = &f + &g;
        prop_assume!(!f.is_zero() && !g.is_zero() && !sum.is_zero());
        let space = SpaceParams::finite(p, 0.7, 1.5);
        let n = |h: &TaylorSeries| norm_quadrature_log(&space, h, &QuadratureConfig::for_degree(h.degree())).unwrap().exp();
        prop_assert!(n(&sum) <= (n(&f) + n(&g)) * (1.0 + 1e-9));
    }

    #[test]
    fn tail_radius_grows_with_degree(deg in 0usize..80, p in 1.0..5.0f64, m in 0.5..3.0f64) {
        let space = SpaceParams::finite(p, 1.0, m);
        let r0 = tail_radius(&space, deg, 1e-12).unwrap();
        let r1 = tail_radius(&space, deg + 1, 1e-12).unwrap();
        prop_assert!(r1 >= r0 * (1.0 - 0.06));
    }
}

#[test]
fn gaussian_space_reproduces_classical_fock_norms() {
    let space = SpaceParams::finite(2.0, 0.5, 2.0);
    for n in 0..=200 {
        let lhs = 2.0 * monomial_norm_log(&space, n).unwrap();
        let rhs = std::f64::consts::PI.ln() + ln_factorial(n as u64);
        assert!((lhs - rhs).abs() < 1e-10, "n = {n}");
    }
}

#[test]
fn sup_grid_finds_closed_form_monomial_norm() {
    for (alpha, m) in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.7)] {
        let space = SpaceParams::sup(alpha, m);
        for n in [0usize, 1, 5, 17, 40] {
            let f = TaylorSeries::monomial(n, Complex64::new(1.0, 0.0));
            let grid = norm_sup(&space, &f, &SupGrid::default()).unwrap().log_value;
            let exact = monomial_norm_sup_log(&space, n).unwrap();
            assert!(grid <= exact + 1e-12 && exact - grid < 1e-9, "alpha {alpha} m {m} n {n}: {grid} vs {exact}");
        }
    }
}

#[test]
fn asymptotic_gap_has_no_trend() {
    for (p, alpha, m) in [(2.0, 1.0, 1.0), (1.0, 0.5, 2.0), (4.0, 2.0, 0.5)] {
        let space = SpaceParams::finite(p, alpha, m);
        let gap = |n: usize| monomial_norm_log(&space, n).unwrap() - monomial_norm_asymptotic_log(&space, n).unwrap();
        let (early, late) = (gap(250), gap(500));
        assert!((late - early).abs() < 0.02, "{space}: {early} -> {late}");
    }
}
