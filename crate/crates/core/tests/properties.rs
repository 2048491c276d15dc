use gapline::bounds::proj::{
    c_of_t, integral_constants, proj_bound_integral, proj_bound_sl, q_of_t, sign_bound_quadrature,
};
use gapline::bounds::rates::fuchs_rate;
use gapline::projector::{
    decay_profile, first_below, projector_diagnostics, sign_from_projector, sign_matrix, spectral_projector,
    DecaySource,
};
use gapline::quadrature::{Integrator, SingularEnds};
use gapline::{
    band_reduce, distinct_magnitudes, generate, jacobi_eigh, normalize_spectrum, BandedHermitian, Mat, SeededRng,
};
use proptest::prelude::*;

fn spectrum_strategy() -> impl Strategy<Value = (f64, Vec<f64>)> {
    (0.05f64..0.6, 6usize..40).prop_flat_map(|(a, n)| {
        let mags = proptest::collection::vec((a..1.0, any::<bool>()), n - 2);
        (Just(a), mags).prop_map(move |(a, mags)| {
            let mut v: Vec<f64> = mags.into_iter().map(|(x, neg)| if neg { -x } else { x }).collect();
            v.push(-a);
            v.push(1.0);
            v.sort_by(f64::total_cmp);
            (a, v)
        })
    })
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalization_round_trip(
        lo in -50.0f64..-1.0,
        w1 in 0.1f64..10.0,
        gap in 0.1f64..10.0,
        w2 in 0.1f64..10.0,
        t in 0.0f64..1.0,
    ) {
        let a1 = lo + w1;
        let a2 = a1 + gap;
        let b2 = a2 + w2;
        let mu = a1 + t * gap;
        let spec = normalize_spectrum(lo, a1, a2, b2, mu).unwrap();
        for x in [lo, a1, a2, b2, 0.5 * (lo + b2)] {
            let back = spec.invert(spec.apply(x));
            prop_assert!((back - x).abs() <= 1e-14 * x.abs().max(1.0));
        }
        let again = normalize_spectrum(-spec.b1(), -spec.a(), spec.a(), spec.b2(), 0.0).unwrap();
        prop_assert!((again.scale() - 1.0).abs() <= 1e-15);
        prop_assert!(again.shift().abs() <= 1e-15);
    }

    #[test]
    fn ladder_rungs_shrink((_a, eigs) in spectrum_strategy()) {
        let ladder = distinct_magnitudes(&eigs, 1e-10).unwrap();
        prop_assert_eq!(ladder.b(0).unwrap(), ladder.largest());
        for ell in 1..ladder.nu() {
            prop_assert!(ladder.b(ell).unwrap() < ladder.b(ell - 1).unwrap());
        }
    }

    #[test]
    fn band_reduce_is_orthogonal(n in 4usize..24, m in 1usize..4, seed in 0u64..1000) {
        let a = Mat::from_fn(n, n, |i, j| {
            let (i, j) = (i.min(j) as f64, i.max(j) as f64);
            ((i + 1.0) * 0.37 + (j + 2.0) * 0.11 + seed as f64).sin()
        });
        let lambda_a = sorted(jacobi_eigh(&a).unwrap().values);
        let h = BandedHermitian::from_dense(a.clone()).unwrap();
        let r = band_reduce(h, m).unwrap();
        prop_assert_eq!(r.band_violations(), 0);
        prop_assert!(r.bandwidth() <= m);
        let rel = |x: f64, y: f64| (x - y).abs() <= 1e-10 * y.abs().max(1.0);
        prop_assert!(rel(r.matrix().trace(), a.trace()));
        prop_assert!(rel(r.matrix().frobenius_norm(), a.frobenius_norm()));
        let lambda_r = sorted(jacobi_eigh(r.matrix()).unwrap().values);
        for (x, y) in lambda_r.iter().zip(&lambda_a) {
            prop_assert!(rel(*x, *y));
        }
    }

    #[test]
    fn generate_is_deterministic_and_banded(((_a, eigs), m, seed) in (spectrum_strategy(), 1usize..6, any::<u64>())) {
        let h1 = generate(&eigs, m, &mut SeededRng::new(seed)).unwrap();
        let h2 = generate(&eigs, m, &mut SeededRng::new(seed)).unwrap();
        prop_assert_eq!(h1.matrix().as_slice(), h2.matrix().as_slice());
        let dense = h1.matrix();
        for j in 0..dense.cols() {
            for i in 0..dense.rows() {
                if i.abs_diff(j) > m {
                    prop_assert_eq!(dense[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn projector_invariants(((_a, eigs), m, seed) in (spectrum_strategy(), 1usize..6, any::<u64>())) {
        let h = generate(&eigs, m, &mut SeededRng::new(seed)).unwrap();
        let n = eigs.len();
        let proj = spectral_projector(&h, 0.0).unwrap();
        let d = projector_diagnostics(&proj.p);
        prop_assert!(d.idempotency <= 1e-10 * n as f64);
        prop_assert_eq!(d.asymmetry, 0.0);
        let n_e = eigs.iter().filter(|&&x| x < 0.0).count();
        prop_assert_eq!(d.trace.round() as usize, n_e);
        let profile = decay_profile(&proj.p, DecaySource::Projector).curve;
        prop_assert!(profile.iter().all(|&v| (0.0..=1.0 + 1e-12).contains(&v)));
        let s = sign_matrix(&h).unwrap();
        let s2 = sign_from_projector(&proj.p);
        prop_assert_eq!(s.as_slice(), s2.as_slice());
    }

    #[test]
    fn sl_at_zero_is_the_integral_bound((a, eigs) in spectrum_strategy(), m in 1usize..30, k in 0usize..400) {
        let ladder = distinct_magnitudes(&eigs, 1e-10).unwrap();
        let sl = proj_bound_sl(&ladder, a, m, k, 0).unwrap();
        prop_assert_eq!(sl, proj_bound_integral(a, ladder.largest(), m, k).unwrap());
    }

    #[test]
    fn q_and_c_decrease_in_t(a in 0.01f64..0.9, t in 0.0f64..50.0, dt in 1e-3f64..10.0) {
        prop_assert!(q_of_t(a, 1.0, t + dt) < q_of_t(a, 1.0, t));
        prop_assert!(c_of_t(a, 1.0, t + dt) <= c_of_t(a, 1.0, t));
    }

    #[test]
    fn q_hat_decreases_along_the_ladder((a, eigs) in spectrum_strategy()) {
        let ladder = distinct_magnitudes(&eigs, 1e-10).unwrap();
        let q = |b: f64| (b - a) / (b + a);
        for ell in 1..ladder.nu() {
            prop_assert!(q(ladder.b(ell).unwrap()) < q(ladder.b(ell - 1).unwrap()));
        }
    }

    #[test]
    fn quadrature_below_closed_form(a in 0.05f64..0.8, m in 1usize..25, extra in 0usize..400) {
        let k = m + extra;
        let quad = sign_bound_quadrature(a, 1.0, m, k, 1e-10).unwrap();
        let closed = 2.0 * proj_bound_integral(a, 1.0, m, k).unwrap();
        prop_assert!(quad <= closed * (1.0 + 1e-10), "k={} quad={} closed={}", k, quad, closed);
    }

    #[test]
    fn b2_decade_spacing(a in 0.05f64..0.8, m in 1usize..30, e in 1i32..6) {
        let kmax = 20000;
        let curve: Vec<f64> = (0..=kmax).map(|k| proj_bound_integral(a, 1.0, m, k).unwrap().min(1.0)).collect();
        let eps = 10f64.powi(-e);
        let k1 = first_below(&curve, eps).unwrap() as i64;
        let k2 = first_below(&curve, eps / 10.0).unwrap() as i64;
        let (_, q_hat) = integral_constants(a, 1.0);
        let predicted = (2.0 * m as f64 * 10f64.ln() / (1.0 / q_hat).ln()).round() as i64;
        prop_assert!((k2 - k1 - predicted).abs() <= 1, "{} vs {}", k2 - k1, predicted);
    }

    #[test]
    fn quadrature_error_estimates_hold(p in 0.0f64..6.0, c in 0.1f64..5.0) {
        let integ = Integrator::with_tol(1e-10);
        // ∫_0^c x^p dx
        let r = integ.integrate(|x| x.powf(p), 0.0, c).unwrap();
        let exact = c.powf(p + 1.0) / (p + 1.0);
        prop_assert!((r.value - exact).abs() <= r.est_error.max(1e-14 * exact));
        // ∫_0^c x^(-1/2) dx with the weight absorbed
        let s = integ.integrate_sqrt_singular(|_| 1.0, 0.0, c, SingularEnds::Left).unwrap();
        let exact = 2.0 * c.sqrt();
        prop_assert!((s.value - exact).abs() <= s.est_error.max(1e-14 * exact));
        let doubled = Integrator { initial_panels: 2 * integ.initial_panels, ..integ };
        let r2 = doubled.integrate(|x| x.powf(p), 0.0, c).unwrap();
        prop_assert!((r2.value - r.value).abs() <= 1e-10 * r.value.abs().max(1.0));
    }
}

#[test]
fn fuchs_symmetric_reduction() {
    for (a, b) in [(0.1, 1.0), (0.3, 1.0), (0.5, 2.0)] {
        let eta = fuchs_rate(a, b, b, 1e-12).unwrap().eta;
        let expect = 0.5 * ((b + a) / (b - a)).ln();
        assert!((eta - expect).abs() <= 1e-6, "a={a} b={b}: {eta} vs {expect}");
    }
}

/// Fixed-seed regression: the exact truncation threshold lands on a multiple of m.
#[test]
fn exact_threshold_on_multiples_of_m() {
    let n = 400;
    let half = n / 2;
    let eigs: Vec<f64> = (0..n)
        .map(|i| {
            let t = (i % half) as f64 / (half - 1) as f64;
            if i < half {
                -1.0 + 0.7 * t
            } else {
                0.3 + 0.7 * t
            }
        })
        .collect();
    for (m, seed) in [(10, 1), (20, 2), (20, 42)] {
        let h = generate(&eigs, m, &mut SeededRng::new(seed)).unwrap();
        let p = spectral_projector(&h, 0.0).unwrap().p;
        let d = decay_profile(&p, DecaySource::Projector).curve;
        for e in 1..=4 {
            let w = gapline::projector::truncation_bandwidth(&d, 10f64.powi(-e)).unwrap();
            assert_eq!(w % m, 0, "m={m} seed={seed} eps=1e-{e}: bandwidth {w}");
        }
    }
}
