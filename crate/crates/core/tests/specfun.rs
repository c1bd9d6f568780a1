use deltacouple::specfun::{airy, bessel_i_imag_order_with_derivative, bessel_k_imag_order_with_derivative, gamma_complex};
use deltacouple::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn airy_wronskian(x in -10.0..=10.0f64) {
        let a = airy(x).unwrap();
        prop_assert!((a.ai * a.bi_prime - a.ai_prime * a.bi - std::f64::consts::FRAC_1_PI).abs() < 1e-12);
    }

    #[test]
    fn bessel_wronskian(mu in 0.05..10.0f64, x in 0.2..20.0f64) {
        let (i, di) = bessel_i_imag_order_with_derivative(mu, x).unwrap();
        let (k, dk) = bessel_k_imag_order_with_derivative(mu, x).unwrap();
        let w = i * dk - di * k;
        prop_assert!((w + 1.0 / x).norm() < 1e-8 * i.norm().max(1.0) * k.abs().max(1.0), "{w}");
    }

    #[test]
    fn gamma_modulus_on_the_line(y in 0.1..5.0f64) {
        let g = gamma_complex(Complex64::new(1.0, y)).unwrap();
        let py = std::f64::consts::PI * y;
        prop_assert!((g.norm_sqr() - py / py.sinh()).abs() < 1e-10);
    }

    #[test]
    fn gamma_recurrence(re in -4.5..6.0f64, im in 0.1..8.0f64) {
        let z = Complex64::new(re, im);
        let lhs = gamma_complex(z + 1.0).unwrap();
        let rhs = z * gamma_complex(z).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-11 * lhs.norm().max(1.0));
    }
}

#[test]
fn airy_reference_values() {
    let a = airy(0.0).unwrap();
    assert!((a.ai - 0.355_028_053_887_817_2).abs() < 1e-15);
    assert!((a.bi - 0.614_926_627_446_000_7).abs() < 1e-15);
    let b = airy(-5.0).unwrap();
    assert!((b.ai - 0.350_761_009_024_114_2).abs() < 1e-13);
}
