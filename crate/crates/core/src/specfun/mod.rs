//! Special functions used by the exact solutions: Airy functions of real
//! argument, the complex Gamma function, and modified Bessel functions of
//! purely imaginary order. Double precision throughout.

mod airy;
mod bessel;
mod gamma;

pub use airy::{airy, AiryPair, AIRY_MAX_ARG};
pub use bessel::{
    bessel_i_imag_order, bessel_i_imag_order_with_derivative, bessel_k_imag_order,
    bessel_k_imag_order_with_derivative, MAX_ARGUMENT as BESSEL_MAX_ARGUMENT,
    MAX_ORDER as BESSEL_MAX_ORDER,
};
pub use gamma::gamma_complex;

/// Complex amplitudes and Γ(z) values.
pub type ComplexValue = num_complex::Complex64;

#[doc(hidden)]
pub fn bessel_i_series_truncated(
    mu: f64,
    x: f64,
    max_terms: usize,
) -> crate::Result<(ComplexValue, ComplexValue)> {
    bessel::i_series(mu, x, max_terms)
}
