// Float helpers routed through libm so results do not depend on the host libm.

#[inline]
pub(crate) fn powi(base: f64, exp: u32) -> f64 {
    libm::pow(base, f64::from(exp))
}

#[inline]
pub(crate) fn powf(base: f64, exp: f64) -> f64 {
    libm::pow(base, exp)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
