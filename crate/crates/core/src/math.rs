//! Float functions routed through `libm` so results do not depend on whether
//! `std` happens to be linked.

pub(crate) use libm::{acosh, asin, cos, exp, fabs as abs, sqrt};

/// `a² - b²`, factored to keep precision near `|a| = |b|`.
pub(crate) fn diff_of_squares(a: f64, b: f64) -> f64 {
    (abs(a) - abs(b)) * (abs(a) + abs(b))
}

pub(crate) fn hypot(re: f64, im: f64) -> f64 {
    libm::hypot(re, im)
}
