//! Principal branch of the Lambert W function on `[0, ∞)`.

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 50;
/// Above this, `w e^w` would overflow during Halley steps; iterate on
/// `w + ln w = ln x` instead.
const LOG_FORM_THRESHOLD: f64 = 1e100;

/// Returns `w >= 0` with `w e^w = x`, by Halley iteration started at
/// `ln(1 + x)`.
pub fn lambert_w(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::NegativeArgument(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if x > LOG_FORM_THRESHOLD {
        return Ok(log_form(x.ln()));
    }
    let mut w = x.ln_1p();
    for _ in 0..MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(1e-300) {
            break;
        }
    }
    Ok(w.max(0.0))
}

/// `W(e^y)` without overflowing for large `y`.
pub fn lambert_w_exp(y: f64) -> f64 {
    if y < LOG_FORM_THRESHOLD.ln() {
        return lambert_w(y.exp()).expect("exponential is non-negative");
    }
    log_form(y)
}

/// Newton on `w + ln w = y` for large `y`.
fn log_form(y: f64) -> f64 {
    let mut w = y - y.ln();
    for _ in 0..MAX_ITERATIONS {
        let step = (w + w.ln() - y) / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w {
            break;
        }
    }
    w
}
