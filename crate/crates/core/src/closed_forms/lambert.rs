//! Principal branch of the product log `W₀`, plus a log-argument variant
//! for arguments of the form `e^y` that would overflow a double.

use std::f64::consts::E;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 64;
const BRANCH_POINT: f64 = -1.0 / E;

/// `w` with `w·e^w = x`, `w ≥ -1`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("x", x, "x ≥ -1/e"));
    }
    if x < BRANCH_POINT {
        // allow rounding of -1/e itself
        if x > BRANCH_POINT - 4.0 * f64::EPSILON {
            return Ok(-1.0);
        }
        return Err(Error::domain("x", x, "x ≥ -1/e"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if x > 1e100 {
        return Ok(lambert_w0_of_exp(x.ln()));
    }

    let mut w = initial_guess(x);
    for _ in 0..MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 || f == 0.0 {
            break;
        }
        // Halley step
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w.max(-1.0))
}

fn initial_guess(x: f64) -> f64 {
    if x < -0.32 {
        // series about the branch point
        let p = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        let l = x.ln_1p();
        l * (1.0 - (1.0 + l).ln() / (2.0 + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}

/// `W₀(e^y)`, found by solving `w + ln w = y` directly when `e^y` is large.
pub fn lambert_w0_of_exp(y: f64) -> f64 {
    if y.is_nan() {
        return f64::NAN;
    }
    if y == f64::INFINITY {
        return f64::INFINITY;
    }
    if y < 1.0 {
        // e^y ∈ (0, e): no overflow, and W₀ > 0 there
        return lambert_w0(y.exp()).unwrap_or(0.0);
    }
    let ly = y.ln();
    let mut w = (y - ly + ly / y).max(f64::MIN_POSITIVE);
    for _ in 0..MAX_ITERATIONS {
        let f = w + w.ln() - y;
        // Halley on f(w) = w + ln w - y
        let d1 = 1.0 + 1.0 / w;
        let d2 = -1.0 / (w * w);
        let step = f / (d1 - 0.5 * f * d2 / d1);
        let next = w - step;
        w = if next > 0.0 { next } else { 0.5 * w };
        if step.abs() <= 4.0 * f64::EPSILON * w {
            break;
        }
    }
    w
}
