//! Dense complex helpers: matrix exponential and exponential-times-vector.
//!
//! Both use scaling followed by a truncated Taylor series. The generators
//! handled here are anti-Hermitian with moderate norm, where Taylor on a
//! scaled matrix is accurate to machine precision.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

const SCALED_NORM: f64 = 0.5;
const MAX_TERMS: usize = 40;

pub(crate) fn one_norm(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// exp(A) for a square complex matrix.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / 2f64.powi(squarings));

    let mut result = Array2::<Complex64>::eye(n);
    let mut term = Array2::<Complex64>::eye(n);
    for k in 1..=MAX_TERMS {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        result += &term;
        if one_norm(&term) < f64::EPSILON * 1e-3 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// exp(G)·v where G is given only through its action `apply(x, out)`
/// (`out = G x`) and an upper bound on its operator norm.
pub fn expm_apply<F>(apply: F, norm_bound: f64, v: &Array1<Complex64>) -> Array1<Complex64>
where
    F: Fn(&Array1<Complex64>, &mut Array1<Complex64>),
{
    let steps = (norm_bound / SCALED_NORM).ceil().max(1.0) as usize;
    let h = 1.0 / steps as f64;
    let mut state = v.clone();
    let mut scratch = Array1::<Complex64>::zeros(v.len());
    for _ in 0..steps {
        let mut term = state.clone();
        let mut acc = state.clone();
        for k in 1..=MAX_TERMS {
            apply(&term, &mut scratch);
            let scale = h / k as f64;
            term.zip_mut_with(&scratch, |t, s| *t = *s * scale);
            acc += &term;
            let size: f64 = term.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if size < f64::EPSILON * 1e-3 {
                break;
            }
        }
        state = acc;
    }
    state
}

pub(crate) fn adjoint(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|z| z.conj())
}
