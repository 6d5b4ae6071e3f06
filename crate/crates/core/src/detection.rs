//! Neyman–Pearson detection bound for pure states, the Kennedy nulling
//! receiver, and minimum-perturbation root solving.

use num_complex::Complex64;

use crate::closed_forms::ProbeSpec;
use crate::error::{Error, Result};
use crate::fock::{self, FockOperator, FockVector, TruncationConfig};

/// Default absolute tolerance for threshold roots.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// Points on the geometric bracketing grid.
const BRACKET_POINTS: usize = 64;
/// Lowest grid point as a fraction of the search bound.
const BRACKET_FLOOR: f64 = 1e-9;

const THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NPResult {
    /// False-alarm probability.
    pub p01: f64,
    /// Detection probability.
    pub p11: f64,
    pub kappa: f64,
}

/// On/off detector: quantum efficiency and per-gate dark-count probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    pub eta: f64,
    pub p_dark: f64,
}

impl DetectorModel {
    pub fn new(eta: f64, p_dark: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::domain("eta", eta, "0 ≤ eta ≤ 1"));
        }
        if !(0.0..1.0).contains(&p_dark) {
            return Err(Error::domain("p_dark", p_dark, "0 ≤ p_dark < 1"));
        }
        Ok(DetectorModel { eta, p_dark })
    }

    pub fn ideal() -> Self {
        DetectorModel {
            eta: 1.0,
            p_dark: 0.0,
        }
    }

    /// Diagonal of the no-click element `(1 - p_dark) Σ (1-η)ⁿ |n⟩⟨n|`.
    pub fn no_click_weights(&self, dim: usize) -> Vec<f64> {
        let miss = 1.0 - self.eta;
        (0..dim)
            .map(|n| (1.0 - self.p_dark) * miss.powi(n as i32))
            .collect()
    }

    fn click_probability(&self, psi: &FockVector) -> f64 {
        let no_click: f64 = self
            .no_click_weights(psi.dim())
            .iter()
            .zip(psi.photon_distribution())
            .map(|(w, p)| w * p)
            .sum();
        (1.0 - no_click).clamp(0.0, 1.0)
    }
}

impl Default for DetectorModel {
    fn default() -> Self {
        DetectorModel::ideal()
    }
}

/// Scalar perturbation `g` acting through its overlap `κ(g)`.
pub struct PerturbationSpec<F>
where
    F: Fn(f64) -> f64,
{
    pub kappa: F,
    /// Upper end of the search interval `(0, g_max]`.
    pub g_max: f64,
}

impl<F: Fn(f64) -> f64> PerturbationSpec<F> {
    pub fn new(kappa: F, g_max: f64) -> Result<Self> {
        if !(g_max > 0.0 && g_max.is_finite()) {
            return Err(Error::domain("g_max", g_max, "finite g_max > 0"));
        }
        Ok(PerturbationSpec { kappa, g_max })
    }
}

fn unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::domain(name, value, "value in [0, 1]"));
    }
    Ok(())
}

/// Largest detection probability at false-alarm rate `p01` for two pure
/// states with overlap `kappa`.
pub fn np_detection_probability(p01: f64, kappa: f64) -> Result<f64> {
    unit_interval("p01", p01)?;
    unit_interval("kappa", kappa)?;
    if p01 >= kappa {
        return Ok(1.0);
    }
    let amp = (p01 * kappa).sqrt() + ((1.0 - p01) * (1.0 - kappa)).sqrt();
    Ok((amp * amp).min(1.0))
}

/// Projecting on `|ψ₀⟩` never false-alarms and detects with `1 - κ`.
pub fn kennedy_ideal(kappa: f64) -> Result<NPResult> {
    unit_interval("kappa", kappa)?;
    Ok(NPResult {
        p01: 0.0,
        p11: 1.0 - kappa,
        kappa,
    })
}

/// Kennedy receiver for one probe, simulated in the truncated Fock space:
/// the probe's displacement and squeezing are undone so the unperturbed
/// state returns to vacuum, then an on/off detector counts.
#[derive(Debug, Clone)]
pub struct KennedyReceiver {
    probe: ProbeSpec,
    cfg: TruncationConfig,
    psi0: FockVector,
    null: FockOperator,
}

impl KennedyReceiver {
    pub fn new(probe: &ProbeSpec, cfg: &TruncationConfig) -> Result<Self> {
        let displace = fock::displacement_operator(Complex64::new(probe.alpha, 0.0), cfg)?;
        let squeeze = fock::squeeze_operator(-probe.r, cfg)?;
        let prepare = displace.compose(&squeeze)?;
        let psi0 = prepare.apply(&FockVector::vacuum(cfg.dim)?)?;
        Ok(KennedyReceiver {
            probe: *probe,
            cfg: *cfg,
            psi0,
            null: prepare.adjoint(),
        })
    }

    pub fn probe(&self) -> &ProbeSpec {
        &self.probe
    }

    /// Unperturbed probe state.
    pub fn probe_state(&self) -> &FockVector {
        &self.psi0
    }

    /// Probabilities for a phase shift `phi`. The returned `kappa` is the
    /// Fock-space overlap of the two hypotheses.
    pub fn measure(&self, phi: f64, det: &DetectorModel) -> Result<NPResult> {
        let psi1 = fock::phase_shift_operator(phi, &self.cfg)?.apply(&self.psi0)?;
        let residual0 = self.null.apply(&self.psi0)?;
        let residual1 = self.null.apply(&psi1)?;
        Ok(NPResult {
            p01: det.click_probability(&residual0),
            p11: det.click_probability(&residual1),
            kappa: fock::overlap(&self.psi0, &psi1)?.norm_sqr().min(1.0),
        })
    }
}

/// One-shot [`KennedyReceiver`] measurement.
pub fn kennedy_receiver(
    probe: &ProbeSpec,
    phi: f64,
    det: &DetectorModel,
    cfg: &TruncationConfig,
) -> Result<NPResult> {
    KennedyReceiver::new(probe, cfg)?.measure(phi, det)
}

/// Smallest `g` in `(0, g_max]` where the optimal detection probability at
/// false-alarm rate `p01` reaches 1/2.
///
/// The interval is bracketed on a geometric grid and refined by bisection;
/// `κ` may be non-monotone far from zero, so the first crossing wins.
pub fn np_minimum_perturbation<F>(spec: &PerturbationSpec<F>, p01: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    unit_interval("p01", p01)?;
    let excess = |g: f64| -> Result<f64> {
        let kappa = (spec.kappa)(g).clamp(0.0, 1.0);
        Ok(np_detection_probability(p01, kappa)? - THRESHOLD)
    };
    if excess(0.0)? >= 0.0 {
        return Err(Error::DegenerateThreshold { p01 });
    }

    let mut lo = 0.0;
    for g in geometric_grid(spec.g_max * BRACKET_FLOOR, spec.g_max, BRACKET_POINTS) {
        if excess(g)? >= 0.0 {
            return bisect(excess, lo, g, tol);
        }
        lo = g;
    }
    Err(Error::NoCrossing { g_max: spec.g_max })
}

/// `f(lo) < 0 ≤ f(hi)`.
fn bisect<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_hi = f(hi)?;
    let mut f_lo = f(lo)?;
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid >= 0.0 {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
        if hi - lo <= tol && f_hi.abs().min(f_lo.abs()) < tol {
            break;
        }
    }
    Ok(if f_hi.abs() <= f_lo.abs() { hi } else { lo })
}

/// `points` values from `lo` to `hi` inclusive, evenly spaced in log.
pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let ratio = (hi / lo).ln() / (points - 1) as f64;
            (0..points)
                .map(|k| {
                    if k == points - 1 {
                        hi
                    } else {
                        lo * (ratio * k as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Poisson probability of at least one dark count in a gate.
pub fn dark_probability_from_rate(dark_rate: f64, gate: f64) -> Result<f64> {
    if !(dark_rate >= 0.0 && dark_rate.is_finite()) {
        return Err(Error::domain("dark_rate", dark_rate, "finite rate ≥ 0"));
    }
    if !(gate > 0.0 && gate.is_finite()) {
        return Err(Error::domain("gate", gate, "finite gate > 0"));
    }
    Ok(-(-dark_rate * gate).exp_m1())
}
