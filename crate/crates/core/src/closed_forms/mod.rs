//! Analytic overlaps and minimum detectable phase shifts for the probe
//! family `D(α)S(-r)|0⟩` under the phase shift `exp(i n φ)`.
//!
//! The minimum detectable phase is where the ideal receiver's detection
//! probability `1 - κ(φ)` reaches one half.

mod lambert;

pub use lambert::{lambert_w0, lambert_w0_of_exp};

use std::f64::consts::LN_2;
use std::fmt;

use crate::error::{Error, Result};

/// Below this value of `e^{2r}α²/sinh²2r` the product-log form is replaced
/// by its squeezed-vacuum limit.
const VACUUM_LIMIT_GUARD: f64 = 1e-12;

/// Real coherent amplitude `alpha` and squeezing parameter `r` of
/// `D(α)S(-r)|0⟩`. A coherent probe has `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSpec {
    pub alpha: f64,
    pub r: f64,
}

impl ProbeSpec {
    pub fn new(alpha: f64, r: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::domain("alpha", alpha, "finite alpha ≥ 0"));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::domain("r", r, "finite r ≥ 0"));
        }
        Ok(ProbeSpec { alpha, r })
    }

    pub fn coherent(alpha: f64) -> Result<Self> {
        ProbeSpec::new(alpha, 0.0)
    }

    /// `n̄ = α²`
    pub fn n_coherent(&self) -> f64 {
        self.alpha * self.alpha
    }

    /// `m̄ = sinh²r`
    pub fn n_squeeze(&self) -> f64 {
        self.r.sinh().powi(2)
    }

    pub fn n_total(&self) -> f64 {
        self.n_coherent() + self.n_squeeze()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPair {
    pub sigma1: f64,
    pub sigma2: f64,
}

impl SigmaPair {
    pub fn product(&self) -> f64 {
        self.sigma1 * self.sigma2
    }
}

/// How a minimum detectable phase was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhiMethod {
    /// `√(ln 2/⟨n⟩)`, second-order coherent result.
    ClosedFormCoherent,
    /// Product-log solution of the small-angle squeezed threshold.
    ClosedFormProductLog,
    /// `√(3/(4⟨n⟩(⟨n⟩+1)))`, all power in squeezing.
    ClosedFormSqueezedVacuum,
    /// `e^{-r}√(ln 2/n̄)`, bright-beam limit.
    ClosedFormBright,
    /// Root of the threshold condition with the exact overlap.
    NumericRootExact,
    /// Root of the threshold condition with the small-angle overlap.
    NumericRootApprox,
}

impl PhiMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhiMethod::ClosedFormCoherent => "closed_form_coherent",
            PhiMethod::ClosedFormProductLog => "closed_form_product_log",
            PhiMethod::ClosedFormSqueezedVacuum => "closed_form_squeezed_vacuum",
            PhiMethod::ClosedFormBright => "closed_form_bright",
            PhiMethod::NumericRootExact => "numeric_root_exact",
            PhiMethod::NumericRootApprox => "numeric_root_approx",
        }
    }
}

impl fmt::Display for PhiMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiMinResult {
    /// Radians.
    pub phi_m: f64,
    pub method: PhiMethod,
    pub probe: ProbeSpec,
}

/// `exp[-2α²(1 - cos φ)]`
pub fn kappa_coherent(alpha: f64, phi: f64) -> f64 {
    let half = (0.5 * phi).sin();
    (-4.0 * alpha * alpha * half * half).exp()
}

/// `σ₁,₂ = ½(e^{2r}(1 ∓ cos φ) + e^{-2r}(1 ± cos φ))`
pub fn sigma_pair(r: f64, phi: f64) -> SigmaPair {
    let (up, down) = ((2.0 * r).exp(), (-2.0 * r).exp());
    // 1 - cos φ without cancellation
    let one_minus = 2.0 * (0.5 * phi).sin().powi(2);
    let one_plus = 2.0 - one_minus;
    SigmaPair {
        sigma1: 0.5 * (up * one_minus + down * one_plus),
        sigma2: 0.5 * (up * one_plus + down * one_minus),
    }
}

/// `|⟨ψ₀|exp(i n φ)|ψ₀⟩|²` for `ψ₀ = D(α)S(-r)|0⟩`, exact in φ.
pub fn kappa_squeezed_exact(probe: &ProbeSpec, phi: f64) -> f64 {
    let p = sigma_pair(probe.r, phi).product();
    let (alpha, r) = (probe.alpha, probe.r);
    // e^{4r} - e^{-4r} = 2 sinh 4r
    let bracket = 1.0 - phi.cos() / p + 2.0 * (4.0 * r).sinh() * phi.sin().powi(2) / (4.0 * p);
    let kappa = (-2.0 * (-2.0 * r).exp() * alpha * alpha * bracket).exp() / p.sqrt();
    kappa.clamp(0.0, 1.0)
}

/// Second-order (small φ) form of [`kappa_squeezed_exact`].
pub fn kappa_squeezed_approx(probe: &ProbeSpec, phi: f64) -> f64 {
    let s = (2.0 * probe.r).sinh().powi(2);
    let phi2 = phi * phi;
    let u = 1.0 + s * phi2;
    let kappa = (-(2.0 * probe.r).exp() * probe.n_coherent() * phi2 / u).exp() / u.sqrt();
    kappa.clamp(0.0, 1.0)
}

fn positive_n(n_mean: f64) -> Result<()> {
    if !(n_mean > 0.0 && n_mean.is_finite()) {
        return Err(Error::domain("n_mean", n_mean, "finite n_mean > 0"));
    }
    Ok(())
}

/// `√(ln 2/⟨n⟩)` for a coherent probe with mean photon number `n_mean`.
pub fn phi_min_coherent(n_mean: f64) -> Result<PhiMinResult> {
    positive_n(n_mean)?;
    Ok(PhiMinResult {
        phi_m: (LN_2 / n_mean).sqrt(),
        method: PhiMethod::ClosedFormCoherent,
        probe: ProbeSpec::coherent(n_mean.sqrt())?,
    })
}

/// Squeezed-probe threshold through the product log:
///
/// `φ² = (2A/(s W(z)) - 1)/s`, `s = sinh²2r`, `A = e^{2r}α²`,
/// `ln z = ln(A/2s) + 2A/s`.
///
/// `z` overflows for routine parameters, so W is taken from `ln z`.
pub fn phi_min_squeezed_closed(probe: &ProbeSpec) -> Result<PhiMinResult> {
    if probe.r <= 0.0 {
        return Err(Error::domain("r", probe.r, "r > 0"));
    }
    let s = (2.0 * probe.r).sinh().powi(2);
    let a = (2.0 * probe.r).exp() * probe.n_coherent();
    let ratio = a / s;
    if ratio < VACUUM_LIMIT_GUARD {
        return Ok(PhiMinResult {
            phi_m: 3f64.sqrt() / (2.0 * probe.r).sinh(),
            method: PhiMethod::ClosedFormSqueezedVacuum,
            probe: *probe,
        });
    }
    let ln_z = (0.5 * ratio).ln() + 2.0 * ratio;
    let w = lambert_w0_of_exp(ln_z);
    let u = 2.0 * ratio / w;
    // u - 1 = ln(4/u)/W holds at the root and keeps precision when u ≈ 1
    let u_minus_1 = if u > 2.0 { u - 1.0 } else { (4.0 / u).ln() / w };
    Ok(PhiMinResult {
        phi_m: (u_minus_1 / s).sqrt(),
        method: PhiMethod::ClosedFormProductLog,
        probe: *probe,
    })
}

/// `√(3/(4⟨n⟩(⟨n⟩+1)))`, equal to `√3/sinh 2r` with `sinh²r = ⟨n⟩`.
pub fn phi_min_squeezed_vacuum(n_mean: f64) -> Result<PhiMinResult> {
    positive_n(n_mean)?;
    Ok(PhiMinResult {
        phi_m: (3.0 / (4.0 * n_mean * (n_mean + 1.0))).sqrt(),
        method: PhiMethod::ClosedFormSqueezedVacuum,
        probe: ProbeSpec::new(0.0, n_mean.sqrt().asinh())?,
    })
}

/// `e^{-r}√(ln 2/α²)`; meant for `n̄ ≫ m̄`.
pub fn phi_min_bright(probe: &ProbeSpec) -> Result<PhiMinResult> {
    if probe.alpha <= 0.0 {
        return Err(Error::domain("alpha", probe.alpha, "alpha > 0"));
    }
    Ok(PhiMinResult {
        phi_m: (-probe.r).exp() * LN_2.sqrt() / probe.alpha,
        method: PhiMethod::ClosedFormBright,
        probe: *probe,
    })
}
