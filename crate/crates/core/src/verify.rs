//! Closed forms against the truncated Fock-space simulation.

use crate::closed_forms::{kappa_squeezed_exact, ProbeSpec};
use crate::detection::{np_detection_probability, DetectorModel, KennedyReceiver};
use crate::error::{Error, Result};
use crate::fock::TruncationConfig;

pub const GRID_ALPHA: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const GRID_R: [f64; 3] = [0.0, 0.3, 0.8];
pub const GRID_PHI: [f64; 4] = [0.0, 0.01, 0.1, 0.5];

/// Default pass threshold on `|analytic - oracle|`.
pub const VERIFY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    /// Analytic overlap vs Fock-space overlap.
    Overlap,
    /// Bound at zero false alarm vs simulated ideal receiver.
    KennedyDetection,
    /// Zero vs simulated ideal-receiver false alarm.
    KennedyFalseAlarm,
}

impl Check {
    pub fn as_str(&self) -> &'static str {
        match self {
            Check::Overlap => "kappa_fock",
            Check::KennedyDetection => "kennedy_p11",
            Check::KennedyFalseAlarm => "kennedy_p01",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyRow {
    pub check: Check,
    pub alpha: f64,
    pub r: f64,
    pub phi: f64,
    pub analytic: f64,
    /// `None` when the simulation could not run at this truncation.
    pub oracle: Option<f64>,
    pub pass: bool,
}

impl VerifyRow {
    pub fn abs_err(&self) -> Option<f64> {
        self.oracle.map(|o| (self.analytic - o).abs())
    }
}

/// Runs every check over the standard grid.
///
/// A truncation too small for a probe fails that probe's rows rather than
/// aborting the suite.
pub fn run_oracle_suite(cfg: &TruncationConfig, tol: f64) -> Result<Vec<VerifyRow>> {
    cfg.validate()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("tol", tol, "tol > 0"));
    }
    let mut rows = Vec::new();
    for &alpha in &GRID_ALPHA {
        for &r in &GRID_R {
            let probe = ProbeSpec::new(alpha, r)?;
            let receiver = match KennedyReceiver::new(&probe, cfg) {
                Ok(rx) => Some(rx),
                Err(Error::Truncation { .. }) => None,
                Err(e) => return Err(e),
            };
            for &phi in &GRID_PHI {
                let kappa = kappa_squeezed_exact(&probe, phi);
                let measured = receiver
                    .as_ref()
                    .map(|rx| rx.measure(phi, &DetectorModel::ideal()))
                    .transpose()?;
                let expected = [
                    (Check::Overlap, kappa, measured.map(|m| m.kappa)),
                    (
                        Check::KennedyDetection,
                        np_detection_probability(0.0, kappa)?,
                        measured.map(|m| m.p11),
                    ),
                    (Check::KennedyFalseAlarm, 0.0, measured.map(|m| m.p01)),
                ];
                for (check, analytic, oracle) in expected {
                    let pass = oracle.is_some_and(|o| (analytic - o).abs() < tol);
                    rows.push(VerifyRow {
                        check,
                        alpha,
                        r,
                        phi,
                        analytic,
                        oracle,
                        pass,
                    });
                }
            }
        }
    }
    Ok(rows)
}
