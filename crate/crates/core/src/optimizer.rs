//! Splitting a fixed mean photon number between coherent amplitude and
//! squeezing, and the sweeps over that split and over total power.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::closed_forms::{
    kappa_squeezed_approx, kappa_squeezed_exact, PhiMethod, PhiMinResult, ProbeSpec,
};
use crate::detection::{np_minimum_perturbation, PerturbationSpec, ROOT_TOLERANCE};
use crate::error::{Error, Result};

/// Points in the coarse scan that precedes golden-section refinement.
const SCAN_POINTS: usize = 33;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Which overlap the threshold condition is solved with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum KappaMode {
    #[default]
    Exact,
    /// Small-angle form.
    Approx,
}

impl KappaMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            KappaMode::Exact => "exact",
            KappaMode::Approx => "approx",
        }
    }

    pub fn kappa(&self, probe: &ProbeSpec, phi: f64) -> f64 {
        match self {
            KappaMode::Exact => kappa_squeezed_exact(probe, phi),
            KappaMode::Approx => kappa_squeezed_approx(probe, phi),
        }
    }

    fn method(&self) -> PhiMethod {
        match self {
            KappaMode::Exact => PhiMethod::NumericRootExact,
            KappaMode::Approx => PhiMethod::NumericRootApprox,
        }
    }
}

impl fmt::Display for KappaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KappaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(KappaMode::Exact),
            "approx" => Ok(KappaMode::Approx),
            other => Err(Error::Config(format!("unknown overlap mode '{other}'"))),
        }
    }
}

/// Total mean photon number and the fraction of it spent on squeezing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBudget {
    pub n_total: f64,
    pub ratio: f64,
}

impl PowerBudget {
    pub fn new(n_total: f64, ratio: f64) -> Result<Self> {
        if !(n_total > 0.0 && n_total.is_finite()) {
            return Err(Error::domain("n_total", n_total, "finite n_total > 0"));
        }
        if !(0.0..=1.0).contains(&ratio) {
            return Err(Error::domain("ratio", ratio, "0 ≤ ratio ≤ 1"));
        }
        Ok(PowerBudget { n_total, ratio })
    }

    /// `n̄ = α²`
    pub fn n_coherent(&self) -> f64 {
        (1.0 - self.ratio) * self.n_total
    }

    /// `m̄ = sinh²r`
    pub fn n_squeeze(&self) -> f64 {
        self.ratio * self.n_total
    }

    pub fn probe(&self) -> ProbeSpec {
        ProbeSpec {
            alpha: self.n_coherent().sqrt(),
            r: self.n_squeeze().sqrt().asinh(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub x: f64,
    /// `None` where the phase shift is undetectable at this power.
    pub phi_m: Option<f64>,
}

/// What a sweep varies and what it holds fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepAxis {
    /// `x` is the squeezing ratio at fixed total power.
    Ratio { n_total: f64 },
    /// `x` is the total power at fixed squeezing ratio.
    Total { ratio: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
}

impl SweepCurve {
    /// Lowest present point.
    pub fn minimum(&self) -> Option<SweepPoint> {
        self.points
            .iter()
            .filter(|p| p.phi_m.is_some())
            .min_by(|a, b| a.phi_m.partial_cmp(&b.phi_m).unwrap())
            .copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimumResult {
    pub n_total: f64,
    pub ratio_opt: f64,
    pub phi_opt: f64,
    /// Same threshold solve with all power in squeezing.
    pub phi_sv: f64,
    pub relative: f64,
}

/// Minimum detectable phase for a power split, solving `κ(φ) = 1/2`.
pub fn phi_min_at(budget: &PowerBudget, mode: KappaMode) -> Result<PhiMinResult> {
    phi_min_numeric(&budget.probe(), mode)
}

/// Solves `κ(φ) = 1/2` for one probe with the chosen overlap. Without
/// squeezing the coherent threshold is inverted in closed form.
pub fn phi_min_numeric(probe: &ProbeSpec, mode: KappaMode) -> Result<PhiMinResult> {
    if probe.r == 0.0 {
        let n = probe.n_coherent();
        let phi_m = match mode {
            KappaMode::Approx if n > 0.0 => (LN_2 / n).sqrt(),
            // exp[-2n(1 - cos φ)] = 1/2
            KappaMode::Exact if 1.0 - LN_2 / (2.0 * n) >= -1.0 => (1.0 - LN_2 / (2.0 * n)).acos(),
            _ => return Err(Error::NoCrossing { g_max: PI }),
        };
        return Ok(PhiMinResult {
            phi_m,
            method: mode.method(),
            probe: *probe,
        });
    }
    let spec = PerturbationSpec::new(|phi| mode.kappa(probe, phi), PI)?;
    let phi_m = np_minimum_perturbation(&spec, 0.0, ROOT_TOLERANCE)?;
    Ok(PhiMinResult {
        phi_m,
        method: mode.method(),
        probe: *probe,
    })
}

fn phi_or_none(n_total: f64, ratio: f64, mode: KappaMode) -> Result<Option<f64>> {
    match phi_min_at(&PowerBudget::new(n_total, ratio)?, mode) {
        Ok(res) => Ok(Some(res.phi_m)),
        Err(Error::NoCrossing { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| {
            if k == points - 1 {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (points - 1) as f64
            }
        })
        .collect()
}

/// `φ_M` over squeezing ratios `0..=1` at fixed total power.
pub fn sweep_ratio(n_total: f64, grid_size: usize, mode: KappaMode) -> Result<SweepCurve> {
    if grid_size < 3 {
        return Err(Error::Config(format!(
            "grid_size must be at least 3, got {grid_size}"
        )));
    }
    PowerBudget::new(n_total, 0.0)?;
    let points = uniform_grid(0.0, 1.0, grid_size)
        .into_iter()
        .map(|x| {
            Ok(SweepPoint {
                x,
                phi_m: phi_or_none(n_total, x, mode)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepCurve {
        axis: SweepAxis::Ratio { n_total },
        points,
    })
}

/// One curve per squeezing ratio over the given total powers.
pub fn sweep_total(n_values: &[f64], ratios: &[f64], mode: KappaMode) -> Result<Vec<SweepCurve>> {
    if n_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(
            "total photon numbers must be strictly increasing".into(),
        ));
    }
    for &n in n_values {
        PowerBudget::new(n, 0.0)?;
    }
    ratios
        .iter()
        .map(|&ratio| {
            PowerBudget::new(1.0, ratio)?;
            let points = n_values
                .iter()
                .map(|&n| {
                    Ok(SweepPoint {
                        x: n,
                        phi_m: phi_or_none(n, ratio, mode)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepCurve {
                axis: SweepAxis::Total { ratio },
                points,
            })
        })
        .collect()
}

/// Best squeezing ratio in `[0, 1]` at fixed total power.
pub fn optimize_ratio(n_total: f64, tol: f64, mode: KappaMode) -> Result<OptimumResult> {
    optimize_ratio_in(n_total, 0.0, 1.0, tol, mode)
}

/// Best squeezing ratio in `[lo, hi]`: a 33-point scan, then golden-section
/// search on the bracket around the best scan point until narrower than `tol`.
pub fn optimize_ratio_in(
    n_total: f64,
    lo: f64,
    hi: f64,
    tol: f64,
    mode: KappaMode,
) -> Result<OptimumResult> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return Err(Error::Config(format!("invalid ratio range [{lo}, {hi}]")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain("tol", tol, "tol > 0"));
    }
    let phi_sv = phi_min_at(&PowerBudget::new(n_total, 1.0)?, mode)?.phi_m;
    let eval =
        |x: f64| -> Result<f64> { Ok(phi_or_none(n_total, x, mode)?.unwrap_or(f64::INFINITY)) };

    let (ratio_opt, phi_opt) = if lo == hi {
        (lo, eval(lo)?)
    } else {
        let grid = uniform_grid(lo, hi, SCAN_POINTS);
        let values = grid.iter().map(|&x| eval(x)).collect::<Result<Vec<_>>>()?;
        let best = (0..grid.len())
            .min_by(|&a, &b| values[a].total_cmp(&values[b]))
            .unwrap();
        if !values[best].is_finite() {
            return Err(Error::NoCrossing { g_max: PI });
        }
        let a = grid[best.saturating_sub(1)];
        let b = grid[(best + 1).min(grid.len() - 1)];
        let (x, fx) = golden_section(eval, a, b, tol)?;
        if fx < values[best] {
            (x, fx)
        } else {
            (grid[best], values[best])
        }
    };
    Ok(OptimumResult {
        n_total,
        ratio_opt,
        phi_opt,
        phi_sv,
        relative: phi_opt / phi_sv,
    })
}

fn golden_section<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{phi_min_coherent, phi_min_squeezed_vacuum};

    #[test]
    fn budget_round_trip() {
        for &(n, x) in &[(10.0, 0.0), (10.0, 0.55), (1e3, 1.0), (0.3, 0.2)] {
            let b = PowerBudget::new(n, x).unwrap();
            let p = b.probe();
            assert!((p.n_total() - n).abs() < 1e-12 * n.max(1.0));
            assert!((p.n_squeeze() - b.n_squeeze()).abs() < 1e-12 * n.max(1.0));
        }
        assert!(PowerBudget::new(0.0, 0.5).is_err());
        assert!(PowerBudget::new(1.0, 1.5).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("exact".parse::<KappaMode>().unwrap(), KappaMode::Exact);
        assert_eq!("approx".parse::<KappaMode>().unwrap(), KappaMode::Approx);
        assert!("small_angle".parse::<KappaMode>().is_err());
    }

    #[test]
    fn endpoints_at_ten_photons() {
        let coh = phi_min_at(&PowerBudget::new(10.0, 0.0).unwrap(), KappaMode::Approx).unwrap();
        assert!((coh.phi_m - (LN_2 / 10.0).sqrt()).abs() < 1e-15);
        let sv = phi_min_at(&PowerBudget::new(10.0, 1.0).unwrap(), KappaMode::Approx).unwrap();
        assert!((sv.phi_m - (3.0f64 / 440.0).sqrt()).abs() < ROOT_TOLERANCE);
        assert!((sv.phi_m - 0.082_572_282_384_477_04).abs() < 1e-10);
        let sv_exact = phi_min_at(&PowerBudget::new(10.0, 1.0).unwrap(), KappaMode::Exact).unwrap();
        assert!(((sv_exact.phi_m - sv.phi_m) / sv.phi_m).abs() < 0.02);
        assert_eq!(sv_exact.method, PhiMethod::NumericRootExact);
    }

    #[test]
    fn coherent_exact_inversion_and_no_crossing() {
        let res = phi_min_at(&PowerBudget::new(10.0, 0.0).unwrap(), KappaMode::Exact).unwrap();
        assert!((res.phi_m - (1.0 - LN_2 / 20.0).acos()).abs() < 1e-15);
        assert!(matches!(
            phi_min_at(&PowerBudget::new(0.1, 0.0).unwrap(), KappaMode::Exact),
            Err(Error::NoCrossing { .. })
        ));
    }

    #[test]
    fn sweep_grid_construction() {
        let curve = sweep_ratio(10.0, 3, KappaMode::Exact).unwrap();
        let xs: Vec<f64> = curve.points.iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![0.0, 0.5, 1.0]);
        assert!(sweep_ratio(10.0, 2, KappaMode::Exact).is_err());
    }

    #[test]
    fn sweep_endpoints_match_closed_forms() {
        let curve = sweep_ratio(10.0, 11, KappaMode::Approx).unwrap();
        let first = curve.points.first().unwrap().phi_m.unwrap();
        let last = curve.points.last().unwrap().phi_m.unwrap();
        assert!((first - phi_min_coherent(10.0).unwrap().phi_m).abs() < 1e-15);
        assert!((last - phi_min_squeezed_vacuum(10.0).unwrap().phi_m).abs() < ROOT_TOLERANCE);
    }

    #[test]
    fn sweep_marks_undetectable_points_absent() {
        let curve = sweep_ratio(0.1, 5, KappaMode::Exact).unwrap();
        assert_eq!(curve.points[0].phi_m, None);
    }

    #[test]
    fn interior_minimum_at_ten_photons() {
        let curve = sweep_ratio(10.0, 41, KappaMode::Exact).unwrap();
        let min = curve.minimum().unwrap();
        let ends = curve.points[0]
            .phi_m
            .unwrap()
            .min(curve.points[40].phi_m.unwrap());
        assert!(min.phi_m.unwrap() < ends);
        assert!(min.x > 0.0 && min.x < 1.0);
    }

    #[test]
    fn optimum_no_worse_than_pure_strategies() {
        for mode in [KappaMode::Exact, KappaMode::Approx] {
            let opt = optimize_ratio(10.0, 1e-6, mode).unwrap();
            let at0 = phi_min_at(&PowerBudget::new(10.0, 0.0).unwrap(), mode)
                .unwrap()
                .phi_m;
            assert!(opt.phi_opt <= at0);
            assert!(opt.phi_opt <= opt.phi_sv);
            assert!(opt.relative <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn optimum_is_local_minimum() {
        let tol = 1e-6;
        let opt = optimize_ratio(10.0, tol, KappaMode::Exact).unwrap();
        for x in [opt.ratio_opt - tol, opt.ratio_opt + tol] {
            let phi = phi_min_at(&PowerBudget::new(10.0, x).unwrap(), KappaMode::Exact)
                .unwrap()
                .phi_m;
            assert!(phi >= opt.phi_opt - ROOT_TOLERANCE);
        }
    }

    #[test]
    fn degenerate_range_returns_squeezed_vacuum() {
        let opt = optimize_ratio_in(50.0, 1.0, 1.0, 1e-6, KappaMode::Exact).unwrap();
        assert_eq!(opt.ratio_opt, 1.0);
        assert_eq!(opt.phi_opt, opt.phi_sv);
        assert_eq!(opt.relative, 1.0);
        assert!(optimize_ratio_in(50.0, 0.8, 0.2, 1e-6, KappaMode::Exact).is_err());
    }

    #[test]
    fn total_sweep_ordering_at_ten_photons() {
        let curves = sweep_total(&[10.0], &[0.0, 0.01, 0.1], KappaMode::Exact).unwrap();
        let phi: Vec<f64> = curves.iter().map(|c| c.points[0].phi_m.unwrap()).collect();
        assert!(phi[2] < phi[1] && phi[1] < phi[0]);
        assert!(sweep_total(&[10.0, 5.0], &[0.0], KappaMode::Exact).is_err());
        assert!(sweep_total(&[10.0], &[1.2], KappaMode::Exact).is_err());
    }
}
