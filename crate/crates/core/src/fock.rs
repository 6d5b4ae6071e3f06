//! Truncated Fock-space states and operators.
//!
//! Every analytic overlap in [`crate::closed_forms`] has a brute-force
//! counterpart here: states are dense amplitude vectors over `|0⟩..|N-1⟩`
//! and operators are dense `N×N` matrices obtained by exponentiating the
//! truncated generators.
//!
//! Exponentials of truncated anti-Hermitian generators are exactly unitary,
//! so a norm deficit cannot reveal a too-small cutoff for operator-built
//! states. The truncation check instead looks at the weight sitting in the
//! top boundary levels, where a clipped state piles up.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

/// Cutoff and tolerances for the truncated number basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    pub dim: usize,
    /// Maximum entry of `U†U - I` allowed on the lower block.
    pub unitarity_tol: f64,
    /// Rows/columns at the top of the basis excluded from the unitarity check.
    pub margin: usize,
    /// Maximum probability allowed in the boundary levels (or missing from
    /// the norm, for analytic states).
    pub trunc_tol: f64,
}

impl TruncationConfig {
    pub fn new(dim: usize) -> Self {
        TruncationConfig {
            dim,
            unitarity_tol: 1e-8,
            margin: dim / 4,
            trunc_tol: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 4 {
            return Err(Error::Config(format!(
                "dim must be at least 4, got {}",
                self.dim
            )));
        }
        if self.margin >= self.dim {
            return Err(Error::Config(format!(
                "margin {} must be smaller than dim {}",
                self.margin, self.dim
            )));
        }
        if [self.unitarity_tol, self.trunc_tol]
            .iter()
            .any(|t| t.is_nan() || *t <= 0.0)
        {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Number of top levels inspected by the truncation check.
    pub fn boundary_levels(&self) -> usize {
        (self.dim / 16).max(2)
    }
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig::new(64)
    }
}

/// Pure state over the truncated number basis; index `n` is the photon number.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Array1<Complex64>,
}

impl FockVector {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::Config(
                "a Fock vector needs at least one amplitude".into(),
            ));
        }
        Ok(FockVector {
            amps: Array1::from(amps),
        })
    }

    /// Number state `|n⟩`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::DimensionMismatch {
                left: n + 1,
                right: dim,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[n] = Complex64::new(1.0, 0.0);
        FockVector::from_amplitudes(amps)
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        FockVector::basis(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &Array1<Complex64> {
        &self.amps
    }

    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn photon_distribution(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// Probability in the top `levels` number states.
    pub fn boundary_weight(&self, levels: usize) -> f64 {
        let start = self.dim().saturating_sub(levels);
        self.amps.iter().skip(start).map(|c| c.norm_sqr()).sum()
    }

    fn check_truncation(&self, cfg: &TruncationConfig) -> Result<()> {
        let weight = self.boundary_weight(cfg.boundary_levels());
        if weight > cfg.trunc_tol {
            return Err(Error::Truncation {
                dim: self.dim(),
                weight,
                tol: cfg.trunc_tol,
            });
        }
        Ok(())
    }
}

/// Dense operator on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    matrix: Array2<Complex64>,
}

impl FockOperator {
    pub fn identity(dim: usize) -> Self {
        FockOperator {
            matrix: Array2::eye(dim),
        }
    }

    pub fn from_matrix(matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                left: matrix.nrows(),
                right: matrix.ncols(),
            });
        }
        Ok(FockOperator { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            matrix: linalg::adjoint(&self.matrix),
        }
    }

    /// `self · other`
    pub fn compose(&self, other: &FockOperator) -> Result<FockOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(FockOperator {
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    pub fn apply(&self, psi: &FockVector) -> Result<FockVector> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: psi.dim(),
            });
        }
        Ok(FockVector {
            amps: self.matrix.dot(&psi.amps),
        })
    }

    /// `max |(U†U - I)_ij|` over the lower `dim - margin` block.
    pub fn unitarity_defect(&self, margin: usize) -> f64 {
        let n = self.dim();
        let keep = n.saturating_sub(margin);
        let gram = linalg::adjoint(&self.matrix).dot(&self.matrix);
        let mut worst = 0.0f64;
        for i in 0..keep {
            for j in 0..keep {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[[i, j]] - target).norm());
            }
        }
        worst
    }

    fn check_unitary(self, cfg: &TruncationConfig) -> Result<Self> {
        let defect = self.unitarity_defect(cfg.margin);
        if defect > cfg.unitarity_tol {
            return Err(Error::Truncation {
                dim: self.dim(),
                weight: defect,
                tol: cfg.unitarity_tol,
            });
        }
        Ok(self)
    }
}

/// Reduced state of a single mode.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: Array2<Complex64>,
}

impl DensityMatrix {
    pub fn pure(psi: &FockVector) -> Self {
        let n = psi.dim();
        let mut matrix = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                matrix[[i, j]] = psi.amps[i] * psi.amps[j].conj();
            }
        }
        DensityMatrix { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diag().iter().map(|z| z.re).sum()
    }

    /// tr(ρ²)
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// ⟨ψ|ρ|ψ⟩
    pub fn fidelity(&self, psi: &FockVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: psi.dim(),
            });
        }
        let rho_psi = self.matrix.dot(&psi.amps);
        Ok(psi
            .amps
            .iter()
            .zip(rho_psi.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re)
    }

    fn conjugate_by(&self, u: &FockOperator) -> DensityMatrix {
        DensityMatrix {
            matrix: u.matrix.dot(&self.matrix).dot(&linalg::adjoint(&u.matrix)),
        }
    }
}

fn annihilation(dim: usize) -> Array2<Complex64> {
    let mut a = Array2::zeros((dim, dim));
    for n in 1..dim {
        a[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `c_n = e^{-|α|²/2} αⁿ/√(n!)`, not renormalized after truncation.
pub fn coherent_state(alpha: Complex64, cfg: &TruncationConfig) -> Result<FockVector> {
    cfg.validate()?;
    let mut amps = Vec::with_capacity(cfg.dim);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 1..cfg.dim {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    let psi = FockVector::from_amplitudes(amps)?;
    let deficit = 1.0 - psi.norm_sqr();
    if deficit > cfg.trunc_tol {
        return Err(Error::Truncation {
            dim: cfg.dim,
            weight: deficit,
            tol: cfg.trunc_tol,
        });
    }
    Ok(psi)
}

/// `D(α) = exp(α a† - α* a)`
pub fn displacement_operator(alpha: Complex64, cfg: &TruncationConfig) -> Result<FockOperator> {
    cfg.validate()?;
    let a = annihilation(cfg.dim);
    let a_dag = linalg::adjoint(&a);
    let generator = a_dag.mapv(|z| z * alpha) - a.mapv(|z| z * alpha.conj());
    let op = FockOperator {
        matrix: linalg::expm(&generator),
    }
    .check_unitary(cfg)?;
    op.apply(&FockVector::vacuum(cfg.dim)?)?
        .check_truncation(cfg)?;
    Ok(op)
}

/// `S(ζ) = exp[-ζ(a†² - a²)/2]`. With this sign `S(-r)` squeezes the
/// phase quadrature of a real-amplitude probe.
pub fn squeeze_operator(zeta: f64, cfg: &TruncationConfig) -> Result<FockOperator> {
    cfg.validate()?;
    let a = annihilation(cfg.dim);
    let a2 = a.dot(&a);
    let a_dag2 = linalg::adjoint(&a2);
    let generator = (a_dag2 - a2).mapv(|z| z * (-0.5 * zeta));
    let op = FockOperator {
        matrix: linalg::expm(&generator),
    }
    .check_unitary(cfg)?;
    op.apply(&FockVector::vacuum(cfg.dim)?)?
        .check_truncation(cfg)?;
    Ok(op)
}

/// `exp(i n φ)`, diagonal.
pub fn phase_shift_operator(phi: f64, cfg: &TruncationConfig) -> Result<FockOperator> {
    cfg.validate()?;
    let mut matrix = Array2::zeros((cfg.dim, cfg.dim));
    for n in 0..cfg.dim {
        matrix[[n, n]] = Complex64::from_polar(1.0, n as f64 * phi);
    }
    Ok(FockOperator { matrix })
}

/// `⟨a|b⟩ = Σ conj(a_n) b_n`
pub fn overlap(a: &FockVector, b: &FockVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.amps
        .iter()
        .zip(b.amps.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Mixes `psi` with a coherent local oscillator `|β⟩` on a beamsplitter of
/// power transmission `T` and returns the reduced state of the transmitted
/// mode.
///
/// Convention: `a → √T a + √(1-T) b`, `b → √T b - √(1-T) a` (Heisenberg),
/// i.e. `B = exp[θ(a†b - a b†)]` with `cos θ = √T`. Under it the oscillator
/// displaces the transmitted mode by `+√(1-T)β`.
///
/// `B D_b(β) B† = D_a(√(1-T)β) D_b(√T β)`, and a unitary on the traced-out
/// mode drops from the reduced state, so the oscillator is moved onto the
/// transmitted mode after the beamsplitter acts on `psi ⊗ |0⟩`. This keeps
/// the auxiliary mode near vacuum even when `|β|² ≫ dim`.
pub fn beamsplitter_displacement(
    transmission: f64,
    beta: Complex64,
    psi: &FockVector,
    cfg: &TruncationConfig,
) -> Result<DensityMatrix> {
    cfg.validate()?;
    if !(transmission > 0.0 && transmission < 1.0) {
        return Err(Error::domain("T", transmission, "0 < T < 1"));
    }
    if psi.dim() != cfg.dim {
        return Err(Error::DimensionMismatch {
            left: cfg.dim,
            right: psi.dim(),
        });
    }
    psi.check_truncation(cfg)?;
    let vacuum = FockVector::vacuum(cfg.dim)?;
    let reduced = beamsplitter_reduced(transmission, psi, &vacuum, cfg)?;
    let shift = displacement_operator(beta * (1.0 - transmission).sqrt(), cfg)?;
    Ok(reduced.conjugate_by(&shift))
}

/// Applies the beamsplitter to `a_state ⊗ b_state` and traces out mode b.
fn beamsplitter_reduced(
    transmission: f64,
    a_state: &FockVector,
    b_state: &FockVector,
    cfg: &TruncationConfig,
) -> Result<DensityMatrix> {
    let n = cfg.dim;
    if a_state.dim() != n || b_state.dim() != n {
        return Err(Error::DimensionMismatch {
            left: a_state.dim(),
            right: b_state.dim(),
        });
    }
    let theta = transmission.sqrt().acos();
    // joint index i * n + j, i on the transmitted mode
    let joint = Array1::from_iter(
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| a_state.amps[i] * b_state.amps[j]),
    );
    let sqrt: Vec<f64> = (0..=n).map(|k| (k as f64).sqrt()).collect();
    let apply = |x: &Array1<Complex64>, out: &mut Array1<Complex64>| {
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                // a† b
                if i >= 1 && j + 1 < n {
                    acc += x[(i - 1) * n + j + 1] * (sqrt[i] * sqrt[j + 1]);
                }
                // - a b†
                if i + 1 < n && j >= 1 {
                    acc -= x[(i + 1) * n + j - 1] * (sqrt[i + 1] * sqrt[j]);
                }
                out[i * n + j] = acc * theta;
            }
        }
    };
    let out = linalg::expm_apply(apply, 2.0 * theta * n as f64, &joint);

    let levels = cfg.boundary_levels();
    let edge = n - levels;
    let boundary: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i >= edge || j >= edge)
        .map(|(i, j)| out[i * n + j].norm_sqr())
        .sum();
    if boundary > cfg.trunc_tol {
        return Err(Error::Truncation {
            dim: n,
            weight: boundary,
            tol: cfg.trunc_tol,
        });
    }

    let mut rho = Array2::<Complex64>::zeros((n, n));
    for i in 0..n {
        for k in 0..n {
            rho[[i, k]] = (0..n).map(|j| out[i * n + j] * out[k * n + j].conj()).sum();
        }
    }
    Ok(DensityMatrix { matrix: rho })
}
