//! Explicit thermometry protocols and their Fisher-information rates.
//!
//! Two families: the continuous measure-and-prepare scheme, whose rate is a
//! single expectation value, and three finite-time qubit protocols that read
//! out the Lamb-shift phase at low temperature (Ramsey, ancilla parity, and
//! continuously monitored parity).

use crate::error::{Error, Result};
use crate::fisher::qfi;
use crate::lindblad::LindbladModel;
use crate::operators::{c, hs_norm, tensor, CMatrix, CVector, DensityOperator, HermitianOperator, I};
use crate::optimize::{nested_max, GOLDEN_TOL, STRATEGY_GRID};

const LEAK_TOL: f64 = 1e-10;

/// Leading-order Fisher rate of monitoring energy jumps out of the subspace
/// `ε` for a probe held in `ψ`:
/// `⟨ψ| Σ_{ω, ε'' ≠ ε} (γ̇_ω²/γ_ω) A_ω† Π_ε'' A_ω |ψ⟩`.
pub fn map_fisher_rate(model: &LindbladModel, psi: &CVector, epsilon: f64) -> Result<f64> {
    let fam = model.projectors();
    let k = fam
        .index_of(epsilon)
        .ok_or_else(|| Error::domain(format!("no energy level at ε = {epsilon}")))?;
    if psi.len() != model.dim() {
        return Err(Error::InvalidOperator("state dimension mismatch".into()));
    }
    if (psi.norm() - 1.0).abs() > LEAK_TOL {
        return Err(Error::InvalidOperator(format!("state has norm {}", psi.norm())));
    }
    let inside = fam.projector(k) * psi;
    let leak = (psi - &inside).norm();
    if leak > LEAK_TOL {
        return Err(Error::domain(format!("state leaks {leak:e} outside the ε subspace")));
    }
    let mut rate = 0.0;
    for (ci, ch) in model.channels().iter().enumerate() {
        let moved = &ch.op * psi;
        for (to, from) in model.transitions(ci) {
            if from != k || to == k {
                continue;
            }
            let p = (fam.projector(to) * &moved).norm_squared();
            if p == 0.0 {
                continue;
            }
            let g2 = ch.dgamma_dt * ch.dgamma_dt;
            if ch.gamma > 0.0 {
                rate += g2 / ch.gamma * p;
            } else if g2 > 0.0 {
                return Ok(f64::INFINITY);
            }
        }
    }
    Ok(rate)
}

/// Parameters of the low-temperature qubit: emission rate `γ_w`, shifted
/// frequency `w̃` and its temperature derivative `∂w̃/∂T = 2ṡ_w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowTemperatureQubit {
    pub w_tilde: f64,
    pub gamma: f64,
    pub dw_tilde_dt: f64,
}

impl LowTemperatureQubit {
    /// Units `γ_w = ṡ_w = 1`.
    pub fn unit() -> Self {
        Self {
            w_tilde: 1.0,
            gamma: 1.0,
            dw_tilde_dt: 2.0,
        }
    }

    pub fn ds(&self) -> f64 {
        0.5 * self.dw_tilde_dt
    }
}

fn check_at(a: f64, t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::domain(format!("preparation weight a = {a} outside [0, 1]")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("duration t = {t} must be nonnegative")));
    }
    Ok(())
}

/// State and temperature derivative after time `t` from
/// `√(1-a)|0⟩ + √a|1⟩` (or `√(1-a)|00⟩ + √a|11⟩` with an ancilla) under pure
/// decay at rate `γ_w` and precession at `w̃`.
pub fn qubit_closed_form_state(
    a: f64,
    t: f64,
    q: &LowTemperatureQubit,
    ancilla: bool,
) -> Result<(DensityOperator, HermitianOperator)> {
    check_at(a, t)?;
    if !(q.gamma >= 0.0) {
        return Err(Error::domain(format!("decay rate {} must be nonnegative", q.gamma)));
    }
    let decay = (-q.gamma * t).exp();
    let p_jump = a * (-(-q.gamma * t).exp_m1());
    let c0 = (1.0 - a).sqrt();
    let c1 = (a * decay).sqrt();
    // Z' = |1⟩⟨1| - |0⟩⟨0| on the probe, with the probe as the first factor.
    let (dim, rho_d, z) = if ancilla {
        let mut psi = CVector::zeros(4);
        psi[0] = c(c0);
        psi[3] = c(c1);
        let mut rho = &psi * psi.adjoint();
        rho[(1, 1)] += c(p_jump);
        let z1 = CMatrix::from_diagonal(&CVector::from_vec(vec![c(-1.0), c(1.0)]));
        (4, rho, tensor(&z1, &CMatrix::identity(2, 2)))
    } else {
        let psi = CVector::from_vec(vec![c(c0), c(c1)]);
        let mut rho = &psi * psi.adjoint();
        rho[(0, 0)] += c(p_jump);
        (
            2,
            rho,
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(-1.0), c(1.0)])),
        )
    };
    let phase = 0.5 * q.w_tilde * t;
    let u = CMatrix::from_diagonal(&CVector::from_iterator(
        dim,
        z.diagonal().iter().map(|zi| (-I * zi * phase).exp()),
    ));
    let rho = &u * rho_d * u.adjoint();
    let drho = (&z * &rho - &rho * &z) * (-I * (0.5 * t * q.dw_tilde_dt));
    let rho = DensityOperator::new(HermitianOperator::symmetrized(rho).into_matrix())?;
    Ok((rho, HermitianOperator::symmetrized(drho)))
}

/// Ramsey QFI `16ṡ²t²e^{-γt}(a - a²)`.
pub fn ramsey(a: f64, t: f64, q: &LowTemperatureQubit) -> Result<f64> {
    check_at(a, t)?;
    Ok(16.0 * q.ds().powi(2) * t * t * (-q.gamma * t).exp() * (a - a * a))
}

/// Ancilla-parity QFI `16(1-a)a t²ṡ² / ((1-a)e^{γt} + a)`.
pub fn ancilla_parity(a: f64, t: f64, q: &LowTemperatureQubit) -> Result<f64> {
    check_at(a, t)?;
    Ok(16.0 * (1.0 - a) * a * t * t * q.ds().powi(2) / ((1.0 - a) * (q.gamma * t).exp() + a))
}

/// Mean QFI and mean duration of one trial of the monitored-parity protocol
/// that waits at most `t_wait`.
pub fn fast_detection(a: f64, t_wait: f64, q: &LowTemperatureQubit) -> Result<(f64, f64)> {
    let mean_qfi = ancilla_parity(a, t_wait, q)?;
    let g = q.gamma;
    let mean_duration = if g > 0.0 {
        (a * (-(-g * t_wait).exp_m1()) + (1.0 - a) * t_wait * g) / g
    } else {
        t_wait
    };
    Ok((mean_qfi, mean_duration))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Ramsey,
    Ancilla,
    Fast,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [StrategyKind::Ramsey, StrategyKind::Ancilla, StrategyKind::Fast];

    pub fn as_str(&self) -> &'static str {
        match self {
            StrategyKind::Ramsey => "ramsey",
            StrategyKind::Ancilla => "ancilla",
            StrategyKind::Fast => "fast",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyResult {
    pub kind: StrategyKind,
    pub fi_rate: f64,
    /// `fi_rate·γ_w/ṡ_w²`.
    pub r_coefficient: f64,
    pub a_opt: f64,
    pub t_opt: f64,
    /// Rate at the optimum recomputed from the SLD of the explicit state.
    pub oracle_rate: f64,
}

/// Search box for the duration, in units of `1/γ_w`.
pub const T_RANGE: (f64, f64) = (0.05, 10.0);

fn strategy_rate(kind: StrategyKind, a: f64, t: f64, q: &LowTemperatureQubit) -> Result<f64> {
    match kind {
        StrategyKind::Ramsey => Ok(ramsey(a, t, q)? / t),
        StrategyKind::Ancilla => Ok(ancilla_parity(a, t, q)? / t),
        StrategyKind::Fast => {
            let (f, d) = fast_detection(a, t, q)?;
            Ok(f / d)
        }
    }
}

fn oracle_rate(kind: StrategyKind, a: f64, t: f64, q: &LowTemperatureQubit) -> Result<f64> {
    let (rho, drho) = qubit_closed_form_state(a, t, q, kind != StrategyKind::Ramsey)?;
    match kind {
        StrategyKind::Ramsey | StrategyKind::Ancilla => Ok(qfi(&rho, &drho)?.value / t),
        StrategyKind::Fast => {
            // Condition on the even-parity (no-jump) branch.
            let keep = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(0.0), c(0.0), c(1.0)]));
            let p_nj = (&keep * rho.matrix() * &keep).trace().re;
            let cond = DensityOperator::new(&keep * rho.matrix() * &keep * c(1.0 / p_nj))?;
            let dcond = HermitianOperator::symmetrized(&keep * drho.matrix() * &keep * c(1.0 / p_nj));
            let (_, duration) = fast_detection(a, t, q)?;
            Ok(p_nj * qfi(&cond, &dcond)?.value / duration)
        }
    }
}

/// Maximizes the Fisher rate of a strategy over preparation weight and
/// duration, in units `γ_w = ṡ_w = 1`.
pub fn optimize_strategy(kind: StrategyKind) -> Result<StrategyResult> {
    let q = LowTemperatureQubit::unit();
    let m = nested_max(
        |a, t| strategy_rate(kind, a, t, &q).unwrap_or(f64::NAN),
        (0.0, 1.0),
        T_RANGE,
        STRATEGY_GRID,
        GOLDEN_TOL,
    );
    if !m.value.is_finite() {
        return Err(Error::NoConvergence(format!("{} optimization failed", kind.as_str())));
    }
    let oracle = oracle_rate(kind, m.x, m.y, &q)?;
    Ok(StrategyResult {
        kind,
        fi_rate: m.value,
        r_coefficient: m.value * q.gamma / q.ds().powi(2),
        a_opt: m.x,
        t_opt: m.y,
        oracle_rate: oracle,
    })
}

/// Frobenius distance between two operators, for model comparisons.
pub fn frobenius_distance(x: &CMatrix, y: &CMatrix) -> f64 {
    hs_norm(&(x - y))
}
