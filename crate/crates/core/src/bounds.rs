//! Upper bounds on the QFI rate `F/τ` of Markovian thermometers.
//!
//! Every bound has the shape `‖Σ_ω c_ω A_ω†A_ω‖` with scalar channel weights
//! `c_ω`: `γ̇²/γ` without Lamb shift, `(γ̇² + 4h²)/γ` with one. The operator is
//! block diagonal in the energy subspaces, so the norm is the largest block
//! norm and the maximizing block is the certificate `ε*`.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::lindblad::LindbladModel;
use crate::operators::{
    c, hermitian_eig, hs_norm, operator_norm_psd, span_membership, CMatrix, CVector, HermitianOperator,
};
use crate::optimize::{grid_then_golden_max, Maximum, Spacing, GOLDEN_TOL, GRID_POINTS};
use crate::spectral::{jump_rates, OhmicDensity};

/// Residual allowed when checking a supplied `Ḣ_LS` decomposition.
pub const DECOMPOSITION_TOL: f64 = 1e-8;
const TIE_TOL: f64 = 1e-12;
/// Lower end of the frequency search, relative to the upper end.
const FREQUENCY_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    NoLamb,
    LambRegimeI,
    LambRegimeII,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::NoLamb => "no-lamb",
            Regime::LambRegimeI => "lamb-regime-i",
            Regime::LambRegimeII => "lamb-regime-ii",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    /// Bound on `F/τ`; `f64::INFINITY` when a channel with zero rate carries information.
    pub rate: f64,
    pub attaining_epsilon: Option<f64>,
    pub attaining_omega: Option<f64>,
    pub gauge_x: Option<f64>,
    pub regime: Regime,
    /// Unit vector in the `ε*` subspace attaining the block norm.
    pub witness: Option<CVector>,
}

impl BoundReport {
    fn scalar(rate: f64, regime: Regime) -> Self {
        Self {
            rate,
            attaining_epsilon: None,
            attaining_omega: None,
            gauge_x: None,
            regime,
            witness: None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        self.rate.is_infinite()
    }
}

/// `num/γ`, with `0/0 = 0` and `x/0 = ∞`.
fn channel_weight(numerator: f64, gamma: f64) -> f64 {
    if gamma > 0.0 {
        numerator / gamma
    } else if numerator == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Block-wise norm of `Σ_k w_k A_k†A_k`.
fn weighted_block_norm(model: &LindbladModel, weights: &[f64], regime: Regime) -> Result<BoundReport> {
    let d = model.dim();
    let fam = model.projectors();
    let mut total = CMatrix::zeros(d, d);
    let mut divergent_blocks = vec![false; fam.len()];
    for (k, ch) in model.channels().iter().enumerate() {
        let w = weights[k];
        if w == 0.0 {
            continue;
        }
        if w.is_infinite() {
            for (_, from) in model.transitions(k) {
                divergent_blocks[from] = true;
            }
            continue;
        }
        total += ch.op.adjoint() * &ch.op * c(w);
    }

    if let Some(k) = divergent_blocks.iter().position(|&b| b) {
        let mut r = BoundReport::scalar(f64::INFINITY, regime);
        r.attaining_epsilon = Some(fam.labels()[k]);
        return Ok(r);
    }

    let mut best: Option<(usize, f64)> = None;
    for k in 0..fam.len() {
        let p = fam.projector(k);
        let block = HermitianOperator::symmetrized(p * &total * p);
        let v = operator_norm_psd(&block)?;
        match best {
            Some((_, b)) if v <= b + TIE_TOL * b.abs().max(1.0) => {}
            _ => best = Some((k, v)),
        }
    }
    let (k, rate) = best.ok_or_else(|| Error::InvalidModel("empty projector family".into()))?;
    let p = fam.projector(k);
    let block = HermitianOperator::symmetrized(p * &total * p);
    let eig = hermitian_eig(&block);
    // Top eigenvector of the block; if the block vanishes, any state in the subspace.
    let witness = if rate > 0.0 {
        eig.vectors.column(d - 1).into_owned()
    } else {
        let peig = hermitian_eig(&HermitianOperator::symmetrized(p.clone()));
        peig.vectors.column(d - 1).into_owned()
    };
    Ok(BoundReport {
        rate,
        attaining_epsilon: Some(fam.labels()[k]),
        attaining_omega: None,
        gauge_x: None,
        regime,
        witness: Some(witness),
    })
}

#[derive(Debug, Clone)]
pub struct DiffusiveCheck {
    pub simple: bool,
    pub general: bool,
    pub simple_residual: f64,
    pub general_residual: f64,
}

/// Tests whether `Ḣ_LS` lies in the span that keeps the QFI linear in time,
/// with the simple basis `{1, γ_ω A_ω†A_ω}` and the general one built from
/// the Kraus-derivative structure.
pub fn check_diffusive(model: &LindbladModel) -> Result<DiffusiveCheck> {
    let d = model.dim();
    let target = model.lamb_shift_dt();
    let chans = model.channels();
    let mut simple_basis = vec![HermitianOperator::identity(d)];
    for ch in chans {
        simple_basis.push(HermitianOperator::symmetrized(ch.op.adjoint() * &ch.op * c(ch.gamma)));
    }
    let simple = span_membership(target, &simple_basis)?;

    let i = crate::operators::I;
    let mut general_basis = vec![HermitianOperator::identity(d)];
    for ch in chans {
        let s = c(ch.gamma.sqrt());
        let a = &ch.op;
        general_basis.push(HermitianOperator::symmetrized((a + a.adjoint()) * s));
        general_basis.push(HermitianOperator::symmetrized((a - a.adjoint()) * i * s));
    }
    for (k, ck) in chans.iter().enumerate() {
        for cl in &chans[k..] {
            let s = c((ck.gamma * cl.gamma).sqrt());
            let x = ck.op.adjoint() * &cl.op;
            let y = cl.op.adjoint() * &ck.op;
            general_basis.push(HermitianOperator::symmetrized((&x + &y) * s));
            general_basis.push(HermitianOperator::symmetrized((&x - &y) * i * s));
        }
    }
    let general = span_membership(target, &general_basis)?;
    Ok(DiffusiveCheck {
        simple: simple.in_span,
        general: general.in_span || simple.in_span,
        simple_residual: simple.residual,
        general_residual: general.residual,
    })
}

/// `‖Σ_ω (γ̇_ω²/γ_ω) A_ω†A_ω‖` with the attaining subspace and a saturating state.
/// The Lamb shift of the model is ignored.
pub fn bound_fixed_h(model: &LindbladModel) -> Result<BoundReport> {
    let weights: Vec<f64> = model
        .channels()
        .iter()
        .map(|ch| channel_weight(ch.dgamma_dt * ch.dgamma_dt, ch.gamma))
        .collect();
    weighted_block_norm(model, &weights, Regime::NoLamb)
}

/// Coefficients of `Ḣ_LS = h₁·1 + Σ_ω h_ω A_ω†A_ω`, one `h_ω` per model channel.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeCoefficients {
    pub identity: f64,
    pub channels: Vec<f64>,
}

impl GaugeCoefficients {
    /// `h₁ = 0`, `h_ω = ṡ_ω`: the decomposition a microscopic model comes with.
    pub fn natural(model: &LindbladModel) -> Self {
        Self {
            identity: 0.0,
            channels: model.channels().iter().map(|ch| ch.dlamb_dt).collect(),
        }
    }
}

/// `‖Σ_ω ((γ̇_ω² + 4h_ω²)/γ_ω) A_ω†A_ω‖` for a decomposition of `Ḣ_LS`.
pub fn bound_with_lamb(model: &LindbladModel, h: &GaugeCoefficients) -> Result<BoundReport> {
    let chans = model.channels();
    if h.channels.len() != chans.len() {
        return Err(Error::InvalidModel(format!(
            "{} gauge coefficients for {} channels",
            h.channels.len(),
            chans.len()
        )));
    }
    let d = model.dim();
    let mut rebuilt = CMatrix::identity(d, d) * c(h.identity);
    for (ch, &hw) in chans.iter().zip(&h.channels) {
        rebuilt += ch.op.adjoint() * &ch.op * c(hw);
    }
    let target = model.lamb_shift_dt().matrix();
    let residual = hs_norm(&(target - &rebuilt));
    let tolerance = DECOMPOSITION_TOL * hs_norm(target).max(1.0);
    if residual > tolerance {
        return Err(Error::Decomposition { residual, tolerance });
    }
    let weights: Vec<f64> = chans
        .iter()
        .zip(&h.channels)
        .map(|(ch, &hw)| channel_weight(ch.dgamma_dt * ch.dgamma_dt + 4.0 * hw * hw, ch.gamma))
        .collect();
    let mut r = weighted_block_norm(model, &weights, Regime::LambRegimeII)?;
    r.regime = if hs_norm(target) == 0.0 {
        Regime::NoLamb
    } else {
        Regime::LambRegimeII
    };
    r.gauge_x = Some(h.identity);
    Ok(r)
}

/// The two diagonal entries of the qubit gauge bound at gauge `x`:
/// `((γ̇² + 4(ṡ+x)²)/γ₋, (γ̇² + 4(ṡ-x)²)/γ₊)`.
pub fn qubit_gauge_entries(gamma_plus: f64, gamma_minus: f64, dgamma: f64, ds: f64, x: f64) -> (f64, f64) {
    let g2 = dgamma * dgamma;
    (
        channel_weight(g2 + 4.0 * (ds + x).powi(2), gamma_minus),
        channel_weight(g2 + 4.0 * (ds - x).powi(2), gamma_plus),
    )
}

/// Closed-form `min_x max(f₋(x), f₊(x))` for the qubit probe, where `γ₊ = γ_w`
/// (emission), `γ₋ = γ_{-w}`, `γ̇` is the common rate derivative and `ṡ = ṡ_w`.
pub fn qubit_bound_opt_gauge(gamma_plus: f64, gamma_minus: f64, dgamma: f64, ds: f64) -> Result<BoundReport> {
    if !(gamma_plus > 0.0) || !(gamma_minus >= 0.0) || !dgamma.is_finite() || !ds.is_finite() {
        return Err(Error::domain(format!(
            "qubit gauge bound needs γ_w > 0, γ_-w ≥ 0 (got {gamma_plus}, {gamma_minus})"
        )));
    }
    // The bound depends on ṡ only through x → -x; work with ṡ ≥ 0.
    let sign = if ds < 0.0 { -1.0 } else { 1.0 };
    let s = ds.abs();
    let g2 = dgamma * dgamma;
    let report = |rate: f64, x: f64, regime| BoundReport {
        gauge_x: Some(sign * x),
        ..BoundReport::scalar(rate, regime)
    };

    let (fm, fp) = qubit_gauge_entries(gamma_plus, gamma_minus, dgamma, s, -s);
    if gamma_minus == 0.0 {
        // f₋ is finite only at x = -ṡ, and only when γ̇ = 0.
        let rate = if dgamma == 0.0 { fp } else { f64::INFINITY };
        return Ok(report(rate, -s, Regime::LambRegimeI));
    }
    if fm >= fp {
        return Ok(report(fm, -s, Regime::LambRegimeI));
    }
    let (fm2, fp2) = qubit_gauge_entries(gamma_plus, gamma_minus, dgamma, s, s);
    if fp2 >= fm2 {
        return Ok(report(fp2, s, Regime::LambRegimeI));
    }
    // Crossing f₋ = f₊ inside (-ṡ, ṡ): root of
    // 4Δγ x² + 8ṡΣγ x + Δγ(4ṡ² + γ̇²) = 0, written without cancellation.
    let sum = gamma_plus + gamma_minus;
    let diff = gamma_plus - gamma_minus;
    let disc = (16.0 * s * s * gamma_plus * gamma_minus - g2 * diff * diff).max(0.0);
    let denom = 2.0 * s * sum + disc.sqrt();
    let x = -diff * (4.0 * s * s + g2) / (2.0 * denom);
    let rate = 8.0 * s * (4.0 * s * s + g2) / denom;
    Ok(report(rate, x, Regime::LambRegimeII))
}

/// `γ̇_w²/γ_{-w}` for the bosonic qubit in closed form,
/// `2πg N(w)³ e^{2w/T} w^{2+α} / T⁴`.
pub fn qubit_explicit_bound(w: f64, temperature: f64, density: &OhmicDensity) -> Result<f64> {
    if !(w > 0.0 && w <= density.cutoff()) {
        return Err(Error::domain(format!("w = {w} outside (0, Ω]")));
    }
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::domain(format!("temperature T = {temperature} must be positive")));
    }
    let y = w / temperature;
    // N³ e^{2y} = e^{-y} / (1 - e^{-y})³
    let n3e2 = (-y).exp() / (-(-y).exp_m1()).powi(3);
    Ok(2.0 * std::f64::consts::PI * density.coupling() * n3e2 * w.powf(2.0 + density.ohmicity()) / temperature.powi(4))
}

/// Which qubit channel attains the Ohmicity bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitChannel {
    Emission,
    Absorption,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicityBound {
    pub rate: f64,
    pub emission_rate: f64,
    pub absorption_rate: f64,
    pub attaining: QubitChannel,
}

/// Bound on the Ohmicity QFI rate when both rates scale as `w^α`:
/// `∂_α γ = γ ln w`, so each channel weight is `γ (ln w)²`.
pub fn ohmicity_bound(w: f64, gamma_emission: f64, gamma_absorption: f64) -> Result<OhmicityBound> {
    if !(w > 0.0) || !(gamma_emission >= 0.0) || !(gamma_absorption >= 0.0) {
        return Err(Error::domain("Ohmicity bound needs w > 0 and nonnegative rates"));
    }
    let l2 = w.ln().powi(2);
    let (rate, attaining) = if gamma_absorption > gamma_emission {
        (l2 * gamma_absorption, QubitChannel::Absorption)
    } else {
        (l2 * gamma_emission, QubitChannel::Emission)
    };
    Ok(OhmicityBound {
        rate,
        emission_rate: l2 * gamma_emission,
        absorption_rate: l2 * gamma_absorption,
        attaining,
    })
}

/// [`ohmicity_bound`] with the bosonic rates of `J`.
pub fn ohmicity_bound_bosonic(w: f64, temperature: f64, density: &OhmicDensity) -> Result<OhmicityBound> {
    let r = jump_rates(w, temperature, density)?;
    ohmicity_bound(w, r.gamma_plus, r.gamma_minus)
}

/// Rate and derivative of one bath channel at frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathChannel {
    pub omega: f64,
    pub gamma: f64,
    pub dgamma_dt: f64,
}

impl BathChannel {
    pub fn merit(&self) -> f64 {
        channel_weight(self.dgamma_dt * self.dgamma_dt, self.gamma)
    }
}

#[derive(Debug, Clone)]
pub struct OptimalHBound {
    pub report: BoundReport,
    /// Energy of the degenerate excited manifold of the optimal Hamiltonian.
    pub delta_t: f64,
    /// Nondegenerate level `(|a_max⟩ + |a_min⟩)/√2`.
    pub psi: CVector,
    pub spectral_gap: f64,
}

fn optimal_h_from_best(best: BathChannel, coupling: &HermitianOperator) -> Result<OptimalHBound> {
    let eig = hermitian_eig(coupling);
    let d = coupling.dim();
    let gap = eig.values[d - 1] - eig.values[0];
    let psi = (eig.vectors.column(d - 1) + eig.vectors.column(0)) * c(std::f64::consts::FRAC_1_SQRT_2);
    let merit = best.merit();
    let rate = if gap == 0.0 { 0.0 } else { merit * (gap / 2.0).powi(2) };
    Ok(OptimalHBound {
        report: BoundReport {
            attaining_omega: Some(best.omega),
            ..BoundReport::scalar(rate, Regime::NoLamb)
        },
        delta_t: -best.omega,
        psi,
        spectral_gap: gap,
    })
}

/// `max_ω(γ̇_ω²/γ_ω)·(Δ(A)/2)²` over a finite list of bath channels.
pub fn bound_optimal_h(bath: &[BathChannel], coupling: &HermitianOperator) -> Result<OptimalHBound> {
    if !bath.iter().any(|b| b.gamma > 0.0) {
        return Err(Error::domain(
            "optimal-H bound needs at least one channel with a positive rate",
        ));
    }
    let mut best: Option<BathChannel> = None;
    for b in bath {
        if b.gamma == 0.0 && b.dgamma_dt == 0.0 {
            continue;
        }
        if best.is_none_or(|x| b.merit() > x.merit()) {
            best = Some(*b);
        }
    }
    optimal_h_from_best(best.expect("a channel with positive rate exists"), coupling)
}

/// Maximizes `merit` over frequencies in `[FLOOR·upper, upper]` with a log grid
/// followed by golden-section refinement.
pub fn maximize_frequency_merit<F: Fn(f64) -> Result<f64>>(merit: F, upper: f64) -> Result<Maximum> {
    if !(upper > 0.0) || !upper.is_finite() {
        return Err(Error::domain(format!("frequency range upper end {upper}")));
    }
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let m = grid_then_golden_max(
        |x| match merit(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        FREQUENCY_FLOOR * upper,
        upper,
        GRID_POINTS,
        Spacing::Log,
        GOLDEN_TOL,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(m)
}

/// Bath channel of a bosonic sample at signed frequency `omega`
/// (positive: emission, negative: absorption).
pub fn bosonic_channel(omega: f64, temperature: f64, density: &OhmicDensity) -> Result<BathChannel> {
    let r = jump_rates(omega.abs(), temperature, density)?;
    Ok(BathChannel {
        omega,
        gamma: if omega > 0.0 { r.gamma_plus } else { r.gamma_minus },
        dgamma_dt: r.dgamma_dt,
    })
}

/// Optimal-H bound for a continuous bath: `channel(ω)` gives the channel at
/// signed frequency `ω`, searched over `0 < |ω| ≤ upper` for both signs.
pub fn bound_optimal_h_spectrum<F: Fn(f64) -> Result<BathChannel>>(
    channel: F,
    upper: f64,
    coupling: &HermitianOperator,
) -> Result<OptimalHBound> {
    let mut best: Option<BathChannel> = None;
    for sign in [1.0, -1.0] {
        let m = maximize_frequency_merit(|x| Ok(channel(sign * x)?.merit()), upper)?;
        let ch = channel(sign * m.x)?;
        if best.is_none_or(|b| ch.merit() > b.merit()) {
            best = Some(ch);
        }
    }
    optimal_h_from_best(best.expect("two candidates"), coupling)
}

/// [`bound_optimal_h_spectrum`] for a bosonic sample with cutoff `Ω`.
pub fn bound_optimal_h_bosonic(
    temperature: f64,
    density: &OhmicDensity,
    coupling: &HermitianOperator,
) -> Result<OptimalHBound> {
    if !(temperature > 0.0) {
        return Err(Error::domain(format!("temperature T = {temperature} must be positive")));
    }
    bound_optimal_h_spectrum(|w| bosonic_channel(w, temperature, density), density.cutoff(), coupling)
}
