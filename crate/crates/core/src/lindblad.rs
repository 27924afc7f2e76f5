//! Lindblad models with temperature-dependent rates and Lamb shift.
//!
//! A model carries the probe Hamiltonian `H`, the Lamb-shift Hamiltonian
//! `H_LS` and its temperature derivative, the spectral projectors of `H`, and
//! the jump channels `(ω, A_ω, γ_ω, γ̇_ω)`. The generator is
//!
//! ```text
//! L(ρ) = -i[H + H_LS, ρ] + Σ_ω γ_ω (A_ω ρ A_ω† - ½{A_ω†A_ω, ρ})
//! ```
//!
//! and its temperature derivative `L̇` replaces `H_LS → Ḣ_LS`, `γ → γ̇` and
//! drops `H`. Sensitivities `∂ρ_t/∂T` come from the exact block-triangular
//! generator `[[L, 0], [L̇, L]]` acting on `(ρ, σ)`.

use crate::error::{Error, Result};
use crate::operators::{
    anticommutator, c, commutator, expm_action, hs_norm, CMatrix, CVector, DensityOperator, HermitianOperator,
    ProjectorFamily, DEGENERACY_GAP, I,
};

/// Blocks with Hilbert–Schmidt norm below this (relative to the coupling) are zero.
const BLOCK_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct JumpChannel {
    pub omega: f64,
    pub op: CMatrix,
    pub gamma: f64,
    pub dgamma_dt: f64,
    /// Lamb coefficient `s_ω` and its derivative; informational, the model's
    /// `H_LS` operators are authoritative.
    pub lamb: f64,
    pub dlamb_dt: f64,
}

/// Bath data at one Bohr frequency: rate, Lamb coefficient and their T-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelRates {
    pub gamma: f64,
    pub dgamma_dt: f64,
    pub lamb: f64,
    pub dlamb_dt: f64,
}

impl ChannelRates {
    pub fn new(gamma: f64, dgamma_dt: f64, lamb: f64, dlamb_dt: f64) -> Self {
        Self {
            gamma,
            dgamma_dt,
            lamb,
            dlamb_dt,
        }
    }

    pub fn without_lamb(gamma: f64, dgamma_dt: f64) -> Self {
        Self::new(gamma, dgamma_dt, 0.0, 0.0)
    }
}

/// Supplies bath data for the Bohr frequencies a Hamiltonian needs.
pub trait BathSpectrum {
    fn channel(&self, omega: f64) -> Option<ChannelRates>;
}

impl<F: Fn(f64) -> Option<ChannelRates>> BathSpectrum for F {
    fn channel(&self, omega: f64) -> Option<ChannelRates> {
        self(omega)
    }
}

/// A finite table of frequencies; lookups match within the degeneracy gap.
#[derive(Debug, Clone, Default)]
pub struct FrequencyTable {
    entries: Vec<(f64, ChannelRates)>,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, omega: f64, rates: ChannelRates) -> Self {
        self.entries.push((omega, rates));
        self
    }

    pub fn insert(&mut self, omega: f64, rates: ChannelRates) {
        self.entries.push((omega, rates));
    }
}

impl BathSpectrum for FrequencyTable {
    fn channel(&self, omega: f64) -> Option<ChannelRates> {
        self.entries
            .iter()
            .find(|(w, _)| (w - omega).abs() <= DEGENERACY_GAP)
            .map(|&(_, r)| r)
    }
}

#[derive(Debug, Clone)]
pub struct LindbladModel {
    hamiltonian: HermitianOperator,
    lamb_shift: HermitianOperator,
    lamb_shift_dt: HermitianOperator,
    projectors: ProjectorFamily,
    channels: Vec<JumpChannel>,
}

/// State and temperature sensitivity after propagation.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub rho: DensityOperator,
    pub drho_dt: HermitianOperator,
}

impl LindbladModel {
    /// Builds the secular master equation of `H` coupled through `A`:
    /// `A_ω = Σ_{ε'-ε=ω} Π_ε A Π_ε'`, `H_LS = Σ s_ω A_ω†A_ω`.
    pub fn build_microscopic(
        hamiltonian: &HermitianOperator,
        coupling: &HermitianOperator,
        bath: &dyn BathSpectrum,
    ) -> Result<Self> {
        if hamiltonian.dim() != coupling.dim() {
            return Err(Error::InvalidModel("H and A dimensions differ".into()));
        }
        let d = hamiltonian.dim();
        let projectors = ProjectorFamily::from_hermitian(hamiltonian);
        let a = coupling.matrix();
        let scale = hs_norm(a).max(1.0);

        // Group nonzero blocks Π_ε A Π_ε' by Bohr frequency ε' - ε.
        let mut groups: Vec<(f64, CMatrix)> = Vec::new();
        for (eps, p) in projectors.iter() {
            for (eps_from, q) in projectors.iter() {
                let block = p * a * q;
                if hs_norm(&block) <= BLOCK_TOL * scale {
                    continue;
                }
                let omega = eps_from - eps;
                match groups.iter_mut().find(|(w, _)| (w - omega).abs() <= DEGENERACY_GAP) {
                    Some((_, acc)) => *acc += block,
                    None => groups.push((omega, block)),
                }
            }
        }
        groups.sort_by(|x, y| y.0.total_cmp(&x.0));

        let mut lamb = CMatrix::zeros(d, d);
        let mut lamb_dt = CMatrix::zeros(d, d);
        let mut channels = Vec::with_capacity(groups.len());
        for (omega, op) in groups {
            let rates = bath.channel(omega).ok_or(Error::MissingFrequency(omega))?;
            let ada = op.adjoint() * &op;
            lamb += &ada * c(rates.lamb);
            lamb_dt += &ada * c(rates.dlamb_dt);
            channels.push(JumpChannel {
                omega,
                op,
                gamma: rates.gamma,
                dgamma_dt: rates.dgamma_dt,
                lamb: rates.lamb,
                dlamb_dt: rates.dlamb_dt,
            });
        }
        Self::from_channels(
            hamiltonian.clone(),
            HermitianOperator::symmetrized(lamb),
            HermitianOperator::symmetrized(lamb_dt),
            projectors,
            channels,
        )
    }

    /// Assembles a model from explicit channels, checking rates and the
    /// rule that each ordered pair of distinct levels belongs to at most one channel.
    pub fn from_channels(
        hamiltonian: HermitianOperator,
        lamb_shift: HermitianOperator,
        lamb_shift_dt: HermitianOperator,
        projectors: ProjectorFamily,
        channels: Vec<JumpChannel>,
    ) -> Result<Self> {
        let d = hamiltonian.dim();
        if lamb_shift.dim() != d || lamb_shift_dt.dim() != d || projectors.dim() != d {
            return Err(Error::InvalidModel("operator dimensions differ".into()));
        }
        let model = Self {
            hamiltonian,
            lamb_shift,
            lamb_shift_dt,
            projectors,
            channels,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        let mut seen: Vec<(usize, usize, usize)> = Vec::new();
        for (k, ch) in self.channels.iter().enumerate() {
            if ch.op.nrows() != d || ch.op.ncols() != d {
                return Err(Error::InvalidModel(format!("channel {k} has the wrong dimension")));
            }
            if !(ch.gamma >= 0.0) || !ch.dgamma_dt.is_finite() {
                return Err(Error::InvalidModel(format!(
                    "channel {k} has invalid rate {} / derivative {}",
                    ch.gamma, ch.dgamma_dt
                )));
            }
            for (to, from) in self.transitions(k) {
                if to == from {
                    continue;
                }
                if let Some(&(_, _, other)) = seen.iter().find(|&&(t, f, _)| t == to && f == from) {
                    return Err(Error::InvalidModel(format!(
                        "level pair ({to}, {from}) appears in channels {other} and {k}"
                    )));
                }
                seen.push((to, from, k));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.hamiltonian
    }

    pub fn lamb_shift(&self) -> &HermitianOperator {
        &self.lamb_shift
    }

    pub fn lamb_shift_dt(&self) -> &HermitianOperator {
        &self.lamb_shift_dt
    }

    pub fn projectors(&self) -> &ProjectorFamily {
        &self.projectors
    }

    pub fn channels(&self) -> &[JumpChannel] {
        &self.channels
    }

    /// Level-index pairs `(ε, ε')` with a nonzero block `Π_ε A_k Π_ε'`
    /// (the jump takes `ε'` to `ε`).
    pub fn transitions(&self, k: usize) -> Vec<(usize, usize)> {
        let op = &self.channels[k].op;
        let scale = hs_norm(op).max(f64::MIN_POSITIVE);
        let mut out = Vec::new();
        for i in 0..self.projectors.len() {
            for j in 0..self.projectors.len() {
                let block = self.projectors.projector(i) * op * self.projectors.projector(j);
                if hs_norm(&block) > BLOCK_TOL * scale {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Same model with `H_LS` and `Ḣ_LS` multiplied by `factor`.
    pub fn with_lamb_scaled(&self, factor: f64) -> Self {
        let channels = self
            .channels
            .iter()
            .map(|ch| JumpChannel {
                lamb: ch.lamb * factor,
                dlamb_dt: ch.dlamb_dt * factor,
                ..ch.clone()
            })
            .collect();
        Self {
            lamb_shift: self.lamb_shift.scaled(factor),
            lamb_shift_dt: self.lamb_shift_dt.scaled(factor),
            channels,
            ..self.clone()
        }
    }

    /// Same model with the Lamb shift removed.
    pub fn without_lamb(&self) -> Self {
        self.with_lamb_scaled(0.0)
    }

    fn apply(&self, coherent: &CMatrix, rates: impl Fn(&JumpChannel) -> f64, rho: &CMatrix) -> CMatrix {
        let mut out = commutator(coherent, rho) * (-I);
        for ch in &self.channels {
            let g = rates(ch);
            if g == 0.0 {
                continue;
            }
            let a = &ch.op;
            let ada = a.adjoint() * a;
            out += (a * rho * a.adjoint() - anticommutator(&ada, rho) * c(0.5)) * c(g);
        }
        out
    }

    /// `L(ρ)`; works for any square matrix, not only states.
    pub fn generator_apply(&self, rho: &CMatrix) -> CMatrix {
        let k = self.hamiltonian.matrix() + self.lamb_shift.matrix();
        self.apply(&k, |ch| ch.gamma, rho)
    }

    /// `L̇(ρ)`, the temperature derivative of the generator.
    pub fn generator_dt_apply(&self, rho: &CMatrix) -> CMatrix {
        self.apply(self.lamb_shift_dt.matrix(), |ch| ch.dgamma_dt, rho)
    }

    fn superoperator_of(&self, coherent: &CMatrix, rates: impl Fn(&JumpChannel) -> f64) -> CMatrix {
        let d = self.dim();
        let id = CMatrix::identity(d, d);
        // Column-major vec: vec(A X B) = (Bᵀ ⊗ A) vec(X).
        let mut s = (id.kronecker(coherent) - coherent.transpose().kronecker(&id)) * (-I);
        for ch in &self.channels {
            let g = rates(ch);
            if g == 0.0 {
                continue;
            }
            let a = &ch.op;
            let ada = a.adjoint() * a;
            let term =
                a.conjugate().kronecker(a) - id.kronecker(&ada) * c(0.5) - ada.transpose().kronecker(&id) * c(0.5);
            s += term * c(g);
        }
        s
    }

    /// Matrix of `L` acting on column-major `vec(ρ)`.
    pub fn superoperator(&self) -> CMatrix {
        let k = self.hamiltonian.matrix() + self.lamb_shift.matrix();
        self.superoperator_of(&k, |ch| ch.gamma)
    }

    /// Matrix of `L̇` acting on column-major `vec(ρ)`.
    pub fn superoperator_dt(&self) -> CMatrix {
        self.superoperator_of(self.lamb_shift_dt.matrix(), |ch| ch.dgamma_dt)
    }

    /// Propagates `(ρ, ∂ρ/∂T)` for time `t` starting from a temperature-independent state.
    pub fn evolve_with_sensitivity(&self, rho0: &DensityOperator, t: f64) -> Result<Evolved> {
        let d = self.dim();
        self.evolve_pair(rho0, &CMatrix::zeros(d, d), t)
    }

    /// Propagates `(ρ, σ)` under `d/dt (ρ, σ) = (Lρ, Lσ + L̇ρ)`.
    pub fn evolve_pair(&self, rho0: &DensityOperator, sigma0: &CMatrix, t: f64) -> Result<Evolved> {
        let d = self.dim();
        if rho0.dim() != d || sigma0.nrows() != d || sigma0.ncols() != d {
            return Err(Error::InvalidModel("state dimension mismatch".into()));
        }
        if !(t >= 0.0) {
            return Err(Error::domain(format!("propagation time t = {t} must be nonnegative")));
        }
        let n = d * d;
        let l = self.superoperator();
        let ld = self.superoperator_dt();
        let mut aug = CMatrix::zeros(2 * n, 2 * n);
        aug.view_mut((0, 0), (n, n)).copy_from(&l);
        aug.view_mut((n, n), (n, n)).copy_from(&l);
        aug.view_mut((n, 0), (n, n)).copy_from(&ld);
        let mut v = CVector::zeros(2 * n);
        v.rows_mut(0, n).copy_from_slice(rho0.matrix().as_slice());
        v.rows_mut(n, n).copy_from_slice(sigma0.as_slice());
        let out = expm_action(&aug, &v, t)?;
        let rho = CMatrix::from_column_slice(d, d, out.rows(0, n).as_slice());
        let sigma = CMatrix::from_column_slice(d, d, out.rows(n, n).as_slice());
        let rho = HermitianOperator::symmetrized(rho).into_matrix();
        Ok(Evolved {
            rho: DensityOperator::new(rho)?,
            drho_dt: HermitianOperator::symmetrized(sigma),
        })
    }
}

/// The qubit probe `H = (w/2)(|1⟩⟨1| - |0⟩⟨0|)`, `A = σ_x`, with channels
/// `A_w = σ₋` (rate `γ_w`, Lamb `s_w`) and `A_{-w} = σ₊` (rate `γ_{-w}`, Lamb `s_{-w}`).
pub fn qubit_model(w: f64, emission: ChannelRates, absorption: ChannelRates) -> Result<LindbladModel> {
    if !(w > 0.0) {
        return Err(Error::domain(format!("qubit frequency w = {w} must be positive")));
    }
    let h = HermitianOperator::from_real_diagonal(&[-0.5 * w, 0.5 * w]);
    let a = HermitianOperator::new(crate::operators::pauli::sigma_x())?;
    let table = FrequencyTable::new().with(w, emission).with(-w, absorption);
    LindbladModel::build_microscopic(&h, &a, &table)
}

/// Microscopic qubit model for a bosonic sample at temperature `T`.
pub fn bosonic_qubit_model(
    w: f64,
    temperature: f64,
    density: &crate::spectral::OhmicDensity,
    with_lamb: bool,
) -> Result<LindbladModel> {
    let rates = crate::spectral::jump_rates(w, temperature, density)?;
    let (s, sd) = if with_lamb {
        let r = crate::spectral::bath_response(w, temperature, density)?;
        (r.lamb_coefficients(), r.lamb_derivatives())
    } else {
        ((0.0, 0.0), (0.0, 0.0))
    };
    qubit_model(
        w,
        ChannelRates::new(rates.gamma_plus, rates.dgamma_dt, s.0, sd.0),
        ChannelRates::new(rates.gamma_minus, rates.dgamma_dt, s.1, sd.1),
    )
}
