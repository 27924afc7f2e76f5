//! N-qubit probes coupled collectively through `J_x = Σσ_x`, restricted to the
//! symmetric (Dicke) sector `|ψ_n⟩`, `n = 0..N` excitations.
//!
//! Populations follow a birth-death process with lowering weights
//! `Γ_n = n(N+1-n)`; the temperature sensitivity is propagated with the same
//! augmented-generator trick as in [`crate::lindblad`].

use nalgebra::{DMatrix, DVector};

use crate::bounds::{maximize_frequency_merit, BathChannel};
use crate::error::{Error, Result};
use crate::fisher::{classical_fisher, OutcomeDistribution};
use crate::lindblad::{ChannelRates, FrequencyTable, LindbladModel};
use crate::operators::{c, expm_action_real, CMatrix, HermitianOperator};
use crate::optimize::Maximum;
use crate::spectral::{bose_occupation, bose_occupation_dt, OhmicDensity};

/// Gaps below this are treated as degenerate and carry no information.
pub const ZERO_GAP: f64 = 1e-9;
const POSITIVITY_TOL: f64 = 1e-10;

/// `Γ_n = n(N+1-n)`, zero outside `1..=N`.
pub fn gamma_n(n_qubits: usize, n: usize) -> f64 {
    if n == 0 || n > n_qubits {
        0.0
    } else {
        (n * (n_qubits + 1 - n)) as f64
    }
}

fn require_even(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || !n_qubits.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "closed form needs an even, positive N (got {n_qubits})"
        )));
    }
    Ok(())
}

/// `J_-` on the Dicke basis: `J_-|ψ_n⟩ = √Γ_n |ψ_{n-1}⟩`.
pub fn dicke_lowering(n_qubits: usize) -> CMatrix {
    let d = n_qubits + 1;
    let mut m = CMatrix::zeros(d, d);
    for n in 1..d {
        m[(n - 1, n)] = c(gamma_n(n_qubits, n).sqrt());
    }
    m
}

/// `J_z = ½Σσ_z`, eigenvalue `n - N/2` on `|ψ_n⟩`.
pub fn dicke_jz(n_qubits: usize) -> HermitianOperator {
    let diag: Vec<f64> = (0..=n_qubits).map(|n| n as f64 - 0.5 * n_qubits as f64).collect();
    HermitianOperator::from_real_diagonal(&diag)
}

/// `J_x = Σσ_x = J_+ + J_-` (spectrum `-N, -N+2, …, N`).
pub fn dicke_jx(n_qubits: usize) -> HermitianOperator {
    let l = dicke_lowering(n_qubits);
    HermitianOperator::symmetrized(&l + l.adjoint())
}

/// Collective bath rates at one probe frequency: emission `γ_e`, absorption
/// `γ_a` and their temperature derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderRates {
    pub emission: f64,
    pub absorption: f64,
    pub demission_dt: f64,
    pub dabsorption_dt: f64,
}

impl LadderRates {
    pub fn emission_merit(&self) -> f64 {
        merit(self.demission_dt, self.emission)
    }

    pub fn absorption_merit(&self) -> f64 {
        merit(self.dabsorption_dt, self.absorption)
    }
}

fn merit(d: f64, g: f64) -> f64 {
    if g > 0.0 {
        d * d / g
    } else if d == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Bosonic sample for the collective probe: `γ_ω = J(|ω|)(1+N)` for emission
/// (`ω > 0`) and `J(|ω|)N` for absorption (`ω < 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveBath {
    pub density: OhmicDensity,
    pub temperature: f64,
}

impl CollectiveBath {
    pub fn new(density: OhmicDensity, temperature: f64) -> Result<Self> {
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::domain(format!("temperature T = {temperature} must be positive")));
        }
        Ok(Self { density, temperature })
    }

    /// Channel at signed frequency `omega`; `|omega|` must lie in `(0, Ω]`.
    pub fn channel(&self, omega: f64) -> Result<BathChannel> {
        let x = omega.abs();
        if !(x > 0.0 && x <= self.density.cutoff()) {
            return Err(Error::domain(format!("frequency {omega} outside (0, Ω]")));
        }
        let j = self.density.eval(x);
        let n = bose_occupation(x, self.temperature)?;
        let dn = bose_occupation_dt(x, self.temperature)?;
        Ok(BathChannel {
            omega,
            gamma: if omega > 0.0 { j * (1.0 + n) } else { j * n },
            dgamma_dt: j * dn,
        })
    }

    /// `γ̇_ω²/γ_ω`; zero for a degenerate gap.
    pub fn merit(&self, omega: f64) -> Result<f64> {
        if omega.abs() < ZERO_GAP {
            return Ok(0.0);
        }
        Ok(self.channel(omega)?.merit())
    }

    pub fn ladder_rates(&self, w: f64) -> Result<LadderRates> {
        let e = self.channel(w)?;
        let a = self.channel(-w)?;
        Ok(LadderRates {
            emission: e.gamma,
            absorption: a.gamma,
            demission_dt: e.dgamma_dt,
            dabsorption_dt: a.dgamma_dt,
        })
    }
}

/// Birth-death generator on `(p_0, …, p_N)`.
pub fn ladder_generator(n_qubits: usize, emission: f64, absorption: f64) -> DMatrix<f64> {
    let d = n_qubits + 1;
    let mut g = DMatrix::zeros(d, d);
    for m in 0..d {
        let down = gamma_n(n_qubits, m);
        let up = gamma_n(n_qubits, m + 1);
        g[(m, m)] = -(emission * down + absorption * up);
        if m + 1 < d {
            g[(m, m + 1)] = emission * up;
        }
        if m > 0 {
            g[(m, m - 1)] = absorption * down;
        }
    }
    g
}

/// Populations and their temperature derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeLadder {
    pub n_qubits: usize,
    pub p: Vec<f64>,
    pub dp_dt: Vec<f64>,
}

impl DickeLadder {
    pub fn gamma(&self) -> Vec<f64> {
        (1..=self.n_qubits).map(|n| gamma_n(self.n_qubits, n)).collect()
    }

    pub fn distribution(&self) -> Result<OutcomeDistribution> {
        let p: Vec<f64> = self.p.iter().map(|&x| x.max(0.0)).collect();
        let s: f64 = p.iter().sum();
        let p = p.into_iter().map(|x| x / s).collect();
        let mean = self.dp_dt.iter().sum::<f64>() / self.dp_dt.len() as f64;
        OutcomeDistribution::new(p, self.dp_dt.iter().map(|x| x - mean).collect())
    }
}

/// Propagates a unit mass at `prepare_n` for time `dt`.
pub fn propagate_ladder(n_qubits: usize, rates: &LadderRates, prepare_n: usize, dt: f64) -> Result<DickeLadder> {
    if prepare_n > n_qubits {
        return Err(Error::domain(format!(
            "initial level {prepare_n} exceeds N = {n_qubits}"
        )));
    }
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::domain(format!("interval δt = {dt} must be nonnegative")));
    }
    if !(rates.emission >= 0.0 && rates.absorption >= 0.0) {
        return Err(Error::domain("ladder rates must be nonnegative"));
    }
    let d = n_qubits + 1;
    let g = ladder_generator(n_qubits, rates.emission, rates.absorption);
    let gd = ladder_generator(n_qubits, rates.demission_dt, rates.dabsorption_dt);
    let mut aug = DMatrix::zeros(2 * d, 2 * d);
    aug.view_mut((0, 0), (d, d)).copy_from(&g);
    aug.view_mut((d, d), (d, d)).copy_from(&g);
    aug.view_mut((d, 0), (d, d)).copy_from(&gd);
    let mut v = DVector::zeros(2 * d);
    v[prepare_n] = 1.0;
    let out = expm_action_real(&aug, &v, dt)?;
    let p: Vec<f64> = out.rows(0, d).iter().copied().collect();
    if let Some(&bad) = p.iter().find(|&&x| x < -POSITIVITY_TOL) {
        return Err(Error::NoConvergence(format!("population {bad:e} went negative")));
    }
    Ok(DickeLadder {
        n_qubits,
        p,
        dp_dt: out.rows(d, d).iter().copied().collect(),
    })
}

/// Fisher information per unit time of measuring the ladder level after `dt`.
pub fn ladder_fi_rate(n_qubits: usize, rates: &LadderRates, prepare_n: usize, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::domain(format!("interval δt = {dt} must be positive")));
    }
    let ladder = propagate_ladder(n_qubits, rates, prepare_n, dt)?;
    Ok(classical_fisher(&ladder.distribution()?)? / dt)
}

/// [`ladder_fi_rate`] along a grid of intervals.
pub fn ladder_fi_rate_scan(n_qubits: usize, dts: &[f64], rates: &LadderRates, prepare_n: usize) -> Result<Vec<f64>> {
    dts.iter()
        .map(|&dt| ladder_fi_rate(n_qubits, rates, prepare_n, dt))
        .collect()
}

/// `max_n [Γ_n f_e + Γ_{n+1} f_a]`: the fixed-H bound of `H = wJ_z`, evaluated on
/// the diagonal of the Dicke sector. Ties go to the smaller `n`.
pub fn dicke_fixed_h_bound(n_qubits: usize, rates: &LadderRates) -> (usize, f64) {
    let fe = rates.emission_merit();
    let fa = rates.absorption_merit();
    let mut best = (0, f64::NEG_INFINITY);
    for n in 0..=n_qubits {
        let ge = gamma_n(n_qubits, n);
        let ga = gamma_n(n_qubits, n + 1);
        let v = term(ge, fe) + term(ga, fa);
        if v > best.1 {
            best = (n, v);
        }
    }
    best
}

fn term(weight: f64, merit: f64) -> f64 {
    if weight == 0.0 {
        0.0
    } else {
        weight * merit
    }
}

/// `(N/2)(N/2+1)(f_e + f_a)`, the measure-and-prepare rate from `|ψ_{N/2}⟩`.
pub fn dicke_half_filling_rate(n_qubits: usize, rates: &LadderRates) -> Result<f64> {
    require_even(n_qubits)?;
    let h = 0.5 * n_qubits as f64;
    Ok(h * (h + 1.0) * (rates.emission_merit() + rates.absorption_merit()))
}

/// Microscopic model of `H = wJ_z` coupled through `J_x` in the Dicke sector.
pub fn dicke_model(n_qubits: usize, w: f64, rates: &LadderRates) -> Result<LindbladModel> {
    if n_qubits == 0 || !(w > 0.0) {
        return Err(Error::domain("Dicke model needs N ≥ 1 and w > 0"));
    }
    let h = dicke_jz(n_qubits).scaled(w);
    let table = FrequencyTable::new()
        .with(w, ChannelRates::without_lamb(rates.emission, rates.demission_dt))
        .with(-w, ChannelRates::without_lamb(rates.absorption, rates.dabsorption_dt));
    LindbladModel::build_microscopic(&h, &dicke_jx(n_qubits), &table)
}

/// Smallest `δt` on a bisection in `log δt` where the rate from `prepare_n`
/// falls to half of `reference`.
pub fn half_value_dt(
    n_qubits: usize,
    rates: &LadderRates,
    prepare_n: usize,
    reference: f64,
    bracket: (f64, f64),
) -> Result<f64> {
    let f = |dt: f64| ladder_fi_rate(n_qubits, rates, prepare_n, dt).map(|r| r - 0.5 * reference);
    let (mut lo, mut hi) = (bracket.0.ln(), bracket.1.ln());
    if f(lo.exp())? <= 0.0 || f(hi.exp())? > 0.0 {
        return Err(Error::NoConvergence("half-value interval not bracketed".into()));
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if f(mid.exp())? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Spectrum `e_n = w(n - N/2) + b(n - N/2)²` of `H = wJ_z + bJ_z²`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractingSpectrum {
    pub n_qubits: usize,
    pub w: f64,
    pub b: f64,
    pub energies: Vec<f64>,
}

impl InteractingSpectrum {
    pub fn new(n_qubits: usize, w: f64, b: f64) -> Self {
        let half = 0.5 * n_qubits as f64;
        let energies = (0..=n_qubits)
            .map(|n| {
                let k = n as f64 - half;
                w * k + b * k * k
            })
            .collect();
        Self {
            n_qubits,
            w,
            b,
            energies,
        }
    }

    /// `(e_n - e_{n-1}, e_n - e_{n+1})`; `None` at the ends of the ladder.
    pub fn gaps(&self, n: usize) -> (Option<f64>, Option<f64>) {
        let e = &self.energies;
        (
            (n > 0).then(|| e[n] - e[n - 1]),
            (n < self.n_qubits).then(|| e[n] - e[n + 1]),
        )
    }

    /// Ground level; ties go to the smaller `n`.
    pub fn ground_index(&self) -> usize {
        let mut best = 0;
        for (n, &e) in self.energies.iter().enumerate() {
            if e < self.energies[best] {
                best = n;
            }
        }
        best
    }
}

pub fn interacting_ground_index(n_qubits: usize, w: f64, b: f64) -> usize {
    InteractingSpectrum::new(n_qubits, w, b).ground_index()
}

/// Measure-and-prepare rate from level `n` of `H = wJ_z + bJ_z²`:
/// `Γ_n f(e_n - e_{n-1}) + Γ_{n+1} f(e_n - e_{n+1})`.
pub fn two_gap_rate(n_qubits: usize, n: usize, w: f64, b: f64, bath: &CollectiveBath) -> Result<f64> {
    if n > n_qubits {
        return Err(Error::domain(format!("level {n} exceeds N = {n_qubits}")));
    }
    let s = InteractingSpectrum::new(n_qubits, w, b);
    let (down, up) = s.gaps(n);
    let mut rate = 0.0;
    if let Some(g) = down {
        rate += term(gamma_n(n_qubits, n), bath.merit(g)?);
    }
    if let Some(g) = up {
        rate += term(gamma_n(n_qubits, n + 1), bath.merit(g)?);
    }
    Ok(rate)
}

/// Rate of the autonomous scheme, which resets the probe to its ground level.
pub fn autonomous_fi_rate(n_qubits: usize, w: f64, b: f64, bath: &CollectiveBath) -> Result<f64> {
    let n = interacting_ground_index(n_qubits, w, b);
    two_gap_rate(n_qubits, n, w, b, bath)
}

/// Autonomous rate when `b > w`, where `|ψ_{N/2}⟩` is the ground level.
pub fn autonomous_fi_rate_closed(n_qubits: usize, w: f64, b: f64, bath: &CollectiveBath) -> Result<f64> {
    require_even(n_qubits)?;
    if !(b > w) {
        return Err(Error::domain(format!("closed form needs b > w (got b = {b}, w = {w})")));
    }
    two_gap_rate(n_qubits, n_qubits / 2, w, b, bath)
}

/// At `w = 0` the autonomous rate is `½(N² + 2N) f(-b)`; maximizes it over
/// `b ∈ (0, Ω]`. Returns the optimal `b` and the rate.
pub fn autonomous_zero_field_optimum(n_qubits: usize, bath: &CollectiveBath) -> Result<Maximum> {
    require_even(n_qubits)?;
    let best = maximize_frequency_merit(|b| bath.merit(-b), bath.density.cutoff())?;
    let nf = n_qubits as f64;
    Ok(Maximum {
        x: best.x,
        value: 0.5 * (nf * nf + 2.0 * nf) * best.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rates() -> LadderRates {
        LadderRates {
            emission: 1.3,
            absorption: 0.4,
            demission_dt: 0.2,
            dabsorption_dt: 0.2,
        }
    }

    #[test]
    fn generator_conserves_probability() {
        let g = ladder_generator(7, 1.3, 0.4);
        for j in 0..8 {
            assert!(g.column(j).sum().abs() < 1e-14);
        }
    }

    #[test]
    fn pure_decay_weights() {
        let g = ladder_generator(2, 1.0, 0.0);
        assert_eq!(g[(0, 1)], 2.0);
        assert_eq!(g[(1, 2)], 2.0);
        assert_eq!(g[(2, 2)], -2.0);
    }

    #[test]
    fn half_filling_weights_coincide() {
        let n = 10;
        assert_eq!(gamma_n(n, 5), gamma_n(n, 6));
        assert_eq!(gamma_n(n, 5), 30.0);
    }

    #[test]
    fn jx_spectrum() {
        let eig = crate::operators::hermitian_eig(&dicke_jx(4));
        let expect = [-4.0, -2.0, 0.0, 2.0, 4.0];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn fixed_bound_sits_at_half_filling() {
        let (n, v) = dicke_fixed_h_bound(10, &rates());
        assert_eq!(n, 5);
        assert!((v - dicke_half_filling_rate(10, &rates()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ground_index_regimes() {
        assert_eq!(interacting_ground_index(10, 1.0, 2.0), 5);
        assert_eq!(interacting_ground_index(10, 1.0, 1e-6), 0);
    }

    #[test]
    fn odd_n_rejected_by_closed_forms() {
        assert!(dicke_half_filling_rate(3, &rates()).is_err());
    }

    #[test]
    fn zero_interval_leaves_state() {
        let l = propagate_ladder(4, &rates(), 2, 0.0).unwrap();
        assert_eq!(l.p[2], 1.0);
        assert!(l.dp_dt.iter().all(|&x| x == 0.0));
    }
}
