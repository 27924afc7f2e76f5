//! Bath response of a bosonic sample with a power-law spectral density.
//!
//! Rates follow the emission/absorption convention
//! `γ_w = 2πJ(w)(1 + N(w))` (probe loses energy `w`) and
//! `γ_{-w} = 2πJ(w)N(w)` (probe gains energy `w`).
//!
//! Lamb-shift coefficients of the qubit probe are `s_w = -(Δ_T + Δ)` and
//! `s_{-w} = Δ_T`, with principal-value integrals
//! `Δ = P∫ J(x)/(x-w)` and `Δ_T = P∫ J(x)N(x)/(x-w)` over `[0, Ω]`.
//! Substituting these gives `ṡ_w = -Δ̇_T`; some texts write the opposite sign.
//! Every bound in this crate depends on `ṡ_w²` only, so [`BathResponse`]
//! stores `Δ̇_T` and exposes the substituted convention through
//! [`BathResponse::lamb_derivatives`].

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};

/// Power-law spectral density `J(x) = g x^α` on `(0, Ω]`, zero above the cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicDensity {
    coupling: f64,
    ohmicity: f64,
    cutoff: f64,
}

impl OhmicDensity {
    pub fn new(coupling: f64, ohmicity: f64, cutoff: f64) -> Result<Self> {
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::domain(format!("coupling g = {coupling} must be positive")));
        }
        if !(ohmicity >= 0.0 && ohmicity.is_finite()) {
            return Err(Error::domain(format!("ohmicity α = {ohmicity} must be nonnegative")));
        }
        if !(cutoff > 0.0) {
            return Err(Error::domain(format!("cutoff Ω = {cutoff} must be positive")));
        }
        Ok(Self {
            coupling,
            ohmicity,
            cutoff,
        })
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn ohmicity(&self) -> f64 {
        self.ohmicity
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 || x > self.cutoff {
            0.0
        } else {
            self.coupling * x.powf(self.ohmicity)
        }
    }
}

/// Bose–Einstein occupation `N(w) = 1/(e^{w/T} - 1)`; exactly zero at `T = 0`.
pub fn bose_occupation(w: f64, temperature: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::domain(format!("frequency w = {w} must be positive")));
    }
    if !(temperature >= 0.0) {
        return Err(Error::domain(format!(
            "temperature T = {temperature} must be nonnegative"
        )));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = w / temperature;
    let e = (-x).exp();
    if e == 0.0 {
        return Ok(0.0);
    }
    Ok(e / -(-x).exp_m1())
}

/// Temperature derivative `Ṅ(w) = (w/T²) e^{w/T} N(w)²`.
pub fn bose_occupation_dt(w: f64, temperature: f64) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::domain(format!("frequency w = {w} must be positive")));
    }
    if !(temperature > 0.0) {
        return Err(Error::domain(format!(
            "temperature T = {temperature} must be positive for Ṅ"
        )));
    }
    let x = w / temperature;
    let e = (-x).exp();
    if e == 0.0 {
        return Ok(0.0);
    }
    let denom = -(-x).exp_m1();
    Ok(x / temperature * e / (denom * denom))
}

/// `Ṅ` extended by continuity to `T = 0` (where it vanishes).
fn occupation_dt_or_zero(w: f64, temperature: f64) -> Result<f64> {
    if temperature == 0.0 {
        Ok(0.0)
    } else {
        bose_occupation_dt(w, temperature)
    }
}

/// Emission and absorption rates at one probe frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpRates {
    /// `γ_w`, emission (∝ 1 + N).
    pub gamma_plus: f64,
    /// `γ_{-w}`, absorption (∝ N).
    pub gamma_minus: f64,
    /// `γ̇_w = γ̇_{-w}`.
    pub dgamma_dt: f64,
}

pub fn jump_rates(w: f64, temperature: f64, density: &OhmicDensity) -> Result<JumpRates> {
    if !(w > 0.0) {
        return Err(Error::domain(format!("frequency w = {w} must be positive")));
    }
    if w > density.cutoff() {
        return Err(Error::domain(format!(
            "frequency w = {w} exceeds the cutoff Ω = {}",
            density.cutoff()
        )));
    }
    let j = 2.0 * PI * density.eval(w);
    let n = bose_occupation(w, temperature)?;
    let nd = occupation_dt_or_zero(w, temperature)?;
    Ok(JumpRates {
        gamma_plus: j * (1.0 + n),
        gamma_minus: j * n,
        dgamma_dt: j * nd,
    })
}

/// Principal value `P∫₀^Ω f(x)/(x-w) dx` by singularity subtraction.
pub fn principal_value_integral<F: Fn(f64) -> f64>(f: F, w: f64, upper: f64) -> Result<f64> {
    principal_value_integral_with_breaks(f, w, upper, &[])
}

/// As [`principal_value_integral`], with extra breakpoints seeding the
/// adaptive partition (used to resolve thermal features of width `T`).
pub fn principal_value_integral_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    w: f64,
    upper: f64,
    breaks: &[f64],
) -> Result<f64> {
    if !(w > 0.0 && w < upper) {
        return Err(Error::domain(format!(
            "singularity w = {w} must lie strictly inside (0, {upper})"
        )));
    }
    let fw = f(w);
    if !fw.is_finite() {
        return Err(Error::domain(format!("integrand is not finite at w = {w}")));
    }
    let regular = |x: f64| {
        let d = x - w;
        if d == 0.0 {
            0.0
        } else {
            (f(x) - fw) / d
        }
    };
    let mut points = breaks.to_vec();
    points.push(w);
    let body = integrate(regular, 0.0, upper, &points, QuadConfig::default())?;
    Ok(body.value + fw * ((upper - w) / w).ln())
}

/// Lamb-shift principal-value integrals at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambShifts {
    /// `Δ`, temperature independent.
    pub delta: f64,
    /// `Δ_T`.
    pub delta_t: f64,
    /// `Δ̇_T`.
    pub ddelta_t_dt: f64,
}

fn thermal_breaks(temperature: f64, upper: f64) -> Vec<f64> {
    [1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 40.0]
        .iter()
        .map(|k| k * temperature)
        .filter(|&x| x > 0.0 && x < upper)
        .collect()
}

pub fn lamb_shifts(w: f64, temperature: f64, density: &OhmicDensity) -> Result<LambShifts> {
    let upper = density.cutoff();
    if !(w > 0.0 && w < upper) {
        return Err(Error::domain(format!(
            "frequency w = {w} must lie strictly inside (0, Ω = {upper})"
        )));
    }
    if !(temperature >= 0.0) {
        return Err(Error::domain(format!(
            "temperature T = {temperature} must be nonnegative"
        )));
    }
    let j = |x: f64| density.eval(x);
    let delta = principal_value_integral(j, w, upper)?;
    if temperature == 0.0 {
        return Ok(LambShifts {
            delta,
            delta_t: 0.0,
            ddelta_t_dt: 0.0,
        });
    }
    // J(x)N(x) and J(x)Ṅ(x) both behave as g T^k x^{α-1} near x = 0.
    if density.ohmicity() <= 0.0 {
        return Err(Error::domain(
            "thermal Lamb integrals diverge logarithmically at x → 0 for α = 0",
        ));
    }
    let breaks = thermal_breaks(temperature, upper);
    let occupied = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            j(x) * bose_occupation(x, temperature).unwrap_or(0.0)
        }
    };
    let sensitivity = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            j(x) * bose_occupation_dt(x, temperature).unwrap_or(0.0)
        }
    };
    let delta_t = principal_value_integral_with_breaks(occupied, w, upper, &breaks)?;
    let ddelta_t_dt = principal_value_integral_with_breaks(sensitivity, w, upper, &breaks)?;
    Ok(LambShifts {
        delta,
        delta_t,
        ddelta_t_dt,
    })
}

/// Everything the qubit probe needs from the bath at frequency `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathResponse {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub dgamma_dt: f64,
    pub delta: f64,
    pub delta_t: f64,
    pub ddelta_t_dt: f64,
}

impl BathResponse {
    /// `(s_w, s_{-w}) = (-(Δ_T + Δ), Δ_T)`.
    pub fn lamb_coefficients(&self) -> (f64, f64) {
        (-(self.delta_t + self.delta), self.delta_t)
    }

    /// `(ṡ_w, ṡ_{-w}) = (-Δ̇_T, Δ̇_T)`.
    pub fn lamb_derivatives(&self) -> (f64, f64) {
        (-self.ddelta_t_dt, self.ddelta_t_dt)
    }

    pub fn rates(&self) -> JumpRates {
        JumpRates {
            gamma_plus: self.gamma_plus,
            gamma_minus: self.gamma_minus,
            dgamma_dt: self.dgamma_dt,
        }
    }
}

pub fn bath_response(w: f64, temperature: f64, density: &OhmicDensity) -> Result<BathResponse> {
    let rates = jump_rates(w, temperature, density)?;
    let lamb = lamb_shifts(w, temperature, density)?;
    Ok(BathResponse {
        gamma_plus: rates.gamma_plus,
        gamma_minus: rates.gamma_minus,
        dgamma_dt: rates.dgamma_dt,
        delta: lamb.delta,
        delta_t: lamb.delta_t,
        ddelta_t_dt: lamb.ddelta_t_dt,
    })
}

/// Least-squares slope of `ln|Δ_T|` against `ln T`; tends to `1 + α` as `T/w → 0`.
///
/// `Δ_T` is negative at low temperature (thermal weight sits at `x < w`), so the
/// fit uses its magnitude and rejects grids on which it vanishes or changes sign.
pub fn low_t_scaling_exponent(density: &OhmicDensity, w: f64, temperatures: &[f64]) -> Result<f64> {
    if temperatures.len() < 2 {
        return Err(Error::domain("need at least two temperatures"));
    }
    let mut xs = Vec::with_capacity(temperatures.len());
    let mut ys = Vec::with_capacity(temperatures.len());
    let mut sign = 0.0;
    for &t in temperatures {
        if !(t > 0.0 && t <= w / 100.0) {
            return Err(Error::domain(format!(
                "T = {t} outside the low-temperature window (0, w/100]"
            )));
        }
        let d = lamb_shifts(w, t, density)?.delta_t;
        if d == 0.0 || (sign != 0.0 && d.signum() != sign) {
            return Err(Error::domain(format!("Δ_T = {d} vanishes or changes sign at T = {t}")));
        }
        sign = d.signum();
        xs.push(t.ln());
        ys.push(d.abs().ln());
    }
    Ok(least_squares_slope(&xs, &ys))
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
