//! Classical and quantum Fisher information.

use crate::error::{Error, Result};
use crate::lindblad::LindbladModel;
use crate::operators::{hermitian_eig, CMatrix, DensityOperator, HermitianOperator, TRACE_TOL};

/// Support cutoff on `λᵢ + λⱼ` for the SLD.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Largest tolerated weight of `ρ̇` outside the retained support.
pub const LEAKAGE_TOL: f64 = 1e-8;
const ZERO_PROBABILITY: f64 = 1e-14;
const ZERO_DERIVATIVE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    p: Vec<f64>,
    dp_dt: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(p: Vec<f64>, dp_dt: Vec<f64>) -> Result<Self> {
        if p.len() != dp_dt.len() || p.is_empty() {
            return Err(Error::domain(
                "probabilities and derivatives must have equal, nonzero length",
            ));
        }
        if p.iter().any(|&x| !(x >= -ZERO_PROBABILITY) || !x.is_finite()) {
            return Err(Error::domain("negative probability"));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::domain(format!("probabilities sum to {total}")));
        }
        let dtotal: f64 = dp_dt.iter().sum();
        if dtotal.abs() > 1e-10 || dp_dt.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain(format!("derivatives sum to {dtotal}")));
        }
        Ok(Self { p, dp_dt })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.dp_dt
    }
}

/// `Σ ṗ²/p`; outcomes with vanishing probability and derivative are skipped.
pub fn classical_fisher(d: &OutcomeDistribution) -> Result<f64> {
    let mut total = 0.0;
    for (&p, &dp) in d.p.iter().zip(&d.dp_dt) {
        if p < ZERO_PROBABILITY {
            if dp.abs() < ZERO_DERIVATIVE {
                continue;
            }
            return Err(Error::IllDefinedFisher(format!(
                "outcome with p = {p:e} has derivative {dp:e}"
            )));
        }
        total += dp * dp / p;
    }
    Ok(total)
}

/// Outcome statistics of measuring `ρ` in the orthonormal basis given by the
/// columns of `basis`.
pub fn measurement_distribution(
    rho: &DensityOperator,
    drho: &HermitianOperator,
    basis: &CMatrix,
) -> Result<OutcomeDistribution> {
    let d = rho.dim();
    if basis.nrows() != d || basis.ncols() != d || drho.dim() != d {
        return Err(Error::InvalidOperator("basis dimension mismatch".into()));
    }
    let mut p = Vec::with_capacity(d);
    let mut dp = Vec::with_capacity(d);
    for k in 0..d {
        let v = basis.column(k);
        p.push((v.adjoint() * rho.matrix() * v)[(0, 0)].re.max(0.0));
        dp.push((v.adjoint() * drho.matrix() * v)[(0, 0)].re);
    }
    let s: f64 = p.iter().sum();
    for x in &mut p {
        *x /= s;
    }
    let mean = dp.iter().sum::<f64>() / d as f64;
    if mean.abs() * d as f64 > 1e-10 {
        return Err(Error::domain("state derivative is not traceless"));
    }
    OutcomeDistribution::new(p, dp)
}

#[derive(Debug, Clone)]
pub struct Qfi {
    pub value: f64,
    /// Symmetric logarithmic derivative on the retained support.
    pub sld: HermitianOperator,
}

/// Quantum Fisher information and SLD of `(ρ, ρ̇)`.
pub fn qfi(rho: &DensityOperator, drho: &HermitianOperator) -> Result<Qfi> {
    let d = rho.dim();
    if drho.dim() != d {
        return Err(Error::InvalidOperator("ρ and ρ̇ dimensions differ".into()));
    }
    if drho.trace().abs() > TRACE_TOL {
        return Err(Error::InvalidOperator(format!("ρ̇ has trace {:e}", drho.trace())));
    }
    let eig = hermitian_eig(&rho.as_hermitian());
    let u = &eig.vectors;
    let m = u.adjoint() * drho.matrix() * u;
    let mut value = 0.0;
    let mut leaked = 0.0;
    let mut l = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let s = eig.values[i].max(0.0) + eig.values[j].max(0.0);
            let mij = m[(i, j)];
            if s > SUPPORT_CUTOFF {
                value += 2.0 * mij.norm_sqr() / s;
                l[(i, j)] = mij * (2.0 / s);
            } else {
                leaked += mij.norm_sqr();
            }
        }
    }
    if leaked.sqrt() > LEAKAGE_TOL {
        return Err(Error::IllDefinedFisher(format!(
            "ρ̇ has weight {:e} outside the support of ρ",
            leaked.sqrt()
        )));
    }
    let sld = HermitianOperator::symmetrized(u * l * u.adjoint());
    Ok(Qfi { value, sld })
}

/// `F(ρ_t)/t` along `times`; every time must be positive.
pub fn qfi_rate_vs_time(model: &LindbladModel, rho0: &DensityOperator, times: &[f64]) -> Result<Vec<f64>> {
    times
        .iter()
        .map(|&t| {
            if !(t > 0.0) {
                return Err(Error::domain(format!("time t = {t} must be positive")));
            }
            let ev = model.evolve_with_sensitivity(rho0, t)?;
            Ok(qfi(&ev.rho, &ev.drho_dt)?.value / t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{c, pauli, CVector};
    use num_complex::Complex64;

    #[test]
    fn binomial_fisher() {
        let d = OutcomeDistribution::new(vec![0.3, 0.7], vec![0.2, -0.2]).unwrap();
        let f = classical_fisher(&d).unwrap();
        assert!((f - 0.04 / 0.21).abs() < 1e-14);
    }

    #[test]
    fn zero_probability_cases() {
        let d = OutcomeDistribution::new(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(classical_fisher(&d).unwrap(), 0.0);
        let d = OutcomeDistribution::new(vec![0.0, 1.0], vec![1e-3, -1e-3]).unwrap();
        assert!(matches!(classical_fisher(&d), Err(Error::IllDefinedFisher(_))));
    }

    #[test]
    fn invalid_distribution() {
        assert!(OutcomeDistribution::new(vec![0.5, 0.6], vec![0.0, 0.0]).is_err());
        assert!(OutcomeDistribution::new(vec![0.5, 0.5], vec![0.1, 0.0]).is_err());
    }

    #[test]
    fn pure_state_variance_formula() {
        // |ψ⟩ = cos θ|0⟩ + sin θ|1⟩, rotated by σ_z at rate θ̇
        let psi = CVector::from_vec(vec![c(0.6), c(0.8)]);
        let rho = DensityOperator::pure(&psi).unwrap();
        let g = pauli::sigma_z();
        let theta_dot = 0.7;
        let drho = (&g * rho.matrix() - rho.matrix() * &g) * Complex64::new(0.0, -theta_dot);
        let q = qfi(&rho, &HermitianOperator::new(drho).unwrap()).unwrap();
        let mean = 0.36 - 0.64;
        let var = 1.0 - mean * mean;
        assert!((q.value - 4.0 * theta_dot * theta_dot * var).abs() < 1e-12);
    }

    #[test]
    fn leakage_is_rejected() {
        let rho = DensityOperator::basis_state(2, 0);
        let drho = HermitianOperator::from_real_diagonal(&[-0.1, 0.1]);
        assert!(matches!(qfi(&rho, &drho), Err(Error::IllDefinedFisher(_))));
    }

    #[test]
    fn sld_solves_lyapunov_equation() {
        let rho = DensityOperator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.7), Complex64::new(0.1, 0.2), Complex64::new(0.1, -0.2), c(0.3)],
        ))
        .unwrap();
        let drho = HermitianOperator::new(CMatrix::from_row_slice(
            2,
            2,
            &[
                c(0.05),
                Complex64::new(-0.03, 0.01),
                Complex64::new(-0.03, -0.01),
                c(-0.05),
            ],
        ))
        .unwrap();
        let q = qfi(&rho, &drho).unwrap();
        let l = q.sld.matrix();
        let lhs = (l * rho.matrix() + rho.matrix() * l) * c(0.5);
        assert!((lhs - drho.matrix()).norm() < 1e-12);
        assert!(((l * drho.matrix()).trace().re - q.value).abs() < 1e-12);
    }
}
