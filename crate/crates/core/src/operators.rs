//! Small dense complex linear algebra for probe operators.
//!
//! Everything here is dense. Dimensions stay at desk scale (a few hundred at
//! most); the Dicke ladder's large-N work is done on tridiagonal population
//! generators in [`crate::collective`] instead.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate level.
pub const DEGENERACY_GAP: f64 = 1e-9;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hilbert–Schmidt norm `sqrt(tr M†M)`.
pub fn hs_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Kronecker product `A ⊗ B`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// A square matrix equal to its adjoint, symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    m: CMatrix,
}

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidOperator(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let skew = max_abs(&(&m - m.adjoint()));
        let scale = max_abs(&m).max(1.0);
        if skew > HERMITICITY_TOL * scale {
            return Err(Error::InvalidOperator(format!(
                "not Hermitian: max |M - M†| = {skew:.3e}"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    /// Builds `(M + M†)/2` without checking how far `M` was from Hermitian.
    pub fn symmetrized(m: CMatrix) -> Self {
        let h = (&m + m.adjoint()) * c(0.5);
        Self { m: h }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut m = CMatrix::zeros(d, d);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = c(v);
        }
        Self { m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { m: &self.m * c(s) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { m: &self.m + &other.m }
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn conjugated_by(&self, u: &CMatrix) -> Self {
        Self::symmetrized(u * &self.m * u.adjoint())
    }

    pub fn expectation(&self, psi: &CVector) -> f64 {
        (psi.adjoint() * &self.m * psi)[(0, 0)].re
    }
}

/// Eigen-decomposition with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Columns are orthonormal eigenvectors matching `values`.
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.values.len();
        let mut diag = CMatrix::zeros(d, d);
        for (i, &v) in self.values.iter().enumerate() {
            diag[(i, i)] = c(v);
        }
        &self.vectors * diag * self.vectors.adjoint()
    }
}

pub fn hermitian_eig(m: &HermitianOperator) -> Eigen {
    let se = m.m.clone().symmetric_eigen();
    let d = m.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(d, d);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &se.eigenvectors.column(i));
    }
    Eigen { values, vectors }
}

/// Largest eigenvalue of a positive semidefinite operator.
pub fn operator_norm_psd(m: &HermitianOperator) -> Result<f64> {
    let e = hermitian_eig(m);
    let min = e.values[0];
    let max = *e.values.last().expect("non-empty spectrum");
    if min < -1e-8 * max.abs().max(1.0) {
        return Err(Error::InvalidOperator(format!(
            "operator is not positive semidefinite (min eigenvalue {min:.3e})"
        )));
    }
    Ok(max.max(0.0))
}

/// A valid density matrix: Hermitian, PSD and unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    m: CMatrix,
}

impl DensityOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        let h = HermitianOperator::new(m)?;
        let tr = h.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidOperator(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eig(&h).values[0];
        if min < -PSD_TOL {
            return Err(Error::InvalidOperator(format!(
                "not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(Self { m: h.m })
    }

    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidOperator("zero state vector".into()));
        }
        let v = psi / c(norm);
        Ok(Self { m: &v * v.adjoint() })
    }

    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = c(1.0);
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn as_hermitian(&self) -> HermitianOperator {
        HermitianOperator { m: self.m.clone() }
    }
}

/// A complete family of mutually orthogonal projectors with real labels.
#[derive(Debug, Clone)]
pub struct ProjectorFamily {
    labels: Vec<f64>,
    projectors: Vec<CMatrix>,
}

impl ProjectorFamily {
    pub fn new(labels: Vec<f64>, projectors: Vec<CMatrix>) -> Result<Self> {
        if labels.len() != projectors.len() || labels.is_empty() {
            return Err(Error::InvalidOperator("labels and projectors must pair up".into()));
        }
        let fam = Self { labels, projectors };
        fam.validate()?;
        Ok(fam)
    }

    /// Spectral projectors of `h`, grouping eigenvalues within [`DEGENERACY_GAP`].
    pub fn from_hermitian(h: &HermitianOperator) -> Self {
        let e = hermitian_eig(h);
        let d = h.dim();
        let mut labels = Vec::new();
        let mut projectors = Vec::new();
        let mut start = 0;
        while start < d {
            let mut end = start + 1;
            while end < d && e.values[end] - e.values[end - 1] <= DEGENERACY_GAP {
                end += 1;
            }
            let mut p = CMatrix::zeros(d, d);
            for k in start..end {
                let v = e.vectors.column(k);
                p += v * v.adjoint();
            }
            let label = e.values[start..end].iter().sum::<f64>() / (end - start) as f64;
            labels.push(label);
            projectors.push(p);
            start = end;
        }
        Self { labels, projectors }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.projectors[0].nrows();
        let mut sum = CMatrix::zeros(d, d);
        for (i, p) in self.projectors.iter().enumerate() {
            if p.nrows() != d || !p.is_square() {
                return Err(Error::InvalidOperator("projector dimension mismatch".into()));
            }
            if max_abs(&(p * p - p)) > 1e-10 {
                return Err(Error::InvalidOperator(format!("projector {i} is not idempotent")));
            }
            for (j, q) in self.projectors.iter().enumerate().skip(i + 1) {
                if max_abs(&(p * q)) > 1e-10 {
                    return Err(Error::InvalidOperator(format!(
                        "projectors {i} and {j} are not orthogonal"
                    )));
                }
            }
            sum += p;
        }
        if max_abs(&(sum - CMatrix::identity(d, d))) > 1e-10 {
            return Err(Error::InvalidOperator("projectors do not resolve the identity".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].nrows()
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn projector(&self, k: usize) -> &CMatrix {
        &self.projectors[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &CMatrix)> {
        self.labels.iter().copied().zip(self.projectors.iter())
    }

    /// Index of the level whose label is within [`DEGENERACY_GAP`] of `label`.
    pub fn index_of(&self, label: f64) -> Option<usize> {
        self.labels.iter().position(|&l| (l - label).abs() <= DEGENERACY_GAP)
    }
}

/// Outcome of a real least-squares span test.
#[derive(Debug, Clone)]
pub struct SpanMembership {
    pub in_span: bool,
    pub residual: f64,
    pub coefficients: Vec<f64>,
}

fn realify(m: &CMatrix) -> DVector<f64> {
    let n = m.len();
    let mut v = DVector::zeros(2 * n);
    for (k, z) in m.iter().enumerate() {
        v[k] = z.re;
        v[n + k] = z.im;
    }
    v
}

/// Solves `min_c ‖M - Σ c_i B_i‖_HS` over real `c`; `M` is in the span when the
/// residual is below `1e-8 ‖M‖_HS`.
pub fn span_membership(m: &HermitianOperator, basis: &[HermitianOperator]) -> Result<SpanMembership> {
    let target_norm = hs_norm(m.matrix());
    if basis.is_empty() {
        return Ok(SpanMembership {
            in_span: target_norm == 0.0,
            residual: target_norm,
            coefficients: Vec::new(),
        });
    }
    if basis.iter().any(|b| b.dim() != m.dim()) {
        return Err(Error::InvalidOperator("span basis dimension mismatch".into()));
    }
    let rhs = realify(m.matrix());
    let mut a = DMatrix::<f64>::zeros(rhs.len(), basis.len());
    for (k, b) in basis.iter().enumerate() {
        a.set_column(k, &realify(b.matrix()));
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let coeffs = if smax == 0.0 {
        DVector::zeros(basis.len())
    } else {
        svd.solve(&rhs, 1e-12 * smax)
            .map_err(|e| Error::NoConvergence(format!("least squares: {e}")))?
    };
    let residual = (&a * &coeffs - &rhs).norm();
    Ok(SpanMembership {
        in_span: residual <= 1e-8 * target_norm || target_norm == 0.0,
        residual,
        coefficients: coeffs.iter().copied().collect(),
    })
}

/// `e^{tG} v` for a general complex generator.
pub fn expm_action(g: &CMatrix, v: &CVector, t: f64) -> Result<CVector> {
    if !g.is_square() || g.nrows() != v.len() {
        return Err(Error::InvalidOperator("generator/vector dimension mismatch".into()));
    }
    if t == 0.0 {
        return Ok(v.clone());
    }
    let e = (g * c(t)).exp();
    let out = e * v;
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NoConvergence("matrix exponential overflowed".into()));
    }
    Ok(out)
}

/// Real counterpart of [`expm_action`], used for population generators.
pub fn expm_action_real(g: &DMatrix<f64>, v: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
    if !g.is_square() || g.nrows() != v.len() {
        return Err(Error::InvalidOperator("generator/vector dimension mismatch".into()));
    }
    if t == 0.0 {
        return Ok(v.clone());
    }
    let out = (g * t).exp() * v;
    if out.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence("matrix exponential overflowed".into()));
    }
    Ok(out)
}

/// Qubit operators in the basis `{|0⟩, |1⟩}` with `|0⟩` the ground state.
pub mod pauli {
    use super::*;

    pub fn sigma_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)])
    }

    pub fn sigma_y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0), -I, I, c(0.0)])
    }

    /// `|0⟩⟨0| - |1⟩⟨1|`.
    pub fn sigma_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)])
    }

    /// `σ₋ = |0⟩⟨1|`, removes the excitation.
    pub fn sigma_minus() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)])
    }

    /// `σ₊ = |1⟩⟨0|`.
    pub fn sigma_plus() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)])
    }

    pub fn ket(dim: usize, k: usize) -> CVector {
        let mut v = CVector::zeros(dim);
        v[k] = c(1.0);
        v
    }

    pub fn projector(dim: usize, k: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = c(1.0);
        m
    }
}

#[cfg(test)]
mod tests {
    use super::pauli::*;
    use super::*;

    #[test]
    fn norm_of_simple_operators() {
        assert!((operator_norm_psd(&HermitianOperator::identity(3)).unwrap() - 1.0).abs() < 1e-14);
        let d = HermitianOperator::from_real_diagonal(&[0.2, 5.0, 1.1]);
        assert!((operator_norm_psd(&d).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn norm_rejects_indefinite() {
        let d = HermitianOperator::from_real_diagonal(&[-1.0, 2.0]);
        assert!(operator_norm_psd(&d).is_err());
    }

    #[test]
    fn hermiticity_enforced() {
        assert!(HermitianOperator::new(sigma_minus()).is_err());
        assert!(HermitianOperator::new(sigma_y()).is_ok());
        assert!(HermitianOperator::new(CMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityOperator::new(pauli::projector(2, 0)).is_ok());
        assert!(DensityOperator::new(CMatrix::identity(2, 2)).is_err());
        let bad = CMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(DensityOperator::new(bad).is_err());
    }

    #[test]
    fn sigma_z_spectrum() {
        let e = hermitian_eig(&HermitianOperator::new(sigma_z()).unwrap());
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn span_examples() {
        let b1 = HermitianOperator::new(sigma_x()).unwrap();
        let b2 = HermitianOperator::new(sigma_z()).unwrap();
        let m = b1.scaled(3.0).add(&b2.scaled(2.0));
        let s = span_membership(&m, &[b1.clone(), b2.clone()]).unwrap();
        assert!(s.in_span);
        assert!(s.residual < 1e-12);
        assert!((s.coefficients[0] - 3.0).abs() < 1e-12);
        assert!((s.coefficients[1] - 2.0).abs() < 1e-12);

        let one = HermitianOperator::identity(2);
        let p1 = HermitianOperator::new(projector(2, 1)).unwrap();
        let s = span_membership(&b1, &[one.clone(), p1.clone()]).unwrap();
        assert!(!s.in_span);
        assert!((s.residual - hs_norm(b1.matrix())).abs() < 1e-12);

        let p0 = HermitianOperator::new(projector(2, 0)).unwrap();
        let s = span_membership(&b2.scaled(0.37), &[one, p1, p0]).unwrap();
        assert!(s.in_span);
    }

    #[test]
    fn expm_identity_generator() {
        let v = CVector::from_vec(vec![c(1.0), Complex64::new(0.5, -2.0)]);
        let out = expm_action(&CMatrix::zeros(2, 2), &v, 0.7).unwrap();
        assert!((out - v).norm() < 1e-15);
    }

    #[test]
    fn projector_family_groups_degenerate_levels() {
        let h = HermitianOperator::from_real_diagonal(&[1.0, 0.0, 1.0 + 1e-11, 0.0]);
        let fam = ProjectorFamily::from_hermitian(&h);
        assert_eq!(fam.len(), 2);
        fam.validate().unwrap();
        assert!((fam.projector(1).trace().re - 2.0).abs() < 1e-12);
        assert_eq!(fam.index_of(1.0), Some(1));
    }

    #[test]
    fn projector_family_rejects_incomplete() {
        let r = ProjectorFamily::new(vec![0.0], vec![projector(2, 0)]);
        assert!(r.is_err());
    }

    #[test]
    fn tensor_dimensions() {
        let t = tensor(&sigma_z(), &CMatrix::identity(2, 2));
        assert_eq!(t.nrows(), 4);
        assert_eq!(t[(2, 2)], c(-1.0));
    }
}
