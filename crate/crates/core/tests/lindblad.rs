use num_complex::Complex64;
use thermoq::lindblad::{bosonic_qubit_model, LindbladModel};
use thermoq::operators::{commutator, hermitian_eig, pauli, CMatrix, CVector, DensityOperator};
use thermoq::spectral::OhmicDensity;

fn density() -> OhmicDensity {
    OhmicDensity::new(0.5, 1.0, 5.0).unwrap()
}

fn plus_state() -> DensityOperator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityOperator::pure(&CVector::from_vec(vec![Complex64::from(s), Complex64::new(0.0, s)])).unwrap()
}

fn models() -> Vec<LindbladModel> {
    let d = density();
    let mut out = Vec::new();
    for (w, t) in [(1.0, 0.2), (0.7, 1.0), (2.0, 3.0)] {
        out.push(bosonic_qubit_model(w, t, &d, true).unwrap());
        out.push(bosonic_qubit_model(w, t, &d, false).unwrap());
    }
    out
}

#[test]
fn states_stay_positive() {
    for m in models() {
        for t in [1e-4, 1e-2, 0.3, 3.0, 30.0] {
            for rho0 in [plus_state(), DensityOperator::basis_state(2, 1)] {
                let ev = m.evolve_with_sensitivity(&rho0, t).unwrap();
                let e = hermitian_eig(&ev.rho.as_hermitian());
                assert!(e.values[0] >= -1e-9);
                assert!((ev.rho.matrix().trace().re - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn generator_commutes_with_z_rotation() {
    let z = pauli::sigma_z();
    let rho = plus_state().matrix().clone();
    let mixed = CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::from(0.6),
            Complex64::new(0.1, -0.3),
            Complex64::new(0.1, 0.3),
            Complex64::from(0.4),
        ],
    );
    for m in models() {
        for r in [&rho, &mixed] {
            let lhs = m.generator_apply(&commutator(&z, r));
            let rhs = commutator(&z, &m.generator_apply(r));
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }
}

#[test]
fn stationary_state_is_thermal() {
    let d = density();
    for (w, t) in [(1.0, 0.5), (1.5, 2.0)] {
        let m = bosonic_qubit_model(w, t, &d, true).unwrap();
        let ev = m.evolve_with_sensitivity(&plus_state(), 400.0).unwrap();
        let p1 = ev.rho.matrix()[(1, 1)].re;
        let p0 = ev.rho.matrix()[(0, 0)].re;
        assert!((p1 / p0 - (-w / t).exp()).abs() < 1e-9);
    }
}

#[test]
fn sensitivity_matches_finite_difference() {
    let d = density();
    for (w, t) in [(1.0, 0.4), (0.8, 1.5)] {
        for with_lamb in [true, false] {
            let h = 1e-5 * t;
            let m = bosonic_qubit_model(w, t, &d, with_lamb).unwrap();
            let up = bosonic_qubit_model(w, t + h, &d, with_lamb).unwrap();
            let dn = bosonic_qubit_model(w, t - h, &d, with_lamb).unwrap();
            for time in [0.3, 2.0] {
                let ev = m.evolve_with_sensitivity(&plus_state(), time).unwrap();
                let a = up.evolve_with_sensitivity(&plus_state(), time).unwrap().rho;
                let b = dn.evolve_with_sensitivity(&plus_state(), time).unwrap().rho;
                let fd = (a.matrix() - b.matrix()) / Complex64::from(2.0 * h);
                let exact = ev.drho_dt.matrix();
                assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1e-8), "T={t} t={time}");
            }
        }
    }
}

#[test]
fn every_channel_moves_between_energy_blocks() {
    for m in models() {
        let fam = m.projectors();
        for ch in m.channels() {
            // A_ω = Σ Π_ε' A Π_ε over ε' - ε = -ω: only such blocks are populated.
            let mut rebuilt = CMatrix::zeros(2, 2);
            for i in 0..fam.len() {
                for j in 0..fam.len() {
                    if (fam.labels()[j] - fam.labels()[i] - ch.omega).abs() < 1e-12 {
                        rebuilt += fam.projector(i) * &ch.op * fam.projector(j);
                    }
                }
            }
            assert!((rebuilt - &ch.op).norm() < 1e-12);
        }
    }
}
