use num_complex::Complex64;
use thermoq::collective::{dicke_model, CollectiveBath};
use thermoq::fisher::{classical_fisher, measurement_distribution, qfi};
use thermoq::lindblad::{bosonic_qubit_model, LindbladModel};
use thermoq::operators::{pauli, CMatrix, CVector, DensityOperator};
use thermoq::spectral::{bath_response, OhmicDensity};
use thermoq::strategies::{map_fisher_rate, optimize_strategy, ramsey, LowTemperatureQubit, StrategyKind};

fn density() -> OhmicDensity {
    OhmicDensity::new(1.0, 1.0, 5.0).unwrap()
}

/// Prepare level `k`, wait `dt`, read out the energy basis: CFI/δt.
fn simulated_map_rate(model: &LindbladModel, k: usize, dt: f64) -> f64 {
    let d = model.dim();
    let ev = model
        .evolve_with_sensitivity(&DensityOperator::basis_state(d, k), dt)
        .unwrap();
    let dist = measurement_distribution(&ev.rho, &ev.drho_dt, &CMatrix::identity(d, d)).unwrap();
    classical_fisher(&dist).unwrap() / dt
}

fn test_models() -> Vec<LindbladModel> {
    let mut v = vec![
        bosonic_qubit_model(1.0, 0.3, &density(), true).unwrap(),
        bosonic_qubit_model(2.0, 1.5, &density(), true).unwrap(),
    ];
    let bath = CollectiveBath::new(OhmicDensity::new(1.0, 1.0, 10.0).unwrap(), 1.0).unwrap();
    let rates = bath.ladder_rates(1.0).unwrap();
    v.push(dicke_model(4, 1.0, &rates).unwrap());
    v
}

#[test]
fn map_rate_matches_short_time_simulation() {
    for m in test_models() {
        for k in 0..m.dim() {
            let eps = m.projectors().labels()[k];
            let psi = pauli::ket(m.dim(), k);
            let exact = map_fisher_rate(&m, &psi, eps).unwrap();
            let sim = simulated_map_rate(&m, k, 1e-6);
            assert!((sim - exact).abs() <= 1e-4 * exact, "level {k}: {sim} vs {exact}");
        }
    }
}

#[test]
fn map_rate_ignores_lamb_shift() {
    for m in test_models() {
        let loud = m.with_lamb_scaled(10.0);
        for k in 0..m.dim() {
            let eps = m.projectors().labels()[k];
            let psi = pauli::ket(m.dim(), k);
            assert_eq!(
                map_fisher_rate(&m, &psi, eps).unwrap(),
                map_fisher_rate(&loud, &psi, eps).unwrap()
            );
        }
    }
}

#[test]
fn strategy_hierarchy() {
    let r = |k| optimize_strategy(k).unwrap().r_coefficient;
    let (ram, anc, fast) = (r(StrategyKind::Ramsey), r(StrategyKind::Ancilla), r(StrategyKind::Fast));
    assert!(fast > anc && anc > ram);
    assert!(fast < 16.0);
}

#[test]
fn ramsey_peaks_at_equal_weights() {
    let q = LowTemperatureQubit::unit();
    for &t in &[0.1, 1.0, 2.0, 7.0] {
        let mid = ramsey(0.5, t, &q).unwrap();
        for i in 0..=100 {
            let a = i as f64 / 100.0;
            assert!(ramsey(a, t, &q).unwrap() <= mid);
        }
    }
}

#[test]
fn ramsey_matches_full_model_at_low_temperature() {
    let (w, t_bath) = (1.0, 0.01);
    let r = bath_response(w, t_bath, &density()).unwrap();
    let (ds, _) = r.lamb_derivatives();
    let q = LowTemperatureQubit {
        w_tilde: w,
        gamma: r.gamma_plus,
        dw_tilde_dt: 2.0 * ds,
    };
    let model = bosonic_qubit_model(w, t_bath, &density(), true).unwrap();
    for a in [0.2f64, 0.5, 0.8] {
        let psi = CVector::from_vec(vec![Complex64::from((1.0 - a).sqrt()), Complex64::from(a.sqrt())]);
        let rho0 = DensityOperator::pure(&psi).unwrap();
        for t in [0.1, 0.5, 2.0] {
            let ev = model.evolve_with_sensitivity(&rho0, t / q.gamma).unwrap();
            let full = qfi(&ev.rho, &ev.drho_dt).unwrap().value;
            let closed = ramsey(a, t / q.gamma, &q).unwrap();
            assert!(
                (full - closed).abs() <= 1e-3 * closed,
                "a={a} t={t}: {full} vs {closed}"
            );
        }
    }
}
