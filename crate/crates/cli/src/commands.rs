//! One function per subcommand: resolve and validate parameters, then fill a table.

use rayon::prelude::*;

use thermoq::bounds::{
    bound_fixed_h, bound_optimal_h_spectrum, check_diffusive, ohmicity_bound_bosonic, qubit_bound_opt_gauge,
    qubit_explicit_bound, QubitChannel,
};
use thermoq::collective::{
    autonomous_fi_rate, dicke_fixed_h_bound, dicke_jx, interacting_ground_index, ladder_fi_rate, CollectiveBath,
    InteractingSpectrum,
};
use thermoq::lindblad::bosonic_qubit_model;
use thermoq::spectral::{bath_response, bose_occupation, OhmicDensity};
use thermoq::strategies::{optimize_strategy, StrategyKind};

use crate::config::{Grid, Resolver};
use crate::emit::{Cell, Table};
use crate::error::{invalid, CliError};

/// Spectral density flags shared by every bath-backed command.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct BathArgs {
    /// Coupling g of J(x) = g·x^α.
    #[arg(long)]
    pub g: Option<f64>,
    /// Ohmicity α.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Hard cutoff Ω.
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct QubitArgs {
    /// Qubit frequency w (value, list or range).
    #[arg(long, visible_alias = "w-range")]
    pub w: Option<Grid>,
    /// Bath temperature T (value, list or range).
    #[arg(long = "T", visible_alias = "T-range")]
    pub t: Option<Grid>,
    #[command(flatten)]
    pub bath: BathArgs,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct CollectiveArgs {
    /// Probe sizes N (list or range of integers).
    #[arg(long = "N")]
    pub n: Option<Grid>,
    /// Measurement interval in units of 1/g.
    #[arg(long, visible_alias = "gdt-range")]
    pub gdt: Option<Grid>,
    /// Transition frequency w of H = wJ_z.
    #[arg(long)]
    pub w: Option<f64>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[command(flatten)]
    pub bath: BathArgs,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct AutonomousArgs {
    #[arg(long = "N")]
    pub n: Option<Grid>,
    /// Interaction strength b of H = wJ_z + bJ_z².
    #[arg(long, visible_alias = "b-range")]
    pub b: Option<Grid>,
    #[arg(long, visible_alias = "w-range")]
    pub w: Option<Grid>,
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[command(flatten)]
    pub bath: BathArgs,
}

struct Density {
    g: f64,
    alpha: f64,
    omega: f64,
}

impl Density {
    fn resolve(r: &mut Resolver, a: &BathArgs, default_omega: f64) -> Result<Self, CliError> {
        let d = Self {
            g: r.scalar(&["g"], a.g, 1.0)?,
            alpha: r.scalar(&["alpha"], a.alpha, 1.0)?,
            omega: r.scalar(&["omega"], a.omega, default_omega)?,
        };
        d.build()?;
        Ok(d)
    }

    fn build(&self) -> Result<OhmicDensity, CliError> {
        Ok(OhmicDensity::new(self.g, self.alpha, self.omega)?)
    }

    fn require_lamb(&self) -> Result<(), CliError> {
        if self.alpha > 0.0 {
            Ok(())
        } else {
            Err(invalid("Lamb shifts need α > 0 (the thermal shift diverges for α = 0)"))
        }
    }
}

fn positive(name: &str, values: &[f64]) -> Result<(), CliError> {
    match values.iter().find(|&&x| !(x > 0.0)) {
        Some(x) => Err(invalid(format!("{name} = {x} must be positive"))),
        None => Ok(()),
    }
}

fn below_cutoff(values: &[f64], omega: f64, strict: bool) -> Result<(), CliError> {
    positive("w", values)?;
    match values.iter().find(|&&w| if strict { w >= omega } else { w > omega }) {
        Some(w) => Err(invalid(format!(
            "w = {w} must lie {} the cutoff Ω = {omega}",
            if strict { "below" } else { "at or below" }
        ))),
        None => Ok(()),
    }
}

fn qubit_grid(r: &mut Resolver, a: &QubitArgs) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let w = r.grid(&["w", "w-range"], a.w.as_ref(), "1")?.values();
    let t = r.grid(&["T", "T-range"], a.t.as_ref(), "1")?.values();
    positive("T", &t)?;
    Ok((w, t))
}

fn pairs(ws: &[f64], ts: &[f64]) -> Vec<(f64, f64)> {
    ws.iter().flat_map(|&w| ts.iter().map(move |&t| (w, t))).collect()
}

/// Evaluates rows in parallel and reports the first failure in scan order.
fn rows<T: Sync, F>(specs: &[T], f: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    F: Fn(&T) -> Result<Vec<Cell>, CliError> + Send + Sync,
{
    let out: Vec<Result<Vec<Cell>, CliError>> = specs.par_iter().map(f).collect();
    out.into_iter().collect()
}

pub fn bath_table(r: &mut Resolver, a: &QubitArgs) -> Result<Table, CliError> {
    let (ws, ts) = qubit_grid(r, a)?;
    let d = Density::resolve(r, &a.bath, 5.0)?;
    d.require_lamb()?;
    below_cutoff(&ws, d.omega, true)?;
    let density = d.build()?;
    let rows = rows(&pairs(&ws, &ts), |&(w, t)| {
        let b = bath_response(w, t, &density)?;
        Ok(vec![
            Cell::Num(w),
            Cell::Num(t),
            Cell::Num(bose_occupation(w, t)?),
            Cell::Num(b.gamma_plus),
            Cell::Num(b.gamma_minus),
            Cell::Num(b.dgamma_dt),
            Cell::Num(b.delta),
            Cell::Num(b.delta_t),
            Cell::Num(b.ddelta_t_dt),
        ])
    })?;
    Table::new(
        vec![
            "w",
            "T",
            "occupation",
            "gamma_w",
            "gamma_minus_w",
            "dgamma_dT",
            "delta",
            "delta_T",
            "ddelta_T_dT",
        ],
        rows,
    )
}

pub fn bound_qubit(r: &mut Resolver, a: &QubitArgs) -> Result<Table, CliError> {
    let (ws, ts) = qubit_grid(r, a)?;
    let d = Density::resolve(r, &a.bath, 5.0)?;
    below_cutoff(&ws, d.omega, false)?;
    let density = d.build()?;
    let rows = rows(&pairs(&ws, &ts), |&(w, t)| {
        let report = bound_fixed_h(&bosonic_qubit_model(w, t, &density, false)?)?;
        Ok(vec![
            Cell::Num(w),
            Cell::Num(t),
            Cell::Num(report.rate),
            Cell::Num(qubit_explicit_bound(w, t, &density)?),
            Cell::Num(report.attaining_epsilon.unwrap_or(f64::NAN)),
        ])
    })?;
    Table::new(vec!["w", "T", "bound", "explicit_bound", "attaining_energy"], rows)
}

pub fn bound_lamb(r: &mut Resolver, a: &QubitArgs) -> Result<Table, CliError> {
    let (ws, ts) = qubit_grid(r, a)?;
    let d = Density::resolve(r, &a.bath, 5.0)?;
    d.require_lamb()?;
    below_cutoff(&ws, d.omega, true)?;
    let density = d.build()?;
    let rows = rows(&pairs(&ws, &ts), |&(w, t)| {
        let b = bath_response(w, t, &density)?;
        let (gp, gm, gd, ds) = (b.gamma_plus, b.gamma_minus, b.dgamma_dt, b.lamb_derivatives().0);
        let total = qubit_bound_opt_gauge(gp, gm, gd, ds)?;
        let rates_only = qubit_bound_opt_gauge(gp, gm, gd, 0.0)?;
        let lamb_only = qubit_bound_opt_gauge(gp, gm, 0.0, ds)?;
        Ok(vec![
            Cell::Num(w),
            Cell::Num(t),
            Cell::Num(total.rate),
            Cell::Num(rates_only.rate),
            Cell::Num(lamb_only.rate),
            Cell::Text(total.regime.as_str().into()),
            Cell::Num(total.gauge_x.unwrap_or(f64::NAN)),
        ])
    })?;
    Table::new(
        vec![
            "w",
            "T",
            "bound_total",
            "bound_rates_only",
            "bound_lamb_only",
            "regime",
            "gauge_x",
        ],
        rows,
    )
}

pub fn ohmicity(r: &mut Resolver, a: &QubitArgs) -> Result<Table, CliError> {
    let (ws, ts) = qubit_grid(r, a)?;
    let d = Density::resolve(r, &a.bath, 5.0)?;
    below_cutoff(&ws, d.omega, false)?;
    let density = d.build()?;
    let rows = rows(&pairs(&ws, &ts), |&(w, t)| {
        let b = ohmicity_bound_bosonic(w, t, &density)?;
        let channel = match b.attaining {
            QubitChannel::Emission => "emission",
            QubitChannel::Absorption => "absorption",
        };
        Ok(vec![
            Cell::Num(w),
            Cell::Num(t),
            Cell::Num(b.rate),
            Cell::Num(b.emission_rate),
            Cell::Num(b.absorption_rate),
            Cell::Text(channel.into()),
        ])
    })?;
    Table::new(
        vec![
            "w",
            "T",
            "bound",
            "emission_rate",
            "absorption_rate",
            "attaining_channel",
        ],
        rows,
    )
}

pub fn diffusive(r: &mut Resolver, a: &QubitArgs) -> Result<Table, CliError> {
    let (ws, ts) = qubit_grid(r, a)?;
    let d = Density::resolve(r, &a.bath, 5.0)?;
    d.require_lamb()?;
    below_cutoff(&ws, d.omega, true)?;
    let density = d.build()?;
    let rows = rows(&pairs(&ws, &ts), |&(w, t)| {
        let c = check_diffusive(&bosonic_qubit_model(w, t, &density, true)?)?;
        Ok(vec![
            Cell::Num(w),
            Cell::Num(t),
            Cell::Bool(c.simple),
            Cell::Bool(c.general),
            Cell::Num(c.simple_residual),
            Cell::Num(c.general_residual),
        ])
    })?;
    Table::new(
        vec!["w", "T", "simple", "general", "simple_residual", "general_residual"],
        rows,
    )
}

pub fn strategy_table(_r: &mut Resolver) -> Result<Table, CliError> {
    let rows = rows(&StrategyKind::ALL, |&k| {
        let s = optimize_strategy(k)?;
        Ok(vec![
            Cell::Text(k.as_str().into()),
            Cell::Num(s.r_coefficient),
            Cell::Num(s.a_opt),
            Cell::Num(s.t_opt),
        ])
    })?;
    Table::new(vec!["strategy", "r", "a_opt", "t_opt"], rows)
}

pub fn collective_scan(r: &mut Resolver, a: &CollectiveArgs) -> Result<Table, CliError> {
    let ns = r.counts(&["N"], a.n.as_ref(), "1,5,10,20")?;
    let gdts = r.grid(&["gdt", "gdt-range"], a.gdt.as_ref(), "1e-4:1:log:60")?.values();
    positive("gdt", &gdts)?;
    let w = r.scalar(&["w"], a.w, 1.0)?;
    let t = r.scalar(&["T"], a.t, 1.0)?;
    positive("T", &[t])?;
    let d = Density::resolve(r, &a.bath, 10.0)?;
    below_cutoff(&[w], d.omega, false)?;
    let bath = CollectiveBath::new(d.build()?, t)?;
    let rates = bath.ladder_rates(w)?;

    let specs: Vec<(usize, usize, f64, f64)> = ns
        .iter()
        .flat_map(|&n| {
            // prepare the level that attains the fixed-H bound
            let (level, bound) = dicke_fixed_h_bound(n, &rates);
            gdts.iter().map(move |&x| (n, level, x, bound))
        })
        .collect();
    let rows = rows(&specs, |&(n, level, gdt, bound)| {
        Ok(vec![
            Cell::Int(n as u64),
            Cell::Int(level as u64),
            Cell::Num(gdt),
            Cell::Num(ladder_fi_rate(n, &rates, level, gdt / d.g)?),
            Cell::Num(bound),
        ])
    })?;
    Table::new(vec!["N", "prepare_n", "gdt", "fi_rate", "bound"], rows)
}

pub fn autonomous_scan(r: &mut Resolver, a: &AutonomousArgs) -> Result<Table, CliError> {
    let ns = r.counts(&["N"], a.n.as_ref(), "50")?;
    let bs = r.grid(&["b", "b-range"], a.b.as_ref(), "1e-3:3:log:200")?.values();
    let ws = r.grid(&["w", "w-range"], a.w.as_ref(), "1")?.values();
    let t = r.scalar(&["T"], a.t, 1.0)?;
    positive("T", &[t])?;
    positive("b", &bs)?;
    if let Some(w) = ws.iter().find(|&&w| !(w >= 0.0)) {
        return Err(invalid(format!("w = {w} must be nonnegative")));
    }
    let d = Density::resolve(r, &a.bath, 10.0)?;
    let bath = CollectiveBath::new(d.build()?, t)?;

    let mut specs = Vec::new();
    for &n in &ns {
        for &w in &ws {
            for &b in &bs {
                let s = InteractingSpectrum::new(n, w, b);
                let k = s.ground_index();
                let (down, up) = s.gaps(k);
                if let Some(gap) = [down, up].into_iter().flatten().find(|g| g.abs() > d.omega) {
                    return Err(invalid(format!(
                        "N = {n}, w = {w}, b = {b}: ground-state gap {gap} exceeds Ω = {}",
                        d.omega
                    )));
                }
                specs.push((n, w, b));
            }
        }
    }
    let bounds: Vec<Result<f64, CliError>> = ns
        .par_iter()
        .map(|&n| {
            Ok(bound_optimal_h_spectrum(|x| bath.channel(x), d.omega, &dicke_jx(n))?
                .report
                .rate)
        })
        .collect();
    let bounds = bounds.into_iter().collect::<Result<Vec<_>, _>>()?;
    let rows = rows(&specs, |&(n, w, b)| {
        let bound = bounds[ns.iter().position(|&m| m == n).expect("N in list")];
        Ok(vec![
            Cell::Int(n as u64),
            Cell::Num(w),
            Cell::Num(b),
            Cell::Int(interacting_ground_index(n, w, b) as u64),
            Cell::Num(autonomous_fi_rate(n, w, b, &bath)?),
            Cell::Num(bound),
        ])
    })?;
    Table::new(vec!["N", "w", "b", "ground_n", "fi_rate", "bound_optimal_h"], rows)
}
