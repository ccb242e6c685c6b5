//! The subcommands. Each returns a [`Table`]; rows follow sweep order.

use std::f64::consts::{PI, SQRT_2};

use gravwit::witness::{coefficient_pairing, witness_matrix_w};
use gravwit::{
    apply_channel, canonical_witness, damped_gravity_channel, from_dimensionless, gravity_channel,
    initial_state, negativity_damped_closed_form, negativity_numeric, phases_exact, phases_large_t,
    phases_quadrature, sample_separable_channel, validate_channel, witness_eigendata,
    witness_expectation_closed_form, CoefficientMatrix, CoherencePair, DampingRates,
    DensityOperator, DimensionlessPoint, ExpectationMode, PhaseSet, WitnessEigenData,
    WitnessOperator,
};

use crate::config::{
    Axis, ExperimentConfig, PhaseMethodArg, Range, UnitMode, DEFAULT_PANEL_RANGE, DEFAULT_SI_RANGE,
    DEFAULT_THETA_RANGE,
};
use crate::output::{Cell, Table};
use crate::CliError;

const CLOSED_FORM_TOL: f64 = 1e-10;
const C_INDEPENDENCE_TOL: f64 = 1e-12;
const SOUNDNESS_TOL: f64 = -1e-10;

pub const FIG2_COHERENCES: [[f64; 2]; 3] = [[1.0, 1.0], [0.6, 0.6], [SQRT_2 - 1.0, SQRT_2 - 1.0]];
pub const FIG5_COHERENCES: [[f64; 2]; 2] = [[1.0, 1.0], [0.6, 0.6]];
pub const FIG5_DAMPINGS: [[f64; 2]; 4] = [[0.0, 0.0], [0.2, 0.2], [0.4, 0.4], [0.8, 0.8]];

struct Point {
    axis: f64,
    phases: PhaseSet,
    /// Hold time in the units the damping rates are quoted in.
    damping_time: f64,
}

fn sweep(
    cfg: &ExperimentConfig,
    dimensionless_default: Range,
) -> Result<(Axis, Vec<Point>), CliError> {
    cfg.validate()?;
    let default = match cfg.mode {
        UnitMode::Dimensionless => dimensionless_default,
        UnitMode::Si => DEFAULT_SI_RANGE,
    };
    let axis = cfg.axis(default);
    let points = axis
        .range()
        .points()
        .into_iter()
        .map(|x| {
            let (hold, damping_time) = match axis {
                Axis::Theta(_) => (x, x / PI),
                Axis::PanelTime(_) => (gravwit::theta_from_panel_time(x), x),
                Axis::Seconds(_) => (x, x),
            };
            let g = cfg.geometry(hold);
            let phases = match cfg.phase_method {
                PhaseMethodArg::Exact => phases_exact(&g)?,
                PhaseMethodArg::LargeT => phases_large_t(&g)?,
                PhaseMethodArg::Quadrature => phases_quadrature(&g, cfg.quadrature_steps)?,
            };
            Ok(Point {
                axis: x,
                phases,
                damping_time,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((axis, points))
}

fn pairs(raw: &[[f64; 2]]) -> Result<Vec<CoherencePair>, CliError> {
    raw.iter()
        .map(|&[c1, c2]| CoherencePair::new(c1, c2).map_err(CliError::from))
        .collect()
}

fn number_label(x: f64) -> String {
    let s = format!("{x:.4}");
    let trimmed = s.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_string()
    }
}

fn pair_label(prefix: &str, [a, b]: [f64; 2]) -> String {
    if a == b {
        format!("{prefix}{}", number_label(a))
    } else {
        format!("{prefix}{}_{}", number_label(a), number_label(b))
    }
}

fn channel(p: &PhaseSet, d: Option<&DampingRates>) -> Result<CoefficientMatrix, CliError> {
    let e = match d {
        Some(d) => damped_gravity_channel(p, d),
        None => gravity_channel(p),
    };
    let report = validate_channel(e.matrix());
    if !report.passes {
        return Err(CliError::Numerical(format!(
            "channel failed validation: {report}"
        )));
    }
    Ok(e)
}

fn evolve(e: &CoefficientMatrix, c: &CoherencePair) -> Result<DensityOperator, CliError> {
    Ok(apply_channel(e, &initial_state(c))?)
}

/// Numeric negativity, cross-checked against the closed form.
fn negativity(
    e: &CoefficientMatrix,
    c: &CoherencePair,
    p: &PhaseSet,
    d: Option<&DampingRates>,
) -> Result<f64, CliError> {
    let numeric = negativity_numeric(&evolve(e, c)?).negativity;
    let closed = negativity_damped_closed_form(c, p, d.unwrap_or(&DampingRates::none())).negativity;
    if (numeric - closed).abs() > CLOSED_FORM_TOL {
        return Err(CliError::Numerical(format!(
            "negativity {numeric} disagrees with closed form {closed} for c = ({}, {})",
            c.c1, c.c2
        )));
    }
    Ok(numeric)
}

/// Witness expectation on the channel output.
struct WitnessProbe {
    mode: ExpectationMode,
    witnesses: Vec<WitnessOperator>,
}

impl WitnessProbe {
    fn new(cfg: &ExperimentConfig, cs: &[CoherencePair]) -> Result<Self, CliError> {
        let witnesses: Vec<_> = cs
            .iter()
            .filter(|c| c.c1 != 0.0 && c.c2 != 0.0)
            .map(|&c| canonical_witness(c))
            .collect::<Result<_, _>>()?;
        if witnesses.is_empty() {
            return Err(CliError::Config(
                "the witness needs a coherence pair with both entries nonzero".into(),
            ));
        }
        Ok(Self {
            mode: cfg.witness_mode.into(),
            witnesses,
        })
    }

    fn value(
        &self,
        e: &CoefficientMatrix,
        p: &PhaseSet,
        d: Option<&DampingRates>,
    ) -> Result<f64, CliError> {
        let c0 = self.witnesses[0].coherence();
        if self.mode == ExpectationMode::PaperLiteral {
            return Ok(witness_expectation_closed_form(&c0, p, d, self.mode)?);
        }
        let values = self
            .witnesses
            .iter()
            .map(|w| Ok(w.expectation(&evolve(e, &w.coherence())?)))
            .collect::<Result<Vec<f64>, CliError>>()?;
        let spread = values
            .iter()
            .map(|v| (v - values[0]).abs())
            .fold(0.0, f64::max);
        if spread > C_INDEPENDENCE_TOL {
            return Err(CliError::Numerical(format!(
                "witness expectation varies with c by {spread:e}"
            )));
        }
        let closed = witness_expectation_closed_form(&c0, p, d, ExpectationMode::TraceDerived)?;
        if (values[0] - closed).abs() > CLOSED_FORM_TOL {
            return Err(CliError::Numerical(format!(
                "witness expectation {} disagrees with closed form {closed}",
                values[0]
            )));
        }
        Ok(values[0])
    }
}

fn damping(rates: [f64; 2], time: f64) -> Result<DampingRates, CliError> {
    Ok(DampingRates::new(rates[0], rates[1], time)?)
}

/// `(axis, Φ_LL, Φ_LR, Φ_RL, Φ_RR, ΔΦ)` per sweep point.
pub fn phases(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let (axis, points) = sweep(cfg, DEFAULT_THETA_RANGE)?;
    let mut t = Table::new([
        axis.header(),
        "Phi_LL_rad",
        "Phi_LR_rad",
        "Phi_RL_rad",
        "Phi_RR_rad",
        "dPhi_rad",
    ]);
    for pt in &points {
        let [ll, lr, rl, rr] = pt.phases.as_array();
        t.push(vec![
            pt.axis.into(),
            ll.into(),
            lr.into(),
            rl.into(),
            rr.into(),
            pt.phases.entangling_phase().into(),
        ]);
    }
    Ok(t)
}

/// Negativity curves, one column per coherence pair.
pub fn fig2(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let raw = cfg.coherences_or(&FIG2_COHERENCES);
    let cs = pairs(&raw)?;
    let (axis, points) = sweep(cfg, DEFAULT_PANEL_RANGE)?;
    let mut columns = vec![axis.header().to_string()];
    columns.extend(raw.iter().map(|&c| pair_label("N_c", c)));
    let mut t = Table::new(columns);
    for pt in &points {
        let e = channel(&pt.phases, None)?;
        let mut row = vec![Cell::Num(pt.axis)];
        for c in &cs {
            row.push(negativity(&e, c, &pt.phases, None)?.into());
        }
        t.push(row);
    }
    Ok(t)
}

/// Witness expectation next to the negativity curves.
pub fn fig4(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let raw = cfg.coherences_or(&FIG2_COHERENCES);
    let cs = pairs(&raw)?;
    let probe = WitnessProbe::new(cfg, &cs)?;
    let (axis, points) = sweep(cfg, DEFAULT_PANEL_RANGE)?;
    let mut columns = vec![axis.header().to_string(), "TrW_rho_out".to_string()];
    columns.extend(raw.iter().map(|&c| pair_label("N_c", c)));
    let mut t = Table::new(columns);
    for pt in &points {
        let e = channel(&pt.phases, None)?;
        let mut row = vec![
            Cell::Num(pt.axis),
            probe.value(&e, &pt.phases, None)?.into(),
        ];
        for c in &cs {
            row.push(negativity(&e, c, &pt.phases, None)?.into());
        }
        t.push(row);
    }
    Ok(t)
}

/// Damped negativity, one column per (γ, c).
pub fn fig5(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let raw = cfg.coherences_or(&FIG5_COHERENCES);
    let cs = pairs(&raw)?;
    let rates = cfg.dampings_or(&FIG5_DAMPINGS);
    let (axis, points) = sweep(cfg, DEFAULT_PANEL_RANGE)?;
    let mut columns = vec![axis.header().to_string()];
    for &g in &rates {
        for &c in &raw {
            columns.push(format!(
                "{}_{}",
                pair_label("N_gamma", g),
                pair_label("c", c)
            ));
        }
    }
    let mut t = Table::new(columns);
    for pt in &points {
        let mut row = vec![Cell::Num(pt.axis)];
        for &g in &rates {
            let d = damping(g, pt.damping_time)?;
            let e = channel(&pt.phases, Some(&d))?;
            for c in &cs {
                row.push(negativity(&e, c, &pt.phases, Some(&d))?.into());
            }
        }
        t.push(row);
    }
    Ok(t)
}

/// Damped witness expectation, one column per γ.
pub fn fig6(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let cs = pairs(&cfg.coherences_or(&FIG5_COHERENCES))?;
    let probe = WitnessProbe::new(cfg, &cs)?;
    let rates = cfg.dampings_or(&FIG5_DAMPINGS);
    let (axis, points) = sweep(cfg, DEFAULT_PANEL_RANGE)?;
    let mut columns = vec![axis.header().to_string()];
    columns.extend(rates.iter().map(|&g| pair_label("TrW_rho_out_gamma", g)));
    let mut t = Table::new(columns);
    for pt in &points {
        let mut row = vec![Cell::Num(pt.axis)];
        for &g in &rates {
            let d = damping(g, pt.damping_time)?;
            let e = channel(&pt.phases, Some(&d))?;
            row.push(probe.value(&e, &pt.phases, Some(&d))?.into());
        }
        t.push(row);
    }
    Ok(t)
}

#[derive(Debug, Clone)]
pub struct WitnessCheckReport {
    pub table: Table,
    /// Empty when every check passed.
    pub violations: Vec<String>,
}

fn entry(t: &mut Table, key: &str, value: Cell) {
    t.push(vec![Cell::Text(key.to_string()), value]);
}

/// Phases with `ΔΦ = π` at the configured ratio.
fn half_turn_phases(r: f64) -> Result<PhaseSet, CliError> {
    let theta = PI * (1.0 - r * r) / (2.0 * r * r);
    Ok(from_dimensionless(DimensionlessPoint::new(theta, r)?)?)
}

/// Samples seeded separable channels and checks the witness never fires on
/// them, then checks the eigen-data of the `ΔΦ = π` gravity channel.
pub fn witness_check(cfg: &ExperimentConfig) -> Result<WitnessCheckReport, CliError> {
    cfg.validate()?;
    if cfg.samples == 0 {
        return Err(CliError::Config("samples: must be positive".into()));
    }
    let [c1, c2] = cfg.coherences_or(&[[1.0, 1.0]])[0];
    let c = CoherencePair::new(c1, c2)?;
    let witness = canonical_witness(c);
    let rho_in = initial_state(&c);
    let wmat = witness_matrix_w(&WitnessEigenData::zero_phase());

    let mut min_pairing = f64::INFINITY;
    let mut pairing_violations = 0u64;
    let mut min_expectation = f64::INFINITY;
    let mut expectation_violations = 0u64;
    for i in 0..cfg.samples as u64 {
        let f = sample_separable_channel(cfg.seed.wrapping_add(i), 1 + (i % 4) as usize)?;
        let pairing = coefficient_pairing(&f, &wmat);
        min_pairing = min_pairing.min(pairing);
        if pairing < SOUNDNESS_TOL {
            pairing_violations += 1;
        }
        if let Ok(w) = &witness {
            let value = w.expectation(&apply_channel(&f, &rho_in)?);
            min_expectation = min_expectation.min(value);
            if value < SOUNDNESS_TOL {
                expectation_violations += 1;
            }
        }
    }

    let p = half_turn_phases(cfg.r)?;
    let e = channel(&p, None)?;
    let nu_closed = WitnessEigenData::gravity_closed_form(&p)?.nu;
    let numeric = witness_eigendata(&e)?;
    let pairing_error = (coefficient_pairing(&e, &witness_matrix_w(&numeric)) - numeric.nu).abs();

    let mut violations = Vec::new();
    if pairing_violations > 0 {
        violations.push(format!(
            "{pairing_violations} separable channels with tr[F W] < -1e-10"
        ));
    }
    if expectation_violations > 0 {
        violations.push(format!(
            "{expectation_violations} separable outputs with Tr[W sigma] < -1e-10"
        ));
    }
    if pairing_error > CLOSED_FORM_TOL {
        violations.push(format!("tr[E W] differs from nu by {pairing_error:e}"));
    }
    if (numeric.nu - nu_closed).abs() > CLOSED_FORM_TOL {
        violations.push(format!(
            "numeric nu {} differs from closed form {nu_closed}",
            numeric.nu
        ));
    }

    let mut t = Table::new(["quantity", "value"]);
    entry(&mut t, "seed", Cell::Int(cfg.seed));
    entry(&mut t, "samples", Cell::Int(cfg.samples as u64));
    entry(&mut t, "c1", Cell::Num(c1));
    entry(&mut t, "c2", Cell::Num(c2));
    entry(&mut t, "min_trace_F_W", Cell::Num(min_pairing));
    entry(
        &mut t,
        "trace_F_W_violations",
        Cell::Int(pairing_violations),
    );
    match &witness {
        Ok(_) => {
            entry(&mut t, "min_Tr_W_sigma", Cell::Num(min_expectation));
            entry(
                &mut t,
                "Tr_W_sigma_violations",
                Cell::Int(expectation_violations),
            );
        }
        Err(err) => {
            let refusal = Cell::Text(format!("refused: {err}"));
            entry(&mut t, "min_Tr_W_sigma", refusal.clone());
            entry(&mut t, "Tr_W_sigma_violations", refusal);
        }
    }
    entry(&mut t, "dPhi_rad", Cell::Num(p.entangling_phase()));
    entry(&mut t, "nu_closed_form", Cell::Num(nu_closed));
    entry(&mut t, "nu_numeric", Cell::Num(numeric.nu));
    entry(&mut t, "trace_E_W_minus_nu", Cell::Num(pairing_error));
    let status = if violations.is_empty() {
        "ok".to_string()
    } else {
        violations.join("; ")
    };
    entry(&mut t, "status", Cell::Text(status));
    Ok(WitnessCheckReport {
        table: t,
        violations,
    })
}
