//! Subcommand dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use etaspec_core::coupling::identity_tolerance;
use etaspec_core::oracle::{run_suite, shoot_state, ShootingConfig, Suite, VerificationReport};
use etaspec_core::quantum::{spin_half_states, spinless_states};
use etaspec_core::radialwave::{normalize, ode_residual, radial_eval, series_coefficients};
use etaspec_core::{
    energy_eigenvalue, eta, eta_identity_residual, length_scale, transition, BoundState,
    BranchSign, Error as CoreError, PhysicalConstants, SpinMode, Validity,
};
use thiserror::Error;

use crate::args::{Cli, Command, Format, ModeArg, SourceArg, StateArgs};
use crate::report::{
    orbital_label, render_csv, render_json, render_json_lines, render_text, spectroscopic_label,
    EtaRecord, LabelError, LineRecord, Record, ReportRow, Source, VerifyRecord, WaveRecord,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] CoreError),
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("cannot read constants file {path}: {source}")]
    ConstantsFile {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Argument(String),
    #[error("{failed} of {total} states failed verification")]
    Verification { failed: usize, total: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

struct Context {
    constants: PhysicalConstants,
    branch: BranchSign,
    validity: Validity,
    format: Option<Format>,
}

/// Parse `argv` and run it, writing data to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if help { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if help { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match execute(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn load_constants(path: Option<&Path>) -> Result<PhysicalConstants, CliError> {
    let Some(path) = path else {
        return Ok(PhysicalConstants::default());
    };
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ConstantsFile {
        path: display.clone(),
        source,
    })?;
    Ok(PhysicalConstants::from_json_str(&text, &display)?)
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let ctx = Context {
        constants: load_constants(cli.constants.as_deref())?,
        branch: cli.branch.into(),
        validity: cli.strict_validity.into(),
        format: cli.format,
    };
    match cli.command {
        Command::Eta { mode, angular } => {
            let record = eta_record(mode.into(), angular, &ctx)?;
            emit(out, &[record], ctx.format.unwrap_or(Format::Json), true)
        }
        Command::Energy { state, source } => {
            let state = build_state(&state, &ctx)?;
            let row = report_row(&state, source, &ctx)?;
            emit(out, &[row], ctx.format.unwrap_or(Format::Json), true)
        }
        Command::Table { mode, n, source } => {
            let mut rows = Vec::new();
            for state in enumerate(mode, n, &ctx) {
                match report_row(&state, source, &ctx) {
                    Ok(row) => rows.push(row),
                    Err(CliError::Domain(e)) => writeln!(err, "skipped {state:?}: {e}")?,
                    Err(e) => return Err(e),
                }
            }
            emit(out, &rows, ctx.format.unwrap_or(Format::Csv), false)
        }
        Command::Lines { mode, n } => {
            let rows = line_records(mode, n, &ctx, err)?;
            emit(out, &rows, ctx.format.unwrap_or(Format::Csv), false)
        }
        Command::Wavefunction {
            state,
            samples,
            rmax,
        } => {
            let state = build_state(&state, &ctx)?;
            let rows = wave_records(&state, samples, rmax, &ctx)?;
            emit(out, &rows, ctx.format.unwrap_or(Format::Csv), false)
        }
        Command::Verify { suite } => verify(suite.into(), &ctx, out, err),
    }
}

fn emit<R: Record>(
    out: &mut dyn Write,
    rows: &[R],
    format: Format,
    single: bool,
) -> Result<(), CliError> {
    let text = match format {
        Format::Csv => render_csv(rows),
        Format::Text => render_text(rows),
        Format::Json if single && rows.len() == 1 => {
            serde_json::to_string_pretty(&rows[0]).expect("records serialize") + "\n"
        }
        Format::Json => render_json(rows),
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn mode_name(mode: SpinMode) -> String {
    mode.name().to_string()
}

fn eta_record(mode: SpinMode, angular: i32, ctx: &Context) -> Result<EtaRecord, CliError> {
    let value = eta(mode, angular, ctx.constants.alpha, ctx.branch)?;
    Ok(EtaRecord {
        mode: mode_name(mode),
        branch: ctx.branch.name().to_string(),
        angular,
        alpha: ctx.constants.alpha,
        eta: value.eta,
        root: value.root(),
        identity_residual: eta_identity_residual(&value),
        tolerance: identity_tolerance(angular),
    })
}

fn build_state(args: &StateArgs, ctx: &Context) -> Result<BoundState, CliError> {
    let mode: SpinMode = args.mode.into();
    let state = match (args.nr, args.n) {
        (Some(nr), _) => BoundState::new(mode, nr, args.angular, ctx.branch, ctx.validity)?,
        (None, Some(n)) => match mode {
            SpinMode::Spinless => BoundState::spinless_principal(n, args.angular, ctx.branch)?,
            SpinMode::SpinHalf => {
                BoundState::spin_half_principal(n, args.angular, ctx.branch, ctx.validity)?
            }
        },
        (None, None) => return Err(CliError::Argument("one of --nr or --n is required".into())),
    };
    Ok(state)
}

/// States with principal number in `n`, spinless first.
fn enumerate(
    mode: Option<ModeArg>,
    n: std::ops::RangeInclusive<u32>,
    ctx: &Context,
) -> Vec<BoundState> {
    let mut states = Vec::new();
    if mode != Some(ModeArg::Kg1) {
        states.extend(spinless_states(n.clone(), ctx.branch));
    }
    if mode != Some(ModeArg::Kg0) {
        states.extend(spin_half_states(n, ctx.branch, ctx.validity));
    }
    states
}

pub fn state_label(state: &BoundState) -> Result<String, LabelError> {
    match state.mode() {
        SpinMode::Spinless => orbital_label(state.n_principal(), state.angular()),
        SpinMode::SpinHalf => spectroscopic_label(state.n_principal(), state.angular()),
    }
}

fn report_row(state: &BoundState, source: SourceArg, ctx: &Context) -> Result<ReportRow, CliError> {
    let closed = energy_eigenvalue(state, &ctx.constants)?;
    let (e_ratio, binding_ev, source) = match source {
        SourceArg::ClosedForm => (
            closed.total_energy_ratio,
            closed.binding_energy,
            Source::ClosedForm,
        ),
        SourceArg::Shooting => {
            let shot = shoot_state(state, &ShootingConfig::default(), &ctx.constants)?;
            (
                shot.energy_ratio,
                shot.binding_energy(&ctx.constants),
                Source::Shooting,
            )
        }
    };
    Ok(ReportRow {
        mode: mode_name(state.mode()),
        branch: state.branch().name().to_string(),
        n_principal: state.n_principal(),
        angular: state.angular(),
        label: state_label(state)?,
        d: closed.effective_denominator,
        e_ratio,
        binding_ev,
        source,
        non_dirac: state.is_non_dirac(),
    })
}

fn line_records(
    mode: Option<ModeArg>,
    n: std::ops::RangeInclusive<u32>,
    ctx: &Context,
    err: &mut dyn Write,
) -> Result<Vec<LineRecord>, CliError> {
    let mut levels = Vec::new();
    for state in enumerate(mode, n, ctx) {
        match energy_eigenvalue(&state, &ctx.constants) {
            Ok(e) => levels.push((state_label(&state)?, e)),
            Err(e) => writeln!(err, "skipped {state:?}: {e}")?,
        }
    }
    let mut rows = Vec::new();
    for (i, (label_a, a)) in levels.iter().enumerate() {
        for (label_b, b) in &levels[i + 1..] {
            if a.state.mode() != b.state.mode() {
                continue;
            }
            // orient so the upper level comes first and delta_e >= 0
            let ((upper_label, upper), (lower_label, lower)) =
                if a.binding_energy >= b.binding_energy {
                    ((label_a, a), (label_b, b))
                } else {
                    ((label_b, b), (label_a, a))
                };
            let (delta_ev, nm, ghz, degenerate) = match transition(upper, lower, &ctx.constants) {
                Ok(t) => (
                    t.delta_e,
                    Some(t.wavelength),
                    Some(t.frequency * 1e-9),
                    false,
                ),
                Err(CoreError::DegenerateTransition(_)) => (0.0, None, None, true),
                Err(e) => return Err(e.into()),
            };
            rows.push(LineRecord {
                mode: mode_name(upper.state.mode()),
                branch: upper.state.branch().name().to_string(),
                upper: upper_label.clone(),
                lower: lower_label.clone(),
                delta_ev,
                nm,
                ghz,
                degenerate,
            });
        }
    }
    Ok(rows)
}

fn wave_records(
    state: &BoundState,
    samples: usize,
    rmax: Option<f64>,
    ctx: &Context,
) -> Result<Vec<WaveRecord>, CliError> {
    if samples == 0 {
        return Err(CliError::Argument("--samples must be at least 1".into()));
    }
    let energy = energy_eigenvalue(state, &ctx.constants)?;
    let scale = length_scale(&energy, &ctx.constants)?;
    let series = normalize(&series_coefficients(state, &energy, &scale)?)?;
    let rmax = rmax.unwrap_or(20.0 * scale.r0_dimensionless);
    if !(rmax > 0.0 && rmax.is_finite()) {
        return Err(CliError::Argument(format!(
            "--rmax must be positive, got {rmax}"
        )));
    }
    (1..=samples)
        .map(|i| {
            let r = rmax * i as f64 / samples as f64;
            let radial = radial_eval(&series, r)?;
            Ok(WaveRecord {
                r,
                radial,
                density: r * r * radial * radial,
                residual: ode_residual(&series, &energy, r)?,
            })
        })
        .collect()
}

fn verify_record(report: &VerificationReport) -> Result<VerifyRecord, CliError> {
    Ok(VerifyRecord {
        mode: mode_name(report.state.mode()),
        label: state_label(&report.state)?,
        radial_degree: report.state.radial_degree(),
        angular: report.state.angular(),
        e_closed: report.e_closed,
        e_shoot: report.e_shoot,
        rel_err: report.rel_err,
        residual_max: report.residual_max,
        node_count_ok: report.node_count_ok,
        passed: report.passed,
        error: report.error.clone(),
    })
}

fn verify(
    suite: Suite,
    ctx: &Context,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let reports = run_suite(&suite.states(), &ShootingConfig::default(), &ctx.constants);
    let rows = reports
        .iter()
        .map(verify_record)
        .collect::<Result<Vec<_>, _>>()?;
    let text = match ctx.format.unwrap_or(Format::Text) {
        Format::Json => render_json_lines(&rows),
        Format::Csv => render_csv(&rows),
        Format::Text => render_text(&rows),
    };
    out.write_all(text.as_bytes())?;
    let failed = rows.iter().filter(|r| !r.passed).count();
    writeln!(
        err,
        "verify {suite:?}: {} of {} states passed",
        rows.len() - failed,
        rows.len()
    )?;
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: rows.len(),
        });
    }
    Ok(())
}
