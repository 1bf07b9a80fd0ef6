use std::fs;
use std::io::Write;
use std::path::Path;

use btbs_core::generate::{
    amplitude_sweep, bell_sweep, linspace, random_unit_interval_vector, synthetic_features,
};
use btbs_core::{
    angle_encode, decompose, eigendecompose, evolve, export_register, export_states,
    parse_register, parse_states, random_hermitian, render_svg, superpose_eigenstates, Complex64,
    Format, QubitOrder, RenderSpec, StateBatch,
};

use crate::cli::{Command, DemoKind};
use crate::CliError;

/// Amplitude demo: 3 qubits, entry `u_5` swept.
const AMPLITUDE_DEMO_LEN: usize = 8;
const AMPLITUDE_DEMO_INDEX: usize = 5;

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Decompose {
            input,
            order,
            output,
        } => {
            let order = order.as_deref().map(parse_order).transpose()?;
            let batch = parse_states(&read(&input)?, format_of(&input)?)?;
            let order = match order {
                Some(o) if o.len() != batch.n_qubits() => {
                    return Err(CliError::Usage(format!(
                        "--order has {} entries but the states have {} qubits",
                        o.len(),
                        batch.n_qubits()
                    )))
                }
                Some(o) => o,
                None => QubitOrder::identity(batch.n_qubits()),
            };
            let register = decompose(&batch, &order)?;
            match output {
                Some(path) => write(&path, &export_register(&register, format_of(&path)?)),
                None => std::io::stdout()
                    .write_all(&export_register(&register, Format::Json))
                    .map_err(|e| CliError::Io(format!("stdout: {e}"))),
            }
        }
        Command::Render {
            input,
            output,
            sphere_radius,
            point_radius,
            h_gap,
            v_gap,
        } => {
            if sphere_radius == 0 || point_radius == 0 {
                return Err(CliError::Usage("radii must be positive".into()));
            }
            let register = parse_register(&read(&input)?, format_of(&input)?)?;
            let spec = RenderSpec {
                sphere_radius_px: sphere_radius,
                h_gap_px: h_gap,
                v_gap_px: v_gap,
                point_radius_px: point_radius,
            };
            write(&output, render_svg(&register, &spec)?.as_bytes())
        }
        Command::Evolve {
            qubits,
            seed,
            excite,
            coeffs,
            t_start,
            t_end,
            t_steps,
            output,
        } => {
            if qubits == 0 || qubits > 10 {
                return Err(CliError::Usage("--qubits must be in 1..=10".into()));
            }
            let indices: Vec<usize> = parse_list(&excite, "--excite")?;
            let coeffs: Vec<Complex64> = match coeffs {
                Some(c) => parse_list::<f64>(&c, "--coeffs")?
                    .into_iter()
                    .map(|x| Complex64::new(x, 0.0))
                    .collect(),
                None => vec![Complex64::new(1.0, 0.0); indices.len()],
            };
            if coeffs.len() != indices.len() {
                return Err(CliError::Usage(format!(
                    "--coeffs has {} entries, --excite has {}",
                    coeffs.len(),
                    indices.len()
                )));
            }
            if t_steps == 0 {
                return Err(CliError::Usage("--t-steps must be at least 1".into()));
            }
            let h = random_hermitian(qubits, seed)?;
            let spectrum = eigendecompose(&h)?;
            if let Some(&k) = indices.iter().find(|&&k| k >= spectrum.len()) {
                return Err(CliError::Usage(format!(
                    "eigenstate index {k} out of range (dimension {})",
                    spectrum.len()
                )));
            }
            let psi0 = superpose_eigenstates(&spectrum, &indices, &coeffs)?;
            let times = linspace(t_start, t_end, t_steps)?;
            let batch = evolve(&spectrum, &psi0, &times)?;
            write_states(&output, &batch)
        }
        Command::Demo {
            kind,
            steps,
            seed,
            output,
        } => {
            if steps == 0 {
                return Err(CliError::Usage("--steps must be at least 1".into()));
            }
            let batch = match kind {
                DemoKind::Bell => bell_sweep(steps)?,
                DemoKind::Amplitude => {
                    let base = random_unit_interval_vector(AMPLITUDE_DEMO_LEN, seed);
                    amplitude_sweep(&base, AMPLITUDE_DEMO_INDEX, steps)?
                }
                DemoKind::Angle => StateBatch::new(
                    synthetic_features(steps, seed)
                        .iter()
                        .map(|x| angle_encode(x))
                        .collect::<Result<Vec<_>, _>>()?,
                )?,
            };
            write_states(&output, &batch)
        }
        Command::Serve {
            port,
            host,
            static_dir,
            max_body,
        } => {
            let config = crate::serve::ServeConfig {
                static_dir,
                max_body_bytes: max_body,
            };
            crate::serve::run_blocking(&host, port, config)
        }
    }
}

fn parse_order(s: &str) -> Result<QubitOrder, CliError> {
    s.parse::<QubitOrder>()
        .map_err(|e| CliError::Usage(format!("--order {s:?}: {e}")))
}

fn parse_list<T: std::str::FromStr>(s: &str, flag: &str) -> Result<Vec<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|e| CliError::Usage(format!("{flag}: bad entry {t:?}: {e}")))
        })
        .collect()
}

fn format_of(path: &Path) -> Result<Format, CliError> {
    Format::from_path(path).map_err(|e| CliError::Usage(e.to_string()))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_states(path: &Path, batch: &StateBatch) -> Result<(), CliError> {
    write(path, &export_states(batch, format_of(path)?))
}
