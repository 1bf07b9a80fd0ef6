use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "btbs", version, about = "Binary Tree of Bloch Spheres toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a state file into a data register.
    Decompose {
        /// States file (.json or .csv).
        #[arg(long)]
        input: PathBuf,
        /// Schmidt qubit order, e.g. "2,0,1". Defaults to the identity.
        #[arg(long)]
        order: Option<String>,
        /// Register file (.json or .csv); JSON on stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Render a data register as an SVG tree of Bloch spheres.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 60)]
        sphere_radius: u32,
        #[arg(long, default_value_t = 3)]
        point_radius: u32,
        #[arg(long, default_value_t = 20)]
        h_gap: u32,
        #[arg(long, default_value_t = 40)]
        v_gap: u32,
    },
    /// Time-evolve a superposition of eigenstates of a random Hamiltonian.
    Evolve {
        #[arg(long)]
        qubits: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated eigenstate indices (ascending energy order).
        #[arg(long)]
        excite: String,
        /// Comma-separated real coefficients, one per excited eigenstate.
        /// Defaults to all ones.
        #[arg(long)]
        coeffs: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t_start: f64,
        #[arg(long, allow_negative_numbers = true)]
        t_end: f64,
        #[arg(long, default_value_t = 100)]
        t_steps: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Write one of the built-in demo datasets.
    Demo {
        kind: DemoKind,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Serve the decomposition API and the viewer's static files.
    Serve {
        #[arg(long, env = "BTBS_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory with the viewer's built assets.
        #[arg(long)]
        static_dir: Option<PathBuf>,
        /// Maximum request body size in bytes.
        #[arg(long, default_value_t = crate::serve::DEFAULT_BODY_LIMIT)]
        max_body: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoKind {
    /// Parameterized Bell circuit, t swept over [0, 1].
    Bell,
    /// Amplitude encoding of a random 8-vector with entry 5 swept over [0, 1].
    Amplitude,
    /// Angle encoding of synthetic two-class 4-feature data.
    Angle,
}
