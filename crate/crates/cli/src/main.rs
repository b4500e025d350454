use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pulsesynth::format::{self, parse_sequence_any};
use pulsesynth::pipeline::{compile_unitary, expand_unitary};
use pulsesynth::sim::{equal_up_to_phase, simulate};
use pulsesynth::{BranchConvention, CompileOptions, ComplexMatrix, GateSpec, MAX_SIM_SPINS};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_APPROXIMATE: u8 = 2;
const EXIT_MISMATCH: u8 = 3;

/// Compile spin-1/2 unitaries into x/y rotation and Ising coupling pulses.
#[derive(Parser)]
#[command(name = "pulsesynth", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a gate or matrix into a pulse sequence.
    Compile(CompileArgs),
    /// Print the product-operator expansion of a gate's generator.
    Expand(ExpandArgs),
    /// Print the matrix of a pulse sequence file.
    Simulate(SimulateArgs),
    /// Check a pulse sequence file against a gate or matrix up to global phase.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TargetArgs {
    /// Named gate.
    #[arg(long, value_parser = GateSpec::NAMES, conflicts_with = "matrix", required_unless_present = "matrix")]
    gate: Option<String>,
    /// Matrix file (`spins N` header, then rows of `a+bi` entries).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Number of spins for the gate.
    #[arg(long)]
    spins: Option<usize>,
    /// Control spin(s), 1-indexed; toffoli takes two.
    #[arg(long, value_delimiter = ',')]
    control: Vec<usize>,
    /// Target spin, 1-indexed.
    #[arg(long)]
    target: Option<usize>,
    /// Spins exchanged by swap.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pair: Vec<usize>,
    /// Phase angle for cphase (radians).
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    /// Marked basis states for fphase.
    #[arg(long, value_delimiter = ',')]
    marked: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Branch {
    Lower,
    Upper,
}

impl From<Branch> for BranchConvention {
    fn from(b: Branch) -> Self {
        match b {
            Branch::Lower => BranchConvention::PrincipalLower,
            Branch::Upper => BranchConvention::PrincipalUpper,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long, value_enum, default_value = "lower")]
    branch: Branch,
    /// Keep z rotations instead of expanding them into x/y composites.
    #[arg(long)]
    allow_z: bool,
    /// Use full c-NOT sandwiches instead of pseudo c-NOTs.
    #[arg(long)]
    full_cnot: bool,
    #[arg(long, default_value_t = pulsesynth::decompose::DEFAULT_TROTTER_STEPS)]
    trotter_steps: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    no_verify: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Write the sequence here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long, value_enum, default_value = "lower")]
    branch: Branch,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Sequence file (text or JSON).
    sequence: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Sequence file (text or JSON).
    sequence: PathBuf,
    #[command(flatten)]
    target: TargetArgs,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

impl TargetArgs {
    fn gate_spec(&self, name: &str) -> Result<GateSpec> {
        let highest = self
            .control
            .iter()
            .chain(&self.target)
            .chain(&self.pair)
            .copied()
            .max()
            .unwrap_or(0);
        let spins = |default: usize| self.spins.unwrap_or(default.max(highest));
        let spec = match name {
            "cnot" => {
                let control = match self.control.as_slice() {
                    [] => 1,
                    [c] => *c,
                    _ => bail!("cnot takes one --control"),
                };
                GateSpec::Cnot {
                    spins: spins(2),
                    control,
                    target: self.target.unwrap_or(2),
                }
            }
            "toffoli" => {
                let controls = match self.control.as_slice() {
                    [] => [1, 2],
                    [a, b] => [*a, *b],
                    _ => bail!("toffoli takes two --control spins"),
                };
                GateSpec::Toffoli {
                    spins: spins(3),
                    controls,
                    target: self.target.unwrap_or(3),
                }
            }
            "swap" => {
                let (a, b) = match self.pair.as_slice() {
                    [] => (1, 2),
                    [a, b] => (*a, *b),
                    _ => bail!("swap takes --pair a,b"),
                };
                GateSpec::Swap {
                    spins: spins(2),
                    a,
                    b,
                }
            }
            "cphase" => GateSpec::Cphase {
                spins: spins(2),
                control: self.control.first().copied().unwrap_or(1),
                target: self.target.unwrap_or(2),
                phi: self.phi.unwrap_or(std::f64::consts::PI),
            },
            "fphase" => {
                if self.marked.is_empty() {
                    bail!("fphase needs --marked");
                }
                GateSpec::Fphase {
                    spins: spins(2),
                    marked: self.marked.clone(),
                }
            }
            other => bail!("unknown gate '{other}'"),
        };
        Ok(spec)
    }

    fn unitary(&self) -> Result<ComplexMatrix> {
        match (&self.gate, &self.matrix) {
            (Some(name), None) => Ok(self.gate_spec(name)?.build()?),
            (None, Some(path)) => Ok(format::parse_matrix(&read(path)?)
                .with_context(|| format!("parsing {}", path.display()))?),
            _ => Err(anyhow!("give exactly one of --gate or --matrix")),
        }
    }
}

fn warn_large(spins: usize) {
    if spins > MAX_SIM_SPINS {
        eprintln!(
            "warning: {spins} spins; the basis expansion has 4^{spins} terms and verification is disabled above {MAX_SIM_SPINS} spins"
        );
    }
}

fn cmd_compile(args: &CompileArgs) -> Result<u8> {
    let u = args.target.unitary()?;
    let spins = u.spins().unwrap_or(0);
    warn_large(spins);
    let opts = CompileOptions {
        branch: args.branch.into(),
        allow_z: args.allow_z,
        use_pseudo_cnot: !args.full_cnot,
        trotter_steps: args.trotter_steps,
        tol: args.tol,
        verify: !args.no_verify && spins <= MAX_SIM_SPINS,
    };
    let report = compile_unitary(&u, &opts)?;
    let text = match args.format {
        OutputFormat::Text => format::write_sequence(&report.sequence),
        OutputFormat::Json => format::sequence_to_json(&report.sequence) + "\n",
    };
    emit(&text, args.out.as_deref())?;

    let residual = report
        .verification_residual
        .map(|r| format!("{r:.3e}"))
        .unwrap_or_else(|| "n/a".into());
    eprintln!(
        "strategy: {} exact: {} ops: {} residual: {residual}",
        report.strategy, report.exact, report.op_count
    );
    if !report.exact {
        eprintln!(
            "note: first-order Trotter approximation with {} steps",
            args.trotter_steps
        );
        return Ok(EXIT_APPROXIMATE);
    }
    if report.verified() == Some(false) {
        eprintln!("error: verification failed (residual {residual})");
        return Ok(EXIT_MISMATCH);
    }
    Ok(EXIT_OK)
}

fn cmd_expand(args: &ExpandArgs) -> Result<u8> {
    let u = args.target.unitary()?;
    warn_large(u.spins().unwrap_or(0));
    let exp = expand_unitary(&u, args.branch.into(), args.tol)?;
    let mut text = format::render_expansion(&exp);
    text.push_str(&format!("# exact:{}\n", exp.all_commute()));
    emit(&text, None)?;
    Ok(EXIT_OK)
}

fn load_sequence(path: &Path) -> Result<pulsesynth::PulseSequence> {
    let seq =
        parse_sequence_any(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    if seq.spins > MAX_SIM_SPINS {
        bail!(
            "simulation is limited to {MAX_SIM_SPINS} spins, sequence has {}",
            seq.spins
        );
    }
    Ok(seq)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<u8> {
    let seq = load_sequence(&args.sequence)?;
    emit(&format::write_matrix(&simulate(&seq)?), args.out.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8> {
    let seq = load_sequence(&args.sequence)?;
    let u = args.target.unitary()?;
    let got = simulate(&seq)?;
    let check = equal_up_to_phase(&u, &got, args.tol)?;
    println!(
        "equal: {} residual: {:e} phase: {}",
        check.equal,
        check.residual,
        format::format_sig(check.phase, format::ANGLE_DIGITS)
    );
    if check.equal {
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "error: sequence does not match target (residual {:e})",
            check.residual
        );
        Ok(EXIT_MISMATCH)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Compile(a) => cmd_compile(a),
        Cmd::Expand(a) => cmd_expand(a),
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
