use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use spinform::bases::{
    basis_from_orthogonal, basis_from_unitary_symplectic, check_biorthonormal, magic_basis,
    product_biortho_basis, random_real_orthogonal, random_unitary_symplectic, BasisSet,
};
use spinform::entanglement::{is_maximally_entangled, maxent_generate, tangle, tangle_report};
use spinform::groups::{
    canonical_basis, classify, group_residual, homomorphism_check, local_form_criterion,
    represent_in_basis, slocc_obstruction,
};
use spinform::io::{self, BasisFile, Operator, OperatorFile, StateFile};
use spinform::selftest::{self, Level};
use spinform::spinflip::{bilinear_form, dense, flip_state, FormKind};
use spinform::tensor_core::{
    random_sl2_list_with, random_su2_list_with, seeded_rng, PureState, Tolerances,
};
use spinform::{Error, VERSION};

#[derive(Parser)]
#[command(
    name = "spinform",
    version,
    about = "Spin-flip forms, bi-orthonormal bases and entanglement checks for n-qubit states"
)]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_norm: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_gram: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_residual: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Spin-flip a state file.
    Flip {
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use the explicit σ_y^{⊗n} construction (n <= 8).
        #[arg(long)]
        dense_oracle: bool,
    },
    /// Evaluate the bilinear form (ψ, φ) = <ψ̄|φ>.
    Form {
        psi: PathBuf,
        phi: PathBuf,
        #[arg(long)]
        dense_oracle: bool,
    },
    /// Evaluate |<ψ̄|ψ>|.
    Tangle {
        state: PathBuf,
        #[arg(long)]
        dense_oracle: bool,
        /// Include the coefficient polygon in the magic basis (even n).
        #[arg(long)]
        polygon: bool,
    },
    #[command(subcommand)]
    Basis(BasisCommand),
    #[command(subcommand)]
    Op(OpCommand),
    #[command(subcommand)]
    Maxent(MaxentCommand),
    /// Run the invariant battery.
    Selftest {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum BasisCommand {
    /// Generalized magic basis (even n).
    Magic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product basis over {i|0>, |1>} (odd n).
    Product {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random bi-orthonormal basis for either parity.
    RandomBiortho {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify bi-orthonormality of a basis file.
    Check { basis: PathBuf },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Group {
    Sl2,
    Su2,
}

#[derive(Subcommand)]
enum OpCommand {
    /// Unitarity, form preservation and the SLOCC obstruction.
    Classify { operator: PathBuf },
    /// Random list of local operators.
    RandomLocal {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Group::Sl2)]
        group: Group,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Matrix of the operator in a bi-orthonormal basis and its group residual.
    Represent {
        operator: PathBuf,
        /// Defaults to the magic (even n) or product (odd n) basis.
        #[arg(long)]
        basis: Option<PathBuf>,
        /// Random partners for the multiplicativity check (local operators only).
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum MaxentCommand {
    /// Evaluate the three maximal-entanglement conditions.
    Check { state: PathBuf },
    /// Build e^{iθ} Σ ν_l e_l over the magic basis.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        nu: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Machine-readable command result.
#[derive(Serialize)]
struct Report {
    command: String,
    version: &'static str,
    seeds: Vec<u64>,
    passed: bool,
    verdicts: Map<String, Value>,
    residuals: Map<String, Value>,
    values: Map<String, Value>,
}

impl Report {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            version: VERSION,
            seeds: Vec::new(),
            passed: true,
            verdicts: Map::new(),
            residuals: Map::new(),
            values: Map::new(),
        }
    }

    fn verdict(&mut self, name: &str, ok: bool) -> &mut Self {
        self.passed &= ok;
        self.verdicts.insert(name.to_string(), Value::Bool(ok));
        self
    }

    fn residual(&mut self, name: &str, r: f64) -> &mut Self {
        self.residuals.insert(name.to_string(), json!(r));
        self
    }

    fn value(&mut self, name: &str, v: impl Serialize) -> &mut Self {
        self.values.insert(
            name.to_string(),
            serde_json::to_value(v).expect("serializable"),
        );
        self
    }
}

fn complex_json(c: spinform::C64) -> Value {
    json!([c.re, c.im])
}

/// Writes `text` to `out`, or returns it for standard output.
fn emit(out: &Option<PathBuf>, text: String, report: &mut Report) -> Result<Option<String>, Error> {
    match out {
        Some(path) => {
            io::write_text(path, &text)?;
            report.value("out", path.display().to_string());
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn read_state(path: &Path) -> Result<PureState, Error> {
    io::read_state(path)
}

fn flip(psi: &PureState, dense_oracle: bool) -> Result<PureState, Error> {
    if dense_oracle {
        dense::flip_state(psi)
    } else {
        Ok(flip_state(psi))
    }
}

fn run(cli: Cli) -> Result<(Report, Option<String>), Error> {
    let tol = Tolerances::new(cli.tol.tol_norm, cli.tol.tol_gram, cli.tol.tol_residual)?;
    let mut stdout = None;
    let report = match cli.command {
        Command::Flip {
            state,
            out,
            dense_oracle,
        } => {
            let mut r = Report::new("flip");
            let psi = read_state(&state)?;
            let flipped = flip(&psi, dense_oracle)?;
            r.value("n", psi.n()).value("dense_oracle", dense_oracle);
            let file = StateFile {
                label: Some(format!("flip of {}", state.display())),
                ..StateFile::from_state(&flipped)
            };
            stdout = emit(&out, io::render_state(&file), &mut r)?;
            r
        }
        Command::Form {
            psi,
            phi,
            dense_oracle,
        } => {
            let mut r = Report::new("form");
            let (a, b) = (read_state(&psi)?, read_state(&phi)?);
            let f = if dense_oracle {
                dense::bilinear_form(&a, &b)?
            } else {
                bilinear_form(&a, &b)?
            };
            r.value("form", complex_json(f.value))
                .value("kind", f.kind)
                .value("n", a.n())
                .value("dense_oracle", dense_oracle);
            r
        }
        Command::Tangle {
            state,
            dense_oracle,
            polygon,
        } => {
            let mut r = Report::new("tangle");
            let psi = read_state(&state)?;
            let t = tangle_report(&psi, polygon, &tol)?;
            let value = if dense_oracle {
                dense::bilinear_form(&psi, &psi)?.value.norm() / psi.norm_sqr()
            } else {
                t.value
            };
            r.value("tangle", value)
                .value("kind", FormKind::for_qubits(psi.n()))
                .value("renormalized", t.renormalized)
                .value("dense_oracle", dense_oracle);
            if let Some(p) = t.polygon {
                r.value("polygon", p).value("basis_used", t.basis_used);
            }
            r
        }
        Command::Basis(cmd) => basis_command(cmd, &tol, &mut stdout)?,
        Command::Op(cmd) => op_command(cmd, &tol, &mut stdout)?,
        Command::Maxent(cmd) => maxent_command(cmd, &tol, &mut stdout)?,
        Command::Selftest { level, seed } => {
            let mut r = Report::new("selftest");
            r.seeds.push(seed);
            r.value("level", level);
            for line in selftest::run(level, seed, &tol)? {
                r.verdict(&line.name, line.passed)
                    .residual(&line.name, line.residual);
            }
            r
        }
    };
    Ok((report, stdout))
}

fn basis_report(r: &mut Report, basis: &BasisSet, tol: &Tolerances) {
    let v = check_biorthonormal(basis, tol).verdict;
    r.verdict("biorthonormal", v.passed)
        .residual("hilbert_gram", v.hilbert_residual)
        .residual("form_gram", v.form_residual)
        .value("kind", v.kind)
        .value("n", basis.n())
        .value("vectors", basis.dim())
        .value("ordering", basis.ordering());
}

fn write_basis(
    r: &mut Report,
    basis: &BasisSet,
    seed: Option<u64>,
    out: &Option<PathBuf>,
) -> Result<Option<String>, Error> {
    let file = BasisFile {
        seed,
        ..BasisFile::from_basis(basis)
    };
    emit(out, io::render_basis(&file), r)
}

fn basis_command(
    cmd: BasisCommand,
    tol: &Tolerances,
    stdout: &mut Option<String>,
) -> Result<Report, Error> {
    let r = match cmd {
        BasisCommand::Magic { n, out } => {
            let mut r = Report::new("basis magic");
            let b = magic_basis(n)?;
            basis_report(&mut r, &b, tol);
            *stdout = write_basis(&mut r, &b, None, &out)?;
            r
        }
        BasisCommand::Product { n, out } => {
            let mut r = Report::new("basis product");
            let b = product_biortho_basis(n)?;
            basis_report(&mut r, &b, tol);
            *stdout = write_basis(&mut r, &b, None, &out)?;
            r
        }
        BasisCommand::RandomBiortho { n, seed, out } => {
            let mut r = Report::new("basis random-biortho");
            r.seeds.push(seed);
            let b = if n % 2 == 0 {
                basis_from_orthogonal(&random_real_orthogonal(1 << n, seed)?, n, tol)?
            } else {
                basis_from_unitary_symplectic(&random_unitary_symplectic(n, seed)?, n, tol)?
            };
            basis_report(&mut r, &b, tol);
            *stdout = write_basis(&mut r, &b, Some(seed), &out)?;
            r
        }
        BasisCommand::Check { basis } => {
            let mut r = Report::new("basis check");
            let b = io::read_basis(&basis)?;
            basis_report(&mut r, &b, tol);
            r
        }
    };
    Ok(r)
}

fn op_command(
    cmd: OpCommand,
    tol: &Tolerances,
    stdout: &mut Option<String>,
) -> Result<Report, Error> {
    let r = match cmd {
        OpCommand::Classify { operator } => {
            let mut r = Report::new("op classify");
            let op = io::read_operator(&operator)?;
            let m = op.to_global()?;
            let c = classify(&m, tol)?;
            let s = slocc_obstruction(&m, tol)?;
            r.verdict("form_preserving", c.is_form_preserving.passed)
                .residual("form_preserving", c.is_form_preserving.residual)
                .residual("unitary", c.is_unitary.residual)
                .residual("basis_rep", c.basis_rep_residual)
                .value("unitary", c.is_unitary.passed)
                .value("kind", c.kind)
                .value("n", c.n)
                .value("slocc", s.verdict)
                .value("slocc_note", s.note);
            if let Some(d) = c.det {
                r.value("det", d);
            }
            if let Operator::Local(list) = &op {
                let local = local_form_criterion(list, tol);
                r.verdict("local_criteria_agree", local.iter().all(|c| c.agree))
                    .value("local", local);
            }
            r
        }
        OpCommand::RandomLocal {
            n,
            group,
            seed,
            out,
        } => {
            let mut r = Report::new("op random-local");
            r.seeds.push(seed);
            let mut rng = seeded_rng(seed);
            let list = match group {
                Group::Sl2 => random_sl2_list_with(n, &mut rng)?,
                Group::Su2 => random_su2_list_with(n, &mut rng)?,
            };
            r.value("n", n).value("group", group);
            let file = OperatorFile {
                seed: Some(seed),
                ..OperatorFile::from_operator(&Operator::Local(list))
            };
            *stdout = emit(&out, io::render_operator(&file), &mut r)?;
            r
        }
        OpCommand::Represent {
            operator,
            basis,
            trials,
            seed,
        } => {
            let mut r = Report::new("op represent");
            let op = io::read_operator(&operator)?;
            let m = op.to_global()?;
            let b = match basis {
                Some(path) => io::read_basis(&path)?,
                None => canonical_basis(m.n())?,
            };
            let kind = FormKind::for_qubits(m.n());
            let rep = represent_in_basis(&m, &b, tol)?;
            let residual = group_residual(&rep, kind);
            r.verdict("group_relation", residual <= tol.tol_residual)
                .residual("group_relation", residual)
                .value("kind", kind)
                .value("n", m.n())
                .value(
                    "matrix",
                    rep.row_iter()
                        .map(|row| row.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                );
            if let Operator::Local(list) = &op {
                r.seeds.push(seed);
                let h = homomorphism_check(list, trials, seed, tol)?;
                r.verdict("homomorphism", h.passed)
                    .residual("multiplicativity", h.max_multiplicativity_residual)
                    .residual("max_group_relation", h.max_group_residual)
                    .value("det_r", h.det_r)
                    .value("trials", trials);
            }
            r
        }
    };
    Ok(r)
}

fn maxent_command(
    cmd: MaxentCommand,
    tol: &Tolerances,
    stdout: &mut Option<String>,
) -> Result<Report, Error> {
    let r = match cmd {
        MaxentCommand::Check { state } => {
            let mut r = Report::new("maxent check");
            let psi = read_state(&state)?;
            let m = is_maximally_entangled(&psi, tol)?;
            r.verdict("maximally_entangled", m.maximal)
                .residual("tangle", m.tangle.residual)
                .residual("real_coefficients", m.real_coefficients.residual)
                .residual("structure_relation", m.structure.relation_residual)
                .residual("structure_weight", m.structure.weight_residual)
                .value("theta", m.real_coefficients.theta)
                .value("nu", &m.real_coefficients.nu);
            r
        }
        MaxentCommand::Generate { n, theta, nu, out } => {
            let mut r = Report::new("maxent generate");
            let psi = maxent_generate(n, theta, &nu, tol)?;
            let t = tangle(&psi);
            r.verdict("tangle_one", (1.0 - t).abs() <= tol.tol_residual)
                .residual("tangle", (1.0 - t).abs())
                .value("theta", theta)
                .value("n", n);
            let file = StateFile {
                label: Some(format!("maxent theta={theta}")),
                ..StateFile::from_state(&psi)
            };
            *stdout = emit(&out, io::render_state(&file), &mut r)?;
            r
        }
    };
    Ok(r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, stdout)) => {
            match stdout {
                // data goes to stdout, the report to stderr
                Some(text) => {
                    println!("{text}");
                    eprintln!(
                        "{}",
                        serde_json::to_string(&report).expect("report serializes")
                    );
                }
                None => println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serializes")
                ),
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ Error::ConditionDisagreement(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
