//! `doublebos`: build and verify double-bosonisation quantum groups from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use doublebos_core::cartan::DatumConfig;
use doublebos_core::doublebos::{build, build_root_of_unity, BuildOptions, UAlgebra};
use doublebos_core::freealg::Degree;
use doublebos_core::pbw::{check_example56, emit_matrix_relations};
use doublebos_core::report::Report;
use doublebos_core::rmatrix::RMatrix;
use doublebos_core::{Mode, Scalar};

#[derive(Parser)]
#[command(name = "doublebos", version, about = "Double-bosonisation quantum groups: build and verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here (`.json` / `.tex` appended for `both`) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Latex,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a Cartan datum and its root datum.
    CartanCheck {
        #[arg(long)]
        datum: String,
    },
    /// Radical (q-Serre relations) of the braided group in one degree.
    Serre {
        #[arg(long)]
        datum: String,
        /// Multidegree, comma separated, e.g. `2,1`.
        #[arg(long, value_delimiter = ',')]
        degree: Vec<i64>,
    },
    /// Build U and verify the Hopf axioms up to the given degree.
    Build {
        #[arg(long)]
        datum: String,
        #[arg(long)]
        verify: Option<usize>,
        #[arg(long, default_value_t = 8)]
        truncation: usize,
        /// Work in Q[q]/Φ_r instead of Q(q^{1/2}).
        #[arg(long)]
        cyclotomic: Option<u32>,
    },
    /// u_q(sl₂) at a primitive r-th root of unity.
    RootOfUnity {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        verify_qt: bool,
    },
    /// Fundamental representation on the braided plane.
    Fundamental {
        #[arg(long)]
        datum: String,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long)]
        verify: bool,
        /// Total degree bound for the module-algebra law.
        #[arg(long, default_value_t = 4)]
        module_total: usize,
    },
    /// Matrix-form relations for an R-matrix (JSON file or preset `sl2-rmatrix`).
    RmatrixRelations {
        #[arg(long)]
        file: String,
        #[arg(long)]
        dilaton: bool,
        #[arg(long, default_value = "1")]
        lambda: String,
    },
    /// The U_q(sl₃) from U_q(sl₂) induction check.
    InductSl3,
}

type Failure = Box<dyn std::error::Error>;

fn datum_config(spec: &str) -> Result<DatumConfig, Failure> {
    match DatumConfig::preset(spec) {
        Ok(c) => Ok(c),
        Err(_) => Ok(DatumConfig::from_json(&std::fs::read_to_string(spec)?)?),
    }
}

fn algebra(spec: &str, opts: &BuildOptions) -> Result<UAlgebra, Failure> {
    let (d, r) = datum_config(spec)?.resolve()?;
    Ok(build(&d, &r, opts)?)
}

fn run(cmd: &Command) -> Result<Report, Failure> {
    let mut rep = Report::new();
    match cmd {
        Command::CartanCheck { datum } => {
            let res = datum_config(datum)?.resolve();
            rep.check("cartan datum", res.err().map(|e| e.to_string()));
        }
        Command::Serre { datum, degree } => {
            let u = algebra(datum, &BuildOptions::default())?;
            if degree.len() != u.n() {
                return Err(format!("degree needs {} entries", u.n()).into());
            }
            let sym = |i: usize| if u.n() == 1 { "e".to_string() } else { format!("e^{}", i + 1) };
            for p in u.b_group().radical_basis(&Degree(degree.clone())) {
                rep.relation(p.render(&sym), "0");
            }
        }
        Command::Build { datum, verify, truncation, cyclotomic } => {
            if *truncation == 0 {
                return Err("truncation must be at least 1".into());
            }
            let mode = match cyclotomic {
                Some(r) => Mode::cyclotomic(*r)?,
                None => Mode::Generic,
            };
            let u = algebra(datum, &BuildOptions { mode, truncation: *truncation, dilaton: None })?;
            rep.extend(u.presentation()?);
            if let Some(d) = verify {
                rep.extend(u.verify_bialgebra(*d));
            }
        }
        Command::RootOfUnity { r, verify_qt } => {
            let u = build_root_of_unity(*r)?;
            rep.extend(u.presentation()?);
            if *verify_qt {
                let rr = u.quasitriangular_element()?;
                let qt = u.verify_quasitriangular(&rr);
                let axioms = &qt.checks[..3];
                let ok = axioms.iter().filter(|c| c.witness.is_none()).count();
                eprintln!("quasitriangular axioms: {} ({ok}/3)", if ok == 3 { "pass" } else { "FAIL" });
                rep.extend(qt);
            }
        }
        Command::Fundamental { datum, max_degree, verify, module_total } => {
            let u = algebra(datum, &BuildOptions::default())?;
            if *verify {
                rep.extend(u.verify_fundamental(*max_degree)?);
                rep.extend(u.verify_module_algebra(*module_total)?);
            } else {
                rep.extend(u.presentation()?);
            }
        }
        Command::RmatrixRelations { file, dilaton, lambda } => {
            let r = if file == "sl2-rmatrix" { RMatrix::sl2() } else { RMatrix::from_json(&std::fs::read_to_string(file)?)? };
            let lambda = Scalar::parse(lambda)?;
            rep.extend(emit_matrix_relations(&r, &lambda, *dilaton).to_report());
        }
        Command::InductSl3 => rep.extend(check_example56()?),
    }
    Ok(rep)
}

fn emit(rep: &Report, format: Format, out: &Option<PathBuf>) -> std::io::Result<()> {
    let json = rep.to_json() + "\n";
    let tex = rep.to_latex();
    match (out, format) {
        (None, Format::Json) => print!("{json}"),
        (None, Format::Latex) => print!("{tex}"),
        (None, Format::Both) => print!("{json}{tex}"),
        (Some(p), Format::Json) => std::fs::write(p, json)?,
        (Some(p), Format::Latex) => std::fs::write(p, tex)?,
        (Some(p), Format::Both) => {
            std::fs::write(p.with_extension("json"), json)?;
            std::fs::write(p.with_extension("tex"), tex)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rep = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&rep, cli.format, &cli.out) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for c in rep.failures() {
        eprintln!("FAIL {}: {}", c.name, c.witness.as_deref().unwrap_or(""));
    }
    if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
