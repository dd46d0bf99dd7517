//! The `laxmat` command line.

mod check;
mod workspace;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

pub use check::{run_given, run_randomized, CheckOutput, Limits, PROPERTIES};
pub use workspace::{BlockMatrixDoc, Caps, CliError, MatrixDoc, Workspace, EXIT_CAP, EXIT_INVALID, EXIT_PROPERTY};

use crate::collage::{collage_of_profunctor, grothendieck};
use crate::k0chain::snf::smith_normal_form;
use crate::k0chain::star::star_multiply;
use crate::k0chain::{cone, cone_is_acyclic, hom_complex, homology, homology_all, is_quasi_iso, tot, JsonInt};
use crate::profunctor::compose_profunctors;

#[derive(Parser, Debug)]
#[command(name = "laxmat", version, about = "Profunctors, collages and chain complexes over finite data")]
pub struct Cli {
    /// Directory holding `<name>.<kind>.json` files.
    #[arg(long, global = true, default_value = ".")]
    workspace: PathBuf,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Run a check on this many seeded random instances.
    #[arg(long, global = true)]
    randomized: Option<usize>,
    #[arg(long, global = true, default_value_t = 6)]
    max_objects: usize,
    #[arg(long, global = true, default_value_t = 8)]
    max_elements: usize,
    #[arg(long, global = true, default_value_t = 32)]
    max_rank: usize,
    #[arg(long, global = true, default_value_t = 16)]
    max_degrees: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coend composite `N ∘ M` of two profunctors.
    Compose { n: String, m: String },
    /// Collage of a profunctor.
    Collage { p: String },
    /// Grothendieck construction of a diagram.
    Grothendieck { diagram: String },
    /// Signed block product `N ⋆ M` of two block matrices.
    Blockmul { n: String, m: String },
    /// Mapping cone of a chain map.
    Cone { f: String },
    /// Complex of graded maps between two complexes.
    HomComplex { a: String, b: String },
    /// Total complex of a bicomplex.
    Tot { x: String },
    /// Integral homology of a complex.
    Homology {
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<i64>,
    },
    /// Whether a chain map induces isomorphisms on homology.
    QuasiIso { f: String },
    /// Smith normal form of an integer matrix.
    Snf { m: String },
    /// Run a named check on given instances or with `--randomized`.
    Check { property: String, args: Vec<String> },
}

impl Cli {
    fn caps(&self) -> Caps {
        Caps { max_objects: self.max_objects, max_elements: self.max_elements, max_rank: self.max_rank, max_degrees: self.max_degrees }
    }

    fn workspace(&self) -> Result<Workspace, CliError> {
        Workspace::open(&self.workspace, self.caps())
    }
}

fn emit(out: &Option<PathBuf>, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    let io = |e: std::io::Error| CliError::invalid("Unwritable", e.to_string());
    match out {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io),
    }
}

fn degree_keyed<T: Clone>(map: &BTreeMap<i64, T>) -> BTreeMap<String, T> {
    map.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    if cli.randomized.is_some() && !matches!(cli.command, Command::Check { .. }) {
        return Err(CliError::invalid("Usage", "--randomized only applies to `check`"));
    }
    match &cli.command {
        Command::Check { property, args } => {
            let report = match (cli.randomized, args.is_empty()) {
                (Some(n), true) => {
                    let limits = Limits { objects: cli.max_objects, elements: cli.max_elements, rank: cli.max_rank };
                    run_randomized(property, n, cli.seed, limits)?
                }
                (None, false) => run_given(property, &cli.workspace()?, args)?,
                (Some(_), false) => return Err(CliError::invalid("Usage", "give either instance names or --randomized, not both")),
                (None, true) => return Err(CliError::invalid("Usage", "give instance names or --randomized <n>")),
            };
            emit(&cli.out, &report)?;
            Ok(if report.passed() { 0 } else { EXIT_PROPERTY })
        }
        command => {
            let ws = cli.workspace()?;
            match command {
                Command::Compose { n, m } => {
                    let p = compose_profunctors(ws.profunctor(n)?, ws.profunctor(m)?).map_err(|e| CliError::from_error("compose", e))?;
                    emit(&cli.out, &p.to_doc(true))?;
                }
                Command::Collage { p } => emit(&cli.out, &collage_of_profunctor(ws.profunctor(p)?).to_doc())?,
                Command::Grothendieck { diagram } => emit(&cli.out, &grothendieck(ws.diagram(diagram)?).to_doc())?,
                Command::Blockmul { n, m } => {
                    let p = star_multiply(ws.block_matrix(n)?, ws.block_matrix(m)?).map_err(|e| CliError::from_error("blockmul", e))?;
                    emit(&cli.out, &BlockMatrixDoc::of(&p))?;
                }
                Command::Cone { f } => emit(&cli.out, &cone(ws.chain_map(f)?).complex.to_doc())?,
                Command::HomComplex { a, b } => {
                    let (a, b) = (ws.complex(a)?, ws.complex(b)?);
                    // the hom complex can be far larger than its inputs
                    let h = hom_complex(a, b);
                    ws.caps.complex("hom complex", h.complex())?;
                    emit(&cli.out, &h.complex().to_doc())?;
                }
                Command::Tot { x } => emit(&cli.out, &tot(ws.bicomplex(x)?).to_doc())?,
                Command::Homology { c, degree } => {
                    let c = ws.complex(c)?;
                    let groups = match degree {
                        Some(n) => BTreeMap::from([(*n, homology(c, *n))]),
                        None => homology_all(c),
                    };
                    emit(&cli.out, &degree_keyed(&groups))?;
                }
                Command::QuasiIso { f } => {
                    let f = ws.chain_map(f)?;
                    emit(&cli.out, &json!({ "quasi_iso": is_quasi_iso(f), "cone_acyclic": cone_is_acyclic(f) }))?;
                }
                Command::Snf { m } => {
                    let snf = smith_normal_form(ws.matrix(m)?);
                    let factors: Vec<JsonInt> = snf.invariant_factors().iter().map(JsonInt::from).collect();
                    emit(
                        &cli.out,
                        &json!({
                            "rank": snf.rank(),
                            "invariant_factors": factors,
                            "s": MatrixDoc::of(&snf.s),
                            "u": MatrixDoc::of(&snf.u),
                            "v": MatrixDoc::of(&snf.v),
                        }),
                    )?;
                }
                Command::Check { .. } => unreachable!("handled above"),
            }
            Ok(0)
        }
    }
}

/// Runs the command line and returns the process exit code. Failures print
/// a JSON diagnostic on standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID as i32 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code as i32,
        Err(e) => {
            eprintln!("{}", json!({ "error": e }));
            e.code as i32
        }
    }
}

