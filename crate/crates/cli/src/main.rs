use std::fs;
use std::io::{self, Read, Write};
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use posetcsp::classifier::{classify, ClassifyConfig, ClassifyError, PpBudget};
use posetcsp::gadgets::{builtin_catalog, verify_all, GadgetError};
use posetcsp::horn::{horn_solve, horn_synthesize, Dialect, HornError, HornTheory};
use posetcsp::poset::{enumerate_ktypes, MAX_ENUM_ARITY};
use posetcsp::solver::{
    brute_force, export_cnf, parse_instance, random_instance, solve, write_instance, InstanceFile, Profile,
    SolveResult, SolverError,
};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_INTERNAL: u8 = 2;
const EXIT_SYNTH_FAILED: u8 = 3;
const EXIT_GADGET_FAILED: u8 = 4;
const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;

/// Mismatching types listed per failing gadget.
const MISMATCH_LINES: usize = 10;

#[derive(Parser, Debug)]
#[command(name = "posetcsp", version, about = "Constraint satisfaction over the random partial order")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide an instance file ("-" reads standard input).
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Backtrack)]
        method: Method,
        /// Print a satisfying type after SAT.
        #[arg(long)]
        witness: bool,
    },
    /// Classify the constraint language of an instance file.
    Classify {
        file: PathBuf,
        /// Bound variables and atoms for definability searches, as V,A.
        #[arg(long, value_parser = parse_budget)]
        pp_budget: Option<(usize, usize)>,
    },
    /// Synthesize a Horn theory for one relation.
    SynthHorn {
        file: PathBuf,
        #[arg(long)]
        rel: String,
        #[arg(long, value_parser = parse_dialect)]
        dialect: Dialect,
    },
    /// Check the gadget suite.
    VerifyGadgets {
        #[arg(long)]
        name: Option<String>,
    },
    /// List the k-types.
    Types { k: usize },
    /// Write the DIMACS encoding of an instance.
    ExportCnf {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        seed: u64,
        /// Relation counts such as "Betw:3,<:2".
        #[arg(long)]
        profile: Profile,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Backtrack,
    Brute,
    Horn,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Horn(#[from] HornError),
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error("unknown relation '{0}'")]
    UnknownRelation(String),
    #[error("unknown gadget '{0}'")]
    UnknownGadget(String),
    #[error("k = {0} is above the enumeration limit {MAX_ENUM_ARITY}")]
    TooManyVariables(usize),
    #[error("no single Horn dialect covers every relation of the instance")]
    NotHorn,
}

fn parse_budget(s: &str) -> Result<(usize, usize), String> {
    let (v, a) = s.split_once(',').ok_or("expected V,A")?;
    let v = v.trim().parse().map_err(|_| format!("bad bound-variable count '{v}'"))?;
    let a = a.trim().parse().map_err(|_| format!("bad atom count '{a}'"))?;
    Ok((v, a))
}

fn parse_dialect(s: &str) -> Result<Dialect, String> {
    s.parse().map_err(|e: HornError| e.to_string())
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn load(path: &Path) -> Result<InstanceFile, CliError> {
    Ok(parse_instance(&read_input(path)?)?)
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Horn theories for every relation of the file, in the first dialect that
/// covers them all.
fn horn_theories(file: &InstanceFile) -> Result<Vec<HornTheory>, CliError> {
    let env = file.signature_env();
    for dialect in [Dialect::Leq, Dialect::Strict] {
        let theories: Result<Vec<_>, _> = env.tables().map(|t| horn_synthesize(t, dialect)).collect();
        if let Ok(ths) = theories {
            return Ok(ths);
        }
    }
    Err(CliError::NotHorn)
}

fn run(cli: Cli, out: &mut String) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve { file, method, witness } => {
            let file = load(&file)?;
            let result = match method {
                Method::Backtrack => solve(&file.instance),
                Method::Brute => brute_force(&file.instance)?,
                Method::Horn => horn_solve(&file.instance, &horn_theories(&file)?)?,
            };
            match result {
                SolveResult::Sat(w) => {
                    out.push_str("SAT\n");
                    if witness {
                        out.push_str(&w.to_string());
                    }
                    Ok(EXIT_SAT)
                }
                SolveResult::Unsat => {
                    out.push_str("UNSAT\n");
                    Ok(EXIT_UNSAT)
                }
            }
        }
        Command::Classify { file, pp_budget } => {
            let file = load(&file)?;
            let mut config = ClassifyConfig::default();
            if let Some((max_bound, max_atoms)) = pp_budget {
                config.pp_budget = PpBudget {
                    max_bound,
                    max_atoms,
                    ..config.pp_budget
                };
            }
            let verdict = classify(&file.signature_env(), &config)?;
            out.push_str(&verdict.report());
            Ok(EXIT_OK)
        }
        Command::SynthHorn { file, rel, dialect } => {
            let file = load(&file)?;
            let table = file
                .instance
                .env()
                .get(&rel)
                .ok_or_else(|| CliError::UnknownRelation(rel.clone()))?;
            match horn_synthesize(table, dialect) {
                Ok(th) => {
                    out.push_str(&th.to_rel_line());
                    out.push('\n');
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    out.push_str(&format!("NotHornExpressible: {e}\n"));
                    Ok(EXIT_SYNTH_FAILED)
                }
            }
        }
        Command::VerifyGadgets { name } => {
            let mut catalog = builtin_catalog();
            if let Some(name) = name {
                catalog.retain(|g| g.name == name);
                if catalog.is_empty() {
                    return Err(CliError::UnknownGadget(name));
                }
            }
            let summary = verify_all(&catalog)?;
            for r in &summary.reports {
                out.push_str(&format!("{r}\n"));
                let bad = r.verification.mismatches();
                for m in bad.iter().take(MISMATCH_LINES) {
                    out.push_str(&format!("  {m}\n"));
                }
                if bad.len() > MISMATCH_LINES {
                    out.push_str(&format!("  ... {} more\n", bad.len() - MISMATCH_LINES));
                }
            }
            out.push_str(&format!("{}/{} gadgets pass\n", summary.passed(), summary.total()));
            Ok(if summary.all_passed() { EXIT_OK } else { EXIT_GADGET_FAILED })
        }
        Command::Types { k } => {
            let types = enumerate_ktypes(k).map_err(|_| CliError::TooManyVariables(k))?;
            out.push_str(&format!("{} types\n", types.len()));
            for t in types {
                out.push_str(&format!("{t}\n"));
            }
            Ok(EXIT_OK)
        }
        Command::ExportCnf { file, output } => {
            let file = load(&file)?;
            let cnf = export_cnf(&file.instance)?;
            write_output(&output, &cnf.to_dimacs())?;
            out.push_str(&format!(
                "wrote {} variables, {} clauses to {}\n",
                cnf.var_count(),
                cnf.clauses().len(),
                output.display()
            ));
            Ok(EXIT_OK)
        }
        Command::Gen {
            vars,
            seed,
            profile,
            output,
        } => {
            let inst = random_instance(seed, vars, &profile);
            let count = inst.constraints().len();
            write_output(&output, &write_instance(&InstanceFile::from_instance(inst)))?;
            out.push_str(&format!(
                "wrote {vars} variables, {count} constraints to {}\n",
                output.display()
            ));
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let code = match panic::catch_unwind(panic::AssertUnwindSafe(|| run(cli, &mut out))) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
        Err(_) => {
            eprintln!("error: internal invariant violated");
            EXIT_INTERNAL
        }
    };
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(code)
}
