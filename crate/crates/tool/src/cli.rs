//! The `km` command line.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use km_core::algebra::{refutes, BoxIdentity, DEFAULT_SEARCH_LIMIT};
use km_core::builder::{
    km_certificate, lemma26, lemma27, pull_back_substitutions, purify, replacement_derivation, ProofBuilder,
};
use km_core::calculus::verify;
use km_core::eliminate::{eliminate_step, extract_assertoric_traced};
use km_core::formula::{maximal_subformulas, parse};
use km_core::{AxiomId, CalculusMode, Derivation, Formula, OccurrenceSet};

use crate::format::{
    header_value, parse_algebra, parse_derivation, print_algebra, print_derivation, print_trace, trace_summary,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "km",
    version,
    about = "Derivations in Int, Int-box, KM and mHC; modality elimination; finite algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify a derivation file.
    Check {
        file: PathBuf,
        /// int, intbox, km or mhc; defaults to the file's `# mode:` header, then km.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Eliminate substitution steps.
    Refine {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turn a premise-free Int-box derivation into a pure one.
    Purify {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the maximal box subformulas of a derivation file or a formula.
    Maximal { input: String },
    /// Print the rank of a refined derivation.
    Rank { file: PathBuf },
    /// Eliminate one maximal box subformula from a refined KM derivation.
    Eliminate {
        file: PathBuf,
        #[arg(value_name = "BOX")]
        box_formula: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Extract an Int derivation from a KM derivation with box-free premises and conclusion.
    Extract {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit a derivation schema: lemma26 A B | lemma27 B A1 .. An |
    /// replacement A B C [PATH ..] | certificate AXIOM | identity A.
    Schema {
        name: String,
        args: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an algebra file and classify its box table.
    AlgebraCheck { file: PathBuf },
    /// Find all box tables satisfying the given identities (comma separated, e.g. i,ii,iii,iv).
    AlgebraSearch {
        file: PathBuf,
        identities: String,
        #[arg(long, default_value_t = DEFAULT_SEARCH_LIMIT)]
        limit: u64,
    },
    /// Search upset algebras for a KM-algebra validating the premises but not the goal.
    Refute {
        goal: String,
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
}

/// Process outcome: 0 success, 1 verification failure or countermodel, 2 usage or format error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Failure = 1,
    Usage = 2,
}

struct Fail(Status, String);

type Outcome = Result<Status, Fail>;

fn usage(msg: impl Into<String>) -> Fail {
    Fail(Status::Usage, msg.into())
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(String, Derivation), Fail> {
    let text = read(path)?;
    let d = parse_derivation(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((text, d))
}

fn formula_arg(s: &str) -> Result<Formula, Fail> {
    parse(s).map_err(|e| usage(format!("{s:?}: {} at column {}", e.message, e.position + 1)))
}

fn mode_arg(name: &str) -> Result<CalculusMode, Fail> {
    CalculusMode::by_name(name).ok_or_else(|| usage(format!("unknown mode {name:?} (int, intbox, km, mhc)")))
}

fn io_fail(e: io::Error) -> Fail {
    if e.kind() == io::ErrorKind::BrokenPipe {
        return Fail(Status::Success, String::new());
    }
    Fail(Status::Usage, e.to_string())
}

fn header(mode: &str, extra: &[String]) -> Vec<String> {
    let mut h = vec![format!("km-tool {VERSION}"), format!("mode: {mode}")];
    h.extend(extra.iter().cloned());
    h
}

/// Writes `text` to `output`, or to `out` when there is no output path.
fn emit(out: &mut dyn Write, output: Option<&Path>, text: &str) -> Result<(), Fail> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(io_fail),
    }
}

fn require_valid(d: &Derivation, mode: &CalculusMode, out: &mut dyn Write) -> Result<(), Fail> {
    let r = verify(d, mode);
    if r.ok {
        return Ok(());
    }
    for f in &r.failures {
        let _ = match f.step {
            Some(i) => writeln!(out, "step {}: {}", i + 1, f.reason),
            None => writeln!(out, "{}", f.reason),
        };
    }
    Err(Fail(
        Status::Failure,
        format!("derivation is not valid in mode {}", mode.name),
    ))
}

fn identities_arg(s: &str) -> Result<std::collections::BTreeSet<BoxIdentity>, Fail> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty() && *x != "none")
        .map(|x| BoxIdentity::from_name(x).ok_or_else(|| usage(format!("unknown identity {x:?} (i, ii, iii, iv)"))))
        .collect()
}

fn names<'a>(set: impl IntoIterator<Item = &'a BoxIdentity>) -> String {
    let v: Vec<&str> = set.into_iter().map(|i| i.name()).collect();
    if v.is_empty() {
        "none".to_string()
    } else {
        v.join(",")
    }
}

/// The occurrences in `occ` that lie inside no box of `host`.
fn outside_boxes(host: &Formula, occ: &OccurrenceSet) -> OccurrenceSet {
    OccurrenceSet::from_paths(
        occ.positions
            .iter()
            .filter(|p| (0..p.len()).all(|k| host.at(&p[..k]).is_some_and(|f| !f.is_box())))
            .cloned(),
    )
}

fn path_arg(p: &str) -> Result<Vec<u8>, Fail> {
    if p == "-" {
        return Ok(Vec::new());
    }
    p.chars()
        .map(|ch| match ch {
            '0' => Some(0),
            '1' => Some(1),
            _ => None,
        })
        .collect::<Option<Vec<u8>>>()
        .ok_or_else(|| {
            usage(format!(
                "path {p:?} must be a string of 0s and 1s, or \"-\" for the root"
            ))
        })
}

const SCHEMAS: &str = "lemma26 A B | lemma27 B A1 .. An | replacement A B C [PATH ..] | certificate AXIOM | identity A";

fn schema(name: &str, args: &[String]) -> Result<(Derivation, &'static str), Fail> {
    let formula_count = match name {
        "certificate" => 0,
        "replacement" => args.len().min(3),
        _ => args.len(),
    };
    let fs: Vec<Formula> = args[..formula_count]
        .iter()
        .map(|a| formula_arg(a))
        .collect::<Result<_, _>>()?;
    let mode = if fs.iter().all(Formula::is_assertoric) {
        "int"
    } else {
        "intbox"
    };
    let build = |e: km_core::builder::BuildError| usage(e.to_string());
    let d = match (name, fs.as_slice()) {
        ("lemma26", [a, b]) => lemma26(a, b),
        ("lemma27", [b, as_ @ ..]) if !as_.is_empty() => lemma27(as_, b).map_err(build)?,
        ("identity", [a]) => {
            let mut pb = ProofBuilder::new();
            let c = pb.identity(a).map_err(build)?;
            pb.finish(c).map_err(build)?
        }
        ("replacement", [a, b, c]) => {
            let occ = if args.len() > 3 {
                OccurrenceSet::from_paths(args[3..].iter().map(|p| path_arg(p)).collect::<Result<Vec<_>, _>>()?)
            } else {
                outside_boxes(c, &c.occurrences(a))
            };
            replacement_derivation(a, b, c, &occ).map_err(build)?
        }
        ("certificate", []) => {
            let [id] = args else {
                return Err(usage("certificate takes one axiom name"));
            };
            let id = AxiomId::from_name(id).ok_or_else(|| usage(format!("unknown axiom {id:?}")))?;
            return Ok((km_certificate(id).ok_or_else(|| usage("no certificate"))?, "km"));
        }
        _ => return Err(usage(format!("unknown schema or wrong arguments: {name} ({SCHEMAS})"))),
    };
    Ok((d, mode))
}

fn run_command(cmd: &Command, out: &mut dyn Write) -> Outcome {
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io_fail);
    match cmd {
        Command::Check { file, mode } => {
            let (text, d) = load(file)?;
            let mode = mode_arg(mode.as_deref().or_else(|| header_value(&text, "mode")).unwrap_or("km"))?;
            let r = verify(&d, &mode);
            let refined = if r.refined { "refined" } else { "unrefined" };
            if r.ok {
                if r.refined {
                    w(out, format!("ok {refined} rank={}", r.rank))?;
                    w(out, format!("pure: {}", if r.pure { "yes" } else { "no" }))?;
                } else {
                    w(out, format!("ok {refined}"))?;
                }
                Ok(Status::Success)
            } else {
                w(out, format!("fail {refined} mode={}", mode.name))?;
                for f in &r.failures {
                    match f.step {
                        Some(i) => w(out, format!("step {}: {}", i + 1, f.reason))?,
                        None => w(out, f.reason.to_string())?,
                    }
                }
                Ok(Status::Failure)
            }
        }
        Command::Refine { file, output } => {
            let (text, d) = load(file)?;
            let r = pull_back_substitutions(&d).map_err(|e| Fail(Status::Failure, e.to_string()))?;
            let mode = header_value(&text, "mode").unwrap_or("km");
            emit(
                out,
                output.as_deref(),
                &print_derivation(&r, &header(mode, &["refined".into()])),
            )?;
            Ok(Status::Success)
        }
        Command::Purify { file, output } => {
            let (_, d) = load(file)?;
            let r = purify(&d).map_err(|e| Fail(Status::Failure, e.to_string()))?;
            emit(
                out,
                output.as_deref(),
                &print_derivation(&r, &header("intbox", &["purified".into()])),
            )?;
            Ok(Status::Success)
        }
        Command::Maximal { input } => {
            let path = Path::new(input);
            let m = if path.is_file() {
                load(path)?.1.maximal_subformulas()
            } else {
                maximal_subformulas([&formula_arg(input)?])
            };
            for b in &m {
                w(out, b.to_string())?;
            }
            Ok(Status::Success)
        }
        Command::Rank { file } => {
            let (_, d) = load(file)?;
            let r = d.rank().map_err(|e| Fail(Status::Failure, e.to_string()))?;
            w(out, r.to_string())?;
            Ok(Status::Success)
        }
        Command::Eliminate {
            file,
            box_formula,
            output,
        } => {
            let (_, d) = load(file)?;
            let bg = formula_arg(box_formula)?;
            require_valid(&d, &CalculusMode::km(), out)?;
            let (r, trace) = eliminate_step(&d, &bg).map_err(|e| Fail(Status::Failure, e.to_string()))?;
            out.write_all(print_trace(&trace).as_bytes()).map_err(io_fail)?;
            let text = print_derivation(&r, &header("km", &[trace_summary(&trace)]));
            match output {
                Some(_) => emit(out, output.as_deref(), &text)?,
                None => {
                    w(out, String::new())?;
                    emit(out, None, &text)?;
                }
            }
            Ok(Status::Success)
        }
        Command::Extract { file, output } => {
            let (_, d) = load(file)?;
            require_valid(&d, &CalculusMode::km(), out)?;
            let (r, traces) = extract_assertoric_traced(&d).map_err(|e| Fail(Status::Failure, e.to_string()))?;
            let summaries: Vec<String> = traces.iter().map(trace_summary).collect();
            for s in &summaries {
                w(out, s.clone())?;
            }
            w(out, format!("eliminations: {}", traces.len()))?;
            emit(
                out,
                output.as_deref(),
                &print_derivation(&r, &header("int", &summaries)),
            )?;
            Ok(Status::Success)
        }
        Command::Schema { name, args, output } => {
            let (d, mode) = schema(name, args)?;
            let extra = vec![format!("schema: {name} {}", args.join(" ")).trim_end().to_string()];
            emit(out, output.as_deref(), &print_derivation(&d, &header(mode, &extra)))?;
            Ok(Status::Success)
        }
        Command::AlgebraCheck { file } => {
            let a = parse_algebra(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            w(out, format!("heyting algebra of size {}", a.algebra.size()))?;
            if let Some(b) = &a.box_table {
                let ids = a.algebra.box_identities(b).map_err(|e| usage(e.to_string()))?;
                w(out, format!("box identities: {}", names(&ids)))?;
                let kind = if ids == BoxIdentity::km() {
                    "km-algebra"
                } else if BoxIdentity::mhc().is_subset(&ids) {
                    "mhc-algebra"
                } else {
                    "neither"
                };
                w(out, format!("class: {kind}"))?;
            }
            Ok(Status::Success)
        }
        Command::AlgebraSearch {
            file,
            identities,
            limit,
        } => {
            let a = parse_algebra(&read(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let req = identities_arg(identities)?;
            let tables = a
                .algebra
                .search_boxes(&req, *limit)
                .map_err(|e| Fail(Status::Failure, e.to_string()))?;
            w(
                out,
                format!("found {} table(s) satisfying {}", tables.len(), names(&req)),
            )?;
            for t in &tables {
                let cells: Vec<String> = t.0.iter().map(usize::to_string).collect();
                w(out, format!("box: {}", cells.join(" ")))?;
            }
            Ok(if tables.is_empty() {
                Status::Failure
            } else {
                Status::Success
            })
        }
        Command::Refute {
            goal,
            premises,
            max_size,
        } => {
            let g = formula_arg(goal)?;
            let ps: Vec<Formula> = premises.iter().map(|p| formula_arg(p)).collect::<Result<_, _>>()?;
            match refutes(&ps, &g, *max_size).map_err(|e| Fail(Status::Failure, e.to_string()))? {
                None => {
                    w(
                        out,
                        format!("no countermodel among posets of at most {max_size} points"),
                    )?;
                    Ok(Status::Success)
                }
                Some(r) => {
                    w(out, format!("countermodel of size {}", r.algebra.size()))?;
                    out.write_all(print_algebra(&r.algebra, r.box_table.as_ref()).as_bytes())
                        .map_err(io_fail)?;
                    let vals: Vec<String> = r.valuation.iter().map(|(k, v)| format!("p{k}={v}")).collect();
                    w(out, format!("valuation: {}", vals.join(" ")))?;
                    let value = r
                        .algebra
                        .evaluate(&g, r.box_table.as_ref(), &r.valuation)
                        .expect("evaluated before");
                    w(out, format!("value: {value} (top is {})", r.algebra.top()))?;
                    Ok(Status::Failure)
                }
            }
        }
    }
}

/// Runs a parsed command; messages for failures go to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Status {
    match run_command(&cli.command, out) {
        Ok(s) => s,
        Err(Fail(s, msg)) => {
            if !msg.is_empty() {
                let _ = writeln!(err, "km: {msg}");
            }
            s
        }
    }
}
