//! `mixlay`: generate, solve, verify, audit and certify mixed linear layouts.
//!
//! Exit codes: 0 for the affirmative answer of each subcommand (sat, valid,
//! certified, no violations), 1 for the negative one, 2 when a search budget
//! ran out, 64 for usage errors, 65 for malformed input files, 66 for
//! unreadable inputs and 74 for unwritable outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mixlay_core::audit::{audit_all, AuditOptions, LemmaId};
use mixlay_core::cnf;
use mixlay_core::format::{parse_graph, parse_layout, recognize_gkl, write_layout, write_two_tree};
use mixlay_core::layout::validate;
use mixlay_core::search::{
    certify_claim, certify_gadget, enumerate_all, hunt, solve, ClaimCase, EnumerateOptions, Gadget, HuntRange,
    SolveOptions, SolveStatus, Verdict,
};
use mixlay_core::{build_gkl, gkl_size, GklParams, LinearLayout, PageSpec};

#[derive(Parser, Debug)]
#[command(name = "mixlay", version, about = "Mixed stack/queue linear layouts of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph file.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Decide whether a graph has a layout with the given pages.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        pages: PagesArgs,
        /// Node budget for the search.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        /// Single-threaded search with fixed branching order.
        #[arg(long, conflicts_with = "threads")]
        deterministic: bool,
        /// Worker threads splitting the first branching step.
        #[arg(long)]
        threads: Option<usize>,
        /// Write the certificate here instead of standard output.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Check a layout certificate against a graph.
    Verify {
        file: PathBuf,
        cert: PathBuf,
        #[command(flatten)]
        pages: PagesArgs,
    },
    /// Enumerate every valid layout by brute force (small graphs only).
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        pages: PagesArgs,
        /// List a layout and its reversal separately.
        #[arg(long)]
        all: bool,
        /// Print only the number of layouts.
        #[arg(long)]
        count_only: bool,
        /// Refuse graphs with more vertices than this.
        #[arg(long, default_value_t = 7)]
        vertex_cap: usize,
    },
    /// Audit a 1-stack 1-queue layout of a G(k,l) graph.
    Audit {
        file: PathBuf,
        cert: PathBuf,
        /// Comma-separated subset of 1,2,3,4,cor1,5.
        #[arg(long, value_delimiter = ',', required = true)]
        lemmas: Vec<LemmaId>,
        /// Run the checks even if the layout has conflicts.
        #[arg(long)]
        assume_valid: bool,
    },
    /// Exhaust all placements of a built-in scaffold.
    Gadget {
        /// smiley, p1, p1a, p2, l4c1..l4c4 or t1c1..t1c6.
        #[arg(long)]
        case: String,
        /// Number of free attachments (smiley/p1/p1a/p2 only).
        #[arg(long)]
        ell: Option<usize>,
        /// Print the totals and histogram without the per-placement lines.
        #[arg(long)]
        summary: bool,
    },
    /// Write the DIMACS encoding of layout existence.
    ExportCnf {
        file: PathBuf,
        #[command(flatten)]
        pages: PagesArgs,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Decode a SAT model of the exported encoding into a certificate.
    ImportModel {
        file: PathBuf,
        model: PathBuf,
        #[command(flatten)]
        pages: PagesArgs,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Print vertex and edge counts without building the graph.
    Size {
        #[command(subcommand)]
        family: SizeFamily,
    },
    /// Run the solver over a range of G(k,l).
    Hunt {
        /// Range `A..B` (inclusive) or a single value.
        #[arg(long)]
        k: String,
        #[arg(long)]
        ell: String,
        #[command(flatten)]
        pages: PagesArgs,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
        /// Skip instances with more vertices than this.
        #[arg(long, default_value_t = 2_000)]
        max_vertices: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GenFamily {
    /// The 2-tree G(k,l).
    Gkl {
        #[command(flatten)]
        params: GklArgs,
        /// Refuse to build graphs with more vertices than this.
        #[arg(long, default_value_t = 5_000_000)]
        vertex_cap: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SizeFamily {
    Gkl {
        #[command(flatten)]
        params: GklArgs,
    },
}

#[derive(Args, Debug)]
struct GklArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    ell: u32,
}

impl GklArgs {
    fn params(&self) -> Result<GklParams, Failure> {
        GklParams::new(self.k, self.ell).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Args, Debug)]
struct PagesArgs {
    #[arg(long, default_value_t = 0)]
    stacks: u32,
    #[arg(long, default_value_t = 0)]
    queues: u32,
}

impl PagesArgs {
    fn spec(&self) -> Result<PageSpec, Failure> {
        PageSpec::new(self.stacks, self.queues)
            .map_err(|_| Failure::Usage("need at least one page: --stacks S --queues Q".into()))
    }
}

enum Failure {
    Usage(String),
    Format(String),
    Input(String),
    Output(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Format(_) => 65,
            Failure::Input(_) => 66,
            Failure::Output(_) => 74,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Format(m) | Failure::Input(m) | Failure::Output(m) => m,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<mixlay_core::format::GraphFile, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Format(format!("{}: {e}", path.display())))
}

fn read_layout(path: &Path) -> Result<LinearLayout, Failure> {
    parse_layout(&read(path)?).map_err(|e| Failure::Format(format!("{}: {e}", path.display())))
}

/// Writes to `output`, or to standard output when absent.
fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Output(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<u32>, Failure> {
    let bad = || Failure::Usage(format!("bad range `{s}` (expected A..B or N)"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a == 0 || a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let n: u32 = s.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            Ok(n..=n)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Gen {
            family:
                GenFamily::Gkl {
                    params,
                    vertex_cap,
                    output,
                },
        } => {
            let tree = build_gkl(params.params()?, Some(vertex_cap)).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(output.as_deref(), &write_two_tree(&tree))?;
            Ok(0)
        }
        Command::Size {
            family: SizeFamily::Gkl { params },
        } => {
            let (v, e) = gkl_size(params.params()?).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("V={v} E={e}");
            Ok(0)
        }
        Command::Solve {
            file,
            pages,
            budget,
            deterministic,
            threads,
            output,
        } => {
            let spec = pages.spec()?;
            let graph = read_graph(&file)?.graph;
            let threads = threads.unwrap_or(1);
            if threads == 0 {
                return Err(Failure::Usage("--threads must be at least 1".into()));
            }
            let opts = SolveOptions {
                budget,
                deterministic: deterministic || threads == 1,
                threads,
            };
            let r = solve(&graph, spec, opts);
            eprintln!("nodes={} time={:.3}s", r.stats.nodes, r.stats.time.as_secs_f64());
            println!("{}", r.status.name());
            match r.status {
                SolveStatus::Sat(layout) => {
                    emit(output.as_deref(), &write_layout(&layout))?;
                    Ok(0)
                }
                SolveStatus::Unsat => Ok(1),
                SolveStatus::BudgetExceeded => Ok(2),
            }
        }
        Command::Verify { file, cert, pages } => {
            let spec = pages.spec()?;
            let graph = read_graph(&file)?.graph;
            let layout = read_layout(&cert)?;
            match validate(&graph, &layout, spec) {
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(1)
                }
                Ok(report) if report.is_valid() => {
                    println!("valid");
                    Ok(0)
                }
                Ok(report) => {
                    for c in &report.conflicts {
                        println!("{c}");
                    }
                    println!("invalid: {} conflicting pairs", report.conflicts.len());
                    Ok(1)
                }
            }
        }
        Command::Oracle {
            file,
            pages,
            all,
            count_only,
            vertex_cap,
        } => {
            let spec = pages.spec()?;
            let graph = read_graph(&file)?.graph;
            let opts = EnumerateOptions {
                vertex_cap,
                modulo_reversal: !all,
            };
            let stream = enumerate_all(&graph, spec, opts).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut count = 0u64;
            for layout in stream {
                if !count_only {
                    if count > 0 {
                        println!();
                    }
                    print!("{}", write_layout(&layout));
                }
                count += 1;
            }
            println!("count {count}");
            Ok(if count > 0 { 0 } else { 1 })
        }
        Command::Audit {
            file,
            cert,
            lemmas,
            assume_valid,
        } => {
            let parsed = read_graph(&file)?;
            let tree = recognize_gkl(&parsed).map_err(|e| Failure::Format(format!("{}: {e}", file.display())))?;
            let layout = read_layout(&cert)?;
            let opts = AuditOptions {
                assume_valid,
                ..Default::default()
            };
            let reports = audit_all(&tree, &layout, &lemmas, opts).map_err(|e| Failure::Format(e.to_string()))?;
            let mut ok = true;
            for r in &reports {
                print!("{}", r.to_text());
                if let Some(note) = &r.note {
                    eprintln!("lemma {}: {note}", r.lemma);
                }
                ok &= r.passed();
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Gadget { case, ell, summary } => {
            let report = gadget_report(&case, ell)?;
            print!("{}", report.to_text(summary));
            Ok(match report.verdict {
                Verdict::Certified => 0,
                Verdict::Refutable => 1,
            })
        }
        Command::ExportCnf { file, pages, output } => {
            let spec = pages.spec()?;
            let graph = read_graph(&file)?.graph;
            emit(output.as_deref(), &cnf::encode(&graph, spec).to_dimacs())?;
            Ok(0)
        }
        Command::ImportModel {
            file,
            model,
            pages,
            output,
        } => {
            let spec = pages.spec()?;
            let graph = read_graph(&file)?.graph;
            let vars = cnf::encode(&graph, spec).variable_count();
            let model = cnf::parse_model(&read(&model)?, vars)
                .map_err(|e| Failure::Format(format!("{}: {e}", model.display())))?;
            match cnf::decode(&graph, spec, &model) {
                Ok(layout) => {
                    emit(output.as_deref(), &write_layout(&layout))?;
                    Ok(0)
                }
                Err(e) => {
                    println!("invalid model: {e}");
                    Ok(1)
                }
            }
        }
        Command::Hunt {
            k,
            ell,
            pages,
            budget,
            max_vertices,
            threads,
        } => {
            let spec = pages.spec()?;
            let range = HuntRange {
                k: parse_range(&k)?,
                ell: parse_range(&ell)?,
                max_vertices,
            };
            let opts = SolveOptions {
                budget,
                deterministic: threads <= 1,
                threads: threads.max(1),
            };
            let lines = hunt(&range, spec, opts).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut code = 0;
            for l in &lines {
                println!("{l}");
                code = match l.status {
                    Some(SolveStatus::BudgetExceeded) => 2,
                    Some(SolveStatus::Unsat) if code == 0 => 1,
                    _ => code,
                };
            }
            Ok(code)
        }
    }
}

fn gadget_report(case: &str, ell: Option<usize>) -> Result<mixlay_core::search::StepReport, Failure> {
    let gadget = match case {
        "smiley" => Some(Gadget::Smiley),
        "p1" => Some(Gadget::P1),
        "p1a" => Some(Gadget::P1a),
        "p2" => Some(Gadget::P2),
        _ => None,
    };
    let certify_err = |e: mixlay_core::search::CertifyError| Failure::Usage(e.to_string());
    match gadget {
        Some(g) => certify_gadget(g, ell.unwrap_or(g.default_attachments())).map_err(certify_err),
        None => {
            let claim: ClaimCase = case.parse().map_err(Failure::Usage)?;
            if ell.is_some() {
                return Err(Failure::Usage(format!("--ell does not apply to case {claim}")));
            }
            certify_claim(claim).map_err(certify_err)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
