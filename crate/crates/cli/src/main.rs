use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use burnside_kei::links::{burnside_kei_of_link, coloring_invariant, kei_presentation, parse_pd, LinkDiagram};
use burnside_kei::opgroup::{export_as_presentation, table_presentation};
use burnside_kei::presentation::{complete, element_lengths, Budget, CompletionResult, Outcome};
use burnside_kei::quandle::{log3_exact, HomOptions, ReportMode};
use burnside_kei::{Error, FiniteQuandle, QuandlePresentation};
use clap::{Args, Parser, Subcommand};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "bkei", version, about = "Burnside keis: completion, checks, export and link colorings")]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Cap on live elements during completion.
    #[arg(long, default_value_t = Budget::default().max_elements)]
    max_elements: usize,
    /// Cap on completion steps.
    #[arg(long, default_value_t = Budget::default().max_steps)]
    max_steps: u64,
}

impl BudgetArgs {
    fn budget(self) -> Budget {
        Budget {
            max_elements: self.max_elements,
            max_steps: self.max_steps,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Complete a presentation (.kei) into a multiplication table.
    Build {
        presentation: PathBuf,
        /// Where to write the table.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Run validators on a table; one PASS/FAIL line per check.
    Check {
        table: PathBuf,
        /// Axioms of a kei.
        #[arg(long)]
        kei: bool,
        /// The universal relation with n letters.
        #[arg(long, value_name = "N")]
        burnside: Option<usize>,
        #[arg(long)]
        commutative: bool,
        /// Size is a power of 3.
        #[arg(long)]
        power_of_3: bool,
        /// Single component under right multiplication.
        #[arg(long)]
        connectivity: bool,
        /// No two elements act identically from the right.
        #[arg(long)]
        behavioral: bool,
    },
    /// Export a table or presentation as a Cayley diagram or group presentation.
    Export {
        input: PathBuf,
        #[arg(long, conflicts_with = "gap", required_unless_present = "gap")]
        dot: bool,
        #[arg(long)]
        gap: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Burnside kei or coloring count of a link diagram.
    Link {
        diagram: PathBuf,
        #[arg(long, value_name = "N", conflicts_with = "color", required_unless_present = "color")]
        burnside: Option<usize>,
        /// Count colorings by this table.
        #[arg(long, value_name = "TABLE")]
        color: Option<PathBuf>,
        /// With --color, also impose the relation with N letters and
        /// require the target to satisfy it.
        #[arg(long, value_name = "N", requires = "color")]
        require_burnside: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Search for an isomorphism between two tables.
    Isomorphic { first: PathBuf, second: PathBuf },
}

/// A failed run and its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Diverged => EXIT_DIVERGED,
            Error::TargetRejected(_) | Error::NotCommutative(_) | Error::InvalidCocycle(_) => EXIT_VALIDATION,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Run = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_table(path: &Path) -> Result<FiniteQuandle, Failure> {
    FiniteQuandle::from_table_text(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<QuandlePresentation, Failure> {
    QuandlePresentation::parse(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<LinkDiagram, Failure> {
    parse_pd(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn is_presentation(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "kei")
}

/// The table of a finished completion, or the divergence report.
fn finished(r: CompletionResult) -> Result<FiniteQuandle, Failure> {
    match r.outcome {
        Outcome::Finished(q) => Ok(q),
        Outcome::Diverged { budget, stats } => Err(Failure {
            code: EXIT_DIVERGED,
            message: format!(
                "diverged: {} live elements after {} steps (budget {} elements, {} steps)",
                stats.live, stats.steps, budget.max_elements, budget.max_steps
            ),
        }),
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn cmd_build(path: &Path, output: Option<&Path>, budget: Budget) -> Run {
    let p = load_presentation(path)?;
    let q = finished(complete(&p, budget)?)?;
    if let Some(out) = output {
        write_out(Some(out), &q.to_table_text())?;
    }
    println!("{}", plural(q.size(), "element"));
    for (len, count) in element_lengths(&q)? {
        println!("length {len}: {count}");
    }
    Ok(0)
}

struct CheckFlags {
    kei: bool,
    burnside: Option<usize>,
    commutative: bool,
    power_of_3: bool,
    connectivity: bool,
    behavioral: bool,
}

fn cmd_check(path: &Path, flags: CheckFlags) -> Run {
    let q = load_table(path)?;
    let name = |x: usize| q.name(x);
    let mut lines: Vec<(String, Option<String>)> = Vec::new();
    let any = flags.kei
        || flags.burnside.is_some()
        || flags.commutative
        || flags.power_of_3
        || flags.connectivity
        || flags.behavioral;
    if flags.kei || !any {
        let r = q.validate(ReportMode::FirstPerAxiom);
        let witness = r.violations.first().map(|v| {
            let w: Vec<String> = v.witness.iter().map(|&x| name(x)).collect();
            format!("axiom {} fails at ({})", v.axiom, w.join(", "))
        });
        lines.push(("kei".into(), witness));
    }
    if let Some(n) = flags.burnside {
        let w = q.universal_witness(n)?;
        lines.push((
            format!("burnside {n}"),
            w.map(|(a, b)| format!("relation with {n} letters fails at a = {}, b = {}", name(a), name(b))),
        ));
    }
    if flags.commutative {
        let w = q.commutativity_witness();
        lines.push((
            "commutative".into(),
            w.map(|(a, b)| {
                let (ab, ba) = (q.op(a, b), q.op(b, a));
                format!("{} * {} is element {ab} but {} * {} is element {ba}", name(a), name(b), name(b), name(a))
            }),
        ));
    }
    if flags.power_of_3 {
        let m = q.size();
        let (label, w) = match log3_exact(m) {
            Some(t) => (format!("power-of-3 ({m} = 3^{t})"), None),
            None => ("power-of-3".into(), Some(format!("{m} is not a power of 3"))),
        };
        lines.push((label, w));
    }
    if flags.connectivity {
        let c = q.components();
        let w = (c.len() > 1).then(|| format!("{} components of sizes {:?}", c.len(), c.block_sizes()));
        lines.push((format!("connectivity (diameter {})", q.diameter()), w));
    }
    if flags.behavioral {
        let classes = q.behavioral_classes();
        let w = classes.blocks.iter().find(|b| b.len() > 1).map(|b| {
            format!(
                "{} and {} act identically ({} classes)",
                name(b[0]),
                name(b[1]),
                classes.len()
            )
        });
        lines.push(("behavioral".into(), w));
    }
    let mut failed = false;
    for (label, witness) in lines {
        match witness {
            None => println!("PASS {label}"),
            Some(w) => {
                failed = true;
                println!("FAIL {label}: {w}");
            }
        }
    }
    Ok(if failed { EXIT_VALIDATION } else { 0 })
}

fn dot(q: &FiniteQuandle) -> String {
    const STYLES: [&str; 3] = ["solid", "dashed", "dotted"];
    let gens = q.generating_set();
    let mut out = String::new();
    let m = q.size();
    writeln!(out, "digraph cayley {{").unwrap();
    let legend: Vec<String> = gens
        .iter()
        .enumerate()
        .map(|(i, &g)| format!("{} {}", q.name(g), STYLES[i % 3]))
        .collect();
    writeln!(out, "  // {} vertices; {}", m, legend.join(", ")).unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for x in 0..m {
        writeln!(out, "  {x} [label=\"{}\"];", q.name(x)).unwrap();
    }
    for x in 0..m {
        for (i, &g) in gens.iter().enumerate() {
            let width = if i >= STYLES.len() { ", penwidth=2" } else { "" };
            writeln!(
                out,
                "  {x} -> {} [style={}, label=\"{}\"{width}];",
                q.op(x, g),
                STYLES[i % 3],
                q.name(g)
            )
            .unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

fn cmd_export(path: &Path, gap: bool, output: Option<&Path>, budget: Budget) -> Run {
    let text = if is_presentation(path) {
        let p = load_presentation(path)?;
        if gap {
            export_as_presentation(&p).to_gap()
        } else {
            dot(&finished(complete(&p, budget)?)?)
        }
    } else {
        let q = load_table(path)?;
        if gap {
            export_as_presentation(&table_presentation(&q)?).to_gap()
        } else {
            dot(&q)
        }
    };
    write_out(output, &text)?;
    Ok(0)
}

fn cmd_link(
    path: &Path,
    burnside: Option<usize>,
    color: Option<&Path>,
    require: Option<usize>,
    budget: Budget,
) -> Run {
    let d = load_diagram(path)?;
    match (burnside, color) {
        (Some(n), _) => {
            let q = finished(burnside_kei_of_link(&d, n, budget)?)?;
            println!("{}", plural(q.size(), "element"));
        }
        (None, Some(table)) => {
            let t = load_table(table)?;
            let count = match require {
                None => coloring_invariant(&d, &t)?,
                Some(n) => {
                    if !t.is_kei() {
                        return Err(Error::TargetRejected("coloring target is not a kei".into()).into());
                    }
                    let opts = HomOptions {
                        require_universal: true,
                        collect: false,
                    };
                    t.hom_count(&kei_presentation(&d, Some(n)), opts)?.count
                }
            };
            println!("{count}");
        }
        (None, None) => return Err(Failure::usage("one of --burnside or --color is required")),
    }
    Ok(0)
}

fn cmd_isomorphic(first: &Path, second: &Path) -> Run {
    let (a, b) = (load_table(first)?, load_table(second)?);
    match a.is_isomorphic(&b) {
        Some(phi) => {
            println!("ISOMORPHIC");
            for (x, y) in phi.iter().enumerate() {
                println!("{} -> {}", a.name(x), b.name(*y));
            }
            Ok(0)
        }
        None => {
            println!("NOT ISOMORPHIC");
            Ok(EXIT_VALIDATION)
        }
    }
}

fn run(cli: Cli) -> Run {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    match cli.command {
        Command::Build {
            presentation,
            output,
            budget,
        } => cmd_build(&presentation, output.as_deref(), budget.budget()),
        Command::Check {
            table,
            kei,
            burnside,
            commutative,
            power_of_3,
            connectivity,
            behavioral,
        } => cmd_check(
            &table,
            CheckFlags {
                kei,
                burnside,
                commutative,
                power_of_3,
                connectivity,
                behavioral,
            },
        ),
        Command::Export {
            input,
            gap,
            output,
            budget,
            ..
        } => cmd_export(&input, gap, output.as_deref(), budget.budget()),
        Command::Link {
            diagram,
            burnside,
            color,
            require_burnside,
            budget,
        } => cmd_link(&diagram, burnside, color.as_deref(), require_burnside, budget.budget()),
        Command::Isomorphic { first, second } => cmd_isomorphic(&first, &second),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("bkei: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
