use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use vnh::census::{class_census_experiment, ConjugacyOracle, OracleAnswer};
use vnh::closed::{close, closure_of, conjugating_equivalent, reduce_closed_traced};
use vnh::io::{element_from_json, element_to_json, subgroup_preset};
use vnh::rewrite::reduce_traced;
use vnh::{is_torsion, Error, StrandDiagram, TreePairElement};

#[derive(Parser)]
#[command(name = "vnh", version, about = "Tree pairs, strand diagrams and conjugacy in V_n(H)")]
struct Cli {
    /// Print reduction traces to stderr.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an element and print it canonically.
    Parse(One),
    /// Print `f ∘ g` (apply `g` first).
    Compose(Two),
    Invert(One),
    /// Print the reduced representative.
    Reduce(One),
    /// Build the strand diagram of an element.
    Diagram {
        #[command(flatten)]
        input: One,
        /// Reduce before printing.
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Build and reduce the closed diagram of an element.
    Close {
        #[command(flatten)]
        input: One,
        #[arg(long)]
        dot: bool,
    },
    /// Decide conjugacy; with `--oracle-bound`, search for a conjugator instead.
    Conjugate {
        #[command(flatten)]
        inputs: Two,
        #[arg(long = "oracle-bound")]
        oracle_bound: Option<usize>,
    },
    Order {
        #[command(flatten)]
        input: One,
        /// Give up above this order.
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    Torsion(One),
    /// Conjugacy classes of order-p elements up to a leaf bound.
    Census {
        #[arg(long)]
        n: usize,
        /// `id`, `sym`, `cyclic` or a JSON generator list.
        #[arg(long = "H", default_value = "id")]
        h: String,
        #[arg(long)]
        p: u64,
        #[arg(long = "max-leaves")]
        max_leaves: usize,
    },
    /// Bounded conjugator search, cross-checked against the decision procedure.
    Oracle {
        #[command(flatten)]
        inputs: Two,
        #[arg(long = "oracle-bound", default_value_t = 6)]
        oracle_bound: usize,
    },
}

#[derive(Args)]
struct One {
    /// Path, inline JSON, or `-` for stdin.
    #[arg(default_value = "-")]
    element: String,
}

#[derive(Args)]
struct Two {
    f: String,
    g: String,
}

enum Failure {
    Input(String),
    Inconclusive(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotReduced | Error::Cycling(_) | Error::StaleRedex(_) | Error::WeightMismatch(_) => {
                Failure::Invariant(e.to_string())
            }
            e => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read_input(arg: &str) -> Result<String, Failure> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        return Ok(text);
    }
    fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

fn element(arg: &str) -> Result<TreePairElement, Failure> {
    Ok(element_from_json(&read_input(arg)?, None)?)
}

fn pair(inputs: &Two) -> Result<(TreePairElement, TreePairElement), Failure> {
    let f = element(&inputs.f)?;
    let g = element_from_json(&read_input(&inputs.g)?, None)?;
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch(f.arity(), g.arity()).into());
    }
    let g = element_from_json(&element_to_json(&g), Some(f.subgroup()))?;
    Ok((f, g))
}

fn trace(enabled: bool, lines: &[String]) {
    if enabled {
        for l in lines {
            eprintln!("{l}");
        }
    }
}

fn reduced_diagram(g: &TreePairElement, show: bool) -> Result<StrandDiagram, Failure> {
    let r = reduce_traced(&StrandDiagram::build(g))?;
    trace(show, &r.trace);
    Ok(r.diagram)
}

fn run(cli: &Cli) -> Outcome {
    let out = match &cli.command {
        Command::Parse(a) => element_to_json(&element(&a.element)?),
        Command::Compose(two) => {
            let (f, g) = pair(two)?;
            element_to_json(&f.compose(&g)?)
        }
        Command::Invert(a) => element_to_json(&element(&a.element)?.inverse()),
        Command::Reduce(a) => {
            let g = element(&a.element)?;
            let r = reduced_diagram(&g, cli.trace)?.cut()?;
            if r != g.reduced() {
                return Err(Failure::Invariant("diagram reduction disagrees with tree-pair reduction".into()));
            }
            element_to_json(&r)
        }
        Command::Diagram { input, reduce, dot } => {
            let g = element(&input.element)?;
            let d = if *reduce { reduced_diagram(&g, cli.trace)? } else { StrandDiagram::build(&g) };
            d.check_invariants()?;
            if *dot {
                d.to_dot()
            } else {
                let (s, m, x) = d.counts();
                format!("splits={s} merges={m} sigmas={x}\n{}", d.canonical_form())
            }
        }
        Command::Close { input, dot } => {
            let g = element(&input.element)?;
            let closed = close(&StrandDiagram::build(&g.reduced()))?;
            let r = reduce_closed_traced(&closed)?;
            trace(cli.trace, &r.trace);
            let c = r.diagram;
            c.validate()?;
            if *dot {
                c.to_dot()
            } else {
                let (s, m, x) = c.counts();
                let mut text = format!("splits={s} merges={m} sigmas={x} free_loops={}", c.free_loops().len());
                for l in c.free_loops() {
                    text.push_str(&format!("\nloop winding={} label={}", l.winding, l.label));
                }
                text
            }
        }
        Command::Conjugate { inputs, oracle_bound } => {
            let (f, g) = pair(inputs)?;
            match oracle_bound {
                None => format!("conjugate: {}", vnh::are_conjugate(&f, &g)?),
                Some(bound) => match ConjugacyOracle::new(f.subgroup().clone(), 3, *bound).search(&f, &g) {
                    OracleAnswer::Yes(h) => format!("conjugate: true\nconjugator: {}", element_to_json(&h)),
                    OracleAnswer::Inconclusive => return Err(Failure::Inconclusive("conjugate: inconclusive".into())),
                },
            }
        }
        Command::Order { input, cap } => {
            let g = element(&input.element)?;
            if !is_torsion(&g) {
                "order: infinite".to_string()
            } else {
                match g.order(*cap) {
                    Some(k) => format!("order: {k}"),
                    None => return Err(Failure::Inconclusive(format!("order: torsion, above {cap}"))),
                }
            }
        }
        Command::Torsion(a) => format!("torsion: {}", is_torsion(&element(&a.element)?)),
        Command::Census { n, h, p, max_leaves } => {
            let h = Arc::new(subgroup_preset(*n, h)?);
            let report = class_census_experiment(&h, *p, *max_leaves)?;
            if !report.sigma_violations.is_empty() {
                return Err(Failure::Invariant(format!(
                    "{} order-{p} closures keep a sigma-vertex, first: {}",
                    report.sigma_violations.len(),
                    element_to_json(&report.sigma_violations[0])
                )));
            }
            report.render().trim_end().to_string()
        }
        Command::Oracle { inputs, oracle_bound } => {
            let (f, g) = pair(inputs)?;
            let decided = conjugating_equivalent(&closure_of(&f), &closure_of(&g), f.subgroup());
            match ConjugacyOracle::new(f.subgroup().clone(), 3, *oracle_bound).search(&f, &g) {
                OracleAnswer::Yes(_) if !decided => {
                    return Err(Failure::Invariant("oracle found a conjugator the decision procedure rejects".into()))
                }
                OracleAnswer::Yes(h) => format!("oracle: conjugate\nconjugator: {}", element_to_json(&h)),
                OracleAnswer::Inconclusive => {
                    return Err(Failure::Inconclusive(format!("oracle: inconclusive\ndecision: {decided}")))
                }
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Inconclusive(msg)) => {
            println!("{msg}");
            ExitCode::from(3)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(4)
        }
    }
}
