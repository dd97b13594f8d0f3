//! `pcsp`: command-line front end for the structure, polymorphism and
//! sandwich engines.
//!
//! Results go to stdout (or `--out`), diagnostics to stderr. Exit status is
//! 0 for a positive answer, 1 for a certified or exhausted negative, 2 for
//! any error, including an exhausted node budget.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pcsp_core::affine::{affine_closure_structure, solve_affine_csp};
use pcsp_core::builtin::{self, verify_example, ExampleData};
use pcsp_core::homsearch::{find_homomorphism, HomError, SearchLimits, SearchStats, DEFAULT_NODE_BUDGET};
use pcsp_core::polymorph::{coarsest_block_partition, schaefer_classify, NamedOperation};
use pcsp_core::relstruct::{fmt_tuple, Structure};
use pcsp_core::sandwich::{
    family_bounds, min_sandwich_size_bounded, search_family, Family, FamilyStatus, SandwichError, SearchConfig,
};

#[derive(Parser)]
#[command(name = "pcsp", version, about = "Homomorphisms, polymorphisms and sandwiches of finite structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Write the result document here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct Budget {
    /// Node budget for each homomorphism search
    #[arg(long, value_name = "NODES", default_value_t = DEFAULT_NODE_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether X maps homomorphically into A; prints the map on yes
    Hom {
        x: PathBuf,
        a: PathBuf,
        #[command(flatten)]
        budget: Budget,
        /// Print search statistics to stderr
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Solve CSP(C) on instance X, by linear algebra or by backtracking
    Solve {
        x: PathBuf,
        c: PathBuf,
        /// Treat C as affine over Z_p and solve the equation system
        #[arg(long, value_name = "P", conflicts_with = "generic", required_unless_present = "generic")]
        affine: Option<usize>,
        /// Use the backtracking solver
        #[arg(long)]
        generic: bool,
        /// Print the equation system to stderr (with --affine)
        #[arg(long)]
        dump_system: bool,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Search for a certified tractable structure sandwiched between A and B
    Sandwich {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = FamilyArg::All)]
        family: FamilyArg,
        /// Largest cyclic group order for the affine family
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        /// Largest middle structure for the semilattice family
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        size_bound: u64,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        output: Output,
    },
    /// Report which Schaefer operations preserve a Boolean structure
    Schaefer { s: PathBuf },
    /// Coarsest block-symmetric partition and width of an operation
    Width { op: PathBuf },
    /// Close a structure under x-y+z mod n
    AffineClose {
        s: PathBuf,
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
        modulus: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Recompute the built-in six-ary example and check every table
    VerifyExample {
        /// Print nothing; report through the exit status only
        #[arg(long)]
        quiet: bool,
        /// Replace one expected closure tuple by 22…2 (for testing the
        /// failure path)
        #[arg(long, hide = true, value_name = "INDEX")]
        corrupt_closure: Option<usize>,
    },
    /// Print (or write into a directory) the built-in structures
    DumpPaperStructures {
        /// Directory to write A.struct, B.struct and C.struct into
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Affine,
    Schaefer,
    Semilattice,
    Majority,
    All,
}

impl FamilyArg {
    fn family(self) -> Option<Family> {
        match self {
            FamilyArg::Affine => Some(Family::Affine),
            FamilyArg::Schaefer => Some(Family::Schaefer),
            FamilyArg::Semilattice => Some(Family::Semilattice),
            FamilyArg::Majority => Some(Family::Majority),
            FamilyArg::All => None,
        }
    }
}

/// How a successful command ended; errors travel as `Err(message)`.
enum Status {
    Yes,
    No,
}

type Res<T> = Result<T, String>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_structure(path: &Path) -> Res<Structure> {
    Structure::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_operation(path: &Path) -> Res<NamedOperation> {
    NamedOperation::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(output: &Output, text: &str) -> Res<()> {
    match &output.out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_stats(stats: &SearchStats) {
    eprintln!(
        "nodes: {}; propagations: {}; elapsed: {:.3?}",
        stats.nodes_expanded, stats.propagation_calls, stats.elapsed
    );
}

fn hom_error(e: HomError) -> String {
    match &e {
        HomError::BudgetExceeded { stats, .. } => {
            format!("{e} (after {} nodes; raise --budget)", stats.nodes_expanded)
        }
        _ => e.to_string(),
    }
}

fn cmd_hom(x: &Path, a: &Path, budget: Budget, stats: bool, output: &Output) -> Res<Status> {
    let (x, a) = (load_structure(x)?, load_structure(a)?);
    let outcome = find_homomorphism(&x, &a, SearchLimits::with_budget(budget.budget)).map_err(hom_error)?;
    if stats {
        print_stats(&outcome.stats);
    }
    match outcome.map {
        Some(m) => {
            emit(output, &format!("{m}\n"))?;
            Ok(Status::Yes)
        }
        None => {
            eprintln!("no homomorphism");
            Ok(Status::No)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    x: &Path,
    c: &Path,
    affine: Option<usize>,
    dump_system: bool,
    budget: Budget,
    stats: bool,
    output: &Output,
) -> Res<Status> {
    let (x, c) = (load_structure(x)?, load_structure(c)?);
    let map = match affine {
        Some(p) => {
            let sol = solve_affine_csp(&x, &c, p).map_err(|e| e.to_string())?;
            if dump_system {
                eprint!("{}", sol.system.dump());
            }
            sol.map
        }
        None => {
            let outcome = find_homomorphism(&x, &c, SearchLimits::with_budget(budget.budget)).map_err(hom_error)?;
            if stats {
                print_stats(&outcome.stats);
            }
            outcome.map
        }
    };
    match map {
        Some(m) => {
            emit(output, &format!("{m}\n"))?;
            Ok(Status::Yes)
        }
        None => {
            eprintln!("no solution");
            Ok(Status::No)
        }
    }
}

fn cmd_sandwich(a: &Path, b: &Path, family: FamilyArg, cfg: SearchConfig, output: &Output) -> Res<Status> {
    let (a, b) = (load_structure(a)?, load_structure(b)?);
    let Some(family) = family.family() else {
        let report = min_sandwich_size_bounded(&a, &b, &cfg).map_err(|e: SandwichError| e.to_string())?;
        let errors = report.errors();
        let best = report
            .families
            .iter()
            .filter_map(|r| match &r.status {
                FamilyStatus::Found(c) => Some(c),
                _ => None,
            })
            .min_by_key(|c| c.size());
        if let Some(cert) = best {
            eprint!("{report}");
            emit(output, &cert.to_document())?;
            return Ok(Status::Yes);
        }
        if !errors.is_empty() {
            eprint!("{report}");
            return Err(errors.join("; "));
        }
        emit(output, &report.to_string())?;
        return Ok(Status::No);
    };
    let outcome = search_family(family, &a, &b, &cfg).map_err(|e: SandwichError| e.to_string())?;
    if let Some(cert) = outcome.certificate {
        eprintln!("{family}: found size {} after {} candidates", cert.size(), outcome.checked);
        emit(output, &cert.to_document())?;
        return Ok(Status::Yes);
    }
    let mut text = String::new();
    let verdict = if outcome.decisive { "none exists" } else { "not found within bounds" };
    writeln!(text, "{family}: {verdict} ({}; {} candidates)", family_bounds(family, &a, &cfg), outcome.checked)
        .unwrap();
    for r in &outcome.rejections {
        writeln!(text, "rejected {r}").unwrap();
    }
    emit(output, &text)?;
    Ok(Status::No)
}

fn cmd_schaefer(s: &Path) -> Res<Status> {
    let s = load_structure(s)?;
    let report = schaefer_classify(&s).map_err(|e| e.to_string())?;
    for class in pcsp_core::polymorph::SchaeferClass::ALL {
        match report.violation(class) {
            None => println!("{class}: preserved"),
            Some(v) => {
                let args: Vec<String> = v.args.iter().map(|t| fmt_tuple(t)).collect();
                let name = &s.signature().symbols()[v.relation].name;
                println!("{class}: violated ({} -> {} not in {name})", args.join(", "), fmt_tuple(&v.image));
            }
        }
    }
    Ok(if report.is_tractable() { Status::Yes } else { Status::No })
}

fn cmd_width(op: &Path) -> Res<Status> {
    let op = load_operation(op)?;
    let partition = coarsest_block_partition(&op.table);
    println!("blocks: {partition}; width: {}", partition.min_block_size());
    Ok(Status::Yes)
}

fn cmd_affine_close(s: &Path, modulus: usize, output: &Output) -> Res<Status> {
    let s = load_structure(s)?;
    let closed = affine_closure_structure(&s, modulus).map_err(|e| e.to_string())?;
    emit(output, &closed.serialize())?;
    Ok(Status::Yes)
}

fn cmd_verify_example(quiet: bool, corrupt: Option<usize>) -> Res<Status> {
    let mut data = ExampleData::builtin();
    if let Some(i) = corrupt {
        let slot = data
            .closure
            .get_mut(i)
            .ok_or_else(|| format!("closure has only {} tuples", ExampleData::builtin().closure.len()))?;
        *slot = vec![2; slot.len()];
    }
    let report = verify_example(&data);
    if !quiet {
        print!("{report}");
    }
    Ok(if report.passed() { Status::Yes } else { Status::No })
}

fn cmd_dump(out: Option<&Path>) -> Res<Status> {
    let docs =
        [("A.struct", builtin::SOURCE_DOC), ("B.struct", builtin::TARGET_DOC), ("C.struct", builtin::MIDDLE_DOC)];
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            for (name, doc) in docs {
                let p = dir.join(name);
                fs::write(&p, doc).map_err(|e| format!("{}: {e}", p.display()))?;
            }
            eprintln!("wrote A.struct, B.struct, C.struct to {}", dir.display());
        }
        None => {
            for (name, doc) in docs {
                println!("# {name}");
                print!("{doc}");
            }
            println!("# g: C -> B");
            println!("# {}", builtin::g_map());
        }
    }
    Ok(Status::Yes)
}

fn to_usize(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

fn run(cli: Cli) -> Res<Status> {
    match cli.command {
        Command::Hom { x, a, budget, stats, output } => cmd_hom(&x, &a, budget, stats, &output),
        Command::Solve { x, c, affine, generic: _, dump_system, budget, stats, output } => {
            cmd_solve(&x, &c, affine, dump_system, budget, stats, &output)
        }
        Command::Sandwich { a, b, family, n_max, size_bound, budget, output } => {
            let cfg =
                SearchConfig { n_max: to_usize(n_max), size_bound: to_usize(size_bound), node_budget: budget.budget };
            cmd_sandwich(&a, &b, family, cfg, &output)
        }
        Command::Schaefer { s } => cmd_schaefer(&s),
        Command::Width { op } => cmd_width(&op),
        Command::AffineClose { s, modulus, output } => cmd_affine_close(&s, to_usize(modulus), &output),
        Command::VerifyExample { quiet, corrupt_closure } => cmd_verify_example(quiet, corrupt_closure),
        Command::DumpPaperStructures { out } => cmd_dump(out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Yes) => ExitCode::SUCCESS,
        Ok(Status::No) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
