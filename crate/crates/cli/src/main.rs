use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sumnet::network::canonical_json;
use sumnet::par::Parallelism;
use sumnet::solver::{characteristic_set_probe, solve, SolveMode, DEFAULT_SEARCH_LIMIT};
use sumnet::{
    gen_g1, gen_smstar, is_solution, reverse_code, transfer_matrix, transfer_via_paths,
    FiniteField, LinearCode, SearchOptions, SolvabilityVerdict, SolverError, SumNetwork,
    TransferMatrix, VerdictStatus,
};

mod suite;

/// Exit statuses: solvable / pass = 0, unsolvable / fail = 1,
/// unknown or over the search limit = 2, invalid input = 3.
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sumnet",
    version,
    about = "Sum-network generation, coding and solvability checks"
)]
struct Cli {
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network from a known family.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Decide solvability of a network over a field.
    Solve(SolveArgs),
    /// Check whether a code solves a network.
    Verify {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        code: PathBuf,
    },
    /// Print the transfer matrix of a code; exit 0 iff every block is the identity.
    Transfer {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        code: PathBuf,
        /// Sum path gains instead of propagating kernels.
        #[arg(long)]
        via_paths: bool,
    },
    /// Reverse a network, and optionally a code for it.
    Reverse {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, requires = "code_out")]
        code: Option<PathBuf>,
        #[arg(long, requires = "code")]
        code_out: Option<PathBuf>,
    },
    /// Solvability of S_m* across several fields.
    Probe {
        #[command(subcommand)]
        family: ProbeFamily,
    },
    /// Run the full claim suite; exit 0 iff every claim passes.
    PaperSuite {
        /// Only run claims whose id matches this glob.
        #[arg(long)]
        filter: Option<String>,
        /// Omit per-claim runtimes (for byte-stable output).
        #[arg(long)]
        no_timing: bool,
        /// Load g1.json / smstar_<m>.json from this directory instead of generating.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// List claim ids and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// S_m* (m >= 3).
    Smstar {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: GenOutput,
    },
    /// The three-source, three-terminal network G_1.
    G1 {
        #[command(flatten)]
        out: GenOutput,
    },
}

#[derive(Args)]
struct GenOutput {
    /// Write canonical JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a Graphviz rendering.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ProbeFamily {
    Smstar {
        #[arg(long)]
        m: usize,
        /// Comma-separated field specs, e.g. 2,3,4,9 or 2^3.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,7,9")]
        fields: Vec<String>,
        #[arg(long, env = "SUMNET_SEARCH_LIMIT", default_value_t = DEFAULT_SEARCH_LIMIT)]
        limit: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Brute,
    Structured,
    Auto,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    net: PathBuf,
    /// Field as p, p^k, or the order q (e.g. 3, 2^2, 4).
    #[arg(long)]
    field: String,
    /// Block length N.
    #[arg(long, default_value_t = 1)]
    block: usize,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    /// Fix source and relay coefficients to 1 during search.
    #[arg(long)]
    wlog: bool,
    /// Collect every solution instead of stopping at the first.
    #[arg(long)]
    all: bool,
    /// Run the search on the calling thread only.
    #[arg(long)]
    sequential: bool,
    /// Largest number of assignments a search may visit.
    #[arg(long, env = "SUMNET_SEARCH_LIMIT", default_value_t = DEFAULT_SEARCH_LIMIT)]
    limit: u64,
    /// Write the witness code here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Gen { family } => cmd_gen(family),
        Command::Solve(args) => cmd_solve(args, cli.json),
        Command::Verify { net, code } => cmd_verify(net, code, cli.json),
        Command::Transfer {
            net,
            code,
            via_paths,
        } => cmd_transfer(net, code, *via_paths, cli.json),
        Command::Reverse {
            net,
            out,
            code,
            code_out,
        } => cmd_reverse(net, out, code.as_deref(), code_out.as_deref(), cli.json),
        Command::Probe { family } => cmd_probe(family, cli.json),
        Command::PaperSuite {
            filter,
            no_timing,
            fixtures,
            list,
        } => {
            if *list {
                for id in suite::claim_ids() {
                    println!("{id}");
                }
                return Ok(0);
            }
            let fx = suite::Fixtures::new(fixtures.as_deref());
            let report = suite::run(filter.as_deref(), &fx, !no_timing)?;
            if cli.json {
                print!("{}", canonical_json(&report));
            } else {
                print!("{}", report.to_table());
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

/// Accepts `p`, `p^k`, or a prime-power order such as `4` or `9`.
fn parse_field(spec: &str) -> Result<FiniteField> {
    let spec = spec.trim();
    if spec.contains('^') {
        return Ok(FiniteField::from_spec(spec)?);
    }
    let q: u64 = spec
        .parse()
        .with_context(|| format!("invalid field '{spec}'"))?;
    for p in 2..=q {
        if q.is_multiple_of(p) {
            let mut k = 0;
            let mut r = q;
            while r.is_multiple_of(p) {
                r /= p;
                k += 1;
            }
            if r != 1 {
                bail!("{q} is not a prime power");
            }
            return Ok(FiniteField::new(p, k)?);
        }
    }
    bail!("{q} is not a prime power")
}

fn read_net(path: &Path) -> Result<SumNetwork> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    SumNetwork::load(&bytes).with_context(|| format!("loading network {}", path.display()))
}

fn read_code(path: &Path) -> Result<LinearCode> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    LinearCode::load(&bytes).with_context(|| format!("loading code {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_gen(family: &GenFamily) -> Result<u8> {
    let (net, name, out) = match family {
        GenFamily::Smstar { m, out } => (gen_smstar(*m)?, format!("S_{m}*"), out),
        GenFamily::G1 { out } => (gen_g1(), "G_1".to_string(), out),
    };
    match &out.out {
        Some(path) => write(path, &net.save())?,
        None => print!("{}", net.save()),
    }
    if let Some(path) = &out.dot {
        write(path, &net.to_dot(&name))?;
    }
    Ok(0)
}

fn exit_for(status: VerdictStatus) -> u8 {
    match status.solvable() {
        Some(true) => 0,
        Some(false) => 1,
        None => EXIT_UNKNOWN,
    }
}

fn verdict_json(v: &SolvabilityVerdict) -> serde_json::Value {
    json!({
        "network": v.network,
        "field": v.field,
        "block_len": v.block_len,
        "status": v.status.as_str(),
        "evidence": v.evidence,
        "search": v.stats.filter(|s| s.space_size > 0).map(|s| json!({
            "space_size": s.space_size,
            "assignments_tried": s.assignments_tried,
            "solutions_found": s.solutions_found,
        })),
        "witness": v.witness.as_ref().map(LinearCode::to_json),
    })
}

fn cmd_solve(args: &SolveArgs, as_json: bool) -> Result<u8> {
    let net = read_net(&args.net)?;
    let field = parse_field(&args.field)?;
    if args.block == 0 {
        bail!("block length must be at least 1");
    }
    let mode = match args.mode {
        ModeArg::Brute => SolveMode::Brute,
        ModeArg::Structured => SolveMode::Structured,
        ModeArg::Auto => SolveMode::Auto,
    };
    let opts = SearchOptions {
        wlog_reduce: args.wlog,
        find_all: args.all,
        limit: args.limit,
        parallelism: if args.sequential {
            Parallelism::Sequential
        } else {
            Parallelism::Parallel
        },
    };
    let v = match solve(&net, &field, args.block, mode, opts) {
        Ok(v) => v,
        Err(SolverError::SearchSpaceTooLarge { required, limit }) => {
            if as_json {
                print!(
                    "{}",
                    canonical_json(&json!({
                        "status": "Unknown",
                        "evidence": format!("search space has {required} assignments, limit is {limit}"),
                    }))
                );
            } else {
                println!("status:   Unknown");
                println!("evidence: search space has {required} assignments, limit is {limit}; raise --limit");
            }
            return Ok(EXIT_UNKNOWN);
        }
        Err(e) => return Err(e.into()),
    };
    if let (Some(path), Some(w)) = (&args.out, &v.witness) {
        write(path, &w.save())?;
    }
    if as_json {
        print!("{}", canonical_json(&verdict_json(&v)));
    } else {
        println!("network:  {}", v.network);
        println!("field:    {}", v.field);
        println!("block:    {}", v.block_len);
        println!("status:   {}", v.status.as_str());
        println!("evidence: {}", v.evidence);
        if let Some(s) = v.stats.filter(|s| s.space_size > 0) {
            println!(
                "search:   {} of {} assignments visited, {} solutions, {} ms",
                s.assignments_tried,
                s.space_size,
                s.solutions_found,
                s.elapsed.as_millis()
            );
        }
        if let Some(path) = &args.out {
            if v.witness.is_some() {
                println!("witness:  {}", path.display());
            }
        }
    }
    Ok(exit_for(v.status))
}

fn cmd_verify(net: &Path, code: &Path, as_json: bool) -> Result<u8> {
    let net = read_net(net)?;
    let code = read_code(code)?;
    let ok = is_solution(&net, &code)?;
    if as_json {
        print!("{}", canonical_json(&json!({ "solves": ok })));
    } else {
        println!("{}", if ok { "solves" } else { "does not solve" });
    }
    Ok(if ok { 0 } else { 1 })
}

fn transfer_json(t: &TransferMatrix) -> serde_json::Value {
    let blocks: Vec<Vec<Vec<Vec<Vec<u32>>>>> = (0..t.sources())
        .map(|i| {
            (0..t.terminals())
                .map(|j| {
                    let b = t.block(i, j);
                    b.to_rows()
                        .iter()
                        .map(|r| r.iter().map(|e| b.field().coeffs(*e)).collect())
                        .collect()
                })
                .collect()
        })
        .collect();
    json!({
        "sources": t.sources(),
        "terminals": t.terminals(),
        "N": t.block_len(),
        "blocks": blocks,
        "all_identity": t.is_all_identity(),
    })
}

fn cmd_transfer(net: &Path, code: &Path, via_paths: bool, as_json: bool) -> Result<u8> {
    let net = read_net(net)?;
    let code = read_code(code)?;
    let t = if via_paths {
        transfer_via_paths(&net, &code, sumnet::network::DEFAULT_PATH_LIMIT)?
    } else {
        transfer_matrix(&net, &code)?
    };
    if as_json {
        print!("{}", canonical_json(&transfer_json(&t)));
    } else {
        print!("{}", t.render());
        println!(
            "all blocks identity: {}",
            if t.is_all_identity() { "yes" } else { "no" }
        );
    }
    Ok(if t.is_all_identity() { 0 } else { 1 })
}

fn cmd_reverse(
    net_path: &Path,
    out: &Path,
    code: Option<&Path>,
    code_out: Option<&Path>,
    as_json: bool,
) -> Result<u8> {
    let net = read_net(net_path)?;
    let rev = net.reverse();
    write(out, &rev.save())?;
    let mut solves = None;
    if let (Some(code), Some(code_out)) = (code, code_out) {
        let code = read_code(code)?;
        let rc = reverse_code(&net, &code)?;
        write(code_out, &rc.save())?;
        solves = Some(is_solution(&rev, &rc)?);
    }
    if as_json {
        print!(
            "{}",
            canonical_json(&json!({
                "sources": rev.sources().len(),
                "terminals": rev.terminals().len(),
                "reversed_code_solves": solves,
            }))
        );
    } else {
        println!(
            "reversed network: {} sources, {} terminals",
            rev.sources().len(),
            rev.terminals().len()
        );
        if let Some(s) = solves {
            println!(
                "reversed code {}",
                if s { "solves" } else { "does not solve" }
            );
        }
    }
    Ok(0)
}

fn cmd_probe(family: &ProbeFamily, as_json: bool) -> Result<u8> {
    let ProbeFamily::Smstar { m, fields, limit } = family;
    let fields = fields
        .iter()
        .map(|s| parse_field(s))
        .collect::<Result<Vec<_>>>()?;
    let opts = SearchOptions {
        limit: *limit,
        ..SearchOptions::default()
    };
    let rows = characteristic_set_probe(*m, &fields, opts)?;
    if as_json {
        let out: Vec<serde_json::Value> = fields
            .iter()
            .zip(&rows)
            .map(|(f, r)| {
                json!({
                    "field": f.to_string(),
                    "characteristic": f.characteristic(),
                    "status": r.structured.status.as_str(),
                    "evidence": r.structured.evidence,
                    "brute_force": r.brute_force.as_ref().map(|b| b.status.as_str()),
                })
            })
            .collect();
        print!("{}", canonical_json(&json!({ "m": m, "rows": out })));
    } else {
        println!("S_{m}*  (m-2 = {})", m - 2);
        println!(
            "{:<10} {:>4}  {:<22} BRUTE FORCE",
            "FIELD", "CHAR", "STRUCTURED"
        );
        for (f, r) in fields.iter().zip(&rows) {
            println!(
                "{:<10} {:>4}  {:<22} {}",
                f.to_string(),
                f.characteristic(),
                r.structured.status.as_str(),
                r.brute_force
                    .as_ref()
                    .map_or("skipped", |b| b.status.as_str())
            );
        }
    }
    Ok(0)
}
