use std::io::{ErrorKind, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dgs_core::cospec::{enumerate_generalized_cospectral_classes, CACHE_DIR_ENV};
use dgs_core::{
    certify_dgs, conjecture_scan, level_parity_audit, parse_pair_fixture, phi_report,
    smith_normal_form, table1, verify_regular_orthogonal, walk_matrix, CertifyOptions, Effort,
    Graph,
};
use serde_json::json;

/// `println!` that reports a closed stdout as an error instead of panicking.
macro_rules! outln {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout().lock(), $($arg)*)?
    };
}

const EXIT_DGS: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_NOT_CERTIFIED: u8 = 2;

#[derive(Parser)]
#[command(name = "dgs", version, about = "Exact DGS certification of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// JSON output (the default).
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Human-readable output.
    #[arg(long)]
    text: bool,
}

#[derive(Args, Clone)]
struct Source {
    /// Graph file: graph6 lines or one adjacency matrix. `-` reads stdin.
    input: Option<PathBuf>,
    /// Literal graph6 code; may be repeated.
    #[arg(long = "graph6", value_name = "CODE")]
    graph6: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify each input graph; exit 0 only if all are DGS.
    Certify {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "default")]
        effort: Effort,
        /// Skip the Φ computation for nullity-1 primes above this bound.
        #[arg(long)]
        primes_limit: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Smith normal form of the walk matrix.
    Snf {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// All F_p invariants for one odd prime.
    Invariants {
        #[command(flatten)]
        source: Source,
        #[arg(short, long)]
        p: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Verify the Q of a pair fixture and audit its level.
    VerifyQ {
        fixture: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Generalized-cospectral mates among all graphs of order n <= 7.
    Mates {
        #[arg(short, long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Counts of graphs certified by each criterion on random samples.
    Table1 {
        #[arg(long, value_delimiter = ',', default_value = "10,15,20")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "default")]
        effort: Effort,
        /// Stop after this many seconds and mark the output partial.
        #[arg(long)]
        budget_secs: Option<u64>,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Check the square-root statements on random samples.
    ConjectureScan {
        #[arg(long, value_delimiter = ',', default_value = "10,15,20")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "default")]
        effort: Effort,
    },
}

fn read_graphs(source: &Source) -> Result<Vec<Graph>> {
    let mut graphs = Vec::new();
    for code in &source.graph6 {
        graphs.push(Graph::from_graph6(code).with_context(|| format!("graph6 {code:?}"))?);
    }
    if let Some(path) = &source.input {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        } else {
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        };
        graphs.extend(parse_graphs(&text).with_context(|| format!("parsing {}", path.display()))?);
    }
    if graphs.is_empty() {
        bail!("no input graphs (pass a file, `-`, or --graph6)");
    }
    Ok(graphs)
}

/// A text whose first line is whitespace-separated 0/1 entries is one adjacency matrix;
/// anything else is one graph6 code per line.
fn parse_graphs(text: &str) -> Result<Vec<Graph>> {
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let tokens: Vec<&str> = first.split_whitespace().collect();
    if tokens.len() > 1 || tokens.first().is_some_and(|t| *t == "0") {
        return Ok(vec![Graph::from_adjacency_text(text)?]);
    }
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| Graph::from_graph6(l).map_err(Into::into))
        .collect()
}

fn single(source: &Source) -> Result<Graph> {
    let mut graphs = read_graphs(source)?;
    if graphs.len() != 1 {
        bail!("expected exactly one graph, got {}", graphs.len());
    }
    Ok(graphs.remove(0))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    outln!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Certify {
            source,
            effort,
            primes_limit,
            output,
        } => {
            let mut options = CertifyOptions::from(effort);
            if let Some(limit) = primes_limit {
                options.primes_limit = limit;
            }
            let graphs = read_graphs(&source)?;
            let mut all_dgs = true;
            let mut verdicts = Vec::new();
            for g in &graphs {
                let v = certify_dgs(g, options)?;
                all_dgs &= v.status.is_dgs();
                if output.text {
                    let fp = v
                        .failing_prime
                        .map(|p| format!(" failing_prime={p}"))
                        .unwrap_or_default();
                    outln!("{} {} n={} d_n={}{fp}", g.to_graph6(), v.status, v.n, v.dn);
                    for note in &v.notes {
                        outln!("  {note}");
                    }
                } else {
                    verdicts.push(v);
                }
            }
            if !output.text {
                if verdicts.len() == 1 {
                    print_json(&verdicts[0])?;
                } else {
                    print_json(&verdicts)?;
                }
            }
            Ok(if all_dgs {
                EXIT_DGS
            } else {
                EXIT_NOT_CERTIFIED
            })
        }
        Command::Snf { source, output } => {
            let g = single(&source)?;
            let snf = smith_normal_form(&walk_matrix(&g))?;
            let factors: Vec<String> = snf.factors.iter().map(|d| d.to_string()).collect();
            if output.text {
                outln!("{}", factors.join(","));
            } else {
                print_json(&json!({ "n": g.order(), "snf": factors, "det_sign": snf.det_sign }))?;
            }
            Ok(EXIT_DGS)
        }
        Command::Invariants { source, p, output } => {
            let g = single(&source)?;
            let r = phi_report(&g, p)?;
            if output.text {
                outln!("p = {}  nullity = {}", r.p, r.nullity);
                outln!("phi        {}", r.phi);
                outln!("sfp(phi)   {}", r.sfp_phi);
                outln!("sqrt(phi)  {}", r.sqrt_phi);
                outln!("m_p        {}", r.p_main);
                outln!("restricted {}", r.restricted_charpoly);
                outln!(
                    "condition  {}",
                    if r.condition_holds { "holds" } else { "fails" }
                );
            } else {
                print_json(&r)?;
            }
            Ok(EXIT_DGS)
        }
        Command::VerifyQ { fixture, output } => {
            let text = std::fs::read_to_string(&fixture)
                .with_context(|| format!("reading {}", fixture.display()))?;
            let pair = parse_pair_fixture(&text)?;
            let verified = verify_regular_orthogonal(&pair.q, &pair.g, &pair.h);
            if !verified {
                if output.text {
                    outln!("Q does not verify");
                } else {
                    print_json(&json!({ "verified": false }))?;
                }
                return Ok(EXIT_NOT_CERTIFIED);
            }
            let audit = level_parity_audit(&[(pair.g.clone(), pair.h.clone())])?;
            let recovered_matches = audit.pairs[0].q == pair.q;
            if output.text {
                let a = &audit.pairs[0];
                outln!("verified: true  level: {}  d_n: {}", a.level, a.dn);
                outln!("recovered Q matches fixture: {recovered_matches}");
                for p in &a.primes {
                    outln!(
                        "p = {}: nullity G/H = {}/{}  condition = {}  m_p equal = {}  divides level = {}",
                        p.p, p.nullity_g, p.nullity_h, p.nullity_condition_g, p.m_p_equal, p.divides_level
                    );
                }
            } else {
                print_json(&json!({
                    "verified": true,
                    "level": pair.q.level.to_string(),
                    "recovered_matches_fixture": recovered_matches,
                    "audit": audit,
                }))?;
            }
            Ok(if recovered_matches {
                EXIT_DGS
            } else {
                EXIT_NOT_CERTIFIED
            })
        }
        Command::Mates { n, output } => {
            let partition = enumerate_generalized_cospectral_classes(n)?;
            let groups: Vec<_> = partition.mate_groups().collect();
            if output.text {
                outln!(
                    "n = {n}: {} isomorphism classes, {} generalized-spectrum groups, {} with mates",
                    partition.class_count(),
                    partition.groups.len(),
                    groups.len()
                );
                for grp in &groups {
                    let codes: Vec<String> =
                        grp.classes.iter().map(|c| c.graph.to_graph6()).collect();
                    outln!("{}", codes.join(" "));
                }
            } else {
                print_json(&json!({
                    "n": n,
                    "classes": partition.class_count(),
                    "groups": partition.groups.len(),
                    "mate_groups": groups,
                    "cache_env": CACHE_DIR_ENV,
                }))?;
            }
            Ok(EXIT_DGS)
        }
        Command::Table1 {
            n,
            samples,
            seed,
            effort,
            budget_secs,
            csv,
        } => {
            if samples == 0
                || n.iter()
                    .any(|&k| k == 0 || k > dgs_core::graph::MAX_VERTICES)
            {
                bail!(
                    "need samples >= 1 and 1 <= n <= {}",
                    dgs_core::graph::MAX_VERTICES
                );
            }
            let table = table1(
                &n,
                samples,
                seed,
                effort,
                budget_secs.map(Duration::from_secs),
            )?;
            if csv {
                write!(std::io::stdout().lock(), "{}", table.to_csv())?;
            } else {
                outln!("{}", table.to_json());
            }
            Ok(EXIT_DGS)
        }
        Command::ConjectureScan {
            n,
            samples,
            seed,
            effort,
        } => {
            if n.iter()
                .any(|&k| k == 0 || k > dgs_core::graph::MAX_VERTICES)
            {
                bail!("need 1 <= n <= {}", dgs_core::graph::MAX_VERTICES);
            }
            print_json(&conjecture_scan(&n, samples, seed, effort)?)?;
            Ok(EXIT_DGS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let closed = e
                .downcast_ref::<std::io::Error>()
                .is_some_and(|io| io.kind() == ErrorKind::BrokenPipe);
            if closed {
                return ExitCode::from(EXIT_DGS);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
