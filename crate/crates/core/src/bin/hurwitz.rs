//! Command-line interface for tropical Hurwitz computations.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 computational
//! disagreement (cross-checks that should agree do not), 3 resource guard.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use serde_json::{json, Value};

use tropical_hurwitz::complex::build_export;
use tropical_hurwitz::embedding::{canonical_splits, embed, MetricPoint};
use tropical_hurwitz::error::Error;
use tropical_hurwitz::monodromy::DEFAULT_MAX_WORK;
use tropical_hurwitz::tree::{enumerate_trivalent_types, LeafBipartition, LeafLabeledTree};
use tropical_hurwitz::{
    degree, degree_recursive, degree_single_chamber, hurwitz_number, oracle_hurwitz, run_selfcheck,
    RamificationProfile,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DISAGREEMENT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Tropical Hurwitz numbers, exactly")]
struct Cli {
    /// Thread count for parallel work (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct ProfileArgs {
    /// Sheet count of the cover
    #[arg(long)]
    d: usize,

    /// Semicolon-separated partitions of d, e.g. "2,1;2,1;3"
    #[arg(long)]
    profile: String,
}

impl ProfileArgs {
    fn parse(&self) -> Result<RamificationProfile, Error> {
        RamificationProfile::parse(&self.profile, self.d)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Class-algebra trace formula
    Trace,
    /// Brute-force monodromy counting
    Oracle,
    /// Weighted cell count over every chamber
    Degree,
    /// Cherry-stripping recursion
    Recursive,
    /// All of the above, cross-checked
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a Hurwitz number
    Hurwitz {
        #[command(flatten)]
        profile: ProfileArgs,

        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,

        /// With --method degree: evaluate one chamber, skip the cross-check
        #[arg(long)]
        single_chamber: bool,

        /// Enumeration budget for the monodromy oracle
        #[arg(long, default_value_t = DEFAULT_MAX_WORK)]
        max_work: u64,
    },

    /// Enumerate the cells of the Hurwitz complex
    Cells {
        #[command(flatten)]
        profile: ProfileArgs,

        /// Write the full JSON export here
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },

    /// Embed a metric tree by double ratios
    Embed {
        /// Number of labeled leaves
        #[arg(long)]
        n: usize,

        /// Bounded-edge bipartitions, e.g. --tree "12|34" (repeatable)
        #[arg(long)]
        tree: Vec<String>,

        /// Edge lengths as rationals, matching --tree order (default: 1 each)
        #[arg(long)]
        lengths: Vec<String>,
    },

    /// List the trivalent topological types with n leaves
    Trees {
        #[arg(long)]
        n: usize,
    },

    /// Run the seeded invariant suite
    Selfcheck {
        #[arg(long, default_value_t = 4)]
        max_d: usize,

        #[arg(long, default_value_t = 5)]
        max_n: usize,

        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: cannot configure {jobs} threads: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::ResourceGuard { .. } => EXIT_RESOURCE,
                Error::ChamberDisagreement(_) => EXIT_DISAGREEMENT,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Hurwitz {
            profile,
            method,
            single_chamber,
            max_work,
        } => cmd_hurwitz(
            cli.format,
            &profile.parse()?,
            *method,
            *single_chamber,
            *max_work,
        ),
        Command::Cells { profile, out } => cmd_cells(cli.format, &profile.parse()?, out.as_deref()),
        Command::Embed { n, tree, lengths } => cmd_embed(cli.format, *n, tree, lengths),
        Command::Trees { n } => cmd_trees(cli.format, *n),
        Command::Selfcheck { max_d, max_n, seed } => {
            cmd_selfcheck(cli.format, *max_d, *max_n, *seed)
        }
    }
}

fn cmd_hurwitz(
    format: Format,
    profile: &RamificationProfile,
    method: Method,
    single_chamber: bool,
    max_work: u64,
) -> Result<(), Error> {
    let compute_degree = |p: &RamificationProfile| {
        if single_chamber {
            degree_single_chamber(p)
        } else {
            degree(p)
        }
    };
    let mut values: BTreeMap<&str, BigRational> = BTreeMap::new();
    match method {
        Method::Trace => {
            values.insert("trace", hurwitz_number(profile));
        }
        Method::Oracle => {
            values.insert("oracle", oracle_hurwitz(profile, max_work)?);
        }
        Method::Degree => {
            values.insert("degree", compute_degree(profile)?);
        }
        Method::Recursive => {
            values.insert("recursive", degree_recursive(profile));
        }
        Method::All => {
            values.insert("trace", hurwitz_number(profile));
            values.insert("oracle", oracle_hurwitz(profile, max_work)?);
            values.insert("degree", compute_degree(profile)?);
            values.insert("recursive", degree_recursive(profile));
        }
    }
    let reference = values.values().next().expect("at least one method").clone();
    let agree = values.values().all(|v| *v == reference);

    match format {
        Format::Human => {
            println!("profile: {profile} (d = {})", profile.d());
            for (name, value) in &values {
                println!("{name}: {value}");
            }
            if values.len() > 1 {
                println!("agreement: {}", if agree { "yes" } else { "NO" });
            }
        }
        Format::Json => {
            let methods: serde_json::Map<String, Value> = values
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v.to_string())))
                .collect();
            println!(
                "{}",
                json!({
                    "d": profile.d(),
                    "profile": profile.to_string(),
                    "methods": methods,
                    "agree": agree,
                })
            );
        }
    }
    if !agree {
        return Err(Error::ChamberDisagreement(format!(
            "methods disagree on {profile}"
        )));
    }
    Ok(())
}

fn cmd_cells(
    format: Format,
    profile: &RamificationProfile,
    out: Option<&std::path::Path>,
) -> Result<(), Error> {
    let export = build_export(profile)?;
    let json = export.to_json();
    if let Some(path) = out {
        std::fs::write(path, format!("{json:#}\n"))
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    match format {
        Format::Human => {
            println!("profile: {profile} (d = {})", profile.d());
            println!("cells: {}", export.cells.len());
            for (i, cell) in export.cells.iter().enumerate() {
                let nu: Vec<String> = cell
                    .nu
                    .iter()
                    .map(|(bip, p)| format!("{bip} -> ({p})"))
                    .collect();
                println!(
                    "  [{i}] tree {{{}}}  nu {{{}}}  weight {}",
                    cell.tree.join(", "),
                    nu.join(", "),
                    cell.weight
                );
            }
            println!("identification classes: {}", export.classes.len());
            println!("degree: {}", export.degree);
        }
        Format::Json => println!("{json}"),
    }
    Ok(())
}

fn cmd_embed(format: Format, n: usize, tree: &[String], lengths: &[String]) -> Result<(), Error> {
    let bips: Vec<LeafBipartition> = tree
        .iter()
        .map(|t| LeafBipartition::parse(t, n))
        .collect::<Result<_, _>>()?;
    let lengths: Vec<BigRational> = if lengths.is_empty() {
        vec![BigRational::from_integer(1.into()); bips.len()]
    } else if lengths.len() == bips.len() {
        lengths
            .iter()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Invalid(format!("bad rational '{t}'")))
            })
            .collect::<Result<_, _>>()?
    } else {
        return Err(Error::Invalid(format!(
            "{} lengths given for {} edges",
            lengths.len(),
            bips.len()
        )));
    };

    let host = find_host_tree(n, &bips)?;
    let point = MetricPoint::new(host, bips.iter().cloned().zip(lengths).collect())?;
    let coords = embed(&point)?;
    let splits = canonical_splits(n);

    match format {
        Format::Human => {
            for (q, v) in splits.iter().zip(&coords) {
                let label = format!(
                    "({},{})({},{})",
                    q.first.0 + 1,
                    q.first.1 + 1,
                    q.second.0 + 1,
                    q.second.1 + 1
                );
                println!("{label}: {v}");
            }
        }
        Format::Json => {
            let coords: Vec<Value> = splits
                .iter()
                .zip(&coords)
                .map(|(q, v)| {
                    json!({
                        "first": [q.first.0 + 1, q.first.1 + 1],
                        "second": [q.second.0 + 1, q.second.1 + 1],
                        "value": v.to_string(),
                    })
                })
                .collect();
            println!("{}", json!({ "n": n, "coordinates": coords }));
        }
    }
    Ok(())
}

// any trivalent type whose bounded edges include all the given bipartitions;
// edges not listed get length zero, so any compatible host represents the
// same metric tree
fn find_host_tree(n: usize, bips: &[LeafBipartition]) -> Result<LeafLabeledTree, Error> {
    enumerate_trivalent_types(n)?
        .into_iter()
        .find(|t| {
            let key = t.canonical_key();
            bips.iter().all(|b| key.contains(b))
        })
        .ok_or_else(|| Error::Invalid("bipartitions are not pairwise compatible".into()))
}

fn cmd_trees(format: Format, n: usize) -> Result<(), Error> {
    let trees = enumerate_trivalent_types(n)?;
    match format {
        Format::Human => {
            println!("{} trivalent types with {n} leaves", trees.len());
            for (i, t) in trees.iter().enumerate() {
                let key: Vec<String> = t.canonical_key().iter().map(|b| b.to_string()).collect();
                println!("  [{i}] {{{}}}", key.join(", "));
            }
        }
        Format::Json => {
            let types: Vec<Value> = trees
                .iter()
                .map(|t| {
                    json!(t
                        .canonical_key()
                        .iter()
                        .map(|b| b.to_string())
                        .collect::<Vec<_>>())
                })
                .collect();
            println!(
                "{}",
                json!({ "n": n, "count": trees.len(), "types": types })
            );
        }
    }
    Ok(())
}

fn cmd_selfcheck(format: Format, max_d: usize, max_n: usize, seed: u64) -> Result<(), Error> {
    let results = run_selfcheck(max_d, max_n, seed);
    let all_pass = results.iter().all(|r| r.pass);
    match format {
        Format::Human => {
            for r in &results {
                println!(
                    "[{}] {}: {}",
                    if r.pass { "pass" } else { "FAIL" },
                    r.name,
                    r.detail
                );
            }
        }
        Format::Json => {
            let checks: Vec<Value> = results
                .iter()
                .map(|r| json!({ "name": r.name, "pass": r.pass, "detail": r.detail }))
                .collect();
            println!("{}", json!({ "pass": all_pass, "checks": checks }));
        }
    }
    if all_pass {
        Ok(())
    } else {
        Err(Error::ChamberDisagreement(
            "one or more self-checks failed".into(),
        ))
    }
}
