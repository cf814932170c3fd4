//! `pacsem`: exit status 0 means accept (or sat / entailed), 1 reject,
//! 2 bad input or usage.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pacsem::cutting_planes::encode_clause_cp;
use pacsem::formats::{
    parse_cnf, parse_dist, parse_mask_spec, read_with, write_cp, write_pasgn, write_poly,
};
use pacsem::oracle::Oracle;
use pacsem::pac::PacOptions;
use pacsem::polycalc::encode_clause_pcr;
use pacsem::sampling::{draw_masked_examples, validity};
use pacsem::scenario::{prove, run_scenario, ScenarioConfig, SystemParams};

#[derive(Parser)]
#[command(name = "pacsem", version, about = "Decide (1 - eps)-validity from masked examples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run DecidePAC on a scenario config.
    Decide {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads for the per-example backend calls.
        #[arg(long)]
        threads: Option<usize>,
        /// List every example with its verdict.
        #[arg(long)]
        per_example: bool,
    },
    /// Run one backend on an unrestricted knowledge base and query.
    Prove {
        #[arg(long)]
        system: String,
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        w: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long = "L", visible_alias = "l")]
        l: Option<u64>,
    },
    /// Draw masked examples and print them as a pasgn file.
    Sample {
        #[arg(long)]
        dist: PathBuf,
        /// fixed:<bits>, iid:<p> or table:<path>
        #[arg(long)]
        mask: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Brute-force semantic checks.
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
        #[arg(long, global = true, default_value_t = pacsem::oracle::DEFAULT_CAP)]
        cap: usize,
    },
    /// Encode every clause of a CNF as a polynomial or inequality.
    Encode {
        #[arg(long)]
        to: Encoding,
        #[arg(long)]
        cnf: PathBuf,
    },
}

#[derive(Subcommand)]
enum OracleQuery {
    /// Lexicographically first model of a CNF.
    Sat {
        #[arg(long)]
        cnf: PathBuf,
    },
    /// Whether the KB entails the query (both CNF files).
    Entails {
        #[arg(long)]
        kb: PathBuf,
        #[arg(long)]
        query: PathBuf,
    },
    /// Exact probability that a CNF holds under a distribution.
    Validity {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        query: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Encoding {
    Pcr,
    Cp,
}

type CliResult = Result<bool, Box<dyn std::error::Error>>;

fn bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Decide { config, threads, per_example } => {
            let cfg = ScenarioConfig::load(&config)?;
            let run = run_scenario(&cfg, PacOptions { threads, per_example })?;
            print!("{}", run.report);
            eprintln!("elapsed: {:.3}s", run.elapsed.as_secs_f64());
            Ok(run.outcome.accepted())
        }
        Command::Prove { system, kb, query, s, k, w, d, l } => {
            let params = SystemParams::from_parts(&system, s, k, w, d, l)?;
            let out = prove(params, &kb, &query)?;
            println!("{}", if out.accepted { "accept" } else { "reject" });
            if let Some(c) = out.certificate {
                print!("{c}");
            }
            Ok(out.accepted)
        }
        Command::Sample { dist, mask, m, seed } => {
            let dist = read_with(&dist, parse_dist)?;
            let mask = parse_mask_spec(&mask, dist.num_vars(), Path::new("."))?;
            let ex = draw_masked_examples(&dist, &mask, m, seed)?;
            print!("{}", write_pasgn(dist.num_vars(), &ex));
            Ok(true)
        }
        Command::Oracle { query, cap } => {
            let oracle = Oracle::new(cap);
            match query {
                OracleQuery::Sat { cnf } => {
                    let cnf = read_with(&cnf, parse_cnf)?;
                    match oracle.sat_solve(&cnf)? {
                        Some(x) => {
                            println!("sat {}", bits(&x));
                            Ok(true)
                        }
                        None => {
                            println!("unsat");
                            Ok(false)
                        }
                    }
                }
                OracleQuery::Entails { kb, query } => {
                    let kb = read_with(&kb, parse_cnf)?;
                    let q = read_with(&query, parse_cnf)?;
                    let n = kb.num_vars().max(q.num_vars());
                    let yes = oracle.entails(&[kb.to_formula()], &q.to_formula(), n)?;
                    println!("{}", if yes { "entailed" } else { "not entailed" });
                    Ok(yes)
                }
                OracleQuery::Validity { dist, query } => {
                    let dist = read_with(&dist, parse_dist)?;
                    let q = read_with(&query, parse_cnf)?;
                    if q.num_vars() > dist.num_vars() {
                        return Err(format!(
                            "query has {} variables, the distribution {}",
                            q.num_vars(),
                            dist.num_vars()
                        )
                        .into());
                    }
                    println!("{}", validity(&dist, &q.to_formula())?);
                    Ok(true)
                }
            }
        }
        Command::Encode { to, cnf } => {
            let cnf = read_with(&cnf, parse_cnf)?;
            let clauses = cnf.clauses().iter().filter(|c| !c.is_tautology());
            match to {
                Encoding::Pcr => {
                    let polys = clauses.map(encode_clause_pcr).collect::<pacsem::Result<Vec<_>>>()?;
                    print!("{}", write_poly(cnf.num_vars(), &polys));
                }
                Encoding::Cp => {
                    let ineqs = clauses.map(encode_clause_cp).collect::<pacsem::Result<Vec<_>>>()?;
                    print!("{}", write_cp(cnf.num_vars(), &ineqs));
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
