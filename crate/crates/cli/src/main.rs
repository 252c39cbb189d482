//! `orderable`: command-line access to the orderable library.
//!
//! Exit codes: 0 on a definite answer, 2 when the answer is Unknown or a
//! search was inconclusive, 1 on input errors and failed verifications.

mod commands;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "orderable", version, about = "Left-orderability certificates for graph manifolds")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Wrap JSON output in {status, payload, citations, runtime_ms}.
    #[arg(long, global = true)]
    pub envelope: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Braid group B3 in letters a, A, b, B.
    #[command(subcommand)]
    Braid(BraidCmd),
    /// Klein bottle group ⟨x, y | xyx⁻¹ = y⁻¹⟩.
    #[command(subcommand)]
    Klein(KleinCmd),
    /// Slopes p/q on a torus and gluing maps.
    #[command(subcommand)]
    Slope(SlopeCmd),
    /// Finitely presented groups from JSON files.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Splice-tree certificates.
    #[command(subcommand)]
    Splice(SpliceCmd),
    /// Heegaard Floer rank of rational surgery.
    #[command(subcommand)]
    Hf(HfCmd),
    /// Homology of cyclic branched covers.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Mechanized checks of the trefoil/Klein bottle example.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand, Debug)]
pub enum BraidCmd {
    /// Sign in the DD ordering, or in its conjugate by --conjugator.
    Sign {
        word: String,
        #[arg(long)]
        conjugator: Option<String>,
    },
    /// Compare two braids in the DD ordering.
    Compare { left: String, right: String },
    /// Handle reduction.
    Reduce {
        word: String,
        #[arg(long, default_value_t = orderable::braid3::DEFAULT_STEP_CAP)]
        cap: u64,
    },
    /// The m with Δ^{2m} <= w < Δ^{2m+2}.
    Floor { word: String },
}

#[derive(Subcommand, Debug)]
pub enum KleinCmd {
    /// Classify the filling along y^m x^{2n}.
    Fill {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Sign of x^a y^b in O1 or O2, optionally conjugated.
    Sign {
        element: String,
        #[arg(long, value_enum, default_value_t = KleinOrd::O1)]
        ordering: KleinOrd,
        #[arg(long)]
        conjugator: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KleinOrd {
    #[value(name = "O1", alias = "o1")]
    O1,
    #[value(name = "O2", alias = "o2")]
    O2,
}

#[derive(Subcommand, Debug)]
pub enum SlopeCmd {
    /// Geometric intersection number of two slopes.
    Delta {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        #[arg(allow_hyphen_values = true)]
        beta: String,
    },
    /// Image of a slope under a gluing matrix, with splice framing data.
    Glue {
        /// Row-major entries a,b,c,d.
        #[arg(long, default_value = "0,1,1,0", allow_hyphen_values = true)]
        matrix: String,
        #[arg(allow_hyphen_values = true)]
        slope: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Abelian invariants via Smith normal form.
    Abelianize { file: String },
    /// Dehn filling along μ^p λ^q.
    Fill {
        file: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
    },
    /// Amalgamate two presentations along pairs "u=v".
    Amalgam {
        left: String,
        right: String,
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
    },
    /// Todd-Coxeter enumeration of cosets of a subgroup.
    Enumerate {
        file: String,
        #[arg(long = "subgroup")]
        subgroup: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        max_cosets: usize,
        /// Include the coset table.
        #[arg(long)]
        table: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpliceCmd {
    /// Search for a certificate up to slope height --bound.
    Cert {
        tree: String,
        #[arg(long, default_value_t = 3)]
        bound: u64,
    },
    /// Check a certificate against its tree.
    Verify { tree: String, certificate: String },
}

#[derive(Subcommand, Debug)]
pub enum HfCmd {
    /// rank HF of p/q surgery.
    Rank(HfArgs),
}

#[derive(Args, Debug)]
pub struct HfArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub p: i64,
    #[arg(long, default_value_t = 1)]
    pub q: i64,
    #[arg(long, default_value_t = 0)]
    pub nu: i64,
    /// Ranks of the A_s complexes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ranks: Vec<i64>,
}

#[derive(Subcommand, Debug)]
pub enum CoverCmd {
    /// |H1| of the n-fold cyclic branched cover.
    Order {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        n: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Compatibility of conjugate DD orderings with the Klein orderings.
    #[command(visible_alias = "proposition-4-3")]
    Compatibility {
        #[arg(long, default_value_t = orderable::sampling::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        grid: i64,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
    },
    /// Why the slope criterion cannot certify the trefoil/Klein union.
    Nonapplicability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Unknown,
    Failed,
}

impl Status {
    fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Unknown => 2,
            Status::Failed => 1,
        }
    }
}

pub struct Output {
    pub status: Status,
    pub payload: serde_json::Value,
    pub text: String,
    pub citations: Vec<&'static str>,
}

#[derive(Serialize)]
struct CommandResult<'a> {
    status: Status,
    payload: &'a serde_json::Value,
    citations: &'a [&'static str],
    runtime_ms: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let out = match commands::run(&cli.command) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    match (cli.format, cli.envelope) {
        (Format::Text, _) => println!("{}", out.text),
        (Format::Json, false) => println!("{}", out.payload),
        (Format::Json, true) => {
            let env = CommandResult {
                status: out.status,
                payload: &out.payload,
                citations: &out.citations,
                runtime_ms,
            };
            println!("{}", serde_json::to_string(&env).expect("serializable"));
        }
    }
    ExitCode::from(out.status.exit_code())
}
