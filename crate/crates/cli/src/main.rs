use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod run;

#[derive(Parser)]
#[command(name = "isoterm", version, about = "Finite monoids, identities, isoterms and deductions")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, show and validate monoids.
    #[command(subcommand)]
    Monoid(MonoidCmd),
    /// Check an identity in a monoid or a join `A+B`.
    Check { class: String, identity: String },
    /// Decide whether a word is an isoterm.
    Isoterm {
        class: String,
        word: String,
        /// Only search for a witness; skip certification.
        #[arg(long)]
        falsify_only: bool,
    },
    /// Decide whether A lies in the variety generated by B (or `B1+B2`).
    Member { a: String, b: String },
    /// Search for a derivation of an identity from a rule file.
    Deduce {
        #[arg(long)]
        rules: PathBuf,
        identity: String,
        #[arg(long, default_value_t = 200_000)]
        max_visited: usize,
        #[arg(long, default_value_t = 64)]
        max_len: usize,
        /// Write the derivation as a script file.
        #[arg(long)]
        script_out: Option<PathBuf>,
    },
    /// Rewrite a word into its canonical form for E^1.
    Canonical { word: String },
    /// Work with the sigma identities.
    #[command(subcommand)]
    Sigma(SigmaCmd),
    /// Figure data.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Run a manifest of checks (the shipped one by default).
    VerifyPaper {
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MonoidCmd {
    /// Print a monoid's table.
    Show { monoid: String },
    /// Check the axioms of a monoid.
    Validate { monoid: String },
    /// Direct product of two monoids.
    Product { a: String, b: String },
    /// Rees quotient M(W) of the given words.
    Rees {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Adjoin a new identity element.
    Adjoin1 { monoid: String },
}

#[derive(Subcommand)]
enum SigmaCmd {
    /// Reduce an identity valid in L2^1 ∨ Q^1 to lambda identities and name
    /// the subvariety of E^1 it defines.
    Classify { identity: String },
}

#[derive(Args)]
struct FigureArgs {
    figure: String,
    /// Last sigma_n kept in the chain of Fig4.
    #[arg(long, default_value_t = isoterm_core::lattice::DEFAULT_DEPTH)]
    depth: usize,
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Check the lattice axioms.
    Validate {
        #[command(flatten)]
        fig: FigureArgs,
        /// Also check every cover against the monoids and identities.
        #[arg(long)]
        semantic: bool,
    },
    /// Print the figure in DOT.
    Dot {
        #[command(flatten)]
        fig: FigureArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run::dispatch(cli.command);
    match out {
        Ok(o) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&o.json).expect("json output"));
            } else {
                print!("{}", o.text);
            }
            ExitCode::from(o.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::json!({ "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(run::exit_code(&e))
        }
    }
}
