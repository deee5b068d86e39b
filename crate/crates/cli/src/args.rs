use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Exact tests for separable, entangled and signaling joint stochastic choice.
///
/// DM numbers, menu numbers and rule numbers on the command line are 1-based;
/// indices inside JSON files are 0-based.
#[derive(Debug, Parser)]
#[command(name = "sepchoice", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a rule or space file and report its shape.
    Validate(ValidateArgs),
    /// Classify a rule (exit 0 separable, 3 entangled, 4 signaling, 5 restricted violation).
    Check(CheckArgs),
    /// Correlators and CHSH expressions of a two-menu binary rule (exit 3 if violated).
    Chsh(ChshArgs),
    /// H-representation of one DM's (restricted) type-matrix cone as JSON.
    Hrep(HrepArgs),
    /// Emit a named example rule as JSON.
    Generate(GenerateArgs),
    /// Re-verify a saved certificate or report against a rule file (exit 6 if rejected).
    Certify(CertifyArgs),
    /// Run the randomized equivalence checks on a fresh corpus.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub file: PathBuf,
    /// Admissible rules for one DM, e.g. `1:1,3,4` (overrides the file's `allowed`).
    #[arg(long, value_name = "DM:RULES")]
    pub allowed: Vec<String>,
    /// Always include the CHSH section; fails on non two-menu binary spaces.
    #[arg(long)]
    pub chsh: bool,
    /// Also test whether the rule extends to N replicas of the second DM.
    #[arg(long, value_name = "N")]
    pub extension_k: Option<usize>,
    /// Compare the average of the virtual rules instead of each one.
    #[arg(long, requires = "extension_k")]
    pub avg: bool,
    /// Permit --extension-k above 4.
    #[arg(long)]
    pub allow_large_k: bool,
    /// Swap the two positions of a menu when pairing for correlators, e.g. `2:1`.
    #[arg(long, value_name = "DM:MENU")]
    pub flip: Vec<String>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Include wall-clock timings (makes output nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct ChshArgs {
    pub file: PathBuf,
    #[arg(long, value_name = "DM:MENU")]
    pub flip: Vec<String>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct HrepArgs {
    /// Space file or rule file.
    pub file: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub dm: usize,
    /// Admissible rules, e.g. `1,3,4`.
    #[arg(long, value_name = "RULES")]
    pub allowed: Option<String>,
    /// One row per facet instead of the comparable form with all sparsest rows.
    #[arg(long)]
    pub irredundant: bool,
    /// Abort if the double description exceeds this many rays.
    #[arg(long, default_value_t = sepchoice::cone::DEFAULT_RAY_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub scenario: Scenario,
}

#[derive(Debug, Subcommand)]
pub enum Scenario {
    /// Correlated rule: alpha on coordinated cells, 1/2 - alpha elsewhere.
    Table1 {
        #[arg(long)]
        alpha: String,
    },
    /// Every choice path equally likely.
    Uniform,
    /// Independent DMs; one --pcr per DM listing probabilities over (menu, alternative) pairs.
    Product {
        #[arg(long, value_name = "P,P,...")]
        pcr: Vec<String>,
        /// Space file (default: two DMs facing {x,w} and {y,z}).
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Mixture of joint deterministic rules, e.g. `--weight 1,1=1/2`.
    Mixture {
        #[arg(long, value_name = "RULES=P")]
        weight: Vec<String>,
        #[arg(long)]
        space: Option<PathBuf>,
    },
    /// Uniform rule with the first DM restricted to rules 1, 3 and 4.
    Dominance,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub rule: PathBuf,
    /// Output of `check --json`, or a bare classification object.
    pub certificate: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}
