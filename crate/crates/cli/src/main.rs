//! `circstab` command-line front end.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Stability of polynomials on products of circular domains.
///
/// Exit status: 0 on pass or no zero found, 1 on a certified counterexample or
/// a failed check, 2 on usage, input or capacity errors.
#[derive(Parser, Debug)]
#[command(name = "circstab", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for the randomized stability search.
    #[arg(long, env = "CIRCSTAB_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    /// Random slices per variable in the stability search.
    #[arg(long, default_value_t = 200, global = true, value_parser = positive_usize)]
    pub slices: usize,
    /// Write the full report as JSON to this file.
    #[arg(long, value_name = "PATH", global = true)]
    pub json: Option<PathBuf>,
    /// Write zeros as CSV (re,im,modulus) to this file, where the command produces zeros.
    #[arg(long, value_name = "PATH", global = true)]
    pub csv: Option<PathBuf>,
}

/// Operator given as a JSON file or as a built-in.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct OperatorSource {
    /// Operator JSON file: {"kappa": [...], "action": [{"alpha": [...], "image": <poly>}, ...]}.
    #[arg(long, value_name = "PATH")]
    pub op: Option<PathBuf>,
    /// Built-in operator: identity | derivative:I | scaling:S1,S2,... | asano:I,J | map |
    /// edge:I,J,COUPLING | lieb-sokal (variable indices start at 1).
    #[arg(long, value_name = "SPEC")]
    pub builtin: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search for a zero of a polynomial inside a product of domains.
    Stability {
        /// Polynomial JSON file: {"nvars": n, "terms": [{"exp": [...], "coef": [re, im]}, ...]}.
        #[arg(long, value_name = "PATH")]
        poly: PathBuf,
        /// Domain: halfplane:THETA | disc[:RE,IM,R] | exterior[:RE,IM,R]; give once for all
        /// variables or once per variable.
        #[arg(long, value_name = "DOMAIN", required = true)]
        domain: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the symbol of a linear operator.
    Symbol {
        #[command(flatten)]
        source: OperatorSource,
        /// Truncation degree for built-ins, e.g. 1,1,2 (defaults to the operator's own).
        #[arg(long, value_name = "K1,K2,...")]
        kappa: Option<String>,
        #[arg(long, value_enum, default_value_t = SymbolChoice::Halfplane)]
        kind: SymbolChoice,
        /// Domains for the general symbol (catalog maps to the upper half-plane).
        #[arg(long, value_name = "DOMAIN")]
        domain: Vec<String>,
        /// Truncation order for the transcendental symbols.
        #[arg(long, default_value_t = 4)]
        order: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Gather evidence on whether an operator preserves stability on a domain product.
    Classify {
        #[command(flatten)]
        source: OperatorSource,
        #[arg(long, value_name = "K1,K2,...")]
        kappa: Option<String>,
        #[arg(long, value_name = "DOMAIN", required = true)]
        domain: Vec<String>,
        /// For built-ins: check the truncations κ = (2,..), (4,..), (8,..) instead of one κ.
        #[arg(long)]
        ladder: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Catalog Möbius map between two domains, optionally transporting a polynomial.
    Moebius {
        #[arg(long, value_name = "DOMAIN")]
        from: String,
        #[arg(long, value_name = "DOMAIN")]
        to: String,
        /// Points to map, as RE,IM.
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        point: Vec<String>,
        /// Polynomial to transport by Φ_κ with the map applied in every variable.
        #[arg(long, value_name = "PATH")]
        poly: Option<PathBuf>,
        #[arg(long, value_name = "K1,K2,...")]
        kappa: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Compose two 2n-variable polynomials.
    Compose {
        #[arg(long, value_name = "PATH")]
        f: PathBuf,
        #[arg(long, value_name = "PATH")]
        g: PathBuf,
        #[arg(long, value_name = "K1,...,Kn")]
        kappa: String,
        #[arg(long, value_enum, default_value_t = Variant::Halfplane)]
        variant: Variant,
        /// Also search for zeros of the result on this domain (all 2n variables).
        #[arg(long, value_name = "DOMAIN")]
        domain: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Apolarity bracket and Grace-type checks, or a randomized campaign.
    Apolarity {
        #[arg(long, value_name = "PATH", required_unless_present = "campaign")]
        f: Option<PathBuf>,
        #[arg(long, value_name = "PATH", required_unless_present = "campaign")]
        g: Option<PathBuf>,
        #[arg(long, value_name = "K1,...,Kn", required_unless_present = "campaign")]
        kappa: Option<String>,
        /// Domains C_j for the disc form, or the half-plane for f; once or once per variable.
        #[arg(long, value_name = "DOMAIN")]
        domain: Vec<String>,
        /// Half-plane for g (half-plane form only; defaults to the one for f).
        #[arg(long, value_name = "DOMAIN")]
        domain_g: Option<String>,
        #[arg(long, value_enum, default_value_t = Sign::Constant)]
        sign: Sign,
        #[arg(long, value_enum, default_value_t = Reading::GDegree)]
        reading: Reading,
        /// Relative threshold below which the bracket counts as vanishing.
        #[arg(long, default_value_t = 1e-10, value_parser = positive_f64)]
        tol: f64,
        /// Run a randomized campaign instead of a single check.
        #[arg(long, value_enum, conflicts_with_all = ["f", "g", "kappa"])]
        campaign: Option<CampaignChoice>,
        /// Pairs to evaluate in a campaign.
        #[arg(long, default_value_t = 200)]
        pairs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Lee-Yang checks for a ferromagnetic Ising system.
    LeeYang {
        /// System JSON file: {"n": n, "J": [[...], ...]}.
        #[arg(long, value_name = "PATH")]
        system: PathBuf,
        /// Largest allowed | |root| - 1 |.
        #[arg(long, default_value_t = 1e-8, value_parser = positive_f64)]
        tol: f64,
        /// Also search for zeros of Z with every |x_i| > 1.
        #[arg(long)]
        exterior: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Heilmann-Lieb check of a weighted graph's matching polynomial.
    Matching {
        /// Graph JSON file: {"n": n, "edges": [[i, j, weight], ...]}.
        #[arg(long, value_name = "PATH")]
        graph: PathBuf,
        /// Largest allowed |Re| of the diagonal roots.
        #[arg(long, default_value_t = 1e-8, value_parser = positive_f64)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Circle-theorem product for Hermitian couplings with |a_ij| <= 1.
    Circle {
        /// Couplings JSON file: {"n": n, "a": [[[re, im], ...], ...]}.
        #[arg(long, value_name = "PATH")]
        couplings: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SymbolChoice {
    Halfplane,
    Disc,
    General,
    TranscendentalMinus,
    TranscendentalPlus,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Variant {
    Halfplane,
    Disc,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Sign {
    Constant,
    PerTerm,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Reading {
    FDegree,
    GDegree,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum CampaignChoice {
    DiscCentred,
    Disc,
    HalfPlane,
    HalfPlaneEqual,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(x) if x > 0 => Ok(x),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Stability { poly, domain, common } => commands::stability(&poly, &domain, &common),
        Command::Symbol { source, kappa, kind, domain, order, common } => {
            commands::symbol(&source, kappa.as_deref(), kind, &domain, order, &common)
        }
        Command::Classify { source, kappa, domain, ladder, common } => {
            commands::classify(&source, kappa.as_deref(), &domain, ladder, &common)
        }
        Command::Moebius { from, to, point, poly, kappa, common } => {
            commands::moebius(&from, &to, &point, poly.as_deref(), kappa.as_deref(), &common)
        }
        Command::Compose { f, g, kappa, variant, domain, common } => {
            commands::compose(&f, &g, &kappa, variant, domain.as_deref(), &common)
        }
        Command::Apolarity { f, g, kappa, domain, domain_g, sign, reading, tol, campaign, pairs, common } => {
            let settings = commands::GraceSettings { sign, reading, tol };
            match campaign {
                Some(kind) => commands::campaign(kind, pairs, settings, &common),
                None => commands::apolarity(
                    f.as_deref().expect("required by clap"),
                    g.as_deref().expect("required by clap"),
                    kappa.as_deref().expect("required by clap"),
                    &domain,
                    domain_g.as_deref(),
                    settings,
                    &common,
                ),
            }
        }
        Command::LeeYang { system, tol, exterior, common } => commands::lee_yang(&system, tol, exterior, &common),
        Command::Matching { graph, tol, common } => commands::matching(&graph, tol, &common),
        Command::Circle { couplings, common } => commands::circle(&couplings, &common),
    };
    match result {
        Ok(Status::Pass) => ExitCode::from(0),
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
