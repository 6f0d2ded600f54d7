//! Command-line grammar.

use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use etaspec_core::oracle::Suite;
use etaspec_core::{BranchSign, SpinMode, Validity};

#[derive(Debug, Parser)]
#[command(
    name = "etaspec",
    version,
    about = "Relativistic hydrogen energies and radial wavefunctions from the coupling-function Klein-Gordon equation"
)]
pub struct Cli {
    /// JSON constants document (keys alpha, electron_rest_energy_eV, hbar_c_eV_nm)
    #[arg(long, global = true, env = "ETASPEC_CONSTANTS", value_name = "PATH")]
    pub constants: Option<PathBuf>,

    /// Sign in front of the square root in eta
    #[arg(long, global = true, value_enum, default_value_t = BranchArg::Sommerfeld)]
    pub branch: BranchArg,

    /// Output format; each subcommand has its own default
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Off admits kappa > 0 states with no radial nodes (flagged non-Dirac)
    #[arg(long, global = true, value_enum, default_value_t = Toggle::On)]
    pub strict_validity: Toggle,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coupling function eta and its identity residual
    Eta {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// l for kg0, kappa for kg1
        #[arg(long, allow_negative_numbers = true)]
        angular: i32,
    },
    /// Energy of a single state
    Energy {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, value_enum, default_value_t = SourceArg::ClosedForm)]
        source: SourceArg,
    },
    /// Energies of every state in a range of principal quantum numbers
    Table {
        /// Spin mode; both when omitted
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Principal quantum numbers, e.g. 1..3 or 2
        #[arg(long, default_value = "1..3", value_parser = parse_range)]
        n: RangeInclusive<u32>,
        #[arg(long, value_enum, default_value_t = SourceArg::ClosedForm)]
        source: SourceArg,
    },
    /// Transitions between every pair of states in a range
    Lines {
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, default_value = "1..3", value_parser = parse_range)]
        n: RangeInclusive<u32>,
    },
    /// Sampled normalized radial function R(r), r in units of hbar/m0c
    Wavefunction {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Outer radius in units of hbar/m0c; 20 decay lengths when omitted
        #[arg(long)]
        rmax: Option<f64>,
    },
    /// Check closed forms against the shooting oracle
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Quick)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// l for kg0, kappa for kg1
    #[arg(long, visible_aliases = ["l", "kappa"], allow_negative_numbers = true)]
    pub angular: i32,
    /// Number of radial nodes
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    pub nr: Option<u32>,
    /// Principal quantum number
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Kg0,
    Kg1,
}

impl From<ModeArg> for SpinMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Kg0 => SpinMode::Spinless,
            ModeArg::Kg1 => SpinMode::SpinHalf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Sommerfeld,
    Hydrino,
}

impl From<BranchArg> for BranchSign {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Sommerfeld => BranchSign::Sommerfeld,
            BranchArg::Hydrino => BranchSign::Hydrino,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

impl From<Toggle> for Validity {
    fn from(t: Toggle) -> Self {
        match t {
            Toggle::On => Validity::Strict,
            Toggle::Off => Validity::Permissive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    ClosedForm,
    Shooting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Quick,
    Full,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Quick => Suite::Quick,
            SuiteArg::Full => Suite::Full,
        }
    }
}

/// "a..b" (inclusive) or a single "a"; both ends at least 1.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u32>, String> {
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (text, text),
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|e| format!("bad bound {s:?}: {e}"))
    };
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if lo == 0 || hi < lo {
        return Err(format!("need 1 <= start <= end, got {lo}..{hi}"));
    }
    Ok(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..3"), Ok(1..=3));
        assert_eq!(parse_range("2..=4"), Ok(2..=4));
        assert_eq!(parse_range("5"), Ok(5..=5));
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("a..2").is_err());
    }

    #[test]
    fn negative_kappa_parses() {
        let cli = Cli::try_parse_from([
            "etaspec", "energy", "--mode", "kg1", "--kappa", "-2", "--n", "3",
        ])
        .unwrap();
        match cli.command {
            Command::Energy { state, .. } => {
                assert_eq!(state.angular, -2);
                assert_eq!(state.n, Some(3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nr_and_n_are_exclusive() {
        assert!(Cli::try_parse_from([
            "etaspec", "energy", "--mode", "kg0", "--l", "0", "--nr", "0", "--n", "1"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["etaspec", "energy", "--mode", "kg0", "--l", "0"]).is_err());
    }
}
