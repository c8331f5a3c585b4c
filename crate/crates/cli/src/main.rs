use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod output;

use output::{Format, UsageError};

/// Parabolic Kazhdan-Lusztig polynomials of type (D_n, A_{n-1}), cup and
/// circle diagrams, and decorated Temperley-Lieb tangles.
#[derive(Debug, Parser)]
#[command(name = "dkl", version)]
pub struct Cli {
    /// Rank n.
    #[arg(short = 'n', global = true)]
    pub n: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Cross-check against an independent computation; exit 1 on mismatch.
    #[arg(long, global = true)]
    pub oracle: bool,

    #[command(subcommand)]
    pub command: Command,
}

/// An element given as a sign string or as a reduced word.
#[derive(Debug, Clone, Args)]
pub struct ElementW {
    /// Sign sequence, e.g. "-+-+" or "|-+-+]".
    #[arg(short = 'w', allow_hyphen_values = true)]
    pub w: Option<String>,

    /// Reduced word, e.g. "0,2".
    #[arg(short = 'r', long = "word", allow_hyphen_values = true)]
    pub word: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ElementV {
    /// Sign sequence of v.
    #[arg(short = 'v', allow_hyphen_values = true)]
    pub v: Option<String>,

    /// Reduced word of v.
    #[arg(long = "v-word", allow_hyphen_values = true)]
    pub v_word: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ElementX {
    /// Sign sequence of the second element w'.
    #[arg(short = 'x', allow_hyphen_values = true)]
    pub x: Option<String>,

    /// Reduced word of w'.
    #[arg(long = "x-word", allow_hyphen_values = true)]
    pub x_word: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the sequences with their lengths and reduced words.
    Wp,
    /// Convert between a sequence and its reduced word and Young diagram.
    Word(ElementW),
    /// The KL polynomial n_{v,w}.
    Klpoly {
        #[command(flatten)]
        v: ElementV,
        #[command(flatten)]
        w: ElementW,
    },
    /// The KL basis element of w in the standard basis.
    Klbasis(ElementW),
    /// The cup diagram of w and its decorated cut.
    Cup(ElementW),
    /// Hom dimension for a pair, or the full matrix without elements.
    Homdim {
        #[command(flatten)]
        w: ElementW,
        #[command(flatten)]
        x: ElementX,
    },
    /// Graded Poincare polynomials and the endomorphism dimension.
    Poincare,
    /// The decorated tangle algebra.
    Tl {
        #[command(subcommand)]
        command: TlCommand,
    },
    /// Draw a diagram.
    Render {
        #[command(subcommand)]
        kind: RenderKind,
    },
    /// Run a verification suite: kl, homdim, commute, cellular, faithful or all.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: dkl_core::Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum TlCommand {
    /// All basis tangles.
    Basis,
    /// Dimension and cell sizes.
    Dim,
    /// Act by e_i on the diagram of w, or print the matrix of e_i.
    Act {
        #[arg(short = 'i')]
        i: usize,
        #[command(flatten)]
        w: ElementW,
        /// Print the matrix of e_i on all diagrams instead.
        #[arg(long)]
        matrix: bool,
    },
    /// Cell modules, and the matrices of e_i on them when -i is given.
    Cell {
        #[arg(short = 'i')]
        i: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RenderKind {
    /// Decorated cup diagram of w, or one given as JSON.
    Cup {
        #[command(flatten)]
        w: ElementW,
        #[arg(long)]
        json: Option<String>,
    },
    /// Generator e_i, or a tangle given as JSON.
    Tangle {
        #[arg(short = 'i')]
        i: Option<usize>,
        #[arg(long)]
        json: Option<String>,
    },
    /// Circle diagram with the cap diagram of w' over the cup diagram of w.
    Circle {
        #[command(flatten)]
        w: ElementW,
        #[command(flatten)]
        x: ElementX,
    },
}

fn parse_suite(s: &str) -> Result<dkl_core::Suite, String> {
    s.parse().map_err(|e: dkl_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => {
            // a closed pipe is not an error for a command-line filter
            let _ = writeln!(std::io::stdout(), "{}", outcome.render(cli.format));
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let e: UsageError = e;
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
