use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;

#[derive(Parser, Debug)]
#[command(name = "unipotent-lab", version, about = "Exact computations with unipotent representations, filtrations and Massey products")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file with a `[limits]` table.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Append wall-clock time to the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Options that only affect presentation and are left out of the input echo.
pub const GLOBAL_VALUED: [&str; 3] = ["--format", "--threads", "--config"];
pub const GLOBAL_FLAGS: [&str; 1] = ["--timings"];

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Truncated Magnus expansion of a word.
    Magnus(MagnusArgs),
    /// Membership of a word in a filtration term of the free group.
    Filtration(FiltrationArgs),
    /// Separating representation for a word outside a filtration term.
    Witness(FiltrationArgs),
    /// Filtration series of a finite group.
    Series(SeriesArgs),
    /// Homomorphisms from a finitely presented group to a finite group.
    Homs(HomsArgs),
    /// Upper unitriangular A with A B A^-1 equal to a power of B.
    Conjugator(ConjugatorArgs),
    /// Order, exponent and generators of a group.
    Family(FamilyArgs),
    /// Separating representation for one element of a family group.
    Separate(SeparateArgs),
    /// Kernel n-unipotent property on a finite quotient of a family.
    KernelVerify(KernelVerifyArgs),
    /// Massey product verdict from the representation search.
    Massey(MasseyArgs),
    /// Representation search against the cochain enumeration.
    CrossCheck(MasseyArgs),
    /// Minimal embeddings and power-character representations.
    Embed(EmbedArgs),
    /// Counterexample groups with many generators.
    Appendix {
        #[command(subcommand)]
        action: AppendixAction,
    },
    /// Inclusions between the p-central and p-Zassenhaus series.
    Compare(CompareArgs),
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Magnus(_) => "magnus",
            Command::Filtration(_) => "filtration",
            Command::Witness(_) => "witness",
            Command::Series(_) => "series",
            Command::Homs(_) => "homs",
            Command::Conjugator(_) => "conjugator",
            Command::Family(_) => "family",
            Command::Separate(_) => "separate",
            Command::KernelVerify(_) => "kernel-verify",
            Command::Massey(_) => "massey",
            Command::CrossCheck(_) => "cross-check",
            Command::Embed(_) => "embed",
            Command::Appendix { .. } => "appendix",
            Command::Compare(_) => "compare",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    LowerCentral,
    Zassenhaus,
    PCentral,
}

#[derive(Args, Debug)]
pub struct MagnusArgs {
    #[arg(long)]
    pub word: String,
    /// Rank of the free group (default: largest generator in the word).
    #[arg(long)]
    pub rank: Option<usize>,
    /// Coefficient ring: `Z`, `Fp:3` or `Zmod:3^2`.
    #[arg(long, default_value = "Z")]
    pub ring: String,
    /// Truncation degree.
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
}

#[derive(Args, Debug)]
pub struct FiltrationArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Prime, required for zassenhaus and p-central.
    #[arg(long)]
    pub p: Option<u64>,
    /// Filtration level.
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// Group descriptor, e.g. `u3f2`, `abelian:2x4`, `mpks:p=3,k=1,s=1`.
    #[arg(long)]
    pub group: String,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Prime (default: the prime of the group).
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 8)]
    pub max_level: usize,
}

#[derive(Args, Debug)]
pub struct HomsArgs {
    /// Target group descriptor.
    #[arg(long)]
    pub target: String,
    /// Presentation file: `rank N` then one relator per line.
    #[arg(long, conflicts_with_all = ["rank", "relator"])]
    pub presentation: Option<PathBuf>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Relator word; repeatable.
    #[arg(long)]
    pub relator: Vec<String>,
    /// List the homomorphisms as generator images.
    #[arg(long)]
    pub list: bool,
}

#[derive(Args, Debug)]
pub struct ConjugatorArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub s: u32,
    /// `power:K` (B^(1+p^K)), `negpower:K` (B^-(1+2^K)) or `inverse`.
    #[arg(long)]
    pub target: String,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// Group or family descriptor.
    #[arg(long)]
    pub desc: String,
}

#[derive(Args, Debug)]
pub struct SeparateArgs {
    /// Family descriptor.
    #[arg(long)]
    pub family: String,
    /// Element label as printed by `family`, e.g. `(1,0;2)`.
    #[arg(long)]
    pub element: String,
}

#[derive(Args, Debug)]
pub struct KernelVerifyArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct MasseyArgs {
    #[arg(long)]
    pub group: String,
    /// Comma-separated characters: `id` (1 on every generator) or
    /// colon-separated values on the generators, e.g. `1:0`.
    #[arg(long)]
    pub alphas: String,
    /// Number of characters.
    #[arg(long)]
    pub n: usize,
    /// Prime (default: the prime of the group).
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmbedKind {
    Cyclic,
    Mp3,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    /// Minimal embedding source.
    #[arg(long, value_enum, required_unless_present = "case", conflicts_with = "case")]
    pub kind: Option<EmbedKind>,
    /// Power-character case 0, 1 or 2.
    #[arg(long)]
    pub case: Option<u8>,
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub s: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Subcommand, Debug)]
pub enum AppendixAction {
    /// Decide whether the instance violates the kernel n-unipotent property.
    Verify(AppendixArgs),
}

#[derive(Args, Debug)]
pub struct AppendixArgs {
    #[arg(long)]
    pub p: u64,
    /// Number of generators.
    #[arg(long = "N")]
    pub big_n: usize,
    /// Target group descriptor; repeatable.
    #[arg(long, required = true)]
    pub target: Vec<String>,
    /// Level of the kernel property.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long)]
    pub group: String,
    /// Prime (default: the prime of the group).
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 4)]
    pub max_level: usize,
    /// Also place the kernel filtration between the two series.
    #[arg(long)]
    pub kernel: bool,
}
