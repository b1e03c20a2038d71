//! `lipgraph`: generate graph families, apply the degree-3 gadget, build the
//! cube model, plant copies in expanders, extract witnesses and certify them.
//!
//! Exit status: 0 when every requested certification passes, 2 when one
//! fails, 1 on usage, parse or I/O errors.

mod commands;
mod run;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "lipgraph", version, about = "Exact constructions and certificates for bilipschitz graph embeddings")]
pub struct Cli {
    /// Write a run manifest (arguments, parameters, input and output hashes, verdicts).
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph family member as graph JSON.
    Generate(GenerateArgs),
    /// Degree-3 gadget transform of a unit-length graph.
    Transform(TransformArgs),
    /// Coordinate model of the gadgetized Hamming cube in l1.
    #[command(name = "cube-l1")]
    CubeL1(CubeArgs),
    /// Random regular graphs and planted isometric copies.
    Expander {
        #[command(subcommand)]
        command: ExpanderCommand,
    },
    /// Kuratowski embedding of a graph metric into l_inf.
    Embed(EmbedArgs),
    /// Extract a delta-tree (diamond) or delta-semitree (Laakso) from an embedding.
    Extract(ExtractArgs),
    /// Quaternary martingale of a semitree and its divergence certificate.
    Martingale(MartingaleArgs),
    /// Check stored artifacts.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// Bundle the certifications available for one graph.
    Report(ReportArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Diamond,
    Laakso,
    Hamming,
    Lattice,
    Tree3,
    BinaryTree,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recursive {
    Diamond,
    Laakso,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormArg {
    L1,
    L2,
    Linf,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Level (diamond, laakso), dimension (hamming, lattice) or depth (trees).
    #[arg(long)]
    pub level: usize,
    /// Largest coordinate m of the lattice {0..m}^n.
    #[arg(long, default_value_t = 1)]
    pub side: usize,
    #[arg(long, default_value = "-")]
    pub out: String,
    /// Also write the inclusion map from the previous level (diamond, laakso).
    #[arg(long, value_name = "PATH")]
    pub inclusion: Option<String>,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: String,
    #[arg(long, default_value = "1")]
    pub epsilon: String,
    /// Treat the input as unit-length regardless of its stored unit.
    #[arg(long)]
    pub unweighted: bool,
    #[arg(long, default_value = "-")]
    pub out: String,
    /// Write the vertex map v -> m(v).
    #[arg(long, value_name = "PATH")]
    pub map: Option<String>,
    /// Verify the distance sandwich for every pair of original vertices.
    #[arg(long)]
    pub certify: bool,
    /// Write the sandwich report (standard output when no path is given).
    #[arg(long, value_name = "PATH")]
    pub report: Option<Option<String>>,
}

#[derive(Args, Debug)]
pub struct CubeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "1")]
    pub epsilon: String,
    #[arg(long, default_value = "-")]
    pub out: String,
    /// Check unit edges and ||x-y||_1 <= d <= 4 ||x-y||_1.
    #[arg(long)]
    pub certify: bool,
    /// Check only this many random sources against all targets.
    #[arg(long, value_name = "COUNT")]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "PATH")]
    pub report: Option<Option<String>>,
}

#[derive(Subcommand, Debug)]
pub enum ExpanderCommand {
    /// Random d-regular graph from the pairing model.
    Random(RandomArgs),
    /// Plant a copy of a graph on a separated set of a random regular graph.
    Plant(PlantArgs),
    /// Spectral and Cheeger diagnostics of a graph.
    Spectrum(SpectrumArgs),
}

#[derive(Args, Debug)]
pub struct RandomArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct PlantArgs {
    #[arg(long = "base-n")]
    pub base_n: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Graph to plant; unit length, maximum degree 3.
    #[arg(long, value_name = "PATH")]
    pub target: String,
    /// Double the base size at most this many times when no separated set exists.
    #[arg(long, default_value_t = 8)]
    pub max_doublings: usize,
    #[arg(long, default_value = "-")]
    pub out: String,
    /// Write the copy map (target vertex -> base vertex).
    #[arg(long, value_name = "PATH")]
    pub map: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub report: Option<Option<String>>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: String,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: String,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[arg(long, value_enum)]
    pub family: Recursive,
    #[arg(long)]
    pub level: usize,
    /// Point set keyed by the family's vertex IDs.
    #[arg(long, value_name = "PATH")]
    pub embedding: String,
    /// Measure the embedding in this norm instead of the stored one.
    #[arg(long, value_enum)]
    pub norm: Option<NormArg>,
    /// Rescale so the upper Lipschitz constant is 1 before extracting.
    #[arg(long)]
    pub normalize: bool,
    /// Check the extracted witness at the certificate's delta.
    #[arg(long)]
    pub certify: bool,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct MartingaleArgs {
    #[arg(long, value_name = "PATH")]
    pub semitree: String,
    /// Require exact averaging and divergence measure >= 1/2 at every step.
    #[arg(long)]
    pub certify: bool,
    /// Also write the martingale values level by level.
    #[arg(long, value_name = "PATH")]
    pub levels: Option<String>,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Structural check of a witness document.
    Witness(VerifyWitnessArgs),
    /// Distortion of a vertex map between two graphs.
    Distortion(VerifyDistortionArgs),
    /// Distortion of a point set as an embedding of a graph.
    Embedding(VerifyEmbeddingArgs),
    /// Unit edges and ||x-y||_1 <= d <= 4 ||x-y||_1 for a stored cube model.
    #[command(name = "cube-l1")]
    CubeL1(VerifyCubeArgs),
}

#[derive(Args, Debug)]
pub struct VerifyCubeArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: String,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct VerifyWitnessArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: String,
    /// Check at this delta instead of the stored certificate's.
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct VerifyDistortionArgs {
    #[arg(long, value_name = "PATH")]
    pub map: String,
    #[arg(long, value_name = "PATH")]
    pub source: String,
    #[arg(long, value_name = "PATH")]
    pub target: String,
    /// Fail unless the distortion is at most this bound.
    #[arg(long)]
    pub max: Option<String>,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct VerifyEmbeddingArgs {
    #[arg(long, value_name = "PATH")]
    pub points: String,
    #[arg(long, value_name = "PATH")]
    pub graph: String,
    #[arg(long)]
    pub max: Option<String>,
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: String,
    #[arg(long, default_value = "1")]
    pub epsilon: String,
    #[arg(long, default_value = "-")]
    pub out: String,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli, argv[1..].to_vec()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
