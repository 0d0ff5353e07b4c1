use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use magnihom::commands::{self, Lengths, Pairs};
use magnihom::io::{read_chains, read_graph, read_metric};
use magnihom::report::Format;
use magnihom::{read_file, CliError, Outcome};
use magnihom_core::{parse_rational, Rational};

/// Exact magnitude homology of finite metric spaces and metric graphs.
#[derive(Parser)]
#[command(name = "magnihom", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "table")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Degrees {
    /// Degrees to compute (comma separated).
    #[arg(long = "n", value_delimiter = ',')]
    n: Vec<usize>,
    /// All degrees from 0 to this one.
    #[arg(long)]
    max_n: Option<usize>,
}

impl Degrees {
    fn list(&self) -> Vec<usize> {
        match self.max_n {
            Some(k) => (0..=k).collect(),
            None => self.n.clone(),
        }
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PairArgs {
    /// Endpoint pair `a,b` by label; repeatable.
    #[arg(long = "pair", value_parser = pair)]
    pairs: Vec<(String, String)>,
    /// Every ordered pair of points.
    #[arg(long)]
    all_pairs: bool,
}

impl PairArgs {
    fn pairs(&self) -> Pairs {
        if self.pairs.is_empty() {
            Pairs::All
        } else {
            Pairs::Listed(self.pairs.clone())
        }
    }
}

fn pair(s: &str) -> Result<(String, String), String> {
    match s.split_once(',') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(format!("expected `a,b`, got {s:?}")),
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Check the metric axioms.
    Validate { file: String },
    /// Lengths carried by chains of each degree.
    Spectrum {
        file: String,
        #[command(flatten)]
        degrees: Degrees,
        #[command(flatten)]
        pairs: PairArgs,
    },
    /// Magnitude homology groups.
    #[command(group = clap::ArgGroup::new("lengths").required(true).multiple(false))]
    Homology {
        file: String,
        #[command(flatten)]
        degrees: Degrees,
        /// Fixed lengths (comma separated).
        #[arg(long, value_delimiter = ',', value_parser = rational, group = "lengths")]
        length: Vec<Rational>,
        /// Every length realized by a chain of the degree in question.
        #[arg(long, group = "lengths")]
        spectrum: bool,
        #[command(flatten)]
        pairs: PairArgs,
    },
    /// The simplicial complex of points between a and b.
    ComplexA {
        file: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Highest magnitude degree whose reduced group is printed.
        #[arg(long, default_value_t = 4)]
        max_n: usize,
    },
    /// The detour graph at a length above d(a, b).
    ComplexB {
        file: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_parser = rational)]
        length: Rational,
    },
    /// Smoothness spectral sequence at one length.
    Spectral {
        file: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_parser = rational)]
        length: Rational,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// Page to print; default is the stable one.
        #[arg(long)]
        page: Option<usize>,
    },
    /// Cross-check direct homology against the simplicial and spectral models.
    Oracles {
        file: String,
        #[command(flatten)]
        pairs: PairArgs,
        /// Top degree for the spectral comparison.
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// Seeded random metric spaces with integer distances.
    Corpus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![4, 5, 6])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
    },
    /// Metric graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Scope {
    AllVertices,
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Distance between two points (`label` or `e<k>:<t>`).
    Distance { graph: String, p: String, q: String },
    /// Every geodesic between two points.
    Geodesics { graph: String, p: String, q: String },
    /// Connected components of the geodesic space and rank of H_2.
    Pi0 { graph: String, p: String, q: String },
    /// Intersection number of a chain list with a reference geodesic.
    NuF {
        graph: String,
        /// JSON list of `{coefficient, points}` terms.
        #[arg(long)]
        chains: String,
        /// Points the reference geodesic must pass through.
        #[arg(long, value_delimiter = ',')]
        via: Vec<String>,
    },
    /// Look for two geodesics that agree up to a time and then split.
    Nonbranching {
        graph: String,
        /// Pair `p,q` to check; repeatable.
        #[arg(long = "pair", value_parser = pair, conflicts_with = "scope")]
        pairs: Vec<(String, String)>,
        /// `all-vertices` checks every vertex pair (the default without --pair).
        #[arg(long = "pairs", value_enum)]
        scope: Option<Scope>,
    },
    /// Check that geodesics between points between a and b are unique.
    Unique {
        graph: String,
        a: String,
        b: String,
        /// Probe points (comma separated); default is every vertex.
        #[arg(long, value_delimiter = ',')]
        probes: Vec<String>,
    },
    /// Rank of degree 2q homology over tuples of anchor points.
    GammaRank {
        graph: String,
        #[arg(long, value_parser = rational)]
        length: Rational,
        #[arg(long)]
        q: usize,
        /// Anchor points (comma separated); default is every vertex.
        #[arg(long, value_delimiter = ',')]
        anchors: Vec<String>,
        /// Fix the first point of every tuple.
        #[arg(long)]
        start: Option<String>,
    },
}

fn run(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Validate { file } => commands::validate(&read_file(&file)?),
        Command::Spectrum { file, degrees, pairs } => commands::spectrum(&read_metric(&read_file(&file)?)?, &degrees.list(), &pairs.pairs()),
        Command::Homology { file, degrees, length, spectrum: _, pairs } => {
            let lengths = if length.is_empty() { Lengths::Spectrum } else { Lengths::Listed(length) };
            commands::homology_cmd(&read_metric(&read_file(&file)?)?, &degrees.list(), &lengths, &pairs.pairs())
        }
        Command::ComplexA { file, a, b, max_n } => commands::complex_a(&read_metric(&read_file(&file)?)?, &a, &b, max_n),
        Command::ComplexB { file, a, b, length } => commands::complex_b(&read_metric(&read_file(&file)?)?, &a, &b, &length),
        Command::Spectral { file, a, b, length, max_n, page } => {
            commands::spectral(&read_metric(&read_file(&file)?)?, &a, &b, &length, max_n, page)
        }
        Command::Oracles { file, pairs, max_n } => commands::oracles(&read_metric(&read_file(&file)?)?, &pairs.pairs(), max_n),
        Command::Corpus { seed, count, sizes, max_weight } => commands::corpus_cmd(seed, count, &sizes, max_weight),
        Command::Graph(g) => run_graph(g),
    }
}

fn run_graph(cmd: GraphCommand) -> Result<Outcome, CliError> {
    match cmd {
        GraphCommand::Distance { graph, p, q } => commands::graph_distance_cmd(&read_graph(&read_file(&graph)?)?, &p, &q),
        GraphCommand::Geodesics { graph, p, q } => commands::graph_geodesics(&read_graph(&read_file(&graph)?)?, &p, &q),
        GraphCommand::Pi0 { graph, p, q } => commands::graph_pi0(&read_graph(&read_file(&graph)?)?, &p, &q),
        GraphCommand::NuF { graph, chains, via } => {
            let g = read_graph(&read_file(&graph)?)?;
            let gamma = read_chains(&read_file(&chains)?, &g)?;
            commands::graph_nu_f(&g, &gamma, &via)
        }
        GraphCommand::Nonbranching { graph, pairs, scope: _ } => commands::graph_nonbranching(&read_graph(&read_file(&graph)?)?, &pairs),
        GraphCommand::Unique { graph, a, b, probes } => commands::graph_unique(&read_graph(&read_file(&graph)?)?, &a, &b, &probes),
        GraphCommand::GammaRank { graph, length, q, anchors, start } => {
            commands::graph_gamma_rank(&read_graph(&read_file(&graph)?)?, &length, q, &anchors, start.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
