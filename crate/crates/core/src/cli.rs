use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, Read};
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use triadic::analysis::{self, WalkMode};
use triadic::bigraph::BipartiteGraph;
use triadic::census::{full_census, simple_census, structural_census};
use triadic::instrument::{assess, Panel};
use triadic::wedges::{self, Category, Congruence, Formulation, WedgeScheme};
use triadic::{datasets, dynamics, nullmodels, Error, Fraction};

/// Triadic analysis of affiliation (actor-event) networks.
///
/// Input networks are CSV (or TSV) with columns `actor,event[,time]`; times
/// are integers or YYYY-MM-DD dates. Use `-` for standard input, or
/// `--dataset NAME` for a bundled network.
///
/// Exit codes: 0 success, 2 usage error, 3 data error, 4 undefined
/// statistic. Errors are written to standard error as
/// `error[usage|data|undefined]: message`.
#[derive(Parser, Debug)]
#[command(name = "triadic", version)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Attendance CSV, or `-` for standard input.
    #[arg(conflicts_with = "dataset", required_unless_present = "dataset")]
    path: Option<PathBuf>,

    /// Use a bundled dataset instead of a file (see `datasets list`).
    #[arg(long)]
    dataset: Option<String>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Output {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CensusFormat {
    Full,
    Structural,
    Simple,
    Matrix,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Statistic {
    Classical,
    Opsahl,
    Exclusive,
    Custom,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Level {
    Global,
    Local,
    WedgeDependent,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CategoryArg {
    All,
    Injective,
    Induced,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CongruenceArg {
    None,
    Structural,
    Actor,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormulationArg {
    Rate,
    Ratio,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Bipartite,
    Projection,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    /// Named coefficient, or `custom` to pick category and congruence.
    #[arg(long, value_enum, default_value = "classical")]
    statistic: Statistic,

    /// Maps counted as wedges (custom only).
    #[arg(long, value_enum)]
    category: Option<CategoryArg>,

    /// Which wedges are identified (custom only).
    #[arg(long, value_enum)]
    congruence: Option<CongruenceArg>,

    /// Closed wedges over wedges (`rate`) or alcoves over wedges (`ratio`).
    #[arg(long, value_enum, default_value = "rate")]
    formulation: FormulationArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counts and degree sequences (JSON).
    Summary {
        #[command(flatten)]
        input: Input,
    },
    /// Triad census. CSV schemas: full `mu1,mu2,mu3,w,index,count` in
    /// partition-index order; structural `x,y,count`; simple `s0,s1,s2,s3`;
    /// matrix `mu,w0..wK` with one row per partition.
    Census {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "full")]
        format: CensusFormat,
        #[arg(long, value_enum, default_value = "csv")]
        output: Output,
    },
    /// Clustering coefficients. Global prints one number; local prints CSV
    /// `actor,value`; wedge-dependent prints CSV `wedges,actors,mean`.
    /// Undefined values print as `undefined`.
    Clustering {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, value_enum, default_value = "global")]
        level: Level,
        /// Print exact fractions such as `7/8`.
        #[arg(long)]
        exact: bool,
    },
    /// Constraint of each actor by each projection neighbor, CSV
    /// `actor,neighbor,value`.
    Constraint {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        exact: bool,
    },
    /// Dynamic triadic closure; needs a time column. Prints one number or
    /// `undefined`.
    Dynamic {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        exact: bool,
    },
    /// Weak-tie probability by wedge strength, CSV `s,triples,weak,probability`
    /// (plus `shared_mean` with `--shared`).
    Stc {
        #[command(flatten)]
        input: Input,
        /// Largest strength reported.
        #[arg(long)]
        max_s: Option<u64>,
        /// Add the mean number of events shared by the wedge ends.
        #[arg(long)]
        shared: bool,
    },
    /// Walk or eigenvector centrality, CSV `actor,score`. Without flags,
    /// prints unit-normalized walk counts up to length `--ell`.
    Centrality {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        ell: u32,
        /// Print eigenvector scores minus `ell`-walk scores.
        #[arg(long, conflicts_with = "eigen")]
        corrected: bool,
        /// Print eigenvector scores.
        #[arg(long)]
        eigen: bool,
        #[arg(long, value_enum, default_value = "bipartite")]
        mode: ModeArg,
    },
    /// Mean and population standard deviation of the global coefficient over
    /// degree-preserving random networks, JSON `{mean, std, undefined_draws}`.
    Nullmodel {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        /// Swap attempts per sample (default: 10 per attendance).
        #[arg(long)]
        burn_in: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Stability, validity, distinguishability, and discriminability from a
    /// panel CSV `subject,statistic,period,value`. CSV output schema
    /// `assessment,statistic,other,value,n,dropped`.
    Instrument {
        panel: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        output: Output,
    },
    /// Bundled datasets.
    Datasets {
        #[command(subcommand)]
        action: DatasetAction,
    },
}

#[derive(Subcommand, Debug)]
enum DatasetAction {
    /// Names and descriptions.
    List,
    /// Print a bundled dataset as CSV.
    Show { name: String },
    /// Print the complete bipartite graph K_{n,m} as CSV.
    Biclique { n: usize, m: usize },
}

#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// Printed value of a statistic that was undefined.
#[derive(Debug)]
struct Undefined(Error);

impl fmt::Display for Undefined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::error::Error for Undefined {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

fn classify(err: &anyhow::Error) -> (i32, &'static str) {
    for cause in err.chain() {
        if cause.is::<Usage>() {
            return (2, "usage");
        }
        if cause.is::<Undefined>() {
            return (4, "undefined");
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Undefined(_) => (4, "undefined"),
                Error::InvalidArgument(_) => (2, "usage"),
                _ => (3, "data"),
            };
        }
    }
    (3, "data")
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 2 {
                eprint!("error[usage]: {e}");
            } else {
                print!("{e}");
            }
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error[usage]: --threads must be positive");
            return 2;
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(cli.command) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            let (code, kind) = classify(&e);
            if code == 4 {
                println!("undefined");
            }
            eprintln!("error[{kind}]: {e:#}");
            code
        }
    }
}

fn load(input: &Input) -> anyhow::Result<BipartiteGraph> {
    if let Some(name) = &input.dataset {
        if datasets::find(name).is_none() {
            return Err(usage(format!("no bundled dataset `{name}` (see `datasets list`)")));
        }
        return Ok(datasets::load(name)?);
    }
    let path = input.path.as_ref().expect("clap requires path or dataset");
    let (g, _) = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        BipartiteGraph::read_csv(buf.as_slice())?
    } else {
        let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        BipartiteGraph::read_csv(f).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(g)
}

impl SchemeArgs {
    fn scheme(&self) -> anyhow::Result<WedgeScheme> {
        let formulation = match self.formulation {
            FormulationArg::Rate => Formulation::ClosureRate,
            FormulationArg::Ratio => Formulation::AlcoveRatio,
        };
        let named = match self.statistic {
            Statistic::Classical => Some(WedgeScheme::classical()),
            Statistic::Opsahl => Some(WedgeScheme::opsahl()),
            Statistic::Exclusive => Some(WedgeScheme::exclusive()),
            Statistic::Custom => None,
        };
        if let Some(s) = named {
            if self.category.is_some() || self.congruence.is_some() {
                return Err(usage("--category and --congruence need --statistic custom"));
            }
            return Ok(s.with_formulation(formulation));
        }
        let (Some(cat), Some(con)) = (self.category, self.congruence) else {
            return Err(usage("--statistic custom needs --category and --congruence"));
        };
        let category = match cat {
            CategoryArg::All => Category::All,
            CategoryArg::Injective => Category::Injective,
            CategoryArg::Induced => Category::Induced,
        };
        let congruence = match con {
            CongruenceArg::None => Congruence::None,
            CongruenceArg::Structural => Congruence::Structural,
            CongruenceArg::Actor => Congruence::Actor,
        };
        Ok(WedgeScheme::new(category, congruence, formulation))
    }
}

fn number(v: Fraction, exact: bool) -> String {
    if exact {
        v.to_string()
    } else {
        v.to_f64().to_string()
    }
}

fn cell(v: triadic::Result<Fraction>, exact: bool) -> anyhow::Result<String> {
    match v {
        Ok(v) => Ok(number(v, exact)),
        Err(e) if e.is_undefined() => Ok("undefined".into()),
        Err(e) => Err(e.into()),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn single(v: triadic::Result<Fraction>, exact: bool) -> anyhow::Result<String> {
    match v {
        Ok(v) => Ok(format!("{}\n", number(v, exact))),
        Err(e) if e.is_undefined() => Err(anyhow!(Undefined(e))),
        Err(e) => Err(e.into()),
    }
}

fn execute(cmd: Command) -> anyhow::Result<String> {
    match cmd {
        Command::Summary { input } => {
            let g = load(&input)?;
            Ok(serde_json::to_string_pretty(&g.summary())? + "\n")
        }
        Command::Census { input, format, output } => {
            let g = load(&input)?;
            let full = full_census(&g)?;
            let out = match (format, output) {
                (CensusFormat::Full, Output::Json) => serde_json::to_string_pretty(&full)?,
                (CensusFormat::Full, Output::Csv) => {
                    let mut s = String::from("mu1,mu2,mu3,w,index,count\n");
                    for (c, n) in full.entries() {
                        let (index, _) = c.export_key();
                        s.push_str(&format!("{},{},{},{},{index},{n}\n", c.mu[0], c.mu[1], c.mu[2], c.w));
                    }
                    s
                }
                (CensusFormat::Structural, Output::Json) => {
                    serde_json::to_string_pretty(&structural_census(&full))?
                }
                (CensusFormat::Structural, Output::Csv) => {
                    let t = structural_census(&full);
                    let mut s = String::from("x,y,count\n");
                    for x in 0..4 {
                        for y in 0..2 {
                            s.push_str(&format!("{x},{y},{}\n", t.get(x, y)));
                        }
                    }
                    s
                }
                (CensusFormat::Simple, Output::Json) => serde_json::to_string(&simple_census(&full))?,
                (CensusFormat::Simple, Output::Csv) => simple_census(&full).to_string(),
                (CensusFormat::Matrix, Output::Csv) => full.to_matrix().to_csv(),
                (CensusFormat::Matrix, Output::Json) => {
                    let m = full.to_matrix();
                    let rows: Vec<_> = m
                        .partitions
                        .iter()
                        .zip(&m.counts)
                        .map(|(mu, c)| json!({ "mu": mu, "counts": c }))
                        .collect();
                    serde_json::to_string_pretty(&rows)?
                }
            };
            Ok(if out.ends_with('\n') { out } else { out + "\n" })
        }
        Command::Clustering {
            input,
            scheme,
            level,
            exact,
        } => {
            let scheme = scheme.scheme()?;
            let g = load(&input)?;
            match level {
                Level::Global => single(wedges::global_cc(&g, scheme), exact),
                Level::Local => {
                    let mut s = String::from("actor,value\n");
                    for (a, v) in g.actor_ids().iter().zip(wedges::local_ccs(&g, scheme)) {
                        s.push_str(&format!("{},{}\n", csv_field(a), cell(v, exact)?));
                    }
                    Ok(s)
                }
                Level::WedgeDependent => {
                    let mut s = String::from("wedges,actors,mean\n");
                    for (ell, v) in wedges::wedge_dependent_cc(&g, scheme) {
                        s.push_str(&format!("{ell},{},{}\n", v.count, v.mean));
                    }
                    Ok(s)
                }
            }
        }
        Command::Constraint { input, scheme, exact } => {
            let scheme = scheme.scheme()?;
            let g = load(&input)?;
            let proj = triadic::Projection::new(&g);
            let mut s = String::from("actor,neighbor,value\n");
            for i in 0..g.n_actors() {
                for (j, _) in proj.neighbors(i) {
                    s.push_str(&format!(
                        "{},{},{}\n",
                        csv_field(g.actor_id(i)),
                        csv_field(g.actor_id(j)),
                        cell(wedges::constraint(&g, i, j, scheme), exact)?
                    ));
                }
            }
            Ok(s)
        }
        Command::Dynamic { input, exact } => {
            let g = load(&input)?;
            single(dynamics::dynamic_closure(&g), exact)
        }
        Command::Stc { input, max_s, shared } => {
            let g = load(&input)?;
            let max_s = max_s.unwrap_or(u64::MAX);
            let profile = analysis::stc_profile(&g, max_s);
            let means = analysis::expected_shared_events(&g, max_s);
            let mut s = String::from("s,triples,weak,probability");
            s.push_str(if shared { ",shared_mean\n" } else { "\n" });
            for (k, row) in &profile {
                s.push_str(&format!("{k},{},{},{}", row.triples, row.weak_ties, row.probability.to_f64()));
                if shared {
                    s.push_str(&format!(",{}", means[k]));
                }
                s.push('\n');
            }
            Ok(s)
        }
        Command::Centrality {
            input,
            ell,
            corrected,
            eigen,
            mode,
        } => {
            if ell == 0 {
                return Err(usage("--ell must be positive"));
            }
            let mode = match mode {
                ModeArg::Bipartite => WalkMode::Bipartite,
                ModeArg::Projection => WalkMode::Projection,
            };
            let g = load(&input)?;
            let v = if corrected {
                analysis::corrected_centrality(&g, ell, mode)?
            } else if eigen {
                analysis::eigen_centrality(&g, mode)?
            } else {
                analysis::walk_centrality(&g, ell, mode)?
            };
            Ok(v.to_csv())
        }
        Command::Nullmodel {
            input,
            scheme,
            samples,
            burn_in,
            seed,
        } => {
            let scheme = scheme.scheme()?;
            if samples == 0 {
                return Err(usage("--samples must be positive"));
            }
            let g = load(&input)?;
            let burn_in = burn_in.unwrap_or_else(|| nullmodels::default_burn_in(&g));
            let summary = nullmodels::c_rand(&g, scheme, samples, burn_in, seed)?;
            Ok(serde_json::to_string(&summary)? + "\n")
        }
        Command::Instrument { panel, output } => {
            let f = File::open(&panel).with_context(|| format!("cannot open {}", panel.display()))?;
            let report = assess(&Panel::read_csv(f)?)?;
            Ok(match output {
                Output::Csv => report.to_csv(),
                Output::Json => serde_json::to_string_pretty(&report)? + "\n",
            })
        }
        Command::Datasets { action } => match action {
            DatasetAction::List => {
                let mut s = String::from("name,description\n");
                for d in datasets::DATASETS {
                    s.push_str(&format!("{},{}\n", d.name, csv_field(d.description)));
                }
                Ok(s)
            }
            DatasetAction::Show { name } => datasets::find(&name)
                .map(|d| d.csv.to_string())
                .ok_or_else(|| usage(format!("no bundled dataset `{name}`"))),
            DatasetAction::Biclique { n, m } => Ok(datasets::biclique(n, m).to_csv()),
        },
    }
}
