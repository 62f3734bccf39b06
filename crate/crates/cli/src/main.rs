use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hdgm::export::{export, Format, Style};
use hdgm::ingest::{ingest_csv, ColumnKind};
use hdgm::simulate::{simulate_mvn, SimModel};
use hdgm::{chordal, layout, report, stats, Dataset, GraphModel, Measure};

#[derive(Parser)]
#[command(name = "hdgm", version, about = "Graphical model selection for high-dimensional data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Lr,
    Aic,
    Bic,
}

impl MeasureArg {
    fn measure(self) -> Measure {
        match self {
            MeasureArg::Lr => Measure::Lr,
            MeasureArg::Aic => Measure::Aic,
            MeasureArg::Bic => Measure::Bic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimArg {
    Independent,
    Chain,
    Forest,
    Chordal,
}

#[derive(Args)]
struct DataArgs {
    /// CSV file with a header row.
    data: PathBuf,
    /// Treat the named column as discrete.
    #[arg(long = "discrete", value_name = "COLUMN")]
    discrete: Vec<String>,
    /// Treat the named column as continuous.
    #[arg(long = "continuous", value_name = "COLUMN")]
    continuous: Vec<String>,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        let mut overrides = HashMap::new();
        for c in &self.discrete {
            overrides.insert(c.clone(), ColumnKind::Discrete);
        }
        for c in &self.continuous {
            overrides.insert(c.clone(), ColumnKind::Continuous);
        }
        ingest_csv(&self.data, &overrides).with_context(|| format!("reading {}", self.data.display()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Spanning forest minimising the chosen measure.
    Minforest {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value = "bic")]
        measure: MeasureArg,
        /// Homogeneous covariance across discrete cells.
        #[arg(long)]
        homog: bool,
        /// Write the model as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forward stepwise selection of a decomposable model.
    Stepw {
        #[command(flatten)]
        data: DataArgs,
        /// Starting model (JSON); the empty model when omitted.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "bic")]
        measure: MeasureArg,
        #[arg(long)]
        homog: bool,
        /// Allow edges between components.
        #[arg(long)]
        join: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// −2·log-likelihood, AIC and BIC of a model.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        homog: bool,
        /// Print JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Structural queries on a model.
    Analyze {
        #[arg(long)]
        model: PathBuf,
        /// Degree frequency table.
        #[arg(long)]
        degree: bool,
        /// Component id of each vertex.
        #[arg(long)]
        components: bool,
        /// Distances from a vertex, or the full matrix with `all`.
        #[arg(long, value_name = "V|all")]
        shortpath: Option<String>,
        /// Vertices within RADIUS steps of V.
        #[arg(long, num_args = 2, value_names = ["V", "RADIUS"])]
        neighbourhood: Option<Vec<usize>>,
        /// Perfect sequence as JSON.
        #[arg(long)]
        perfsets: bool,
        /// Junction tree as JSON.
        #[arg(long)]
        jtree: bool,
        /// Clique generators.
        #[arg(long)]
        formula: bool,
        /// Add-eligible edges.
        #[arg(long)]
        findedges: bool,
        /// Number of parameters per edge.
        #[arg(long)]
        modeldim: bool,
    },
    /// Conditional independence test of two variables.
    Citest {
        #[command(flatten)]
        data: DataArgs,
        u: usize,
        v: usize,
        /// Conditioning vertices.
        #[arg(long, value_delimiter = ',')]
        given: Vec<usize>,
        #[arg(long)]
        homog: bool,
    },
    /// Simulate multivariate normal data with a known structure.
    Simulate {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "forest")]
        model: SimArg,
        #[arg(long, default_value_t = 0.7)]
        rho: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Write the generating model as JSON.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Time both searches on simulated data of growing size.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "100,500,1000,2000")]
        ps: Vec<usize>,
        /// Skip grid points above this size.
        #[arg(long)]
        pmax: Option<usize>,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, value_enum, default_value = "chordal")]
        model: SimArg,
        #[arg(long, default_value_t = 0.7)]
        rho: f64,
        /// Run stepw only up to this size.
        #[arg(long, default_value_t = 500)]
        stepw_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a model as DOT, JSON or SVG.
    Export {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Layout iterations for SVG.
        #[arg(long, default_value_t = 500)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Starting coordinates as a JSON array of [x, y] pairs.
        #[arg(long)]
        coords: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        highlight: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "red")]
        colours: Vec<String>,
    },
}

fn sim_model(model: SimArg, rho: f64) -> SimModel {
    match model {
        SimArg::Independent => SimModel::Independent,
        SimArg::Chain => SimModel::Chain { rho },
        SimArg::Forest => SimModel::Forest { rho },
        SimArg::Chordal => SimModel::RandomChordal,
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn load_model(path: &Path) -> Result<GraphModel> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(GraphModel::from_json(&text)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Minforest { data, measure, homog, out } => {
            let ds = data.load()?;
            let g = hdgm::min_forest(&ds, &measure.measure(), homog)?;
            if let Some(p) = out {
                write_atomic(&p, &g.to_json()?)?;
            }
            print!("{}", g.summary());
        }
        Command::Stepw { data, model, measure, homog, join, out } => {
            let ds = data.load()?;
            let g0 = match model {
                Some(p) => load_model(&p)?,
                None => hdgm::as_graphd(None, ds.p(), Some(ds.num_cat()), homog)?
                    .with_vert_names(ds.names().to_vec())?,
            };
            let g = hdgm::stepw(&g0, &ds, &measure.measure(), homog, join)?;
            if let Some(p) = out {
                write_atomic(&p, &g.to_json()?)?;
            }
            print!("{}", g.summary());
        }
        Command::Fit { data, model, homog, json } => {
            let ds = data.load()?;
            let r = hdgm::fit(&load_model(&model)?, &ds, homog)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r)?);
            } else {
                print!("{r}");
            }
        }
        Command::Analyze {
            model,
            degree,
            components,
            shortpath,
            neighbourhood,
            perfsets,
            jtree,
            formula,
            findedges,
            modeldim,
        } => {
            let g = load_model(&model)?;
            let mut any = false;
            if degree {
                any = true;
                print!("{}", report::degree_table(&g));
            }
            if components {
                any = true;
                print!("{}", report::component_table(&g));
            }
            if let Some(sp) = shortpath {
                any = true;
                if sp == "all" {
                    print!("{}", report::distance_matrix(&g.short_path_all()));
                } else {
                    let v: usize = sp.parse().context("--shortpath expects a vertex or `all`")?;
                    print!("{}", report::distance_row(&g.short_path(v)?));
                }
            }
            if let Some(nb) = neighbourhood {
                any = true;
                let labels: Vec<String>;
                let dists: Vec<String>;
                (labels, dists) = g
                    .neighbourhood(nb[0], nb[1])?
                    .into_iter()
                    .map(|(v, d)| (v.to_string(), d.to_string()))
                    .unzip();
                print!("{}", report::two_row_table(&labels, &dists));
            }
            if perfsets {
                any = true;
                match chordal::perf_sets(&g, g.num_cat().iter().any(|&k| k > 0))? {
                    Some(s) => println!("{}", serde_json::to_string_pretty(&s)?),
                    None => println!("0"),
                }
            }
            if jtree {
                any = true;
                println!("{}", serde_json::to_string_pretty(&chordal::j_tree(&g)?)?);
            }
            if formula {
                any = true;
                println!("{}", stats::model_formula(&g)?);
            }
            if findedges {
                any = true;
                let mixed = g.num_cat().iter().any(|&k| k > 0);
                for e in chordal::find_ed(&g, mixed)? {
                    println!("{} {}", e.u, e.v);
                }
            }
            if modeldim {
                any = true;
                println!("{}", serde_json::to_string_pretty(&stats::model_dim(&g, g.homog())?)?);
            }
            if !any {
                print!("{}", g.summary());
            }
        }
        Command::Citest { data, u, v, given, homog } => {
            let ds = data.load()?;
            let t = stats::ci_test(&ds, u, v, &given, homog)?;
            println!("{}", serde_json::to_string_pretty(&t)?);
        }
        Command::Simulate { p, n, model, rho, seed, out, graph_out } => {
            let sim = simulate_mvn(p, n, sim_model(model, rho), seed)?;
            write_atomic(&out, &to_csv(&sim.data)?)?;
            if let Some(g) = graph_out {
                write_atomic(&g, &sim.graph.to_json()?)?;
            }
        }
        Command::Bench { ps, pmax, n, model, rho, stepw_max, seed, out } => {
            let mut csv = String::from("p,n,minforest_seconds,stepw_seconds,peak_rss_kb\n");
            for p in ps.into_iter().filter(|&p| pmax.is_none_or(|m| p <= m)) {
                let sim = simulate_mvn(p, n, sim_model(model, rho), seed)?;
                let t = Instant::now();
                let tree = hdgm::min_forest(&sim.data, &Measure::Bic, true)?;
                let forest_s = t.elapsed().as_secs_f64();
                let stepw_s = if p <= stepw_max {
                    let t = Instant::now();
                    hdgm::stepw(&tree, &sim.data, &Measure::Bic, true, false)?;
                    format!("{:.6}", t.elapsed().as_secs_f64())
                } else {
                    String::new()
                };
                let rss = peak_rss_kb().map(|k| k.to_string()).unwrap_or_default();
                csv.push_str(&format!("{p},{n},{forest_s:.6},{stepw_s},{rss}\n"));
            }
            emit(out.as_deref(), &csv)?;
        }
        Command::Export { model, format, out, iters, seed, coords, highlight, colours } => {
            let g = load_model(&model)?;
            let style = Style { highlight, highlight_colours: colours, ..Style::default() };
            let format = match format {
                FormatArg::Dot => Format::Dot,
                FormatArg::Json => Format::Json,
                FormatArg::Svg => Format::Svg,
            };
            let start: Option<Vec<(f64, f64)>> = match coords {
                Some(p) => Some(serde_json::from_str(&std::fs::read_to_string(&p)?)?),
                None => None,
            };
            let pos = match format {
                Format::Svg => Some(layout::layout_fr(&g, iters, seed, start.as_deref())?),
                _ => None,
            };
            emit(out.as_deref(), &export(&g, pos.as_deref(), format, &style)?)?;
        }
    }
    Ok(())
}

fn to_csv(ds: &Dataset) -> Result<String> {
    let mut out = ds.names().join(",");
    out.push('\n');
    let cols: Vec<&[f64]> = ds
        .columns()
        .iter()
        .map(|c| match c {
            hdgm::Column::Continuous(x) => Ok(x.as_slice()),
            hdgm::Column::Discrete { .. } => bail!("simulated data is continuous"),
        })
        .collect::<Result<_>>()?;
    for r in 0..ds.n() {
        let row: Vec<String> = cols.iter().map(|c| format!("{}", c[r])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
