use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use dtorso::address::{fmt_set, Vertex};
use dtorso::dot::{export_dot, Highlights};
use dtorso::example4::run_example4;
use dtorso::projection::{check_local_finiteness, check_projection_walk};
use dtorso::scenario::{certificate_token, lemma_token, parse_vertex_set, run_scenario, Scenario};
use dtorso::search::{random_search, SearchConfig};
use dtorso::separation::{
    lemma421_check_with, remark_tail_check, separates_at_depths, Arena, Grid, LemmaOutcome, Modification, Targets,
};
use dtorso::{classify_adhesion, project_ray, torso_of, validate_ray, RaySpec, Torso};

/// Stdout writes that ignore a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "dtorso", version, about = "Dominated torsos of presented infinite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct GridArgs {
    /// Comma-separated truncation depths.
    #[arg(long, value_delimiter = ',')]
    depths: Option<Vec<u64>>,
    /// Copies kept per replicated pattern.
    #[arg(long)]
    reps: Option<u64>,
}

impl GridArgs {
    fn grid(&self, base: &Grid) -> Grid {
        Grid { depths: self.depths.clone().unwrap_or_else(|| base.depths.clone()), reps: self.reps.unwrap_or(base.reps) }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "K", alias = "k")]
    K,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Sep {
    #[value(name = "FS", alias = "fs")]
    Fs,
    #[value(name = "X", alias = "x")]
    X,
}

#[derive(Subcommand)]
enum Command {
    /// Check a presentation's structural invariants.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        depth: u64,
    },
    /// Print a finite truncation of G or K.
    Truncate {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: u64,
        #[arg(long, default_value_t = 3)]
        reps: u64,
        #[arg(long = "in", value_enum, default_value = "G")]
        graph: Which,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Classify the adhesion sets into A' and A''.
    Classify { file: PathBuf },
    /// Build the dominated torso K.
    Torso {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: u64,
        #[arg(long, default_value_t = 3)]
        reps: u64,
        /// Print K as a presentation.
        #[arg(long)]
        emit: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// K-project a ray.
    Project {
        file: PathBuf,
        #[arg(long, default_value = "S")]
        ray: String,
        #[arg(long, default_value_t = 12)]
        len: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Check whether F separates U from a ray (in G) or its projection (in K).
    Separate {
        file: PathBuf,
        #[arg(long = "U", default_value = "U")]
        u: String,
        #[arg(long = "F", default_value = "F")]
        f: String,
        #[arg(long, default_value = "S")]
        ray: String,
        #[arg(long = "in", value_enum, default_value = "G")]
        graph: Which,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check the separation lemma for U, S and F.
    LemmaCheck {
        file: PathBuf,
        #[arg(long = "U", default_value = "U")]
        u: String,
        #[arg(long = "F", default_value = "F")]
        f: String,
        #[arg(long, default_value = "S")]
        ray: String,
        /// Separator tested in G.
        #[arg(long = "with", value_enum, default_value = "FS")]
        with: Sep,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Check that X separates U from the tail of S after X.
    RemarkCheck {
        file: PathBuf,
        #[arg(long = "U", default_value = "U")]
        u: String,
        #[arg(long = "F", default_value = "F")]
        f: String,
        #[arg(long, default_value = "S")]
        ray: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run the built-in golden example.
    Example4 {
        #[command(flatten)]
        grid: GridArgs,
        /// Use X in place of F_S in the last assertion.
        #[arg(long)]
        use_x: bool,
        /// Write the K and G figures as DOT files into this directory.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
    },
    /// Search random presentations for X-failures.
    Search {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        /// Directory receiving one scenario file per finding.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Export a truncation as DOT with U, F and the ray highlighted.
    Dot {
        file: PathBuf,
        #[arg(long = "in", value_enum, default_value = "G")]
        graph: Which,
        #[arg(long, default_value_t = 10)]
        depth: u64,
        #[arg(long, default_value_t = 3)]
        reps: u64,
        #[arg(long = "U")]
        u: Option<String>,
        #[arg(long = "F")]
        f: Option<String>,
        #[arg(long)]
        ray: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every check of a scenario file.
    Run { file: PathBuf },
}

/// Usage and input errors exit 2; failed checks exit 1.
enum Failure {
    Usage(String),
    Check,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn check(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

struct Loaded {
    scenario: Scenario,
    torso: Torso,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let scenario = Scenario::load(path)?;
    let torso = torso_of(&scenario.presentation);
    scenario.resolve(&torso)?;
    Ok(Loaded { scenario, torso })
}

impl Loaded {
    fn set(&self, arg: &str) -> Result<BTreeSet<Vertex>, Failure> {
        if let Some(s) = self.scenario.sets.get(arg) {
            return Ok(s.clone());
        }
        let s = parse_vertex_set(arg).map_err(|e| Failure::Usage(format!("set `{arg}`: {e}")))?;
        if let Some(v) = s.iter().find(|v| !self.torso.presentation.contains(v) && !self.torso.contains(v)) {
            return Err(Failure::Usage(format!("vertex {v} is not in G or K")));
        }
        Ok(s)
    }

    fn ray(&self, arg: &str) -> Result<RaySpec, Failure> {
        let r = match self.scenario.rays.get(arg) {
            Some(r) => r.clone(),
            None if arg.trim_start().starts_with("ray ") => RaySpec::parse(arg)?,
            None => return Err(Failure::Usage(format!("no ray named `{arg}`"))),
        };
        validate_ray(&self.torso.presentation, &r)?;
        Ok(r)
    }
}

fn write_dot(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file, depth } => {
            let sc = Scenario::load(&file)?;
            match sc.presentation.validate(depth) {
                Ok(r) => out!("{}", r.to_report()),
                Err(e) => {
                    outln!("valid=false\nerror={e}");
                    return Err(Failure::Check);
                }
            }
            Ok(())
        }
        Command::Truncate { file, depth, reps, graph, dot } => {
            let l = load(&file)?;
            let t = match graph {
                Which::G => l.torso.presentation.truncate(depth, reps),
                Which::K => l.torso.truncate(depth, reps),
            };
            outln!("depth={depth}\nreps={reps}\nvertices={}\nedges={}", t.graph.vertex_count(), t.graph.edge_count());
            for v in t.graph.vertices() {
                outln!("vertex={v}");
            }
            for (a, b) in t.graph.edges() {
                outln!("edge={a} -- {b}");
            }
            if let Some(path) = dot {
                write_dot(&path, &export_dot("truncation", &t.graph, &Highlights::default()))?;
            }
            Ok(())
        }
        Command::Classify { file } => {
            let sc = Scenario::load(&file)?;
            out!("{}", classify_adhesion(&sc.presentation).to_report());
            Ok(())
        }
        Command::Torso { file, depth, reps, emit, dot } => {
            let l = load(&file)?;
            let t = &l.torso;
            let k = t.truncate(depth, reps);
            let g = t.presentation.truncate(depth, reps);
            let contracted = t.contract(&g);
            out!("{}", t.conservativity().to_report());
            outln!("depth={depth}\nreps={reps}\nK_vertices={}\nK_edges={}", k.graph.vertex_count(), k.graph.edge_count());
            outln!("contraction_matches={}", contracted.is_induced_subgraph_of(&k.graph));
            if emit {
                match t.to_presentation() {
                    Ok(p) => out!("{p}"),
                    Err(e) => outln!("presentation=unavailable ({e})"),
                }
            }
            if let Some(path) = dot {
                write_dot(&path, &export_dot("K", &k.graph, &Highlights::default()))?;
            }
            Ok(())
        }
        Command::Project { file, ray, len, grid } => {
            let l = load(&file)?;
            let grid = grid.grid(&l.scenario.grid);
            let s = l.ray(&ray)?;
            let proj = project_ray(&l.torso, &s)?;
            let terms: Vec<String> = proj.sample(len).iter().map(ToString::to_string).collect();
            outln!("projection=({}{})", terms.join(", "), if proj.seq.is_finite() { "" } else { ", ..." });
            let lf = check_local_finiteness(&proj, 64);
            outln!("local_finiteness={lf}");
            let mut ok = lf.holds();
            for &d in &grid.depths {
                match check_projection_walk(&l.torso, &proj, d, grid.reps) {
                    Ok(steps) => outln!("walk_in_K.{d}=ok steps={steps}"),
                    Err(e) => {
                        ok = false;
                        outln!("walk_in_K.{d}=broken at {} -- {}", e.0, e.1);
                    }
                }
            }
            check(ok)
        }
        Command::Separate { file, u, f, ray, graph, grid, dot } => {
            let l = load(&file)?;
            let grid = grid.grid(&l.scenario.grid);
            let (u, f, s) = (l.set(&u)?, l.set(&f)?, l.ray(&ray)?);
            let t = &l.torso;
            let proj;
            let (arena, targets) = match graph {
                Which::G => (Arena::G(t), Targets::Ray { seq: &s.seq, from: 0 }),
                Which::K => {
                    proj = project_ray(t, &s)?;
                    (Arena::K(t), Targets::Projection(&proj))
                }
            };
            let cert = separates_at_depths(arena, &f, &u, targets, &grid)?;
            outln!("graph={}\nU={}\nF={}\ncertificate={cert}", arena.name(), fmt_set(&u), fmt_set(&f));
            outln!("verdict={}", certificate_token(&cert));
            if let Some(path) = dot {
                let depth = match &cert {
                    dtorso::Certificate::NotSeparated { depth, .. } => *depth,
                    dtorso::Certificate::Separated { .. } => grid.depths[0],
                };
                let tr = arena.truncate(depth, grid.reps);
                let hl = Highlights {
                    f,
                    u,
                    targets: targets.at(depth, grid.reps),
                    path: cert.witness().map(<[Vertex]>::to_vec).unwrap_or_default(),
                };
                write_dot(&path, &export_dot(arena.name(), &tr.graph, &hl))?;
            }
            Ok(())
        }
        Command::LemmaCheck { file, u, f, ray, with, grid } => {
            let l = load(&file)?;
            let grid = grid.grid(&l.scenario.grid);
            let m = match with {
                Sep::Fs => Modification::FS,
                Sep::X => Modification::X,
            };
            let r = lemma421_check_with(&l.torso, &l.set(&u)?, &l.ray(&ray)?, &l.set(&f)?, &grid, m)?;
            out!("{}", r.to_report());
            outln!("verdict={}", lemma_token(r.outcome));
            check(r.outcome == LemmaOutcome::Holds)
        }
        Command::RemarkCheck { file, u, f, ray, grid } => {
            let l = load(&file)?;
            let grid = grid.grid(&l.scenario.grid);
            let r = remark_tail_check(&l.torso, &l.set(&u)?, &l.ray(&ray)?, &l.set(&f)?, &grid)?;
            out!("{}", r.to_report());
            outln!("verdict={}", certificate_token(&r.certificate));
            check(r.certificate.is_separated())
        }
        Command::Example4 { grid, use_x, dot_dir } => {
            let grid = grid.grid(&Grid::default());
            let m = if use_x { Modification::X } else { Modification::FS };
            let r = run_example4(&grid, m);
            out!("{}", r.to_report());
            if let Some(dir) = dot_dir {
                example4_figures(&dir)?;
            }
            if let Some(a) = r.first_failure() {
                eprintln!("assertion failed: {}", a.name);
            }
            check(r.all_passed())
        }
        Command::Search { seed, trials, out, grid } => {
            let mut cfg = SearchConfig::new(seed, trials);
            cfg.grid = grid.grid(&cfg.grid);
            let r = random_search(&cfg);
            out!("{}", r.to_report());
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                for f in &r.findings {
                    let path = dir.join(f.file_name());
                    std::fs::write(&path, f.scenario.to_string())
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                }
            }
            check(r.violations() == 0)
        }
        Command::Dot { file, graph, depth, reps, u, f, ray, out } => {
            let l = load(&file)?;
            let tr = match graph {
                Which::G => l.torso.presentation.truncate(depth, reps),
                Which::K => l.torso.truncate(depth, reps),
            };
            let mut hl = Highlights::default();
            if let Some(u) = u {
                hl.u = l.set(&u)?;
            }
            if let Some(f) = f {
                hl.f = l.set(&f)?;
            }
            if let Some(ray) = ray {
                let s = l.ray(&ray)?;
                hl.targets = match graph {
                    Which::G => Targets::Ray { seq: &s.seq, from: 0 }.at(depth, reps),
                    Which::K => Targets::Projection(&project_ray(&l.torso, &s)?).at(depth, reps),
                };
            }
            let name = if graph == Which::G { "G" } else { "K" };
            let text = export_dot(name, &tr.graph, &hl);
            match out {
                Some(path) => write_dot(&path, &text),
                None => {
                    out!("{text}");
                    Ok(())
                }
            }
        }
        Command::Run { file } => {
            let sc = Scenario::load(&file)?;
            let r = run_scenario(&sc)?;
            out!("{}", r.to_report());
            check(r.all_passed())
        }
    }
}

/// The K-truncation with `F` boxed, and the G-truncation with the failing
/// `X` and its witness.
fn example4_figures(dir: &Path) -> Outcome {
    use dtorso::example4::{PRESENTATION, RAY_S};
    std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let t = torso_of(&dtorso::parse_presentation(PRESENTATION)?);
    let s = RaySpec::parse(RAY_S)?;
    let u = BTreeSet::from([Vertex::host("X", 0)]);
    let f = BTreeSet::from([Vertex::host("X", 2), Vertex::host("X", 3)]);
    let proj = project_ray(&t, &s)?;
    let k = t.truncate(5, 1);
    let hl = Highlights { f: f.clone(), u: u.clone(), targets: Targets::Projection(&proj).at(5, 1), path: Vec::new() };
    write_dot(&dir.join("example4_K.dot"), &export_dot("K", &k.graph, &hl))?;
    let g = t.presentation.truncate(5, 1);
    let witness = vec![Vertex::host("X", 0), Vertex::host("X", 1), Vertex::parse("Z#0.z")?];
    let hl = Highlights { f, u, targets: Targets::Ray { seq: &s.seq, from: 0 }.at(5, 1), path: witness };
    write_dot(&dir.join("example4_G.dot"), &export_dot("G", &g.graph, &hl))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
