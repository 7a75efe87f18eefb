//! `sphere-scope`: command-line front end for ball scans, censuses and the
//! connected-spheres check.
//!
//! Reports go to `--out` or stdout; one-line summaries go to stderr. Exit
//! status is 0 on success, 1 on domain errors and negative findings, 2 on
//! usage errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use spherescope::ball::DEFAULT_MAX_VERTICES;
use spherescope::report;
use spherescope::{
    parse_presentation, theorem_radius, AnalysisError, BallTable, Explorer, GroupModel, Guard,
    LetterMap, Presentation, Region, SpanSampling, Verdict,
};

#[derive(Parser, Debug)]
#[command(name = "sphere-scope", version, about = "Thick spheres, ends and dead ends of Cayley graph balls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Group model, e.g. zd:2, heisenberg:xyz, lamplighter2, zwrz, free:2
    #[arg(long, global = true, env = "SPHERESCOPE_MODEL")]
    model: Option<String>,
    /// Radius N of the computed ball
    #[arg(long = "N", global = true, env = "SPHERESCOPE_N")]
    radius: Option<u32>,
    /// Fixed horizon guard (default max(2r, 4))
    #[arg(long, global = true, env = "SPHERESCOPE_GUARD")]
    guard: Option<u32>,
    #[arg(long, global = true, env = "SPHERESCOPE_MAX_VERTICES", default_value_t = DEFAULT_MAX_VERTICES,
          value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    max_vertices: usize,
    #[arg(long, global = true, env = "SPHERESCOPE_FORMAT", value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Ball cache file; read when present, written otherwise
    #[arg(long, global = true, env = "SPHERESCOPE_CACHE")]
    cache: Option<PathBuf>,
    /// Report destination (stdout when absent)
    #[arg(long, global = true, env = "SPHERESCOPE_OUT")]
    out: Option<PathBuf>,
    /// Seed for sampled relator spans
    #[arg(long, global = true, env = "SPHERESCOPE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build B_N, print sphere sizes and optionally write the cache
    Ball,
    /// Thick-sphere component counts for n = 0..=nmax
    Spheres {
        #[arg(long, env = "SPHERESCOPE_R")]
        r: u32,
        #[arg(long, env = "SPHERESCOPE_NMAX")]
        nmax: Option<u32>,
        /// Inner radius of the annulus exported with --format dot
        #[arg(long, env = "SPHERESCOPE_DOT_N")]
        n: Option<u32>,
    },
    /// Smallest thickness that connects every thick sphere up to nmax
    ScanR {
        #[arg(long, env = "SPHERESCOPE_NMAX")]
        nmax: Option<u32>,
        #[arg(long, env = "SPHERESCOPE_RCAP", default_value_t = 4)]
        rcap: u32,
    },
    /// Simple connectivity of a region and components of its r-shell
    Shell {
        /// ball:R, annulus:A:B (B_B minus B_A) or words:W1;W2
        #[arg(long, env = "SPHERESCOPE_OMEGA")]
        omega: String,
        #[arg(long, env = "SPHERESCOPE_R")]
        r: u32,
    },
    /// Dead ends, depth and retreat depth per radius
    Deadends {
        #[arg(long, env = "SPHERESCOPE_NMAX")]
        nmax: Option<u32>,
    },
    /// Thick-sphere counts with a verdict on the number of ends
    Ends {
        #[arg(long, env = "SPHERESCOPE_R")]
        r: u32,
        #[arg(long, env = "SPHERESCOPE_NMAX")]
        nmax: Option<u32>,
    },
    /// Print the relator-length thickness of a presentation
    Bound {
        #[arg(long, env = "SPHERESCOPE_PRESENTATION")]
        presentation: PathBuf,
    },
    /// Level spans of every relator loop
    Span {
        #[arg(long, env = "SPHERESCOPE_PRESENTATION")]
        presentation: PathBuf,
    },
    /// Check connected spheres at the relator-length thickness
    Verify {
        #[arg(long, env = "SPHERESCOPE_PRESENTATION")]
        presentation: PathBuf,
        #[arg(long, env = "SPHERESCOPE_NMAX")]
        nmax: Option<u32>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{0}")]
    Domain(String),
}

type CliResult<T> = Result<T, CliError>;

/// Exits with status 2 like any other usage error.
fn usage(msg: &str) -> ! {
    Cli::command()
        .error(clap::error::ErrorKind::MissingRequiredArgument, msg)
        .exit()
}

impl RunConfig {
    fn model(&self) -> CliResult<GroupModel> {
        let spec = self
            .model
            .as_deref()
            .unwrap_or_else(|| usage("--model is required for this subcommand"));
        Ok(GroupModel::from_spec(spec).map_err(AnalysisError::from)?)
    }

    fn radius(&self) -> u32 {
        self.radius
            .unwrap_or_else(|| usage("--N is required for this subcommand"))
    }

    fn guard(&self) -> Guard {
        self.guard.map(Guard::fixed).unwrap_or_default()
    }

    fn sampling(&self) -> SpanSampling {
        SpanSampling {
            seed: self.seed,
            ..SpanSampling::default()
        }
    }

    /// Loads the ball from the cache when it covers the request, otherwise
    /// builds it (and fills the cache if one was named).
    fn ball(&self) -> CliResult<BallTable> {
        let model = self.model()?;
        let radius = self.radius();
        if let Some(path) = self.cache.as_deref().filter(|p| p.exists()) {
            let cached = BallTable::read_cache(path)?;
            if cached.model().spec() != model.spec() || cached.radius() < radius {
                return Err(AnalysisError::Cache(format!(
                    "{} holds {} at N = {}, requested {} at N = {}",
                    path.display(),
                    cached.model().spec(),
                    cached.radius(),
                    model.spec(),
                    radius
                ))
                .into());
            }
            return Ok(if cached.radius() == radius {
                cached
            } else {
                cached.truncate(radius)
            });
        }
        let ball = BallTable::build(&model, radius, self.max_vertices)?;
        if let Some(path) = &self.cache {
            ball.write_cache(path)?;
        }
        Ok(ball)
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => fs::write(path, text).map_err(AnalysisError::from)?,
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(AnalysisError::from)?,
        }
        Ok(())
    }

    fn emit_json(&self, value: &serde_json::Value) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON renders");
        text.push('\n');
        self.emit(&text)
    }

    fn no_dot(&self, subcommand: &str) {
        if self.format == Format::Dot {
            usage(&format!("--format dot is only available for `spheres`, not `{subcommand}`"));
        }
    }
}

fn read_presentation(path: &Path) -> CliResult<Presentation> {
    let text = fs::read_to_string(path).map_err(AnalysisError::from)?;
    Ok(parse_presentation(text.trim()).map_err(AnalysisError::from)?)
}

fn default_nmax(ex: &Explorer, r: u32) -> CliResult<u32> {
    ex.max_inner_radius(r).ok_or_else(|| {
        CliError::Domain(format!(
            "N = {} leaves no room for thickness {r} inside the guard",
            ex.ball().radius()
        ))
    })
}

fn parse_region(ball: &BallTable, spec: &str) -> CliResult<Region> {
    let bad = || CliError::Domain(format!("cannot parse region `{spec}`"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "ball" => Ok(Region::ball(ball, num(rest)?)),
        "annulus" => {
            let (a, b) = rest.split_once(':').ok_or_else(bad)?;
            Ok(Region::annulus(ball, num(a)?, num(b)?))
        }
        "words" => {
            let model = ball.model();
            let elements = rest
                .split(';')
                .map(|w| {
                    let gens = model.parse_word(w.trim()).map_err(AnalysisError::from)?;
                    Ok(model.trace(&model.identity(), gens))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Region::from_elements(ball, elements.iter())?)
        }
        _ => Err(bad()),
    }
}

/// Runs one subcommand; `Ok(false)` is a negative finding (exit 1).
fn run(cli: &Cli) -> CliResult<bool> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Ball => {
            cfg.no_dot("ball");
            let ball = cfg.ball()?;
            eprintln!(
                "{}: |B_{}| = {}",
                ball.model().spec(),
                ball.radius(),
                ball.len()
            );
            match cfg.format {
                Format::Json => cfg.emit_json(&report::ball_json(&ball))?,
                _ => cfg.emit(&report::ball_csv(&ball)?)?,
            }
        }
        Command::Spheres { r, nmax, n } => {
            let ball = cfg.ball()?;
            let ex = Explorer::with_guard(&ball, cfg.guard());
            if cfg.format == Format::Dot {
                let n = n.unwrap_or_else(|| usage("--format dot needs --n"));
                let mut out = Vec::new();
                report::export_annulus_dot(&ex, n, *r, &mut out)?;
                cfg.emit(&String::from_utf8(out).expect("DOT output is UTF-8"))?;
                return Ok(true);
            }
            let n_max = match nmax {
                Some(v) => *v,
                None => default_nmax(&ex, *r)?,
            };
            let scan = ex.scan_connected_spheres(*r, n_max)?;
            match scan.first_disconnected() {
                Some(row) => eprintln!(
                    "first disconnected thick sphere: n = {} ({} components)",
                    row.n, row.component_count
                ),
                None => eprintln!("all thick spheres connected for n <= {n_max}"),
            }
            match cfg.format {
                Format::Json => cfg.emit_json(&report::sphere_scan_json(&ex, &scan))?,
                _ => cfg.emit(&report::sphere_scan_csv(&scan)?)?,
            }
        }
        Command::ScanR { nmax, rcap } => {
            cfg.no_dot("scan-r");
            let ball = cfg.ball()?;
            let ex = Explorer::with_guard(&ball, cfg.guard());
            let n_max = match nmax {
                Some(v) => *v,
                None => default_nmax(&ex, *rcap)?,
            };
            let search = ex.min_connecting_radius(n_max, *rcap)?;
            match search.radius {
                Some(r) => eprintln!("min connecting radius: {r}"),
                None => eprintln!("min connecting radius: not found up to {rcap}"),
            }
            match cfg.format {
                Format::Json => {
                    cfg.emit_json(&report::radius_search_json(&ex, &search, n_max, *rcap))?
                }
                _ => cfg.emit(&report::radius_search_csv(&search)?)?,
            }
        }
        Command::Shell { omega, r } => {
            cfg.no_dot("shell");
            let ball = cfg.ball()?;
            let ex = Explorer::with_guard(&ball, cfg.guard());
            let region = parse_region(&ball, omega)?;
            let sc = ex.is_simply_connected_region(&region)?;
            let shell = if sc.simply_connected {
                Some(ex.shell_components(&region, *r)?)
            } else {
                None
            };
            let count = shell.as_ref().map(Vec::len);
            eprintln!(
                "simply connected: {}; shell components: {}",
                sc.simply_connected,
                count.map_or("n/a".to_string(), |c| c.to_string())
            );
            match cfg.format {
                Format::Json => {
                    let witnesses: Vec<_> = shell
                        .iter()
                        .flatten()
                        .map(|c| {
                            let v = *c.iter().min_by_key(|&&v| ball.key(v)).expect("nonempty");
                            report::witness(&ball, v)
                        })
                        .collect();
                    cfg.emit_json(&serde_json::json!({
                        "model": ball.model().spec(),
                        "ball_radius": ball.radius(),
                        "omega": omega,
                        "omega_size": region.len(),
                        "r": r,
                        "region_components": sc.region_components,
                        "complement_components": sc.complement_components,
                        "simply_connected": sc.simply_connected,
                        "horizon_limited": sc.horizon_limited,
                        "shell_components": count,
                        "witnesses": witnesses,
                    }))?
                }
                _ => cfg.emit(&format!(
                    "omega_size,region_components,complement_components,simply_connected,r,shell_components\n{},{},{},{},{},{}\n",
                    region.len(),
                    sc.region_components,
                    sc.complement_components,
                    sc.simply_connected,
                    r,
                    count.map_or(String::new(), |c| c.to_string())
                ))?,
            }
            if !sc.simply_connected {
                return Ok(false);
            }
        }
        Command::Deadends { nmax } => {
            cfg.no_dot("deadends");
            let ball = cfg.ball()?;
            let ex = Explorer::with_guard(&ball, cfg.guard());
            let n_max = match nmax {
                Some(v) => *v,
                None => default_nmax(&ex, 0)?.checked_sub(1).ok_or_else(|| {
                    CliError::Domain("ball too small for a depth census".to_string())
                })?,
            };
            let census = ex.dead_end_census(n_max)?;
            eprintln!("dead ends up to n = {n_max}: {}", census.total_dead_ends());
            match cfg.format {
                Format::Json => cfg.emit_json(&report::census_json(&ex, &census))?,
                _ => cfg.emit(&report::census_csv(&ball, &census)?)?,
            }
        }
        Command::Ends { r, nmax } => {
            cfg.no_dot("ends");
            let ball = cfg.ball()?;
            let ex = Explorer::with_guard(&ball, cfg.guard());
            let n_max = match nmax {
                Some(v) => *v,
                None => default_nmax(&ex, *r)?,
            };
            let profile = ex.ends_profile(*r, n_max)?;
            eprintln!(
                "verdict: {} (ends: {})",
                profile.verdict,
                profile.ends.map_or("undetermined".to_string(), |e| e.to_string())
            );
            match cfg.format {
                Format::Json => cfg.emit_json(&report::ends_profile_json(&ex, &profile))?,
                _ => cfg.emit(&report::sphere_scan_csv(&profile.scan)?)?,
            }
        }
        Command::Bound { presentation } => {
            let p = read_presentation(presentation)?;
            let r = theorem_radius(&p).map_err(AnalysisError::from)?;
            cfg.emit(&format!("r = {r}\n"))?;
        }
        Command::Span { presentation } => {
            cfg.no_dot("span");
            let p = read_presentation(presentation)?;
            let ball = cfg.ball()?;
            let map = LetterMap::by_name(ball.model(), &p).map_err(AnalysisError::from)?;
            let ex = Explorer::with_guard(&ball, cfg.guard());
            let spans = p
                .relators
                .iter()
                .map(|w| {
                    let base = ball.radius().saturating_sub((w.len() / 2) as u32);
                    ex.relator_spans(&map, w, base, &cfg.sampling())
                })
                .collect::<Result<Vec<_>, _>>()?;
            let violations: usize = spans.iter().map(|s| s.violations).sum();
            eprintln!("span violations: {violations}");
            match cfg.format {
                Format::Json => cfg.emit_json(&serde_json::to_value(&spans).expect("spans serialize"))?,
                _ => cfg.emit(&report::relator_spans_csv(&spans)?)?,
            }
            if violations > 0 {
                return Ok(false);
            }
        }
        Command::Verify { presentation, nmax } => {
            cfg.no_dot("verify");
            let p = read_presentation(presentation)?;
            let ball = cfg.ball()?;
            let map = LetterMap::by_name(ball.model(), &p).map_err(AnalysisError::from)?;
            let ex = Explorer::with_guard(&ball, cfg.guard());
            let n_max = match nmax {
                Some(v) => *v,
                None => default_nmax(&ex, theorem_radius(&p).map_err(AnalysisError::from)?)?,
            };
            let rep = ex.verify_theorem(&p, &map, n_max, &cfg.sampling())?;
            eprint!("{}", report::theorem_summary(&rep));
            match cfg.format {
                Format::Json => cfg.emit_json(&report::theorem_json(&rep))?,
                _ => cfg.emit(&report::relator_spans_csv(&rep.spans)?)?,
            }
            if rep.verdict == Verdict::Fail {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
