mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use geomatch::algorithms::generators::{gen_general_odd_seeded, gen_parallel_chords, gen_random_matching, gen_random_pair, Flavor};
use geomatch::algorithms::hv::ColoredDual;
use geomatch::algorithms::transform::TransformationSequence;
use geomatch::geom::{Matching, Scalar};
use geomatch::io::{self, LoadError, ParseError};
use geomatch::registry::{OracleCheck, Registry, RunInput, RunOutput};
use geomatch::subdivision::{dual_multigraph, extend, ExtensionDirective, Region};
use geomatch::Error;

use render::{Layers, Scene};

#[derive(Parser)]
#[command(name = "geomatch", version, about = "Non-crossing geometric perfect matchings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that an instance is a perfect non-crossing matching in general position.
    Validate { path: PathBuf },
    /// Run an algorithm on one instance (two for `transform`).
    Run {
        algorithm: String,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Directory for output files.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Drawing of the input, the output and the dual (one file per step for sequences).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Re-check every output with the plain predicates.
        #[arg(long)]
        verify: bool,
        /// Cross-check against exhaustive search when the instance is small.
        #[arg(long)]
        oracle: bool,
        #[arg(long, env = "GEOMATCH_SEED", default_value_t = 0)]
        seed: u64,
        /// Order budget for two-trees-search.
        #[arg(long, default_value_t = 720)]
        max_orders: usize,
        /// Shear the plane first so that all x-coordinates differ.
        #[arg(long)]
        shear: bool,
    },
    /// Generate an instance.
    Gen {
        flavor: GenFlavor,
        /// Number of segments (chords for parallel-chords, n for general-odd).
        size: usize,
        #[arg(long, env = "GEOMATCH_SEED", default_value_t = 0)]
        seed: u64,
        /// Circle radius for parallel-chords.
        #[arg(long, default_value = "1000")]
        radius: Scalar,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// For `random`: also write a second matching of the same points here.
        #[arg(long)]
        partner: Option<PathBuf>,
    },
    /// Draw an instance with its extension and dual, or every step of a sequence.
    Render {
        input: PathBuf,
        out: PathBuf,
        /// Comma-separated: segments, extensions, cells, dual, or all.
        #[arg(long, default_value = "all")]
        layers: Layers,
    },
    /// List the registered algorithms.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFlavor {
    Random,
    Hv,
    Chc,
    ParallelChords,
    GeneralOdd,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Bad command-line usage that clap cannot catch.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// 1 for violated preconditions, 2 for unreadable input, 3 for internal
/// assertions (including failed verification).
fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<Usage>().is_some() {
            return 1;
        }
        if cause.downcast_ref::<ParseError>().is_some() || cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
        if let Some(err) = cause.downcast_ref::<Error>() {
            return if matches!(err, Error::Internal(_)) { 3 } else { 1 };
        }
        if let Some(err) = cause.downcast_ref::<LoadError>() {
            return match err {
                LoadError::Parse(_) => 2,
                LoadError::Invalid(Error::Internal(_)) => 3,
                LoadError::Invalid(_) => 1,
            };
        }
    }
    3
}

fn dispatch(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Validate { path } => validate(&path),
        Command::Run { algorithm, inputs, out, svg, verify, oracle, seed, max_orders, shear } => {
            let opts = RunOptions { out, svg, verify, oracle, seed, max_orders, shear };
            run(&algorithm, &inputs, &opts)
        }
        Command::Gen { flavor, size, seed, radius, out, partner } => {
            gen(flavor, size, seed, &radius, out.as_deref(), partner.as_deref())
        }
        Command::Render { input, out, layers } => render_file(&input, &out, &layers),
        Command::List => {
            for s in Registry::builtin().iter() {
                println!("{:<18} {}", s.name(), s.about());
            }
            Ok(())
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<Matching> {
    io::parse_instance(&read(path)?).with_context(|| path.display().to_string())
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).map_err(|e| anyhow!(Error::Internal(format!("writing {}: {e}", path.display()))))
}

fn validate(path: &Path) -> anyhow::Result<()> {
    let m = load(path)?;
    println!("{}: {} segments, perfect, non-crossing, general position", path.display(), m.len());
    Ok(())
}

struct RunOptions {
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    verify: bool,
    oracle: bool,
    seed: u64,
    max_orders: usize,
    shear: bool,
}

fn run(name: &str, inputs: &[PathBuf], opts: &RunOptions) -> anyhow::Result<()> {
    let registry = Registry::builtin();
    let Some(strategy) = registry.get(name) else {
        let known: Vec<_> = registry.names().collect();
        bail!(Usage(format!("unknown algorithm `{name}`; known: {}", known.join(", "))));
    };
    if inputs.len() != strategy.arity() {
        bail!(Usage(format!("`{name}` takes {} input file(s), got {}", strategy.arity(), inputs.len())));
    }
    let first = load(&inputs[0])?;
    let mut matchings = vec![first.clone()];
    for p in &inputs[1..] {
        let m = load(p)?;
        matchings.push(io::onto_base(&m, first.base()).with_context(|| format!("{} has other points", p.display()))?);
    }
    let original = first.base().clone();
    if opts.shear {
        let (sheared, k) = first.base().sheared_for_distinct_x();
        let sheared = Arc::new(sheared);
        matchings = matchings.iter().map(|m| m.rebased(sheared.clone())).collect::<Result<_, _>>()?;
        println!("shear: x + y/{k}");
    }
    let input = RunInput { matchings, max_orders: opts.max_orders, seed: opts.seed };
    let output = strategy.run(&input)?;

    println!("algorithm: {name}");
    for (k, v) in &output.summary {
        println!("{k}: {v}");
    }
    if opts.verify {
        strategy.verify(&input, &output)?;
        println!("verify: ok");
    }
    if opts.oracle {
        match strategy.oracle(&input, &output)? {
            OracleCheck::Agreed(msg) => println!("oracle: {msg}"),
            OracleCheck::Skipped(msg) => println!("oracle: skipped ({msg})"),
        }
    }
    if let Some(dir) = &opts.out {
        write_outputs(dir, &output, &original)?;
    }
    if let Some(svg) = &opts.svg {
        draw_run(svg, &input, &output)?;
    }
    Ok(())
}

fn write_outputs(dir: &Path, output: &RunOutput, original: &Arc<geomatch::geom::PointSet>) -> anyhow::Result<()> {
    fs::create_dir_all(dir).map_err(|e| anyhow!(Error::Internal(format!("creating {}: {e}", dir.display()))))?;
    if let Some(seq) = &output.sequence {
        let steps = seq.matchings.iter().map(|m| m.rebased(original.clone())).collect::<Result<_, _>>()?;
        let path = dir.join("sequence.txt");
        write(&path, &io::write_sequence(&TransformationSequence { matchings: steps }))?;
        println!("wrote {}", path.display());
    }
    for (label, m) in &output.matchings {
        let path = dir.join(format!("{label}.txt"));
        write(&path, &io::write_instance(&m.rebased(original.clone())?))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// `out.svg` becomes `out-<k>.svg` for step k.
fn step_path(out: &Path, k: usize) -> PathBuf {
    let stem = out.file_stem().map_or("step".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}-{k}.svg"))
}

fn draw_sequence(out: &Path, seq: &TransformationSequence, layers: &Layers) -> anyhow::Result<()> {
    let scenes: Vec<Scene> = seq.matchings.iter().map(|m| Scene { matching: m, overlays: vec![], colored: None }).collect();
    let view = scenes.iter().map(Scene::extent).reduce(|a, b| a.union(&b)).expect("sequence is never empty");
    for (k, scene) in scenes.iter().enumerate() {
        let path = step_path(out, k);
        write(&path, &render::svg(scene, layers, &view))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn draw_run(out: &Path, input: &RunInput, output: &RunOutput) -> anyhow::Result<()> {
    if let Some(seq) = &output.sequence {
        return draw_sequence(out, seq, &Layers::default());
    }
    const STROKES: [&str; 2] = ["orange", "purple"];
    let scene = Scene {
        matching: input.primary(),
        overlays: output.matchings.iter().zip(STROKES.iter().cycle()).map(|((_, m), s)| (m, *s)).collect(),
        colored: output.colored.as_ref(),
    };
    write(out, &render::svg(&scene, &Layers::default(), &scene.extent()))?;
    println!("wrote {}", out.display());
    Ok(())
}

/// Both-direction extension in a bounding box, dual edges uncoloured.
fn plain_extension(m: &Matching) -> geomatch::Result<ColoredDual> {
    let region = Region::around(m);
    let directives = ExtensionDirective::standard(m, &region)?;
    let (geometry, subdivision) = extend(m, &region, &directives)?;
    let dual = dual_multigraph(&subdivision, m);
    Ok(ColoredDual { dual, subdivision, geometry })
}

fn render_file(input: &Path, out: &Path, layers: &Layers) -> anyhow::Result<()> {
    let text = read(input)?;
    if text.lines().any(|l| l.trim_start().starts_with("==")) {
        let seq = io::parse_sequence(&text).with_context(|| input.display().to_string())?;
        return draw_sequence(out, &seq, layers);
    }
    let m = io::parse_instance(&text).with_context(|| input.display().to_string())?;
    let colored = if layers.extensions || layers.cells || layers.dual {
        match plain_extension(&m) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("warning: no extension drawn: {e}");
                None
            }
        }
    } else {
        None
    };
    let scene = Scene { matching: &m, overlays: vec![], colored: colored.as_ref() };
    write(out, &render::svg(&scene, layers, &scene.extent()))?;
    match &colored {
        Some(c) => println!("wrote {} ({} cells)", out.display(), c.subdivision.cells.len()),
        None => println!("wrote {}", out.display()),
    }
    Ok(())
}

fn gen(
    flavor: GenFlavor,
    size: usize,
    seed: u64,
    radius: &Scalar,
    out: Option<&Path>,
    partner: Option<&Path>,
) -> anyhow::Result<()> {
    if let Some(p) = partner {
        if !matches!(flavor, GenFlavor::Random) {
            bail!(Usage("--partner only works with `random`".into()));
        }
        let (a, b) = gen_random_pair(size, seed)?;
        write(p, &io::write_instance(&b))?;
        let text = io::write_instance(&a);
        match out {
            Some(o) => write(o, &text)?,
            None => print!("{text}"),
        }
        return Ok(());
    }
    let m = match flavor {
        GenFlavor::Random => gen_random_matching(size, seed, Flavor::General)?,
        GenFlavor::Hv => gen_random_matching(size, seed, Flavor::AxisParallel)?,
        GenFlavor::Chc => gen_random_matching(size, seed, Flavor::Chc)?,
        GenFlavor::ParallelChords => gen_parallel_chords(size, radius)?,
        GenFlavor::GeneralOdd => gen_general_odd_seeded(size, seed)?,
    };
    let text = io::write_instance(&m);
    match out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_paths() {
        assert_eq!(step_path(Path::new("/tmp/seq.svg"), 3), PathBuf::from("/tmp/seq-3.svg"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&anyhow!(Error::OddMatching(3))), 1);
        assert_eq!(exit_code(&anyhow!(Error::Internal("x".into()))), 3);
        let parse = ParseError { line: 1, column: 1, message: "x".into() };
        assert_eq!(exit_code(&anyhow!(LoadError::Parse(parse)).context("file")), 2);
    }
}
