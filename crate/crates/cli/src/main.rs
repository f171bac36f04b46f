use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cablefloer_core::algebra::{parse_chord_list, Element};
use cablefloer_core::cfa::{Bounds, Closure, Gen, Lookup, Pattern};
use cablefloer_core::tensor::{box_tensor, verify_d_squared};
use cablefloer_core::torus::{cache_dir_from_env, MuCache};
use cablefloer_core::typed::{self, DGrading, TypeDModule};
use cablefloer_core::verify::{verify_algebra, verify_module};
use cablefloer_core::{ComputeError, Mode, TorusAlgebra};

#[derive(Parser)]
#[command(name = "cablefloer", version, about = "Weighted bordered Floer computations for the torus algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Operations of the weighted torus algebra.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Weighted type A modules generated by moves.
    #[command(subcommand)]
    Cfa(CfaCmd),
    /// Weighted type D modules.
    #[command(subcommand)]
    Typed(TypedCmd),
    /// Box tensor product of a type A closure with a type D module.
    Tensor(TensorArgs),
    /// Built-in datasets.
    #[command(subcommand)]
    Datasets(DatasetsCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    Enriched,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Enriched => Mode::Enriched,
        }
    }
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Evaluate mu^w_n on chord inputs.
    Mu {
        /// Weight.
        #[arg(long)]
        w: u32,
        /// Comma-separated chords, e.g. "r4,r3,r2,r123"; empty for curvature.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        inputs: String,
        /// Coefficient ring: F2[U] (plain) or F2[U,V] (enriched).
        #[arg(long, value_enum, default_value = "plain")]
        mode: ModeArg,
    },
    /// Check the weighted A-infinity relations exhaustively within bounds.
    Verify {
        /// Maximal number of inputs.
        #[arg(long)]
        max_n: usize,
        /// Maximal total chord length.
        #[arg(long)]
        max_sum: u32,
        /// Maximal weight.
        #[arg(long)]
        max_w: u32,
        /// Discard terms with U-power above this.
        #[arg(long)]
        cutoff: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternArg {
    SolidTorus,
    Cable,
}

#[derive(Args)]
struct PatternArgs {
    /// Which module to build.
    #[arg(long, value_enum)]
    pattern: PatternArg,
    /// Cable parameter (p >= 2), required for the cable.
    #[arg(long)]
    p: Option<u16>,
}

impl PatternArgs {
    fn pattern(&self) -> Result<Pattern> {
        match (self.pattern, self.p) {
            (PatternArg::SolidTorus, _) => Ok(Pattern::SolidTorus),
            (PatternArg::Cable, Some(p)) if p >= 2 => Ok(Pattern::Cable(p)),
            (PatternArg::Cable, Some(p)) => bail!(ComputeError::Invalid(format!("cable parameter {p} < 2"))),
            (PatternArg::Cable, None) => bail!(ComputeError::Invalid("--p is required for the cable".into())),
        }
    }
}

#[derive(Subcommand)]
enum CfaCmd {
    /// Generate the operation closure within bounds.
    Ops {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Maximal total U and V power.
        #[arg(long)]
        max_uv: u32,
        /// Maximal weight.
        #[arg(long)]
        max_w: u32,
        /// Maximal number of algebra inputs.
        #[arg(long)]
        max_len: usize,
        /// Write the closure as JSON instead of listing operations.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look up m^w(src, inputs) in a saved closure.
    Query {
        /// Closure JSON written by `cfa ops --out`.
        #[arg(long)]
        closure: PathBuf,
        /// Source generator, e.g. x, a, b1, c2.
        #[arg(long)]
        src: String,
        /// Weight.
        #[arg(long)]
        w: u32,
        /// Comma-separated chords; empty for m_1.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        inputs: String,
    },
    /// Check the module A-infinity relations exhaustively within bounds.
    Verify {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Maximal number of algebra inputs.
        #[arg(long)]
        max_n: usize,
        /// Discard terms with total power above this.
        #[arg(long)]
        cutoff: u32,
        /// Maximal total chord length.
        #[arg(long, default_value_t = 8)]
        max_sum: u32,
        /// Maximal weight.
        #[arg(long, default_value_t = 1)]
        max_w: u32,
    },
}

#[derive(Subcommand)]
enum TypedCmd {
    /// Check the type D structure relation.
    Check {
        /// Module JSON file or built-in dataset name.
        #[arg(long)]
        module: String,
        /// Maximal chain length.
        #[arg(long)]
        max_n: usize,
        /// Discard terms with U-power above this.
        #[arg(long)]
        cutoff: u32,
    },
    /// Search for extensions of a hat module to a minus module.
    Extend {
        /// Hat module JSON file or built-in dataset name.
        #[arg(long)]
        hat: String,
        /// Gradings JSON file or built-in dataset name.
        #[arg(long)]
        gradings: String,
        /// Discard terms with U-power above this; also caps candidate U-powers.
        #[arg(long)]
        cutoff: u32,
        /// Maximal chain length in the structure relation.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct TensorArgs {
    #[command(flatten)]
    pattern: PatternArgs,
    /// Type D module: JSON file or built-in dataset name.
    #[arg(long)]
    typed: String,
    /// Maximal type D chain length.
    #[arg(long)]
    max_n: usize,
    /// Maximal total U and V power.
    #[arg(long)]
    max_uv: u32,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum DatasetsCmd {
    /// List dataset names.
    List,
    /// Print a dataset as JSON.
    Dump { name: String },
}

/// Cache shared by all algebra computations of one run.
struct Cache {
    cache: Arc<MuCache>,
    dir: Option<PathBuf>,
}

impl Cache {
    fn open() -> Result<Cache> {
        let cache = Arc::new(MuCache::default());
        let dir = cache_dir_from_env();
        if let Some(d) = &dir {
            cache.load(d).with_context(|| format!("loading cache from {}", d.display()))?;
        }
        Ok(Cache { cache, dir })
    }

    fn algebra(&self, mode: Mode) -> TorusAlgebra {
        TorusAlgebra::with_cache(mode, self.cache.clone())
    }

    fn save(&self) -> Result<()> {
        if let Some(d) = &self.dir {
            self.cache.save(d).with_context(|| format!("saving cache to {}", d.display()))?;
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_module(arg: &str) -> Result<TypeDModule> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(TypeDModule::from_json(&read(path)?)?);
    }
    match arg.strip_suffix("-hat") {
        Some(base) => Ok(typed::dataset(base)?.hat()),
        None => Ok(typed::dataset(arg)?),
    }
}

fn dataset_gradings(name: &str) -> Result<(TypeDModule, DGrading)> {
    let module = typed::dataset(name)?;
    let gradings = match name {
        "solid-torus" => typed::solid_torus_gradings(),
        "rectangle" => typed::derive_gradings(&module)?,
        n => {
            let p: u16 = n.trim_start_matches("cable-").parse().context("cable parameter")?;
            typed::cable_gradings(p)
        }
    };
    Ok((module, gradings))
}

fn load_gradings(arg: &str, module: &TypeDModule) -> Result<DGrading> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(DGrading::from_json(&read(path)?, module)?);
    }
    let base = arg.strip_suffix("-gradings").unwrap_or(arg);
    let (named, gradings) = dataset_gradings(base)?;
    let names = |m: &TypeDModule| m.generators.iter().map(|g| g.name.clone()).collect::<Vec<_>>();
    if names(&named) != names(module) {
        bail!(ComputeError::Invalid(format!("gradings {arg} do not match the module's generators")));
    }
    Ok(gradings)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_algebra(cmd: AlgebraCmd, cache: &Cache) -> Result<ExitCode> {
    match cmd {
        AlgebraCmd::Mu { w, inputs, mode } => {
            let alg = cache.algebra(mode.into());
            let chords = parse_chord_list(&inputs)?;
            let inputs: Vec<Element> = chords.into_iter().map(Element::from).collect();
            println!("{}", alg.mu(w, &inputs));
            Ok(ExitCode::SUCCESS)
        }
        AlgebraCmd::Verify { max_n, max_sum, max_w, cutoff } => {
            let alg = cache.algebra(Mode::Plain);
            let report = verify_algebra(&alg, max_n, max_sum, max_w, cutoff);
            for f in &report.failures {
                println!("FAIL {f}");
            }
            println!("instances {} failures {}", report.instances, report.failures.len());
            Ok(status(report.passed()))
        }
    }
}

fn run_cfa(cmd: CfaCmd, cache: &Cache) -> Result<ExitCode> {
    match cmd {
        CfaCmd::Ops { pattern, max_uv, max_w, max_len, out } => {
            let closure = Closure::generate(pattern.pattern()?, Bounds { max_uv, max_w, max_len })?;
            match out {
                Some(path) => {
                    write_out(Some(&path), &closure.to_json())?;
                    eprintln!("{} operations written to {}", closure.len(), path.display());
                }
                None => {
                    for op in closure.operations() {
                        println!("{op}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        CfaCmd::Query { closure, src, w, inputs } => {
            let closure = Closure::from_json(&read(&closure)?)?;
            let x: Gen = src.parse()?;
            if !closure.generators().contains(&x) {
                bail!(ComputeError::Invalid(format!("{x} is not a generator of {}", closure.pattern().name())));
            }
            let chords = parse_chord_list(&inputs)?;
            match closure.query(x, &chords, w) {
                Lookup::Known(outs) if outs.is_empty() => println!("0"),
                Lookup::Known(outs) => {
                    let terms: Vec<String> =
                        outs.iter().map(|(u, v, g)| cablefloer_core::format_term(*u, *v, g)).collect();
                    println!("{}", terms.join(" + "));
                }
                Lookup::Unknown => {
                    bail!(ComputeError::InsufficientClosure(format!(
                        "query is outside the closure bounds {:?}",
                        closure.bounds()
                    )))
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        CfaCmd::Verify { pattern, max_n, cutoff, max_sum, max_w } => {
            let pattern = pattern.pattern()?;
            let bounds = Bounds { max_uv: cutoff, max_w, max_len: max_n + 2 * max_w as usize };
            let closure = Closure::generate(pattern, bounds)?;
            let alg = cache.algebra(pattern.mode());
            let report = verify_module(&alg, &closure, max_n, max_sum, max_w, cutoff)?;
            for f in &report.failures {
                println!("FAIL {f}");
            }
            println!(
                "operations {} instances {} failures {}",
                closure.len(),
                report.instances,
                report.failures.len()
            );
            Ok(status(report.passed()))
        }
    }
}

fn run_typed(cmd: TypedCmd, cache: &Cache) -> Result<ExitCode> {
    let alg = cache.algebra(Mode::Plain);
    match cmd {
        TypedCmd::Check { module, max_n, cutoff } => {
            let m = load_module(&module)?;
            let report = typed::check_structure_relation(&alg, &m, max_n, cutoff);
            for (g, terms) in &report.failures {
                println!("FAIL {g}: {terms}");
            }
            println!("chains {} failures {}", report.chains, report.failures.len());
            Ok(status(report.passed()))
        }
        TypedCmd::Extend { hat, gradings, cutoff, max_n } => {
            let hat = load_module(&hat)?;
            let gradings = load_gradings(&gradings, &hat)?;
            let ext = typed::extend_hat_to_minus(&alg, &hat, &gradings, max_n, cutoff)?;
            println!(
                "candidates {} (chord length cap {}, U-power cap {}) solutions {}",
                ext.candidates.len(),
                ext.length_cap,
                ext.u_cap,
                ext.solutions.len()
            );
            for (i, s) in ext.solutions.iter().enumerate() {
                println!("solution {}:", i + 1);
                for a in s.arrows.difference(&hat.arrows) {
                    println!("  {} -> {} {}", s.generators[a.from].name, s.generators[a.to].name, a.coeff);
                }
            }
            Ok(status(!ext.solutions.is_empty()))
        }
    }
}

fn run_tensor(args: TensorArgs) -> Result<ExitCode> {
    let pattern = args.pattern.pattern()?;
    let d = load_module(&args.typed)?;
    let bounds = Bounds {
        max_uv: args.max_uv,
        max_w: args.max_uv,
        max_len: args.max_n + 2 * args.max_uv as usize,
    };
    let closure = Closure::generate(pattern, bounds)?;
    let complex = box_tensor(&closure, &d, args.max_n, args.max_uv)?;
    let text = match args.format {
        Format::Json => complex.to_json_pretty() + "\n",
        Format::Dot => complex.to_dot(),
    };
    write_out(args.out.as_deref(), &text)?;
    let report = verify_d_squared(&complex, args.max_uv);
    for (f, t, u, v) in &report.failures {
        eprintln!("d^2 != 0: {f} -> {}", cablefloer_core::format_term(*u, *v, t));
    }
    Ok(status(report.passed()))
}

fn run_datasets(cmd: DatasetsCmd) -> Result<ExitCode> {
    match cmd {
        DatasetsCmd::List => {
            for name in ["solid-torus", "cable-P", "rectangle"] {
                println!("{name}");
                println!("{name}-hat");
                println!("{name}-gradings");
            }
            println!("cfdd-id");
        }
        DatasetsCmd::Dump { name } => {
            if name == "cfdd-id" {
                let data: Vec<serde_json::Value> = typed::cfdd_identity()
                    .into_iter()
                    .map(|(g, terms)| {
                        let terms: Vec<_> = terms
                            .into_iter()
                            .map(|(l, r, t)| serde_json::json!({"left": l, "right": r, "to": t}))
                            .collect();
                        serde_json::json!({"generator": g, "differential": terms})
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&data)?);
            } else if let Some(base) = name.strip_suffix("-gradings") {
                let (module, gradings) = dataset_gradings(base)?;
                println!("{}", gradings.to_json(&module));
            } else {
                println!("{}", load_module(&name)?.to_json());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cache = Cache::open()?;
    let code = match cli.command {
        Command::Algebra(cmd) => run_algebra(cmd, &cache)?,
        Command::Cfa(cmd) => run_cfa(cmd, &cache)?,
        Command::Typed(cmd) => run_typed(cmd, &cache)?,
        Command::Tensor(args) => run_tensor(args)?,
        Command::Datasets(cmd) => run_datasets(cmd)?,
    };
    cache.save()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<ComputeError>() {
                Some(ComputeError::InsufficientClosure(_)) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
