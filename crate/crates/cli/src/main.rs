use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use blockade::acceptance;
use blockade::analytics::{
    cpb_pair, interference_minimum_delta0, ucpb_min_coupling, ucpb_optimal_pairs,
};
use blockade::model::{dressed_state, two_photon_detuning, Branch, SystemParams};
use blockade::sweep::{
    find_minima, overlay_curves, refine_minimum, run_grid_with_jobs, run_point, write_csv,
    write_json, Axis, Constraint, Engine, Figure, GridResult, Region, SweepSpec,
};
use blockade::Error;

#[derive(Parser)]
#[command(
    name = "blockade",
    version,
    about = "Photon statistics of a driven atom-cavity system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate g2(0) at one parameter point.
    Point {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Sweep one or two parameters.
    Sweep {
        /// `name:start:stop:count`; give once for a line, twice for a plane.
        #[arg(long = "axis", required = true, num_args = 1)]
        axes: Vec<String>,
        /// Linear tie such as `delta_a=-3*delta0`.
        #[arg(long)]
        tie: Option<String>,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dressed levels of the n-excitation manifold.
    Dressed {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Optimal detunings for blockade at a given coupling.
    Optimal {
        #[command(flatten)]
        params: ParamArgs,
        /// Also print the overlay curves for the square region of this half-width.
        #[arg(long)]
        overlay: Option<f64>,
    },
    /// Recompute a preset map.
    Figure {
        #[arg(value_enum)]
        name: FigureName,
        /// Points per axis, overriding the preset.
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = EngineArg::Both)]
        engine: EngineArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the acceptance criteria.
    Check {
        /// Run only these criteria (1-11).
        #[arg(long = "criterion")]
        criteria: Vec<u8>,
    },
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta0: f64,
    #[arg(long = "delta-a", default_value_t = 0.0, allow_negative_numbers = true)]
    delta_a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    g: f64,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    kappa: f64,
}

impl ParamArgs {
    fn params(&self) -> SystemParams {
        SystemParams {
            delta0: self.delta0,
            delta_a: self.delta_a,
            g: self.g,
            epsilon: self.epsilon,
            kappa: self.kappa,
            gamma: 1.0,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct SolverArgs {
    #[arg(long, default_value_t = 5)]
    nmax: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::Both)]
    engine: EngineArg,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    jobs: Option<usize>,
    /// Re-solve nested finer grids around each reported minimum.
    #[arg(long)]
    refine: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Analytic,
    Numeric,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Analytic => Engine::Analytic,
            EngineArg::Numeric => Engine::Numeric,
            EngineArg::Both => Engine::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureName {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
}

impl From<FigureName> for Figure {
    fn from(f: FigureName) -> Self {
        match f {
            FigureName::Fig2a => Figure::Fig2a,
            FigureName::Fig2b => Figure::Fig2b,
            FigureName::Fig3a => Figure::Fig3a,
            FigureName::Fig3b => Figure::Fig3b,
            FigureName::Fig4a => Figure::Fig4a,
            FigureName::Fig4b => Figure::Fig4b,
            FigureName::Fig5a => Figure::Fig5a,
            FigureName::Fig5b => Figure::Fig5b,
        }
    }
}

/// Exit statuses: 1 for bad input, 2 for a failed point solve, 3 for unmet criteria.
enum Failure {
    Invalid(String),
    Solver(Error),
    Unmet(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(format!("output: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("solver failed ({}): {e}", e.tag());
            ExitCode::from(2)
        }
        Err(Failure::Unmet(n)) => {
            eprintln!("{n} criteria not met");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Point {
            params,
            solver,
            format,
        } => point(params.params(), solver, format),
        Command::Sweep {
            axes,
            tie,
            params,
            solver,
            output,
        } => {
            let spec = sweep_spec(&axes, tie.as_deref(), params.params(), solver)?;
            grids(vec![spec], &output)
        }
        Command::Dressed { params, n } => dressed(params.params(), n),
        Command::Optimal { params, overlay } => optimal(params.params(), overlay),
        Command::Figure {
            name,
            grid,
            nmax,
            engine,
            output,
        } => {
            let specs = Figure::from(name)
                .specs(grid)
                .into_iter()
                .map(|s| s.with_engine(engine.into()).with_n_max(nmax))
                .collect();
            grids(specs, &output)
        }
        Command::Check { criteria } => check(criteria),
    }
}

fn point(p: SystemParams, solver: SolverArgs, format: Format) -> Result<(), Failure> {
    p.validate()?;
    blockade::hilbert::HilbertSpace::new(solver.nmax)?;
    let record = run_point(&p, solver.engine.into(), solver.nmax).map_err(Failure::Solver)?;
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &record).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let show = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:e}"));
            writeln!(out, "g2_numeric    {}", show(record.g2_numeric))?;
            writeln!(out, "g2_analytic   {}", show(record.g2_analytic))?;
            writeln!(out, "mean_n        {:e}", record.mean_n)?;
            writeln!(out, "cpb_residual  {:e}", record.cpb_residual)?;
            writeln!(
                out,
                "ucpb_residual {:e} {:+e}i",
                record.ucpb_residual.re, record.ucpb_residual.im
            )?;
        }
    }
    Ok(())
}

fn sweep_spec(
    axes: &[String],
    tie: Option<&str>,
    fixed: SystemParams,
    solver: SolverArgs,
) -> Result<SweepSpec, Failure> {
    let axes: Vec<Axis> = axes
        .iter()
        .map(|a| Axis::parse(a))
        .collect::<Result<_, _>>()?;
    let mut spec = match axes.as_slice() {
        [a] => SweepSpec::line(*a, fixed),
        [a, b] => SweepSpec::plane(*a, *b, fixed),
        _ => return Err(Failure::Invalid("give one or two --axis values".into())),
    }
    .with_engine(solver.engine.into())
    .with_n_max(solver.nmax);
    if let Some(tie) = tie {
        spec = spec.with_constraint(Constraint::parse(tie)?);
    }
    spec.validate()?;
    Ok(spec)
}

fn grids(specs: Vec<SweepSpec>, output: &OutputArgs) -> Result<(), Failure> {
    let jobs = output.jobs.unwrap_or_else(rayon::current_num_threads);
    let results: Vec<GridResult> = specs
        .iter()
        .map(|s| run_grid_with_jobs(s, jobs))
        .collect::<Result<_, _>>()?;

    let sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match output.format {
        Format::Csv => write_csv(&mut sink, &results)?,
        Format::Json => write_json(&mut sink, &results)?,
    }
    sink.flush()?;

    for grid in &results {
        summarize(grid, output.refine)?;
    }
    Ok(())
}

fn summarize(grid: &GridResult, refine: bool) -> Result<(), Failure> {
    let spec = &grid.spec;
    let label = match spec.axis2 {
        Some(a2) => format!("{} x {}", spec.axis1.param, a2.param),
        None => format!(
            "{} (fixed {:?})",
            spec.axis1.param,
            (spec.fixed.delta_a, spec.fixed.g)
        ),
    };
    eprintln!(
        "{label}: {} cells, {} failed",
        grid.cells.len(),
        grid.failures().len()
    );
    for m in find_minima(grid).iter().take(10) {
        let m = if refine {
            refine_minimum(spec, m, 3)?
        } else {
            *m
        };
        eprintln!(
            "  minimum g2 = {:.5e} at ({:.4}, {:.4})",
            m.g2, m.refined.0, m.refined.1
        );
    }
    Ok(())
}

fn dressed(p: SystemParams, n: usize) -> Result<(), Failure> {
    p.validate()?;
    if n == 0 {
        return Err(Failure::Invalid("n must be at least 1".into()));
    }
    for branch in [Branch::Plus, Branch::Minus] {
        let level = dressed_state(&p, n, branch)?;
        println!(
            "|{n},{}>  E = {:+.6}  |{n},g> {:+.6}  |{},e> {:+.6}",
            if branch == Branch::Plus { '+' } else { '-' },
            level.energy,
            level.amp_g,
            n - 1,
            level.amp_e
        );
    }
    for branch in [Branch::Plus, Branch::Minus] {
        if let Ok(d) = two_photon_detuning(&p, branch, 1e-9) {
            println!("two-photon detuning ({branch:?}) = {d:+.6}");
        }
    }
    Ok(())
}

fn optimal(p: SystemParams, overlay: Option<f64>) -> Result<(), Failure> {
    p.validate()?;
    let (g, kappa, gamma) = (p.g, p.kappa, p.gamma);
    println!(
        "minimum coupling for interference blockade: {:.6}",
        ucpb_min_coupling(kappa, gamma)
    );
    let pairs = ucpb_optimal_pairs(g, kappa, gamma);
    if pairs.is_empty() {
        println!("no interference optimum at g = {g}");
    }
    for pair in pairs {
        println!(
            "interference optimum: delta0 = {:+.6}, delta_a = {:+.6}",
            pair.delta0, pair.delta_a
        );
    }
    if p.delta_a != 0.0 {
        let pair = cpb_pair(g, p.delta_a)?;
        println!(
            "dressed-state optimum: delta0 = {:+.6} at delta_a = {:+.6}",
            pair.delta0, pair.delta_a
        );
        let minima = interference_minimum_delta0(g, p.delta_a).detunings();
        if minima.is_empty() {
            println!("no strong-coupling interference minimum (|delta_a| < 2g)");
        }
        for d in minima {
            println!("strong-coupling interference minimum: delta0 = {d:+.6}");
        }
    }
    if let Some(half) = overlay {
        if !(half > 0.0 && half.is_finite()) {
            return Err(Failure::Invalid(
                "--overlay needs a positive half-width".into(),
            ));
        }
        let curves = overlay_curves(&Region::square(half), g, kappa, gamma, 400);
        serde_json::to_writer_pretty(io::stdout().lock(), &curves).map_err(io::Error::from)?;
        println!();
    }
    Ok(())
}

fn check(criteria: Vec<u8>) -> Result<(), Failure> {
    let ids: Vec<u8> = if criteria.is_empty() {
        acceptance::CRITERIA.iter().map(|c| c.0).collect()
    } else {
        criteria
    };
    let mut unmet = 0;
    for id in ids {
        match acceptance::run(id) {
            Ok(outcome) => {
                print!("{outcome}");
                unmet += usize::from(!outcome.passed());
            }
            Err(e @ Error::InvalidSpec(_)) => return Err(e.into()),
            Err(e) => {
                println!("[FAIL] criterion {id:>2}: could not run: {e}");
                unmet += 1;
            }
        }
    }
    if unmet > 0 {
        Err(Failure::Unmet(unmet))
    } else {
        Ok(())
    }
}
