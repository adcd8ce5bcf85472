use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dyniso::format::{self, Format};
use dyniso::iso::{self, IsoResult, Reason, Verdict};
use dyniso::partitioner::{
    OraclePartitioner, Partitioner, SeriesDepth, SeriesPartitioner, SymbolicPartitioner,
};
use dyniso::series::{self, TruncationPolicy};
use dyniso::sim::{self, Integrator};
use dyniso::{refine, Graph, Partition};

#[derive(Parser)]
#[command(
    name = "dyniso",
    version,
    about = "Graph partitioning and isomorphism through point dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition the vertices of one graph.
    Partition {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        method: MethodArgs,
        /// Print the refinement colour matrices (a1prime only).
        #[arg(long)]
        trace: bool,
    },
    /// Decide whether two graphs are isomorphic.
    Iso {
        input1: PathBuf,
        input2: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        method: MethodArgs,
        /// Print every chain step.
        #[arg(long)]
        trace: bool,
    },
    /// Dump the exact series coefficients.
    Series {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Last term to compute (default m^2).
        #[arg(long)]
        s_max: Option<usize>,
    },
    /// Integrate the point system from rest.
    Simulate {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = sim::DEFAULT_DT)]
        dt: f64,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        /// Emit one sample every this many steps (0: first and last only).
        #[arg(long, default_value_t = 100)]
        sample_every: usize,
        #[arg(long, value_enum, default_value_t = IntegratorArg::Yoshida4)]
        integrator: IntegratorArg,
    },
}

#[derive(Args)]
struct Common {
    /// Input format; guessed from the content when omitted.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Args)]
struct MethodArgs {
    #[arg(long, value_enum, default_value_t = Method::A1prime)]
    method: Method,
    /// Series depth for --method a1 (default m^2).
    #[arg(long)]
    s_max: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    A1,
    A1prime,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntegratorArg {
    Verlet,
    Yoshida4,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: dyniso::Error| e.to_string())
}

impl MethodArgs {
    fn validate(&self) -> anyhow::Result<()> {
        if self.s_max.is_some() && self.method != Method::A1 {
            bail!("--s-max only applies to --method a1");
        }
        if self.s_max == Some(0) {
            bail!("--s-max must be positive");
        }
        Ok(())
    }

    fn partitioner(&self) -> Box<dyn Partitioner> {
        match self.method {
            Method::A1 => Box::new(SeriesPartitioner {
                depth: self.s_max.map_or(SeriesDepth::Full, SeriesDepth::Fixed),
            }),
            Method::A1prime => Box::new(SymbolicPartitioner),
            Method::Oracle => Box::new(OraclePartitioner),
        }
    }
}

fn read_graph(path: &Path, format: Option<Format>) -> anyhow::Result<Graph> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
    } else {
        text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    let format = format.unwrap_or_else(|| guess_format(&text));
    format::parse_graph(&text, format).with_context(|| format!("parsing {}", path.display()))
}

fn guess_format(text: &str) -> Format {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.split_whitespace().next() == Some("n") => Format::EdgeList,
        _ if text.trim_start().starts_with('#') => Format::EdgeList,
        _ => Format::Graph6,
    }
}

fn warn_if_not_doubly_connected(g: &Graph) {
    if !g.is_doubly_connected() {
        eprintln!(
            "warning: input graph is not doubly connected; the partition may be less informative"
        );
    }
}

fn emit(out: &mut impl Write, value: &serde_json::Value) -> anyhow::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn cmd_partition(
    input: &Path,
    common: &Common,
    method: &MethodArgs,
    trace: bool,
) -> anyhow::Result<()> {
    method.validate()?;
    if trace && method.method != Method::A1prime {
        bail!("--trace only applies to --method a1prime");
    }
    let g = read_graph(input, common.format)?;
    warn_if_not_doubly_connected(&g);
    let mut out = io::stdout().lock();
    let (partition, meta): (Partition, (&str, usize)) = match method.method {
        Method::A1 => {
            let s = method
                .s_max
                .unwrap_or(TruncationPolicy::full(g.order()).s_max);
            let (coeffs, p) = series::run_series(&g, TruncationPolicy::fixed(s));
            (p, ("terms", coeffs.last_term()))
        }
        Method::A1prime => {
            let run = if trace {
                refine::run_refinement_traced(&g)?
            } else {
                refine::run_refinement(&g)?
            };
            if trace && common.output == Output::Text {
                write!(out, "{}", refine::render_trace(&run))?;
            }
            (
                refine::partition_from_colors(&run.state.c),
                ("refinement_steps", run.steps),
            )
        }
        Method::Oracle => (OraclePartitioner.partition(&g)?, ("orbits", 0)),
    };
    let name = method.partitioner().name();
    match common.output {
        Output::Text => {
            writeln!(out, "{partition}")?;
            match meta {
                ("orbits", _) => writeln!(out, "method: {name}")?,
                (key, v) => writeln!(out, "method: {name}, {}: {v}", key.replace('_', " "))?,
            }
        }
        Output::Structured => {
            let mut record = json!({
                "method": name,
                "order": g.order(),
                "partition": partition.to_string(),
                "classes": partition.classes(),
            });
            if meta.0 != "orbits" {
                record[meta.0] = json!(meta.1);
            }
            emit(&mut out, &record)?;
        }
    }
    Ok(())
}

fn reason_text(result: &IsoResult) -> &'static str {
    match result.reason {
        Reason::OrderMismatch => "order mismatch",
        Reason::DegreeMismatch => "degree partition mismatch",
        Reason::ConnectivityMismatch => "connectivity mismatch",
        Reason::Separated => "every candidate separated",
        Reason::Verified => "verified",
        Reason::Inconclusive => "no chain reached a verified mapping",
    }
}

fn cmd_iso(
    a: &Path,
    b: &Path,
    common: &Common,
    method: &MethodArgs,
    trace: bool,
) -> anyhow::Result<()> {
    method.validate()?;
    let g1 = read_graph(a, common.format)?;
    let g2 = read_graph(b, common.format)?;
    let partitioner = method.partitioner();
    let result = if g1.order() != g2.order() {
        IsoResult::order_mismatch(partitioner.name())
    } else if g1.order() == 1 {
        // single vertices: the identity is the mapping
        let gamma = vec![0];
        IsoResult {
            verdict: Verdict::Yes,
            reason: Reason::Verified,
            gamma: iso::verify_iso(&g1, &g2, &gamma)?.then_some(gamma),
            partitioner: partitioner.name(),
            complemented: false,
            attempts: vec![],
        }
    } else {
        iso::a2_decide(&g1, &g2, partitioner.as_ref())?
    };
    let mut out = io::stdout().lock();
    match common.output {
        Output::Structured => emit(&mut out, &serde_json::to_value(&result)?)?,
        Output::Text => {
            match result.verdict {
                Verdict::Yes => writeln!(out, "Yes")?,
                Verdict::No => writeln!(out, "No ({})", reason_text(&result))?,
                Verdict::DontKnow => writeln!(out, "Don't know ({})", reason_text(&result))?,
            }
            if let Some(gamma) = &result.gamma {
                let pairs: Vec<String> = gamma
                    .iter()
                    .enumerate()
                    .map(|(v, w)| format!("{}->{}", g1.label(v), g2.label(*w)))
                    .collect();
                writeln!(out, "gamma: {}", pairs.join(" "))?;
                writeln!(out, "mapping verified edge by edge")?;
            }
            if trace {
                if result.complemented {
                    writeln!(
                        out,
                        "both graphs disconnected; chains ran on the complements"
                    )?;
                }
                for attempt in &result.attempts {
                    writeln!(
                        out,
                        "chain from tau0 = {}: {:?}",
                        attempt.tau0, attempt.outcome
                    )?;
                    for step in &attempt.steps {
                        writeln!(
                            out,
                            "  Z_{}: sigma {} tau {} | {}",
                            step.j, step.sigma, step.tau, step.partition
                        )?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_series(input: &Path, common: &Common, s_max: Option<usize>) -> anyhow::Result<()> {
    let g = read_graph(input, common.format)?;
    let s = s_max.unwrap_or(TruncationPolicy::full(g.order()).s_max);
    let coeffs = series::series_up_to(&g, TruncationPolicy::fixed(s));
    series::scaled_integer_view(&coeffs)?;
    let mut out = io::BufWriter::new(io::stdout().lock());
    for record in series::coefficient_records(&coeffs) {
        match common.output {
            Output::Structured => writeln!(out, "{}", serde_json::to_string(&record)?)?,
            Output::Text if record.den == "1" => writeln!(
                out,
                "{} {} {} {} {}",
                record.matrix, record.n, record.i, record.j, record.num
            )?,
            Output::Text => writeln!(
                out,
                "{} {} {} {} {}/{}",
                record.matrix, record.n, record.i, record.j, record.num, record.den
            )?,
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_simulate(
    input: &Path,
    common: &Common,
    dt: f64,
    t_end: f64,
    sample_every: usize,
    integrator: IntegratorArg,
) -> anyhow::Result<()> {
    if dt.is_nan() || dt <= 0.0 || t_end.is_nan() || t_end < 0.0 {
        bail!("--dt must be positive and --t-end non-negative");
    }
    let g = read_graph(input, common.format)?;
    let integrator = match integrator {
        IntegratorArg::Verlet => Integrator::Verlet,
        IntegratorArg::Yoshida4 => Integrator::Yoshida4,
    };
    let traj = sim::trajectory(&g, t_end, dt, sample_every, integrator)?;
    let signature = sim::distance_signature(&traj.final_state);
    let mut out = io::BufWriter::new(io::stdout().lock());
    match common.output {
        Output::Structured => emit(
            &mut out,
            &json!({
                "samples": traj.samples,
                "final_state": traj.final_state,
                "max_drift": traj.max_drift,
                "distance_signature": signature,
            }),
        )?,
        Output::Text => {
            let m = g.order();
            let mut header = vec!["# t".to_string()];
            header.extend((0..m).flat_map(|i| (0..m).map(move |j| format!("x{i}_{j}"))));
            header.extend(["kinetic", "potential", "total", "drift"].map(String::from));
            writeln!(out, "{}", header.join("\t"))?;
            write!(out, "{}", sim::render_trajectory(&traj))?;
            let sig: Vec<String> = signature.iter().map(|d| format!("{d:.12}")).collect();
            writeln!(
                out,
                "# max_drift {:e} signature {}",
                traj.max_drift,
                sig.join(" ")
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("DYNISO_THREADS") {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("DYNISO_THREADS must be a positive integer, got {value:?}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Partition {
            input,
            common,
            method,
            trace,
        } => cmd_partition(input, common, method, *trace),
        Command::Iso {
            input1,
            input2,
            common,
            method,
            trace,
        } => cmd_iso(input1, input2, common, method, *trace),
        Command::Series {
            input,
            common,
            s_max,
        } => cmd_series(input, common, *s_max),
        Command::Simulate {
            input,
            common,
            dt,
            t_end,
            sample_every,
            integrator,
        } => cmd_simulate(input, common, *dt, *t_end, *sample_every, *integrator),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let internal = err.chain().any(|e| {
                e.downcast_ref::<dyniso::Error>()
                    .is_some_and(|e| e.is_internal())
            });
            ExitCode::from(if internal { 3 } else { 2 })
        }
    }
}
