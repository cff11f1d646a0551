mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geolab::systole::bracket;
use geolab::{
    census_of_length, pair_classes, render_svg, self_intersection, standard_config, upper_bound, verify, Census,
    CyclicWord, Fault, OracleError, SchottkyConfig, SurfaceKind, SystoleRecord, VerifyConfig, WordError,
};
use serde::Serialize;

use config::{Format, RunConfig};

const WORD_HELP: &str = "Words use the letters a, A, b, B, where A and B are the inverses of a and b. \
Input is freely and cyclically reduced before use, so `abA` means `b`.";

#[derive(Parser)]
#[command(name = "geolab", version, about = "Self-intersection numbers and combinatorial k-systoles on the pants and punctured torus", after_help = WORD_HELP)]
struct Cli {
    /// Surface: pants or torus.
    #[arg(long, global = true, value_parser = parse_surface)]
    surface: Option<SurfaceKind>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Translation length of the generator a in the numeric oracle.
    #[arg(long, global = true)]
    lambda_a: Option<f64>,
    /// Translation length of the generator b in the numeric oracle.
    #[arg(long, global = true)]
    lambda_b: Option<f64>,
    /// Worker threads for enumeration.
    #[arg(long, global = true, env = "GEOLAB_WORKERS")]
    workers: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key=value settings file (surface, lambda_a, lambda_b, format, workers, length_cap, k_cap).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Self-intersection number of one class.
    Selfint {
        word: String,
        /// Cross-check against the numeric hyperbolic oracle.
        #[arg(long)]
        oracle: bool,
        /// List the linked lift pairs and their classes.
        #[arg(long)]
        show_pairs: bool,
    },
    /// Every primitive class up to a length, with its self-intersection number.
    Enumerate {
        #[arg(long)]
        max_length: usize,
    },
    /// Combinatorial k-systoles for k = 1..k_max.
    Sequence {
        #[arg(long)]
        k_max: usize,
    },
    /// Combinatorial k-systole for a single k.
    Systole {
        #[arg(long)]
        k: usize,
    },
    /// SVG of the fundamental domain with the lifts of a class.
    Render { word: String },
    /// Run the finite-range checks and exit 1 if any fails.
    Verify {
        #[arg(long)]
        max_length: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn parse_surface(s: &str) -> Result<SurfaceKind, String> {
    s.parse().map_err(|e: geolab::ChartError| e.to_string())
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 64,
            message: message.into(),
        }
    }

    fn io(e: io::Error) -> Failure {
        Failure {
            code: 74,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::io(e)
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    let code = match e {
        OracleError::NonPositiveLength(..) | OracleError::Overlap(..) | OracleError::Arrangement(..) => 64,
        OracleError::NonPrimitive(_) => 65,
        _ => 2,
    };
    Failure {
        code,
        message: e.to_string(),
    }
}

type Out = BufWriter<Box<dyn Write>>;

struct Ctx {
    run: RunConfig,
    out_path: Option<PathBuf>,
}

impl Ctx {
    fn surface(&self) -> Result<SurfaceKind, Failure> {
        self.run.surface.ok_or_else(|| Failure::usage("--surface is required"))
    }

    fn format(&self, default: Format) -> Format {
        self.run.format.unwrap_or(default)
    }

    fn writer(&self) -> Result<Out, Failure> {
        let sink: Box<dyn Write> = match &self.out_path {
            Some(p) => Box::new(File::create(p).map_err(|e| Failure {
                code: 74,
                message: format!("{}: {e}", p.display()),
            })?),
            None => Box::new(io::stdout().lock()),
        };
        Ok(BufWriter::new(sink))
    }

    fn oracle(&self, kind: SurfaceKind) -> Result<SchottkyConfig, Failure> {
        standard_config(kind, self.run.lambda_a, self.run.lambda_b).map_err(oracle_failure)
    }
}

fn parse_word(text: &str) -> Result<CyclicWord, Failure> {
    let w = CyclicWord::parse(text).map_err(|e| match e {
        WordError::Identity => Failure::usage(format!("{text:?} reduces to the identity")),
        other => Failure::usage(other.to_string()),
    })?;
    if !w.is_primitive() {
        return Err(Failure {
            code: 65,
            message: format!("{w} is a proper power; only primitive classes are supported"),
        });
    }
    Ok(w)
}

#[derive(Serialize)]
struct PairRow {
    i: usize,
    j: usize,
    conjugate: String,
    representative: String,
}

#[derive(Serialize)]
struct SelfintRow {
    word: String,
    surface: SurfaceKind,
    #[serde(rename = "L")]
    length: usize,
    i: usize,
    bound: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<PairRow>>,
}

fn cmd_selfint(ctx: &Ctx, word: &str, oracle: bool, show_pairs: bool) -> Result<(), Failure> {
    let kind = ctx.surface()?;
    let w = parse_word(word)?;
    let i = self_intersection(kind, &w).map_err(|e| Failure::usage(e.to_string()))?;
    let numeric = if oracle {
        Some(
            ctx.oracle(kind)?
                .numeric_self_intersection(&w)
                .map_err(oracle_failure)?,
        )
    } else {
        None
    };
    let pairs = if show_pairs {
        let rows = pair_classes(kind, &w)
            .map_err(|e| Failure::usage(e.to_string()))?
            .into_iter()
            .map(|(p, c)| PairRow {
                i: p.i,
                j: p.j,
                conjugate: c.conjugate.to_string(),
                representative: c.representative.to_string(),
            })
            .collect();
        Some(rows)
    } else {
        None
    };
    let row = SelfintRow {
        word: w.to_string(),
        surface: kind,
        length: w.len(),
        i,
        bound: upper_bound(kind, w.len()),
        oracle: numeric,
        pairs,
    };
    let mut out = ctx.writer()?;
    match ctx.format(Format::Text) {
        Format::Json => writeln!(out, "{}", serde_json::to_string(&row).expect("serializable"))?,
        Format::Csv | Format::Text => {
            writeln!(out, "{i}")?;
            if let Some(n) = numeric {
                writeln!(out, "oracle {n}")?;
            }
            for p in row.pairs.iter().flatten() {
                writeln!(
                    out,
                    "pair {},{} conjugate={} representative={}",
                    p.i, p.j, p.conjugate, p.representative
                )?;
            }
        }
    }
    out.flush()?;
    match numeric {
        Some(n) if n != i => Err(Failure {
            code: 2,
            message: format!("oracle mismatch: combinatorial {i}, numeric {n}"),
        }),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct ClassRow<'a> {
    word: &'a str,
    #[serde(rename = "L")]
    length: usize,
    i: usize,
    saturates_bound: bool,
}

fn cap_exceeded(what: &str, value: usize, cap: usize) -> Failure {
    Failure {
        code: 66,
        message: format!("{what} {value} exceeds the cap {cap}"),
    }
}

fn cmd_enumerate(ctx: &Ctx, max_length: usize) -> Result<(), Failure> {
    let kind = ctx.surface()?;
    if max_length == 0 {
        return Err(Failure::usage("--max-length must be at least 1"));
    }
    if max_length > ctx.run.length_cap {
        return Err(cap_exceeded("--max-length", max_length, ctx.run.length_cap));
    }
    let format = ctx.format(Format::Csv);
    let mut out = ctx.writer()?;
    if format != Format::Json {
        writeln!(out, "word,L,i,saturates_bound")?;
    }
    for len in 1..=max_length {
        for r in census_of_length(kind, len) {
            let word = r.word.to_string();
            let row = ClassRow {
                word: &word,
                length: r.length,
                i: r.self_intersection,
                saturates_bound: r.saturates_bound(),
            };
            if format == Format::Json {
                writeln!(out, "{}", serde_json::to_string(&row).expect("serializable"))?;
            } else {
                writeln!(out, "{},{},{},{}", row.word, row.length, row.i, row.saturates_bound)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct SystoleRow {
    k: usize,
    s_k: usize,
    #[serde(rename = "I_k")]
    i_k: usize,
    excess: usize,
    witnesses: Vec<String>,
    /// `lemma` when a closed formula predicts the row, `empirical` otherwise.
    status: &'static str,
}

fn systole_row(kind: SurfaceKind, r: &SystoleRecord) -> SystoleRow {
    let n = bracket(r.k);
    let status = if kind == SurfaceKind::Pants && r.k <= n * n {
        "empirical"
    } else {
        "lemma"
    };
    SystoleRow {
        k: r.k,
        s_k: r.length,
        i_k: r.max_intersection,
        excess: r.excess(),
        witnesses: r.witnesses.iter().map(|w| w.to_string()).collect(),
        status,
    }
}

fn write_systoles(ctx: &Ctx, kind: SurfaceKind, records: &[SystoleRecord]) -> Result<(), Failure> {
    let format = ctx.format(Format::Csv);
    let mut out = ctx.writer()?;
    if format != Format::Json {
        writeln!(out, "k,s_k,I_k,I_k-k,witnesses")?;
    }
    for r in records {
        let row = systole_row(kind, r);
        if format == Format::Json {
            writeln!(out, "{}", serde_json::to_string(&row).expect("serializable"))?;
        } else {
            writeln!(
                out,
                "{},{},{},{},{}",
                row.k,
                row.s_k,
                row.i_k,
                row.excess,
                row.witnesses.join(";")
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn check_k(ctx: &Ctx, flag: &str, k: usize) -> Result<(), Failure> {
    if k == 0 {
        return Err(Failure::usage(format!("{flag} must be at least 1")));
    }
    if k > ctx.run.k_cap {
        return Err(cap_exceeded(flag, k, ctx.run.k_cap));
    }
    Ok(())
}

fn cmd_sequence(ctx: &Ctx, k_max: usize) -> Result<(), Failure> {
    let kind = ctx.surface()?;
    check_k(ctx, "--k-max", k_max)?;
    let records = Census::new(kind)
        .sequence(k_max)
        .map_err(|e| Failure::usage(e.to_string()))?;
    write_systoles(ctx, kind, &records)
}

fn cmd_systole(ctx: &Ctx, k: usize) -> Result<(), Failure> {
    let kind = ctx.surface()?;
    check_k(ctx, "--k", k)?;
    let record = Census::new(kind)
        .systole(k)
        .map_err(|e| Failure::usage(e.to_string()))?;
    write_systoles(ctx, kind, &[record])
}

fn cmd_render(ctx: &Ctx, word: &str) -> Result<(), Failure> {
    let kind = ctx.surface()?;
    let w = parse_word(word)?;
    let svg = render_svg(&ctx.oracle(kind)?, &w).map_err(oracle_failure)?;
    let mut out = ctx.writer()?;
    out.write_all(svg.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_verify(ctx: &Ctx, max_length: Option<usize>, k_max: Option<usize>, inject_fault: bool) -> Result<(), Failure> {
    let kinds = match ctx.run.surface {
        Some(k) => vec![k],
        None => SurfaceKind::ALL.to_vec(),
    };
    let format = ctx.format(Format::Text);
    let mut out = ctx.writer()?;
    let mut ok = true;
    for kind in kinds {
        let default_length = match kind {
            SurfaceKind::Pants => 9,
            SurfaceKind::PuncturedTorus => 10,
        };
        let mut cfg = VerifyConfig::new(kind, max_length.unwrap_or(default_length), k_max.unwrap_or(20));
        cfg.lambda_a = ctx.run.lambda_a;
        cfg.lambda_b = ctx.run.lambda_b;
        if inject_fault {
            cfg.fault = Some(Fault::FlipBound);
        }
        let report = verify(&cfg);
        ok &= report.passed();
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(&report).expect("serializable"))?,
            _ => writeln!(out, "{report}")?,
        }
    }
    out.flush()?;
    if ok {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "verification failed".into(),
        })
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut run = RunConfig::default();
    if let Some(path) = &cli.config {
        run.load(path).map_err(Failure::usage)?;
    }
    let overrides = [("lambda_a", cli.lambda_a), ("lambda_b", cli.lambda_b)];
    for (key, value) in overrides {
        if let Some(v) = value {
            run.set(key, &v.to_string()).map_err(Failure::usage)?;
        }
    }
    if cli.surface.is_some() {
        run.surface = cli.surface;
    }
    if cli.format.is_some() {
        run.format = cli.format;
    }
    if cli.workers.is_some() {
        run.workers = cli.workers;
    }
    if let Some(n) = run.workers {
        if n == 0 {
            return Err(Failure::usage("--workers must be at least 1"));
        }
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let ctx = Ctx { run, out_path: cli.out };
    match cli.command {
        Command::Selfint {
            word,
            oracle,
            show_pairs,
        } => cmd_selfint(&ctx, &word, oracle, show_pairs),
        Command::Enumerate { max_length } => cmd_enumerate(&ctx, max_length),
        Command::Sequence { k_max } => cmd_sequence(&ctx, k_max),
        Command::Systole { k } => cmd_systole(&ctx, k),
        Command::Render { word } => cmd_render(&ctx, &word),
        Command::Verify {
            max_length,
            k_max,
            inject_fault,
        } => cmd_verify(&ctx, max_length, k_max, inject_fault),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("geolab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
