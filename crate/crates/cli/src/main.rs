use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use planejump::arith::{fmt_rational, parse_rational, Rational, DEFAULT_DEPTH_LIMIT};
use planejump::corpus::{random_diagram, CorpusConfig};
use planejump::jumping::{criterion_value, jumping_numbers, verify_relevance};
use planejump::oracle::oracle_jumping_numbers;
use planejump::puiseux::parse;
use planejump::resolution::ResolutionData;
use planejump_cli::report::{CheckOutput, JumpOutput, OracleOutput, RelevanceOutput, ResolveReport};
use planejump_cli::{load, CliError, Source};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "planejump", version, about = "Jumping numbers and relevant divisors of plane curve singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exceptional divisors with a, k, self-intersection and valence
    Resolve(Common),
    /// Jumping numbers up to the bound with critical and contributing divisors
    Jump(Common),
    /// Relevance table with witnesses and the lct contributors
    Relevance(Common),
    /// Jumping numbers below 1 from the Newton polygon (nondegenerate input only)
    Oracle(Common),
    /// Dual graph of the resolution in DOT
    Graph(Common),
    /// Relevance theorem and lemma checks on random diagrams
    Check {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct Common {
    /// Polynomial in x and y with rational coefficients
    #[arg(long, conflicts_with_all = ["branches", "diagram"], required_unless_present_any = ["branches", "diagram"])]
    poly: Option<String>,
    /// Branch file (json)
    #[arg(long, conflicts_with = "diagram")]
    branches: Option<PathBuf>,
    /// Diagram file (json)
    #[arg(long)]
    diagram: Option<PathBuf>,
    /// Upper bound p/q for reported jumping numbers
    #[arg(long, default_value = "1")]
    bound: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximal height of algebraic extension towers in the expansion
    #[arg(long, default_value_t = DEFAULT_DEPTH_LIMIT)]
    ext_depth: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl Common {
    fn source(&self) -> Source {
        match (&self.poly, &self.branches, &self.diagram) {
            (Some(p), _, _) => Source::Poly(p.clone()),
            (_, Some(b), _) => Source::Branches(b.clone()),
            (_, _, Some(d)) => Source::Diagram(d.clone()),
            _ => unreachable!("clap requires one input"),
        }
    }

    fn bound(&self) -> Result<Rational, CliError> {
        match parse_rational(&self.bound) {
            Some(b) if b > Rational::from_integer(0.into()) => Ok(b),
            _ => Err(CliError::Input(format!("bound must be a positive rational p/q, got {:?}", self.bound))),
        }
    }

    fn resolution(&self) -> Result<(planejump_cli::Loaded, ResolutionData), CliError> {
        let loaded = load(&self.source(), self.ext_depth)?;
        let r = ResolutionData::new(&loaded.diagram)?;
        Ok((loaded, r))
    }
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Text => text(value),
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Resolve(c) => {
            let (loaded, r) = c.resolution()?;
            let report = ResolveReport::new(&r, loaded.branches.as_deref());
            Ok(emit(c.format, &report, ResolveReport::render))
        }
        Command::Jump(c) => {
            let bound = c.bound()?;
            let (_, r) = c.resolution()?;
            verify_relevance(&r)?;
            let out = JumpOutput::new(&r, &jumping_numbers(&r, &bound)?);
            Ok(emit(c.format, &out, JumpOutput::render))
        }
        Command::Relevance(c) => {
            let (_, r) = c.resolution()?;
            verify_relevance(&r)?;
            let out = RelevanceOutput::new(&r, &jumping_numbers(&r, &Rational::from_integer(1.into()))?);
            Ok(emit(c.format, &out, RelevanceOutput::render))
        }
        Command::Oracle(c) => {
            let text = c
                .poly
                .as_ref()
                .ok_or_else(|| CliError::Input("oracle needs --poly".into()))?;
            let bound = c.bound()?.min(Rational::from_integer(1.into()));
            let f = parse(text)?;
            let out = OracleOutput {
                polynomial: f.display_with("x", "y"),
                bound: fmt_rational(&bound),
                jumping_numbers: oracle_jumping_numbers(&f, &bound)?.iter().map(fmt_rational).collect(),
            };
            Ok(emit(c.format, &out, OracleOutput::render))
        }
        Command::Graph(c) => {
            let (_, r) = c.resolution()?;
            Ok(r.to_dot())
        }
        Command::Check { seed, count, format } => {
            let out = check(seed, count);
            let text = emit(format, &out, CheckOutput::render);
            if out.violations.is_empty() {
                Ok(text)
            } else {
                print!("{text}");
                Err(CliError::Invariant(format!("{} violations", out.violations.len())))
            }
        }
    }
}

fn check(seed: u64, count: usize) -> CheckOutput {
    let mut rng = StdRng::seed_from_u64(seed);
    let cfg = CorpusConfig::default();
    let mut out = CheckOutput {
        seed,
        diagrams: count,
        divisors: 0,
        relevant: 0,
        violations: Vec::new(),
    };
    for i in 0..count {
        let d = random_diagram(&mut rng, &cfg);
        let r = match ResolutionData::new(&d) {
            Ok(r) => r,
            Err(e) => {
                out.violations.push(format!("diagram {i}: {e}"));
                continue;
            }
        };
        if let Err(e) = verify_relevance(&r) {
            out.violations.push(format!("diagram {i}: {e}"));
        }
        for j in 0..r.num_exceptional() {
            out.divisors += 1;
            if r.valence(j) >= 3 {
                out.relevant += 1;
            }
            if r.self_intersection(j) != -1 - d.proximate_to(j).len() as i64 {
                out.violations.push(format!("diagram {i}: E{j} has self-intersection {}", r.self_intersection(j)));
            }
            if r.dot(r.a(), j) != 0 {
                out.violations.push(format!("diagram {i}: pullback meets E{j}"));
            }
            let a = r.a()[j];
            for t in 1..=2 * a {
                let l = Rational::new(t.into(), a.into());
                if criterion_value(&r, j, &l) >= r.valence(j) as i64 {
                    out.violations.push(format!("diagram {i}: E{j} exceeds its valence at {}", fmt_rational(&l)));
                }
            }
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are input errors; help and version go through here too.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
