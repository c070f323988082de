mod report;
mod run;
mod task;

use clap::{Args, Parser, Subcommand, ValueEnum};
use report::Report;
use run::{run_task, Overrides};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use task::{read_task, CliError, FileRef, FormationRef, GroupRef, Source, Subgroups, TaskFile, TaskKind};

#[derive(Parser)]
#[command(name = "hyperclass", version, about = "Tate hypercohomology, class complexes and Weil groups of finite groups")]
struct Cli {
    /// cohomology window: degrees with |q| < window
    #[arg(long, global = true)]
    window: Option<usize>,
    /// seed for randomized suites
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// evaluate independent checks concurrently
    #[arg(long, global = true)]
    parallel: bool,
    /// report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// bound on intermediate ranks while shifting
    #[arg(long, global = true)]
    rank_budget: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tate cohomology of a module (trivial Z by default)
    Cohomology(CoeffArgs),
    /// Tate hypercohomology of a bounded complex
    Hyper(CoeffArgs),
    /// Replace a complex by a single module up to a degree shift
    Shift(CoeffArgs),
    /// Cup with the fundamental class on every subgroup
    Nakayama(NakayamaArgs),
    /// Build or verify the Weil group of a class complex
    Weil {
        #[command(subcommand)]
        cmd: WeilCmd,
    },
    /// Gate, build, axioms, Artin maps and cup table for formations
    Suite(SuiteArgs),
    /// Run a task file
    Run {
        task: PathBuf,
    },
}

#[derive(Args)]
struct CoeffArgs {
    /// group name (C4, V4, S3, D4, Q8, C2xC3, ...) or a group JSON file
    #[arg(long)]
    group: String,
    /// module JSON file
    #[arg(long)]
    module: Option<PathBuf>,
    /// complex JSON file
    #[arg(long, conflicts_with = "module")]
    complex: Option<PathBuf>,
    /// lowest degree
    #[arg(long, allow_negative_numbers = true)]
    from: Option<i32>,
    /// highest degree
    #[arg(long, allow_negative_numbers = true)]
    to: Option<i32>,
    /// "whole" or "all"
    #[arg(long)]
    subgroups: Option<String>,
    /// reference value for the whole group, as DEGREE=GROUP
    #[arg(long = "expect", value_parser = key_value, allow_hyphen_values = true)]
    expect: Vec<(String, String)>,
}

#[derive(Args)]
struct NakayamaArgs {
    /// formation label, e.g. relation_module(S3)
    #[arg(long)]
    formation: String,
    /// lowest degree
    #[arg(long, allow_negative_numbers = true)]
    from: Option<i32>,
    /// highest degree
    #[arg(long, allow_negative_numbers = true)]
    to: Option<i32>,
    /// degree of the Sylow hypothesis
    #[arg(long, allow_negative_numbers = true)]
    q0: Option<i32>,
}

#[derive(Subcommand)]
enum WeilCmd {
    /// Build the Weil group and print its defining data
    Build {
        /// formation label, e.g. finite_field(4)
        #[arg(long)]
        formation: String,
        /// multiply the fundamental class (a corrupted control when not 1)
        #[arg(long, allow_negative_numbers = true)]
        beta_multiple: Option<i64>,
        /// also write the Weil group JSON here
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Class-complex gate, local data, the four axioms and Artin maps
    Verify {
        /// formation labels
        #[arg(long)]
        formation: Vec<String>,
        /// multiply the fundamental class (a corrupted control when not 1)
        #[arg(long, allow_negative_numbers = true)]
        beta_multiple: Option<i64>,
        /// group of an explicit class complex
        #[arg(long)]
        group: Option<String>,
        /// module JSON file
        #[arg(long)]
        module: Option<PathBuf>,
        /// complex JSON file
        #[arg(long, conflicts_with = "module")]
        complex: Option<PathBuf>,
        /// coordinates of the class in H^2, comma separated
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        class: Option<Vec<i64>>,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// formation labels; all built-in formations when omitted
    #[arg(long)]
    formation: Vec<String>,
    /// number of seeded random complexes to trivialize
    #[arg(long, default_value_t = 0)]
    random: usize,
    /// lowest degree
    #[arg(long, allow_negative_numbers = true)]
    from: Option<i32>,
    /// highest degree
    #[arg(long, allow_negative_numbers = true)]
    to: Option<i32>,
}

fn key_value(s: &str) -> Result<(String, String), String> {
    s.split_once('=').map(|(k, v)| (k.trim().to_string(), v.trim().to_string())).ok_or_else(|| format!("expected DEGREE=GROUP, got {s:?}"))
}

fn group_ref(s: &str) -> GroupRef {
    if Path::new(s).is_file() {
        GroupRef::File(FileRef { file: s.into() })
    } else {
        GroupRef::Name(s.into())
    }
}

fn file<T>(p: &Option<PathBuf>) -> Option<Source<T>> {
    p.as_ref().map(|f| Source::File(FileRef { file: f.clone() }))
}

fn range(from: Option<i32>, to: Option<i32>, default: [i32; 2]) -> Option<[i32; 2]> {
    (from.is_some() || to.is_some()).then(|| [from.unwrap_or(default[0]), to.unwrap_or(default[1])])
}

fn labels(fs: &[String]) -> Option<Vec<FormationRef>> {
    (!fs.is_empty()).then(|| fs.iter().map(|f| FormationRef::Label(f.clone())).collect())
}

fn coeff_task(kind: TaskKind, a: &CoeffArgs) -> TaskFile {
    TaskFile {
        kind,
        group: Some(group_ref(&a.group)),
        module: file(&a.module),
        complex: file(&a.complex),
        q: range(a.from, a.to, [-2, 2]),
        subgroups: a.subgroups.clone().map(Subgroups::Named),
        expected: a.expect.iter().cloned().collect(),
        ..Default::default()
    }
}

/// The task for a subcommand, with the directory its paths are relative to.
fn task_of(cmd: &Cmd) -> Result<(TaskFile, PathBuf), CliError> {
    let here = PathBuf::from(".");
    let t = match cmd {
        Cmd::Cohomology(a) => coeff_task(TaskKind::Cohomology, a),
        Cmd::Hyper(a) => {
            if a.complex.is_none() {
                return Err(CliError::Schema("hyper needs --complex".into()));
            }
            coeff_task(TaskKind::Hypercohomology, a)
        }
        Cmd::Shift(a) => coeff_task(TaskKind::Shift, a),
        Cmd::Nakayama(a) => TaskFile {
            kind: TaskKind::TateNakayama,
            formation: Some(FormationRef::Label(a.formation.clone())),
            q: range(a.from, a.to, [-3, 1]),
            q0: a.q0,
            ..Default::default()
        },
        Cmd::Weil { cmd: WeilCmd::Build { formation, beta_multiple, .. } } => TaskFile {
            kind: TaskKind::BuildWeil,
            formation: Some(FormationRef::Label(formation.clone())),
            beta_multiple: *beta_multiple,
            ..Default::default()
        },
        Cmd::Weil { cmd: WeilCmd::Verify { formation, beta_multiple, group, module, complex, class } } => TaskFile {
            kind: TaskKind::VerifyWeil,
            formations: labels(formation),
            beta_multiple: *beta_multiple,
            group: group.as_deref().map(group_ref),
            module: file(module),
            complex: file(complex),
            class: class.clone(),
            ..Default::default()
        },
        Cmd::Suite(a) => TaskFile {
            kind: TaskKind::ExampleSuite,
            formations: labels(&a.formation),
            random: (a.random > 0).then_some(a.random),
            q: range(a.from, a.to, [-3, 1]),
            ..Default::default()
        },
        Cmd::Run { task } => {
            let base = task.parent().map(Path::to_path_buf).unwrap_or(here);
            return Ok((read_task(task)?, base));
        }
    };
    Ok((t, here))
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let (t, base) = task_of(&cli.cmd)?;
    let o = Overrides { window: cli.window, seed: cli.seed, rank_budget: cli.rank_budget, parallel: cli.parallel };
    let rep = run_task(&t, &base, &o)?;
    if let Cmd::Weil { cmd: WeilCmd::Build { output: Some(path), .. } } = &cli.cmd {
        let w = rep.outputs.get("weil").ok_or_else(|| CliError::Compute("no Weil group in the report".into()))?;
        let text = serde_json::to_string_pretty(w).expect("json value");
        std::fs::write(path, text + "\n").map_err(|e| CliError::Compute(format!("{}: {e}", path.display())))?;
    }
    Ok(rep)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(rep) => {
            let text = match cli.format {
                Format::Json => rep.to_json() + "\n",
                Format::Text => rep.to_text(),
            };
            // a closed pipe (`| head`) is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(if rep.summary.failed > 0 { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("hyperclass: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
