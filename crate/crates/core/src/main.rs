use std::path::{Path, PathBuf};
use std::process::ExitCode;

use birat::cli::{self, Answer3, Overrides, Report};
use birat::Error;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "birat", version, about = "Exact checks for rational maps between varieties")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Job file(s); several files are run as a batch.
    #[arg(long = "job", global = true, num_args = 1..)]
    jobs_files: Vec<PathBuf>,
    /// Write the report here instead of stdout (a directory in batch mode).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    budget_spairs: Option<usize>,
    #[arg(long, global = true)]
    budget_degree: Option<u32>,
    /// Largest Nullstellensatz certificate degree tried.
    #[arg(long, global = true)]
    cert_cap: Option<u32>,
    /// Largest monoid degree tried when fitting witnesses.
    #[arg(long, global = true)]
    monoid_cap: Option<u32>,
    /// `q` or `fp:<p>`; overrides the job's field.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Worker threads for batch runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    CheckBirational,
    CheckDominant,
    CheckRegular,
    CheckEmbedding,
    CheckIso,
    BuildSystem,
    BuildWplus,
    BuildDominance,
    ConstructWitness,
    VerifyWitness,
    ToySolve,
    Certify,
    Groebner,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::CheckBirational => "check-birational",
            Command::CheckDominant => "check-dominant",
            Command::CheckRegular => "check-regular",
            Command::CheckEmbedding => "check-embedding",
            Command::CheckIso => "check-iso",
            Command::BuildSystem => "build-system",
            Command::BuildWplus => "build-wplus",
            Command::BuildDominance => "build-dominance",
            Command::ConstructWitness => "construct-witness",
            Command::VerifyWitness => "verify-witness",
            Command::ToySolve => "toy-solve",
            Command::Certify => "certify",
            Command::Groebner => "groebner",
        }
    }
}

fn run_file(command: &str, path: &Path, ov: &Overrides) -> Report {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Report::error(command, &Error::Input(format!("{}: {e}", path.display()))),
    };
    match cli::parse_job(&text) {
        Ok(job) => cli::run(command, &job, ov, path.parent().unwrap_or(Path::new("."))),
        Err(e) => Report::error(command, &e),
    }
}

fn write(out: Option<&Path>, report: &Report) -> std::io::Result<()> {
    let text = report.to_json();
    match out {
        Some(p) => std::fs::write(p, text + "\n"),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = args.command.name();
    let ov = Overrides {
        spairs: args.budget_spairs,
        degree: args.budget_degree,
        cert_cap: args.cert_cap,
        monoid_cap: args.monoid_cap,
        field: args.field.clone(),
    };
    if args.jobs_files.is_empty() {
        let r = Report::error(command, &Error::Input("no --job given".into()));
        let _ = write(None, &r);
        return ExitCode::from(3);
    }

    if args.jobs_files.len() == 1 {
        let r = run_file(command, &args.jobs_files[0], &ov);
        match write(args.out.as_deref(), &r) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                eprintln!("cannot write report: {e}");
                return ExitCode::from(3);
            }
            _ => {}
        }
        return ExitCode::from(r.exit_code as u8);
    }

    // batch: reports keep the order of the job list whatever the thread count
    let files = &args.jobs_files;
    let mut reports: Vec<Option<Report>> = vec![None; files.len()];
    let workers = args.jobs.max(1).min(files.len());
    let next = std::sync::atomic::AtomicUsize::new(0);
    let done = std::sync::Mutex::new(&mut reports);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= files.len() {
                    break;
                }
                let r = run_file(command, &files[i], &ov);
                done.lock().unwrap()[i] = Some(r);
            });
        }
    });

    let mut worst = Answer3::Yes;
    for (path, r) in files.iter().zip(reports.into_iter().flatten()) {
        let out = args.out.as_ref().map(|dir| {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("job");
            dir.join(format!("{stem}.report.json"))
        });
        if let Some(dir) = &args.out {
            let _ = std::fs::create_dir_all(dir);
        }
        if let Err(e) = write(out.as_deref(), &r) {
            eprintln!("cannot write report for {}: {e}", path.display());
            worst = Answer3::Error;
        }
        worst = worst.max_severity(r.verdict);
    }
    ExitCode::from(worst.exit_code() as u8)
}
