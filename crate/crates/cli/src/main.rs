use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use klr_workbench::{parse_config, primary_param, render, run_command, run_tasks, Settings, WorkbenchConfig, COMMANDS};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Human,
    Json,
    Both,
}

/// Workbench for KLR algebras, categorified quantum groups and their representations.
///
/// `klrw -c CONFIG run` executes every task section of the config. Any other
/// COMMAND runs once with ARGS given as key=value pairs; a bare value fills the
/// command's main parameter. Without a config the graph is a single vertex `1`.
#[derive(Parser, Debug)]
#[command(name = "klrw", version)]
struct Cli {
    /// Config file with [graph], [weight <name>] and [task <id>] sections.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Only run the task with this id (with `run`).
    #[arg(long)]
    task: Option<String>,
    /// Number of tasks run at once; overrides KLRW_JOBS.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// `run` or one of the workbench commands.
    command: String,
    args: Vec<String>,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("klrw: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut settings = match Settings::from_env() {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    if let Some(j) = cli.jobs {
        settings.jobs = j.max(1);
    }
    let cfg = match &cli.config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return usage_error(&format!("cannot read {}: {e}", path.display())),
            };
            if let Some(dir) = path.parent() {
                settings.base_dir = dir.to_path_buf();
            }
            match parse_config(&text) {
                Ok(c) => c,
                Err(e) => return usage_error(&format!("{}: {e}", path.display())),
            }
        }
        None => WorkbenchConfig::default_sl2(),
    };

    let reports = if cli.command == "run" {
        if !cli.args.is_empty() {
            return usage_error("run takes no arguments");
        }
        let tasks: Vec<_> = cfg.tasks.iter().filter(|t| cli.task.as_ref().is_none_or(|id| &t.id == id)).cloned().collect();
        if tasks.is_empty() {
            return usage_error(match &cli.task {
                Some(id) => format!("no task '{id}' in the config"),
                None => "the config has no task sections".to_string(),
            }.as_str());
        }
        run_tasks(&cfg, &settings, &tasks)
    } else {
        if !COMMANDS.contains(&cli.command.as_str()) {
            return usage_error(&format!("unknown command '{}'; expected run or one of {}", cli.command, COMMANDS.join(", ")));
        }
        let mut params = Vec::new();
        for a in &cli.args {
            match a.split_once('=') {
                Some((k, v)) => params.push((k.trim().to_string(), v.trim().to_string())),
                None => match primary_param(&cli.command) {
                    Some(k) if !params.iter().any(|(p, _)| p == k) => params.push((k.to_string(), a.clone())),
                    _ => return usage_error(&format!("argument '{a}' should be key=value")),
                },
            }
        }
        vec![run_command(&cfg, &settings, "cli", &cli.command, &params)]
    };

    let (human, structured) = match cli.format {
        Format::Human => (true, false),
        Format::Json => (false, true),
        Format::Both => (true, true),
    };
    print!("{}", render(&reports, human, structured));
    if reports.iter().all(|r| r.status.is_ok()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
