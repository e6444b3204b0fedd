use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deferral::error::{Error, Result};
use deferral::extrapolate::{check_inputs, inputs_from_report, render};
use deferral::manifest::{absolutize, is_manifest, Command, Manifest};
use deferral::pipeline::{execute, load_dataset};
use deferral::report::write_report;
use deferral::scenario::{Format, Scenario};
use deferral::sites::{load_sites, save_sites, RowIssue};
use deferral::sweep::{run_sweep, write_sweep};
use deferral_core::simulation::NationalInputs;
use deferral_core::synthetic::{generate_synthetic, SyntheticProfile};
use deferral_core::SchemeConfig;

#[derive(Parser)]
#[command(name = "deferral", version, about = "Deferred-payment conservation auction simulator")]
struct Cli {
    /// Master seed; overrides the scenario's.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the scenario's (default `out`).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Report format; overrides the scenario's.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run both mechanisms on one scenario and write the reports.
    Run {
        /// Scenario `.toml`, or a `manifest.json` to reproduce.
        scenario: PathBuf,
    },
    /// Run a scenario over a grid of parameters.
    Sweep {
        /// Scenario `.toml`, or a `manifest.json` to reproduce.
        scenario: PathBuf,
        #[command(flatten)]
        axes: AxisArgs,
    },
    /// Generate a synthetic stand dataset.
    GenData {
        #[arg(long)]
        n_sites: Option<usize>,
        /// Synthetic profile (TOML); defaults apply to missing keys.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, default_value = "sites.csv")]
        output: PathBuf,
    },
    /// Check a scenario (`.toml`) or a stand dataset (CSV).
    Validate { input: PathBuf },
    /// Scale per-hectare averages to a national target.
    Extrapolate(ExtrapolateArgs),
}

#[derive(Args)]
struct AxisArgs {
    #[arg(long, value_delimiter = ',')]
    interest_rate: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    lending_period: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    instalment_count: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    bid_cap_scale: Option<Vec<f64>>,
    /// Seeds as a list (`1,2,5`) or an inclusive range (`1..20`).
    #[arg(long)]
    seeds: Option<String>,
}

#[derive(Args)]
struct ExtrapolateArgs {
    /// Target area, ha.
    #[arg(long, default_value_t = 54_000.0)]
    area: f64,
    #[arg(long, required_unless_present = "from_run")]
    avg_downpayment: Option<f64>,
    #[arg(long, required_unless_present = "from_run")]
    avg_instalment: Option<f64>,
    #[arg(long, required_unless_present = "from_run")]
    avg_upfront: Option<f64>,
    /// Take the averages from a `report.json`.
    #[arg(long, conflicts_with_all = ["avg_downpayment", "avg_instalment", "avg_upfront"])]
    from_run: Option<PathBuf>,
    /// Share of the area harvested before the up-front scheme reaches it.
    #[arg(long, default_value_t = 0.093)]
    harvest_share: f64,
    /// Scheme parameters (a scenario `.toml`); defaults otherwise.
    #[arg(long)]
    scenario: Option<PathBuf>,
}

fn parse_seeds(raw: &str) -> Result<Vec<u64>> {
    let bad = || Error::config(format!("--seeds: expected `a,b,c` or `a..b`, got `{raw}`"));
    if let Some((a, b)) = raw.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    raw.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

/// Loads a scenario or a manifest for `command` and applies global flags.
fn load_input(cli: &Cli, path: &Path, command: Command) -> Result<Scenario> {
    let mut scenario = if is_manifest(path) {
        let m = Manifest::load(path)?;
        if m.command != command {
            return Err(Error::config(format!("{}: manifest was written by `{:?}`", path.display(), m.command)));
        }
        m.scenario
    } else {
        let mut s = Scenario::load(path)?;
        absolutize(&mut s)?;
        s
    };
    scenario = scenario.resolved(cli.seed);
    if let Some(f) = cli.format {
        scenario.output.format = f.into();
    }
    Ok(scenario)
}

fn out_dir(cli: &Cli, scenario: &Scenario) -> PathBuf {
    cli.out_dir
        .clone()
        .or_else(|| scenario.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn report_issues(issues: &[RowIssue]) {
    if !issues.is_empty() {
        eprintln!("warning: {} input row(s) excluded", issues.len());
        for i in issues {
            eprintln!("  {i}");
        }
    }
}

fn cmd_run(cli: &Cli, path: &Path) -> Result<()> {
    let scenario = load_input(cli, path, Command::Run)?;
    let dir = out_dir(cli, &scenario);
    let result = execute(&scenario)?;
    report_issues(&result.dataset.issues);
    let outputs = write_report(&result, &dir, scenario.output.format)?;
    let manifest = Manifest::new(Command::Run, &scenario, outputs, result.dataset.issues.len());
    manifest.write(&dir)?;
    print!("{}", manifest.to_json());
    Ok(())
}

fn cmd_sweep(cli: &Cli, path: &Path, axes: &AxisArgs) -> Result<()> {
    let mut scenario = load_input(cli, path, Command::Sweep)?;
    let sw = &mut scenario.sweep;
    if let Some(v) = &axes.interest_rate {
        sw.interest_rate = v.clone();
    }
    if let Some(v) = &axes.lending_period {
        sw.lending_period = v.clone();
    }
    if let Some(v) = &axes.instalment_count {
        sw.instalment_count = v.clone();
    }
    if let Some(v) = &axes.bid_cap_scale {
        sw.bid_cap_scale = v.clone();
    }
    if let Some(v) = &axes.seeds {
        sw.seeds = parse_seeds(v)?;
    }
    let excluded = match scenario.dataset.path {
        Some(_) => {
            let d = load_dataset(&scenario)?;
            report_issues(&d.issues);
            d.issues.len()
        }
        None => 0,
    };
    let dir = out_dir(cli, &scenario);
    let rows = run_sweep(&scenario);
    for r in &rows {
        if let Some(e) = &r.error {
            eprintln!("warning: sweep point {} failed: {e}", r.point.index);
        }
    }
    let file = write_sweep(&rows, &dir, scenario.output.format)?;
    let manifest = Manifest::new(Command::Sweep, &scenario, vec![file], excluded);
    manifest.write(&dir)?;
    print!("{}", manifest.to_json());
    Ok(())
}

fn cmd_gen_data(cli: &Cli, n_sites: Option<usize>, profile: Option<&Path>, output: &Path) -> Result<()> {
    let mut p = match profile {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            toml::from_str::<SyntheticProfile>(&text)
                .map_err(|e| Error::config(format!("{}: {}", path.display(), e.message())))?
        }
        None => SyntheticProfile::default(),
    };
    if let Some(n) = n_sites {
        p.n_sites = n;
    }
    let sites = generate_synthetic(&p, cli.seed.unwrap_or(0))?;
    if let Some(parent) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    save_sites(output, &sites)?;
    println!("wrote {} sites to {}", sites.len(), output.display());
    Ok(())
}

/// Returns the number of problems found.
fn cmd_validate(input: &Path) -> Result<usize> {
    let is_toml = input.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
    if is_toml {
        let scenario = Scenario::load(input)?;
        scenario.validate()?;
        if scenario.dataset.path.is_some() {
            let d = load_dataset(&scenario)?;
            report_issues(&d.issues);
            println!("{}: ok, dataset has {} valid row(s)", input.display(), d.sites.len());
            return Ok(d.issues.len());
        }
        println!("{}: ok", input.display());
        return Ok(0);
    }
    let loaded = load_sites(input)?;
    report_issues(&loaded.issues);
    println!(
        "{}: {} valid row(s), {} excluded",
        input.display(),
        loaded.sites.len(),
        loaded.issues.len()
    );
    Ok(loaded.issues.len())
}

fn cmd_extrapolate(a: &ExtrapolateArgs) -> Result<()> {
    let inputs = match &a.from_run {
        Some(path) => inputs_from_report(path, a.area)?,
        None => NationalInputs {
            area_ha: a.area,
            avg_downpayment: a.avg_downpayment.unwrap_or_default(),
            avg_instalment: a.avg_instalment.unwrap_or_default(),
            avg_upfront: a.avg_upfront.unwrap_or_default(),
        },
    };
    check_inputs(&inputs, a.harvest_share)?;
    let cfg = match &a.scenario {
        Some(p) => Scenario::load(p)?.scheme,
        None => SchemeConfig::default(),
    };
    cfg.validate()?;
    let (_, text) = render(&inputs, &cfg, a.harvest_share);
    print!("{text}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Cmd::Run { scenario } => cmd_run(&cli, scenario),
        Cmd::Sweep { scenario, axes } => cmd_sweep(&cli, scenario, axes),
        Cmd::GenData {
            n_sites,
            profile,
            output,
        } => cmd_gen_data(&cli, *n_sites, profile.as_deref(), output),
        Cmd::Validate { input } => match cmd_validate(input) {
            Ok(0) => Ok(()),
            Ok(_) => return ExitCode::from(2),
            Err(e) => Err(e),
        },
        Cmd::Extrapolate(a) => cmd_extrapolate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
