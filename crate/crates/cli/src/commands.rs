use std::fs;
use std::path::{Path, PathBuf};

use cedist::ansatz::{param_count, AnsatzSpec};
use cedist::diversity::diversity_scan_with_threshold;
use cedist::entanglement::{histogram, tvd};
use cedist::generator::{compare_ansatzes, generate_dataset, train_generator, Dataset, DatasetMetadata};
use cedist::io;
use cedist::qml::{assemble_samples, classifier_anneal_config, cross_validate, logistic_baseline};
use cedist::rng::derive_seed;
use cedist::sensors::{simulate_dark_matter, simulate_soil, SensorEnsemble};

use crate::config::RunConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Generate,
    Sensors,
    Classify,
    Compare,
    /// CE of every state in a dataset file.
    Ce { input: Option<PathBuf> },
    /// Diversity scan of a dataset file.
    Swap { input: Option<PathBuf> },
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub shots: Option<usize>,
    pub noise: Option<bool>,
}

impl Overrides {
    pub fn apply(&self, config: &mut RunConfig) {
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(s) = self.shots {
            config.generate.shots = s;
            config.ce.shots = s;
        }
        if let Some(n) = self.noise {
            config.generate.noisy = n;
            config.classify.noisy = n;
        }
    }
}

/// Reads CE values from a dataset file or from a plain list of numbers
/// (`#` lines ignored).
pub fn load_ce_values(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(cedist::Error::from)?;
    if text.starts_with(io::DATASET_MAGIC) {
        return Ok(io::parse_dataset(&text)?.ce_values);
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .flat_map(|(i, l)| l.split_whitespace().map(move |w| (i + 1, w)))
        .map(|(line, w)| {
            w.parse().map_err(|_| {
                CliError::Runtime(cedist::Error::Parse {
                    line,
                    message: format!("{} is not a number: {w:?}", path.display()),
                })
            })
        })
        .collect()
}

struct Ctx<'a> {
    config: &'a RunConfig,
    echo: String,
    out: &'a Path,
    quiet: bool,
}

impl Ctx<'_> {
    fn say(&self, line: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", line.as_ref());
        }
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let p = self.out.join(name);
        io::write_atomic(&p, contents)?;
        Ok(p)
    }
}

/// Runs `command` with a resolved configuration, writing artifacts into `out`.
pub fn run(command: &Command, config: &RunConfig, out: &Path, quiet: bool) -> Result<(), CliError> {
    let ctx = Ctx {
        config,
        echo: config.to_toml(),
        out,
        quiet,
    };
    match command {
        Command::Generate => generate(&ctx),
        Command::Sensors => sensors(&ctx),
        Command::Classify => classify(&ctx),
        Command::Compare => compare(&ctx),
        Command::Ce { input } => ce(&ctx, input.as_deref()),
        Command::Swap { input } => swap(&ctx, input.as_deref()),
    }
}

fn generate(ctx: &Ctx) -> Result<(), CliError> {
    let c = ctx.config;
    let spec = c.ansatz()?;
    let target = c.target.build()?;
    let anneal = c.anneal.to_config(param_count(&spec), spec.num_qubits, derive_seed(c.seed, "generate/train"))?;
    if c.generate.dataset_size < 2 {
        return Err(CliError::Config("generate.dataset_size must be at least 2".into()));
    }
    let noise = c.generate.noisy.then_some(c.noise);
    if let Some(n) = &noise {
        n.validate().map_err(|e| CliError::Config(format!("[noise] {e}")))?;
    }
    ctx.say(format!("training {spec} against {}", target.label()));
    let run = train_generator(&spec, &target, &anneal)?;
    let mut dataset = generate_dataset(
        &run,
        c.generate.dataset_size,
        derive_seed(c.seed, "generate/dataset"),
        c.generate.shots,
        noise.as_ref(),
    )?;
    dataset.metadata.config = Some(ctx.echo.clone());
    let hist = histogram(&dataset.ce_values, &target.bin_edges)?;
    let dataset_tvd = tvd(&hist, &target.histogram())?;
    let report = diversity_scan_with_threshold(
        &dataset.states,
        &dataset.ce_values,
        &target.bin_edges,
        c.diversity.pairs_per_bin,
        c.diversity.shots,
        derive_seed(c.seed, "generate/swap"),
        c.diversity.threshold,
    )?;
    ctx.write("config.toml", &ctx.echo)?;
    ctx.write("run.txt", &io::render_run(&run, Some(&ctx.echo)))?;
    let path = ctx.write("dataset.txt", &io::render_dataset(&dataset))?;
    ctx.write("histogram.txt", &io::render_histogram(&hist, Some(&target.masses), Some(&ctx.echo)))?;
    ctx.write("swap.txt", &io::render_swap_report(&report, Some(&ctx.echo)))?;
    ctx.say(format!("best training cost: {:.6}", run.best_cost));
    ctx.say(format!("dataset TVD: {dataset_tvd:.6}"));
    if report.collapsed {
        ctx.say("warning: mean SWAP p0 exceeds the collapse threshold");
    }
    ctx.say(format!("wrote {}", path.display()));
    // Always printed, even with --quiet.
    println!("final TVD: {:.6}", run.final_tvd);
    Ok(())
}

fn sensor_dataset(
    ensemble: SensorEnsemble,
    kind: &str,
    regime: &str,
    seed: u64,
    shots: usize,
    params: &[(&str, f64)],
    echo: &str,
) -> Result<Dataset, CliError> {
    let mut entries = std::collections::BTreeMap::new();
    entries.insert("regime".to_string(), regime.to_string());
    for (k, v) in params {
        entries.insert(k.to_string(), v.to_string());
    }
    if let Some(full) = &ensemble.ce_full_values {
        let mean = full.iter().sum::<f64>() / full.len() as f64;
        entries.insert("mean_ce_full".to_string(), mean.to_string());
    }
    let metadata = DatasetMetadata {
        kind: kind.to_string(),
        seed,
        shots,
        noise: None,
        estimator: "ce1".to_string(),
        entries,
        config: Some(echo.to_string()),
    };
    Ok(Dataset::new(ensemble.states, ensemble.ce_values, metadata)?)
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len().max(2) - 1) as f64;
    (m, var.sqrt())
}

fn sensors(ctx: &Ctx) -> Result<(), CliError> {
    let c = ctx.config;
    let s = &c.sensors;
    let soil = [("soil_high", s.soil.phi_soil_high), ("soil_low", s.soil.phi_soil_low)];
    let dm = [("dm_weak", s.dark_matter.phi_weak), ("dm_strong", s.dark_matter.phi_strong)];
    let mut jobs: Vec<(String, Dataset)> = Vec::new();
    for (name, phi) in soil {
        let cfg = s.soil.to_config(phi, derive_seed(c.seed, &format!("sensors/{name}")));
        cfg.validate().map_err(|e| CliError::Config(format!("[sensors.soil] {e}")))?;
        let params = [
            ("num_sensor_qubits", cfg.num_sensor_qubits as f64),
            ("phi_soil_mean", cfg.phi_soil_mean),
            ("phi_free", cfg.phi_free),
            ("jitter_sigma", cfg.jitter_sigma),
        ];
        let ens = simulate_soil(&cfg)?;
        let d = sensor_dataset(ens, "sensor:soil", name, cfg.seed, cfg.shots_per_state, &params, &ctx.echo)?;
        jobs.push((name.to_string(), d));
    }
    for (name, phi) in dm {
        let cfg = s.dark_matter.to_config(phi, derive_seed(c.seed, &format!("sensors/{name}")));
        cfg.validate().map_err(|e| CliError::Config(format!("[sensors.dark_matter] {e}")))?;
        let params = [
            ("num_sensor_qubits", cfg.num_sensor_qubits as f64),
            ("phi", cfg.phi),
            ("jitter_sigma", cfg.jitter_sigma),
        ];
        let ens = simulate_dark_matter(&cfg)?;
        jobs.push((name.to_string(), sensor_dataset(ens, "sensor:dm", name, cfg.seed, 0, &params, &ctx.echo)?));
    }
    ctx.write("config.toml", &ctx.echo)?;
    for (name, d) in &jobs {
        let p = ctx.write(&format!("{name}.txt"), &io::render_dataset(d))?;
        let (m, sd) = mean_sd(&d.ce_values);
        ctx.say(format!("{name}: {} states, CE1 mean {m:.6} sd {sd:.6} -> {}", d.len(), p.display()));
    }
    Ok(())
}

fn classify(ctx: &Ctx) -> Result<(), CliError> {
    let c = ctx.config;
    let k = &c.classify;
    let low = k.low.clone().unwrap_or_else(|| ctx.out.join("soil_low.txt"));
    let high = k.high.clone().unwrap_or_else(|| ctx.out.join("soil_high.txt"));
    for p in [&low, &high] {
        if !p.exists() {
            return Err(CliError::Runtime(cedist::Error::Contract(format!(
                "input dataset {} not found (run `cedist sensors` first or set classify.low/high)",
                p.display()
            ))));
        }
    }
    let samples = assemble_samples(&load_ce_values(&low)?, &load_ce_values(&high)?, k.samples_per_class)?;
    if k.folds > samples.len() {
        return Err(CliError::Config(format!(
            "classify.folds = {} exceeds the {} samples",
            k.folds,
            samples.len()
        )));
    }
    let spec = k.spec();
    spec.validate().map_err(|e| CliError::Config(format!("[classify] {e}")))?;
    let seed = derive_seed(c.seed, "classify");
    let anneal = classifier_anneal_config(&spec, k.max_iterations, seed);
    let noise = k.noisy.then_some(c.noise);
    let outcome = cross_validate(&samples, &anneal, &spec, k.folds, seed, noise.as_ref())?;
    let baseline = logistic_baseline(&samples, k.folds, seed)?;
    let mut modes = vec![("ideal", &outcome.ideal)];
    if let Some(n) = &outcome.noisy {
        modes.push(("noisy", n));
    }
    let p = ctx.write("metrics.txt", &io::render_metrics(&modes, &baseline, Some(&ctx.echo)))?;
    for (mode, r) in &modes {
        ctx.say(format!(
            "{mode}: accuracy {:.4} (relative {:.4}), f1 {:.4}",
            r.mean.accuracy,
            r.mean.accuracy / baseline.mean.accuracy,
            r.mean.f1
        ));
    }
    ctx.say(format!("baseline: accuracy {:.4}", baseline.mean.accuracy));
    ctx.say(format!("wrote {}", p.display()));
    Ok(())
}

fn compare(ctx: &Ctx) -> Result<(), CliError> {
    let c = ctx.config;
    if c.compare.families.len() < 2 {
        return Err(CliError::Config("compare.families needs at least two families".into()));
    }
    if c.compare.targets.is_empty() {
        return Err(CliError::Config("compare.targets needs at least one target".into()));
    }
    let targets = c
        .compare
        .targets
        .iter()
        .map(|&k| c.target.build_kind(k))
        .collect::<Result<Vec<_>, _>>()?;
    // Bounds are resized per family inside compare_ansatzes.
    let probe = AnsatzSpec {
        family: c.compare.families[0],
        num_qubits: c.generate.num_qubits,
        layers: c.generate.layers,
    };
    probe.validate().map_err(|e| CliError::Config(format!("[generate] {e}")))?;
    let anneal = c.anneal.to_config(param_count(&probe), probe.num_qubits, derive_seed(c.seed, "compare"))?;
    let table = compare_ansatzes(&targets, &c.compare.families, probe.num_qubits, probe.layers, &anneal)?;
    let p = ctx.write("comparison.txt", &io::render_comparison(&table, Some(&ctx.echo)))?;
    for row in &table.rows {
        ctx.say(format!(
            "{}: mean TVD {:.4}, median {:.4}, variance {:.5}, avg rank {:.2}",
            row.family, row.mean_tvd, row.median_tvd, row.tvd_variance, row.avg_rank
        ));
    }
    ctx.say(format!("wrote {}", p.display()));
    Ok(())
}

fn input_path(given: Option<&Path>, configured: Option<&PathBuf>, what: &str) -> Result<PathBuf, CliError> {
    given
        .map(Path::to_path_buf)
        .or_else(|| configured.cloned())
        .ok_or_else(|| CliError::Config(format!("no input dataset given for `{what}`")))
}

fn ce(ctx: &Ctx, input: Option<&Path>) -> Result<(), CliError> {
    let c = ctx.config;
    let path = input_path(input, c.ce.input.as_ref(), "ce")?;
    let dataset = io::read_dataset(&path)?;
    let seed = derive_seed(c.seed, "ce");
    let values = dataset
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| c.ce.estimator.estimate(s, c.ce.shots, cedist::rng::derive_indexed(seed, "ce", i as u64)))
        .collect::<cedist::Result<Vec<f64>>>()?;
    let mut text = String::from("# cedist ce values v1\n");
    text.push_str(&format!("# source: {}\n# estimator: {}\n", path.display(), c.ce.estimator));
    for line in ctx.echo.lines() {
        text.push_str(&format!("#config {line}\n"));
    }
    text.push_str("sample_id ce\n");
    for (i, v) in values.iter().enumerate() {
        text.push_str(&format!("{i:>8} {v:>25.16e}\n"));
    }
    let p = ctx.write("ce.txt", &text)?;
    let (m, sd) = mean_sd(&values);
    ctx.say(format!("{} states, {} mean {m:.6} sd {sd:.6} -> {}", values.len(), c.ce.estimator, p.display()));
    Ok(())
}

fn swap(ctx: &Ctx, input: Option<&Path>) -> Result<(), CliError> {
    let c = ctx.config;
    let path = input_path(input, c.swap.input.as_ref(), "swap")?;
    let dataset = io::read_dataset(&path)?;
    let edges = cedist::entanglement::uniform_edges(0.0, c.target.ce_max, c.target.bins);
    let report = diversity_scan_with_threshold(
        &dataset.states,
        &dataset.ce_values,
        &edges,
        c.diversity.pairs_per_bin,
        c.diversity.shots,
        derive_seed(c.seed, "swap"),
        c.diversity.threshold,
    )?;
    let p = ctx.write("swap.txt", &io::render_swap_report(&report, Some(&ctx.echo)))?;
    if let Some(m) = report.overall_mean_p0 {
        ctx.say(format!("mean SWAP p0 {m:.4} (collapsed: {})", report.collapsed));
    }
    ctx.say(format!("wrote {}", p.display()));
    Ok(())
}
