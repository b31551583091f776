//! Plain-text artifact formats: dataset files, run files and report tables.
//!
//! Every file starts with `#` comment lines. Lines beginning `#config ` carry
//! the resolved configuration that produced the artifact, so an artifact can
//! be fed back as a config file. Floats in numeric tables use 17 significant
//! digits and read back bit-exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::diversity::SwapReport;
use crate::entanglement::CeHistogram;
use crate::error::{Error, Result};
use crate::generator::{ComparisonTable, Dataset, DatasetMetadata, GenerationRun};
use crate::qml::CvReport;
use crate::sim::{NoiseSpec, StateVector};

pub const DATASET_MAGIC: &str = "# cedist dataset v1";
const CONFIG_PREFIX: &str = "#config";

fn num(v: f64) -> String {
    format!("{v:>25.16e}")
}

/// Writes `contents` to a temporary sibling file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::Contract(format!("{} has no file name", path.display())))?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn push_config(out: &mut String, config: Option<&str>) {
    if let Some(cfg) = config {
        for line in cfg.lines() {
            if line.is_empty() {
                out.push_str(CONFIG_PREFIX);
            } else {
                let _ = write!(out, "{CONFIG_PREFIX} {line}");
            }
            out.push('\n');
        }
    }
}

/// The configuration text embedded in an artifact, if any.
pub fn extract_config(text: &str) -> Option<String> {
    let lines: Vec<&str> = text
        .lines()
        .filter_map(|l| {
            let rest = l.strip_prefix(CONFIG_PREFIX)?;
            if rest.is_empty() {
                Some("")
            } else {
                rest.strip_prefix(' ')
            }
        })
        .collect();
    if lines.is_empty() {
        None
    } else {
        Some(lines.join("\n") + "\n")
    }
}

fn noise_text(noise: Option<&NoiseSpec>) -> String {
    match noise {
        None => "none".into(),
        Some(n) => format!("p1={} p2={} p_readout={}", n.p1, n.p2, n.p_readout),
    }
}

fn parse_noise(text: &str, line: usize) -> Result<Option<NoiseSpec>> {
    if text == "none" {
        return Ok(None);
    }
    let bad = |m: String| Error::Parse { line, message: m };
    let mut fields = BTreeMap::new();
    for part in text.split_whitespace() {
        let (k, v) = part.split_once('=').ok_or_else(|| bad(format!("malformed noise field {part:?}")))?;
        let v: f64 = v.parse().map_err(|_| bad(format!("bad noise value {v:?}")))?;
        fields.insert(k, v);
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(format!("noise field {k} missing")));
    Ok(Some(NoiseSpec {
        p1: get("p1")?,
        p2: get("p2")?,
        p_readout: get("p_readout")?,
    }))
}

/// Renders a dataset: metadata header, config echo, then one row per state
/// with `sample_id`, `ce` and interleaved real/imaginary amplitudes.
pub fn render_dataset(dataset: &Dataset) -> String {
    let m = &dataset.metadata;
    let n = dataset.num_qubits().unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{DATASET_MAGIC}");
    let _ = writeln!(out, "# kind: {}", m.kind);
    let _ = writeln!(out, "# num_qubits: {n}");
    let _ = writeln!(out, "# count: {}", dataset.len());
    let _ = writeln!(out, "# seed: {}", m.seed);
    let _ = writeln!(out, "# shots: {}", m.shots);
    let _ = writeln!(out, "# noise: {}", noise_text(m.noise.as_ref()));
    let _ = writeln!(out, "# estimator: {}", m.estimator);
    for (k, v) in &m.entries {
        let _ = writeln!(out, "# meta {k}: {v}");
    }
    push_config(&mut out, m.config.as_deref());
    out.push_str("sample_id ce");
    for i in 0..1usize << n {
        let _ = write!(out, " re_{i} im_{i}");
    }
    out.push('\n');
    for (id, (s, ce)) in dataset.states.iter().zip(&dataset.ce_values).enumerate() {
        let _ = write!(out, "{id:>8} {}", num(*ce));
        for a in s.amplitudes() {
            let _ = write!(out, " {} {}", num(a.re), num(a.im));
        }
        out.push('\n');
    }
    out
}

pub fn write_dataset(path: &Path, dataset: &Dataset) -> Result<()> {
    write_atomic(path, &render_dataset(dataset))
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l.trim_end() == DATASET_MAGIC => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected {DATASET_MAGIC:?}"),
            })
        }
    }
    let mut header: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut entries = BTreeMap::new();
    let mut columns = None;
    for (no, line) in lines.by_ref() {
        if line.starts_with(CONFIG_PREFIX) {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# ") {
            let (k, v) = rest.split_once(": ").ok_or_else(|| Error::Parse {
                line: no,
                message: format!("malformed header line {line:?}"),
            })?;
            match k.strip_prefix("meta ") {
                Some(key) => {
                    entries.insert(key.to_string(), v.to_string());
                }
                None => {
                    header.insert(k.to_string(), (no, v.to_string()));
                }
            }
        } else {
            columns = Some((no, line));
            break;
        }
    }
    let (col_line, col_text) = columns.ok_or(Error::Parse {
        line: text.lines().count(),
        message: "missing column header".into(),
    })?;
    let field = |k: &str| {
        header.get(k).ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("header field {k:?} missing"),
        })
    };
    let int = |k: &str| -> Result<u64> {
        let (no, v) = field(k)?;
        v.parse().map_err(|_| Error::Parse {
            line: *no,
            message: format!("{k} is not an integer: {v:?}"),
        })
    };
    let n = int("num_qubits")? as usize;
    let count = int("count")? as usize;
    let (noise_line, noise_str) = field("noise")?;
    let metadata = DatasetMetadata {
        kind: field("kind")?.1.clone(),
        seed: int("seed")?,
        shots: int("shots")? as usize,
        noise: parse_noise(noise_str, *noise_line)?,
        estimator: field("estimator")?.1.clone(),
        entries,
        config: extract_config(text),
    };
    let width = 2 + 2 * (1usize << n);
    if col_text.split_whitespace().count() != width {
        return Err(Error::Parse {
            line: col_line,
            message: format!("expected {width} columns for {n} qubits"),
        });
    }
    let mut states = Vec::with_capacity(count);
    let mut ce_values = Vec::with_capacity(count);
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: String| Error::Parse { line: no, message: m };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != width {
            return Err(bad(format!("expected {width} columns, found {}", fields.len())));
        }
        let id: usize = fields[0].parse().map_err(|_| bad("bad sample_id".into()))?;
        if id != states.len() {
            return Err(bad(format!("sample_id {id} out of order")));
        }
        let vals: Vec<f64> = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| bad(format!("bad number {f:?}"))))
            .collect::<Result<_>>()?;
        ce_values.push(vals[0]);
        let amps: Vec<Complex64> = vals[1..].chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        states.push(StateVector::from_amplitudes(amps).map_err(|e| bad(e.to_string()))?);
    }
    if states.len() != count {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("header promises {count} rows, found {}", states.len()),
        });
    }
    Dataset::new(states, ce_values, metadata)
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    parse_dataset(&fs::read_to_string(path)?)
}

/// Columns `bin_left bin_right mass`, plus `target` when given.
pub fn render_histogram(hist: &CeHistogram, target: Option<&[f64]>, config: Option<&str>) -> String {
    let mut out = String::from("# cedist histogram v1\n");
    let _ = writeln!(out, "# samples: {}", hist.sample_count);
    let _ = writeln!(out, "# clamped_below: {}", hist.clamped.below);
    let _ = writeln!(out, "# clamped_above: {}", hist.clamped.above);
    push_config(&mut out, config);
    out.push_str(if target.is_some() {
        "bin_left bin_right mass target\n"
    } else {
        "bin_left bin_right mass\n"
    });
    for (i, m) in hist.masses.iter().enumerate() {
        let _ = write!(out, "{} {} {}", num(hist.bin_edges[i]), num(hist.bin_edges[i + 1]), num(*m));
        if let Some(t) = target {
            let _ = write!(out, " {}", num(t[i]));
        }
        out.push('\n');
    }
    out
}

/// Columns `bin_low bin_high mean_p0 pair_count`; empty bins show `nan`.
pub fn render_swap_report(report: &SwapReport, config: Option<&str>) -> String {
    let mut out = String::from("# cedist swap report v1\n");
    let _ = writeln!(out, "# threshold: {}", report.threshold);
    let _ = writeln!(out, "# collapsed: {}", report.collapsed);
    let overall = report.overall_mean_p0.map_or("nan".to_string(), |m| m.to_string());
    let _ = writeln!(out, "# overall_mean_p0: {overall}");
    push_config(&mut out, config);
    out.push_str("bin_low bin_high mean_p0 pair_count\n");
    for b in &report.bins {
        let mean = b.mean_p0.map_or(format!("{:>25}", "nan"), num);
        let _ = writeln!(out, "{} {} {} {:>6}", num(b.ce_range[0]), num(b.ce_range[1]), mean, b.pair_count);
    }
    out
}

/// Config echo, summary fields, then `iteration cost` rows. The last row is
/// the local-refinement cost when refinement ran.
pub fn render_run(run: &GenerationRun, config: Option<&str>) -> String {
    let join = |v: &[f64]| v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(" ");
    let mut out = String::from("# cedist run v1\n");
    let _ = writeln!(out, "# ansatz: {}", run.ansatz);
    let _ = writeln!(out, "# target: {}", run.target.label());
    let _ = writeln!(out, "# seed: {}", run.seed);
    let _ = writeln!(out, "# estimator: {}", run.config.ce_method);
    let _ = writeln!(out, "# evaluations: {}", run.evaluations);
    let _ = writeln!(out, "# best_cost: {:.16e}", run.best_cost);
    let _ = writeln!(out, "# final_tvd: {:.16e}", run.final_tvd);
    let _ = writeln!(out, "# initial_tvd: {:.16e}", run.initial_tvd);
    let _ = writeln!(out, "# best_params: {}", join(&run.best_params));
    let _ = writeln!(out, "# initial_params: {}", join(&run.initial_params));
    push_config(&mut out, config);
    out.push_str("iteration cost\n");
    for (i, c) in run.cost_trace.iter().enumerate() {
        let _ = writeln!(out, "{i:>8} {}", num(*c));
    }
    out
}

fn metric_row(out: &mut String, mode: &str, m: &crate::qml::FoldMetrics, rel: Option<&crate::qml::FoldMetrics>) {
    let fold = m.fold_index.map_or("mean".to_string(), |f| f.to_string());
    let _ = write!(
        out,
        "{mode:<9} {fold:>5} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
        m.accuracy, m.precision, m.recall, m.f1
    );
    match rel {
        Some(r) => {
            let _ = writeln!(out, " {:>10.6} {:>10.6} {:>10.6} {:>10.6}", r.accuracy, r.precision, r.recall, r.f1);
        }
        None => out.push('\n'),
    }
}

/// Fold rows and a mean row per mode. Quantum rows carry scores relative to
/// the matching baseline row.
pub fn render_metrics(modes: &[(&str, &CvReport)], baseline: &CvReport, config: Option<&str>) -> String {
    let mut out = String::from("# cedist classification report v1\n");
    push_config(&mut out, config);
    out.push_str("mode       fold   accuracy  precision     recall         f1    rel_acc   rel_prec    rel_rec     rel_f1\n");
    for (mode, report) in modes {
        for (m, b) in report.folds.iter().zip(&baseline.folds) {
            metric_row(&mut out, mode, m, Some(&m.relative_to(b)));
        }
        metric_row(&mut out, mode, &report.mean, Some(&report.mean.relative_to(&baseline.mean)));
    }
    for m in &baseline.folds {
        metric_row(&mut out, "baseline", m, None);
    }
    metric_row(&mut out, "baseline", &baseline.mean, None);
    out
}

/// One row per family: summary columns, then the TVD and rank per target.
pub fn render_comparison(table: &ComparisonTable, config: Option<&str>) -> String {
    let mut out = String::from("# cedist ansatz comparison v1\n");
    for (i, t) in table.targets.iter().enumerate() {
        let _ = writeln!(out, "# target {i}: {t}");
    }
    push_config(&mut out, config);
    out.push_str("family mean_tvd median_tvd tvd_variance avg_rank");
    for i in 0..table.targets.len() {
        let _ = write!(out, " tvd_{i} rank_{i}");
    }
    out.push('\n');
    for row in &table.rows {
        let _ = write!(
            out,
            "{:<6} {} {} {} {}",
            row.family.to_string(),
            num(row.mean_tvd),
            num(row.median_tvd),
            num(row.tvd_variance),
            num(row.avg_rank)
        );
        for (t, r) in row.tvds.iter().zip(&row.ranks) {
            let _ = write!(out, " {} {}", num(*t), num(*r));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::ce_full;
    use crate::sim::random_state;

    fn sample_dataset() -> Dataset {
        let states: Vec<StateVector> = (0..5).map(|i| random_state(3, 12, i)).collect();
        let ce: Vec<f64> = states.iter().map(|s| ce_full(s).unwrap().value).collect();
        let metadata = DatasetMetadata {
            kind: "generated".into(),
            seed: 42,
            shots: 0,
            noise: Some(NoiseSpec::default()),
            estimator: "full".into(),
            entries: BTreeMap::from([("ansatz".to_string(), "A1(n=3,layers=1)".to_string())]),
            config: Some("[generate]\nseed = 42\n\n[anneal]\nmax_iterations = 3\n".into()),
        };
        Dataset::new(states, ce, metadata).unwrap()
    }

    #[test]
    fn dataset_round_trip_is_exact() {
        let d = sample_dataset();
        let text = render_dataset(&d);
        let back = parse_dataset(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(render_dataset(&back), text);
        for (s, &ce) in back.states.iter().zip(&back.ce_values) {
            assert!((ce_full(s).unwrap().value - ce).abs() < 1e-9);
        }
    }

    #[test]
    fn config_extraction() {
        let d = sample_dataset();
        let cfg = extract_config(&render_dataset(&d)).unwrap();
        assert_eq!(Some(cfg.as_str()), d.metadata.config.as_deref());
        assert_eq!(extract_config("# nothing\n"), None);
    }

    #[test]
    fn malformed_files_report_lines() {
        let d = sample_dataset();
        let text = render_dataset(&d);
        assert!(matches!(parse_dataset("hello"), Err(Error::Parse { line: 1, .. })));
        let truncated: String = text.lines().take(text.lines().count() - 1).map(|l| format!("{l}\n")).collect();
        assert!(parse_dataset(&truncated).is_err());
        let corrupt = text.replacen("       0 ", "       7 ", 1);
        assert!(matches!(parse_dataset(&corrupt), Err(Error::Parse { .. })));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/a.txt");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
