//! The three subcommands. Each one assembles every artifact in memory first
//! and only then touches the output directory.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use netroles::graph::{TemporalGraph, UserId};
use netroles::io::{
    export_dot, export_gexf, parse_csv, read_report_json, write_csv, write_report_json, CsvOptions,
    IngestError,
};
use netroles::metrics::node_metrics;
use netroles::roles::Role;
use netroles::synth::{generate, PlantSpec};
use netroles::temporal::{analyze_windows, trajectory, Trajectory, WindowReport};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::CliError;

/// A named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    fn new(name: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        Artifact {
            name: name.into(),
            bytes: bytes.into(),
        }
    }
}

/// Writes the artifacts in order; returns their paths.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>, CliError> {
    let io_err =
        |path: &Path, e: std::io::Error| CliError::Output(format!("{}: {e}", path.display()));
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let path = dir.join(&a.name);
        fs::write(&path, &a.bytes).map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Parses every input (concurrently) and merges them in argument order.
pub fn load_inputs(config: &RunConfig) -> Result<TemporalGraph, CliError> {
    let options = CsvOptions {
        lenient: !config.strict,
        ..CsvOptions::default()
    };
    let outcomes = config
        .inputs
        .par_iter()
        .map(|path| {
            let file = File::open(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            parse_csv(BufReader::new(file), &options).map_err(|e| match e {
                IngestError::Io(e) => CliError::Config(format!("{}: {e}", path.display())),
                e => CliError::Parse(format!("{}: {e}", path.display())),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut graph = if config.strict {
        TemporalGraph::strict()
    } else {
        TemporalGraph::new()
    };
    for (path, outcome) in config.inputs.iter().zip(outcomes) {
        for d in &outcome.diagnostics {
            log::warn!("{}: {d}", path.display());
        }
        for (user, spellings) in &outcome.collisions {
            let raw: Vec<&str> = spellings.iter().map(String::as_str).collect();
            log::warn!(
                "{}: handles {} all normalize to {user}",
                path.display(),
                raw.join(", ")
            );
        }
        if outcome.rejected() > 0 {
            log::warn!(
                "{}: skipped {} of {} rows",
                path.display(),
                outcome.rejected(),
                outcome.data_rows
            );
        }
        graph
            .extend(outcome.graph.interactions().iter().cloned())
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(graph)
}

pub fn run_analysis(config: &RunConfig, g: &TemporalGraph) -> Result<Vec<WindowReport>, CliError> {
    analyze_windows(g, &config.plan(), &config.options())
        .map_err(|e| CliError::Config(e.to_string()))
}

/// Top-k table of one window: user, in_degree, out_degree, betweenness
/// (three decimals), rank, role.
pub fn topk_csv(report: &WindowReport) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "user",
        "in_degree",
        "out_degree",
        "betweenness",
        "rank",
        "role",
    ])
    .expect("in-memory write");
    for m in &report.top_k {
        let role = report.role_of(&m.user).map_or("", Role::as_str);
        w.write_record([
            m.user.as_str(),
            &m.in_degree.to_string(),
            &m.out_degree.to_string(),
            &format!("{:.3}", m.betweenness),
            &m.rank.to_string(),
            role,
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

/// One row per window; the rank is blank outside the top-k.
pub fn trajectory_csv(t: &Trajectory) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["interval", "rank", "betweenness", "role"])
        .expect("in-memory write");
    for p in &t.points {
        w.write_record([
            p.interval.label(),
            p.rank.map(|r| r.to_string()).unwrap_or_default(),
            format!("{:.6}", p.betweenness),
            p.role.map(|r| r.as_str().to_string()).unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

/// All artifacts of an analysis run, in write order.
pub fn analysis_artifacts(
    config: &RunConfig,
    g: &TemporalGraph,
    reports: &[WindowReport],
) -> Vec<Artifact> {
    let mut out = Vec::new();
    if config.exports.json {
        out.push(Artifact::new("reports.json", write_report_json(reports)));
    }
    if config.exports.csv {
        for r in reports {
            out.push(Artifact::new(
                format!("topk_{}.csv", r.interval.label()),
                topk_csv(r),
            ));
        }
    }
    if config.exports.gexf || config.exports.dot {
        let graphs: Vec<Vec<Artifact>> = reports
            .par_iter()
            .map(|r| {
                let d = g.window_over(r.interval).project();
                let label = r.interval.label();
                let mut files = Vec::new();
                if config.exports.gexf {
                    let metrics = node_metrics(&d, config.centrality);
                    files.push(Artifact::new(
                        format!("window_{label}.gexf"),
                        export_gexf(&d, &metrics, &r.roles),
                    ));
                }
                if config.exports.dot {
                    files.push(Artifact::new(
                        format!("window_{label}.dot"),
                        export_dot(&d, &r.roles),
                    ));
                }
                files
            })
            .collect();
        out.extend(graphs.into_iter().flatten());
    }
    out
}

/// Ingest, analyze and write every requested artifact.
pub fn cmd_analyze(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    config.validate()?;
    let g = load_inputs(config)?;
    let reports = run_analysis(config, &g)?;
    log::info!(
        "{} interactions, {} users, {} windows",
        g.len(),
        g.nodes().len(),
        reports.len()
    );
    write_artifacts(&config.out_dir, &analysis_artifacts(config, &g, &reports))
}

pub fn trajectory_file_name(user: &UserId) -> String {
    let safe: String = user
        .as_str()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("trajectory_{safe}.csv")
}

/// Writes the user's per-window rank and betweenness, either from a previous
/// `reports.json` or by analyzing the inputs again.
pub fn cmd_trajectory(
    config: &RunConfig,
    user: &UserId,
    reports_path: Option<&Path>,
) -> Result<PathBuf, CliError> {
    let (reports, known) = match reports_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let reports = read_report_json(&text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            let known = reports.iter().any(|r| {
                r.betweenness.contains_key(user)
                    || r.top_k.iter().any(|m| &m.user == user)
                    || r.role_of(user).is_some()
            });
            (reports, known)
        }
        None => {
            config.validate()?;
            let g = load_inputs(config)?;
            let known = g.nodes().contains(user);
            (run_analysis(config, &g)?, known)
        }
    };
    let mut t = trajectory(user, &reports);
    if !known {
        log::warn!("user {user} does not occur in the analyzed data");
        t.points.clear();
    }
    let artifact = Artifact::new(trajectory_file_name(user), trajectory_csv(&t));
    let mut written = write_artifacts(&config.out_dir, &[artifact])?;
    Ok(written.remove(0))
}

/// Generates a planted network; writes `interactions.csv` and
/// `ground_truth.json`.
pub fn cmd_synth(spec: &PlantSpec, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let planted = generate(spec).map_err(|e| CliError::Config(e.to_string()))?;
    let mut csv = Vec::new();
    write_csv(&planted.graph, &mut csv).expect("in-memory write");
    let truth: BTreeMap<&UserId, Role> =
        planted.ground_truth.iter().map(|(u, r)| (u, *r)).collect();
    let json = serde_json::to_string_pretty(&truth).expect("labels serialize");
    write_artifacts(
        out_dir,
        &[
            Artifact::new("interactions.csv", csv),
            Artifact::new("ground_truth.json", json),
        ],
    )
}
