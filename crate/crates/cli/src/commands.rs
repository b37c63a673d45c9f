//! Command implementations. Each returns the rendered output and whether every
//! requested check passed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use complementarity::ls::{best_separable_approximation_with, verify_ls, Certificates, LsConfig};
use complementarity::measures::{convex_roof_tangle_with, measure_set, ConvexRoofConfig, ConvexRoofResult, MeasureSet};
use complementarity::relations::{
    summarize, verify_mems, verify_state, verify_werner, BatchSummary, RelationReport, Tolerances,
};
use complementarity::rng::task_seed;
use complementarity::states::{
    mems, parse_state_json, random_mixed, random_pure, werner, Bell, FamilySpec, MemsParams, State,
    WernerParams, MAX_QUBITS,
};
use complementarity::{measures, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{fmt_num, to_json, Cell, Table};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable files or states that fail validation.
    Input(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub format: Format,
}

pub struct Output {
    pub text: String,
    pub pass: bool,
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// A state plus the family it came from, which selects the family-specific checks.
struct Labeled {
    label: String,
    state: State,
    family: Family,
}

#[derive(Clone, Copy, PartialEq)]
enum Family {
    Werner,
    Mems,
    Other,
}

fn load_file(path: &Path) -> CliResult<State> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_state_json(&text)?)
}

fn from_spec(spec: &str) -> CliResult<Labeled> {
    let parsed: FamilySpec = spec.parse()?;
    let family = match parsed {
        FamilySpec::Werner(_) => Family::Werner,
        FamilySpec::Mems(_) => Family::Mems,
        _ => Family::Other,
    };
    Ok(Labeled { label: spec.to_string(), state: parsed.build()?, family })
}

/// `--family` or `--file`, exactly one.
pub fn single_source(family: Option<&str>, file: Option<&PathBuf>) -> CliResult<(String, State)> {
    match (family, file) {
        (Some(spec), None) => from_spec(spec).map(|l| (l.label, l.state)),
        (None, Some(path)) => Ok((path.display().to_string(), load_file(path)?)),
        _ => Err(input("give exactly one of --family or --file")),
    }
}

fn grid_points(step: f64) -> CliResult<Vec<f64>> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(input(format!("grid step must lie in (0, 1], got {step}")));
    }
    let count = (1.0 / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| (k as f64 * step).min(1.0)).collect())
}

fn werner_grid(step: f64) -> CliResult<Vec<(Vec<f64>, Labeled)>> {
    grid_points(step)?
        .into_iter()
        .map(|l| {
            let state = State::Density(werner(&WernerParams::new(l, Bell::PhiPlus)?)?);
            Ok((vec![l], Labeled { label: format!("werner:{}", fmt_num(l)), state, family: Family::Werner }))
        })
        .collect()
}

fn mems_grid(step: f64) -> CliResult<Vec<(Vec<f64>, Labeled)>> {
    let points = grid_points(step)?;
    let mut out = Vec::new();
    for &x1 in &points {
        for &x2 in &points {
            if x1 + x2 > 1.0 + 1e-9 {
                break;
            }
            let x2 = x2.min(1.0 - x1);
            let state = State::Density(mems(&MemsParams::new(x1, x2)?)?);
            let label = format!("mems:{},{}", fmt_num(x1), fmt_num(x2));
            out.push((vec![x1, x2], Labeled { label, state, family: Family::Mems }));
        }
    }
    Ok(out)
}

fn family_grid(name: &str, step: f64) -> CliResult<Vec<(Vec<f64>, Labeled)>> {
    match name {
        "werner" => werner_grid(step),
        "mems" => mems_grid(step),
        other => Err(input(format!("grid sweeps support werner and mems, got {other}"))),
    }
}

fn check_qubits(n: usize) -> CliResult<()> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(input(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    Ok(())
}

fn check_count(count: usize) -> CliResult<()> {
    if count == 0 {
        return Err(input("sample count must be at least 1"));
    }
    Ok(())
}

fn check_rank(n: usize, rank: usize) -> CliResult<()> {
    if rank == 0 || rank > 1 << n {
        return Err(input(format!("rank {rank} outside 1..={}", 1usize << n)));
    }
    Ok(())
}

fn random_state(n: usize, rank: Option<usize>, seed: u64, index: usize) -> CliResult<State> {
    let s = task_seed(seed, index as u64);
    Ok(match rank {
        None => State::Pure(random_pure(n, s)?),
        Some(r) => State::Density(random_mixed(n, r, s)?),
    })
}

// ---------------------------------------------------------------- measure

#[derive(Serialize)]
struct MeasureRecord<'a> {
    source: &'a str,
    measures: &'a MeasureSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    convex_roof: Option<ConvexRoofResult>,
}

pub fn measure(cfg: &RunConfig, source: (String, State), convex_roof: Option<usize>) -> CliResult<Output> {
    let (label, state) = source;
    let rho = state.density();
    let set = measure_set(&rho)?;
    let roof = match convex_roof {
        Some(restarts) => Some(convex_roof_tangle_with(
            &rho,
            &ConvexRoofConfig { restarts, seed: cfg.seed, ..ConvexRoofConfig::default() },
        )?),
        None => None,
    };
    let text = match cfg.format {
        Format::Json => to_json(&MeasureRecord { source: &label, measures: &set, convex_roof: roof }),
        Format::Csv => {
            let mut columns: Vec<String> =
                ["n_qubits", "mixedness", "purity", "tr_rho_rhotilde", "indistinguishability", "hs_to_spinflip"]
                    .map(String::from)
                    .to_vec();
            let mut row: Vec<Cell> = vec![
                set.n_qubits.into(),
                set.mixedness.into(),
                set.purity.into(),
                set.tr_rho_rhotilde.into(),
                set.indistinguishability.into(),
                set.hs_to_spinflip.into(),
            ];
            let optional = [
                ("concurrence", set.concurrence),
                ("tangle", set.tangle),
                ("eta", set.separable_uncertainty),
                ("ppt_min_eigenvalue", set.ppt_min_eigenvalue),
            ];
            for (name, value) in optional {
                if let Some(v) = value {
                    columns.push(name.into());
                    row.push(v.into());
                }
            }
            for (k, q) in set.per_qubit.iter().enumerate() {
                for (name, v) in [("coherence", q.coherence), ("predictability", q.predictability), ("s2bar", q.s2bar)] {
                    columns.push(format!("{name}_{}", k + 1));
                    row.push(v.into());
                }
            }
            if let Some(r) = roof {
                columns.push("convex_roof_tangle".into());
                row.push(r.tangle.into());
            }
            let mut t = Table::new(columns);
            t.rows.push(row);
            t.to_csv()
        }
    };
    Ok(Output { text, pass: true })
}

// ----------------------------------------------------------------- verify

pub enum VerifySource {
    Family(String),
    Grid { family: String, step: f64 },
    File(PathBuf),
    RandomPure { n: usize, count: usize },
    RandomMixed { n: usize, rank: Option<usize>, count: usize },
}

#[derive(Serialize)]
struct StateReports {
    index: usize,
    label: String,
    reports: Vec<RelationReport>,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    states: &'a [StateReports],
    summary: BatchSummary,
}

fn keep_relation(id: &str, filters: &[String]) -> bool {
    filters.is_empty()
        || filters.iter().any(|f| id == f || (id.starts_with(f.as_str()) && id[f.len()..].starts_with('.')))
}

fn reports_for(item: &Labeled, tol: &Tolerances) -> CliResult<Vec<RelationReport>> {
    let mut reports = verify_state(&item.state, tol)?;
    match item.family {
        Family::Werner => reports.extend(verify_werner(&item.state.density(), tol)?),
        Family::Mems => reports.push(verify_mems(&item.state.density(), tol)?),
        Family::Other => {}
    }
    Ok(reports)
}

pub fn verify(cfg: &RunConfig, source: VerifySource, filters: &[String]) -> CliResult<Output> {
    let tol = cfg.tolerances;
    let items: Vec<CliResult<Labeled>> = match source {
        VerifySource::Family(spec) => vec![from_spec(&spec)],
        VerifySource::Grid { family, step } => family_grid(&family, step)?.into_iter().map(|(_, l)| Ok(l)).collect(),
        VerifySource::File(path) => {
            vec![Ok(Labeled { label: path.display().to_string(), state: load_file(&path)?, family: Family::Other })]
        }
        VerifySource::RandomPure { n, count } => {
            check_qubits(n)?;
            check_count(count)?;
            (0..count)
                .into_par_iter()
                .map(|i| {
                    let state = random_state(n, None, cfg.seed, i)?;
                    Ok(Labeled { label: format!("random_pure:{n}:{i}"), state, family: Family::Other })
                })
                .collect()
        }
        VerifySource::RandomMixed { n, rank, count } => {
            check_qubits(n)?;
            check_count(count)?;
            let rank = rank.unwrap_or(1 << n);
            check_rank(n, rank)?;
            (0..count)
                .into_par_iter()
                .map(|i| {
                    let state = random_state(n, Some(rank), cfg.seed, i)?;
                    Ok(Labeled { label: format!("random_mixed:{n}:{rank}:{i}"), state, family: Family::Other })
                })
                .collect()
        }
    };
    let items: Vec<Labeled> = items.into_iter().collect::<CliResult<_>>()?;
    let states: Vec<StateReports> = items
        .par_iter()
        .enumerate()
        .map(|(index, item)| {
            let reports = reports_for(item, &tol)?.into_iter().filter(|r| keep_relation(&r.relation_id, filters)).collect();
            Ok(StateReports { index, label: item.label.clone(), reports })
        })
        .collect::<CliResult<_>>()?;
    let summary = summarize(states.iter().flat_map(|s| &s.reports));
    let pass = summary.passed == summary.total;
    let text = match cfg.format {
        Format::Json => to_json(&VerifyOutput { states: &states, summary }),
        Format::Csv => {
            let mut t = Table::new(["index", "label", "relation_id", "lhs", "rhs", "residual", "pass"]);
            for s in &states {
                for r in &s.reports {
                    t.rows.push(vec![
                        s.index.into(),
                        s.label.as_str().into(),
                        r.relation_id.as_str().into(),
                        r.lhs.into(),
                        r.rhs.into(),
                        r.residual.into(),
                        r.pass.into(),
                    ]);
                }
            }
            t.to_csv()
        }
    };
    Ok(Output { text, pass })
}

// ------------------------------------------------------------------ sweep

#[derive(Serialize)]
struct SweepOutput<'a> {
    family: &'a str,
    columns: &'a [String],
    rows: &'a [Vec<Cell>],
}

pub fn sweep(cfg: &RunConfig, family: &str, step: f64) -> CliResult<Output> {
    let points = family_grid(family, step)?;
    let params: &[&str] = if family == "werner" { &["lambda"] } else { &["x1", "x2"] };
    let mut columns: Vec<String> = params.iter().map(|s| s.to_string()).collect();
    columns.extend(
        ["mixedness", "tr_rho_rhotilde", "indistinguishability", "tangle", "eta", "s2bar_1", "s2bar_2", "ppt_min_eig"]
            .map(String::from),
    );
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|(p, item)| {
            let rho = item.state.density();
            let set = measure_set(&rho)?;
            let mut row: Vec<Cell> = p.iter().map(|&v| v.into()).collect();
            row.extend([
                set.mixedness.into(),
                set.tr_rho_rhotilde.into(),
                set.indistinguishability.into(),
                set.tangle.unwrap_or(f64::NAN).into(),
                measures::separable_uncertainty_raw(&rho)?.into(),
                set.per_qubit[0].s2bar.into(),
                set.per_qubit[1].s2bar.into(),
                set.ppt_min_eigenvalue.unwrap_or(f64::NAN).into(),
            ]);
            Ok(row)
        })
        .collect::<CliResult<_>>()?;
    let text = match cfg.format {
        Format::Json => to_json(&SweepOutput { family, columns: &columns, rows: &rows }),
        Format::Csv => Table { columns, rows }.to_csv(),
    };
    Ok(Output { text, pass: true })
}

// ----------------------------------------------------------------- sample

#[derive(Serialize)]
struct SampleSummary {
    total: usize,
    passed: usize,
    max_abs_residual: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_monogamy_slack: Option<f64>,
}

#[derive(Serialize)]
struct SampleOutput<'a> {
    n_qubits: usize,
    count: usize,
    kind: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    columns: &'a [String],
    rows: &'a [Vec<Cell>],
    summary: &'a SampleSummary,
}

pub fn sample(cfg: &RunConfig, n: usize, count: usize, rank: Option<usize>) -> CliResult<Output> {
    check_qubits(n)?;
    check_count(count)?;
    if let Some(r) = rank {
        check_rank(n, r)?;
    }
    let tol = cfg.tolerances;
    let samples: Vec<(Vec<f64>, Vec<RelationReport>)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let state = random_state(n, rank, cfg.seed, i)?;
            let rho = state.density();
            let mut values = vec![measures::mixedness(&rho)];
            if n == 2 {
                values.push(measures::tangle(&rho)?);
                values.push(measures::separable_uncertainty_raw(&rho)?);
            }
            Ok((values, verify_state(&state, &tol)?))
        })
        .collect::<CliResult<_>>()?;

    let mut columns: Vec<String> = vec!["index".into(), "mixedness".into()];
    if n == 2 {
        columns.extend(["tangle".into(), "eta".into()]);
    }
    let ids: Vec<String> = samples[0].1.iter().map(|r| r.relation_id.clone()).collect();
    columns.extend(ids.iter().map(|id| format!("{id}_residual")));

    let mut max_abs = BTreeMap::new();
    let mut min_slack: Option<f64> = None;
    let mut rows = Vec::with_capacity(count);
    for (i, (values, reports)) in samples.iter().enumerate() {
        let mut row: Vec<Cell> = vec![i.into()];
        row.extend(values.iter().map(|&v| Cell::from(v)));
        for r in reports {
            row.push(r.residual.into());
            let e = max_abs.entry(r.relation_id.clone()).or_insert(0.0f64);
            *e = e.max(r.violation());
            if r.relation_id == "eq8" {
                min_slack = Some(min_slack.map_or(r.residual, |m: f64| m.min(r.residual)));
            }
        }
        rows.push(row);
    }
    let batch = summarize(samples.iter().flat_map(|s| &s.1));
    let summary = SampleSummary { total: batch.total, passed: batch.passed, max_abs_residual: max_abs, min_monogamy_slack: min_slack };
    let pass = batch.passed == batch.total;
    let text = match cfg.format {
        Format::Json => to_json(&SampleOutput {
            n_qubits: n,
            count,
            kind: if rank.is_some() { "mixed" } else { "pure" },
            rank,
            columns: &columns,
            rows: &rows,
            summary: &summary,
        }),
        Format::Csv => {
            eprint!("{}", to_json(&summary));
            Table { columns, rows }.to_csv()
        }
    };
    Ok(Output { text, pass })
}

// -------------------------------------------------------------------- bsa

#[derive(Serialize)]
struct BsaOutput<'a> {
    source: &'a str,
    lambda: f64,
    psi_e: Option<Vec<[f64; 2]>>,
    rho_s: Option<Vec<[f64; 2]>>,
    certificates: Certificates,
    converged: bool,
    best_restart: usize,
    reports: &'a [RelationReport],
}

pub fn bsa(cfg: &RunConfig, source: (String, State), budget: usize) -> CliResult<Output> {
    let (label, state) = source;
    if budget == 0 {
        return Err(input("budget must be at least 1"));
    }
    let rho = state.density();
    let lsd = best_separable_approximation_with(&rho, &LsConfig { restarts: budget, seed: cfg.seed })?;
    let reports = verify_ls(&rho, &lsd)?;
    let pass = reports.iter().all(|r| r.pass);
    let text = match cfg.format {
        Format::Json => to_json(&BsaOutput {
            source: &label,
            lambda: lsd.lambda,
            psi_e: lsd.psi_e.as_ref().map(|p| p.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            rho_s: lsd.rho_s.as_ref().map(|r| r.matrix().entries().iter().map(|z| [z.re, z.im]).collect()),
            certificates: lsd.certificates,
            converged: lsd.converged,
            best_restart: lsd.best_restart,
            reports: &reports,
        }),
        Format::Csv => {
            let mut t = Table::new(["lambda", "converged", "residual_min_eig", "residual_ppt_min_eig"]);
            let mut row: Vec<Cell> = vec![
                lsd.lambda.into(),
                lsd.converged.into(),
                lsd.certificates.residual_min_eig.into(),
                lsd.certificates.residual_ppt_min_eig.into(),
            ];
            for r in &reports {
                t.columns.push(format!("{}_residual", r.relation_id));
                row.push(r.residual.into());
            }
            t.rows.push(row);
            t.to_csv()
        }
    };
    Ok(Output { text, pass })
}
