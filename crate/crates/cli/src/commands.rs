use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use dqwalk::harness::{
    check_bidirected_edge_cancellation, check_mirror_symmetries, check_stationary_at_half_pi,
    check_transport_suppression, random_bipartite_graph, random_polynomial, seeded_rng, Instance,
    PartitionRule, PropertyReport, Start, Verdict, CANCELLATION, EXACT_TOL, STATIONARY,
    SUPPRESSION, TWO_ROUTE_TOL,
};
use dqwalk::render::{ProbabilityTable, Scale};
use dqwalk::{sweep_alpha, Error, InitialState, Phase, Substrate, WalkResult};
use rand::Rng;

use crate::config::{ConfigError, PropertyName, Resolved, RunConfig};

pub struct Context {
    pub out_dir: PathBuf,
    pub seed: u64,
}

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Property(String),
    Numeric(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Property(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Validation(m) | Failure::Property(m) | Failure::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } | Error::NotNormalized { .. } => {
                Failure::Numeric(e.to_string())
            }
            other => Failure::Validation(other.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Resolved, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    let located = |e: ConfigError| Failure::Validation(format!("{}: {e}", path.display()));
    let base = path.parent().unwrap_or(Path::new("."));
    RunConfig::parse(&text)
        .and_then(|c| c.resolve(&text, base))
        .map_err(located)
}

fn write(ctx: &Context, rel: &Path, contents: &str) -> Result<PathBuf, Failure> {
    let path = ctx.out_dir.join(rel);
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::Validation(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(&path, contents)
        .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// `walk.csv` -> `walk-3.csv`.
fn indexed(path: &Path, k: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{k}"),
    };
    path.with_file_name(name)
}

fn emit_walk(
    ctx: &Context,
    r: &Resolved,
    result: &WalkResult,
    token: &str,
    index: Option<usize>,
) -> Result<(), Failure> {
    let out = &r.config.output;
    let header = format!(
        "{}\nalpha: {token} = {}",
        r.echo(ctx.seed),
        result.alpha.radians()
    );
    let csv_path = index.map_or(out.csv.clone(), |k| indexed(&out.csv, k));
    let written = write(
        ctx,
        &csv_path,
        &result.to_csv(out.amplitudes, Some(&header)),
    )?;
    println!(
        "alpha {token}: max normalization defect {:.3e} -> {}",
        result.normalization_defect(),
        written.display()
    );
    if let Some(h) = &out.heatmap {
        let h = index.map_or(h.clone(), |k| indexed(h, k));
        let pgm = ProbabilityTable::from(result).to_pgm(out.scale.into(), Some(&header));
        write(ctx, &h, &pgm)?;
    }
    Ok(())
}

pub fn simulate(ctx: &Context, config: &Path) -> Result<(), Failure> {
    let r = load(config)?;
    if r.config.alphas.len() != 1 {
        return Err(Failure::Validation(format!(
            "{}: simulate takes exactly one alpha, got {}; use sweep for several",
            config.display(),
            r.config.alphas.len()
        )));
    }
    let alpha = &r.config.alphas[0];
    let psi = InitialState::localized(r.graph.node_count(), r.config.initial_node)?;
    let result = dqwalk::run_walk(
        Substrate::auto(&r.graph),
        alpha.phase(),
        &r.series,
        &psi,
        &r.grid,
    )?;
    emit_walk(ctx, &r, &result, &alpha.token, None)
}

pub fn sweep(ctx: &Context, config: &Path) -> Result<(), Failure> {
    let r = load(config)?;
    let psi = InitialState::localized(r.graph.node_count(), r.config.initial_node)?;
    let phases: Vec<Phase> = r.config.alphas.iter().map(|a| a.phase()).collect();
    let results = sweep_alpha(Substrate::auto(&r.graph), &r.series, &psi, &r.grid, &phases)?;
    for (k, (result, alpha)) in results.iter().zip(&r.config.alphas).enumerate() {
        emit_walk(ctx, &r, result, &alpha.token, Some(k))?;
    }
    Ok(())
}

/// Precondition failures become rejected records; anything else aborts.
fn or_rejected(
    property: &str,
    instance: String,
    tolerance: f64,
    res: dqwalk::Result<PropertyReport>,
) -> Result<PropertyReport, Failure> {
    match res {
        Ok(rep) => Ok(rep),
        Err(Error::Precondition(_)) => Ok(PropertyReport::rejected(property, instance, tolerance)),
        Err(e) => Err(e.into()),
    }
}

pub fn verify(ctx: &Context, config: &Path) -> Result<(), Failure> {
    let r = load(config)?;
    let v = r.config.verify.clone().ok_or_else(|| {
        Failure::Validation(format!(
            "{}: verify needs a \"verify\" block",
            config.display()
        ))
    })?;
    let graphs = match &v.graphs {
        Some(list) => list
            .iter()
            .map(|g| g.build(&r.base).map_err(Failure::Validation))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![r.graph.clone()],
    };
    let deltas: Vec<f64> = v.deltas.iter().map(|d| d.radians).collect();
    let node = r.config.initial_node;
    let inst = |g: &dqwalk::DirectedGraph, start: Start| {
        Instance::new(g.clone(), r.series.clone(), r.grid, start).to_string()
    };

    let mut reports = Vec::new();
    for g in &graphs {
        let start = node.min(g.node_count() - 1);
        for p in &v.properties {
            match p {
                PropertyName::Suppression | PropertyName::SuppressionRelaxed => {
                    let rule = if *p == PropertyName::Suppression {
                        PartitionRule::Strict
                    } else {
                        PartitionRule::IgnoreBidirected
                    };
                    let res = check_transport_suppression(g, &r.series, &r.grid, rule);
                    reports.push(or_rejected(
                        SUPPRESSION,
                        inst(g, Start::Partition),
                        EXACT_TOL,
                        res,
                    )?);
                }
                PropertyName::Mirror => {
                    let m = check_mirror_symmetries(g, &r.series, start, &r.grid, &deltas)?;
                    // the half-pi identities only exist for bipartite circulants
                    reports.extend(
                        m.all()
                            .into_iter()
                            .filter(|x| x.verdict != Verdict::Rejected)
                            .cloned(),
                    );
                }
                PropertyName::Stationary => {
                    let res = check_stationary_at_half_pi(g, &r.series, start, &r.grid);
                    reports.push(or_rejected(
                        STATIONARY,
                        inst(g, Start::Node(start)),
                        EXACT_TOL,
                        res,
                    )?);
                }
                PropertyName::Cancellation => {
                    let other = v
                        .compare
                        .as_ref()
                        .expect("checked at resolve time")
                        .build(&r.base)
                        .map_err(Failure::Validation)?;
                    let res =
                        check_bidirected_edge_cancellation(g, &other, &r.series, start, &r.grid);
                    reports.push(or_rejected(
                        CANCELLATION,
                        inst(g, Start::Node(start)),
                        TWO_ROUTE_TOL,
                        res,
                    )?);
                }
            }
        }
    }

    let suppression_rule = v.properties.iter().find_map(|p| match p {
        PropertyName::Suppression => Some(PartitionRule::Strict),
        PropertyName::SuppressionRelaxed => Some(PartitionRule::IgnoreBidirected),
        _ => None,
    });
    if let Some(rule) = suppression_rule.filter(|_| v.random_trials > 0) {
        let mut rng = seeded_rng(ctx.seed);
        for _ in 0..v.random_trials {
            let n = rng.random_range(2..=16);
            let g = random_bipartite_graph(&mut rng, n)?;
            let series = random_polynomial(&mut rng, 5);
            reports.push(check_transport_suppression(&g, &series, &r.grid, rule)?);
        }
    }

    let mut body = String::new();
    for line in r.echo(ctx.seed).lines() {
        body.push_str("# ");
        body.push_str(line);
        body.push('\n');
    }
    body.push_str("property,instance,deviation,tolerance,verdict\n");
    for rep in &reports {
        body.push_str(&rep.to_record());
        body.push('\n');
    }
    let path = write(ctx, &r.config.output.report, &body)?;

    let failing: Vec<&PropertyReport> = reports.iter().filter(|x| !x.passed()).collect();
    println!(
        "{} checks, {} passed -> {}",
        reports.len(),
        reports.len() - failing.len(),
        path.display()
    );
    if failing.is_empty() {
        return Ok(());
    }
    for f in &failing {
        eprintln!(
            "{} {}: {} (deviation {:e}, tolerance {:e})",
            f.verdict, f.property, f.instance, f.deviation, f.tolerance
        );
    }
    Err(Failure::Property(format!(
        "{} of {} checks did not pass",
        failing.len(),
        reports.len()
    )))
}

pub fn render(ctx: &Context, csv: &Path, output: &Path, scale: Scale) -> Result<(), Failure> {
    let text = fs::read_to_string(csv)
        .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", csv.display())))?;
    let table = ProbabilityTable::parse_csv(&text)
        .map_err(|e| Failure::Validation(format!("{}: {e}", csv.display())))?;
    let mut header: Vec<&str> = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim_start())
        .collect();
    let scale_line = format!("scale: {scale}");
    header.push(&scale_line);
    let path = write(ctx, output, &table.to_pgm(scale, Some(&header.join("\n"))))?;
    println!(
        "{} x {} graymap -> {}",
        table.probabilities.ncols(),
        table.probabilities.nrows(),
        path.display()
    );
    Ok(())
}
