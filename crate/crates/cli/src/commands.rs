use std::fmt::Write as _;
use std::io::Write as _;

use serde::Serialize;
use singular_weyl::admissibility::{admissible_pairs, enumerate_admissible, is_admissible};
use singular_weyl::operators::Sign;
use singular_weyl::structure::{
    default_zero_k_max, level_curves, level_curves_csv, structure_report, GraphSpec, LadderGraph, StructureCase,
    StructureReport,
};
use singular_weyl::verify::{ktype_lattice, run_verification, Status, VerifyConfig, VerifyReport};
use singular_weyl::{Eigenvalue, Error};

use crate::args::{Figure, Format};
use crate::config::RunConfig;
use crate::CliError;

const DEFAULT_LAMBDA_MAX: i64 = 60;
const DEFAULT_M_RANGE: (i64, i64) = (-30, 30);
const FIGURE_M_RANGE: (i64, i64) = (0, 20);

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn csv<T: Serialize>(header: Option<&[&str]>, rows: &[T]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(header.is_none()).from_writer(Vec::new());
    if let Some(h) = header {
        w.write_record(h).expect("in-memory write");
    }
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is UTF-8")
}

/// An admissible `λ`, or exit status 2.
fn admissible_lambda(n: u32, lambda: i64) -> Result<Eigenvalue, CliError> {
    if is_admissible(n, lambda) {
        Ok(Eigenvalue(lambda))
    } else {
        Err(CliError::Invalid(Error::NotAdmissible { n, lambda }.to_string()))
    }
}

/// `--lambda` as a single eigenvalue, else every admissible `λ <= --lambda-max`.
fn eigenvalues(cfg: &RunConfig, default_max: Option<i64>) -> Result<Vec<Eigenvalue>, CliError> {
    let n = cfg.params.n();
    match (cfg.lambda, cfg.lambda_max.or(default_max)) {
        (Some(l), _) => Ok(vec![admissible_lambda(n, l)?]),
        (None, Some(max)) => Ok(enumerate_admissible(n, max)),
        (None, None) => Err(CliError::Invalid("give --lambda or --lambda-max".into())),
    }
}

pub fn admissible(cfg: &RunConfig) -> Result<(), CliError> {
    let n = cfg.params.n();
    let format = cfg.format(Format::Text, &[Format::Text, Format::Json, Format::Csv])?;
    if let Some(lambda) = cfg.lambda {
        #[derive(Serialize)]
        struct Pairs {
            n: u32,
            lambda: i64,
            admissible: bool,
            pairs: Vec<(i64, i64)>,
        }
        let (pairs, ok) = match admissible_pairs(n, Eigenvalue(lambda)) {
            Ok(p) => (p, true),
            Err(Error::NotAdmissible { .. }) => (Vec::new(), false),
            Err(e) => return Err(e.into()),
        };
        let note = format!("λ = {lambda} is not admissible for n = {n}");
        let out = match format {
            Format::Json => json(&Pairs { n, lambda, admissible: ok, pairs }),
            Format::Csv => csv(Some(&["l", "k"]), &pairs),
            _ if !ok => format!("{note}\n"),
            _ => {
                let items: Vec<String> = pairs.iter().map(|(l, k)| format!("({l},{k})")).collect();
                format!("{}\n", items.join(" "))
            }
        };
        if !ok && format != Format::Text {
            eprintln!("{note}");
        }
        return emit(cfg, &out);
    }
    let Some(max) = cfg.lambda_max else {
        return Err(CliError::Invalid("give --lambda or --lambda-max".into()));
    };
    let values: Vec<i64> = enumerate_admissible(n, max).into_iter().map(Eigenvalue::value).collect();
    let out = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct List<'a> {
                n: u32,
                lambda_max: i64,
                eigenvalues: &'a [i64],
            }
            json(&List { n, lambda_max: max, eigenvalues: &values })
        }
        Format::Csv => csv(Some(&["lambda"]), &values.iter().map(|v| (v,)).collect::<Vec<_>>()),
        _ => {
            let items: Vec<String> = values.iter().map(ToString::to_string).collect();
            format!("{}\n", items.join(" "))
        }
    };
    emit(cfg, &out)
}

#[derive(Serialize)]
struct KTypeRow {
    m: i64,
    l: i64,
    k: i64,
    lambda: i64,
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    harmonic: String,
}

pub fn ktypes(cfg: &RunConfig) -> Result<(), CliError> {
    let format = cfg.format(Format::Text, &[Format::Text, Format::Json, Format::Csv])?;
    let (m_min, m_max) = cfg.m_range(DEFAULT_M_RANGE)?;
    let n = cfg.params.n();
    let lattice = match cfg.lambda {
        Some(l) => {
            let lambda = admissible_lambda(n, l)?;
            let mut all = ktype_lattice(&cfg.params, l, m_min, m_max)?;
            all.retain(|f| f.lambda() == lambda);
            all
        }
        None => ktype_lattice(&cfg.params, cfg.lambda_max.unwrap_or(DEFAULT_LAMBDA_MAX), m_min, m_max)?,
    };
    let rows: Vec<KTypeRow> = lattice
        .iter()
        .map(|f| {
            let (a, b) = f.hyp_params();
            let i = f.index();
            KTypeRow {
                m: i.m,
                l: i.l,
                k: i.k,
                lambda: f.lambda().value(),
                a_re: a.re,
                a_im: a.im,
                b_re: b.re,
                b_im: b.im,
                harmonic: f.harmonic().poly().to_string(),
            }
        })
        .collect();
    let out = match format {
        Format::Json => json(&rows),
        Format::Csv => csv(None, &rows),
        _ => {
            let mut s = String::new();
            for r in &rows {
                writeln!(
                    s,
                    "λ={:<4} m={:<4} l={:<3} k={:<3} a={} b={} h={}",
                    r.lambda, r.m, r.l, r.k, r.a_re, r.b_re, r.harmonic
                )
                .unwrap();
            }
            s
        }
    };
    emit(cfg, &out)
}

fn verify_text(report: &VerifyReport) -> String {
    let mut s = String::new();
    let sm = &report.summary;
    writeln!(s, "n = {}, q = {}, s = {}{:+}i, {} K-types", report.n, report.q, report.s[0], report.s[1], report.ktypes)
        .unwrap();
    writeln!(s, "{} checks: {} passed, {} warned, {} failed", sm.checks, sm.passed, sm.warned, sm.failed).unwrap();
    for (op, r) in &sm.max_residual {
        writeln!(s, "  {op:<24} max residual {r:.3e}").unwrap();
    }
    for c in report.checks.iter().filter(|c| c.status != Status::Pass) {
        let index = c.index.map(|i| i.to_string()).unwrap_or_default();
        let detail = c.detail.as_deref().unwrap_or("");
        writeln!(s, "{:?} {} {index} {:.3e} {detail}", c.status, c.operator, c.max_residual).unwrap();
    }
    s
}

pub fn verify(cfg: &RunConfig) -> Result<(), CliError> {
    let format = cfg.format(Format::Json, &[Format::Json, Format::Text])?;
    if cfg.lambda.is_some() {
        return Err(CliError::Invalid("verify sweeps all λ up to --lambda-max; --lambda is not accepted".into()));
    }
    let (m_min, m_max) = cfg.m_range(DEFAULT_M_RANGE)?;
    let vc = VerifyConfig {
        lambda_max: cfg.lambda_max.unwrap_or(DEFAULT_LAMBDA_MAX),
        m_min,
        m_max,
        seed: cfg.seed,
        tolerances: cfg.tolerances,
        ..VerifyConfig::default()
    };
    let report = run_verification(&cfg.params, &vc)?;
    let out = match format {
        Format::Text => verify_text(&report),
        _ => json(&report),
    };
    emit(cfg, &out)?;
    let sm = &report.summary;
    eprintln!("{} checks: {} passed, {} warned, {} failed", sm.checks, sm.passed, sm.warned, sm.failed);
    if report.ok() {
        return Ok(());
    }
    for c in report.failures().take(20) {
        let index = c.index.map(|i| i.to_string()).unwrap_or_default();
        eprintln!("FAIL {} {index}: residual {:.3e} > {:.1e}", c.operator, c.max_residual, c.tolerance);
    }
    Err(CliError::Check(format!("{} check(s) failed", sm.failed)))
}

fn structure_text(report: &StructureReport) -> String {
    let mut s = String::new();
    let series = &report.series;
    writeln!(s, "n = {}, q = {}", report.n, report.q).unwrap();
    writeln!(s, "composition series, {series}").unwrap();
    if let Some(layer) = series.unique_irreducible {
        writeln!(s, "{layer} is the unique irreducible submodule").unwrap();
    }
    for d in &report.decompositions {
        writeln!(s, "λ = {}", d.lambda).unwrap();
        for x in &d.submodules {
            let mut line = format!("  H_{{{},{}}}: m ≡ {} (mod 4)", x.l, x.k, x.residue);
            if x.irreducible {
                line.push_str(", irreducible");
            }
            if let Some(w) = x.lowest_weight {
                write!(line, ", H⁺ = span{{m ≥ {w}}} lowest weight").unwrap();
            }
            if let Some(w) = x.highest_weight {
                write!(line, ", H⁻ = span{{m ≤ {w}}} highest weight").unwrap();
            }
            if x.case == StructureCase::Both {
                line.push_str(", 0 ⊂ H⁺ ⊂ H⁺⊕H⁻ ⊂ H");
            }
            if let Some(note) = &x.note {
                write!(line, " [{note}]").unwrap();
            }
            writeln!(s, "{line}").unwrap();
        }
    }
    s
}

pub fn structure(cfg: &RunConfig) -> Result<(), CliError> {
    let format = cfg.format(Format::Text, &[Format::Text, Format::Json])?;
    let lambdas = match (cfg.lambda, cfg.lambda_max) {
        (None, None) => Vec::new(),
        _ => eigenvalues(cfg, None)?,
    };
    let report = structure_report(&cfg.params, &lambdas)?;
    let out = match format {
        Format::Json => json(&report),
        _ => structure_text(&report),
    };
    emit(cfg, &out)
}

pub fn plot_data(cfg: &RunConfig, figure: Figure, samples: usize) -> Result<(), CliError> {
    let n = cfg.params.n();
    match figure {
        Figure::Levels => {
            let format = cfg.format(Format::Csv, &[Format::Csv, Format::Json])?;
            if cfg.lambda.is_some() {
                return Err(CliError::Invalid("the level-curve figure takes --lambda-max".into()));
            }
            let points = level_curves(n, cfg.lambda_max.unwrap_or(100), samples.max(2));
            let out = match format {
                Format::Json => json(&points),
                _ => level_curves_csv(&points),
            };
            emit(cfg, &out)
        }
        Figure::Lattice => {
            let format = cfg.format(Format::Json, &[Format::Json, Format::Dot])?;
            let (m_min, m_max) = cfg.m_range(FIGURE_M_RANGE)?;
            let lambdas = match cfg.lambda {
                Some(0) => vec![Eigenvalue(0)],
                _ => eigenvalues(cfg, None)?,
            };
            let spec = GraphSpec {
                zero_k_max: default_zero_k_max(n, &lambdas)?,
                lambdas,
                m_min,
                m_max,
                eta: true,
                heisenberg: Vec::new(),
            };
            graph_out(cfg, &LadderGraph::build(&cfg.params, &spec)?, format)
        }
        Figure::Heisenberg => {
            let format = cfg.format(Format::Dot, &[Format::Dot, Format::Json])?;
            let (m_min, m_max) = cfg.m_range(FIGURE_M_RANGE)?;
            let mut lambdas = vec![Eigenvalue(0)];
            lambdas.extend(eigenvalues(cfg, Some(30))?.into_iter().filter(|l| !l.is_zero()));
            let spec = GraphSpec {
                zero_k_max: default_zero_k_max(n, &lambdas)?,
                lambdas,
                m_min,
                m_max,
                eta: false,
                heisenberg: vec![Sign::Plus],
            };
            graph_out(cfg, &LadderGraph::build(&cfg.params, &spec)?, format)
        }
    }
}

fn graph_out(cfg: &RunConfig, graph: &LadderGraph, format: Format) -> Result<(), CliError> {
    let out = match format {
        Format::Dot => graph.to_dot(),
        _ => {
            let mut s = graph.to_json();
            s.push('\n');
            s
        }
    };
    emit(cfg, &out)
}
