use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use spiral_core::classify::{build_edge_classes, ClassMode};
use spiral_core::corpus::{load_fixture, CorpusError, GeneratorSpec};
use spiral_core::detect::{
    detect_ring_partition, detect_spiral, guided_verify, strength_classify, DetectError, DetectOptions, Verdict,
};
use spiral_core::geometry::ContactKind;
use spiral_core::patch::{build_contact_graph, validate_patch, Patch, PatchError, PatchFile};
use thiserror::Error;

pub const EXIT_SPIRAL: u8 = 0;
pub const EXIT_NONE: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Patch(#[from] PatchError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{0}")]
    BadArg(String),
    #[error("report does not match patch: {0}")]
    MismatchedReport(String),
}

pub fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Spiral => EXIT_SPIRAL,
        Verdict::NoSpiral => EXIT_NONE,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a patch file, or a shipped fixture given as `fixture:NAME`.
pub fn load_patch(input: &str) -> Result<Patch, CliError> {
    if let Some(name) = input.strip_prefix("fixture:") {
        return Ok(load_fixture(name)?.patch);
    }
    let text = read(Path::new(input))?;
    let file: PatchFile = serde_json::from_str(&text).map_err(PatchError::from)?;
    Ok(Patch::from_file(file)?)
}

/// Writes `text` to `out`, or to stdout.
fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.write_all(b"\n"))
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

/// Prints `line` on stdout when the report goes to a file, else on stderr.
fn status_line(line: &str, out: Option<&Path>) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

pub fn gen(spec: GeneratorSpec, out: Option<&Path>) -> Result<u8, CliError> {
    let g = spec.generate()?;
    emit(&g.to_json(), out)?;
    Ok(0)
}

pub fn validate(input: &str) -> Result<u8, CliError> {
    let p = load_patch(input)?;
    let defects = validate_patch(&p);
    if defects.is_empty() {
        println!("ok: {} tiles", p.len());
        return Ok(0);
    }
    for d in &defects {
        println!("defect: {d}");
    }
    Ok(EXIT_NONE)
}

pub fn graph(input: &str, with_pointwise: bool) -> Result<u8, CliError> {
    let p = load_patch(input)?;
    let g = build_contact_graph(&p)?;
    let edges: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| e.kind == ContactKind::Segmental || (with_pointwise && e.kind == ContactKind::Pointwise))
        .collect();
    println!("{} edges", edges.len());
    for e in edges {
        let kind = match e.kind {
            ContactKind::Segmental => "segmental",
            _ => "pointwise",
        };
        println!("{}\t{}\t{kind}", p.id(e.a), p.id(e.b));
    }
    Ok(0)
}

pub fn classify(input: &str, similarity: bool) -> Result<u8, CliError> {
    let p = load_patch(input)?;
    let mode = if similarity || p.singular_mode {
        ClassMode::Similarity
    } else {
        ClassMode::Isometry
    };
    let g = build_contact_graph(&p)?;
    for (kind, name) in [
        (ContactKind::Segmental, "segmental"),
        (ContactKind::Pointwise, "pointwise"),
    ] {
        let table = build_edge_classes(&p, &g, kind, mode);
        println!("{} {name} classes", table.len());
        for c in &table.classes {
            let e = g.edge(c.edges[0]);
            println!(
                "  {}\t{} edge(s)\te.g. {}-{}",
                c.id,
                c.edges.len(),
                p.id(e.a),
                p.id(e.b)
            );
        }
    }
    Ok(0)
}

pub fn analyze(input: &str, opts: &DetectOptions, out: Option<&Path>) -> Result<u8, CliError> {
    let p = load_patch(input)?;
    let report = detect_spiral(&p, opts)?;
    emit(&to_json(&report), out)?;
    status_line(&report.summary(), out);
    Ok(exit_code(report.verdict))
}

pub fn verify(
    input: &str,
    classes: &[usize],
    cg_classes: Option<&[usize]>,
    opts: &DetectOptions,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let p = load_patch(input)?;
    let report = guided_verify(&p, classes, cg_classes, opts)?;
    emit(&to_json(&report), out)?;
    let line = match report.candidates.iter().find(|c| c.status.is_verified()) {
        Some(c) => format!("verified: {} arm(s), cut {}", c.arms.len(), c.cut),
        None => match report
            .diagnostics
            .iter()
            .rev()
            .find(|d| d.contains("discarded") || d.contains("failed"))
        {
            Some(d) => format!("not verified: {d}"),
            None => "not verified".into(),
        },
    };
    status_line(&line, out);
    Ok(exit_code(report.verdict))
}

#[derive(Serialize)]
struct RingOutput {
    ring: Option<spiral_core::detect::RingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strength: Option<spiral_core::detect::Strength>,
}

pub fn ring(input: &str, strength: bool, opts: &DetectOptions, out: Option<&Path>) -> Result<u8, CliError> {
    let p = load_patch(input)?;
    let ring = detect_ring_partition(&p, ClassMode::Similarity, opts)?;
    let strength = if strength {
        Some(strength_classify(&p, opts)?)
    } else {
        None
    };
    let found = ring.is_some();
    let mut line = match &ring {
        Some(r) => format!("ring partition: {} ring(s), cut {}", r.rings.len(), r.cut),
        None => "no ring partition".to_string(),
    };
    if let Some(s) = strength {
        line.push_str(&format!("; strength: {s}"));
    }
    emit(&to_json(&RingOutput { ring, strength }), out)?;
    status_line(&line, out);
    Ok(if found { EXIT_SPIRAL } else { EXIT_NONE })
}

pub fn render(input: &str, report: Option<&Path>, graph: bool, out: Option<&Path>) -> Result<u8, CliError> {
    let p = load_patch(input)?;
    let overlay = match report {
        Some(path) => crate::render::Overlay::from_report(&p, &read(path)?)?,
        None => crate::render::Overlay::default(),
    };
    let svg = crate::render::render_svg(&p, &overlay, graph)?;
    emit(&svg, out)?;
    Ok(0)
}
