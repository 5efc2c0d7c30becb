//! The `monotone` command line: checks, blow-ups, face listings, the
//! low-dimensional catalog, the blow-up diagram, and theorem verification.
//!
//! Every command returns a [`CommandResult`] instead of printing, so the
//! binary is a thin wrapper and tests can drive the whole surface in process.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use monotone_core::blowup::{
    admits_monotone_blow_up, blow_up, is_monotone, is_reflexive, is_smooth, monotone_blow_up,
};
use monotone_core::catalog::{build_blowup_dag, enumerate_monotone};
use monotone_core::io;
use monotone_core::verify::{
    verify_length_lemma, verify_length_lemma_descendants, verify_simplex_theorem,
    verify_three_blowups, verify_vertex_theorem, verify_vertex_theorem_sampled, VerificationReport,
};
use monotone_core::{Error, FaceRef, Polytope, Rat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub report: String,
    pub machine_output: Option<Value>,
}

impl CommandResult {
    /// What the binary prints: the JSON document under `--json`, the text
    /// report otherwise.
    pub fn rendered(&self) -> String {
        match &self.machine_output {
            Some(v) => serde_json::to_string_pretty(v).expect("json values serialize") + "\n",
            None => self.report.clone(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::BlowUpTooLarge
                | Error::NoMonotoneBlowUp
                | Error::NotMonotone
                | Error::NotLattice
                | Error::NotSmooth
                | Error::CodimTooSmall
                | Error::CatalogIncomplete => EXIT_FAILED,
                _ => EXIT_USAGE,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "monotone",
    version,
    about = "Monotone lattice polytopes and their blow-ups"
)]
struct Cli {
    /// Emit a JSON document instead of the text report
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smoothness, reflexivity, f-vector and normalized volume
    Check {
        path: PathBuf,
        /// Exit with status 1 unless the polytope is monotone
        #[arg(long)]
        require_monotone: bool,
    },
    /// Blow up a face, given by facet indices or as a vertex
    Blowup {
        path: PathBuf,
        /// Comma-separated facet indices cutting out the face
        #[arg(
            long,
            value_delimiter = ',',
            conflicts_with = "vertex",
            required_unless_present = "vertex"
        )]
        face: Option<Vec<usize>>,
        #[arg(long)]
        vertex: Option<usize>,
        /// Blow-up size p/q; defaults to the monotone size k - 1
        #[arg(long)]
        eps: Option<String>,
        /// Where to write the result (JSON if the name ends in .json)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the faces of a polytope
    Faces {
        path: PathBuf,
        #[arg(long)]
        codim: Option<usize>,
    },
    /// All monotone polytopes of a dimension up to lattice equivalence
    Enumerate {
        #[arg(long)]
        dim: usize,
        /// Directory for one file per class plus index.json
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The diagram of monotone blow-ups among the catalog
    Diagram {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = DiagramFormat::Graph)]
        format: DiagramFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check one of the classification results
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random descendants to sample for the vertex result in dimension ≥ 4
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DiagramFormat {
    Graph,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Vertex,
    Simplex,
    Lengths,
    DisjointCount,
}

pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return CommandResult {
                exit_code: code,
                report: e.to_string(),
                machine_output: None,
            };
        }
    };
    let json = cli.json;
    match dispatch(cli.command) {
        Ok((exit_code, report, doc)) => CommandResult {
            exit_code,
            report,
            machine_output: json.then_some(doc),
        },
        Err(e) => CommandResult {
            exit_code: e.exit_code(),
            report: format!("error: {e}\n"),
            machine_output: json
                .then(|| json!({ "error": e.to_string(), "exit_code": e.exit_code() })),
        },
    }
}

type Outcome = (i32, String, Value);

fn dispatch(cmd: Command) -> CliResult<Outcome> {
    match cmd {
        Command::Check {
            path,
            require_monotone,
        } => cmd_check(&path, require_monotone),
        Command::Blowup {
            path,
            face,
            vertex,
            eps,
            out,
        } => cmd_blowup(&path, face, vertex, eps.as_deref(), out.as_deref()),
        Command::Faces { path, codim } => cmd_faces(&path, codim),
        Command::Enumerate { dim, out } => cmd_enumerate(dim, out.as_deref()),
        Command::Diagram { dim, format, out } => cmd_diagram(dim, format, out.as_deref()),
        Command::Verify {
            theorem,
            dim,
            seed,
            samples,
        } => cmd_verify(theorem, dim, seed, samples),
    }
}

fn read_file(path: &Path) -> CliResult<Polytope> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(io::read_polytope(&text)?)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn tuple(xs: &[usize]) -> String {
    let s: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", s.join(","))
}

fn cmd_check(path: &Path, require_monotone: bool) -> CliResult<Outcome> {
    let p = read_file(path)?;
    let smooth = is_smooth(&p);
    let reflexive = is_reflexive(&p);
    let monotone = is_monotone(&p);
    let vol = p.normalized_volume();
    let f = p.f_vector();
    let refl_text = match &reflexive {
        Ok(b) => yes_no(*b).to_string(),
        Err(e) => e.to_string(),
    };
    let report = format!(
        "smooth: {}, reflexive: {}, monotone: {}, vol: {}\nf-vector: {}\n",
        yes_no(smooth),
        refl_text,
        yes_no(monotone),
        vol,
        tuple(&f)
    );
    let doc = json!({
        "dim": p.dim(),
        "smooth": smooth,
        "reflexive": reflexive.as_ref().ok(),
        "lattice": p.is_lattice(),
        "monotone": monotone,
        "f_vector": f,
        "volume": vol.to_string(),
    });
    let code = if require_monotone && !monotone {
        EXIT_FAILED
    } else {
        EXIT_OK
    };
    Ok((code, report, doc))
}

fn parse_eps(s: &str) -> CliResult<Rat> {
    let bad = || CliError::Usage(format!("invalid --eps {s:?}; expected an integer or p/q"));
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p = p.trim().parse().map_err(|_| bad())?;
    let q: monotone_core::Int = q.trim().parse().map_err(|_| bad())?;
    if q == 0.into() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

fn select_face(
    p: &Polytope,
    face: Option<Vec<usize>>,
    vertex: Option<usize>,
) -> CliResult<FaceRef> {
    match (face, vertex) {
        (_, Some(v)) => Ok(p.vertex_face(v)?),
        (Some(mut fs), None) => {
            fs.sort_unstable();
            fs.dedup();
            Ok(p.face_from_facets(&fs)?)
        }
        (None, None) => Err(CliError::Usage(
            "one of --face or --vertex is required".into(),
        )),
    }
}

fn cmd_blowup(
    path: &Path,
    face: Option<Vec<usize>>,
    vertex: Option<usize>,
    eps: Option<&str>,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let p = read_file(path)?;
    let f = select_face(&p, face, vertex)?;
    let report = match eps {
        Some(e) => blow_up(&p, &f, &parse_eps(e)?)?,
        None => monotone_blow_up(&p, &f)?,
    };
    let q = &report.result;
    let monotone = is_monotone(q);
    let mut text = format!(
        "facets: {}, vol: {}, excised: {}, monotone: {}\n",
        q.num_facets(),
        q.normalized_volume(),
        report.excised.normalized_volume(),
        yes_no(monotone)
    );
    if let Some(o) = out {
        let is_json = o.extension().is_some_and(|x| x == "json");
        write_file(
            o,
            &if is_json {
                io::write_json(q)
            } else {
                io::write_text(q)
            },
        )?;
        text.push_str(&format!("written to {}\n", o.display()));
    } else {
        text.push_str(&io::write_text(q));
    }
    let doc = json!({
        "codim": f.codim,
        "facets": q.num_facets(),
        "volume": q.normalized_volume().to_string(),
        "excised_volume": report.excised.normalized_volume().to_string(),
        "new_facet_index": report.new_facet_index,
        "monotone": monotone,
        "result": io::polytope_json(q),
    });
    Ok((EXIT_OK, text, doc))
}

fn set_text(s: &std::collections::BTreeSet<usize>) -> String {
    let v: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", v.join(","))
}

fn cmd_faces(path: &Path, codim: Option<usize>) -> CliResult<Outcome> {
    let p = read_file(path)?;
    let faces: Vec<FaceRef> = match codim {
        Some(k) => p.faces(k)?,
        None => p
            .all_faces()
            .iter()
            .filter(|f| f.codim > 0)
            .cloned()
            .collect(),
    };
    let monotone = is_monotone(&p);
    let mut text = String::new();
    let mut rows = Vec::new();
    for f in &faces {
        let admits = monotone && admits_monotone_blow_up(&p, f);
        text.push_str(&format!(
            "codim {}: facets {} vertices {}{}\n",
            f.codim,
            set_text(&f.facet_indices),
            set_text(&f.vertex_indices),
            if admits { " monotone-blowup" } else { "" }
        ));
        rows.push(json!({
            "codim": f.codim,
            "facets": f.facet_indices,
            "vertices": f.vertex_indices,
            "monotone_blowup": admits,
        }));
    }
    Ok((EXIT_OK, text, json!({ "faces": rows })))
}

fn cmd_enumerate(dim: usize, out: Option<&Path>) -> CliResult<Outcome> {
    let c = enumerate_monotone(dim)?;
    let noun = if c.len() == 1 { "class" } else { "classes" };
    let mut text = format!("{} {noun}\n", c.len());
    for (i, e) in c.entries.iter().enumerate() {
        text.push_str(&format!(
            "  {i:>2}: f={} vol={} f-vector {}\n",
            e.num_facets(),
            e.volume,
            tuple(&e.f_vector)
        ));
    }
    let doc = io::catalog_json(&c);
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for (i, e) in c.entries.iter().enumerate() {
            write_file(
                &dir.join(format!("class-{i:02}.txt")),
                &io::key_to_text(&e.key),
            )?;
        }
        let index = serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n";
        write_file(&dir.join("index.json"), &index)?;
        text.push_str(&format!("written to {}\n", dir.display()));
    }
    Ok((EXIT_OK, text, doc))
}

fn cmd_diagram(dim: usize, format: DiagramFormat, out: Option<&Path>) -> CliResult<Outcome> {
    let d = build_blowup_dag(&enumerate_monotone(dim)?)?;
    let body = match format {
        DiagramFormat::Graph => io::dag_dot(&d),
        DiagramFormat::Json => {
            serde_json::to_string_pretty(&io::dag_json(&d)).expect("json values serialize") + "\n"
        }
    };
    let v = d.edges.iter().filter(|e| e.is_vertex_blowup).count();
    let summary = format!(
        "{} nodes, {} edges, {v} vertex blow-ups, {} maximal\n",
        d.nodes.len(),
        d.edges.len(),
        d.maximal_elements().len()
    );
    let text = match out {
        Some(o) => {
            write_file(o, &body)?;
            format!("{summary}written to {}\n", o.display())
        }
        None => body,
    };
    Ok((EXIT_OK, text, io::dag_json(&d)))
}

fn verification_outcome(r: VerificationReport) -> Outcome {
    let mut text = format!(
        "{}: {} ({} checks)\n",
        r.name,
        if r.passed { "pass" } else { "FAIL" },
        r.checks
    );
    for w in &r.witnesses {
        text.push_str(&format!("  witness: {w}\n"));
    }
    for c in &r.counterexamples {
        text.push_str(&format!("  counterexample: {c}\n"));
    }
    let code = if r.passed { EXIT_OK } else { EXIT_FAILED };
    let doc = serde_json::to_value(&r).expect("report serializes");
    (code, text, doc)
}

fn cmd_verify(
    theorem: Theorem,
    dim: Option<usize>,
    seed: u64,
    samples: usize,
) -> CliResult<Outcome> {
    let r = match theorem {
        Theorem::Vertex => {
            let n = dim.unwrap_or(3);
            if n <= 3 {
                verify_vertex_theorem(&enumerate_monotone(n)?)?
            } else {
                verify_vertex_theorem_sampled(n, samples, 2, seed)?
            }
        }
        Theorem::Simplex => verify_simplex_theorem(dim.unwrap_or(4))?,
        Theorem::Lengths => {
            let n = dim.unwrap_or(3);
            if n <= 3 {
                verify_length_lemma(&enumerate_monotone(n)?)?
            } else {
                verify_length_lemma_descendants(n, 2)?
            }
        }
        Theorem::DisjointCount => verify_three_blowups(dim.unwrap_or(6))?,
    };
    Ok(verification_outcome(r))
}
