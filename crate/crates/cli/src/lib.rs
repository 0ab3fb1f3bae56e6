//! The `lodlink` command: profile dumps, run a linking task, enrich a graph
//! with the links, or start the workbench server.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use lodlink_core::dataset::{
    enumerate_property_paths, lint_source, suggest_property_pairs, DataSource, SourceId, Terminal,
};
use lodlink_core::enrich::{inject_links, merge_metadata, MergePolicy};
use lodlink_core::io::{detect_format, parse, serialize_turtle, FormatTag};
use lodlink_core::matcher::{generate_links, LinkSet, MatchOptions, ProgressTracker, Verdict};
use lodlink_core::rdf::{Graph, Iri};
use lodlink_core::rule::{parse_rule_spec, validate_rule, SourceSpec};

#[derive(Parser)]
#[command(name = "lodlink", version, about = "Link discovery between RDF dumps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a dump and print its triple count.
    Validate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        format: Option<FormatTag>,
    },
    /// Property paths reachable from the dump's entities.
    Paths {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long)]
        entity_type: Option<String>,
        #[arg(long)]
        format: Option<FormatTag>,
    },
    /// Modelling problems that hurt linking.
    Lint {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        entity_type: Option<String>,
        #[arg(long)]
        format: Option<FormatTag>,
    },
    /// Path pairs of two dumps ranked by value overlap.
    Suggest {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[arg(long)]
        source_type: Option<String>,
        #[arg(long)]
        target_type: Option<String>,
    },
    /// Run a linking task file and write the links as N-Triples.
    Link {
        #[arg(long)]
        spec: PathBuf,
        /// Standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long)]
        target: Option<PathBuf>,
        #[arg(long)]
        no_blocking: bool,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Add links to a graph, optionally copying the linked metadata.
    Enrich {
        #[arg(long, value_enum, default_value_t = Mode::Merge)]
        mode: Mode,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        links: PathBuf,
        /// Dumps describing the link targets. Repeatable.
        #[arg(long = "target")]
        targets: Vec<PathBuf>,
        #[arg(long)]
        policy: Option<PathBuf>,
        /// Standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        provenance: Option<PathBuf>,
        /// JSON report of added and skipped triples.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Start the workbench API server.
    Serve {
        #[arg(long, default_value_t = 7070)]
        port: u16,
        /// Directory to restore state from and snapshot to on shutdown.
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Links,
    Merge,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Runs one command. Data goes to `out`, diagnostics to `err`. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 1;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Validate { input, format } => {
            let (graph, format) = load_graph(&input, format)?;
            emit(out, &format!("{} triples ({format})\n", graph.len()))
        }
        Command::Paths {
            input,
            max_depth,
            entity_type,
            format,
        } => {
            let source = load_source(&input, format, entity_type.as_deref())?;
            let profiles = enumerate_property_paths(&source, max_depth).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut text = String::from("path\tfrequency\tterminal\tsamples\n");
            for p in profiles {
                let terminal = match p.terminal {
                    Terminal::Literal => "LITERAL",
                    Terminal::Resource => "RESOURCE",
                    Terminal::Mixed => "MIXED",
                };
                text.push_str(&format!(
                    "{}\t{}\t{terminal}\t{}\n",
                    p.path.render(source.graph().prefixes()),
                    p.frequency,
                    p.sample_values.join(" | ")
                ));
            }
            emit(out, &text)
        }
        Command::Lint {
            input,
            entity_type,
            format,
        } => {
            let source = load_source(&input, format, entity_type.as_deref())?;
            let text: String = lint_source(&source)
                .iter()
                .map(|w| {
                    let subject = w.subject.as_ref().map_or("-", Iri::as_str);
                    format!("{}\t{subject}\t{}\n", w.code, w.message)
                })
                .collect();
            emit(out, &text)
        }
        Command::Suggest {
            source,
            target,
            max_depth,
            source_type,
            target_type,
        } => {
            let a = load_source(&source, None, source_type.as_deref())?;
            let b = load_source(&target, None, target_type.as_deref())?;
            let pairs = suggest_property_pairs(&a, &b, max_depth).map_err(|e| CliError::Usage(e.to_string()))?;
            let text: String = pairs
                .iter()
                .map(|p| {
                    format!(
                        "{:.3}\t{}\t{}\n",
                        p.score,
                        p.source_path.render(a.graph().prefixes()),
                        p.target_path.render(b.graph().prefixes())
                    )
                })
                .collect();
            emit(out, &text)
        }
        Command::Link {
            spec,
            out: out_path,
            source,
            target,
            no_blocking,
            threshold,
        } => {
            let text = read(&spec)?;
            let (task, mut rule) =
                parse_rule_spec(&text).map_err(|e| CliError::Input(format!("{}: {e}", spec.display())))?;
            let errors: Vec<_> = validate_rule(&rule, &[], &[])
                .into_iter()
                .filter(|i| i.is_error())
                .collect();
            if !errors.is_empty() {
                for e in &errors {
                    let _ = writeln!(err, "{}: {}", e.node_id.as_deref().unwrap_or("rule"), e.message);
                }
                return Err(CliError::Input(format!("{}: linkage rule is invalid", spec.display())));
            }
            if let Some(t) = threshold {
                rule.threshold = t;
            }
            let base = spec.parent().unwrap_or(Path::new("."));
            let src = task_source(base, &task.source, source, "src")?;
            let tgt = task_source(base, &task.target, target, "tgt")?;
            let options = MatchOptions { blocking: !no_blocking };
            let links = generate_links(&task.id, &rule, &src, &tgt, options, &ProgressTracker::new());
            let text = links.to_ntriples(&Verdict::EXPORTED);
            write_output(out_path.as_deref(), &text, out)?;
            let _ = writeln!(err, "{} links written", links.len());
            Ok(())
        }
        Command::Enrich {
            mode,
            graph,
            links,
            targets,
            policy,
            out: out_path,
            provenance,
            report,
        } => {
            let (g, _) = load_graph(&graph, None)?;
            let link_text = read(&links)?;
            let link_set = LinkSet::from_ntriples(stem(&links), &link_text)
                .map_err(|e| CliError::Input(format!("{}:{e}", links.display())))?;
            let (enriched, rep) = match mode {
                Mode::Links => inject_links(&g, &link_set),
                Mode::Merge => {
                    let policy = match policy {
                        Some(p) => MergePolicy::from_json(&read(&p)?)
                            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                        None => MergePolicy::default(),
                    };
                    let sources = targets
                        .iter()
                        .enumerate()
                        .map(|(i, t)| {
                            let (graph, format) = load_graph(t, None)?;
                            Ok(DataSource::new(
                                SourceId::new(format!("tgt-{i}")),
                                stem(t),
                                graph,
                                format,
                                None,
                            ))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let refs: Vec<&DataSource> = sources.iter().collect();
                    merge_metadata(&g, &link_set, &refs, &policy).map_err(|e| CliError::Runtime(e.to_string()))?
                }
            };
            write_output(out_path.as_deref(), &serialize_turtle(&enriched), out)?;
            if let Some(p) = provenance {
                write_file(&p, &rep.provenance())?;
            }
            if let Some(p) = report {
                write_file(&p, &format!("{:#}\n", rep.to_json()))?;
            }
            let _ = writeln!(err, "{} triples added, {} skipped", rep.added.len(), rep.skipped.len());
            Ok(())
        }
        Command::Serve { port, data } => {
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Runtime(e.to_string()))?;
            runtime
                .block_on(lodlink_server::serve(port, data.as_deref()))
                .map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "input".into(), |s| s.to_string_lossy().into_owned())
}

fn load_graph(path: &Path, format: Option<FormatTag>) -> Result<(Graph, FormatTag)> {
    let text = read(path)?;
    let format = match format {
        Some(f) => f,
        None => detect_format(&path.to_string_lossy(), text.as_bytes())
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
    };
    let graph = parse(&text, format).map_err(|e| CliError::Input(format!("{}:{e}", path.display())))?;
    Ok((graph, format))
}

fn load_source(path: &Path, format: Option<FormatTag>, entity_type: Option<&str>) -> Result<DataSource> {
    let (graph, format) = load_graph(path, format)?;
    let entity_type = entity_type
        .map(|t| graph.prefixes().resolve(t))
        .transpose()
        .map_err(|e| CliError::Usage(format!("--entity-type: {e}")))?;
    Ok(DataSource::new(
        SourceId::new(stem(path)),
        stem(path),
        graph,
        format,
        entity_type,
    ))
}

/// Loads one side of a task: the override if given, else the spec's path
/// relative to the spec file.
fn task_source(base: &Path, spec: &SourceSpec, over: Option<PathBuf>, id: &str) -> Result<DataSource> {
    let path = match (over, &spec.path) {
        (Some(p), _) => p,
        (None, Some(p)) => base.join(p),
        (None, None) => {
            return Err(CliError::Usage(format!(
                "source {:?} has no path; pass it with --source or --target",
                spec.label
            )))
        }
    };
    let (graph, format) = load_graph(&path, spec.format)?;
    Ok(DataSource::new(
        SourceId::new(id),
        spec.label.clone(),
        graph,
        format,
        spec.entity_type.clone(),
    ))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => emit(out, text),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Runtime(e.to_string()))
}
