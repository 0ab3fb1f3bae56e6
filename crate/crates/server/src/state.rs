use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use lodlink_core::dataset::{DataSource, Registry, SourceId};
use lodlink_core::io::{parse_ntriples, serialize_ntriples, FormatTag};
use lodlink_core::matcher::{Link, LinkSet, ProgressTracker, Verdict};
use lodlink_core::rdf::{Iri, PrefixMap};
use lodlink_core::rule::{parse_rule_payload, rule_payload, LinkageRule};

pub struct Run {
    pub progress: Arc<ProgressTracker>,
    pub links: Option<LinkSet>,
    pub active: bool,
}

pub struct Task {
    pub id: String,
    pub source: SourceId,
    pub target: SourceId,
    pub link_type: Iri,
    pub rule: Option<LinkageRule>,
    pub run: Option<Run>,
}

#[derive(Default)]
pub struct Inner {
    pub registry: Registry,
    pub tasks: BTreeMap<String, Task>,
    pub next_task: usize,
}

impl Inner {
    /// Source and target prefixes, source bindings first.
    pub fn task_prefixes(&self, task: &Task) -> PrefixMap {
        let mut prefixes = PrefixMap::new();
        for id in [&task.source, &task.target] {
            if let Some(s) = self.registry.get(id) {
                prefixes.merge_free(s.graph().prefixes());
            }
        }
        prefixes
    }

    pub fn new_task_id(&mut self) -> String {
        self.next_task += 1;
        format!("task-{}", self.next_task)
    }
}

/// Shared server state. Locks are never held across an await point.
#[derive(Clone, Default)]
pub struct AppState {
    inner: Arc<RwLock<Inner>>,
    data_dir: Option<Arc<PathBuf>>,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    /// State that is restored from, and snapshotted to, `dir`.
    pub fn with_data_dir(dir: &Path) -> std::io::Result<Self> {
        let state = Self {
            inner: Arc::default(),
            data_dir: Some(Arc::new(dir.to_path_buf())),
        };
        if dir.join(SNAPSHOT_FILE).exists() {
            state.restore(dir)?;
        }
        Ok(state)
    }

    pub fn data_dir(&self) -> Option<&Path> {
        self.data_dir.as_deref().map(PathBuf::as_path)
    }

    pub fn read(&self) -> RwLockReadGuard<'_, Inner> {
        self.inner.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn write(&self) -> RwLockWriteGuard<'_, Inner> {
        self.inner.write().unwrap_or_else(|e| e.into_inner())
    }

    /// Writes every source as N-Triples plus a JSON index of sources and
    /// tasks.
    pub fn snapshot(&self, dir: &Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir.join("sources"))?;
        let inner = self.read();
        let mut sources = Vec::new();
        for (i, s) in inner.registry.list().iter().enumerate() {
            let file = format!("sources/{i}.nt");
            std::fs::write(dir.join(&file), serialize_ntriples(s.graph()))?;
            sources.push(SourceRecord {
                id: s.id().clone(),
                label: s.label().to_string(),
                format: s.format(),
                entity_type: s.entity_type().map(|t| t.as_str().to_string()),
                prefixes: s.graph().prefixes().clone(),
                file,
            });
        }
        let tasks = inner
            .tasks
            .values()
            .map(|t| TaskRecord {
                id: t.id.clone(),
                source: t.source.clone(),
                target: t.target.clone(),
                link_type: t.link_type.as_str().to_string(),
                rule: t.rule.as_ref().map(|r| rule_payload(r, &inner.task_prefixes(t))),
                links: t.run.as_ref().and_then(|r| r.links.as_ref()).map(|ls| {
                    ls.links()
                        .iter()
                        .map(|l| LinkRecord {
                            source: l.source.as_str().to_string(),
                            predicate: l.predicate.as_str().to_string(),
                            target: l.target.as_str().to_string(),
                            confidence: l.confidence,
                            verdict: l.verdict,
                        })
                        .collect()
                }),
            })
            .collect();
        let snapshot = Snapshot {
            sources,
            tasks,
            next_task: inner.next_task,
        };
        let text = serde_json::to_string_pretty(&snapshot).map_err(std::io::Error::other)?;
        std::fs::write(dir.join(SNAPSHOT_FILE), text)
    }

    fn restore(&self, dir: &Path) -> std::io::Result<()> {
        let invalid = |e: String| std::io::Error::new(std::io::ErrorKind::InvalidData, e);
        let text = std::fs::read_to_string(dir.join(SNAPSHOT_FILE))?;
        let snapshot: Snapshot = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
        let mut inner = self.write();
        let mut ids: BTreeMap<SourceId, SourceId> = BTreeMap::new();
        for rec in snapshot.sources {
            let nt = std::fs::read_to_string(dir.join(&rec.file))?;
            let mut graph = parse_ntriples(&nt).map_err(|e| invalid(e.to_string()))?;
            *graph.prefixes_mut() = rec.prefixes;
            let entity_type = rec
                .entity_type
                .map(|t| Iri::new(t).map_err(|e| invalid(e.to_string())))
                .transpose()?;
            let source = inner
                .registry
                .register(graph, &rec.label, rec.format, entity_type)
                .map_err(|e| invalid(e.to_string()))?;
            ids.insert(rec.id, source.id().clone());
        }
        for rec in snapshot.tasks {
            let (Some(source), Some(target)) = (ids.get(&rec.source), ids.get(&rec.target)) else {
                continue;
            };
            let mut task = Task {
                id: rec.id,
                source: source.clone(),
                target: target.clone(),
                link_type: Iri::new(rec.link_type).map_err(|e| invalid(e.to_string()))?,
                rule: None,
                run: None,
            };
            if let Some(payload) = rec.rule {
                let prefixes = inner.task_prefixes(&task);
                task.rule =
                    Some(parse_rule_payload(&payload.to_string(), &prefixes).map_err(|e| invalid(e.to_string()))?);
            }
            if let Some(links) = rec.links {
                let links = links
                    .into_iter()
                    .map(|l| {
                        Ok(Link {
                            source: Iri::new(l.source)?,
                            predicate: Iri::new(l.predicate)?,
                            target: Iri::new(l.target)?,
                            confidence: l.confidence,
                            verdict: l.verdict,
                        })
                    })
                    .collect::<Result<Vec<_>, lodlink_core::rdf::RdfError>>()
                    .map_err(|e| invalid(e.to_string()))?;
                let progress = Arc::new(ProgressTracker::new());
                progress.start(0);
                progress.finish();
                task.run = Some(Run {
                    progress,
                    links: Some(LinkSet::new(task.id.clone(), links)),
                    active: false,
                });
            }
            inner.tasks.insert(task.id.clone(), task);
        }
        inner.next_task = snapshot.next_task;
        Ok(())
    }
}

pub fn source_summary(source: &DataSource) -> Value {
    serde_json::json!({
        "id": source.id(),
        "label": source.label(),
        "format": source.format(),
        "entityType": source.entity_type().map(|t| t.as_str()),
        "tripleCount": source.graph().len(),
        "entityCount": source.entities().len(),
    })
}

const SNAPSHOT_FILE: &str = "snapshot.json";

#[derive(Serialize, Deserialize)]
struct Snapshot {
    sources: Vec<SourceRecord>,
    tasks: Vec<TaskRecord>,
    next_task: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SourceRecord {
    id: SourceId,
    label: String,
    format: FormatTag,
    entity_type: Option<String>,
    prefixes: PrefixMap,
    file: String,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct TaskRecord {
    id: String,
    source: SourceId,
    target: SourceId,
    link_type: String,
    rule: Option<Value>,
    links: Option<Vec<LinkRecord>>,
}

#[derive(Serialize, Deserialize)]
struct LinkRecord {
    source: String,
    predicate: String,
    target: String,
    confidence: f64,
    verdict: Verdict,
}
