use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::IntoResponse;
use axum::Json;
use serde::Deserialize;
use serde_json::{json, Value};

use lodlink_core::dataset::{enumerate_property_paths, SourceId, MAX_PATH_DEPTH};
use lodlink_core::matcher::{generate_links, MatchOptions, Progress, ProgressTracker, RunState, Verdict};
use lodlink_core::rdf::{vocab, Term};
use lodlink_core::rule::{evaluate_comparison, parse_rule_payload, rule_payload, validate_rule, LinkageRule};

use crate::datasets::find_source;
use crate::error::ApiError;
use crate::state::{AppState, Inner, Run, Task};

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CreateTask {
    source_id: String,
    target_id: String,
    link_type: Option<String>,
}

fn task_json(inner: &Inner, task: &Task) -> Value {
    let prefixes = inner.task_prefixes(task);
    json!({
        "id": task.id,
        "sourceId": task.source,
        "targetId": task.target,
        "linkType": prefixes.render(&task.link_type),
        "hasRule": task.rule.is_some(),
        "progress": task.run.as_ref().map(|r| r.progress.snapshot()),
    })
}

fn not_found(id: &str) -> ApiError {
    ApiError::not_found("task", id)
}

pub async fn create(
    State(state): State<AppState>,
    Json(body): Json<CreateTask>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let source = find_source(&state, &body.source_id)?;
    let target = find_source(&state, &body.target_id)?;
    let mut inner = state.write();
    let mut task = Task {
        id: String::new(),
        source: source.id().clone(),
        target: target.id().clone(),
        link_type: vocab::owl_same_as(),
        rule: None,
        run: None,
    };
    if let Some(lt) = &body.link_type {
        task.link_type = inner
            .task_prefixes(&task)
            .resolve(lt)
            .map_err(|e| ApiError::bad_request(format!("linkType: {e}")))?;
    }
    task.id = inner.new_task_id();
    let out = task_json(&inner, &task);
    inner.tasks.insert(task.id.clone(), task);
    Ok((StatusCode::CREATED, Json(out)))
}

pub async fn list(State(state): State<AppState>) -> Json<Value> {
    let inner = state.read();
    let tasks: Vec<Value> = inner.tasks.values().map(|t| task_json(&inner, t)).collect();
    Json(json!({ "tasks": tasks }))
}

pub async fn show(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let inner = state.read();
    let task = inner.tasks.get(&id).ok_or_else(|| not_found(&id))?;
    Ok(Json(task_json(&inner, task)))
}

pub async fn get_rule(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let inner = state.read();
    let task = inner.tasks.get(&id).ok_or_else(|| not_found(&id))?;
    let rule = task
        .rule
        .as_ref()
        .ok_or_else(|| ApiError::not_found("rule for task", &id))?;
    Ok(Json(rule_payload(rule, &inner.task_prefixes(task))))
}

/// Parses and validates a rule against both sources' paths. The rule is
/// stored only when validation reports no errors.
pub async fn put_rule(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: String,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let (prefixes, source, target, task_link_type) = {
        let inner = state.read();
        let task = inner.tasks.get(&id).ok_or_else(|| not_found(&id))?;
        (
            inner.task_prefixes(task),
            task.source.clone(),
            task.target.clone(),
            task.link_type.clone(),
        )
    };
    let mut rule = parse_rule_payload(&body, &prefixes)?;
    let explicit_link_type = serde_json::from_str::<Value>(&body)
        .ok()
        .is_some_and(|v| v.get("linkType").is_some());
    if !explicit_link_type {
        rule.link_type = task_link_type;
    }

    let depth = rule
        .comparisons()
        .iter()
        .map(|c| c.source_path.len().max(c.target_path.len()))
        .max()
        .unwrap_or(0)
        .clamp(2, MAX_PATH_DEPTH);
    let source = find_source(&state, source.as_str())?;
    let target = find_source(&state, target.as_str())?;
    let rule_for_check = rule.clone();
    let issues = tokio::task::spawn_blocking(move || -> Result<_, ApiError> {
        let sp = enumerate_property_paths(&source, depth)?;
        let tp = enumerate_property_paths(&target, depth)?;
        Ok(validate_rule(&rule_for_check, &sp, &tp))
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "INTERNAL", e.to_string()))??;

    let (errors, warnings): (Vec<_>, Vec<_>) = issues.into_iter().partition(|i| i.is_error());
    let body = json!({ "errors": errors, "warnings": warnings });
    if !errors.is_empty() {
        return Ok((StatusCode::UNPROCESSABLE_ENTITY, Json(body)));
    }
    let mut inner = state.write();
    let task = inner.tasks.get_mut(&id).ok_or_else(|| not_found(&id))?;
    task.rule = Some(rule);
    Ok((StatusCode::OK, Json(body)))
}

#[derive(Deserialize, Default)]
pub struct RunBody {
    blocking: Option<bool>,
}

/// Starts link generation in the background. Poll the progress endpoint.
pub async fn run(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Option<Json<RunBody>>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let options = MatchOptions {
        blocking: body.and_then(|Json(b)| b.blocking).unwrap_or(true),
    };
    let (rule, source, target, tracker) = {
        let mut inner = state.write();
        let task = inner.tasks.get(&id).ok_or_else(|| not_found(&id))?;
        let rule = task.rule.clone().ok_or_else(|| {
            ApiError::new(
                StatusCode::PRECONDITION_FAILED,
                "NO_RULE",
                format!("task {id} has no linkage rule"),
            )
        })?;
        if task.run.as_ref().is_some_and(|r| r.active) {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "RUN_ACTIVE",
                format!("task {id} is already running"),
            ));
        }
        let (source, target) = (task.source.clone(), task.target.clone());
        let source = inner
            .registry
            .get(&source)
            .ok_or_else(|| ApiError::not_found("dataset", source.as_str()))?;
        let target = inner
            .registry
            .get(&target)
            .ok_or_else(|| ApiError::not_found("dataset", target.as_str()))?;
        let tracker = Arc::new(ProgressTracker::new());
        let task = inner.tasks.get_mut(&id).expect("checked above");
        task.run = Some(Run {
            progress: tracker.clone(),
            links: None,
            active: true,
        });
        (rule, source, target, tracker)
    };

    let worker_state = state.clone();
    let task_id = id.clone();
    tokio::task::spawn_blocking(move || {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            generate_links(&task_id, &rule, &source, &target, options, &tracker)
        }));
        let mut inner = worker_state.write();
        let Some(run) = inner.tasks.get_mut(&task_id).and_then(|t| t.run.as_mut()) else {
            return;
        };
        if !Arc::ptr_eq(&run.progress, &tracker) {
            return;
        }
        run.active = false;
        match outcome {
            Ok(links) => {
                run.links = Some(links);
                tracker.finish();
            }
            Err(_) => tracker.fail(),
        }
    });

    let url = format!("/api/tasks/{id}/progress");
    Ok((StatusCode::ACCEPTED, Json(json!({ "progressUrl": url }))))
}

pub async fn progress(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Progress>, ApiError> {
    let inner = state.read();
    let task = inner.tasks.get(&id).ok_or_else(|| not_found(&id))?;
    Ok(Json(task.run.as_ref().map_or(
        Progress {
            state: RunState::Idle,
            pairs_evaluated: 0,
            total_pairs: 0,
            links_found: 0,
        },
        |r| r.progress.snapshot(),
    )))
}

fn no_links(id: &str) -> ApiError {
    ApiError::new(
        StatusCode::CONFLICT,
        "NO_COMPLETED_RUN",
        format!("task {id} has no completed run"),
    )
}

#[derive(Deserialize)]
pub struct Page {
    offset: Option<usize>,
    limit: Option<usize>,
}

/// One page of links, each with per-comparison scores for review.
pub async fn links(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(page): Query<Page>,
) -> Result<Json<Value>, ApiError> {
    let inner = state.read();
    let task = inner.tasks.get(&id).ok_or_else(|| not_found(&id))?;
    let links = task
        .run
        .as_ref()
        .and_then(|r| r.links.as_ref())
        .ok_or_else(|| no_links(&id))?;
    let source = inner.registry.get(&task.source);
    let target = inner.registry.get(&task.target);
    let rule: Option<&LinkageRule> = task.rule.as_ref();
    let prefixes = inner.task_prefixes(task);
    let offset = page.offset.unwrap_or(0);
    let limit = page.limit.unwrap_or(100);
    let items: Vec<Value> = links
        .links()
        .iter()
        .enumerate()
        .skip(offset)
        .take(limit)
        .map(|(index, l)| {
            let details: Vec<Value> = match (rule, &source, &target) {
                (Some(rule), Some(s), Some(t)) => {
                    let (sr, tr) = (Term::Iri(l.source.clone()), Term::Iri(l.target.clone()));
                    rule.comparisons()
                        .iter()
                        .map(|c| {
                            let d = evaluate_comparison(c, s.graph(), &sr, t.graph(), &tr);
                            json!({
                                "id": c.id,
                                "sourcePath": c.source_path.render(&prefixes),
                                "targetPath": c.target_path.render(&prefixes),
                                "accept": d.accept,
                                "confidence": d.confidence,
                            })
                        })
                        .collect()
                }
                _ => Vec::new(),
            };
            json!({
                "index": index,
                "source": l.source.as_str(),
                "predicate": l.predicate.as_str(),
                "target": l.target.as_str(),
                "confidence": l.confidence,
                "verdict": l.verdict,
                "details": details,
            })
        })
        .collect();
    Ok(Json(json!({ "total": links.len(), "offset": offset, "links": items })))
}

#[derive(Deserialize)]
pub struct VerdictBody {
    verdict: String,
}

pub async fn verdict(
    State(state): State<AppState>,
    Path((id, n)): Path<(String, usize)>,
    Json(body): Json<VerdictBody>,
) -> Result<Json<Value>, ApiError> {
    let verdict: Verdict = body
        .verdict
        .parse()
        .map_err(|_| ApiError::bad_request(format!("unknown verdict {:?}", body.verdict)))?;
    let mut inner = state.write();
    let task = inner.tasks.get_mut(&id).ok_or_else(|| not_found(&id))?;
    let links = task
        .run
        .as_mut()
        .and_then(|r| r.links.as_mut())
        .ok_or_else(|| no_links(&id))?;
    let link = links
        .get_mut(n)
        .ok_or_else(|| ApiError::not_found("link", &n.to_string()))?;
    link.verdict = verdict;
    Ok(Json(json!({ "index": n, "verdict": verdict })))
}

#[derive(Deserialize)]
pub struct ExportParams {
    verdicts: Option<String>,
}

/// N-Triples of the links with the requested verdicts, accepted and
/// unreviewed by default.
pub async fn export(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ExportParams>,
) -> Result<impl IntoResponse, ApiError> {
    let verdicts: Vec<Verdict> = match q.verdicts.as_deref().filter(|v| !v.is_empty()) {
        Some(list) => list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| ApiError::bad_request(format!("unknown verdict {v:?}")))
            })
            .collect::<Result<_, _>>()?,
        None => Verdict::EXPORTED.to_vec(),
    };
    let inner = state.read();
    let task = inner.tasks.get(&id).ok_or_else(|| not_found(&id))?;
    let links = task
        .run
        .as_ref()
        .and_then(|r| r.links.as_ref())
        .ok_or_else(|| no_links(&id))?;
    Ok((
        [(header::CONTENT_TYPE, "application/n-triples")],
        links.to_ntriples(&verdicts),
    ))
}

pub(crate) fn task_sources(state: &AppState, id: &str) -> Result<(SourceId, SourceId), ApiError> {
    let inner = state.read();
    let task = inner.tasks.get(id).ok_or_else(|| not_found(id))?;
    Ok((task.source.clone(), task.target.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lodlink_core::fixtures;
    use lodlink_core::io::{parse_rdfxml, parse_turtle, FormatTag};
    use lodlink_core::rule::parse_rule_spec;

    #[tokio::test]
    async fn second_run_conflicts_while_active() {
        let state = AppState::new();
        let id = {
            let mut inner = state.write();
            let (spec, rule) = parse_rule_spec(fixtures::SCENARIO_JSON).unwrap();
            let s = inner
                .registry
                .register(
                    parse_turtle(fixtures::INITIAL_TTL).unwrap(),
                    "initial",
                    FormatTag::Turtle,
                    spec.source.entity_type,
                )
                .unwrap();
            let t = inner
                .registry
                .register(
                    parse_rdfxml(fixtures::DBLP_RDF).unwrap(),
                    "dblp",
                    FormatTag::RdfXml,
                    spec.target.entity_type,
                )
                .unwrap();
            let id = inner.new_task_id();
            inner.tasks.insert(
                id.clone(),
                Task {
                    id: id.clone(),
                    source: s.id().clone(),
                    target: t.id().clone(),
                    link_type: rule.link_type.clone(),
                    rule: Some(rule),
                    run: Some(Run {
                        progress: Arc::new(ProgressTracker::new()),
                        links: None,
                        active: true,
                    }),
                },
            );
            id
        };
        let err = run(State(state.clone()), Path(id.clone()), None).await.unwrap_err();
        assert_eq!(err.status, StatusCode::CONFLICT);

        state.write().tasks.get_mut(&id).unwrap().run.as_mut().unwrap().active = false;
        let (status, _) = run(State(state), Path(id), None).await.unwrap();
        assert_eq!(status, StatusCode::ACCEPTED);
    }
}
