use axum::extract::{Multipart, State};
use axum::Json;
use serde_json::{json, Value};

use lodlink_core::dataset::SourceId;
use lodlink_core::enrich::{inject_links, merge_metadata, MergePolicy};
use lodlink_core::io::{detect_format, parse, serialize_turtle};
use lodlink_core::matcher::LinkSet;

use crate::error::ApiError;
use crate::state::AppState;
use crate::tasks::task_sources;

#[derive(Default)]
struct Form {
    graph: Option<(String, String)>,
    links: Option<String>,
    task_id: Option<String>,
    targets: Vec<String>,
    policy: Option<String>,
    mode: Option<String>,
}

async fn read_form(mut multipart: Multipart) -> Result<Form, ApiError> {
    let bad = |e: axum::extract::multipart::MultipartError| ApiError::bad_request(e.to_string());
    let mut form = Form::default();
    while let Some(field) = multipart.next_field().await.map_err(bad)? {
        let name = field.name().unwrap_or_default().to_string();
        let filename = field.file_name().unwrap_or_default().to_string();
        let text = field.text().await.map_err(bad)?;
        match name.as_str() {
            "graph" => form.graph = Some((filename, text)),
            "links" => form.links = Some(text),
            "taskId" => form.task_id = Some(text.trim().to_string()),
            "targets" => form.targets.extend(
                text.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string),
            ),
            "policy" => form.policy = Some(text),
            "mode" => form.mode = Some(text.trim().to_string()),
            other => return Err(ApiError::bad_request(format!("unexpected form field {other:?}"))),
        }
    }
    Ok(form)
}

/// Multipart fields: `graph` (file), `links` (N-Triples) or `taskId`,
/// `targets` (source ids), `policy` (JSON), `mode` (`merge` or `links`).
pub async fn enrich(State(state): State<AppState>, multipart: Multipart) -> Result<Json<Value>, ApiError> {
    let form = read_form(multipart).await?;
    let (filename, text) = form.graph.ok_or_else(|| ApiError::bad_request("missing graph field"))?;
    let format = detect_format(&filename, text.as_bytes()).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let graph = parse(&text, format)?;

    let mut target_ids = form.targets;
    let links = match (&form.links, &form.task_id) {
        (Some(nt), _) => LinkSet::from_ntriples(form.task_id.clone().unwrap_or_else(|| "links".into()), nt)?,
        (None, Some(id)) => {
            if target_ids.is_empty() {
                target_ids.push(task_sources(&state, id)?.1.as_str().to_string());
            }
            let inner = state.read();
            inner
                .tasks
                .get(id)
                .and_then(|t| t.run.as_ref())
                .and_then(|r| r.links.clone())
                .ok_or_else(|| ApiError::bad_request(format!("task {id} has no completed run")))?
        }
        (None, None) => return Err(ApiError::bad_request("either links or taskId is required")),
    };

    let (out, report) = match form.mode.as_deref().unwrap_or("merge") {
        "links" => inject_links(&graph, &links),
        "merge" => {
            let policy = match &form.policy {
                Some(p) => MergePolicy::from_json(p)?,
                None => MergePolicy::default(),
            };
            let targets = {
                let inner = state.read();
                target_ids
                    .iter()
                    .map(|id| {
                        inner
                            .registry
                            .get(&SourceId::new(id.as_str()))
                            .ok_or_else(|| ApiError::not_found("dataset", id))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            };
            let refs: Vec<_> = targets.iter().map(|t| t.as_ref()).collect();
            merge_metadata(&graph, &links, &refs, &policy)?
        }
        other => return Err(ApiError::bad_request(format!("unknown mode {other:?}"))),
    };
    Ok(Json(json!({
        "turtle": serialize_turtle(&out),
        "report": report.to_json(),
        "provenance": report.provenance(),
    })))
}
