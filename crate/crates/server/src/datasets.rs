use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::Json;
use serde::Deserialize;
use serde_json::{json, Value};

use lodlink_core::dataset::{enumerate_property_paths, lint_source, suggest_property_pairs, DataSource, SourceId};
use lodlink_core::io::{detect_format, parse, FormatTag};
use lodlink_core::rdf::Iri;

use crate::error::ApiError;
use crate::state::{source_summary, AppState};

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UploadParams {
    label: String,
    format: Option<String>,
    entity_type: Option<String>,
    filename: Option<String>,
}

pub async fn upload(
    State(state): State<AppState>,
    Query(params): Query<UploadParams>,
    body: Bytes,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let text = std::str::from_utf8(&body).map_err(|e| {
        ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "PARSE_ERROR",
            format!("body is not UTF-8: {e}"),
        )
    })?;
    if text.trim().is_empty() {
        return Err(
            ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "PARSE_ERROR", "empty upload")
                .with_details(json!({ "line": 1, "column": 1, "message": "empty upload" })),
        );
    }
    let format = match &params.format {
        Some(f) => f
            .parse::<FormatTag>()
            .map_err(|e| ApiError::bad_request(e.to_string()))?,
        None => detect_format(params.filename.as_deref().unwrap_or(""), &body)
            .map_err(|e| ApiError::bad_request(e.to_string()))?,
    };
    let graph = parse(text, format)?;
    let entity_type = params
        .entity_type
        .as_deref()
        .map(|t| graph.prefixes().resolve(t))
        .transpose()
        .map_err(|e| ApiError::bad_request(format!("entityType: {e}")))?;
    let source = state
        .write()
        .registry
        .register(graph, &params.label, format, entity_type)?;
    Ok((StatusCode::CREATED, Json(source_summary(&source))))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DepthParams {
    max_depth: Option<usize>,
}

/// Sources with their entity types and paths, plus the tasks over them.
pub async fn listing(State(state): State<AppState>, Query(q): Query<DepthParams>) -> Result<Json<Value>, ApiError> {
    let inner = state.read();
    let sources = inner.registry.tree(q.max_depth.unwrap_or(2))?;
    let tasks: Vec<Value> = inner
        .tasks
        .values()
        .map(|t| json!({ "id": t.id, "sourceId": t.source, "targetId": t.target }))
        .collect();
    Ok(Json(json!({ "sources": sources, "tasks": tasks })))
}

pub(crate) fn find_source(state: &AppState, id: &str) -> Result<Arc<DataSource>, ApiError> {
    state
        .read()
        .registry
        .get(&SourceId::new(id))
        .ok_or_else(|| ApiError::not_found("dataset", id))
}

pub async fn paths(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<DepthParams>,
) -> Result<Json<Value>, ApiError> {
    let source = find_source(&state, &id)?;
    let prefixes = source.graph().prefixes();
    let profiles = enumerate_property_paths(&source, q.max_depth.unwrap_or(3))?;
    let paths: Vec<Value> = profiles
        .iter()
        .map(|p| {
            json!({
                "path": p.path.render(prefixes),
                "steps": p.path.steps().iter().map(Iri::as_str).collect::<Vec<_>>(),
                "frequency": p.frequency,
                "sampleValues": p.sample_values,
                "terminal": p.terminal,
            })
        })
        .collect();
    Ok(Json(json!({ "paths": paths })))
}

pub async fn lint(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let source = find_source(&state, &id)?;
    Ok(Json(json!({ "warnings": lint_source(&source) })))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuggestParams {
    source: String,
    target: String,
    max_depth: Option<usize>,
}

pub async fn suggest(State(state): State<AppState>, Query(q): Query<SuggestParams>) -> Result<Json<Value>, ApiError> {
    let a = find_source(&state, &q.source)?;
    let b = find_source(&state, &q.target)?;
    let pairs = suggest_property_pairs(&a, &b, q.max_depth.unwrap_or(2))?;
    let pairs: Vec<Value> = pairs
        .iter()
        .map(|p| {
            json!({
                "sourcePath": p.source_path.render(a.graph().prefixes()),
                "targetPath": p.target_path.render(b.graph().prefixes()),
                "score": p.score,
            })
        })
        .collect();
    Ok(Json(json!({ "pairs": pairs })))
}
