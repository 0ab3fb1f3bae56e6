//! JSON API over the link-discovery workflow: sources, tasks, rule
//! validation, runs with pollable progress, review, export and enrichment.

mod datasets;
mod enrich;
mod error;
mod state;
mod tasks;

use std::net::SocketAddr;
use std::path::Path;

use axum::extract::DefaultBodyLimit;
use axum::routing::{get, post, put};
use axum::Router;

pub use error::ApiError;
pub use state::AppState;

/// Largest accepted upload.
pub const BODY_LIMIT: usize = 256 * 1024 * 1024;

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/datasets", post(datasets::upload).get(datasets::listing))
        .route("/datasets/{id}/paths", get(datasets::paths))
        .route("/datasets/{id}/lint", get(datasets::lint))
        .route("/suggest", get(datasets::suggest))
        .route("/tasks", post(tasks::create).get(tasks::list))
        .route("/tasks/{id}", get(tasks::show))
        .route("/tasks/{id}/rule", put(tasks::put_rule).get(tasks::get_rule))
        .route("/tasks/{id}/run", post(tasks::run))
        .route("/tasks/{id}/progress", get(tasks::progress))
        .route("/tasks/{id}/links", get(tasks::links))
        .route("/tasks/{id}/links/{n}/verdict", post(tasks::verdict))
        .route("/tasks/{id}/export", get(tasks::export))
        .route("/enrich", post(enrich::enrich));
    Router::new()
        .nest("/api", api)
        .layer(DefaultBodyLimit::max(BODY_LIMIT))
        .with_state(state)
}

/// Serves until interrupted, then snapshots to `data_dir` when given.
pub async fn serve(port: u16, data_dir: Option<&Path>) -> std::io::Result<()> {
    let state = match data_dir {
        Some(dir) => AppState::with_data_dir(dir)?,
        None => AppState::new(),
    };
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    if let Some(dir) = state.data_dir() {
        state.snapshot(dir)?;
        eprintln!("state saved to {}", dir.display());
    }
    Ok(())
}
