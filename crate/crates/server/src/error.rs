use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::{json, Value};

use lodlink_core::dataset::DatasetError;
use lodlink_core::enrich::EnrichError;
use lodlink_core::io::ParseError;
use lodlink_core::rule::SpecError;

/// Error body: `{code, message, details?}`.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub details: Option<Value>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            code,
            message: message.into(),
            details: None,
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "NOT_FOUND", format!("no {what} with id {id:?}"))
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "BAD_REQUEST", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut body = json!({ "code": self.code, "message": self.message });
        if let Some(details) = self.details {
            body["details"] = details;
        }
        (self.status, Json(body)).into_response()
    }
}

impl From<ParseError> for ApiError {
    fn from(e: ParseError) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "PARSE_ERROR", e.to_string()).with_details(json!({
            "line": e.line,
            "column": e.column,
            "message": e.message,
        }))
    }
}

impl From<SpecError> for ApiError {
    fn from(e: SpecError) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "SPEC_ERROR", e.message.clone())
            .with_details(json!({ "location": e.location }))
    }
}

impl From<DatasetError> for ApiError {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::DuplicateLabel(_) => ApiError::new(StatusCode::CONFLICT, "DUPLICATE_LABEL", e.to_string()),
            DatasetError::InvalidDepth(_) => ApiError::bad_request(e.to_string()),
        }
    }
}

impl From<EnrichError> for ApiError {
    fn from(e: EnrichError) -> Self {
        let code = match e {
            EnrichError::UnresolvableLinkTarget(_) => "UNRESOLVABLE_LINK_TARGET",
            EnrichError::PolicyConflict(_) | EnrichError::InvalidPolicy(_) => "INVALID_POLICY",
        };
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, code, e.to_string())
    }
}
