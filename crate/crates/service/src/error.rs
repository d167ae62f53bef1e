use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use graphgames_core::Error;
use serde::{Deserialize, Serialize};

/// JSON error body: `{"error": {"code": ..., "message": ...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self { status, body: ErrorBody { code: code.into(), message: message.into() } }
    }

    pub fn unknown_session(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "unknown_session", format!("no live session {id:?}"))
    }

    pub fn nothing_to_undo() -> Self {
        Self::new(StatusCode::CONFLICT, "nothing_to_undo", "no action to undo")
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(msg) => Self::new(StatusCode::BAD_REQUEST, "invalid_config", msg),
            Error::EpisodeFinished => Self::new(StatusCode::CONFLICT, "episode_finished", e.to_string()),
            Error::SelfLoopNotAllowed { .. } | Error::ActionOutOfRange { .. } => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "illegal_action", e.to_string())
            }
            Error::Graph6(_) => Self::new(StatusCode::BAD_REQUEST, "bad_graph6", e.to_string()),
            other => Self::new(StatusCode::BAD_REQUEST, "invalid_request", other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.body }))).into_response()
    }
}
