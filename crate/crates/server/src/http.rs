//! HTTP routes over a shared [`Portal`].
//!
//! Control endpoints speak JSON; the form document is XML. Errors are JSON
//! objects `{category, message, location?}`.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use hibou_core::portal::Portal;
use hibou_core::Error;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

const XML: &str = "application/xml; charset=utf-8";
const JSON: &str = "application/json";
const TEXT: &str = "text/plain; charset=utf-8";

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnknownOntology(_) | Error::UnknownSession(_) => StatusCode::NOT_FOUND,
            Error::SessionLimit(_) => StatusCode::TOO_MANY_REQUESTS,
            e if e.is_client_fault() => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let mut body = json!({ "category": e.category(), "message": e.to_string() });
        if let Some(loc) = e.location() {
            body["location"] = json!({ "line": loc.line, "column": loc.column });
        }
        ApiError { status, body }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, [(header::CONTENT_TYPE, JSON)], self.body.to_string()).into_response()
    }
}

fn bad_request(message: String) -> ApiError {
    ApiError {
        status: StatusCode::BAD_REQUEST,
        body: json!({ "category": "invalid_request", "message": message }),
    }
}

fn body<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| bad_request(format!("invalid JSON body: {e}")))
}

fn utf8(bytes: &[u8]) -> Result<&str, ApiError> {
    std::str::from_utf8(bytes).map_err(|_| bad_request("body is not UTF-8".into()))
}

type Shared = State<Arc<Portal>>;
type ApiResult = Result<Response, ApiError>;

fn respond(status: StatusCode, content_type: &'static str, body: String) -> ApiResult {
    Ok((status, [(header::CONTENT_TYPE, content_type)], body).into_response())
}

#[derive(Deserialize)]
struct LoadRequest {
    name: Option<String>,
    hfs: String,
}

async fn load_ontology(State(p): Shared, bytes: Bytes) -> ApiResult {
    let req: LoadRequest = body(&bytes)?;
    let summary = p.load_ontology(req.name.as_deref(), &req.hfs)?;
    respond(StatusCode::OK, JSON, serde_json::to_string(&summary).expect("summary serializes"))
}

async fn taxonomy(State(p): Shared, UrlPath(name): UrlPath<String>) -> ApiResult {
    respond(StatusCode::OK, TEXT, p.taxonomy_text(&name)?)
}

async fn query(State(p): Shared, UrlPath(name): UrlPath<String>, bytes: Bytes) -> ApiResult {
    respond(StatusCode::OK, JSON, p.query(&name, utf8(&bytes)?)?)
}

#[derive(Deserialize)]
struct SessionRequest {
    ontology: String,
    initial_class: Option<String>,
}

async fn create_session(State(p): Shared, bytes: Bytes) -> ApiResult {
    let req: SessionRequest = body(&bytes)?;
    let info = p.create_session(&req.ontology, req.initial_class.as_deref())?;
    respond(StatusCode::CREATED, JSON, serde_json::to_string(&info).expect("info serializes"))
}

async fn form(State(p): Shared, UrlPath(id): UrlPath<String>) -> ApiResult {
    respond(StatusCode::OK, XML, p.form_xml(&id)?)
}

#[derive(Deserialize)]
struct ValueRequest {
    property: String,
    value: Value,
}

/// JSON scalars are passed on as their textual form; the portal coerces
/// them against the property's range.
fn value_text(v: &Value) -> Result<String, ApiError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(bad_request("value must be a string, number or boolean".into())),
    }
}

async fn set_value(State(p): Shared, UrlPath(id): UrlPath<String>, bytes: Bytes) -> ApiResult {
    let req: ValueRequest = body(&bytes)?;
    let value = value_text(&req.value)?;
    respond(StatusCode::OK, XML, p.set_value(&id, &req.property, &value)?)
}

async fn recommendations(State(p): Shared, UrlPath(id): UrlPath<String>) -> ApiResult {
    respond(StatusCode::OK, JSON, p.recommendations_json(&id)?)
}

pub fn router(portal: Arc<Portal>) -> Router {
    Router::new()
        .route("/ontologies", post(load_ontology))
        .route("/ontologies/{name}/taxonomy", get(taxonomy))
        .route("/ontologies/{name}/query", post(query))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/form", get(form))
        .route("/sessions/{id}/values", post(set_value))
        .route("/sessions/{id}/recommendations", get(recommendations))
        .with_state(portal)
}

/// Loads every `.hfs` file in `dir`, named by file stem, in sorted order.
pub fn load_ontology_dir(portal: &Portal, dir: &Path) -> Result<Vec<String>, String> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "hfs") && !p.to_string_lossy().ends_with(".uicfg.hfs"))
        .collect();
    paths.sort();
    let mut names = Vec::new();
    for p in paths {
        let name = p.file_stem().expect("has extension").to_string_lossy().into_owned();
        let text = fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
        portal
            .load_ontology(Some(&name), &text)
            .map_err(|e| format!("{}:{}", p.display(), describe(&e)))?;
        names.push(name);
    }
    Ok(names)
}

/// `line:column: category: message`, or `category: message` without a location.
pub fn describe(e: &Error) -> String {
    let msg = match e {
        Error::Parse(p) => p.kind.to_string(),
        other => other.to_string(),
    };
    match e.location() {
        Some(l) => format!("{}:{}: {}: {msg}", l.line, l.column, e.category()),
        None => format!("{}: {msg}", e.category()),
    }
}
