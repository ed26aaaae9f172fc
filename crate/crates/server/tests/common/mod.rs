#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use hibou_core::portal::{Portal, PortalOptions};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

pub const FRAIL_ELDERLY: &str = "\
Ontology(onc)
Class(Patient) Class(Treatment) Class(Chemotherapy) Class(GentleChemo)
Class(ElderlyPatient) Class(FrailElderlyPatient) ObjectProperty(reco)
SubClassOf(Chemotherapy Treatment)
SubClassOf(GentleChemo Chemotherapy)
SubClassOf(ElderlyPatient Patient)
SubClassOf(FrailElderlyPatient ElderlyPatient)
SubClassOf(ElderlyPatient ObjectSomeValuesFrom(reco Chemotherapy))
SubClassOf(FrailElderlyPatient ObjectSomeValuesFrom(reco GentleChemo))
ClassAssertion(FrailElderlyPatient i)
";

pub fn demo(file: &str) -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../demo/");
    std::fs::read_to_string(format!("{path}{file}")).expect("demo file")
}

/// In-process server over a fresh portal.
pub struct Client {
    pub portal: Arc<Portal>,
    router: axum::Router,
}

impl Client {
    pub fn new(options: PortalOptions) -> Client {
        let portal = Arc::new(Portal::new(options));
        Client {
            router: hibou_server::router(portal.clone()),
            portal,
        }
    }

    pub async fn send(&self, method: Method, uri: &str, body: impl Into<String>) -> (StatusCode, String) {
        let req = Request::builder()
            .method(method)
            .uri(uri)
            .body(Body::from(body.into()))
            .expect("request");
        let resp = self.router.clone().oneshot(req).await.expect("infallible");
        let status = resp.status();
        let bytes = resp.into_body().collect().await.expect("body").to_bytes();
        (status, String::from_utf8(bytes.to_vec()).expect("utf-8"))
    }

    pub async fn get(&self, uri: &str) -> (StatusCode, String) {
        self.send(Method::GET, uri, "").await
    }

    pub async fn post(&self, uri: &str, body: impl Into<String>) -> (StatusCode, String) {
        self.send(Method::POST, uri, body).await
    }

    pub async fn load(&self, name: &str, hfs: &str) -> Value {
        let (status, body) = self.post("/ontologies", json!({ "name": name, "hfs": hfs }).to_string()).await;
        assert_eq!(status, StatusCode::OK, "{body}");
        serde_json::from_str(&body).expect("json")
    }

    pub async fn session(&self, ontology: &str, initial_class: Option<&str>) -> String {
        let req = json!({ "ontology": ontology, "initial_class": initial_class });
        let (status, body) = self.post("/sessions", req.to_string()).await;
        assert_eq!(status, StatusCode::CREATED, "{body}");
        let v: Value = serde_json::from_str(&body).expect("json");
        v["id"].as_str().expect("id").to_string()
    }

    pub async fn set(&self, id: &str, property: &str, value: Value) -> (StatusCode, String) {
        self.post(
            &format!("/sessions/{id}/values"),
            json!({ "property": property, "value": value }).to_string(),
        )
        .await
    }
}

pub fn runtime() -> tokio::runtime::Runtime {
    tokio::runtime::Builder::new_current_thread().enable_all().build().expect("runtime")
}
