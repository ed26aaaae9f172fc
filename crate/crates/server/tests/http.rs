mod common;

use axum::http::StatusCode;
use common::{demo, Client, FRAIL_ELDERLY};
use hibou_core::portal::PortalOptions;
use serde_json::{json, Value};

fn error(body: &str) -> Value {
    serde_json::from_str(body).expect("error body is JSON")
}

#[tokio::test]
async fn load_and_inspect_an_ontology() {
    let c = Client::new(PortalOptions::default());
    let summary = c.load("onc", FRAIL_ELDERLY).await;
    assert_eq!(summary["name"], "onc");
    assert_eq!(summary["classes"], 6);
    assert_eq!(summary["axioms"], 6);
    assert_eq!(summary["individuals"], 1);

    let (status, text) = c.get("/ontologies/onc/taxonomy").await;
    assert_eq!(status, StatusCode::OK);
    assert!(text.lines().any(|l| l == "GentleChemo: Chemotherapy"), "{text}");

    let (status, body) = c.post("/ontologies/onc/query", "Type(?x, ElderlyPatient)").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, r#"[{"x":"i"}]"#);

    let (status, body) = c.post("/ontologies/onc/query", "SubClassOf(?c, Chemotherapy)").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, r#"[{"c":"Chemotherapy"},{"c":"GentleChemo"}]"#);
}

#[tokio::test]
async fn load_errors_carry_category_and_location() {
    let c = Client::new(PortalOptions::default());
    let (status, body) = c
        .post("/ontologies", json!({ "name": "bad", "hfs": "Class(A)\nSubClassOf(A B)" }).to_string())
        .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let e = error(&body);
    assert_eq!(e["category"], "undeclared_name");
    assert_eq!(e["location"]["line"], 2);

    let (status, body) = c.post("/ontologies", "not json").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error(&body)["category"], "invalid_request");

    let (status, body) = c.get("/ontologies/nope/taxonomy").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(error(&body)["category"], "unknown_ontology");

    c.load("onc", FRAIL_ELDERLY).await;
    let (status, body) = c.post("/ontologies/onc/query", "Type(?x, Nope)").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error(&body)["category"], "unknown_class");
    let (status, body) = c.post("/ontologies/onc/query", "Type(?x").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error(&body)["category"], "syntax");
}

#[tokio::test]
async fn session_lifecycle() {
    let c = Client::new(PortalOptions::default());
    c.load("onc", FRAIL_ELDERLY).await;
    let (status, body) = c.post("/sessions", json!({ "ontology": "onc" }).to_string()).await;
    assert_eq!(status, StatusCode::CREATED);
    let info: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(info["ontology"], "onc");
    assert_eq!(info["class"], "Patient");
    let id = info["id"].as_str().unwrap();

    let (status, xml) = c.get(&format!("/sessions/{id}/form")).await;
    assert_eq!(status, StatusCode::OK);
    assert!(xml.starts_with(&format!("<form instance=\"{}\">\n", info["instance"].as_str().unwrap())));
    assert!(xml.contains("<recommendations/>"));

    let (status, body) = c.get(&format!("/sessions/{id}/recommendations")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, "[]");

    let (status, body) = c.get("/sessions/missing/form").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(error(&body)["category"], "unknown_session");

    let (status, body) = c.post("/sessions", json!({ "ontology": "zzz" }).to_string()).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(error(&body)["category"], "unknown_ontology");
}

#[tokio::test]
async fn values_drive_the_form() {
    let c = Client::new(PortalOptions::default());
    c.load("oncology", &demo("oncology.hfs")).await;
    let id = c.session("oncology", Some("BreastCancerPatient")).await;
    let (_, before) = c.get(&format!("/sessions/{id}/form")).await;
    assert!(!before.contains("property=\"frailtyScore\""));

    let (status, xml) = c.set(&id, "age", json!(78)).await;
    assert_eq!(status, StatusCode::OK, "{xml}");
    assert!(xml.contains("property=\"frailtyScore\""));
    assert!(xml.contains("<value>78</value>"));

    let (status, body) = c.set(&id, "age", json!(500)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error(&body)["category"], "range_violation");
    let (_, after) = c.get(&format!("/sessions/{id}/form")).await;
    assert_eq!(after, xml);

    let (status, body) = c.set(&id, "estrogenReceptor", json!("maybe")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error(&body)["category"], "range_violation");

    let (status, body) = c.set(&id, "nosuch", json!(1)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error(&body)["category"], "unknown_property");

    let other = c.session("oncology", None).await;
    let (status, body) = c.set(&other, "tumorSize", json!(10)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error(&body)["category"], "property_not_visible");

    let (status, body) = c.set(&id, "age", json!([1])).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(error(&body)["category"], "invalid_request");

    let (status, _) = c.set(&id, "estrogenReceptor", json!("positive")).await;
    assert_eq!(status, StatusCode::OK);
    let (_, rec) = c.get(&format!("/sessions/{id}/recommendations")).await;
    assert!(rec.contains("AromataseInhibitor"), "{rec}");
}

#[tokio::test]
async fn session_limit_is_429() {
    let c = Client::new(PortalOptions {
        session_limit: 1,
        ..PortalOptions::default()
    });
    c.load("onc", FRAIL_ELDERLY).await;
    c.session("onc", None).await;
    let (status, body) = c.post("/sessions", json!({ "ontology": "onc" }).to_string()).await;
    assert_eq!(status, StatusCode::TOO_MANY_REQUESTS);
    assert_eq!(error(&body)["category"], "session_limit");
}

#[tokio::test]
async fn ontology_directory_is_named_by_stem() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("frail.hfs"), FRAIL_ELDERLY).unwrap();
    std::fs::write(dir.path().join("clinic.uicfg.hfs"), demo("clinic.uicfg.hfs")).unwrap();
    let c = Client::new(PortalOptions::default());
    let names = hibou_server::http::load_ontology_dir(&c.portal, dir.path()).unwrap();
    assert_eq!(names, ["frail"]);
    let (status, _) = c.get("/ontologies/frail/taxonomy").await;
    assert_eq!(status, StatusCode::OK);
}
