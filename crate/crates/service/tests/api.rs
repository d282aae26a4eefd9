use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use confik_service::{router, AppState, SessionDocument};

const SAMPLE: &str = "\
feature x
  feature y mandatory
    xor
      feature a
      feature b
  feature c
  feature d
";

const DEMO: &str = "\
feature root
  feature u
  feature v
  feature x
  feature y
constraint u | v
constraint x -> y
";

fn app(seed: u64) -> Router {
    router(Arc::new(AppState::new(Some(seed))), None)
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<String>) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn create(app: &Router, model: &str, name: &str) -> SessionDocument {
    let body = json!({"model": model, "name": name}).to_string();
    let (status, text) = call(app, Method::POST, "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{text}");
    serde_json::from_str(&text).unwrap()
}

async fn decide(app: &Router, id: &str, var: &str, value: bool) -> (StatusCode, String) {
    let body = json!({"var": var, "value": value}).to_string();
    call(app, Method::POST, &format!("/sessions/{id}/decisions"), Some(body)).await
}

fn status_of(doc: &SessionDocument, name: &str) -> String {
    let v = doc.variables.iter().find(|v| v.name == name).unwrap();
    serde_json::to_value(v.status).unwrap().as_str().unwrap().to_owned()
}

fn check_invariants(doc: &SessionDocument) {
    for v in &doc.variables {
        if status_of(doc, &v.name) != "unassigned" {
            assert!(!v.selectable_true && !v.selectable_false, "{} is assigned but selectable", v.name);
        } else {
            assert!(v.selectable_true && v.selectable_false, "{} is open but not selectable", v.name);
        }
    }
    let open = doc.variables.iter().any(|v| status_of(doc, &v.name) == "unassigned");
    assert_eq!(doc.complete, !open);
}

#[tokio::test]
async fn sample_walkthrough() {
    let app = app(1);
    let doc = create(&app, SAMPLE, "sample").await;
    check_invariants(&doc);
    assert_eq!(doc.model_name, "sample");
    assert_eq!(status_of(&doc, "x"), "inferred_true");
    assert_eq!(status_of(&doc, "y"), "inferred_true");
    for n in ["a", "b", "c", "d"] {
        assert_eq!(status_of(&doc, n), "unassigned");
    }
    let (status, text) = decide(&app, &doc.id, "a", true).await;
    assert_eq!(status, StatusCode::OK);
    let doc: SessionDocument = serde_json::from_str(&text).unwrap();
    check_invariants(&doc);
    assert_eq!(status_of(&doc, "a"), "user_true");
    assert_eq!(status_of(&doc, "b"), "inferred_false");
    decide(&app, &doc.id, "c", true).await;
    let (_, text) = decide(&app, &doc.id, "d", false).await;
    let doc: SessionDocument = serde_json::from_str(&text).unwrap();
    check_invariants(&doc);
    assert!(doc.complete);
    let (status, text) = call(&app, Method::GET, &format!("/sessions/{}", doc.id), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(serde_json::from_str::<SessionDocument>(&text).unwrap(), doc);
}

#[tokio::test]
async fn shopping_and_undo() {
    let app = app(2);
    let doc = create(&app, DEMO, "demo").await;
    let id = doc.id.clone();
    let (status, text) = call(&app, Method::POST, &format!("/sessions/{id}/shopping-principle"), None).await;
    assert_eq!(status, StatusCode::OK);
    let doc: SessionDocument = serde_json::from_str(&text).unwrap();
    check_invariants(&doc);
    assert_eq!(status_of(&doc, "x"), "auto_false");
    assert_eq!(status_of(&doc, "y"), "auto_false");
    let lit: Vec<&str> = doc.variables.iter().filter(|v| v.highlighted).map(|v| v.name.as_str()).collect();
    assert_eq!(lit, ["u", "v"]);
    // Twice is the same as once.
    let (_, again) = call(&app, Method::POST, &format!("/sessions/{id}/shopping-principle"), None).await;
    assert_eq!(again, text);

    let (_, text) = decide(&app, &id, "u", true).await;
    let doc: SessionDocument = serde_json::from_str(&text).unwrap();
    assert!(!doc.complete);
    let (_, text) = call(&app, Method::POST, &format!("/sessions/{id}/shopping-principle"), None).await;
    let doc: SessionDocument = serde_json::from_str(&text).unwrap();
    assert!(doc.complete);
    assert_eq!(status_of(&doc, "v"), "auto_false");

    // Undoing u drops every automatic decision made after it was relevant.
    let (status, text) = call(&app, Method::DELETE, &format!("/sessions/{id}/decisions/u"), None).await;
    assert_eq!(status, StatusCode::OK);
    let doc: SessionDocument = serde_json::from_str(&text).unwrap();
    check_invariants(&doc);
    for n in ["u", "v", "x", "y"] {
        assert_eq!(status_of(&doc, n), "unassigned", "{n}");
    }
}

#[tokio::test]
async fn blind_completion() {
    let app = app(3);
    let doc = create(&app, DEMO, "demo").await;
    let (status, text) = call(&app, Method::POST, &format!("/sessions/{}/complete", doc.id), None).await;
    assert_eq!(status, StatusCode::OK);
    let doc: SessionDocument = serde_json::from_str(&text).unwrap();
    check_invariants(&doc);
    assert!(doc.complete);
    // The smallest model in variable order: root first, then v rather than u.
    let on: Vec<&str> = doc
        .variables
        .iter()
        .filter(|v| status_of(&doc, &v.name).ends_with("true"))
        .map(|v| v.name.as_str())
        .collect();
    assert_eq!(on, ["root", "v"]);
}

#[tokio::test]
async fn error_statuses() {
    let app = app(4);
    let doc = create(&app, SAMPLE, "sample").await;
    let id = doc.id.clone();
    let code = |text: &str| serde_json::from_str::<Value>(text).unwrap()["error"].as_str().unwrap().to_owned();

    let (s, t) = call(&app, Method::POST, "/sessions", Some("{not json".into())).await;
    assert_eq!((s, code(&t).as_str()), (StatusCode::BAD_REQUEST, "malformed_body"));
    let (s, t) = call(&app, Method::POST, "/sessions", Some(json!({"model": "feature"}).to_string())).await;
    assert_eq!((s, code(&t).as_str()), (StatusCode::BAD_REQUEST, "invalid_model"));
    let unsat = "feature r\n  feature a mandatory\nconstraint !a\n";
    let (s, t) = call(&app, Method::POST, "/sessions", Some(json!({"model": unsat}).to_string())).await;
    assert_eq!((s, code(&t).as_str()), (StatusCode::UNPROCESSABLE_ENTITY, "unsat_model"));
    let (s, _) = call(&app, Method::POST, "/sessions", None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);

    let (s, t) = call(&app, Method::POST, &format!("/sessions/{id}/decisions"), Some("{\"var\":1}".into())).await;
    assert_eq!((s, code(&t).as_str()), (StatusCode::BAD_REQUEST, "malformed_body"));
    let (s, t) = decide(&app, &id, "zz", true).await;
    assert_eq!((s, code(&t).as_str()), (StatusCode::BAD_REQUEST, "unknown_var"));
    let (s, t) = decide(&app, &id, "x", false).await;
    assert_eq!((s, code(&t).as_str()), (StatusCode::CONFLICT, "already_assigned"));
    let (s, t) = call(&app, Method::DELETE, &format!("/sessions/{id}/decisions/x"), None).await;
    assert_eq!((s, code(&t).as_str()), (StatusCode::CONFLICT, "not_a_user_decision"));

    let (s, t) = call(&app, Method::GET, "/sessions/nope", None).await;
    assert_eq!((s, code(&t).as_str()), (StatusCode::NOT_FOUND, "unknown_session"));
    let (s, _) = decide(&app, "nope", "a", true).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = call(&app, Method::POST, "/sessions/nope/decisions", Some("garbage".into())).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = call(&app, Method::POST, "/sessions/nope/complete", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);

    // Rejections leave the session alone.
    let (_, text) = call(&app, Method::GET, &format!("/sessions/{id}"), None).await;
    assert_eq!(serde_json::from_str::<SessionDocument>(&text).unwrap(), doc);
}

async fn script(app: &Router) -> Vec<String> {
    let mut out = Vec::new();
    let doc = create(app, SAMPLE, "sample").await;
    out.push(serde_json::to_string(&doc).unwrap());
    let id = doc.id;
    out.push(decide(app, &id, "b", true).await.1);
    out.push(decide(app, &id, "d", true).await.1);
    out.push(call(app, Method::DELETE, &format!("/sessions/{id}/decisions/b"), None).await.1);
    out.push(call(app, Method::POST, &format!("/sessions/{id}/shopping-principle"), None).await.1);
    out.push(decide(app, &id, "a", false).await.1);
    out.push(call(app, Method::POST, &format!("/sessions/{id}/complete"), None).await.1);
    out
}

#[tokio::test]
async fn replay_is_byte_identical() {
    let first = script(&app(9)).await;
    let second = script(&app(9)).await;
    assert_eq!(first, second);
}

#[tokio::test]
async fn golden_document() {
    let app = app(0);
    let doc = create(&app, SAMPLE, "sample").await;
    let (_, text) = decide(&app, &doc.id, "a", true).await;
    let got: Value = serde_json::from_str(&text).unwrap();
    let golden: Value = serde_json::from_str(include_str!("golden/sample_after_a.json")).unwrap();
    assert_eq!(got, golden);
}

#[tokio::test]
async fn default_model_and_static_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<p>hi</p>").unwrap();
    let state = AppState::new(Some(5)).with_default_model("demo", DEMO);
    let app = router(Arc::new(state), Some(dir.path().to_path_buf()));
    let (s, t) = call(&app, Method::POST, "/sessions", None).await;
    assert_eq!(s, StatusCode::CREATED);
    let doc: SessionDocument = serde_json::from_str(&t).unwrap();
    assert_eq!(doc.model_name, "demo");
    let (s, t) = call(&app, Method::GET, "/index.html", None).await;
    assert_eq!((s, t.as_str()), (StatusCode::OK, "<p>hi</p>"));
}

#[tokio::test]
async fn snapshot_round_trip() {
    let state = Arc::new(AppState::new(Some(6)));
    let app = router(state.clone(), None);
    let doc = create(&app, SAMPLE, "sample").await;
    decide(&app, &doc.id, "a", true).await;
    let (_, before) = decide(&app, &doc.id, "c", false).await;
    let other = create(&app, DEMO, "demo").await;
    let (_, other_before) =
        call(&app, Method::POST, &format!("/sessions/{}/shopping-principle", other.id), None).await;

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("snap.json");
    state.save_snapshot(&path).await.unwrap();

    let restored = Arc::new(AppState::new(Some(7)));
    assert!(restored.load_snapshot(&path).unwrap().is_empty());
    let app2 = router(restored.clone(), None);
    let (s, after) = call(&app2, Method::GET, &format!("/sessions/{}", doc.id), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(after, before);
    let (s, other_after) = call(&app2, Method::GET, &format!("/sessions/{}", other.id), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(other_after, other_before);
    assert_eq!(restored.snapshot().await, state.snapshot().await);
}

#[tokio::test]
async fn concurrent_sessions_stay_apart() {
    let app = app(8);
    let mut handles = Vec::new();
    for i in 0..16 {
        let app = app.clone();
        handles.push(tokio::spawn(async move {
            let doc = create(&app, DEMO, &format!("s{i}")).await;
            let var = if i % 2 == 0 { "u" } else { "v" };
            decide(&app, &doc.id, var, true).await;
            let (_, t) = call(&app, Method::POST, &format!("/sessions/{}/shopping-principle", doc.id), None).await;
            (var, serde_json::from_str::<SessionDocument>(&t).unwrap())
        }));
    }
    for h in handles {
        let (var, doc) = h.await.unwrap();
        assert!(doc.complete);
        assert_eq!(status_of(&doc, var), "user_true");
        let other = if var == "u" { "v" } else { "u" };
        assert_eq!(status_of(&doc, other), "auto_false");
    }
}
