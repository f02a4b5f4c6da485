use std::path::Path;
use std::sync::Arc;

use abspm::model_json::{export_json, parse_json};
use abspm::pipeline::{self, DiscoverOverrides, FilterOverrides, SimOverrides};
use abspm::project::Project;
use abspm::server::{router, AppState};
use abspm_core::discovery::build_dfg;
use abspm_core::log::FilterSpec;
use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn project(root: &Path, filter: bool, discover: bool) {
    pipeline::init(root, false, Some(42)).unwrap();
    let (mut p, _) = Project::open(root).unwrap();
    pipeline::simulate(&mut p, &SimOverrides::default()).unwrap();
    pipeline::convert_cmd(&mut p, None).unwrap();
    if filter {
        let o = FilterOverrides {
            preset: Some("paper-outlier".into()),
            ..FilterOverrides::default()
        };
        pipeline::filter_cmd(&mut p, &o, None).unwrap();
    }
    if discover {
        pipeline::discover_cmd(&mut p, &DiscoverOverrides::default(), None).unwrap();
    }
}

fn app(root: &Path, ui: Option<&Path>) -> Router {
    let (state, warnings) = AppState::load(root).unwrap();
    assert!(warnings.is_empty());
    router(Arc::new(state), ui.map(Path::to_path_buf))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string()))
            .unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn call_json(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (s, text) = call(app, method, uri, body).await;
    (
        s,
        serde_json::from_str(&text).unwrap_or_else(|_| panic!("{text}")),
    )
}

#[tokio::test]
async fn full_model_equals_export() {
    let dir = tempfile::tempdir().unwrap();
    project(dir.path(), false, false);
    let app = app(dir.path(), None);
    let (s, text) = call(&app, "GET", "/api/dfg?activities=1.0&paths=1.0", None).await;
    assert_eq!(s, StatusCode::OK);
    let (p, _) = Project::open(dir.path()).unwrap();
    let log = pipeline::event_log(&p).unwrap();
    assert_eq!(text, export_json(&build_dfg(&log).unwrap()));

    let (s, dot) = call(
        &app,
        "GET",
        "/api/dfg?format=dot&metric=MNR&secondary=case_coverage",
        None,
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    assert!(dot.starts_with("digraph process_map {"));
}

#[tokio::test]
async fn dfg_matches_cli_output() {
    let dir = tempfile::tempdir().unwrap();
    project(dir.path(), true, false);
    let (mut p, _) = Project::open(dir.path()).unwrap();
    let o = DiscoverOverrides {
        activities: Some(80.0),
        paths: Some(15.0),
        ..DiscoverOverrides::default()
    };
    pipeline::discover_cmd(&mut p, &o, None).unwrap();
    let on_disk = std::fs::read_to_string(p.artifact_path("model_json").unwrap()).unwrap();
    let dot_on_disk = std::fs::read_to_string(p.artifact_path("model_dot").unwrap()).unwrap();
    let app = app(dir.path(), None);
    let (_, text) = call(&app, "GET", "/api/dfg?activities=0.8&paths=0.15", None).await;
    assert_eq!(text, on_disk);
    let (_, dot) = call(&app, "GET", "/api/dfg?activities=0.8&paths=0.15&format=dot", None).await;
    assert_eq!(dot, dot_on_disk);

    let (_, fewer) = call(&app, "GET", "/api/dfg?paths=0.15", None).await;
    let (_, all) = call(&app, "GET", "/api/dfg?paths=1", None).await;
    let (fewer, all) = (parse_json(&fewer).unwrap(), parse_json(&all).unwrap());
    assert!(fewer.edges.keys().all(|k| all.edges.contains_key(k)));
    assert!(fewer.edges.len() <= all.edges.len());
}

#[tokio::test]
async fn bad_queries_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    project(dir.path(), false, false);
    let app = app(dir.path(), None);
    let (s, e) = call_json(&app, "GET", "/api/dfg?metric=speed", None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "unknown_indicator");
    assert!(e["detail"]["valid"]
        .as_array()
        .unwrap()
        .contains(&json!("case_frequency")));
    let (s, e) = call_json(&app, "GET", "/api/dfg?activities=0", None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "invalid_abstraction");
    let (s, e) = call_json(&app, "GET", "/api/dfg?paths=abc", None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "invalid_request");
    let (s, e) = call_json(&app, "GET", "/api/dfg?mode=magic", None).await;
    assert_eq!(
        (s, e["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("invalid_abstraction"))
    );
    let (s, e) = call_json(&app, "GET", "/api/nothing", None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "invalid_request");
}

#[tokio::test]
async fn filter_keeps_whole_cases() {
    let dir = tempfile::tempdir().unwrap();
    project(dir.path(), false, false);
    let app = app(dir.path(), None);
    let (_, before) = call_json(&app, "GET", "/api/stats", None).await;
    assert_eq!(before["log"]["cases"], 280);
    assert_eq!(before["filtered"]["cases"], 280);

    let (p, _) = Project::open(dir.path()).unwrap();
    let preset: FilterSpec = p.state.filter_presets["paper-outlier"].clone();
    let (s, body) = call_json(
        &app,
        "POST",
        "/api/filter",
        Some(serde_json::to_value(&preset).unwrap()),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    let cases = body["stats"]["cases"].as_u64().unwrap();
    assert!(cases < 280);
    assert_eq!(body["model"]["total_cases"].as_u64().unwrap(), cases);

    // Every kept case has all of its events.
    let log = pipeline::event_log(&p).unwrap();
    let kept = abspm_core::log::apply_filters(&log, &preset);
    let full: std::collections::BTreeMap<_, _> =
        log.traces.iter().map(|t| (&t.case_id, t.events.len())).collect();
    for t in &kept.traces {
        assert_eq!(t.events.len(), full[&t.case_id]);
    }
    assert_eq!(
        body["stats"]["events"].as_u64().unwrap() as usize,
        kept.event_count()
    );

    let (_, after) = call_json(&app, "GET", "/api/stats", None).await;
    assert_eq!(after["filtered"]["cases"].as_u64().unwrap(), cases);
    assert_eq!(after["log"]["cases"], 280);
    let (_, model) = call(&app, "GET", "/api/dfg", None).await;
    assert_eq!(parse_json(&model).unwrap().total_cases as u64, cases);

    let (s, e) = call_json(
        &app,
        "POST",
        "/api/filter",
        Some(json!({"max_events_per_case": "many"})),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "invalid_filter");
    let bad = json!({"timeframe": {"from": "2024-01-02", "to": "2024-01-01"}});
    let (s, e) = call_json(&app, "POST", "/api/filter", Some(bad)).await;
    assert_eq!(
        (s, e["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("invalid_filter"))
    );

    let empty = json!({"timeframe": {"from": "2030-01-01"}});
    let (s, body) = call_json(&app, "POST", "/api/filter", Some(empty)).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body["empty_after_filter"], true);
    assert_eq!(body["model"]["nodes"], json!([]));
}

#[tokio::test]
async fn judgments_reach_the_report() {
    let dir = tempfile::tempdir().unwrap();
    project(dir.path(), true, true);
    let app = app(dir.path(), None);
    let (_, obs) = call_json(&app, "GET", "/api/observations", None).await;
    let obs = obs.as_array().unwrap();
    assert_eq!(obs.len(), 12);
    assert_eq!(obs[0]["obs_id"], 1);
    assert!(obs[0]["question_2"].as_str().unwrap().contains("280 agents"));
    assert_eq!(obs[0]["verdict_1"], Value::Null);

    let table3 = [
        ("n", "p"),
        ("n", "f"),
        ("n", "n"),
        ("f", "p"),
        ("p", "p"),
        ("p", "p"),
        ("p", "p"),
        ("f", "p"),
        ("f", "p"),
    ];
    let batch: Vec<Value> = table3
        .iter()
        .enumerate()
        .flat_map(|(i, (a, b))| {
            [
                json!({"obs_id": i + 1, "question": "Q1", "verdict": a}),
                json!({"obs_id": i + 1, "question": "Q2", "verdict": b, "note": "ok"}),
            ]
        })
        .collect();
    let (s, r) = call_json(&app, "POST", "/api/judgments", Some(Value::Array(batch))).await;
    assert_eq!(s, StatusCode::OK, "{r}");
    assert_eq!(r["current"], 18);

    let (_, rep) = call_json(&app, "GET", "/api/report", None).await;
    assert_eq!(
        rep["report"]["q1_counts"],
        json!({"plausible": 3, "not_plausible": 3, "further_investigation": 3})
    );
    assert_eq!(
        rep["report"]["q2_counts"],
        json!({"plausible": 7, "not_plausible": 1, "further_investigation": 1})
    );
    assert_eq!(rep["report"]["discrepancies"], json!([1, 2, 4, 8, 9]));
    assert_eq!(rep["report"]["pending"], json!([10, 11, 12]));

    let one = json!({"obs_id": 3, "question": "q2", "verdict": "plausible"});
    let (s, _) = call_json(&app, "POST", "/api/judgments", Some(one)).await;
    assert_eq!(s, StatusCode::OK);
    let (_, rep) = call_json(&app, "GET", "/api/report", None).await;
    assert_eq!(rep["report"]["q2_counts"]["plausible"], 8);
    assert!(rep["markdown"].as_str().unwrap().contains("| 3 |"));
    let (_, obs) = call_json(&app, "GET", "/api/observations", None).await;
    assert_eq!(obs[2]["verdict_2"], "plausible");

    let (s, e) = call_json(
        &app,
        "POST",
        "/api/judgments",
        Some(json!({"obs_id": 99, "question": "Q1", "verdict": "p"})),
    )
    .await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(e["code"], "unknown_observation");
    let (s, e) = call_json(
        &app,
        "POST",
        "/api/judgments",
        Some(json!({"obs_id": 1, "question": "Q1", "verdict": "meh"})),
    )
    .await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(e["code"], "invalid_judgment");
    let (s, e) = call_json(
        &app,
        "POST",
        "/api/judgments",
        Some(json!({"obs_id": 1, "question": "Q3", "verdict": "p"})),
    )
    .await;
    assert_eq!(
        (s, e["code"].as_str()),
        (StatusCode::BAD_REQUEST, Some("invalid_judgment"))
    );

    // Persisted: a fresh server sees the same state, and so does the CLI.
    let store = abspm::store::load(dir.path()).unwrap();
    assert_eq!(store.len(), 18);
    assert_eq!(store.audit().len(), 19);
    let fresh = app_again(dir.path());
    let (_, rep2) = call_json(&fresh, "GET", "/api/report", None).await;
    assert_eq!(rep2["report"], rep["report"]);
}

fn app_again(root: &Path) -> Router {
    app(root, None)
}

#[tokio::test]
async fn concurrent_judgments_are_serialised() {
    let dir = tempfile::tempdir().unwrap();
    project(dir.path(), true, true);
    let app = app(dir.path(), None);
    let mut tasks = Vec::new();
    for i in 0..24u32 {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            let v = ["p", "n", "f"][i as usize % 3];
            let body =
                json!({"obs_id": i % 12 + 1, "question": if i < 12 { "Q1" } else { "Q2" }, "verdict": v});
            call(&app, "POST", "/api/judgments", Some(body)).await.0
        }));
    }
    for t in tasks {
        assert_eq!(t.await.unwrap(), StatusCode::OK);
    }
    let store = abspm::store::load(dir.path()).unwrap();
    assert_eq!(store.audit().len(), 24);
    assert_eq!(store.len(), 24);
}

#[tokio::test]
async fn indicators_and_static_assets() {
    let dir = tempfile::tempdir().unwrap();
    project(dir.path(), false, false);
    let plain = app(dir.path(), None);
    let (_, list) = call_json(&plain, "GET", "/api/indicators", None).await;
    let names: Vec<&str> = list
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["name"].as_str().unwrap())
        .collect();
    assert!(
        names.contains(&"case_frequency")
            && names.contains(&"max_repetitions")
            && names.contains(&"max_duration")
    );
    let (s, page) = call(&plain, "GET", "/", None).await;
    assert_eq!(s, StatusCode::OK);
    assert!(page.contains("--ui-dir"));

    let ui = tempfile::tempdir().unwrap();
    std::fs::write(ui.path().join("index.html"), "<h1>explorer</h1>").unwrap();
    std::fs::write(ui.path().join("app.js"), "console.log(1)").unwrap();
    let with_ui = app(dir.path(), Some(ui.path()));
    let (s, page) = call(&with_ui, "GET", "/", None).await;
    assert_eq!((s, page.as_str()), (StatusCode::OK, "<h1>explorer</h1>"));
    let (s, js) = call(&with_ui, "GET", "/app.js", None).await;
    assert_eq!((s, js.as_str()), (StatusCode::OK, "console.log(1)"));
    let (s, _) = call(&with_ui, "GET", "/api/stats", None).await;
    assert_eq!(s, StatusCode::OK);
}

#[tokio::test]
async fn responses_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    project(dir.path(), true, true);
    let a = app(dir.path(), None);
    let b = app(dir.path(), None);
    for uri in [
        "/api/stats",
        "/api/dfg?paths=0.3",
        "/api/observations",
        "/api/report",
        "/api/indicators",
    ] {
        assert_eq!(
            call(&a, "GET", uri, None).await,
            call(&b, "GET", uri, None).await,
            "{uri}"
        );
    }
}

#[test]
fn missing_event_log_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    pipeline::init(dir.path(), false, None).unwrap();
    let err = AppState::load(dir.path()).err().unwrap();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("event_log"));
}
