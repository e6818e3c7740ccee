use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use lexsub_core::corpus::{CanonicalRecord, GoldSet, PredictionFile};
use lexsub_core::{Pos, TargetInstance};
use lexsub_survey::server::{router, AppState, SurveyPayload};
use lexsub_survey::{
    aggregate, generate_survey, ResponseStore, Source, SurveyError, SurveyOption, SurveyQuestion,
    SurveyResponse, Task, PLACEHOLDER,
};
use proptest::prelude::*;
use serde_json::{json, Value};
use tower::ServiceExt;

fn record(id: usize, gold: &[(&str, u32)]) -> CanonicalRecord {
    let inst = TargetInstance::locate(
        id.to_string(),
        format!("Sentence {id} has the target word inside."),
        "target",
        None,
        Pos::Noun,
    )
    .unwrap();
    CanonicalRecord::new(inst, GoldSet::new(id.to_string(), gold.iter().copied()).unwrap())
}

fn corpus(n: usize) -> (Vec<CanonicalRecord>, PredictionFile, PredictionFile) {
    let records: Vec<CanonicalRecord> = (0..n)
        .map(|i| record(i, &[("aim", 3), ("goal", 2), ("objective", 1)]))
        .collect();
    let a = (0..n).map(|i| (i.to_string(), vec!["goal", "aim", "end"])).collect();
    let b = (0..n).map(|i| (i.to_string(), vec!["mark", "point", "aim"])).collect();
    (records, a, b)
}

#[test]
fn generates_sixty_questions_deterministically() {
    let (records, a, b) = corpus(80);
    let qs = generate_survey(&records, &a, &b, 15, 9).unwrap();
    assert_eq!(qs.len(), 60);
    for task in Task::ALL {
        assert_eq!(qs.iter().filter(|q| q.task == task).count(), 15);
    }
    let ids: BTreeSet<&str> = qs.iter().map(|q| q.instance_id.as_str()).collect();
    assert_eq!(ids.len(), 60);
    let again = generate_survey(&records, &a, &b, 15, 9).unwrap();
    assert_eq!(serde_json::to_string(&qs).unwrap(), serde_json::to_string(&again).unwrap());
    let other = generate_survey(&records, &a, &b, 15, 10).unwrap();
    assert_ne!(qs, other);
}

#[test]
fn displays_and_options() {
    let (records, a, b) = corpus(60);
    let qs = generate_survey(&records, &a, &b, 15, 1).unwrap();
    for q in &qs {
        if q.task.is_masked() {
            assert!(q.sentence_display.contains(PLACEHOLDER));
            assert!(!q.sentence_display.contains("target"));
        } else {
            assert!(q.sentence_display.contains("**target**"));
        }
        for o in &q.options {
            assert_eq!(o.display.len(), q.task.option_size());
        }
        let credited: usize = q.options.iter().map(|o| o.sources.len()).sum();
        assert_eq!(credited, 3);
    }
    // single-word: gold "aim", a "goal", b "mark" are all distinct
    let swr = qs.iter().find(|q| q.task == Task::Swr).unwrap();
    assert_eq!(swr.options.len(), 3);
    // sets: gold {aim, goal, objective}, a {goal, aim, end}, b {mark, point, aim}
    let sr = qs.iter().find(|q| q.task == Task::Sr).unwrap();
    assert_eq!(sr.options.len(), 3);
}

#[test]
fn identical_top1_merges_into_one_option() {
    let records: Vec<CanonicalRecord> = (0..4).map(|i| record(i, &[("use", 2), ("apply", 1)])).collect();
    let a: PredictionFile = (0..4).map(|i| (i.to_string(), vec!["use", "x", "y"])).collect();
    let b: PredictionFile = (0..4).map(|i| (i.to_string(), vec!["Use", "z", "w"])).collect();
    let qs = generate_survey(&records, &a, &b, 1, 3).unwrap();
    let swr = qs.iter().find(|q| q.task == Task::Swr).unwrap();
    assert_eq!(swr.options.len(), 1);
    assert_eq!(swr.options[0].sources, Source::ALL.into_iter().collect());

    let a: PredictionFile = (0..4).map(|i| (i.to_string(), vec!["execute", "x", "y"])).collect();
    let qs = generate_survey(&records, &a, &b, 1, 3).unwrap();
    let swr = qs.iter().find(|q| q.task == Task::Swr).unwrap();
    assert_eq!(swr.options.len(), 2);
}

#[test]
fn sets_sharing_a_word_stay_separate() {
    let records: Vec<CanonicalRecord> =
        (0..4).map(|i| record(i, &[("buzz", 3), ("hoot", 2), ("say", 1)])).collect();
    let a: PredictionFile = (0..4).map(|i| (i.to_string(), vec!["whisper", "say", "mutter"])).collect();
    let b: PredictionFile = (0..4).map(|i| (i.to_string(), vec!["mutter", "whisper", "say"])).collect();
    let qs = generate_survey(&records, &a, &b, 1, 3).unwrap();
    let sr = qs.iter().find(|q| q.task == Task::Sr).unwrap();
    assert_eq!(sr.options.len(), 2);
    let merged = sr.options.iter().find(|o| o.sources.len() == 2).unwrap();
    assert!(merged.sources.contains(&Source::SystemA) && merged.sources.contains(&Source::SystemB));
}

#[test]
fn insufficient_records() {
    let (records, a, b) = corpus(59);
    assert!(matches!(
        generate_survey(&records, &a, &b, 15, 1),
        Err(SurveyError::InsufficientRecords { .. })
    ));
}

fn question(qid: &str, task: Task, sources: &[&[Source]]) -> SurveyQuestion {
    SurveyQuestion {
        qid: qid.into(),
        task,
        instance_id: qid.into(),
        sentence_display: "x".into(),
        options: sources
            .iter()
            .enumerate()
            .map(|(i, s)| SurveyOption {
                display: vec![format!("w{i}")],
                sources: s.iter().copied().collect(),
            })
            .collect(),
        display_order_seed: 0,
    }
}

fn resp(who: &str, qid: &str, choice: usize) -> SurveyResponse {
    SurveyResponse {
        respondent_id: who.into(),
        qid: qid.into(),
        choice,
        timestamp: 0,
    }
}

#[test]
fn shared_option_credits_both() {
    let qs = vec![question("q1", Task::Swr, &[&[Source::Gold, Source::SystemA], &[Source::SystemB]])];
    let agg = aggregate(&qs, &[resp("r", "q1", 0)], 1);
    let row = &agg.rows[0];
    assert_eq!(row.cells[&Source::Gold].count, 1);
    assert_eq!(row.cells[&Source::SystemA].count, 1);
    assert_eq!(row.cells[&Source::SystemB].count, 0);
    assert_eq!(row.cells[&Source::Gold].percentage, 100.0);
}

#[test]
fn zero_responses_aggregate_to_zero() {
    let qs = vec![question("q1", Task::Swr, &[&[Source::Gold]])];
    let agg = aggregate(&qs, &[], 15);
    assert_eq!(agg.respondents, 0);
    assert!(agg.totals.values().all(|c| c.count == 0 && c.percentage == 0.0));
}

proptest! {
    #[test]
    fn aggregate_order_invariant_and_credit_bound(
        picks in prop::collection::vec((0usize..5, 0usize..4, 0usize..3), 0..60),
        rot in 0usize..60,
    ) {
        let all: [&[Source]; 3] = [&[Source::Gold, Source::SystemA], &[Source::SystemB], &[Source::Gold]];
        let qs: Vec<SurveyQuestion> = Task::ALL
            .iter()
            .enumerate()
            .map(|(i, t)| question(&format!("q{i}"), *t, &all))
            .collect();
        let mut responses: Vec<SurveyResponse> = picks
            .iter()
            .map(|(who, q, c)| resp(&format!("r{who}"), &format!("q{q}"), *c))
            .collect();
        let a = aggregate(&qs, &responses, 1);
        if !responses.is_empty() {
            let k = rot % responses.len();
            responses.rotate_left(k);
        }
        let b = aggregate(&qs, &responses, 1);
        prop_assert_eq!(&a, &b);
        for row in &a.rows {
            let credited: usize = row.cells.values().map(|c| c.count).sum();
            prop_assert!(credited >= row.responses);
        }
    }
}

#[test]
fn store_persists_overwrites_and_compacts() {
    let dir = tempfile::tempdir().unwrap();
    let qs = vec![question("q1", Task::Swr, &[&[Source::Gold], &[Source::SystemA]])];
    {
        let mut store = ResponseStore::open(dir.path(), &qs).unwrap();
        store.record(resp("r1", "q1", 0)).unwrap();
        store.record(resp("r1", "q1", 1)).unwrap();
        store.record(resp("r2", "q1", 0)).unwrap();
        assert!(matches!(store.record(resp("r1", "nope", 0)), Err(SurveyError::UnknownQuestion(_))));
        assert!(matches!(
            store.record(resp("r1", "q1", 2)),
            Err(SurveyError::IndexOutOfRange { .. })
        ));
        assert!(matches!(store.record(resp("", "q1", 0)), Err(SurveyError::BadRespondent)));
        assert_eq!(store.len(), 2);
    }
    let mut store = ResponseStore::open(dir.path(), &qs).unwrap();
    assert_eq!(store.len(), 2);
    assert_eq!(store.responses()[0].choice, 1);
    store.compact().unwrap();
    store.record(resp("r3", "q1", 1)).unwrap();
    drop(store);
    let store = ResponseStore::open(dir.path(), &qs).unwrap();
    assert_eq!(store.len(), 3);
}

#[test]
fn torn_log_tail_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let qs = vec![question("q1", Task::Swr, &[&[Source::Gold]])];
    {
        let mut store = ResponseStore::open(dir.path(), &qs).unwrap();
        store.record(resp("r1", "q1", 0)).unwrap();
    }
    let log = dir.path().join("responses.log.jsonl");
    let mut text = std::fs::read_to_string(&log).unwrap();
    text.push_str("{\"respondent_id\":\"r2\",\"qi");
    std::fs::write(&log, text).unwrap();
    assert_eq!(ResponseStore::open(dir.path(), &qs).unwrap().len(), 1);
}

fn app(dir: &std::path::Path, static_dir: Option<std::path::PathBuf>) -> axum::Router {
    let (records, a, b) = corpus(60);
    let questions = generate_survey(&records, &a, &b, 15, 5).unwrap();
    let store = ResponseStore::open(dir, &questions).unwrap();
    router(
        Arc::new(AppState {
            questions,
            store: Mutex::new(store),
            admin_token: Some("secret".into()),
            per_task: 15,
        }),
        static_dir,
    )
}

async fn send(app: &axum::Router, req: Request<Body>) -> (StatusCode, Vec<u8>) {
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, body)
}

fn post_response(body: Value) -> Request<Body> {
    Request::post("/response")
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap()
}

#[tokio::test]
async fn api_full_session() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path(), None);

    let (status, body) = send(&app, Request::get("/health").body(Body::empty()).unwrap()).await;
    assert_eq!((status, body.as_slice()), (StatusCode::OK, b"ok".as_slice()));

    let (status, body) = send(&app, Request::get("/survey").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    let raw = String::from_utf8(body.clone()).unwrap();
    for label in ["gold", "system_a", "system_b", "sources", "instance_id"] {
        assert!(!raw.contains(label), "payload leaks {label}");
    }
    let payload: SurveyPayload = serde_json::from_slice(&body).unwrap();
    assert_eq!(payload.questions.len(), 60);
    assert!(uuid::Uuid::parse_str(&payload.respondent_id).is_ok());
    for q in payload.questions.iter().filter(|q| q.task.is_masked()) {
        assert!(!q.sentence_display.contains("target"));
    }

    for q in &payload.questions {
        let (status, _) = send(
            &app,
            post_response(json!({"respondent_id": payload.respondent_id, "qid": q.qid, "choice": 0})),
        )
        .await;
        assert_eq!(status, StatusCode::OK);
    }
    let (status, _) = send(
        &app,
        post_response(json!({"respondent_id": payload.respondent_id, "qid": "nope", "choice": 0})),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = send(
        &app,
        post_response(json!({"respondent_id": payload.respondent_id, "qid": "SWR-01", "choice": 99})),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);

    let (status, _) = send(&app, Request::get("/aggregate").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
    let (status, body) = send(
        &app,
        Request::get("/aggregate")
            .header("x-admin-token", "secret")
            .body(Body::empty())
            .unwrap(),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let admin: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(admin["responses"], 60);
    assert_eq!(admin["aggregate"]["respondents"], 1);
    assert!(admin["questions"][0]["options"][0]["sources"].is_array());
}

#[tokio::test]
async fn serves_static_files() {
    let dir = tempfile::tempdir().unwrap();
    let web = tempfile::tempdir().unwrap();
    std::fs::write(web.path().join("index.html"), "<html>survey</html>").unwrap();
    let app = app(dir.path(), Some(web.path().to_path_buf()));
    let (status, body) = send(&app, Request::get("/index.html").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"<html>survey</html>");
}
