use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use lexsub_core::backends::{
    BackendError, Embedder, FillMask, HttpBackend, RetryPolicy, Scorer,
};
use serde_json::Value;

struct Mock {
    url: String,
    requests: Arc<Mutex<Vec<(String, Value)>>>,
}

/// Serves the scripted (status, body) pairs in order, one per connection.
fn mock(script: Vec<(u16, &'static str)>) -> Mock {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let requests = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&requests);
    thread::spawn(move || {
        for (status, body) in script {
            let Ok((stream, _)) = listener.accept() else { return };
            let mut reader = BufReader::new(stream);
            let mut request_line = String::new();
            reader.read_line(&mut request_line).unwrap();
            let path = request_line.split_whitespace().nth(1).unwrap_or("").to_string();
            let mut len = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line == "\r\n" || line.is_empty() {
                    break;
                }
                if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                    len = v.trim().parse().unwrap();
                }
            }
            let mut buf = vec![0; len];
            reader.read_exact(&mut buf).unwrap();
            log.lock()
                .unwrap()
                .push((path, serde_json::from_slice(&buf).unwrap_or(Value::Null)));
            let reason = if status == 200 { "OK" } else { "Service Unavailable" };
            let mut stream = reader.into_inner();
            write!(
                stream,
                "HTTP/1.1 {status} {reason}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            )
            .unwrap();
        }
    });
    Mock { url, requests }
}

fn client(url: &str) -> HttpBackend {
    HttpBackend::new(url).unwrap().with_retry(RetryPolicy {
        attempts: 3,
        base_delay: Duration::from_millis(5),
    })
}

const PREDICTIONS: &str =
    r#"{"predictions":[{"token":"glad","logprob":-0.5},{"token":"joyful","logprob":-1.25}]}"#;

#[test]
fn retries_503_then_succeeds() {
    let m = mock(vec![(503, "{}"), (200, PREDICTIONS)]);
    let preds = client(&m.url).fill_mask("I am <mask> today.", 5).unwrap();
    assert_eq!(preds.len(), 2);
    assert_eq!(preds[0].token, "glad");
    assert_eq!(preds[1].logprob, -1.25);
    let reqs = m.requests.lock().unwrap();
    assert_eq!(reqs.len(), 2);
    assert_eq!(reqs[0], reqs[1]);
    assert_eq!(reqs[0].0, "/fill-mask");
    assert_eq!(reqs[0].1["text"], "I am <mask> today.");
    assert_eq!(reqs[0].1["top_k"], 5);
}

#[test]
fn exhausted_retries_are_unavailable() {
    let m = mock(vec![(503, "{}"), (503, "{}"), (503, "{}")]);
    let err = client(&m.url).fill_mask("<mask>", 1).unwrap_err();
    assert!(matches!(err, BackendError::Unavailable(_)));
    assert_eq!(m.requests.lock().unwrap().len(), 3);
}

#[test]
fn connection_refused_is_unavailable() {
    let addr = {
        let l = TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap()
    };
    let err = client(&format!("http://{addr}")).score("hello").unwrap_err();
    assert!(matches!(err, BackendError::Unavailable(_)));
}

#[test]
fn malformed_bodies() {
    let m = mock(vec![
        (200, "not json"),
        (200, r#"{"predictions":[{"token":"x","logprob":0.5}]}"#),
        (200, r#"{"nll_sum":-1.0,"token_count":3}"#),
    ]);
    let c = client(&m.url);
    assert!(matches!(c.fill_mask("<mask>", 3), Err(BackendError::Malformed(_))));
    assert!(matches!(c.fill_mask("<mask>", 3), Err(BackendError::Malformed(_))));
    assert!(matches!(c.score("a b c"), Err(BackendError::Malformed(_))));
}

#[test]
fn mask_count_checked_before_request() {
    let c = client("http://127.0.0.1:9");
    assert!(matches!(
        c.fill_mask("<mask> and <mask>", 3),
        Err(BackendError::MaskCount { found: 2, .. })
    ));
    assert!(matches!(c.score("   "), Err(BackendError::ZeroTokens)));
    assert_eq!(c.embed(&[]).unwrap(), Vec::<Vec<f64>>::new());
}

#[test]
fn embed_and_score() {
    let m = mock(vec![
        (200, r#"{"vectors":[[1.0,0.0],[0.6,0.8]]}"#),
        (200, r#"{"vectors":[[0.0,1.0,0.0]]}"#),
        (200, r#"{"nll_sum":4.5,"token_count":3}"#),
        (200, r#"{"nll_sum":0.0,"token_count":0}"#),
    ]);
    let c = client(&m.url);
    let v = c.embed(&["a".to_string(), "b".to_string()]).unwrap();
    assert_eq!(v[1], vec![0.6, 0.8]);
    // dimension is fixed after the first answer
    assert!(matches!(c.embed(&["c".to_string()]), Err(BackendError::Malformed(_))));
    let s = c.score("x y z").unwrap();
    assert_eq!((s.nll_sum, s.token_count), (4.5, 3));
    assert!((s.perplexity() - 1.5f64.exp()).abs() < 1e-12);
    assert!(matches!(c.score("q"), Err(BackendError::ZeroTokens)));
}
