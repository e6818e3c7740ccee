use std::path::{Path, PathBuf};

use lexsub_core::corpus::{
    import_coinco, import_ls07, import_swords, load_canonical, read_predictions, save_canonical,
    write_predictions, CanonicalRecord, CorpusError, PredictionFile,
};
use lexsub_core::Pos;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(rel)
}

fn by_id<'a>(records: &'a [CanonicalRecord], id: &str) -> &'a CanonicalRecord {
    records.iter().find(|r| r.id() == id).unwrap()
}

#[test]
fn ls07_import() {
    let (records, report) =
        import_ls07(data("ls07/lexsub_test.xml"), data("ls07/gold.txt")).unwrap();
    let ids: Vec<&str> = records.iter().map(|r| r.id()).collect();
    assert_eq!(ids, ["1", "2", "301", "7"]);
    assert_eq!(report.dropped_empty_gold, 1);
    assert_eq!(report.dropped_missing_context, 1);

    let r1 = by_id(&records, "1");
    assert_eq!(r1.gold.mode(), Some("intelligent"));
    assert_eq!(r1.gold.total_weight(), 4);
    assert_eq!(r1.instance.target_lemma, "bright");
    assert_eq!(r1.instance.target_pos, Pos::Adj);
    assert!(r1.instance.sentence.contains("students & their"));
    assert_eq!(r1.instance.left_context(), "The actual field is not much different than that of ");

    let r2 = by_id(&records, "2");
    assert_eq!(r2.gold.mode(), None);
    assert_eq!(r2.instance.target_char_start, 0);
    assert_eq!(r2.instance.target_surface, "Bright");

    let r301 = by_id(&records, "301");
    assert!(r301.gold.contains("take sides"));
    assert_eq!(report.multiword_gold, 1);

    let r7 = by_id(&records, "7");
    assert!(r7.is_short_context());
    assert_eq!(report.short_context, 1);
}

#[test]
fn ls07_import_is_deterministic() {
    let a = import_ls07(data("ls07/lexsub_test.xml"), data("ls07/gold.txt")).unwrap().0;
    let b = import_ls07(data("ls07/lexsub_test.xml"), data("ls07/gold.txt")).unwrap().0;
    let lines = |r: &[CanonicalRecord]| r.iter().map(|x| x.to_line()).collect::<Vec<_>>();
    assert_eq!(lines(&a), lines(&b));
}

#[test]
fn ls07_bad_gold_line_has_location() {
    let dir = tempfile::tempdir().unwrap();
    let gold = dir.path().join("gold.txt");
    std::fs::write(&gold, "bright.a 1 :: intelligent 3;\nbright.a 2 intelligent\n").unwrap();
    match import_ls07(data("ls07/lexsub_test.xml"), &gold) {
        Err(CorpusError::Parse { location, .. }) => assert!(location.ends_with("gold.txt:2")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn coinco_import() {
    let (records, report) = import_coinco(data("coinco/sample.xml")).unwrap();
    let ids: Vec<&str> = records.iter().map(|r| r.id()).collect();
    assert_eq!(ids, ["10", "11", "12"]);
    assert_eq!(report.dropped_empty_gold, 1);

    let whole = by_id(&records, "10");
    assert_eq!(whole.gold.len(), 6);
    assert_eq!(whole.gold.mode(), Some("entirety"));
    assert_eq!(whole.instance.target_surface, "whole");
    assert_eq!(whole.instance.target_char_start, 17);
    assert_eq!(whole.instance.target_pos, Pos::Noun);

    let day = by_id(&records, "11");
    assert!(day.gold.contains("@card@ hour period"));
    assert_eq!(
        report.flagged_artifacts,
        vec![("11".to_string(), "@card@ hour period".to_string())]
    );

    let much = by_id(&records, "12");
    assert_eq!(much.gold.entries()[0].sub, "very much");
    assert_eq!(much.gold.len(), 2);
    // "much" is located after "very", not inside another token
    assert_eq!(much.instance.right_context(), ".");
}

#[test]
fn swords_thresholds() {
    let (s1, _) = import_swords(data("swords/sample.json"), 0.0).unwrap();
    let (s5, _) = import_swords(data("swords/sample.json"), 0.5).unwrap();
    let t1 = by_id(&s1, "t1");
    assert_eq!(t1.gold.len(), 4);
    assert_eq!(t1.gold.weight("fine"), 1);
    assert_eq!(t1.gold.weight("nice"), 7);
    let t1 = by_id(&s5, "t1");
    assert_eq!(t1.gold.len(), 2);
    assert!(t1.gold.contains("lovely"));
    assert!(!t1.gold.contains("agreeable"));
    // zero-vote substitutes never enter
    assert!(!by_id(&s1, "t2").gold.contains("curt"));
    assert!(import_swords(data("swords/sample.json"), 1.5).is_err());
}

#[test]
fn swords_drops_empty_gold() {
    let (records, report) = import_swords(data("swords/sample.json"), 1.0).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].id(), "t2");
    assert_eq!(report.dropped_empty_gold, 1);
}

#[test]
fn canonical_round_trip() {
    let (records, _) = import_coinco(data("coinco/sample.xml")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coinco.jsonl");
    save_canonical(&path, &records).unwrap();
    assert_eq!(load_canonical(&path).unwrap(), records);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().all(|l| l == l.trim_end()));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn every_imported_mode_is_unique_max() {
    let mut all = import_coinco(data("coinco/sample.xml")).unwrap().0;
    all.extend(import_ls07(data("ls07/lexsub_test.xml"), data("ls07/gold.txt")).unwrap().0);
    all.extend(import_swords(data("swords/sample.json"), 0.0).unwrap().0);
    for r in &all {
        let max = r.gold.entries().iter().map(|e| e.weight).max().unwrap();
        let at_max: Vec<&str> = r
            .gold
            .entries()
            .iter()
            .filter(|e| e.weight == max)
            .map(|e| e.sub.as_str())
            .collect();
        match r.gold.mode() {
            Some(m) => assert_eq!(at_max, [m]),
            None => assert!(at_max.len() > 1),
        }
    }
}

#[test]
fn predictions_round_trip_and_truncate() {
    let mut p = PredictionFile::new();
    p.insert("1", ["Glad", "happy", "cheerful"]);
    p.insert("2", (0..12).map(|i| format!("w{i}")));
    p.insert("3", Vec::<String>::new());
    assert_eq!(p.get("2").unwrap().len(), 10);
    assert_eq!(p.get("1").unwrap()[0], "glad");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pred.jsonl");
    write_predictions(&path, &p).unwrap();
    assert_eq!(read_predictions(&path).unwrap(), p);

    std::fs::write(
        &path,
        "{\"id\":\"1\",\"substitutes\":[\"a\"]}\n{\"id\":\"1\",\"substitutes\":[\"b\"]}\n",
    )
    .unwrap();
    assert!(matches!(read_predictions(&path), Err(CorpusError::DuplicateInstance(id)) if id == "1"));
}
