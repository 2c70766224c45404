use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::PathBuf;

use codemix::corpus::{build_graph, parse_conllu, parse_labels, Corpus};
use codemix::segmenter::{extract_segments, SegmentKind, SegmentRecord};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn load(name: &str) -> Corpus {
    let file = File::open(fixture(name)).unwrap();
    parse_conllu(BufReader::new(file), name).unwrap()
}

#[test]
fn fig1_matches_golden_segments() {
    let corpus = load("fig1.conllu");
    let golden: Vec<SegmentRecord> = BufReader::new(File::open(fixture("fig1.segments.jsonl")).unwrap())
        .lines()
        .map(|l| serde_json::from_str(&l.unwrap()).unwrap())
        .collect();
    assert_eq!(corpus.len(), golden.len());
    for (sentence, want) in corpus.sentences.iter().zip(&golden) {
        let got = extract_segments(&build_graph(sentence)).to_record(sentence);
        assert_eq!(&got, want, "{}", sentence.id);
    }
}

#[test]
fn fig1_labels_attach() {
    let mut corpus = load("fig1.conllu");
    let labels = parse_labels(BufReader::new(File::open(fixture("fig1.labels.tsv")).unwrap())).unwrap();
    corpus.attach_labels(&labels);
    let got: Vec<Option<&str>> = corpus.sentences.iter().map(|s| s.label.as_deref()).collect();
    assert_eq!(
        got,
        [Some("positive"), Some("neutral"), None, Some("question")]
    );
}

#[test]
fn synthetic_corpus_segments_cleanly() {
    let corpus = load("synthetic.conllu");
    assert!(corpus.len() >= 240);
    let mut segments = 0;
    let mut clauses = 0;
    for sentence in &corpus.sentences {
        let seg = extract_segments(&build_graph(sentence));
        assert!(
            seg.diagnostics.iter().all(|d| !d.to_string().contains("not contiguous")),
            "{}: {:?}",
            sentence.id,
            seg.diagnostics
        );
        segments += seg.segments.len();
        clauses += seg.segments.iter().filter(|s| s.kind == SegmentKind::IndependentClause).count();
    }
    let average = segments as f64 / corpus.len() as f64;
    assert!(average >= 2.0, "average segments per sentence {}", average);
    assert!(clauses >= corpus.len());
}
