//! Browser bindings. Each exported function takes and returns plain strings;
//! results are JSON documents.
//!
//! The `*_json` functions hold the logic and are callable from native code.

use std::num::NonZeroUsize;

use codemix::corpus::{build_graph, parse_conllu, Corpus};
use codemix::generator::{GenerationPolicy, Generator, Mode, Tagger};
use codemix::lang::parse_tagged;
use codemix::metrics::{classify_utterance, cmi_utterance, i_index, utterance_stats, CorpusStats, UtteranceClass};
use codemix::segmenter::{extract_segments, SegmentRecord};
use codemix::translation::{Lexicon, LexiconBackend};
use codemix::LangCode;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn corpus(conllu: &str) -> Result<Corpus, String> {
    parse_conllu(conllu.as_bytes(), "input").map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

/// Segment records for every sentence of a CoNLL-U document.
pub fn segment_json(conllu: &str) -> Result<String, String> {
    let corpus = corpus(conllu)?;
    let records: Vec<SegmentRecord> = corpus
        .sentences
        .iter()
        .map(|s| extract_segments(&build_graph(s)).to_record(s))
        .collect();
    Ok(to_json(&records))
}

fn parse_policy(policy: &str) -> Result<Mode, String> {
    match policy {
        "all" => Ok(Mode::All),
        "max-cmi" => Ok(Mode::MaxCmi),
        other => other
            .strip_prefix("top-k=")
            .and_then(|k| k.parse::<NonZeroUsize>().ok())
            .map(Mode::TopK)
            .ok_or_else(|| format!("invalid policy {:?}: expected all, max-cmi or top-k=<k>", policy)),
    }
}

/// Variant records generated with a lexicon given as TSV text.
pub fn generate_json(
    conllu: &str,
    lexicon_tsv: &str,
    target: &str,
    policy: &str,
    clause_only: bool,
) -> Result<String, String> {
    let corpus = corpus(conllu)?;
    let target = LangCode::new(target).map_err(|e| e.to_string())?;
    let lexicon = Lexicon::from_tsv(lexicon_tsv.as_bytes()).map_err(|e| e.to_string())?;
    let backend = LexiconBackend::new(lexicon, target.clone());
    let tagger = Tagger::new();
    let policy = GenerationPolicy {
        mode: parse_policy(policy)?,
        clause_only,
    };
    let variants = Generator::new(&backend, &tagger, policy, target)
        .corpus(&corpus.sentences)
        .map_err(|e| e.to_string())?;
    let records: Vec<_> = variants.iter().map(|v| v.to_record()).collect();
    Ok(to_json(&records))
}

#[derive(Serialize)]
struct UtteranceScore {
    text: String,
    cmi: f64,
    i_index: f64,
    class: UtteranceClass,
}

#[derive(Serialize)]
struct ScoreReport {
    utterances: Vec<UtteranceScore>,
    stats: CorpusStats,
}

/// Scores `form/lang` tagged text, one utterance per line.
pub fn score_json(tagged: &str) -> Result<String, String> {
    let mut utterances = Vec::new();
    for line in tagged.lines().filter(|l| !l.trim().is_empty()) {
        utterances.push(parse_tagged(line).map_err(|e| e.to_string())?);
    }
    let stats = utterance_stats(utterances.iter().map(Vec::as_slice)).map_err(|e| e.to_string())?;
    let scores = utterances
        .iter()
        .map(|tags| UtteranceScore {
            text: tags.iter().map(|t| t.form.as_str()).collect::<Vec<_>>().join(" "),
            cmi: cmi_utterance(tags),
            i_index: i_index(tags),
            class: classify_utterance(tags),
        })
        .collect();
    Ok(to_json(&ScoreReport {
        utterances: scores,
        stats,
    }))
}

#[wasm_bindgen]
pub fn segment(conllu: &str) -> Result<String, JsError> {
    segment_json(conllu).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn generate(
    conllu: &str,
    lexicon_tsv: &str,
    target: &str,
    policy: &str,
    clause_only: bool,
) -> Result<String, JsError> {
    generate_json(conllu, lexicon_tsv, target, policy, clause_only).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn score(tagged: &str) -> Result<String, JsError> {
    score_json(tagged).map_err(|e| JsError::new(&e))
}
