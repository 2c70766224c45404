use std::collections::HashMap;

use codemix::corpus::{build_graph, parse_conllu, serialize_conllu, Corpus, Sentence, Token};
use codemix::metrics::{cmi_utterance, i_index};
use codemix::segmenter::{extract_segments, CaseKind, Diagnostic};
use codemix::translation::{
    cached, CacheStore, LangCode, Lexicon, LexiconBackend, TranslationBackend, TranslationRequest,
};
use codemix::{Lang, TokenTag};
use proptest::prelude::*;

const RELS: &[&str] = &[
    "nsubj", "dobj", "obj", "nsubj:pass", "amod", "det", "nmod", "case", "punct", "cop", "advmod",
    "xcomp", "conj", "mark",
];
const WORDS: &[&str] = &["the", "boy", "ran", "river", "is", "holy", "in", "car", ",", "."];

/// Random rooted tree over `n` tokens with random relations.
fn tree() -> impl Strategy<Value = Sentence> {
    (1usize..16)
        .prop_flat_map(|n| {
            (
                Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec((any::<prop::sample::Index>(), 0..RELS.len(), 0..WORDS.len()), n),
            )
        })
        .prop_map(|(order, picks)| {
            let n = order.len();
            let mut heads = vec![0; n + 1];
            for (i, &node) in order.iter().enumerate().skip(1) {
                heads[node] = order[picks[i].0.index(i)];
            }
            let tokens = (1..=n)
                .map(|i| {
                    let (_, rel, word) = picks[i - 1];
                    let form = WORDS[word];
                    let upos = if form.chars().all(|c| c.is_ascii_punctuation()) { "PUNCT" } else { "X" };
                    let rel = if heads[i] == 0 { "root" } else { RELS[rel] };
                    Token::new(i, form, upos, heads[i], rel)
                })
                .collect();
            Sentence::new("p", tokens).unwrap()
        })
}

fn lang() -> impl Strategy<Value = Lang> {
    prop_oneof![
        Just(Lang::Eng),
        Just(Lang::Native(LangCode::new("hin").unwrap())),
        Just(Lang::Native(LangCode::new("kan").unwrap())),
        Just(Lang::Other),
    ]
}

fn tags(langs: &[Lang]) -> Vec<TokenTag> {
    langs.iter().map(|l| TokenTag::new("w", l.clone())).collect()
}

proptest! {
    #[test]
    fn segments_partition_the_sentence(s in tree()) {
        let seg = extract_segments(&build_graph(&s));
        prop_assert!(!seg.segments.is_empty());
        prop_assert!(seg.segments.len() <= s.len());
        let mut next = 1;
        for segment in &seg.segments {
            prop_assert_eq!(segment.lo, next);
            prop_assert!(segment.lo <= segment.hi);
            next = segment.hi + 1;
        }
        prop_assert_eq!(next, s.len() + 1);
    }

    #[test]
    fn clauses_contain_their_anchor_and_subject_phrase(s in tree()) {
        let graph = build_graph(&s);
        let seg = extract_segments(&graph);
        for segment in seg.segments.iter().filter(|x| x.is_clause()) {
            let anchor = segment.anchor.expect("clauses carry an anchor");
            prop_assert!(segment.contains(anchor.head));
            if matches!(segment.case, Some(CaseKind::Case1 | CaseKind::Case4)) {
                prop_assert!(segment.contains(anchor.object.unwrap()));
            }
            if let Some(subject) = anchor.subject {
                let (lo, hi) = graph.subtree_span(subject).unwrap();
                let widened = seg.diagnostics.iter().any(|d| matches!(d,
                    Diagnostic::NonContiguousYield { head, .. } if *head == anchor.head));
                prop_assert!(widened || (segment.contains(lo) && segment.contains(hi)));
                prop_assert!(segment.contains(subject));
            }
        }
    }

    #[test]
    fn segmentation_is_deterministic(s in tree()) {
        let a = extract_segments(&build_graph(&s));
        let b = extract_segments(&build_graph(&s.clone()));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn subtree_spans_cover_descendants(s in tree()) {
        let graph = build_graph(&s);
        for node in 1..=s.len() {
            let (lo, hi) = graph.subtree_span(node).unwrap();
            let mut size = 0;
            for t in 1..=s.len() {
                let mut cur = t;
                while cur != 0 && cur != node {
                    cur = s.token(cur).unwrap().head;
                }
                if cur == node {
                    size += 1;
                    prop_assert!(lo <= t && t <= hi);
                }
            }
            prop_assert_eq!(size, graph.subtree_size(node).unwrap());
        }
        let root = s.root();
        let below: usize = graph
            .children_by_rel(root, None)
            .unwrap()
            .iter()
            .map(|&c| graph.subtree_size(c).unwrap())
            .sum();
        prop_assert_eq!(below + 1, s.len());
    }

    #[test]
    fn conllu_round_trip(sentences in prop::collection::vec(tree(), 1..6)) {
        let corpus = Corpus {
            sentences: sentences
                .into_iter()
                .enumerate()
                .map(|(i, mut s)| { s.id = format!("s{}", i); s })
                .collect(),
            source_name: "prop".into(),
        };
        let mut first = Vec::new();
        serialize_conllu(&corpus, &mut first).unwrap();
        let parsed = parse_conllu(first.as_slice(), "prop").unwrap();
        let mut second = Vec::new();
        serialize_conllu(&parsed, &mut second).unwrap();
        prop_assert_eq!(&first, &second);
        for (a, b) in corpus.sentences.iter().zip(&parsed.sentences) {
            prop_assert_eq!(&a.tokens, &b.tokens);
        }
    }

    #[test]
    fn cmi_is_bounded(langs in prop::collection::vec(lang(), 0..40)) {
        let t = tags(&langs);
        let cmi = cmi_utterance(&t);
        prop_assert!((0.0..0.5).contains(&cmi), "{}", cmi);
        let ii = i_index(&t);
        prop_assert!((0.0..=1.0).contains(&ii), "{}", ii);
    }

    #[test]
    fn cmi_ignores_order(langs in prop::collection::vec(lang(), 1..40).prop_shuffle(), seed in any::<u64>()) {
        let mut shuffled = langs.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        shuffled.reverse();
        prop_assert!((cmi_utterance(&tags(&langs)) - cmi_utterance(&tags(&shuffled))).abs() < 1e-12);
    }

    #[test]
    fn cmi_is_scale_invariant(langs in prop::collection::vec(lang(), 1..30), k in 2usize..5) {
        let repeated: Vec<Lang> = langs.iter().flat_map(|l| std::iter::repeat_n(l.clone(), k)).collect();
        prop_assert!((cmi_utterance(&tags(&langs)) - cmi_utterance(&tags(&repeated))).abs() < 1e-12);
    }

    #[test]
    fn cache_is_transparent(texts in prop::collection::vec("[a-z]{1,6}( [a-z]{1,6}){0,3}", 1..12)) {
        let lexicon = Lexicon::from_pairs([("the", "yeh"), ("boy", "ladka"), ("in the car", "gaadi mein")]).unwrap();
        let hin = LangCode::new("hin").unwrap();
        let plain = LexiconBackend::new(lexicon.clone(), hin.clone());
        let dir = tempfile::tempdir().unwrap();
        let store = CacheStore::open(dir.path().join("cache.bin")).unwrap();
        let wrapped = cached(LexiconBackend::new(lexicon, hin.clone()), store);
        let mut seen = HashMap::new();
        for text in texts.iter().chain(texts.iter()) {
            let request = TranslationRequest::from_english(text.as_str(), &hin).unwrap();
            let want = plain.translate_text(&request).unwrap();
            prop_assert_eq!(&wrapped.translate_text(&request).unwrap(), &want);
            seen.insert(text.clone(), want);
        }
        prop_assert_eq!(wrapped.misses(), seen.len());
    }
}
