//! Clause/adjunct segmentation.
//!
//! Every head token with a nominal subject and/or direct object is an
//! anchor. The relative order of subject, head and object selects one of
//! four span rules; the resulting clause spans are made disjoint and the
//! uncovered token runs become adjuncts, so that each sentence is
//! partitioned into contiguous segments that can be translated on their own.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{rel_matches, DepGraph, Sentence};

const SUBJECT: &str = "nsubj";
const OBJECT: &str = "dobj";

/// A head token and its (leftmost) subject and object dependents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClauseAnchor {
    pub head: usize,
    pub subject: Option<usize>,
    pub object: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    /// subject, head, object
    Case1,
    /// subject, head; no object
    Case2,
    /// head, subject
    Case3,
    /// head, object; no subject
    Case4,
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseKind::Case1 => "case1",
            CaseKind::Case2 => "case2",
            CaseKind::Case3 => "case3",
            CaseKind::Case4 => "case4",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    IndependentClause,
    Adjunct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    /// First token, 1-based, inclusive.
    pub lo: usize,
    /// Last token, inclusive.
    pub hi: usize,
    pub kind: SegmentKind,
    /// Present for independent clauses only.
    pub anchor: Option<ClauseAnchor>,
    pub case: Option<CaseKind>,
}

impl Segment {
    fn adjunct(lo: usize, hi: usize) -> Self {
        Segment {
            lo,
            hi,
            kind: SegmentKind::Adjunct,
            anchor: None,
            case: None,
        }
    }

    pub fn token_count(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_clause(&self) -> bool {
        self.kind == SegmentKind::IndependentClause
    }

    pub fn contains(&self, index: usize) -> bool {
        (self.lo..=self.hi).contains(&index)
    }
}

/// Non-fatal events recorded while segmenting one sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    UnorderedAnchor { head: usize },
    NonContiguousYield { head: usize, node: usize },
    CopulaExtension { head: usize },
    OverlapDropped {
        head: usize,
        span: (usize, usize),
        kept: (usize, usize),
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnorderedAnchor { head } => {
                write!(f, "anchor at {} matches no case, dropped", head)
            }
            Diagnostic::NonContiguousYield { head, node } => write!(
                f,
                "anchor at {}: subtree of {} is not contiguous, clause widened to whole sentence",
                head, node
            ),
            Diagnostic::CopulaExtension { head } => {
                write!(f, "anchor at {}: copular head, clause extended to head yield", head)
            }
            Diagnostic::OverlapDropped { head, span, kept } => write!(
                f,
                "anchor at {}: clause {}-{} overlaps kept clause {}-{}, dropped",
                head, span.0, span.1, kept.0, kept.1
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentationResult {
    pub sentence_id: String,
    pub segments: Vec<Segment>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SegmentationResult {
    pub fn clause_count(&self) -> usize {
        self.segments.iter().filter(|s| s.is_clause()).count()
    }

    /// JSON-serializable view used for segmentation reports.
    pub fn to_record(&self, sentence: &Sentence) -> SegmentRecord {
        SegmentRecord {
            id: self.sentence_id.clone(),
            text: sentence.text(),
            segments: self
                .segments
                .iter()
                .map(|s| SegmentEntry {
                    lo: s.lo,
                    hi: s.hi,
                    kind: s.kind,
                    case: s.case,
                })
                .collect(),
            diagnostics: self.diagnostics.iter().map(|d| d.to_string()).collect(),
        }
    }
}

/// One line of a segmentation report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub id: String,
    pub text: String,
    pub segments: Vec<SegmentEntry>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentEntry {
    pub lo: usize,
    pub hi: usize,
    pub kind: SegmentKind,
    pub case: Option<CaseKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("anchor at {head}: subject/object order matches no case")]
    UnorderedAnchor { head: usize },
    #[error("anchor at {head}: subtree of {node} has a gap")]
    NonContiguousYield { head: usize, node: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmenterConfig {
    /// Relations of head dependents that extend a subject-head clause to
    /// the right.
    pub right_extension: Vec<String>,
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        SegmenterConfig {
            right_extension: ["amod", "advmod", "acomp", "attr"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

/// One anchor per head with a subject and/or object child, ordered by head.
pub fn find_anchors(graph: &DepGraph<'_>) -> Vec<ClauseAnchor> {
    (1..=graph.len())
        .filter_map(|head| {
            let subject = graph.children_by_rel(head, Some(SUBJECT)).ok()?.first().copied();
            let object = graph.children_by_rel(head, Some(OBJECT)).ok()?.first().copied();
            (subject.is_some() || object.is_some()).then_some(ClauseAnchor {
                head,
                subject,
                object,
            })
        })
        .collect()
}

pub fn classify_case(anchor: &ClauseAnchor) -> Result<CaseKind, SegmentError> {
    let head = anchor.head;
    match (anchor.subject, anchor.object) {
        (Some(s), Some(o)) if s < head && head < o => Ok(CaseKind::Case1),
        (Some(s), None) if s < head => Ok(CaseKind::Case2),
        (Some(s), _) if head < s => Ok(CaseKind::Case3),
        (None, Some(o)) if head < o => Ok(CaseKind::Case4),
        _ => Err(SegmentError::UnorderedAnchor { head }),
    }
}

fn contiguous(graph: &DepGraph<'_>, head: usize, node: usize) -> Result<(), SegmentError> {
    if graph.is_contiguous_subtree(node).unwrap_or(false) {
        Ok(())
    } else {
        Err(SegmentError::NonContiguousYield { head, node })
    }
}

fn span(graph: &DepGraph<'_>, node: usize) -> (usize, usize) {
    graph.subtree_span(node).expect("anchor nodes are in range")
}

fn has_copula(graph: &DepGraph<'_>, head: usize) -> bool {
    graph
        .children_by_rel(head, Some("cop"))
        .map(|c| !c.is_empty())
        .unwrap_or(false)
}

/// Token span of the clause around a classified anchor.
pub fn clause_span(
    graph: &DepGraph<'_>,
    anchor: &ClauseAnchor,
    kind: CaseKind,
    config: &SegmenterConfig,
) -> Result<(usize, usize), SegmentError> {
    let head = anchor.head;
    let missing = || SegmentError::UnorderedAnchor { head };
    let leftmost_preceding_dependent = || {
        graph
            .children_by_rel(head, None)
            .ok()
            .and_then(|c| c.first().copied())
            .filter(|&d| d < head)
            .unwrap_or(head)
    };

    match kind {
        CaseKind::Case1 => {
            let subject = anchor.subject.ok_or_else(missing)?;
            let object = anchor.object.ok_or_else(missing)?;
            contiguous(graph, head, subject)?;
            Ok((span(graph, subject).0, object))
        }
        CaseKind::Case2 => {
            let subject = anchor.subject.ok_or_else(missing)?;
            contiguous(graph, head, subject)?;
            let mut hi = head;
            for (rel, child) in graph.children(head).expect("head in range") {
                let (lo, child_hi) = span(graph, child);
                if lo >= head && config.right_extension.iter().any(|r| rel_matches(rel, r)) {
                    hi = hi.max(child_hi);
                }
            }
            if has_copula(graph, head) {
                hi = hi.max(span(graph, head).1);
            }
            Ok((span(graph, subject).0, hi))
        }
        CaseKind::Case3 => {
            let subject = anchor.subject.ok_or_else(missing)?;
            contiguous(graph, head, subject)?;
            Ok((leftmost_preceding_dependent(), head.max(span(graph, subject).1)))
        }
        CaseKind::Case4 => {
            let object = anchor.object.ok_or_else(missing)?;
            contiguous(graph, head, object)?;
            Ok((leftmost_preceding_dependent(), span(graph, object).1))
        }
    }
}

/// Segments a sentence with the default configuration.
pub fn extract_segments(graph: &DepGraph<'_>) -> SegmentationResult {
    extract_segments_with(graph, &SegmenterConfig::default())
}

pub fn extract_segments_with(graph: &DepGraph<'_>, config: &SegmenterConfig) -> SegmentationResult {
    let sentence = graph.sentence();
    let n = graph.len();
    let mut diagnostics = Vec::new();

    struct Candidate {
        lo: usize,
        hi: usize,
        anchor: ClauseAnchor,
        kind: CaseKind,
    }

    let mut candidates = Vec::new();
    if n > 1 {
        for anchor in find_anchors(graph) {
            let kind = match classify_case(&anchor) {
                Ok(kind) => kind,
                Err(_) => {
                    diagnostics.push(Diagnostic::UnorderedAnchor { head: anchor.head });
                    continue;
                }
            };
            let (lo, hi) = match clause_span(graph, &anchor, kind, config) {
                Ok(span) => span,
                Err(SegmentError::NonContiguousYield { head, node }) => {
                    diagnostics.push(Diagnostic::NonContiguousYield { head, node });
                    (1, n)
                }
                Err(SegmentError::UnorderedAnchor { head }) => {
                    diagnostics.push(Diagnostic::UnorderedAnchor { head });
                    continue;
                }
            };
            if kind == CaseKind::Case2 && has_copula(graph, anchor.head) {
                diagnostics.push(Diagnostic::CopulaExtension { head: anchor.head });
            }
            candidates.push(Candidate {
                lo,
                hi,
                anchor,
                kind,
            });
        }
    }

    // Earlier start wins; on equal starts the longer span wins.
    candidates.sort_by_key(|c| (c.lo, std::cmp::Reverse(c.hi), c.anchor.head));
    let mut clauses: Vec<Candidate> = Vec::new();
    for c in candidates {
        match clauses.last() {
            Some(last) if c.lo <= last.hi => diagnostics.push(Diagnostic::OverlapDropped {
                head: c.anchor.head,
                span: (c.lo, c.hi),
                kept: (last.lo, last.hi),
            }),
            _ => clauses.push(c),
        }
    }

    let mut segments = Vec::with_capacity(2 * clauses.len() + 1);
    let mut next = 1;
    for c in clauses {
        if c.lo > next {
            segments.push(Segment::adjunct(next, c.lo - 1));
        }
        segments.push(Segment {
            lo: c.lo,
            hi: c.hi,
            kind: SegmentKind::IndependentClause,
            anchor: Some(c.anchor),
            case: Some(c.kind),
        });
        next = c.hi + 1;
    }
    if next <= n {
        segments.push(Segment::adjunct(next, n));
    }

    attach_punctuation(sentence, &mut segments);

    SegmentationResult {
        sentence_id: sentence.id.clone(),
        segments,
        diagnostics,
    }
}

/// Moves punctuation at the start of an adjunct onto the preceding segment.
/// A punctuation-only first segment is folded into the one after it.
fn attach_punctuation(sentence: &Sentence, segments: &mut Vec<Segment>) {
    let is_punct = |i: usize| sentence.token(i).is_some_and(|t| t.is_punct());

    let mut i = 1;
    while i < segments.len() {
        if segments[i].kind == SegmentKind::Adjunct {
            while segments[i].lo <= segments[i].hi && is_punct(segments[i].lo) {
                segments[i].lo += 1;
                segments[i - 1].hi += 1;
            }
            if segments[i].lo > segments[i].hi {
                segments.remove(i);
                continue;
            }
        }
        i += 1;
    }

    if segments.len() > 1 && segments[0].kind == SegmentKind::Adjunct {
        let first = &segments[0];
        if (first.lo..=first.hi).all(is_punct) {
            let lo = first.lo;
            segments.remove(0);
            segments[0].lo = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_graph, Token};

    fn sentence(arcs: &[(&str, &str, usize, &str)]) -> Sentence {
        let tokens = arcs
            .iter()
            .enumerate()
            .map(|(i, &(form, upos, head, rel))| Token::new(i + 1, form, upos, head, rel))
            .collect();
        Sentence::new("t", tokens).unwrap()
    }

    fn spans(result: &SegmentationResult) -> Vec<(usize, usize, SegmentKind)> {
        result.segments.iter().map(|s| (s.lo, s.hi, s.kind)).collect()
    }

    fn anchor(head: usize, subject: Option<usize>, object: Option<usize>) -> ClauseAnchor {
        ClauseAnchor {
            head,
            subject,
            object,
        }
    }

    #[test]
    fn case_classification() {
        assert_eq!(classify_case(&anchor(5, Some(2), Some(6))), Ok(CaseKind::Case1));
        assert_eq!(classify_case(&anchor(3, Some(2), None)), Ok(CaseKind::Case2));
        assert_eq!(classify_case(&anchor(2, Some(5), None)), Ok(CaseKind::Case3));
        assert_eq!(classify_case(&anchor(2, Some(5), Some(7))), Ok(CaseKind::Case3));
        assert_eq!(classify_case(&anchor(1, None, Some(2))), Ok(CaseKind::Case4));
    }

    #[test]
    fn unordered_anchors() {
        // fronted object with a preceding subject
        assert_eq!(
            classify_case(&anchor(5, Some(3), Some(1))),
            Err(SegmentError::UnorderedAnchor { head: 5 })
        );
        // fronted object, no subject
        assert_eq!(
            classify_case(&anchor(4, None, Some(2))),
            Err(SegmentError::UnorderedAnchor { head: 4 })
        );
    }

    #[test]
    fn anchor_free_fragment_is_one_adjunct() {
        let s = sentence(&[
            ("in", "ADP", 3, "case"),
            ("the", "DET", 3, "det"),
            ("morning", "NOUN", 0, "root"),
        ]);
        let g = build_graph(&s);
        assert!(find_anchors(&g).is_empty());
        assert_eq!(spans(&extract_segments(&g)), vec![(1, 3, SegmentKind::Adjunct)]);
    }

    #[test]
    fn single_token_sentence() {
        let s = sentence(&[("Yes", "INTJ", 0, "root")]);
        let r = extract_segments(&build_graph(&s));
        assert_eq!(spans(&r), vec![(1, 1, SegmentKind::Adjunct)]);
    }

    #[test]
    fn leftmost_subject_is_chosen() {
        // "cats and dogs eat fish": two nsubj children when conj is mislabeled
        let s = sentence(&[
            ("cats", "NOUN", 4, "nsubj"),
            ("and", "CCONJ", 3, "cc"),
            ("dogs", "NOUN", 4, "nsubj"),
            ("eat", "VERB", 0, "root"),
            ("fish", "NOUN", 4, "obj"),
        ]);
        let anchors = find_anchors(&build_graph(&s));
        assert_eq!(anchors, vec![anchor(4, Some(1), Some(5))]);
    }

    #[test]
    fn trailing_punctuation_joins_previous_segment() {
        // "He ate rice , quickly ." with the comma opening an adjunct
        let s = sentence(&[
            ("He", "PRON", 2, "nsubj"),
            ("ate", "VERB", 0, "root"),
            ("rice", "NOUN", 2, "obj"),
            (",", "PUNCT", 5, "punct"),
            ("quickly", "ADV", 2, "advmod"),
            (".", "PUNCT", 2, "punct"),
        ]);
        let r = extract_segments(&build_graph(&s));
        assert_eq!(
            spans(&r),
            vec![
                (1, 4, SegmentKind::IndependentClause),
                (5, 6, SegmentKind::Adjunct)
            ]
        );
    }

    #[test]
    fn punctuation_only_adjunct_is_absorbed() {
        let s = sentence(&[
            ("He", "PRON", 2, "nsubj"),
            ("ate", "VERB", 0, "root"),
            ("rice", "NOUN", 2, "obj"),
            ("!", "PUNCT", 2, "punct"),
        ]);
        let r = extract_segments(&build_graph(&s));
        assert_eq!(spans(&r), vec![(1, 4, SegmentKind::IndependentClause)]);
    }

    #[test]
    fn leading_punctuation_joins_first_segment() {
        let s = sentence(&[
            ("\"", "PUNCT", 3, "punct"),
            ("He", "PRON", 3, "nsubj"),
            ("ran", "VERB", 0, "root"),
        ]);
        let r = extract_segments(&build_graph(&s));
        // The clause starts at the subject; the quote is folded into it.
        assert_eq!(spans(&r), vec![(1, 3, SegmentKind::IndependentClause)]);
    }

    #[test]
    fn non_projective_subject_falls_back_to_whole_sentence() {
        // subject "a" (1) governs "c" (3) across the head "b" (2)
        let s = sentence(&[
            ("a", "NOUN", 2, "nsubj"),
            ("b", "VERB", 0, "root"),
            ("c", "ADJ", 1, "amod"),
            ("d", "NOUN", 2, "obl"),
        ]);
        let r = extract_segments(&build_graph(&s));
        assert_eq!(spans(&r), vec![(1, 4, SegmentKind::IndependentClause)]);
        assert!(r
            .diagnostics
            .contains(&Diagnostic::NonContiguousYield { head: 2, node: 1 }));
    }

    #[test]
    fn overlapping_clauses_keep_earliest() {
        // "I think he left": think(2) anchor spans 1..2 (Case2), left(4)
        // anchor spans 3..4; no overlap. Make the first clause swallow the
        // second via a ccomp in the extension set.
        let s = sentence(&[
            ("I", "PRON", 2, "nsubj"),
            ("think", "VERB", 0, "root"),
            ("he", "PRON", 4, "nsubj"),
            ("left", "VERB", 2, "ccomp"),
        ]);
        let g = build_graph(&s);
        let plain = extract_segments(&g);
        assert_eq!(
            spans(&plain),
            vec![
                (1, 2, SegmentKind::IndependentClause),
                (3, 4, SegmentKind::IndependentClause)
            ]
        );

        let mut config = SegmenterConfig::default();
        config.right_extension.push("ccomp".into());
        let wide = extract_segments_with(&g, &config);
        assert_eq!(spans(&wide), vec![(1, 4, SegmentKind::IndependentClause)]);
        assert!(matches!(
            wide.diagnostics.as_slice(),
            [Diagnostic::OverlapDropped { head: 4, span: (3, 4), kept: (1, 4) }]
        ));
    }

    #[test]
    fn record_shape() {
        let s = sentence(&[("He", "PRON", 2, "nsubj"), ("ran", "VERB", 0, "root")]);
        let r = extract_segments(&build_graph(&s));
        let json = serde_json::to_string(&r.to_record(&s)).unwrap();
        assert_eq!(
            json,
            r#"{"id":"t","text":"He ran","segments":[{"lo":1,"hi":2,"kind":"independent_clause","case":"case2"}],"diagnostics":[]}"#
        );
    }
}
