//! Variant generation.
//!
//! A variant is one rendering of a sentence in which each segment is either
//! kept in English or replaced by its translation. Which segments are
//! translated is recorded as a mask with one bit per segment, the first
//! segment being the most significant bit.

mod tagging;

use std::cmp::Ordering;
use std::num::NonZeroUsize;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use tagging::{tag_token_language, Provenance, Tagger};

use crate::corpus::{build_graph, Sentence};
use crate::lang::{LangCode, TokenTag};
use crate::metrics::{cmi_utterance, i_index};
use crate::segmenter::{extract_segments_with, SegmentationResult, SegmenterConfig};
use crate::translation::{translate, TranslationBackend, TranslationError, TranslationRequest};

/// Upper bound on translatable segments per sentence (2^20 variants).
pub const MAX_TRANSLATABLE_SEGMENTS: usize = 20;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Translation(#[from] TranslationError),
    #[error("sentence {sentence}: mask has {found} bits, expected {expected}")]
    MaskLength {
        sentence: String,
        expected: usize,
        found: usize,
    },
    #[error("sentence {sentence}: {count} translatable segments exceeds the limit of {limit}")]
    TooManySegments {
        sentence: String,
        count: usize,
        limit: usize,
    },
    #[error("segmentation of {segmentation} does not belong to sentence {sentence}")]
    SentenceMismatch {
        sentence: String,
        segmentation: String,
    },
}

/// One code-switched rendering of a sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct Variant {
    pub sentence_id: String,
    pub target: LangCode,
    /// One bit per segment; `true` means translated.
    pub mask: Vec<bool>,
    pub tokens: Vec<TokenTag>,
    pub cmi: f64,
    pub i_index: f64,
    pub label: Option<String>,
}

impl Variant {
    /// Mask as a bit string, first segment first (`"10"`).
    pub fn mask_string(&self) -> String {
        mask_string(&self.mask)
    }

    pub fn translated_segments(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Tokens joined by single spaces.
    pub fn text(&self) -> String {
        self.tokens
            .iter()
            .map(|t| t.form.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_record(&self) -> VariantRecord {
        VariantRecord {
            id: self.sentence_id.clone(),
            mask: self.mask_string(),
            target: Some(self.target.clone()),
            tokens: self.tokens.clone(),
            text: self.text(),
            cmi: Some(self.cmi),
            i_index: Some(self.i_index),
            label: self.label.clone(),
        }
    }
}

pub fn mask_string(mask: &[bool]) -> String {
    mask.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// One line of a generated corpus. Only `tokens` is required when reading
/// records back; the scores are recomputed from the tags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariantRecord {
    #[serde(default)]
    pub id: String,
    #[serde(default)]
    pub mask: String,
    #[serde(default)]
    pub target: Option<LangCode>,
    pub tokens: Vec<TokenTag>,
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub cmi: Option<f64>,
    #[serde(default)]
    pub i_index: Option<f64>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every mask.
    All,
    /// The mask with the highest CMI per sentence.
    MaxCmi,
    /// The `k` highest-CMI variants of the whole corpus.
    TopK(NonZeroUsize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenerationPolicy {
    pub mode: Mode,
    /// Translate independent clauses only; adjuncts stay English.
    pub clause_only: bool,
}

impl Default for GenerationPolicy {
    fn default() -> Self {
        GenerationPolicy {
            mode: Mode::All,
            clause_only: false,
        }
    }
}

fn check_segmentation(sentence: &Sentence, seg: &SegmentationResult) -> Result<(), GenerateError> {
    if seg.sentence_id != sentence.id || seg.segments.last().map(|s| s.hi) != Some(sentence.len()) {
        return Err(GenerateError::SentenceMismatch {
            sentence: sentence.id.clone(),
            segmentation: seg.sentence_id.clone(),
        });
    }
    Ok(())
}

fn untouched(sentence: &Sentence, lo: usize, hi: usize, tagger: &Tagger) -> Vec<TokenTag> {
    sentence.tokens[lo - 1..hi]
        .iter()
        .map(|t| TokenTag::new(t.form.clone(), tagger.tag(&t.form, Provenance::Untouched)))
        .collect()
}

fn translated<B: TranslationBackend + ?Sized>(
    sentence: &Sentence,
    lo: usize,
    hi: usize,
    backend: &B,
    tagger: &Tagger,
    target: &LangCode,
) -> Result<Vec<TokenTag>, GenerateError> {
    let request = TranslationRequest::from_english(sentence.span_text(lo, hi), target)?;
    Ok(translate(backend, tagger, &request)?.tokens)
}

fn build_variant(
    sentence: &Sentence,
    target: &LangCode,
    mask: Vec<bool>,
    parts: impl IntoIterator<Item = Vec<TokenTag>>,
) -> Variant {
    let tokens: Vec<TokenTag> = parts.into_iter().flatten().collect();
    Variant {
        sentence_id: sentence.id.clone(),
        target: target.clone(),
        cmi: cmi_utterance(&tokens),
        i_index: i_index(&tokens),
        mask,
        tokens,
        label: sentence.label.clone(),
    }
}

/// Builds the variant for one mask, translating the segments whose bit is
/// set.
pub fn assemble_variant<B: TranslationBackend + ?Sized>(
    sentence: &Sentence,
    seg: &SegmentationResult,
    mask: &[bool],
    backend: &B,
    tagger: &Tagger,
    target: &LangCode,
) -> Result<Variant, GenerateError> {
    check_segmentation(sentence, seg)?;
    if mask.len() != seg.segments.len() {
        return Err(GenerateError::MaskLength {
            sentence: sentence.id.clone(),
            expected: seg.segments.len(),
            found: mask.len(),
        });
    }
    let parts = seg
        .segments
        .iter()
        .zip(mask)
        .map(|(s, &bit)| {
            if bit {
                translated(sentence, s.lo, s.hi, backend, tagger, target)
            } else {
                Ok(untouched(sentence, s.lo, s.hi, tagger))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(build_variant(sentence, target, mask.to_vec(), parts))
}

/// Orders variants for max-CMI selection: higher CMI first, then fewer
/// translated segments, then the smaller mask.
fn max_cmi_order(a: &Variant, b: &Variant) -> Ordering {
    b.cmi
        .total_cmp(&a.cmi)
        .then_with(|| a.translated_segments().cmp(&b.translated_segments()))
        .then_with(|| a.mask.cmp(&b.mask))
}

/// Enumerates the variants of one sentence for one target language.
///
/// Every subset of the translatable segments (all segments, or only the
/// independent clauses under `clause_only`) is rendered, in ascending mask
/// order. `MaxCmi` keeps the single best variant; `All` and `TopK` return
/// them all (top-k selection happens over the whole corpus, see
/// [`select_top_k`]).
pub fn enumerate_variants<B: TranslationBackend + ?Sized>(
    sentence: &Sentence,
    seg: &SegmentationResult,
    backend: &B,
    tagger: &Tagger,
    policy: &GenerationPolicy,
    target: &LangCode,
) -> Result<Vec<Variant>, GenerateError> {
    check_segmentation(sentence, seg)?;
    let translatable: Vec<usize> = seg
        .segments
        .iter()
        .enumerate()
        .filter(|(_, s)| !policy.clause_only || s.is_clause())
        .map(|(i, _)| i)
        .collect();
    let k = translatable.len();
    if k > MAX_TRANSLATABLE_SEGMENTS {
        return Err(GenerateError::TooManySegments {
            sentence: sentence.id.clone(),
            count: k,
            limit: MAX_TRANSLATABLE_SEGMENTS,
        });
    }

    let originals: Vec<Vec<TokenTag>> = seg
        .segments
        .iter()
        .map(|s| untouched(sentence, s.lo, s.hi, tagger))
        .collect();
    let mut translations: Vec<Option<Vec<TokenTag>>> = vec![None; seg.segments.len()];
    for &i in &translatable {
        let s = &seg.segments[i];
        translations[i] = Some(translated(sentence, s.lo, s.hi, backend, tagger, target)?);
    }

    let mut variants = Vec::with_capacity(1 << k);
    for m in 0..(1usize << k) {
        let mut mask = vec![false; seg.segments.len()];
        for (j, &i) in translatable.iter().enumerate() {
            mask[i] = (m >> (k - 1 - j)) & 1 == 1;
        }
        let parts = mask.iter().enumerate().map(|(i, &bit)| {
            if bit {
                translations[i].clone().expect("translatable segment was translated")
            } else {
                originals[i].clone()
            }
        });
        let parts: Vec<_> = parts.collect();
        variants.push(build_variant(sentence, target, mask, parts));
    }

    if policy.mode == Mode::MaxCmi {
        let best = variants
            .into_iter()
            .min_by(max_cmi_order)
            .expect("at least the all-English variant exists");
        return Ok(vec![best]);
    }
    Ok(variants)
}

/// The `k` variants with the highest CMI, ties broken by higher I-index and
/// then by `(sentence_id, mask)`.
pub fn select_top_k(mut variants: Vec<Variant>, k: usize) -> Vec<Variant> {
    variants.sort_by(|a, b| {
        b.cmi
            .total_cmp(&a.cmi)
            .then_with(|| b.i_index.total_cmp(&a.i_index))
            .then_with(|| a.sentence_id.cmp(&b.sentence_id))
            .then_with(|| a.mask.cmp(&b.mask))
    });
    variants.truncate(k);
    variants
}

/// Segments and generates a whole corpus for one target, sentence by
/// sentence, then applies the corpus-level part of the policy.
pub struct Generator<'a, B: ?Sized> {
    pub backend: &'a B,
    pub tagger: &'a Tagger,
    pub policy: GenerationPolicy,
    pub target: LangCode,
    pub segmenter: SegmenterConfig,
}

impl<'a, B: TranslationBackend + ?Sized> Generator<'a, B> {
    pub fn new(backend: &'a B, tagger: &'a Tagger, policy: GenerationPolicy, target: LangCode) -> Self {
        Generator {
            backend,
            tagger,
            policy,
            target,
            segmenter: SegmenterConfig::default(),
        }
    }

    pub fn sentence(&self, sentence: &Sentence) -> Result<Vec<Variant>, GenerateError> {
        let graph = build_graph(sentence);
        let seg = extract_segments_with(&graph, &self.segmenter);
        enumerate_variants(sentence, &seg, self.backend, self.tagger, &self.policy, &self.target)
    }

    /// Generates every sentence in order; under `TopK` the result is the
    /// corpus-wide selection.
    pub fn corpus<'s, I>(&self, sentences: I) -> Result<Vec<Variant>, GenerateError>
    where
        I: IntoIterator<Item = &'s Sentence>,
    {
        let mut all = Vec::new();
        for sentence in sentences {
            all.extend(self.sentence(sentence)?);
        }
        Ok(self.finish(all))
    }

    /// Applies the corpus-level selection to per-sentence output.
    pub fn finish(&self, variants: Vec<Variant>) -> Vec<Variant> {
        match self.policy.mode {
            Mode::TopK(k) => select_top_k(variants, k.get()),
            _ => variants,
        }
    }
}
