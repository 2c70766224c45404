//! Segment translation.
//!
//! A [`TranslationBackend`] turns segment text into target-language text.
//! Two backends ship: a deterministic [`LexiconBackend`] and, with the
//! `http` feature, an [`HttpBackend`] speaking a small JSON protocol. Either
//! can be wrapped in a [`CachedBackend`] backed by an on-disk log.

mod cache;
#[cfg(feature = "http")]
mod http;
mod lexicon;

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

pub use crate::lang::LangCode;
use crate::generator::{Provenance, Tagger};
use crate::lang::TokenTag;

pub use cache::{cached, CacheStore, CachedBackend, StoreError};
#[cfg(feature = "http")]
pub use http::{HttpBackend, RetryPolicy, ENV_MT_KEY, ENV_MT_URL};
pub use lexicon::{lexicon_translate, Lexicon, LexiconBackend, LexiconError};

#[derive(Debug, Error)]
pub enum TranslationError {
    #[error("translation backend {backend} unavailable: {reason}")]
    BackendUnavailable { backend: String, reason: String },

    #[error("backend {backend} does not support {source_lang} -> {target}")]
    UnsupportedPair {
        backend: String,
        source_lang: LangCode,
        target: LangCode,
    },

    #[error("invalid translation request: {0}")]
    InvalidRequest(String),

    #[error("backend {backend} returned an empty translation for {text:?}")]
    EmptyOutput { backend: String, text: String },

    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TranslationRequest {
    pub text: String,
    pub source: LangCode,
    pub target: LangCode,
}

impl TranslationRequest {
    pub fn new(
        text: impl Into<String>,
        source: LangCode,
        target: LangCode,
    ) -> Result<Self, TranslationError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(TranslationError::InvalidRequest("empty text".into()));
        }
        if source == target {
            return Err(TranslationError::InvalidRequest(format!(
                "source and target are both {}",
                source
            )));
        }
        Ok(TranslationRequest {
            text,
            source,
            target,
        })
    }

    /// English to `target`.
    pub fn from_english(text: impl Into<String>, target: &LangCode) -> Result<Self, TranslationError> {
        Self::new(text, LangCode::eng(), target.clone())
    }
}

/// Output of one segment translation, tokenized and tagged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslatedSegment {
    /// The text that was translated.
    pub source: String,
    pub tokens: Vec<TokenTag>,
    pub backend_name: String,
}

pub trait TranslationBackend: Send + Sync {
    fn name(&self) -> &str;

    /// Raw translated text for one request.
    fn translate_text(&self, request: &TranslationRequest) -> Result<String, TranslationError>;
}

impl<B: TranslationBackend + ?Sized> TranslationBackend for &B {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn translate_text(&self, request: &TranslationRequest) -> Result<String, TranslationError> {
        (**self).translate_text(request)
    }
}

impl<B: TranslationBackend + ?Sized> TranslationBackend for Box<B> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn translate_text(&self, request: &TranslationRequest) -> Result<String, TranslationError> {
        (**self).translate_text(request)
    }
}

impl<B: TranslationBackend + ?Sized> TranslationBackend for Arc<B> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn translate_text(&self, request: &TranslationRequest) -> Result<String, TranslationError> {
        (**self).translate_text(request)
    }
}

/// Translates one segment and tags the whitespace-separated output tokens.
///
/// Latin-script output tokens that also occur in the source text count as
/// passed through untranslated.
pub fn translate<B: TranslationBackend + ?Sized>(
    backend: &B,
    tagger: &Tagger,
    request: &TranslationRequest,
) -> Result<TranslatedSegment, TranslationError> {
    let output = backend.translate_text(request)?;
    let source_forms: HashSet<String> = request
        .text
        .split_whitespace()
        .map(str::to_lowercase)
        .collect();
    let tokens: Vec<TokenTag> = output
        .split_whitespace()
        .map(|form| {
            let passthrough = source_forms.contains(&form.to_lowercase());
            let lang = tagger.tag(
                form,
                Provenance::Translated {
                    target: &request.target,
                    passthrough,
                },
            );
            TokenTag::new(form, lang)
        })
        .collect();
    if tokens.is_empty() {
        return Err(TranslationError::EmptyOutput {
            backend: backend.name().to_owned(),
            text: request.text.clone(),
        });
    }
    Ok(TranslatedSegment {
        source: request.text.clone(),
        tokens,
        backend_name: backend.name().to_owned(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::Lang;

    fn hin() -> LangCode {
        LangCode::new("hin").unwrap()
    }

    #[test]
    fn request_validation() {
        assert!(TranslationRequest::from_english("hello", &hin()).is_ok());
        assert!(TranslationRequest::from_english("  ", &hin()).is_err());
        assert!(TranslationRequest::new("x", hin(), hin()).is_err());
    }

    #[test]
    fn lexicon_hit_is_tagged_native() {
        let lexicon = Lexicon::from_pairs([(
            "the cute boy is eating ice-cream",
            "sundar ladka ice-cream kha raha hai",
        )])
        .unwrap();
        let backend = LexiconBackend::new(lexicon, hin());
        let tagger = Tagger::new().with_other_forms(["ice-cream"]);
        let request =
            TranslationRequest::from_english("The cute boy is eating ice-cream", &hin()).unwrap();
        let out = translate(&backend, &tagger, &request).unwrap();
        let langs: Vec<String> = out.tokens.iter().map(|t| t.lang.to_string()).collect();
        assert_eq!(langs, ["hin", "hin", "other", "hin", "hin", "hin"]);
        assert_eq!(out.backend_name, "lexicon");
    }

    #[test]
    fn lexicon_miss_passes_english_through() {
        let backend = LexiconBackend::new(Lexicon::default(), hin());
        let request = TranslationRequest::from_english("in the car", &hin()).unwrap();
        let out = translate(&backend, &Tagger::new(), &request).unwrap();
        assert_eq!(out.tokens.len(), 3);
        assert!(out.tokens.iter().all(|t| t.lang == Lang::Eng));
    }

    #[test]
    fn devanagari_output_is_native() {
        let lexicon = Lexicon::from_pairs([("in the car", "गाड़ी में")]).unwrap();
        let backend = LexiconBackend::new(lexicon, hin());
        let request = TranslationRequest::from_english("in the car", &hin()).unwrap();
        let out = translate(&backend, &Tagger::new(), &request).unwrap();
        assert_eq!(out.tokens.len(), 2);
        assert!(out.tokens.iter().all(|t| t.lang == Lang::Native(hin())));
    }
}
