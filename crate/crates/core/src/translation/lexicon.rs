use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

use super::{LangCode, TranslationBackend, TranslationError, TranslationRequest};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("lexicon line {line}: expected `english<TAB>native`")]
    Malformed { line: usize },
    #[error("lexicon: empty phrase")]
    EmptyPhrase,
    #[error("lexicon: duplicate entry for {0:?}")]
    Duplicate(String),
}

/// English phrase → native phrase table, keyed by case-folded,
/// single-spaced English text.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: HashMap<String, String>,
    max_phrase_len: usize,
}

fn normalize(phrase: &str) -> String {
    phrase
        .split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

impl Lexicon {
    pub fn from_pairs<'a, I>(pairs: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut lexicon = Lexicon::default();
        for (english, native) in pairs {
            lexicon.insert(english, native)?;
        }
        Ok(lexicon)
    }

    /// Reads `english<TAB>native` lines; blank lines and `#` comments are
    /// skipped.
    pub fn from_tsv<R: BufRead>(input: R) -> Result<Self, LexiconError> {
        let mut lexicon = Lexicon::default();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (english, native) = line
                .split_once('\t')
                .ok_or(LexiconError::Malformed { line: lineno + 1 })?;
            lexicon.insert(english, native).map_err(|e| match e {
                LexiconError::EmptyPhrase => LexiconError::Malformed { line: lineno + 1 },
                e => e,
            })?;
        }
        Ok(lexicon)
    }

    pub fn insert(&mut self, english: &str, native: &str) -> Result<(), LexiconError> {
        let key = normalize(english);
        let value = native.split_whitespace().collect::<Vec<_>>().join(" ");
        if key.is_empty() || value.is_empty() {
            return Err(LexiconError::EmptyPhrase);
        }
        let words = key.split(' ').count();
        if self.entries.contains_key(&key) {
            return Err(LexiconError::Duplicate(key));
        }
        self.entries.insert(key, value);
        self.max_phrase_len = self.max_phrase_len.max(words);
        Ok(())
    }

    pub fn get(&self, phrase: &str) -> Option<&str> {
        self.entries.get(&normalize(phrase)).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest key, in words.
    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    pub fn translate(&self, text: &str) -> String {
        lexicon_translate(self, text)
    }
}

/// Greedy longest-match replacement, left to right. At each position the
/// longest window (up to the longest lexicon key) whose case-folded text is
/// a key is replaced; unmatched tokens are copied unchanged.
pub fn lexicon_translate(lexicon: &Lexicon, text: &str) -> String {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let folded: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
    let mut out: Vec<&str> = Vec::with_capacity(tokens.len());

    let mut i = 0;
    while i < tokens.len() {
        let longest = lexicon.max_phrase_len.min(tokens.len() - i);
        let hit = (1..=longest).rev().find_map(|w| {
            let key = folded[i..i + w].join(" ");
            lexicon.entries.get(&key).map(|v| (w, v.as_str()))
        });
        match hit {
            Some((w, native)) => {
                out.push(native);
                i += w;
            }
            None => {
                out.push(tokens[i]);
                i += 1;
            }
        }
    }
    out.join(" ")
}

/// Offline backend for one English → native pair.
#[derive(Clone, Debug)]
pub struct LexiconBackend {
    lexicon: Lexicon,
    target: LangCode,
}

impl LexiconBackend {
    pub fn new(lexicon: Lexicon, target: LangCode) -> Self {
        LexiconBackend { lexicon, target }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }
}

impl TranslationBackend for LexiconBackend {
    fn name(&self) -> &str {
        "lexicon"
    }

    fn translate_text(&self, request: &TranslationRequest) -> Result<String, TranslationError> {
        if !request.source.is_eng() || request.target != self.target {
            return Err(TranslationError::UnsupportedPair {
                backend: self.name().to_owned(),
                source_lang: request.source.clone(),
                target: request.target.clone(),
            });
        }
        Ok(lexicon_translate(&self.lexicon, &request.text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn longest_match_wins() {
        let lex = Lexicon::from_pairs([("in the car", "gaadi mein"), ("car", "gaadi")]).unwrap();
        assert_eq!(lex.translate("in the car"), "gaadi mein");
        assert_eq!(lex.translate("the car"), "the gaadi");
        assert_eq!(lex.max_phrase_len(), 3);
    }

    #[test]
    fn empty_input() {
        let lex = Lexicon::from_pairs([("car", "gaadi")]).unwrap();
        assert_eq!(lex.translate(""), "");
        assert_eq!(Lexicon::default().translate(""), "");
    }

    #[test]
    fn partial_phrase_hit() {
        let lex = Lexicon::from_pairs([("holy river", "pavitra nadi")]).unwrap();
        assert_eq!(lex.translate("a holy river"), "a pavitra nadi");
    }

    #[test]
    fn case_folding_keeps_passthrough_casing() {
        let lex = Lexicon::from_pairs([("the ganga", "ganga")]).unwrap();
        assert_eq!(lex.translate("The Ganga is HOLY"), "ganga is HOLY");
        assert_eq!(lex.get("THE   Ganga"), Some("ganga"));
    }

    #[test]
    fn tsv_parsing() {
        let tsv = "# comment\nholy river\tpavitra nadi\n\ncar\tgaadi\n";
        let lex = Lexicon::from_tsv(tsv.as_bytes()).unwrap();
        assert_eq!(lex.len(), 2);
        assert!(matches!(
            Lexicon::from_tsv("car gaadi\n".as_bytes()),
            Err(LexiconError::Malformed { line: 1 })
        ));
        assert!(matches!(
            Lexicon::from_tsv("car\t \n".as_bytes()),
            Err(LexiconError::Malformed { line: 1 })
        ));
        assert!(matches!(
            Lexicon::from_tsv("car\tgaadi\nCar\tgadi\n".as_bytes()),
            Err(LexiconError::Duplicate(_))
        ));
    }

    #[test]
    fn backend_rejects_other_pairs() {
        let backend = LexiconBackend::new(Lexicon::default(), LangCode::new("hin").unwrap());
        let kan = LangCode::new("kan").unwrap();
        let request = TranslationRequest::from_english("hello", &kan).unwrap();
        assert!(matches!(
            backend.translate_text(&request),
            Err(TranslationError::UnsupportedPair { .. })
        ));
    }
}
