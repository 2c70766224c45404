//! Language codes and per-token language tags.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid language code {0:?}: expected 2-8 lowercase ASCII letters")]
pub struct InvalidLangCode(pub String);

/// ISO 639-style language code such as `eng`, `hin`, `kan` or `mar`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LangCode(String);

impl LangCode {
    pub fn new(code: &str) -> Result<Self, InvalidLangCode> {
        let valid = (2..=8).contains(&code.len()) && code.bytes().all(|b| b.is_ascii_lowercase());
        if valid && code != "other" {
            Ok(LangCode(code.to_owned()))
        } else {
            Err(InvalidLangCode(code.to_owned()))
        }
    }

    /// English, the language every source sentence is written in.
    pub fn eng() -> Self {
        LangCode("eng".to_owned())
    }

    pub fn is_eng(&self) -> bool {
        self.0 == "eng"
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LangCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for LangCode {
    type Err = InvalidLangCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LangCode::new(s)
    }
}

impl Serialize for LangCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for LangCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        LangCode::new(&s).map_err(serde::de::Error::custom)
    }
}

/// Language class of a single token.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lang {
    Eng,
    Native(LangCode),
    /// Language-independent: punctuation, numbers, proper nouns, URLs.
    Other,
}

impl Lang {
    pub fn is_other(&self) -> bool {
        matches!(self, Lang::Other)
    }

    pub fn native(code: &LangCode) -> Self {
        if code.is_eng() {
            Lang::Eng
        } else {
            Lang::Native(code.clone())
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lang::Eng => f.write_str("eng"),
            Lang::Native(code) => f.write_str(code.as_str()),
            Lang::Other => f.write_str("other"),
        }
    }
}

impl FromStr for Lang {
    type Err = InvalidLangCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eng" => Ok(Lang::Eng),
            "other" => Ok(Lang::Other),
            code => LangCode::new(code).map(Lang::Native),
        }
    }
}

impl Serialize for Lang {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Lang {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A surface form with its language tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenTag {
    pub form: String,
    pub lang: Lang,
}

impl TokenTag {
    pub fn new(form: impl Into<String>, lang: Lang) -> Self {
        TokenTag {
            form: form.into(),
            lang,
        }
    }
}

/// A `form/lang` token that could not be read.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("token {token:?} is not form/lang: {reason}")]
pub struct TagParseError {
    pub token: String,
    pub reason: String,
}

/// Parses whitespace-separated `form/lang` pairs (`ladka/hin is/eng ./other`).
/// The language follows the last slash, so forms may contain slashes.
pub fn parse_tagged(line: &str) -> Result<Vec<TokenTag>, TagParseError> {
    line.split_whitespace()
        .map(|pair| {
            let error = |reason: &str| TagParseError {
                token: pair.to_owned(),
                reason: reason.to_owned(),
            };
            let (form, lang) = pair
                .rsplit_once('/')
                .filter(|(f, _)| !f.is_empty())
                .ok_or_else(|| error("missing form or language"))?;
            let lang: Lang = lang.parse().map_err(|e: InvalidLangCode| error(&e.to_string()))?;
            Ok(TokenTag::new(form, lang))
        })
        .collect()
}

/// Anything carrying a language tag; lets the metrics run over bare tag
/// sequences as well as tagged tokens.
pub trait Tagged {
    fn lang(&self) -> &Lang;
}

impl Tagged for Lang {
    fn lang(&self) -> &Lang {
        self
    }
}

impl Tagged for TokenTag {
    fn lang(&self) -> &Lang {
        &self.lang
    }
}

impl<T: Tagged> Tagged for &T {
    fn lang(&self) -> &Lang {
        (**self).lang()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes() {
        assert!(LangCode::new("hin").is_ok());
        assert!(LangCode::new("").is_err());
        assert!(LangCode::new("Hin").is_err());
        assert!(LangCode::new("other").is_err());
        assert!(LangCode::eng().is_eng());
    }

    #[test]
    fn lang_strings() {
        for s in ["eng", "hin", "kan", "mar", "other"] {
            let lang: Lang = s.parse().unwrap();
            assert_eq!(lang.to_string(), s);
            let json = serde_json::to_string(&lang).unwrap();
            assert_eq!(serde_json::from_str::<Lang>(&json).unwrap(), lang);
        }
        assert_eq!(Lang::native(&LangCode::eng()), Lang::Eng);
    }

    #[test]
    fn tagged_text() {
        let tags = parse_tagged("ladka/hin http://x/eng ./other").unwrap();
        assert_eq!(tags[0], TokenTag::new("ladka", Lang::native(&LangCode::new("hin").unwrap())));
        assert_eq!(tags[1].form, "http://x");
        assert_eq!(tags[2].lang, Lang::Other);
        assert!(parse_tagged("").unwrap().is_empty());
        assert!(parse_tagged("word").is_err());
        assert!(parse_tagged("/eng").is_err());
        assert!(parse_tagged("w/ENG").is_err());
    }
}
