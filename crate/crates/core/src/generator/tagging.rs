use std::collections::HashSet;
use std::io::BufRead;

use crate::lang::{Lang, LangCode};

/// Where a token came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance<'a> {
    /// Copied from the English source.
    Untouched,
    /// Produced by translating a segment into `target`. `passthrough` is set
    /// when the form also occurs in the segment's source text.
    Translated { target: &'a LangCode, passthrough: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Script {
    Latin,
    Devanagari,
    Bengali,
    Gurmukhi,
    Gujarati,
    Oriya,
    Tamil,
    Telugu,
    Kannada,
    Malayalam,
}

impl Script {
    fn of(c: char) -> Option<Script> {
        let script = match c as u32 {
            0x0041..=0x005A | 0x0061..=0x007A | 0x00C0..=0x024F | 0x1E00..=0x1EFF => Script::Latin,
            0x0900..=0x097F | 0xA8E0..=0xA8FF => Script::Devanagari,
            0x0980..=0x09FF => Script::Bengali,
            0x0A00..=0x0A7F => Script::Gurmukhi,
            0x0A80..=0x0AFF => Script::Gujarati,
            0x0B00..=0x0B7F => Script::Oriya,
            0x0B80..=0x0BFF => Script::Tamil,
            0x0C00..=0x0C7F => Script::Telugu,
            0x0C80..=0x0CFF => Script::Kannada,
            0x0D00..=0x0D7F => Script::Malayalam,
            _ => return None,
        };
        Some(script)
    }

    /// Language assumed for this script when the context gives no better
    /// answer.
    fn default_lang(self) -> Option<&'static str> {
        match self {
            Script::Latin => None,
            Script::Devanagari => Some("hin"),
            Script::Bengali => Some("ben"),
            Script::Gurmukhi => Some("pan"),
            Script::Gujarati => Some("guj"),
            Script::Oriya => Some("ory"),
            Script::Tamil => Some("tam"),
            Script::Telugu => Some("tel"),
            Script::Kannada => Some("kan"),
            Script::Malayalam => Some("mal"),
        }
    }

    fn for_lang(code: &LangCode) -> Option<Script> {
        let script = match code.as_str() {
            "hin" | "mar" | "nep" | "san" | "kok" | "mai" => Script::Devanagari,
            "ben" | "asm" => Script::Bengali,
            "pan" => Script::Gurmukhi,
            "guj" => Script::Gujarati,
            "ori" | "ory" => Script::Oriya,
            "tam" => Script::Tamil,
            "tel" => Script::Telugu,
            "kan" => Script::Kannada,
            "mal" => Script::Malayalam,
            _ => return None,
        };
        Some(script)
    }
}

/// Script with the most letters in `form`; Latin wins ties.
fn dominant_script(form: &str) -> Option<Script> {
    let mut counts: Vec<(Script, usize)> = Vec::new();
    for script in form.chars().filter_map(Script::of) {
        match counts.iter_mut().find(|(s, _)| *s == script) {
            Some((_, n)) => *n += 1,
            None => counts.push((script, 1)),
        }
    }
    let latin = counts
        .iter()
        .find(|(s, _)| *s == Script::Latin)
        .map_or(0, |(_, n)| *n);
    counts
        .into_iter()
        .filter(|&(s, n)| s != Script::Latin && n > latin)
        .max_by_key(|&(_, n)| n)
        .map(|(s, _)| s)
        .or((latin > 0).then_some(Script::Latin))
}

/// Assigns language tags to surface forms.
#[derive(Clone, Debug, Default)]
pub struct Tagger {
    other_forms: HashSet<String>,
}

impl Tagger {
    pub fn new() -> Self {
        Tagger::default()
    }

    /// Forms (matched case-insensitively) that are always language
    /// independent: proper nouns, URLs, brand names.
    pub fn with_other_forms<I, S>(mut self, forms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.other_forms
            .extend(forms.into_iter().map(|f| f.as_ref().to_lowercase()));
        self
    }

    /// Reads one form per line; blank lines and `#` comments are ignored.
    pub fn read_other_forms<R: BufRead>(self, input: R) -> std::io::Result<Self> {
        let mut forms = Vec::new();
        for line in input.lines() {
            let line = line?;
            let form = line.trim();
            if !form.is_empty() && !form.starts_with('#') {
                forms.push(form.to_owned());
            }
        }
        Ok(self.with_other_forms(forms))
    }

    pub fn other_forms(&self) -> usize {
        self.other_forms.len()
    }

    /// Tag for one form, by the first matching rule:
    ///
    /// 1. no letters at all (punctuation, digits), or listed as an other
    ///    form → `Other`;
    /// 2. mostly written in an Indic script → that language (the target's
    ///    code when the script matches it);
    /// 3. Latin script copied through a translated segment → `Eng`;
    /// 4. `Eng` for untouched tokens, the target language for translated
    ///    ones.
    pub fn tag(&self, form: &str, provenance: Provenance<'_>) -> Lang {
        if !form.chars().any(char::is_alphabetic) || self.other_forms.contains(&form.to_lowercase()) {
            return Lang::Other;
        }

        let target = match provenance {
            Provenance::Translated { target, .. } => Some(target),
            Provenance::Untouched => None,
        };
        let script = dominant_script(form);
        if let Some(script) = script.filter(|s| *s != Script::Latin) {
            if let Some(target) = target.filter(|t| Script::for_lang(t) == Some(script)) {
                return Lang::native(target);
            }
            if let Some(code) = script.default_lang() {
                return Lang::Native(LangCode::new(code).expect("static code is valid"));
            }
        }

        match provenance {
            Provenance::Translated {
                passthrough: true, ..
            } if script == Some(Script::Latin) => Lang::Eng,
            Provenance::Translated { target, .. } => Lang::native(target),
            Provenance::Untouched => Lang::Eng,
        }
    }
}

/// Tags `form` with a tagger that has no other-lexicon.
pub fn tag_token_language(form: &str, provenance: Provenance<'_>) -> Lang {
    Tagger::new().tag(form, provenance)
}
