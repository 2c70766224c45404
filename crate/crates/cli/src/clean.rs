//! Tweet-style noise removal.

use std::sync::LazyLock;

use regex::Regex;

static NOISE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?:https?://|www\.)\S+|[@#][\p{L}\p{N}_]+").expect("valid pattern")
});

/// Drops @-mentions, URLs and #hashtags and collapses whitespace. Returns
/// `None` when nothing is left.
pub fn clean_line(line: &str) -> Option<String> {
    let stripped = NOISE.replace_all(line, " ");
    let cleaned = stripped.split_whitespace().collect::<Vec<_>>().join(" ");
    (!cleaned.is_empty()).then_some(cleaned)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_mentions_urls_and_hashtags() {
        assert_eq!(
            clean_line("loved it @user http://t.co/x #fun").as_deref(),
            Some("loved it")
        );
        assert_eq!(
            clean_line("see www.example.com/a?b=1 and https://x.y now").as_deref(),
            Some("see and now")
        );
    }

    #[test]
    fn url_only_line_is_dropped() {
        assert_eq!(clean_line("https://t.co/abc"), None);
        assert_eq!(clean_line("   "), None);
    }

    #[test]
    fn clean_line_is_unchanged() {
        assert_eq!(
            clean_line("The Ganga is a holy river").as_deref(),
            Some("The Ganga is a holy river")
        );
    }

    #[test]
    fn whitespace_is_collapsed() {
        assert_eq!(clean_line("  a \t b  ").as_deref(), Some("a b"));
    }

    #[test]
    fn email_like_text_keeps_the_local_part() {
        assert_eq!(clean_line("mail me@home").as_deref(), Some("mail me"));
    }
}
