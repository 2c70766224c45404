use std::collections::{HashMap, HashSet};
use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{Corpus, Sentence, Token};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("sentence {sentence}, line {line}: expected 10 tab-separated columns, found {columns}")]
    MalformedLine {
        sentence: String,
        line: usize,
        columns: usize,
    },

    #[error("sentence {sentence}: token {expected} has id {found:?}, ids must run 1..n")]
    BadIndex {
        sentence: String,
        expected: usize,
        found: String,
    },

    #[error("sentence {sentence}: token {token} has invalid head {head:?}")]
    BadHead {
        sentence: String,
        token: usize,
        head: String,
    },

    #[error("sentence {sentence}: token {token} has an empty form")]
    EmptyForm { sentence: String, token: usize },

    #[error("sentence {sentence}: head arcs form a cycle through token {token}")]
    CycleDetected { sentence: String, token: usize },

    #[error("sentence {sentence}: expected exactly one root, found {roots}")]
    MultipleRoots { sentence: String, roots: usize },

    #[error("sentence {sentence}: no tokens")]
    EmptySentence { sentence: String },

    #[error("duplicate sentence id {0:?}")]
    DuplicateId(String),

    #[error("label file, line {line}: expected `sent_id<TAB>label`")]
    MalformedLabel { line: usize },

    #[error("input contains no sentences")]
    EmptyInput,
}

impl ParseError {
    /// Identifier of the offending sentence block, when the error is tied
    /// to one.
    pub fn sentence(&self) -> Option<&str> {
        match self {
            ParseError::MalformedLine { sentence, .. }
            | ParseError::BadIndex { sentence, .. }
            | ParseError::BadHead { sentence, .. }
            | ParseError::EmptyForm { sentence, .. }
            | ParseError::CycleDetected { sentence, .. }
            | ParseError::MultipleRoots { sentence, .. }
            | ParseError::EmptySentence { sentence } => Some(sentence),
            ParseError::DuplicateId(id) => Some(id),
            _ => None,
        }
    }
}

#[derive(Default)]
struct Block {
    id: Option<String>,
    text: Option<String>,
    tokens: Vec<Token>,
    multiword_lines: usize,
    empty_node_lines: usize,
    has_content: bool,
}

/// Reads CoNLL-U sentences. Blocks are separated by blank lines; `# sent_id`
/// and `# text` comments fill in the id and raw text. Sentences without a
/// `sent_id` are numbered by their position in the input, starting at 1.
pub fn parse_conllu<R: BufRead>(input: R, source_name: &str) -> Result<Corpus, ParseError> {
    let mut sentences = Vec::new();
    let mut seen = HashSet::new();
    let mut block = Block::default();

    let mut finish = |block: &mut Block, sentences: &mut Vec<Sentence>| -> Result<(), ParseError> {
        let block = std::mem::take(block);
        if block.tokens.is_empty() && block.multiword_lines == 0 && block.empty_node_lines == 0 {
            return Ok(());
        }
        let id = block
            .id
            .unwrap_or_else(|| (sentences.len() + 1).to_string());
        if !seen.insert(id.clone()) {
            return Err(ParseError::DuplicateId(id));
        }
        let sentence = Sentence {
            id,
            tokens: block.tokens,
            label: None,
            raw_text: block.text,
            multiword_lines: block.multiword_lines,
            empty_node_lines: block.empty_node_lines,
        };
        sentence.validate()?;
        sentences.push(sentence);
        Ok(())
    };

    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        let lineno = lineno + 1;

        if line.trim().is_empty() {
            if block.has_content {
                finish(&mut block, &mut sentences)?;
            }
            continue;
        }
        block.has_content = true;

        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment_value(comment, "sent_id") {
                block.id = Some(value.to_owned());
            } else if let Some(value) = comment_value(comment, "text") {
                block.text = Some(value.to_owned());
            }
            continue;
        }

        let name = || {
            block
                .id
                .clone()
                .unwrap_or_else(|| format!("#{}", sentences.len() + 1))
        };

        let columns: Vec<&str> = line.split('\t').collect();
        if columns.len() != 10 {
            return Err(ParseError::MalformedLine {
                sentence: name(),
                line: lineno,
                columns: columns.len(),
            });
        }

        let id = columns[0];
        if id.contains('-') {
            block.multiword_lines += 1;
            continue;
        }
        if id.contains('.') {
            block.empty_node_lines += 1;
            continue;
        }

        let expected = block.tokens.len() + 1;
        let index: usize = id.parse().map_err(|_| ParseError::BadIndex {
            sentence: name(),
            expected,
            found: id.to_owned(),
        })?;
        let head: usize = columns[6].parse().map_err(|_| ParseError::BadHead {
            sentence: name(),
            token: index,
            head: columns[6].to_owned(),
        })?;

        block.tokens.push(Token {
            index,
            form: columns[1].to_owned(),
            lemma: columns[2].to_owned(),
            upos: columns[3].to_owned(),
            xpos: columns[4].to_owned(),
            feats: columns[5].to_owned(),
            head,
            deprel: columns[7].to_owned(),
            deps: columns[8].to_owned(),
            misc: columns[9].to_owned(),
        });
    }
    if block.has_content {
        finish(&mut block, &mut sentences)?;
    }

    if sentences.is_empty() {
        return Err(ParseError::EmptyInput);
    }

    Ok(Corpus {
        sentences,
        source_name: source_name.to_owned(),
    })
}

fn comment_value<'a>(comment: &'a str, key: &str) -> Option<&'a str> {
    let rest = comment.trim_start().strip_prefix(key)?;
    // `# textual ...` must not match `text`.
    if !(rest.is_empty() || rest.starts_with([' ', '\t', '='])) {
        return None;
    }
    let rest = rest.trim_start();
    Some(rest.strip_prefix('=').unwrap_or(rest).trim())
}

/// Writes sentences as CoNLL-U: `# sent_id`, `# text` when known, then one
/// 10-column line per token and a blank separator line.
pub fn serialize_conllu<W: Write>(corpus: &Corpus, mut out: W) -> io::Result<()> {
    for sentence in &corpus.sentences {
        writeln!(out, "# sent_id = {}", sentence.id)?;
        if let Some(text) = &sentence.raw_text {
            writeln!(out, "# text = {}", text)?;
        }
        for t in &sentence.tokens {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.index, t.form, t.lemma, t.upos, t.xpos, t.feats, t.head, t.deprel, t.deps, t.misc
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Reads a `sent_id<TAB>label` sidecar. Blank lines and `#` comments are
/// ignored.
pub fn parse_labels<R: BufRead>(input: R) -> Result<HashMap<String, String>, ParseError> {
    let mut labels = HashMap::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, label) = line
            .split_once('\t')
            .ok_or(ParseError::MalformedLabel { line: lineno + 1 })?;
        let (id, label) = (id.trim(), label.trim());
        if id.is_empty() || label.is_empty() {
            return Err(ParseError::MalformedLabel { line: lineno + 1 });
        }
        labels.insert(id.to_owned(), label.to_owned());
    }
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Corpus, ParseError> {
        parse_conllu(s.as_bytes(), "test")
    }

    const HELLO: &str = "1\tHello\t_\tINTJ\t_\t_\t0\troot\t_\t_\n\
                         2\tworld\t_\tNOUN\t_\t_\t1\tvocative\t_\t_\n";

    #[test]
    fn smallest_block() {
        let corpus = parse(HELLO).unwrap();
        assert_eq!(corpus.len(), 1);
        let s = &corpus.sentences[0];
        assert_eq!(s.len(), 2);
        assert_eq!(s.root(), 1);
        assert_eq!(s.id, "1");
    }

    #[test]
    fn head_out_of_range() {
        let input = "1\tHello\t_\tINTJ\t_\t_\t0\troot\t_\t_\n\
                     2\tworld\t_\tNOUN\t_\t_\t5\tdep\t_\t_\n";
        assert!(matches!(
            parse(input),
            Err(ParseError::BadHead { token: 2, .. })
        ));
    }

    #[test]
    fn head_not_integer() {
        let input = "1\tHello\t_\tINTJ\t_\t_\t0\troot\t_\t_\n\
                     2\tworld\t_\tNOUN\t_\t_\tx\tdep\t_\t_\n";
        assert!(matches!(parse(input), Err(ParseError::BadHead { .. })));
    }

    #[test]
    fn wrong_column_count() {
        let input = "# sent_id = broken\n1\tHello\t_\tINTJ\t0\troot\n";
        match parse(input) {
            Err(ParseError::MalformedLine {
                sentence,
                line,
                columns,
            }) => {
                assert_eq!(sentence, "broken");
                assert_eq!(line, 2);
                assert_eq!(columns, 6);
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn empty_input() {
        assert!(matches!(parse(""), Err(ParseError::EmptyInput)));
        assert!(matches!(parse("\n\n\n"), Err(ParseError::EmptyInput)));
    }

    #[test]
    fn comments_fill_id_and_text() {
        let input = format!("# sent_id = greet-1\n# text = Hello world\n{}\n", HELLO);
        let corpus = parse(&input).unwrap();
        let s = &corpus.sentences[0];
        assert_eq!(s.id, "greet-1");
        assert_eq!(s.raw_text.as_deref(), Some("Hello world"));
    }

    #[test]
    fn unrelated_comments_are_ignored() {
        let input = format!("# textual note\n# newdoc id = d1\n{}", HELLO);
        let s = &parse(&input).unwrap().sentences[0];
        assert_eq!(s.raw_text, None);
        assert_eq!(s.id, "1");
    }

    #[test]
    fn multiword_and_empty_nodes_are_counted_and_skipped() {
        let input = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n\
                     1\tdo\t_\tAUX\t_\t_\t3\taux\t_\t_\n\
                     2\tn't\t_\tPART\t_\t_\t3\tadvmod\t_\t_\n\
                     3\tgo\t_\tVERB\t_\t_\t0\troot\t_\t_\n\
                     3.1\tgo\t_\tVERB\t_\t_\t_\t_\t3:conj\t_\n";
        let s = &parse(input).unwrap().sentences[0];
        assert_eq!(s.len(), 3);
        assert_eq!(s.multiword_lines, 1);
        assert_eq!(s.empty_node_lines, 1);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let input = format!("# sent_id = a\n{}\n# sent_id = a\n{}", HELLO, HELLO);
        assert!(matches!(parse(&input), Err(ParseError::DuplicateId(id)) if id == "a"));
    }

    #[test]
    fn crlf_and_trailing_blank_lines() {
        let input = HELLO.replace('\n', "\r\n") + "\r\n\r\n";
        assert_eq!(parse(&input).unwrap().sentences[0].len(), 2);
    }

    #[test]
    fn second_block_error_names_block() {
        let input = format!("{}\n# sent_id = bad\n1\tx\t_\tX\t_\t_\t0\troot\t_\t_\n2\ty\t_\tX\t_\t_\t0\troot\t_\t_\n", HELLO);
        let err = parse(&input).unwrap_err();
        assert_eq!(err.sentence(), Some("bad"));
        assert!(matches!(err, ParseError::MultipleRoots { roots: 2, .. }));
    }

    #[test]
    fn serialize_round_trips_token_lines() {
        let input = "# sent_id = s1\n# text = Hello world\n\
                     1\tHello\thello\tINTJ\tUH\t_\t0\troot\t0:root\tSpaceAfter=No\n\
                     2\tworld\tworld\tNOUN\tNN\tNumber=Sing\t1\tvocative\t1:vocative\t_\n\n";
        let corpus = parse(input).unwrap();
        let mut out = Vec::new();
        serialize_conllu(&corpus, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), input);
    }

    #[test]
    fn labels_sidecar() {
        let labels = parse_labels("# comment\ns1\tpositive\n\ns2\tnegative\n".as_bytes()).unwrap();
        assert_eq!(labels.len(), 2);
        assert_eq!(labels["s1"], "positive");
        assert!(matches!(
            parse_labels("s1 positive\n".as_bytes()),
            Err(ParseError::MalformedLabel { line: 1 })
        ));
    }

    #[test]
    fn unmatched_labels_leave_label_absent() {
        let input = format!("# sent_id = a\n{}\n# sent_id = b\n{}", HELLO, HELLO);
        let mut corpus = parse(&input).unwrap();
        let labels = parse_labels("a\tpos\nzzz\tneg\n".as_bytes()).unwrap();
        corpus.attach_labels(&labels);
        assert_eq!(corpus.sentences[0].label.as_deref(), Some("pos"));
        assert_eq!(corpus.sentences[1].label, None);
    }
}
