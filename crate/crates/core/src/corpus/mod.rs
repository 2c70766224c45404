//! Dependency-annotated sentences.
//!
//! Sentences are read from CoNLL-U, validated to be single-rooted trees and
//! then wrapped in a [`DepGraph`] which provides the traversal primitives the
//! segmenter relies on (children by relation, subtree yields).

mod conllu;
mod graph;

pub use conllu::{parse_conllu, parse_labels, serialize_conllu, ParseError};
pub use graph::{build_graph, DepGraph, GraphError};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// One syntactic word of a CoNLL-U sentence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: String,
    /// Index of the governor, 0 for the root.
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
}

impl Token {
    /// Token with the unused columns set to `_`.
    pub fn new(index: usize, form: &str, upos: &str, head: usize, deprel: &str) -> Self {
        Token {
            index,
            form: form.to_owned(),
            lemma: "_".to_owned(),
            upos: upos.to_owned(),
            xpos: "_".to_owned(),
            feats: "_".to_owned(),
            head,
            deprel: deprel.to_owned(),
            deps: "_".to_owned(),
            misc: "_".to_owned(),
        }
    }

    pub fn is_punct(&self) -> bool {
        self.upos == "PUNCT"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub tokens: Vec<Token>,
    /// Sentence-level annotation (sentiment class, intent, ...) carried to
    /// every generated variant.
    pub label: Option<String>,
    pub raw_text: Option<String>,
    /// Multiword-token range lines skipped while building the tree.
    pub multiword_lines: usize,
    /// Empty-node lines skipped while building the tree.
    pub empty_node_lines: usize,
}

impl Sentence {
    /// Builds a sentence from tokens, checking that indices run 1..n and
    /// that the head arcs form a single-rooted tree.
    pub fn new(id: impl Into<String>, tokens: Vec<Token>) -> Result<Self, ParseError> {
        let sentence = Sentence {
            id: id.into(),
            tokens,
            label: None,
            raw_text: None,
            multiword_lines: 0,
            empty_node_lines: 0,
        };
        sentence.validate()?;
        Ok(sentence)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token at 1-based `index`.
    pub fn token(&self, index: usize) -> Option<&Token> {
        index.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    /// Token forms joined by single spaces.
    pub fn text(&self) -> String {
        self.span_text(1, self.len())
    }

    /// Forms of tokens `lo..=hi` joined by single spaces.
    pub fn span_text(&self, lo: usize, hi: usize) -> String {
        self.tokens[lo - 1..hi]
            .iter()
            .map(|t| t.form.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn root(&self) -> usize {
        self.tokens
            .iter()
            .find(|t| t.head == 0)
            .map(|t| t.index)
            .expect("validated sentence has a root")
    }

    pub(crate) fn validate(&self) -> Result<(), ParseError> {
        let n = self.tokens.len();
        if n == 0 {
            return Err(ParseError::EmptySentence {
                sentence: self.id.clone(),
            });
        }
        let mut roots = 0;
        for (i, token) in self.tokens.iter().enumerate() {
            if token.index != i + 1 {
                return Err(ParseError::BadIndex {
                    sentence: self.id.clone(),
                    expected: i + 1,
                    found: token.index.to_string(),
                });
            }
            if token.form.is_empty() {
                return Err(ParseError::EmptyForm {
                    sentence: self.id.clone(),
                    token: token.index,
                });
            }
            if token.head > n || token.head == token.index {
                return Err(ParseError::BadHead {
                    sentence: self.id.clone(),
                    token: token.index,
                    head: token.head.to_string(),
                });
            }
            if token.head == 0 {
                roots += 1;
            }
        }
        if roots != 1 {
            return Err(ParseError::MultipleRoots {
                sentence: self.id.clone(),
                roots,
            });
        }

        // Every token must reach the root by following heads.
        // 0 = unvisited, 1 = on current path, 2 = reaches root.
        let mut state = vec![0u8; n + 1];
        state[0] = 2;
        for start in 1..=n {
            let mut path = Vec::new();
            let mut node = start;
            while state[node] == 0 {
                state[node] = 1;
                path.push(node);
                node = self.tokens[node - 1].head;
            }
            if state[node] == 1 {
                return Err(ParseError::CycleDetected {
                    sentence: self.id.clone(),
                    token: node,
                });
            }
            for visited in path {
                state[visited] = 2;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub sentences: Vec<Sentence>,
    pub source_name: String,
}

impl Corpus {
    /// Sets each sentence's label from an id → label map. Sentences without
    /// an entry have their label cleared.
    pub fn attach_labels(&mut self, labels: &HashMap<String, String>) {
        for sentence in &mut self.sentences {
            sentence.label = labels.get(&sentence.id).cloned();
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Matches a dependency label against a wanted relation. Subtypes match their
/// base relation (`nsubj:pass` matches `nsubj`) and `obj`/`dobj` are treated
/// as the same relation.
pub fn rel_matches(deprel: &str, wanted: &str) -> bool {
    fn base(rel: &str) -> &str {
        let rel = rel.split(':').next().unwrap_or(rel);
        if rel == "obj" {
            "dobj"
        } else {
            rel
        }
    }
    if deprel == wanted {
        return true;
    }
    base(deprel) == base(wanted)
}
