use thiserror::Error;

use super::{rel_matches, Sentence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("node {node} out of range 1..={len}")]
    NodeOutOfRange { node: usize, len: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Yield {
    lo: usize,
    hi: usize,
    size: usize,
}

/// A sentence together with its inverted head arcs and precomputed subtree
/// yields.
#[derive(Clone, Debug)]
pub struct DepGraph<'a> {
    sentence: &'a Sentence,
    // Indexed by token index; slot 0 is unused.
    children: Vec<Vec<usize>>,
    yields: Vec<Yield>,
}

/// Builds the children index for a validated sentence. Children lists are in
/// ascending token order.
pub fn build_graph(sentence: &Sentence) -> DepGraph<'_> {
    let n = sentence.len();
    let mut children = vec![Vec::new(); n + 1];
    for token in &sentence.tokens {
        if token.head != 0 {
            children[token.head].push(token.index);
        }
    }

    let mut yields = vec![
        Yield {
            lo: 0,
            hi: 0,
            size: 0
        };
        n + 1
    ];
    // Post-order over an explicit stack so deep chains cannot overflow.
    let root = sentence.root();
    let mut stack = vec![(root, false)];
    while let Some((node, expanded)) = stack.pop() {
        if expanded {
            let mut y = Yield {
                lo: node,
                hi: node,
                size: 1,
            };
            for &child in &children[node] {
                let c = yields[child];
                y.lo = y.lo.min(c.lo);
                y.hi = y.hi.max(c.hi);
                y.size += c.size;
            }
            yields[node] = y;
        } else {
            stack.push((node, true));
            stack.extend(children[node].iter().map(|&c| (c, false)));
        }
    }

    DepGraph {
        sentence,
        children,
        yields,
    }
}

impl<'a> DepGraph<'a> {
    pub fn sentence(&self) -> &'a Sentence {
        self.sentence
    }

    pub fn len(&self) -> usize {
        self.sentence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentence.is_empty()
    }

    fn check(&self, node: usize) -> Result<(), GraphError> {
        if node == 0 || node > self.len() {
            Err(GraphError::NodeOutOfRange {
                node,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// `(deprel, child)` pairs of `node`, ascending by child index.
    pub fn children(
        &self,
        node: usize,
    ) -> Result<impl Iterator<Item = (&'a str, usize)> + '_, GraphError> {
        self.check(node)?;
        let sentence = self.sentence;
        Ok(self.children[node]
            .iter()
            .map(move |&c| (sentence.tokens[c - 1].deprel.as_str(), c)))
    }

    /// Children of `node`, optionally restricted to one relation (see
    /// [`rel_matches`] for how subtypes and `obj`/`dobj` are handled).
    pub fn children_by_rel(&self, node: usize, rel: Option<&str>) -> Result<Vec<usize>, GraphError> {
        Ok(self
            .children(node)?
            .filter(|(deprel, _)| rel.is_none_or(|r| rel_matches(deprel, r)))
            .map(|(_, c)| c)
            .collect())
    }

    /// Leftmost and rightmost token of the subtree rooted at `node`.
    pub fn subtree_span(&self, node: usize) -> Result<(usize, usize), GraphError> {
        self.check(node)?;
        let y = self.yields[node];
        Ok((y.lo, y.hi))
    }

    /// Number of tokens in the subtree rooted at `node`.
    pub fn subtree_size(&self, node: usize) -> Result<usize, GraphError> {
        self.check(node)?;
        Ok(self.yields[node].size)
    }

    /// Whether the subtree of `node` covers a gap-free token range.
    pub fn is_contiguous_subtree(&self, node: usize) -> Result<bool, GraphError> {
        self.check(node)?;
        let y = self.yields[node];
        Ok(y.size == y.hi - y.lo + 1)
    }
}
