//! Serialized transverse computation trees: JSON and DOT output, validation,
//! and replay of the root value from leaves and annotations alone.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::ring::RationalInvariant;
use crate::skein::{FAlgebra, LeafConvention, SkeinAlgebra, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Leaf,
    Split,
    DestabPos,
    DestabNeg,
    SplitUnion,
    Rewrite,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Leaf => "leaf",
            NodeKind::Split => "split",
            NodeKind::DestabPos => "destab-pos",
            NodeKind::DestabNeg => "destab-neg",
            NodeKind::SplitUnion => "split-union",
            NodeKind::Rewrite => "rewrite",
        }
    }

    fn arity(self) -> usize {
        match self {
            NodeKind::Leaf => 0,
            NodeKind::DestabPos | NodeKind::DestabNeg | NodeKind::Rewrite => 1,
            NodeKind::Split | NodeKind::SplitUnion => 2,
        }
    }
}

/// Which side of the skein relation a split node resolves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkeinOrientation {
    /// Children: switched (`u s w`), smoothed (`u w`).
    NegativeCrossing,
    /// Children: one letter removed (`u s w`), both removed (`u w`).
    DoubledPositive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skein: Option<SkeinOrientation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<usize>,
    /// Factors applied to the children, in child order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moves: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    /// Canonical word of the node.
    pub word: Vec<i32>,
    pub strands: usize,
    pub kind: NodeKind,
    pub children: Vec<usize>,
    #[serde(default)]
    pub annotation: Annotation,
}

/// A rooted computation tree; a subtree reached twice is stored once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub root: usize,
    pub convention: LeafConvention,
    pub strategy: Strategy,
    pub nodes: Vec<TreeNode>,
}

#[derive(Debug, thiserror::Error)]
pub enum TreeError {
    #[error("node {node} references missing child {child}")]
    DanglingChild { node: usize, child: usize },
    #[error("root {0} is not a node")]
    MissingRoot(usize),
    #[error("node {node} of kind {kind} has {found} children")]
    Arity { node: usize, kind: &'static str, found: usize },
    #[error("split node {0} lacks a skein orientation")]
    MissingOrientation(usize),
    #[error("node {0} is its own ancestor")]
    Cycle(usize),
    #[error("node {0} has an invalid word")]
    BadWord(usize),
    #[error("malformed tree record: {0}")]
    Parse(#[from] serde_json::Error),
}

impl TreeRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree records serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        let t: TreeRecord = serde_json::from_str(text)?;
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        if self.root >= self.nodes.len() {
            return Err(TreeError::MissingRoot(self.root));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.children.len() != n.kind.arity() {
                return Err(TreeError::Arity { node: i, kind: n.kind.name(), found: n.children.len() });
            }
            if let Some(&c) = n.children.iter().find(|&&c| c >= self.nodes.len()) {
                return Err(TreeError::DanglingChild { node: i, child: c });
            }
            if n.kind == NodeKind::Split && n.annotation.skein.is_none() {
                return Err(TreeError::MissingOrientation(i));
            }
            if BraidWord::new(n.strands, n.word.clone()).is_err() {
                return Err(TreeError::BadWord(i));
            }
        }
        // Depth-first colouring to rule out cycles.
        let mut state = vec![0u8; self.nodes.len()];
        let mut stack = vec![(self.root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                state[v] = 2;
                continue;
            }
            match state[v] {
                1 => return Err(TreeError::Cycle(v)),
                2 => continue,
                _ => {}
            }
            state[v] = 1;
            stack.push((v, true));
            for &c in &self.nodes[v].children {
                if state[c] == 1 {
                    return Err(TreeError::Cycle(c));
                }
                if state[c] == 0 {
                    stack.push((c, false));
                }
            }
        }
        Ok(())
    }

    /// Number of distinct leaves reachable from the root.
    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Leaf).count()
    }

    /// Folds the tree bottom-up in the given algebra.
    pub fn fold<A: SkeinAlgebra>(&self, alg: &A) -> Result<Result<A::Value, A::Error>, TreeError> {
        self.validate()?;
        let mut values: Vec<Option<A::Value>> = vec![None; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(&v) = stack.last() {
            if values[v].is_some() {
                stack.pop();
                continue;
            }
            let node = &self.nodes[v];
            let pending: Vec<usize> = node.children.iter().copied().filter(|&c| values[c].is_none()).collect();
            if !pending.is_empty() {
                stack.extend(pending);
                continue;
            }
            stack.pop();
            let kid = |i: usize| values[node.children[i]].as_ref().expect("child evaluated");
            let value = match node.kind {
                NodeKind::Leaf => alg.leaf(node.strands),
                NodeKind::DestabPos => alg.destabilize_positive(kid(0)),
                NodeKind::DestabNeg => alg.destabilize_negative(kid(0)),
                NodeKind::Rewrite => kid(0).clone(),
                NodeKind::Split => match node.annotation.skein.expect("validated") {
                    SkeinOrientation::NegativeCrossing => alg.negative_crossing(kid(0), kid(1)),
                    SkeinOrientation::DoubledPositive => alg.doubled_positive(kid(0), kid(1)),
                },
                NodeKind::SplitUnion => {
                    let word = BraidWord::new(node.strands, node.word.clone()).expect("validated");
                    match alg.split_union(&word, kid(0), kid(1)) {
                        Ok(x) => x,
                        Err(e) => return Ok(Err(e)),
                    }
                }
            };
            values[v] = Some(value);
        }
        Ok(Ok(values[self.root].take().expect("root evaluated")))
    }

    /// Graphviz rendering; edges carry the node kind and the child's factor.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph computation_tree {\n  node [shape=box, fontname=\"monospace\"];\n");
        for n in &self.nodes {
            let word: Vec<String> = n.word.iter().map(i32::to_string).collect();
            let _ = writeln!(
                out,
                "  n{} [label=\"{}: [{}] on {}\\n{}\"];",
                n.id,
                n.id,
                word.join(","),
                n.strands,
                n.kind.name()
            );
        }
        for n in &self.nodes {
            for (i, c) in n.children.iter().enumerate() {
                let factor = match n.kind {
                    NodeKind::SplitUnion => n.annotation.factors.first().cloned().unwrap_or_default(),
                    _ => n.annotation.factors.get(i).cloned().unwrap_or_default(),
                };
                let _ = writeln!(out, "  n{} -> n{} [label=\"{} {}\"];", n.id, c, n.kind.name(), factor);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Recomputes `F` of the root from the record alone.
pub fn replay_tree(t: &TreeRecord, convention: LeafConvention) -> Result<RationalInvariant, TreeError> {
    match t.fold(&FAlgebra { convention })? {
        Ok(v) => Ok(v),
        Err(never) => match never {},
    }
}
