//! The F-engine: memoized, terminating evaluation of the transverse HOMFLYPT
//! invariant of a closed braid by a transverse computation tree.
//!
//! Every node is first put in canonical form (cyclic free reduction, least
//! rotation). A [`Plan`] then picks one of: unlink leaf, split along an unused
//! generator, destabilization of a single top generator, skein elimination of
//! a negative letter, skein resolution of a doubled positive letter exposed by
//! the exchange condition, or a staircase rewrite of a reduced positive word.
//! The triple (negative letters, length, strands) decreases lexicographically
//! along every edge except staircase rewrites, which are followed immediately
//! by a split or destabilization.
//!
//! The recursion is generic over a [`SkeinAlgebra`], so the same tree drives
//! the F-level values here and the polynomial calculus in [`crate::hidden`].

use std::collections::HashMap;
use std::convert::Infallible;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::braid::{exchange_rewrite, staircase_word, BraidWord};
use crate::ring::{Laurent2, RationalInvariant};
use crate::tree::{Annotation, NodeKind, SkeinOrientation, TreeNode, TreeRecord};

/// Values assigned to the crossingless closed braids `U^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafConvention {
    /// `a^-1 xi (1 + a^-1 xi)^(l-1) / (1 - xi^2)^l`, forced by the skein axioms.
    Forced,
    /// The unlink formula as printed, an extra factor `xi^(2(l-1))`.
    Paper,
}

impl LeafConvention {
    pub fn name(self) -> &'static str {
        match self {
            LeafConvention::Forced => "forced",
            LeafConvention::Paper => "paper",
        }
    }
}

impl fmt::Display for LeafConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Split, then destabilize, then eliminate negatives.
    StaircaseFirst,
    /// Eliminate every negative letter before splitting or destabilizing.
    NegativeElimFirst,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::StaircaseFirst => "staircase",
            Strategy::NegativeElimFirst => "negfirst",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub convention: LeafConvention,
    pub strategy: Strategy,
    pub record_tree: bool,
    pub memo_enabled: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            convention: LeafConvention::Forced,
            strategy: Strategy::StaircaseFirst,
            record_tree: false,
            memo_enabled: true,
        }
    }
}

impl EvalConfig {
    pub fn with_convention(mut self, convention: LeafConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn recording(mut self) -> Self {
        self.record_tree = true;
        self
    }
}

/// `F` of the `l`-component crossingless closed braid.
pub fn leaf_unlink(l: usize, convention: LeafConvention) -> RationalInvariant {
    assert!(l >= 1, "unlink needs at least one component");
    let base = Laurent2::term(1, -1, 1);
    let link = Laurent2::term(1, 0, 0) + Laurent2::term(1, -1, 1);
    let mut num = &base * &link.pow(l as u32 - 1);
    if convention == LeafConvention::Paper {
        num = num.shift(0, 2 * (l as i32 - 1));
    }
    RationalInvariant::new(num, l as u32)
}

/// `F_{B1 ⊔ B2} = F_{B1} F_{B2} (1 + a xi^-1)`.
pub fn split_union_combine(f1: &RationalInvariant, f2: &RationalInvariant) -> RationalInvariant {
    (f1 * f2).mul_laurent(&split_factor(LeafConvention::Forced))
}

/// Split-union factor matching the convention's unlink leaves, so that
/// `U^a ⊔ U^b` always evaluates to the `U^(a+b)` leaf.
pub fn split_factor(convention: LeafConvention) -> Laurent2 {
    let f = Laurent2::term(1, 0, 0) + Laurent2::term(1, 1, -1);
    match convention {
        LeafConvention::Forced => f,
        LeafConvention::Paper => f.shift(0, 2),
    }
}

/// One recursion step for a canonical word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plan {
    Leaf,
    SplitUnion {
        generator: usize,
        left: BraidWord,
        right: BraidWord,
    },
    Destabilize {
        positive: bool,
        rotated: BraidWord,
        child: BraidWord,
    },
    /// `v(u s^-1 w) = a^-2 v(u s w) - a^-1 (xi^-1 - xi) v(u w)`.
    NegativeCrossing {
        position: usize,
        switched: BraidWord,
        smoothed: BraidWord,
    },
    /// `v(u s s w) = a (xi^-1 - xi) v(u s w) + a^2 v(u w)`.
    DoubledPositive {
        position: usize,
        rewritten: BraidWord,
        single: BraidWord,
        removed: BraidWord,
    },
    Staircase {
        child: BraidWord,
    },
}

impl Plan {
    /// Chooses the step for a canonical word.
    pub fn for_word(w: &BraidWord, strategy: Strategy) -> Plan {
        if w.is_empty() {
            return Plan::Leaf;
        }
        if strategy == Strategy::NegativeElimFirst {
            if let Some(p) = Self::negative(w) {
                return p;
            }
        }
        if let Some(i) = w.unused_generator() {
            let (left, right) = w.split_at_generator(i);
            return Plan::SplitUnion { generator: i, left, right };
        }
        let top = w.strands() - 1;
        if w.occurrences(top) == 1 {
            let p = w
                .letters()
                .iter()
                .position(|e| e.unsigned_abs() as usize == top)
                .expect("one occurrence");
            let rotated = w.rotate(p + 1);
            let positive = rotated.letters()[rotated.len() - 1] > 0;
            let child = BraidWord::new_unchecked(top, rotated.letters()[..rotated.len() - 1].to_vec());
            return Plan::Destabilize { positive, rotated, child };
        }
        if let Some(p) = Self::negative(w) {
            return p;
        }
        if let Some(k) = w.first_non_reduced_prefix() {
            let rewritten = exchange_rewrite(w, k).expect("prefix chosen to satisfy the exchange condition");
            let single = rewritten.without(&[k]);
            let removed = rewritten.without(&[k - 1, k]);
            return Plan::DoubledPositive { position: k, rewritten, single, removed };
        }
        Plan::Staircase { child: staircase_word(&w.permutation()) }
    }

    fn negative(w: &BraidWord) -> Option<Plan> {
        let position = w.letters().iter().position(|&e| e < 0)?;
        let (switched, smoothed) = w.conway_split(position).expect("position in range");
        Some(Plan::NegativeCrossing { position, switched, smoothed })
    }
}

/// How child values combine at each kind of tree node.
pub trait SkeinAlgebra: Sync {
    type Value: Clone + Send + Sync;
    type Error;

    fn leaf(&self, strands: usize) -> Self::Value;
    fn destabilize_positive(&self, child: &Self::Value) -> Self::Value;
    fn destabilize_negative(&self, child: &Self::Value) -> Self::Value;
    fn negative_crossing(&self, switched: &Self::Value, smoothed: &Self::Value) -> Self::Value;
    fn doubled_positive(&self, single: &Self::Value, removed: &Self::Value) -> Self::Value;
    fn split_union(
        &self,
        node: &BraidWord,
        left: &Self::Value,
        right: &Self::Value,
    ) -> Result<Self::Value, Self::Error>;
}

/// F-level semantics of the recursion.
#[derive(Clone, Copy, Debug)]
pub struct FAlgebra {
    pub convention: LeafConvention,
}

impl SkeinAlgebra for FAlgebra {
    type Value = RationalInvariant;
    type Error = Infallible;

    fn leaf(&self, strands: usize) -> RationalInvariant {
        leaf_unlink(strands, self.convention)
    }

    fn destabilize_positive(&self, child: &RationalInvariant) -> RationalInvariant {
        child.clone()
    }

    fn destabilize_negative(&self, child: &RationalInvariant) -> RationalInvariant {
        child.mul_laurent(&Laurent2::term(-1, -1, -1))
    }

    fn negative_crossing(&self, switched: &RationalInvariant, smoothed: &RationalInvariant) -> RationalInvariant {
        let a = switched.mul_laurent(&Laurent2::term(1, -2, 0));
        let b = smoothed.mul_laurent(&(&Laurent2::term(1, -1, 0) * &Laurent2::xi_inv_minus_xi()));
        &a - &b
    }

    fn doubled_positive(&self, single: &RationalInvariant, removed: &RationalInvariant) -> RationalInvariant {
        let a = single.mul_laurent(&(&Laurent2::term(1, 1, 0) * &Laurent2::xi_inv_minus_xi()));
        let b = removed.mul_laurent(&Laurent2::term(1, 2, 0));
        &a + &b
    }

    fn split_union(
        &self,
        _node: &BraidWord,
        left: &RationalInvariant,
        right: &RationalInvariant,
    ) -> Result<RationalInvariant, Infallible> {
        Ok((left * right).mul_laurent(&split_factor(self.convention)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct MemoKey {
    letters: Vec<i32>,
    strands: usize,
    convention: LeafConvention,
    strategy: Strategy,
}

/// Shared insert-if-absent cache; duplicate computation of a key is harmless.
#[derive(Debug)]
pub struct Memo<V> {
    map: DashMap<MemoKey, V>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl<V> Default for Memo<V> {
    fn default() -> Self {
        Self { map: DashMap::new(), hits: AtomicU64::new(0), misses: AtomicU64::new(0) }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MemoStats {
    pub entries: usize,
    pub hits: u64,
    pub misses: u64,
}

impl<V: Clone> Memo<V> {
    fn get(&self, key: &MemoKey) -> Option<V> {
        let hit = self.map.get(key).map(|v| v.clone());
        if hit.is_some() {
            self.hits.fetch_add(1, Ordering::Relaxed);
        } else {
            self.misses.fetch_add(1, Ordering::Relaxed);
        }
        hit
    }

    fn insert(&self, key: MemoKey, value: V) {
        self.map.entry(key).or_insert(value);
    }

    pub fn stats(&self) -> MemoStats {
        MemoStats {
            entries: self.map.len(),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    pub fn clear(&self) {
        self.map.clear();
    }
}

/// Collects nodes while walking; shared subtrees are stored once.
pub(crate) struct TreeBuilder<V> {
    nodes: Vec<TreeNode>,
    values: Vec<Option<V>>,
    index: HashMap<(Vec<i32>, usize), usize>,
}

impl<V> TreeBuilder<V> {
    fn new() -> Self {
        Self { nodes: Vec::new(), values: Vec::new(), index: HashMap::new() }
    }

    fn finish(self, cfg: &EvalConfig) -> TreeRecord {
        TreeRecord {
            root: 0,
            convention: cfg.convention,
            strategy: cfg.strategy,
            nodes: self.nodes,
        }
    }
}

fn canonical_moves(input: &BraidWord, canon: &BraidWord) -> Vec<String> {
    let mut moves = Vec::new();
    let reduced = input.free_reduce_cyclic();
    if reduced.len() != input.len() {
        moves.push(format!("free-reduce {} -> {} letters", input.len(), reduced.len()));
    }
    if reduced.letters() != canon.letters() {
        moves.push("rotate to least rotation".to_string());
    }
    moves
}

/// Evaluates `w` in algebra `alg`, memoizing on canonical words.
pub(crate) fn walk<A: SkeinAlgebra>(
    alg: &A,
    memo: &Memo<A::Value>,
    cfg: &EvalConfig,
    w: &BraidWord,
    mut rec: Option<&mut TreeBuilder<A::Value>>,
) -> Result<(A::Value, Option<usize>), A::Error> {
    let canon = w.canonical();
    let key = MemoKey {
        letters: canon.letters().to_vec(),
        strands: canon.strands(),
        convention: cfg.convention,
        strategy: cfg.strategy,
    };
    let node_id = match rec.as_deref_mut() {
        Some(b) => {
            if let Some(&id) = b.index.get(&(key.letters.clone(), key.strands)) {
                let v = b.values[id].clone().expect("children finish before parents are revisited");
                return Ok((v, Some(id)));
            }
            let id = b.nodes.len();
            b.index.insert((key.letters.clone(), key.strands), id);
            b.nodes.push(TreeNode {
                id,
                word: canon.letters().to_vec(),
                strands: canon.strands(),
                kind: NodeKind::Leaf,
                children: Vec::new(),
                annotation: Annotation { moves: canonical_moves(w, &canon), ..Annotation::default() },
            });
            b.values.push(None);
            Some(id)
        }
        None => {
            if cfg.memo_enabled {
                if let Some(v) = memo.get(&key) {
                    return Ok((v, None));
                }
            }
            None
        }
    };

    let plan = Plan::for_word(&canon, cfg.strategy);
    let mut children = Vec::new();
    let mut child = |word: &BraidWord, rec: &mut Option<&mut TreeBuilder<A::Value>>| {
        walk(alg, memo, cfg, word, rec.as_deref_mut()).map(|(v, id)| {
            if let Some(id) = id {
                children.push(id);
            }
            v
        })
    };
    let mut annotation = Annotation::default();
    let (value, kind) = match &plan {
        Plan::Leaf => (alg.leaf(canon.strands()), NodeKind::Leaf),
        Plan::SplitUnion { generator, left, right } => {
            let l = child(left, &mut rec)?;
            let r = child(right, &mut rec)?;
            annotation.generator = Some(*generator);
            annotation.factors = vec![match cfg.convention {
                LeafConvention::Forced => "(1+αξ⁻¹)".to_string(),
                LeafConvention::Paper => "(1+αξ⁻¹)ξ²".to_string(),
            }];
            (alg.split_union(&canon, &l, &r)?, NodeKind::SplitUnion)
        }
        Plan::Destabilize { positive, rotated, child: c } => {
            let v = child(c, &mut rec)?;
            annotation.moves.push(format!("rotate top generator to end: {:?}", rotated.letters()));
            if *positive {
                annotation.factors = vec!["1".to_string()];
                (alg.destabilize_positive(&v), NodeKind::DestabPos)
            } else {
                annotation.factors = vec!["−α⁻¹ξ⁻¹".to_string()];
                (alg.destabilize_negative(&v), NodeKind::DestabNeg)
            }
        }
        Plan::NegativeCrossing { position, switched, smoothed } => {
            let a = child(switched, &mut rec)?;
            let b = child(smoothed, &mut rec)?;
            annotation.position = Some(*position);
            annotation.skein = Some(SkeinOrientation::NegativeCrossing);
            annotation.factors = vec!["α⁻²".to_string(), "−α⁻¹(ξ⁻¹−ξ)".to_string()];
            (alg.negative_crossing(&a, &b), NodeKind::Split)
        }
        Plan::DoubledPositive { position, rewritten, single, removed } => {
            let a = child(single, &mut rec)?;
            let b = child(removed, &mut rec)?;
            annotation.position = Some(*position);
            annotation.skein = Some(SkeinOrientation::DoubledPositive);
            annotation.factors = vec!["α(ξ⁻¹−ξ)".to_string(), "α²".to_string()];
            if rewritten.letters() != canon.letters() {
                annotation.moves.push(format!("exchange rewrite: {:?}", rewritten.letters()));
            }
            (alg.doubled_positive(&a, &b), NodeKind::Split)
        }
        Plan::Staircase { child: c } => {
            let v = child(c, &mut rec)?;
            annotation.moves.push(format!("staircase normal form: {:?}", c.letters()));
            annotation.factors = vec!["1".to_string()];
            (v, NodeKind::Rewrite)
        }
    };

    if let (Some(b), Some(id)) = (rec, node_id) {
        let node = &mut b.nodes[id];
        node.kind = kind;
        node.children = children;
        let mut moves = std::mem::take(&mut node.annotation.moves);
        moves.append(&mut annotation.moves);
        annotation.moves = moves;
        node.annotation = annotation;
        b.values[id] = Some(value.clone());
    }
    memo.insert(key, value.clone());
    Ok((value, node_id))
}

/// Runs `walk` with optional tree recording.
pub(crate) fn walk_recorded<A: SkeinAlgebra>(
    alg: &A,
    memo: &Memo<A::Value>,
    cfg: &EvalConfig,
    w: &BraidWord,
) -> Result<(A::Value, Option<TreeRecord>), A::Error> {
    if cfg.record_tree {
        let mut b = TreeBuilder::new();
        let (v, _) = walk(alg, memo, cfg, w, Some(&mut b))?;
        Ok((v, Some(b.finish(cfg))))
    } else {
        let (v, _) = walk(alg, memo, cfg, w, None)?;
        Ok((v, None))
    }
}

/// Evaluation context holding the shared caches.
#[derive(Debug, Default)]
pub struct Engine {
    pub(crate) f_memo: Memo<RationalInvariant>,
    pub(crate) q_memo: Memo<crate::ring::PolyT>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `F` of the closure of `w`, plus the computation tree when requested.
    pub fn eval_f(&self, w: &BraidWord, cfg: &EvalConfig) -> (RationalInvariant, Option<TreeRecord>) {
        let alg = FAlgebra { convention: cfg.convention };
        match walk_recorded(&alg, &self.f_memo, cfg, w) {
            Ok(out) => out,
            Err(never) => match never {},
        }
    }

    pub fn f_stats(&self) -> MemoStats {
        self.f_memo.stats()
    }

    pub fn q_stats(&self) -> MemoStats {
        self.q_memo.stats()
    }

    pub fn clear(&self) {
        self.f_memo.clear();
        self.q_memo.clear();
    }
}

/// `F` with default settings and a throwaway cache.
pub fn eval_f(w: &BraidWord, cfg: &EvalConfig) -> (RationalInvariant, Option<TreeRecord>) {
    Engine::new().eval_f(w, cfg)
}
