//! Braid words, their permutations, Markov moves and the Coxeter utilities
//! that drive the evaluator towards destabilization.
//!
//! A letter `e > 0` stands for `sigma_e`, `e < 0` for `sigma_|e|^-1`. Positions
//! are 0-based everywhere.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("strand count must be at least 1")]
    NoStrands,
    #[error("letter 0 is not a generator")]
    ZeroLetter,
    #[error("letter {letter} needs more than {strands} strands")]
    LetterOutOfRange { letter: i32, strands: usize },
    #[error("cannot parse letter {0:?}")]
    BadToken(String),
    #[error("position {position} out of range for word of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("word has a negative letter; a positive word is required")]
    NotPositive,
    #[error("exchange precondition violated at prefix length {0}")]
    ExchangePrecondition(usize),
}

/// A word in the braid group on `strands` strands.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, WordError> {
        if strands < 1 {
            return Err(WordError::NoStrands);
        }
        for &e in &letters {
            if e == 0 {
                return Err(WordError::ZeroLetter);
            }
            if e.unsigned_abs() as usize >= strands {
                return Err(WordError::LetterOutOfRange { letter: e, strands });
            }
        }
        Ok(Self { strands, letters })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn new_unchecked(strands: usize, letters: Vec<i32>) -> Self {
        debug_assert!(Self::new(strands, letters.clone()).is_ok());
        Self { strands, letters }
    }

    pub fn empty(strands: usize) -> Result<Self, WordError> {
        Self::new(strands, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|&e| e > 0)
    }

    pub fn negative_count(&self) -> usize {
        self.letters.iter().filter(|&&e| e < 0).count()
    }

    /// Permutation image under `B_n -> S_n`, letter signs ignored:
    /// `perm(uv) = perm(u) ∘ perm(v)`.
    pub fn permutation(&self) -> Permutation {
        let mut p = Permutation::identity(self.strands);
        for &e in &self.letters {
            p.right_mul_transposition(e.unsigned_abs() as usize);
        }
        p
    }

    /// Number of link components of the closure.
    pub fn component_count(&self) -> usize {
        self.permutation().cycle_count()
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&e| e.signum() as i64).sum()
    }

    /// Self-linking number of the transverse closure: writhe minus strands.
    pub fn self_linking(&self) -> i64 {
        self.writhe() - self.strands as i64
    }

    /// Cancels adjacent inverse pairs, including the pair formed by the last
    /// and first letters; every step is a transverse move.
    pub fn free_reduce_cyclic(&self) -> Self {
        let mut stack: Vec<i32> = Vec::with_capacity(self.letters.len());
        for &e in &self.letters {
            if stack.last() == Some(&-e) {
                stack.pop();
            } else {
                stack.push(e);
            }
        }
        // The stack is linearly reduced; only the ends can still cancel.
        let mut lo = 0;
        let mut hi = stack.len();
        while hi - lo >= 2 && stack[lo] == -stack[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        Self::new_unchecked(self.strands, stack[lo..hi].to_vec())
    }

    /// Lexicographically least rotation of the letters.
    pub fn cyclic_canonical(&self) -> Self {
        let n = self.letters.len();
        if n <= 1 {
            return self.clone();
        }
        let best = (0..n)
            .min_by(|&a, &b| {
                let ra = self.letters[a..].iter().chain(&self.letters[..a]);
                let rb = self.letters[b..].iter().chain(&self.letters[..b]);
                ra.cmp(rb)
            })
            .unwrap_or(0);
        self.rotate(best)
    }

    /// Free reduction followed by least rotation: the memo key form.
    pub fn canonical(&self) -> Self {
        self.free_reduce_cyclic().cyclic_canonical()
    }

    /// Moves the first `amount` letters to the end (conjugation).
    pub fn rotate(&self, amount: usize) -> Self {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = amount % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Self::new_unchecked(self.strands, letters)
    }

    /// Mirror image: every crossing flipped.
    pub fn mirror(&self) -> Self {
        Self::new_unchecked(self.strands, self.letters.iter().map(|e| -e).collect())
    }

    /// Group inverse: reversed and flipped.
    pub fn inverse(&self) -> Self {
        Self::new_unchecked(self.strands, self.letters.iter().rev().map(|e| -e).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let strands = self.strands.max(other.strands);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self::new_unchecked(strands, letters)
    }

    /// Switch (sign flipped) and smoothing (letter deleted) at `position`.
    pub fn conway_split(&self, position: usize) -> Result<(Self, Self), WordError> {
        if position >= self.letters.len() {
            return Err(WordError::PositionOutOfRange { position, len: self.letters.len() });
        }
        let mut switched = self.letters.clone();
        switched[position] = -switched[position];
        let mut smoothed = self.letters.clone();
        smoothed.remove(position);
        Ok((
            Self::new_unchecked(self.strands, switched),
            Self::new_unchecked(self.strands, smoothed),
        ))
    }

    pub fn without(&self, positions: &[usize]) -> Self {
        let letters = self
            .letters
            .iter()
            .enumerate()
            .filter(|(i, _)| !positions.contains(i))
            .map(|(_, &e)| e)
            .collect();
        Self::new_unchecked(self.strands, letters)
    }

    /// True iff the positive word is a reduced expression of its permutation.
    pub fn is_reduced_positive(&self) -> Result<bool, WordError> {
        if !self.is_positive() {
            return Err(WordError::NotPositive);
        }
        Ok(self.first_non_reduced_prefix().is_none())
    }

    /// Smallest `k` such that the length-`k` prefix is reduced but appending
    /// letter `k` lowers the Coxeter length. Positive words only.
    pub(crate) fn first_non_reduced_prefix(&self) -> Option<usize> {
        let mut p = Permutation::identity(self.strands);
        for (k, &e) in self.letters.iter().enumerate() {
            let i = e as usize;
            if p.images[i - 1] > p.images[i] {
                return Some(k);
            }
            p.right_mul_transposition(i);
        }
        None
    }

    /// Smallest generator index with no occurrence, if any.
    pub fn unused_generator(&self) -> Option<usize> {
        let mut used = vec![false; self.strands];
        for &e in &self.letters {
            used[e.unsigned_abs() as usize] = true;
        }
        (1..self.strands).find(|&i| !used[i])
    }

    /// Splits along an unused generator `i` into the subwords on strands
    /// `1..=i` and `i+1..=n` (relabelled).
    pub fn split_at_generator(&self, i: usize) -> (Self, Self) {
        debug_assert!(i >= 1 && i < self.strands);
        let left = self
            .letters
            .iter()
            .copied()
            .filter(|e| (e.unsigned_abs() as usize) < i)
            .collect();
        let right = self
            .letters
            .iter()
            .filter(|e| (e.unsigned_abs() as usize) > i)
            .map(|&e| e - e.signum() * i as i32)
            .collect();
        (
            Self::new_unchecked(i, left),
            Self::new_unchecked(self.strands - i, right),
        )
    }

    /// Occurrences of generator index `i` (either sign).
    pub fn occurrences(&self, i: usize) -> usize {
        self.letters.iter().filter(|e| e.unsigned_abs() as usize == i).count()
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "] on {}", self.strands)
    }
}

/// Parses whitespace-separated nonzero integers; the strand count is explicit
/// so that trailing trivial strands are representable.
pub fn parse_word(text: &str, strands: usize) -> Result<BraidWord, WordError> {
    let letters = text
        .split_whitespace()
        .map(|tok| tok.parse::<i32>().map_err(|_| WordError::BadToken(tok.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    BraidWord::new(strands, letters)
}

/// A permutation of `{1..n}` stored 0-based: `images[i] = p(i+1) - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// From 1-based images; `None` unless a bijection on `{1..n}`.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x < 1 || x > n || seen[x - 1] {
                return None;
            }
            seen[x - 1] = true;
        }
        Some(Self { images: images.iter().map(|x| x - 1).collect() })
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// 1-based image of 1-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1] + 1
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    /// `self ∘ s_i`.
    pub(crate) fn right_mul_transposition(&mut self, i: usize) {
        self.images.swap(i - 1, i);
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Self { images }
    }

    /// Inversion count.
    pub fn coxeter_length(&self) -> usize {
        let n = self.images.len();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = 0;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        cycles
    }

    /// Cycle type, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// Positive reduced word for `p` in the coset normal form
/// `p = u ∘ (s_{n-1} ∘ ... ∘ s_k)` with `u` fixing `n`, recursively.
///
/// The top generator `s_{n-1}` occurs once if `p` moves `n` and never otherwise.
pub fn staircase_word(p: &Permutation) -> BraidWord {
    let n = p.size().max(1);
    let mut images = p.images.clone();
    let mut blocks: Vec<Vec<i32>> = Vec::new();
    for top in (1..images.len()).rev() {
        // Bubble the value `top` (0-based) from position k up to position top.
        let k = images.iter().position(|&x| x == top).expect("bijection");
        blocks.push(((k + 1)..=top).rev().map(|i| i as i32).collect());
        images[k..=top].rotate_left(1);
    }
    let letters = blocks.into_iter().rev().flatten().collect();
    BraidWord::new_unchecked(n, letters)
}

/// Rewrites a positive word by braid relations only so that letters
/// `prefix_length - 1` and `prefix_length` are the same generator.
///
/// Requires the length-`prefix_length` prefix to be reduced and appending the
/// next letter `i` to lower the Coxeter length; the prefix is replaced by a
/// reduced word of the same permutation ending in `s_i` (exchange condition).
pub fn exchange_rewrite(w: &BraidWord, prefix_length: usize) -> Result<BraidWord, WordError> {
    let k = prefix_length;
    if !w.is_positive() {
        return Err(WordError::NotPositive);
    }
    if k >= w.len() || k == 0 {
        return Err(WordError::ExchangePrecondition(k));
    }
    let prefix = BraidWord::new_unchecked(w.strands, w.letters[..k].to_vec());
    let mut p = prefix.permutation();
    if p.coxeter_length() != k {
        return Err(WordError::ExchangePrecondition(k));
    }
    let i = w.letters[k] as usize;
    if p.images[i - 1] < p.images[i] {
        return Err(WordError::ExchangePrecondition(k));
    }
    p.right_mul_transposition(i);
    let mut letters = staircase_word(&p).letters;
    letters.push(i as i32);
    letters.extend_from_slice(&w.letters[k..]);
    Ok(BraidWord::new_unchecked(w.strands, letters))
}

/// Braid-word moves. All but the negative (de)stabilizations are transverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MarkovMove {
    /// Deletes the inverse pair at `position, position + 1`.
    FreeReduce(usize),
    /// Inserts `letter, -letter` before `position`.
    FreeExpand { position: usize, letter: i32 },
    /// `s_i s_j = s_j s_i` for `|i - j| > 1` at `position, position + 1`.
    BraidRelationFar(usize),
    /// `s_i s_j s_i = s_j s_i s_j` for `|i - j| = 1`, equal signs.
    BraidRelationAdjacent(usize),
    /// `w -> letter^-1 w letter`.
    Conjugate(i32),
    CyclicRotate(usize),
    StabilizePositive,
    DestabilizePositive,
    StabilizeNegative,
    DestabilizeNegative,
}

impl MarkovMove {
    pub fn is_transverse(&self) -> bool {
        !matches!(self, MarkovMove::StabilizeNegative | MarkovMove::DestabilizeNegative)
    }

    /// Applies the move, or `None` when it does not apply to `w`.
    pub fn apply(&self, w: &BraidWord) -> Option<BraidWord> {
        let l = &w.letters;
        let n = w.strands;
        let mk = |letters: Vec<i32>| Some(BraidWord::new_unchecked(n, letters));
        match *self {
            MarkovMove::FreeReduce(p) => {
                if p + 1 < l.len() && l[p] == -l[p + 1] {
                    let mut out = l.clone();
                    out.drain(p..p + 2);
                    mk(out)
                } else {
                    None
                }
            }
            MarkovMove::FreeExpand { position, letter } => {
                if position > l.len() || letter == 0 || letter.unsigned_abs() as usize >= n {
                    return None;
                }
                let mut out = l.clone();
                out.splice(position..position, [letter, -letter]);
                mk(out)
            }
            MarkovMove::BraidRelationFar(p) => {
                if p + 1 < l.len() && l[p].unsigned_abs().abs_diff(l[p + 1].unsigned_abs()) > 1 {
                    let mut out = l.clone();
                    out.swap(p, p + 1);
                    mk(out)
                } else {
                    None
                }
            }
            MarkovMove::BraidRelationAdjacent(p) => {
                if p + 2 >= l.len() {
                    return None;
                }
                let (a, b, c) = (l[p], l[p + 1], l[p + 2]);
                let same_sign = a.signum() == b.signum();
                if a == c && same_sign && a.unsigned_abs().abs_diff(b.unsigned_abs()) == 1 {
                    let mut out = l.clone();
                    out[p] = b;
                    out[p + 1] = a;
                    out[p + 2] = b;
                    mk(out)
                } else {
                    None
                }
            }
            MarkovMove::Conjugate(e) => {
                if e == 0 || e.unsigned_abs() as usize >= n {
                    return None;
                }
                let mut out = Vec::with_capacity(l.len() + 2);
                out.push(-e);
                out.extend_from_slice(l);
                out.push(e);
                mk(out)
            }
            MarkovMove::CyclicRotate(k) => Some(w.rotate(k)),
            MarkovMove::StabilizePositive | MarkovMove::StabilizeNegative => {
                let sign = if *self == MarkovMove::StabilizePositive { 1 } else { -1 };
                let mut out = l.clone();
                out.push(sign * n as i32);
                Some(BraidWord::new_unchecked(n + 1, out))
            }
            MarkovMove::DestabilizePositive | MarkovMove::DestabilizeNegative => {
                let sign = if *self == MarkovMove::DestabilizePositive { 1 } else { -1 };
                let top = n.checked_sub(1)? as i32;
                if top < 1 || l.last() != Some(&(sign * top)) || w.occurrences(top as usize) != 1 {
                    return None;
                }
                Some(BraidWord::new_unchecked(n - 1, l[..l.len() - 1].to_vec()))
            }
        }
    }
}
