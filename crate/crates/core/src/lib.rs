//! Exact evaluation of the transverse HOMFLYPT invariant `F_B(a, xi)` of a
//! closed braid and of the hidden polynomial `Q_B(a, T)` that governs its
//! coefficients `c_{B,T}` for large `T`.
//!
//! - [`braid`]: braid words, permutations, Markov moves, Coxeter utilities.
//! - [`ring`]: exact Laurent and rational-function arithmetic.
//! - [`skein`]: the memoized computation-tree evaluator for `F`.
//! - [`tree`]: serialized computation trees and replay.
//! - [`hidden`]: coefficient tables, recovery of `Q`, `T0`, operator engine.
//! - [`laws`]: seeded property suites.
//! - [`cli`]: the command-line front end.

pub mod braid;
pub mod cli;
pub mod hidden;
pub mod laws;
pub mod par;
pub mod ring;
pub mod skein;
pub mod tree;

pub use braid::{parse_word, BraidWord, MarkovMove, Permutation, WordError};
pub use hidden::{CoefficientTable, HiddenError, HiddenPolynomial, T0};
pub use ring::{Laurent2, LaurentA, PolyT, RationalInvariant};
pub use skein::{Engine, EvalConfig, LeafConvention, Strategy};
pub use tree::{replay_tree, TreeRecord};
