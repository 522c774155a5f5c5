//! Executable law suites over seeded random corpora.
//!
//! Every case draws from its own ChaCha stream `(seed, case index)`, so a
//! failure replays from the reported seed and index alone. Cases run in
//! parallel and reports are merged by case index.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, MarkovMove};
use crate::hidden::HiddenError;
use crate::par;
use crate::ring::{Laurent2, LaurentA, PolyT, Rational};
use crate::skein::{Engine, EvalConfig, LeafConvention, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzSpec {
    pub seed: u64,
    pub max_strands: usize,
    pub max_length: usize,
    pub case_count: usize,
    pub move_budget: usize,
}

impl Default for FuzzSpec {
    fn default() -> Self {
        Self { seed: 7, max_strands: 6, max_length: 12, case_count: 200, move_budget: 10 }
    }
}

impl FuzzSpec {
    pub fn with_cases(mut self, case_count: usize) -> Self {
        self.case_count = case_count;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn case_rng(&self, case: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(case as u64);
        rng
    }

    /// The word of one case; `corpus()[i] == case_word(i)`.
    pub fn case_word(&self, case: usize) -> BraidWord {
        random_word(&mut self.case_rng(case), self.max_strands, self.max_length)
    }

    pub fn corpus(&self) -> Vec<BraidWord> {
        (0..self.case_count).map(|i| self.case_word(i)).collect()
    }
}

/// Random word biased towards 2 to 5 strands, with occasional trailing
/// trivial strands, mirrors and inverses.
pub fn random_word<R: Rng>(rng: &mut R, max_strands: usize, max_length: usize) -> BraidWord {
    let max_strands = max_strands.max(1);
    let roll = rng.random_range(0..100);
    let mut strands = if roll < 5 || max_strands == 1 {
        1
    } else if roll < 85 {
        rng.random_range(2..=max_strands.min(5))
    } else {
        max_strands
    };
    let len = if strands == 1 { 0 } else { rng.random_range(0..=max_length) };
    let letters: Vec<i32> = (0..len)
        .map(|_| {
            let i = rng.random_range(1..strands) as i32;
            if rng.random_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    if strands < max_strands && rng.random_bool(0.15) {
        strands += 1;
    }
    let mut w = BraidWord::new(strands, letters).expect("letters drawn in range");
    if rng.random_bool(0.15) {
        w = w.mirror();
    }
    if rng.random_bool(0.15) {
        w = w.inverse();
    }
    w
}

/// Random sequence of at most `budget` transverse moves.
pub fn random_transverse_moves<R: Rng>(rng: &mut R, w: &BraidWord, budget: usize, max_growth: usize) -> (BraidWord, Vec<MarkovMove>) {
    let start_len = w.len();
    let start_strands = w.strands();
    let mut cur = w.clone();
    let mut applied = Vec::new();
    for _ in 0..budget {
        for _attempt in 0..16 {
            let n = cur.strands();
            let len = cur.len();
            let growable = cur.len() < start_len + max_growth;
            let pos = rng.random_range(0..=len.max(1));
            let letter = if n > 1 {
                let i = rng.random_range(1..n) as i32;
                if rng.random_bool(0.5) {
                    i
                } else {
                    -i
                }
            } else {
                0
            };
            let mv = match rng.random_range(0..8) {
                0 => MarkovMove::FreeReduce(pos),
                1 if growable => MarkovMove::FreeExpand { position: pos, letter },
                2 => MarkovMove::BraidRelationFar(pos),
                3 => MarkovMove::BraidRelationAdjacent(pos),
                4 if growable => MarkovMove::Conjugate(letter),
                5 => MarkovMove::CyclicRotate(pos),
                6 if growable && n < start_strands + 2 => MarkovMove::StabilizePositive,
                7 => MarkovMove::DestabilizePositive,
                _ => continue,
            };
            if let Some(next) = mv.apply(&cur) {
                cur = next;
                applied.push(mv);
                break;
            }
        }
    }
    (cur, applied)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub case: usize,
    pub seed: u64,
    pub strands: usize,
    pub word: Vec<i32>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub cases: usize,
    /// False for report-only experiments.
    pub gating: bool,
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Shown in the table only, so that JSON reports stay byte-stable.
    #[serde(skip)]
    pub wall_ms: u128,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        !self.gating || self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One table row: law, cases, failures, status, time.
    pub fn table_row(&self) -> String {
        let status = match (self.gating, self.failures.is_empty()) {
            (_, true) => "PASS",
            (true, false) => "FAIL",
            (false, false) => "REPORT",
        };
        format!(
            "{:<28} {:>6} {:>9} {:>7} {:>9}ms",
            self.law,
            self.cases,
            self.failures.len(),
            status,
            self.wall_ms
        )
    }
}

pub fn table_header() -> String {
    format!("{:<28} {:>6} {:>9} {:>7} {:>11}", "law", "cases", "failures", "status", "time")
}

type CaseResult = Result<Option<String>, String>;

fn run_law<F>(name: &str, spec: &FuzzSpec, gating: bool, words: &[BraidWord], check: F) -> LawReport
where
    F: Fn(usize, &BraidWord) -> CaseResult + Sync + Send,
{
    let started = Instant::now();
    let results = par::map_indexed(words, |i, w| check(i, w));
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (i, (w, r)) in words.iter().zip(results).enumerate() {
        match r {
            Ok(Some(note)) => notes.push(format!("case {i}: {note}")),
            Ok(None) => {}
            Err(detail) => failures.push(Failure {
                case: i,
                seed: spec.seed,
                strands: w.strands(),
                word: w.letters().to_vec(),
                detail,
            }),
        }
    }
    LawReport {
        law: name.to_string(),
        cases: words.len(),
        gating,
        failures,
        notes,
        wall_ms: started.elapsed().as_millis(),
    }
}

fn herr(e: HiddenError) -> String {
    e.to_string()
}

/// `(a^-1 F+, a F-, (xi^-1 - xi) F0)` and the `Q` identity for a random
/// crossing of each case.
pub fn check_skein_identity(engine: &Engine, spec: &FuzzSpec, cfg: &EvalConfig) -> LawReport {
    let words = spec.corpus();
    run_law("skein-identity", spec, true, &words, |i, w| {
        if w.is_empty() {
            return Ok(None);
        }
        let mut rng = spec.case_rng(i);
        rng.set_word_pos(1 << 20);
        let pos = rng.random_range(0..w.len());
        skein_case(engine, cfg, w, pos)
    })
}

/// Checks both skein identities at one crossing.
pub fn skein_case(engine: &Engine, cfg: &EvalConfig, w: &BraidWord, pos: usize) -> CaseResult {
    let (switched, smoothed) = w.conway_split(pos).map_err(|e| e.to_string())?;
    let (plus, minus) = if w.letters()[pos] > 0 { (w.clone(), switched) } else { (switched, w.clone()) };
    let f = |x: &BraidWord| engine.eval_f(x, cfg).0;
    let (fp, fm, f0) = (f(&plus), f(&minus), f(&smoothed));
    let lhs = &fp.mul_laurent(&Laurent2::term(1, -1, 0)) - &fm.mul_laurent(&Laurent2::term(1, 1, 0));
    let rhs = f0.mul_laurent(&Laurent2::xi_inv_minus_xi());
    if lhs != rhs {
        return Err(format!("F skein fails at position {pos}"));
    }
    let q = |x: &BraidWord| engine.recover_q(x, cfg, 3).map(|h| h.poly).map_err(herr);
    let (qp, qm, q0) = (q(&plus)?, q(&minus)?, q(&smoothed)?);
    let lhs = &qp.shift(1).scale_laurent(&LaurentA::alpha(-1)) - &qm.scale_laurent(&LaurentA::alpha(1));
    let rhs = &q0.shift(1) - &q0;
    if lhs != rhs {
        return Err(format!("Q skein fails at position {pos}"));
    }
    Ok(None)
}

/// Random transverse move sequences leave `F` and `Q` unchanged.
pub fn check_transverse_invariance(engine: &Engine, spec: &FuzzSpec, cfg: &EvalConfig) -> LawReport {
    let words = spec.corpus();
    run_law("transverse-invariance", spec, true, &words, |i, w| {
        let mut rng = spec.case_rng(i);
        rng.set_word_pos(1 << 21);
        let (moved, moves) = random_transverse_moves(&mut rng, w, spec.move_budget, 6);
        if moved.component_count() != w.component_count() {
            return Err(format!("component count changed by {moves:?}"));
        }
        if engine.eval_f(&moved, cfg).0 != engine.eval_f(w, cfg).0 {
            return Err(format!("F changed by {moves:?} -> {moved}"));
        }
        let q1 = engine.recover_q(w, cfg, 3).map_err(herr)?;
        let q2 = engine.recover_q(&moved, cfg, 3).map_err(herr)?;
        if q1.poly != q2.poly {
            return Err(format!("Q changed by {moves:?} -> {moved}"));
        }
        Ok(None)
    })
}

/// `F(w s_n^-1) = -a^-1 xi^-1 F(w)` and `Q(w s_n^-1)(T) = -a^-1 Q(w)(T+1)`.
pub fn check_negative_stabilization(engine: &Engine, spec: &FuzzSpec, cfg: &EvalConfig) -> LawReport {
    let words = spec.corpus();
    run_law("negative-stabilization", spec, true, &words, |_, w| {
        let stab = MarkovMove::StabilizeNegative.apply(w).expect("always applies");
        let f = engine.eval_f(w, cfg).0.mul_laurent(&Laurent2::term(-1, -1, -1));
        if engine.eval_f(&stab, cfg).0 != f {
            return Err("F stabilization law fails".into());
        }
        let q = engine.recover_q(w, cfg, 3).map_err(herr)?.poly;
        let expect = q.shift(1).scale_laurent(&LaurentA::monomial(-Rational::one(), -1));
        if engine.recover_q(&stab, cfg, 3).map_err(herr)?.poly != expect {
            return Err("Q stabilization law fails".into());
        }
        Ok(None)
    })
}

/// `deg_T Q = l - 1`.
pub fn check_degree_law(engine: &Engine, spec: &FuzzSpec, cfg: &EvalConfig) -> LawReport {
    let words = spec.corpus();
    run_law("degree-law", spec, true, &words, |_, w| {
        let h = engine.recover_q(w, cfg, 3).map_err(herr)?;
        let l = w.component_count();
        match h.degree() {
            Some(d) if d == l - 1 => Ok(None),
            d => Err(format!("degree {d:?}, components {l}")),
        }
    })
}

/// For knots, `Q(1, T)` is a constant odd integer.
pub fn check_parity_knot(engine: &Engine, spec: &FuzzSpec, cfg: &EvalConfig) -> LawReport {
    let words: Vec<BraidWord> = spec.corpus().into_iter().filter(|w| w.component_count() == 1).collect();
    run_law("parity-knot", spec, true, &words, |_, w| {
        let h = engine.recover_q(w, cfg, 3).map_err(herr)?;
        parity_value(&h.poly).map(|v| Some(format!("Q(1) = {v}")))
    })
}

/// The odd integer `Q(1, T)` of a knot, or why it is not one.
pub fn parity_value(q: &PolyT) -> Result<BigInt, String> {
    let at_one = q.eval_alpha_one();
    if at_one.len() != 1 {
        return Err(format!("Q(1,T) has {} coefficients", at_one.len()));
    }
    let v = &at_one[0];
    if !v.is_integer() {
        return Err(format!("Q(1) = {v} is not an integer"));
    }
    let k = v.to_integer();
    if k.is_even() {
        return Err(format!("Q(1) = {k} is even"));
    }
    Ok(k)
}

/// `k = (l-1)! [T^(l-1)] Q(1, T)` satisfies `k ≡ 2^(l-1) (mod 2^l)`.
pub fn check_leading_coeff_mod(engine: &Engine, spec: &FuzzSpec, cfg: &EvalConfig) -> LawReport {
    let words = spec.corpus();
    run_law("leading-coefficient", spec, true, &words, |_, w| {
        let h = engine.recover_q(w, cfg, 3).map_err(herr)?;
        leading_coeff_k(&h.poly, w.component_count()).map(|_| None)
    })
}

pub fn leading_coeff_k(q: &PolyT, l: usize) -> Result<BigInt, String> {
    let at_one = q.eval_alpha_one();
    let lead = at_one.get(l - 1).cloned().unwrap_or_else(Rational::zero);
    if at_one.len() > l {
        return Err(format!("Q(1,T) has degree {} > {}", at_one.len() - 1, l - 1));
    }
    let fact: BigInt = (1..l as u64).map(BigInt::from).product();
    let k = lead * Rational::from_integer(fact);
    if !k.is_integer() {
        return Err(format!("(l-1)! * leading = {k} is not an integer"));
    }
    let k = k.to_integer();
    let modulus = BigInt::one() << l;
    let target = BigInt::one() << (l - 1);
    if k.mod_floor(&modulus) != target {
        return Err(format!("k = {k} is not {target} mod {modulus}"));
    }
    Ok(k)
}

/// Both strategies give identical `F` and `Q`. Report-only under the `Paper` leaf
/// convention, where divergences are recorded as witnesses.
pub fn check_tree_independence(engine: &Engine, spec: &FuzzSpec, convention: LeafConvention) -> LawReport {
    let words = spec.corpus();
    let gating = convention == LeafConvention::Forced;
    let name = if gating { "tree-independence" } else { "tree-independence-paper" };
    let a = EvalConfig::default().with_convention(convention).with_strategy(Strategy::StaircaseFirst);
    let b = a.with_strategy(Strategy::NegativeElimFirst);
    run_law(name, spec, gating, &words, |_, w| {
        let (fa, fb) = (engine.eval_f(w, &a).0, engine.eval_f(w, &b).0);
        if fa != fb {
            let qa = engine.recover_q(w, &a, 3).map(|h| h.poly.to_string()).unwrap_or_else(herr);
            let qb = engine.recover_q(w, &b, 3).map(|h| h.poly.to_string()).unwrap_or_else(herr);
            let q_note = if qa == qb { "Q agrees".to_string() } else { format!("staircase Q = {qa}; negfirst Q = {qb}") };
            return Err(format!("F diverges ({} vs {}); {q_note}", fa, fb));
        }
        let qa = engine.recover_q(w, &a, 3).map_err(herr)?;
        let qb = engine.recover_q(w, &b, 3).map_err(herr)?;
        if qa.poly != qb.poly {
            return Err(format!("Q diverges: {} vs {}", qa.poly, qb.poly));
        }
        Ok(None)
    })
}

/// The interpolated `Q` agrees with `c_T` on its window and `extra` more
/// points beyond; the empirical `T0` is noted per case.
pub fn check_stabilization(engine: &Engine, spec: &FuzzSpec, cfg: &EvalConfig, extra: usize) -> LawReport {
    let words = spec.corpus();
    run_law("stabilization", spec, true, &words, |_, w| {
        let h = engine.recover_q(w, cfg, 3).map_err(herr)?;
        let (lo, hi) = h.verified_window.expect("recover_q reports its window");
        let table = engine.c_table(w, lo, hi + extra as i64, cfg).map_err(herr)?;
        for t in lo..=hi + extra as i64 {
            if &h.poly.eval(t) != table.get(t).expect("in range") {
                return Err(format!("Q({t}) != c_{t}"));
            }
        }
        Ok(Some(format!("T0 = {}", h.empirical_t0.expect("reported"))))
    })
}

/// `eval_q_direct` agrees with interpolation.
pub fn check_cross_engine(engine: &Engine, spec: &FuzzSpec, cfg: &EvalConfig) -> LawReport {
    let words = spec.corpus();
    run_law("cross-engine", spec, true, &words, |_, w| {
        let direct = engine.eval_q_direct(w, cfg).map_err(herr)?;
        let recovered = engine.recover_q(w, cfg, 3).map_err(herr)?;
        if direct.poly != recovered.poly {
            return Err(format!("direct {} vs recovered {}", direct.poly, recovered.poly));
        }
        Ok(None)
    })
}

pub const SUITES: &[&str] = &[
    "skein",
    "invariance",
    "negative-stabilization",
    "degree",
    "parity",
    "leading",
    "tree-independence",
    "stabilization",
    "cross-engine",
];

/// Runs a named suite (or `all`); `None` for an unknown name.
pub fn run_suite(engine: &Engine, name: &str, spec: &FuzzSpec, cfg: &EvalConfig) -> Option<Vec<LawReport>> {
    let one = |n: &str| -> Option<LawReport> {
        Some(match n {
            "skein" => check_skein_identity(engine, spec, cfg),
            "invariance" => check_transverse_invariance(engine, spec, cfg),
            "negative-stabilization" => check_negative_stabilization(engine, spec, cfg),
            "degree" => check_degree_law(engine, spec, cfg),
            "parity" => check_parity_knot(engine, spec, cfg),
            "leading" => check_leading_coeff_mod(engine, spec, cfg),
            "tree-independence" => check_tree_independence(engine, spec, cfg.convention),
            "stabilization" => check_stabilization(engine, spec, cfg, 5),
            "cross-engine" => check_cross_engine(engine, spec, cfg),
            _ => return None,
        })
    };
    if name == "all" {
        let mut out: Vec<LawReport> = SUITES.iter().map(|s| one(s).expect("known suite")).collect();
        if cfg.convention == LeafConvention::Forced {
            out.push(check_tree_independence(engine, spec, LeafConvention::Paper));
        }
        Some(out)
    } else {
        one(name).map(|r| vec![r])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(strands: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(strands, letters.to_vec()).unwrap()
    }

    #[test]
    fn corpus_is_reproducible() {
        let spec = FuzzSpec::default().with_cases(50);
        assert_eq!(spec.corpus(), spec.corpus());
        assert_eq!(spec.corpus()[17], spec.case_word(17));
        let other = spec.with_seed(8);
        assert_ne!(spec.corpus(), other.corpus());
        for word in spec.corpus() {
            assert!(word.strands() <= 6 && word.len() <= 12);
        }
    }

    #[test]
    fn skein_examples() {
        let e = Engine::new();
        let cfg = EvalConfig::default();
        assert_eq!(skein_case(&e, &cfg, &w(2, &[1]), 0), Ok(None));
        assert_eq!(skein_case(&e, &cfg, &w(2, &[1, 1, 1]), 0), Ok(None));
        let spec = FuzzSpec { case_count: 0, ..FuzzSpec::default() };
        let r = check_skein_identity(&e, &spec, &cfg);
        assert!(r.passed() && r.cases == 0);
    }

    #[test]
    fn parity_and_leading_examples() {
        let e = Engine::new();
        let cfg = EvalConfig::default();
        let q = |word: BraidWord| e.recover_q(&word, &cfg, 3).unwrap().poly;
        assert_eq!(parity_value(&q(w(1, &[]))), Ok(BigInt::from(1)));
        assert_eq!(parity_value(&q(w(2, &[1, 1, 1]))), Ok(BigInt::from(3)));
        assert!(parity_value(&q(w(2, &[-1, -1, -1]))).is_ok());
        assert_eq!(leading_coeff_k(&q(w(2, &[])), 2), Ok(BigInt::from(2)));
        assert_eq!(leading_coeff_k(&q(w(2, &[1, 1])), 2), Ok(BigInt::from(2)));
        assert!(parity_value(&q(w(2, &[]))).is_err());
    }

    #[test]
    fn failures_replay() {
        // A deliberately false law fails on the same cases every run.
        let spec = FuzzSpec::default().with_cases(30);
        let words = spec.corpus();
        let run = || run_law("even-length", &spec, true, &words, |_, w| {
            if w.len() % 2 == 0 { Ok(None) } else { Err("odd".into()) }
        });
        let (a, b) = (run(), run());
        assert_eq!(a.failures, b.failures);
        for f in &a.failures {
            assert_eq!(spec.case_word(f.case).letters(), f.word.as_slice());
        }
    }

    #[test]
    fn random_moves_are_transverse() {
        let spec = FuzzSpec::default().with_cases(40);
        for (i, word) in spec.corpus().iter().enumerate() {
            let mut rng = spec.case_rng(i);
            let (moved, moves) = random_transverse_moves(&mut rng, word, 10, 6);
            assert!(moves.iter().all(MarkovMove::is_transverse));
            assert!(moves.len() <= 10);
            assert_eq!(moved.component_count(), word.component_count());
            assert_eq!(moved.self_linking(), word.self_linking());
        }
    }
}
