//! The hidden polynomial `Q_B(a, T)`: coefficient tables of `F_B(a xi, xi)`,
//! recovery of the eventual polynomial by interpolation, empirical `T0`, and a
//! second engine that evaluates `Q` directly with the difference-operator
//! calculus over the same computation tree.

use std::fmt;

use num_traits::One;
use serde_json::{json, Value};

use crate::braid::BraidWord;
use crate::ring::{binom_poly, interpolate, LaurentA, PolyT, Rational, RationalInvariant, RingError};
use crate::skein::{walk, Engine, EvalConfig, LeafConvention, SkeinAlgebra};

/// Extra verification points used when a caller does not choose.
pub const DEFAULT_VERIFY_EXTRA: usize = 3;
const MAX_RETRIES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HiddenError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("coefficients of {word} did not stabilize to a polynomial within the retry budget")]
    NotStabilized { word: String },
    #[error("deg_T Q = {found:?} for {word}, expected {expected}")]
    DegreeMismatch { word: String, expected: usize, found: Option<usize> },
    #[error("verify_extra must be at least 3, got {0}")]
    TooFewVerificationPoints(usize),
    #[error("empty T range {tmin}..{tmax}")]
    EmptyRange { tmin: i64, tmax: i64 },
}

/// `c_{B,T}(a)` for `tmin <= T <= tmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientTable {
    pub word: BraidWord,
    pub tmin: i64,
    pub tmax: i64,
    pub entries: Vec<LaurentA>,
}

impl CoefficientTable {
    pub fn get(&self, t: i64) -> Option<&LaurentA> {
        if t < self.tmin || t > self.tmax {
            return None;
        }
        self.entries.get((t - self.tmin) as usize)
    }
}

/// Outcome of the downward scan for the smallest `T0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum T0 {
    Exact(i64),
    /// Agreement persisted all the way down to the probe floor.
    AtOrBelow(i64),
}

impl fmt::Display for T0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            T0::Exact(t) => write!(f, "{t}"),
            T0::AtOrBelow(t) => write!(f, "<={t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenPolynomial {
    pub poly: PolyT,
    pub components: usize,
    pub verified_window: Option<(i64, i64)>,
    pub empirical_t0: Option<T0>,
    pub convention: LeafConvention,
}

impl HiddenPolynomial {
    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    pub fn to_json(&self) -> Value {
        let t0 = match self.empirical_t0 {
            Some(T0::Exact(t)) => json!(t),
            Some(other) => json!(other.to_string()),
            None => Value::Null,
        };
        json!({
            "components": self.components,
            "coeffs": poly_json(&self.poly),
            "T0": t0,
            "convention": self.convention.name(),
        })
    }
}

/// `[[t_power, [[j, num, den], ...]], ...]`, zero coefficients omitted.
pub fn poly_json(p: &PolyT) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(power, c)| json!([power, laurent_json(c)]))
            .collect(),
    )
}

pub fn laurent_json(c: &LaurentA) -> Value {
    Value::Array(
        c.terms()
            .map(|(j, r)| json!([j, r.numer().to_string(), r.denom().to_string()]))
            .collect(),
    )
}

/// `S_a(g)(T) = a^-2 g(T+1)`.
pub fn op_s_alpha(p: &PolyT) -> PolyT {
    p.shift(1).scale_laurent(&LaurentA::alpha(-2))
}

/// `S_a^-1(g)(T) = a^2 g(T-1)`.
pub fn op_s_alpha_inv(p: &PolyT) -> PolyT {
    p.shift(-1).scale_laurent(&LaurentA::alpha(2))
}

/// `Delta_a(g)(T) = a (g(T) - g(T-1))`.
pub fn op_delta_alpha(p: &PolyT) -> PolyT {
    (p - &p.shift(-1)).scale_laurent(&LaurentA::alpha(1))
}

/// `Q` of the `l`-component unlink.
pub fn leaf_q(l: usize, convention: LeafConvention) -> PolyT {
    let d = l - 1;
    let scale = &LaurentA::alpha(-1) * &(LaurentA::one() + LaurentA::alpha(-1)).pow(d as u32);
    let binom = match convention {
        LeafConvention::Forced => binom_poly(d as i64, d),
        LeafConvention::Paper => binom_poly(0, d),
    };
    binom.scale_laurent(&scale)
}

/// First `T` from which every series coefficient equals the eventual
/// polynomial, read off the numerator degree and the pole order.
fn stable_from(sub: &RationalInvariant) -> i64 {
    match sub.max_t() {
        Some(hi) => hi - sub.dpow() as i64 + 1,
        None => 0,
    }
}

impl Engine {
    fn substituted(&self, w: &BraidWord, cfg: &EvalConfig) -> RationalInvariant {
        let cfg = EvalConfig { record_tree: false, ..*cfg };
        self.eval_f(w, &cfg).0.substitute_alpha_to_alphaxi()
    }

    pub fn c_table(&self, w: &BraidWord, tmin: i64, tmax: i64, cfg: &EvalConfig) -> Result<CoefficientTable, HiddenError> {
        if tmin > tmax {
            return Err(HiddenError::EmptyRange { tmin, tmax });
        }
        let entries = self.substituted(w, cfg).series_coefficients(tmin, tmax)?;
        Ok(CoefficientTable { word: w.clone(), tmin, tmax, entries })
    }

    /// Interpolates `c_{B,T}` at `l` consecutive points from `length + strands`,
    /// checks `verify_extra` further points, and doubles the start on mismatch.
    pub fn recover_q(&self, w: &BraidWord, cfg: &EvalConfig, verify_extra: usize) -> Result<HiddenPolynomial, HiddenError> {
        self.recover_q_with_floor(w, cfg, verify_extra, default_probe_floor(w))
    }

    pub fn recover_q_with_floor(
        &self,
        w: &BraidWord,
        cfg: &EvalConfig,
        verify_extra: usize,
        probe_floor: i64,
    ) -> Result<HiddenPolynomial, HiddenError> {
        if verify_extra < 3 {
            return Err(HiddenError::TooFewVerificationPoints(verify_extra));
        }
        let l = w.component_count();
        let sub = self.substituted(w, cfg);
        let mut start = (w.len() + w.strands()) as i64;
        for _ in 0..MAX_RETRIES {
            let hi = start + (l + verify_extra) as i64 - 1;
            let c = sub.series_coefficients(start, hi)?;
            let points: Vec<(i64, LaurentA)> = (0..l).map(|i| (start + i as i64, c[i].clone())).collect();
            let poly = interpolate(&points)?;
            let agrees = (l..l + verify_extra).all(|i| poly.eval(start + i as i64) == c[i]);
            if agrees {
                if poly.degree() != Some(l - 1) {
                    return Err(HiddenError::DegreeMismatch {
                        word: w.to_string(),
                        expected: l - 1,
                        found: poly.degree(),
                    });
                }
                let t0 = scan_t0(&sub, &poly, start, probe_floor)?;
                return Ok(HiddenPolynomial {
                    poly,
                    components: l,
                    verified_window: Some((start, hi)),
                    empirical_t0: Some(t0),
                    convention: cfg.convention,
                });
            }
            start = (start * 2).max(1);
        }
        Err(HiddenError::NotStabilized { word: w.to_string() })
    }

    /// Smallest `T >= probe_floor` from which `Q` and `c` agree.
    pub fn minimal_t0(&self, w: &BraidWord, cfg: &EvalConfig, probe_floor: i64) -> Result<T0, HiddenError> {
        let h = self.recover_q_with_floor(w, cfg, DEFAULT_VERIFY_EXTRA, probe_floor)?;
        Ok(h.empirical_t0.expect("recover_q reports T0"))
    }

    /// Evaluates `Q` with the operator calculus over the computation tree.
    pub fn eval_q_direct(&self, w: &BraidWord, cfg: &EvalConfig) -> Result<HiddenPolynomial, HiddenError> {
        let cfg = EvalConfig { record_tree: false, ..*cfg };
        let alg = QAlgebra { engine: self, cfg, leaf_shift: 0 };
        let (poly, _) = walk(&alg, &self.q_memo, &cfg, w, None)?;
        let l = w.component_count();
        if poly.degree() != Some(l - 1) {
            return Err(HiddenError::DegreeMismatch { word: w.to_string(), expected: l - 1, found: poly.degree() });
        }
        Ok(HiddenPolynomial {
            poly,
            components: l,
            verified_window: None,
            empirical_t0: None,
            convention: cfg.convention,
        })
    }
}

pub fn default_probe_floor(w: &BraidWord) -> i64 {
    -((w.len() + w.strands()) as i64)
}

fn scan_t0(sub: &RationalInvariant, poly: &PolyT, window_lo: i64, floor: i64) -> Result<T0, HiddenError> {
    if window_lo <= floor {
        return Ok(T0::AtOrBelow(floor));
    }
    let c = sub.series_coefficients(floor, window_lo - 1)?;
    for t in (floor..window_lo).rev() {
        if poly.eval(t) != c[(t - floor) as usize] {
            return Ok(T0::Exact(t + 1));
        }
    }
    Ok(T0::AtOrBelow(floor))
}

/// Polynomial-level semantics of the recursion.
///
/// Split unions need more than the two child polynomials: the top
/// `min(d1, d2) + 1` coefficients of the product follow from the children,
/// the remaining `max(d1, d2) + 1` depend on the children's low-order series
/// and are pinned from the node's coefficient table.
pub struct QAlgebra<'a> {
    pub engine: &'a Engine,
    pub cfg: EvalConfig,
    /// Translates every leaf by `T -> T + leaf_shift`.
    pub leaf_shift: i64,
}

impl SkeinAlgebra for QAlgebra<'_> {
    type Value = PolyT;
    type Error = HiddenError;

    fn leaf(&self, strands: usize) -> PolyT {
        leaf_q(strands, self.cfg.convention).shift(self.leaf_shift)
    }

    fn destabilize_positive(&self, child: &PolyT) -> PolyT {
        child.clone()
    }

    fn destabilize_negative(&self, child: &PolyT) -> PolyT {
        child.shift(1).scale_laurent(&LaurentA::monomial(-Rational::one(), -1))
    }

    fn negative_crossing(&self, switched: &PolyT, smoothed: &PolyT) -> PolyT {
        &op_s_alpha(switched) - &op_s_alpha(&op_delta_alpha(smoothed))
    }

    fn doubled_positive(&self, single: &PolyT, removed: &PolyT) -> PolyT {
        &op_s_alpha_inv(removed) + &op_delta_alpha(single)
    }

    fn split_union(&self, node: &BraidWord, left: &PolyT, right: &PolyT) -> Result<PolyT, HiddenError> {
        let degree_of = |p: &PolyT, strands: usize| {
            p.degree().ok_or_else(|| HiddenError::DegreeMismatch {
                word: node.to_string(),
                expected: strands,
                found: None,
            })
        };
        let d1 = degree_of(left, node.strands())?;
        let d2 = degree_of(right, node.strands())?;
        let total = d1 + d2 + 1;
        // Truncated Cauchy product sum_{a=0}^{T} Q1(a) Q2(T-a), a polynomial in T.
        let points: Vec<(i64, LaurentA)> = (0..=total as i64)
            .map(|t| {
                let mut acc = LaurentA::zero();
                for a in 0..=t {
                    acc += &(&left.eval(a) * &right.eval(t - a));
                }
                (t, acc)
            })
            .collect();
        let mut conv = interpolate(&points)?.scale_laurent(&(LaurentA::one() + LaurentA::alpha(1)));
        if self.cfg.convention == LeafConvention::Paper {
            conv = conv.shift(-1);
        }
        let pinned = d1.max(d2) + 1;
        let known = conv.truncate_below(pinned);

        let sub = self.engine.substituted(node, &self.cfg);
        let start = stable_from(&sub).max(0);
        let c = sub.series_coefficients(start, start + pinned as i64 - 1)?;
        let residual: Vec<(i64, LaurentA)> = c
            .iter()
            .enumerate()
            .map(|(i, ci)| {
                let t = start + i as i64;
                (t, ci - &known.eval(t))
            })
            .collect();
        let low = interpolate(&residual)?;
        Ok(&known + &low)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn w(strands: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(strands, letters.to_vec()).unwrap()
    }

    fn a(c: i64, j: i32) -> LaurentA {
        LaurentA::monomial(rat(c), j)
    }

    fn paper() -> EvalConfig {
        EvalConfig::default().with_convention(LeafConvention::Paper)
    }

    #[test]
    fn operator_examples() {
        assert_eq!(op_s_alpha(&PolyT::constant(a(1, -1))), PolyT::constant(a(1, -3)));
        assert_eq!(op_delta_alpha(&PolyT::t()), PolyT::constant(a(1, 1)));
        let expect = PolyT::from_coeffs(vec![a(-1, 2), a(1, 2)]);
        assert_eq!(op_s_alpha_inv(&PolyT::t()), expect);
    }

    #[test]
    fn c_table_examples() {
        let e = Engine::new();
        let cfg = EvalConfig::default();
        let t = e.c_table(&w(1, &[]), -1, 2, &cfg).unwrap();
        let am1 = a(1, -1);
        assert_eq!(t.entries, vec![LaurentA::zero(), am1.clone(), am1.clone(), am1]);

        // -a^-2 / (1 - xi^2) before substitution becomes -a^-2 xi^-2 / (1 - xi^2).
        let t = e.c_table(&w(2, &[-1]), -2, 1, &cfg).unwrap();
        let m = a(-1, -2);
        assert_eq!(t.entries, vec![LaurentA::zero(), m.clone(), m.clone(), m]);
        assert_eq!(t.get(-1), Some(&a(-1, -2)));
        assert_eq!(t.get(5), None);

        let base = &a(1, -1) * &(LaurentA::one() + a(1, -1));
        let t = e.c_table(&w(2, &[]), 0, 2, &cfg).unwrap();
        let expect: Vec<_> = (1..=3).map(|k| base.scale(&rat(k))).collect();
        assert_eq!(t.entries, expect);
        assert!(matches!(e.c_table(&w(1, &[]), 2, 1, &cfg), Err(HiddenError::EmptyRange { .. })));
    }

    #[test]
    fn recover_examples() {
        let e = Engine::new();
        let cfg = EvalConfig::default();
        let q = e.recover_q(&w(1, &[]), &cfg, 3).unwrap();
        assert_eq!(q.poly, PolyT::constant(a(1, -1)));
        let q = e.recover_q(&w(2, &[1, 1, 1]), &cfg, 3).unwrap();
        assert_eq!(q.poly, PolyT::constant(a(1, 2) + a(2, 1)));
        let q = e.recover_q(&w(2, &[-1]), &cfg, 3).unwrap();
        assert_eq!(q.poly, PolyT::constant(a(-1, -2)));

        let scale = &a(1, -1) * &(LaurentA::one() + a(1, -1));
        let q = e.recover_q(&w(2, &[]), &paper(), 3).unwrap();
        assert_eq!(q.poly, PolyT::t().scale_laurent(&scale));
        let q = e.recover_q(&w(2, &[]), &cfg, 3).unwrap();
        assert_eq!(q.poly, PolyT::t().shift(1).scale_laurent(&scale));
        assert_eq!(e.recover_q(&w(2, &[]), &cfg, 2), Err(HiddenError::TooFewVerificationPoints(2)));
    }

    #[test]
    fn t0_examples() {
        let e = Engine::new();
        let cfg = EvalConfig::default();
        assert_eq!(e.minimal_t0(&w(1, &[]), &cfg, -5).unwrap(), T0::Exact(0));
        assert_eq!(e.minimal_t0(&w(2, &[-1]), &cfg, -5).unwrap(), T0::Exact(-1));
        // c_T = a^-1(1+a^-1)(T+1) for T >= 0 and c_-1 = 0 = Q(-1); Q(-2) != 0.
        assert_eq!(e.minimal_t0(&w(2, &[]), &cfg, -5).unwrap(), T0::Exact(-1));
        assert_eq!(e.minimal_t0(&w(2, &[-1]), &cfg, 0).unwrap(), T0::AtOrBelow(0));
    }

    #[test]
    fn direct_examples() {
        let e = Engine::new();
        let q = e.eval_q_direct(&w(2, &[1, 1]), &paper()).unwrap();
        let expect = PolyT::t().shift(-1).scale_laurent(&(&a(1, 1) * &(LaurentA::one() + a(1, -1))));
        assert_eq!(q.poly, expect);
        for cfg in [EvalConfig::default(), paper()] {
            let q = e.eval_q_direct(&w(2, &[1, 1, 1]), &cfg).unwrap();
            assert_eq!(q.poly, PolyT::constant(a(1, 2) + a(2, 1)));
        }
        // binom(T+2, 2) scaled, checked against the 3-unlink coefficient table.
        let q = e.eval_q_direct(&w(3, &[]), &EvalConfig::default()).unwrap();
        let scale = &a(1, -1) * &(LaurentA::one() + a(1, -1)).pow(2);
        assert_eq!(q.poly, binom_poly(2, 2).scale_laurent(&scale));
        let table = e.c_table(&w(3, &[]), 0, 4, &EvalConfig::default()).unwrap();
        for t in 0..=4 {
            assert_eq!(&q.poly.eval(t), table.get(t).unwrap());
        }
    }

    #[test]
    fn split_union_pin_matches_recovery() {
        let e = Engine::new();
        let cfg = EvalConfig::default();
        // Hopf link ⊔ Hopf link: both factors have degree 1, so two low
        // coefficients must be pinned.
        for word in [w(4, &[1, 1, 3, 3]), w(5, &[1, 1, 3, -4, 3, -4]), w(4, &[1, -1, 1, 3])] {
            let direct = e.eval_q_direct(&word, &cfg).unwrap();
            let recovered = e.recover_q(&word, &cfg, 5).unwrap();
            assert_eq!(direct.poly, recovered.poly, "{word}");
        }
    }

    #[test]
    fn hidden_json_shape() {
        let e = Engine::new();
        let q = e.recover_q(&w(2, &[1, 1, 1]), &EvalConfig::default(), 3).unwrap();
        let v = q.to_json();
        assert_eq!(v["components"], json!(1));
        assert_eq!(v["coeffs"], json!([[0, [[1, "2", "1"], [2, "1", "1"]]]]));
        assert_eq!(v["convention"], json!("forced"));
        assert!(v["T0"].is_i64());
    }
}
