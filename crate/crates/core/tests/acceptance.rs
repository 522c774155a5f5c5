//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use hidden_homfly::cli::{cmd_corpus, two_strand_closed_form};
use hidden_homfly::laws::{self, FuzzSpec, LawReport};
use hidden_homfly::par;
use hidden_homfly::ring::{binom_poly, rat, LaurentA, PolyT};
use hidden_homfly::{BraidWord, Engine, EvalConfig, LeafConvention};

const CONVENTIONS: [LeafConvention; 2] = [LeafConvention::Forced, LeafConvention::Paper];

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

fn from_reports(reports: &[LawReport]) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for r in reports {
        pass &= r.passed();
        let what = if r.gating { "failures" } else { "divergences (report-only)" };
        parts.push(format!("{} {}/{} {what}", r.law, r.failures.len(), r.cases));
        if let Some(f) = r.failures.first().filter(|_| r.gating) {
            parts.push(format!("first: case {} {:?} on {}: {}", f.case, f.word, f.strands, f.detail));
        }
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn two_strand(k: i64) -> BraidWord {
    let letter = if k >= 0 { 1 } else { -1 };
    BraidWord::new(2, vec![letter; k.unsigned_abs() as usize]).unwrap()
}

/// `k a^(2k) + (k+1) a^(2k-1)`, written out independently of the CLI table.
fn odd_expected(k: i64) -> PolyT {
    let c = LaurentA::monomial(rat(k), 2 * k as i32) + LaurentA::monomial(rat(k + 1), 2 * k as i32 - 1);
    PolyT::constant(c)
}

/// `a^(2k-1) (1 + a^-1) (T - k + shift)`.
fn even_expected(k: i64, shift: i64) -> PolyT {
    let scale = &LaurentA::alpha(2 * k as i32 - 1) * &(LaurentA::one() + LaurentA::alpha(-1));
    binom_poly(shift - k, 1).scale_laurent(&scale)
}

fn criterion_1(engine: &Engine) -> Outcome {
    let started = Instant::now();
    for conv in CONVENTIONS {
        let cfg = EvalConfig::default().with_convention(conv);
        for k in -3..=3 {
            let q = engine.recover_q(&two_strand(2 * k + 1), &cfg, 3).map(|h| h.poly);
            if q.as_ref() != Ok(&odd_expected(k)) {
                return fail(format!("k = {k}, {}: got {q:?}", conv.name()));
            }
            assert_eq!(two_strand_closed_form(2 * k + 1, conv), odd_expected(k));
        }
    }
    let t = started.elapsed();
    if t >= Duration::from_secs(1) {
        return fail(format!("took {t:?}"));
    }
    ok(format!("k = -3..3, both conventions, {t:?}"))
}

fn criterion_2(engine: &Engine) -> Outcome {
    let started = Instant::now();
    for (conv, shift) in [(LeafConvention::Paper, 0), (LeafConvention::Forced, 1)] {
        let cfg = EvalConfig::default().with_convention(conv);
        for k in -3..=3 {
            let q = engine.recover_q(&two_strand(2 * k), &cfg, 3).map(|h| h.poly);
            if q.as_ref() != Ok(&even_expected(k, shift)) {
                return fail(format!("k = {k}, {}: got {q:?}", conv.name()));
            }
        }
    }
    let t = started.elapsed();
    if t >= Duration::from_secs(1) {
        return fail(format!("took {t:?}"));
    }
    ok(format!("paper T-k, forced T-k+1, {t:?}"))
}

fn criterion_3(engine: &Engine, spec: &FuzzSpec, cfg: &EvalConfig) -> Outcome {
    let started = Instant::now();
    let r = laws::check_stabilization(engine, spec, cfg, 5);
    let t = started.elapsed();
    let mut out = from_reports(std::slice::from_ref(&r));
    if r.notes.len() != r.cases {
        out = fail(format!("T0 reported for {} of {} words", r.notes.len(), r.cases));
    }
    if t >= Duration::from_secs(300) {
        out = fail(format!("took {t:?}"));
    }
    let exact = r.notes.iter().filter(|n| !n.contains("<=")).count();
    out.detail = format!("{}; T0 exact for {exact}, at or below floor for {}; {t:?}", out.detail, r.notes.len() - exact);
    out
}

fn criterion_8(engine: &Engine, spec: &FuzzSpec) -> Outcome {
    let forced = laws::check_tree_independence(engine, spec, LeafConvention::Forced);
    let paper = laws::check_tree_independence(engine, spec, LeafConvention::Paper);
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    let archived = std::fs::create_dir_all(&dir)
        .and_then(|_| std::fs::write(dir.join(format!("{}.json", paper.law)), paper.to_json() + "\n"));
    let mut out = from_reports(&[forced, paper]);
    match archived {
        Ok(()) => out.detail = format!("{}; paper report archived in {}", out.detail, dir.display()),
        Err(e) => out = fail(format!("could not archive paper report: {e}")),
    }
    out
}

fn criterion_10(engine: &Engine) -> Outcome {
    let a = BraidWord::new(2, vec![1, 1, 1]).unwrap();
    let b = BraidWord::new(3, vec![1, 2, 1, 2]).unwrap();
    let cfg = EvalConfig::default();
    let fa = engine.eval_f(&a, &cfg).0;
    let fb = engine.eval_f(&b, &cfg).0;
    let qa = engine.recover_q(&a, &cfg, 3).map(|h| h.poly);
    let qb = engine.recover_q(&b, &cfg, 3).map(|h| h.poly);
    if fa != fb || qa != qb || qa.is_err() {
        return fail(format!("F {fa} vs {fb}; Q {qa:?} vs {qb:?}"));
    }
    ok(format!("Q = {}", qa.unwrap()))
}

fn criterion_11(spec: &FuzzSpec) -> Outcome {
    let cfg = EvalConfig::default();
    let mut worst = Duration::ZERO;
    for k in -15..=15 {
        let engine = Engine::new();
        let started = Instant::now();
        if let Err(e) = engine.recover_q(&two_strand(k), &cfg, 3) {
            return fail(format!("k = {k}: {e}"));
        }
        worst = worst.max(started.elapsed());
    }
    if worst >= Duration::from_secs(1) {
        return fail(format!("slowest sigma_1^k took {worst:?}"));
    }
    let seven = FuzzSpec { seed: spec.seed, max_strands: 7, max_length: 14, case_count: 0, move_budget: 0 };
    let mut big = Duration::ZERO;
    let mut tried = 0;
    for case in 0..64 {
        let mut rng = seven.case_rng(case);
        let letters: Vec<i32> = (0..14)
            .map(|_| {
                let i = rand::Rng::random_range(&mut rng, 1..7);
                if rand::Rng::random_bool(&mut rng, 0.5) { i } else { -i }
            })
            .collect();
        let w = BraidWord::new(7, letters).unwrap();
        let engine = Engine::new();
        let started = Instant::now();
        let q = engine.recover_q(&w, &cfg, 3);
        let direct = engine.eval_q_direct(&w, &cfg);
        let t = started.elapsed();
        match (q, direct) {
            (Ok(q), Ok(d)) if q.poly == d.poly => {}
            (q, d) => return fail(format!("{w}: {q:?} / {d:?}")),
        }
        big = big.max(t);
        tried += 1;
        if tried == 8 {
            break;
        }
    }
    if big >= Duration::from_secs(60) {
        return fail(format!("slowest 7-strand word took {big:?}"));
    }
    let corpus: String = spec
        .corpus()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let letters: Vec<String> = w.letters().iter().map(i32::to_string).collect();
            format!("case{i} ; {} ; {}\n", w.strands(), letters.join(" "))
        })
        .collect();
    let outputs: Vec<String> = [1, 2, 8]
        .iter()
        .map(|&n| par::with_threads(Some(n), || cmd_corpus(&Engine::new(), &cfg, &corpus)))
        .collect();
    let shared = Engine::new();
    let shared_runs: Vec<String> = [8, 1].iter().map(|&n| par::with_threads(Some(n), || cmd_corpus(&shared, &cfg, &corpus))).collect();
    if outputs.iter().chain(&shared_runs).any(|o| o != &outputs[0]) {
        return fail("corpus output differs across worker counts");
    }
    let reports: Vec<String> = [1, 2, 8]
        .iter()
        .map(|&n| {
            par::with_threads(Some(n), || {
                laws::check_degree_law(&Engine::new(), spec, &cfg).to_json()
            })
        })
        .collect();
    if reports.iter().any(|r| r != &reports[0]) {
        return fail("law report differs across worker counts");
    }
    ok(format!(
        "slowest sigma_1^k {worst:?}; slowest of {tried} 7-strand 14-letter words {big:?}; 1/2/8 workers byte-identical ({} bytes)",
        outputs[0].len()
    ))
}

fn main() {
    let engine = Engine::new();
    let cfg = EvalConfig::default();
    let corpus = FuzzSpec::default();
    let fuzz = FuzzSpec::default().with_cases(500);
    let negstab = FuzzSpec::default().with_cases(100);

    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &dyn Fn() -> Outcome| {
        let o = f();
        println!("criterion {n:>2} {name:<28} {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o));
    };
    run(1, "odd two-strand family", &|| criterion_1(&engine));
    run(2, "even two-strand family", &|| criterion_2(&engine));
    run(3, "stabilization", &|| criterion_3(&engine, &corpus, &cfg));
    run(4, "degree law", &|| from_reports(&[laws::check_degree_law(&engine, &corpus, &cfg)]));
    run(5, "parity law", &|| from_reports(&[laws::check_parity_knot(&engine, &corpus, &cfg)]));
    run(6, "leading-coefficient law", &|| from_reports(&[laws::check_leading_coeff_mod(&engine, &corpus, &cfg)]));
    run(7, "skein and invariance fuzz", &|| {
        from_reports(&[
            laws::check_skein_identity(&engine, &fuzz, &cfg),
            laws::check_transverse_invariance(&engine, &fuzz, &cfg),
            laws::check_negative_stabilization(&engine, &negstab, &cfg),
        ])
    });
    run(8, "tree independence", &|| criterion_8(&engine, &corpus));
    run(9, "cross-engine oracle", &|| from_reports(&[laws::check_cross_engine(&engine, &corpus, &cfg)]));
    run(10, "presentation independence", &|| criterion_10(&engine));
    run(11, "performance and determinism", &|| criterion_11(&corpus));

    let failed: Vec<usize> = results.iter().filter(|(_, _, o)| !o.pass).map(|(n, _, _)| *n).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
