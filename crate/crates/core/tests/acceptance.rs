//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use faer::c64;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use truncation_lab::discretize::{
    make_grid, multiplier_operator, singular_values, triangular_truncate, Half,
};
use truncation_lab::fourier::sgn_fourier_coefficient;
use truncation_lab::seqcore::{
    construct_odd_support, decreasing_rearrangement, DecreasingWeights, LateralSequence,
};
use truncation_lab::transforms::hilbert_discrete;
use truncation_lab::verify::{
    brute_force_min_ineq, check_chain, check_fact1, check_lemma2, check_lemma3, check_pointwise_ineq,
    check_theorem,
};

struct Outcome {
    passed: bool,
    summary: String,
}

impl Outcome {
    fn new(passed: bool, summary: impl Into<String>) -> Self {
        Self { passed, summary: summary.into() }
    }
}

fn random_odd_support(rng: &mut ChaCha8Rng, terms: usize, reach: i64) -> LateralSequence {
    let mut indices: Vec<i64> = (-reach..=reach).filter(|n| n.rem_euclid(2) == 1).collect();
    let mut pairs = Vec::with_capacity(terms);
    for _ in 0..terms.min(indices.len()) {
        let n = indices.swap_remove(rng.gen_range(0..indices.len()));
        pairs.push((n, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    }
    LateralSequence::from_pairs(pairs)
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

// 1. coefficient form of the sgn-multiplier identity
fn criterion_fact1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let inputs = [
        ("delta1", LateralSequence::delta(1)),
        ("delta1+0.5delta3", LateralSequence::from_real(1, &[1.0, 0.0, 0.5])),
        ("random8", random_odd_support(&mut rng, 8, 15)),
    ];
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut ok = true;
    for (_, x) in &inputs {
        let r = check_fact1(x, 32, 1 << 16).expect("fact1");
        worst = worst.max(-r.worst_margin);
        ok &= r.passed && -r.worst_margin <= 1e-8;
    }
    let elapsed = start.elapsed();
    ok &= within(elapsed, 10);
    Outcome::new(ok, format!("max |quadrature - 2i H_d x| = {worst:.2e} (<= 1e-8), {elapsed:.2?} (< 10 s)"))
}

/// Composite Simpson rule on [a, b], independent of the library's midpoint rule.
fn simpson(f: impl Fn(f64) -> Complex64, a: f64, b: f64, panels: usize) -> Complex64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for j in 1..panels {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + j as f64 * h) * w;
    }
    acc * (h / 3.0)
}

// 2. Fourier coefficients of sgn
fn criterion_sgn_coefficients() -> Outcome {
    let mut worst = 0.0f64;
    for k in -64i64..=64 {
        let e = |t: f64| Complex64::from_polar(1.0, k as f64 * t);
        let oracle = simpson(e, 0.0, PI, 1 << 14) - simpson(e, -PI, 0.0, 1 << 14);
        worst = worst.max((sgn_fourier_coefficient(k) - oracle).norm());
    }
    Outcome::new(worst <= 1e-8, format!("max deviation over |k| <= 64: {worst:.2e} (<= 1e-8)"))
}

/// Largest distance in a greedy nearest-neighbour matching of two multisets.
fn multiset_distance(expected: &[c64], numeric: &[c64]) -> f64 {
    let mut pool = numeric.to_vec();
    let mut order = expected.to_vec();
    order.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let mut worst = 0.0f64;
    for e in order {
        let (idx, d) = pool
            .iter()
            .enumerate()
            .map(|(i, v)| (i, (v - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("pool exhausted");
        worst = worst.max(d);
        pool.swap_remove(idx);
    }
    worst
}

// 3. band-limited exactness of the discretized multiplier
fn criterion_band_limited() -> Outcome {
    let grid = make_grid(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut inputs = vec![LateralSequence::delta(1), LateralSequence::from_real(-8, &[1.0; 17])];
    for _ in 0..5 {
        let vals = (0..17)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        inputs.push(LateralSequence::from_values(-8, vals));
    }
    let mut worst_eig = 0.0f64;
    let mut worst_mu = 0.0f64;
    let mut ok = true;
    for x in &inputs {
        let a = multiplier_operator(x, &grid);
        let scale = x.l1_norm();
        let mut expected: Vec<c64> = (-32..32).map(|n| x.get(n)).collect();
        expected.truncate(64);
        let numeric = a.matrix().eigenvalues().expect("eigenvalues");
        let d_eig = multiset_distance(&expected, &numeric) / scale;
        let s = singular_values(&a, 64).unwrap();
        let mu = decreasing_rearrangement(x);
        let d_mu = (0..64).map(|k| (s.get(k) - mu.get(k)).abs()).fold(0.0, f64::max) / scale;
        worst_eig = worst_eig.max(d_eig);
        worst_mu = worst_mu.max(d_mu);
        ok &= d_eig <= 1e-10 && d_mu <= 1e-10;
    }
    Outcome::new(
        ok,
        format!("eigenvalue deviation {worst_eig:.2e}, mu deviation {worst_mu:.2e} (relative to sum|x|, <= 1e-10)"),
    )
}

// 4. four-block decomposition of T(a)
fn criterion_lemma2() -> Outcome {
    let x = LateralSequence::from_real(1, &[1.0, 0.0, 0.5]);
    let grids = [128, 256, 512, 1024];
    let start = Instant::now();
    let r = check_lemma2(&x, &grids, 8).expect("lemma2");
    let elapsed = start.elapsed();
    let d: Vec<f64> = r.details.iter().map(|d| d.lhs).collect();
    let at512 = d[2];
    let strictly = d.windows(2).all(|w| w[1] < w[0]);
    let ok = r.passed && at512 <= 5e-2 && strictly && within(elapsed, 60);
    let seq: Vec<String> = d.iter().map(|v| format!("{v:.2e}")).collect();
    Outcome::new(
        ok,
        format!("discrepancy [{}] over N = 128..1024, strictly decreasing = {strictly}, {elapsed:.2?} (< 60 s)", seq.join(", ")),
    )
}

// 5. spectrum of the compressed transform
fn criterion_lemma3() -> Outcome {
    let r = check_lemma3(&LateralSequence::delta(1), 1024, 16, 8).expect("lemma3");
    // closed form: ½|(H_d δ₁)(2n)| = 1/(2π|1 − 2n|)
    let mut expected: Vec<f64> = (-64i64..=64).map(|n| 1.0 / (2.0 * PI * (1 - 2 * n).abs() as f64)).collect();
    expected.sort_by(|a, b| b.total_cmp(a));
    let mut worst = 0.0f64;
    for (d, want) in r.details.iter().zip(&expected) {
        worst = worst.max((d.lhs - want).abs() / want);
    }
    let leading = r.details[0].lhs;
    let ok = r.passed && r.details.len() == 16 && worst <= 1e-2 && (leading - 0.159_154_943).abs() / 0.159_154_943 <= 1e-2;
    Outcome::new(ok, format!("max relative error {worst:.2e} (<= 1e-2), leading value {leading:.5} (1/2pi = 0.15915)"))
}

/// (1/8π)(S_d μ)(k) by direct summation.
fn calderon_bound(mu: &[f64], k: usize) -> f64 {
    let head: f64 = mu.iter().take(k + 1).sum::<f64>() / (k as f64 + 1.0);
    let tail: f64 = mu.iter().enumerate().skip(k).map(|(j, v)| v / (j as f64 + 1.0)).sum();
    (head + tail) / (8.0 * PI)
}

fn theorem_corpus() -> [(&'static str, DecreasingWeights); 3] {
    [
        ("(1)", DecreasingWeights::singleton()),
        ("geometric(1/2,16)", DecreasingWeights::geometric(0.5, 16).unwrap()),
        ("harmonic(16)", DecreasingWeights::harmonic(16)),
    ]
}

// 6. lower bound for the truncated multiplier
fn criterion_theorem() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut worst_ratio = f64::INFINITY;
    let mut first_singleton = 0.0;
    for (name, mu) in theorem_corpus() {
        let r = check_theorem(&mu, 1024, 16, 1e-2).expect("theorem");
        ok &= r.passed;
        for d in &r.details {
            let bound = calderon_bound(mu.as_slice(), d.index as usize);
            ok &= (d.rhs - bound).abs() <= 1e-14 && d.lhs >= 0.99 * bound;
            worst_ratio = worst_ratio.min(d.lhs / bound);
        }
        if name == "(1)" {
            first_singleton = r.details[0].lhs;
            ok &= first_singleton >= 0.99 / (4.0 * PI);
        }
    }
    let elapsed = start.elapsed();
    ok &= within(elapsed, 120);
    Outcome::new(
        ok,
        format!(
            "min mu(k,T(a)) / bound = {worst_ratio:.3} (>= 0.99), mu(0,T(a)) for (1) = {first_singleton:.4} (>= 0.0788), {elapsed:.2?} (< 120 s)"
        ),
    )
}

// 7. both links of the singular-value chain
fn criterion_chain() -> Outcome {
    let grid = make_grid(1024).unwrap();
    let mut ok = true;
    let mut link1 = f64::INFINITY;
    let mut link2 = 0.0f64;
    for (_, mu) in theorem_corpus() {
        let x = construct_odd_support(&mu);
        let t = triangular_truncate(&multiplier_operator(&x, &grid));
        // every singular value of the N/2 block is resolved
        let full = singular_values(&t, 512).unwrap();
        let block = t.block(Half::Positive, Half::Positive);
        let mut compressed = block.singular_values().unwrap();
        compressed.sort_by(|a, b| b.total_cmp(a));
        for k in 0..512 {
            link1 = link1.min(full.get(k) - compressed[k]);
        }
        let r = check_chain(&mu, 1024, 16, 8).expect("chain");
        ok &= r.passed;
        link2 = link2.max(r.diagnostics["compression_rel_err"]);
    }
    ok &= link1 >= -1e-10 && link2 <= 1e-2;
    Outcome::new(
        ok,
        format!("min mu(T(a)) - mu(pT(a)p) = {link1:.2e} (>= -1e-10), max |mu(pT(a)p) - 2mu(pH_dxp)|/. = {link2:.2e} (<= 1e-2)"),
    )
}

// 8. inequalities without discretization
fn criterion_exact_inequalities() -> Outcome {
    let start = Instant::now();
    let m = brute_force_min_ineq(2000);
    let violations = m.diagnostics["violations"];
    let mut ok = m.passed && violations == 0.0;
    let mut worst = f64::INFINITY;
    for mu in [
        DecreasingWeights::singleton(),
        DecreasingWeights::geometric(0.5, 16).unwrap(),
        DecreasingWeights::harmonic(32),
        DecreasingWeights::logarithmic(32),
    ] {
        let r = check_pointwise_ineq(&mu, 10_000).expect("pointwise");
        ok &= r.passed && r.worst_margin >= -1e-12;
        worst = worst.min(r.worst_margin);
    }
    let elapsed = start.elapsed();
    ok &= within(elapsed, 5);
    Outcome::new(
        ok,
        format!("min-inequality violations {violations}, pointwise worst margin {worst:.2e} (>= -1e-12), {elapsed:.2?} (< 5 s)"),
    )
}

// 9. parity and round-trip
fn criterion_parity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    for _ in 0..100 {
        let terms = rng.gen_range(1..12);
        let x = random_odd_support(&mut rng, terms, 41);
        let h = hilbert_discrete(&x, -120, 120).unwrap();
        ok &= (-120i64..=120)
            .filter(|n| n.rem_euclid(2) == 1)
            .all(|n| h.get(n) == Complex64::new(0.0, 0.0));

        let len = rng.gen_range(0..40);
        let mut w: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..5.0)).collect();
        w.sort_by(|a, b| b.total_cmp(a));
        let mu = DecreasingWeights::new(w).unwrap();
        ok &= decreasing_rearrangement(&construct_odd_support(&mu)) == mu;
    }
    Outcome::new(ok, "100 random odd-support inputs: odd entries of H_d x exactly zero, rearrangement round-trip exact")
}

fn strip_timestamp(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
        .collect::<Vec<_>>()
        .join("\n")
}

// 10. reproducible reports
fn criterion_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_ttlab"))
            .args(["verify", "all", "--report"])
            .arg(&path)
            .env("RUST_LOG", "error")
            .stderr(std::process::Stdio::null())
            .status()
            .expect("run ttlab");
        if status.code() != Some(0) {
            return Outcome::new(false, format!("verify all exited with {status}"));
        }
        reports.push(std::fs::read_to_string(&path).unwrap());
    }
    let same = strip_timestamp(&reports[0]) == strip_timestamp(&reports[1]);
    let ts_lines = reports[0].lines().filter(|l| l.contains("\"timestamp\"")).count();
    Outcome::new(
        same && ts_lines == 1,
        format!("two `verify all` reports identical apart from the timestamp line: {same}"),
    )
}

fn main() {
    faer::set_global_parallelism(faer::Par::Seq);
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("fact1 coefficients", criterion_fact1),
        ("sgn Fourier coefficients", criterion_sgn_coefficients),
        ("band-limited exactness", criterion_band_limited),
        ("four-block decomposition", criterion_lemma2),
        ("compressed transform spectrum", criterion_lemma3),
        ("lower bound", criterion_theorem),
        ("singular-value chain", criterion_chain),
        ("discretization-free inequalities", criterion_exact_inequalities),
        ("parity invariants", criterion_parity),
        ("report determinism", criterion_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        if !outcome.passed {
            failed += 1;
        }
        println!("criterion {:>2} [{verdict}] {name}: {}", i + 1, outcome.summary);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
