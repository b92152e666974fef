//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any fail.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use lrc_spread::bounds::{dim_bound_eq3, length_bound_eq5, prior_length_bounds, wang_bound};
use lrc_spread::cli::{self, build_code, verify_matrix, BuiltCode};
use lrc_spread::codec::{
    min_dependent_columns, min_distance, min_weight_in_row_space, min_weight_oracle, Distance, LrcCode,
};
use lrc_spread::construct::{guaranteed_pairs, verify_conditions, Policy};
use lrc_spread::io;
use lrc_spread::matrix::Matrix;
use lrc_spread::spread::Spread;
use lrc_spread::Field;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    check(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn criterion_1() -> Outcome {
    let cases = [
        ("h1.json", io::h1(), (9, 2, 7, 2), 4, "(9, 2, 7, 2)_4"),
        ("h2.json", io::h2(), (18, 8, 7, 2), 7, "(18, 8, 7, 2)_7"),
    ];
    let mut notes = Vec::new();
    for (name, mf, (n, k, d, r), q, line) in cases {
        let start = Instant::now();
        let rep = verify_matrix(&mf).map_err(|e| e.to_string())?;
        let got = (rep.n, rep.k, rep.d, rep.r);
        check(got == (n, k, Distance::Exact(d), Some(r)) && rep.q == q, || {
            format!("{name}: got {got:?} over GF({})", rep.q)
        })?;
        check(rep.classification_at_q.map(|c| c.to_string()).as_deref() == Some("almost-optimal"), || {
            format!("{name}: classification {:?}", rep.classification_at_q)
        })?;
        check(rep.consistent(), || format!("{name}: {:?}", rep.problems))?;
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let path = fixture(name);
        let code = cli::run(["lrc".into(), "verify".into(), path.into_os_string()], &mut out, &mut err);
        let text = String::from_utf8_lossy(&out);
        check(code == 0 && text.contains(line) && text.contains("almost-optimal"), || {
            format!("{name}: exit {code}, output {text:?}")
        })?;
        let t = within(Duration::from_secs(5), start)?;
        notes.push(format!("{line} almost-optimal in {t:.2?}"));
    }
    Ok(notes.join("; "))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let f = Field::with_order(q as u64).map_err(|e| e.to_string())?;
        let s = Spread::build(&f);
        check(s.len() == (q * q + 1) as usize, || format!("q = {q}: {} planes", s.len()))?;
        check(s.verify().is_valid(), || format!("q = {q}: {:?}", s.verify()))?;
        // Every nonzero vector lies in exactly one plane: covering plus
        // trivial pairwise intersection.
        let mut hits = vec![0u32; (q as usize).pow(4)];
        for pl in s.planes() {
            for a in 0..q {
                for b in 0..q {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let v: Vec<u32> =
                        (0..4).map(|i| f.add(f.mul(a, pl.basis[0][i]), f.mul(b, pl.basis[1][i]))).collect();
                    check(v.iter().any(|&x| x != 0), || format!("q = {q}: plane {} is degenerate", pl.id))?;
                    let idx = v.iter().rev().fold(0usize, |acc, &x| acc * q as usize + x as usize);
                    hits[idx] += 1;
                }
            }
        }
        check(hits[0] == 0 && hits[1..].iter().all(|&h| h == 1), || {
            format!("q = {q}: a vector is covered 0 or 2+ times")
        })?;
    }
    let t = within(Duration::from_secs(10), start)?;
    Ok(format!("q in {{2,3,4,5,7,8,9}}: q^2+1 planes partition every nonzero vector ({t:.2?})"))
}

struct Run {
    q: u32,
    policy: Policy,
    built: BuiltCode,
}

const QS: [u32; 5] = [4, 5, 7, 8, 9];
const SEEDS: std::ops::RangeInclusive<u64> = 1..=20;

fn build_all() -> Result<Vec<Run>, String> {
    let mut runs = Vec::new();
    for q in QS {
        let f = Field::with_order(q as u64).map_err(|e| e.to_string())?;
        let spread = Spread::build(&f);
        let policies = std::iter::once(Policy::Lex).chain(SEEDS.map(Policy::Seeded));
        for policy in policies {
            let built = build_code(&spread, policy).map_err(|e| format!("q = {q}, {policy:?}: {e}"))?;
            runs.push(Run { q, policy, built });
        }
    }
    Ok(runs)
}

/// Least m with 9 m^2 >= 2 q^2, i.e. the ceiling of sqrt(2) q / 3, at least 3.
fn threshold(q: u32) -> usize {
    let q = q as u64;
    let m = (1..).find(|&m: &u64| 9 * m * m >= 2 * q * q).unwrap();
    m.max(3) as usize
}

fn criterion_3(runs: &[Run], elapsed: Duration) -> Outcome {
    check(elapsed < Duration::from_secs(120), || format!("construction took {elapsed:.2?}"))?;
    let expected = [3, 3, 4, 4, 5];
    for (q, e) in QS.iter().zip(expected) {
        check(threshold(*q) == e && guaranteed_pairs(*q as u64) == e as u64, || format!("threshold at q = {q}"))?;
    }
    let mut best = Vec::new();
    for q in QS {
        let mine: Vec<&Run> = runs.iter().filter(|r| r.q == q).collect();
        check(mine.iter().filter(|r| matches!(r.policy, Policy::Seeded(_))).count() >= 20, || {
            format!("q = {q}: too few seeds")
        })?;
        for r in &mine {
            let l = r.built.pairs();
            let tag = format!("q = {q}, {:?}", r.policy);
            check(l >= threshold(q), || format!("{tag}: L = {l} below {}", threshold(q)))?;
            check(verify_conditions(&r.built.construction.sequence).passed(), || format!("{tag}: conditions fail"))?;
            check((3 * l) as u64 <= length_bound_eq5(q as u64), || format!("{tag}: n = {} too long", 3 * l))?;
            check(3 * l as u64 <= (q as u64).pow(2) + q as u64 + 3, || format!("{tag}: n exceeds q^2+q+3"))?;
        }
        best.push(format!("q={q}:L<={}", mine.iter().map(|r| r.built.pairs()).max().unwrap()));
    }
    Ok(format!("{} runs meet the pair guarantee and length bound; best {} ({elapsed:.2?})", runs.len(), best.join(" ")))
}

fn criterion_4(runs: &[Run]) -> Outcome {
    for r in runs {
        let l = r.built.pairs();
        let code = r.built.code.as_ref().ok_or_else(|| format!("q = {}, {:?}: no code", r.q, r.policy))?;
        let k = code.dimension() as i64;
        let bound = dim_bound_eq3(3 * l as u64, 2, r.q as u64).map_err(|e| e.to_string())?;
        check(k == 2 * l as i64 - 4 && k == bound, || format!("q = {}, L = {l}: k = {k}, bound {bound}", r.q))?;
    }
    Ok(format!("k = 2L - 4 equals the dimension bound for all {} codes", runs.len()))
}

fn criterion_5(runs: &[Run]) -> Outcome {
    let (mut sevens, mut eights) = (0, 0);
    for r in runs {
        let code = r.built.code.as_ref().ok_or("missing code")?;
        let d = min_distance(code, 8);
        let n = code.len() as u32;
        let tag = format!("q = {}, {:?}", r.q, r.policy);
        match d {
            Distance::Exact(7) => sevens += 1,
            Distance::Exact(8) => {
                check(n <= r.q + 4, || format!("{tag}: d = 8 with n = {n} > q + 4"))?;
                eights += 1
            }
            other => return Err(format!("{tag}: d = {other}")),
        }
    }
    Ok(format!("d = 7 for {sevens} codes, d = 8 for {eights}; every code with n > q + 4 has d = 7"))
}

fn random_full_rank(rng: &mut ChaCha8Rng, f: &Field, rows: usize, cols: usize) -> Matrix {
    loop {
        let data: Vec<Vec<u32>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..f.order())).collect()).collect();
        let m = Matrix::from_rows(f, &data).unwrap();
        if m.rank() == rows {
            return m;
        }
    }
}

fn criterion_6(runs: &[Run]) -> Outcome {
    let start = Instant::now();
    let h1 = LrcCode::from_parity_check(io::h1().to_matrix().unwrap(), None).map_err(|e| e.to_string())?;
    let (d, o) = (min_distance(&h1, 9), min_weight_oracle(&h1).map_err(|e| e.to_string())?);
    check(d == Distance::Exact(o) && o == 7, || format!("H1: {d} vs oracle {o}"))?;

    let mut q4 = 0;
    for r in runs.iter().filter(|r| r.q == 4) {
        let code = r.built.code.as_ref().ok_or("missing code")?;
        let d = min_distance(code, code.len());
        let o = min_weight_oracle(code).map_err(|e| e.to_string())?;
        check(d == Distance::Exact(o), || format!("q = 4, {:?}: {d} vs oracle {o}", r.policy))?;
        q4 += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..100 {
        let f = Field::with_order(if i % 2 == 0 { 2 } else { 3 }).unwrap();
        let n = rng.gen_range(2..=14);
        let k = rng.gen_range(1..=8.min(n - 1));
        let h = random_full_rank(&mut rng, &f, n - k, n);
        let g =
            Matrix::from_rows(&f, &h.kernel_basis().into_iter().map(|v| v.into_inner()).collect::<Vec<_>>()).unwrap();
        let d = min_dependent_columns(&h, n);
        let o = min_weight_in_row_space(&g).map_err(|e| e.to_string())?.iter().filter(|&&x| x != 0).count();
        check(d == Distance::Exact(o), || {
            format!("random code {i} (n = {n}, k = {k}, q = {}): {d} vs {o}", f.order())
        })?;
    }
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!("H1, {q4} constructed q = 4 codes and 100 random codes agree ({t:.2?})"))
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .filter(|m| m.count_ones() as usize <= max)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

fn erase(cw: &[u32], pattern: &[usize]) -> Vec<Option<u32>> {
    let mut w: Vec<Option<u32>> = cw.iter().map(|&x| Some(x)).collect();
    for &i in pattern {
        w[i] = None;
    }
    w
}

fn random_codeword(code: &LrcCode, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let msg: Vec<u32> = (0..code.dimension()).map(|_| rng.gen_range(0..code.field().order())).collect();
    code.encode(&msg).unwrap()
}

fn check_local(code: &LrcCode, cw: &[u32], name: &str) -> Result<(), String> {
    for pos in 0..code.len() {
        let rep = code.repair_local(&erase(cw, &[pos]), pos).map_err(|e| format!("{name}: {e}"))?;
        check(rep.value == cw[pos] && rep.helpers.len() == 2, || {
            format!("{name}: local repair of {pos} gave {rep:?}")
        })?;
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h1 = LrcCode::from_parity_check(io::h1().to_matrix().unwrap(), None).map_err(|e| e.to_string())?;
    let patterns = subsets(9, 6);
    check(patterns.len() == 465, || format!("{} patterns", patterns.len()))?;
    for _ in 0..50 {
        let cw = random_codeword(&h1, &mut rng);
        for p in &patterns {
            let got = h1.repair_global(&erase(&cw, p)).map_err(|e| format!("H1 {p:?}: {e}"))?;
            check(got.codeword == cw, || format!("H1: pattern {p:?} misrepaired"))?;
        }
        check_local(&h1, &cw, "H1")?;
    }

    let h2 = LrcCode::from_parity_check(io::h2().to_matrix().unwrap(), None).map_err(|e| e.to_string())?;
    let samples = 10_000;
    for _ in 0..samples {
        let cw = random_codeword(&h2, &mut rng);
        let w = rng.gen_range(1..=6);
        let p = rand::seq::index::sample(&mut rng, 18, w).into_vec();
        let got = h2.repair_global(&erase(&cw, &p)).map_err(|e| format!("H2 {p:?}: {e}"))?;
        check(got.codeword == cw, || format!("H2: pattern {p:?} misrepaired"))?;
    }
    for _ in 0..50 {
        check_local(&h2, &random_codeword(&h2, &mut rng), "H2")?;
    }
    Ok(format!("H1: 465 patterns x 50 codewords; H2: {samples} sampled patterns; single erasures local with 2 helpers"))
}

fn criterion_8() -> Outcome {
    for q in [4u64, 5, 7, 8, 9, 11, 13, 16, 25, 32] {
        let eq5 = length_bound_eq5(q);
        check(eq5 == q * q + q + 3, || format!("q = {q}: eq5 = {eq5}"))?;
        // q^2+q+3 < (q^4-1)/(q-1) < 3q^4/(2(q-1)), cleared of denominators.
        check(eq5 * (q - 1) < q.pow(4) - 1, || format!("q = {q}: first inequality"))?;
        check(2 * (q.pow(4) - 1) < 3 * q.pow(4), || format!("q = {q}: second inequality"))?;
        let prior = prior_length_bounds(7, 2, q).map_err(|e| e.to_string())?;
        check((eq5 as f64) < prior.chen && prior.chen < prior.guruswami, || format!("q = {q}: {prior:?}"))?;
    }
    let mut count = 0;
    for r in [2u64, 3] {
        for q in [4u64, 8, 16] {
            for n in (r + 1..=200).step_by(r as usize + 1) {
                let k = dim_bound_eq3(n, r, q).map_err(|e| e.to_string())?;
                let w = wang_bound(n, r, q).map_err(|e| e.to_string())?;
                check(k <= w.floor, || format!("n = {n}, r = {r}, q = {q}: {k} > {}", w.floor))?;
                check(w.floor as f64 <= w.value + 1e-9 && w.value < w.floor as f64 + 1.0 + 1e-9, || {
                    format!("n = {n}, r = {r}, q = {q}: floor {} of {}", w.floor, w.value)
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("length bound below both prior bounds for 10 fields; dimension bound <= floor for {count} cases"))
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("bundled matrices reproduce exactly", criterion_1()));
    results.push(("spread correctness", criterion_2()));
    let start = Instant::now();
    let runs = build_all();
    let elapsed = start.elapsed();
    match runs {
        Ok(runs) => {
            results.push(("pair guarantee and length bound", criterion_3(&runs, elapsed)));
            results.push(("dimension bound attained", criterion_4(&runs)));
            results.push(("distance is 7 or 8", criterion_5(&runs)));
            results.push(("distance matches codeword oracle", criterion_6(&runs)));
        }
        Err(e) => {
            for name in [
                "pair guarantee and length bound",
                "dimension bound attained",
                "distance is 7 or 8",
                "distance matches codeword oracle",
            ] {
                results.push((name, Err(e.clone())));
            }
        }
    }
    results.push(("repair correctness", criterion_7()));
    results.push(("bound comparisons", criterion_8()));

    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("PASS criterion {}: {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {msg}", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
