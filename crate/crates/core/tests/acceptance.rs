//! Acceptance suite: one pass/fail line per criterion. Exits non-zero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ppcodes::checks::CheckStatus;
use ppcodes::distance::{
    exact_min_distance, generator_matrix, lower_bound_delta, regularity_lower_bounds,
    torus_min_distance, DeltaConvention, DistanceMethod,
};
use ppcodes::field::GaloisField;
use ppcodes::fixtures::{self, golden_examples, GoldenExample, EXAMPLE1_DELTA1, EXAMPLE3_DELTA1};
use ppcodes::hilbert::{
    evaluation_matrix, hilbert_torus, hilbert_x, hilbert_x_characters, regularity_index, DEFAULT_RANK_BUDGET,
};
use ppcodes::incidence::{classify_graph, disconnected_strict_check, incidence_matrix, Clutter};
use ppcodes::length::{corollary_checks, count_kernel, kernel_members, length_theorem};
use ppcodes::linalg::rank;
use ppcodes::pipeline::{run, InputKind, ParameterTable, RunConfig};
use ppcodes::toric::{enumerate_torus, enumerate_x, ExponentMatrix, DEFAULT_ENUMERATION_BUDGET as EB};

const LENGTH_TIME_LIMIT: Duration = Duration::from_secs(10);
const TABLE_TIME_LIMIT: Duration = Duration::from_secs(600);
const TORUS_TIME_LIMIT: Duration = Duration::from_secs(300);
const EXACT_BUDGET: u64 = 100_000_000;
const KERNEL_BUDGET: u64 = 100_000_000;
const TORUS_DISTANCE_BUDGET: u64 = 20_000_000_000;

type Outcome = (bool, String);

fn matrix_of(g: &GoldenExample) -> ExponentMatrix {
    match &g.kind {
        InputKind::Matrix(a) => a.clone(),
        InputKind::Graph(c) | InputKind::Clutter(c) => incidence_matrix(c),
    }
}

fn field(q: u64) -> GaloisField {
    GaloisField::new(q).expect("prime power")
}

fn lengths() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for g in golden_examples() {
        let f = field(g.q);
        let a = matrix_of(&g);
        let t = Instant::now();
        let cert = length_theorem(&a.reduce(&f), KERNEL_BUDGET).expect("kernel within budget");
        let t_theorem = t.elapsed();
        let t = Instant::now();
        let x = enumerate_x(&a, &f, EB).expect("enumeration within budget");
        let t_enum = t.elapsed();
        let good = cert.x_size == g.length
            && x.len() as u64 == g.length
            && t_theorem < LENGTH_TIME_LIMIT
            && t_enum < LENGTH_TIME_LIMIT;
        ok &= good;
        notes.push(format!(
            "{} |X|={} (theorem {:.2?}) / {} (enumerated {:.2?})",
            g.name,
            cert.x_size,
            t_theorem,
            x.len(),
            t_enum
        ));
    }
    (ok, notes.join("; "))
}

fn kernels() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for g in golden_examples() {
        let f = field(g.q);
        let reduced = matrix_of(&g).reduce(&f);
        let k = count_kernel(&reduced, KERNEL_BUDGET).expect("kernel within budget");
        ok &= k == g.kernel_size;
        notes.push(format!("{} |M|={k}", g.name));
        if g.name == "example1" {
            let members = kernel_members(&reduced, KERNEL_BUDGET).unwrap();
            let diagonal: Vec<Vec<u64>> = (1..=6).map(|i| vec![i; 5]).collect();
            let same = members == diagonal;
            ok &= same;
            notes.push(format!("example1 M is the diagonal: {same}"));
        }
    }
    (ok, notes.join("; "))
}

fn table_columns(columns: &[&str]) -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    for g in golden_examples() {
        let report = run(&g.config()).expect("golden run");
        let r = fixtures::compare(&g, &report);
        checked += (1..=g.d_max()).count() * columns.len();
        bad.extend(
            r.mismatches
                .into_iter()
                .filter(|m| columns.contains(&m.column.as_str()))
                .map(|m| format!("{} d={:?} {} expected {} got {}", m.example, m.d, m.column, m.expected, m.got)),
        );
    }
    let elapsed = t.elapsed();
    let ok = bad.is_empty() && elapsed < TABLE_TIME_LIMIT;
    (ok, format!("{checked} cells, {} mismatches, {elapsed:.2?} {}", bad.len(), bad.join("; ")))
}

fn dimension_tables() -> Outcome {
    table_columns(&["H_X", "H_T", "Hbar"])
}

fn bound_tables() -> Outcome {
    let (mut ok, mut note) = table_columns(&["delta_lower", "singleton"]);
    let b = lower_bound_delta(50, Some(6), 3, 2, 11, DeltaConvention::Floor).unwrap();
    let rational_ok = b.rational_string() == "7/2" && b.reported == 3;
    ok &= rational_ok;
    note.push_str(&format!("; example3 d=2 rational {} -> {}", b.rational_string(), b.reported));
    (ok, note)
}

fn regularity() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for g in golden_examples() {
        let f = field(g.q);
        let a = matrix_of(&g);
        let x = enumerate_x(&a, &f, EB).unwrap();
        let profile = regularity_index(&f, &x, DEFAULT_RANK_BUDGET).expect("regularity reached");
        let upper = (a.m() as u32 - 1) * (g.q as u32 - 2);
        let good = profile.regularity == g.regularity && profile.regularity <= upper;
        ok &= good;
        notes.push(format!("{} r_X={} <= {upper}", g.name, profile.regularity));
        if let InputKind::Graph(c) = &g.kind {
            let prov = classify_graph(c).unwrap();
            let rb = regularity_lower_bounds(x.len() as u64, a.uniform_alpha(), a.n(), g.q, Some(&prov), Some(profile.regularity));
            let attained = rb.graph_attained == Some(true);
            ok &= attained;
            notes.push(format!("{} graph bound {:?} attained: {attained}", g.name, rb.graph));
        }
    }
    (ok, notes.join("; "))
}

fn torus_oracle() -> Outcome {
    let t = Instant::now();
    let mut cases = 0;
    let mut bad = Vec::new();
    for m in 1..=4usize {
        for q in [3u64, 4, 5, 7, 8, 9] {
            let f = field(q);
            let torus = enumerate_torus(m, &f, EB).unwrap();
            for d in 0..=(m as u32 - 1) * (q as u32 - 2) {
                let by_rank = rank(&f, &evaluation_matrix(&f, &torus, d, u64::MAX).unwrap()) as u64;
                cases += 1;
                if by_rank != hilbert_torus(m, d, q) {
                    bad.push(format!("H_T m={m} q={q} d={d}: rank {by_rank}"));
                }
            }
        }
    }
    let mut distances = 0;
    let mut methods = BTreeSet::new();
    for s in [2usize, 3] {
        for q in [5u64, 7] {
            let f = field(q);
            let torus = enumerate_torus(s, &f, EB).unwrap();
            for d in 0..=(s as u32 - 1) * (q as u32 - 2) {
                let g = generator_matrix(&f, &torus, d, u64::MAX).unwrap();
                let exact = exact_min_distance(&f, &g, TORUS_DISTANCE_BUDGET).unwrap();
                distances += 1;
                methods.insert(exact.method.as_str());
                if !exact.method.is_exact() || exact.value != torus_min_distance(s, d, q) {
                    bad.push(format!("delta_T s={s} q={q} d={d}: {exact:?}"));
                }
            }
        }
    }
    let elapsed = t.elapsed();
    let ok = bad.is_empty() && elapsed < TORUS_TIME_LIMIT;
    (
        ok,
        format!(
            "{cases} Hilbert cases, {distances} distance cases ({}), {elapsed:.2?} {}",
            methods.into_iter().collect::<Vec<_>>().join("/"),
            bad.join("; ")
        ),
    )
}

fn distance_sandwich() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, lo, hi, recorded) in [("example3", 20, 47, EXAMPLE3_DELTA1), ("example1", 864, 1291, EXAMPLE1_DELTA1)] {
        let g = golden_examples().into_iter().find(|g| g.name == name).unwrap();
        let f = field(g.q);
        let x = enumerate_x(&matrix_of(&g), &f, EB).unwrap();
        let gm = generator_matrix(&f, &x, 1, DEFAULT_RANK_BUDGET).unwrap();
        let t = Instant::now();
        let exact = exact_min_distance(&f, &gm, EXACT_BUDGET).unwrap();
        let good = exact.method == DistanceMethod::Brute && lo <= exact.value && exact.value <= hi && exact.value == recorded;
        ok &= good;
        notes.push(format!(
            "{name} delta(1)={} ({}, {:.2?}) in [{lo}, {hi}], recorded {recorded}",
            exact.value,
            exact.method.as_str(),
            t.elapsed()
        ));
    }
    (ok, notes.join("; "))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize, max: u64) -> ExponentMatrix {
    ExponentMatrix::new((0..n).map(|_| (0..m).map(|_| rng.gen_range(0..=max)).collect()).collect()).unwrap()
}

/// Monotonicity, stabilization and positivity facts about one toric set.
fn profile_violations(f: &GaloisField, a: &ExponentMatrix) -> Vec<String> {
    let mut out = Vec::new();
    let q = f.order() as u64;
    let x = enumerate_x(a, f, EB).unwrap();
    if !x.is_subgroup(4096, 2000) {
        out.push("X is not closed under multiplication".into());
    }
    let profile = match regularity_index(f, &x, DEFAULT_RANK_BUDGET) {
        Ok(p) => p,
        Err(e) => return vec![e.to_string()],
    };
    let values: Vec<u64> = (0..=profile.regularity + 3).map(|d| profile.value(d)).collect();
    if !values.windows(2).all(|w| w[0] <= w[1]) || *values.last().unwrap() != x.len() as u64 {
        out.push(format!("H_X not monotone/stabilizing: {values:?}"));
    }
    let extra = hilbert_x(f, &x, profile.regularity + 1, DEFAULT_RANK_BUDGET).unwrap();
    if extra != x.len() as u64 {
        out.push(format!("H_X(r+1) = {extra}"));
    }
    let m = a.m();
    let hbar: Vec<u64> = (0..=(m as u32 - 1) * (q as u32 - 2) + 1).map(|d| hilbert_torus(m, d, q) - profile.value(d)).collect();
    if !hbar.windows(2).all(|w| w[0] <= w[1]) {
        out.push(format!("Hbar not monotone: {hbar:?}"));
    }
    if profile.numerator.contains(&0) || profile.numerator.iter().sum::<u64>() != x.len() as u64 {
        out.push(format!("h-vector {:?}", profile.numerator));
    }
    out
}

fn blank_sampled(mut t: ParameterTable) -> ParameterTable {
    for r in &mut t.rows {
        if r.delta_exact_method == Some(DistanceMethod::Sampled) {
            r.delta_exact = None;
            r.delta_exact_method = None;
        }
    }
    t
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut violations = Vec::new();

    let mut groups = 0;
    for g in golden_examples() {
        violations.extend(profile_violations(&field(g.q), &matrix_of(&g)).into_iter().map(|v| format!("{}: {v}", g.name)));
        groups += 1;
    }
    for _ in 0..20 {
        let q = [3u64, 4, 5, 7, 9][rng.gen_range(0..5)];
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(2..=4));
        let a = random_matrix(&mut rng, n, m, 6);
        violations.extend(profile_violations(&field(q), &a).into_iter().map(|v| format!("{a:?} q={q}: {v}")));
        groups += 1;
    }

    let mut character_cases = 0;
    for i in 0..50 {
        let q = [3u64, 5, 7, 9][i % 4];
        let f = field(q);
        let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_matrix(&mut rng, n, m, 8);
        let x = enumerate_x(&a, &f, EB).unwrap();
        let reduced = a.reduce(&f);
        for d in 0..=(m as u32 - 1) * (q as u32 - 2) {
            let by_rank = hilbert_x(&f, &x, d, u64::MAX).unwrap();
            let by_chars = hilbert_x_characters(&reduced, d);
            character_cases += 1;
            if by_rank != by_chars {
                violations.push(format!("character path {a:?} q={q} d={d}: {by_rank} vs {by_chars}"));
            }
        }
    }

    let mut reps = 0;
    let mut inputs = vec![InputKind::Clutter(fixtures::example2_clutter())];
    for _ in 0..6 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(2..=4));
        inputs.push(InputKind::Matrix(random_matrix(&mut rng, n, m, 9)));
    }
    for input in inputs {
        let mut outs = Vec::new();
        for modulus in [vec![1, 0, 1], vec![2, 1, 1]] {
            let config = RunConfig {
                modulus: Some(modulus),
                exact_budget: 2_000_000,
                ..RunConfig::default_for(9, input.clone())
            };
            let r = run(&config).expect("run");
            let statuses: Vec<(String, CheckStatus)> = r.checks.iter().map(|c| (c.name.clone(), c.status)).collect();
            outs.push((r.length, r.x_enumerated, r.regularity, r.numerator, blank_sampled(r.table), statuses));
        }
        reps += 1;
        if outs[0] != outs[1] {
            violations.push(format!("representation dependence for {input:?}"));
        }
    }

    (
        violations.is_empty(),
        format!(
            "{groups} sets (closure, monotonicity, h-vector), {character_cases} character cases, {reps} inputs under two GF(9) moduli, {} violations {}",
            violations.len(),
            violations.join("; ")
        ),
    )
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Option<Clutter> {
    let edges: Vec<(usize, usize)> =
        (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).filter(|_| rng.gen_bool(p)).collect();
    Clutter::graph(n, &edges).ok()
}

fn corollary_battery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut violations = Vec::new();
    let (mut bipartite, mut non_bipartite, mut discrepant, mut disconnected) = (0, 0, 0, 0);
    for q in [5u64, 7] {
        let f = field(q);
        let (mut bip, mut nonbip, mut disc) = (0, 0, 0);
        let mut attempts = 0;
        while (bip < 6 || nonbip < 6 || disc < 3) && attempts < 10_000 {
            attempts += 1;
            let n = rng.gen_range(3..=6);
            let p = rng.gen_range(0.25..0.8);
            let Some(c) = random_graph(&mut rng, n, p) else { continue };
            let prov = classify_graph(&c).unwrap();
            let slot = match (prov.connected, prov.bipartite) {
                (true, true) => &mut bip,
                (true, false) => &mut nonbip,
                (false, _) => &mut disc,
            };
            if *slot >= 6 {
                continue;
            }
            let a = incidence_matrix(&c);
            let cert = length_theorem(&a.reduce(&f), KERNEL_BUDGET).unwrap();
            let x = enumerate_x(&a, &f, EB).unwrap();
            if x.len() as u64 != cert.x_size {
                violations.push(format!("{c:?}: length theorem {} vs {}", cert.x_size, x.len()));
            }
            let mut checks = corollary_checks(&a, &f, &cert, Some(&prov));
            checks.push(disconnected_strict_check(&prov, q, &cert));
            let rule = checks.iter().find(|c| c.name == "connected_graph_kernel").unwrap();
            if prov.connected && rule.status == CheckStatus::Discrepant {
                // a star: one vertex meets every edge
                discrepant += 1;
                continue;
            }
            for chk in checks.iter().filter(|c| c.status == CheckStatus::Fail) {
                violations.push(format!("q={q} {:?}: {chk}", c.edges()));
            }
            if !prov.connected {
                let strict = checks.iter().find(|c| c.name == "disconnected_strict_bound").unwrap();
                if strict.status != CheckStatus::Pass {
                    violations.push(format!("strict bound not evaluated: {strict}"));
                }
            } else if rule.status != CheckStatus::Pass {
                violations.push(format!("|M| rule not evaluated: {rule}"));
            }
            *slot += 1;
        }
        bipartite += bip;
        non_bipartite += nonbip;
        disconnected += disc;
    }
    let ok = violations.is_empty() && bipartite + non_bipartite >= 10 && disconnected >= 5;
    (
        ok,
        format!(
            "{bipartite} bipartite + {non_bipartite} non-bipartite connected graphs, {disconnected} disconnected, \
             {discrepant} stars set aside (|M| rule assumes every |Y_i| = q-1), {} violations {}",
            violations.len(),
            violations.join("; ")
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("length reproduction", lengths),
        ("kernel reproduction", kernels),
        ("dimension tables", dimension_tables),
        ("bound tables", bound_tables),
        ("regularity", regularity),
        ("torus oracle equivalence", torus_oracle),
        ("distance sandwich", distance_sandwich),
        ("property suites", properties),
        ("corollary battery", corollary_battery),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {} {} {name}: {detail} [{:.2?}]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            t.elapsed()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
