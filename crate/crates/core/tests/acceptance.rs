//! Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
//! fails. The random corpus seed comes from `PLANEJUMP_SEED` (default 2024).

use std::time::{Duration, Instant};

use planejump::arith::{fmt_rational, rat, Rational, DEFAULT_DEPTH_LIMIT};
use planejump::cluster::EnriquesDiagram;
use planejump::corpus::{random_diagram, CorpusConfig};
use planejump::jumping::{
    antinef_closure, antinef_closure_by, contributes, criterion_value, is_antinef, is_jumping,
    jumping_numbers, relevant, DivisorVector,
};
use planejump::oracle::oracle_jumping_numbers;
use planejump::puiseux::{parse, puiseux_branches, to_diagram};
use planejump::resolution::ResolutionData;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const CUSP_LIMIT: Duration = Duration::from_secs(1);
const ORACLE_LIMIT: Duration = Duration::from_secs(10);
const RELEVANCE_DIAGRAMS: usize = 500;
const UNLOADING_DIAGRAMS: usize = 200;
const PICK_ORDERS: usize = 5;
const SKODA_RANDOM_DIAGRAMS: usize = 100;
const EXHAUSTIVE_BOX: i64 = 200_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], ok: String) -> Outcome {
    match failures.first() {
        None => Outcome { pass: true, detail: ok },
        Some(first) => Outcome {
            pass: false,
            detail: format!("{} failures, first: {first}", failures.len()),
        },
    }
}

fn resolve_poly(text: &str) -> Result<ResolutionData, String> {
    let f = parse(text).map_err(|e| e.to_string())?;
    let branches = puiseux_branches(&f, DEFAULT_DEPTH_LIMIT).map_err(|e| e.to_string())?;
    let d = to_diagram(&branches).map_err(|e| e.to_string())?;
    ResolutionData::new(&d).map_err(|e| e.to_string())
}

fn show(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn show_rats(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("{{{}}}", parts.join(", "))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let r = match resolve_poly("x^4 - y^3") {
        Ok(r) => r,
        Err(e) => return outcome(&[e], String::new()),
    };
    let elapsed = start.elapsed();
    let mut fails = Vec::new();
    if r.exceptional_a() != [3, 4, 8, 12] {
        fails.push(format!("a = {}", show(r.exceptional_a())));
    }
    if r.k() != [1, 2, 4, 6] {
        fails.push(format!("k = {}", show(r.k())));
    }
    if elapsed >= CUSP_LIMIT {
        fails.push(format!("took {elapsed:?}, limit {CUSP_LIMIT:?}"));
    }
    outcome(
        &fails,
        format!(
            "x^4 - y^3: a = {}, k = {} in {elapsed:?} (limit {CUSP_LIMIT:?})",
            show(r.exceptional_a()),
            show(r.k())
        ),
    )
}

fn criterion_2() -> Outcome {
    let r = resolve_poly("x^4 - y^3").expect("criterion 1 covers this");
    let mut fails = Vec::new();
    for j in 0..r.num_exceptional() {
        let rel = relevant(&r, j).unwrap();
        if rel.relevant != (j == 3) || rel.contributed.is_empty() != (j != 3) {
            fails.push(format!("E{j}: relevant {}, contributes {}", rel.relevant, show_rats(&rel.contributed)));
        }
        if j == 3 && rel.witness != Some(rat(11, 12)) {
            fails.push(format!("E3 witness {:?}", rel.witness.as_ref().map(fmt_rational)));
        }
    }
    for l in [rat(5, 8), rat(7, 8)] {
        if is_jumping(&r, &l) || contributes(&r, 2, &l).unwrap_or(true) {
            fails.push(format!("{} jumps or is contributed by E2", fmt_rational(&l)));
        }
    }
    if !contributes(&r, 3, &rat(11, 12)).unwrap_or(false) {
        fails.push("E3 does not contribute 11/12".into());
    }
    outcome(&fails, "only E3 relevant, witness 11/12 contributed; 5/8 and 7/8 do not jump".into())
}

fn criterion_3() -> Outcome {
    let r = match resolve_poly("(x^3-y^2)*(x^2-y^3)") {
        Ok(r) => r,
        Err(e) => return outcome(&[e], String::new()),
    };
    let mut fails = Vec::new();
    if r.exceptional_a() != [4, 5, 5, 10, 10] {
        fails.push(format!("a = {}", show(r.exceptional_a())));
    }
    if r.k() != [1, 2, 2, 4, 4] {
        fails.push(format!("k = {}", show(r.k())));
    }
    let report = jumping_numbers(&r, &rat(1, 1)).unwrap();
    let half = rat(1, 2);
    if report.lct != Some(half.clone()) {
        fails.push(format!("lct {:?}", report.lct.as_ref().map(fmt_rational)));
    }
    match report.records.iter().find(|x| x.lambda == half) {
        None => fails.push("1/2 missing from the report".into()),
        Some(rec) => {
            if !rec.contributing.is_empty() {
                fails.push(format!("1/2 contributed by {:?}", rec.contributing));
            }
            if rec.critical != [0, 3, 4] {
                fails.push(format!("critical set {:?}", rec.critical));
            }
        }
    }
    outcome(
        &fails,
        format!(
            "two_cusps: a = {}, k = {}, lct 1/2 with no single contributor, critical set {{E0, E3, E4}}",
            show(r.exceptional_a()),
            show(r.k())
        ),
    )
}

fn oracle_corpus() -> Vec<String> {
    let mut out = Vec::new();
    for p in 2..=9u32 {
        for q in p + 1..=9 {
            if num_integer::gcd(p, q) == 1 {
                out.push(format!("x^{p} - y^{q}"));
            }
        }
    }
    out.push("x*y".into());
    out.push("(x^3-y^2)*(x^2-y^3)".into());
    out
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let corpus = oracle_corpus();
    let one = rat(1, 1);
    let mut fails = Vec::new();
    for text in &corpus {
        let r = match resolve_poly(text) {
            Ok(r) => r,
            Err(e) => {
                fails.push(format!("{text}: {e}"));
                continue;
            }
        };
        let engine: Vec<Rational> = jumping_numbers(&r, &one)
            .unwrap()
            .jumping_numbers()
            .into_iter()
            .filter(|l| l < &one)
            .collect();
        let oracle = oracle_jumping_numbers(&parse(text).unwrap(), &one).unwrap();
        if engine != oracle {
            fails.push(format!("{text}: engine {} oracle {}", show_rats(&engine), show_rats(&oracle)));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= ORACLE_LIMIT {
        fails.push(format!("took {elapsed:?}, limit {ORACLE_LIMIT:?}"));
    }
    outcome(
        &fails,
        format!(
            "{} polynomials agree with the Newton polygon oracle on (0,1) in {elapsed:?} (limit {ORACLE_LIMIT:?})",
            corpus.len()
        ),
    )
}

fn corpus(seed: u64, n: usize) -> Vec<ResolutionData> {
    let mut rng = StdRng::seed_from_u64(seed);
    let cfg = CorpusConfig::default();
    (0..n)
        .map(|_| ResolutionData::new(&random_diagram(&mut rng, &cfg)).expect("generated diagrams are valid"))
        .collect()
}

fn describe(r: &ResolutionData) -> String {
    let names: Vec<String> = r
        .diagram()
        .branches()
        .iter()
        .map(|b| format!("{}x{}", b.exponents, b.coefficient))
        .collect();
    names.join(" + ")
}

fn criterion_5(rs: &[ResolutionData]) -> Outcome {
    let mut fails = Vec::new();
    let mut relevant_count = 0;
    let mut divisors = 0;
    for r in rs {
        for j in 0..r.num_exceptional() {
            divisors += 1;
            let valence = r.valence(j);
            let passing: Vec<Rational> = (1..=r.a()[j])
                .map(|t| Rational::new(t.into(), r.a()[j].into()))
                .filter(|l| contributes(r, j, l).unwrap_or(false))
                .collect();
            if (valence >= 3) != !passing.is_empty() {
                fails.push(format!("{}: E{j} valence {valence}, passing {}", describe(r), show_rats(&passing)));
            }
            if valence >= 3 {
                relevant_count += 1;
                let w = rat(r.a()[j] - 1, r.a()[j]);
                if !contributes(r, j, &w).unwrap_or(false) {
                    fails.push(format!("{}: E{j} witness {} fails", describe(r), fmt_rational(&w)));
                }
            }
        }
    }
    outcome(
        &fails,
        format!(
            "{} diagrams, {divisors} divisors ({relevant_count} of valence >= 3): relevance iff valence >= 3, witness 1 - 1/a_j passes",
            rs.len()
        ),
    )
}

fn criterion_6(rs: &[ResolutionData]) -> Outcome {
    let mut fails = Vec::new();
    let mut checks = 0usize;
    for r in rs {
        let d = r.diagram();
        for j in 0..r.num_exceptional() {
            let name = describe(r);
            checks += 1;
            let expected = -1 - d.proximate_to(j).len() as i64;
            if r.self_intersection(j) != expected {
                fails.push(format!("{name}: E{j}^2 = {}, expected {expected}", r.self_intersection(j)));
            }
            let a = r.a()[j];
            for t in 1..=2 * a {
                checks += 1;
                let l = Rational::new(t.into(), a.into());
                let v = criterion_value(r, j, &l);
                if v >= r.valence(j) as i64 {
                    fails.push(format!(
                        "{name}: E{j} at {}: -floor(l pi*C).E = {v} >= valence {}",
                        fmt_rational(&l),
                        r.valence(j)
                    ));
                }
            }
            for chain in r.proximity_chains(j) {
                for (i, &c) in chain.iter().enumerate() {
                    checks += 1;
                    if r.a()[c] <= (i as i64 + 1) * a {
                        fails.push(format!("{name}: chain of E{j}: a_{c} = {} <= {} * {a}", r.a()[c], i + 1));
                    }
                }
            }
            checks += 1;
            if r.dot(r.a(), j) != 0 {
                fails.push(format!("{name}: pi*C . E{j} = {}", r.dot(r.a(), j)));
            }
        }
    }
    outcome(
        &fails,
        format!(
            "{} diagrams, {checks} checks: self-intersections, criterion bound, chain inequality, pi*C.E_j = 0",
            rs.len()
        ),
    )
}

fn random_vector<R: Rng>(rng: &mut R, r: &ResolutionData, max: i64) -> DivisorVector {
    DivisorVector {
        exceptional: (0..r.num_exceptional()).map(|_| rng.gen_range(0..=max)).collect(),
        strict: (0..r.num_strict()).map(|_| rng.gen_range(0..=max)).collect(),
    }
}

/// Least antinef vector above `d` found by scanning the box between `d` and
/// `top` (per coordinate). Antinef vectors are closed under minimum, so if
/// the box contains the true closure, the minimum over the box is it.
fn exhaustive_closure(r: &ResolutionData, d: &DivisorVector, top: &[i64]) -> Option<Vec<i64>> {
    let n = r.num_exceptional();
    let mut v = d.exceptional.clone();
    let mut best: Option<Vec<i64>> = None;
    loop {
        let cand = DivisorVector {
            exceptional: v.clone(),
            strict: d.strict.clone(),
        };
        if is_antinef(r, &cand) {
            best = Some(match best {
                None => v.clone(),
                Some(b) => b.iter().zip(&v).map(|(x, y)| *x.min(y)).collect(),
            });
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            if v[i] < top[i] {
                v[i] += 1;
                break;
            }
            v[i] = d.exceptional[i];
            i += 1;
        }
    }
}

fn criterion_7(seed: u64) -> Outcome {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x7);
    let cfg = CorpusConfig::default();
    let mut fails = Vec::new();
    let mut exhaustive = 0;
    let small = CorpusConfig {
        max_branches: 2,
        max_beta0: 3,
        max_coefficient: 1,
    };
    for i in 0..UNLOADING_DIAGRAMS {
        let use_small = i % 2 == 0;
        let diagram: EnriquesDiagram = random_diagram(&mut rng, if use_small { &small } else { &cfg });
        let r = ResolutionData::new(&diagram).unwrap();
        let name = describe(&r);
        let small_case = r.num_exceptional() <= 5;
        let mut d = random_vector(&mut rng, &r, if small_case { 6 } else { *r.a().iter().max().unwrap() });
        if small_case {
            for x in d.strict.iter_mut() {
                *x = (*x).min(1);
            }
        }
        let c = antinef_closure(&r, &d);
        if !is_antinef(&r, &c) || !d.le_exceptional(&c) {
            fails.push(format!("{name}: closure is not an antinef upper bound"));
        }
        if antinef_closure(&r, &c) != c {
            fails.push(format!("{name}: closure not idempotent"));
        }
        let mut bigger = d.clone();
        for x in bigger.exceptional.iter_mut() {
            *x += rng.gen_range(0..=2);
        }
        if !c.le_exceptional(&antinef_closure(&r, &bigger)) {
            fails.push(format!("{name}: closure not monotone"));
        }
        for _ in 0..PICK_ORDERS {
            let mut pick_rng = StdRng::seed_from_u64(rng.gen());
            let other = antinef_closure_by(&r, &d, |off| off[pick_rng.gen_range(0..off.len())]);
            if other != c {
                fails.push(format!("{name}: pick order changes the closure"));
            }
        }
        let top: Vec<i64> = c.exceptional.iter().map(|x| x + 1).collect();
        let volume = top.iter().zip(&d.exceptional).fold(1i64, |v, (t, x)| v.saturating_mul(t - x + 1));
        if small_case && volume <= EXHAUSTIVE_BOX {
            exhaustive += 1;
            match exhaustive_closure(&r, &d, &top) {
                Some(v) if v == c.exceptional => {}
                other => fails.push(format!("{name}: exhaustive search gives {other:?}, unloading {:?}", c.exceptional)),
            }
        }
    }
    if exhaustive < 50 {
        fails.push(format!("only {exhaustive} diagrams small enough for exhaustive search"));
    }
    outcome(
        &fails,
        format!(
            "{UNLOADING_DIAGRAMS} diagrams: idempotent, monotone, {PICK_ORDERS} random pick orders agree, {exhaustive} match exhaustive search"
        ),
    )
}

fn criterion_8(rs: &[ResolutionData]) -> Outcome {
    let mut curves: Vec<(String, ResolutionData)> = oracle_corpus()
        .into_iter()
        .map(|t| {
            let r = resolve_poly(&t).unwrap();
            (t, r)
        })
        .collect();
    curves.extend(rs.iter().take(SKODA_RANDOM_DIAGRAMS).map(|r| (describe(r), r.clone())));
    let one = rat(1, 1);
    let two = rat(2, 1);
    let mut fails = Vec::new();
    let mut checked = 0;
    for (name, r) in &curves {
        if !is_jumping(r, &one) {
            fails.push(format!("{name}: 1 does not jump"));
        }
        let mut grid: Vec<Rational> = Vec::new();
        for &a in r.a() {
            for t in a + 1..=2 * a {
                grid.push(Rational::new(t.into(), a.into()));
            }
        }
        grid.sort();
        grid.dedup();
        for l in grid {
            checked += 1;
            let lhs = is_jumping(r, &l);
            let rhs = l == two || is_jumping(r, &(&l - &one));
            if lhs != rhs {
                fails.push(format!("{name}: at {} jumping {lhs}, shifted {rhs}", fmt_rational(&l)));
            }
        }
    }
    outcome(
        &fails,
        format!("{} curves, {checked} grid points in (1,2]: periodicity holds, 1 always jumps", curves.len()),
    )
}

fn main() {
    let seed: u64 = std::env::var("PLANEJUMP_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(2024);
    println!("acceptance (seed {seed})");
    let rs = corpus(seed, RELEVANCE_DIAGRAMS);
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&rs),
        criterion_6(&rs),
        criterion_7(seed),
        criterion_8(&rs),
    ];
    let mut failed = 0;
    for (i, o) in results.iter().enumerate() {
        println!("criterion {}: {} {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", results.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", results.len());
}
