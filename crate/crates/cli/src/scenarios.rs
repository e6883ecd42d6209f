//! Reproduction scenarios. Each criterion is a self-checking function; the
//! named scenarios group them, and the acceptance suite runs all of them.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use shiftlab_core::automata::enumerate::irreducible_binary_graphs;
use shiftlab_core::automata::{
    determinize, determinize_from_full, fisher_cover, is_synchronizing, language_window, periodic_blocks, samples,
    synchronizing_word,
};
use shiftlab_core::coded::{approx_yn, concatenation_window, construct_generators, decode_generator, odd_period_witness};
use shiftlab_core::dynamics::{
    equivalence_report, frobenius, fuzz_equivalences, gap_set, mod_embedding, property_p_witness, GraphLanguage,
    Verdict,
};
use shiftlab_core::spacing::{allowed_blocks, glue, glue_sum_counterexample, mixing_obstruction, pow2_complement_rule};
use shiftlab_core::words::{is_cube_free, thue_morse_prefix, Alphabet, Block, Exactness};

/// Detail line on success, the failing invariant otherwise.
pub type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn b(s: &str) -> Block {
    Block::from(s)
}

fn thue_morse() -> Outcome {
    let t = thue_morse_prefix(4096);
    let bit = |i: usize| t.as_bytes()[i] == b'1';
    for i in 0..4096 {
        check(bit(i) == (i.count_ones() % 2 == 0), format!("t_{i} differs from the parity oracle"))?;
    }
    for n in 0..2048 {
        check(bit(2 * n) == bit(n), format!("t_(2·{n}) != t_{n}"))?;
        check(bit(2 * n + 1) != bit(n), format!("t_(2·{n}+1) != 1 - t_{n}"))?;
    }
    check(is_cube_free(&t), "prefix contains a cube")?;
    check(!t.contains(&b("000")) && !t.contains(&b("111")), "prefix contains 000 or 111")?;
    Ok("4096 symbols cube-free, recursion holds".into())
}

fn construction() -> Outcome {
    let sys = construct_generators(3, 10_000).map_err(|e| e.to_string())?;
    check(sys.s_table() == [0, 1, 2, 8], format!("s-table {:?}", sys.s_table()))?;
    for j in 0..sys.len() {
        let a = sys.block(j).ok_or(format!("a_{j} not materialized"))?;
        check(a.len() % 2 == 0, format!("|a_{j}| odd"))?;
        if j > 0 {
            let w = sys.word_text(&sys.generator(j).unwrap().payload).unwrap();
            check(a.len() == 8 * j + 20 + w.len(), format!("|a_{j}| != 8j + 20 + |w_j|"))?;
        }
        let p = decode_generator(a, &sys).map_err(|e| e.to_string())?;
        check(p.j == j, format!("a_{j} decodes to {}", p.j))?;
        check(p.reassemble() == *a, format!("a_{j} does not reassemble"))?;
    }
    Ok(format!("{} generators, s = {:?}", sys.len(), sys.s_table()))
}

fn even_periods() -> Outcome {
    let sys = construct_generators(3, 10_000).map_err(|e| e.to_string())?;
    let mut seen = Vec::new();
    for (n, max_period) in [(2, 24), (3, 16)] {
        let y = approx_yn(&sys, n).map_err(|e| e.to_string())?;
        let orbits = periodic_blocks(&determinize(&y), max_period);
        let periods: Vec<usize> = orbits.iter().map(|o| o.period).collect();
        check(periods.iter().all(|p| p % 2 == 0), format!("Y_{n}: odd period in {periods:?}"))?;
        check(
            orbits.iter().any(|o| o.block.as_str() == "01"),
            format!("Y_{n}: (01)^∞ missing"),
        )?;
        seen.push(format!("Y_{n}≤{max_period}: {periods:?}"));
    }
    Ok(seen.join("; "))
}

fn no_odd_generators() -> Outcome {
    let sys = construct_generators(3, 10_000).map_err(|e| e.to_string())?;
    let gens: Vec<Block> = (0..sys.len()).map(|j| sys.expand(j).unwrap()).collect();
    check(odd_period_witness(&gens).is_none(), "constructed generators yield an odd witness")?;
    let control = [b("01"), b("011")];
    let w = odd_period_witness(&control).ok_or("control list yields no witness")?;
    check(w.block == w.u.concat(&w.u).concat(&w.w), "witness is not u·u·w")?;
    check(
        w.prime_period % 2 == 1 && w.prime_period > 1 && w.block.len() % w.prime_period == 0,
        "prime period not an odd divisor > 1",
    )?;
    check(w.block.slice(0, w.prime_period).is_primitive(), "period word not primitive")?;
    let flower = shiftlab_core::automata::flower(&Alphabet::binary(), &control).unwrap();
    check(
        determinize_from_full(&flower).accepts(&w.block.repeat(3)),
        "witness orbit not in the control shift",
    )?;
    Ok(format!("control witness {} with prime period {}", w.block, w.prime_period))
}

fn mixing_window() -> Outcome {
    let sys = construct_generators(2, 1000).map_err(|e| e.to_string())?;
    let u = b("01");
    let w = 40;
    let window = concatenation_window(&sys, &[0, 1], 150, u.len() + w).map_err(|e| e.to_string())?;
    let r = gap_set(&window, &u, &u, w);
    for l in (2..=40).step_by(2).chain((17..=40).step_by(2)) {
        check(r.witnessed.contains(&l), format!("ℓ = {l} not witnessed"))?;
    }
    match r.verdict {
        Verdict::CofiniteFrom(n) if n <= 17 => Ok(format!("{} (UNDER_APPROX)", r.verdict)),
        other => Err(format!("verdict {other}")),
    }
}

fn sofic_approximations() -> Outcome {
    let sys = construct_generators(3, 10_000).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for n in 1..=3 {
        let y = approx_yn(&sys, n).map_err(|e| e.to_string())?;
        let p = y.period().map_err(|e| e.to_string())?;
        check(p == 2, format!("period(Y_{n}) = {p}"))?;
        let r = equivalence_report(&y, 80).map_err(|e| e.to_string())?;
        check(r.is_consistent(), format!("Y_{n}: {:?}", r.inconsistencies))?;
        check(
            r.indicators().iter().all(|(_, v)| !v),
            format!("Y_{n}: positive indicator {:?}", r.indicators()),
        )?;
        check(!r.coprime_periodic_unrestricted.is_found(), format!("Y_{n}: coprime periodic points"))?;
        out.push(format!("Y_{n}: period 2, {} Fisher states", r.fisher_states));
    }
    Ok(out.join("; "))
}

fn spacing_shift() -> Outcome {
    let r = pow2_complement_rule();
    let mut tuples = 0;
    for k in 1..=2u32 {
        let parts = allowed_blocks(&r, 1 << k);
        let mut stack: Vec<Vec<Block>> = parts.iter().map(|p| vec![p.clone()]).collect();
        while let Some(t) = stack.pop() {
            let g = glue(&r, k, &t).map_err(|e| e.to_string())?;
            check(g.verdict.allowed, format!("glued {} not allowed", g.block))?;
            tuples += 1;
            if t.len() < 3 {
                for p in &parts {
                    let mut next = t.clone();
                    next.push(p.clone());
                    stack.push(next);
                }
            }
        }
    }
    let obstruction = mixing_obstruction(&r, 6).map_err(|e| e.to_string())?;
    check(obstruction == [1, 2, 4, 8, 16, 32, 64], format!("obstruction {obstruction:?}"))?;
    check(glue_sum_counterexample(8, 64).is_none(), "a + 3m·2^k hit a power of two")?;
    Ok(format!("{tuples} glued tuples allowed, excluded {obstruction:?}"))
}

fn sofic_equivalences() -> Outcome {
    let graphs = irreducible_binary_graphs(4, 6);
    let (_, s) = fuzz_equivalences(&graphs).map_err(|e| e.to_string())?;
    check(
        s.inconsistent.is_empty(),
        format!("{} inconsistent, first {:?}", s.inconsistent.len(), s.inconsistent.first()),
    )?;
    Ok(format!(
        "{} classes ({} trivial, {} mixing, {} not), 0 inconsistencies; unrestricted periodic reading misfires on {}",
        s.instances,
        s.trivial,
        s.mixing,
        s.non_mixing,
        s.unrestricted_periodic_counterexamples.len()
    ))
}

fn fisher() -> Outcome {
    for (name, g) in [("even", samples::even_shift()), ("golden", samples::golden_mean())] {
        let f = fisher_cover(&g).map_err(|e| e.to_string())?;
        check(f.vertex_count() == 2, format!("{name}: {} states", f.vertex_count()))?;
        let cover = determinize_from_full(&f);
        check(is_synchronizing(&cover, &b("1")), format!("{name}: 1 is not synchronizing"))?;
        check(synchronizing_word(&cover, 4).is_some(), format!("{name}: no synchronizing word"))?;
        for l in 0..=8 {
            check(
                language_window(&g, l) == language_window(&f, l),
                format!("{name}: windows differ at {l}"),
            )?;
        }
    }
    let full = samples::full_shift(&Alphabet::binary());
    let f = fisher_cover(&full).map_err(|e| e.to_string())?;
    check(f.vertex_count() == 1, "full shift cover is not a single state")?;
    for l in 0..=8 {
        check(language_window(&full, l) == language_window(&f, l), "full shift windows differ")?;
    }
    Ok("even 2, golden 2, full 1 states; 1 synchronizes; windows equal to L = 8".into())
}

fn frobenius_numbers() -> Outcome {
    fn brute(xs: &[u64], t: u64) -> bool {
        match xs.split_first() {
            None => t == 0,
            Some((&x, rest)) => (0..=t / x).any(|c| brute(rest, t - c * x)),
        }
    }
    let mut out = Vec::new();
    for (xs, want) in [(vec![3, 5], 7), (vec![2, 3], 1), (vec![6, 10, 15], 29)] {
        let r = frobenius(&xs).map_err(|e| e.to_string())?;
        check(r.frobenius == Some(want), format!("{xs:?}: {:?}", r.frobenius))?;
        for &g in &r.non_representable {
            check(!brute(&xs, g), format!("{xs:?}: {g} is representable"))?;
        }
        for t in 1..r.conductor {
            check(
                brute(&xs, t) != r.non_representable.contains(&t),
                format!("{xs:?}: {t} misclassified"),
            )?;
        }
        for t in r.conductor..=r.conductor + 10 * r.gcd {
            check(brute(&xs, t), format!("{xs:?}: {t} not representable"))?;
        }
        out.push(format!("{xs:?} → {want}"));
    }
    Ok(out.join(", "))
}

fn strong_property_p() -> Outcome {
    let lang = GraphLanguage::new(&samples::golden_mean());
    let w = property_p_witness(&lang, 2, 4, 4).map_err(|e| e.to_string())?;
    check(w.n == 1, format!("glue length {}", w.n))?;
    check(w.interleavings_checked == 3 + 9 + 27 + 81, "not every interleaving was checked")?;

    let sys = construct_generators(2, 1000).map_err(|e| e.to_string())?;
    let gens = [sys.expand(0).unwrap(), sys.expand(1).unwrap()];
    let u = b("10");
    let e = mod_embedding(&gens, &u, 60).map_err(|e| e.to_string())?;
    check(e.k == 2, format!("k = {}", e.k))?;
    check(e.factors == [1] && e.offset() == 14, format!("embedding {:?} at {}", e.factors, e.offset()))?;
    check(e.verify(&gens, &u), "embedding does not re-verify")?;
    Ok(format!(
        "golden mean n = 1 over {} interleavings; 10 at offset 14 of a_1, |b| = {}",
        w.interleavings_checked,
        e.b.len()
    ))
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    /// Exactness of the evidence the criterion rests on.
    pub exactness: Exactness,
    pub limit: Option<Duration>,
    pub run: fn() -> Outcome,
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

pub const CRITERIA: [Criterion; 11] = [
    Criterion { id: 1, title: "Thue–Morse integrity", exactness: Exactness::Exact, limit: secs(5), run: thue_morse },
    Criterion { id: 2, title: "generator recursion", exactness: Exactness::Exact, limit: None, run: construction },
    Criterion { id: 3, title: "even periods in Y_2, Y_3", exactness: Exactness::Exact, limit: secs(60), run: even_periods },
    Criterion { id: 4, title: "no odd generators", exactness: Exactness::Exact, limit: None, run: no_odd_generators },
    Criterion {
        id: 5,
        title: "mixing window for the coded system",
        exactness: Exactness::UnderApprox,
        limit: None,
        run: mixing_window,
    },
    Criterion {
        id: 6,
        title: "sofic approximations are not mixing",
        exactness: Exactness::Exact,
        limit: None,
        run: sofic_approximations,
    },
    Criterion {
        id: 7,
        title: "spacing shift glue and obstruction",
        exactness: Exactness::Exact,
        limit: secs(10),
        run: spacing_shift,
    },
    Criterion {
        id: 8,
        title: "sofic equivalences over small graphs",
        exactness: Exactness::Exact,
        limit: secs(300),
        run: sofic_equivalences,
    },
    Criterion { id: 9, title: "Fisher covers", exactness: Exactness::Exact, limit: None, run: fisher },
    Criterion { id: 10, title: "Frobenius numbers", exactness: Exactness::Exact, limit: None, run: frobenius_numbers },
    Criterion {
        id: 11,
        title: "strong property P and congruent embedding",
        exactness: Exactness::Exact,
        limit: None,
        run: strong_property_p,
    },
];

/// Scenario names and the criteria each one runs.
pub const SCENARIOS: [(&str, &[u32]); 6] = [
    ("even-periods", &[1, 2, 3, 4]),
    ("mixing-window", &[5, 6]),
    ("spacing-p", &[7, 11]),
    ("equivalence-fuzz", &[8, 9]),
    ("frobenius-demo", &[10]),
    ("all", &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]),
];

pub fn scenario(name: &str) -> Option<Vec<&'static Criterion>> {
    let (_, ids) = SCENARIOS.iter().find(|(n, _)| *n == name)?;
    Some(ids.iter().map(|&id| &CRITERIA[id as usize - 1]).collect())
}

pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

/// Runs one criterion, turning panics and overruns of its time limit into
/// failures.
pub fn run_criterion(c: &Criterion) -> CriterionResult {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(msg)
    });
    let elapsed = start.elapsed();
    let outcome = match (outcome, c.limit) {
        (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
        (o, _) => o,
    };
    CriterionResult {
        id: c.id,
        title: c.title,
        outcome,
        elapsed,
    }
}
