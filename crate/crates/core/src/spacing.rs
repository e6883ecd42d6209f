//! Spacing shifts: binary sequences in which any two 1s sit at a distance
//! drawn from a set `R ⊆ ℕ`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{difference_set, Alphabet, Block, Exactness, LanguageWindow};

/// A set `R` given by its membership predicate. `window_hint` bounds the
/// range on which the predicate is known to be exact.
#[derive(Clone)]
pub struct SpacingRule {
    name: String,
    member: Arc<dyn Fn(usize) -> bool + Send + Sync>,
    window_hint: usize,
}

impl SpacingRule {
    pub fn new<F>(name: &str, window_hint: usize, member: F) -> Self
    where
        F: Fn(usize) -> bool + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            member: Arc::new(member),
            window_hint,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn window_hint(&self) -> usize {
        self.window_hint
    }

    pub fn contains(&self, d: usize) -> bool {
        (self.member)(d)
    }
}

impl fmt::Debug for SpacingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpacingRule")
            .field("name", &self.name)
            .field("window_hint", &self.window_hint)
            .finish()
    }
}

/// `R = ℕ ∖ {1, 2, 4, 8, …}`. With `2^0 = 1` excluded, `11` is forbidden.
pub fn pow2_complement_rule() -> SpacingRule {
    SpacingRule::new("pow2", usize::MAX, |d| d >= 1 && !d.is_power_of_two())
}

/// `R = ℕ`: every binary block is allowed.
pub fn all_naturals_rule() -> SpacingRule {
    SpacingRule::new("all", usize::MAX, |d| d >= 1)
}

/// Looks a rule up by its CLI name.
pub fn rule_by_name(name: &str) -> Result<SpacingRule> {
    match name {
        "pow2" => Ok(pow2_complement_rule()),
        "all" => Ok(all_naturals_rule()),
        other => Err(Error::Precondition(format!("unknown spacing rule `{other}`"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AllowedVerdict {
    pub allowed: bool,
    /// Distances between 1s that fall outside `R`.
    pub violations: BTreeSet<usize>,
}

pub fn is_allowed(rule: &SpacingRule, u: &Block) -> Result<AllowedVerdict> {
    Alphabet::binary().check(u)?;
    let violations: BTreeSet<usize> = difference_set(u)
        .into_iter()
        .filter(|&d| !rule.contains(d))
        .collect();
    Ok(AllowedVerdict {
        allowed: violations.is_empty(),
        violations,
    })
}

/// All allowed blocks of length `n`, in canonical order.
pub fn allowed_blocks(rule: &SpacingRule, n: usize) -> Vec<Block> {
    Alphabet::binary()
        .all_blocks(n)
        .into_iter()
        .filter(|b| difference_set(b).iter().all(|&d| rule.contains(d)))
        .collect()
}

/// Exact window of `Ω_R`: allowed blocks are exactly its words, since any
/// allowed block extends by 0s on both sides.
pub fn allowed_window(rule: &SpacingRule, max_len: usize) -> LanguageWindow {
    let mut out = BTreeSet::new();
    let mut stack = vec![(Vec::<u8>::new(), Vec::<usize>::new())];
    while let Some((word, ones)) = stack.pop() {
        let n = word.len();
        out.insert(Block::new(word.clone()));
        if n == max_len {
            continue;
        }
        let mut zero = word.clone();
        zero.push(b'0');
        stack.push((zero, ones.clone()));
        if ones.iter().all(|&i| rule.contains(n - i)) {
            let mut one = word;
            one.push(b'1');
            let mut ones = ones;
            ones.push(n);
            stack.push((one, ones));
        }
    }
    LanguageWindow::from_closed_set(Alphabet::binary(), max_len, out, Exactness::Exact)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueReport {
    pub block: Block,
    pub verdict: AllowedVerdict,
}

/// `v_0 · 0^{2L} · v_1 · 0^{2L} · … · v_t` for allowed parts of length
/// `L = 2^k`, re-checked against the rule.
pub fn glue(rule: &SpacingRule, k: u32, parts: &[Block]) -> Result<GlueReport> {
    let l = 1usize
        .checked_shl(k)
        .ok_or_else(|| Error::Precondition(format!("2^{k} overflows")))?;
    for (i, p) in parts.iter().enumerate() {
        if p.len() != l {
            return Err(Error::BadLength {
                index: i,
                expected: l,
                actual: p.len(),
            });
        }
        if !is_allowed(rule, p)?.allowed {
            return Err(Error::PartNotAllowed(i));
        }
    }
    let filler = Block::from("0").repeat(2 * l);
    let mut out = Block::empty();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            out = out.concat(&filler);
        }
        out = out.concat(p);
    }
    let verdict = is_allowed(rule, &out)?;
    Ok(GlueReport { block: out, verdict })
}

/// The distances `2^j`, `j ≤ max_exp`, for which `1 0^{2^j - 1} 1` is not
/// allowed. Each such distance is missing from `N([1], [1])`.
pub fn mixing_obstruction(rule: &SpacingRule, max_exp: u32) -> Result<Vec<usize>> {
    1usize
        .checked_shl(max_exp)
        .filter(|&t| t <= rule.window_hint())
        .ok_or_else(|| Error::Precondition(format!("2^{max_exp} exceeds the rule's window")))?;
    let mut out = Vec::new();
    for j in 0..=max_exp {
        let d = 1usize << j;
        let block = Block::from("1").concat(&Block::from("0").repeat(d - 1)).push(b'1');
        if !is_allowed(rule, &block)?.allowed {
            out.push(d);
        }
    }
    Ok(out)
}

/// Longest run of consecutive members of `R` inside `[1, w]`.
pub fn thickness_window(rule: &SpacingRule, w: usize) -> Result<usize> {
    if w > rule.window_hint() {
        return Err(Error::Precondition("window exceeds the rule's exact range".into()));
    }
    let (mut best, mut run) = (0, 0);
    for d in 1..=w {
        if rule.contains(d) {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    Ok(best)
}

/// First `(k, a, m)` with `2^{k+1} < a < 2^{k+2}`, `1 ≤ m ≤ max_m` and
/// `a + 3m·2^k` a power of two. The glue argument needs there to be none.
pub fn glue_sum_counterexample(max_k: u32, max_m: u64) -> Option<(u32, u64, u64)> {
    for k in 0..=max_k {
        let p = 1u64 << k;
        for a in 2 * p + 1..4 * p {
            for m in 1..=max_m {
                if (a + 3 * m * p).is_power_of_two() {
                    return Some((k, a, m));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pow2_membership() {
        let r = pow2_complement_rule();
        assert!(r.contains(3));
        assert!(!r.contains(4));
        assert!(!r.contains(1));
        assert!(rule_by_name("nope").is_err());
    }

    #[test]
    fn allowed_examples() {
        let r = pow2_complement_rule();
        let v = is_allowed(&r, &Block::from("1001")).unwrap();
        assert!(v.allowed);
        let v = is_allowed(&r, &Block::from("101")).unwrap();
        assert_eq!(v.violations, BTreeSet::from([2]));
        assert!(is_allowed(&r, &Block::from("0000")).unwrap().allowed);
        assert!(is_allowed(&r, &Block::from("0a")).is_err());
    }

    #[test]
    fn allowed_block_counts() {
        let r = pow2_complement_rule();
        // Oracle: at most one pair of 1s, at distance 3 (the only member of R below 4).
        assert_eq!(allowed_blocks(&r, 2).len(), 3);
        assert_eq!(allowed_blocks(&r, 4).len(), 1 + 4 + 1);
    }

    #[test]
    fn window_is_exact_language() {
        let r = pow2_complement_rule();
        let w = allowed_window(&r, 8);
        for n in 0..=8 {
            assert_eq!(w.blocks_of_len(n), allowed_blocks(&r, n));
        }
        assert!(w.is_factor_closed());
    }

    #[test]
    fn glue_examples() {
        let r = pow2_complement_rule();
        let g = glue(&r, 1, &[Block::from("10"), Block::from("01")]).unwrap();
        assert_eq!(g.block.as_str(), "10000001");
        assert_eq!(difference_set(&g.block), BTreeSet::from([7]));
        assert!(g.verdict.allowed);

        let parts = vec![Block::from("10"); 3];
        let g = glue(&r, 1, &parts).unwrap();
        assert_eq!(g.block.as_str(), "10000010000010");
        assert!(g.verdict.allowed);

        let g = glue(&r, 2, &[Block::from("1000"), Block::from("0001")]).unwrap();
        // 1s at 0 and 4 + 8 + 3.
        assert_eq!(difference_set(&g.block), BTreeSet::from([15]));
        assert!(g.verdict.allowed);

        assert_eq!(
            glue(&r, 1, &[Block::from("100")]),
            Err(Error::BadLength {
                index: 0,
                expected: 2,
                actual: 3
            })
        );
        assert_eq!(
            glue(&r, 1, &[Block::from("10"), Block::from("11")]),
            Err(Error::PartNotAllowed(1))
        );
    }

    #[test]
    fn glue_closure_exhaustive() {
        let r = pow2_complement_rule();
        for k in 1..=2u32 {
            let parts = allowed_blocks(&r, 1 << k);
            for a in &parts {
                assert!(glue(&r, k, std::slice::from_ref(a)).unwrap().verdict.allowed);
                for b in &parts {
                    assert!(glue(&r, k, &[a.clone(), b.clone()]).unwrap().verdict.allowed);
                    for c in &parts {
                        let g = glue(&r, k, &[a.clone(), b.clone(), c.clone()]).unwrap();
                        assert!(g.verdict.allowed, "{}", g.block);
                    }
                }
            }
        }
    }

    #[test]
    fn obstruction_examples() {
        let r = pow2_complement_rule();
        assert_eq!(mixing_obstruction(&r, 3).unwrap(), vec![1, 2, 4, 8]);
        assert_eq!(mixing_obstruction(&r, 6).unwrap(), vec![1, 2, 4, 8, 16, 32, 64]);
        assert!(mixing_obstruction(&all_naturals_rule(), 6).unwrap().is_empty());
        let small = SpacingRule::new("small", 8, |d| d > 0);
        assert!(mixing_obstruction(&small, 4).is_err());
    }

    #[test]
    fn thickness_examples() {
        let r = pow2_complement_rule();
        // Oracle: scan for the longest stretch free of powers of two.
        let oracle = |w: usize| {
            let mut best = 0;
            let mut last = 0;
            for d in 1..=w + 1 {
                if d == w + 1 || d.count_ones() == 1 {
                    best = best.max(d - last - 1);
                    last = d;
                }
            }
            best
        };
        assert_eq!(thickness_window(&r, 100).unwrap(), oracle(100));
        assert_eq!(thickness_window(&r, 100).unwrap(), 36);
        assert_eq!(thickness_window(&r, 10).unwrap(), 3);
        assert_eq!(thickness_window(&all_naturals_rule(), 10).unwrap(), 10);
    }

    #[test]
    fn glue_sums_avoid_powers_of_two() {
        assert_eq!(glue_sum_counterexample(8, 64), None);
    }

    proptest! {
        #[test]
        fn allowed_is_hereditary(bits in "[01]{0,24}", i in 0usize..25, j in 0usize..25) {
            let r = pow2_complement_rule();
            let u = Block::from(bits.as_str());
            let (i, j) = (i.min(u.len()), j.min(u.len()));
            let (i, j) = (i.min(j), i.max(j));
            if is_allowed(&r, &u).unwrap().allowed {
                prop_assert!(is_allowed(&r, &u.slice(i, j)).unwrap().allowed);
            }
        }

        #[test]
        fn verdict_matches_violations(bits in "[01]{0,24}") {
            let v = is_allowed(&pow2_complement_rule(), &Block::from(bits.as_str())).unwrap();
            prop_assert_eq!(v.allowed, v.violations.is_empty());
        }
    }
}
