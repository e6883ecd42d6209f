use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::gcd;

/// The additive semigroup generated by a list of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemigroupReport {
    pub generators: Vec<u64>,
    pub gcd: u64,
    /// Least multiple `C` of the gcd such that every multiple `≥ C` is
    /// representable.
    pub conductor: u64,
    /// Largest non-representable multiple of the gcd, if any.
    pub frobenius: Option<u64>,
    /// Every non-representable positive multiple of the gcd below the
    /// conductor.
    pub non_representable: Vec<u64>,
}

/// Representability table for `0..=limit`.
pub fn representable_up_to(xs: &[u64], limit: u64) -> Vec<bool> {
    let mut ok = vec![false; limit as usize + 1];
    ok[0] = true;
    for t in 1..=limit as usize {
        ok[t] = xs.iter().any(|&x| x as usize <= t && ok[t - x as usize]);
    }
    ok
}

/// Gcd, conductor and gaps by dynamic programming. After dividing by the gcd
/// the Frobenius number is below `min · max`, so the table is filled up to
/// `min · max + min` and the conductor is confirmed by a run of `min`
/// consecutive representable values.
pub fn frobenius(xs: &[u64]) -> Result<SemigroupReport> {
    if xs.is_empty() || xs.contains(&0) {
        return Err(Error::Precondition("generators must be positive".into()));
    }
    let k = xs.iter().fold(0u64, |g, &x| gcd(g as usize, x as usize) as u64);
    let ys: Vec<u64> = xs.iter().map(|x| x / k).collect();
    let lo = *ys.iter().min().expect("nonempty");
    let hi = *ys.iter().max().expect("nonempty");
    let ok = representable_up_to(&ys, lo * hi + lo);
    let gaps: Vec<u64> = (1..ok.len() as u64).filter(|&t| !ok[t as usize]).collect();
    let conductor = gaps.last().map_or(0, |g| g + 1);
    debug_assert!((conductor..conductor + lo).all(|t| ok[t as usize]));
    Ok(SemigroupReport {
        generators: xs.to_vec(),
        gcd: k,
        conductor: conductor * k,
        frobenius: gaps.last().map(|g| g * k),
        non_representable: gaps.iter().map(|g| g * k).collect(),
    })
}
