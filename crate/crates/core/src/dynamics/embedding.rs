use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{gcd, Block};

/// `v = a·u·b` with `v` a concatenation of generators and `|a|`, `|b|`
/// multiples of the gcd `k` of the generator lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub k: usize,
    /// Generator indices whose concatenation is `v`.
    pub factors: Vec<usize>,
    pub v: Block,
    pub a: Block,
    pub b: Block,
}

impl Embedding {
    pub fn offset(&self) -> usize {
        self.a.len()
    }

    /// Re-checks the factorization, the occurrence and both congruences.
    pub fn verify(&self, gens: &[Block], u: &Block) -> bool {
        let joined = self
            .factors
            .iter()
            .try_fold(Block::empty(), |acc, &i| gens.get(i).map(|g| acc.concat(g)));
        joined.as_ref() == Some(&self.v)
            && self.a.concat(u).concat(&self.b) == self.v
            && self.a.len().is_multiple_of(self.k)
            && self.b.len().is_multiple_of(self.k)
    }
}

/// First concatenation `v` of the generators, in order of total length and
/// then index sequence, that contains `u` at an offset divisible by `k`.
/// Since `k` divides `|v|` and `|u|`, the tail length is then divisible too.
pub fn mod_embedding(gens: &[Block], u: &Block, budget: usize) -> Result<Embedding> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    if let Some(i) = gens.iter().position(Block::is_empty) {
        return Err(Error::EmptyWord(i));
    }
    let k = gens.iter().fold(0, |g, b| gcd(g, b.len()));
    if !u.len().is_multiple_of(k) {
        return Err(Error::Precondition(format!("{k} does not divide |u| = {}", u.len())));
    }
    // fits[t]: some concatenation has length exactly t.
    let mut fits = vec![false; budget + 1];
    fits[0] = true;
    for t in 1..=budget {
        fits[t] = gens.iter().any(|g| g.len() <= t && fits[t - g.len()]);
    }
    for total in u.len().max(1)..=budget {
        if !fits[total] {
            continue;
        }
        let mut seq = Vec::new();
        let mut text = Vec::new();
        if let Some(e) = search(gens, u, k, total, &fits, &mut seq, &mut text) {
            return Ok(e);
        }
    }
    Err(Error::NotFoundInBudget(budget))
}

fn search(
    gens: &[Block],
    u: &Block,
    k: usize,
    remaining: usize,
    fits: &[bool],
    seq: &mut Vec<usize>,
    text: &mut Vec<u8>,
) -> Option<Embedding> {
    if remaining == 0 {
        let v = Block::new(text.clone());
        let offset = (0..=v.len().checked_sub(u.len())?)
            .step_by(k)
            .find(|&o| v.as_bytes()[o..o + u.len()] == *u.as_bytes())?;
        return Some(Embedding {
            k,
            factors: seq.clone(),
            a: v.slice(0, offset),
            b: v.slice(offset + u.len(), v.len()),
            v,
        });
    }
    for (i, g) in gens.iter().enumerate() {
        if g.len() > remaining || !fits[remaining - g.len()] {
            continue;
        }
        seq.push(i);
        text.extend_from_slice(g.as_bytes());
        let found = search(gens, u, k, remaining - g.len(), fits, seq, text);
        text.truncate(text.len() - g.len());
        seq.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coded::construct_generators;

    #[test]
    fn embedding_examples() {
        let sys = construct_generators(2, 100).unwrap();
        let gens = vec![sys.expand(0).unwrap(), sys.expand(1).unwrap()];
        let e = mod_embedding(&gens, &Block::from("01"), 60).unwrap();
        assert_eq!((e.a.len(), e.b.len(), e.factors.clone()), (0, 0, vec![0]));

        let u = Block::from("10");
        let e = mod_embedding(&gens, &u, 60).unwrap();
        assert_eq!(e.factors, vec![1]);
        assert_eq!(e.offset(), 14);
        assert_eq!(e.a, gens[1].slice(0, 14));
        assert_eq!(e.b, gens[1].slice(16, 30));
        assert!(e.verify(&gens, &u));

        let gens = [Block::from("1"), Block::from("10")];
        assert_eq!(mod_embedding(&gens, &Block::from("00"), 6), Err(Error::NotFoundInBudget(6)));
        assert!(mod_embedding(&[Block::from("01")], &Block::from("0"), 6).is_err());
    }

    #[test]
    fn every_found_embedding_verifies() {
        let gens = [Block::from("011"), Block::from("0"), Block::from("11")];
        for u in crate::words::Alphabet::binary().all_blocks(3) {
            if let Ok(e) = mod_embedding(&gens, &u, 9) {
                assert!(e.verify(&gens, &u), "{u}");
            }
        }
    }
}
