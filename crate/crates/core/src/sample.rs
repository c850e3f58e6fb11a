//! Seeded random instances: subgroups given by random reduced words, and
//! complete cores from random permutation actions.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::core::BasedCore;
use crate::error::{Error, Result};
use crate::word::{letter_at, Letter, Word};

pub const DEFAULT_SEED: u64 = 20_240_601;
const MAX_RETRIES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub rank: usize,
    pub count: usize,
    /// Generators per subgroup are uniform in `1..=max_gens`.
    pub max_gens: usize,
    /// Word lengths are uniform in `1..=max_len`.
    pub max_len: usize,
    /// Index of sampled complete cores.
    pub index: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: DEFAULT_SEED,
            rank: 2,
            count: 100,
            max_gens: 5,
            max_len: 12,
            index: 4,
        }
    }
}

impl RunConfig {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Uniform reduced word of length `len`: the first letter is uniform over all
/// `2r` letters, each later one over the `2r - 1` that do not cancel.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    for _ in 0..len {
        let l = loop {
            let l = letter_at(rng.gen_range(0..2 * rank));
            if letters.last() != Some(&-l) {
                break l;
            }
        };
        letters.push(l);
    }
    Word::new(letters)
}

pub fn random_generators<R: Rng + ?Sized>(
    rng: &mut R,
    rank: usize,
    max_gens: usize,
    max_len: usize,
) -> Vec<Word> {
    let m = rng.gen_range(1..=max_gens.max(1));
    (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=max_len.max(1));
            random_word(rng, rank, len)
        })
        .collect()
}

pub fn sample_words(config: &RunConfig) -> Vec<Vec<Word>> {
    let mut rng = config.rng();
    (0..config.count)
        .map(|_| random_generators(&mut rng, config.rank, config.max_gens, config.max_len))
        .collect()
}

fn is_transitive(perms: &[Vec<usize>]) -> bool {
    let n = perms[0].len();
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for p in perms {
            if !seen[p[v]] {
                seen[p[v]] = true;
                stack.push(p[v]);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Complete core of the action of the letters by the given permutations,
/// based at point 0. The action must be transitive.
pub fn core_from_permutations(perms: &[Vec<usize>]) -> Result<BasedCore> {
    let n = perms.first().map_or(0, Vec::len);
    if n == 0 || perms.iter().any(|p| p.len() != n) {
        return Err(Error::InvalidArgument("permutations must share a non-empty domain".into()));
    }
    for p in perms {
        let mut hit = vec![false; n];
        for &t in p {
            if t >= n || std::mem::replace(&mut hit[t], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
    }
    if !is_transitive(perms) {
        return Err(Error::InvalidArgument("action is not transitive".into()));
    }
    let mut table = vec![vec![None; 2 * perms.len()]; n];
    for (i, p) in perms.iter().enumerate() {
        for (v, &t) in p.iter().enumerate() {
            table[v][2 * i] = Some(t);
            table[t][2 * i + 1] = Some(v);
        }
    }
    Ok(BasedCore::from_table(perms.len(), table, 0))
}

pub fn random_permutations<R: Rng + ?Sized>(rng: &mut R, rank: usize, n: usize) -> Vec<Vec<usize>> {
    (0..rank)
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            p
        })
        .collect()
}

/// Random complete core of index exactly `n`; non-transitive draws are
/// rejected, up to a fixed number of attempts.
pub fn random_complete<R: Rng + ?Sized>(rng: &mut R, rank: usize, n: usize) -> Result<BasedCore> {
    if rank == 0 || n == 0 {
        return Err(Error::InvalidArgument("rank and index must be positive".into()));
    }
    for _ in 0..MAX_RETRIES {
        let perms = random_permutations(rng, rank, n);
        if is_transitive(&perms) {
            return core_from_permutations(&perms);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no transitive action of degree {n} after {MAX_RETRIES} draws"
    )))
}

pub fn sample_complete(config: &RunConfig) -> Result<Vec<BasedCore>> {
    let mut rng = config.rng();
    (0..config.count)
        .map(|_| random_complete(&mut rng, config.rank, config.index))
        .collect()
}
