use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SplitMix64;

/// Strictly increasing 1-based indices `1 ≤ i₁ < … < i_k ≤ n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IndexSetJson", into = "IndexSetJson")]
pub struct IndexSet {
    indices: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct IndexSetJson {
    k: usize,
    indices: Vec<usize>,
}

impl TryFrom<IndexSetJson> for IndexSet {
    type Error = Error;

    fn try_from(j: IndexSetJson) -> Result<Self> {
        if j.k != j.indices.len() {
            return Err(Error::InvalidIndexSet(format!(
                "k = {} but {} indices given",
                j.k,
                j.indices.len()
            )));
        }
        let s = IndexSet { indices: j.indices };
        s.check_order()?;
        Ok(s)
    }
}

impl From<IndexSet> for IndexSetJson {
    fn from(s: IndexSet) -> Self {
        IndexSetJson {
            k: s.k(),
            indices: s.indices,
        }
    }
}

impl IndexSet {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        let s = Self { indices };
        s.check_order()?;
        s.check_range(n)?;
        Ok(s)
    }

    /// `{1, …, k}`.
    pub fn leading(k: usize) -> Self {
        Self {
            indices: (1..=k).collect(),
        }
    }

    /// `{i}` with `k = 1`.
    pub fn single(i: usize) -> Self {
        Self { indices: vec![i] }
    }

    fn check_order(&self) -> Result<()> {
        if self.indices.is_empty() {
            return Err(Error::InvalidIndexSet("index set is empty".into()));
        }
        if self.indices[0] == 0 {
            return Err(Error::InvalidIndexSet("indices are 1-based".into()));
        }
        if self.indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet(format!(
                "indices {:?} are not strictly increasing",
                self.indices
            )));
        }
        Ok(())
    }

    /// Confirms every index is at most `n`.
    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.indices.last() {
            Some(&last) if last > n => Err(Error::InvalidIndexSet(format!(
                "index {last} exceeds dimension {n}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `(j, i_j)` pairs, both 1-based.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.indices.iter().enumerate().map(|(j, &i)| (j + 1, i))
    }

    /// Every index set of size `k` in lexicographic order.
    pub fn all_of_size(n: usize, k: usize) -> Vec<IndexSet> {
        let mut out = Vec::new();
        if k == 0 || k > n {
            return out;
        }
        let mut current: Vec<usize> = (1..=k).collect();
        loop {
            out.push(IndexSet {
                indices: current.clone(),
            });
            // advance to next combination
            let mut pos = k;
            while pos > 0 && current[pos - 1] == n - k + pos {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            current[pos - 1] += 1;
            for t in pos..k {
                current[t] = current[t - 1] + 1;
            }
        }
        out
    }

    /// All `2ⁿ − 1` index sets, grouped by increasing `k`.
    pub fn all(n: usize) -> Vec<IndexSet> {
        (1..=n).flat_map(|k| Self::all_of_size(n, k)).collect()
    }

    /// Index sets used by the suites: exhaustive up to `n = 5` or when a size
    /// class has at most `per_k` members, otherwise `per_k` distinct seeded
    /// samples per `k`.
    pub fn enumerate(n: usize, per_k: usize, seed: u64) -> Vec<IndexSet> {
        let mut rng = SplitMix64::new(seed);
        let mut out = Vec::new();
        for k in 1..=n {
            if n <= 5 || binomial(n, k) <= per_k as u128 {
                out.extend(Self::all_of_size(n, k));
                continue;
            }
            let mut seen = std::collections::BTreeSet::new();
            while seen.len() < per_k {
                let mut pool: Vec<usize> = (1..=n).collect();
                // partial Fisher–Yates
                for t in 0..k {
                    let r = t + (rng.next_u64() % (n - t) as u64) as usize;
                    pool.swap(t, r);
                }
                let mut pick = pool[..k].to_vec();
                pick.sort_unstable();
                seen.insert(pick);
            }
            out.extend(seen.into_iter().map(|indices| IndexSet { indices }));
        }
        out
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for IndexSet {
    type Err = Error;

    /// Parses `"2,3"` (range is checked later against the matrix).
    fn from_str(s: &str) -> Result<Self> {
        let indices = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidIndexSet(format!("cannot parse {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let set = IndexSet { indices };
        set.check_order()?;
        Ok(set)
    }
}
