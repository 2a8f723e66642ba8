use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Train,
    Validation,
    Test,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::Train, Part::Validation, Part::Test];
}

/// Disjoint train/validation/test partition of instance indices that keeps
/// every group inside a single part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
    /// Group id of each instance, by index.
    pub groups: Vec<String>,
}

impl Split {
    pub fn part(&self, p: Part) -> &[usize] {
        match p {
            Part::Train => &self.train,
            Part::Validation => &self.validation,
            Part::Test => &self.test,
        }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Part of every instance, by index.
    pub fn assignment(&self) -> Vec<Part> {
        let mut out = vec![Part::Train; self.groups.len()];
        for p in Part::ALL {
            for &i in self.part(p) {
                out[i] = p;
            }
        }
        out
    }

    pub fn group_parts(&self) -> BTreeMap<&str, Part> {
        let assignment = self.assignment();
        self.groups.iter().map(String::as_str).zip(assignment).collect()
    }
}

/// Shuffles the distinct groups with a seeded RNG and hands each in turn to
/// the part that lacks the most instances relative to its target. Once the
/// number of groups left equals the number of still-empty parts, those parts
/// take the remaining groups so that no part ends up empty.
pub fn group_shuffle_split<G: AsRef<str>>(groups: &[G], fractions: [f64; 3], seed: u64) -> Result<Split> {
    if fractions.iter().any(|f| !(*f > 0.0) || !f.is_finite()) || (fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!("split fractions must be positive and sum to 1, got {fractions:?}")));
    }
    let mut members: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, g) in groups.iter().enumerate() {
        members.entry(g.as_ref()).or_default().push(i);
    }
    if members.len() < 3 {
        return Err(Error::invalid(format!("need at least 3 distinct groups to split, got {}", members.len())));
    }
    let mut order: Vec<(&str, Vec<usize>)> = members.into_iter().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let total = groups.len() as f64;
    let targets = fractions.map(|f| f * total);
    let mut parts: [Vec<usize>; 3] = Default::default();
    let n_groups = order.len();
    for (k, (_, idx)) in order.into_iter().enumerate() {
        let left = n_groups - k;
        let empty: Vec<usize> = (0..3).filter(|&p| parts[p].is_empty()).collect();
        let candidates: Vec<usize> = if left <= empty.len() { empty } else { vec![0, 1, 2] };
        let mut best = candidates[0];
        let mut best_deficit = f64::NEG_INFINITY;
        for &p in &candidates {
            let deficit = targets[p] - parts[p].len() as f64;
            if deficit > best_deficit {
                best = p;
                best_deficit = deficit;
            }
        }
        parts[best].extend(idx);
    }
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    let [train, validation, test] = parts;
    Ok(Split { train, validation, test, groups: groups.iter().map(|g| g.as_ref().to_string()).collect() })
}
