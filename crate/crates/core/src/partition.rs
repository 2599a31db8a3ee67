//! Integer partitions: conjugation, dominance, almost rectangular partitions
//! and recovery of a Jordan type from the ranks of powers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A partition stored largest part first, without zero parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from arbitrary parts; sorts descending and drops zeros.
    pub fn new(parts: impl IntoIterator<Item = usize>) -> Self {
        let mut parts: Vec<usize> = parts.into_iter().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The partition of 0.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Expands `(part, multiplicity)` groups, e.g. `[(5, 1), (3, 3)]` for `(5,3^3)`.
    pub fn from_groups(groups: &[(usize, usize)]) -> Self {
        Partition::new(
            groups
                .iter()
                .flat_map(|&(part, mult)| std::iter::repeat_n(part, mult)),
        )
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Part `i`, or 0 past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Concatenation of two partitions (multiset union of parts).
    pub fn join(&self, other: &Partition) -> Partition {
        Partition::new(self.parts.iter().chain(other.parts.iter()).copied())
    }

    /// The conjugate partition: part `j` counts the parts of `self` that are `> j`.
    pub fn conjugate(&self) -> Partition {
        let width = self.largest();
        let parts = (0..width)
            .map(|j| self.parts.iter().take_while(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// `(part, multiplicity)` groups, largest part first.
    pub fn groups(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, mult)) if *q == p => *mult += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Plain rendering `5,3,3,3`.
    pub fn to_plain_string(&self) -> String {
        self.parts
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Exponent rendering `(5,3^3)`.
    pub fn to_exponent_string(&self) -> String {
        let body = self
            .groups()
            .into_iter()
            .map(|(p, m)| if m == 1 { p.to_string() } else { format!("{p}^{m}") })
            .collect::<Vec<_>>()
            .join(",");
        format!("({body})")
    }

    /// Rank of the `k`-th power of the block diagonal Jordan matrix of this type.
    pub fn power_rank(&self, k: usize) -> usize {
        self.parts.iter().map(|&p| p.saturating_sub(k)).sum()
    }

    /// Ranks of all powers, from the zeroth up to the first zero.
    pub fn rank_profile(&self) -> Vec<usize> {
        (0..=self.largest()).map(|k| self.power_rank(k)).collect()
    }

    /// True when the parts differ by at most one.
    pub fn is_almost_rectangular(&self) -> bool {
        match (self.parts.first(), self.parts.last()) {
            (Some(&a), Some(&b)) => a - b <= 1,
            _ => true,
        }
    }
}

/// The unique partition `[total]^k` of `total` into `k` parts differing by at most one.
pub fn almost_rectangular(total: usize, k: usize) -> Result<Partition> {
    if k < 1 || k > total {
        return Err(Error::InvalidArgument(format!(
            "almost rectangular [{total}]^{k} needs 1 <= k <= {total}"
        )));
    }
    let q = total / k;
    let r = total % k;
    Ok(Partition::from_groups(&[(q + 1, r), (q, k - r)]))
}

/// Dominance order on partitions of the same integer: every prefix sum of
/// `p` is at least the matching prefix sum of `q`.
pub fn dominates(p: &Partition, q: &Partition) -> Result<bool> {
    if p.sum() != q.sum() {
        return Err(Error::InvalidArgument(format!(
            "dominance needs equal sums, got {} and {}",
            p.sum(),
            q.sum()
        )));
    }
    let len = p.len().max(q.len());
    let (mut sp, mut sq) = (0usize, 0usize);
    for i in 0..len {
        sp += p.part(i);
        sq += q.part(i);
        if sp < sq {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Recovers the Jordan type of a nilpotent matrix from `rank A^0, rank A^1, ..., 0`.
pub fn from_rank_profile(ranks: &[usize]) -> Result<Partition> {
    let bad = |reason: &str| Error::InvalidRankProfile {
        profile: ranks.to_vec(),
        reason: reason.to_string(),
    };
    match (ranks.first(), ranks.last()) {
        (Some(&first), Some(&0)) if first > 0 => {}
        _ => return Err(bad("must start positive and end in 0")),
    }
    let mut diffs = Vec::with_capacity(ranks.len() - 1);
    for w in ranks.windows(2) {
        if w[1] >= w[0] {
            return Err(bad("ranks must strictly decrease until 0"));
        }
        diffs.push(w[0] - w[1]);
    }
    if diffs.windows(2).any(|w| w[1] > w[0]) {
        return Err(bad("rank differences increase; no nilpotent matrix has this profile"));
    }
    Ok(Partition { parts: diffs }.conjugate())
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exponent_string())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `5,3,3,3`, `(5,3^3)` and `(1^{10})`; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = cleaned
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(&cleaned);
        if body.is_empty() {
            return Ok(Partition::empty());
        }
        let parse_num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad number `{t}` in partition `{s}`")))
        };
        let mut groups = Vec::new();
        for token in body.split(',') {
            let (part, mult) = match token.split_once('^') {
                Some((p, m)) => {
                    let m = m.trim_start_matches('{').trim_end_matches('}');
                    (parse_num(p)?, parse_num(m)?)
                }
                None => (parse_num(token)?, 1),
            };
            if part == 0 {
                return Err(Error::Parse(format!("zero part in partition `{s}`")));
            }
            groups.push((part, mult));
        }
        Ok(Partition::from_groups(&groups))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(deserializer)?;
        if parts.windows(2).any(|w| w[1] > w[0]) || parts.contains(&0) {
            return Err(serde::de::Error::custom(
                "partition parts must be positive and non-increasing",
            ));
        }
        Ok(Partition { parts })
    }
}

/// All partitions of `total`, in reverse lexicographic order.
pub fn partitions_of(total: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: acc.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            acc.push(p);
            go(rest - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}
