//! Set partitions as restricted-growth strings, and the counting helpers the
//! exhaustion transcripts are checked against.

use crate::subset::Subset;

/// Restricted-growth strings of length `n` using at most `max_blocks`
/// blocks, in lexicographic order. `a[0] = 0` and
/// `a[i] <= 1 + max(a[..i])`.
pub struct Rgs {
    a: Vec<usize>,
    max_blocks: usize,
    started: bool,
    done: bool,
}

impl Rgs {
    pub fn new(n: usize, max_blocks: usize) -> Self {
        Rgs {
            a: vec![0; n],
            max_blocks,
            started: false,
            done: n > 0 && max_blocks == 0,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.a.len();
        // prefix maxima
        let mut pm = vec![0usize; n];
        for i in 1..n {
            pm[i] = pm[i - 1].max(self.a[i - 1]);
        }
        for i in (1..n).rev() {
            let limit = (pm[i] + 1).min(self.max_blocks - 1);
            if self.a[i] < limit {
                self.a[i] += 1;
                for v in &mut self.a[i + 1..] {
                    *v = 0;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Rgs {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.a.clone());
        }
        if self.advance() {
            Some(self.a.clone())
        } else {
            self.done = true;
            None
        }
    }
}

/// Blocks of the partition of `base` described by an RGS over its elements
/// in increasing order.
pub fn blocks_of(base: Subset, rgs: &[usize]) -> Vec<Subset> {
    let nb = rgs.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![Subset::EMPTY; nb];
    for (k, i) in base.iter().enumerate() {
        out[rgs[k]].insert(i);
    }
    out
}

/// All set partitions of `base` into at most `max_blocks` nonempty blocks,
/// blocks ordered by their smallest element, partitions in RGS order.
pub fn set_partitions(base: Subset, max_blocks: usize) -> impl Iterator<Item = Vec<Subset>> {
    Rgs::new(base.len(), max_blocks).map(move |r| blocks_of(base, &r))
}

/// Number of ways to finish a restricted-growth string with `remaining`
/// more letters when `used` blocks are open and at most `cap` are allowed.
pub fn completions(remaining: usize, used: usize, cap: usize) -> u128 {
    // table[m][k]
    let mut cur: Vec<u128> = vec![1; cap + 2];
    for _ in 0..remaining {
        let mut nxt = vec![0u128; cap + 2];
        for k in 0..=cap {
            let stay = (k as u128).saturating_mul(cur[k]);
            let open = if k < cap { cur[k + 1] } else { 0 };
            nxt[k] = stay.saturating_add(open);
        }
        cur = nxt;
    }
    if used > cap {
        0
    } else {
        cur[used]
    }
}

/// Stirling number of the second kind.
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = (j as u128)
                .saturating_mul(row[j])
                .saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// Number of partitions of an `n`-set into at most `k` blocks.
pub fn partitions_at_most(n: usize, k: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    (1..=k).map(|j| stirling2(n, j)).fold(0u128, u128::saturating_add)
}

pub fn falling(r: usize, j: usize) -> u128 {
    (0..j).fold(1u128, |a, i| a.saturating_mul((r - i) as u128))
}
