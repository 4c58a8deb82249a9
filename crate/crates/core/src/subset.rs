//! Index subsets of a ground set of at most 64 elements, stored as bit masks.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum ground-set size representable by [`Subset`].
pub const MAX_GROUND: usize = 64;

/// A subset of `{0, .., 63}`. Ordering is by the mask value, which is the
/// canonical order used for every deduplicated family in the crate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Subset {
        Subset(it.into_iter().fold(0u64, |m, i| m | (1u64 << i)))
    }

    /// Like [`Subset::from_indices`] but rejects indices `>= n`.
    pub fn try_from_indices(indices: &[usize], n: usize) -> Result<Subset> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= n || i >= MAX_GROUND) {
            return Err(Error::Input(format!("index {bad} outside ground set of size {n}")));
        }
        Ok(Subset::from_indices(indices.iter().copied()))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | 1u64 << i)
    }

    pub fn union(self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }

    pub fn intersect(self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }

    pub fn minus(self, o: Subset) -> Subset {
        Subset(self.0 & !o.0)
    }

    pub fn is_subset_of(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: Subset) -> bool {
        self.0 & o.0 == 0
    }

    /// Smallest element.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Compresses `self` onto the positions of `base`: bit k of the result is
    /// set iff the k-th smallest element of `base` is in `self`.
    pub fn compress(self, base: Subset) -> u64 {
        let mut out = 0u64;
        for (k, i) in base.iter().enumerate() {
            if self.contains(i) {
                out |= 1u64 << k;
            }
        }
        out
    }

    /// Inverse of [`Subset::compress`].
    pub fn expand(bits: u64, base: Subset) -> Subset {
        let mut out = Subset::EMPTY;
        for (k, i) in base.iter().enumerate() {
            if bits >> k & 1 == 1 {
                out.insert(i);
            }
        }
        out
    }

    /// Applies a relabeling `perm[i]` to every element.
    pub fn relabel(self, perm: &[usize]) -> Subset {
        Subset::from_indices(self.iter().map(|i| perm[i]))
    }
}

pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Subset::from_indices(it)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

// Serialized as a sorted index list.
impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(bad) = v.iter().find(|&&i| i >= MAX_GROUND) {
            return Err(serde::de::Error::custom(format!("index {bad} exceeds 63")));
        }
        Ok(Subset::from_indices(v))
    }
}

/// All subsets of `base` with exactly `k` elements, in increasing mask order.
pub fn k_subsets(base: Subset, k: usize) -> Vec<Subset> {
    let elems = base.to_vec();
    let n = elems.len();
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Subset::from_indices(idx.iter().map(|&j| elems[j])));
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out.sort();
    out
}

/// All subsets of `base`, in increasing mask order.
pub fn all_subsets(base: Subset) -> impl Iterator<Item = Subset> {
    let n = base.len();
    (0..1u64 << n).map(move |bits| Subset::expand(bits, base))
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
