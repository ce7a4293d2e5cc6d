use std::fmt;

use super::SparsityError;

/// Sorted, duplicate-free subset of `{0, .., n-1}`.
///
/// Indices are 0-based in memory. [`IndexSet::one_based`] and
/// [`IndexSet::from_one_based`] convert to and from the 1-based labels used in
/// reports and files.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    n: usize,
    members: Vec<usize>,
}

impl IndexSet {
    pub fn new(n: usize, mut members: Vec<usize>) -> Result<Self, SparsityError> {
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&i| i >= n) {
            return Err(SparsityError::IndexOutOfRange { index: bad, n });
        }
        Ok(Self { n, members })
    }

    pub fn from_one_based(n: usize, labels: &[usize]) -> Result<Self, SparsityError> {
        let members = labels
            .iter()
            .map(|&l| l.checked_sub(1).ok_or(SparsityError::IndexOutOfRange { index: l, n }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, members)
    }

    pub fn empty(n: usize) -> Self {
        Self { n, members: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Self { n, members: (0..n).collect() }
    }

    /// Caller guarantees `members` is strictly increasing and `< n`.
    pub(crate) fn from_sorted(n: usize, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.last().is_none_or(|&m| m < n));
        Self { n, members }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.members.iter().map(|i| i + 1).collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut members: Vec<usize> = self.members.iter().chain(&other.members).copied().collect();
        members.sort_unstable();
        members.dedup();
        Self { n: self.n.max(other.n), members }
    }

    /// Indices of `{0..n-1}` not in the set.
    pub fn complement(&self) -> Self {
        Self { n: self.n, members: (0..self.n).filter(|&i| !self.contains(i)).collect() }
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.one_based()).finish()
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// All `k`-element subsets of `pool` in lexicographic order of positions.
pub fn k_subsets(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > pool.len() {
        return out;
    }
    let len = pool.len();
    let mut idx: Vec<usize> = (0..k).collect();
    'outer: loop {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        for i in (0..k).rev() {
            if idx[i] < i + len - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                continue 'outer;
            }
        }
        return out;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_and_validates() {
        let j = IndexSet::new(5, vec![3, 1, 3]).unwrap();
        assert_eq!(j.members(), &[1, 3]);
        assert_eq!(j.one_based(), vec![2, 4]);
        assert!(IndexSet::new(3, vec![3]).is_err());
        assert!(IndexSet::from_one_based(3, &[0]).is_err());
        assert_eq!(IndexSet::from_one_based(3, &[3, 1]).unwrap().members(), &[0, 2]);
    }

    #[test]
    fn set_algebra() {
        let a = IndexSet::new(4, vec![0, 2]).unwrap();
        let b = IndexSet::new(4, vec![2, 3]).unwrap();
        assert_eq!(a.union(&b).members(), &[0, 2, 3]);
        assert_eq!(a.complement().members(), &[1, 3]);
        assert!(IndexSet::new(4, vec![2]).unwrap().is_subset_of(&a));
        assert!(!b.is_subset_of(&a));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn subsets_in_lexicographic_order() {
        assert_eq!(k_subsets(&[1, 4, 7], 2), vec![vec![1, 4], vec![1, 7], vec![4, 7]]);
        assert_eq!(k_subsets(&[1, 2], 0), vec![Vec::<usize>::new()]);
        assert!(k_subsets(&[1], 2).is_empty());
        assert_eq!(k_subsets(&(0..6).collect::<Vec<_>>(), 3).len(), 20);
    }
}
