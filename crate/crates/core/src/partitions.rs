//! d-dimensional partitions: the torus-fixed points of Hilb(C^4) and
//! their lower-dimensional relatives.
//!
//! A d-partition is a monotone non-increasing map from d-tuples of positive
//! integers to non-negative integers with finite total. Only positive
//! entries are stored. `dim == 0` is accepted internally: a 0-partition is
//! a single number, which is what the binary-layer decomposition of linear
//! partitions needs.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("point {point:?} has {found} coordinates, expected {expected}")]
    WrongArity {
        point: Vec<u32>,
        expected: usize,
        found: usize,
    },
    #[error("coordinates are 1-based, got {0:?}")]
    ZeroCoordinate(Vec<u32>),
    #[error("monotonicity fails between {lower:?} and {upper:?}")]
    NotMonotone { lower: Vec<u32>, upper: Vec<u32> },
    #[error("cell column {0:?} is not contiguous from 1")]
    GappedColumn(Vec<u32>),
    #[error("duplicate cell {0:?}")]
    DuplicateCell(Vec<u32>),
    #[error("enumeration exceeds the cap of {cap} items")]
    ResourceLimit { cap: usize },
    #[error("expected a {expected}-dimensional partition, got dimension {found}")]
    WrongDimension { expected: usize, found: usize },
}

/// Deterministic serialization of the sorted cell list, e.g.
/// `3:1.1.1.1,1.1.1.2,2.1.1.1`. The empty 3-partition is `3:`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }

    pub fn from_string(s: String) -> Self {
        CanonicalKey(s)
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.0)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DPartition {
    dim: usize,
    entries: BTreeMap<Vec<u32>, u32>,
}

impl DPartition {
    pub fn empty(dim: usize) -> Self {
        DPartition {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Build from `(point, value)` pairs; zero values are dropped and the
    /// monotonicity invariant is checked.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self, PartitionError>
    where
        I: IntoIterator<Item = (Vec<u32>, u32)>,
    {
        let mut map = BTreeMap::new();
        for (p, v) in entries {
            if p.len() != dim {
                return Err(PartitionError::WrongArity {
                    expected: dim,
                    found: p.len(),
                    point: p,
                });
            }
            if p.contains(&0) {
                return Err(PartitionError::ZeroCoordinate(p));
            }
            if v > 0 {
                map.insert(p, v);
            }
        }
        let part = DPartition { dim, entries: map };
        part.check_monotone()?;
        Ok(part)
    }

    /// Build from a cell list: each cell is a `(dim + 1)`-tuple whose last
    /// coordinate runs over `1..=entry`.
    pub fn from_cells<I>(dim: usize, cells: I) -> Result<Self, PartitionError>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut columns: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
        for c in cells {
            if c.len() != dim + 1 {
                return Err(PartitionError::WrongArity {
                    expected: dim + 1,
                    found: c.len(),
                    point: c,
                });
            }
            if c.contains(&0) {
                return Err(PartitionError::ZeroCoordinate(c));
            }
            let (head, last) = c.split_at(dim);
            columns.entry(head.to_vec()).or_default().push(last[0]);
        }
        let mut entries = Vec::with_capacity(columns.len());
        for (head, mut heights) in columns {
            heights.sort_unstable();
            for (idx, &h) in heights.iter().enumerate() {
                if idx > 0 && heights[idx - 1] == h {
                    let mut cell = head.clone();
                    cell.push(h);
                    return Err(PartitionError::DuplicateCell(cell));
                }
                if h as usize != idx + 1 {
                    return Err(PartitionError::GappedColumn(head));
                }
            }
            entries.push((head, heights.len() as u32));
        }
        DPartition::from_entries(dim, entries)
    }

    /// Build a solid partition from the exponent vectors of its character
    /// `Z = sum t^(i-1, j-1, k-1, l-1)`.
    pub fn from_monomials(exps: &[[u32; 4]]) -> Result<Self, PartitionError> {
        DPartition::from_cells(3, exps.iter().map(|e| e.iter().map(|x| x + 1).collect()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.entries
    }

    pub fn entry(&self, point: &[u32]) -> u32 {
        self.entries.get(point).copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.entries.values().sum()
    }

    /// Entry at the all-ones index.
    pub fn height(&self) -> u32 {
        let origin = alloc::vec![1; self.dim];
        self.entry(&origin)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Points with a positive entry.
    pub fn support(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.entries.keys()
    }

    /// All `(dim + 1)`-tuples `(p, l)` with `1 <= l <= entry(p)`, sorted.
    pub fn cells(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.size() as usize);
        for (p, &v) in &self.entries {
            for l in 1..=v {
                let mut c = p.clone();
                c.push(l);
                out.push(c);
            }
        }
        out
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        use core::fmt::Write;
        let mut s = String::new();
        let _ = write!(s, "{}:", self.dim);
        for (idx, c) in self.cells().iter().enumerate() {
            if idx > 0 {
                s.push(',');
            }
            for (j, x) in c.iter().enumerate() {
                if j > 0 {
                    s.push('.');
                }
                let _ = write!(s, "{}", x);
            }
        }
        CanonicalKey(s)
    }

    /// Parse a key produced by [`DPartition::canonical_key`].
    pub fn from_key(key: &CanonicalKey) -> Option<Self> {
        let (dim_s, rest) = key.as_str().split_once(':')?;
        let dim: usize = dim_s.parse().ok()?;
        let mut cells = Vec::new();
        if !rest.is_empty() {
            for cell in rest.split(',') {
                let c: Result<Vec<u32>, _> = cell.split('.').map(str::parse).collect();
                cells.push(c.ok()?);
            }
        }
        DPartition::from_cells(dim, cells).ok()
    }

    pub fn is_valid(&self) -> bool {
        self.check_monotone().is_ok()
    }

    fn check_monotone(&self) -> Result<(), PartitionError> {
        for (p, &v) in &self.entries {
            for axis in 0..self.dim {
                if p[axis] > 1 {
                    let mut q = p.clone();
                    q[axis] -= 1;
                    if self.entry(&q) < v {
                        return Err(PartitionError::NotMonotone {
                            lower: q,
                            upper: p.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Slices along the first axis; each slice is a `(dim - 1)`-partition.
    pub fn slices(&self) -> Vec<DPartition> {
        let mut out: Vec<BTreeMap<Vec<u32>, u32>> = Vec::new();
        for (p, &v) in &self.entries {
            let i = p[0] as usize;
            while out.len() < i {
                out.push(BTreeMap::new());
            }
            out[i - 1].insert(p[1..].to_vec(), v);
        }
        out.into_iter()
            .map(|entries| DPartition {
                dim: self.dim - 1,
                entries,
            })
            .collect()
    }

    fn from_slices(dim: usize, slices: &[&DPartition]) -> DPartition {
        let mut entries = BTreeMap::new();
        for (i, s) in slices.iter().enumerate() {
            for (q, &v) in &s.entries {
                let mut p = Vec::with_capacity(dim);
                p.push(i as u32 + 1);
                p.extend_from_slice(q);
                entries.insert(p, v);
            }
        }
        DPartition { dim, entries }
    }

    /// `self <= other` pointwise.
    pub fn is_contained_in(&self, other: &DPartition) -> bool {
        self.entries.iter().all(|(p, &v)| other.entry(p) >= v)
    }

    /// Raw constructor without validation, for tests of the invariant itself.
    #[doc(hidden)]
    pub fn from_entries_unchecked(dim: usize, entries: BTreeMap<Vec<u32>, u32>) -> Self {
        DPartition { dim, entries }
    }
}

impl fmt::Debug for DPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DPartition({})", self.canonical_key())
    }
}

impl PartialOrd for DPartition {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Dimension first, then lexicographic on the sorted cell list.
impl Ord for DPartition {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.cells().cmp(&other.cells()))
    }
}

/// All partitions of the given dimension and size, each exactly once,
/// sorted by cell list. `cap` bounds the number of partitions produced.
pub fn enumerate_partitions(
    dim: usize,
    size: u32,
    cap: Option<usize>,
) -> Result<Vec<DPartition>, PartitionError> {
    let mut memo: BTreeMap<(usize, u32), Vec<DPartition>> = BTreeMap::new();
    let mut out = enumerate_memo(dim, size, cap, &mut memo)?;
    out.sort();
    Ok(out)
}

/// All partitions of the given dimension with size `<= max_size`,
/// ordered by size and then by cell list.
pub fn enumerate_up_to(
    dim: usize,
    max_size: u32,
    cap: Option<usize>,
) -> Result<Vec<DPartition>, PartitionError> {
    let mut out = Vec::new();
    for n in 0..=max_size {
        let remaining = cap.map(|c| c.saturating_sub(out.len()));
        out.extend(enumerate_partitions(dim, n, remaining)?);
    }
    Ok(out)
}

fn enumerate_memo(
    dim: usize,
    size: u32,
    cap: Option<usize>,
    memo: &mut BTreeMap<(usize, u32), Vec<DPartition>>,
) -> Result<Vec<DPartition>, PartitionError> {
    if let Some(hit) = memo.get(&(dim, size)) {
        return Ok(hit.clone());
    }
    let result = if size == 0 {
        alloc::vec![DPartition::empty(dim)]
    } else if dim == 0 {
        let mut entries = BTreeMap::new();
        entries.insert(Vec::new(), size);
        alloc::vec![DPartition { dim: 0, entries }]
    } else {
        let mut pools: Vec<Vec<DPartition>> = Vec::with_capacity(size as usize + 1);
        pools.push(Vec::new());
        for s in 1..=size {
            pools.push(enumerate_memo(dim - 1, s, cap, memo)?);
        }
        let mut out = Vec::new();
        let mut chain: Vec<&DPartition> = Vec::new();
        extend_chain(dim, size, &pools, &mut chain, &mut out, cap)?;
        out
    };
    if let Some(c) = cap {
        if result.len() > c {
            return Err(PartitionError::ResourceLimit { cap: c });
        }
    }
    memo.insert((dim, size), result.clone());
    Ok(result)
}

// Appends slices, each contained in the previous one, until `remaining`
// boxes are used up.
fn extend_chain<'a>(
    dim: usize,
    remaining: u32,
    pools: &'a [Vec<DPartition>],
    chain: &mut Vec<&'a DPartition>,
    out: &mut Vec<DPartition>,
    cap: Option<usize>,
) -> Result<(), PartitionError> {
    if remaining == 0 {
        out.push(DPartition::from_slices(dim, chain));
        if let Some(c) = cap {
            if out.len() > c {
                return Err(PartitionError::ResourceLimit { cap: c });
            }
        }
        return Ok(());
    }
    let bound = chain.last().map(|p| p.size()).unwrap_or(remaining);
    for s in 1..=remaining.min(bound) {
        for cand in &pools[s as usize] {
            if let Some(prev) = chain.last() {
                if !cand.is_contained_in(prev) {
                    continue;
                }
            }
            chain.push(cand);
            extend_chain(dim, remaining - s, pools, chain, out, cap)?;
            chain.pop();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    // Down-sets of size n in Z_{>=1}^(dim+1), grown one cell at a time and
    // deduplicated as sets. Shares nothing with the slice recursion.
    fn brute_force_count(dim: usize, n: usize) -> usize {
        let width = dim + 1;
        let mut level: BTreeSet<BTreeSet<Vec<u32>>> = BTreeSet::new();
        level.insert(BTreeSet::new());
        for _ in 0..n {
            let mut next = BTreeSet::new();
            for shape in &level {
                let mut candidates: BTreeSet<Vec<u32>> = BTreeSet::new();
                candidates.insert(vec![1; width]);
                for c in shape {
                    for a in 0..width {
                        let mut d = c.clone();
                        d[a] += 1;
                        candidates.insert(d);
                    }
                }
                for c in candidates {
                    if shape.contains(&c) {
                        continue;
                    }
                    let addable = (0..width).all(|a| {
                        if c[a] == 1 {
                            return true;
                        }
                        let mut d = c.clone();
                        d[a] -= 1;
                        shape.contains(&d)
                    });
                    if addable {
                        let mut s = shape.clone();
                        s.insert(c);
                        next.insert(s);
                    }
                }
            }
            level = next;
        }
        level.len()
    }

    #[test]
    fn solid_counts_match_brute_force() {
        let expected = [1usize, 1, 4, 10, 26, 59];
        for (n, &e) in expected.iter().enumerate() {
            let listed = enumerate_partitions(3, n as u32, None).unwrap();
            assert_eq!(listed.len(), e, "size {}", n);
            assert_eq!(brute_force_count(3, n), e, "brute size {}", n);
        }
        assert_eq!(enumerate_partitions(3, 6, None).unwrap().len(), 140);
    }

    #[test]
    fn plane_and_linear_counts() {
        // coefficients of prod (1 - q^n)^(-n), computed by direct expansion
        let mut macmahon = [0i64; 9];
        macmahon[0] = 1;
        for n in 1..=8usize {
            for _ in 0..n {
                for k in n..=8 {
                    macmahon[k] += macmahon[k - n];
                }
            }
        }
        for n in 0..=8u32 {
            let got = enumerate_partitions(2, n, None).unwrap().len() as i64;
            assert_eq!(got, macmahon[n as usize]);
        }
        assert_eq!(enumerate_partitions(2, 6, None).unwrap().len(), 48);
        let linear: Vec<usize> = (0..=7)
            .map(|n| enumerate_partitions(1, n, None).unwrap().len())
            .collect();
        assert_eq!(linear, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(enumerate_partitions(0, 5, None).unwrap().len(), 1);
    }

    #[test]
    fn empty_partition_is_unique() {
        let v = enumerate_partitions(3, 0, None).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v[0].is_empty());
        assert_eq!(v[0].height(), 0);
        assert!(v[0].cells().is_empty());
        assert_eq!(v[0].canonical_key().as_str(), "3:");
    }

    #[test]
    fn cells_of_small_partitions() {
        let single = DPartition::from_entries(3, [(vec![1, 1, 1], 1)]).unwrap();
        assert_eq!(single.cells(), vec![vec![1, 1, 1, 1]]);
        let p = DPartition::from_entries(3, [(vec![1, 1, 1], 2), (vec![2, 1, 1], 1)]).unwrap();
        let cells: BTreeSet<Vec<u32>> = p.cells().into_iter().collect();
        let expect: BTreeSet<Vec<u32>> =
            [vec![1, 1, 1, 1], vec![1, 1, 1, 2], vec![2, 1, 1, 1]].into_iter().collect();
        assert_eq!(cells, expect);
    }

    #[test]
    fn enumeration_output_is_valid_and_reconstructible() {
        for n in 0..=6 {
            for p in enumerate_partitions(3, n, None).unwrap() {
                assert!(p.is_valid());
                assert_eq!(p.cells().len() as u32, p.size());
                let back = DPartition::from_cells(3, p.cells()).unwrap();
                assert_eq!(back, p);
                assert_eq!(DPartition::from_key(&p.canonical_key()).unwrap(), p);
            }
        }
    }

    #[test]
    fn raising_an_entry_breaks_monotonicity_exactly_when_a_predecessor_equals_it() {
        for p in enumerate_partitions(3, 4, None).unwrap() {
            for (point, &v) in p.entries() {
                let blocked = (0..3).any(|a| {
                    if point[a] == 1 {
                        return false;
                    }
                    let mut q = point.clone();
                    q[a] -= 1;
                    p.entry(&q) == v
                });
                let mut raised = p.entries().clone();
                raised.insert(point.clone(), v + 1);
                let candidate = DPartition::from_entries_unchecked(3, raised);
                assert_eq!(candidate.is_valid(), !blocked, "{:?} at {:?}", p, point);
            }
        }
    }

    #[test]
    fn keys_are_injective_up_to_size_four() {
        let mut seen = BTreeSet::new();
        for n in 0..=4 {
            for p in enumerate_partitions(3, n, None).unwrap() {
                assert!(seen.insert(p.canonical_key()));
            }
        }
        assert_eq!(seen.len(), 1 + 1 + 4 + 10 + 26);
    }

    #[test]
    fn insertion_order_does_not_matter() {
        let a = DPartition::from_entries(3, [(vec![1, 1, 1], 2), (vec![1, 2, 1], 1)]).unwrap();
        let b = DPartition::from_entries(3, [(vec![1, 2, 1], 1), (vec![1, 1, 1], 2)]).unwrap();
        assert_eq!(a.canonical_key(), b.canonical_key());
        let c = DPartition::from_cells(3, vec![vec![1, 2, 1, 1], vec![1, 1, 1, 2], vec![1, 1, 1, 1]])
            .unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(matches!(
            DPartition::from_entries(3, [(vec![2, 1, 1], 1)]),
            Err(PartitionError::NotMonotone { .. })
        ));
        assert!(matches!(
            DPartition::from_cells(3, vec![vec![1, 1, 1, 2]]),
            Err(PartitionError::GappedColumn(_))
        ));
        assert!(matches!(
            DPartition::from_cells(3, vec![vec![1, 1, 1, 1], vec![1, 1, 1, 1]]),
            Err(PartitionError::DuplicateCell(_))
        ));
        assert!(matches!(
            DPartition::from_entries(3, [(vec![1, 1], 1)]),
            Err(PartitionError::WrongArity { .. })
        ));
        assert!(matches!(
            DPartition::from_entries(3, [(vec![0, 1, 1], 1)]),
            Err(PartitionError::ZeroCoordinate(_))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_partitions(3, 6, Some(100)),
            Err(PartitionError::ResourceLimit { cap: 100 })
        );
        assert!(enumerate_partitions(3, 6, Some(140)).is_ok());
    }

    #[test]
    fn order_is_lexicographic_on_cells() {
        let v = enumerate_partitions(3, 5, None).unwrap();
        for w in v.windows(2) {
            assert!(w[0].cells() < w[1].cells());
        }
    }
}
