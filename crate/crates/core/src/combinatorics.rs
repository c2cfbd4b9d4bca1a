//! Combinatorial weights of `d`-partitions.
//!
//! A `(d-1)`-partition `ξ` is identified with its binary representation,
//! the 0/1 function on `Z^d_{>=1}` that is 1 exactly below the graph of `ξ`.
//! A decomposition of a `d`-partition `π` writes it as `sum m_ξ ξ` over
//! binary representations; `ω^c_π = sum over decompositions of prod 1/m_ξ!`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::partitions::{CanonicalKey, DPartition, PartitionError};

/// 1 if `point` (of length `ξ.dim() + 1`) lies in the binary representation of `ξ`.
pub fn binary_indicator(xi: &DPartition, point: &[u32]) -> u32 {
    debug_assert_eq!(point.len(), xi.dim() + 1);
    match point.split_last() {
        Some((&last, head)) if last >= 1 && last <= xi.entry(head) => 1,
        _ => 0,
    }
}

/// One element of the decomposition set of a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    dim: usize,
    parts: Vec<(DPartition, u32)>,
}

impl Decomposition {
    /// Layers `ξ` (of dimension `dim - 1`) with their multiplicities, ordered by key.
    pub fn parts(&self) -> &[(DPartition, u32)] {
        &self.parts
    }

    pub fn multiplicities(&self) -> BTreeMap<CanonicalKey, u32> {
        self.parts
            .iter()
            .map(|(xi, m)| (xi.canonical_key(), *m))
            .collect()
    }

    /// `sum m_ξ`; equals the height of the decomposed partition.
    pub fn num_layers(&self) -> u32 {
        self.parts.iter().map(|(_, m)| m).sum()
    }

    /// `prod 1/m_ξ!`.
    pub fn weight(&self) -> BigRational {
        self.parts
            .iter()
            .fold(BigRational::one(), |acc, (_, m)| acc / factorial(*m))
    }

    /// `sum m_ξ ξ` as a `dim`-partition.
    pub fn reconstruct(&self) -> Result<DPartition, PartitionError> {
        let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for (xi, m) in &self.parts {
            for (head, &v) in xi.entries() {
                for k in 1..=v {
                    let mut p = head.clone();
                    p.push(k);
                    *acc.entry(p).or_insert(0) += m;
                }
            }
        }
        DPartition::from_entries(self.dim, acc)
    }
}

fn factorial(n: u32) -> BigRational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    BigRational::from_integer(acc)
}

struct Candidate {
    xi: DPartition,
    cells: Vec<usize>,
}

struct Search {
    candidates: Vec<Candidate>,
    remaining: Vec<u32>,
}

impl Search {
    fn new(pi: &DPartition) -> Self {
        let points: Vec<Vec<u32>> = pi.support().cloned().collect();
        let index: BTreeMap<&[u32], usize> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let remaining = points.iter().map(|p| pi.entry(p)).collect();
        let mut candidates = Vec::new();
        let mut chosen = BTreeSet::new();
        down_sets(&points, &index, 0, &mut chosen, &mut |set| {
            if set.is_empty() {
                return;
            }
            let dim = pi.dim();
            let mut heads: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
            for &i in set.iter() {
                let (last, head) = points[i].split_last().expect("dimension >= 1");
                let e = heads.entry(head.to_vec()).or_insert(0);
                *e = (*e).max(*last);
            }
            let xi = DPartition::from_entries(dim - 1, heads).expect("down-set gives a partition");
            candidates.push(Candidate {
                xi,
                cells: set.iter().copied().collect(),
            });
        });
        // largest first, then by key
        candidates.sort_by(|a, b| {
            b.cells
                .len()
                .cmp(&a.cells.len())
                .then_with(|| a.xi.canonical_key().cmp(&b.xi.canonical_key()))
        });
        Search {
            candidates,
            remaining,
        }
    }

    fn run<E>(
        &mut self,
        start: usize,
        left: u32,
        stack: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize], &[Candidate]) -> Result<(), E>,
    ) -> Result<(), E> {
        if left == 0 {
            return emit(stack, &self.candidates);
        }
        let layers_left = self.remaining.first().copied().unwrap_or(0);
        for i in start..self.candidates.len() {
            let size = self.candidates[i].cells.len() as u32;
            if size * layers_left < left {
                break;
            }
            if size > left || self.candidates[i].cells.iter().any(|&c| self.remaining[c] == 0) {
                continue;
            }
            for &c in &self.candidates[i].cells {
                self.remaining[c] -= 1;
            }
            stack.push(i);
            let r = self.run(i, left - size, stack, emit);
            stack.pop();
            for &c in &self.candidates[i].cells {
                self.remaining[c] += 1;
            }
            r?;
        }
        Ok(())
    }
}

// All down-closed subsets of `points` (sorted lexicographically, so every
// predecessor of a point comes before it).
fn down_sets(
    points: &[Vec<u32>],
    index: &BTreeMap<&[u32], usize>,
    at: usize,
    chosen: &mut BTreeSet<usize>,
    visit: &mut dyn FnMut(&BTreeSet<usize>),
) {
    if at == points.len() {
        visit(chosen);
        return;
    }
    down_sets(points, index, at + 1, chosen, visit);
    let p = &points[at];
    let closed = (0..p.len()).all(|i| {
        if p[i] == 1 {
            return true;
        }
        let mut q = p.clone();
        q[i] -= 1;
        index.get(q.as_slice()).is_some_and(|j| chosen.contains(j))
    });
    if closed {
        chosen.insert(at);
        down_sets(points, index, at + 1, chosen, visit);
        chosen.remove(&at);
    }
}

fn grouped(stack: &[usize]) -> Vec<(usize, u32)> {
    let mut out: Vec<(usize, u32)> = Vec::new();
    for &i in stack {
        match out.last_mut() {
            Some((j, m)) if *j == i => *m += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

/// Every decomposition of `π`, in a fixed deterministic order. `cap` bounds
/// how many are produced. The empty partition has one empty decomposition.
pub fn decompositions(
    pi: &DPartition,
    cap: Option<usize>,
) -> Result<Vec<Decomposition>, PartitionError> {
    if pi.dim() == 0 {
        return Err(PartitionError::WrongDimension {
            expected: 1,
            found: 0,
        });
    }
    let mut search = Search::new(pi);
    let mut out = Vec::new();
    let dim = pi.dim();
    let mut emit = |stack: &[usize], cands: &[Candidate]| -> Result<(), PartitionError> {
        let mut parts: Vec<(DPartition, u32)> = grouped(stack)
            .into_iter()
            .map(|(i, m)| (cands[i].xi.clone(), m))
            .collect();
        parts.sort_by_key(|(xi, _)| xi.canonical_key());
        out.push(Decomposition { dim, parts });
        match cap {
            Some(c) if out.len() > c => Err(PartitionError::ResourceLimit { cap: c }),
            _ => Ok(()),
        }
    };
    search.run(0, pi.size(), &mut Vec::new(), &mut emit)?;
    Ok(out)
}

/// `ω^c_π`.
pub fn omega_c(pi: &DPartition) -> BigRational {
    assert!(pi.dim() >= 1, "combinatorial weight needs dimension >= 1");
    let mut search = Search::new(pi);
    let mut total = BigRational::zero();
    let mut emit = |stack: &[usize], _: &[Candidate]| -> Result<(), core::convert::Infallible> {
        let w = grouped(stack)
            .into_iter()
            .fold(BigRational::one(), |acc, (_, m)| acc / factorial(m));
        total += w;
        Ok(())
    };
    let _ = search.run(0, pi.size(), &mut Vec::new(), &mut emit);
    total
}
