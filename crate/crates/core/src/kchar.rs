//! Laurent characters of the 4-torus and of the Calabi-Yau 3-torus.
//!
//! A character is a finitely supported map from exponent vectors to integer
//! multiplicities. Rank-4 characters live on `(C*)^4`; rank-3 characters
//! live on the subtorus `t1 t2 t3 t4 = 1`, written in `t1, t2, t3` after
//! eliminating `t4`. Rank-3 exponents keep a zero in the fourth slot.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::partitions::{DPartition, PartitionError};

pub type Exponent = [i32; 4];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentChar {
    rank: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentChar {
    pub fn zero(rank: usize) -> Self {
        assert!(rank == 3 || rank == 4, "rank must be 3 or 4");
        LaurentChar {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        LaurentChar::monomial(rank, [0; 4], 1)
    }

    pub fn monomial(rank: usize, exp: Exponent, mult: i64) -> Self {
        let mut c = LaurentChar::zero(rank);
        c.add_term(exp, BigInt::from(mult));
        c
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, i64)>>(rank: usize, terms: I) -> Self {
        let mut c = LaurentChar::zero(rank);
        for (e, m) in terms {
            c.add_term(e, BigInt::from(m));
        }
        c
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn add_term(&mut self, exp: Exponent, mult: BigInt) {
        debug_assert!(self.rank == 4 || exp[3] == 0);
        if mult.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(mult);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += mult;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms sorted lexicographically by exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mult(&self, exp: &Exponent) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Sum of multiplicities (the value at `t = 1`).
    pub fn mass(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn add(&self, other: &LaurentChar) -> LaurentChar {
        assert_eq!(self.rank, other.rank);
        let mut out = self.clone();
        for (e, m) in &other.terms {
            out.add_term(*e, m.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentChar) -> LaurentChar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentChar {
        LaurentChar {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, m)| (*e, -m)).collect(),
        }
    }

    pub fn mul(&self, other: &LaurentChar) -> LaurentChar {
        assert_eq!(self.rank, other.rank);
        let mut out = LaurentChar::zero(self.rank);
        for (ea, ma) in &self.terms {
            for (eb, mb) in &other.terms {
                out.add_term(add_exp(ea, eb), ma * mb);
            }
        }
        out
    }

    /// Multiply by the monomial `t^shift`.
    pub fn shift(&self, shift: &Exponent) -> LaurentChar {
        LaurentChar {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(e, m)| (add_exp(e, shift), m.clone()))
                .collect(),
        }
    }

    pub fn is_bar_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, m)| self.terms.get(&neg_exp(e)) == Some(m))
    }

    /// Evaluate at a point of the torus (nonzero rationals). Used by tests
    /// as an independent check of termwise manipulations.
    pub fn eval(&self, t: &[num_rational::BigRational]) -> num_rational::BigRational {
        use num_rational::BigRational;
        let mut acc = BigRational::zero();
        for (e, m) in &self.terms {
            let mut v = BigRational::from_integer(m.clone());
            for (i, &k) in e.iter().take(self.rank).enumerate() {
                let base = if k >= 0 { t[i].clone() } else { t[i].recip() };
                for _ in 0..k.unsigned_abs() {
                    v *= &base;
                }
            }
            acc += v;
        }
        acc
    }
}

fn add_exp(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn neg_exp(a: &Exponent) -> Exponent {
    [-a[0], -a[1], -a[2], -a[3]]
}

impl fmt::Debug for LaurentChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, m) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{}*t^{:?}", m, &e[..self.rank])?;
        }
        Ok(())
    }
}

/// `Z_pi = sum over cells (i,j,k,l) of t1^(i-1) t2^(j-1) t3^(k-1) t4^(l-1)`.
pub fn char_of_partition(pi: &DPartition) -> Result<LaurentChar, PartitionError> {
    if pi.dim() != 3 {
        return Err(PartitionError::WrongDimension {
            expected: 3,
            found: pi.dim(),
        });
    }
    let mut z = LaurentChar::zero(4);
    for c in pi.cells() {
        let e = [
            c[0] as i32 - 1,
            c[1] as i32 - 1,
            c[2] as i32 - 1,
            c[3] as i32 - 1,
        ];
        z.add_term(e, BigInt::one());
    }
    Ok(z)
}

/// `prod_i (1 - t_i)` on the 4-torus.
fn one_minus_t_product() -> LaurentChar {
    let mut p = LaurentChar::one(4);
    for i in 0..4 {
        let mut e = [0; 4];
        e[i] = 1;
        let factor = LaurentChar::from_terms(4, [([0; 4], 1), (e, -1)]);
        p = p.mul(&factor);
    }
    p
}

/// `V = Z + Zbar/(t1t2t3t4) - Z Zbar (1-t1)(1-t2)(1-t3)(1-t4)/(t1t2t3t4)`.
pub fn vertex_character(z: &LaurentChar) -> LaurentChar {
    assert_eq!(z.rank(), 4, "vertex_character takes a rank-4 character");
    let inv_cy = [-1, -1, -1, -1];
    let zbar = bar(z);
    let cross = z.mul(&zbar).mul(&one_minus_t_product()).shift(&inv_cy);
    z.add(&zbar.shift(&inv_cy)).sub(&cross)
}

/// Restrict to `t1 t2 t3 t4 = 1` via `t4 -> (t1 t2 t3)^-1`.
pub fn specialize_cy(chi: &LaurentChar) -> LaurentChar {
    let mut out = LaurentChar::zero(3);
    for (e, m) in chi.terms() {
        let spec = if chi.rank() == 4 {
            [e[0] - e[3], e[1] - e[3], e[2] - e[3], 0]
        } else {
            *e
        };
        out.add_term(spec, m.clone());
    }
    out
}

/// `t^w -> t^-w`.
pub fn bar(chi: &LaurentChar) -> LaurentChar {
    LaurentChar {
        rank: chi.rank(),
        terms: chi.terms().map(|(e, m)| (neg_exp(e), m.clone())).collect(),
    }
}

/// Specialized vertex of a solid partition.
pub fn cy_vertex(pi: &DPartition) -> Result<LaurentChar, PartitionError> {
    Ok(specialize_cy(&vertex_character(&char_of_partition(pi)?)))
}

/// Exponent vectors of a character, for callers that only need the support.
pub fn support(chi: &LaurentChar) -> Vec<Exponent> {
    chi.terms().map(|(e, _)| *e).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_partitions;
    use crate::poly::{rat, ratio};
    use alloc::vec;
    use num_rational::BigRational;

    fn t(e: [i32; 3], m: i64) -> (Exponent, i64) {
        ([e[0], e[1], e[2], 0], m)
    }

    // Rational-function value of the vertex formula at a torus point,
    // computed directly from Z without any character manipulation.
    fn vertex_by_evaluation(z: &LaurentChar, p: &[BigRational; 4]) -> BigRational {
        let inv: Vec<BigRational> = p.iter().map(|x| x.recip()).collect();
        let z_val = z.eval(p);
        let zbar_val = z.eval(&inv);
        let prod: BigRational = p.iter().product();
        let one_minus: BigRational = p.iter().map(|x| rat(1) - x).product();
        &z_val + &zbar_val / &prod - &z_val * &zbar_val * one_minus / &prod
    }

    #[test]
    fn char_of_small_partitions() {
        let empty = DPartition::empty(3);
        assert!(char_of_partition(&empty).unwrap().is_zero());
        let single = DPartition::from_monomials(&[[0, 0, 0, 0]]).unwrap();
        assert_eq!(char_of_partition(&single).unwrap(), LaurentChar::one(4));
        let p = DPartition::from_entries(3, [(vec![1, 1, 1], 2), (vec![2, 1, 1], 1)]).unwrap();
        let expect = LaurentChar::from_terms(4, [([0, 0, 0, 0], 1), ([1, 0, 0, 0], 1), ([0, 0, 0, 1], 1)]);
        assert_eq!(char_of_partition(&p).unwrap(), expect);
        assert!(char_of_partition(&DPartition::empty(2)).is_err());
    }

    #[test]
    fn vertex_of_zero_and_one() {
        assert!(vertex_character(&LaurentChar::zero(4)).is_zero());
        let v = vertex_character(&LaurentChar::one(4));
        // 1 + t^-1111 - prod(1 - t_i) t^-1111, expanded by hand
        let mut expect = LaurentChar::one(4);
        expect.add_term([-1, -1, -1, -1], BigInt::one());
        for mask in 0u32..16 {
            let mut e = [-1, -1, -1, -1];
            for (i, slot) in e.iter_mut().enumerate() {
                if mask & (1 << i) != 0 {
                    *slot += 1;
                }
            }
            let sign = if mask.count_ones() % 2 == 0 { -1 } else { 1 };
            expect.add_term(e, BigInt::from(sign));
        }
        assert_eq!(v, expect);
    }

    #[test]
    fn vertex_matches_direct_evaluation_up_to_size_three() {
        let points = [
            [rat(2), rat(3), ratio(5, 7), rat(-4)],
            [ratio(-1, 3), rat(7), ratio(2, 9), ratio(11, 5)],
        ];
        for n in 0..=3 {
            for pi in enumerate_partitions(3, n, None).unwrap() {
                let z = char_of_partition(&pi).unwrap();
                let v = vertex_character(&z);
                for p in &points {
                    assert_eq!(v.eval(p), vertex_by_evaluation(&z, p), "{:?}", pi);
                }
            }
        }
    }

    #[test]
    fn displayed_vertex_of_one_plus_t1_plus_t4() {
        let z = LaurentChar::from_terms(4, [([0, 0, 0, 0], 1), ([1, 0, 0, 0], 1), ([0, 0, 0, 1], 1)]);
        let v = specialize_cy(&vertex_character(&z));
        let first = LaurentChar::from_terms(
            3,
            [
                t([3, 2, 2], 1),
                t([3, 2, 1], -1),
                t([3, 1, 2], -1),
                t([3, 1, 1], 1),
                t([1, 2, 2], -1),
                t([1, 2, 1], 1),
                t([1, 1, 2], 1),
                t([1, 1, 1], 2),
                t([1, 1, 0], -2),
                t([1, 0, 0], 2),
                t([1, 0, -1], 1),
                t([1, -1, 0], 1),
                t([1, 0, 1], -2),
                t([1, -1, -1], -1),
                t([0, 1, 0], 1),
                t([0, 0, 1], 1),
                t([0, 1, 1], -1),
            ],
        );
        let expect = first.add(&bar(&first));
        assert_eq!(v, expect);
    }

    #[test]
    fn specialize_examples() {
        let all = LaurentChar::monomial(4, [1, 1, 1, 1], 1);
        assert_eq!(specialize_cy(&all), LaurentChar::one(3));
        let t4 = LaurentChar::monomial(4, [0, 0, 0, 1], 1);
        assert_eq!(specialize_cy(&t4), LaurentChar::monomial(3, [-1, -1, -1, 0], 1));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(bar(&LaurentChar::one(3)), LaurentChar::one(3));
        let chi = LaurentChar::from_terms(3, [t([1, 0, 0], 1), t([0, -1, 0], 2)]);
        let expect = LaurentChar::from_terms(3, [t([-1, 0, 0], 1), t([0, 1, 0], 2)]);
        assert_eq!(bar(&chi), expect);
        assert_eq!(bar(&bar(&chi)), chi);
    }

    #[test]
    fn specialized_vertices_are_self_dual_without_fixed_part() {
        for n in 0..=6 {
            for pi in enumerate_partitions(3, n, None).unwrap() {
                let v = cy_vertex(&pi).unwrap();
                assert!(v.is_bar_symmetric(), "{:?}", pi);
                assert!(v.mult(&[0, 0, 0, 0]).is_zero(), "{:?}", pi);
                assert_eq!(v.mass(), BigInt::from(2 * n), "{:?}", pi);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_char() -> impl Strategy<Value = LaurentChar> {
            proptest::collection::vec(((-3i32..4, -3i32..4, -3i32..4, -3i32..4), -5i64..6), 0..12)
                .prop_map(|ts| {
                    LaurentChar::from_terms(4, ts.into_iter().map(|((a, b, c, d), m)| ([a, b, c, d], m)))
                })
        }

        proptest! {
            #[test]
            fn bar_is_an_involution(chi in arb_char()) {
                prop_assert_eq!(bar(&bar(&chi)), chi);
            }

            #[test]
            fn bar_and_specialization_commute(chi in arb_char()) {
                prop_assert_eq!(specialize_cy(&bar(&chi)), bar(&specialize_cy(&chi)));
            }

            #[test]
            fn no_zero_multiplicities_are_stored(a in arb_char(), b in arb_char()) {
                let prod = a.mul(&b).sub(&b.mul(&a));
                prop_assert!(prod.is_zero());
                prop_assert!(a.add(&b).terms().all(|(_, m)| !m.is_zero()));
            }
        }
    }
}
