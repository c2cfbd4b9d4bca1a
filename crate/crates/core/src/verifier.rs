//! Verification drivers: sign assignment, the series identities, the
//! specialization shape, sign uniqueness and toric assembly.
//!
//! Identities in the equivariant parameters are tested at random rational
//! points drawn from a seeded generator; bundle parameters stay symbolic.
//! A mismatch at a single point is a definitive failure.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::combinatorics::omega_c;
use crate::localization::{
    specialization_d, specialize_limit, symbolic_d, tautological_factor, vertex_weight,
    LinearFormFactored, LocalizationError, SpecializedValue,
};
use crate::partitions::{enumerate_partitions, CanonicalKey, DPartition, PartitionError};
use crate::poly::{rat, Poly};
use crate::series::{macmahon, SeriesError, TruncatedSeries};

/// Largest order the DT4 targets run at without an explicit override.
pub const DEFAULT_ORDER_CAP: usize = 6;
/// Resamples per trial after hitting a pole.
pub const POLE_RETRIES: usize = 20;
/// Largest order accepted by brute-force uniqueness.
pub const BRUTE_ORDER_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifierError {
    #[error("partition {key}: {source}")]
    AtPartition {
        key: CanonicalKey,
        source: LocalizationError,
    },
    #[error("partition {key}: specialized value {value} does not have the expected shape for height {height}")]
    WrongShape {
        key: CanonicalKey,
        value: String,
        height: u32,
    },
    #[error("order {order} exceeds the checked range {cap}; pass the unsafe-order override to proceed")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("brute-force mode supports orders up to {cap}, got {order}")]
    BruteOrderTooLarge { order: usize, cap: usize },
    #[error("no sign for partition {0}")]
    MissingSign(CanonicalKey),
    #[error("weight table covers order {have}, need {need}")]
    TableTooSmall { have: usize, need: usize },
    #[error("chart {index}: {reason}")]
    BadChart { index: usize, reason: String },
    #[error("gave up after {0} resamples hitting poles")]
    PoleRetries(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Localization(#[from] LocalizationError),
}

// ---------------------------------------------------------------------------
// specialization

/// Outcome of the `s -> 0` specialization of `L_π(0,0,0,-d) w_π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaResult {
    /// Positive rational with value `(-1)^|π| ω prod (d - (l-1))` after the flip.
    pub omega: BigRational,
    /// Flip applied to the canonical `w_π` to make `ω` positive.
    pub sign: i8,
    /// The limit for the canonical (unflipped) `w_π`.
    pub limit: SpecializedValue,
}

/// Specialize with a precomputed canonical weight.
pub fn omega_from_weight(
    pi: &DPartition,
    weight: &LinearFormFactored<BigRational>,
) -> Result<OmegaResult, VerifierError> {
    let at = |source| VerifierError::AtPartition {
        key: pi.canonical_key(),
        source,
    };
    let l = tautological_factor(pi, &specialization_d()).map_err(at)?;
    let limit = specialize_limit(&l.mul(&weight.to_poly_coeffs())).map_err(at)?;
    let height = pi.height();
    if limit.scalar.is_zero() || !limit.has_falling_shape(height) {
        return Err(VerifierError::WrongShape {
            key: pi.canonical_key(),
            value: limit.to_string(),
            height,
        });
    }
    let signed = if pi.size().is_multiple_of(2) {
        limit.scalar.clone()
    } else {
        -limit.scalar.clone()
    };
    let sign = if signed.is_positive() { 1 } else { -1 };
    Ok(OmegaResult {
        omega: signed.abs(),
        sign,
        limit,
    })
}

/// `ω_π` with its sign flip, computing `w_π` from scratch.
pub fn omega_from_dt4(pi: &DPartition) -> Result<OmegaResult, VerifierError> {
    let w = vertex_weight(pi).map_err(|source| VerifierError::AtPartition {
        key: pi.canonical_key(),
        source,
    })?;
    omega_from_weight(pi, &w)
}

// ---------------------------------------------------------------------------
// weights and signs

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEntry {
    pub partition: DPartition,
    pub key: CanonicalKey,
    /// Canonical `w_π`.
    pub weight: LinearFormFactored<BigRational>,
}

impl WeightEntry {
    pub fn compute(partition: DPartition) -> Result<Self, VerifierError> {
        let key = partition.canonical_key();
        let weight = vertex_weight(&partition).map_err(|source| VerifierError::AtPartition {
            key: key.clone(),
            source,
        })?;
        Ok(WeightEntry {
            partition,
            key,
            weight,
        })
    }
}

/// Canonical weights of all solid partitions up to an order, grouped by size.
#[derive(Debug, Clone)]
pub struct WeightTable {
    by_size: Vec<Vec<WeightEntry>>,
}

impl WeightTable {
    pub fn build(order: usize) -> Result<Self, VerifierError> {
        Self::build_with(order, &mut |pi| WeightEntry::compute(pi.clone()))
    }

    /// Build through a lookup, e.g. a cache in front of [`WeightEntry::compute`].
    pub fn build_with(
        order: usize,
        lookup: &mut dyn FnMut(&DPartition) -> Result<WeightEntry, VerifierError>,
    ) -> Result<Self, VerifierError> {
        let mut by_size = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut row = Vec::new();
            for pi in enumerate_partitions(3, n as u32, None)? {
                row.push(lookup(&pi)?);
            }
            by_size.push(row);
        }
        Ok(WeightTable { by_size })
    }

    pub fn order(&self) -> usize {
        self.by_size.len() - 1
    }

    pub fn of_size(&self, n: usize) -> &[WeightEntry] {
        self.by_size.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn entries(&self) -> impl Iterator<Item = &WeightEntry> {
        self.by_size.iter().flatten()
    }

    pub fn up_to(&self, order: usize) -> impl Iterator<Item = &WeightEntry> {
        self.by_size.iter().take(order + 1).flatten()
    }

    pub fn len(&self) -> usize {
        self.by_size.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn require(&self, order: usize) -> Result<(), VerifierError> {
        if self.order() < order {
            return Err(VerifierError::TableTooSmall {
                have: self.order(),
                need: order,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    SpecializationDerived,
    BruteForced,
    UserSupplied,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::SpecializationDerived => "specialization-derived",
            Provenance::BruteForced => "brute-forced",
            Provenance::UserSupplied => "user-supplied",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "specialization-derived" => Some(Provenance::SpecializationDerived),
            "brute-forced" => Some(Provenance::BruteForced),
            "user-supplied" => Some(Provenance::UserSupplied),
            _ => None,
        }
    }
}

/// A sign `±1` per partition, multiplying the canonical `w_π`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SignAssignment {
    signs: BTreeMap<CanonicalKey, (i8, Provenance)>,
}

impl SignAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: CanonicalKey, sign: i8, provenance: Provenance) {
        assert!(sign == 1 || sign == -1, "sign must be 1 or -1");
        self.signs.insert(key, (sign, provenance));
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<i8> {
        self.signs.get(key).map(|(s, _)| *s)
    }

    pub fn provenance(&self, key: &CanonicalKey) -> Option<Provenance> {
        self.signs.get(key).map(|(_, p)| *p)
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalKey, i8, Provenance)> {
        self.signs.iter().map(|(k, (s, p))| (k, *s, *p))
    }

    /// Entries of `other` replace those of `self`.
    pub fn overridden_by(&self, other: &SignAssignment) -> SignAssignment {
        let mut out = self.clone();
        for (k, v) in &other.signs {
            out.signs.insert(k.clone(), *v);
        }
        out
    }

    /// Copy with the sign of `key` negated and marked user-supplied.
    pub fn flipped(&self, key: &CanonicalKey) -> SignAssignment {
        let mut out = self.clone();
        let s = out.get(key).unwrap_or(1);
        out.signs.insert(key.clone(), (-s, Provenance::UserSupplied));
        out
    }

    fn sign_of(&self, key: &CanonicalKey) -> Result<i8, VerifierError> {
        self.get(key).ok_or_else(|| VerifierError::MissingSign(key.clone()))
    }

    /// Signs making every `ω_π` positive.
    pub fn from_positivity(table: &WeightTable) -> Result<Self, VerifierError> {
        let mut out = SignAssignment::new();
        for e in table.entries() {
            let r = omega_from_weight(&e.partition, &e.weight)?;
            out.insert(e.key.clone(), r.sign, Provenance::SpecializationDerived);
        }
        Ok(out)
    }
}

/// Positivity signs for every solid partition of size `<= order`.
pub fn build_sign_assignment(order: usize) -> Result<SignAssignment, VerifierError> {
    SignAssignment::from_positivity(&WeightTable::build(order)?)
}

// ---------------------------------------------------------------------------
// reports

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Affine,
    Nekrasov,
    Counting,
    Specconj,
    Toric,
    Uniqueness,
}

impl Target {
    pub fn as_str(self) -> &'static str {
        match self {
            Target::Affine => "affine",
            Target::Nekrasov => "nekrasov",
            Target::Counting => "counting",
            Target::Specconj => "specconj",
            Target::Toric => "toric",
            Target::Uniqueness => "uniqueness",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Target::Affine,
            Target::Nekrasov,
            Target::Counting,
            Target::Specconj,
            Target::Toric,
            Target::Uniqueness,
        ]
        .into_iter()
        .find(|t| t.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// One failed comparison.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness {
    pub q_power: Option<usize>,
    /// Exponents of the bundle-parameter monomial, when the coefficient is a polynomial.
    pub monomial: Option<Vec<u32>>,
    /// The λ-point, empty when λ plays no role.
    pub point: Vec<BigRational>,
    pub key: Option<CanonicalKey>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub target: Target,
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    /// Filled in by callers that have a clock.
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    fn new(target: Target, order: usize, trials: usize, seed: u64, witnesses: Vec<Witness>) -> Self {
        let status = if witnesses.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            target,
            order,
            trials,
            seed,
            status,
            witnesses,
            notes: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub unsafe_order: bool,
}

impl VerifyOptions {
    pub fn new(order: usize, trials: usize, seed: u64) -> Self {
        VerifyOptions {
            order,
            trials,
            seed,
            unsafe_order: false,
        }
    }

    fn check_order(&self) -> Result<(), VerifierError> {
        if self.order > DEFAULT_ORDER_CAP && !self.unsafe_order {
            return Err(VerifierError::OrderTooLarge {
                order: self.order,
                cap: DEFAULT_ORDER_CAP,
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// sampling

/// Seeded source of rational λ-points with small numerators and denominators.
pub struct LambdaSampler {
    rng: ChaCha8Rng,
}

impl LambdaSampler {
    pub fn new(seed: u64) -> Self {
        LambdaSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> BigRational {
        loop {
            let num = (self.rng.next_u32() % 61) as i64 - 30;
            let den = (self.rng.next_u32() % 12) as i64 + 1;
            if num != 0 {
                return BigRational::new(BigInt::from(num), BigInt::from(den));
            }
        }
    }

    pub fn point(&mut self) -> [BigRational; 3] {
        [self.rational(), self.rational(), self.rational()]
    }
}

fn with_lambda4(l: &[BigRational; 3]) -> [BigRational; 4] {
    let l4 = -(&l[0] + &l[1] + &l[2]);
    [l[0].clone(), l[1].clone(), l[2].clone(), l4]
}

// e3 and e4 of four parameters
fn e3_e4(l: &[BigRational; 4]) -> (BigRational, BigRational) {
    let e4 = &l[0] * &l[1] * &l[2] * &l[3];
    let e3 = &l[0] * &l[1] * &l[2]
        + &l[0] * &l[1] * &l[3]
        + &l[0] * &l[2] * &l[3]
        + &l[1] * &l[2] * &l[3];
    (e3, e4)
}

/// `-e3(λ)/e4(λ)`, the factor in front of the bundle pairing in the exponent.
fn exponent_factor(l: &[BigRational; 4]) -> Result<BigRational, LocalizationError> {
    let (e3, e4) = e3_e4(l);
    if e4.is_zero() {
        return Err(LocalizationError::PoleHit);
    }
    Ok(-e3 / e4)
}

// Runs `trial` on fresh points until it avoids poles, at most POLE_RETRIES resamples.
fn sampled<T>(
    sampler: &mut LambdaSampler,
    mut trial: impl FnMut(&[BigRational; 3]) -> Result<T, VerifierError>,
) -> Result<T, VerifierError> {
    for _ in 0..=POLE_RETRIES {
        let p = sampler.point();
        match trial(&p) {
            Err(VerifierError::Localization(LocalizationError::PoleHit)) => continue,
            other => return other,
        }
    }
    Err(VerifierError::PoleRetries(POLE_RETRIES))
}

fn pole(e: LocalizationError) -> VerifierError {
    VerifierError::Localization(e)
}

fn poly_witness(n: usize, lhs: &Poly, rhs: &Poly, point: &[BigRational]) -> Option<Witness> {
    let diff = lhs - rhs;
    let (m, _) = diff.terms().next()?;
    Some(Witness {
        q_power: Some(n),
        monomial: Some(m.padded(4)),
        point: point.to_vec(),
        key: None,
        detail: format!(
            "lhs coefficient {} vs rhs coefficient {}",
            lhs.coeff(m),
            rhs.coeff(m)
        ),
    })
}

// ---------------------------------------------------------------------------
// affine identity

fn require_signs(
    table: &WeightTable,
    signs: &SignAssignment,
    order: usize,
) -> Result<Vec<Vec<i8>>, VerifierError> {
    table.require(order)?;
    (0..=order)
        .map(|n| {
            table
                .of_size(n)
                .iter()
                .map(|e| signs.sign_of(&e.key))
                .collect()
        })
        .collect()
}

/// `sum_π ε_π L_π(d) w_π q^|π| = M(-q)^E` with `d` symbolic.
pub fn verify_affine(
    table: &WeightTable,
    signs: &SignAssignment,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifierError> {
    opts.check_order()?;
    let n_max = opts.order;
    let eps = require_signs(table, signs, n_max)?;
    let d = symbolic_d();
    let taut: Vec<Vec<LinearFormFactored<Poly>>> = (0..=n_max)
        .map(|n| {
            table
                .of_size(n)
                .iter()
                .map(|e| tautological_factor(&e.partition, &d))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let m_neg = macmahon(n_max, -1).lift::<Poly>();
    let mut sampler = LambdaSampler::new(opts.seed);
    let mut witnesses = Vec::new();
    for _ in 0..opts.trials {
        let found = sampled(&mut sampler, |lambda| {
            let mut lhs = TruncatedSeries::<Poly>::zero(n_max);
            for n in 0..=n_max {
                let mut acc = Poly::zero();
                for (i, e) in table.of_size(n).iter().enumerate() {
                    let w = e.weight.evaluate(lambda, &[]).map_err(pole)?;
                    let l = taut[n][i].evaluate_lambda(lambda).map_err(pole)?;
                    let term = l.scale(&(w * rat(i64::from(eps[n][i]))));
                    acc = &acc + &term;
                }
                lhs.set_coeff(n, acc);
            }
            let l4 = with_lambda4(lambda);
            let factor = exponent_factor(&l4).map_err(pole)?;
            let pairing = (0..4).fold(Poly::zero(), |acc, m| &acc + &d[m].scale(&l4[m]));
            let rhs = m_neg.pow_scalar(&pairing.scale(&factor))?;
            Ok((0..=n_max)
                .filter_map(|n| poly_witness(n, &lhs.coeff(n), &rhs.coeff(n), &l4))
                .collect::<Vec<_>>())
        })?;
        witnesses.extend(found);
    }
    Ok(VerificationReport::new(
        Target::Affine,
        n_max,
        opts.trials,
        opts.seed,
        witnesses,
    ))
}

// ---------------------------------------------------------------------------
// Nekrasov

/// `sum_π ε_π w_π q^|π| = exp(K q)` with
/// `K = (λ1+λ2)(λ1+λ3)(λ2+λ3) / (λ1 λ2 λ3 (λ1+λ2+λ3))`.
pub fn verify_nekrasov(
    table: &WeightTable,
    signs: &SignAssignment,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifierError> {
    opts.check_order()?;
    let n_max = opts.order;
    let eps = require_signs(table, signs, n_max)?;
    let mut sampler = LambdaSampler::new(opts.seed);
    let mut witnesses = Vec::new();
    for _ in 0..opts.trials {
        let found = sampled(&mut sampler, |lambda| {
            let lhs = nekrasov_lhs(table, &eps, n_max, lambda)?;
            let k = nekrasov_exponent(lambda).map_err(pole)?;
            let rhs = TruncatedSeries::monomial(n_max, 1, k).exp()?;
            let l4 = with_lambda4(lambda);
            Ok((0..=n_max)
                .filter(|&n| lhs.coeff(n) != rhs.coeff(n))
                .map(|n| Witness {
                    q_power: Some(n),
                    point: l4.to_vec(),
                    detail: format!("lhs {} vs rhs {}", lhs.coeff(n), rhs.coeff(n)),
                    ..Witness::default()
                })
                .collect::<Vec<_>>())
        })?;
        witnesses.extend(found);
    }
    Ok(VerificationReport::new(
        Target::Nekrasov,
        n_max,
        opts.trials,
        opts.seed,
        witnesses,
    ))
}

fn nekrasov_lhs(
    table: &WeightTable,
    eps: &[Vec<i8>],
    n_max: usize,
    lambda: &[BigRational; 3],
) -> Result<TruncatedSeries<BigRational>, VerifierError> {
    let mut lhs = TruncatedSeries::zero(n_max);
    for n in 0..=n_max {
        let mut acc = BigRational::zero();
        for (i, e) in table.of_size(n).iter().enumerate() {
            let w = e.weight.evaluate(lambda, &[]).map_err(pole)?;
            acc += w * rat(i64::from(eps[n][i]));
        }
        lhs.set_coeff(n, acc);
    }
    Ok(lhs)
}

/// Left side of the Nekrasov comparison at one point.
pub fn nekrasov_series(
    table: &WeightTable,
    signs: &SignAssignment,
    order: usize,
    lambda: &[BigRational; 3],
) -> Result<TruncatedSeries<BigRational>, VerifierError> {
    let eps = require_signs(table, signs, order)?;
    nekrasov_lhs(table, &eps, order, lambda)
}

pub fn nekrasov_exponent(l: &[BigRational; 3]) -> Result<BigRational, LocalizationError> {
    let s = &l[0] + &l[1] + &l[2];
    let den = &l[0] * &l[1] * &l[2] * &s;
    if den.is_zero() {
        return Err(LocalizationError::PoleHit);
    }
    let num = (&l[0] + &l[1]) * (&l[0] + &l[2]) * (&l[1] + &l[2]);
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// counting

/// `sum_π ω_π t^height q^|π| = exp(t (P(q) - 1))` over `d`-partitions, with
/// `P` the generating function of `(d-1)`-partitions and `t = x0`.
///
/// With `dt4` given (dimension 3 only), `ω_π` from the specialization
/// replaces `ω^c_π` for every partition the table covers.
pub fn verify_counting(
    dim: usize,
    order: usize,
    dt4: Option<&WeightTable>,
) -> Result<VerificationReport, VerifierError> {
    if dim == 0 || (dt4.is_some() && dim != 3) {
        return Err(PartitionError::WrongDimension {
            expected: 3,
            found: dim,
        }
        .into());
    }
    let t = Poly::var(0);
    let mut lhs = TruncatedSeries::<Poly>::zero(order);
    let mut notes = Vec::new();
    for n in 0..=order {
        let dt4_row = dt4.filter(|tb| n <= tb.order()).map(|tb| tb.of_size(n));
        let mut acc = Poly::zero();
        match dt4_row {
            Some(row) => {
                for e in row {
                    let w = omega_from_weight(&e.partition, &e.weight)?.omega;
                    acc = &acc + &t.pow(e.partition.height()).scale(&w);
                }
            }
            None => {
                for pi in enumerate_partitions(dim, n as u32, None)? {
                    acc = &acc + &t.pow(pi.height()).scale(&omega_c(&pi));
                }
            }
        }
        lhs.set_coeff(n, acc);
    }
    if let Some(tb) = dt4 {
        notes.push(format!(
            "specialization weights used up to size {}",
            tb.order().min(order)
        ));
    }
    let mut p: Vec<BigRational> = (0..=order)
        .map(|n| {
            if dim == 1 {
                Ok(rat(1))
            } else {
                enumerate_partitions(dim - 1, n as u32, None).map(|v| rat(v.len() as i64))
            }
        })
        .collect::<Result<_, _>>()?;
    p[0] = BigRational::zero();
    let rhs = TruncatedSeries::new(order, p)
        .lift::<Poly>()
        .scale_by(&t)
        .exp()?;
    let witnesses = (0..=order)
        .filter(|&n| lhs.coeff(n) != rhs.coeff(n))
        .map(|n| Witness {
            q_power: Some(n),
            detail: format!(
                "lhs {} vs rhs {}",
                lhs.coeff(n).display_with(&["t"]),
                rhs.coeff(n).display_with(&["t"])
            ),
            ..Witness::default()
        })
        .collect();
    let mut report = VerificationReport::new(Target::Counting, order, 0, 0, witnesses);
    report.notes = notes;
    Ok(report)
}

// ---------------------------------------------------------------------------
// specialization shape

/// For every partition up to `order`: the `s`-orders balance, the limit is
/// independent of λ, and it equals `±ω prod (d - (l-1))` with `ω > 0`.
/// With `compare_combinatorial`, also `ω_π = ω^c_π`.
pub fn verify_specconj(
    table: &WeightTable,
    order: usize,
    compare_combinatorial: bool,
) -> Result<VerificationReport, VerifierError> {
    table.require(order)?;
    let mut witnesses = Vec::new();
    let mut checked = 0usize;
    for e in table.up_to(order) {
        checked += 1;
        match omega_from_weight(&e.partition, &e.weight) {
            Ok(r) => {
                if compare_combinatorial {
                    let c = omega_c(&e.partition);
                    if c != r.omega {
                        witnesses.push(Witness {
                            q_power: Some(e.partition.size() as usize),
                            key: Some(e.key.clone()),
                            detail: format!("ω = {} but ω^c = {}", r.omega, c),
                            ..Witness::default()
                        });
                    }
                }
            }
            Err(err @ (VerifierError::AtPartition { .. } | VerifierError::WrongShape { .. })) => {
                witnesses.push(Witness {
                    q_power: Some(e.partition.size() as usize),
                    key: Some(e.key.clone()),
                    detail: err.to_string(),
                    ..Witness::default()
                })
            }
            Err(err) => return Err(err),
        }
    }
    let mut report = VerificationReport::new(Target::Specconj, order, 0, 0, witnesses);
    report.notes.push(format!("{} partitions checked", checked));
    Ok(report)
}

// ---------------------------------------------------------------------------
// sign uniqueness

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniquenessMode {
    Brute,
    Incremental,
}

/// Brute force at one order: how many of the `2^partitions` sign vectors pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderOutcome {
    pub order: usize,
    pub partitions: usize,
    pub candidates: u64,
    pub passing: u64,
}

/// Incremental step: at `q^order`, comparing `d^degree` coefficients decides
/// the signs of the `unknowns` partitions of that height.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeFix {
    pub order: usize,
    pub degree: u32,
    pub unknowns: usize,
    pub solutions: u128,
    pub fixed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessReport {
    pub mode: UniquenessMode,
    pub order: usize,
    pub per_order: Vec<OrderOutcome>,
    pub fixes: Vec<DegreeFix>,
    /// Every order (brute) or degree step (incremental) had exactly one solution.
    pub unique: bool,
    /// The determined signs agree with the positivity rule.
    pub matches_positivity: bool,
    pub signs: SignAssignment,
}

impl UniquenessReport {
    pub fn passed(&self) -> bool {
        self.unique && self.matches_positivity
    }

    /// Number of signs fixed at `(order, degree)`.
    pub fn fixed_at(&self, order: usize, degree: u32) -> Option<usize> {
        self.fixes
            .iter()
            .find(|f| f.order == order && f.degree == degree)
            .map(|f| f.fixed)
    }

    pub fn to_report(&self, seed: u64, trials: usize) -> VerificationReport {
        let mut witnesses = Vec::new();
        for o in &self.per_order {
            if o.passing != 1 {
                witnesses.push(Witness {
                    q_power: Some(o.order),
                    detail: format!("{} of {} sign vectors pass", o.passing, o.candidates),
                    ..Witness::default()
                });
            }
        }
        for f in &self.fixes {
            if f.solutions != 1 {
                witnesses.push(Witness {
                    q_power: Some(f.order),
                    monomial: Some(alloc::vec![f.degree]),
                    detail: format!("{} solutions for {} unknown signs", f.solutions, f.unknowns),
                    ..Witness::default()
                });
            }
        }
        if self.unique && !self.matches_positivity {
            witnesses.push(Witness {
                detail: "unique signs differ from the positivity rule".to_string(),
                ..Witness::default()
            });
        }
        let mut r = VerificationReport::new(Target::Uniqueness, self.order, trials, seed, witnesses);
        for o in &self.per_order {
            r.notes.push(format!(
                "order {}: {} partitions, {} candidates, {} passing",
                o.order, o.partitions, o.candidates, o.passing
            ));
        }
        for f in &self.fixes {
            r.notes.push(format!(
                "order {} degree {}: {} unknowns, {} solutions, {} fixed",
                f.order, f.degree, f.unknowns, f.solutions, f.fixed
            ));
        }
        r
    }
}

/// Whether the signs making the affine identity hold are unique.
///
/// Brute mode tries every sign vector at each order `<= 3` (orders decouple)
/// at `trials` random λ-points. Incremental mode works at `d = (0,0,0,-d)`,
/// `s -> 0` and fixes signs height by height from the top `d`-degree down.
pub fn sign_uniqueness(
    table: &WeightTable,
    mode: UniquenessMode,
    order: usize,
    trials: usize,
    seed: u64,
) -> Result<UniquenessReport, VerifierError> {
    table.require(order)?;
    let positivity = SignAssignment::from_positivity(table)?;
    match mode {
        UniquenessMode::Brute => brute_uniqueness(table, &positivity, order, trials.max(1), seed),
        UniquenessMode::Incremental => incremental_uniqueness(table, &positivity, order),
    }
}

fn brute_uniqueness(
    table: &WeightTable,
    positivity: &SignAssignment,
    order: usize,
    trials: usize,
    seed: u64,
) -> Result<UniquenessReport, VerifierError> {
    if order > BRUTE_ORDER_CAP {
        return Err(VerifierError::BruteOrderTooLarge {
            order,
            cap: BRUTE_ORDER_CAP,
        });
    }
    let d = symbolic_d();
    let m_neg = macmahon(order, -1).lift::<Poly>();
    let mut sampler = LambdaSampler::new(seed);
    // per point: per order, the target and the per-partition contributions
    let mut points: Vec<(Vec<Poly>, Vec<Vec<Poly>>)> = Vec::new();
    for _ in 0..trials {
        let pt = sampled(&mut sampler, |lambda| {
            let l4 = with_lambda4(lambda);
            let factor = exponent_factor(&l4).map_err(pole)?;
            let pairing = (0..4).fold(Poly::zero(), |acc, m| &acc + &d[m].scale(&l4[m]));
            let rhs = m_neg.pow_scalar(&pairing.scale(&factor))?;
            let mut contrib = Vec::new();
            for n in 0..=order {
                let mut row = Vec::new();
                for e in table.of_size(n) {
                    let w = e.weight.evaluate(lambda, &[]).map_err(pole)?;
                    let l = tautological_factor(&e.partition, &d)?
                        .evaluate_lambda(lambda)
                        .map_err(pole)?;
                    row.push(l.scale(&w));
                }
                contrib.push(row);
            }
            Ok((rhs.coeffs().to_vec(), contrib))
        })?;
        points.push(pt);
    }
    let mut signs = SignAssignment::new();
    signs.insert(DPartition::empty(3).canonical_key(), 1, Provenance::BruteForced);
    let mut per_order = Vec::new();
    let mut unique = true;
    for n in 1..=order {
        let entries = table.of_size(n);
        let k = entries.len();
        let mut passing = Vec::new();
        for mask in 0u64..(1u64 << k) {
            let ok = points.iter().all(|(target, contrib)| {
                let mut acc = Poly::zero();
                for (i, c) in contrib[n].iter().enumerate() {
                    acc = if mask >> i & 1 == 1 { &acc - c } else { &acc + c };
                }
                acc == target[n]
            });
            if ok {
                passing.push(mask);
            }
        }
        per_order.push(OrderOutcome {
            order: n,
            partitions: k,
            candidates: 1u64 << k,
            passing: passing.len() as u64,
        });
        if passing.len() == 1 {
            for (i, e) in entries.iter().enumerate() {
                let s = if passing[0] >> i & 1 == 1 { -1 } else { 1 };
                signs.insert(e.key.clone(), s, Provenance::BruteForced);
            }
        } else {
            unique = false;
        }
    }
    let matches_positivity = unique && agrees(&signs, positivity);
    Ok(UniquenessReport {
        mode: UniquenessMode::Brute,
        order,
        per_order,
        fixes: Vec::new(),
        unique,
        matches_positivity,
        signs,
    })
}

fn agrees(signs: &SignAssignment, reference: &SignAssignment) -> bool {
    signs.iter().all(|(k, s, _)| reference.get(k) == Some(s))
}

fn incremental_uniqueness(
    table: &WeightTable,
    positivity: &SignAssignment,
    order: usize,
) -> Result<UniquenessReport, VerifierError> {
    let target = macmahon(order, -1)
        .lift::<Poly>()
        .pow_scalar(&Poly::var(0))?;
    let mut signs = SignAssignment::new();
    signs.insert(
        DPartition::empty(3).canonical_key(),
        1,
        Provenance::SpecializationDerived,
    );
    let mut fixes = Vec::new();
    let mut unique = true;
    for n in 1..=order {
        let entries = table.of_size(n);
        let mut limits = Vec::with_capacity(entries.len());
        for e in entries {
            let r = omega_from_weight(&e.partition, &e.weight)?;
            limits.push(r.limit.expanded().expect("falling shape is polynomial"));
        }
        let mut known: Vec<Option<i8>> = alloc::vec![None; entries.len()];
        let t_n = target.coeff(n);
        for degree in (1..=n as u32).rev() {
            let unknown: Vec<usize> = (0..entries.len())
                .filter(|&i| entries[i].partition.height() == degree)
                .collect();
            let mut rhs = t_n.coeff_of_power(degree);
            for (i, s) in known.iter().enumerate() {
                if let Some(s) = s {
                    rhs -= limits[i].coeff_of_power(degree) * rat(i64::from(*s));
                }
            }
            let items: Vec<BigRational> = unknown
                .iter()
                .map(|&i| limits[i].coeff_of_power(degree))
                .collect();
            let (solutions, choice) = signed_subset_sum(&items, &rhs);
            let fixed = if solutions == 1 { unknown.len() } else { 0 };
            fixes.push(DegreeFix {
                order: n,
                degree,
                unknowns: unknown.len(),
                solutions,
                fixed,
            });
            match choice {
                Some(eps) if solutions == 1 => {
                    for (&i, s) in unknown.iter().zip(eps) {
                        known[i] = Some(s);
                        signs.insert(entries[i].key.clone(), s, Provenance::SpecializationDerived);
                    }
                }
                _ => {
                    unique = false;
                    break;
                }
            }
        }
    }
    let matches_positivity = unique && agrees(&signs, positivity);
    Ok(UniquenessReport {
        mode: UniquenessMode::Incremental,
        order,
        per_order: Vec::new(),
        fixes,
        unique,
        matches_positivity,
        signs,
    })
}

/// Number of `ε ∈ {±1}^k` with `sum ε_i a_i = target`, and one such `ε`.
pub fn signed_subset_sum(items: &[BigRational], target: &BigRational) -> (u128, Option<Vec<i8>>) {
    // layers[j]: reachable sums of the first j items with their counts
    let mut layers: Vec<BTreeMap<BigRational, u128>> = Vec::with_capacity(items.len() + 1);
    let mut start = BTreeMap::new();
    start.insert(BigRational::zero(), 1u128);
    layers.push(start);
    for a in items {
        let prev = layers.last().expect("nonempty");
        let mut next: BTreeMap<BigRational, u128> = BTreeMap::new();
        for (s, c) in prev {
            *next.entry(s + a).or_insert(0) += c;
            *next.entry(s - a).or_insert(0) += c;
        }
        layers.push(next);
    }
    let count = layers
        .last()
        .and_then(|l| l.get(target))
        .copied()
        .unwrap_or(0);
    if count == 0 {
        return (0, None);
    }
    let mut eps = alloc::vec![0i8; items.len()];
    let mut rest = target.clone();
    for j in (0..items.len()).rev() {
        let plus = &rest - &items[j];
        if layers[j].contains_key(&plus) {
            eps[j] = 1;
            rest = plus;
        } else {
            eps[j] = -1;
            rest = &rest + &items[j];
        }
    }
    (count, Some(eps))
}

// ---------------------------------------------------------------------------
// toric assembly

/// Fixed-point data: the characters of the four chart coordinates in the
/// global basis (rows) and the line-bundle character in the global basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricChart {
    pub tangent: [[i64; 4]; 4],
    pub bundle: [i64; 4],
}

impl ToricChart {
    pub fn standard(bundle: [i64; 4]) -> Self {
        let mut tangent = [[0; 4]; 4];
        for (i, row) in tangent.iter_mut().enumerate() {
            row[i] = 1;
        }
        ToricChart { tangent, bundle }
    }

    /// The standard chart with coordinates permuted: row `i` is `e_{perm[i]}`.
    pub fn permuted(perm: [usize; 4], bundle: [i64; 4]) -> Self {
        let mut tangent = [[0; 4]; 4];
        for (i, &p) in perm.iter().enumerate() {
            tangent[i][p] = 1;
        }
        ToricChart { tangent, bundle }
    }

    pub fn validate(&self) -> Result<(), String> {
        let det = det4(&self.tangent);
        if det.abs() != 1 {
            return Err(format!("tangent determinant is {}, expected ±1", det));
        }
        let mut sum = [0i64; 4];
        for row in &self.tangent {
            for (s, x) in sum.iter_mut().zip(row) {
                *s += x;
            }
        }
        if sum != [1, 1, 1, 1] {
            return Err(format!(
                "tangent characters sum to {:?}, expected [1, 1, 1, 1]",
                sum
            ));
        }
        Ok(())
    }

    /// Local parameters `λ_i = χ_i · λ`.
    pub fn local_lambda(&self, global: &[BigRational; 4]) -> [BigRational; 4] {
        core::array::from_fn(|i| {
            (0..4).fold(BigRational::zero(), |acc, j| {
                acc + &global[j] * rat(self.tangent[i][j])
            })
        })
    }

    /// Bundle character in the chart basis: solves `Mᵀ x = bundle`.
    pub fn local_bundle(&self) -> [BigRational; 4] {
        let mut a: Vec<Vec<BigRational>> = (0..4)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..4).map(|c| rat(self.tangent[c][r])).collect();
                row.push(rat(self.bundle[r]));
                row
            })
            .collect();
        for col in 0..4 {
            let piv = (col..4)
                .find(|&r| !a[r][col].is_zero())
                .expect("validated chart is invertible");
            a.swap(col, piv);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..5 {
                        let v = &a[col][c] * &f;
                        a[r][c] -= v;
                    }
                }
            }
        }
        core::array::from_fn(|i| a[i][4].clone())
    }
}

fn det4(m: &[[i64; 4]; 4]) -> i128 {
    fn det3(m: [[i128; 3]; 3]) -> i128 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let mut acc = 0i128;
    for c in 0..4 {
        let minor: [[i128; 3]; 3] = core::array::from_fn(|r| {
            let row = &m[r + 1];
            let cols: Vec<usize> = (0..4).filter(|&x| x != c).collect();
            core::array::from_fn(|k| i128::from(row[cols[k]]))
        });
        let sign = if c % 2 == 0 { 1 } else { -1 };
        acc += sign * i128::from(m[0][c]) * det3(minor);
    }
    acc
}

// bundle characters are defined up to multiples of (1,1,1,1) on the CY torus
fn is_divisor_bundle(d: &[BigRational; 4]) -> bool {
    let shift = &d[0];
    d[1] == *shift && d[2] == *shift && d[3] == shift - rat(1)
}

/// `prod_charts sum_π ε_π L_π(d_loc) w_π(λ_loc) q^|π| = M(-q)^{sum E}` at
/// random global λ, plus the vanishing of tall partitions for divisor bundles.
pub fn verify_toric(
    table: &WeightTable,
    signs: &SignAssignment,
    charts: &[ToricChart],
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifierError> {
    opts.check_order()?;
    let n_max = opts.order;
    let eps = require_signs(table, signs, n_max)?;
    for (index, c) in charts.iter().enumerate() {
        c.validate()
            .map_err(|reason| VerifierError::BadChart { index, reason })?;
    }
    let mut witnesses = Vec::new();
    let mut notes = Vec::new();
    let mut taut: Vec<Vec<Vec<LinearFormFactored<BigRational>>>> = Vec::new();
    let mut local_d = Vec::new();
    for (index, c) in charts.iter().enumerate() {
        let d = c.local_bundle();
        let mut rows = Vec::new();
        for n in 0..=n_max {
            let mut row = Vec::new();
            for e in table.of_size(n) {
                let l = tautological_factor(&e.partition, &d)?;
                if is_divisor_bundle(&d) && e.partition.height() >= 2 && !l.is_zero() {
                    witnesses.push(Witness {
                        q_power: Some(n),
                        key: Some(e.key.clone()),
                        detail: format!("chart {}: tautological factor does not vanish", index),
                        ..Witness::default()
                    });
                }
                row.push(l);
            }
            rows.push(row);
        }
        if is_divisor_bundle(&d) {
            notes.push(format!("chart {}: vanishing of height >= 2 checked", index));
        }
        taut.push(rows);
        local_d.push(d);
    }
    let m_neg = macmahon(n_max, -1);
    let mut sampler = LambdaSampler::new(opts.seed);
    for _ in 0..opts.trials {
        let found = sampled(&mut sampler, |lambda| {
            let global = with_lambda4(lambda);
            let mut lhs = TruncatedSeries::<BigRational>::one(n_max);
            let mut exponent = BigRational::zero();
            for (ci, c) in charts.iter().enumerate() {
                let loc = c.local_lambda(&global);
                let loc3 = [loc[0].clone(), loc[1].clone(), loc[2].clone()];
                let mut z = TruncatedSeries::zero(n_max);
                for n in 0..=n_max {
                    let mut acc = BigRational::zero();
                    for (i, e) in table.of_size(n).iter().enumerate() {
                        let l = &taut[ci][n][i];
                        if l.is_zero() {
                            continue;
                        }
                        let w = e.weight.evaluate(&loc3, &[]).map_err(pole)?;
                        let lv = l.evaluate(&loc3, &[]).map_err(pole)?;
                        acc += w * lv * rat(i64::from(eps[n][i]));
                    }
                    z.set_coeff(n, acc);
                }
                lhs = lhs.mul(&z);
                let factor = exponent_factor(&loc).map_err(pole)?;
                let pairing = (0..4).fold(BigRational::zero(), |acc, m| {
                    acc + &local_d[ci][m] * &loc[m]
                });
                exponent += pairing * factor;
            }
            let rhs = m_neg.pow_scalar(&exponent)?;
            Ok((0..=n_max)
                .filter(|&n| lhs.coeff(n) != rhs.coeff(n))
                .map(|n| Witness {
                    q_power: Some(n),
                    point: global.to_vec(),
                    detail: format!("lhs {} vs rhs {}", lhs.coeff(n), rhs.coeff(n)),
                    ..Witness::default()
                })
                .collect::<Vec<_>>())
        })?;
        witnesses.extend(found);
    }
    let mut report =
        VerificationReport::new(Target::Toric, n_max, opts.trials, opts.seed, witnesses);
    report.notes = notes;
    Ok(report)
}

/// Product over charts of the per-chart series at one global λ, and the
/// summed exponent; exposed for assembling and comparing chart sets.
pub fn toric_series_at(
    table: &WeightTable,
    signs: &SignAssignment,
    charts: &[ToricChart],
    order: usize,
    lambda: &[BigRational; 3],
) -> Result<(TruncatedSeries<BigRational>, BigRational), VerifierError> {
    let eps = require_signs(table, signs, order)?;
    let global = with_lambda4(lambda);
    let mut lhs = TruncatedSeries::one(order);
    let mut exponent = BigRational::zero();
    for (index, c) in charts.iter().enumerate() {
        c.validate()
            .map_err(|reason| VerifierError::BadChart { index, reason })?;
        let d = c.local_bundle();
        let loc = c.local_lambda(&global);
        let loc3 = [loc[0].clone(), loc[1].clone(), loc[2].clone()];
        let mut z = TruncatedSeries::zero(order);
        for n in 0..=order {
            let mut acc = BigRational::zero();
            for (i, e) in table.of_size(n).iter().enumerate() {
                let l = tautological_factor(&e.partition, &d)?;
                if l.is_zero() {
                    continue;
                }
                let w = e.weight.evaluate(&loc3, &[]).map_err(pole)?;
                acc += w * l.evaluate(&loc3, &[]).map_err(pole)? * rat(i64::from(eps[n][i]));
            }
            z.set_coeff(n, acc);
        }
        lhs = lhs.mul(&z);
        let factor = exponent_factor(&loc).map_err(pole)?;
        let pairing = (0..4).fold(BigRational::zero(), |acc, m| acc + &d[m] * &loc[m]);
        exponent += pairing * factor;
    }
    Ok((lhs, exponent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn table(n: usize) -> WeightTable {
        WeightTable::build(n).unwrap()
    }

    #[test]
    fn omega_of_single_box() {
        let pi = DPartition::from_monomials(&[[0, 0, 0, 0]]).unwrap();
        let r = omega_from_dt4(&pi).unwrap();
        assert_eq!(r.omega, rat(1));
        assert_eq!(r.sign, 1);
        assert_eq!(r.limit.expanded().unwrap(), -Poly::var(0));
        let empty = omega_from_dt4(&DPartition::empty(3)).unwrap();
        assert_eq!((empty.omega, empty.sign), (rat(1), 1));
    }

    #[test]
    fn sign_assignment_sizes() {
        assert_eq!(build_sign_assignment(0).unwrap().len(), 1);
        let s1 = build_sign_assignment(1).unwrap();
        assert_eq!(s1.len(), 2);
        let key = DPartition::from_monomials(&[[0, 0, 0, 0]]).unwrap().canonical_key();
        assert_eq!(s1.get(&key), Some(1));
        assert_eq!(s1.provenance(&key), Some(Provenance::SpecializationDerived));
        assert_eq!(build_sign_assignment(4).unwrap().len(), 1 + 1 + 4 + 10 + 26);
    }

    #[test]
    fn affine_low_order_and_flip() {
        let t = table(3);
        let signs = SignAssignment::from_positivity(&t).unwrap();
        let r = verify_affine(&t, &signs, &VerifyOptions::new(3, 2, 7)).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
        let key = t.of_size(1)[0].key.clone();
        let bad = signs.flipped(&key);
        let r = verify_affine(&t, &bad, &VerifyOptions::new(2, 1, 7)).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witnesses[0].q_power, Some(1));
    }

    #[test]
    fn nekrasov_low_order() {
        let t = table(4);
        let signs = SignAssignment::from_positivity(&t).unwrap();
        let r = verify_nekrasov(&t, &signs, &VerifyOptions::new(4, 2, 3)).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
        let key = t.of_size(4)[2].key.clone();
        let r = verify_nekrasov(&t, &signs.flipped(&key), &VerifyOptions::new(4, 1, 3)).unwrap();
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.witnesses[0].q_power, Some(4));
    }

    #[test]
    fn order_cap_and_missing_signs() {
        let t = table(2);
        let signs = SignAssignment::from_positivity(&t).unwrap();
        assert_eq!(
            verify_affine(&t, &signs, &VerifyOptions::new(7, 1, 0)),
            Err(VerifierError::OrderTooLarge { order: 7, cap: 6 })
        );
        assert!(matches!(
            verify_affine(&t, &SignAssignment::new(), &VerifyOptions::new(2, 1, 0)),
            Err(VerifierError::MissingSign(_))
        ));
        assert!(matches!(
            verify_affine(&t, &signs, &VerifyOptions::new(3, 1, 0)),
            Err(VerifierError::TableTooSmall { .. })
        ));
    }

    #[test]
    fn counting_low_orders() {
        let r = verify_counting(3, 5, None).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
        let t = table(4);
        assert!(verify_counting(3, 5, Some(&t)).unwrap().passed());
        assert!(verify_counting(2, 6, None).unwrap().passed());
        assert!(verify_counting(1, 6, None).unwrap().passed());
    }

    #[test]
    fn uniqueness_low_orders() {
        let t = table(2);
        let b = sign_uniqueness(&t, UniquenessMode::Brute, 1, 2, 5).unwrap();
        assert_eq!(b.per_order[0].candidates, 2);
        assert_eq!(b.per_order[0].passing, 1);
        assert!(b.passed());
        let b = sign_uniqueness(&t, UniquenessMode::Brute, 2, 2, 5).unwrap();
        assert!(b.passed());
        let i = sign_uniqueness(&t, UniquenessMode::Incremental, 2, 0, 0).unwrap();
        assert!(i.passed());
        assert_eq!(i.fixed_at(2, 2), Some(1));
        assert_eq!(i.fixed_at(2, 1), Some(3));
        assert!(matches!(
            sign_uniqueness(&table(4), UniquenessMode::Brute, 4, 1, 0),
            Err(VerifierError::BruteOrderTooLarge { .. })
        ));
    }

    #[test]
    fn subset_sum_counts() {
        let items = [rat(1), rat(1), rat(2)];
        assert_eq!(signed_subset_sum(&items, &rat(4)).0, 1);
        assert_eq!(signed_subset_sum(&items, &rat(0)).0, 2);
        assert_eq!(signed_subset_sum(&items, &rat(3)).0, 0);
        let (c, eps) = signed_subset_sum(&[rat(1), ratio(1, 2)], &ratio(-1, 2));
        assert_eq!(c, 1);
        assert_eq!(eps.unwrap(), alloc::vec![-1, 1]);
    }

    #[test]
    fn chart_validation_and_bundle_conversion() {
        assert!(ToricChart::standard([0, 0, 0, 0]).validate().is_ok());
        let mut bad = ToricChart::standard([0, 0, 0, 0]);
        bad.tangent[0] = [2, 0, 0, 0];
        assert!(bad.validate().is_err());
        let c = ToricChart::permuted([1, 0, 2, 3], [0, 0, 0, -1]);
        assert!(c.validate().is_ok());
        assert_eq!(c.local_bundle(), [rat(0), rat(0), rat(0), rat(-1)]);
        let c = ToricChart::permuted([3, 1, 2, 0], [0, 0, 0, -1]);
        assert_eq!(c.local_bundle(), [rat(-1), rat(0), rat(0), rat(0)]);
        let sheared = ToricChart {
            tangent: [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, -1, 0, 1]],
            bundle: [0, 0, 0, 0],
        };
        assert!(sheared.validate().is_ok());
    }

    #[test]
    fn toric_standard_chart() {
        let t = table(3);
        let signs = SignAssignment::from_positivity(&t).unwrap();
        let opts = VerifyOptions::new(3, 2, 11);
        let trivial = [ToricChart::standard([0, 0, 0, 0])];
        assert!(verify_toric(&t, &signs, &trivial, &opts).unwrap().passed());
        let (z, e) = toric_series_at(&t, &signs, &trivial, 3, &[rat(2), rat(3), rat(7)]).unwrap();
        assert_eq!(z, TruncatedSeries::one(3));
        assert_eq!(e, rat(0));
        let divisor = [ToricChart::standard([0, 0, 0, -1])];
        let r = verify_toric(&t, &signs, &divisor, &opts).unwrap();
        assert!(r.passed(), "{:?}", r.witnesses);
        assert_eq!(r.notes.len(), 1);
    }
}
