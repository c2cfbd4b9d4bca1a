//! Factored rational functions in the equivariant parameters.
//!
//! Every Euler class that shows up at a torus-fixed point is a product of
//! weights, i.e. of linear forms in `λ1, λ2, λ3` (with `λ4 = -(λ1+λ2+λ3)`
//! already eliminated). Values are therefore kept as
//! `scalar * prod form^exp` and never expanded; cancellation is syntactic
//! because every form is stored in a primitive normal form.
//!
//! Form coefficients live in a ring `R`: the rationals for vertex weights,
//! or polynomials in the bundle parameters `d1..d4` (or a single `d`) for
//! tautological factors.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::kchar::{cy_vertex, Exponent, LaurentChar};
use crate::partitions::{DPartition, PartitionError};
use crate::poly::{rational_gcd, Coeff, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error("character has a torus-fixed (zero-weight) part")]
    ZeroWeight,
    #[error("vertex is not self-dual; weights do not pair up")]
    Unpairable,
    #[error("a denominator factor vanishes at the evaluation point")]
    PoleHit,
    #[error("division by the zero form")]
    DivisionByZero,
    #[error("a d-dependent factor sits in the denominator")]
    NonPolynomial,
    #[error("evaluation point is missing a parameter")]
    MissingParameter,
    #[error("net order in s = λ1+λ2+λ3 is {net}: pole at the specialization")]
    PoleAtSpecialization { net: i64 },
    #[error("net order in s = λ1+λ2+λ3 is {net}: value vanishes at the specialization")]
    ZeroAtSpecialization { net: i64 },
    #[error("specialized value still depends on λ: {residual}")]
    NotConstant { residual: String },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Coefficient rings usable inside a [`LinearForm`].
pub trait FormCoeff: Coeff + Ord {
    /// Non-negative rational content; zero only for the zero element.
    fn rational_content(&self) -> BigRational;
    /// Sign of the leading coefficient; 0 for zero.
    fn leading_sign(&self) -> i8;
    fn eval_params(&self, params: &[BigRational]) -> Option<BigRational>;
    fn to_poly(&self) -> Poly;
    fn render(&self) -> String;
}

impl FormCoeff for BigRational {
    fn rational_content(&self) -> BigRational {
        self.abs()
    }
    fn leading_sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn eval_params(&self, _params: &[BigRational]) -> Option<BigRational> {
        Some(self.clone())
    }
    fn to_poly(&self) -> Poly {
        Poly::constant(self.clone())
    }
    fn render(&self) -> String {
        alloc::format!("{}", self)
    }
}

impl FormCoeff for Poly {
    fn rational_content(&self) -> BigRational {
        Poly::rational_content(self)
    }
    fn leading_sign(&self) -> i8 {
        Poly::leading_sign(self)
    }
    fn eval_params(&self, params: &[BigRational]) -> Option<BigRational> {
        self.eval(params)
    }
    fn to_poly(&self) -> Poly {
        self.clone()
    }
    fn render(&self) -> String {
        self.display_with(&["d1", "d2", "d3", "d4"])
    }
}

/// `c1 λ1 + c2 λ2 + c3 λ3` in primitive normal form: rational content 1
/// and the first nonzero coefficient has positive leading sign.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm<R> {
    coeffs: [R; 3],
}

impl<R: FormCoeff> LinearForm<R> {
    /// Split `coeffs` into `unit * primitive`. `None` for the zero form.
    pub fn normalize(coeffs: [R; 3]) -> Option<(BigRational, LinearForm<R>)> {
        let content = coeffs
            .iter()
            .fold(BigRational::zero(), |acc, c| rational_gcd(&acc, &c.rational_content()));
        if content.is_zero() {
            return None;
        }
        let lead = coeffs.iter().find(|c| !c.vanishes())?;
        let unit = if lead.leading_sign() < 0 {
            -content
        } else {
            content
        };
        let inv = unit.recip();
        let [a, b, c] = coeffs;
        Some((
            unit,
            LinearForm {
                coeffs: [a.scaled(&inv), b.scaled(&inv), c.scaled(&inv)],
            },
        ))
    }

    pub fn coeffs(&self) -> &[R; 3] {
        &self.coeffs
    }

    pub fn eval(&self, lambda: &[BigRational; 3], params: &[BigRational]) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (c, l) in self.coeffs.iter().zip(lambda.iter()) {
            acc += c.eval_params(params)? * l;
        }
        Some(acc)
    }

    /// Substitute numeric λ, keeping the ring parameters symbolic.
    pub fn eval_lambda(&self, lambda: &[BigRational; 3]) -> Poly {
        let mut acc = Poly::zero();
        for (c, l) in self.coeffs.iter().zip(lambda.iter()) {
            acc = &acc + &c.to_poly().scale(l);
        }
        acc
    }
}

impl<R: FormCoeff> fmt::Display for LinearForm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            let s = c.render();
            if !first {
                f.write_str("+")?;
            }
            first = false;
            if s == "1" {
            } else if s == "-1" {
                f.write_str("-")?;
            } else if s.contains(' ') {
                write!(f, "({})", s)?;
            } else {
                f.write_str(&s)?;
            }
            write!(f, "λ{}", i + 1)?;
        }
        Ok(())
    }
}

impl<R: FormCoeff> fmt::Debug for LinearForm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `scalar * prod form^exp`. The canonical zero has scalar 0 and no factors.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearFormFactored<R> {
    scalar: BigRational,
    factors: BTreeMap<LinearForm<R>, i64>,
}

impl<R: FormCoeff> LinearFormFactored<R> {
    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn constant(scalar: BigRational) -> Self {
        LinearFormFactored {
            scalar,
            factors: BTreeMap::new(),
        }
    }

    /// Reassemble from stored parts; forms must already be normalized.
    pub fn from_parts<I>(scalar: BigRational, factors: I) -> Result<Self, LocalizationError>
    where
        I: IntoIterator<Item = ([R; 3], i64)>,
    {
        let mut out = Self::constant(scalar);
        for (coeffs, e) in factors {
            out.mul_form(coeffs, e)?;
        }
        Ok(out)
    }

    pub fn form(coeffs: [R; 3], exp: i64) -> Result<Self, LocalizationError> {
        let mut out = Self::one();
        out.mul_form(coeffs, exp)?;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn factors(&self) -> impl Iterator<Item = (&LinearForm<R>, i64)> {
        self.factors.iter().map(|(f, &e)| (f, e))
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Sum of exponents: the degree as a homogeneous function of λ.
    pub fn degree(&self) -> i64 {
        self.factors.values().sum()
    }

    /// Multiply in `form(coeffs)^exp`.
    pub fn mul_form(&mut self, coeffs: [R; 3], exp: i64) -> Result<(), LocalizationError> {
        if exp == 0 {
            return Ok(());
        }
        match LinearForm::normalize(coeffs) {
            None if exp < 0 => Err(LocalizationError::DivisionByZero),
            None => {
                *self = Self::zero();
                Ok(())
            }
            Some(_) if self.is_zero() => Ok(()),
            Some((unit, form)) => {
                self.scalar *= pow_rational(&unit, exp);
                self.insert(form, exp);
                Ok(())
            }
        }
    }

    fn insert(&mut self, form: LinearForm<R>, exp: i64) {
        let e = self.factors.entry(form).or_insert(0);
        *e += exp;
        if *e == 0 {
            self.factors.retain(|_, v| *v != 0);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        out.scalar *= &other.scalar;
        for (f, &e) in &other.factors {
            out.insert(f.clone(), e);
        }
        out
    }

    pub fn recip(&self) -> Result<Self, LocalizationError> {
        if self.is_zero() {
            return Err(LocalizationError::DivisionByZero);
        }
        Ok(LinearFormFactored {
            scalar: self.scalar.recip(),
            factors: self.factors.iter().map(|(f, &e)| (f.clone(), -e)).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        LinearFormFactored {
            scalar: -&self.scalar,
            factors: self.factors.clone(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        out.scalar *= q;
        out
    }

    pub fn pow(&self, e: i64) -> Result<Self, LocalizationError> {
        if e == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() {
            return if e > 0 {
                Ok(Self::zero())
            } else {
                Err(LocalizationError::DivisionByZero)
            };
        }
        Ok(LinearFormFactored {
            scalar: pow_rational(&self.scalar, e),
            factors: self.factors.iter().map(|(f, &x)| (f.clone(), x * e)).collect(),
        })
    }

    /// Exact value at numeric λ and ring parameters.
    pub fn evaluate(
        &self,
        lambda: &[BigRational; 3],
        params: &[BigRational],
    ) -> Result<BigRational, LocalizationError> {
        let mut acc = self.scalar.clone();
        for (f, &e) in &self.factors {
            let v = f.eval(lambda, params).ok_or(LocalizationError::MissingParameter)?;
            if v.is_zero() {
                if e < 0 {
                    return Err(LocalizationError::PoleHit);
                }
                acc = BigRational::zero();
                continue;
            }
            acc *= pow_rational(&v, e);
        }
        Ok(acc)
    }

    /// Substitute numeric λ and keep the ring parameters symbolic. Every
    /// parameter-dependent factor must have a positive exponent.
    pub fn evaluate_lambda(&self, lambda: &[BigRational; 3]) -> Result<Poly, LocalizationError> {
        let mut acc = Poly::constant(self.scalar.clone());
        for (f, &e) in &self.factors {
            let v = f.eval_lambda(lambda);
            if e > 0 {
                acc = &acc * &v.pow(e as u32);
            } else {
                let c = v.as_constant().ok_or(LocalizationError::NonPolynomial)?;
                if c.is_zero() {
                    return Err(LocalizationError::PoleHit);
                }
                acc = acc.scale(&pow_rational(&c, e));
            }
        }
        Ok(acc)
    }

    /// Re-express with polynomial coefficients.
    pub fn to_poly_coeffs(&self) -> LinearFormFactored<Poly> {
        LinearFormFactored {
            scalar: self.scalar.clone(),
            factors: self
                .factors
                .iter()
                .map(|(f, &e)| {
                    let [a, b, c] = &f.coeffs;
                    (
                        LinearForm {
                            coeffs: [a.to_poly(), b.to_poly(), c.to_poly()],
                        },
                        e,
                    )
                })
                .collect(),
        }
    }
}

impl<R: FormCoeff> fmt::Display for LinearFormFactored<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        let num: Vec<_> = self.factors.iter().filter(|(_, &e)| e > 0).collect();
        let den: Vec<_> = self.factors.iter().filter(|(_, &e)| e < 0).collect();
        for (form, &e) in num {
            write!(f, " * ({})", form)?;
            if e != 1 {
                write!(f, "^{}", e)?;
            }
        }
        if !den.is_empty() {
            f.write_str(" / (")?;
            for (i, (form, &e)) in den.into_iter().enumerate() {
                if i > 0 {
                    f.write_str(" * ")?;
                }
                write!(f, "({})", form)?;
                if e != -1 {
                    write!(f, "^{}", -e)?;
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl<R: FormCoeff> fmt::Debug for LinearFormFactored<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn pow_rational(q: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { q.recip() } else { q.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

fn weight_form(e: &Exponent) -> [BigRational; 3] {
    [
        BigRational::from_integer(BigInt::from(e[0])),
        BigRational::from_integer(BigInt::from(e[1])),
        BigRational::from_integer(BigInt::from(e[2])),
    ]
}

/// Equivariant Euler class of a rank-3 character: `prod (a λ1 + b λ2 + c λ3)^mult`.
pub fn euler_class(chi: &LaurentChar) -> Result<LinearFormFactored<BigRational>, LocalizationError> {
    let mut out = LinearFormFactored::one();
    for (e, m) in chi.terms() {
        if e[..3] == [0, 0, 0] {
            return Err(LocalizationError::ZeroWeight);
        }
        let exp = i64::try_from(m).map_err(|_| LocalizationError::Unpairable)?;
        out.mul_form(weight_form(e), exp)?;
    }
    Ok(out)
}

/// Which member of each `{w, -w}` weight pair enters the square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRule {
    /// First nonzero exponent positive (the canonical choice).
    LexPositive,
    /// First nonzero exponent negative.
    LexNegative,
}

fn lex_positive(e: &Exponent) -> bool {
    e[..3].iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Canonical square root of `(-1)^|π| e_T(-V_π)`.
pub fn vertex_weight(pi: &DPartition) -> Result<LinearFormFactored<BigRational>, LocalizationError> {
    vertex_weight_with_rule(pi, PairRule::LexPositive)
}

pub fn vertex_weight_with_rule(
    pi: &DPartition,
    rule: PairRule,
) -> Result<LinearFormFactored<BigRational>, LocalizationError> {
    let v = cy_vertex(pi)?;
    weight_from_vertex(&v, pi.size(), rule)
}

/// Square root of `(-1)^n e_T(-V)` for a self-dual rank-3 character `V`.
pub fn weight_from_vertex(
    v: &LaurentChar,
    n: u32,
    rule: PairRule,
) -> Result<LinearFormFactored<BigRational>, LocalizationError> {
    if !v.mult(&[0, 0, 0, 0]).is_zero() {
        return Err(LocalizationError::ZeroWeight);
    }
    if !v.is_bar_symmetric() {
        return Err(LocalizationError::Unpairable);
    }
    let mut out = LinearFormFactored::one();
    let mut half_rank = BigInt::zero();
    for (e, m) in v.terms() {
        let keep = match rule {
            PairRule::LexPositive => lex_positive(e),
            PairRule::LexNegative => !lex_positive(e),
        };
        if !keep {
            continue;
        }
        half_rank += m;
        let exp = i64::try_from(m).map_err(|_| LocalizationError::Unpairable)?;
        out.mul_form(weight_form(e), -exp)?;
    }
    // (-1)^n e(-V) = (-1)^(n + half_rank) * (prod w^-m)^2 must be a square
    if (half_rank + BigInt::from(n)) % 2u32 != BigInt::zero() {
        return Err(LocalizationError::Unpairable);
    }
    Ok(out)
}

/// Bundle parameters `(d1, d2, d3, d4)` as the polynomial variables `x0..x3`.
pub fn symbolic_d() -> [Poly; 4] {
    [Poly::var(0), Poly::var(1), Poly::var(2), Poly::var(3)]
}

/// `(0, 0, 0, -d)` with `d` the variable `x0`.
pub fn specialization_d() -> [Poly; 4] {
    [Poly::zero(), Poly::zero(), Poly::zero(), -Poly::var(0)]
}

/// `L_π(d) = prod over cells (i,j,k,l) of sum_m ((d_m + c_m - 1) - (d4 + l - 1)) λ_m`.
pub fn tautological_factor<R: FormCoeff>(
    pi: &DPartition,
    d: &[R; 4],
) -> Result<LinearFormFactored<R>, LocalizationError> {
    if pi.dim() != 3 {
        return Err(PartitionError::WrongDimension {
            expected: 3,
            found: pi.dim(),
        }
        .into());
    }
    let mut out = LinearFormFactored::one();
    for c in pi.cells() {
        let l = i64::from(c[3]);
        let coeff = |m: usize| {
            let shift = R::from_int(i64::from(c[m]) - l);
            d[m].minus(&d[3]).plus(&shift)
        };
        out.mul_form([coeff(0), coeff(1), coeff(2)], 1)?;
        if out.is_zero() {
            break;
        }
    }
    Ok(out)
}

/// `scalar * prod p^e` for primitive polynomials `p` in the bundle parameter.
#[derive(Clone, PartialEq, Eq)]
pub struct SpecializedValue {
    pub scalar: BigRational,
    pub factors: BTreeMap<Poly, i64>,
}

impl SpecializedValue {
    fn normalize_poly(p: &Poly) -> (BigRational, Poly) {
        let content = p.rational_content();
        let unit = if p.leading_sign() < 0 { -content } else { content };
        let inv = unit.recip();
        (unit, p.scale(&inv))
    }

    /// The falling factorial `prod_{l=1}^{h} (d - (l-1))` in normalized form.
    pub fn falling_factorial(h: u32) -> BTreeMap<Poly, i64> {
        let mut m = BTreeMap::new();
        for l in 1..=h {
            let p = &Poly::var(0) - &Poly::int(i64::from(l) - 1);
            let (_, p) = Self::normalize_poly(&p);
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    pub fn has_falling_shape(&self, h: u32) -> bool {
        self.factors == Self::falling_factorial(h)
    }

    /// Expanded polynomial; `None` if some factor has a negative exponent.
    pub fn expanded(&self) -> Option<Poly> {
        let mut acc = Poly::constant(self.scalar.clone());
        for (p, &e) in &self.factors {
            if e < 0 {
                return None;
            }
            acc = &acc * &p.pow(e as u32);
        }
        Some(acc)
    }
}

impl fmt::Display for SpecializedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        for (p, &e) in &self.factors {
            write!(f, " * ({})", p.display_with(&["d"]))?;
            if e != 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SpecializedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Limit `λ1 + λ2 + λ3 = s -> 0` of a factored value.
///
/// Each form `c1 λ1 + c2 λ2 + c3 λ3` is rewritten as
/// `(c1 - c3) λ1 + (c2 - c3) λ2 + c3 s`. Forms with `c1 = c2 = c3` are
/// degenerate (`c3 s`); the net power of `s` must vanish, and the
/// non-degenerate forms restricted to `s = 0` must cancel completely.
pub fn specialize_limit(f: &LinearFormFactored<Poly>) -> Result<SpecializedValue, LocalizationError> {
    let mut scalar = f.scalar().clone();
    if scalar.is_zero() {
        return Ok(SpecializedValue {
            scalar,
            factors: BTreeMap::new(),
        });
    }
    let mut s_order = 0i64;
    let mut d_factors: BTreeMap<Poly, i64> = BTreeMap::new();
    let mut residual: BTreeMap<LinearForm<Poly>, i64> = BTreeMap::new();
    for (form, e) in f.factors() {
        let [c1, c2, c3] = form.coeffs();
        let a = c1 - c3;
        let b = c2 - c3;
        if a.is_zero() && b.is_zero() {
            s_order += e;
            let (unit, p) = SpecializedValue::normalize_poly(c3);
            scalar *= pow_rational(&unit, e);
            if !p.is_constant() {
                *d_factors.entry(p).or_insert(0) += e;
            }
        } else {
            let (unit, rest) =
                LinearForm::normalize([a, b, Poly::zero()]).expect("nonzero by construction");
            scalar *= pow_rational(&unit, e);
            *residual.entry(rest).or_insert(0) += e;
        }
    }
    if s_order < 0 {
        return Err(LocalizationError::PoleAtSpecialization { net: s_order });
    }
    if s_order > 0 {
        return Err(LocalizationError::ZeroAtSpecialization { net: s_order });
    }
    residual.retain(|_, e| *e != 0);
    if !residual.is_empty() {
        let mut text = String::new();
        for (i, (form, e)) in residual.iter().enumerate() {
            if i > 0 {
                text.push_str(" * ");
            }
            text.push_str(&alloc::format!("({})^{}", form, e));
        }
        return Err(LocalizationError::NotConstant { residual: text });
    }
    d_factors.retain(|_, e| *e != 0);
    Ok(SpecializedValue {
        scalar,
        factors: d_factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kchar::{bar, specialize_cy, vertex_character};
    use crate::partitions::enumerate_partitions;
    use crate::poly::{rat, ratio};
    use alloc::vec;

    fn q(n: i64) -> BigRational {
        rat(n)
    }

    fn form(a: i64, b: i64, c: i64) -> [BigRational; 3] {
        [q(a), q(b), q(c)]
    }

    fn factored(scalar: BigRational, fs: &[([i64; 3], i64)]) -> LinearFormFactored<BigRational> {
        let mut out = LinearFormFactored::constant(scalar);
        for (c, e) in fs {
            out.mul_form(form(c[0], c[1], c[2]), *e).unwrap();
        }
        out
    }

    fn single_box() -> DPartition {
        DPartition::from_monomials(&[[0, 0, 0, 0]]).unwrap()
    }

    fn one_t1_t4() -> DPartition {
        DPartition::from_monomials(&[[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]]).unwrap()
    }

    fn sample_points() -> Vec<[BigRational; 3]> {
        vec![
            [ratio(101, 7), ratio(-37, 13), ratio(211, 17)],
            [ratio(1, 2), ratio(-71, 3), ratio(313, 11)],
            [ratio(97, 5), ratio(-2, 19), ratio(43, 29)],
            [ratio(5, 31), ratio(77, 2), ratio(-139, 9)],
            [ratio(-6, 41), ratio(173, 23), ratio(59, 4)],
        ]
    }

    #[test]
    fn euler_class_examples() {
        let t1 = LaurentChar::monomial(3, [1, 0, 0, 0], 1);
        assert_eq!(euler_class(&t1).unwrap(), factored(q(1), &[([1, 0, 0], 1)]));
        let chi = LaurentChar::from_terms(3, [([1, 0, 0, 0], 1), ([0, -1, 0, 0], 1)]);
        let e = euler_class(&chi).unwrap();
        assert_eq!(e.scalar(), &q(-1));
        let forms: Vec<_> = e.factors().map(|(f, x)| (f.coeffs().clone(), x)).collect();
        assert_eq!(forms, vec![(form(0, 1, 0), 1), (form(1, 0, 0), 1)]);
        assert_eq!(
            euler_class(&LaurentChar::one(3)),
            Err(LocalizationError::ZeroWeight)
        );
    }

    #[test]
    fn weight_of_empty_and_single_box() {
        assert_eq!(vertex_weight(&DPartition::empty(3)).unwrap(), LinearFormFactored::one());
        let w = vertex_weight(&single_box()).unwrap();
        let expect = factored(
            q(1),
            &[
                ([1, 1, 0], 1),
                ([1, 0, 1], 1),
                ([0, 1, 1], 1),
                ([1, 0, 0], -1),
                ([0, 1, 0], -1),
                ([0, 0, 1], -1),
                ([1, 1, 1], -1),
            ],
        );
        assert_eq!(w, expect);
        // (2*2*2)/(1*1*1*3) at λ = (1,1,1)
        assert_eq!(w.evaluate(&[q(1), q(1), q(1)], &[]).unwrap(), ratio(8, 3));
    }

    #[test]
    fn weight_of_one_t1_t4_matches_displayed_formula() {
        let w = vertex_weight(&one_t1_t4()).unwrap();
        let expect = factored(
            q(1),
            &[
                ([1, 1, 0], 2),
                ([1, 0, 1], 2),
                ([0, 1, 1], 1),
                ([1, -1, -1], 1),
                ([1, 2, 2], 1),
                ([3, 2, 1], 1),
                ([3, 1, 2], 1),
                ([1, 0, 0], -2),
                ([0, 1, 0], -1),
                ([0, 0, 1], -1),
                ([1, -1, 0], -1),
                ([1, 0, -1], -1),
                ([1, 1, 1], -2),
                ([1, 2, 1], -1),
                ([1, 1, 2], -1),
                ([3, 1, 1], -1),
                ([3, 2, 2], -1),
            ],
        );
        // the displayed weight is only defined up to sign
        assert!(w == expect || w == expect.neg(), "{}", w);
        let num: i64 = w.factors().filter(|(_, e)| *e > 0).map(|(_, e)| e).sum();
        let den: i64 = w.factors().filter(|(_, e)| *e < 0).map(|(_, e)| -e).sum();
        assert_eq!((num, den), (9, 12));
        assert_eq!(w.degree(), -3);
    }

    #[test]
    fn square_identity_and_homogeneity() {
        for n in 0..=6u32 {
            for pi in enumerate_partitions(3, n, None).unwrap() {
                let w = vertex_weight(&pi).unwrap();
                assert_eq!(w.degree(), -(n as i64));
                let v = cy_vertex(&pi).unwrap();
                let e = euler_class(&v.neg()).unwrap();
                let sign = if n % 2 == 0 { q(1) } else { q(-1) };
                for p in sample_points() {
                    let lhs = w.evaluate(&p, &[]).unwrap();
                    let rhs = e.evaluate(&p, &[]).unwrap();
                    assert_eq!(&lhs * &lhs, &sign * &rhs, "{:?}", pi);
                }
                let l = tautological_factor(&pi, &symbolic_d()).unwrap();
                assert_eq!(l.degree(), n as i64);
            }
        }
    }

    #[test]
    fn reversed_pair_rule_changes_only_the_sign() {
        for n in 1..=5u32 {
            for pi in enumerate_partitions(3, n, None).unwrap() {
                let a = vertex_weight_with_rule(&pi, PairRule::LexPositive).unwrap();
                let b = vertex_weight_with_rule(&pi, PairRule::LexNegative).unwrap();
                let fa: Vec<_> = a.factors().collect();
                let fb: Vec<_> = b.factors().collect();
                assert_eq!(fa, fb);
                assert_eq!(a.scalar().abs(), b.scalar().abs());
                let expect_flip = n % 2 == 1;
                assert_eq!(a.scalar() == &-b.scalar(), expect_flip, "{:?}", pi);
            }
        }
    }

    #[test]
    fn unpairable_and_zero_weight_are_reported() {
        let lopsided = LaurentChar::monomial(3, [1, 0, 0, 0], 1);
        assert_eq!(
            weight_from_vertex(&lopsided, 1, PairRule::LexPositive),
            Err(LocalizationError::Unpairable)
        );
        let fixed = LaurentChar::one(3);
        assert_eq!(
            weight_from_vertex(&fixed, 0, PairRule::LexPositive),
            Err(LocalizationError::ZeroWeight)
        );
        let sym = LaurentChar::from_terms(3, [([1, 0, 0, 0], 1), ([-1, 0, 0, 0], 1)]);
        // rank-2 self-dual piece with n = 0: (-1)^0 e(-V) = -1/λ1^2 is not a square
        assert_eq!(
            weight_from_vertex(&sym, 0, PairRule::LexPositive),
            Err(LocalizationError::Unpairable)
        );
        assert!(weight_from_vertex(&sym, 1, PairRule::LexPositive).is_ok());
        let z = LaurentChar::one(4);
        assert!(specialize_cy(&vertex_character(&z)).is_bar_symmetric());
        assert_eq!(bar(&sym), sym);
    }

    #[test]
    fn tautological_examples() {
        assert_eq!(
            tautological_factor(&DPartition::empty(3), &symbolic_d()).unwrap(),
            LinearFormFactored::one()
        );
        let d = symbolic_d();
        let l = tautological_factor(&single_box(), &d).unwrap();
        let expect = LinearFormFactored::form([&d[0] - &d[3], &d[1] - &d[3], &d[2] - &d[3]], 1).unwrap();
        assert_eq!(l, expect);

        let l = tautological_factor(&one_t1_t4(), &d).unwrap();
        let one = Poly::int(1);
        let base = [&d[0] - &d[3], &d[1] - &d[3], &d[2] - &d[3]];
        let mut expect = LinearFormFactored::form(base.clone(), 1).unwrap();
        expect
            .mul_form([&base[0] + &one, base[1].clone(), base[2].clone()], 1)
            .unwrap();
        expect
            .mul_form([&base[0] - &one, &base[1] - &one, &base[2] - &one], 1)
            .unwrap();
        assert_eq!(l, expect);
    }

    #[test]
    fn tautological_vanishing_for_tall_partitions() {
        let bundle = [q(0), q(0), q(0), q(-1)];
        for n in 1..=6 {
            for pi in enumerate_partitions(3, n, None).unwrap() {
                let l = tautological_factor(&pi, &bundle).unwrap();
                assert_eq!(l.is_zero(), pi.height() >= 2, "{:?}", pi);
            }
        }
        let trivial = [q(0), q(0), q(0), q(0)];
        for pi in enumerate_partitions(3, 3, None).unwrap() {
            assert!(tautological_factor(&pi, &trivial).unwrap().is_zero());
        }
    }

    #[test]
    fn evaluate_examples() {
        let l1 = factored(q(1), &[([1, 0, 0], 1)]);
        assert_eq!(l1.evaluate(&[q(2), q(3), q(5)], &[]).unwrap(), q(2));
        let ratio_form = factored(q(1), &[([1, 0, 0], 1), ([0, 1, 0], -1)]);
        assert_eq!(
            ratio_form.evaluate(&[q(1), q(0), q(1)], &[]),
            Err(LocalizationError::PoleHit)
        );
        let d = symbolic_d();
        let l = tautological_factor(&single_box(), &d).unwrap();
        let v = l
            .evaluate(&[q(1), q(2), q(3)], &[q(5), q(7), q(11), q(2)])
            .unwrap();
        assert_eq!(v, q(3 + 2 * 5 + 3 * 9));
        assert_eq!(
            l.evaluate(&[q(1), q(2), q(3)], &[q(1)]),
            Err(LocalizationError::MissingParameter)
        );
    }

    #[test]
    fn zero_form_handling() {
        let mut z = LinearFormFactored::<BigRational>::one();
        assert_eq!(z.mul_form(form(0, 0, 0), -1), Err(LocalizationError::DivisionByZero));
        z.mul_form(form(0, 0, 0), 2).unwrap();
        assert!(z.is_zero());
        assert!(z.recip().is_err());
        assert_eq!(z.evaluate(&[q(1), q(2), q(3)], &[]).unwrap(), q(0));
    }

    #[test]
    fn limit_of_single_box() {
        let w = vertex_weight(&single_box()).unwrap().to_poly_coeffs();
        let l = tautological_factor(&single_box(), &specialization_d()).unwrap();
        let lim = specialize_limit(&l.mul(&w)).unwrap();
        assert_eq!(lim.expanded().unwrap(), -Poly::var(0));
        assert!(lim.has_falling_shape(1));
        assert_eq!(lim.scalar, q(-1));
    }

    #[test]
    fn limit_of_height_one_partitions() {
        for n in 1..=6u32 {
            for pi in enumerate_partitions(3, n, None).unwrap() {
                if pi.height() != 1 {
                    continue;
                }
                let w = vertex_weight(&pi).unwrap().to_poly_coeffs();
                let l = tautological_factor(&pi, &specialization_d()).unwrap();
                let lim = specialize_limit(&l.mul(&w)).unwrap();
                assert!(lim.has_falling_shape(1));
                assert_eq!(lim.scalar.abs(), q(1), "{:?}", pi);
            }
        }
    }

    #[test]
    fn limit_failure_modes() {
        let s_inv = LinearFormFactored::<Poly>::form([Poly::int(1), Poly::int(1), Poly::int(1)], -1)
            .unwrap();
        assert_eq!(
            specialize_limit(&s_inv),
            Err(LocalizationError::PoleAtSpecialization { net: -1 })
        );
        let s = s_inv.recip().unwrap();
        assert_eq!(
            specialize_limit(&s),
            Err(LocalizationError::ZeroAtSpecialization { net: 1 })
        );
        let l1 = LinearFormFactored::<Poly>::form([Poly::int(1), Poly::zero(), Poly::zero()], 1).unwrap();
        assert!(matches!(
            specialize_limit(&l1),
            Err(LocalizationError::NotConstant { .. })
        ));
        // λ3 = s - λ1 - λ2, so λ1 / (-λ3) has limit λ1/(λ1+λ2): not constant,
        // while (λ1+λ3)/(-λ2) -> 1
        let good = LinearFormFactored::<Poly>::form([Poly::int(1), Poly::zero(), Poly::int(1)], 1)
            .unwrap()
            .mul(&LinearFormFactored::form([Poly::zero(), Poly::int(-1), Poly::zero()], -1).unwrap());
        let lim = specialize_limit(&good).unwrap();
        assert_eq!(lim.expanded().unwrap(), Poly::int(1));
    }

    #[test]
    fn normalization_is_primitive_and_positive() {
        let (unit, f) = LinearForm::normalize([q(-4), q(6), q(0)]).unwrap();
        assert_eq!(unit, q(-2));
        assert_eq!(f.coeffs(), &form(2, -3, 0));
        let (unit, f) = LinearForm::normalize([ratio(1, 2), ratio(1, 3), q(0)]).unwrap();
        assert_eq!(unit, ratio(1, 6));
        assert_eq!(f.coeffs(), &form(3, 2, 0));
        assert!(LinearForm::normalize([q(0), q(0), q(0)]).is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_factored() -> impl Strategy<Value = LinearFormFactored<BigRational>> {
            (
                1i64..20,
                proptest::collection::vec(((-3i64..4, -3i64..4, -3i64..4), -2i64..3), 0..6),
            )
                .prop_map(|(s, fs)| {
                    let mut out = LinearFormFactored::constant(rat(s));
                    for ((a, b, c), e) in fs {
                        if (a, b, c) != (0, 0, 0) {
                            out.mul_form(form(a, b, c), e).unwrap();
                        }
                    }
                    out
                })
        }

        proptest! {
            #[test]
            fn factored_product_matches_evaluated_product(
                a in arb_factored(),
                b in arb_factored(),
                x in 1i64..50, y in 51i64..90, z in 91i64..200,
            ) {
                let p = [rat(x), rat(y) / rat(7), rat(z) / rat(13)];
                let (va, vb) = (a.evaluate(&p, &[]), b.evaluate(&p, &[]));
                if let (Ok(va), Ok(vb)) = (va, vb) {
                    prop_assert_eq!(a.mul(&b).evaluate(&p, &[]).unwrap(), va * vb);
                }
            }

            #[test]
            fn recip_is_inverse(a in arb_factored()) {
                prop_assert_eq!(a.mul(&a.recip().unwrap()), LinearFormFactored::one());
            }
        }
    }
}
