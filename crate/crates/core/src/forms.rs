//! Binary forms over the rationals and effective divisors on the projective
//! line.
//!
//! A [`BinaryForm`] of degree `n` is `sum c_i z^(n-i) w^i`, i.e. a section of
//! `O(n)`. Coefficients are indexed by the exponent of `w`. Forms of negative
//! degree exist only as tagged zeros: they fill matrix slots `O(a) -> O(b)`
//! with `b < a`, where no nonzero map exists.
//!
//! Greatest common divisors and factorizations are computed on the affine
//! chart `w = 1` while the power of `w` (the point at infinity of that chart)
//! is tracked separately.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::UniPoly;
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: i64, right: i64 },
    #[error("a form of degree {degree} needs {expected} coefficients, got {got}")]
    CoefficientCount {
        degree: i64,
        expected: usize,
        got: usize,
    },
    #[error("operation undefined on the zero form")]
    ZeroForm,
    #[error("gcd of two zero forms is undefined")]
    BothZero,
    #[error("division by the zero form")]
    DivisionByZero,
}

/// Homogeneous polynomial in `z, w` with a fixed degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    degree: i64,
    coeffs: Vec<Q>,
}

impl BinaryForm {
    /// `coeffs[i]` multiplies `z^(degree-i) w^i`. Negative degrees take no
    /// coefficients.
    pub fn new(degree: i64, coeffs: Vec<Q>) -> Result<Self, FormError> {
        let expected = usize::try_from(degree + 1).unwrap_or(0);
        if coeffs.len() != expected {
            return Err(FormError::CoefficientCount {
                degree,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(BinaryForm { degree, coeffs })
    }

    /// Degree is `coeffs.len() - 1`.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "use BinaryForm::zero for empty forms");
        BinaryForm {
            degree: coeffs.len() as i64 - 1,
            coeffs: coeffs.iter().map(|&c| Q::from_integer(c.into())).collect(),
        }
    }

    pub fn zero(degree: i64) -> Self {
        let n = usize::try_from(degree + 1).unwrap_or(0);
        BinaryForm {
            degree,
            coeffs: vec![Q::zero(); n],
        }
    }

    pub fn constant(c: Q) -> Self {
        BinaryForm {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn z() -> Self {
        Self::from_ints(&[1, 0])
    }

    pub fn w() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `a z + b w`.
    pub fn linear(a: Q, b: Q) -> Self {
        BinaryForm {
            degree: 1,
            coeffs: vec![a, b],
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// First nonzero coefficient in the order `z^n, z^(n-1) w, ..., w^n`.
    pub fn leading_coefficient(&self) -> Option<&Q> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    /// Exponent of `w` dividing the form; `None` for zero.
    pub fn ord_w(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| i as i64)
    }

    /// Exponent of `z` dividing the form; `None` for zero.
    pub fn ord_z(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map(|i| self.degree - i as i64)
    }

    fn check_same_degree(&self, other: &BinaryForm) -> Result<(), FormError> {
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm, FormError> {
        self.check_same_degree(other)?;
        Ok(BinaryForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &BinaryForm) -> Result<BinaryForm, FormError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BinaryForm {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> BinaryForm {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let degree = self.degree + other.degree;
        let mut out = BinaryForm::zero(degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> BinaryForm {
        (0..e).fold(BinaryForm::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, z: &Q, w: &Q) -> Q {
        let n = self.degree.max(0) as usize;
        self.coeffs
            .iter()
            .enumerate()
            .fold(Q::zero(), |acc, (i, c)| {
                acc + c * pow_q(z, n - i) * pow_q(w, i)
            })
    }

    /// Restriction to the chart `w = 1`, as a polynomial in `t = z/w`.
    pub fn chart_w(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Restriction to the chart `z = 1`, as a polynomial in `t = w/z`.
    pub fn chart_z(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }

    /// Inverse of [`chart_w`](Self::chart_w) at a prescribed degree.
    pub fn from_chart_w(u: &UniPoly, degree: i64) -> Result<BinaryForm, FormError> {
        let n = u.degree().map_or(-1, |d| d as i64);
        if n > degree {
            return Err(FormError::DegreeMismatch {
                left: n,
                right: degree,
            });
        }
        Ok(BinaryForm {
            degree,
            coeffs: (0..=degree).rev().map(|j| u.coeff(j as usize)).collect(),
        })
    }

    /// Inverse of [`chart_z`](Self::chart_z) at a prescribed degree.
    pub fn from_chart_z(u: &UniPoly, degree: i64) -> Result<BinaryForm, FormError> {
        let n = u.degree().map_or(-1, |d| d as i64);
        if n > degree {
            return Err(FormError::DegreeMismatch {
                left: n,
                right: degree,
            });
        }
        Ok(BinaryForm {
            degree,
            coeffs: (0..=degree).map(|i| u.coeff(i as usize)).collect(),
        })
    }

    /// Scaled so the leading coefficient is 1. Zero forms are returned as is.
    pub fn normalized(&self) -> BinaryForm {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Normalized gcd computed on the chart `w = 1`, with the power of `w`
    /// tracked by hand.
    pub fn gcd(&self, other: &BinaryForm) -> Result<BinaryForm, FormError> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(FormError::BothZero),
            (true, false) => return Ok(other.normalized()),
            (false, true) => return Ok(self.normalized()),
            _ => {}
        }
        let w_pow = self.ord_w().unwrap().min(other.ord_w().unwrap());
        let affine = self.chart_w().gcd(&other.chart_w());
        let deg = affine.degree().unwrap() as i64;
        let finite = BinaryForm::from_chart_w(&affine, deg)?;
        Ok(finite.mul(&BinaryForm::w().pow(w_pow as u32)).normalized())
    }

    /// Same as [`gcd`](Self::gcd) but computed on the chart `z = 1`.
    pub fn gcd_via_z_chart(&self, other: &BinaryForm) -> Result<BinaryForm, FormError> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(FormError::BothZero),
            (true, false) => return Ok(other.normalized()),
            (false, true) => return Ok(self.normalized()),
            _ => {}
        }
        let z_pow = self.ord_z().unwrap().min(other.ord_z().unwrap());
        let affine = self.chart_z().gcd(&other.chart_z());
        let deg = affine.degree().unwrap() as i64;
        let finite = BinaryForm::from_chart_z(&affine, deg)?;
        Ok(finite.mul(&BinaryForm::z().pow(z_pow as u32)).normalized())
    }

    /// Gcd of a family; zero members are skipped.
    pub fn gcd_all<'a, I>(forms: I) -> Result<BinaryForm, FormError>
    where
        I: IntoIterator<Item = &'a BinaryForm>,
    {
        let mut acc: Option<BinaryForm> = None;
        for f in forms {
            if f.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => f.normalized(),
                Some(g) => g.gcd(f)?,
            });
        }
        acc.ok_or(FormError::BothZero)
    }

    /// `Ok(Some(q))` with `self = q * divisor`, `Ok(None)` if `divisor` does
    /// not divide `self`.
    pub fn exact_div(&self, divisor: &BinaryForm) -> Result<Option<BinaryForm>, FormError> {
        if divisor.is_zero() {
            return Err(FormError::DivisionByZero);
        }
        let degree = self.degree - divisor.degree;
        if self.is_zero() {
            return Ok(Some(BinaryForm::zero(degree)));
        }
        if degree < 0 || self.ord_z().unwrap() < divisor.ord_z().unwrap() {
            return Ok(None);
        }
        // on the chart z = 1 the polynomial degree is degree - ord_z
        let Some(qt) = self.chart_z().exact_div(&divisor.chart_z()) else {
            return Ok(None);
        };
        Ok(Some(BinaryForm::from_chart_z(&qt, degree)?))
    }

    pub fn divides(&self, other: &BinaryForm) -> bool {
        matches!(other.exact_div(self), Ok(Some(_)))
    }

    /// True when no point of the projective line is a multiple root.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.chart_w().is_squarefree() && self.chart_z().is_squarefree()
    }

    /// Splits a nonzero form into points of the projective line with
    /// multiplicities. Irreducible factors of degree at least 2 are kept
    /// together as symbolic blocks, one per multiplicity level.
    pub fn factor_into_divisors(&self) -> Result<Vec<(DivisorFactor, u32)>, FormError> {
        if self.is_zero() {
            return Err(FormError::ZeroForm);
        }
        let mut out = Vec::new();
        let at_infinity = self.ord_w().unwrap();
        if at_infinity > 0 {
            out.push((DivisorFactor::Point(Point::Infinity), at_infinity as u32));
        }
        let affine = self.chart_w();
        if !affine.is_constant() {
            for (i, part) in affine.squarefree_decomposition().iter().enumerate() {
                let mult = i as u32 + 1;
                let mut rest = part.clone();
                for r in part.rational_roots() {
                    rest = rest
                        .exact_div(&UniPoly::linear_root(r.clone()))
                        .expect("root divides");
                    out.push((DivisorFactor::Point(Point::Finite(r)), mult));
                }
                if !rest.is_constant() {
                    let deg = rest.degree().unwrap() as i64;
                    let block = BinaryForm::from_chart_w(&rest, deg)?;
                    out.push((DivisorFactor::Symbolic(DivisorP1::new(&block)?), mult));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(out)
    }
}

fn pow_q(x: &Q, e: usize) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

impl PartialOrd for BinaryForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients lexicographically.
impl Ord for BinaryForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [deg {}]", self.degree)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.degree as usize;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let monomial = match (n - i, i) {
                (0, 0) => String::new(),
                (a, b) => {
                    let part = |v: &str, e: usize| match e {
                        0 => String::new(),
                        1 => v.to_string(),
                        _ => format!("{v}^{e}"),
                    };
                    format!("{}{}", part("z", a), part("w", b))
                }
            };
            let negative = *c < Q::zero();
            let abs = if negative { -c } else { c.clone() };
            let sign = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if monomial.is_empty() {
                write!(f, "{sign}{abs}")?;
            } else if abs.is_one() {
                write!(f, "{sign}{monomial}")?;
            } else {
                write!(f, "{sign}{abs}{monomial}")?;
            }
        }
        Ok(())
    }
}

/// A point of the projective line: `z - r w = 0` or `w = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(Q),
    Infinity,
}

impl Point {
    /// The normalized linear form vanishing at the point.
    pub fn linear_form(&self) -> BinaryForm {
        match self {
            Point::Finite(r) => BinaryForm::linear(Q::one(), -r),
            Point::Infinity => BinaryForm::w(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisorFactor {
    Point(Point),
    /// Product of irreducible factors of degree at least 2 over the
    /// rationals, kept atomic.
    Symbolic(DivisorP1),
}

impl DivisorFactor {
    pub fn divisor(&self) -> DivisorP1 {
        match self {
            DivisorFactor::Point(p) => DivisorP1::new(&p.linear_form()).expect("nonzero"),
            DivisorFactor::Symbolic(d) => d.clone(),
        }
    }
}

/// Effective divisor on the projective line, stored as the normalized form
/// that cuts it out. The empty divisor is the constant form 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorP1 {
    form: BinaryForm,
}

impl DivisorP1 {
    pub fn new(form: &BinaryForm) -> Result<Self, FormError> {
        if form.is_zero() {
            return Err(FormError::ZeroForm);
        }
        Ok(DivisorP1 {
            form: form.normalized(),
        })
    }

    pub fn empty() -> Self {
        DivisorP1 {
            form: BinaryForm::one(),
        }
    }

    pub fn point(p: &Point) -> Self {
        DivisorP1 {
            form: p.linear_form(),
        }
    }

    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn degree(&self) -> i64 {
        self.form.degree()
    }

    pub fn is_empty(&self) -> bool {
        self.form.degree() == 0
    }

    /// `self + other`.
    pub fn add(&self, other: &DivisorP1) -> DivisorP1 {
        DivisorP1 {
            form: self.form.mul(&other.form),
        }
    }

    /// `k * self`.
    pub fn times(&self, k: u32) -> DivisorP1 {
        DivisorP1 {
            form: self.form.pow(k),
        }
    }

    /// Containment of divisors: `self <= other`.
    pub fn le(&self, other: &DivisorP1) -> bool {
        self.form.divides(&other.form)
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.form.is_squarefree()
    }
}

impl fmt::Debug for DivisorP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "div({})", self.form)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::{q, q_frac};
    use proptest::prelude::*;

    fn f(c: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(c)
    }

    #[test]
    fn add_examples() {
        // (z + w) + (z - w) = 2z
        assert_eq!(f(&[1, 1]).add(&f(&[1, -1])).unwrap(), f(&[2, 0]));
        assert_eq!(f(&[1, 1]).add(&BinaryForm::zero(1)).unwrap(), f(&[1, 1]));
        let sum = f(&[1, 0, 1]).add(&f(&[-1, 0, 0])).unwrap();
        assert_eq!(sum, f(&[0, 0, 1]));
        assert_eq!(sum.degree(), 2);
        assert_eq!(
            f(&[1, 1]).add(&f(&[1])),
            Err(FormError::DegreeMismatch { left: 1, right: 0 })
        );
    }

    #[test]
    fn mul_examples() {
        assert_eq!(BinaryForm::z().mul(&BinaryForm::w()), f(&[0, 1, 0]));
        assert_eq!(f(&[3, 2]).mul(&BinaryForm::one()), f(&[3, 2]));
        assert_eq!(f(&[1, 1]).mul(&f(&[1, -1])), f(&[1, 0, -1]));
        // tagged zeros keep degree bookkeeping
        let z = BinaryForm::zero(-2).mul(&f(&[1, 2, 3, 4, 5]));
        assert!(z.is_zero());
        assert_eq!(z.degree(), 2);
    }

    #[test]
    fn new_checks_coefficient_count() {
        assert!(BinaryForm::new(2, vec![q(1)]).is_err());
        assert!(BinaryForm::new(-3, vec![]).is_ok());
        assert!(BinaryForm::new(-1, vec![q(0)]).is_err());
    }

    #[test]
    fn zero_forms_of_different_degree_differ() {
        assert_ne!(BinaryForm::zero(1), BinaryForm::zero(2));
        assert!(BinaryForm::zero(1).is_zero() && BinaryForm::zero(2).is_zero());
    }

    #[test]
    fn gcd_examples() {
        // gcd(z^2, zw) = z
        assert_eq!(f(&[1, 0, 0]).gcd(&f(&[0, 1, 0])).unwrap(), BinaryForm::z());
        // gcd(z^2 - w^2, z - w) = z - w, and the quotient re-multiplies
        let g = f(&[1, 0, -1]).gcd(&f(&[1, -1])).unwrap();
        assert_eq!(g, f(&[1, -1]));
        assert_eq!(
            f(&[1, 0, -1]).exact_div(&g).unwrap().unwrap().mul(&g),
            f(&[1, 0, -1])
        );
        assert_eq!(f(&[2, 3, 1]).gcd(&BinaryForm::one()).unwrap(), BinaryForm::one());
        assert_eq!(
            BinaryForm::zero(1).gcd(&BinaryForm::zero(2)),
            Err(FormError::BothZero)
        );
        // w-power tracking: gcd(w^2, zw^3) = w^2
        assert_eq!(f(&[0, 0, 1]).gcd(&f(&[0, 0, 0, 1])).unwrap(), f(&[0, 0, 1]));
    }

    #[test]
    fn exact_div_examples() {
        // z^2 w / z = zw
        assert_eq!(
            f(&[0, 1, 0, 0]).exact_div(&BinaryForm::z()).unwrap(),
            Some(f(&[0, 1, 0]))
        );
        let quot = f(&[1, 0, -1]).exact_div(&f(&[1, -1])).unwrap().unwrap();
        assert_eq!(quot, f(&[1, 1]));
        assert_eq!(quot.mul(&f(&[1, -1])), f(&[1, 0, -1]));
        assert_eq!(f(&[1, 0, 0]).exact_div(&BinaryForm::w()).unwrap(), None);
        assert_eq!(
            f(&[1, 0]).exact_div(&BinaryForm::zero(0)),
            Err(FormError::DivisionByZero)
        );
        // degree too large
        assert_eq!(f(&[1, 0]).exact_div(&f(&[1, 0, 0])).unwrap(), None);
    }

    #[test]
    fn factor_examples() {
        let got = f(&[0, 1, 0, 0]).factor_into_divisors().unwrap();
        assert_eq!(
            got,
            vec![
                (DivisorFactor::Point(Point::Finite(q(0))), 2),
                (DivisorFactor::Point(Point::Infinity), 1),
            ]
        );
        let got = f(&[1, 0, -1]).factor_into_divisors().unwrap();
        assert_eq!(
            got,
            vec![
                (DivisorFactor::Point(Point::Finite(q(-1))), 1),
                (DivisorFactor::Point(Point::Finite(q(1))), 1),
            ]
        );
        // expand-product oracle
        assert_eq!(f(&[1, 1]).mul(&f(&[1, -1])), f(&[1, 0, -1]));
        let got = f(&[1, 0, 1]).factor_into_divisors().unwrap();
        assert_eq!(
            got,
            vec![(DivisorFactor::Symbolic(DivisorP1::new(&f(&[1, 0, 1])).unwrap()), 1)]
        );
        // no rational root oracle: t^2 + 1 > 0 at every rational
        for k in -20..=20 {
            assert!(!f(&[1, 0, 1]).eval(&q_frac(k, 3), &q(1)).is_zero());
        }
        assert_eq!(BinaryForm::zero(2).factor_into_divisors(), Err(FormError::ZeroForm));
    }

    #[test]
    fn divisor_normalization() {
        let d = DivisorP1::new(&f(&[0, -3, 6])).unwrap();
        assert_eq!(d.form(), &f(&[0, 1, -2]));
        assert_eq!(DivisorP1::new(d.form()).unwrap(), d);
        assert!(DivisorP1::empty().is_empty());
        assert!(DivisorP1::new(&BinaryForm::zero(3)).is_err());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(f(&[1, 0, -1]).to_string(), "z^2 - w^2");
        assert_eq!(f(&[0, -2, 0]).to_string(), "-2zw");
        assert_eq!(BinaryForm::constant(q_frac(1, 2)).to_string(), "1/2");
    }

    pub(crate) fn form_strategy(max_degree: i64) -> impl Strategy<Value = BinaryForm> {
        (0..=max_degree).prop_flat_map(|n| {
            prop::collection::vec(-3i64..=3, (n + 1) as usize)
                .prop_map(|c| BinaryForm::from_ints(&c))
        })
    }

    fn nonzero_form(max_degree: i64) -> impl Strategy<Value = BinaryForm> {
        form_strategy(max_degree).prop_filter("nonzero", |f| !f.is_zero())
    }

    proptest! {
        #[test]
        fn gcd_scales_by_common_factor(
            a in nonzero_form(3), b in nonzero_form(3), c in nonzero_form(2)
        ) {
            let lhs = a.mul(&c).gcd(&b.mul(&c)).unwrap();
            let rhs = a.gcd(&b).unwrap().mul(&c).normalized();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exact_div_inverts_mul(a in form_strategy(4), g in nonzero_form(3)) {
            prop_assert_eq!(a.mul(&g).exact_div(&g).unwrap(), Some(a));
        }

        #[test]
        fn charts_agree_on_gcd(a in form_strategy(4), b in form_strategy(4)) {
            prop_assume!(!(a.is_zero() && b.is_zero()));
            prop_assert_eq!(a.gcd(&b).unwrap(), a.gcd_via_z_chart(&b).unwrap());
        }

        #[test]
        fn linear_factorizations_multiply_back(
            roots in prop::collection::vec((-3i64..=3, 1i64..=3, 1u32..=3), 0..4),
            w_pow in 0u32..3,
            scale in 1i64..5,
        ) {
            let mut form = BinaryForm::w().pow(w_pow).scale(&q(scale));
            for (a, b, e) in &roots {
                form = form.mul(&f(&[*b, -*a]).pow(*e));
            }
            let factors = form.factor_into_divisors().unwrap();
            let mut back = BinaryForm::one();
            for (factor, mult) in &factors {
                prop_assert!(matches!(factor, DivisorFactor::Point(_)));
                back = back.mul(&factor.divisor().form().pow(*mult));
            }
            prop_assert_eq!(back, form.normalized());
        }

        #[test]
        fn divisor_degree_is_additive(a in nonzero_form(3), b in nonzero_form(3)) {
            let da = DivisorP1::new(&a).unwrap();
            let db = DivisorP1::new(&b).unwrap();
            prop_assert_eq!(da.add(&db).degree(), da.degree() + db.degree());
            prop_assert_eq!(DivisorP1::new(da.form()).unwrap(), da);
        }
    }
}
