use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::linalg::{self, Vector};
use crate::exact::{rational, real_roots, sign_at, Poly, Rational, RealAlgebraic, Sign};

/// `Q[t]/(minpoly)` for a monic irreducible `minpoly` with at least one
/// real root. Irreducibility is asserted by the caller; squarefreeness is
/// checked, and for degrees 2 and 3 the absence of rational roots settles
/// irreducibility as well.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    name: String,
    minpoly: Poly,
    real_roots: Vec<RealAlgebraic>,
    /// Dyadic approximations `m / 2^SIGN_BITS` within `2^-SIGN_ERROR_BITS`
    /// of each real root, for fast sign tests.
    approximations: Vec<BigInt>,
    /// Each real root refined to width `2^-(SIGN_ERROR_BITS + 1)`.
    fine_roots: Vec<RealAlgebraic>,
}

const SIGN_BITS: usize = 100;
const SIGN_ERROR_BITS: usize = 96;

impl NumberField {
    pub fn new(name: impl Into<String>, minpoly: Poly) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: &str| Error::InvalidField {
            name: name.clone(),
            reason: reason.to_string(),
        };
        let degree = minpoly
            .degree()
            .ok_or_else(|| invalid("zero minimal polynomial"))?;
        if degree == 0 {
            return Err(invalid("minimal polynomial must have degree at least 1"));
        }
        if !minpoly.is_monic() {
            return Err(invalid("minimal polynomial must be monic"));
        }
        if !minpoly.is_squarefree() {
            return Err(invalid("minimal polynomial is not squarefree"));
        }
        if (2..=3).contains(&degree) && minpoly.has_rational_root() {
            return Err(invalid("minimal polynomial has a rational root"));
        }
        let real_roots = real_roots(&minpoly)?;
        if real_roots.is_empty() {
            return Err(invalid("field has no real embedding"));
        }
        let width = Rational::new(BigInt::one(), BigInt::one() << (SIGN_ERROR_BITS + 1));
        let scale = Rational::from_integer(BigInt::one() << SIGN_BITS);
        let fine_roots: Vec<RealAlgebraic> = real_roots
            .iter()
            .map(|r| r.refine(&width))
            .collect::<Result<_>>()?;
        let approximations = fine_roots
            .iter()
            .map(|r| (r.hi() * &scale).floor().to_integer())
            .collect();
        Ok(NumberField {
            name,
            minpoly,
            real_roots,
            approximations,
            fine_roots,
        })
    }

    /// The rationals, presented as `Q[t]/(t)`.
    pub fn rationals() -> Self {
        NumberField::new("Q", Poly::t()).expect("t is a valid minimal polynomial")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn minpoly(&self) -> &Poly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    pub fn real_roots(&self) -> &[RealAlgebraic] {
        &self.real_roots
    }

    /// The real root under `embedding`, isolated to width below `2^-96`.
    pub fn fine_root(&self, embedding: usize) -> &RealAlgebraic {
        &self.fine_roots[embedding]
    }

    pub fn num_orderings(&self) -> usize {
        self.real_roots.len()
    }

    pub fn is_totally_real(&self) -> bool {
        self.real_roots.len() == self.degree()
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        p.rem(&self.minpoly)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul_mod(b, &self.minpoly)
    }

    pub fn inverse(&self, a: &Poly) -> Option<Poly> {
        a.inverse_mod(&self.minpoly)
    }

    /// Sign of `a` under the embedding `t -> real_roots[embedding]`.
    pub fn sign(&self, a: &Poly, embedding: usize) -> Sign {
        let a = self.reduce(a);
        let root = &self.real_roots[embedding];
        if let Some(q) = root.as_rational() {
            return Sign::of(&a.eval(q));
        }
        if let Some(c) = a.as_constant() {
            return Sign::of(&c);
        }
        self.approximate_sign(&a, embedding)
            .unwrap_or_else(|| sign_at(&a, &self.fine_roots[embedding]))
    }

    /// Rational interval containing `a` under `embedding`, of width about
    /// `|a'| · 2^-95` around the root.
    pub fn enclosure(&self, a: &Poly, embedding: usize) -> (Rational, Rational) {
        let a = self.reduce(a);
        if let Some(q) = self.real_roots[embedding].as_rational() {
            let v = a.eval(q);
            return (v.clone(), v);
        }
        if let Some(c) = a.as_constant() {
            return (c.clone(), c);
        }
        let (value, error, scale) = self.dyadic_value(&a, embedding);
        let scale = Rational::from_integer(scale);
        (
            Rational::from_integer(&value - &error) / &scale,
            Rational::from_integer(value + error) / scale,
        )
    }

    /// Sign of `a` at the root from its value at the dyadic approximation,
    /// when that value exceeds its error bound.
    fn approximate_sign(&self, a: &Poly, embedding: usize) -> Option<Sign> {
        let (value, error, _) = self.dyadic_value(a, embedding);
        (value.abs() > error).then(|| {
            if value.is_positive() {
                Sign::Positive
            } else {
                Sign::Negative
            }
        })
    }

    /// For nonconstant reduced `a` and `x = m / 2^b` approximating the root:
    /// `(v, e, s)` with `a(x) = v / s` and `|a(root) - a(x)| <= e / s`, the
    /// error being the bound on `|a'|` times the approximation error.
    fn dyadic_value(&self, a: &Poly, embedding: usize) -> (BigInt, BigInt, BigInt) {
        let den = rational::common_denominator(a.coeffs());
        let c: Vec<BigInt> = a
            .coeffs()
            .iter()
            .map(|q| (q * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let n = c.len() - 1;
        let m = &self.approximations[embedding];
        let value = c
            .iter()
            .enumerate()
            .rev()
            .fold(BigInt::zero(), |acc, (i, ci)| {
                acc * m + (ci << (SIGN_BITS * (n - i)))
            });
        // |x| + 1 bounds every point between x and the root.
        let radius: BigInt = (m.abs() >> SIGN_BITS) + 2;
        let slope = c
            .iter()
            .enumerate()
            .skip(1)
            .fold(BigInt::zero(), |acc, (i, ci)| {
                acc + ci.abs() * BigInt::from(i) * radius.pow(i as u32 - 1)
            });
        let error = slope << (SIGN_BITS * n - SIGN_ERROR_BITS);
        (value, error, den << (SIGN_BITS * n))
    }

    /// Matrix of multiplication by `a` on the power basis (rows are images
    /// of `1, t, t^2, ...`).
    pub fn multiplication_matrix(&self, a: &Poly) -> Vec<Vector> {
        let d = self.degree();
        (0..d)
            .map(|m| self.mul(a, &Poly::monomial(Rational::one(), m)).padded(d))
            .collect()
    }

    pub fn norm(&self, a: &Poly) -> Rational {
        linalg::determinant(&self.multiplication_matrix(a))
    }

    /// Discriminant of the minimal polynomial.
    pub fn discriminant(&self) -> Rational {
        let n = self.degree();
        let d = self.norm(&self.minpoly.derivative());
        if (n * (n - 1) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }

    pub fn with_name(&self, name: impl Into<String>) -> NumberField {
        NumberField {
            name: name.into(),
            ..self.clone()
        }
    }
}

/// An element of a finite product of number fields: one reduced polynomial
/// in `t` per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    coords: Vec<Poly>,
}

impl Element {
    pub fn coords(&self) -> &[Poly] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Poly {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Poly::is_zero)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `K_1 x ... x K_n`. Elements flatten to rational vectors by concatenating
/// the power-basis coordinates of each factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductAlgebra {
    factors: Vec<NumberField>,
    offsets: Vec<usize>,
    dim: usize,
}

pub type Ambient = Arc<ProductAlgebra>;

impl ProductAlgebra {
    pub fn new(factors: Vec<NumberField>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyAmbient);
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut dim = 0;
        for f in &factors {
            offsets.push(dim);
            dim += f.degree();
        }
        Ok(ProductAlgebra {
            factors,
            offsets,
            dim,
        })
    }

    pub fn factors(&self) -> &[NumberField] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> &NumberField {
        &self.factors[i]
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    /// Builds an element, reducing each coordinate modulo its field.
    pub fn element(&self, coords: Vec<Poly>) -> Result<Element> {
        if coords.len() != self.len() {
            return Err(Error::AmbientMismatch(format!(
                "expected {} coordinates, got {}",
                self.len(),
                coords.len()
            )));
        }
        Ok(Element {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(c, k)| k.reduce(c))
                .collect(),
        })
    }

    pub fn from_ints(&self, values: &[i64]) -> Result<Element> {
        self.element(values.iter().map(|&v| Poly::from_ints(&[v])).collect())
    }

    pub fn check(&self, x: &Element) -> Result<()> {
        if x.coords.len() != self.len() {
            return Err(Error::AmbientMismatch(format!(
                "element has {} coordinates, ambient has {} factors",
                x.coords.len(),
                self.len()
            )));
        }
        for (i, (c, k)) in x.coords.iter().zip(&self.factors).enumerate() {
            if c.degree().is_some_and(|d| d >= k.degree()) {
                return Err(Error::AmbientMismatch(format!(
                    "coordinate {i} is not reduced modulo {}",
                    k.minpoly()
                )));
            }
        }
        Ok(())
    }

    pub fn zero(&self) -> Element {
        Element {
            coords: vec![Poly::zero(); self.len()],
        }
    }

    pub fn one(&self) -> Element {
        Element {
            coords: vec![Poly::one(); self.len()],
        }
    }

    /// The idempotent that is one on the listed factors and zero elsewhere.
    pub fn idempotent(&self, support: &[usize]) -> Element {
        Element {
            coords: (0..self.len())
                .map(|i| {
                    if support.contains(&i) {
                        Poly::one()
                    } else {
                        Poly::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn constant(&self, q: &Rational) -> Element {
        Element {
            coords: vec![Poly::constant(q.clone()); self.len()],
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        Element {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        Element {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element {
            coords: a.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        Element {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((x, y), k)| k.mul(x, y))
                .collect(),
        }
    }

    pub fn scale(&self, q: &Rational, a: &Element) -> Element {
        Element {
            coords: a.coords.iter().map(|x| x.scale(q)).collect(),
        }
    }

    pub fn pow(&self, a: &Element, e: u32) -> Element {
        Element {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(x, k)| x.pow_mod(e, k.minpoly()))
                .collect(),
        }
    }

    /// `p(a)` for a rational polynomial `p`.
    pub fn eval_poly(&self, p: &Poly, a: &Element) -> Element {
        Element {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(x, k)| p.compose_mod(x, k.minpoly()))
                .collect(),
        }
    }

    pub fn to_vector(&self, x: &Element) -> Vector {
        let mut v = Vec::with_capacity(self.dim);
        for (c, k) in x.coords.iter().zip(&self.factors) {
            v.extend(c.padded(k.degree()));
        }
        v
    }

    pub fn from_vector(&self, v: &[Rational]) -> Element {
        Element {
            coords: self
                .factors
                .iter()
                .zip(&self.offsets)
                .map(|(k, &o)| Poly::new(v[o..o + k.degree()].to_vec()))
                .collect(),
        }
    }

    /// The block of `v` belonging to factor `i`.
    pub fn slice<'a>(&self, v: &'a [Rational], i: usize) -> &'a [Rational] {
        &v[self.offsets[i]..self.offsets[i] + self.factors[i].degree()]
    }

    pub fn is_unit(&self, x: &Element) -> bool {
        x.coords.iter().all(|c| !c.is_zero())
    }

    /// Componentwise quasi-inverse: inverse on nonzero coordinates, zero
    /// elsewhere. Satisfies `x * x' * x = x`.
    pub fn quasi_inverse(&self, x: &Element) -> Element {
        Element {
            coords: x
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(c, k)| {
                    if c.is_zero() {
                        Poly::zero()
                    } else {
                        k.inverse(c)
                            .expect("nonzero element of a field is invertible")
                    }
                })
                .collect(),
        }
    }

    pub fn is_rational_scalar(&self, x: &Element) -> Option<Rational> {
        let first = x.coords.first()?.as_constant()?;
        x.coords
            .iter()
            .all(|c| c.as_constant().as_ref() == Some(&first))
            .then_some(first)
    }
}

pub fn is_one(x: &Element) -> bool {
    x.coords
        .iter()
        .all(|c| c.as_constant().is_some_and(|q| q.is_one()))
}
