use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::Element;
use super::primes::MinimalPrime;
use super::subring::{membership, ComputedSubring, Mode};
use crate::error::{Error, Result};
use crate::exact::linalg::{self, Vector};
use crate::exact::rational::{self, Rational};
use crate::exact::Poly;

/// The idempotent of `A (x) Q` that is one on the listed primes of `a`.
pub fn prime_idempotent(a: &ComputedSubring, primes: &[usize]) -> Element {
    let support: Vec<usize> = primes
        .iter()
        .flat_map(|&p| a.prime(p).coordinate_set.iter().copied())
        .collect();
    a.ambient().idempotent(&support)
}

/// Every subset of the primes of `a`, in binary counting order.
pub fn prime_subsets(a: &ComputedSubring) -> Vec<Vec<usize>> {
    let n = a.minimal_primes().len();
    (0u64..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// `E(T(A))`, realized in the ambient.
pub fn total_idempotents(a: &ComputedSubring) -> Vec<Element> {
    prime_subsets(a)
        .iter()
        .map(|s| prime_idempotent(a, s))
        .collect()
}

/// `E(A)`: the idempotents of `T(A)` that lie in `A`.
pub fn idempotents(a: &ComputedSubring) -> Vec<Element> {
    total_idempotents(a)
        .into_iter()
        .filter(|e| membership(a, e).unwrap_or(false))
        .collect()
}

/// Idempotent generating `ann(x)` in `a`, if there is one.
pub fn annihilator_idempotent(a: &ComputedSubring, x: &Element) -> Option<Element> {
    let zero_primes: Vec<usize> = a
        .minimal_primes()
        .iter()
        .filter(|p| x.coord(p.realized_in()).is_zero())
        .map(|p| p.id)
        .collect();
    let e = prime_idempotent(a, &zero_primes);
    membership(a, &e).unwrap_or(false).then_some(e)
}

/// Baer: every annihilator is generated by an idempotent. Inside a product
/// of fields this holds exactly when `E(A) = E(T(A))`.
pub fn is_baer(a: &ComputedSubring) -> bool {
    idempotents(a).len() == 1 << a.minimal_primes().len()
}

/// `B(A)`: the closure of `A` with every idempotent of `T(A)`.
pub fn baer_hull(a: &ComputedSubring) -> Result<ComputedSubring> {
    let b = a.adjoin(&total_idempotents(a))?;
    if !is_baer(&b) {
        return Err(Error::TheoremViolation("Baer hull is not Baer".into()));
    }
    for x in b.basis() {
        if annihilator_idempotent(&b, x).is_none() {
            return Err(Error::TheoremViolation(format!(
                "annihilator of {x} has no idempotent generator"
            )));
        }
    }
    if essential_violation(a, &b)?.is_some() {
        return Err(Error::TheoremViolation("Baer hull is not essential".into()));
    }
    Ok(b)
}

/// First prime of `b` whose block meets `a` only in zero, or `None` when
/// `a ⊆ b` is essential.
pub fn essential_violation(a: &ComputedSubring, b: &ComputedSubring) -> Result<Option<usize>> {
    if !b.same_ambient(a) || !b.contains_ring(a)? {
        return Err(Error::Precondition(
            "the smaller ring is not contained in the larger one".into(),
        ));
    }
    let amb = a.ambient();
    for q in b.minimal_primes() {
        let outside: Vec<Vector> = a
            .echelon()
            .rows
            .iter()
            .map(|v| {
                (0..amb.len())
                    .filter(|i| !q.coordinate_set.contains(i))
                    .flat_map(|i| amb.slice(v, i).to_vec())
                    .collect()
            })
            .collect();
        let vanishing = if outside.first().is_some_and(|r| r.is_empty()) {
            a.rank()
        } else {
            linalg::left_kernel(&outside).len()
        };
        if vanishing == 0 {
            return Ok(Some(q.id));
        }
    }
    Ok(None)
}

pub fn is_essential(a: &ComputedSubring, b: &ComputedSubring) -> Result<bool> {
    Ok(essential_violation(a, b)?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tristate {
    True,
    False,
    Unknown,
}

impl fmt::Display for Tristate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tristate::True => "true",
            Tristate::False => "false",
            Tristate::Unknown => "unknown",
        })
    }
}

/// Squarefree decomposition `n = s^2 * d` of a positive integer.
pub fn squarefree_decomposition(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut kernel = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            kernel *= &p;
        }
        p += 1;
    }
    (square, kernel * rest)
}

/// Generator `ω` of the maximal order of a quadratic residue field, as a
/// polynomial in the residue generator.
pub fn quadratic_integral_generator(prime: &MinimalPrime) -> Poly {
    let f = prime.residue.minpoly();
    let (b, c) = (f.coeff(1), f.coeff(0));
    let disc = &b * &b - Rational::from_integer(4.into()) * c;
    let (num, den) = (disc.numer().clone(), disc.denom().clone());
    let (s, d) = squarefree_decomposition(&(&num * &den).abs());
    // sqrt(d) = den * sqrt(disc) / s, with sqrt(disc) = 2t + b.
    let scale = Rational::new(den, s);
    let sqrt_d = Poly::new(vec![&b * &scale, Rational::from_integer(2.into()) * &scale]);
    if d.mod_floor(&BigInt::from(4)) == BigInt::one() {
        (&sqrt_d + &Poly::one()).scale(&rational::frac(1, 2))
    } else {
        sqrt_d
    }
}

/// Integral closedness in `T(A)`. Both sides of the block criterion are
/// computed independently for Baer rings and must agree.
pub fn is_integrally_closed_in_t(a: &ComputedSubring) -> Result<Tristate> {
    if !is_baer(a) {
        return Ok(Tristate::False);
    }
    if a.minimal_primes().iter().any(|p| p.degree() >= 3) {
        return Ok(Tristate::Unknown);
    }
    if a.mode() == Mode::Algebra {
        return Ok(Tristate::True);
    }
    let amb = a.ambient();
    let mut left = true;
    let mut right = true;
    for p in a.minimal_primes() {
        if p.degree() == 1 {
            continue;
        }
        let omega = quadratic_integral_generator(p);
        left &= membership(a, &p.lift(amb, &omega))?;
        let image: Vec<Vector> = a
            .basis()
            .iter()
            .map(|x| {
                p.residue_coords(amb, x)
                    .expect("basis lies in A (x) Q")
                    .padded(2)
            })
            .collect();
        let lattice = linalg::hnf_rational(&image);
        right &= lattice
            .coordinates(&omega.padded(2))
            .is_some_and(|c| c.iter().all(rational::is_integer));
    }
    if left != right {
        return Err(Error::TheoremViolation(format!(
            "direct membership says {left}, block criterion says {right}"
        )));
    }
    Ok(if left {
        Tristate::True
    } else {
        Tristate::False
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::etale::field::{Ambient, NumberField, ProductAlgebra};
    use crate::etale::subring::{close_subring, SubringPresentation};

    fn qq() -> Ambient {
        Arc::new(ProductAlgebra::new(vec![NumberField::rationals(); 2]).unwrap())
    }

    fn ring(amb: &Ambient, gens: Vec<Element>, mode: Mode) -> ComputedSubring {
        close_subring(&SubringPresentation::new(amb.clone(), gens, mode).unwrap()).unwrap()
    }

    #[test]
    fn parity_glued_ring() {
        let amb = qq();
        let a0 = ring(&amb, vec![amb.from_ints(&[0, 2]).unwrap()], Mode::Order);
        assert_eq!(idempotents(&a0), vec![amb.zero(), amb.one()]);
        assert!(!is_baer(&a0));
        let b = baer_hull(&a0).unwrap();
        assert_eq!(
            b.basis(),
            &[
                amb.from_ints(&[1, 0]).unwrap(),
                amb.from_ints(&[0, 1]).unwrap()
            ]
        );
        assert!(is_essential(&a0, &b).unwrap());
        assert_eq!(is_integrally_closed_in_t(&a0).unwrap(), Tristate::False);
        assert_eq!(is_integrally_closed_in_t(&b).unwrap(), Tristate::True);
        assert_eq!(idempotents(&b).len(), 4);
    }

    #[test]
    fn diagonal_is_not_essential_in_product() {
        let amb = qq();
        let d = ring(&amb, vec![], Mode::Algebra);
        let full = ring(&amb, vec![amb.idempotent(&[0])], Mode::Algebra);
        assert_eq!(essential_violation(&d, &full).unwrap(), Some(0));
        assert!(is_essential(&full, &full).unwrap());
        assert!(is_essential(&full, &d).is_err());
    }

    #[test]
    fn quadratic_maximal_orders() {
        let k5 = NumberField::new("K5", Poly::from_ints(&[-5, 0, 1])).unwrap();
        let amb: Ambient = Arc::new(ProductAlgebra::new(vec![k5]).unwrap());
        let z5 = ring(
            &amb,
            vec![amb.element(vec![Poly::t()]).unwrap()],
            Mode::Order,
        );
        assert_eq!(
            quadratic_integral_generator(z5.prime(0)),
            Poly::new(vec![rational::frac(1, 2), rational::frac(1, 2)])
        );
        assert_eq!(is_integrally_closed_in_t(&z5).unwrap(), Tristate::False);
        let omega = amb
            .element(vec![Poly::new(vec![
                rational::frac(1, 2),
                rational::frac(1, 2),
            ])])
            .unwrap();
        let ok = ring(&amb, vec![omega], Mode::Order);
        assert_eq!(is_integrally_closed_in_t(&ok).unwrap(), Tristate::True);

        let k8 = NumberField::new("K8", Poly::from_ints(&[-8, 0, 1])).unwrap();
        let amb8: Ambient = Arc::new(ProductAlgebra::new(vec![k8]).unwrap());
        let half = amb8
            .element(vec![Poly::new(vec![
                Rational::zero(),
                rational::frac(1, 2),
            ])])
            .unwrap();
        let z2 = ring(&amb8, vec![half], Mode::Order);
        assert_eq!(is_integrally_closed_in_t(&z2).unwrap(), Tristate::True);
    }

    #[test]
    fn squarefree_parts() {
        let (s, d) = squarefree_decomposition(&BigInt::from(72));
        assert_eq!((s, d), (BigInt::from(6), BigInt::from(2)));
        let (s, d) = squarefree_decomposition(&BigInt::from(5));
        assert_eq!((s, d), (BigInt::one(), BigInt::from(5)));
    }
}
