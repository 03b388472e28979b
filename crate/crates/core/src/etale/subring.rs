use std::fmt;
use std::sync::Arc;

use super::field::{Ambient, Element, ProductAlgebra};
use super::primes::{compute_minimal_primes, MinimalPrime};
use crate::error::{Error, Result};
use crate::exact::linalg::{self, Echelon, Vector};
use crate::exact::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Finitely generated Z-module of integral elements.
    Order,
    /// Finite-dimensional Q-algebra.
    Algebra,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Order => "order",
            Mode::Algebra => "algebra",
        })
    }
}

/// A ring given by generators inside an ambient product of fields. The unit
/// is always included.
#[derive(Clone, Debug)]
pub struct SubringPresentation {
    pub ambient: Ambient,
    pub generators: Vec<Element>,
    pub mode: Mode,
}

impl SubringPresentation {
    pub fn new(ambient: Ambient, generators: Vec<Element>, mode: Mode) -> Result<Self> {
        for g in &generators {
            ambient.check(g)?;
        }
        Ok(SubringPresentation {
            ambient,
            generators,
            mode,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ClosureConfig {
    /// Multiplication rounds before an order is declared non-finite.
    pub max_rounds: usize,
    /// Largest common denominator (in bits) tolerated during closure.
    pub max_denominator_bits: u64,
    /// Largest multiplier `k` tried in `g1 + k*g2` primitive element candidates.
    pub primitive_search_bound: i64,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig {
            max_rounds: 24,
            max_denominator_bits: 256,
            primitive_search_bound: 16,
        }
    }
}

/// The closure of a presentation: an echelon basis (Hermite normal form in
/// order mode, reduced echelon form in algebra mode), its multiplication
/// table and the minimal primes with their residue fields.
#[derive(Clone, Debug)]
pub struct ComputedSubring {
    presentation: SubringPresentation,
    basis: Echelon,
    elements: Vec<Element>,
    table: Vec<Vec<Vector>>,
    primes: Vec<MinimalPrime>,
}

pub fn close_subring(pres: &SubringPresentation) -> Result<ComputedSubring> {
    close_subring_with(pres, &ClosureConfig::default())
}

pub fn close_subring_with(
    pres: &SubringPresentation,
    config: &ClosureConfig,
) -> Result<ComputedSubring> {
    let amb = &pres.ambient;
    if amb.is_empty() {
        return Err(Error::EmptyAmbient);
    }
    let echelon = |rows: &[Vector]| match pres.mode {
        Mode::Order => linalg::hnf_rational(rows),
        Mode::Algebra => linalg::rref(rows),
    };
    let mut rows = vec![amb.to_vector(&amb.one())];
    rows.extend(pres.generators.iter().map(|g| amb.to_vector(g)));
    let mut basis = echelon(&rows);
    let mut closed = false;
    for _ in 0..config.max_rounds {
        let elems: Vec<Element> = basis.rows.iter().map(|r| amb.from_vector(r)).collect();
        let mut next = basis.rows.clone();
        for i in 0..elems.len() {
            for j in i..elems.len() {
                next.push(amb.to_vector(&amb.mul(&elems[i], &elems[j])));
            }
        }
        let grown = echelon(&next);
        if grown == basis {
            closed = true;
            break;
        }
        basis = grown;
        if pres.mode == Mode::Order {
            let den = rational::common_denominator(basis.rows.iter().flatten());
            if den.bits() > config.max_denominator_bits {
                return Err(Error::NotModuleFinite);
            }
        }
    }
    if !closed {
        return Err(Error::NotModuleFinite);
    }
    ComputedSubring::from_basis(pres.clone(), basis, config)
}

impl ComputedSubring {
    fn from_basis(
        presentation: SubringPresentation,
        basis: Echelon,
        config: &ClosureConfig,
    ) -> Result<Self> {
        let amb = presentation.ambient.clone();
        let elements: Vec<Element> = basis.rows.iter().map(|r| amb.from_vector(r)).collect();
        let mut table = Vec::with_capacity(elements.len());
        for a in &elements {
            let mut row = Vec::with_capacity(elements.len());
            for b in &elements {
                let coords = basis
                    .coordinates(&amb.to_vector(&amb.mul(a, b)))
                    .ok_or_else(|| {
                        Error::TheoremViolation("closure is not multiplicatively closed".into())
                    })?;
                if presentation.mode == Mode::Order && !coords.iter().all(rational::is_integer) {
                    return Err(Error::TheoremViolation(
                        "order structure constants are not integral".into(),
                    ));
                }
                row.push(coords);
            }
            table.push(row);
        }
        let primes = compute_minimal_primes(&amb, &basis, &elements, config)?;
        let residue_dim: usize = primes.iter().map(MinimalPrime::degree).sum();
        if residue_dim != basis.rank() {
            return Err(Error::Unsupported(format!(
                "A (x) Q has dimension {} but its residue fields have total degree {residue_dim}",
                basis.rank()
            )));
        }
        Ok(ComputedSubring {
            presentation,
            basis,
            elements,
            table,
            primes,
        })
    }

    pub fn presentation(&self) -> &SubringPresentation {
        &self.presentation
    }

    pub fn ambient(&self) -> &ProductAlgebra {
        &self.presentation.ambient
    }

    pub fn ambient_arc(&self) -> Ambient {
        Arc::clone(&self.presentation.ambient)
    }

    pub fn mode(&self) -> Mode {
        self.presentation.mode
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn basis(&self) -> &[Element] {
        &self.elements
    }

    pub fn echelon(&self) -> &Echelon {
        &self.basis
    }

    /// Structure constants: `basis[i] * basis[j] = sum table[i][j][k] basis[k]`.
    pub fn multiplication_table(&self) -> &[Vec<Vector>] {
        &self.table
    }

    pub fn minimal_primes(&self) -> &[MinimalPrime] {
        &self.primes
    }

    pub fn prime(&self, id: usize) -> &MinimalPrime {
        &self.primes[id]
    }

    /// The minimal prime that is the kernel of the projection onto ambient
    /// factor `coordinate`.
    pub fn prime_of_coordinate(&self, coordinate: usize) -> usize {
        self.primes
            .iter()
            .position(|p| p.coordinate_set.contains(&coordinate))
            .expect("every coordinate belongs to a prime")
    }

    /// Coordinates of `x` over the basis with rational coefficients, if
    /// `x` lies in `A (x) Q`.
    pub fn rational_coordinates(&self, x: &Element) -> Option<Vector> {
        self.basis.coordinates(&self.ambient().to_vector(x))
    }

    pub fn in_rational_span(&self, x: &Element) -> bool {
        self.rational_coordinates(x).is_some()
    }

    /// Smallest positive integer `n` with `n * x` in the ring, for `x` in
    /// the rational span.
    pub fn clearing_multiple(&self, x: &Element) -> Option<Rational> {
        let coords = self.rational_coordinates(x)?;
        Some(match self.mode() {
            Mode::Algebra => Rational::from_integer(1.into()),
            Mode::Order => Rational::from_integer(rational::common_denominator(&coords)),
        })
    }

    /// Positive integer multiple of `x` lying in the ring.
    pub fn scale_into(&self, x: &Element) -> Option<Element> {
        let n = self.clearing_multiple(x)?;
        Some(self.ambient().scale(&n, x))
    }

    pub fn is_regular(&self) -> bool {
        self.mode() == Mode::Algebra
    }

    /// Every basis element of `other` lies in `self`.
    pub fn contains_ring(&self, other: &ComputedSubring) -> Result<bool> {
        for b in other.basis() {
            if !membership(self, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_ambient(&self, other: &ComputedSubring) -> bool {
        Arc::ptr_eq(&self.presentation.ambient, &other.presentation.ambient)
            || *self.presentation.ambient == *other.presentation.ambient
    }

    /// `A (x) Q` as an algebra-mode subring of the same ambient; it is the
    /// total quotient ring realized inside the ambient.
    pub fn rational_span(&self) -> Result<ComputedSubring> {
        let pres =
            SubringPresentation::new(self.ambient_arc(), self.elements.clone(), Mode::Algebra)?;
        close_subring(&pres)
    }

    /// Closure of this ring together with extra generators, in the same
    /// mode and ambient.
    pub fn adjoin(&self, extra: &[Element]) -> Result<ComputedSubring> {
        let mut gens = self.elements.clone();
        gens.extend_from_slice(extra);
        close_subring(&SubringPresentation::new(
            self.ambient_arc(),
            gens,
            self.mode(),
        )?)
    }
}

/// Whether `x` is an integer (order mode) or rational (algebra mode)
/// combination of the basis.
pub fn membership(a: &ComputedSubring, x: &Element) -> Result<bool> {
    a.ambient().check(x)?;
    Ok(match a.rational_coordinates(x) {
        None => false,
        Some(c) => match a.mode() {
            Mode::Algebra => true,
            Mode::Order => c.iter().all(rational::is_integer),
        },
    })
}
