use std::sync::Arc;

use super::field::{Ambient, Element, NumberField, ProductAlgebra};
use super::subring::{ClosureConfig, ComputedSubring};
use crate::error::{Error, Result};
use crate::exact::linalg::{self, Echelon, Vector};
use crate::exact::{sign_at, Poly, Rational, RealAlgebraic, Sign};

/// A minimal prime `ker(pi_i) ∩ A`, shared by every ambient coordinate in
/// `coordinate_set`, with its residue field `Frac(A/p)` realized inside the
/// first of those coordinates.
#[derive(Clone, Debug)]
pub struct MinimalPrime {
    pub id: usize,
    pub coordinate_set: Vec<usize>,
    /// Canonical basis of the kernel, as coordinate vectors over A's basis.
    pub kernel_basis: Vec<Vector>,
    pub residue: NumberField,
    /// Element of `A (x) Q` whose image generates the residue field.
    pub primitive: Element,
    realized_in: usize,
    power_rows: Vec<Vector>,
    pivot_cols: Vec<usize>,
    pivot_inverse: Vec<Vector>,
    embeddings: Vec<Poly>,
}

impl MinimalPrime {
    pub fn degree(&self) -> usize {
        self.residue.degree()
    }

    pub fn num_orderings(&self) -> usize {
        self.residue.num_orderings()
    }

    /// Ambient coordinate in which the residue field is realized.
    pub fn realized_in(&self) -> usize {
        self.realized_in
    }

    /// Image of the residue generator in each coordinate of
    /// `coordinate_set`, as a polynomial in that coordinate's field.
    pub fn generator_images(&self) -> &[Poly] {
        &self.embeddings
    }

    pub fn contains(&self, coords: &[Rational]) -> bool {
        linalg::rref(&self.kernel_basis).contains(coords)
    }

    /// Residue class of `x` as a polynomial in the residue generator, if
    /// the realized coordinate of `x` lies in the image of `A (x) Q`.
    pub fn residue_coords(&self, amb: &ProductAlgebra, x: &Element) -> Option<Poly> {
        let image = x
            .coord(self.realized_in)
            .padded(amb.factor(self.realized_in).degree());
        let picked: Vector = self.pivot_cols.iter().map(|&c| image[c].clone()).collect();
        let d = self.power_rows.len();
        let coeffs: Vector = (0..d)
            .map(|k| {
                picked
                    .iter()
                    .zip(&self.pivot_inverse)
                    .map(|(p, row)| p * &row[k])
                    .sum()
            })
            .collect();
        let mut back = linalg::zero_vector(image.len());
        for (c, row) in coeffs.iter().zip(&self.power_rows) {
            linalg::axpy(&mut back, c, row);
        }
        (back == image).then(|| Poly::new(coeffs))
    }

    /// The element of `A (x) Q` equal to `u` on this block and zero on
    /// every other block.
    pub fn lift(&self, amb: &ProductAlgebra, u: &Poly) -> Element {
        let mut coords = vec![Poly::zero(); amb.len()];
        for (&i, img) in self.coordinate_set.iter().zip(&self.embeddings) {
            coords[i] = u.compose_mod(img, amb.factor(i).minpoly());
        }
        amb.element(coords)
            .expect("coordinate count matches ambient")
    }
}

/// Index of the real root of `target` equal to `value(at)`, where
/// `value(at)` is known to be a root of `target`'s minimal polynomial.
pub fn locate_root(value: &Poly, at: &RealAlgebraic, target: &NumberField) -> Option<usize> {
    target.real_roots().iter().position(|rho| {
        let below = sign_at(&(value - &Poly::constant(rho.lo().clone())), at);
        if rho.as_rational().is_some() {
            return below == Sign::Zero;
        }
        let above = sign_at(&(value - &Poly::constant(rho.hi().clone())), at);
        below == Sign::Positive && above == Sign::Negative
    })
}

/// Minimal polynomial of `x` in `k`, from the first linear dependency among
/// its powers.
pub fn element_minpoly(k: &NumberField, x: &Poly) -> Poly {
    let d = k.degree();
    let mut powers: Vec<Vector> = vec![Poly::one().padded(d)];
    let mut cur = Poly::one();
    loop {
        cur = k.mul(&cur, x);
        let v = cur.padded(d);
        let mut rows = powers.clone();
        rows.push(v.clone());
        if let Some(dep) = linalg::left_kernel(&rows).into_iter().next() {
            let lead = dep.last().unwrap().clone();
            return Poly::new(dep.iter().map(|c| c / &lead).collect());
        }
        powers.push(v);
    }
}

pub(crate) fn compute_minimal_primes(
    amb: &Ambient,
    basis: &Echelon,
    elements: &[Element],
    config: &ClosureConfig,
) -> Result<Vec<MinimalPrime>> {
    let vectors: Vec<Vector> = basis.rows.clone();
    let mut groups: Vec<(Vec<Vector>, Vec<usize>)> = Vec::new();
    for i in 0..amb.len() {
        let proj: Vec<Vector> = vectors.iter().map(|v| amb.slice(v, i).to_vec()).collect();
        let kernel = linalg::canonical_subspace(&linalg::left_kernel(&proj));
        match groups.iter_mut().find(|(k, _)| *k == kernel) {
            Some((_, coords)) => coords.push(i),
            None => groups.push((kernel, vec![i])),
        }
    }
    groups
        .into_iter()
        .enumerate()
        .map(|(id, (kernel, coords))| build_prime(amb, elements, id, kernel, coords, config))
        .collect()
}

fn build_prime(
    amb: &Ambient,
    elements: &[Element],
    id: usize,
    kernel_basis: Vec<Vector>,
    coordinate_set: Vec<usize>,
    config: &ClosureConfig,
) -> Result<MinimalPrime> {
    let i0 = coordinate_set[0];
    let k = amb.factor(i0);
    let images: Vec<Vector> = elements
        .iter()
        .map(|e| e.coord(i0).padded(k.degree()))
        .collect();
    let dim = linalg::rank(&images);

    let (primitive, minpoly) = if dim == 1 {
        (amb.zero(), Poly::t())
    } else {
        find_primitive(amb, elements, i0, dim, config.primitive_search_bound)
            .ok_or(Error::PrimitiveElementBound { prime: id })?
    };
    let name = if dim == 1 {
        "Q".to_string()
    } else if minpoly == *k.minpoly() {
        k.name().to_string()
    } else {
        format!("{}_{id}", k.name())
    };
    let residue = NumberField::new(name, minpoly)?;

    let w = primitive.coord(i0);
    let mut power_rows = Vec::with_capacity(dim);
    let mut cur = Poly::one();
    for _ in 0..dim {
        power_rows.push(cur.padded(k.degree()));
        cur = k.mul(&cur, w);
    }
    let echelon = linalg::rref(&power_rows);
    let pivot_cols = echelon.pivots.clone();
    let square: Vec<Vector> = power_rows
        .iter()
        .map(|r| pivot_cols.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let pivot_inverse = linalg::inverse(&square)
        .ok_or_else(|| Error::TheoremViolation("residue power basis is singular".into()))?;
    let embeddings = if dim == 1 {
        vec![Poly::zero(); coordinate_set.len()]
    } else {
        coordinate_set
            .iter()
            .map(|&i| primitive.coord(i).clone())
            .collect()
    };
    Ok(MinimalPrime {
        id,
        coordinate_set,
        kernel_basis,
        residue,
        primitive,
        realized_in: i0,
        power_rows,
        pivot_cols,
        pivot_inverse,
        embeddings,
    })
}

fn find_primitive(
    amb: &Ambient,
    elements: &[Element],
    i0: usize,
    dim: usize,
    bound: i64,
) -> Option<(Element, Poly)> {
    let k = amb.factor(i0);
    let try_one = |w: &Element| {
        let mp = element_minpoly(k, w.coord(i0));
        (mp.degree() == Some(dim)).then_some(mp)
    };
    for b in elements {
        if let Some(mp) = try_one(b) {
            return Some((b.clone(), mp));
        }
    }
    for m in 1..=bound {
        let m = Rational::from_integer(m.into());
        for (j, a) in elements.iter().enumerate() {
            for b in &elements[j + 1..] {
                let w = amb.add(a, &amb.scale(&m, b));
                if let Some(mp) = try_one(&w) {
                    return Some((w, mp));
                }
            }
        }
    }
    None
}

/// `T(A)`: the product of the residue fields, with the embedding of the
/// ambient image of `A (x) Q` into it and the inverse lift.
#[derive(Clone, Debug)]
pub struct TotalQuotient {
    pub algebra: Ambient,
    primes: Vec<MinimalPrime>,
    source: Ambient,
}

impl TotalQuotient {
    /// Image of `a` in `T(A)`; `None` when `a` is outside `A (x) Q`.
    pub fn embed(&self, a: &Element) -> Option<Element> {
        let coords = self
            .primes
            .iter()
            .map(|p| p.residue_coords(&self.source, a))
            .collect::<Option<Vec<_>>>()?;
        let x = self.algebra.element(coords).ok()?;
        (self.lift(&x) == *a).then_some(x)
    }

    /// Preimage in the ambient of an element of `T(A)`.
    pub fn lift(&self, x: &Element) -> Element {
        let mut acc = self.source.zero();
        for (p, u) in self.primes.iter().zip(x.coords()) {
            acc = self.source.add(&acc, &p.lift(&self.source, u));
        }
        acc
    }
}

pub fn total_quotient(a: &ComputedSubring) -> TotalQuotient {
    let fields = a
        .minimal_primes()
        .iter()
        .map(|p| p.residue.clone())
        .collect();
    TotalQuotient {
        algebra: Arc::new(ProductAlgebra::new(fields).expect("a subring has at least one prime")),
        primes: a.minimal_primes().to_vec(),
        source: a.ambient_arc(),
    }
}

pub fn minimal_primes(a: &ComputedSubring) -> &[MinimalPrime] {
    a.minimal_primes()
}

/// For a prime `q` of `c ⊇ a`, the prime of `a` it contracts to.
pub fn contraction(a: &ComputedSubring, c: &ComputedSubring, q: usize) -> usize {
    a.prime_of_coordinate(c.prime(q).coordinate_set[0])
}

/// Restriction of embedding `k` of `c`'s residue at `q` to the residue of
/// `a` at the contracted prime.
pub fn restrict_embedding(
    a: &ComputedSubring,
    c: &ComputedSubring,
    q: usize,
    k: usize,
) -> Result<(usize, usize)> {
    let p = contraction(a, c, q);
    let prime_a = a.prime(p);
    let h = c
        .prime(q)
        .residue_coords(c.ambient(), &prime_a.primitive)
        .ok_or_else(|| {
            Error::Precondition("smaller ring is not contained in the larger one".into())
        })?;
    let rho = &c.prime(q).residue.real_roots()[k];
    let j = locate_root(&h, rho, &prime_a.residue).ok_or_else(|| {
        Error::TheoremViolation(format!(
            "embedding {k} of prime {q} restricts to no ordering"
        ))
    })?;
    Ok((p, j))
}
