//! Partial orderings of rings in the supported class.
//!
//! Maximal orderings are represented by sections: one real embedding per
//! minimal prime, with membership given by block signs. Intersections of
//! sections are coarser sign cones. Finitely generated cones only support
//! containment tests against sign cones.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::etale::primes::restrict_embedding;
use crate::etale::{membership, ComputedSubring, Element, MinimalPrime, NumberField};
use crate::exact::rational::{self, Rational};
use crate::exact::{Poly, RealAlgebraic, Sign};
use crate::lp::{Relation, Row, SignSystem};
use crate::spectra::{sections, Section};

#[derive(Clone, Debug)]
pub enum OrderingCone<'a> {
    /// Elements whose residue at every prime `p` is nonnegative under every
    /// embedding in `embeddings[p]`.
    Sign {
        ring: &'a ComputedSubring,
        embeddings: Vec<Vec<usize>>,
    },
    /// The cone generated by `generators` and all squares.
    Generated {
        ring: &'a ComputedSubring,
        generators: Vec<Element>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Properness {
    Proper,
    Improper,
    Unknown,
}

impl<'a> OrderingCone<'a> {
    pub fn from_section(ring: &'a ComputedSubring, section: &Section) -> Self {
        OrderingCone::Sign {
            ring,
            embeddings: section.cones.iter().map(|c| vec![c.embedding]).collect(),
        }
    }

    /// Intersection of the section cones of `sections`.
    pub fn intersection(ring: &'a ComputedSubring, sections: &[Section]) -> Result<Self> {
        if sections.is_empty() {
            return Err(Error::Precondition("intersection of no sections".into()));
        }
        let mut embeddings = vec![Vec::new(); ring.minimal_primes().len()];
        for s in sections {
            for c in &s.cones {
                if !embeddings[c.prime].contains(&c.embedding) {
                    embeddings[c.prime].push(c.embedding);
                }
            }
        }
        for e in &mut embeddings {
            e.sort_unstable();
        }
        Ok(OrderingCone::Sign { ring, embeddings })
    }

    pub fn ring(&self) -> &'a ComputedSubring {
        match self {
            OrderingCone::Sign { ring, .. } | OrderingCone::Generated { ring, .. } => ring,
        }
    }

    /// Whether every generator is nonnegative under `section`.
    pub fn contained_in_section(&self, section: &Section) -> Result<bool> {
        match self {
            OrderingCone::Generated { ring, generators } => {
                for g in generators {
                    for p in ring.minimal_primes() {
                        if block_sign(ring, p, section.embedding(p.id), g)? == Sign::Negative {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            OrderingCone::Sign { embeddings, .. } => Ok(embeddings
                .iter()
                .zip(&section.cones)
                .all(|(e, c)| e.iter().all(|&k| k == c.embedding))),
        }
    }

    pub fn properness(&self) -> Result<Properness> {
        match self {
            OrderingCone::Sign { .. } => Ok(Properness::Proper),
            OrderingCone::Generated { ring, generators } => {
                for s in sections(ring) {
                    if self.contained_in_section(&s)? {
                        return Ok(Properness::Proper);
                    }
                }
                let amb = ring.ambient();
                let squares: Vec<Element> = ring.basis().iter().map(|b| amb.mul(b, b)).collect();
                let improper = generators.iter().any(|g| {
                    let neg = amb.neg(g);
                    !g.is_zero()
                        && (neg == amb.one() || generators.contains(&neg) || squares.contains(&neg))
                });
                Ok(if improper {
                    Properness::Improper
                } else {
                    Properness::Unknown
                })
            }
        }
    }
}

/// Sign of the residue of `x` at prime `p` under residue embedding `k`.
pub fn block_sign(ring: &ComputedSubring, p: &MinimalPrime, k: usize, x: &Element) -> Result<Sign> {
    let u = p.residue_coords(ring.ambient(), x).ok_or_else(|| {
        Error::Precondition(format!("{x} is not in the rational span of the ring"))
    })?;
    Ok(p.residue.sign(&u, k))
}

/// `B⁺` generated by `A⁺` inside `b`; squares of `b` are implicit.
pub fn weakest_extension<'a>(
    generators: &[Element],
    b: &'a ComputedSubring,
) -> Result<OrderingCone<'a>> {
    for g in generators {
        if !membership(b, g)? {
            return Err(Error::Precondition(format!(
                "generator {g} is not in the ring"
            )));
        }
    }
    Ok(OrderingCone::Generated {
        ring: b,
        generators: generators.to_vec(),
    })
}

pub fn cone_member(cone: &OrderingCone, x: &Element) -> Result<bool> {
    let OrderingCone::Sign { ring, embeddings } = cone else {
        return Err(Error::GeneratedConeMembership);
    };
    for p in ring.minimal_primes() {
        for &k in &embeddings[p.id] {
            if block_sign(ring, p, k, x)? == Sign::Negative {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub extends: bool,
    /// When `extends` is false: `a₁ ∈ P` with `a·a₁ ∈ -P` and `a·a₁ ≠ 0`.
    pub witness: Option<Element>,
}

/// The sign system asking for `u ∈ F` with `σ(u) ≥ 0`, `σ(a u) ≤ 0`,
/// `a u ≠ 0`, in power-basis coordinates of `u`.
pub fn block_system(field: &NumberField, embedding: usize, a: &Poly) -> Result<SignSystem> {
    let d = field.degree();
    let basis: Vec<Poly> = (0..d)
        .map(|m| Poly::monomial(Rational::from_integer(1.into()), m))
        .collect();
    let scaled: Vec<Poly> = basis.iter().map(|b| field.mul(a, b)).collect();
    SignSystem::new(
        field.clone(),
        embedding,
        d,
        vec![
            Row {
                coeffs: basis,
                relation: Relation::Geq,
            },
            Row {
                coeffs: scaled,
                relation: Relation::Leq,
            },
        ],
        vec![1],
    )
}

/// Decides whether `a` extends the sign cone `cone` to a partial ordering:
/// it does not iff some `a₁ ∈ P` has `a·a₁ ∈ -P` and `a·a₁ ≠ 0`.
pub fn extendable_by(cone: &OrderingCone, a: &Element) -> Result<Extension> {
    let OrderingCone::Sign { ring, embeddings } = cone else {
        return Err(Error::Unsupported("criterion needs a sign cone".into()));
    };
    if !membership(ring, a)? {
        return Err(Error::Precondition(format!("{a} is not in the ring")));
    }
    let amb = ring.ambient();
    for p in ring.minimal_primes() {
        let a_p = p
            .residue_coords(amb, a)
            .expect("ring elements have residues");
        if a_p.is_zero() {
            continue;
        }
        let field = &p.residue;
        let mut candidates = vec![Poly::one()];
        let mut all_feasible = true;
        for &e in &embeddings[p.id] {
            let f = block_system(field, e, &a_p)?.feasible()?;
            match f.witness {
                Some(x) => candidates.push(Poly::new(x)),
                None => {
                    all_feasible = false;
                    break;
                }
            }
        }
        if !all_feasible {
            continue;
        }
        let works = |u: &Poly| {
            let au = field.mul(&a_p, u);
            !au.is_zero()
                && embeddings[p.id].iter().all(|&e| {
                    field.sign(u, e) != Sign::Negative && field.sign(&au, e) != Sign::Positive
                })
        };
        let u = candidates.into_iter().find(works).ok_or_else(|| {
            Error::TheoremViolation(format!(
                "block {} is feasible per ordering but not jointly",
                p.id
            ))
        })?;
        let a1 = ring
            .scale_into(&p.lift(amb, &u))
            .expect("lift lies in the rational span");
        let product = amb.mul(a, &a1);
        if !(membership(ring, &a1)?
            && cone_member(cone, &a1)?
            && cone_member(cone, &amb.neg(&product))?
            && !product.is_zero())
        {
            return Err(Error::TheoremViolation(format!(
                "witness {a1} does not re-verify"
            )));
        }
        return Ok(Extension {
            extends: false,
            witness: Some(a1),
        });
    }
    Ok(Extension {
        extends: true,
        witness: None,
    })
}

/// Rational strictly between two distinct real roots of one polynomial,
/// `lower < upper`.
pub fn separator(lower: &RealAlgebraic, upper: &RealAlgebraic) -> Rational {
    if lower.hi() < upper.lo() {
        rational::simplest_between(lower.hi(), upper.lo())
    } else {
        lower.hi().clone()
    }
}

/// Element of `field` with the prescribed sign at each real embedding.
pub fn sign_pattern_element(field: &NumberField, pattern: &[Sign]) -> Poly {
    let roots = field.real_roots();
    let mut u = Poly::constant(Rational::from_integer(pattern[0].as_i8().into()));
    for k in 0..roots.len() - 1 {
        if pattern[k] != pattern[k + 1] {
            let c = separator(&roots[k], &roots[k + 1]);
            u = field.mul(&u, &(&Poly::constant(c) - &Poly::t()));
        }
    }
    field.reduce(&u)
}

#[derive(Clone, Debug)]
pub struct MaxPoEntry {
    pub upper: Section,
    pub lower: Section,
}

#[derive(Clone, Debug)]
pub struct SeparatingWitness {
    pub left: usize,
    pub right: usize,
    pub prime: usize,
    pub element: Element,
    /// Sign of `element` under the left entry; the right entry sees the
    /// opposite strict sign.
    pub left_sign: Sign,
}

/// The restriction map `Φ(P̃) = P̃ ∩ A` from maximal orderings of `B` to
/// those of `A`, with pairwise separating elements of `A`.
#[derive(Clone, Debug)]
pub struct MaxPoTable {
    pub entries: Vec<MaxPoEntry>,
    pub witnesses: Vec<SeparatingWitness>,
    inverse: HashMap<Section, usize>,
}

impl MaxPoTable {
    pub fn preimage(&self, lower: &Section) -> Option<usize> {
        self.inverse.get(lower).copied()
    }

    pub fn round_trips(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, e)| self.preimage(&e.lower) == Some(i))
    }
}

fn separating_element(
    a: &ComputedSubring,
    p: &MinimalPrime,
    i: usize,
    j: usize,
) -> Result<(Element, Sign)> {
    let amb = a.ambient();
    let field = &p.residue;
    let opposite = |u: &Poly| {
        let (si, sj) = (field.sign(u, i), field.sign(u, j));
        (si != Sign::Zero && sj == si.flip()).then_some(si)
    };
    let mut candidates: Vec<Poly> = a
        .basis()
        .iter()
        .map(|b| p.residue_coords(amb, b).expect("basis has residues"))
        .collect();
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let roots = field.real_roots();
    candidates.push(&Poly::t() - &Poly::constant(separator(&roots[lo], &roots[hi])));
    for u in candidates {
        if let Some(s) = opposite(&u) {
            let x = a
                .scale_into(&p.lift(amb, &u))
                .expect("lift lies in the rational span");
            if membership(a, &x)? {
                return Ok((x, s));
            }
        }
    }
    Err(Error::TheoremViolation(format!(
        "no element separates orderings {i} and {j} at prime {}",
        p.id
    )))
}

/// Requires `a ⊆ b ⊆ T(a)`.
pub fn restrict_maxpo(a: &ComputedSubring, b: &ComputedSubring) -> Result<MaxPoTable> {
    if !b.same_ambient(a)
        || !b.contains_ring(a)?
        || !b.basis().iter().all(|x| a.in_rational_span(x))
    {
        return Err(Error::Precondition(
            "larger ring is not between A and T(A)".into(),
        ));
    }
    if b.minimal_primes().len() != a.minimal_primes().len()
        || b.minimal_primes().iter().any(|q| {
            a.prime(a.prime_of_coordinate(q.coordinate_set[0]))
                .coordinate_set
                != q.coordinate_set
        })
    {
        return Err(Error::TheoremViolation(
            "blocks of the two rings do not correspond".into(),
        ));
    }
    let mut entries = Vec::new();
    let mut inverse = HashMap::new();
    for upper in sections(b) {
        let mut lower = vec![0; a.minimal_primes().len()];
        for c in &upper.cones {
            let (p, k) = restrict_embedding(a, b, c.prime, c.embedding)?;
            lower[p] = k;
        }
        let lower = Section::from_embeddings(&lower);
        if inverse.insert(lower.clone(), entries.len()).is_some() {
            return Err(Error::TheoremViolation(format!(
                "two orderings restrict to {lower}"
            )));
        }
        entries.push(MaxPoEntry { upper, lower });
    }
    let expected: usize = a
        .minimal_primes()
        .iter()
        .map(MinimalPrime::num_orderings)
        .product();
    if entries.len() != expected {
        return Err(Error::TheoremViolation(format!(
            "{} restrictions but {expected} orderings of A",
            entries.len()
        )));
    }
    let mut cache: HashMap<(usize, usize, usize), (Element, Sign)> = HashMap::new();
    let mut witnesses = Vec::new();
    for left in 0..entries.len() {
        for right in left + 1..entries.len() {
            let (l, r) = (&entries[left].lower, &entries[right].lower);
            let p = (0..a.minimal_primes().len())
                .find(|&p| l.embedding(p) != r.embedding(p))
                .expect("distinct sections differ somewhere");
            let key = (p, l.embedding(p), r.embedding(p));
            let (element, left_sign) = match cache.entry(key) {
                Entry::Occupied(e) => e.get().clone(),
                Entry::Vacant(e) => e
                    .insert(separating_element(a, a.prime(p), key.1, key.2)?)
                    .clone(),
            };
            witnesses.push(SeparatingWitness {
                left,
                right,
                prime: p,
                element,
                left_sign,
            });
        }
    }
    Ok(MaxPoTable {
        entries,
        witnesses,
        inverse,
    })
}

/// Probes for the maximality oracle: basis elements and negatives, every
/// one-block sign pattern, and `samples` seeded random combinations of the
/// basis with coefficients in `[-3, 3]`.
pub fn default_probes(ring: &ComputedSubring, seed: u64, samples: usize) -> Vec<Element> {
    let amb = ring.ambient();
    let mut probes = Vec::new();
    for b in ring.basis() {
        probes.push(b.clone());
        probes.push(amb.neg(b));
    }
    for p in ring.minimal_primes() {
        let r = p.num_orderings();
        for mask in 0u32..1 << r {
            let pattern: Vec<Sign> = (0..r)
                .map(|k| {
                    if mask >> k & 1 == 1 {
                        Sign::Negative
                    } else {
                        Sign::Positive
                    }
                })
                .collect();
            let u = sign_pattern_element(&p.residue, &pattern);
            if let Some(x) = ring.scale_into(&p.lift(amb, &u)) {
                probes.push(x);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut x = amb.zero();
        for b in ring.basis() {
            let c = Rational::from_integer(rng.random_range(-3i64..=3).into());
            x = amb.add(&x, &amb.scale(&c, b));
        }
        probes.push(x);
    }
    probes
}

#[derive(Clone, Debug)]
pub struct MaximalityReport {
    pub probes: usize,
    pub outside: usize,
    /// Probes outside the cone paired with their blocking witness `a₁`.
    pub blocked: Vec<(Element, Element)>,
    /// Probes outside the cone that extend it.
    pub counterexamples: Vec<Element>,
}

impl MaximalityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

pub fn maximality_check(cone: &OrderingCone, probes: &[Element]) -> Result<MaximalityReport> {
    let mut report = MaximalityReport {
        probes: probes.len(),
        outside: 0,
        blocked: Vec::new(),
        counterexamples: Vec::new(),
    };
    for a in probes {
        if cone_member(cone, a)? {
            continue;
        }
        report.outside += 1;
        let ext = extendable_by(cone, a)?;
        match ext.witness {
            Some(w) if !ext.extends => report.blocked.push((a.clone(), w)),
            _ => report.counterexamples.push(a.clone()),
        }
    }
    Ok(report)
}
