use std::collections::BTreeMap;

use serde::Serialize;

use super::ClosureDescriptor;
use crate::cones::{restrict_maxpo, MaxPoTable};
use crate::error::Result;
use crate::etale::primes::contraction;
use crate::etale::{baer_hull, ComputedSubring};
use crate::spectra::{extend_cone, sections_and_irreducible_sets, Check, PrimeCone, Section};

/// An explicit map between two finite sets of the census, by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub from: String,
    pub to: String,
    pub pairs: Vec<(usize, usize)>,
}

impl Pairing {
    fn is_bijection(&self, from_len: usize, to_len: usize) -> bool {
        let mut seen_from = vec![false; from_len];
        let mut seen_to = vec![false; to_len];
        for &(i, j) in &self.pairs {
            if i >= from_len || j >= to_len || seen_from[i] || seen_to[j] {
                return false;
            }
            seen_from[i] = true;
            seen_to[j] = true;
        }
        from_len == to_len && self.pairs.len() == from_len
    }

    fn image(&self, i: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == i).map(|p| p.1)
    }
}

pub const CLOSURES_OF_A: &str = "closures(A)";
pub const CLOSURES_OF_B: &str = "closures(B(A))";
pub const MAXPO_OF_B: &str = "maxpo(B(A))";
pub const MAXPO_OF_A: &str = "maxpo(A)";
pub const CLOSURES_OF_T: &str = "closures(T(A))";
pub const SECTIONS: &str = "sections(A)";
pub const IRREDUCIBLE: &str = "irreducible(A)";

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    /// Product over minimal primes of the number of orderings.
    pub expected: usize,
    pub counts: BTreeMap<String, usize>,
    /// Each set, listed as sections of the ring it lives over.
    pub members: BTreeMap<String, Vec<Section>>,
    pub pairings: Vec<Pairing>,
    /// Every descriptor over `T(A)` names a product of real closed fields,
    /// hence a real closed regular ring.
    pub total_quotient_descriptors_regular: bool,
    pub checks: Vec<Check>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn count(&self, set: &str) -> Option<usize> {
        self.counts.get(set).copied()
    }

    pub fn pairing(&self, from: &str, to: &str) -> Option<&Pairing> {
        self.pairings.iter().find(|p| p.from == from && p.to == to)
    }
}

fn index_of(list: &[Section], s: &Section) -> Option<usize> {
    list.iter().position(|x| x == s)
}

/// Sections of the lower ring of a restriction table, in table order.
fn lowers(table: &MaxPoTable) -> Vec<Section> {
    table.entries.iter().map(|e| e.lower.clone()).collect()
}

/// Extends a section of `a` along `a ⊆ b`, one cone per prime of `b`.
fn extend_section(a: &ComputedSubring, b: &ComputedSubring, s: &Section) -> Result<Section> {
    let mut embeddings = Vec::with_capacity(b.minimal_primes().len());
    for q in b.minimal_primes() {
        let p = contraction(a, b, q.id);
        let alpha = PrimeCone {
            prime: p,
            embedding: s.embedding(p),
        };
        embeddings.push(extend_cone(a, alpha, b, q.id)?.embedding);
    }
    Ok(Section::from_embeddings(&embeddings))
}

struct Builder {
    pairings: Vec<Pairing>,
    checks: Vec<Check>,
}

impl Builder {
    fn pair(
        &mut self,
        from: (&str, &[Section]),
        to: (&str, usize),
        mut f: impl FnMut(&Section) -> Result<Option<usize>>,
    ) -> Result<()> {
        let mut pairs = Vec::new();
        let mut unmatched = Vec::new();
        for (i, s) in from.1.iter().enumerate() {
            match f(s)? {
                Some(j) => pairs.push((i, j)),
                None => unmatched.push(format!("{} {s} has no partner in {}", from.0, to.0)),
            }
        }
        let pairing = Pairing {
            from: from.0.into(),
            to: to.0.into(),
            pairs,
        };
        let bijective = pairing.is_bijection(from.1.len(), to.1);
        let mut witnesses = unmatched;
        if !bijective && witnesses.is_empty() {
            witnesses.push(format!("pairs {:?}", pairing.pairs));
        }
        self.checks.push(
            Check::new(
                format!("{} -> {}", from.0, to.0),
                bijective,
                format!("{} of {} matched", pairing.pairs.len(), from.1.len()),
            )
            .with_witnesses(witnesses),
        );
        self.pairings.push(pairing);
        Ok(())
    }
}

/// Builds the four sets of closures and maximal orderings attached to `a`,
/// pairs them explicitly and checks that the pairings are bijections whose
/// composite around the cycle is the identity. For regular `a` the sections
/// and irreducible sets of the real spectrum join the census.
pub fn closures_census(a: &ComputedSubring) -> Result<CensusReport> {
    let t = a.rational_span()?;
    let b = baer_hull(a)?;
    let phi_a = restrict_maxpo(a, &t)?;
    let phi_b = restrict_maxpo(&b, &t)?;
    let phi_ab = restrict_maxpo(a, &b)?;

    let closures_a: Vec<Section> = ClosureDescriptor::all(a)
        .into_iter()
        .map(|d| d.section)
        .collect();
    let closures_b: Vec<Section> = ClosureDescriptor::all(&b)
        .into_iter()
        .map(|d| d.section)
        .collect();
    let closures_t: Vec<Section> = ClosureDescriptor::all(&t)
        .into_iter()
        .map(|d| d.section)
        .collect();
    let maxpo_a = lowers(&phi_a);
    let maxpo_b = lowers(&phi_b);
    let expected: usize = a
        .minimal_primes()
        .iter()
        .map(|p| p.num_orderings())
        .product();

    let mut counts = BTreeMap::new();
    let mut members = BTreeMap::new();
    for (name, list) in [
        (CLOSURES_OF_A, &closures_a),
        (CLOSURES_OF_B, &closures_b),
        (MAXPO_OF_B, &maxpo_b),
        (MAXPO_OF_A, &maxpo_a),
        (CLOSURES_OF_T, &closures_t),
    ] {
        counts.insert(name.to_string(), list.len());
        members.insert(name.to_string(), list.clone());
    }

    let mut builder = Builder {
        pairings: Vec::new(),
        checks: Vec::new(),
    };
    builder.pair(
        (CLOSURES_OF_A, &closures_a),
        (CLOSURES_OF_B, closures_b.len()),
        |s| Ok(index_of(&closures_b, &extend_section(a, &b, s)?)),
    )?;
    builder.pair(
        (CLOSURES_OF_B, &closures_b),
        (MAXPO_OF_B, maxpo_b.len()),
        |s| Ok(phi_b.preimage(s)),
    )?;
    builder.pair((MAXPO_OF_B, &maxpo_b), (MAXPO_OF_A, maxpo_a.len()), |s| {
        Ok(phi_ab
            .entries
            .iter()
            .find(|e| &e.upper == s)
            .and_then(|e| phi_a.preimage(&e.lower)))
    })?;
    builder.pair(
        (MAXPO_OF_A, &maxpo_a),
        (CLOSURES_OF_A, closures_a.len()),
        |s| Ok(index_of(&closures_a, s)),
    )?;
    builder.pair(
        (CLOSURES_OF_A, &closures_a),
        (CLOSURES_OF_T, closures_t.len()),
        |s| {
            Ok(phi_a
                .preimage(s)
                .and_then(|i| index_of(&closures_t, &phi_a.entries[i].upper)))
        },
    )?;

    let cycle: Vec<&Pairing> = builder.pairings[..4].iter().collect();
    let mut broken = Vec::new();
    for (i, s) in closures_a.iter().enumerate() {
        let end = cycle.iter().try_fold(i, |k, p| p.image(k));
        if end != Some(i) {
            broken.push(format!("{s} returns to {end:?}"));
        }
    }
    builder.checks.push(
        Check::new(
            "cycle",
            broken.is_empty(),
            "closures(A) -> closures(B(A)) -> maxpo(B(A)) -> maxpo(A) -> closures(A) is the identity",
        )
        .with_witnesses(broken),
    );

    if a.is_regular() {
        let (secs, sets) = sections_and_irreducible_sets(a)?;
        counts.insert(SECTIONS.into(), secs.len());
        members.insert(SECTIONS.into(), secs.clone());
        builder.pair((CLOSURES_OF_A, &closures_a), (SECTIONS, secs.len()), |s| {
            Ok(index_of(&secs, s))
        })?;
        if let Some(sets) = sets {
            counts.insert(IRREDUCIBLE.into(), sets.len());
            builder.pair((SECTIONS, &secs), (IRREDUCIBLE, sets.len()), |s| {
                Ok(sets.iter().position(|x| x == &s.cones))
            })?;
        }
    }

    let off: Vec<String> = counts
        .iter()
        .filter(|(_, &n)| n != expected)
        .map(|(k, n)| format!("{k}: {n}"))
        .collect();
    builder.checks.push(
        Check::new(
            "counts",
            off.is_empty(),
            format!("every set has {expected} elements"),
        )
        .with_witnesses(off),
    );
    let regular = closures_t.len() == expected;
    Ok(CensusReport {
        expected,
        counts,
        members,
        pairings: builder.pairings,
        total_quotient_descriptors_regular: regular,
        checks: builder.checks,
    })
}
