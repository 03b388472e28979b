//! Finite real spectra of rings in the supported class.
//!
//! Every prime cone has a minimal prime as support, so `Sper A` is the
//! finite discrete set of pairs (minimal prime, real embedding of its
//! residue field). Topological statements therefore reduce to statements
//! about finite maps; reports say so explicitly.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::{Serialize, SerializeTuple, Serializer};

use crate::error::{Error, Result};
use crate::etale::idempotents::essential_violation;
use crate::etale::primes::{contraction, restrict_embedding};
use crate::etale::{membership, ComputedSubring, Element, Mode};

/// A point of `Sper A`: a minimal prime and an ordering of its residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeCone {
    pub prime: usize,
    pub embedding: usize,
}

impl fmt::Display for PrimeCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}:{}", self.prime, self.embedding)
    }
}

/// A section of the support map: one cone per minimal prime, indexed by
/// prime id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Section {
    pub cones: Vec<PrimeCone>,
}

impl Section {
    pub fn from_embeddings(embeddings: &[usize]) -> Self {
        Section {
            cones: embeddings
                .iter()
                .enumerate()
                .map(|(prime, &embedding)| PrimeCone { prime, embedding })
                .collect(),
        }
    }

    pub fn embeddings(&self) -> Vec<usize> {
        self.cones.iter().map(|c| c.embedding).collect()
    }

    pub fn embedding(&self, prime: usize) -> usize {
        self.cones[prime].embedding
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.cones.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Serializes as `[prime, embedding]`.
impl Serialize for PrimeCone {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.prime)?;
        t.serialize_element(&self.embedding)?;
        t.end()
    }
}

/// Serializes as the list of its cones.
impl Serialize for Section {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.cones.serialize(serializer)
    }
}

/// One named verification with its outcome and supporting data.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, summary: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            summary: summary.into(),
            witnesses: Vec::new(),
        }
    }

    pub fn with_witnesses(mut self, witnesses: Vec<String>) -> Self {
        self.witnesses = witnesses;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SpectralReport {
    pub checks: Vec<Check>,
}

impl SpectralReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }
}

pub fn real_spectrum(a: &ComputedSubring) -> Vec<PrimeCone> {
    a.minimal_primes()
        .iter()
        .flat_map(|p| {
            (0..p.num_orderings()).map(move |embedding| PrimeCone {
                prime: p.id,
                embedding,
            })
        })
        .collect()
}

/// All sections of `supp: Sper A -> MinSpec A`, in lexicographic order.
pub fn sections(a: &ComputedSubring) -> Vec<Section> {
    let counts: Vec<usize> = a
        .minimal_primes()
        .iter()
        .map(|p| p.num_orderings())
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0; counts.len()];
    if counts.contains(&0) {
        return out;
    }
    loop {
        out.push(Section::from_embeddings(&cur));
        let mut i = counts.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < counts[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Largest spectrum for which irreducible subsets are found by brute force.
pub const IRREDUCIBLE_SEARCH_LIMIT: usize = 20;

/// Subsets `X` of `Sper A` on which `supp` is an irreducible surjection:
/// surjective, and no proper subset is. Found by exhaustive search, so
/// `None` above [`IRREDUCIBLE_SEARCH_LIMIT`] points.
pub fn irreducible_sets(a: &ComputedSubring) -> Option<Vec<Vec<PrimeCone>>> {
    let sper = real_spectrum(a);
    if sper.len() > IRREDUCIBLE_SEARCH_LIMIT {
        return None;
    }
    let mut cover = vec![0u32; a.minimal_primes().len()];
    for (i, c) in sper.iter().enumerate() {
        cover[c.prime] |= 1 << i;
    }
    let surjects = |mask: u32| cover.iter().all(|&m| m & mask != 0);
    let mut out = Vec::new();
    for mask in 0u32..1 << sper.len() {
        if !surjects(mask) {
            continue;
        }
        let minimal = (0..sper.len())
            .filter(|i| mask >> i & 1 == 1)
            .all(|i| !surjects(mask & !(1 << i)));
        if minimal {
            out.push(
                (0..sper.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| sper[i])
                    .collect(),
            );
        }
    }
    Some(out)
}

/// Irreducible subsets of the real spectrum, each listed by its cones.
pub type IrreducibleSets = Vec<Vec<PrimeCone>>;

/// Sections together with the irreducible sets, checking that the latter
/// are exactly the graphs of the former.
pub fn sections_and_irreducible_sets(
    a: &ComputedSubring,
) -> Result<(Vec<Section>, Option<IrreducibleSets>)> {
    let secs = sections(a);
    let sets = irreducible_sets(a);
    if let Some(sets) = &sets {
        let graphs: BTreeSet<Vec<PrimeCone>> = secs.iter().map(|s| s.cones.clone()).collect();
        let found: BTreeSet<Vec<PrimeCone>> = sets.iter().cloned().collect();
        if graphs != found || sets.len() != secs.len() {
            return Err(Error::TheoremViolation(format!(
                "{} sections but {} irreducible sets",
                secs.len(),
                sets.len()
            )));
        }
    }
    Ok((secs, sets))
}

/// Restriction of a cone of `c ⊇ a` to `a`.
pub fn restrict_cone(
    a: &ComputedSubring,
    c: &ComputedSubring,
    cone: PrimeCone,
) -> Result<PrimeCone> {
    let (prime, embedding) = restrict_embedding(a, c, cone.prime, cone.embedding)?;
    Ok(PrimeCone { prime, embedding })
}

/// The unique cone of `c` with support `q` lying over `alpha`.
pub fn extend_cone(
    a: &ComputedSubring,
    alpha: PrimeCone,
    c: &ComputedSubring,
    q: usize,
) -> Result<PrimeCone> {
    if q >= c.minimal_primes().len() || contraction(a, c, q) != alpha.prime {
        return Err(Error::NotLyingOver);
    }
    let mut found = Vec::new();
    for k in 0..c.prime(q).num_orderings() {
        let cone = PrimeCone {
            prime: q,
            embedding: k,
        };
        if restrict_cone(a, c, cone)? == alpha {
            found.push(cone);
        }
    }
    match found.as_slice() {
        [one] => Ok(*one),
        [] => Err(Error::TheoremViolation(format!(
            "no cone over prime {q} extends {alpha}"
        ))),
        _ => Err(Error::TheoremViolation(format!(
            "{} cones over prime {q} extend {alpha}",
            found.len()
        ))),
    }
}

fn check_over_ring(a: &ComputedSubring, c: &ComputedSubring) -> Result<()> {
    if !c.same_ambient(a) || !c.contains_ring(a)? {
        return Err(Error::Precondition(
            "the smaller ring is not contained in the larger one".into(),
        ));
    }
    Ok(())
}

/// Checks that `Sper C -> {(q, α) : q ∩ A = supp α}` given by
/// `α̃ ↦ (supp α̃, α̃ ∩ A)` is a bijection.
pub fn verify_fiber_product(a: &ComputedSubring, c: &ComputedSubring) -> Result<SpectralReport> {
    check_over_ring(a, c)?;
    if a.mode() == Mode::Order && c.mode() == Mode::Algebra {
        return Err(Error::Precondition(
            "larger ring is a Q-algebra over an order, so it is not integral".into(),
        ));
    }
    let sper_a = real_spectrum(a);
    let sper_c = real_spectrum(c);
    let mut fiber: BTreeSet<(usize, PrimeCone)> = BTreeSet::new();
    for q in c.minimal_primes() {
        let p = contraction(a, c, q.id);
        for alpha in sper_a.iter().filter(|al| al.prime == p) {
            fiber.insert((q.id, *alpha));
        }
    }
    let mut image = BTreeSet::new();
    let mut pairs = Vec::new();
    for cone in &sper_c {
        let alpha = restrict_cone(a, c, *cone)?;
        image.insert((cone.prime, alpha));
        pairs.push(format!("{cone} -> (q{}, {alpha})", cone.prime));
    }
    let injective = image.len() == sper_c.len();
    let onto = image == fiber;
    let mut report = SpectralReport::default();
    report.push(Check::new(
        "integrality",
        true,
        "larger ring is module-finite over the smaller one; only minimal primes of C are involved",
    ));
    report.push(
        Check::new(
            "fiber-bijection",
            injective && onto,
            format!(
                "|Sper C| = {}, |fiber set| = {}, injective: {injective}, onto: {onto}",
                sper_c.len(),
                fiber.len()
            ),
        )
        .with_witnesses(pairs),
    );
    for q in c.minimal_primes() {
        let p = contraction(a, c, q.id);
        for alpha in sper_a.iter().filter(|al| al.prime == p) {
            let ext = extend_cone(a, *alpha, c, q.id)?;
            let ok = ext.prime == q.id && restrict_cone(a, c, ext)? == *alpha;
            if !ok {
                report.push(Check::new(
                    "extension",
                    false,
                    format!("extension of {alpha} to q{} is {ext}", q.id),
                ));
            }
        }
    }
    report.push(Check::new(
        "topology",
        true,
        "both spectra are finite and discrete, so the homeomorphism is the bijection above",
    ));
    Ok(report)
}

fn zero_primes(r: &ComputedSubring, x: &Element) -> BTreeSet<usize> {
    r.minimal_primes()
        .iter()
        .filter(|p| x.coord(p.realized_in()).is_zero())
        .map(|p| p.id)
        .collect()
}

/// Spectral facts for an essential extension `a ⊆ b`, restricted to the
/// minimal primes: `φ(V_B(x) ∩ Ỹ) = V_A(x) ∩ Y`, the same for `D`, and
/// bijectivity of `φ: Ỹ -> Y`.
pub fn verify_essext(
    a: &ComputedSubring,
    b: &ComputedSubring,
    samples: &[Element],
) -> Result<SpectralReport> {
    if let Some(block) = essential_violation(a, b)? {
        return Err(Error::NotEssential { block });
    }
    let phi: Vec<usize> = b
        .minimal_primes()
        .iter()
        .map(|q| contraction(a, b, q.id))
        .collect();
    let y: BTreeSet<usize> = (0..a.minimal_primes().len()).collect();
    let image: BTreeSet<usize> = phi.iter().copied().collect();
    let mut report = SpectralReport::default();

    let mut failures = Vec::new();
    for x in samples {
        if !membership(a, x)? {
            return Err(Error::Precondition(format!(
                "sample {x} is not in the smaller ring"
            )));
        }
        let vb = zero_primes(b, x);
        let va = zero_primes(a, x);
        let pushed_v: BTreeSet<usize> = vb.iter().map(|&q| phi[q]).collect();
        let db: BTreeSet<usize> = (0..phi.len()).filter(|q| !vb.contains(q)).collect();
        let da: BTreeSet<usize> = y.difference(&va).copied().collect();
        let pushed_d: BTreeSet<usize> = db.iter().map(|&q| phi[q]).collect();
        if pushed_v != va || pushed_d != da {
            failures.push(format!(
                "{x}: φ(V) = {pushed_v:?}, V = {va:?}, φ(D) = {pushed_d:?}, D = {da:?}"
            ));
        }
    }
    report.push(
        Check::new(
            "closed-set-images",
            failures.is_empty(),
            format!("{} samples, {} failures", samples.len(), failures.len()),
        )
        .with_witnesses(failures),
    );
    let bijective = image == y && phi.len() == y.len();
    report.push(
        Check::new(
            "irreducible-surjection",
            bijective,
            format!(
                "|Ỹ| = {}, |Y| = {}, |φ(Ỹ)| = {}",
                phi.len(),
                y.len(),
                image.len()
            ),
        )
        .with_witnesses(
            phi.iter()
                .enumerate()
                .map(|(q, p)| format!("q{q} -> p{p}"))
                .collect(),
        ),
    );
    report.push(Check::new(
        "density",
        true,
        "verified at the minimal level only: Ỹ is all of MinSpec B",
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::etale::{
        baer_hull, close_subring, Ambient, NumberField, ProductAlgebra, SubringPresentation,
    };
    use crate::exact::Poly;

    fn ring(amb: &Ambient, gens: Vec<Element>, mode: Mode) -> ComputedSubring {
        close_subring(&SubringPresentation::new(amb.clone(), gens, mode).unwrap()).unwrap()
    }

    fn k2k2() -> Ambient {
        let k = NumberField::new("K2", Poly::from_ints(&[-2, 0, 1])).unwrap();
        Arc::new(ProductAlgebra::new(vec![k.clone(), k]).unwrap())
    }

    fn a2() -> ComputedSubring {
        let amb = k2k2();
        let gens = vec![
            amb.element(vec![Poly::t(), Poly::zero()]).unwrap(),
            amb.element(vec![Poly::zero(), Poly::t()]).unwrap(),
        ];
        ring(&amb, gens, Mode::Order)
    }

    #[test]
    fn spectrum_sizes() {
        let amb = k2k2();
        let a1 = ring(
            &amb,
            vec![amb.element(vec![Poly::t(), -Poly::t()]).unwrap()],
            Mode::Order,
        );
        assert_eq!(real_spectrum(&a1).len(), 2);
        assert_eq!(sections(&a1).len(), 2);
        let (secs, sets) = sections_and_irreducible_sets(&a2()).unwrap();
        assert_eq!(secs.len(), 4);
        assert_eq!(sets.unwrap().len(), 4);
    }

    #[test]
    fn fiber_product_for_baer_hull() {
        let a = a2();
        let b = baer_hull(&a).unwrap();
        let report = verify_fiber_product(&a, &b).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(real_spectrum(&b).len(), 4);
        let same = verify_fiber_product(&a, &a).unwrap();
        assert!(same.passed());
    }

    #[test]
    fn extension_keeps_the_root() {
        let a = a2();
        let b = baer_hull(&a).unwrap();
        for alpha in real_spectrum(&a) {
            let q = b.prime_of_coordinate(a.prime(alpha.prime).coordinate_set[0]);
            let ext = extend_cone(&a, alpha, &b, q).unwrap();
            assert_eq!(restrict_cone(&a, &b, ext).unwrap(), alpha);
        }
        let other = b.prime_of_coordinate(1);
        let alpha = PrimeCone {
            prime: a.prime_of_coordinate(0),
            embedding: 0,
        };
        if a.prime_of_coordinate(1) != alpha.prime {
            assert_eq!(extend_cone(&a, alpha, &b, other), Err(Error::NotLyingOver));
        }
    }

    #[test]
    fn essext_on_parity_ring() {
        let amb: Ambient =
            Arc::new(ProductAlgebra::new(vec![NumberField::rationals(); 2]).unwrap());
        let a0 = ring(&amb, vec![amb.from_ints(&[0, 2]).unwrap()], Mode::Order);
        let b = baer_hull(&a0).unwrap();
        let mut samples = a0.basis().to_vec();
        samples.push(amb.zero());
        let report = verify_essext(&a0, &b, &samples).unwrap();
        assert!(report.passed(), "{report:?}");

        let diag = ring(&amb, vec![], Mode::Algebra);
        let full = ring(&amb, vec![amb.idempotent(&[0])], Mode::Algebra);
        assert_eq!(
            verify_essext(&diag, &full, &[]),
            Err(Error::NotEssential { block: 0 })
        );
    }
}
