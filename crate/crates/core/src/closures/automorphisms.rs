use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::etale::idempotents::{idempotents, squarefree_decomposition};
use crate::etale::{membership, ComputedSubring, Element, MinimalPrime, NumberField};
use crate::exact::complex::{complex_roots, GaussianRational};
use crate::exact::linalg;
use crate::exact::rational::{self, Rational};
use crate::exact::Poly;

/// Image of block `source` in block `target`: the residue generator of the
/// source goes to `image`, an element of the target's residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMap {
    pub source: usize,
    pub target: usize,
    pub image: Poly,
}

/// A ring automorphism of `C (x) Q`, given blockwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMap {
    pub blocks: Vec<BlockMap>,
}

impl RingMap {
    pub fn apply(&self, c: &ComputedSubring, x: &Element) -> Option<Element> {
        let amb = c.ambient();
        let mut out = amb.zero();
        for b in &self.blocks {
            let u = c.prime(b.source).residue_coords(amb, x)?;
            let target = c.prime(b.target);
            let v = u.compose_mod(&b.image, target.residue.minpoly());
            out = amb.add(&out, &target.lift(amb, &v));
        }
        Some(out)
    }

    pub fn is_identity(&self, c: &ComputedSubring) -> bool {
        self.blocks.iter().all(|b| {
            b.source == b.target && b.image == c.prime(b.source).residue.reduce(&Poly::t())
        })
    }
}

#[derive(Clone, Debug)]
pub struct AutomorphismReport {
    pub maps: Vec<RingMap>,
    /// Reasons some candidates could not be decided.
    pub undecided: Vec<String>,
    /// Every returned map fixes the idempotents of `C`.
    pub fixes_idempotents: bool,
    /// `C` equals the Baer hull of `A`, so every map must be the identity.
    pub baer_hull: bool,
    pub rigid: bool,
}

/// Bounds for numeric-guided reconstruction of residue field isomorphisms.
#[derive(Clone, Debug)]
pub struct ReconstructionConfig {
    /// Width of the root intervals used as interpolation nodes.
    pub width: Rational,
    pub max_denominator: BigInt,
}

impl Default for ReconstructionConfig {
    fn default() -> Self {
        ReconstructionConfig {
            width: Rational::new(BigInt::one(), BigInt::from(10u64).pow(12)),
            max_denominator: BigInt::from(1_000_000u64),
        }
    }
}

fn same_square_class(a: &Rational, b: &Rational) -> bool {
    if a.is_zero() || b.is_zero() {
        return a == b;
    }
    let prod: BigInt = a.numer() * a.denom() * b.numer() * b.denom();
    if prod < BigInt::zero() {
        return false;
    }
    squarefree_decomposition(&prod).1.is_one()
}

fn plausibly_isomorphic(f: &NumberField, g: &NumberField) -> bool {
    f.degree() == g.degree()
        && f.num_orderings() == g.num_orderings()
        && same_square_class(&f.discriminant(), &g.discriminant())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn midpoint(lo: &Rational, hi: &Rational) -> Rational {
    (lo + hi) / Rational::from_integer(2.into())
}

/// Field isomorphisms `source -> target`, as images of the source
/// generator. `Err` carries the reason when the search cannot decide.
fn field_isomorphisms(
    source: &NumberField,
    target: &NumberField,
    config: &ReconstructionConfig,
) -> std::result::Result<Vec<Poly>, String> {
    if source.degree() == 1 {
        return Ok(if target.degree() == 1 {
            vec![target.reduce(&Poly::t())]
        } else {
            vec![]
        });
    }
    if !plausibly_isomorphic(source, target) {
        return Ok(vec![]);
    }
    // Composing with an isomorphism permutes real embeddings, so one real
    // embedding's image pins it down: at most `num_orderings` of them.
    let r = target.num_orderings();
    if r == 1 && source.minpoly() == target.minpoly() {
        return Ok(vec![target.reduce(&Poly::t())]);
    }
    let (Some(xs), Some(ys)) = (nodes(target, config), nodes(source, config)) else {
        return Err(format!(
            "complex roots of {} or {} did not converge",
            source.name(),
            target.name()
        ));
    };
    // One interpolation condition per real node and two per conjugate pair,
    // so the coefficients of the image solve a real square system.
    let d = target.degree();
    let upper: Vec<usize> = (r..d).filter(|&i| xs[i].im.is_positive()).collect();
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(d);
    let powers = |z: &GaussianRational| {
        let mut p = GaussianRational::one();
        (0..d)
            .map(|_| {
                let cur = p.clone();
                p = &p * z;
                cur
            })
            .collect::<Vec<_>>()
    };
    for x in &xs[..r] {
        rows.push(powers(x).into_iter().map(|z| z.re).collect());
    }
    for &i in &upper {
        let zs = powers(&xs[i]);
        rows.push(zs.iter().map(|z| z.re.clone()).collect());
        rows.push(zs.into_iter().map(|z| z.im).collect());
    }
    let Some(inv) = linalg::inverse(&rows) else {
        return Err(format!(
            "interpolation nodes of {} are too close",
            target.name()
        ));
    };
    let mut found = Vec::new();
    for real in permutations(r) {
        for complex in permutations(d - r) {
            let mut values: Vec<Rational> = real.iter().map(|&j| ys[j].re.clone()).collect();
            for (k, _) in upper.iter().enumerate() {
                let w = &ys[r + complex[k]];
                values.push(w.re.clone());
                values.push(w.im.clone());
            }
            let coeffs = linalg::mat_vec(&inv, &values);
            let h = Poly::new(
                coeffs
                    .iter()
                    .map(|c| rational::reconstruct(c, &config.max_denominator))
                    .collect(),
            );
            if source.minpoly().compose_mod(&h, target.minpoly()).is_zero() && !found.contains(&h) {
                found.push(h);
            }
        }
    }
    // Fewer than the bound cannot be told apart from a reconstruction failure.
    if found.len() < r {
        return Err(format!(
            "{} of at most {r} isomorphisms {} -> {} reconstructed within the bounds",
            found.len(),
            source.name(),
            target.name()
        ));
    }
    Ok(found)
}

/// Roots of the minimal polynomial: real roots in increasing order, then
/// the non-real ones.
fn nodes(field: &NumberField, config: &ReconstructionConfig) -> Option<Vec<GaussianRational>> {
    let real: Vec<GaussianRational> = field
        .real_roots()
        .iter()
        .map(|root| {
            let root = root.refine(&config.width).expect("positive width");
            GaussianRational::new(midpoint(root.lo(), root.hi()), Rational::zero())
        })
        .collect();
    if field.is_totally_real() {
        return Some(real);
    }
    let bits = config.width.recip().to_integer().bits() + 64;
    let mut all = complex_roots(field.minpoly(), bits)?;
    all.sort_by_key(|z| z.im.abs());
    let mut out = real;
    out.extend(all.split_off(field.num_orderings()));
    Some(out)
}

/// Enumerates automorphisms of `c` fixing `a` pointwise and checks that
/// they are rigid: each fixes `E(c)`, and is the identity when `c` is the
/// Baer hull of `a`.
pub fn a_automorphisms(a: &ComputedSubring, c: &ComputedSubring) -> Result<AutomorphismReport> {
    a_automorphisms_with(a, c, &ReconstructionConfig::default())
}

pub fn a_automorphisms_with(
    a: &ComputedSubring,
    c: &ComputedSubring,
    config: &ReconstructionConfig,
) -> Result<AutomorphismReport> {
    if !c.same_ambient(a) || !c.contains_ring(a)? {
        return Err(crate::Error::Precondition("A is not contained in C".into()));
    }
    let primes: &[MinimalPrime] = c.minimal_primes();
    let n = primes.len();
    let mut undecided = Vec::new();
    let mut isos: Vec<Vec<Vec<Poly>>> = vec![vec![Vec::new(); n]; n];
    for (s, sp) in primes.iter().enumerate() {
        for (t, tp) in primes.iter().enumerate() {
            match field_isomorphisms(&sp.residue, &tp.residue, config) {
                Ok(list) => isos[s][t] = list,
                Err(reason) => {
                    // Equal presentations always admit `t -> t`; only the rest is undecided.
                    if sp.residue.minpoly() == tp.residue.minpoly() {
                        isos[s][t] = vec![tp.residue.reduce(&Poly::t())];
                    }
                    undecided.push(format!("blocks {s} -> {t}: {reason}"));
                }
            }
        }
    }
    let mut maps = Vec::new();
    for perm in permutations(n) {
        let choices: Vec<&Vec<Poly>> = (0..n).map(|s| &isos[s][perm[s]]).collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut idx = vec![0; n];
        loop {
            let map = RingMap {
                blocks: (0..n)
                    .map(|s| BlockMap {
                        source: s,
                        target: perm[s],
                        image: choices[s][idx[s]].clone(),
                    })
                    .collect(),
            };
            if is_automorphism_over(a, c, &map)? {
                maps.push(map);
            }
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
            }
            if idx.iter().all(|&x| x == 0) {
                break;
            }
        }
    }
    let fixed = idempotents(c);
    let fixes_idempotents = maps
        .iter()
        .all(|m| fixed.iter().all(|e| m.apply(c, e).as_ref() == Some(e)));
    let hull = crate::etale::baer_hull(a)?;
    let baer_hull = hull.echelon() == c.echelon();
    let rigid = fixes_idempotents && (!baer_hull || maps.iter().all(|m| m.is_identity(c)));
    Ok(AutomorphismReport {
        maps,
        undecided,
        fixes_idempotents,
        baer_hull,
        rigid,
    })
}

fn is_automorphism_over(a: &ComputedSubring, c: &ComputedSubring, map: &RingMap) -> Result<bool> {
    for x in a.basis() {
        if map.apply(c, x).as_ref() != Some(x) {
            return Ok(false);
        }
    }
    let amb = c.ambient();
    let mut images = Vec::new();
    for x in c.basis() {
        let Some(y) = map.apply(c, x) else {
            return Ok(false);
        };
        if !membership(c, &y)? {
            return Ok(false);
        }
        images.push(amb.to_vector(&y));
    }
    let span = match c.mode() {
        crate::etale::Mode::Order => linalg::hnf_rational(&images),
        crate::etale::Mode::Algebra => linalg::rref(&images),
    };
    Ok(&span == c.echelon())
}
