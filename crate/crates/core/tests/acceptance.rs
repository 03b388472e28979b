//! Acceptance suite: one pass/fail line per criterion, each checked against
//! its runtime budget. Runs as a plain binary so the lines always print.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poring_lab::cli::run::random_monic_odd;
use poring_lab::closures::census::{
    CLOSURES_OF_A, CLOSURES_OF_B, CLOSURES_OF_T, MAXPO_OF_A, MAXPO_OF_B,
};
use poring_lab::closures::{
    a_automorphisms, closures_census, odd_root, verify_odd_root, ClosureDescriptor, KPoly,
};
use poring_lab::cones::{
    cone_member, default_probes, maximality_check, restrict_maxpo, OrderingCone,
};
use poring_lab::corpus::{named, named_fixtures, random_gluings, Fixture};
use poring_lab::etale::primes::contraction;
use poring_lab::etale::{
    baer_hull, is_baer, lattice_ops, membership, total_idempotents, ComputedSubring, Element,
};
use poring_lab::exact::{real_roots, sign_at, Poly, Rational, Sign};
use poring_lab::lp::{Relation, SignSystem};
use poring_lab::spectra::{real_spectrum, sections, verify_essext, verify_fiber_product, Section};
use poring_lab::Error;

const SEED: u64 = 20_240_601;
const GLUINGS: usize = 20;
const PROBES: usize = 20;
const ODD_ROOTS_PER_DESCRIPTOR: usize = 100;
const LATTICE_SAMPLES: usize = 100;

type Outcome = Result<String, String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn lib<T>(r: poring_lab::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Corpus {
    named: Vec<Fixture>,
    gluings: Vec<Fixture>,
}

impl Corpus {
    fn all(&self) -> impl Iterator<Item = &Fixture> {
        self.named.iter().chain(&self.gluings)
    }
}

/// Exact sign of a residue under one embedding, computed from the defining
/// polynomial directly rather than through the field's fast path.
fn exact_sign(a: &ComputedSubring, prime: usize, embedding: usize, x: &Element) -> Option<Sign> {
    let p = a.prime(prime);
    let u = p.residue_coords(a.ambient(), x)?;
    Some(sign_at(
        &p.residue.reduce(&u),
        &p.residue.real_roots()[embedding],
    ))
}

fn orderings_product(a: &ComputedSubring) -> usize {
    a.minimal_primes()
        .iter()
        .map(|p| p.num_orderings())
        .product()
}

fn criterion_1(corpus: &Corpus) -> Outcome {
    let mut rings: Vec<&Fixture> = ["A0", "A1", "A2"]
        .iter()
        .map(|n| {
            corpus
                .named
                .iter()
                .find(|f| f.name == *n)
                .expect("named fixture")
        })
        .collect();
    rings.extend(&corpus.gluings);
    let mut tables = 0;
    let mut witnesses = 0;
    for f in rings {
        let a = f.ring();
        let b = lib(baer_hull(a))?;
        let t = lib(a.rational_span())?;
        for (label, upper) in [("B(A)", &b), ("T(A)", &t)] {
            let table = lib(restrict_maxpo(a, upper))?;
            let expected = orderings_product(a);
            ensure(table.entries.len() == expected, || {
                format!(
                    "{} over {label}: {} entries, {expected} expected",
                    f.name,
                    table.entries.len()
                )
            })?;
            let lowers: BTreeSet<&Section> = table.entries.iter().map(|e| &e.lower).collect();
            ensure(lowers.len() == expected, || {
                format!("{} over {label}: repeated restriction", f.name)
            })?;
            let mut covered = BTreeSet::new();
            for w in &table.witnesses {
                let l = table.entries[w.left].lower.embedding(w.prime);
                let r = table.entries[w.right].lower.embedding(w.prime);
                let in_a = lib(membership(a, &w.element))?;
                let (sl, sr) = (
                    exact_sign(a, w.prime, l, &w.element),
                    exact_sign(a, w.prime, r, &w.element),
                );
                ensure(
                    in_a && sl == Some(w.left_sign)
                        && sr == Some(w.left_sign.flip())
                        && sl != Some(Sign::Zero),
                    || {
                        format!(
                            "{} over {label}: witness {} does not separate {} and {}",
                            f.name, w.element, w.left, w.right
                        )
                    },
                )?;
                covered.insert((w.left, w.right));
            }
            ensure(covered.len() == expected * (expected - 1) / 2, || {
                format!(
                    "{} over {label}: only {} of the pairs have witnesses",
                    f.name,
                    covered.len()
                )
            })?;
            tables += 1;
            witnesses += table.witnesses.len();
        }
    }
    Ok(format!(
        "{tables} tables, {witnesses} separating witnesses re-verified"
    ))
}

fn witness_holds(
    cone: &OrderingCone,
    a: &ComputedSubring,
    x: &Element,
    w: &Element,
) -> Result<bool, String> {
    let amb = a.ambient();
    let product = amb.mul(x, w);
    Ok(lib(membership(a, w))?
        && lib(cone_member(cone, w))?
        && lib(cone_member(cone, &amb.neg(&product)))?
        && !product.is_zero())
}

fn coarser_families(secs: &[Section]) -> Vec<Vec<Section>> {
    let n = secs.len();
    if n <= 4 {
        return (0u32..1 << n)
            .filter(|m| m.count_ones() >= 2)
            .map(|m| {
                (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| secs[i].clone())
                    .collect()
            })
            .collect();
    }
    let mut out: Vec<Vec<Section>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(vec![secs[i].clone(), secs[j].clone()]);
        }
    }
    out.push(secs.to_vec());
    out
}

fn criterion_2(corpus: &Corpus) -> Outcome {
    let (mut maximal, mut coarser, mut reverified) = (0, 0, 0);
    for (i, f) in corpus.all().enumerate() {
        let a = f.ring();
        let probes = default_probes(a, SEED + i as u64, PROBES);
        let secs = sections(a);
        for s in &secs {
            let cone = OrderingCone::from_section(a, s);
            let report = lib(maximality_check(&cone, &probes))?;
            ensure(report.passed(), || {
                format!(
                    "{}: section {s} extended by {:?}",
                    f.name, report.counterexamples
                )
            })?;
            for (x, w) in &report.blocked {
                ensure(witness_holds(&cone, a, x, w)?, || {
                    format!("{}: witness {w} for {x} fails", f.name)
                })?;
                reverified += 1;
            }
            maximal += 1;
        }
        for family in coarser_families(&secs) {
            let cone = lib(OrderingCone::intersection(a, &family))?;
            let report = lib(maximality_check(&cone, &probes))?;
            ensure(!report.passed(), || {
                format!(
                    "{}: intersection of {} sections looks maximal",
                    f.name,
                    family.len()
                )
            })?;
            for x in &report.counterexamples {
                ensure(!lib(cone_member(&cone, x))?, || {
                    format!("{}: counterexample {x} is inside the cone", f.name)
                })?;
            }
            coarser += 1;
        }
    }
    Ok(format!("{maximal} section cones maximal, {coarser} coarser cones refuted, {reverified} LP witnesses re-verified"))
}

fn criterion_3(corpus: &Corpus) -> Outcome {
    let mut pairs = 0;
    for f in corpus.all() {
        let a = f.ring();
        let c = lib(a.adjoin(&total_idempotents(a)))?;
        let report = lib(verify_fiber_product(a, &c))?;
        ensure(report.passed(), || {
            format!(
                "{}: {:?}",
                f.name,
                report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .collect::<Vec<_>>()
            )
        })?;
        // Fiber product size: cones of A times primes of C over their support.
        let fiber: usize = real_spectrum(a)
            .iter()
            .map(|alpha| {
                (0..c.minimal_primes().len())
                    .filter(|&q| contraction(a, &c, q) == alpha.prime)
                    .count()
            })
            .sum();
        let larger = real_spectrum(&c).len();
        ensure(fiber == larger, || {
            format!("{}: |Sper C| = {larger}, fiber product has {fiber}", f.name)
        })?;
        if f.name == "A2" {
            ensure(real_spectrum(a).len() == 4 && larger == 4, || {
                format!("A2: sizes {} and {larger}", real_spectrum(a).len())
            })?;
        }
        pairs += 1;
    }
    Ok(format!("{pairs} pairs, A2 has 4 cones on both sides"))
}

fn criterion_4(corpus: &Corpus) -> Outcome {
    let mut fixtures = 0;
    for f in corpus.all() {
        let a = f.ring();
        let report = lib(closures_census(a))?;
        ensure(report.passed(), || {
            format!(
                "{}: {:?}",
                f.name,
                report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .collect::<Vec<_>>()
            )
        })?;
        let expected = orderings_product(a);
        for set in [
            CLOSURES_OF_A,
            CLOSURES_OF_B,
            MAXPO_OF_B,
            MAXPO_OF_A,
            CLOSURES_OF_T,
        ] {
            ensure(report.count(set) == Some(expected), || {
                format!(
                    "{}: {set} has {:?}, {expected} expected",
                    f.name,
                    report.count(set)
                )
            })?;
        }
        for p in &report.pairings {
            let left: BTreeSet<usize> = p.pairs.iter().map(|x| x.0).collect();
            let right: BTreeSet<usize> = p.pairs.iter().map(|x| x.1).collect();
            ensure(
                p.pairs.len() == expected && left.len() == expected && right.len() == expected,
                || {
                    format!(
                        "{}: pairing {} -> {} is not a bijection",
                        f.name, p.from, p.to
                    )
                },
            )?;
        }
        let want = match f.name.as_str() {
            "A2" => Some(4),
            "A1" => Some(2),
            "Q" => Some(1),
            _ => None,
        };
        if let Some(n) = want {
            ensure(expected == n, || {
                format!("{}: common count {expected}, {n} expected", f.name)
            })?;
        }
        fixtures += 1;
    }
    Ok(format!("{fixtures} fixtures, counts A2 = 4, A1 = 2, Q = 1"))
}

/// Independent check of one coordinate: the defining polynomial divides the
/// realized input and changes sign across the isolating interval.
fn coordinate_is_root(
    desc: &ClosureDescriptor,
    g: &[Element],
    prime: usize,
    root: &poring_lab::closures::PrimeRoot,
) -> bool {
    let a = desc.base;
    let p = a.prime(prime);
    let k = &p.residue;
    let Some(coeffs) = g
        .iter()
        .map(|x| p.residue_coords(a.ambient(), x))
        .collect::<Option<Vec<Poly>>>()
    else {
        return false;
    };
    let realized = KPoly::new(coeffs);
    let eval = |q: &Rational| {
        let v = root.defining.eval(q, k);
        sign_at(&k.reduce(&v), k.fine_root(root.embedding))
    };
    if !realized.div_rem(&root.defining, k).1.is_zero() {
        return false;
    }
    match root.as_rational() {
        Some(q) => realized.eval(q, k).is_zero(),
        None => {
            root.lo < root.hi
                && eval(&root.lo) == eval(&root.hi).flip()
                && eval(&root.hi) != Sign::Zero
        }
    }
}

fn criterion_5(corpus: &Corpus) -> Outcome {
    let mut total = 0;
    let mut descriptors = 0;
    for (i, f) in corpus.named.iter().enumerate() {
        let a = f.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + i as u64);
        for desc in ClosureDescriptor::all(a) {
            for _ in 0..ODD_ROOTS_PER_DESCRIPTOR {
                let g = random_monic_odd(a, &mut rng);
                let root = lib(odd_root(&desc, &g))?;
                ensure(lib(verify_odd_root(&desc, &g, &root))?, || {
                    format!("{}: {desc} root fails verification", f.name)
                })?;
                for c in &root.coords {
                    ensure(c.embedding == desc.section.embedding(c.prime), || {
                        format!("{}: {desc} wrong embedding", f.name)
                    })?;
                    ensure(coordinate_is_root(&desc, &g, c.prime, c), || {
                        format!("{}: {desc} coordinate {} fails", f.name, c.prime)
                    })?;
                }
                total += 1;
            }
            descriptors += 1;
        }
    }
    Ok(format!(
        "{total} roots over {descriptors} descriptors, all exact"
    ))
}

fn criterion_6(corpus: &Corpus) -> Outcome {
    let quadratic = |a: &ComputedSubring| a.minimal_primes().iter().any(|p| p.degree() == 2);
    let mut checked = Vec::new();
    for f in corpus.all() {
        let a = f.ring();
        if !(f.name == "A0" || f.name == "A2" || quadratic(a)) {
            continue;
        }
        let b = lib(baer_hull(a))?;
        let report = lib(a_automorphisms(a, &b))?;
        ensure(report.undecided.is_empty(), || {
            format!("{}: undecided {:?}", f.name, report.undecided)
        })?;
        ensure(
            report.maps.len() == 1 && report.maps[0].is_identity(&b),
            || format!("{}: {} automorphisms over A", f.name, report.maps.len()),
        )?;
        // The identity map must fix every basis element of B(A).
        for x in b.basis() {
            ensure(report.maps[0].apply(&b, x).as_ref() == Some(x), || {
                format!("{}: identity moves {x}", f.name)
            })?;
        }
        checked.push(f.name.clone());
    }
    Ok(format!(
        "{} rings rigid: {}",
        checked.len(),
        checked.join(", ")
    ))
}

fn samples(a: &ComputedSubring, rng: &mut ChaCha8Rng, count: usize) -> Vec<Element> {
    let amb = a.ambient();
    let mut out = a.basis().to_vec();
    for _ in 0..count {
        out.push(a.basis().iter().fold(amb.zero(), |acc, b| {
            let c = Rational::from_integer(rng.random_range(-3i64..=3).into());
            amb.add(&acc, &amb.scale(&c, b))
        }));
    }
    out
}

fn criterion_7(corpus: &Corpus) -> Outcome {
    let mut pairs = 0;
    for (i, f) in corpus.all().enumerate() {
        let a = f.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + i as u64);
        let xs = samples(a, &mut rng, 10);
        for b in [lib(baer_hull(a))?, lib(a.rational_span())?] {
            let report = lib(verify_essext(a, &b, &xs))?;
            ensure(report.passed(), || {
                format!(
                    "{}: {:?}",
                    f.name,
                    report
                        .checks
                        .iter()
                        .filter(|c| !c.passed)
                        .collect::<Vec<_>>()
                )
            })?;
            pairs += 1;
        }
    }
    let diag = named("diag");
    let small = diag.ring();
    let big = lib(diag.model.subring("QQ2"))?;
    match verify_essext(small, big, small.basis()) {
        Err(Error::NotEssential { block }) => Ok(format!(
            "{pairs} essential pairs certified, diagonal rejected at block {block}"
        )),
        Ok(r) if !r.passed() => Ok(format!(
            "{pairs} essential pairs certified, diagonal rejected"
        )),
        other => Err(format!("diagonal Q in Q^2 accepted: {other:?}")),
    }
}

fn criterion_8(corpus: &Corpus) -> Outcome {
    let mut checked = 0;
    let mut regular = 0;
    for (i, f) in corpus.all().enumerate() {
        let a = f.ring();
        let t = lib(a.rational_span())?;
        let amb = t.ambient();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + i as u64);
        for _ in 0..LATTICE_SAMPLES {
            let x = samples(&t, &mut rng, 1).pop().expect("one sample");
            let y = samples(&t, &mut rng, 1).pop().expect("one sample");
            let section: Vec<usize> = (0..amb.len())
                .map(|j| rng.random_range(0..amb.factor(j).num_orderings()))
                .collect();
            let ops = lib(lattice_ops(amb, &section, &x, &y))?;
            for (j, &e) in section.iter().enumerate() {
                let k = amb.factor(j);
                let sign = |v: &Poly| sign_at(&k.reduce(v), &k.real_roots()[e]);
                let x_wins = sign(&(x.coord(j) - y.coord(j))) != Sign::Negative;
                let (hi, lo) = if x_wins {
                    (x.coord(j), y.coord(j))
                } else {
                    (y.coord(j), x.coord(j))
                };
                ensure(ops.sup.coord(j) == hi && ops.inf.coord(j) == lo, || {
                    format!("{}: sup/inf wrong at {j}", f.name)
                })?;
                let pos = if sign(x.coord(j)) == Sign::Negative {
                    Poly::zero()
                } else {
                    x.coord(j).clone()
                };
                ensure(*ops.pos_part.coord(j) == pos, || {
                    format!("{}: x+ wrong at {j}", f.name)
                })?;
            }
            ensure(amb.sub(&ops.pos_part, &ops.neg_part) == x, || {
                format!("{}: x+ - x- != x", f.name)
            })?;
            ensure(amb.mul(&ops.pos_part, &ops.neg_part).is_zero(), || {
                format!("{}: x+ x- != 0", f.name)
            })?;
            ensure(amb.add(&ops.sup, &ops.inf) == amb.add(&x, &y), || {
                format!("{}: sup + inf != x + y", f.name)
            })?;
            checked += 1;
        }
        let mut baer = vec![lib(baer_hull(a))?];
        if is_baer(a) {
            baer.push(a.clone());
        }
        for c in &baer {
            ensure(is_baer(c), || format!("{}: Baer hull is not Baer", f.name))?;
            let tc = lib(c.rational_span())?;
            for x in samples(&tc, &mut rng, LATTICE_SAMPLES) {
                let q = amb.quasi_inverse(&x);
                let inverse: Option<Vec<Poly>> = x
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(j, u)| {
                        if u.is_zero() {
                            Some(Poly::zero())
                        } else {
                            amb.factor(j).inverse(u)
                        }
                    })
                    .collect();
                let expected = inverse.and_then(|v| amb.element(v).ok());
                ensure(expected.as_ref() == Some(&q), || {
                    format!("{}: quasi-inverse of {x} is {q}", f.name)
                })?;
                ensure(
                    amb.mul(&amb.mul(&x, &q), &x) == x && tc.in_rational_span(&q),
                    || format!("{}: {x} has no quasi-inverse in T", f.name),
                )?;
                regular += 1;
            }
        }
    }
    Ok(format!(
        "{checked} lattice samples, {regular} regularity samples"
    ))
}

fn criterion_9() -> Outcome {
    let wilkinson = (1..=7).fold(Poly::one(), |acc, k| &acc * &Poly::from_ints(&[-k, 1]));
    let table: Vec<(&str, Poly, usize)> = vec![
        ("x^2 - 2", Poly::from_ints(&[-2, 0, 1]), 2),
        ("x^2 + 1", Poly::from_ints(&[1, 0, 1]), 0),
        ("(x-1)...(x-7)", wilkinson.clone(), 7),
        ("x", Poly::from_ints(&[0, 1]), 1),
        ("x^3 - 2", Poly::from_ints(&[-2, 0, 0, 1]), 1),
        ("x^4 - 10x^2 + 1", Poly::from_ints(&[1, 0, -10, 0, 1]), 4),
        ("x^5 - x - 1", Poly::from_ints(&[-1, -1, 0, 0, 0, 1]), 1),
        ("x^4 + 1", Poly::from_ints(&[1, 0, 0, 0, 1]), 0),
        ("x^3 - 3x + 1", Poly::from_ints(&[1, -3, 0, 1]), 3),
        (
            "6x^3 - 29x^2 - 7x + 10",
            Poly::from_ints(&[10, -7, -29, 6]),
            3,
        ),
    ];
    for (name, p, count) in &table {
        let roots = lib(real_roots(p))?;
        ensure(roots.len() == *count, || {
            format!("{name}: {} roots, {count} expected", roots.len())
        })?;
        for r in &roots {
            ensure(sign_at(p, r) == Sign::Zero, || {
                format!("{name}: isolated value is not a root")
            })?;
        }
    }
    let roots = lib(real_roots(&wilkinson))?;
    for (k, r) in (1..=7).zip(&roots) {
        let q = Rational::from_integer(k.into());
        ensure(r.cmp_rational(&q).is_eq(), || {
            format!("Wilkinson root {k} misplaced")
        })?;
    }
    let rational = lib(real_roots(&table[9].1))?;
    let expected = [
        Rational::new((-2).into(), 3.into()),
        Rational::new(1.into(), 2.into()),
        Rational::from_integer(5.into()),
    ];
    for (r, q) in rational.iter().zip(&expected) {
        ensure(r.cmp_rational(q).is_eq(), || {
            format!("rational root {q} misplaced")
        })?;
    }

    let systems = lp_oracle_systems();
    let mut feasible = 0;
    for (rows, strict) in &systems {
        let n = rows[0].0.len();
        let s = lib(SignSystem::rational(n, rows, strict.clone()))?;
        let f = lib(s.feasible())?;
        let grid = grid_feasible(rows, strict, 8);
        ensure(f.feasible == grid, || {
            format!(
                "system {rows:?} strict {strict:?}: lp {} grid {grid}",
                f.feasible
            )
        })?;
        if f.feasible {
            let w = f.witness.ok_or("feasible without witness")?;
            ensure(rational_satisfies(rows, strict, &w), || {
                format!("witness {w:?} fails {rows:?}")
            })?;
            feasible += 1;
        }
    }
    Ok(format!(
        "{} polynomials, {} LP systems ({feasible} feasible) agree with the grid",
        table.len(),
        systems.len()
    ))
}

type Rows = Vec<(Vec<i64>, Relation)>;

/// Every system of dimension 1 and 2 with one or two rows and coefficients
/// in `[-1, 1]`, plus seeded random systems of dimension up to 3.
fn lp_oracle_systems() -> Vec<(Rows, Vec<usize>)> {
    let relations = [Relation::Geq, Relation::Leq, Relation::Eq];
    let mut out = Vec::new();
    for n in 1..=2usize {
        let vectors: Vec<Vec<i64>> = (0..3i64.pow(n as u32))
            .map(|m| (0..n).map(|j| (m / 3i64.pow(j as u32)) % 3 - 1).collect())
            .collect();
        for v in &vectors {
            for r in relations {
                out.push((vec![(v.clone(), r)], vec![0]));
                for w in &vectors {
                    for r2 in relations {
                        out.push((vec![(v.clone(), r), (w.clone(), r2)], vec![1]));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..300 {
        let n = rng.random_range(1..=3);
        let m = rng.random_range(1..=4);
        let rows: Rows = (0..m)
            .map(|_| {
                let c = (0..n).map(|_| rng.random_range(-2..=2)).collect();
                (c, relations[rng.random_range(0..3)])
            })
            .collect();
        let mut strict: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.5)).collect();
        if strict.is_empty() {
            strict.push(rng.random_range(0..m));
        }
        out.push((rows, strict));
    }
    out
}

fn dot(c: &[i64], x: &[i64]) -> i64 {
    c.iter().zip(x).map(|(a, b)| a * b).sum()
}

fn holds(rel: Relation, v: i64) -> bool {
    match rel {
        Relation::Geq => v >= 0,
        Relation::Leq => v <= 0,
        Relation::Eq => v == 0,
    }
}

/// Integer points suffice for homogeneous systems: with coefficients in
/// `[-2, 2]` and at most three unknowns, the solution cone is generated by
/// integer vectors with entries bounded by `8`.
fn grid_feasible(rows: &Rows, strict: &[usize], bound: i64) -> bool {
    let n = rows[0].0.len();
    let mut x = vec![-bound; n];
    loop {
        let values: Vec<i64> = rows.iter().map(|(c, _)| dot(c, &x)).collect();
        if rows.iter().zip(&values).all(|((_, r), &v)| holds(*r, v))
            && strict.iter().any(|&j| values[j] != 0)
        {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            x[i] += 1;
            if x[i] <= bound {
                break;
            }
            x[i] = -bound;
            i += 1;
        }
    }
}

fn rational_satisfies(rows: &Rows, strict: &[usize], w: &[Rational]) -> bool {
    let values: Vec<Rational> = rows
        .iter()
        .map(|(c, _)| {
            c.iter()
                .zip(w)
                .map(|(a, b)| Rational::from_integer((*a).into()) * b)
                .sum()
        })
        .collect();
    let zero = Rational::from_integer(0.into());
    rows.iter().zip(&values).all(|((_, r), v)| match r {
        Relation::Geq => *v >= zero,
        Relation::Leq => *v <= zero,
        Relation::Eq => *v == zero,
    }) && strict.iter().any(|&j| values[j] != zero)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = Corpus {
        named: named_fixtures(),
        gluings: random_gluings(SEED, GLUINGS),
    };
    println!(
        "corpus: {} named fixtures, {} seeded gluings (seed {SEED}), built in {} ms",
        corpus.named.len(),
        corpus.gluings.len(),
        start.elapsed().as_millis()
    );
    type Criterion<'a> = (u32, &'a str, u64, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "restriction of maximal orderings",
            10,
            Box::new(|| criterion_1(&corpus)),
        ),
        (
            2,
            "maximality oracle",
            10,
            Box::new(|| criterion_2(&corpus)),
        ),
        (
            3,
            "fiber product after adjoining idempotents",
            5,
            Box::new(|| criterion_3(&corpus)),
        ),
        (4, "closure census", 10, Box::new(|| criterion_4(&corpus))),
        (5, "odd-degree roots", 20, Box::new(|| criterion_5(&corpus))),
        (
            6,
            "rigidity over the Baer hull",
            5,
            Box::new(|| criterion_6(&corpus)),
        ),
        (
            7,
            "essential extensions",
            5,
            Box::new(|| criterion_7(&corpus)),
        ),
        (
            8,
            "lattice identities and regularity",
            5,
            Box::new(|| criterion_8(&corpus)),
        ),
        (9, "root counting and LP oracles", 5, Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (n, title, budget, run) in &criteria {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        let within = elapsed <= Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {n} [{title}]: {status} in {} ms (budget {budget} s): {detail}",
            elapsed.as_millis()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
