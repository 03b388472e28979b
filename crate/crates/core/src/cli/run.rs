//! Executes the directives of a ring file.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use super::dsl::{parse_ring_file, Check as Kind, Directive, ParseError, RingFile};
use super::model::Model;
use super::report::{Record, Report, Status};
use crate::closures::{
    a_automorphisms, closures_census, odd_root, verify_odd_root, ClosureDescriptor,
};
use crate::cones::{
    block_sign, cone_member, default_probes, maximality_check, restrict_maxpo, OrderingCone,
    Properness,
};
use crate::error::{Error, Result};
use crate::etale::{
    baer_hull, idempotents, is_baer, is_integrally_closed_in_t, membership, total_idempotents,
    ComputedSubring, Element,
};
use crate::exact::Rational;
use crate::spectra::{real_spectrum, sections, verify_essext, verify_fiber_product, Check};

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub seed: u64,
    pub parallel: bool,
    /// Record wall-clock time per directive. Off by default so reports are
    /// byte-identical across runs.
    pub timings: bool,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("invalid model: {0}")]
    Model(#[from] Error),
}

/// Default number of random polynomials per descriptor for `odd-root`.
pub const DEFAULT_ODD_ROOT_COUNT: usize = 20;
/// Default number of random probes for the maximality oracle.
pub const DEFAULT_PROBES: usize = 20;

struct Outcome {
    summary: String,
    checks: Vec<Check>,
    data: serde_json::Value,
}

fn property(kind: Kind) -> &'static str {
    match kind {
        Kind::Maxpo => "restriction of maximal orderings is a bijection",
        Kind::AdjoinIdemp => "real spectrum of A[E(T(A))] is the fiber product",
        Kind::Essext => "minimal spectra of an essential extension correspond",
        Kind::Census => "real closures and maximal orderings are in bijection",
        Kind::OddRoot => "monic odd-degree polynomials have glued roots",
        Kind::Rigidity => "automorphisms over A fix the Baer hull",
        Kind::Analyze => "structure summary",
    }
}

/// Parses, builds and runs `text`.
pub fn run_source(
    input: &str,
    text: &str,
    opts: RunOptions,
) -> std::result::Result<Report, RunError> {
    let file = parse_ring_file(text)?;
    let model = Model::build(&file)?;
    let mut report = Report::new(input, text, opts.seed);
    report.records = run(&file, &model, opts);
    Ok(report)
}

pub fn run(file: &RingFile, model: &Model, opts: RunOptions) -> Vec<Record> {
    let directives: Vec<&Directive> = file.directives().collect();
    let exec = |d: &&Directive| execute(d, model, opts);
    if opts.parallel {
        directives.par_iter().map(exec).collect()
    } else {
        directives.iter().map(exec).collect()
    }
}

fn execute(d: &Directive, model: &Model, opts: RunOptions) -> Record {
    let start = Instant::now();
    let seed = opts.seed.wrapping_add(d.line as u64);
    let outcome = dispatch(d, model, seed);
    let elapsed_ms = opts.timings.then(|| start.elapsed().as_millis());
    let id = std::iter::once(d.check.keyword().to_string())
        .chain(d.rings.iter().cloned())
        .collect::<Vec<_>>()
        .join(":");
    let (status, summary, checks, data) = match outcome {
        Ok(o) => {
            let ok = o.checks.iter().all(|c| c.passed);
            (Status::of(ok), o.summary, o.checks, o.data)
        }
        Err(Error::NotEssential { block }) => (
            Status::Fail,
            "not essential".into(),
            vec![Check::new(
                "essential",
                false,
                format!("block {block} meets the smaller ring only in zero"),
            )
            .with_witnesses(vec![format!("block {block}")])],
            json!({ "witness_block": block }),
        ),
        Err(e) => (
            Status::Fail,
            e.to_string(),
            vec![Check::new("precondition", false, e.to_string())],
            serde_json::Value::Null,
        ),
    };
    Record {
        id,
        property: property(d.check).into(),
        line: d.line,
        status,
        summary,
        checks,
        data,
        elapsed_ms,
    }
}

fn usize_option(d: &Directive, key: &str, default: usize) -> Result<usize> {
    match d.option(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::Precondition(format!("option {key}={v} is not a count"))),
    }
}

fn dispatch(d: &Directive, model: &Model, seed: u64) -> Result<Outcome> {
    let a = model.subring(&d.rings[0])?;
    let other = d.rings.get(1).map(|n| model.subring(n)).transpose()?;
    match d.check {
        Kind::Analyze => analyze(a),
        Kind::Maxpo => maxpo(
            a,
            model,
            &d.rings[0],
            seed,
            usize_option(d, "probes", DEFAULT_PROBES)?,
        ),
        Kind::AdjoinIdemp => adjoin_idemp(a),
        Kind::Essext => essext(a, other, seed),
        Kind::Census => census(a),
        Kind::OddRoot => odd_roots(a, seed, usize_option(d, "count", DEFAULT_ODD_ROOT_COUNT)?),
        Kind::Rigidity => rigidity(a, other),
    }
}

fn show(xs: &[Element]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn analyze(a: &ComputedSubring) -> Result<Outcome> {
    let primes: Vec<serde_json::Value> = a
        .minimal_primes()
        .iter()
        .map(|p| {
            json!({
                "id": p.id,
                "coordinates": p.coordinate_set,
                "residue": p.residue.minpoly().to_string(),
                "degree": p.degree(),
                "orderings": p.num_orderings(),
            })
        })
        .collect();
    let residues: Vec<String> = a
        .minimal_primes()
        .iter()
        .map(|p| {
            if p.degree() == 1 {
                "Q".to_string()
            } else {
                format!("Q[t]/({})", p.residue.minpoly())
            }
        })
        .collect();
    let total = residues.join(" x ");
    let e = idempotents(a);
    let b = baer_hull(a)?;
    let closed = is_integrally_closed_in_t(a)?;
    let regular_quotient = {
        let t = a.rational_span()?;
        let amb = t.ambient();
        t.basis().iter().all(|x| {
            let q = amb.quasi_inverse(x);
            amb.mul(&amb.mul(x, &q), x) == *x
        })
    };
    let summary = format!(
        "{} minimal primes, T(A) = {total}, E(A) = {{{}}}, B(A) = span{{{}}}",
        a.minimal_primes().len(),
        show(&e).join(", "),
        show(b.basis()).join(", ")
    );
    let checks = vec![Check::new(
        "quotient-regular",
        !is_baer(a) || regular_quotient,
        "a Baer ring has a von Neumann regular total quotient ring",
    )];
    Ok(Outcome {
        summary,
        checks,
        data: json!({
            "mode": a.mode().to_string(),
            "rank": a.rank(),
            "basis": show(a.basis()),
            "minimal_primes": primes,
            "total_quotient": total,
            "idempotents": show(&e),
            "baer": is_baer(a),
            "baer_hull": show(b.basis()),
            "regular": a.is_regular(),
            "integrally_closed_in_total_quotient": closed.to_string(),
        }),
    })
}

fn maxpo(
    a: &ComputedSubring,
    model: &Model,
    name: &str,
    seed: u64,
    samples: usize,
) -> Result<Outcome> {
    let expected: usize = a
        .minimal_primes()
        .iter()
        .map(|p| p.num_orderings())
        .product();
    let mut checks = Vec::new();
    let mut tables = serde_json::Map::new();
    let b = baer_hull(a)?;
    let t = a.rational_span()?;
    for (label, upper) in [("B(A)", &b), ("T(A)", &t)] {
        let table = restrict_maxpo(a, upper)?;
        checks.push(Check::new(
            format!("count over {label}"),
            table.entries.len() == expected,
            format!("{} restrictions, {expected} expected", table.entries.len()),
        ));
        checks.push(Check::new(
            format!("round trip over {label}"),
            table.round_trips(),
            "the inverse table sends each restriction back",
        ));
        let mut bad = Vec::new();
        for w in &table.witnesses {
            let p = a.prime(w.prime);
            let l = table.entries[w.left].lower.embedding(w.prime);
            let r = table.entries[w.right].lower.embedding(w.prime);
            let ok = membership(a, &w.element)?
                && block_sign(a, p, l, &w.element)? == w.left_sign
                && block_sign(a, p, r, &w.element)? == w.left_sign.flip();
            if !ok {
                bad.push(format!("{} vs {}: {}", w.left, w.right, w.element));
            }
        }
        checks.push(
            Check::new(
                format!("separation over {label}"),
                bad.is_empty(),
                format!("{} separating witnesses re-verified", table.witnesses.len()),
            )
            .with_witnesses(bad),
        );
        let entries: Vec<serde_json::Value> = table
            .entries
            .iter()
            .map(|e| json!({ "upper": e.upper, "lower": e.lower }))
            .collect();
        tables.insert(label.into(), json!(entries));
    }

    let probes = default_probes(a, seed, samples);
    let secs = sections(a);
    let mut failures = Vec::new();
    let mut blocked = 0;
    for s in &secs {
        let cone = OrderingCone::from_section(a, s);
        let report = maximality_check(&cone, &probes)?;
        for x in &report.counterexamples {
            failures.push(format!("{s}: {x} extends the cone"));
        }
        for (x, w) in &report.blocked {
            if !witness_holds(&cone, a, x, w)? {
                failures.push(format!("{s}: witness {w} for {x} does not re-verify"));
            }
        }
        blocked += report.blocked.len();
    }
    checks.push(
        Check::new(
            "section cones are maximal",
            failures.is_empty(),
            format!(
                "{} sections, {} probes, {blocked} blocking witnesses",
                secs.len(),
                probes.len()
            ),
        )
        .with_witnesses(failures),
    );
    let mut missed = Vec::new();
    let mut coarser = 0;
    for (i, s) in secs.iter().enumerate() {
        for r in &secs[i + 1..] {
            coarser += 1;
            let cone = OrderingCone::intersection(a, &[s.clone(), r.clone()])?;
            if maximality_check(&cone, &probes)?.passed() {
                missed.push(format!("{s} and {r}"));
            }
        }
    }
    if secs.len() > 2 {
        coarser += 1;
        if maximality_check(&OrderingCone::intersection(a, &secs)?, &probes)?.passed() {
            missed.push("all sections".into());
        }
    }
    checks.push(
        Check::new(
            "coarser cones are not maximal",
            missed.is_empty(),
            format!("{coarser} intersections each refuted by a probe"),
        )
        .with_witnesses(missed),
    );
    let mut declared = Vec::new();
    for (oname, o) in model.orderings_on(name) {
        let cone = OrderingCone::Generated {
            ring: a,
            generators: o.generators.clone().unwrap_or_default(),
        };
        let properness = cone.properness()?;
        let mut containing = 0;
        for s in &secs {
            if cone.contained_in_section(s)? {
                containing += 1;
            }
        }
        checks.push(Check::new(
            format!("ordering {oname}"),
            properness != Properness::Improper,
            format!("contained in {containing} maximal orderings"),
        ));
        declared.push(json!({ "name": oname, "maximal_orderings_above": containing }));
    }
    Ok(Outcome {
        summary: format!("{expected} maximal orderings over B(A) and T(A)"),
        checks,
        data: json!({ "expected": expected, "tables": tables, "orderings": declared }),
    })
}

fn witness_holds(
    cone: &OrderingCone,
    a: &ComputedSubring,
    x: &Element,
    w: &Element,
) -> Result<bool> {
    let amb = a.ambient();
    let product = amb.mul(x, w);
    Ok(membership(a, w)?
        && cone_member(cone, w)?
        && cone_member(cone, &amb.neg(&product))?
        && !product.is_zero())
}

fn adjoin_idemp(a: &ComputedSubring) -> Result<Outcome> {
    let c = a.adjoin(&total_idempotents(a))?;
    let report = verify_fiber_product(a, &c)?;
    Ok(Outcome {
        summary: format!(
            "|Sper A| = {}, |Sper A[E(T(A))]| = {}",
            real_spectrum(a).len(),
            real_spectrum(&c).len()
        ),
        data: json!({ "larger_basis": show(c.basis()) }),
        checks: report.checks,
    })
}

fn random_element(a: &ComputedSubring, rng: &mut ChaCha8Rng) -> Element {
    let amb = a.ambient();
    a.basis().iter().fold(amb.zero(), |acc, b| {
        let c = Rational::from_integer(rng.random_range(-3i64..=3).into());
        amb.add(&acc, &amb.scale(&c, b))
    })
}

fn essext(a: &ComputedSubring, other: Option<&ComputedSubring>, seed: u64) -> Result<Outcome> {
    let hull;
    let b = match other {
        Some(b) => b,
        None => {
            hull = baer_hull(a)?;
            &hull
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = a.basis().to_vec();
    samples.extend((0..10).map(|_| random_element(a, &mut rng)));
    let report = verify_essext(a, b, &samples)?;
    Ok(Outcome {
        summary: format!("{} samples, essential", samples.len()),
        checks: report.checks,
        data: json!({ "larger_basis": show(b.basis()) }),
    })
}

fn census(a: &ComputedSubring) -> Result<Outcome> {
    let report = closures_census(a)?;
    let counts: Vec<String> = report.counts.values().map(ToString::to_string).collect();
    Ok(Outcome {
        summary: format!("counts {}", counts.join("/")),
        checks: report.checks.clone(),
        data: serde_json::to_value(&report).expect("census serializes"),
    })
}

/// A random monic polynomial of odd degree at most 7 with coefficients in
/// `a`, lowest degree first.
pub fn random_monic_odd(a: &ComputedSubring, rng: &mut ChaCha8Rng) -> Vec<Element> {
    let degree = [1, 3, 5, 7][rng.random_range(0..4)];
    let mut g: Vec<Element> = (0..degree).map(|_| random_element(a, rng)).collect();
    g.push(a.ambient().one());
    g
}

fn odd_roots(a: &ComputedSubring, seed: u64, count: usize) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let descriptors = ClosureDescriptor::all(a);
    let mut failures = Vec::new();
    let mut examples = Vec::new();
    for desc in &descriptors {
        for _ in 0..count {
            let g = random_monic_odd(a, &mut rng);
            let root = odd_root(desc, &g)?;
            if !verify_odd_root(desc, &g, &root)? {
                failures.push(format!("{desc}: {}", show(&g).join(", ")));
            }
            if examples.len() < 3 {
                examples.push(json!({
                    "descriptor": desc.section,
                    "polynomial": show(&g),
                    "root": root.coords.iter().map(|c| json!({
                        "prime": c.prime,
                        "embedding": c.embedding,
                        "defining": c.defining.to_string(),
                        "lo": crate::exact::rational::to_wire(&c.lo),
                        "hi": crate::exact::rational::to_wire(&c.hi),
                    })).collect::<Vec<_>>(),
                }));
            }
        }
    }
    let total = descriptors.len() * count;
    Ok(Outcome {
        summary: format!("{total} roots over {} descriptors", descriptors.len()),
        checks: vec![Check::new(
            "exact roots",
            failures.is_empty(),
            format!("{} of {total} verified", total - failures.len()),
        )
        .with_witnesses(failures)],
        data: json!({ "examples": examples }),
    })
}

fn rigidity(a: &ComputedSubring, other: Option<&ComputedSubring>) -> Result<Outcome> {
    let hull;
    let c = match other {
        Some(c) => c,
        None => {
            hull = baer_hull(a)?;
            &hull
        }
    };
    let report = a_automorphisms(a, c)?;
    let identity = report.maps.iter().any(|m| m.is_identity(c));
    let nonidentity = report.maps.iter().filter(|m| !m.is_identity(c)).count();
    let summary = if report.undecided.is_empty() {
        format!(
            "{} automorphisms, {nonidentity} non-identity",
            report.maps.len()
        )
    } else {
        format!(
            "{} automorphisms, {nonidentity} non-identity, {} undecided",
            report.maps.len(),
            report.undecided.len()
        )
    };
    let checks = vec![
        Check::new("identity", identity, "the identity fixes A"),
        Check::new(
            "idempotents fixed",
            report.fixes_idempotents,
            "every automorphism fixes E(C) pointwise",
        ),
        Check::new(
            "rigid",
            report.rigid,
            if report.baer_hull {
                "C is the Baer hull, so only the identity is allowed"
            } else {
                "C is not the Baer hull of A"
            },
        ),
        Check::new(
            "decided",
            true,
            format!("{} block pairs undecided", report.undecided.len()),
        )
        .with_witnesses(report.undecided.clone()),
    ];
    Ok(Outcome {
        summary,
        checks,
        data: json!({
            "maps": report.maps.iter().map(|m| m.blocks.iter().map(|b| json!({
                "source": b.source, "target": b.target, "image": b.image.to_string(),
            })).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "undecided": report.undecided,
            "baer_hull": report.baer_hull,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::FIXTURE_FILES;

    fn source(name: &str) -> &'static str {
        FIXTURE_FILES.iter().find(|(n, _)| *n == name).unwrap().1
    }

    #[test]
    fn census_on_a2() {
        let text = "field K2 = poly(-2, 0, 1)\nambient B = product(K2, K2)\nsubring A2 mode=order gens=[(t, 0), (0, t), (1, 1)]\nverify census A2\n";
        let report = run_source("a2", text, RunOptions::default()).unwrap();
        assert!(report.passed());
        assert_eq!(report.records[0].summary, "counts 4/4/4/4/4");
    }

    #[test]
    fn analyze_a0() {
        let report = run_source("a0", source("A0"), RunOptions::default()).unwrap();
        let analyze = &report.records[0];
        assert!(
            analyze
                .summary
                .starts_with("2 minimal primes, T(A) = Q x Q, E(A) = {(0, 0), (1, 1)}"),
            "{}",
            analyze.summary
        );
        assert_eq!(analyze.data["baer_hull"], json!(["(1, 0)", "(0, 1)"]));
    }

    #[test]
    fn diagonal_is_not_essential() {
        let report = run_source("diag", source("diag"), RunOptions::default()).unwrap();
        let essext = report
            .records
            .iter()
            .find(|r| r.id == "essext:D:QQ2")
            .unwrap();
        assert_eq!(essext.status, Status::Fail);
        assert_eq!(essext.summary, "not essential");
        assert!(!report.passed());
    }

    #[test]
    fn deterministic_and_parallel() {
        let seq = run_source(
            "a2",
            source("A2"),
            RunOptions {
                seed: 5,
                ..Default::default()
            },
        )
        .unwrap();
        let par = run_source(
            "a2",
            source("A2"),
            RunOptions {
                seed: 5,
                parallel: true,
                timings: false,
            },
        )
        .unwrap();
        assert!(seq.passed(), "{}", seq.to_text());
        assert_eq!(seq.to_json(), par.to_json());
        assert_eq!(seq.to_text(), par.to_text());
    }
}
