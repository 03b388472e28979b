//! Fixture corpus: the shipped ring files plus seeded random gluings of
//! orders in up to four real number fields.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::dsl::parse_ring_file;
use crate::cli::model::Model;
use crate::error::{Error, Result};
use crate::etale::ComputedSubring;

/// Shipped fixture files, by name.
pub const FIXTURE_FILES: [(&str, &str); 9] = [
    ("A0", include_str!("../fixtures/a0.ring")),
    ("A1", include_str!("../fixtures/a1.ring")),
    ("A2", include_str!("../fixtures/a2.ring")),
    ("Q", include_str!("../fixtures/q.ring")),
    ("diag", include_str!("../fixtures/diag.ring")),
    ("Z5", include_str!("../fixtures/z5.ring")),
    ("ZxZ", include_str!("../fixtures/zxz.ring")),
    ("cubic", include_str!("../fixtures/cubic.ring")),
    ("quartic", include_str!("../fixtures/quartic.ring")),
];

#[derive(Debug)]
pub struct Fixture {
    pub name: String,
    /// Ring file text; the first subring is the fixture ring.
    pub source: String,
    pub model: Model,
}

impl Fixture {
    pub fn from_source(name: impl Into<String>, source: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let source = source.into();
        let file = parse_ring_file(&source)
            .map_err(|e| Error::Precondition(format!("fixture {name}: {e}")))?;
        let model = Model::build(&file)?;
        model.primary()?;
        Ok(Fixture {
            name,
            source,
            model,
        })
    }

    pub fn ring(&self) -> &ComputedSubring {
        self.model.primary().expect("checked at construction")
    }
}

pub fn named_fixtures() -> Vec<Fixture> {
    FIXTURE_FILES
        .iter()
        .map(|(name, text)| Fixture::from_source(*name, *text).expect("shipped fixtures are valid"))
        .collect()
}

pub fn named(name: &str) -> Fixture {
    let (n, text) = FIXTURE_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("no fixture {name}"));
    Fixture::from_source(*n, *text).expect("shipped fixtures are valid")
}

/// Fields available to random gluings: name and defining coefficients.
const FIELD_POOL: [(&str, &str); 8] = [
    ("Q", "0, 1"),
    ("K2", "-2, 0, 1"),
    ("K3", "-3, 0, 1"),
    ("K5", "-5, 0, 1"),
    ("C2", "-2, 0, 0, 1"),
    ("C7", "1, -3, 0, 1"),
    ("K6", "1, 0, -10, 0, 1"),
    ("R2", "-2, 0, 0, 0, 1"),
];

const MAX_BLOCKS: usize = 4;
const MAX_TOTAL_DEGREE: usize = 8;

fn degree(coeffs: &str) -> usize {
    coeffs.split(',').count() - 1
}

fn random_coordinate(rng: &mut ChaCha8Rng, deg: usize) -> String {
    let terms: Vec<String> = (0..deg)
        .map(|k| {
            let c: i64 = rng.random_range(-2..=2);
            match k {
                0 => format!("{c}"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{k}"),
            }
        })
        .collect();
    terms.join(" + ")
}

/// Ring file text for one random gluing: blocks of total degree at most
/// [`MAX_TOTAL_DEGREE`], `m` times the power basis of each block, and one
/// random element tying the blocks together modulo `m`. One time in four
/// the ring is generated by the tying element alone.
pub fn random_gluing_source(rng: &mut ChaCha8Rng, index: usize) -> String {
    let blocks = rng.random_range(1..=MAX_BLOCKS);
    let mut chosen: Vec<(&str, &str)> = Vec::new();
    let mut total = 0;
    for _ in 0..blocks {
        let (name, coeffs) = *FIELD_POOL.choose(rng).expect("pool is nonempty");
        if total + degree(coeffs) > MAX_TOTAL_DEGREE {
            continue;
        }
        total += degree(coeffs);
        chosen.push((name, coeffs));
    }
    let m: i64 = *[2, 3].choose(rng).expect("nonempty");
    let local = rng.random_range(0..4) != 0;
    let mut text = format!("# random gluing {index}\n");
    let mut declared: Vec<&str> = Vec::new();
    for (name, coeffs) in &chosen {
        if !declared.contains(name) {
            text.push_str(&format!("field {name} = poly({coeffs})\n"));
            declared.push(name);
        }
    }
    let names: Vec<&str> = chosen.iter().map(|c| c.0).collect();
    text.push_str(&format!("ambient B = product({})\n", names.join(", ")));
    let mut gens = Vec::new();
    let tie: Vec<String> = chosen
        .iter()
        .map(|(_, c)| random_coordinate(rng, degree(c)))
        .collect();
    gens.push(format!("({})", tie.join(", ")));
    if local {
        for (i, (_, c)) in chosen.iter().enumerate() {
            for k in 0..degree(c) {
                let coords: Vec<String> = (0..chosen.len())
                    .map(|j| {
                        if j == i {
                            format!("{m}*t^{k}")
                        } else {
                            "0".into()
                        }
                    })
                    .collect();
                gens.push(format!("({})", coords.join(", ")));
            }
        }
    }
    text.push_str(&format!(
        "subring G{index} mode=order gens=[{}]\n",
        gens.join(", ")
    ));
    text
}

/// `count` random gluings that close successfully, deterministic in `seed`.
pub fn random_gluings(seed: u64, count: usize) -> Vec<Fixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut index = 0;
    while out.len() < count {
        let source = random_gluing_source(&mut rng, index);
        if let Ok(f) = Fixture::from_source(format!("gluing-{index}"), source) {
            out.push(f);
        }
        index += 1;
        assert!(
            index < 50 * count.max(1),
            "random gluings keep failing to close"
        );
    }
    out
}

/// Named fixtures followed by `random` seeded gluings.
pub fn corpus(seed: u64, random: usize) -> Vec<Fixture> {
    let mut all = named_fixtures();
    all.extend(random_gluings(seed, random));
    all
}
