//! Feasibility of homogeneous linear sign systems with rational unknowns
//! and coefficients in an ordered number field `(K, σ)`.
//!
//! A rational solution `x` has a zero set `Z = {r : ℓ_r(x) = 0}`. Vanishing
//! in `K` is a rational condition, so for each candidate `Z` the unknowns are
//! restricted to a rational subspace and the remaining rows become strict.
//! A nonempty open polyhedral cone in a rational subspace has rational
//! points, which Fourier–Motzkin elimination over `(K, σ)` finds exactly.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::etale::NumberField;
use crate::exact::linalg::{self, Vector};
use crate::exact::rational::{self, Rational};
use crate::exact::{Poly, RealAlgebraic, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Geq,
    Leq,
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Geq => ">= 0",
            Relation::Leq => "<= 0",
            Relation::Eq => "= 0",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Poly>,
    pub relation: Relation,
}

/// Rows `sum_j x_j c_j (relation)` with `c_j ∈ K` evaluated under one real
/// embedding of `K`, plus a set of rows of which at least one must be
/// nonzero.
#[derive(Clone, Debug)]
pub struct SignSystem {
    field: NumberField,
    embedding: usize,
    dimension: usize,
    rows: Vec<Row>,
    strict: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    pub witness: Option<Vector>,
}

impl SignSystem {
    pub fn new(
        field: NumberField,
        embedding: usize,
        dimension: usize,
        rows: Vec<Row>,
        strict: Vec<usize>,
    ) -> Result<Self> {
        if embedding >= field.num_orderings() {
            return Err(Error::Precondition(format!(
                "field {} has no embedding {embedding}",
                field.name()
            )));
        }
        if let Some(r) = rows.iter().position(|r| r.coeffs.len() != dimension) {
            return Err(Error::Precondition(format!(
                "row {r} does not have {dimension} coefficients"
            )));
        }
        if let Some(&j) = strict.iter().find(|&&j| j >= rows.len()) {
            return Err(Error::Precondition(format!(
                "strict row {j} does not exist"
            )));
        }
        let rows = rows
            .into_iter()
            .map(|r| Row {
                coeffs: r.coeffs.iter().map(|c| field.reduce(c)).collect(),
                relation: r.relation,
            })
            .collect();
        Ok(SignSystem {
            field,
            embedding,
            dimension,
            rows,
            strict,
        })
    }

    /// A system over the rationals with integer coefficients.
    pub fn rational(
        dimension: usize,
        rows: &[(Vec<i64>, Relation)],
        strict: Vec<usize>,
    ) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|(c, relation)| Row {
                coeffs: c.iter().map(|&x| Poly::from_ints(&[x])).collect(),
                relation: *relation,
            })
            .collect();
        SignSystem::new(NumberField::rationals(), 0, dimension, rows, strict)
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn embedding(&self) -> usize {
        self.embedding
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn strict(&self) -> &[usize] {
        &self.strict
    }

    fn root(&self) -> &RealAlgebraic {
        self.field.fine_root(self.embedding)
    }

    fn sign(&self, a: &Poly) -> Sign {
        self.field.sign(a, self.embedding)
    }

    /// `ℓ_r(x)` as an element of `K`.
    pub fn evaluate(&self, row: &Row, x: &[Rational]) -> Poly {
        row.coeffs
            .iter()
            .zip(x)
            .fold(Poly::zero(), |acc, (c, xi)| &acc + &c.scale(xi))
    }

    /// Whether `x` satisfies every relation and makes a strict row nonzero.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.dimension {
            return false;
        }
        let values: Vec<Poly> = self.rows.iter().map(|r| self.evaluate(r, x)).collect();
        let ok = self.rows.iter().zip(&values).all(|(r, v)| {
            let s = self.sign(v);
            match r.relation {
                Relation::Geq => s != Sign::Negative,
                Relation::Leq => s != Sign::Positive,
                Relation::Eq => s == Sign::Zero,
            }
        });
        ok && self.strict.iter().any(|&j| !values[j].is_zero())
    }

    pub fn feasible(&self) -> Result<Feasibility> {
        let geq: Vec<Vec<Poly>> = self
            .rows
            .iter()
            .map(|r| match r.relation {
                Relation::Leq => r.coeffs.iter().map(|c| -c).collect(),
                _ => r.coeffs.clone(),
            })
            .collect();
        let equalities: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.rows[r].relation == Relation::Eq)
            .collect();
        let inequalities: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.rows[r].relation != Relation::Eq)
            .collect();
        let mut seen_strict = BTreeSet::new();
        for &j in &self.strict {
            if self.rows[j].relation == Relation::Eq || !seen_strict.insert(j) {
                continue;
            }
            let others: Vec<usize> = inequalities.iter().copied().filter(|&r| r != j).collect();
            for mask in 0u64..1 << others.len() {
                let zero: Vec<usize> = (0..others.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| others[i])
                    .collect();
                let open: Vec<usize> = std::iter::once(j)
                    .chain(
                        (0..others.len())
                            .filter(|i| mask >> i & 1 == 0)
                            .map(|i| others[i]),
                    )
                    .collect();
                let vanishing: Vec<usize> = equalities.iter().chain(&zero).copied().collect();
                if let Some(x) = self.solve_open(&geq, &vanishing, &open) {
                    if !self.satisfied_by(&x) {
                        return Err(Error::TheoremViolation(
                            "eliminator produced an invalid witness".into(),
                        ));
                    }
                    return Ok(Feasibility {
                        feasible: true,
                        witness: Some(x),
                    });
                }
            }
        }
        Ok(Feasibility {
            feasible: false,
            witness: None,
        })
    }

    /// Rational `x` with `ℓ_r(x) = 0` for `r ∈ vanishing` and `ℓ_r(x) > 0`
    /// for `r ∈ open`.
    fn solve_open(&self, geq: &[Vec<Poly>], vanishing: &[usize], open: &[usize]) -> Option<Vector> {
        let d = self.field.degree();
        let n = self.dimension;
        let mut conditions: Vec<Vector> = Vec::new();
        for &r in vanishing {
            for m in 0..d {
                conditions.push(geq[r].iter().map(|c| c.coeff(m)).collect());
            }
        }
        let basis = if conditions.is_empty() {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                Rational::one()
                            } else {
                                Rational::zero()
                            }
                        })
                        .collect()
                })
                .collect()
        } else {
            linalg::nullspace(&conditions, n)
        };
        let rows: Vec<Vec<Poly>> = open
            .iter()
            .map(|&r| {
                basis
                    .iter()
                    .map(|b| {
                        b.iter()
                            .zip(&geq[r])
                            .fold(Poly::zero(), |acc, (bi, c)| &acc + &c.scale(bi))
                    })
                    .collect()
            })
            .collect();
        let y = self.strict_fourier_motzkin(rows, basis.len())?;
        let mut x = linalg::zero_vector(n);
        for (yi, b) in y.iter().zip(&basis) {
            linalg::axpy(&mut x, yi, b);
        }
        Some(x)
    }

    /// Positive rational multiple of `row` with coprime integer coordinates.
    fn normalize(&self, row: Vec<Poly>) -> Vec<Poly> {
        match rational::primitive_factor(row.iter().flat_map(|c| c.coeffs())) {
            Some(factor) => row.iter().map(|c| c.scale(&factor)).collect(),
            None => row,
        }
    }

    /// Rational `y` with `a_r · y > 0` for every row, by eliminating the
    /// last variable repeatedly and back-substituting.
    fn strict_fourier_motzkin(&self, rows: Vec<Vec<Poly>>, k: usize) -> Option<Vector> {
        let mut levels: Vec<Vec<Vec<Poly>>> = Vec::with_capacity(k + 1);
        let mut cur = dedup(rows.into_iter().map(|r| self.normalize(r)).collect());
        for v in (0..k).rev() {
            if cur.iter().any(|r| r.iter().all(Poly::is_zero)) {
                return None;
            }
            let (mut next, mut pos, mut neg) = (Vec::new(), Vec::new(), Vec::new());
            for r in &cur {
                match self.sign(&r[v]) {
                    Sign::Positive => pos.push(r),
                    Sign::Negative => neg.push(r),
                    Sign::Zero => next.push(r[..v].to_vec()),
                }
            }
            for p in &pos {
                for q in &neg {
                    let (ap, aq) = (&p[v], &q[v]);
                    let combined: Vec<Poly> = (0..v)
                        .map(|i| &self.field.mul(&-aq, &p[i]) + &self.field.mul(ap, &q[i]))
                        .collect();
                    next.push(self.normalize(combined));
                }
            }
            levels.push(cur);
            cur = dedup(next);
        }
        if !cur.is_empty() {
            return None;
        }
        let mut y: Vector = Vec::with_capacity(k);
        for (v, level) in levels.iter().rev().enumerate() {
            y.push(self.pick_between(level, v, &y));
        }
        Some(y)
    }

    /// A rational value for variable `v` satisfying every row of `level`
    /// given the earlier values `y`. Row `r` bounds `v` by `-rest / pivot`;
    /// both are enclosed in rational intervals, refined until they separate.
    fn pick_between(&self, level: &[Vec<Poly>], v: usize, y: &[Rational]) -> Rational {
        let bounds: Vec<(Sign, Poly, Poly)> = level
            .iter()
            .filter_map(|r| {
                let s = self.sign(&r[v]);
                let rest = r[..v]
                    .iter()
                    .zip(y)
                    .fold(Poly::zero(), |acc, (c, yi)| &acc + &c.scale(yi));
                (s != Sign::Zero).then(|| (s, -rest, r[v].clone()))
            })
            .collect();
        let quick = bounds.iter().map(|(s, num, pivot)| {
            let e = self.embedding;
            (
                *s,
                self.field.enclosure(num, e),
                self.field.enclosure(pivot, e),
            )
        });
        if let Some(x) = choose_between(quick) {
            return x;
        }
        let mut root = self.root().clone();
        let mut width = Rational::new(1.into(), BigInt::one() << 100);
        loop {
            let mut enclosed = Vec::with_capacity(bounds.len());
            for (s, num, pivot) in &bounds {
                let (nl, nh, r) = root.enclose(num, &width);
                let (pl, ph, r) = r.enclose(pivot, &width);
                root = r;
                enclosed.push((*s, (nl, nh), (pl, ph)));
            }
            if let Some(x) = choose_between(enclosed) {
                return x;
            }
            width /= Rational::from_integer(16.into());
        }
    }
}

/// Picks a rational above every lower bound and below every upper bound,
/// each given as `(sign of pivot, numerator interval, pivot interval)`.
/// `None` when a pivot interval meets zero or the bounds overlap.
fn choose_between(
    bounds: impl IntoIterator<Item = (Sign, (Rational, Rational), (Rational, Rational))>,
) -> Option<Rational> {
    let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
    for (s, (nl, nh), (pl, ph)) in bounds {
        if !pl.is_positive() && !ph.is_negative() {
            return None;
        }
        let ends = [&nl / &pl, &nl / &ph, &nh / &pl, &nh / &ph];
        if s == Sign::Positive {
            let q = ends.into_iter().max().expect("four endpoints");
            lo = Some(lo.map_or(q.clone(), |l| l.max(q)));
        } else {
            let q = ends.into_iter().min().expect("four endpoints");
            hi = Some(hi.map_or(q.clone(), |h| h.min(q)));
        }
    }
    match (lo, hi) {
        (None, None) => Some(Rational::zero()),
        (Some(l), None) => Some(Rational::from_integer(l.floor().to_integer() + 1)),
        (None, Some(h)) => Some(Rational::from_integer(h.ceil().to_integer() - 1)),
        (Some(l), Some(h)) if l < h => Some(rational::simplest_between(&l, &h)),
        _ => None,
    }
}

fn dedup(rows: Vec<Vec<Poly>>) -> Vec<Vec<Poly>> {
    let mut out: Vec<Vec<Poly>> = Vec::with_capacity(rows.len());
    for r in rows {
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Brute-force oracle for systems over the rationals: searches integer
/// points of `[-bound, bound]^n`.
pub fn grid_search(s: &SignSystem, bound: i64) -> Option<Vector> {
    let n = s.dimension();
    let mut x = vec![-bound; n];
    loop {
        let candidate: Vector = x
            .iter()
            .map(|&v| Rational::from_integer(v.into()))
            .collect();
        if s.satisfied_by(&candidate) {
            return Some(candidate);
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
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
