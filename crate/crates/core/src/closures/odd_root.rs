use num_traits::{One, Signed, Zero};

use super::ClosureDescriptor;
use crate::error::{Error, Result};
use crate::etale::{is_one, Element, NumberField};
use crate::exact::linalg::{self, Vector};
use crate::exact::{rational, Poly, Rational, RealAlgebraic, Sign, SturmSequence};

/// Polynomial in `T` with coefficients in a number field, lowest degree
/// first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPoly {
    pub coeffs: Vec<Poly>,
}

impl KPoly {
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        KPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> &Poly {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn derivative(&self) -> KPoly {
        KPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&Rational::from_integer(i.into())))
                .collect(),
        )
    }

    fn scale(&self, k: &NumberField, c: &Poly) -> KPoly {
        KPoly::new(self.coeffs.iter().map(|x| k.mul(x, c)).collect())
    }

    pub fn monic(&self, k: &NumberField) -> KPoly {
        let inv = k
            .inverse(self.leading())
            .expect("nonzero leading coefficient");
        self.scale(k, &inv)
    }

    pub fn div_rem(&self, divisor: &KPoly, k: &NumberField) -> (KPoly, KPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv = k
            .inverse(divisor.leading())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Poly::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = k.mul(&rem[top], &inv);
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    let idx = top - dd + i;
                    rem[idx] = &rem[idx] - &k.mul(&c, d);
                }
                quot[top - dd] = c;
            }
            rem.pop();
        }
        (KPoly::new(quot), KPoly::new(rem))
    }

    pub fn gcd(a: &KPoly, b: &KPoly, k: &NumberField) -> KPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y, k).1;
            x = y;
            y = r;
        }
        if x.is_zero() {
            x
        } else {
            x.monic(k)
        }
    }

    pub fn squarefree_part(&self, k: &NumberField) -> KPoly {
        let g = KPoly::gcd(self, &self.derivative(), k);
        self.div_rem(&g, k).0.monic(k)
    }

    /// Value at a rational point, as an element of the field.
    pub fn eval(&self, x: &Rational, k: &NumberField) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| k.reduce(&(&acc.scale(x) + c)))
    }

    /// Positive rational multiple with coprime integer coordinates.
    fn primitive(&self) -> KPoly {
        match rational::primitive_factor(self.coeffs.iter().flat_map(|c| c.coeffs())) {
            Some(factor) => KPoly::new(self.coeffs.iter().map(|c| c.scale(&factor)).collect()),
            None => self.clone(),
        }
    }

    fn neg(&self) -> KPoly {
        KPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl std::fmt::Display for KPoly {
    /// Writes `(t)*T^2 + (1)`, highest degree first, field coefficients in `t`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*T"),
                _ => format!("({c})*T^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

struct RelativeSturm<'a> {
    field: &'a NumberField,
    embedding: usize,
    seq: Vec<KPoly>,
}

impl<'a> RelativeSturm<'a> {
    fn new(p: &KPoly, field: &'a NumberField, embedding: usize) -> Self {
        let mut seq = vec![p.clone(), p.derivative().primitive()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1], field).1.neg().primitive();
            seq.push(r);
        }
        seq.pop();
        RelativeSturm {
            field,
            embedding,
            seq,
        }
    }

    fn sign_at(&self, p: &KPoly, x: &Rational) -> Sign {
        self.field.sign(&p.eval(x, self.field), self.embedding)
    }

    /// Last nonzero entry of the chain: `gcd(p, p')` up to a unit.
    fn tail(&self) -> &KPoly {
        self.seq.last().expect("chain starts with p")
    }

    fn variations(&self, x: &Rational) -> usize {
        let signs: Vec<Sign> = self
            .seq
            .iter()
            .map(|p| self.sign_at(p, x))
            .filter(|s| *s != Sign::Zero)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Roots in `(a, b]`.
    fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// One coordinate of an odd-degree root: the least real root of the
/// realized polynomial at the descriptor's ordering, isolated relative to
/// the residue field.
#[derive(Clone, Debug)]
pub struct PrimeRoot {
    pub prime: usize,
    pub embedding: usize,
    /// Squarefree part of the realized polynomial over the residue field.
    pub defining: KPoly,
    /// The root lies in `(lo, hi]`, which holds no other root of
    /// `defining` at `embedding`; `lo == hi` for a rational root.
    pub lo: Rational,
    pub hi: Rational,
}

impl PrimeRoot {
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.hi)
    }

    /// The root as a real algebraic number over the rationals.
    pub fn to_real_algebraic(&self, k: &NumberField) -> Result<RealAlgebraic> {
        if let Some(q) = self.as_rational() {
            return Ok(RealAlgebraic::from_rational(q.clone()));
        }
        let sturm = RelativeSturm::new(&self.defining, k, self.embedding);
        let m = rational_minpoly(&self.defining, k);
        let rational = SturmSequence::new(&m);
        let hi_sign = sturm.sign_at(&self.defining, &self.hi);
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        let two = Rational::from_integer(2.into());
        while rational.count_in(&lo, &hi) != 1 {
            let mid = (&lo + &hi) / &two;
            match sturm.sign_at(&self.defining, &mid) {
                Sign::Zero => return Ok(RealAlgebraic::from_rational(mid)),
                s if s == hi_sign => hi = mid,
                _ => lo = mid,
            }
        }
        RealAlgebraic::new(&m, lo, hi)
    }
}

#[derive(Clone, Debug)]
pub struct OddRoot {
    pub coords: Vec<PrimeRoot>,
}

/// Minimal polynomial over `Q` of `T` in `K[T]/(d)`, for monic `d`.
fn rational_minpoly(d: &KPoly, k: &NumberField) -> Poly {
    let m = d.degree().unwrap();
    let deg = k.degree();
    let flatten = |p: &KPoly| -> Vector {
        let mut v = Vec::with_capacity(m * deg);
        for b in 0..m {
            v.extend(
                p.coeffs
                    .get(b)
                    .map_or_else(|| Poly::zero().padded(deg), |c| c.padded(deg)),
            );
        }
        v
    };
    let mut cur = KPoly::new(vec![Poly::one()]);
    let mut powers = vec![flatten(&cur)];
    loop {
        let mut shifted = vec![Poly::zero()];
        shifted.extend(cur.coeffs.iter().cloned());
        cur = KPoly::new(shifted).div_rem(d, k).1;
        let v = flatten(&cur);
        let mut rows = powers.clone();
        rows.push(v.clone());
        if let Some(dep) = linalg::left_kernel(&rows).into_iter().next() {
            let lead = dep.last().unwrap().clone();
            return Poly::new(dep.iter().map(|c| c / &lead).collect());
        }
        powers.push(v);
    }
}

fn root_bound(p: &KPoly, k: &NumberField, embedding: usize) -> Rational {
    let root = &k.real_roots()[embedding];
    let one = Rational::one();
    let mut bound = Rational::zero();
    for c in &p.coeffs[..p.coeffs.len() - 1] {
        let (a, b, _) = root.enclose(c, &one);
        bound = bound.max(a.abs()).max(b.abs());
    }
    bound + one
}

/// Width to which irrational roots are refined; rational roots with
/// denominators up to about `2^16` are recognized and returned exactly.
fn isolation_width() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::one() << 32)
}

/// Upper bound on the real roots of `p` in `(a, b)` at `embedding` by the
/// rule of signs after mapping the interval onto `(0, oo)`. A result of 0
/// or 1 is exact.
fn descartes_bound(
    p: &KPoly,
    k: &NumberField,
    embedding: usize,
    a: &Rational,
    b: &Rational,
) -> usize {
    let mut c = p.coeffs.clone();
    taylor_shift(&mut c, a);
    let width = b - a;
    let mut power = Rational::one();
    for x in c.iter_mut() {
        *x = x.scale(&power);
        power *= &width;
    }
    c.reverse();
    taylor_shift(&mut c, &Rational::one());
    let signs: Vec<Sign> = c
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| k.sign(x, embedding))
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// `p(x) -> p(x + s)` in place, lowest degree first.
fn taylor_shift(c: &mut [Poly], s: &Rational) {
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let add = c[j + 1].scale(s);
            c[j] = &c[j] + &add;
        }
    }
}

/// Depth after which bisection gives up on the rule of signs, which only
/// terminates for squarefree input.
const DESCARTES_DEPTH: usize = 64;

/// Leftmost root of `g` in `(lo, hi)` by depth-first bisection; `lo` is
/// never a root of `g` in the returned interval. `None` if the depth limit
/// is hit before isolation.
fn descartes_least(
    g: &KPoly,
    k: &NumberField,
    embedding: usize,
    lo: Rational,
    hi: Rational,
) -> Option<(Rational, Rational)> {
    let two = Rational::from_integer(2.into());
    let mut stack = vec![(lo, hi, 0usize)];
    while let Some((a, b, depth)) = stack.pop() {
        match descartes_bound(g, k, embedding, &a, &b) {
            0 => continue,
            1 => return Some((a, b)),
            _ if depth >= DESCARTES_DEPTH => return None,
            _ => {}
        }
        let mid = (&a + &b) / &two;
        if g.eval(&mid, k).is_zero() {
            if descartes_bound(g, k, embedding, &a, &mid) == 0 {
                return Some((mid.clone(), mid));
            }
            stack.push((a, mid, depth + 1));
            continue;
        }
        stack.push((mid.clone(), b, depth + 1));
        stack.push((a, mid, depth + 1));
    }
    None
}

/// Squarefree part of `g` and an interval `(lo, hi]` around its least root
/// at `embedding` holding no other root, with `lo` not a root.
fn isolate_least(
    g: &KPoly,
    k: &NumberField,
    embedding: usize,
) -> Result<(KPoly, Rational, Rational)> {
    let bound = root_bound(g, k, embedding);
    if let Some((lo, hi)) = descartes_least(g, k, embedding, -bound.clone(), bound.clone()) {
        return Ok((g.clone(), lo, hi));
    }
    let mut sturm = RelativeSturm::new(g, k, embedding);
    let mut d = g.clone();
    if sturm.tail().degree().unwrap_or(0) > 0 {
        d = g.div_rem(sturm.tail(), k).0.monic(k);
        sturm = RelativeSturm::new(&d, k, embedding);
    }
    let (mut lo, mut hi) = (-bound.clone(), bound);
    let (mut v_lo, mut v_hi) = (sturm.variations(&lo), sturm.variations(&hi));
    let two = Rational::from_integer(2.into());
    while v_lo - v_hi > 1 {
        let mid = (&lo + &hi) / &two;
        let v_mid = sturm.variations(&mid);
        if v_lo > v_mid {
            hi = mid;
            v_hi = v_mid;
        } else {
            lo = mid;
            v_lo = v_mid;
        }
    }
    if v_lo == v_hi {
        return Err(Error::TheoremViolation(
            "odd-degree polynomial without a real root".into(),
        ));
    }
    Ok((d, lo, hi))
}

fn least_root(g: &KPoly, k: &NumberField, embedding: usize) -> Result<(KPoly, Rational, Rational)> {
    let (d, mut lo, mut hi) = isolate_least(g, k, embedding)?;
    if lo == hi || d.eval(&hi, k).is_zero() {
        return Ok((d, hi.clone(), hi));
    }
    let lo_sign = k.sign(&d.eval(&lo, k), embedding);
    let two = Rational::from_integer(2.into());
    let width = isolation_width();
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        let value = d.eval(&mid, k);
        if value.is_zero() {
            return Ok((d, mid.clone(), mid));
        }
        if k.sign(&value, embedding) == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let guess = rational::simplest_between(&lo, &hi);
    if d.eval(&guess, k).is_zero() {
        return Ok((d, guess.clone(), guess));
    }
    Ok((d, lo, hi))
}

/// A root of the monic odd-degree `g = sum g[i] T^i` (coefficients in the
/// base ring's rational span) in the product of the real closures named by
/// `desc`, glued from the least real root at each prime.
pub fn odd_root(desc: &ClosureDescriptor, g: &[Element]) -> Result<OddRoot> {
    if g.len() % 2 == 1 || g.is_empty() || !is_one(g.last().unwrap()) {
        return Err(Error::NotMonicOdd);
    }
    let ring = desc.base;
    let amb = ring.ambient();
    let mut coords = Vec::new();
    for p in ring.minimal_primes() {
        let k = &p.residue;
        let coeffs = g
            .iter()
            .map(|c| {
                p.residue_coords(amb, c).ok_or_else(|| {
                    Error::Precondition(format!("coefficient {c} is outside the base ring"))
                })
            })
            .collect::<Result<Vec<Poly>>>()?;
        let realized = KPoly::new(coeffs);
        let embedding = desc.section.embedding(p.id);
        let (defining, lo, hi) = least_root(&realized, k, embedding)?;
        if !realized.div_rem(&defining, k).1.is_zero() {
            return Err(Error::TheoremViolation(
                "root polynomial does not divide the input".into(),
            ));
        }
        coords.push(PrimeRoot {
            prime: p.id,
            embedding,
            defining,
            lo,
            hi,
        });
    }
    Ok(OddRoot { coords })
}

/// Exact check that `root` solves `g` at every prime of the descriptor:
/// a rational coordinate is substituted directly; otherwise the gcd of the
/// realized `g` with the coordinate's defining polynomial must have a root,
/// at the descriptor's embedding, inside the isolating interval, which
/// holds exactly one root of the defining polynomial.
pub fn verify_odd_root(desc: &ClosureDescriptor, g: &[Element], root: &OddRoot) -> Result<bool> {
    let ring = desc.base;
    let amb = ring.ambient();
    if root.coords.len() != ring.minimal_primes().len() {
        return Ok(false);
    }
    for (p, c) in ring.minimal_primes().iter().zip(&root.coords) {
        let k = &p.residue;
        let coeffs = g
            .iter()
            .map(|x| {
                p.residue_coords(amb, x).ok_or_else(|| {
                    Error::Precondition(format!("coefficient {x} is outside the base ring"))
                })
            })
            .collect::<Result<Vec<Poly>>>()?;
        let realized = KPoly::new(coeffs);
        let embedding = desc.section.embedding(p.id);
        if c.embedding != embedding || c.prime != p.id {
            return Ok(false);
        }
        if let Some(q) = c.as_rational() {
            if !realized.eval(q, k).is_zero() {
                return Ok(false);
            }
            continue;
        }
        if c.defining.eval(&c.lo, k).is_zero() {
            return Ok(false);
        }
        let isolated = |p: &KPoly| match (
            p.eval(&c.hi, k).is_zero(),
            descartes_bound(p, k, embedding, &c.lo, &c.hi),
        ) {
            (true, 0) | (false, 1) => true,
            (_, 0) | (true, 1) => false,
            _ => RelativeSturm::new(p, k, embedding).count_in(&c.lo, &c.hi) == 1,
        };
        if !isolated(&c.defining) {
            return Ok(false);
        }
        let defining = c.defining.monic(k);
        if realized.monic(k) != defining {
            let h = KPoly::gcd(&realized, &defining, k);
            if h.degree().unwrap_or(0) == 0 || (h != defining && !isolated(&h)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::etale::{close_subring, Ambient, Mode, ProductAlgebra, SubringPresentation};
    use crate::exact::rational::{frac, int};
    use crate::spectra::sections;

    fn ring(amb: &Ambient, gens: Vec<Element>) -> crate::etale::ComputedSubring {
        close_subring(&SubringPresentation::new(amb.clone(), gens, Mode::Order).unwrap()).unwrap()
    }

    #[test]
    fn cube_roots_of_one_and_eight() {
        let amb: Ambient =
            Arc::new(ProductAlgebra::new(vec![NumberField::rationals(); 2]).unwrap());
        let a = ring(&amb, vec![amb.idempotent(&[0])]);
        let desc = ClosureDescriptor::new(&a, sections(&a)[0].clone());
        let g = vec![
            amb.from_ints(&[-1, -8]).unwrap(),
            amb.zero(),
            amb.zero(),
            amb.one(),
        ];
        let root = odd_root(&desc, &g).unwrap();
        assert!(verify_odd_root(&desc, &g, &root).unwrap());
        let values: Vec<_> = root
            .coords
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect();
        assert_eq!(values, vec![Some(int(1)), Some(int(2))]);
    }

    #[test]
    fn cube_root_of_two() {
        let amb: Ambient = Arc::new(ProductAlgebra::new(vec![NumberField::rationals()]).unwrap());
        let a = ring(&amb, vec![]);
        let desc = ClosureDescriptor::new(&a, sections(&a)[0].clone());
        let g = vec![
            amb.from_ints(&[-2]).unwrap(),
            amb.zero(),
            amb.zero(),
            amb.one(),
        ];
        let root = odd_root(&desc, &g).unwrap();
        assert!(verify_odd_root(&desc, &g, &root).unwrap());
        let c = &root.coords[0];
        assert!(c.lo >= int(1) && c.hi <= int(2));
        let v = c.to_real_algebraic(&a.prime(0).residue).unwrap();
        assert_eq!(v.defining(), &Poly::from_ints(&[-2, 0, 0, 1]));
        assert!(v.lo() >= &int(1) && v.hi() <= &int(2));
        assert_eq!(v.sign_of(&Poly::from_ints(&[-2, 0, 0, 1])), Sign::Zero);
    }

    #[test]
    fn linear_and_relative_roots() {
        let k = NumberField::new("K2", Poly::from_ints(&[-2, 0, 1])).unwrap();
        let amb: Ambient = Arc::new(ProductAlgebra::new(vec![k]).unwrap());
        let a = ring(&amb, vec![amb.element(vec![Poly::t()]).unwrap()]);
        let sqrt2 = amb.element(vec![Poly::t()]).unwrap();
        for s in sections(&a) {
            let desc = ClosureDescriptor::new(&a, s.clone());
            let root = odd_root(&desc, &[amb.neg(&sqrt2), amb.one()]).unwrap();
            let k = &a.prime(0).residue;
            let v = root.coords[0].to_real_algebraic(k).unwrap();
            assert_eq!(v.sign_of(&Poly::from_ints(&[-2, 0, 1])), Sign::Zero);
            let expected = if s.embedding(0) == 1 {
                Sign::Positive
            } else {
                Sign::Negative
            };
            assert_eq!(v.sign_of(&Poly::t()), expected);
            // T^3 - sqrt2: real root is 2^(1/6) up to sign
            let g = vec![amb.neg(&sqrt2), amb.zero(), amb.zero(), amb.one()];
            let r = odd_root(&desc, &g).unwrap();
            assert!(verify_odd_root(&desc, &g, &r).unwrap());
            let shifted = vec![
                amb.sub(&g[0], &amb.one()),
                amb.zero(),
                amb.zero(),
                amb.one(),
            ];
            assert!(!verify_odd_root(&desc, &shifted, &r).unwrap());
            let w = r.coords[0].to_real_algebraic(k).unwrap();
            assert_eq!(
                w.sign_of(&Poly::from_ints(&[-2, 0, 0, 0, 0, 0, 1])),
                Sign::Zero
            );
            assert_eq!(w.sign_of(&Poly::t()), expected);
        }
        let even = vec![amb.zero(), amb.zero(), amb.one()];
        let desc = ClosureDescriptor::new(&a, sections(&a)[0].clone());
        assert_eq!(odd_root(&desc, &even).unwrap_err(), Error::NotMonicOdd);
        let scaled = vec![amb.zero(), amb.constant(&frac(2, 1))];
        assert_eq!(odd_root(&desc, &scaled).unwrap_err(), Error::NotMonicOdd);
    }

    #[test]
    fn relative_division() {
        let k = NumberField::new("K2", Poly::from_ints(&[-2, 0, 1])).unwrap();
        // (T - t)(T + t) = T^2 - 2
        let p = KPoly::new(vec![Poly::from_ints(&[-2]), Poly::zero(), Poly::one()]);
        let f = KPoly::new(vec![-Poly::t(), Poly::one()]);
        let (q, r) = p.div_rem(&f, &k);
        assert!(r.is_zero());
        assert_eq!(q, KPoly::new(vec![Poly::t(), Poly::one()]));
        let sq = KPoly::new(vec![
            Poly::from_ints(&[2]),
            Poly::from_ints(&[0, -2]),
            Poly::one(),
        ]);
        assert_eq!(sq.squarefree_part(&k), f);
    }
}
