//! Real root isolation by Sturm sequences, and exact sign determination of
//! rational polynomials at isolated real algebraic numbers.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::rational::{self, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(q: &Rational) -> Sign {
        match q.cmp(&Rational::zero()) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        match self.as_i8() * other.as_i8() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }
}

/// Canonical Sturm sequence `p, p', -rem(p, p'), ...` of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<Poly>,
}

impl SturmSequence {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d);
        }
        while seq.len() >= 2 {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(-r);
        }
        SturmSequence { seq }
    }

    fn variations(signs: impl Iterator<Item = Sign>) -> usize {
        let mut last = Sign::Zero;
        let mut count = 0;
        for s in signs.filter(|s| *s != Sign::Zero) {
            if last != Sign::Zero && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.seq.iter().map(|p| Sign::of(&p.eval(x))))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| Sign::of(p.leading().unwrap())))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.seq.iter().map(|p| {
            let s = Sign::of(p.leading().unwrap());
            if p.degree().unwrap() % 2 == 1 {
                s.flip()
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }
}

/// Cauchy bound: every real root has absolute value strictly below it.
pub fn root_bound(f: &Poly) -> Rational {
    let lead = f.leading().expect("nonzero polynomial").abs();
    let max = f.coeffs()[..f.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    max + Rational::one()
}

/// A real root of a squarefree rational polynomial together with a rational
/// isolating interval `[lo, hi]`.
///
/// Either `lo == hi` is the (rational) root itself, or the defining
/// polynomial is nonzero at both endpoints, changes sign across the interval
/// and has no other root in it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealAlgebraic {
    defining: Poly,
    lo: Rational,
    hi: Rational,
}

impl RealAlgebraic {
    /// Validates and normalizes. The defining polynomial is replaced by its
    /// monic squarefree part.
    pub fn new(defining: &Poly, lo: Rational, hi: Rational) -> Result<Self> {
        if defining.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if lo > hi {
            return Err(Error::InvalidRoot("lo > hi".into()));
        }
        let defining = defining.squarefree_part();
        let at_lo = defining.eval(&lo).is_zero();
        let at_hi = defining.eval(&hi).is_zero();
        if lo == hi {
            return if at_lo {
                Ok(RealAlgebraic { defining, lo, hi })
            } else {
                Err(Error::InvalidRoot(
                    "degenerate interval is not a root".into(),
                ))
            };
        }
        let seq = SturmSequence::new(&defining);
        let count = seq.count_in(&lo, &hi) + usize::from(at_lo);
        if count != 1 {
            return Err(Error::InvalidRoot(format!(
                "interval [{}, {}] holds {count} roots of {defining}",
                rational::to_wire(&lo),
                rational::to_wire(&hi)
            )));
        }
        Ok(if at_lo {
            RealAlgebraic {
                defining,
                hi: lo.clone(),
                lo,
            }
        } else if at_hi {
            RealAlgebraic {
                defining,
                lo: hi.clone(),
                hi,
            }
        } else {
            RealAlgebraic { defining, lo, hi }
        })
    }

    pub fn from_rational(q: Rational) -> Self {
        RealAlgebraic {
            defining: Poly::new(vec![-q.clone(), Rational::one()]),
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn defining(&self) -> &Poly {
        &self.defining
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    /// One bisection step; lands on a degenerate interval if the midpoint
    /// happens to be the root.
    pub fn bisect(&self) -> RealAlgebraic {
        if self.lo == self.hi {
            return self.clone();
        }
        let mid = (&self.lo + &self.hi) / rational::int(2);
        let at_mid = Sign::of(&self.defining.eval(&mid));
        if at_mid == Sign::Zero {
            return RealAlgebraic {
                defining: self.defining.clone(),
                lo: mid.clone(),
                hi: mid,
            };
        }
        let at_lo = Sign::of(&self.defining.eval(&self.lo));
        let (lo, hi) = if at_lo == at_mid {
            (mid, self.hi.clone())
        } else {
            (self.lo.clone(), mid)
        };
        RealAlgebraic {
            defining: self.defining.clone(),
            lo,
            hi,
        }
    }

    /// Same root with an interval no wider than `width`.
    pub fn refine(&self, width: &Rational) -> Result<RealAlgebraic> {
        if !width.is_positive() {
            return Err(Error::NonPositiveWidth);
        }
        let mut cur = self.clone();
        while &cur.width() > width {
            cur = cur.bisect();
        }
        Ok(cur)
    }

    /// Exact comparison with a rational number.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        if let Some(r) = self.as_rational() {
            return r.cmp(q);
        }
        if q <= &self.lo {
            return Ordering::Greater;
        }
        if q >= &self.hi {
            return Ordering::Less;
        }
        let at_q = Sign::of(&self.defining.eval(q));
        if at_q == Sign::Zero {
            return Ordering::Equal;
        }
        let at_lo = Sign::of(&self.defining.eval(&self.lo));
        // root lies on the side where the sign flips
        if at_q == at_lo {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = self
            .refine(&rational::frac(1, 1 << 40))
            .expect("positive width");
        ((r.lo + r.hi) / rational::int(2))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Exact sign of `g` at this number.
    pub fn sign_of(&self, g: &Poly) -> Sign {
        sign_at(g, self)
    }

    /// Encloses `g(self)` within a rational interval of the given width or
    /// less (refining as needed).
    pub fn enclose(&self, g: &Poly, width: &Rational) -> (Rational, Rational, RealAlgebraic) {
        let mut cur = self.clone();
        loop {
            let (a, b) = match cur.as_rational() {
                Some(q) => {
                    let v = g.eval(q);
                    (v.clone(), v)
                }
                None => g.eval_interval(&cur.lo, &cur.hi),
            };
            if &(&b - &a) <= width {
                return (a, b, cur);
            }
            cur = cur.bisect();
        }
    }
}

impl fmt::Display for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "root of {} in [{}, {}]",
            self.defining,
            rational::to_wire(&self.lo),
            rational::to_wire(&self.hi)
        )
    }
}

/// All distinct real roots of `f` in increasing order.
pub fn real_roots(f: &Poly) -> Result<Vec<RealAlgebraic>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sqf = f.squarefree_part();
    if sqf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let bound = root_bound(&sqf);
    let seq = SturmSequence::new(&sqf);
    let total = seq.count_all();
    let mut out = Vec::with_capacity(total);
    isolate(&sqf, &seq, -bound.clone(), bound, total, &mut out);
    debug_assert_eq!(out.len(), total);
    Ok(out)
}

fn isolate(
    f: &Poly,
    seq: &SturmSequence,
    a: Rational,
    b: Rational,
    count: usize,
    out: &mut Vec<RealAlgebraic>,
) {
    if count == 0 {
        return;
    }
    if count == 1 {
        if f.eval(&b).is_zero() {
            out.push(RealAlgebraic {
                defining: f.clone(),
                lo: b.clone(),
                hi: b,
            });
            return;
        }
        if !f.eval(&a).is_zero() {
            out.push(RealAlgebraic {
                defining: f.clone(),
                lo: a,
                hi: b,
            });
            return;
        }
    }
    let m = (&a + &b) / rational::int(2);
    let left = seq.count_in(&a, &m);
    isolate(f, seq, a, m.clone(), left, out);
    isolate(f, seq, m, b, count - left, out);
}

/// Exact sign of `g(r)`. Zero is decided by a gcd test against the
/// defining polynomial; nonzero signs by interval refinement.
pub fn sign_at(g: &Poly, r: &RealAlgebraic) -> Sign {
    if g.is_zero() {
        return Sign::Zero;
    }
    if let Some(q) = r.as_rational() {
        return Sign::of(&g.eval(q));
    }
    let g = g.rem(&r.defining);
    if let Some(c) = g.as_constant() {
        return Sign::of(&c);
    }
    let h = Poly::gcd(&g, &r.defining);
    if h.degree().unwrap_or(0) > 0 {
        let s_lo = Sign::of(&h.eval(&r.lo));
        let s_hi = Sign::of(&h.eval(&r.hi));
        if s_lo != s_hi {
            return Sign::Zero;
        }
    }
    let mut cur = r.clone();
    loop {
        if let Some(q) = cur.as_rational() {
            return Sign::of(&g.eval(q));
        }
        let (a, b) = g.eval_interval(&cur.lo, &cur.hi);
        if a.is_positive() {
            return Sign::Positive;
        }
        if b.is_negative() {
            return Sign::Negative;
        }
        cur = cur.bisect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{frac, int};

    fn sqrt2() -> RealAlgebraic {
        real_roots(&Poly::from_ints(&[-2, 0, 1])).unwrap()[1].clone()
    }

    #[test]
    fn hand_sturm_sequence_of_x2_minus_2() {
        // p0 = x^2 - 2, p1 = 2x, p2 = 2: V(-inf) = 2, V(+inf) = 0.
        let seq = SturmSequence::new(&Poly::from_ints(&[-2, 0, 1]));
        assert_eq!(seq.variations_at_neg_inf(), 2);
        assert_eq!(seq.variations_at_pos_inf(), 0);
        let roots = real_roots(&Poly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].cmp_rational(&frac(-1414, 1000)), Ordering::Less);
        assert_eq!(roots[0].cmp_rational(&frac(-1415, 1000)), Ordering::Greater);
        assert_eq!(roots[1].cmp_rational(&frac(1414, 1000)), Ordering::Greater);
        assert_eq!(roots[1].cmp_rational(&frac(1415, 1000)), Ordering::Less);
    }

    #[test]
    fn no_real_roots() {
        assert!(real_roots(&Poly::from_ints(&[1, 0, 1])).unwrap().is_empty());
        assert_eq!(real_roots(&Poly::zero()), Err(Error::ZeroPolynomial));
        assert!(real_roots(&Poly::from_ints(&[5])).unwrap().is_empty());
    }

    #[test]
    fn rational_factorization_roots() {
        let roots = real_roots(&Poly::from_ints(&[0, -1, 0, 1])).unwrap();
        let values: Vec<Rational> = roots
            .iter()
            .map(|r| r.refine(&frac(1, 1000)).unwrap())
            .map(|r| {
                let approx = r.lo().clone();
                approx.round()
            })
            .collect();
        assert_eq!(values, vec![int(-1), int(0), int(1)]);
        for (r, v) in roots.iter().zip([-1, 0, 1]) {
            assert_eq!(r.cmp_rational(&int(v)), Ordering::Equal);
        }
    }

    #[test]
    fn repeated_roots_collapse() {
        let f = Poly::from_ints(&[-1, 1]) * Poly::from_ints(&[-1, 1]) * Poly::from_ints(&[2, 1]);
        assert_eq!(real_roots(&f).unwrap().len(), 2);
    }

    #[test]
    fn signs_at_sqrt2() {
        let r = sqrt2();
        assert_eq!(sign_at(&Poly::t(), &r), Sign::Positive);
        assert_eq!(sign_at(&Poly::zero(), &r), Sign::Zero);
        assert_eq!(sign_at(&Poly::from_ints(&[-2, 0, 1]), &r), Sign::Zero);
        assert_eq!(
            sign_at(&Poly::from_ints(&[-1, 0, 0, 0, 1]), &r),
            Sign::Positive
        ); // t^4 - 1 = 3
        assert_eq!(
            sign_at(&Poly::new(vec![frac(-99, 70), int(1)]), &r),
            Sign::Negative
        );
        // (t^2-2)(t-1) vanishes; gcd with the defining polynomial is nontrivial
        let g = Poly::from_ints(&[-2, 0, 1]) * Poly::from_ints(&[-1, 1]);
        assert_eq!(sign_at(&g, &r), Sign::Zero);
        let neg = real_roots(&Poly::from_ints(&[-2, 0, 1])).unwrap()[0].clone();
        assert_eq!(
            sign_at(&(Poly::from_ints(&[0, 1]) - Poly::from_ints(&[1])), &neg),
            Sign::Negative
        );
    }

    #[test]
    fn refine_hand_bisection() {
        let r = RealAlgebraic::new(&Poly::from_ints(&[-2, 0, 1]), int(1), int(2)).unwrap();
        // [1,2] -> [1,3/2] -> [5/4,3/2] -> [11/8,3/2]
        let refined = r.refine(&frac(1, 8)).unwrap();
        assert_eq!(refined.lo(), &frac(11, 8));
        assert_eq!(refined.hi(), &frac(3, 2));
        assert_eq!(refined.refine(&frac(1, 2)).unwrap(), refined);
        let q = RealAlgebraic::from_rational(frac(1, 3));
        assert_eq!(q.refine(&frac(1, 100)).unwrap(), q);
        assert_eq!(r.refine(&int(0)), Err(Error::NonPositiveWidth));
    }

    #[test]
    fn constructor_validates() {
        let f = Poly::from_ints(&[0, -1, 0, 1]);
        assert!(RealAlgebraic::new(&f, int(-2), int(2)).is_err());
        let at_end = RealAlgebraic::new(&f, frac(1, 2), int(1)).unwrap();
        assert_eq!(at_end.as_rational(), Some(&int(1)));
        assert!(RealAlgebraic::new(&f, frac(1, 4), frac(1, 2)).is_err());
    }
}
