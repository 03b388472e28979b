use super::field::{Element, ProductAlgebra};
use crate::error::{Error, Result};
use crate::exact::{Poly, Sign};

/// Lattice operations of a product of fields ordered coordinatewise by one
/// real embedding per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeOps {
    pub sup: Element,
    pub inf: Element,
    pub pos_part: Element,
    pub neg_part: Element,
}

fn check_section(t: &ProductAlgebra, section: &[usize]) -> Result<()> {
    if section.len() != t.len() {
        return Err(Error::Precondition(format!(
            "section has {} embeddings for {} factors",
            section.len(),
            t.len()
        )));
    }
    for (i, &k) in section.iter().enumerate() {
        if k >= t.factor(i).num_orderings() {
            return Err(Error::Precondition(format!(
                "factor {i} has no embedding {k}"
            )));
        }
    }
    Ok(())
}

/// `x⁺`: keeps coordinates that are nonnegative under the section.
pub fn positive_part(t: &ProductAlgebra, section: &[usize], x: &Element) -> Element {
    let coords = x
        .coords()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if t.factor(i).sign(c, section[i]) == Sign::Negative {
                Poly::zero()
            } else {
                c.clone()
            }
        })
        .collect();
    t.element(coords).expect("same shape as x")
}

/// `x⁻ = (-x)⁺`, so that `x = x⁺ - x⁻`.
pub fn negative_part(t: &ProductAlgebra, section: &[usize], x: &Element) -> Element {
    positive_part(t, section, &t.neg(x))
}

/// Sup, inf and the positive/negative parts of `x`, after checking
/// `y + (x-y)⁺ = x + (y-x)⁺ = x ∨ y` and `y - (x-y)⁻ = x - (y-x)⁻ = x ∧ y`.
pub fn lattice_ops(
    t: &ProductAlgebra,
    section: &[usize],
    x: &Element,
    y: &Element,
) -> Result<LatticeOps> {
    check_section(t, section)?;
    t.check(x)?;
    t.check(y)?;
    let pick = |take_x: bool, i: usize| {
        if take_x {
            x.coord(i).clone()
        } else {
            y.coord(i).clone()
        }
    };
    let diff = t.sub(x, y);
    let mut sup = Vec::with_capacity(t.len());
    let mut inf = Vec::with_capacity(t.len());
    for (i, d) in diff.coords().iter().enumerate() {
        let x_wins = t.factor(i).sign(d, section[i]) != Sign::Negative;
        sup.push(pick(x_wins, i));
        inf.push(pick(!x_wins, i));
    }
    let sup = t.element(sup)?;
    let inf = t.element(inf)?;
    let rdiff = t.sub(y, x);
    let checks = [
        (
            "y + (x-y)+",
            t.add(y, &positive_part(t, section, &diff)),
            &sup,
        ),
        (
            "x + (y-x)+",
            t.add(x, &positive_part(t, section, &rdiff)),
            &sup,
        ),
        (
            "y - (x-y)-",
            t.sub(y, &negative_part(t, section, &diff)),
            &inf,
        ),
        (
            "x - (y-x)-",
            t.sub(x, &negative_part(t, section, &rdiff)),
            &inf,
        ),
    ];
    for (name, lhs, rhs) in checks {
        if lhs != *rhs {
            return Err(Error::TheoremViolation(format!(
                "{name} = {lhs} but expected {rhs}"
            )));
        }
    }
    Ok(LatticeOps {
        sup,
        inf,
        pos_part: positive_part(t, section, x),
        neg_part: negative_part(t, section, x),
    })
}
