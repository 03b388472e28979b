//! Complex root approximations. They only propose candidates; every
//! consumer verifies the result exactly.

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;
use super::Poly;

pub type GaussianRational = Complex<Rational>;

const ABERTH_ITERATIONS: usize = 500;
const NEWTON_ITERATIONS: usize = 16;

/// All complex roots of the squarefree polynomial `f`, within about
/// `2^-bits`, as dyadic Gaussian rationals. `None` when the float stage
/// fails to converge or two roots coincide.
pub fn complex_roots(f: &Poly, bits: u64) -> Option<Vec<GaussianRational>> {
    let seeds = aberth(f)?;
    let df = f.derivative();
    let scale = Rational::from_integer(BigInt::one() << bits);
    let round = |x: &Rational| (x * &scale).round() / &scale;
    let tolerance = Rational::new(BigInt::one(), BigInt::one() << bits);
    let mut roots = Vec::with_capacity(seeds.len());
    for s in seeds {
        let mut z = Complex::new(Rational::from_float(s.re)?, Rational::from_float(s.im)?);
        for _ in 0..NEWTON_ITERATIONS {
            let slope = eval(&df, &z);
            if slope.is_zero() {
                return None;
            }
            let step = eval(f, &z) / slope;
            z = Complex::new(round(&(&z.re - &step.re)), round(&(&z.im - &step.im)));
            if step.re.abs() <= tolerance && step.im.abs() <= tolerance {
                break;
            }
        }
        roots.push(z);
    }
    for (i, a) in roots.iter().enumerate() {
        if roots[..i].contains(a) {
            return None;
        }
    }
    Some(roots)
}

pub fn eval(f: &Poly, z: &GaussianRational) -> GaussianRational {
    f.coeffs().iter().rev().fold(Complex::zero(), |acc, c| {
        acc * z + Complex::new(c.clone(), Rational::zero())
    })
}

/// Simultaneous Aberth iteration in floating point.
fn aberth(f: &Poly) -> Option<Vec<Complex<f64>>> {
    let lead = f.leading()?.to_f64()?;
    let c: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|q| q.to_f64().map(|x| x / lead))
        .collect::<Option<_>>()?;
    let d = c.len() - 1;
    let p = |z: Complex<f64>| {
        c.iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &ci| acc * z + ci)
    };
    let dp = |z: Complex<f64>| {
        c.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, (i, &ci)| {
                acc * z + ci * i as f64
            })
    };
    let radius = 1.0 + c[..d].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex<f64>> = (0..d)
        .map(|k| {
            Complex::from_polar(
                radius / 2.0,
                std::f64::consts::TAU * k as f64 / d as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..ABERTH_ITERATIONS {
        let mut moved = 0.0f64;
        for k in 0..d {
            let w = p(z[k]) / dp(z[k]);
            let repulsion: Complex<f64> = (0..d)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = w / (Complex::new(1.0, 0.0) - w * repulsion);
            if !step.is_finite() {
                return None;
            }
            z[k] -= step;
            moved = moved.max(step.norm() / (1.0 + z[k].norm()));
        }
        if moved < 1e-15 {
            return Some(z);
        }
    }
    None
}
