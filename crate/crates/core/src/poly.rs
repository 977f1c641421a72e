//! Dense univariate polynomials over any [`Ring`], and the bivariate
//! polynomials in `(x, t)` built by nesting them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{ring_from_usize, Ring};

/// Polynomial `c_0 + c_1 v + c_2 v^2 + ...`; trailing zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

/// Polynomial in `x` whose coefficients are polynomials in `t`.
pub type BiPoly<T> = Poly<Poly<T>>;

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// The variable itself.
    pub fn var() -> Self {
        Self::new(vec![R::zero(), R::one()])
    }

    /// `c * v^k`.
    pub fn monomial(c: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, at: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * ring_from_usize::<R>(k))
                .collect(),
        )
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl FnMut(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Composition `self(inner(v))`.
    pub fn compose(&self, inner: &Poly<R>) -> Poly<R> {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc * inner.clone() + Poly::constant(c.clone()))
    }
}

impl<R: Ring> BiPoly<R> {
    /// Coefficient of `x^i t^j`.
    pub fn coeff_xt(&self, i: usize, j: usize) -> R {
        self.coeff(i).coeff(j)
    }

    /// Nonzero terms as `((x_degree, t_degree), coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), R)> + '_ {
        self.coeffs().iter().enumerate().flat_map(|(i, ct)| {
            ct.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| ((i, j), c.clone()))
        })
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), R)>) -> Self {
        let mut acc = Self::zero();
        for ((i, j), c) in terms {
            acc = acc + Poly::monomial(Poly::monomial(c, j), i);
        }
        acc
    }

    /// The variable `t` as a constant-in-`x` polynomial.
    pub fn t() -> Self {
        Poly::constant(Poly::var())
    }

    pub fn d_dx(&self) -> Self {
        self.derivative()
    }

    pub fn d_dt(&self) -> Self {
        self.map_coeffs(|c| c.derivative())
    }

    /// Specialize `t = t0`.
    pub fn eval_t(&self, t0: &R) -> Poly<R> {
        self.map_coeffs(|c| c.eval(t0))
    }

    /// Multiply by a polynomial in `t` alone.
    pub fn scale_t(&self, c: &Poly<R>) -> Self {
        self.scale(c)
    }
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Poly::constant(R::one())
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Poly::new(long)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})v")?,
                _ => write!(f, "({c:?})v^{k}")?,
            }
        }
        Ok(())
    }
}

/// Reciprocal of a truncated power series whose constant term is one:
/// returns `b` with `(sum a_k z^k)(sum b_k z^k) = 1 + O(z^order)`.
pub fn reciprocal_unit_series<R: Ring>(a: &[R], order: usize) -> Vec<R> {
    assert!(
        a.first().is_some_and(|c| c.is_one()),
        "series must start with 1"
    );
    let mut b: Vec<R> = Vec::with_capacity(order);
    for n in 0..order {
        if n == 0 {
            b.push(R::one());
            continue;
        }
        let mut acc = R::zero();
        for k in 1..=n.min(a.len().saturating_sub(1)) {
            acc = acc + a[k].clone() * b[n - k].clone();
        }
        b.push(-acc);
    }
    b
}

/// Truncated product of two power series.
pub fn series_mul<R: Ring>(a: &[R], b: &[R], order: usize) -> Vec<R> {
    let mut out = vec![R::zero(); order];
    for (i, x) in a.iter().enumerate().take(order) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order - i) {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::BigRational;

    type P = Poly<BigRational>;

    fn p(c: &[i64]) -> P {
        Poly::new(c.iter().map(|&k| rat(k, 1)).collect())
    }

    #[test]
    fn arithmetic_and_normalization() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[1, 1]) * p(&[-1, 1]), p(&[-1, 0, 1]));
        assert!((p(&[3, 4]) - p(&[3, 4])).is_zero());
        assert_eq!(p(&[0, 0, 1]).derivative(), p(&[0, 2]));
        assert_eq!(p(&[1, 2, 3]).eval(&rat(2, 1)), rat(17, 1));
        assert_eq!(p(&[0, 0, 1]).compose(&p(&[-1, 1])), p(&[1, -2, 1]));
    }

    #[test]
    fn bivariate_terms_roundtrip() {
        // x^2 - t x - t
        let q2 = BiPoly::<BigRational>::from_terms([
            ((2, 0), rat(1, 1)),
            ((1, 1), rat(-1, 1)),
            ((0, 1), rat(-1, 1)),
        ]);
        assert_eq!(q2.coeff_xt(1, 1), rat(-1, 1));
        let back = BiPoly::from_terms(q2.terms());
        assert_eq!(back, q2);
        assert_eq!(q2.d_dt(), BiPoly::from_terms([((1, 0), rat(-1, 1)), ((0, 0), rat(-1, 1))]));
        assert_eq!(q2.eval_t(&rat(2, 1)), p(&[-2, -2, 1]));
    }

    #[test]
    fn geometric_series_reciprocal() {
        let inv = reciprocal_unit_series(&[rat(1, 1), rat(-1, 1)], 5);
        assert!(inv.iter().all(|c| *c == rat(1, 1)));
        let back = series_mul(&[rat(1, 1), rat(-1, 1)], &inv, 5);
        assert_eq!(back[0], rat(1, 1));
        assert!(back[1..].iter().all(|c| c.is_zero()));
    }
}
