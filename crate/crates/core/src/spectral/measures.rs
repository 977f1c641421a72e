use std::f64::consts::PI;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::Rational;

pub const DEFAULT_QUADRATURE_NODES: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    /// `ν_t`: semicircle, mean `αt`, variance `t`.
    SemicircleNu,
    /// `μ_t = Φ_t[ν_t]`: free Poisson type, possibly with an atom at `−1/α`.
    FreePoissonMu,
    /// Law of `C_T = 1 + αX(T)` under `φ`, possibly with an atom at 0.
    CtLaw,
}

/// One of the three explicit measures, parametrized by `(α, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureSpec {
    kind: MeasureKind,
    alpha: Rational,
    t: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "crate::scalar::rational_string")]
    pub location: Rational,
    #[serde(with = "crate::scalar::rational_string")]
    pub mass: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DensityValue {
    Density(f64),
    /// The point is the pole `−1/α` of the `μ_t` density; only the atom lives there.
    AtomLocation,
}

impl MeasureSpec {
    pub fn new(kind: MeasureKind, alpha: Rational, t: Rational) -> Result<Self> {
        if !t.is_positive() {
            return Err(invalid(format!("time parameter must be positive, got {t}")));
        }
        if kind == MeasureKind::CtLaw && alpha.is_zero() {
            return Err(invalid("the law of C_T needs α ≠ 0"));
        }
        Ok(MeasureSpec { kind, alpha, t })
    }

    pub fn semicircle(alpha: Rational, t: Rational) -> Result<Self> {
        Self::new(MeasureKind::SemicircleNu, alpha, t)
    }

    pub fn free_poisson(alpha: Rational, t: Rational) -> Result<Self> {
        Self::new(MeasureKind::FreePoissonMu, alpha, t)
    }

    pub fn ct_law(alpha: Rational, t: Rational) -> Result<Self> {
        Self::new(MeasureKind::CtLaw, alpha, t)
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    /// `μ_t` with `α = 0` is `ν_t`.
    fn effective_kind(&self) -> MeasureKind {
        if self.kind == MeasureKind::FreePoissonMu && self.alpha.is_zero() {
            MeasureKind::SemicircleNu
        } else {
            self.kind
        }
    }

    fn alpha_f(&self) -> f64 {
        self.alpha.to_f64().unwrap_or(f64::NAN)
    }

    fn t_f(&self) -> f64 {
        self.t.to_f64().unwrap_or(f64::NAN)
    }

    /// `max(1 − 1/(α²t), 0)` for the two atomic kinds, else 0.
    pub fn atom_mass(&self) -> Rational {
        match self.effective_kind() {
            MeasureKind::SemicircleNu => Rational::zero(),
            _ => {
                let a2t = self.alpha.clone() * self.alpha.clone() * self.t.clone();
                let m = Rational::one() - a2t.recip();
                if m.is_positive() {
                    m
                } else {
                    Rational::zero()
                }
            }
        }
    }

    /// Where the atom would sit, whether or not it carries mass.
    fn pole(&self) -> Option<Rational> {
        match self.effective_kind() {
            MeasureKind::SemicircleNu => None,
            MeasureKind::FreePoissonMu => Some(-self.alpha.recip()),
            MeasureKind::CtLaw => Some(Rational::zero()),
        }
    }

    pub fn atom_location(&self) -> Option<Rational> {
        if self.atom_mass().is_zero() {
            None
        } else {
            self.pole()
        }
    }

    pub fn atom(&self) -> Option<Atom> {
        self.atom_location().map(|location| Atom {
            location,
            mass: self.atom_mass(),
        })
    }

    /// Closed interval carrying the absolutely continuous part.
    pub fn support(&self) -> (f64, f64) {
        let (alpha, t) = (self.alpha_f(), self.t_f());
        match self.effective_kind() {
            MeasureKind::CtLaw => {
                let a = alpha.abs() * t.sqrt();
                ((1.0 - a).powi(2), (1.0 + a).powi(2))
            }
            _ => {
                let c = alpha * t;
                (c - 2.0 * t.sqrt(), c + 2.0 * t.sqrt())
            }
        }
    }
}

/// Density of the absolutely continuous part at a float point.
pub fn density_eval(m: &MeasureSpec, x: f64) -> DensityValue {
    if m.effective_kind() == MeasureKind::FreePoissonMu {
        if let Some(p) = m.pole() {
            if p.to_f64() == Some(x) {
                return DensityValue::AtomLocation;
            }
        }
    }
    let (alpha, t) = (m.alpha_f(), m.t_f());
    let value = match m.effective_kind() {
        MeasureKind::SemicircleNu => semicircle_radical(x - alpha * t, t) / (2.0 * PI * t),
        MeasureKind::FreePoissonMu => {
            semicircle_radical(x - alpha * t, t) / (2.0 * PI * t * (1.0 + alpha * x))
        }
        MeasureKind::CtLaw => {
            let a = alpha.abs() * t.sqrt();
            let prod = ((1.0 + a).powi(2) - x) * (x - (1.0 - a).powi(2));
            if prod <= 0.0 {
                0.0
            } else {
                prod.sqrt() / (2.0 * PI * a * a * x)
            }
        }
    };
    DensityValue::Density(value)
}

fn semicircle_radical(d: f64, t: f64) -> f64 {
    let r = 4.0 * t - d * d;
    if r <= 0.0 {
        0.0
    } else {
        r.sqrt()
    }
}

/// `∫ f dM` with `n` interior Gauss–Chebyshev nodes of the second kind on
/// the absolutely continuous part plus the exact atom contribution.
///
/// With `x = center + radius·cos θ` every kind reduces to
/// `(2/π) ∫_0^π w(θ) f(x(θ)) dθ`, `w` smooth and even. For `μ_t` and `C_T`,
/// `w = sin²θ / |1 + a e^{iθ}|²`; when `a² = 1` it is `(1 ∓ cos θ)/2` and does
/// not vanish at one endpoint, so the rule is the closed trapezoid in `θ`.
pub fn integrate(m: &MeasureSpec, f: impl Fn(f64) -> f64, nodes: usize) -> f64 {
    let (alpha, t) = (m.alpha_f(), m.t_f());
    let kind = m.effective_kind();
    let (center, radius, a) = match kind {
        MeasureKind::CtLaw => {
            let a = alpha.abs() * t.sqrt();
            (1.0 + a * a, 2.0 * a, a)
        }
        _ => (alpha * t, 2.0 * t.sqrt(), alpha * t.sqrt()),
    };
    let critical = kind != MeasureKind::SemicircleNu
        && (m.alpha.clone() * m.alpha.clone() * m.t.clone()).is_one();
    let weight = |theta: f64| -> f64 {
        let (s, c) = theta.sin_cos();
        match kind {
            MeasureKind::SemicircleNu => s * s,
            _ if critical => (1.0 - a.signum() * c) / 2.0,
            _ => s * s / ((1.0 + a * c).powi(2) + (a * s).powi(2)),
        }
    };
    let h = PI / (nodes as f64 + 1.0);
    let mut acc = 0.0;
    for k in 0..=nodes + 1 {
        let theta = k as f64 * h;
        let w = weight(theta);
        if w == 0.0 {
            continue;
        }
        let half = if k == 0 || k == nodes + 1 { 0.5 } else { 1.0 };
        acc += half * w * f(center + radius * theta.cos());
    }
    let mut total = acc * h * 2.0 / PI;
    if let Some(atom) = m.atom() {
        total += atom.mass.to_f64().unwrap_or(f64::NAN) * f(atom.location.to_f64().unwrap_or(f64::NAN));
    }
    total
}

pub fn quadrature_moment(m: &MeasureSpec, n: u32) -> f64 {
    quadrature_moment_with_nodes(m, n, DEFAULT_QUADRATURE_NODES)
}

pub fn quadrature_moment_with_nodes(m: &MeasureSpec, n: u32, nodes: usize) -> f64 {
    integrate(m, |x| x.powi(n as i32), nodes)
}
