//! The generator `A_t = α(∂_x − L_{μ_t}) + ∂_x L_{ν_t}` on polynomials in
//! `(x, t)`, and the martingale polynomials it annihilates up to `∂_t`.
//!
//! `α` is a fixed scalar per call; `t` stays symbolic so that `∂_t` is exact.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cumulants::{moments_from_free_cumulants, moments_from_two_state_cumulants, CumulantSpec, MomentSequence, TwoStateElementSpec};
use crate::error::{invalid, Error, Result};
use crate::poly::{reciprocal_unit_series, series_mul, BiPoly, Poly};
use crate::scalar::Scalar;
use crate::spectral::{orthogonal_polynomials, JacobiParams};

/// Highest degree for which the polynomial families are built.
pub const MAX_FAMILY_DEGREE: usize = 16;

fn t_const<F: Scalar>(c: F) -> Poly<F> {
    Poly::constant(c)
}

/// `c · t`.
fn t_times<F: Scalar>(c: &F) -> Poly<F> {
    Poly::monomial(c.clone(), 1)
}

fn check_degree(n_max: usize) -> Result<()> {
    if n_max > MAX_FAMILY_DEGREE {
        return Err(Error::SizeLimit {
            what: "polynomial family degree",
            requested: n_max,
            cap: MAX_FAMILY_DEGREE,
        });
    }
    Ok(())
}

/// Jacobi parameters over `Q[t]`: `β = (β_0, αt, αt, …)`, `γ = (t, t, …)`.
fn symbolic_jacobi<F: Scalar>(alpha: &F, first_beta: Poly<F>, depth: usize) -> JacobiParams<Poly<F>> {
    JacobiParams::constant_tail(first_beta, t_times(alpha), t_times(&F::one()), depth)
}

/// `Q_0..=Q_{n_max}`, monic orthogonal for `μ_t`.
pub fn q_polynomials<F: Scalar>(n_max: usize, alpha: &F) -> Result<Vec<BiPoly<F>>> {
    check_degree(n_max)?;
    orthogonal_polynomials(&symbolic_jacobi(alpha, Poly::zero(), n_max), n_max)
}

/// `P_0..=P_{n_max}`, monic orthogonal for `ν_t`.
pub fn p_polynomials<F: Scalar>(n_max: usize, alpha: &F) -> Result<Vec<BiPoly<F>>> {
    check_degree(n_max)?;
    orthogonal_polynomials(&symbolic_jacobi(alpha, t_times(alpha), n_max), n_max)
}

/// `(f(x) − f(y))/(x − y)` as a list indexed by the `y`-degree: entry `j`
/// is the `(x, t)`-coefficient of `y^j`.
pub fn difference_quotient<F: Scalar>(f: &BiPoly<F>) -> Vec<BiPoly<F>> {
    let deg = f.degree().unwrap_or(0);
    (0..deg)
        .map(|j| {
            // x^k contributes x^{k−1−j} y^j for k > j
            Poly::new(f.coeffs()[j + 1..].to_vec())
        })
        .collect()
}

/// `L[f](x) = ∫ (f(x) − f(y))/(x − y) dm(y)` for a measure given by its
/// moments `m_1, m_2, …` (polynomials in `t`; `m_0 = 1`).
pub fn l_apply<F: Scalar>(f: &BiPoly<F>, moments: &MomentSequence<Poly<F>>) -> Result<BiPoly<F>> {
    let dq = difference_quotient(f);
    if dq.len() > moments.len() + 1 {
        return Err(invalid(format!(
            "need moments up to order {}, have {}",
            dq.len() - 1,
            moments.len()
        )));
    }
    Ok(dq
        .iter()
        .enumerate()
        .fold(BiPoly::zero(), |acc, (j, c)| acc + c.scale(&moments.moment(j))))
}

/// Moments of `ν_t` as polynomials in `t`: free cumulants `(αt, t)`.
pub fn nu_moments<F: Scalar>(alpha: &F, n: usize) -> Result<MomentSequence<Poly<F>>> {
    let mut c = vec![Poly::zero(); n.max(2)];
    c[0] = t_times(alpha);
    c[1] = t_times(&F::one());
    moments_from_free_cumulants(&CumulantSpec::new(c), n)
}

/// Moments of `μ_t` as polynomials in `t`: two-state cumulants `(0, t)`,
/// free cumulants `(αt, t)`.
pub fn mu_moments<F: Scalar>(alpha: &F, n: usize) -> Result<MomentSequence<Poly<F>>> {
    let len = n.max(2);
    let mut phi = vec![Poly::zero(); len];
    let mut psi = vec![Poly::zero(); len];
    phi[1] = t_times(&F::one());
    psi[0] = t_times(alpha);
    psi[1] = t_times(&F::one());
    let spec = TwoStateElementSpec::new(CumulantSpec::new(phi), CumulantSpec::new(psi))?;
    moments_from_two_state_cumulants(&spec, n)
}

/// `L_{ν_t}` and `L_{μ_t}` with the moment tables they need, built once.
pub struct Generator<F: Scalar> {
    alpha: F,
    nu: MomentSequence<Poly<F>>,
    mu: MomentSequence<Poly<F>>,
}

impl<F: Scalar> Generator<F> {
    /// Valid on polynomials of `x`-degree at most `max_degree`.
    pub fn new(alpha: F, max_degree: usize) -> Result<Self> {
        let n = max_degree.saturating_sub(1).max(1);
        Ok(Generator {
            nu: nu_moments(&alpha, n)?,
            mu: mu_moments(&alpha, n)?,
            alpha,
        })
    }

    pub fn l_nu(&self, f: &BiPoly<F>) -> Result<BiPoly<F>> {
        l_apply(f, &self.nu)
    }

    pub fn l_mu(&self, f: &BiPoly<F>) -> Result<BiPoly<F>> {
        l_apply(f, &self.mu)
    }

    /// `A_t f = α(∂_x f − L_{μ_t} f) + ∂_x L_{ν_t} f`.
    pub fn apply(&self, f: &BiPoly<F>) -> Result<BiPoly<F>> {
        let drift = (f.d_dx() - self.l_mu(f)?).scale(&t_const(self.alpha.clone()));
        Ok(drift + self.l_nu(f)?.d_dx())
    }
}

pub fn generator_apply<F: Scalar>(f: &BiPoly<F>, alpha: &F) -> Result<BiPoly<F>> {
    Generator::new(alpha.clone(), f.degree().unwrap_or(0))?.apply(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorRow {
    pub n: usize,
    pub residual_is_zero: bool,
}

/// `∂_t Q_n + A_t Q_n = 0` for `n = 0..=n_max`.
pub fn generator_check<F: Scalar>(n_max: usize, alpha: &F) -> Result<Vec<GeneratorRow>> {
    let q = q_polynomials(n_max, alpha)?;
    let gen = Generator::new(alpha.clone(), n_max)?;
    q.iter()
        .enumerate()
        .map(|(n, qn)| {
            let residual = qn.d_dt() + gen.apply(qn)?;
            Ok(GeneratorRow {
                n,
                residual_is_zero: residual.is_zero(),
            })
        })
        .collect()
}

/// Largest series order accepted by [`generating_function_check`].
pub const MAX_SERIES_ORDER: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesRow {
    pub n: usize,
    /// `[z^n] H = Q_n`
    pub h_matches_q: bool,
    /// `[z^n] 1/(1 − xz + t(αz + z²)) = P_n`
    pub inverse_matches_p: bool,
    /// `L_{ν_t} Q_n = Q_{n−1}` (`n ≥ 1`)
    pub nu_ladder: bool,
    /// `L_{μ_t} Q_n = P_{n−1}` (`n ≥ 1`)
    pub mu_ladder: bool,
    /// `α(∂_x − L_{μ_t})[z^n]H + ∂_x L_{ν_t}[z^n]H = −∂_t [z^n]H`
    pub generator_identity: bool,
}

impl SeriesRow {
    pub fn holds(&self) -> bool {
        self.h_matches_q && self.inverse_matches_p && self.nu_ladder && self.mu_ladder && self.generator_identity
    }
}

/// Expand `H(x,t,z) = (1 + tαz)/(1 − xz + t(αz + z²))` and its denominator's
/// reciprocal to order `order` in `z` and check them coefficientwise.
pub fn generating_function_check<F: Scalar>(order: usize, alpha: &F) -> Result<Vec<SeriesRow>> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::SizeLimit {
            what: "generating-function order",
            requested: order,
            cap: MAX_SERIES_ORDER,
        });
    }
    let x = BiPoly::<F>::var();
    let t = BiPoly::<F>::t();
    let alpha_t = t.scale(&t_const(alpha.clone()));
    let denom = vec![BiPoly::one(), alpha_t.clone() - x, t];
    let inverse = reciprocal_unit_series(&denom, order + 1);
    let h = series_mul(&[BiPoly::one(), alpha_t], &inverse, order + 1);

    let q = q_polynomials(order, alpha)?;
    let p = p_polynomials(order, alpha)?;
    let gen = Generator::new(alpha.clone(), order)?;
    (0..=order)
        .map(|n| {
            let ladder = |l: &BiPoly<F>, target: &[BiPoly<F>]| n == 0 || *l == target[n - 1];
            Ok(SeriesRow {
                n,
                h_matches_q: h[n] == q[n],
                inverse_matches_p: inverse[n] == p[n],
                nu_ladder: ladder(&gen.l_nu(&q[n])?, &q),
                mu_ladder: ladder(&gen.l_mu(&q[n])?, &p),
                generator_identity: gen.apply(&h[n])? == -h[n].d_dt(),
            })
        })
        .collect()
}
