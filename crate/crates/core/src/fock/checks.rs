use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::poly::Poly;
use crate::scalar::{pow, Scalar};
use crate::spectral::{orthogonal_polynomials, JacobiParams};
use crate::Rational;

use super::operator::{FockModel, IntervalGrid, Operator, OperatorExpr};
use super::vector::{FockVector, Word};

/// `P_k(x, t)`, monic orthogonal for `ν_t`.
pub fn p_poly<F: Scalar>(alpha: &F, t: &F, k: usize) -> Poly<F> {
    let j = JacobiParams::semicircle(alpha, t, k);
    orthogonal_polynomials(&j, k).expect("depth matches degree").swap_remove(k)
}

/// `Q_k(x, t)`, monic orthogonal for `μ_t`.
pub fn q_poly<F: Scalar>(alpha: &F, t: &F, k: usize) -> Poly<F> {
    let j = JacobiParams::free_poisson_mu(alpha, t, k);
    orthogonal_polynomials(&j, k).expect("depth matches degree").swap_remove(k)
}

/// Grid-aligned interval `[start, end)` (grid indices) raised to a power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalPower {
    pub start: usize,
    pub end: usize,
    pub power: usize,
}

impl IntervalPower {
    pub fn new(start: usize, end: usize, power: usize) -> Self {
        IntervalPower { start, end, power }
    }
}

fn check_interval<F: Scalar>(grid: &IntervalGrid<F>, start: usize, end: usize) -> Result<()> {
    if start >= end || end > grid.cells() {
        return Err(invalid(format!(
            "[{start}, {end}) is not a nonempty interval of grid indices 0..={}",
            grid.cells()
        )));
    }
    Ok(())
}

fn disjoint(a: (usize, usize), b: (usize, usize)) -> bool {
    a.1 <= b.0 || b.1 <= a.0
}

/// `P_{k_1}(X(I_1),|I_1|) ⋯ P_{k_{n−1}}(X(I_{n−1}),|I_{n−1}|) Q_{k_n}(X(I_n),|I_n|) Ω`.
pub fn interval_product_vector<F: Scalar>(model: &FockModel<F>, groups: &[IntervalPower]) -> Result<FockVector<F>> {
    let grid = model.grid();
    for g in groups {
        check_interval(grid, g.start, g.end)?;
    }
    for pair in groups.windows(2) {
        if !disjoint((pair[0].start, pair[0].end), (pair[1].start, pair[1].end)) {
            return Err(invalid("consecutive intervals overlap"));
        }
    }
    // a zero degree drops its interval and can make neighbours adjacent
    if groups.len() > 1 && groups.iter().any(|g| g.power == 0) {
        return Err(invalid("degree 0 is only allowed for a single interval"));
    }
    let last = groups.len().saturating_sub(1);
    let factors: Vec<Operator<F>> = groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let len = grid.time(g.end) - grid.time(g.start);
            let poly = if i == last {
                q_poly(model.alpha(), &len, g.power)
            } else {
                p_poly(model.alpha(), &len, g.power)
            };
            Operator::poly_in(poly, OperatorExpr::interval(g.start, g.end))
        })
        .collect();
    model.apply_product(&factors, &FockVector::vacuum())
}

/// `χ_{I_1}^{⊗k_1} ⊗ ⋯ ⊗ χ_{I_n}^{⊗k_n}` in the cell-word basis.
pub fn elementary_tensor<F: Scalar>(groups: &[IntervalPower]) -> FockVector<F> {
    let mut words: Vec<Word> = vec![Vec::new()];
    for g in groups {
        for _ in 0..g.power {
            words = words
                .into_iter()
                .flat_map(|w| {
                    (g.start + 1..=g.end).map(move |c| {
                        let mut next = w.clone();
                        next.push(c);
                        next
                    })
                })
                .collect();
        }
    }
    FockVector::from_terms(words.into_iter().map(|w| (w, F::one())))
}

/// A polynomial in one increment `X([start, end))`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncrementPoly<F: Scalar = Rational> {
    pub start: usize,
    pub end: usize,
    pub poly: Poly<F>,
}

impl<F: Scalar> IncrementPoly<F> {
    pub fn new(start: usize, end: usize, poly: Poly<F>) -> Self {
        IncrementPoly { start, end, poly }
    }

    /// `p(X) − ψ_T[p(X)]`.
    pub fn psi_centered(model: &FockModel<F>, start: usize, end: usize, poly: Poly<F>) -> Result<Self> {
        let raw = IncrementPoly { start, end, poly };
        let shift = model.psi_product(&[raw.operator()])?;
        let poly = raw.poly.clone() - Poly::constant(shift);
        Ok(IncrementPoly { poly, ..raw })
    }

    pub fn operator(&self) -> Operator<F> {
        Operator::poly_in(self.poly.clone(), OperatorExpr::interval(self.start, self.end))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "F: Scalar"))]
pub struct FreenessReport<F = Rational> {
    #[serde(with = "crate::scalar::rational_string")]
    pub psi_of_product: F,
    #[serde(with = "crate::scalar::rational_string")]
    pub phi_of_product: F,
    #[serde(with = "crate::scalar::rational_strings")]
    pub phi_of_factors: Vec<F>,
}

impl<F: Scalar> FreenessReport<F> {
    pub fn psi_vanishes(&self) -> bool {
        self.psi_of_product.is_zero()
    }

    pub fn phi_factorizes(&self) -> bool {
        let prod = self.phi_of_factors.iter().cloned().fold(F::one(), |a, b| a * b);
        prod == self.phi_of_product
    }

    pub fn holds(&self) -> bool {
        self.psi_vanishes() && self.phi_factorizes()
    }
}

/// For `ψ_T`-centered factors in alternating disjoint increments:
/// `ψ_T[F_1⋯F_n]` and `φ[F_1⋯F_n]` against `Π φ[F_i]`.
pub fn freeness_check<F: Scalar>(model: &FockModel<F>, factors: &[IncrementPoly<F>]) -> Result<FreenessReport<F>> {
    for f in factors {
        check_interval(model.grid(), f.start, f.end)?;
    }
    for pair in factors.windows(2) {
        if !disjoint((pair[0].start, pair[0].end), (pair[1].start, pair[1].end)) {
            return Err(invalid("consecutive factors must use disjoint increments"));
        }
    }
    let ops: Vec<Operator<F>> = factors.iter().map(IncrementPoly::operator).collect();
    let mut phi_of_factors = Vec::with_capacity(ops.len());
    for (i, op) in ops.iter().enumerate() {
        let psi = model.psi_product(std::slice::from_ref(op))?;
        if !psi.is_zero() {
            return Err(Error::PreconditionViolation(format!(
                "factor {} is not ψ-centered: ψ_T = {psi}",
                i + 1
            )));
        }
        phi_of_factors.push(model.phi_product(std::slice::from_ref(op))?);
    }
    Ok(FreenessReport {
        psi_of_product: model.psi_product(&ops)?,
        phi_of_product: model.phi_product(&ops)?,
        phi_of_factors,
    })
}

fn check_times<F: Scalar>(model: &FockModel<F>, t_idx: usize, s_idx: usize, b: &OperatorExpr<F>) -> Result<()> {
    if t_idx == 0 || t_idx >= s_idx || s_idx > model.grid().cells() {
        return Err(invalid(format!(
            "need grid indices 0 < t < s ≤ {}, got t = {t_idx}, s = {s_idx}",
            model.grid().cells()
        )));
    }
    if let Some(bad) = b.letters().find(|&i| i > t_idx) {
        return Err(invalid(format!("B uses cell {bad}, which lies after t")));
    }
    Ok(())
}

/// `(φ[B* Q_n(X(s), s)], φ[B* Q_n(X(t), t)])` for `B` in the algebra of `[0, t)`.
pub fn martingale_check<F: Scalar>(
    model: &FockModel<F>,
    n: usize,
    t_idx: usize,
    s_idx: usize,
    b: &OperatorExpr<F>,
) -> Result<(F, F)> {
    check_times(model, t_idx, s_idx, b)?;
    let grid = model.grid();
    let side = |idx: usize| -> Result<F> {
        let q = q_poly(model.alpha(), &grid.time(idx), n);
        model.phi_product(&[b.adjoint().into(), Operator::poly_in(q, OperatorExpr::interval(0, idx))])
    };
    Ok((side(s_idx)?, side(t_idx)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "F: Scalar"))]
pub struct ObstructionReport<F = Rational> {
    /// `φ[B* X(s) X(t)]`
    #[serde(with = "crate::scalar::rational_string")]
    pub lhs: F,
    /// `φ[B* (X(t)² + α(s−t) X(t))]`
    #[serde(with = "crate::scalar::rational_string")]
    pub rhs: F,
    /// `φ[B* X(t)²]`, what `E[X(s)|t] X(t) = X(t)²` would give
    #[serde(with = "crate::scalar::rational_string")]
    pub naive: F,
}

impl<F: Scalar> ObstructionReport<F> {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn cond_exp_obstruction<F: Scalar>(
    model: &FockModel<F>,
    t_idx: usize,
    s_idx: usize,
    b: &OperatorExpr<F>,
) -> Result<ObstructionReport<F>> {
    check_times(model, t_idx, s_idx, b)?;
    let grid = model.grid();
    let xs = OperatorExpr::interval(0, s_idx);
    let xt = OperatorExpr::interval(0, t_idx);
    let bstar = b.adjoint();
    let gap = model.alpha().clone() * (grid.time(s_idx) - grid.time(t_idx));
    let xt2 = xt.mul(&xt);
    Ok(ObstructionReport {
        lhs: model.phi(&bstar.mul(&xs).mul(&xt))?,
        rhs: model.phi(&bstar.mul(&xt2.add(&xt.scale(&gap))))?,
        naive: model.phi(&bstar.mul(&xt2))?,
    })
}

fn check_kernel_params<F: Scalar>(alpha: &F, t: &F) -> Result<()> {
    if alpha.is_zero() {
        return Err(invalid("the kernel vector needs α ≠ 0"));
    }
    if *t <= F::zero() {
        return Err(invalid(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// `η_D = Σ_{n ≤ D} (−1/(αt))^n χ_{[0,t)}^{⊗n}` on a grid of `cells` cells
/// over `[0, t)`, with its model.
pub fn kernel_vector<F: Scalar>(alpha: &F, t: &F, cells: usize, depth: usize) -> Result<(FockModel<F>, FockVector<F>)> {
    check_kernel_params(alpha, t)?;
    let model = FockModel::uniform(alpha.clone(), t.clone(), cells)?;
    let r = -(F::one() / (alpha.clone() * t.clone()));
    let mut eta = FockVector::zero();
    for n in 0..=depth {
        let chi_n = elementary_tensor::<F>(&[IntervalPower::new(0, cells, n)]);
        eta.add_scaled(&chi_n, &pow(&r, n as u32));
    }
    Ok((model, eta))
}

/// `‖η_D‖²` on the one-cell grid: `Σ_{n ≤ D} (1/(α²t))^n`.
pub fn kernel_norm_sq<F: Scalar>(alpha: &F, t: &F, depth: usize) -> Result<F> {
    let (model, eta) = kernel_vector(alpha, t, 1, depth)?;
    Ok(model.inner(&eta, &eta))
}

/// `‖C_t η_D‖ / ‖η_D‖` on the one-cell grid.
pub fn kernel_residual<F: Scalar>(alpha: &F, t: &F, depth: usize) -> Result<f64> {
    let (model, eta) = kernel_vector(alpha, t, 1, depth)?;
    let image = model.apply_expr(&model.ct(), &eta)?;
    let ratio = model.inner(&image, &image) / model.inner(&eta, &eta);
    Ok(ratio.to_float().sqrt())
}

/// `‖C_t η_D‖` on the one-cell grid, without normalization. Only the two
/// top-depth words survive, so this is `(α²t)^{−D/2} √(1 + α²t)`.
pub fn kernel_residual_abs<F: Scalar>(alpha: &F, t: &F, depth: usize) -> Result<f64> {
    let (model, eta) = kernel_vector(alpha, t, 1, depth)?;
    let image = model.apply_expr(&model.ct(), &eta)?;
    Ok(model.inner(&image, &image).to_float().sqrt())
}

/// `⟨Ω, (X(s) + s/(αt)) η_D⟩` with `s` the grid point `s_idx` of a grid of
/// `cells` cells over `[0, t)`.
pub fn eta_s_vacuum_coefficient<F: Scalar>(alpha: &F, t: &F, cells: usize, s_idx: usize, depth: usize) -> Result<F> {
    let (model, eta) = kernel_vector(alpha, t, cells, depth)?;
    if s_idx > cells {
        return Err(invalid(format!("s index {s_idx} beyond the grid")));
    }
    let s = model.grid().time(s_idx);
    let shift = s / (alpha.clone() * t.clone());
    let op = OperatorExpr::interval(0, s_idx).add(&OperatorExpr::scalar(shift));
    Ok(model.apply_expr(&op, &eta)?.vacuum_coef())
}
