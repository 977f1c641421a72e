use std::collections::BTreeMap;

use crate::error::{invalid, Result};
use crate::poly::Poly;
use crate::scalar::{ring_from_usize, Scalar};
use crate::Rational;

use super::vector::{FockVector, Word};

/// `[0, T)` cut into `N` cells `I_i = [(i−1)T/N, iT/N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalGrid<F = Rational> {
    total_time: F,
    cells: usize,
}

impl<F: Scalar> IntervalGrid<F> {
    pub fn new(total_time: F, cells: usize) -> Result<Self> {
        if total_time <= F::zero() {
            return Err(invalid(format!("T must be positive, got {total_time}")));
        }
        if cells == 0 {
            return Err(invalid("the grid needs at least one cell"));
        }
        Ok(IntervalGrid { total_time, cells })
    }

    pub fn total_time(&self) -> &F {
        &self.total_time
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn cell_length(&self) -> F {
        self.total_time.clone() / ring_from_usize::<F>(self.cells)
    }

    /// Time of the grid point with index `k ∈ 0..=N`.
    pub fn time(&self, k: usize) -> F {
        self.cell_length() * ring_from_usize::<F>(k)
    }
}

/// Noncommutative polynomial in the cell generators `X(I_i)`: a map from
/// generator words (read left to right as a product) to coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorExpr<F: Scalar = Rational> {
    terms: BTreeMap<Word, F>,
}

impl<F: Scalar> std::fmt::Debug for OperatorExpr<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(w, c)| (w, c.to_string()))).finish()
    }
}

impl<F: Scalar> OperatorExpr<F> {
    pub fn zero() -> Self {
        OperatorExpr { terms: BTreeMap::new() }
    }

    pub fn scalar(c: F) -> Self {
        Self::from_terms([(Vec::new(), c)])
    }

    pub fn identity() -> Self {
        Self::scalar(F::one())
    }

    pub fn generator(i: usize) -> Self {
        Self::from_terms([(vec![i], F::one())])
    }

    /// `X([a, b))` for grid indices `a < b`: the sum of the generators of
    /// cells `a+1..=b`.
    pub fn interval(a: usize, b: usize) -> Self {
        Self::from_terms((a + 1..=b).map(|i| (vec![i], F::one())))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, F)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    fn add_term(&mut self, word: Word, coef: F) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(word).or_insert_with(F::zero);
        *slot = slot.clone() + coef;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Every generator index used.
    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().flatten().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, k)| (w.clone(), k.clone() * c.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// `p(self)`, expanded.
    pub fn poly(p: &Poly<F>, of: &Self) -> Self {
        p.coeffs()
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(of).add(&Self::scalar(c.clone())))
    }

    /// `A*`: generators are self-adjoint and coefficients real, so words reverse.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| {
            let mut r = w.clone();
            r.reverse();
            (r, c.clone())
        }))
    }
}

/// An operator in a product: either an expanded expression or a polynomial
/// in an expression, applied by Horner's scheme without expansion.
#[derive(Clone, Debug)]
pub enum Operator<F: Scalar = Rational> {
    Expr(OperatorExpr<F>),
    PolyIn { poly: Poly<F>, of: OperatorExpr<F> },
}

impl<F: Scalar> From<OperatorExpr<F>> for Operator<F> {
    fn from(e: OperatorExpr<F>) -> Self {
        Operator::Expr(e)
    }
}

impl<F: Scalar> Operator<F> {
    pub fn poly_in(poly: Poly<F>, of: OperatorExpr<F>) -> Self {
        Operator::PolyIn { poly, of }
    }

    fn letters(&self) -> Vec<usize> {
        match self {
            Operator::Expr(e) => e.letters().collect(),
            Operator::PolyIn { of, .. } => of.letters().collect(),
        }
    }

    pub fn expand(&self) -> OperatorExpr<F> {
        match self {
            Operator::Expr(e) => e.clone(),
            Operator::PolyIn { poly, of } => OperatorExpr::poly(poly, of),
        }
    }
}

/// Grid plus the parameter `α`: the operators
/// `X(g) = a⁺(g) + a⁻(g) + α⟨g⟩`, except that `X(g)Ω = g`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockModel<F = Rational> {
    grid: IntervalGrid<F>,
    alpha: F,
}

impl<F: Scalar> FockModel<F> {
    pub fn new(grid: IntervalGrid<F>, alpha: F) -> Self {
        FockModel { grid, alpha }
    }

    /// Convenience: `N` cells over `[0, T)`.
    pub fn uniform(alpha: F, total_time: F, cells: usize) -> Result<Self> {
        Ok(Self::new(IntervalGrid::new(total_time, cells)?, alpha))
    }

    pub fn grid(&self) -> &IntervalGrid<F> {
        &self.grid
    }

    pub fn alpha(&self) -> &F {
        &self.alpha
    }

    pub fn cell_length(&self) -> F {
        self.grid.cell_length()
    }

    fn check_cell(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.grid.cells {
            return Err(invalid(format!("cell index {i} outside 1..={}", self.grid.cells)));
        }
        Ok(())
    }

    fn check_letters(&self, letters: impl IntoIterator<Item = usize>) -> Result<()> {
        letters.into_iter().try_for_each(|i| self.check_cell(i))
    }

    /// `X(I_i) v`.
    pub fn apply_increment(&self, i: usize, v: &FockVector<F>) -> Result<FockVector<F>> {
        self.check_cell(i)?;
        Ok(self.increment_unchecked(i, v))
    }

    fn increment_unchecked(&self, i: usize, v: &FockVector<F>) -> FockVector<F> {
        let h = self.cell_length();
        let mass = self.alpha.clone() * h.clone();
        let mut out = FockVector::zero();
        for (w, c) in v.terms() {
            let mut created = Vec::with_capacity(w.len() + 1);
            created.push(i);
            created.extend_from_slice(w);
            out.add_term(created, c.clone());
            if w.is_empty() {
                // X(g)Ω = g: no mass term on the vacuum
                continue;
            }
            out.add_term(w.clone(), c.clone() * mass.clone());
            if w[0] == i {
                out.add_term(w[1..].to_vec(), c.clone() * h.clone());
            }
        }
        out
    }

    pub fn apply_expr(&self, expr: &OperatorExpr<F>, v: &FockVector<F>) -> Result<FockVector<F>> {
        self.check_letters(expr.letters())?;
        let terms: Vec<(&[usize], F)> = expr.terms().map(|(w, c)| (w.as_slice(), c.clone())).collect();
        Ok(self.apply_terms(&terms, v))
    }

    /// `Σ c_w X_w v` with words sharing a last letter grouped, so common
    /// suffixes are applied once.
    fn apply_terms(&self, terms: &[(&[usize], F)], v: &FockVector<F>) -> FockVector<F> {
        let mut out = FockVector::zero();
        let mut by_last: BTreeMap<usize, Vec<(&[usize], F)>> = BTreeMap::new();
        for (w, c) in terms {
            match w.split_last() {
                None => out.add_scaled(v, c),
                Some((&last, rest)) => by_last.entry(last).or_default().push((rest, c.clone())),
            }
        }
        for (i, sub) in by_last {
            let xv = self.increment_unchecked(i, v);
            out.add_scaled(&self.apply_terms(&sub, &xv), &F::one());
        }
        out
    }

    pub fn apply(&self, op: &Operator<F>, v: &FockVector<F>) -> Result<FockVector<F>> {
        match op {
            Operator::Expr(e) => self.apply_expr(e, v),
            Operator::PolyIn { poly, of } => {
                self.check_letters(of.letters())?;
                let Some(top) = poly.coeffs().last() else {
                    return Ok(FockVector::zero());
                };
                let mut acc = v.scale(top);
                for c in poly.coeffs().iter().rev().skip(1) {
                    acc = self.apply_expr(of, &acc)?;
                    acc.add_scaled(v, c);
                }
                Ok(acc)
            }
        }
    }

    /// `F_1 F_2 … F_n v`, rightmost factor first.
    pub fn apply_product(&self, factors: &[Operator<F>], v: &FockVector<F>) -> Result<FockVector<F>> {
        for f in factors {
            self.check_letters(f.letters())?;
        }
        factors.iter().rev().try_fold(v.clone(), |acc, f| self.apply(f, &acc))
    }

    /// `C_T = 1 + αX(T)`.
    pub fn ct(&self) -> OperatorExpr<F> {
        OperatorExpr::identity().add(&OperatorExpr::interval(0, self.grid.cells).scale(&self.alpha))
    }

    /// `C_T Ω = Ω + α Σ χ_i`.
    pub fn ct_vacuum(&self) -> FockVector<F> {
        let mut v = FockVector::vacuum();
        for i in 1..=self.grid.cells {
            v.add_term(vec![i], self.alpha.clone());
        }
        v
    }

    /// `φ[A] = ⟨Ω, AΩ⟩`.
    pub fn phi(&self, expr: &OperatorExpr<F>) -> Result<F> {
        Ok(self.apply_expr(expr, &FockVector::vacuum())?.vacuum_coef())
    }

    /// `ψ_T[A] = φ[A C_T]`.
    pub fn psi(&self, expr: &OperatorExpr<F>) -> Result<F> {
        Ok(self.apply_expr(expr, &self.ct_vacuum())?.vacuum_coef())
    }

    pub fn phi_product(&self, factors: &[Operator<F>]) -> Result<F> {
        Ok(self.apply_product(factors, &FockVector::vacuum())?.vacuum_coef())
    }

    pub fn psi_product(&self, factors: &[Operator<F>]) -> Result<F> {
        Ok(self.apply_product(factors, &self.ct_vacuum())?.vacuum_coef())
    }

    pub fn inner(&self, v: &FockVector<F>, w: &FockVector<F>) -> F {
        v.inner(w, &self.cell_length())
    }

    /// `φ[A^k]` for `k = 1..=n`.
    pub fn phi_moments(&self, a: &OperatorExpr<F>, n: usize) -> Result<Vec<F>> {
        self.power_moments(a, n, FockVector::vacuum())
    }

    /// `ψ_T[A^k]` for `k = 1..=n`.
    pub fn psi_moments(&self, a: &OperatorExpr<F>, n: usize) -> Result<Vec<F>> {
        self.power_moments(a, n, self.ct_vacuum())
    }

    fn power_moments(&self, a: &OperatorExpr<F>, n: usize, start: FockVector<F>) -> Result<Vec<F>> {
        let mut v = start;
        let mut out = Vec::with_capacity(n);
        let reach = a.degree().max(1);
        for k in 1..=n {
            // longer words cannot return to Ω within the remaining factors
            v = self.apply_expr(a, &v)?.truncated((n - k) * reach);
            out.push(v.vacuum_coef());
        }
        Ok(out)
    }
}
