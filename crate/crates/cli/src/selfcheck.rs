//! Cross-module oracle suite. Items are independent and run on scoped
//! threads; results are collected in a fixed order.

use std::thread;

use freeprob::cumulants::{
    free_cumulants_from_moments, moments_from_free_cumulants, moments_from_two_state_cumulants,
    two_state_cumulants_from_moments, CumulantSpec, IncrementFamilySpec, TwoStateElementSpec,
};
use freeprob::fock::{
    cond_exp_obstruction, elementary_tensor, freeness_check, kernel_residual_abs, martingale_check,
    interval_product_vector, FockModel, IncrementPoly, IntervalPower, OperatorExpr,
};
use freeprob::generator::{generating_function_check, generator_check, MAX_SERIES_ORDER};
use freeprob::poly::Poly;
use freeprob::scalar::{rat, Scalar};
use freeprob::spectral::{jacobi_to_moments, moments_to_jacobi, quadrature_moment, MeasureSpec};
use freeprob::variations::{centered_qv_moment, Method};
use freeprob::{Jacobi, Rational};
use num_traits::{One, Zero};
use serde_json::json;

use crate::commands::alternating_words;
use crate::report::Report;
use crate::{CliError, Limits, SelfcheckArgs};

type Outcome = freeprob::Result<(bool, String)>;
type Item = (&'static str, fn(&Ctx) -> Outcome);

struct Ctx {
    alpha: Rational,
    t: Rational,
    cells: usize,
    order: usize,
}

impl Ctx {
    fn spec(&self) -> TwoStateElementSpec<Rational> {
        TwoStateElementSpec::brownian(&self.alpha, &self.t, self.order)
    }

    fn model(&self) -> freeprob::Result<FockModel> {
        FockModel::uniform(self.alpha.clone(), self.t.clone(), self.cells)
    }
}

fn cumulant_roundtrip(c: &Ctx) -> Outcome {
    let spec = c.spec();
    let m_phi = moments_from_two_state_cumulants(&spec, c.order)?;
    let m_psi = moments_from_free_cumulants(&spec.r_psi, c.order)?;
    let ok = free_cumulants_from_moments(&m_psi)? == spec.r_psi
        && two_state_cumulants_from_moments(&m_phi, &spec.r_psi)? == spec.r_phi_psi;
    Ok((ok, format!("orders 1..{}", c.order)))
}

fn fock_vs_partitions(c: &Ctx) -> Outcome {
    let spec = c.spec();
    let model = c.model()?;
    let x = OperatorExpr::interval(0, c.cells);
    let ok = model.phi_moments(&x, c.order)? == moments_from_two_state_cumulants(&spec, c.order)?.values()
        && model.psi_moments(&x, c.order)? == moments_from_free_cumulants(&spec.r_psi, c.order)?.values();
    Ok((ok, format!("X(T) on {} cells, moments 1..{}", c.cells, c.order)))
}

fn jacobi_vs_partitions(c: &Ctx) -> Outcome {
    let spec = c.spec();
    let depth = c.order.div_ceil(2) + 1;
    let m_phi = moments_from_two_state_cumulants(&spec, c.order)?;
    let m_psi = moments_from_free_cumulants(&spec.r_psi, c.order)?;
    let ok = jacobi_to_moments(&Jacobi::free_poisson_mu(&c.alpha, &c.t, depth), c.order)? == m_phi
        && jacobi_to_moments(&Jacobi::semicircle(&c.alpha, &c.t, depth), c.order)? == m_psi
        && jacobi_to_moments(&moments_to_jacobi(&m_phi)?, c.order)? == m_phi;
    Ok((ok, "continued fractions of μ_T and ν_T".into()))
}

fn quadrature(c: &Ctx) -> Outcome {
    let spec = c.spec();
    let n = c.order.min(8);
    let m_phi = moments_from_two_state_cumulants(&spec, n)?;
    let m_psi = moments_from_free_cumulants(&spec.r_psi, n)?;
    let nu = MeasureSpec::semicircle(c.alpha.clone(), c.t.clone())?;
    let mu = MeasureSpec::free_poisson(c.alpha.clone(), c.t.clone())?;
    let worst = (0..=n)
        .map(|j| {
            let a = (quadrature_moment(&nu, j as u32) - m_psi.moment(j).to_float()).abs();
            let b = (quadrature_moment(&mu, j as u32) - m_phi.moment(j).to_float()).abs();
            a.max(b)
        })
        .fold(0.0, f64::max);
    Ok((worst <= 1e-8, format!("max |Δ| = {worst:.2e}")))
}

fn interval_product(c: &Ctx) -> Outcome {
    let model = c.model()?;
    let ivs: Vec<(usize, usize)> = (0..c.cells).flat_map(|a| (a + 1..=c.cells).map(move |b| (a, b))).collect();
    let mut cases = Vec::new();
    for &(a, b) in &ivs {
        for k in 1..=2 {
            cases.push(vec![IntervalPower::new(a, b, k)]);
            for &(a2, b2) in ivs.iter().filter(|&&(a2, b2)| b2 <= a || b <= a2) {
                for k2 in 1..=2 {
                    cases.push(vec![IntervalPower::new(a, b, k), IntervalPower::new(a2, b2, k2)]);
                }
            }
        }
    }
    for g in &cases {
        if interval_product_vector(&model, g)? != elementary_tensor(g) {
            return Ok((false, format!("groups {g:?}")));
        }
    }
    Ok((true, format!("{} configurations", cases.len())))
}

fn freeness(c: &Ctx) -> Outcome {
    let cells = c.cells.min(3);
    let model = FockModel::uniform(c.alpha.clone(), c.t.clone(), cells)?;
    let words = alternating_words(cells, 3, 2);
    for w in &words {
        let factors = w
            .iter()
            .map(|&(cell, d)| IncrementPoly::psi_centered(&model, cell - 1, cell, Poly::monomial(Rational::one(), d)))
            .collect::<freeprob::Result<Vec<_>>>()?;
        if !freeness_check(&model, &factors)?.holds() {
            return Ok((false, format!("word {w:?}")));
        }
    }
    Ok((true, format!("{} alternating words", words.len())))
}

fn martingale(c: &Ctx) -> Outcome {
    let model = c.model()?;
    let mut checked = 0;
    for ti in 1..=c.cells {
        let xt = OperatorExpr::interval(0, ti);
        for si in ti + 1..=c.cells {
            for b in [OperatorExpr::identity(), xt.clone()] {
                for n in 0..=c.order.min(5) {
                    let (l, r) = martingale_check(&model, n, ti, si, &b)?;
                    if l != r {
                        return Ok((false, format!("n={n}, t index {ti}, s index {si}")));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok((true, format!("{checked} identities")))
}

fn conditional_expectation(c: &Ctx) -> Outcome {
    let model = c.model()?;
    let mut checked = 0;
    for ti in 1..=c.cells {
        let xt = OperatorExpr::interval(0, ti);
        for si in ti + 1..=c.cells {
            for b in [OperatorExpr::identity(), xt.clone(), xt.mul(&xt)] {
                if !cond_exp_obstruction(&model, ti, si, &b)?.holds() {
                    return Ok((false, format!("t index {ti}, s index {si}")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} identities")))
}

fn partition_formula(c: &Ctx) -> Outcome {
    let mut checked = 0;
    for beta in [Rational::one(), rat(2, 1)] {
        for count in 1..=c.cells.min(4) {
            let f = IncrementFamilySpec::algebraic_brownian(&c.alpha, &beta, c.t.clone(), count, 6)?;
            for n in 1..=3 {
                if centered_qv_moment(&f, n, Method::BruteForce)? != centered_qv_moment(&f, n, Method::PartitionSum)? {
                    return Ok((false, format!("β={beta}, N={count}, n={n}")));
                }
                checked += 1;
            }
        }
    }
    Ok((true, format!("{checked} cases")))
}

fn generator(c: &Ctx) -> Outcome {
    let n = (2 * c.order).min(MAX_SERIES_ORDER);
    let ok = generator_check(n, &c.alpha)?.iter().all(|r| r.residual_is_zero)
        && generating_function_check(n, &c.alpha)?.iter().all(|r| r.holds());
    Ok((ok, format!("Q_0..Q_{n} and ladders")))
}

fn time_reversal(c: &Ctx) -> Outcome {
    let (s, t) = (c.t.clone() * rat(1, 2), c.t.clone());
    let order = c.order;
    let head = TwoStateElementSpec::brownian(&c.alpha, &(Rational::one() / t.clone()), order);
    let tail = TwoStateElementSpec::brownian(&c.alpha, &(Rational::one() / s.clone() - Rational::one() / t.clone()), order);
    let diff = head.dilate(&(t.clone() - s.clone())).free_add(&tail.dilate(&-s.clone()))?;
    let mut want = vec![Rational::zero(); order];
    if order >= 2 {
        want[1] = t.clone() - s.clone();
    }
    let want = CumulantSpec::new(want);
    Ok((diff.r_psi == want && diff.r_phi_psi == want, format!("Y({t}) − Y({s})")))
}

fn kernel(c: &Ctx) -> Outcome {
    if c.alpha.is_zero() {
        return Ok((true, "not applicable at α = 0".into()));
    }
    // at α²t = 4 the unnormalized residual halves exactly per depth step
    let t = rat(4, 1) / (c.alpha.clone() * c.alpha.clone());
    let mut worst: f64 = 0.0;
    let mut prev = kernel_residual_abs(&c.alpha, &t, 1)?;
    for d in 2..=c.order.max(2) {
        let cur = kernel_residual_abs(&c.alpha, &t, d)?;
        worst = worst.max((cur / prev - 0.5).abs());
        prev = cur;
    }
    Ok((worst <= 1e-12, format!("t = {t}, max |ratio − 1/2| = {worst:.1e}")))
}

const ITEMS: &[Item] = &[
    ("cumulant-roundtrip", cumulant_roundtrip),
    ("fock-vs-partitions", fock_vs_partitions),
    ("jacobi-vs-partitions", jacobi_vs_partitions),
    ("quadrature", quadrature),
    ("interval-product", interval_product),
    ("freeness", freeness),
    ("martingale", martingale),
    ("conditional-expectation", conditional_expectation),
    ("partition-formula", partition_formula),
    ("generator", generator),
    ("time-reversal", time_reversal),
    ("kernel-vector", kernel),
];

pub fn run(a: &SelfcheckArgs, lim: Limits) -> Result<Report, CliError> {
    lim.check("N", a.cells.cells)?;
    lim.check("order", a.order)?;
    let ctx = Ctx {
        alpha: a.alpha.alpha.clone(),
        t: a.time.total_time.clone(),
        cells: a.cells.cells,
        order: a.order,
    };
    let outcomes: Vec<Outcome> = thread::scope(|scope| {
        let handles: Vec<_> = ITEMS.iter().map(|(_, f)| scope.spawn(|| f(&ctx))).collect();
        handles.into_iter().map(|h| h.join().expect("suite item panicked")).collect()
    });

    let mut rep = Report::new(&["check", "passed", "detail"]);
    let mut passed = 0;
    for ((name, _), outcome) in ITEMS.iter().zip(outcomes) {
        let (ok, detail) = outcome?;
        passed += usize::from(ok);
        rep.check(ok, || format!("{name}: {detail}"));
        rep.row(vec![(*name).into(), ok.into(), detail.into()]);
    }
    rep.trailer(json!({"passed": passed, "total": ITEMS.len()}));
    Ok(rep)
}
