//! One function per subcommand, each returning a [`Report`].

use freeprob::cumulants::{
    free_cumulants_from_moments, moments_from_free_cumulants, moments_from_two_state_cumulants,
    two_state_cumulants_from_moments, IncrementFamilySpec, TwoStateElementSpec,
};
use freeprob::fock::{cond_exp_obstruction, freeness_check, kernel_residual, kernel_residual_abs, martingale_check};
use freeprob::fock::{FockModel, IncrementPoly, OperatorExpr};
use freeprob::generator::generator_check;
use freeprob::poly::Poly;
use freeprob::spectral::{
    density_eval, jacobi_shift_phi_t, jacobi_to_moments, moments_to_jacobi, quadrature_moment, DensityValue,
    JacobiParams, MeasureSpec,
};
use freeprob::variations::{centered_qv_moment, norm_2n_table, norms_nondecreasing, variation_second_moment, Method};
use freeprob::{Jacobi, Rational};
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::report::{Cell, Report};
use crate::{CliError, DensityArgs, FockArgs, FreenessArgs, GeneratorArgs, JacobiArgs, KernelArgs, Limits};
use crate::{MartingaleArgs, MomentsArgs, NormArgs, VariationArgs};

type Result<T> = std::result::Result<T, CliError>;

fn r(q: &Rational) -> Cell {
    Cell::Rat(q.clone())
}

pub fn moments(a: &MomentsArgs, lim: Limits) -> Result<Report> {
    lim.check("order", a.order)?;
    let (alpha, beta, t) = (&a.alpha.alpha, &a.beta.beta, &a.time.total_time);
    let spec = TwoStateElementSpec::algebraic_brownian(alpha, beta, t, a.order);
    let m_phi = moments_from_two_state_cumulants(&spec, a.order)?;
    let m_psi = moments_from_free_cumulants(&spec.r_psi, a.order)?;

    let mut rep = Report::new(&["n", "r_phi_psi", "r_psi", "m_phi", "m_psi"]);
    for n in 1..=a.order {
        rep.row(vec![
            n.into(),
            r(&spec.r_phi_psi.values()[n - 1]),
            r(&spec.r_psi.values()[n - 1]),
            r(&m_phi.moment(n)),
            r(&m_psi.moment(n)),
        ]);
    }
    rep.check(free_cumulants_from_moments(&m_psi)? == spec.r_psi, || "ψ-moments do not invert to R^ψ".into());
    rep.check(two_state_cumulants_from_moments(&m_phi, &spec.r_psi)? == spec.r_phi_psi, || {
        "φ-moments do not invert to R^φψ".into()
    });
    if beta.is_one() {
        let depth = a.order.div_ceil(2) + 1;
        rep.check(jacobi_to_moments(&Jacobi::free_poisson_mu(alpha, t, depth), a.order)? == m_phi, || {
            "φ-moments differ from the μ_T continued fraction".into()
        });
    }
    Ok(rep)
}

fn jacobi_json(measure: &str, j: &Jacobi) -> Value {
    let mut obj = Map::new();
    obj.insert("measure".into(), Value::from(measure));
    if let Ok(Value::Object(fields)) = serde_json::to_value(j) {
        obj.extend(fields);
    }
    Value::Object(obj)
}

pub fn jacobi(a: &JacobiArgs, lim: Limits) -> Result<Report> {
    lim.check("order", a.order)?;
    let (alpha, t) = (&a.alpha.alpha, &a.time.t);
    let spec = TwoStateElementSpec::brownian(alpha, t, a.order);
    let m_mu = moments_from_two_state_cumulants(&spec, a.order)?;
    let m_nu = moments_from_free_cumulants(&spec.r_psi, a.order)?;
    let j_nu = moments_to_jacobi(&m_nu)?;
    let j_mu = moments_to_jacobi(&m_mu)?;

    let mut rep = Report::new(&["j", "beta_nu", "gamma_nu", "beta_mu", "gamma_mu"]);
    let rows = [j_nu.betas().len(), j_nu.gammas().len(), j_mu.betas().len(), j_mu.gammas().len()]
        .into_iter()
        .min()
        .unwrap_or(0);
    for j in 0..rows {
        rep.row(vec![
            j.into(),
            r(&j_nu.betas()[j]),
            r(&j_nu.gammas()[j]),
            r(&j_mu.betas()[j]),
            r(&j_mu.gammas()[j]),
        ]);
    }

    let depth = a.order.div_ceil(2) + 1;
    let prefix_matches = |got: &Jacobi, want: &Jacobi| {
        got.betas().iter().zip(want.betas()).all(|(x, y)| x == y)
            && got.gammas().iter().zip(want.gammas()).all(|(x, y)| x == y)
    };
    rep.check(prefix_matches(&j_nu, &JacobiParams::semicircle(alpha, t, depth)), || {
        "ν_t parameters differ from (αt; t) constant".into()
    });
    rep.check(prefix_matches(&j_mu, &JacobiParams::free_poisson_mu(alpha, t, depth)), || {
        "μ_t parameters differ from (0, αt, …; t, …)".into()
    });
    rep.check(prefix_matches(&j_mu, &jacobi_shift_phi_t(&j_nu, t)?), || "J(μ_t) ≠ Φ_t J(ν_t)".into());
    rep.check(jacobi_to_moments(&j_mu, a.order)? == m_mu, || "μ_t moments do not round-trip".into());
    rep.check(jacobi_to_moments(&j_nu, a.order)? == m_nu, || "ν_t moments do not round-trip".into());
    rep.trailer(jacobi_json("nu", &j_nu));
    rep.trailer(jacobi_json("mu", &j_mu));
    Ok(rep)
}

pub fn density(a: &DensityArgs) -> Result<Report> {
    let m = MeasureSpec::new(a.measure.into(), a.alpha.alpha.clone(), a.time.t.clone())?;
    let (lo, hi) = m.support();
    let mut rep = Report::new(&["x_f64", "density_f64"]);
    for j in 0..a.samples {
        let x = if a.samples == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * j as f64 / (a.samples - 1) as f64
        };
        let d = match density_eval(&m, x) {
            DensityValue::Density(d) => d,
            DensityValue::AtomLocation => f64::INFINITY,
        };
        rep.row(vec![x.into(), d.into()]);
    }
    let mass = quadrature_moment(&m, 0);
    rep.check((mass - 1.0).abs() <= 1e-8, || format!("total mass {mass} differs from 1"));
    if let Some(atom) = m.atom() {
        rep.trailer(serde_json::to_value(atom).expect("atom serializes"));
    }
    Ok(rep)
}

pub fn fock_moments(a: &FockArgs, lim: Limits) -> Result<Report> {
    let n = a.cells.cells;
    lim.check("N", n)?;
    lim.check("degree", a.degree)?;
    let (alpha, t) = (&a.alpha.alpha, &a.time.total_time);
    let model = FockModel::uniform(alpha.clone(), t.clone(), n)?;
    let x = OperatorExpr::interval(0, n);
    let phi = model.phi_moments(&x, a.degree)?;
    let psi = model.psi_moments(&x, a.degree)?;

    let mut rep = Report::new(&["n", "phi", "psi"]);
    for j in 1..=a.degree {
        rep.row(vec![j.into(), r(&phi[j - 1]), r(&psi[j - 1])]);
    }
    let spec = TwoStateElementSpec::brownian(alpha, t, a.degree);
    rep.check(moments_from_two_state_cumulants(&spec, a.degree)?.values() == phi.as_slice(), || {
        "φ moments differ from the partition sum".into()
    });
    rep.check(moments_from_free_cumulants(&spec.r_psi, a.degree)?.values() == psi.as_slice(), || {
        "ψ_T moments differ from the partition sum".into()
    });
    Ok(rep)
}

fn word_label(word: &[(usize, usize)]) -> String {
    word.iter()
        .map(|(c, d)| format!("X{c}^{d}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Alternating words over `1..=cells` of length `1..=max_len`, each letter
/// paired with a degree in `1..=max_degree`, in lexicographic order.
pub fn alternating_words(cells: usize, max_len: usize, max_degree: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for c in (1..=cells).filter(|&c| w.last().is_none_or(|&(l, _)| l != c)) {
                for d in 1..=max_degree {
                    let mut v = w.clone();
                    v.push((c, d));
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort();
    out
}

pub fn freeness(a: &FreenessArgs, lim: Limits) -> Result<Report> {
    lim.check("N", a.cells)?;
    lim.check("n", a.n)?;
    lim.check("degree", a.degree)?;
    let model = FockModel::uniform(a.alpha.alpha.clone(), a.time.total_time.clone(), a.cells)?;
    let mut rep = Report::new(&["word", "psi", "phi", "phi_factors", "holds"]);
    for word in alternating_words(a.cells, a.n, a.degree) {
        let factors = word
            .iter()
            .map(|&(c, d)| IncrementPoly::psi_centered(&model, c - 1, c, Poly::monomial(Rational::one(), d)))
            .collect::<freeprob::Result<Vec<_>>>()?;
        let f = freeness_check(&model, &factors)?;
        let label = word_label(&word);
        rep.check(f.holds(), || format!("freeness fails on {label}"));
        rep.row(vec![
            label.into(),
            r(&f.psi_of_product),
            r(&f.phi_of_product),
            f.phi_of_factors.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(";").into(),
            f.holds().into(),
        ]);
    }
    Ok(rep)
}

pub fn martingale(a: &MartingaleArgs, lim: Limits) -> Result<Report> {
    let n = a.cells.cells;
    lim.check("N", n)?;
    lim.check("n", a.n)?;
    let model = FockModel::uniform(a.alpha.alpha.clone(), a.time.total_time.clone(), n)?;
    let grid = model.grid();
    let mut rep = Report::new(&["t", "s", "B", "n", "lhs", "rhs", "equal"]);
    for ti in 1..=n {
        let xt = OperatorExpr::interval(0, ti);
        let bs = [("1", OperatorExpr::identity()), ("X(t)", xt.clone()), ("X(t)^2", xt.mul(&xt))];
        for si in ti + 1..=n {
            let (t, s) = (grid.time(ti), grid.time(si));
            for (name, b) in &bs {
                for deg in 0..=a.n {
                    let (lhs, rhs) = martingale_check(&model, deg, ti, si, b)?;
                    let eq = lhs == rhs;
                    rep.check(eq, || format!("martingale fails at t={t}, s={s}, B={name}, n={deg}"));
                    rep.row(vec![r(&t), r(&s), (*name).into(), deg.into(), r(&lhs), r(&rhs), eq.into()]);
                }
                let ob = cond_exp_obstruction(&model, ti, si, b)?;
                rep.check(ob.holds(), || format!("φ[B* X(s) X(t)] identity fails at t={t}, s={s}, B={name}"));
                rep.trailer(json!({
                    "t": t.to_string(),
                    "s": s.to_string(),
                    "B": name,
                    "phi_B_Xs_Xt": ob.lhs.to_string(),
                    "target": ob.rhs.to_string(),
                    "naive": ob.naive.to_string(),
                }));
            }
        }
    }
    Ok(rep)
}

pub fn variation_table(a: &VariationArgs, lim: Limits) -> Result<Report> {
    let (alpha, beta, t) = (&a.alpha.alpha, &a.beta.beta, &a.time.total_time);
    if a.n.is_some() && a.k != 2 {
        return Err(CliError::Usage("--n is only meaningful with --k 2".into()));
    }
    let order = 2 * a.k.max(a.n.unwrap_or(1));
    let mut rep = Report::new(&["N", "value", "value_f64", "predicted", "gap"]);
    for &count in &a.cells.cells {
        lim.check("N", count)?;
        let family = IncrementFamilySpec::algebraic_brownian(alpha, beta, t.clone(), count, order)?;
        let (value, predicted) = match a.n {
            Some(n) => (centered_qv_moment(&family, n, Method::PartitionSum)?, Rational::zero()),
            None => {
                let v = variation_second_moment(&family, a.k)?;
                (v.value, v.predicted_limit)
            }
        };
        let gap = value.clone() - predicted.clone();
        let f = freeprob::scalar::Scalar::to_float(&value);
        rep.row(vec![count.into(), r(&value), f.into(), r(&predicted), r(&gap)]);
    }
    Ok(rep)
}

pub fn norm_table(a: &NormArgs, lim: Limits) -> Result<Report> {
    lim.check("n-max", a.n_max)?;
    let (alpha, beta, t) = (&a.alpha.alpha, &a.beta.beta, &a.time.total_time);
    let mut rep = Report::new(&["N", "n", "moment", "norm_f64"]);
    for &count in &a.cells.cells {
        lim.check("N", count)?;
        let family = IncrementFamilySpec::algebraic_brownian(alpha, beta, t.clone(), count, 2 * a.k * a.n_max)?;
        let rows = norm_2n_table(&family, a.k, a.n_max)?;
        rep.check(norms_nondecreasing(&rows), || format!("2n-norms decrease in n at N={count}"));
        for row in rows {
            rep.row(vec![count.into(), row.n.into(), r(&row.moment), row.norm.into()]);
        }
    }
    Ok(rep)
}

pub fn generator(a: &GeneratorArgs, lim: Limits) -> Result<Report> {
    lim.check("n-max", a.n_max)?;
    let mut rep = Report::new(&["n", "residual_is_zero"]);
    for row in generator_check(a.n_max, &a.alpha.alpha)? {
        rep.check(row.residual_is_zero, || format!("∂_t Q_{0} + A_t Q_{0} ≠ 0", row.n));
        rep.row(vec![row.n.into(), row.residual_is_zero.into()]);
    }
    Ok(rep)
}

pub fn kernel(a: &KernelArgs, lim: Limits) -> Result<Report> {
    lim.check("depth", a.depth)?;
    let (alpha, t) = (&a.alpha.alpha, &a.time.t);
    let mut rep = Report::new(&["D", "residual_f64", "residual_abs_f64", "ratio_f64"]);
    let mut prev = kernel_residual(alpha, t, 0)?;
    for d in 1..=a.depth {
        let res = kernel_residual(alpha, t, d)?;
        let abs = kernel_residual_abs(alpha, t, d)?;
        rep.row(vec![d.into(), res.into(), abs.into(), (res / prev).into()]);
        prev = res;
    }
    Ok(rep)
}
