//! Finite-`N` variation functionals of the increments `X_{i,N}` and the
//! norm bounds built on them.

use std::collections::HashMap;

use serde::Serialize;

use crate::cumulants::{mixed_moment, IncrementFamilySpec, State};
use crate::error::{invalid, Error, Result};
use crate::fock::{FockModel, FockVector, OperatorExpr};
use crate::partitions::{
    classify_blocks, coarser_weight, enumerate_nc, enumerate_set_partitions, falling_factorial, join,
    stirling2_prefix_sum, NcFilter, SetPartition,
};
use crate::scalar::{pow, ring_from_bigint, ring_from_usize, Scalar};
use crate::Rational;

/// Longest word the brute-force expansion hands to the cumulant engine.
pub const BRUTE_FORCE_MAX_WORD: usize = 12;
/// Largest power `n` accepted by the partition formula (`NC(2n)`, `2n ≤ 16`).
pub const PARTITION_SUM_MAX_POWER: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "F: Scalar"))]
pub struct VariationReport<F: Scalar = Rational> {
    #[serde(rename = "N")]
    pub count: usize,
    #[serde(rename = "k")]
    pub power: usize,
    #[serde(with = "crate::scalar::rational_string")]
    pub value: F,
    #[serde(rename = "predicted", with = "crate::scalar::rational_string")]
    pub predicted_limit: F,
}

impl<F: Scalar> VariationReport<F> {
    /// `value − predicted_limit`.
    pub fn gap(&self) -> F {
        self.value.clone() - self.predicted_limit.clone()
    }
}

fn need_order<F: Scalar>(family: &IncrementFamilySpec<F>, order: usize) -> Result<()> {
    if family.order() < order {
        return Err(invalid(format!(
            "family carries cumulants to order {}, need {order}",
            family.order()
        )));
    }
    Ok(())
}

fn constant_word(letter: usize, len: usize) -> Vec<usize> {
    vec![letter; len]
}

/// `φ[(Σ_i X_i^k)²] = N(N−1) φ[X_1^k X_2^k] + N φ[X_1^{2k}]`, against
/// `R^{φψ}_k(X)² + R^{φψ}_{2k}(X)`.
pub fn variation_second_moment<F: Scalar>(family: &IncrementFamilySpec<F>, k: usize) -> Result<VariationReport<F>> {
    if k == 0 {
        return Err(invalid("power must be at least 1"));
    }
    need_order(family, 2 * k)?;
    let n = family.count();
    let nf: F = ring_from_usize(n);
    let mut value = nf.clone() * mixed_moment(family, &constant_word(1, 2 * k), State::Phi)?;
    if n >= 2 {
        let mut word = constant_word(1, k);
        word.extend(constant_word(2, k));
        let pairs: F = ring_from_usize(n * (n - 1));
        value = value + pairs * mixed_moment(family, &word, State::Phi)?;
    }
    let whole = family.whole();
    let r = |j: usize| whole.r_phi_psi.get(j).cloned().unwrap_or_else(F::zero);
    Ok(VariationReport {
        count: n,
        power: k,
        value,
        predicted_limit: r(k) * r(k) + r(2 * k),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Expand into mixed moments indexed by `Part(n)`.
    BruteForce,
    /// Sum over `σ ∈ NC_{1,2}(2n)` with no outer singletons and no outer
    /// pair of `τ_n`.
    PartitionSum,
}

/// `φ[(Σ_i X_i^k)^m]` for `m = 0..=n_max`. Words in the expansion depend only
/// on their letter pattern, so each `π ∈ Part(m)` contributes `N_{|π|}`
/// times one mixed moment.
fn power_sum_moments<F: Scalar>(family: &IncrementFamilySpec<F>, k: usize, n_max: usize) -> Result<Vec<F>> {
    if n_max * k > BRUTE_FORCE_MAX_WORD {
        return Err(Error::SizeLimit {
            what: "brute-force word length",
            requested: n_max * k,
            cap: BRUTE_FORCE_MAX_WORD,
        });
    }
    need_order(family, n_max * k)?;
    let labels = num_bigint::BigInt::from(family.count());
    let mut memo: HashMap<Vec<usize>, F> = HashMap::new();
    let mut out = vec![F::one()];
    for m in 1..=n_max {
        let mut acc = F::zero();
        for pi in enumerate_set_partitions(m)? {
            let weight = falling_factorial(&labels, pi.len());
            if weight == num_bigint::BigInt::from(0) {
                continue;
            }
            let word: Vec<usize> = pi.rgs().iter().flat_map(|&b| constant_word(b + 1, k)).collect();
            let value = match memo.get(&word) {
                Some(v) => v.clone(),
                None => {
                    let v = mixed_moment(family, &word, State::Phi)?;
                    memo.insert(word, v.clone());
                    v
                }
            };
            acc = acc + ring_from_bigint::<F>(&weight) * value;
        }
        out.push(acc);
    }
    Ok(out)
}

fn binomial<F: Scalar>(n: usize, k: usize) -> F {
    (0..k).fold(F::one(), |acc, i| acc * ring_from_usize(n - i) / ring_from_usize(i + 1))
}

/// `φ[(Σ_i X_i^k − c)^n]` by binomial expansion of the brute-force sums.
pub fn centered_power_moment_brute<F: Scalar>(family: &IncrementFamilySpec<F>, k: usize, c: &F, n: usize) -> Result<F> {
    let sums = power_sum_moments(family, k, n)?;
    let mut acc = F::zero();
    for (j, s) in sums.iter().enumerate() {
        acc = acc + binomial::<F>(n, j) * pow(&-c.clone(), (n - j) as u32) * s.clone();
    }
    Ok(acc)
}

/// `(α, β)` of a family whose increments have `R^{φψ} = (0, T/N)` and
/// `R^ψ = (αT/N, βT/N)`, all higher cumulants zero.
pub fn brownian_parameters<F: Scalar>(family: &IncrementFamilySpec<F>) -> Result<(F, F)> {
    let inc = family.per_increment();
    let h = family.total_time().clone() / ring_from_usize::<F>(family.count());
    let phi = inc.r_phi_psi.values();
    let psi = inc.r_psi.values();
    let get = |v: &[F], i: usize| v.get(i).cloned().unwrap_or_else(F::zero);
    let shaped = get(phi, 0).is_zero()
        && get(phi, 1) == h
        && phi.iter().skip(2).all(|c| c.is_zero())
        && psi.iter().skip(2).all(|c| c.is_zero());
    if !shaped {
        return Err(invalid(
            "the partition formula needs R^φψ = (0, T/N) and R^ψ supported on orders 1 and 2",
        ));
    }
    Ok((get(psi, 0) / h.clone(), get(psi, 1) / h))
}

/// Term of the partition formula for one `σ`. Inner pairs of `τ_n` carry
/// `β − 1`, other inner pairs `β`, singletons `α`, outer pairs 1.
fn partition_term<F: Scalar>(sigma: &SetPartition, tau: &SetPartition, labels: usize, h: &F, alpha: &F, beta: &F) -> Result<F> {
    let class = classify_blocks(sigma)?;
    let tau_blocks = tau.blocks();
    let mut weight = pow(h, sigma.len() as u32) * pow(alpha, class.singletons.len() as u32);
    for &i in &class.inner {
        let block = &sigma.blocks()[i];
        if block.len() == 2 {
            let factor = if tau_blocks.contains(block) {
                beta.clone() - F::one()
            } else {
                beta.clone()
            };
            weight = weight * factor;
        }
    }
    if weight.is_zero() {
        return Ok(weight);
    }
    let coarse = coarser_weight(&join(sigma, tau)?, labels);
    Ok(weight * ring_from_bigint::<F>(&coarse))
}

fn partition_sum<F: Scalar>(family: &IncrementFamilySpec<F>, n: usize) -> Result<F> {
    if n > PARTITION_SUM_MAX_POWER {
        return Err(Error::SizeLimit {
            what: "partition-formula power",
            requested: n,
            cap: PARTITION_SUM_MAX_POWER,
        });
    }
    let (alpha, beta) = brownian_parameters(family)?;
    if n == 0 {
        return Ok(F::one());
    }
    let h = family.total_time().clone() / ring_from_usize::<F>(family.count());
    let tau = SetPartition::adjacent_pairs(n);
    let mut acc = F::zero();
    for sigma in enumerate_nc(2 * n, NcFilter::ALL)? {
        acc = acc + partition_term(&sigma, &tau, family.count(), &h, &alpha, &beta)?;
    }
    Ok(acc)
}

/// `φ[(Σ_i X_i² − T)^n]`.
pub fn centered_qv_moment<F: Scalar>(family: &IncrementFamilySpec<F>, n: usize, method: Method) -> Result<F> {
    match method {
        Method::BruteForce => centered_power_moment_brute(family, 2, family.total_time(), n),
        Method::PartitionSum => partition_sum(family, n),
    }
}

/// `ψ[Σ_i X_i^k] = N ψ[X_1^k]`, against `R^ψ_k(X)`.
pub fn psi_variation<F: Scalar>(family: &IncrementFamilySpec<F>, k: usize) -> Result<VariationReport<F>> {
    if k == 0 {
        return Err(invalid("power must be at least 1"));
    }
    need_order(family, k)?;
    let n = family.count();
    let value = ring_from_usize::<F>(n) * mixed_moment(family, &constant_word(1, k), State::Psi)?;
    let whole = family.whole();
    Ok(VariationReport {
        count: n,
        power: k,
        value,
        predicted_limit: whole.r_psi.get(k).cloned().unwrap_or_else(F::zero),
    })
}

/// `Σ_{i > s} X_i A X_i − ψ_T[A](T − S)` for `S` the grid point `s_idx`.
pub fn sandwich_operator<F: Scalar>(model: &FockModel<F>, a: &OperatorExpr<F>, s_idx: usize) -> Result<OperatorExpr<F>> {
    let cells = model.grid().cells();
    if s_idx >= cells {
        return Err(invalid(format!("window start {s_idx} leaves no cells in 1..={cells}")));
    }
    if let Some(bad) = a.letters().find(|&i| i > s_idx) {
        return Err(invalid(format!("A uses cell {bad}, inside the integration window")));
    }
    let mut sum = OperatorExpr::zero();
    for i in s_idx + 1..=cells {
        let x = OperatorExpr::generator(i);
        sum = sum.add(&x.mul(a).mul(&x));
    }
    let length = model.grid().time(cells) - model.grid().time(s_idx);
    let shift = model.psi(a)? * length;
    Ok(sum.sub(&OperatorExpr::scalar(shift)))
}

/// `φ[|Σ_{i in window} X_i A X_i − ψ_T[A](T−S)|²]`, predicted limit 0.
pub fn sandwich_variation<F: Scalar>(model: &FockModel<F>, a: &OperatorExpr<F>, s_idx: usize) -> Result<VariationReport<F>> {
    let y = sandwich_operator(model, a, s_idx)?;
    let v: FockVector<F> = model.apply_expr(&y, &FockVector::vacuum())?;
    Ok(VariationReport {
        count: model.grid().cells(),
        power: 2,
        value: model.inner(&v, &v),
        predicted_limit: F::zero(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = "F: Scalar"))]
pub struct NormRow<F: Scalar = Rational> {
    pub n: usize,
    /// `φ[(Σ X_i^k − c)^{2n}]`
    #[serde(with = "crate::scalar::rational_string")]
    pub moment: F,
    #[serde(rename = "norm_f64")]
    pub norm: f64,
}

/// `‖Σ_i X_i^k − c‖_{2n}` for `n = 1..=n_max`, with `c = T` for `k = 2` and
/// 0 otherwise. `k = 2` on a Brownian-shaped family uses the partition
/// formula; everything else the brute-force expansion.
pub fn norm_2n_table<F: Scalar>(family: &IncrementFamilySpec<F>, k: usize, n_max: usize) -> Result<Vec<NormRow<F>>> {
    let use_partitions = k == 2 && brownian_parameters(family).is_ok();
    let moments: Vec<F> = if use_partitions {
        if 2 * n_max > PARTITION_SUM_MAX_POWER {
            return Err(Error::SizeLimit {
                what: "partition-formula power",
                requested: 2 * n_max,
                cap: PARTITION_SUM_MAX_POWER,
            });
        }
        (1..=n_max).map(|n| partition_sum(family, 2 * n)).collect::<Result<_>>()?
    } else {
        let c = if k == 2 { family.total_time().clone() } else { F::zero() };
        let sums = power_sum_moments(family, k, 2 * n_max)?;
        (1..=n_max)
            .map(|n| {
                let m = 2 * n;
                sums[..=m].iter().enumerate().fold(F::zero(), |acc, (j, s)| {
                    acc + binomial::<F>(m, j) * pow(&-c.clone(), (m - j) as u32) * s.clone()
                })
            })
            .collect()
    };
    Ok(moments
        .into_iter()
        .enumerate()
        .map(|(i, moment)| {
            let n = i + 1;
            let norm = moment.to_float().max(0.0).powf(1.0 / (2 * n) as f64);
            NormRow { n, moment, norm }
        })
        .collect())
}

/// `a^{1/2n} ≤ b^{1/2(n+1)}` for consecutive rows, decided exactly as
/// `a^{n+1} ≤ b^n`.
pub fn norms_nondecreasing<F: Scalar>(rows: &[NormRow<F>]) -> bool {
    rows.windows(2).all(|w| {
        let (a, b) = (&w[0], &w[1]);
        pow(&a.moment, b.n as u32) <= pow(&b.moment, a.n as u32)
    })
}

/// Single-`σ` lower bound `N^{−n} (Σ_{j ≤ N} S(n−1, j)) T^n (β−1)^{n−2}` for
/// `φ[(Σ X_i² − T)^n]`; meaningful for `β ≥ 1`, even `n ≥ 2`.
pub fn qv_lower_bound<F: Scalar>(n: usize, count: usize, total_time: &F, beta: &F) -> Result<F> {
    if n < 2 {
        return Err(invalid("the lower bound needs n ≥ 2"));
    }
    let stirling = ring_from_bigint::<F>(&stirling2_prefix_sum(n - 1, count).into());
    let nf: F = ring_from_usize(count);
    Ok(stirling * pow(total_time, n as u32) * pow(&(beta.clone() - F::one()), (n - 2) as u32)
        / pow(&nf, n as u32))
}

/// Square of the `β = 1` upper bound `4^{2n} N^{−n/2} N^N max(1, T, |α|T)^{2n}`,
/// kept rational by squaring.
pub fn qv_upper_bound_sq<F: Scalar>(n: usize, count: usize, total_time: &F, alpha: &F) -> F {
    let nf: F = ring_from_usize(count);
    let mut m = F::one();
    for c in [total_time.clone(), alpha.abs() * total_time.clone()] {
        if c > m {
            m = c;
        }
    }
    let four: F = ring_from_usize(4);
    pow(&four, 4 * n as u32) * pow(&nf, 2 * count as u32) * pow(&m, 4 * n as u32) / pow(&nf, n as u32)
}
