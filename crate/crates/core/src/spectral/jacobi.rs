use std::fmt::Display;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cumulants::MomentSequence;
use crate::error::{invalid, Error, Result};
use crate::poly::{reciprocal_unit_series, Poly};
use crate::scalar::{rational_strings, Ring, Scalar};

/// Recursion coefficients `β_0, β_1, …` and `γ_1, γ_2, …` of the monic
/// orthogonal polynomials; equivalently the continued fraction
///
/// ```text
/// G(z) = 1 / (z − β_0 − γ_1 / (z − β_1 − γ_2 / (z − …)))
/// ```
///
/// When `terminated` is set, the fraction stops at the last listed `β`:
/// every `γ` past the listed ones is zero and the corresponding `β` are
/// irrelevant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Display", deserialize = "R: FromStr"))]
pub struct JacobiParams<R> {
    #[serde(rename = "beta", with = "rational_strings")]
    betas: Vec<R>,
    #[serde(rename = "gamma", with = "rational_strings")]
    gammas: Vec<R>,
    terminated: bool,
}

impl<R: Ring> JacobiParams<R> {
    pub fn new(betas: Vec<R>, mut gammas: Vec<R>, terminated: bool) -> Self {
        if terminated {
            while gammas.len() < betas.len() {
                gammas.push(R::zero());
            }
        }
        JacobiParams {
            betas,
            gammas,
            terminated,
        }
    }

    /// `δ_c`: a single level, then termination.
    pub fn point_mass(c: R) -> Self {
        Self::new(vec![c], vec![R::zero()], true)
    }

    /// `β = (β_0, β, β, …)`, `γ = (γ, γ, …)` to the given depth.
    pub fn constant_tail(beta0: R, beta: R, gamma: R, depth: usize) -> Self {
        let mut betas = vec![beta; depth];
        if depth > 0 {
            betas[0] = beta0;
        }
        Self::new(betas, vec![gamma; depth], false)
    }

    pub fn betas(&self) -> &[R] {
        &self.betas
    }

    pub fn gammas(&self) -> &[R] {
        &self.gammas
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// Number of known `β` levels.
    pub fn depth(&self) -> usize {
        self.betas.len()
    }

    /// First level that cannot be reached, if the fraction terminates.
    fn ceiling(&self) -> Option<usize> {
        self.gammas
            .iter()
            .position(Zero::is_zero)
            .map(|i| i + 1)
            .or(if self.terminated {
                Some(self.gammas.len() + 1)
            } else {
                None
            })
    }

    fn beta(&self, h: usize) -> Result<R> {
        self.betas.get(h).cloned().ok_or(Error::InsufficientDepth {
            needed: h + 1,
            available: self.betas.len(),
        })
    }

    fn gamma(&self, h: usize) -> Result<R> {
        match self.gammas.get(h - 1) {
            Some(g) => Ok(g.clone()),
            None if self.terminated => Ok(R::zero()),
            None => Err(Error::InsufficientDepth {
                needed: h,
                available: self.gammas.len(),
            }),
        }
    }
}

impl<F: Scalar> JacobiParams<F> {
    /// `J(ν_t)`: semicircle with mean `αt`, variance `t`.
    pub fn semicircle(alpha: &F, t: &F, depth: usize) -> Self {
        let b = alpha.clone() * t.clone();
        Self::constant_tail(b.clone(), b, t.clone(), depth)
    }

    /// `J(μ_t) = Φ_t[J(ν_t)]`: `β = (0, αt, αt, …)`, `γ = (t, t, …)`.
    pub fn free_poisson_mu(alpha: &F, t: &F, depth: usize) -> Self {
        Self::constant_tail(F::zero(), alpha.clone() * t.clone(), t.clone(), depth)
    }
}

/// Moments read off the continued fraction: `m_n` is the weighted count of
/// Motzkin paths of length `n` (up-step 1, level step `β_h`, down-step from
/// `h` weighted `γ_h`).
pub fn jacobi_to_moments<R: Ring>(j: &JacobiParams<R>, n: usize) -> Result<MomentSequence<R>> {
    let ceiling = j.ceiling();
    let reachable = |h: usize| ceiling.is_none_or(|c| h < c);
    // paths[h]: weight of length-k paths from 0 ending at height h
    let mut paths: Vec<R> = vec![R::one()];
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        // heights that can still return to 0 within the remaining steps
        let max_h = k.min(n - k);
        let mut next = vec![R::zero(); max_h + 1];
        for (h, slot) in next.iter_mut().enumerate() {
            if !reachable(h) {
                continue;
            }
            let mut acc = R::zero();
            if h >= 1 {
                if let Some(p) = paths.get(h - 1) {
                    acc = acc + p.clone();
                }
            }
            if let Some(p) = paths.get(h) {
                if !p.is_zero() {
                    acc = acc + p.clone() * j.beta(h)?;
                }
            }
            if let Some(p) = paths.get(h + 1) {
                if !p.is_zero() {
                    acc = acc + p.clone() * j.gamma(h + 1)?;
                }
            }
            *slot = acc;
        }
        out.push(next[0].clone());
        paths = next;
    }
    Ok(MomentSequence::new(out))
}

/// Coefficient stripping on `G(z) = Σ m_n z^{−(n+1)}`: each level reads `β`
/// and `γ` off `1/G` and recurses on the stripped series. Stops early,
/// marking termination, at the first `γ = 0`.
pub fn moments_to_jacobi<F: Scalar>(m: &MomentSequence<F>) -> Result<JacobiParams<F>> {
    let mut moms: Vec<F> = m.values().to_vec();
    let mut betas = Vec::new();
    let mut gammas = Vec::new();
    let mut terminated = false;
    while !moms.is_empty() {
        let k = moms.len();
        let series: Vec<F> = std::iter::once(F::one()).chain(moms.iter().cloned()).collect();
        // 1/G = z + s_1 + s_2 w + s_3 w^2 + …  with w = 1/z
        let s = reciprocal_unit_series(&series, k + 1);
        betas.push(-s[1].clone());
        if k < 2 {
            break;
        }
        let gamma = -s[2].clone();
        let index = gammas.len() + 1;
        if gamma < F::zero() {
            return Err(Error::NotAMeasure { index });
        }
        gammas.push(gamma.clone());
        if gamma.is_zero() {
            if s[3..].iter().any(|c| !c.is_zero()) {
                return Err(Error::NotAMeasure { index });
            }
            terminated = true;
            break;
        }
        moms = s[3..].iter().map(|c| -c.clone() / gamma.clone()).collect();
    }
    Ok(JacobiParams {
        betas,
        gammas,
        terminated,
    })
}

/// `Φ_t`: prepend the level `(β, γ) = (0, t)`.
pub fn jacobi_shift_phi_t<F: Scalar>(j: &JacobiParams<F>, t: &F) -> Result<JacobiParams<F>> {
    if *t <= F::zero() {
        return Err(invalid(format!("shift parameter must be positive, got {t}")));
    }
    Ok(JacobiParams {
        betas: std::iter::once(F::zero()).chain(j.betas.iter().cloned()).collect(),
        gammas: std::iter::once(t.clone()).chain(j.gammas.iter().cloned()).collect(),
        terminated: j.terminated,
    })
}

/// The same shift on moment series: `G_out(z) = 1 / (z − t G_in(z))`.
/// With `M(w) = 1 + Σ m_k w^k` this is `M_out = 1 / (1 − t w² M)`.
pub fn shift_moments_by_series<R: Ring>(m: &MomentSequence<R>, t: &R, n: usize) -> Result<MomentSequence<R>> {
    if m.len() + 2 < n {
        return Err(invalid(format!(
            "need {} input moments for {n} output moments, have {}",
            n.saturating_sub(2),
            m.len()
        )));
    }
    let mut denom = vec![R::zero(); n + 1];
    denom[0] = R::one();
    for (k, slot) in denom.iter_mut().enumerate().skip(2) {
        *slot = -(t.clone() * m.moment(k - 2));
    }
    let inv = reciprocal_unit_series(&denom, n + 1);
    Ok(MomentSequence::new(inv[1..].to_vec()))
}

/// Monic orthogonal polynomials `P_0..=P_n` from
/// `x P_k = P_{k+1} + β_k P_k + γ_k P_{k−1}`, `P_{−1} = 0`.
pub fn orthogonal_polynomials<R: Ring>(j: &JacobiParams<R>, n: usize) -> Result<Vec<Poly<R>>> {
    if j.betas.len() < n {
        return Err(Error::InsufficientDepth {
            needed: n,
            available: j.betas.len(),
        });
    }
    let x = Poly::<R>::var();
    let mut out: Vec<Poly<R>> = vec![Poly::one()];
    for k in 0..n {
        let mut next = (x.clone() - Poly::constant(j.beta(k)?)) * out[k].clone();
        if k >= 1 {
            next = next - out[k - 1].scale(&j.gamma(k)?);
        }
        out.push(next);
    }
    Ok(out)
}

/// Chebyshev polynomials of the second kind with variance `t`:
/// `x U_k = U_{k+1} + t U_{k−1}`, `U_0 = 1`, `U_1 = x`.
pub fn chebyshev_u<R: Ring>(n: usize, t: &R) -> Vec<Poly<R>> {
    let x = Poly::<R>::var();
    let mut out: Vec<Poly<R>> = vec![Poly::one()];
    for k in 0..n {
        let mut next = x.clone() * out[k].clone();
        if k >= 1 {
            next = next - out[k - 1].scale(t);
        }
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cumulants::{moments_from_two_state_cumulants, TwoStateElementSpec};
    use crate::scalar::rat;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&k| rat(k, 1)).collect()
    }

    #[test]
    fn stripping_examples() {
        let j = moments_to_jacobi(&MomentSequence::new(ints(&[1, 2, 4, 9]))).unwrap();
        assert_eq!(j.betas(), ints(&[1, 1]).as_slice());
        assert_eq!(j.gammas(), ints(&[1, 1]).as_slice());
        assert!(!j.is_terminated());

        let j = moments_to_jacobi(&MomentSequence::new(ints(&[0, 1, 1, 3]))).unwrap();
        assert_eq!(j.betas(), ints(&[0, 1]).as_slice());
        assert_eq!(j.gammas(), ints(&[1, 1]).as_slice());

        let j = moments_to_jacobi(&MomentSequence::new(ints(&[0, 0, 0, 0]))).unwrap();
        assert_eq!(j, JacobiParams::point_mass(rat(0, 1)));
        assert!(j.is_terminated());
    }

    #[test]
    fn stripping_rejects_non_measures() {
        // negative variance
        let err = moments_to_jacobi(&MomentSequence::new(ints(&[0, -1]))).unwrap_err();
        assert_eq!(err, Error::NotAMeasure { index: 1 });
        // zero variance but a nonzero third moment
        let err = moments_to_jacobi(&MomentSequence::new(ints(&[0, 0, 1]))).unwrap_err();
        assert_eq!(err, Error::NotAMeasure { index: 1 });
        // second level negative: m = (0,1,0,0) has γ_2 = −1
        let err = moments_to_jacobi(&MomentSequence::new(ints(&[0, 1, 0, 0]))).unwrap_err();
        assert_eq!(err, Error::NotAMeasure { index: 2 });
    }

    #[test]
    fn moments_from_fraction() {
        let mu = JacobiParams::free_poisson_mu(&rat(1, 1), &rat(1, 1), 4);
        let m = jacobi_to_moments(&mu, 4).unwrap();
        assert_eq!(m.values(), ints(&[0, 1, 1, 3]).as_slice());
        // cross-module oracle: the two-state NC sum
        let spec = TwoStateElementSpec::brownian(&rat(1, 1), &rat(1, 1), 8);
        let nc = moments_from_two_state_cumulants(&spec, 8).unwrap();
        assert_eq!(jacobi_to_moments(&mu, 8).unwrap(), nc);

        let c = rat(-3, 2);
        let m = jacobi_to_moments(&JacobiParams::point_mass(c.clone()), 6).unwrap();
        for k in 1..=6 {
            assert_eq!(m.moment(k), crate::scalar::pow(&c, k as u32));
        }
        assert!(matches!(
            jacobi_to_moments(&JacobiParams::free_poisson_mu(&rat(1, 1), &rat(1, 1), 2), 6),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn shift_examples() {
        let t = rat(3, 2);
        let alpha = rat(2, 1);
        let nu = JacobiParams::semicircle(&alpha, &t, 5);
        let shifted = jacobi_shift_phi_t(&nu, &t).unwrap();
        let mu = JacobiParams::free_poisson_mu(&alpha, &t, 6);
        assert_eq!(shifted.betas()[..5], mu.betas()[..5]);
        assert_eq!(shifted.gammas()[..5], mu.gammas()[..5]);

        let two_point = jacobi_shift_phi_t(&JacobiParams::point_mass(rat(0, 1)), &t).unwrap();
        assert_eq!(two_point.betas(), &[rat(0, 1), rat(0, 1)]);
        assert_eq!(two_point.gammas(), &[t.clone(), rat(0, 1)]);
        let bern = jacobi_shift_phi_t(&JacobiParams::point_mass(rat(0, 1)), &rat(1, 1)).unwrap();
        assert_eq!(jacobi_to_moments(&bern, 4).unwrap().values(), ints(&[0, 1, 0, 1]).as_slice());

        assert!(jacobi_shift_phi_t(&nu, &rat(0, 1)).is_err());
        assert!(jacobi_shift_phi_t(&nu, &rat(-1, 1)).is_err());
    }

    #[test]
    fn shift_routes_agree() {
        for (alpha, t) in [(rat(1, 1), rat(1, 1)), (rat(-2, 3), rat(5, 4)), (rat(0, 1), rat(2, 1))] {
            let nu = JacobiParams::semicircle(&alpha, &t, 8);
            let structural = jacobi_to_moments(&jacobi_shift_phi_t(&nu, &t).unwrap(), 8).unwrap();
            let series = shift_moments_by_series(&jacobi_to_moments(&nu, 6).unwrap(), &t, 8).unwrap();
            assert_eq!(structural, series);
        }
    }

    #[test]
    fn polynomial_examples() {
        let mu = JacobiParams::free_poisson_mu(&rat(1, 1), &rat(1, 1), 3);
        let q = orthogonal_polynomials(&mu, 2).unwrap();
        assert_eq!(q[2], Poly::new(ints(&[-1, -1, 1])));
        let nu0 = JacobiParams::semicircle(&rat(0, 1), &rat(3, 1), 3);
        let p = orthogonal_polynomials(&nu0, 2).unwrap();
        assert_eq!(p[2], Poly::new(ints(&[-3, 0, 1])));
        let j = JacobiParams::new(ints(&[7, 1]), ints(&[2]), false);
        assert_eq!(orthogonal_polynomials(&j, 1).unwrap()[1], Poly::new(ints(&[-7, 1])));
        assert!(orthogonal_polynomials(&j, 3).is_err());
    }

    #[test]
    fn json_shape() {
        let j = JacobiParams::new(vec![rat(1, 2)], vec![rat(0, 1)], true);
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"{"beta":["1/2"],"gamma":["0"],"terminated":true}"#);
        assert_eq!(serde_json::from_str::<JacobiParams<Q>>(&s).unwrap(), j);
    }

    fn positive_rational() -> impl Strategy<Value = Q> {
        (1i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    fn any_rational() -> impl Strategy<Value = Q> {
        (-9i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn jacobi_roundtrip(
            betas in proptest::collection::vec(any_rational(), 4),
            gammas in proptest::collection::vec(positive_rational(), 4),
        ) {
            let j = JacobiParams::new(betas, gammas, false);
            let m = jacobi_to_moments(&j, 8).unwrap();
            prop_assert_eq!(moments_to_jacobi(&m).unwrap(), j);
        }
    }
}
