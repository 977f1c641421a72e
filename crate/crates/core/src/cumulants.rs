//! Free and two-state free moment–cumulant transforms, and mixed moments of
//! stationary families of two-state freely independent increments.
//!
//! With `NC(n)` the non-crossing partitions of `{1..n}`:
//!
//! ```text
//! ψ-moment  m_n = Σ_{π∈NC(n)} Π_{V∈π} R^ψ_{|V|}
//! φ-moment  m_n = Σ_{π∈NC(n)} Π_{V outer} R^{φψ}_{|V|} Π_{V inner} R^ψ_{|V|}
//! ```
//!
//! The univariate transforms aggregate `NC(n)` by the multiset of outer and
//! inner block sizes; the table is computed once per `n` and shared.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Display;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::partitions::{for_each_nc, outer_flags};
use crate::scalar::{pow, rational_strings, ring_from_usize, Field, Ring, Scalar};

/// Largest order accepted by the univariate transforms (|NC(14)| = 2 674 440).
pub const MAX_TRANSFORM_ORDER: usize = 14;

/// Cumulants `R_1, R_2, …` (index `k ≥ 1` stored at position `k − 1`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound(serialize = "R: Display", deserialize = "R: FromStr"))]
pub struct CumulantSpec<R> {
    #[serde(with = "rational_strings")]
    values: Vec<R>,
}

/// Moments `m_1, m_2, …`; `m_0 = 1` is implicit and never stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent, bound(serialize = "R: Display", deserialize = "R: FromStr"))]
pub struct MomentSequence<R> {
    #[serde(with = "rational_strings")]
    values: Vec<R>,
}

macro_rules! sequence_common {
    ($ty:ident) => {
        impl<R: Ring> $ty<R> {
            pub fn new(values: Vec<R>) -> Self {
                $ty { values }
            }

            pub fn zeros(len: usize) -> Self {
                $ty {
                    values: vec![R::zero(); len],
                }
            }

            pub fn values(&self) -> &[R] {
                &self.values
            }

            pub fn into_values(self) -> Vec<R> {
                self.values
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            /// 1-based access; `None` past the truncation order.
            pub fn get(&self, k: usize) -> Option<&R> {
                k.checked_sub(1).and_then(|i| self.values.get(i))
            }

            pub fn truncated(&self, len: usize) -> Self {
                $ty {
                    values: self.values.iter().take(len).cloned().collect(),
                }
            }
        }
    };
}

sequence_common!(CumulantSpec);
sequence_common!(MomentSequence);

impl<R: Ring> MomentSequence<R> {
    /// `m_k` with the `m_0 = 1` convention.
    pub fn moment(&self, k: usize) -> R {
        if k == 0 {
            R::one()
        } else {
            self.values[k - 1].clone()
        }
    }
}

/// The two cumulant sequences of one element: `R^{φ,ψ}` and `R^ψ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Display", deserialize = "R: FromStr"))]
pub struct TwoStateElementSpec<R> {
    pub r_phi_psi: CumulantSpec<R>,
    pub r_psi: CumulantSpec<R>,
}

impl<R: Ring> TwoStateElementSpec<R> {
    pub fn new(r_phi_psi: CumulantSpec<R>, r_psi: CumulantSpec<R>) -> Result<Self> {
        if r_phi_psi.len() != r_psi.len() {
            return Err(invalid(format!(
                "cumulant orders differ: {} vs {}",
                r_phi_psi.len(),
                r_psi.len()
            )));
        }
        Ok(TwoStateElementSpec { r_phi_psi, r_psi })
    }

    pub fn order(&self) -> usize {
        self.r_psi.len()
    }

    /// Cumulants of `scale · X`.
    pub fn dilate(&self, scale: &R) -> Self {
        TwoStateElementSpec {
            r_phi_psi: cumulant_dilate(&self.r_phi_psi, scale),
            r_psi: cumulant_dilate(&self.r_psi, scale),
        }
    }

    /// Cumulants of `X + Y` for two-state freely independent `X`, `Y`.
    pub fn free_add(&self, other: &Self) -> Result<Self> {
        Ok(TwoStateElementSpec {
            r_phi_psi: cumulant_free_add(&self.r_phi_psi, &other.r_phi_psi)?,
            r_psi: cumulant_free_add(&self.r_psi, &other.r_psi)?,
        })
    }
}

impl<F: Scalar> TwoStateElementSpec<F> {
    /// Two-state free Brownian motion with parameter `alpha` at time `t`:
    /// `R^{φψ}(z) = t z²`, `R^ψ(z) = αt z + t z²`.
    pub fn brownian(alpha: &F, t: &F, order: usize) -> Self {
        Self::algebraic_brownian(alpha, &F::one(), t, order)
    }

    /// Algebraic two-state Brownian motion: `R^{φψ}(z) = t z²`,
    /// `R^ψ(z) = αt z + βt z²`.
    pub fn algebraic_brownian(alpha: &F, beta: &F, t: &F, order: usize) -> Self {
        let mut phi = vec![F::zero(); order];
        let mut psi = vec![F::zero(); order];
        if order >= 1 {
            psi[0] = alpha.clone() * t.clone();
        }
        if order >= 2 {
            phi[1] = t.clone();
            psi[1] = beta.clone() * t.clone();
        }
        TwoStateElementSpec {
            r_phi_psi: CumulantSpec::new(phi),
            r_psi: CumulantSpec::new(psi),
        }
    }
}

/// Which state a moment is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum State {
    Phi,
    Psi,
}

/// `N` stationary increments `X_{1,N}, …, X_{N,N}` of a process on `[0, T)`,
/// with mixed cumulants across distinct increments identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct IncrementFamilySpec<F> {
    count: usize,
    per_increment: TwoStateElementSpec<F>,
    total_time: F,
}

impl<F: Scalar> IncrementFamilySpec<F> {
    /// Split whole-interval cumulants into `count` increments, each carrying
    /// `1/count` of every cumulant.
    pub fn from_whole(whole: &TwoStateElementSpec<F>, count: usize, total_time: F) -> Result<Self> {
        if count == 0 {
            return Err(invalid("increment count must be at least 1"));
        }
        if total_time <= F::zero() {
            return Err(invalid("total time must be positive"));
        }
        let inv = F::one() / ring_from_usize::<F>(count);
        let scale = |c: &CumulantSpec<F>| {
            CumulantSpec::new(c.values().iter().map(|v| v.clone() * inv.clone()).collect())
        };
        Ok(IncrementFamilySpec {
            count,
            per_increment: TwoStateElementSpec {
                r_phi_psi: scale(&whole.r_phi_psi),
                r_psi: scale(&whole.r_psi),
            },
            total_time,
        })
    }

    /// Increments of the two-state free Brownian motion with parameter `alpha`.
    pub fn brownian(alpha: &F, total_time: F, count: usize, order: usize) -> Result<Self> {
        let whole = TwoStateElementSpec::brownian(alpha, &total_time, order);
        Self::from_whole(&whole, count, total_time)
    }

    /// Increments of the algebraic Brownian motion with ψ-variance `beta·T`.
    pub fn algebraic_brownian(
        alpha: &F,
        beta: &F,
        total_time: F,
        count: usize,
        order: usize,
    ) -> Result<Self> {
        let whole = TwoStateElementSpec::algebraic_brownian(alpha, beta, &total_time, order);
        Self::from_whole(&whole, count, total_time)
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn total_time(&self) -> &F {
        &self.total_time
    }

    pub fn per_increment(&self) -> &TwoStateElementSpec<F> {
        &self.per_increment
    }

    pub fn order(&self) -> usize {
        self.per_increment.order()
    }

    /// Whole-interval cumulants (`count` times the per-increment ones).
    pub fn whole(&self) -> TwoStateElementSpec<F> {
        let n = ring_from_usize::<F>(self.count);
        let scale = |c: &CumulantSpec<F>| {
            CumulantSpec::new(c.values().iter().map(|v| v.clone() * n.clone()).collect())
        };
        TwoStateElementSpec {
            r_phi_psi: scale(&self.per_increment.r_phi_psi),
            r_psi: scale(&self.per_increment.r_psi),
        }
    }

    /// The same process cut into a different number of increments.
    pub fn with_count(&self, count: usize) -> Result<Self> {
        Self::from_whole(&self.whole(), count, self.total_time.clone())
    }
}

/// Multiset signature of one non-crossing partition: sorted outer block
/// sizes and sorted inner block sizes.
type ShapeKey = (Vec<usize>, Vec<usize>);

struct NcShapes {
    /// `(outer sizes, inner sizes, multiplicity)`
    shapes: Vec<(Vec<usize>, Vec<usize>, usize)>,
}

fn nc_shapes(n: usize) -> Arc<NcShapes> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<NcShapes>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let mut counts: BTreeMap<ShapeKey, usize> = BTreeMap::new();
    for_each_nc(n, false, &mut |blocks| {
        let flags = outer_flags(blocks);
        let mut outer = Vec::new();
        let mut inner = Vec::new();
        for (b, o) in blocks.iter().zip(flags) {
            if o {
                outer.push(b.len());
            } else {
                inner.push(b.len());
            }
        }
        outer.sort_unstable();
        inner.sort_unstable();
        *counts.entry((outer, inner)).or_default() += 1;
    });
    let table = Arc::new(NcShapes {
        shapes: counts.into_iter().map(|((o, i), c)| (o, i, c)).collect(),
    });
    cache.lock().unwrap().insert(n, table.clone());
    table
}

fn check_order(n: usize, available: usize) -> Result<()> {
    if n > MAX_TRANSFORM_ORDER {
        return Err(Error::SizeLimit {
            what: "transform order",
            requested: n,
            cap: MAX_TRANSFORM_ORDER,
        });
    }
    if available < n {
        return Err(invalid(format!(
            "need {n} cumulants, only {available} given"
        )));
    }
    Ok(())
}

/// `Σ_{π∈NC(j)} Π_outer outer[|V|] Π_inner inner[|V|]`.
fn nc_sum<R: Ring>(j: usize, outer: &[R], inner: &[R]) -> R {
    let table = nc_shapes(j);
    let mut acc = R::zero();
    for (o, i, count) in &table.shapes {
        let term = o
            .iter()
            .map(|&s| &outer[s - 1])
            .chain(i.iter().map(|&s| &inner[s - 1]))
            .try_fold(R::one(), |p, c| {
                if c.is_zero() {
                    None
                } else {
                    Some(p * c.clone())
                }
            });
        if let Some(term) = term {
            acc = acc + term * ring_from_usize::<R>(*count);
        }
    }
    acc
}

/// `m_j = Σ_{π∈NC(j)} Π_V c_{|V|}` for `j = 1..=n`.
pub fn moments_from_free_cumulants<R: Ring>(c: &CumulantSpec<R>, n: usize) -> Result<MomentSequence<R>> {
    check_order(n, c.len())?;
    Ok(MomentSequence::new(
        (1..=n).map(|j| nc_sum(j, c.values(), c.values())).collect(),
    ))
}

/// φ-moments from `R^{φψ}` (outer blocks) and `R^ψ` (inner blocks).
pub fn moments_from_two_state_cumulants<R: Ring>(
    s: &TwoStateElementSpec<R>,
    n: usize,
) -> Result<MomentSequence<R>> {
    check_order(n, s.r_phi_psi.len().min(s.r_psi.len()))?;
    Ok(MomentSequence::new(
        (1..=n)
            .map(|j| nc_sum(j, s.r_phi_psi.values(), s.r_psi.values()))
            .collect(),
    ))
}

/// Inverse of [`moments_from_free_cumulants`]: only `π = 1̂` carries
/// `c_n`, so `c_n = m_n − Σ_{π≠1̂} Π c_{|V|}`.
pub fn free_cumulants_from_moments<F: Field>(m: &MomentSequence<F>) -> Result<CumulantSpec<F>> {
    check_order(m.len(), m.len())?;
    let mut c: Vec<F> = Vec::with_capacity(m.len());
    for j in 1..=m.len() {
        c.push(F::zero());
        let rest = nc_sum(j, &c, &c);
        c[j - 1] = m.values()[j - 1].clone() - rest;
    }
    Ok(CumulantSpec::new(c))
}

/// Inverse of [`moments_from_two_state_cumulants`] given `R^ψ`.
pub fn two_state_cumulants_from_moments<F: Field>(
    m_phi: &MomentSequence<F>,
    r_psi: &CumulantSpec<F>,
) -> Result<CumulantSpec<F>> {
    if r_psi.len() != m_phi.len() {
        return Err(invalid(format!(
            "moment and cumulant orders differ: {} vs {}",
            m_phi.len(),
            r_psi.len()
        )));
    }
    check_order(m_phi.len(), m_phi.len())?;
    let mut r: Vec<F> = Vec::with_capacity(m_phi.len());
    for j in 1..=m_phi.len() {
        r.push(F::zero());
        let rest = nc_sum(j, &r, r_psi.values());
        r[j - 1] = m_phi.values()[j - 1].clone() - rest;
    }
    Ok(CumulantSpec::new(r))
}

/// Cumulants of `scale · X`: `c_k ↦ scale^k c_k`.
pub fn cumulant_dilate<R: Ring>(c: &CumulantSpec<R>, scale: &R) -> CumulantSpec<R> {
    CumulantSpec::new(
        c.values()
            .iter()
            .enumerate()
            .map(|(i, v)| v.clone() * pow(scale, i as u32 + 1))
            .collect(),
    )
}

/// Cumulants of a sum of freely independent elements: coordinatewise sum.
pub fn cumulant_free_add<R: Ring>(a: &CumulantSpec<R>, b: &CumulantSpec<R>) -> Result<CumulantSpec<R>> {
    if a.len() != b.len() {
        return Err(invalid(format!(
            "cumulant orders differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(CumulantSpec::new(
        a.values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| x.clone() + y.clone())
            .collect(),
    ))
}

/// Mixed moment `state[X_{w_1} X_{w_2} … X_{w_n}]` of increments (1-based
/// indices). A block contributes its per-increment cumulant when the word is
/// constant on it and zero otherwise, so only partitions finer than the
/// kernel of the word are visited.
pub fn mixed_moment<F: Scalar>(
    family: &IncrementFamilySpec<F>,
    word: &[usize],
    state: State,
) -> Result<F> {
    if let Some(&bad) = word.iter().find(|&&i| i == 0 || i > family.count) {
        return Err(invalid(format!(
            "increment index {bad} outside 1..={}",
            family.count
        )));
    }
    if word.len() > family.order() {
        return Err(invalid(format!(
            "word length {} exceeds the cumulant order {}",
            word.len(),
            family.order()
        )));
    }
    if word.is_empty() {
        return Ok(F::one());
    }
    let spec = &family.per_increment;
    let outer_c = match state {
        State::Phi => spec.r_phi_psi.values(),
        State::Psi => spec.r_psi.values(),
    };
    let inner_c = spec.r_psi.values();
    Ok(constrained_nc_sum(word, outer_c, inner_c))
}

/// Sum over non-crossing partitions whose blocks are constant on `word`.
fn constrained_nc_sum<R: Ring>(word: &[usize], outer: &[R], inner: &[R]) -> R {
    fn rec<R: Ring>(
        i: usize,
        word: &[usize],
        blocks: &mut Vec<Vec<usize>>,
        open: &mut Vec<usize>,
        outer: &[R],
        inner: &[R],
        acc: &mut R,
    ) {
        if i > word.len() {
            let flags = outer_flags(blocks);
            let mut term = R::one();
            for (b, o) in blocks.iter().zip(flags) {
                let c = if o { &outer[b.len() - 1] } else { &inner[b.len() - 1] };
                if c.is_zero() {
                    return;
                }
                term = term * c.clone();
            }
            *acc = acc.clone() + term;
            return;
        }
        let letter = word[i - 1];
        for pos in 0..open.len() {
            let b = open[pos];
            if word[blocks[b][0] - 1] != letter {
                continue;
            }
            let closed = open.split_off(pos + 1);
            blocks[b].push(i);
            rec(i + 1, word, blocks, open, outer, inner, acc);
            blocks[b].pop();
            open.extend(closed);
        }
        blocks.push(vec![i]);
        open.push(blocks.len() - 1);
        rec(i + 1, word, blocks, open, outer, inner, acc);
        open.pop();
        blocks.pop();
    }
    let mut acc = R::zero();
    rec(1, word, &mut Vec::new(), &mut Vec::new(), outer, inner, &mut acc);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_set_partitions, is_noncrossing};
    use crate::scalar::rat;
    use num_rational::BigRational;
    use num_traits::Zero;
    use proptest::prelude::*;

    type Q = BigRational;

    fn cs(v: &[(i64, i64)]) -> CumulantSpec<Q> {
        CumulantSpec::new(v.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&k| rat(k, 1)).collect()
    }

    /// Compositions of `total` into `parts` non-negative parts.
    fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
        if parts == 0 {
            return if total == 0 { vec![vec![]] } else { vec![] };
        }
        (0..=total)
            .flat_map(|first| {
                compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }

    /// Oracle: decompose by the block of 1. Its gaps hold ψ-moments; the
    /// tail after it holds a φ-moment.
    fn two_state_oracle(r: &[Q], c: &[Q], n: usize) -> Vec<Q> {
        let psi = free_oracle(c, n);
        let mut phi: Vec<Q> = vec![rat(1, 1)];
        for len in 1..=n {
            let mut acc = Q::zero();
            for s in 1..=len {
                for comp in compositions(len - s, s) {
                    let mut term = r[s - 1].clone() * phi[comp[s - 1]].clone();
                    for &g in &comp[..s - 1] {
                        term *= psi[g].clone();
                    }
                    acc += term;
                }
            }
            phi.push(acc);
        }
        phi
    }

    /// Oracle: `m_n = Σ_s c_s Σ_{i_1+…+i_s = n−s} m_{i_1}⋯m_{i_s}`.
    fn free_oracle(c: &[Q], n: usize) -> Vec<Q> {
        let mut m: Vec<Q> = vec![rat(1, 1)];
        for len in 1..=n {
            let mut acc = Q::zero();
            for s in 1..=len {
                for comp in compositions(len - s, s) {
                    let mut term = c[s - 1].clone();
                    for &g in &comp {
                        term *= m[g].clone();
                    }
                    acc += term;
                }
            }
            m.push(acc);
        }
        m
    }

    #[test]
    fn free_moment_examples() {
        let m = moments_from_free_cumulants(&cs(&[(1, 1), (1, 1), (0, 1), (0, 1)]), 4).unwrap();
        assert_eq!(m.values(), ints(&[1, 2, 4, 9]).as_slice());
        assert_eq!(free_oracle(&ints(&[1, 1, 0, 0]), 4)[1..], ints(&[1, 2, 4, 9])[..]);
        let m = moments_from_free_cumulants(&cs(&[(0, 1), (1, 1), (0, 1), (0, 1)]), 4).unwrap();
        assert_eq!(m.values(), ints(&[0, 1, 0, 2]).as_slice());
        let zero = moments_from_free_cumulants(&CumulantSpec::<Q>::zeros(5), 5).unwrap();
        assert!(zero.values().iter().all(Zero::is_zero));
        assert!(moments_from_free_cumulants(&CumulantSpec::<Q>::zeros(2), 3).is_err());
    }

    #[test]
    fn free_cumulant_examples() {
        let c = free_cumulants_from_moments(&MomentSequence::new(ints(&[1, 2, 4, 9]))).unwrap();
        assert_eq!(c.values(), ints(&[1, 1, 0, 0]).as_slice());
        let t = rat(3, 7);
        let m = MomentSequence::new(vec![
            rat(0, 1),
            t.clone(),
            rat(0, 1),
            rat(2, 1) * t.clone() * t.clone(),
        ]);
        let c = free_cumulants_from_moments(&m).unwrap();
        assert_eq!(c.values(), &[rat(0, 1), t, rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn two_state_examples() {
        let s = TwoStateElementSpec::new(
            cs(&[(0, 1), (1, 1), (0, 1), (0, 1)]),
            cs(&[(1, 1), (1, 1), (0, 1), (0, 1)]),
        )
        .unwrap();
        let m = moments_from_two_state_cumulants(&s, 4).unwrap();
        assert_eq!(m.values(), ints(&[0, 1, 1, 3]).as_slice());
        let back = two_state_cumulants_from_moments(&m, &s.r_psi).unwrap();
        assert_eq!(back, s.r_phi_psi);

        let s = TwoStateElementSpec::new(cs(&[(0, 1), (1, 1), (0, 1), (0, 1)]), CumulantSpec::zeros(4))
            .unwrap();
        // only {(1,2),(3,4)} survives at order 4: the nested pairing has an
        // inner pair weighted by R^ψ_2 = 0
        let m = moments_from_two_state_cumulants(&s, 4).unwrap();
        assert_eq!(m.values(), ints(&[0, 1, 0, 1]).as_slice());
        assert_eq!(&two_state_oracle(&ints(&[0, 1, 0, 0]), &ints(&[0, 0, 0, 0]), 4)[1..], m.values());
    }

    #[test]
    fn two_state_matches_decomposition_oracle() {
        let r = vec![rat(1, 2), rat(-1, 3), rat(2, 1), rat(0, 1), rat(5, 7), rat(1, 1), rat(-2, 1)];
        let c = vec![rat(2, 1), rat(1, 5), rat(-1, 1), rat(3, 2), rat(0, 1), rat(1, 3), rat(1, 1)];
        let s = TwoStateElementSpec::new(CumulantSpec::new(r.clone()), CumulantSpec::new(c.clone()))
            .unwrap();
        let engine = moments_from_two_state_cumulants(&s, 7).unwrap();
        assert_eq!(engine.values(), &two_state_oracle(&r, &c, 7)[1..]);
        let engine = moments_from_free_cumulants(&CumulantSpec::new(c.clone()), 7).unwrap();
        assert_eq!(engine.values(), &free_oracle(&c, 7)[1..]);
    }

    #[test]
    fn equal_specs_collapse_to_free() {
        let c = cs(&[(1, 2), (2, 3), (-1, 4), (1, 1), (0, 1), (3, 5), (1, 7), (-2, 9)]);
        let two = moments_from_two_state_cumulants(&TwoStateElementSpec::new(c.clone(), c.clone()).unwrap(), 8)
            .unwrap();
        assert_eq!(two, moments_from_free_cumulants(&c, 8).unwrap());
        let back = two_state_cumulants_from_moments(&two, &c).unwrap();
        assert_eq!(back, c);
    }

    fn family(n: usize) -> IncrementFamilySpec<Q> {
        IncrementFamilySpec::brownian(&rat(1, 1), rat(1, 1), n, 8).unwrap()
    }

    #[test]
    fn mixed_moment_examples() {
        let f = family(2);
        assert_eq!(mixed_moment(&f, &[1, 2], State::Phi).unwrap(), rat(0, 1));
        assert_eq!(mixed_moment(&f, &[1, 1], State::Phi).unwrap(), rat(1, 2));
        assert_eq!(mixed_moment(&f, &[1], State::Psi).unwrap(), rat(1, 2));
        assert!(mixed_moment(&f, &[3], State::Phi).is_err());
        assert!(mixed_moment(&f, &[0], State::Phi).is_err());
    }

    /// Oracle: sum over all of `Part(n)`, keeping non-crossing partitions by
    /// the quadruple criterion and zeroing non-constant blocks.
    fn mixed_oracle(f: &IncrementFamilySpec<Q>, word: &[usize], state: State) -> Q {
        let spec = f.per_increment();
        let mut acc = Q::zero();
        for p in enumerate_set_partitions(word.len()).unwrap() {
            if !is_noncrossing(&p) {
                continue;
            }
            let cls = crate::partitions::classify_blocks(&p).unwrap();
            let mut term = rat(1, 1);
            for (i, b) in p.blocks().iter().enumerate() {
                if b.iter().any(|&x| word[x - 1] != word[b[0] - 1]) {
                    term = Q::zero();
                    break;
                }
                let outer = cls.outer.contains(&i);
                let c = match (state, outer) {
                    (State::Phi, true) => spec.r_phi_psi.get(b.len()).unwrap(),
                    _ => spec.r_psi.get(b.len()).unwrap(),
                };
                term *= c.clone();
            }
            acc += term;
        }
        acc
    }

    #[test]
    fn mixed_moment_matches_part_oracle() {
        let f = IncrementFamilySpec::algebraic_brownian(&rat(2, 3), &rat(3, 2), rat(1, 2), 3, 8).unwrap();
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..5 {
            words = words
                .iter()
                .flat_map(|w| (1..=3).map(move |i| [w.clone(), vec![i]].concat()))
                .collect();
            for w in &words {
                for st in [State::Phi, State::Psi] {
                    assert_eq!(mixed_moment(&f, w, st).unwrap(), mixed_oracle(&f, w, st), "{w:?}");
                }
            }
        }
    }

    #[test]
    fn constant_words_give_univariate_moments() {
        let f = family(3);
        let spec = f.per_increment();
        let phi = moments_from_two_state_cumulants(spec, 6).unwrap();
        let psi = moments_from_free_cumulants(&spec.r_psi, 6).unwrap();
        for j in 1..=6 {
            let w = vec![2; j];
            assert_eq!(mixed_moment(&f, &w, State::Phi).unwrap(), phi.moment(j));
            assert_eq!(mixed_moment(&f, &w, State::Psi).unwrap(), psi.moment(j));
        }
    }

    #[test]
    fn solitary_boundary_index_vanishes() {
        for n in 1..=3 {
            let f = family(n);
            let mut words: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..4 {
                words = words
                    .iter()
                    .flat_map(|w| (1..=n).map(move |i| [w.clone(), vec![i]].concat()))
                    .collect();
                for w in &words {
                    let solitary = |x: usize| w.iter().filter(|&&y| y == x).count() == 1;
                    if solitary(w[0]) || solitary(*w.last().unwrap()) {
                        assert!(mixed_moment(&f, w, State::Phi).unwrap().is_zero(), "{w:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn dilation_and_free_addition() {
        // Y(2) - Y(1) at alpha = 1: (t-s) X(1/t) and -s X([1/t, 1/s)).
        let x_half = TwoStateElementSpec::brownian(&rat(1, 1), &rat(1, 2), 2);
        let a = x_half.dilate(&rat(1, 1));
        let b = x_half.dilate(&rat(-1, 1));
        assert_eq!(a.r_psi.values(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(b.r_psi.values(), &[rat(-1, 2), rat(1, 2)]);
        let sum = a.free_add(&b).unwrap();
        assert_eq!(sum.r_psi.values(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(sum.r_phi_psi.values(), &[rat(0, 1), rat(1, 1)]);

        let c = cs(&[(1, 2), (3, 4), (5, 6)]);
        assert_eq!(cumulant_dilate(&c, &rat(1, 1)), c);
        assert!(cumulant_dilate(&c, &rat(0, 1)).values().iter().all(Zero::is_zero));
        assert!(cumulant_free_add(&c, &cs(&[(1, 1)])).is_err());
    }

    #[test]
    fn time_reversal_scaling() {
        // t X(1/t) has ψ-cumulants (α, t) and φ-law with Jacobi (0, α, …; t, t, …)
        for (alpha, t) in [(rat(1, 1), rat(2, 1)), (rat(2, 1), rat(1, 3)), (rat(-1, 2), rat(5, 1))] {
            let x = TwoStateElementSpec::brownian(&alpha, &(rat(1, 1) / t.clone()), 6);
            let y = x.dilate(&t);
            assert_eq!(y.r_psi.values()[0], alpha);
            assert_eq!(y.r_psi.values()[1], t);
            // ψ side: semicircle with mean α, variance t
            assert_eq!(y.r_psi, CumulantSpec::new(
                [alpha.clone(), t.clone()].into_iter().chain(std::iter::repeat_n(rat(0, 1), 4)).collect()
            ));
            let phi = moments_from_two_state_cumulants(&y, 6).unwrap();
            let target = TwoStateElementSpec::new(
                CumulantSpec::new([rat(0, 1), t.clone()].into_iter().chain(std::iter::repeat_n(rat(0, 1), 4)).collect()),
                y.r_psi.clone(),
            )
            .unwrap();
            assert_eq!(phi, moments_from_two_state_cumulants(&target, 6).unwrap());
        }
    }

    #[test]
    fn polynomial_ring_moments() {
        use crate::poly::Poly;
        // ν_t moments with cumulants (αt, t) at α = 1, evaluated at t = 2
        let t: Poly<Q> = Poly::var();
        let c = CumulantSpec::new(vec![t.clone(), t.clone(), Poly::zero(), Poly::zero()]);
        let m = moments_from_free_cumulants(&c, 4).unwrap();
        let at2: Vec<Q> = m.values().iter().map(|p| p.eval(&rat(2, 1))).collect();
        let direct = moments_from_free_cumulants(&cs(&[(2, 1), (2, 1), (0, 1), (0, 1)]), 4).unwrap();
        assert_eq!(at2, direct.values());
    }

    #[test]
    fn json_is_rational_strings() {
        let c = cs(&[(1, 2), (-3, 1)]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"["1/2","-3"]"#);
        let back: CumulantSpec<Q> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    fn small_rational() -> impl Strategy<Value = Q> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn free_transform_roundtrip(v in proptest::collection::vec(small_rational(), 1..=6)) {
            let c = CumulantSpec::new(v);
            let m = moments_from_free_cumulants(&c, c.len()).unwrap();
            prop_assert_eq!(free_cumulants_from_moments(&m).unwrap(), c);
        }

        #[test]
        fn two_state_transform_roundtrip(
            r in proptest::collection::vec(small_rational(), 6),
            c in proptest::collection::vec(small_rational(), 6),
        ) {
            let s = TwoStateElementSpec::new(CumulantSpec::new(r), CumulantSpec::new(c)).unwrap();
            let m = moments_from_two_state_cumulants(&s, 6).unwrap();
            prop_assert_eq!(two_state_cumulants_from_moments(&m, &s.r_psi).unwrap(), s.r_phi_psi);
        }
    }
}
