use std::collections::BTreeMap;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{pow, Scalar};
use crate::Rational;

/// Cell indices, 1-based; the empty word is the vacuum `Ω`.
pub type Word = Vec<usize>;

/// Finite combination of basis words. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct FockVector<F: Scalar = Rational> {
    terms: BTreeMap<Word, F>,
}

impl<F: Scalar> Default for FockVector<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> FockVector<F> {
    pub fn zero() -> Self {
        FockVector { terms: BTreeMap::new() }
    }

    pub fn vacuum() -> Self {
        Self::basis(Vec::new())
    }

    pub fn basis(word: Word) -> Self {
        Self::from_terms([(word, F::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, F)>) -> Self {
        let mut v = Self::zero();
        for (w, c) in terms {
            v.add_term(w, c);
        }
        v
    }

    pub fn add_term(&mut self, word: Word, coef: F) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coef;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn coef(&self, word: &[usize]) -> F {
        self.terms.get(word).cloned().unwrap_or_else(F::zero)
    }

    /// `⟨Ω, v⟩`.
    pub fn vacuum_coef(&self) -> F {
        self.coef(&[])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Longest stored word.
    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Drop every word longer than `max_len`.
    pub fn truncated(mut self, max_len: usize) -> Self {
        self.terms.retain(|w, _| w.len() <= max_len);
        self
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FockVector {
            terms: self.terms.iter().map(|(w, k)| (w.clone(), k.clone() * c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &F::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-F::one());
        out
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        for (w, k) in &other.terms {
            self.add_term(w.clone(), k.clone() * c.clone());
        }
    }

    /// `⟨v, w⟩ = Σ c_v c_w h^{|word|}` for cell length `h`.
    pub fn inner(&self, other: &Self, cell_length: &F) -> F {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = F::zero();
        for (w, c) in &small.terms {
            if let Some(d) = large.terms.get(w) {
                acc = acc + c.clone() * d.clone() * pow(cell_length, w.len() as u32);
            }
        }
        acc
    }

    pub fn norm_sq(&self, cell_length: &F) -> F {
        self.inner(self, cell_length)
    }
}

impl<F: Scalar> std::fmt::Debug for FockVector<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}·{w:?}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    word: Word,
    coef: String,
}

impl<F: Scalar> Serialize for FockVector<F> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(self.terms.iter().map(|(w, c)| Entry {
            word: w.clone(),
            coef: c.to_string(),
        }))
    }
}

impl<'de, F: Scalar + FromStr> Deserialize<'de> for FockVector<F> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let entries = Vec::<Entry>::deserialize(de)?;
        let mut v = Self::zero();
        for e in entries {
            if e.word.contains(&0) {
                return Err(D::Error::custom("cell indices are 1-based"));
            }
            let c = F::from_str(e.coef.trim()).map_err(|_| D::Error::custom(format!("bad coefficient {:?}", e.coef)))?;
            v.add_term(e.word, c);
        }
        Ok(v)
    }
}
