//! Homology of bigraded complexes, Poincaré polynomials and the passage
//! from the tilde to the hat theory.
//!
//! Gradings are pairs `(maslov, alex2)` with the Alexander grading doubled.
//! The two-dimensional space `W(i) = F_{0,0} + F_{-1,-i}` becomes the
//! polynomial `1 + t^-1 q^-2i` in these coordinates.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{tilde_complex, BigradedComplex, Bigrading, ComplexError};
use crate::diagram::WeightedDiagram;
use crate::gf2::SparseMatrix;

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("deconvolution by W({weight}) is inexact at ({maslov}, {alex2}/2)")]
    Deconvolution { weight: i64, maslov: i64, alex2: i64 },
}

/// Bigraded dimensions, finitely supported. Zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PoincarePolynomial {
    coeffs: BTreeMap<(i64, i64), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDim {
    pub maslov: i64,
    pub alex2: i64,
    pub dim: u64,
}

impl PoincarePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single class at `(maslov, alex2)`.
    pub fn monomial(maslov: i64, alex2: i64) -> Self {
        let mut p = Self::zero();
        p.add(maslov, alex2, 1);
        p
    }

    /// `W(i)`, with `i` an undoubled weight.
    pub fn w(i: i64) -> Self {
        let mut p = Self::monomial(0, 0);
        p.add(-1, -2 * i, 1);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), u64)>) -> Self {
        let mut p = Self::zero();
        for ((m, a), d) in terms {
            p.add(m, a, d);
        }
        p
    }

    pub fn add(&mut self, maslov: i64, alex2: i64, dim: u64) {
        if dim > 0 {
            *self.coeffs.entry((maslov, alex2)).or_insert(0) += dim;
        }
    }

    pub fn get(&self, maslov: i64, alex2: i64) -> u64 {
        self.coeffs.get(&(maslov, alex2)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn total_dim(&self) -> u64 {
        self.coeffs.values().sum()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = ((i64, i64), u64)> + '_ {
        self.coeffs.iter().map(|(&k, &v)| (k, v))
    }

    /// `X[a, b2]`: the class at `(d, s)` moves to `(d - a, s - b2)`.
    pub fn shift(&self, a: i64, b2: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&(m, s), &d)| ((m - a, s - b2), d)).collect() }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (&(m1, a1), &d1) in &self.coeffs {
            for (&(m2, a2), &d2) in &other.coeffs {
                p.add(m1 + m2, a1 + a2, d1 * d2);
            }
        }
        p
    }

    /// `X (x) W(i) = X + X[1, i]`.
    pub fn tensor_w(&self, i: i64) -> Self {
        let mut p = self.clone();
        for ((m, a), d) in self.shift(1, 2 * i).terms() {
            p.add(m, a, d);
        }
        p
    }

    /// Shifts the Alexander grading so that its minimum is zero.
    pub fn normalize_ashift(&self) -> Self {
        match self.coeffs.keys().map(|&(_, a)| a).min() {
            Some(min) => self.shift(0, min),
            None => Self::zero(),
        }
    }

    pub fn eq_up_to_ashift(&self, other: &Self) -> bool {
        self.normalize_ashift() == other.normalize_ashift()
    }

    /// Exact division by `W(i)`, greedy from the top Maslov grading.
    pub fn divide_w(&self, i: i64) -> Result<Self, HomologyError> {
        let mut rest: BTreeMap<(i64, i64), i64> = self.coeffs.iter().map(|(&k, &v)| (k, v as i64)).collect();
        let mut q = Self::zero();
        // the largest remaining key always carries the leading coefficient
        while let Some((&(m, a), &c)) = rest.iter().next_back() {
            if c < 0 {
                return Err(HomologyError::Deconvolution { weight: i, maslov: m, alex2: a });
            }
            rest.remove(&(m, a));
            q.add(m, a, c as u64);
            let echo = (m - 1, a - 2 * i);
            let e = rest.entry(echo).or_insert(0);
            *e -= c;
            if *e == 0 {
                rest.remove(&echo);
            }
        }
        Ok(q)
    }

    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut chi = LaurentPoly::default();
        for ((m, a), d) in self.terms() {
            chi.add_term(a, if m.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) });
        }
        chi
    }

    pub fn to_graded_dims(&self) -> Vec<GradedDim> {
        self.terms().map(|((maslov, alex2), dim)| GradedDim { maslov, alex2, dim }).collect()
    }
}

/// Formats an Alexander grading given doubled, e.g. `3`, `-1/2`.
pub fn halved(alex2: i64) -> String {
    if alex2 % 2 == 0 {
        (alex2 / 2).to_string()
    } else {
        format!("{alex2}/2")
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .rev()
            .map(|((m, a), d)| {
                let cls = format!("F({m},{})", halved(a));
                if d == 1 {
                    cls
                } else {
                    format!("{d}{cls}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Integer Laurent polynomial in `q`, exponents being doubled Alexander
/// gradings.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        let c = self.coeffs.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::default();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }

    /// Same polynomial with the lowest exponent moved to zero and the
    /// leading sign made positive; equality of normalized forms is
    /// equality up to a unit `+-q^k`.
    pub fn normalize_unit(&self) -> Self {
        let Some((&lo, _)) = self.coeffs.iter().next() else { return Self::default() };
        let sign = if self.coeffs.values().next_back().is_some_and(|&c| c < 0) { -1 } else { 1 };
        Self { coeffs: self.coeffs.iter().map(|(&e, &c)| (e - lo, sign * c)).collect() }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            if i == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let a = c.abs();
            match (e, a) {
                (0, _) => out.push_str(&a.to_string()),
                (_, 1) => out.push_str(&format!("q^{e}")),
                _ => out.push_str(&format!("{a}q^{e}")),
            }
        }
        write!(f, "{out}")
    }
}

/// Strata at or above this many generators get their ranks computed on the
/// rayon pool.
const PARALLEL_STRATUM: usize = 20_000;

/// `dim H_{d,s} = dim C_{d,s} - rank d_{d,s} - rank d_{d+1,s}`.
pub fn homology(c: &BigradedComplex) -> Result<PoincarePolynomial, HomologyError> {
    c.check_d_squared()?;
    let gradings: Vec<Bigrading> = c.strata().keys().copied().collect();
    let rank_of = |g: &Bigrading| -> (Bigrading, usize) {
        let (nrows, cols) = c.boundary_matrix(*g);
        (*g, SparseMatrix::new(nrows, cols).rank())
    };
    let big = c.generator_count() >= PARALLEL_STRATUM;
    let ranks: BTreeMap<Bigrading, usize> =
        if big { gradings.par_iter().map(rank_of).collect() } else { gradings.iter().map(rank_of).collect() };
    let mut p = PoincarePolynomial::zero();
    for (g, gens) in c.strata() {
        let above = Bigrading::new(g.maslov + 1, g.alex2);
        let dim = gens.len() - ranks[g] - ranks.get(&above).copied().unwrap_or(0);
        p.add(g.maslov, g.alex2, dim as u64);
    }
    Ok(p)
}

/// Divides a tilde homology by one `W(w)` factor per plain O weight.
pub fn hat_from_tilde(p: &PoincarePolynomial, plain_o_weights: &[i64]) -> Result<PoincarePolynomial, HomologyError> {
    plain_o_weights.iter().try_fold(p.clone(), |acc, &w| acc.divide_w(w))
}

pub fn tilde_homology(wd: &WeightedDiagram) -> Result<PoincarePolynomial, HomologyError> {
    homology(&tilde_complex(wd)?)
}

pub fn hat_homology(wd: &WeightedDiagram) -> Result<PoincarePolynomial, HomologyError> {
    hat_from_tilde(&tilde_homology(wd)?, &wd.plain_o_weights())
}

/// Both homologies from a single complex build.
#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub tilde: PoincarePolynomial,
    pub hat: PoincarePolynomial,
    pub chain_euler: LaurentPoly,
    pub generators: usize,
    pub edges: usize,
}

pub fn compute_all(wd: &WeightedDiagram) -> Result<HomologyReport, HomologyError> {
    let c = tilde_complex(wd)?;
    let tilde = homology(&c)?;
    let hat = hat_from_tilde(&tilde, &wd.plain_o_weights())?;
    Ok(HomologyReport { chain_euler: c.euler_characteristic(), generators: c.generator_count(), edges: c.edge_count(), tilde, hat })
}
