//! Heegaard Floer correction terms of lens spaces and the even-difference
//! test for integral surgeries.
//!
//! The d-invariants of `L(p,q)` are computed by the recursion
//! `d(1,0,0) = 0`,
//! `d(p,q,i) = (2i + 1 - p - q)^2 / (4pq) - 1/4 - d(q, p mod q, i mod q)`
//! over `0 <= i < p`, in exact rationals. The recursion fixes one
//! orientation of `L(p,q)`; the reversed orientation is the negated
//! multiset, available as [`DVector::negated`]. Every statement tested
//! downstream is symmetric in the two orientations.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::{Int, Rational};

/// A multiset of d-invariants, one per spin-c structure, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DVector {
    values: Vec<Rational>,
}

impl DVector {
    pub fn from_values(mut values: Vec<Rational>) -> Self {
        values.sort();
        DVector { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The multiset of the orientation-reversed space.
    pub fn negated(&self) -> DVector {
        DVector::from_values(self.values.iter().map(|v| -v).collect())
    }
}

impl fmt::Display for DVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for DVector {
    type Err = Error;

    /// Parses a comma-separated list of exact fractions, e.g.
    /// `0,-2/5,-2/5,-8/5,-8/5`.
    fn from_str(s: &str) -> Result<Self> {
        let mut values = Vec::new();
        for tok in s.split(',') {
            let tok: String = tok.chars().filter(|c| !c.is_whitespace()).collect();
            if tok.is_empty() {
                return Err(Error::Parse("empty fraction".into()));
            }
            let r = match tok.split_once('/') {
                Some((a, b)) => {
                    let num = Int::from_str(a)
                        .map_err(|_| Error::Parse(format!("bad fraction {tok:?}")))?;
                    let den = Int::from_str(b)
                        .map_err(|_| Error::Parse(format!("bad fraction {tok:?}")))?;
                    if den.is_zero() {
                        return Err(Error::Parse(format!("zero denominator in {tok:?}")));
                    }
                    Rational::new(num, den)
                }
                None => Rational::from_integer(
                    Int::from_str(&tok)
                        .map_err(|_| Error::Parse(format!("bad fraction {tok:?}")))?,
                ),
            };
            values.push(r);
        }
        Ok(DVector::from_values(values))
    }
}

/// d-invariants of `L(p,q)` for `p >= 1`, `gcd(p,q) = 1`; `q` is reduced
/// mod `p` first.
pub fn lens_d_invariants(p: &Int, q: &Int) -> Result<DVector> {
    if p < &Int::one() {
        return Err(Error::OutOfRange(format!("p = {p} must be >= 1")));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::NotCoprime {
            p: p.clone(),
            q: q.clone(),
        });
    }
    let count = p
        .to_usize()
        .filter(|&c| c <= 1_000_000)
        .ok_or_else(|| Error::OutOfRange(format!("p = {p} has too many spin-c structures")))?;
    let q = q.mod_floor(p);
    let mut values = Vec::with_capacity(count);
    let mut i = Int::zero();
    while &i < p {
        values.push(d_rec(p, &q, &i));
        i += 1;
    }
    Ok(DVector::from_values(values))
}

fn d_rec(p: &Int, q: &Int, i: &Int) -> Rational {
    if p.is_one() {
        return Rational::zero();
    }
    let num = Int::from(2) * i + 1u32 - p - q;
    let head = Rational::new(&num * &num, Int::from(4) * p * q);
    let quarter = Rational::new(Int::one(), Int::from(4));
    head - quarter - d_rec(q, &p.mod_floor(q), &i.mod_floor(q))
}

/// True iff the two multisets can be paired so that every difference is an
/// even integer (bipartite perfect matching on the compatibility graph).
pub fn even_difference_matching(a: &DVector, b: &DVector) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    let n = a.len();
    let adj: Vec<Vec<usize>> = a
        .values()
        .iter()
        .map(|x| {
            b.values()
                .iter()
                .enumerate()
                .filter(|(_, y)| is_even_integer(&(x - *y)))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    // Kuhn's augmenting paths
    let mut matched_to: Vec<Option<usize>> = vec![None; n];
    fn try_augment(
        v: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        matched_to: &mut [Option<usize>],
    ) -> bool {
        for &u in &adj[v] {
            if seen[u] {
                continue;
            }
            seen[u] = true;
            if matched_to[u].is_none() || try_augment(matched_to[u].unwrap(), adj, seen, matched_to)
            {
                matched_to[u] = Some(v);
                return true;
            }
        }
        false
    }
    let mut size = 0;
    for v in 0..n {
        let mut seen = vec![false; n];
        if try_augment(v, &adj, &mut seen, &mut matched_to) {
            size += 1;
        }
    }
    Ok(size == n)
}

fn is_even_integer(r: &Rational) -> bool {
    r.is_integer() && r.numer().is_even()
}

/// The even-difference surgery test: `d` obstructs being the result of an
/// integral `n`-surgery on a knot iff it matches neither `L(n,1)` nor its
/// reverse.
pub fn integral_surgery_obstruction(d: &DVector, n: &Int) -> Result<bool> {
    let model = lens_d_invariants(n, &Int::one())?;
    if d.len() != model.len() {
        return Err(Error::SizeMismatch(d.len(), model.len()));
    }
    Ok(!even_difference_matching(d, &model)? && !even_difference_matching(d, &model.negated())?)
}
