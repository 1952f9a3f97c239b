//! Small Seifert fibred spaces over the sphere.
//!
//! A form is an ordered list of fibre pairs `(p, x)`: multiplicity `p >= 1`
//! and torque `x` (only its class mod `p` matters to the space). Three
//! fibres is the generic case; a fourth appears after twisting along an
//! ordinary fibre. The canonical form sorts the exceptional fibres, reduces
//! torques into `(0, p)` and collects the integer surplus in a background
//! coefficient `e0`, which makes census deduplication well defined.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::smith_invariant_factors;
use crate::error::{Error, Result};
use crate::Int;

/// An oriented Seifert fibred space over `S^2` given by its fibre pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeifertForm {
    fibres: Vec<(Int, Int)>,
}

impl SeifertForm {
    /// Validates and wraps a list of fibre pairs.
    ///
    /// A pair `(p, x)` needs `p >= 1`, and `gcd(p, x) = 1` whenever `p >= 2`
    /// (otherwise it is not a Seifert invariant). At least three fibres.
    pub fn new(fibres: Vec<(Int, Int)>) -> Result<Self> {
        if fibres.len() < 3 {
            return Err(Error::TooFewFibres(fibres.len()));
        }
        for (p, x) in &fibres {
            if p < &Int::one() {
                return Err(Error::InvalidFibre {
                    p: p.clone(),
                    x: x.clone(),
                    reason: "multiplicity must be >= 1",
                });
            }
            if p > &Int::one() && !p.gcd(x).is_one() {
                return Err(Error::InvalidFibre {
                    p: p.clone(),
                    x: x.clone(),
                    reason: "multiplicity and torque must be coprime",
                });
            }
        }
        Ok(SeifertForm { fibres })
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(p, x)| (Int::from(p), Int::from(x)))
                .collect(),
        )
    }

    pub fn fibres(&self) -> &[(Int, Int)] {
        &self.fibres
    }

    pub fn fibre_count(&self) -> usize {
        self.fibres.len()
    }

    /// The fibre at 1-based position `index`.
    pub fn fibre(&self, index: usize) -> Result<&(Int, Int)> {
        if index == 0 || index > self.fibres.len() {
            return Err(Error::FibreIndex {
                index,
                count: self.fibres.len(),
            });
        }
        Ok(&self.fibres[index - 1])
    }

    /// `H = sum_i x_i * prod_{j != i} p_j`; for three fibres this is
    /// `p1 p2 x3 + p1 p3 x2 + p2 p3 x1`. `|H|` is the order of the first
    /// homology group, with 0 meaning infinite.
    pub fn h_invariant(&self) -> Int {
        let mut h = Int::zero();
        for i in 0..self.fibres.len() {
            let mut term = self.fibres[i].1.clone();
            for (j, (p, _)) in self.fibres.iter().enumerate() {
                if j != i {
                    term *= p;
                }
            }
            h += term;
        }
        h
    }

    /// Product of all multiplicities.
    pub fn multiplicity_product(&self) -> Int {
        self.fibres.iter().map(|(p, _)| p).product()
    }

    /// The relation matrix of the first homology group: one row
    /// `p_i g_i + x_i h = 0` per fibre plus the row `sum_i g_i = 0`.
    pub fn relation_matrix(&self) -> Vec<Vec<Int>> {
        let n = self.fibres.len();
        let mut rows = Vec::with_capacity(n + 1);
        for (i, (p, x)) in self.fibres.iter().enumerate() {
            let mut row = vec![Int::zero(); n + 1];
            row[i] = p.clone();
            row[n] = x.clone();
            rows.push(row);
        }
        let mut last = vec![Int::one(); n + 1];
        last[n] = Int::zero();
        rows.push(last);
        rows
    }

    /// Invariant factors of the first homology group (1-factors dropped,
    /// 0 for an infinite factor).
    pub fn h1_invariant_factors(&self) -> Vec<Int> {
        smith_invariant_factors(&self.relation_matrix())
    }

    /// True iff the first homology group is generated by one element.
    pub fn h1_is_cyclic(&self) -> bool {
        self.h1_invariant_factors().len() <= 1
    }

    /// Number of fibres whose torque is `+-1` modulo the multiplicity.
    pub fn torque_profile(&self) -> usize {
        self.fibres
            .iter()
            .filter(|(p, x)| (x - 1u32).mod_floor(p).is_zero() || (x + 1u32).mod_floor(p).is_zero())
            .count()
    }

    /// The same space with reversed orientation: every torque negated.
    pub fn reversed(&self) -> SeifertForm {
        SeifertForm {
            fibres: self.fibres.iter().map(|(p, x)| (p.clone(), -x)).collect(),
        }
    }

    /// Reduce to the canonical form: torques into `(0, p)`, integer fibres
    /// and the reduction surplus absorbed into `e0`, exceptional fibres
    /// sorted. The Euler sum `sum x_i/p_i` (equivalently H) is preserved.
    pub fn canonicalize(&self) -> CanonicalSeifertForm {
        let mut exceptional: Vec<(Int, Int)> = Vec::new();
        let mut e0 = Int::zero();
        for (p, x) in &self.fibres {
            if p.is_one() {
                e0 += x;
            } else {
                let beta = x.mod_floor(p);
                e0 += (x - &beta) / p;
                exceptional.push((p.clone(), beta));
            }
        }
        exceptional.sort();
        CanonicalSeifertForm { exceptional, e0 }
    }
}

impl fmt::Display for SeifertForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, x) in &self.fibres {
            write!(f, "({p},{x})")?;
        }
        Ok(())
    }
}

impl FromStr for SeifertForm {
    type Err = Error;

    /// Parses `(p1,x1)(p2,x2)(p3,x3)` with optional whitespace; three or
    /// four fibre pairs are accepted.
    fn from_str(s: &str) -> Result<Self> {
        let pairs = parse_pair_list(s)?;
        if pairs.len() < 3 || pairs.len() > 4 {
            return Err(Error::Parse(format!(
                "expected 3 or 4 fibre pairs, found {}",
                pairs.len()
            )));
        }
        SeifertForm::new(pairs)
    }
}

pub(crate) fn parse_pair_list(s: &str) -> Result<Vec<(Int, Int)>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty form text".into()));
    }
    let mut pairs = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let inner_end = rest
            .find(')')
            .ok_or_else(|| Error::Parse(format!("missing ')' in {s:?}")))?;
        if !rest.starts_with('(') {
            return Err(Error::Parse(format!("expected '(' in {s:?}")));
        }
        let inner = &rest[1..inner_end];
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected 'p,x' in {s:?}")))?;
        let p = Int::from_str(a).map_err(|_| Error::Parse(format!("bad integer {a:?}")))?;
        let x = Int::from_str(b).map_err(|_| Error::Parse(format!("bad integer {b:?}")))?;
        pairs.push((p, x));
        rest = &rest[inner_end + 1..];
    }
    Ok(pairs)
}

/// Canonical representative of an oriented Seifert form: sorted exceptional
/// pairs `(p, b)` with `0 < b < p`, plus the background integer `e0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalSeifertForm {
    exceptional: Vec<(Int, Int)>,
    e0: Int,
}

impl CanonicalSeifertForm {
    pub fn exceptional(&self) -> &[(Int, Int)] {
        &self.exceptional
    }

    pub fn e0(&self) -> &Int {
        &self.e0
    }

    /// Three exceptional fibres: a small Seifert fibred space.
    pub fn is_small(&self) -> bool {
        self.exceptional.len() == 3
    }

    /// A representative `SeifertForm`: `e0` folded into the last exceptional
    /// torque, padded with trivial `(1,0)` fibres up to three if needed.
    pub fn to_form(&self) -> SeifertForm {
        let mut fibres = self.exceptional.clone();
        match fibres.last_mut() {
            Some((p, x)) => *x += &self.e0 * &*p,
            None => fibres.push((Int::one(), self.e0.clone())),
        }
        while fibres.len() < 3 {
            fibres.push((Int::one(), Int::zero()));
        }
        SeifertForm { fibres }
    }

    /// Canonical form of the orientation-reversed space.
    pub fn mirror(&self) -> CanonicalSeifertForm {
        let mut exceptional: Vec<(Int, Int)> = self
            .exceptional
            .iter()
            .map(|(p, b)| (p.clone(), p - b))
            .collect();
        exceptional.sort();
        let e0 = -&self.e0 - Int::from(self.exceptional.len());
        CanonicalSeifertForm { exceptional, e0 }
    }

    pub(crate) fn from_parts(exceptional: Vec<(Int, Int)>, e0: Int) -> Self {
        CanonicalSeifertForm { exceptional, e0 }
    }

    /// Torque profile of any representative (the class of each torque mod
    /// its multiplicity is exactly the canonical `b`).
    pub fn torque_profile(&self) -> usize {
        self.exceptional
            .iter()
            .filter(|(p, b)| b.is_one() || *b == p - 1u32)
            .count()
    }
}

impl fmt::Display for CanonicalSeifertForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, b) in &self.exceptional {
            write!(f, "({p},{b})")?;
        }
        write!(f, " e0={}", self.e0)
    }
}

impl FromStr for CanonicalSeifertForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (pairs_part, e0_part) = s
            .split_once("e0=")
            .ok_or_else(|| Error::Parse(format!("missing 'e0=' in {s:?}")))?;
        let exceptional = parse_pair_list(pairs_part)?;
        for (p, b) in &exceptional {
            if p < &Int::from(2) || b <= &Int::zero() || b >= p {
                return Err(Error::Parse(format!(
                    "({p},{b}) is not a canonical exceptional pair"
                )));
            }
        }
        let e0 = Int::from_str(e0_part.trim())
            .map_err(|_| Error::Parse(format!("bad integer {e0_part:?}")))?;
        let mut sorted = exceptional.clone();
        sorted.sort();
        if sorted != exceptional {
            return Err(Error::Parse("exceptional pairs must be sorted".into()));
        }
        Ok(CanonicalSeifertForm { exceptional, e0 })
    }
}

// Forms serialize as their textual grammar, which keeps the JSON schema
// independent of integer width and diff-friendly.
impl Serialize for SeifertForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SeifertForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(D::Error::custom)
    }
}

impl Serialize for CanonicalSeifertForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CanonicalSeifertForm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(D::Error::custom)
    }
}
