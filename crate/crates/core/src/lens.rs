//! Lens spaces and the arithmetic exclusion arguments for reducible
//! surgeries on non-hyperbolic knots (ball, Klein bottle, torus, cable).
//!
//! Convention: `L(p,q)` is the result of `-p/q`-surgery on the unknot and
//! `|p|` is its multiplicity. `(p,q)` and `(-p,-q)` denote the same
//! oriented space, so constructors normalize to `p >= 0`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LensSpace {
    p: Int,
    q: Int,
}

impl LensSpace {
    pub fn new(p: Int, q: Int) -> Result<Self> {
        if !p.gcd(&q).is_one() {
            return Err(Error::NotCoprime { p, q });
        }
        let (p, q) = if p.is_negative() || (p.is_zero() && q.is_negative()) {
            (-p, -q)
        } else {
            (p, q)
        };
        Ok(LensSpace { p, q })
    }

    pub fn from_i64(p: i64, q: i64) -> Result<Self> {
        Self::new(Int::from(p), Int::from(q))
    }

    pub fn p(&self) -> &Int {
        &self.p
    }

    pub fn q(&self) -> &Int {
        &self.q
    }

    /// `|p|`; equals `p` after normalization.
    pub fn multiplicity(&self) -> Int {
        self.p.abs()
    }

    /// Same space with `q` reduced into `[0, p)`; used for display.
    pub fn reduced(&self) -> LensSpace {
        if self.p.is_zero() {
            return self.clone();
        }
        LensSpace {
            p: self.p.clone(),
            q: self.q.mod_floor(&self.p),
        }
    }

    /// The orientation reverse `L(p,-q)`.
    pub fn mirror(&self) -> LensSpace {
        LensSpace {
            p: self.p.clone(),
            q: -&self.q,
        }
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

impl FromStr for LensSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("L(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected L(p,q), got {s:?}")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected L(p,q), got {s:?}")))?;
        let p = Int::from_str(a).map_err(|_| Error::Parse(format!("bad integer {a:?}")))?;
        let q = Int::from_str(b).map_err(|_| Error::Parse(format!("bad integer {b:?}")))?;
        LensSpace::new(p, q)
    }
}

/// Homeomorphism test. Orientation-preserving: equal multiplicity and
/// `q' = q` or `q q' = 1 (mod p)`; with `allow_reversal` also `q' = -q`
/// or `q q' = -1`.
pub fn lens_equivalent(a: &LensSpace, b: &LensSpace, allow_reversal: bool) -> bool {
    if a.p != b.p {
        return false;
    }
    let p = &a.p;
    if p.is_zero() {
        // both normalized to L(0,1)
        return true;
    }
    let qa = a.q.mod_floor(p);
    let qb = b.q.mod_floor(p);
    let one = Int::one().mod_floor(p);
    let preserving = qa == qb || (&qa * &qb).mod_floor(p) == one;
    if preserving {
        return true;
    }
    if allow_reversal {
        let neg = (-&qa).mod_floor(p);
        let neg_one = (-Int::one()).mod_floor(p);
        return qb == neg || (&qa * &qb).mod_floor(p) == neg_one;
    }
    false
}

/// True iff the space contains a Klein bottle: it must be `L(4k, 2k-1)`
/// for some `k >= 1`, up to homeomorphism. Containment does not depend on
/// orientation, so mirrors are matched too.
pub fn contains_klein_bottle(a: &LensSpace) -> bool {
    let p = a.multiplicity();
    let four = Int::from(4);
    if p < four || !(&p % &four).is_zero() {
        return false;
    }
    let k = &p / &four;
    let model = LensSpace::new(p.clone(), Int::from(2) * k - 1u32).expect("gcd(4k,2k-1)=1");
    lens_equivalent(a, &model, true)
}

/// Case 3 exclusion: can a lens space of multiplicity `n` be fibred as
/// `S^2((s1,x1),(s2,x2))` so that drilling an ordinary fibre gives the two
/// requested summands? Possible iff representatives exist with
/// `+-n = s1 x2 + x1 s2`, i.e. `+-n = s1 c2 + c1 s2 (mod s1 s2)` for some
/// torque classes `c1, c2` matching the summands orientation-preservingly.
pub fn torus_case_possible(n: &Int, a: &LensSpace, b: &LensSpace) -> Result<bool> {
    let s1 = a.multiplicity();
    let s2 = b.multiplicity();
    for s in [&s1, &s2] {
        if s < &Int::from(2) {
            return Err(Error::InvalidMultiplicity(format!(
                "summand multiplicity {s} must be >= 2"
            )));
        }
    }
    if !s1.gcd(&s2).is_one() {
        return Err(Error::NotCoprime { p: s1, q: s2 });
    }
    let modulus = &s1 * &s2;
    let n_pos = n.mod_floor(&modulus);
    let n_neg = (-n).mod_floor(&modulus);
    for c1 in admissible_torques(a) {
        for c2 in admissible_torques(b) {
            let combined = (&s1 * &c2 + &c1 * &s2).mod_floor(&modulus);
            if combined == n_pos || combined == n_neg {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Torque classes `c` mod the multiplicity with `L(s,c)` equal to the
/// target, orientation preserved.
fn admissible_torques(target: &LensSpace) -> Vec<Int> {
    let s = target.multiplicity();
    let mut out = Vec::new();
    let mut c = Int::one();
    while c < s {
        if c.gcd(&s).is_one() {
            let candidate = LensSpace::new(s.clone(), c.clone()).expect("coprime");
            if lens_equivalent(&candidate, target, false) {
                out.push(c.clone());
            }
        }
        c += 1;
    }
    out
}

/// Case 4 exclusion at the strength of the divisibility argument: a cable
/// knot would force one summand order `+-s_i` to divide the other. Returns
/// false (impossible) iff for both assignments `s_i | n` holds and
/// `s_i` does not divide `s_j`.
pub fn cable_case_possible(n: &Int, s1: &Int, s2: &Int) -> Result<bool> {
    for s in [s1, s2] {
        if s < &Int::from(2) {
            return Err(Error::InvalidMultiplicity(format!(
                "summand multiplicity {s} must be >= 2"
            )));
        }
    }
    if s1 == s2 {
        return Err(Error::InvalidMultiplicity(
            "cable exclusion needs distinct summand multiplicities".into(),
        ));
    }
    let excluded_1 = (n % s1).is_zero() && !(s2 % s1).is_zero();
    let excluded_2 = (n % s2).is_zero() && !(s1 % s2).is_zero();
    Ok(!(excluded_1 && excluded_2))
}

/// Case 1: a knot contained in a ball keeps an ambient summand, so the
/// surgery is only possible when one summand is the ambient space itself.
pub fn ball_case_possible(ambient: &LensSpace, summands: &[LensSpace]) -> bool {
    summands.iter().any(|s| lens_equivalent(s, ambient, false))
}
