//! The seiferter arithmetic: candidate residues of the quadratic-residue
//! obstruction, the linking-number equations, twisting along a fibre, and
//! the drilling construction producing knots in lens spaces with reducible
//! surgeries.
//!
//! With `H != 0`, `q_i` an inverse of `x_i` mod `p_i`, `d = sign(H)` and
//! `e` the sign of the surgery slope, a seiferter at the exceptional fibre
//! `i` forces `l^2 = e d (q_i H - p_j p_k) / p_i`, hence
//! `q_i = (e d p_i l^2 + p_j p_k) / H`; at an ordinary fibre it forces
//! `n = (e d l^2 + p1 p2 p3) / H`. A space obtained by such a surgery
//! therefore has one of
//! `+-(q_i H - p_j p_k)/p_i` (i = 1,2,3) or `+-p1 p2 p3`
//! a quadratic residue mod `H`. With `H = 0` the conditions degenerate to
//! `p_j p_k / p_i` or `p1 p2 p3` being a perfect square.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_perfect_square, is_quadratic_residue, mod_inverse};
use crate::error::{Error, Result};
use crate::lens::LensSpace;
use crate::sfs::{CanonicalSeifertForm, SeifertForm};
use crate::{Int, Rational};

/// Where the seiferter sits: an exceptional fibre (1-based index) or an
/// ordinary fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fibre {
    Exceptional(usize),
    Ordinary,
}

impl fmt::Display for Fibre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fibre::Exceptional(i) => write!(f, "{i}"),
            Fibre::Ordinary => write!(f, "ordinary"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FibreRepr {
    Index(usize),
    Name(String),
}

impl Serialize for Fibre {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Fibre::Exceptional(i) => FibreRepr::Index(*i).serialize(serializer),
            Fibre::Ordinary => FibreRepr::Name("ordinary".into()).serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Fibre {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match FibreRepr::deserialize(deserializer)? {
            FibreRepr::Index(i) if i >= 1 => Ok(Fibre::Exceptional(i)),
            FibreRepr::Index(i) => Err(D::Error::custom(format!("fibre index {i} out of range"))),
            FibreRepr::Name(n) if n == "ordinary" => Ok(Fibre::Ordinary),
            FibreRepr::Name(n) => Err(D::Error::custom(format!("unknown fibre label {n:?}"))),
        }
    }
}

/// Sign of the surgery slope, or of a candidate residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn to_int(self) -> Int {
        match self {
            Sign::Plus => Int::one(),
            Sign::Minus => -Int::one(),
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("expected '+' or '-', got {s:?}"))),
        }
    }
}

/// One candidate of the obstruction test. With `H != 0` the value is a
/// residue class in `[0, |H|)`; with `H = 0` it is the exact rational
/// whose integrality and squareness are tested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub label: Fibre,
    pub sign: Sign,
    pub value: CandidateValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateValue {
    Residue(Int),
    Ratio(Rational),
}

impl fmt::Display for CandidateValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateValue::Residue(v) => write!(f, "{v}"),
            CandidateValue::Ratio(v) => write!(f, "{v}"),
        }
    }
}

/// Outcome of the obstruction test on one space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub form: SeifertForm,
    pub canonical: CanonicalSeifertForm,
    pub h: Int,
    pub candidates: Vec<Candidate>,
    pub residue_hits: Vec<Candidate>,
    pub obstructed: bool,
}

/// Runs the obstruction test on the canonical form of `s`.
///
/// Requires three exceptional fibres after canonicalization. Candidate
/// residues are reported with the least non-negative inverse of each
/// torque; the report is independent of that choice.
pub fn obstruction_check(s: &SeifertForm) -> Result<ObstructionReport> {
    let canonical = s.canonicalize();
    if !canonical.is_small() {
        return Err(Error::NotSmall(canonical.exceptional().len()));
    }
    let rep = canonical.to_form();
    let h = rep.h_invariant();
    let p_all = rep.multiplicity_product();

    let mut candidates = Vec::with_capacity(8);
    if !h.is_zero() {
        let h_abs = h.abs();
        for i in 0..3 {
            let c = exceptional_candidate_base(&rep, i, &h);
            for sign in [Sign::Plus, Sign::Minus] {
                candidates.push(Candidate {
                    label: Fibre::Exceptional(i + 1),
                    sign,
                    value: CandidateValue::Residue((sign.to_int() * &c).mod_floor(&h_abs)),
                });
            }
        }
        for sign in [Sign::Plus, Sign::Minus] {
            candidates.push(Candidate {
                label: Fibre::Ordinary,
                sign,
                value: CandidateValue::Residue((sign.to_int() * &p_all).mod_floor(&h_abs)),
            });
        }
        let residue_hits: Vec<Candidate> = candidates
            .iter()
            .filter(|c| match &c.value {
                CandidateValue::Residue(v) => is_quadratic_residue(v, &h_abs),
                CandidateValue::Ratio(_) => unreachable!(),
            })
            .cloned()
            .collect();
        let obstructed = residue_hits.is_empty();
        Ok(ObstructionReport {
            form: s.clone(),
            canonical,
            h,
            candidates,
            residue_hits,
            obstructed,
        })
    } else {
        for i in 0..3 {
            let (p, _) = &rep.fibres()[i];
            let ratio = Rational::new(&p_all / p, p.clone());
            candidates.push(Candidate {
                label: Fibre::Exceptional(i + 1),
                sign: Sign::Plus,
                value: CandidateValue::Ratio(ratio),
            });
        }
        candidates.push(Candidate {
            label: Fibre::Ordinary,
            sign: Sign::Plus,
            value: CandidateValue::Ratio(Rational::from_integer(p_all)),
        });
        let residue_hits: Vec<Candidate> = candidates
            .iter()
            .filter(|c| match &c.value {
                CandidateValue::Ratio(r) => r.is_integer() && is_perfect_square(r.numer()),
                CandidateValue::Residue(_) => unreachable!(),
            })
            .cloned()
            .collect();
        let obstructed = residue_hits.is_empty();
        Ok(ObstructionReport {
            form: s.clone(),
            canonical,
            h,
            candidates,
            residue_hits,
            obstructed,
        })
    }
}

/// `(q_i H - p_j p_k) / p_i` for the fibre at 0-based position `i`, using
/// the least non-negative inverse `q_i`.
fn exceptional_candidate_base(rep: &SeifertForm, i: usize, h: &Int) -> Int {
    let fibres = rep.fibres();
    let (p, x) = &fibres[i];
    let q = mod_inverse(x, p).expect("torque coprime to multiplicity");
    let others: Int = fibres
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, (pj, _))| pj)
        .product();
    let num = q * h - others;
    let (quot, rem) = num.div_rem(p);
    assert!(rem.is_zero(), "q_i H - p_j p_k must be divisible by p_i");
    quot
}

/// A solution of the linking equation for one fibre choice and slope sign.
///
/// For an exceptional fibre `i` with `H != 0`:
/// `q = (e d p_i l^2 + p_j p_k) / H` with `q x_i = 1 (mod p_i)`; for an
/// ordinary fibre: `n = (e d l^2 + p1 p2 p3) / H`. `m = e d H` is the
/// surgery slope (0 carries no information when `H = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingSolution {
    pub fibre: Fibre,
    pub l: Int,
    pub q_or_n: Int,
    pub slope_sign: Sign,
    pub m: Int,
}

/// All solutions with `0 <= l <= l_max` for the given fibre choice and
/// slope sign; empty when unsolvable. With `H = 0` the equations pin a
/// unique `l > 0` and ignore the slope sign.
pub fn solve_linking(
    s: &SeifertForm,
    fibre: Fibre,
    slope_sign: Sign,
    l_max: &Int,
) -> Result<Vec<LinkingSolution>> {
    check_three_fibres(s, fibre)?;
    let mut out = Vec::new();
    let mut l = Int::zero();
    while &l <= l_max {
        if let Some(sol) = solve_linking_at(s, fibre, slope_sign, &l)? {
            out.push(sol);
        }
        l += 1;
    }
    Ok(out)
}

/// The solution with linking number exactly `l`, if the equations admit one.
pub fn solve_linking_at(
    s: &SeifertForm,
    fibre: Fibre,
    slope_sign: Sign,
    l: &Int,
) -> Result<Option<LinkingSolution>> {
    check_three_fibres(s, fibre)?;
    if l.is_negative() {
        return Ok(None);
    }
    let h = s.h_invariant();
    let p_all = s.multiplicity_product();
    let l_sq = l * l;

    if h.is_zero() {
        // (exch0)/(ordh0): l^2 is pinned and l = 0 is impossible
        let target = match fibre {
            Fibre::Exceptional(i) => {
                let (p, _) = s.fibre(i)?;
                let others = &p_all / p;
                if !(&others % p).is_zero() {
                    return Ok(None);
                }
                others / p
            }
            Fibre::Ordinary => p_all.clone(),
        };
        if l.is_zero() || l_sq != target {
            return Ok(None);
        }
        let q_or_n = match fibre {
            Fibre::Exceptional(i) => {
                let (p, x) = s.fibre(i)?;
                mod_inverse(x, p).expect("torque coprime to multiplicity")
            }
            Fibre::Ordinary => Int::zero(),
        };
        return Ok(Some(LinkingSolution {
            fibre,
            l: l.clone(),
            q_or_n,
            slope_sign,
            m: Int::zero(),
        }));
    }

    let ed = slope_sign.to_int() * h.signum();
    let m = slope_sign.to_int() * h.abs();
    match fibre {
        Fibre::Exceptional(i) => {
            let (p, x) = s.fibre(i)?;
            let num = &ed * p * &l_sq + &p_all / p;
            let (q, rem) = num.div_rem(&h);
            if !rem.is_zero() {
                return Ok(None);
            }
            if (&q * x).mod_floor(p) != Int::one().mod_floor(p) {
                return Ok(None);
            }
            Ok(Some(LinkingSolution {
                fibre,
                l: l.clone(),
                q_or_n: q,
                slope_sign,
                m,
            }))
        }
        Fibre::Ordinary => {
            let num = &ed * &l_sq + &p_all;
            let (n, rem) = num.div_rem(&h);
            if !rem.is_zero() {
                return Ok(None);
            }
            Ok(Some(LinkingSolution {
                fibre,
                l: l.clone(),
                q_or_n: n,
                slope_sign,
                m,
            }))
        }
    }
}

fn check_three_fibres(s: &SeifertForm, fibre: Fibre) -> Result<()> {
    if s.fibre_count() != 3 {
        return Err(Error::NotSmall(s.fibre_count()));
    }
    if let Fibre::Exceptional(i) = fibre {
        s.fibre(i)?;
    }
    Ok(())
}

/// Twists `t` times along a seiferter at the exceptional fibre `i` whose
/// neighbourhood fibres are `(p_i, q)`-curves: replaces `(p_i, x_i)` by
/// `(t q + p_i, t (q x_i - 1)/p_i + x_i)`.
pub fn twist(s: &SeifertForm, fibre_index: usize, q: &Int, t: &Int) -> Result<SeifertForm> {
    let (p, x) = s.fibre(fibre_index)?.clone();
    if (q * &x).mod_floor(&p) != Int::one().mod_floor(&p) {
        return Err(Error::TwistInverse { p, x, q: q.clone() });
    }
    let new_p = t * q + &p;
    if new_p <= Int::zero() {
        return Err(Error::TwistMultiplicity(new_p));
    }
    let new_x = t * ((q * &x - 1u32) / &p) + &x;
    let mut fibres = s.fibres().to_vec();
    fibres[fibre_index - 1] = (new_p, new_x);
    SeifertForm::new(fibres)
}

/// Twists `t` times along a seiferter at an ordinary fibre whose
/// neighbouring ordinary fibres are `(1, n)`-curves: appends `(t n + 1, -t)`.
pub fn twist_ordinary(s: &SeifertForm, n: &Int, t: &Int) -> Result<SeifertForm> {
    if s.fibre_count() != 3 {
        return Err(Error::NotSmall(s.fibre_count()));
    }
    let new_p = t * n + 1u32;
    if new_p <= Int::zero() {
        return Err(Error::TwistMultiplicity(new_p));
    }
    let mut fibres = s.fibres().to_vec();
    fibres.push((new_p, -t));
    SeifertForm::new(fibres)
}

/// Outcome of drilling the exceptional fibre `fibre_index` out of `source`
/// and refilling along the ordinary-fibre slope: a knot in `ambient` with
/// a surgery producing the connected sum of the two `summands`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrillResult {
    pub ambient: LensSpace,
    pub summands: (LensSpace, LensSpace),
    pub source: SeifertForm,
    pub fibre_index: usize,
    pub linking: Int,
}

/// The drilling construction. The fibres on the complementary torus are
/// `(q, p_i)`-curves, so the ambient space is `L(q, p_i)` for the `q`
/// solved from the linking equation; the summands are the two remaining
/// fibres read as lens spaces.
pub fn drill(
    s: &SeifertForm,
    fibre_index: usize,
    l: &Int,
    slope_sign: Sign,
) -> Result<DrillResult> {
    let sol = solve_linking_at(s, Fibre::Exceptional(fibre_index), slope_sign, l)?
        .ok_or(Error::UnsolvableLinking)?;
    let (p, _) = s.fibre(fibre_index)?;
    let ambient = LensSpace::new(sol.q_or_n.clone(), p.clone())?;
    let rest: Vec<&(Int, Int)> = s
        .fibres()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != fibre_index - 1)
        .map(|(_, f)| f)
        .collect();
    let summands = (
        LensSpace::new(rest[0].0.clone(), rest[0].1.clone())?,
        LensSpace::new(rest[1].0.clone(), rest[1].1.clone())?,
    );
    Ok(DrillResult {
        ambient,
        summands,
        source: s.clone(),
        fibre_index,
        linking: l.clone(),
    })
}

// --- serde for reports: integers and forms as decimal strings, so the JSON
// schema is exact and stable regardless of magnitude ---

#[derive(Serialize, Deserialize)]
struct CandidateRepr {
    label: Fibre,
    sign: Sign,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct ReportRepr {
    form: String,
    canonical: String,
    h: String,
    candidates: Vec<CandidateRepr>,
    residue_hits: Vec<CandidateRepr>,
    obstructed: bool,
}

impl Serialize for ObstructionReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let conv = |c: &Candidate| CandidateRepr {
            label: c.label,
            sign: c.sign,
            value: c.value.to_string(),
        };
        ReportRepr {
            form: self.form.to_string(),
            canonical: self.canonical.to_string(),
            h: self.h.to_string(),
            candidates: self.candidates.iter().map(conv).collect(),
            residue_hits: self.residue_hits.iter().map(conv).collect(),
            obstructed: self.obstructed,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ObstructionReport {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ReportRepr::deserialize(deserializer)?;
        let h: Int = repr.h.parse().map_err(D::Error::custom)?;
        let conv = |c: &CandidateRepr| -> std::result::Result<Candidate, D::Error> {
            let value = if h.is_zero() {
                CandidateValue::Ratio(parse_rational(&c.value).map_err(D::Error::custom)?)
            } else {
                CandidateValue::Residue(c.value.parse().map_err(D::Error::custom)?)
            };
            Ok(Candidate {
                label: c.label,
                sign: c.sign,
                value,
            })
        };
        let candidates = repr
            .candidates
            .iter()
            .map(conv)
            .collect::<std::result::Result<_, _>>()?;
        let residue_hits = repr
            .residue_hits
            .iter()
            .map(conv)
            .collect::<std::result::Result<_, _>>()?;
        Ok(ObstructionReport {
            form: repr.form.parse().map_err(D::Error::custom)?,
            canonical: repr.canonical.parse().map_err(D::Error::custom)?,
            h,
            candidates,
            residue_hits,
            obstructed: repr.obstructed,
        })
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let num: Int = a
                .parse()
                .map_err(|_| Error::Parse(format!("bad fraction {s:?}")))?;
            let den: Int = b
                .parse()
                .map_err(|_| Error::Parse(format!("bad fraction {s:?}")))?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(num, den))
        }
        None => {
            Ok(Rational::from_integer(s.parse().map_err(|_| {
                Error::Parse(format!("bad fraction {s:?}"))
            })?))
        }
    }
}
