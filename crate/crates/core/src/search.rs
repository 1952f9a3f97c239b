//! Census enumeration: every canonical small Seifert form inside the
//! configured bounds, exactly once, in lexicographic order, with the
//! obstruction evaluated on each.
//!
//! The enumeration universe is the set of canonical forms
//! `(p1,b1)(p2,b2)(p3,b3) e0` with `2 <= p_i <= max_multiplicity`,
//! `0 < b_i < p_i` coprime, pairs sorted, and `e0` ranging over the window
//! allowed by the `|H|` bound (or an explicit `|e0|` bound). Work is
//! partitioned by the leading pair; aggregation is an ordered reduce, so
//! results are identical for any worker count.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::mod_inverse;
use crate::error::{Error, Result};
use crate::seiferter::{obstruction_check, ObstructionReport};
use crate::sfs::CanonicalSeifertForm;
use crate::Int;

/// Which torque profiles to keep, in terms of the number of fibres with
/// torque `+-1` modulo their multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorqueFilter {
    Any,
    NoPm1,
    AtMostOnePm1,
}

impl TorqueFilter {
    fn accepts(self, profile: usize) -> bool {
        match self {
            TorqueFilter::Any => true,
            TorqueFilter::NoPm1 => profile == 0,
            TorqueFilter::AtMostOnePm1 => profile <= 1,
        }
    }
}

impl std::str::FromStr for TorqueFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(TorqueFilter::Any),
            "no_pm1" | "no-pm1" => Ok(TorqueFilter::NoPm1),
            "at_most_one_pm1" | "at-most-one-pm1" => Ok(TorqueFilter::AtMostOnePm1),
            _ => Err(Error::Parse(format!("unknown torque filter {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Bound on each multiplicity of the canonical form (>= 2).
    pub max_multiplicity: u32,
    /// Skip spaces with `|H|` above this bound.
    pub max_abs_h: Option<u64>,
    /// Skip spaces with `|e0|` above this bound. At least one of the two
    /// bounds must be set or the universe is infinite.
    pub max_abs_e0: Option<u64>,
    pub torque_filter: TorqueFilter,
    pub require_cyclic: bool,
    pub merge_mirrors: bool,
    pub worker_count: usize,
}

impl SearchConfig {
    pub fn new(max_multiplicity: u32, max_abs_h: u64) -> Self {
        SearchConfig {
            max_multiplicity,
            max_abs_h: Some(max_abs_h),
            max_abs_e0: None,
            torque_filter: TorqueFilter::Any,
            require_cyclic: true,
            merge_mirrors: false,
            worker_count: 1,
        }
    }

    /// The configuration of the census shipped with the repository.
    pub fn default_census() -> Self {
        SearchConfig::new(12, 100)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_multiplicity < 2 {
            return Err(Error::InvalidConfig(
                "max_multiplicity must be >= 2 (no small Seifert form otherwise)".into(),
            ));
        }
        if self.worker_count < 1 {
            return Err(Error::InvalidConfig("worker_count must be >= 1".into()));
        }
        if self.max_abs_h.is_none() && self.max_abs_e0.is_none() {
            return Err(Error::InvalidConfig(
                "unbounded request: set max_abs_h or max_abs_e0".into(),
            ));
        }
        Ok(())
    }
}

/// All coprime pairs `(p, b)` with `2 <= p <= max_p`, `0 < b < p`, sorted.
fn coprime_pairs(max_p: u32) -> Vec<(Int, Int)> {
    let mut pairs = Vec::new();
    for p in 2..=max_p {
        for b in 1..p {
            if Int::from(p).gcd(&Int::from(b)).is_one() {
                pairs.push((Int::from(p), Int::from(b)));
            }
        }
    }
    pairs
}

/// Every canonical form whose leading exceptional pair is `pairs[lead]`,
/// in lexicographic order.
fn block_forms(
    config: &SearchConfig,
    pairs: &[(Int, Int)],
    lead: usize,
) -> Vec<CanonicalSeifertForm> {
    let mut out = Vec::new();
    let e0_cap = config.max_abs_e0.map(Int::from);
    let h_cap = config.max_abs_h.map(Int::from);
    for j in lead..pairs.len() {
        for k in j..pairs.len() {
            let triple = [&pairs[lead], &pairs[j], &pairs[k]];
            let p_all: Int = triple.iter().map(|(p, _)| p).product();
            // H(e0) = base + e0 * p1 p2 p3
            let base: Int = (0..3)
                .map(|i| {
                    let (p, _) = triple[i];
                    (&p_all / p) * &triple[i].1
                })
                .sum();

            let (mut lo, mut hi) = match &h_cap {
                Some(cap) => (
                    ceil_div(&(-cap - &base), &p_all),
                    (cap - &base).div_floor(&p_all),
                ),
                None => {
                    let cap = e0_cap.as_ref().expect("validated config");
                    (-cap.clone(), cap.clone())
                }
            };
            if let Some(cap) = &e0_cap {
                lo = lo.max(-cap.clone());
                hi = hi.min(cap.clone());
            }

            let profile = triple
                .iter()
                .filter(|(p, b)| b.is_one() || *b == p - 1u32)
                .count();
            if !config.torque_filter.accepts(profile) {
                continue;
            }

            let mut e0 = lo;
            while e0 <= hi {
                let canonical = CanonicalSeifertForm::from_parts(
                    triple
                        .iter()
                        .map(|&(p, b)| (p.clone(), b.clone()))
                        .collect(),
                    e0.clone(),
                );
                e0 += 1;
                if config.merge_mirrors {
                    let mirror = canonical.mirror();
                    let mirror_in_universe = e0_cap
                        .as_ref()
                        .map(|cap| mirror.e0().abs() <= *cap)
                        .unwrap_or(true);
                    if mirror_in_universe && mirror < canonical {
                        continue;
                    }
                }
                if config.require_cyclic && !canonical.to_form().h1_is_cyclic() {
                    continue;
                }
                out.push(canonical);
            }
        }
    }
    out
}

fn ceil_div(a: &Int, b: &Int) -> Int {
    (a + b - 1u32).div_floor(b)
}

/// The census universe for `config`, exactly once per space, in
/// lexicographic order. Streams block by block.
pub fn enumerate(config: &SearchConfig) -> Result<impl Iterator<Item = CanonicalSeifertForm>> {
    config.validate()?;
    let pairs = coprime_pairs(config.max_multiplicity);
    let config = config.clone();
    let nblocks = pairs.len();
    let mut block = 0usize;
    let mut buffer: std::vec::IntoIter<CanonicalSeifertForm> = Vec::new().into_iter();
    Ok(std::iter::from_fn(move || loop {
        if let Some(next) = buffer.next() {
            return Some(next);
        }
        if block >= nblocks {
            return None;
        }
        buffer = block_forms(&config, &pairs, block).into_iter();
        block += 1;
    }))
}

/// One enumerated space with its obstruction report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub canonical: CanonicalSeifertForm,
    pub report: ObstructionReport,
}

/// Aggregate result of a census run. Counts do not depend on the worker
/// count; `wall_time` obviously does.
#[derive(Debug, Clone)]
pub struct Census {
    pub config: SearchConfig,
    pub total_examined: u64,
    pub total_obstructed: u64,
    pub obstructed: Vec<CensusRecord>,
    pub wall_time: Duration,
}

impl Census {
    /// The JSON summary document (config, totals, timing).
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "total_examined": self.total_examined,
            "total_obstructed": self.total_obstructed,
            "wall_time_ms": self.wall_time.as_millis() as u64,
        })
    }

    pub fn write_summary(&self, mut w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut w, &self.summary_json())
            .map_err(|e| Error::Io(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    }

    /// Line-delimited records, one obstructed canonical form with its
    /// report per line, in enumeration order.
    pub fn write_records(&self, mut w: impl Write) -> Result<()> {
        for record in &self.obstructed {
            serde_json::to_writer(&mut w, record).map_err(|e| Error::Io(e.to_string()))?;
            writeln!(w)?;
        }
        Ok(())
    }
}

struct BlockResult {
    examined: u64,
    obstructed: Vec<CensusRecord>,
}

fn process_block(config: &SearchConfig, pairs: &[(Int, Int)], lead: usize) -> BlockResult {
    let mut examined = 0u64;
    let mut obstructed = Vec::new();
    for canonical in block_forms(config, pairs, lead) {
        let report = obstruction_check(&canonical.to_form()).expect("census forms are small");
        examined += 1;
        if report.obstructed {
            obstructed.push(CensusRecord { canonical, report });
        }
    }
    BlockResult {
        examined,
        obstructed,
    }
}

/// Runs the obstruction over the whole universe of `config` on
/// `config.worker_count` threads. Blocks (leading pairs) are claimed from a
/// shared counter and merged in block order, so the outcome is
/// deterministic whatever the scheduling.
pub fn run_census(config: &SearchConfig) -> Result<Census> {
    config.validate()?;
    let start = Instant::now();
    let pairs = coprime_pairs(config.max_multiplicity);
    let nblocks = pairs.len();

    let results: Vec<Option<BlockResult>> = if config.worker_count == 1 {
        (0..nblocks)
            .map(|b| Some(process_block(config, &pairs, b)))
            .collect()
    } else {
        let next = AtomicUsize::new(0);
        let slots = Mutex::new((0..nblocks).map(|_| None).collect::<Vec<_>>());
        std::thread::scope(|scope| {
            for _ in 0..config.worker_count.min(nblocks.max(1)) {
                scope.spawn(|| loop {
                    let b = next.fetch_add(1, Ordering::Relaxed);
                    if b >= nblocks {
                        break;
                    }
                    let result = process_block(config, &pairs, b);
                    slots.lock().unwrap()[b] = Some(result);
                });
            }
        });
        slots.into_inner().unwrap()
    };

    let mut total_examined = 0u64;
    let mut obstructed = Vec::new();
    for result in results.into_iter().flatten() {
        total_examined += result.examined;
        obstructed.extend(result.obstructed);
    }
    Ok(Census {
        config: config.clone(),
        total_examined,
        total_obstructed: obstructed.len() as u64,
        obstructed,
        wall_time: start.elapsed(),
    })
}

/// Per-`p` reproduction of the infinite obstructed family
/// `S^2((p,-17),(2p-1,17),(2p+1,17))` for `p = 3 (mod 17)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop4Report {
    pub p: Int,
    /// `(4p^2-1)p*`, `(2p^2+p)(2p-1)*`, `(2p^2-p)(2p+1)*`, `4p^3-p`
    /// reduced mod 17.
    pub residues: [Int; 4],
    pub h: Int,
    pub obstructed: bool,
    /// Residues equal `(6, -6, 7, 3)` mod 17 and the space is obstructed
    /// with `H = 17`.
    pub holds: bool,
}

/// Expected residues `(6, -6, 7, 3)` normalized into `[0, 17)`.
pub const PROP4_EXPECTED: [u32; 4] = [6, 11, 7, 3];

pub fn prop4_family_check(p_values: &[Int]) -> Result<Vec<Prop4Report>> {
    let seventeen = Int::from(17);
    let mut out = Vec::with_capacity(p_values.len());
    for p in p_values {
        if p < &Int::from(2) || p.mod_floor(&seventeen) != Int::from(3) {
            return Err(Error::Prop4Input(p.clone()));
        }
        let p2 = p * p;
        let two_p = Int::from(2) * p;
        let inv = |a: &Int| mod_inverse(a, &seventeen).expect("coprime to 17");
        let residues = [
            ((Int::from(4) * &p2 - 1u32) * inv(p)).mod_floor(&seventeen),
            ((Int::from(2) * &p2 + p) * inv(&(&two_p - 1u32))).mod_floor(&seventeen),
            ((Int::from(2) * &p2 - p) * inv(&(&two_p + 1u32))).mod_floor(&seventeen),
            (Int::from(4) * &p2 * p - p).mod_floor(&seventeen),
        ];
        let form = crate::sfs::SeifertForm::new(vec![
            (p.clone(), -seventeen.clone()),
            (&two_p - 1u32, seventeen.clone()),
            (&two_p + 1u32, seventeen.clone()),
        ])?;
        let report = obstruction_check(&form)?;
        let holds = residues
            .iter()
            .zip(PROP4_EXPECTED)
            .all(|(r, e)| *r == Int::from(e))
            && report.obstructed
            && report.h == seventeen;
        out.push(Prop4Report {
            p: p.clone(),
            residues,
            h: report.h,
            obstructed: report.obstructed,
            holds,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(6, 50).validate().is_ok());
        assert!(SearchConfig::new(1, 50).validate().is_err());
        let mut unbounded = SearchConfig::new(6, 50);
        unbounded.max_abs_h = None;
        assert!(unbounded.validate().is_err());
        unbounded.max_abs_e0 = Some(3);
        assert!(unbounded.validate().is_ok());
        let mut no_workers = SearchConfig::new(6, 50);
        no_workers.worker_count = 0;
        assert!(no_workers.validate().is_err());
    }

    #[test]
    fn enumerate_multiplicity_two_is_empty() {
        // only (2,1) is available and S^2((2,1),(2,1),(2,x)) never has
        // cyclic first homology
        let forms: Vec<_> = enumerate(&SearchConfig::new(2, 50)).unwrap().collect();
        assert!(forms.is_empty());
    }

    #[test]
    fn enumerate_is_sorted_and_duplicate_free() {
        let forms: Vec<_> = enumerate(&SearchConfig::new(5, 30)).unwrap().collect();
        assert!(!forms.is_empty());
        for w in forms.windows(2) {
            assert!(w[0] < w[1], "out of order: {} then {}", w[0], w[1]);
        }
    }

    #[test]
    fn enumerate_respects_bounds_and_filters() {
        let mut config = SearchConfig::new(6, 40);
        config.torque_filter = TorqueFilter::NoPm1;
        for c in enumerate(&config).unwrap() {
            assert_eq!(c.torque_profile(), 0);
            let form = c.to_form();
            assert!(form.h_invariant().abs() <= Int::from(40));
            assert!(form.h1_is_cyclic());
            assert!(c.exceptional().iter().all(|(p, _)| *p <= Int::from(6)));
        }
    }

    #[test]
    fn enumerate_twice_is_identical() {
        let config = SearchConfig::new(5, 25);
        let a: Vec<_> = enumerate(&config).unwrap().collect();
        let b: Vec<_> = enumerate(&config).unwrap().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn mirror_merge_halves_asymmetric_forms() {
        let mut config = SearchConfig::new(5, 30);
        let plain: Vec<_> = enumerate(&config).unwrap().collect();
        config.merge_mirrors = true;
        let merged: Vec<_> = enumerate(&config).unwrap().collect();
        assert!(merged.len() < plain.len());
        // every space is represented exactly once up to mirroring
        for c in &plain {
            let represented = merged.contains(c) || merged.contains(&c.mirror());
            assert!(represented, "{c} lost by mirror merging");
        }
        for c in &merged {
            assert!(!(merged.contains(&c.mirror()) && c.mirror() != *c));
        }
    }

    #[test]
    fn census_covers_the_named_examples() {
        let census = run_census(&SearchConfig::new(7, 20)).unwrap();
        let z5: CanonicalSeifertForm = "(2,1)(3,1)(7,2) e0=-1".parse().unwrap();
        let prop4: CanonicalSeifertForm = "(3,1)(5,2)(7,3) e0=-1".parse().unwrap();
        for target in [z5, prop4] {
            assert!(
                census.obstructed.iter().any(|r| r.canonical == target),
                "{target} missing from the obstructed list"
            );
        }
        assert_eq!(census.total_obstructed, census.obstructed.len() as u64);
        assert!(census.total_obstructed <= census.total_examined);
    }

    #[test]
    fn census_empty_range() {
        let census = run_census(&SearchConfig::new(2, 50)).unwrap();
        assert_eq!(census.total_examined, 0);
        assert_eq!(census.total_obstructed, 0);
    }

    #[test]
    fn prop4_examples() {
        let reports = prop4_family_check(&[Int::from(3), Int::from(20), Int::from(37)]).unwrap();
        for r in &reports {
            assert_eq!(
                r.residues,
                [Int::from(6), Int::from(11), Int::from(7), Int::from(3)]
            );
            assert!(r.obstructed);
            assert_eq!(r.h, Int::from(17));
            assert!(r.holds);
        }
        assert!(prop4_family_check(&[Int::from(4)]).is_err());
        assert!(prop4_family_check(&[Int::from(-14)]).is_err());
    }

    #[test]
    fn record_lines_roundtrip() {
        let census = run_census(&SearchConfig::new(5, 20)).unwrap();
        let mut buf = Vec::new();
        census.write_records(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let parsed: Vec<CensusRecord> = text
            .lines()
            .map(|line| serde_json::from_str(line).unwrap())
            .collect();
        assert_eq!(parsed, census.obstructed);
    }
}
