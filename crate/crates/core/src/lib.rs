//! Surgery arithmetic for small Seifert fibred spaces over the sphere.
//!
//! The library computes the homology invariants of `S^2((p1,x1),(p2,x2),(p3,x3))`,
//! decides the quadratic-residue obstruction to obtaining such a space by a
//! surgery with a seiferter, solves the linking-number equations behind the
//! obstruction, performs the twist and drill constructions that produce knots
//! in lens spaces with reducible surgeries, runs the lens-space case analysis
//! for those knots, evaluates lens-space d-invariants for the even-difference
//! surgery test, and enumerates a census of spaces tagged by the obstruction
//! verdict.
//!
//! Modules:
//! - [`arith`]: exact integer number theory and Smith normal form
//! - [`sfs`]: Seifert forms, canonicalization, H and first homology
//! - [`seiferter`]: the obstruction, linking equations, twisting, drilling
//! - [`lens`]: lens space equivalence and the exclusion case analysis
//! - [`dinv`]: lens-space d-invariants and the even-difference matching test
//! - [`search`]: census enumeration and parallel obstruction runs
//!
//! ```
//! use seifcalc_core::{drill, obstruction_check, Int, SeifertForm, Sign};
//!
//! let s: SeifertForm = "(5,-2)(3,-1)(4,3)".parse()?;
//! assert_eq!(s.h_invariant(), Int::from(1));
//! assert!(!obstruction_check(&s)?.obstructed);
//!
//! // drilling the (4,3)-fibre at linking number 0 gives a knot in L(15,4)
//! // whose surgery produces L(5,-2) # L(3,-1) = L(5,3) # L(3,2)
//! let d = drill(&s, 3, &Int::from(0), Sign::Plus)?;
//! assert_eq!(d.ambient.to_string(), "L(15,4)");
//! # Ok::<(), seifcalc_core::Error>(())
//! ```

pub mod arith;
pub mod dinv;
pub mod error;
pub mod lens;
pub mod search;
pub mod seiferter;
pub mod sfs;

/// Arbitrary-precision signed integer used throughout.
pub type Int = num_bigint::BigInt;
/// Exact rational number used for d-invariants and H = 0 reports.
pub type Rational = num_rational::BigRational;

pub use error::{Error, Result};

pub use arith::{
    factorize, is_perfect_square, is_quadratic_residue, is_quadratic_residue_scan, mod_inverse,
    smith_invariant_factors, Factorization,
};
pub use dinv::{
    even_difference_matching, integral_surgery_obstruction, lens_d_invariants, DVector,
};
pub use lens::{
    ball_case_possible, cable_case_possible, contains_klein_bottle, lens_equivalent,
    torus_case_possible, LensSpace,
};
pub use search::{
    enumerate, prop4_family_check, run_census, Census, CensusRecord, Prop4Report, SearchConfig,
    TorqueFilter,
};
pub use seiferter::{
    drill, solve_linking, obstruction_check, twist, twist_ordinary, Candidate, CandidateValue,
    DrillResult, Fibre, LinkingSolution, ObstructionReport, Sign,
};
pub use sfs::{CanonicalSeifertForm, SeifertForm};
