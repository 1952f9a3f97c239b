//! Independent brute-force oracle used by the acceptance and golden tests.
//!
//! Everything here is deliberately written against the implementation
//! grain: plain i64 arithmetic, inverse-by-scan, squares-by-scan, and
//! cyclicity decided by the gcd of all 3x3 minors of the relation matrix
//! instead of a Smith normal form pass.

// compiled once per test binary; not every binary uses every helper
#![allow(dead_code, clippy::needless_range_loop)]

/// A raw census entry: three canonical pairs plus the background integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleForm {
    pub triple: [(i64, i64); 3],
    pub e0: i64,
}

impl OracleForm {
    /// Torque representatives with `e0` folded into the last fibre.
    pub fn torques(&self) -> [i64; 3] {
        let [(_, b1), (_, b2), (p3, b3)] = self.triple;
        [b1, b2, b3 + self.e0 * p3]
    }

    pub fn h(&self) -> i64 {
        let [(p1, _), (p2, _), (p3, _)] = self.triple;
        let [x1, x2, x3] = self.torques();
        p1 * p2 * x3 + p1 * p3 * x2 + p2 * p3 * x1
    }

    pub fn canonical_string(&self) -> String {
        let [(p1, b1), (p2, b2), (p3, b3)] = self.triple;
        format!("({p1},{b1})({p2},{b2})({p3},{b3}) e0={}", self.e0)
    }

    /// The form text of the representative, accepted by the library parser.
    pub fn form_string(&self) -> String {
        let [(p1, _), (p2, _), (p3, _)] = self.triple;
        let [x1, x2, x3] = self.torques();
        format!("({p1},{x1})({p2},{x2})({p3},{x3})")
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Nested-loop enumeration of canonical triples with background, sorted,
/// with no canonicalization machinery involved.
pub fn oracle_enumerate(max_p: i64, max_h: i64, require_cyclic: bool) -> Vec<OracleForm> {
    let mut pairs = Vec::new();
    for p in 2..=max_p {
        for b in 1..p {
            if gcd(p, b) == 1 {
                pairs.push((p, b));
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..pairs.len() {
        for j in i..pairs.len() {
            for k in j..pairs.len() {
                let triple = [pairs[i], pairs[j], pairs[k]];
                let [(p1, b1), (p2, b2), (p3, b3)] = triple;
                let prod = p1 * p2 * p3;
                let base = p1 * p2 * b3 + p1 * p3 * b2 + p2 * p3 * b1;
                let lo = ceil_div(-max_h - base, prod);
                let hi = floor_div(max_h - base, prod);
                for e0 in lo..=hi {
                    let form = OracleForm { triple, e0 };
                    debug_assert!(form.h().abs() <= max_h);
                    if require_cyclic && !oracle_cyclic(&form) {
                        continue;
                    }
                    out.push(form);
                }
            }
        }
    }
    out
}

/// First homology is cyclic iff the gcd of all 3x3 minors of the 4x4
/// relation matrix is 1 (that gcd is d1*d2*d3; rank < 3 makes it 0).
pub fn oracle_cyclic(form: &OracleForm) -> bool {
    let [(p1, _), (p2, _), (p3, _)] = form.triple;
    let [x1, x2, x3] = form.torques();
    let m = [[p1, 0, 0, x1], [0, p2, 0, x2], [0, 0, p3, x3], [1, 1, 1, 0]];
    let mut g = 0i64;
    for skip_row in 0..4 {
        for skip_col in 0..4 {
            let mut sub = [[0i64; 3]; 3];
            let mut r = 0;
            for i in 0..4 {
                if i == skip_row {
                    continue;
                }
                let mut c = 0;
                for j in 0..4 {
                    if j == skip_col {
                        continue;
                    }
                    sub[r][c] = m[i][j];
                    c += 1;
                }
                r += 1;
            }
            g = gcd(g, det3(&sub));
        }
    }
    g == 1
}

fn det3(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|c| c >= 0 && c * c == n)
}

fn inverse_by_scan(x: i64, p: i64) -> Option<i64> {
    (0..p.max(1)).find(|r| (r * x).rem_euclid(p.max(1)) == 1 % p.max(1))
}

/// Verdict of the obstruction by direct residue scan.
pub fn oracle_obstructed(form: &OracleForm) -> bool {
    let [(p1, _), (p2, _), (p3, _)] = form.triple;
    let ps = [p1, p2, p3];
    let xs = form.torques();
    let h = form.h();
    let prod = p1 * p2 * p3;

    if h == 0 {
        for i in 0..3 {
            let others = prod / ps[i];
            if others % ps[i] == 0 && is_square(others / ps[i]) {
                return false;
            }
        }
        return !is_square(prod);
    }

    let habs = h.abs();
    let squares: std::collections::HashSet<i64> =
        (0..habs).map(|x| (x * x).rem_euclid(habs)).collect();
    let mut bases = Vec::new();
    for i in 0..3 {
        let q = inverse_by_scan(xs[i], ps[i]).expect("valid Seifert invariant");
        let num = q * h - prod / ps[i];
        assert_eq!(num % ps[i], 0, "integrality identity");
        bases.push(num / ps[i]);
    }
    bases.push(prod);
    !bases
        .iter()
        .any(|c| squares.contains(&c.rem_euclid(habs)) || squares.contains(&(-c).rem_euclid(habs)))
}
