//! Exact integer primitives: modular inverses, quadratic residues,
//! factorization and Smith normal form.
//!
//! Everything here works on arbitrary-precision integers so that census
//! bounds and adversarial CLI input can never overflow silently.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Int;

/// Multiplicative inverse of `a` modulo `n`, in `[0, n)`.
///
/// Returns `None` when `gcd(a, n) != 1`. For `n = 1` the inverse is `0`.
pub fn mod_inverse(a: &Int, n: &Int) -> Option<Int> {
    assert!(n >= &Int::one(), "modulus must be >= 1");
    if n.is_one() {
        return Some(Int::zero());
    }
    let ext = a.extended_gcd(n);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(n))
}

/// True iff `x^2 = a (mod n)` has a solution; `0` counts as a residue.
///
/// Decides by factoring `n` and testing per prime power: Euler's criterion
/// for odd primes, the unit rules mod 8 for powers of two, and valuation
/// parity for non-unit `a`. Results are combined by CRT.
pub fn is_quadratic_residue(a: &Int, n: &Int) -> bool {
    assert!(n >= &Int::one(), "modulus must be >= 1");
    if n.is_one() {
        return true;
    }
    let a = a.mod_floor(n);
    if a.is_zero() {
        return true;
    }
    factorize(n)
        .prime_powers()
        .iter()
        .all(|(p, e)| residue_mod_prime_power(&a, p, *e))
}

fn residue_mod_prime_power(a: &Int, p: &Int, e: u32) -> bool {
    let pe = p.pow(e);
    let mut a = a.mod_floor(&pe);
    if a.is_zero() {
        return true;
    }
    // strip the p-part: a = p^v * u with u a unit mod p^(e-v)
    let mut v = 0u32;
    while (&a % p).is_zero() {
        a /= p;
        v += 1;
    }
    if v % 2 == 1 {
        return false;
    }
    let k = e - v;
    if *p == Int::from(2) {
        match k {
            0 | 1 => true,
            2 => a.mod_floor(&Int::from(4)).is_one(),
            _ => a.mod_floor(&Int::from(8)).is_one(),
        }
    } else {
        // Euler criterion: u^((p-1)/2) = 1 (mod p) iff u is a residue
        let exp = (p - 1u32) / 2;
        a.modpow(&exp, p).is_one()
    }
}

/// Brute-force residue test scanning all of `[0, n)`; the reference
/// implementation for `is_quadratic_residue`. Only for `n <= 10^6`.
pub fn is_quadratic_residue_scan(a: &Int, n: &Int) -> bool {
    assert!(n >= &Int::one(), "modulus must be >= 1");
    assert!(
        *n <= Int::from(1_000_000),
        "scan fallback is limited to n <= 10^6"
    );
    let n = n.to_u64().unwrap();
    let a = a.mod_floor(&Int::from(n)).to_u64().unwrap();
    (0..n).any(|x| x * x % n == a)
}

/// True iff `a` is the square of an integer (so `a >= 0`).
pub fn is_perfect_square(a: &Int) -> bool {
    if a.is_negative() {
        return false;
    }
    let r = a.sqrt();
    &r * &r == *a
}

/// A prime factorization, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    prime_powers: Vec<(Int, u32)>,
}

impl Factorization {
    pub fn prime_powers(&self) -> &[(Int, u32)] {
        &self.prime_powers
    }

    /// Product of all prime powers; recovers the factored integer.
    pub fn product(&self) -> Int {
        self.prime_powers
            .iter()
            .fold(Int::one(), |acc, (p, e)| acc * p.pow(*e))
    }
}

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Exact prime factorization of `n >= 1`.
///
/// Trial division up to 10^6, then Pollard's rho with a Miller-Rabin
/// primality test (deterministic base set) for larger cofactors.
pub fn factorize(n: &Int) -> Factorization {
    assert!(n >= &Int::one(), "factorize requires n >= 1");
    let mut powers: Vec<(Int, u32)> = Vec::new();
    let mut rest = n.clone();

    let push = |p: Int, e: u32, powers: &mut Vec<(Int, u32)>| {
        powers.push((p, e));
    };

    let mut d = 2u64;
    while d <= TRIAL_DIVISION_BOUND {
        let div = Int::from(d);
        if &div * &div > rest {
            break;
        }
        if (&rest % &div).is_zero() {
            let mut e = 0u32;
            while (&rest % &div).is_zero() {
                rest /= &div;
                e += 1;
            }
            push(div, e, &mut powers);
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    if !rest.is_one() {
        if Int::from(d) * Int::from(d) > rest || is_prime(&rest) {
            push(rest, 1, &mut powers);
        } else {
            let mut stack = vec![rest];
            let mut found: Vec<Int> = Vec::new();
            while let Some(m) = stack.pop() {
                if is_prime(&m) {
                    found.push(m);
                    continue;
                }
                let f = pollard_rho(&m);
                stack.push(&m / &f);
                stack.push(f);
            }
            found.sort();
            let mut i = 0;
            while i < found.len() {
                let mut j = i;
                while j < found.len() && found[j] == found[i] {
                    j += 1;
                }
                push(found[i].clone(), (j - i) as u32, &mut powers);
                i = j;
            }
        }
    }

    powers.sort_by(|a, b| a.0.cmp(&b.0));
    Factorization {
        prime_powers: powers,
    }
}

/// Miller-Rabin with the 12-prime base set, deterministic below 3.3 * 10^24.
pub fn is_prime(n: &Int) -> bool {
    if n < &Int::from(2) {
        return false;
    }
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if *n == Int::from(b) {
            return true;
        }
        if (n % Int::from(b)).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'base: for b in BASES {
        let mut x = Int::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&Int::from(2u32), n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// One nontrivial factor of an odd composite `n` (Pollard rho, Brent cycle).
fn pollard_rho(n: &Int) -> Int {
    let two = Int::from(2);
    if (n % &two).is_zero() {
        return two;
    }
    let mut c = Int::one();
    loop {
        let f = |x: &Int| (x * x + &c).mod_floor(n);
        let mut x = Int::from(2);
        let mut y = Int::from(2);
        let mut d = Int::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

/// Invariant factors of the abelian group presented by `rows` (each row a
/// relation on the column generators): `d_1 | d_2 | ...`, with factors
/// equal to 1 dropped and `0` standing for an infinite factor.
#[allow(clippy::needless_range_loop)]
pub fn smith_invariant_factors(rows: &[Vec<Int>]) -> Vec<Int> {
    let m = rows.len();
    let n = if m == 0 { 0 } else { rows[0].len() };
    assert!(
        rows.iter().all(|r| r.len() == n),
        "matrix must be rectangular"
    );
    let mut a: Vec<Vec<Int>> = rows.to_vec();

    let mut rank = 0usize;
    for k in 0..m.min(n) {
        let Some((pi, pj)) = min_nonzero(&a, k) else {
            break;
        };
        a.swap(k, pi);
        swap_cols(&mut a, k, pj);

        loop {
            let mut dirty = false;
            for i in k + 1..m {
                if !a[i][k].is_zero() {
                    let q = &a[i][k] / &a[k][k];
                    for j in k..n {
                        let sub = &q * &a[k][j];
                        a[i][j] -= sub;
                    }
                    if !a[i][k].is_zero() {
                        a.swap(k, i);
                        dirty = true;
                    }
                }
            }
            for j in k + 1..n {
                if !a[k][j].is_zero() {
                    let q = &a[k][j] / &a[k][k];
                    for row in a.iter_mut().take(m).skip(k) {
                        let sub = &q * &row[k];
                        row[j] -= sub;
                    }
                    if !a[k][j].is_zero() {
                        swap_cols(&mut a, k, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // enforce the divisibility chain before moving on
            let mut fixed = true;
            'scan: for i in k + 1..m {
                for j in k + 1..n {
                    if !(&a[i][j] % &a[k][k]).is_zero() {
                        for col in 0..n {
                            let add = a[i][col].clone();
                            a[k][col] += add;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[k][k].is_negative() {
            for j in k..n {
                a[k][j] = -a[k][j].clone();
            }
        }
        rank += 1;
    }

    let mut factors: Vec<Int> = (0..rank)
        .map(|k| a[k][k].clone())
        .filter(|d| !d.is_one())
        .collect();
    factors.extend(std::iter::repeat_n(Int::zero(), n - rank));
    factors
}

fn min_nonzero(a: &[Vec<Int>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, v) in row.iter().enumerate().skip(k) {
            if v.is_zero() {
                continue;
            }
            match &best {
                Some((bi, bj)) if a[*bi][*bj].abs() <= v.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<Int>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}
