//! Roots of the congruence `μ² ≡ D (mod m)`.
//!
//! Moduli are factored with a smallest-prime-factor table, each prime power is
//! solved separately (Tonelli–Shanks plus Hensel lifting for odd primes, a
//! bitwise lift for powers of two) and the pieces are glued with the Chinese
//! remainder theorem.
//!
//! ```
//! use qcroots::arith::{Discriminant, FactorTable, roots_mod_m};
//!
//! let d = Discriminant::new(10).unwrap();
//! let table = FactorTable::new(100);
//! assert_eq!(roots_mod_m(d, 13, &table).unwrap(), vec![6, 7]);
//! ```

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DiscriminantReason, Error, Result};

/// A validated discriminant: nonzero, square-free, not `≡ 1 (mod 4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        let reject = |reason| Err(Error::InvalidDiscriminant { d, reason });
        if d == 0 {
            return reject(DiscriminantReason::Zero);
        }
        if d > 0 && isqrt(d as u64).pow(2) == d as u64 {
            return reject(DiscriminantReason::PerfectSquare);
        }
        let mut n = d.unsigned_abs();
        let mut p = 2u64;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return reject(DiscriminantReason::SquareFactor(p));
                }
            }
            p += 1;
        }
        if d.rem_euclid(4) == 1 {
            return reject(DiscriminantReason::OneModFour);
        }
        Ok(Discriminant(d))
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// Residue of `D` modulo `m`, in `[0, m)`.
    pub fn residue(self, m: u64) -> u64 {
        (self.0 as i128).rem_euclid(m as i128) as u64
    }
}

impl std::fmt::Display for Discriminant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A root `μ` of `μ² ≡ D (mod m)` with `0 ≤ μ < m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Root {
    pub m: u64,
    pub mu: u64,
}

/// Restriction to `m ≡ 0` and `μ ≡ ν (mod n)`. `n = 1` keeps everything.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CongruenceFilter {
    pub n: u64,
    pub nu: u64,
}

impl CongruenceFilter {
    pub const TRIVIAL: CongruenceFilter = CongruenceFilter { n: 1, nu: 0 };

    pub fn new(n: u64, nu: u64) -> Self {
        assert!(n >= 1, "filter level must be positive");
        CongruenceFilter { n, nu: nu % n }
    }

    /// Checks that `ν² ≡ D (mod n)`; otherwise the filtered family is empty.
    pub fn validate(self, d: Discriminant) -> Result<Self> {
        let nu = self.nu as u128;
        if (nu * nu % self.n as u128) as u64 != d.residue(self.n) {
            return Err(Error::InvalidFilter { n: self.n, nu: self.nu });
        }
        Ok(self)
    }

    pub fn accepts(self, root: Root) -> bool {
        root.m.is_multiple_of(self.n) && root.mu % self.n == self.nu
    }
}

impl Default for CongruenceFilter {
    fn default() -> Self {
        Self::TRIVIAL
    }
}

/// Smallest-prime-factor table for `1..=bound`.
#[derive(Debug, Clone)]
pub struct FactorTable {
    spf: Vec<u32>,
}

impl FactorTable {
    pub fn new(bound: u64) -> Self {
        let n = bound as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        FactorTable { spf }
    }

    pub fn bound(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Prime factorization as `(p, e)` pairs with increasing `p`.
    pub fn factor(&self, m: u64) -> Result<Vec<(u64, u32)>> {
        if m == 0 || m > self.bound() {
            return Err(Error::ModulusOutOfRange { m, bound: self.bound() });
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut n = m as usize;
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        Ok(out)
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

/// A square root of `a` modulo an odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// All roots of `μ² ≡ D (mod p^e)`, sorted.
pub fn sqrt_mod_prime_power(d: Discriminant, p: u64, e: u32) -> Vec<u64> {
    let pe = p.checked_pow(e).expect("prime power exceeds u64");
    let target = d.residue(pe);
    if p == 2 {
        // Lift every solution mod 2^k to both candidates mod 2^(k+1).
        let mut sols: Vec<u64> = (0..2).filter(|x| x * x % 2 == target % 2).collect();
        for k in 1..e {
            let pk = 1u64 << k;
            let next = pk << 1;
            sols = sols
                .iter()
                .flat_map(|&x| [x, x + pk])
                .filter(|&x| mul_mod(x, x, next) == target % next)
                .collect();
        }
        sols.sort_unstable();
        return sols;
    }
    if target.is_multiple_of(p) {
        // D is square-free, so p ∥ D and only the modulus p itself admits a root.
        return if e == 1 { vec![0] } else { vec![] };
    }
    let Some(mut x) = sqrt_mod_prime(target % p, p) else {
        return vec![];
    };
    // Newton iteration x ← x − (x² − D)/(2x) converges p-adically.
    while mul_mod(x, x, pe) != target {
        let fx = (mul_mod(x, x, pe) + pe - target) % pe;
        let inv = inv_mod(mul_mod(2, x, pe), pe).expect("2x is a unit mod p^e");
        x = (x + pe - mul_mod(fx, inv, pe)) % pe;
    }
    let mut out = vec![x, pe - x];
    out.sort_unstable();
    out
}

/// Roots modulo `m` from its factorization, sorted ascending.
pub fn roots_from_factors(d: Discriminant, factors: &[(u64, u32)]) -> Vec<u64> {
    let mut modulus = 1u64;
    let mut acc = vec![0u64];
    for &(p, e) in factors {
        let local = sqrt_mod_prime_power(d, p, e);
        if local.is_empty() {
            return vec![];
        }
        let pe = p.pow(e);
        let inv = inv_mod(modulus % pe, pe).expect("coprime prime powers");
        let next = modulus * pe;
        let mut combined = Vec::with_capacity(acc.len() * local.len());
        for &r1 in &acc {
            for &r2 in &local {
                let diff = (r2 + pe - r1 % pe) % pe;
                let k = mul_mod(diff, inv, pe);
                combined.push(r1 + modulus * k);
            }
        }
        acc = combined;
        modulus = next;
    }
    acc.sort_unstable();
    acc
}

/// All `μ ∈ [0, m)` with `μ² ≡ D (mod m)`, sorted ascending.
pub fn roots_mod_m(d: Discriminant, m: u64, table: &FactorTable) -> Result<Vec<u64>> {
    Ok(roots_from_factors(d, &table.factor(m)?))
}

/// Ordered enumeration of roots by modulus, then by `μ`.
#[derive(Debug, Clone)]
pub struct RootEnumerator<'a> {
    d: Discriminant,
    table: &'a FactorTable,
    filter: CongruenceFilter,
}

impl<'a> RootEnumerator<'a> {
    pub fn new(d: Discriminant, table: &'a FactorTable, filter: CongruenceFilter) -> Self {
        RootEnumerator { d, table, filter }
    }

    fn push_modulus(&self, m: u64, out: &mut Vec<Root>) -> Result<()> {
        for mu in roots_mod_m(self.d, m, self.table)? {
            let root = Root { m, mu };
            if self.filter.accepts(root) {
                out.push(root);
            }
        }
        Ok(())
    }

    /// Roots with `lo ≤ m ≤ hi`, in stream order.
    pub fn range(&self, lo: u64, hi: u64) -> Result<Vec<Root>> {
        let n = self.filter.n;
        let mut out = Vec::new();
        let mut m = lo.max(1).div_ceil(n) * n;
        while m <= hi {
            self.push_modulus(m, &mut out)?;
            m += n;
        }
        Ok(out)
    }

    /// Same output as [`range`](Self::range), computed in parallel chunks and
    /// concatenated in modulus order.
    pub fn par_range(&self, lo: u64, hi: u64) -> Result<Vec<Root>> {
        const CHUNK: u64 = 1 << 14;
        let lo = lo.max(1);
        if hi < lo {
            return Ok(Vec::new());
        }
        let chunks: Vec<(u64, u64)> = (lo..=hi)
            .step_by(CHUNK as usize)
            .map(|a| (a, (a + CHUNK - 1).min(hi)))
            .collect();
        let parts: Result<Vec<Vec<Root>>> =
            chunks.par_iter().map(|&(a, b)| self.range(a, b)).collect();
        Ok(parts?.concat())
    }
}

/// All roots with `m ≤ max_m` passing `filter`, ordered by `m` then `μ`.
pub fn enumerate_roots(d: Discriminant, max_m: u64, filter: CongruenceFilter) -> Result<Vec<Root>> {
    let table = FactorTable::new(max_m);
    RootEnumerator::new(d, &table, filter).par_range(1, max_m)
}

/// Enumerates moduli in increasing order until at least `n` roots are found,
/// then truncates to exactly `n`. Returns the roots and the last modulus used.
pub fn first_n_roots(d: Discriminant, n: usize, filter: CongruenceFilter) -> Result<(Vec<Root>, u64)> {
    let mut bound: u64 = 1024;
    loop {
        let roots = enumerate_roots(d, bound, filter)?;
        if roots.len() >= n {
            let mut roots = roots;
            roots.truncate(n);
            let last = roots.last().map_or(0, |r| r.m);
            return Ok((roots, last));
        }
        // Root counts grow linearly in the modulus bound.
        let grow = if roots.is_empty() {
            4.0
        } else {
            (1.1 * n as f64 / roots.len() as f64).clamp(1.2, 4.0)
        };
        bound = ((bound as f64) * grow).ceil() as u64;
    }
}
