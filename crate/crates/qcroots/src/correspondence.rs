//! The bijection between roots `(m, μ)` and tops of geodesics `γ·c_l`.
//!
//! A root determines the ideal `ℤ(√D + μ) + ℤm` and its norm form
//! `F_{m,μ}(x, y) = ((μ² − D)/m)x² + 2μxy + my²`. Reducing that form and
//! matching the reduced form against the class cycles gives the class `l` and a
//! matrix `γ` with `F_{m,μ}(v) = F_l(vγ)`. Then the frame of the root equals
//! `γ·𝔅_l·diag(ξ, ξ')` for a totally positive `ξ`.
//!
//! ```
//! use qcroots::arith::{Discriminant, Root};
//! use qcroots::correspondence::{address_to_root, root_to_address};
//! use qcroots::qfield::ClassGroupData;
//!
//! let cg = ClassGroupData::new(Discriminant::new(2).unwrap()).unwrap();
//! let root = Root { m: 7, mu: 3 };
//! let addr = root_to_address(root, &cg).unwrap();
//! assert_eq!(addr.l, 1);
//! assert_eq!(address_to_root(addr.l, &addr.gamma, &cg), Some(root));
//! ```

use std::cmp::Ordering;

use serde::Serialize;

use crate::arith::{CongruenceFilter, FactorTable, Root, RootEnumerator};
use crate::error::{Error, Result};
use crate::qfield::{ClassGroupData, Mat2, QForm, QuadInt, QuadMat};

/// Class `l`, a representative `γ` of `Γ_∞ γ Γ_l` and the scalar `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CosetAddress {
    pub l: usize,
    pub gamma: Mat2,
    pub xi: QuadInt,
}

/// Top `μ/m + i√D/m` of the geodesic attached to a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeodesicTop {
    pub mu: u64,
    pub m: u64,
    pub d: i64,
}

impl GeodesicTop {
    pub fn x(&self) -> f64 {
        self.mu as f64 / self.m as f64
    }

    pub fn y(&self) -> f64 {
        (self.d as f64).sqrt() / self.m as f64
    }
}

/// `F_{m,μ} = ((μ² − D)/m, 2μ, m)`.
pub fn root_form(root: Root, d: i64) -> QForm {
    let (m, mu) = (root.m as i128, root.mu as i128);
    QForm::new((mu * mu - d as i128) / m, 2 * mu, m)
}

/// Frame `[[√D + μ, μ − √D], [m, m]]` of the root's ideal.
pub fn root_frame(root: Root, d: i64) -> QuadMat {
    let eta1 = QuadInt::new(root.mu as i128, 1, 1, d);
    let eta2 = QuadInt::int(root.m as i128, d);
    QuadMat([[eta1, eta1.conj()], [eta2, eta2.conj()]])
}

/// Checks `γ·𝔅_l·diag(ξ, ξ') == frame(root)` entry by entry.
pub fn verify_parametrization(root: Root, addr: &CosetAddress, cg: &ClassGroupData) -> bool {
    let d = cg.d.get();
    let class = cg.class(addr.l);
    let lhs = QuadMat::from_int(&addr.gamma, d) * class.basis * QuadMat::diag(addr.xi, addr.xi.conj());
    addr.xi.is_totally_positive() && lhs == root_frame(root, d)
}

/// Power `k` minimising the Frobenius norm of `γ·M^k`, ties to the smaller
/// entry tuple.
fn best_stabilizer_power(gamma: &Mat2, m: &Mat2) -> i64 {
    let key = |g: &Mat2| (g.frob2(), g.rows());
    let minv = m.inv();
    let mut k = 0i64;
    let mut cur = *gamma;
    loop {
        let up = cur.checked_mul(m);
        let down = cur.checked_mul(&minv);
        match (up, down) {
            (Some(u), _) if key(&u) < key(&cur) => {
                cur = u;
                k += 1;
            }
            (_, Some(dn)) if key(&dn) < key(&cur) => {
                cur = dn;
                k -= 1;
            }
            _ => return k,
        }
    }
}

/// Right-multiplies `γ` by the stabilizer power of least Frobenius norm and
/// adjusts `ξ` so the parametrization still holds.
pub fn canonicalize(addr: CosetAddress, cg: &ClassGroupData) -> CosetAddress {
    let m = cg.class(addr.l).stabilizer;
    let k = best_stabilizer_power(&addr.gamma, &m);
    let eps_inv = cg.eps0.conj();
    let unit = if k >= 0 { eps_inv.pow(k as u32) } else { cg.eps0.pow((-k) as u32) };
    CosetAddress { l: addr.l, gamma: addr.gamma * m.pow(k), xi: addr.xi * unit }
}

/// The canonical coset address of a root.
pub fn root_to_address(root: Root, cg: &ClassGroupData) -> Result<CosetAddress> {
    let d = cg.d.get();
    let form = root_form(root, d);
    let (l, mut gamma) = cg.classify(&form)?;
    let class = cg.class(l);
    // Bottom row: (c·β₁ + d·β₂)·ξ = m.
    let denom = QuadInt::int(gamma.c, d) * class.basis.0[0][0] + QuadInt::int(gamma.d, d) * class.basis.0[1][0];
    let mut xi = QuadInt::int(root.m as i128, d) * denom.inv().ok_or(Error::NoClassMatch(form.coeffs()))?;
    if xi.sign1() == Ordering::Less && xi.sign2() == Ordering::Less {
        gamma = gamma.neg();
        xi = -xi;
    }
    let addr = canonicalize(CosetAddress { l, gamma, xi }, cg);
    if !verify_parametrization(root, &addr, cg) {
        return Err(Error::NoClassMatch(form.coeffs()));
    }
    Ok(addr)
}

/// The root attached to `(l, γ)`, or `None` when `γ` gives a negatively
/// oriented geodesic (`m ≤ 0`).
///
/// Solves `B_l·(c₁, c₂)ᵀ = (d, −c)ᵀ` for the coordinates of `ξ` in the dual
/// basis and reads `(μ, m)ᵀ = γ·P·(c₁, c₂)ᵀ`, where `P` collects the rational
/// parts of the pairings `β̄_i β_j`.
pub fn address_to_root(l: usize, gamma: &Mat2, cg: &ClassGroupData) -> Option<Root> {
    let class = cg.class(l);
    let bl = class.pairing_unimodular;
    let det = bl.det();
    let bl_inv = Mat2::new(det * bl.d, -det * bl.b, -det * bl.c, det * bl.a);
    let coords = bl_inv.apply((gamma.d, -gamma.c));
    let [b1, b2] = class.pairing;
    let p = Mat2::new(b1.b, b2.b, b1.d, b2.d);
    let (mu, m) = gamma.apply(p.apply(coords));
    (m > 0).then(|| Root { m: m as u64, mu: mu.rem_euclid(m) as u64 })
}

pub fn top_of_root(root: Root, d: i64) -> GeodesicTop {
    GeodesicTop { mu: root.mu, m: root.m, d }
}

/// Class and geodesic coordinate `t ∈ [0, 2 log ε₀)` of the root's top along
/// `c_l`, together with the address whose `ξ` realises `t = log(ξ/ξ')`.
pub fn geodesic_position(root: Root, cg: &ClassGroupData) -> Result<(usize, f64, CosetAddress)> {
    let addr = root_to_address(root, cg)?;
    let l = addr.l;
    let m = cg.class(l).stabilizer;
    let (mut gamma, mut xi) = (addr.gamma, addr.xi);
    // ξ/ξ' ≥ 1 exactly when the √D coefficient of ξ is nonnegative; each step
    // divides the ratio by ε₀².
    let eps = cg.eps0;
    let eps_inv = eps.conj();
    let nonneg = |x: &QuadInt| x.parts().1 >= 0;
    while !nonneg(&xi) {
        xi = xi * eps;
        gamma = gamma * m.inv();
    }
    while nonneg(&(xi * eps_inv)) {
        xi = xi * eps_inv;
        gamma = gamma * m;
    }
    let t = (xi.sigma1() / xi.sigma2()).ln();
    let period = 2.0 * eps.sigma1().ln();
    // Rounding in the logarithm must not push t out of the half-open range.
    let t = t.clamp(0.0, period * (1.0 - f64::EPSILON));
    Ok((l, t, CosetAddress { l, gamma, xi }))
}

/// `[[a, b], [c, d]]` in floating point, for frame reconstructions.
pub type Mat2f = [[f64; 2]; 2];

pub fn mat_mul_f(x: &Mat2f, y: &Mat2f) -> Mat2f {
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// `n(x)·a(y)·k(θ)` with `a(y) = diag(√y, 1/√y)` and `k(θ)` the rotation by
/// `θ/2`.
pub fn iwasawa(x: f64, y: f64, theta: f64) -> Mat2f {
    let (s, c) = (theta / 2.0).sin_cos();
    let sy = y.sqrt();
    mat_mul_f(&[[sy, x / sy], [0.0, 1.0 / sy]], &[[c, -s], [s, c]])
}

/// `γ·g_l·a(e^t)` with `g_l = 𝔅_l / √det 𝔅_l`.
pub fn frame_from_position(l: usize, gamma: &Mat2, t: f64, cg: &ClassGroupData) -> Mat2f {
    let basis = cg.class(l).basis;
    let scale = basis.det().sigma1().sqrt();
    let g: Mat2f = [
        [basis.0[0][0].sigma1() / scale, basis.0[0][1].sigma1() / scale],
        [basis.0[1][0].sigma1() / scale, basis.0[1][1].sigma1() / scale],
    ];
    let gf: Mat2f = [[gamma.a as f64, gamma.b as f64], [gamma.c as f64, gamma.d as f64]];
    let a: Mat2f = [[(t / 2.0).exp(), 0.0], [0.0, (-t / 2.0).exp()]];
    mat_mul_f(&mat_mul_f(&gf, &g), &a)
}

/// Representative of the unique coset `Γ₀(n)·γ_l` whose geodesics carry the
/// roots with `m ≡ 0`, `μ ≡ ν (mod n)` of class `l`, taken from the smallest
/// such root with `m ≤ bound`. Returns the root alongside.
pub fn gamma_l_for(filter: CongruenceFilter, l: usize, cg: &ClassGroupData, bound: u64) -> Result<(Mat2, Root)> {
    let filter = filter.validate(cg.d)?;
    if filter.n == 1 && cg.class(l).m > 0 {
        let class = cg.class(l);
        let root = Root { m: class.m as u64, mu: class.mu.rem_euclid(class.m) as u64 };
        return Ok((root_to_address(root, cg)?.gamma, root));
    }
    let table = FactorTable::new(bound);
    let stream = RootEnumerator::new(cg.d, &table, filter);
    let chunk = 4096u64;
    let mut lo = 1;
    while lo <= bound {
        let hi = (lo + chunk - 1).min(bound);
        for root in stream.range(lo, hi)? {
            let addr = root_to_address(root, cg)?;
            if addr.l == l {
                return Ok((addr.gamma, root));
            }
        }
        lo = hi + 1;
    }
    Err(Error::NoFilteredRoot { n: filter.n, nu: filter.nu, l, bound })
}

/// `γ_l·M_l·γ_l⁻¹ ∈ Γ₀(n)`.
pub fn verify_lift(l: usize, n: u64, gamma_l: &Mat2, cg: &ClassGroupData) -> bool {
    let conj = *gamma_l * cg.class(l).stabilizer * gamma_l.inv();
    conj.det() == 1 && conj.c.rem_euclid(n as i128) == 0
}

/// Whether `Γ₀(n)·γ₁·Γ_l` and `Γ₀(n)·γ₂·Γ_l` agree, given that `Γ_l` is
/// conjugated into `Γ₀(n)` by `γ₂`.
pub fn same_gamma0_coset(g1: &Mat2, g2: &Mat2, n: u64) -> bool {
    (*g1 * g2.inv()).c.rem_euclid(n as i128) == 0
}
