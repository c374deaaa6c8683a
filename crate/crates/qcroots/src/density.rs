//! The limiting pair-correlation density `w_D`.
//!
//! `w(v)` is a sum over double cosets `Γ_{c₁} \ Γ / Γ_{c₂}` of a closed-form
//! kernel `H_±(q, v/κ)`. `q` depends only on the relative position of the
//! geodesics `c₁` and `γc₂`, and `±` records on which side of `c₁` the image
//! geodesic starts. Double cosets are enumerated as integer forms: the image
//! geodesic `γc₂` is the zero set of a form `(A, B, C)` of discriminant `4D`.
//! The stabilizer of `c₁` is quotiented out by an exact slice condition, and
//! `q` is the normalised bilinear pairing of that form with the form of `c₁`.
//!
//! ```
//! use qcroots::density::{h_closed, Sign};
//!
//! // Disjoint geodesics seen from the "+" side do not contribute for q < -1.
//! assert_eq!(h_closed(Sign::Plus, -2.0, 1.0), 0.0);
//! ```

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{roots_mod_m, CongruenceFilter, FactorTable, Root};
use crate::correspondence::gamma_l_for;
use crate::error::{Error, Result};
use crate::qfield::{ClassGroupData, Mat2, QForm, QuadInt, QuadMat};

/// Side of `c₁` on which the image geodesic starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.as_i8())
    }
}

/// `h_q(s) = log((s + q)/(1 − s²))`.
pub fn h_q(q: f64, s: f64) -> Result<f64> {
    let arg = (s + q) / (1.0 - s * s);
    if arg > 0.0 && arg.is_finite() {
        Ok(arg.ln())
    } else {
        Err(Error::Domain("h_q needs (s + q)/(1 - s^2) > 0"))
    }
}

fn radicand(q: f64, v: f64) -> Result<f64> {
    let r = v * v + q * q - 1.0;
    if r < 0.0 {
        Err(Error::Domain("v^2 + q^2 - 1 < 0"))
    } else {
        Ok(r.sqrt())
    }
}

/// `s₁(q, v) = (−q + √(v² + q² − 1))/(v + 1)`.
pub fn s1(q: f64, v: f64) -> Result<f64> {
    if v == -1.0 {
        return Err(Error::Domain("s1 is undefined at v = -1"));
    }
    Ok((-q + radicand(q, v)?) / (v + 1.0))
}

/// `s₂(q, v) = v − q − √(v² + q² − 1)`.
pub fn s2(q: f64, v: f64) -> Result<f64> {
    Ok(v - q - radicand(q, v)?)
}

fn diff_h(q: f64, hi: Result<f64>, lo: Result<f64>) -> f64 {
    match (hi.and_then(|s| h_q(q, s)), lo.and_then(|s| h_q(q, s))) {
        (Ok(a), Ok(b)) => a - b,
        _ => 0.0,
    }
}

/// `H_±(q, v, v)` from the explicit case tables.
pub fn h_closed(sign: Sign, q: f64, v: f64) -> f64 {
    let thr = (2.0 - 2.0 * q).max(0.0).sqrt();
    match sign {
        Sign::Plus => {
            if q < -1.0 {
                0.0
            } else if q < 1.0 {
                if v < thr {
                    0.0
                } else {
                    diff_h(q, s1(q, v), s2(q, v))
                }
            } else {
                diff_h(q, s1(q, v), Ok(-q + (q * q - 1.0).sqrt()))
            }
        }
        Sign::Minus => {
            if q < -1.0 {
                if v.abs() < thr {
                    0.0
                } else {
                    diff_h(q, s1(q, v), s2(q, v))
                }
            } else if q < 1.0 {
                if v < -thr {
                    diff_h(q, s1(q, v), s2(q, v))
                } else {
                    0.0
                }
            } else {
                diff_h(q, Ok(-q - (q * q - 1.0).sqrt()), s2(q, v))
            }
        }
    }
}

/// Real roots of `a s² + b s + c`, computed without cancellation.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let sgn = if b >= 0.0 { 1.0 } else { -1.0 };
    let t = -0.5 * (b + sgn * disc.sqrt());
    let mut out = vec![t / a];
    if t != 0.0 {
        out.push(c / t);
    }
    out
}

/// `H_±(q, v₁, v₂)` by direct integration of the defining integrals.
///
/// The integrand is an indicator times a smooth function, so the line is cut
/// at every point where an indicator can switch or the weight is singular and
/// each surviving piece is integrated with a double-exponential rule.
pub fn h_quadrature(sign: Sign, q: f64, v1: f64, v2: f64) -> Result<f64> {
    const TOL: f64 = 1e-12;
    let p = |s: f64| s * s + 2.0 * q * s + 1.0;
    let inside = |s: f64| {
        let ps = p(s);
        2.0 * v1 * (s + q) / ps >= 1.0 && v2 * (1.0 - s * s) / ps >= 1.0
    };
    let weight = |s: f64| (p(s) / ((s + q) * (s * s - 1.0))).abs();

    let mut cuts = vec![-q, -1.0, 1.0];
    cuts.extend(quadratic_roots(1.0, 2.0 * q - 2.0 * v1, 1.0 - 2.0 * v1 * q));
    cuts.extend(quadratic_roots(1.0 + v2, 2.0 * q, 1.0 - v2));
    cuts.extend(quadratic_roots(1.0, 2.0 * q, 1.0));
    let (lo, hi) = match sign {
        Sign::Plus => (-1.0, 1.0),
        Sign::Minus => {
            let far = 2.0 * cuts.iter().fold(1.0f64, |m, c| m.max(c.abs())) + 10.0;
            if inside(far) || inside(-far) {
                return Err(Error::Quadrature { tol: TOL, estimate: f64::INFINITY });
            }
            (-far, far)
        }
    };
    cuts.push(lo);
    cuts.push(hi);
    cuts.retain(|c| c.is_finite() && *c >= lo && *c <= hi);
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();

    let mut total = 0.0;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        if b - a <= 0.0 || (sign == Sign::Minus && mid.abs() < 1.0) || !inside(mid) {
            continue;
        }
        let out = quadrature::double_exponential::integrate(weight, a, b, TOL);
        total += out.integral;
        err += out.error_estimate;
    }
    if err > 1e-10 {
        return Err(Error::Quadrature { tol: 1e-10, estimate: err });
    }
    Ok(total)
}

/// `⟨f, g⟩ = b_f b_g − 2a_f c_g − 2c_f a_g`, the polarisation of the
/// discriminant.
pub fn pairing(f: &QForm, g: &QForm) -> i128 {
    f.b * g.b - 2 * f.a * g.c - 2 * f.c * g.a
}

/// `q = (r + 1)/(r − 1)` from the cross-ratio of the endpoints of `c₁` and
/// of the image geodesic, computed exactly. Endpoints are `[backward, forward]`.
pub fn cross_ratio_q(c1: [QuadInt; 2], g2: [QuadInt; 2]) -> Result<QuadInt> {
    let [c_m, c_p] = c1;
    let [g_m, g_p] = g2;
    let num = (g_p - c_m) * (g_m - c_p);
    let den = (g_p - c_p) * (g_m - c_m);
    let r = num * den.inv().ok_or(Error::Domain("coincident endpoints"))?;
    let one = QuadInt::int(1, r.field());
    Ok((r + one) * (r - one).inv().ok_or(Error::Domain("cross-ratio equals 1"))?)
}

/// A closed geodesic `c` through the top of the root `(m, μ)`, with its
/// endpoint form `(m, −2μ, (μ² − D)/m)` and primitive hyperbolic stabilizer.
#[derive(Debug, Clone, Serialize)]
pub struct Anchor {
    pub l: usize,
    pub m: i128,
    pub mu: i128,
    pub form: QForm,
    pub stabilizer: Mat2,
    /// `[backward, forward] = [(μ − √D)/m, (μ + √D)/m]`.
    #[serde(skip)]
    pub endpoints: [QuadInt; 2],
}

impl Anchor {
    pub fn new(l: usize, m: i128, mu: i128, eps0: QuadInt) -> Self {
        let d = eps0.field();
        let a = (mu * mu - d as i128) / m;
        let (x, y, _) = eps0.parts();
        Anchor {
            l,
            m,
            mu,
            form: QForm::new(m, -2 * mu, a),
            stabilizer: Mat2::new(x + y * mu, -y * a, y * m, x - y * mu),
            endpoints: [QuadInt::new(mu, -1, m, d), QuadInt::new(mu, 1, m, d)],
        }
    }

    fn frame(&self) -> QuadMat {
        let d = self.endpoints[0].field();
        let eta1 = QuadInt::new(self.mu, 1, 1, d);
        let eta2 = QuadInt::int(self.m, d);
        QuadMat([[eta1, eta1.conj()], [eta2, eta2.conj()]])
    }

    /// `σ₁` of `ψ(c⁻)/ψ(c⁺)` for the form `ψ`, as an exact field element.
    fn endpoint_ratio(&self, psi: &QForm) -> Option<QuadInt> {
        let lam = psi.eval_quad(self.endpoints[1]);
        Some(lam.conj() * lam.inv()?)
    }

    fn ratio_f64(&self, psi: &QForm) -> f64 {
        let e = |x: QuadInt| {
            let (a, b, den) = x.parts();
            let (a, b, den) = (a as f64, b as f64, den as f64);
            let r = (a + b * (x.field() as f64).sqrt()) / den;
            let w = (a - b * (x.field() as f64).sqrt()) / den;
            (r, w)
        };
        let (cp, cm) = e(self.endpoints[1]);
        let f = |z: f64| (psi.a as f64) * z * z + (psi.b as f64) * z + psi.c as f64;
        (f(cm) / f(cp)).abs()
    }
}

/// Whether the endpoint ratio of `psi` lies in `[ε₀⁻², ε₀²)`, a fundamental
/// domain for the stabilizer of the anchor (which scales it by `ε₀^{±4}`).
pub fn in_slice(anchor: &Anchor, psi: &QForm, eps0: QuadInt) -> bool {
    let Some(x) = anchor.endpoint_ratio(psi) else { return false };
    let x = if x.sign1() == Ordering::Less { -x } else { x };
    let e2 = eps0 * eps0;
    x.cmp1(&e2.conj()) != Ordering::Less && x.cmp1(&e2) == Ordering::Less
}

/// Moves `psi` into the slice of `anchor` by a power of its stabilizer.
/// `None` for the anchor's own form and its reversal, which have no slice.
pub fn slice_form(anchor: &Anchor, psi: &QForm, eps0: QuadInt) -> Option<QForm> {
    if *psi == anchor.form || *psi == anchor.form.neg() {
        return None;
    }
    let m = anchor.stabilizer;
    let r0 = anchor.ratio_f64(psi).ln();
    let step = anchor.ratio_f64(&psi.transport(&m)).ln() - r0;
    let k0 = (-r0 / step).round() as i64;
    for dk in [0, -1, 1, -2, 2] {
        let cand = psi.transport(&m.pow(k0 + dk));
        if in_slice(anchor, &cand, eps0) {
            return Some(cand);
        }
    }
    panic!("no stabilizer power moves {psi:?} into the slice");
}

/// One double coset `Γ_{c₁} γ Γ_{c₂}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoubleCosetRep {
    pub l1: usize,
    pub l2: usize,
    /// Endpoint form of `γc₂`, normalised into the slice of `c₁`.
    pub form: QForm,
    /// `γ` with `c₂`'s form transported by `γ` equal to `form`, of least
    /// Frobenius norm in `γΓ_{c₂}`.
    pub gamma: Mat2,
    /// `q = pairing / 4D` exactly.
    pub pairing: i128,
    pub q: f64,
    pub sign: Sign,
}

/// Sign of `(g₁⁻¹ γ g₂)(0)` with `g_i` the frames of the anchors, exactly.
pub fn coset_sign(a1: &Anchor, a2: &Anchor, gamma: &Mat2) -> Sign {
    let d = a1.endpoints[0].field();
    let h = a1.frame().inv().expect("frames are invertible") * QuadMat::from_int(gamma, d) * a2.frame();
    let [[_, b], [_, dd]] = h.0;
    if b.sign1() == dd.sign1() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Endpoint rule for the sign: `+` iff the backward endpoint of `psi` lies
/// strictly between the endpoints of `c₁`.
pub fn endpoint_sign(a1: &Anchor, psi: &QForm) -> Sign {
    let w = psi.backward_root(a1.endpoints[0].field());
    if a1.form.eval_quad(w).sign1() == Ordering::Less {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn ceil_bound(x: f64) -> i128 {
    x.ceil() as i128 + 1
}

/// Anchors for all classes at level `n`: the class geodesics themselves when
/// `n = 1`, otherwise the geodesics of the smallest filtered roots.
pub fn anchors(cg: &ClassGroupData, filter: CongruenceFilter) -> Result<Vec<Anchor>> {
    cg.classes
        .iter()
        .map(|class| {
            if filter.n == 1 {
                return Ok(Anchor::new(class.index, class.m, class.mu, cg.eps0));
            }
            let bound = 1_000_000u64.max(filter.n * 10_000);
            let (_, root): (Mat2, Root) = gamma_l_for(filter, class.index, cg, bound)?;
            Ok(Anchor::new(class.index, root.m as i128, root.mu as i128, cg.eps0))
        })
        .collect()
}

/// Upper bound on the number of box rows before enumeration refuses to run.
pub const BOX_BUDGET: i128 = 50_000_000;

/// All double cosets with `|q| ≤ q_cutoff` at level `n`, each exactly once,
/// sorted by `(l₁, l₂, form)`.
pub fn enumerate_double_cosets(
    cg: &ClassGroupData,
    filter: CongruenceFilter,
    q_cutoff: f64,
) -> Result<(Vec<Anchor>, Vec<DoubleCosetRep>)> {
    let anchors = anchors(cg, filter)?;
    let d = cg.d.get();
    let n = filter.n as i128;
    let target_beta = (-(filter.nu as i128)).rem_euclid(n);
    let eps = cg.eps0.sigma1();
    let sd = (d as f64).sqrt();
    let q_max = q_cutoff.max(1.0);
    let pair_max = (4.0 * d as f64 * q_cutoff).floor() as i128;

    // Class form of each anchor, to express cosets through γ.
    let anchor_moves: Vec<Mat2> = anchors
        .iter()
        .map(|a| {
            let (l, g) = cg.classify(&a.form)?;
            debug_assert_eq!(l, a.l);
            Ok(g)
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for a1 in &anchors {
        // In coordinates where c₁ runs from 0 to ∞ the candidate is
        // (A'', qm, C'') with A''C'' = m²(q² − 1)/4 and |A''/C''| ∈ [ε⁻², ε²).
        let m = a1.m as f64;
        let (cp, cm) = ((a1.mu as f64 + sd) / m, (a1.mu as f64 - sd) / m);
        let bq = m * q_max;
        let ac = 0.5 * m * eps * q_max;
        let slack = 1.0 + 1e-9;
        let xa = ceil_bound((2.0 * ac + bq) * slack);
        let xb = ceil_bound((2.0 * (cp.abs() + cm.abs()) * ac + bq * (cp + cm).abs()) * slack);
        let xc = ceil_bound(((cp * cp + cm * cm) * ac + bq * (cp * cm).abs()) * slack);
        if xa > BOX_BUDGET || xb > 2 * BOX_BUDGET {
            return Err(Error::Budget { what: "double-coset box", budget: BOX_BUDGET as u64 });
        }
        let table = FactorTable::new(xa as u64);
        let half_b = xb / 2 + 1;
        let found: Vec<(QForm, i128)> = (1..=xa)
            .into_par_iter()
            .filter(|a| a % n == 0)
            .flat_map_iter(|a_abs| {
                let roots = roots_mod_m(cg.d, a_abs as u64, &table).expect("modulus within table");
                let mut local = Vec::new();
                for r in roots {
                    let r = r as i128;
                    if r.rem_euclid(n) != target_beta {
                        continue;
                    }
                    let k_lo = (-half_b - r).div_euclid(a_abs);
                    let k_hi = (half_b - r).div_euclid(a_abs) + 1;
                    for k in k_lo..=k_hi {
                        let beta = r + k * a_abs;
                        if beta.abs() > half_b {
                            continue;
                        }
                        for a in [a_abs, -a_abs] {
                            let c = (beta * beta - d as i128) / a;
                            if c.abs() > xc {
                                continue;
                            }
                            let psi = QForm::new(a, 2 * beta, c);
                            let p = pairing(&a1.form, &psi);
                            if p.abs() > pair_max || psi == a1.form || psi == a1.form.neg() {
                                continue;
                            }
                            if in_slice(a1, &psi, cg.eps0) {
                                local.push((psi, p));
                            }
                        }
                    }
                }
                local
            })
            .collect();

        let mut reps: Vec<DoubleCosetRep> = found
            .into_par_iter()
            .map(|(psi, p)| {
                let (l2, g) = cg.classify(&psi)?;
                let a2 = &anchors[l2 - 1];
                // psi = anchor₂ · (g · g_a⁻¹) in the row action; transport uses
                // the inverse transpose.
                let z = g * anchor_moves[l2 - 1].inv();
                let gamma = canonical_gamma(z.inv().transpose(), &a2.stabilizer);
                debug_assert_eq!(a2.form.transport(&gamma), psi);
                Ok(DoubleCosetRep {
                    l1: a1.l,
                    l2,
                    form: psi,
                    gamma,
                    pairing: p,
                    q: p as f64 / (4 * d) as f64,
                    sign: coset_sign(a1, a2, &gamma),
                })
            })
            .collect::<Result<_>>()?;
        reps.sort_by_key(|x| (x.l2, x.form));
        out.extend(reps);
    }
    Ok((anchors, out))
}

fn canonical_gamma(gamma: Mat2, stab: &Mat2) -> Mat2 {
    let key = |g: &Mat2| (g.frob2(), g.rows());
    let inv = stab.inv();
    let mut cur = gamma;
    loop {
        let up = cur * *stab;
        let down = cur * inv;
        if key(&up) < key(&cur) {
            cur = up;
        } else if key(&down) < key(&cur) {
            cur = down;
        } else {
            return cur;
        }
    }
}

fn mobius(g: &Mat2, z: (f64, f64)) -> (f64, f64) {
    // (az + b)/(cz + d) for z = x + iy.
    let (x, y) = z;
    let (a, b, c, d) = (g.a as f64, g.b as f64, g.c as f64, g.d as f64);
    let den = (c * x + d).powi(2) + (c * y).powi(2);
    let re = ((a * x + b) * (c * x + d) + a * c * y * y) / den;
    (re, y / den)
}

fn hyperbolic_distance(z: (f64, f64), w: (f64, f64)) -> f64 {
    let dx = z.0 - w.0;
    let dy = z.1 - w.1;
    (1.0 + (dx * dx + dy * dy) / (2.0 * z.1 * w.1)).acosh()
}

/// Breadth-first oracle for level one: walks words in `S`, `T`, `T⁻¹`,
/// keeping group elements that move the top of `c₂` to within a radius of
/// the top of `c₁` large enough for every coset with `|q| ≤ q_cutoff`, and
/// returns the slice-normalised forms `(l₁, l₂, form)`.
pub fn bfs_double_cosets(cg: &ClassGroupData, q_cutoff: f64, slack: f64) -> BTreeSet<(usize, usize, QForm)> {
    let anchors: Vec<Anchor> =
        cg.classes.iter().map(|c| Anchor::new(c.index, c.m, c.mu, cg.eps0)).collect();
    let d = cg.d.get();
    let sd = (d as f64).sqrt();
    let radius = q_cutoff.max(1.0).acosh() + 2.0 * cg.eps0.sigma1().ln() + slack;
    let pair_max = (4.0 * d as f64 * q_cutoff).floor() as i128;
    let top = |a: &Anchor| (a.mu as f64 / a.m as f64, sd / a.m as f64);
    let mut out = BTreeSet::new();
    for a1 in &anchors {
        for a2 in &anchors {
            let (z1, z2) = (top(a1), top(a2));
            let norm = |g: Mat2| if (g.c, g.d) < (0, 0) { g.neg() } else { g };
            let mut seen: HashSet<Mat2> = HashSet::new();
            let mut queue = VecDeque::from([Mat2::IDENTITY]);
            seen.insert(Mat2::IDENTITY);
            while let Some(g) = queue.pop_front() {
                if let Some(psi) = slice_form(a1, &a2.form.transport(&g), cg.eps0) {
                    if pairing(&a1.form, &psi).abs() <= pair_max {
                        out.insert((a1.l, a2.l, psi));
                    }
                }
                for s in [Mat2::S, Mat2::T, Mat2::T.inv()] {
                    let h = norm(g * s);
                    if seen.contains(&h) || hyperbolic_distance(z1, mobius(&h, z2)) > radius {
                        continue;
                    }
                    seen.insert(h);
                    queue.push_back(h);
                }
            }
        }
    }
    out
}

/// `[SL(2, ℤ) : Γ₀(n)] = n ∏_{p | n} (1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    let mut idx = n;
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            idx = idx / p * (p + 1);
            while rest.is_multiple_of(p) {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        idx = idx / rest * (rest + 1);
    }
    idx
}

/// Hyperbolic area of `Γ₀(n) \ ℍ`.
pub fn volume(n: u64) -> f64 {
    PI / 3.0 * gamma0_index(n) as f64
}

/// `κ = ℓ / (2π·vol)` with `ℓ = 2h⁺ log ε₀`.
pub fn kappa_gamma(cg: &ClassGroupData, n: u64) -> f64 {
    cg.total_length() / (2.0 * PI * volume(n))
}

/// The two candidate prefactors of the coset sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `1/(2π·vol·v²)`: the pair intensity rescaled by `κ`.
    Composed,
    /// `1/(vol·v²)`.
    Printed,
}

impl Normalization {
    fn constant(self, volume: f64) -> f64 {
        match self {
            Normalization::Composed => 1.0 / (2.0 * PI * volume),
            Normalization::Printed => 1.0 / volume,
        }
    }
}

/// How the prefactor was chosen: the density of a process whose intensity is
/// Lebesgue measure must tend to 1 at large separations.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizationReport {
    pub choice: Normalization,
    pub v_range: [f64; 2],
    pub composed_mean: f64,
    pub printed_mean: f64,
}

/// `w` at one point with its estimated truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Neumaier summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Everything needed to evaluate `w_D` at level `n`.
#[derive(Debug, Clone, Serialize)]
pub struct DensityProfile {
    pub d: i64,
    pub n: u64,
    pub nu: u64,
    pub q_cutoff: f64,
    pub h_plus: usize,
    pub eps0: QuadInt,
    pub kappa: f64,
    pub ell: f64,
    pub volume: f64,
    pub anchors: Vec<Anchor>,
    #[serde(skip)]
    pub cosets: Vec<DoubleCosetRep>,
    pub normalization: NormalizationReport,
}

impl DensityProfile {
    pub fn build(cg: &ClassGroupData, filter: CongruenceFilter, q_cutoff: f64) -> Result<Self> {
        if q_cutoff <= 1.0 {
            return Err(Error::Domain("the q cutoff must exceed 1"));
        }
        let filter = filter.validate(cg.d)?;
        let (anchors, cosets) = enumerate_double_cosets(cg, filter, q_cutoff)?;
        let mut profile = DensityProfile {
            d: cg.d.get(),
            n: filter.n,
            nu: filter.nu,
            q_cutoff,
            h_plus: cg.h_plus,
            eps0: cg.eps0,
            kappa: kappa_gamma(cg, filter.n),
            ell: cg.total_length(),
            volume: volume(filter.n),
            anchors,
            cosets,
            normalization: NormalizationReport {
                choice: Normalization::Composed,
                v_range: [3.0, 4.0],
                composed_mean: f64::NAN,
                printed_mean: f64::NAN,
            },
        };
        profile.normalization = profile.select_normalization();
        Ok(profile)
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.len()
    }

    fn select_normalization(&self) -> NormalizationReport {
        let [lo, hi] = [3.0, 4.0];
        let grid: Vec<f64> = (0..=20).map(|i| lo + (hi - lo) * i as f64 / 20.0).collect();
        let mean = |norm| grid.iter().map(|&v| self.w_with(v, norm).value).sum::<f64>() / grid.len() as f64;
        let composed_mean = mean(Normalization::Composed);
        let printed_mean = mean(Normalization::Printed);
        let choice = if (composed_mean - 1.0).abs() <= (printed_mean - 1.0).abs() {
            Normalization::Composed
        } else {
            Normalization::Printed
        };
        NormalizationReport { choice, v_range: [lo, hi], composed_mean, printed_mean }
    }

    /// `w(v)` under the selected normalization.
    pub fn w(&self, v: f64) -> WValue {
        self.w_with(v, self.normalization.choice)
    }

    /// The sum truncated at `|q| ≤ Q`. The tail is estimated from the last
    /// dyadic block `Q/2 < |q| ≤ Q`: each term decays like `v²/q²` and the
    /// number of cosets grows linearly, so the tail is about as large as that
    /// block; the bound doubles it.
    pub fn w_with(&self, v: f64, norm: Normalization) -> WValue {
        if v == 0.0 {
            return self.w_at_zero_with(norm);
        }
        let x = v / self.kappa;
        let mut all = KahanSum::default();
        let mut block = KahanSum::default();
        for c in &self.cosets {
            let h = h_closed(c.sign, c.q, x);
            all.add(h);
            if c.q.abs() > 0.5 * self.q_cutoff {
                block.add(h);
            }
        }
        let pre = norm.constant(self.volume) / (v * v);
        WValue { value: pre * all.value(), tail_bound: 2.0 * pre * block.value().abs() }
    }

    /// `w(0)` from the small-`v` expansion `H ≈ (q − √(q² − 1))/(2√(q² − 1))·v²`
    /// over cosets with `q > 1`.
    pub fn w_at_zero(&self) -> WValue {
        self.w_at_zero_with(self.normalization.choice)
    }

    fn w_at_zero_with(&self, norm: Normalization) -> WValue {
        let mut all = KahanSum::default();
        let mut block = KahanSum::default();
        for c in self.cosets.iter().filter(|c| c.q > 1.0) {
            let r = (c.q * c.q - 1.0).sqrt();
            let t = (c.q - r) / (2.0 * r);
            all.add(t);
            if c.q > 0.5 * self.q_cutoff {
                block.add(t);
            }
        }
        let pre = norm.constant(self.volume) / (self.kappa * self.kappa);
        WValue { value: pre * all.value(), tail_bound: 2.0 * pre * block.value() }
    }

    /// Mean of `w` over `[lo, hi)` by the midpoint rule on `samples` points.
    pub fn bin_average(&self, lo: f64, hi: f64, samples: usize) -> WValue {
        let mut value = 0.0;
        let mut tail: f64 = 0.0;
        for i in 0..samples {
            let v = lo + (hi - lo) * (i as f64 + 0.5) / samples as f64;
            let w = self.w(v);
            value += w.value;
            tail = tail.max(w.tail_bound);
        }
        WValue { value: value / samples as f64, tail_bound: tail }
    }
}

/// `#roots·√D/(κ·M)`, which tends to 1 as the modulus bound `M` grows.
pub fn intensity_ratio(count: usize, d: i64, kappa: f64, max_m: u64) -> f64 {
    count as f64 * (d as f64).sqrt() / (kappa * max_m as f64)
}
