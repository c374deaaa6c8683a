//! Exact arithmetic in `ℚ(√D)` for `D > 0`, indefinite binary quadratic forms
//! and the narrow class data built from them.
//!
//! Every narrow ideal class of `ℤ[√D]` is represented by a cycle of reduced
//! forms of discriminant `4D`. The lexicographically least form `(A, B, C)` of
//! a cycle has `A < 0 < C`; it is read as the root `(m, μ) = (C, B/2)`, whose
//! ideal `ℤ(√D + μ) + ℤm` is the class representative.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::arith::{isqrt, Discriminant};
use crate::error::{Error, Result};

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(a + b√D) / den` in lowest terms with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadInt {
    a: i128,
    b: i128,
    den: i128,
    d: i64,
}

impl QuadInt {
    pub fn new(a: i128, b: i128, den: i128, d: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let s = if den < 0 { -1 } else { 1 };
        let g = gcd(gcd(a, b), den);
        QuadInt { a: s * a / g, b: s * b / g, den: s * den / g, d }
    }

    pub fn int(n: i128, d: i64) -> Self {
        QuadInt { a: n, b: 0, den: 1, d }
    }

    pub fn sqrt_d(d: i64) -> Self {
        QuadInt { a: 0, b: 1, den: 1, d }
    }

    pub fn parts(&self) -> (i128, i128, i128) {
        (self.a, self.b, self.den)
    }

    pub fn field(&self) -> i64 {
        self.d
    }

    pub fn conj(&self) -> Self {
        QuadInt { b: -self.b, ..*self }
    }

    /// The norm `σ₁·σ₂` as a reduced fraction `(num, den)`.
    pub fn norm(&self) -> (i128, i128) {
        let num = self.a * self.a - self.b * self.b * self.d as i128;
        let den = self.den * self.den;
        let g = gcd(num, den);
        (num / g, den / g)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `Some(n)` when the value is the rational integer `n`.
    pub fn as_integer(&self) -> Option<i128> {
        (self.b == 0 && self.den == 1).then_some(self.a)
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        assert_eq!(self.d, o.d, "mixed quadratic fields");
        let d = self.d as i128;
        let a = self.a.checked_mul(o.a)?.checked_add(self.b.checked_mul(o.b)?.checked_mul(d)?)?;
        let b = self.a.checked_mul(o.b)?.checked_add(self.b.checked_mul(o.a)?)?;
        Some(QuadInt::new(a, b, self.den.checked_mul(o.den)?, self.d))
    }

    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        assert_eq!(self.d, o.d, "mixed quadratic fields");
        let a = self.a.checked_mul(o.den)?.checked_add(o.a.checked_mul(self.den)?)?;
        let b = self.b.checked_mul(o.den)?.checked_add(o.b.checked_mul(self.den)?)?;
        Some(QuadInt::new(a, b, self.den.checked_mul(o.den)?, self.d))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // 1/x = conj(x) / N(x)
        let (n, nd) = self.norm();
        let c = self.conj();
        Some(QuadInt::new(c.a * nd, c.b * nd, c.den * n, self.d))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = *self;
        let mut acc = QuadInt::int(1, self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Sign of `a + b√D` decided by comparing `a²` with `b²D`.
    fn sign_of(a: i128, b: i128, d: i64) -> Ordering {
        match (a.cmp(&0), b.cmp(&0)) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (sa, sb) if sa == sb => sa,
            (sa, _) => {
                // Opposite signs: the larger magnitude wins.
                let lhs = a * a;
                let rhs = b * b * d as i128;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Sign of the first embedding `(a + b√D)/den`.
    pub fn sign1(&self) -> Ordering {
        Self::sign_of(self.a, self.b, self.d)
    }

    /// Sign of the second embedding `(a − b√D)/den`.
    pub fn sign2(&self) -> Ordering {
        Self::sign_of(self.a, -self.b, self.d)
    }

    pub fn is_totally_positive(&self) -> bool {
        self.sign1() == Ordering::Greater && self.sign2() == Ordering::Greater
    }

    /// Exact comparison of first embeddings.
    pub fn cmp1(&self, o: &Self) -> Ordering {
        (*self - *o).sign1()
    }

    fn embed(a: i128, b: i128, den: i128, d: i64) -> f64 {
        let sd = (d as f64).sqrt();
        if a.signum() * b.signum() >= 0 {
            return (a as f64 + b as f64 * sd) / den as f64;
        }
        // a + b√D = (a² − b²D)/(a − b√D) avoids cancellation.
        match a
            .checked_mul(a)
            .zip(b.checked_mul(b).and_then(|x| x.checked_mul(d as i128)))
        {
            Some((aa, bb)) => (aa - bb) as f64 / ((a as f64 - b as f64 * sd) * den as f64),
            None => (a as f64 + b as f64 * sd) / den as f64,
        }
    }

    pub fn sigma1(&self) -> f64 {
        Self::embed(self.a, self.b, self.den, self.d)
    }

    pub fn sigma2(&self) -> f64 {
        Self::embed(self.a, -self.b, self.den, self.d)
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: QuadInt) -> QuadInt {
        self.checked_add(&o).expect("QuadInt overflow in addition")
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: QuadInt) -> QuadInt {
        self + (-o)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { a: -self.a, b: -self.b, ..self }
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, o: QuadInt) -> QuadInt {
        self.checked_mul(&o).expect("QuadInt overflow in multiplication")
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b < 0 { '-' } else { '+' };
        let body = format!("{}{}{}*sqrt({})", self.a, sign, self.b.abs(), self.d);
        if self.den == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

impl Serialize for QuadInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Integer 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1, b: 0, c: 0, d: 1 };
    /// `S = [[0, -1], [1, 0]]`.
    pub const S: Mat2 = Mat2 { a: 0, b: -1, c: 1, d: 0 };
    /// `T = [[1, 1], [0, 1]]`.
    pub const T: Mat2 = Mat2 { a: 1, b: 1, c: 0, d: 1 };

    pub const fn new(a: i128, b: i128, c: i128, d: i128) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i128 {
        self.a + self.d
    }

    /// Inverse of a determinant-one matrix.
    pub fn inv(&self) -> Mat2 {
        debug_assert_eq!(self.det(), 1);
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Squared Frobenius norm.
    pub fn frob2(&self) -> i128 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn pow(&self, k: i64) -> Mat2 {
        let base = if k < 0 { self.inv() } else { *self };
        let mut acc = Mat2::IDENTITY;
        for _ in 0..k.unsigned_abs() {
            acc = acc * base;
        }
        acc
    }

    pub fn apply(&self, v: (i128, i128)) -> (i128, i128) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    pub fn rows(&self) -> [[i128; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn checked_mul(&self, o: &Mat2) -> Option<Mat2> {
        let dot = |x: i128, y: i128, z: i128, w: i128| x.checked_mul(y)?.checked_add(z.checked_mul(w)?);
        Some(Mat2::new(
            dot(self.a, o.a, self.b, o.c)?,
            dot(self.a, o.b, self.b, o.d)?,
            dot(self.c, o.a, self.d, o.c)?,
            dot(self.c, o.b, self.d, o.d)?,
        ))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        self.checked_mul(&o).expect("Mat2 overflow")
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

/// 2×2 matrix over `ℚ(√D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadMat(pub [[QuadInt; 2]; 2]);

impl QuadMat {
    pub fn from_int(m: &Mat2, d: i64) -> Self {
        let q = |x| QuadInt::int(x, d);
        QuadMat([[q(m.a), q(m.b)], [q(m.c), q(m.d)]])
    }

    pub fn det(&self) -> QuadInt {
        let [[a, b], [c, d]] = self.0;
        a * d - b * c
    }

    pub fn inv(&self) -> Option<QuadMat> {
        let [[a, b], [c, d]] = self.0;
        let k = self.det().inv()?;
        Some(QuadMat([[d * k, -b * k], [-c * k, a * k]]))
    }

    pub fn diag(x: QuadInt, y: QuadInt) -> Self {
        let z = QuadInt::int(0, x.field());
        QuadMat([[x, z], [z, y]])
    }

    /// `Some` when every entry is a rational integer.
    pub fn to_int(&self) -> Option<Mat2> {
        let [[a, b], [c, d]] = self.0;
        Some(Mat2::new(a.as_integer()?, b.as_integer()?, c.as_integer()?, d.as_integer()?))
    }
}

impl Mul for QuadMat {
    type Output = QuadMat;
    fn mul(self, o: QuadMat) -> QuadMat {
        let [[a, b], [c, d]] = self.0;
        let [[e, f], [g, h]] = o.0;
        QuadMat([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]])
    }
}

/// Fundamental totally positive unit `ε₀ = x + y√D > 1` with norm one.
///
/// Walks the continued fraction of `√D` to the first convergent `p/q` with
/// `p² − Dq² = ±1`, squaring the unit when its norm is `−1`.
pub fn pell_fundamental(d: Discriminant) -> Result<QuadInt> {
    let dv = d.get();
    if dv <= 0 {
        return Err(Error::NotRealQuadratic(dv));
    }
    let di = dv as i128;
    let a0 = isqrt(dv as u64) as i128;
    let (mut m, mut den, mut a) = (0i128, 1i128, a0);
    let (mut p_prev, mut p) = (1i128, a0);
    let (mut q_prev, mut q) = (0i128, 1i128);
    let ovf = || Error::Overflow("pell_fundamental");
    loop {
        let norm = p
            .checked_mul(p)
            .and_then(|pp| q.checked_mul(q)?.checked_mul(di).map(|qq| pp - qq))
            .ok_or_else(ovf)?;
        if norm == 1 {
            return Ok(QuadInt::new(p, q, 1, dv));
        }
        if norm == -1 {
            let x = p.checked_mul(p).and_then(|pp| pp.checked_add(q.checked_mul(q)?.checked_mul(di)?));
            let y = p.checked_mul(q).and_then(|pq| pq.checked_mul(2));
            return Ok(QuadInt::new(x.ok_or_else(ovf)?, y.ok_or_else(ovf)?, 1, dv));
        }
        m = den * a - m;
        den = (di - m * m) / den;
        a = (a0 + m) / den;
        let p_next = a.checked_mul(p).and_then(|x| x.checked_add(p_prev)).ok_or_else(ovf)?;
        let q_next = a.checked_mul(q).and_then(|x| x.checked_add(q_prev)).ok_or_else(ovf)?;
        (p_prev, p) = (p, p_next);
        (q_prev, q) = (q, q_next);
    }
}

/// The integral binary quadratic form `aX² + bXY + cY²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl QForm {
    pub const fn new(a: i128, b: i128, c: i128) -> Self {
        QForm { a, b, c }
    }

    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn eval_quad(&self, x: QuadInt) -> QuadInt {
        let d = x.field();
        QuadInt::int(self.a, d) * x * x + QuadInt::int(self.b, d) * x + QuadInt::int(self.c, d)
    }

    pub fn neg(&self) -> QForm {
        QForm::new(-self.a, -self.b, -self.c)
    }

    pub fn coeffs(&self) -> [i128; 3] {
        [self.a, self.b, self.c]
    }

    /// The form `v ↦ f(v·s)` for row vectors `v = (x, y)`.
    ///
    /// Composition reverses order: `f.compose(s).compose(t) == f.compose(t * s)`.
    pub fn compose(&self, s: &Mat2) -> QForm {
        QForm::new(
            self.eval(s.a, s.b),
            2 * self.a * s.a * s.c + self.b * (s.a * s.d + s.b * s.c) + 2 * self.c * s.b * s.d,
            self.eval(s.c, s.d),
        )
    }

    /// The form `v ↦ f(g⁻¹·v)` for column vectors; its roots are `g` applied to
    /// the roots of `f`.
    pub fn transport(&self, g: &Mat2) -> QForm {
        self.compose(&g.inv().transpose())
    }

    /// Forward endpoint `(−b + √disc)/(2a)` of the oriented geodesic of the form.
    /// The discriminant must be `4D`.
    pub fn forward_root(&self, d: i64) -> QuadInt {
        QuadInt::new(-self.b / 2, 1, self.a, d)
    }

    /// Backward endpoint `(−b − √disc)/(2a)`.
    pub fn backward_root(&self, d: i64) -> QuadInt {
        QuadInt::new(-self.b / 2, -1, self.a, d)
    }

    /// Reducedness for discriminant `4D`: `0 < b < √(4D)` and
    /// `|√(4D) − 2|a|| < b`.
    pub fn is_reduced(&self, d: i64) -> bool {
        let s = isqrt(4 * d as u64) as i128;
        let twice_a = 2 * self.a.abs();
        self.b > 0 && self.b <= s && twice_a + self.b > s && twice_a - self.b <= s
    }

    /// One reduction step `(a, b, c) → (c, b', ·)` with `b' ≡ −b (mod 2c)`.
    /// Returns the new form and the step matrix `[[0, 1], [−1, t]]`.
    pub fn rho(&self, d: i64) -> (QForm, Mat2) {
        let delta = 4 * d as i128;
        let s = isqrt(delta as u64) as i128;
        let c = self.c;
        let ac = c.abs();
        let two_c = 2 * ac;
        let b_new = if ac > s {
            let r = (-self.b).rem_euclid(two_c);
            if r > ac {
                r - two_c
            } else {
                r
            }
        } else {
            s - (s + self.b).rem_euclid(two_c)
        };
        let t = (b_new + self.b) / (2 * c);
        let step = Mat2::new(0, 1, -1, t);
        let next = self.compose(&step);
        debug_assert_eq!(next.b, b_new);
        (next, step)
    }

    /// A reduced form `g` in the cycle of `self` with a transcript `t` such that
    /// `self.compose(&t) == g`.
    pub fn reduce(&self, d: i64) -> (QForm, Mat2) {
        let mut f = *self;
        let mut t = Mat2::IDENTITY;
        let mut steps = 0u32;
        while !f.is_reduced(d) {
            let (g, s) = f.rho(d);
            f = g;
            t = s * t;
            steps += 1;
            assert!(steps < 100_000, "reduction failed to terminate for {self:?}");
        }
        (f, t)
    }
}

/// Data attached to one narrow ideal class.
#[derive(Debug, Clone)]
pub struct GeodesicClass {
    /// Index `l`, starting at 1.
    pub index: usize,
    /// Lexicographically least reduced form `(A, 2μ_l, m_l)` of the cycle.
    pub form: QForm,
    /// The reduction cycle, starting at `form`.
    pub cycle: Vec<QForm>,
    /// `m_l` and `μ_l` of the representative ideal `ℤ(√D + μ_l) + ℤm_l`.
    pub m: i128,
    pub mu: i128,
    /// Rows are the two embeddings of `β₁ = √D + μ_l` and `β₂ = m_l`.
    pub basis: QuadMat,
    /// Dual basis `β̄₁ = (μ_l − √D)/m_l`, `β̄₂ = 1` of the inverse ideal.
    pub dual_basis: [QuadInt; 2],
    /// Generator of the stabilizer of the geodesic.
    pub stabilizer: Mat2,
    /// Pairing matrices `B_{l1}`, `B_{l2}` (row `j` holds the `√D` and rational
    /// coefficients of `β̄_i β_j`) and the unimodular `B_l`.
    pub pairing: [Mat2; 2],
    pub pairing_unimodular: Mat2,
    /// Backward and forward endpoints `(μ_l ∓ √D)/m_l`.
    pub endpoints: [QuadInt; 2],
}

impl GeodesicClass {
    /// The form `m_l X² − 2μ_l XY + A Y²` whose roots are the endpoints, with
    /// the forward endpoint as first root.
    pub fn endpoint_form(&self) -> QForm {
        QForm::new(self.form.c, -self.form.b, self.form.a)
    }
}

/// Narrow class group data for discriminant `4D`.
#[derive(Debug, Clone)]
pub struct ClassGroupData {
    pub d: Discriminant,
    pub h_plus: usize,
    pub eps0: QuadInt,
    pub classes: Vec<GeodesicClass>,
    /// Reduced form → (class position, transcript from the class form).
    lookup: HashMap<QForm, (usize, Mat2)>,
}

/// All reduced forms of discriminant `4D`.
pub fn reduced_forms(d: i64) -> Vec<QForm> {
    let delta = 4 * d as i128;
    let s = isqrt(delta as u64) as i128;
    let mut out = Vec::new();
    for b in (2..=s).step_by(2) {
        let ac = (b * b - delta) / 4;
        for a_abs in 1..=ac.abs() {
            if ac % a_abs != 0 {
                continue;
            }
            for a in [a_abs, -a_abs] {
                let f = QForm::new(a, b, ac / a);
                if f.is_reduced(d) {
                    out.push(f);
                }
            }
        }
    }
    out.sort();
    out
}

impl ClassGroupData {
    pub fn new(d: Discriminant) -> Result<Self> {
        let dv = d.get();
        if dv <= 0 {
            return Err(Error::NotRealQuadratic(dv));
        }
        let eps0 = pell_fundamental(d)?;
        let mut remaining = reduced_forms(dv);
        let mut lookup = HashMap::new();
        let mut classes = Vec::new();
        while let Some(&start) = remaining.first() {
            let mut cycle = vec![start];
            let mut f = start;
            loop {
                f = f.rho(dv).0;
                if f == start {
                    break;
                }
                cycle.push(f);
            }
            // `remaining` is sorted, so `start` is the lexicographic minimum.
            remaining.retain(|g| !cycle.contains(g));
            let pos = classes.len();
            let mut t = Mat2::IDENTITY;
            for (j, g) in cycle.iter().enumerate() {
                if j > 0 {
                    t = cycle[j - 1].rho(dv).1 * t;
                }
                debug_assert_eq!(start.compose(&t), *g);
                lookup.insert(*g, (pos, t));
            }
            classes.push(build_class(pos + 1, start, cycle, eps0)?);
        }
        Ok(ClassGroupData { d, h_plus: classes.len(), eps0, classes, lookup })
    }

    /// Total length `ℓ = 2 h⁺ log ε₀` of the class geodesics.
    pub fn total_length(&self) -> f64 {
        2.0 * self.h_plus as f64 * self.eps0.sigma1().ln()
    }

    pub fn class(&self, l: usize) -> &GeodesicClass {
        &self.classes[l - 1]
    }

    /// Class index `l` and `g` with `f == form_l.compose(&g)`.
    pub fn classify(&self, f: &QForm) -> Result<(usize, Mat2)> {
        let (r, t) = f.reduce(self.d.get());
        let &(pos, s) = self.lookup.get(&r).ok_or(Error::NoClassMatch(r.coeffs()))?;
        // f·T = r = form·S, so f = form·(T⁻¹S).
        Ok((pos + 1, t.inv() * s))
    }
}

fn build_class(index: usize, form: QForm, cycle: Vec<QForm>, eps0: QuadInt) -> Result<GeodesicClass> {
    let d = eps0.field();
    debug_assert!(form.a < 0 && form.c > 0);
    let (m, mu) = (form.c, form.b / 2);
    let q = |n| QuadInt::int(n, d);
    let beta1 = QuadInt::new(mu, 1, 1, d);
    let beta2 = q(m);
    let mut basis = QuadMat([[beta1, beta1.conj()], [beta2, beta2.conj()]]);
    if basis.det().sign1() != Ordering::Greater {
        basis.0.swap(0, 1);
    }
    let diag = QuadMat::diag(eps0, eps0.conj());
    let stabilizer = (basis * diag * basis.inv().expect("basis is invertible"))
        .to_int()
        .expect("stabilizer has integer entries");

    let dual_basis = [QuadInt::new(mu, -1, m, d), q(1)];
    let betas = [basis.0[0][0], basis.0[1][0]];
    let coeff = |x: QuadInt| -> (i128, i128) {
        let (a, b, den) = x.parts();
        assert_eq!(den, 1, "pairing coefficient is not integral");
        (b, a)
    };
    let mut pairing = [Mat2::IDENTITY; 2];
    for (i, bar) in dual_basis.iter().enumerate() {
        let (r1, c1) = coeff(*bar * betas[0]);
        let (r2, c2) = coeff(*bar * betas[1]);
        pairing[i] = Mat2::new(r1, c1, r2, c2);
    }
    let pairing_unimodular = Mat2::new(pairing[0].a, pairing[1].a, pairing[0].c, pairing[1].c);
    let endpoints = [QuadInt::new(mu, -1, m, d), QuadInt::new(mu, 1, m, d)];
    Ok(GeodesicClass {
        index,
        form,
        cycle,
        m,
        mu,
        basis,
        dual_basis,
        stabilizer,
        pairing,
        pairing_unimodular,
        endpoints,
    })
}
