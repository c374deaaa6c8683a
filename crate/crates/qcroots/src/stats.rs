//! Fine-scale statistics of the normalised roots `ξ = μ/m ∈ [0, 1)`.
//!
//! Differences of points are always taken through [`wrap_diff`], the signed
//! representative in `[−1/2, 1/2)`, and scaled by `N`. Windowed estimators
//! and their brute-force references classify exactly the same floating-point
//! values, so they agree bin for bin.
//!
//! ```
//! use qcroots::stats::{pair_correlation, Histogram, PointSequence};
//!
//! let seq = PointSequence::from_points(vec![0.0, 0.25, 0.5, 0.75]);
//! let hist = pair_correlation(&seq, &Histogram::new(-1.5, 1.5, 3).unwrap()).unwrap();
//! assert_eq!(hist.counts(), &[4, 0, 4]);
//! ```

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::arith::{enumerate_roots, first_n_roots, CongruenceFilter, Discriminant, FactorTable, Root, RootEnumerator};
use crate::density::KahanSum;
use crate::error::{Error, Result};

/// Normalised roots in enumeration order, with the modulus bound that
/// produced them.
#[derive(Debug, Clone)]
pub struct PointSequence {
    pub points: Vec<f64>,
    pub max_m: u64,
}

impl PointSequence {
    pub fn from_points(points: Vec<f64>) -> Self {
        PointSequence { points, max_m: 0 }
    }

    pub fn from_roots(roots: &[Root], max_m: u64) -> Self {
        PointSequence { points: normalize(roots), max_m }
    }

    /// The first `n` points in enumeration order.
    pub fn first_n(d: Discriminant, n: usize, filter: CongruenceFilter) -> Result<Self> {
        let (roots, max_m) = first_n_roots(d, n, filter)?;
        Ok(Self::from_roots(&roots, max_m))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn sorted(&self) -> Result<Vec<f64>> {
        if self.points.is_empty() {
            return Err(Error::EmptySequence);
        }
        let mut p = self.points.clone();
        p.sort_by(f64::total_cmp);
        Ok(p)
    }
}

/// `μ/m` for every root.
pub fn normalize(roots: &[Root]) -> Vec<f64> {
    roots.iter().map(|r| r.mu as f64 / r.m as f64).collect()
}

/// `a − b` reduced to `[−1/2, 1/2)`.
pub fn wrap_diff(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d >= 0.5 {
        d - 1.0
    } else if d < -0.5 {
        d + 1.0
    } else {
        d
    }
}

/// Where a value falls relative to a histogram's range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Under,
    Bin(usize),
    Over,
}

/// Equal-width bins on `[lo, hi)` with explicit under- and overflow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    lo: f64,
    hi: f64,
    counts: Vec<u64>,
    underflow: u64,
    overflow: u64,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi || bins == 0 {
            return Err(Error::Domain("a histogram needs lo < hi and at least one bin"));
        }
        Ok(Histogram { lo, hi, counts: vec![0; bins], underflow: 0, overflow: 0 })
    }

    /// Bins of width `width`; `(hi − lo)/width` must be an integer up to
    /// rounding.
    pub fn with_width(lo: f64, hi: f64, width: f64) -> Result<Self> {
        let bins = ((hi - lo) / width).round();
        if bins < 1.0 || ((hi - lo) / width - bins).abs() > 1e-9 {
            return Err(Error::Domain("histogram width must divide the range"));
        }
        Self::new(lo, hi, bins as usize)
    }

    pub fn empty_like(&self) -> Self {
        Histogram { counts: vec![0; self.counts.len()], underflow: 0, overflow: 0, ..*self }
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        let w = self.bin_width();
        (self.lo + w * i as f64, if i + 1 == self.bins() { self.hi } else { self.lo + w * (i + 1) as f64 })
    }

    pub fn locate(&self, x: f64) -> Slot {
        if x < self.lo {
            Slot::Under
        } else if x >= self.hi || x.is_nan() {
            Slot::Over
        } else {
            let i = ((x - self.lo) / self.bin_width()) as usize;
            Slot::Bin(i.min(self.counts.len() - 1))
        }
    }

    pub fn add(&mut self, x: f64) {
        match self.locate(x) {
            Slot::Under => self.underflow += 1,
            Slot::Over => self.overflow += 1,
            Slot::Bin(i) => self.counts[i] += 1,
        }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn underflow(&self) -> u64 {
        self.underflow
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Everything ever added: `Σ counts + underflow + overflow`.
    pub fn total(&self) -> u64 {
        self.in_range() + self.underflow + self.overflow
    }

    pub fn merge(&mut self, other: &Histogram) {
        assert_eq!((self.lo, self.hi, self.bins()), (other.lo, other.hi, other.bins()), "incompatible histograms");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
    }

    /// `count / (scale · width)` per bin.
    pub fn density(&self, scale: f64) -> Vec<f64> {
        let w = self.bin_width();
        self.counts.iter().map(|&c| c as f64 / (scale * w)).collect()
    }
}

/// Visits `N·wrap_diff(p[j], p[i])` for every `j ≠ i` within `reach` (in
/// scaled units) of `p[i]` on the circle. `p` must be sorted and
/// `reach < N/2`.
fn for_neighbors(p: &[f64], i: usize, reach: f64, mut f: impl FnMut(f64)) {
    let n = p.len();
    let nf = n as f64;
    let limit = reach / nf + 1e-12;
    let mut fwd = 0;
    for k in 1..n {
        let j = (i + k) % n;
        let gap = if j > i { p[j] - p[i] } else { p[j] + 1.0 - p[i] };
        if gap > limit {
            break;
        }
        f(nf * wrap_diff(p[j], p[i]));
        fwd = k;
    }
    for k in 1..n - fwd {
        let j = (i + n - k) % n;
        let gap = if j < i { p[i] - p[j] } else { p[i] + 1.0 - p[j] };
        if gap > limit {
            break;
        }
        f(nf * wrap_diff(p[j], p[i]));
    }
}

fn check_reach(hist: &Histogram, n: usize) -> Result<f64> {
    let (lo, hi) = hist.range();
    let reach = lo.abs().max(hi.abs());
    if reach >= n as f64 / 2.0 {
        return Err(Error::Domain("the histogram range must stay below N/2"));
    }
    Ok(reach)
}

/// Ordered pairs `i ≠ j` binned by `N·(ξ_i − ξ_j)`; divide bin counts by
/// `N·width` for the pair-correlation density. Pairs outside the range are
/// not visited and do not appear in under/overflow.
pub fn pair_correlation(seq: &PointSequence, spec: &Histogram) -> Result<Histogram> {
    let p = seq.sorted()?;
    let reach = check_reach(spec, p.len())?;
    let chunk = 1 << 12;
    let parts: Vec<Histogram> = (0..p.len())
        .into_par_iter()
        .chunks(chunk)
        .map(|idx| {
            let mut h = spec.empty_like();
            for i in idx {
                for_neighbors(&p, i, reach, |x| {
                    if let Slot::Bin(b) = h.locate(x) {
                        h.counts[b] += 1;
                    }
                });
            }
            h
        })
        .collect();
    let mut out = spec.empty_like();
    for h in &parts {
        out.merge(h);
    }
    Ok(out)
}

/// The `O(N²)` reference for [`pair_correlation`].
pub fn pair_correlation_brute(seq: &PointSequence, spec: &Histogram) -> Result<Histogram> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let nf = seq.len() as f64;
    let mut h = spec.empty_like();
    for (i, &a) in seq.points.iter().enumerate() {
        for (j, &b) in seq.points.iter().enumerate() {
            if i != j {
                h.add(nf * wrap_diff(b, a));
            }
        }
    }
    Ok(h)
}

/// Scaled cyclic gaps of the sorted points.
#[derive(Debug, Clone, Serialize)]
pub struct GapStats {
    pub histogram: Histogram,
    /// `Σ N·gap`, equal to `N` up to rounding.
    pub sum: f64,
    pub mean: f64,
}

pub fn gap_distribution(seq: &PointSequence, spec: &Histogram) -> Result<GapStats> {
    let p = seq.sorted()?;
    if p.len() < 2 {
        return Err(Error::Domain("gaps need at least two points"));
    }
    let nf = p.len() as f64;
    let mut h = spec.empty_like();
    let mut sum = KahanSum::default();
    let mut push = |g: f64| {
        h.add(g);
        sum.add(g);
    };
    for w in p.windows(2) {
        push(nf * (w[1] - w[0]));
    }
    push(nf * ((1.0 - p[p.len() - 1]) + p[0]));
    let sum = sum.value();
    Ok(GapStats { histogram: h, sum, mean: sum / nf })
}

/// The window `x + N⁻¹[lo, hi) + ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountWindow {
    pub lo: f64,
    pub hi: f64,
}

impl CountWindow {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo < hi && lo.is_finite() && hi.is_finite() {
            Ok(CountWindow { lo, hi })
        } else {
            Err(Error::Domain("a count window needs finite lo < hi"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// `x` uniform on the circle.
    Uniform,
    /// `x` a uniformly chosen point of the sequence; that point itself is not
    /// counted.
    Palm,
}

/// Empirical law of the window count.
#[derive(Debug, Clone, Serialize)]
pub struct CountingStats {
    pub sampling: Sampling,
    pub samples: usize,
    pub seed: u64,
    /// `probabilities[k]` estimates `P(count = k)`.
    pub probabilities: Vec<f64>,
    /// Raw moments `E[count^r]` for `r = 1..=4`.
    pub moments: [f64; 4],
}

fn count_uniform(p: &[f64], x: f64, w: CountWindow) -> usize {
    let nf = p.len() as f64;
    let a = x + w.lo / nf;
    let b = x + w.hi / nf;
    let below = |t: f64| -> usize {
        // Points of the circle in [0, t) counted with winding.
        let wraps = t.floor();
        let frac = t - wraps;
        (wraps as i64 * p.len() as i64 + p.partition_point(|&v| v < frac) as i64) as usize
    };
    below(b) - below(a)
}

fn count_palm(p: &[f64], i: usize, w: CountWindow, reach: f64) -> usize {
    let mut c = 0;
    for_neighbors(p, i, reach, |x| {
        if x >= w.lo && x < w.hi {
            c += 1;
        }
    });
    c
}

fn palm_reach(w: CountWindow, n: usize) -> Result<f64> {
    let reach = w.lo.abs().max(w.hi.abs());
    if reach >= n as f64 / 2.0 {
        return Err(Error::Domain("the count window must stay below N/2"));
    }
    Ok(reach)
}

/// Samples the window count at `samples` positions. Sample `k` draws from its
/// own ChaCha stream, so results do not depend on the thread count.
pub fn counting_statistics(
    seq: &PointSequence,
    window: CountWindow,
    sampling: Sampling,
    samples: usize,
    seed: u64,
) -> Result<CountingStats> {
    let p = seq.sorted()?;
    if samples == 0 {
        return Err(Error::Domain("at least one sample is needed"));
    }
    let reach = match sampling {
        Sampling::Palm => palm_reach(window, p.len())?,
        Sampling::Uniform => {
            if window.hi - window.lo >= p.len() as f64 {
                return Err(Error::Domain("the count window must be shorter than the circle"));
            }
            0.0
        }
    };
    let block = 1 << 12;
    let counts: Vec<usize> = (0..samples.div_ceil(block))
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let len = block.min(samples - b * block);
            let p = &p;
            (0..len)
                .map(move |_| match sampling {
                    Sampling::Uniform => count_uniform(p, rng.gen::<f64>(), window),
                    Sampling::Palm => count_palm(p, rng.gen_range(0..p.len()), window, reach),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(summarize(sampling, seed, &counts))
}

/// Palm counts for every point of the sequence, in sorted order.
pub fn palm_counts_exhaustive(seq: &PointSequence, window: CountWindow) -> Result<Vec<usize>> {
    let p = seq.sorted()?;
    let reach = palm_reach(window, p.len())?;
    Ok((0..p.len()).into_par_iter().map(|i| count_palm(&p, i, window, reach)).collect())
}

fn summarize(sampling: Sampling, seed: u64, counts: &[usize]) -> CountingStats {
    let max = counts.iter().copied().max().unwrap_or(0);
    let mut freq = vec![0u64; max + 1];
    let mut moments = [KahanSum::default(); 4];
    for &c in counts {
        freq[c] += 1;
        let mut pow = 1.0;
        for m in moments.iter_mut() {
            pow *= c as f64;
            m.add(pow);
        }
    }
    let n = counts.len() as f64;
    CountingStats {
        sampling,
        samples: counts.len(),
        seed,
        probabilities: freq.iter().map(|&f| f as f64 / n).collect(),
        moments: moments.map(|m| m.value() / n),
    }
}

/// Largest number of points in a half-open arc of the given length.
pub fn max_arc_count(sorted: &[f64], len: f64) -> usize {
    let n = sorted.len();
    let mut best = 0;
    let mut j = 0;
    for i in 0..n {
        // Points in [p_i, p_i + len), unrolled over one extra turn.
        let end = sorted[i] + len;
        if j < i {
            j = i;
        }
        while j < i + n {
            let v = if j < n { sorted[j] } else { sorted[j - n] + 1.0 };
            if v >= end {
                break;
            }
            j += 1;
        }
        best = best.max(j - i);
    }
    best
}

/// One row of the logarithmic window-count bound.
#[derive(Debug, Clone, Serialize)]
pub struct LogBoundRow {
    pub y: f64,
    pub max_m: u64,
    pub points: usize,
    pub max_count: usize,
    pub ratio: f64,
}

/// For each `y`, the maximum over `x` of the number of roots with
/// `m ≤ √D/y` in `x + y·[0, len)`, divided by `log(1/y)`.
pub fn log_bound_check(d: Discriminant, ys: &[f64], len: f64) -> Result<Vec<LogBoundRow>> {
    ys.iter()
        .map(|&y| {
            if !(y > 0.0 && y < 1.0) {
                return Err(Error::Domain("y must lie in (0, 1)"));
            }
            let max_m = ((d.get().abs() as f64).sqrt() / y).floor() as u64;
            let roots = enumerate_roots(d, max_m.max(1), CongruenceFilter::TRIVIAL)?;
            let mut p = normalize(&roots);
            p.sort_by(f64::total_cmp);
            let max_count = max_arc_count(&p, y * len);
            Ok(LogBoundRow { y, max_m, points: p.len(), max_count, ratio: max_count as f64 / (1.0 / y).ln() })
        })
        .collect()
}

/// `Σ_{m ≤ M} Σ_μ e(hμ/m)` over all roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylSum {
    pub re: f64,
    pub im: f64,
    pub count: u64,
}

impl WeylSum {
    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

pub fn weyl_sum(d: Discriminant, max_m: u64, h: i64) -> Result<WeylSum> {
    if h == 0 {
        return Err(Error::Domain("the frequency h must be nonzero"));
    }
    let table = FactorTable::new(max_m);
    let roots = RootEnumerator::new(d, &table, CongruenceFilter::TRIVIAL).par_range(1, max_m)?;
    let (mut re, mut im) = (KahanSum::default(), KahanSum::default());
    for r in &roots {
        let m = r.m as i128;
        let k = (h as i128 * r.mu as i128).rem_euclid(m);
        let (s, c) = (2.0 * PI * k as f64 / m as f64).sin_cos();
        re.add(c);
        im.add(s);
    }
    Ok(WeylSum { re: re.value(), im: im.value(), count: roots.len() as u64 })
}

/// Star discrepancy `sup_x |#{ξ < x}/N − x|` of points in `[0, 1)`.
pub fn star_discrepancy(seq: &PointSequence) -> Result<f64> {
    let p = seq.sorted()?;
    let nf = p.len() as f64;
    Ok(p.iter().enumerate().fold(0.0f64, |acc, (i, &x)| acc.max((i as f64 + 1.0) / nf - x).max(x - i as f64 / nf)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson test of `(x, t/period)` pairs against the uniform law on an
/// `nx × nt` grid.
pub fn joint_equidistribution(samples: &[(f64, f64)], period: f64, nx: usize, nt: usize) -> Result<ChiSquare> {
    if samples.is_empty() || nx == 0 || nt == 0 {
        return Err(Error::EmptySequence);
    }
    let mut cells = vec![0u64; nx * nt];
    for &(x, t) in samples {
        let i = ((x * nx as f64) as usize).min(nx - 1);
        let j = ((t / period * nt as f64) as usize).min(nt - 1);
        cells[i * nt + j] += 1;
    }
    let expected = samples.len() as f64 / (nx * nt) as f64;
    let statistic = cells.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dof = nx * nt - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).map(|c| c.sf(statistic)).unwrap_or(f64::NAN)
    };
    Ok(ChiSquare { statistic, dof, p_value })
}
