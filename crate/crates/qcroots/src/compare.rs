//! Empirical pair correlation of the first `N` roots set against the density
//! computed from the coset sum, bin by bin.

use serde::Serialize;

use crate::arith::{CongruenceFilter, Discriminant};
use crate::density::{DensityProfile, NormalizationReport};
use crate::error::Result;
use crate::qfield::ClassGroupData;
use crate::stats::{pair_correlation, Histogram, PointSequence};

#[derive(Debug, Clone, Serialize)]
pub struct CompareConfig {
    pub d: i64,
    pub n: u64,
    pub nu: u64,
    pub points: usize,
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
    pub q_cutoff: f64,
    /// Midpoints per bin when averaging the theoretical density.
    pub samples: usize,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig { d: 2, n: 1, nu: 0, points: 1_000_000, lo: -4.0, hi: 4.0, width: 0.1, q_cutoff: 1000.0, samples: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub v_lo: f64,
    pub v_hi: f64,
    pub empirical: f64,
    pub theory: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub max_m: u64,
    pub points: usize,
    pub coset_count: usize,
    pub kappa: f64,
    pub normalization: NormalizationReport,
    pub max_error: f64,
    pub mean_error: f64,
    pub max_tail_bound: f64,
    #[serde(skip)]
    pub rows: Vec<CompareRow>,
}

pub fn run_compare(config: &CompareConfig) -> Result<CompareReport> {
    let d = Discriminant::new(config.d)?;
    let filter = CongruenceFilter::new(config.n, config.nu).validate(d)?;
    let cg = ClassGroupData::new(d)?;
    let profile = DensityProfile::build(&cg, filter, config.q_cutoff)?;
    let seq = PointSequence::first_n(d, config.points, filter)?;
    let hist = pair_correlation(&seq, &Histogram::with_width(config.lo, config.hi, config.width)?)?;
    let empirical = hist.density(seq.len() as f64);
    let rows: Vec<CompareRow> = (0..hist.bins())
        .map(|i| {
            let (v_lo, v_hi) = hist.edges(i);
            let theory = profile.bin_average(v_lo, v_hi, config.samples);
            CompareRow { v_lo, v_hi, empirical: empirical[i], theory: theory.value, tail_bound: theory.tail_bound }
        })
        .collect();
    let errors = rows.iter().map(|r| (r.empirical - r.theory).abs());
    let max_error = errors.clone().fold(0.0, f64::max);
    let mean_error = errors.sum::<f64>() / rows.len() as f64;
    let max_tail_bound = rows.iter().map(|r| r.tail_bound).fold(0.0, f64::max);
    Ok(CompareReport {
        max_m: seq.max_m,
        points: seq.len(),
        coset_count: profile.coset_count(),
        kappa: profile.kappa,
        normalization: profile.normalization.clone(),
        max_error,
        mean_error,
        max_tail_bound,
        rows,
    })
}
