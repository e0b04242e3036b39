//! Grid scans over the bias `eps` and the mixing probability `r`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::games::{canonical_example, mix, parrondo_effect, GameSpec, MixWeight, CANONICAL_EPS_BOUND};
use crate::markov::{gain_probability_closed_form, CoinSet, DEFAULT_FAIRNESS_TOL};
use crate::protocols::{run_second_quantization, run_superposed, Embedding};

/// Inclusive lattice `lo + k (hi - lo) / (count - 1)`, `k = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    lo: f64,
    hi: f64,
    count: usize,
}

impl GridRange {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidSweep(format!("range needs lo < hi, got {lo}..{hi}")));
        }
        if count < 2 {
            return Err(Error::InvalidSweep(format!("range needs at least 2 points, got {count}")));
        }
        Ok(Self { lo, hi, count })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.count {
            self.hi
        } else {
            self.lo + k as f64 * (self.hi - self.lo) / (self.count - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|k| self.point(k)).collect()
    }
}

/// Where the two component games come from.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepBase {
    /// `canonical_example(eps)`: first game A', second game B'.
    Canonical,
    /// Two explicit coin sets, each coin lowered by `eps` and clamped to [0, 1].
    Explicit { first: CoinSet, second: CoinSet },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantumCheck {
    SecondQuantization,
    Superposed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub eps: GridRange,
    pub r: GridRange,
    pub base: SweepBase,
    pub quantum_check: Option<QuantumCheck>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r.lo >= 0.0 && self.r.hi <= 1.0) {
            return Err(Error::InvalidSweep(format!(
                "r range {}..{} leaves [0, 1]",
                self.r.lo, self.r.hi
            )));
        }
        match &self.base {
            SweepBase::Canonical => {
                if !(self.eps.lo > 0.0 && self.eps.hi < CANONICAL_EPS_BOUND) {
                    return Err(Error::InvalidSweep(format!(
                        "canonical eps range {}..{} must lie inside (0, 1/168)",
                        self.eps.lo, self.eps.hi
                    )));
                }
            }
            SweepBase::Explicit { .. } => {}
        }
        Ok(())
    }

    fn games(&self, eps: f64) -> Result<(GameSpec, GameSpec)> {
        match &self.base {
            SweepBase::Canonical => canonical_example(eps),
            SweepBase::Explicit { first, second } => Ok((
                GameSpec::new(shifted(first, eps)?, "first"),
                GameSpec::new(shifted(second, eps)?, "second"),
            )),
        }
    }
}

fn shifted(c: &CoinSet, eps: f64) -> Result<CoinSet> {
    CoinSet::new(c.as_array().map(|p| (p - eps).clamp(0.0, 1.0)))
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Ok,
    /// The cell could not be evaluated (reducible chain or similar).
    Degenerate(String),
}

/// One lattice point. Gain probabilities are NaN for degenerate cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub eps_index: usize,
    pub r_index: usize,
    pub eps: f64,
    pub r: f64,
    pub p_gain_1: f64,
    pub p_gain_2: f64,
    pub p_gain_mix: f64,
    pub effect: bool,
    pub quantum_gap: Option<f64>,
    pub status: CellStatus,
}

fn evaluate(spec: &SweepSpec, eps_index: usize, r_index: usize) -> SweepCell {
    let eps = spec.eps.point(eps_index);
    let r = spec.r.point(r_index);
    let mut cell = SweepCell {
        eps_index,
        r_index,
        eps,
        r,
        p_gain_1: f64::NAN,
        p_gain_2: f64::NAN,
        p_gain_mix: f64::NAN,
        effect: false,
        quantum_gap: None,
        status: CellStatus::Ok,
    };
    let outcome = (|| -> Result<()> {
        let (g1, g2) = spec.games(eps)?;
        let weight = MixWeight::new(r)?;
        let report = parrondo_effect(&g1, &g2, weight, DEFAULT_FAIRNESS_TOL)?;
        cell.p_gain_1 = report.report_1.p_gain;
        cell.p_gain_2 = report.report_2.p_gain;
        cell.p_gain_mix = report.report_mix.p_gain;
        cell.effect = report.effect;
        if let Some(check) = spec.quantum_check {
            let classical = gain_probability_closed_form(&mix(&g1, &g2, weight).coins)?;
            let quantum = match check {
                QuantumCheck::SecondQuantization => {
                    run_second_quantization(&g1, &g2, r, &Embedding::type1())?
                }
                QuantumCheck::Superposed => {
                    run_superposed(&g1, &g2, r, &Embedding::type1(), &Embedding::type2())?
                }
            };
            cell.quantum_gap = Some((quantum.p_gain - classical).abs());
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        cell.status = CellStatus::Degenerate(e.to_string());
        cell.effect = false;
    }
    cell
}

/// Evaluates every `(eps, r)` lattice point. Cells are returned in
/// `(eps index, r index)` order whatever order they were computed in.
pub fn grid_scan(spec: &SweepSpec) -> Result<Vec<SweepCell>> {
    spec.validate()?;
    let (ne, nr) = (spec.eps.count, spec.r.count);
    Ok((0..ne * nr)
        .into_par_iter()
        .map(|k| evaluate(spec, k / nr, k % nr))
        .collect())
}

/// r-intervals showing the effect at one `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionRow {
    pub eps: f64,
    /// Inclusive `(r_first, r_last)` runs of consecutive effect cells. Empty
    /// when the effect never appears at this `eps`.
    pub intervals: Vec<(f64, f64)>,
}

/// Groups cells by `eps` and collapses runs of effect cells into intervals.
pub fn extract_region(cells: &[SweepCell]) -> Vec<RegionRow> {
    let mut sorted: Vec<&SweepCell> = cells.iter().collect();
    sorted.sort_by_key(|c| (c.eps_index, c.r_index));

    sorted
        .chunk_by(|a, b| a.eps_index == b.eps_index)
        .map(|row| {
            let mut intervals = Vec::new();
            let mut run: Option<(f64, f64)> = None;
            for cell in row {
                run = match (cell.effect, run) {
                    (true, Some((start, _))) => Some((start, cell.r)),
                    (true, None) => Some((cell.r, cell.r)),
                    (false, Some(done)) => {
                        intervals.push(done);
                        None
                    }
                    (false, None) => None,
                };
            }
            intervals.extend(run);
            RegionRow {
                eps: row[0].eps,
                intervals,
            }
        })
        .collect()
}
