//! Grid refinement probes for `Φ^g - Φ` off a shrinking diagonal band.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{circle_dist, profile};
use super::map::CircleDiffeo;
use super::NavasError;

/// Band width in grid cells; `δ = BAND_CELLS / N`.
pub const BAND_CELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridLevel {
    pub n: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelGrid {
    levels: Vec<GridLevel>,
}

impl KernelGrid {
    /// Needs strictly increasing `N`, strictly decreasing `δ`, and `δ ≥ 2/N`.
    pub fn new(levels: Vec<GridLevel>) -> Result<Self, NavasError> {
        for l in &levels {
            if l.n < 8 || !(l.delta * l.n as f64 >= 2.0) || !(l.delta < 0.5) {
                return Err(NavasError::Schedule(format!(
                    "level n = {}, delta = {} is invalid",
                    l.n, l.delta
                )));
            }
        }
        for w in levels.windows(2) {
            if w[1].n <= w[0].n || w[1].delta >= w[0].delta {
                return Err(NavasError::Schedule(
                    "n must increase and delta decrease across levels".into(),
                ));
            }
        }
        Ok(KernelGrid { levels })
    }

    /// `N_l = base_n · 2^l`, `δ_l = 4 / N_l`.
    pub fn doubling(levels: usize, base_n: usize) -> Result<Self, NavasError> {
        let mut out = Vec::with_capacity(levels);
        for l in 0..levels {
            let n = base_n
                .checked_shl(l as u32)
                .filter(|&n| n >> l == base_n)
                .ok_or_else(|| NavasError::Schedule("grid size overflows".into()))?;
            out.push(GridLevel {
                n,
                delta: BAND_CELLS as f64 / n as f64,
            });
        }
        KernelGrid::new(out)
    }

    pub fn levels(&self) -> &[GridLevel] {
        &self.levels
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelReport {
    pub n: usize,
    /// Band actually used; wider than requested after an overflow retry.
    pub delta: f64,
    pub sup: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeVerdict {
    Stabilized,
    Growing,
    /// Final ratio below the stabilization window.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilizationCriterion {
    pub low: f64,
    pub high: f64,
}

impl Default for StabilizationCriterion {
    fn default() -> Self {
        StabilizationCriterion {
            low: 0.8,
            high: 1.25,
        }
    }
}

impl StabilizationCriterion {
    /// Ratio `s_L / s_{L-1}`; an all-zero tail counts as stable.
    pub fn verdict(&self, sequence: &[f64]) -> (Option<f64>, ProbeVerdict) {
        let ratio = final_ratio(sequence);
        let verdict = match ratio {
            None => ProbeVerdict::Stabilized,
            Some(r) if r > self.high => ProbeVerdict::Growing,
            Some(r) if r >= self.low => ProbeVerdict::Stabilized,
            Some(_) => ProbeVerdict::Indeterminate,
        };
        (ratio, verdict)
    }
}

fn final_ratio(s: &[f64]) -> Option<f64> {
    match s {
        [.., a, b] if *a == 0.0 && *b == 0.0 => None,
        [.., a, b] => Some(b / a),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProbeReport {
    pub levels: Vec<LevelReport>,
    pub final_ratio: Option<f64>,
    /// `s_L / s_1`.
    pub growth: Option<f64>,
    pub l2_final_ratio: Option<f64>,
    pub criterion: StabilizationCriterion,
    pub verdict: ProbeVerdict,
}

impl ProbeReport {
    pub fn sups(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.sup).collect()
    }

    pub fn l2s(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.l2).collect()
    }
}

/// Sup and discrete L² norm of `Φ^g - Φ` over grid pairs at circle
/// distance at least `band` cells. Rows are reduced in parallel, then
/// combined in index order, so results do not depend on thread count.
fn level_stats<G: CircleDiffeo + ?Sized>(
    g: &G,
    n: usize,
    band: usize,
) -> Result<(f64, f64), NavasError> {
    let h = 1.0 / n as f64;
    let mut gx = Vec::with_capacity(n);
    let mut root = Vec::with_capacity(n);
    for i in 0..n {
        let x = i as f64 * h;
        let d = g.derivative(x);
        if !(d > 0.0) {
            return Err(NavasError::NonPositiveDerivative { x, value: d });
        }
        gx.push(g.lift(x));
        root.push(d.sqrt());
    }
    let rows: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut sup = 0.0f64;
            let mut sq = 0.0f64;
            for off in band..=n - band {
                let k = (i + off) % n;
                let acted = root[i] * root[k] / circle_dist(gx[i] - gx[k]);
                let base = profile(off as f64 * h);
                let v = (acted - base).abs();
                sup = if v.is_nan() { f64::NAN } else { sup.max(v) };
                sq += v * v;
            }
            (sup, sq)
        })
        .collect();
    let mut sup = 0.0f64;
    let mut sq = 0.0f64;
    for (s, q) in rows {
        sup = if s.is_nan() || sup.is_nan() {
            f64::NAN
        } else {
            sup.max(s)
        };
        sq += q;
    }
    Ok((sup, (sq * h * h).sqrt()))
}

/// Runs every level; a non-finite level is retried once with the band
/// doubled before failing.
pub fn kernel_probe<G: CircleDiffeo + ?Sized>(
    g: &G,
    grid: &KernelGrid,
    criterion: StabilizationCriterion,
) -> Result<ProbeReport, NavasError> {
    if grid.levels().len() < 3 {
        return Err(NavasError::Schedule(
            "at least 3 levels are required".into(),
        ));
    }
    let mut levels = Vec::with_capacity(grid.levels().len());
    for l in grid.levels() {
        let mut band = ((l.delta * l.n as f64).round() as usize).max(1);
        let mut stats = level_stats(g, l.n, band)?;
        if !(stats.0.is_finite() && stats.1.is_finite()) {
            band *= 2;
            if 2 * band > l.n {
                return Err(NavasError::Overflow { n: l.n });
            }
            stats = level_stats(g, l.n, band)?;
            if !(stats.0.is_finite() && stats.1.is_finite()) {
                return Err(NavasError::Overflow { n: l.n });
            }
        }
        levels.push(LevelReport {
            n: l.n,
            delta: band as f64 / l.n as f64,
            sup: stats.0,
            l2: stats.1,
        });
    }
    let sups: Vec<f64> = levels.iter().map(|l| l.sup).collect();
    let l2s: Vec<f64> = levels.iter().map(|l| l.l2).collect();
    let (final_ratio, verdict) = criterion.verdict(&sups);
    let growth = match (sups.first(), sups.last()) {
        (Some(&a), Some(&b)) if a > 0.0 => Some(b / a),
        _ => None,
    };
    Ok(ProbeReport {
        levels,
        final_ratio,
        growth,
        l2_final_ratio: final_ratio_of(&l2s),
        criterion,
        verdict,
    })
}

fn final_ratio_of(s: &[f64]) -> Option<f64> {
    final_ratio(s)
}

/// Per-level sup of `|Φ^g - Φ|`.
pub fn boundedness_probe<G: CircleDiffeo + ?Sized>(
    g: &G,
    grid: &KernelGrid,
) -> Result<Vec<f64>, NavasError> {
    Ok(kernel_probe(g, grid, StabilizationCriterion::default())?.sups())
}

/// Per-level discrete L² norm of `Φ^g - Φ`.
pub fn square_integrability_probe<G: CircleDiffeo + ?Sized>(
    g: &G,
    grid: &KernelGrid,
) -> Result<Vec<f64>, NavasError> {
    Ok(kernel_probe(g, grid, StabilizationCriterion::default())?.l2s())
}
