//! Quality-cost dominance and non-dominated fronts.
//!
//! Quality is maximized; every active cost axis is minimized.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lora_grid::GeneratorConfig;
use crate::report::RegimeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostAxis {
    Latency,
    InferenceVram,
    TrainingTime,
    TrainingVram,
}

impl CostAxis {
    pub const ALL: [CostAxis; 4] = [
        CostAxis::Latency,
        CostAxis::InferenceVram,
        CostAxis::TrainingTime,
        CostAxis::TrainingVram,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CostAxis::Latency => "latency",
            CostAxis::InferenceVram => "inference_vram",
            CostAxis::TrainingTime => "training_time",
            CostAxis::TrainingVram => "training_vram",
        }
    }

    /// Parses a comma-separated axis list such as `latency,inference_vram`.
    pub fn parse_list(s: &str) -> Result<Vec<CostAxis>> {
        let axes = s
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<CostAxis>>>()?;
        check_axes(&axes)?;
        Ok(axes)
    }
}

impl fmt::Display for CostAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CostAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::invalid("cost axis", format!("unknown axis `{s}`")))
    }
}

/// Latency in seconds, memory in GB, training time in minutes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CostVector {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inference_vram: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training_vram: Option<f64>,
}

impl CostVector {
    pub fn get(&self, axis: CostAxis) -> Option<f64> {
        match axis {
            CostAxis::Latency => self.latency,
            CostAxis::InferenceVram => self.inference_vram,
            CostAxis::TrainingTime => self.training_time,
            CostAxis::TrainingVram => self.training_vram,
        }
    }

    pub fn set(&mut self, axis: CostAxis, value: Option<f64>) {
        let slot = match axis {
            CostAxis::Latency => &mut self.latency,
            CostAxis::InferenceVram => &mut self.inference_vram,
            CostAxis::TrainingTime => &mut self.training_time,
            CostAxis::TrainingVram => &mut self.training_vram,
        };
        *slot = value;
    }

    pub fn validate(&self) -> Result<()> {
        for axis in CostAxis::ALL {
            if let Some(v) = self.get(axis) {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::invalid("cost", format!("{axis} = {v}")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint {
    pub config: GeneratorConfig,
    pub regime: RegimeId,
    pub quality: f64,
    pub costs: CostVector,
}

impl ParetoPoint {
    pub fn new(config: GeneratorConfig, regime: RegimeId, quality: f64, costs: CostVector) -> Result<Self> {
        if !quality.is_finite() {
            return Err(Error::invalid("quality", format!("{quality} for {config}")));
        }
        costs.validate()?;
        Ok(ParetoPoint {
            config,
            regime,
            quality,
            costs,
        })
    }

    fn cost(&self, axis: CostAxis) -> Result<f64> {
        self.costs
            .get(axis)
            .ok_or_else(|| Error::Missing(format!("{axis} for {} in {}", self.config, self.regime)))
    }

    fn active(&self, axes: &[CostAxis]) -> Result<Vec<f64>> {
        axes.iter().map(|&a| self.cost(a)).collect()
    }

    pub fn has_axes(&self, axes: &[CostAxis]) -> bool {
        axes.iter().all(|&a| self.costs.get(a).is_some())
    }
}

fn check_axes(axes: &[CostAxis]) -> Result<()> {
    if axes.is_empty() {
        return Err(Error::invalid("axes", "at least one cost axis is required"));
    }
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].contains(a) {
            return Err(Error::invalid("axes", format!("axis `{a}` listed twice")));
        }
    }
    Ok(())
}

fn dominates_raw(qa: f64, ca: &[f64], qb: f64, cb: &[f64]) -> bool {
    if qa < qb || ca.iter().zip(cb).any(|(x, y)| x > y) {
        return false;
    }
    qa > qb || ca.iter().zip(cb).any(|(x, y)| x < y)
}

/// True iff `a` is at least as good as `b` everywhere and strictly better somewhere.
pub fn dominates(a: &ParetoPoint, b: &ParetoPoint, axes: &[CostAxis]) -> Result<bool> {
    check_axes(axes)?;
    Ok(dominates_raw(a.quality, &a.active(axes)?, b.quality, &b.active(axes)?))
}

/// Indices of the non-dominated points, ordered by the first axis then config.
///
/// Candidates are visited in lexicographic (first cost, -quality, other costs)
/// order; no point can be dominated by one visited after it, so each candidate
/// is checked against the current front only.
pub fn pareto_front_indices(points: &[ParetoPoint], axes: &[CostAxis]) -> Result<Vec<usize>> {
    check_axes(axes)?;
    if points.is_empty() {
        return Err(Error::invalid("points", "empty point set"));
    }
    let costs = points.iter().map(|p| p.active(axes)).collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..points.len()).collect();
    let key_cmp = |&i: &usize, &j: &usize| -> Ordering {
        costs[i][0]
            .total_cmp(&costs[j][0])
            .then(points[j].quality.total_cmp(&points[i].quality))
            .then_with(|| {
                costs[i][1..]
                    .iter()
                    .zip(&costs[j][1..])
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    };
    order.sort_by(key_cmp);

    let mut front: Vec<usize> = Vec::new();
    for i in order {
        let dominated = front
            .iter()
            .any(|&f| dominates_raw(points[f].quality, &costs[f], points[i].quality, &costs[i]));
        if !dominated {
            front.push(i);
        }
    }
    front.sort_by(|&i, &j| {
        costs[i][0]
            .total_cmp(&costs[j][0])
            .then_with(|| points[i].config.cmp(&points[j].config))
            .then(i.cmp(&j))
    });
    Ok(front)
}

pub fn pareto_front(points: &[ParetoPoint], axes: &[CostAxis]) -> Result<Vec<ParetoPoint>> {
    Ok(pareto_front_indices(points, axes)?
        .into_iter()
        .map(|i| points[i].clone())
        .collect())
}

/// Membership of each input point in the time front, the VRAM front, and either.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingFronts {
    pub time: Vec<bool>,
    pub vram: Vec<bool>,
}

impl TrainingFronts {
    pub fn union(&self) -> Vec<bool> {
        self.time.iter().zip(&self.vram).map(|(a, b)| *a || *b).collect()
    }

    /// Label for a point: `time`, `vram`, `time+vram`, or empty.
    pub fn label(&self, i: usize) -> &'static str {
        match (self.time[i], self.vram[i]) {
            (true, true) => "time+vram",
            (true, false) => "time",
            (false, true) => "vram",
            (false, false) => "",
        }
    }
}

fn membership(points: &[ParetoPoint], axes: &[CostAxis]) -> Result<Vec<bool>> {
    let mut flags = vec![false; points.len()];
    for i in pareto_front_indices(points, axes)? {
        flags[i] = true;
    }
    Ok(flags)
}

/// Fronts over quality vs training time and quality vs training VRAM. Points
/// without training costs must be filtered out by the caller.
pub fn training_fronts(points: &[ParetoPoint]) -> Result<TrainingFronts> {
    Ok(TrainingFronts {
        time: membership(points, &[CostAxis::TrainingTime])?,
        vram: membership(points, &[CostAxis::TrainingVram])?,
    })
}

/// One serialized row per point: quality, active costs, and membership.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontRow {
    pub config: GeneratorConfig,
    pub regime: RegimeId,
    pub quality: f64,
    pub costs: CostVector,
    pub on_front: bool,
}

pub fn front_rows(points: &[ParetoPoint], axes: &[CostAxis]) -> Result<Vec<FrontRow>> {
    let flags = membership(points, axes)?;
    let mut rows: Vec<FrontRow> = points
        .iter()
        .zip(flags)
        .map(|(p, on_front)| {
            let mut costs = CostVector::default();
            for &a in axes {
                costs.set(a, p.costs.get(a));
            }
            FrontRow {
                config: p.config.clone(),
                regime: p.regime.clone(),
                quality: p.quality,
                costs,
                on_front,
            }
        })
        .collect();
    rows.sort_by(|a, b| a.regime.cmp(&b.regime).then_with(|| a.config.cmp(&b.config)));
    Ok(rows)
}
