use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{is_infeasible, DesignProblem};
use crate::error::{Error, Result};
use crate::params::DesignPoint;

/// Exhaustive search over an integer `(M, K)` rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchReport {
    pub best: DesignPoint,
    pub best_ee: f64,
    /// EE at every feasible cell; infeasible cells are absent.
    pub ee_surface: BTreeMap<(u32, u32), f64>,
    pub m_range: (u32, u32),
    pub k_range: (u32, u32),
}

impl DesignProblem {
    /// Evaluates the EE with `rho*` at every feasible integer `(M, K)` in
    /// the rectangle. Ties in the argmax go to smaller `M`, then smaller `K`.
    pub fn grid_search(
        &self,
        m_range: RangeInclusive<u32>,
        k_range: RangeInclusive<u32>,
    ) -> Result<GridSearchReport> {
        let ks: Vec<u32> = k_range.clone().collect();
        let rows: Vec<Vec<(u32, u32, f64)>> = ks
            .par_iter()
            .map(|&k| {
                let mut row = Vec::new();
                for m in m_range.clone() {
                    match self.ee(m, k) {
                        Ok(v) => row.push((m, k, v)),
                        Err(e) if is_infeasible(&e) => {}
                        Err(Error::InvalidParameter(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;

        let ee_surface: BTreeMap<(u32, u32), f64> = rows
            .into_iter()
            .flatten()
            .map(|(m, k, v)| ((m, k), v))
            .collect();

        // BTreeMap iterates in (M, K) order, so strict `>` keeps the smallest.
        let mut best: Option<((u32, u32), f64)> = None;
        for (&cell, &v) in &ee_surface {
            if best.map_or(true, |(_, b)| v > b) {
                best = Some((cell, v));
            }
        }
        let ((m, k), best_ee) = best.ok_or(Error::EmptyFeasibleSet)?;
        Ok(GridSearchReport {
            best: self.design(m, k)?,
            best_ee,
            ee_surface,
            m_range: (*m_range.start(), *m_range.end()),
            k_range: (*k_range.start(), *k_range.end()),
        })
    }
}
