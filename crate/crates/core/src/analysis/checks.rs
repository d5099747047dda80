use serde::{Deserialize, Serialize};

use super::nodal::{nodal_partition, NodalPartition, PaynePoint};
use crate::complex::NeumannCount;
use crate::critical::{morse_counts, CircleKind, CriticalKind, CriticalSet, MorseCounts};
use crate::eigenfield::EigenField;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CourantEntry {
    pub k: u32,
    pub nodal_count: usize,
    pub passed: bool,
}

/// Nodal count of `u_k` against `k`, for fields listed in eigenvalue order.
pub fn courant_check(fields: &[EigenField], h: f64) -> Result<Vec<CourantEntry>> {
    fields
        .iter()
        .map(|f| {
            let p = nodal_partition(f, h)?;
            Ok(CourantEntry {
                k: f.index(),
                nodal_count: p.count,
                passed: p.count <= f.index() as usize,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub neumann_total: usize,
    pub isolated_maxima: usize,
    pub max_circles: usize,
    pub nodal_count: usize,
    /// Neumann count at least the number of isolated maxima plus maximum curves.
    pub maxima_bound: bool,
    /// Twice the Neumann count at least the nodal count.
    pub nodal_bound: bool,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.maxima_bound && self.nodal_bound
    }
}

pub fn corollary_checks(count: &NeumannCount, partition: &NodalPartition, critical: &CriticalSet) -> CorollaryReport {
    let isolated_maxima = critical
        .points
        .iter()
        .filter(|p| p.kind == CriticalKind::Max)
        .count();
    let max_circles = critical
        .circles
        .iter()
        .filter(|c| c.kind == CircleKind::MaxCurve)
        .count();
    CorollaryReport {
        neumann_total: count.total,
        isolated_maxima,
        max_circles,
        nodal_count: partition.count,
        maxima_bound: count.total >= isolated_maxima + max_circles,
        nodal_bound: 2 * count.total >= partition.count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub counts: MorseCounts,
    /// `n_S − n_E`.
    pub saddle_excess: i64,
    /// `Σ_int m + ½ Σ_bdry m + n_S − n_E`.
    pub multiplicity_sum: f64,
    /// Which identity applies: `Some(1)` for a ground state, `Some(2)` for a
    /// second mode with exactly two extrema, `None` otherwise.
    pub applies_to: Option<u32>,
    pub passed: bool,
}

/// The counting identities of a convex ground state and second mode.
pub fn identity_checks(critical: &CriticalSet, index: u32) -> Result<IdentityReport> {
    let counts = morse_counts(&critical.points)?;
    let saddle_excess = counts.saddles as i64 - counts.extrema as i64;
    let multiplicity_sum = counts.interior_multiplicity as f64
        + 0.5 * counts.boundary_multiplicity as f64
        + saddle_excess as f64;
    let applies_to = match index {
        1 => Some(1),
        2 if counts.extrema == 2 => Some(2),
        _ => None,
    };
    let passed = match applies_to {
        Some(1) => saddle_excess == -1,
        Some(2) => (multiplicity_sum + 1.0).abs() < 1e-12,
        _ => false,
    };
    Ok(IdentityReport {
        counts,
        saddle_excess,
        multiplicity_sum,
        applies_to,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondModeBound {
    pub total: usize,
    pub boundary: usize,
    pub interior: usize,
    pub passed: bool,
}

/// Lower bound for a second mode on a convex domain: three domains, at least
/// two boundary and one interior.
pub fn second_mode_bound(count: &NeumannCount) -> SecondModeBound {
    SecondModeBound {
        total: count.total,
        boundary: count.boundary,
        interior: count.interior,
        passed: count.total >= 3 && count.boundary >= 2 && count.interior >= 1,
    }
}

/// Largest distance from a Payne point to the nearest boundary critical point.
pub fn payne_critical_distance(payne: &[PaynePoint], critical: &CriticalSet) -> f64 {
    payne
        .iter()
        .map(|p| {
            critical
                .points
                .iter()
                .filter(|c| c.on_boundary)
                .map(|c| c.location.dist(p.location))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}
