//! Penalty terms and the weighted fitness of a grouping. Lower is better.
//!
//! Three penalties are combined:
//!
//! * unfit: per group, the number of unique courses above each column limit,
//!   multiplied by the group size;
//! * size: `sum((N - size_i) * size_i)` over groups, where `N` is the cohort
//!   size, which rewards fewer and larger groups;
//! * unassigned: students left out of every group.
//!
//! `fitness = 1000 * unassigned + (size_term + 1000 * unfit) * groups`, where
//! `size_term` is `log2` of the size penalty, adjusted per [`FitnessMode`] so
//! that it is defined when the size penalty is zero.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::grouping::Grouping;
use crate::model::{ColumnLimits, ColumnMode, Instance};

/// Weight applied to the unfit and unassigned penalties.
pub const VIOLATION_WEIGHT: f64 = 1000.0;

/// How the logarithmic size term is made finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitnessMode {
    /// `log2(max(sp, 1))`: a single all-student group scores exactly 0.
    Strict,
    /// `log2(sp + N + 1)`: reproduces the published single-group scores
    /// (25 students -> 4.70, 18 students -> 4.25).
    #[default]
    PaperCompat,
}

impl std::fmt::Display for FitnessMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FitnessMode::Strict => "strict",
            FitnessMode::PaperCompat => "paper-compat",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FitnessConfig {
    pub limits: ColumnLimits,
    pub mode: FitnessMode,
}

impl FitnessConfig {
    pub fn new(limits: ColumnLimits, mode: FitnessMode) -> Self {
        FitnessConfig { limits, mode }
    }
}

/// Penalty components and total fitness of one grouping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyBreakdown {
    pub unfit: u64,
    pub size: u64,
    pub unassigned: u64,
    #[serde(rename = "groups")]
    pub group_count: usize,
    pub fitness: f64,
    pub mode: FitnessMode,
}

impl PenaltyBreakdown {
    /// Complete and within limits.
    pub fn is_feasible(&self) -> bool {
        self.unfit == 0 && self.unassigned == 0
    }
}

/// Courses above `limit`. Zero at or below the limit.
pub fn group_penalty(count: usize, limit: usize) -> u64 {
    count.saturating_sub(limit) as u64
}

/// Unweighted excess of one group with the given unique course counts.
pub fn group_excess(new_count: usize, old_count: usize, limits: &ColumnLimits) -> u64 {
    match limits.mode {
        ColumnMode::Fixed => {
            group_penalty(new_count, limits.new_limit) + group_penalty(old_count, limits.old_limit)
        }
        ColumnMode::Dynamic => group_penalty(new_count + old_count, limits.total_limit),
    }
}

/// Unique NEW/OLD course counts of every group, in group order.
pub fn group_profiles(instance: &Instance, grouping: &Grouping) -> Vec<(usize, usize)> {
    let mut new = FixedBitSet::with_capacity(instance.course_count());
    let mut old = FixedBitSet::with_capacity(instance.course_count());
    grouping
        .groups()
        .iter()
        .map(|members| {
            new.clear();
            old.clear();
            for &s in members {
                new.union_with(instance.new_set(s));
                old.union_with(instance.old_set(s));
            }
            (new.count_ones(..), old.count_ones(..))
        })
        .collect()
}

pub fn unfit_penalty(instance: &Instance, grouping: &Grouping, limits: &ColumnLimits) -> u64 {
    group_profiles(instance, grouping)
        .into_iter()
        .zip(grouping.groups())
        .map(|((new, old), members)| group_excess(new, old, limits) * members.len() as u64)
        .sum()
}

pub fn size_penalty(instance: &Instance, grouping: &Grouping) -> u64 {
    let n = instance.student_count() as u64;
    grouping
        .groups()
        .iter()
        .map(|g| {
            let size = g.len() as u64;
            (n - size) * size
        })
        .sum()
}

pub fn unassigned_penalty(instance: &Instance, grouping: &Grouping) -> u64 {
    (instance.student_count() - grouping.assigned_count()) as u64
}

/// The logarithmic size term for a size penalty `sp` over `students` students.
pub fn size_term(sp: u64, students: usize, mode: FitnessMode) -> f64 {
    match mode {
        FitnessMode::Strict => (sp.max(1) as f64).log2(),
        FitnessMode::PaperCompat => ((sp + students as u64 + 1) as f64).log2(),
    }
}

/// Combines raw penalties into the scalar fitness.
pub fn combine(unfit: u64, sp: u64, unassigned: u64, groups: usize, students: usize, mode: FitnessMode) -> f64 {
    VIOLATION_WEIGHT * unassigned as f64
        + (size_term(sp, students, mode) + unfit as f64 * VIOLATION_WEIGHT) * groups as f64
}

pub fn evaluate(instance: &Instance, grouping: &Grouping, config: &FitnessConfig) -> PenaltyBreakdown {
    let unfit = unfit_penalty(instance, grouping, &config.limits);
    let size = size_penalty(instance, grouping);
    let unassigned = unassigned_penalty(instance, grouping);
    let group_count = grouping.group_count();
    PenaltyBreakdown {
        unfit,
        size,
        unassigned,
        group_count,
        fitness: combine(
            unfit,
            size,
            unassigned,
            group_count,
            instance.student_count(),
            config.mode,
        ),
        mode: config.mode,
    }
}

/// Every student assigned and every group within `limits`.
pub fn is_feasible(instance: &Instance, grouping: &Grouping, limits: &ColumnLimits) -> bool {
    unassigned_penalty(instance, grouping) == 0 && unfit_penalty(instance, grouping, limits) == 0
}
