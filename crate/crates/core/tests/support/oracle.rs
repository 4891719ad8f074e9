//! Brute-force reference for small instances.
//!
//! Works only from the instance's raw registration rows and recomputes every
//! penalty with plain hash sets, so it shares no code path with
//! `srg_core::fitness`.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use srg_core::{ColumnLimits, ColumnMode, FitnessMode, Instance};

/// Per student: (NEW course ids, OLD course ids).
pub struct RawCohort {
    pub students: Vec<(HashSet<String>, HashSet<String>)>,
}

impl RawCohort {
    pub fn from_instance(instance: &Instance) -> Self {
        let mut by_student: Vec<(HashSet<String>, HashSet<String>)> = Vec::new();
        let mut pos: HashMap<String, usize> = HashMap::new();
        for row in instance.registrations() {
            let i = *pos.entry(row.student.clone()).or_insert_with(|| {
                by_student.push((HashSet::new(), HashSet::new()));
                by_student.len() - 1
            });
            if row.year == instance.cohort_year() {
                by_student[i].0.insert(row.course);
            } else {
                by_student[i].1.insert(row.course);
            }
        }
        RawCohort {
            students: by_student,
        }
    }

    pub fn len(&self) -> usize {
        self.students.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawScore {
    pub unfit: u64,
    pub size: u64,
    pub unassigned: u64,
    pub groups: usize,
    pub fitness: f64,
}

fn excess(count: usize, limit: usize) -> u64 {
    if count >= limit {
        (count - limit) as u64
    } else {
        0
    }
}

/// Scores a labelling; `None` marks an unassigned student.
pub fn score(cohort: &RawCohort, labels: &[Option<usize>], limits: &ColumnLimits, mode: FitnessMode) -> RawScore {
    let total = cohort.len() as u64;
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, l) in labels.iter().enumerate() {
        if let Some(l) = l {
            groups.entry(*l).or_default().push(s);
        }
    }
    let mut unfit = 0u64;
    let mut size = 0u64;
    let mut assigned = 0u64;
    for members in groups.values() {
        let mut new: HashSet<&String> = HashSet::new();
        let mut old: HashSet<&String> = HashSet::new();
        for &s in members {
            new.extend(cohort.students[s].0.iter());
            old.extend(cohort.students[s].1.iter());
        }
        let n = members.len() as u64;
        let gp = match limits.mode {
            ColumnMode::Fixed => excess(new.len(), limits.new_limit) + excess(old.len(), limits.old_limit),
            ColumnMode::Dynamic => excess(new.len() + old.len(), limits.total_limit),
        };
        unfit += gp * n;
        size += (total - n) * n;
        assigned += n;
    }
    let unassigned = total - assigned;
    let k = groups.len() as f64;
    let log_term = match mode {
        FitnessMode::Strict => {
            if size == 0 {
                0.0
            } else {
                (size as f64).ln() / std::f64::consts::LN_2
            }
        }
        FitnessMode::PaperCompat => ((size + total + 1) as f64).ln() / std::f64::consts::LN_2,
    };
    RawScore {
        unfit,
        size,
        unassigned,
        groups: groups.len(),
        fitness: 1000.0 * unassigned as f64 + (log_term + 1000.0 * unfit as f64) * k,
    }
}

/// All set partitions of `n` items as restricted growth strings.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for label in 0..=limit {
            prefix.push(label);
            rec(prefix, max.max(label), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(&mut Vec::with_capacity(n), 0, n, &mut out);
    }
    out
}

/// Minimum fitness over all complete groupings, with one minimiser.
pub fn optimum(instance: &Instance, limits: &ColumnLimits, mode: FitnessMode) -> (f64, Vec<usize>) {
    let cohort = RawCohort::from_instance(instance);
    let mut best = (f64::INFINITY, Vec::new());
    for p in partitions(cohort.len()) {
        let labels: Vec<Option<usize>> = p.iter().copied().map(Some).collect();
        let f = score(&cohort, &labels, limits, mode).fitness;
        if f < best.0 {
            best = (f, p);
        }
    }
    best
}

pub const BELL: [usize; 9] = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
