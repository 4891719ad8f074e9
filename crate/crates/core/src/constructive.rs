//! Greedy construction: students are taken in some order and each joins the
//! best-fitting group that stays within the column limits, or opens a new one.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;

use crate::fitness::FitnessConfig;
use crate::grouping::Grouping;
use crate::model::{ColumnLimits, Instance};

/// A group under construction with its incrementally maintained course sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupState {
    pub members: Vec<usize>,
    pub new_courses: FixedBitSet,
    pub old_courses: FixedBitSet,
}

impl GroupState {
    pub fn empty(instance: &Instance) -> Self {
        GroupState {
            members: Vec::new(),
            new_courses: FixedBitSet::with_capacity(instance.course_count()),
            old_courses: FixedBitSet::with_capacity(instance.course_count()),
        }
    }

    pub fn singleton(instance: &Instance, student: usize) -> Self {
        let mut g = Self::empty(instance);
        g.add(instance, student);
        g
    }

    pub fn add(&mut self, instance: &Instance, student: usize) {
        self.members.push(student);
        self.new_courses.union_with(instance.new_set(student));
        self.old_courses.union_with(instance.old_set(student));
    }

    pub fn new_count(&self) -> usize {
        self.new_courses.count_ones(..)
    }

    pub fn old_count(&self) -> usize {
        self.old_courses.count_ones(..)
    }

    /// Unique NEW and OLD courses `student` would add to this group.
    pub fn added_courses(&self, instance: &Instance, student: usize) -> (usize, usize) {
        (
            instance.new_set(student).difference(&self.new_courses).count(),
            instance.old_set(student).difference(&self.old_courses).count(),
        )
    }

    /// Whether the group stays within `limits` after taking `student`.
    pub fn accepts(&self, instance: &Instance, student: usize, limits: &ColumnLimits) -> bool {
        let (dn, dold) = self.added_courses(instance, student);
        limits.fits(self.new_count() + dn, self.old_count() + dold)
    }
}

/// Picks the group that can take `student` while adding the fewest new
/// unique courses; ties go to the larger group, then to the lower index.
pub fn try_assign_best_fit(
    state: &[GroupState],
    student: usize,
    instance: &Instance,
    limits: &ColumnLimits,
) -> Option<usize> {
    let mut best: Option<(usize, usize, usize)> = None; // (added, size, index)
    for (g, group) in state.iter().enumerate() {
        let (dn, dold) = group.added_courses(instance, student);
        if !limits.fits(group.new_count() + dn, group.old_count() + dold) {
            continue;
        }
        let added = dn + dold;
        let size = group.members.len();
        let better = match best {
            None => true,
            Some((b_added, b_size, _)) => added < b_added || (added == b_added && size > b_size),
        };
        if better {
            best = Some((added, size, g));
        }
    }
    best.map(|(_, _, g)| g)
}

/// Runs the greedy construction over students in `order`.
pub fn greedy_solve(instance: &Instance, limits: &ColumnLimits, order: &[usize]) -> Grouping {
    let mut state: Vec<GroupState> = Vec::new();
    for &s in order {
        match try_assign_best_fit(&state, s, instance, limits) {
            Some(g) => state[g].add(instance, s),
            None => state.push(GroupState::singleton(instance, s)),
        }
    }
    Grouping::from_groups(instance, state.into_iter().map(|g| g.members).collect())
        .expect("greedy construction assigns each student exactly once")
}

/// Students by decreasing registration count, ties kept in input order.
pub fn hardest_first_order(instance: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..instance.student_count()).collect();
    order.sort_by_key(|&s| std::cmp::Reverse(instance.registration_count(s)));
    order
}

/// Hardest First Ordering. Deterministic.
pub fn hfo_solve(instance: &Instance, config: &FitnessConfig) -> Grouping {
    greedy_solve(instance, &config.limits, &hardest_first_order(instance))
}

/// Random Ordering: the greedy construction over a seeded uniform permutation.
pub fn ro_solve(instance: &Instance, config: &FitnessConfig, seed: u64) -> Grouping {
    let mut order: Vec<usize> = (0..instance.student_count()).collect();
    order.shuffle(&mut crate::rng_from_seed(seed));
    greedy_solve(instance, &config.limits, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_instance;

    fn rows(students: &[(&str, Vec<String>)]) -> Instance {
        let mut text = String::new();
        for (s, courses) in students {
            for c in courses {
                let year = if c.starts_with('o') { 2 } else { 4 };
                text += &format!("{s},{c},{year}\n");
            }
        }
        parse_instance(text.as_bytes(), Some(4)).unwrap()
    }

    fn range(prefix: &str, r: std::ops::RangeInclusive<usize>) -> Vec<String> {
        r.map(|i| format!("{prefix}{i}")).collect()
    }

    #[test]
    fn single_student_gets_one_group() {
        let inst = rows(&[("a", range("c", 1..=3))]);
        let g = hfo_solve(&inst, &FitnessConfig::default());
        assert_eq!(g.groups(), &[vec![0]]);
    }

    #[test]
    fn three_student_example() {
        let inst = rows(&[
            ("A", range("c", 1..=10)),
            ("B", range("c", 5..=14)),
            ("C", range("c", 1..=2)),
        ]);
        let g = hfo_solve(&inst, &FitnessConfig::default());
        assert_eq!(g.groups(), &[vec![0, 2], vec![1]]);
    }

    #[test]
    fn best_fit_prefers_fewest_added_courses() {
        let inst = rows(&[
            ("g1", range("c", 1..=10)),
            ("g2", range("c", 11..=20)),
            ("x", vec!["c3".into(), "c4".into()]),
        ]);
        let state = vec![GroupState::singleton(&inst, 0), GroupState::singleton(&inst, 1)];
        assert_eq!(
            try_assign_best_fit(&state, 2, &inst, &ColumnLimits::default()),
            Some(0)
        );
    }

    #[test]
    fn best_fit_ties_prefer_larger_then_lower_index() {
        let inst = rows(&[
            ("a", vec!["c1".into()]),
            ("b", vec!["c2".into()]),
            ("c", vec!["c2".into()]),
            ("x", vec!["c9".into()]),
        ]);
        let limits = ColumnLimits::default();
        let mut big = GroupState::singleton(&inst, 1);
        big.add(&inst, 2);
        let state = vec![GroupState::singleton(&inst, 0), big];
        assert_eq!(try_assign_best_fit(&state, 3, &inst, &limits), Some(1));
        let state = vec![GroupState::singleton(&inst, 0), GroupState::singleton(&inst, 1)];
        assert_eq!(try_assign_best_fit(&state, 3, &inst, &limits), Some(0));
    }

    #[test]
    fn oversized_student_fits_nowhere() {
        let inst = rows(&[("a", range("c", 1..=3)), ("big", range("c", 1..=14))]);
        let state = vec![GroupState::singleton(&inst, 0), GroupState::empty(&inst)];
        assert_eq!(
            try_assign_best_fit(&state, 1, &inst, &ColumnLimits::default()),
            None
        );
        let g = hfo_solve(&inst, &FitnessConfig::default());
        assert!(g.is_complete());
        assert_eq!(g.groups()[0], vec![1]);
    }

    #[test]
    fn hardest_first_ties_keep_input_order() {
        let inst = rows(&[
            ("a", range("c", 1..=2)),
            ("b", range("c", 1..=3)),
            ("c", range("c", 4..=5)),
        ]);
        assert_eq!(hardest_first_order(&inst), vec![1, 0, 2]);
    }

    #[test]
    fn ro_is_seeded() {
        let inst = rows(&[
            ("a", range("c", 1..=8)),
            ("b", range("c", 6..=13)),
            ("c", range("c", 12..=19)),
            ("d", range("o", 1..=5)),
        ]);
        let cfg = FitnessConfig::default();
        assert_eq!(ro_solve(&inst, &cfg, 9), ro_solve(&inst, &cfg, 9));
    }
}
