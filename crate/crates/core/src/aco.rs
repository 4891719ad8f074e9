//! Max-Min ant colony optimization over a `groups x students` pheromone matrix.
//!
//! The number of group slots is fixed by the hardest-first solution. Each ant
//! builds a complete grouping by repeatedly choosing an (unassigned student,
//! slot) pair that keeps the slot within the column limits, with probability
//! proportional to `eta(s)^alpha * T[g][s]^beta`, where `eta(s)` is the
//! student's registration count. After every iteration the whole matrix
//! evaporates and the iteration-best path is reinforced. Trails are clamped
//! to `[t_min, t_max]`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructive::{hardest_first_order, hfo_solve, GroupState};
use crate::fitness::{evaluate, group_excess, FitnessConfig, PenaltyBreakdown};
use crate::grouping::Grouping;
use crate::model::{ColumnLimits, Instance};
use crate::SolverRng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcoConfig {
    /// Evaporation rate.
    pub rho: f64,
    /// Exponent on the hardest-first desirability.
    pub alpha: f64,
    /// Exponent on the trail value.
    pub beta: f64,
    pub num_ants: usize,
    pub num_iterations: usize,
    /// Stop after this many iterations without a new global best.
    pub stall_limit: usize,
    pub t_max: f64,
    pub t_min: f64,
    pub seed: u64,
}

impl Default for AcoConfig {
    fn default() -> Self {
        AcoConfig {
            rho: 0.02,
            alpha: 0.0,
            beta: 1.0,
            num_ants: 10,
            num_iterations: 500,
            stall_limit: 100,
            t_max: 10.0,
            t_min: 0.1,
            seed: 0,
        }
    }
}

impl AcoConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        AcoConfig { seed, ..self }
    }
}

/// Trail values, stored slot-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneMatrix {
    groups: usize,
    students: usize,
    trails: Vec<f64>,
    t_max: f64,
    t_min: f64,
}

impl PheromoneMatrix {
    /// A matrix with every entry at `t_max`.
    pub fn new(groups: usize, students: usize, t_max: f64, t_min: f64) -> Self {
        assert!(t_min > 0.0 && t_min <= t_max, "need 0 < t_min <= t_max");
        PheromoneMatrix {
            groups,
            students,
            trails: vec![t_max; groups * students],
            t_max,
            t_min,
        }
    }

    pub fn groups(&self) -> usize {
        self.groups
    }

    pub fn students(&self) -> usize {
        self.students
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn get(&self, group: usize, student: usize) -> f64 {
        self.trails[group * self.students + student]
    }

    /// Sets one entry, clamped to `[t_min, t_max]`.
    pub fn set(&mut self, group: usize, student: usize, value: f64) {
        self.trails[group * self.students + student] = value.clamp(self.t_min, self.t_max);
    }

    pub fn values(&self) -> &[f64] {
        &self.trails
    }

    /// `T <- max(t_min, T * (1 - rho))` for every entry.
    pub fn evaporate(&mut self, rho: f64) {
        let keep = 1.0 - rho;
        let floor = self.t_min;
        for t in &mut self.trails {
            *t = (*t * keep).max(floor);
        }
    }

    /// Adds `amount` to `T[path[s]][s]` for every student `s`, capped at `t_max`.
    pub fn deposit(&mut self, path: &[usize], amount: f64) {
        debug_assert_eq!(path.len(), self.students);
        for (s, &g) in path.iter().enumerate() {
            let t = &mut self.trails[g * self.students + s];
            *t = (*t + amount).min(self.t_max);
        }
    }
}

/// Deposit amount for the iteration best: 1 when it is at least as good as
/// the global best (or there is none yet), otherwise `1 / (current - best)`,
/// capped at 1 so a worse path never earns more than an improving one.
pub fn reward(global_best: Option<f64>, current_quality: f64) -> f64 {
    match global_best {
        Some(best) if best < current_quality => (1.0 / (current_quality - best)).min(1.0),
        _ => 1.0,
    }
}

/// One ant's walk: the slot of every student and the order of choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntPath {
    /// Slot index per student.
    pub slots: Vec<usize>,
    /// `(student, slot)` in the order they were chosen.
    pub picks: Vec<(usize, usize)>,
}

/// Builds one complete assignment of students to the matrix's slots.
///
/// When no violation-free pair remains, the leftover students are placed one
/// at a time (hardest first) in the slot whose unfit penalty grows least,
/// ties going to the higher trail and then the lower slot index.
pub fn ant_traverse(
    instance: &Instance,
    matrix: &PheromoneMatrix,
    config: &AcoConfig,
    limits: &ColumnLimits,
    rng: &mut SolverRng,
) -> AntPath {
    let m = instance.student_count();
    let n = matrix.groups();
    assert_eq!(matrix.students(), m, "matrix not sized for instance");
    assert!(n > 0, "matrix has no group slots");

    let mut state: Vec<GroupState> = (0..n).map(|_| GroupState::empty(instance)).collect();
    // weight[s * n + g] > 0 iff (s, g) is still open
    let mut weight = vec![0.0f64; m * n];
    let mut row_sum = vec![0.0f64; m];
    let mut row_open = vec![0usize; m];
    for s in 0..m {
        let eta = if config.alpha == 0.0 {
            1.0
        } else {
            (instance.registration_count(s) as f64).powf(config.alpha)
        };
        for g in 0..n {
            if state[g].accepts(instance, s, limits) {
                let tau = matrix.get(g, s);
                let tau = if config.beta == 1.0 { tau } else { tau.powf(config.beta) };
                let w = eta * tau;
                weight[s * n + g] = w;
                row_sum[s] += w;
                row_open[s] += 1;
            }
        }
    }

    let mut slots = vec![usize::MAX; m];
    let mut picks = Vec::with_capacity(m);
    let mut remaining = m;
    let hardest = hardest_first_order(instance);

    while remaining > 0 {
        let total: f64 = row_sum.iter().sum();
        let (s, g) = if total > 0.0 {
            roulette_pair(&weight, &row_sum, n, total, rng)
        } else {
            let s = *hardest
                .iter()
                .find(|&&s| slots[s] == usize::MAX)
                .expect("remaining > 0");
            (s, least_violation_slot(instance, &state, matrix, limits, s))
        };

        slots[s] = g;
        picks.push((s, g));
        remaining -= 1;
        state[g].add(instance, s);
        for gg in 0..n {
            weight[s * n + gg] = 0.0;
        }
        row_sum[s] = 0.0;
        row_open[s] = 0;

        // Slot g grew; close pairs it can no longer accept.
        for t in 0..m {
            let idx = t * n + g;
            if weight[idx] > 0.0 && !state[g].accepts(instance, t, limits) {
                row_sum[t] -= weight[idx];
                weight[idx] = 0.0;
                row_open[t] -= 1;
                if row_open[t] == 0 {
                    row_sum[t] = 0.0;
                }
            }
        }
    }
    AntPath { slots, picks }
}

fn roulette_pair(weight: &[f64], row_sum: &[f64], n: usize, total: f64, rng: &mut SolverRng) -> (usize, usize) {
    let last_open = |s: usize| (0..n).rev().find(|&g| weight[s * n + g] > 0.0);
    let mut r = rng.gen::<f64>() * total;
    let mut fallback = None;
    for (s, &rs) in row_sum.iter().enumerate() {
        if rs <= 0.0 {
            continue;
        }
        if r < rs {
            for g in 0..n {
                let w = weight[s * n + g];
                if w > 0.0 {
                    if r < w {
                        return (s, g);
                    }
                    r -= w;
                }
            }
            // rounding remainder inside this row
            return (s, last_open(s).expect("open row has an open slot"));
        }
        r -= rs;
        fallback = Some(s);
    }
    let s = fallback.expect("total > 0 implies an open pair");
    (s, last_open(s).expect("open row has an open slot"))
}

fn least_violation_slot(
    instance: &Instance,
    state: &[GroupState],
    matrix: &PheromoneMatrix,
    limits: &ColumnLimits,
    student: usize,
) -> usize {
    let mut best: Option<(u64, f64, usize)> = None;
    for (g, group) in state.iter().enumerate() {
        let size = group.members.len() as u64;
        let before = group_excess(group.new_count(), group.old_count(), limits) * size;
        let (dn, dold) = group.added_courses(instance, student);
        let after = group_excess(group.new_count() + dn, group.old_count() + dold, limits) * (size + 1);
        let increase = after - before;
        let trail = matrix.get(g, student);
        let better = match best {
            None => true,
            Some((bi, bt, _)) => increase < bi || (increase == bi && trail > bt),
        };
        if better {
            best = Some((increase, trail, g));
        }
    }
    best.expect("at least one slot").2
}

/// Best fitness seen after each iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationBest {
    pub iteration: usize,
    pub best_fitness: f64,
}

#[derive(Debug, Clone)]
pub struct AcoOutcome {
    pub grouping: Grouping,
    pub breakdown: PenaltyBreakdown,
    /// Slot count taken from the hardest-first solution.
    pub slots: usize,
    pub history: Vec<IterationBest>,
}

/// Runs the colony until `num_iterations` or `stall_limit` iterations
/// without improvement, returning the global best.
pub fn aco_solve(instance: &Instance, config: &AcoConfig, fitness: &FitnessConfig) -> AcoOutcome {
    let slots = hfo_solve(instance, fitness).group_count();
    let mut matrix = PheromoneMatrix::new(slots, instance.student_count(), config.t_max, config.t_min);
    let mut rng = crate::rng_from_seed(config.seed);

    let score = |path: &AntPath| {
        let grouping = Grouping::from_labels(instance, &path.slots).expect("ant assigns every student");
        let breakdown = evaluate(instance, &grouping, fitness);
        (grouping, breakdown)
    };

    let mut global: Option<(Grouping, PenaltyBreakdown)> = None;
    let mut history = Vec::new();
    let mut stall = 0usize;

    for iteration in 1..=config.num_iterations {
        let mut cycle: Option<(AntPath, Grouping, PenaltyBreakdown)> = None;
        for _ in 0..config.num_ants.max(1) {
            let path = ant_traverse(instance, &matrix, config, &fitness.limits, &mut rng);
            let (grouping, breakdown) = score(&path);
            if cycle
                .as_ref()
                .is_none_or(|(_, _, best)| breakdown.fitness < best.fitness)
            {
                cycle = Some((path, grouping, breakdown));
            }
        }
        let (path, grouping, breakdown) = cycle.expect("at least one ant");

        matrix.evaporate(config.rho);
        let global_fitness = global.as_ref().map(|(_, b)| b.fitness);
        matrix.deposit(&path.slots, reward(global_fitness, breakdown.fitness));

        if global_fitness.is_none_or(|g| breakdown.fitness < g) {
            global = Some((grouping, breakdown));
            stall = 0;
        } else {
            stall += 1;
        }
        let best_fitness = global.as_ref().expect("set above").1.fitness;
        history.push(IterationBest {
            iteration,
            best_fitness,
        });
        if stall >= config.stall_limit {
            break;
        }
    }

    let (grouping, breakdown) = global.unwrap_or_else(|| {
        let g = hfo_solve(instance, fitness);
        let b = evaluate(instance, &g, fitness);
        (g, b)
    });
    AcoOutcome {
        grouping,
        breakdown,
        slots,
        history,
    }
}
