//! Genetic algorithm over integer group labels.
//!
//! Position `i` of an individual holds the group label of student `i`; labels
//! lie in `[0, m-1]` for `m` students and the number of distinct labels is the
//! number of groups. Individuals are never repaired, so most of the initial
//! population is infeasible and the fitness function does all the steering.

use rand::distributions::WeightedIndex;
use rand::prelude::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::GroupingError;
use crate::fitness::{evaluate, FitnessConfig, PenaltyBreakdown};
use crate::grouping::Grouping;
use crate::model::Instance;
use crate::SolverRng;

/// Strict improvement threshold for the stall counter.
pub const IMPROVEMENT_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossoverKind {
    #[default]
    SinglePoint,
    TwoPoint,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionKind {
    #[default]
    Tournament,
    Roulette,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub tournament_size: usize,
    pub p_crossover: f64,
    /// Per-individual probability of a single-allele mutation.
    pub p_mutation: f64,
    pub crossover_kind: CrossoverKind,
    pub selection_kind: SelectionKind,
    /// Stop after this many consecutive generations without improvement.
    pub stall_generations: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 100,
            tournament_size: 3,
            p_crossover: 0.5,
            p_mutation: 0.5,
            crossover_kind: CrossoverKind::SinglePoint,
            selection_kind: SelectionKind::Tournament,
            stall_generations: 20,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        GaConfig { seed, ..self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub alleles: Vec<usize>,
    /// Cleared whenever an operator changes the alleles.
    pub fitness: Option<PenaltyBreakdown>,
}

impl Individual {
    pub fn new(alleles: Vec<usize>) -> Self {
        Individual {
            alleles,
            fitness: None,
        }
    }

    /// Cached fitness value; panics if the individual was never evaluated.
    pub fn score(&self) -> f64 {
        self.fitness.expect("individual not evaluated").fitness
    }

    pub fn evaluate(&mut self, instance: &Instance, config: &FitnessConfig) -> f64 {
        if self.fitness.is_none() {
            let grouping = decode(self, instance).expect("alleles stay in range");
            self.fitness = Some(evaluate(instance, &grouping, config));
        }
        self.score()
    }
}

/// Relabels alleles densely by first appearance into a complete grouping.
pub fn decode(individual: &Individual, instance: &Instance) -> Result<Grouping, GroupingError> {
    let m = instance.student_count();
    if let Some((position, &value)) = individual.alleles.iter().enumerate().find(|(_, &v)| v >= m) {
        return Err(GroupingError::AlleleOutOfRange {
            position,
            value,
            max: m - 1,
        });
    }
    Grouping::from_labels(instance, &individual.alleles)
}

/// Uniform random individuals; no heuristic seeding.
pub fn init_population(instance: &Instance, config: &GaConfig, rng: &mut SolverRng) -> Vec<Individual> {
    let m = instance.student_count();
    (0..config.population_size)
        .map(|_| Individual::new((0..m).map(|_| rng.gen_range(0..m)).collect()))
        .collect()
}

/// With probability `p_mutation`, resets one random position to a random label.
pub fn mutate(mut individual: Individual, config: &GaConfig, rng: &mut SolverRng) -> Individual {
    let m = individual.alleles.len();
    if m == 0 || !rng.gen_bool(config.p_mutation) {
        return individual;
    }
    let pos = rng.gen_range(0..m);
    let value = rng.gen_range(0..m);
    if individual.alleles[pos] != value {
        individual.alleles[pos] = value;
        individual.fitness = None;
    }
    individual
}

/// Swaps the suffixes starting at `cut`.
pub fn single_point(a: &mut [usize], b: &mut [usize], cut: usize) {
    a[cut..].swap_with_slice(&mut b[cut..]);
}

/// Swaps the segment `[lo, hi)`.
pub fn two_point(a: &mut [usize], b: &mut [usize], lo: usize, hi: usize) {
    a[lo..hi].swap_with_slice(&mut b[lo..hi]);
}

/// With probability `p_crossover`, recombines two parents with the configured
/// operator; otherwise returns them unchanged.
pub fn crossover(
    a: Individual,
    b: Individual,
    config: &GaConfig,
    rng: &mut SolverRng,
) -> Result<(Individual, Individual), GroupingError> {
    let m = a.alleles.len();
    if b.alleles.len() != m {
        return Err(GroupingError::LengthMismatch {
            expected: m,
            found: b.alleles.len(),
        });
    }
    if m < 2 || !rng.gen_bool(config.p_crossover) {
        return Ok((a, b));
    }
    let mut x = a.alleles.clone();
    let mut y = b.alleles.clone();
    match config.crossover_kind {
        CrossoverKind::SinglePoint => {
            let cut = rng.gen_range(1..m);
            single_point(&mut x, &mut y, cut);
        }
        CrossoverKind::TwoPoint => {
            let mut lo = rng.gen_range(1..m);
            let mut hi = rng.gen_range(1..m);
            if lo > hi {
                std::mem::swap(&mut lo, &mut hi);
            }
            two_point(&mut x, &mut y, lo, hi);
        }
        CrossoverKind::Uniform => {
            for i in 0..m {
                if rng.gen_bool(0.5) {
                    std::mem::swap(&mut x[i], &mut y[i]);
                }
            }
        }
    }
    let child = |parent: Individual, alleles: Vec<usize>| {
        if alleles == parent.alleles {
            parent
        } else {
            Individual::new(alleles)
        }
    };
    Ok((child(a, x), child(b, y)))
}

fn best_index(pool: &[Individual]) -> usize {
    let mut best = 0;
    for (i, ind) in pool.iter().enumerate().skip(1) {
        if ind.score() < pool[best].score() {
            best = i;
        }
    }
    best
}

/// Draws the next population from an evaluated pool. The pool's best
/// individual always survives.
pub fn select(pool: &[Individual], config: &GaConfig, rng: &mut SolverRng) -> Vec<Individual> {
    assert!(!pool.is_empty(), "selection from an empty pool");
    let size = config.population_size;
    let mut next: Vec<Individual> = match config.selection_kind {
        SelectionKind::Tournament => (0..size)
            .map(|_| {
                let mut winner = rng.gen_range(0..pool.len());
                for _ in 1..config.tournament_size.max(1) {
                    let challenger = rng.gen_range(0..pool.len());
                    if pool[challenger].score() < pool[winner].score() {
                        winner = challenger;
                    }
                }
                pool[winner].clone()
            })
            .collect(),
        SelectionKind::Roulette => {
            let weights = pool.iter().map(|i| 1.0 / (1.0 + i.score()));
            let wheel = WeightedIndex::new(weights).expect("weights are positive and finite");
            (0..size).map(|_| pool[wheel.sample(rng)].clone()).collect()
        }
    };

    let elite = &pool[best_index(pool)];
    if !next.is_empty() && next.iter().all(|i| i.score() > elite.score()) {
        let worst = next
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.score().total_cmp(&b.1.score()))
            .map(|(i, _)| i)
            .expect("non-empty");
        next[worst] = elite.clone();
    }
    next
}

/// Best fitness held after each generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationBest {
    pub generation: usize,
    pub best_fitness: f64,
}

#[derive(Debug, Clone)]
pub struct GaOutcome {
    pub grouping: Grouping,
    pub breakdown: PenaltyBreakdown,
    pub best: Individual,
    pub history: Vec<GenerationBest>,
}

/// Evolves until `stall_generations` consecutive generations bring no
/// improvement of the best fitness.
pub fn ga_solve(instance: &Instance, config: &GaConfig, fitness: &FitnessConfig) -> GaOutcome {
    run(instance, config, fitness, |_, _| {})
}

/// As [`ga_solve`], calling `observe(generation, population)` after every
/// selection step.
pub fn run(
    instance: &Instance,
    config: &GaConfig,
    fitness: &FitnessConfig,
    mut observe: impl FnMut(usize, &[Individual]),
) -> GaOutcome {
    let mut rng = crate::rng_from_seed(config.seed);
    let mut population = init_population(instance, config, &mut rng);
    for ind in &mut population {
        ind.evaluate(instance, fitness);
    }
    let mut best = population[best_index(&population)].clone();
    let mut history = Vec::new();
    let mut stall = 0usize;
    let mut generation = 0usize;

    while stall < config.stall_generations.max(1) {
        generation += 1;
        let mut offspring = population.clone();
        offspring.shuffle(&mut rng);
        let mut children = Vec::with_capacity(offspring.len());
        let mut parents = offspring.into_iter();
        while let Some(a) = parents.next() {
            match parents.next() {
                Some(b) => {
                    let (x, y) = crossover(a, b, config, &mut rng).expect("equal lengths");
                    children.push(x);
                    children.push(y);
                }
                None => children.push(a),
            }
        }
        let mut children: Vec<Individual> = children
            .into_iter()
            .map(|c| mutate(c, config, &mut rng))
            .collect();
        for c in &mut children {
            c.evaluate(instance, fitness);
        }

        let mut pool = population;
        pool.extend(children);
        population = select(&pool, config, &mut rng);
        observe(generation, &population);

        let gen_best = &population[best_index(&population)];
        if gen_best.score() < best.score() - IMPROVEMENT_EPSILON {
            best = gen_best.clone();
            stall = 0;
        } else {
            stall += 1;
        }
        history.push(GenerationBest {
            generation,
            best_fitness: best.score(),
        });
    }

    let grouping = decode(&best, instance).expect("alleles stay in range");
    GaOutcome {
        breakdown: best.fitness.expect("evaluated"),
        grouping,
        best,
        history,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_instance;

    fn instance(n: usize) -> Instance {
        let rows: String = (0..n).map(|i| format!("s{i},c{},4\n", i % 3)).collect();
        parse_instance(rows.as_bytes(), None).unwrap()
    }

    #[test]
    fn decode_examples() {
        let inst = instance(5);
        let g = decode(&Individual::new(vec![0, 0, 0, 0, 0]), &inst).unwrap();
        assert_eq!(g.group_count(), 1);
        let g = decode(&Individual::new(vec![4, 4, 2, 4, 3]), &inst).unwrap();
        assert_eq!(g.groups(), &[vec![0, 1, 3], vec![2], vec![4]]);
        let g = decode(&Individual::new(vec![0, 1, 2, 3, 4]), &inst).unwrap();
        assert_eq!(g.group_count(), 5);
        assert_eq!(
            decode(&Individual::new(vec![0, 5, 0, 0, 0]), &inst),
            Err(GroupingError::AlleleOutOfRange {
                position: 1,
                value: 5,
                max: 4
            })
        );
    }

    #[test]
    fn single_point_cut_two() {
        let mut a = vec![0, 0, 0, 0];
        let mut b = vec![1, 1, 1, 1];
        single_point(&mut a, &mut b, 2);
        assert_eq!((a, b), (vec![0, 0, 1, 1], vec![1, 1, 0, 0]));
    }

    #[test]
    fn two_point_swaps_middle() {
        let mut a = vec![0, 0, 0, 0, 0];
        let mut b = vec![1, 1, 1, 1, 1];
        two_point(&mut a, &mut b, 1, 3);
        assert_eq!((a, b), (vec![0, 1, 1, 0, 0], vec![1, 0, 0, 1, 1]));
    }

    #[test]
    fn crossover_of_equal_parents_is_identity() {
        let mut rng = crate::rng_from_seed(1);
        for kind in [CrossoverKind::SinglePoint, CrossoverKind::TwoPoint, CrossoverKind::Uniform] {
            let cfg = GaConfig {
                p_crossover: 1.0,
                crossover_kind: kind,
                ..GaConfig::default()
            };
            let p = Individual::new(vec![3, 1, 4, 1, 5]);
            let (x, y) = crossover(p.clone(), p.clone(), &cfg, &mut rng).unwrap();
            assert_eq!((x, y), (p.clone(), p));
        }
    }

    #[test]
    fn crossover_length_mismatch() {
        let mut rng = crate::rng_from_seed(1);
        let r = crossover(
            Individual::new(vec![0, 1]),
            Individual::new(vec![0]),
            &GaConfig::default(),
            &mut rng,
        );
        assert!(r.is_err());
    }

    #[test]
    fn mutation_edge_cases() {
        let mut rng = crate::rng_from_seed(2);
        let off = GaConfig {
            p_mutation: 0.0,
            ..GaConfig::default()
        };
        let ind = Individual::new(vec![1, 2, 0]);
        assert_eq!(mutate(ind.clone(), &off, &mut rng), ind);
        let on = GaConfig {
            p_mutation: 1.0,
            ..GaConfig::default()
        };
        for _ in 0..50 {
            assert_eq!(mutate(Individual::new(vec![0]), &on, &mut rng).alleles, vec![0]);
        }
        for _ in 0..500 {
            let child = mutate(ind.clone(), &on, &mut rng);
            let diff = child.alleles.iter().zip(&ind.alleles).filter(|(a, b)| a != b).count();
            assert!(diff <= 1);
        }
    }

    #[test]
    fn init_population_single_student() {
        let inst = instance(1);
        let mut rng = crate::rng_from_seed(9);
        let pop = init_population(&inst, &GaConfig::default(), &mut rng);
        assert_eq!(pop.len(), 100);
        assert!(pop.iter().all(|i| i.alleles == vec![0]));
    }

    fn scored(alleles: Vec<usize>, fitness: f64) -> Individual {
        Individual {
            alleles,
            fitness: Some(PenaltyBreakdown {
                unfit: 0,
                size: 0,
                unassigned: 0,
                group_count: 1,
                fitness,
                mode: Default::default(),
            }),
        }
    }

    #[test]
    fn degenerate_tournament_returns_best() {
        let pool = vec![scored(vec![0], 5.0), scored(vec![1], 2.0), scored(vec![2], 9.0)];
        let cfg = GaConfig {
            population_size: 10,
            tournament_size: 3,
            ..GaConfig::default()
        };
        let mut rng = crate::rng_from_seed(4);
        // with-replacement draws can miss the best; elitism still keeps it
        let next = select(&pool, &cfg, &mut rng);
        assert!(next.iter().any(|i| i.score() == 2.0));
        let pool = vec![scored(vec![0], 5.0); 4];
        let next = select(&pool, &cfg, &mut rng);
        assert!(next.iter().all(|i| *i == pool[0]));
    }

    #[test]
    fn tournament_of_two_picks_better_three_quarters() {
        let pool = vec![scored(vec![0], 10.0), scored(vec![1], 1000.0)];
        let trials = 40_000;
        let cfg = GaConfig {
            population_size: trials,
            tournament_size: 2,
            ..GaConfig::default()
        };
        let mut rng = crate::rng_from_seed(77);
        let next = select(&pool, &cfg, &mut rng);
        let wins = next.iter().filter(|i| i.score() == 10.0).count();
        let sigma = (trials as f64 * 0.75 * 0.25).sqrt();
        assert!((wins as f64 - 0.75 * trials as f64).abs() < 3.0 * sigma, "{wins}");
    }

    #[test]
    fn roulette_favours_low_fitness() {
        let pool = vec![scored(vec![0], 0.0), scored(vec![1], 3.0)];
        let cfg = GaConfig {
            population_size: 20_000,
            selection_kind: SelectionKind::Roulette,
            ..GaConfig::default()
        };
        let mut rng = crate::rng_from_seed(8);
        let next = select(&pool, &cfg, &mut rng);
        let low = next.iter().filter(|i| i.score() == 0.0).count() as f64;
        // weights 1 and 1/4
        let p: f64 = 0.8;
        let sigma = (20_000.0 * p * (1.0 - p)).sqrt();
        assert!((low - p * 20_000.0).abs() < 3.0 * sigma, "{low}");
    }

    #[test]
    fn single_student_solution() {
        let inst = instance(1);
        let out = ga_solve(&inst, &GaConfig::default(), &FitnessConfig::default());
        assert_eq!(out.grouping.group_count(), 1);
        assert_eq!(out.breakdown.fitness, 1.0);
    }
}
