//! Synthetic instances for tests and benchmarks.

use std::ops::RangeInclusive;

use rand::seq::index;
use rand::Rng;

use crate::error::ModelError;
use crate::model::{Course, Instance, Student};

/// Parameters of a synthetic cohort. Cohort year is always 4: NEW courses are
/// year-4 courses and OLD courses cycle through years 1 to 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub students: usize,
    pub new_courses: usize,
    pub old_courses: usize,
    /// Number of distinct courses each student registers, drawn uniformly.
    pub registrations: RangeInclusive<usize>,
    pub seed: u64,
}

pub const GENERATED_COHORT_YEAR: u32 = 4;

/// Builds a deterministic random instance from `spec`.
pub fn generate_instance(spec: &GeneratorSpec) -> Result<Instance, ModelError> {
    let total = spec.new_courses + spec.old_courses;
    if spec.students == 0 {
        return Err(ModelError::Generator("students must be positive".into()));
    }
    if total == 0 {
        return Err(ModelError::Generator("at least one course is required".into()));
    }
    let (lo, hi) = (*spec.registrations.start(), *spec.registrations.end());
    if lo == 0 || lo > hi {
        return Err(ModelError::Generator(format!(
            "registration range {lo}..={hi} must be non-empty and start at 1 or more"
        )));
    }
    if hi > total {
        return Err(ModelError::Generator(format!(
            "registration range {lo}..={hi} exceeds the {total} available courses"
        )));
    }

    let mut courses = Vec::with_capacity(total);
    for i in 0..spec.new_courses {
        courses.push(Course {
            id: format!("N{:02}", i + 1),
            intro_year: GENERATED_COHORT_YEAR,
        });
    }
    for i in 0..spec.old_courses {
        courses.push(Course {
            id: format!("O{:02}", i + 1),
            intro_year: (i % 3) as u32 + 1,
        });
    }

    let mut rng = crate::rng_from_seed(spec.seed);
    let students = (0..spec.students)
        .map(|s| {
            let k = rng.gen_range(lo..=hi);
            let mut picked = index::sample(&mut rng, total, k).into_vec();
            picked.sort_unstable();
            Student {
                id: format!("S{:03}", s + 1),
                registrations: picked.into_iter().map(|c| courses[c].id.clone()).collect(),
            }
        })
        .collect();

    let name = format!(
        "GEN-{}-{}-{}-{}",
        spec.students, spec.new_courses, spec.old_courses, spec.seed
    );
    Instance::new(name, GENERATED_COHORT_YEAR, courses, students)
}
