//! Domain types: courses, students, instances and result-sheet column limits.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Whether a course was introduced in the cohort's current year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CourseKind {
    New,
    Old,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Course {
    pub id: String,
    /// Year of study in which the course is introduced.
    pub intro_year: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Student {
    pub id: String,
    /// Course ids, deduplicated, in first-seen order.
    pub registrations: Vec<String>,
}

/// One row of an instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Registration {
    pub student: String,
    pub course: String,
    pub year: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnMode {
    /// Separate budgets for new and old courses.
    #[default]
    Fixed,
    /// One pooled budget for all courses of a group.
    Dynamic,
}

/// Column budget of one result sheet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColumnLimits {
    pub new_limit: usize,
    pub old_limit: usize,
    pub total_limit: usize,
    pub mode: ColumnMode,
}

impl Default for ColumnLimits {
    fn default() -> Self {
        ColumnLimits {
            new_limit: 13,
            old_limit: 13,
            total_limit: 26,
            mode: ColumnMode::Fixed,
        }
    }
}

impl ColumnLimits {
    pub fn dynamic() -> Self {
        ColumnLimits {
            mode: ColumnMode::Dynamic,
            ..Self::default()
        }
    }

    pub fn with_mode(self, mode: ColumnMode) -> Self {
        ColumnLimits { mode, ..self }
    }

    /// True when a group with these unique course counts fits on one sheet.
    pub fn fits(&self, new_count: usize, old_count: usize) -> bool {
        match self.mode {
            ColumnMode::Fixed => new_count <= self.new_limit && old_count <= self.old_limit,
            ColumnMode::Dynamic => new_count + old_count <= self.total_limit,
        }
    }
}

/// A cohort to be grouped. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    cohort_year: u32,
    courses: Vec<Course>,
    course_index: HashMap<String, usize>,
    kinds: Vec<CourseKind>,
    students: Vec<Student>,
    student_index: HashMap<String, usize>,
    new_sets: Vec<FixedBitSet>,
    old_sets: Vec<FixedBitSet>,
    limits: ColumnLimits,
}

impl Instance {
    /// Builds an instance. Courses referenced by students but missing from
    /// `courses` are rejected, as are students without registrations. The
    /// course table is stored sorted by id and keeps only courses somebody
    /// registered; student order is kept.
    pub fn new(
        name: impl Into<String>,
        cohort_year: u32,
        mut courses: Vec<Course>,
        students: Vec<Student>,
    ) -> Result<Self, ModelError> {
        let used: std::collections::HashSet<&str> = students
            .iter()
            .flat_map(|s| s.registrations.iter().map(String::as_str))
            .collect();
        courses.retain(|c| used.contains(c.id.as_str()));
        courses.sort_by(|a, b| a.id.cmp(&b.id));
        if cohort_year == 0 {
            return Err(ModelError::BadCohortYear);
        }
        if students.is_empty() {
            return Err(ModelError::NoStudents);
        }
        let mut course_index = HashMap::with_capacity(courses.len());
        for (i, c) in courses.iter().enumerate() {
            if course_index.insert(c.id.clone(), i).is_some() {
                return Err(ModelError::Invalid(format!("duplicate course {}", c.id)));
            }
        }
        let kinds: Vec<CourseKind> = courses
            .iter()
            .map(|c| {
                if c.intro_year == cohort_year {
                    CourseKind::New
                } else {
                    CourseKind::Old
                }
            })
            .collect();

        let n_courses = courses.len();
        let mut student_index = HashMap::with_capacity(students.len());
        let mut new_sets = Vec::with_capacity(students.len());
        let mut old_sets = Vec::with_capacity(students.len());
        for (i, s) in students.iter().enumerate() {
            if s.registrations.is_empty() {
                return Err(ModelError::NoRegistrations(s.id.clone()));
            }
            if student_index.insert(s.id.clone(), i).is_some() {
                return Err(ModelError::Invalid(format!("duplicate student {}", s.id)));
            }
            let mut new_set = FixedBitSet::with_capacity(n_courses);
            let mut old_set = FixedBitSet::with_capacity(n_courses);
            for reg in &s.registrations {
                let c = *course_index.get(reg).ok_or_else(|| {
                    ModelError::Invalid(format!("student {} references unknown course {reg}", s.id))
                })?;
                match kinds[c] {
                    CourseKind::New => new_set.insert(c),
                    CourseKind::Old => old_set.insert(c),
                }
            }
            new_sets.push(new_set);
            old_sets.push(old_set);
        }

        Ok(Instance {
            name: name.into(),
            cohort_year,
            courses,
            course_index,
            kinds,
            students,
            student_index,
            new_sets,
            old_sets,
            limits: ColumnLimits::default(),
        })
    }

    pub fn with_limits(mut self, limits: ColumnLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cohort_year(&self) -> u32 {
        self.cohort_year
    }

    pub fn courses(&self) -> &[Course] {
        &self.courses
    }

    pub fn students(&self) -> &[Student] {
        &self.students
    }

    pub fn student_count(&self) -> usize {
        self.students.len()
    }

    pub fn course_count(&self) -> usize {
        self.courses.len()
    }

    /// Limits the instance was declared with (the sheet defaults unless overridden).
    pub fn limits(&self) -> ColumnLimits {
        self.limits
    }

    pub fn course_kind(&self, course: usize) -> CourseKind {
        self.kinds[course]
    }

    pub fn course_position(&self, id: &str) -> Option<usize> {
        self.course_index.get(id).copied()
    }

    pub fn student_position(&self, id: &str) -> Option<usize> {
        self.student_index.get(id).copied()
    }

    /// Number of NEW and OLD courses in the course table.
    pub fn kind_counts(&self) -> (usize, usize) {
        let new = self.kinds.iter().filter(|k| **k == CourseKind::New).count();
        (new, self.kinds.len() - new)
    }

    /// Courses introduced after the cohort year. Registrations for them should
    /// not exist; they are kept and classified as OLD.
    pub fn future_courses(&self) -> Vec<&Course> {
        self.courses
            .iter()
            .filter(|c| c.intro_year > self.cohort_year)
            .collect()
    }

    /// NEW course set of a student, as course-table indices.
    pub fn new_set(&self, student: usize) -> &FixedBitSet {
        &self.new_sets[student]
    }

    /// OLD course set of a student, as course-table indices.
    pub fn old_set(&self, student: usize) -> &FixedBitSet {
        &self.old_sets[student]
    }

    /// Total number of distinct courses a student registered.
    pub fn registration_count(&self, student: usize) -> usize {
        self.students[student].registrations.len()
    }

    /// Flattens the instance back to file rows, students in order.
    pub fn registrations(&self) -> Vec<Registration> {
        let mut rows = Vec::new();
        for s in &self.students {
            for c in &s.registrations {
                let course = &self.courses[self.course_index[c]];
                rows.push(Registration {
                    student: s.id.clone(),
                    course: c.clone(),
                    year: course.intro_year,
                });
            }
        }
        rows
    }
}

/// Unique NEW and OLD course counts over a set of students.
pub fn course_profile(instance: &Instance, members: &[usize]) -> Result<(usize, usize), ModelError> {
    let len = instance.student_count();
    let mut new = FixedBitSet::with_capacity(instance.course_count());
    let mut old = FixedBitSet::with_capacity(instance.course_count());
    for &s in members {
        if s >= len {
            return Err(ModelError::StudentOutOfRange { index: s, len });
        }
        new.union_with(instance.new_set(s));
        old.union_with(instance.old_set(s));
    }
    Ok((new.count_ones(..), old.count_ones(..)))
}
