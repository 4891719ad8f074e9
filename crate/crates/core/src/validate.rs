//! Constraint checking for groupings read from disk.
//!
//! The numbered constraints are:
//! 1. every student is assigned to a group;
//! 2. no student is assigned more than once;
//! 3. a group's unique courses fit the pooled column budget (dynamic mode);
//! 4. a group's unique NEW courses fit the NEW budget (fixed mode);
//! 5. a group's unique OLD courses fit the OLD budget (fixed mode).

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::grouping::GroupingFile;
use crate::model::{course_profile, ColumnLimits, ColumnMode, Instance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    WrongInstance { expected: String, found: String },
    UnknownStudent { student: String },
    EmptyGroup { group: usize },
    Unassigned { students: Vec<String> },
    Duplicate { student: String, occurrences: usize },
    TotalCourses { group: usize, count: usize, limit: usize },
    NewCourses { group: usize, count: usize, limit: usize },
    OldCourses { group: usize, count: usize, limit: usize },
}

impl Violation {
    /// Numbered grouping constraint this violation breaks, if any.
    pub fn constraint(&self) -> Option<u8> {
        match self {
            Violation::Unassigned { .. } => Some(1),
            Violation::Duplicate { .. } => Some(2),
            Violation::TotalCourses { .. } => Some(3),
            Violation::NewCourses { .. } => Some(4),
            Violation::OldCourses { .. } => Some(5),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongInstance { expected, found } => {
                write!(f, "grouping is for instance {found}, expected {expected}")
            }
            Violation::UnknownStudent { student } => write!(f, "unknown student {student}"),
            Violation::EmptyGroup { group } => write!(f, "group {group} is empty"),
            Violation::Unassigned { students } => write!(
                f,
                "constraint 1: {} student(s) not assigned: {}",
                students.len(),
                students.join(", ")
            ),
            Violation::Duplicate {
                student,
                occurrences,
            } => write!(f, "constraint 2: student {student} listed {occurrences} times"),
            Violation::TotalCourses { group, count, limit } => write!(
                f,
                "constraint 3: group {group} has {count} unique courses (limit {limit})"
            ),
            Violation::NewCourses { group, count, limit } => write!(
                f,
                "constraint 4: group {group} has {count} unique new courses (limit {limit})"
            ),
            Violation::OldCourses { group, count, limit } => write!(
                f,
                "constraint 5: group {group} has {count} unique old courses (limit {limit})"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupProfile {
    pub group: usize,
    pub size: usize,
    pub new_courses: usize,
    pub old_courses: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    pub instance: String,
    pub limits: ColumnLimits,
    pub groups: Vec<GroupProfile>,
    pub violations: Vec<Violation>,
}

impl ConstraintReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a grouping file against the instance and column limits. Unlike
/// [`crate::Grouping::from_file`] this never stops at the first problem.
pub fn check_constraints(instance: &Instance, file: &GroupingFile, limits: &ColumnLimits) -> ConstraintReport {
    let mut violations = Vec::new();
    if file.instance != instance.name() {
        violations.push(Violation::WrongInstance {
            expected: instance.name().to_string(),
            found: file.instance.clone(),
        });
    }

    let mut occurrences: HashMap<&str, usize> = HashMap::new();
    let mut order: Vec<&str> = Vec::new();
    let mut profiles = Vec::with_capacity(file.groups.len());
    let mut course_violations = Vec::new();

    for (g, members) in file.groups.iter().enumerate() {
        if members.is_empty() {
            violations.push(Violation::EmptyGroup { group: g });
        }
        let mut known = Vec::with_capacity(members.len());
        for id in members {
            let count = occurrences.entry(id.as_str()).or_insert(0);
            if *count == 0 {
                order.push(id);
            }
            *count += 1;
            match instance.student_position(id) {
                Some(s) if !known.contains(&s) => known.push(s),
                Some(_) => {}
                None if *count == 1 => violations.push(Violation::UnknownStudent {
                    student: id.clone(),
                }),
                None => {}
            }
        }
        let (new, old) = course_profile(instance, &known).expect("positions come from the instance");
        profiles.push(GroupProfile {
            group: g,
            size: members.len(),
            new_courses: new,
            old_courses: old,
        });
        match limits.mode {
            ColumnMode::Fixed => {
                if new > limits.new_limit {
                    course_violations.push(Violation::NewCourses {
                        group: g,
                        count: new,
                        limit: limits.new_limit,
                    });
                }
                if old > limits.old_limit {
                    course_violations.push(Violation::OldCourses {
                        group: g,
                        count: old,
                        limit: limits.old_limit,
                    });
                }
            }
            ColumnMode::Dynamic => {
                if new + old > limits.total_limit {
                    course_violations.push(Violation::TotalCourses {
                        group: g,
                        count: new + old,
                        limit: limits.total_limit,
                    });
                }
            }
        }
    }

    let missing: Vec<String> = instance
        .students()
        .iter()
        .filter(|s| !occurrences.contains_key(s.id.as_str()))
        .map(|s| s.id.clone())
        .collect();
    if !missing.is_empty() {
        violations.push(Violation::Unassigned { students: missing });
    }
    for id in order {
        let n = occurrences[id];
        if n > 1 {
            violations.push(Violation::Duplicate {
                student: id.to_string(),
                occurrences: n,
            });
        }
    }
    violations.extend(course_violations);

    ConstraintReport {
        instance: instance.name().to_string(),
        limits: *limits,
        groups: profiles,
        violations,
    }
}
