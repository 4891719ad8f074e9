//! Assignments of students to groups.

use serde::{Deserialize, Serialize};

use crate::error::GroupingError;
use crate::model::Instance;

/// A possibly partial partition of an instance's students.
///
/// Group indices are dense: `0..group_count()`, none empty. Members are
/// student indices into [`Instance::students`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    instance: String,
    assignment: Vec<Option<usize>>,
    groups: Vec<Vec<usize>>,
}

impl Grouping {
    /// A grouping with every student unassigned.
    pub fn empty(instance: &Instance) -> Self {
        Grouping {
            instance: instance.name().to_string(),
            assignment: vec![None; instance.student_count()],
            groups: Vec::new(),
        }
    }

    /// Builds a grouping from explicit member lists. Students not listed stay unassigned.
    pub fn from_groups(instance: &Instance, groups: Vec<Vec<usize>>) -> Result<Self, GroupingError> {
        let n = instance.student_count();
        let mut assignment = vec![None; n];
        for (g, members) in groups.iter().enumerate() {
            if members.is_empty() {
                return Err(GroupingError::EmptyGroup(g));
            }
            for &s in members {
                let slot = assignment
                    .get_mut(s)
                    .ok_or(GroupingError::StudentOutOfRange(s))?;
                if slot.is_some() {
                    return Err(GroupingError::Duplicate(s));
                }
                *slot = Some(g);
            }
        }
        Ok(Grouping {
            instance: instance.name().to_string(),
            assignment,
            groups,
        })
    }

    /// Builds a complete grouping from one arbitrary label per student.
    /// Labels are relabelled densely in order of first appearance.
    pub fn from_labels(instance: &Instance, labels: &[usize]) -> Result<Self, GroupingError> {
        let n = instance.student_count();
        if labels.len() != n {
            return Err(GroupingError::LengthMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        let mut dense: Vec<Option<usize>> = Vec::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut assignment = Vec::with_capacity(n);
        for (s, &label) in labels.iter().enumerate() {
            if label >= dense.len() {
                dense.resize(label + 1, None);
            }
            let g = *dense[label].get_or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(s);
            assignment.push(Some(g));
        }
        Ok(Grouping {
            instance: instance.name().to_string(),
            assignment,
            groups,
        })
    }

    pub fn instance_name(&self) -> &str {
        &self.instance
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Group index per student, `None` when unassigned.
    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    pub fn student_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn assigned_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn unassigned(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(s, g)| g.is_none().then_some(s))
    }

    /// Appends a student as a new singleton group and returns its index.
    pub fn push_group(&mut self, student: usize) -> Result<usize, GroupingError> {
        self.check_unassigned(student)?;
        let g = self.groups.len();
        self.groups.push(vec![student]);
        self.assignment[student] = Some(g);
        Ok(g)
    }

    /// Adds a student to an existing group.
    pub fn assign(&mut self, student: usize, group: usize) -> Result<(), GroupingError> {
        self.check_unassigned(student)?;
        let members = self
            .groups
            .get_mut(group)
            .ok_or(GroupingError::EmptyGroup(group))?;
        members.push(student);
        self.assignment[student] = Some(group);
        Ok(())
    }

    fn check_unassigned(&self, student: usize) -> Result<(), GroupingError> {
        match self.assignment.get(student) {
            None => Err(GroupingError::StudentOutOfRange(student)),
            Some(Some(_)) => Err(GroupingError::Duplicate(student)),
            Some(None) => Ok(()),
        }
    }

    /// Checks every structural invariant against `instance`.
    pub fn validate(&self, instance: &Instance) -> Result<(), GroupingError> {
        if self.instance != instance.name() {
            return Err(GroupingError::WrongInstance {
                expected: instance.name().to_string(),
                found: self.instance.clone(),
            });
        }
        let n = instance.student_count();
        if self.assignment.len() != n {
            return Err(GroupingError::LengthMismatch {
                expected: n,
                found: self.assignment.len(),
            });
        }
        let mut seen = vec![false; n];
        for (g, members) in self.groups.iter().enumerate() {
            if members.is_empty() {
                return Err(GroupingError::EmptyGroup(g));
            }
            for &s in members {
                if s >= n {
                    return Err(GroupingError::StudentOutOfRange(s));
                }
                if std::mem::replace(&mut seen[s], true) {
                    return Err(GroupingError::Duplicate(s));
                }
                if self.assignment[s] != Some(g) {
                    return Err(GroupingError::Inconsistent(s));
                }
            }
        }
        for (s, g) in self.assignment.iter().enumerate() {
            if g.is_some() != seen[s] {
                return Err(GroupingError::Inconsistent(s));
            }
        }
        Ok(())
    }

    /// Converts to the on-disk form using student ids.
    pub fn to_file(&self, instance: &Instance) -> GroupingFile {
        let id = |s: usize| instance.students()[s].id.clone();
        GroupingFile {
            instance: self.instance.clone(),
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(|&s| id(s)).collect())
                .collect(),
            unassigned: self.unassigned().map(id).collect(),
        }
    }

    /// Reads the on-disk form back. Student ids must exist and appear at most
    /// once; students missing from the file are left unassigned.
    pub fn from_file(instance: &Instance, file: &GroupingFile) -> Result<Self, GroupingError> {
        let resolve = |id: &String| {
            instance
                .student_position(id)
                .ok_or_else(|| GroupingError::UnknownStudent(id.clone()))
        };
        let groups = file
            .groups
            .iter()
            .map(|g| g.iter().map(resolve).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let mut grouping = Grouping::from_groups(instance, groups)?;
        grouping.instance = file.instance.clone();
        for id in &file.unassigned {
            let s = resolve(id)?;
            if grouping.assignment[s].is_some() {
                return Err(GroupingError::Duplicate(s));
            }
        }
        Ok(grouping)
    }
}

/// JSON form of a grouping: `{instance, groups: [[student ids]], unassigned: [student ids]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupingFile {
    pub instance: String,
    pub groups: Vec<Vec<String>>,
    #[serde(default)]
    pub unassigned: Vec<String>,
}
