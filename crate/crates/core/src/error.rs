use thiserror::Error;

/// Failure while reading an instance file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("instance file is empty")]
    Empty,
    #[error("line {line}: expected 3 fields (student, course, year), found {found}")]
    Arity { line: usize, found: usize },
    #[error("line {line}: year {value:?} is not a positive integer")]
    BadYear { line: usize, value: String },
    #[error("line {line}: empty {field} field")]
    EmptyField { line: usize, field: &'static str },
    #[error("line {line}: course {course} already declared with year {first}, found {second}")]
    ConflictingYear {
        line: usize,
        course: String,
        first: u32,
        second: u32,
    },
    #[error("line {line}: {message}")]
    Io { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Contract violations on the domain model.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("instance has no students")]
    NoStudents,
    #[error("student {0} has no registrations")]
    NoRegistrations(String),
    #[error("cohort year must be at least 1")]
    BadCohortYear,
    #[error("student index {index} out of range for {len} students")]
    StudentOutOfRange { index: usize, len: usize },
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("invalid generator parameters: {0}")]
    Generator(String),
}

/// A grouping that breaks its structural invariants.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupingError {
    #[error("grouping belongs to instance {found:?}, expected {expected:?}")]
    WrongInstance { expected: String, found: String },
    #[error("assignment covers {found} students, instance has {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("student index {0} out of range")]
    StudentOutOfRange(usize),
    #[error("unknown student id {0:?}")]
    UnknownStudent(String),
    #[error("student {0} appears more than once")]
    Duplicate(usize),
    #[error("group {0} is empty")]
    EmptyGroup(usize),
    #[error("allele {value} at position {position} outside [0, {max}]")]
    AlleleOutOfRange {
        position: usize,
        value: usize,
        max: usize,
    },
    #[error("assignment and group membership disagree for student {0}")]
    Inconsistent(usize),
}
