//! Instance files: one `student, course, year` registration per line,
//! comma- or tab-separated, optional header row.

use std::collections::HashMap;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::error::ParseError;
use crate::model::{Course, Instance, Student};

/// Parses an instance named `"instance"`. See [`parse_named`].
pub fn parse_instance<R: Read>(source: R, cohort_year: Option<u32>) -> Result<Instance, ParseError> {
    parse_named("instance", source, cohort_year)
}

/// Reads an instance file, naming the instance after the file stem.
pub fn load_instance(path: &Path, cohort_year: Option<u32>) -> Result<Instance, ParseError> {
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string());
    let file = std::fs::File::open(path).map_err(|e| ParseError::Io {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_named(&name, io::BufReader::new(file), cohort_year)
}

/// Parses registration rows into an instance.
///
/// The cohort year is `cohort_year` when given, otherwise the largest year in
/// the file. Students keep their order of first appearance; repeated
/// `(student, course)` rows collapse into one registration. A first line whose
/// year field is not numeric is treated as a header.
pub fn parse_named<R: Read>(
    name: &str,
    mut source: R,
    cohort_year: Option<u32>,
) -> Result<Instance, ParseError> {
    let mut text = String::new();
    source.read_to_string(&mut text).map_err(|e| ParseError::Io {
        line: 0,
        message: e.to_string(),
    })?;
    let delimiter = match text.lines().find(|l| !l.trim().is_empty()) {
        None => return Err(ParseError::Empty),
        Some(first) if first.contains('\t') => b'\t',
        Some(_) => b',',
    };

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .delimiter(delimiter)
        .from_reader(text.as_bytes());

    let mut courses: Vec<Course> = Vec::new();
    let mut course_lines: HashMap<String, usize> = HashMap::new();
    let mut students: Vec<Student> = Vec::new();
    let mut student_pos: HashMap<String, usize> = HashMap::new();
    let mut max_year = 0u32;
    let mut first_record = true;

    for record in reader.records() {
        let record = record.map_err(|e| ParseError::Io {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 3 {
            return Err(ParseError::Arity {
                line,
                found: record.len(),
            });
        }
        let (student, course, year) = (&record[0], &record[1], &record[2]);
        let year: u32 = match year.parse() {
            Ok(y) if y >= 1 => y,
            Ok(_) => {
                return Err(ParseError::BadYear {
                    line,
                    value: year.to_string(),
                })
            }
            Err(_) if first_record && year.parse::<i64>().is_err() => {
                first_record = false;
                continue;
            }
            Err(_) => {
                return Err(ParseError::BadYear {
                    line,
                    value: year.to_string(),
                })
            }
        };
        first_record = false;
        if student.is_empty() {
            return Err(ParseError::EmptyField {
                line,
                field: "student",
            });
        }
        if course.is_empty() {
            return Err(ParseError::EmptyField {
                line,
                field: "course",
            });
        }

        match course_lines.get(course) {
            Some(&c) if courses[c].intro_year != year => {
                return Err(ParseError::ConflictingYear {
                    line,
                    course: course.to_string(),
                    first: courses[c].intro_year,
                    second: year,
                })
            }
            Some(_) => {}
            None => {
                course_lines.insert(course.to_string(), courses.len());
                courses.push(Course {
                    id: course.to_string(),
                    intro_year: year,
                });
            }
        }
        max_year = max_year.max(year);

        let s = *student_pos.entry(student.to_string()).or_insert_with(|| {
            students.push(Student {
                id: student.to_string(),
                registrations: Vec::new(),
            });
            students.len() - 1
        });
        let regs = &mut students[s].registrations;
        if !regs.iter().any(|r| r == course) {
            regs.push(course.to_string());
        }
    }

    if students.is_empty() {
        return Err(ParseError::Empty);
    }
    let cohort = cohort_year.unwrap_or(max_year);
    Ok(Instance::new(name, cohort, courses, students)?)
}

/// Writes an instance as comma-separated rows with a header.
pub fn write_instance<W: Write>(instance: &Instance, sink: W) -> io::Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(["student", "course", "year"])?;
    for row in instance.registrations() {
        writer.write_record([row.student, row.course, row.year.to_string()])?;
    }
    writer.flush()
}
