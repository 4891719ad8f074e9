#![allow(dead_code)]

pub mod oracle;

use srg_core::{generate_instance, parse_named, GeneratorSpec, Instance};

/// Builds an instance from `(student, [course])` pairs. Courses starting with
/// `o` are year-2 (OLD) courses, the rest year-4 (NEW).
pub fn instance(name: &str, students: &[(&str, Vec<String>)]) -> Instance {
    let mut text = String::new();
    for (s, courses) in students {
        for c in courses {
            let year = if c.starts_with('o') { 2 } else { 4 };
            text += &format!("{s},{c},{year}\n");
        }
    }
    parse_named(name, text.as_bytes(), Some(4)).unwrap()
}

pub fn courses(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// The fixed family of small generated instances used for oracle comparisons.
pub fn desk_scale_family() -> Vec<Instance> {
    (0..24u64)
        .map(|k| {
            let k_us = k as usize;
            generate_instance(&GeneratorSpec {
                students: 5 + k_us % 4,
                new_courses: 16 + (k_us % 5) * 2,
                old_courses: 12 + (k_us % 3) * 3,
                registrations: 3..=9,
                seed: 1000 + k,
            })
            .unwrap()
        })
        .collect()
}
