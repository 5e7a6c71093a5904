//! Instance files, reports and SVG rendering.

pub mod format;
pub mod report;
pub mod svg;

pub use format::{parse_instance, Instance, InstanceConfig, ParseError, ParseErrorKind};

/// Shipped instances, by name.
pub const FIXTURES: &[(&str, &str)] = &[
    ("d8_lemma3", include_str!("../../fixtures/d8_lemma3.inst")),
    ("d10_lemma4", include_str!("../../fixtures/d10_lemma4.inst")),
    ("d8prime_grs", include_str!("../../fixtures/d8prime_grs.inst")),
    ("unit_square", include_str!("../../fixtures/unit_square.inst")),
    ("square_twofold", include_str!("../../fixtures/square_twofold.inst")),
    ("hexagon_fedorov", include_str!("../../fixtures/hexagon_fedorov.inst")),
    ("parallelogram", include_str!("../../fixtures/parallelogram.inst")),
    ("d8_badshear", include_str!("../../fixtures/d8_badshear.inst")),
];

pub fn fixture(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Parses a shipped instance; panics if the name is unknown.
pub fn load_fixture(name: &str) -> Instance {
    let text = fixture(name).unwrap_or_else(|| panic!("no fixture named {name}"));
    parse_instance(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}
