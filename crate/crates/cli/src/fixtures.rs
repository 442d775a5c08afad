//! Bundled fixture files, addressed as `builtin:<name>`.

use rcat_core::error::{Error, Result};

pub const MANIFEST: &str = include_str!("../fixtures/manifest.json");

const SOURCES: [(&str, &str); 6] = [
    ("triv3", include_str!("../fixtures/triv3.json")),
    ("max5a", include_str!("../fixtures/max5a.json")),
    ("max5b", include_str!("../fixtures/max5b.json")),
    ("pfin2", include_str!("../fixtures/pfin2.json")),
    ("inj2", include_str!("../fixtures/inj2.json")),
    ("ab2", include_str!("../fixtures/ab2.json")),
];

pub fn source(name: &str) -> Result<&'static str> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::Input(format!("no bundled fixture `{name}`")))
}
