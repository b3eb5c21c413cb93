use serde_json::Value;

use super::CorpusError;
use crate::patch::{Patch, PatchFile};

/// Shipped fixtures: name and patch file contents.
const FILES: &[(&str, &str)] = &[
    (
        "corner_contact_spiral",
        include_str!("../../fixtures/corner_contact_spiral.json"),
    ),
    ("disrupted_arms", include_str!("../../fixtures/disrupted_arms.json")),
    ("double_partition", include_str!("../../fixtures/double_partition.json")),
    ("pseudo_spiral", include_str!("../../fixtures/pseudo_spiral.json")),
    ("triangle_rhombus", include_str!("../../fixtures/triangle_rhombus.json")),
];

/// A shipped patch with the annotation block describing what it contains.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub patch: Patch,
    pub expected: Value,
}

pub fn fixture_names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

/// Loads a fixture by name from the registry.
pub fn load_fixture(name: &str) -> Result<Fixture, CorpusError> {
    let text = FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| CorpusError::UnknownFixture(name.to_string()))?;
    let mut file: PatchFile = serde_json::from_str(text).map_err(crate::patch::PatchError::from)?;
    let expected = file.expected.take().unwrap_or(Value::Null);
    Ok(Fixture {
        name: name.to_string(),
        patch: Patch::from_file(file)?,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Deserialize;

    #[derive(Debug, Deserialize)]
    struct ManifestEntry {
        name: String,
        file: String,
    }

    const MANIFEST: &str = include_str!("../../fixtures/manifest.json");

    #[test]
    fn manifest_matches_registry() {
        let entries: Vec<ManifestEntry> = serde_json::from_str(MANIFEST).unwrap();
        let names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, fixture_names());
        for e in &entries {
            assert!(e.file.ends_with(".json"));
        }
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(load_fixture("nope"), Err(CorpusError::UnknownFixture(_))));
    }
}
