use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::{Error, Result};

/// Label used by the catalog for multidisciplinary periodicals. These are
/// excluded from classification and clustering comparisons.
pub const INTERDISCIPLINE: &str = "Interdiscipline";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub discipline: String,
    pub sub_discipline: Option<String>,
}

/// Periodical metadata: display names plus discipline labels, keyed by the
/// external periodical id used in trails and model files.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DisciplineCatalog {
    names: BTreeMap<String, String>,
    labels: BTreeMap<String, Label>,
}

impl DisciplineCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: &str, name: &str, label: Option<Label>) -> Result<()> {
        if self.names.contains_key(id) {
            return Err(Error::Integrity(format!("periodical `{id}` listed twice")));
        }
        self.names.insert(id.to_string(), name.to_string());
        if let Some(label) = label {
            self.labels.insert(id.to_string(), label);
        }
        Ok(())
    }

    /// Reads `periodicals.tsv`: `id\tname[\tdiscipline[\tsub_discipline]]`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut catalog = Self::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 2 || fields.len() > 4 || fields[0].is_empty() {
                return Err(Error::parse(
                    path,
                    i + 1,
                    "expected `id\\tname[\\tdiscipline[\\tsub_discipline]]`",
                ));
            }
            let label = fields
                .get(2)
                .filter(|d| !d.is_empty())
                .map(|d| Label {
                    discipline: d.to_string(),
                    sub_discipline: fields
                        .get(3)
                        .filter(|s| !s.is_empty())
                        .map(|s| s.to_string()),
                });
            catalog
                .insert(fields[0], fields[1], label)
                .map_err(|e| Error::parse(path, i + 1, e.to_string()))?;
        }
        Ok(catalog)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        for (id, name) in &self.names {
            let line = match self.labels.get(id) {
                Some(Label {
                    discipline,
                    sub_discipline: Some(sub),
                }) => format!("{id}\t{name}\t{discipline}\t{sub}\n"),
                Some(l) => format!("{id}\t{name}\t{}\n", l.discipline),
                None => format!("{id}\t{name}\n"),
            };
            out.write_all(line.as_bytes()).map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }

    pub fn name(&self, id: &str) -> Option<&str> {
        self.names.get(id).map(String::as_str)
    }

    pub fn label(&self, id: &str) -> Option<&Label> {
        self.labels.get(id)
    }

    pub fn discipline(&self, id: &str) -> Option<&str> {
        self.labels.get(id).map(|l| l.discipline.as_str())
    }

    pub fn sub_discipline(&self, id: &str) -> Option<&str> {
        self.labels.get(id).and_then(|l| l.sub_discipline.as_deref())
    }

    /// Labeled ids in ascending order.
    pub fn labeled(&self) -> impl Iterator<Item = (&str, &Label)> {
        self.labels.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Distinct disciplines, sorted, excluding the interdisciplinary label.
    pub fn disciplines(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .labels
            .values()
            .map(|l| l.discipline.as_str())
            .filter(|d| *d != INTERDISCIPLINE)
            .collect();
        set.into_iter().map(String::from).collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_optional_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.tsv");
        std::fs::write(
            &path,
            "1\tNature\tMultidisciplinary\n2\tASR\tSocial Sciences\tSociology\n3\tUnknown\n",
        )
        .unwrap();
        let c = DisciplineCatalog::load(&path).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.name("2"), Some("ASR"));
        assert_eq!(c.sub_discipline("2"), Some("Sociology"));
        assert_eq!(c.sub_discipline("1"), None);
        assert!(c.label("3").is_none());

        let out = dir.path().join("q.tsv");
        c.save(&out).unwrap();
        assert_eq!(DisciplineCatalog::load(&out).unwrap(), c);
    }

    #[test]
    fn disciplines_skip_interdiscipline() {
        let mut c = DisciplineCatalog::new();
        let lab = |d: &str| {
            Some(Label {
                discipline: d.into(),
                sub_discipline: None,
            })
        };
        c.insert("a", "a", lab("B")).unwrap();
        c.insert("b", "b", lab(INTERDISCIPLINE)).unwrap();
        c.insert("c", "c", lab("A")).unwrap();
        assert_eq!(c.disciplines(), vec!["A".to_string(), "B".to_string()]);
        assert!(c.insert("a", "dup", None).is_err());
    }
}
