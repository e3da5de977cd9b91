use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::{Error, Result};

/// Hyperparameters a matrix was trained with. Not persisted in the text
/// format.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainMeta {
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub min_count: u64,
    pub seed: u64,
}

/// Input and output vector tables, one row per kept periodical, stored
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    names: Vec<String>,
    dim: usize,
    pub(crate) input: Vec<f64>,
    pub(crate) output: Vec<f64>,
    pub meta: Option<TrainMeta>,
}

impl EmbeddingMatrix {
    pub fn zeros(names: Vec<String>, dim: usize) -> Self {
        let n = names.len();
        EmbeddingMatrix {
            names,
            dim,
            input: vec![0.0; n * dim],
            output: vec![0.0; n * dim],
            meta: None,
        }
    }

    pub fn from_tables(names: Vec<String>, dim: usize, input: Vec<f64>, output: Vec<f64>) -> Result<Self> {
        if input.len() != names.len() * dim || output.len() != input.len() {
            return Err(Error::Integrity(format!(
                "tables do not match {} rows of dimension {dim}",
                names.len()
            )));
        }
        Ok(EmbeddingMatrix {
            names,
            dim,
            input,
            output,
            meta: None,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn input(&self, row: usize) -> &[f64] {
        &self.input[row * self.dim..(row + 1) * self.dim]
    }

    pub fn output(&self, row: usize) -> &[f64] {
        &self.output[row * self.dim..(row + 1) * self.dim]
    }

    pub fn input_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.input[row * self.dim..(row + 1) * self.dim]
    }

    pub fn output_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.output[row * self.dim..(row + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.input.iter().chain(&self.output).all(|x| x.is_finite())
    }

    /// Writes the input table: header `"<rows> <dim>"`, then
    /// `"<periodical_id> <x1> ... <xD>"` with shortest round-trip floats.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_table(path.as_ref(), &self.names, self.dim, &self.input)
    }

    /// Writes the output table in the same format as [`save`](Self::save).
    pub fn save_output(&self, path: impl AsRef<Path>) -> Result<()> {
        write_table(path.as_ref(), &self.names, self.dim, &self.output)
    }

    /// Loads an input table; output vectors are zero unless read separately
    /// with [`load_with_output`](Self::load_with_output).
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let (names, dim, input) = read_table(path.as_ref())?;
        let output = vec![0.0; input.len()];
        Self::from_tables(names, dim, input, output)
    }

    pub fn load_with_output(input_path: impl AsRef<Path>, output_path: impl AsRef<Path>) -> Result<Self> {
        let (names, dim, input) = read_table(input_path.as_ref())?;
        let (out_names, out_dim, output) = read_table(output_path.as_ref())?;
        if out_names != names || out_dim != dim {
            return Err(Error::Integrity(
                "output vectors do not match the input vocabulary".into(),
            ));
        }
        Self::from_tables(names, dim, input, output)
    }
}

fn write_table(path: &Path, names: &[String], dim: usize, table: &[f64]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(out, "{} {}", names.len(), dim).map_err(io)?;
    for (row, name) in names.iter().enumerate() {
        write!(out, "{name}").map_err(io)?;
        for x in &table[row * dim..(row + 1) * dim] {
            write!(out, " {x}").map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    out.flush().map_err(io)
}

pub(crate) fn read_table(path: &Path) -> Result<(Vec<String>, usize, Vec<f64>)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "missing header"))?
        .map_err(|e| Error::io(path, e))?;
    let mut it = header.split_whitespace().map(str::parse::<usize>);
    let (rows, dim) = match (it.next(), it.next(), it.next()) {
        (Some(Ok(r)), Some(Ok(d)), None) if d > 0 => (r, d),
        _ => return Err(Error::parse(path, 1, "header must be `<vocab_size> <dimension>`")),
    };
    let mut names = Vec::with_capacity(rows);
    let mut seen = HashSet::with_capacity(rows);
    let mut table = Vec::with_capacity(rows * dim);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(' ');
        let name = fields.next().unwrap_or_default();
        if !seen.insert(name.to_string()) {
            return Err(Error::parse(path, lineno, format!("duplicate periodical `{name}`")));
        }
        let before = table.len();
        for f in fields {
            let x: f64 = f
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("invalid number `{f}`")))?;
            if !x.is_finite() {
                return Err(Error::parse(path, lineno, "non-finite vector entry"));
            }
            table.push(x);
        }
        if table.len() - before != dim {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected {dim} values, found {}", table.len() - before),
            ));
        }
        names.push(name.to_string());
    }
    if names.len() != rows {
        return Err(Error::parse(
            path,
            1,
            format!("header announces {rows} rows, file has {}", names.len()),
        ));
    }
    Ok((names, dim, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_format_is_exact() {
        let m = EmbeddingMatrix::from_tables(
            vec!["a".into(), "b".into()],
            2,
            vec![0.1, -2.5, 1e-17, 3.0],
            vec![1.0, 2.0, 3.0, 4.0],
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.txt");
        let q = dir.path().join("o.txt");
        m.save(&p).unwrap();
        m.save_output(&q).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            "2 2\na 0.1 -2.5\nb 0.00000000000000001 3\n"
        );
        assert_eq!(EmbeddingMatrix::load_with_output(&p, &q).unwrap(), m);
    }

    #[test]
    fn rejects_short_rows_and_bad_headers() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.txt");
        std::fs::write(&p, "1 3\na 1 2\n").unwrap();
        assert!(matches!(EmbeddingMatrix::load(&p), Err(Error::Parse { line: 2, .. })));
        std::fs::write(&p, "x 3\n").unwrap();
        assert!(matches!(EmbeddingMatrix::load(&p), Err(Error::Parse { line: 1, .. })));
        std::fs::write(&p, "2 1\na 1\n").unwrap();
        assert!(EmbeddingMatrix::load(&p).is_err());
    }
}
