//! Line-oriented query session over a loaded model.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use super::commands::{analogy_table, similar_table};
use super::output::{Format, Table};
use crate::vectorspace::{build_axis, project_on_axis, Axis, VectorStore};
use crate::{Error, Result};

fn id_list(s: &str) -> Vec<&str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect()
}

/// Reads `name\tpositive_ids\tnegative_ids` lines (ids comma-separated).
fn load_axes(store: &VectorStore, path: &Path) -> Result<HashMap<String, Axis>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut axes = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 3 {
            return Err(Error::parse(path, i + 1, "expected `name\\tpositive_ids\\tnegative_ids`"));
        }
        let axis = build_axis(store, &id_list(f[1]), &id_list(f[2]))
            .map_err(|e| Error::parse(path, i + 1, e.to_string()))?;
        axes.insert(f[0].to_string(), axis);
    }
    Ok(axes)
}

fn count(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Config(format!("`{s}` is not a count")))
}

fn answer(store: &VectorStore, axes: &HashMap<String, Axis>, words: &[&str]) -> Result<Table> {
    match words {
        ["similar", id, n] => similar_table(store, id, count(n)?),
        ["analogy", a, b, c, n] => analogy_table(store, a, b, c, count(n)?),
        ["project", id, axis] => {
            let ax = axes.get(*axis).ok_or_else(|| Error::Lookup(format!("unknown axis `{axis}`")))?;
            let mut t = Table::new(&["id", "axis", "score"]);
            t.push(vec![(*id).into(), (*axis).into(), project_on_axis(store, id, ax)?.into()]);
            Ok(t)
        }
        _ => Err(Error::Config(
            "expected `similar ID N`, `analogy A B C N`, `project ID AXIS` or `quit`".into(),
        )),
    }
}

/// Answers one query per input line until `quit` or end of input. A bad
/// line produces a one-line message on `err` and the session continues.
pub fn run_repl(
    store: &VectorStore,
    axes: Option<&Path>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
    format: Format,
) -> Result<()> {
    let axes = match axes {
        Some(p) => load_axes(store, p)?,
        None => HashMap::new(),
    };
    let mut line = String::new();
    loop {
        line.clear();
        if input.read_line(&mut line).map_err(|e| Error::io("<stdin>", e))? == 0 {
            return Ok(());
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => continue,
            ["quit"] => return Ok(()),
            _ => match answer(store, &axes, &words) {
                Ok(t) => out.write_all(t.render(format).as_bytes()),
                Err(e) => writeln!(err, "error: {e}"),
            }
            .map_err(|e| Error::io("<stdout>", e))?,
        }
    }
}
