//! Parsing of words, diagrams and Q-datum files.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};

use arcat::{CommClass, DynkinDiagram, FoldedType, QDatum, RootSystem};

use crate::SourceArgs;

/// The object a command works on.
pub enum Input {
    Class(CommClass),
    Datum(QDatum),
}

impl Input {
    pub fn class(&self) -> &CommClass {
        match self {
            Input::Class(c) => c,
            Input::Datum(q) => q.class(),
        }
    }

    pub fn datum(&self) -> Option<&QDatum> {
        match self {
            Input::Class(_) => None,
            Input::Datum(q) => Some(q),
        }
    }
}

pub fn word(s: &str) -> Result<Vec<usize>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .with_context(|| format!("bad letter '{t}' in word"))
        })
        .collect()
}

pub fn class(diagram: &str, w: &str) -> Result<CommClass> {
    let rs = Arc::new(RootSystem::parse(diagram)?);
    Ok(CommClass::new(&rs, &word(w)?)?)
}

/// A file path, or else a diagram or folded type naming its standard
/// Q-datum.
pub fn qdatum(s: &str) -> Result<QDatum> {
    if Path::new(s).is_file() {
        let text = fs::read_to_string(s).with_context(|| format!("reading {s}"))?;
        return QDatum::from_json(&text).with_context(|| format!("in {s}"));
    }
    qdatum_for_type(s)
}

pub fn qdatum_for_type(s: &str) -> Result<QDatum> {
    if let Ok(d) = s.parse::<DynkinDiagram>() {
        return Ok(QDatum::standard_for(d)?);
    }
    match s.parse::<FoldedType>() {
        Ok(t) => Ok(QDatum::standard(t)?),
        Err(_) => bail!("'{s}' is neither a file nor a diagram or folded type"),
    }
}

pub fn source(a: &SourceArgs) -> Result<Input> {
    match (&a.source.word, &a.source.qdatum, &a.diagram) {
        (Some(w), None, Some(d)) => Ok(Input::Class(class(d, w)?)),
        (None, Some(q), None) => Ok(Input::Datum(qdatum(q)?)),
        (None, Some(_), Some(_)) => bail!("--diagram only applies to --word"),
        _ => bail!("give exactly one of --word (with --diagram) or --qdatum"),
    }
}
