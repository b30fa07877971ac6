//! JSON input files: operads, multicategories and algebras.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use gmcat::catoperad::{CatOperad, Composition};
use gmcat::dalgebra::DAlgebra;
use gmcat::dmulticat::{from_nonsymmetric, from_symmetric, ClassicalMulticat, DMulticat, Operation};
use gmcat::fincat::FinCategory;
use gmcat::finset::{FinSet, Label, Perm};
use gmcat::opmonad::Monad;
use gmcat::{Error, Result};
use serde::Deserialize;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperadFile {
    builtin: String,
    truncate: Option<usize>,
    #[serde(default)]
    overrides: Vec<Override>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Override {
    degree: usize,
    outer: usize,
    inner: Vec<(usize, usize)>,
    value: usize,
}

fn builtin_operad(name: &str, truncate: usize) -> Result<CatOperad> {
    CatOperad::builtin(name, truncate).ok_or_else(|| Error::Parse(format!("unknown operad {name:?}")))
}

/// A builtin name, or the path of an operad file.
pub fn load_operad(selection: &str, truncate: usize) -> Result<CatOperad> {
    if CatOperad::builtin(selection, 1).is_some() {
        return builtin_operad(selection, truncate);
    }
    let file: OperadFile = parse(Path::new(selection))?;
    let op = builtin_operad(&file.builtin, file.truncate.unwrap_or(truncate))?;
    if file.overrides.is_empty() {
        return Ok(op);
    }
    let mut table = op.tabulate()?;
    for o in file.overrides {
        if o.degree > 1 {
            return Err(Error::Parse(format!("degree {} is neither 0 nor 1", o.degree)));
        }
        let level = o.inner.iter().map(|b| b.0).sum::<usize>();
        if o.inner.len() > table.max_level()
            || level > table.max_level()
            || o.outer >= table.size(o.degree, o.inner.len())
            || o.value >= table.size(o.degree, level)
            || o.inner.iter().any(|&(n, e)| n > table.max_level() || e >= table.size(o.degree, n))
        {
            return Err(Error::Parse(format!("override of ({}, {:?}) is out of range", o.outer, o.inner)));
        }
        table.set_composite(o.degree, o.outer, o.inner, o.value)?;
    }
    Ok(table)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MulticatFile {
    builtin: Option<String>,
    #[serde(default)]
    objects: Vec<String>,
    #[serde(default)]
    operations: Vec<OperationEntry>,
    #[serde(default)]
    identities: HashMap<String, String>,
    #[serde(default)]
    composition: Vec<CompositionEntry>,
    symmetry: Option<Vec<SymmetryEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OperationEntry {
    name: String,
    target: String,
    sources: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompositionEntry {
    outer: String,
    inner: Vec<String>,
    value: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymmetryEntry {
    operation: String,
    perm: Perm,
    value: String,
}

fn lookup(names: &HashMap<&str, usize>, name: &str, what: &str) -> Result<usize> {
    names
        .get(name)
        .copied()
        .ok_or_else(|| Error::Parse(format!("unknown {what} {name:?}")))
}

fn classical(file: &MulticatFile) -> Result<ClassicalMulticat> {
    let objects: HashMap<&str, usize> = file.objects.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let ops: HashMap<&str, usize> = file.operations.iter().enumerate().map(|(i, o)| (o.name.as_str(), i)).collect();
    if objects.len() != file.objects.len() || ops.len() != file.operations.len() {
        return Err(Error::Parse("object and operation names must be distinct".into()));
    }
    let operations = file
        .operations
        .iter()
        .map(|o| {
            Ok(Operation {
                name: o.name.clone(),
                target: lookup(&objects, &o.target, "object")?,
                sources: o.sources.iter().map(|s| lookup(&objects, s, "object")).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let identities = file
        .objects
        .iter()
        .map(|x| {
            let name = file.identities.get(x).ok_or_else(|| Error::Parse(format!("object {x:?} has no identity")))?;
            lookup(&ops, name, "operation")
        })
        .collect::<Result<Vec<_>>>()?;
    let composition = file
        .composition
        .iter()
        .map(|c| {
            let inner = c.inner.iter().map(|g| lookup(&ops, g, "operation")).collect::<Result<Vec<_>>>()?;
            Ok(((lookup(&ops, &c.outer, "operation")?, inner), lookup(&ops, &c.value, "operation")?))
        })
        .collect::<Result<HashMap<_, _>>>()?;
    let symmetry = file
        .symmetry
        .as_ref()
        .map(|entries| {
            entries
                .iter()
                .map(|s| Ok(((lookup(&ops, &s.operation, "operation")?, s.perm.clone()), lookup(&ops, &s.value, "operation")?)))
                .collect::<Result<HashMap<_, _>>>()
        })
        .transpose()?;
    Ok(ClassicalMulticat {
        objects: file.objects.clone(),
        operations,
        identities,
        symmetry,
        composition,
    })
}

/// Reads a multicategory and encodes it over `monad`: symmetric over the
/// Barratt-Eccles operad, non-symmetric over the associative one.
pub fn load_multicat(path: &Path, monad: Arc<Monad>, bound: usize) -> Result<DMulticat> {
    let file: MulticatFile = parse(path)?;
    let c = match file.builtin.as_deref() {
        Some("terminal") => return DMulticat::terminal(monad, bound),
        Some("complete") => {
            let names: Vec<&str> = file.objects.iter().map(String::as_str).collect();
            ClassicalMulticat::complete(&names, bound)
        }
        Some("orderings") => ClassicalMulticat::orderings(bound),
        Some("identity-only") => ClassicalMulticat::identity_only(),
        Some(other) => return Err(Error::Parse(format!("unknown multicategory {other:?}"))),
        None => classical(&file)?,
    };
    match monad.operad().composition() {
        Composition::BarrattEccles => from_symmetric(&c, monad),
        Composition::Associative => from_nonsymmetric(&c, monad),
        _ => Err(Error::Precondition(
            "classical multicategories are encoded over barratt-eccles or associative".into(),
        )),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    builtin: String,
    n: Option<usize>,
    #[serde(default)]
    objects: Vec<String>,
    fault: Option<String>,
}

/// Reads an algebra: `cyclic` (the discrete group `ℤ/n` under addition) or
/// `free` (the free algebra on a discrete category).
pub fn load_algebra(path: &Path, monad: Arc<Monad>, bound: usize) -> Result<DAlgebra> {
    let file: AlgebraFile = parse(path)?;
    let a = match file.builtin.as_str() {
        "cyclic" => DAlgebra::cyclic(monad, file.n.ok_or_else(|| Error::Parse("cyclic needs n".into()))?)?,
        "free" => {
            let c = if file.objects.is_empty() {
                FinCategory::terminal()
            } else {
                FinCategory::discrete(FinSet::new(file.objects.iter().map(|s| Label::atom(s.as_str())).collect())?)
            };
            DAlgebra::free(monad, &c, bound)?
        }
        other => return Err(Error::Parse(format!("unknown algebra {other:?}"))),
    };
    match file.fault.as_deref() {
        None => Ok(a),
        Some("unit") => Ok(a.with_unit_fault()),
        Some(other) => Err(Error::Parse(format!("unknown fault {other:?}"))),
    }
}
