//! A directory of `<name>.<kind>.json` files, loaded and validated up
//! front.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::collage::{Diagram, DiagramDoc};
use crate::fincat::{standard_by_name, CatFunctor, CategoryDoc, CategoryResolver, FinCategory, FunctorDoc};
use crate::k0chain::star::{Block, BlockGradedMatrix};
use crate::k0chain::{
    Bicomplex, BicomplexDoc, ChainComplex, ChainMap, ChainMapDoc, ComplexDoc, ComplexResolver, GradedMap, HomotopyDoc, IntMatrix, JsonInt,
};
use crate::profunctor::{ProTransformation, Profunctor, ProfunctorDoc, TransformationDoc};

/// A failure with its exit code and the name of the violated invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliError {
    pub code: u8,
    pub invariant: String,
    pub message: String,
}

pub const EXIT_PROPERTY: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_CAP: u8 = 3;

impl CliError {
    pub fn invalid(invariant: impl Into<String>, message: impl Into<String>) -> Self {
        CliError { code: EXIT_INVALID, invariant: invariant.into(), message: message.into() }
    }

    pub fn cap(message: impl Into<String>) -> Self {
        CliError { code: EXIT_CAP, invariant: "SizeCap".into(), message: message.into() }
    }

    /// A library error, named after its innermost variant.
    pub fn from_error<E: Debug + Display>(context: &str, e: E) -> Self {
        let debug = format!("{e:?}");
        let mut rest = debug.as_str();
        let mut name = "";
        loop {
            let ident: String = rest.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
            if ident.is_empty() {
                break;
            }
            name = &rest[..ident.len()];
            rest = &rest[ident.len()..];
            match rest.strip_prefix('(') {
                Some(r) => rest = r,
                None => break,
            }
        }
        let invariant = if name.is_empty() { "Invalid" } else { name };
        Self::invalid(invariant, format!("{context}: {e}"))
    }
}

/// Load-time size limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_objects: usize,
    pub max_elements: usize,
    pub max_rank: usize,
    pub max_degrees: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_objects: 6, max_elements: 8, max_rank: 32, max_degrees: 16 }
    }
}

impl Caps {
    pub fn category(&self, what: &str, c: &FinCategory) -> Result<(), CliError> {
        if c.object_count() > self.max_objects {
            return Err(CliError::cap(format!("{what} has {} objects, the limit is {}", c.object_count(), self.max_objects)));
        }
        Ok(())
    }

    pub fn profunctor(&self, what: &str, p: &Profunctor) -> Result<(), CliError> {
        self.category(what, p.source())?;
        self.category(what, p.target())?;
        if p.max_set_size() > self.max_elements {
            return Err(CliError::cap(format!("{what} has a set of {} elements, the limit is {}", p.max_set_size(), self.max_elements)));
        }
        Ok(())
    }

    pub fn complex(&self, what: &str, c: &ChainComplex) -> Result<(), CliError> {
        if c.max_rank() > self.max_rank {
            return Err(CliError::cap(format!("{what} has rank {}, the limit is {}", c.max_rank(), self.max_rank)));
        }
        let len = (c.hi() - c.lo() + 1) as usize;
        if len > self.max_degrees {
            return Err(CliError::cap(format!("{what} spans {len} degrees, the limit is {}", self.max_degrees)));
        }
        Ok(())
    }

    pub fn matrix(&self, what: &str, rows: usize, cols: usize) -> Result<(), CliError> {
        if rows.max(cols) > self.max_rank {
            return Err(CliError::cap(format!("{what} is {rows}x{cols}, the limit is {}", self.max_rank)));
        }
        Ok(())
    }
}

/// A plain integer matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<JsonInt>>,
}

impl MatrixDoc {
    pub fn of(m: &IntMatrix) -> Self {
        MatrixDoc { rows: m.rows(), cols: m.cols(), entries: m.to_json_rows() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    pub label: String,
    pub size: usize,
    #[serde(default)]
    pub grade: i64,
}

/// An integer matrix cut into graded row and column blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockMatrixDoc {
    pub rows: Vec<BlockDoc>,
    pub cols: Vec<BlockDoc>,
    pub entries: Vec<Vec<JsonInt>>,
}

impl BlockMatrixDoc {
    pub fn of(m: &BlockGradedMatrix) -> Self {
        let blocks = |bs: &[Block]| bs.iter().map(|b| BlockDoc { label: b.label.clone(), size: b.size, grade: b.grade }).collect();
        BlockMatrixDoc { rows: blocks(m.rows()), cols: blocks(m.cols()), entries: m.matrix().to_json_rows() }
    }

    pub fn build(&self) -> Result<BlockGradedMatrix, CliError> {
        let blocks = |bs: &[BlockDoc]| bs.iter().map(|b| Block::new(b.label.clone(), b.size, b.grade)).collect::<Vec<_>>();
        let (rows, cols) = (blocks(&self.rows), blocks(&self.cols));
        let (r, c) = (rows.iter().map(|b| b.size).sum(), cols.iter().map(|b| b.size).sum());
        let m = IntMatrix::from_json_rows(r, c, &self.entries).map_err(|e| CliError::invalid("DimensionMismatch", e))?;
        BlockGradedMatrix::new(rows, cols, m).map_err(|e| CliError::from_error("block matrix", e))
    }
}

const KINDS: [&str; 11] = [
    "category",
    "functor",
    "profunctor",
    "diagram",
    "transformation",
    "complex",
    "chainmap",
    "homotopy",
    "bicomplex",
    "matrix",
    "blockmatrix",
];

/// Every value defined in a workspace directory.
#[derive(Default)]
pub struct Workspace {
    pub caps: Caps,
    categories: BTreeMap<String, Arc<FinCategory>>,
    functors: BTreeMap<String, CatFunctor>,
    profunctors: BTreeMap<String, Profunctor>,
    diagrams: BTreeMap<String, Diagram>,
    transformations: BTreeMap<String, ProTransformation>,
    complexes: BTreeMap<String, ChainComplex>,
    chain_maps: BTreeMap<String, ChainMap>,
    homotopies: BTreeMap<String, GradedMap>,
    bicomplexes: BTreeMap<String, Bicomplex>,
    matrices: BTreeMap<String, IntMatrix>,
    block_matrices: BTreeMap<String, BlockGradedMatrix>,
}

impl CategoryResolver for Workspace {
    fn category(&self, name: &str) -> Option<Arc<FinCategory>> {
        self.categories.get(name).cloned()
    }
}

impl ComplexResolver for Workspace {
    fn complex(&self, name: &str) -> Option<ChainComplex> {
        self.complexes.get(name).cloned()
    }
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid("Unreadable", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid("MalformedJson", format!("{}: {e}", path.display())))
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T, CliError> {
    map.get(name).ok_or_else(|| CliError::invalid("UnknownName", format!("no {kind} named `{name}`")))
}

impl Workspace {
    /// Loads every `<name>.<kind>.json` in `dir`, kinds in dependency order;
    /// other files are ignored.
    pub fn open(dir: &Path, caps: Caps) -> Result<Self, CliError> {
        let mut files: BTreeMap<&str, Vec<(String, std::path::PathBuf)>> = BTreeMap::new();
        let entries = std::fs::read_dir(dir).map_err(|e| CliError::invalid("Unreadable", format!("{}: {e}", dir.display())))?;
        for entry in entries {
            let path = entry.map_err(|e| CliError::invalid("Unreadable", e.to_string()))?.path();
            let Some(file) = path.file_name().and_then(|f| f.to_str()) else { continue };
            let Some(stem) = file.strip_suffix(".json") else { continue };
            let Some((name, kind)) = stem.rsplit_once('.') else { continue };
            if let Some(k) = KINDS.iter().find(|k| **k == kind) {
                files.entry(k).or_default().push((name.to_string(), path.clone()));
            }
        }
        for list in files.values_mut() {
            list.sort();
        }
        let mut ws = Workspace { caps, ..Default::default() };
        for kind in KINDS {
            for (name, path) in files.remove(kind).unwrap_or_default() {
                ws.load(kind, &name, &path)?;
            }
        }
        Ok(ws)
    }

    fn load(&mut self, kind: &str, name: &str, path: &Path) -> Result<(), CliError> {
        let what = format!("{kind} `{name}`");
        let caps = self.caps;
        match kind {
            "category" => {
                let c = FinCategory::build(&read::<CategoryDoc>(path)?).map_err(|e| CliError::from_error(&what, e))?;
                caps.category(&what, &c)?;
                self.categories.insert(name.into(), Arc::new(c));
            }
            "functor" => {
                let f = CatFunctor::from_doc(&read::<FunctorDoc>(path)?, self).map_err(|e| CliError::from_error(&what, e))?;
                caps.category(&what, f.source())?;
                caps.category(&what, f.target())?;
                self.functors.insert(name.into(), f);
            }
            "profunctor" => {
                let p = Profunctor::from_doc(&read::<ProfunctorDoc>(path)?, self).map_err(|e| CliError::from_error(&what, e))?;
                caps.profunctor(&what, &p)?;
                self.profunctors.insert(name.into(), p);
            }
            "diagram" => {
                let d = Diagram::from_doc(&read::<DiagramDoc>(path)?, self).map_err(|e| CliError::from_error(&what, e))?;
                caps.category(&what, d.shape())?;
                for f in d.fibers() {
                    caps.category(&what, f)?;
                }
                self.diagrams.insert(name.into(), d);
            }
            "transformation" => {
                let doc = read::<TransformationDoc>(path)?;
                let (s, t) = (self.profunctor(&doc.source)?.clone(), self.profunctor(&doc.target)?.clone());
                let a = ProTransformation::from_doc(s, t, &doc).map_err(|e| CliError::from_error(&what, e))?;
                self.transformations.insert(name.into(), a);
            }
            "complex" => {
                let c = ChainComplex::from_doc(&read::<ComplexDoc>(path)?).map_err(|e| CliError::from_error(&what, e))?;
                caps.complex(&what, &c)?;
                self.complexes.insert(name.into(), c);
            }
            "chainmap" => {
                let f = ChainMap::from_doc(&read::<ChainMapDoc>(path)?, self, None).map_err(|e| CliError::from_error(&what, e))?;
                caps.complex(&what, f.source())?;
                caps.complex(&what, f.target())?;
                self.chain_maps.insert(name.into(), f);
            }
            "homotopy" => {
                let h = GradedMap::from_doc(&read::<HomotopyDoc>(path)?, 1, self, None).map_err(|e| CliError::from_error(&what, e))?;
                caps.complex(&what, h.source())?;
                caps.complex(&what, h.target())?;
                self.homotopies.insert(name.into(), h);
            }
            "bicomplex" => {
                let x = Bicomplex::from_doc(&read::<BicomplexDoc>(path)?, self).map_err(|e| CliError::from_error(&what, e))?;
                for t in x.terms() {
                    caps.complex(&what, t)?;
                }
                self.bicomplexes.insert(name.into(), x);
            }
            "matrix" => {
                let doc = read::<MatrixDoc>(path)?;
                caps.matrix(&what, doc.rows, doc.cols)?;
                let m = IntMatrix::from_json_rows(doc.rows, doc.cols, &doc.entries)
                    .map_err(|e| CliError::invalid("DimensionMismatch", format!("{what}: {e}")))?;
                self.matrices.insert(name.into(), m);
            }
            "blockmatrix" => {
                let m = read::<BlockMatrixDoc>(path)?.build()?;
                caps.matrix(&what, m.matrix().rows(), m.matrix().cols())?;
                self.block_matrices.insert(name.into(), m);
            }
            _ => unreachable!("kind list is fixed"),
        }
        Ok(())
    }

    /// Workspace categories and the built-in `std:` names.
    pub fn category(&self, name: &str) -> Result<Arc<FinCategory>, CliError> {
        if name.starts_with("std:") {
            return standard_by_name(name).map(Arc::new).map_err(|e| CliError::from_error(name, e));
        }
        lookup(&self.categories, "category", name).cloned()
    }

    pub fn functor(&self, name: &str) -> Result<&CatFunctor, CliError> {
        lookup(&self.functors, "functor", name)
    }

    pub fn profunctor(&self, name: &str) -> Result<&Profunctor, CliError> {
        lookup(&self.profunctors, "profunctor", name)
    }

    pub fn has_profunctor(&self, name: &str) -> bool {
        self.profunctors.contains_key(name)
    }

    pub fn diagram(&self, name: &str) -> Result<&Diagram, CliError> {
        lookup(&self.diagrams, "diagram", name)
    }

    pub fn transformation(&self, name: &str) -> Result<&ProTransformation, CliError> {
        lookup(&self.transformations, "transformation", name)
    }

    pub fn complex(&self, name: &str) -> Result<&ChainComplex, CliError> {
        lookup(&self.complexes, "complex", name)
    }

    pub fn chain_map(&self, name: &str) -> Result<&ChainMap, CliError> {
        lookup(&self.chain_maps, "chain map", name)
    }

    pub fn homotopy(&self, name: &str) -> Result<&GradedMap, CliError> {
        lookup(&self.homotopies, "homotopy", name)
    }

    pub fn bicomplex(&self, name: &str) -> Result<&Bicomplex, CliError> {
        lookup(&self.bicomplexes, "bicomplex", name)
    }

    pub fn matrix(&self, name: &str) -> Result<&IntMatrix, CliError> {
        lookup(&self.matrices, "matrix", name)
    }

    pub fn block_matrix(&self, name: &str) -> Result<&BlockGradedMatrix, CliError> {
        lookup(&self.block_matrices, "block matrix", name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn innermost_variant_names_the_invariant() {
        #[allow(dead_code)]
        #[derive(Debug)]
        enum Inner {
            ActionsDoNotCommute { at: usize },
        }
        #[allow(dead_code)]
        #[derive(Debug)]
        enum Outer {
            Profunctor(Inner),
            Shape(String),
        }
        impl Display for Outer {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "bad")
            }
        }
        let e = CliError::from_error("x", Outer::Profunctor(Inner::ActionsDoNotCommute { at: 1 }));
        assert_eq!(e.invariant, "ActionsDoNotCommute");
        assert_eq!(CliError::from_error("x", Outer::Shape("s".into())).invariant, "Shape");
    }
}
