//! Finite categories given by complete composition tables, functors between
//! them, and the basic constructions (products, opposites, standard shapes).
//!
//! Every law is checked by full enumeration: a [`FinCategory`] that exists has
//! passed the unit and associativity checks on every composable triple.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::pair;

/// Default object bound for [`find_isomorphism`].
pub const DEFAULT_ISO_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate morphism `{0}`")]
    DuplicateMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("identity `{morphism}` of `{object}` is not an endomorphism of it")]
    IdentityNotEndo { object: String, morphism: String },
    #[error("composite given for non-composable pair ({g}, {f})")]
    NotComposable { g: String, f: String },
    #[error("composite of ({g}, {f}) given twice")]
    DuplicateComposite { g: String, f: String },
    #[error("composite `{gf}` of ({g}, {f}) has wrong endpoints")]
    WrongComposite { g: String, f: String, gf: String },
    #[error("missing composite for composable pair ({g}, {f})")]
    MissingComposite { g: String, f: String },
    #[error("unit law fails for ({g}, {f})")]
    UnitLawViolation { g: String, f: String },
    #[error("associativity fails for ({h}, {g}, {f})")]
    NonAssociative { h: String, g: String, f: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("isomorphism search bound exceeded: {objects} objects > {bound}")]
    SearchBoundExceeded { objects: usize, bound: usize },
    #[error("unknown category reference `{0}`")]
    UnknownReference(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("object map is not total: `{0}` unmapped")]
    UnmappedObject(String),
    #[error("morphism map is not total: `{0}` unmapped")]
    UnmappedMorphism(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("map length mismatch")]
    LengthMismatch,
    #[error("not a functor: {0}")]
    NotAFunctor(FunctorReport),
    #[error("functors are not composable")]
    NotComposable,
    #[error(transparent)]
    Category(#[from] CategoryError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite category with a total composition table.
#[derive(Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    // table[g * n + f] for composable (g, f)
    table: Vec<Option<usize>>,
    object_index: HashMap<String, usize>,
    morphism_index: HashMap<String, usize>,
    homs: Vec<Vec<Vec<usize>>>,
    hom_pos: Vec<usize>,
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

/// Equality on identifiers: same objects, same morphisms with the same
/// endpoints, same identities and the same composition table.
impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        if self.objects.len() != other.objects.len()
            || self.morphisms.len() != other.morphisms.len()
        {
            return false;
        }
        let mut mor_map = Vec::with_capacity(self.morphisms.len());
        for m in &self.morphisms {
            let Some(&j) = other.morphism_index.get(&m.id) else {
                return false;
            };
            let o = &other.morphisms[j];
            if other.objects[o.src] != self.objects[m.src]
                || other.objects[o.dst] != self.objects[m.dst]
            {
                return false;
            }
            mor_map.push(j);
        }
        for (x, name) in self.objects.iter().enumerate() {
            let Some(&y) = other.object_index.get(name) else {
                return false;
            };
            if mor_map[self.identities[x]] != other.identities[y] {
                return false;
            }
        }
        self.composable_pairs().all(|(g, f, gf)| {
            other.compose(mor_map[g], mor_map[f]) == Some(mor_map[gf])
        })
    }
}

impl Eq for FinCategory {}

/// JSON form of a category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identities: BTreeMap<String, String>,
    pub composition: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// Either an inline category or a name resolved elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategoryRef {
    Name(String),
    Inline(Box<CategoryDoc>),
}

/// Looks up categories by name. Names of the form `std:...` are always
/// available; see [`standard_by_name`].
pub trait CategoryResolver {
    fn category(&self, name: &str) -> Option<Arc<FinCategory>>;
}

/// Resolves only the built-in `std:` names.
pub struct NoCategories;

impl CategoryResolver for NoCategories {
    fn category(&self, _name: &str) -> Option<Arc<FinCategory>> {
        None
    }
}

impl CategoryRef {
    pub fn resolve(&self, resolver: &dyn CategoryResolver) -> Result<Arc<FinCategory>, CategoryError> {
        match self {
            CategoryRef::Inline(doc) => Ok(Arc::new(FinCategory::build(doc)?)),
            CategoryRef::Name(name) => {
                if name.starts_with("std:") {
                    return standard_by_name(name).map(Arc::new);
                }
                resolver
                    .category(name)
                    .ok_or_else(|| CategoryError::UnknownReference(name.clone()))
            }
        }
    }
}

/// The named standard shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StandardKind {
    Discrete(usize),
    Interval,
    Simplex(usize),
    Poset {
        elements: Vec<String>,
        relations: Vec<(String, String)>,
    },
}

/// Builds a standard category.
pub fn standard_category(kind: &StandardKind) -> Result<FinCategory, CategoryError> {
    match kind {
        StandardKind::Discrete(n) => Ok(FinCategory::discrete(*n)),
        StandardKind::Interval => Ok(FinCategory::interval()),
        StandardKind::Simplex(n) => Ok(FinCategory::simplex(*n)),
        StandardKind::Poset { elements, relations } => FinCategory::from_poset(elements, relations),
    }
}

/// Parses `std:empty`, `std:terminal`, `std:interval`, `std:parallel`,
/// `std:idempotent`, `std:discrete:<n>`, `std:simplex:<n>` and `std:cyclic:<n>`.
pub fn standard_by_name(name: &str) -> Result<FinCategory, CategoryError> {
    let parts: Vec<&str> = name.split(':').collect();
    let number = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CategoryError::InvalidParameter(format!("bad size in `{name}`")))
    };
    match parts.as_slice() {
        ["std", "empty"] => Ok(FinCategory::discrete(0)),
        ["std", "terminal"] => Ok(FinCategory::terminal()),
        ["std", "interval"] => Ok(FinCategory::interval()),
        ["std", "discrete", n] => Ok(FinCategory::discrete(number(n)?)),
        ["std", "simplex", n] => Ok(FinCategory::simplex(number(n)?)),
        ["std", "parallel"] => Ok(FinCategory::parallel_pair()),
        ["std", "idempotent"] => Ok(FinCategory::idempotent()),
        ["std", "cyclic", n] => match number(n)? {
            0 => Err(CategoryError::InvalidParameter("cyclic group of order 0".into())),
            n => Ok(FinCategory::cyclic(n)),
        },
        _ => Err(CategoryError::UnknownReference(name.to_string())),
    }
}

fn identity_name(object: &str) -> String {
    format!("id_{object}")
}

impl FinCategory {
    /// Validates a category description.
    pub fn build(doc: &CategoryDoc) -> Result<Self, CategoryError> {
        let mut object_index = HashMap::new();
        for (i, o) in doc.objects.iter().enumerate() {
            if object_index.insert(o.clone(), i).is_some() {
                return Err(CategoryError::DuplicateObject(o.clone()));
            }
        }
        let lookup_object = |name: &str| {
            object_index
                .get(name)
                .copied()
                .ok_or_else(|| CategoryError::UnknownObject(name.to_string()))
        };
        let mut morphisms = Vec::with_capacity(doc.morphisms.len());
        let mut morphism_index = HashMap::new();
        for m in &doc.morphisms {
            let src = lookup_object(&m.src)?;
            let dst = lookup_object(&m.dst)?;
            if morphism_index.insert(m.id.clone(), morphisms.len()).is_some() {
                return Err(CategoryError::DuplicateMorphism(m.id.clone()));
            }
            morphisms.push(Morphism { id: m.id.clone(), src, dst });
        }
        let lookup_morphism = |name: &str| {
            morphism_index
                .get(name)
                .copied()
                .ok_or_else(|| CategoryError::UnknownMorphism(name.to_string()))
        };
        for key in doc.identities.keys() {
            lookup_object(key)?;
        }
        let mut identities = Vec::with_capacity(doc.objects.len());
        for (x, o) in doc.objects.iter().enumerate() {
            let id = doc
                .identities
                .get(o)
                .ok_or_else(|| CategoryError::MissingIdentity(o.clone()))?;
            let i = lookup_morphism(id)?;
            if morphisms[i].src != x || morphisms[i].dst != x {
                return Err(CategoryError::IdentityNotEndo {
                    object: o.clone(),
                    morphism: id.clone(),
                });
            }
            identities.push(i);
        }
        let n = morphisms.len();
        let mut table = vec![None; n * n];
        for [g, f, gf] in &doc.composition {
            let (gi, fi, gfi) = (lookup_morphism(g)?, lookup_morphism(f)?, lookup_morphism(gf)?);
            if morphisms[gi].src != morphisms[fi].dst {
                return Err(CategoryError::NotComposable { g: g.clone(), f: f.clone() });
            }
            if morphisms[gfi].src != morphisms[fi].src || morphisms[gfi].dst != morphisms[gi].dst {
                return Err(CategoryError::WrongComposite {
                    g: g.clone(),
                    f: f.clone(),
                    gf: gf.clone(),
                });
            }
            let slot = &mut table[gi * n + fi];
            if slot.is_some() {
                return Err(CategoryError::DuplicateComposite { g: g.clone(), f: f.clone() });
            }
            *slot = Some(gfi);
        }
        Self::assemble(doc.objects.clone(), morphisms, identities, table)
    }

    /// Builds a category from indexed data and a composition rule, then runs
    /// the full validation. Used by every derived construction.
    pub(crate) fn from_rule(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        mut rule: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self, CategoryError> {
        let n = morphisms.len();
        let mut table = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                if morphisms[g].src == morphisms[f].dst {
                    table[g * n + f] = Some(rule(g, f));
                }
            }
        }
        Self::assemble(objects, morphisms, identities, table)
    }

    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        table: Vec<Option<usize>>,
    ) -> Result<Self, CategoryError> {
        let object_index = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect::<HashMap<_, _>>();
        if object_index.len() != objects.len() {
            let mut seen = BTreeSet::new();
            let dup = objects.iter().find(|o| !seen.insert(*o)).cloned().unwrap_or_default();
            return Err(CategoryError::DuplicateObject(dup));
        }
        let mut morphism_index = HashMap::with_capacity(morphisms.len());
        for (i, m) in morphisms.iter().enumerate() {
            if morphism_index.insert(m.id.clone(), i).is_some() {
                return Err(CategoryError::DuplicateMorphism(m.id.clone()));
            }
        }
        let k = objects.len();
        let mut homs = vec![vec![Vec::new(); k]; k];
        let mut hom_pos = Vec::with_capacity(morphisms.len());
        for (i, m) in morphisms.iter().enumerate() {
            hom_pos.push(homs[m.src][m.dst].len());
            homs[m.src][m.dst].push(i);
        }
        let cat = FinCategory {
            objects,
            morphisms,
            identities,
            table,
            object_index,
            morphism_index,
            homs,
            hom_pos,
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<(), CategoryError> {
        let n = self.morphisms.len();
        let name = |i: usize| self.morphisms[i].id.clone();
        for g in 0..n {
            for f in 0..n {
                let composable = self.morphisms[g].src == self.morphisms[f].dst;
                match (composable, self.table[g * n + f]) {
                    (true, None) => return Err(CategoryError::MissingComposite { g: name(g), f: name(f) }),
                    (false, Some(_)) => return Err(CategoryError::NotComposable { g: name(g), f: name(f) }),
                    (true, Some(gf)) => {
                        let (m, mg, mf) = (&self.morphisms[gf], &self.morphisms[g], &self.morphisms[f]);
                        if m.src != mf.src || m.dst != mg.dst {
                            return Err(CategoryError::WrongComposite { g: name(g), f: name(f), gf: name(gf) });
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for f in 0..n {
            let Morphism { src, dst, .. } = self.morphisms[f];
            let (ids, idt) = (self.identities[src], self.identities[dst]);
            if self.table[idt * n + f] != Some(f) {
                return Err(CategoryError::UnitLawViolation { g: name(idt), f: name(f) });
            }
            if self.table[f * n + ids] != Some(f) {
                return Err(CategoryError::UnitLawViolation { g: name(f), f: name(ids) });
            }
        }
        for f in 0..n {
            let b = self.morphisms[f].dst;
            for c in 0..self.objects.len() {
                for &g in &self.homs[b][c] {
                    let gf = self.table[g * n + f].expect("checked above");
                    for d in 0..self.objects.len() {
                        for &h in &self.homs[c][d] {
                            let hg = self.table[h * n + g].expect("checked above");
                            if self.table[h * n + gf] != self.table[hg * n + f] {
                                return Err(CategoryError::NonAssociative { h: name(h), g: name(g), f: name(f) });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty() -> Self {
        Self::discrete(0)
    }

    /// The terminal category: one object `*` and its identity.
    pub fn terminal() -> Self {
        let objects = vec!["*".to_string()];
        let morphisms = vec![Morphism { id: identity_name("*"), src: 0, dst: 0 }];
        Self::from_rule(objects, morphisms, vec![0], |_, _| 0).expect("terminal category")
    }

    /// `n` objects `0..n` with identities only.
    pub fn discrete(n: usize) -> Self {
        let objects: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism { id: identity_name(o), src: i, dst: i })
            .collect();
        Self::from_rule(objects, morphisms, (0..n).collect(), |g, _| g).expect("discrete category")
    }

    /// The walking arrow `u: 0 -> 1`.
    pub fn interval() -> Self {
        let objects = vec!["0".to_string(), "1".to_string()];
        let morphisms = vec![
            Morphism { id: "id_0".into(), src: 0, dst: 0 },
            Morphism { id: "id_1".into(), src: 1, dst: 1 },
            Morphism { id: "u".into(), src: 0, dst: 1 },
        ];
        Self::from_rule(objects, morphisms, vec![0, 1], |g, f| match (g, f) {
            (1, 2) | (2, 0) => 2,
            (g, _) => g,
        })
        .expect("interval")
    }

    /// Two parallel arrows `a, b: 0 -> 1`.
    pub fn parallel_pair() -> Self {
        let objects = vec!["0".to_string(), "1".to_string()];
        let morphisms = vec![
            Morphism { id: "id_0".into(), src: 0, dst: 0 },
            Morphism { id: "id_1".into(), src: 1, dst: 1 },
            Morphism { id: "a".into(), src: 0, dst: 1 },
            Morphism { id: "b".into(), src: 0, dst: 1 },
        ];
        Self::from_rule(objects, morphisms, vec![0, 1], |g, f| if g == 1 { f } else { g }).expect("parallel pair")
    }

    /// One object with an idempotent `e`.
    pub fn idempotent() -> Self {
        let morphisms = vec![
            Morphism { id: identity_name("*"), src: 0, dst: 0 },
            Morphism { id: "e".into(), src: 0, dst: 0 },
        ];
        Self::from_rule(vec!["*".into()], morphisms, vec![0], |g, f| g.max(f)).expect("idempotent monoid")
    }

    /// The cyclic group of order `n` on one object, generated by `g`.
    pub fn cyclic(n: usize) -> Self {
        let morphisms = (0..n)
            .map(|k| Morphism { id: if k == 0 { identity_name("*") } else { format!("g{k}") }, src: 0, dst: 0 })
            .collect();
        Self::from_rule(vec!["*".into()], morphisms, vec![0], |g, f| (g + f) % n).expect("cyclic group")
    }

    /// The totally ordered set `0 < 1 < ... < n`.
    pub fn simplex(n: usize) -> Self {
        let elements: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let relations = (0..n).map(|i| (elements[i].clone(), elements[i + 1].clone())).collect::<Vec<_>>();
        Self::from_poset(&elements, &relations).expect("simplex")
    }

    /// The category of a finite poset generated by `relations` (pairs `a <= b`).
    /// Non-identity morphisms are named `a<=b`.
    pub fn from_poset(elements: &[String], relations: &[(String, String)]) -> Result<Self, CategoryError> {
        let k = elements.len();
        let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        if index.len() != k {
            return Err(CategoryError::InvalidParameter("repeated poset element".into()));
        }
        let mut le = vec![vec![false; k]; k];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            let ia = *index.get(a.as_str()).ok_or_else(|| CategoryError::InvalidParameter(format!("unknown element `{a}`")))?;
            let ib = *index.get(b.as_str()).ok_or_else(|| CategoryError::InvalidParameter(format!("unknown element `{b}`")))?;
            le[ia][ib] = true;
        }
        for m in 0..k {
            for i in 0..k {
                for j in 0..k {
                    if le[i][m] && le[m][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                if i != j && le[i][j] && le[j][i] {
                    return Err(CategoryError::InvalidParameter(format!(
                        "relation is not antisymmetric on `{}` and `{}`",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut identities = vec![0; k];
        let mut slot = vec![vec![usize::MAX; k]; k];
        for i in 0..k {
            for j in 0..k {
                if le[i][j] {
                    let id = if i == j {
                        identities[i] = morphisms.len();
                        identity_name(&elements[i])
                    } else {
                        format!("{}<={}", elements[i], elements[j])
                    };
                    slot[i][j] = morphisms.len();
                    morphisms.push(Morphism { id, src: i, dst: j });
                }
            }
        }
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.src, m.dst)).collect();
        Self::from_rule(elements.to_vec(), morphisms, identities, |g, f| slot[ends[f].0][ends[g].1])
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn morphism_name(&self, m: usize) -> &str {
        &self.morphisms[m].id
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphism_index.get(name).copied()
    }

    pub fn src(&self, m: usize) -> usize {
        self.morphisms[m].src
    }

    pub fn dst(&self, m: usize) -> usize {
        self.morphisms[m].dst
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].src] == m
    }

    /// `g ∘ f`, or `None` when `dst f != src g`.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.table[g * self.morphisms.len() + f]
    }

    /// Morphisms `x -> y`, in table order.
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        &self.homs[x][y]
    }

    /// Position of `m` within `hom(src m, dst m)`.
    pub fn hom_position(&self, m: usize) -> usize {
        self.hom_pos[m]
    }

    /// Identical indexed layout (same order of objects and morphisms), which
    /// makes index-based data interchangeable between the two.
    pub fn same_layout(&self, other: &FinCategory) -> bool {
        std::ptr::eq(self, other)
            || (self.objects == other.objects
                && self.morphisms == other.morphisms
                && self.identities == other.identities
                && self.table == other.table)
    }

    /// Every composable pair with its composite, as `(g, f, g∘f)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.morphisms.len();
        (0..n).flat_map(move |f| {
            let b = self.morphisms[f].dst;
            self.homs[b]
                .iter()
                .flatten()
                .map(move |&g| (g, f, self.table[g * n + f].expect("validated table")))
        })
    }

    pub fn is_discrete(&self) -> bool {
        self.morphisms.len() == self.objects.len()
    }

    pub fn to_doc(&self) -> CategoryDoc {
        CategoryDoc {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| MorphismDoc {
                    id: m.id.clone(),
                    src: self.objects[m.src].clone(),
                    dst: self.objects[m.dst].clone(),
                })
                .collect(),
            identities: self
                .objects
                .iter()
                .enumerate()
                .map(|(x, o)| (o.clone(), self.morphisms[self.identities[x]].id.clone()))
                .collect(),
            composition: self
                .composable_pairs()
                .map(|(g, f, gf)| {
                    [self.morphisms[g].id.clone(), self.morphisms[f].id.clone(), self.morphisms[gf].id.clone()]
                })
                .collect(),
        }
    }
}

/// `C × D`, with objects `"(x,y)"` and morphisms `"(f,g)"` in lexicographic order.
pub fn product(c: &FinCategory, d: &FinCategory) -> FinCategory {
    let (nd, md) = (d.object_count(), d.morphism_count());
    let objects = c
        .objects
        .iter()
        .flat_map(|x| d.objects.iter().map(move |y| pair(x, y)))
        .collect();
    let morphisms = c
        .morphisms
        .iter()
        .flat_map(|f| {
            d.morphisms.iter().map(move |g| Morphism {
                id: pair(&f.id, &g.id),
                src: f.src * nd + g.src,
                dst: f.dst * nd + g.dst,
            })
        })
        .collect();
    let identities = (0..c.object_count())
        .flat_map(|x| (0..nd).map(move |y| (x, y)))
        .map(|(x, y)| c.identity(x) * md + d.identity(y))
        .collect();
    FinCategory::from_rule(objects, morphisms, identities, |g, f| {
        let (g1, g2) = (g / md, g % md);
        let (f1, f2) = (f / md, f % md);
        c.compose(g1, f1).expect("composable") * md + d.compose(g2, f2).expect("composable")
    })
    .expect("product of valid categories is valid")
}

/// `C^op` with the same identifiers; an involution on the nose.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let morphisms = c
        .morphisms
        .iter()
        .map(|m| Morphism { id: m.id.clone(), src: m.dst, dst: m.src })
        .collect();
    FinCategory::from_rule(c.objects.clone(), morphisms, c.identities.clone(), |g, f| {
        c.compose(f, g).expect("composable")
    })
    .expect("opposite of a valid category is valid")
}

/// A map of finite categories; see [`CatFunctor::validate`].
#[derive(Clone, Debug)]
pub struct CatFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    obmap: Vec<usize>,
    mormap: Vec<usize>,
}

/// A violated functor equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FunctorViolation {
    Source { morphism: String },
    Target { morphism: String },
    Identity { object: String },
    Composition { g: String, f: String },
}

/// Every violated preservation equation; empty iff the maps form a functor.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FunctorReport {
    pub violations: Vec<FunctorViolation>,
}

impl FunctorReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FunctorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violation(s)", self.violations.len())?;
        if let Some(v) = self.violations.first() {
            write!(f, ", first: {v:?}")?;
        }
        Ok(())
    }
}

/// JSON form of a functor. Source and target may be omitted where the
/// context supplies them (diagram transitions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<CategoryRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<CategoryRef>,
    pub obmap: BTreeMap<String, String>,
    pub mormap: BTreeMap<String, String>,
}

impl PartialEq for CatFunctor {
    fn eq(&self, other: &Self) -> bool {
        *self.source == *other.source
            && *self.target == *other.target
            && self.named_obmap() == other.named_obmap()
            && self.named_mormap() == other.named_mormap()
    }
}

impl CatFunctor {
    /// Total maps given by index; functoriality is NOT checked here.
    pub fn from_maps(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obmap: Vec<usize>,
        mormap: Vec<usize>,
    ) -> Result<Self, FunctorError> {
        if obmap.len() != source.object_count() || mormap.len() != source.morphism_count() {
            return Err(FunctorError::LengthMismatch);
        }
        if obmap.iter().any(|&y| y >= target.object_count()) || mormap.iter().any(|&m| m >= target.morphism_count()) {
            return Err(FunctorError::LengthMismatch);
        }
        Ok(CatFunctor { source, target, obmap, mormap })
    }

    /// Total maps given by identifiers; functoriality is NOT checked here.
    pub fn from_named(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obmap: &BTreeMap<String, String>,
        mormap: &BTreeMap<String, String>,
    ) -> Result<Self, FunctorError> {
        for k in obmap.keys() {
            source.object_index(k).ok_or_else(|| FunctorError::UnknownObject(k.clone()))?;
        }
        for k in mormap.keys() {
            source.morphism_index(k).ok_or_else(|| FunctorError::UnknownMorphism(k.clone()))?;
        }
        let obs = source
            .objects()
            .iter()
            .map(|o| {
                let y = obmap.get(o).ok_or_else(|| FunctorError::UnmappedObject(o.clone()))?;
                target.object_index(y).ok_or_else(|| FunctorError::UnknownObject(y.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mors = source
            .morphisms()
            .iter()
            .map(|m| {
                let y = mormap.get(&m.id).ok_or_else(|| FunctorError::UnmappedMorphism(m.id.clone()))?;
                target.morphism_index(y).ok_or_else(|| FunctorError::UnknownMorphism(y.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_maps(source, target, obs, mors)
    }

    pub fn from_doc(doc: &FunctorDoc, resolver: &dyn CategoryResolver) -> Result<Self, FunctorError> {
        let source = doc
            .source
            .as_ref()
            .ok_or_else(|| CategoryError::UnknownReference("<missing source>".into()))?
            .resolve(resolver)?;
        let target = doc
            .target
            .as_ref()
            .ok_or_else(|| CategoryError::UnknownReference("<missing target>".into()))?
            .resolve(resolver)?;
        let f = Self::from_named(source, target, &doc.obmap, &doc.mormap)?;
        f.ensure_valid()?;
        Ok(f)
    }

    pub fn to_doc(&self, inline: bool) -> FunctorDoc {
        FunctorDoc {
            source: inline.then(|| CategoryRef::Inline(Box::new(self.source.to_doc()))),
            target: inline.then(|| CategoryRef::Inline(Box::new(self.target.to_doc()))),
            obmap: self.named_obmap(),
            mormap: self.named_mormap(),
        }
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        let (n, m) = (c.object_count(), c.morphism_count());
        CatFunctor { source: c.clone(), target: c, obmap: (0..n).collect(), mormap: (0..m).collect() }
    }

    /// The constant functor at `object` of `target`.
    pub fn constant(source: Arc<FinCategory>, target: Arc<FinCategory>, object: usize) -> Self {
        let id = target.identity(object);
        CatFunctor {
            obmap: vec![object; source.object_count()],
            mormap: vec![id; source.morphism_count()],
            source,
            target,
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn map_object(&self, x: usize) -> usize {
        self.obmap[x]
    }

    pub fn map_morphism(&self, m: usize) -> usize {
        self.mormap[m]
    }

    pub fn named_obmap(&self) -> BTreeMap<String, String> {
        (0..self.obmap.len())
            .map(|x| (self.source.object_name(x).to_string(), self.target.object_name(self.obmap[x]).to_string()))
            .collect()
    }

    pub fn named_mormap(&self) -> BTreeMap<String, String> {
        (0..self.mormap.len())
            .map(|m| (self.source.morphism_name(m).to_string(), self.target.morphism_name(self.mormap[m]).to_string()))
            .collect()
    }

    /// Lists every violated preservation equation.
    pub fn validate(&self) -> FunctorReport {
        let (s, t) = (&*self.source, &*self.target);
        let mut violations = Vec::new();
        for (m, mor) in s.morphisms().iter().enumerate() {
            let image = self.mormap[m];
            if t.src(image) != self.obmap[mor.src] {
                violations.push(FunctorViolation::Source { morphism: mor.id.clone() });
            }
            if t.dst(image) != self.obmap[mor.dst] {
                violations.push(FunctorViolation::Target { morphism: mor.id.clone() });
            }
        }
        for x in 0..s.object_count() {
            if self.mormap[s.identity(x)] != t.identity(self.obmap[x]) {
                violations.push(FunctorViolation::Identity { object: s.object_name(x).to_string() });
            }
        }
        for (g, f, gf) in s.composable_pairs() {
            if t.compose(self.mormap[g], self.mormap[f]) != Some(self.mormap[gf]) {
                violations.push(FunctorViolation::Composition {
                    g: s.morphism_name(g).to_string(),
                    f: s.morphism_name(f).to_string(),
                });
            }
        }
        FunctorReport { violations }
    }

    pub fn is_functor(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn ensure_valid(&self) -> Result<(), FunctorError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(FunctorError::NotAFunctor(report))
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &CatFunctor) -> Result<CatFunctor, FunctorError> {
        if *inner.target != *self.source {
            return Err(FunctorError::NotComposable);
        }
        let inner = inner.retarget(self.source.clone())?;
        Ok(CatFunctor {
            source: inner.source.clone(),
            target: self.target.clone(),
            obmap: inner.obmap.iter().map(|&y| self.obmap[y]).collect(),
            mormap: inner.mormap.iter().map(|&m| self.mormap[m]).collect(),
        })
    }

    /// Re-expresses the functor against equal (by identifiers) categories.
    pub fn reindexed(&self, source: Arc<FinCategory>, target: Arc<FinCategory>) -> Result<CatFunctor, FunctorError> {
        if Arc::ptr_eq(&source, &self.source) && Arc::ptr_eq(&target, &self.target) {
            return Ok(self.clone());
        }
        Self::from_named(source, target, &self.named_obmap(), &self.named_mormap())
    }

    fn retarget(&self, target: Arc<FinCategory>) -> Result<CatFunctor, FunctorError> {
        self.reindexed(self.source.clone(), target)
    }

    /// Componentwise product `F × G` onto freshly built product categories.
    pub fn product(f: &CatFunctor, g: &CatFunctor) -> CatFunctor {
        let source = Arc::new(product(&f.source, &g.source));
        let target = Arc::new(product(&f.target, &g.target));
        Self::product_between(f, g, source, target)
    }

    /// Componentwise product onto given `product(...)` categories.
    pub fn product_between(
        f: &CatFunctor,
        g: &CatFunctor,
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
    ) -> CatFunctor {
        let (gno, gnm) = (g.source.object_count(), g.source.morphism_count());
        let (tno, tnm) = (g.target.object_count(), g.target.morphism_count());
        let obmap = (0..f.source.object_count() * gno)
            .map(|i| f.obmap[i / gno] * tno + g.obmap[i % gno])
            .collect();
        let mormap = (0..f.source.morphism_count() * gnm)
            .map(|i| f.mormap[i / gnm] * tnm + g.mormap[i % gnm])
            .collect();
        CatFunctor { source, target, obmap, mormap }
    }

    /// Two-sided inverse, when the maps are bijective and the inverse maps
    /// form a functor.
    pub fn inverse(&self) -> Option<CatFunctor> {
        let (s, t) = (&self.source, &self.target);
        if s.object_count() != t.object_count() || s.morphism_count() != t.morphism_count() {
            return None;
        }
        let mut obinv = vec![usize::MAX; t.object_count()];
        for (x, &y) in self.obmap.iter().enumerate() {
            if obinv[y] != usize::MAX {
                return None;
            }
            obinv[y] = x;
        }
        let mut morinv = vec![usize::MAX; t.morphism_count()];
        for (m, &n) in self.mormap.iter().enumerate() {
            if morinv[n] != usize::MAX {
                return None;
            }
            morinv[n] = m;
        }
        let inv = CatFunctor { source: t.clone(), target: s.clone(), obmap: obinv, mormap: morinv };
        inv.is_functor().then_some(inv)
    }
}

/// Reports every violated equation of `f`.
pub fn validate_functor(f: &CatFunctor) -> FunctorReport {
    f.validate()
}

/// Exhaustive search for an isomorphism `C -> D`. Returns an invertible
/// functor or `None`; fails when either category exceeds `bound` objects.
pub fn find_isomorphism(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    bound: usize,
) -> Result<Option<CatFunctor>, CategoryError> {
    for k in [c.object_count(), d.object_count()] {
        if k > bound {
            return Err(CategoryError::SearchBoundExceeded { objects: k, bound });
        }
    }
    if c.object_count() != d.object_count() || c.morphism_count() != d.morphism_count() {
        return Ok(None);
    }
    let mut found = Vec::new();
    FunctorSearch::new(c, d, true, 1).run(&mut found);
    Ok(found.pop().map(|(obmap, mormap)| {
        let f = CatFunctor { source: c.clone(), target: d.clone(), obmap, mormap };
        debug_assert!(f.inverse().is_some());
        f
    }))
}

/// Up to `limit` functors `A -> B`, in a deterministic order.
pub fn enumerate_functors(a: &Arc<FinCategory>, b: &Arc<FinCategory>, limit: usize) -> Vec<CatFunctor> {
    let mut found = Vec::new();
    FunctorSearch::new(a, b, false, limit).run(&mut found);
    found
        .into_iter()
        .map(|(obmap, mormap)| CatFunctor { source: a.clone(), target: b.clone(), obmap, mormap })
        .collect()
}

struct FunctorSearch<'a> {
    c: &'a FinCategory,
    d: &'a FinCategory,
    bijective: bool,
    limit: usize,
    obmap: Vec<usize>,
    ob_used: Vec<bool>,
    mormap: Vec<usize>,
    mor_used: Vec<bool>,
    order: Vec<usize>,
    triples: Vec<Vec<(usize, usize, usize)>>,
}

const UNSET: usize = usize::MAX;

impl<'a> FunctorSearch<'a> {
    fn new(c: &'a FinCategory, d: &'a FinCategory, bijective: bool, limit: usize) -> Self {
        let mut triples = vec![Vec::new(); c.morphism_count()];
        for t @ (g, f, gf) in c.composable_pairs() {
            triples[g].push(t);
            if f != g {
                triples[f].push(t);
            }
            if gf != g && gf != f {
                triples[gf].push(t);
            }
        }
        let order = (0..c.morphism_count()).filter(|&m| !c.is_identity(m)).collect();
        FunctorSearch {
            c,
            d,
            bijective,
            limit,
            obmap: vec![UNSET; c.object_count()],
            ob_used: vec![false; d.object_count()],
            mormap: vec![UNSET; c.morphism_count()],
            mor_used: vec![false; d.morphism_count()],
            order,
            triples,
        }
    }

    fn run(&mut self, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
        if self.limit > 0 {
            self.objects(0, out);
        }
    }

    fn hom_sizes_match(&self, x: usize) -> bool {
        let y = self.obmap[x];
        (0..=x).all(|w| {
            let z = self.obmap[w];
            self.c.hom(x, w).len() == self.d.hom(y, z).len() && self.c.hom(w, x).len() == self.d.hom(z, y).len()
        })
    }

    fn objects(&mut self, x: usize, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
        if out.len() >= self.limit {
            return;
        }
        if x == self.c.object_count() {
            for o in 0..x {
                let id = self.c.identity(o);
                let image = self.d.identity(self.obmap[o]);
                self.mormap[id] = image;
                self.mor_used[image] = true;
            }
            if self.consistent_all() {
                self.morphisms(0, out);
            }
            for o in 0..x {
                let id = self.c.identity(o);
                self.mor_used[self.mormap[id]] = false;
                self.mormap[id] = UNSET;
            }
            return;
        }
        for y in 0..self.d.object_count() {
            if self.bijective && self.ob_used[y] {
                continue;
            }
            self.obmap[x] = y;
            if !self.bijective || self.hom_sizes_match(x) {
                self.ob_used[y] = true;
                self.objects(x + 1, out);
                self.ob_used[y] = false;
            }
            self.obmap[x] = UNSET;
        }
    }

    fn consistent_all(&self) -> bool {
        self.c.composable_pairs().all(|t| self.consistent(t))
    }

    fn consistent(&self, (g, f, gf): (usize, usize, usize)) -> bool {
        let (a, b, c) = (self.mormap[g], self.mormap[f], self.mormap[gf]);
        a == UNSET || b == UNSET || c == UNSET || self.d.compose(a, b) == Some(c)
    }

    fn morphisms(&mut self, i: usize, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
        if out.len() >= self.limit {
            return;
        }
        if i == self.order.len() {
            out.push((self.obmap.clone(), self.mormap.clone()));
            return;
        }
        let m = self.order[i];
        let (x, y) = (self.obmap[self.c.src(m)], self.obmap[self.c.dst(m)]);
        let candidates = self.d.hom(x, y).to_vec();
        for n in candidates {
            if self.bijective && self.mor_used[n] {
                continue;
            }
            self.mormap[m] = n;
            if self.triples[m].iter().all(|&t| self.consistent(t)) {
                self.mor_used[n] = true;
                self.morphisms(i + 1, out);
                self.mor_used[n] = false;
            }
            self.mormap[m] = UNSET;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(objects: &[&str], morphisms: &[(&str, &str, &str)], composition: &[[&str; 3]]) -> CategoryDoc {
        let identities = objects
            .iter()
            .map(|o| (o.to_string(), format!("id_{o}")))
            .collect();
        let mut mors: Vec<MorphismDoc> = objects
            .iter()
            .map(|o| MorphismDoc { id: format!("id_{o}"), src: o.to_string(), dst: o.to_string() })
            .collect();
        mors.extend(morphisms.iter().map(|(id, s, d)| MorphismDoc {
            id: id.to_string(),
            src: s.to_string(),
            dst: d.to_string(),
        }));
        // identity composites are filled in automatically
        let mut comp: Vec<[String; 3]> = Vec::new();
        for m in &mors {
            comp.push([format!("id_{}", m.dst), m.id.clone(), m.id.clone()]);
            if !m.id.starts_with("id_") {
                comp.push([m.id.clone(), format!("id_{}", m.src), m.id.clone()]);
            }
        }
        comp.extend(composition.iter().map(|t| t.map(String::from)));
        CategoryDoc { objects: objects.iter().map(|s| s.to_string()).collect(), morphisms: mors, identities, composition: comp }
    }

    #[test]
    fn build_empty_terminal_and_arrow() {
        let empty = FinCategory::build(&doc(&[], &[], &[])).unwrap();
        assert_eq!(empty.object_count(), 0);
        let one = FinCategory::build(&doc(&["*"], &[], &[])).unwrap();
        assert_eq!(one, FinCategory::terminal());
        let arrow = FinCategory::build(&doc(&["0", "1"], &[("u", "0", "1")], &[])).unwrap();
        assert_eq!(arrow, FinCategory::interval());
        assert_eq!(arrow.hom(0, 1).len(), 1);
    }

    #[test]
    fn build_reports_missing_composite() {
        let d = doc(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c"), ("h", "a", "c")], &[]);
        let err = FinCategory::build(&d).unwrap_err();
        assert_eq!(err, CategoryError::MissingComposite { g: "g".into(), f: "f".into() });
    }

    #[test]
    fn build_reports_unit_law_violation() {
        // an idempotent monoid whose "identity" acts wrongly
        let mut d = doc(&["*"], &[("e", "*", "*")], &[["e", "e", "e"]]);
        d.composition.retain(|t| !(t[0] == "id_*" && t[1] == "e"));
        d.composition.push(["id_*".into(), "e".into(), "id_*".into()]);
        let err = FinCategory::build(&d).unwrap_err();
        assert!(matches!(err, CategoryError::UnitLawViolation { .. }), "{err:?}");
    }

    #[test]
    fn build_reports_non_associative() {
        // a one-object "monoid" {1, a, b} with a·a = b, a·b = a, b·a = b, b·b = b:
        // (a·a)·b = b·b = b but a·(a·b) = a·a = b; (a·b)·a = a·a = b, a·(b·a) = a·b = a
        let d = doc(
            &["*"],
            &[("a", "*", "*"), ("b", "*", "*")],
            &[["a", "a", "b"], ["a", "b", "a"], ["b", "a", "b"], ["b", "b", "b"]],
        );
        let err = FinCategory::build(&d).unwrap_err();
        assert!(matches!(err, CategoryError::NonAssociative { .. }), "{err:?}");
    }

    #[test]
    fn build_rejects_composite_on_non_composable_pair() {
        let d = doc(&["0", "1"], &[("u", "0", "1")], &[["u", "u", "u"]]);
        assert!(matches!(FinCategory::build(&d), Err(CategoryError::NotComposable { .. })));
    }

    #[test]
    fn standard_shapes_have_expected_counts() {
        let d2 = FinCategory::discrete(2);
        assert_eq!((d2.object_count(), d2.morphism_count()), (2, 2));
        let i = FinCategory::interval();
        assert_eq!((i.object_count(), i.morphism_count()), (2, 3));
        let poset = standard_category(&StandardKind::Poset {
            elements: vec!["a".into(), "b".into(), "c".into()],
            relations: vec![("a".into(), "b".into()), ("b".into(), "c".into())],
        })
        .unwrap();
        // order pairs: 3 reflexive + a<=b, b<=c, a<=c
        assert_eq!((poset.object_count(), poset.morphism_count()), (3, 6));
        for x in 0..3 {
            for y in 0..3 {
                assert!(poset.hom(x, y).len() <= 1);
            }
        }
        assert!(matches!(
            FinCategory::from_poset(&["a".into(), "b".into()], &[("a".into(), "b".into()), ("b".into(), "a".into())]),
            Err(CategoryError::InvalidParameter(_))
        ));
    }

    #[test]
    fn named_standard_shapes() {
        let counts = |name: &str| {
            let c = standard_by_name(name).unwrap();
            (c.object_count(), c.morphism_count())
        };
        assert_eq!(counts("std:parallel"), (2, 4));
        assert_eq!(counts("std:idempotent"), (1, 2));
        assert_eq!(counts("std:cyclic:3"), (1, 3));
        assert_eq!(counts("std:simplex:2"), (3, 6));
        assert_eq!(counts("std:discrete:0"), (0, 0));
        let c3 = standard_by_name("std:cyclic:3").unwrap();
        let g = (0..3).find(|&m| !c3.is_identity(m)).unwrap();
        // g has order 3
        assert!(!c3.is_identity(c3.compose(g, g).unwrap()));
        assert!(c3.is_identity(c3.compose(g, c3.compose(g, g).unwrap()).unwrap()));
        let e = standard_by_name("std:idempotent").unwrap();
        let m = (0..2).find(|&m| !e.is_identity(m)).unwrap();
        assert_eq!(e.compose(m, m), Some(m));
        assert!(standard_by_name("std:cyclic:0").is_err());
        assert!(standard_by_name("std:nothing").is_err());
    }

    #[test]
    fn product_counts_and_units() {
        let i = FinCategory::interval();
        let sq = product(&i, &i);
        assert_eq!((sq.object_count(), sq.morphism_count()), (4, 9));
        assert_eq!(product(&FinCategory::empty(), &i).object_count(), 0);
        let c = Arc::new(FinCategory::simplex(2));
        let c1 = Arc::new(product(&c, &FinCategory::terminal()));
        assert!(find_isomorphism(&c1, &c, DEFAULT_ISO_BOUND).unwrap().is_some());
    }

    #[test]
    fn opposite_is_an_involution() {
        for c in [FinCategory::terminal(), FinCategory::interval(), FinCategory::simplex(2), FinCategory::empty()] {
            assert_eq!(opposite(&opposite(&c)), c);
        }
        let op = opposite(&FinCategory::interval());
        let u = op.morphism_index("u").unwrap();
        assert_eq!((op.object_name(op.src(u)), op.object_name(op.dst(u))), ("1", "0"));
        assert_eq!(opposite(&FinCategory::terminal()), FinCategory::terminal());
    }

    #[test]
    fn opposite_of_chain_is_reversed_chain() {
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let abc = FinCategory::from_poset(&names(&["a", "b", "c"]), &[("a".into(), "b".into()), ("b".into(), "c".into())]).unwrap();
        let cba = FinCategory::from_poset(&names(&["a", "b", "c"]), &[("c".into(), "b".into()), ("b".into(), "a".into())]).unwrap();
        let op = Arc::new(opposite(&abc));
        let iso = find_isomorphism(&op, &Arc::new(cba), 8).unwrap().expect("iso");
        // the isomorphism is forced to be the identity on objects
        assert_eq!(iso.named_obmap().get("a").map(String::as_str), Some("a"));
    }

    #[test]
    fn functor_validation_examples() {
        let c = Arc::new(FinCategory::simplex(2));
        assert!(CatFunctor::identity(c.clone()).is_functor());
        let t = Arc::new(FinCategory::interval());
        assert!(CatFunctor::constant(c.clone(), t.clone(), 1).is_functor());

        let d2 = Arc::new(FinCategory::discrete(2));
        let swap = CatFunctor::from_maps(d2.clone(), d2.clone(), vec![1, 0], vec![1, 0]).unwrap();
        assert!(swap.is_functor());

        // on the walking arrow: swap endpoints, send u to id_0
        let (id0, id1, u) = (0, 1, 2);
        let bad = CatFunctor::from_maps(t.clone(), t.clone(), vec![1, 0], vec![id1, id0, id0]).unwrap();
        let report = validate_functor(&bad);
        assert!(!report.is_valid());
        assert!(report.violations.contains(&FunctorViolation::Source { morphism: "u".into() }));
        let _ = u;
    }

    #[test]
    fn isomorphism_search_examples() {
        let c = Arc::new(FinCategory::simplex(2));
        let id = find_isomorphism(&c, &c, 8).unwrap().unwrap();
        assert!(id.is_functor() && id.inverse().is_some());
        let i = Arc::new(FinCategory::interval());
        assert!(find_isomorphism(&i, &Arc::new(FinCategory::discrete(2)), 8).unwrap().is_none());
        let ab = Arc::new(FinCategory::from_poset(&["a".into(), "b".into()], &[("a".into(), "b".into())]).unwrap());
        let iso = find_isomorphism(&ab, &i, 8).unwrap().unwrap();
        assert_eq!(iso.named_mormap()["a<=b"], "u");
        let big = Arc::new(FinCategory::discrete(9));
        assert!(matches!(find_isomorphism(&big, &big, 8), Err(CategoryError::SearchBoundExceeded { .. })));
    }

    #[test]
    fn product_is_functorial() {
        let i = Arc::new(FinCategory::interval());
        let t = Arc::new(FinCategory::terminal());
        let fs = enumerate_functors(&i, &i, 10);
        let gs = enumerate_functors(&t, &i, 10);
        for f in &fs {
            for f2 in &fs {
                for g in &gs {
                    let g2 = CatFunctor::identity(t.clone());
                    let lhs = CatFunctor::product(f, g).after(&CatFunctor::product(f2, &g2)).unwrap();
                    let rhs = CatFunctor::product(&f.after(f2).unwrap(), &g.after(&g2).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_unknown_fields() {
        let c = FinCategory::simplex(2);
        let text = serde_json::to_string(&c.to_doc()).unwrap();
        let back: CategoryDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(FinCategory::build(&back).unwrap(), c);
        let bad = text.replacen('{', "{\"extra\":1,", 1);
        assert!(serde_json::from_str::<CategoryDoc>(&bad).is_err());
    }
}
