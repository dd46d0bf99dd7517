//! Set-valued profunctors between finite categories and their coend
//! composition.
//!
//! Variance: a profunctor `C ⇸ D` is a functor `D^op × C → Set`. Elements live
//! in sets indexed by `(d, c)`; D-morphisms act covariantly on the left and
//! C-morphisms act contravariantly on the right. Element identifiers are
//! unique across the whole profunctor, and every element set is kept sorted.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{opposite, CategoryError, CategoryRef, CategoryResolver, CatFunctor, FinCategory};
use crate::ids::{pair, split_pair};
use crate::quotient::Quotient;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfunctorError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("bad element key `{0}`")]
    BadKey(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("action of `{morphism}` is missing on `{element}`")]
    MissingAction { morphism: String, element: String },
    #[error("action of `{morphism}` sends `{element}` outside its codomain")]
    ActionOutOfSet { morphism: String, element: String },
    #[error("malformed action table for `{0}`")]
    MalformedAction(String),
    #[error("identity `{morphism}` moves `{element}`")]
    IdentityNotIdentity { morphism: String, element: String },
    #[error("{side} action not functorial on ({g}, {f}) at `{element}`")]
    NotFunctorial { side: &'static str, g: String, f: String, element: String },
    #[error("actions of `{left}` and `{right}` do not commute at `{element}`")]
    ActionsDoNotCommute { left: String, right: String, element: String },
    #[error("induced action of `{morphism}` is not well defined")]
    IllDefinedAction { morphism: String },
    #[error("composition mismatch: {0}")]
    CompositionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("transformation is not natural: {0}")]
    NotNatural(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// `D^op × C → Set` with finite element sets.
#[derive(Clone, Debug)]
pub struct Profunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    sets: Vec<Vec<String>>,
    // left[γ][c]: set(src γ, c) -> set(dst γ, c)
    left: Vec<Vec<Vec<usize>>>,
    // right[σ][d]: set(d, dst σ) -> set(d, src σ)
    right: Vec<Vec<Vec<usize>>>,
    locate: HashMap<String, (usize, usize, usize)>,
}

/// JSON form of a profunctor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfunctorDoc {
    pub source: CategoryRef,
    pub target: CategoryRef,
    pub elements: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub left_action: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub right_action: BTreeMap<String, BTreeMap<String, String>>,
}

/// Identifier-level equality (independent of internal index layout).
impl PartialEq for Profunctor {
    fn eq(&self, other: &Self) -> bool {
        *self.source == *other.source && *self.target == *other.target && self.to_doc(false) == other.to_doc(false)
    }
}

impl Profunctor {
    /// Builds and validates a profunctor from indexed data; element sets are
    /// sorted and the action tables re-expressed accordingly.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        sets: Vec<Vec<String>>,
        left: Vec<Vec<Vec<usize>>>,
        right: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, ProfunctorError> {
        let (nc, nd) = (source.object_count(), target.object_count());
        if sets.len() != nc * nd {
            return Err(ProfunctorError::ShapeMismatch("element table has wrong size".into()));
        }
        let size = |d: usize, c: usize| sets[d * nc + c].len();
        if left.len() != target.morphism_count() {
            return Err(ProfunctorError::ShapeMismatch("left action table has wrong size".into()));
        }
        for (g, per_c) in left.iter().enumerate() {
            let (d0, d1) = (target.src(g), target.dst(g));
            let name = target.morphism_name(g);
            if per_c.len() != nc {
                return Err(ProfunctorError::MalformedAction(name.into()));
            }
            for (c, map) in per_c.iter().enumerate() {
                if map.len() != size(d0, c) {
                    return Err(ProfunctorError::MalformedAction(name.into()));
                }
                if let Some(i) = map.iter().position(|&j| j >= size(d1, c)) {
                    return Err(ProfunctorError::ActionOutOfSet { morphism: name.into(), element: sets[d0 * nc + c][i].clone() });
                }
            }
        }
        if right.len() != source.morphism_count() {
            return Err(ProfunctorError::ShapeMismatch("right action table has wrong size".into()));
        }
        for (s, per_d) in right.iter().enumerate() {
            let (c0, c1) = (source.src(s), source.dst(s));
            let name = source.morphism_name(s);
            if per_d.len() != nd {
                return Err(ProfunctorError::MalformedAction(name.into()));
            }
            for (d, map) in per_d.iter().enumerate() {
                if map.len() != size(d, c1) {
                    return Err(ProfunctorError::MalformedAction(name.into()));
                }
                if let Some(i) = map.iter().position(|&j| j >= size(d, c0)) {
                    return Err(ProfunctorError::ActionOutOfSet { morphism: name.into(), element: sets[d * nc + c1][i].clone() });
                }
            }
        }

        // sort every set; new_pos[set][old] = new
        let mut new_pos = Vec::with_capacity(sets.len());
        let mut sorted_sets = Vec::with_capacity(sets.len());
        for set in &sets {
            let mut order: Vec<usize> = (0..set.len()).collect();
            order.sort_by(|&a, &b| set[a].cmp(&set[b]));
            let mut pos = vec![0; set.len()];
            for (new, &old) in order.iter().enumerate() {
                pos[old] = new;
            }
            sorted_sets.push(order.iter().map(|&i| set[i].clone()).collect::<Vec<_>>());
            new_pos.push(pos);
        }
        let remap = |map: &[usize], from: usize, to: usize| {
            let mut out = vec![0; map.len()];
            for (old, &img) in map.iter().enumerate() {
                out[new_pos[from][old]] = new_pos[to][img];
            }
            out
        };
        let left = left
            .iter()
            .enumerate()
            .map(|(g, per_c)| {
                let (d0, d1) = (target.src(g), target.dst(g));
                per_c.iter().enumerate().map(|(c, m)| remap(m, d0 * nc + c, d1 * nc + c)).collect()
            })
            .collect();
        let right = right
            .iter()
            .enumerate()
            .map(|(s, per_d)| {
                let (c0, c1) = (source.src(s), source.dst(s));
                per_d.iter().enumerate().map(|(d, m)| remap(m, d * nc + c1, d * nc + c0)).collect()
            })
            .collect();

        let mut locate = HashMap::new();
        for d in 0..nd {
            for c in 0..nc {
                for (i, e) in sorted_sets[d * nc + c].iter().enumerate() {
                    if locate.insert(e.clone(), (d, c, i)).is_some() {
                        return Err(ProfunctorError::DuplicateElement(e.clone()));
                    }
                }
            }
        }
        let p = Profunctor { source, target, sets: sorted_sets, left, right, locate };
        p.check_laws()?;
        Ok(p)
    }

    /// Builds from element sets and action rules stated on the given
    /// (unsorted) indices.
    pub fn tabulate(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        sets: Vec<Vec<String>>,
        left: impl Fn(usize, usize, usize) -> usize,
        right: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self, ProfunctorError> {
        let nc = source.object_count();
        let left_table = (0..target.morphism_count())
            .map(|g| {
                (0..nc)
                    .map(|c| (0..sets[target.src(g) * nc + c].len()).map(|i| left(g, c, i)).collect())
                    .collect()
            })
            .collect();
        let right_table = (0..source.morphism_count())
            .map(|s| {
                (0..target.object_count())
                    .map(|d| (0..sets[d * nc + source.dst(s)].len()).map(|i| right(s, d, i)).collect())
                    .collect()
            })
            .collect();
        Self::new(source, target, sets, left_table, right_table)
    }

    fn check_laws(&self) -> Result<(), ProfunctorError> {
        let (c_cat, d_cat) = (&*self.source, &*self.target);
        let nc = c_cat.object_count();
        let elem = |d: usize, c: usize, i: usize| self.sets[d * nc + c][i].clone();
        for x in 0..d_cat.object_count() {
            let id = d_cat.identity(x);
            for c in 0..nc {
                if let Some(i) = self.left[id][c].iter().enumerate().position(|(i, &j)| i != j) {
                    return Err(ProfunctorError::IdentityNotIdentity { morphism: d_cat.morphism_name(id).into(), element: elem(x, c, i) });
                }
            }
        }
        for x in 0..nc {
            let id = c_cat.identity(x);
            for d in 0..d_cat.object_count() {
                if let Some(i) = self.right[id][d].iter().enumerate().position(|(i, &j)| i != j) {
                    return Err(ProfunctorError::IdentityNotIdentity { morphism: c_cat.morphism_name(id).into(), element: elem(d, x, i) });
                }
            }
        }
        for (g, f, gf) in d_cat.composable_pairs() {
            for c in 0..nc {
                let src = d_cat.src(f);
                for i in 0..self.set_size(src, c) {
                    if self.left[gf][c][i] != self.left[g][c][self.left[f][c][i]] {
                        return Err(ProfunctorError::NotFunctorial {
                            side: "left",
                            g: d_cat.morphism_name(g).into(),
                            f: d_cat.morphism_name(f).into(),
                            element: elem(src, c, i),
                        });
                    }
                }
            }
        }
        for (g, f, gf) in c_cat.composable_pairs() {
            let top = c_cat.dst(g);
            for d in 0..d_cat.object_count() {
                for i in 0..self.set_size(d, top) {
                    // x·(g∘f) = (x·g)·f
                    if self.right[gf][d][i] != self.right[f][d][self.right[g][d][i]] {
                        return Err(ProfunctorError::NotFunctorial {
                            side: "right",
                            g: c_cat.morphism_name(g).into(),
                            f: c_cat.morphism_name(f).into(),
                            element: elem(d, top, i),
                        });
                    }
                }
            }
        }
        for g in 0..d_cat.morphism_count() {
            let (d0, d1) = (d_cat.src(g), d_cat.dst(g));
            for s in 0..c_cat.morphism_count() {
                let (c0, c1) = (c_cat.src(s), c_cat.dst(s));
                for i in 0..self.set_size(d0, c1) {
                    let a = self.left[g][c0][self.right[s][d0][i]];
                    let b = self.right[s][d1][self.left[g][c1][i]];
                    if a != b {
                        return Err(ProfunctorError::ActionsDoNotCommute {
                            left: d_cat.morphism_name(g).into(),
                            right: c_cat.morphism_name(s).into(),
                            element: elem(d0, c1, i),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The profunctor with every element set empty.
    pub fn empty(source: Arc<FinCategory>, target: Arc<FinCategory>) -> Self {
        let sets = vec![Vec::new(); source.object_count() * target.object_count()];
        Self::tabulate(source, target, sets, |_, _, _| 0, |_, _, _| 0).expect("empty profunctor")
    }

    /// Builds from identifier-keyed data. Actions of identities may be
    /// omitted; every other action must cover its whole domain.
    pub fn from_named_parts(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        elements: &BTreeMap<String, Vec<String>>,
        left_action: &BTreeMap<String, BTreeMap<String, String>>,
        right_action: &BTreeMap<String, BTreeMap<String, String>>,
    ) -> Result<Self, ProfunctorError> {
        let nc = source.object_count();
        let mut sets = vec![Vec::new(); nc * target.object_count()];
        for (key, elems) in elements {
            let (d, c) = split_pair(key, |d| target.object_index(d).is_some(), |c| source.object_index(c).is_some())
                .ok_or_else(|| ProfunctorError::BadKey(key.clone()))?;
            let (d, c) = (target.object_index(d).unwrap(), source.object_index(c).unwrap());
            sets[d * nc + c] = elems.clone();
        }
        let mut where_is = HashMap::new();
        for (k, set) in sets.iter().enumerate() {
            for (i, e) in set.iter().enumerate() {
                if where_is.insert(e.clone(), (k, i)).is_some() {
                    return Err(ProfunctorError::DuplicateElement(e.clone()));
                }
            }
        }
        let action_table = |cat: &FinCategory,
                            actions: &BTreeMap<String, BTreeMap<String, String>>,
                            domain: &dyn Fn(usize, usize) -> usize,
                            codomain: &dyn Fn(usize, usize) -> usize,
                            others: usize|
         -> Result<Vec<Vec<Vec<usize>>>, ProfunctorError> {
            for name in actions.keys() {
                cat.morphism_index(name).ok_or_else(|| ProfunctorError::UnknownMorphism(name.clone()))?;
            }
            let mut table = Vec::with_capacity(cat.morphism_count());
            for m in 0..cat.morphism_count() {
                let name = cat.morphism_name(m);
                let given = actions.get(name);
                let mut used = 0;
                let mut per = Vec::with_capacity(others);
                for o in 0..others {
                    let (from, to) = (domain(m, o), codomain(m, o));
                    let mut map = Vec::with_capacity(sets[from].len());
                    for (i, e) in sets[from].iter().enumerate() {
                        let image = match given.and_then(|g| g.get(e)) {
                            Some(img) => {
                                used += 1;
                                match where_is.get(img) {
                                    Some(&(k, j)) if k == to => j,
                                    _ => return Err(ProfunctorError::ActionOutOfSet { morphism: name.into(), element: e.clone() }),
                                }
                            }
                            None if cat.is_identity(m) && from == to => i,
                            None => return Err(ProfunctorError::MissingAction { morphism: name.into(), element: e.clone() }),
                        };
                        map.push(image);
                    }
                    per.push(map);
                }
                if given.is_some_and(|g| g.len() != used) {
                    let stray = given
                        .unwrap()
                        .keys()
                        .find(|e| where_is.get(*e).is_none_or(|&(k, _)| !(0..others).any(|o| domain(m, o) == k)))
                        .cloned()
                        .unwrap_or_default();
                    return Err(ProfunctorError::UnknownElement(stray));
                }
                table.push(per);
            }
            Ok(table)
        };
        let left = action_table(
            &target,
            left_action,
            &|g, c| target.src(g) * nc + c,
            &|g, c| target.dst(g) * nc + c,
            nc,
        )?;
        let right = action_table(
            &source,
            right_action,
            &|s, d| d * nc + source.dst(s),
            &|s, d| d * nc + source.src(s),
            target.object_count(),
        )?;
        Self::new(source, target, sets, left, right)
    }

    pub fn from_doc(doc: &ProfunctorDoc, resolver: &dyn CategoryResolver) -> Result<Self, ProfunctorError> {
        let source = doc.source.resolve(resolver)?;
        let target = doc.target.resolve(resolver)?;
        Self::from_named_parts(source, target, &doc.elements, &doc.left_action, &doc.right_action)
    }

    /// Serializes; with `inline` the categories are embedded, otherwise they
    /// are left as empty-named references for the caller to fill in.
    pub fn to_doc(&self, inline: bool) -> ProfunctorDoc {
        let (c_cat, d_cat) = (&*self.source, &*self.target);
        let nc = c_cat.object_count();
        let mut elements = BTreeMap::new();
        for d in 0..d_cat.object_count() {
            for c in 0..nc {
                let set = &self.sets[d * nc + c];
                if !set.is_empty() {
                    elements.insert(pair(d_cat.object_name(d), c_cat.object_name(c)), set.clone());
                }
            }
        }
        let mut left_action = BTreeMap::new();
        for g in 0..d_cat.morphism_count() {
            if d_cat.is_identity(g) {
                continue;
            }
            let mut map = BTreeMap::new();
            for c in 0..nc {
                for (i, &j) in self.left[g][c].iter().enumerate() {
                    map.insert(self.sets[d_cat.src(g) * nc + c][i].clone(), self.sets[d_cat.dst(g) * nc + c][j].clone());
                }
            }
            if !map.is_empty() {
                left_action.insert(d_cat.morphism_name(g).to_string(), map);
            }
        }
        let mut right_action = BTreeMap::new();
        for s in 0..c_cat.morphism_count() {
            if c_cat.is_identity(s) {
                continue;
            }
            let mut map = BTreeMap::new();
            for d in 0..d_cat.object_count() {
                for (i, &j) in self.right[s][d].iter().enumerate() {
                    map.insert(self.sets[d * nc + c_cat.dst(s)][i].clone(), self.sets[d * nc + c_cat.src(s)][j].clone());
                }
            }
            if !map.is_empty() {
                right_action.insert(c_cat.morphism_name(s).to_string(), map);
            }
        }
        let cat_ref = |c: &FinCategory| {
            if inline {
                CategoryRef::Inline(Box::new(c.to_doc()))
            } else {
                CategoryRef::Name(String::new())
            }
        };
        ProfunctorDoc { source: cat_ref(c_cat), target: cat_ref(d_cat), elements, left_action, right_action }
    }

    /// Re-expresses the profunctor over equal (by identifiers) categories.
    pub fn reindexed(&self, source: Arc<FinCategory>, target: Arc<FinCategory>) -> Result<Self, ProfunctorError> {
        if self.source.same_layout(&source) && self.target.same_layout(&target) {
            let mut p = self.clone();
            p.source = source;
            p.target = target;
            return Ok(p);
        }
        if *self.source != *source || *self.target != *target {
            return Err(ProfunctorError::ShapeMismatch("categories differ".into()));
        }
        let doc = self.to_doc(false);
        Self::from_named_parts(source, target, &doc.elements, &doc.left_action, &doc.right_action)
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn elements(&self, d: usize, c: usize) -> &[String] {
        &self.sets[d * self.source.object_count() + c]
    }

    pub fn set_size(&self, d: usize, c: usize) -> usize {
        self.elements(d, c).len()
    }

    pub fn element(&self, d: usize, c: usize, i: usize) -> &str {
        &self.elements(d, c)[i]
    }

    /// `(d, c, index)` of an element identifier.
    pub fn locate(&self, id: &str) -> Option<(usize, usize, usize)> {
        self.locate.get(id).copied()
    }

    /// Image of element `i` of `(src γ, c)` under the left action of `γ`.
    pub fn left_act(&self, g: usize, c: usize, i: usize) -> usize {
        self.left[g][c][i]
    }

    /// Image of element `i` of `(d, dst σ)` under the right action of `σ`.
    pub fn right_act(&self, s: usize, d: usize, i: usize) -> usize {
        self.right[s][d][i]
    }

    pub fn left_map(&self, g: usize, c: usize) -> &[usize] {
        &self.left[g][c]
    }

    pub fn right_map(&self, s: usize, d: usize) -> &[usize] {
        &self.right[s][d]
    }

    /// Every element identifier, grouped by `(d, c)`.
    pub fn elements_iter(&self) -> impl Iterator<Item = &str> {
        self.sets.iter().flatten().map(String::as_str)
    }

    pub fn total_elements(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.total_elements() == 0
    }

    /// `P^op : D^op ⇸ C^op` with `P^op(c, d) = P(d, c)`.
    pub fn opposite(&self) -> Profunctor {
        let c_op = Arc::new(opposite(&self.source));
        let d_op = Arc::new(opposite(&self.target));
        let nd = self.target.object_count();
        let nc = self.source.object_count();
        let mut sets = vec![Vec::new(); nc * nd];
        for d in 0..nd {
            for c in 0..nc {
                sets[c * nd + d] = self.elements(d, c).to_vec();
            }
        }
        // left action of σ^op : c' -> c in C^op is the right action of σ
        Self::tabulate(d_op, c_op, sets, |s, d, i| self.right[s][d][i], |g, c, i| self.left[g][c][i])
            .expect("opposite of a valid profunctor")
    }
}

/// `hom(c', c) = C(c, c')` with actions by post- and pre-composition.
pub fn hom_profunctor(c: &Arc<FinCategory>) -> Profunctor {
    let n = c.object_count();
    let mut sets = vec![Vec::new(); n * n];
    for x in 0..n {
        for y in 0..n {
            sets[y * n + x] = c.hom(x, y).iter().map(|&m| c.morphism_name(m).to_string()).collect();
        }
    }
    let cat = c.clone();
    Profunctor::tabulate(
        c.clone(),
        c.clone(),
        sets,
        |g, x, i| {
            let f = cat.hom(x, cat.src(g))[i];
            cat.hom_position(cat.compose(g, f).expect("composable"))
        },
        |s, y, i| {
            let f = cat.hom(cat.dst(s), y)[i];
            cat.hom_position(cat.compose(f, s).expect("composable"))
        },
    )
    .expect("hom profunctor")
}

/// The covariant representable `D(F−, −)` of a functor `F: C → D`, as a
/// profunctor `C ⇸ D`. Elements are named `"(c,h)"` for `h: F c → d`.
pub fn from_functor(f: &CatFunctor) -> Result<Profunctor, ProfunctorError> {
    f.ensure_valid().map_err(|e| ProfunctorError::ShapeMismatch(e.to_string()))?;
    let (c_cat, d_cat) = (f.source().clone(), f.target().clone());
    let nc = c_cat.object_count();
    let mut sets = vec![Vec::new(); nc * d_cat.object_count()];
    for d in 0..d_cat.object_count() {
        for c in 0..nc {
            sets[d * nc + c] = d_cat
                .hom(f.map_object(c), d)
                .iter()
                .map(|&h| pair(c_cat.object_name(c), d_cat.morphism_name(h)))
                .collect();
        }
    }
    Profunctor::tabulate(
        c_cat.clone(),
        d_cat.clone(),
        sets,
        |g, c, i| {
            let h = d_cat.hom(f.map_object(c), d_cat.src(g))[i];
            d_cat.hom_position(d_cat.compose(g, h).expect("composable"))
        },
        |s, d, i| {
            let h = d_cat.hom(f.map_object(c_cat.dst(s)), d)[i];
            d_cat.hom_position(d_cat.compose(h, f.map_morphism(s)).expect("composable"))
        },
    )
}

/// A coend composite together with the bookkeeping needed to map out of it:
/// every element remembers a representative generator `(d, n, m)`.
#[derive(Clone, Debug)]
pub struct Coend {
    composite: Profunctor,
    reps: Vec<Vec<(usize, usize, usize)>>,
    class_of: Vec<HashMap<(usize, usize, usize), usize>>,
}

impl Coend {
    /// `N ∘ M` for `M: C ⇸ D` and `N: D ⇸ E`: at `(e, c)` the disjoint union
    /// over `d` of `N(e,d) × M(d,c)` modulo `(n·γ, m) ~ (n, γ·m)` for every
    /// `γ: d → d'`, `n ∈ N(e,d')`, `m ∈ M(d,c)`. Elements are named by the
    /// least `"(n,m)"` in their class.
    pub fn new(n: &Profunctor, m: &Profunctor) -> Result<Self, ProfunctorError> {
        if *n.source != *m.target {
            return Err(ProfunctorError::CompositionMismatch(
                "source of the outer profunctor differs from the target of the inner one".into(),
            ));
        }
        let n = if n.source.same_layout(&m.target) {
            std::borrow::Cow::Borrowed(n)
        } else {
            std::borrow::Cow::Owned(n.reindexed(m.target.clone(), n.target.clone())?)
        };
        let (c_cat, d_cat, e_cat) = (m.source.clone(), m.target.clone(), n.target.clone());
        let (nc, nd, ne) = (c_cat.object_count(), d_cat.object_count(), e_cat.object_count());

        let mut sets = vec![Vec::new(); ne * nc];
        let mut reps = vec![Vec::new(); ne * nc];
        let mut class_of = vec![HashMap::new(); ne * nc];
        for e in 0..ne {
            for c in 0..nc {
                let mut offsets = vec![0; nd + 1];
                for d in 0..nd {
                    offsets[d + 1] = offsets[d] + n.set_size(e, d) * m.set_size(d, c);
                }
                let gen = |d: usize, x: usize, y: usize| offsets[d] + x * m.set_size(d, c) + y;
                let mut q = Quotient::new(offsets[nd]);
                for g in 0..d_cat.morphism_count() {
                    if d_cat.is_identity(g) {
                        continue;
                    }
                    let (d0, d1) = (d_cat.src(g), d_cat.dst(g));
                    for x1 in 0..n.set_size(e, d1) {
                        let x0 = n.right_act(g, e, x1);
                        for y0 in 0..m.set_size(d0, c) {
                            let y1 = m.left_act(g, c, y0);
                            q.union(gen(d0, x0, y0), gen(d1, x1, y1));
                        }
                    }
                }
                let mut decode = Vec::with_capacity(offsets[nd]);
                for d in 0..nd {
                    for x in 0..n.set_size(e, d) {
                        for y in 0..m.set_size(d, c) {
                            decode.push((d, x, y));
                        }
                    }
                }
                let name = |i: usize| {
                    let (d, x, y) = decode[i];
                    pair(n.element(e, d, x), m.element(d, c, y))
                };
                let (labels, classes) = q.classes_by(name);
                let k = e * nc + c;
                for members in &classes {
                    let least = members.iter().map(|&i| name(i)).min().expect("non-empty");
                    let rep = *members.iter().find(|&&i| name(i) == least).unwrap();
                    sets[k].push(least);
                    reps[k].push(decode[rep]);
                }
                for (i, &label) in labels.iter().enumerate() {
                    class_of[k].insert(decode[i], label);
                }
            }
        }

        // induced actions, checked on every generator of every class
        let mut left = Vec::with_capacity(e_cat.morphism_count());
        for g in 0..e_cat.morphism_count() {
            let (e0, e1) = (e_cat.src(g), e_cat.dst(g));
            let mut per_c = Vec::with_capacity(nc);
            for c in 0..nc {
                let mut map = vec![usize::MAX; sets[e0 * nc + c].len()];
                for (&(d, x, y), &cls) in &class_of[e0 * nc + c] {
                    let image = class_of[e1 * nc + c][&(d, n.left_act(g, d, x), y)];
                    if map[cls] == usize::MAX {
                        map[cls] = image;
                    } else if map[cls] != image {
                        return Err(ProfunctorError::IllDefinedAction { morphism: e_cat.morphism_name(g).into() });
                    }
                }
                per_c.push(map);
            }
            left.push(per_c);
        }
        let mut right = Vec::with_capacity(c_cat.morphism_count());
        for s in 0..c_cat.morphism_count() {
            let (c0, c1) = (c_cat.src(s), c_cat.dst(s));
            let mut per_e = Vec::with_capacity(ne);
            for e in 0..ne {
                let mut map = vec![usize::MAX; sets[e * nc + c1].len()];
                for (&(d, x, y), &cls) in &class_of[e * nc + c1] {
                    let image = class_of[e * nc + c0][&(d, x, m.right_act(s, d, y))];
                    if map[cls] == usize::MAX {
                        map[cls] = image;
                    } else if map[cls] != image {
                        return Err(ProfunctorError::IllDefinedAction { morphism: c_cat.morphism_name(s).into() });
                    }
                }
                per_e.push(map);
            }
            right.push(per_e);
        }
        let composite = Profunctor::new(c_cat, e_cat, sets, left, right)?;
        Ok(Coend { composite, reps, class_of })
    }

    pub fn profunctor(&self) -> &Profunctor {
        &self.composite
    }

    pub fn into_profunctor(self) -> Profunctor {
        self.composite
    }

    /// Representative generator `(d, n, m)` of element `i` at `(e, c)`.
    pub fn representative(&self, e: usize, c: usize, i: usize) -> (usize, usize, usize) {
        self.reps[e * self.composite.source.object_count() + c][i]
    }

    /// Element index at `(e, c)` of the class of generator `(d, n, m)`.
    pub fn class(&self, e: usize, c: usize, generator: (usize, usize, usize)) -> usize {
        self.class_of[e * self.composite.source.object_count() + c][&generator]
    }
}

/// `N ∘ M` (apply `M: C ⇸ D` first, then `N: D ⇸ E`).
pub fn compose_profunctors(n: &Profunctor, m: &Profunctor) -> Result<Profunctor, ProfunctorError> {
    Coend::new(n, m).map(Coend::into_profunctor)
}

/// A morphism of profunctors with the same source and target categories.
#[derive(Clone, Debug)]
pub struct ProTransformation {
    source: Profunctor,
    target: Profunctor,
    components: Vec<Vec<usize>>,
}

/// JSON form of a transformation: components keyed by `"(d,c)"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformationDoc {
    pub source: String,
    pub target: String,
    pub components: BTreeMap<String, BTreeMap<String, String>>,
}

impl ProTransformation {
    /// Checks shapes and naturality.
    pub fn new(source: Profunctor, target: Profunctor, components: Vec<Vec<usize>>) -> Result<Self, ProfunctorError> {
        if !source.source.same_layout(&target.source) || !source.target.same_layout(&target.target) {
            return Err(ProfunctorError::ShapeMismatch("transformation between profunctors over different categories".into()));
        }
        if components.len() != source.sets.len()
            || components
                .iter()
                .zip(source.sets.iter().zip(&target.sets))
                .any(|(comp, (a, b))| comp.len() != a.len() || comp.iter().any(|&j| j >= b.len()))
        {
            return Err(ProfunctorError::ShapeMismatch("component sizes".into()));
        }
        let t = ProTransformation { source, target, components };
        if let Some(why) = t.naturality_failure() {
            return Err(ProfunctorError::NotNatural(why));
        }
        Ok(t)
    }

    /// Components given as identifier maps.
    pub fn from_named(source: Profunctor, target: Profunctor, map: &HashMap<String, String>) -> Result<Self, ProfunctorError> {
        let nc = source.source.object_count();
        let mut components = Vec::with_capacity(source.sets.len());
        for (k, set) in source.sets.iter().enumerate() {
            let mut comp = Vec::with_capacity(set.len());
            for e in set {
                let img = map.get(e).ok_or_else(|| ProfunctorError::UnknownElement(e.clone()))?;
                match target.locate(img) {
                    Some((d, c, j)) if d * nc + c == k => comp.push(j),
                    _ => return Err(ProfunctorError::ShapeMismatch(format!("`{e}` maps outside its component"))),
                }
            }
            components.push(comp);
        }
        Self::new(source, target, components)
    }

    pub fn from_doc(source: Profunctor, target: Profunctor, doc: &TransformationDoc) -> Result<Self, ProfunctorError> {
        let map = doc.components.values().flat_map(|m| m.iter().map(|(a, b)| (a.clone(), b.clone()))).collect();
        Self::from_named(source, target, &map)
    }

    pub fn to_doc(&self, source: &str, target: &str) -> TransformationDoc {
        let (c_cat, d_cat) = (&*self.source.source, &*self.source.target);
        let nc = c_cat.object_count();
        let mut components = BTreeMap::new();
        for d in 0..d_cat.object_count() {
            for c in 0..nc {
                let k = d * nc + c;
                if self.components[k].is_empty() {
                    continue;
                }
                let map = self.components[k]
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (self.source.sets[k][i].clone(), self.target.sets[k][j].clone()))
                    .collect();
                components.insert(pair(d_cat.object_name(d), c_cat.object_name(c)), map);
            }
        }
        TransformationDoc { source: source.into(), target: target.into(), components }
    }

    pub fn identity(p: &Profunctor) -> Self {
        let components = p.sets.iter().map(|s| (0..s.len()).collect()).collect();
        ProTransformation { source: p.clone(), target: p.clone(), components }
    }

    pub fn source(&self) -> &Profunctor {
        &self.source
    }

    pub fn target(&self) -> &Profunctor {
        &self.target
    }

    /// Image of element `i` of the source at `(d, c)`.
    pub fn apply(&self, d: usize, c: usize, i: usize) -> usize {
        self.components[d * self.source.source.object_count() + c][i]
    }

    fn naturality_failure(&self) -> Option<String> {
        let (p, q) = (&self.source, &self.target);
        let (c_cat, d_cat) = (&*p.source, &*p.target);
        let nc = c_cat.object_count();
        for g in 0..d_cat.morphism_count() {
            let (d0, d1) = (d_cat.src(g), d_cat.dst(g));
            for c in 0..nc {
                for i in 0..p.set_size(d0, c) {
                    let a = self.components[d1 * nc + c][p.left_act(g, c, i)];
                    let b = q.left_act(g, c, self.components[d0 * nc + c][i]);
                    if a != b {
                        return Some(format!("left action of `{}` at `{}`", d_cat.morphism_name(g), p.element(d0, c, i)));
                    }
                }
            }
        }
        for s in 0..c_cat.morphism_count() {
            let (c0, c1) = (c_cat.src(s), c_cat.dst(s));
            for d in 0..d_cat.object_count() {
                for i in 0..p.set_size(d, c1) {
                    let a = self.components[d * nc + c0][p.right_act(s, d, i)];
                    let b = q.right_act(s, d, self.components[d * nc + c1][i]);
                    if a != b {
                        return Some(format!("right action of `{}` at `{}`", c_cat.morphism_name(s), p.element(d, c1, i)));
                    }
                }
            }
        }
        None
    }

    pub fn is_natural(&self) -> bool {
        self.naturality_failure().is_none()
    }

    /// True iff every component is a bijection.
    pub fn is_natural_iso(&self) -> bool {
        self.components.iter().zip(&self.target.sets).all(|(comp, tgt)| {
            if comp.len() != tgt.len() {
                return false;
            }
            let mut seen = vec![false; tgt.len()];
            comp.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ProTransformation) -> Result<ProTransformation, ProfunctorError> {
        if self.target != other.source {
            return Err(ProfunctorError::ShapeMismatch("transformations are not composable".into()));
        }
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().map(|&j| b[j]).collect())
            .collect();
        ProTransformation::new(self.source.clone(), other.target.clone(), components)
    }
}

/// True iff every component of `alpha` is a bijection.
pub fn is_natural_iso(alpha: &ProTransformation) -> bool {
    alpha.is_natural_iso()
}

/// Maps a coend along maps of generators: class of `(d, n, m)` goes to the
/// class of `(d, fn_n(e,d,n), fn_m(d,c,m))` in `dst`.
fn map_coend(
    src: &Coend,
    dst: &Coend,
    fn_n: impl Fn(usize, usize, usize) -> usize,
    fn_m: impl Fn(usize, usize, usize) -> usize,
) -> Result<ProTransformation, ProfunctorError> {
    let p = src.profunctor();
    let (ne, nc) = (p.target.object_count(), p.source.object_count());
    let mut components = Vec::with_capacity(ne * nc);
    for e in 0..ne {
        for c in 0..nc {
            let comp = (0..p.set_size(e, c))
                .map(|i| {
                    let (d, x, y) = src.representative(e, c, i);
                    dst.class(e, c, (d, fn_n(e, d, x), fn_m(d, c, y)))
                })
                .collect();
            components.push(comp);
        }
    }
    ProTransformation::new(p.clone(), dst.profunctor().clone(), components)
}

/// `hom(D) ∘ M → M`, class of `(γ, m)` to `γ·m`.
pub fn left_unitor(m: &Profunctor) -> Result<ProTransformation, ProfunctorError> {
    let d_cat = m.target.clone();
    let hom = hom_profunctor(&d_cat);
    let coend = Coend::new(&hom, m)?;
    let p = coend.profunctor();
    let nc = m.source.object_count();
    let mut components = Vec::new();
    for e in 0..d_cat.object_count() {
        for c in 0..nc {
            components.push(
                (0..p.set_size(e, c))
                    .map(|i| {
                        let (d, x, y) = coend.representative(e, c, i);
                        let g = d_cat.morphism_index(hom.element(e, d, x)).expect("hom element");
                        m.left_act(g, c, y)
                    })
                    .collect(),
            );
        }
    }
    ProTransformation::new(p.clone(), m.clone(), components)
}

/// `M ∘ hom(C) → M`, class of `(m, σ)` to `m·σ`.
pub fn right_unitor(m: &Profunctor) -> Result<ProTransformation, ProfunctorError> {
    let c_cat = m.source.clone();
    let hom = hom_profunctor(&c_cat);
    let coend = Coend::new(m, &hom)?;
    let p = coend.profunctor();
    let nc = c_cat.object_count();
    let mut components = Vec::new();
    for d in 0..m.target.object_count() {
        for c in 0..nc {
            components.push(
                (0..p.set_size(d, c))
                    .map(|i| {
                        let (c1, x, y) = coend.representative(d, c, i);
                        let s = c_cat.morphism_index(hom.element(c1, c, y)).expect("hom element");
                        m.right_act(s, d, x)
                    })
                    .collect(),
            );
        }
    }
    ProTransformation::new(p.clone(), m.clone(), components)
}

/// `(P ∘ N) ∘ M → P ∘ (N ∘ M)` on representatives.
pub fn associator(p: &Profunctor, n: &Profunctor, m: &Profunctor) -> Result<ProTransformation, ProfunctorError> {
    let pn = Coend::new(p, n)?;
    let nm = Coend::new(n, m)?;
    let lhs = Coend::new(pn.profunctor(), m)?;
    let rhs = Coend::new(p, nm.profunctor())?;
    let out = lhs.profunctor();
    let (nf, nc) = (out.target.object_count(), out.source.object_count());
    let mut components = Vec::with_capacity(nf * nc);
    for f in 0..nf {
        for c in 0..nc {
            components.push(
                (0..out.set_size(f, c))
                    .map(|i| {
                        let (d, x, y) = lhs.representative(f, c, i);
                        let (e, pp, nn) = pn.representative(f, d, x);
                        let inner = nm.class(e, c, (d, nn, y));
                        rhs.class(f, c, (e, pp, inner))
                    })
                    .collect(),
            );
        }
    }
    ProTransformation::new(out.clone(), rhs.profunctor().clone(), components)
}

/// A pointwise coproduct with its injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub profunctor: Profunctor,
    pub inl: ProTransformation,
    pub inr: ProTransformation,
}

/// `M₁ ⊔ M₂`, elements tagged `"(1,x)"` and `"(2,y)"`.
pub fn coproduct(m1: &Profunctor, m2: &Profunctor) -> Result<Coproduct, ProfunctorError> {
    if !m1.source.same_layout(&m2.source) || !m1.target.same_layout(&m2.target) {
        return Err(ProfunctorError::ShapeMismatch("coproduct of profunctors over different categories".into()));
    }
    let nc = m1.source.object_count();
    let sets: Vec<Vec<String>> = m1
        .sets
        .iter()
        .zip(&m2.sets)
        .map(|(a, b)| a.iter().map(|x| pair("1", x)).chain(b.iter().map(|y| pair("2", y))).collect())
        .collect();
    let split = |k: usize, i: usize| {
        let n1 = m1.sets[k].len();
        if i < n1 {
            (true, i)
        } else {
            (false, i - n1)
        }
    };
    let p = Profunctor::tabulate(
        m1.source.clone(),
        m1.target.clone(),
        sets,
        |g, c, i| {
            let (src, dst) = (m1.target.src(g) * nc + c, m1.target.dst(g) * nc + c);
            match split(src, i) {
                (true, j) => m1.left[g][c][j],
                (false, j) => m1.sets[dst].len() + m2.left[g][c][j],
            }
        },
        |s, d, i| {
            let (src, dst) = (d * nc + m1.source.dst(s), d * nc + m1.source.src(s));
            match split(src, i) {
                (true, j) => m1.right[s][d][j],
                (false, j) => m1.sets[dst].len() + m2.right[s][d][j],
            }
        },
    )?;
    let injection = |m: &Profunctor, tag: &str| {
        let map = m.locate.keys().map(|x| (x.clone(), pair(tag, x))).collect();
        ProTransformation::from_named(m.clone(), p.clone(), &map)
    };
    Ok(Coproduct { inl: injection(m1, "1")?, inr: injection(m2, "2")?, profunctor: p.clone() })
}

/// A pointwise coequalizer with its projection.
#[derive(Clone, Debug)]
pub struct Coequalizer {
    pub profunctor: Profunctor,
    pub projection: ProTransformation,
}

/// Quotient of `M′` by `α(x) ~ β(x)`, computed on each element set. Classes
/// are named by their least identifier.
pub fn coequalizer(alpha: &ProTransformation, beta: &ProTransformation) -> Result<Coequalizer, ProfunctorError> {
    if alpha.source != beta.source || alpha.target != beta.target {
        return Err(ProfunctorError::ShapeMismatch("coequalizer of non-parallel transformations".into()));
    }
    let beta = ProTransformation::new(alpha.source.clone(), alpha.target.clone(), {
        // re-express β on α's layout
        let map: HashMap<String, String> = beta
            .source
            .sets
            .iter()
            .enumerate()
            .flat_map(|(k, set)| set.iter().enumerate().map(move |(i, e)| (k, i, e)))
            .map(|(k, i, e)| (e.clone(), beta.target.sets[k][beta.components[k][i]].clone()))
            .collect();
        alpha
            .source
            .sets
            .iter()
            .map(|set| set.iter().map(|e| alpha.target.locate(&map[e]).expect("parallel").2).collect())
            .collect()
    })?;
    let target = &alpha.target;
    let nc = target.source.object_count();
    let mut labels = Vec::with_capacity(target.sets.len());
    let mut sets = Vec::with_capacity(target.sets.len());
    for (k, set) in target.sets.iter().enumerate() {
        let mut q = Quotient::new(set.len());
        for i in 0..alpha.source.sets[k].len() {
            q.union(alpha.components[k][i], beta.components[k][i]);
        }
        let (label, classes) = q.classes_by(|i| set[i].clone());
        sets.push(classes.iter().map(|m| m.iter().map(|&i| set[i].clone()).min().unwrap()).collect::<Vec<_>>());
        labels.push(label);
    }
    let mut left = Vec::new();
    for g in 0..target.target.morphism_count() {
        let (d0, d1) = (target.target.src(g), target.target.dst(g));
        let mut per_c = Vec::new();
        for c in 0..nc {
            let (k0, k1) = (d0 * nc + c, d1 * nc + c);
            let mut map = vec![usize::MAX; sets[k0].len()];
            for i in 0..target.sets[k0].len() {
                let image = labels[k1][target.left[g][c][i]];
                let slot = &mut map[labels[k0][i]];
                if *slot != usize::MAX && *slot != image {
                    return Err(ProfunctorError::IllDefinedAction { morphism: target.target.morphism_name(g).into() });
                }
                *slot = image;
            }
            per_c.push(map);
        }
        left.push(per_c);
    }
    let mut right = Vec::new();
    for s in 0..target.source.morphism_count() {
        let (c0, c1) = (target.source.src(s), target.source.dst(s));
        let mut per_d = Vec::new();
        for d in 0..target.target.object_count() {
            let (k1, k0) = (d * nc + c1, d * nc + c0);
            let mut map = vec![usize::MAX; sets[k1].len()];
            for i in 0..target.sets[k1].len() {
                let image = labels[k0][target.right[s][d][i]];
                let slot = &mut map[labels[k1][i]];
                if *slot != usize::MAX && *slot != image {
                    return Err(ProfunctorError::IllDefinedAction { morphism: target.source.morphism_name(s).into() });
                }
                *slot = image;
            }
            per_d.push(map);
        }
        right.push(per_d);
    }
    let p = Profunctor::new(target.source.clone(), target.target.clone(), sets, left, right)?;
    let projection = ProTransformation::new(target.clone(), p.clone(), labels)?;
    Ok(Coequalizer { profunctor: p, projection })
}

/// `N ∘ α : N ∘ M ⇒ N ∘ M′`.
pub fn whisker_left(n: &Profunctor, alpha: &ProTransformation) -> Result<ProTransformation, ProfunctorError> {
    let src = Coend::new(n, &alpha.source)?;
    let dst = Coend::new(n, &alpha.target)?;
    map_coend(&src, &dst, |_, _, x| x, |d, c, y| alpha.apply(d, c, y))
}

/// `α ∘ M : N ∘ M ⇒ N′ ∘ M`.
pub fn whisker_right(alpha: &ProTransformation, m: &Profunctor) -> Result<ProTransformation, ProfunctorError> {
    let src = Coend::new(&alpha.source, m)?;
    let dst = Coend::new(&alpha.target, m)?;
    map_coend(&src, &dst, |e, d, x| alpha.apply(e, d, x), |_, _, y| y)
}

fn verdict(report: &mut Report, what: &str, t: Result<ProTransformation, ProfunctorError>) {
    match t {
        Ok(t) => report.require(t.is_natural_iso(), || format!("{what}: comparison map is not bijective")),
        Err(e) => report.fail(format!("{what}: {e}")),
    }
}

/// Unitors for `m` and the associator for `p∘n∘m` are natural bijections.
pub fn check_monoid_laws(p: &Profunctor, n: &Profunctor, m: &Profunctor) -> Report {
    let mut report = Report::new("monoid-laws");
    verdict(&mut report, "left unitor", left_unitor(m));
    verdict(&mut report, "right unitor", right_unitor(m));
    verdict(&mut report, "associator", associator(p, n, m));
    report
}

/// `N∘M₁ ⊔ N∘M₂ → N∘(M₁ ⊔ M₂)` must be a natural bijection.
pub fn check_cocontinuity(n: &Profunctor, m1: &Profunctor, m2: &Profunctor) -> Report {
    let mut report = Report::new("cocontinuity/coproduct/right");
    let result = (|| {
        let c1 = Coend::new(n, m1)?;
        let c2 = Coend::new(n, m2)?;
        let sum = coproduct(c1.profunctor(), c2.profunctor())?;
        let inner = coproduct(m1, m2)?;
        let whole = Coend::new(n, &inner.profunctor)?;
        let p = &sum.profunctor;
        let (ne, nc) = (p.target.object_count(), p.source.object_count());
        let mut components = Vec::new();
        for e in 0..ne {
            for c in 0..nc {
                let mut comp = Vec::new();
                for id in p.elements(e, c) {
                    let (tag, i) = locate_tagged(&sum, id);
                    let (coend, inj) = if tag { (&c1, &inner.inl) } else { (&c2, &inner.inr) };
                    let (d, x, y) = coend.representative(e, c, i);
                    comp.push(whole.class(e, c, (d, x, inj.apply(d, c, y))));
                }
                components.push(comp);
            }
        }
        ProTransformation::new(p.clone(), whole.profunctor().clone(), components)
    })();
    verdict(&mut report, "right variable", result);
    report
}

/// `N₁∘M ⊔ N₂∘M → (N₁ ⊔ N₂)∘M` must be a natural bijection.
pub fn check_cocontinuity_left(n1: &Profunctor, n2: &Profunctor, m: &Profunctor) -> Report {
    let mut report = Report::new("cocontinuity/coproduct/left");
    let result = (|| {
        let c1 = Coend::new(n1, m)?;
        let c2 = Coend::new(n2, m)?;
        let sum = coproduct(c1.profunctor(), c2.profunctor())?;
        let outer = coproduct(n1, n2)?;
        let whole = Coend::new(&outer.profunctor, m)?;
        let p = &sum.profunctor;
        let (ne, nc) = (p.target.object_count(), p.source.object_count());
        let mut components = Vec::new();
        for e in 0..ne {
            for c in 0..nc {
                let mut comp = Vec::new();
                for id in p.elements(e, c) {
                    let (tag, i) = locate_tagged(&sum, id);
                    let (coend, inj) = if tag { (&c1, &outer.inl) } else { (&c2, &outer.inr) };
                    let (d, x, y) = coend.representative(e, c, i);
                    comp.push(whole.class(e, c, (d, inj.apply(e, d, x), y)));
                }
                components.push(comp);
            }
        }
        ProTransformation::new(p.clone(), whole.profunctor().clone(), components)
    })();
    verdict(&mut report, "left variable", result);
    report
}

// element of a coproduct: which summand, and its index there
fn locate_tagged(sum: &Coproduct, id: &str) -> (bool, usize) {
    let (_, _, j) = sum.profunctor.locate(id).expect("element of the coproduct");
    for (tag, inj) in [(true, &sum.inl), (false, &sum.inr)] {
        for (k, comp) in inj.components.iter().enumerate() {
            if let Some(i) = comp.iter().position(|&x| x == j && inj.target.sets[k][x] == id) {
                return (tag, i);
            }
        }
    }
    unreachable!("element of a coproduct comes from a summand")
}

/// `coeq(N∘α, N∘β) → N∘coeq(α, β)` must be a natural bijection.
pub fn check_coequalizer_right(n: &Profunctor, alpha: &ProTransformation, beta: &ProTransformation) -> Report {
    let mut report = Report::new("cocontinuity/coequalizer/right");
    let result = (|| {
        let na = whisker_left(n, alpha)?;
        let nb = whisker_left(n, beta)?;
        let outer = coequalizer(&na, &nb)?;
        let inner = coequalizer(alpha, beta)?;
        let over = Coend::new(n, &alpha.target)?;
        let whole = Coend::new(n, &inner.profunctor)?;
        descend(&outer, &over, &whole, |_, _, x| x, |d, c, y| inner.projection.apply(d, c, y))
    })();
    verdict(&mut report, "right variable", result);
    report
}

/// `coeq(α∘M, β∘M) → coeq(α, β)∘M` must be a natural bijection.
pub fn check_coequalizer_left(alpha: &ProTransformation, beta: &ProTransformation, m: &Profunctor) -> Report {
    let mut report = Report::new("cocontinuity/coequalizer/left");
    let result = (|| {
        let am = whisker_right(alpha, m)?;
        let bm = whisker_right(beta, m)?;
        let outer = coequalizer(&am, &bm)?;
        let inner = coequalizer(alpha, beta)?;
        let over = Coend::new(&alpha.target, m)?;
        let whole = Coend::new(&inner.profunctor, m)?;
        descend(&outer, &over, &whole, |e, d, x| inner.projection.apply(e, d, x), |_, _, y| y)
    })();
    verdict(&mut report, "left variable", result);
    report
}

// The map out of a coequalizer of coend composites, defined on a chosen
// preimage in the composite `over` of each class.
fn descend(
    outer: &Coequalizer,
    over: &Coend,
    whole: &Coend,
    fn_n: impl Fn(usize, usize, usize) -> usize,
    fn_m: impl Fn(usize, usize, usize) -> usize,
) -> Result<ProTransformation, ProfunctorError> {
    let q = &outer.profunctor;
    let (ne, nc) = (q.target.object_count(), q.source.object_count());
    let mut components = Vec::new();
    for e in 0..ne {
        for c in 0..nc {
            let mut comp = vec![usize::MAX; q.set_size(e, c)];
            for j in 0..over.profunctor().set_size(e, c) {
                let cls = outer.projection.apply(e, c, j);
                let (d, x, y) = over.representative(e, c, j);
                let image = whole.class(e, c, (d, fn_n(e, d, x), fn_m(d, c, y)));
                if comp[cls] != usize::MAX && comp[cls] != image {
                    return Err(ProfunctorError::IllDefinedAction { morphism: "comparison".into() });
                }
                comp[cls] = image;
            }
            components.push(comp);
        }
    }
    ProTransformation::new(q.clone(), whole.profunctor().clone(), components)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(obs: &[(&str, &[&str])]) -> BTreeMap<String, Vec<String>> {
        obs.iter().map(|(k, v)| (k.to_string(), v.iter().map(|s| s.to_string()).collect())).collect()
    }

    fn action(pairs: &[(&str, &[(&str, &str)])]) -> BTreeMap<String, BTreeMap<String, String>> {
        pairs
            .iter()
            .map(|(m, map)| (m.to_string(), map.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()))
            .collect()
    }

    /// `Δ¹ ⇸ 𝟙` with `x₁·u = x₀`, and `𝟙 ⇸ Δ¹` with `u·y₀ = y₁`.
    pub(crate) fn gluing_pair() -> (Profunctor, Profunctor) {
        let one = Arc::new(FinCategory::terminal());
        let arrow = Arc::new(FinCategory::interval());
        let contra = Profunctor::from_named_parts(
            arrow.clone(),
            one.clone(),
            &named(&[("(*,0)", &["x0"]), ("(*,1)", &["x1"])]),
            &BTreeMap::new(),
            &action(&[("u", &[("x1", "x0")])]),
        )
        .unwrap();
        let co = Profunctor::from_named_parts(
            one,
            arrow,
            &named(&[("(0,*)", &["y0"]), ("(1,*)", &["y1"])]),
            &action(&[("u", &[("y0", "y1")])]),
            &BTreeMap::new(),
        )
        .unwrap();
        (contra, co)
    }

    #[test]
    fn hom_profunctor_shapes() {
        let one = Arc::new(FinCategory::terminal());
        assert_eq!(hom_profunctor(&one).total_elements(), 1);
        let d2 = Arc::new(FinCategory::discrete(2));
        let h = hom_profunctor(&d2);
        assert_eq!((h.set_size(0, 0), h.set_size(0, 1), h.set_size(1, 0), h.set_size(1, 1)), (1, 0, 0, 1));
        let arrow = Arc::new(FinCategory::interval());
        let h = hom_profunctor(&arrow);
        // elements(c', c) = Hom(c, c')
        assert_eq!((h.set_size(0, 0), h.set_size(1, 0), h.set_size(1, 1), h.set_size(0, 1)), (1, 1, 1, 0));
    }

    #[test]
    fn from_functor_examples() {
        let one = Arc::new(FinCategory::terminal());
        let arrow = Arc::new(FinCategory::interval());
        let at0 = from_functor(&CatFunctor::constant(one.clone(), arrow.clone(), 0)).unwrap();
        assert_eq!((at0.set_size(0, 0), at0.set_size(1, 0)), (1, 1));
        let at1 = from_functor(&CatFunctor::constant(one, arrow.clone(), 1)).unwrap();
        assert_eq!((at1.set_size(0, 0), at1.set_size(1, 0)), (0, 1));
        let id = from_functor(&CatFunctor::identity(arrow.clone())).unwrap();
        let hom = hom_profunctor(&arrow);
        let map = id.locate.keys().map(|k| (k.clone(), k.split_once(',').unwrap().1.trim_end_matches(')').to_string())).collect();
        assert!(ProTransformation::from_named(id, hom, &map).unwrap().is_natural_iso());
    }

    #[test]
    fn gluing_example_has_one_element() {
        let (contra, co) = gluing_pair();
        let composite = compose_profunctors(&contra, &co).unwrap();
        assert_eq!(composite.total_elements(), 1);
        assert_eq!(composite.elements(0, 0), &["(x0,y0)".to_string()]);
    }

    #[test]
    fn composing_with_empty_is_empty() {
        let arrow = Arc::new(FinCategory::interval());
        let hom = hom_profunctor(&arrow);
        let empty = Profunctor::empty(arrow.clone(), arrow.clone());
        assert!(compose_profunctors(&hom, &empty).unwrap().is_empty());
        assert!(compose_profunctors(&empty, &hom).unwrap().is_empty());
    }

    #[test]
    fn composition_mismatch_is_reported() {
        let arrow = Arc::new(FinCategory::interval());
        let d2 = Arc::new(FinCategory::discrete(2));
        let a = hom_profunctor(&arrow);
        let b = hom_profunctor(&d2);
        assert!(matches!(compose_profunctors(&a, &b), Err(ProfunctorError::CompositionMismatch(_))));
    }

    #[test]
    fn unitors_and_associator_on_small_cases() {
        let one = Arc::new(FinCategory::terminal());
        let h1 = hom_profunctor(&one);
        let u = left_unitor(&h1).unwrap();
        assert!(u.is_natural_iso());
        assert_eq!(u.source().total_elements(), 1);
        let arrow = Arc::new(FinCategory::interval());
        let h = hom_profunctor(&arrow);
        let a = associator(&h, &h, &h).unwrap();
        assert!(a.is_natural_iso());
        assert_eq!(a.source().total_elements(), 3);
        assert!(right_unitor(&h).unwrap().is_natural_iso());
    }

    #[test]
    fn coequalizer_examples() {
        let one = Arc::new(FinCategory::terminal());
        let src = Profunctor::from_named_parts(one.clone(), one.clone(), &named(&[("(*,*)", &["a", "b"])]), &BTreeMap::new(), &BTreeMap::new()).unwrap();
        let tgt = Profunctor::from_named_parts(one.clone(), one.clone(), &named(&[("(*,*)", &["x", "y", "z"])]), &BTreeMap::new(), &BTreeMap::new()).unwrap();
        let m = |pairs: &[(&str, &str)]| pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<HashMap<_, _>>();
        let alpha = ProTransformation::from_named(src.clone(), tgt.clone(), &m(&[("a", "x"), ("b", "y")])).unwrap();
        let beta = ProTransformation::from_named(src.clone(), tgt.clone(), &m(&[("a", "y"), ("b", "z")])).unwrap();
        let q = coequalizer(&alpha, &beta).unwrap();
        assert_eq!(q.profunctor.elements(0, 0), &["x".to_string()]);
        let refl = coequalizer(&alpha, &alpha).unwrap();
        assert_eq!(refl.profunctor.total_elements(), 3);
        assert!(refl.projection.is_natural());
    }

    #[test]
    fn coproduct_with_empty_is_iso() {
        let arrow = Arc::new(FinCategory::interval());
        let h = hom_profunctor(&arrow);
        let sum = coproduct(&h, &Profunctor::empty(arrow.clone(), arrow)).unwrap();
        assert!(sum.inl.is_natural_iso());
    }

    #[test]
    fn cocontinuity_with_empty_summand() {
        let arrow = Arc::new(FinCategory::interval());
        let h = hom_profunctor(&arrow);
        let report = check_cocontinuity(&h, &h, &Profunctor::empty(arrow.clone(), arrow.clone()));
        assert!(report.passed, "{report:?}");
        let report = check_cocontinuity_left(&h, &h, &h);
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn is_natural_iso_examples() {
        let arrow = Arc::new(FinCategory::interval());
        let h = hom_profunctor(&arrow);
        assert!(is_natural_iso(&ProTransformation::identity(&h)));
        let one = Arc::new(FinCategory::terminal());
        let empty = Profunctor::empty(one.clone(), one.clone());
        let single = hom_profunctor(&one);
        let t = ProTransformation::new(empty, single, vec![vec![]]).unwrap();
        assert!(!t.is_natural_iso());
    }

    #[test]
    fn corrupted_action_is_rejected() {
        let one = Arc::new(FinCategory::terminal());
        let arrow = Arc::new(FinCategory::interval());
        // u must send y0 somewhere in (1,*), not back into (0,*)
        let bad = Profunctor::from_named_parts(
            one,
            arrow,
            &named(&[("(0,*)", &["y0"]), ("(1,*)", &["y1"])]),
            &action(&[("u", &[("y0", "y0")])]),
            &BTreeMap::new(),
        );
        assert!(matches!(bad, Err(ProfunctorError::ActionOutOfSet { .. })));
    }

    #[test]
    fn doc_round_trip() {
        let (contra, co) = gluing_pair();
        for p in [contra, co] {
            let doc = p.to_doc(true);
            let text = serde_json::to_string(&doc).unwrap();
            let back: ProfunctorDoc = serde_json::from_str(&text).unwrap();
            assert_eq!(Profunctor::from_doc(&back, &crate::fincat::NoCategories).unwrap(), p);
        }
    }

    #[test]
    fn opposite_is_involutive_on_docs() {
        let (contra, _) = gluing_pair();
        assert_eq!(contra.opposite().opposite(), contra);
    }
}
