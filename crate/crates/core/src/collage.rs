//! Collages of profunctors, Grothendieck constructions of strict diagrams,
//! and the block calculus of profunctors into and out of them.
//!
//! Total objects are named `"(s,x)"` and total morphisms `"(γ,(x,h))"` for
//! `γ: s → t` in the shape and `h: γ_* x → y` in the fiber over `t`. A
//! profunctor collage uses the shape `0 → 1` with cross morphisms named
//! `"(u,p)"`; together with the `"(c,h)"` naming of [`from_functor`] this makes
//! the Grothendieck construction over `0 → 1` equal to the collage of the
//! representable profunctor.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{
    opposite, product, CatFunctor, CategoryDoc, CategoryError, CategoryRef, CategoryResolver, FinCategory,
    FunctorDoc, FunctorError, Morphism,
};
use crate::ids::{pair, split_pair};
use crate::profunctor::{
    compose_profunctors, from_functor, hom_profunctor, Coend, ProTransformation, Profunctor, ProfunctorError,
};
use crate::quotient::Quotient;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollageError {
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("not a collage: {0}")]
    NotACollage(String),
    #[error("collage is not over the walking arrow")]
    NotOverInterval,
    #[error("incompatible action data: {0}")]
    IncompatibleActionData(String),
    #[error("composition mismatch: {0}")]
    CompositionMismatch(String),
    #[error(transparent)]
    Profunctor(#[from] ProfunctorError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// A strict functor from a finite shape into finite categories.
#[derive(Clone, Debug)]
pub struct Diagram {
    shape: Arc<FinCategory>,
    fibers: Vec<Arc<FinCategory>>,
    transitions: Vec<CatFunctor>,
}

/// JSON form of a diagram. Transitions of identities may be omitted, as may
/// the source and target of each transition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub shape: CategoryRef,
    pub fibers: BTreeMap<String, CategoryRef>,
    #[serde(default)]
    pub transitions: BTreeMap<String, FunctorDoc>,
}

impl Diagram {
    /// Validates shapes, identities and strict functoriality.
    pub fn new(
        shape: Arc<FinCategory>,
        fibers: Vec<Arc<FinCategory>>,
        transitions: Vec<CatFunctor>,
    ) -> Result<Self, CollageError> {
        let bad = |m: String| Err(CollageError::InvalidDiagram(m));
        if fibers.len() != shape.object_count() {
            return bad("one fiber per shape object is required".into());
        }
        if transitions.len() != shape.morphism_count() {
            return bad("one transition per shape morphism is required".into());
        }
        let mut fixed = Vec::with_capacity(transitions.len());
        for (g, f) in transitions.iter().enumerate() {
            let name = shape.morphism_name(g);
            let (s, t) = (&fibers[shape.src(g)], &fibers[shape.dst(g)]);
            if **f.source() != **s || **f.target() != **t {
                return bad(format!("transition of `{name}` has the wrong source or target"));
            }
            let f = f.reindexed(s.clone(), t.clone())?;
            if let Err(e) = f.ensure_valid() {
                return bad(format!("transition of `{name}`: {e}"));
            }
            fixed.push(f);
        }
        for x in 0..shape.object_count() {
            let id = shape.identity(x);
            if fixed[id] != CatFunctor::identity(fibers[x].clone()) {
                return bad(format!("transition of `{}` is not the identity", shape.morphism_name(id)));
            }
        }
        for (g, f, gf) in shape.composable_pairs() {
            let lhs = &fixed[gf];
            let rhs = fixed[g].after(&fixed[f])?;
            if *lhs != rhs {
                return bad(format!(
                    "transition of `{}` differs from the composite of `{}` and `{}`",
                    shape.morphism_name(gf),
                    shape.morphism_name(g),
                    shape.morphism_name(f)
                ));
            }
        }
        Ok(Diagram { shape, fibers, transitions: fixed })
    }

    /// `A → B` along `F`, over the walking arrow.
    pub fn over_interval(f: &CatFunctor) -> Result<Self, CollageError> {
        let shape = Arc::new(FinCategory::interval());
        let (a, b) = (f.source().clone(), f.target().clone());
        let transitions = vec![CatFunctor::identity(a.clone()), CatFunctor::identity(b.clone()), f.clone()];
        Self::new(shape, vec![a, b], transitions)
    }

    /// Every fiber `fiber`, every transition the identity.
    pub fn constant(shape: Arc<FinCategory>, fiber: Arc<FinCategory>) -> Self {
        let fibers = vec![fiber.clone(); shape.object_count()];
        let transitions = vec![CatFunctor::identity(fiber); shape.morphism_count()];
        Diagram { shape, fibers, transitions }
    }

    /// Fibers `X_s × E`, transitions `F × id_E`.
    pub fn product_with(&self, e: &Arc<FinCategory>) -> Diagram {
        let fibers: Vec<_> = self.fibers.iter().map(|x| Arc::new(product(x, e))).collect();
        let id = CatFunctor::identity(e.clone());
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(g, f)| {
                let (s, t) = (self.shape.src(g), self.shape.dst(g));
                CatFunctor::product_between(f, &id, fibers[s].clone(), fibers[t].clone())
            })
            .collect();
        Diagram { shape: self.shape.clone(), fibers, transitions }
    }

    /// Fiberwise opposite over the same shape.
    pub fn opposite(&self) -> Diagram {
        let fibers: Vec<_> = self.fibers.iter().map(|x| Arc::new(opposite(x))).collect();
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(g, f)| {
                let (s, t) = (self.shape.src(g), self.shape.dst(g));
                let obmap = (0..f.source().object_count()).map(|x| f.map_object(x)).collect();
                let mormap = (0..f.source().morphism_count()).map(|m| f.map_morphism(m)).collect();
                CatFunctor::from_maps(fibers[s].clone(), fibers[t].clone(), obmap, mormap).expect("same shape")
            })
            .collect();
        Diagram { shape: self.shape.clone(), fibers, transitions }
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn fibers(&self) -> &[Arc<FinCategory>] {
        &self.fibers
    }

    pub fn fiber(&self, s: usize) -> &Arc<FinCategory> {
        &self.fibers[s]
    }

    pub fn transition(&self, g: usize) -> &CatFunctor {
        &self.transitions[g]
    }

    pub fn from_doc(doc: &DiagramDoc, resolver: &dyn CategoryResolver) -> Result<Self, CollageError> {
        let shape = doc.shape.resolve(resolver)?;
        for key in doc.fibers.keys() {
            if shape.object_index(key).is_none() {
                return Err(CollageError::InvalidDiagram(format!("fiber over unknown object `{key}`")));
            }
        }
        for key in doc.transitions.keys() {
            if shape.morphism_index(key).is_none() {
                return Err(CollageError::InvalidDiagram(format!("transition of unknown morphism `{key}`")));
            }
        }
        let fibers = shape
            .objects()
            .iter()
            .map(|s| match doc.fibers.get(s) {
                Some(r) => Ok(r.resolve(resolver)?),
                None => Err(CollageError::InvalidDiagram(format!("no fiber over `{s}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut transitions = Vec::with_capacity(shape.morphism_count());
        for (g, m) in shape.morphisms().iter().enumerate() {
            let (s, t) = (&fibers[m.src], &fibers[m.dst]);
            match doc.transitions.get(&m.id) {
                Some(fd) => {
                    let side = |r: &Option<CategoryRef>, default: &Arc<FinCategory>| match r {
                        Some(r) => r.resolve(resolver).map_err(CollageError::from),
                        None => Ok(default.clone()),
                    };
                    let (src, dst) = (side(&fd.source, s)?, side(&fd.target, t)?);
                    transitions.push(CatFunctor::from_named(src, dst, &fd.obmap, &fd.mormap)?);
                }
                None if shape.is_identity(g) => transitions.push(CatFunctor::identity(s.clone())),
                None => return Err(CollageError::InvalidDiagram(format!("no transition for `{}`", m.id))),
            }
        }
        Self::new(shape, fibers, transitions)
    }

    pub fn to_doc(&self) -> DiagramDoc {
        let fibers = self
            .shape
            .objects()
            .iter()
            .zip(&self.fibers)
            .map(|(s, x)| (s.clone(), CategoryRef::Inline(Box::new(x.to_doc()))))
            .collect();
        let transitions = self
            .shape
            .morphisms()
            .iter()
            .zip(&self.transitions)
            .enumerate()
            .filter(|(g, _)| !self.shape.is_identity(*g))
            .map(|(_, (m, f))| (m.id.clone(), f.to_doc(false)))
            .collect();
        DiagramDoc { shape: CategoryRef::Inline(Box::new(self.shape.to_doc())), fibers, transitions }
    }
}

/// How a total morphism sits over the shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    /// Lies in the fiber over `fiber`.
    Fiber { fiber: usize, morphism: usize },
    /// Equals `after ∘ generator`, with `after` in the target fiber.
    Cross { generator: usize, after: usize },
}

#[derive(Clone, Debug)]
pub enum CollageOrigin {
    Category,
    Profunctor(Profunctor),
    Diagram(Diagram),
}

/// A total category glued from fibers over a shape.
#[derive(Clone, Debug)]
pub struct Collage {
    total: Arc<FinCategory>,
    shape: Arc<FinCategory>,
    fibers: Vec<Arc<FinCategory>>,
    injections: Vec<CatFunctor>,
    object_fiber: Vec<(usize, usize)>,
    fiber_objects: Vec<Vec<usize>>,
    fiber_morphisms: Vec<Vec<usize>>,
    kinds: Vec<MorphismKind>,
    over: Vec<usize>,
    generators: Vec<usize>,
    // (γ, x, h) of every total morphism, Grothendieck origin only
    parts: Vec<(usize, usize, usize)>,
    part_index: HashMap<(usize, usize, usize), usize>,
    origin: CollageOrigin,
}

/// JSON form of a collage: the total category plus the fiber layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollageDoc {
    pub total: CategoryDoc,
    pub origin: OriginDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginDoc {
    pub kind: String,
    pub shape: CategoryDoc,
    pub fibers: BTreeMap<String, Vec<String>>,
    pub generators: Vec<String>,
}

impl Collage {
    /// A plain category seen as a collage with a single fiber over `𝟙`.
    pub fn of_category(c: Arc<FinCategory>) -> Self {
        let (n, m) = (c.object_count(), c.morphism_count());
        Collage {
            total: c.clone(),
            shape: Arc::new(FinCategory::terminal()),
            fibers: vec![c.clone()],
            injections: vec![CatFunctor::identity(c)],
            object_fiber: (0..n).map(|x| (0, x)).collect(),
            fiber_objects: vec![(0..n).collect()],
            fiber_morphisms: vec![(0..m).collect()],
            kinds: (0..m).map(|f| MorphismKind::Fiber { fiber: 0, morphism: f }).collect(),
            over: vec![0; m],
            generators: Vec::new(),
            parts: Vec::new(),
            part_index: HashMap::new(),
            origin: CollageOrigin::Category,
        }
    }

    pub fn total(&self) -> &Arc<FinCategory> {
        &self.total
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn fibers(&self) -> &[Arc<FinCategory>] {
        &self.fibers
    }

    pub fn injection(&self, s: usize) -> &CatFunctor {
        &self.injections[s]
    }

    pub fn origin(&self) -> &CollageOrigin {
        &self.origin
    }

    /// `(s, x)` of a total object.
    pub fn object_fiber(&self, o: usize) -> (usize, usize) {
        self.object_fiber[o]
    }

    /// Total index of object `x` of fiber `s`.
    pub fn fiber_object(&self, s: usize, x: usize) -> usize {
        self.fiber_objects[s][x]
    }

    /// Total index of morphism `f` of fiber `s`.
    pub fn fiber_morphism(&self, s: usize, f: usize) -> usize {
        self.fiber_morphisms[s][f]
    }

    pub fn kind(&self, m: usize) -> MorphismKind {
        self.kinds[m]
    }

    /// The shape morphism under a total morphism.
    pub fn over(&self, m: usize) -> usize {
        self.over[m]
    }

    /// Cross morphisms generating the total together with the fibers.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// For a shape `0 → 1`: the fibers `(a, b)` and the arrow.
    pub fn interval_parts(&self) -> Option<(usize, usize, usize)> {
        let s = &self.shape;
        if s.object_count() != 2 || s.morphism_count() != 3 {
            return None;
        }
        let u = (0..3).find(|&m| !s.is_identity(m))?;
        Some((s.src(u), s.dst(u), u))
    }

    /// The profunctor glued along: `P` itself, or `D(F−, −)` for a diagram.
    pub fn glued_profunctor(&self) -> Result<Profunctor, CollageError> {
        let (_, _, u) = self.interval_parts().ok_or(CollageError::NotOverInterval)?;
        match &self.origin {
            CollageOrigin::Profunctor(p) => Ok(p.clone()),
            CollageOrigin::Diagram(d) => Ok(from_functor(d.transition(u))?),
            CollageOrigin::Category => Err(CollageError::NotOverInterval),
        }
    }

    pub fn to_doc(&self) -> CollageDoc {
        let kind = match self.origin {
            CollageOrigin::Category => "category",
            CollageOrigin::Profunctor(_) => "profunctor",
            CollageOrigin::Diagram(_) => "diagram",
        };
        let fibers = self
            .shape
            .objects()
            .iter()
            .enumerate()
            .map(|(s, name)| {
                let obs = self.fiber_objects[s].iter().map(|&o| self.total.object_name(o).to_string()).collect();
                (name.clone(), obs)
            })
            .collect();
        let generators = self.generators.iter().map(|&g| self.total.morphism_name(g).to_string()).collect();
        CollageDoc {
            total: self.total.to_doc(),
            origin: OriginDoc { kind: kind.into(), shape: self.shape.to_doc(), fibers, generators },
        }
    }
}

fn injections(total: &Arc<FinCategory>, fiber_objects: &[Vec<usize>], fiber_morphisms: &[Vec<usize>], fibers: &[Arc<FinCategory>]) -> Vec<CatFunctor> {
    fibers
        .iter()
        .enumerate()
        .map(|(s, x)| {
            CatFunctor::from_maps(x.clone(), total.clone(), fiber_objects[s].clone(), fiber_morphisms[s].clone())
                .expect("injection")
        })
        .collect()
}

/// The Grothendieck construction of a strict diagram.
pub fn grothendieck(x: &Diagram) -> Collage {
    let shape = &x.shape;
    let mut objects = Vec::new();
    let mut fiber_objects = Vec::with_capacity(x.fibers.len());
    let mut object_fiber = Vec::new();
    for (s, fib) in x.fibers.iter().enumerate() {
        let mut ids = Vec::with_capacity(fib.object_count());
        for xi in 0..fib.object_count() {
            ids.push(objects.len());
            object_fiber.push((s, xi));
            objects.push(pair(shape.object_name(s), fib.object_name(xi)));
        }
        fiber_objects.push(ids);
    }
    let mut morphisms = Vec::new();
    let mut parts = Vec::new();
    let mut part_index = HashMap::new();
    for g in 0..shape.morphism_count() {
        let (s, t) = (shape.src(g), shape.dst(g));
        let (xs, xt, f) = (&x.fibers[s], &x.fibers[t], &x.transitions[g]);
        for xi in 0..xs.object_count() {
            let image = f.map_object(xi);
            for h in (0..xt.morphism_count()).filter(|&h| xt.src(h) == image) {
                part_index.insert((g, xi, h), morphisms.len());
                parts.push((g, xi, h));
                morphisms.push(Morphism {
                    id: pair(shape.morphism_name(g), &pair(xs.object_name(xi), xt.morphism_name(h))),
                    src: fiber_objects[s][xi],
                    dst: fiber_objects[t][xt.dst(h)],
                });
            }
        }
    }
    let identities = object_fiber
        .iter()
        .map(|&(s, xi)| part_index[&(shape.identity(s), xi, x.fibers[s].identity(xi))])
        .collect();
    let total = FinCategory::from_rule(objects, morphisms, identities, |second, first| {
        let (g, xi, h) = parts[first];
        let (d, _, k) = parts[second];
        let t = shape.dst(d);
        let pushed = x.transitions[d].map_morphism(h);
        let composite = x.fibers[t].compose(k, pushed).expect("composable in fiber");
        part_index[&(shape.compose(d, g).expect("composable in shape"), xi, composite)]
    })
    .expect("Grothendieck construction of a valid diagram");
    let total = Arc::new(total);

    let mut kinds = Vec::with_capacity(parts.len());
    let mut generators = Vec::new();
    for (m, &(g, xi, h)) in parts.iter().enumerate() {
        let t = shape.dst(g);
        if shape.is_identity(g) {
            kinds.push(MorphismKind::Fiber { fiber: t, morphism: h });
        } else {
            let gen = part_index[&(g, xi, x.fibers[t].identity(x.transitions[g].map_object(xi)))];
            if gen == m {
                generators.push(m);
            }
            kinds.push(MorphismKind::Cross { generator: gen, after: h });
        }
    }
    let fiber_morphisms: Vec<Vec<usize>> = x
        .fibers
        .iter()
        .enumerate()
        .map(|(s, fib)| {
            let id = shape.identity(s);
            (0..fib.morphism_count()).map(|h| part_index[&(id, fib.src(h), h)]).collect()
        })
        .collect();
    Collage {
        injections: injections(&total, &fiber_objects, &fiber_morphisms, &x.fibers),
        over: parts.iter().map(|p| p.0).collect(),
        total,
        shape: shape.clone(),
        fibers: x.fibers.clone(),
        object_fiber,
        fiber_objects,
        fiber_morphisms,
        kinds,
        generators,
        parts,
        part_index,
        origin: CollageOrigin::Diagram(x.clone()),
    }
}

/// The collage `A ⊞_P B` of `P: A ⇸ B`: `Hom((0,a),(1,b)) = P(b,a)`, nothing
/// from the `B`-part back to the `A`-part.
pub fn collage_of_profunctor(p: &Profunctor) -> Collage {
    let shape = Arc::new(FinCategory::interval());
    let (a, b) = (p.source().clone(), p.target().clone());
    let (na, nb) = (a.object_count(), b.object_count());
    let (ma, mb) = (a.morphism_count(), b.morphism_count());
    let u = shape.morphism_index("u").expect("interval arrow");

    let mut objects = Vec::with_capacity(na + nb);
    objects.extend(a.objects().iter().map(|x| pair("0", x)));
    objects.extend(b.objects().iter().map(|y| pair("1", y)));
    let mut morphisms = Vec::new();
    for f in a.morphisms() {
        morphisms.push(Morphism { id: pair("id_0", &pair(&a.objects()[f.src], &f.id)), src: f.src, dst: f.dst });
    }
    for g in b.morphisms() {
        morphisms.push(Morphism { id: pair("id_1", &pair(&b.objects()[g.src], &g.id)), src: na + g.src, dst: na + g.dst });
    }
    // cross[(y * na + x)] = offset of P(y, x)
    let mut cross = vec![0; nb * na];
    let mut cross_of = Vec::new();
    for x in 0..na {
        for y in 0..nb {
            cross[y * na + x] = morphisms.len();
            for (i, e) in p.elements(y, x).iter().enumerate() {
                cross_of.push((y, x, i));
                morphisms.push(Morphism { id: pair("u", e), src: x, dst: na + y });
            }
        }
    }
    let identities = (0..na).map(|x| a.identity(x)).chain((0..nb).map(|y| ma + b.identity(y))).collect();
    let base = ma + mb;
    let locate = |m: usize| -> (u8, usize) {
        if m < ma {
            (0, m)
        } else if m < base {
            (1, m - ma)
        } else {
            (2, m - base)
        }
    };
    let total = FinCategory::from_rule(objects, morphisms, identities, |g, f| match (locate(g), locate(f)) {
        ((0, g), (0, f)) => a.compose(g, f).expect("composable"),
        ((1, g), (1, f)) => ma + b.compose(g, f).expect("composable"),
        ((1, g), (2, k)) => {
            let (_, x, i) = cross_of[k];
            cross[b.dst(g) * na + x] + p.left_act(g, x, i)
        }
        ((2, k), (0, f)) => {
            let (y, _, i) = cross_of[k];
            cross[y * na + a.src(f)] + p.right_act(f, y, i)
        }
        _ => unreachable!("composable pairs never leave the B-part"),
    })
    .expect("collage of a valid profunctor");
    let total = Arc::new(total);

    let mut kinds = Vec::with_capacity(total.morphism_count());
    let mut over = Vec::with_capacity(total.morphism_count());
    for m in 0..total.morphism_count() {
        match locate(m) {
            (0, f) => {
                kinds.push(MorphismKind::Fiber { fiber: 0, morphism: f });
                over.push(shape.identity(0));
            }
            (1, g) => {
                kinds.push(MorphismKind::Fiber { fiber: 1, morphism: g });
                over.push(shape.identity(1));
            }
            _ => {
                kinds.push(MorphismKind::Cross { generator: m, after: b.identity(total.dst(m) - na) });
                over.push(u);
            }
        }
    }
    let fiber_objects = vec![(0..na).collect(), (na..na + nb).collect()];
    let fiber_morphisms = vec![(0..ma).collect(), (ma..base).collect()];
    let fibers = vec![a, b];
    Collage {
        injections: injections(&total, &fiber_objects, &fiber_morphisms, &fibers),
        generators: (base..total.morphism_count()).collect(),
        object_fiber: (0..na).map(|x| (0, x)).chain((0..nb).map(|y| (1, y))).collect(),
        total,
        shape,
        fibers,
        fiber_objects,
        fiber_morphisms,
        kinds,
        over,
        parts: Vec::new(),
        part_index: HashMap::new(),
        origin: CollageOrigin::Profunctor(p.clone()),
    }
}

/// The oplax Grothendieck construction, `(∫ X^op)^op`: a morphism
/// `(t,y) → (s,x)` is a `γ: s → t` with `h: y → γ_* x`.
pub fn oplax_grothendieck(x: &Diagram) -> FinCategory {
    opposite(grothendieck(&x.opposite()).total())
}

/// Full faithfulness of the injections, no morphisms from the later fiber
/// back to the earlier one, and cross homs matching the glued profunctor.
pub fn check_semiorthogonal(g: &Collage) -> Report {
    let mut report = Report::new("semiorthogonal");
    let Some((a, b, u)) = g.interval_parts() else {
        report.fail("collage is not over the walking arrow");
        return report;
    };
    let total = &g.total;
    for (s, fiber) in g.fibers.iter().enumerate() {
        let inj = &g.injections[s];
        report.require(inj.is_functor(), || format!("injection of fiber {s} is not a functor"));
        for x in 0..fiber.object_count() {
            for y in 0..fiber.object_count() {
                let mut image: Vec<usize> = fiber.hom(x, y).iter().map(|&f| inj.map_morphism(f)).collect();
                image.sort_unstable();
                let mut expected = total.hom(inj.map_object(x), inj.map_object(y)).to_vec();
                expected.sort_unstable();
                report.require(image == expected, || {
                    format!(
                        "injection of fiber {s} is not bijective on Hom({}, {})",
                        fiber.object_name(x),
                        fiber.object_name(y)
                    )
                });
            }
        }
    }
    for &yb in &g.fiber_objects[b] {
        for &xa in &g.fiber_objects[a] {
            report.require(total.hom(yb, xa).is_empty(), || {
                format!("backwards morphism from {} to {}", total.object_name(yb), total.object_name(xa))
            });
        }
    }
    match g.glued_profunctor() {
        Ok(p) => {
            let uname = g.shape.morphism_name(u);
            for (x, &xa) in g.fiber_objects[a].iter().enumerate() {
                for (y, &yb) in g.fiber_objects[b].iter().enumerate() {
                    let mut got: Vec<&str> = total.hom(xa, yb).iter().map(|&m| total.morphism_name(m)).collect();
                    got.sort_unstable();
                    let mut want: Vec<String> = p.elements(y, x).iter().map(|e| pair(uname, e)).collect();
                    want.sort_unstable();
                    report.require(got == want, || {
                        format!("Hom({}, {}) differs from the glued elements", total.object_name(xa), total.object_name(yb))
                    });
                }
            }
        }
        Err(e) => report.fail(e.to_string()),
    }
    report
}

/// A profunctor between two collages, viewed blockwise.
///
/// `entries[t][s]` is the restriction to fibers `X_s ⇸ Y_t`. Transition data
/// record the action of each cross generator, keyed by element identifier:
/// right transitions along generators of the source collage, left
/// transitions along generators of the target collage.
#[derive(Clone, Debug)]
pub struct LaxMatrix {
    source: Arc<Collage>,
    target: Arc<Collage>,
    entries: Vec<Vec<Profunctor>>,
    right_transitions: BTreeMap<String, BTreeMap<String, String>>,
    left_transitions: BTreeMap<String, BTreeMap<String, String>>,
}

impl PartialEq for LaxMatrix {
    fn eq(&self, other: &Self) -> bool {
        *self.source.total == *other.source.total
            && *self.target.total == *other.target.total
            && self.entries == other.entries
            && self.right_transitions == other.right_transitions
            && self.left_transitions == other.left_transitions
    }
}

/// JSON form of one block: elements keyed `"(y,x)"` and fiber actions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub elements: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub left_action: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub right_action: BTreeMap<String, BTreeMap<String, String>>,
}

/// JSON form of a lax matrix; blocks keyed `"(t,s)"` by shape objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaxMatrixDoc {
    pub entries: BTreeMap<String, EntryDoc>,
    #[serde(default)]
    pub left_transitions: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub right_transitions: BTreeMap<String, BTreeMap<String, String>>,
}

impl LaxMatrix {
    /// Validates that the data assemble into a profunctor whose restriction
    /// gives back exactly the data.
    pub fn new(
        source: Arc<Collage>,
        target: Arc<Collage>,
        entries: Vec<Vec<Profunctor>>,
        right_transitions: BTreeMap<String, BTreeMap<String, String>>,
        left_transitions: BTreeMap<String, BTreeMap<String, String>>,
    ) -> Result<Self, CollageError> {
        if entries.len() != target.fibers.len() || entries.iter().any(|row| row.len() != source.fibers.len()) {
            return Err(CollageError::IncompatibleActionData("block shape differs from the fiber counts".into()));
        }
        let mut fixed = Vec::with_capacity(entries.len());
        for (t, row) in entries.into_iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (s, e) in row.into_iter().enumerate() {
                let e = e
                    .reindexed(source.fibers[s].clone(), target.fibers[t].clone())
                    .map_err(|_| CollageError::IncompatibleActionData(format!("block ({t},{s}) is over the wrong fibers")))?;
                out.push(e);
            }
            fixed.push(out);
        }
        let m = LaxMatrix { source, target, entries: fixed, right_transitions, left_transitions };
        let whole = assemble_matrix(&m)?;
        let back = restrict_matrix(&whole, &m.source, &m.target)?;
        if back != m {
            return Err(CollageError::IncompatibleActionData("transition data mention elements outside their blocks".into()));
        }
        Ok(m)
    }

    pub fn source(&self) -> &Arc<Collage> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Collage> {
        &self.target
    }

    /// The block `X_s ⇸ Y_t`.
    pub fn entry(&self, t: usize, s: usize) -> &Profunctor {
        &self.entries[t][s]
    }

    pub fn right_transitions(&self) -> &BTreeMap<String, BTreeMap<String, String>> {
        &self.right_transitions
    }

    pub fn left_transitions(&self) -> &BTreeMap<String, BTreeMap<String, String>> {
        &self.left_transitions
    }

    pub fn to_doc(&self) -> LaxMatrixDoc {
        let (ss, ts) = (&self.source.shape, &self.target.shape);
        let mut entries = BTreeMap::new();
        for (t, row) in self.entries.iter().enumerate() {
            for (s, e) in row.iter().enumerate() {
                let d = e.to_doc(false);
                entries.insert(
                    pair(ts.object_name(t), ss.object_name(s)),
                    EntryDoc { elements: d.elements, left_action: d.left_action, right_action: d.right_action },
                );
            }
        }
        LaxMatrixDoc {
            entries,
            left_transitions: self.left_transitions.clone(),
            right_transitions: self.right_transitions.clone(),
        }
    }

    pub fn from_doc(doc: &LaxMatrixDoc, source: Arc<Collage>, target: Arc<Collage>) -> Result<Self, CollageError> {
        let (ss, ts) = (source.shape.clone(), target.shape.clone());
        for key in doc.entries.keys() {
            if split_pair(key, |t| ts.object_index(t).is_some(), |s| ss.object_index(s).is_some()).is_none() {
                return Err(CollageError::IncompatibleActionData(format!("unknown block `{key}`")));
            }
        }
        let mut entries = Vec::with_capacity(ts.object_count());
        for t in 0..ts.object_count() {
            let mut row = Vec::with_capacity(ss.object_count());
            for s in 0..ss.object_count() {
                let key = pair(ts.object_name(t), ss.object_name(s));
                let (x, y) = (source.fibers[s].clone(), target.fibers[t].clone());
                row.push(match doc.entries.get(&key) {
                    Some(e) => Profunctor::from_named_parts(x, y, &e.elements, &e.left_action, &e.right_action)?,
                    None => Profunctor::empty(x, y),
                });
            }
            entries.push(row);
        }
        Self::new(source, target, entries, doc.right_transitions.clone(), doc.left_transitions.clone())
    }
}

fn same_total(p: &Arc<FinCategory>, c: &Collage, side: &str) -> Result<(), CollageError> {
    if **p != *c.total {
        return Err(CollageError::NotACollage(format!("{side} of the profunctor is not the collage total")));
    }
    Ok(())
}

/// Restricts `m: G ⇸ H` (on totals) to its blocks and transition data.
pub fn restrict_matrix(m: &Profunctor, source: &Arc<Collage>, target: &Arc<Collage>) -> Result<LaxMatrix, CollageError> {
    same_total(m.source(), source, "source")?;
    same_total(m.target(), target, "target")?;
    let m = m.reindexed(source.total.clone(), target.total.clone())?;
    let mut entries = Vec::with_capacity(target.fibers.len());
    for (t, yt) in target.fibers.iter().enumerate() {
        let mut row = Vec::with_capacity(source.fibers.len());
        for (s, xs) in source.fibers.iter().enumerate() {
            let (fo_s, fo_t) = (&source.fiber_objects[s], &target.fiber_objects[t]);
            let sets = (0..yt.object_count())
                .flat_map(|y| (0..xs.object_count()).map(move |x| (y, x)))
                .map(|(y, x)| m.elements(fo_t[y], fo_s[x]).to_vec())
                .collect();
            let e = Profunctor::tabulate(
                xs.clone(),
                yt.clone(),
                sets,
                |k, x, i| m.left_act(target.fiber_morphisms[t][k], fo_s[x], i),
                |f, y, i| m.right_act(source.fiber_morphisms[s][f], fo_t[y], i),
            )?;
            row.push(e);
        }
        entries.push(row);
    }
    let (gt, ht) = (&source.total, &target.total);
    let mut right_transitions = BTreeMap::new();
    for &g in &source.generators {
        let mut map = BTreeMap::new();
        for d in 0..ht.object_count() {
            for (i, &j) in m.right_map(g, d).iter().enumerate() {
                map.insert(m.element(d, gt.dst(g), i).to_string(), m.element(d, gt.src(g), j).to_string());
            }
        }
        right_transitions.insert(gt.morphism_name(g).to_string(), map);
    }
    let mut left_transitions = BTreeMap::new();
    for &g in &target.generators {
        let mut map = BTreeMap::new();
        for c in 0..gt.object_count() {
            for (i, &j) in m.left_map(g, c).iter().enumerate() {
                map.insert(m.element(ht.src(g), c, i).to_string(), m.element(ht.dst(g), c, j).to_string());
            }
        }
        left_transitions.insert(ht.morphism_name(g).to_string(), map);
    }
    Ok(LaxMatrix { source: source.clone(), target: target.clone(), entries, right_transitions, left_transitions })
}

/// Glues blocks and transition data back into a profunctor on the totals.
pub fn assemble_matrix(lm: &LaxMatrix) -> Result<Profunctor, CollageError> {
    let (g, h) = (&lm.source, &lm.target);
    let (gt, ht) = (&g.total, &h.total);
    let nc = gt.object_count();
    let block = |d: usize, c: usize| {
        let ((t, y), (s, x)) = (h.object_fiber[d], g.object_fiber[c]);
        (&lm.entries[t][s], y, x)
    };
    let mut sets = Vec::with_capacity(ht.object_count() * nc);
    for d in 0..ht.object_count() {
        for c in 0..nc {
            let (e, y, x) = block(d, c);
            sets.push(e.elements(y, x).to_vec());
        }
    }
    let incompatible = |what: String| CollageError::IncompatibleActionData(what);
    // index of `id` in block (t, s) at (y, x)
    let find = |t: usize, s: usize, y: usize, x: usize, id: &str| -> Option<usize> {
        match lm.entries[t][s].locate(id) {
            Some((yy, xx, j)) if yy == y && xx == x => Some(j),
            _ => None,
        }
    };

    let mut left = Vec::with_capacity(ht.morphism_count());
    for m in 0..ht.morphism_count() {
        let mut per_c = Vec::with_capacity(nc);
        for c in 0..nc {
            let (s, x) = g.object_fiber[c];
            let (t0, y0) = h.object_fiber[ht.src(m)];
            let map = match h.kinds[m] {
                MorphismKind::Fiber { morphism, .. } => lm.entries[t0][s].left_map(morphism, x).to_vec(),
                MorphismKind::Cross { generator, after } => {
                    let gname = ht.morphism_name(generator);
                    let (t1, ymid) = h.object_fiber[ht.dst(generator)];
                    let table = lm.left_transitions.get(gname);
                    let mut map = Vec::new();
                    for id in lm.entries[t0][s].elements(y0, x) {
                        let img = table
                            .and_then(|tb| tb.get(id))
                            .ok_or_else(|| incompatible(format!("no left transition of `{gname}` on `{id}`")))?;
                        let j = find(t1, s, ymid, x, img)
                            .ok_or_else(|| incompatible(format!("left transition of `{gname}` sends `{id}` outside its block")))?;
                        map.push(lm.entries[t1][s].left_act(after, x, j));
                    }
                    map
                }
            };
            per_c.push(map);
        }
        left.push(per_c);
    }

    let mut right = Vec::with_capacity(gt.morphism_count());
    for m in 0..gt.morphism_count() {
        let mut per_d = Vec::with_capacity(ht.object_count());
        for d in 0..ht.object_count() {
            let (t, y) = h.object_fiber[d];
            let (s1, x1) = g.object_fiber[gt.dst(m)];
            let map = match g.kinds[m] {
                MorphismKind::Fiber { morphism, .. } => lm.entries[t][s1].right_map(morphism, y).to_vec(),
                MorphismKind::Cross { generator, after } => {
                    let gname = gt.morphism_name(generator);
                    let (s0, x0) = g.object_fiber[gt.src(generator)];
                    let table = lm.right_transitions.get(gname);
                    let e1 = &lm.entries[t][s1];
                    let mut map = Vec::new();
                    for i in 0..e1.set_size(y, x1) {
                        let mid = e1.element(y, gt_fiber_src(g, after, s1), e1.right_act(after, y, i));
                        let img = table
                            .and_then(|tb| tb.get(mid))
                            .ok_or_else(|| incompatible(format!("no right transition of `{gname}` on `{mid}`")))?;
                        let j = find(t, s0, y, x0, img)
                            .ok_or_else(|| incompatible(format!("right transition of `{gname}` sends `{mid}` outside its block")))?;
                        map.push(j);
                    }
                    map
                }
            };
            per_d.push(map);
        }
        right.push(per_d);
    }
    Profunctor::new(gt.clone(), ht.clone(), sets, left, right).map_err(|e| incompatible(e.to_string()))
}

// source object (in fiber s) of fiber morphism `f`
fn gt_fiber_src(g: &Collage, f: usize, s: usize) -> usize {
    g.fibers[s].src(f)
}

/// Blocks of `hom(total)`: `[[hom A, 0], [P, hom B]]` for a collage over the
/// walking arrow.
pub fn identity_block_decomposition(g: &Arc<Collage>) -> Result<LaxMatrix, CollageError> {
    restrict_matrix(&hom_profunctor(&g.total), g, g)
}

/// Lower triangularity of the identity blocks, with diagonal blocks the fiber
/// homs and the off-diagonal block the glued profunctor.
pub fn check_identity_blocks(g: &Arc<Collage>) -> Report {
    let mut report = Report::new("identity-blocks");
    let Some((a, b, u)) = g.interval_parts() else {
        report.fail("collage is not over the walking arrow");
        return report;
    };
    let blocks = match identity_block_decomposition(g) {
        Ok(m) => m,
        Err(e) => {
            report.fail(e.to_string());
            return report;
        }
    };
    report.require(blocks.entry(a, b).is_empty(), || "upper-right block is not empty".into());
    let total = &g.total;
    for s in [a, b] {
        let fiber = &g.fibers[s];
        let map = (0..fiber.morphism_count())
            .map(|f| (total.morphism_name(g.fiber_morphisms[s][f]).to_string(), fiber.morphism_name(f).to_string()))
            .collect();
        match ProTransformation::from_named(blocks.entry(s, s).clone(), hom_profunctor(fiber), &map) {
            Ok(t) => report.require(t.is_natural_iso(), || format!("diagonal block {s} is not the fiber hom")),
            Err(e) => report.fail(format!("diagonal block {s}: {e}")),
        }
    }
    match g.glued_profunctor() {
        Ok(p) => {
            let uname = g.shape.morphism_name(u);
            let map = blocks
                .entry(b, a)
                .elements_iter()
                .map(|id| {
                    let inner = id.strip_prefix(&format!("({uname},")).and_then(|r| r.strip_suffix(')')).unwrap_or(id);
                    (id.to_string(), inner.to_string())
                })
                .collect();
            match ProTransformation::from_named(blocks.entry(b, a).clone(), p, &map) {
                Ok(t) => report.require(t.is_natural_iso(), || "lower-left block is not the glued profunctor".into()),
                Err(e) => report.fail(format!("lower-left block: {e}")),
            }
        }
        Err(e) => report.fail(e.to_string()),
    }
    report
}

struct BlockCell {
    // per middle fiber t: offset of its coend classes among the nodes
    offsets: Vec<usize>,
    label: Vec<usize>,
    names: Vec<String>,
}

/// Blockwise composite `N·M`: entry `(u, s)` is the disjoint union over middle
/// fibers `t` of `N_{ut} ∘ M_{ts}`, glued along the middle cross generators.
pub fn block_multiply(n: &LaxMatrix, m: &LaxMatrix) -> Result<LaxMatrix, CollageError> {
    if *n.source.total != *m.target.total {
        return Err(CollageError::CompositionMismatch("middle collages differ".into()));
    }
    let (g, h, k) = (&m.source, &m.target, &n.target);
    let (ns, nt, nu) = (g.fibers.len(), h.fibers.len(), k.fibers.len());
    let ht = &h.total;
    let n_entry = |u: usize, t: usize| &n.entries[u][t];
    let m_entry = |t: usize, s: usize| &m.entries[t][s];

    // coends[(u * nt + t) * ns + s]
    let mut coends = Vec::with_capacity(nu * nt * ns);
    for u in 0..nu {
        for t in 0..nt {
            for s in 0..ns {
                let nb = n_entry(u, t).reindexed(h.fibers[t].clone(), k.fibers[u].clone())?;
                coends.push(Coend::new(&nb, m_entry(t, s))?);
            }
        }
    }
    let coend = |u: usize, t: usize, s: usize| &coends[(u * nt + t) * ns + s];
    let lookup = |tb: &BTreeMap<String, BTreeMap<String, String>>, gname: &str, id: &str| -> Result<String, CollageError> {
        tb.get(gname)
            .and_then(|mp| mp.get(id))
            .cloned()
            .ok_or_else(|| CollageError::IncompatibleActionData(format!("no transition of `{gname}` on `{id}`")))
    };
    let index_in = |p: &Profunctor, id: &str| p.locate(id).map(|l| l.2).expect("element of its block");

    // cells[(u * ns + s)][z * |X_s| + x]
    let mut cells: Vec<Vec<BlockCell>> = Vec::with_capacity(nu * ns);
    for u in 0..nu {
        for s in 0..ns {
            let (zs, xs) = (&k.fibers[u], &g.fibers[s]);
            let mut row = Vec::with_capacity(zs.object_count() * xs.object_count());
            for z in 0..zs.object_count() {
                for x in 0..xs.object_count() {
                    let mut offsets = vec![0; nt + 1];
                    for t in 0..nt {
                        offsets[t + 1] = offsets[t] + coend(u, t, s).profunctor().set_size(z, x);
                    }
                    let mut q = Quotient::new(offsets[nt]);
                    for &gen in &h.generators {
                        let gname = ht.morphism_name(gen);
                        let (t, y) = h.object_fiber[ht.src(gen)];
                        let (t1, y1) = h.object_fiber[ht.dst(gen)];
                        let (n1, m0) = (n_entry(u, t1), m_entry(t, s));
                        for (i, nid) in n1.elements(z, y1).iter().enumerate() {
                            let moved_n = lookup(&n.right_transitions, gname, nid)?;
                            let ni = index_in(n_entry(u, t), &moved_n);
                            for (j, mid) in m0.elements(y, x).iter().enumerate() {
                                let moved_m = lookup(&m.left_transitions, gname, mid)?;
                                let mj = index_in(m_entry(t1, s), &moved_m);
                                let a = offsets[t] + coend(u, t, s).class(z, x, (y, ni, j));
                                let b = offsets[t1] + coend(u, t1, s).class(z, x, (y1, i, mj));
                                q.union(a, b);
                            }
                        }
                    }
                    let node_name = |i: usize| {
                        let t = (0..nt).find(|&t| i < offsets[t + 1]).expect("node in range");
                        coend(u, t, s).profunctor().element(z, x, i - offsets[t]).to_string()
                    };
                    let (label, classes) = q.classes_by(node_name);
                    let names = classes.iter().map(|c| c.iter().map(|&i| node_name(i)).min().unwrap()).collect();
                    row.push(BlockCell { offsets, label, names });
                }
            }
            cells.push(row);
        }
    }
    let cell = |u: usize, s: usize, z: usize, x: usize| &cells[u * ns + s][z * g.fibers[s].object_count() + x];

    // result blocks with fiber actions
    let mut entries = Vec::with_capacity(nu);
    for u in 0..nu {
        let mut row = Vec::with_capacity(ns);
        for s in 0..ns {
            let (zs, xs) = (&k.fibers[u], &g.fibers[s]);
            let sets = (0..zs.object_count())
                .flat_map(|z| (0..xs.object_count()).map(move |x| (z, x)))
                .map(|(z, x)| cell(u, s, z, x).names.clone())
                .collect();
            let mut left = Vec::with_capacity(zs.morphism_count());
            for f in 0..zs.morphism_count() {
                let (z0, z1) = (zs.src(f), zs.dst(f));
                let mut per_x = Vec::new();
                for x in 0..xs.object_count() {
                    let (src, dst) = (cell(u, s, z0, x), cell(u, s, z1, x));
                    let mut map = vec![usize::MAX; src.names.len()];
                    for t in 0..nt {
                        let p = coend(u, t, s).profunctor();
                        for i in 0..p.set_size(z0, x) {
                            let img = dst.label[dst.offsets[t] + p.left_act(f, x, i)];
                            set_once(&mut map[src.label[src.offsets[t] + i]], img, zs.morphism_name(f))?;
                        }
                    }
                    per_x.push(map);
                }
                left.push(per_x);
            }
            let mut right = Vec::with_capacity(xs.morphism_count());
            for f in 0..xs.morphism_count() {
                let (x0, x1) = (xs.src(f), xs.dst(f));
                let mut per_z = Vec::new();
                for z in 0..zs.object_count() {
                    let (src, dst) = (cell(u, s, z, x1), cell(u, s, z, x0));
                    let mut map = vec![usize::MAX; src.names.len()];
                    for t in 0..nt {
                        let p = coend(u, t, s).profunctor();
                        for i in 0..p.set_size(z, x1) {
                            let img = dst.label[dst.offsets[t] + p.right_act(f, z, i)];
                            set_once(&mut map[src.label[src.offsets[t] + i]], img, xs.morphism_name(f))?;
                        }
                    }
                    per_z.push(map);
                }
                right.push(per_z);
            }
            row.push(Profunctor::new(xs.clone(), zs.clone(), sets, left, right)?);
        }
        entries.push(row);
    }

    // transitions along outer generators, computed on every generator pair
    let mut left_transitions = BTreeMap::new();
    let kt = &k.total;
    for &gen in &k.generators {
        let gname = kt.morphism_name(gen);
        let (u0, z0) = k.object_fiber[kt.src(gen)];
        let (u1, z1) = k.object_fiber[kt.dst(gen)];
        let mut map = BTreeMap::new();
        for s in 0..ns {
            for x in 0..g.fibers[s].object_count() {
                let (src, dst) = (cell(u0, s, z0, x), cell(u1, s, z1, x));
                let mut images = vec![usize::MAX; src.names.len()];
                for t in 0..nt {
                    let c0 = coend(u0, t, s);
                    for i in 0..c0.profunctor().set_size(z0, x) {
                        let (y, ni, mj) = c0.representative(z0, x, i);
                        let moved = lookup(&n.left_transitions, gname, n_entry(u0, t).element(z0, y, ni))?;
                        let ni1 = index_in(n_entry(u1, t), &moved);
                        let img = dst.label[dst.offsets[t] + coend(u1, t, s).class(z1, x, (y, ni1, mj))];
                        set_once(&mut images[src.label[src.offsets[t] + i]], img, gname)?;
                    }
                }
                for (i, &j) in images.iter().enumerate() {
                    map.insert(src.names[i].clone(), dst.names[j].clone());
                }
            }
        }
        left_transitions.insert(gname.to_string(), map);
    }
    let mut right_transitions = BTreeMap::new();
    let gt = &g.total;
    for &gen in &g.generators {
        let gname = gt.morphism_name(gen);
        let (s0, x0) = g.object_fiber[gt.src(gen)];
        let (s1, x1) = g.object_fiber[gt.dst(gen)];
        let mut map = BTreeMap::new();
        for u in 0..nu {
            for z in 0..k.fibers[u].object_count() {
                let (src, dst) = (cell(u, s1, z, x1), cell(u, s0, z, x0));
                let mut images = vec![usize::MAX; src.names.len()];
                for t in 0..nt {
                    let c1 = coend(u, t, s1);
                    for i in 0..c1.profunctor().set_size(z, x1) {
                        let (y, ni, mj) = c1.representative(z, x1, i);
                        let moved = lookup(&m.right_transitions, gname, m_entry(t, s1).element(y, x1, mj))?;
                        let mj0 = index_in(m_entry(t, s0), &moved);
                        let img = dst.label[dst.offsets[t] + coend(u, t, s0).class(z, x0, (y, ni, mj0))];
                        set_once(&mut images[src.label[src.offsets[t] + i]], img, gname)?;
                    }
                }
                for (i, &j) in images.iter().enumerate() {
                    map.insert(src.names[i].clone(), dst.names[j].clone());
                }
            }
        }
        right_transitions.insert(gname.to_string(), map);
    }
    LaxMatrix::new(g.clone(), k.clone(), entries, right_transitions, left_transitions)
}

fn set_once(slot: &mut usize, value: usize, morphism: &str) -> Result<(), CollageError> {
    if *slot != usize::MAX && *slot != value {
        return Err(ProfunctorError::IllDefinedAction { morphism: morphism.into() }.into());
    }
    *slot = value;
    Ok(())
}

/// Block product against the restriction of the global coend composite.
pub fn check_block_multiply(n: &LaxMatrix, m: &LaxMatrix) -> Report {
    let mut report = Report::new("block-multiply");
    let run = || -> Result<(LaxMatrix, LaxMatrix), CollageError> {
        let block = block_multiply(n, m)?;
        let global = compose_profunctors(&assemble_matrix(n)?, &assemble_matrix(m)?)?;
        Ok((block, restrict_matrix(&global, &m.source, &n.target)?))
    };
    match run() {
        Ok((block, global)) => {
            report.require(block == global, || "block product differs from the global composite".into());
            if let (Ok(a), Ok(b)) = (assemble_matrix(&block), assemble_matrix(&global)) {
                let ids = a.elements_iter().map(|e| (e.to_string(), e.to_string())).collect();
                let ok = ProTransformation::from_named(a, b, &ids).is_ok_and(|t| t.is_natural_iso());
                report.require(ok, || "identifier map is not a natural bijection".into());
            }
        }
        Err(e) => report.fail(e.to_string()),
    }
    report
}

/// Which side of the profunctor carries the collage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Maps out of the collage: the collage is the source.
    Colimit,
    /// Maps into the collage: the collage is the target.
    Limit,
}

/// `assemble ∘ restrict` recovers `m` through the identifier map, and
/// `restrict ∘ assemble` is the identity on block data.
pub fn check_bilimit_roundtrip(x: &Diagram, t: &Arc<FinCategory>, m: &Profunctor) -> Report {
    let mut report = Report::new("bilimit-roundtrip");
    let g = Arc::new(grothendieck(x));
    let other = Arc::new(Collage::of_category(t.clone()));
    let mut sides = Vec::new();
    if **m.source() == *g.total && **m.target() == **t {
        sides.push(Orientation::Colimit);
    }
    if **m.target() == *g.total && **m.source() == **t {
        sides.push(Orientation::Limit);
    }
    if sides.is_empty() {
        report.fail("profunctor is neither out of nor into the Grothendieck total");
        return report;
    }
    for side in sides {
        let (src, dst) = match side {
            Orientation::Colimit => (&g, &other),
            Orientation::Limit => (&other, &g),
        };
        report.absorb(roundtrip(m, src, dst, side));
    }
    report
}

/// The round trip of `m: G ⇸ H` through its blocks.
pub fn roundtrip(m: &Profunctor, source: &Arc<Collage>, target: &Arc<Collage>, side: Orientation) -> Report {
    let mut report = Report::new(format!("{side:?}").to_lowercase());
    let result = (|| -> Result<(), CollageError> {
        let lm = restrict_matrix(m, source, target)?;
        let back = assemble_matrix(&lm)?;
        let orig = m.reindexed(source.total.clone(), target.total.clone())?;
        let ids = orig.elements_iter().map(|e| (e.to_string(), e.to_string())).collect();
        let t = ProTransformation::from_named(back.clone(), orig.clone(), &ids)?;
        report.require(t.is_natural_iso(), || "assembled profunctor is not naturally bijective to the input".into());
        report.require(back == orig, || "assembled profunctor differs from the input".into());
        let again = restrict_matrix(&back, source, target)?;
        report.require(again == lm, || "restriction of the assembly differs from the blocks".into());
        Ok(())
    })();
    if let Err(e) = result {
        report.fail(e.to_string());
    }
    report
}

/// `∫X × E → ∫(X × E)`, `((s,x),e) ↦ (s,(x,e))`, is an invertible functor.
pub fn check_absoluteness(x: &Diagram, e: &Arc<FinCategory>) -> Report {
    let mut report = Report::new("absoluteness");
    match absoluteness_comparison(x, e) {
        Ok(f) => {
            let violations = f.validate();
            report.require(violations.is_valid(), || format!("comparison is not a functor: {violations}"));
            report.require(f.inverse().is_some(), || "comparison is not invertible".into());
        }
        Err(err) => report.fail(err.to_string()),
    }
    report
}

/// The canonical comparison functor `∫X × E → ∫(X × E)`.
pub fn absoluteness_comparison(x: &Diagram, e: &Arc<FinCategory>) -> Result<CatFunctor, CollageError> {
    let left_collage = grothendieck(x);
    let left = Arc::new(product(&left_collage.total, e));
    let right = grothendieck(&x.product_with(e));
    let (ne, me) = (e.object_count(), e.morphism_count());
    let obmap = (0..left.object_count())
        .map(|i| {
            let (s, xi) = left_collage.object_fiber[i / ne];
            right.fiber_objects[s][xi * ne + i % ne]
        })
        .collect();
    let mut mormap = Vec::with_capacity(left.morphism_count());
    for i in 0..left.morphism_count() {
        let (g, xi, h) = left_collage.parts[i / me];
        let k = i % me;
        let key = (g, xi * ne + e.src(k), h * me + k);
        let m = right
            .part_index
            .get(&key)
            .ok_or_else(|| CollageError::NotACollage(format!("no image for `{}`", left.morphism_name(i))))?;
        mormap.push(*m);
    }
    Ok(CatFunctor::from_maps(left, right.total.clone(), obmap, mormap)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::find_isomorphism;

    fn singleton_pair() -> Profunctor {
        let one = Arc::new(FinCategory::terminal());
        hom_profunctor(&one)
    }

    #[test]
    fn empty_profunctor_gives_disjoint_union() {
        let a = Arc::new(FinCategory::interval());
        let b = Arc::new(FinCategory::discrete(2));
        let g = collage_of_profunctor(&Profunctor::empty(a.clone(), b.clone()));
        assert_eq!(g.total().object_count(), 4);
        assert_eq!(g.total().morphism_count(), 5);
        assert!(check_semiorthogonal(&g).passed);
    }

    #[test]
    fn singleton_glues_to_the_arrow() {
        let g = collage_of_profunctor(&singleton_pair());
        let arrow = Arc::new(FinCategory::interval());
        assert!(find_isomorphism(g.total(), &arrow, 8).unwrap().is_some());
        let g = Arc::new(g);
        assert!(check_semiorthogonal(&g).passed);
        assert!(check_identity_blocks(&g).passed, "{:?}", check_identity_blocks(&g));
    }

    #[test]
    fn gluing_along_hom_is_cylinder() {
        let a = Arc::new(FinCategory::interval());
        let g = collage_of_profunctor(&hom_profunctor(&a));
        let cyl = Arc::new(product(&a, &FinCategory::interval()));
        assert!(find_isomorphism(g.total(), &cyl, 8).unwrap().is_some());
        let g = Arc::new(g);
        assert!(check_semiorthogonal(&g).passed);
        assert!(check_identity_blocks(&g).passed);
    }

    #[test]
    fn constant_terminal_diagram_recovers_shape() {
        let shape = Arc::new(FinCategory::simplex(2));
        let g = grothendieck(&Diagram::constant(shape.clone(), Arc::new(FinCategory::terminal())));
        assert!(find_isomorphism(g.total(), &shape, 8).unwrap().is_some());
    }

    #[test]
    fn constant_diagram_over_arrow_is_product() {
        let a = Arc::new(FinCategory::interval());
        let g = grothendieck(&Diagram::constant(Arc::new(FinCategory::interval()), a.clone()));
        let cyl = Arc::new(product(&a, &FinCategory::interval()));
        assert!(find_isomorphism(g.total(), &cyl, 8).unwrap().is_some());
    }

    #[test]
    fn grothendieck_over_arrow_equals_representable_collage() {
        let a = Arc::new(FinCategory::discrete(2));
        let b = Arc::new(FinCategory::interval());
        let f = CatFunctor::from_maps(a.clone(), b.clone(), vec![0, 1], vec![0, 1]).unwrap();
        let x = Diagram::over_interval(&f).unwrap();
        let lhs = grothendieck(&x);
        let rhs = collage_of_profunctor(&from_functor(&f).unwrap());
        assert_eq!(**lhs.total(), **rhs.total());
        assert!(check_semiorthogonal(&lhs).passed);
        assert!(check_identity_blocks(&Arc::new(lhs)).passed);
    }

    #[test]
    fn oplax_points_backwards() {
        let one = Arc::new(FinCategory::terminal());
        let b = Arc::new(FinCategory::interval());
        let f = CatFunctor::constant(one, b, 0);
        let x = Diagram::over_interval(&f).unwrap();
        let c = oplax_grothendieck(&x);
        let a0 = c.object_index("(0,*)").unwrap();
        let (b0, b1) = (c.object_index("(1,0)").unwrap(), c.object_index("(1,1)").unwrap());
        // Hom((1,b),(0,*)) = B(b, 0)
        assert_eq!(c.hom(b0, a0).len(), 1);
        assert_eq!(c.hom(b1, a0).len(), 0);
        assert!(c.hom(a0, b0).is_empty());
    }

    #[test]
    fn diagram_rejects_non_strict_data() {
        let shape = Arc::new(FinCategory::interval());
        let a = Arc::new(FinCategory::discrete(2));
        let swap = CatFunctor::from_maps(a.clone(), a.clone(), vec![1, 0], vec![1, 0]).unwrap();
        let bad = Diagram::new(shape, vec![a.clone(), a.clone()], vec![swap.clone(), CatFunctor::identity(a.clone()), swap]);
        assert!(matches!(bad, Err(CollageError::InvalidDiagram(_))));
    }

    #[test]
    fn restrict_of_injection_is_a_column() {
        let p = {
            let one = Arc::new(FinCategory::terminal());
            let b = Arc::new(FinCategory::interval());
            from_functor(&CatFunctor::constant(one, b, 0)).unwrap()
        };
        let g = Arc::new(collage_of_profunctor(&p));
        let inj = from_functor(g.injection(0)).unwrap();
        let a = Arc::new(Collage::of_category(g.fibers()[0].clone()));
        let col = restrict_matrix(&inj, &a, &g).unwrap();
        assert_eq!(col.entry(0, 0).total_elements(), hom_profunctor(&g.fibers()[0]).total_elements());
        assert_eq!(col.entry(1, 0).total_elements(), p.total_elements());
        assert_eq!(assemble_matrix(&col).unwrap(), inj);
    }

    #[test]
    fn identity_blocks_of_hom() {
        let g = Arc::new(collage_of_profunctor(&singleton_pair()));
        let blocks = identity_block_decomposition(&g).unwrap();
        assert!(blocks.entry(0, 1).is_empty());
        assert_eq!(blocks.entry(1, 0).total_elements(), 1);
        assert_eq!(assemble_matrix(&blocks).unwrap(), hom_profunctor(g.total()));
    }

    #[test]
    fn block_product_on_arrow_middle() {
        let p = {
            let one = Arc::new(FinCategory::terminal());
            let b = Arc::new(FinCategory::interval());
            from_functor(&CatFunctor::constant(one, b, 0)).unwrap()
        };
        let g = Arc::new(collage_of_profunctor(&p));
        let hom = identity_block_decomposition(&g).unwrap();
        let report = check_block_multiply(&hom, &hom);
        assert!(report.passed, "{report:?}");
        let inj = from_functor(g.injection(1)).unwrap();
        let b = Arc::new(Collage::of_category(g.fibers()[1].clone()));
        let col = restrict_matrix(&inj, &b, &g).unwrap();
        assert!(check_block_multiply(&hom, &col).passed);
    }

    #[test]
    fn roundtrips_both_ways() {
        let one = Arc::new(FinCategory::terminal());
        let b = Arc::new(FinCategory::interval());
        let x = Diagram::over_interval(&CatFunctor::constant(one, b, 1)).unwrap();
        let g = grothendieck(&x);
        let total = g.total().clone();
        let report = check_bilimit_roundtrip(&x, &total, &hom_profunctor(&total));
        assert!(report.passed, "{report:?}");
        let inj = from_functor(g.injection(0)).unwrap();
        assert!(check_bilimit_roundtrip(&x, &g.fibers()[0], &inj).passed);
    }

    #[test]
    fn absoluteness_examples() {
        let one = Arc::new(FinCategory::terminal());
        let x = Diagram::over_interval(&CatFunctor::identity(one.clone())).unwrap();
        assert!(check_absoluteness(&x, &one).passed);
        let d2 = Arc::new(FinCategory::discrete(2));
        let f = absoluteness_comparison(&x, &d2).unwrap();
        assert_eq!(f.source().object_count(), 4);
        assert!(check_absoluteness(&x, &d2).passed);
    }

    #[test]
    fn corrupted_transition_is_rejected() {
        let g = Arc::new(collage_of_profunctor(&singleton_pair()));
        let blocks = identity_block_decomposition(&g).unwrap();
        let mut doc = blocks.to_doc();
        doc.right_transitions.values_mut().for_each(|m| m.clear());
        assert!(matches!(LaxMatrix::from_doc(&doc, g.clone(), g.clone()), Err(CollageError::IncompatibleActionData(_))));
        let back = LaxMatrix::from_doc(&blocks.to_doc(), g.clone(), g).unwrap();
        assert_eq!(back, blocks);
    }

    #[test]
    fn diagram_doc_round_trip() {
        let a = Arc::new(FinCategory::discrete(2));
        let b = Arc::new(FinCategory::interval());
        let f = CatFunctor::from_maps(a, b, vec![0, 1], vec![0, 1]).unwrap();
        let x = Diagram::over_interval(&f).unwrap();
        let text = serde_json::to_string(&x.to_doc()).unwrap();
        let back = Diagram::from_doc(&serde_json::from_str(&text).unwrap(), &crate::fincat::NoCategories).unwrap();
        assert_eq!(**grothendieck(&back).total(), **grothendieck(&x).total());
    }
}
