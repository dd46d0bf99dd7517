//! Named report checks over given or seeded random instances.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::workspace::{CliError, MatrixDoc, Workspace};
use crate::collage::{
    check_absoluteness, check_bilimit_roundtrip, check_block_multiply, check_identity_blocks, check_semiorthogonal, collage_of_profunctor,
    grothendieck, restrict_matrix, Collage, Diagram,
};
use crate::decat::{check_discrete_multiplication, collage_rank_count};
use crate::fincat::FinCategory;
use crate::k0chain::{
    check_cone_bijection, check_cone_signs, check_quasi_iso, check_snf, check_tot_euler, cone, Bicomplex, ChainMap, Homotopy,
};
use crate::profunctor::{
    check_cocontinuity, check_cocontinuity_left, check_coequalizer_left, check_coequalizer_right, check_monoid_laws, hom_profunctor,
    ProTransformation, Profunctor,
};
use crate::random;
use crate::report::Report;

pub const PROPERTIES: [&str; 14] = [
    "monoid-laws",
    "cocontinuity",
    "cocontinuity-left",
    "bilimit-roundtrip",
    "block-multiply",
    "absoluteness",
    "semiorthogonal",
    "discrete-multiplication",
    "collage-rank-count",
    "cone-signs",
    "quasi-iso",
    "cone-bijection",
    "snf",
    "tot-euler",
];

/// One checked instance, its size and its serialized form.
pub struct Instance {
    pub report: Report,
    pub size: usize,
    pub doc: Value,
}

#[derive(Serialize)]
struct InstanceResult {
    index: usize,
    passed: bool,
    failures: Vec<String>,
}

#[derive(Serialize)]
pub struct CheckOutput {
    property: String,
    seed: Option<u64>,
    instances: usize,
    passed: bool,
    failed: usize,
    results: Vec<InstanceResult>,
    minimal_failing_instance: Option<Value>,
}

impl CheckOutput {
    pub fn passed(&self) -> bool {
        self.passed
    }
}

/// Generator bounds for random instances.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub objects: usize,
    pub elements: usize,
    pub rank: usize,
}

pub fn run_randomized(property: &str, n: usize, seed: u64, limits: Limits) -> Result<CheckOutput, CliError> {
    known(property)?;
    let mut rng = random::seeded(seed);
    let instances: Vec<Instance> = (0..n).map(|i| random_instance(property, i, &mut rng, limits)).collect();
    Ok(summarize(property, Some(seed), instances))
}

pub fn run_given(property: &str, ws: &Workspace, args: &[String]) -> Result<CheckOutput, CliError> {
    known(property)?;
    let instance = given_instance(property, ws, args)?;
    Ok(summarize(property, None, vec![instance]))
}

fn known(property: &str) -> Result<(), CliError> {
    if PROPERTIES.contains(&property) {
        Ok(())
    } else {
        Err(CliError::invalid("UnknownProperty", format!("unknown property `{property}`; known: {}", PROPERTIES.join(", "))))
    }
}

fn summarize(property: &str, seed: Option<u64>, instances: Vec<Instance>) -> CheckOutput {
    let failed = instances.iter().filter(|i| !i.report.passed).count();
    let minimal = instances.iter().filter(|i| !i.report.passed).min_by_key(|i| i.size).map(|i| i.doc.clone());
    CheckOutput {
        property: property.to_string(),
        seed,
        instances: instances.len(),
        passed: failed == 0,
        failed,
        results: instances
            .into_iter()
            .enumerate()
            .map(|(index, i)| InstanceResult { index, passed: i.report.passed, failures: i.report.failures })
            .collect(),
        minimal_failing_instance: minimal,
    }
}

fn pro(p: &Profunctor) -> Value {
    serde_json::to_value(p.to_doc(true)).expect("serializable")
}

fn trans(a: &ProTransformation) -> Value {
    json!({ "source": pro(a.source()), "components": a.to_doc("source", "target").components })
}

fn chain(f: &ChainMap) -> Value {
    serde_json::to_value(f.to_doc(true)).expect("serializable")
}

fn diagram_doc(d: &Diagram) -> Value {
    serde_json::to_value(d.to_doc()).expect("serializable")
}

fn category_doc(c: &FinCategory) -> Value {
    serde_json::to_value(c.to_doc()).expect("serializable")
}

fn interval_shapes(i: usize) -> Arc<FinCategory> {
    let cospan = || {
        let names: Vec<String> = ["0", "1", "2"].iter().map(|s| s.to_string()).collect();
        FinCategory::from_poset(&names, &[("0".into(), "2".into()), ("1".into(), "2".into())]).expect("cospan")
    };
    Arc::new(match i % 3 {
        0 => FinCategory::interval(),
        1 => FinCategory::simplex(2),
        _ => cospan(),
    })
}

fn random_instance(property: &str, i: usize, rng: &mut ChaCha8Rng, lim: Limits) -> Instance {
    let (o, e) = (lim.objects.min(3), lim.elements.min(3));
    match property {
        "monoid-laws" => {
            let cats: Vec<_> = (0..4).map(|_| random::category(rng, o)).collect();
            let m = random::profunctor(rng, &cats[0], &cats[1], e, "m");
            let n = random::profunctor(rng, &cats[1], &cats[2], e, "n");
            let p = random::profunctor(rng, &cats[2], &cats[3], e, "p");
            Instance {
                report: check_monoid_laws(&p, &n, &m),
                size: p.total_elements() + n.total_elements() + m.total_elements(),
                doc: json!({ "p": pro(&p), "n": pro(&n), "m": pro(&m) }),
            }
        }
        "cocontinuity" | "cocontinuity-left" => {
            let (c, d, t) = (random::category(rng, o), random::category(rng, o), random::category(rng, o));
            let left = property == "cocontinuity-left";
            if i.is_multiple_of(2) {
                let (x, y) = if left {
                    (random::profunctor(rng, &d, &t, e, "a"), random::profunctor(rng, &d, &t, e, "b"))
                } else {
                    (random::profunctor(rng, &c, &d, e, "a"), random::profunctor(rng, &c, &d, e, "b"))
                };
                let size = x.total_elements() + y.total_elements();
                if left {
                    let m = random::profunctor(rng, &c, &d, e, "m");
                    Instance {
                        report: check_cocontinuity_left(&x, &y, &m),
                        size: size + m.total_elements(),
                        doc: json!({ "n1": pro(&x), "n2": pro(&y), "m": pro(&m) }),
                    }
                } else {
                    let n = random::profunctor(rng, &d, &t, e, "n");
                    Instance {
                        report: check_cocontinuity(&n, &x, &y),
                        size: size + n.total_elements(),
                        doc: json!({ "n": pro(&n), "m1": pro(&x), "m2": pro(&y) }),
                    }
                }
            } else {
                let m = random::profunctor(rng, &c, &d, e, "m");
                let n = random::profunctor(rng, &d, &t, e, "n");
                let size = m.total_elements() + n.total_elements();
                if left {
                    let (a, b) = random::parallel_pair(rng, &n, e + 1, "g");
                    Instance {
                        report: check_coequalizer_left(&a, &b, &m),
                        size: size + a.source().total_elements(),
                        doc: json!({ "alpha": trans(&a), "beta": trans(&b), "m": pro(&m) }),
                    }
                } else {
                    let (a, b) = random::parallel_pair(rng, &m, e + 1, "g");
                    Instance {
                        report: check_coequalizer_right(&n, &a, &b),
                        size: size + a.source().total_elements(),
                        doc: json!({ "n": pro(&n), "alpha": trans(&a), "beta": trans(&b) }),
                    }
                }
            }
        }
        "bilimit-roundtrip" => {
            let shape = interval_shapes(i);
            let x = random::diagram(rng, &shape, 2);
            let total = grothendieck(&x).total().clone();
            let t = random::category(rng, 2);
            let m = if (i / 3).is_multiple_of(2) {
                random::profunctor(rng, &total, &t, e, "m")
            } else {
                random::profunctor(rng, &t, &total, e, "m")
            };
            Instance {
                report: check_bilimit_roundtrip(&x, &t, &m),
                size: total.object_count() + m.total_elements(),
                doc: json!({ "diagram": diagram_doc(&x), "category": category_doc(&t), "profunctor": pro(&m) }),
            }
        }
        "block-multiply" => {
            let outer = |rng: &mut ChaCha8Rng| -> Arc<FinCategory> {
                Arc::new(match rng.random_range(0..3) {
                    0 => FinCategory::terminal(),
                    1 => FinCategory::discrete(2),
                    _ => FinCategory::interval(),
                })
            };
            let (sx, sz) = (outer(rng), outer(rng));
            let sy = interval_shapes(i % 2);
            let (x, y, z) = (random::diagram(rng, &sx, 2), random::diagram(rng, &sy, 2), random::diagram(rng, &sz, 2));
            let (gx, gy, gz) = (Arc::new(grothendieck(&x)), Arc::new(grothendieck(&y)), Arc::new(grothendieck(&z)));
            let m = random::profunctor(rng, gx.total(), gy.total(), e, "m");
            let n = random::profunctor(rng, gy.total(), gz.total(), e, "n");
            let doc = json!({ "x": diagram_doc(&x), "y": diagram_doc(&y), "z": diagram_doc(&z), "n": pro(&n), "m": pro(&m) });
            Instance { report: block_multiply_report(&n, &m, &gx, &gy, &gz), size: n.total_elements() + m.total_elements(), doc }
        }
        "absoluteness" => {
            let shape = if i % 4 == 3 { Arc::new(random::poset(rng, 3)) } else { interval_shapes(i) };
            let x = random::diagram(rng, &shape, 2);
            let c = random::category(rng, 2);
            Instance {
                report: check_absoluteness(&x, &c),
                size: grothendieck(&x).total().object_count() * c.object_count(),
                doc: json!({ "diagram": diagram_doc(&x), "category": category_doc(&c) }),
            }
        }
        "semiorthogonal" | "collage-rank-count" => {
            let (g, doc) = if i.is_multiple_of(2) {
                let (a, b) = (random::category(rng, o), random::category(rng, o));
                let p = random::profunctor(rng, &a, &b, e, "p");
                (collage_of_profunctor(&p), json!({ "profunctor": pro(&p) }))
            } else {
                let shape = if property == "semiorthogonal" { interval_shapes(0) } else { interval_shapes(i) };
                let x = random::diagram(rng, &shape, o);
                (grothendieck(&x), json!({ "diagram": diagram_doc(&x) }))
            };
            let size = g.total().morphism_count();
            Instance { report: collage_report(property, g), size, doc }
        }
        "discrete-multiplication" => {
            let cats: Vec<_> = (0..3).map(|_| Arc::new(FinCategory::discrete(rng.random_range(1..=o)))).collect();
            let m = random::profunctor(rng, &cats[0], &cats[1], e, "m");
            let n = random::profunctor(rng, &cats[1], &cats[2], e, "n");
            Instance {
                report: check_discrete_multiplication(&n, &m),
                size: n.total_elements() + m.total_elements(),
                doc: json!({ "n": pro(&n), "m": pro(&m) }),
            }
        }
        "cone-signs" | "quasi-iso" => {
            let f = random::any_chain_map(rng, lim.rank.min(3));
            let report = if property == "cone-signs" { check_cone_signs(&f) } else { check_quasi_iso(&f) };
            Instance { report, size: f.source().total_rank() + f.target().total_rank(), doc: json!({ "map": chain(&f) }) }
        }
        "cone-bijection" => {
            let (f, g, h) = random::cone_triple(rng, lim.rank.min(2));
            let phi = random::chain_map(rng, &cone(&f).complex, g.target());
            Instance {
                report: check_cone_bijection(&f, &g, &h, &phi),
                size: f.source().total_rank() + f.target().total_rank() + g.target().total_rank(),
                doc: json!({ "f": chain(&f), "g": chain(&g), "h": h.components().to_doc(true), "phi": chain(&phi) }),
            }
        }
        "snf" => {
            let (r, c) = (rng.random_range(1..=8.min(lim.rank.max(1))), rng.random_range(1..=8.min(lim.rank.max(1))));
            let m = random::int_matrix(rng, r, c, 9);
            Instance { report: check_snf(&m), size: r * c, doc: serde_json::to_value(MatrixDoc::of(&m)).expect("serializable") }
        }
        "tot-euler" => {
            let x = random_bicomplex(rng, lim.rank.min(3));
            let size = x.terms().iter().map(|t| t.total_rank()).sum();
            Instance { report: check_tot_euler(&x), size, doc: serde_json::to_value(x.to_doc()).expect("serializable") }
        }
        _ => unreachable!("property names are checked first"),
    }
}

/// `A → A ⊕ B → B`, or `A → B → C` with a zero second map.
fn random_bicomplex(rng: &mut ChaCha8Rng, rank: usize) -> Bicomplex {
    let a = random::small_complex(rng, rank);
    let b = random::small_complex(rng, rank);
    if rng.random_bool(0.5) {
        let sum = a.direct_sum(&b);
        let incl = ChainMap::from_fn(&a, &sum, |n| {
            crate::k0chain::IntMatrix::identity(a.rank(n)).vcat(&crate::k0chain::IntMatrix::zeros(b.rank(n), a.rank(n)))
        })
        .expect("inclusion");
        let proj = ChainMap::from_fn(&sum, &b, |n| {
            crate::k0chain::IntMatrix::zeros(b.rank(n), a.rank(n)).hcat(&crate::k0chain::IntMatrix::identity(b.rank(n)))
        })
        .expect("projection");
        Bicomplex::new(vec![a, sum, b], vec![incl, proj]).expect("split sequence")
    } else {
        let f = random::chain_map(rng, &a, &b);
        let c = random::small_complex(rng, rank);
        let zero = ChainMap::zero(&b, &c);
        Bicomplex::new(vec![a, b, c], vec![f, zero]).expect("zero composite")
    }
}

fn block_multiply_report(n: &Profunctor, m: &Profunctor, gx: &Arc<Collage>, gy: &Arc<Collage>, gz: &Arc<Collage>) -> Report {
    let mut report = Report::new("block-multiply");
    match (restrict_matrix(n, gy, gz), restrict_matrix(m, gx, gy)) {
        (Ok(ln), Ok(lm)) => report.absorb(check_block_multiply(&ln, &lm)),
        (Err(e), _) | (_, Err(e)) => report.fail(e.to_string()),
    }
    report
}

fn collage_report(property: &str, g: Collage) -> Report {
    if property == "collage-rank-count" {
        return collage_rank_count(&g);
    }
    let g = Arc::new(g);
    check_semiorthogonal(&g).with(check_identity_blocks(&g))
}

fn arity(args: &[String], allowed: &[usize], usage: &str) -> Result<(), CliError> {
    if allowed.contains(&args.len()) {
        Ok(())
    } else {
        Err(CliError::invalid("Usage", format!("expected arguments: {usage}")))
    }
}

/// A profunctor or a diagram, as a collage.
fn collage_named(ws: &Workspace, name: &str) -> Result<Collage, CliError> {
    if ws.has_profunctor(name) {
        Ok(collage_of_profunctor(ws.profunctor(name)?))
    } else {
        Ok(grothendieck(ws.diagram(name)?))
    }
}

fn given_instance(property: &str, ws: &Workspace, args: &[String]) -> Result<Instance, CliError> {
    let doc = json!({ "args": args });
    let report = match property {
        "monoid-laws" => {
            arity(args, &[1, 3], "[P N] M")?;
            let m = ws.profunctor(args.last().unwrap())?;
            if args.len() == 1 {
                let h = hom_profunctor(m.target());
                check_monoid_laws(&h, &h, m)
            } else {
                check_monoid_laws(ws.profunctor(&args[0])?, ws.profunctor(&args[1])?, m)
            }
        }
        "cocontinuity" => {
            arity(args, &[3], "N X Y (profunctors M1 M2, or transformations α β)")?;
            let n = ws.profunctor(&args[0])?;
            if ws.has_profunctor(&args[1]) {
                check_cocontinuity(n, ws.profunctor(&args[1])?, ws.profunctor(&args[2])?)
            } else {
                check_coequalizer_right(n, ws.transformation(&args[1])?, ws.transformation(&args[2])?)
            }
        }
        "cocontinuity-left" => {
            arity(args, &[3], "X Y M (profunctors N1 N2, or transformations α β)")?;
            let m = ws.profunctor(&args[2])?;
            if ws.has_profunctor(&args[0]) {
                check_cocontinuity_left(ws.profunctor(&args[0])?, ws.profunctor(&args[1])?, m)
            } else {
                check_coequalizer_left(ws.transformation(&args[0])?, ws.transformation(&args[1])?, m)
            }
        }
        "bilimit-roundtrip" => {
            arity(args, &[1, 3], "D [T M]")?;
            let x = ws.diagram(&args[0])?;
            if args.len() == 1 {
                let total = grothendieck(x).total().clone();
                check_bilimit_roundtrip(x, &total, &hom_profunctor(&total))
            } else {
                check_bilimit_roundtrip(x, &ws.category(&args[1])?, ws.profunctor(&args[2])?)
            }
        }
        "block-multiply" => {
            arity(args, &[5], "X Y Z N M")?;
            let g = |k: usize| -> Result<Arc<Collage>, CliError> { Ok(Arc::new(grothendieck(ws.diagram(&args[k])?))) };
            block_multiply_report(ws.profunctor(&args[3])?, ws.profunctor(&args[4])?, &g(0)?, &g(1)?, &g(2)?)
        }
        "absoluteness" => {
            arity(args, &[2], "D E")?;
            check_absoluteness(ws.diagram(&args[0])?, &ws.category(&args[1])?)
        }
        "semiorthogonal" | "collage-rank-count" => {
            arity(args, &[1], "P|D")?;
            collage_report(property, collage_named(ws, &args[0])?)
        }
        "discrete-multiplication" => {
            arity(args, &[2], "N M")?;
            check_discrete_multiplication(ws.profunctor(&args[0])?, ws.profunctor(&args[1])?)
        }
        "cone-signs" => {
            arity(args, &[1], "F")?;
            check_cone_signs(ws.chain_map(&args[0])?)
        }
        "quasi-iso" => {
            arity(args, &[1], "F")?;
            check_quasi_iso(ws.chain_map(&args[0])?)
        }
        "cone-bijection" => {
            arity(args, &[4], "F G H PHI")?;
            let (f, g) = (ws.chain_map(&args[0])?, ws.chain_map(&args[1])?);
            let gf = g.after(f).map_err(|e| CliError::from_error("g∘f", e))?;
            let h = Homotopy::null(&gf, ws.homotopy(&args[2])?.clone()).map_err(|e| CliError::from_error("H", e))?;
            check_cone_bijection(f, g, &h, ws.chain_map(&args[3])?)
        }
        "snf" => {
            arity(args, &[1], "M")?;
            check_snf(ws.matrix(&args[0])?)
        }
        "tot-euler" => {
            arity(args, &[1], "X")?;
            check_tot_euler(ws.bicomplex(&args[0])?)
        }
        _ => unreachable!("property names are checked first"),
    };
    Ok(Instance { report, size: 0, doc })
}
