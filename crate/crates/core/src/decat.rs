//! Cardinality matrices of profunctors and their behaviour under
//! composition.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::collage::Collage;
use crate::fincat::FinCategory;
use crate::profunctor::{compose_profunctors, hom_profunctor, Profunctor};
use crate::quotient::Quotient;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    /// Elements of each set.
    Raw,
    /// Classes of each set under the endomorphisms of its two objects.
    Pi0,
}

/// Rows are target objects, columns source objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CardMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<u64>>,
}

impl CardMatrix {
    pub fn zero(rows: Vec<String>, cols: Vec<String>) -> Self {
        let entries = vec![vec![0; cols.len()]; rows.len()];
        CardMatrix { rows, cols, entries }
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r][c]
    }

    /// Product over ℕ; `None` if the inner labels differ.
    pub fn multiply(&self, other: &CardMatrix) -> Option<CardMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = CardMatrix::zero(self.rows.clone(), other.cols.clone());
        for (u, row) in out.entries.iter_mut().enumerate() {
            for (s, x) in row.iter_mut().enumerate() {
                *x = (0..self.cols.len()).map(|t| self.entries[u][t] * other.entries[t][s]).sum();
            }
        }
        Some(out)
    }
}

pub fn cardinality_matrix(p: &Profunctor, mode: CountMode) -> CardMatrix {
    let (src, tgt) = (p.source(), p.target());
    let mut out = CardMatrix::zero(tgt.objects().to_vec(), src.objects().to_vec());
    for d in 0..tgt.object_count() {
        for c in 0..src.object_count() {
            out.entries[d][c] = match mode {
                CountMode::Raw => p.set_size(d, c) as u64,
                CountMode::Pi0 => components(p, d, c) as u64,
            };
        }
    }
    out
}

fn endomorphisms(cat: &FinCategory, x: usize) -> impl Iterator<Item = usize> + '_ {
    cat.hom(x, x).iter().copied().filter(move |&m| !cat.is_identity(m))
}

fn components(p: &Profunctor, d: usize, c: usize) -> usize {
    let n = p.set_size(d, c);
    let mut q = Quotient::new(n);
    for i in 0..n {
        for g in endomorphisms(p.target(), d) {
            q.union(i, p.left_act(g, c, i));
        }
        for s in endomorphisms(p.source(), c) {
            q.union(i, p.right_act(s, d, i));
        }
    }
    q.classes_by(|i| i).1.len()
}

/// For discrete categories, counting commutes with composition.
pub fn check_discrete_multiplication(n: &Profunctor, m: &Profunctor) -> Report {
    let mut r = Report::new("discrete_multiplication");
    for (what, cat) in [("source of M", m.source()), ("middle", m.target()), ("target of N", n.target())] {
        r.require(cat.is_discrete(), || format!("{what} is not discrete"));
    }
    if !r.passed {
        return r;
    }
    let composite = match compose_profunctors(n, m) {
        Ok(p) => p,
        Err(e) => {
            r.fail(e.to_string());
            return r;
        }
    };
    let lhs = cardinality_matrix(&composite, CountMode::Raw);
    let rhs = cardinality_matrix(n, CountMode::Raw).multiply(&cardinality_matrix(m, CountMode::Raw));
    r.require(Some(&lhs) == rhs.as_ref(), || format!("|N∘M| = {:?} but |N|·|M| = {:?}", lhs.entries, rhs.map(|m| m.entries)));
    r
}

/// Object counts add up over the fibers; over `0 → 1` the hom counts of
/// the total are block lower-triangular with the fiber hom counts on the
/// diagonal.
pub fn collage_rank_count(g: &Collage) -> Report {
    let mut r = Report::new("collage_rank_count");
    let total = g.total();
    let fiber_sum: usize = g.fibers().iter().map(|f| f.object_count()).sum();
    r.require(total.object_count() == fiber_sum, || {
        format!("total has {} objects, fibers {fiber_sum}", total.object_count())
    });
    let homs = cardinality_matrix(&hom_profunctor(total), CountMode::Raw);
    for (s, fiber) in g.fibers().iter().enumerate() {
        let own = cardinality_matrix(&hom_profunctor(fiber), CountMode::Raw);
        for x in 0..fiber.object_count() {
            for y in 0..fiber.object_count() {
                let (tx, ty) = (g.fiber_object(s, x), g.fiber_object(s, y));
                r.require(homs.get(tx, ty) == own.get(x, y), || {
                    format!("fiber {s}: hom count ({x},{y}) is {} in the total", homs.get(tx, ty))
                });
            }
        }
    }
    if let Some((a, b, _)) = g.interval_parts() {
        for x in 0..g.fibers()[a].object_count() {
            for y in 0..g.fibers()[b].object_count() {
                let (ta, tb) = (g.fiber_object(a, x), g.fiber_object(b, y));
                r.require(homs.get(ta, tb) == 0, || {
                    format!("{} morphisms from {} back to {}", homs.get(ta, tb), total.object_name(tb), total.object_name(ta))
                });
            }
        }
    }
    r
}

/// The total hom counts reordered fiber by fiber.
pub fn collage_hom_matrix(g: &Collage) -> CardMatrix {
    let total = g.total();
    let order: Vec<usize> = g
        .fibers()
        .iter()
        .enumerate()
        .flat_map(|(s, f)| (0..f.object_count()).map(move |x| (s, x)))
        .map(|(s, x)| g.fiber_object(s, x))
        .collect();
    let homs = cardinality_matrix(&hom_profunctor(total), CountMode::Raw);
    let names: Vec<String> = order.iter().map(|&o| total.object_name(o).to_string()).collect();
    let mut out = CardMatrix::zero(names.clone(), names);
    for (i, &x) in order.iter().enumerate() {
        for (j, &y) in order.iter().enumerate() {
            out.entries[i][j] = homs.get(x, y);
        }
    }
    out
}

/// `Δ¹ ⇸ 𝟙` and `𝟙 ⇸ Δ¹` with one element in each set, glued along `u`.
/// Their composite has one element; their count matrices multiply to 2.
pub fn gluing_pair() -> (Profunctor, Profunctor) {
    let one = Arc::new(FinCategory::terminal());
    let arrow = Arc::new(FinCategory::interval());
    let sets = |pairs: &[(&str, &str)]| -> BTreeMap<String, Vec<String>> {
        pairs.iter().map(|(k, e)| (k.to_string(), vec![e.to_string()])).collect()
    };
    let act = |from: &str, to: &str| -> BTreeMap<String, BTreeMap<String, String>> {
        BTreeMap::from([("u".to_string(), BTreeMap::from([(from.to_string(), to.to_string())]))])
    };
    let contra = Profunctor::from_named_parts(
        arrow.clone(),
        one.clone(),
        &sets(&[("(*,0)", "x0"), ("(*,1)", "x1")]),
        &BTreeMap::new(),
        &act("x1", "x0"),
    )
    .expect("valid profunctor");
    let co = Profunctor::from_named_parts(one, arrow, &sets(&[("(0,*)", "y0"), ("(1,*)", "y1")]), &act("y0", "y1"), &BTreeMap::new())
        .expect("valid profunctor");
    (contra, co)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collage::{collage_of_profunctor, grothendieck, Diagram};

    #[test]
    fn examples() {
        let d2 = Arc::new(FinCategory::discrete(2));
        assert_eq!(cardinality_matrix(&hom_profunctor(&d2), CountMode::Raw).entries, vec![vec![1, 0], vec![0, 1]]);
        let empty = Profunctor::empty(d2.clone(), d2.clone());
        assert_eq!(cardinality_matrix(&empty, CountMode::Raw).entries, vec![vec![0, 0], vec![0, 0]]);
        let arrow = Arc::new(FinCategory::interval());
        assert_eq!(cardinality_matrix(&hom_profunctor(&arrow), CountMode::Raw).entries, vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn pi0_agrees_on_discrete_and_collapses_idempotents() {
        let d2 = Arc::new(FinCategory::discrete(2));
        let h = hom_profunctor(&d2);
        assert_eq!(cardinality_matrix(&h, CountMode::Pi0), cardinality_matrix(&h, CountMode::Raw));
        let e = Arc::new(crate::fincat::standard_by_name("std:idempotent").unwrap());
        let h = hom_profunctor(&e);
        assert_eq!(cardinality_matrix(&h, CountMode::Raw).entries, vec![vec![2]]);
        assert_eq!(cardinality_matrix(&h, CountMode::Pi0).entries, vec![vec![1]]);
    }

    #[test]
    fn discrete_multiplication() {
        let d2 = Arc::new(FinCategory::discrete(2));
        let h = hom_profunctor(&d2);
        assert!(check_discrete_multiplication(&h, &h).passed);
        let one = Arc::new(FinCategory::terminal());
        assert!(check_discrete_multiplication(&hom_profunctor(&one), &hom_profunctor(&one)).passed);
        let arrow = Arc::new(FinCategory::interval());
        assert!(!check_discrete_multiplication(&hom_profunctor(&arrow), &hom_profunctor(&arrow)).passed);
    }

    #[test]
    fn gluing_is_not_multiplicative() {
        let (contra, co) = gluing_pair();
        let composite = compose_profunctors(&contra, &co).unwrap();
        assert_eq!(composite.total_elements(), 1);
        let product = cardinality_matrix(&contra, CountMode::Raw).multiply(&cardinality_matrix(&co, CountMode::Raw)).unwrap();
        assert_eq!(product.entries, vec![vec![2]]);
    }

    #[test]
    fn collage_counts() {
        let one = Arc::new(FinCategory::terminal());
        let single = Profunctor::from_named_parts(
            one.clone(),
            one.clone(),
            &BTreeMap::from([("(*,*)".to_string(), vec!["p".to_string()])]),
            &BTreeMap::new(),
            &BTreeMap::new(),
        )
        .unwrap();
        let g = collage_of_profunctor(&single);
        assert!(collage_rank_count(&g).passed);
        assert_eq!(collage_hom_matrix(&g).entries, vec![vec![1, 0], vec![1, 1]]);

        let d2 = Arc::new(FinCategory::discrete(2));
        let g = grothendieck(&Diagram::constant(d2, one));
        assert!(collage_rank_count(&g).passed);
        assert_eq!(collage_hom_matrix(&g).entries, vec![vec![1, 0], vec![0, 1]]);
    }
}
