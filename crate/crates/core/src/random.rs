//! Seeded generators of small valid instances. Every generator either
//! returns a validated value or retries; none returns unchecked data.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collage::Diagram;
use crate::fincat::{enumerate_functors, CatFunctor, FinCategory};
use crate::k0chain::snf::{kernel_basis, smith_normal_form, solve};
use crate::k0chain::{cone, hom_complex, ChainComplex, ChainMap, GradedMap, Homotopy, IntMatrix};
use crate::profunctor::{ProTransformation, Profunctor};
use crate::quotient::Quotient;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A category with between 1 and `max_objects` objects: discrete, a random
/// poset, the walking arrow, a parallel pair, `ℤ/2` or an idempotent.
pub fn category(rng: &mut impl Rng, max_objects: usize) -> Arc<FinCategory> {
    let max = max_objects.max(1);
    let cat = match rng.random_range(0..7) {
        0 => FinCategory::discrete(rng.random_range(1..=max)),
        1 if max >= 2 => FinCategory::interval(),
        2 if max >= 2 => FinCategory::parallel_pair(),
        3 => FinCategory::cyclic(2),
        4 => FinCategory::idempotent(),
        5 => FinCategory::terminal(),
        _ => poset(rng, max),
    };
    Arc::new(cat)
}

/// A random poset on `1..=max_objects` elements.
pub fn poset(rng: &mut impl Rng, max_objects: usize) -> FinCategory {
    let n = rng.random_range(1..=max_objects.max(1));
    let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut relations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.4) {
                relations.push((elements[i].clone(), elements[j].clone()));
            }
        }
    }
    FinCategory::from_poset(&elements, &relations).expect("upward relations form a poset")
}

/// Coproducts of representables `D(d₀, −) × C(−, c₀)`, one per generator.
struct Free {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    generators: Vec<(usize, usize)>,
    // (set, generator, γ: d₀ → d, σ: c → c₀)
    elements: Vec<(usize, usize, usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
}

impl Free {
    fn new(source: &Arc<FinCategory>, target: &Arc<FinCategory>, generators: Vec<(usize, usize)>) -> Self {
        let nc = source.object_count();
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for (j, &(d0, c0)) in generators.iter().enumerate() {
            for d in 0..target.object_count() {
                for c in 0..nc {
                    for &g in target.hom(d0, d) {
                        for &s in source.hom(c, c0) {
                            index.insert((j, g, s), elements.len());
                            elements.push((d * nc + c, j, g, s));
                        }
                    }
                }
            }
        }
        Free { source: source.clone(), target: target.clone(), generators, elements, index }
    }

    fn left(&self, x: usize, g: usize) -> usize {
        let (_, j, h, s) = self.elements[x];
        self.index[&(j, self.target.compose(g, h).expect("composable"), s)]
    }

    fn right(&self, x: usize, s: usize) -> usize {
        let (_, j, h, t) = self.elements[x];
        self.index[&(j, h, self.source.compose(t, s).expect("composable"))]
    }

    fn object_of(&self, x: usize) -> (usize, usize) {
        let nc = self.source.object_count();
        (self.elements[x].0 / nc, self.elements[x].0 % nc)
    }

    /// Closes `q` under the actions: `x ~ y` implies `γx ~ γy` and `xσ ~ yσ`.
    fn close(&self, q: &mut Quotient) {
        loop {
            let mut changed = false;
            for x in 0..self.elements.len() {
                let r = q.find(x);
                if r == x {
                    continue;
                }
                let (d, c) = self.object_of(x);
                for g in (0..self.target.morphism_count()).filter(|&g| self.target.src(g) == d) {
                    changed |= q.union(self.left(x, g), self.left(r, g));
                }
                for s in (0..self.source.morphism_count()).filter(|&s| self.source.dst(s) == c) {
                    changed |= q.union(self.right(x, s), self.right(r, s));
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// The quotient by `q`, whose classes are named `prefix` plus a number.
    fn quotient(&self, q: &Quotient, prefix: &str) -> Profunctor {
        let (class_of, classes) = q.classes_by(|i| i);
        let size = self.source.object_count() * self.target.object_count();
        let mut sets = vec![Vec::new(); size];
        let mut members = vec![Vec::new(); size];
        let mut position = vec![0; classes.len()];
        for (k, class) in classes.iter().enumerate() {
            let set = self.elements[class[0]].0;
            position[k] = sets[set].len();
            sets[set].push(format!("{prefix}{k}"));
            members[set].push(class[0]);
        }
        let nc = self.source.object_count();
        Profunctor::tabulate(
            self.source.clone(),
            self.target.clone(),
            sets,
            |g, c, i| position[class_of[self.left(members[self.target.src(g) * nc + c][i], g)]],
            |s, d, i| position[class_of[self.right(members[d * nc + self.source.dst(s)][i], s)]],
        )
        .expect("quotient of a free profunctor")
    }

    fn largest_set(&self, q: &Quotient) -> usize {
        let (_, classes) = q.classes_by(|i| i);
        let mut counts = HashMap::new();
        for class in &classes {
            *counts.entry(self.elements[class[0]].0).or_insert(0) += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }
}

/// A random profunctor `source ⇸ target` with every set of size at most
/// `max_elements`: a quotient of a free one by a few random identifications.
pub fn profunctor(
    rng: &mut impl Rng,
    source: &Arc<FinCategory>,
    target: &Arc<FinCategory>,
    max_elements: usize,
    prefix: &str,
) -> Profunctor {
    let (nc, nd) = (source.object_count(), target.object_count());
    if nc > 0 && nd > 0 {
        for _ in 0..64 {
            let k = if rng.random_bool(0.1) { 0 } else { rng.random_range(1..=3) };
            let gens = (0..k).map(|_| (rng.random_range(0..nd), rng.random_range(0..nc))).collect();
            let free = Free::new(source, target, gens);
            if free.elements.len() > 256 {
                continue;
            }
            let mut q = Quotient::new(free.elements.len());
            for _ in 0..rng.random_range(0..=3) {
                if free.elements.is_empty() {
                    break;
                }
                let x = rng.random_range(0..free.elements.len());
                let same: Vec<usize> = (0..free.elements.len()).filter(|&y| free.elements[y].0 == free.elements[x].0).collect();
                q.union(x, *same.choose(rng).expect("x itself"));
            }
            free.close(&mut q);
            if free.largest_set(&q) <= max_elements {
                return free.quotient(&q, prefix);
            }
        }
    }
    Profunctor::empty(source.clone(), target.clone())
}

/// A free profunctor `M'` with two transformations `α, β: M' ⇒ m`, chosen by
/// sending each generator to a random element.
pub fn parallel_pair(
    rng: &mut impl Rng,
    m: &Profunctor,
    max_elements: usize,
    prefix: &str,
) -> (ProTransformation, ProTransformation) {
    let (source, target) = (m.source(), m.target());
    let nc = source.object_count();
    let inhabited: Vec<(usize, usize)> = (0..target.object_count())
        .flat_map(|d| (0..nc).map(move |c| (d, c)))
        .filter(|&(d, c)| m.set_size(d, c) > 0)
        .collect();
    for _ in 0..64 {
        let k = if inhabited.is_empty() { 0 } else { rng.random_range(0..=2) };
        let gens: Vec<(usize, usize)> = (0..k).map(|_| *inhabited.choose(rng).expect("inhabited")).collect();
        let free = Free::new(source, target, gens);
        let q = Quotient::new(free.elements.len());
        if free.largest_set(&q) > max_elements {
            continue;
        }
        let mprime = free.quotient(&q, prefix);
        let mut pick = || {
            let images: Vec<usize> = free.generators.iter().map(|&(d0, c0)| rng.random_range(0..m.set_size(d0, c0))).collect();
            transformation_from_images(&free, &mprime, m, &images, prefix)
        };
        let (alpha, beta) = (pick(), pick());
        return (alpha, beta);
    }
    let empty = Profunctor::empty(source.clone(), target.clone());
    let zero = |_: ()| ProTransformation::new(empty.clone(), m.clone(), vec![Vec::new(); nc * target.object_count()]).expect("empty map");
    (zero(()), zero(()))
}

fn transformation_from_images(free: &Free, mprime: &Profunctor, m: &Profunctor, images: &[usize], prefix: &str) -> ProTransformation {
    let nc = m.source().object_count();
    // under the trivial quotient, element x is named prefix + x
    let mut image_of: HashMap<String, usize> = HashMap::new();
    for (x, &(set, j, g, s)) in free.elements.iter().enumerate() {
        let d0 = free.generators[j].0;
        let moved = m.right_act(s, d0, images[j]);
        image_of.insert(format!("{prefix}{x}"), m.left_act(g, set % nc, moved));
    }
    let components = (0..free.source.object_count() * free.target.object_count())
        .map(|k| mprime.elements(k / nc, k % nc).iter().map(|e| image_of[e]).collect())
        .collect();
    ProTransformation::new(mprime.clone(), m.clone(), components).expect("maps out of a free profunctor are natural")
}

/// A strict diagram over `shape`: random fibers, random functors on
/// indecomposable arrows, composites elsewhere, retried until valid.
pub fn diagram(rng: &mut impl Rng, shape: &Arc<FinCategory>, max_objects: usize) -> Diagram {
    let m = shape.morphism_count();
    let decompositions: Vec<Vec<(usize, usize)>> = (0..m)
        .map(|h| {
            shape
                .composable_pairs()
                .filter(|&(g, f, gf)| gf == h && !shape.is_identity(g) && !shape.is_identity(f))
                .map(|(g, f, _)| (g, f))
                .collect()
        })
        .collect();
    for _ in 0..64 {
        let fibers: Vec<Arc<FinCategory>> = (0..shape.object_count()).map(|_| category(rng, max_objects)).collect();
        let mut transitions: Vec<Option<CatFunctor>> = vec![None; m];
        for h in 0..m {
            let (s, t) = (&fibers[shape.src(h)], &fibers[shape.dst(h)]);
            if shape.is_identity(h) {
                transitions[h] = Some(CatFunctor::identity(s.clone()));
            } else if decompositions[h].is_empty() {
                let all = enumerate_functors(s, t, 64);
                transitions[h] = all.choose(rng).cloned();
            }
        }
        let mut progress = true;
        while progress {
            progress = false;
            for h in 0..m {
                if transitions[h].is_some() {
                    continue;
                }
                let ready = decompositions[h].iter().find(|(g, f)| transitions[*g].is_some() && transitions[*f].is_some());
                if let Some(&(g, f)) = ready {
                    let composite = transitions[g].as_ref().unwrap().after(transitions[f].as_ref().unwrap());
                    transitions[h] = composite.ok();
                    progress = true;
                }
            }
        }
        if let Some(ts) = transitions.into_iter().collect::<Option<Vec<_>>>() {
            if let Ok(d) = Diagram::new(shape.clone(), fibers, ts) {
                return d;
            }
        }
    }
    Diagram::constant(shape.clone(), Arc::new(FinCategory::terminal()))
}

pub fn int_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.random_range(-bound..=bound)))
}

/// A unimodular matrix and its inverse, from random elementary operations.
pub fn unimodular(rng: &mut impl Rng, n: usize) -> (IntMatrix, IntMatrix) {
    let (mut q, mut qi) = (IntMatrix::identity(n), IntMatrix::identity(n));
    if n == 0 {
        return (q, qi);
    }
    for _ in 0..2 * n {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        match rng.random_range(0..3) {
            0 if a != b => {
                let k = BigInt::from(rng.random_range(-2..=2));
                q.add_row(a, b, &k);
                qi.add_col(b, a, &-k);
            }
            1 => {
                q.swap_rows(a, b);
                qi.swap_cols(a, b);
            }
            _ => {
                q.negate_row(a);
                qi.negate_col(a);
            }
        }
    }
    (q, qi)
}

/// A complex on `[lo, hi]`: free summands and two-term pieces `ℤ --k--> ℤ`,
/// then a random change of basis in each degree.
pub fn complex(rng: &mut impl Rng, lo: i64, hi: i64, max_rank: usize) -> ChainComplex {
    let len = (hi - lo + 1) as usize;
    let mut free = vec![0usize; len];
    // pieces[i]: coefficients of pieces from degree lo+i to lo+i−1
    let mut pieces: Vec<Vec<i64>> = vec![Vec::new(); len];
    let cap = max_rank.max(1);
    for i in 0..len {
        free[i] = rng.random_range(0..=cap.min(2));
    }
    for i in 1..len {
        if rng.random_bool(0.6) {
            pieces[i].push(*[1, -1, 2, 3, -2].choose(rng).unwrap());
        }
    }
    let rank = |i: usize| free[i] + pieces[i].len() + pieces.get(i + 1).map_or(0, Vec::len);
    if (0..len).any(|i| rank(i) > cap) {
        return complex(rng, lo, hi, max_rank);
    }
    let bases: Vec<(IntMatrix, IntMatrix)> = (0..len).map(|i| unimodular(rng, rank(i))).collect();
    ChainComplex::from_fn(
        lo,
        hi,
        |n| rank((n - lo) as usize),
        |n| {
            let i = (n - lo) as usize;
            let mut d = IntMatrix::zeros(rank(i - 1), rank(i));
            // degree i: [free | tops of pieces[i] | bottoms of pieces[i+1]]
            let bottom0 = free[i - 1] + pieces[i - 1].len();
            for (p, k) in pieces[i].iter().enumerate() {
                d.set(bottom0 + p, free[i] + p, BigInt::from(*k));
            }
            &(&bases[i - 1].0 * &d) * &bases[i].1
        },
    )
    .expect("conjugated sum of elementary complexes")
}

/// A complex on a random window of at most three degrees near zero.
pub fn small_complex(rng: &mut impl Rng, max_rank: usize) -> ChainComplex {
    let lo = rng.random_range(-1..=0);
    let hi = lo + rng.random_range(1..=2);
    complex(rng, lo, hi, max_rank)
}

/// A combination with coefficients in `[−2, 2]`, not all zero when the
/// basis is non-empty.
fn small_combination(rng: &mut impl Rng, basis: &IntMatrix) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); basis.rows()];
    let forced = (basis.cols() > 0).then(|| rng.random_range(0..basis.cols()));
    for j in 0..basis.cols() {
        let mut c = rng.random_range(-2..=2);
        if c == 0 && forced == Some(j) {
            c = if rng.random_bool(0.5) { 1 } else { -1 };
        }
        if c != 0 {
            for (i, x) in v.iter_mut().enumerate() {
                *x += basis.get(i, j) * c;
            }
        }
    }
    v
}

/// A random chain map, as a small combination of a basis of the degree-0
/// cycles of the hom complex.
pub fn chain_map(rng: &mut impl Rng, a: &ChainComplex, b: &ChainComplex) -> ChainMap {
    let h = hom_complex(a, b);
    let (basis, _) = kernel_basis(&h.complex().d(0));
    let v = if h.complex().rank(0) == 0 { Vec::new() } else { small_combination(rng, &basis) };
    h.cycle_to_chain_map(&v).expect("cycles are chain maps")
}

/// `A → A ⊕ Cone(id_E)` followed by a change of basis: a quasi-isomorphism.
pub fn quasi_iso(rng: &mut impl Rng, a: &ChainComplex, max_rank: usize) -> ChainMap {
    let e = complex(rng, a.lo(), a.lo() + 1, 1.max(max_rank / 2));
    let sum = a.direct_sum(&cone(&ChainMap::identity(&e)).complex);
    let bases: Vec<(IntMatrix, IntMatrix)> = sum.degrees().map(|n| unimodular(rng, sum.rank(n))).collect();
    let at = |n: i64| &bases[(n - sum.lo()) as usize];
    let target =
        ChainComplex::from_fn(sum.lo(), sum.hi(), |n| sum.rank(n), |n| &(&at(n - 1).0 * &sum.d(n)) * &at(n).1).expect("conjugated complex");
    ChainMap::from_fn(a, &target, |n| {
        let incl = IntMatrix::identity(a.rank(n)).vcat(&IntMatrix::zeros(sum.rank(n) - a.rank(n), a.rank(n)));
        if n < target.lo() || n > target.hi() {
            incl
        } else {
            &at(n).0 * &incl
        }
    })
    .expect("inclusion of a summand")
}

/// A mix of general chain maps, quasi-isomorphisms and scalar maps.
pub fn any_chain_map(rng: &mut impl Rng, max_rank: usize) -> ChainMap {
    let a = small_complex(rng, max_rank);
    match rng.random_range(0..4) {
        0 => quasi_iso(rng, &a, max_rank),
        1 => ChainMap::scalar(&a, rng.random_range(-3..=3)),
        _ => {
            let b = small_complex(rng, max_rank);
            chain_map(rng, &a, &b)
        }
    }
}

pub fn graded_map(rng: &mut impl Rng, a: &ChainComplex, b: &ChainComplex, degree: i64, bound: i64) -> GradedMap {
    let comps = a.degrees().map(|n| int_matrix(rng, b.rank(n + degree), a.rank(n), bound)).collect();
    GradedMap::new(a.clone(), b.clone(), degree, comps).expect("shapes")
}

/// `(f, g, H)` with `H` a null-homotopy of `g ∘ f`.
pub fn cone_triple(rng: &mut impl Rng, max_rank: usize) -> (ChainMap, ChainMap, Homotopy) {
    let (a, b, c) = (small_complex(rng, max_rank), small_complex(rng, max_rank), small_complex(rng, max_rank));
    let f = chain_map(rng, &a, &b);
    let hom = hom_complex(&a, &c);
    let from_coords = |v: &[BigInt]| {
        let raw = hom.graded_from_coords(1, v);
        GradedMap::from_fn(&a, &c, 1, |k| raw.at(k).signed(k)).expect("shapes")
    };
    let plus = |x: &GradedMap, y: &GradedMap| GradedMap::from_fn(&a, &c, 1, |k| &x.at(k) + &y.at(k)).expect("shapes");

    let delta = smith_normal_form(&hom.complex().d(1));
    let general = (0..4).find_map(|_| {
        let g = chain_map(rng, &b, &c);
        let target = hom.chain_map_to_cycle(&g.after(&f).expect("composable"));
        solve(&delta, &target).map(|x| (g, from_coords(&x)))
    });
    let (g, h) = match general {
        Some(found) => found,
        None => {
            let k = graded_map(rng, &b, &c, 1, 2);
            let g = ChainMap::from_fn(&b, &c, |n| &(&c.d(n + 1) * &k.at(n)) + &(&k.at(n - 1) * &b.d(n))).expect("dK + Kd is a chain map");
            let h = GradedMap::from_fn(&a, &c, 1, |n| &k.at(n) * &f.at(n)).expect("shapes");
            (g, h)
        }
    };
    // add a random homotopy cycle, which keeps dH + Hd unchanged
    let (cycles, _) = kernel_basis(&hom.complex().d(1));
    let h = if hom.complex().rank(1) == 0 { h } else { plus(&h, &from_coords(&small_combination(rng, &cycles))) };
    let gf = g.after(&f).expect("composable");
    let h = Homotopy::null(&gf, h).expect("constructed null-homotopy");
    (f, g, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k0chain::is_quasi_iso;

    #[test]
    fn generators_are_deterministic_and_valid() {
        let (mut r1, mut r2) = (seeded(7), seeded(7));
        for _ in 0..20 {
            let (c1, c2) = (category(&mut r1, 3), category(&mut r2, 3));
            assert_eq!(c1, c2);
            let p1 = profunctor(&mut r1, &c1, &c1, 3, "p");
            let p2 = profunctor(&mut r2, &c2, &c2, 3, "p");
            assert_eq!(p1, p2);
            assert!(p1.max_set_size() <= 3);
        }
    }

    #[test]
    fn parallel_pairs_are_natural() {
        let mut rng = seeded(1);
        for _ in 0..20 {
            let c = category(&mut rng, 3);
            let d = category(&mut rng, 3);
            let m = profunctor(&mut rng, &c, &d, 3, "m");
            let (alpha, beta) = parallel_pair(&mut rng, &m, 4, "g");
            assert!(alpha.is_natural() && beta.is_natural());
            assert_eq!(alpha.source(), beta.source());
        }
    }

    #[test]
    fn diagrams_over_small_shapes() {
        let mut rng = seeded(2);
        for shape in [FinCategory::interval(), FinCategory::simplex(2)] {
            let shape = Arc::new(shape);
            for _ in 0..10 {
                let d = diagram(&mut rng, &shape, 2);
                assert_eq!(d.fibers().len(), shape.object_count());
            }
        }
    }

    #[test]
    fn chain_generators() {
        let mut rng = seeded(3);
        for _ in 0..20 {
            let a = small_complex(&mut rng, 3);
            assert!(is_quasi_iso(&quasi_iso(&mut rng, &a, 3)));
            let _ = any_chain_map(&mut rng, 3);
            let (f, g, h) = cone_triple(&mut rng, 2);
            assert_eq!(*h.to_map(), g.after(&f).unwrap());
        }
    }
}
