//! Property tests against oracles written independently of the library.

use num_traits::ToPrimitive;
use proptest::prelude::*;

use laxmat::decat::{cardinality_matrix, CountMode};
use laxmat::k0chain::snf::smith_normal_form;
use laxmat::k0chain::star::{star_multiply, unsigned_cone_matrix};
use laxmat::k0chain::{cone, hom_complex, homology, tot, Bicomplex, ChainComplex, ChainMap, GradedMap, IntMatrix};
use laxmat::profunctor::{compose_profunctors, hom_profunctor};
use laxmat::random;

mod common;

use common::{coend_sizes, invariant_factors_oracle, rank_oracle, to_i128};

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r).prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_matches_determinantal_divisors(m in small_matrix()) {
        let snf = smith_normal_form(&m);
        prop_assert!(snf.verify().is_ok());
        let got: Vec<i128> = snf.invariant_factors().iter().map(|x| x.to_i128().unwrap()).collect();
        prop_assert_eq!(got, invariant_factors_oracle(&to_i128(&m), m.rows(), m.cols()));
        prop_assert_eq!(snf.rank(), rank_oracle(&m));
    }

    #[test]
    fn composite_sizes_match_union_find(seed in seeds()) {
        let mut rng = random::seeded(seed);
        let cats: Vec<_> = (0..3).map(|_| random::category(&mut rng, 3)).collect();
        let m = random::profunctor(&mut rng, &cats[0], &cats[1], 3, "m");
        let n = random::profunctor(&mut rng, &cats[1], &cats[2], 3, "n");
        let p = compose_profunctors(&n, &m).unwrap();
        for ((e, c), size) in coend_sizes(&n, &m) {
            prop_assert_eq!(p.set_size(e, c), size);
        }
    }

    #[test]
    fn hom_is_a_unit_up_to_counts(seed in seeds()) {
        let mut rng = random::seeded(seed);
        let (a, b) = (random::category(&mut rng, 3), random::category(&mut rng, 3));
        let m = random::profunctor(&mut rng, &a, &b, 3, "m");
        let counts = cardinality_matrix(&m, CountMode::Raw);
        prop_assert_eq!(&cardinality_matrix(&compose_profunctors(&hom_profunctor(&b), &m).unwrap(), CountMode::Raw), &counts);
        prop_assert_eq!(&cardinality_matrix(&compose_profunctors(&m, &hom_profunctor(&a)).unwrap(), CountMode::Raw), &counts);
    }

    #[test]
    fn free_homology_rank_matches_rational_rank(seed in seeds()) {
        let mut rng = random::seeded(seed);
        let c = random::small_complex(&mut rng, 3);
        for n in c.lo() - 1..=c.hi() + 1 {
            let expected = c.rank(n) as i64 - rank_oracle(&c.d(n)) as i64 - rank_oracle(&c.d(n + 1)) as i64;
            prop_assert_eq!(homology(&c, n).free as i64, expected);
        }
    }

    #[test]
    fn euler_characteristic_is_additive(seed in seeds()) {
        let mut rng = random::seeded(seed);
        let f = random::any_chain_map(&mut rng, 3);
        let (a, b) = (f.source(), f.target());
        prop_assert_eq!(cone(&f).complex.euler_char(), b.euler_char() - a.euler_char());
        prop_assert_eq!(a.direct_sum(b).euler_char(), a.euler_char() + b.euler_char());
        for k in -2i64..=2 {
            let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            prop_assert_eq!(a.shift(k).euler_char(), sign * a.euler_char());
        }
        // alternating sum of homology ranks
        let h: i64 = a.degrees().map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * homology(a, n).free as i64).sum();
        prop_assert_eq!(h, a.euler_char());
    }

    #[test]
    fn two_term_tot_is_the_desuspended_cone(seed in seeds()) {
        let mut rng = random::seeded(seed);
        let f = random::any_chain_map(&mut rng, 3);
        let t = tot(&Bicomplex::new(vec![f.source().clone(), f.target().clone()], vec![f.clone()]).unwrap());
        let k = cone(&f).complex.shift(-1);
        for n in t.lo().min(k.lo()) - 1..=t.hi().max(k.hi()) + 1 {
            prop_assert_eq!(t.rank(n), k.rank(n));
            prop_assert_eq!(t.d(n), k.d(n));
        }
    }

    #[test]
    fn unsigned_cone_star_squares_to_zero(seed in seeds()) {
        let mut rng = random::seeded(seed);
        let f = random::any_chain_map(&mut rng, 3);
        let n = unsigned_cone_matrix(&f);
        prop_assert!(star_multiply(&n, &n).unwrap().is_zero());
        let d = cone(&f).complex.total_differential();
        prop_assert!((&d * &d).is_zero());
    }

    #[test]
    fn cycles_and_chain_maps_correspond(seed in seeds()) {
        let mut rng = random::seeded(seed);
        let a = random::small_complex(&mut rng, 2);
        let b = random::small_complex(&mut rng, 2);
        let f = random::chain_map(&mut rng, &a, &b);
        let h = hom_complex(&a, &b);
        let v = h.chain_map_to_cycle(&f);
        prop_assert_eq!(h.cycle_to_chain_map(&v).unwrap(), f);
        let g = random::graded_map(&mut rng, &a, &b, 1, 3);
        prop_assert!(is_zero_map(&h.delta(&h.delta(&g))));
    }
}

fn is_zero_map(g: &GradedMap) -> bool {
    g.source().degrees().all(|n| g.at(n).is_zero())
}

/// `ℤ --×2--> ℤ` in degrees 1 → 0.
fn doubling() -> ChainComplex {
    ChainComplex::new(0, 1, vec![1, 1], vec![IntMatrix::zeros(0, 1), IntMatrix::from_rows(&[vec![2]])]).unwrap()
}

#[test]
fn hom_complex_cycles_match_brute_force_chain_maps() {
    let c = doubling();
    let h = hom_complex(&c, &c);
    let (mut cycles, mut chain_maps) = (0, 0);
    for g0 in -3i64..=3 {
        for g1 in -3i64..=3 {
            let g = GradedMap::from_fn(&c, &c, 0, |n| IntMatrix::from_rows(&[vec![if n == 0 { g0 } else { g1 }]])).unwrap();
            let is_cycle = is_zero_map(&h.delta(&g));
            // d f₁ = f₀ d with f_k = (−1)^k g_k
            let brute = 2 * (-g1) == g0 * 2;
            assert_eq!(is_cycle, brute, "g = ({g0}, {g1})");
            assert_eq!(is_cycle, h.cycle_to_chain_map(&h.coords_of(&g)).is_ok());
            cycles += is_cycle as usize;
            chain_maps += ChainMap::from_fn(&c, &c, |n| IntMatrix::from_rows(&[vec![if n == 0 { g0 } else { g1 }]])).is_ok() as usize;
        }
    }
    assert_eq!((cycles, chain_maps), (7, 7));
    // the degree-0 part of the hom complex has one coordinate per entry
    assert_eq!(h.complex().rank(0), 2);
}

#[test]
fn gluing_oracle_agrees_on_the_negative_example() {
    let (contra, co) = laxmat::decat::gluing_pair();
    let p = compose_profunctors(&contra, &co).unwrap();
    assert_eq!(coend_sizes(&contra, &co)[&(0, 0)], 1);
    assert_eq!(p.total_elements(), 1);
    let product = cardinality_matrix(&contra, CountMode::Raw).multiply(&cardinality_matrix(&co, CountMode::Raw)).unwrap();
    assert_eq!(product.entries, vec![vec![2]]);
}

#[test]
fn snf_oracle_sanity() {
    let a = vec![vec![2, 4], vec![6, 8]];
    assert_eq!(invariant_factors_oracle(&a, 2, 2), vec![2, 4]);
    assert_eq!(rank_oracle(&IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]])), 1);
}
