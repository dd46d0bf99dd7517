//! Bounded complexes of free abelian groups, homological indexing
//! (`d_n: C_n → C_{n−1}`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use super::ComplexError;

/// A bounded complex with differentials over the window `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    hi: i64,
    ranks: Vec<usize>,
    diffs: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Validates shapes and `d ∘ d = 0`.
    pub fn new(lo: i64, hi: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self, ComplexError> {
        if hi < lo {
            return Err(ComplexError::UnboundedComplex(format!("empty window [{lo}, {hi}]")));
        }
        let len = (hi - lo + 1) as usize;
        if ranks.len() != len || diffs.len() != len {
            return Err(ComplexError::DimensionMismatch(format!("window [{lo}, {hi}] needs {len} ranks and differentials")));
        }
        let c = ChainComplex { lo, hi, ranks, diffs };
        for n in lo..=hi {
            let want = (c.rank(n - 1), c.rank(n));
            if c.diffs[(n - lo) as usize].shape() != want {
                return Err(ComplexError::DimensionMismatch(format!(
                    "d_{n} is {:?}, expected {want:?}",
                    c.diffs[(n - lo) as usize].shape()
                )));
            }
        }
        for n in lo + 1..=hi {
            if !(&c.d(n - 1) * &c.d(n)).is_zero() {
                return Err(ComplexError::DifferentialSquareNonzero { degree: n });
            }
        }
        Ok(c)
    }

    /// Builds from a degree range and a differential rule; `d(n)` is asked
    /// for every `n` in the window.
    pub fn from_fn(
        lo: i64,
        hi: i64,
        rank: impl Fn(i64) -> usize,
        d: impl Fn(i64) -> IntMatrix,
    ) -> Result<Self, ComplexError> {
        let ranks = (lo..=hi).map(&rank).collect::<Vec<_>>();
        let diffs = (lo..=hi)
            .map(|n| if n == lo { IntMatrix::zeros(0, rank(n)) } else { d(n) })
            .collect();
        Self::new(lo, hi, ranks, diffs)
    }

    pub fn zero() -> Self {
        ChainComplex { lo: 0, hi: 0, ranks: vec![0], diffs: vec![IntMatrix::zeros(0, 0)] }
    }

    /// `ℤ^r` concentrated in degree `n`.
    pub fn concentrated(n: i64, r: usize) -> Self {
        ChainComplex { lo: n, hi: n, ranks: vec![r], diffs: vec![IntMatrix::zeros(0, r)] }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn rank(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi {
            0
        } else {
            self.ranks[(n - self.lo) as usize]
        }
    }

    /// `d_n: C_n → C_{n−1}`, zero outside the window.
    pub fn d(&self, n: i64) -> IntMatrix {
        if n < self.lo || n > self.hi {
            IntMatrix::zeros(self.rank(n - 1), self.rank(n))
        } else {
            self.diffs[(n - self.lo) as usize].clone()
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.total_rank() == 0
    }

    /// `Σ (−1)^n rank C_n`.
    pub fn euler_char(&self) -> i64 {
        self.degrees().map(|n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * self.rank(n) as i64).sum()
    }

    /// `C[k]_n = C_{n−k}` with differential `(−1)^k d`.
    pub fn shift(&self, k: i64) -> Self {
        ChainComplex {
            lo: self.lo + k,
            hi: self.hi + k,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.signed(k)).collect(),
        }
    }

    /// Degreewise direct sum with block-diagonal differential.
    pub fn direct_sum(&self, other: &ChainComplex) -> Self {
        let (lo, hi) = (self.lo.min(other.lo), self.hi.max(other.hi));
        Self::from_fn(lo, hi, |n| self.rank(n) + other.rank(n), |n| IntMatrix::block_diag(&self.d(n), &other.d(n)))
            .expect("sum of complexes")
    }

    /// The same complex over a wider window.
    pub fn widened(&self, lo: i64, hi: i64) -> Self {
        let (lo, hi) = (lo.min(self.lo), hi.max(self.hi));
        Self::from_fn(lo, hi, |n| self.rank(n), |n| self.d(n)).expect("widening keeps a complex")
    }

    /// All differentials as one square matrix on `⊕_n C_n`, degrees ascending.
    pub fn total_differential(&self) -> IntMatrix {
        let offsets = self.offsets();
        let size = self.total_rank();
        let mut out = IntMatrix::zeros(size, size);
        for n in self.lo + 1..=self.hi {
            let d = self.d(n);
            let (r0, c0) = (offsets[(n - 1 - self.lo) as usize], offsets[(n - self.lo) as usize]);
            for r in 0..d.rows() {
                for c in 0..d.cols() {
                    out.set(r0 + r, c0 + c, d.get(r, c).clone());
                }
            }
        }
        out
    }

    pub(crate) fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ranks.len());
        let mut acc = 0;
        for r in &self.ranks {
            out.push(acc);
            acc += r;
        }
        out
    }
}

/// A family of matrices `C_n → D_{n+degree}` indexed by the source window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: ChainComplex,
    target: ChainComplex,
    degree: i64,
    comps: Vec<IntMatrix>,
}

impl GradedMap {
    pub fn new(source: ChainComplex, target: ChainComplex, degree: i64, comps: Vec<IntMatrix>) -> Result<Self, ComplexError> {
        if comps.len() != source.ranks.len() {
            return Err(ComplexError::DimensionMismatch("one component per source degree is required".into()));
        }
        for (i, m) in comps.iter().enumerate() {
            let n = source.lo + i as i64;
            let want = (target.rank(n + degree), source.rank(n));
            if m.shape() != want {
                return Err(ComplexError::DimensionMismatch(format!("component at {n} is {:?}, expected {want:?}", m.shape())));
            }
        }
        Ok(GradedMap { source, target, degree, comps })
    }

    pub fn from_fn(source: &ChainComplex, target: &ChainComplex, degree: i64, f: impl Fn(i64) -> IntMatrix) -> Result<Self, ComplexError> {
        let comps = source.degrees().map(f).collect();
        Self::new(source.clone(), target.clone(), degree, comps)
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex, degree: i64) -> Self {
        Self::from_fn(source, target, degree, |n| IntMatrix::zeros(target.rank(n + degree), source.rank(n))).expect("zero map")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// The component out of degree `n`, zero outside the source window.
    pub fn at(&self, n: i64) -> IntMatrix {
        if n < self.source.lo || n > self.source.hi {
            IntMatrix::zeros(self.target.rank(n + self.degree), self.source.rank(n))
        } else {
            self.comps[(n - self.source.lo) as usize].clone()
        }
    }
}

/// A degree-zero map commuting with the differentials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap(GradedMap);

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, comps: Vec<IntMatrix>) -> Result<Self, ComplexError> {
        Self::from_graded(GradedMap::new(source, target, 0, comps)?)
    }

    pub fn from_fn(source: &ChainComplex, target: &ChainComplex, f: impl Fn(i64) -> IntMatrix) -> Result<Self, ComplexError> {
        Self::from_graded(GradedMap::from_fn(source, target, 0, f)?)
    }

    pub fn from_graded(g: GradedMap) -> Result<Self, ComplexError> {
        if g.degree != 0 {
            return Err(ComplexError::DimensionMismatch("chain maps have degree 0".into()));
        }
        let f = ChainMap(g);
        for n in f.source().lo..=f.source().hi + 1 {
            if &f.target().d(n) * &f.at(n) != &f.at(n - 1) * &f.source().d(n) {
                return Err(ComplexError::NotAChainMap { degree: n });
            }
        }
        Ok(f)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        Self::from_fn(c, c, |n| IntMatrix::identity(c.rank(n))).expect("identity")
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        ChainMap(GradedMap::zero(source, target, 0))
    }

    /// `k · id`.
    pub fn scalar(c: &ChainComplex, k: i64) -> Self {
        Self::from_fn(c, c, |n| IntMatrix::scalar(c.rank(n), k)).expect("scalar map")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.0.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.0.target
    }

    pub fn at(&self, n: i64) -> IntMatrix {
        self.0.at(n)
    }

    pub fn graded(&self) -> &GradedMap {
        &self.0
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &ChainMap) -> Result<ChainMap, ComplexError> {
        if inner.target() != self.source() {
            return Err(ComplexError::Mismatch("chain maps are not composable".into()));
        }
        Self::from_fn(inner.source(), self.target(), |n| &self.at(n) * &inner.at(n))
    }
}

/// `H: A → B` of degree `+1` with `d H + H d = to − from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    from: ChainMap,
    to: ChainMap,
    h: GradedMap,
}

impl Homotopy {
    pub fn new(from: ChainMap, to: ChainMap, h: GradedMap) -> Result<Self, ComplexError> {
        if from.source() != to.source() || from.target() != to.target() {
            return Err(ComplexError::Mismatch("homotopy between maps with different endpoints".into()));
        }
        if h.degree != 1 || h.source != *from.source() || h.target != *from.target() {
            return Err(ComplexError::Mismatch("homotopy components have the wrong endpoints or degree".into()));
        }
        let (a, b) = (from.source(), from.target());
        for n in a.degrees() {
            let lhs = &(&b.d(n + 1) * &h.at(n)) + &(&h.at(n - 1) * &a.d(n));
            if lhs != &to.at(n) - &from.at(n) {
                return Err(ComplexError::NotANullHomotopy { degree: n });
            }
        }
        Ok(Homotopy { from, to, h })
    }

    /// A null-homotopy of `f`: a homotopy from the zero map to `f`.
    pub fn null(f: &ChainMap, h: GradedMap) -> Result<Self, ComplexError> {
        Self::new(ChainMap::zero(f.source(), f.target()), f.clone(), h)
    }

    pub fn from_map(&self) -> &ChainMap {
        &self.from
    }

    pub fn to_map(&self) -> &ChainMap {
        &self.to
    }

    pub fn components(&self) -> &GradedMap {
        &self.h
    }

    pub fn at(&self, n: i64) -> IntMatrix {
        self.h.at(n)
    }
}

/// `Cone(f)` with its inclusion of `B` and projection onto `A[1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub complex: ChainComplex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
}

/// `Cone(f)_n = A_{n−1} ⊕ B_n` with differential `[[−d_A, 0], [−f, d_B]]`.
pub fn cone(f: &ChainMap) -> Cone {
    let (a, b) = (f.source(), f.target());
    let (lo, hi) = ((a.lo + 1).min(b.lo), (a.hi + 1).max(b.hi));
    let complex = ChainComplex::from_fn(
        lo,
        hi,
        |n| a.rank(n - 1) + b.rank(n),
        |n| {
            let zero = IntMatrix::zeros(a.rank(n - 2), b.rank(n));
            IntMatrix::block2(&-&a.d(n - 1), &zero, &-&f.at(n - 1), &b.d(n))
        },
    )
    .expect("the cone differential squares to zero");
    let inclusion = ChainMap::from_fn(b, &complex, |n| IntMatrix::zeros(a.rank(n - 1), b.rank(n)).vcat(&IntMatrix::identity(b.rank(n))))
        .expect("inclusion into the cone");
    let shifted = a.shift(1);
    let projection = ChainMap::from_fn(&complex, &shifted, |n| {
        IntMatrix::identity(a.rank(n - 1)).hcat(&IntMatrix::zeros(a.rank(n - 1), b.rank(n)))
    })
    .expect("projection out of the cone");
    Cone { complex, inclusion, projection }
}

/// The complex of graded maps `A → B` with `(δg)_k = d g_k + (−1)^n g_{k−1} d`
/// on degree-`n` maps. Coordinates list, for each source degree `k`
/// ascending, the entries of `g_k` row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomComplex {
    source: ChainComplex,
    target: ChainComplex,
    complex: ChainComplex,
}

pub fn hom_complex(a: &ChainComplex, b: &ChainComplex) -> HomComplex {
    let (lo, hi) = (b.lo - a.hi, b.hi - a.lo);
    let rank = |n: i64| a.degrees().map(|k| a.rank(k) * b.rank(k + n)).sum::<usize>();
    let proto = HomComplex { source: a.clone(), target: b.clone(), complex: ChainComplex::zero() };
    let complex = ChainComplex::from_fn(lo, hi, rank, |n| {
        let cols = (0..rank(n))
            .map(|i| {
                let mut e = vec![BigInt::zero(); rank(n)];
                e[i] = BigInt::one();
                let g = proto.graded_from_coords(n, &e);
                let dg = GradedMap::from_fn(a, b, n - 1, |k| {
                    &(&b.d(k + n) * &g.at(k)) + &(&g.at(k - 1) * &a.d(k)).signed(n)
                })
                .expect("shapes of δg");
                proto.coords_of(&dg)
            })
            .collect::<Vec<_>>();
        IntMatrix::from_columns(rank(n - 1), &cols)
    })
    .expect("δ squares to zero");
    HomComplex { complex, ..proto }
}

impl HomComplex {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// The graded map of degree `n` with the given coordinates.
    pub fn graded_from_coords(&self, n: i64, v: &[BigInt]) -> GradedMap {
        let (a, b) = (&self.source, &self.target);
        let mut pos = 0;
        let comps = a
            .degrees()
            .map(|k| {
                let (r, c) = (b.rank(k + n), a.rank(k));
                let m = IntMatrix::from_fn(r, c, |i, j| v[pos + i * c + j].clone());
                pos += r * c;
                m
            })
            .collect();
        GradedMap::new(a.clone(), b.clone(), n, comps).expect("coordinate shapes")
    }

    pub fn coords_of(&self, g: &GradedMap) -> Vec<BigInt> {
        let mut out = Vec::new();
        for k in self.source.degrees() {
            let m = g.at(k);
            for i in 0..m.rows() {
                out.extend(m.row(i).iter().cloned());
            }
        }
        out
    }

    /// `δ` applied to a degree-`n` graded map.
    pub fn delta(&self, g: &GradedMap) -> GradedMap {
        let v = self.coords_of(g);
        let dv = self.complex.d(g.degree()).mul_vec(&v);
        self.graded_from_coords(g.degree() - 1, &dv)
    }

    /// A degree-0 cycle `g` becomes the chain map `f_k = (−1)^k g_k`.
    pub fn cycle_to_chain_map(&self, v: &[BigInt]) -> Result<ChainMap, ComplexError> {
        let g = self.graded_from_coords(0, v);
        ChainMap::from_fn(&self.source, &self.target, |k| g.at(k).signed(k))
    }

    /// Inverse of [`HomComplex::cycle_to_chain_map`].
    pub fn chain_map_to_cycle(&self, f: &ChainMap) -> Vec<BigInt> {
        let g = GradedMap::from_fn(&self.source, &self.target, 0, |k| f.at(k).signed(k)).expect("same shapes");
        self.coords_of(&g)
    }
}

/// A finite sequence `X₀ → X₁ → ⋯ → X_m` of chain maps with zero composites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicomplex {
    terms: Vec<ChainComplex>,
    maps: Vec<ChainMap>,
}

impl Bicomplex {
    pub fn new(terms: Vec<ChainComplex>, maps: Vec<ChainMap>) -> Result<Self, ComplexError> {
        if terms.is_empty() || maps.len() + 1 != terms.len() {
            return Err(ComplexError::DimensionMismatch("a sequence of m+1 complexes needs m maps".into()));
        }
        for (i, f) in maps.iter().enumerate() {
            if *f.source() != terms[i] || *f.target() != terms[i + 1] {
                return Err(ComplexError::Mismatch(format!("map {i} does not connect terms {i} and {}", i + 1)));
            }
        }
        for (i, w) in maps.windows(2).enumerate() {
            let (f, g) = (&w[0], &w[1]);
            for n in f.source().degrees() {
                if !(&g.at(n) * &f.at(n)).is_zero() {
                    return Err(ComplexError::CompositeNonzero { index: i, degree: n });
                }
            }
        }
        Ok(Bicomplex { terms, maps })
    }

    pub fn terms(&self) -> &[ChainComplex] {
        &self.terms
    }

    pub fn maps(&self) -> &[ChainMap] {
        &self.maps
    }
}

/// `Tot_n = ⊕_i X_{i, n+i}` with `D = f + (−1)^i d_{X_i}`.
pub fn tot(x: &Bicomplex) -> ChainComplex {
    let terms = &x.terms;
    let lo = terms.iter().enumerate().map(|(i, c)| c.lo - i as i64).min().expect("non-empty");
    let hi = terms.iter().enumerate().map(|(i, c)| c.hi - i as i64).max().expect("non-empty");
    let rank = |n: i64| terms.iter().enumerate().map(|(i, c)| c.rank(n + i as i64)).sum::<usize>();
    ChainComplex::from_fn(lo, hi, rank, |n| {
        let mut out = IntMatrix::zeros(rank(n - 1), rank(n));
        let (mut col, mut row_of) = (0, Vec::with_capacity(terms.len()));
        let mut acc = 0;
        for (j, c) in terms.iter().enumerate() {
            row_of.push(acc);
            acc += c.rank(n - 1 + j as i64);
        }
        for (i, c) in terms.iter().enumerate() {
            let q = n + i as i64;
            let mut paste = |r0: usize, m: &IntMatrix| {
                for r in 0..m.rows() {
                    for k in 0..m.cols() {
                        out.set(r0 + r, col + k, m.get(r, k).clone());
                    }
                }
            };
            paste(row_of[i], &c.d(q).signed(i as i64));
            if i + 1 < terms.len() {
                paste(row_of[i + 1], &x.maps[i].at(q));
            }
            col += c.rank(q);
        }
        out
    })
    .expect("the total differential squares to zero")
}

/// The universal property of the cone: `φ = [−H_{n−1} | g_n]`, a chain map
/// `Cone(f) → C` built from `g: B → C` and a null-homotopy `H` of `g ∘ f`.
pub fn cone_from_data(f: &ChainMap, g: &ChainMap, h: &Homotopy) -> Result<ChainMap, ComplexError> {
    if g.source() != f.target() {
        return Err(ComplexError::Mismatch("g must start where f ends".into()));
    }
    let gf = g.after(f)?;
    if *h.to_map() != gf || !h.from_map().graded().comps.iter().all(IntMatrix::is_zero) {
        return Err(ComplexError::Mismatch("H is not a null-homotopy of g∘f".into()));
    }
    let c = cone(f);
    ChainMap::from_fn(&c.complex, g.target(), |n| (-&h.at(n - 1)).hcat(&g.at(n)))
}

/// Reads `g` and `H` off the blocks of `φ: Cone(f) → C`.
pub fn cone_to_data(f: &ChainMap, phi: &ChainMap) -> Result<(ChainMap, Homotopy), ComplexError> {
    let c = cone(f);
    if *phi.source() != c.complex {
        return Err(ComplexError::Mismatch("φ does not start at Cone(f)".into()));
    }
    let (a, b, target) = (f.source(), f.target(), phi.target());
    let g = ChainMap::from_fn(b, target, |n| {
        let p = phi.at(n);
        p.submatrix(0, p.rows(), a.rank(n - 1), p.cols())
    })?;
    let h = GradedMap::from_fn(a, target, 1, |n| {
        let p = phi.at(n + 1);
        -&p.submatrix(0, p.rows(), 0, a.rank(n))
    })?;
    let gf = g.after(f)?;
    let h = Homotopy::null(&gf, h)?;
    Ok((g, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn times(k: i64) -> ChainMap {
        let z = ChainComplex::concentrated(0, 1);
        ChainMap::scalar(&z, k)
    }

    /// `ℤ --×2--> ℤ` in degrees 1, 0.
    pub(crate) fn two_term() -> ChainComplex {
        ChainComplex::new(0, 1, vec![1, 1], vec![IntMatrix::zeros(0, 1), IntMatrix::from_rows(&[vec![2]])]).unwrap()
    }

    #[test]
    fn rejects_bad_complexes() {
        let bad = ChainComplex::new(0, 1, vec![1, 1], vec![IntMatrix::zeros(0, 1), IntMatrix::zeros(2, 1)]);
        assert!(matches!(bad, Err(ComplexError::DimensionMismatch(_))));
        let d = IntMatrix::from_rows(&[vec![1]]);
        let bad = ChainComplex::new(0, 2, vec![1, 1, 1], vec![IntMatrix::zeros(0, 1), d.clone(), d]);
        assert!(matches!(bad, Err(ComplexError::DifferentialSquareNonzero { degree: 2 })));
    }

    #[test]
    fn shift_and_sum() {
        assert!(ChainComplex::zero().shift(5).is_zero());
        let c = two_term();
        assert_eq!(c.shift(1).shift(-1), c);
        assert_eq!(c.shift(1).d(2), IntMatrix::from_rows(&[vec![-2]]));
        let s = c.direct_sum(&c.shift(1));
        assert_eq!((s.rank(0), s.rank(1), s.rank(2)), (1, 2, 1));
    }

    #[test]
    fn cone_examples() {
        let c = two_term();
        let k = cone(&ChainMap::identity(&c));
        assert_eq!(k.complex.euler_char(), 0);
        let z = cone(&ChainMap::zero(&c, &c));
        assert_eq!(z.complex, c.shift(1).direct_sum(&c));
        let two = cone(&times(2));
        assert_eq!(two.complex.d(1), IntMatrix::from_rows(&[vec![-2]]));
    }

    #[test]
    fn hom_complex_examples() {
        let z = ChainComplex::concentrated(0, 1);
        let h = hom_complex(&z, &z);
        assert_eq!((h.complex().lo(), h.complex().hi(), h.complex().rank(0)), (0, 0, 1));
        assert!(hom_complex(&ChainComplex::zero(), &z).complex().is_zero());
        let c = two_term();
        let h = hom_complex(&c, &c);
        assert_eq!((h.complex().lo(), h.complex().hi()), (-1, 1));
        assert_eq!((h.complex().rank(-1), h.complex().rank(0), h.complex().rank(1)), (1, 2, 1));
    }

    #[test]
    fn cycles_are_signed_chain_maps() {
        let c = two_term();
        let h = hom_complex(&c, &c);
        let id = ChainMap::identity(&c);
        let v = h.chain_map_to_cycle(&id);
        assert!(h.complex().d(0).mul_vec(&v).iter().all(Zero::is_zero));
        assert_eq!(h.cycle_to_chain_map(&v).unwrap(), id);
    }

    #[test]
    fn tot_of_one_and_two_terms() {
        let c = two_term();
        assert_eq!(tot(&Bicomplex::new(vec![c.clone()], vec![]).unwrap()), c);
        let f = ChainMap::scalar(&c, 3);
        let t = tot(&Bicomplex::new(vec![c.clone(), c.clone()], vec![f.clone()]).unwrap());
        assert_eq!(t, cone(&f).complex.shift(-1));
    }

    #[test]
    fn tot_rejects_nonzero_composite() {
        let c = two_term();
        let id = ChainMap::identity(&c);
        let bad = Bicomplex::new(vec![c.clone(), c.clone(), c.clone()], vec![id.clone(), id]);
        assert!(matches!(bad, Err(ComplexError::CompositeNonzero { .. })));
    }

    #[test]
    fn cone_bijection_trivial_and_identity() {
        let c = two_term();
        let f = ChainMap::identity(&c);
        let target = ChainComplex::concentrated(0, 2);
        let g = ChainMap::zero(&c, &target);
        let h = Homotopy::null(&g.after(&f).unwrap(), GradedMap::zero(&c, &target, 1)).unwrap();
        let phi = cone_from_data(&f, &g, &h).unwrap();
        assert!(phi.graded().comps.iter().all(IntMatrix::is_zero));

        let k = cone(&f);
        let id = ChainMap::identity(&k.complex);
        let (g, h) = cone_to_data(&f, &id).unwrap();
        assert_eq!(g, k.inclusion);
        assert_eq!(cone_from_data(&f, &g, &h).unwrap(), id);
    }

    #[test]
    fn bad_homotopy_is_rejected() {
        let z = ChainComplex::concentrated(0, 1);
        let f = ChainMap::identity(&z);
        let h = GradedMap::zero(&z, &z, 1);
        assert!(matches!(Homotopy::null(&f, h), Err(ComplexError::NotANullHomotopy { degree: 0 })));
    }
}
