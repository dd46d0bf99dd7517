//! Smith normal form with unimodular transforms, and the lattice questions
//! answered by it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `U d V = S` with `S` diagonal, nonnegative and `s₁ | s₂ | ⋯`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub input: IntMatrix,
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfDecomposition {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k).map(|i| self.s.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Recomputes every stated property: the product, diagonal shape,
    /// signs, divisibility, inverses and unit determinants.
    pub fn verify(&self) -> Result<(), String> {
        if &(&self.u * &self.input) * &self.v != self.s {
            return Err("U d V differs from S".into());
        }
        let (m, n) = self.s.shape();
        for r in 0..m {
            for c in 0..n {
                if r != c && !self.s.get(r, c).is_zero() {
                    return Err(format!("S has an off-diagonal entry at ({r},{c})"));
                }
            }
        }
        let diag: Vec<BigInt> = (0..m.min(n)).map(|i| self.s.get(i, i).clone()).collect();
        if diag.iter().any(Signed::is_negative) {
            return Err("S has a negative diagonal entry".into());
        }
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            if !ok {
                return Err(format!("divisibility fails between {} and {}", w[0], w[1]));
            }
        }
        if &self.u * &self.u_inv != IntMatrix::identity(m) || &self.v * &self.v_inv != IntMatrix::identity(n) {
            return Err("stored inverses are wrong".into());
        }
        if self.u.determinant().abs() != BigInt::one() || self.v.determinant().abs() != BigInt::one() {
            return Err("U or V is not unimodular".into());
        }
        Ok(())
    }
}

/// Smith normal form. Pivots on the smallest nonzero absolute value of the
/// remaining block and reduces by Euclidean division.
pub fn smith_normal_form(d: &IntMatrix) -> SnfDecomposition {
    let (m, n) = d.shape();
    let mut s = d.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut v_inv = IntMatrix::identity(n);

    // row ops: S ← E S, U ← E U, U⁻¹ ← U⁻¹ E⁻¹; column ops mirror them
    let row_add = |s: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, dst: usize, src: usize, k: &BigInt| {
        s.add_row(dst, src, k);
        u.add_row(dst, src, k);
        ui.add_col(src, dst, &-k);
    };
    let col_add = |s: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst: usize, src: usize, k: &BigInt| {
        s.add_col(dst, src, k);
        v.add_col(dst, src, k);
        vi.add_row(src, dst, &-k);
    };

    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for r in t..m {
                for c in t..n {
                    let x = s.get(r, c);
                    if !x.is_zero() && pivot.is_none_or(|(pr, pc)| x.abs() < s.get(pr, pc).abs()) {
                        pivot = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = pivot else {
                return finish(d, s, u, v, u_inv, v_inv);
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            u_inv.swap_cols(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);
            v_inv.swap_rows(t, pc);

            let mut clean = true;
            for r in t + 1..m {
                if s.get(r, t).is_zero() {
                    continue;
                }
                let q = s.get(r, t).div_floor(s.get(t, t));
                row_add(&mut s, &mut u, &mut u_inv, r, t, &-q);
                clean &= s.get(r, t).is_zero();
            }
            for c in t + 1..n {
                if s.get(t, c).is_zero() {
                    continue;
                }
                let q = s.get(t, c).div_floor(s.get(t, t));
                col_add(&mut s, &mut v, &mut v_inv, c, t, &-q);
                clean &= s.get(t, c).is_zero();
            }
            if !clean {
                continue;
            }
            let p = s.get(t, t).clone();
            let bad = (t + 1..m).find(|&r| (t + 1..n).any(|c| !s.get(r, c).is_multiple_of(&p)));
            match bad {
                Some(r) => row_add(&mut s, &mut u, &mut u_inv, t, r, &BigInt::one()),
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    finish(d, s, u, v, u_inv, v_inv)
}

fn finish(d: &IntMatrix, s: IntMatrix, u: IntMatrix, v: IntMatrix, u_inv: IntMatrix, v_inv: IntMatrix) -> SnfDecomposition {
    SnfDecomposition { input: d.clone(), s, u, v, u_inv, v_inv }
}

/// A basis of `ker d` as the columns of the returned matrix, together with
/// the decomposition it came from.
pub fn kernel_basis(d: &IntMatrix) -> (IntMatrix, SnfDecomposition) {
    let snf = smith_normal_form(d);
    let r = snf.rank();
    let n = d.cols();
    (snf.v.submatrix(0, n, r, n), snf)
}

/// Coordinates, in the basis from [`kernel_basis`], of columns known to lie
/// in `ker d`.
pub fn kernel_coordinates(snf: &SnfDecomposition, columns: &IntMatrix) -> IntMatrix {
    let r = snf.rank();
    let n = snf.v.rows();
    let full = &snf.v_inv * columns;
    debug_assert!(full.submatrix(0, r, 0, full.cols()).is_zero(), "columns outside the kernel");
    full.submatrix(r, n, 0, full.cols())
}

/// An integer solution of `d w = x`, if any.
pub fn solve(snf: &SnfDecomposition, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let ux = snf.u.mul_vec(x);
    let r = snf.rank();
    if ux[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let n = snf.v.rows();
    let mut z = vec![BigInt::zero(); n];
    for i in 0..r {
        let (q, rem) = ux[i].div_rem(snf.s.get(i, i));
        if !rem.is_zero() {
            return None;
        }
        z[i] = q;
    }
    Some(snf.v.mul_vec(&z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &IntMatrix) -> Vec<i64> {
        let snf = smith_normal_form(m);
        snf.verify().unwrap();
        let k = m.rows().min(m.cols());
        (0..k).map(|i| i64::try_from(snf.s.get(i, i)).unwrap()).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(diag(&IntMatrix::zeros(2, 3)), vec![0, 0]);
        assert_eq!(diag(&IntMatrix::from_rows(&[vec![2]])), vec![2]);
        assert_eq!(diag(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]])), vec![2, 4]);
        assert_eq!(diag(&IntMatrix::from_rows(&[vec![-3]])), vec![3]);
        assert_eq!(diag(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])), vec![1, 6]);
        assert!(smith_normal_form(&IntMatrix::zeros(0, 4)).verify().is_ok());
    }

    #[test]
    fn kernel_and_solve() {
        let d = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 2, 2]]);
        let (k, _) = kernel_basis(&d);
        assert_eq!(k.cols(), 1);
        assert!((&d * &k).is_zero());
        let snf = smith_normal_form(&IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(solve(&snf, &[BigInt::from(4)]), Some(vec![BigInt::from(2)]));
        assert_eq!(solve(&snf, &[BigInt::from(3)]), None);
    }
}
