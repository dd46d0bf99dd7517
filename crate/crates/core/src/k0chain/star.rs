//! Block matrices with graded blocks and the alternating product
//! `(N ⋆ M)_{us} = Σ_t (−1)^{grade t} N_{ut} M_{ts}`.

use num_bigint::BigInt;

use super::complex::ChainMap;
use super::matrix::IntMatrix;
use super::ComplexError;

/// One block of rows or columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub label: String,
    pub size: usize,
    pub grade: i64,
}

impl Block {
    pub fn new(label: impl Into<String>, size: usize, grade: i64) -> Self {
        Block { label: label.into(), size, grade }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGradedMatrix {
    rows: Vec<Block>,
    cols: Vec<Block>,
    matrix: IntMatrix,
}

fn offsets(blocks: &[Block]) -> Vec<usize> {
    let mut out = vec![0];
    for b in blocks {
        out.push(out.last().unwrap() + b.size);
    }
    out
}

impl BlockGradedMatrix {
    pub fn new(rows: Vec<Block>, cols: Vec<Block>, matrix: IntMatrix) -> Result<Self, ComplexError> {
        let (r, c) = (offsets(&rows), offsets(&cols));
        if matrix.shape() != (*r.last().unwrap(), *c.last().unwrap()) {
            return Err(ComplexError::BlockMismatch("matrix shape differs from the block sizes".into()));
        }
        Ok(BlockGradedMatrix { rows, cols, matrix })
    }

    /// Square matrix from a grid of blocks over one block list.
    pub fn from_blocks(blocks: Vec<Block>, grid: &[Vec<IntMatrix>]) -> Result<Self, ComplexError> {
        let off = offsets(&blocks);
        let n = *off.last().unwrap();
        let mut m = IntMatrix::zeros(n, n);
        for (u, row) in grid.iter().enumerate() {
            for (s, b) in row.iter().enumerate() {
                if b.shape() != (blocks[u].size, blocks[s].size) {
                    return Err(ComplexError::BlockMismatch(format!("block ({u},{s}) has shape {:?}", b.shape())));
                }
                for i in 0..b.rows() {
                    for j in 0..b.cols() {
                        m.set(off[u] + i, off[s] + j, b.get(i, j).clone());
                    }
                }
            }
        }
        Self::new(blocks.clone(), blocks, m)
    }

    pub fn rows(&self) -> &[Block] {
        &self.rows
    }

    pub fn cols(&self) -> &[Block] {
        &self.cols
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn block(&self, u: usize, s: usize) -> IntMatrix {
        let (r, c) = (offsets(&self.rows), offsets(&self.cols));
        self.matrix.submatrix(r[u], r[u + 1], c[s], c[s + 1])
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `diag((−1)^{grade})` over the given blocks.
    pub fn sign_matrix(blocks: &[Block]) -> IntMatrix {
        let off = offsets(blocks);
        let mut m = IntMatrix::zeros(off[blocks.len()], off[blocks.len()]);
        for (t, b) in blocks.iter().enumerate() {
            let sign = BigInt::from(if b.grade.rem_euclid(2) == 0 { 1 } else { -1 });
            for i in off[t]..off[t + 1] {
                m.set(i, i, sign.clone());
            }
        }
        m
    }
}

/// `(N ⋆ M)_{us} = Σ_t (−1)^{grade t} N_{ut} M_{ts}`, summed block by block.
pub fn star_multiply(n: &BlockGradedMatrix, m: &BlockGradedMatrix) -> Result<BlockGradedMatrix, ComplexError> {
    if n.cols != m.rows {
        return Err(ComplexError::BlockMismatch("middle blocks differ in size or grade".into()));
    }
    let (ro, co) = (offsets(&n.rows), offsets(&m.cols));
    let mut out = IntMatrix::zeros(*ro.last().unwrap(), *co.last().unwrap());
    for u in 0..n.rows.len() {
        for s in 0..m.cols.len() {
            let mut acc = IntMatrix::zeros(n.rows[u].size, m.cols[s].size);
            for (t, b) in n.cols.iter().enumerate() {
                acc = &acc + &(&n.block(u, t) * &m.block(t, s)).signed(b.grade);
            }
            for i in 0..acc.rows() {
                for j in 0..acc.cols() {
                    out.set(ro[u] + i, co[s] + j, acc.get(i, j).clone());
                }
            }
        }
    }
    BlockGradedMatrix::new(n.rows.clone(), m.cols.clone(), out)
}

/// `[[d_A, 0], [f, d_B]]` with blocks `A` (grade 0) and `B` (grade 1), from
/// the total differentials; no signs anywhere.
pub fn unsigned_cone_matrix(f: &ChainMap) -> BlockGradedMatrix {
    let (a, b) = (f.source(), f.target());
    let (ra, rb) = (a.total_rank(), b.total_rank());
    let mut total_f = IntMatrix::zeros(rb, ra);
    let (oa, ob) = (a.offsets(), b.offsets());
    for n in a.degrees() {
        if n < b.lo() || n > b.hi() {
            continue;
        }
        let m = f.at(n);
        let (r0, c0) = (ob[(n - b.lo()) as usize], oa[(n - a.lo()) as usize]);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                total_f.set(r0 + i, c0 + j, m.get(i, j).clone());
            }
        }
    }
    let blocks = vec![Block::new("A", ra, 0), Block::new("B", rb, 1)];
    let grid = vec![
        vec![a.total_differential(), IntMatrix::zeros(ra, rb)],
        vec![total_f, b.total_differential()],
    ];
    BlockGradedMatrix::from_blocks(blocks, &grid).expect("cone blocks")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::k0chain::complex::ChainComplex;

    #[test]
    fn identity_blocks_leave_m_unchanged() {
        let blocks = vec![Block::new("x", 2, 0), Block::new("y", 1, 0)];
        let id = BlockGradedMatrix::new(blocks.clone(), blocks.clone(), IntMatrix::identity(3)).unwrap();
        let m = BlockGradedMatrix::new(blocks.clone(), blocks, IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]])).unwrap();
        assert_eq!(star_multiply(&id, &m).unwrap(), m);
    }

    #[test]
    fn conjugation_identity() {
        let blocks = vec![Block::new("x", 1, 0), Block::new("y", 2, 1)];
        let n = BlockGradedMatrix::new(blocks.clone(), blocks.clone(), IntMatrix::from_rows(&[vec![1, -2, 0], vec![3, 1, 1], vec![0, 4, 2]])).unwrap();
        let star = star_multiply(&n, &n).unwrap();
        let d = BlockGradedMatrix::sign_matrix(&blocks);
        assert_eq!(*star.matrix(), &(n.matrix() * &d) * n.matrix());
    }

    #[test]
    fn unsigned_cone_squares_to_zero() {
        let c = ChainComplex::new(0, 1, vec![1, 1], vec![IntMatrix::zeros(0, 1), IntMatrix::from_rows(&[vec![2]])]).unwrap();
        let f = ChainMap::scalar(&c, 5);
        let n = unsigned_cone_matrix(&f);
        assert!(star_multiply(&n, &n).unwrap().is_zero());
        // the ordinary square is not zero: f d + d f ≠ 0
        assert!(!(n.matrix() * n.matrix()).is_zero());
    }

    #[test]
    fn mismatched_blocks_are_rejected() {
        let a = BlockGradedMatrix::new(vec![Block::new("x", 1, 0)], vec![Block::new("x", 1, 0)], IntMatrix::identity(1)).unwrap();
        let b = BlockGradedMatrix::new(vec![Block::new("x", 1, 1)], vec![Block::new("x", 1, 0)], IntMatrix::identity(1)).unwrap();
        assert!(matches!(star_multiply(&a, &b), Err(ComplexError::BlockMismatch(_))));
    }
}
