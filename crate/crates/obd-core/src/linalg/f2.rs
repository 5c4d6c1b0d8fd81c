//! Dense bit-packed vectors and matrices over GF(2), with an elimination
//! routine that either solves `A x = b` or produces a left-kernel
//! certificate `y` with `y^T A = 0`, `y^T b = 1` proving infeasibility.

/// Bit-packed vector over GF(2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Vec {
    blocks: Vec<u64>,
    len: usize,
}

impl F2Vec {
    pub fn zero(len: usize) -> Self {
        F2Vec {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.blocks[i / 64] |= mask;
        } else {
            self.blocks[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.blocks[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &F2Vec) -> bool {
        assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = F2Vec::zero(len);
        for i in idx {
            v.flip(i);
        }
        v
    }
}

/// Row-major dense GF(2) matrix.
#[derive(Clone, Debug)]
pub struct F2Matrix {
    rows: Vec<F2Vec>,
    ncols: usize,
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug)]
pub enum F2Solution {
    /// A particular solution `x`.
    Solution(F2Vec),
    /// Certificate `y` with `y^T A = 0` and `y^T b = 1`.
    Inconsistent(F2Vec),
}

impl F2Matrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        F2Matrix {
            rows: vec![F2Vec::zero(ncols); nrows],
            ncols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.rows[i].set(j, v);
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i].flip(j);
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.rows[i]
    }

    /// `A x` for a column vector `x`.
    pub fn mul_vec(&self, x: &F2Vec) -> F2Vec {
        assert_eq!(self.ncols, x.len());
        let mut out = F2Vec::zero(self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<F2Vec> = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.ncols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Solve `A x = b` by Gaussian elimination, tracking row operations so
    /// an infeasibility certificate can be returned.
    pub fn solve(&self, b: &F2Vec) -> F2Solution {
        assert_eq!(self.nrows(), b.len());
        let m = self.nrows();
        let n = self.ncols;
        let mut a: Vec<F2Vec> = self.rows.clone();
        let mut rhs = b.clone();
        // left multiplier, starts as identity
        let mut left: Vec<F2Vec> = (0..m).map(|i| F2Vec::from_indices(m, [i])).collect();

        let mut pivot_col_of_row: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..m).find(|&r| a[r].get(col)) else {
                continue;
            };
            a.swap(rank, p);
            left.swap(rank, p);
            if rhs.get(rank) != rhs.get(p) {
                let (x, y) = (rhs.get(rank), rhs.get(p));
                rhs.set(rank, y);
                rhs.set(p, x);
            }
            for r in 0..m {
                if r != rank && a[r].get(col) {
                    let (head, tail) = a.split_at_mut(rank.max(r));
                    if r < rank {
                        head[r].xor_assign(&tail[0]);
                    } else {
                        tail[0].xor_assign(&head[rank]);
                    }
                    if rhs.get(rank) {
                        rhs.flip(r);
                    }
                    let (lh, lt) = left.split_at_mut(rank.max(r));
                    if r < rank {
                        lh[r].xor_assign(&lt[0]);
                    } else {
                        lt[0].xor_assign(&lh[rank]);
                    }
                }
            }
            pivot_col_of_row.push(col);
            rank += 1;
            if rank == m {
                break;
            }
        }

        // any zero row of A with rhs 1 certifies inconsistency
        for r in rank..m {
            if rhs.get(r) {
                return F2Solution::Inconsistent(left[r].clone());
            }
        }

        let mut x = F2Vec::zero(n);
        for (r, &col) in pivot_col_of_row.iter().enumerate() {
            if rhs.get(r) {
                x.set(col, true);
            }
        }
        F2Solution::Solution(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[usize]], ncols: usize) -> F2Matrix {
        let mut m = F2Matrix::zero(rows.len(), ncols);
        for (i, r) in rows.iter().enumerate() {
            for &j in r.iter() {
                m.flip(i, j);
            }
        }
        m
    }

    #[test]
    fn solve_simple() {
        // x0 + x1 = 1, x1 = 1 -> x = (0, 1)
        let a = mat(&[&[0, 1], &[1]], 2);
        let b = F2Vec::from_indices(2, [0, 1]);
        match a.solve(&b) {
            F2Solution::Solution(x) => {
                assert_eq!(a.mul_vec(&x), b);
                assert!(!x.get(0));
                assert!(x.get(1));
            }
            F2Solution::Inconsistent(_) => panic!("expected solution"),
        }
    }

    #[test]
    fn solve_inconsistent_has_certificate() {
        // rows: x0, x0, rhs (1, 0): infeasible
        let a = mat(&[&[0], &[0]], 1);
        let b = F2Vec::from_indices(2, [0]);
        match a.solve(&b) {
            F2Solution::Solution(_) => panic!("expected inconsistency"),
            F2Solution::Inconsistent(y) => {
                // y^T A = 0 and y . b = 1
                for j in 0..a.ncols() {
                    let col_dot = y
                        .ones()
                        .fold(false, |acc, r| acc ^ a.get(r, j));
                    assert!(!col_dot);
                }
                assert!(y.dot(&b));
            }
        }
    }

    #[test]
    fn solve_random_roundtrip() {
        // deterministic pseudo-random fill; every consistent system solves back
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..50 {
            let m = 1 + (next() % 8) as usize;
            let n = 1 + (next() % 8) as usize;
            let mut a = F2Matrix::zero(m, n);
            for i in 0..m {
                for j in 0..n {
                    if next() & 1 == 1 {
                        a.set(i, j, true);
                    }
                }
            }
            let mut x0 = F2Vec::zero(n);
            for j in 0..n {
                if next() & 1 == 1 {
                    x0.set(j, true);
                }
            }
            let b = a.mul_vec(&x0);
            match a.solve(&b) {
                F2Solution::Solution(x) => assert_eq!(a.mul_vec(&x), b, "trial {trial}"),
                F2Solution::Inconsistent(_) => panic!("consistent system reported infeasible"),
            }
        }
    }

    #[test]
    fn rank_counts_pivots() {
        let a = mat(&[&[0, 1], &[1, 2], &[0, 2]], 3);
        // row3 = row1 + row2
        assert_eq!(a.rank(), 2);
    }
}
