//! Smith normal form of integer matrices via Bezout row/column operations.
//! Matrices here are small (Heegaard intersection matrices), so plain i128
//! arithmetic with checked products is plenty.

/// Result of a Smith normal form computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries d1 | d2 | ..., all positive.
    pub factors: Vec<i128>,
    pub rank: usize,
    pub nrows: usize,
    pub ncols: usize,
}

impl SmithForm {
    /// Invariant factors > 1 (the torsion part of the cokernel).
    pub fn torsion(&self) -> Vec<i128> {
        self.factors.iter().copied().filter(|&d| d > 1).collect()
    }

    /// Free rank of the cokernel of the presented map Z^ncols -> Z^nrows.
    pub fn cokernel_rank(&self) -> usize {
        self.nrows - self.rank
    }
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in SNF")
}

fn gcdx(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        return (a.abs(), s, 0);
    }
    let (g, s, t) = gcdx(b, a.rem_euclid(b));
    (g, t, s - checked_mul(a.div_euclid(b), t))
}

/// Smith normal form over Z. Only the diagonal is returned; the
/// transformation matrices are not needed by any caller.
pub fn smith_normal_form(mat: &[Vec<i128>]) -> SmithForm {
    let nrows = mat.len();
    let ncols = mat.first().map(|r| r.len()).unwrap_or(0);
    assert!(mat.iter().all(|r| r.len() == ncols));
    let mut a: Vec<Vec<i128>> = mat.to_vec();

    let mut t = 0;
    while t < nrows.min(ncols) {
        // find a pivot in the lower-right block
        let pivot = (t..nrows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].unsigned_abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            let mut clean = true;
            // clear column t with Bezout row ops
            for i in t + 1..nrows {
                if a[i][t] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t], a[i][t]);
                let (g, s, u) = gcdx(x, y);
                let (p, q) = (x / g, y / g);
                for j in t..ncols {
                    let (rt, ri) = (a[t][j], a[i][j]);
                    a[t][j] = checked_mul(s, rt) + checked_mul(u, ri);
                    a[i][j] = checked_mul(-q, rt) + checked_mul(p, ri);
                }
                clean = false;
            }
            // clear row t with Bezout column ops
            for j in t + 1..ncols {
                if a[t][j] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t], a[t][j]);
                let (g, s, u) = gcdx(x, y);
                let (p, q) = (x / g, y / g);
                for row in a.iter_mut().take(nrows).skip(t) {
                    let (ct, cj) = (row[t], row[j]);
                    row[t] = checked_mul(s, ct) + checked_mul(u, cj);
                    row[j] = checked_mul(-q, ct) + checked_mul(p, cj);
                }
                clean = false;
            }
            if clean {
                break;
            }
        }
        t += 1;
    }

    let mut diag: Vec<i128> = (0..nrows.min(ncols)).map(|i| a[i][i].abs()).collect();
    // enforce the divisibility chain d1 | d2 | ...
    let r = diag.iter().filter(|&&d| d != 0).count();
    diag.retain(|&d| d != 0);
    loop {
        let mut settled = true;
        for i in 0..r.saturating_sub(1) {
            let (x, y) = (diag[i], diag[i + 1]);
            if y % x != 0 {
                let (g, _, _) = gcdx(x, y);
                let l = checked_mul(x / g, y);
                diag[i] = g;
                diag[i + 1] = l;
                settled = false;
            }
        }
        if settled {
            break;
        }
    }
    diag.sort_unstable();

    SmithForm {
        rank: r,
        factors: diag,
        nrows,
        ncols,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[&[i128]]) -> SmithForm {
        smith_normal_form(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn one_by_one() {
        assert_eq!(snf(&[&[0]]).factors, Vec::<i128>::new());
        assert_eq!(snf(&[&[-2]]).factors, vec![2]);
        assert_eq!(snf(&[&[1]]).factors, vec![1]);
    }

    #[test]
    fn divisibility_chain() {
        let f = snf(&[&[2, 0], &[0, 3]]);
        assert_eq!(f.factors, vec![1, 6]);
        let f = snf(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]);
        assert_eq!(f.factors, vec![2, 2, 60]);
        for w in f.factors.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn known_matrix() {
        // standard example: cokernel Z/3 x Z
        let f = snf(&[&[1, 2], &[2, 1], &[1, -1]]);
        assert_eq!(f.rank, 2);
        assert_eq!(f.torsion(), vec![3]);
    }

    #[test]
    fn det_equals_torsion_order() {
        // |det| = product of invariant factors for square nonsingular
        let m: Vec<Vec<i128>> = vec![vec![3, 1, 0], vec![-1, 2, 4], vec![0, 5, 2]];
        let det: i128 = 3 * (2 * 2 - 4 * 5) - 1 * (-1 * 2 - 0) + 0;
        let f = smith_normal_form(&m);
        let prod: i128 = f.factors.iter().product();
        assert_eq!(prod, det.abs());
    }

    #[test]
    fn rectangular() {
        let f = snf(&[&[2, 4, 6]]);
        assert_eq!(f.rank, 1);
        assert_eq!(f.factors, vec![2]);
        assert_eq!(f.cokernel_rank(), 0);
        let f = snf(&[&[2], &[4], &[6]]);
        assert_eq!(f.cokernel_rank(), 2);
    }
}
