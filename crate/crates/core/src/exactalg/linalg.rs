//! Dense rational linear algebra: row reduction, rank, kernels, solving.

use num_traits::{One, Zero};

use super::rat::Rat;

pub type RatMatrix = Vec<Vec<Rat>>;

/// Reduced row echelon form; returns the nonzero rows and the pivot columns.
pub fn rref(rows: &[Vec<Rat>], ncols: usize) -> (RatMatrix, Vec<usize>) {
    let mut m: RatMatrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..ncols {
                let d = &factor * &m[r][j];
                m[i][j] -= d;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : Mx = 0}`.
pub fn kernel(rows: &[Vec<Rat>], ncols: usize) -> RatMatrix {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `Mx = b`, or `None` when inconsistent.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    let aug: RatMatrix = rows
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat::{int, rat};

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = vec![
            vec![int(1), int(2), int(3), int(4)],
            vec![int(2), int(4), int(6), int(8)],
            vec![int(0), int(1), rat(1, 2), int(0)],
        ];
        assert_eq!(rank(&m, 4), 2);
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                assert!(dot(row, v).is_zero());
            }
        }
    }

    #[test]
    fn inconsistent_system() {
        let m = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(solve(&m, &[int(1), int(3)], 2).is_none());
        let x = solve(&m, &[int(1), int(2)], 2).unwrap();
        assert_eq!(&x[0] + &x[1], int(1));
    }
}
