//! Affine subspaces of Q⁴ in a canonical form, and fixed loci of affine maps.

use std::fmt;

use num_traits::Zero;

use super::affine::RatAffine;
use super::linalg::{rank, rref, solve};
use super::rat::{fmt_rat, Rat};

/// `basepoint + span(directions)`. Directions are in reduced row echelon
/// form and the basepoint is zero in every pivot column, so two equal
/// subspaces have identical fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    basepoint: Vec<Rat>,
    directions: Vec<Vec<Rat>>,
}

impl AffineSubspace {
    pub fn new(basepoint: Vec<Rat>, directions: &[Vec<Rat>]) -> Self {
        let n = basepoint.len();
        let (dirs, pivots) = rref(directions, n);
        let mut p = basepoint;
        for (row, &c) in dirs.iter().zip(&pivots) {
            let k = p[c].clone();
            if k.is_zero() {
                continue;
            }
            for j in 0..n {
                p[j] -= &k * &row[j];
            }
        }
        AffineSubspace {
            basepoint: p,
            directions: dirs,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basepoint.len()
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn basepoint(&self) -> &[Rat] {
        &self.basepoint
    }

    pub fn directions(&self) -> &[Vec<Rat>] {
        &self.directions
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        let diff: Vec<Rat> = x.iter().zip(&self.basepoint).map(|(a, b)| a - b).collect();
        let mut rows = self.directions.clone();
        rows.push(diff);
        rank(&rows, self.ambient_dim()) == self.dim()
    }

    /// Image under an affine map of Q⁴.
    pub fn image(&self, f: &RatAffine) -> AffineSubspace {
        let p: [Rat; 4] = std::array::from_fn(|i| self.basepoint[i].clone());
        let base = f.apply(&p).to_vec();
        let dirs: Vec<Vec<Rat>> = self
            .directions
            .iter()
            .map(|d| {
                let v: [Rat; 4] = std::array::from_fn(|i| d[i].clone());
                f.apply_linear(&v).to_vec()
            })
            .collect();
        AffineSubspace::new(base, &dirs)
    }

    /// Sample points: the basepoint and basepoint + each direction.
    pub fn sample_points(&self) -> Vec<Vec<Rat>> {
        let mut pts = vec![self.basepoint.clone()];
        for d in &self.directions {
            pts.push(self.basepoint.iter().zip(d).map(|(a, b)| a + b).collect());
        }
        pts
    }
}

impl fmt::Display for AffineSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |xs: &[Rat]| {
            xs.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
        };
        write!(f, "({})", v(&self.basepoint))?;
        for d in &self.directions {
            write!(f, " + R({})", v(d))?;
        }
        Ok(())
    }
}

/// Solution set of `f(x) = x`.
pub fn fixed_locus(f: &RatAffine) -> Option<AffineSubspace> {
    let rows: Vec<Vec<Rat>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    if i == j {
                        &f.linear[i][j] - Rat::from_integer(1.into())
                    } else {
                        f.linear[i][j].clone()
                    }
                })
                .collect()
        })
        .collect();
    let rhs: Vec<Rat> = f.translation.iter().map(|t| -t).collect();
    let x = solve(&rows, &rhs, 4)?;
    let dirs = super::linalg::kernel(&rows, 4);
    Some(AffineSubspace::new(x, &dirs))
}
