//! Integer linear systems via column Hermite reduction, lattice bases in
//! row Hermite normal form, and integer roots of low-degree polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::poly::{Monomial, Poly, Var};
use super::rat::{big_int, common_denominator, to_integer, Rat};

pub type IntMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("unsupported polynomial condition: {0}")]
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiophSystem {
    matrix: IntMatrix,
    rhs: Vec<BigInt>,
    names: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiophSolution {
    NoSolution,
    /// `particular + Σ λ_i kernel[i]` for all integer `λ`. The kernel is in
    /// row Hermite normal form and the particular solution is reduced
    /// modulo it.
    Solvable {
        particular: Vec<BigInt>,
        kernel: IntMatrix,
    },
}

impl DiophSolution {
    pub fn is_solvable(&self) -> bool {
        matches!(self, DiophSolution::Solvable { .. })
    }

    pub fn particular(&self) -> Option<&[BigInt]> {
        match self {
            DiophSolution::Solvable { particular, .. } => Some(particular),
            DiophSolution::NoSolution => None,
        }
    }
}

impl DiophSystem {
    pub fn new(matrix: IntMatrix, rhs: Vec<BigInt>, names: Vec<String>) -> Result<Self, DiophError> {
        if matrix.len() != rhs.len() {
            return Err(DiophError::Dimension(format!(
                "{} rows but {} right-hand sides",
                matrix.len(),
                rhs.len()
            )));
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != names.len()) {
            return Err(DiophError::Dimension(format!(
                "row of length {} for {} unknowns",
                row.len(),
                names.len()
            )));
        }
        Ok(DiophSystem { matrix, rhs, names })
    }

    pub fn from_i64(matrix: &[Vec<i64>], rhs: &[i64], names: &[&str]) -> Result<Self, DiophError> {
        Self::new(
            matrix
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            rhs.iter().map(|&x| BigInt::from(x)).collect(),
            names.iter().map(|s| s.to_string()).collect(),
        )
    }

    /// Builds the system `p_i = 0` from polynomials of degree at most one in
    /// `unknowns` with rational coefficients; each equation is scaled to
    /// integers. Fails if a coefficient still involves other variables.
    pub fn from_linear_polys(eqs: &[Poly], unknowns: &[Var]) -> Result<Self, DiophError> {
        let mut matrix = Vec::new();
        let mut rhs = Vec::new();
        for eq in eqs {
            if eq.degree() > 1 || eq.vars().iter().any(|v| !unknowns.contains(v)) {
                return Err(DiophError::Unsupported(format!("not linear over the unknowns: {eq}")));
            }
            let coeffs: Vec<Rat> = unknowns
                .iter()
                .map(|v| eq.coeff(&Monomial::var(*v)))
                .collect();
            let c = eq.constant_term();
            let den = common_denominator(coeffs.iter().chain(std::iter::once(&c)));
            let scale = big_int(&den);
            matrix.push(coeffs.iter().map(|x| (x * &scale).to_integer()).collect());
            rhs.push(-(c * scale).to_integer());
        }
        Self::new(matrix, rhs, unknowns.iter().map(Var::name).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_unknowns(&self) -> usize {
        self.names.len()
    }

    pub fn satisfied_by(&self, x: &[BigInt]) -> bool {
        self.matrix.iter().zip(&self.rhs).all(|(row, b)| {
            row.iter().zip(x).map(|(a, v)| a * v).sum::<BigInt>() == *b
        })
    }

    pub fn solve(&self) -> DiophSolution {
        let n = self.num_unknowns();
        let (h, u, rank) = column_hermite(&self.matrix, n);
        let mut y: Vec<BigInt> = vec![BigInt::zero(); n];
        let mut col = 0;
        for (row, b) in h.iter().zip(&self.rhs) {
            let partial: BigInt = (0..col).map(|j| &row[j] * &y[j]).sum();
            let residual = b - partial;
            if col < rank && !row[col].is_zero() {
                let (q, r) = residual.div_rem(&row[col]);
                if !r.is_zero() {
                    return DiophSolution::NoSolution;
                }
                y[col] = q;
                col += 1;
            } else if !residual.is_zero() {
                return DiophSolution::NoSolution;
            }
        }
        let x: Vec<BigInt> = (0..n)
            .map(|i| (0..n).map(|j| &u[i][j] * &y[j]).sum())
            .collect();
        let kernel_gens: IntMatrix = (rank..n)
            .map(|j| (0..n).map(|i| u[i][j].clone()).collect())
            .collect();
        let kernel = hnf_rows(&kernel_gens, n);
        let particular = reduce_mod_lattice(&x, &kernel);
        DiophSolution::Solvable { particular, kernel }
    }

    /// All solutions with every coordinate in `[-bound, bound]`.
    pub fn brute_force(&self, bound: i64) -> Vec<Vec<BigInt>> {
        let n = self.num_unknowns();
        let mut out = Vec::new();
        for_each_point(n, -bound, bound, &mut |x| {
            let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            if self.satisfied_by(&xb) {
                out.push(xb);
            }
        });
        out
    }
}

/// Calls `f` on every integer point of the cube `[lo, hi]^n`.
pub fn for_each_point(n: usize, lo: i64, hi: i64, f: &mut dyn FnMut(&[i64])) {
    let mut x = vec![lo; n];
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if x[i] < hi {
                x[i] += 1;
                break;
            }
            x[i] = lo;
            i += 1;
        }
    }
}

/// Returns `(H, U, rank)` with `H = A·U` in lower column echelon form and
/// `U` unimodular.
fn column_hermite(a: &IntMatrix, n: usize) -> (IntMatrix, IntMatrix, usize) {
    let mut h = a.clone();
    let mut u: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut col = 0;
    for i in 0..h.len() {
        if col == n {
            break;
        }
        for j in col + 1..n {
            if h[i][j].is_zero() {
                continue;
            }
            let a_ic = h[i][col].clone();
            let a_ij = h[i][j].clone();
            let e = a_ic.extended_gcd(&a_ij);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let p = &a_ij / &g;
            let q = &a_ic / &g;
            for m in [&mut h, &mut u] {
                for row in m.iter_mut() {
                    let c = row[col].clone();
                    let d = row[j].clone();
                    row[col] = &x * &c + &y * &d;
                    row[j] = -&p * &c + &q * &d;
                }
            }
        }
        if !h[i][col].is_zero() {
            if h[i][col].is_negative() {
                for m in [&mut h, &mut u] {
                    for row in m.iter_mut() {
                        row[col] = -row[col].clone();
                    }
                }
            }
            col += 1;
        }
    }
    (h, u, col)
}

/// Row Hermite normal form of the lattice spanned by `gens`: positive
/// pivots, entries above each pivot reduced into `[0, pivot)`, zero rows
/// dropped.
pub fn hnf_rows(gens: &IntMatrix, n: usize) -> IntMatrix {
    let mut m: IntMatrix = gens.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..n {
        if r == m.len() {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (r..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let p = *nonzero
                .iter()
                .min_by_key(|&&i| m[i][c].abs())
                .expect("nonempty");
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                for j in 0..n {
                    let d = &q * &m[r][j];
                    m[i][j] -= d;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if q.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let d = &q * &m[r][j];
                    m[i][j] -= d;
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

fn pivot_col(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Canonical coset representative of `x` modulo a lattice in row HNF.
pub fn reduce_mod_lattice(x: &[BigInt], hnf: &IntMatrix) -> Vec<BigInt> {
    let mut x = x.to_vec();
    for row in hnf {
        let Some(c) = pivot_col(row) else { continue };
        let q = x[c].div_floor(&row[c]);
        if q.is_zero() {
            continue;
        }
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi -= &q * ri;
        }
    }
    x
}

/// Whether `x` lies in the lattice with row HNF basis `hnf`.
pub fn in_lattice(x: &[BigInt], hnf: &IntMatrix) -> bool {
    reduce_mod_lattice(x, hnf).iter().all(Zero::is_zero)
}

/// Integer roots of `a x² + b x + c`, or `None` when it vanishes identically.
pub fn integer_roots_quadratic(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<Vec<BigInt>> {
    if a.is_zero() {
        if b.is_zero() {
            return if c.is_zero() { None } else { Some(vec![]) };
        }
        let (q, r) = (-c).div_rem(b);
        return Some(if r.is_zero() { vec![q] } else { vec![] });
    }
    let disc = b * b - BigInt::from(4) * a * c;
    if disc.is_negative() {
        return Some(vec![]);
    }
    let s = disc.sqrt();
    if &s * &s != disc {
        return Some(vec![]);
    }
    let mut roots = Vec::new();
    for num in [-b + &s, -b - &s] {
        let den = BigInt::from(2) * a;
        let (q, r) = num.div_rem(&den);
        if r.is_zero() && !roots.contains(&q) {
            roots.push(q);
        }
    }
    roots.sort();
    Some(roots)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let limit = n.to_u64().expect("divisor search bound fits in u64");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= limit {
        if limit % d == 0 {
            out.push(BigInt::from(d));
            out.push(BigInt::from(limit / d));
        }
        d += 1;
    }
    let neg: Vec<BigInt> = out.iter().map(|x| -x).collect();
    out.extend(neg);
    out.sort();
    out.dedup();
    out
}

/// Integer-coefficient form of a polynomial in `vars`: monomial → integer.
fn integral_form(p: &Poly, vars: &[Var]) -> Result<BTreeMap<Monomial, BigInt>, DiophError> {
    if p.vars().iter().any(|v| !vars.contains(v)) {
        return Err(DiophError::Unsupported(format!("foreign variables in {p}")));
    }
    let den = common_denominator(p.terms().map(|(_, c)| c));
    let scale = big_int(&den);
    Ok(p.terms()
        .map(|(m, c)| (m.clone(), to_integer(&(c * &scale)).expect("cleared denominators")))
        .collect())
}

fn eval_int(form: &BTreeMap<Monomial, BigInt>, vars: &[Var], x: &[BigInt]) -> BigInt {
    form.iter()
        .map(|(m, c)| {
            m.powers().iter().fold(c.clone(), |acc, (v, e)| {
                let i = vars.iter().position(|w| w == v).expect("known variable");
                acc * x[i].pow(*e)
            })
        })
        .sum()
}

/// Finds an integer zero of a polynomial of degree at most two in `vars`,
/// or proves there is none. Handles the shapes that arise in this crate:
/// a variable occurring only linearly, a product of two variables with the
/// rest linear, and univariate quadratics.
pub fn integer_zero(p: &Poly, vars: &[Var]) -> Result<Option<Vec<BigInt>>, DiophError> {
    if p.degree() > 2 {
        return Err(DiophError::Unsupported(format!("degree {} > 2: {p}", p.degree())));
    }
    let form = integral_form(p, vars)?;
    let n = vars.len();
    let live: Vec<usize> = (0..n).filter(|&i| p.vars().contains(&vars[i])).collect();
    let zero = vec![BigInt::zero(); n];
    if live.is_empty() {
        return Ok(eval_int(&form, vars, &zero).is_zero().then_some(zero));
    }
    let coeff_of = |m: &Monomial| form.get(m).cloned().unwrap_or_else(BigInt::zero);

    // a variable that only occurs in a linear term
    for &i in &live {
        let v = vars[i];
        let nonlinear = form.keys().any(|m| m.exponent(v) > 0 && m.degree() > 1);
        if nonlinear {
            continue;
        }
        let c = coeff_of(&Monomial::var(v));
        let modulus = c.abs();
        let others: Vec<usize> = live.iter().copied().filter(|&j| j != i).collect();
        let period = modulus.to_i64().ok_or_else(|| DiophError::Unsupported("huge modulus".into()))?;
        if others.len() > 2 || period.saturating_pow(others.len() as u32) > 1_000_000 {
            return Err(DiophError::Unsupported(format!("residue search too large for {p}")));
        }
        let mut found = None;
        for_each_point(others.len(), 0, period - 1, &mut |r| {
            if found.is_some() {
                return;
            }
            let mut x = zero.clone();
            for (k, &j) in others.iter().enumerate() {
                x[j] = BigInt::from(r[k]);
            }
            let rest = eval_int(&form, vars, &x);
            if rest.is_multiple_of(&c) {
                x[i] = -(rest / &c);
                found = Some(x);
            }
        });
        return Ok(found);
    }

    if live.len() == 1 {
        let i = live[0];
        let v = vars[i];
        let a = coeff_of(&Monomial::from_powers([(v, 2)]));
        let b = coeff_of(&Monomial::var(v));
        let c = coeff_of(&Monomial::one());
        let roots = integer_roots_quadratic(&a, &b, &c).expect("nonconstant");
        return Ok(roots.first().map(|r| {
            let mut x = zero.clone();
            x[i] = r.clone();
            x
        }));
    }

    if live.len() == 2 {
        // x (p y + q) + (r y² + s y + u) with x² absent
        for (xi, yi) in [(live[0], live[1]), (live[1], live[0])] {
            let (xv, yv) = (vars[xi], vars[yi]);
            if form.contains_key(&Monomial::from_powers([(xv, 2)])) {
                continue;
            }
            let pc = coeff_of(&Monomial::from_powers([(xv, 1), (yv, 1)]));
            let qc = coeff_of(&Monomial::var(xv));
            let rc = coeff_of(&Monomial::from_powers([(yv, 2)]));
            let sc = coeff_of(&Monomial::var(yv));
            let uc = coeff_of(&Monomial::one());
            let point = |x: BigInt, y: BigInt| {
                let mut pt = zero.clone();
                pt[xi] = x;
                pt[yi] = y;
                pt
            };
            let r_of = |y: &BigInt| &rc * y * y + &sc * y + &uc;
            // p y + q = 0 branch
            if (-&qc).is_multiple_of(&pc) {
                let y = -&qc / &pc;
                if r_of(&y).is_zero() {
                    return Ok(Some(point(BigInt::zero(), y)));
                }
            }
            let big_n = &rc * &qc * &qc - &sc * &pc * &qc + &uc * &pc * &pc;
            if !big_n.is_zero() {
                for k in divisors(&big_n) {
                    let num = &k - &qc;
                    if !num.is_multiple_of(&pc) {
                        continue;
                    }
                    let y = num / &pc;
                    let ry = r_of(&y);
                    if ry.is_multiple_of(&k) {
                        return Ok(Some(point(-(ry / &k), y)));
                    }
                }
                return Ok(None);
            }
            // Q = (p y + q)(p x + r y + w)/p with w = (s p - r q)/p; second
            // factor zero means p x + r y + (s p - r q)/p = 0.
            let p2 = &pc * &pc;
            let period = p2.abs().to_i64().ok_or_else(|| DiophError::Unsupported("huge modulus".into()))?;
            for y0 in 0..period {
                let y = BigInt::from(y0);
                let num = -(&rc * &y * &pc + &sc * &pc - &rc * &qc);
                if num.is_multiple_of(&p2) {
                    return Ok(Some(point(num / &p2, y)));
                }
            }
            return Ok(None);
        }
    }
    Err(DiophError::Unsupported(format!("no decision rule for {p}")))
}

/// Product of the pivots of the column Hermite form; the image lattice of
/// `a` contains this multiple of every integer vector in its span.
fn image_index_bound(a: &IntMatrix, n: usize) -> BigInt {
    let (h, _, rank) = column_hermite(a, n);
    let mut prod = BigInt::one();
    let mut col = 0;
    for row in &h {
        if col < rank && !row[col].is_zero() {
            prod *= row[col].abs();
            col += 1;
        }
    }
    prod
}

fn lcm_denominators<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> BigInt {
    let mut d = BigInt::one();
    for p in polys {
        d = d.lcm(&common_denominator(p.terms().map(|(_, c)| c)));
    }
    d
}

/// Solutions of a polynomial system projected to the `outer` unknowns, for
/// systems that are linear in the `inner` unknowns with constant
/// coefficients. The outer points that extend to a full solution are
/// `particular + Σ λ_i basis[i]` with `λ` in one of the listed residue
/// classes modulo `period`.
#[derive(Clone, Debug)]
pub struct Projection {
    eqs: Vec<Poly>,
    outer: Vec<Var>,
    inner: Vec<Var>,
    pub particular: Vec<BigInt>,
    pub basis: IntMatrix,
    pub period: i64,
    pub residues: Vec<Vec<i64>>,
}

const LAMBDA_BASE: u8 = 40;

/// Splits each equation as `M·inner + R(outer)`.
fn split_inner(eqs: &[Poly], inner: &[Var]) -> Result<(Vec<Vec<Rat>>, Vec<Poly>), DiophError> {
    let mut m = Vec::new();
    let mut r = Vec::new();
    for eq in eqs {
        let mut row = Vec::new();
        let mut rest = eq.clone();
        for v in inner {
            let c = eq.linear_coefficient(*v);
            let c = c
                .as_constant()
                .ok_or_else(|| DiophError::Unsupported(format!("{} has a nonconstant coefficient in {eq}", v.name())))?;
            rest = &rest - &(&Poly::var(*v) * &Poly::constant(c.clone()));
            row.push(c);
        }
        if rest.vars().iter().any(|v| inner.contains(v)) {
            return Err(DiophError::Unsupported(format!("not linear in the inner unknowns: {eq}")));
        }
        m.push(row);
        r.push(rest);
    }
    Ok((m, r))
}

fn point_subst<'a>(vars: &'a [Var], values: &'a [BigInt]) -> impl Fn(Var) -> Option<Rat> + 'a {
    move |v| vars.iter().position(|w| *w == v).map(|i| big_int(&values[i]))
}

/// Inner integer values completing `outer_values` to a solution.
pub fn lift_inner(eqs: &[Poly], outer: &[Var], outer_values: &[BigInt], inner: &[Var]) -> Result<Option<Vec<BigInt>>, DiophError> {
    let sub = point_subst(outer, outer_values);
    let fixed: Vec<Poly> = eqs.iter().map(|e| e.eval_partial(&sub)).collect();
    let sys = DiophSystem::from_linear_polys(&fixed, inner)?;
    Ok(sys.solve().particular().map(|p| p.to_vec()))
}

pub fn project(eqs: &[Poly], outer: &[Var], inner: &[Var]) -> Result<Option<Projection>, DiophError> {
    let (m, r) = split_inner(eqs, inner)?;
    // combinations killing the inner unknowns give conditions on the outer ones
    let mt: Vec<Vec<Rat>> = (0..inner.len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect();
    let left_null = super::linalg::kernel(&mt, eqs.len());
    let conditions: Vec<Poly> = left_null
        .iter()
        .map(|y| {
            y.iter().zip(&r).fold(Poly::zero(), |acc, (c, ri)| &acc + &ri.scale(c))
        })
        .collect();
    let sys = DiophSystem::from_linear_polys(&conditions, outer)?;
    let DiophSolution::Solvable { particular, kernel } = sys.solve() else {
        return Ok(None);
    };
    let k = kernel.len();
    let lambdas: Vec<Var> = (0..k).map(|i| Var::Unknown(LAMBDA_BASE + i as u8)).collect();
    let coords: Vec<Poly> = (0..outer.len())
        .map(|j| {
            kernel.iter().enumerate().fold(Poly::constant(big_int(&particular[j])), |acc, (i, row)| {
                &acc + &(&Poly::var(lambdas[i]) * &Poly::constant(big_int(&row[j])))
            })
        })
        .collect();
    let r_lambda: Vec<Poly> = r
        .iter()
        .map(|ri| ri.substitute(&|v| outer.iter().position(|w| *w == v).map(|j| coords[j].clone())))
        .collect();
    let m_polys: Vec<Poly> = m.iter().flatten().map(|c| Poly::constant(c.clone())).collect();
    let den = big_int(&lcm_denominators(m_polys.iter().chain(&r_lambda)));
    let m_int: IntMatrix = m
        .iter()
        .map(|row| row.iter().map(|c| (c * &den).to_integer()).collect())
        .collect();
    let r_int: Vec<Poly> = r_lambda.iter().map(|p| p.scale(&den)).collect();
    let period = image_index_bound(&m_int, inner.len())
        .to_i64()
        .ok_or_else(|| DiophError::Unsupported("period too large".into()))?;
    if period.saturating_pow(k as u32) > 1_000_000 {
        return Err(DiophError::Unsupported(format!("residue search of {period}^{k} points")));
    }
    let mut residues = Vec::new();
    for_each_point(k, 0, period - 1, &mut |lam| {
        let vals: Vec<BigInt> = lam.iter().map(|&x| BigInt::from(x)).collect();
        let sub = point_subst(&lambdas, &vals);
        let rhs: Vec<BigInt> = r_int
            .iter()
            .map(|p| -p.eval(&sub).expect("fully evaluated").to_integer())
            .collect();
        let sys = DiophSystem::new(m_int.clone(), rhs, inner.iter().map(Var::name).collect())
            .expect("consistent dimensions");
        if sys.solve().is_solvable() {
            residues.push(lam.to_vec());
        }
    });
    Ok(Some(Projection {
        eqs: eqs.to_vec(),
        outer: outer.to_vec(),
        inner: inner.to_vec(),
        particular,
        basis: kernel,
        period,
        residues,
    }))
}

impl Projection {
    pub fn outer_point(&self, lam: &[BigInt]) -> Vec<BigInt> {
        let mut x = self.particular.clone();
        for (l, row) in lam.iter().zip(&self.basis) {
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi += l * ri;
            }
        }
        x
    }

    /// One full solution `(outer, inner)`, if any.
    pub fn witness(&self) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        let lam: Vec<BigInt> = self.residues.first()?.iter().map(|&x| BigInt::from(x)).collect();
        let x = self.outer_point(&lam);
        let y = lift_inner(&self.eqs, &self.outer, &x, &self.inner)
            .expect("linear after fixing the outer unknowns")
            .expect("residue class was checked solvable");
        Some((x, y))
    }

    /// The projected solution set as a lattice in row HNF, assuming it is a
    /// subgroup (the origin solves the system). `None` if it is not closed
    /// under addition.
    pub fn lattice(&self) -> Option<IntMatrix> {
        if self.particular.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let k = self.basis.len();
        let mut gens: IntMatrix = self
            .residues
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        for i in 0..k {
            gens.push((0..k).map(|j| if i == j { BigInt::from(self.period) } else { BigInt::zero() }).collect());
        }
        let lam_basis = hnf_rows(&gens, k);
        let closed = lam_basis.iter().all(|v| {
            let r: Vec<i64> = v.iter().map(|x| x.mod_floor(&BigInt::from(self.period)).to_i64().expect("small")).collect();
            self.residues.contains(&r)
        });
        if !closed {
            return None;
        }
        let outer: IntMatrix = lam_basis.iter().map(|v| self.outer_point(v)).collect();
        Some(hnf_rows(&outer, self.outer.len()))
    }

    pub fn lift(&self, outer_values: &[BigInt]) -> Option<Vec<BigInt>> {
        lift_inner(&self.eqs, &self.outer, outer_values, &self.inner).ok().flatten()
    }
}
