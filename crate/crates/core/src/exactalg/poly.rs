//! Sparse multivariate polynomials with rational coefficients.
//!
//! Variables come from one fixed ordered universe ([`Var`]): the lattice and
//! lifting parameters, the four real coordinates of the universal cover, and
//! a pool of integer unknowns used when a condition has to be solved over
//! `Z`. The torsion coefficient `m` is never a variable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rat::{fmt_rat, int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Delta1,
    Eps1,
    Delta3,
    Eps3,
    Delta4,
    Eps4,
    F1,
    F2,
    D1,
    Gamma1,
    /// Real coordinate `x1, y1, x2, y2` of the universal cover, index 0..4.
    Coord(u8),
    /// Integer unknown with the given index.
    Unknown(u8),
}

impl Var {
    pub const X1: Var = Var::Coord(0);
    pub const Y1: Var = Var::Coord(1);
    pub const X2: Var = Var::Coord(2);
    pub const Y2: Var = Var::Coord(3);

    pub fn name(&self) -> String {
        match self {
            Var::Delta1 => "delta1".into(),
            Var::Eps1 => "eps1".into(),
            Var::Delta3 => "delta3".into(),
            Var::Eps3 => "eps3".into(),
            Var::Delta4 => "delta4".into(),
            Var::Eps4 => "eps4".into(),
            Var::F1 => "f1".into(),
            Var::F2 => "f2".into(),
            Var::D1 => "d1".into(),
            Var::Gamma1 => "gamma1".into(),
            Var::Coord(i) => ["x1", "y1", "x2", "y2"]
                .get(*i as usize)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("coord{i}")),
            Var::Unknown(i) => format!("z{i}"),
        }
    }
}

/// Product of variable powers; sorted by variable, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_powers(self.0.iter().chain(other.0.iter()).copied())
    }

    fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().filter(|(w, _)| *w != v).copied().collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.name()
                } else {
                    format!("{}^{}", v.name(), e)
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Monomial::one())
    }

    /// `Some(c)` when the polynomial has no variable part.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces every variable for which `sub` returns a polynomial.
    pub fn substitute(&self, sub: &dyn Fn(Var) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for (v, e) in m.powers() {
                match sub(*v) {
                    Some(p) => acc = &acc * &p.pow(*e),
                    None => kept.push((*v, *e)),
                }
            }
            let rest = Poly::term(Monomial::from_powers(kept), Rat::one());
            out += &(&acc * &rest);
        }
        out
    }

    /// Partial evaluation at rational values.
    pub fn eval_partial(&self, values: &dyn Fn(Var) -> Option<Rat>) -> Poly {
        self.substitute(&|v| values(v).map(Poly::constant))
    }

    /// Full evaluation; `None` if a variable is left unassigned.
    pub fn eval(&self, values: &dyn Fn(Var) -> Option<Rat>) -> Option<Rat> {
        self.eval_partial(values).as_constant()
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let rest = m.without(v);
            let reduced = if e > 1 {
                rest.mul(&Monomial(vec![(v, e - 1)]))
            } else {
                rest
            };
            out.add_term(reduced, c * int(e as i64));
        }
        out
    }

    /// Coefficient of `v` in a polynomial of degree at most one in `v`,
    /// as a polynomial in the remaining variables.
    pub fn linear_coefficient(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exponent(v) == 1 {
                out.add_term(m.without(v), c.clone());
            }
        }
        out
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rat::one())
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Self {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl<'a> AddAssign<&'a Poly> for Poly {
    fn add_assign(&mut self, rhs: &'a Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a, 'b> Add<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'b Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a, 'b> Sub<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'b Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a, 'b> Mul<&'b Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'b Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl<'a> Neg for &'a Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    fmt_rat(c)
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("{}*{}", fmt_rat(c), m)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
