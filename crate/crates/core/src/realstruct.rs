//! Antiholomorphic liftings `σ̃` to R⁴, their admissibility against `G`, the
//! induced conjugation action on generators, and `σ̃²` as an element of `G`.
//!
//! In complex coordinates `z1 = x1 + i y1`, `z2 = x2 + i y2` a lifting reads
//! `σ̃(z) = (c z̄1 + d, z̄2 + f z̄1 + γ)` with `c = 1` (case A) or `c = i`
//! (case B).

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactalg::rat::{is_integer, Rat};
use crate::exactalg::{AffineMap4, Poly, RatAffine, Scalar, Var};
use crate::group::{affine_to_word, KodairaParams, NormalWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealStructError {
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("invalid lifting: {0}")]
    InvalidLifting(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinearCase {
    A,
    B,
}

impl fmt::Display for LinearCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinearCase::A => "A",
            LinearCase::B => "B",
        })
    }
}

/// A lifting with `d2 = 0` and `γ2 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifting {
    pub case: LinearCase,
    pub f1: Rat,
    pub f2: Rat,
    pub d1: Rat,
    pub gamma1: Rat,
}

impl Lifting {
    pub fn new(case: LinearCase, f1: Rat, f2: Rat, d1: Rat, gamma1: Rat) -> Self {
        Lifting {
            case,
            f1,
            f2,
            d1,
            gamma1,
        }
    }

    /// Accepts the full translation `(d1, d2, γ1, γ2)`. A nonzero `γ2` is
    /// removed by conjugating with the translation `(0, 0, 0, −γ2/2)`, which
    /// commutes with `G`; `d2` must vanish.
    pub fn from_raw(
        case: LinearCase,
        f1: Rat,
        f2: Rat,
        d1: Rat,
        d2: Rat,
        gamma1: Rat,
        _gamma2: Rat,
    ) -> Result<Self, RealStructError> {
        if !d2.is_zero() {
            return Err(RealStructError::InvalidLifting(
                "d2 must be 0 in the normalized linear cases".into(),
            ));
        }
        Ok(Lifting::new(case, f1, f2, d1, gamma1))
    }

    pub fn c(&self) -> (i64, i64) {
        match self.case {
            LinearCase::A => (1, 0),
            LinearCase::B => (0, 1),
        }
    }

    pub fn to_affine(&self) -> RatAffine {
        lifting_map(
            self.case,
            [
                self.f1.clone(),
                self.f2.clone(),
                self.d1.clone(),
                Rat::zero(),
                self.gamma1.clone(),
                Rat::zero(),
            ],
        )
    }

    /// Values of the lifting variables, for instantiating symbolic maps.
    pub fn value(&self, v: Var) -> Option<Rat> {
        Some(match v {
            Var::F1 => self.f1.clone(),
            Var::F2 => self.f2.clone(),
            Var::D1 => self.d1.clone(),
            Var::Gamma1 => self.gamma1.clone(),
            _ => return None,
        })
    }
}

/// The affine map with data `[f1, f2, d1, d2, γ1, γ2]`.
pub fn lifting_map<T: Scalar>(case: LinearCase, data: [T; 6]) -> AffineMap4<T> {
    let [f1, f2, d1, d2, g1, g2] = data;
    let (z, o) = (T::zero, T::one);
    let (c1, c2) = match case {
        LinearCase::A => (o(), z()),
        LinearCase::B => (z(), o()),
    };
    AffineMap4::new(
        [
            [c1.clone(), c2.clone(), z(), z()],
            [c2, -c1, z(), z()],
            [f1.clone(), f2.clone(), o(), z()],
            [f2, -f1, z(), -o()],
        ],
        [d1, d2, g1, g2],
    )
}

/// Lifting with symbolic `f1, f2, d1, γ1`.
pub fn symbolic_lifting(case: LinearCase) -> AffineMap4<Poly> {
    lifting_map(
        case,
        [
            Poly::var(Var::F1),
            Poly::var(Var::F2),
            Poly::var(Var::D1),
            Poly::zero(),
            Poly::var(Var::Gamma1),
            Poly::zero(),
        ],
    )
}

pub fn conjugate(s: &RatAffine, g: &RatAffine) -> RatAffine {
    s.compose(g).compose(&s.inverse().expect("liftings are invertible"))
}

/// `σ̃ g_i σ̃⁻¹` as a normal word, or why it is not in `G`.
fn conj_word(l: &Lifting, p: &KodairaParams, i: u8) -> Result<NormalWord, RealStructError> {
    let g = &p.generators()[(i - 1) as usize];
    affine_to_word(&conjugate(&l.to_affine(), g), p)
        .map_err(|e| RealStructError::NotAdmissible(format!("σ̃ g{i} σ̃⁻¹: {e}")))
}

fn square_word(l: &Lifting, p: &KodairaParams) -> Result<NormalWord, RealStructError> {
    let s = l.to_affine();
    affine_to_word(&s.compose(&s), p)
        .map_err(|e| RealStructError::NotAdmissible(format!("σ̃²: {e}")))
}

/// Why `l` fails to normalize `G` or to square into it.
pub fn admissibility_error(l: &Lifting, p: &KodairaParams) -> Option<RealStructError> {
    for i in 1..=4 {
        match conj_word(l, p, i) {
            Err(e) => return Some(e),
            Ok(w) if i <= 2 && !w.is_central() => {
                return Some(RealStructError::NotAdmissible(format!(
                    "σ̃ g{i} σ̃⁻¹ = {w} is not central"
                )))
            }
            Ok(_) => {}
        }
    }
    square_word(l, p).err()
}

pub fn admissible(l: &Lifting, p: &KodairaParams) -> bool {
    admissibility_error(l, p).is_none()
}

pub fn conj_action(l: &Lifting, p: &KodairaParams, i: u8) -> Result<NormalWord, RealStructError> {
    if let Some(e) = admissibility_error(l, p) {
        return Err(e);
    }
    conj_word(l, p, i)
}

pub fn square_in_g(l: &Lifting, p: &KodairaParams) -> Result<NormalWord, RealStructError> {
    if let Some(e) = admissibility_error(l, p) {
        return Err(e);
    }
    square_word(l, p)
}

/// Lattice-level necessary conditions in complex form: `|c|² = 1`,
/// `c f̄ + f = c d̄ + d ∈ Z[i]`, `m ε1 ∈ Z` (the lattice of `β` is real) and
/// `c ∈ {±1, ±i}`. Implied by admissibility; not sufficient on its own.
pub fn lattice_conditions(l: &Lifting, p: &KodairaParams) -> bool {
    let (c1, c2) = l.c();
    let (c1, c2) = (Rat::from_integer(c1.into()), Rat::from_integer(c2.into()));
    let unit = &c1 * &c1 + &c2 * &c2 == Rat::one();
    // c w̄ + w for w = x + i y
    let twist = |x: &Rat, y: &Rat| (&c1 * x + &c2 * y + x, &c2 * x - &c1 * y + y);
    let lhs = twist(&l.f1, &l.f2);
    let rhs = twist(&l.d1, &Rat::zero());
    let m_eps1 = &p.eps1 * Rat::from_integer(p.m.into());
    unit && lhs == rhs && is_integer(&rhs.0) && is_integer(&rhs.1) && is_integer(&m_eps1)
}

/// A pair `(S, σ)` presented by one admissible lifting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealStructure {
    pub params: KodairaParams,
    pub lifting: Lifting,
}

impl RealStructure {
    pub fn new(params: KodairaParams, lifting: Lifting) -> Result<Self, RealStructError> {
        if let Some(e) = admissibility_error(&lifting, &params) {
            return Err(e);
        }
        Ok(RealStructure { params, lifting })
    }

    pub fn m(&self) -> i64 {
        self.params.m
    }

    pub fn sigma(&self) -> RatAffine {
        self.lifting.to_affine()
    }

    pub fn conj(&self, i: u8) -> NormalWord {
        conj_word(&self.lifting, &self.params, i).expect("admissible")
    }

    pub fn square(&self) -> NormalWord {
        square_word(&self.lifting, &self.params).expect("admissible")
    }

    /// `σ̃ w σ̃⁻¹` for an arbitrary normal word.
    pub fn conj_word(&self, w: &NormalWord) -> NormalWord {
        let m = self.m();
        let c = |i: u8, e: i64| self.conj(i).pow(e, m);
        c(4, w.b).mul(&c(3, w.a), m).mul(&c(1, w.l), m).mul(&c(2, w.t), m)
    }
}
