//! Borcea period coordinates `(p13, p23, p14, p24)` on the domain `D`, the
//! action of orientation preserving diffeomorphisms, and the loci cut out by
//! `σ̃*η = λ η̄`.
//!
//! The positivity form `−p13 p̄24 + p23 p̄14 + p14 p̄23 − p24 p̄13` is a sum of
//! two conjugate pairs, hence real; it is evaluated as a rational number. On
//! `p = (xy, y, x, 1)` it equals `4 Im x Im y`.

pub mod exterior;

use std::fmt;

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exactalg::{int, rat, Monomial, Rat};
use crate::realstruct::{Lifting, LinearCase};
use exterior::{theta, TwoForm};

pub type Gauss = Complex<Rat>;

pub fn gauss(re: Rat, im: Rat) -> Gauss {
    Complex::new(re, im)
}

pub fn real(r: Rat) -> Gauss {
    gauss(r, Rat::zero())
}

/// `i·r`.
pub fn imag(r: Rat) -> Gauss {
    gauss(Rat::zero(), r)
}

pub fn conj(z: &Gauss) -> Gauss {
    z.conj()
}

pub fn norm_sqr(z: &Gauss) -> Rat {
    &z.re * &z.re + &z.im * &z.im
}

pub fn fmt_gauss(z: &Gauss) -> String {
    format!("{} + {}i", crate::exactalg::fmt_rat(&z.re), crate::exactalg::fmt_rat(&z.im))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("degenerate: {0} vanishes")]
    Degenerate(&'static str),
    #[error("not on the quadric p13 p24 = p23 p14")]
    OffQuadric,
    #[error("positivity form is {0}, not positive")]
    NotPositive(String),
    #[error("|det M| must be 1, got {0}")]
    BadDeterminant(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodPoint {
    pub p13: Gauss,
    pub p23: Gauss,
    pub p14: Gauss,
    pub p24: Gauss,
}

impl PeriodPoint {
    /// Validates the quadric, positivity and `p14, p24 ≠ 0`.
    pub fn new(p13: Gauss, p23: Gauss, p14: Gauss, p24: Gauss) -> Result<Self, ModuliError> {
        let p = PeriodPoint { p13, p23, p14, p24 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ModuliError> {
        if self.p14.is_zero() {
            return Err(ModuliError::Degenerate("p14"));
        }
        if self.p24.is_zero() {
            return Err(ModuliError::Degenerate("p24"));
        }
        if !self.quadric().is_zero() {
            return Err(ModuliError::OffQuadric);
        }
        let f = self.positivity();
        if !f.is_positive() {
            return Err(ModuliError::NotPositive(crate::exactalg::fmt_rat(&f)));
        }
        Ok(())
    }

    /// The point `(xy, y, x, 1)` over `(x, y)`.
    pub fn from_halfplanes(x: &Gauss, y: &Gauss) -> Result<Self, ModuliError> {
        PeriodPoint::new(x * y, y.clone(), x.clone(), Gauss::one())
    }

    pub fn quadric(&self) -> Gauss {
        &self.p13 * &self.p24 - &self.p23 * &self.p14
    }

    pub fn positivity(&self) -> Rat {
        let f = -(&self.p13 * conj(&self.p24)) + &self.p23 * conj(&self.p14) + &self.p14 * conj(&self.p23)
            - &self.p24 * conj(&self.p13);
        debug_assert!(f.im.is_zero());
        f.re
    }

    pub fn scale(&self, l: &Gauss) -> PeriodPoint {
        PeriodPoint {
            p13: &self.p13 * l,
            p23: &self.p23 * l,
            p14: &self.p14 * l,
            p24: &self.p24 * l,
        }
    }

    pub fn coords(&self) -> [&Gauss; 4] {
        [&self.p13, &self.p23, &self.p14, &self.p24]
    }
}

impl fmt::Display for PeriodPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords().iter().map(|z| fmt_gauss(z)).collect();
        write!(f, "({})", c.join(", "))
    }
}

/// `(x, y) = (p14/p24, p13/p14)`.
pub fn to_halfplanes(p: &PeriodPoint) -> Result<(Gauss, Gauss), ModuliError> {
    if p.p24.is_zero() {
        return Err(ModuliError::Degenerate("p24"));
    }
    if p.p14.is_zero() {
        return Err(ModuliError::Degenerate("p14"));
    }
    Ok((&p.p14 / &p.p24, &p.p13 / &p.p14))
}

/// `M = [[a, b], [c, d]]` with `e = det M = ±1`, and the shift `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ActionMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub k: i64,
}

impl ActionMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64, k: i64) -> Result<Self, ModuliError> {
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(ModuliError::BadDeterminant(det));
        }
        Ok(ActionMatrix { a, b, c, d, k })
    }

    pub fn identity() -> Self {
        ActionMatrix { a: 1, b: 0, c: 0, d: 1, k: 0 }
    }

    /// `(x, y) ↦ (−x, −y)`.
    pub fn exchange() -> Self {
        ActionMatrix { a: -1, b: 0, c: 0, d: 1, k: 0 }
    }

    /// `x ↦ 1/x`, `y ↦ −p23/p24`.
    pub fn flip() -> Self {
        ActionMatrix { a: 0, b: -1, c: -1, d: 0, k: 0 }
    }

    pub fn e(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// The block matrix of `self ∘ o`: `M = M1 M2`, `k = k2 + e2 k1`.
    pub fn compose(&self, o: &ActionMatrix) -> ActionMatrix {
        ActionMatrix {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
            k: o.k + o.e() * self.k,
        }
    }

    /// Random `M` with `det M = ±1` as a product of elementary matrices.
    pub fn random<R: Rng>(rng: &mut R, kmax: i64) -> Self {
        let mut m = ActionMatrix::identity();
        for _ in 0..rng.gen_range(0..5) {
            let n = rng.gen_range(-2..=2);
            let step = match rng.gen_range(0..3) {
                0 => ActionMatrix { a: 1, b: n, c: 0, d: 1, k: 0 },
                1 => ActionMatrix { a: 1, b: 0, c: n, d: 1, k: 0 },
                _ => ActionMatrix { a: -1, b: 0, c: 0, d: 1, k: 0 },
            };
            m = m.compose(&step);
        }
        m.k = rng.gen_range(-kmax..=kmax);
        m
    }
}

/// `p ↦ [[M, −(2k/m) M], [0, e M]] p` on `(p13, p23 | p14, p24)`.
pub fn borcea_act(act: &ActionMatrix, m: i64, p: &PeriodPoint) -> PeriodPoint {
    let mat = |u: &Gauss, v: &Gauss| {
        let [a, b, c, d] = [act.a, act.b, act.c, act.d].map(|n| real(int(n)));
        (&a * u + &b * v, &c * u + &d * v)
    };
    let shift = real(rat(-2 * act.k, m));
    let e = real(int(act.e()));
    let (u1, u2) = mat(&p.p13, &p.p23);
    let (v1, v2) = mat(&p.p14, &p.p24);
    PeriodPoint {
        p13: u1 + &shift * &v1,
        p23: u2 + &shift * &v2,
        p14: &e * v1,
        p24: &e * v2,
    }
}

/// `η = Σ p_ij θ_ij` split into real and imaginary parts.
pub struct ComplexTwoForm {
    pub re: TwoForm,
    pub im: TwoForm,
}

pub fn eta(p: &PeriodPoint) -> ComplexTwoForm {
    let th: Vec<TwoForm> = theta().iter().map(|t| TwoForm::from_form(t).expect("θ in span")).collect();
    let mut re = TwoForm::zero();
    let mut im = TwoForm::zero();
    for (c, t) in p.coords().into_iter().zip(&th) {
        re = re + t.scale(&c.re);
        im = im + t.scale(&c.im);
    }
    ComplexTwoForm { re, im }
}

/// `σ̃*` of a real 2-form.
pub fn pullback(l: &Lifting, eta: &TwoForm) -> TwoForm {
    eta.pullback(&l.to_affine())
}

fn coefficient_pairs(lhs: &ComplexTwoForm, rhs: &ComplexTwoForm) -> Vec<(Gauss, Gauss)> {
    let mut monomials: Vec<Monomial> = Vec::new();
    let all = [&lhs.re, &lhs.im, &rhs.re, &rhs.im];
    for f in all {
        for c in &f.0 {
            for (mono, _) in c.terms() {
                if !monomials.contains(mono) {
                    monomials.push(mono.clone());
                }
            }
        }
    }
    let coeff = |f: &ComplexTwoForm, s: usize, mono: &Monomial| gauss(f.re.0[s].coeff(mono), f.im.0[s].coeff(mono));
    let mut out = Vec::new();
    for s in 0..5 {
        for mono in &monomials {
            out.push((coeff(lhs, s, mono), coeff(rhs, s, mono)));
        }
    }
    out
}

/// The `λ` with `|λ| = 1` and `σ̃*η = λ η̄`, if any. When `η̄ = 0` the
/// condition is vacuous and `λ = 1` is returned.
pub fn reality_phase(l: &Lifting, p: &PeriodPoint) -> Option<Gauss> {
    let e = eta(p);
    let lhs = ComplexTwoForm {
        re: pullback(l, &e.re),
        im: pullback(l, &e.im),
    };
    let rhs = ComplexTwoForm {
        re: e.re.clone(),
        im: e.im.scale(&int(-1)),
    };
    let pairs = coefficient_pairs(&lhs, &rhs);
    let lambda = match pairs.iter().find(|(_, r)| !r.is_zero()) {
        Some((l, r)) => l / r,
        None => Gauss::one(),
    };
    let ok = norm_sqr(&lambda) == Rat::one() && pairs.iter().all(|(l, r)| *l == &lambda * r);
    ok.then_some(lambda)
}

/// `∃ λ, |λ| = 1 : σ̃*η_p = λ η̄_p`, decided on all coefficients exactly.
pub fn reality_conditions(l: &Lifting, p: &PeriodPoint) -> bool {
    reality_phase(l, p).is_some()
}

/// The constraint sets in half-plane coordinates: case A `Re x = Re y = 0`,
/// plus `xy = −1` when `f2 ≠ 0`; case B `|x| = 1`, `Re y = 0`, plus
/// `x = (1 + y)/(1 − y)` when `f2 ≠ 0`.
pub fn locus_predicate(case: LinearCase, f2_zero: bool, x: &Gauss, y: &Gauss) -> bool {
    let one = Gauss::one();
    match case {
        LinearCase::A => x.re.is_zero() && y.re.is_zero() && (f2_zero || x * y == -one),
        LinearCase::B => {
            norm_sqr(x) == Rat::one() && y.re.is_zero() && (f2_zero || *x == (&one + y) / (&one - y))
        }
    }
}

/// A lifting in the given linear case satisfying its square constraint
/// (`f1 = d1` in case A, `f1 = −f2` in case B).
pub fn sample_lifting(case: LinearCase, f2_zero: bool) -> Lifting {
    let f2 = if f2_zero { int(0) } else { int(1) };
    match case {
        LinearCase::A => Lifting::new(case, rat(1, 2), f2, rat(1, 2), rat(1, 3)),
        LinearCase::B => Lifting::new(case, -f2.clone(), f2, int(0), rat(1, 3)),
    }
}

/// Points `(x, y)` on the constraint locus over the grid
/// `y ∈ {±i/2, ±i, ±2i}`, with `x` taken from the constraint.
pub fn locus_grid(case: LinearCase, f2_zero: bool) -> Vec<(Gauss, Gauss)> {
    let ys: Vec<Gauss> = [rat(1, 2), int(1), int(2)]
        .into_iter()
        .flat_map(|r| [imag(r.clone()), imag(-r)])
        .collect();
    let one = Gauss::one();
    let mut out = Vec::new();
    for y in ys {
        let sign = if y.im.is_positive() { int(1) } else { int(-1) };
        let xs: Vec<Gauss> = match (case, f2_zero) {
            (LinearCase::A, true) => [rat(1, 3), int(1), int(3)].into_iter().map(|r| imag(r * &sign)).collect(),
            (LinearCase::A, false) => vec![-(&one / &y)],
            (LinearCase::B, true) => [(int(3), int(4)), (int(0), int(5)), (int(-3), int(4))]
                .into_iter()
                .map(|(a, b)| gauss(a / int(5), b / int(5) * &sign))
                .collect(),
            (LinearCase::B, false) => vec![(&one + &y) / (&one - &y)],
        };
        out.extend(xs.into_iter().map(|x| (x, y.clone())));
    }
    out
}

/// The automorphism the exchange argument uses for a case.
pub fn exchange_automorphism(case: LinearCase, f2_zero: bool) -> ActionMatrix {
    match (case, f2_zero) {
        (LinearCase::B, false) => ActionMatrix::flip(),
        _ => ActionMatrix::exchange(),
    }
}

fn upper(x: &Gauss) -> bool {
    x.im.is_positive()
}

/// The automorphism maps every grid point of the locus back into the locus
/// and into the other component (`Im x` changes sign).
pub fn exchange_check(case: LinearCase, f2_zero: bool, m: i64) -> bool {
    let l = sample_lifting(case, f2_zero);
    let act = exchange_automorphism(case, f2_zero);
    let grid = locus_grid(case, f2_zero);
    let both = grid.iter().any(|(x, _)| upper(x)) && grid.iter().any(|(x, _)| !upper(x));
    both && grid.iter().all(|(x, y)| {
        let Ok(p) = PeriodPoint::from_halfplanes(x, y) else {
            return false;
        };
        if !reality_conditions(&l, &p) {
            return false;
        }
        let q = borcea_act(&act, m, &p);
        let Ok((x2, _)) = to_halfplanes(&q) else {
            return false;
        };
        q.validate().is_ok() && reality_conditions(&l, &q) && upper(&x2) != upper(x)
    })
}

/// A random nonzero Gaussian rational with small numerators.
pub fn random_gauss<R: Rng>(rng: &mut R) -> Gauss {
    loop {
        let z = gauss(
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=6)),
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=6)),
        );
        if !z.is_zero() {
            return z;
        }
    }
}

/// A random point of `D`: `λ (xy, y, x, 1)` with `Im x`, `Im y` of the
/// same sign.
pub fn random_point<R: Rng>(rng: &mut R) -> PeriodPoint {
    let positive = rng.gen_bool(0.5);
    let half = |rng: &mut R| {
        let mut z = random_gauss(rng);
        if z.im.is_zero() {
            z.im = int(1);
        }
        if upper(&z) != positive {
            z.im = -z.im;
        }
        z
    };
    let (x, y) = (half(rng), half(rng));
    let l = random_gauss(rng);
    PeriodPoint::from_halfplanes(&x, &y).expect("valid by construction").scale(&l)
}

/// A random `(x, y)` that lies on the given locus about half the time.
pub fn random_sample<R: Rng>(rng: &mut R, case: LinearCase, f2_zero: bool) -> (Gauss, Gauss) {
    let p = random_point(rng);
    let (mut x, mut y) = to_halfplanes(&p).expect("valid point");
    if rng.gen_bool(0.5) {
        let sign = if upper(&y) { int(1) } else { int(-1) };
        let one = Gauss::one();
        // perturb a locus point in one coordinate at a time
        y = imag(y.im.abs() * &sign);
        x = match (case, f2_zero) {
            (LinearCase::A, true) => imag(x.im.clone()),
            (LinearCase::A, false) => -(&one / &y),
            (LinearCase::B, true) => {
                let t = rat(rng.gen_range(1..=9), rng.gen_range(1..=9));
                let d = &one.re + &t * &t;
                gauss((&one.re - &t * &t) / &d, (int(2) * t / d) * &sign)
            }
            (LinearCase::B, false) => (&one + &y) / (&one - &y),
        };
        match rng.gen_range(0..4) {
            0 => x.re += rat(1, 7),
            1 => y.re += rat(1, 5),
            _ => {}
        }
    }
    (x, y)
}
