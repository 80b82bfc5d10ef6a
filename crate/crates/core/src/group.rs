//! The fundamental group `G` of a primary Kodaira surface as a group of
//! affine transformations of R⁴, its normal form `g4^b g3^a g1^l g2^t`, and
//! collection of words into that form.
//!
//! Presentation used throughout: `g1`, `g2` central and `g3 g4 = g4 g3 g2^m`.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exactalg::{int, rat, AffineMap4, Poly, Rat, RatAffine, Scalar, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not in G: {0}")]
    NotInG(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Translation data of one primary Kodaira surface with torsion `m`.
/// `delta2 = 0`, `eps2 = 2/m` and the lattice `(a3, b3) = (1, 0)`,
/// `(a4, b4) = (0, 1)` are fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KodairaParams {
    pub m: i64,
    pub delta1: Rat,
    pub eps1: Rat,
    pub delta3: Rat,
    pub eps3: Rat,
    pub delta4: Rat,
    pub eps4: Rat,
}

impl KodairaParams {
    pub fn new(
        m: i64,
        delta1: Rat,
        eps1: Rat,
        delta3: Rat,
        eps3: Rat,
        delta4: Rat,
        eps4: Rat,
    ) -> Result<Self, GroupError> {
        let p = KodairaParams {
            m,
            delta1,
            eps1,
            delta3,
            eps3,
            delta4,
            eps4,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), GroupError> {
        if self.m < 1 {
            return Err(GroupError::InvalidParams(format!("m = {} < 1", self.m)));
        }
        if self.delta1.is_zero() {
            return Err(GroupError::InvalidParams("delta1 = 0".into()));
        }
        Ok(())
    }

    pub fn eps2(&self) -> Rat {
        rat(2, self.m)
    }

    /// Values of the parameter variables, for instantiating symbolic maps.
    pub fn value(&self, v: Var) -> Option<Rat> {
        Some(match v {
            Var::Delta1 => self.delta1.clone(),
            Var::Eps1 => self.eps1.clone(),
            Var::Delta3 => self.delta3.clone(),
            Var::Eps3 => self.eps3.clone(),
            Var::Delta4 => self.delta4.clone(),
            Var::Eps4 => self.eps4.clone(),
            _ => return None,
        })
    }

    pub fn generators(&self) -> [RatAffine; 4] {
        generator_maps(
            self.m,
            [
                self.delta1.clone(),
                self.eps1.clone(),
                self.delta3.clone(),
                self.eps3.clone(),
                self.delta4.clone(),
                self.eps4.clone(),
            ],
        )
    }
}

/// Element of the form `x ↦ (x1 + a, y1 + b, x2 + a x1 + b y1 + δ, y2 − b x1 + a y1 + ε)`.
pub fn g_element<T: Scalar>(a: T, b: T, delta: T, eps: T) -> AffineMap4<T> {
    let mut f = AffineMap4::identity();
    f.linear[2][0] = a.clone();
    f.linear[2][1] = b.clone();
    f.linear[3][0] = -b.clone();
    f.linear[3][1] = a.clone();
    f.translation = [a, b, delta, eps];
    f
}

/// `g1..g4` from `[δ1, ε1, δ3, ε3, δ4, ε4]` over any scalar ring.
pub fn generator_maps<T: Scalar>(m: i64, data: [T; 6]) -> [AffineMap4<T>; 4] {
    let [d1, e1, d3, e3, d4, e4] = data;
    let z = T::zero;
    let one = T::one;
    let eps2 = T::one() + T::one();
    let mut g2 = g_element(z(), z(), z(), eps2);
    // divide the translation by m exactly
    let mut inv_m = T::zero();
    for _ in 0..m {
        inv_m = inv_m + T::one();
    }
    g2.translation[3] = g2.translation[3].clone() * inv_m.try_recip().expect("m is a unit");
    [
        g_element(z(), z(), d1, e1),
        g2,
        g_element(one(), z(), d3, e3),
        g_element(z(), one(), d4, e4),
    ]
}

/// Generators with symbolic `δ`, `ε` entries.
pub fn symbolic_generators(m: i64) -> [AffineMap4<Poly>; 4] {
    generator_maps(
        m,
        [Var::Delta1, Var::Eps1, Var::Delta3, Var::Eps3, Var::Delta4, Var::Eps4].map(Poly::var),
    )
}

/// `g4^b g3^a g1^l g2^t`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalWord {
    pub b: i64,
    pub a: i64,
    pub l: i64,
    pub t: i64,
}

impl NormalWord {
    pub const IDENTITY: NormalWord = NormalWord { b: 0, a: 0, l: 0, t: 0 };

    pub const fn new(b: i64, a: i64, l: i64, t: i64) -> Self {
        NormalWord { b, a, l, t }
    }

    pub const fn g(i: u8) -> Self {
        match i {
            1 => NormalWord::new(0, 0, 1, 0),
            2 => NormalWord::new(0, 0, 0, 1),
            3 => NormalWord::new(0, 1, 0, 0),
            4 => NormalWord::new(1, 0, 0, 0),
            _ => panic!("generator index must be 1..=4"),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn is_central(&self) -> bool {
        self.b == 0 && self.a == 0
    }

    pub fn mul(&self, o: &NormalWord, m: i64) -> NormalWord {
        NormalWord::new(
            self.b + o.b,
            self.a + o.a,
            self.l + o.l,
            self.t + o.t + m * self.a * o.b,
        )
    }

    pub fn inv(&self, m: i64) -> NormalWord {
        NormalWord::new(-self.b, -self.a, -self.l, -self.t + m * self.a * self.b)
    }

    pub fn pow(&self, n: i64, m: i64) -> NormalWord {
        NormalWord::new(
            n * self.b,
            n * self.a,
            n * self.l,
            n * self.t + m * self.a * self.b * n * (n - 1) / 2,
        )
    }

    pub fn commutator(&self, o: &NormalWord, m: i64) -> NormalWord {
        self.mul(o, m).mul(&self.inv(m), m).mul(&o.inv(m), m)
    }

    pub fn to_group_word(&self) -> GroupWord {
        GroupWord(
            [(4, self.b), (3, self.a), (1, self.l), (2, self.t)]
                .into_iter()
                .filter(|(_, e)| *e != 0)
                .collect(),
        )
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [(4, self.b), (3, self.a), (1, self.l), (2, self.t)]
            .into_iter()
            .filter(|(_, e)| *e != 0)
            .map(|(g, e)| if e == 1 { format!("g{g}") } else { format!("g{g}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A word in the generators, as `(index, exponent)` syllables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupWord(pub Vec<(u8, i64)>);

impl GroupWord {
    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        GroupWord(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn random<R: Rng>(rng: &mut R, max_len: usize, max_exp: i64) -> GroupWord {
        let len = rng.gen_range(0..=max_len);
        GroupWord(
            (0..len)
                .map(|_| (rng.gen_range(1..=4u8), rng.gen_range(-max_exp..=max_exp)))
                .collect(),
        )
    }

    /// Left-to-right composition of the generator maps.
    pub fn to_affine(&self, params: &KodairaParams) -> RatAffine {
        let gens = params.generators();
        let inverses: Vec<RatAffine> = gens
            .iter()
            .map(|g| g.inverse().expect("generators are invertible"))
            .collect();
        let mut acc = RatAffine::identity();
        for &(g, e) in &self.0 {
            let i = (g - 1) as usize;
            let base = if e < 0 { &inverses[i] } else { &gens[i] };
            for _ in 0..e.unsigned_abs() {
                acc = acc.compose(base);
            }
        }
        acc
    }
}

/// Collects a word into normal form by moving letters one at a time:
/// central letters are pulled out, and every adjacent `g3^ε g4^η` is
/// rewritten as `g4^η g3^ε g2^{mεη}` until all `g4` letters precede all
/// `g3` letters.
pub fn collect(w: &GroupWord, m: i64) -> NormalWord {
    let mut l = 0i64;
    let mut t = 0i64;
    // non-central letters: true for g4, false for g3, with sign
    let mut letters: Vec<(bool, i64)> = Vec::new();
    for &(g, e) in &w.0 {
        let s = e.signum();
        match g {
            1 => l += e,
            2 => t += e,
            3 | 4 => letters.extend(std::iter::repeat_n((g == 4, s), e.unsigned_abs() as usize)),
            _ => panic!("generator index must be 1..=4"),
        }
    }
    let mut i = 0;
    while i + 1 < letters.len() {
        let (is4_a, ea) = letters[i];
        let (is4_b, eb) = letters[i + 1];
        if !is4_a && is4_b {
            letters.swap(i, i + 1);
            t += m * ea * eb;
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    let b = letters.iter().filter(|(g4, _)| *g4).map(|(_, e)| e).sum();
    let a = letters.iter().filter(|(g4, _)| !*g4).map(|(_, e)| e).sum();
    NormalWord::new(b, a, l, t)
}

/// Closed form of `g4^b ∘ g3^a ∘ g1^l ∘ g2^t`.
pub fn word_to_affine(w: &NormalWord, p: &KodairaParams) -> RatAffine {
    let (a, b, l, t) = (int(w.a), int(w.b), int(w.l), int(w.t));
    let tri = |n: &Rat| n * (n - Rat::one()) / int(2);
    let x2 = &b * &p.delta4 + tri(&b) + &a * &p.delta3 + tri(&a) + &l * &p.delta1;
    let y2 = &b * &p.eps4 + &a * &p.eps3 - &a * &b + &l * &p.eps1 + &t * p.eps2();
    g_element(a, b, x2, y2)
}

pub fn affine_to_word(f: &RatAffine, p: &KodairaParams) -> Result<NormalWord, GroupError> {
    let lin = &f.linear;
    let a = lin[2][0].clone();
    let b = lin[2][1].clone();
    let expected = g_element(a.clone(), b.clone(), Rat::zero(), Rat::zero()).linear;
    if *lin != expected {
        return Err(GroupError::NotInG("linear part is not of the form of G".into()));
    }
    if f.translation[0] != a || f.translation[1] != b {
        return Err(GroupError::NotInG("translation head differs from the lattice part".into()));
    }
    let as_int = |r: &Rat, what: &str| {
        crate::exactalg::rat::to_i64(r)
            .ok_or_else(|| GroupError::NotInG(format!("{what} = {} is not an integer", crate::exactalg::fmt_rat(r))))
    };
    let (ai, bi) = (as_int(&a, "a")?, as_int(&b, "b")?);
    let head = word_to_affine(&NormalWord::new(bi, ai, 0, 0), p);
    let l = (&f.translation[2] - &head.translation[2]) / &p.delta1;
    let li = as_int(&l, "l")?;
    let t = (&f.translation[3] - &head.translation[3] - &l * &p.eps1) / p.eps2();
    let ti = as_int(&t, "t")?;
    Ok(NormalWord::new(bi, ai, li, ti))
}

/// Checks `[g3, g4] = g2^m` and centrality of `g1`, `g2` on the given maps.
pub fn relations_hold<T: Scalar>(gens: &[AffineMap4<T>; 4], m: i64) -> bool {
    let [g1, g2, g3, g4] = gens;
    let (Ok(g3i), Ok(g4i)) = (g3.inverse(), g4.inverse()) else {
        return false;
    };
    let Ok(g2m) = g2.pow(m) else { return false };
    let comm = g3.compose(g4).compose(&g3i).compose(&g4i);
    let commute = |x: &AffineMap4<T>, y: &AffineMap4<T>| x.compose(y) == y.compose(x);
    comm == g2m && gens.iter().all(|g| commute(g1, g) && commute(g2, g))
}

pub fn verify_relations(p: &KodairaParams) -> bool {
    relations_hold(&p.generators(), p.m)
}

/// Normal word with polynomial exponents, for computing with unknown
/// group elements. Exponent polynomials are integer-valued on integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymWord {
    pub b: Poly,
    pub a: Poly,
    pub l: Poly,
    pub t: Poly,
}

impl SymWord {
    pub fn from_word(w: &NormalWord) -> Self {
        SymWord {
            b: Poly::int(w.b),
            a: Poly::int(w.a),
            l: Poly::int(w.l),
            t: Poly::int(w.t),
        }
    }

    pub fn identity() -> Self {
        Self::from_word(&NormalWord::IDENTITY)
    }

    pub fn mul(&self, o: &SymWord, m: i64) -> SymWord {
        SymWord {
            b: &self.b + &o.b,
            a: &self.a + &o.a,
            l: &self.l + &o.l,
            t: &(&self.t + &o.t) + &(&Poly::int(m) * &(&self.a * &o.b)),
        }
    }

    /// `self^n` for a polynomial exponent `n`.
    pub fn pow(&self, n: &Poly, m: i64) -> SymWord {
        let tri = &(n * &(n - &Poly::one())) * &Poly::constant(rat(1, 2));
        SymWord {
            b: n * &self.b,
            a: n * &self.a,
            l: n * &self.l,
            t: &(n * &self.t) + &(&(&Poly::int(m) * &(&self.a * &self.b)) * &tri),
        }
    }

    pub fn components(&self) -> [&Poly; 4] {
        [&self.b, &self.a, &self.l, &self.t]
    }

    pub fn eval(&self, values: &dyn Fn(Var) -> Option<Rat>) -> Option<NormalWord> {
        let c = |p: &Poly| p.eval(values).and_then(|r| crate::exactalg::rat::to_i64(&r));
        Some(NormalWord::new(c(&self.b)?, c(&self.a)?, c(&self.l)?, c(&self.t)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(m: i64) -> KodairaParams {
        KodairaParams::new(m, int(1), int(0), int(1), int(0), rat(1, 2), int(0)).unwrap()
    }

    #[test]
    fn generator_shapes() {
        let p = KodairaParams::new(2, int(1), int(0), int(1), int(0), int(1), int(0)).unwrap();
        let [g1, g2, _, _] = p.generators();
        assert!(g2.is_translation());
        assert_eq!(g2.translation, [int(0), int(0), int(0), int(1)]);
        assert_eq!(g1.translation, [int(0), int(0), int(1), int(0)]);
        let p3 = KodairaParams::new(3, int(1), int(0), int(1), int(0), rat(1, 2), int(0)).unwrap();
        assert!(verify_relations(&p3));
    }

    #[test]
    fn commutator_collects_to_central_power() {
        let w = GroupWord(vec![(3, 1), (4, 1), (3, -1), (4, -1)]);
        assert_eq!(collect(&w, 5), NormalWord::new(0, 0, 0, 5));
        let z = GroupWord(vec![(1, 1), (2, 1), (1, -1), (2, -1)]);
        assert!(collect(&z, 2).is_identity());
    }

    #[test]
    fn closed_form_matches_composition() {
        let p = params(2);
        let w = NormalWord::new(1, 1, 0, 0);
        let [_, _, g3, g4] = p.generators();
        assert_eq!(word_to_affine(&w, &p), g4.compose(&g3));
        assert!(word_to_affine(&NormalWord::IDENTITY, &p).is_identity());
    }

    #[test]
    fn affine_round_trip_and_rejection() {
        let p = params(3);
        let w = NormalWord::new(2, -1, 3, 5);
        assert_eq!(affine_to_word(&word_to_affine(&w, &p), &p).unwrap(), w);
        let half = RatAffine::translation([int(0), int(0), rat(1, 2), int(0)]);
        let err = affine_to_word(&half, &p).unwrap_err();
        assert!(err.to_string().starts_with("not in G"));
    }

    #[test]
    fn broken_eps2_breaks_relations() {
        let p = params(2);
        let mut gens = p.generators();
        gens[1].translation[3] = rat(1, 3);
        assert!(!relations_hold(&gens, p.m));
    }

    #[test]
    fn symbolic_relations_hold_identically() {
        for m in 1..=4 {
            assert!(relations_hold(&symbolic_generators(m), m));
        }
    }

    #[test]
    fn negative_powers() {
        let w = NormalWord::new(1, 2, -1, 3);
        for n in -4i64..=4 {
            let mut acc = NormalWord::IDENTITY;
            let step = if n < 0 { w.inv(3) } else { w };
            for _ in 0..n.abs() {
                acc = acc.mul(&step, 3);
            }
            assert_eq!(w.pow(n, 3), acc);
        }
    }
}
