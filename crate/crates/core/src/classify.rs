//! Normal forms of the orbifold extension `1 → G → Ĝ → Z/2 → 1` defined by
//! a real structure, the splitting decision, and the case catalog.
//!
//! An extension is recorded by the images `σ̃ g_i σ̃⁻¹` of the four
//! generators and by `σ̃² ∈ G`. Reduction only uses moves that do not change
//! the topological type: changes of generators of `G`, replacing `σ̃` by
//! `σ̃ z` for `z ∈ G`, and conjugating `σ̃` by a translation commuting with `G`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactalg::dioph::{for_each_point, integer_zero, IntMatrix};
use crate::exactalg::{int, rat, DiophSolution, DiophSystem, Poly, Rat, RatAffine, Var};
use crate::group::{affine_to_word, word_to_affine, KodairaParams, NormalWord, SymWord};
use crate::realstruct::{conjugate, LinearCase, Lifting, RealStructError, RealStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("inadmissible extension: {0}")]
    Inadmissible(String),
    #[error("unknown case label `{0}`")]
    UnknownLabel(String),
    #[error("splitting undecided: {0}")]
    Undecided(String),
}

impl From<RealStructError> for ClassifyError {
    fn from(e: RealStructError) -> Self {
        ClassifyError::Inadmissible(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseLabel {
    B1p,
    B1pp,
    B2,
    A1aip,
    A1aipp,
    A1aiip,
    A1aiipp,
    A1bip,
    A1bipp,
    A1biip,
    A1biipp,
    A1_2,
    A2aip,
    A2aipp,
    A2aiip,
    A2aiipp,
    A2_2i,
    A2_2ii,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 18] = [
        CaseLabel::B1p,
        CaseLabel::B1pp,
        CaseLabel::B2,
        CaseLabel::A1aip,
        CaseLabel::A1aipp,
        CaseLabel::A1aiip,
        CaseLabel::A1aiipp,
        CaseLabel::A1bip,
        CaseLabel::A1bipp,
        CaseLabel::A1biip,
        CaseLabel::A1biipp,
        CaseLabel::A1_2,
        CaseLabel::A2aip,
        CaseLabel::A2aipp,
        CaseLabel::A2aiip,
        CaseLabel::A2aiipp,
        CaseLabel::A2_2i,
        CaseLabel::A2_2ii,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CaseLabel::B1p => "1B'",
            CaseLabel::B1pp => "1B''",
            CaseLabel::B2 => "2B",
            CaseLabel::A1aip => "1A1ai'",
            CaseLabel::A1aipp => "1A1ai''",
            CaseLabel::A1aiip => "1A1aii'",
            CaseLabel::A1aiipp => "1A1aii''",
            CaseLabel::A1bip => "1A1bi'",
            CaseLabel::A1bipp => "1A1bi''",
            CaseLabel::A1biip => "1A1bii'",
            CaseLabel::A1biipp => "1A1bii''",
            CaseLabel::A1_2 => "2A1",
            CaseLabel::A2aip => "1A2ai'",
            CaseLabel::A2aipp => "1A2ai''",
            CaseLabel::A2aiip => "1A2aii'",
            CaseLabel::A2aiipp => "1A2aii''",
            CaseLabel::A2_2i => "2A2i",
            CaseLabel::A2_2ii => "2A2ii",
        }
    }

    /// Whether the case occurs for torsion coefficient `m`.
    pub fn occurs(&self, m: i64) -> bool {
        match self {
            CaseLabel::A2aip
            | CaseLabel::A2aipp
            | CaseLabel::A2aiip
            | CaseLabel::A2aiipp
            | CaseLabel::A2_2i => m % 2 == 0,
            CaseLabel::A2_2ii => m % 2 == 1,
            _ => true,
        }
    }

    pub fn for_m(m: i64) -> Vec<CaseLabel> {
        Self::ALL.into_iter().filter(|l| l.occurs(m)).collect()
    }

    pub fn elliptic(&self) -> EllipticCase {
        match self {
            CaseLabel::B1p | CaseLabel::B1pp | CaseLabel::B2 => EllipticCase::B,
            CaseLabel::A2aip
            | CaseLabel::A2aipp
            | CaseLabel::A2aiip
            | CaseLabel::A2aiipp
            | CaseLabel::A2_2i
            | CaseLabel::A2_2ii => EllipticCase::A2,
            _ => EllipticCase::A1,
        }
    }

    /// The label with the other square, for `'`/`''` pairs.
    pub fn partner(&self) -> Option<CaseLabel> {
        use CaseLabel::*;
        Some(match self {
            B1p => B1pp,
            B1pp => B1p,
            A1aip => A1aipp,
            A1aipp => A1aip,
            A1aiip => A1aiipp,
            A1aiipp => A1aiip,
            A1bip => A1bipp,
            A1bipp => A1bip,
            A1biip => A1biipp,
            A1biipp => A1biip,
            A2aip => A2aipp,
            A2aipp => A2aip,
            A2aiip => A2aiipp,
            A2aiipp => A2aiip,
            _ => return None,
        })
    }

    /// Conjugation images and square of the normal form.
    pub fn normal_form(&self, m: i64) -> ([NormalWord; 4], NormalWord) {
        use CaseLabel::*;
        let w = NormalWord::new;
        let mu = match self {
            B2 | A1_2 | A2_2i | A2_2ii => 1,
            _ => 0,
        };
        let c1 = w(0, 0, 1, mu);
        let c2 = w(0, 0, 0, -1);
        let (c3, c4, s) = match self {
            B1p | B2 => (w(1, 0, 0, 0), w(0, 1, 0, 0), w(0, 0, 0, 0)),
            B1pp => (w(1, 0, 0, 0), w(0, 1, 0, 0), w(0, 0, 1, 0)),
            A1aip | A1_2 => (w(0, 1, 0, 0), w(-1, 0, 0, 0), w(0, 0, 0, 0)),
            A1aipp => (w(0, 1, 0, 0), w(-1, 0, 0, 0), w(0, 0, 1, 0)),
            A1aiip => (w(0, 1, 0, 0), w(-1, 0, 1, 0), w(0, 0, 0, 0)),
            A1aiipp => (w(0, 1, 0, 0), w(-1, 0, 1, 0), w(0, 0, 1, 0)),
            A1bip => (w(0, 1, 0, 1), w(-1, 0, 0, 0), w(0, 0, 0, 0)),
            A1bipp => (w(0, 1, 0, 1), w(-1, 0, 0, 0), w(0, 0, 1, 0)),
            A1biip => (w(0, 1, 0, 1), w(-1, 0, 1, 0), w(0, 0, 0, 0)),
            A1biipp => (w(0, 1, 0, 1), w(-1, 0, 1, 0), w(0, 0, 1, 0)),
            A2aip | A2_2i => (w(0, 1, 0, 0), w(-1, 0, 0, -m / 2), w(0, 1, 0, 0)),
            A2aipp => (w(0, 1, 0, 0), w(-1, 0, 0, -m / 2), w(0, 1, 1, 0)),
            A2aiip => (w(0, 1, 0, 0), w(-1, 0, 1, -m / 2), w(0, 1, 0, 0)),
            A2aiipp => (w(0, 1, 0, 0), w(-1, 0, 1, -m / 2), w(0, 1, 1, 0)),
            A2_2ii => (w(0, 1, 0, 0), w(-1, 0, 1, (1 - m) / 2), w(0, 1, 0, 0)),
        };
        ([c1, c2, c3, c4], s)
    }

    /// Representative surface and lifting: `δ1 = δ3 = 1`, `ε3 = ε4 = 0`,
    /// `ε1 ∈ {0, −1/m}`, the remaining data solved from the normal form.
    pub fn representative(&self, m: i64) -> RealStructure {
        use CaseLabel::*;
        let mu1 = matches!(self, B2 | A1_2 | A2_2i | A2_2ii);
        let eps1 = if mu1 { rat(-1, m) } else { int(0) };
        let eps2 = rat(2, m);
        let (case, f1, f2, d1, delta4, gamma1) = match self {
            B1p | B2 => (LinearCase::B, int(0), int(0), int(0), int(1), int(0)),
            B1pp => (LinearCase::B, int(0), int(0), int(0), int(1), rat(1, 2)),
            A1aip | A1_2 => (LinearCase::A, int(0), int(0), int(0), rat(1, 2), int(0)),
            A1aipp => (LinearCase::A, int(0), int(0), int(0), rat(1, 2), rat(1, 2)),
            A1aiip => (LinearCase::A, int(0), int(0), int(0), int(1), int(0)),
            A1aiipp => (LinearCase::A, int(0), int(0), int(0), int(1), rat(1, 2)),
            A1bip => (LinearCase::A, int(0), eps2.clone(), int(0), rat(1, 2) - rat(1, m), int(0)),
            A1bipp => (LinearCase::A, int(0), eps2.clone(), int(0), rat(1, 2) - rat(1, m), rat(1, 2)),
            A1biip => (LinearCase::A, int(0), eps2.clone(), int(0), int(1) - rat(1, m), int(0)),
            A1biipp => (LinearCase::A, int(0), eps2.clone(), int(0), int(1) - rat(1, m), rat(1, 2)),
            A2aip | A2_2i => (LinearCase::A, rat(1, 2), int(0), rat(1, 2), rat(1, 2), rat(3, 8)),
            A2aipp => (LinearCase::A, rat(1, 2), int(0), rat(1, 2), rat(1, 2), rat(7, 8)),
            A2aiip | A2_2ii => (LinearCase::A, rat(1, 2), int(0), rat(1, 2), int(1), rat(3, 8)),
            A2aiipp => (LinearCase::A, rat(1, 2), int(0), rat(1, 2), int(1), rat(7, 8)),
        };
        let params = KodairaParams::new(m, int(1), eps1, int(1), int(0), delta4, int(0))
            .expect("valid representative parameters");
        RealStructure::new(params, Lifting::new(case, f1, f2, d1, gamma1))
            .expect("catalog representatives are admissible")
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseLabel {
    type Err = ClassifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseLabel::ALL
            .into_iter()
            .find(|l| l.name() == s.trim())
            .ok_or_else(|| ClassifyError::UnknownLabel(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EllipticCase {
    A1,
    A2,
    B,
}

impl fmt::Display for EllipticCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EllipticCase::A1 => "A1",
            EllipticCase::A2 => "A2",
            EllipticCase::B => "B",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// `g1 ↦ g1 g2^t`
    ChangeG1 { t: i64 },
    /// `g3 ↦ g3 g1^l g2^t`
    ChangeG3 { l: i64, t: i64 },
    /// `g4 ↦ g4 g1^r g2^s`
    ChangeG4 { r: i64, s: i64 },
    /// `σ̃ ↦ σ̃ z`
    LiftingChange { z: NormalWord },
    /// `σ̃ ↦ τ σ̃ τ⁻¹` with `τ` the translation by `(0, 0, 0, t2)`
    TranslationConjugation { t2: Rat },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::ChangeG1 { t } => write!(f, "g1 -> g1 g2^{t}"),
            Move::ChangeG3 { l, t } => write!(f, "g3 -> g3 g1^{l} g2^{t}"),
            Move::ChangeG4 { r, s } => write!(f, "g4 -> g4 g1^{r} g2^{s}"),
            Move::LiftingChange { z } => write!(f, "sigma -> sigma ({z})"),
            Move::TranslationConjugation { t2 } => {
                write!(f, "conjugate by translation (0, 0, 0, {})", crate::exactalg::fmt_rat(t2))
            }
        }
    }
}

pub type ReductionLog = Vec<Move>;

#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    pub params: KodairaParams,
    /// `σ̃ g_i σ̃⁻¹` for `i = 1..4`.
    pub conj: [NormalWord; 4],
    pub square: NormalWord,
    pub elliptic: EllipticCase,
    /// The lifting realizing the data, when known.
    pub lifting: Option<RatAffine>,
}

fn elliptic_of(conj: &[NormalWord; 4], square: &NormalWord) -> EllipticCase {
    if conj[2].b != 0 {
        EllipticCase::B
    } else if square.a.rem_euclid(2) == 0 {
        EllipticCase::A1
    } else {
        EllipticCase::A2
    }
}

impl Extension {
    pub fn from_data(params: KodairaParams, conj: [NormalWord; 4], square: NormalWord) -> Self {
        let elliptic = elliptic_of(&conj, &square);
        Extension {
            params,
            conj,
            square,
            elliptic,
            lifting: None,
        }
    }

    pub fn m(&self) -> i64 {
        self.params.m
    }

    /// `μ` with `σ̃ g1 σ̃⁻¹ = g1 g2^μ`.
    pub fn mu(&self) -> i64 {
        self.conj[0].t
    }

    /// `σ̃ w σ̃⁻¹`.
    pub fn conj_word(&self, w: &NormalWord) -> NormalWord {
        let m = self.m();
        let c = |i: usize, e: i64| self.conj[i].pow(e, m);
        c(3, w.b).mul(&c(2, w.a), m).mul(&c(0, w.l), m).mul(&c(1, w.t), m)
    }

    /// `(σ̃ g)² = σ̃ g σ̃⁻¹ · σ̃² · g`.
    pub fn square_of(&self, g: &NormalWord) -> NormalWord {
        let m = self.m();
        self.conj_word(g).mul(&self.square, m).mul(g, m)
    }

    /// The group-theoretic constraints every genuine extension satisfies:
    /// conjugation is an automorphism of the right shape, `conj² = inner(σ̃²)`
    /// and `σ̃²` is fixed by conjugation.
    pub fn consistency_error(&self) -> Option<String> {
        let m = self.m();
        let [c1, c2, c3, c4] = self.conj;
        if c2 != NormalWord::new(0, 0, 0, -1) {
            return Some(format!("σ̃ g2 σ̃⁻¹ = {c2}, expected g2^-1"));
        }
        if !c1.is_central() || c1.l != 1 {
            return Some(format!("σ̃ g1 σ̃⁻¹ = {c1} is not g1 g2^μ"));
        }
        let lattice_ok = matches!((c3.b, c3.a, c4.b, c4.a), (0, 1, -1, 0) | (1, 0, 0, 1));
        if !lattice_ok {
            return Some(format!("conjugation acts on the lattice as ({c3}, {c4})"));
        }
        let s = self.square;
        let inv_s = s.inv(m);
        for i in 1..=4u8 {
            let g = NormalWord::g(i);
            let lhs = self.conj_word(&self.conj_word(&g));
            let rhs = s.mul(&g, m).mul(&inv_s, m);
            if lhs != rhs {
                return Some(format!("conjugating g{i} twice gives {lhs}, σ̃² acts as {rhs}"));
            }
        }
        if self.conj_word(&s) != s {
            return Some(format!("σ̃² = {s} is not fixed by conjugation"));
        }
        None
    }

    /// Rewrites the data in new generators `g1' = g1 g2^t1`,
    /// `g3' = g3 g1^l3 g2^t3`, `g4' = g4 g1^l4 g2^t4`.
    fn change_generators(&self, t1: i64, (l3, t3): (i64, i64), (l4, t4): (i64, i64)) -> Extension {
        let m = self.m();
        let rewrite = |w: &NormalWord| {
            let l = w.l - w.b * l4 - w.a * l3;
            let t = w.t - w.b * t4 - w.a * t3;
            NormalWord::new(w.b, w.a, l, t - l * t1)
        };
        let new_gens = [
            NormalWord::new(0, 0, 1, t1),
            NormalWord::g(2),
            NormalWord::new(0, 1, l3, t3),
            NormalWord::new(1, 0, l4, t4),
        ];
        let conj = new_gens.map(|g| rewrite(&self.conj_word(&g)));
        let p = &self.params;
        let (l3r, t3r, l4r, t4r, t1r) = (int(l3), int(t3), int(l4), int(t4), int(t1));
        let eps2 = p.eps2();
        let params = KodairaParams {
            m,
            delta1: p.delta1.clone(),
            eps1: &p.eps1 + &t1r * &eps2,
            delta3: &p.delta3 + &l3r * &p.delta1,
            eps3: &p.eps3 + &l3r * &p.eps1 + &t3r * &eps2,
            delta4: &p.delta4 + &l4r * &p.delta1,
            eps4: &p.eps4 + &l4r * &p.eps1 + &t4r * &eps2,
        };
        Extension {
            params,
            conj,
            square: rewrite(&self.square),
            elliptic: self.elliptic,
            lifting: self.lifting.clone(),
        }
    }

    /// Applies one move to the data and, if present, to the lifting.
    pub fn apply(&self, mv: &Move) -> Extension {
        let m = self.m();
        match mv {
            Move::ChangeG1 { t } => self.change_generators(*t, (0, 0), (0, 0)),
            Move::ChangeG3 { l, t } => self.change_generators(0, (*l, *t), (0, 0)),
            Move::ChangeG4 { r, s } => self.change_generators(0, (0, 0), (*r, *s)),
            Move::LiftingChange { z } => {
                let zi = z.inv(m);
                let conj = [1u8, 2, 3, 4].map(|i| self.conj_word(&z.mul(&NormalWord::g(i), m).mul(&zi, m)));
                let square = self.conj_word(z).mul(&self.square, m).mul(z, m);
                let lifting = self
                    .lifting
                    .as_ref()
                    .map(|s| s.compose(&word_to_affine(z, &self.params)));
                Extension {
                    params: self.params.clone(),
                    conj,
                    square,
                    elliptic: elliptic_of(&conj, &square),
                    lifting,
                }
            }
            Move::TranslationConjugation { t2 } => {
                let mut out = self.clone();
                if let Some(s) = &self.lifting {
                    let tau = RatAffine::translation([int(0), int(0), int(0), t2.clone()]);
                    out.lifting = Some(conjugate(&tau, s));
                }
                out
            }
        }
    }

    /// The move removing `γ2` from the attached lifting, if any.
    fn gamma2_fix(&self) -> Option<Move> {
        let s = self.lifting.as_ref()?;
        let g2 = &s.translation[3];
        (!g2.is_zero()).then(|| Move::TranslationConjugation { t2: -g2 / int(2) })
    }
}

pub fn extension_of(rs: &RealStructure) -> Extension {
    let mut e = Extension::from_data(
        rs.params.clone(),
        [1, 2, 3, 4].map(|i| rs.conj(i)),
        rs.square(),
    );
    e.lifting = Some(rs.sigma());
    e
}

/// Extension of an arbitrary affine lifting, e.g. `σ̃ ∘ g` with `g ∉ Z`.
pub fn extension_of_map(params: &KodairaParams, sigma: &RatAffine) -> Result<Extension, ClassifyError> {
    let gens = params.generators();
    let word = |f: &RatAffine, what: String| {
        affine_to_word(f, params).map_err(|e| ClassifyError::Inadmissible(format!("{what}: {e}")))
    };
    let mut conj = [NormalWord::IDENTITY; 4];
    for i in 0..4 {
        conj[i] = word(&conjugate(sigma, &gens[i]), format!("σ̃ g{} σ̃⁻¹", i + 1))?;
    }
    let square = word(&sigma.compose(sigma), "σ̃²".into())?;
    let mut e = Extension::from_data(params.clone(), conj, square);
    e.lifting = Some(sigma.clone());
    if let Some(msg) = e.consistency_error() {
        return Err(ClassifyError::Inadmissible(msg));
    }
    Ok(e)
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub label: CaseLabel,
    pub log: ReductionLog,
    pub reduced: Extension,
}

fn push(e: &mut Extension, log: &mut ReductionLog, mv: Move) {
    *e = e.apply(&mv);
    log.push(mv);
    if let Some(fix) = e.gamma2_fix() {
        *e = e.apply(&fix);
        log.push(fix);
    }
}

/// Brings the extension into the normal form of its case.
pub fn reduce(e: &Extension) -> Result<Reduction, ClassifyError> {
    if let Some(msg) = e.consistency_error() {
        return Err(ClassifyError::Inadmissible(msg));
    }
    let m = e.m();
    let mut cur = e.clone();
    let mut log = ReductionLog::new();
    if let Some(fix) = cur.gamma2_fix() {
        cur = cur.apply(&fix);
        log.push(fix);
    }
    let case_b = cur.conj[2].b != 0;

    // make σ̃² central (A1, B) or g3 times a central element (A2)
    let s = cur.square;
    let z = if case_b {
        NormalWord::new(-s.b, 0, 0, 0)
    } else {
        NormalWord::new(0, -s.a.div_euclid(2), 0, 0)
    };
    if !z.is_identity() {
        push(&mut cur, &mut log, Move::LiftingChange { z });
    }
    cur.elliptic = elliptic_of(&cur.conj, &cur.square);

    // μ into {0, 1}
    let t = cur.mu().div_euclid(2);
    if t != 0 {
        push(&mut cur, &mut log, Move::ChangeG1 { t });
    }
    let mu = cur.mu();

    if case_b {
        // σ̃ g3 σ̃⁻¹ = g4 g1^r g2^n  ↦  g4
        let c3 = cur.conj[2];
        let (l, t) = (-c3.l, c3.t - mu * c3.l);
        if (l, t) != (0, 0) {
            push(&mut cur, &mut log, Move::ChangeG3 { l, t });
        }
    } else {
        // σ̃ g3 σ̃⁻¹ = g3 g2^n
        let n = cur.conj[2].t;
        let (l, t) = if mu == 0 {
            (0, n.div_euclid(2))
        } else if n.rem_euclid(2) == 0 {
            (0, n / 2)
        } else {
            (1, (n + 1) / 2)
        };
        if (l, t) != (0, 0) {
            push(&mut cur, &mut log, Move::ChangeG3 { l, t });
        }
        // σ̃ g4 σ̃⁻¹ = g4⁻¹ g1^u g2^v with u into {0, 1}
        let u = cur.conj[3].l;
        let r = -u.div_euclid(2);
        if r != 0 {
            push(&mut cur, &mut log, Move::ChangeG4 { r, s: 0 });
        }
    }

    // σ̃² = (g3) g1^p g2^q with p into {0, 1}
    let p = cur.square.l;
    let k = -p.div_euclid(2);
    if k != 0 {
        push(&mut cur, &mut log, Move::LiftingChange { z: NormalWord::new(0, 0, k, 0) });
    }

    let label = label_of(&cur)?;
    let (conj, square) = label.normal_form(m);
    if cur.conj != conj || cur.square != square {
        return Err(ClassifyError::Inadmissible(format!(
            "reduced data ({}, {}, {}, {}; {}) is not the normal form of {label}",
            cur.conj[0], cur.conj[1], cur.conj[2], cur.conj[3], cur.square
        )));
    }
    Ok(Reduction {
        label,
        log,
        reduced: cur,
    })
}

fn label_of(e: &Extension) -> Result<CaseLabel, ClassifyError> {
    use CaseLabel::*;
    let m = e.m();
    let mu = e.mu();
    let n = e.conj[2].t;
    let u = e.conj[3].l;
    let p = e.square.l;
    let bad = |msg: &str| Err(ClassifyError::Inadmissible(msg.to_string()));
    Ok(match (e.elliptic, mu) {
        (EllipticCase::B, 0) => [B1p, B1pp][p as usize],
        (EllipticCase::B, _) => B2,
        (EllipticCase::A1, 0) => match (n, u, p) {
            (0, 0, 0) => A1aip,
            (0, 0, _) => A1aipp,
            (0, _, 0) => A1aiip,
            (0, _, _) => A1aiipp,
            (_, 0, 0) => A1bip,
            (_, 0, _) => A1bipp,
            (_, _, 0) => A1biip,
            _ => A1biipp,
        },
        (EllipticCase::A1, _) => {
            if u != 0 {
                return bad("case 2A1 requires u even");
            }
            A1_2
        }
        (EllipticCase::A2, 0) => {
            if n != 0 {
                return bad("case 1A2 with σ̃ g3 σ̃⁻¹ = g3 g2 does not occur");
            }
            if m % 2 != 0 {
                return bad("case 1A2 requires m even");
            }
            match (u, p) {
                (0, 0) => A2aip,
                (0, _) => A2aipp,
                (_, 0) => A2aiip,
                _ => A2aiipp,
            }
        }
        (EllipticCase::A2, _) => {
            if u != m.rem_euclid(2) {
                return bad("case 2A2 requires u ≡ m (mod 2)");
            }
            if m % 2 == 0 {
                A2_2i
            } else {
                A2_2ii
            }
        }
    })
}

/// Replays a log on the data (and the attached lifting, if any).
pub fn replay(e: &Extension, log: &[Move]) -> Extension {
    let mut cur = e.clone();
    for mv in log {
        cur = cur.apply(mv);
    }
    cur.elliptic = elliptic_of(&cur.conj, &cur.square);
    cur
}

pub fn classify(rs: &RealStructure) -> Result<Reduction, ClassifyError> {
    reduce(&extension_of(rs))
}

const UNKNOWNS: [Var; 4] = [Var::Unknown(0), Var::Unknown(1), Var::Unknown(2), Var::Unknown(3)];

/// The linear part of `(σ̃ g)² = 1` solved over Z: the exponent vectors
/// `(b, a, l, t)` satisfying it form `particular + span_Z(kernel)`. Also
/// returns the remaining `g2`-component condition as a polynomial in
/// the unknowns `b, a, l, t`.
pub fn involution_conditions(e: &Extension) -> Result<Option<(Vec<BigInt>, IntMatrix, Poly)>, ClassifyError> {
    let m = e.m();
    let g = SymWord {
        b: Poly::var(UNKNOWNS[0]),
        a: Poly::var(UNKNOWNS[1]),
        l: Poly::var(UNKNOWNS[2]),
        t: Poly::var(UNKNOWNS[3]),
    };
    let c = |i: usize, n: &Poly| SymWord::from_word(&e.conj[i]).pow(n, m);
    let conj_g = c(3, &g.b).mul(&c(2, &g.a), m).mul(&c(0, &g.l), m).mul(&c(1, &g.t), m);
    let sq = conj_g.mul(&SymWord::from_word(&e.square), m).mul(&g, m);
    let [eb, ea, el, et] = sq.components().map(Clone::clone);
    let sys = DiophSystem::from_linear_polys(&[eb, ea, el], &UNKNOWNS)
        .map_err(|err| ClassifyError::Undecided(err.to_string()))?;
    Ok(match sys.solve() {
        DiophSolution::Solvable { particular, kernel } => Some((particular, kernel, et)),
        DiophSolution::NoSolution => None,
    })
}

/// An element `g` with `(σ̃ g)² = 1`, or a proof that none exists.
/// `(σ̃ g)²` is expanded with symbolic exponents `g = g4^b g3^a g1^l g2^t`;
/// the `b, a, l` components are linear and solved over Z, and the remaining
/// `g2` component is decided on the solution lattice.
pub fn splitting_witness(e: &Extension) -> Result<Option<NormalWord>, ClassifyError> {
    let Some((particular, kernel, et)) = involution_conditions(e)? else {
        return Ok(None);
    };
    let undecided = |msg: String| ClassifyError::Undecided(msg);
    let lambdas: Vec<Var> = (0..kernel.len()).map(|i| Var::Unknown(10 + i as u8)).collect();
    let coord = |j: usize| {
        let mut p = Poly::constant(Rat::from_integer(particular[j].clone()));
        for (k, row) in kernel.iter().enumerate() {
            p = &p + &(&Poly::var(lambdas[k]) * &Poly::constant(Rat::from_integer(row[j].clone())));
        }
        p
    };
    let subst: Vec<Poly> = (0..4).map(coord).collect();
    let reduced = et.substitute(&|v| UNKNOWNS.iter().position(|u| *u == v).map(|j| subst[j].clone()));
    let Some(lam) = integer_zero(&reduced, &lambdas).map_err(|e| undecided(e.to_string()))? else {
        return Ok(None);
    };
    let value = |j: usize| -> i64 {
        let mut x = particular[j].clone();
        for (k, row) in kernel.iter().enumerate() {
            x += &lam[k] * &row[j];
        }
        x.to_i64().expect("small witness")
    };
    let w = NormalWord::new(value(0), value(1), value(2), value(3));
    if !e.square_of(&w).is_identity() {
        return Err(undecided(format!("candidate witness {w} does not square to 1")));
    }
    Ok(Some(w))
}

pub fn splits(e: &Extension) -> Result<bool, ClassifyError> {
    Ok(splitting_witness(e)?.is_some())
}

/// All `g` with exponents in `[-bound, bound]` and `(σ̃ g)² = 1`.
pub fn brute_force_involutions(e: &Extension, bound: i64) -> Vec<NormalWord> {
    let mut out = Vec::new();
    for_each_point(4, -bound, bound, &mut |x| {
        let w = NormalWord::new(x[0], x[1], x[2], x[3]);
        if e.square_of(&w).is_identity() {
            out.push(w);
        }
    });
    out
}

/// Whether two extensions with identical conjugation data are related by a
/// change of lifting `σ̃ ↦ σ̃ z` with `z = g1^r g2^j` central. This needs
/// `σ̃'² = σ̃² g1^{2r} g2^{μ r}`, a linear system over Z in `(r, j)`.
pub fn squares_equivalent(e1: &Extension, e2: &Extension) -> bool {
    if e1.conj != e2.conj || e1.m() != e2.m() {
        return false;
    }
    let (s1, s2) = (e1.square, e2.square);
    if (s1.b, s1.a) != (s2.b, s2.a) {
        return false;
    }
    let mu = e1.mu();
    let sys = DiophSystem::from_i64(
        &[vec![2, 0], vec![mu, 0]],
        &[s2.l - s1.l, s2.t - s1.t],
        &["r", "j"],
    )
    .expect("well-formed system");
    sys.solve().is_solvable()
}

/// Every `'`/`''` pair of the catalog is inequivalent under generator
/// changes and central changes of lifting. A non-central change such as
/// `σ̃ ↦ σ̃ g4` can still relate catalog cases.
pub fn distinct_pairs_check(m: i64) -> bool {
    CaseLabel::for_m(m)
        .into_iter()
        .filter_map(|l| l.partner().map(|p| (l, p)))
        .all(|(l, p)| {
            let e1 = extension_of(&l.representative(m));
            let e2 = extension_of(&p.representative(m));
            e1.conj == e2.conj && !squares_equivalent(&e1, &e2)
        })
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: CaseLabel,
    pub structure: RealStructure,
}

/// One admissible representative per case; each one reduces to its own
/// label. Fails if a representative does not.
pub fn enumerate_cases(m: i64) -> Result<Vec<CatalogEntry>, ClassifyError> {
    let entries: Vec<Result<CatalogEntry, ClassifyError>> = CaseLabel::for_m(m)
        .into_par_iter()
        .map(|label| {
            let structure = label.representative(m);
            let got = classify(&structure)?.label;
            if got != label {
                return Err(ClassifyError::Inadmissible(format!(
                    "representative of {label} reduces to {got}"
                )));
            }
            Ok(CatalogEntry { label, structure })
        })
        .collect();
    let entries: Vec<CatalogEntry> = entries.into_iter().collect::<Result<_, _>>()?;
    let mut seen: Vec<CaseLabel> = entries.iter().map(|e| e.label).collect();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), entries.len(), "catalog labels are distinct");
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_names_round_trip() {
        for l in CaseLabel::ALL {
            assert_eq!(l.name().parse::<CaseLabel>().unwrap(), l);
        }
        assert!("3C".parse::<CaseLabel>().is_err());
    }

    #[test]
    fn normal_forms_are_consistent() {
        for m in 1..=6 {
            for l in CaseLabel::for_m(m) {
                let rs = l.representative(m);
                let (conj, s) = l.normal_form(m);
                let e = Extension::from_data(rs.params.clone(), conj, s);
                assert_eq!(e.consistency_error(), None, "{l} m={m}");
            }
        }
    }
}

#[cfg(test)]
mod catalog_tests {
    use super::*;

    #[test]
    fn representatives_reduce_to_their_labels() {
        for m in 1..=4 {
            for l in CaseLabel::for_m(m) {
                let rs = l.representative(m);
                let r = classify(&rs);
                match r {
                    Ok(r) => assert_eq!(r.label, l, "m={m}"),
                    Err(e) => panic!("{l} m={m}: {e} {:?}", extension_of(&rs)),
                }
            }
        }
    }
}

#[cfg(test)]
mod splitting_tests {
    use super::*;

    #[test]
    fn splitting_matches_brute_force() {
        for m in 1..=4 {
            for l in CaseLabel::for_m(m) {
                let e = extension_of(&l.representative(m));
                let w = splitting_witness(&e).unwrap_or_else(|err| panic!("{l} m={m}: {err}"));
                let bf = brute_force_involutions(&e, 3);
                println!("m={m} {l}: {:?} bf={}", w, bf.len());
                assert_eq!(w.is_some(), !bf.is_empty(), "{l} m={m}");
            }
        }
    }
}
