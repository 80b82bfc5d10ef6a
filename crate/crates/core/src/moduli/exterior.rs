//! Differential forms on R⁴ with polynomial coefficients, enough to pull back
//! Borcea's basis of invariant 2-forms along affine maps.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::exactalg::{Poly, Rat, RatAffine, Var};

pub const COORDS: [Var; 4] = [Var::X1, Var::Y1, Var::X2, Var::Y2];
const NAMES: [&str; 4] = ["dx1", "dy1", "dx2", "dy2"];

/// A differential form: basis monomials `dx_I` indexed by bitmask over
/// `(dx1, dy1, dx2, dy2)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Form {
    terms: BTreeMap<u8, Poly>,
}

fn sign_of_merge(a: u8, b: u8) -> i64 {
    // number of pairs (i in a, j in b) with i > j
    let mut inversions = 0;
    for i in 0..4 {
        if a & (1 << i) != 0 {
            inversions += (b & ((1u8 << i) - 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn function(f: Poly) -> Self {
        Form::default().with(0, f)
    }

    /// `dx_i` for `i = 0..4`.
    pub fn d_coord(i: usize) -> Self {
        Form::function(Poly::int(1)).with_basis(1 << i)
    }

    fn with(mut self, mask: u8, c: Poly) -> Self {
        if !c.is_zero() {
            let e = self.terms.entry(mask).or_insert_with(Poly::zero);
            *e = &*e + &c;
            if e.is_zero() {
                self.terms.remove(&mask);
            }
        }
        self
    }

    fn with_basis(self, mask: u8) -> Self {
        let c = self.terms.get(&0).cloned().unwrap_or_else(Poly::zero);
        Form::default().with(mask, c)
    }

    pub fn coeff(&self, mask: u8) -> Poly {
        self.terms.get(&mask).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale_poly(&self, f: &Poly) -> Form {
        self.terms
            .iter()
            .fold(Form::zero(), |acc, (m, c)| acc.with(*m, c * f))
    }

    pub fn scale(&self, r: &Rat) -> Form {
        self.scale_poly(&Poly::constant(r.clone()))
    }

    pub fn wedge(&self, o: &Form) -> Form {
        let mut out = Form::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if a & b != 0 {
                    continue;
                }
                let c = &(ca * cb) * &Poly::int(sign_of_merge(*a, *b));
                out = out.with(a | b, c);
            }
        }
        out
    }

    pub fn d(&self) -> Form {
        let mut out = Form::zero();
        for (mask, c) in &self.terms {
            for (i, v) in COORDS.iter().enumerate() {
                let bit = 1u8 << i;
                if mask & bit != 0 {
                    continue;
                }
                let dc = c.derivative(*v);
                let s = sign_of_merge(bit, *mask);
                out = out.with(mask | bit, &dc * &Poly::int(s));
            }
        }
        out
    }

    /// `F*` for an affine map `F`.
    pub fn pullback(&self, f: &RatAffine) -> Form {
        let image: Vec<Poly> = {
            let x: [Poly; 4] = COORDS.map(Poly::var);
            f.map_entries(|r| Poly::constant(r.clone())).apply(&x).to_vec()
        };
        let d_image: Vec<Form> = (0..4)
            .map(|i| {
                (0..4).fold(Form::zero(), |acc, j| {
                    acc + Form::d_coord(j).scale(&f.linear[i][j])
                })
            })
            .collect();
        let mut out = Form::zero();
        for (mask, c) in &self.terms {
            let c = c.substitute(&|v| COORDS.iter().position(|w| *w == v).map(|i| image[i].clone()));
            let mut term = Form::function(c);
            for (i, di) in d_image.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    term = term.wedge(di);
                }
            }
            out = out + term;
        }
        out
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, o: Form) -> Form {
        o.terms.into_iter().fold(self, |acc, (m, c)| acc.with(m, c))
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(&Rat::from_integer((-1).into()))
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, o: Form) -> Form {
        self + (-o)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let basis: Vec<&str> = (0..4).filter(|i| m & (1 << i) != 0).map(|i| NAMES[i]).collect();
                if basis.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}) {}", basis.join("∧"))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `ω1..ω4`: `dx1`, `dy1`, `dx2 − x1 dx1 − y1 dy1`, `dy2 − x1 dy1 + y1 dx1`.
pub fn omega() -> [Form; 4] {
    let (x1, y1) = (Poly::var(Var::X1), Poly::var(Var::Y1));
    let d = Form::d_coord;
    [
        d(0),
        d(1),
        d(2) - d(0).scale_poly(&x1) - d(1).scale_poly(&y1),
        d(3) - d(1).scale_poly(&x1) + d(0).scale_poly(&y1),
    ]
}

/// `θ13, θ23, θ14, θ24` with `θij = ωi ∧ ωj`, in the order of the period
/// coordinates.
pub fn theta() -> [Form; 4] {
    let w = omega();
    [w[0].wedge(&w[2]), w[1].wedge(&w[2]), w[0].wedge(&w[3]), w[1].wedge(&w[3])]
}

pub const SLOT_NAMES: [&str; 5] = ["dx1∧dy1", "dx1∧dx2", "dy1∧dx2", "dx1∧dy2", "dy1∧dy2"];
const SLOT_MASKS: [u8; 5] = [0b0011, 0b0101, 0b0110, 0b1001, 0b1010];

/// A 2-form with no `dx2∧dy2` part: the coefficients of `dx1∧dy1`,
/// `dx1∧dx2`, `dy1∧dx2`, `dx1∧dy2`, `dy1∧dy2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForm(pub [Poly; 5]);

impl TwoForm {
    pub fn zero() -> Self {
        TwoForm(std::array::from_fn(|_| Poly::zero()))
    }

    /// `None` unless `f` is a 2-form in the span of the five slots.
    pub fn from_form(f: &Form) -> Option<TwoForm> {
        if f.terms.keys().any(|m| !SLOT_MASKS.contains(m)) {
            return None;
        }
        Some(TwoForm(SLOT_MASKS.map(|m| f.coeff(m))))
    }

    pub fn to_form(&self) -> Form {
        SLOT_MASKS
            .iter()
            .zip(&self.0)
            .fold(Form::zero(), |acc, (m, c)| acc.with(*m, c.clone()))
    }

    pub fn pullback(&self, f: &RatAffine) -> TwoForm {
        TwoForm::from_form(&self.to_form().pullback(f)).expect("affine pullbacks of the five slots stay in them")
    }

    pub fn scale(&self, r: &Rat) -> TwoForm {
        TwoForm(self.0.clone().map(|c| c.scale(r)))
    }
}

impl Add for TwoForm {
    type Output = TwoForm;
    fn add(self, o: TwoForm) -> TwoForm {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(&o.0) {
            *a = &*a + b;
        }
        TwoForm(out)
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_form(), f)
    }
}
