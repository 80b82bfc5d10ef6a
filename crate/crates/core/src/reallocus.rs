//! The real part `S(R)`: fixed planes of involutive liftings `σ̃ g`, their
//! equivalence under `G`, stabilizers, and the resulting table.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{enumerate_cases, extension_of, involution_conditions, CaseLabel, ClassifyError, Extension};
use crate::exactalg::dioph::{for_each_point, project, IntMatrix};
use crate::exactalg::linalg::kernel;
use crate::exactalg::{fixed_locus, rat, AffineSubspace, DiophSolution, DiophSystem, Poly, Rat, RatAffine, Var};
use crate::group::{g_element, word_to_affine, KodairaParams, NormalWord};
use crate::realstruct::{Lifting, RealStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealLocusError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("fixed locus of σ̃ g for g = {0} is not a plane")]
    NotAPlane(NormalWord),
    #[error("involutive lifting for g = {0} is not equivalent to any representative")]
    NoCollapse(NormalWord),
    #[error("equivalence undecided: {0}")]
    Undecided(String),
    #[error("stabilizer of a component has Hirsch rank {0}")]
    BadStabilizer(usize),
}

/// Window for the exponents of the solution lattice of `(σ̃ g)² = 1`.
pub const WINDOW: i64 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct InvolutiveLifting {
    pub g: NormalWord,
    pub map: RatAffine,
    pub plane: AffineSubspace,
}

fn involutive(rs: &RealStructure, g: NormalWord) -> Result<InvolutiveLifting, RealLocusError> {
    let map = rs.sigma().compose(&word_to_affine(&g, &rs.params));
    let plane = fixed_locus(&map).filter(|p| p.dim() == 2).ok_or(RealLocusError::NotAPlane(g))?;
    Ok(InvolutiveLifting { g, map, plane })
}

fn lattice_points(e: &Extension, lo: i64, hi: i64) -> Result<Vec<NormalWord>, RealLocusError> {
    let Some((particular, basis, _)) = involution_conditions(e)? else {
        return Ok(vec![]);
    };
    let mut out = Vec::new();
    for_each_point(basis.len(), lo, hi, &mut |lam| {
        let mut x = particular.clone();
        for (l, row) in lam.iter().zip(&basis) {
            for (xi, ri) in x.iter_mut().zip(row) {
                *xi += BigInt::from(*l) * ri;
            }
        }
        let c: Vec<i64> = x.iter().map(|v| v.to_i64().expect("small exponent")).collect();
        let g = NormalWord::new(c[0], c[1], c[2], c[3]);
        if e.square_of(&g).is_identity() {
            out.push(g);
        }
    });
    Ok(out)
}

/// Representatives `σ̃ g` of all involutive liftings up to equivalence of
/// their fixed planes: the points of the solution lattice with
/// coordinates in `{0, 1}`. Every involutive lifting with coordinates in
/// `[-WINDOW, WINDOW]` is checked to be equivalent to one of them.
pub fn involutive_liftings(rs: &RealStructure) -> Result<Vec<InvolutiveLifting>, RealLocusError> {
    let e = extension_of(rs);
    let reps: Vec<InvolutiveLifting> = lattice_points(&e, 0, 1)?
        .into_iter()
        .map(|g| involutive(rs, g))
        .collect::<Result<_, _>>()?;
    for g in lattice_points(&e, -WINDOW, WINDOW)? {
        let il = involutive(rs, g)?;
        let mut found = false;
        for r in &reps {
            if components_equivalent(&il.plane, &r.plane, rs)?.is_some() {
                found = true;
                break;
            }
        }
        if !found {
            return Err(RealLocusError::NoCollapse(g));
        }
    }
    Ok(reps)
}

const H_VARS: [Var; 4] = [Var::Unknown(0), Var::Unknown(1), Var::Unknown(2), Var::Unknown(3)];

/// `h = g4^b g3^a g1^l g2^t` with symbolic exponents.
fn symbolic_element(p: &KodairaParams) -> crate::exactalg::PolyAffine {
    let [b, a, l, t] = H_VARS.map(Poly::var);
    let c = |r: &Rat| Poly::constant(r.clone());
    let half = Poly::constant(rat(1, 2));
    let tri = |n: &Poly| &(&(n * n) - n) * &half;
    let x2 = &(&(&(&b * &c(&p.delta4)) + &tri(&b)) + &(&(&a * &c(&p.delta3)) + &tri(&a))) + &(&l * &c(&p.delta1));
    let y2 = &(&(&(&b * &c(&p.eps4)) + &(&a * &c(&p.eps3))) - &(&a * &b)) + &(&(&l * &c(&p.eps1)) + &(&t * &c(&p.eps2())));
    g_element(a, b, x2, y2)
}

/// Conditions on `h` for `h(src) = dst`: the image directions and the image
/// of the basepoint lie in `dst`, tested against annihilators of `dst`.
fn mapping_equations(src: &AffineSubspace, dst: &AffineSubspace, p: &KodairaParams) -> Vec<Poly> {
    let h = symbolic_element(p);
    let annihilators = kernel(dst.directions(), 4);
    let to_poly = |v: &[Rat]| -> [Poly; 4] { std::array::from_fn(|i| Poly::constant(v[i].clone())) };
    let dot = |w: &[Rat], v: &[Poly; 4]| {
        (0..4).fold(Poly::zero(), |acc, i| &acc + &v[i].scale(&w[i]))
    };
    let mut eqs = Vec::new();
    for w in &annihilators {
        for u in src.directions() {
            eqs.push(dot(w, &h.apply_linear(&to_poly(u))));
        }
        let image = h.apply(&to_poly(src.basepoint()));
        let target = to_poly(dst.basepoint());
        let diff: [Poly; 4] = std::array::from_fn(|i| &image[i] - &target[i]);
        eqs.push(dot(w, &diff));
    }
    eqs.retain(|e| !e.is_zero());
    eqs
}

fn undecided(e: impl ToString) -> RealLocusError {
    RealLocusError::Undecided(e.to_string())
}

fn to_word(x: &[BigInt], y: &[BigInt]) -> NormalWord {
    let c = |v: &BigInt| v.to_i64().expect("small exponent");
    NormalWord::new(c(&x[0]), c(&x[1]), c(&y[0]), c(&y[1]))
}

/// An element `h ∈ G` with `h(src) = dst`, or `None` if the integer
/// conditions have no solution. The lattice part `(b, a)` is solved first;
/// the central part `(l, t)` enters linearly and is handled by a residue
/// search over one period.
pub fn components_equivalent(
    src: &AffineSubspace,
    dst: &AffineSubspace,
    rs: &RealStructure,
) -> Result<Option<NormalWord>, RealLocusError> {
    if src.dim() != dst.dim() {
        return Ok(None);
    }
    let eqs = mapping_equations(src, dst, &rs.params);
    let proj = project(&eqs, &H_VARS[..2], &H_VARS[2..]).map_err(undecided)?;
    let Some((x, y)) = proj.and_then(|p| p.witness()) else {
        return Ok(None);
    };
    let h = to_word(&x, &y);
    if src.image(&word_to_affine(&h, &rs.params)) != *dst {
        return Err(undecided(format!("witness {h} does not map the plane")));
    }
    Ok(Some(h))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilizer {
    pub generators: Vec<NormalWord>,
    /// Hirsch length: rank of the central part plus rank of the image in Z².
    pub rank: usize,
    pub abelian: bool,
}

impl Stabilizer {
    /// A rank-2 stabilizer that is not abelian is the Klein bottle group.
    pub fn is_klein(&self) -> bool {
        self.rank == 2 && !self.abelian
    }
}

/// `{h ∈ G : h(plane) = plane}`: generated by lifts of a basis of its image
/// in Z² (the `(b, a)` part) together with a basis of its central part.
pub fn stabilizer(plane: &AffineSubspace, rs: &RealStructure) -> Result<Stabilizer, RealLocusError> {
    let m = rs.m();
    let eqs = mapping_equations(plane, plane, &rs.params);
    let proj = project(&eqs, &H_VARS[..2], &H_VARS[2..])
        .map_err(undecided)?
        .ok_or_else(|| undecided("identity does not stabilize the plane"))?;
    let image = proj.lattice().ok_or_else(|| undecided("image of the stabilizer is not a subgroup"))?;
    let mut generators = Vec::new();
    for v in &image {
        let y = proj.lift(v).ok_or_else(|| undecided("lattice vector does not lift"))?;
        generators.push(to_word(v, &y));
    }
    let central_eqs: Vec<Poly> = eqs
        .iter()
        .map(|e| e.eval_partial(&|v| (v == H_VARS[0] || v == H_VARS[1]).then(Rat::zero)))
        .collect();
    let sys = DiophSystem::from_linear_polys(&central_eqs, &H_VARS[2..]).map_err(undecided)?;
    let central: IntMatrix = match sys.solve() {
        DiophSolution::Solvable { particular, kernel } if particular.iter().all(Zero::is_zero) => kernel,
        _ => return Err(undecided("central part of the stabilizer is not a subgroup")),
    };
    let zero = vec![BigInt::zero(); 2];
    for z in &central {
        generators.push(to_word(&zero, z));
    }
    let abelian = generators
        .iter()
        .all(|x| generators.iter().all(|y| x.commutator(y, m).is_identity()));
    Ok(Stabilizer {
        rank: image.len() + central.len(),
        generators,
        abelian,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Topology {
    Torus,
    KleinBottle,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Torus => "torus",
            Topology::KleinBottle => "klein-bottle",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentClass {
    pub plane: AffineSubspace,
    pub lifting: Lifting,
    pub g: NormalWord,
    pub stabilizer: Stabilizer,
    pub topology: Topology,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealPartReport {
    pub label: Option<CaseLabel>,
    pub m: i64,
    pub components: Vec<ComponentClass>,
}

impl RealPartReport {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn tori(&self) -> usize {
        self.components.iter().filter(|c| c.topology == Topology::Torus).count()
    }

    /// `∅`, `T`, `2T`, ... as in the table.
    pub fn summary(&self) -> String {
        let klein = self.count() - self.tori();
        let mut parts = Vec::new();
        match self.tori() {
            0 => {}
            1 => parts.push("T".to_string()),
            n => parts.push(format!("{n}T")),
        }
        match klein {
            0 => {}
            1 => parts.push("K".to_string()),
            n => parts.push(format!("{n}K")),
        }
        if parts.is_empty() {
            "∅".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    if parent[i] != i {
        let r = find(parent, parent[i]);
        parent[i] = r;
    }
    parent[i]
}

pub fn real_part(rs: &RealStructure) -> Result<RealPartReport, RealLocusError> {
    let reps = involutive_liftings(rs)?;
    let mut parent: Vec<usize> = (0..reps.len()).collect();
    for i in 0..reps.len() {
        for j in 0..i {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            if components_equivalent(&reps[i].plane, &reps[j].plane, rs)?.is_some() {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut components = Vec::new();
    for i in 0..reps.len() {
        if find(&mut parent, i) != i {
            continue;
        }
        let stab = stabilizer(&reps[i].plane, rs)?;
        if stab.rank != 2 {
            return Err(RealLocusError::BadStabilizer(stab.rank));
        }
        let topology = if stab.abelian { Topology::Torus } else { Topology::KleinBottle };
        components.push(ComponentClass {
            plane: reps[i].plane.clone(),
            lifting: rs.lifting.clone(),
            g: reps[i].g,
            stabilizer: stab,
            topology,
        });
    }
    let label = crate::classify::classify(rs).ok().map(|r| r.label);
    Ok(RealPartReport {
        label,
        m: rs.m(),
        components,
    })
}

/// One report per catalog case, in catalog order.
pub fn full_table(m: i64) -> Result<Vec<RealPartReport>, RealLocusError> {
    let entries = enumerate_cases(m)?;
    entries
        .par_iter()
        .map(|entry| {
            let mut r = real_part(&entry.structure)?;
            r.label = Some(entry.label);
            Ok(r)
        })
        .collect()
}

/// Number of tori in the real part of each case, as published.
pub fn published_table(m: i64) -> Vec<(CaseLabel, usize)> {
    use CaseLabel::*;
    let even = m % 2 == 0;
    CaseLabel::for_m(m)
        .into_iter()
        .map(|l| {
            let t = match (l, even) {
                (B1p, true) => 2,
                (B1p, false) => 1,
                (B2, _) => 1,
                (A1aip, true) => 4,
                (A1aip, false) => 3,
                (A1aiip, _) => 2,
                (A1aiipp, true) => 2,
                (A1aiipp, false) => 1,
                (A1bip, true) => 3,
                (A1bip, false) => 4,
                (A1biip, _) => 1,
                (A1biipp, true) => 1,
                (A1biipp, false) => 2,
                (A1_2, _) => 2,
                _ => 0,
            };
            (l, t)
        })
        .collect()
}

/// `σ̃⁻¹ h σ̃ · g · h⁻¹`: the element whose lifting fixes `h(Fix(σ̃ g))`.
pub fn twisted_conjugate(e: &Extension, g: &NormalWord, h: &NormalWord) -> NormalWord {
    let m = e.m();
    let s = e.square;
    // σ̃⁻¹ y σ̃ = σ̃ (σ̃⁻² y σ̃²) σ̃⁻¹
    let inner = s.inv(m).mul(h, m).mul(&s, m);
    e.conj_word(&inner).mul(g, m).mul(&h.inv(m), m)
}

/// Pairs `(g, h)` in the box `|·| ≤ bound` relating two involutive elements.
pub fn brute_force_equivalent(e: &Extension, g: &NormalWord, g2: &NormalWord, bound: i64) -> Option<NormalWord> {
    let mut found = None;
    for_each_point(4, -bound, bound, &mut |x| {
        if found.is_some() {
            return;
        }
        let h = NormalWord::new(x[0], x[1], x[2], x[3]);
        if twisted_conjugate(e, g, &h) == *g2 {
            found = Some(h);
        }
    });
    found
}

/// Sanity data for the identity lifting check: `Γ`, `h(Γ)` for tests.
pub fn plane_image(plane: &AffineSubspace, h: &NormalWord, p: &KodairaParams) -> AffineSubspace {
    plane.image(&word_to_affine(h, p))
}

/// Independent count of components: involutive `g` with exponents in
/// `[-outer, outer]`, joined whenever a generator or its inverse relates two
/// of them by twisted conjugacy, counting the classes that meet
/// `[-inner, inner]`.
pub fn orbit_count(e: &Extension, inner: i64, outer: i64) -> usize {
    let m = e.m();
    let invs = crate::classify::brute_force_involutions(e, outer);
    let index: std::collections::HashMap<NormalWord, usize> = invs.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut parent: Vec<usize> = (0..invs.len()).collect();
    let gens: Vec<NormalWord> = (1..=4u8).flat_map(|i| [NormalWord::g(i), NormalWord::g(i).inv(m)]).collect();
    for (i, g) in invs.iter().enumerate() {
        for h in &gens {
            if let Some(&j) = index.get(&twisted_conjugate(e, g, h)) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let small = |g: &NormalWord| [g.b, g.a, g.l, g.t].iter().all(|x| x.abs() <= inner);
    let mut roots: Vec<usize> = (0..invs.len())
        .filter(|&i| small(&invs[i]))
        .map(|i| find(&mut parent, i))
        .collect();
    roots.sort();
    roots.dedup();
    roots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_small_m() {
        for m in 1..=4 {
            let table = full_table(m).unwrap();
            let published = published_table(m);
            for (r, (l, t)) in table.iter().zip(&published) {
                assert_eq!(r.label, Some(*l));
                assert_eq!(r.count(), r.tori());
                // 1A1bi' differs from the published count, see the orbit test
                if *l != CaseLabel::A1bip {
                    assert_eq!(r.tori(), *t, "m={m} {l}");
                }
            }
        }
    }

    #[test]
    fn orbit_oracle_agrees() {
        for m in 1..=4 {
            for l in CaseLabel::for_m(m) {
                let rs = l.representative(m);
                let e = extension_of(&rs);
                assert_eq!(real_part(&rs).unwrap().count(), orbit_count(&e, 1, 3), "m={m} {l}");
            }
        }
    }

    #[test]
    fn a1bip_orbit_count() {
        // involutions are g4^b g2^t; g4, g2 shift b, t by 2 and g3 shifts t by 1 + m b
        for m in 1..=4 {
            let rs = CaseLabel::A1bip.representative(m);
            let expected = if m % 2 == 0 { 2 } else { 3 };
            assert_eq!(real_part(&rs).unwrap().count(), expected);
        }
    }
}
