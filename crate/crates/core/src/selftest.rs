//! Property suites run by `kodaira selftest`. Each suite checks computed
//! results against an independent oracle and reports its failures.

use std::fmt;
use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::classify::{brute_force_involutions, enumerate_cases, extension_of, splits};
use crate::exactalg::{rat, Rat};
use crate::group::{collect, word_to_affine, GroupWord, KodairaParams, NormalWord};
use crate::moduli::{
    borcea_act, exchange_check, locus_predicate, random_point, random_sample, reality_conditions, sample_lifting,
    to_halfplanes, ActionMatrix, PeriodPoint,
};
use crate::reallocus::{orbit_count, real_part};
use crate::realstruct::LinearCase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Collection,
    Splitting,
    Table,
    Moduli,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Collection, Suite::Splitting, Suite::Table, Suite::Moduli];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Collection => "collection",
            Suite::Splitting => "splitting",
            Suite::Table => "table",
            Suite::Moduli => "moduli",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug)]
pub struct SelfTestConfig {
    pub seed: u64,
    pub only: Option<Suite>,
    /// Deliberately break one check in every suite, to exercise the failure path.
    pub corrupt: bool,
}

impl Default for SelfTestConfig {
    fn default() -> Self {
        SelfTestConfig {
            seed: 20_240_601,
            only: None,
            corrupt: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn report(self, suite: Suite) -> SuiteReport {
        SuiteReport {
            suite,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

fn random_rat<R: Rng>(rng: &mut R) -> Rat {
    rat(rng.gen_range(-12..=12), rng.gen_range(1..=8))
}

pub fn random_params<R: Rng>(rng: &mut R, m: i64) -> KodairaParams {
    let mut delta1 = random_rat(rng);
    if delta1 == rat(0, 1) {
        delta1 = rat(1, 1);
    }
    KodairaParams::new(m, delta1, random_rat(rng), random_rat(rng), random_rat(rng), random_rat(rng), random_rat(rng))
        .expect("nonzero delta1")
}

fn collection(cfg: &SelfTestConfig, rng: &mut StdRng) -> SuiteReport {
    let mut t = Tally::new();
    for i in 0..2000 {
        let m = [1, 2, 3, 5][i % 4];
        let p = random_params(rng, m);
        let w = GroupWord::random(rng, 12, 3);
        let mut n = collect(&w, m);
        if cfg.corrupt && i == 0 {
            n = n.mul(&NormalWord::g(2), m);
        }
        t.check(word_to_affine(&n, &p) == w.to_affine(&p), || format!("m={m} word {:?} collects to {n}", w.0));
    }
    t.report(Suite::Collection)
}

fn splitting(cfg: &SelfTestConfig) -> SuiteReport {
    let mut t = Tally::new();
    for m in 1..=4 {
        let entries = match enumerate_cases(m) {
            Ok(e) => e,
            Err(e) => {
                t.check(false, || format!("m={m}: {e}"));
                continue;
            }
        };
        for (i, entry) in entries.iter().enumerate() {
            let e = extension_of(&entry.structure);
            let mut decided = splits(&e).unwrap_or(false);
            if cfg.corrupt && m == 1 && i == 0 {
                decided = !decided;
            }
            let found = !brute_force_involutions(&e, 3).is_empty();
            t.check(decided == found, || {
                format!("m={m} {}: decision {decided}, brute force {found}", entry.label)
            });
        }
    }
    t.report(Suite::Splitting)
}

fn table(cfg: &SelfTestConfig) -> SuiteReport {
    let mut t = Tally::new();
    for m in 1..=4 {
        let entries = match enumerate_cases(m) {
            Ok(e) => e,
            Err(e) => {
                t.check(false, || format!("m={m}: {e}"));
                continue;
            }
        };
        for (i, entry) in entries.iter().enumerate() {
            let e = extension_of(&entry.structure);
            let computed = match real_part(&entry.structure) {
                Ok(r) => {
                    t.check(r.count() == r.tori(), || format!("m={m} {}: non-torus component", entry.label));
                    r.count()
                }
                Err(err) => {
                    t.check(false, || format!("m={m} {}: {err}", entry.label));
                    continue;
                }
            };
            let mut oracle = orbit_count(&e, 1, 3);
            if cfg.corrupt && m == 2 && i == 0 {
                oracle += 1;
            }
            t.check(computed == oracle, || {
                format!("m={m} {}: {computed} components, orbit oracle {oracle}", entry.label)
            });
        }
    }
    t.report(Suite::Table)
}

fn moduli(cfg: &SelfTestConfig, rng: &mut StdRng) -> SuiteReport {
    let mut t = Tally::new();
    for i in 0..200 {
        let p = random_point(rng);
        let act = ActionMatrix::random(rng, 3);
        let m = rng.gen_range(1..=6);
        let mut q = borcea_act(&act, m, &p);
        if cfg.corrupt && i == 0 {
            q.p13 = &q.p13 + &q.p14;
        }
        t.check(q.validate().is_ok(), || format!("{act:?} on {p} leaves D"));
    }
    for case in [LinearCase::A, LinearCase::B] {
        for f2_zero in [true, false] {
            t.check(exchange_check(case, f2_zero, 2), || format!("exchange fails in case {case}, f2 zero {f2_zero}"));
            let l = sample_lifting(case, f2_zero);
            for _ in 0..50 {
                let (x, y) = random_sample(rng, case, f2_zero);
                let Ok(p) = PeriodPoint::from_halfplanes(&x, &y) else {
                    continue;
                };
                let (x, y) = to_halfplanes(&p).expect("valid");
                let want = locus_predicate(case, f2_zero, &x, &y);
                t.check(reality_conditions(&l, &p) == want, || {
                    format!("case {case} f2 zero {f2_zero}: reality conditions disagree at {p}")
                });
            }
        }
    }
    t.report(Suite::Moduli)
}

pub fn run(cfg: &SelfTestConfig) -> Vec<SuiteReport> {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    Suite::ALL
        .into_iter()
        .filter(|s| cfg.only.is_none_or(|o| o == *s))
        .map(|s| match s {
            Suite::Collection => collection(cfg, &mut rng),
            Suite::Splitting => splitting(cfg),
            Suite::Table => table(cfg),
            Suite::Moduli => moduli(cfg, &mut rng),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_run_passes_and_corruption_fails() {
        let reports = run(&SelfTestConfig::default());
        assert_eq!(reports.len(), 4);
        for r in &reports {
            assert!(r.passed(), "{}: {:?}", r.suite, r.failures);
        }
        let bad = run(&SelfTestConfig {
            corrupt: true,
            ..Default::default()
        });
        assert!(bad.iter().all(|r| !r.passed()));
    }
}
