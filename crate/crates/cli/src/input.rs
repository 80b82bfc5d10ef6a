//! The flat `key = value` parameter file. Lines starting with `#` and blank
//! lines are ignored; every key must appear exactly once.

use std::collections::BTreeMap;

use thiserror::Error;

use kodaira_core::exactalg::{parse_rat, Rat};
use kodaira_core::group::KodairaParams;
use kodaira_core::realstruct::{Lifting, LinearCase};

pub const KEYS: [&str; 12] = [
    "case", "m", "delta1", "eps1", "delta3", "eps3", "delta4", "eps4", "f1", "f2", "d1", "gamma1",
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key {key:?}")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: {key}: {msg}")]
    BadValue { line: usize, key: String, msg: String },
    #[error("missing key {0:?}")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct Input {
    pub params: KodairaParams,
    pub lifting: Lifting,
}

pub fn parse(text: &str) -> Result<Input, InputError> {
    let mut values: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let Some((k, v)) = s.split_once('=') else {
            return Err(InputError::Syntax { line, text: raw.to_string() });
        };
        let (k, v) = (k.trim(), v.trim());
        let Some(key) = KEYS.iter().find(|x| **x == k) else {
            return Err(InputError::UnknownKey { line, key: k.to_string() });
        };
        if values.insert(key, (line, v)).is_some() {
            return Err(InputError::Duplicate { line, key: k.to_string() });
        }
    }
    let get = |k: &'static str| values.get(k).copied().ok_or(InputError::Missing(k));
    let num = |k: &'static str| -> Result<Rat, InputError> {
        let (line, v) = get(k)?;
        parse_rat(v).map_err(|e| InputError::BadValue { line, key: k.into(), msg: e.to_string() })
    };
    let (line, c) = get("case")?;
    let case = match c {
        "A" | "a" => LinearCase::A,
        "B" | "b" => LinearCase::B,
        _ => {
            return Err(InputError::BadValue { line, key: "case".into(), msg: format!("expected A or B, got {c:?}") })
        }
    };
    let (line, mv) = get("m")?;
    let m: i64 = mv
        .parse()
        .ok()
        .filter(|m| *m >= 1)
        .ok_or_else(|| InputError::BadValue { line, key: "m".into(), msg: format!("expected a positive integer, got {mv:?}") })?;
    let params = KodairaParams::new(m, num("delta1")?, num("eps1")?, num("delta3")?, num("eps3")?, num("delta4")?, num("eps4")?)
        .map_err(|e| InputError::Invalid(e.to_string()))?;
    let lifting = Lifting::new(case, num("f1")?, num("f2")?, num("d1")?, num("gamma1")?);
    Ok(Input { params, lifting })
}

/// The file that reproduces a structure.
pub fn render(params: &KodairaParams, l: &Lifting) -> String {
    use kodaira_core::exactalg::fmt_rat;
    let rows = [
        ("case", l.case.to_string()),
        ("m", params.m.to_string()),
        ("delta1", fmt_rat(&params.delta1)),
        ("eps1", fmt_rat(&params.eps1)),
        ("delta3", fmt_rat(&params.delta3)),
        ("eps3", fmt_rat(&params.eps3)),
        ("delta4", fmt_rat(&params.delta4)),
        ("eps4", fmt_rat(&params.eps4)),
        ("f1", fmt_rat(&l.f1)),
        ("f2", fmt_rat(&l.f2)),
        ("d1", fmt_rat(&l.d1)),
        ("gamma1", fmt_rat(&l.gamma1)),
    ];
    rows.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use kodaira_core::classify::CaseLabel;

    #[test]
    fn round_trip() {
        let rs = CaseLabel::A1bip.representative(3);
        let text = render(&rs.params, &rs.lifting);
        let back = parse(&text).unwrap();
        assert_eq!(back.params, rs.params);
        assert_eq!(back.lifting, rs.lifting);
    }

    #[test]
    fn diagnostics_name_the_line() {
        let rs = CaseLabel::B1p.representative(2);
        let text = render(&rs.params, &rs.lifting).replace("f2 = 0/1", "f2 = x");
        assert!(matches!(parse(&text), Err(InputError::BadValue { line: 10, .. })));
        assert!(matches!(parse("case = A\nbogus"), Err(InputError::Syntax { line: 2, .. })));
        assert!(matches!(parse("case = A\n"), Err(InputError::Missing("m"))));
    }
}
