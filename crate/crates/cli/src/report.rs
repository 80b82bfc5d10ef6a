//! Reports are built once as JSON values; the human format is a plain
//! rendering of the same value, so both formats carry the same facts.

use serde_json::{json, Map, Value};

use kodaira_core::classify::Reduction;
use kodaira_core::exactalg::{fmt_rat, AffineSubspace, Rat};
use kodaira_core::group::NormalWord;
use kodaira_core::reallocus::{ComponentClass, RealPartReport};

pub fn rat(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn word(w: &NormalWord) -> Value {
    Value::String(w.to_string())
}

pub fn plane(p: &AffineSubspace) -> Value {
    json!({
        "basepoint": p.basepoint().iter().map(rat).collect::<Vec<_>>(),
        "directions": p.directions().iter().map(|d| d.iter().map(rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn component(c: &ComponentClass) -> Value {
    json!({
        "g": word(&c.g),
        "plane": plane(&c.plane),
        "stabilizer": c.stabilizer.generators.iter().map(word).collect::<Vec<_>>(),
        "topology": c.topology.to_string(),
    })
}

pub fn real_part(r: &RealPartReport) -> Value {
    json!({
        "label": r.label.map(|l| l.to_string()),
        "real_part": r.summary(),
        "tori": r.tori(),
        "components": r.components.iter().map(component).collect::<Vec<_>>(),
    })
}

pub fn reduction(r: &Reduction) -> Value {
    let e = &r.reduced;
    json!({
        "label": r.label.to_string(),
        "elliptic": e.elliptic.to_string(),
        "log": r.log.iter().map(|m| Value::String(m.to_string())).collect::<Vec<_>>(),
        "conj": {
            "g1": word(&e.conj[0]),
            "g2": word(&e.conj[1]),
            "g3": word(&e.conj[2]),
            "g4": word(&e.conj[3]),
        },
        "square": word(&e.square),
    })
}

pub fn to_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn scalar(v: &Value) -> Option<String> {
    Some(match v {
        Value::Null => "none".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(a) if a.is_empty() => "[]".into(),
        Value::Array(a) if a.iter().all(|x| scalar(x).is_some() && !x.is_array() && !x.is_object()) => {
            format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", "))
        }
        _ => return None,
    })
}

fn render_map(m: &Map<String, Value>, indent: usize, out: &mut String) {
    for (k, v) in m {
        let pad = " ".repeat(indent);
        match scalar(v) {
            Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                render(v, indent + 2, out);
            }
        }
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => render_map(m, indent, out),
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render(x, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn to_human(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trips_byte_for_byte() {
        let v = json!({"z": [1, {"b": "1/2", "a": null}], "a": true});
        let s = to_json(&v);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(to_json(&back), s);
        assert!(s.find("\"a\"").unwrap() < s.find("\"z\"").unwrap());
    }

    #[test]
    fn human_rendering() {
        let v = json!({"label": "1B'", "log": [], "rows": [{"x": "1/2"}]});
        assert_eq!(to_human(&v), "label: 1B'\nlog: []\nrows:\n  -\n    x: 1/2\n");
    }
}
