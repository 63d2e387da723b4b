//! JSON model descriptors.  A descriptor is an object with a `constructor`
//! key naming a catalog constructor and the remaining keys carrying its
//! arguments; inner models nest as descriptors.  Every build returns the
//! canonical provenance that reports embed.

use std::rc::Rc;

use serde_json::{json, Map, Value};
use weyl_core::grammar::parse_element;
use weyl_core::groebner::{buchberger, GroebnerBasis};
use weyl_core::model::{
    cech_local_cohomology_model, direct_sum, koszul_last_var, laurent_model, matlis_dual,
    polynomial_model, presentation_model, shift_model, transpose_model, GradedModel, LastVarOp,
};
use weyl_core::order::BaseOrder;
use weyl_core::{Mono, WeylElement};

pub struct BuiltModel {
    pub model: Rc<GradedModel>,
    pub provenance: Value,
}

pub struct BuiltPresentation {
    pub n: usize,
    pub shift: i64,
    pub gb: GroebnerBasis,
    pub provenance: Value,
}

pub fn parse_model(text: &str) -> Result<BuiltModel, String> {
    build_model(&parse_json(text)?)
}

pub fn parse_presentation(text: &str) -> Result<BuiltPresentation, String> {
    build_presentation(&parse_json(text)?)
}

fn parse_json(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("descriptor is not valid JSON: {}", e))
}

fn build_model(v: &Value) -> Result<BuiltModel, String> {
    let name = str_field(v, "constructor")?;
    match name.as_str() {
        "polynomial" => {
            let n = ambient_field(v)?;
            Ok(BuiltModel {
                model: polynomial_model(n),
                provenance: json!({"constructor": "polynomial", "n": n}),
            })
        }
        "laurent" => {
            let n = ambient_field(v)?;
            let model = laurent_model(n).map_err(|e| e.to_string())?;
            Ok(BuiltModel { model, provenance: json!({"constructor": "laurent", "n": n}) })
        }
        "localcoh" => {
            let n = ambient_field(v)?;
            let index = usize_field(v, "index")?;
            let (monos, labels) = monomial_field(v, "ideal", n)?;
            let model = cech_local_cohomology_model(n, &monos, index).map_err(|e| e.to_string())?;
            Ok(BuiltModel {
                model,
                provenance: json!({
                    "constructor": "localcoh", "n": n, "ideal": labels, "index": index,
                }),
            })
        }
        "presentation" => {
            let built = build_presentation(v)?;
            let model =
                presentation_model(built.n, &built_gens(&built.gb), built.shift).map_err(|e| e.to_string())?;
            Ok(BuiltModel { model, provenance: built.provenance })
        }
        "shift" => {
            let inner = build_model(field(v, "inner")?)?;
            let offset = i64_field(v, "offset")?;
            Ok(BuiltModel {
                model: shift_model(inner.model, offset),
                provenance: json!({
                    "constructor": "shift", "inner": inner.provenance, "offset": offset,
                }),
            })
        }
        "matlis-dual" => {
            let inner = build_model(field(v, "inner")?)?;
            let model = matlis_dual(inner.model).map_err(|e| e.to_string())?;
            Ok(BuiltModel {
                model,
                provenance: json!({"constructor": "matlis-dual", "inner": inner.provenance}),
            })
        }
        "transpose" => {
            let inner = build_model(field(v, "inner")?)?;
            Ok(BuiltModel {
                model: transpose_model(inner.model),
                provenance: json!({"constructor": "transpose", "inner": inner.provenance}),
            })
        }
        "direct-sum" => {
            let parts = field(v, "parts")?
                .as_array()
                .ok_or_else(|| "'parts' must be an array of descriptors".to_string())?;
            let mut models = Vec::new();
            let mut provenances = Vec::new();
            for p in parts {
                let built = build_model(p)?;
                models.push(built.model);
                provenances.push(built.provenance);
            }
            let model = direct_sum(models).map_err(|e| e.to_string())?;
            Ok(BuiltModel {
                model,
                provenance: json!({"constructor": "direct-sum", "parts": provenances}),
            })
        }
        "koszul-last" => {
            let inner = build_model(field(v, "inner")?)?;
            let op = match str_field(v, "op")?.as_str() {
                "multiply" => LastVarOp::MultiplyLast,
                "differentiate" => LastVarOp::DifferentiateLast,
                other => return Err(format!("unknown op '{}'; use multiply or differentiate", other)),
            };
            let homological = usize_field(v, "homological")?;
            let op_label = if op == LastVarOp::MultiplyLast { "multiply" } else { "differentiate" };
            let model = koszul_last_var(inner.model, op, homological).map_err(|e| e.to_string())?;
            Ok(BuiltModel {
                model,
                provenance: json!({
                    "constructor": "koszul-last", "homological": homological,
                    "inner": inner.provenance, "op": op_label,
                }),
            })
        }
        other => Err(format!("unknown constructor '{}'", other)),
    }
}

fn build_presentation(v: &Value) -> Result<BuiltPresentation, String> {
    let name = str_field(v, "constructor")?;
    if name != "presentation" {
        return Err(format!("expected a presentation descriptor, got constructor '{}'", name));
    }
    let n = ambient_field(v)?;
    let shift = match map_of(v)?.get("shift") {
        Some(_) => i64_field(v, "shift")?,
        None => 0,
    };
    let (gens, labels) = element_field(v, "gens", n)?;
    let gb = buchberger(n, &gens, BaseOrder::DegRevLex).map_err(|e| e.to_string())?;
    Ok(BuiltPresentation {
        n,
        shift,
        gb,
        provenance: json!({
            "constructor": "presentation", "gens": labels, "n": n, "shift": shift,
        }),
    })
}

fn built_gens(gb: &GroebnerBasis) -> Vec<WeylElement> {
    gb.input.iter().map(|m| m.comp(0)).collect()
}

pub fn parse_element_list(n: usize, text: &str) -> Result<Vec<WeylElement>, String> {
    let mut out = Vec::new();
    for piece in split_list(text) {
        out.push(parse_element(n, &piece).map_err(|e| format!("in '{}': {}", piece, e))?);
    }
    if out.is_empty() {
        return Err("empty generator list".to_string());
    }
    Ok(out)
}

pub fn parse_monomial_list(n: usize, text: &str) -> Result<(Vec<Mono>, Vec<String>), String> {
    let mut monos = Vec::new();
    let mut labels = Vec::new();
    for piece in split_list(text) {
        let e = parse_element(n, &piece).map_err(|e| format!("in '{}': {}", piece, e))?;
        let mut terms = e.terms();
        let mono = match (terms.next(), terms.next()) {
            (Some((m, _)), None) => m.clone(),
            _ => return Err(format!("'{}' is not a single monomial", piece)),
        };
        labels.push(format!("{}", WeylElement::from_term(n, mono.clone(), rat_one())));
        monos.push(mono);
    }
    if monos.is_empty() {
        return Err("empty ideal generator list".to_string());
    }
    Ok((monos, labels))
}

fn rat_one() -> weyl_core::Rat {
    weyl_core::Rat::new(1.into(), 1.into())
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

fn map_of(v: &Value) -> Result<&Map<String, Value>, String> {
    v.as_object().ok_or_else(|| "descriptor must be a JSON object".to_string())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    map_of(v)?.get(key).ok_or_else(|| format!("descriptor is missing '{}'", key))
}

fn str_field(v: &Value, key: &str) -> Result<String, String> {
    field(v, key)?
        .as_str()
        .map(|s| s.to_string())
        .ok_or_else(|| format!("'{}' must be a string", key))
}

fn usize_field(v: &Value, key: &str) -> Result<usize, String> {
    field(v, key)?
        .as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| format!("'{}' must be a nonnegative integer", key))
}

fn i64_field(v: &Value, key: &str) -> Result<i64, String> {
    field(v, key)?.as_i64().ok_or_else(|| format!("'{}' must be an integer", key))
}

fn ambient_field(v: &Value) -> Result<usize, String> {
    let n = usize_field(v, "n")?;
    if n == 0 {
        return Err("ambient n must be at least 1".to_string());
    }
    Ok(n)
}

fn list_field(v: &Value, key: &str) -> Result<String, String> {
    let raw = field(v, key)?;
    if let Some(s) = raw.as_str() {
        return Ok(s.to_string());
    }
    if let Some(items) = raw.as_array() {
        let mut parts = Vec::new();
        for item in items {
            parts.push(
                item.as_str()
                    .ok_or_else(|| format!("'{}' entries must be strings", key))?
                    .to_string(),
            );
        }
        return Ok(parts.join(","));
    }
    Err(format!("'{}' must be a string or an array of strings", key))
}

fn element_field(v: &Value, key: &str, n: usize) -> Result<(Vec<WeylElement>, Vec<String>), String> {
    let gens = parse_element_list(n, &list_field(v, key)?)?;
    let labels = gens.iter().map(|g| format!("{}", g)).collect();
    Ok((gens, labels))
}

fn monomial_field(v: &Value, key: &str, n: usize) -> Result<(Vec<Mono>, Vec<String>), String> {
    parse_monomial_list(n, &list_field(v, key)?)
}
