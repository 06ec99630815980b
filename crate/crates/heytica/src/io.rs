//! Wire formats: JSON for posets, algebras, p-morphisms, orders, and
//! chains; DOT rendering of Hasse diagrams; a small structural schema
//! validator for the CLI payloads.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::heyting::{Heyting, UpSet};
use crate::limit::Chain;
use crate::poset::{bits, PMorphism, Poset};

/// `{"n": int, "covers": [[i, j], ...]}` — covers of the transitive
/// reduction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<(usize, usize)>,
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        PosetJson {
            n: p.n(),
            covers: p.covers(),
        }
    }
}

impl PosetJson {
    pub fn build(&self) -> Result<Poset> {
        Poset::from_covers(self.n, &self.covers)
    }
}

/// `{"dual": <poset>, "labels": optional}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dual: PosetJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&Heyting> for AlgebraJson {
    fn from(h: &Heyting) -> Self {
        AlgebraJson {
            dual: PosetJson::from(h.dual()),
            labels: None,
        }
    }
}

impl AlgebraJson {
    pub fn build(&self) -> Result<Heyting> {
        Ok(Heyting::new(self.dual.build()?))
    }
}

/// An element as the list of dual points it contains.
pub fn upset_to_json(u: UpSet) -> Value {
    json!(bits(u.0).collect::<Vec<usize>>())
}

pub fn upset_from_json(v: &Value) -> Result<UpSet> {
    let arr = v.as_array().ok_or_else(|| Error::Format {
        line: 0,
        detail: "expected an array of point indices".into(),
    })?;
    let mut m = 0u128;
    for x in arr {
        let i = x.as_u64().ok_or_else(|| Error::Format {
            line: 0,
            detail: "expected integer point index".into(),
        })? as usize;
        m |= 1 << i;
    }
    Ok(UpSet(m))
}

/// DOT rendering of the Hasse diagram, ranked by height.
pub fn poset_to_dot(p: &Poset, name: &str) -> String {
    let mut out = format!("digraph \"{name}\" {{\n  rankdir=BT;\n  node [shape=circle];\n");
    let mut by_height: Vec<Vec<usize>> = Vec::new();
    for i in 0..p.n() {
        let h = p.height(i);
        while by_height.len() <= h {
            by_height.push(Vec::new());
        }
        by_height[h].push(i);
    }
    for (h, nodes) in by_height.iter().enumerate() {
        let ids: Vec<String> = nodes.iter().map(|i| format!("p{i}")).collect();
        out.push_str(&format!("  {{ rank=same; /* height {h} */ {} }}\n", ids.join("; ")));
    }
    for i in 0..p.n() {
        out.push_str(&format!("  p{i} [label=\"{i}\"];\n"));
    }
    for (a, b) in p.covers() {
        out.push_str(&format!("  p{a} -> p{b};\n"));
    }
    out.push_str("}\n");
    out
}

/// Chain file: the level duals plus the connecting dual surjections.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainJson {
    pub levels: Vec<PosetJson>,
    /// maps[i]: dual(level i+1) → dual(level i)
    pub link_maps: Vec<Vec<usize>>,
}

impl From<&Chain> for ChainJson {
    fn from(c: &Chain) -> Self {
        ChainJson {
            levels: (0..c.len()).map(|i| PosetJson::from(c.level(i).dual())).collect(),
            link_maps: (0..c.len().saturating_sub(1))
                .map(|i| c.link(i).dual_map().map().to_vec())
                .collect(),
        }
    }
}

impl ChainJson {
    /// Validate the file shape (each map a surjective p-morphism).
    pub fn verify(&self) -> Result<()> {
        for (i, m) in self.link_maps.iter().enumerate() {
            let src = self.levels[i + 1].build()?;
            let dst = self.levels[i].build()?;
            let pm = PMorphism::new(src, dst, m.clone())?;
            if !pm.is_surjective() {
                return Err(Error::NotSurjective);
            }
        }
        Ok(())
    }
}

/// Schema: a minimal structural checker for `{type, required, properties}`
/// documents, enough to validate every CLI payload shape.
pub fn validate_against_schema(schema: &Value, value: &Value) -> std::result::Result<(), String> {
    if let Some(t) = schema.get("type").and_then(Value::as_str) {
        let ok = match t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "integer" => value.is_i64() || value.is_u64(),
            "number" => value.is_number(),
            "boolean" => value.is_boolean(),
            other => return Err(format!("unknown schema type {other}")),
        };
        if !ok {
            return Err(format!("expected {t}, found {value}"));
        }
    }
    if let Some(req) = schema.get("required").and_then(Value::as_array) {
        for key in req {
            let key = key.as_str().unwrap_or_default();
            if value.get(key).is_none() {
                return Err(format!("missing required field {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        for (key, sub) in props {
            if let Some(v) = value.get(key) {
                validate_against_schema(sub, v).map_err(|e| format!("{key}: {e}"))?;
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate_against_schema(items, v).map_err(|e| format!("[{i}]: {e}"))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_json_round_trip() {
        let p = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let j = PosetJson::from(&p);
        let text = serde_json::to_string(&j).unwrap();
        let back: PosetJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.build().unwrap(), p);
    }

    #[test]
    fn dot_contains_edges() {
        let p = Poset::chain(3);
        let dot = poset_to_dot(&p, "chain");
        assert!(dot.contains("p0 -> p1"));
        assert!(dot.contains("p1 -> p2"));
        assert!(dot.contains("rank=same"));
    }

    #[test]
    fn schema_validation() {
        let schema = json!({
            "type": "object",
            "required": ["n", "covers"],
            "properties": {
                "n": {"type": "integer"},
                "covers": {"type": "array"}
            }
        });
        assert!(validate_against_schema(&schema, &json!({"n": 2, "covers": []})).is_ok());
        assert!(validate_against_schema(&schema, &json!({"n": 2})).is_err());
        assert!(validate_against_schema(&schema, &json!({"n": "x", "covers": []})).is_err());
    }

    #[test]
    fn chain_json_round_trip() {
        let mut c = Chain::new();
        c.densify(UpSet(0), UpSet(1)).unwrap();
        let j = ChainJson::from(&c);
        j.verify().unwrap();
        let text = serde_json::to_string(&j).unwrap();
        let back: ChainJson = serde_json::from_str(&text).unwrap();
        back.verify().unwrap();
        assert_eq!(back.levels.len(), c.len());
    }
}
