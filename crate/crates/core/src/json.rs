//! JSON wire formats.
//!
//! Coefficients are exact `p/q` strings throughout:
//!
//! ```text
//! PolySeries:     {"vars":[{"name":"u","dir":"desc","K":4}],
//!                  "terms":[{"exp":[2],"coeff":"-3/2"}]}
//! TensorOperator: {"N":2,"arity":3,
//!                  "entries":[{"row":[1,2,1],"col":[2,1,1],"coeff":<PolySeries>}]}
//! AlgElement:     {"N":2,"D":5,"tag":"DY",
//!                  "terms":[{"coeff":"1/3","mono":[[-1,2,1],[1,1,2]]}]}
//! TensorElement:  as AlgElement with "mono" replaced by "monoL"/"monoR"
//! RepSpec:        {"kind":"sigma","c":"2","N":2} (c a rational or a
//!                  variable name for the symbolic kinds)
//! witness:        {"n":2,"params":["1","-1"]}
//! ```

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::json;

use crate::algebra::{normal_form, AlgElement, AlgebraTag, DualTrunc, GenId, Monomial};
use crate::hopf::TensorElement;
use crate::rat::{parse_rational, rational_string, Rational};
use crate::reps::{RepKind, RepParam, RepSpec, SeparationWitness};
use crate::series::{Direction, PolySeries, VariableSpec};
use crate::tensor::TensorOperator;

fn dir_str(d: Direction) -> &'static str {
    match d {
        Direction::Ascending => "asc",
        Direction::Descending => "desc",
    }
}

impl Serialize for VariableSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        json!({"name": self.name, "dir": dir_str(self.dir), "K": self.trunc}).serialize(s)
    }
}

impl<'de> Deserialize<'de> for VariableSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            name: String,
            dir: String,
            #[serde(rename = "K")]
            k: u32,
        }
        let raw = Raw::deserialize(d)?;
        let dir = match raw.dir.as_str() {
            "asc" => Direction::Ascending,
            "desc" => Direction::Descending,
            other => return Err(D::Error::custom(format!("bad direction `{other}`"))),
        };
        Ok(VariableSpec { name: raw.name, dir, trunc: raw.k })
    }
}

impl Serialize for PolySeries<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<_> = self
            .terms()
            .map(|(exp, c)| json!({"exp": exp, "coeff": rational_string(c)}))
            .collect();
        json!({"vars": self.vars(), "terms": terms}).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolySeries<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct RawTerm {
            exp: Vec<u32>,
            coeff: String,
        }
        #[derive(Deserialize)]
        struct Raw {
            vars: Vec<VariableSpec>,
            terms: Vec<RawTerm>,
        }
        let raw = Raw::deserialize(d)?;
        let mut out = PolySeries::zero(raw.vars);
        for t in raw.terms {
            let c = parse_rational(&t.coeff).map_err(D::Error::custom)?;
            if t.exp.len() != out.vars().len() {
                return Err(D::Error::custom("exponent arity mismatch"));
            }
            out.insert_add(t.exp, c);
        }
        Ok(out)
    }
}

impl Serialize for TensorOperator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<_> = self
            .entries()
            .map(|((row, col), e)| json!({"row": row, "col": col, "coeff": e}))
            .collect();
        json!({"N": self.n_dim(), "arity": self.arity(), "entries": entries}).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct RawEntry {
            row: Vec<u8>,
            col: Vec<u8>,
            coeff: PolySeries<Rational>,
        }
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "N")]
            n: u32,
            arity: usize,
            entries: Vec<RawEntry>,
        }
        let raw = Raw::deserialize(d)?;
        let mut out = TensorOperator::zero(raw.n, raw.arity);
        for e in raw.entries {
            if e.row.len() != raw.arity || e.col.len() != raw.arity {
                return Err(D::Error::custom("index arity mismatch"));
            }
            out.insert_add(e.row, e.col, e.coeff);
        }
        Ok(out)
    }
}

fn mono_to_json(m: &Monomial) -> serde_json::Value {
    json!(m.0.iter().map(|g| vec![g.level, g.row as i32, g.col as i32]).collect::<Vec<_>>())
}

fn mono_from_json(v: &[Vec<i32>]) -> Result<Vec<GenId>, String> {
    v.iter()
        .map(|t| {
            if t.len() != 3 {
                return Err("generator triple must be [level, i, j]".into());
            }
            if t[0] == 0 {
                return Err("level 0 is not a generator".into());
            }
            if !(1..=255).contains(&t[1]) || !(1..=255).contains(&t[2]) {
                return Err("indices must be in 1..=255".into());
            }
            Ok(GenId::new(t[0], t[1] as u8, t[2] as u8))
        })
        .collect()
}

fn trunc_to_json(d: DualTrunc) -> serde_json::Value {
    match d {
        DualTrunc::Finite(k) => json!(k),
        DualTrunc::Infinite => serde_json::Value::Null,
    }
}

fn trunc_from_json(v: &Option<u32>) -> DualTrunc {
    match v {
        Some(k) => DualTrunc::Finite(*k),
        None => DualTrunc::Infinite,
    }
}

fn tag_from_str(s: &str) -> Result<AlgebraTag, String> {
    match s {
        "Y" => Ok(AlgebraTag::Y),
        "Y*" => Ok(AlgebraTag::Dual),
        "DY" => Ok(AlgebraTag::DY),
        other => Err(format!("bad algebra tag `{other}`")),
    }
}

impl Serialize for AlgElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<_> = self
            .terms()
            .map(|(m, c)| json!({"coeff": rational_string(c), "mono": mono_to_json(m)}))
            .collect();
        json!({
            "N": self.n_dim(),
            "D": trunc_to_json(self.dual_trunc()),
            "tag": self.tag().as_str(),
            "terms": terms,
        })
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct RawTerm {
            coeff: String,
            mono: Vec<Vec<i32>>,
        }
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "N")]
            n: u32,
            #[serde(rename = "D", default)]
            dual: Option<u32>,
            tag: Option<String>,
            terms: Vec<RawTerm>,
        }
        let raw = Raw::deserialize(d)?;
        let dt = trunc_from_json(&raw.dual);
        let mut raw_elem = Vec::new();
        for t in raw.terms {
            let c = parse_rational(&t.coeff).map_err(D::Error::custom)?;
            let word = mono_from_json(&t.mono).map_err(D::Error::custom)?;
            raw_elem.push((c, word));
        }
        let mut out = normal_form(raw_elem, raw.n, dt).map_err(D::Error::custom)?;
        if let Some(tag) = raw.tag {
            out = out.with_tag(tag_from_str(&tag).map_err(D::Error::custom)?);
        }
        Ok(out)
    }
}

impl Serialize for TensorElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<_> = self
            .terms()
            .map(|((l, r), c)| {
                json!({
                    "coeff": rational_string(c),
                    "monoL": mono_to_json(l),
                    "monoR": mono_to_json(r),
                })
            })
            .collect();
        json!({
            "N": self.n_dim(),
            "D": trunc_to_json(self.dual_trunc()),
            "terms": terms,
        })
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct RawTerm {
            coeff: String,
            #[serde(rename = "monoL")]
            mono_l: Vec<Vec<i32>>,
            #[serde(rename = "monoR")]
            mono_r: Vec<Vec<i32>>,
        }
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "N")]
            n: u32,
            #[serde(rename = "D", default)]
            dual: Option<u32>,
            terms: Vec<RawTerm>,
        }
        let raw = Raw::deserialize(d)?;
        let dt = trunc_from_json(&raw.dual);
        let mut out = TensorElement::zero(raw.n, dt);
        for t in raw.terms {
            let c = parse_rational(&t.coeff).map_err(D::Error::custom)?;
            let l = Monomial(mono_from_json(&t.mono_l).map_err(D::Error::custom)?);
            let r = Monomial(mono_from_json(&t.mono_r).map_err(D::Error::custom)?);
            if !l.is_normal() || !r.is_normal() {
                return Err(D::Error::custom("tensor factors must be normal monomials"));
            }
            out.insert_add(l, r, c);
        }
        Ok(out)
    }
}

impl Serialize for RepSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let kind = match self.kind {
            RepKind::Rho => "rho",
            RepKind::Sigma => "sigma",
        };
        let c = match &self.param {
            RepParam::Value(c) => rational_string(c),
            RepParam::SymbolAsc(name, _) | RepParam::SymbolDesc(name, _) => name.clone(),
        };
        json!({"kind": kind, "c": c, "N": self.n}).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RepSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            kind: String,
            c: String,
            #[serde(rename = "N")]
            n: u32,
            #[serde(rename = "K", default)]
            k: Option<u32>,
        }
        let raw = Raw::deserialize(d)?;
        let symbolic = raw.c.chars().next().is_some_and(|ch| ch.is_ascii_alphabetic());
        let trunc = raw.k.unwrap_or(8);
        let (kind, param) = match raw.kind.as_str() {
            "rho" => {
                let p = if symbolic {
                    RepParam::SymbolAsc(raw.c, trunc)
                } else {
                    RepParam::Value(parse_rational(&raw.c).map_err(D::Error::custom)?)
                };
                (RepKind::Rho, p)
            }
            "rho_star" => {
                let p = if symbolic {
                    RepParam::SymbolDesc(raw.c, trunc)
                } else {
                    RepParam::Value(parse_rational(&raw.c).map_err(D::Error::custom)?)
                };
                (RepKind::Rho, p)
            }
            "sigma" => {
                let p = if symbolic {
                    RepParam::SymbolAsc(raw.c, trunc)
                } else {
                    RepParam::Value(parse_rational(&raw.c).map_err(D::Error::custom)?)
                };
                (RepKind::Sigma, p)
            }
            other => return Err(D::Error::custom(format!("bad rep kind `{other}`"))),
        };
        Ok(RepSpec { kind, param, n: raw.n })
    }
}

impl Serialize for SeparationWitness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        json!({
            "n": self.n_slots,
            "params": self.params.iter().map(rational_string).collect::<Vec<_>>(),
        })
        .serialize(s)
    }
}

/// GramTable CSV rows: header with column labels, then one row per basis
/// monomial.
pub fn gram_to_csv(g: &crate::pairing::GramTable) -> String {
    let mut out = String::new();
    out.push_str("row\\col");
    for c in &g.cols {
        out.push(',');
        out.push_str(&format!("\"{c}\""));
    }
    out.push('\n');
    for (ri, row) in g.rows.iter().enumerate() {
        out.push_str(&format!("\"{row}\""));
        for v in &g.values[ri] {
            out.push(',');
            out.push_str(&rational_string(v));
        }
        out.push('\n');
    }
    out
}

pub fn gram_to_json(g: &crate::pairing::GramTable) -> serde_json::Value {
    json!({
        "degree": g.degree,
        "N": g.n,
        "rows": g.rows.iter().map(mono_to_json).collect::<Vec<_>>(),
        "cols": g.cols.iter().map(mono_to_json).collect::<Vec<_>>(),
        "values": g.values.iter().map(|row| row.iter().map(rational_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "inverse": g.inverse.iter().map(|row| row.iter().map(rational_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn dual_system_to_json(sys: &crate::pairing::DualSystem) -> serde_json::Value {
    json!({
        "D": sys.d,
        "N": sys.n,
        "pairs": sys
            .basis
            .iter()
            .zip(&sys.duals)
            .map(|(b, x)| json!({"basis": mono_to_json(b), "dual": x}))
            .collect::<Vec<_>>(),
    })
}
