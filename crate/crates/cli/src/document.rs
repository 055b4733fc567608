//! The JSON analysis document.
//!
//! Every vector is given in the coordinates of the cone that was passed in,
//! so `--cone` output can be read against the input directly.

use cqs_core::{
    ClassTag, ComponentReport, Cone, Int, MVec, NVec, NormalForm, SingularityReport,
};
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

/// Largest magnitude written as a bare JSON number.
pub const MAX_SAFE_INT: i64 = (1 << 53) - 1;

/// An exact integer. Written as a number when a double holds it exactly,
/// otherwise as `{"int": "<decimal>"}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct JsonInt(pub Int);

impl From<&Int> for JsonInt {
    fn from(v: &Int) -> Self {
        JsonInt(v.clone())
    }
}

impl From<i64> for JsonInt {
    fn from(v: i64) -> Self {
        JsonInt(Int::from(v))
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() <= MAX_SAFE_INT => s.serialize_i64(v),
            _ => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("int", &self.0.to_string())?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Small(i64),
            Big { int: String },
        }
        match Raw::deserialize(d)? {
            Raw::Small(v) => Ok(JsonInt(Int::from(v))),
            Raw::Big { int } => int
                .parse::<Int>()
                .map(JsonInt)
                .map_err(|e| de::Error::custom(format!("bad decimal {int:?}: {e}"))),
        }
    }
}

pub type Pair = [JsonInt; 2];

fn nvec(v: &NVec) -> Pair {
    [JsonInt::from(&v.x), JsonInt::from(&v.y)]
}

fn mvec(w: &MVec) -> Pair {
    [JsonInt::from(&w.x), JsonInt::from(&w.y)]
}

fn ints(v: &[Int]) -> Vec<JsonInt> {
    v.iter().map(JsonInt::from).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputEcho {
    Cone { generators: [Pair; 2] },
    Nq { n: JsonInt, q: JsonInt },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormDoc {
    pub n: JsonInt,
    pub q: JsonInt,
    pub dual_q: JsonInt,
    pub e: usize,
    pub a_chain: Vec<JsonInt>,
    pub b_chain: Vec<JsonInt>,
    /// Rows of the unimodular map taking the input cone to `<(1,0),(-q,n)>`.
    pub transform: [Pair; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoofDoc {
    pub w: Pair,
    pub h: JsonInt,
    pub l: JsonInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    pub generators: [Pair; 2],
    pub roof: RoofDoc,
    /// `smooth`, `A<m>`, `T` or `general`.
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoutePair {
    pub toric: JsonInt,
    pub stevens: JsonInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub k_chain: Vec<JsonInt>,
    pub q_seq: Vec<JsonInt>,
    pub rays: Vec<Pair>,
    pub cones: Vec<ConeDoc>,
    pub milnor: RoutePair,
    pub dim: RoutePair,
    pub is_artin: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisDocument {
    pub schema_version: String,
    pub input: InputEcho,
    pub normal_form: NormalFormDoc,
    pub r: usize,
    pub nu: JsonInt,
    pub dim_t1: JsonInt,
    pub h1_theta: JsonInt,
    pub components: Vec<ComponentDoc>,
    pub warnings: Vec<String>,
}

pub fn class_name(tag: &ClassTag) -> String {
    match tag {
        ClassTag::Smooth => "smooth".into(),
        ClassTag::DuValA(m) => format!("A{m}"),
        ClassTag::T => "T".into(),
        ClassTag::General => "general".into(),
    }
}

fn cone_doc(nf: &NormalForm, c: &Cone) -> ConeDoc {
    ConeDoc {
        generators: [nvec(&nf.to_input(&c.lo)), nvec(&nf.to_input(&c.hi))],
        roof: RoofDoc {
            w: mvec(&nf.dual_to_input(&c.roof.w)),
            h: JsonInt::from(&c.roof.h),
            l: JsonInt::from(&c.roof.l),
        },
        class: class_name(&c.class.tag),
    }
}

fn component_doc(nf: &NormalForm, c: &ComponentReport) -> ComponentDoc {
    ComponentDoc {
        k_chain: ints(&c.k_chain.k),
        q_seq: ints(&c.k_chain.q_seq),
        rays: c.fan.rays.iter().map(|r| nvec(&nf.to_input(r))).collect(),
        cones: c.fan.cones.iter().map(|k| cone_doc(nf, k)).collect(),
        milnor: RoutePair {
            toric: JsonInt::from(&c.milnor_toric),
            stevens: JsonInt::from(&c.milnor_stevens),
        },
        dim: RoutePair {
            toric: JsonInt::from(&c.dim_toric),
            stevens: JsonInt::from(&c.dim_stevens),
        },
        is_artin: c.is_artin,
    }
}

impl AnalysisDocument {
    pub fn new(input: InputEcho, report: &SingularityReport) -> Self {
        let nf = &report.nf;
        let [[a, b], [c, d]] = nf.transform.rows();
        let mut components: Vec<ComponentDoc> =
            report.components.iter().map(|c| component_doc(nf, c)).collect();
        components.sort_by(|x, y| x.k_chain.cmp(&y.k_chain));
        AnalysisDocument {
            schema_version: SCHEMA_VERSION.into(),
            input,
            normal_form: NormalFormDoc {
                n: JsonInt::from(&nf.n),
                q: JsonInt::from(&nf.q),
                dual_q: JsonInt::from(&nf.dual_q),
                e: nf.e,
                a_chain: ints(nf.a_chain.coeffs()),
                b_chain: ints(nf.b_chain.coeffs()),
                transform: [
                    [JsonInt(a), JsonInt(b)],
                    [JsonInt(c), JsonInt(d)],
                ],
            },
            r: report.r,
            nu: JsonInt::from(&report.nu),
            dim_t1: JsonInt::from(&report.dim_t1),
            h1_theta: JsonInt::from(&report.h1_theta),
            components,
            warnings: report.warnings.clone(),
        }
    }

    /// Pretty JSON with keys sorted at every level, newline-terminated.
    pub fn to_canonical_json(&self) -> String {
        // Going through `Value` sorts object keys.
        let value = serde_json::to_value(self).expect("document serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ints_are_numbers() {
        let s = serde_json::to_string(&JsonInt::from(MAX_SAFE_INT)).unwrap();
        assert_eq!(s, MAX_SAFE_INT.to_string());
        let s = serde_json::to_string(&JsonInt::from(-MAX_SAFE_INT)).unwrap();
        assert_eq!(s, format!("-{MAX_SAFE_INT}"));
    }

    #[test]
    fn large_ints_are_marked_strings() {
        let big = JsonInt::from(MAX_SAFE_INT + 1);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(s, format!("{{\"int\":\"{}\"}}", MAX_SAFE_INT + 1));
        assert_eq!(serde_json::from_str::<JsonInt>(&s).unwrap(), big);

        let huge = JsonInt("123456789012345678901234567890".parse().unwrap());
        let s = serde_json::to_string(&huge).unwrap();
        assert_eq!(serde_json::from_str::<JsonInt>(&s).unwrap(), huge);
    }

    #[test]
    fn rejects_bad_decimal() {
        assert!(serde_json::from_str::<JsonInt>(r#"{"int":"12x"}"#).is_err());
        assert!(serde_json::from_str::<JsonInt>(r#""12""#).is_err());
    }
}
