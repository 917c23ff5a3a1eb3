//! Spin manifolds with a circle action and isolated fixed points.
//!
//! A manifold is described by its fixed points and, at each, the `n` signed
//! rotation numbers of the tangent space. The signs are chosen so that the
//! product of the listed planes is the global orientation; each point then
//! contributes `∏_j 1/(s^{-a_j} - s^{a_j})` to the index with `s = e^{iπz}`.
//!
//! The JSON format is
//!
//! ```json
//! {
//!   "name": "S2",
//!   "half_dim": 1,
//!   "points": [{ "weights": [1] }, { "weights": [-1] }],
//!   "twists": { "T": [[1], [-1]] }
//! }
//! ```
//!
//! where each twist lists, per fixed point, the weights of an equivariant
//! vector bundle on the fiber. `twists` is optional.

mod index;

pub use index::{
    consistency_check, equivariant_index, rigidity_check, simplify_character, special_orders, twist_split_check,
    Backend, Character, ConsistencyReport, IndexValue, RigidityReport, SpecialOrders, TwistSplitReport,
};

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointDatum {
    pub weights: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinCircleManifold {
    pub name: String,
    pub half_dim: usize,
    pub points: Vec<FixedPointDatum>,
    /// Named bundle twists, one weight list per fixed point.
    pub twists: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistSpec {
    None,
    TangentWitten,
    Bundle(Vec<Vec<i64>>),
}

const CATALOG: [(&str, &str); 5] = [
    ("s2", include_str!("../../catalog/s2.json")),
    ("s6", include_str!("../../catalog/s6.json")),
    ("cp3", include_str!("../../catalog/cp3.json")),
    ("cp3-0137", include_str!("../../catalog/cp3-0137.json")),
    ("s2xs2xs2", include_str!("../../catalog/s2xs2xs2.json")),
];

/// Names and JSON sources of the bundled manifolds.
pub fn catalog() -> &'static [(&'static str, &'static str)] {
    &CATALOG
}

pub fn catalog_manifold(name: &str) -> Result<SpinCircleManifold> {
    let (_, src) = CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Invalid(format!("no catalog manifold `{name}`")))?;
    SpinCircleManifold::from_json(src)
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn int_list(v: &Value, path: &str) -> Result<Vec<i64>> {
    let arr = v.as_array().ok_or_else(|| schema(path, "expected an array of integers"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| x.as_i64().ok_or_else(|| schema(format!("{path}[{i}]"), "expected an integer")))
        .collect()
}

impl SpinCircleManifold {
    pub fn new(name: impl Into<String>, weights: Vec<Vec<i64>>) -> Result<Self> {
        let half_dim = weights.first().map_or(0, Vec::len);
        let m = Self {
            name: name.into(),
            half_dim,
            points: weights.into_iter().map(|weights| FixedPointDatum { weights }).collect(),
            twists: BTreeMap::new(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(src).map_err(|e| schema("$", e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| schema("$", "expected an object"))?;
        let name = obj
            .get("name")
            .ok_or_else(|| schema("name", "missing"))?
            .as_str()
            .ok_or_else(|| schema("name", "expected a string"))?
            .to_string();
        let half_dim = obj
            .get("half_dim")
            .ok_or_else(|| schema("half_dim", "missing"))?
            .as_u64()
            .ok_or_else(|| schema("half_dim", "expected a non-negative integer"))? as usize;
        let pts = obj
            .get("points")
            .ok_or_else(|| schema("points", "missing"))?
            .as_array()
            .ok_or_else(|| schema("points", "expected an array"))?;
        let mut points = Vec::with_capacity(pts.len());
        for (i, p) in pts.iter().enumerate() {
            let w = p
                .get("weights")
                .ok_or_else(|| schema(format!("points[{i}].weights"), "missing"))?;
            points.push(FixedPointDatum {
                weights: int_list(w, &format!("points[{i}].weights"))?,
            });
        }
        let mut twists = BTreeMap::new();
        if let Some(t) = obj.get("twists") {
            let t = t.as_object().ok_or_else(|| schema("twists", "expected an object"))?;
            for (key, lists) in t {
                let path = format!("twists.{key}");
                let arr = lists
                    .as_array()
                    .ok_or_else(|| schema(&path, "expected an array of weight lists"))?;
                let per_point = arr
                    .iter()
                    .enumerate()
                    .map(|(i, l)| int_list(l, &format!("{path}[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                twists.insert(key.clone(), per_point);
            }
        }
        let m = Self {
            name,
            half_dim,
            points,
            twists,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(schema("points", "at least one fixed point is required"));
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.weights.len() != self.half_dim {
                return Err(schema(
                    format!("points[{i}].weights"),
                    format!("expected {} weights, found {}", self.half_dim, p.weights.len()),
                ));
            }
            if let Some(j) = p.weights.iter().position(|&a| a == 0) {
                return Err(schema(format!("points[{i}].weights[{j}]"), "zero weight"));
            }
        }
        for (key, lists) in &self.twists {
            if lists.len() != self.points.len() {
                return Err(schema(
                    format!("twists.{key}"),
                    format!("expected {} weight lists, found {}", self.points.len(), lists.len()),
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        2 * self.half_dim
    }

    /// Describes points whose weight sum has a different parity from the
    /// first point's, which rules out a compatible spin structure.
    pub fn parity_warning(&self) -> Option<String> {
        let parity = |p: &FixedPointDatum| p.weights.iter().sum::<i64>().rem_euclid(2);
        let first = parity(&self.points[0]);
        let odd: Vec<usize> = (1..self.points.len())
            .filter(|&i| parity(&self.points[i]) != first)
            .collect();
        if odd.is_empty() {
            None
        } else {
            Some(format!(
                "{}: weight sums at points {odd:?} differ in parity from point 0; the data is not spin",
                self.name
            ))
        }
    }

    /// The same data with the sign of `points[point].weights[plane]` flipped.
    pub fn with_flipped_weight(&self, point: usize, plane: usize) -> Result<Self> {
        let mut m = self.clone();
        let w = m
            .points
            .get_mut(point)
            .and_then(|p| p.weights.get_mut(plane))
            .ok_or_else(|| Error::Invalid(format!("no weight at points[{point}].weights[{plane}]")))?;
        *w = -*w;
        m.name = format!("{} (weight {point}.{plane} flipped)", self.name);
        Ok(m)
    }

    /// Weights `{±a_j}` of `TM ⊗ C` at each point.
    pub fn complexified_tangent(&self) -> Vec<Vec<i64>> {
        self.points
            .iter()
            .map(|p| p.weights.iter().flat_map(|&a| [a, -a]).collect())
            .collect()
    }

    /// `Λ^r(TM ⊗ C)`: sums over `r`-element subsets of the tangent weights.
    pub fn exterior_power(&self, r: usize) -> Vec<Vec<i64>> {
        self.complexified_tangent()
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                subsets(w, r, 0, 0, &mut out, false);
                out
            })
            .collect()
    }

    /// `S^r(TM ⊗ C)`: sums over `r`-element multisets of the tangent weights.
    pub fn symmetric_power(&self, r: usize) -> Vec<Vec<i64>> {
        self.complexified_tangent()
            .iter()
            .map(|w| {
                let mut out = Vec::new();
                subsets(w, r, 0, 0, &mut out, true);
                out
            })
            .collect()
    }

    /// Resolves `none`, `tangent_witten`, the derived bundles `T`, `S2T`,
    /// `L2T`, `L3T`, or a twist named in the data.
    pub fn twist(&self, name: &str) -> Result<TwistSpec> {
        Ok(match name {
            "none" => TwistSpec::None,
            "tangent_witten" => TwistSpec::TangentWitten,
            _ => match self.twists.get(name) {
                Some(w) => TwistSpec::Bundle(w.clone()),
                None => match name {
                    "T" => TwistSpec::Bundle(self.complexified_tangent()),
                    "S2T" => TwistSpec::Bundle(self.symmetric_power(2)),
                    "L2T" => TwistSpec::Bundle(self.exterior_power(2)),
                    "L3T" => TwistSpec::Bundle(self.exterior_power(3)),
                    _ => return Err(Error::Invalid(format!("unknown twist `{name}` for {}", self.name))),
                },
            },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifold serializes")
    }
}

fn subsets(w: &[i64], r: usize, start: usize, acc: i64, out: &mut Vec<i64>, repeat: bool) {
    if r == 0 {
        out.push(acc);
        return;
    }
    for i in start..w.len() {
        let next = if repeat { i } else { i + 1 };
        subsets(w, r - 1, next, acc + w[i], out, repeat);
    }
}
