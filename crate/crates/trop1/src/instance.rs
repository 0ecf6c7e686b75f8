//! Instance files: JSON schema, parsing with full validation, and
//! deterministic serialization.
//!
//! An instance carries a curve (vertices with genus, edges with positive
//! rational lengths, marked legs), optionally a map section (contact orders
//! per edge and leg, vertex positions, cone labels) and a fan. Rationals are
//! written as strings `"p/q"` (integer shorthand `"n"` accepted on input).
//! Parsing re-validates every cross-module invariant and reports the first
//! violation with the offending id; `parse(serialize(x))` is the identity on
//! valid instances, and serialization is byte-deterministic.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::{CurveGraph, Edge, Leg, TropicalCurve, Vertex, VertexId};
use crate::error::TropError;
use crate::linalg::{format_rat, Rat, RatVec};
use crate::tropmap::{CombinatorialType, ContactOrder, Fan, NamedCone, TropicalMap};

pub const SCHEMA_VERSION: u32 = 1;

/// A fully validated instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub name: String,
    pub curve: TropicalCurve,
    pub map: Option<TropicalMap>,
    pub fan: Option<Fan>,
}

#[derive(Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
    pub curve: CurveSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanSection>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct Metadata {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Serialize, Deserialize)]
pub struct CurveSection {
    pub vertices: Vec<VertexDto>,
    pub edges: Vec<EdgeDto>,
    #[serde(default)]
    pub legs: Vec<LegDto>,
}

#[derive(Serialize, Deserialize)]
pub struct VertexDto {
    pub id: String,
    #[serde(default)]
    pub genus: u32,
}

#[derive(Serialize, Deserialize)]
pub struct EdgeDto {
    pub id: String,
    pub ends: [String; 2],
    pub length: String,
}

#[derive(Serialize, Deserialize)]
pub struct LegDto {
    pub id: String,
    pub base: String,
    pub marking: u32,
}

#[derive(Serialize, Deserialize)]
pub struct MapSection {
    pub ambient_dim: usize,
    pub edges: Vec<EdgeMapDto>,
    #[serde(default)]
    pub legs: Vec<LegMapDto>,
    pub positions: Vec<PositionDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<Vec<ConeLabelDto>>,
}

#[derive(Serialize, Deserialize)]
pub struct EdgeMapDto {
    pub edge: String,
    pub u: Vec<i64>,
    pub w: u64,
}

#[derive(Serialize, Deserialize)]
pub struct LegMapDto {
    pub leg: String,
    pub u: Vec<i64>,
    pub w: u64,
}

#[derive(Serialize, Deserialize)]
pub struct PositionDto {
    pub vertex: String,
    pub coords: Vec<String>,
}

#[derive(Serialize, Deserialize)]
pub struct ConeLabelDto {
    pub vertex: String,
    pub cone: String,
}

#[derive(Serialize, Deserialize)]
pub struct FanSection {
    pub ambient_dim: usize,
    pub cones: Vec<FanConeDto>,
    #[serde(default)]
    pub complete: bool,
}

#[derive(Serialize, Deserialize)]
pub struct FanConeDto {
    pub id: String,
    pub rays: Vec<Vec<i64>>,
}

fn parse_rat_field(raw: &str, what: &str) -> Result<Rat, TropError> {
    crate::linalg::parse_rat(raw).map_err(|e| TropError::InvalidInstance(format!("{what}: {e}")))
}

/// Parses and validates an instance from JSON text.
pub fn parse_instance_str(text: &str) -> Result<Instance, TropError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| {
        TropError::Parse(format!(
            "malformed instance JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    instance_from_file(file)
}

/// Parses and validates an instance file from disk.
pub fn parse_instance(path: &Path) -> Result<Instance, TropError> {
    let text = std::fs::read_to_string(path)?;
    parse_instance_str(&text).map_err(|e| match e {
        TropError::Parse(msg) => TropError::Parse(format!("{}: {msg}", path.display())),
        TropError::InvalidInstance(msg) => {
            TropError::InvalidInstance(format!("{}: {msg}", path.display()))
        }
        other => other,
    })
}

pub fn instance_from_file(file: InstanceFile) -> Result<Instance, TropError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(TropError::InvalidInstance(format!(
            "unknown schema_version {}, expected {SCHEMA_VERSION}",
            file.schema_version
        )));
    }
    let name = file
        .metadata
        .as_ref()
        .map(|m| m.name.clone())
        .unwrap_or_else(|| "unnamed".to_string());

    // Curve section: resolve ids, check uniqueness and positivity.
    let mut vertex_index: HashMap<String, VertexId> = HashMap::new();
    let mut vertices = Vec::new();
    for v in &file.curve.vertices {
        if vertex_index
            .insert(v.id.clone(), VertexId(vertices.len()))
            .is_some()
        {
            return Err(TropError::InvalidInstance(format!(
                "duplicate vertex id {}",
                v.id
            )));
        }
        vertices.push(Vertex { name: v.id.clone(), genus: v.genus });
    }
    let resolve = |id: &str, what: &str| -> Result<VertexId, TropError> {
        vertex_index.get(id).copied().ok_or_else(|| {
            TropError::InvalidInstance(format!("{what} references unknown vertex {id}"))
        })
    };
    let mut edge_index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut lengths = Vec::new();
    for e in &file.curve.edges {
        if edge_index.insert(e.id.clone(), edges.len()).is_some() {
            return Err(TropError::InvalidInstance(format!(
                "duplicate edge id {}",
                e.id
            )));
        }
        let a = resolve(&e.ends[0], &format!("edge {}", e.id))?;
        let b = resolve(&e.ends[1], &format!("edge {}", e.id))?;
        let len = parse_rat_field(&e.length, &format!("edge {} length", e.id))?;
        edges.push(Edge { name: e.id.clone(), ends: (a, b) });
        lengths.push(len);
    }
    let mut leg_index: HashMap<String, usize> = HashMap::new();
    let mut markings = HashSet::new();
    let mut legs = Vec::new();
    for l in &file.curve.legs {
        if leg_index.insert(l.id.clone(), legs.len()).is_some() {
            return Err(TropError::InvalidInstance(format!(
                "duplicate leg id {}",
                l.id
            )));
        }
        if !markings.insert(l.marking) {
            return Err(TropError::InvalidInstance(format!(
                "marking {} used twice",
                l.marking
            )));
        }
        let base = resolve(&l.base, &format!("leg {}", l.id))?;
        legs.push(Leg { name: l.id.clone(), base, marking: l.marking });
    }
    let graph = CurveGraph { vertices, edges, legs };
    let curve = TropicalCurve::new(graph.clone(), lengths.clone())?;

    // Fan section.
    let fan = match &file.fan {
        None => None,
        Some(f) => {
            let mut names = HashSet::new();
            let cones = f
                .cones
                .iter()
                .map(|c| {
                    if !names.insert(c.id.clone()) {
                        return Err(TropError::InvalidInstance(format!(
                            "duplicate fan cone id {}",
                            c.id
                        )));
                    }
                    let rays: Vec<RatVec> = c.rays.iter().map(|r| RatVec::from_ints(r)).collect();
                    for ray in &rays {
                        if ray.dim() != f.ambient_dim {
                            return Err(TropError::InvalidInstance(format!(
                                "fan cone {} has a ray of wrong dimension",
                                c.id
                            )));
                        }
                    }
                    Ok(NamedCone {
                        name: c.id.clone(),
                        cone: crate::cone::VCone::new(f.ambient_dim, rays),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(Fan {
                ambient_dim: f.ambient_dim,
                cones,
                complete: f.complete,
            })
        }
    };

    // Map section.
    let map = match &file.map {
        None => None,
        Some(m) => {
            let r = m.ambient_dim;
            if let Some(f) = &fan {
                if f.ambient_dim != r {
                    return Err(TropError::InvalidInstance(format!(
                        "map ambient dimension {r} differs from fan dimension {}",
                        f.ambient_dim
                    )));
                }
            }
            let mut edge_dirs: Vec<Option<ContactOrder>> = vec![None; graph.edges.len()];
            for em in &m.edges {
                let idx = *edge_index.get(&em.edge).ok_or_else(|| {
                    TropError::InvalidInstance(format!("map refers to unknown edge {}", em.edge))
                })?;
                let co = ContactOrder::new(RatVec::from_ints(&em.u), em.w)
                    .map_err(|e| TropError::InvalidInstance(format!("edge {}: {e}", em.edge)))?;
                if co.u.dim() != r {
                    return Err(TropError::InvalidInstance(format!(
                        "edge {} direction has dimension {}, expected {r}",
                        em.edge,
                        co.u.dim()
                    )));
                }
                if edge_dirs[idx].replace(co).is_some() {
                    return Err(TropError::InvalidInstance(format!(
                        "edge {} has two contact orders",
                        em.edge
                    )));
                }
            }
            let edge_dirs: Vec<ContactOrder> = edge_dirs
                .into_iter()
                .zip(&graph.edges)
                .map(|(d, e)| {
                    d.ok_or_else(|| {
                        TropError::InvalidInstance(format!(
                            "edge {} has no contact order in the map section",
                            e.name
                        ))
                    })
                })
                .collect::<Result<_, _>>()?;
            let mut leg_dirs: Vec<Option<ContactOrder>> = vec![None; graph.legs.len()];
            for lm in &m.legs {
                let idx = *leg_index.get(&lm.leg).ok_or_else(|| {
                    TropError::InvalidInstance(format!("map refers to unknown leg {}", lm.leg))
                })?;
                let co = ContactOrder::new(RatVec::from_ints(&lm.u), lm.w)
                    .map_err(|e| TropError::InvalidInstance(format!("leg {}: {e}", lm.leg)))?;
                if leg_dirs[idx].replace(co).is_some() {
                    return Err(TropError::InvalidInstance(format!(
                        "leg {} has two contact orders",
                        lm.leg
                    )));
                }
            }
            let leg_dirs: Vec<ContactOrder> = leg_dirs
                .into_iter()
                .zip(&graph.legs)
                .map(|(d, l)| {
                    d.ok_or_else(|| {
                        TropError::InvalidInstance(format!(
                            "leg {} has no contact order in the map section",
                            l.name
                        ))
                    })
                })
                .collect::<Result<_, _>>()?;
            let mut positions: Vec<Option<RatVec>> = vec![None; graph.vertices.len()];
            for p in &m.positions {
                let v = resolve(&p.vertex, "position")?;
                let coords = p
                    .coords
                    .iter()
                    .map(|c| parse_rat_field(c, &format!("position of {}", p.vertex)))
                    .collect::<Result<Vec<_>, _>>()?;
                if positions[v.0].replace(RatVec(coords)).is_some() {
                    return Err(TropError::InvalidInstance(format!(
                        "vertex {} has two positions",
                        p.vertex
                    )));
                }
            }
            let positions: Vec<RatVec> = positions
                .into_iter()
                .zip(&graph.vertices)
                .map(|(p, v)| {
                    p.ok_or_else(|| {
                        TropError::InvalidInstance(format!("vertex {} has no position", v.name))
                    })
                })
                .collect::<Result<_, _>>()?;
            let cone_labels = match (&m.cones, &fan) {
                (None, _) => None,
                (Some(_), None) => {
                    return Err(TropError::InvalidInstance(
                        "cone labels given but no fan section".into(),
                    ))
                }
                (Some(labels), Some(f)) => {
                    let mut out = vec![usize::MAX; graph.vertices.len()];
                    for cl in labels {
                        let v = resolve(&cl.vertex, "cone label")?;
                        let idx = f.cone_index(&cl.cone).ok_or_else(|| {
                            TropError::InvalidInstance(format!(
                                "cone label references unknown fan cone {}",
                                cl.cone
                            ))
                        })?;
                        out[v.0] = idx;
                    }
                    if let Some(missing) = out.iter().position(|&i| i == usize::MAX) {
                        return Err(TropError::InvalidInstance(format!(
                            "vertex {} has no cone label",
                            graph.vertices[missing].name
                        )));
                    }
                    Some(out)
                }
            };
            let ty = CombinatorialType {
                graph: graph.clone(),
                ambient_dim: r,
                edge_dirs,
                leg_dirs,
                cone_labels,
            };
            Some(TropicalMap::new(ty, lengths.clone(), positions)?)
        }
    };

    Ok(Instance { name, curve, map, fan })
}

pub fn instance_to_file(inst: &Instance) -> InstanceFile {
    let graph = &inst.curve.graph;
    let curve = CurveSection {
        vertices: graph
            .vertices
            .iter()
            .map(|v| VertexDto { id: v.name.clone(), genus: v.genus })
            .collect(),
        edges: graph
            .edges
            .iter()
            .zip(&inst.curve.lengths)
            .map(|(e, len)| EdgeDto {
                id: e.name.clone(),
                ends: [
                    graph.vertices[e.ends.0 .0].name.clone(),
                    graph.vertices[e.ends.1 .0].name.clone(),
                ],
                length: format_rat(len),
            })
            .collect(),
        legs: graph
            .legs
            .iter()
            .map(|l| LegDto {
                id: l.name.clone(),
                base: graph.vertices[l.base.0].name.clone(),
                marking: l.marking,
            })
            .collect(),
    };
    let int_vec = |v: &RatVec| -> Vec<i64> {
        v.0.iter()
            .map(|x| x.to_integer().try_into().expect("small integer direction"))
            .collect()
    };
    let map = inst.map.as_ref().map(|m| MapSection {
        ambient_dim: m.ambient_dim(),
        edges: graph
            .edges
            .iter()
            .zip(&m.ty.edge_dirs)
            .map(|(e, co)| EdgeMapDto {
                edge: e.name.clone(),
                u: int_vec(&co.u),
                w: co.w,
            })
            .collect(),
        legs: graph
            .legs
            .iter()
            .zip(&m.ty.leg_dirs)
            .map(|(l, co)| LegMapDto {
                leg: l.name.clone(),
                u: int_vec(&co.u),
                w: co.w,
            })
            .collect(),
        positions: graph
            .vertices
            .iter()
            .zip(&m.positions)
            .map(|(v, p)| PositionDto {
                vertex: v.name.clone(),
                coords: p.0.iter().map(format_rat).collect(),
            })
            .collect(),
        cones: m.ty.cone_labels.as_ref().map(|labels| {
            graph
                .vertices
                .iter()
                .zip(labels)
                .map(|(v, &idx)| ConeLabelDto {
                    vertex: v.name.clone(),
                    cone: inst.fan.as_ref().expect("labels imply fan").cones[idx]
                        .name
                        .clone(),
                })
                .collect()
        }),
    });
    let fan = inst.fan.as_ref().map(|f| FanSection {
        ambient_dim: f.ambient_dim,
        cones: f
            .cones
            .iter()
            .map(|c| FanConeDto {
                id: c.name.clone(),
                rays: c.cone.rays.iter().map(int_vec).collect(),
            })
            .collect(),
        complete: f.complete,
    });
    InstanceFile {
        schema_version: SCHEMA_VERSION,
        metadata: Some(Metadata { name: inst.name.clone(), source: None }),
        curve,
        map,
        fan,
    }
}

/// Canonical JSON text for an instance (pretty, trailing newline).
pub fn serialize_instance(inst: &Instance) -> String {
    let mut text = serde_json::to_string_pretty(&instance_to_file(inst))
        .expect("instance serialization cannot fail");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rint;

    #[test]
    fn roundtrip_banana_chain() {
        let map = crate::tropmap::banana_chain(rint(1), rint(2));
        let inst = Instance {
            name: "chain".into(),
            curve: map.curve(),
            map: Some(map),
            fan: None,
        };
        let text = serialize_instance(&inst);
        let parsed = parse_instance_str(&text).unwrap();
        assert_eq!(parsed, inst);
        // byte determinism
        assert_eq!(serialize_instance(&parsed), text);
    }

    #[test]
    fn zero_length_rejected_with_context() {
        let text = r#"{
            "schema_version": 1,
            "curve": {
                "vertices": [{"id": "v", "genus": 1}, {"id": "w"}],
                "edges": [{"id": "e", "ends": ["v", "w"], "length": "0"}],
                "legs": []
            }
        }"#;
        let err = parse_instance_str(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('e'), "{msg}");
        assert!(msg.contains("positive") || msg.contains("length"), "{msg}");
    }

    #[test]
    fn unbalanced_map_names_vertex_and_defect() {
        let text = r#"{
            "schema_version": 1,
            "curve": {
                "vertices": [{"id": "v", "genus": 1}],
                "edges": [],
                "legs": [{"id": "l1", "base": "v", "marking": 1}]
            },
            "map": {
                "ambient_dim": 1,
                "edges": [],
                "legs": [{"leg": "l1", "u": [1], "w": 3}],
                "positions": [{"vertex": "v", "coords": ["0"]}]
            }
        }"#;
        let err = parse_instance_str(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("not balanced"), "{msg}");
        assert!(msg.contains('v'), "{msg}");
        assert!(msg.contains('3'), "{msg}");
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = parse_instance_str("{ not json").unwrap_err();
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn unknown_schema_rejected() {
        let text = r#"{"schema_version": 99, "curve": {"vertices": [{"id":"v","genus":1}], "edges": [], "legs": []}}"#;
        let err = parse_instance_str(text).unwrap_err();
        assert!(err.to_string().contains("schema_version"), "{err}");
    }

    #[test]
    fn unresolved_ids_rejected() {
        let text = r#"{
            "schema_version": 1,
            "curve": {
                "vertices": [{"id": "v", "genus": 1}],
                "edges": [{"id": "e", "ends": ["v", "nope"], "length": "1"}],
                "legs": []
            }
        }"#;
        let err = parse_instance_str(text).unwrap_err();
        assert!(err.to_string().contains("nope"), "{err}");
    }
}
