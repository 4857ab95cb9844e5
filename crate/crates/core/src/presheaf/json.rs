//! JSON encoding of presheaves and presheaf maps.
//!
//! ```json
//! {"site": "cubical", "trunc_dim": 2,
//!  "cells": {"0": [0, 1], "1": [0]},
//!  "action": [{"gen": {"face": [1, 0]}, "from_dim": 1,
//!              "map": {"0": {"dim": 0, "cell": 0}}}, ...]}
//! ```
//!
//! `cells` lists the nondegenerate cells; `action` gives every face of every
//! listed cell. A face that is degenerate carries its degeneracy under
//! `"degen"` as a site morphism.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::{Cell, FinitePresheaf, PresheafMap};
use crate::error::{Error, Result};
use crate::site::{Site, SiteKind};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn face_gen_json<S: Site>(i: usize) -> Value {
    match S::KIND {
        SiteKind::Cubical => json!({"face": [i / 2 + 1, i % 2]}),
        SiteKind::Simplicial => json!({"face": i}),
    }
}

fn face_gen_parse<S: Site>(v: &Value, k: usize) -> Result<usize> {
    let f = v.get("face").ok_or_else(|| parse_err("generator must be a face"))?;
    let i = match S::KIND {
        SiteKind::Cubical => {
            let a = f.as_array().filter(|a| a.len() == 2).ok_or_else(|| parse_err("cubical face is [i, e]"))?;
            let i = a[0].as_u64().ok_or_else(|| parse_err("face index"))? as usize;
            let e = a[1].as_u64().filter(|&e| e <= 1).ok_or_else(|| parse_err("face side must be 0 or 1"))? as usize;
            if i == 0 {
                return Err(parse_err("face indices start at 1"));
            }
            2 * (i - 1) + e
        }
        SiteKind::Simplicial => f.as_u64().ok_or_else(|| parse_err("simplicial face is an integer"))? as usize,
    };
    if i >= S::num_faces(k) {
        return Err(parse_err(format!("face out of range for dimension {k}")));
    }
    Ok(i)
}

pub fn cell_ref_json<S: Site>(x: &FinitePresheaf<S>, c: Cell) -> Value {
    let mut m = Map::new();
    m.insert("dim".into(), json!(c.root_dim));
    m.insert("cell".into(), json!(c.root));
    if !c.is_nondegenerate() {
        m.insert("degen".into(), serde_json::to_value(x.epi_of(c)).expect("morphism serializes"));
    }
    Value::Object(m)
}

/// Parses a cell reference of dimension `dim`; `ids[j]` maps external root
/// identifiers of dimension `j` to positions.
fn cell_ref_parse<S: Site>(v: &Value, dim: usize, ids: &[HashMap<String, u32>]) -> Result<Cell> {
    let j = v.get("dim").and_then(Value::as_u64).ok_or_else(|| parse_err("cell reference needs dim"))? as usize;
    let id = v.get("cell").ok_or_else(|| parse_err("cell reference needs cell"))?;
    let root = *ids
        .get(j)
        .and_then(|m| m.get(&id_key(id)))
        .ok_or_else(|| parse_err(format!("unknown cell {id} in dimension {j}")))?;
    let epi = match v.get("degen") {
        None => {
            if j != dim {
                return Err(parse_err(format!("cell of dimension {j} used in dimension {dim} without degen")));
            }
            0
        }
        Some(m) => {
            let e: S::Mor = serde_json::from_value(m.clone()).map_err(|e| parse_err(e.to_string()))?;
            if !S::is_epi(&e) || S::source(&e) != dim || S::target(&e) != j {
                return Err(parse_err(format!("degen must be an epi [{dim}] -> [{j}]")));
            }
            S::epi_index(&e)
        }
    };
    Ok(Cell {
        dim: dim as u8,
        root_dim: j as u8,
        root,
        epi,
    })
}

fn id_key(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn presheaf_to_json<S: Site>(x: &FinitePresheaf<S>) -> Value {
    let mut cells = Map::new();
    for j in 0..=x.trunc_dim() {
        cells.insert(j.to_string(), json!((0..x.n_roots(j)).collect::<Vec<_>>()));
    }
    let mut action = Vec::new();
    for k in 1..=x.trunc_dim() {
        for i in 0..S::num_faces(k) {
            let mut map = Map::new();
            for r in x.roots(k) {
                map.insert(r.root.to_string(), cell_ref_json(x, x.root_faces(k, r.root)[i]));
            }
            action.push(json!({"gen": face_gen_json::<S>(i), "from_dim": k, "map": map}));
        }
    }
    json!({
        "site": S::KIND,
        "trunc_dim": x.trunc_dim(),
        "cells": cells,
        "action": action,
    })
}

pub fn site_of(v: &Value) -> Result<SiteKind> {
    v.get("site")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("missing site"))?
        .parse()
}

fn parse_ids(v: &Value, trunc: usize) -> Result<(Vec<HashMap<String, u32>>, Vec<Vec<Value>>)> {
    let cells = v.get("cells").and_then(Value::as_object).ok_or_else(|| parse_err("missing cells"))?;
    let mut ids = vec![HashMap::new(); trunc + 1];
    let mut order = vec![Vec::new(); trunc + 1];
    for (k, list) in cells {
        let j: usize = k.parse().map_err(|_| parse_err(format!("bad dimension key {k}")))?;
        if j > trunc {
            return Err(parse_err(format!("cells in dimension {j} above trunc_dim")));
        }
        for id in list.as_array().ok_or_else(|| parse_err("cell list must be an array"))? {
            let pos = ids[j].len() as u32;
            if ids[j].insert(id_key(id), pos).is_some() {
                return Err(parse_err(format!("duplicate cell {id} in dimension {j}")));
            }
            order[j].push(id.clone());
        }
    }
    Ok((ids, order))
}

pub fn presheaf_from_json<S: Site>(v: &Value) -> Result<FinitePresheaf<S>> {
    let site = site_of(v)?;
    if site != S::KIND {
        return Err(Error::SiteMismatch(format!("expected {} presheaf, found {site}", S::KIND)));
    }
    let trunc = v.get("trunc_dim").and_then(Value::as_u64).ok_or_else(|| parse_err("missing trunc_dim"))? as usize;
    if trunc > crate::site::MAX_DIM {
        return Err(Error::InvalidParameters(format!("trunc_dim {trunc} exceeds {}", crate::site::MAX_DIM)));
    }
    let (ids, _) = parse_ids(v, trunc)?;
    let mut faces: Vec<Vec<Vec<Option<Cell>>>> = (0..=trunc)
        .map(|j| vec![vec![None; S::num_faces(j)]; ids[j].len()])
        .collect();
    let empty = Vec::new();
    let action = match v.get("action") {
        None => &empty,
        Some(a) => a.as_array().ok_or_else(|| parse_err("action must be an array"))?,
    };
    for entry in action {
        let k = entry.get("from_dim").and_then(Value::as_u64).ok_or_else(|| parse_err("missing from_dim"))? as usize;
        if k == 0 || k > trunc {
            return Err(parse_err(format!("face action from dimension {k}")));
        }
        let i = face_gen_parse::<S>(entry.get("gen").ok_or_else(|| parse_err("missing gen"))?, k)?;
        let map = entry.get("map").and_then(Value::as_object).ok_or_else(|| parse_err("missing map"))?;
        for (id, target) in map {
            let r = *ids[k].get(id).ok_or_else(|| parse_err(format!("unknown cell {id} in dimension {k}")))?;
            let c = cell_ref_parse::<S>(target, k - 1, &ids)?;
            let slot = &mut faces[k][r as usize][i];
            if slot.is_some() {
                return Err(parse_err(format!("face of cell {id} given twice")));
            }
            *slot = Some(c);
        }
    }
    let faces = faces
        .into_iter()
        .enumerate()
        .map(|(k, level)| {
            level
                .into_iter()
                .enumerate()
                .map(|(r, fs)| {
                    fs.into_iter()
                        .enumerate()
                        .map(|(i, c)| {
                            c.ok_or_else(|| {
                                Error::MalformedPresheaf(format!("missing face {} of cell {k}:{r}", S::face_label(k, i)))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FinitePresheaf::new(trunc, faces)
}

pub fn map_to_json<S: Site>(f: &PresheafMap<S>) -> Value {
    let mut asg = BTreeMap::new();
    for (j, vals) in f.assignment().iter().enumerate() {
        let mut m = Map::new();
        for (r, v) in vals.iter().enumerate() {
            m.insert(r.to_string(), cell_ref_json(f.target(), *v));
        }
        asg.insert(j, Value::Object(m));
    }
    let asg: Map<String, Value> = asg.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    json!({
        "source": presheaf_to_json(f.source()),
        "target": presheaf_to_json(f.target()),
        "assignment": asg,
    })
}

pub fn map_from_json<S: Site>(v: &Value) -> Result<PresheafMap<S>> {
    let source = Arc::new(presheaf_from_json::<S>(v.get("source").ok_or_else(|| parse_err("missing source"))?)?);
    let target = Arc::new(presheaf_from_json::<S>(v.get("target").ok_or_else(|| parse_err("missing target"))?)?);
    map_from_json_with(v, source, target)
}

/// Parses only the assignment of a map document against given presheaves.
pub fn map_from_json_with<S: Site>(
    v: &Value,
    source: Arc<FinitePresheaf<S>>,
    target: Arc<FinitePresheaf<S>>,
) -> Result<PresheafMap<S>> {
    let src_doc = v.get("source");
    let src_ids = match src_doc {
        Some(doc) => parse_ids(doc, source.trunc_dim())?.0,
        None => (0..=source.trunc_dim())
            .map(|j| (0..source.n_roots(j) as u32).map(|r| (r.to_string(), r)).collect())
            .collect(),
    };
    let tgt_ids = match v.get("target") {
        Some(doc) => parse_ids(doc, target.trunc_dim())?.0,
        None => (0..=target.trunc_dim())
            .map(|j| (0..target.n_roots(j) as u32).map(|r| (r.to_string(), r)).collect())
            .collect(),
    };
    let asg = v.get("assignment").and_then(Value::as_object).ok_or_else(|| parse_err("missing assignment"))?;
    let mut assignment: Vec<Vec<Option<Cell>>> = (0..=source.trunc_dim()).map(|j| vec![None; source.n_roots(j)]).collect();
    for (k, m) in asg {
        let j: usize = k.parse().map_err(|_| parse_err(format!("bad dimension key {k}")))?;
        if j > source.trunc_dim() {
            return Err(parse_err(format!("assignment in dimension {j} above trunc_dim")));
        }
        for (id, cref) in m.as_object().ok_or_else(|| parse_err("assignment level must be an object"))? {
            let r = *src_ids[j].get(id).ok_or_else(|| parse_err(format!("unknown source cell {id}")))?;
            assignment[j][r as usize] = Some(cell_ref_parse::<S>(cref, j, &tgt_ids)?);
        }
    }
    let assignment = assignment
        .into_iter()
        .enumerate()
        .map(|(j, vals)| {
            vals.into_iter()
                .enumerate()
                .map(|(r, c)| c.ok_or_else(|| Error::MalformedMap(format!("no image for cell {j}:{r}"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PresheafMap::new(source, target, assignment)
}
