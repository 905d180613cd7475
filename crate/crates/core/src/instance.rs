//! Bipartite problem instances, generators, and the native file format.
//!
//! Offline vertices carry weights; online vertices arrive in the stored list
//! order; each edge has a success probability in `(0, 1]`. Ids are strings in
//! the file format and mapped to dense indices internally.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use serde::Deserialize;

use crate::rng::substream;

pub type OfflineIdx = usize;
pub type OnlineIdx = usize;

/// Serialized form: one JSON document with `offline`, `online`, `edges`.
#[derive(Debug, Clone, Deserialize)]
pub struct RawInstance {
    pub offline: Vec<RawOffline>,
    pub online: Vec<String>,
    pub edges: Vec<RawEdge>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawOffline {
    pub id: String,
    pub weight: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawEdge {
    pub u: String,
    pub v: String,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DuplicateOfflineId(String),
    DuplicateOnlineId(String),
    DanglingEndpoint { u: String, v: String },
    ProbabilityOutOfRange { u: String, v: String, p: f64 },
    DuplicateEdge { u: String, v: String },
    BadWeight { id: String, weight: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DuplicateOfflineId(id) => write!(f, "duplicate offline id '{id}'"),
            Violation::DuplicateOnlineId(id) => write!(f, "duplicate online id '{id}'"),
            Violation::DanglingEndpoint { u, v } => {
                write!(f, "edge ({u}, {v}) references a missing vertex (dangling endpoint)")
            }
            Violation::ProbabilityOutOfRange { u, v, p } => {
                write!(f, "edge ({u}, {v}): probability must be positive and at most 1, got {p}")
            }
            Violation::DuplicateEdge { u, v } => write!(f, "duplicate edge ({u}, {v})"),
            Violation::BadWeight { id, weight } => {
                write!(f, "offline '{id}': weight must be finite and non-negative, got {weight}")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    BadGeneratorArgs(String),
    #[error("vertex '{0}' not found")]
    UnknownVertex(String),
    #[error("online vertex {v} is not a neighbor of offline vertex {u}")]
    NotANeighbor { u: String, v: String },
}

/// Immutable bipartite instance with dense internal indices.
#[derive(Debug, Clone)]
pub struct Instance {
    offline_ids: Vec<String>,
    weights: Vec<f64>,
    online_ids: Vec<String>,
    /// Per online vertex: `(offline index, p)` sorted by offline index.
    online_adj: Vec<Vec<(OfflineIdx, f64)>>,
    /// Per offline vertex: `(online index, p)` sorted by arrival.
    offline_adj: Vec<Vec<(OnlineIdx, f64)>>,
    /// Rank of each offline vertex in id-lexicographic order (tie-breaks).
    lex_rank: Vec<usize>,
    p_max: f64,
}

impl Instance {
    /// Validate and index a raw instance. Returns every violation found.
    pub fn from_raw(raw: &RawInstance) -> Result<Self, InstanceError> {
        let violations = validate(raw);
        if !violations.is_empty() {
            return Err(InstanceError::Invalid(violations));
        }
        let off_index: HashMap<&str, usize> =
            raw.offline.iter().enumerate().map(|(i, o)| (o.id.as_str(), i)).collect();
        let on_index: HashMap<&str, usize> =
            raw.online.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut online_adj = vec![Vec::new(); raw.online.len()];
        let mut offline_adj = vec![Vec::new(); raw.offline.len()];
        let mut p_max: f64 = 0.0;
        for e in &raw.edges {
            let u = off_index[e.u.as_str()];
            let v = on_index[e.v.as_str()];
            online_adj[v].push((u, e.p));
            offline_adj[u].push((v, e.p));
            p_max = p_max.max(e.p);
        }
        for adj in &mut online_adj {
            adj.sort_unstable_by_key(|&(u, _)| u);
        }
        for adj in &mut offline_adj {
            adj.sort_unstable_by_key(|&(v, _)| v);
        }
        let mut order: Vec<usize> = (0..raw.offline.len()).collect();
        order.sort_by(|&a, &b| raw.offline[a].id.cmp(&raw.offline[b].id));
        let mut lex_rank = vec![0usize; raw.offline.len()];
        for (rank, &i) in order.iter().enumerate() {
            lex_rank[i] = rank;
        }
        Ok(Self {
            offline_ids: raw.offline.iter().map(|o| o.id.clone()).collect(),
            weights: raw.offline.iter().map(|o| o.weight).collect(),
            online_ids: raw.online.clone(),
            online_adj,
            offline_adj,
            lex_rank,
            p_max,
        })
    }

    pub fn n_offline(&self) -> usize {
        self.offline_ids.len()
    }

    pub fn n_online(&self) -> usize {
        self.online_ids.len()
    }

    pub fn weight(&self, u: OfflineIdx) -> f64 {
        self.weights[u]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn offline_id(&self, u: OfflineIdx) -> &str {
        &self.offline_ids[u]
    }

    pub fn online_id(&self, v: OnlineIdx) -> &str {
        &self.online_ids[v]
    }

    pub fn offline_index(&self, id: &str) -> Option<OfflineIdx> {
        self.offline_ids.iter().position(|s| s == id)
    }

    /// Neighbors of an online vertex, with success probabilities.
    pub fn neighbors_of_online(&self, v: OnlineIdx) -> &[(OfflineIdx, f64)] {
        &self.online_adj[v]
    }

    /// Neighbors of an offline vertex, in arrival order.
    pub fn neighbors_of_offline(&self, u: OfflineIdx) -> &[(OnlineIdx, f64)] {
        &self.offline_adj[u]
    }

    /// Lexicographic rank of an offline id (0 = smallest id).
    pub fn lex_rank(&self, u: OfflineIdx) -> usize {
        self.lex_rank[u]
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// True when every edge has the same success probability.
    pub fn equal_probabilities(&self) -> bool {
        let mut p = None;
        for adj in &self.online_adj {
            for &(_, q) in adj {
                match p {
                    None => p = Some(q),
                    Some(p0) if (q - p0).abs() > 1e-12 * p0.max(q) => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// Total edge count.
    pub fn n_edges(&self) -> usize {
        self.online_adj.iter().map(Vec::len).sum()
    }

    /// `p_u(S) = min(sum_{v in S} p_uv, 1)`. `S` must consist of neighbors of `u`.
    pub fn neighbor_mass(&self, u: OfflineIdx, s: &[OnlineIdx]) -> Result<f64, InstanceError> {
        let adj = &self.offline_adj[u];
        let mut total = 0.0;
        for &v in s {
            match adj.binary_search_by_key(&v, |&(w, _)| w) {
                Ok(k) => total += adj[k].1,
                Err(_) => {
                    return Err(InstanceError::NotANeighbor {
                        u: self.offline_ids[u].clone(),
                        v: self.online_ids[v].clone(),
                    })
                }
            }
        }
        Ok(total.min(1.0))
    }

    /// Copy with every success probability replaced by `p`.
    pub fn with_uniform_probability(&self, p: f64) -> Result<Self, InstanceError> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(InstanceError::BadGeneratorArgs(format!(
                "probability must be in (0, 1], got {p}"
            )));
        }
        let mut out = self.clone();
        for adj in &mut out.online_adj {
            for e in adj.iter_mut() {
                e.1 = p;
            }
        }
        for adj in &mut out.offline_adj {
            for e in adj.iter_mut() {
                e.1 = p;
            }
        }
        out.p_max = p;
        Ok(out)
    }

    /// Serialize as the native JSON document (numbers at 17 significant
    /// digits, so reading back reproduces the instance exactly).
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n  \"offline\": [\n");
        for (i, id) in self.offline_ids.iter().enumerate() {
            s.push_str(&format!(
                "    {{\"id\": {}, \"weight\": {}}}{}\n",
                serde_json::to_string(id).unwrap(),
                fmt_num(self.weights[i]),
                if i + 1 < self.offline_ids.len() { "," } else { "" }
            ));
        }
        s.push_str("  ],\n  \"online\": [\n");
        for (i, id) in self.online_ids.iter().enumerate() {
            s.push_str(&format!(
                "    {}{}\n",
                serde_json::to_string(id).unwrap(),
                if i + 1 < self.online_ids.len() { "," } else { "" }
            ));
        }
        s.push_str("  ],\n  \"edges\": [\n");
        let mut first = true;
        let mut lines = Vec::new();
        for (v, adj) in self.online_adj.iter().enumerate() {
            for &(u, p) in adj {
                if !first {
                    lines.push(",\n".to_string());
                }
                first = false;
                lines.push(format!(
                    "    {{\"u\": {}, \"v\": {}, \"p\": {}}}",
                    serde_json::to_string(&self.offline_ids[u]).unwrap(),
                    serde_json::to_string(&self.online_ids[v]).unwrap(),
                    fmt_num(p)
                ));
            }
        }
        s.push_str(&lines.concat());
        s.push_str("\n  ]\n}\n");
        s
    }
}

fn fmt_num(x: f64) -> String {
    // shortest-exact first; pad to scientific if it loses precision
    let short = format!("{x}");
    if short.parse::<f64>() == Ok(x) && short.len() >= 3 {
        return short;
    }
    format!("{x:.16e}")
}

/// Check every invariant of the raw form; returns all violations found.
pub fn validate(raw: &RawInstance) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut off_seen: HashMap<&str, ()> = HashMap::new();
    for o in &raw.offline {
        if off_seen.insert(o.id.as_str(), ()).is_some() {
            out.push(Violation::DuplicateOfflineId(o.id.clone()));
        }
        if !o.weight.is_finite() || o.weight < 0.0 {
            out.push(Violation::BadWeight { id: o.id.clone(), weight: o.weight });
        }
    }
    let mut on_seen: HashMap<&str, ()> = HashMap::new();
    for v in &raw.online {
        if on_seen.insert(v.as_str(), ()).is_some() {
            out.push(Violation::DuplicateOnlineId(v.clone()));
        }
    }
    let mut edge_seen: HashMap<(&str, &str), ()> = HashMap::new();
    for e in &raw.edges {
        if !off_seen.contains_key(e.u.as_str()) || !on_seen.contains_key(e.v.as_str()) {
            out.push(Violation::DanglingEndpoint { u: e.u.clone(), v: e.v.clone() });
            continue;
        }
        if !(e.p > 0.0 && e.p <= 1.0) || !e.p.is_finite() {
            out.push(Violation::ProbabilityOutOfRange { u: e.u.clone(), v: e.v.clone(), p: e.p });
        }
        if edge_seen.insert((e.u.as_str(), e.v.as_str()), ()).is_some() {
            out.push(Violation::DuplicateEdge { u: e.u.clone(), v: e.v.clone() });
        }
    }
    out
}

pub fn read_instance(path: &Path) -> Result<Instance, InstanceError> {
    let mut file = std::fs::File::open(path)?;
    let mut buf = String::new();
    file.read_to_string(&mut buf)?;
    let raw: RawInstance = serde_json::from_str(&buf)?;
    Instance::from_raw(&raw)
}

pub fn write_instance(inst: &Instance, path: &Path) -> Result<(), InstanceError> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(inst.to_json().as_bytes())?;
    Ok(())
}

/// Offline weight profiles for the generators.
#[derive(Debug, Clone, Copy)]
pub enum WeightLaw {
    /// All weights 1.
    Uniform,
    /// `w_i = ratio^i`; ratios above 1 make the scarce late vertices valuable.
    Geometric(f64),
}

impl WeightLaw {
    fn weight(&self, i: usize) -> f64 {
        match *self {
            WeightLaw::Uniform => 1.0,
            WeightLaw::Geometric(r) => r.powi(i as i32),
        }
    }
}

fn id(prefix: &str, i: usize, width: usize) -> String {
    format!("{prefix}{i:0width$}")
}

/// Upper-triangular family: `n` offline vertices; online block `b`
/// (0-indexed, `ceil(1/p)` arrivals per block) is adjacent to offline
/// vertices `b..n`. Arrivals come in block order, so the early blocks see
/// the whole offline side while the late ones are confined to its tail; the
/// only way to saturate the LP optimum is the reverse diagonal assignment.
pub fn gen_upper_triangular(n: usize, p: f64, weights: WeightLaw) -> Result<Instance, InstanceError> {
    if n == 0 {
        return Err(InstanceError::BadGeneratorArgs("n must be at least 1".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(InstanceError::BadGeneratorArgs(format!("p must be in (0, 1], got {p}")));
    }
    let copies = (1.0 / p).ceil() as usize;
    let n_on = n * copies;
    let wu = n.to_string().len();
    let wv = n_on.to_string().len();
    let offline: Vec<RawOffline> = (0..n)
        .map(|i| RawOffline { id: id("u", i, wu), weight: weights.weight(i) })
        .collect();
    let online: Vec<String> = (0..n_on).map(|j| id("v", j, wv)).collect();
    let mut edges = Vec::new();
    for b in 0..n {
        for c in 0..copies {
            let v = b * copies + c;
            for u in b..n {
                edges.push(RawEdge { u: offline[u].id.clone(), v: online[v].clone(), p });
            }
        }
    }
    Instance::from_raw(&RawInstance { offline, online, edges })
}

/// Uniformly random bipartite instance; each potential edge is included
/// independently with probability `density`. Deterministic per seed.
#[allow(clippy::too_many_arguments)]
pub fn gen_random(
    n_off: usize,
    n_on: usize,
    density: f64,
    p_range: (f64, f64),
    w_range: (f64, f64),
    seed: u64,
) -> Result<Instance, InstanceError> {
    if n_off == 0 || n_on == 0 {
        return Err(InstanceError::BadGeneratorArgs("need at least one vertex per side".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(InstanceError::BadGeneratorArgs(format!("density must be in [0,1], got {density}")));
    }
    let (plo, phi) = p_range;
    if !(plo >= 0.0 && plo < phi && phi <= 1.0) {
        return Err(InstanceError::BadGeneratorArgs(format!(
            "probability range must satisfy 0 <= lo < hi <= 1, got ({plo}, {phi}]"
        )));
    }
    let (wlo, whi) = w_range;
    if !(wlo >= 0.0 && wlo <= whi && whi.is_finite()) {
        return Err(InstanceError::BadGeneratorArgs(format!(
            "weight range must satisfy 0 <= lo <= hi, got [{wlo}, {whi})"
        )));
    }
    let mut rng = substream(seed, 0, "gen-random");
    let wu = n_off.to_string().len();
    let wv = n_on.to_string().len();
    let offline: Vec<RawOffline> = (0..n_off)
        .map(|i| RawOffline {
            id: id("u", i, wu),
            weight: if whi > wlo { rng.gen_range(wlo..whi) } else { wlo },
        })
        .collect();
    let online: Vec<String> = (0..n_on).map(|j| id("v", j, wv)).collect();
    let mut edges = Vec::new();
    for v in 0..n_on {
        for u in 0..n_off {
            if rng.gen::<f64>() < density {
                // uniform on (plo, phi]
                let p = phi - rng.gen::<f64>() * (phi - plo);
                edges.push(RawEdge { u: offline[u].id.clone(), v: online[v].clone(), p });
            }
        }
    }
    Instance::from_raw(&RawInstance { offline, online, edges })
}

/// Layered cascade instance. Layer 0 is a single root arrival with an
/// original edge of probability `eps` and an alternative edge of doubled
/// probability `2 eps` into layer 1. Each deeper offline vertex receives one
/// such doubled alternative edge plus two fresh original arrivals of
/// probability `eps`, so layer `k` carries `2^k` displaced arrivals. Arrivals
/// are ordered deepest layer first, root last.
pub fn gen_cascade(depth: usize, eps: f64) -> Result<Instance, InstanceError> {
    if depth == 0 {
        return Err(InstanceError::BadGeneratorArgs("depth must be at least 1".into()));
    }
    if !(eps > 0.0) || (1 << depth) as f64 * eps > 1.0 {
        return Err(InstanceError::BadGeneratorArgs(format!(
            "need 2^depth * eps <= 1 so the displaced mass fits a unit budget, got 2^{depth} * {eps}"
        )));
    }
    // offline: root at layer 0, 2^(k-1) vertices at layer k
    let mut offline = Vec::new();
    let mut off_id = |k: usize, i: usize| format!("u{k}_{i:04}");
    for k in 0..=depth {
        let count = if k == 0 { 1 } else { 1 << (k - 1) };
        for i in 0..count {
            offline.push(RawOffline { id: off_id(k, i), weight: 1.0 });
        }
    }
    // online (displaced) vertices: 2^k at layer k; original edge eps within the
    // layer, alternative edge 2*eps to its own layer-(k+1) offline vertex
    let mut online = Vec::new();
    let mut edges = Vec::new();
    for k in (0..=depth).rev() {
        let count = 1usize << k;
        for i in 0..count {
            let vid = format!("v{k}_{i:04}");
            // original: layer-k offline vertex i/2 (two arrivals per vertex; the
            // root layer has a single arrival on the single root vertex)
            let (uk, ui) = if k == 0 { (0, 0) } else { (k, i / 2) };
            edges.push(RawEdge { u: off_id(uk, ui), v: vid.clone(), p: eps });
            if k < depth {
                edges.push(RawEdge { u: off_id(k + 1, i), v: vid.clone(), p: 2.0 * eps });
            }
            online.push(vid);
        }
    }
    Instance::from_raw(&RawInstance { offline, online, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(offline: &[(&str, f64)], online: &[&str], edges: &[(&str, &str, f64)]) -> RawInstance {
        RawInstance {
            offline: offline
                .iter()
                .map(|&(id, w)| RawOffline { id: id.into(), weight: w })
                .collect(),
            online: online.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|&(u, v, p)| RawEdge { u: u.into(), v: v.into(), p })
                .collect(),
        }
    }

    #[test]
    fn minimal_instance_validates() {
        let r = raw(&[("u", 1.0)], &["v"], &[("u", "v", 0.5)]);
        let inst = Instance::from_raw(&r).unwrap();
        assert_eq!(inst.n_offline(), 1);
        assert_eq!(inst.p_max(), 0.5);
    }

    #[test]
    fn dangling_endpoint_is_reported() {
        let r = raw(&[("u", 1.0)], &["v"], &[("u", "nope", 0.5)]);
        match Instance::from_raw(&r) {
            Err(InstanceError::Invalid(vs)) => {
                assert!(vs.iter().any(|v| matches!(v, Violation::DanglingEndpoint { .. })));
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn zero_probability_is_rejected() {
        let r = raw(&[("u", 1.0)], &["v"], &[("u", "v", 0.0)]);
        match Instance::from_raw(&r) {
            Err(InstanceError::Invalid(vs)) => {
                assert!(vs.iter().any(|v| matches!(v, Violation::ProbabilityOutOfRange { .. })));
            }
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn all_violations_are_collected() {
        let r = raw(
            &[("u", 1.0), ("u", -1.0)],
            &["v", "v"],
            &[("u", "v", 1.5), ("ghost", "v", 0.5)],
        );
        match Instance::from_raw(&r) {
            Err(InstanceError::Invalid(vs)) => assert!(vs.len() >= 4, "{vs:?}"),
            other => panic!("expected invalid, got {other:?}"),
        }
    }

    #[test]
    fn neighbor_mass_caps_at_one() {
        let ids: Vec<String> = (0..6).map(|i| format!("v{i}")).collect();
        let online: Vec<&str> = ids.iter().map(String::as_str).collect();
        let edges: Vec<(&str, &str, f64)> = online.iter().map(|&v| ("u", v, 0.2)).collect();
        let r = raw(&[("u", 1.0)], &online, &edges);
        let inst = Instance::from_raw(&r).unwrap();
        assert!((inst.neighbor_mass(0, &[0, 1, 2]).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(inst.neighbor_mass(0, &[0, 1, 2, 3, 4, 5]).unwrap(), 1.0);
        assert_eq!(inst.neighbor_mass(0, &[]).unwrap(), 0.0);
    }

    #[test]
    fn neighbor_mass_is_monotone_in_s() {
        let inst = gen_random(4, 8, 0.7, (0.1, 0.4), (1.0, 1.0), 5).unwrap();
        for u in 0..inst.n_offline() {
            let nbrs: Vec<usize> = inst.neighbors_of_offline(u).iter().map(|&(v, _)| v).collect();
            for take in 0..=nbrs.len() {
                let a = inst.neighbor_mass(u, &nbrs[..take]).unwrap();
                let b = inst.neighbor_mass(u, &nbrs[..nbrs.len().min(take + 1)]).unwrap();
                assert!(a <= b + 1e-15);
            }
        }
    }

    #[test]
    fn upper_triangular_structure() {
        let inst = gen_upper_triangular(2, 1.0, WeightLaw::Uniform).unwrap();
        assert_eq!(inst.n_online(), 2);
        assert_eq!(inst.n_edges(), 3);
        assert_eq!(inst.neighbors_of_online(0).len(), 2);
        assert_eq!(inst.neighbors_of_online(1).len(), 1);
        assert_eq!(inst.neighbors_of_online(1)[0].0, 1);

        let single = gen_upper_triangular(1, 0.5, WeightLaw::Uniform).unwrap();
        assert_eq!(single.n_offline(), 1);
        assert_eq!(single.n_online(), 2);
        assert_eq!(single.n_edges(), 2);

        let big = gen_upper_triangular(3, 0.01, WeightLaw::Uniform).unwrap();
        assert_eq!(big.n_online(), 300);
    }

    #[test]
    fn random_generator_extremes_and_determinism() {
        let full = gen_random(3, 4, 1.0, (0.0, 0.5), (1.0, 2.0), 9).unwrap();
        assert_eq!(full.n_edges(), 12);
        let empty = gen_random(3, 4, 0.0, (0.0, 0.5), (1.0, 2.0), 9).unwrap();
        assert_eq!(empty.n_edges(), 0);
        let a = gen_random(5, 7, 0.4, (0.05, 0.3), (0.5, 2.0), 42).unwrap();
        let b = gen_random(5, 7, 0.4, (0.05, 0.3), (0.5, 2.0), 42).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = gen_random(5, 7, 0.4, (0.05, 0.3), (0.5, 2.0), 43).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn cascade_layers_and_probabilities() {
        let inst = gen_cascade(1, 0.1).unwrap();
        // root arrival: eps edge to the root, 2 eps alternative
        let root_arrival = inst.n_online() - 1; // deepest-first ordering, root last
        let mut ps: Vec<f64> =
            inst.neighbors_of_online(root_arrival).iter().map(|&(_, p)| p).collect();
        ps.sort_by(f64::total_cmp);
        assert_eq!(ps, vec![0.1, 0.2]);

        let deep = gen_cascade(3, 0.01).unwrap();
        // layer 3 has 8 displaced arrivals (ids v3_*)
        let layer3 = (0..deep.n_online())
            .filter(|&v| deep.online_id(v).starts_with("v3_"))
            .count();
        assert_eq!(layer3, 8);
        assert!((deep.p_max() - 0.02).abs() < 1e-15);

        assert!(gen_cascade(4, 0.3).is_err());
    }

    #[test]
    fn json_round_trip_is_identity() {
        let inst = gen_random(4, 6, 0.6, (0.013, 0.77), (0.25, 3.5), 77).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        write_instance(&inst, &path).unwrap();
        let back = read_instance(&path).unwrap();
        assert_eq!(inst.to_json(), back.to_json());
        assert_eq!(inst.n_edges(), back.n_edges());
        for v in 0..inst.n_online() {
            assert_eq!(inst.neighbors_of_online(v), back.neighbors_of_online(v));
        }
    }

    #[test]
    fn file_probability_out_of_range_fails_on_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(
            &path,
            r#"{"offline":[{"id":"u","weight":1.0}],"online":["v"],"edges":[{"u":"u","v":"v","p":1.5}]}"#,
        )
        .unwrap();
        match read_instance(&path) {
            Err(InstanceError::Invalid(vs)) => {
                assert!(vs.iter().any(|v| matches!(v, Violation::ProbabilityOutOfRange { .. })));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_field_names_the_problem() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, r#"{"offline":[{"id":"u","weight":"x"}],"online":[],"edges":[]}"#)
            .unwrap();
        match read_instance(&path) {
            Err(InstanceError::Parse(e)) => {
                let msg = e.to_string();
                assert!(msg.contains("weight") || msg.contains("line"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }
}
