//! Conic-class arithmetic on divisor intersection graphs: classification of
//! conic-bundle fibers into the five types, admissibility against an
//! elliptic fiber configuration, and the RNRF existence predicates.

use crate::error::{Error, Result};
use crate::kodaira::{validate_configuration, FiberConfiguration, FiberType};

/// Kind of an irreducible curve in the support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Smooth irreducible curve of genus 0 with self-intersection 0.
    Star,
    /// (-1)-curve, a section of the elliptic fibration.
    Section,
    /// (-2)-curve, a component of a reducible fiber.
    Component,
}

impl NodeKind {
    pub fn self_intersection(self) -> i64 {
        match self {
            NodeKind::Star => 0,
            NodeKind::Section => -1,
            NodeKind::Component => -2,
        }
    }

    /// Intersection with the anticanonical class.
    pub fn anticanonical(self) -> i64 {
        match self {
            NodeKind::Star => 2,
            NodeKind::Section => 1,
            NodeKind::Component => 0,
        }
    }

    pub fn parse(s: &str) -> Result<NodeKind> {
        match s.to_ascii_lowercase().as_str() {
            "star" => Ok(NodeKind::Star),
            "section" => Ok(NodeKind::Section),
            "component" => Ok(NodeKind::Component),
            _ => Err(Error::domain(format!("unknown node kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveNode {
    pub kind: NodeKind,
    pub multiplicity: u32,
}

impl CurveNode {
    pub fn new(kind: NodeKind, multiplicity: u32) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::domain("multiplicities are positive"));
        }
        Ok(CurveNode { kind, multiplicity })
    }
}

/// Multiplicity-weighted intersection graph of a divisor D = sum n_i C_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorGraph {
    nodes: Vec<CurveNode>,
    /// Symmetric intersection numbers between distinct nodes, row-major.
    edges: Vec<u32>,
}

impl DivisorGraph {
    pub fn new(nodes: Vec<CurveNode>, edge_list: &[(usize, usize, u32)]) -> Result<Self> {
        let n = nodes.len();
        let mut edges = vec![0u32; n * n];
        for &(i, j, m) in edge_list {
            if i >= n || j >= n {
                return Err(Error::domain("edge endpoint out of range"));
            }
            if i == j {
                return Err(Error::domain(
                    "self-intersections are fixed by the node kind",
                ));
            }
            edges[i * n + j] = m;
            edges[j * n + i] = m;
        }
        Ok(DivisorGraph { nodes, edges })
    }

    pub fn nodes(&self) -> &[CurveNode] {
        &self.nodes
    }

    pub fn edge(&self, i: usize, j: usize) -> u32 {
        self.edges[i * self.nodes.len() + j]
    }

    /// D . C_i, computed from multiplicities, self-intersections and edges.
    pub fn dot_with_node(&self, i: usize) -> i64 {
        let n = self.nodes.len();
        let mut total = self.nodes[i].multiplicity as i64 * self.nodes[i].kind.self_intersection();
        for j in 0..n {
            if j != i {
                total += self.nodes[j].multiplicity as i64 * self.edge(i, j) as i64;
            }
        }
        total
    }

    /// Number of neighbours n(C_i).
    pub fn neighbour_count(&self, i: usize) -> usize {
        (0..self.nodes.len())
            .filter(|&j| j != i && self.edge(i, j) > 0)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.nodes.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && j != i && self.edge(i, j) > 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// D . (-K_X) by adjunction weights.
pub fn anticanonical_degree(g: &DivisorGraph) -> i64 {
    g.nodes()
        .iter()
        .map(|n| n.multiplicity as i64 * n.kind.anticanonical())
        .sum()
}

/// Outcome of the conic-class test with a diagnostic for the first
/// violated condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicClassCheck {
    pub is_conic_class: bool,
    pub diagnostic: Option<String>,
}

/// D is a conic class iff D . C = 0 for every node C (which makes D nef
/// with D^2 = 0) and D . (-K) = 2.
pub fn is_conic_class(g: &DivisorGraph) -> ConicClassCheck {
    for i in 0..g.nodes().len() {
        let d = g.dot_with_node(i);
        if d != 0 {
            return ConicClassCheck {
                is_conic_class: false,
                diagnostic: Some(format!("D . C_{i} = {d} (node {i} violates nefness)")),
            };
        }
    }
    let deg = anticanonical_degree(g);
    if deg != 2 {
        return ConicClassCheck {
            is_conic_class: false,
            diagnostic: Some(format!("D . (-K) = {deg}, expected 2")),
        };
    }
    ConicClassCheck {
        is_conic_class: true,
        diagnostic: None,
    }
}

/// The five shapes a conic-bundle fiber can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConicFiberType {
    Type0,
    TypeA2,
    /// n >= 3 nodes in a chain with sections at both ends.
    TypeA(usize),
    TypeD3,
    /// m >= 4 nodes: a doubled section and chain with a two-leaf fork.
    TypeD(usize),
}

impl std::fmt::Display for ConicFiberType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConicFiberType::Type0 => write!(f, "0"),
            ConicFiberType::TypeA2 => write!(f, "A2"),
            ConicFiberType::TypeA(n) => write!(f, "A{n}"),
            ConicFiberType::TypeD3 => write!(f, "D3"),
            ConicFiberType::TypeD(m) => write!(f, "D{m}"),
        }
    }
}

/// Classify a connected conic class into one of the five fiber types.
pub fn classify_conic_fiber(g: &DivisorGraph) -> Result<ConicFiberType> {
    let check = is_conic_class(g);
    if !check.is_conic_class {
        return Err(Error::domain(format!(
            "not a conic class: {}",
            check.diagnostic.unwrap_or_default()
        )));
    }
    if !g.is_connected() {
        return Err(Error::domain("conic-bundle fibers are connected"));
    }
    let nodes = g.nodes();
    let n = nodes.len();
    let count = |kind: NodeKind, mult: u32| {
        nodes
            .iter()
            .filter(|c| c.kind == kind && c.multiplicity == mult)
            .count()
    };
    let stars = nodes.iter().filter(|c| c.kind == NodeKind::Star).count();
    let sections1 = count(NodeKind::Section, 1);
    let sections2 = count(NodeKind::Section, 2);
    let no_pattern = || {
        Error::Classification("connected conic class matches none of the five fiber shapes".into())
    };

    if stars == 1 && n == 1 {
        return Ok(ConicFiberType::Type0);
    }
    if stars > 0 {
        return Err(no_pattern());
    }
    if sections1 == 2 && sections2 == 0 {
        // two sections: either meeting directly (A2) or joined by a chain
        // of multiplicity-1 components (A_n)
        if nodes.iter().any(|c| c.multiplicity != 1) {
            return Err(no_pattern());
        }
        let ends: Vec<usize> = (0..n)
            .filter(|&i| nodes[i].kind == NodeKind::Section)
            .collect();
        if n == 2 {
            if g.edge(ends[0], ends[1]) == 1 {
                return Ok(ConicFiberType::TypeA2);
            }
            return Err(no_pattern());
        }
        if is_chain(g, &ends)? {
            return Ok(ConicFiberType::TypeA(n));
        }
        return Err(no_pattern());
    }
    if sections2 == 1 && sections1 == 0 {
        let section = (0..n)
            .find(|&i| nodes[i].kind == NodeKind::Section)
            .expect("present");
        if n == 3
            && count(NodeKind::Component, 1) == 2
            && (0..n).all(|i| i == section || g.edge(section, i) == 1)
        {
            // the two components must be disjoint from each other
            let comps: Vec<usize> = (0..n).filter(|&i| i != section).collect();
            if g.edge(comps[0], comps[1]) == 0 {
                return Ok(ConicFiberType::TypeD3);
            }
            return Err(no_pattern());
        }
        if is_d_shape(g, section)? {
            return Ok(ConicFiberType::TypeD(n));
        }
        return Err(no_pattern());
    }
    Err(no_pattern())
}

/// Chain with the two given ends, all adjacent intersections 1.
fn is_chain(g: &DivisorGraph, ends: &[usize]) -> Result<bool> {
    let n = g.nodes().len();
    for i in 0..n {
        let deg = g.neighbour_count(i);
        let want = if ends.contains(&i) { 1 } else { 2 };
        if deg != want {
            return Ok(false);
        }
        for j in 0..n {
            if g.edge(i, j) > 1 {
                return Ok(false);
            }
        }
    }
    // connectivity was already established, so the degree sequence forces
    // a single path between the two ends
    Ok(true)
}

/// 2P + 2C_1 + ... + 2C_l + (C_{l+1} + C_{l+2}): the doubled section starts
/// a multiplicity-2 chain whose last member meets two disjoint
/// multiplicity-1 leaves.
fn is_d_shape(g: &DivisorGraph, section: usize) -> Result<bool> {
    let nodes = g.nodes();
    let n = nodes.len();
    if n < 4 {
        return Ok(false);
    }
    let leaves: Vec<usize> = (0..n)
        .filter(|&i| nodes[i].kind == NodeKind::Component && nodes[i].multiplicity == 1)
        .collect();
    let doubled: Vec<usize> = (0..n)
        .filter(|&i| {
            i != section && nodes[i].kind == NodeKind::Component && nodes[i].multiplicity == 2
        })
        .collect();
    if leaves.len() != 2 || doubled.len() + leaves.len() + 1 != n {
        return Ok(false);
    }
    if (0..n).any(|i| (0..n).any(|j| g.edge(i, j) > 1)) {
        return Ok(false);
    }
    // walk the multiplicity-2 chain from the section
    let mut prev = section;
    let mut cur = match doubled.iter().find(|&&c| g.edge(section, c) == 1) {
        Some(&c) => c,
        None => return Ok(false),
    };
    if g.neighbour_count(section) != 1 {
        return Ok(false);
    }
    let mut chain_len = 1;
    loop {
        let next: Vec<usize> = (0..n)
            .filter(|&j| j != prev && j != cur && g.edge(cur, j) == 1)
            .collect();
        if next.len() == 2 && next.iter().all(|j| leaves.contains(j)) {
            // fork node: the two leaves must be mutually disjoint extremities
            let ok = g.edge(next[0], next[1]) == 0
                && g.neighbour_count(next[0]) == 1
                && g.neighbour_count(next[1]) == 1
                && chain_len == doubled.len();
            return Ok(ok);
        }
        if next.len() != 1 || !doubled.contains(&next[0]) {
            return Ok(false);
        }
        prev = cur;
        cur = next[0];
        chain_len += 1;
    }
}

/// Reference graphs for the five types.
pub fn template(t: ConicFiberType) -> Result<DivisorGraph> {
    let node = |kind, m| CurveNode::new(kind, m).expect("positive multiplicity");
    match t {
        ConicFiberType::Type0 => DivisorGraph::new(vec![node(NodeKind::Star, 1)], &[]),
        ConicFiberType::TypeA2 => DivisorGraph::new(
            vec![node(NodeKind::Section, 1), node(NodeKind::Section, 1)],
            &[(0, 1, 1)],
        ),
        ConicFiberType::TypeA(n) => {
            if n < 3 {
                return Err(Error::domain("type A_n needs n >= 3"));
            }
            let mut nodes = vec![node(NodeKind::Section, 1)];
            nodes.extend(std::iter::repeat_n(node(NodeKind::Component, 1), n - 2));
            nodes.push(node(NodeKind::Section, 1));
            let edges: Vec<(usize, usize, u32)> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
            DivisorGraph::new(nodes, &edges)
        }
        ConicFiberType::TypeD3 => DivisorGraph::new(
            vec![
                node(NodeKind::Component, 1),
                node(NodeKind::Section, 2),
                node(NodeKind::Component, 1),
            ],
            &[(0, 1, 1), (1, 2, 1)],
        ),
        ConicFiberType::TypeD(m) => {
            if m < 4 {
                return Err(Error::domain("type D_m needs m >= 4"));
            }
            // section, chain of m-3 doubled components, two leaves
            let mut nodes = vec![node(NodeKind::Section, 2)];
            nodes.extend(std::iter::repeat_n(node(NodeKind::Component, 2), m - 3));
            nodes.push(node(NodeKind::Component, 1));
            nodes.push(node(NodeKind::Component, 1));
            let mut edges: Vec<(usize, usize, u32)> = (0..m - 3).map(|i| (i, i + 1, 1)).collect();
            edges.push((m - 3, m - 2, 1));
            edges.push((m - 3, m - 1, 1));
            DivisorGraph::new(nodes, &edges)
        }
    }
}

/// Which conic-bundle fiber types the elliptic fiber configuration admits.
/// Type 0 is always admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissibleTypes {
    pub a2: bool,
    pub a_n: bool,
    pub d3: bool,
    pub d_m: bool,
}

pub fn admissible_types(c: &FiberConfiguration) -> Result<AdmissibleTypes> {
    let report = validate_configuration(c);
    if !report.passes {
        return Err(Error::domain(format!(
            "configuration has Euler number {}, not 12",
            report.euler_sum
        )));
    }
    let rank = c
        .generic_rank
        .ok_or_else(|| Error::domain("admissibility needs the generic rank"))?;
    Ok(AdmissibleTypes {
        a2: rank > 0 && !report.has_iii_star,
        a_n: c
            .fibers
            .iter()
            .any(|f| f.is_reducible() && *f != FiberType::IIStar),
        d3: report.reducible_count >= 2,
        d_m: report.has_nonreduced || report.has_i_n_ge_4,
    })
}

/// Extra geometric data (beyond the fiber configuration) consumed by the
/// RNRF existence conditions.
#[derive(Debug, Clone, Copy, Default)]
pub struct RnrfExtras {
    pub has_reducible_reduced_fiber: bool,
    pub has_nontrivial_section: bool,
    pub section_hits_near_component: bool,
    pub has_conjugate_disjoint_sections: bool,
    pub has_2torsion_section: bool,
}

/// Whether one of the six condition bundles guarantees a conic bundle
/// ramified at the nonreduced fiber.
pub fn rnrf_available(c: &FiberConfiguration, extras: &RnrfExtras) -> Result<bool> {
    let report = validate_configuration(c);
    if !report.passes {
        return Err(Error::domain(format!(
            "configuration has Euler number {}, not 12",
            report.euler_sum
        )));
    }
    let has = |f: FiberType| c.fibers.contains(&f);
    // 1. II*, III* or I*_n with n in {2, 3, 4}
    if has(FiberType::IIStar)
        || has(FiberType::IIIStar)
        || (2..=4).any(|n| has(FiberType::IStar(n)))
    {
        return Ok(true);
    }
    // 2. IV* or I*_m (m in {0, 1}) together with a reducible reduced fiber
    if (has(FiberType::IVStar) || has(FiberType::IStar(0)) || has(FiberType::IStar(1)))
        && extras.has_reducible_reduced_fiber
    {
        return Ok(true);
    }
    // 3. IV* and a nontrivial section over the ground field
    if has(FiberType::IVStar) && extras.has_nontrivial_section {
        return Ok(true);
    }
    // 4. I*_1 and a nontrivial section meeting the near component
    if has(FiberType::IStar(1)) && extras.section_hits_near_component {
        return Ok(true);
    }
    // 5. I*_1 and two non-intersecting conjugate sections
    if has(FiberType::IStar(1)) && extras.has_conjugate_disjoint_sections {
        return Ok(true);
    }
    // 6. two I*_0 fibers and a nontrivial 2-torsion section
    if c.fibers
        .iter()
        .filter(|f| **f == FiberType::IStar(0))
        .count()
        == 2
        && extras.has_2torsion_section
    {
        return Ok(true);
    }
    Ok(false)
}

/// The printed neighbour bound n(E_i) <= -n_i^2 E_i^2 for every node.
pub fn neighbour_bound_check(g: &DivisorGraph) -> bool {
    (0..g.nodes().len()).all(|i| {
        let node = &g.nodes()[i];
        let bound = -(node.multiplicity as i64).pow(2) * node.kind.self_intersection();
        (g.neighbour_count(i) as i64) <= bound
    })
}

/// The sharper variant n(E_i) <= -n_i E_i^2 from the proof; kept separate
/// and non-normative.
pub fn neighbour_bound_sharp(g: &DivisorGraph) -> bool {
    (0..g.nodes().len()).all(|i| {
        let node = &g.nodes()[i];
        let bound = -(node.multiplicity as i64) * node.kind.self_intersection();
        (g.neighbour_count(i) as i64) <= bound
    })
}

/// Parse `{"nodes":[{"kind":"section","mult":2},...],"edges":[[0,1,1],...]}`.
pub fn graph_from_json(value: &serde_json::Value) -> Result<DivisorGraph> {
    let nodes_json = value
        .get("nodes")
        .and_then(|n| n.as_array())
        .ok_or_else(|| Error::domain("graph JSON needs a \"nodes\" list"))?;
    let mut nodes = Vec::new();
    for n in nodes_json {
        let kind = NodeKind::parse(
            n.get("kind")
                .and_then(|k| k.as_str())
                .ok_or_else(|| Error::domain("node needs a \"kind\""))?,
        )?;
        let mult = n.get("mult").and_then(|m| m.as_u64()).unwrap_or(1) as u32;
        nodes.push(CurveNode::new(kind, mult)?);
    }
    let mut edges = Vec::new();
    if let Some(edge_json) = value.get("edges").and_then(|e| e.as_array()) {
        for e in edge_json {
            let triple = e
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| Error::domain("edges are [i, j, m] triples"))?;
            let get = |k: usize| {
                triple[k]
                    .as_u64()
                    .ok_or_else(|| Error::domain("edge entries are non-negative integers"))
            };
            edges.push((get(0)? as usize, get(1)? as usize, get(2)? as u32));
        }
    }
    DivisorGraph::new(nodes, &edges)
}
