//! Oracles shared by the property and acceptance suites: a naive box
//! enumeration of lattice vectors and a brute-force generator of small
//! conic classes.

use resurf_core::conic::{is_conic_class, CurveNode, DivisorGraph, NodeKind};
use resurf_core::lattice::{realize, Lattice, LatticeExpr};
use resurf_core::mwl::Dataset;
use resurf_core::rational::rat;
use resurf_core::Rational;
use std::collections::BTreeMap;

/// All box points |x_i| <= bound bucketed by their exact norm.
pub fn box_norm_buckets(lat: &Lattice, bound: i64) -> BTreeMap<Rational, Vec<Vec<i64>>> {
    let n = lat.rank();
    let mut buckets: BTreeMap<Rational, Vec<Vec<i64>>> = BTreeMap::new();
    let mut x = vec![-bound; n];
    'outer: loop {
        buckets.entry(lat.norm_of(&x)).or_default().push(x.clone());
        for i in 0..n {
            if x[i] < bound {
                x[i] += 1;
                continue 'outer;
            }
            x[i] = -bound;
        }
        break;
    }
    for v in buckets.values_mut() {
        v.sort();
    }
    buckets
}

/// The distinct lattices of rank <= 3 appearing in the dataset: narrow and
/// free lattices of low-rank rows and every realized T block.
pub fn dataset_lattices_rank_le_3(dataset: &Dataset) -> Vec<(String, Lattice)> {
    let mut out: Vec<(String, Lattice)> = Vec::new();
    let mut push = |name: String, lat: Lattice| {
        if out.iter().all(|(_, l)| l.gram() != lat.gram()) {
            out.push((name, lat));
        }
    };
    for case in dataset.cases() {
        if (1..=3).contains(&case.rank) {
            push(
                format!("case {} narrow", case.case_no),
                case.mw_narrow.clone(),
            );
            push(format!("case {} free", case.case_no), case.mw_free.clone());
        }
        for block in &case.t_blocks {
            if block.rank() <= 3 {
                let l = realize(&LatticeExpr::new(vec![block.clone()])).unwrap();
                push(format!("block {block:?}"), l);
            }
        }
    }
    out
}

/// Check vectors_of_norm against the box oracle on every rank <= 3 dataset
/// lattice for all norms up to 12; panics with the offending lattice.
pub fn check_enumeration_against_box_oracle(dataset: &Dataset) {
    let lattices = dataset_lattices_rank_le_3(dataset);
    assert!(lattices.len() >= 15, "the sweep covers a real corpus");
    let twelve = rat(12, 1);
    for (name, lat) in &lattices {
        let buckets = box_norm_buckets(lat, 6);
        let mut norms: Vec<Rational> = buckets.keys().cloned().collect();
        norms.push(rat(1, 5));
        norms.push(rat(11, 7));
        for m in norms {
            if m > twelve {
                continue;
            }
            let brute = buckets.get(&m).cloned().unwrap_or_default();
            let mut fast = lat.vectors_of_norm(&m, Some(6)).unwrap();
            fast.sort();
            assert_eq!(fast, brute, "{name}, norm {m}");
            let unbounded = lat.vectors_of_norm(&m, None).unwrap();
            assert!(unbounded.len() >= fast.len(), "{name}, norm {m}");
        }
    }
}

/// Exhaustive generator: all connected graphs with at most `max_nodes`
/// nodes, multiplicities at most 2 and pairwise intersections at most 1
/// that are conic classes.
pub fn generate_conic_classes(max_nodes: usize) -> Vec<DivisorGraph> {
    let mut out = Vec::new();
    out.push(DivisorGraph::new(vec![CurveNode::new(NodeKind::Star, 1).unwrap()], &[]).unwrap());
    let section_parts: [Vec<CurveNode>; 2] = [
        vec![
            CurveNode::new(NodeKind::Section, 1).unwrap(),
            CurveNode::new(NodeKind::Section, 1).unwrap(),
        ],
        vec![CurveNode::new(NodeKind::Section, 2).unwrap()],
    ];
    for sections in &section_parts {
        let max_comps = max_nodes - sections.len();
        for comp_count in 0..=max_comps {
            for mult_mask in 0..(1u32 << comp_count) {
                let mut nodes = sections.clone();
                for b in 0..comp_count {
                    let mult = if mult_mask & (1 << b) != 0 { 2 } else { 1 };
                    nodes.push(CurveNode::new(NodeKind::Component, mult).unwrap());
                }
                collect_edge_assignments(&nodes, &mut out);
            }
        }
    }
    out.retain(|g| g.is_connected() && is_conic_class(g).is_conic_class);
    out
}

fn collect_edge_assignments(nodes: &[CurveNode], out: &mut Vec<DivisorGraph>) {
    let n = nodes.len();
    let target: Vec<i64> = nodes
        .iter()
        .map(|c| -(c.multiplicity as i64) * c.kind.self_intersection())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();

    fn dfs(
        nodes: &[CurveNode],
        pairs: &[(usize, usize)],
        target: &[i64],
        load: &mut Vec<i64>,
        chosen: &mut Vec<u32>,
        out: &mut Vec<DivisorGraph>,
    ) {
        if chosen.len() == pairs.len() {
            if load.iter().zip(target).all(|(l, t)| l == t) {
                let edges: Vec<(usize, usize, u32)> = pairs
                    .iter()
                    .zip(chosen.iter())
                    .filter(|(_, &e)| e > 0)
                    .map(|(&(i, j), &e)| (i, j, e))
                    .collect();
                out.push(DivisorGraph::new(nodes.to_vec(), &edges).unwrap());
            }
            return;
        }
        let (i, j) = pairs[chosen.len()];
        for e in 0..=1u32 {
            let di = e as i64 * nodes[j].multiplicity as i64;
            let dj = e as i64 * nodes[i].multiplicity as i64;
            if load[i] + di > target[i] || load[j] + dj > target[j] {
                continue;
            }
            load[i] += di;
            load[j] += dj;
            chosen.push(e);
            dfs(nodes, pairs, target, load, chosen, out);
            chosen.pop();
            load[i] -= di;
            load[j] -= dj;
        }
    }

    let mut load = vec![0i64; n];
    let mut chosen: Vec<u32> = Vec::with_capacity(pairs.len());
    dfs(nodes, &pairs, &target, &mut load, &mut chosen, out);
}
