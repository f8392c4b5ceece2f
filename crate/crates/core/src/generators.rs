//! The two network families: S_m* (co-finite characteristic sets) and G_1
//! (solvable over every field except GF(2)).
//!
//! Vertex names are 1-based (`s1`, `u1`, `v1`, `t1`, ...). Edge order is
//! fixed so that edge indices, and therefore serialized codes, are stable:
//!
//! * S_m*: for each i in 1..m, the quadruple (s_i,t_i), (u_i,v_i), (v_i,t_i),
//!   (v_i,t_m); then the cross edges (s_i,u_j), i≠j, in (i,j) order.
//! * G_1: (u_i,v_i) for i = 1..3; then (s_i,u_j), i≠j, in (i,j) order; then
//!   (v_i,t_j), i≠j, in (i,j) order.

use thiserror::Error;

use crate::network::{NetworkError, SumNetwork};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("S_m* needs m >= 3, got {0}")]
    InvalidParameter(usize),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Vertex count of S_m*.
pub fn smstar_vertex_count(m: usize) -> usize {
    3 * (m - 1) + m
}

/// Edge count of S_m*.
pub fn smstar_edge_count(m: usize) -> usize {
    4 * (m - 1) + (m - 1) * (m - 2)
}

pub fn gen_smstar(m: usize) -> Result<SumNetwork, GeneratorError> {
    if m < 3 {
        return Err(GeneratorError::InvalidParameter(m));
    }
    let k = m - 1;
    let s = |i: usize| format!("s{i}");
    let u = |i: usize| format!("u{i}");
    let v = |i: usize| format!("v{i}");
    let t = |i: usize| format!("t{i}");

    let mut vertices = Vec::with_capacity(smstar_vertex_count(m));
    vertices.extend((1..=k).map(s));
    vertices.extend((1..=k).map(u));
    vertices.extend((1..=k).map(v));
    vertices.extend((1..=m).map(t));

    let mut edges = Vec::with_capacity(smstar_edge_count(m));
    for i in 1..=k {
        edges.push((s(i), t(i)));
        edges.push((u(i), v(i)));
        edges.push((v(i), t(i)));
        edges.push((v(i), t(m)));
    }
    for i in 1..=k {
        for j in (1..=k).filter(|&j| j != i) {
            edges.push((s(i), u(j)));
        }
    }
    let sources: Vec<String> = (1..=k).map(s).collect();
    let terminals: Vec<String> = (1..=m).map(t).collect();
    Ok(SumNetwork::new(&vertices, &edges, &sources, &terminals)?)
}

pub fn gen_g1() -> SumNetwork {
    let mut vertices = Vec::with_capacity(12);
    for prefix in ["s", "u", "v", "t"] {
        vertices.extend((1..=3).map(|i| format!("{prefix}{i}")));
    }
    let mut edges: Vec<(String, String)> = (1..=3)
        .map(|i| (format!("u{i}"), format!("v{i}")))
        .collect();
    let pairs: Vec<(usize, usize)> = (1..=3)
        .flat_map(|i| (1..=3).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    edges.extend(
        pairs
            .iter()
            .map(|(i, j)| (format!("s{i}"), format!("u{j}"))),
    );
    edges.extend(
        pairs
            .iter()
            .map(|(i, j)| (format!("v{i}"), format!("t{j}"))),
    );
    let sources: Vec<String> = (1..=3).map(|i| format!("s{i}")).collect();
    let terminals: Vec<String> = (1..=3).map(|i| format!("t{i}")).collect();
    SumNetwork::new(&vertices, &edges, &sources, &terminals).expect("G_1 is a valid sum-network")
}

/// Which known family a network is, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    SmStar(usize),
    G1,
}

impl Family {
    pub fn name(self) -> String {
        match self {
            Family::SmStar(m) => format!("S_{m}*"),
            Family::G1 => "G_1".to_string(),
        }
    }
}

/// Recognizes generator output by structural equality (names, edge order,
/// endpoint lists).
pub fn identify(net: &SumNetwork) -> Option<Family> {
    if *net == gen_g1() {
        return Some(Family::G1);
    }
    let m = net.sources().len() + 1;
    match gen_smstar(m) {
        Ok(candidate) if candidate == *net => Some(Family::SmStar(m)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smstar_sizes() {
        let n3 = gen_smstar(3).unwrap();
        assert_eq!((n3.vertex_count(), n3.edge_count()), (9, 10));
        let n4 = gen_smstar(4).unwrap();
        assert_eq!((n4.vertex_count(), n4.edge_count()), (13, 18));
        assert_eq!(
            gen_smstar(2).unwrap_err(),
            GeneratorError::InvalidParameter(2)
        );
    }

    #[test]
    fn smstar_edge_list_matches_definition() {
        for m in 3..=8 {
            let net = gen_smstar(m).unwrap();
            for i in 1..m {
                assert!(net.find_edge(&format!("s{i}"), &format!("u{i}")).is_none());
                for j in (1..m).filter(|&j| j != i) {
                    assert!(net.find_edge(&format!("s{i}"), &format!("u{j}")).is_some());
                }
                for (a, b) in [
                    (format!("s{i}"), format!("t{i}")),
                    (format!("u{i}"), format!("v{i}")),
                    (format!("v{i}"), format!("t{i}")),
                    (format!("v{i}"), format!("t{m}")),
                ] {
                    assert!(net.find_edge(&a, &b).is_some(), "{a}->{b}");
                }
            }
            // Explicit count cross-checks the closed form.
            let explicit = 4 * (m - 1)
                + (1..m)
                    .flat_map(|i| (1..m).map(move |j| (i, j)))
                    .filter(|(i, j)| i != j)
                    .count();
            assert_eq!(net.edge_count(), explicit);
        }
    }

    #[test]
    fn g1_shape() {
        let g = gen_g1();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.edge_count(), 15);
        for &s in g.sources() {
            for &e in g.out_edges(s) {
                assert!(g.name(g.edge(e).head).starts_with('u'));
            }
        }
        for i in 1..=3 {
            assert!(g.find_edge(&format!("s{i}"), &format!("u{i}")).is_none());
            assert!(g.find_edge(&format!("v{i}"), &format!("t{i}")).is_none());
        }
        assert!(g.all_pairs_connected().is_connected());
    }

    #[test]
    fn identify_families() {
        assert_eq!(identify(&gen_g1()), Some(Family::G1));
        assert_eq!(identify(&gen_smstar(5).unwrap()), Some(Family::SmStar(5)));
        assert_eq!(identify(&gen_smstar(5).unwrap().reverse()), None);
    }
}
