//! Source-cut to terminal-cut transfer matrices, path gains, and the code
//! reversal that carries a solution of a network to its reverse.

use std::fmt::Write as _;

use thiserror::Error;

use crate::coding::{composite_maps, CodeError, LinearCode, SlotKey};
use crate::galois::{FieldError, FiniteField, Matrix};
use crate::network::{NetPath, NetworkError, SumNetwork};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid path: {0}")]
    PathInvalid(String),
    #[error("cannot reverse code: {0}")]
    ReversalUnsupported(String),
}

/// `m × n` grid of N×N blocks; block `(i, j)` is the map from `X_i` to `R_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferMatrix {
    sources: usize,
    terminals: usize,
    block_len: usize,
    blocks: Vec<Matrix>,
}

impl TransferMatrix {
    pub fn sources(&self) -> usize {
        self.sources
    }

    pub fn terminals(&self) -> usize {
        self.terminals
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn block(&self, i: usize, j: usize) -> &Matrix {
        &self.blocks[i * self.terminals + j]
    }

    pub fn is_all_identity(&self) -> bool {
        self.blocks.iter().all(Matrix::is_identity)
    }

    /// Transpose of the full `mN × nN` matrix: blocks swap positions and each
    /// block is transposed.
    pub fn transpose(&self) -> TransferMatrix {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for j in 0..self.terminals {
            for i in 0..self.sources {
                blocks.push(self.block(i, j).transpose());
            }
        }
        TransferMatrix {
            sources: self.terminals,
            terminals: self.sources,
            block_len: self.block_len,
            blocks,
        }
    }

    /// Block positions swapped, block contents untouched.
    pub fn swap_blocks(&self) -> TransferMatrix {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for j in 0..self.terminals {
            for i in 0..self.sources {
                blocks.push(self.block(i, j).clone());
            }
        }
        TransferMatrix {
            sources: self.terminals,
            terminals: self.sources,
            block_len: self.block_len,
            blocks,
        }
    }

    /// Block grid as text, one source per line, entries in canonical index
    /// form.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for i in 0..self.sources {
            let row: Vec<String> = (0..self.terminals)
                .map(|j| {
                    let b = self.block(i, j);
                    let rows: Vec<String> = b
                        .to_rows()
                        .iter()
                        .map(|r| {
                            r.iter()
                                .map(|e| b.field().render(*e))
                                .collect::<Vec<_>>()
                                .join(" ")
                        })
                        .collect();
                    format!("({})", rows.join("; "))
                })
                .collect();
            let _ = writeln!(s, "X{}: {}", i + 1, row.join("  "));
        }
        s
    }
}

pub fn transfer_matrix(
    net: &SumNetwork,
    code: &LinearCode,
) -> Result<TransferMatrix, TransferError> {
    let maps = composite_maps(net, code)?;
    let (m, n) = (net.sources().len(), net.terminals().len());
    let mut blocks = Vec::with_capacity(m * n);
    for i in 0..m {
        for row in &maps {
            blocks.push(row[i].clone());
        }
    }
    Ok(TransferMatrix {
        sources: m,
        terminals: n,
        block_len: code.block_len(),
        blocks,
    })
}

/// Ordered product of the local coefficients along `path`. Later
/// coefficients multiply on the left; a path with no interior vertex has the
/// identity as its gain.
pub fn path_gain(
    net: &SumNetwork,
    path: &NetPath,
    code: &LinearCode,
) -> Result<Matrix, TransferError> {
    if path.vertices.len() != path.edges.len() + 1 {
        return Err(TransferError::PathInvalid(format!(
            "{} vertices for {} edges",
            path.vertices.len(),
            path.edges.len()
        )));
    }
    for (k, &e) in path.edges.iter().enumerate() {
        if e >= net.edge_count() {
            return Err(TransferError::PathInvalid(format!("no edge {e}")));
        }
        let edge = net.edge(e);
        if edge.tail != path.vertices[k] || edge.head != path.vertices[k + 1] {
            return Err(TransferError::PathInvalid(format!(
                "edge {e} does not join {} to {}",
                net.name(path.vertices[k]),
                net.name(path.vertices[k + 1])
            )));
        }
    }
    let mut gain = Matrix::identity(code.field(), code.block_len());
    for pair in path.edges.windows(2) {
        let v = net.edge(pair[0]).head;
        if net.source_index(v).is_some() {
            return Err(TransferError::PathInvalid(format!(
                "interior vertex {} is a source",
                net.name(v)
            )));
        }
        let a = code.coefficient(SlotKey::Local {
            input: pair[0],
            output: pair[1],
        });
        gain = a.mul(&gain)?;
    }
    Ok(gain)
}

/// Transfer matrix as a sum over paths of decode · gain · source
/// coefficient. Paths running through another source are skipped, since a
/// source's out-edges only carry its own symbol.
pub fn transfer_via_paths(
    net: &SumNetwork,
    code: &LinearCode,
    path_limit: usize,
) -> Result<TransferMatrix, TransferError> {
    code.check(net)?;
    let field: &FiniteField = code.field();
    let n_len = code.block_len();
    let (m, n) = (net.sources().len(), net.terminals().len());
    let mut blocks = Vec::with_capacity(m * n);
    for (i, &s) in net.sources().iter().enumerate() {
        for (j, &t) in net.terminals().iter().enumerate() {
            let mut block = Matrix::zeros(field, n_len, n_len);
            for path in net.enumerate_paths(s, t, path_limit)? {
                if path.vertices[1..path.vertices.len() - 1]
                    .iter()
                    .any(|&v| net.source_index(v).is_some())
                {
                    continue;
                }
                let first = path.edges[0];
                let last = *path.edges.last().expect("source and terminal differ");
                let src = code.coefficient(SlotKey::Source {
                    source: i,
                    edge: first,
                });
                let dec = code.coefficient(SlotKey::Decode {
                    terminal: j,
                    edge: last,
                });
                let term = dec.mul(&path_gain(net, &path, code)?)?.mul(&src)?;
                block = block.add(&term)?;
            }
            blocks.push(block);
        }
    }
    Ok(TransferMatrix {
        sources: m,
        terminals: n,
        block_len: n_len,
        blocks,
    })
}

/// Code for `net.reverse()` that reuses every coefficient on the reversed
/// adjacency: local `(e, e')` becomes `(ẽ', ẽ)`, decoders become source
/// coefficients and vice versa. Each matrix is transposed, so every
/// reversed path's gain is the transpose of the forward gain and the reverse
/// transfer matrix is exactly the transpose of the forward one. For N = 1
/// this is plain coefficient reuse.
///
/// Sources must have no in-edges and terminals no out-edges; otherwise the
/// reversed network has slots with no forward counterpart.
pub fn reverse_code(net: &SumNetwork, code: &LinearCode) -> Result<LinearCode, TransferError> {
    code.check(net)?;
    if !net.has_clean_endpoints() {
        return Err(TransferError::ReversalUnsupported(
            "a source has incoming edges or a terminal has outgoing edges".into(),
        ));
    }
    let mut rev = LinearCode::new(code.field(), code.block_len())?;
    for (key, m) in code.iter() {
        let key = match *key {
            SlotKey::Source { source, edge } => SlotKey::Decode {
                terminal: source,
                edge,
            },
            SlotKey::Local { input, output } => SlotKey::Local {
                input: output,
                output: input,
            },
            SlotKey::Decode { terminal, edge } => SlotKey::Source {
                source: terminal,
                edge,
            },
        };
        rev.set(key, m.transpose());
    }
    Ok(rev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::Elem;
    use crate::generators::gen_g1;

    #[test]
    fn zero_code_has_zero_blocks() {
        let net = gen_g1();
        let f = FiniteField::new(3, 1).unwrap();
        let code = LinearCode::new(&f, 2).unwrap();
        let t = transfer_matrix(&net, &code).unwrap();
        assert_eq!((t.sources(), t.terminals(), t.block_len()), (3, 3, 2));
        for i in 0..3 {
            for j in 0..3 {
                assert!(t.block(i, j).is_zero());
            }
        }
    }

    #[test]
    fn direct_edge_has_identity_gain() {
        let net = SumNetwork::new(&["s", "t"], &[("s", "t")], &["s"], &["t"]).unwrap();
        let f = FiniteField::new(2, 1).unwrap();
        let code = LinearCode::new(&f, 3).unwrap();
        let path = net.enumerate_paths(0, 1, 10).unwrap().remove(0);
        assert!(path_gain(&net, &path, &code).unwrap().is_identity());
    }

    #[test]
    fn invalid_paths() {
        let net = gen_g1();
        let f = FiniteField::new(2, 1).unwrap();
        let code = LinearCode::new(&f, 1).unwrap();
        let bogus = NetPath {
            vertices: vec![0, 1],
            edges: vec![0],
        };
        assert!(matches!(
            path_gain(&net, &bogus, &code),
            Err(TransferError::PathInvalid(_))
        ));
        let short = NetPath {
            vertices: vec![0],
            edges: vec![0],
        };
        assert!(matches!(
            path_gain(&net, &short, &code),
            Err(TransferError::PathInvalid(_))
        ));
    }

    #[test]
    fn paths_through_sources_are_rejected() {
        // s1 -> s2 -> t: the hop through s2 has no local coefficient.
        let net = SumNetwork::new(
            &["s1", "s2", "t"],
            &[("s1", "s2"), ("s2", "t"), ("s1", "t")],
            &["s1", "s2"],
            &["t"],
        )
        .unwrap();
        let f = FiniteField::new(2, 1).unwrap();
        let code = LinearCode::random(&net, &f, 1, &mut rand::thread_rng()).unwrap();
        let s1 = net.vertex("s1").unwrap();
        let t = net.vertex("t").unwrap();
        let paths = net.enumerate_paths(s1, t, 10).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(matches!(
            path_gain(&net, &paths[0], &code),
            Err(TransferError::PathInvalid(_))
        ));
        assert_eq!(
            transfer_via_paths(&net, &code, 10).unwrap(),
            transfer_matrix(&net, &code).unwrap()
        );
        assert!(matches!(
            reverse_code(&net, &code),
            Err(TransferError::ReversalUnsupported(_))
        ));
    }

    #[test]
    fn transpose_and_swap_agree_for_scalars() {
        let net = gen_g1();
        let f = FiniteField::new(5, 1).unwrap();
        let code = LinearCode::random(&net, &f, 1, &mut rand::thread_rng()).unwrap();
        let t = transfer_matrix(&net, &code).unwrap();
        assert_eq!(t.transpose(), t.swap_blocks());
        assert_eq!(t.transpose().transpose(), t);
    }

    #[test]
    fn render_grid() {
        let net = SumNetwork::new(&["s", "t"], &[("s", "t")], &["s"], &["t"]).unwrap();
        let f = FiniteField::new(2, 1).unwrap();
        let mut code = LinearCode::new(&f, 1).unwrap();
        code.set_scalar(SlotKey::Source { source: 0, edge: 0 }, Elem::ONE)
            .set_scalar(
                SlotKey::Decode {
                    terminal: 0,
                    edge: 0,
                },
                Elem::ONE,
            );
        assert_eq!(
            transfer_matrix(&net, &code).unwrap().render(),
            "X1: ([1])\n"
        );
    }
}
