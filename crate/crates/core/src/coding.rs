//! Scalar and vector linear network codes.
//!
//! Messages are length-N column vectors and every coefficient is an N×N
//! matrix acting on the left. A code assigns a matrix to each *slot*:
//!
//! * `Source { source, edge }`: edge leaving source `source` carries
//!   `M · X_source`.
//! * `Local { input, output }`: at a non-source vertex, `output` carries
//!   `Σ M · Y_input` over its in-edges.
//! * `Decode { terminal, edge }`: terminal recovers `Σ M · Y_edge`.
//!
//! Missing slots are the zero matrix.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::galois::{Elem, FieldError, FiniteField, Matrix};
use crate::network::{EdgeId, SumNetwork, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("slot {0} does not exist in this network")]
    MissingNetworkBinding(String),
    #[error("coefficient for slot {slot} is {got:?}, expected {expected}x{expected}")]
    DimensionMismatch {
        slot: String,
        got: (usize, usize),
        expected: usize,
    },
    #[error("expected {expected} input vectors of length {block_len}, got {got:?}")]
    InputShape {
        expected: usize,
        block_len: usize,
        got: Vec<usize>,
    },
    #[error("assignment has {got} matrices, the network has {expected} slots")]
    LengthMismatch { expected: usize, got: usize },
    #[error("block length must be at least 1")]
    ZeroBlockLength,
    #[error("invalid code JSON: {0}")]
    Parse(String),
}

/// A coefficient position. The derived ordering (sources, then local pairs,
/// then decoders, each by index) is the canonical slot order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SlotKey {
    Source { source: usize, edge: EdgeId },
    Local { input: EdgeId, output: EdgeId },
    Decode { terminal: usize, edge: EdgeId },
}

impl std::fmt::Display for SlotKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SlotKey::Source { source, edge } => write!(f, "source({source}, e{edge})"),
            SlotKey::Local { input, output } => write!(f, "local(e{input}, e{output})"),
            SlotKey::Decode { terminal, edge } => write!(f, "decode({terminal}, e{edge})"),
        }
    }
}

/// All coefficient slots of `net`, in canonical order.
pub fn slots(net: &SumNetwork) -> Vec<SlotKey> {
    let mut out = Vec::new();
    for (j, &s) in net.sources().iter().enumerate() {
        for &e in net.out_edges(s) {
            out.push(SlotKey::Source { source: j, edge: e });
        }
    }
    for v in 0..net.vertex_count() {
        if net.source_index(v).is_some() {
            continue;
        }
        for &input in net.in_edges(v) {
            for &output in net.out_edges(v) {
                out.push(SlotKey::Local { input, output });
            }
        }
    }
    for (i, &t) in net.terminals().iter().enumerate() {
        for &e in net.in_edges(t) {
            out.push(SlotKey::Decode {
                terminal: i,
                edge: e,
            });
        }
    }
    out.sort();
    out
}

fn slot_exists(net: &SumNetwork, key: SlotKey) -> bool {
    let ne = net.edge_count();
    match key {
        SlotKey::Source { source, edge } => {
            source < net.sources().len()
                && edge < ne
                && net.edge(edge).tail == net.sources()[source]
        }
        SlotKey::Local { input, output } => {
            input < ne
                && output < ne
                && net.edge(input).head == net.edge(output).tail
                && net.source_index(net.edge(output).tail).is_none()
        }
        SlotKey::Decode { terminal, edge } => {
            terminal < net.terminals().len()
                && edge < ne
                && net.edge(edge).head == net.terminals()[terminal]
        }
    }
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    field: FiniteField,
    block_len: usize,
    coeffs: BTreeMap<SlotKey, Matrix>,
}

/// Codes are equal when they agree on every slot, treating absent as zero.
impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        let nonzero = |c: &'_ LinearCode| {
            c.coeffs
                .iter()
                .filter(|(_, m)| !m.is_zero())
                .map(|(k, m)| (*k, m.clone()))
                .collect::<Vec<_>>()
        };
        self.field == other.field
            && self.block_len == other.block_len
            && nonzero(self) == nonzero(other)
    }
}

impl Eq for LinearCode {}

impl LinearCode {
    /// The all-zero code.
    pub fn new(field: &FiniteField, block_len: usize) -> Result<Self, CodeError> {
        if block_len == 0 {
            return Err(CodeError::ZeroBlockLength);
        }
        Ok(LinearCode {
            field: field.clone(),
            block_len,
            coeffs: BTreeMap::new(),
        })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn get(&self, key: SlotKey) -> Option<&Matrix> {
        self.coeffs.get(&key)
    }

    /// Coefficient at `key`, materializing zero for absent slots.
    pub fn coefficient(&self, key: SlotKey) -> Matrix {
        self.coeffs
            .get(&key)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(&self.field, self.block_len, self.block_len))
    }

    pub fn set(&mut self, key: SlotKey, m: Matrix) -> &mut Self {
        self.coeffs.insert(key, m);
        self
    }

    /// Sets a scalar coefficient `a`, stored as `a·I`.
    pub fn set_scalar(&mut self, key: SlotKey, a: Elem) -> &mut Self {
        let m = Matrix::scalar(&self.field, self.block_len, a);
        self.set(key, m)
    }

    pub fn remove(&mut self, key: SlotKey) -> Option<Matrix> {
        self.coeffs.remove(&key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SlotKey, &Matrix)> {
        self.coeffs.iter()
    }

    /// Every slot of `net` set to a uniformly random matrix.
    pub fn random<R: Rng + ?Sized>(
        net: &SumNetwork,
        field: &FiniteField,
        block_len: usize,
        rng: &mut R,
    ) -> Result<Self, CodeError> {
        let mut code = Self::new(field, block_len)?;
        let q = field.order();
        for key in slots(net) {
            let rows = (0..block_len)
                .map(|_| {
                    (0..block_len)
                        .map(|_| field.elem(rng.gen_range(0..q)).expect("in range"))
                        .collect()
                })
                .collect();
            code.set(key, Matrix::from_rows(field, rows)?);
        }
        Ok(code)
    }

    /// Checks that every key is a slot of `net` and every coefficient is an
    /// N×N matrix over this code's field.
    pub fn check(&self, net: &SumNetwork) -> Result<(), CodeError> {
        for (key, m) in &self.coeffs {
            if !slot_exists(net, *key) {
                return Err(CodeError::MissingNetworkBinding(key.to_string()));
            }
            if m.field() != &self.field {
                return Err(FieldError::FieldMismatch(
                    self.field.to_string(),
                    m.field().to_string(),
                )
                .into());
            }
            if m.dims() != (self.block_len, self.block_len) {
                return Err(CodeError::DimensionMismatch {
                    slot: key.to_string(),
                    got: m.dims(),
                    expected: self.block_len,
                });
            }
        }
        Ok(())
    }

    /// Coefficients of `net`'s slots in canonical order, zero where absent.
    pub fn to_assignment(&self, net: &SumNetwork) -> Vec<Matrix> {
        slots(net)
            .into_iter()
            .map(|k| self.coefficient(k))
            .collect()
    }

    /// Inverse of [`LinearCode::to_assignment`].
    pub fn from_assignment(
        net: &SumNetwork,
        field: &FiniteField,
        block_len: usize,
        assignment: Vec<Matrix>,
    ) -> Result<Self, CodeError> {
        let keys = slots(net);
        if keys.len() != assignment.len() {
            return Err(CodeError::LengthMismatch {
                expected: keys.len(),
                got: assignment.len(),
            });
        }
        let mut code = Self::new(field, block_len)?;
        code.coeffs = keys.into_iter().zip(assignment).collect();
        code.check(net)?;
        Ok(code)
    }

    pub fn to_json(&self) -> CodeJson {
        let render = |m: &Matrix| -> Vec<Vec<Vec<u32>>> {
            m.to_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|e| self.field.coeffs(e)).collect())
                .collect()
        };
        let mut json = CodeJson {
            field: self.field.spec(),
            block_len: self.block_len,
            source: Vec::new(),
            local: Vec::new(),
            decode: Vec::new(),
        };
        for (key, m) in self.coeffs.iter().filter(|(_, m)| !m.is_zero()) {
            let matrix = render(m);
            match *key {
                SlotKey::Source { source, edge } => json.source.push(SourceEntry {
                    source,
                    edge,
                    matrix,
                }),
                SlotKey::Local { input, output } => json.local.push(LocalEntry {
                    input,
                    output,
                    matrix,
                }),
                SlotKey::Decode { terminal, edge } => json.decode.push(DecodeEntry {
                    terminal,
                    edge,
                    matrix,
                }),
            }
        }
        json
    }

    pub fn from_json(json: &CodeJson) -> Result<Self, CodeError> {
        let field = FiniteField::from_spec(&json.field)?;
        let mut code = Self::new(&field, json.block_len)?;
        let parse = |rows: &[Vec<Vec<u32>>]| -> Result<Matrix, CodeError> {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|c| field.from_coeffs(c)).collect())
                .collect::<Result<Vec<Vec<Elem>>, _>>()?;
            Ok(Matrix::from_rows(&field, rows)?)
        };
        for e in &json.source {
            code.set(
                SlotKey::Source {
                    source: e.source,
                    edge: e.edge,
                },
                parse(&e.matrix)?,
            );
        }
        for e in &json.local {
            code.set(
                SlotKey::Local {
                    input: e.input,
                    output: e.output,
                },
                parse(&e.matrix)?,
            );
        }
        for e in &json.decode {
            code.set(
                SlotKey::Decode {
                    terminal: e.terminal,
                    edge: e.edge,
                },
                parse(&e.matrix)?,
            );
        }
        Ok(code)
    }

    pub fn load(bytes: &[u8]) -> Result<Self, CodeError> {
        let json: CodeJson =
            serde_json::from_slice(bytes).map_err(|e| CodeError::Parse(e.to_string()))?;
        Self::from_json(&json)
    }

    pub fn save(&self) -> String {
        crate::network::canonical_json(&self.to_json())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceEntry {
    pub source: usize,
    pub edge: EdgeId,
    pub matrix: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalEntry {
    #[serde(rename = "in")]
    pub input: EdgeId,
    #[serde(rename = "out")]
    pub output: EdgeId,
    pub matrix: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecodeEntry {
    pub terminal: usize,
    pub edge: EdgeId,
    pub matrix: Vec<Vec<Vec<u32>>>,
}

/// On-disk code format. Matrices are row-major, each entry a coefficient
/// list (constant term first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeJson {
    pub field: String,
    #[serde(rename = "N")]
    pub block_len: usize,
    #[serde(default)]
    pub source: Vec<SourceEntry>,
    #[serde(default)]
    pub local: Vec<LocalEntry>,
    #[serde(default)]
    pub decode: Vec<DecodeEntry>,
}

/// Every edge message and every recovered value after one propagation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageState {
    pub edges: Vec<Vec<Elem>>,
    pub recovered: Vec<Vec<Elem>>,
}

fn add_into(field: &FiniteField, acc: &mut [Elem], v: &[Elem]) {
    for (a, &b) in acc.iter_mut().zip(v) {
        *a = field.add(*a, b);
    }
}

/// Pushes source vectors through the network in topological order.
pub fn propagate(
    net: &SumNetwork,
    code: &LinearCode,
    inputs: &[Vec<Elem>],
) -> Result<MessageState, CodeError> {
    propagate_in_order(net, code, inputs, net.topological_order())
}

/// [`propagate`] with a caller-supplied topological order.
pub fn propagate_in_order(
    net: &SumNetwork,
    code: &LinearCode,
    inputs: &[Vec<Elem>],
    order: &[VertexId],
) -> Result<MessageState, CodeError> {
    code.check(net)?;
    let n = code.block_len();
    let field = code.field();
    if inputs.len() != net.sources().len() || inputs.iter().any(|x| x.len() != n) {
        return Err(CodeError::InputShape {
            expected: net.sources().len(),
            block_len: n,
            got: inputs.iter().map(Vec::len).collect(),
        });
    }
    let mut edges: Vec<Option<Vec<Elem>>> = vec![None; net.edge_count()];
    for &v in order {
        for &e in net.out_edges(v) {
            let mut y = vec![Elem::ZERO; n];
            if let Some(j) = net.source_index(v) {
                if let Some(m) = code.get(SlotKey::Source { source: j, edge: e }) {
                    y = m.mul_vec(&inputs[j])?;
                }
            } else {
                for &input in net.in_edges(v) {
                    if let Some(m) = code.get(SlotKey::Local { input, output: e }) {
                        let prev = edges[input]
                            .as_ref()
                            .expect("topological order visits tails first");
                        add_into(field, &mut y, &m.mul_vec(prev)?);
                    }
                }
            }
            edges[e] = Some(y);
        }
    }
    let edges: Vec<Vec<Elem>> = edges
        .into_iter()
        .map(|y| y.expect("every edge has a tail in the order"))
        .collect();
    let mut recovered = Vec::with_capacity(net.terminals().len());
    for (i, &t) in net.terminals().iter().enumerate() {
        let mut r = vec![Elem::ZERO; n];
        for &e in net.in_edges(t) {
            if let Some(m) = code.get(SlotKey::Decode {
                terminal: i,
                edge: e,
            }) {
                add_into(field, &mut r, &m.mul_vec(&edges[e])?);
            }
        }
        recovered.push(r);
    }
    Ok(MessageState { edges, recovered })
}

/// `maps[i][j]` is the N×N matrix taking `X_j` to its contribution to `R_i`.
///
/// Each edge carries one N×N kernel per source (its message is
/// `Σ_j K_{e,j} X_j`); kernels are pushed through the network exactly like
/// messages, which amounts to propagating all N basis columns of every
/// source at once.
pub(crate) fn composite_maps(
    net: &SumNetwork,
    code: &LinearCode,
) -> Result<Vec<Vec<Matrix>>, CodeError> {
    code.check(net)?;
    let field = code.field();
    let n = code.block_len();
    let m = net.sources().len();
    let zero = Matrix::zeros(field, n, n);
    let accumulate = |acc: &mut Option<Matrix>, term: Matrix| -> Result<(), CodeError> {
        *acc = Some(match acc.take() {
            Some(a) => a.add(&term)?,
            None => term,
        });
        Ok(())
    };

    let mut kernels: Vec<Vec<Option<Matrix>>> = vec![vec![None; m]; net.edge_count()];
    for &v in net.topological_order() {
        for &e in net.out_edges(v) {
            let mut k: Vec<Option<Matrix>> = vec![None; m];
            if let Some(j) = net.source_index(v) {
                k[j] = code.get(SlotKey::Source { source: j, edge: e }).cloned();
            } else {
                for &input in net.in_edges(v) {
                    let Some(a) = code.get(SlotKey::Local { input, output: e }) else {
                        continue;
                    };
                    for j in 0..m {
                        if let Some(prev) = &kernels[input][j] {
                            accumulate(&mut k[j], a.mul(prev)?)?;
                        }
                    }
                }
            }
            kernels[e] = k;
        }
    }
    let mut maps = Vec::with_capacity(net.terminals().len());
    for (i, &t) in net.terminals().iter().enumerate() {
        let mut row: Vec<Option<Matrix>> = vec![None; m];
        for &e in net.in_edges(t) {
            let Some(d) = code.get(SlotKey::Decode {
                terminal: i,
                edge: e,
            }) else {
                continue;
            };
            for j in 0..m {
                if let Some(prev) = &kernels[e][j] {
                    accumulate(&mut row[j], d.mul(prev)?)?;
                }
            }
        }
        maps.push(
            row.into_iter()
                .map(|b| b.unwrap_or_else(|| zero.clone()))
                .collect(),
        );
    }
    Ok(maps)
}

/// Whether every terminal recovers `Σ X_j` for all inputs, i.e. every
/// source-to-terminal map is the identity.
pub fn is_solution(net: &SumNetwork, code: &LinearCode) -> Result<bool, CodeError> {
    let maps = composite_maps(net, code)?;
    Ok(maps.iter().flatten().all(Matrix::is_identity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_g1;

    fn single_edge() -> SumNetwork {
        SumNetwork::new(&["s", "t"], &[("s", "t")], &["s"], &["t"]).unwrap()
    }

    #[test]
    fn identity_chain_recovers_input() {
        let net = single_edge();
        let f = FiniteField::new(5, 1).unwrap();
        let mut code = LinearCode::new(&f, 1).unwrap();
        code.set_scalar(SlotKey::Source { source: 0, edge: 0 }, Elem::ONE)
            .set_scalar(
                SlotKey::Decode {
                    terminal: 0,
                    edge: 0,
                },
                Elem::ONE,
            );
        let x = f.elem(3).unwrap();
        let state = propagate(&net, &code, &[vec![x]]).unwrap();
        assert_eq!(state.recovered, vec![vec![x]]);
        assert!(is_solution(&net, &code).unwrap());
    }

    #[test]
    fn zero_inputs_give_zero_messages() {
        let net = gen_g1();
        let f = FiniteField::new(3, 1).unwrap();
        let mut rng = rand::thread_rng();
        let code = LinearCode::random(&net, &f, 2, &mut rng).unwrap();
        let state = propagate(&net, &code, &vec![vec![Elem::ZERO; 2]; 3]).unwrap();
        assert!(state.edges.iter().flatten().all(|e| e.is_zero()));
        assert!(state.recovered.iter().flatten().all(|e| e.is_zero()));
    }

    #[test]
    fn slot_order_and_counts() {
        let net = gen_g1();
        let keys = slots(&net);
        // 6 source edges, 6 combining pairs at u_i, 6 relay pairs at v_i,
        // 6 decode edges.
        assert_eq!(keys.len(), 24);
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(keys[0], SlotKey::Source { source: 0, .. }));
        assert!(matches!(keys[23], SlotKey::Decode { terminal: 2, .. }));
    }

    #[test]
    fn mismatched_code_is_rejected() {
        let net = single_edge();
        let f = FiniteField::new(2, 1).unwrap();
        let mut code = LinearCode::new(&f, 1).unwrap();
        code.set_scalar(
            SlotKey::Local {
                input: 0,
                output: 0,
            },
            Elem::ONE,
        );
        assert!(matches!(
            is_solution(&net, &code),
            Err(CodeError::MissingNetworkBinding(_))
        ));

        let mut code = LinearCode::new(&f, 2).unwrap();
        code.set(
            SlotKey::Source { source: 0, edge: 0 },
            Matrix::identity(&f, 1),
        );
        assert!(matches!(
            is_solution(&net, &code),
            Err(CodeError::DimensionMismatch { .. })
        ));

        let mut code = LinearCode::new(&f, 1).unwrap();
        let f3 = FiniteField::new(3, 1).unwrap();
        code.set(
            SlotKey::Source { source: 0, edge: 0 },
            Matrix::identity(&f3, 1),
        );
        assert!(matches!(
            is_solution(&net, &code),
            Err(CodeError::Field(FieldError::FieldMismatch(..)))
        ));

        let code = LinearCode::new(&f, 1).unwrap();
        assert!(matches!(
            propagate(&net, &code, &[]),
            Err(CodeError::InputShape { .. })
        ));
        assert_eq!(
            LinearCode::new(&f, 0).unwrap_err(),
            CodeError::ZeroBlockLength
        );
    }

    #[test]
    fn assignment_packing() {
        let net = single_edge();
        let f = FiniteField::new(2, 1).unwrap();
        let ident = vec![Matrix::identity(&f, 1); 2];
        let code = LinearCode::from_assignment(&net, &f, 1, ident).unwrap();
        assert!(is_solution(&net, &code).unwrap());
        assert_eq!(
            LinearCode::from_assignment(&net, &f, 1, vec![]).unwrap_err(),
            CodeError::LengthMismatch {
                expected: 2,
                got: 0
            }
        );
        let packed = code.to_assignment(&net);
        assert_eq!(
            LinearCode::from_assignment(&net, &f, 1, packed).unwrap(),
            code
        );
    }

    #[test]
    fn absent_equals_zero() {
        let f = FiniteField::new(2, 1).unwrap();
        let a = LinearCode::new(&f, 1).unwrap();
        let mut b = LinearCode::new(&f, 1).unwrap();
        b.set_scalar(SlotKey::Source { source: 0, edge: 0 }, Elem::ZERO);
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip() {
        let net = gen_g1();
        let f = FiniteField::new(2, 2).unwrap();
        let code = LinearCode::random(&net, &f, 2, &mut rand::thread_rng()).unwrap();
        let text = code.save();
        let back = LinearCode::load(text.as_bytes()).unwrap();
        assert_eq!(back, code);
        assert_eq!(back.save(), text);
        assert!(text.contains("\"N\": 2"));
        assert!(text.contains("\"field\": \"2^2\""));
    }

    #[test]
    fn bad_json() {
        assert!(matches!(LinearCode::load(b"[]"), Err(CodeError::Parse(_))));
        let bad = br#"{"field":"2","N":1,"source":[{"source":0,"edge":0,"matrix":[[[2]]]}]}"#;
        assert!(matches!(
            LinearCode::load(bad),
            Err(CodeError::Field(FieldError::InvalidElement { .. }))
        ));
    }
}
