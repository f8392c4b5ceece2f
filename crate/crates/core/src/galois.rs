//! Exact arithmetic in GF(p^k) and dense matrices over it.
//!
//! Elements are stored as their index in the canonical enumeration of the
//! field: the polynomial `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` has index
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Index order is therefore the
//! coefficient-lexicographic order with zero first, and brute-force search
//! over elements is deterministic.
//!
//! Multiplication goes through log/exp tables built once per field from a
//! primitive element; small fields additionally get full add/mul tables.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order we are willing to tabulate.
pub const MAX_ORDER: u64 = 1 << 20;

/// Fields up to this order get full q×q addition and multiplication tables.
const TABLE_ORDER: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields: {0} and {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is singular")]
    Singular,
    #[error("invalid field spec {0:?}, expected \"p\" or \"p^k\"")]
    InvalidSpec(String),
    #[error("invalid element coefficients {coeffs:?} for {field}")]
    InvalidElement { coeffs: Vec<u32>, field: String },
}

/// An element of some [`FiniteField`], by canonical index.
///
/// Elements do not remember their field; arithmetic goes through the field
/// handle, and [`Matrix`] is where cross-field mixing gets rejected.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Caller guarantees `index` is below the order of the intended field.
    pub(crate) fn from_index_unchecked(index: u32) -> Elem {
        Elem(index)
    }
}

struct FieldData {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, low degree first, length k+1.
    modulus: Vec<u32>,
    /// p^i for i in 0..k.
    place: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
}

/// Handle to GF(p^k). Cheap to clone; all clones share the same tables.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.spec())
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.spec())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// GF(p^k) with the lexicographically smallest monic irreducible modulus,
    /// coefficients compared from the constant term upwards.
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(k);
        match q {
            Some(q) if q <= MAX_ORDER as u128 => {}
            _ => return Err(FieldError::TooLarge { p, k }),
        }
        let p = p as u32;
        let modulus = poly::smallest_irreducible(p, k as usize);
        Ok(Self::with_modulus_unchecked(p, modulus))
    }

    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    /// Parses `"p"` or `"p^k"`.
    pub fn from_spec(spec: &str) -> Result<Self, FieldError> {
        let bad = || FieldError::InvalidSpec(spec.to_string());
        let spec_trim = spec.trim();
        let (p, k) = match spec_trim.split_once('^') {
            Some((p, k)) => (p.trim(), k.trim()),
            None => (spec_trim, "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        Self::new(p, k)
    }

    fn with_modulus_unchecked(p: u32, modulus: Vec<u32>) -> Self {
        let k = (modulus.len() - 1) as u32;
        let q = p.pow(k);
        let place: Vec<u32> = (0..k).map(|i| p.pow(i)).collect();

        let to_coeffs = |e: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(k as usize);
            let mut x = e;
            for _ in 0..k {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let from_coeffs = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let slow_mul = |a: u32, b: u32| -> u32 {
            from_coeffs(&poly::mul_mod(&to_coeffs(a), &to_coeffs(b), &modulus, p))
        };

        // First element (in canonical order) whose powers cover the whole
        // multiplicative group.
        let order = q - 1;
        let mut exp = Vec::new();
        for g in 1..q {
            let mut powers = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            loop {
                powers.push(x);
                x = slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if powers.len() as u32 == order {
                exp = powers;
                break;
            }
        }
        debug_assert_eq!(exp.len() as u32, order);
        let mut log = vec![0u32; q as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }

        let mut data = FieldData {
            p,
            k,
            q,
            modulus,
            place,
            exp,
            log,
            add_table: None,
            mul_table: None,
        };
        if q <= TABLE_ORDER {
            let field = FiniteField(Arc::new(data));
            let mut add = Vec::with_capacity((q * q) as usize);
            let mut mul = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(field.add_digits(Elem(a), Elem(b)).0);
                    mul.push(field.mul_log(Elem(a), Elem(b)).0);
                }
            }
            data = Arc::into_inner(field.0).expect("sole owner");
            data.add_table = Some(add);
            data.mul_table = Some(mul);
        }
        FiniteField(Arc::new(data))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, constant term first; the last entry is 1.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// `"p"` for prime fields, `"p^k"` otherwise.
    pub fn spec(&self) -> String {
        if self.0.k == 1 {
            format!("{}", self.0.p)
        } else {
            format!("{}^{}", self.0.p, self.0.k)
        }
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.q
    }

    /// All q elements in canonical order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.q).map(Elem)
    }

    /// Element from its index in the canonical enumeration.
    pub fn elem(&self, index: u32) -> Option<Elem> {
        (index < self.0.q).then_some(Elem(index))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut x = a.0;
        (0..self.0.k)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    /// Element from polynomial coefficients, constant term first. Shorter
    /// lists are zero-padded.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem, FieldError> {
        let p = self.0.p;
        if coeffs.len() > self.0.k as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(FieldError::InvalidElement {
                coeffs: coeffs.to_vec(),
                field: self.to_string(),
            });
        }
        Ok(Elem(coeffs.iter().rev().fold(0, |acc, &d| acc * p + d)))
    }

    /// The integer `c` mapped into the prime subfield (repeated addition of 1).
    pub fn from_int(&self, c: i64) -> Elem {
        Elem(c.rem_euclid(self.0.p as i64) as u32)
    }

    /// Whether the characteristic divides `c`, i.e. `c·1 = 0` in this field.
    pub fn char_divides(&self, c: u64) -> bool {
        c.is_multiple_of(self.0.p as u64)
    }

    /// `"[c0,c1,...]"`, constant term first.
    pub fn render(&self, a: Elem) -> String {
        let parts: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0);
        for &place in &self.0.place {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    fn mul_log(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let d = &self.0;
        let s = (d.log[a.0 as usize] + d.log[b.0 as usize]) % (d.q - 1);
        Elem(d.exp[s as usize])
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.0.add_table {
            Some(t) => Elem(t[(a.0 * self.0.q + b.0) as usize]),
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(self.contains(a) && self.contains(b));
        match &self.0.mul_table {
            Some(t) => Elem(t[(a.0 * self.0.q + b.0) as usize]),
            None => self.mul_log(a, b),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0;
        for &place in &self.0.place {
            out += ((p - x % p) % p) * place;
            x /= p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let d = &self.0;
        let l = d.log[a.0 as usize];
        Ok(Elem(d.exp[((d.q - 1 - l) % (d.q - 1)) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let d = &self.0;
        let l = (d.log[a.0 as usize] as u64 * (e % (d.q as u64 - 1))) % (d.q as u64 - 1);
        Elem(d.exp[l as usize])
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items
            .into_iter()
            .fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    fn check_same(&self, other: &FiniteField) -> Result<(), FieldError> {
        if self == other {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(
                self.to_string(),
                other.to_string(),
            ))
        }
    }
}

/// Dense row-major matrix over a [`FiniteField`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FiniteField,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.field)?;
        let rows: Vec<Vec<u32>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|e| e.0).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

impl Matrix {
    pub fn zeros(field: &FiniteField, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FiniteField, n: usize) -> Self {
        Self::scalar(field, n, Elem::ONE)
    }

    /// `a·I`.
    pub fn scalar(field: &FiniteField, n: usize, a: Elem) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = a;
        }
        m
    }

    pub fn from_rows(field: &FiniteField, rows: Vec<Vec<Elem>>) -> Result<Self, FieldError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(FieldError::DimensionMismatch {
                    left: (r, c),
                    right: (1, row.len()),
                });
            }
            if let Some(bad) = row.iter().find(|e| !field.contains(**e)) {
                return Err(FieldError::InvalidElement {
                    coeffs: vec![bad.0],
                    field: field.to_string(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data,
        })
    }

    /// Shorthand for tests and fixtures: entries given by canonical index.
    pub fn from_indices(field: &FiniteField, rows: &[&[u32]]) -> Result<Self, FieldError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&i| Elem(i)).collect())
            .collect();
        Self::from_rows(field, rows)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols)
                    .all(|c| self.get(r, c) == if r == c { Elem::ONE } else { Elem::ZERO })
            })
    }

    fn check_field(&self, other: &Matrix) -> Result<(), FieldError> {
        self.field.check_same(&other.field)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, FieldError> {
        self.check_field(other)?;
        if self.dims() != other.dims() {
            return Err(FieldError::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, FieldError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(FieldError::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(r, t);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(t, c)));
                }
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>, FieldError> {
        if v.len() != self.cols {
            return Err(FieldError::DimensionMismatch {
                left: self.dims(),
                right: (v.len(), 1),
            });
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|r| f.sum(self.row(r).iter().zip(v).map(|(&a, &b)| f.mul(a, b))))
            .collect())
    }

    pub fn scale(&self, a: Elem) -> Matrix {
        let f = &self.field;
        Matrix {
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f.mul(a, x)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix, FieldError> {
        if !self.is_square() {
            return Err(FieldError::DimensionMismatch {
                left: self.dims(),
                right: (self.cols, self.rows),
            });
        }
        let n = self.rows;
        let f = &self.field;
        let mut a = self.clone();
        let mut inv = Matrix::identity(f, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(FieldError::Singular)?;
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                    inv.data.swap(pivot * n + c, col * n + c);
                }
            }
            let scale = f.inv(a.get(col, col))?;
            for c in 0..n {
                a.data[col * n + c] = f.mul(scale, a.data[col * n + c]);
                inv.data[col * n + c] = f.mul(scale, inv.data[col * n + c]);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                let neg = f.neg(factor);
                for c in 0..n {
                    a.data[r * n + c] = f.add(a.data[r * n + c], f.mul(neg, a.data[col * n + c]));
                    inv.data[r * n + c] =
                        f.add(inv.data[r * n + c], f.mul(neg, inv.data[col * n + c]));
                }
            }
        }
        Ok(inv)
    }
}

/// Matrix of `x ↦ a·x` on GF(p^N), viewed as an N-dimensional space over
/// GF(p) in the polynomial basis `1, x, ..., x^{N-1}`. Column `c` holds the
/// coordinates of `a·x^c`.
pub fn lift_to_matrix(
    ext: &FiniteField,
    a: Elem,
    base: &FiniteField,
) -> Result<Matrix, FieldError> {
    if base.degree() != 1 || base.characteristic() != ext.characteristic() {
        return Err(FieldError::FieldMismatch(ext.to_string(), base.to_string()));
    }
    if !ext.contains(a) {
        return Err(FieldError::InvalidElement {
            coeffs: vec![a.0],
            field: ext.to_string(),
        });
    }
    let n = ext.degree() as usize;
    let mut out = Matrix::zeros(base, n, n);
    let mut basis = Elem::ONE;
    // The class of x has coefficients [0, 1], i.e. index p.
    let x = if n > 1 {
        Elem(ext.characteristic())
    } else {
        Elem::ONE
    };
    for c in 0..n {
        let image = ext.coeffs(ext.mul(a, basis));
        for (r, &d) in image.iter().enumerate() {
            out.set(r, c, Elem(d));
        }
        basis = ext.mul(basis, x);
    }
    Ok(out)
}

/// Polynomials over GF(p) as coefficient vectors, constant term first.
mod poly {
    /// Remainder of `f` modulo monic `g`, as a vector of length deg(g).
    pub(super) fn rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        let dg = g.len() - 1;
        let mut r = f.to_vec();
        if r.len() < dg {
            r.resize(dg, 0);
        }
        for top in (dg..r.len()).rev() {
            let lead = r[top];
            if lead == 0 {
                continue;
            }
            let shift = top - dg;
            for (i, &gc) in g.iter().enumerate() {
                r[i + shift] = (r[i + shift] + p - (lead * gc) % p) % p;
            }
        }
        r.truncate(dg);
        r
    }

    pub(super) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let k = m.len() - 1;
        let mut prod = vec![0u32; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let mut r = rem(&prod, m, p);
        r.resize(k, 0);
        r
    }

    /// Monic polynomials of degree `d`, low coefficients most significant.
    fn monic_of_degree(p: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
        let count = (p as u64).pow(d as u32);
        (0..count).map(move |mut idx| {
            let mut c = vec![0u32; d + 1];
            for i in (0..d).rev() {
                c[i] = (idx % p as u64) as u32;
                idx /= p as u64;
            }
            c[d] = 1;
            c
        })
    }

    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let k = f.len() - 1;
        if k == 1 {
            return true;
        }
        (1..=k / 2).all(|d| {
            monic_of_degree(p, d).all(|g| {
                let r = rem(f, &g, p);
                r.iter().any(|&c| c != 0)
            })
        })
    }

    pub(super) fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
        monic_of_degree(p, k)
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree")
    }

}
