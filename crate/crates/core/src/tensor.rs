//! Sparse linear operators on (C^N)^⊗k with series-valued entries.
//!
//! Houses the permutation P, the one-dimensional Q, the Yang R-matrix
//! family R(u) = 1 - P u^-1 and its transposed/inverse variants,
//! positional embeddings, partial transpositions, and the polynomial-form
//! Yang-Baxter check.
//!
//! Entries are truncated series over exact rationals; a plain rational
//! entry is a series with no variables. Multi-indices are 1-based with
//! entries in 1..=N; nothing is stored for zero entries.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::rat::{rat_pow, Rational};
use crate::series::{Direction, PolySeries, SeriesError, VariableSpec};

pub type Entry = PolySeries<Rational>;
type Idx = Vec<u8>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TensorError {
    #[error("position {0} out of range for arity {1}")]
    PositionOutOfRange(usize, usize),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("dimension mismatch: N={0} vs N={1}")]
    DimensionMismatch(u32, u32),
    #[error("R-matrix argument needs exactly one descending variable with unit coefficient")]
    BadArgument,
    #[error("pole: R^t-inverse argument equals N on the constant path")]
    Pole,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Sparse operator on (C^N)^⊗arity.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorOperator {
    n: u32,
    arity: usize,
    entries: BTreeMap<(Idx, Idx), Entry>,
}

impl TensorOperator {
    pub fn zero(n: u32, arity: usize) -> Self {
        TensorOperator { n, arity, entries: BTreeMap::new() }
    }

    pub fn identity(n: u32, arity: usize) -> Self {
        let mut op = Self::zero(n, arity);
        for idx in all_indices(n, arity) {
            op.entries.insert((idx.clone(), idx), Entry::one(vec![]));
        }
        op
    }

    pub fn n_dim(&self) -> u32 {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Idx, Idx), &Entry)> {
        self.entries.iter()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert_add(&mut self, row: Idx, col: Idx, coeff: Entry) {
        debug_assert_eq!(row.len(), self.arity);
        debug_assert_eq!(col.len(), self.arity);
        if coeff.is_zero() {
            return;
        }
        let key = (row, col);
        match self.entries.get_mut(&key) {
            Some(prev) => {
                let sum = prev.try_add(&coeff).expect("entry variables align");
                if sum.is_zero() {
                    self.entries.remove(&key);
                } else {
                    *prev = sum;
                }
            }
            None => {
                self.entries.insert(key, coeff);
            }
        }
    }

    pub fn entry(&self, row: &[u8], col: &[u8]) -> Option<&Entry> {
        self.entries.get(&(row.to_vec(), col.to_vec()))
    }

    pub fn add(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for ((r, c), e) in &other.entries {
            out.insert_add(r.clone(), c.clone(), e.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TensorError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for e in out.entries.values_mut() {
            *e = e.neg();
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.n, self.arity);
        for ((row, col), e) in &self.entries {
            out.insert_add(row.clone(), col.clone(), e.scale(r));
        }
        out
    }

    pub fn scale_series(&self, s: &Entry) -> Result<Self, TensorError> {
        let mut out = Self::zero(self.n, self.arity);
        for ((row, col), e) in &self.entries {
            out.insert_add(row.clone(), col.clone(), e.try_mul(s)?);
        }
        Ok(out)
    }

    /// Exact sparse matrix product with series-coefficient multiplication.
    pub fn mul(&self, other: &Self) -> Result<Self, TensorError> {
        self.check_shape(other)?;
        // group the right factor by row index
        let mut by_row: BTreeMap<&Idx, Vec<(&Idx, &Entry)>> = BTreeMap::new();
        for ((r, c), e) in &other.entries {
            by_row.entry(r).or_default().push((c, e));
        }
        let mut out = Self::zero(self.n, self.arity);
        for ((ra, ca), ea) in &self.entries {
            if let Some(cols) = by_row.get(ca) {
                for (cb, eb) in cols {
                    out.insert_add(ra.clone(), (*cb).clone(), ea.try_mul(eb)?);
                }
            }
        }
        Ok(out)
    }

    /// Swap row and column index at one slot; involutive.
    pub fn partial_transpose(&self, pos: usize) -> Result<Self, TensorError> {
        if pos == 0 || pos > self.arity {
            return Err(TensorError::PositionOutOfRange(pos, self.arity));
        }
        let p = pos - 1;
        let mut out = Self::zero(self.n, self.arity);
        for ((row, col), e) in &self.entries {
            let mut nr = row.clone();
            let mut nc = col.clone();
            std::mem::swap(&mut nr[p], &mut nc[p]);
            out.insert_add(nr, nc, e.clone());
        }
        Ok(out)
    }

    /// Embed an operator into a larger arity, placing its slots at the
    /// given 1-based positions (identity elsewhere).
    pub fn embed(&self, positions: &[usize], arity: usize) -> Result<Self, TensorError> {
        if positions.len() != self.arity {
            return Err(TensorError::ArityMismatch(positions.len(), self.arity));
        }
        for &p in positions {
            if p == 0 || p > arity {
                return Err(TensorError::PositionOutOfRange(p, arity));
            }
        }
        let free: Vec<usize> =
            (1..=arity).filter(|p| !positions.contains(p)).collect();
        let mut out = Self::zero(self.n, arity);
        for ((row, col), e) in &self.entries {
            for free_idx in all_indices(self.n, free.len()) {
                let mut nr = vec![0u8; arity];
                let mut nc = vec![0u8; arity];
                for (slot, &p) in positions.iter().enumerate() {
                    nr[p - 1] = row[slot];
                    nc[p - 1] = col[slot];
                }
                for (slot, &p) in free.iter().enumerate() {
                    nr[p - 1] = free_idx[slot];
                    nc[p - 1] = free_idx[slot];
                }
                out.insert_add(nr, nc, e.clone());
            }
        }
        Ok(out)
    }

    /// Kronecker product: self acts on the first block of slots, other
    /// on the remaining ones.
    pub fn tensor_product(&self, other: &Self) -> Result<Self, TensorError> {
        if self.n != other.n {
            return Err(TensorError::DimensionMismatch(self.n, other.n));
        }
        let mut out = Self::zero(self.n, self.arity + other.arity);
        for ((ra, ca), ea) in &self.entries {
            for ((rb, cb), eb) in &other.entries {
                let mut row = ra.clone();
                row.extend_from_slice(rb);
                let mut col = ca.clone();
                col.extend_from_slice(cb);
                out.insert_add(row, col, ea.try_mul(eb)?);
            }
        }
        Ok(out)
    }

    /// Mathematical equality: structural comparison after variable
    /// alignment (an exponent-0 variable and an absent one agree).
    pub fn equiv(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    fn check_shape(&self, other: &Self) -> Result<(), TensorError> {
        if self.n != other.n {
            return Err(TensorError::DimensionMismatch(self.n, other.n));
        }
        if self.arity != other.arity {
            return Err(TensorError::ArityMismatch(self.arity, other.arity));
        }
        Ok(())
    }
}

impl fmt::Display for TensorOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        for ((r, c), e) in &self.entries {
            writeln!(f, "  {:?} <- {:?}: {}", r, c, e)?;
        }
        Ok(())
    }
}

fn all_indices(n: u32, arity: usize) -> Vec<Idx> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * n as usize);
        for idx in &out {
            for v in 1..=n as u8 {
                let mut w = idx.clone();
                w.push(v);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// The permutation operator P = Σ e_ij ⊗ e_ji on slots (a, b).
pub fn permutation(n: u32, a: usize, b: usize, arity: usize) -> Result<TensorOperator, TensorError> {
    let mut p2 = TensorOperator::zero(n, 2);
    for i in 1..=n as u8 {
        for j in 1..=n as u8 {
            p2.insert_add(vec![i, j], vec![j, i], Entry::one(vec![]));
        }
    }
    p2.embed(&[a, b], arity)
}

/// The one-dimensional operator Q = Σ e_ij ⊗ e_ij = P^{t_1} on slots (a, b).
pub fn q_operator(n: u32, a: usize, b: usize, arity: usize) -> Result<TensorOperator, TensorError> {
    let mut q2 = TensorOperator::zero(n, 2);
    for i in 1..=n as u8 {
        for j in 1..=n as u8 {
            q2.insert_add(vec![i, i], vec![j, j], Entry::one(vec![]));
        }
    }
    q2.embed(&[a, b], arity)
}

/// The matrix unit e_ij at one slot.
pub fn matrix_unit(n: u32, i: u8, j: u8, pos: usize, arity: usize) -> Result<TensorOperator, TensorError> {
    let mut e1 = TensorOperator::zero(n, 1);
    e1.insert_add(vec![i], vec![j], Entry::one(vec![]));
    e1.embed(&[pos], arity)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RMatrixKind {
    /// R(u) = 1 - P u^-1
    Yang,
    /// R^t(u) = 1 - Q u^-1
    Transposed,
    /// R^t(u)^-1 = 1 + Q (u-N)^-1
    TransposedInverse,
}

/// Affine argument Σ ±var + c, e.g. u - v, c - u, u - v - N.
#[derive(Clone, Debug, PartialEq)]
pub struct ArgForm {
    pub vars: Vec<(String, i8)>,
    pub constant: Rational,
}

impl ArgForm {
    pub fn var(name: &str) -> Self {
        ArgForm { vars: vec![(name.into(), 1)], constant: Rational::zero() }
    }

    pub fn diff(a: &str, b: &str) -> Self {
        ArgForm { vars: vec![(a.into(), 1), (b.into(), -1)], constant: Rational::zero() }
    }

    pub fn shifted(mut self, c: Rational) -> Self {
        self.constant += c;
        self
    }
}

use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrixSpec {
    pub kind: RMatrixKind,
    pub argument: ArgForm,
}

/// Formal expansion of (argument)^-1 within the declared truncations.
///
/// With a descending variable u present (unit coefficient s), the
/// expansion runs along u: (s·u + rest)^-1 = s u^-1 Σ_k (-s·rest)^k u^-k.
/// Without one, the argument must have a nonzero constant term and is
/// inverted as an ascending series.
fn affine_inverse(arg: &ArgForm, vars: &[VariableSpec]) -> Result<Entry, TensorError> {
    let find = |name: &str| vars.iter().find(|v| v.name == name);
    let mut desc: Option<(&VariableSpec, i8)> = None;
    let mut rest = PolySeries::constant(vars.to_vec(), arg.constant.clone());
    for (name, sign) in &arg.vars {
        let spec = find(name).ok_or(SeriesError::NoSuchVariable(name.clone()))?;
        match spec.dir {
            Direction::Descending => {
                if desc.is_some() || sign.abs() != 1 {
                    return Err(TensorError::BadArgument);
                }
                desc = Some((spec, *sign));
            }
            Direction::Ascending => {
                let mono = PolySeries::monomial(
                    vars.to_vec(),
                    &[(name, 1)],
                    Rational::from_integer((*sign as i64).into()),
                );
                rest = rest.try_add(&mono)?;
            }
        }
    }
    match desc {
        Some((spec, sign)) => {
            let s = Rational::from_integer((sign as i64).into());
            // s u^-1 Σ_k (-s rest)^k u^-k
            let mut acc = PolySeries::zero(vars.to_vec());
            let mut pow = PolySeries::one(vars.to_vec());
            for k in 0..=spec.trunc {
                let term = pow.scale(&rat_pow(&s, (k + 1) as i64))
                    .scale(&if k % 2 == 0 { Rational::one() } else { -Rational::one() });
                let term = term.mul_var_pow(&spec.name, k + 1)?;
                acc = acc.try_add(&term)?;
                pow = pow.try_mul(&rest)?;
                if pow.is_zero() {
                    break;
                }
            }
            Ok(acc)
        }
        None => {
            if rest.constant_term().is_zero() {
                return Err(TensorError::Pole);
            }
            Ok(rest.invert()?)
        }
    }
}

/// Build an R-matrix variant acting on slots (a, b) of the given arity,
/// with entries expanded as series in the declared variables.
pub fn build_r_n(
    n: u32,
    spec: &RMatrixSpec,
    a: usize,
    b: usize,
    arity: usize,
    vars: &[VariableSpec],
) -> Result<TensorOperator, TensorError> {
    if a >= b {
        return Err(TensorError::PositionOutOfRange(a, b));
    }
    let ident = TensorOperator::identity(n, arity);
    match spec.kind {
        RMatrixKind::Yang => {
            let inv = affine_inverse(&spec.argument, vars)?;
            let p = permutation(n, a, b, arity)?;
            ident.sub(&p.scale_series(&inv)?)
        }
        RMatrixKind::Transposed => {
            let inv = affine_inverse(&spec.argument, vars)?;
            let q = q_operator(n, a, b, arity)?;
            ident.sub(&q.scale_series(&inv)?)
        }
        RMatrixKind::TransposedInverse => {
            let shifted = ArgForm {
                vars: spec.argument.vars.clone(),
                constant: spec.argument.constant.clone()
                    - Rational::from_integer((n as i64).into()),
            };
            let inv = affine_inverse(&shifted, vars)?;
            let q = q_operator(n, a, b, arity)?;
            ident.add(&q.scale_series(&inv)?)
        }
    }
}

/// Yang-Baxter check in the polynomial form
/// (u+P12)(u+v+P13)(v+P23) = (v+P23)(u+v+P13)(u+P12); entries are exact
/// polynomials in u, v so no truncation is involved.
pub fn ybe_check(n: u32) -> Result<(bool, TensorOperator), TensorError> {
    let vars = vec![VariableSpec::asc("u", 3), VariableSpec::asc("v", 3)];
    let scalar = |exps: &[(&str, u32)]| {
        PolySeries::monomial(vars.clone(), exps, Rational::one())
    };
    let ident = TensorOperator::identity(n, 3);
    let u_term = ident.scale_series(&scalar(&[("u", 1)]))?;
    let v_term = ident.scale_series(&scalar(&[("v", 1)]))?;
    let uv_term = u_term.add(&v_term)?;

    let f1 = u_term.add(&permutation(n, 1, 2, 3)?)?;
    let f2 = uv_term.add(&permutation(n, 1, 3, 3)?)?;
    let f3 = v_term.add(&permutation(n, 2, 3, 3)?)?;

    let lhs = f1.mul(&f2)?.mul(&f3)?;
    let rhs = f3.mul(&f2)?.mul(&f1)?;
    let residual = lhs.sub(&rhs)?;
    Ok((residual.is_zero(), residual))
}
