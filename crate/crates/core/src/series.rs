//! Truncated formal power series in named variables.
//!
//! A variable carries a direction: an *ascending* variable `v` contributes
//! powers v^0..v^K, a *descending* variable `u` contributes powers
//! u^0..u^-K. Exponents are stored as nonnegative integers against the
//! variable's direction, so the multi-index `[2, 1]` over `[u desc, v asc]`
//! means u^-2 v. Nothing beyond a variable's truncation order is ever
//! stored; all binary operations truncate to the common (minimum) orders.
//!
//! Coefficients can be rationals or algebra elements; arithmetic is exact
//! within truncation in either case.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rat::{binomial, neg_one_pow, rat_pow, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    /// Series in x: exponent e stands for x^e.
    Ascending,
    /// Series in x^-1: exponent e stands for x^-e.
    Descending,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableSpec {
    pub name: String,
    pub dir: Direction,
    /// Coefficients are kept for exponents 0..=trunc.
    pub trunc: u32,
}

impl VariableSpec {
    pub fn asc(name: &str, trunc: u32) -> Self {
        VariableSpec { name: name.into(), dir: Direction::Ascending, trunc }
    }
    pub fn desc(name: &str, trunc: u32) -> Self {
        VariableSpec { name: name.into(), dir: Direction::Descending, trunc }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("variable `{0}` used with conflicting directions")]
    DirectionClash(String),
    #[error("exponent {exp} of `{var}` lies beyond truncation order {trunc}")]
    BeyondTruncation { var: String, exp: u32, trunc: u32 },
    #[error("series has zero constant term, cannot invert")]
    ZeroConstantTerm,
    #[error("no such variable `{0}`")]
    NoSuchVariable(String),
}

/// Minimal coefficient-ring interface for series entries.
pub trait Coeff: Clone + PartialEq {
    fn c_add(&self, other: &Self) -> Self;
    fn c_sub(&self, other: &Self) -> Self;
    fn c_mul(&self, other: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_scale(&self, r: &Rational) -> Self;
}

impl Coeff for Rational {
    fn c_add(&self, other: &Self) -> Self {
        self + other
    }
    fn c_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn c_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_scale(&self, r: &Rational) -> Self {
        self * r
    }
}

/// Truncated formal series over the coefficient ring `C`.
///
/// Variables are kept sorted by name; the exponent multi-index of every
/// stored term is parallel to the variable list. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySeries<C: Coeff> {
    vars: Vec<VariableSpec>,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coeff> PolySeries<C> {
    pub fn zero(vars: Vec<VariableSpec>) -> Self {
        let vars = sorted_vars(vars);
        PolySeries { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vec<VariableSpec>, c: C) -> Self {
        let mut s = Self::zero(vars);
        if !c.c_is_zero() {
            s.terms.insert(vec![0; s.vars.len()], c);
        }
        s
    }

    /// A single monomial c * Π var^exp (signed per direction).
    pub fn monomial(vars: Vec<VariableSpec>, exps: &[(&str, u32)], c: C) -> Self {
        let mut s = Self::zero(vars);
        let mut idx = vec![0u32; s.vars.len()];
        for (name, e) in exps {
            let vi = s
                .vars
                .iter()
                .position(|v| v.name == *name)
                .unwrap_or_else(|| panic!("no such variable `{name}`"));
            idx[vi] = *e;
        }
        if !c.c_is_zero() && s.in_range(&idx) {
            s.terms.insert(idx, c);
        }
        s
    }

    pub fn vars(&self) -> &[VariableSpec] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn in_range(&self, idx: &[u32]) -> bool {
        idx.iter().zip(&self.vars).all(|(e, v)| *e <= v.trunc)
    }

    pub fn insert_add(&mut self, idx: Vec<u32>, c: C) {
        if c.c_is_zero() || !self.in_range(&idx) {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(prev) => {
                let sum = prev.c_add(&c);
                if sum.c_is_zero() {
                    self.terms.remove(&idx);
                } else {
                    *prev = sum;
                }
            }
            None => {
                self.terms.insert(idx, c);
            }
        }
    }

    /// Stored coefficient at the multi-index; errors beyond truncation so a
    /// dropped coefficient is distinguishable from a true zero.
    pub fn coeff(&self, idx: &[u32]) -> Result<Option<&C>, SeriesError>
    where
        C: Clone,
    {
        assert_eq!(idx.len(), self.vars.len(), "multi-index arity mismatch");
        for (e, v) in idx.iter().zip(&self.vars) {
            if *e > v.trunc {
                return Err(SeriesError::BeyondTruncation {
                    var: v.name.clone(),
                    exp: *e,
                    trunc: v.trunc,
                });
            }
        }
        Ok(self.terms.get(idx))
    }

    /// Coefficient at a (name, exponent) list, unnamed variables at 0.
    pub fn coeff_named(&self, exps: &[(&str, u32)]) -> Result<Option<&C>, SeriesError> {
        let mut idx = vec![0u32; self.vars.len()];
        for (name, e) in exps {
            let vi = self
                .vars
                .iter()
                .position(|v| v.name == *name)
                .ok_or_else(|| SeriesError::NoSuchVariable((*name).to_string()))?;
            idx[vi] = *e;
        }
        self.coeff(&idx)
    }

    /// Align two series onto the union of their variables, propagating the
    /// minimum truncation for shared names. Errors on direction clashes.
    pub fn aligned(&self, other: &Self) -> Result<(Self, Self), SeriesError> {
        if self.vars == other.vars {
            return Ok((self.clone(), other.clone()));
        }
        let mut vars: Vec<VariableSpec> = Vec::new();
        for v in self.vars.iter().chain(other.vars.iter()) {
            match vars.iter_mut().find(|w| w.name == v.name) {
                Some(w) => {
                    if w.dir != v.dir {
                        return Err(SeriesError::DirectionClash(v.name.clone()));
                    }
                    w.trunc = w.trunc.min(v.trunc);
                }
                None => vars.push(v.clone()),
            }
        }
        let vars = sorted_vars(vars);
        Ok((self.reindexed(&vars), other.reindexed(&vars)))
    }

    fn reindexed(&self, vars: &[VariableSpec]) -> Self {
        let map: Vec<Option<usize>> = vars
            .iter()
            .map(|v| self.vars.iter().position(|w| w.name == v.name))
            .collect();
        let mut out = PolySeries { vars: vars.to_vec(), terms: BTreeMap::new() };
        'term: for (idx, c) in &self.terms {
            let mut new_idx = vec![0u32; vars.len()];
            for (ni, m) in map.iter().enumerate() {
                if let Some(oi) = m {
                    new_idx[ni] = idx[*oi];
                    if new_idx[ni] > vars[ni].trunc {
                        continue 'term;
                    }
                }
            }
            out.insert_add(new_idx, c.clone());
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        let (mut a, b) = self.aligned(other)?;
        for (idx, c) in b.terms {
            a.insert_add(idx, c);
        }
        Ok(a)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.c_neg();
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let (a, b) = self.aligned(other)?;
        let mut out = PolySeries { vars: a.vars.clone(), terms: BTreeMap::new() };
        for (ia, ca) in &a.terms {
            for (ib, cb) in &b.terms {
                let idx: Vec<u32> = ia.iter().zip(ib).map(|(x, y)| x + y).collect();
                if out.in_range(&idx) {
                    out.insert_add(idx, ca.c_mul(cb));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = PolySeries { vars: self.vars.clone(), terms: BTreeMap::new() };
        if r.is_zero() {
            return out;
        }
        for (idx, c) in &self.terms {
            out.insert_add(idx.clone(), c.c_scale(r));
        }
        out
    }

    /// Multiply by var^k (direction-signed), dropping overflowing terms.
    pub fn mul_var_pow(&self, var: &str, k: u32) -> Result<Self, SeriesError> {
        let vi = self
            .vars
            .iter()
            .position(|v| v.name == var)
            .ok_or_else(|| SeriesError::NoSuchVariable(var.to_string()))?;
        let mut out = PolySeries { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (idx, c) in &self.terms {
            let mut ni = idx.clone();
            ni[vi] += k;
            if out.in_range(&ni) {
                out.insert_add(ni, c.clone());
            }
        }
        Ok(out)
    }

    /// Substitute var -> var + c and re-expand within truncation.
    ///
    /// Descending: (u+c)^-r = Σ_k binom(-r,k) c^k u^-(r+k), truncated.
    /// Ascending: coefficient of v^k in f(v+c) is Σ_{r>=k} a_r binom(r,k) c^{r-k};
    /// the sum runs over stored coefficients only, so the caller must
    /// guarantee that nothing significant was already dropped above the
    /// truncation order (the dual-degree bound provides this for T*(v)).
    pub fn shift(&self, var: &str, c: &Rational) -> Result<Self, SeriesError> {
        let vi = self
            .vars
            .iter()
            .position(|v| v.name == var)
            .ok_or_else(|| SeriesError::NoSuchVariable(var.to_string()))?;
        if c.is_zero() {
            return Ok(self.clone());
        }
        let dir = self.vars[vi].dir;
        let trunc = self.vars[vi].trunc;
        let mut out = PolySeries { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (idx, coeff) in &self.terms {
            let e = idx[vi];
            match dir {
                Direction::Descending => {
                    if e == 0 {
                        out.insert_add(idx.clone(), coeff.clone());
                        continue;
                    }
                    // binom(-e, k) = (-1)^k binom(e+k-1, k)
                    for k in 0..=(trunc - e) {
                        let factor = neg_one_pow(k as u64)
                            * binomial((e + k - 1) as u64, k as u64)
                            * rat_pow(c, k as i64);
                        if factor.is_zero() {
                            continue;
                        }
                        let mut ni = idx.clone();
                        ni[vi] = e + k;
                        out.insert_add(ni, coeff.c_scale(&factor));
                    }
                }
                Direction::Ascending => {
                    for k in 0..=e {
                        let factor =
                            binomial(e as u64, k as u64) * rat_pow(c, (e - k) as i64);
                        if factor.is_zero() {
                            continue;
                        }
                        let mut ni = idx.clone();
                        ni[vi] = k;
                        out.insert_add(ni, coeff.c_scale(&factor));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Geometric inversion for a series whose constant term is the ring
    /// unit `one`: returns Σ_k (1-self)^k within truncation. The caller is
    /// responsible for the constant term actually being `one`.
    pub fn invert_with_one(&self, one: C) -> Self {
        let unit = Self::constant(self.vars.clone(), one);
        let g = unit.try_sub(self).expect("same variables");
        let kmax: u32 = self.vars.iter().map(|v| v.trunc).sum();
        let mut acc = unit.clone();
        let mut pow = unit;
        for _ in 0..kmax {
            pow = pow.try_mul(&g).expect("same variables");
            if pow.is_zero() {
                break;
            }
            acc = acc.try_add(&pow).expect("same variables");
        }
        acc
    }

    /// Restrict to terms whose total degree across all variables equals d.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = PolySeries { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (idx, c) in &self.terms {
            if idx.iter().sum::<u32>() == d {
                out.insert_add(idx.clone(), c.clone());
            }
        }
        out
    }

    pub fn max_total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|idx| idx.iter().sum()).max()
    }
}

fn sorted_vars(mut vars: Vec<VariableSpec>) -> Vec<VariableSpec> {
    vars.sort_by(|a, b| a.name.cmp(&b.name));
    for w in vars.windows(2) {
        assert!(w[0].name != w[1].name, "duplicate variable `{}`", w[0].name);
    }
    vars
}

impl PolySeries<Rational> {
    pub fn one(vars: Vec<VariableSpec>) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0u32; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Multiplicative inverse by finite geometric expansion; the constant
    /// term must be a nonzero rational.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let scaled = self.scale(&c0.recip());
        Ok(scaled.invert_with_one(Rational::one()).scale(&c0.recip()))
    }
}

/// Arithmetic entry point over exact rationals; `ScalarMul` treats the
/// second operand as a constant and rescales.
pub fn series_arith(
    a: &PolySeries<Rational>,
    b: &PolySeries<Rational>,
    op: ArithOp,
) -> Result<PolySeries<Rational>, SeriesError> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::ScalarMul => Ok(a.scale(&b.constant_term())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    ScalarMul,
}

impl<C: Coeff + fmt::Display> fmt::Display for PolySeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            for (e, v) in idx.iter().zip(&self.vars) {
                if *e == 0 {
                    continue;
                }
                let signed: i64 = match v.dir {
                    Direction::Ascending => *e as i64,
                    Direction::Descending => -(*e as i64),
                };
                if signed == 1 {
                    factors.push(v.name.clone());
                } else {
                    factors.push(format!("{}^{}", v.name, signed));
                }
            }
            if factors.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn u(k: u32) -> Vec<VariableSpec> {
        vec![VariableSpec::desc("u", k)]
    }

    fn v(k: u32) -> Vec<VariableSpec> {
        vec![VariableSpec::asc("v", k)]
    }

    #[test]
    fn geometric_identity() {
        // (1 - u^-1) * (1 + u^-1 + u^-2 + ...) = 1 at all kept orders
        let k = 6;
        let one_minus = PolySeries::one(u(k))
            .try_sub(&PolySeries::monomial(u(k), &[("u", 1)], rat_int(1)))
            .unwrap();
        let mut geo = PolySeries::zero(u(k));
        for e in 0..=k {
            geo.insert_add(vec![e], rat_int(1));
        }
        let prod = one_minus.try_mul(&geo).unwrap();
        assert_eq!(prod, PolySeries::one(u(k)));
    }

    #[test]
    fn truncation_drops_high_orders() {
        // (1 + v)^2 at K=1 -> 1 + 2v
        let a = PolySeries::one(v(1))
            .try_add(&PolySeries::monomial(v(1), &[("v", 1)], rat_int(1)))
            .unwrap();
        let sq = a.try_mul(&a).unwrap();
        let mut expect = PolySeries::one(v(1));
        expect.insert_add(vec![1], rat_int(2));
        assert_eq!(sq, expect);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(PolySeries::one(u(4)).invert().unwrap(), PolySeries::one(u(4)));

        // invert(1 - u^-1) at K=3 -> 1 + u^-1 + u^-2 + u^-3
        let a = PolySeries::one(u(3))
            .try_sub(&PolySeries::monomial(u(3), &[("u", 1)], rat_int(1)))
            .unwrap();
        let inv = a.invert().unwrap();
        let mut expect = PolySeries::zero(u(3));
        for e in 0..=3 {
            expect.insert_add(vec![e], rat_int(1));
        }
        assert_eq!(inv, expect);
        assert_eq!(a.try_mul(&inv).unwrap(), PolySeries::one(u(3)));

        // invert(1 + 2v) at K=2 -> 1 - 2v + 4v^2
        let b = PolySeries::one(v(2))
            .try_add(&PolySeries::monomial(v(2), &[("v", 1)], rat_int(2)))
            .unwrap();
        let binv = b.invert().unwrap();
        let mut expect = PolySeries::one(v(2));
        expect.insert_add(vec![1], rat_int(-2));
        expect.insert_add(vec![2], rat_int(4));
        assert_eq!(binv, expect);

        let zero = PolySeries::monomial(u(3), &[("u", 1)], rat_int(5));
        assert_eq!(zero.invert(), Err(SeriesError::ZeroConstantTerm));
    }

    #[test]
    fn shift_descending() {
        // (u+c)^-1 at K=3 -> u^-1 - c u^-2 + c^2 u^-3
        let a = PolySeries::monomial(u(3), &[("u", 1)], rat_int(1));
        let c = rat(5, 3);
        let s = a.shift("u", &c).unwrap();
        let mut expect = PolySeries::zero(u(3));
        expect.insert_add(vec![1], rat_int(1));
        expect.insert_add(vec![2], -c.clone());
        expect.insert_add(vec![3], c.clone() * c.clone());
        assert_eq!(s, expect);

        // constants are fixed by any shift
        let k = PolySeries::constant(u(3), rat(7, 2));
        assert_eq!(k.shift("u", &rat_int(9)).unwrap(), k);
    }

    #[test]
    fn shift_ascending() {
        // v^2 shifted by -2 -> 4 - 4v + v^2 (exact since v^2 is the top term)
        let a = PolySeries::monomial(v(2), &[("v", 2)], rat_int(1));
        let s = a.shift("v", &rat_int(-2)).unwrap();
        let mut expect = PolySeries::zero(v(2));
        expect.insert_add(vec![0], rat_int(4));
        expect.insert_add(vec![1], rat_int(-4));
        expect.insert_add(vec![2], rat_int(1));
        assert_eq!(s, expect);
    }

    #[test]
    fn shift_round_trip() {
        let mut a = PolySeries::zero(u(4));
        a.insert_add(vec![1], rat(3, 2));
        a.insert_add(vec![3], rat_int(-7));
        let c = rat(2, 5);
        let back = a.shift("u", &c).unwrap().shift("u", &(-c)).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn coeff_extraction_and_truncation_error() {
        let mut a = PolySeries::zero(u(2));
        a.insert_add(vec![1], rat_int(-1));
        assert_eq!(a.coeff(&[1]).unwrap(), Some(&rat_int(-1)));
        assert_eq!(a.coeff(&[2]).unwrap(), None);
        assert!(matches!(
            a.coeff(&[3]),
            Err(SeriesError::BeyondTruncation { .. })
        ));
    }

    #[test]
    fn direction_clash_detected() {
        let a = PolySeries::<Rational>::one(u(2));
        let b = PolySeries::<Rational>::one(v(2));
        let c = PolySeries::<Rational>::one(vec![VariableSpec::asc("u", 2)]);
        assert!(a.try_add(&b).is_ok());
        assert_eq!(a.try_add(&c), Err(SeriesError::DirectionClash("u".into())));
    }

    #[test]
    fn mixed_variable_alignment() {
        // (1 - u^-1)(1 + v) over distinct variable sets
        let a = PolySeries::one(u(2))
            .try_sub(&PolySeries::monomial(u(2), &[("u", 1)], rat_int(1)))
            .unwrap();
        let b = PolySeries::one(v(1))
            .try_add(&PolySeries::monomial(v(1), &[("v", 1)], rat_int(1)))
            .unwrap();
        let p = a.try_mul(&b).unwrap();
        assert_eq!(
            p.coeff_named(&[("u", 1), ("v", 1)]).unwrap(),
            Some(&rat_int(-1))
        );
        assert_eq!(p.coeff_named(&[("v", 1)]).unwrap(), Some(&rat_int(1)));
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let vars = vec![VariableSpec::desc("u", 3), VariableSpec::asc("v", 2)];
        let random_series = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut s = PolySeries::zero(vars.clone());
            for _ in 0..4 {
                let idx = vec![rng.gen_range(0..=3u32), rng.gen_range(0..=2u32)];
                s.insert_add(idx, rat_int(rng.gen_range(-4..=4)));
            }
            s
        };
        for _ in 0..40 {
            let a = random_series(&mut rng);
            let b = random_series(&mut rng);
            let c = random_series(&mut rng);
            let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
            let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc, "associativity");
            let lhs = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
            let rhs = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "distributivity");
            assert_eq!(
                a.try_add(&b).unwrap(),
                b.try_add(&a).unwrap(),
                "commutativity of addition"
            );
        }
    }
}
