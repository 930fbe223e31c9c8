//! The canonical bilinear pairing between the Yangian and its dual,
//! computed by coefficient extraction from ordered products of Yang
//! R-matrices; graded Gram tables, dual systems, and the truncated
//! universal R-matrix assembled from them.
//!
//! The value <x, z> for x = T^(r_1)_{i_1 j_1} ... T^(r_m)_{i_m j_m} and
//! z = T^(-s_1)_{k_1 l_1} ... T^(-s_n)_{k_n l_n} is the coefficient of
//!
//!   e_{i_1 j_1} ⊗ ... ⊗ e_{k_n l_n} · u_1^-r_1 ... u_m^-r_m v_1^(s_1-1) ... v_n^(s_n-1)
//!
//! in the ordered product of blocks Π_b (Π_a R_{a,b+m}(u_a - v_b) - [s_b = 1]),
//! where the per-position subtraction handles the two-term constant
//! coefficient of the dual generating series. Blocks for distinct
//! positions commute after reordering across disjoint slots, so the
//! b-major order used here agrees with the a-major defining order.
//!
//! The contraction is sparse: a state maps (column multi-index, exponent
//! budget) to a rational, and each R-factor either passes it through or
//! swaps two slots while consuming one unit of u-budget; exponent budgets
//! prune everything that can no longer reach the target multi-degree.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{
    basis_enumerate, gen_normal_cmp, AlgElement, AlgError, AlgebraTag, DualTrunc, GenId,
    Monomial,
};
use crate::hopf::{delta, DeltaSide, HopfError, TensorElement};
use crate::rat::Rational;

#[derive(Debug, Error, PartialEq)]
pub enum PairError {
    #[error("left pairing slot must be a pure Yangian monomial")]
    LeftSide,
    #[error("right pairing slot must be a pure dual monomial")]
    RightSide,
    #[error("dual truncation {0} is insufficient for a degree-{1} left element")]
    TruncationInsufficient(u32, i64),
    #[error("gram table structure violated: {0}")]
    Structure(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

/// One contraction state: tensor column indices plus consumed exponents
/// (u_1..u_m then v_1..v_n).
type State = HashMap<(Vec<u8>, Vec<u32>), Rational>;

fn contract(
    x: &Monomial,
    z: &Monomial,
    _n: u32,
    with_subtraction: bool,
) -> Result<Rational, PairError> {
    let m = x.len();
    let nn = z.len();
    let mut r = Vec::with_capacity(m);
    let mut x_idx = Vec::with_capacity(m);
    for g in &x.0 {
        if g.level <= 0 {
            return Err(PairError::LeftSide);
        }
        r.push(g.level as u32);
        x_idx.push((g.row, g.col));
    }
    let mut s = Vec::with_capacity(nn);
    let mut z_idx = Vec::with_capacity(nn);
    for g in &z.0 {
        if g.level >= 0 {
            return Err(PairError::RightSide);
        }
        s.push(g.abs_level());
        z_idx.push((g.row, g.col));
    }

    // start from the column basis vector
    let mut col = Vec::with_capacity(m + nn);
    for &(_, j) in &x_idx {
        col.push(j);
    }
    for &(_, l) in &z_idx {
        col.push(l);
    }
    let mut state: State = HashMap::new();
    state.insert((col, vec![0u32; m + nn]), Rational::one());

    // apply A_1 A_2 ... A_n to the column vector: A_b first for b = n..1,
    // and inside each block R_{a,b+m} first for a = m..1
    for b in (0..nn).rev() {
        let mut block_state = state.clone();
        for a in (0..m).rev() {
            block_state = apply_r(&block_state, a, b, m, &r, &s);
        }
        if with_subtraction && s[b] == 1 {
            for (key, c) in state {
                match block_state.get_mut(&key) {
                    Some(prev) => {
                        *prev -= c;
                        if prev.is_zero() {
                            block_state.remove(&key);
                        }
                    }
                    None => {
                        block_state.insert(key, -c);
                    }
                }
            }
        }
        state = block_state;
    }

    // read off the target coefficient
    let mut row = Vec::with_capacity(m + nn);
    for &(i, _) in &x_idx {
        row.push(i);
    }
    for &(k, _) in &z_idx {
        row.push(k);
    }
    let mut target_exps = Vec::with_capacity(m + nn);
    for &ra in &r {
        target_exps.push(ra);
    }
    for &sb in &s {
        target_exps.push(sb - 1);
    }
    Ok(state
        .get(&(row, target_exps))
        .cloned()
        .unwrap_or_else(Rational::zero))
}

/// Apply R_{a, b+m}(u_a - v_b) = 1 - Σ_ρ u_a^-ρ v_b^(ρ-1) P_{a,b+m}.
fn apply_r(state: &State, a: usize, b: usize, m: usize, r: &[u32], s: &[u32]) -> State {
    let mut out: State = HashMap::with_capacity(state.len() * 2);
    let mut add = |key: (Vec<u8>, Vec<u32>), c: Rational| {
        if c.is_zero() {
            return;
        }
        match out.get_mut(&key) {
            Some(prev) => {
                *prev += c;
                if prev.is_zero() {
                    out.remove(&key);
                }
            }
            None => {
                out.insert(key, c);
            }
        }
    };
    for ((idx, exps), c) in state {
        // identity part
        add((idx.clone(), exps.clone()), c.clone());
        // permutation parts within the remaining exponent budget
        let u_budget = r[a].saturating_sub(exps[a]);
        let v_budget = (s[b] - 1).saturating_sub(exps[m + b]);
        let rho_max = u_budget.min(v_budget + 1);
        for rho in 1..=rho_max {
            let mut nidx = idx.clone();
            nidx.swap(a, m + b);
            let mut nexps = exps.clone();
            nexps[a] += rho;
            nexps[m + b] += rho - 1;
            add((nidx, nexps), -c.clone());
        }
    }
    out
}

/// Pairing of a pure-Y monomial with a pure-dual monomial.
pub fn pair_monomials(x: &Monomial, z: &Monomial, n: u32) -> Result<Rational, PairError> {
    contract(x, z, n, true)
}

/// Independent evaluation of the same value: positions with s_b = 1 are
/// resolved by recursion on n (subtracting the delta part of the
/// constant coefficient) instead of the in-product block subtraction.
pub fn pair_monomials_recursive(
    x: &Monomial,
    z: &Monomial,
    n: u32,
) -> Result<Rational, PairError> {
    let ones: Vec<usize> = z
        .0
        .iter()
        .enumerate()
        .filter(|(_, g)| g.abs_level() == 1)
        .map(|(b, _)| b)
        .collect();
    let mut value = contract(x, z, n, false)?;
    // inclusion-exclusion over nonempty subsets of the s_b = 1 positions
    for mask in 1u64..(1u64 << ones.len()) {
        let mut delta_factor = Rational::one();
        let mut keep = z.0.clone();
        let mut removed = Vec::new();
        for (bit, &pos) in ones.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                let g = z.0[pos];
                if g.row != g.col {
                    delta_factor = Rational::zero();
                    break;
                }
                removed.push(pos);
            }
        }
        if delta_factor.is_zero() {
            continue;
        }
        removed.sort_unstable();
        for &pos in removed.iter().rev() {
            keep.remove(pos);
        }
        let sub = pair_monomials_recursive(x, &Monomial(keep), n)?;
        value -= delta_factor * sub;
    }
    Ok(value)
}

/// Bilinear extension to elements. The right element's truncation must
/// dominate the left degree so that nothing the truncation dropped could
/// have paired nonzero.
pub fn pair_elements(x: &AlgElement, z: &AlgElement) -> Result<Rational, PairError> {
    if !x.is_pure(AlgebraTag::Y) {
        return Err(PairError::LeftSide);
    }
    if !z.is_pure(AlgebraTag::Dual) {
        return Err(PairError::RightSide);
    }
    let deg_x = x
        .terms()
        .map(|(m, _)| m.deg().expect("pure Y"))
        .max()
        .unwrap_or(0);
    if let DualTrunc::Finite(d) = z.dual_trunc() {
        if (d as i64) < deg_x {
            return Err(PairError::TruncationInsufficient(d, deg_x));
        }
    }
    let n = x.n_dim();
    let mut acc = Rational::zero();
    for (mx, cx) in x.terms() {
        for (mz, cz) in z.terms() {
            let v = pair_monomials(mx, mz, n)?;
            if !v.is_zero() {
                acc += cx * cz * v;
            }
        }
    }
    Ok(acc)
}

/// The index-transposed dual partner: (r, i, j) -> (-r, j, i), stored
/// in canonical normal order.
pub fn dual_partner(m: &Monomial) -> Monomial {
    let mut gens: Vec<GenId> = m
        .0
        .iter()
        .map(|g| GenId::new(-g.level, g.col, g.row))
        .collect();
    gens.sort_by(gen_normal_cmp);
    Monomial(gens)
}

/// Per-degree pairing matrix over the graded bases, with its inverse.
#[derive(Clone, Debug)]
pub struct GramTable {
    pub degree: u32,
    pub n: u32,
    pub rows: Vec<Monomial>,
    pub cols: Vec<Monomial>,
    pub values: Vec<Vec<Rational>>,
    pub inverse: Vec<Vec<Rational>>,
}

/// Expected diagonal entry: (-1)^m times the product of multiplicity
/// factorials of the monomial's generator multiset.
pub fn expected_diagonal(m: &Monomial) -> Rational {
    let mut acc = if m.len().is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let mut run = 1u64;
    for w in m.0.windows(2) {
        if w[0] == w[1] {
            run += 1;
            acc *= Rational::from_integer(run.into());
        } else {
            run = 1;
        }
    }
    acc
}

fn pairing_matrix(rows: &[Monomial], cols: &[Monomial], n: u32) -> Result<Vec<Vec<Rational>>, PairError> {
    rows.par_iter()
        .map(|row| cols.iter().map(|col| pair_monomials(row, col, n)).collect())
        .collect()
}

/// Inverse of a lower-triangular matrix with nonzero diagonal, by
/// forward substitution.
#[allow(clippy::needless_range_loop)]
fn invert_lower_triangular(f: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>, PairError> {
    let size = f.len();
    let mut g = vec![vec![Rational::zero(); size]; size];
    for col in 0..size {
        for row in 0..size {
            let mut rhs = if row == col { Rational::one() } else { Rational::zero() };
            for t in 0..row {
                if !f[row][t].is_zero() && !g[t][col].is_zero() {
                    rhs -= &f[row][t] * &g[t][col];
                }
            }
            if f[row][row].is_zero() {
                return Err(PairError::Structure(format!("zero diagonal at {row}")));
            }
            g[row][col] = rhs / &f[row][row];
        }
    }
    Ok(g)
}

/// Gram matrix of the graded pairing at one degree, with triangularity
/// and the diagonal formula asserted.
pub fn gram_matrix(s: u32, n: u32) -> Result<GramTable, PairError> {
    let rows = basis_enumerate(AlgebraTag::Y, s, n);
    let cols: Vec<Monomial> = rows.iter().map(dual_partner).collect();
    let values = pairing_matrix(&rows, &cols, n)?;
    for (ri, row) in values.iter().enumerate() {
        for (ci, v) in row.iter().enumerate() {
            if ci > ri && !v.is_zero() {
                return Err(PairError::Structure(format!(
                    "entry ({ri},{ci}) above the diagonal is nonzero at degree {s}"
                )));
            }
            if ci == ri && *v != expected_diagonal(&rows[ri]) {
                return Err(PairError::Structure(format!(
                    "diagonal entry {ri} at degree {s} differs from (-1)^m g!h!..."
                )));
            }
        }
    }
    let inverse = invert_lower_triangular(&values)?;
    Ok(GramTable { degree: s, n, rows, cols, values, inverse })
}

/// Biorthogonal system up to a Yangian-degree cutoff: basis monomials
/// X_s of degree <= D together with truncated dual elements X'_s such
/// that <X_r, X'_s> = δ_rs for all r, s in range.
#[derive(Clone, Debug)]
pub struct DualSystem {
    pub d: u32,
    pub n: u32,
    pub basis: Vec<Monomial>,
    pub duals: Vec<AlgElement>,
}

/// All basis monomials of degree 0..=d in the global order
/// (degree-major, then the per-degree graded order).
pub fn basis_upto(d: u32, n: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for s in 0..=d {
        out.extend(basis_enumerate(AlgebraTag::Y, s, n));
    }
    out
}

pub fn dual_system(d: u32, n: u32) -> Result<DualSystem, PairError> {
    let basis = basis_upto(d, n);
    let partners: Vec<Monomial> = basis.iter().map(dual_partner).collect();
    // the full matrix across degrees is lower triangular in this order:
    // a lower-degree row pairs to zero against a higher-dual-degree
    // column, and within a degree the Gram block is lower triangular
    let f = pairing_matrix(&basis, &partners, n)?;
    for (ri, row) in f.iter().enumerate() {
        for (ci, v) in row.iter().enumerate() {
            if ci > ri && !v.is_zero() {
                return Err(PairError::Structure(format!(
                    "full pairing matrix not lower triangular at ({ri},{ci})"
                )));
            }
        }
    }
    let g = invert_lower_triangular(&f)?;
    let dt = DualTrunc::Finite(d);
    let mut duals = Vec::with_capacity(basis.len());
    #[allow(clippy::needless_range_loop)]
    for s in 0..basis.len() {
        let mut acc = AlgElement::zero(n, dt);
        for (r, partner) in partners.iter().enumerate() {
            if !g[r][s].is_zero() {
                acc = acc.add(&AlgElement::generator_word(partner, n, dt).scale(&g[r][s]))?;
            }
        }
        duals.push(acc);
    }
    Ok(DualSystem { d, n, basis, duals })
}

impl DualSystem {
    /// Recompute <X_r, X'_s> for every pair and compare with δ_rs.
    pub fn verify_biorthogonal(&self) -> Result<bool, PairError> {
        let dim = self.basis.len();
        let ok = (0..dim)
            .into_par_iter()
            .map(|r| {
                let x = AlgElement::generator_word(&self.basis[r], self.n, DualTrunc::Infinite);
                for s in 0..dim {
                    let v = pair_elements(&x, &self.duals[s])?;
                    let expect = if r == s { Rational::one() } else { Rational::zero() };
                    if v != expect {
                        return Ok(false);
                    }
                }
                Ok(true)
            })
            .collect::<Result<Vec<_>, PairError>>()?;
        Ok(ok.into_iter().all(|b| b))
    }
}

/// The truncated universal R-matrix Σ_{deg X_s <= D} X'_s ⊗ X_s as a
/// tensor element (dual side left, Yangian side right).
pub fn universal_r(d: u32, n: u32) -> Result<TensorElement, PairError> {
    let sys = dual_system(d, n)?;
    let mut out = TensorElement::zero(n, DualTrunc::Finite(d));
    for (s, x) in sys.basis.iter().enumerate() {
        for (mono, c) in sys.duals[s].terms() {
            out.insert_add(mono.clone(), x.clone(), c.clone());
        }
    }
    Ok(out)
}

/// Both bialgebra-duality identities, each side through an independent
/// code path (algebra product + pairing vs coproduct + paired slots):
///   <X, Z W> = <Δ(X), Z ⊗ W>   and   <X Y, Z> = <X ⊗ Y, Δ(Z)>.
pub fn duality_check(
    x: &AlgElement,
    y: &AlgElement,
    z: &AlgElement,
    w: &AlgElement,
) -> Result<bool, PairError> {
    let n = x.n_dim();
    let d = z.dual_trunc().meet(w.dual_trunc());

    // first identity
    let zw = z.mul(w)?;
    let lhs1 = pair_elements(x, &zw)?;
    let dx = delta(x, DeltaSide::Y)?;
    let mut rhs1 = Rational::zero();
    for ((x1, x2), c) in dx.terms() {
        let p1 = pair_elements(&AlgElement::generator_word(x1, n, DualTrunc::Infinite), z)?;
        if p1.is_zero() {
            continue;
        }
        let p2 = pair_elements(&AlgElement::generator_word(x2, n, DualTrunc::Infinite), w)?;
        rhs1 += c * p1 * p2;
    }

    // second identity
    let xy = x.mul(y)?;
    let lhs2 = pair_elements(&xy, z)?;
    let dz = delta(z, DeltaSide::Dual)?;
    let mut rhs2 = Rational::zero();
    for ((z1, z2), c) in dz.terms() {
        let p1 = pair_elements(x, &AlgElement::generator_word(z1, n, d))?;
        if p1.is_zero() {
            continue;
        }
        let p2 = pair_elements(y, &AlgElement::generator_word(z2, n, d))?;
        rhs2 += c * p1 * p2;
    }

    Ok(lhs1 == rhs1 && lhs2 == rhs2)
}
