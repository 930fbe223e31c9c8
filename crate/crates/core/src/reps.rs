//! Vector/covector/evaluation representations of the Yangian, its dual,
//! and the double, plus the separation (kernel-intersection) search that
//! mirrors the ordered-monomial independence argument.
//!
//! Generator images (c a rational point, or a formal variable):
//!   rho:   T^(r)_ij  ->  -c^(r-1) e_ji,   T^(-r)_ij -> -c^(-r) e_ji
//!   sigma: T^(r)_ij  ->   c^(r-1) e_ij,   T^(-r)_ij ->  (c-N)^(-r) e_ij
//!
//! The rho pair shares one evaluation point: the cross relations reduce
//! to the Yang-Baxter identity. On the sigma side the slot contraction
//! Σ_m e_im e_ml = N e_il leaves an N-term, so the dual block must
//! evaluate at the transposition-shifted point c - N (the same shift as
//! the pole of the inverted transposed R-matrix); c = N is a pole and
//! c = 0 only matters for rho's dual block.
//!
//! The literature names these vector/covector in one section and swaps
//! the roles when extending to the double; the engine keeps the neutral
//! kind names and treats both published labels as aliases.
//!
//! Tensor products are taken through the iterated coproduct, with the
//! opposite coproduct on the dual block (the double's bialgebra
//! structure), so images are multiplicative on all mixed words.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{
    raw_bracket, AlgElement, AlgError, AlgebraTag, Filtration, GenId, RawElement,
    RelFamily,
};
use crate::rat::{rat, rat_int, rat_pow, Rational};
use crate::series::{PolySeries, SeriesError, VariableSpec};
use crate::tensor::{TensorError, TensorOperator};

#[derive(Debug, Error, PartialEq)]
pub enum RepError {
    #[error("representation parameter must be nonzero for dual-side generators")]
    ZeroParameter,
    #[error("sigma's dual block evaluates at c - N, which must be nonzero")]
    SigmaPole,
    #[error("sigma's dual block has no symbolic expansion; use a rational point")]
    SigmaSymbolicDual,
    #[error("symbolic parameter `{0}` cannot carry level {1}: wrong direction")]
    SymbolDirection(String, i32),
    #[error("representation specs disagree on N")]
    DimensionMismatch,
    #[error("empty spec list needs no representation; use the counit")]
    NoSpecs,
    #[error("operation not defined on the zero element")]
    ZeroElement,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    Rho,
    Sigma,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RepParam {
    /// A rational evaluation point.
    Value(Rational),
    /// Formal variable with ascending powers (serves positive levels).
    SymbolAsc(String, u32),
    /// Formal variable with inverse powers (serves dual levels; level-1
    /// positive generators sit at power zero and are also fine).
    SymbolDesc(String, u32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepSpec {
    pub kind: RepKind,
    pub param: RepParam,
    pub n: u32,
}

impl RepSpec {
    pub fn rho(c: Rational, n: u32) -> Self {
        RepSpec { kind: RepKind::Rho, param: RepParam::Value(c), n }
    }
    pub fn sigma(c: Rational, n: u32) -> Self {
        RepSpec { kind: RepKind::Sigma, param: RepParam::Value(c), n }
    }
    pub fn rho_star_symbolic(name: &str, trunc: u32, n: u32) -> Self {
        RepSpec { kind: RepKind::Rho, param: RepParam::SymbolDesc(name.into(), trunc), n }
    }
    pub fn rho_symbolic(name: &str, trunc: u32, n: u32) -> Self {
        RepSpec { kind: RepKind::Rho, param: RepParam::SymbolAsc(name.into(), trunc), n }
    }
    pub fn sigma_symbolic(name: &str, trunc: u32, n: u32) -> Self {
        RepSpec { kind: RepKind::Sigma, param: RepParam::SymbolAsc(name.into(), trunc), n }
    }
}

fn symbolic_vars(specs: &[RepSpec]) -> Vec<VariableSpec> {
    let mut vars = Vec::new();
    for spec in specs {
        match &spec.param {
            RepParam::SymbolAsc(name, k) => vars.push(VariableSpec::asc(name, *k)),
            RepParam::SymbolDesc(name, k) => vars.push(VariableSpec::desc(name, *k)),
            RepParam::Value(_) => {}
        }
    }
    vars
}

/// p^e as a series factor; e may be negative only for invertible params.
fn param_power(
    param: &RepParam,
    e: i64,
    vars: &[VariableSpec],
    level: i32,
) -> Result<PolySeries<Rational>, RepError> {
    match param {
        RepParam::Value(c) => {
            if e < 0 && c.is_zero() {
                return Err(RepError::ZeroParameter);
            }
            Ok(PolySeries::constant(vars.to_vec(), rat_pow(c, e)))
        }
        RepParam::SymbolAsc(name, _) => {
            if e < 0 {
                return Err(RepError::SymbolDirection(name.clone(), level));
            }
            Ok(PolySeries::monomial(vars.to_vec(), &[(name, e as u32)], Rational::one()))
        }
        RepParam::SymbolDesc(name, _) => {
            if e > 0 {
                return Err(RepError::SymbolDirection(name.clone(), level));
            }
            Ok(PolySeries::monomial(vars.to_vec(), &[(name, (-e) as u32)], Rational::one()))
        }
    }
}

#[derive(Clone)]
enum SlotFactor {
    Identity,
    /// e_{row,col} scaled by a series coefficient.
    Unit(u8, u8, PolySeries<Rational>),
}

/// Accumulate a path's tensor factor product into the operator.
fn add_path(out: &mut TensorOperator, n: u32, factors: &[SlotFactor], scale: &Rational) {
    // enumerate the identity slots
    let id_slots: Vec<usize> =
        factors.iter().enumerate().filter(|(_, f)| matches!(f, SlotFactor::Identity)).map(|(b, _)| b).collect();
    let count = (n as usize).pow(id_slots.len() as u32);
    for assign in 0..count {
        let mut row = vec![0u8; factors.len()];
        let mut col = vec![0u8; factors.len()];
        let mut coeff: Option<PolySeries<Rational>> = None;
        let mut a = assign;
        for (slot, f) in factors.iter().enumerate() {
            match f {
                SlotFactor::Identity => {
                    let v = (a % n as usize) as u8 + 1;
                    a /= n as usize;
                    row[slot] = v;
                    col[slot] = v;
                }
                SlotFactor::Unit(r, c, s) => {
                    row[slot] = *r;
                    col[slot] = *c;
                    coeff = Some(match coeff {
                        None => s.clone(),
                        Some(prev) => prev.try_mul(s).expect("shared variable set"),
                    });
                }
            }
        }
        let coeff = coeff.expect("at least one active slot").scale(scale);
        out.insert_add(row, col, coeff);
    }
}

/// Image of a single generator under the tensor product of the specs.
pub fn gen_image(g: &GenId, specs: &[RepSpec]) -> Result<TensorOperator, RepError> {
    if specs.is_empty() {
        return Err(RepError::NoSpecs);
    }
    let n = specs[0].n;
    if specs.iter().any(|s| s.n != n) {
        return Err(RepError::DimensionMismatch);
    }
    let vars = symbolic_vars(specs);
    let slots = specs.len();
    let mut out = TensorOperator::zero(n, slots);

    if g.level > 0 {
        // Δ-chain: slot b carries T^(ℓ_b)_{k_(b-1), k_b}, k_0 = i, k_n = j,
        // Σ ℓ_b = r with ℓ_b = 0 meaning a delta
        let r = g.level as u32;
        let mut factors: Vec<SlotFactor> = Vec::with_capacity(slots);
        chain_pos(g, specs, &vars, 0, g.row, r, &mut factors, &mut out)?;
    } else {
        // Δ'-chain: slot b carries T*-factor with indices (k_b, k_(b-1)),
        // k_0 = j, k_n = i; active levels ℓ_b >= 1 with Σ (ℓ_b - 1) = s-1
        let s = g.abs_level();
        let mut factors: Vec<SlotFactor> = Vec::with_capacity(slots);
        chain_neg(g, specs, &vars, 0, g.col, s - 1, false, &mut factors, &mut out)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn chain_pos(
    g: &GenId,
    specs: &[RepSpec],
    vars: &[VariableSpec],
    slot: usize,
    kprev: u8,
    rem: u32,
    factors: &mut Vec<SlotFactor>,
    out: &mut TensorOperator,
) -> Result<(), RepError> {
    let n = specs[0].n;
    if slot == specs.len() {
        if rem == 0 && kprev == g.col && factors.iter().any(|f| !matches!(f, SlotFactor::Identity)) {
            add_path(out, n, factors, &Rational::one());
        }
        return Ok(());
    }
    // delta choice
    factors.push(SlotFactor::Identity);
    chain_pos(g, specs, vars, slot + 1, kprev, rem, factors, out)?;
    factors.pop();
    // active choices
    for lev in 1..=rem {
        let power = param_power(&specs[slot].param, lev as i64 - 1, vars, g.level)?;
        for knext in 1..=n as u8 {
            let factor = match specs[slot].kind {
                RepKind::Sigma => SlotFactor::Unit(kprev, knext, power.clone()),
                RepKind::Rho => SlotFactor::Unit(knext, kprev, power.neg()),
            };
            factors.push(factor);
            chain_pos(g, specs, vars, slot + 1, knext, rem - lev, factors, out)?;
            factors.pop();
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn chain_neg(
    g: &GenId,
    specs: &[RepSpec],
    vars: &[VariableSpec],
    slot: usize,
    kprev: u8,
    rem: u32,
    any_active: bool,
    factors: &mut Vec<SlotFactor>,
    out: &mut TensorOperator,
) -> Result<(), RepError> {
    let n = specs[0].n;
    if slot == specs.len() {
        if rem == 0 && kprev == g.row && any_active {
            add_path(out, n, factors, &Rational::one());
        }
        return Ok(());
    }
    // delta choice
    factors.push(SlotFactor::Identity);
    chain_neg(g, specs, vars, slot + 1, kprev, rem, any_active, factors, out)?;
    factors.pop();
    // active choices: level ℓ consumes ℓ-1 of the budget
    let eff_param = match (specs[slot].kind, &specs[slot].param) {
        (RepKind::Sigma, RepParam::Value(c)) => {
            let shifted = c - rat_int(n as i64);
            if shifted.is_zero() {
                return Err(RepError::SigmaPole);
            }
            RepParam::Value(shifted)
        }
        (RepKind::Sigma, _) => return Err(RepError::SigmaSymbolicDual),
        (RepKind::Rho, p) => p.clone(),
    };
    for consumed in 0..=rem {
        let lev = consumed + 1;
        let power = param_power(&eff_param, -(lev as i64), vars, g.level)?;
        for knext in 1..=n as u8 {
            let factor = match specs[slot].kind {
                RepKind::Sigma => SlotFactor::Unit(knext, kprev, power.clone()),
                RepKind::Rho => SlotFactor::Unit(kprev, knext, power.neg()),
            };
            factors.push(factor);
            chain_neg(g, specs, vars, slot + 1, knext, rem - consumed, true, factors, out)?;
            factors.pop();
        }
    }
    Ok(())
}

/// Image of a raw word: the ordered product of generator images.
pub fn rep_apply_word(word: &[GenId], specs: &[RepSpec]) -> Result<TensorOperator, RepError> {
    let n = specs.first().ok_or(RepError::NoSpecs)?.n;
    let mut acc = TensorOperator::identity(n, specs.len());
    for g in word {
        acc = acc.mul(&gen_image(g, specs)?)?;
    }
    Ok(acc)
}

/// Image of an element under the tensor-product representation.
pub fn rep_apply(x: &AlgElement, specs: &[RepSpec]) -> Result<TensorOperator, RepError> {
    let n = specs.first().ok_or(RepError::NoSpecs)?.n;
    if x.n_dim() != n {
        return Err(RepError::DimensionMismatch);
    }
    let mut acc = TensorOperator::zero(n, specs.len());
    for (m, c) in x.terms() {
        let img = rep_apply_word(&m.0, specs)?;
        acc = acc.add(&img.scale(c))?;
    }
    Ok(acc)
}

/// Check that the images satisfy one relation family: the image of
/// g1 g2 - g2 g1 - [g1, g2] must vanish for all levels up to max_level
/// and all index patterns.
pub fn rep_relation_check(
    specs: &[RepSpec],
    family: RelFamily,
    max_level: u32,
    n: u32,
) -> Result<bool, RepError> {
    for r in 1..=max_level {
        for s in 1..=max_level {
            for i in 1..=n as u8 {
                for j in 1..=n as u8 {
                    for k in 1..=n as u8 {
                        for l in 1..=n as u8 {
                            let (g1, g2) = match family {
                                RelFamily::Yangian => {
                                    (GenId::new(r as i32, i, j), GenId::new(s as i32, k, l))
                                }
                                RelFamily::Dual => {
                                    (GenId::new(-(r as i32), i, j), GenId::new(-(s as i32), k, l))
                                }
                                RelFamily::Cross => {
                                    (GenId::new(r as i32, i, j), GenId::new(-(s as i32), k, l))
                                }
                            };
                            let lhs = rep_apply_word(&[g1, g2], specs)?
                                .sub(&rep_apply_word(&[g2, g1], specs)?)?;
                            let mut rhs = TensorOperator::zero(n, specs.len());
                            for (c, w) in raw_bracket(&g1, &g2, n) {
                                rhs = rhs.add(&rep_apply_word(&w, specs)?.scale(&c))?;
                            }
                            if !lhs.equiv(&rhs) {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Deterministic parameter stream 1, -1, 2, 1/2, 3, 1/3, ... used before
/// any randomized trials.
pub fn deterministic_param(k: usize) -> Rational {
    match k {
        0 => rat_int(1),
        1 => rat_int(-1),
        _ => {
            let base = (k / 2 + 1) as i64;
            if k.is_multiple_of(2) {
                rat_int(base)
            } else {
                rat(1, base)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparationWitness {
    pub n_slots: usize,
    pub params: Vec<Rational>,
}

/// Search for a tensor power of the sigma representation that does not
/// kill x: returns the first witness in the deterministic-then-seeded
/// order, or None when n_max is exhausted (reported honestly).
pub fn separation_search(
    x: &AlgElement,
    n_max: usize,
    random_trials: usize,
    seed: u64,
) -> Result<Option<SeparationWitness>, RepError> {
    use rand::{Rng, SeedableRng};
    if x.is_zero() {
        return Err(RepError::ZeroElement);
    }
    // n = 0 is the counit
    if !x.constant_term().is_zero() {
        return Ok(Some(SeparationWitness { n_slots: 0, params: vec![] }));
    }
    let n = x.n_dim();
    const DET_BASE: usize = 6;
    for slots in 1..=n_max {
        // deterministic tuples in mixed-radix order
        let total = DET_BASE.pow(slots as u32);
        for t in 0..total {
            let mut params = Vec::with_capacity(slots);
            let mut a = t;
            for _ in 0..slots {
                params.push(deterministic_param(a % DET_BASE));
                a /= DET_BASE;
            }
            let specs: Vec<RepSpec> =
                params.iter().map(|c| RepSpec::sigma(c.clone(), n)).collect();
            if !rep_apply(x, &specs)?.is_zero() {
                return Ok(Some(SeparationWitness { n_slots: slots, params }));
            }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ slots as u64);
        for _ in 0..random_trials {
            let params: Vec<Rational> = (0..slots)
                .map(|_| {
                    let mut v = 0i64;
                    while v == 0 {
                        v = rng.gen_range(-9..=9);
                    }
                    rat(v, rng.gen_range(1..=4))
                })
                .collect();
            let specs: Vec<RepSpec> =
                params.iter().map(|c| RepSpec::sigma(c.clone(), n)).collect();
            if !rep_apply(x, &specs)?.is_zero() {
                return Ok(Some(SeparationWitness { n_slots: slots, params }));
            }
        }
    }
    Ok(None)
}

/// A current-algebra generator E_ij z^pow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurrentGen {
    pub z_pow: i64,
    pub row: u8,
    pub col: u8,
}

/// Evaluation image of a current-algebra word under the tensor product
/// of evaluation points: E_ij z^p acts as Σ_b param_b^p e_ij in slot b
/// (the primitive coproduct); words multiply through.
pub fn current_eval(
    word: &[CurrentGen],
    params: &[RepParam],
    n: u32,
) -> Result<TensorOperator, RepError> {
    if params.is_empty() {
        return Err(RepError::NoSpecs);
    }
    let vars: Vec<VariableSpec> = params
        .iter()
        .filter_map(|p| match p {
            RepParam::SymbolAsc(name, k) => Some(VariableSpec::asc(name, *k)),
            RepParam::SymbolDesc(name, k) => Some(VariableSpec::desc(name, *k)),
            RepParam::Value(_) => None,
        })
        .collect();
    let slots = params.len();
    let mut acc = TensorOperator::identity(n, slots);
    for g in word {
        if g.z_pow < 0 {
            for p in params {
                if matches!(p, RepParam::Value(c) if c.is_zero()) {
                    return Err(RepError::ZeroParameter);
                }
            }
        }
        let mut img = TensorOperator::zero(n, slots);
        for (b, p) in params.iter().enumerate() {
            let coeff = param_power(p, g.z_pow, &vars, 0)?;
            let mut factors = vec![SlotFactor::Identity; slots];
            factors[b] = SlotFactor::Unit(g.row, g.col, coeff);
            add_path(&mut img, n, &factors, &Rational::one());
        }
        acc = acc.mul(&img)?;
    }
    Ok(acc)
}

/// The graded correspondence behind the separation mechanism: with
/// symbolic parameters, the top deg'-homogeneous part of the sigma-tensor
/// image of x equals the evaluation image of the leading term of x read
/// as a current-algebra element (T^(r)_ij -> E_ij z^(r-1)).
pub fn separation_graded_check(x: &AlgElement, slots: usize) -> Result<bool, RepError> {
    if x.is_zero() {
        return Err(RepError::ZeroElement);
    }
    if !x.is_pure(AlgebraTag::Y) {
        return Err(RepError::DimensionMismatch);
    }
    let n = x.n_dim();
    let (deg, lead) = x.graded_leading(Filtration::DegPrime)?;
    if deg < 0 {
        return Err(RepError::ZeroElement);
    }
    let deg = deg as u32;
    let specs: Vec<RepSpec> = (0..slots)
        .map(|b| RepSpec::sigma_symbolic(&format!("c{}", b + 1), deg, n))
        .collect();
    let image = rep_apply(x, &specs)?;
    let mut top = TensorOperator::zero(n, slots);
    for ((row, col), e) in image.entries() {
        top.insert_add(row.clone(), col.clone(), e.homogeneous_part(deg));
    }

    let params: Vec<RepParam> = (0..slots)
        .map(|b| RepParam::SymbolAsc(format!("c{}", b + 1), deg))
        .collect();
    let mut current_img = TensorOperator::zero(n, slots);
    for (m, c) in lead.terms() {
        let word: Vec<CurrentGen> = m
            .0
            .iter()
            .map(|g| CurrentGen { z_pow: g.level as i64 - 1, row: g.row, col: g.col })
            .collect();
        current_img = current_img.add(&current_eval(&word, &params, n)?.scale(c))?;
    }
    Ok(top.equiv(&current_img))
}

/// The composition identity: embedding E_ij -> T^(1)_ij followed by the
/// evaluation T(u) -> 1 + E u^-1 is the identity on gl_N words. In
/// engine terms: the level-1 sigma image at c matches the evaluation
/// image of the same word at z^0.
pub fn embed_eval_identity(n: u32) -> Result<bool, RepError> {
    for c in [rat_int(1), rat_int(2), rat(1, 2)] {
        for i in 1..=n as u8 {
            for j in 1..=n as u8 {
                let word = [GenId::new(1, i, j)];
                let lhs = rep_apply_word(&word, &[RepSpec::sigma(c.clone(), n)])?;
                let cw = [CurrentGen { z_pow: 0, row: i, col: j }];
                let rhs = current_eval(&cw, &[RepParam::Value(c.clone())], n)?;
                if !lhs.equiv(&rhs) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// expose the raw-element applier for verification code
pub fn rep_apply_raw(raw: &RawElement, specs: &[RepSpec]) -> Result<TensorOperator, RepError> {
    let n = specs.first().ok_or(RepError::NoSpecs)?.n;
    let mut acc = TensorOperator::zero(n, specs.len());
    for (c, w) in raw {
        acc = acc.add(&rep_apply_word(w, specs)?.scale(c))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DualTrunc;
    use crate::tensor::matrix_unit;

    fn gen(level: i32, i: u8, j: u8) -> GenId {
        GenId::new(level, i, j)
    }

    #[test]
    fn rho_on_generators() {
        // rho_c(T^(2)_12) = -c e_21 at c = 3
        let img = gen_image(&gen(2, 1, 2), &[RepSpec::rho(rat_int(3), 2)]).unwrap();
        let expect = matrix_unit(2, 2, 1, 1, 1).unwrap().scale(&rat_int(-3));
        assert!(img.equiv(&expect));
        // rho*_u(T^(-1)_11) = -u^-1 e_11
        let img = gen_image(&gen(-1, 1, 1), &[RepSpec::rho_star_symbolic("u", 4, 2)]).unwrap();
        let e = img.entry(&[1], &[1]).unwrap();
        assert_eq!(e.coeff_named(&[("u", 1)]).unwrap(), Some(&rat_int(-1)));
        assert_eq!(img.num_entries(), 1);
    }

    #[test]
    fn sigma_on_generators() {
        // sigma_c(T^(r)_ij) = c^(r-1) e_ij
        let img = gen_image(&gen(3, 2, 1), &[RepSpec::sigma(rat_int(2), 2)]).unwrap();
        let expect = matrix_unit(2, 2, 1, 1, 1).unwrap().scale(&rat_int(4));
        assert!(img.equiv(&expect));
        // dual block: sigma_c(T^(-r)_ij) = (c-N)^-r e_ij, here (4-2)^-2
        let img = gen_image(&gen(-2, 1, 2), &[RepSpec::sigma(rat_int(4), 2)]).unwrap();
        let expect = matrix_unit(2, 1, 2, 1, 1).unwrap().scale(&rat(1, 4));
        assert!(img.equiv(&expect));
    }

    #[test]
    fn tensor_image_of_level_one_is_primitive() {
        // (σ_c1 ⊗ σ_c2)(T^(1)_ij) = e_ij ⊗ 1 + 1 ⊗ e_ij
        let specs = [RepSpec::sigma(rat_int(2), 2), RepSpec::sigma(rat_int(3), 2)];
        let img = gen_image(&gen(1, 1, 2), &specs).unwrap();
        let expect = matrix_unit(2, 1, 2, 1, 2)
            .unwrap()
            .add(&matrix_unit(2, 1, 2, 2, 2).unwrap())
            .unwrap();
        assert!(img.equiv(&expect));
    }

    #[test]
    fn parameter_poles_rejected_on_dual_block() {
        let err = gen_image(&gen(-1, 1, 1), &[RepSpec::rho(rat_int(0), 2)]).unwrap_err();
        assert_eq!(err, RepError::ZeroParameter);
        // c = N is the sigma pole
        let err = gen_image(&gen(-1, 1, 1), &[RepSpec::sigma(rat_int(2), 2)]).unwrap_err();
        assert_eq!(err, RepError::SigmaPole);
    }

    #[test]
    fn relation_checks_for_each_kind() {
        let n = 2;
        // rho_c on Yangian relations
        assert!(rep_relation_check(&[RepSpec::rho(rat_int(2), n)], RelFamily::Yangian, 3, n).unwrap());
        // sigma_c on all three families (both blocks)
        let sigma = [RepSpec::sigma(rat_int(3), n)];
        assert!(rep_relation_check(&sigma, RelFamily::Yangian, 3, n).unwrap());
        assert!(rep_relation_check(&sigma, RelFamily::Dual, 3, n).unwrap());
        assert!(rep_relation_check(&sigma, RelFamily::Cross, 3, n).unwrap());
        // rho_c on the cross relations (shared evaluation point)
        assert!(rep_relation_check(&[RepSpec::rho(rat(1, 2), n)], RelFamily::Cross, 3, n).unwrap());
        // symbolic rho*_u on dual relations, exact at every kept order
        let rho_star = [RepSpec::rho_star_symbolic("u", 9, n)];
        assert!(rep_relation_check(&rho_star, RelFamily::Dual, 3, n).unwrap());
    }

    #[test]
    fn tensor_relation_check() {
        // two-fold sigma through the double's coproduct still satisfies
        // the cross relations
        let n = 2;
        let specs = [RepSpec::sigma(rat_int(3), n), RepSpec::sigma(rat(1, 3), n)];
        assert!(rep_relation_check(&specs, RelFamily::Cross, 2, n).unwrap());
        assert!(rep_relation_check(&specs, RelFamily::Yangian, 2, n).unwrap());
        assert!(rep_relation_check(&specs, RelFamily::Dual, 2, n).unwrap());
    }

    /// A number-valued representation cannot see the tail the one-sided
    /// completion truncates away, so the multiplicativity of rep_apply is
    /// exact in (and sampled from) three regimes: products free of
    /// dual-side rewriting, arbitrary pure-Y products, and arbitrary dual
    /// products under the symbolic rho*_u, which is continuous on the
    /// completion (the dropped tail only touches u-orders past the
    /// truncation).
    #[test]
    fn homomorphism_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let n = 2;
        let d = DualTrunc::Finite(12);
        let word_in = |rng: &mut rand_chacha::ChaCha8Rng, levels: std::ops::RangeInclusive<i32>, len: usize| {
            let mut word = Vec::new();
            for _ in 0..len {
                let mut lev = 0;
                while lev == 0 {
                    lev = rng.gen_range(levels.clone());
                }
                word.push(gen(lev, rng.gen_range(1..=2), rng.gen_range(1..=2)));
            }
            word
        };
        for kindpick in 0..3 {
            let specs: Vec<RepSpec> = match kindpick {
                0 => vec![RepSpec::rho(rat_int(2), n)],
                1 => vec![RepSpec::sigma(rat(3, 2), n)],
                _ => vec![RepSpec::sigma(rat_int(3), n), RepSpec::rho(rat_int(-1), n)],
            };
            for trial in 0..12 {
                let la = rng.gen_range(1..=2);
                let lb = rng.gen_range(1..=2);
                let (w1, w2) = if trial % 2 == 0 {
                    // pure-Y pair
                    (word_in(&mut rng, 1..=3, la), word_in(&mut rng, 1..=3, lb))
                } else {
                    // one dual generator against a Y word
                    (word_in(&mut rng, -3..=-1, 1), word_in(&mut rng, 1..=3, lb))
                };
                let x = crate::algebra::normal_form(vec![(rat_int(1), w1)], n, d).unwrap();
                let y = crate::algebra::normal_form(vec![(rat_int(1), w2)], n, d).unwrap();
                let lhs = rep_apply(&x.mul(&y).unwrap(), &specs).unwrap();
                let rhs = rep_apply(&x, &specs).unwrap().mul(&rep_apply(&y, &specs).unwrap()).unwrap();
                assert!(lhs.equiv(&rhs), "kind {kindpick} trial {trial}");
            }
        }
        // arbitrary dual-dual products under the symbolic rho*_u, exact
        // at every kept u-order
        let specs = [RepSpec::rho_star_symbolic("u", 12, n)];
        for trial in 0..12 {
            let la = rng.gen_range(1..=2);
            let lb = rng.gen_range(1..=2);
            let w1 = word_in(&mut rng, -3..=-1, la);
            let w2 = word_in(&mut rng, -3..=-1, lb);
            let x = crate::algebra::normal_form(vec![(rat_int(1), w1)], n, d).unwrap();
            let y = crate::algebra::normal_form(vec![(rat_int(1), w2)], n, d).unwrap();
            let lhs = rep_apply(&x.mul(&y).unwrap(), &specs).unwrap();
            let rhs = rep_apply(&x, &specs).unwrap().mul(&rep_apply(&y, &specs).unwrap()).unwrap();
            assert!(lhs.equiv(&rhs), "rho*_u trial {trial}");
        }
    }

    #[test]
    fn current_evaluation_values() {
        // E_12 z^2 at c=2 -> 4 e_12
        let img = current_eval(
            &[CurrentGen { z_pow: 2, row: 1, col: 2 }],
            &[RepParam::Value(rat_int(2))],
            2,
        )
        .unwrap();
        assert!(img.equiv(&matrix_unit(2, 1, 2, 1, 1).unwrap().scale(&rat_int(4))));
        // E_11 z^0 is e_11 for any c
        let img = current_eval(
            &[CurrentGen { z_pow: 0, row: 1, col: 1 }],
            &[RepParam::Value(rat_int(7))],
            2,
        )
        .unwrap();
        assert!(img.equiv(&matrix_unit(2, 1, 1, 1, 1).unwrap()));
        // Laurent words need nonzero c
        let err = current_eval(
            &[CurrentGen { z_pow: -1, row: 1, col: 1 }],
            &[RepParam::Value(rat_int(0))],
            2,
        )
        .unwrap_err();
        assert_eq!(err, RepError::ZeroParameter);
    }

    #[test]
    fn sigma_matches_current_evaluation() {
        // σ_c(T^(r)_ij) = eval image of E_ij z^(r-1)
        for r in 1..=3i32 {
            let img = gen_image(&gen(r, 2, 1), &[RepSpec::sigma(rat(5, 2), 2)]).unwrap();
            let cur = current_eval(
                &[CurrentGen { z_pow: r as i64 - 1, row: 2, col: 1 }],
                &[RepParam::Value(rat(5, 2))],
                2,
            )
            .unwrap();
            assert!(img.equiv(&cur), "r={r}");
        }
    }

    #[test]
    fn separation_finds_simple_witness() {
        let x = AlgElement::generator(gen(1, 1, 2), 2, DualTrunc::Infinite);
        let w = separation_search(&x, 4, 5, 0).unwrap().unwrap();
        assert_eq!(w.n_slots, 1);
        // scalars separate with the counit
        let s = AlgElement::scalar(2, DualTrunc::Infinite, rat_int(5));
        let w = separation_search(&s, 4, 5, 0).unwrap().unwrap();
        assert_eq!(w.n_slots, 0);
        // zero element is a contract violation
        assert_eq!(
            separation_search(&AlgElement::zero(2, DualTrunc::Infinite), 4, 5, 0).unwrap_err(),
            RepError::ZeroElement
        );
    }

    #[test]
    fn central_element_is_separated() {
        // Z^(2) = -Σ_i T^(1)_ii is central and nonzero; a single sigma
        // slot already sends it to -Id
        let n = 2;
        let z2 = crate::hopf::z_series_full(n, 2).unwrap().remove(2);
        assert!(!z2.is_zero());
        let w = separation_search(&z2, 2, 5, 0).unwrap().unwrap();
        assert!(w.n_slots <= 2);
        let specs: Vec<RepSpec> = w.params.iter().map(|c| RepSpec::sigma(c.clone(), n)).collect();
        assert!(!rep_apply(&z2, &specs).unwrap().is_zero());
    }

    #[test]
    fn graded_correspondence() {
        let n = 2;
        let x = AlgElement::generator(gen(3, 1, 2), n, DualTrunc::Infinite);
        assert!(separation_graded_check(&x, 2).unwrap());
        let y = x
            .mul(&AlgElement::generator(gen(2, 2, 2), n, DualTrunc::Infinite))
            .unwrap();
        assert!(separation_graded_check(&y, 2).unwrap());
        assert!(separation_graded_check(&y, 3).unwrap());
    }

    #[test]
    fn embedding_evaluation_round_trip() {
        assert!(embed_eval_identity(2).unwrap());
        assert!(embed_eval_identity(3).unwrap());
    }
}
