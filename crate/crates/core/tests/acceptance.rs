//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible under `--nocapture`). Every comparison is an
//! exact rational equality within the stated truncations; there are no
//! numeric tolerances anywhere.

use yangian::algebra::{
    basis_enumerate, commutator_equiv_check, graded_dimension_oracle, AlgebraTag,
};
use yangian::hopf::s_square_check;
use yangian::pairing::gram_matrix;
use yangian::verify::{
    all_passed, format_results, suite_center, suite_double, suite_duality, suite_hopf,
    suite_pbw, suite_rprops, suite_ybe, CheckResult, EngineConfig,
};

fn report(criterion: &str, results: &[CheckResult]) {
    let pass = all_passed(results);
    println!(
        "ACCEPTANCE {criterion}: {}",
        if pass { "PASS" } else { "FAIL" }
    );
    if !pass {
        println!("{}", format_results(results));
    }
    assert!(pass, "criterion failed:\n{}", format_results(results));
}

#[test]
fn criterion_01_yang_baxter_exact_n1_to_n4() {
    // polynomial-form Yang-Baxter for N = 1..4, zero residual
    let config = EngineConfig { n: 4, ..Default::default() };
    let results: Vec<CheckResult> = suite_ybe(&config)
        .into_iter()
        .filter(|r| r.name.starts_with("ybe/polynomial-form"))
        .collect();
    assert_eq!(results.len(), 4);
    report("01 yang-baxter", &results);
}

#[test]
fn criterion_02_relation_equivalence() {
    // difference form of the defining relations versus the closed
    // commutator form, r,s <= 3, every index pattern, N = 2
    let mut ok = true;
    for r in 0..=3 {
        for s in 0..=3 {
            for i in 1..=2 {
                for j in 1..=2 {
                    for k in 1..=2 {
                        for l in 1..=2 {
                            ok &= commutator_equiv_check(r, s, i, j, k, l, 2);
                        }
                    }
                }
            }
        }
    }
    let results = [CheckResult {
        name: "relation-equivalence".into(),
        pass: ok,
        detail: "r,s <= 3, N=2, exact".into(),
    }];
    report("02 relation-equivalence", &results);
}

#[test]
fn criterion_03_pbw_via_gram() {
    // Gram tables at s = 0..4, N = 2: lower triangular in the graded
    // ordering, diagonal (-1)^m (multiplicity factorials), rank equal to
    // the multiset count
    let mut results = Vec::new();
    let expected_dims = [1u64, 4, 14, 40, 105];
    for s in 0..=4u32 {
        let name = format!("gram/deg={s}");
        match gram_matrix(s, 2) {
            Ok(g) => {
                let dim = g.rows.len() as u64;
                let oracle = graded_dimension_oracle(s, 2);
                let pass = dim == oracle && dim == expected_dims[s as usize];
                results.push(CheckResult {
                    name,
                    pass,
                    detail: format!("rank {dim}, oracle {oracle}"),
                });
            }
            Err(e) => results.push(CheckResult { name, pass: false, detail: e.to_string() }),
        }
    }
    report("03 pbw-via-gram", &results);
}

#[test]
fn criterion_04_pairing_values() {
    // <1,1> = 1, generator pairing for r,s <= 4, and the low-degree
    // vanishing on all basis pairs up to degree 4, N = 2
    let config = EngineConfig { n: 2, series_order: 4, ..Default::default() };
    let results: Vec<CheckResult> = suite_duality(&config)
        .into_iter()
        .filter(|r| {
            r.name == "duality/unit-pairing"
                || r.name == "duality/generator-pairing"
                || r.name == "duality/low-degree-vanishing"
        })
        .collect();
    assert_eq!(results.len(), 3);
    report("04 pairing-values", &results);
}

#[test]
fn criterion_05_hopf_axioms() {
    // coassociativity, counit, and both antipode axioms on all
    // generators of level <= 3, N = 2, D = 5
    let config = EngineConfig { n: 2, dual_trunc: 5, ..Default::default() };
    let results: Vec<CheckResult> = suite_hopf(&config)
        .into_iter()
        .filter(|r| {
            r.name == "hopf/coassociativity"
                || r.name == "hopf/counit-axioms"
                || r.name == "hopf/antipode-axioms"
                || r.name == "hopf/delta-homomorphism"
                || r.name == "hopf/dual-antipode-inverse"
        })
        .collect();
    assert_eq!(results.len(), 5);
    report("05 hopf-axioms", &results);
}

#[test]
fn criterion_06_central_series() {
    // Z^(1) = 0; [Z^(r), T^(±s)] = 0 for r <= 4, s <= 3 (the dual side in
    // the double at D = 5); deg'-leading part (1-r) Σ T~^(r-1)_ii;
    // grouplikeness to order u^-4
    let config = EngineConfig { n: 2, dual_trunc: 5, series_order: 4, seed: 0 };
    let results = suite_center(&config);
    report("06 central-series", &results);
}

#[test]
fn criterion_07_antipode_square() {
    // S²(T^(r)_ij) equals the u^-r coefficient of Z(u)^-1 T(u+N) for
    // r <= 3, N = 2
    let (pass, detail) = s_square_check(2, 3).expect("series computable");
    let results = [CheckResult { name: "s-square/N=2".into(), pass, detail }];
    report("07 antipode-square", &results);
}

#[test]
fn criterion_08_universal_r_matrix() {
    // D = 4, N = 2: (id⊗ε)(R) = 1; (rho*_u ⊗ id)(R) = T(u) mod u^-5;
    // (rho*_u ⊗ rho_v)(R) = R(u-v) mod u^-5
    let config = EngineConfig { n: 2, series_order: 4, ..Default::default() };
    let results = suite_rprops(&config);
    report("08 universal-r", &results);
}

#[test]
fn criterion_09_bialgebra_duality() {
    // both duality identities on 100 seeded random triples of degree
    // <= 3, each side through an independent code path
    let config = EngineConfig { n: 2, seed: 0, ..Default::default() };
    let results: Vec<CheckResult> = suite_duality(&config)
        .into_iter()
        .filter(|r| r.name == "duality/bialgebra-identities")
        .collect();
    assert_eq!(results.len(), 1);
    report("09 bialgebra-duality", &results);
}

#[test]
fn criterion_10_double_yangian_consistency() {
    // cross-relation confluence on 200 seeded words (length <= 5, N = 2,
    // D = 5), graded brackets against U(gl_N[z,z^-1]), and the
    // representation-relation checks
    let config = EngineConfig { n: 2, dual_trunc: 5, series_order: 4, seed: 0 };
    let results = suite_double(&config);
    report("10 double-yangian", &results);
}

#[test]
fn criterion_11_separation_harness() {
    // 20 seeded nonzero elements of deg' <= 3 separated by a tensor
    // power n <= 4 of the covector representation; the top-degree
    // parameter coefficients match the current-algebra evaluation image
    let config = EngineConfig { n: 2, seed: 0, ..Default::default() };
    let results: Vec<CheckResult> = suite_pbw(&config)
        .into_iter()
        .filter(|r| r.name.starts_with("pbw/separation") || r.name == "pbw/embed-eval-identity")
        .collect();
    assert_eq!(results.len(), 3);
    report("11 separation-harness", &results);
}

#[test]
fn acceptance_basis_dimension_oracle() {
    // the enumerated bases agree with the generating-function dimension
    // oracle on both sides
    for s in 0..=4 {
        for n in 1..=2 {
            let y = basis_enumerate(AlgebraTag::Y, s, n).len() as u64;
            let dual = basis_enumerate(AlgebraTag::Dual, s, n).len() as u64;
            let oracle = graded_dimension_oracle(s, n);
            assert_eq!(y, oracle);
            assert_eq!(dual, oracle);
        }
    }
    println!("ACCEPTANCE dimension-oracle: PASS");
}
