//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use liepres::analysis::{
    cartan_matrix_and_type, check_jacobi, classify, derived_and_center, killing_form,
    killing_invariance_violations, root_decomposition, verify_sl3_subalgebra, SL3_NAMES,
};
use liepres::free_lie::{lyndon_words, FreeLieAlgebra, LiePoly, LyndonMonomial};
use liepres::linalg::{dot, int, Rational};
use liepres::presentation::rewriter::quadruple_cases;
use liepres::presentation::{
    cross_validate, g2_named_basis, g2_presentation, parse_presentation,
    quadruple_relation_instances, quotient_closure, structure_table, Presentation,
    DEFAULT_DEGREE_BOUND,
};
use liepres::table::StructureTable;

const TIME_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn derived_table() -> Result<StructureTable, String> {
    structure_table(
        &g2_presentation(),
        Some(&g2_named_basis()),
        DEFAULT_DEGREE_BOUND,
        1,
    )
    .map_err(|e| e.to_string())
}

fn idx(t: &StructureTable, names: &[&str]) -> Vec<usize> {
    names
        .iter()
        .map(|n| t.index_of(n).expect("known name"))
        .collect()
}

fn presentation_to_dimension() -> Outcome {
    let start = Instant::now();
    let pres = g2_presentation();
    let mut dims = Vec::new();
    for b in [6, 7, 8] {
        let q = quotient_closure(&pres, b).map_err(|e| e.to_string())?;
        ensure(q.dim() == 14, format!("bound {b}: dim {}", q.dim()))?;
        ensure(q.is_stabilized(), format!("bound {b}: not stabilized"))?;
        dims.push(q.dim());
    }
    let elapsed = start.elapsed();
    ensure(elapsed < TIME_BUDGET, format!("took {elapsed:?}"))?;
    Ok(format!(
        "dim 14 stabilized at bounds 6, 7, 8 in {elapsed:.2?}"
    ))
}

fn table_reproduction() -> Outcome {
    let t = derived_table()?;
    let golden = common::golden_table();
    let diff = t.diff(&golden);
    ensure(
        diff.is_empty(),
        format!("{} differing pairs, first {:?}", diff.len(), diff.first()),
    )?;
    let anchors = [
        ("x1", "x2", "2*y3"),
        ("x1", "y1", "2*h1 + h2"),
        ("a13", "a31", "h1 + h2"),
        ("y1", "a23", "0"),
        ("a12", "a23", "a13"),
    ];
    for (a, b, want) in anchors {
        let [i, j] = idx(&t, &[a, b])[..] else {
            unreachable!()
        };
        let got = t.format_vector(&t.basis_bracket(i, j));
        ensure(got == want, format!("[{a},{b}] = {got}, expected {want}"))?;
    }
    Ok("91 pairs equal the golden table; 5 anchors hold".into())
}

fn mutated(coefficients: [i64; 3], flip_one_rhs: bool) -> Presentation {
    let mut flipped = false;
    let rels = quadruple_relation_instances(coefficients)
        .into_iter()
        .filter(|r| !r.poly.is_zero())
        .map(|r| {
            if flip_one_rhs && !flipped && r.coefficient != 0 {
                flipped = true;
                let rhs =
                    LiePoly::generator((r.rhs_generator - 1) as u8).scaled(&int(2 * r.coefficient));
                return &r.poly + &rhs;
            }
            r.poly
        })
        .collect();
    Presentation::with_numbered_generators("x", 3, rels).expect("valid presentation")
}

fn engine_cross_validation() -> Outcome {
    let report =
        cross_validate(&g2_presentation(), DEFAULT_DEGREE_BOUND, 1).map_err(|e| e.to_string())?;
    ensure(
        report.agrees(),
        format!("g2: {:?} {:?}", report.notes, report.mismatches.first()),
    )?;
    let cases = [
        ("family 2 4->5", mutated([2, 5, 6], false)),
        ("family 3 sign", mutated([2, 4, -6], false)),
        ("family 1 2->3", mutated([3, 4, 6], false)),
        ("one rhs sign", mutated([2, 4, 6], true)),
    ];
    let mut how = Vec::new();
    for (label, pres) in cases {
        let r = cross_validate(&pres, DEFAULT_DEGREE_BOUND, 1).map_err(|e| e.to_string())?;
        let jacobi_fails = r
            .closure_table
            .as_ref()
            .is_some_and(|t| !check_jacobi(t).is_empty());
        let reason = if r.closure_dim != 14 {
            format!("dim {}", r.closure_dim)
        } else if !r.mismatches.is_empty() {
            format!("{} mismatches", r.mismatches.len())
        } else if jacobi_fails {
            "Jacobi".to_string()
        } else if !r.agrees() {
            r.notes.join("; ")
        } else {
            return Err(format!("mutation {label} not detected"));
        };
        how.push(format!("{label}: {reason}"));
    }
    Ok(format!(
        "engines agree on 91 pairs; mutations caught ({})",
        how.join(", ")
    ))
}

fn jacobi_certification() -> Outcome {
    let t = derived_table()?;
    let v = check_jacobi(&t);
    ensure(v.is_empty(), format!("{} violations", v.len()))?;
    let [x1, x2] = idx(&t, &["x1", "x2"])[..] else {
        unreachable!()
    };
    let mut bad = t.clone();
    bad.set_bracket(x1, x2, &vec![int(0); 14]);
    ensure(
        !check_jacobi(&bad).is_empty(),
        "zeroing [x1,x2] went unnoticed",
    )?;
    Ok("364 triples exact; zeroed [x1,x2] caught".into())
}

fn killing_form_check() -> Outcome {
    let t = derived_table()?;
    let k = killing_form(&t);
    ensure(k.is_symmetric(), "not symmetric")?;
    let inv = killing_invariance_violations(&t, &k);
    ensure(
        inv.is_empty(),
        format!("{} invariance violations", inv.len()),
    )?;
    ensure(k.determinant() != int(0), "degenerate")?;
    // ad(h1), ad(h2) eigenvalues from the table's first two rows
    let h1: Vec<Rational> = [0, 0, 2, 1, -1, -2, -1, 1, -1, 1, 0, 1, -1, 0]
        .map(int)
        .to_vec();
    let h2: Vec<Rational> = [0, 0, -1, 1, 2, 1, -1, -2, 0, -1, 1, 0, 1, -1]
        .map(int)
        .to_vec();
    let [i1, i2] = idx(&t, &["h1", "h2"])[..] else {
        unreachable!()
    };
    ensure(
        k[(i1, i1)] == dot(&h1, &h1) && k[(i1, i1)] == int(16),
        format!("K(h1,h1) = {}", k[(i1, i1)]),
    )?;
    ensure(
        k[(i1, i2)] == dot(&h1, &h2) && k[(i1, i2)] == int(-8),
        format!("K(h1,h2) = {}", k[(i1, i2)]),
    )?;
    Ok(format!(
        "symmetric, invariant, det = {}, K(h1,h1) = 16, K(h1,h2) = -8",
        k.determinant()
    ))
}

fn root_system() -> Outcome {
    let t = derived_table()?;
    let rd = root_decomposition(&t, &idx(&t, &["h1", "h2"])).map_err(|e| e.to_string())?;
    ensure(rd.roots.len() == 12, format!("{} roots", rd.roots.len()))?;
    ensure(
        rd.multiplicities().iter().all(|&m| m == 1),
        "multiplicity > 1",
    )?;
    ensure(rd.closed_under_negation(), "not closed under negation")?;
    ensure(rd.rank() + rd.roots.len() == 14, "14 != 2 + 12")?;
    let ct = cartan_matrix_and_type(&rd).map_err(|e| e.to_string())?;
    let g2 = vec![vec![2, -1], vec![-3, 2]];
    let swapped = vec![vec![2, -3], vec![-1, 2]];
    ensure(
        ct.matrix == g2 || ct.matrix == swapped,
        format!("Cartan matrix {:?}", ct.matrix),
    )?;
    let c = classify(&t, None);
    ensure(c.type_line() == "G2", format!("type {}", c.type_line()))?;
    Ok(format!(
        "12 roots of multiplicity 1, Cartan matrix {:?}, type G2",
        ct.matrix
    ))
}

fn sl3_decomposition() -> Outcome {
    let t = derived_table()?;
    let v = verify_sl3_subalgebra(&t);
    ensure(
        v.mismatches.is_empty(),
        format!("{:?}", v.mismatches.first()),
    )?;
    ensure(v.x_invariant && v.y_invariant, "x or y span not invariant")?;
    ensure(v.passes(), format!("missing {:?}", v.missing_names))?;
    let sub = t
        .subtable(&idx(&t, &SL3_NAMES))
        .ok_or("sl3 span not closed")?;
    ensure(
        classify(&sub, None).type_line() == "A2",
        "sub-table is not A2",
    )?;
    Ok("28 pairs match e_ij; span{x}, span{y} invariant; sub-table is A2".into())
}

fn free_counts() -> Outcome {
    let counts: Vec<u64> = lyndon_words(3, 8).iter().map(|w| w.len() as u64).collect();
    let oracle: Vec<u64> = (1..=8).map(|n| common::witt(3, n)).collect();
    ensure(counts == oracle, format!("{counts:?} vs Witt {oracle:?}"))?;
    ensure(
        counts == [3, 3, 8, 18, 48, 116, 312, 810],
        format!("{counts:?}"),
    )?;
    Ok(format!("{counts:?} equal the Witt formula"))
}

fn oracle_equivalence() -> Outcome {
    let alg = FreeLieAlgebra::new();
    let all: Vec<LyndonMonomial> = lyndon_words(3, 4).into_iter().flatten().collect();
    let mut n = 0;
    for u in &all {
        for v in &all {
            if u.degree() + v.degree() > 5 {
                continue;
            }
            let b = alg.bracket_monomials(u, v).map_err(|e| e.to_string())?;
            let mut lhs = common::Assoc::new();
            for (m, c) in b.terms() {
                lhs = common::assoc_add(&lhs, &common::expand_lyndon(m.word()), c);
            }
            let rhs = common::assoc_commutator(
                &common::expand_lyndon(u.word()),
                &common::expand_lyndon(v.word()),
            );
            ensure(lhs == rhs, format!("[{u:?}, {v:?}] disagrees"))?;
            n += 1;
        }
    }
    Ok(format!(
        "{n} ordered monomial pairs up to total degree 5 agree"
    ))
}

fn rewriter_totality() -> Outcome {
    let mut multi = 0;
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                for d in 1..=3 {
                    let cases = std::panic::catch_unwind(|| quadruple_cases([a, b, c, d]))
                        .map_err(|_| format!("({a},{b},{c},{d}) panicked"))?;
                    ensure(!cases.is_empty(), format!("({a},{b},{c},{d}) unmatched"))?;
                    ensure(
                        cases.iter().all(|(_, v)| *v == cases[0].1),
                        format!("({a},{b},{c},{d}) rules disagree"),
                    )?;
                    if cases.len() > 1 {
                        multi += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "81 tuples reduce; {multi} match several rules and agree"
    ))
}

fn fixtures() -> Outcome {
    let sl2 = parse_presentation(&common::read_fixture("sl2.lp")).map_err(|e| e.to_string())?;
    let t = structure_table(&sl2, None, 4, 1).map_err(|e| e.to_string())?;
    ensure(t.dim() == 3, format!("sl2 dim {}", t.dim()))?;
    let c = classify(&t, None);
    ensure(c.type_line() == "A1", format!("sl2 type {}", c.type_line()))?;
    let heis =
        parse_presentation(&common::read_fixture("heisenberg.lp")).map_err(|e| e.to_string())?;
    let t = structure_table(&heis, None, 5, 1).map_err(|e| e.to_string())?;
    ensure(t.dim() == 3, format!("heisenberg dim {}", t.dim()))?;
    ensure(
        killing_form(&t).determinant() == int(0),
        "heisenberg Killing form nondegenerate",
    )?;
    ensure(
        derived_and_center(&t) == (1, 1),
        format!("heisenberg {:?}", derived_and_center(&t)),
    )?;
    Ok("sl2: dim 3, A1; heisenberg: dim 3, degenerate Killing form, derived 1, center 1".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("presentation to dimension", presentation_to_dimension),
        ("table reproduction", table_reproduction),
        ("engine cross-validation", engine_cross_validation),
        ("jacobi certification", jacobi_certification),
        ("killing form", killing_form_check),
        ("root system", root_system),
        ("sl(3) decomposition", sl3_decomposition),
        ("free Lie algebra counts", free_counts),
        ("oracle equivalence", oracle_equivalence),
        ("rewriter totality and confluence", rewriter_totality),
        ("fixtures", fixtures),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
