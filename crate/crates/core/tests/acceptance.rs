//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails or exceeds its time budget.

use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bmhad_core::exactfield::{int, rat, sign_real, Rational, TowerElement};
use bmhad_core::identities::{even_q_range, scan_nonvanishing, verify_converse, verify_core_identities, ScanExpr};
use bmhad_core::invariants::{
    check_inverse_inequivalence, distinguish, haagerup_bruteforce, haagerup_of_family, in_unit_interval,
    outside_interval, HaagerupData,
};
use bmhad_core::nomura::{check_symmetric, nomura_dimension_checked};
use bmhad_core::pell::{descent_oracle, integral_r_q_values, PellProblem};
use bmhad_core::scheme::{build_petersen_line_scheme, verify_axioms, ConcreteScheme, ParametricScheme};
use bmhad_core::typeii::{
    dense_type_ii, family_coefficients, is_hadamard, is_type_ii, non_butson_witness, span_rank, Case, TypeIIMatrix,
    WeightFamily,
};

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scheme() -> ConcreteScheme {
    build_petersen_line_scheme().expect("q = 4 scheme builds")
}

fn family(case: Case, r_sign: i8, branch: i8) -> Result<WeightFamily, String> {
    family_coefficients(case, &int(4), r_sign, branch).map_err(|e| e.to_string())
}

fn dense_matrix(f: &WeightFamily, s: &ConcreteScheme) -> TypeIIMatrix {
    TypeIIMatrix::from_family(f).with_scheme(s.clone())
}

fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
}

fn dense_hadamard_identity() -> Outcome {
    let s = scheme();
    for case in [Case::III, Case::IV, Case::V, Case::VI] {
        for branch in [1, -1] {
            let f = family(case, 1, branch)?;
            let tm = dense_matrix(&f, &s);
            let d = tm.dense().ok_or("no dense matrix")?;
            ensure(d.len() == 15 && dense_type_ii(&d), || format!("{case} branch {branch}: W W(-)^T != 15 I"))?;
            let h = is_hadamard(&tm).map_err(|e| e.to_string())?;
            ensure(h.hadamard && h.modulus_defect < 1e-12, || {
                format!("{case} branch {branch}: modulus defect {}", h.modulus_defect)
            })?;
        }
    }
    Ok(())
}

fn type_ii_only_cases() -> Outcome {
    let s = scheme();
    for case in [Case::I, Case::II] {
        for branch in [1, -1] {
            let tm = dense_matrix(&family(case, 1, branch)?, &s);
            ensure(is_type_ii(&tm).holds(), || format!("{case} is not type-II"))?;
            let h = is_hadamard(&tm).map_err(|e| e.to_string())?;
            ensure(!h.hadamard && h.outside_pair.is_some(), || format!("{case} reported Hadamard"))?;
            ensure(h.modulus_defect > 1e-6, || format!("{case}: all weights unimodular"))?;
        }
    }
    Ok(())
}

/// Checks `(scale * x + shift)^2 = disc`.
fn satisfies(x: &TowerElement, scale: i64, shift: i64, disc: i64) -> bool {
    let t = x.tower();
    let y = &x.scale(&int(scale)) + &TowerElement::from_int(t, shift);
    (&y * &y).reduce() == TowerElement::from_int(t, disc)
}

fn known_coefficients() -> Outcome {
    let checks: [(Case, usize, i64, i64, i64, &str); 3] = [
        (Case::IV, 2, 8, 7, -15, "(-7+-sqrt(-15))/8"),
        (Case::III, 1, 6, -5, -11, "(5+-sqrt(-11))/6"),
        (Case::V, 1, 4, 1, -15, "(-1+-sqrt(-15))/4"),
    ];
    for (case, k, scale, shift, disc, label) in checks {
        let mut imag_signs = Vec::new();
        for branch in [1, -1] {
            let w = family(case, 1, branch)?.weights[k].reduce();
            ensure(w.as_rational().is_none() && satisfies(&w, scale, shift, disc), || format!("{case} w{k} is not {label}"))?;
            let im = bmhad_core::exactfield::complex_embed(&w, &vec![1; w.tower().depth()], 20).map_err(|e| e.to_string())?;
            imag_signs.push(im.im_f64().signum());
        }
        ensure(imag_signs[0] != imag_signs[1], || format!("{case}: both branches give the same root"))?;
    }
    let iii = family(Case::III, 1, 1)?;
    ensure(iii.weights[2].reduce() == TowerElement::from_int(iii.weights[2].tower(), -1), || "case III w2 != -1".into())?;
    ensure(iii.weights[3] == iii.weights[1], || "case III w3 != w1".into())?;
    let iv = family(Case::IV, 1, 1)?;
    ensure(iv.weights[1].is_one() && iv.weights[3].is_one(), || "case IV w1, w3 != 1".into())?;
    let a01 = family(Case::VI, 1, 1)?.a[0].reduce();
    ensure(satisfies(&a01, 20, 3, 9 * 201), || format!("case VI a01 = {a01}"))?;
    let positive = sign_real(&a01, &vec![1; a01.tower().depth()]).map_err(|e| e.to_string())? == Ordering::Greater;
    ensure(positive, || "case VI a01 has the wrong sign of sqrt(201)".into())
}

fn symbolic_identities() -> Outcome {
    let core = verify_core_identities();
    ensure(core.all(), || format!("{core:?}"))?;
    for case in Case::ALL {
        let r = verify_converse(case);
        ensure(r.holds(), || format!("converse substitution for {case} fails: {r:?}"))?;
    }
    Ok(())
}

fn haagerup_oracle() -> Outcome {
    let s = scheme();
    let mut reps: Vec<(Case, HaagerupData)> = Vec::new();
    let mut vi = Vec::new();
    for case in Case::ALL {
        let signs: &[i8] = if case == Case::VI { &[1, -1] } else { &[1] };
        for &r_sign in signs {
            for branch in [1, -1] {
                let f = family(case, r_sign, branch)?;
                let formula = haagerup_of_family(&f).map_err(|e| e.to_string())?;
                let d = dense_matrix(&f, &s).dense().ok_or("no dense matrix")?;
                let brute = haagerup_bruteforce(&d).map_err(|e| e.to_string())?;
                ensure(formula.h_set == brute.h_set && formula.k_set == brute.k_set, || {
                    format!("{case} r{r_sign} branch {branch}: formula and brute force differ")
                })?;
                if branch == 1 && r_sign == 1 {
                    reps.push((case, formula.clone()));
                }
                if case == Case::VI && branch == 1 {
                    vi.push((f, formula));
                }
            }
        }
    }
    for (i, (ca, a)) in reps.iter().enumerate() {
        for (cb, b) in &reps[i + 1..] {
            let d = distinguish(a, b).map_err(|e| e.to_string())?;
            ensure(d.witness.is_some(), || format!("K({ca}) = K({cb})"))?;
        }
    }
    let k = |c: Case| reps.iter().find(|(x, _)| *x == c).map(|(_, d)| d).unwrap();
    let wit = |x: Rational| TowerElement::from_rational(k(Case::I).k_set[0].tower(), x);
    ensure(k(Case::II).contains_k(&wit(rat(19, 7))) && !k(Case::I).contains_k(&wit(rat(19, 7))), || "19/7 does not separate I and II".into())?;
    ensure(k(Case::V).contains_k(&wit(rat(-1, 2))) && !k(Case::IV).contains_k(&wit(rat(-1, 2))), || "-1/2 does not separate IV and V".into())?;

    let (plus, minus) = (&vi[0], &vi[1]);
    let plus_inside = outside_interval(&plus.1.k_set).map_err(|e| e.to_string())?.is_none();
    ensure(plus_inside, || "K(W+) leaves [-2, 2]".into())?;
    let out = outside_interval(&minus.1.k_set).map_err(|e| e.to_string())?;
    ensure(out.is_some(), || "K(W-) stays inside [-2, 2]".into())?;
    let a01 = minus.0.a[0].reduce();
    ensure(minus.1.contains_k(&a01) && !in_unit_interval(&a01).map_err(|e| e.to_string())?, || "a01(r<0) not outside [-2, 2]".into())?;

    for case in [Case::I, Case::II] {
        for branch in [1, -1] {
            let c = check_inverse_inequivalence(&family(case, 1, branch)?).map_err(|e| e.to_string())?;
            ensure(c.holds() && c.p11_exceeds_half, || format!("{case}: inverse-inequivalence hypotheses fail: {c:?}"))?;
        }
    }
    Ok(())
}

fn nomura_dimension() -> Outcome {
    let s = scheme();
    for case in Case::ALL {
        let signs: &[i8] = if case == Case::VI { &[1, -1] } else { &[1] };
        for &r_sign in signs {
            let tm = dense_matrix(&family(case, r_sign, 1)?, &s);
            ensure(check_symmetric(&tm).map_err(|e| e.to_string())?, || format!("{case}: Nomura algebra not symmetric"))?;
            let r = nomura_dimension_checked(&tm).map_err(|e| e.to_string())?;
            let vertices: usize = r.component_sizes.iter().sum();
            ensure(vertices == 225 && r.dim_n == 2, || format!("{case} r{r_sign}: dim N = {} on {vertices} vertices", r.dim_n))?;
        }
    }
    Ok(())
}

fn isolation() -> Outcome {
    let s = scheme();
    for (case, isolated) in [(Case::IV, true), (Case::VI, true), (Case::III, false), (Case::V, false)] {
        let d = dense_matrix(&family(case, 1, 1)?, &s).dense().ok_or("no dense matrix")?;
        let c = span_rank(&d).map_err(|e| e.to_string())?;
        ensure((c.rank == 196) == isolated && c.rank <= 196, || format!("{case}: span rank {} (isolated expected {isolated})", c.rank))?;
    }
    Ok(())
}

fn pell_suite() -> Outcome {
    let p = PellProblem::seventeen();
    let base: Vec<(String, String)> = p.base_solutions().iter().map(|s| (s.x.to_string(), s.y.to_string())).collect();
    let want: Vec<(String, String)> = [("8", "0"), ("9", "1"), ("26", "6")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    ensure(base == want, || format!("base solutions {base:?}"))?;
    let qs: Vec<String> = integral_r_q_values(-2, 2).iter().map(|q| q.to_string()).collect();
    ensure(qs == ["10", "26", "41210", "110890", "482812730"], || format!("q values {qs:?}"))?;
    let o = descent_oracle(&p, 1_000_000);
    ensure(o.solutions > 0 && o.unexplained.is_empty(), || format!("unexplained solutions {:?}", o.unexplained))
}

fn nonvanishing_sweeps() -> Outcome {
    let qs = even_q_range(200);
    ensure(qs.first() == Some(&4) && qs.last() == Some(&200) && qs.len() == 99, || "bad q range".into())?;
    for expr in [ScanExpr::NomuraSymmetric, ScanExpr::JonesComponent, ScanExpr::JonesAdjacency] {
        for case in Case::ALL {
            let r = scan_nonvanishing(expr, case, &qs).map_err(|e| e.to_string())?;
            ensure(r.violations().is_empty(), || format!("{expr:?} vanishes for {case}: {:?}", r.violations()))?;
        }
    }
    Ok(())
}

fn scheme_ground_truth() -> Outcome {
    let s = scheme();
    let axioms = verify_axioms(s.relations());
    ensure(axioms.ok(), || format!("{:?}", axioms.violations))?;
    let ps = ParametricScheme::new();
    let table = ps.table_at(&int(4));
    let mut compared = 0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                ensure(table[i][j][k] == int(s.p(i, j, k)), || format!("p_{i}{j}^{k} differs"))?;
                compared += 1;
            }
        }
    }
    ensure(compared == 64, || "wrong table size".into())?;
    let p3 = int_matrix(&[&[1, 4, 8, 2], &[1, 2, -2, -1], &[1, -1, -2, 2], &[1, -2, 2, -1]]);
    let p1 = int_matrix(&[&[1, 12, 2], &[1, 0, -1], &[1, -3, 2]]);
    let p2 = int_matrix(&[&[1, 6, 8], &[1, 1, -2], &[1, -3, 2]]);
    let e = s.eigen_data().map_err(|e| e.to_string())?;
    ensure(e.p == p3, || format!("P3 = {:?}", e.p))?;
    ensure(ps.eigenmatrix_at(&int(4)) == p3, || "parametric P3 differs".into())?;
    ensure(e.check_qp() && e.check_q_rows(), || "QP = nI or Q row sums fail".into())?;
    for (part, want, name) in [(vec![vec![0], vec![1, 2], vec![3]], p1, "P1"), (vec![vec![0], vec![1, 3], vec![2]], p2, "P2")] {
        let fused = s.fuse(&part).map_err(|e| e.to_string())?;
        let fe = fused.eigen_data().map_err(|e| e.to_string())?;
        ensure(fe.p == want, || format!("{name} = {:?}", fe.p))?;
        ensure(fe.check_q_rows(), || format!("{name}: Q row sums fail"))?;
    }
    Ok(())
}

fn non_butson_witnesses() -> Result<(), String> {
    for (case, want) in [(Case::II, rat(19, 7)), (Case::V, rat(-1, 2))] {
        let (_, x) = non_butson_witness(&family(case, 1, 1)?).map_err(|e| e.to_string())?;
        ensure(x.as_rational() == Some(want.clone()), || format!("{case}: witness {x}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("1 dense Hadamard identity", Duration::from_secs(5), dense_hadamard_identity),
        ("2 type-II-only cases", Duration::from_secs(1), type_ii_only_cases),
        ("3 known coefficients", Duration::from_secs(1), || known_coefficients().and_then(|_| non_butson_witnesses())),
        ("4 symbolic identities", Duration::from_secs(10), symbolic_identities),
        ("5 Haagerup oracle equivalence", Duration::from_secs(30), haagerup_oracle),
        ("6 Nomura dimension", Duration::from_secs(120), nomura_dimension),
        ("7 isolation", Duration::from_secs(300), isolation),
        ("8 Pell suite", Duration::from_secs(10), pell_suite),
        ("9 nonvanishing sweeps", Duration::from_secs(120), nonvanishing_sweeps),
        ("10 scheme ground truth", Duration::from_secs(1), scheme_ground_truth),
    ];
    let mut failures = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, elapsed <= budget) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over budget {budget:?})"),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failures += 1;
        }
        println!("criterion {name:<32} {verdict} in {:.2?}", elapsed);
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
