//! Check suites that replay every verifiable claim and collect the outcomes
//! into a deterministic report.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::exactfield::{int, Rational, TowerElement};
use crate::identities::{
    check_symmetry_fixtures, even_q_range, fixtures_avoid_even_q, scan_controls, scan_nonvanishing,
    verify_converse, verify_core_identities, ScanExpr,
};
use crate::invariants::{
    check_inverse_inequivalence, check_table_row, distinguish, haagerup_bruteforce, haagerup_of_family,
    in_unit_interval, outside_interval, HaagerupData,
};
use crate::nomura::{jones_structure_report, nomura_dimension_checked, sylvester4, JonesGraph};
use crate::pell::{
    descent_oracle, integral_r_q_values, integral_r_q_values_ordered, is_r_integer, pell_checks, PellProblem,
};
use crate::scheme::{build_petersen_line_scheme, fuse_eigenmatrix, ConcreteScheme, ParametricScheme};
use crate::typeii::{
    dense_type_ii, family_coefficients, is_hadamard, is_type_ii, non_butson_witness, span_rank, Case, TypeIIMatrix,
    WeightFamily,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One verified claim.
#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub check_id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_range: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
}

impl CheckEntry {
    pub fn new(id: impl Into<String>, ok: bool, witness: Value) -> Self {
        CheckEntry { check_id: id.into(), status: Status::from_bool(ok), q_range: None, witness }
    }

    pub fn with_range(mut self, r: String) -> Self {
        self.q_range = Some(r);
        self
    }

    fn error(id: impl Into<String>, e: impl fmt::Display) -> Self {
        CheckEntry::new(id, false, json!({ "error": e.to_string() }))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Scheme,
    Identities,
    Typeii,
    Haagerup,
    Nomura,
    Pell,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [Suite::Scheme, Suite::Identities, Suite::Typeii, Suite::Haagerup, Suite::Nomura, Suite::Pell];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Scheme => "scheme",
            Suite::Identities => "identities",
            Suite::Typeii => "typeii",
            Suite::Haagerup => "haagerup",
            Suite::Nomura => "nomura",
            Suite::Pell => "pell",
            Suite::All => "all",
        }
    }

    /// Process exit code used when this suite has the first failure.
    pub fn exit_code(self) -> i32 {
        match self {
            Suite::Scheme => 10,
            Suite::Identities => 11,
            Suite::Typeii => 12,
            Suite::Haagerup => 13,
            Suite::Nomura => 14,
            Suite::Pell => 15,
            Suite::All => 1,
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown suite {s:?}; expected scheme, identities, typeii, haagerup, nomura, pell or all"))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters shared by all suites.
#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub q: i64,
    pub sweep_bound: i64,
    pub pell_range: (i64, i64),
    pub descent_limit: u64,
    pub include_span: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { q: 4, sweep_bound: 200, pell_range: (-2, 2), descent_limit: 1_000_000, include_span: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckEntry>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckEntry::passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub q: i64,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl Report {
    pub fn first_failing_suite(&self) -> Option<Suite> {
        self.suites.iter().find(|s| !s.passed()).map(|s| s.suite)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,check_id,status,q_range\n");
        for s in &self.suites {
            for c in &s.checks {
                let status = if c.passed() { "pass" } else { "fail" };
                out.push_str(&format!("{},{},{},{}\n", s.suite, c.check_id, status, c.q_range.clone().unwrap_or_default()));
            }
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            out.push_str(&format!("[{}] {}\n", s.suite, if s.passed() { "pass" } else { "FAIL" }));
            for c in &s.checks {
                let mark = if c.passed() { "ok  " } else { "FAIL" };
                let range = c.q_range.as_ref().map(|r| format!(" (q in {r})")).unwrap_or_default();
                out.push_str(&format!("  {mark} {}{range}\n", c.check_id));
            }
        }
        out.push_str(if self.passed { "all checks passed\n" } else { "some checks failed\n" });
        out
    }
}

pub fn run(suite: Suite, cfg: &ReportConfig) -> Report {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let suites: Vec<SuiteReport> = suites.into_iter().map(|s| SuiteReport { suite: s, checks: run_suite(s, cfg) }).collect();
    let passed = suites.iter().all(SuiteReport::passed);
    Report { format_version: FORMAT_VERSION, q: cfg.q, suites, passed }
}

pub fn run_suite(suite: Suite, cfg: &ReportConfig) -> Vec<CheckEntry> {
    match suite {
        Suite::Scheme => scheme_suite(),
        Suite::Identities => identities_suite(cfg),
        Suite::Typeii => typeii_suite(cfg),
        Suite::Haagerup => haagerup_suite(cfg),
        Suite::Nomura => nomura_suite(),
        Suite::Pell => pell_suite(cfg),
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(s, cfg)).collect(),
    }
}

fn show_matrix(m: &[Vec<Rational>]) -> Value {
    json!(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn scheme_suite() -> Vec<CheckEntry> {
    let s = match build_petersen_line_scheme() {
        Ok(s) => s,
        Err(e) => return vec![CheckEntry::error("scheme.construct", e)],
    };
    let ps = ParametricScheme::new();
    let mut out = vec![CheckEntry::new("scheme.axioms", true, json!({"order": s.n(), "classes": s.d()}))];
    let table = ps.int_table_at(4);
    out.push(CheckEntry::new(
        "scheme.intersection_numbers",
        table.as_ref() == Some(s.intersection_numbers()),
        json!({"valencies": s.valencies()}),
    ));
    let q = int(4);
    let partitions = [
        ("scheme.eigenmatrix", vec![vec![0], vec![1], vec![2], vec![3]]),
        ("scheme.fusion_imprimitive_eigenmatrix", vec![vec![0], vec![1, 2], vec![3]]),
        ("scheme.fusion_primitive_eigenmatrix", vec![vec![0], vec![1, 3], vec![2]]),
    ];
    for (id, part) in partitions {
        let entry = s.fuse(&part).and_then(|f| f.eigen_data()).map(|e| {
            let expected = fuse_eigenmatrix(&ps.eigenmatrix_at(&q), &part);
            CheckEntry::new(id, e.p == expected, json!({"p": show_matrix(&e.p)}))
        });
        out.push(entry.unwrap_or_else(|e| CheckEntry::error(id, e)));
    }
    out.push(match s.eigen_data() {
        Ok(e) => CheckEntry::new("scheme.second_eigenmatrix_rows", e.check_qp() && e.check_q_rows(), Value::Null),
        Err(e) => CheckEntry::error("scheme.second_eigenmatrix_rows", e),
    });
    let sym = ps.eigen_data().map(|e| e.check_qp() && e.check_q_rows()).unwrap_or(false);
    out.push(CheckEntry::new("scheme.parametric_second_eigenmatrix", sym, Value::Null));
    out
}

fn identities_suite(cfg: &ReportConfig) -> Vec<CheckEntry> {
    let core = verify_core_identities();
    let mut out = vec![CheckEntry::new("identities.core", core.all(), serde_json::to_value(&core).unwrap_or_default())];
    for case in Case::ALL {
        let r = verify_converse(case);
        out.push(CheckEntry::new(format!("identities.converse.{case}"), r.holds(), serde_json::to_value(&r).unwrap_or_default()));
    }
    let qs = even_q_range(cfg.sweep_bound);
    let range = format!("4..={}", cfg.sweep_bound);
    for expr in [ScanExpr::NomuraSymmetric, ScanExpr::JonesComponent, ScanExpr::JonesAdjacency] {
        let name = match expr {
            ScanExpr::NomuraSymmetric => "symmetry_sums",
            ScanExpr::JonesComponent => "counter_system",
            ScanExpr::JonesAdjacency => "adjacency_sums",
        };
        for case in Case::ALL {
            let id = format!("identities.sweep.{name}.{case}");
            out.push(match scan_nonvanishing(expr, case, &qs) {
                Ok(r) => {
                    let viol: Vec<Value> = r.violations().iter().map(|e| json!({"q": e.q, "branch": e.branch, "r_sign": e.r_sign})).collect();
                    CheckEntry::new(id, viol.is_empty(), json!({"evaluations": r.entries.len(), "violations": viol}))
                        .with_range(range.clone())
                }
                Err(e) => CheckEntry::error(id, e),
            });
        }
    }
    let controls = scan_controls(cfg.q.max(4));
    out.push(CheckEntry::new("identities.sweep_controls", controls.all(), serde_json::to_value(&controls).unwrap_or_default()));
    for case in Case::ALL {
        let checks = check_symmetry_fixtures(case);
        let ok = checks.iter().all(|c| c.matches);
        out.push(CheckEntry::new(
            format!("identities.symmetry_generators.{case}"),
            ok,
            json!(checks.iter().map(|c| json!({"index": c.index, "computed": c.computed})).collect::<Vec<_>>()),
        ));
        out.push(CheckEntry::new(format!("identities.recorded_generators_avoid_even_q.{case}"), fixtures_avoid_even_q(case), Value::Null));
    }
    out
}

/// Families checked at a given `q`: both branches, both signs of `r` in
/// case VI.
pub fn family_variants(case: Case) -> Vec<(i8, i8)> {
    let signs: &[i8] = if case == Case::VI { &[1, -1] } else { &[1] };
    signs.iter().flat_map(|&r| [(1, r), (-1, r)]).collect()
}

pub fn variant_label(case: Case, branch: i8, r_sign: i8) -> String {
    let b = if branch > 0 { "+" } else { "-" };
    if case == Case::VI {
        format!("{case}{b}r{}", if r_sign > 0 { "+" } else { "-" })
    } else {
        format!("{case}{b}")
    }
}

/// Whether the family is expected to be complex Hadamard.
pub fn expected_hadamard(case: Case, r_sign: i8) -> bool {
    case.is_hadamard_family() && (case != Case::VI || r_sign > 0)
}

fn concrete(q: i64) -> Option<ConcreteScheme> {
    (q == 4).then(|| build_petersen_line_scheme().ok()).flatten()
}

fn typeii_suite(cfg: &ReportConfig) -> Vec<CheckEntry> {
    let mut out = Vec::new();
    let scheme = concrete(cfg.q);
    for case in Case::ALL {
        for (branch, r_sign) in family_variants(case) {
            let label = variant_label(case, branch, r_sign);
            let f = match family_coefficients(case, &int(cfg.q), r_sign, branch) {
                Ok(f) => f,
                Err(e) => {
                    out.push(CheckEntry::error(format!("typeii.{label}.construct"), e));
                    continue;
                }
            };
            let mut tm = TypeIIMatrix::from_family(&f);
            if let Some(s) = &scheme {
                tm = tm.with_scheme(s.clone());
            }
            let cert = is_type_ii(&tm);
            out.push(CheckEntry::new(format!("typeii.{label}.type_ii"), cert.holds(), json!({"dense_checked": cert.dense})));
            let want = expected_hadamard(case, r_sign);
            out.push(match is_hadamard(&tm) {
                Ok(h) => CheckEntry::new(
                    format!("typeii.{label}.hadamard"),
                    h.hadamard == want && (!want || h.modulus_defect < 1e-12),
                    json!({"hadamard": h.hadamard, "expected": want, "modulus_defect": h.modulus_defect}),
                ),
                Err(e) => CheckEntry::error(format!("typeii.{label}.hadamard"), e),
            });
            if want {
                out.push(match non_butson_witness(&f) {
                    Ok(((i, j), x)) => {
                        CheckEntry::new(format!("typeii.{label}.non_butson"), true, json!({"pair": [i, j], "a": x.to_string()}))
                    }
                    Err(e) => CheckEntry::error(format!("typeii.{label}.non_butson"), e),
                });
            }
            if let Some(d) = tm.dense() {
                out.push(CheckEntry::new(format!("typeii.{label}.dense_type_ii"), dense_type_ii(&d), Value::Null));
            }
        }
    }
    if cfg.include_span {
        if let Some(s) = &scheme {
            for (case, r_sign, isolated) in [(Case::IV, 1, true), (Case::VI, 1, true), (Case::III, 1, false), (Case::V, 1, false)] {
                let id = format!("typeii.{}.span_condition", variant_label(case, 1, r_sign));
                let entry = family_coefficients(case, &int(4), r_sign, 1)
                    .map_err(|e| e.to_string())
                    .and_then(|f| {
                        let d = TypeIIMatrix::from_family(&f).with_scheme(s.clone()).dense().ok_or("no dense form")?;
                        span_rank(&d).map_err(|e| e.to_string())
                    })
                    .map(|c| {
                        let target = (s.n() - 1) * (s.n() - 1);
                        CheckEntry::new(
                            id.clone(),
                            (c.rank == target) == isolated,
                            json!({"rank": c.rank, "target": target, "isolated": c.rank == target, "expected_isolated": isolated}),
                        )
                    });
                out.push(entry.unwrap_or_else(|e| CheckEntry::error(id, e)));
            }
        }
    }
    out
}

fn k_display(k: &[TowerElement]) -> Value {
    json!(k.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn haagerup_suite(cfg: &ReportConfig) -> Vec<CheckEntry> {
    let mut out = Vec::new();
    let q = int(cfg.q);
    let scheme = concrete(cfg.q);
    let mut reps: Vec<(Case, WeightFamily, HaagerupData)> = Vec::new();
    for case in Case::ALL {
        for (branch, r_sign) in family_variants(case) {
            let label = variant_label(case, branch, r_sign);
            let f = match family_coefficients(case, &q, r_sign, branch) {
                Ok(f) => f,
                Err(e) => {
                    out.push(CheckEntry::error(format!("haagerup.{label}"), e));
                    continue;
                }
            };
            let data = match haagerup_of_family(&f) {
                Ok(d) => d,
                Err(e) => {
                    out.push(CheckEntry::error(format!("haagerup.{label}.formula"), e));
                    continue;
                }
            };
            if let Some(s) = &scheme {
                let dense = TypeIIMatrix::from_family(&f).with_scheme(s.clone()).dense();
                let brute = dense.map(|d| haagerup_bruteforce(&d));
                let ok = matches!(&brute, Some(Ok(b)) if b.h_set == data.h_set && b.k_set == data.k_set);
                out.push(CheckEntry::new(format!("haagerup.{label}.oracle"), ok, json!({"h_size": data.h_set.len()})));
            }
            if expected_hadamard(case, r_sign) {
                let inside = data.k_set.iter().all(|k| in_unit_interval(k).unwrap_or(false));
                out.push(CheckEntry::new(format!("haagerup.{label}.k_in_interval"), inside, Value::Null));
            }
            if branch == 1 {
                reps.push((case, f, data));
            }
        }
    }
    for (case, f, _) in reps.iter().filter(|(_, f, _)| f.r_sign == 1) {
        out.push(match check_table_row(f) {
            Ok(c) => CheckEntry::new(format!("haagerup.table_row.{case}"), c.holds(), serde_json::to_value(&c).unwrap_or_default()),
            Err(e) => CheckEntry::error(format!("haagerup.table_row.{case}"), e),
        });
    }
    let plus: Vec<&(Case, WeightFamily, HaagerupData)> = reps.iter().filter(|(_, f, _)| f.r_sign == 1).collect();
    for (i, a) in plus.iter().enumerate() {
        for b in &plus[i + 1..] {
            let id = format!("haagerup.distinct.{}.{}", a.0, b.0);
            out.push(match distinguish(&a.2, &b.2) {
                Ok(d) => CheckEntry::new(id, d.witness.is_some(), d.to_json()),
                Err(e) => CheckEntry::error(id, e),
            });
        }
    }
    let vi: Vec<&(Case, WeightFamily, HaagerupData)> = reps.iter().filter(|(c, _, _)| *c == Case::VI).collect();
    if let [p, m] = vi.as_slice() {
        let a01 = m.1.a[0].clone();
        let minus_out = outside_interval(&m.2.k_set).ok().flatten();
        let plus_in = outside_interval(&p.2.k_set).map(|x| x.is_none()).unwrap_or(false);
        let a01_out = !in_unit_interval(&a01).unwrap_or(true) && m.2.contains_k(&a01);
        out.push(CheckEntry::new(
            "haagerup.r_sign_distinct",
            plus_in && minus_out.is_some() && a01_out,
            json!({"a01_minus": a01.to_string(), "first_outside": minus_out.map(|x| x.to_string())}),
        ));
    }
    for case in [Case::I, Case::II] {
        for branch in [1, -1] {
            let id = format!("haagerup.inverse_inequivalent.{}", variant_label(case, branch, 1));
            let r = family_coefficients(case, &q, 1, branch).map_err(|e| e.to_string()).and_then(|f| check_inverse_inequivalence(&f).map_err(|e| e.to_string()));
            out.push(match r {
                Ok(c) => CheckEntry::new(id, c.holds(), serde_json::to_value(&c).unwrap_or_default()),
                Err(e) => CheckEntry::error(id, e),
            });
        }
    }
    if let Some((_, _, d)) = reps.iter().find(|(c, _, _)| *c == Case::I) {
        out.push(CheckEntry::new("haagerup.k_set.i", true, k_display(&d.k_set)));
    }
    out
}

fn nomura_suite() -> Vec<CheckEntry> {
    let mut out = Vec::new();
    let Some(s) = concrete(4) else {
        return vec![CheckEntry::error("nomura.scheme", "no concrete scheme")];
    };
    for case in Case::ALL {
        let signs: &[i8] = if case == Case::VI { &[1, -1] } else { &[1] };
        for &r_sign in signs {
            let label = variant_label(case, 1, r_sign);
            let f = match family_coefficients(case, &int(4), r_sign, 1) {
                Ok(f) => f,
                Err(e) => {
                    out.push(CheckEntry::error(format!("nomura.{label}"), e));
                    continue;
                }
            };
            let tm = TypeIIMatrix::from_family(&f).with_scheme(s.clone());
            out.push(match nomura_dimension_checked(&tm) {
                Ok(r) => CheckEntry::new(format!("nomura.{label}.dimension"), r.dim_n == 2, serde_json::to_value(&r).unwrap_or_default()),
                Err(e) => CheckEntry::error(format!("nomura.{label}.dimension"), e),
            });
            if let Some(d) = tm.dense() {
                out.push(match jones_structure_report(&d, &s) {
                    Ok(r) => CheckEntry::new(format!("nomura.{label}.structure"), r.holds(), r.to_json()),
                    Err(e) => CheckEntry::error(format!("nomura.{label}.structure"), e),
                });
            }
        }
    }
    let syl = JonesGraph::build(&sylvester4()).map(|g| g.num_components());
    out.push(CheckEntry::new("nomura.control.sylvester4", syl == Ok(4), json!({"dimension": syl.ok()})));
    out
}

fn pell_suite(cfg: &ReportConfig) -> Vec<CheckEntry> {
    let p = PellProblem::seventeen();
    let base: Vec<Value> = p.base_solutions().iter().map(|s| json!([s.x.to_string(), s.y.to_string()])).collect();
    let expected_base = json!([["8", "0"], ["9", "1"], ["26", "6"]]);
    let mut out = vec![CheckEntry::new("pell.base_solutions", json!(base) == expected_base, json!(base))];
    let (lo, hi) = cfg.pell_range;
    let ordered = integral_r_q_values_ordered(lo, hi);
    let sorted = integral_r_q_values(lo, hi);
    let all_integral = sorted.iter().all(|q| matches!(is_r_integer(q), Ok(Some(_))));
    let not_four = matches!(is_r_integer(&BigInt::from(4)), Ok(None));
    out.push(
        CheckEntry::new(
            "pell.integral_r_sequence",
            all_integral && not_four && ordered.len() == (hi - lo + 1) as usize,
            json!({
                "ordered": ordered.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                "sorted": sorted.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            }),
        )
        .with_range(format!("n in {lo}..={hi}")),
    );
    let checks = pell_checks(lo, hi);
    out.push(CheckEntry::new("pell.unit_and_congruences", checks.all(), serde_json::to_value(&checks).unwrap_or_default()));
    let oracle = descent_oracle(&p, cfg.descent_limit);
    out.push(CheckEntry::new("pell.descent_oracle", oracle.unexplained.is_empty(), serde_json::to_value(&oracle).unwrap_or_default()));
    let r10 = is_r_integer(&BigInt::from(10)).ok().flatten();
    out.push(CheckEntry::new("pell.r_at_ten", r10 == Some(BigInt::from(39)), json!({"r": r10.map(|r| r.to_string())})));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn pell_suite_passes() {
        let cfg = ReportConfig { descent_limit: 10_000, ..ReportConfig::default() };
        let r = run(Suite::Pell, &cfg);
        assert!(r.passed, "{}", r.to_pretty());
        assert!(r.to_csv().starts_with("suite,check_id"));
    }

    #[test]
    fn scheme_suite_passes() {
        let r = run(Suite::Scheme, &ReportConfig::default());
        assert!(r.passed, "{}", r.to_pretty());
        assert_eq!(r.first_failing_suite(), None);
    }
}
