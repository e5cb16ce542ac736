//! Haagerup sets and K-sets of type-II matrices, and the arguments that
//! separate equivalence classes with them.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactfield::linalg::Matrix;
use crate::exactfield::{compare_real, int, is_real, json as ejson, FieldError, Rational, TowerElement};
use crate::scheme::{fuse_table, ParametricScheme, SchemeError};
use crate::typeii::{Case, TypeIIError, WeightFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("brute force limited to order 64, got {0}")]
    TooLarge(usize),
    #[error("hypothesis failed: {0}")]
    HypothesisFail(String),
    #[error("zero entry")]
    ZeroEntry,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    TypeII(#[from] TypeIIError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Formula,
    Bruteforce,
}

/// `H(W)` and `K(W) = {w + 1/w : w in H(W), w != 1}` as sorted, deduplicated
/// sequences of reduced elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaagerupData {
    pub h_set: Vec<TowerElement>,
    pub k_set: Vec<TowerElement>,
    pub provenance: Provenance,
}

fn canonical(items: impl IntoIterator<Item = TowerElement>) -> Vec<TowerElement> {
    items.into_iter().map(|x| x.reduce()).collect::<BTreeSet<_>>().into_iter().collect()
}

impl HaagerupData {
    pub fn from_h(h: impl IntoIterator<Item = TowerElement>, provenance: Provenance) -> Result<Self, InvariantError> {
        let h_set = canonical(h);
        let mut k = Vec::new();
        for w in &h_set {
            if !w.is_one() {
                k.push(w + &w.inv().ok_or(InvariantError::ZeroEntry)?);
            }
        }
        Ok(HaagerupData { h_set, k_set: canonical(k), provenance })
    }

    pub fn contains_one(&self) -> bool {
        self.h_set.iter().any(TowerElement::is_one)
    }

    pub fn inversion_closed(&self) -> bool {
        self.h_set.iter().all(|w| w.inv().map(|v| self.h_set.binary_search(&v.reduce()).is_ok()).unwrap_or(false))
    }

    pub fn contains_h(&self, x: &TowerElement) -> bool {
        self.h_set.binary_search(&x.reduce()).is_ok()
    }

    pub fn contains_k(&self, x: &TowerElement) -> bool {
        self.k_set.binary_search(&x.reduce()).is_ok()
    }

    /// `H(W)` without 1.
    pub fn nontrivial(&self) -> Vec<TowerElement> {
        self.h_set.iter().filter(|w| !w.is_one()).cloned().collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "provenance": self.provenance,
            "h_set": self.h_set.iter().map(ejson::to_json).collect::<Vec<_>>(),
            "k_set": self.k_set.iter().map(ejson::to_json).collect::<Vec<_>>(),
            "h_display": self.h_set.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "k_display": self.k_set.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// `H(W)` from every quadruple `(x1, x2, y1, y2)` of a dense matrix. Entries
/// are first indexed by exact value, so each distinct entry quadruple is
/// evaluated once.
pub fn haagerup_bruteforce(w: &Matrix<TowerElement>) -> Result<HaagerupData, InvariantError> {
    let n = w.len();
    if n > 64 {
        return Err(InvariantError::TooLarge(n));
    }
    let mut index: HashMap<TowerElement, usize> = HashMap::new();
    let mut values = Vec::new();
    let idx: Vec<Vec<usize>> = w
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let x = x.reduce();
                    *index.entry(x.clone()).or_insert_with(|| {
                        values.push(x);
                        values.len() - 1
                    })
                })
                .collect()
        })
        .collect();
    let inv: Vec<TowerElement> = values.iter().map(TowerElement::inv).collect::<Option<_>>().ok_or(InvariantError::ZeroEntry)?;
    let mut quads = BTreeSet::new();
    for x1 in 0..n {
        for x2 in 0..n {
            for y1 in 0..n {
                for y2 in 0..n {
                    quads.insert((idx[x1][y1], idx[x2][y2], idx[x1][y2], idx[x2][y1]));
                }
            }
        }
    }
    let h = quads.into_iter().map(|(a, b, c, d)| &(&(&values[a] * &values[b]) * &inv[c]) * &inv[d]);
    HaagerupData::from_h(h, Provenance::Bruteforce)
}

/// Positivity hypotheses under which the three-part union formula is
/// exact: `p_{i1 j1}^2 > 0` for `i1, j1` in `{1, 2}` and `p_{2 j}^3 > 0` for
/// `j` in `{1, 2}`.
pub fn formula_hypotheses(p: &[Vec<Vec<Rational>>]) -> Result<(), InvariantError> {
    for i1 in 1..=2 {
        for j1 in 1..=2 {
            if p[i1][j1][2] <= Rational::zero() {
                return Err(InvariantError::HypothesisFail(format!("p_{i1}{j1}^2 = {}", p[i1][j1][2])));
            }
        }
    }
    for j in 1..=2 {
        if p[2][j][3] <= Rational::zero() {
            return Err(InvariantError::HypothesisFail(format!("p_2{j}^3 = {}", p[2][j][3])));
        }
    }
    Ok(())
}

/// `H(W)` from the weights: `{w_i^{±2}}`, the quotients
/// `(w_i1 w_i2 / w_i3)^{±1}` with `p_{i2 i3}^{i1} > 0`, and all
/// `w_i1 w_i2 / (w_j1 w_j2)`.
pub fn haagerup_symbolic(weights: &[TowerElement], q: &Rational) -> Result<HaagerupData, InvariantError> {
    let p = ParametricScheme::new().table_at(q);
    formula_hypotheses(&p)?;
    let w = weights;
    let inv: Vec<TowerElement> = w.iter().map(TowerElement::inv).collect::<Option<_>>().ok_or(InvariantError::ZeroEntry)?;
    let mut h = vec![TowerElement::one(w[0].tower())];
    for i in 1..=3 {
        h.push(w[i].square());
        h.push(inv[i].square());
    }
    for i1 in 1..=3 {
        for i2 in 1..=3 {
            for i3 in 1..=3 {
                if p[i2][i3][i1] > Rational::zero() {
                    let x = &(&w[i1] * &w[i2]) * &inv[i3];
                    h.push(x.inv().ok_or(InvariantError::ZeroEntry)?);
                    h.push(x);
                }
            }
        }
    }
    for i1 in 1..=3 {
        for i2 in 1..=3 {
            for j1 in 1..=3 {
                for j2 in 1..=3 {
                    h.push(&(&(&w[i1] * &w[i2]) * &inv[j1]) * &inv[j2]);
                }
            }
        }
    }
    HaagerupData::from_h(h, Provenance::Formula)
}

pub fn haagerup_of_family(f: &WeightFamily) -> Result<HaagerupData, InvariantError> {
    haagerup_symbolic(&f.weights, &f.q)
}

/// Listed description of `H(W) \ {1}` for each case, in terms of the weights.
pub fn table_row(case: Case, w: &[TowerElement]) -> Result<Vec<TowerElement>, InvariantError> {
    let pw = |x: &TowerElement, e: i64| x.pow(e).ok_or(InvariantError::ZeroEntry);
    let pm = |x: &TowerElement, es: &[i64]| -> Result<Vec<TowerElement>, InvariantError> {
        let mut out = Vec::new();
        for &e in es {
            out.push(pw(x, e)?);
            out.push(pw(x, -e)?);
        }
        Ok(out)
    };
    let signed = |v: Vec<TowerElement>| v.into_iter().flat_map(|x| [-&x, x]).collect::<Vec<_>>();
    let minus_one = -&TowerElement::one(w[0].tower());
    let (w1, w2, w3) = (&w[1], &w[2], &w[3]);
    let row = match case {
        Case::I => pm(w1, &[1, 2])?,
        Case::II => {
            let w3w1 = w3.try_div(w1)?;
            let w12w3 = w1.square().try_div(w3)?;
            [pm(w1, &[1, 2])?, pm(w3, &[1, 2])?, pm(&w12w3, &[1])?, pm(&w3w1, &[1, 2])?].concat()
        }
        Case::III => {
            let mut v = signed(pm(w1, &[1, 2])?);
            v.push(minus_one);
            v
        }
        Case::IV => pm(w2, &[1, 2])?,
        Case::V => pm(w1, &[1, 2, 3, 4])?,
        Case::VI => {
            let mut v = vec![minus_one];
            v.extend(signed([pm(w1, &[1, 2])?, pm(w2, &[1, 2])?].concat()));
            for e1 in [1, -1] {
                for e2 in [1, -1] {
                    let x = &pw(w1, e1)? * &pw(w2, e2)?;
                    v.push(x.square());
                    v.push(-&x);
                    v.push(x);
                }
            }
            v.extend(signed(pm(&w1.square().try_div(w2)?, &[1])?));
            v.extend(signed(pm(&w1.try_div(&w2.square())?, &[1])?));
            v
        }
    };
    Ok(canonical(row))
}

/// Whether `x` is real with `-2 <= x <= 2` under the principal embedding.
pub fn in_unit_interval(x: &TowerElement) -> Result<bool, InvariantError> {
    let x = x.reduce();
    let signs = vec![1i8; x.tower().depth()];
    if !is_real(&x, &signs)? {
        return Ok(false);
    }
    let two = TowerElement::from_int(x.tower(), 2);
    Ok(compare_real(&x, &two, &signs)? != Ordering::Greater && compare_real(&x, &-&two, &signs)? != Ordering::Less)
}

/// First element of a K-set outside `[-2, 2]`.
pub fn outside_interval(k: &[TowerElement]) -> Result<Option<TowerElement>, InvariantError> {
    for x in k {
        if !in_unit_interval(x)? {
            return Ok(Some(x.clone()));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    DistinctK,
    Inconclusive,
}

/// Comparison of two K-sets.
#[derive(Clone, Debug)]
pub struct Distinction {
    pub verdict: Verdict,
    pub only_in_a: Vec<TowerElement>,
    pub only_in_b: Vec<TowerElement>,
    /// One element from the symmetric difference.
    pub witness: Option<TowerElement>,
    /// Set when one K-set lies in `[-2, 2]` and the other has an element
    /// outside it; names the side (`"a"` or `"b"`) and the element.
    pub interval_witness: Option<(String, TowerElement)>,
}

impl Distinction {
    pub fn to_json(&self) -> Value {
        let show = |v: &[TowerElement]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "verdict": self.verdict,
            "only_in_a": show(&self.only_in_a),
            "only_in_b": show(&self.only_in_b),
            "witness": self.witness.as_ref().map(|x| x.to_string()),
            "interval_witness": self.interval_witness.as_ref().map(|(s, x)| json!({"side": s, "element": x.to_string()})),
        })
    }
}

/// Separates two matrices by their K-sets, exactly.
pub fn distinguish(a: &HaagerupData, b: &HaagerupData) -> Result<Distinction, InvariantError> {
    let only_in_a: Vec<TowerElement> = a.k_set.iter().filter(|x| !b.contains_k(x)).cloned().collect();
    let only_in_b: Vec<TowerElement> = b.k_set.iter().filter(|x| !a.contains_k(x)).cloned().collect();
    let witness = only_in_b.first().or(only_in_a.first()).cloned();
    let out_a = outside_interval(&a.k_set)?;
    let out_b = outside_interval(&b.k_set)?;
    let interval_witness = match (out_a, out_b) {
        (None, Some(x)) => Some(("b".to_string(), x)),
        (Some(x), None) => Some(("a".to_string(), x)),
        _ => None,
    };
    let verdict = if witness.is_some() { Verdict::DistinctK } else { Verdict::Inconclusive };
    Ok(Distinction { verdict, only_in_a, only_in_b, witness, interval_witness })
}

pub fn distinguish_families(fa: &WeightFamily, fb: &WeightFamily) -> Result<Distinction, InvariantError> {
    distinguish(&haagerup_of_family(fa)?, &haagerup_of_family(fb)?)
}

/// Hypotheses that force any equivalence between two matrices of the
/// fused algebra to be a scalar multiple, and the scalar test against the
/// entrywise inverse.
#[derive(Clone, Debug, Serialize)]
pub struct InverseInequivalence {
    pub case: String,
    pub q: String,
    pub partition: Vec<Vec<usize>>,
    pub valencies: Vec<String>,
    pub valencies_distinct: bool,
    pub distinct_entries: usize,
    pub entry_count_ok: bool,
    pub min_p11: String,
    pub half_order: String,
    pub p11_exceeds_half: bool,
    /// Fused weights that differ from their inverses, so no scalar maps `W`
    /// to its entrywise inverse.
    pub scalar_excluded: bool,
}

impl InverseInequivalence {
    pub fn holds(&self) -> bool {
        self.valencies_distinct && self.entry_count_ok && self.p11_exceeds_half && self.scalar_excluded
    }
}

pub fn fusion_for(case: Case) -> Option<Vec<Vec<usize>>> {
    match case {
        Case::I => Some(vec![vec![0], vec![1, 2, 3]]),
        Case::II => Some(vec![vec![0], vec![1, 2], vec![3]]),
        _ => None,
    }
}

/// Checks that a case-I or case-II matrix is inequivalent to its entrywise
/// inverse.
pub fn check_inverse_inequivalence(f: &WeightFamily) -> Result<InverseInequivalence, InvariantError> {
    let partition = fusion_for(f.case)
        .ok_or_else(|| InvariantError::HypothesisFail(format!("no fusion recorded for case {}", f.case)))?;
    let p = ParametricScheme::new().table_at(&f.q);
    let fp = fuse_table(&p, &partition)?;
    let e = partition.len();
    let valencies: Vec<Rational> = (0..e).map(|i| fp[i][i][0].clone()).collect();
    let valencies_distinct = (0..e).all(|i| (i + 1..e).all(|j| valencies[i] != valencies[j]));
    let fused_w: Vec<TowerElement> = partition.iter().map(|part| f.weights[part[0]].reduce()).collect();
    let constant_on_parts = partition.iter().all(|part| part.iter().all(|&i| f.weights[i] == f.weights[part[0]]));
    if !constant_on_parts {
        return Err(InvariantError::HypothesisFail("weights are not constant on fused classes".into()));
    }
    let distinct_entries = fused_w.iter().collect::<BTreeSet<_>>().len();
    let inverses: Vec<TowerElement> = fused_w.iter().map(|w| w.inv().map(|x| x.reduce())).collect::<Option<_>>().ok_or(InvariantError::ZeroEntry)?;
    let inverse_distinct = inverses.iter().collect::<BTreeSet<_>>().len();
    let entry_count_ok = distinct_entries == e && inverse_distinct == e;
    let min_p11 = (1..e).map(|i| fp[1][1][i].clone()).min().unwrap_or_else(Rational::zero);
    let size: Rational = valencies.iter().sum();
    let half_order = &size / int(2);
    let p11_exceeds_half = min_p11 > half_order;
    let scalar_excluded = fused_w.iter().zip(&inverses).any(|(w, v)| w != v);
    Ok(InverseInequivalence {
        case: f.case.label().to_string(),
        q: f.q.to_string(),
        partition,
        valencies: valencies.iter().map(|v| v.to_string()).collect(),
        valencies_distinct,
        distinct_entries,
        entry_count_ok,
        min_p11: min_p11.to_string(),
        half_order: half_order.to_string(),
        p11_exceeds_half,
        scalar_excluded,
    })
}

/// Values listed for `K(W)` for each case; `complete` marks rows given in
/// full.
pub fn listed_k_values(case: Case, f: &WeightFamily) -> (Vec<TowerElement>, bool) {
    let q = &f.q;
    let t = f.a[0].tower();
    let e = |x: Rational| TowerElement::from_rational(t, x);
    let q2 = q * q;
    let q4 = &q2 * &q2;
    let one = Rational::one();
    match case {
        Case::I => (vec![e(-&q2 + int(3)), e(&q4 - int(6) * &q2 + int(7))], true),
        Case::II => (
            vec![
                e(-&q2 + int(3)),
                e(&q4 - int(6) * &q2 + int(7)),
                e((&q2 * q - int(3) * &q2 - q + int(7)) / (&q2 - int(2) * q - &one)),
            ],
            false,
        ),
        Case::III => {
            let a = int(2) * (&q2 - int(6)) / (&q2 - int(4));
            let b = int(2) * (&q4 - int(16) * &q2 + int(56)) / ((&q2 - int(4)) * (&q2 - int(4)));
            (vec![e(int(-2)), e(a.clone()), e(-a), e(b.clone()), e(-b)], true)
        }
        Case::IV => (vec![e(int(-2) * (&q2 - int(2)) / &q2), e(int(2) * (&q4 - int(8) * &q2 + int(8)) / &q4)], true),
        Case::V => (vec![e(int(-2) / q)], false),
        Case::VI => (vec![e(int(-2)), f.a[0].clone()], false),
    }
}

/// Agreement of computed sets with the listed rows.
#[derive(Clone, Debug, Serialize)]
pub struct TableRowCheck {
    pub case: String,
    pub h_matches_row: bool,
    pub listed_k_present: bool,
    pub k_complete_matches: Option<bool>,
    pub h_size: usize,
    pub k_size: usize,
}

impl TableRowCheck {
    pub fn holds(&self) -> bool {
        self.h_matches_row && self.listed_k_present && self.k_complete_matches.unwrap_or(true)
    }
}

pub fn check_table_row(f: &WeightFamily) -> Result<TableRowCheck, InvariantError> {
    let data = haagerup_of_family(f)?;
    let row = table_row(f.case, &f.weights)?;
    let (listed, complete) = listed_k_values(f.case, f);
    let listed = canonical(listed);
    Ok(TableRowCheck {
        case: f.case.label().to_string(),
        h_matches_row: data.nontrivial() == row,
        listed_k_present: listed.iter().all(|x| data.contains_k(x)),
        k_complete_matches: complete.then(|| data.k_set == listed),
        h_size: data.h_set.len(),
        k_size: data.k_set.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::TowerDescriptor;
    use crate::typeii::family_coefficients;

    #[test]
    fn all_ones_matrix() {
        let t = TowerDescriptor::rational();
        let j = vec![vec![TowerElement::one(&t); 5]; 5];
        let h = haagerup_bruteforce(&j).unwrap();
        assert_eq!(h.h_set.len(), 1);
        assert!(h.k_set.is_empty());
    }

    #[test]
    fn too_large_is_rejected() {
        let t = TowerDescriptor::rational();
        let j = vec![vec![TowerElement::one(&t); 65]; 65];
        assert_eq!(haagerup_bruteforce(&j), Err(InvariantError::TooLarge(65)));
    }

    #[test]
    fn interval_membership() {
        let t = TowerDescriptor::rational();
        assert!(in_unit_interval(&TowerElement::from_int(&t, 2)).unwrap());
        assert!(in_unit_interval(&TowerElement::from_int(&t, -2)).unwrap());
        assert!(!in_unit_interval(&TowerElement::from_rational(&t, crate::exactfield::rat(-13, 1))).unwrap());
    }

    #[test]
    fn case_one_k_set() {
        let f = family_coefficients(Case::I, &int(4), 1, 1).unwrap();
        let h = haagerup_of_family(&f).unwrap();
        let t = h.k_set[0].tower().clone();
        let expected = canonical([TowerElement::from_int(&t, -13), TowerElement::from_int(&t, 167)]);
        assert_eq!(h.k_set, expected);
        assert!(h.contains_one() && h.inversion_closed());
    }

    #[test]
    fn rows_match_formula_for_several_q() {
        for q in [4, 6, 8, 10] {
            for case in Case::ALL {
                let f = family_coefficients(case, &int(q), 1, 1).unwrap();
                let c = check_table_row(&f).unwrap();
                assert!(c.holds(), "q={q} {c:?}");
            }
        }
    }

    #[test]
    fn inverse_inequivalence_cases_one_and_two() {
        for case in [Case::I, Case::II] {
            for q in [4, 6, 12] {
                let f = family_coefficients(case, &int(q), 1, 1).unwrap();
                let r = check_inverse_inequivalence(&f).unwrap();
                assert!(r.holds(), "{r:?}");
            }
        }
        let f = family_coefficients(Case::III, &int(4), 1, 1).unwrap();
        assert!(check_inverse_inequivalence(&f).is_err());
    }
}
