//! Symmetric association schemes: concrete relation partitions, intersection
//! numbers, eigenmatrices and fusions, plus the parametric three-class family
//! whose first eigenmatrix depends on an even parameter `q`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactfield::linalg::{inverse, mat_mul, row_reduce, Matrix};
use crate::exactfield::tower::charpoly;
use crate::exactfield::{int, rat, FieldElem, Poly, RatFuncQ, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("scheme axioms violated: {}", .0.join("; "))]
    Axioms(Vec<String>),
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
    #[error("partition does not define a fusion scheme: {0}")]
    NotAFusion(String),
    #[error("eigenmatrix is singular")]
    SingularP,
    #[error("spectrum is not rational")]
    NonRationalSpectrum,
}

/// `p[i][j][k]` is the intersection number `p_ij^k`.
pub type IntersectionTable = Vec<Vec<Vec<i64>>>;

/// An association scheme given by its relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteScheme {
    n: usize,
    d: usize,
    rel: Vec<Vec<usize>>,
    p: IntersectionTable,
}

/// Result of checking the scheme axioms on a relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<String>,
    pub p: Option<IntersectionTable>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `rel` (an `n x n` matrix of class indices `0..=d`) defines a
/// symmetric association scheme and computes its intersection numbers.
pub fn verify_axioms(rel: &[Vec<usize>]) -> AxiomReport {
    let n = rel.len();
    let mut v = Vec::new();
    if rel.iter().any(|row| row.len() != n) {
        v.push("relation matrix is not square".to_string());
        return AxiomReport { violations: v, p: None };
    }
    let d = rel.iter().flatten().copied().max().unwrap_or(0);
    for x in 0..n {
        for y in 0..n {
            if (x == y) != (rel[x][y] == 0) {
                v.push(format!("A_0 = I fails at ({x},{y})"));
            }
            if rel[x][y] != rel[y][x] {
                v.push(format!("A_{} is not symmetric at ({x},{y})", rel[x][y]));
            }
        }
    }
    let used: BTreeSet<usize> = rel.iter().flatten().copied().collect();
    for c in 0..=d {
        if !used.contains(&c) {
            v.push(format!("class {c} is empty"));
        }
    }
    if !v.is_empty() {
        return AxiomReport { violations: v, p: None };
    }
    let mut p = vec![vec![vec![-1i64; d + 1]; d + 1]; d + 1];
    for x in 0..n {
        for y in 0..n {
            let k = rel[x][y];
            let mut counts = vec![vec![0i64; d + 1]; d + 1];
            for z in 0..n {
                counts[rel[x][z]][rel[z][y]] += 1;
            }
            for i in 0..=d {
                for j in 0..=d {
                    if p[i][j][k] < 0 {
                        p[i][j][k] = counts[i][j];
                    } else if p[i][j][k] != counts[i][j] {
                        v.push(format!("p_{i}{j}^{k} is not constant on class {k}"));
                    }
                }
            }
        }
    }
    for i in 0..=d {
        for j in 0..=d {
            for k in 0..=d {
                if p[i][j][k] != p[j][i][k] {
                    v.push(format!("p_{i}{j}^{k} != p_{j}{i}^{k}"));
                }
            }
        }
    }
    v.sort();
    v.dedup();
    AxiomReport { p: if v.is_empty() { Some(p) } else { None }, violations: v }
}

/// The 15-vertex three-class scheme on the line graph of the Petersen graph.
///
/// Petersen vertices are the 2-subsets of a 5-set, adjacent when disjoint;
/// the scheme lives on its 15 edges with `A_1` the line graph adjacency,
/// `A_2 = A_1^2 - A_1 - 4I` and `A_3 = J - I - A_1 - A_2`.
pub fn build_petersen_line_scheme() -> Result<ConcreteScheme, SchemeError> {
    let pairs: Vec<(usize, usize)> =
        (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let disjoint = |u: (usize, usize), v: (usize, usize)| u.0 != v.0 && u.0 != v.1 && u.1 != v.0 && u.1 != v.1;
    let mut edges = Vec::new();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            if disjoint(pairs[i], pairs[j]) {
                edges.push((i, j));
            }
        }
    }
    let n = edges.len();
    let share = |e: (usize, usize), f: (usize, usize)| e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1;
    let a1: Vec<Vec<i64>> = (0..n)
        .map(|x| (0..n).map(|y| i64::from(x != y && share(edges[x], edges[y]))).collect())
        .collect();
    let mut rel = vec![vec![0usize; n]; n];
    for x in 0..n {
        for y in 0..n {
            let sq: i64 = (0..n).map(|z| a1[x][z] * a1[z][y]).sum();
            let a2 = sq - a1[x][y] - if x == y { 4 } else { 0 };
            let a3 = 1 - i64::from(x == y) - a1[x][y] - a2;
            rel[x][y] = match (x == y, a1[x][y], a2, a3) {
                (true, 0, 0, 0) => 0,
                (false, 1, 0, 0) => 1,
                (false, 0, 1, 0) => 2,
                (false, 0, 0, 1) => 3,
                _ => {
                    return Err(SchemeError::InternalConsistency(format!(
                        "A_2 or A_3 is not a 0/1 matrix at ({x},{y})"
                    )))
                }
            };
        }
    }
    let scheme = ConcreteScheme::from_relations(rel)
        .map_err(|e| SchemeError::InternalConsistency(e.to_string()))?;
    let dm = graph_distances(&a1);
    if dm != scheme.rel.iter().map(|r| r.to_vec()).collect::<Vec<_>>() {
        return Err(SchemeError::InternalConsistency("distance matrix differs from A1 + 2A2 + 3A3".into()));
    }
    Ok(scheme)
}

/// All-pairs shortest path lengths of a simple graph (breadth-first search).
pub fn graph_distances(adj: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut out = vec![vec![usize::MAX; n]; n];
    for s in 0..n {
        let mut queue = std::collections::VecDeque::from([s]);
        out[s][s] = 0;
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if adj[u][v] != 0 && out[s][v] == usize::MAX {
                    out[s][v] = out[s][u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    out
}

impl ConcreteScheme {
    pub fn from_relations(rel: Vec<Vec<usize>>) -> Result<Self, SchemeError> {
        let report = verify_axioms(&rel);
        match report.p {
            Some(p) => Ok(ConcreteScheme { n: rel.len(), d: p.len() - 1, rel, p }),
            None => Err(SchemeError::Axioms(report.violations)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn relations(&self) -> &[Vec<usize>] {
        &self.rel
    }

    pub fn class(&self, x: usize, y: usize) -> usize {
        self.rel[x][y]
    }

    /// `p_ij^k`.
    pub fn p(&self, i: usize, j: usize, k: usize) -> i64 {
        self.p[i][j][k]
    }

    pub fn intersection_numbers(&self) -> &IntersectionTable {
        &self.p
    }

    pub fn valencies(&self) -> Vec<i64> {
        (0..=self.d).map(|i| self.p[i][i][0]).collect()
    }

    /// 0/1 adjacency matrix of class `i`.
    pub fn adjacency(&self, i: usize) -> Vec<Vec<u8>> {
        self.rel.iter().map(|row| row.iter().map(|&c| u8::from(c == i)).collect()).collect()
    }

    /// Matrix `sum_i c_i A_i` with entries in any field type.
    pub fn expand<T: Clone>(&self, coeffs: &[T]) -> Vec<Vec<T>> {
        self.rel.iter().map(|row| row.iter().map(|&c| coeffs[c].clone()).collect()).collect()
    }

    pub fn eigen_data(&self) -> Result<SpectralData<Rational>, SchemeError> {
        eigen_data_from_table(&self.p)
    }

    /// Merges classes according to `partition` (a list of class sets that
    /// covers `0..=d` with `{0}` on its own).
    pub fn fuse(&self, partition: &[Vec<usize>]) -> Result<ConcreteScheme, SchemeError> {
        let map = partition_map(partition, self.d)?;
        let rel = self.rel.iter().map(|row| row.iter().map(|&c| map[c]).collect()).collect();
        ConcreteScheme::from_relations(rel).map_err(|e| SchemeError::NotAFusion(e.to_string()))
    }

    /// JSON export with the relation matrix and basic metadata.
    pub fn to_json(&self, q: Option<i64>) -> Value {
        json!({
            "d": self.d,
            "q": q,
            "relations": self.rel,
            "valencies": self.valencies(),
        })
    }
}

fn partition_map(partition: &[Vec<usize>], d: usize) -> Result<Vec<usize>, SchemeError> {
    let mut map = vec![usize::MAX; d + 1];
    for (idx, part) in partition.iter().enumerate() {
        for &c in part {
            if c > d || map[c] != usize::MAX {
                return Err(SchemeError::NotAFusion(format!("class {c} repeated or out of range")));
            }
            map[c] = idx;
        }
    }
    if map.contains(&usize::MAX) {
        return Err(SchemeError::NotAFusion("partition does not cover all classes".into()));
    }
    if partition.first().map(Vec::as_slice) != Some(&[0][..]) {
        return Err(SchemeError::NotAFusion("the identity class must stand alone first".into()));
    }
    Ok(map)
}

/// Intersection numbers of a fusion, computed from the original table:
/// `p'_IJ^K = sum_{i in I, j in J} p_ij^k`, which must not depend on the
/// choice of `k in K`.
pub fn fuse_table<T: FieldElem>(
    p: &[Vec<Vec<T>>],
    partition: &[Vec<usize>],
) -> Result<Vec<Vec<Vec<T>>>, SchemeError> {
    let d = p.len() - 1;
    partition_map(partition, d)?;
    let zero = p[0][0][0].zero_like();
    let e = partition.len();
    let mut out = vec![vec![vec![zero.clone(); e]; e]; e];
    for (ii, pi) in partition.iter().enumerate() {
        for (jj, pj) in partition.iter().enumerate() {
            for (kk, pk) in partition.iter().enumerate() {
                let mut first: Option<T> = None;
                for &k in pk {
                    let mut s = zero.clone();
                    for &i in pi {
                        for &j in pj {
                            s = s.add_ref(&p[i][j][k]);
                        }
                    }
                    match &first {
                        None => first = Some(s),
                        Some(f) if *f != s => {
                            return Err(SchemeError::NotAFusion(format!(
                                "fused p_{ii}{jj}^{kk} depends on the merged class"
                            )))
                        }
                        _ => {}
                    }
                }
                out[ii][jj][kk] = first.expect("parts are nonempty");
            }
        }
    }
    Ok(out)
}

/// Eigenmatrix of a fusion: sum the columns of each part and keep the
/// distinct rows in order of first appearance.
pub fn fuse_eigenmatrix<T: FieldElem>(p: &Matrix<T>, partition: &[Vec<usize>]) -> Matrix<T> {
    let mut rows: Matrix<T> = Vec::new();
    for row in p {
        let fused: Vec<T> = partition
            .iter()
            .map(|part| part.iter().skip(1).fold(row[part[0]].clone(), |acc, &c| acc.add_ref(&row[c])))
            .collect();
        if !rows.contains(&fused) {
            rows.push(fused);
        }
    }
    rows
}

/// First and second eigenmatrices of a commutative scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData<T> {
    pub n: T,
    pub p: Matrix<T>,
    pub q: Matrix<T>,
    /// Multiplicities `m_j = Q_{0,j}`.
    pub multiplicities: Vec<T>,
}

impl<T: FieldElem> SpectralData<T> {
    /// Builds `Q = n P^{-1}` from `P`.
    pub fn from_p(p: Matrix<T>) -> Result<Self, SchemeError> {
        let n = p[0].iter().skip(1).fold(p[0][0].clone(), |a, b| a.add_ref(b));
        let inv = inverse(&p).ok_or(SchemeError::SingularP)?;
        let q: Matrix<T> = inv.iter().map(|row| row.iter().map(|x| x.mul_ref(&n)).collect()).collect();
        let multiplicities = q[0].clone();
        Ok(SpectralData { n, p, q, multiplicities })
    }

    /// Coefficients `Q_{i,j}/n` of the primitive idempotent `E_j` in the
    /// basis `A_0..A_d`.
    pub fn idempotent_coefficients(&self, j: usize) -> Vec<T> {
        let inv_n = self.n.try_inv().expect("n is nonzero");
        self.q.iter().map(|row| row[j].mul_ref(&inv_n)).collect()
    }

    /// `QP = nI`.
    pub fn check_qp(&self) -> bool {
        let prod = mat_mul(&self.q, &self.p);
        prod.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, x)| if i == j { *x == self.n } else { x.is_zero_elem() })
        })
    }

    /// `sum_{j>=1} Q_{i,j} = n delta_{i,0} - 1` for every row `i`.
    pub fn check_q_rows(&self) -> bool {
        let one = self.n.one_like();
        self.q.iter().enumerate().all(|(i, row)| {
            let s = row.iter().skip(1).fold(self.n.zero_like(), |a, b| a.add_ref(b));
            let expect = if i == 0 { self.n.sub_ref(&one) } else { one.neg_ref() };
            s == expect
        })
    }
}

/// Spectral data from intersection numbers via the regular representation
/// `(L_j)_{k,i} = p_ji^k`. Requires a rational spectrum.
pub fn eigen_data_from_table(p: &IntersectionTable) -> Result<SpectralData<Rational>, SchemeError> {
    let d = p.len() - 1;
    let l: Vec<Matrix<Rational>> = (0..=d)
        .map(|j| (0..=d).map(|k| (0..=d).map(|i| int(p[j][i][k])).collect()).collect())
        .collect();
    // a combination of the L_j with simple spectrum
    let mut combo = None;
    'search: for weights in 1..=6i64 {
        for shift in 0..=d {
            let m: Matrix<Rational> = (0..=d)
                .map(|r| {
                    (0..=d)
                        .map(|c| {
                            (1..=d).fold(Rational::zero(), |acc, j| {
                                let w = int(((j + shift) % (d + 1)) as i64 + 1).pow(weights as i32);
                                acc + &l[j][r][c] * w
                            })
                        })
                        .collect()
                })
                .collect();
            let roots = charpoly(&m).rational_roots();
            if roots.len() == d + 1 {
                combo = Some((m, roots));
                break 'search;
            }
        }
    }
    let (m, roots) = combo.ok_or(SchemeError::NonRationalSpectrum)?;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for theta in roots {
        let mut shifted = m.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= &theta;
        }
        let v = null_vector(shifted).ok_or(SchemeError::NonRationalSpectrum)?;
        let pivot = v.iter().position(|x| !x.is_zero()).expect("null vector is nonzero");
        let row: Vec<Rational> = (0..=d)
            .map(|j| {
                let lv: Rational = (0..=d).map(|i| &l[j][pivot][i] * &v[i]).sum();
                lv / &v[pivot]
            })
            .collect();
        rows.push(row);
    }
    let valencies: Vec<Rational> = (0..=d).map(|i| int(p[i][i][0])).collect();
    let trivial = rows.iter().position(|r| *r == valencies).ok_or_else(|| {
        SchemeError::InternalConsistency("no eigenvalue row equals the valencies".into())
    })?;
    let first = rows.remove(trivial);
    if d >= 1 {
        rows.sort_by(|a, b| b[1].cmp(&a[1]).then_with(|| b.cmp(a)));
    }
    rows.insert(0, first);
    SpectralData::from_p(rows)
}

/// A nonzero vector in the kernel of a square matrix with one-dimensional
/// kernel.
fn null_vector(mut m: Matrix<Rational>) -> Option<Vec<Rational>> {
    let n = m.len();
    let piv = row_reduce(&mut m);
    let free = (0..n).find(|c| !piv.contains(c))?;
    let mut v = vec![Rational::zero(); n];
    v[free] = Rational::one();
    for (r, &c) in piv.iter().enumerate() {
        v[c] = -m[r][free].clone();
    }
    Some(v)
}

/// Polynomial in `q` with rational coefficients given as `(num, den)` pairs,
/// lowest degree first.
fn qpoly(c: &[(i64, i64)]) -> RatFuncQ {
    RatFuncQ::from_ratfunc(crate::exactfield::RatFunc::from_poly(Poly::new(
        c.iter().map(|&(a, b)| rat(a, b)).collect(),
    )))
}

/// The three-class family with first eigenmatrix depending on `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricScheme {
    /// `b[h][i][j] = p_hi^j`.
    b: Vec<Matrix<RatFuncQ>>,
    p: Matrix<RatFuncQ>,
}

impl Default for ParametricScheme {
    fn default() -> Self {
        Self::new()
    }
}

impl ParametricScheme {
    pub fn new() -> Self {
        let z = qpoly(&[]);
        let one = qpoly(&[(1, 1)]);
        let k1 = qpoly(&[(0, 1), (-1, 1), (1, 2)]); // q^2/2 - q
        let k2 = qpoly(&[(0, 1), (0, 1), (1, 2)]); // q^2/2
        let k3 = qpoly(&[(-2, 1), (1, 1)]); // q - 2
        let qm3 = qpoly(&[(-3, 1), (1, 1)]);
        let sq4 = qpoly(&[(1, 1), (-1, 1), (1, 4)]); // (q-2)^2/4
        let q_qm4 = qpoly(&[(0, 1), (-1, 1), (1, 4)]); // q(q-4)/4
        let q_qm2 = qpoly(&[(0, 1), (-1, 2), (1, 4)]); // q(q-2)/4
        let q2_4 = qpoly(&[(0, 1), (0, 1), (1, 4)]); // q^2/4
        let h4 = qpoly(&[(-2, 1), (1, 2)]); // (q-4)/2
        let h2 = qpoly(&[(-1, 1), (1, 2)]); // (q-2)/2
        let hq = qpoly(&[(0, 1), (1, 2)]); // q/2
        let b0: Matrix<RatFuncQ> =
            (0..4).map(|i| (0..4).map(|j| if i == j { one.clone() } else { z.clone() }).collect()).collect();
        let b1 = vec![
            vec![z.clone(), one.clone(), z.clone(), z.clone()],
            vec![k1.clone(), sq4.clone(), sq4.clone(), q_qm4.clone()],
            vec![z.clone(), q_qm2.clone(), q_qm2.clone(), q2_4.clone()],
            vec![z.clone(), h4.clone(), h2.clone(), z.clone()],
        ];
        let b2 = vec![
            vec![z.clone(), z.clone(), one.clone(), z.clone()],
            vec![z.clone(), q_qm2.clone(), q_qm2.clone(), q2_4.clone()],
            vec![k2.clone(), q2_4.clone(), q2_4.clone(), q2_4.clone()],
            vec![z.clone(), hq.clone(), h2.clone(), z.clone()],
        ];
        let b3 = vec![
            vec![z.clone(), z.clone(), z.clone(), one.clone()],
            vec![z.clone(), h4.clone(), h2.clone(), z.clone()],
            vec![z.clone(), hq.clone(), h2.clone(), z.clone()],
            vec![k3.clone(), z.clone(), z.clone(), qm3],
        ];
        let m1 = qpoly(&[(-1, 1)]);
        let p = vec![
            vec![one.clone(), k1, k2, k3.clone()],
            vec![one.clone(), hq.clone(), hq.neg(), m1.clone()],
            vec![one.clone(), qpoly(&[(1, 1), (-1, 2)]), hq.neg(), k3],
            vec![one, hq.neg(), hq, m1],
        ];
        ParametricScheme { b: vec![b0, b1, b2, b3], p }
    }

    pub fn d(&self) -> usize {
        3
    }

    /// `n = q^2 - 1`.
    pub fn n(&self) -> RatFuncQ {
        self.p[0].iter().fold(RatFuncQ::zero(), |a, b| a.add(b))
    }

    /// `p_ij^k` as a function of `q`.
    pub fn p(&self, i: usize, j: usize, k: usize) -> &RatFuncQ {
        &self.b[i][j][k]
    }

    /// Intersection matrix `B_h` with `(i, j)` entry `p_hi^j`.
    pub fn b_matrix(&self, h: usize) -> &Matrix<RatFuncQ> {
        &self.b[h]
    }

    pub fn eigenmatrix(&self) -> &Matrix<RatFuncQ> {
        &self.p
    }

    pub fn eigen_data(&self) -> Result<SpectralData<RatFuncQ>, SchemeError> {
        SpectralData::from_p(self.p.clone())
    }

    /// Intersection numbers at a concrete `q`, `table[i][j][k] = p_ij^k`.
    pub fn table_at(&self, q: &Rational) -> Vec<Vec<Vec<Rational>>> {
        let zero = Rational::zero();
        (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| (0..4).map(|k| self.b[i][j][k].eval_rational(q, &zero).expect("polynomial")).collect())
                    .collect()
            })
            .collect()
    }

    /// Integer intersection numbers at an even integer `q >= 4`.
    pub fn int_table_at(&self, q: i64) -> Option<IntersectionTable> {
        let t = self.table_at(&int(q));
        let mut out = vec![vec![vec![0i64; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let v = &t[i][j][k];
                    if !v.is_integer() || v.is_negative() {
                        return None;
                    }
                    out[i][j][k] = v.to_integer().to_i64()?;
                }
            }
        }
        Some(out)
    }

    pub fn eigenmatrix_at(&self, q: &Rational) -> Matrix<Rational> {
        let zero = Rational::zero();
        self.p.iter().map(|row| row.iter().map(|x| x.eval_rational(q, &zero).expect("polynomial")).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(m: &[&[i64]]) -> Matrix<Rational> {
        m.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn petersen_line_basics() {
        let s = build_petersen_line_scheme().unwrap();
        assert_eq!(s.n(), 15);
        assert_eq!(s.valencies(), vec![1, 4, 8, 2]);
        assert_eq!(s.p(1, 1, 1), 1);
    }

    #[test]
    fn counts_match_parametric_table() {
        let s = build_petersen_line_scheme().unwrap();
        let t = ParametricScheme::new().int_table_at(4).unwrap();
        assert_eq!(s.intersection_numbers(), &t);
    }

    #[test]
    fn eigenmatrices_at_four() {
        let s = build_petersen_line_scheme().unwrap();
        let e = s.eigen_data().unwrap();
        assert_eq!(e.p, ints(&[&[1, 4, 8, 2], &[1, 2, -2, -1], &[1, -1, -2, 2], &[1, -2, 2, -1]]));
        assert!(e.check_qp());
        assert!(e.check_q_rows());
        let f1 = s.fuse(&[vec![0], vec![1, 2], vec![3]]).unwrap();
        assert_eq!(f1.eigen_data().unwrap().p, ints(&[&[1, 12, 2], &[1, 0, -1], &[1, -3, 2]]));
        let f2 = s.fuse(&[vec![0], vec![1, 3], vec![2]]).unwrap();
        assert_eq!(f2.eigen_data().unwrap().p, ints(&[&[1, 6, 8], &[1, 1, -2], &[1, -3, 2]]));
        let f3 = s.fuse(&[vec![0], vec![1, 2, 3]]).unwrap();
        assert_eq!(f3.d(), 1);
        assert!(s.fuse(&[vec![0], vec![1], vec![2, 3]]).is_err());
    }

    #[test]
    fn broken_symmetry_is_reported() {
        let s = build_petersen_line_scheme().unwrap();
        let mut rel = s.relations().to_vec();
        let (x, y) = (0..15).flat_map(|x| (0..15).map(move |y| (x, y))).find(|&(x, y)| rel[x][y] == 1).unwrap();
        rel[x][y] = 2;
        let report = verify_axioms(&rel);
        assert!(!report.ok());
        assert!(report.violations.iter().any(|v| v.contains("not symmetric")));
    }

    #[test]
    fn parametric_row_sum_and_fusions() {
        let ps = ParametricScheme::new();
        let n = ps.n();
        assert_eq!(n, qpoly(&[(-1, 1), (0, 1), (1, 1)]));
        let e = ps.eigen_data().unwrap();
        assert!(e.check_qp());
        assert!(e.check_q_rows());
        let p1 = fuse_eigenmatrix(ps.eigenmatrix(), &[vec![0], vec![1, 2], vec![3]]);
        assert_eq!(p1.len(), 3);
        assert_eq!(p1[1][1], RatFuncQ::zero());
    }
}
