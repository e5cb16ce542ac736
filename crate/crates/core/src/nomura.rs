//! Nomura algebra dimension through the Jones graph: vertices are ordered
//! pairs `(a, b)`, joined when the ratio vectors `Y_ab` and `Y_cd` have
//! nonzero bilinear product.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactfield::linalg::Matrix;
use crate::exactfield::{int, Rational, TowerElement};
use crate::identities::{fixed_c, nomura_symmetry_sums, nomura_symmetry_sums_from_squares};
use crate::scheme::{ConcreteScheme, ParametricScheme};
use crate::typeii::{phi, TypeIIError, TypeIIMatrix, PAIRS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NomuraError {
    #[error("the symmetry criterion fails, so components do not give the algebra")]
    NotSymmetricAlgebra,
    #[error("structure step failed: {0}")]
    StepFailed(String),
    #[error("matrix has a zero entry")]
    ZeroEntry,
    #[error("no concrete scheme attached")]
    NoScheme,
    #[error(transparent)]
    TypeII(#[from] TypeIIError),
}

/// `(Y_ab)_x = W_xa / W_xb`.
pub fn y_vector(w: &Matrix<TowerElement>, a: usize, b: usize) -> Option<Vec<TowerElement>> {
    w.iter().map(|row| row[a].try_div(&row[b]).ok()).collect()
}

/// Ordinary bilinear product.
pub fn bilinear(u: &[TowerElement], v: &[TowerElement]) -> TowerElement {
    u.iter().zip(v).fold(TowerElement::zero(u[0].tower()), |acc, (x, y)| &acc + &(x * y))
}

/// Entries of a dense matrix replaced by indices into its distinct values.
struct Indexed {
    idx: Vec<Vec<u16>>,
    values: Vec<TowerElement>,
    inverses: Vec<TowerElement>,
}

fn index_entries(w: &Matrix<TowerElement>) -> Result<Indexed, NomuraError> {
    let mut map: HashMap<TowerElement, u16> = HashMap::new();
    let mut values = Vec::new();
    let idx = w
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let x = x.reduce();
                    *map.entry(x.clone()).or_insert_with(|| {
                        values.push(x);
                        (values.len() - 1) as u16
                    })
                })
                .collect()
        })
        .collect();
    let inverses = values.iter().map(TowerElement::inv).collect::<Option<Vec<_>>>().ok_or(NomuraError::ZeroEntry)?;
    Ok(Indexed { idx, values, inverses })
}

type ProductKey = Vec<(u16, u16, u16, u16)>;

/// Jones graph with its full adjacency and component labels.
#[derive(Clone, Debug)]
pub struct JonesGraph {
    pub n: usize,
    adjacency: Vec<Vec<bool>>,
    pub labels: Vec<usize>,
    /// Distinct inner products evaluated exactly.
    pub exact_evaluations: usize,
}

impl JonesGraph {
    pub fn build(w: &Matrix<TowerElement>) -> Result<Self, NomuraError> {
        let n = w.len();
        let ix = index_entries(w)?;
        let nv = n * n;
        let key = |u: usize, v: usize| -> ProductKey {
            let (a, b, c, d) = (u / n, u % n, v / n, v % n);
            let mut k: ProductKey =
                (0..n).map(|x| (ix.idx[x][a], ix.idx[x][c], ix.idx[x][b], ix.idx[x][d])).collect();
            k.sort_unstable();
            k
        };
        let keys: BTreeSet<ProductKey> =
            (0..nv).into_par_iter().flat_map_iter(|u| (u + 1..nv).map(move |v| key(u, v))).collect();
        let keys: Vec<ProductKey> = keys.into_iter().collect();
        let nonzero: HashMap<&ProductKey, bool> = keys
            .par_iter()
            .map(|k| {
                let t = ix.values[0].tower();
                let s = k.iter().fold(TowerElement::zero(t), |acc, &(a, c, b, d)| {
                    let num = &ix.values[a as usize] * &ix.values[c as usize];
                    &acc + &(&(&num * &ix.inverses[b as usize]) * &ix.inverses[d as usize])
                });
                (k, !s.is_zero())
            })
            .collect();
        let adjacency: Vec<Vec<bool>> = (0..nv)
            .into_par_iter()
            .map(|u| (0..nv).map(|v| u != v && nonzero[&key(u.min(v), u.max(v))]).collect())
            .collect();
        let mut uf = UnionFind::<usize>::new(nv);
        for (u, row) in adjacency.iter().enumerate() {
            for v in u + 1..nv {
                if row[v] {
                    uf.union(u, v);
                }
            }
        }
        let reps = uf.into_labeling();
        let mut relabel = HashMap::new();
        let labels = reps
            .iter()
            .map(|r| {
                let next = relabel.len();
                *relabel.entry(*r).or_insert(next)
            })
            .collect();
        Ok(JonesGraph { n, adjacency, labels, exact_evaluations: keys.len() })
    }

    pub fn vertex(&self, a: usize, b: usize) -> usize {
        a * self.n + b
    }

    pub fn adjacent(&self, ab: (usize, usize), cd: (usize, usize)) -> bool {
        self.adjacency[self.vertex(ab.0, ab.1)][self.vertex(cd.0, cd.1)]
    }

    pub fn label(&self, a: usize, b: usize) -> usize {
        self.labels[self.vertex(a, b)]
    }

    pub fn num_components(&self) -> usize {
        self.labels.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn component_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_components()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    pub fn is_symmetric(&self) -> bool {
        let nv = self.n * self.n;
        (0..nv).all(|u| (0..nv).all(|v| self.adjacency[u][v] == self.adjacency[v][u]))
    }

    pub fn diagonal_connected(&self) -> bool {
        (0..self.n).all(|a| self.label(a, a) == self.label(0, 0))
    }

    pub fn report(&self) -> ComponentReport {
        let mut sizes = self.component_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        ComponentReport { n: self.n, num_components: self.num_components(), component_sizes: sizes, dim_n: self.num_components() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub n: usize,
    pub num_components: usize,
    pub component_sizes: Vec<usize>,
    pub dim_n: usize,
}

/// Symmetry criterion on a dense matrix: `sum_x W_xb^2 / W_xc^2 != 0` for
/// every `b != c`.
pub fn check_symmetric_dense(w: &Matrix<TowerElement>) -> Result<bool, NomuraError> {
    let n = w.len();
    for b in 0..n {
        for c in 0..n {
            if b != c {
                let y = y_vector(w, b, c).ok_or(NomuraError::ZeroEntry)?;
                if bilinear(&y, &y).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Symmetry criterion through the intersection numbers:
/// `sum_{j<k} p_jk^i (a_jk^2 - 2) + sum_j p_jj^i != 0` for `i = 1, 2, 3`.
pub fn check_symmetric(w: &TypeIIMatrix) -> Result<bool, NomuraError> {
    let a = phi(&w.weights)?;
    let avec: Vec<TowerElement> = PAIRS.iter().map(|&(i, j)| a[i][j].clone()).collect();
    let t = w.tower();
    let p = ParametricScheme::new().table_at(&w.q);
    let pt: Vec<Vec<Vec<TowerElement>>> = p
        .iter()
        .map(|m| m.iter().map(|r| r.iter().map(|x| TowerElement::from_rational(t, x.clone())).collect()).collect())
        .collect();
    Ok(nomura_symmetry_sums(&pt, &avec).iter().all(|s| !s.is_zero()))
}

/// The same criterion evaluated on given values `a_jk^2`.
pub fn check_symmetric_from_squares(q: i64, a_sq: &[Rational]) -> bool {
    let p = ParametricScheme::new().table_at(&int(q));
    nomura_symmetry_sums_from_squares(&p, a_sq).iter().all(|s| !s.is_zero())
}

/// Number of Jones-graph components of a dense type-II matrix.
pub fn nomura_dimension(w: &Matrix<TowerElement>) -> Result<usize, NomuraError> {
    Ok(JonesGraph::build(w)?.num_components())
}

/// Checks the symmetry criterion, then counts components.
pub fn nomura_dimension_checked(w: &TypeIIMatrix) -> Result<ComponentReport, NomuraError> {
    if !check_symmetric(w)? {
        return Err(NomuraError::NotSymmetricAlgebra);
    }
    let dense = w.dense().ok_or(NomuraError::NoScheme)?;
    Ok(JonesGraph::build(&dense)?.report())
}

/// The three structural facts behind `dim N = 2`, checked on the actual
/// graph, plus the counter margins.
#[derive(Clone, Debug, Serialize)]
pub struct JonesStructure {
    /// Within each class `C` of `R_0 ∪ R_3`, all pairs of `(C×C) ∩ R_3`
    /// share a component.
    pub classes_connected: bool,
    /// Every `(x, z)` in `R_1 ∪ R_2` is adjacent to some `(x, y)` and some
    /// `(y', z)` with `y` in the class of `x`, `y'` in the class of `z`.
    pub cross_pairs_attached: bool,
    /// Off-diagonal pairs form one component, diagonal pairs another.
    pub off_diagonal_component: bool,
    /// Counters `c_ijk` over `R_3`-triangles have margins `p_jk^3` and
    /// the fixed values used by the symbolic sweep.
    pub counter_margins: bool,
    pub components: ComponentReport,
}

impl JonesStructure {
    pub fn holds(&self) -> bool {
        self.classes_connected && self.cross_pairs_attached && self.off_diagonal_component && self.counter_margins
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        [
            (self.classes_connected, "classes_connected"),
            (self.cross_pairs_attached, "cross_pairs_attached"),
            (self.off_diagonal_component, "off_diagonal_component"),
            (self.counter_margins, "counter_margins"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, s)| s)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "classes_connected": self.classes_connected,
            "cross_pairs_attached": self.cross_pairs_attached,
            "off_diagonal_component": self.off_diagonal_component,
            "counter_margins": self.counter_margins,
            "components": self.components,
        })
    }
}

fn r3_classes(s: &ConcreteScheme) -> Vec<Vec<usize>> {
    let n = s.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if !seen[x] {
            let class: Vec<usize> = (0..n).filter(|&y| s.class(x, y) == 0 || s.class(x, y) == 3).collect();
            for &y in &class {
                seen[y] = true;
            }
            out.push(class);
        }
    }
    out
}

fn counters_ok(s: &ConcreteScheme, classes: &[Vec<usize>]) -> bool {
    let n = s.n();
    let p333 = Rational::from_integer(s.p(3, 3, 3).into());
    for c in classes {
        for &x in c {
            for &y in c {
                for &z in c {
                    if x == y || y == z || x == z {
                        continue;
                    }
                    let mut cnt = [[[0i64; 4]; 4]; 4];
                    for u in 0..n {
                        cnt[s.class(x, u)][s.class(y, u)][s.class(z, u)] += 1;
                    }
                    for j in 1..=2 {
                        for k in 1..=2 {
                            let m = s.p(j, k, 3);
                            if cnt[1][j][k] + cnt[2][j][k] != m
                                || cnt[j][1][k] + cnt[j][2][k] != m
                                || cnt[j][k][1] + cnt[j][k][2] != m
                            {
                                return false;
                            }
                        }
                    }
                    for i in 0..4 {
                        for j in 0..4 {
                            for k in 0..4 {
                                if let Some(f) = fixed_c(i, j, k, &p333) {
                                    if Rational::from_integer(cnt[i][j][k].into()) != f {
                                        return false;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Checks the three structural steps on the Jones graph of `W` over the
/// concrete scheme.
pub fn jones_structure_report(w: &Matrix<TowerElement>, s: &ConcreteScheme) -> Result<JonesStructure, NomuraError> {
    let graph = JonesGraph::build(w)?;
    let g = &graph;
    let n = s.n();
    let classes = r3_classes(s);
    let class_of: Vec<usize> = (0..n).map(|x| classes.iter().position(|c| c.contains(&x)).unwrap_or(0)).collect();
    let classes_connected = classes.iter().all(|c| {
        let labels: BTreeSet<usize> =
            c.iter().flat_map(|&x| c.iter().filter(move |&&y| y != x).map(move |&y| g.label(x, y))).collect();
        labels.len() <= 1
    });
    let cross_pairs_attached = (0..n).all(|x| {
        (0..n).filter(|&z| matches!(s.class(x, z), 1 | 2)).all(|z| {
            let cx = &classes[class_of[x]];
            let cz = &classes[class_of[z]];
            cx.iter().any(|&y| y != x && g.adjacent((x, y), (x, z)))
                && cz.iter().any(|&y| y != z && g.adjacent((y, z), (x, z)))
        })
    });
    let off = g.label(0, 1);
    let diag = g.label(0, 0);
    let off_diagonal_component = off != diag
        && g.diagonal_connected()
        && (0..n).all(|a| (0..n).all(|b| a == b || g.label(a, b) == off));
    Ok(JonesStructure {
        classes_connected,
        cross_pairs_attached,
        off_diagonal_component,
        counter_margins: counters_ok(s, &classes),
        components: g.report(),
    })
}

/// Character table of `Z2 × Z2`, a type-II matrix whose Nomura algebra is
/// the full group algebra.
pub fn sylvester4() -> Matrix<TowerElement> {
    let t = crate::exactfield::TowerDescriptor::rational();
    (0..4)
        .map(|i: u32| {
            (0..4u32).map(|j| TowerElement::from_int(&t, if (i & j).count_ones() % 2 == 0 { 1 } else { -1 })).collect()
        })
        .collect()
}

/// Checks that `Y_aa` is all ones and `Y_ab ∘ Y_ba` is all ones.
pub fn y_vector_sanity(w: &Matrix<TowerElement>) -> bool {
    let n = w.len();
    (0..n).all(|a| {
        (0..n).all(|b| match (y_vector(w, a, b), y_vector(w, b, a)) {
            (Some(u), Some(v)) => u.iter().zip(&v).all(|(x, y)| (x * y).is_one()) && (a != b || u.iter().all(|x| x.is_one())),
            _ => false,
        })
    })
}

/// Inner product of two diagonal ratio vectors, `n`.
pub fn diagonal_inner(w: &Matrix<TowerElement>) -> Option<Rational> {
    let u = y_vector(w, 0, 0)?;
    bilinear(&u, &u).as_rational().filter(|x| !x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::TowerDescriptor;

    #[test]
    fn sylvester_has_full_nomura_algebra() {
        let w = sylvester4();
        assert!(check_symmetric_dense(&w).unwrap());
        let g = JonesGraph::build(&w).unwrap();
        assert_eq!(g.num_components(), 4);
        assert!(g.is_symmetric() && g.diagonal_connected());
        assert_eq!(g.component_sizes().iter().sum::<usize>(), 16);
    }

    #[test]
    fn cyclic_fourier_fails_symmetry() {
        let (t, i) = crate::exactfield::adjoin_rational_sqrt(&int(-1)).unwrap();
        let one = TowerElement::one(&t);
        let w: Matrix<TowerElement> =
            (0..4).map(|a| (0..4).map(|b| if a * b % 4 == 0 { one.clone() } else { i.pow((a * b % 4) as i64).unwrap() }).collect()).collect();
        assert!(!check_symmetric_dense(&w).unwrap());
    }

    #[test]
    fn ratio_vectors() {
        let w = sylvester4();
        assert!(y_vector_sanity(&w));
        assert_eq!(diagonal_inner(&w), Some(int(4)));
    }

    #[test]
    fn forced_zero_control_fails_criterion() {
        let p = ParametricScheme::new().table_at(&int(4));
        let diag: Rational = (0..4).map(|j| p[j][j][1].clone()).sum();
        let mut a_sq = vec![int(2); 6];
        a_sq[0] = int(2) - diag;
        assert!(!check_symmetric_from_squares(4, &a_sq));
        assert!(check_symmetric_from_squares(4, &vec![int(5); 6]));
    }

    #[test]
    fn identity_like_matrix_is_rejected() {
        let t = TowerDescriptor::rational();
        let w = vec![vec![TowerElement::zero(&t); 2]; 2];
        assert!(JonesGraph::build(&w).is_err());
    }
}
