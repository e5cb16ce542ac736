//! Symbolic checks: the rational-function identities behind the
//! reconstruction map, the converse substitutions for every case, and
//! exact nonvanishing sweeps over even `q`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactfield::linalg::{solve, Matrix, Solution};
use crate::exactfield::{int, rat, FieldElem, Poly, RatFuncQ, Rational, TowerElement};
use crate::scheme::ParametricScheme;
use crate::typeii::{a_index, family_coefficients, symbolic_a_vector, Case, TypeIIError, PAIRS};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse multivariate polynomial with coefficients in `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<T> {
    nvars: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: FieldElem + From<Rational>> MPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero_elem() {
            p.terms.insert(Monomial(vec![0; nvars]), c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial(e), T::from(Rational::one()));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial.
    pub fn coeff(&self, m: &[u32]) -> T {
        self.terms.get(&Monomial(m.to_vec())).cloned().unwrap_or_else(|| T::from(Rational::zero()))
    }

    fn insert_add(terms: &mut BTreeMap<Monomial, T>, m: Monomial, c: T) {
        let next = match terms.get(&m) {
            Some(old) => old.add_ref(&c),
            None => c,
        };
        if next.is_zero_elem() {
            terms.remove(&m);
        } else {
            terms.insert(m, next);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            Self::insert_add(&mut terms, m.clone(), c.clone());
        }
        MPoly { nvars: self.nvars, terms }
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            Self::insert_add(&mut terms, m.clone(), c.mul_ref(k));
        }
        MPoly { nvars: self.nvars, terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let e = Monomial(m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect());
                Self::insert_add(&mut terms, e, c1.mul_ref(c2));
            }
        }
        MPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(self.nvars, T::from(Rational::one())), |acc, _| acc.mul(self))
    }

    /// Value at a point.
    pub fn eval(&self, vals: &[T]) -> T {
        let one = T::from(Rational::one());
        let mut acc = T::from(Rational::zero());
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in vals.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t.mul_ref(v);
                }
            }
            acc = acc.add_ref(&t.mul_ref(&one));
        }
        acc
    }
}

impl fmt::Display for MPoly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                    .collect();
                if vars.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Fraction of multivariate polynomials over `Q`; equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct MultiRat {
    num: MPoly<Rational>,
    den: MPoly<Rational>,
}

impl MultiRat {
    pub fn from_poly(p: MPoly<Rational>) -> Self {
        let n = p.nvars();
        MultiRat { num: p, den: MPoly::constant(n, Rational::one()) }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MPoly::var(nvars, i))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn num(&self) -> &MPoly<Rational> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<Rational> {
        &self.den
    }
}

impl PartialEq for MultiRat {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl From<Rational> for MultiRat {
    fn from(c: Rational) -> Self {
        MultiRat::constant(0, c)
    }
}

impl MultiRat {
    fn nv(&self, o: &Self) -> usize {
        self.num.nvars().max(o.num.nvars())
    }

    fn widen(&self, n: usize) -> Self {
        if self.num.nvars() == n {
            return self.clone();
        }
        let pad = |p: &MPoly<Rational>| {
            let mut out = MPoly::zero(n);
            for (m, c) in p.terms() {
                let mut e = m.0.clone();
                e.resize(n, 0);
                out.terms.insert(Monomial(e), c.clone());
            }
            out
        };
        MultiRat { num: pad(&self.num), den: pad(&self.den) }
    }
}

impl FieldElem for MultiRat {
    fn zero_like(&self) -> Self {
        MultiRat::constant(self.num.nvars(), Rational::zero())
    }
    fn one_like(&self) -> Self {
        MultiRat::constant(self.num.nvars(), Rational::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        let n = self.nv(o);
        let (a, b) = (self.widen(n), o.widen(n));
        if a.den == b.den {
            return MultiRat { num: a.num.add(&b.num), den: a.den };
        }
        MultiRat { num: a.num.mul(&b.den).add(&b.num.mul(&a.den)), den: a.den.mul(&b.den) }
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }
    fn mul_ref(&self, o: &Self) -> Self {
        let n = self.nv(o);
        let (a, b) = (self.widen(n), o.widen(n));
        MultiRat { num: a.num.mul(&b.num), den: a.den.mul(&b.den) }
    }
    fn neg_ref(&self) -> Self {
        MultiRat { num: self.num.neg(), den: self.den.clone() }
    }
    fn try_inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(MultiRat { num: self.den.clone(), den: self.num.clone() })
        }
    }
}

/// `g(X, Y, Z) = X^2 + Y^2 + Z^2 - XYZ - 4`.
pub fn g<T: FieldElem>(x: &T, y: &T, z: &T) -> T {
    let four = x.one_like().add_ref(&x.one_like());
    let four = four.add_ref(&four);
    x.mul_ref(x).add_ref(&y.mul_ref(y)).add_ref(&z.mul_ref(z)).sub_ref(&x.mul_ref(y).mul_ref(z)).sub_ref(&four)
}

/// Determinant form of `h`:
/// `det [[2, X01, X02], [X01, 2, X12], [X03, X13, X23]]`.
pub fn h_det<T: FieldElem>(x01: &T, x02: &T, x03: &T, x12: &T, x13: &T, x23: &T) -> T {
    let two = x01.one_like().add_ref(&x01.one_like());
    let m = [[two.clone(), x01.clone(), x02.clone()], [x01.clone(), two, x12.clone()], [x03.clone(), x13.clone(), x23.clone()]];
    let minor = |a: usize, b: usize, c: usize, d: usize| m[1][a].mul_ref(&m[2][b]).sub_ref(&m[1][c].mul_ref(&m[2][d]));
    m[0][0]
        .mul_ref(&minor(1, 2, 2, 1))
        .sub_ref(&m[0][1].mul_ref(&minor(0, 2, 2, 0)))
        .add_ref(&m[0][2].mul_ref(&minor(0, 1, 1, 0)))
}

/// Expanded quadruple constraint `h(i, j, k, l) = (X_kl^2 - 4) X_ij -
/// X_kl (X_ki X_lj + X_kj X_li) + 2 (X_ki X_kj + X_li X_lj)`, where `x`
/// looks up the symmetric value for a pair.
pub fn h_quad<T: FieldElem>(x: &dyn Fn(usize, usize) -> T, i: usize, j: usize, k: usize, l: usize) -> T {
    let two = x(i, j).one_like().add_ref(&x(i, j).one_like());
    let four = two.add_ref(&two);
    let xkl = x(k, l);
    xkl.mul_ref(&xkl)
        .sub_ref(&four)
        .mul_ref(&x(i, j))
        .sub_ref(&xkl.mul_ref(&x(k, i).mul_ref(&x(l, j)).add_ref(&x(k, j).mul_ref(&x(l, i)))))
        .add_ref(&two.mul_ref(&x(k, i).mul_ref(&x(k, j)).add_ref(&x(l, i).mul_ref(&x(l, j)))))
}

fn xsum(a: &MultiRat, b: &MultiRat) -> MultiRat {
    a.mul_ref(&b.try_inv().unwrap()).add_ref(&b.mul_ref(&a.try_inv().unwrap()))
}

/// Outcome of the four identity checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreIdentities {
    pub g_vanishes_on_ratio_sums: bool,
    pub product_of_reconstructions: bool,
    pub h_vanishes_on_ratio_sums: bool,
    pub three_weight_relation: bool,
}

impl CoreIdentities {
    pub fn all(&self) -> bool {
        self.g_vanishes_on_ratio_sums
            && self.product_of_reconstructions
            && self.h_vanishes_on_ratio_sums
            && self.three_weight_relation
    }
}

fn g_identity() -> bool {
    let v = |i| MultiRat::var(3, i);
    let (x, y, z) = (v(0), v(1), v(2));
    g(&xsum(&x, &y), &xsum(&x, &z), &xsum(&z, &y)).is_zero_elem()
}

fn reconstruction_product_identity() -> bool {
    let v = |i| MultiRat::var(4, i);
    let (x, y, zz, z) = (v(0), v(1), v(2), v(3));
    let one = MultiRat::constant(4, Rational::one());
    let two = MultiRat::constant(4, int(2));
    let zi = z.try_inv().unwrap();
    let f = z.mul_ref(&z).sub_ref(&z.mul_ref(&x)).add_ref(&one);
    let gg = g(&x, &y, &zz);
    let w = z.mul_ref(&z).sub_ref(&one).mul_ref(&z.mul_ref(&zz).sub_ref(&y).try_inv().unwrap());
    let wp = zi.mul_ref(&zi).sub_ref(&one).mul_ref(&zi.mul_ref(&zz).sub_ref(&y).try_inv().unwrap());
    let lhs = w.mul_ref(&wp);
    let num = z
        .mul_ref(&z)
        .mul_ref(&gg)
        .add_ref(&two.mul_ref(&z).mul_ref(&x).sub_ref(&z.mul_ref(&y).mul_ref(&zz)).add_ref(&f).mul_ref(&f));
    let den = z.mul_ref(&z.mul_ref(&zz).sub_ref(&y)).mul_ref(&z.mul_ref(&y).sub_ref(&zz));
    let rhs = one.add_ref(&num.mul_ref(&den.try_inv().unwrap()));
    lhs == rhs
}

fn h_identity() -> bool {
    let xs: Vec<MultiRat> = (0..4).map(|i| MultiRat::var(4, i)).collect();
    let x = |i: usize, j: usize| xsum(&xs[i], &xs[j]);
    let det = h_det(&x(0, 1), &x(0, 2), &x(0, 3), &x(1, 2), &x(1, 3), &x(2, 3));
    let quad = h_quad(&|i, j| x(i, j), 0, 1, 2, 3);
    det.is_zero_elem() && quad.is_zero_elem()
}

fn three_weight_identity() -> bool {
    let one = MultiRat::constant(3, Rational::one());
    let xs = [one.clone(), MultiRat::var(3, 0), MultiRat::var(3, 1), MultiRat::var(3, 2)];
    let x = |i: usize, j: usize| xsum(&xs[i], &xs[j]);
    let two = MultiRat::constant(3, int(2));
    let half = MultiRat::constant(3, rat(1, 2));
    let lhs = xs[1]
        .mul_ref(&xs[2])
        .mul_ref(&xs[3])
        .add_ref(&one)
        .mul_ref(&x(0, 1).mul_ref(&x(0, 2)).add_ref(&x(0, 3)).sub_ref(&x(1, 2)));
    let inner = x(1, 2).mul_ref(&x(0, 3)).add_ref(&x(1, 3).mul_ref(&x(0, 2))).add_ref(&x(2, 3).mul_ref(&x(0, 1)));
    let rhs = xs[1]
        .mul_ref(&xs[2])
        .add_ref(&xs[3])
        .mul_ref(&x(0, 1).mul_ref(&x(0, 2)).mul_ref(&x(0, 3)).add_ref(&two).sub_ref(&half.mul_ref(&inner)));
    lhs == rhs
}

/// Checks the four rational-function identities exactly.
pub fn verify_core_identities() -> CoreIdentities {
    CoreIdentities {
        g_vanishes_on_ratio_sums: g_identity(),
        product_of_reconstructions: reconstruction_product_identity(),
        h_vanishes_on_ratio_sums: h_identity(),
        three_weight_relation: three_weight_identity(),
    }
}

/// `e_k = -n + sum_j P_kj^2 + sum_{i<j} P_ki P_kj X_ij` for `k = 1..=d`, in
/// the variables `X_01, X_02, ..., X_{d-1,d}`.
pub fn e_polynomials(p: &Matrix<RatFuncQ>) -> Vec<MPoly<RatFuncQ>> {
    let d = p.len() - 1;
    let pairs: Vec<(usize, usize)> = (0..=d).flat_map(|i| (i + 1..=d).map(move |j| (i, j))).collect();
    let nv = pairs.len();
    let n = p[0].iter().fold(RatFuncQ::zero(), |a, b| a.add(b));
    (1..=d)
        .map(|k| {
            let c = p[k].iter().fold(n.neg(), |a, b| a.add(&b.mul(b)));
            let mut e = MPoly::constant(nv, c);
            for (idx, &(i, j)) in pairs.iter().enumerate() {
                e = e.add(&MPoly::var(nv, idx).scale(&p[k][i].mul(&p[k][j])));
            }
            e
        })
        .collect()
}

/// Outcome of substituting a case's a-vector into every constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConverseReport {
    pub case: String,
    pub g_triples: bool,
    pub h_determinant_orderings: bool,
    pub h_quadruple_permutations: bool,
    pub e_polynomials: bool,
}

impl ConverseReport {
    pub fn holds(&self) -> bool {
        self.g_triples && self.h_determinant_orderings && self.h_quadruple_permutations && self.e_polynomials
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let v = [a, b, c, d];
                    if (0..4).all(|i| v.contains(&i)) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

/// Substitutes the case's a-vector (as functions of `q`, with symbolic `r`
/// in case VI) into all `g`, `h` and `e_k` constraints; every one must
/// vanish identically.
pub fn verify_converse(case: Case) -> ConverseReport {
    let a = symbolic_a_vector(case);
    let x = |i: usize, j: usize| a[a_index(i, j)].clone();
    let triples = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)];
    let g_triples = triples.iter().all(|&(i, j, k)| g(&x(i, j), &x(i, k), &x(j, k)).is_zero());
    let perms = permutations4();
    let h_determinant_orderings = perms.iter().all(|&[i, j, k, l]| {
        h_det(&x(i, j), &x(i, k), &x(i, l), &x(j, k), &x(j, l), &x(k, l)).is_zero()
    });
    let h_quadruple_permutations = perms.iter().all(|&[i, j, k, l]| h_quad(&x, i, j, k, l).is_zero());
    let es = e_polynomials(ParametricScheme::new().eigenmatrix());
    let e_polynomials = es.iter().all(|e| e.eval(&a).is_zero());
    ConverseReport {
        case: case.label().to_string(),
        g_triples,
        h_determinant_orderings,
        h_quadruple_permutations,
        e_polynomials,
    }
}

/// Symmetry expression of the Nomura algebra for `i = 1..=3`:
/// `sum_{j<k} p_jk^i (a_jk^2 - 2) + sum_j p_jj^i`.
pub fn nomura_symmetry_sums<T: FieldElem>(p: &[Vec<Vec<T>>], a: &[T]) -> Vec<T> {
    let zero = a[0].zero_like();
    let two = a[0].one_like().add_ref(&a[0].one_like());
    (1..=3)
        .map(|i| {
            let mut s = zero.clone();
            for &(j, k) in PAIRS.iter() {
                let v = &a[a_index(j, k)];
                s = s.add_ref(&p[j][k][i].mul_ref(&v.mul_ref(v).sub_ref(&two)));
            }
            for j in 0..4 {
                s = s.add_ref(&p[j][j][i]);
            }
            s
        })
        .collect()
}

/// Same sums computed from the squares `a_jk^2` directly.
pub fn nomura_symmetry_sums_from_squares(p: &[Vec<Vec<Rational>>], a_sq: &[Rational]) -> Vec<Rational> {
    (1..=3)
        .map(|i| {
            let mut s = Rational::zero();
            for &(j, k) in PAIRS.iter() {
                s += &p[j][k][i] * (&a_sq[a_index(j, k)] - int(2));
            }
            for j in 0..4 {
                s += &p[j][j][i];
            }
            s
        })
        .collect()
}

/// `t_h = sum_{i,j,k} p_ij^h p_3k^i w_i^2 / (w_j w_k)` for `h = 1, 2`.
pub fn adjacency_sums(p: &[Vec<Vec<Rational>>], w: &[TowerElement]) -> Option<[TowerElement; 2]> {
    let t = w[0].tower();
    let inv: Vec<TowerElement> = w.iter().map(TowerElement::inv).collect::<Option<_>>()?;
    let mut out = [TowerElement::zero(t), TowerElement::zero(t)];
    for i in 0..4 {
        let wi2 = w[i].square();
        for j in 0..4 {
            for k in 0..4 {
                let term = &(&wi2 * &inv[j]) * &inv[k];
                for (h, slot) in out.iter_mut().enumerate() {
                    let c = &p[i][j][h + 1] * &p[3][k][i];
                    if !c.is_zero() {
                        *slot = &*slot + &term.scale(&c);
                    }
                }
            }
        }
    }
    Some(out)
}

/// Value of the fixed counters `c_ijk` when some index is 0 or 3.
pub fn fixed_c(i: usize, j: usize, k: usize, p333: &Rational) -> Option<Rational> {
    if [i, j, k].contains(&0) {
        return Some(if [[0, 3, 3], [3, 0, 3], [3, 3, 0]].contains(&[i, j, k]) { Rational::one() } else { Rational::zero() });
    }
    if [i, j, k].contains(&3) {
        return Some(if (i, j, k) == (3, 3, 3) { p333 - Rational::one() } else { Rational::zero() });
    }
    None
}

fn c_unknown(i: usize, j: usize, k: usize) -> usize {
    (i - 1) * 4 + (j - 1) * 2 + (k - 1)
}

/// Linear system in the eight counters `c_ijk` (`i, j, k` in `{1, 2}`):
/// the two weighted sums `sum c_ijk w_i^2/(w_j w_k)` and
/// `sum c_ijk w_j w_k / w_i^2` vanish, and every margin equals `p_jk^3`.
/// With `with_weights = false` only the margins are imposed.
pub fn component_system(
    p: &[Vec<Vec<Rational>>],
    w: &[TowerElement],
    with_weights: bool,
) -> Option<(Matrix<TowerElement>, Vec<TowerElement>)> {
    let t = w[0].tower();
    let zero = TowerElement::zero(t);
    let inv: Vec<TowerElement> = w.iter().map(TowerElement::inv).collect::<Option<_>>()?;
    let p333 = &p[3][3][3];
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    if with_weights {
        let forms: [Box<dyn Fn(usize, usize, usize) -> TowerElement>; 2] = [
            Box::new(|i, j, k| &(&w[i].square() * &inv[j]) * &inv[k]),
            Box::new(|i, j, k| &(&w[j] * &w[k]) * &inv[i].square()),
        ];
        for form in &forms {
            let mut row = vec![zero.clone(); 8];
            let mut constant = zero.clone();
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        match fixed_c(i, j, k, p333) {
                            Some(c) if !c.is_zero() => constant = &constant + &form(i, j, k).scale(&c),
                            Some(_) => {}
                            None => row[c_unknown(i, j, k)] = &row[c_unknown(i, j, k)] + &form(i, j, k),
                        }
                    }
                }
            }
            rows.push(row);
            rhs.push(-&constant);
        }
    }
    for axis in 0..3 {
        for j in 1..=2 {
            for k in 1..=2 {
                let mut row = vec![zero.clone(); 8];
                for x in 1..=2 {
                    let idx = match axis {
                        0 => c_unknown(x, j, k),
                        1 => c_unknown(j, x, k),
                        _ => c_unknown(j, k, x),
                    };
                    row[idx] = TowerElement::one(t);
                }
                rows.push(row);
                rhs.push(TowerElement::from_rational(t, p[j][k][3].clone()));
            }
        }
    }
    Some((rows, rhs))
}

/// Which expression a sweep evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanExpr {
    /// Symmetry criterion sums, `i = 1, 2, 3`.
    NomuraSymmetric,
    /// Counter system forcing the off-diagonal classes into one component;
    /// reports the nonzero inconsistency witness.
    JonesComponent,
    /// Adjacency sums `t_1`, `t_2`.
    JonesAdjacency,
}

/// One evaluated point of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub q: i64,
    pub r_sign: i8,
    pub branch: i8,
    pub values: Vec<String>,
    pub nonzero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub expr: ScanExpr,
    pub case: String,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn violations(&self) -> Vec<&ScanEntry> {
        self.entries.iter().filter(|e| !e.nonzero).collect()
    }

    pub fn all_nonzero(&self) -> bool {
        self.entries.iter().all(|e| e.nonzero)
    }
}

/// Even integers `4, 6, ..., bound`.
pub fn even_q_range(bound: i64) -> Vec<i64> {
    (2..=bound / 2).map(|k| 2 * k).collect()
}

fn table_at(q: i64) -> Vec<Vec<Vec<Rational>>> {
    ParametricScheme::new().table_at(&int(q))
}

/// Evaluates `expr` exactly for `case` at every `q` in `q_set`, for both
/// root branches and (case VI) both signs of `r`.
pub fn scan_nonvanishing(expr: ScanExpr, case: Case, q_set: &[i64]) -> Result<ScanReport, TypeIIError> {
    let signs: &[i8] = if case == Case::VI { &[1, -1] } else { &[1] };
    let branches: &[i8] = if expr == ScanExpr::NomuraSymmetric { &[1] } else { &[1, -1] };
    let mut entries = Vec::new();
    for &q in q_set {
        let p = table_at(q);
        for &r_sign in signs {
            for &branch in branches {
                let fam = family_coefficients(case, &int(q), r_sign, branch)?;
                let values: Vec<TowerElement> = match expr {
                    ScanExpr::NomuraSymmetric => {
                        let t = fam.a[0].tower().clone();
                        let pt: Vec<Vec<Vec<TowerElement>>> = p
                            .iter()
                            .map(|m| m.iter().map(|r| r.iter().map(|x| TowerElement::from_rational(&t, x.clone())).collect()).collect())
                            .collect();
                        nomura_symmetry_sums(&pt, &fam.a)
                    }
                    ScanExpr::JonesAdjacency => {
                        adjacency_sums(&p, &fam.weights).ok_or(TypeIIError::ZeroWeight)?.to_vec()
                    }
                    ScanExpr::JonesComponent => {
                        let (m, b) = component_system(&p, &fam.weights, true).ok_or(TypeIIError::ZeroWeight)?;
                        match solve(&m, &b) {
                            Solution::Inconsistent(w) => vec![w],
                            Solution::Consistent(_) => vec![TowerElement::zero(fam.weights[0].tower())],
                        }
                    }
                };
                let nonzero = values.iter().all(|v| !v.is_zero());
                entries.push(ScanEntry {
                    q,
                    r_sign,
                    branch,
                    values: values.iter().map(|v| v.reduce().to_string()).collect(),
                    nonzero,
                });
            }
        }
    }
    Ok(ScanReport { expr, case: case.label().to_string(), entries })
}

/// Control inputs for the sweep evaluators; each must evaluate to zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanControls {
    /// Symmetry sum `i = 1` with `a_jk^2 = 2` except `a_01^2` chosen to
    /// cancel the diagonal terms.
    pub symmetric_forced_zero: bool,
    /// `t_1` at unit weights minus `k_3 |X|` (row sums telescope).
    pub adjacency_unit_weights: bool,
    /// The counter margins alone are consistent.
    pub component_margins_consistent: bool,
}

impl ScanControls {
    pub fn all(&self) -> bool {
        self.symmetric_forced_zero && self.adjacency_unit_weights && self.component_margins_consistent
    }
}

pub fn scan_controls(q: i64) -> ScanControls {
    let p = table_at(q);
    let diag: Rational = (0..4).map(|j| p[j][j][1].clone()).sum();
    let mut a_sq = vec![int(2); 6];
    // p_01^1 = 1, so a_01^2 - 2 = -diag cancels the diagonal sum
    a_sq[0] = int(2) - &diag / &p[0][1][1];
    let symmetric_forced_zero = nomura_symmetry_sums_from_squares(&p, &a_sq)[0].is_zero();
    let qt = crate::exactfield::TowerDescriptor::rational();
    let ones = vec![TowerElement::one(&qt); 4];
    let size: Rational = (0..4).map(|i| p[i][i][0].clone()).sum();
    let k3 = p[3][3][0].clone();
    let adjacency_unit_weights = adjacency_sums(&p, &ones)
        .map(|t| (&t[0] - &TowerElement::from_rational(&qt, k3 * size)).is_zero())
        .unwrap_or(false);
    let component_margins_consistent = component_system(&p, &ones, false)
        .map(|(m, b)| matches!(solve(&m, &b), Solution::Consistent(_)))
        .unwrap_or(false);
    ScanControls { symmetric_forced_zero, adjacency_unit_weights, component_margins_consistent }
}

/// Recorded polynomial generators of the elimination ideals for the
/// symmetry sums (`i = 1, 2, 3`), as products of factors.
pub fn symmetry_factor_fixtures(case: Case) -> Vec<Poly> {
    let f = Poly::from_ints;
    let lin = |c: i64| f(&[c, 1]);
    let base = || lin(-2).mul(&lin(-1)).mul(&lin(1));
    let full = || base().mul(&lin(2));
    match case {
        Case::I | Case::IV => vec![full(), full(), full()],
        Case::II => {
            let b1 = f(&[17, 4, -10, 0, 1]);
            vec![base().mul(&b1), base().mul(&b1), full()]
        }
        Case::III => {
            let b1 = f(&[64, 0, 28, 0, -13, 0, 1]);
            let b2 = f(&[24, 0, -9, 0, 1]);
            vec![b1.clone(), b2, b1]
        }
        Case::V => {
            let b1 = base().mul(&f(&[-4, -2, 1]));
            vec![b1.clone(), b1, full()]
        }
        Case::VI => {
            let q = Poly::x();
            let common = |qp: u32| q.pow(qp).mul(&lin(-3).pow(2)).mul(&lin(-1)).mul(&lin(1).pow(2));
            vec![
                common(3).mul(&f(&[-272, 4664, -464, -894, 51, 49, 14, -12, -1, 1])),
                common(3).mul(&lin(-2)).mul(&f(&[92, -86, -1, 57, 2, -4, 3, 1])),
                common(2).mul(&f(&[16, -288, 1344, -288, -273, 66, 0, -2, 1])),
            ]
        }
    }
}

/// Recorded generators for the counter system and the two adjacency sums.
pub fn component_factor_fixtures(case: Case) -> (Poly, Poly) {
    let f = Poly::from_ints;
    let lin = |c: i64| f(&[c, 1]);
    let q2m5 = f(&[-5, 0, 1]);
    let qq = Poly::x();
    let pm = lin(1).mul(&lin(-1));
    match case {
        Case::I => (pm.mul(&q2m5), lin(-2).mul(&pm).mul(&q2m5)),
        Case::II => (pm.mul(&q2m5), lin(-2).mul(&pm).mul(&q2m5).mul(&f(&[-1, -2, 1]).pow(2))),
        Case::III => (
            f(&[4, 0, 1]).mul(&q2m5),
            lin(-2).mul(&lin(1)).mul(&q2m5).mul(&f(&[64, 0, -24, 12, -5, 1])),
        ),
        Case::IV => (qq.pow(2).mul(&pm), qq.pow(2).mul(&lin(-2)).mul(&pm)),
        Case::V => (qq.pow(2).mul(&pm), qq.mul(&lin(-2)).mul(&pm)),
        Case::VI => (
            qq.pow(12)
                .mul(&lin(-3).pow(12))
                .mul(&lin(-1))
                .mul(&lin(1).pow(6))
                .mul(&Poly::new(vec![rat(-1, 9), int(1)]))
                .mul(&q2m5.pow(3)),
            qq.pow(9)
                .mul(&lin(-3).pow(12))
                .mul(&lin(-1).pow(2))
                .mul(&lin(1).pow(7))
                .mul(&q2m5.pow(4))
                .mul(&Poly::new(vec![rat(16, 19), rat(8, 19), rat(-48, 19), rat(6, 19), int(1)])),
        ),
    }
}

/// Generator of `<r^2 - (17q-1)(q-1), A + B r> ∩ Q[q]` for
/// `A + B r` with polynomial `A, B`: `(A^2 - B^2 R) / gcd(A, B)`.
pub fn eliminate_r(f: &RatFuncQ) -> Poly {
    let (a, b) = (f.a(), f.b());
    let den = a.den().mul(b.den()).divrem(&a.den().gcd(b.den())).0;
    let an = a.num().mul(&den.divrem(a.den()).0);
    let bn = b.num().mul(&den.divrem(b.den()).0);
    if bn.is_zero() {
        return an.monic();
    }
    let rr = crate::exactfield::ratfunc::r_squared();
    let res = an.mul(&an).sub(&bn.mul(&bn).mul(&rr));
    res.divrem(&an.gcd(&bn)).0.monic()
}

/// Symmetry sums as functions of `q` (and `r`).
pub fn symbolic_symmetry_sums(case: Case) -> Vec<RatFuncQ> {
    let ps = ParametricScheme::new();
    let p: Vec<Vec<Vec<RatFuncQ>>> =
        (0..4).map(|i| (0..4).map(|j| (0..4).map(|k| ps.p(i, j, k).clone()).collect()).collect()).collect();
    nomura_symmetry_sums(&p, &symbolic_a_vector(case))
}

/// Comparison of a recorded factor list with the computed generator.
#[derive(Clone, Debug, Serialize)]
pub struct FixtureCheck {
    pub case: String,
    pub index: usize,
    pub expected: String,
    pub computed: String,
    pub matches: bool,
    /// Even integers `q >= 4` at which the recorded polynomial vanishes.
    pub even_roots: Vec<String>,
}

pub fn check_symmetry_fixtures(case: Case) -> Vec<FixtureCheck> {
    let sums = symbolic_symmetry_sums(case);
    symmetry_factor_fixtures(case)
        .into_iter()
        .zip(sums)
        .enumerate()
        .map(|(i, (expected, s))| {
            let computed = eliminate_r(&s);
            FixtureCheck {
                case: case.label().to_string(),
                index: i + 1,
                expected: crate::exactfield::poly::poly_to_string(&expected.monic(), "q"),
                computed: crate::exactfield::poly::poly_to_string(&computed, "q"),
                matches: expected.monic() == computed,
                even_roots: even_roots(&expected),
            }
        })
        .collect()
}

/// Even integer roots `>= 4` of a polynomial.
pub fn even_roots(p: &Poly) -> Vec<String> {
    p.rational_roots()
        .into_iter()
        .filter(|x| x.is_integer() && (x.to_integer() % 2u8).is_zero() && *x >= int(4))
        .map(|x| x.to_string())
        .collect()
}

/// Whether the recorded polynomial generators avoid every even `q >= 4`.
pub fn fixtures_avoid_even_q(case: Case) -> bool {
    let (a, b) = component_factor_fixtures(case);
    let mut all = symmetry_factor_fixtures(case);
    all.push(a);
    all.push(b);
    all.iter().all(|p| even_roots(p).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_identities_hold() {
        let r = verify_core_identities();
        assert!(r.all(), "{r:?}");
    }

    #[test]
    fn broken_identity_is_detected() {
        let v = |i| MultiRat::var(3, i);
        let (x, y, z) = (v(0), v(1), v(2));
        // X/Y - Y/X in place of a sum
        let bad = x.mul_ref(&y.try_inv().unwrap()).sub_ref(&y.mul_ref(&x.try_inv().unwrap()));
        assert!(!g(&bad, &xsum(&x, &z), &xsum(&z, &y)).is_zero_elem());
    }

    #[test]
    fn converse_for_every_case() {
        for case in Case::ALL {
            let r = verify_converse(case);
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn e_polynomial_constant_terms() {
        let ps = ParametricScheme::new();
        let es = e_polynomials(ps.eigenmatrix());
        let n = ps.n();
        for (k, e) in es.iter().enumerate() {
            let row = &ps.eigenmatrix()[k + 1];
            let sq = row.iter().fold(n.neg(), |a, b| a.add(&b.mul(b)));
            assert_eq!(e.coeff(&[0; 6]), sq);
            let sum = row.iter().fold(RatFuncQ::zero(), |a, b| a.add(b));
            let at_two = e.eval(&vec![RatFuncQ::constant(int(2)); 6]);
            assert_eq!(at_two, sum.mul(&sum).sub(&n));
        }
    }

    #[test]
    fn recorded_generators_avoid_even_q() {
        for case in Case::ALL {
            assert!(fixtures_avoid_even_q(case), "{case}");
        }
    }

    #[test]
    fn controls_vanish() {
        assert!(scan_controls(4).all());
        assert!(scan_controls(10).all());
    }

    #[test]
    fn short_sweeps_are_nonzero() {
        for case in Case::ALL {
            for expr in [ScanExpr::NomuraSymmetric, ScanExpr::JonesAdjacency, ScanExpr::JonesComponent] {
                let r = scan_nonvanishing(expr, case, &[4, 6]).unwrap();
                assert!(r.all_nonzero(), "{case} {expr:?}");
            }
        }
    }

    #[test]
    fn symmetry_fixtures_match() {
        for case in Case::ALL {
            for c in check_symmetry_fixtures(case) {
                assert!(c.matches, "{c:?}");
            }
        }
    }
}
