//! The six weight families of type-II matrices `W = A_0 + w_1 A_1 + w_2 A_2 +
//! w_3 A_3` in the Bose-Mesner algebra of the parametric three-class scheme,
//! together with the reconstruction map from the values `a_ij = w_i/w_j +
//! w_j/w_i`, type-II and Hadamard tests, and the span condition for
//! isolation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactfield::linalg::Matrix;
use crate::exactfield::modp::{certified_rank, RankCertificate};
use crate::exactfield::{
    adjoin_rational_sqrt, adjoin_sqrt, compare_real, complex_embed, is_real, json as ejson, rat, sqrt_in_field,
    FieldError, Poly, RatFunc, RatFuncQ, Rational, Tower, TowerDescriptor, TowerElement,
};
use crate::scheme::{ConcreteScheme, ParametricScheme};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeIIError {
    #[error("unknown case {0:?}; expected one of i, ii, iii, iv, v, vi")]
    InvalidCase(String),
    #[error("q must be an even integer")]
    InvalidQ,
    #[error("q must be at least 4")]
    QTooSmall,
    #[error("reconstruction denominator vanishes")]
    DenominatorZero,
    #[error("a-value at the chosen pivot pair is +-2")]
    AllPlusMinusTwo,
    #[error("weights must be nonzero")]
    ZeroWeight,
    #[error("matrix is not square")]
    NotSquare,
    #[error("no non-integral coefficient found")]
    NoWitness,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl Case {
    pub const ALL: [Case; 6] = [Case::I, Case::II, Case::III, Case::IV, Case::V, Case::VI];

    pub fn label(self) -> &'static str {
        match self {
            Case::I => "i",
            Case::II => "ii",
            Case::III => "iii",
            Case::IV => "iv",
            Case::V => "v",
            Case::VI => "vi",
        }
    }

    /// Index `p` such that `w_p` is solved from `w_p + 1/w_p = a_{0,p}`.
    pub fn pivot(self) -> usize {
        match self {
            Case::I | Case::II => 3,
            Case::IV => 2,
            Case::III | Case::V | Case::VI => 1,
        }
    }

    /// Whether the family yields complex Hadamard matrices (for `r > 0` in
    /// case VI).
    pub fn is_hadamard_family(self) -> bool {
        !matches!(self, Case::I | Case::II)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Case {
    type Err = TypeIIError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Ok(Case::I),
            "ii" | "2" => Ok(Case::II),
            "iii" | "3" => Ok(Case::III),
            "iv" | "4" => Ok(Case::IV),
            "v" | "5" => Ok(Case::V),
            "vi" | "6" => Ok(Case::VI),
            _ => Err(TypeIIError::InvalidCase(s.to_string())),
        }
    }
}

/// Position of `a_{i,j}` (`i < j`) in the vector
/// `(a01, a02, a03, a12, a13, a23)`.
pub fn a_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no a-value for ({i},{j})"),
    }
}

/// Index pairs in the order of [`a_index`].
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn poly(c: &[i64]) -> Poly {
    Poly::from_ints(c)
}

fn frac(num: &[i64], den: &[i64]) -> RatFunc {
    RatFunc::new(poly(num), poly(den))
}

fn plain(num: &[i64], den: &[i64]) -> RatFuncQ {
    RatFuncQ::from_ratfunc(frac(num, den))
}

/// The a-vector `(a01, a02, a03, a12, a13, a23)` of each case as functions
/// of `q` (and `r` in case VI).
pub fn symbolic_a_vector(case: Case) -> [RatFuncQ; 6] {
    let two = plain(&[2], &[1]);
    match case {
        Case::I => {
            let a = plain(&[3, 0, -1], &[1]);
            [a.clone(), a.clone(), a, two.clone(), two.clone(), two]
        }
        Case::II => {
            let a01 = plain(&[7, -1, -3, 1], &[-1, -2, 1]);
            let a13 = plain(&[3, 1, 1, -1], &[-1, -2, 1]);
            [a01.clone(), a01, plain(&[3, 0, -1], &[1]), two, a13.clone(), a13]
        }
        Case::III => {
            let a = plain(&[-12, 0, 2], &[-4, 0, 1]);
            [a.clone(), plain(&[-2], &[1]), a.clone(), a.neg(), two, a.neg()]
        }
        Case::IV => {
            let b = plain(&[4, 0, -2], &[0, 0, 1]);
            [two.clone(), b.clone(), two.clone(), b.clone(), two, b]
        }
        Case::V => {
            let c = plain(&[-2], &[0, 1]);
            let b = plain(&[4, 0, -2], &[0, 0, 1]);
            [c.clone(), c.clone(), two, b, c.clone(), c]
        }
        Case::VI => {
            let a01 = RatFuncQ::new(frac(&[-2, 3, -1], &[0, 2, 2]), frac(&[2, 1], &[0, 2, 2]));
            let a02 = RatFuncQ::new(frac(&[-2, 1, 1], &[0, -6, 2]), frac(&[2, -1], &[0, -6, 2]));
            let a03 = RatFuncQ::new(frac(&[-19, -2, 5], &[-6, -4, 2]), frac(&[1, -1], &[-6, -4, 2]));
            let a12 = RatFuncQ::new(
                frac(&[2, -20, 8, 4, -2], &[0, 0, -3, -2, 1]),
                frac(&[-2, 2], &[0, 0, -3, -2, 1]),
            );
            [a01.clone(), a02.clone(), a03, a12, a02.neg(), a01.neg()]
        }
    }
}

/// Checks that `q` is an even integer at least 4.
pub fn validate_q(q: &Rational) -> Result<(), TypeIIError> {
    if !q.is_integer() || !(q.to_integer() % 2u8).is_zero() {
        return Err(TypeIIError::InvalidQ);
    }
    if *q < rat(4, 1) {
        return Err(TypeIIError::QTooSmall);
    }
    Ok(())
}

/// `(17q - 1)(q - 1)` at `q`.
pub fn r_squared_at(q: &Rational) -> Rational {
    crate::exactfield::ratfunc::r_squared().eval(q)
}

/// The field `Q(r)` at `q` with `r` carrying the requested sign; when `r` is
/// rational the field is `Q` itself.
pub fn r_field(q: &Rational, r_sign: i8) -> (Tower, TowerElement) {
    let rr = r_squared_at(q);
    let sign = Rational::from_integer(r_sign.signum().into());
    match adjoin_rational_sqrt(&rr) {
        Ok((tower, root)) => (tower, root.scale(&sign)),
        Err(_) => {
            let qt = TowerDescriptor::rational();
            let r = crate::exactfield::rational::rational_sqrt(&rr).expect("radicand is a rational square");
            (qt.clone(), TowerElement::from_rational(&qt, r * sign))
        }
    }
}

fn specialize(f: &RatFuncQ, q: &Rational, r: &TowerElement) -> Result<TowerElement, FieldError> {
    f.specialize(q, r)
}

/// Root of `w + 1/w = a`, i.e. `w = (a + branch * sqrt(a^2 - 4)) / 2`,
/// adjoining the square root when it is missing from `a`'s field.
pub fn solve_w_plus_inverse(a: &TowerElement, branch: i8) -> Result<TowerElement, FieldError> {
    let disc = &(a * a) - &TowerElement::from_int(a.tower(), 4);
    let sign = Rational::from_integer(branch.signum().into());
    let half = rat(1, 2);
    let delta = if let Some(s) = sqrt_in_field(&disc) {
        s
    } else if a.tower().depth() == 0 {
        let (_, root) = adjoin_rational_sqrt(&disc.as_rational().expect("depth 0"))?;
        root
    } else {
        let t = adjoin_sqrt(a.tower(), &disc)?;
        TowerElement::generator(&t, t.depth() - 1)
    };
    let a = a.lift(delta.tower())?;
    Ok((&a + &delta.scale(&sign)).scale(&half))
}

/// One member of a case: the weights `w_0 = 1, w_1, w_2, w_3` at a fixed
/// even `q`, with the branch of the quadratic root and the sign of `r`.
#[derive(Clone, Debug)]
pub struct WeightFamily {
    pub case: Case,
    pub q: Rational,
    pub r_sign: i8,
    pub branch: i8,
    /// `r` in its own field (case VI only).
    pub r: Option<TowerElement>,
    /// `(a01, a02, a03, a12, a13, a23)` in the field containing them.
    pub a: Vec<TowerElement>,
    /// `w_0..w_3`, all in the same tower.
    pub weights: Vec<TowerElement>,
}

/// Builds the weights of `case` at `q`.
pub fn family_coefficients(case: Case, q: &Rational, r_sign: i8, branch: i8) -> Result<WeightFamily, TypeIIError> {
    validate_q(q)?;
    let sym = symbolic_a_vector(case);
    let (base, r) = if case == Case::VI {
        let (t, r) = r_field(q, r_sign);
        (t, Some(r))
    } else {
        (TowerDescriptor::rational(), None)
    };
    let r_val = r.clone().unwrap_or_else(|| TowerElement::zero(&base));
    let a: Vec<TowerElement> =
        sym.iter().map(|f| specialize(f, q, &r_val).map(|x| x.lift(&base)).and_then(|x| x)).collect::<Result<_, _>>()?;
    let p = case.pivot();
    let wp = solve_w_plus_inverse(&a[a_index(0, p)], branch)?;
    let tower = wp.tower().clone();
    let one = TowerElement::one(&tower);
    let a_top: Vec<TowerElement> = a.iter().map(|x| x.lift(&tower)).collect::<Result<_, _>>()?;
    let amat = a_matrix_from_vector(&a_top);
    let weights = reconstruct_weights(&amat, 0, p, (&one, &wp))?;
    Ok(WeightFamily { case, q: q.clone(), r_sign: if case == Case::VI { r_sign.signum() } else { 1 }, branch: branch.signum(), r, a, weights })
}

/// Symmetric `4 x 4` a-matrix with diagonal 2 from the a-vector.
pub fn a_matrix_from_vector(a: &[TowerElement]) -> Matrix<TowerElement> {
    let t = a[0].tower();
    let two = TowerElement::from_int(t, 2);
    (0..4)
        .map(|i| (0..4).map(|j| if i == j { two.clone() } else { a[a_index(i, j)].clone() }).collect())
        .collect()
}

/// `a_{i,j} = w_i/w_j + w_j/w_i` for all `i, j`.
pub fn phi(w: &[TowerElement]) -> Result<Matrix<TowerElement>, TypeIIError> {
    let inv: Vec<TowerElement> = w.iter().map(|x| x.inv().ok_or(TypeIIError::ZeroWeight)).collect::<Result<_, _>>()?;
    Ok((0..w.len())
        .map(|i| (0..w.len()).map(|j| &(&w[i] * &inv[j]) + &(&w[j] * &inv[i])).collect())
        .collect())
}

fn is_pm_two(x: &TowerElement) -> bool {
    x.as_rational().is_some_and(|v| v.abs() == rat(2, 1))
}

/// Recovers all weights from the a-matrix and the seeds `w_{i0}, w_{i1}`:
/// `w_i = (w_{i1}^2 - w_{i0}^2) / (a_{i1,i} w_{i1} - a_{i0,i} w_{i0})`.
///
/// When every `a_{i,j}` is `+-2` the degenerate section `w_i = w_{i0}
/// a_{i0,i} / 2` is returned instead.
pub fn reconstruct_weights(
    a: &Matrix<TowerElement>,
    i0: usize,
    i1: usize,
    seeds: (&TowerElement, &TowerElement),
) -> Result<Vec<TowerElement>, TypeIIError> {
    let (w0, w1) = seeds;
    let n = a.len();
    if is_pm_two(&a[i0][i1]) {
        if a.iter().flatten().all(is_pm_two) {
            return Ok((0..n).map(|i| (w0 * &a[i0][i]).scale(&rat(1, 2))).collect());
        }
        return Err(TypeIIError::AllPlusMinusTwo);
    }
    let num = &(w1 * w1) - &(w0 * w0);
    (0..n)
        .map(|i| {
            if i == i0 {
                return Ok(w0.clone());
            }
            if i == i1 {
                return Ok(w1.clone());
            }
            let den = &(&a[i1][i] * w1) - &(&a[i0][i] * w0);
            let inv = den.inv().ok_or(TypeIIError::DenominatorZero)?;
            Ok(&num * &inv)
        })
        .collect()
}

/// A type-II candidate `W = sum_j w_j A_j` together with the eigenmatrix of
/// its scheme at `q` and, when available, the concrete scheme.
#[derive(Clone, Debug)]
pub struct TypeIIMatrix {
    pub weights: Vec<TowerElement>,
    pub q: Rational,
    pub p: Matrix<Rational>,
    pub scheme: Option<ConcreteScheme>,
}

impl TypeIIMatrix {
    pub fn new(weights: Vec<TowerElement>, q: &Rational) -> Self {
        let p = ParametricScheme::new().eigenmatrix_at(q);
        TypeIIMatrix { weights, q: q.clone(), p, scheme: None }
    }

    pub fn from_family(f: &WeightFamily) -> Self {
        Self::new(f.weights.clone(), &f.q)
    }

    pub fn with_scheme(mut self, s: ConcreteScheme) -> Self {
        self.scheme = Some(s);
        self
    }

    pub fn tower(&self) -> &Tower {
        self.weights[0].tower()
    }

    /// `n = sum_j P_{0,j}`.
    pub fn n(&self) -> Rational {
        self.p[0].iter().sum()
    }

    /// `beta_k = sum_j w_j P_{k,j}`.
    pub fn beta(&self, k: usize) -> TowerElement {
        self.weights.iter().zip(&self.p[k]).fold(TowerElement::zero(self.tower()), |acc, (w, c)| &acc + &w.scale(c))
    }

    /// `beta'_k = sum_j P_{k,j} / w_j`.
    pub fn beta_prime(&self, k: usize) -> Option<TowerElement> {
        let mut acc = TowerElement::zero(self.tower());
        for (w, c) in self.weights.iter().zip(&self.p[k]) {
            acc = &acc + &w.inv()?.scale(c);
        }
        Some(acc)
    }

    /// Dense `W` over the attached concrete scheme.
    pub fn dense(&self) -> Option<Matrix<TowerElement>> {
        self.scheme.as_ref().map(|s| s.expand(&self.weights))
    }
}

/// Outcome of the type-II test.
#[derive(Clone, Debug)]
pub struct TypeIICertificate {
    /// `beta_k beta'_k` for `k = 0..=d`.
    pub beta_products: Vec<Option<TowerElement>>,
    pub spectral: bool,
    /// `W (W^(-))^T = nI` checked entrywise, when a concrete scheme exists.
    pub dense: Option<bool>,
}

impl TypeIICertificate {
    pub fn holds(&self) -> bool {
        self.spectral && self.dense.unwrap_or(true)
    }
}

/// Exact type-II test via `beta_k beta'_k = n`, cross-checked densely when a
/// concrete scheme is attached.
pub fn is_type_ii(w: &TypeIIMatrix) -> TypeIICertificate {
    let n = TowerElement::from_rational(w.tower(), w.n());
    let beta_products: Vec<Option<TowerElement>> =
        (0..w.p.len()).map(|k| w.beta_prime(k).map(|bp| &w.beta(k) * &bp)).collect();
    let spectral = beta_products.iter().all(|b| b.as_ref() == Some(&n));
    let dense = w.dense().map(|m| dense_type_ii(&m));
    TypeIICertificate { beta_products, spectral, dense }
}

/// Entrywise inverse `W^(-)`; `None` if some entry is zero.
pub fn entrywise_inverse(m: &Matrix<TowerElement>) -> Option<Matrix<TowerElement>> {
    m.iter().map(|row| row.iter().map(TowerElement::inv).collect()).collect()
}

/// `W (W^(-))^T = nI`.
pub fn dense_type_ii(m: &Matrix<TowerElement>) -> bool {
    let n = m.len();
    let Some(inv) = entrywise_inverse(m) else {
        return false;
    };
    let nn = TowerElement::from_int(m[0][0].tower(), n as i64);
    (0..n).into_par_iter().all(|i| {
        (0..n).all(|j| {
            let s = (0..n).fold(TowerElement::zero(m[0][0].tower()), |acc, x| &acc + &(&m[i][x] * &inv[j][x]));
            if i == j {
                s == nn
            } else {
                s.is_zero()
            }
        })
    })
}

/// Outcome of the Hadamard test.
#[derive(Clone, Debug)]
pub struct HadamardCertificate {
    pub hadamard: bool,
    /// Every `a_{i,j}` is real under the principal embedding.
    pub all_real: bool,
    /// A pair with `a_{i,j}` strictly inside `(-2, 2)`.
    pub inside_pair: Option<(usize, usize)>,
    /// A pair whose `a_{i,j}` is non-real or outside `[-2, 2]`.
    pub outside_pair: Option<(usize, usize)>,
    /// Largest `||w_i| - 1|` seen numerically.
    pub modulus_defect: f64,
}

/// Decides whether all weights are unimodular: exactly when every `a_{i,j}`
/// is real with `|a_{i,j}| <= 2`. The moduli are cross-checked with
/// certified complex balls.
pub fn is_hadamard(w: &TypeIIMatrix) -> Result<HadamardCertificate, TypeIIError> {
    let a = phi(&w.weights)?;
    let mut all_real = true;
    let mut inside_pair = None;
    let mut outside_pair = None;
    for &(i, j) in PAIRS.iter() {
        let x = a[i][j].reduce();
        let signs = vec![1i8; x.tower().depth()];
        let real = is_real(&x, &signs)?;
        if !real {
            all_real = false;
            outside_pair.get_or_insert((i, j));
            continue;
        }
        let two = TowerElement::from_int(x.tower(), 2);
        let hi = compare_real(&x, &two, &signs)?;
        let lo = compare_real(&x, &-&two, &signs)?;
        if hi == Ordering::Greater || lo == Ordering::Less {
            outside_pair.get_or_insert((i, j));
        } else if hi == Ordering::Less && lo == Ordering::Greater {
            inside_pair.get_or_insert((i, j));
        }
    }
    let mut modulus_defect: f64 = 0.0;
    for x in &w.weights {
        let b = complex_embed(x, &vec![1; x.tower().depth()], 20)?;
        let m = (b.re_f64().powi(2) + b.im_f64().powi(2)).sqrt();
        modulus_defect = modulus_defect.max((m - 1.0).abs());
    }
    Ok(HadamardCertificate { hadamard: outside_pair.is_none(), all_real, inside_pair, outside_pair, modulus_defect })
}

/// A coefficient `a_{i,j}` that is not an algebraic integer, which rules out
/// Butson type.
pub fn non_butson_witness(f: &WeightFamily) -> Result<((usize, usize), TowerElement), TypeIIError> {
    PAIRS
        .iter()
        .zip(&f.a)
        .find(|(_, x)| !x.is_algebraic_integer())
        .map(|(&p, x)| (p, x.reduce()))
        .ok_or(TypeIIError::NoWitness)
}

/// Generators `E_v H* E_w H - H* E_w H E_v` of the span condition, with
/// `H*` the transpose of the entrywise inverse, flattened row-major.
pub fn span_generators(h: &Matrix<TowerElement>) -> Result<Matrix<TowerElement>, TypeIIError> {
    let n = h.len();
    if h.iter().any(|r| r.len() != n) {
        return Err(TypeIIError::NotSquare);
    }
    let inv = entrywise_inverse(h).ok_or(TypeIIError::ZeroWeight)?;
    let zero = TowerElement::zero(h[0][0].tower());
    Ok((0..n * n)
        .map(|idx| {
            let (v, w) = (idx / n, idx % n);
            let mut g = vec![zero.clone(); n * n];
            // (E_v H* E_w H)_{v,j} = H*_{v,w} H_{w,j}
            for j in 0..n {
                g[v * n + j] = &g[v * n + j] + &(&inv[w][v] * &h[w][j]);
            }
            // (H* E_w H E_v)_{i,v} = H*_{i,w} H_{w,v}
            for i in 0..n {
                g[i * n + v] = &g[i * n + v] - &(&inv[w][i] * &h[w][v]);
            }
            g
        })
        .collect())
}

/// The `2n - 1` functionals vanishing on every span generator:
/// `X -> X_{v,v}` and `X -> tr(X H* E_k H)`.
pub fn trivial_span_kernel(h: &Matrix<TowerElement>) -> Option<Matrix<TowerElement>> {
    let n = h.len();
    let t = h[0][0].tower();
    let inv = entrywise_inverse(h)?;
    let mut out = Vec::with_capacity(2 * n);
    for v in 0..n {
        let mut y = vec![TowerElement::zero(t); n * n];
        y[v * n + v] = TowerElement::one(t);
        out.push(y);
    }
    for k in 0..n {
        out.push((0..n * n).map(|idx| &h[k][idx / n] * &inv[k][idx % n]).collect());
    }
    Some(out)
}

/// Exact rank of the span-condition generators of a complex Hadamard matrix
/// `H` of order `n`; `H` is isolated when the rank is `(n-1)^2`.
pub fn span_rank(h: &Matrix<TowerElement>) -> Result<RankCertificate, TypeIIError> {
    let gens = span_generators(h)?;
    let kernel = trivial_span_kernel(h).ok_or(TypeIIError::ZeroWeight)?;
    Ok(certified_rank(&gens, &kernel, 400)?)
}

pub fn span_condition(h: &Matrix<TowerElement>) -> Result<bool, TypeIIError> {
    let n = h.len();
    Ok(span_rank(h)?.rank == (n - 1) * (n - 1))
}

/// Dense matrix export with a tower header.
pub fn dense_to_json(m: &Matrix<TowerElement>) -> Value {
    let tower = m[0][0].tower();
    let levels: Vec<Value> = (0..tower.depth())
        .map(|i| {
            let (p, s) = tower.level_poly(i);
            json!({"p": ejson::to_json(&p), "s": ejson::to_json(&s)})
        })
        .collect();
    let entries: Vec<Vec<Value>> = m.iter().map(|r| r.iter().map(ejson::to_json).collect()).collect();
    json!({"format_version": 1, "tower": levels, "entries": entries})
}

/// CSV of complex approximations, one row per matrix row, each cell
/// `re+imi`.
pub fn dense_to_csv(m: &Matrix<TowerElement>, digits: usize) -> Result<String, TypeIIError> {
    let mut out = String::new();
    for row in m {
        let cells: Vec<String> = row
            .iter()
            .map(|x| complex_embed(x, &vec![1; x.tower().depth()], digits as u32 + 2).map(|b| b.to_decimal(digits)))
            .collect::<Result<_, _>>()?;
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// JSON description of a weight family.
pub fn family_to_json(f: &WeightFamily) -> Value {
    json!({
        "case": f.case.label(),
        "q": f.q.to_string(),
        "branch": f.branch,
        "r_sign": f.r_sign,
        "r": f.r.as_ref().map(ejson::to_json),
        "a": f.a.iter().map(|x| x.reduce().to_string()).collect::<Vec<_>>(),
        "weights": f.weights.iter().map(ejson::to_json).collect::<Vec<_>>(),
    })
}

/// `q` as a machine integer, when it fits.
pub fn q_as_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// `true` when the element equals one.
pub fn is_one(x: &TowerElement) -> bool {
    x.is_one() || x.as_rational().is_some_and(|v| v.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::int;
    use crate::scheme::build_petersen_line_scheme;

    fn sqrt_elt(d: i64) -> TowerElement {
        adjoin_rational_sqrt(&int(d)).unwrap().1
    }

    #[test]
    fn case_iv_matches_closed_form() {
        let f = family_coefficients(Case::IV, &int(4), 1, 1).unwrap();
        let s = sqrt_elt(-15);
        let expect = (&TowerElement::from_int(s.tower(), -7) + &s).scale(&rat(1, 8));
        assert_eq!(f.weights[2], expect);
        assert!(f.weights[1].is_one() && f.weights[3].is_one());
    }

    #[test]
    fn case_vi_relation_and_coefficient() {
        let f = family_coefficients(Case::VI, &int(4), 1, 1).unwrap();
        let w = &f.weights;
        assert!((&(&w[1] * &w[2]) + &w[3]).is_zero());
        let s = sqrt_elt(201);
        let expect = (&s - &TowerElement::one(s.tower())).scale(&rat(3, 20));
        assert_eq!(f.a[0], expect);
    }

    #[test]
    fn phi_of_reconstruction_is_identity() {
        for case in Case::ALL {
            for branch in [1, -1] {
                let f = family_coefficients(case, &int(6), 1, branch).unwrap();
                let a = phi(&f.weights).unwrap();
                for (k, &(i, j)) in PAIRS.iter().enumerate() {
                    assert_eq!(a[i][j], f.a[k], "case {case} pair ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn case_ii_closed_form_weight() {
        let q = int(8);
        let f = family_coefficients(Case::II, &q, 1, 1).unwrap();
        let w3 = &f.weights[3];
        // w1 = (-(q-3) w3 + (q-1)) / (q^2 - 2q - 1)
        let expect = (&w3.scale(&int(-5)) + &TowerElement::from_int(w3.tower(), 7)).scale(&rat(1, 47));
        assert_eq!(f.weights[1], expect);
        assert_eq!(f.weights[2], expect);
    }

    #[test]
    fn degenerate_section() {
        let q = TowerDescriptor::rational();
        let two = TowerElement::from_int(&q, 2);
        let a = vec![vec![two.clone(); 4]; 4];
        let one = TowerElement::one(&q);
        let w = reconstruct_weights(&a, 0, 1, (&one, &one)).unwrap();
        assert!(w.iter().all(TowerElement::is_one));
    }

    #[test]
    fn phi_on_fourth_roots_of_unity() {
        let i = sqrt_elt(-1);
        let t = i.tower().clone();
        let w = vec![TowerElement::one(&t), i.clone(), TowerElement::from_int(&t, -1), -&i];
        let a = phi(&w).unwrap();
        let vals: Vec<i64> = PAIRS.iter().map(|&(x, y)| a[x][y].as_rational().unwrap().to_integer().to_i64().unwrap()).collect();
        assert_eq!(vals, vec![0, -2, 0, 0, -2, 0]);
    }

    #[test]
    fn trivial_weights_are_not_type_ii() {
        let q = TowerDescriptor::rational();
        let w = TypeIIMatrix::new(vec![TowerElement::one(&q); 4], &int(4));
        assert!(!is_type_ii(&w).holds());
    }

    #[test]
    fn all_cases_type_ii_at_several_q() {
        for q in [4, 6, 8, 10] {
            for case in Case::ALL {
                for r_sign in [1, -1] {
                    let f = family_coefficients(case, &int(q), r_sign, 1).unwrap();
                    let c = is_type_ii(&TypeIIMatrix::from_family(&f));
                    assert!(c.spectral, "case {case} q {q}");
                }
            }
        }
    }

    #[test]
    fn hadamard_status_at_four() {
        let s = build_petersen_line_scheme().unwrap();
        for (case, r_sign, expect) in [
            (Case::I, 1, false),
            (Case::II, 1, false),
            (Case::III, 1, true),
            (Case::IV, 1, true),
            (Case::V, 1, true),
            (Case::VI, 1, true),
            (Case::VI, -1, false),
        ] {
            let f = family_coefficients(case, &int(4), r_sign, 1).unwrap();
            let w = TypeIIMatrix::from_family(&f).with_scheme(s.clone());
            assert_eq!(is_type_ii(&w).dense, Some(true));
            let h = is_hadamard(&w).unwrap();
            assert_eq!(h.hadamard, expect, "case {case} r {r_sign}");
            if expect {
                assert!(h.modulus_defect < 1e-12);
            }
        }
    }

    #[test]
    fn non_butson_witnesses() {
        let f = family_coefficients(Case::III, &int(4), 1, 1).unwrap();
        assert_eq!(non_butson_witness(&f).unwrap().1.as_rational(), Some(rat(5, 3)));
        let f = family_coefficients(Case::IV, &int(4), 1, 1).unwrap();
        assert_eq!(non_butson_witness(&f).unwrap(), ((0, 2), TowerElement::from_rational(&TowerDescriptor::rational(), rat(-7, 4))));
        let f = family_coefficients(Case::V, &int(4), 1, 1).unwrap();
        assert_eq!(non_butson_witness(&f).unwrap().1.as_rational(), Some(rat(-1, 2)));
    }

    #[test]
    fn rejects_bad_q() {
        assert_eq!(family_coefficients(Case::I, &int(5), 1, 1).unwrap_err(), TypeIIError::InvalidQ);
        assert_eq!(family_coefficients(Case::I, &int(2), 1, 1).unwrap_err(), TypeIIError::QTooSmall);
        assert!("vii".parse::<Case>().is_err());
    }
}
