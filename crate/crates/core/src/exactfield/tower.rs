//! Towers of quadratic extensions of the rationals and their elements.
//!
//! A tower of depth `k` is `Q = K_0 < K_1 < ... < K_k` where
//! `K_{i+1} = K_i[t_i] / (t_i^2 - p_i t_i - s_i)` with `p_i, s_i` in `K_i`.
//! An element of `K_k` is stored as a flat vector of `2^k` rationals: the
//! first half is the `K_{k-1}` part and the second half is the coefficient of
//! `t_{k-1}`, recursively. Index `i` thus multiplies the monomial
//! `prod_{j : bit j of i} t_j`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::rational::{rational_sqrt, squarefree_rational, Rational};
use super::FieldError;

/// Minimal polynomial `t^2 - p t - s` of one level; `p` and `s` have
/// `2^i` coefficients for the level with index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level {
    p: Vec<Rational>,
    s: Vec<Rational>,
}

impl Level {
    pub fn p_coeffs(&self) -> &[Rational] {
        &self.p
    }

    pub fn s_coeffs(&self) -> &[Rational] {
        &self.s
    }
}

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TowerDescriptor {
    levels: Vec<Level>,
}

/// Shared handle to a tower descriptor.
pub type Tower = Arc<TowerDescriptor>;

impl TowerDescriptor {
    /// The tower consisting of `Q` alone.
    pub fn rational() -> Tower {
        Arc::new(TowerDescriptor { levels: Vec::new() })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Degree over `Q`.
    pub fn degree(&self) -> usize {
        1 << self.levels.len()
    }

    /// The first `k` levels as their own tower.
    pub fn prefix(&self, k: usize) -> Tower {
        Arc::new(TowerDescriptor { levels: self.levels[..k.min(self.depth())].to_vec() })
    }

    pub fn is_prefix_of(&self, other: &TowerDescriptor) -> bool {
        self.depth() <= other.depth() && self.levels[..] == other.levels[..self.depth()]
    }

    /// Coefficients `(p, s)` of the minimal polynomial of level `i`, as
    /// elements of the tower's first `i` levels.
    pub fn level_poly(&self, i: usize) -> (TowerElement, TowerElement) {
        let base = self.prefix(i);
        let l = &self.levels[i];
        (
            TowerElement { tower: base.clone(), coeffs: l.p.clone() },
            TowerElement { tower: base, coeffs: l.s.clone() },
        )
    }

    /// Discriminant `p^2 + 4 s` of level `i`, in the first `i` levels.
    pub fn level_discriminant(&self, i: usize) -> TowerElement {
        let (p, s) = self.level_poly(i);
        &(&p * &p) + &s.scale(&Rational::from_integer(4.into()))
    }

    pub(crate) fn levels(&self) -> &[Level] {
        &self.levels
    }
}

/// Extends `base` by a root of `t^2 - p t - s`.
///
/// Fails with [`FieldError::Reducible`] when the polynomial has a root in
/// `base` already.
pub fn adjoin_root(base: &Tower, p: &TowerElement, s: &TowerElement) -> Result<Tower, FieldError> {
    let p = p.lift(base)?;
    let s = s.lift(base)?;
    let disc = &(&p * &p) + &s.scale(&Rational::from_integer(4.into()));
    if sqrt_in_field(&disc).is_some() {
        return Err(FieldError::Reducible);
    }
    let mut levels = base.levels.clone();
    levels.push(Level { p: p.coeffs, s: s.coeffs });
    Ok(Arc::new(TowerDescriptor { levels }))
}

/// Extends `base` by a square root of `d`.
pub fn adjoin_sqrt(base: &Tower, d: &TowerElement) -> Result<Tower, FieldError> {
    adjoin_root(base, &TowerElement::zero(base), d)
}

/// Extends `Q` by the square root of a square-free-reduced rational,
/// returning the tower and the element equal to `sqrt(x)`.
pub fn adjoin_rational_sqrt(x: &Rational) -> Result<(Tower, TowerElement), FieldError> {
    let (c, d) = squarefree_rational(x);
    let q = TowerDescriptor::rational();
    let tower = adjoin_sqrt(&q, &TowerElement::from_rational(&q, Rational::from_integer(d)))?;
    let root = TowerElement::generator(&tower, 0).scale(&c);
    Ok((tower, root))
}

#[derive(Clone, Debug)]
pub struct TowerElement {
    tower: Tower,
    coeffs: Vec<Rational>,
}

fn all_zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn raw_add(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn raw_sub(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn raw_neg(x: &[Rational]) -> Vec<Rational> {
    x.iter().map(|a| -a).collect()
}

fn raw_scale(x: &[Rational], c: &Rational) -> Vec<Rational> {
    x.iter().map(|a| a * c).collect()
}

fn concat(mut a: Vec<Rational>, b: Vec<Rational>) -> Vec<Rational> {
    a.extend(b);
    a
}

fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

/// Number of leading levels actually needed to express `x`.
fn min_depth(x: &[Rational]) -> usize {
    let mut k = x.len().trailing_zeros() as usize;
    while k > 0 && all_zero(&x[1 << (k - 1)..]) {
        k -= 1;
    }
    k
}

fn raw_mul(levels: &[Level], x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let k = levels.len();
    if k == 0 {
        return vec![&x[0] * &y[0]];
    }
    let h = 1 << (k - 1);
    let lower = &levels[..k - 1];
    let lvl = &levels[k - 1];
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let bz = all_zero(b);
    let dz = all_zero(d);
    if bz && dz {
        if all_zero(a) || all_zero(c) {
            return zeros(2 * h);
        }
        return concat(raw_mul(lower, a, c), zeros(h));
    }
    if bz {
        return concat(raw_mul(lower, a, c), raw_mul(lower, a, d));
    }
    if dz {
        return concat(raw_mul(lower, a, c), raw_mul(lower, b, c));
    }
    // (a + b t)(c + d t) = ac + bd s + (ad + bc + bd p) t
    let ac = raw_mul(lower, a, c);
    let bd = raw_mul(lower, b, d);
    let cross = raw_sub(&raw_sub(&raw_mul(lower, &raw_add(a, b), &raw_add(c, d)), &ac), &bd);
    let low = raw_add(&ac, &raw_mul(lower, &bd, &lvl.s));
    let high = if all_zero(&lvl.p) { cross } else { raw_add(&cross, &raw_mul(lower, &bd, &lvl.p)) };
    concat(low, high)
}

fn raw_inv(levels: &[Level], x: &[Rational]) -> Option<Vec<Rational>> {
    let k = levels.len();
    if k == 0 {
        return if x[0].is_zero() { None } else { Some(vec![x[0].recip()]) };
    }
    let h = 1 << (k - 1);
    let lower = &levels[..k - 1];
    let lvl = &levels[k - 1];
    let (a, b) = x.split_at(h);
    if all_zero(b) {
        return raw_inv(lower, a).map(|ia| concat(ia, zeros(h)));
    }
    // conjugate (a + b p) - b t; norm a(a + b p) - b^2 s
    let apb = raw_add(a, &raw_mul(lower, b, &lvl.p));
    let norm = raw_sub(&raw_mul(lower, a, &apb), &raw_mul(lower, &raw_mul(lower, b, b), &lvl.s));
    let inv_norm = raw_inv(lower, &norm)?;
    Some(concat(raw_mul(lower, &apb, &inv_norm), raw_neg(&raw_mul(lower, b, &inv_norm))))
}

fn raw_sqrt(levels: &[Level], x: &[Rational]) -> Option<Vec<Rational>> {
    let k = levels.len();
    if k == 0 {
        return rational_sqrt(&x[0]).map(|r| vec![r]);
    }
    let h = 1 << (k - 1);
    let lower = &levels[..k - 1];
    let lvl = &levels[k - 1];
    let (a, b) = x.split_at(h);
    let half = Rational::new(1.into(), 2.into());
    let four = Rational::from_integer(4.into());
    // Rewrite over delta = 2t - p, delta^2 = D = p^2 + 4 s: x = u + v delta.
    let u = raw_add(a, &raw_scale(&raw_mul(lower, b, &lvl.p), &half));
    let v = raw_scale(b, &half);
    let disc = raw_add(&raw_mul(lower, &lvl.p, &lvl.p), &raw_scale(&lvl.s, &four));
    // alpha + beta delta = (alpha - beta p) + 2 beta t
    let assemble = |alpha: &[Rational], beta: &[Rational]| {
        concat(raw_sub(alpha, &raw_mul(lower, beta, &lvl.p)), raw_scale(beta, &Rational::from_integer(2.into())))
    };
    if all_zero(&v) {
        if let Some(r) = raw_sqrt(lower, &u) {
            return Some(concat(r, zeros(h)));
        }
        let inv_d = raw_inv(lower, &disc)?;
        let beta = raw_sqrt(lower, &raw_mul(lower, &u, &inv_d))?;
        return Some(assemble(&zeros(h), &beta));
    }
    let n = raw_sub(&raw_mul(lower, &u, &u), &raw_mul(lower, &disc, &raw_mul(lower, &v, &v)));
    let m = raw_sqrt(lower, &n)?;
    for cand in [raw_scale(&raw_add(&u, &m), &half), raw_scale(&raw_sub(&u, &m), &half)] {
        if all_zero(&cand) {
            continue;
        }
        if let Some(alpha) = raw_sqrt(lower, &cand) {
            let inv2a = raw_inv(lower, &raw_scale(&alpha, &Rational::from_integer(2.into())))?;
            let beta = raw_mul(lower, &v, &inv2a);
            return Some(assemble(&alpha, &beta));
        }
    }
    None
}

/// Square root of `x` inside its own tower, if it exists.
pub fn sqrt_in_field(x: &TowerElement) -> Option<TowerElement> {
    raw_sqrt(&x.tower.levels, &x.coeffs).map(|c| TowerElement { tower: x.tower.clone(), coeffs: c })
}

/// Conjugate and trace relative to level `level` (the automorphism
/// `t_level -> p_level - t_level`). `x` must lie in the first `level + 1`
/// levels; the results are returned in `x`'s tower.
pub fn trace_conj(x: &TowerElement, level: usize) -> Result<(TowerElement, TowerElement), FieldError> {
    let depth = x.tower.depth();
    if level >= depth {
        return Err(FieldError::LevelOutOfRange { level, depth });
    }
    let width = 2usize << level;
    if !all_zero(&x.coeffs[width..]) {
        return Err(FieldError::NotInSubfield);
    }
    let levels = &x.tower.levels[..=level];
    let h = width / 2;
    let (a, b) = x.coeffs[..width].split_at(h);
    let conj_low = raw_add(a, &raw_mul(&levels[..level], b, &levels[level].p));
    let mut conj = concat(conj_low, raw_neg(b));
    conj.resize(x.coeffs.len(), Rational::zero());
    let conj = TowerElement { tower: x.tower.clone(), coeffs: conj };
    let trace = x + &conj;
    Ok((trace, conj))
}

impl TowerElement {
    pub fn zero(tower: &Tower) -> Self {
        TowerElement { tower: tower.clone(), coeffs: zeros(tower.degree()) }
    }

    pub fn one(tower: &Tower) -> Self {
        Self::from_rational(tower, Rational::one())
    }

    pub fn from_rational(tower: &Tower, q: Rational) -> Self {
        let mut coeffs = zeros(tower.degree());
        coeffs[0] = q;
        TowerElement { tower: tower.clone(), coeffs }
    }

    pub fn from_int(tower: &Tower, n: i64) -> Self {
        Self::from_rational(tower, Rational::from_integer(n.into()))
    }

    /// The generator `t_level`.
    pub fn generator(tower: &Tower, level: usize) -> Self {
        assert!(level < tower.depth(), "level {level} out of range");
        let mut coeffs = zeros(tower.degree());
        coeffs[1 << level] = Rational::one();
        TowerElement { tower: tower.clone(), coeffs }
    }

    pub fn from_coeffs(tower: &Tower, coeffs: Vec<Rational>) -> Result<Self, FieldError> {
        if coeffs.len() != tower.degree() {
            return Err(FieldError::CoefficientLength { expected: tower.degree(), found: coeffs.len() });
        }
        Ok(TowerElement { tower: tower.clone(), coeffs })
    }

    /// `a + b t_top` for `a, b` in the tower below the top level of `tower`.
    pub fn from_pair(tower: &Tower, a: &TowerElement, b: &TowerElement) -> Result<Self, FieldError> {
        let k = tower.depth();
        if k == 0 {
            return Err(FieldError::LevelOutOfRange { level: 0, depth: 0 });
        }
        let base = tower.prefix(k - 1);
        let a = a.lift(&base)?;
        let b = b.lift(&base)?;
        Ok(TowerElement { tower: tower.clone(), coeffs: concat(a.coeffs, b.coeffs) })
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Splits into `(a, b)` with `self = a + b t_top`.
    pub fn split(&self) -> Option<(TowerElement, TowerElement)> {
        let k = self.tower.depth();
        if k == 0 {
            return None;
        }
        let base = self.tower.prefix(k - 1);
        let h = 1 << (k - 1);
        Some((
            TowerElement { tower: base.clone(), coeffs: self.coeffs[..h].to_vec() },
            TowerElement { tower: base, coeffs: self.coeffs[h..].to_vec() },
        ))
    }

    pub fn is_zero(&self) -> bool {
        all_zero(&self.coeffs)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && all_zero(&self.coeffs[1..])
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if all_zero(&self.coeffs[1..]) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Number of levels needed to express this element.
    pub fn min_depth(&self) -> usize {
        min_depth(&self.coeffs)
    }

    /// The same value in `target`, which must extend the levels this element
    /// actually uses.
    pub fn lift(&self, target: &Tower) -> Result<TowerElement, FieldError> {
        if Arc::ptr_eq(&self.tower, target) {
            return Ok(self.clone());
        }
        let k = self.min_depth();
        if k > target.depth() || self.tower.levels[..k] != target.levels[..k] {
            return Err(FieldError::IncompatibleTowers);
        }
        let mut coeffs = self.coeffs[..1 << k].to_vec();
        coeffs.resize(target.degree(), Rational::zero());
        Ok(TowerElement { tower: target.clone(), coeffs })
    }

    /// The same value in the smallest prefix of its tower containing it.
    pub fn reduce(&self) -> TowerElement {
        let k = self.min_depth();
        TowerElement { tower: self.tower.prefix(k), coeffs: self.coeffs[..1 << k].to_vec() }
    }

    fn common(&self, o: &TowerElement) -> Result<Tower, FieldError> {
        if Arc::ptr_eq(&self.tower, &o.tower) {
            return Ok(self.tower.clone());
        }
        let (deep, shallow) =
            if self.tower.depth() >= o.tower.depth() { (self, o) } else { (o, self) };
        if shallow.lift(&deep.tower).is_ok() {
            return Ok(deep.tower.clone());
        }
        if deep.lift(&shallow.tower).is_ok() {
            return Ok(shallow.tower.clone());
        }
        Err(FieldError::IncompatibleTowers)
    }

    fn binary(
        &self,
        o: &TowerElement,
        f: impl Fn(&[Level], &[Rational], &[Rational]) -> Vec<Rational>,
    ) -> Result<TowerElement, FieldError> {
        if Arc::ptr_eq(&self.tower, &o.tower) {
            return Ok(TowerElement {
                tower: self.tower.clone(),
                coeffs: f(&self.tower.levels, &self.coeffs, &o.coeffs),
            });
        }
        let t = self.common(o)?;
        let a = self.lift(&t)?;
        let b = o.lift(&t)?;
        Ok(TowerElement { coeffs: f(&t.levels, &a.coeffs, &b.coeffs), tower: t })
    }

    pub fn try_add(&self, o: &TowerElement) -> Result<TowerElement, FieldError> {
        self.binary(o, |_, a, b| raw_add(a, b))
    }

    pub fn try_sub(&self, o: &TowerElement) -> Result<TowerElement, FieldError> {
        self.binary(o, |_, a, b| raw_sub(a, b))
    }

    pub fn try_mul(&self, o: &TowerElement) -> Result<TowerElement, FieldError> {
        self.binary(o, raw_mul)
    }

    pub fn try_div(&self, o: &TowerElement) -> Result<TowerElement, FieldError> {
        let inv = o.inv().ok_or(FieldError::DivisionByZero)?;
        self.try_mul(&inv)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<TowerElement> {
        raw_inv(&self.tower.levels, &self.coeffs)
            .map(|c| TowerElement { tower: self.tower.clone(), coeffs: c })
    }

    pub fn scale(&self, c: &Rational) -> TowerElement {
        TowerElement { tower: self.tower.clone(), coeffs: raw_scale(&self.coeffs, c) }
    }

    pub fn square(&self) -> TowerElement {
        self * self
    }

    pub fn pow(&self, e: i64) -> Option<TowerElement> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = TowerElement::one(&self.tower);
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = sq.square();
            }
        }
        Some(acc)
    }

    /// Matrix of multiplication by `self` on the monomial basis of the tower.
    pub fn multiplication_matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.coeffs.len();
        let mut m = vec![zeros(n); n];
        for i in 0..n {
            let mut e = zeros(n);
            e[i] = Rational::one();
            let col = raw_mul(&self.tower.levels, &self.coeffs, &e);
            for (r, v) in col.into_iter().enumerate() {
                m[r][i] = v;
            }
        }
        m
    }

    /// Characteristic polynomial over `Q` of multiplication by the element,
    /// computed in the smallest tower containing it.
    pub fn charpoly_over_q(&self) -> Poly {
        charpoly(&self.reduce().multiplication_matrix())
    }

    /// Monic minimal polynomial over `Q`.
    pub fn min_poly_over_q(&self) -> Poly {
        self.charpoly_over_q().radical()
    }

    /// Whether the minimal polynomial over `Q` has integer coefficients.
    pub fn is_algebraic_integer(&self) -> bool {
        self.min_poly_over_q().coeffs().iter().all(|c| c.denom().is_one())
    }

    /// Norm down to `Q`.
    pub fn norm_over_q(&self) -> Rational {
        let cp = self.charpoly_over_q();
        let deg = cp.degree().unwrap_or(0);
        let c0 = cp.coeff(0);
        if deg.is_odd() {
            -c0
        } else {
            c0
        }
    }

    fn key_cmp(&self, o: &TowerElement) -> Ordering {
        let ka = self.min_depth();
        let kb = o.min_depth();
        ka.cmp(&kb)
            .then_with(|| {
                if Arc::ptr_eq(&self.tower, &o.tower) {
                    Ordering::Equal
                } else {
                    self.tower.levels[..ka].cmp(&o.tower.levels[..kb])
                }
            })
            .then_with(|| self.coeffs[..1 << ka].cmp(&o.coeffs[..1 << kb]))
    }
}

/// Characteristic polynomial `det(xI - M)` by the Faddeev-LeVerrier recursion.
pub fn charpoly(a: &[Vec<Rational>]) -> Poly {
    let n = a.len();
    let mut c = zeros(n + 1);
    c[n] = Rational::one();
    let mut mk = vec![zeros(n); n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![zeros(n); n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !mk[l][j].is_zero() {
                        acc += &a[i][l] * &mk[l][j];
                    }
                }
                if i == j {
                    acc += &c[n - k + 1];
                }
                next[i][j] = acc;
            }
        }
        mk = next;
        let mut tr = Rational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &mk[l][i];
            }
        }
        c[n - k] = -tr / Rational::from_integer((k as i64).into());
    }
    Poly::new(c)
}

impl PartialEq for TowerElement {
    fn eq(&self, o: &Self) -> bool {
        self.key_cmp(o) == Ordering::Equal
    }
}

impl Eq for TowerElement {}

impl PartialOrd for TowerElement {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Total order on canonical representatives: elements are compared in the
/// smallest prefix tower that contains them.
impl Ord for TowerElement {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key_cmp(o)
    }
}

impl Hash for TowerElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let k = self.min_depth();
        k.hash(state);
        self.coeffs[..1 << k].hash(state);
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&TowerElement> for &TowerElement {
            type Output = TowerElement;
            fn $m(self, o: &TowerElement) -> TowerElement {
                self.$f(o).expect("arithmetic across incompatible towers")
            }
        }
        impl $tr<TowerElement> for TowerElement {
            type Output = TowerElement;
            fn $m(self, o: TowerElement) -> TowerElement {
                (&self).$m(&o)
            }
        }
        impl $tr<&TowerElement> for TowerElement {
            type Output = TowerElement;
            fn $m(self, o: &TowerElement) -> TowerElement {
                (&self).$m(o)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        TowerElement { tower: self.tower.clone(), coeffs: raw_neg(&self.coeffs) }
    }
}

impl Neg for TowerElement {
    type Output = TowerElement;
    fn neg(self) -> TowerElement {
        -&self
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce();
        if r.tower.depth() == 0 {
            return write!(f, "{}", r.coeffs[0]);
        }
        let mut terms = Vec::new();
        for (i, c) in r.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> =
                (0..r.tower.depth()).filter(|j| i >> j & 1 == 1).map(|j| format!("t{j}")).collect();
            if mono.is_empty() {
                terms.push(format!("{c}"));
            } else if c.is_one() {
                terms.push(mono.join("*"));
            } else {
                terms.push(format!("({c})*{}", mono.join("*")));
            }
        }
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{int, rat};

    fn q() -> Tower {
        TowerDescriptor::rational()
    }

    fn qsqrt(d: i64) -> (Tower, TowerElement) {
        let (t, r) = adjoin_rational_sqrt(&int(d)).unwrap();
        (t, r)
    }

    #[test]
    fn inverse_in_quadratic_field() {
        let (t, s) = qsqrt(17);
        let x = &TowerElement::from_int(&t, 433) + &s.scale(&int(105));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        // 433^2 - 17*105^2 = 64
        assert_eq!(x.norm_over_q(), int(64));
    }

    #[test]
    fn trace_of_pell_element() {
        let (t, s) = qsqrt(17);
        let x = &TowerElement::from_int(&t, 433) + &s.scale(&int(105));
        let (tr, conj) = trace_conj(&x, 0).unwrap();
        assert_eq!(tr.as_rational(), Some(int(866)));
        assert_eq!(&conj + &x, tr);
        let r = TowerElement::from_int(&t, 5);
        assert_eq!(trace_conj(&r, 0).unwrap().1, r);
    }

    #[test]
    fn reducible_is_rejected() {
        let base = q();
        let p = TowerElement::from_int(&base, 3);
        let s = TowerElement::from_int(&base, -2);
        assert_eq!(adjoin_root(&base, &p, &s).unwrap_err(), FieldError::Reducible);
        let (t, s17) = qsqrt(17);
        assert_eq!(adjoin_sqrt(&t, &TowerElement::from_int(&t, 68)).unwrap_err(), FieldError::Reducible);
        assert!(adjoin_sqrt(&t, &s17).is_ok());
    }

    #[test]
    fn sqrt_recovers_squares_in_depth_two() {
        let (t1, s2) = qsqrt(2);
        let t2 = adjoin_sqrt(&t1, &TowerElement::from_int(&t1, 3)).unwrap();
        let s3 = TowerElement::generator(&t2, 1);
        let x = &(&s2.lift(&t2).unwrap() + &s3) + &TowerElement::from_int(&t2, 1);
        let sq = x.square();
        let r = sqrt_in_field(&sq).unwrap();
        assert!(r == x || r == -&x);
        assert!(sqrt_in_field(&s3).is_none());
        // sqrt(6) = sqrt(2) sqrt(3) lives in the tower
        let six = TowerElement::from_int(&t2, 6);
        let r6 = sqrt_in_field(&six).unwrap();
        assert_eq!(r6.square(), six);
    }

    #[test]
    fn mixing_prefix_towers() {
        let (t1, s) = qsqrt(5);
        let t2 = adjoin_root(&t1, &s.scale(&rat(1, 3)), &TowerElement::from_int(&t1, -1)).unwrap();
        let w = TowerElement::generator(&t2, 1);
        let sum = &w + &s;
        assert_eq!(sum.tower().depth(), 2);
        let half = TowerElement::from_rational(&q(), rat(1, 2));
        assert_eq!((&half + &half).as_rational(), Some(int(1)));
        let (other, _) = qsqrt(7);
        let x = TowerElement::generator(&other, 0);
        assert_eq!(x.try_add(&s).unwrap_err(), FieldError::IncompatibleTowers);
    }

    #[test]
    fn min_poly_and_integrality() {
        let (t, s) = qsqrt(-15);
        // (-7 + sqrt(-15))/8 has minimal polynomial x^2 + 7/4 x + 1
        let w = (&TowerElement::from_int(&t, -7) + &s).scale(&rat(1, 8));
        assert_eq!(w.min_poly_over_q(), Poly::new(vec![int(1), rat(7, 4), int(1)]));
        assert!(!w.is_algebraic_integer());
        assert!(s.is_algebraic_integer());
        assert_eq!(TowerElement::from_int(&t, 3).min_poly_over_q(), Poly::from_ints(&[-3, 1]));
    }

    #[test]
    fn equality_ignores_unused_levels() {
        let (t, _) = qsqrt(3);
        assert_eq!(TowerElement::from_int(&t, 2), TowerElement::from_int(&q(), 2));
        let mut set = std::collections::BTreeSet::new();
        set.insert(TowerElement::from_int(&t, 2));
        set.insert(TowerElement::from_int(&q(), 2));
        assert_eq!(set.len(), 1);
    }

    proptest::proptest! {
        #[test]
        fn field_axioms_depth_two(
            a in proptest::collection::vec(-20i64..20, 4),
            b in proptest::collection::vec(-20i64..20, 4),
            c in proptest::collection::vec(-20i64..20, 4),
        ) {
            let (t1, s) = qsqrt(201);
            let t2 = adjoin_root(&t1, &s.scale(&rat(1, 5)), &TowerElement::from_int(&t1, -1)).unwrap();
            let mk = |v: &Vec<i64>| TowerElement::from_coeffs(&t2, v.iter().map(|&x| int(x)).collect()).unwrap();
            let (x, y, z) = (mk(&a), mk(&b), mk(&c));
            proptest::prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            proptest::prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            proptest::prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                proptest::prop_assert!((&x * &x.inv().unwrap()).is_one());
                let sq = x.square();
                let r = sqrt_in_field(&sq).unwrap();
                proptest::prop_assert_eq!(r.square(), sq);
            }
        }
    }
}
