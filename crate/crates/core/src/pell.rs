//! Generalized Pell equations `x^2 - d y^2 = a`: base solutions, descent by
//! the fundamental unit, and the values of `q` for which
//! `r = sqrt((17q-1)(q-1))` is an integer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::{int, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("d = {0} is not a square-free integer greater than 1")]
    NotSquareFree(i64),
    #[error("({0}, {1}) is not a nontrivial unit of norm 1")]
    NotAUnit(String, String),
    #[error("a must be positive")]
    NonPositiveNorm,
    #[error("q must be an even integer at least 4")]
    InvalidQ,
    #[error("({0}, {1}) does not solve the equation")]
    NotASolution(String, String),
}

/// `x + y sqrt(d)` with integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt { x: x.into(), y: y.into() }
    }

    pub fn mul(&self, o: &QuadInt, d: i64) -> QuadInt {
        QuadInt { x: &self.x * &o.x + BigInt::from(d) * &self.y * &o.y, y: &self.x * &o.y + &self.y * &o.x }
    }

    pub fn conj(&self) -> QuadInt {
        QuadInt { x: self.x.clone(), y: -&self.y }
    }

    pub fn norm(&self, d: i64) -> BigInt {
        &self.x * &self.x - BigInt::from(d) * &self.y * &self.y
    }

    /// `self^n` for a unit of norm 1; negative powers use the conjugate.
    pub fn unit_pow(&self, n: i64, d: i64) -> QuadInt {
        let base = if n < 0 { self.conj() } else { self.clone() };
        (0..n.unsigned_abs()).fold(QuadInt::new(1, 0), |acc, _| acc.mul(&base, d))
    }

    pub fn trace(&self) -> BigInt {
        &self.x * 2
    }
}

fn is_square_free(d: i64) -> bool {
    d > 1 && (2..).take_while(|p| p * p <= d).all(|p| d % (p * p) != 0)
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// `x^2 - d y^2 = a` with a stored fundamental unit `u + v sqrt(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellProblem {
    pub d: i64,
    pub a: BigInt,
    pub unit: QuadInt,
}

impl PellProblem {
    pub fn new(d: i64, a: impl Into<BigInt>, u: i64, v: i64) -> Result<Self, PellError> {
        if !is_square_free(d) {
            return Err(PellError::NotSquareFree(d));
        }
        let a = a.into();
        if !a.is_positive() {
            return Err(PellError::NonPositiveNorm);
        }
        let unit = QuadInt::new(u, v);
        if u <= 1 || v <= 0 || !unit.norm(d).is_one() {
            return Err(PellError::NotAUnit(u.to_string(), v.to_string()));
        }
        Ok(PellProblem { d, a, unit })
    }

    /// `x^2 - 17 y^2 = 64` with unit `33 + 8 sqrt(17)`.
    pub fn seventeen() -> Self {
        Self::new(17, 64, 33, 8).expect("33^2 - 17*8^2 = 1")
    }

    /// `floor(sqrt(a (u + 1) / 2))`.
    pub fn descent_bound(&self) -> BigInt {
        let t: BigInt = &self.a * (&self.unit.x + 1) / 2;
        t.sqrt()
    }

    pub fn is_solution(&self, s: &QuadInt) -> bool {
        s.norm(self.d) == self.a
    }

    /// Solutions with `0 < x0 <= sqrt(a (u + 1) / 2)` and `y0 >= 0`.
    pub fn base_solutions(&self) -> Vec<QuadInt> {
        let bound = self.descent_bound();
        let mut out = Vec::new();
        let mut x = BigInt::one();
        while x <= bound {
            let t = &x * &x - &self.a;
            if !t.is_negative() && t.is_multiple_of(&BigInt::from(self.d)) {
                if let Some(y) = exact_sqrt(&(t / self.d)) {
                    out.push(QuadInt { x: x.clone(), y });
                }
            }
            x += 1;
        }
        out
    }

    /// Writes a solution with `x > 0` as `unit^n (x0 + y0 sqrt(d))` with
    /// `0 < x0 <= bound`, by repeatedly multiplying with the inverse unit.
    pub fn descend(&self, s: &QuadInt) -> Result<Descent, PellError> {
        if !self.is_solution(s) || !s.x.is_positive() {
            return Err(PellError::NotASolution(s.x.to_string(), s.y.to_string()));
        }
        let bound = self.descent_bound();
        let inv = self.unit.conj();
        let mut cur = s.clone();
        let mut n = 0i64;
        while cur.x > bound {
            cur = inv.mul(&cur, self.d);
            n += 1;
        }
        Ok(Descent { n, base: cur })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descent {
    pub n: i64,
    /// May have negative `y`; its absolute value is a base solution.
    pub base: QuadInt,
}

/// Outcome of checking descent against every solution found by direct
/// search with `x <= limit`.
#[derive(Clone, Debug, Serialize)]
pub struct DescentOracle {
    pub limit: u64,
    pub solutions: usize,
    /// Solutions not of the form `unit^n (x0 ± y0 sqrt(d))` with `(x0, y0)`
    /// a base solution.
    pub unexplained: Vec<(String, String)>,
    /// Positive solutions that need the conjugate of a base solution.
    pub via_conjugate: Vec<(String, String)>,
}

/// Enumerates all `x <= limit` with `y >= 0` and reduces each by descent.
pub fn descent_oracle(p: &PellProblem, limit: u64) -> DescentOracle {
    let base = p.base_solutions();
    let d = BigInt::from(p.d);
    let mut solutions = 0;
    let mut unexplained = Vec::new();
    let mut via_conjugate = Vec::new();
    for x in 1..=limit {
        let x = BigInt::from(x);
        let t = &x * &x - &p.a;
        if t.is_negative() || !t.is_multiple_of(&d) {
            continue;
        }
        let Some(y) = exact_sqrt(&(t / &d)) else { continue };
        solutions += 1;
        let s = QuadInt { x, y };
        let ok = p.descend(&s).ok().and_then(|dsc| {
            let abs = QuadInt { x: dsc.base.x.clone(), y: dsc.base.y.abs() };
            let rebuilt = p.unit.unit_pow(dsc.n, p.d).mul(&dsc.base, p.d);
            (base.contains(&abs) && rebuilt == s).then_some(dsc.base.y.is_negative())
        });
        match ok {
            None => unexplained.push((s.x.to_string(), s.y.to_string())),
            Some(true) if s.y.is_positive() => via_conjugate.push((s.x.to_string(), s.y.to_string())),
            _ => {}
        }
    }
    DescentOracle { limit, solutions, unexplained, via_conjugate }
}

/// `sqrt((17q-1)(q-1))` when it is an integer.
pub fn is_r_integer(q: &BigInt) -> Result<Option<BigInt>, PellError> {
    if q.is_odd() || *q < BigInt::from(4) {
        return Err(PellError::InvalidQ);
    }
    Ok(exact_sqrt(&((q * 17 - 1) * (q - 1))))
}

/// `r` for a machine-size `q`, when `q` is valid and `r` is an integer.
pub fn integral_r(q: i64) -> Option<BigInt> {
    is_r_integer(&BigInt::from(q)).ok().flatten()
}

/// `(2177 + 528 sqrt(17))^n (433 + 105 sqrt(17))`.
pub fn sequence_element(n: i64) -> QuadInt {
    QuadInt::new(2177, 528).unit_pow(n, 17).mul(&QuadInt::new(433, 105), 17)
}

/// `q = (tr(sequence_element(n)) + 18) / 34` for each `n`, in order of `n`.
pub fn integral_r_q_values_ordered(lo: i64, hi: i64) -> Vec<BigInt> {
    (lo..=hi)
        .filter_map(|n| {
            let t: BigInt = sequence_element(n).trace() + 18;
            t.is_multiple_of(&BigInt::from(34)).then(|| t / 34)
        })
        .collect()
}

/// Sorted even `q >= 4` from `n` in `[lo, hi]`.
pub fn integral_r_q_values(lo: i64, hi: i64) -> Vec<BigInt> {
    let mut v: Vec<BigInt> =
        integral_r_q_values_ordered(lo, hi).into_iter().filter(|q| q.is_even() && *q >= BigInt::from(4)).collect();
    v.sort();
    v.dedup();
    v
}

/// Checks of the unit and congruence facts behind the sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PellChecks {
    pub unit_norm: bool,
    pub unit_square: bool,
    pub unit_times_base: bool,
    pub base_norm: bool,
    /// `x = 17q - 9` satisfies `x^2 - 17 r^2 = 64` identically in `q`.
    pub norm_identity: bool,
    /// Rational parts of the three orbits are `8(-1)^n`, `9(-1)^n`,
    /// `8(-1)^(n+1)` modulo 34.
    pub orbit_congruences: bool,
    /// Every listed `q` has `17q - 9 ≡ -9 (mod 34)` and integral `r`.
    pub outputs_consistent: bool,
}

impl PellChecks {
    pub fn all(&self) -> bool {
        self.unit_norm
            && self.unit_square
            && self.unit_times_base
            && self.base_norm
            && self.norm_identity
            && self.orbit_congruences
            && self.outputs_consistent
    }
}

pub fn pell_checks(lo: i64, hi: i64) -> PellChecks {
    let d = 17;
    let unit = QuadInt::new(33, 8);
    let unit_norm = unit.norm(d).is_one();
    let unit_square = unit.unit_pow(2, d) == QuadInt::new(2177, 528);
    let unit_times_base = unit.mul(&QuadInt::new(9, 1), d) == QuadInt::new(433, 105);
    let base_norm = QuadInt::new(433, 105).norm(d) == BigInt::from(64);
    let qp = Poly::x();
    let x = qp.scale(&int(17)).sub(&Poly::constant(int(9)));
    let r2 = qp.scale(&int(17)).sub(&Poly::constant(int(1))).mul(&qp.sub(&Poly::constant(int(1))));
    let norm_identity = x.mul(&x).sub(&r2.scale(&int(17))) == Poly::constant(int(64));
    let m34 = BigInt::from(34);
    let orbit_congruences = (-10..=10).all(|n: i64| {
        let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
        let u = unit.unit_pow(n, d);
        let check = |b: QuadInt, r: i64| u.mul(&b, d).x.mod_floor(&m34) == BigInt::from(r).mod_floor(&m34);
        check(QuadInt::new(8, 0), 8 * sign) && check(QuadInt::new(9, 1), 9 * sign) && check(QuadInt::new(26, 6), -8 * sign)
    });
    let outputs_consistent = integral_r_q_values(lo, hi).iter().all(|q| {
        let xq: BigInt = q * 17 - 9;
        xq.mod_floor(&m34) == BigInt::from(-9).mod_floor(&m34) && matches!(is_r_integer(q), Ok(Some(_)))
    });
    PellChecks { unit_norm, unit_square, unit_times_base, base_norm, norm_identity, orbit_congruences, outputs_consistent }
}

/// Whether `a_01^2 - 4` fails to be a rational square at a `q` with
/// integral `r`, so that `w_1` is genuinely quadratic. Exploratory.
pub fn w1_is_quadratic(q: &BigInt) -> Option<bool> {
    let r = is_r_integer(q).ok()??;
    let one = BigInt::one();
    let two = BigInt::from(2);
    let num: BigInt = (q + &two) * r - (q - &one) * (q - &two);
    let den: BigInt = q * (q + &one) * &two;
    // a01^2 - 4 = (num^2 - 4 den^2) / den^2
    let t = &num * &num - &den * &den * 4;
    Some(exact_sqrt(&t).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_solutions_of_seventeen() {
        let p = PellProblem::seventeen();
        assert_eq!(p.base_solutions(), vec![QuadInt::new(8, 0), QuadInt::new(9, 1), QuadInt::new(26, 6)]);
        let trivial = PellProblem::new(17, 1, 33, 8).unwrap();
        assert_eq!(trivial.base_solutions(), vec![QuadInt::new(1, 0)]);
    }

    #[test]
    fn invalid_problems() {
        assert_eq!(PellProblem::new(18, 64, 17, 4), Err(PellError::NotSquareFree(18)));
        assert!(matches!(PellProblem::new(17, 64, 33, 7), Err(PellError::NotAUnit(..))));
    }

    #[test]
    fn descent_rebuilds_solution() {
        let p = PellProblem::seventeen();
        let s = QuadInt::new(433, 105).mul(&QuadInt::new(2177, 528), 17);
        let dsc = p.descend(&s).unwrap();
        assert_eq!(dsc.base, QuadInt::new(9, 1));
        assert_eq!(dsc.n, 3);
    }

    #[test]
    fn conjugate_orbit_member() {
        let p = PellProblem::seventeen();
        let dsc = p.descend(&QuadInt::new(161, 39)).unwrap();
        assert_eq!(dsc.base, QuadInt::new(9, -1));
    }

    #[test]
    fn r_integer_examples() {
        assert_eq!(is_r_integer(&BigInt::from(10)).unwrap(), Some(BigInt::from(39)));
        assert_eq!(is_r_integer(&BigInt::from(4)).unwrap(), None);
        assert!(is_r_integer(&BigInt::from(26)).unwrap().is_some());
        assert_eq!(is_r_integer(&BigInt::from(5)), Err(PellError::InvalidQ));
    }

    #[test]
    fn sequence_values() {
        let v: Vec<BigInt> = integral_r_q_values_ordered(-2, 2);
        let expected: Vec<BigInt> = [41210i64, 10, 26, 110890, 482812730].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(v, expected);
    }
}
