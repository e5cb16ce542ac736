//! Rational functions in `q` and the quadratic extension `Q(q)(r)` with
//! `r^2 = (17q - 1)(q - 1)`.

use std::fmt;

use num_traits::{One, Zero};

use super::poly::{poly_to_string, Poly};
use super::rational::Rational;
use super::tower::TowerElement;
use super::FieldError;

/// Reduced fraction `num/den` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.divrem(&g);
        let (mut d, _) = den.divrem(&g);
        let l = d.leading();
        n = n.scale(&l.recip());
        d = d.scale(&l.recip());
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The variable `q`.
    pub fn q() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, o: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&o.inv()?))
    }

    /// Value at `q = q0`; `None` at a pole.
    pub fn eval(&self, q0: &Rational) -> Option<Rational> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(q0) / d)
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = poly_to_string(&self.num, "q");
        if self.den.degree() == Some(0) {
            write!(f, "{n}")
        } else {
            write!(f, "({n})/({})", poly_to_string(&self.den, "q"))
        }
    }
}

/// The radicand `(17q - 1)(q - 1) = 17q^2 - 18q + 1`.
pub fn r_squared() -> Poly {
    Poly::from_ints(&[1, -18, 17])
}

/// Element `a + b r` of `Q(q)(r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFuncQ {
    a: RatFunc,
    b: RatFunc,
}

impl RatFuncQ {
    pub fn new(a: RatFunc, b: RatFunc) -> Self {
        RatFuncQ { a, b }
    }

    pub fn from_ratfunc(a: RatFunc) -> Self {
        RatFuncQ { a, b: RatFunc::zero() }
    }

    pub fn zero() -> Self {
        RatFuncQ::from_ratfunc(RatFunc::zero())
    }

    pub fn one() -> Self {
        RatFuncQ::from_ratfunc(RatFunc::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFuncQ::from_ratfunc(RatFunc::constant(c))
    }

    pub fn q() -> Self {
        RatFuncQ::from_ratfunc(RatFunc::q())
    }

    pub fn r() -> Self {
        RatFuncQ { a: RatFunc::zero(), b: RatFunc::one() }
    }

    pub fn a(&self) -> &RatFunc {
        &self.a
    }

    pub fn b(&self) -> &RatFunc {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &RatFuncQ) -> RatFuncQ {
        RatFuncQ { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &RatFuncQ) -> RatFuncQ {
        RatFuncQ { a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn neg(&self) -> RatFuncQ {
        RatFuncQ { a: self.a.neg(), b: self.b.neg() }
    }

    pub fn scale(&self, c: &Rational) -> RatFuncQ {
        RatFuncQ { a: self.a.scale(c), b: self.b.scale(c) }
    }

    pub fn mul(&self, o: &RatFuncQ) -> RatFuncQ {
        let rr = RatFunc::from_poly(r_squared());
        let a = self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(&rr));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        RatFuncQ { a, b }
    }

    /// Conjugate `a - b r`.
    pub fn conj(&self) -> RatFuncQ {
        RatFuncQ { a: self.a.clone(), b: self.b.neg() }
    }

    /// Norm `a^2 - b^2 (17q - 1)(q - 1)` down to `Q(q)`.
    pub fn norm(&self) -> RatFunc {
        let rr = RatFunc::from_poly(r_squared());
        self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&rr))
    }

    pub fn inv(&self) -> Option<RatFuncQ> {
        let n = self.norm().inv()?;
        let c = self.conj();
        Some(RatFuncQ { a: c.a.mul(&n), b: c.b.mul(&n) })
    }

    pub fn div(&self, o: &RatFuncQ) -> Option<RatFuncQ> {
        Some(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFuncQ {
        let mut acc = RatFuncQ::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at `q = q0`, with `r` replaced by `r_value` (an element whose
    /// square is `(17 q0 - 1)(q0 - 1)`).
    pub fn specialize(&self, q0: &Rational, r_value: &TowerElement) -> Result<TowerElement, FieldError> {
        let a = self.a.eval(q0).ok_or(FieldError::Pole)?;
        let b = self.b.eval(q0).ok_or(FieldError::Pole)?;
        let t = r_value.tower();
        Ok(&TowerElement::from_rational(t, a) + &r_value.scale(&b))
    }

    /// Specialization when `r` itself is the rational `r0`.
    pub fn eval_rational(&self, q0: &Rational, r0: &Rational) -> Option<Rational> {
        Some(self.a.eval(q0)? + self.b.eval(q0)? * r0)
    }
}

impl fmt::Display for RatFuncQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "({})*r", self.b),
            (false, false) => write!(f, "{} + ({})*r", self.a, self.b),
        }
    }
}

impl From<Rational> for RatFuncQ {
    fn from(c: Rational) -> Self {
        RatFuncQ::constant(c)
    }
}

impl RatFunc {
    pub fn is_one(&self) -> bool {
        self.num.degree() == Some(0) && self.den.degree() == Some(0) && self.num.leading().is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::int;
    use crate::exactfield::tower::adjoin_rational_sqrt;

    #[test]
    fn reduction() {
        let f = RatFunc::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[-2, 2]));
        assert_eq!(f.num(), &Poly::new(vec![Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into())]));
        assert_eq!(f.den(), &Poly::one());
    }

    #[test]
    fn r_squares_to_radicand() {
        let r = RatFuncQ::r();
        assert_eq!(r.mul(&r), RatFuncQ::from_ratfunc(RatFunc::from_poly(r_squared())));
    }

    #[test]
    fn inverse() {
        let x = RatFuncQ::q().add(&RatFuncQ::r()).add(&RatFuncQ::constant(int(3)));
        let y = x.inv().unwrap();
        assert_eq!(x.mul(&y), RatFuncQ::one());
    }

    #[test]
    fn specialization_at_four() {
        // r^2 = 67 * 3 = 201 at q = 4
        let (_, root) = adjoin_rational_sqrt(&int(201)).unwrap();
        let x = RatFuncQ::r().mul(&RatFuncQ::r());
        assert_eq!(x.specialize(&int(4), &root).unwrap().as_rational(), Some(int(201)));
        assert_eq!(RatFuncQ::q().inv().unwrap().specialize(&int(0), &root), Err(FieldError::Pole));
    }
}
