//! Complex embeddings of tower elements with rigorous error balls.
//!
//! Centers and radii are exact rationals kept at dyadic working precision,
//! so every ball provably contains the true value of the embedded element.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{floor, Rational};
use super::tower::{Level, Tower, TowerElement};
use super::FieldError;

/// Closed disc `{ z : |z - (re + i im)| <= rad }`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBall {
    pub re: Rational,
    pub im: Rational,
    pub rad: Rational,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Rounds to the nearest multiple of `2^-bits`; error at most `2^-(bits+1)`.
fn round_dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = Rational::from_integer(pow2(bits));
    let half = Rational::new(1.into(), 2.into());
    Rational::new(floor(&(x * &scale + half)), pow2(bits))
}

fn ulp(bits: u32) -> Rational {
    Rational::new(1.into(), pow2(bits))
}

/// Rational approximation of `sqrt(x)` for `x >= 0`, within about `2^-bits`.
fn sqrt_approx(x: &Rational, bits: u32) -> Rational {
    if !x.is_positive() {
        return Rational::zero();
    }
    let scaled = floor(&(x * Rational::from_integer(pow2(2 * bits))));
    Rational::new(scaled.sqrt(), pow2(bits))
}

/// Lower bound for `sqrt(x)`, `x >= 0`.
fn sqrt_lower(x: &Rational, bits: u32) -> Rational {
    sqrt_approx(x, bits)
}

/// Upper bound for `sqrt(x)`, `x >= 0`.
fn sqrt_upper(x: &Rational, bits: u32) -> Rational {
    sqrt_approx(x, bits) + ulp(bits)
}

impl ComplexBall {
    pub fn exact(re: Rational, im: Rational) -> Self {
        ComplexBall { re, im, rad: Rational::zero() }
    }

    pub fn from_rational(x: &Rational) -> Self {
        ComplexBall::exact(x.clone(), Rational::zero())
    }

    /// Upper bound on `|center|`.
    fn center_abs_upper(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }

    /// Squared modulus of the center.
    fn center_norm2(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn rounded(re: Rational, im: Rational, rad: Rational, bits: u32) -> Self {
        let r2 = round_dyadic(&re, bits);
        let i2 = round_dyadic(&im, bits);
        let err = (&re - &r2).abs() + (&im - &i2).abs();
        ComplexBall { re: r2, im: i2, rad: rad + err }
    }

    pub fn add(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall { re: &self.re + &o.re, im: &self.im + &o.im, rad: &self.rad + &o.rad }
    }

    pub fn sub(&self, o: &ComplexBall) -> ComplexBall {
        ComplexBall { re: &self.re - &o.re, im: &self.im - &o.im, rad: &self.rad + &o.rad }
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall { re: -&self.re, im: -&self.im, rad: self.rad.clone() }
    }

    pub fn scale(&self, c: &Rational) -> ComplexBall {
        ComplexBall { re: &self.re * c, im: &self.im * c, rad: &self.rad * c.abs() }
    }

    pub fn mul(&self, o: &ComplexBall, bits: u32) -> ComplexBall {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let rad = self.center_abs_upper() * &o.rad + o.center_abs_upper() * &self.rad + &self.rad * &o.rad;
        ComplexBall::rounded(re, im, rad, bits)
    }

    /// Enclosure of `1/z`; `None` when the ball may contain zero.
    pub fn inv(&self, bits: u32) -> Option<ComplexBall> {
        let n2 = self.center_norm2();
        if n2.is_zero() {
            return None;
        }
        let lower = sqrt_lower(&n2, bits + 8);
        if lower <= self.rad {
            return None;
        }
        let re = &self.re / &n2;
        let im = -&self.im / &n2;
        let rad = if self.rad.is_zero() {
            Rational::zero()
        } else {
            &self.rad / (&lower * (&lower - &self.rad))
        };
        Some(ComplexBall::rounded(re, im, rad, bits))
    }

    /// Enclosure of the principal square root of the value inside the ball
    /// (branch cut along the negative real axis, `sqrt(-x) = +i sqrt(x)`).
    pub fn sqrt(&self, bits: u32) -> ComplexBall {
        let n2 = self.center_norm2();
        if n2.is_zero() {
            return ComplexBall { re: Rational::zero(), im: Rational::zero(), rad: sqrt_upper(&self.rad, bits) };
        }
        let wb = bits + 8;
        let modulus = sqrt_approx(&n2, wb);
        let half = Rational::new(1.into(), 2.into());
        let x = sqrt_approx(&((&modulus + &self.re) * &half), wb);
        let mut y = sqrt_approx(&((&modulus - &self.re) * &half), wb);
        if self.im.is_negative() {
            y = -y;
        }
        let x = round_dyadic(&x, bits);
        let y = round_dyadic(&y, bits);
        // residual |s~^2 - c| plus the input radius bounds |s~^2 - z| for every z in the ball
        let dre = &x * &x - &y * &y - &self.re;
        let dim = Rational::from_integer(2.into()) * &x * &y - &self.im;
        let big_r = dre.abs() + dim.abs() + &self.rad;
        let root_r = sqrt_upper(&big_r, wb);
        let s_abs_lower = sqrt_lower(&(&x * &x + &y * &y), wb);
        let denom = Rational::from_integer(2.into()) * s_abs_lower - &root_r;
        let rad = if big_r.is_zero() {
            Rational::zero()
        } else if denom.is_positive() {
            (&big_r / denom).min(root_r)
        } else {
            root_r
        };
        ComplexBall { re: x, im: y, rad }
    }

    pub fn contains_zero(&self) -> bool {
        let n2 = self.center_norm2();
        n2 <= &self.rad * &self.rad
    }

    /// Lower and upper bounds on `|z|` over the ball.
    pub fn modulus_bounds(&self, bits: u32) -> (Rational, Rational) {
        let n2 = self.center_norm2();
        let lo = sqrt_lower(&n2, bits) - &self.rad;
        let hi = sqrt_upper(&n2, bits) + &self.rad;
        (lo.max(Rational::zero()), hi)
    }

    /// Whether `[lo, hi]` of the real parts lies strictly on one side of 0.
    pub fn real_sign(&self) -> Option<Ordering> {
        if &self.re - &self.rad > Rational::zero() {
            Some(Ordering::Greater)
        } else if &self.re + &self.rad < Rational::zero() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    pub fn imag_sign(&self) -> Option<Ordering> {
        if &self.im - &self.rad > Rational::zero() {
            Some(Ordering::Greater)
        } else if &self.im + &self.rad < Rational::zero() {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Whether two balls are certainly disjoint.
    pub fn disjoint(&self, o: &ComplexBall) -> bool {
        let dr = &self.re - &o.re;
        let di = &self.im - &o.im;
        let r = &self.rad + &o.rad;
        dr.abs() > r || di.abs() > r
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64().unwrap_or(f64::NAN)
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64().unwrap_or(f64::NAN)
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Decimal string `re + im*i` rounded to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = decimal(&self.re, digits);
        let im = decimal(&self.im.abs(), digits);
        let sign = if self.im.is_negative() { "-" } else { "+" };
        format!("{re} {sign} {im}*i")
    }
}

/// Fixed-point decimal rendering of a rational.
pub fn decimal(x: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let half = Rational::new(1.into(), 2.into());
    let scaled = floor(&(x.abs() * Rational::from_integer(scale.clone()) + half));
    let int_part = &scaled / &scale;
    let frac = (&scaled % &scale).to_string();
    let sign = if x.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

/// A complex embedding of a tower, fixed by choosing the root of every
/// level's minimal polynomial. Sign `+1` picks `(p + sqrt(D))/2` with the
/// principal square root; `-1` picks the other root.
#[derive(Clone, Debug)]
pub struct Embedding {
    tower: Tower,
    signs: Vec<i8>,
    bits: u32,
    gens: Vec<ComplexBall>,
}

fn embed_raw(levels: &[Level], gens: &[ComplexBall], x: &[Rational], bits: u32) -> ComplexBall {
    let k = levels.len();
    if k == 0 {
        return ComplexBall::from_rational(&x[0]);
    }
    let h = 1 << (k - 1);
    let (a, b) = x.split_at(h);
    let ea = embed_raw(&levels[..k - 1], gens, a, bits);
    if b.iter().all(Zero::is_zero) {
        return ea;
    }
    let eb = embed_raw(&levels[..k - 1], gens, b, bits);
    ea.add(&eb.mul(&gens[k - 1], bits))
}

impl Embedding {
    /// The principal embedding (all signs `+1`).
    pub fn principal(tower: &Tower, bits: u32) -> Self {
        Self::new(tower, &vec![1; tower.depth()], bits).expect("sign vector has tower depth")
    }

    pub fn new(tower: &Tower, signs: &[i8], bits: u32) -> Result<Self, FieldError> {
        if signs.len() != tower.depth() {
            return Err(FieldError::LevelOutOfRange { level: signs.len(), depth: tower.depth() });
        }
        let levels = tower.levels();
        let mut gens: Vec<ComplexBall> = Vec::new();
        let half = Rational::new(1.into(), 2.into());
        for (i, lvl) in levels.iter().enumerate() {
            let inner = bits + 16;
            let p = embed_raw(&levels[..i], &gens, lvl.p_coeffs(), inner);
            let s = embed_raw(&levels[..i], &gens, lvl.s_coeffs(), inner);
            let disc = p.mul(&p, inner).add(&s.scale(&Rational::from_integer(4.into())));
            let mut root = disc.sqrt(inner);
            if signs[i] < 0 {
                root = root.neg();
            }
            gens.push(p.add(&root).scale(&half));
        }
        Ok(Embedding { tower: tower.clone(), signs: signs.to_vec(), bits, gens })
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn embed(&self, x: &TowerElement) -> Result<ComplexBall, FieldError> {
        let x = x.lift(&self.tower)?;
        Ok(embed_raw(self.tower.levels(), &self.gens, x.coeffs(), self.bits))
    }
}

/// Embeds `x` with radius at most `10^-digits`, raising precision as needed.
pub fn complex_embed(x: &TowerElement, signs: &[i8], digits: u32) -> Result<ComplexBall, FieldError> {
    let target = Rational::new(1.into(), BigInt::from(10).pow(digits));
    let mut bits = (digits as f64 * 3.33) as u32 + 32;
    loop {
        let e = Embedding::new(x.tower(), signs, bits)?;
        let b = e.embed(x)?;
        if b.rad <= target {
            return Ok(b);
        }
        if bits > 1 << 16 {
            return Err(FieldError::PrecisionExhausted);
        }
        bits *= 2;
    }
}

/// Exact sign of the real part of `x` under the embedding with `signs`.
/// Zero is detected exactly; otherwise precision is raised until the ball
/// separates from zero.
pub fn sign_real(x: &TowerElement, signs: &[i8]) -> Result<Ordering, FieldError> {
    real_part_sign(x, signs)
}

fn real_part_sign(x: &TowerElement, signs: &[i8]) -> Result<Ordering, FieldError> {
    if x.is_zero() {
        return Ok(Ordering::Equal);
    }
    let mut bits = 64;
    loop {
        let e = Embedding::new(x.tower(), signs, bits)?;
        let b = e.embed(x)?;
        if let Some(s) = b.real_sign() {
            return Ok(s);
        }
        if bits > 1 << 16 {
            return Err(FieldError::PrecisionExhausted);
        }
        bits *= 2;
    }
}

/// Compares two elements that are real under the embedding.
pub fn compare_real(a: &TowerElement, b: &TowerElement, signs: &[i8]) -> Result<Ordering, FieldError> {
    let d = a.try_sub(b)?;
    let signs = &signs[..d.tower().depth().min(signs.len())];
    real_part_sign(&d, signs)
}

/// Whether every level of the tower is real under the embedding, so that the
/// whole tower embeds into the reals.
pub fn tower_is_real(tower: &Tower, signs: &[i8]) -> Result<bool, FieldError> {
    for i in 0..tower.depth() {
        let d = tower.level_discriminant(i);
        if real_part_sign(&d, &signs[..i])? != Ordering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `x` is real under the embedding with `signs`.
///
/// A level with positive discriminant over a real base stays real. A level
/// with negative discriminant over a real base adds a purely imaginary
/// direction, so `a + b t` is real only when `b = 0` and `a` is real. Towers
/// with a non-real level below the top one are not handled.
pub fn is_real(x: &TowerElement, signs: &[i8]) -> Result<bool, FieldError> {
    let x = x.reduce();
    let k = x.tower().depth();
    if k == 0 {
        return Ok(true);
    }
    let signs = &signs[..k];
    if tower_is_real(x.tower(), signs)? {
        return Ok(true);
    }
    let base_real = tower_is_real(&x.tower().prefix(k - 1), &signs[..k - 1])?;
    let (a, b) = x.split().expect("positive depth");
    if base_real {
        // top level is imaginary over a real base
        if !b.is_zero() {
            return Ok(false);
        }
        return is_real(&a, &signs[..k - 1]);
    }
    Err(FieldError::RealnessUndecided)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{int, rat};
    use crate::exactfield::tower::{adjoin_rational_sqrt, adjoin_root, TowerDescriptor};

    #[test]
    fn sqrt2_digits() {
        let (t, s) = adjoin_rational_sqrt(&int(2)).unwrap();
        let b = complex_embed(&s, &[1], 30).unwrap();
        assert!(decimal(&b.re, 25).starts_with("1.4142135623730950488016887"));
        let b = complex_embed(&s, &[-1], 30).unwrap();
        assert!(b.re < Rational::zero());
        let _ = t;
    }

    #[test]
    fn imaginary_root_is_principal() {
        let (_, s) = adjoin_rational_sqrt(&int(-15)).unwrap();
        let b = complex_embed(&s, &[1], 20).unwrap();
        assert!(b.im > Rational::zero());
        assert!(b.re.abs() <= b.rad);
    }

    #[test]
    fn exact_signs() {
        let (t, s) = adjoin_rational_sqrt(&int(17)).unwrap();
        // 4 - sqrt(17) < 0, 33 - 8 sqrt(17) > 0 (since 33^2 = 1089 > 1088)
        let x = &TowerElement::from_int(&t, 4) - &s;
        assert_eq!(sign_real(&x, &[1]).unwrap(), Ordering::Less);
        let y = &TowerElement::from_int(&t, 33) - &s.scale(&int(8));
        assert_eq!(sign_real(&y, &[1]).unwrap(), Ordering::Greater);
        assert_eq!(sign_real(&TowerElement::zero(&t), &[1]).unwrap(), Ordering::Equal);
    }

    #[test]
    fn unit_circle_root_realness() {
        // w^2 - a w + 1 with a = -7/4 has |w| = 1 and is non-real
        let q = TowerDescriptor::rational();
        let t = adjoin_root(&q, &TowerElement::from_rational(&q, rat(-7, 4)), &TowerElement::from_int(&q, -1))
            .unwrap();
        let w = TowerElement::generator(&t, 0);
        assert!(!is_real(&w, &[1]).unwrap());
        let sum = &w + &w.inv().unwrap();
        assert!(is_real(&sum, &[1]).unwrap());
        let b = complex_embed(&w, &[1], 20).unwrap();
        let (lo, hi) = b.modulus_bounds(80);
        assert!(lo <= int(1) && int(1) <= hi);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&rat(-1, 3), 4), "-0.3333");
        assert_eq!(decimal(&rat(5, 2), 0), "3");
        assert_eq!(decimal(&rat(1, 200), 2), "0.01");
    }
}
