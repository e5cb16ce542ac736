//! Exact arithmetic: rationals, quadratic towers over `Q`, rational
//! functions in `q` extended by `r = sqrt((17q-1)(q-1))`, complex
//! embeddings with certified error bounds, and generic linear algebra.

pub mod embed;
pub mod json;
pub mod linalg;
pub mod modp;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod tower;

use thiserror::Error;

pub use embed::{complex_embed, compare_real, is_real, sign_real, ComplexBall, Embedding};
pub use poly::Poly;
pub use ratfunc::{RatFunc, RatFuncQ};
pub use rational::{int, rat, Rational};
pub use tower::{
    adjoin_rational_sqrt, adjoin_root, adjoin_sqrt, sqrt_in_field, trace_conj, Tower, TowerDescriptor,
    TowerElement,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("minimal polynomial is reducible over the base field")]
    Reducible,
    #[error("elements live in incompatible towers")]
    IncompatibleTowers,
    #[error("division by zero")]
    DivisionByZero,
    #[error("level {level} out of range for tower of depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("expected {expected} coefficients, found {found}")]
    CoefficientLength { expected: usize, found: usize },
    #[error("element does not lie in the requested subfield")]
    NotInSubfield,
    #[error("precision limit reached before the answer was certified")]
    PrecisionExhausted,
    #[error("realness undecided for towers with a non-real intermediate level")]
    RealnessUndecided,
    #[error("specialization hits a pole")]
    Pole,
    #[error("malformed serialized element: {0}")]
    Malformed(String),
}

/// Minimal field interface shared by the exact coefficient types, used by
/// the generic linear algebra routines.
pub trait FieldElem: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn try_inv(&self) -> Option<Self>;
}

impl FieldElem for Rational {
    fn zero_like(&self) -> Self {
        num_traits::Zero::zero()
    }
    fn one_like(&self) -> Self {
        num_traits::One::one()
    }
    fn is_zero_elem(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero_elem() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl FieldElem for TowerElement {
    fn zero_like(&self) -> Self {
        TowerElement::zero(self.tower())
    }
    fn one_like(&self) -> Self {
        TowerElement::one(self.tower())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

impl FieldElem for RatFuncQ {
    fn zero_like(&self) -> Self {
        RatFuncQ::zero()
    }
    fn one_like(&self) -> Self {
        RatFuncQ::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}
