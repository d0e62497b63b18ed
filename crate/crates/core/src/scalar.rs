//! Value rings for the dynamic programs.
//!
//! Everything above this module is written against [`Ring`] (for the subset
//! transforms) or [`PathAlgebra`] (for the engines), so the same recurrences
//! count cycles over machine or arbitrary-precision integers and, with
//! [`CostPolynomials`](crate::poly::CostPolynomials), build cost histograms.

use std::fmt::Debug;
use std::marker::PhantomData;
use std::ops::{AddAssign, Sub, SubAssign};

use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Weight;

/// Commutative ring with unit, as used by subset-function tables.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Sub<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Sub<Output = Self>
        + for<'a> AddAssign<&'a Self>
        + for<'a> SubAssign<&'a Self>
{
}

/// Integer-like scalars the counting algebras accept.
pub trait Scalar: Ring + Integer + Signed + FromPrimitive {}

impl<T> Scalar for T where T: Ring + Integer + Signed + FromPrimitive {}

/// The ring a path-system recurrence is evaluated in, plus the factor a
/// directly used graph edge contributes.
pub trait PathAlgebra {
    type Value: Ring;

    /// Factor for one graph edge of the given cost used directly in a path.
    /// Must satisfy `edge(a) * edge(b) == edge(a + b)` and `edge(0) == 1`.
    fn edge(&self, cost: Weight) -> Self::Value;

    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    /// Multiply by a small signed integer.
    fn scale(&self, a: &Self::Value, k: i64) -> Self::Value;

    /// Exact division by two; `None` if some coefficient is odd.
    fn halve(&self, a: &Self::Value) -> Option<Self::Value>;

    fn is_nonnegative(&self, a: &Self::Value) -> bool;

    /// Number of scalar coefficients held by one value.
    fn value_width(&self) -> usize {
        1
    }
}

/// Root read-out of an anchored run: `raw` counts `s1`–`s2` path systems,
/// each cycle twice; `cycles` is `raw / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootValue<V> {
    pub raw: V,
    pub cycles: V,
}

pub(crate) fn calibrate<A: PathAlgebra>(alg: &A, raw: A::Value) -> Result<RootValue<A::Value>> {
    if !alg.is_nonnegative(&raw) {
        return Err(Error::Defect(format!("negative root value {raw:?}")));
    }
    let cycles = alg.halve(&raw).ok_or_else(|| Error::Defect(format!("odd root value {raw:?}")))?;
    Ok(RootValue { raw, cycles })
}

/// Plain counting: every edge contributes 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct Counting<T>(PhantomData<T>);

impl<T> Counting<T> {
    pub fn new() -> Self {
        Counting(PhantomData)
    }
}

impl<T: Scalar> PathAlgebra for Counting<T> {
    type Value = T;

    fn edge(&self, _cost: Weight) -> T {
        T::one()
    }

    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }

    fn scale(&self, a: &T, k: i64) -> T {
        a.clone() * T::from_i64(k).expect("small multiplier fits the scalar")
    }

    fn halve(&self, a: &T) -> Option<T> {
        let two = T::one() + T::one();
        let (q, r) = a.div_rem(&two);
        r.is_zero().then_some(q)
    }

    fn is_nonnegative(&self, a: &T) -> bool {
        !a.is_negative()
    }
}
