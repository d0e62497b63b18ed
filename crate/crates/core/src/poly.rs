//! Cost polynomials `Σ a_c y^c`, where `a_c` counts solutions of total cost
//! `c`, and the path algebra that runs the engines over them.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::decomposition::NiceTreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{PathAlgebra, Scalar};
use crate::zeta::{self, EngineOptions, EngineStats};
use crate::{Count, SignedCount, Weight};

/// Coefficients by degree. Trailing zeros are insignificant: values of
/// different lengths compare equal if they agree as polynomials.
#[derive(Clone, Default)]
pub struct CostPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Zero + Clone> CostPolynomial<T> {
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        CostPolynomial { coeffs }
    }

    /// `y^degree`, padded with zeros to `len` coefficients if longer.
    pub fn monomial(degree: usize, len: usize) -> Self
    where
        T: One,
    {
        let mut coeffs = vec![T::zero(); len.max(degree + 1)];
        coeffs[degree] = T::one();
        CostPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: usize) -> T {
        self.coeffs.get(degree).cloned().unwrap_or_else(T::zero)
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Value at `y = 1`.
    pub fn sum(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.clone())
    }

    /// Pad or cut to exactly `len` coefficients.
    pub fn resized(&self, len: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, T::zero());
        CostPolynomial { coeffs }
    }

    fn trimmed_len(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1)
    }
}

impl<T: Zero + Clone + PartialEq> PartialEq for CostPolynomial<T> {
    fn eq(&self, other: &Self) -> bool {
        let n = self.trimmed_len();
        n == other.trimmed_len() && self.coeffs[..n] == other.coeffs[..n]
    }
}

impl<T: fmt::Debug> fmt::Debug for CostPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl<T: Serialize> Serialize for CostPolynomial<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<T: Zero + Clone + for<'a> AddAssign<&'a T>> Zero for CostPolynomial<T> {
    fn zero() -> Self {
        CostPolynomial { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl<T> One for CostPolynomial<T>
where
    T: Zero + One + Clone + PartialEq + for<'a> AddAssign<&'a T>,
{
    fn one() -> Self {
        CostPolynomial { coeffs: vec![T::one()] }
    }
}

impl<'a, T: Zero + Clone + AddAssign<&'a T>> AddAssign<&'a CostPolynomial<T>> for CostPolynomial<T> {
    fn add_assign(&mut self, rhs: &'a CostPolynomial<T>) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), T::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl<'a, T: Zero + Clone + SubAssign<&'a T>> SubAssign<&'a CostPolynomial<T>> for CostPolynomial<T> {
    fn sub_assign(&mut self, rhs: &'a CostPolynomial<T>) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), T::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl<T> Add for CostPolynomial<T>
where
    T: Zero + Clone + for<'a> AddAssign<&'a T>,
{
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<T> Sub for CostPolynomial<T>
where
    T: Zero + Clone + for<'a> SubAssign<&'a T>,
{
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

/// Untruncated product.
impl<T> Mul for CostPolynomial<T>
where
    T: Zero + Clone + Mul<Output = T> + for<'a> AddAssign<&'a T>,
{
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        convolve(&self.coeffs, &rhs.coeffs, usize::MAX)
    }
}

/// Product keeping degrees below `limit`.
fn convolve<T>(a: &[T], b: &[T], limit: usize) -> CostPolynomial<T>
where
    T: Zero + Clone + Mul<Output = T> + for<'x> AddAssign<&'x T>,
{
    if a.is_empty() || b.is_empty() {
        return CostPolynomial::zero();
    }
    let len = (a.len() + b.len() - 1).min(limit);
    let mut coeffs = vec![T::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            coeffs[i + j] += &(x.clone() * y.clone());
        }
    }
    CostPolynomial { coeffs }
}

fn same_len<T>(p: &CostPolynomial<T>, q: &CostPolynomial<T>) -> Result<()> {
    if p.coeffs.len() == q.coeffs.len() {
        Ok(())
    } else {
        Err(Error::DegreeMismatch(p.coeffs.len(), q.coeffs.len()))
    }
}

/// Sum of two polynomials of the same degree bound (length `W + 1`).
pub fn poly_add<T: Scalar>(p: &CostPolynomial<T>, q: &CostPolynomial<T>) -> Result<CostPolynomial<T>> {
    same_len(p, q)?;
    let mut out = p.clone();
    out += q;
    Ok(out)
}

/// Product truncated at the common degree bound.
pub fn poly_mul<T: Scalar>(p: &CostPolynomial<T>, q: &CostPolynomial<T>) -> Result<CostPolynomial<T>> {
    same_len(p, q)?;
    Ok(convolve(&p.coeffs, &q.coeffs, p.coeffs.len()).resized(p.coeffs.len()))
}

/// `y^shift · p` at the same degree bound; errors if a nonzero coefficient
/// would pass it.
pub fn poly_shift<T: Scalar>(p: &CostPolynomial<T>, shift: Weight) -> Result<CostPolynomial<T>> {
    let len = p.coeffs.len();
    let bound = len.saturating_sub(1);
    let top = p.trimmed_len();
    if top > 0 && (top - 1) as u128 + shift as u128 > bound as u128 {
        return Err(Error::ShiftOverflow { shift, bound });
    }
    let s = shift as usize;
    let mut coeffs = vec![T::zero(); len];
    for (i, c) in p.coeffs[..top].iter().enumerate() {
        coeffs[i + s] = c.clone();
    }
    Ok(CostPolynomial { coeffs })
}

/// Cost polynomials truncated above degree `bound`; an edge of cost `c`
/// contributes `y^c`.
#[derive(Debug, Clone, Copy)]
pub struct CostPolynomials<T> {
    bound: Weight,
    _scalar: std::marker::PhantomData<T>,
}

impl<T> CostPolynomials<T> {
    pub fn new(bound: Weight) -> Self {
        CostPolynomials { bound, _scalar: std::marker::PhantomData }
    }

    pub fn bound(&self) -> Weight {
        self.bound
    }

    fn len(&self) -> usize {
        self.bound as usize + 1
    }
}

impl<T: Scalar> PathAlgebra for CostPolynomials<T> {
    type Value = CostPolynomial<T>;

    fn edge(&self, cost: Weight) -> CostPolynomial<T> {
        if cost > self.bound {
            CostPolynomial::zero()
        } else {
            CostPolynomial::monomial(cost as usize, 0)
        }
    }

    fn mul(&self, a: &CostPolynomial<T>, b: &CostPolynomial<T>) -> CostPolynomial<T> {
        convolve(&a.coeffs[..a.trimmed_len()], &b.coeffs[..b.trimmed_len()], self.len())
    }

    fn scale(&self, a: &CostPolynomial<T>, k: i64) -> CostPolynomial<T> {
        let k = T::from_i64(k).expect("small multiplier fits the scalar");
        CostPolynomial { coeffs: a.coeffs.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    fn halve(&self, a: &CostPolynomial<T>) -> Option<CostPolynomial<T>> {
        let two = T::one() + T::one();
        a.coeffs
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(&two);
                r.is_zero().then_some(q)
            })
            .collect::<Option<Vec<T>>>()
            .map(|coeffs| CostPolynomial { coeffs })
    }

    fn is_nonnegative(&self, a: &CostPolynomial<T>) -> bool {
        a.coeffs.iter().all(|c| !c.is_negative())
    }

    fn value_width(&self) -> usize {
        self.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TspSolution {
    /// `None`: no Hamiltonian cycle.
    pub min_cost: Option<Weight>,
    #[serde(serialize_with = "crate::decimal::one")]
    pub cycles_at_min: Count,
    #[serde(serialize_with = "crate::decimal::one")]
    pub total_cycles: Count,
    /// Cycles by total cost, `W + 1` coefficients.
    #[serde(serialize_with = "crate::decimal::many")]
    pub histogram: Vec<Count>,
}

impl TspSolution {
    /// Reads the calibrated root polynomial.
    pub fn from_histogram(poly: &CostPolynomial<SignedCount>, bound: Weight) -> Result<Self> {
        let histogram = poly
            .resized(bound as usize + 1)
            .into_coeffs()
            .into_iter()
            .map(|c| c.to_biguint().ok_or_else(|| Error::Defect(format!("negative coefficient {c}"))))
            .collect::<Result<Vec<BigUint>>>()?;
        let min_cost = histogram.iter().position(|c| !c.is_zero());
        Ok(TspSolution {
            min_cost: min_cost.map(|c| c as Weight),
            cycles_at_min: min_cost.map_or_else(BigUint::zero, |c| histogram[c].clone()),
            total_cycles: histogram.iter().sum(),
            histogram,
        })
    }
}

/// TSP over the anchored decomposition of the split graph; `bound` is the
/// total weight of the original graph.
pub fn solve_tsp(
    split: &Graph,
    ntd: &NiceTreeDecomposition,
    bound: Weight,
    options: EngineOptions,
) -> Result<(TspSolution, EngineStats)> {
    let alg = CostPolynomials::<SignedCount>::new(bound);
    let (root, stats) = zeta::evaluate(&alg, split, ntd, options)?;
    Ok((TspSolution::from_histogram(&root.cycles, bound)?, stats))
}
