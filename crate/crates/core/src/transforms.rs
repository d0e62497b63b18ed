//! Functions on the subsets of a small universe, and the lattice algebra
//! the zeta engine relies on: zeta and Möbius transforms, subset
//! convolution, union product, and ranked relaxations.
//!
//! These tables are exponential by construction; they exist to state the
//! identities executably and to test the engines against. Every operation
//! enumerates subsets directly.

use crate::error::{Error, Result};
use crate::scalar::Ring;

/// Largest universe a table may range over.
pub const UNIVERSE_CAP: usize = 16;

/// Value for every subset of `universe`; subsets are bitmasks over positions
/// in `universe`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetFunction<T> {
    universe: Vec<usize>,
    table: Vec<T>,
}

/// Submasks of `mask`, from `mask` down to 0.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

impl<T: Ring> SubsetFunction<T> {
    pub fn new(universe: Vec<usize>, table: Vec<T>) -> Result<Self> {
        if universe.len() > UNIVERSE_CAP {
            return Err(Error::UniverseTooLarge { size: universe.len(), cap: UNIVERSE_CAP });
        }
        if table.len() != 1 << universe.len() {
            return Err(Error::Defect(format!(
                "table has {} entries for a universe of {}",
                table.len(),
                universe.len()
            )));
        }
        Ok(SubsetFunction { universe, table })
    }

    pub fn from_fn(universe: Vec<usize>, f: impl FnMut(u32) -> T) -> Result<Self> {
        if universe.len() > UNIVERSE_CAP {
            return Err(Error::UniverseTooLarge { size: universe.len(), cap: UNIVERSE_CAP });
        }
        let table = (0..1u32 << universe.len()).map(f).collect();
        Ok(SubsetFunction { universe, table })
    }

    pub fn zeros(universe: Vec<usize>) -> Result<Self> {
        Self::from_fn(universe, |_| T::zero())
    }

    /// 1 on the empty set, 0 elsewhere: the unit of both products.
    pub fn empty_indicator(universe: Vec<usize>) -> Result<Self> {
        Self::from_fn(universe, |m| if m == 0 { T::one() } else { T::zero() })
    }

    pub fn universe(&self) -> &[usize] {
        &self.universe
    }

    pub fn table(&self) -> &[T] {
        &self.table
    }

    pub fn get(&self, mask: u32) -> &T {
        &self.table[mask as usize]
    }

    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.universe.len()) - 1) as u32
    }

    fn same_universe(&self, other: &Self) -> Result<()> {
        if self.universe == other.universe {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn pointwise_add(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| {
                let mut s = a.clone();
                s += b;
                s
            })
            .collect();
        Ok(SubsetFunction { universe: self.universe.clone(), table })
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        let table = self.table.iter().zip(&other.table).map(|(a, b)| a.clone() * b.clone()).collect();
        Ok(SubsetFunction { universe: self.universe.clone(), table })
    }
}

/// `(ζf)[X] = Σ_{Y ⊆ X} f[Y]`.
pub fn zeta<T: Ring>(f: &SubsetFunction<T>) -> SubsetFunction<T> {
    let table = (0..=f.full_mask())
        .map(|x| {
            let mut acc = T::zero();
            for y in submasks(x) {
                acc += f.get(y);
            }
            acc
        })
        .collect();
    SubsetFunction { universe: f.universe.clone(), table }
}

/// `(μf)[X] = Σ_{Y ⊆ X} (-1)^{|X \ Y|} f[Y]`.
pub fn mobius<T: Ring>(f: &SubsetFunction<T>) -> SubsetFunction<T> {
    let table = (0..=f.full_mask())
        .map(|x| {
            let mut acc = T::zero();
            for y in submasks(x) {
                if (x & !y).count_ones() % 2 == 0 {
                    acc += f.get(y);
                } else {
                    acc -= f.get(y);
                }
            }
            acc
        })
        .collect();
    SubsetFunction { universe: f.universe.clone(), table }
}

/// `(f *_R g)[X] = Σ_{X1 ⊆ X} f[X1] g[X \ X1]`.
pub fn subset_convolution<T: Ring>(f: &SubsetFunction<T>, g: &SubsetFunction<T>) -> Result<SubsetFunction<T>> {
    f.same_universe(g)?;
    let table = (0..=f.full_mask())
        .map(|x| {
            let mut acc = T::zero();
            for x1 in submasks(x) {
                acc += &(f.get(x1).clone() * g.get(x & !x1).clone());
            }
            acc
        })
        .collect();
    Ok(SubsetFunction { universe: f.universe.clone(), table })
}

/// `(f *_u g)[X] = Σ_{X1 ∪ X2 = X} f[X1] g[X2]`.
pub fn union_product<T: Ring>(f: &SubsetFunction<T>, g: &SubsetFunction<T>) -> Result<SubsetFunction<T>> {
    f.same_universe(g)?;
    let table = (0..=f.full_mask())
        .map(|x| {
            let mut acc = T::zero();
            for x1 in submasks(x) {
                let rest = x & !x1;
                for extra in submasks(x1) {
                    acc += &(f.get(x1).clone() * g.get(rest | extra).clone());
                }
            }
            acc
        })
        .collect();
    Ok(SubsetFunction { universe: f.universe.clone(), table })
}

/// What a relaxation stores where the definition leaves it free
/// (`i > |X|`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FillPolicy {
    /// Repeat `f[X]`.
    #[default]
    Value,
    Zero,
}

/// The ranked family `f^0 ..= f^k` (k = universe size): `f^i[X]` is 0 for
/// `i < |X|`, `f[X]` for `i = |X|`, and per `fill` above.
pub fn make_relaxation<T: Ring>(f: &SubsetFunction<T>, fill: FillPolicy) -> Vec<SubsetFunction<T>> {
    let k = f.universe.len();
    (0..=k)
        .map(|i| {
            let table = (0..=f.full_mask())
                .map(|x| {
                    let size = x.count_ones() as usize;
                    if i < size || (i > size && fill == FillPolicy::Zero) {
                        T::zero()
                    } else {
                        f.get(x).clone()
                    }
                })
                .collect();
            SubsetFunction { universe: f.universe.clone(), table }
        })
        .collect()
}

/// `Σ_{j=0}^{i} f^j *_u g^{i-j}`: at `|X| = i` this equals
/// `(f *_R g)[X]` for any relaxations `f^·`, `g^·`.
pub fn relaxed_union_product<T: Ring>(
    fs: &[SubsetFunction<T>],
    gs: &[SubsetFunction<T>],
    i: usize,
) -> Result<SubsetFunction<T>> {
    let mut acc = SubsetFunction::zeros(fs[0].universe.clone())?;
    for j in 0..=i {
        if j < fs.len() && i - j < gs.len() {
            acc = acc.pointwise_add(&union_product(&fs[j], &gs[i - j])?)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn f2(vals: [i64; 4]) -> SubsetFunction<i64> {
        SubsetFunction::new(vec![0, 1], vals.to_vec()).unwrap()
    }

    #[test]
    fn zeta_example() {
        assert_eq!(zeta(&f2([1, 2, 3, 4])).table(), &[1, 3, 4, 10]);
        assert_eq!(zeta(&f2([0; 4])).table(), &[0; 4]);
        let ind = SubsetFunction::<i64>::empty_indicator(vec![0, 1, 2]).unwrap();
        assert!(zeta(&ind).table().iter().all(|&x| x == 1));
    }

    #[test]
    fn mobius_example() {
        assert_eq!(mobius(&f2([1, 3, 4, 10])).table(), &[1, 2, 3, 4]);
        let ones = SubsetFunction::from_fn(vec![0, 1, 2], |_| 1i64).unwrap();
        assert_eq!(mobius(&ones), SubsetFunction::empty_indicator(vec![0, 1, 2]).unwrap());
    }

    #[test]
    fn products_on_singleton() {
        let f = SubsetFunction::new(vec![7], vec![BigInt::from(1), BigInt::from(1)]).unwrap();
        assert_eq!(subset_convolution(&f, &f).unwrap().get(1), &BigInt::from(2));
        assert_eq!(union_product(&f, &f).unwrap().get(1), &BigInt::from(3));
        let e = SubsetFunction::<BigInt>::empty_indicator(vec![7]).unwrap();
        assert_eq!(subset_convolution(&e, &e).unwrap(), e);
        assert_eq!(union_product(&e, &e).unwrap(), e);
    }

    #[test]
    fn relaxation_definition() {
        let f = SubsetFunction::new(vec![3], vec![5i64, 9]).unwrap();
        let rel = make_relaxation(&f, FillPolicy::Value);
        assert_eq!(rel[0].get(1), &0);
        assert_eq!(rel[1].get(1), &9);
        assert_eq!(rel[1].get(0), &5);
        let rel0 = make_relaxation(&f, FillPolicy::Zero);
        assert_eq!(rel0[1].get(0), &0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            SubsetFunction::<i64>::zeros((0..17).collect()),
            Err(Error::UniverseTooLarge { size: 17, cap: 16 })
        ));
        let a = SubsetFunction::<i64>::zeros(vec![0]).unwrap();
        let b = SubsetFunction::<i64>::zeros(vec![1]).unwrap();
        assert_eq!(union_product(&a, &b).unwrap_err(), Error::UniverseMismatch);
        assert_eq!(subset_convolution(&a, &b).unwrap_err(), Error::UniverseMismatch);
    }
}
