//! Points of `Z^r` under the componentwise (product) order.
//!
//! [`Point`] derives a *lexicographic* `Ord` so that point sets can be stored
//! and emitted in a fixed order. The lattice structure lives in
//! [`Point::leq`], [`Point::compare`], [`Point::meet`] and [`Point::join`].
//!
//! Index sets `J ⊆ I = {1, …, r}` are 1-based in every external interface
//! (constructors taking user indices, `Display`, reports) and stored as a
//! bitmask over 0-based coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GsiError, Result};

/// Largest ambient dimension supported. Index sets are `u32` masks and the
/// fiber tables hold one entry per subset of coordinates.
pub const MAX_DIM: usize = 12;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Point(Vec<i64>);

/// Outcome of comparing two points in the product order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl Point {
    /// # Panics
    ///
    /// Panics if `coords` is empty or longer than [`MAX_DIM`]. Use
    /// [`Point::try_new`] for untrusted input.
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Self::try_new(coords).expect("invalid point")
    }

    pub fn try_new(coords: impl Into<Vec<i64>>) -> Result<Self> {
        let coords = coords.into();
        if coords.is_empty() {
            return Err(GsiError::EmptyPoint);
        }
        if coords.len() > MAX_DIM {
            return Err(GsiError::UnsupportedDimension(coords.len()));
        }
        Ok(Point(coords))
    }

    pub fn zero(r: usize) -> Self {
        Point::new(vec![0; r])
    }

    /// The all-ones vector `e`.
    pub fn ones(r: usize) -> Self {
        Point::new(vec![1; r])
    }

    /// `e_J`: coordinate `i` is 1 when `i ∈ J`, else 0.
    pub fn unit_vector(r: usize, set: IndexSet) -> Result<Self> {
        check_dim_supported(r)?;
        set.check_within(r)?;
        Ok(Point((0..r).map(|k| i64::from(set.contains(k))).collect()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    /// 0-based coordinate access.
    pub fn get(&self, k: usize) -> i64 {
        self.0[k]
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }

    fn same_dim(&self, other: &Point) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(GsiError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn meet(&self, other: &Point) -> Result<Point> {
        self.same_dim(other)?;
        Ok(self.zip_with(other, i64::min))
    }

    pub fn join(&self, other: &Point) -> Result<Point> {
        self.same_dim(other)?;
        Ok(self.zip_with(other, i64::max))
    }

    pub fn leq(&self, other: &Point) -> Result<bool> {
        self.same_dim(other)?;
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &Point) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn compare(&self, other: &Point) -> Result<Comparison> {
        self.same_dim(other)?;
        let le = self.leq_unchecked(other);
        let ge = other.leq_unchecked(self);
        Ok(match (le, ge) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Less,
            (false, true) => Comparison::Greater,
            (false, false) => Comparison::Incomparable,
        })
    }

    pub fn checked_add(&self, other: &Point) -> Result<Point> {
        self.same_dim(other)?;
        self.try_zip_with(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &Point) -> Result<Point> {
        self.same_dim(other)?;
        self.try_zip_with(other, i64::checked_sub)
    }

    pub fn checked_neg(&self) -> Result<Point> {
        self.0
            .iter()
            .map(|a| a.checked_neg().ok_or(GsiError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Point)
    }

    /// `pr_J(α)`: the coordinates of `self` at the indices of `set`, in order.
    pub fn project(&self, set: IndexSet) -> Result<Point> {
        if set.is_empty() {
            return Err(GsiError::EmptyIndexSet);
        }
        set.check_within(self.dim())?;
        Ok(Point(set.iter().map(|k| self.0[k]).collect()))
    }

    pub fn concat(&self, other: &Point) -> Result<Point> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Point::try_new(v)
    }

    fn zip_with(&self, other: &Point, f: impl Fn(i64, i64) -> i64) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }

    fn try_zip_with(&self, other: &Point, f: impl Fn(i64, i64) -> Option<i64>) -> Result<Point> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| f(a, b).ok_or(GsiError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Point)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<i64>> for Point {
    type Error = GsiError;

    fn try_from(v: Vec<i64>) -> Result<Self> {
        Point::try_new(v)
    }
}

impl From<Point> for Vec<i64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(a: [i64; N]) -> Self {
        Point::new(a.to_vec())
    }
}

pub(crate) fn check_dim_supported(r: usize) -> Result<()> {
    if r == 0 || r > MAX_DIM {
        return Err(GsiError::UnsupportedDimension(r));
    }
    Ok(())
}

/// A subset `J` of the coordinate indices, stored as a bitmask over
/// 0-based positions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    /// Build from 1-based indices as written in reports and documentation.
    pub fn from_one_based(r: usize, indices: &[usize]) -> Result<Self> {
        check_dim_supported(r)?;
        let mut mask = 0u32;
        for &i in indices {
            if i == 0 || i > r {
                return Err(GsiError::IndexOutOfRange { index: i, dim: r });
            }
            mask |= 1 << (i - 1);
        }
        Ok(IndexSet(mask))
    }

    pub fn full(r: usize) -> Self {
        debug_assert!(r <= MAX_DIM);
        IndexSet(((1u64 << r) - 1) as u32)
    }

    /// `{k}` for a 0-based coordinate `k`.
    pub fn single(k: usize) -> Self {
        IndexSet(1 << k)
    }

    pub fn from_mask(mask: u32) -> Self {
        IndexSet(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn complement(self, r: usize) -> Self {
        IndexSet(!self.0 & IndexSet::full(r).0)
    }

    pub fn union(self, other: IndexSet) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn with(self, k: usize) -> Self {
        IndexSet(self.0 | 1 << k)
    }

    /// 0-based members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&k| self.contains(k))
    }

    /// All nonempty subsets of `{0, …, r-1}`.
    pub fn nonempty_subsets(r: usize) -> impl Iterator<Item = IndexSet> {
        (1..=IndexSet::full(r).0).map(IndexSet)
    }

    fn check_within(self, r: usize) -> Result<()> {
        if self.0 & !IndexSet::full(r).0 != 0 {
            let index = 32 - self.0.leading_zeros() as usize;
            return Err(GsiError::IndexOutOfRange { index, dim: r });
        }
        Ok(())
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, k) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", k + 1)?;
        }
        write!(f, "}}")
    }
}

/// A closed integer box `[lo, hi]` with `lo ≤ hi`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct IntBox {
    lo: Point,
    hi: Point,
}

impl IntBox {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        if !lo.leq(&hi)? {
            return Err(GsiError::InvertedBox {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(IntBox { lo, hi })
    }

    pub fn lo(&self) -> &Point {
        &self.lo
    }

    pub fn hi(&self) -> &Point {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    /// Number of lattice points, `∏ (hi_i − lo_i + 1)`.
    pub fn cell_count(&self) -> u128 {
        self.lo
            .coords()
            .iter()
            .zip(self.hi.coords())
            .map(|(&l, &h)| (h as i128 - l as i128 + 1) as u128)
            .product()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim() && self.lo.leq_unchecked(p) && p.leq_unchecked(&self.hi)
    }

    /// Every point of the box exactly once, in lexicographic order.
    pub fn points(&self) -> BoxPoints<'_> {
        BoxPoints {
            bounds: self,
            next: Some(self.lo.clone()),
        }
    }
}

impl fmt::Display for IntBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

pub struct BoxPoints<'a> {
    bounds: &'a IntBox,
    next: Option<Point>,
}

impl Iterator for BoxPoints<'_> {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let lo = self.bounds.lo.coords();
        let hi = self.bounds.hi.coords();
        let coords = succ.coords_mut();
        for k in (0..coords.len()).rev() {
            if coords[k] < hi[k] {
                coords[k] += 1;
                self.next = Some(succ);
                return Some(current);
            }
            coords[k] = lo[k];
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p<const N: usize>(a: [i64; N]) -> Point {
        Point::from(a)
    }

    fn set(r: usize, idx: &[usize]) -> IndexSet {
        IndexSet::from_one_based(r, idx).unwrap()
    }

    #[test]
    fn meet_examples() {
        assert_eq!(p([3, 4]).meet(&p([4, 3])).unwrap(), p([3, 3]));
        assert_eq!(p([0, 0]).meet(&p([5, 5])).unwrap(), p([0, 0]));
        assert_eq!(p([2, 7, 1]).meet(&p([3, 1, 1])).unwrap(), p([2, 1, 1]));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            p([1, 2]).meet(&p([1, 2, 3])),
            Err(GsiError::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(p([1]).leq(&p([1, 1])).is_err());
        assert!(p([1]).compare(&p([1, 1])).is_err());
    }

    #[test]
    fn order_examples() {
        assert!(p([0, 0]).leq(&p([3, 4])).unwrap());
        assert_eq!(p([3, 4]).compare(&p([4, 3])).unwrap(), Comparison::Incomparable);
        assert_eq!(p([2, 2]).compare(&p([2, 2])).unwrap(), Comparison::Equal);
        assert_eq!(p([1, 2]).compare(&p([2, 2])).unwrap(), Comparison::Less);
    }

    #[test]
    fn unit_vectors() {
        assert_eq!(Point::unit_vector(2, set(2, &[1])).unwrap(), p([1, 0]));
        assert_eq!(Point::unit_vector(3, set(3, &[1, 2, 3])).unwrap(), p([1, 1, 1]));
        assert_eq!(Point::unit_vector(2, IndexSet::EMPTY).unwrap(), p([0, 0]));
        assert!(matches!(
            IndexSet::from_one_based(2, &[3]),
            Err(GsiError::IndexOutOfRange { index: 3, dim: 2 })
        ));
        assert!(Point::unit_vector(2, IndexSet::single(4)).is_err());
    }

    #[test]
    fn projections() {
        assert_eq!(p([3, 4]).project(set(2, &[2])).unwrap(), p([4]));
        assert_eq!(p([3, 4]).project(set(2, &[1, 2])).unwrap(), p([3, 4]));
        assert_eq!(p([5, 1, 9]).project(set(3, &[1, 3])).unwrap(), p([5, 9]));
        assert!(matches!(p([5, 1]).project(IndexSet::EMPTY), Err(GsiError::EmptyIndexSet)));
    }

    #[test]
    fn overflow_is_checked() {
        assert!(matches!(p([i64::MAX]).checked_add(&p([1])), Err(GsiError::Overflow)));
        assert!(matches!(p([i64::MIN]).checked_sub(&p([1])), Err(GsiError::Overflow)));
    }

    #[test]
    fn index_set_display_is_one_based() {
        assert_eq!(set(3, &[1, 3]).to_string(), "{1,3}");
        assert_eq!(IndexSet::full(3).complement(3), IndexSet::EMPTY);
        assert_eq!(IndexSet::nonempty_subsets(3).count(), 7);
    }

    #[test]
    fn inverted_box_rejected() {
        assert!(IntBox::new(p([1, 0]), p([0, 5])).is_err());
    }

    fn point3() -> impl Strategy<Value = Point> {
        prop::collection::vec(-6i64..6, 3).prop_map(Point::new)
    }

    proptest! {
        #[test]
        fn meet_is_a_semilattice(a in point3(), b in point3(), c in point3()) {
            let ab = a.meet(&b).unwrap();
            prop_assert_eq!(&ab, &b.meet(&a).unwrap());
            prop_assert_eq!(ab.meet(&c).unwrap(), a.meet(&b.meet(&c).unwrap()).unwrap());
            prop_assert_eq!(a.meet(&a).unwrap(), a.clone());
            prop_assert!(ab.leq(&a).unwrap() && ab.leq(&b).unwrap());
            prop_assert_eq!(a.leq(&b).unwrap(), ab == a);
        }

        #[test]
        fn box_iteration_visits_each_point_once(lo in point3(), span in prop::collection::vec(0i64..4, 3)) {
            let hi = Point::new(lo.coords().iter().zip(&span).map(|(l, s)| l + s).collect::<Vec<_>>());
            let b = IntBox::new(lo, hi).unwrap();
            let pts: Vec<Point> = b.points().collect();
            prop_assert_eq!(pts.len() as u128, b.cell_count());
            let uniq: std::collections::BTreeSet<_> = pts.iter().cloned().collect();
            prop_assert_eq!(uniq.len(), pts.len());
            prop_assert!(pts.iter().all(|q| b.contains(q)));
        }
    }
}
