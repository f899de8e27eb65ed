//! Dense boolean storage over an integer box, row-major with the last
//! coordinate varying fastest. Stepping `+e_k` always moves to a larger
//! linear index, which the fiber tables rely on.

use crate::error::{GsiError, Result};
use crate::lattice::{IntBox, Point};

pub(crate) const MAX_CELLS: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Grid {
    bounds: IntBox,
    strides: Vec<usize>,
    bits: Vec<bool>,
}

impl Grid {
    pub(crate) fn new(bounds: IntBox) -> Result<Self> {
        let cells = bounds.cell_count();
        if cells > MAX_CELLS {
            return Err(GsiError::BoxTooLarge(cells));
        }
        let r = bounds.dim();
        let mut strides = vec![1usize; r];
        for k in (0..r.saturating_sub(1)).rev() {
            let extent = (bounds.hi().get(k + 1) - bounds.lo().get(k + 1) + 1) as usize;
            strides[k] = strides[k + 1] * extent;
        }
        Ok(Grid {
            bounds,
            strides,
            bits: vec![false; cells as usize],
        })
    }

    pub(crate) fn from_fn(bounds: IntBox, mut f: impl FnMut(&Point) -> bool) -> Result<Self> {
        let mut grid = Grid::new(bounds)?;
        let pts: Vec<Point> = grid.bounds.points().collect();
        for (idx, p) in pts.iter().enumerate() {
            grid.bits[idx] = f(p);
        }
        Ok(grid)
    }

    pub(crate) fn bounds(&self) -> &IntBox {
        &self.bounds
    }

    pub(crate) fn lo(&self) -> &[i64] {
        self.bounds.lo().coords()
    }

    pub(crate) fn hi(&self) -> &[i64] {
        self.bounds.hi().coords()
    }

    pub(crate) fn dim(&self) -> usize {
        self.strides.len()
    }

    pub(crate) fn len(&self) -> usize {
        self.bits.len()
    }

    pub(crate) fn stride(&self, k: usize) -> usize {
        self.strides[k]
    }

    /// Linear index of an in-box coordinate vector.
    pub(crate) fn index(&self, x: &[i64]) -> usize {
        let lo = self.lo();
        let mut idx = 0usize;
        for k in 0..x.len() {
            debug_assert!(x[k] >= lo[k] && x[k] <= self.hi()[k]);
            idx += (x[k] - lo[k]) as usize * self.strides[k];
        }
        idx
    }

    pub(crate) fn decode_into(&self, mut idx: usize, out: &mut [i64]) {
        let lo = self.lo();
        for k in 0..self.dim() {
            out[k] = lo[k] + (idx / self.strides[k]) as i64;
            idx %= self.strides[k];
        }
    }

    pub(crate) fn point_at(&self, idx: usize) -> Point {
        let mut v = vec![0; self.dim()];
        self.decode_into(idx, &mut v);
        Point::new(v)
    }

    pub(crate) fn get(&self, idx: usize) -> bool {
        self.bits[idx]
    }

    pub(crate) fn set(&mut self, idx: usize, value: bool) -> bool {
        let old = self.bits[idx];
        self.bits[idx] = value;
        old != value
    }

    /// Membership under clamp semantics: below `lo` is outside, coordinates
    /// above `hi` are folded onto the upper face.
    pub(crate) fn clamped_get(&self, x: &[i64]) -> bool {
        let (lo, hi) = (self.lo(), self.hi());
        let mut idx = 0usize;
        for k in 0..x.len() {
            if x[k] < lo[k] {
                return false;
            }
            idx += (x[k].min(hi[k]) - lo[k]) as usize * self.strides[k];
        }
        self.bits[idx]
    }

    pub(crate) fn member_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip_and_clamp() {
        let b = IntBox::new(Point::from([-1, 2]), Point::from([2, 4])).unwrap();
        let g = Grid::from_fn(b.clone(), |p| p.get(0) == 2).unwrap();
        for (idx, p) in b.points().enumerate() {
            assert_eq!(g.index(p.coords()), idx);
            assert_eq!(g.point_at(idx), p);
        }
        assert!(g.clamped_get(&[9, 9]));
        assert!(!g.clamped_get(&[-2, 3]));
        assert!(!g.clamped_get(&[1, 100]));
    }
}
