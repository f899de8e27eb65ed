//! Fibers `F_J(E, α)` (agree with `α` on `J`, strictly larger elsewhere) and
//! their closed variants `F̄_J` (weakly larger), the `p`/`q` statistics, and
//! maximal points.
//!
//! Emptiness is decided on the stored grid: a point beyond the box behaves
//! like its clamp, so a fiber is nonempty iff some grid member is reachable
//! from the clamped query by `+e_k` steps in free coordinates. Those
//! reachability tables are cached per fixed set on the [`RegionSet`].

use serde::{Deserialize, Serialize};

use crate::error::{GsiError, Result};
use crate::good_ideal::{check_same_dim, RegionSet, SmallRep};
use crate::lattice::{IndexSet, IntBox, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximalKind {
    Absolute,
    Relative,
    TypePq,
    /// `r = 2`, where the only possible type `(1, 2)` is both.
    Both,
}

impl MaximalKind {
    pub fn classify(r: usize, p: usize, q: usize) -> Self {
        let absolute = p + 1 == r;
        let relative = p == 1 && q == 2;
        match (absolute, relative) {
            (true, true) => MaximalKind::Both,
            (true, false) => MaximalKind::Absolute,
            (false, true) => MaximalKind::Relative,
            (false, false) => MaximalKind::TypePq,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalInfo {
    pub point: Point,
    pub p: usize,
    pub q: usize,
    pub kind: MaximalKind,
}

/// Closed fiber query on raw coordinates; `fixed` may be empty.
pub(crate) fn closed_witness_raw(set: &RegionSet, alpha: &[i64], fixed: IndexSet) -> Option<Point> {
    let g = set.grid();
    let r = g.dim();
    let (lo, hi) = (g.lo(), g.hi());
    let mut x = vec![0i64; r];
    for k in 0..r {
        if fixed.contains(k) {
            if alpha[k] < lo[k] {
                return None;
            }
            x[k] = alpha[k].min(hi[k]);
        } else {
            x[k] = alpha[k].clamp(lo[k], hi[k]);
        }
    }
    let table = set.reach_table(fixed);
    let mut idx = g.index(&x);
    if !table[idx] {
        return None;
    }
    while !g.get(idx) {
        let k = (0..r)
            .filter(|&k| !fixed.contains(k))
            .find(|&k| x[k] < hi[k] && table[idx + g.stride(k)])
            .expect("reachable cell has a reachable successor");
        x[k] += 1;
        idx += g.stride(k);
    }
    let beta = (0..r)
        .map(|k| {
            if fixed.contains(k) {
                alpha[k]
            } else if x[k] < hi[k] {
                x[k]
            } else {
                alpha[k].max(hi[k])
            }
        })
        .collect::<Vec<_>>();
    Some(Point::new(beta))
}

/// Open fiber `F_J(E, α)`, which is the closed fiber of `α + e_{J^c}`.
pub(crate) fn open_witness_raw(set: &RegionSet, alpha: &[i64], fixed: IndexSet) -> Option<Point> {
    let mut shifted = alpha.to_vec();
    for k in fixed.complement(alpha.len()).iter() {
        shifted[k] = shifted[k].checked_add(1)?;
    }
    closed_witness_raw(set, &shifted, fixed)
}

/// Some member of `F_J(E, α)` (or of `F̄_J(E, α)` when `closed`), if any.
pub fn fiber_witness<E: AsRef<RegionSet> + ?Sized>(
    e: &E,
    alpha: &Point,
    j: IndexSet,
    closed: bool,
) -> Result<Option<Point>> {
    let set = e.as_ref();
    check_same_dim(set.dim(), alpha)?;
    if j.is_empty() {
        return Err(GsiError::EmptyIndexSet);
    }
    if j.mask() >> set.dim() != 0 {
        return Err(GsiError::IndexOutOfRange {
            index: 32 - j.mask().leading_zeros() as usize,
            dim: set.dim(),
        });
    }
    Ok(if closed {
        closed_witness_raw(set, alpha.coords(), j)
    } else {
        open_witness_raw(set, alpha.coords(), j)
    })
}

pub(crate) fn fiber_empty_raw(set: &RegionSet, alpha: &[i64]) -> bool {
    (0..set.dim()).all(|i| open_witness_raw(set, alpha, IndexSet::single(i)).is_none())
}

/// Emptiness of `F(E, α) = ⋃_i F_i(E, α)`.
pub fn fiber_empty<E: AsRef<RegionSet> + ?Sized>(e: &E, alpha: &Point) -> Result<bool> {
    let set = e.as_ref();
    check_same_dim(set.dim(), alpha)?;
    Ok(fiber_empty_raw(set, alpha.coords()))
}

pub fn is_maximal<E: AsRef<RegionSet> + ?Sized>(e: &E, alpha: &Point) -> Result<bool> {
    let set = e.as_ref();
    check_same_dim(set.dim(), alpha)?;
    Ok(set.contains_coords(alpha.coords()) && fiber_empty_raw(set, alpha.coords()))
}

/// `(p, q)` at `α`: `p` is the largest `n` with every open fiber of size at
/// most `n` empty, `q` the least `n` with every fiber of size at least `n`
/// nonempty. Outside `E` this gives `q = r + 1`.
pub(crate) fn pq_raw(set: &RegionSet, alpha: &[i64]) -> (usize, usize) {
    let r = set.dim();
    let mut first_nonempty = r + 1;
    let mut last_empty = 0;
    for j in IndexSet::nonempty_subsets(r) {
        let empty = open_witness_raw(set, alpha, j).is_none();
        if empty {
            last_empty = last_empty.max(j.len());
        } else {
            first_nonempty = first_nonempty.min(j.len());
        }
    }
    (first_nonempty - 1, last_empty + 1)
}

pub fn pq_values<E: AsRef<RegionSet> + ?Sized>(e: &E, alpha: &Point) -> Result<(usize, usize)> {
    let set = e.as_ref();
    check_same_dim(set.dim(), alpha)?;
    Ok(pq_raw(set, alpha.coords()))
}

pub fn p_value<E: AsRef<RegionSet> + ?Sized>(e: &E, alpha: &Point) -> Result<usize> {
    Ok(pq_values(e, alpha)?.0)
}

pub fn q_value<E: AsRef<RegionSet> + ?Sized>(e: &E, alpha: &Point) -> Result<usize> {
    Ok(pq_values(e, alpha)?.1)
}

/// All maximal points, in lexicographic order. They lie in `[m, c − e]`.
pub fn maximals(e: &SmallRep) -> Vec<MaximalInfo> {
    let r = e.dim();
    let Ok(bounds) = IntBox::new(e.min_elem().clone(), e.frobenius()) else {
        return Vec::new();
    };
    let set = e.region();
    bounds
        .points()
        .filter(|a| set.contains_coords(a.coords()) && fiber_empty_raw(set, a.coords()))
        .map(|point| {
            let (p, q) = pq_raw(set, point.coords());
            MaximalInfo {
                kind: MaximalKind::classify(r, p, q),
                point,
                p,
                q,
            }
        })
        .collect()
}
