//! Definition-level reference implementations.
//!
//! Nothing here touches the fast paths: sets are materialized from the small
//! element list into their own dense storage, and fibers, duals and the
//! canonical ideal are literal enumerations over boxes with a doubled margin.
//! Slow on purpose.

use std::collections::BTreeSet;

use crate::good_ideal::{RegionSet, SmallRep};
use crate::lattice::{IndexSet, IntBox, Point};

/// A set materialized point by point over a box. Lookups below the box are
/// non-members; lookups above it are folded onto the upper face, which is
/// sound once the box reaches past the conductor.
#[derive(Clone, Debug)]
pub struct ExplicitSet {
    lo: Vec<i64>,
    hi: Vec<i64>,
    extent: Vec<usize>,
    bits: Vec<bool>,
}

impl ExplicitSet {
    /// `E` over `[m − e, c + 2e]`.
    pub fn new(e: &SmallRep) -> Self {
        let r = e.dim();
        let lo = shift(e.min_elem(), -1);
        let hi = shift(e.conductor(), 2);
        let _ = r;
        Self::over(e, &IntBox::new(lo, hi).expect("box"))
    }

    /// `E` over `bounds`, which must start below `min(E)` and end at or
    /// beyond `c(E)`.
    pub fn over(e: &SmallRep, bounds: &IntBox) -> Self {
        assert!(bounds.lo().leq(e.min_elem()).unwrap() && e.conductor().leq(bounds.hi()).unwrap());
        let c = e.conductor().coords().to_vec();
        let small: Vec<Vec<i64>> = e.small_elements().iter().map(|s| s.coords().to_vec()).collect();
        Self::from_fn(bounds, |x| {
            small.iter().any(|s| {
                (0..x.len()).all(|k| if s[k] < c[k] { x[k] == s[k] } else { x[k] >= c[k] })
            })
        })
    }

    pub fn from_fn(bounds: &IntBox, mut member: impl FnMut(&[i64]) -> bool) -> Self {
        let lo = bounds.lo().coords().to_vec();
        let hi = bounds.hi().coords().to_vec();
        let extent: Vec<usize> = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as usize).collect();
        let bits = bounds.points().map(|p| member(p.coords())).collect();
        ExplicitSet { lo, hi, extent, bits }
    }

    pub fn bounds(&self) -> IntBox {
        IntBox::new(Point::new(self.lo.clone()), Point::new(self.hi.clone())).expect("box")
    }

    fn offset(&self, x: &[i64]) -> usize {
        x.iter()
            .enumerate()
            .fold(0, |acc, (k, &v)| acc * self.extent[k] + (v - self.lo[k]) as usize)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let mut folded = Vec::with_capacity(x.len());
        for k in 0..x.len() {
            if x[k] < self.lo[k] {
                return false;
            }
            folded.push(x[k].min(self.hi[k]));
        }
        self.bits[self.offset(&folded)]
    }

    pub fn members(&self) -> Vec<Point> {
        self.bounds()
            .points()
            .zip(&self.bits)
            .filter(|(_, &b)| b)
            .map(|(p, _)| p)
            .collect()
    }
}

fn shift(p: &Point, by: i64) -> Point {
    Point::new(p.coords().iter().map(|v| v + by).collect::<Vec<_>>())
}

pub fn brute_contains(x: &ExplicitSet, alpha: &Point) -> bool {
    x.contains(alpha.coords())
}

/// Box of candidate fiber elements: fixed coordinates pinned to `α`, free
/// ones running from `α_k` (+1 when open) to the box top.
fn fiber_candidates(x: &ExplicitSet, alpha: &[i64], j: IndexSet, closed: bool) -> Option<IntBox> {
    let r = alpha.len();
    let mut lo = vec![0; r];
    let mut hi = vec![0; r];
    for k in 0..r {
        if j.contains(k) {
            if alpha[k] < x.lo[k] || alpha[k] > x.hi[k] {
                return None;
            }
            lo[k] = alpha[k];
            hi[k] = alpha[k];
        } else {
            lo[k] = (alpha[k] + i64::from(!closed)).max(x.lo[k]);
            hi[k] = x.hi[k];
            if lo[k] > hi[k] {
                return None;
            }
        }
    }
    IntBox::new(Point::new(lo), Point::new(hi)).ok()
}

/// The fiber restricted to the explicit box; `α` must lie inside the box.
pub fn brute_fiber(x: &ExplicitSet, alpha: &Point, j: IndexSet, closed: bool) -> Vec<Point> {
    match fiber_candidates(x, alpha.coords(), j, closed) {
        None => Vec::new(),
        Some(b) => b.points().filter(|p| x.contains(p.coords())).collect(),
    }
}

fn fiber_nonempty(x: &ExplicitSet, alpha: &[i64], j: IndexSet, closed: bool) -> bool {
    fiber_candidates(x, alpha, j, closed)
        .is_some_and(|b| b.points().any(|p| x.contains(p.coords())))
}

fn union_fiber_empty(x: &ExplicitSet, alpha: &[i64]) -> bool {
    (0..alpha.len()).all(|i| !fiber_nonempty(x, alpha, IndexSet::single(i), false))
}

/// Compare membership and every fiber decision of the fast path against
/// enumeration, for all `α ∈ [m − e, c + e]`. Also checks that each open
/// fiber `F_J(α)` is empty exactly when `⋂_{i∈J} F̄_i(α + e_{J^c})` is.
pub fn fiber_disagreements(e: &SmallRep, x: &ExplicitSet) -> Vec<String> {
    let r = e.dim();
    let mut out = Vec::new();
    for p in x.bounds().points() {
        if e.contains(&p).unwrap() != x.contains(p.coords()) {
            out.push(format!("contains {p}"));
        }
    }
    let sweep = IntBox::new(shift(e.min_elem(), -1), shift(e.conductor(), 1)).unwrap();
    for a in sweep.points() {
        for j in IndexSet::nonempty_subsets(r) {
            for closed in [false, true] {
                let fast = crate::fiber::fiber_witness(e, &a, j, closed).unwrap().is_some();
                if fast != fiber_nonempty(x, a.coords(), j, closed) {
                    out.push(format!("fiber {a} {j} closed={closed}"));
                }
            }
            let mut shifted = a.coords().to_vec();
            for k in j.complement(r).iter() {
                shifted[k] += 1;
            }
            let mut meet: Option<BTreeSet<Point>> = None;
            for i in j.iter() {
                let set: BTreeSet<Point> = brute_fiber(x, &Point::new(shifted.clone()), IndexSet::single(i), true)
                    .into_iter()
                    .collect();
                meet = Some(match meet {
                    None => set,
                    Some(m) => m.intersection(&set).cloned().collect(),
                });
            }
            let closed_form = meet.is_some_and(|m| !m.is_empty());
            if closed_form != fiber_nonempty(x, a.coords(), j, false) {
                out.push(format!("closed-fiber form {a} {j}"));
            }
        }
        let fast = crate::fiber::fiber_empty(e, &a).unwrap();
        if fast != union_fiber_empty(x, a.coords()) {
            out.push(format!("union fiber {a}"));
        }
    }
    out
}

/// Maximal points found by enumeration over `[m − e, c + e]`.
pub fn brute_maximals(e: &SmallRep, x: &ExplicitSet) -> Vec<Point> {
    let sweep = IntBox::new(shift(e.min_elem(), -1), shift(e.conductor(), 1)).unwrap();
    sweep
        .points()
        .filter(|a| x.contains(a.coords()) && union_fiber_empty(x, a.coords()))
        .collect()
}

/// `E_J − E_I = {β : β + E_I ⊆ E_J}` over `β ∈ [m_J − c_I − e, c_J − m_I + 2e]`,
/// quantifying `α` over every member of `E_I` in
/// `[m_I − e, c_I + c_J − m_J + 2e]`.
pub fn brute_dual(ej: &SmallRep, ei: &SmallRep) -> ExplicitSet {
    let (mj, cj) = (ej.min_elem().coords(), ej.conductor().coords());
    let (mi, ci) = (ei.min_elem().coords(), ei.conductor().coords());
    let r = mj.len();
    let beta_box = IntBox::new(
        Point::new((0..r).map(|k| mj[k] - ci[k] - 1).collect::<Vec<_>>()),
        Point::new((0..r).map(|k| cj[k] - mi[k] + 2).collect::<Vec<_>>()),
    )
    .unwrap();
    let alpha_box = IntBox::new(
        shift(ei.min_elem(), -1),
        Point::new((0..r).map(|k| ci[k] + cj[k] - mj[k] + 2).collect::<Vec<_>>()),
    )
    .unwrap();
    let xi = ExplicitSet::over(ei, &alpha_box);
    let xj = ExplicitSet::new(ej);
    let alphas = xi.members();
    let mut sum = vec![0i64; r];
    ExplicitSet::from_fn(&beta_box, |beta| {
        alphas.iter().all(|a| {
            for k in 0..r {
                sum[k] = a.get(k) + beta[k];
            }
            xj.contains(&sum)
        })
    })
}

/// `E⁰ = {α : F(S, 𝔣(S) − α) = ∅}` over `α ∈ [m − (c − m) − 2e, c + 2e]`,
/// with `S` materialized on `[−e, 2c + 3e]`.
pub fn brute_canonical(s: &SmallRep) -> ExplicitSet {
    let (m, c) = (s.min_elem().coords(), s.conductor().coords());
    let r = m.len();
    let f: Vec<i64> = c.iter().map(|v| v - 1).collect();
    let xs = ExplicitSet::over(
        s,
        &IntBox::new(
            Point::new(vec![-1; r]),
            Point::new(c.iter().map(|v| 2 * v + 3).collect::<Vec<_>>()),
        )
        .unwrap(),
    );
    let alpha_box = IntBox::new(
        Point::new((0..r).map(|k| m[k] - (c[k] - m[k]) - 2).collect::<Vec<_>>()),
        shift(s.conductor(), 2),
    )
    .unwrap();
    ExplicitSet::from_fn(&alpha_box, |a| {
        let g: Vec<i64> = (0..r).map(|k| f[k] - a[k]).collect();
        union_fiber_empty(&xs, &g)
    })
}

/// Points of the brute set's box where the fast set disagrees.
pub fn disagreements<E: AsRef<RegionSet> + ?Sized>(fast: &E, brute: &ExplicitSet) -> Vec<Point> {
    let fast = fast.as_ref();
    brute
        .bounds()
        .points()
        .filter(|p| fast.contains(p).unwrap() != brute.contains(p.coords()))
        .collect()
}

/// E1, E2 and conductor minimality quantified literally over the explicit box
/// of `E`. Only meant for small inputs: E2 costs a pair scan times a witness
/// scan.
pub fn brute_axioms(e: &SmallRep) -> Result<(), String> {
    let x = ExplicitSet::new(e);
    let r = e.dim();
    let upper = IntBox::new(e.min_elem().clone(), shift(e.conductor(), 1)).unwrap();
    let members: Vec<Point> = upper.points().filter(|p| x.contains(p.coords())).collect();
    let all = x.members();
    for a in &members {
        for b in &members {
            let mu = a.meet(b).unwrap();
            if !x.contains(mu.coords()) {
                return Err(format!("E1 {a} {b}"));
            }
            if a == b {
                continue;
            }
            for i in 0..r {
                if a.get(i) != b.get(i) {
                    continue;
                }
                let ok = all.iter().any(|d| {
                    d.get(i) > a.get(i)
                        && (0..r).all(|k| {
                            if a.get(k) != b.get(k) {
                                d.get(k) == mu.get(k)
                            } else {
                                d.get(k) >= mu.get(k)
                            }
                        })
                });
                if !ok {
                    return Err(format!("E2 {a} {b} {}", i + 1));
                }
            }
        }
    }
    let c = e.conductor();
    let tail = IntBox::new(c.clone(), x.bounds().hi().clone()).unwrap();
    if let Some(p) = tail.points().find(|p| !x.contains(p.coords())) {
        return Err(format!("conductor: {p} missing"));
    }
    for k in 0..r {
        let mut below = c.coords().to_vec();
        below[k] -= 1;
        let face_full = IntBox::new(Point::new(below.clone()), x.bounds().hi().clone())
            .unwrap()
            .points()
            .all(|p| x.contains(p.coords()));
        if face_full {
            return Err(format!("conductor not least in coordinate {}", k + 1));
        }
    }
    Ok(())
}

/// Elements of the numerical semigroup generated by `gens` up to `bound`,
/// by closing `{0}` under adding generators.
pub fn numerical_members(gens: &[i64], bound: i64) -> BTreeSet<i64> {
    let mut seen = BTreeSet::from([0]);
    let mut frontier = vec![0];
    while let Some(v) = frontier.pop() {
        for &g in gens {
            let w = v + g;
            if w <= bound && seen.insert(w) {
                frontier.push(w);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::fixtures;

    fn p<const N: usize>(a: [i64; N]) -> Point {
        Point::from(a)
    }

    #[test]
    fn explicit_membership() {
        let ex2 = fixtures::ex2();
        let x = ExplicitSet::new(&ex2);
        assert!(brute_contains(&x, &p([6, 7])));
        assert!(brute_contains(&x, &p([60, 70])));
        assert!(!brute_contains(&x, &p([-1, 3])));
        assert!(disagreements(&ex2, &x).is_empty());
        let n1 = fixtures::n1();
        let wide = ExplicitSet::over(&n1, &IntBox::new(p([-1]), p([9])).unwrap());
        assert!(disagreements(&n1, &wide).is_empty());
    }

    #[test]
    fn literal_fibers() {
        let x = ExplicitSet::new(&fixtures::ex2());
        let single = IndexSet::single(0);
        assert_eq!(brute_fiber(&x, &p([3, 3]), single, false), vec![p([3, 4])]);
    }

    #[test]
    fn literal_duals() {
        let n2 = fixtures::n2();
        assert!(disagreements(&n2, &brute_dual(&n2, &n2)).is_empty());
        let canon = brute_canonical(&fixtures::n1());
        let in_range: Vec<i64> = (0..=6).filter(|&v| canon.contains(&[v])).collect();
        assert_eq!(in_range, vec![0, 1, 3, 4, 5, 6]);
    }

    #[test]
    fn literal_axioms() {
        for e in fixtures::all() {
            assert_eq!(brute_axioms(&e), Ok(()));
        }
        assert!(brute_axioms(&fixtures::ex2_without_33()).unwrap_err().starts_with("E1"));
    }

    #[test]
    fn numerical_closure() {
        let v: Vec<i64> = numerical_members(&[3, 4, 5], 9).into_iter().collect();
        assert_eq!(v, vec![0, 3, 4, 5, 6, 7, 8, 9]);
    }
}
