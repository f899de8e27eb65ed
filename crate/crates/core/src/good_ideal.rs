//! Finite representations of good semigroup ideals of `Z^r`.
//!
//! A good semigroup ideal `E` is infinite, but it is pinned down by its
//! minimum `m`, its conductor `c` and the *small elements* `E ∩ [m, c]`:
//!
//! ```text
//! α ∈ E  ⟺  min(α, c) ∈ small
//! ```
//!
//! [`RegionSet`] is the same idea without the goodness guarantees: a boolean
//! grid over a box `[lo, hi]` with *clamp semantics*: points with a coordinate
//! below `lo` are outside, coordinates above `hi` are folded onto the upper
//! face. Computed duals live there until [`RegionSet::promote`] turns them
//! into a [`SmallRep`]. A `SmallRep` is a `RegionSet` whose box is exactly
//! `[m, c]`.

use std::sync::OnceLock;

use crate::error::{GsiError, Result};
use crate::fiber;
use crate::grid::Grid;
use crate::lattice::{check_dim_supported, IndexSet, IntBox, Point};
use crate::report::{CheckReport, Evidence, ReportBuilder};

#[derive(Clone, Debug)]
pub struct RegionSet {
    grid: Grid,
    reach: Vec<OnceLock<Vec<bool>>>,
    extremes: OnceLock<Extremes>,
}

#[derive(Clone, Debug)]
struct Extremes {
    minimum: Option<Point>,
    conductor: Option<Point>,
}

impl PartialEq for RegionSet {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid
    }
}

impl Eq for RegionSet {}

impl AsRef<RegionSet> for RegionSet {
    fn as_ref(&self) -> &RegionSet {
        self
    }
}

impl RegionSet {
    pub(crate) fn from_grid(grid: Grid) -> Self {
        let r = grid.dim();
        RegionSet {
            grid,
            reach: (0..1usize << r).map(|_| OnceLock::new()).collect(),
            extremes: OnceLock::new(),
        }
    }

    /// Materialize `{x ∈ bounds : member(x)}`; the box's upper corner acts as
    /// the clamp point for everything beyond it.
    pub fn from_fn(bounds: IntBox, member: impl FnMut(&Point) -> bool) -> Result<Self> {
        check_dim_supported(bounds.dim())?;
        Ok(RegionSet::from_grid(Grid::from_fn(bounds, member)?))
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn bounds(&self) -> &IntBox {
        self.grid.bounds()
    }

    pub fn lo(&self) -> &Point {
        self.grid.bounds().lo()
    }

    pub fn hi(&self) -> &Point {
        self.grid.bounds().hi()
    }

    pub(crate) fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn contains(&self, alpha: &Point) -> Result<bool> {
        check_same_dim(self.dim(), alpha)?;
        Ok(self.grid.clamped_get(alpha.coords()))
    }

    pub(crate) fn contains_coords(&self, x: &[i64]) -> bool {
        self.grid.clamped_get(x)
    }

    /// Member points of the stored box, in lexicographic order.
    pub fn members(&self) -> Vec<Point> {
        self.grid
            .member_indices()
            .map(|i| self.grid.point_at(i))
            .collect()
    }

    pub fn member_count(&self) -> usize {
        self.grid.member_indices().count()
    }

    /// `min(E)`, the meet of all members, when it is itself a member.
    pub fn minimum(&self) -> Option<&Point> {
        self.extremes().minimum.as_ref()
    }

    /// The least `γ` with `γ + N^r ⊆ E`, when it exists (it does whenever
    /// the set is meet-closed and contains its clamp corner).
    pub fn conductor(&self) -> Option<&Point> {
        self.extremes().conductor.as_ref()
    }

    fn extremes(&self) -> &Extremes {
        self.extremes.get_or_init(|| {
            let minimum = meet_all(self.grid.member_indices().map(|i| self.grid.point_at(i)))
                .filter(|m| self.grid.clamped_get(m.coords()));
            let conductor = self.compute_conductor();
            Extremes { minimum, conductor }
        })
    }

    fn compute_conductor(&self) -> Option<Point> {
        let g = &self.grid;
        let n = g.len();
        let r = g.dim();
        let hi = g.hi().to_vec();
        let mut full = vec![false; n];
        let mut x = vec![0i64; r];
        for idx in (0..n).rev() {
            if !g.get(idx) {
                continue;
            }
            g.decode_into(idx, &mut x);
            full[idx] = (0..r).all(|k| x[k] == hi[k] || full[idx + g.stride(k)]);
        }
        let candidate = meet_all(
            full.iter()
                .enumerate()
                .filter(|(_, &f)| f)
                .map(|(i, _)| g.point_at(i)),
        )?;
        full[g.index(candidate.coords())].then_some(candidate)
    }

    /// Closed-fiber reachability for a fixed coordinate set `J`: entry `x` is
    /// true iff some member `s` has `s_J = x_J` and `s ≥ x` elsewhere.
    pub(crate) fn reach_table(&self, fixed: IndexSet) -> &[bool] {
        self.reach[fixed.mask() as usize].get_or_init(|| {
            let g = &self.grid;
            let n = g.len();
            let r = g.dim();
            let hi = g.hi();
            let free: Vec<usize> = fixed.complement(r).iter().collect();
            let mut table = vec![false; n];
            let mut x = vec![0i64; r];
            for idx in (0..n).rev() {
                if g.get(idx) {
                    table[idx] = true;
                    continue;
                }
                g.decode_into(idx, &mut x);
                table[idx] = free
                    .iter()
                    .any(|&k| x[k] < hi[k] && table[idx + g.stride(k)]);
            }
            table
        })
    }

    pub fn translate(&self, delta: &Point) -> Result<RegionSet> {
        check_same_dim(self.dim(), delta)?;
        let bounds = IntBox::new(self.lo().checked_add(delta)?, self.hi().checked_add(delta)?)?;
        let mut grid = Grid::new(bounds)?;
        for idx in self.grid.member_indices() {
            grid.set(idx, true);
        }
        Ok(RegionSet::from_grid(grid))
    }

    /// Box on which two clamped sets can be compared exhaustively.
    fn comparison_box(&self, other: &RegionSet) -> Result<IntBox> {
        check_same_dim(self.dim(), other.lo())?;
        let lo = self.lo().meet(other.lo())?;
        let hi = self
            .hi()
            .join(other.hi())?
            .checked_add(&Point::ones(self.dim()))?;
        IntBox::new(lo, hi)
    }

    /// Some point where membership differs, with `(in self, in other)`.
    pub fn first_difference(&self, other: &RegionSet) -> Result<Option<(Point, bool, bool)>> {
        let bounds = self.comparison_box(other)?;
        Ok(bounds.points().find_map(|p| {
            let a = self.contains_coords(p.coords());
            let b = other.contains_coords(p.coords());
            (a != b).then_some((p, a, b))
        }))
    }

    pub fn equals(&self, other: &RegionSet) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }

    /// A member of `self` that `other` lacks.
    pub fn first_excess(&self, other: &RegionSet) -> Result<Option<Point>> {
        let bounds = self.comparison_box(other)?;
        Ok(bounds
            .points()
            .find(|p| self.contains_coords(p.coords()) && !other.contains_coords(p.coords())))
    }

    pub fn is_subset(&self, other: &RegionSet) -> Result<bool> {
        Ok(self.first_excess(other)?.is_none())
    }

    /// Turn the set into a validated [`SmallRep`]: find its minimum and
    /// conductor, confirm that the membership rule reproduces every stored
    /// point, and check the goodness axioms.
    pub fn promote(&self) -> Result<SmallRep> {
        let m = self
            .minimum()
            .cloned()
            .ok_or_else(|| GsiError::NotRepresentable("the set has no minimum".into()))?;
        let c = self.conductor().cloned().ok_or_else(|| {
            GsiError::NotRepresentable("no conductor inside the stored box".into())
        })?;
        let r = self.dim();
        let mut clamped = vec![0i64; r];
        let mut x = vec![0i64; r];
        for idx in 0..self.grid.len() {
            self.grid.decode_into(idx, &mut x);
            let above_min = (0..r).all(|k| x[k] >= m.get(k));
            for k in 0..r {
                clamped[k] = x[k].min(c.get(k));
            }
            let by_rule = above_min && self.grid.clamped_get(&clamped);
            if by_rule != self.grid.get(idx) {
                return Err(GsiError::NotRepresentable(format!(
                    "membership of {} is not determined by its meet with the conductor {c}",
                    Point::new(x.clone())
                )));
            }
        }
        let small: Vec<Point> = IntBox::new(m.clone(), c.clone())?
            .points()
            .filter(|p| self.grid.clamped_get(p.coords()))
            .collect();
        SmallRep::new(m, c, small)
    }
}

fn meet_all(points: impl Iterator<Item = Point>) -> Option<Point> {
    points.reduce(|a, b| a.meet(&b).expect("same dimension"))
}

pub(crate) fn check_same_dim(r: usize, p: &Point) -> Result<()> {
    if p.dim() != r {
        return Err(GsiError::DimensionMismatch {
            expected: r,
            found: p.dim(),
        });
    }
    Ok(())
}

/// Canonical finite data of a good semigroup ideal: minimum, conductor, and
/// the small elements `E ∩ [m, c]`, with membership `α ∈ E ⟺ min(α, c) ∈ small`.
///
/// [`SmallRep::new`] validates the axioms; [`SmallRep::structural`] only checks
/// the shape and exists so that broken inputs can be handed to [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallRep {
    region: RegionSet,
    small: Vec<Point>,
}

impl AsRef<RegionSet> for SmallRep {
    fn as_ref(&self) -> &RegionSet {
        &self.region
    }
}

impl SmallRep {
    pub fn new(min: Point, conductor: Point, elems: impl IntoIterator<Item = Point>) -> Result<Self> {
        let rep = SmallRep::structural(min, conductor, elems)?;
        let report = validate(&rep, None);
        if !report.passed {
            return Err(GsiError::Axiom(Box::new(report)));
        }
        Ok(rep)
    }

    /// Structural checks only: matching dimensions, `m ≤ c`, `m` and `c`
    /// listed, no element below `m`. Elements are normalized by meet with `c`.
    pub fn structural(
        min: Point,
        conductor: Point,
        elems: impl IntoIterator<Item = Point>,
    ) -> Result<Self> {
        let r = min.dim();
        check_dim_supported(r)?;
        check_same_dim(r, &conductor)?;
        if !min.leq(&conductor)? {
            return Err(GsiError::Malformed(format!(
                "minimum {min} is not below the conductor {conductor}"
            )));
        }
        let mut small = Vec::new();
        for e in elems {
            check_same_dim(r, &e)?;
            let e = e.meet(&conductor)?;
            if !min.leq_unchecked(&e) {
                return Err(GsiError::Malformed(format!(
                    "element {e} lies below the minimum {min}"
                )));
            }
            small.push(e);
        }
        small.sort();
        small.dedup();
        for (name, p) in [("minimum", &min), ("conductor", &conductor)] {
            if small.binary_search(p).is_err() {
                return Err(GsiError::Malformed(format!(
                    "the {name} {p} is missing from the small elements"
                )));
            }
        }
        let mut grid = Grid::new(IntBox::new(min, conductor)?)?;
        for p in &small {
            let idx = grid.index(p.coords());
            grid.set(idx, true);
        }
        Ok(SmallRep {
            region: RegionSet::from_grid(grid),
            small,
        })
    }

    pub fn dim(&self) -> usize {
        self.region.dim()
    }

    pub fn region(&self) -> &RegionSet {
        &self.region
    }

    pub fn min_elem(&self) -> &Point {
        self.region.lo()
    }

    pub fn conductor(&self) -> &Point {
        self.region.hi()
    }

    /// `𝔣(E) = c(E) − e`.
    pub fn frobenius(&self) -> Point {
        let c = self.conductor();
        Point::new(c.coords().iter().map(|v| v - 1).collect::<Vec<_>>())
    }

    /// Sorted lexicographically.
    pub fn small_elements(&self) -> &[Point] {
        &self.small
    }

    pub fn contains(&self, alpha: &Point) -> Result<bool> {
        self.region.contains(alpha)
    }

    pub(crate) fn contains_coords(&self, x: &[i64]) -> bool {
        self.region.contains_coords(x)
    }

    pub fn translate(&self, delta: &Point) -> Result<SmallRep> {
        check_same_dim(self.dim(), delta)?;
        let small = self
            .small
            .iter()
            .map(|p| p.checked_add(delta))
            .collect::<Result<Vec<_>>>()?;
        Ok(SmallRep {
            region: self.region.translate(delta)?,
            small,
        })
    }

    /// Set equality of the represented infinite sets.
    pub fn equals(&self, other: &SmallRep) -> Result<bool> {
        self.region.equals(&other.region)
    }

    pub fn is_subset(&self, other: &SmallRep) -> Result<bool> {
        self.region.is_subset(&other.region)
    }

    /// `0 ∈ E` and `E + E ⊆ E`, on top of the goodness axioms.
    pub fn is_semigroup(&self) -> bool {
        validate_semigroup(self).passed
    }

    pub(crate) fn require_semigroup(&self) -> Result<()> {
        let report = validate_semigroup(self);
        match report.counterexamples.first() {
            None => Ok(()),
            Some(ev) => Err(GsiError::NotSemigroup(format!("{}: {}", ev.label, ev.describe()))),
        }
    }
}

/// Check the goodness axioms and, when `over` is given, compatibility
/// `S + E ⊆ E`. Reports the first failing axiom.
///
/// Order: meet closure (E1), the exchange property (E2), conductor
/// minimality, compatibility. Quantifiers range over `[m, c + e]`; beyond
/// the conductor the membership rule makes every check repeat itself.
pub fn validate(e: &SmallRep, over: Option<&SmallRep>) -> CheckReport {
    let mut report = ReportBuilder::new("validate");
    let r = e.dim();
    let sweep = sweep_box(e.region());
    report.boxed("alpha,beta", &sweep);

    if let Some(ev) = meet_closure_failure(e) {
        report.counterexample(ev);
        return report.finish();
    }
    report.checked((e.small.len() * e.small.len()) as u64);

    if let Some(v) = e2_violations(e.region(), 1).into_iter().next() {
        report.counterexample(v.evidence());
        return report.finish();
    }
    report.checked(sweep.cell_count() as u64);

    let c = e.conductor();
    for k in 0..r {
        let mut below = c.clone();
        below.coords_mut()[k] -= 1;
        if e.contains_coords(below.coords()) {
            report.counterexample(Evidence::new(
                "conductor",
                vec![c.clone(), below],
                vec![k as i64 + 1],
            ));
            return report.finish();
        }
    }

    if let Some(s) = over {
        if let Some(ev) = compatibility_failure(e, s, "compatibility") {
            report.counterexample(ev);
        }
    }
    report.finish()
}

/// [`validate`] plus `0 ∈ E` and `E + E ⊆ E`.
pub fn validate_semigroup(e: &SmallRep) -> CheckReport {
    let base = validate(e, None);
    if !base.passed {
        return base;
    }
    let mut report = ReportBuilder::new("validate");
    for b in &base.universe.boxes {
        report.boxed(b.name.clone(), &b.bounds);
    }
    report.checked(base.universe.points_checked);
    let zero = Point::zero(e.dim());
    if e.min_elem() != &zero {
        report.counterexample(Evidence::new(
            "semigroup",
            vec![e.min_elem().clone()],
            vec![],
        ));
        report.note("a good semigroup has minimum 0");
        return report.finish();
    }
    if let Some(ev) = compatibility_failure(e, e, "semigroup") {
        report.counterexample(ev);
    }
    report.finish()
}

pub(crate) fn sweep_box(set: &RegionSet) -> IntBox {
    let hi = set
        .hi()
        .checked_add(&Point::ones(set.dim()))
        .expect("box corner overflow");
    IntBox::new(set.lo().clone(), hi).expect("lo <= hi")
}

fn meet_closure_failure(e: &SmallRep) -> Option<Evidence> {
    for (i, a) in e.small.iter().enumerate() {
        for b in &e.small[i + 1..] {
            let m = a.meet(b).expect("same dimension");
            if !e.contains_coords(m.coords()) {
                return Some(Evidence::new("E1", vec![a.clone(), b.clone(), m], vec![]));
            }
        }
    }
    None
}

/// `S + E ⊆ E`. Membership of `e + s` depends on `s` only through
/// `min(s, c − m)`, so it is enough to pair the small elements of `E` with
/// the points `t ∈ [0, c − m]` realized as such a clamp of some `s ∈ S`.
fn compatibility_failure(e: &SmallRep, s: &SmallRep, label: &str) -> Option<Evidence> {
    let r = e.dim();
    if s.dim() != r {
        return Some(Evidence::new(
            label,
            vec![],
            vec![r as i64, s.dim() as i64],
        ));
    }
    if !Point::zero(r).leq_unchecked(s.min_elem()) {
        return Some(Evidence::new(label, vec![s.min_elem().clone()], vec![]));
    }
    let span = e.conductor().checked_sub(e.min_elem()).ok()?;
    let classes = IntBox::new(Point::zero(r), span.clone()).ok()?;
    let mut sum = vec![0i64; r];
    for t in classes.points() {
        let fixed = IndexSet::from_mask(
            (0..r)
                .filter(|&k| t.get(k) < span.get(k))
                .fold(0u32, |m, k| m | 1 << k),
        );
        let realized =
            fixed.is_empty() || fiber::closed_witness_raw(s.region(), t.coords(), fixed).is_some();
        if !realized {
            continue;
        }
        for a in &e.small {
            for k in 0..r {
                sum[k] = a.get(k) + t.get(k);
            }
            if !e.contains_coords(&sum) {
                return Some(Evidence::new(
                    label,
                    vec![t.clone(), a.clone(), Point::new(sum.clone())],
                    vec![],
                ));
            }
        }
    }
    None
}

/// A pair `α ≠ β` of members agreeing at coordinate `index` for which no
/// exchange witness exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct E2Violation {
    pub alpha: Point,
    pub beta: Point,
    pub index: usize,
}

impl E2Violation {
    fn evidence(&self) -> Evidence {
        Evidence::new(
            "E2",
            vec![self.alpha.clone(), self.beta.clone()],
            vec![self.index as i64 + 1],
        )
    }

    /// The componentwise-minimal admissible witness, `min(α, β) + e_i`.
    pub fn minimal_witness(&self) -> Point {
        let mut w = self.alpha.meet(&self.beta).expect("same dimension");
        w.coords_mut()[self.index] += 1;
        w
    }
}

/// Scan for E2 failures of a meet-closed set.
///
/// Every pair `α ≠ β` with `α_i = β_i` has `μ = min(α, β)` in the set and
/// splits the coordinates into `A` (where `α = β`), `Dα` (where `α > μ`) and
/// `Dβ` (where `β > μ`). Such a pair exists iff the open fibers
/// `F_{Dα^c}(E, μ)` and `F_{Dβ^c}(E, μ)` are nonempty, and the required
/// witness exists iff `F̄_{Dα ∪ Dβ}(E, μ + e_i)` is nonempty.
pub(crate) fn e2_violations(set: &RegionSet, limit: usize) -> Vec<E2Violation> {
    let r = set.dim();
    let full = IndexSet::full(r);
    let mut out = Vec::new();
    let mut target = vec![0i64; r];
    let codes = 3usize.pow(r as u32);
    for mu in sweep_box(set).points() {
        if !set.contains_coords(mu.coords()) {
            continue;
        }
        for code in 0..codes {
            let (mut da, mut db) = (0u32, 0u32);
            let mut c = code;
            for k in 0..r {
                match c % 3 {
                    1 => da |= 1 << k,
                    2 => db |= 1 << k,
                    _ => {}
                }
                c /= 3;
            }
            let differ = da | db;
            if differ == 0 || differ == full.mask() || da >= db {
                continue;
            }
            let (da, db) = (IndexSet::from_mask(da), IndexSet::from_mask(db));
            let Some(alpha) = pick_partner(set, &mu, da) else {
                continue;
            };
            let Some(beta) = pick_partner(set, &mu, db) else {
                continue;
            };
            let differ = IndexSet::from_mask(differ);
            for i in differ.complement(r).iter() {
                target.copy_from_slice(mu.coords());
                target[i] += 1;
                if fiber::closed_witness_raw(set, &target, differ).is_none() {
                    out.push(E2Violation {
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        index: i,
                    });
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
    }
    out
}

fn pick_partner(set: &RegionSet, mu: &Point, larger: IndexSet) -> Option<Point> {
    if larger.is_empty() {
        return Some(mu.clone());
    }
    fiber::open_witness_raw(set, mu.coords(), larger.complement(set.dim()))
}
