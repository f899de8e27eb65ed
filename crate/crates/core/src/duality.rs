//! Duals of good semigroup ideals.
//!
//! * [`cd_difference`]: `E_J − E_I = {β : β + E_I ⊆ E_J}`.
//! * [`fiber_dual`]: `{β : F(E_I, 𝔣(E_J) − β) = ∅}`, which contains the
//!   difference and coincides with it when `E_J` is canonical.
//! * [`canonical_ideal`]: `E⁰ = {α : F(S, 𝔣(S) − α) = ∅}`.
//!
//! The difference is computed on the box `[c_J − c_I, c_J − m_I]`. Below it,
//! `β + (c_I + N^r) ⊆ E_J` would put a point with a full upper cone under the
//! conductor of `E_J`; at or above its top, every `β + α` clamps to the same
//! conductor coordinates, so clamp semantics at the top corner is exact.

use crate::error::{GsiError, Result};
use crate::fiber;
use crate::good_ideal::{check_same_dim, validate, RegionSet, SmallRep};
use crate::lattice::{IntBox, Point};

/// `{β : β + B ⊆ A}` as a region, for any `B` with a minimum and a conductor
/// (good or not). Membership is tested against every stored point of `B`;
/// points of `B` beyond its box only add coordinates where `A` is already
/// saturated.
pub fn cd_difference_region<B: AsRef<RegionSet> + ?Sized>(
    a: &SmallRep,
    b: &B,
) -> Result<RegionSet> {
    let b = b.as_ref();
    check_same_dim(a.dim(), b.lo())?;
    let (mb, cb) = region_extremes(b)?;
    let ca = a.conductor();
    let bounds = IntBox::new(ca.checked_sub(cb)?, ca.checked_sub(mb)?)?;
    let members: Vec<Point> = b.members();
    let r = a.dim();
    let mut sum = vec![0i64; r];
    RegionSet::from_fn(bounds, |beta| {
        members.iter().all(|g| {
            for k in 0..r {
                sum[k] = beta.get(k) + g.get(k);
            }
            a.contains_coords(&sum)
        })
    })
}

fn region_extremes(b: &RegionSet) -> Result<(&Point, &Point)> {
    let mb = b
        .minimum()
        .ok_or_else(|| GsiError::NotRepresentable("the divisor has no minimum".into()))?;
    let cb = b
        .conductor()
        .ok_or_else(|| GsiError::NotRepresentable("the divisor has no conductor".into()))?;
    Ok((mb, cb))
}

/// The difference `E_J − E_I` as a validated ideal. Fails if the difference
/// is not good.
pub fn cd_difference(ej: &SmallRep, ei: &SmallRep) -> Result<SmallRep> {
    cd_difference_region(ej, ei)?.promote()
}

/// `E_J − (E_J − E_I)`; always contains `E_I`.
pub fn bidual(ej: &SmallRep, ei: &SmallRep) -> Result<SmallRep> {
    bidual_region(ej, ei)?.promote()
}

pub fn bidual_region(ej: &SmallRep, ei: &SmallRep) -> Result<RegionSet> {
    let d = cd_difference_region(ej, ei)?;
    cd_difference_region(ej, &d)
}

/// Outcome of the fiber formula. The region is always available; goodness is
/// not guaranteed, so promotion may fail.
#[derive(Clone, Debug)]
pub struct FiberDual {
    pub region: RegionSet,
    pub ideal: Option<SmallRep>,
    pub promotion_error: Option<String>,
}

/// `{β : F(B, f − β) = ∅}` over `bounds`.
fn fiber_formula<B: AsRef<RegionSet> + ?Sized>(b: &B, f: &Point, bounds: IntBox) -> Result<RegionSet> {
    let b = b.as_ref();
    let r = b.dim();
    let mut gamma = vec![0i64; r];
    RegionSet::from_fn(bounds, |beta| {
        for k in 0..r {
            gamma[k] = f.get(k) - beta.get(k);
        }
        fiber::fiber_empty_raw(b, &gamma)
    })
}

/// `{β : F(E_I, 𝔣(E_J) − β) = ∅}` on `[c_J − c_I, c_J − m_I]`. Below that box
/// `F_k` has a witness above the conductor of `E_I`; at its top every `F_i`
/// either starts below `min(E_I)` or no longer sees the coordinate.
pub fn fiber_dual<B: AsRef<RegionSet> + ?Sized>(ej: &SmallRep, ei: &B) -> Result<FiberDual> {
    let b = ei.as_ref();
    check_same_dim(ej.dim(), b.lo())?;
    let (mb, cb) = region_extremes(b)?;
    let cj = ej.conductor();
    let bounds = IntBox::new(cj.checked_sub(cb)?, cj.checked_sub(mb)?)?;
    let region = fiber_formula(b, &ej.frobenius(), bounds)?;
    let (ideal, promotion_error) = match region.promote() {
        Ok(e) => (Some(e), None),
        Err(err) => (None, Some(err.to_string())),
    };
    Ok(FiberDual {
        region,
        ideal,
        promotion_error,
    })
}

/// The canonical ideal `E⁰` of a good semigroup.
///
/// Computed on `[m − (c − m) − e, c]`; a member on the lower face would mean
/// the box was too small and raises [`GsiError::BoundaryInstability`]. The
/// result is checked to keep the Frobenius vector, contain `S`, and be an
/// `S`-ideal.
pub fn canonical_ideal(s: &SmallRep) -> Result<SmallRep> {
    s.require_semigroup()?;
    let (m, c) = (s.min_elem(), s.conductor());
    let r = s.dim();
    let lo = m
        .checked_sub(&c.checked_sub(m)?)?
        .checked_sub(&Point::ones(r))?;
    let region = fiber_formula(s, &s.frobenius(), IntBox::new(lo.clone(), c.clone())?)?;
    if let Some(p) = region
        .members()
        .into_iter()
        .find(|p| (0..r).any(|k| p.get(k) == lo.get(k)))
    {
        return Err(GsiError::BoundaryInstability(p.to_string()));
    }
    let e0 = region.promote()?;
    if e0.frobenius() != s.frobenius() {
        return Err(GsiError::Soundness(format!(
            "canonical ideal has Frobenius vector {} instead of {}",
            e0.frobenius(),
            s.frobenius()
        )));
    }
    if let Some(p) = s.region().first_excess(e0.region())? {
        return Err(GsiError::Soundness(format!(
            "semigroup element {p} is missing from the canonical ideal"
        )));
    }
    let report = validate(&e0, Some(s));
    if !report.passed {
        return Err(GsiError::Soundness(format!(
            "canonical ideal fails validation: {}",
            report
                .counterexamples
                .first()
                .map(|ev| format!("{} {}", ev.label, ev.describe()))
                .unwrap_or_default()
        )));
    }
    Ok(e0)
}

/// A good semigroup with its canonical ideal, for repeated canonicity tests.
#[derive(Clone, Debug)]
pub struct SemigroupContext {
    pub semigroup: SmallRep,
    pub canonical: SmallRep,
}

impl SemigroupContext {
    pub fn new(s: &SmallRep) -> Result<Self> {
        Ok(SemigroupContext {
            canonical: canonical_ideal(s)?,
            semigroup: s.clone(),
        })
    }

    /// `E_J` is canonical iff it is the translate of `E⁰` by
    /// `𝔣(E_J) − 𝔣(S)`. Cross-checked against `fiber_dual(E_J, S) = E_J`.
    pub fn is_canonical(&self, ej: &SmallRep) -> Result<bool> {
        check_same_dim(self.semigroup.dim(), ej.min_elem())?;
        let delta = ej.frobenius().checked_sub(&self.semigroup.frobenius())?;
        let by_translate = ej.equals(&self.canonical.translate(&delta)?)?;
        let by_fibers = fiber_dual(ej, &self.semigroup)?.region.equals(ej.region())?;
        if by_translate != by_fibers {
            return Err(GsiError::Soundness(format!(
                "canonicity tests disagree for an ideal with conductor {}: translate {by_translate}, fiber formula {by_fibers}",
                ej.conductor()
            )));
        }
        Ok(by_translate)
    }

    pub fn is_gorenstein(&self) -> Result<bool> {
        self.semigroup.equals(&self.canonical)
    }
}

pub fn is_canonical(ej: &SmallRep, s: &SmallRep) -> Result<bool> {
    SemigroupContext::new(s)?.is_canonical(ej)
}

/// `S` is Gorenstein (symmetric) iff it equals its canonical ideal.
pub fn is_gorenstein(s: &SmallRep) -> Result<bool> {
    SemigroupContext::new(s)?.is_gorenstein()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{fixtures, node};
    use crate::oracle;

    fn p<const N: usize>(a: [i64; N]) -> Point {
        Point::from(a)
    }

    #[test]
    fn difference_examples() {
        let (n1, n2) = (fixtures::n1(), fixtures::n2());
        assert_eq!(cd_difference(&n2, &n2).unwrap(), n2);
        assert_eq!(cd_difference(&n1, &n1).unwrap(), n1);
        let k1 = canonical_ideal(&n1).unwrap();
        let d = cd_difference(&k1, &n1).unwrap();
        assert!(oracle::disagreements(&d, &oracle::brute_dual(&k1, &n1)).is_empty());
        assert_eq!(d, k1);
    }

    #[test]
    fn fiber_dual_examples() {
        let (n1, n2, ex2) = (fixtures::n1(), fixtures::n2(), fixtures::ex2());
        assert_eq!(fiber_dual(&n2, &n2).unwrap().ideal.unwrap(), n2);
        let f = fiber_dual(&n1, &n1).unwrap();
        let got: Vec<i64> = (-3..8).filter(|&v| f.region.contains(&p([v])).unwrap()).collect();
        assert_eq!(got, vec![0, 1, 3, 4, 5, 6, 7]);
        let f = fiber_dual(&ex2, &ex2).unwrap();
        assert!(f.region.contains(&p([4, 4])).unwrap());
        assert!(ex2.region().is_subset(&f.region).unwrap());
        assert!(!ex2.contains(&p([4, 4])).unwrap());
    }

    #[test]
    fn canonical_examples() {
        let n1 = fixtures::n1();
        let k1 = canonical_ideal(&n1).unwrap();
        assert_eq!(k1.small_elements(), &[p([0]), p([1]), p([3])]);
        assert_eq!(k1.conductor(), &p([3]));
        let n2 = fixtures::n2();
        assert_eq!(canonical_ideal(&n2).unwrap(), n2);
        assert_eq!(canonical_ideal(&fixtures::node(2)).unwrap(), fixtures::node(2));
        assert!(matches!(
            canonical_ideal(&n2.translate(&p([1])).unwrap()),
            Err(GsiError::NotSemigroup(_))
        ));
    }

    #[test]
    fn canonicity_examples() {
        let (n1, ex2) = (fixtures::n1(), fixtures::ex2());
        let k = canonical_ideal(&ex2).unwrap();
        assert!(is_canonical(&k, &ex2).unwrap());
        assert!(!is_canonical(&ex2, &ex2).unwrap());
        assert!(k.contains(&p([4, 4])).unwrap());
        let k1 = canonical_ideal(&n1).unwrap().translate(&p([7])).unwrap();
        assert!(is_canonical(&k1, &n1).unwrap());
    }

    #[test]
    fn gorenstein_examples() {
        assert!(is_gorenstein(&fixtures::n2()).unwrap());
        assert!(!is_gorenstein(&fixtures::n1()).unwrap());
        assert!(is_gorenstein(&fixtures::node(2)).unwrap());
        // Three coordinate axes: (1,0,0) has empty union fiber at 𝔣 − α.
        let node3 = node(3).unwrap();
        assert!(!is_gorenstein(&node3).unwrap());
        let k3 = canonical_ideal(&node3).unwrap();
        assert!(k3.contains(&p([1, 0, 0])).unwrap());
        assert!(oracle::disagreements(&k3, &oracle::brute_canonical(&node3)).is_empty());
        assert!(!is_gorenstein(&fixtures::ex2()).unwrap());
    }

    #[test]
    fn bidual_examples() {
        let (n1, n2, ex2) = (fixtures::n1(), fixtures::n2(), fixtures::ex2());
        let k1 = canonical_ideal(&n1).unwrap();
        assert_eq!(bidual(&k1, &n1).unwrap(), n1);
        assert_eq!(bidual(&n2, &n2).unwrap(), n2);
        assert!(ex2.region().is_subset(&bidual_region(&ex2, &ex2).unwrap()).unwrap());
    }

    #[test]
    fn subset_against_canonical() {
        let n2 = fixtures::n2();
        let k2 = canonical_ideal(&n2).unwrap();
        assert!(n2.is_subset(&k2).unwrap() && n2.equals(&k2).unwrap());
        let n1 = fixtures::n1();
        let k1 = canonical_ideal(&n1).unwrap();
        assert!(n1.is_subset(&k1).unwrap());
        assert!(!n1.equals(&k1).unwrap());
    }

    #[test]
    fn translate_covariance() {
        let ex2 = fixtures::ex2();
        let k = canonical_ideal(&ex2).unwrap();
        let delta = p([-2, 3]);
        let lhs = cd_difference(&k.translate(&delta).unwrap(), &ex2).unwrap();
        let rhs = cd_difference(&k, &ex2).unwrap().translate(&delta).unwrap();
        assert!(lhs.equals(&rhs).unwrap());
    }
}
