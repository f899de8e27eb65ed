//! Executable checks of the duality theorems. Each check sweeps a finite box,
//! records counterexamples to the unconditional claims, and flags whether the
//! equality case held everywhere.
//!
//! Throughout, `D = E_J − E_I` is kept as a region: it is meet-closed with a
//! conductor, but nothing guarantees it is good when `E_J` is not canonical.

use crate::constructors::{random_good, RandomBounds};
use crate::duality::{cd_difference_region, fiber_dual, SemigroupContext};
use crate::error::{GsiError, Result};
use crate::fiber::{self, closed_witness_raw, fiber_empty_raw, pq_raw};
use crate::good_ideal::{check_same_dim, RegionSet, SmallRep};
use crate::lattice::{IndexSet, IntBox, Point};
use crate::report::{CheckReport, Evidence, ReportBuilder, ReportBundle};

fn widen(b: &IntBox, by: i64) -> Result<IntBox> {
    let r = b.dim();
    let e = Point::new(vec![by; r]);
    IntBox::new(b.lo().checked_sub(&e)?, b.hi().checked_add(&e)?)
}

fn hull(a: &IntBox, b: &IntBox) -> Result<IntBox> {
    IntBox::new(a.lo().meet(b.lo())?, a.hi().join(b.hi())?)
}

fn sub_raw(a: &Point, b: &[i64]) -> Vec<i64> {
    a.coords().iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `1` iff `F̄_i(E, α) ≠ ∅`; `i` is 1-based.
pub fn length_step<E: AsRef<RegionSet> + ?Sized>(e: &E, alpha: &Point, i: usize) -> Result<u8> {
    let set = e.as_ref();
    check_same_dim(set.dim(), alpha)?;
    if i == 0 || i > set.dim() {
        return Err(GsiError::IndexOutOfRange {
            index: i,
            dim: set.dim(),
        });
    }
    Ok(u8::from(
        closed_witness_raw(set, alpha.coords(), IndexSet::single(i - 1)).is_some(),
    ))
}

fn dual(ej: &SmallRep, ei: &SmallRep) -> Result<RegionSet> {
    check_same_dim(ej.dim(), ei.min_elem())?;
    cd_difference_region(ej, ei)
}

fn canonical_flag(b: &mut ReportBuilder, ctx: Option<&SemigroupContext>, ej: &SmallRep) -> Result<Option<bool>> {
    let Some(ctx) = ctx else {
        return Ok(None);
    };
    let c = ctx.is_canonical(ej)?;
    b.flag("is_canonical", c);
    Ok(Some(c))
}

/// `E_I + (E_J − E_I) ⊆ E_J`.
pub fn check_sum(ej: &SmallRep, ei: &SmallRep) -> Result<CheckReport> {
    let d = dual(ej, ei)?;
    let mut b = ReportBuilder::new("sum");
    let beta_box = widen(d.bounds(), 1)?;
    let alpha_box = widen(ei.region().bounds(), 1)?;
    b.boxed("alpha", &alpha_box).boxed("beta", &beta_box);
    let alphas: Vec<Point> = alpha_box.points().filter(|a| ei.contains_coords(a.coords())).collect();
    let r = ej.dim();
    let mut sum = vec![0i64; r];
    let mut checked = 0u64;
    for beta in beta_box.points() {
        if !d.contains_coords(beta.coords()) {
            continue;
        }
        for a in &alphas {
            for k in 0..r {
                sum[k] = a.get(k) + beta.get(k);
            }
            checked += 1;
            if !ej.contains_coords(&sum) {
                b.counterexample(Evidence::new("sum", vec![a.clone(), beta.clone()], vec![]));
            }
        }
    }
    b.checked(checked);
    Ok(b.finish())
}

/// `E_J − E_I ⊆ {β : F(E_I, 𝔣(E_J) − β) = ∅}`; the equality flag records
/// whether the two sets coincide.
pub fn check_fibra(ej: &SmallRep, ei: &SmallRep) -> Result<CheckReport> {
    let d = dual(ej, ei)?;
    let f = fiber_dual(ej, ei)?.region;
    let mut b = ReportBuilder::new("fibra");
    let bounds = hull(d.bounds(), f.bounds())?;
    let bounds = widen(&bounds, 1)?;
    b.boxed("beta", &bounds).checked(bounds.cell_count() as u64);
    let mut equal = true;
    for beta in bounds.points() {
        let (in_d, in_f) = (d.contains_coords(beta.coords()), f.contains_coords(beta.coords()));
        if in_d && !in_f {
            b.counterexample(Evidence::new("fibra", vec![beta], vec![]));
        } else if in_f && !in_d {
            if equal {
                b.witness(Evidence::new("strict", vec![beta], vec![]));
            }
            equal = false;
        }
    }
    b.flag("equality_everywhere", equal);
    Ok(b.finish())
}

/// Difference versus fiber formula. With a semigroup context: a canonical
/// `E_J` must give equality, and a non-canonical one must have
/// `fiber_dual(E_J, S) ⊋ E_J`, witnessed by a point.
pub fn check_duality(ej: &SmallRep, ei: &SmallRep, ctx: Option<&SemigroupContext>) -> Result<CheckReport> {
    let base = check_fibra(ej, ei)?;
    let mut b = ReportBuilder::new("duality");
    for nb in &base.universe.boxes {
        b.boxed(nb.name.clone(), &nb.bounds);
    }
    b.checked(base.universe.points_checked);
    for ev in base.counterexamples.iter().chain(&base.witnesses) {
        if ev.label == "strict" {
            b.witness(ev.clone());
        } else {
            b.counterexample(ev.clone());
        }
    }
    let equal = base.equality_everywhere().unwrap_or(false);
    b.flag("equality_everywhere", equal);
    if let Some(canonical) = canonical_flag(&mut b, ctx, ej)? {
        let s = &ctx.expect("context").semigroup;
        if canonical && !equal {
            b.counterexample(Evidence::new(
                "canonical_without_equality",
                base.witnesses.iter().flat_map(|w| w.points.clone()).take(1).collect(),
                vec![],
            ));
        }
        if !canonical {
            let f = fiber_dual(ej, s)?.region;
            if let Some(extra) = f.first_excess(ej.region())? {
                b.witness(Evidence::new("noncanonical", vec![extra], vec![]));
            } else {
                b.counterexample(Evidence::new("noncanonical_without_witness", vec![], vec![]));
            }
            if let Some(missing) = ej.region().first_excess(&f)? {
                b.counterexample(Evidence::new("fiber_dual_misses_ideal", vec![missing], vec![]));
            }
        }
    }
    Ok(b.finish())
}

/// `ℓ_i(E_I, α) + ℓ_i(D, c_J − α − e_i) ≤ 1` over `[m_I − e, c_J − m_D + e]`,
/// where `ℓ_i` is [`length_step`]. Gaps (sum 0) are recorded as `strict`.
pub fn check_length_pairing(ej: &SmallRep, ei: &SmallRep) -> Result<CheckReport> {
    check_length_in(ej, ei, None)
}

pub fn check_length_pairing_in(
    ej: &SmallRep,
    ei: &SmallRep,
    ctx: &SemigroupContext,
) -> Result<CheckReport> {
    check_length_in(ej, ei, Some(ctx))
}

fn check_length_in(ej: &SmallRep, ei: &SmallRep, ctx: Option<&SemigroupContext>) -> Result<CheckReport> {
    let d = dual(ej, ei)?;
    let r = ej.dim();
    let md = d.minimum().unwrap_or(d.lo()).clone();
    let one = Point::ones(r);
    let sweep = IntBox::new(
        ei.min_elem().checked_sub(&one)?,
        ej.conductor().checked_sub(&md)?.checked_add(&one)?,
    )?;
    let mut b = ReportBuilder::new("length");
    b.boxed("alpha", &sweep).checked(sweep.cell_count() as u64 * r as u64);
    let cj = ej.conductor();
    let mut equal = true;
    for a in sweep.points() {
        let beta = sub_raw(cj, a.coords());
        for i in 0..r {
            let single = IndexSet::single(i);
            let x = u8::from(closed_witness_raw(ei.region(), a.coords(), single).is_some());
            let mut shifted = beta.clone();
            shifted[i] -= 1;
            let y = u8::from(closed_witness_raw(&d, &shifted, single).is_some());
            match x + y {
                2 => {
                    b.counterexample(Evidence::new("length", vec![a.clone()], vec![i as i64 + 1]));
                }
                0 => {
                    equal = false;
                    b.witness(Evidence::new("strict", vec![a.clone()], vec![i as i64 + 1]));
                }
                _ => {}
            }
        }
    }
    b.flag("equality_everywhere", equal);
    if canonical_flag(&mut b, ctx, ej)? == Some(true) && !equal {
        b.counterexample(Evidence::new("canonical_without_equality", vec![], vec![]));
    }
    Ok(b.finish())
}

/// `ρ_J(I, α) = p(E_I, α) + q(E_J − E_I, 𝔣(E_J) − α) − 1`.
pub fn rho(ei: &SmallRep, ej: &SmallRep, alpha: &Point) -> Result<i64> {
    check_same_dim(ei.dim(), alpha)?;
    let d = dual(ej, ei)?;
    Ok(rho_with(ei.region(), &d, &ej.frobenius(), alpha.coords()))
}

fn rho_with(ei: &RegionSet, d: &RegionSet, fj: &Point, alpha: &[i64]) -> i64 {
    let (p, _) = pq_raw(ei, alpha);
    let (_, q) = pq_raw(d, &sub_raw(fj, alpha));
    p as i64 + q as i64 - 1
}

/// `ρ_J(I, α) ≥ r` over `[m_I − e, c_I + e]`; `strict` witnesses mark `ρ > r`.
pub fn check_rho(ei: &SmallRep, ej: &SmallRep, ctx: Option<&SemigroupContext>) -> Result<CheckReport> {
    let d = dual(ej, ei)?;
    let r = ei.dim() as i64;
    let fj = ej.frobenius();
    let sweep = widen(ei.region().bounds(), 1)?;
    let mut b = ReportBuilder::new("rho");
    b.boxed("alpha", &sweep).checked(sweep.cell_count() as u64);
    let mut equal = true;
    for a in sweep.points() {
        let value = rho_with(ei.region(), &d, &fj, a.coords());
        if value < r {
            b.counterexample(Evidence::new("rho", vec![a], vec![value]));
        } else if value > r {
            equal = false;
            b.witness(Evidence::new("strict", vec![a], vec![value]));
        }
    }
    b.flag("equality_everywhere", equal);
    if canonical_flag(&mut b, ctx, ej)? == Some(true) && !equal {
        b.counterexample(Evidence::new("canonical_without_equality", vec![], vec![]));
    }
    Ok(b.finish())
}

/// Maximal points of `E_I` against maximal points of `D = E_J − E_I` under
/// `α ↦ 𝔣(E_J) − α`.
///
/// Where both memberships hold, maximality must agree and the dual type must
/// be `(p′, q′)` with `p′ = ρ_J(D, 𝔣(E_J) − α) + 1 − q(E_J − D, α)` and
/// `q′ = ρ_J(I, α) + 1 − p(E_I, α)`. Points where only one side is a member
/// but some side is maximal are listed as `skipped`. With a context in which
/// `E_J` is canonical, the pairing must hold unconditionally, types map by
/// `(p, q) ↦ (r + 1 − q, r + 1 − p)`, and `E_J − D = E_I`.
pub fn check_maximal_symmetry(
    ei: &SmallRep,
    ej: &SmallRep,
    ctx: Option<&SemigroupContext>,
) -> Result<CheckReport> {
    let d = dual(ej, ei)?;
    let bd = cd_difference_region(ej, &d)?;
    let r = ei.dim();
    let fj = ej.frobenius();
    let mut b = ReportBuilder::new("maxsym");
    let canonical = canonical_flag(&mut b, ctx, ej)?.unwrap_or(false);
    let mirrored = IntBox::new(
        fj.checked_sub(d.hi())?,
        fj.checked_sub(d.lo())?,
    )?;
    let sweep = hull(&widen(ei.region().bounds(), 1)?, &widen(&mirrored, 1)?)?;
    b.boxed("alpha", &sweep).checked(sweep.cell_count() as u64);
    let (mut pairs, mut skipped) = (0i64, 0i64);
    for a in sweep.points() {
        let g = sub_raw(&fj, a.coords());
        let in_i = ei.contains_coords(a.coords());
        let in_d = d.contains_coords(&g);
        let max_i = in_i && fiber_empty_raw(ei.region(), a.coords());
        let max_d = in_d && fiber_empty_raw(&d, &g);
        let gp = Point::new(g.clone());
        if in_i && in_d {
            if max_i != max_d {
                b.counterexample(Evidence::new(
                    "pairing",
                    vec![a.clone(), gp.clone()],
                    vec![i64::from(max_i), i64::from(max_d)],
                ));
            }
        } else if max_i || max_d {
            skipped += 1;
            b.witness(Evidence::new(
                "skipped",
                vec![a.clone(), gp.clone()],
                vec![i64::from(max_i), i64::from(max_d)],
            ));
            if canonical {
                b.counterexample(Evidence::new(
                    "unconditional_pairing",
                    vec![a.clone(), gp.clone()],
                    vec![i64::from(max_i), i64::from(max_d)],
                ));
            }
        }
        if !(max_i && max_d) {
            continue;
        }
        pairs += 1;
        let (p, q) = pq_raw(ei.region(), a.coords());
        let (pd, qd) = pq_raw(&d, &g);
        let rho_d = {
            let (p_d, _) = pq_raw(&d, &g);
            let (_, q_b) = pq_raw(&bd, a.coords());
            p_d as i64 + q_b as i64 - 1
        };
        let (_, q_b) = pq_raw(&bd, a.coords());
        let p_formula = rho_d + 1 - q_b as i64;
        let q_formula = rho_with(ei.region(), &d, &fj, a.coords()) + 1 - p as i64;
        let values = vec![p as i64, q as i64, pd as i64, qd as i64];
        if (pd as i64, qd as i64) != (p_formula, q_formula) {
            b.counterexample(Evidence::new("type", vec![a.clone(), gp.clone()], values.clone()));
        }
        if canonical && (pd, qd) != (r + 1 - q, r + 1 - p) {
            b.counterexample(Evidence::new("type_map", vec![a.clone(), gp.clone()], values.clone()));
        }
        b.witness(Evidence::new("pair", vec![a, gp], values));
    }
    if canonical {
        if let Some((pt, _, _)) = bd.first_difference(ei.region())? {
            b.counterexample(Evidence::new("bidual", vec![pt], vec![]));
        }
    }
    b.note(format!("paired maximals: {pairs}; skipped: {skipped}"));
    b.flag("all_pairs_checked", skipped == 0);
    Ok(b.finish())
}

/// `F(E, 𝔣(E)) = ∅` for each listed ideal.
pub fn check_eq3<'a>(ideals: impl IntoIterator<Item = (&'a str, &'a SmallRep)>) -> CheckReport {
    let mut b = ReportBuilder::new("eq3");
    for (name, e) in ideals {
        b.checked(1);
        if !fiber::fiber_empty(e, &e.frobenius()).expect("own dimension") {
            b.counterexample(Evidence::new(name, vec![e.frobenius()], vec![]));
        }
    }
    b.finish()
}

/// The ideals over which "for every ideal" equality claims are sampled: `S`,
/// `E_I`, `E_I + e`, `E⁰`, and two random ideals.
pub fn sample_family(ctx: &SemigroupContext, ei: &SmallRep, seed: u64) -> Result<Vec<(String, SmallRep)>> {
    let s = &ctx.semigroup;
    let r = s.dim();
    let bounds = RandomBounds {
        max_span: if r >= 3 { 4 } else { 6 },
        ..RandomBounds::default()
    };
    let mut fam = vec![
        ("S".to_string(), s.clone()),
        ("I".to_string(), ei.clone()),
        ("I+e".to_string(), ei.translate(&Point::ones(r))?),
        ("canonical".to_string(), ctx.canonical.clone()),
    ];
    for k in 0..2 {
        fam.push((format!("random{k}"), random_good(s, seed.wrapping_add(k), &bounds)?));
    }
    Ok(fam)
}

/// Every check on `(E_J, E_I)`, plus family-level equality statements:
/// `E_J` canonical iff length pairing, `ρ = r` and the duality equality hold
/// for every sampled ideal, and `S` Gorenstein iff the same holds with
/// `E_J = S`.
pub fn check_all(s: &SmallRep, ej: &SmallRep, ei: &SmallRep, seed: u64) -> Result<ReportBundle> {
    let ctx = SemigroupContext::new(s)?;
    let mut reports = vec![
        check_sum(ej, ei)?,
        check_fibra(ej, ei)?,
        check_duality(ej, ei, Some(&ctx))?,
        check_length_in(ej, ei, Some(&ctx))?,
        check_rho(ei, ej, Some(&ctx))?,
        check_maximal_symmetry(ei, ej, Some(&ctx))?,
    ];
    let family = sample_family(&ctx, ei, seed)?;
    reports.push(family_report("canonicity", &ctx, ej, &family, seed)?);
    reports.push(family_report("gorenstein", &ctx, s, &family, seed)?);
    let mut eq3: Vec<(&str, &SmallRep)> = vec![("J", ej), ("I", ei), ("S", s), ("canonical", &ctx.canonical)];
    eq3.extend(family.iter().map(|(n, e)| (n.as_str(), e)));
    reports.push(check_eq3(eq3));
    Ok(ReportBundle::new("all", reports))
}

fn family_report(
    name: &str,
    ctx: &SemigroupContext,
    ej: &SmallRep,
    family: &[(String, SmallRep)],
    seed: u64,
) -> Result<CheckReport> {
    let mut b = ReportBuilder::new(name);
    b.seed(seed);
    let target = if name == "gorenstein" {
        ctx.is_gorenstein()?
    } else {
        ctx.is_canonical(ej)?
    };
    b.flag(if name == "gorenstein" { "is_gorenstein" } else { "is_canonical" }, target);
    let (mut length_eq, mut rho_eq, mut dual_eq) = (true, true, true);
    for (label, ei) in family {
        let reports = [
            check_sum(ej, ei)?,
            check_fibra(ej, ei)?,
            check_length_in(ej, ei, Some(ctx))?,
            check_rho(ei, ej, Some(ctx))?,
        ];
        for rep in &reports {
            b.checked(rep.universe.points_checked);
            for ev in &rep.counterexamples {
                b.counterexample(Evidence::new(
                    format!("{label}:{}:{}", rep.check_name, ev.label),
                    ev.points.clone(),
                    ev.values.clone(),
                ));
            }
        }
        let [_, fibra, length, rho] = &reports;
        dual_eq &= fibra.equality_everywhere().unwrap_or(false);
        length_eq &= length.equality_everywhere().unwrap_or(false);
        rho_eq &= rho.equality_everywhere().unwrap_or(false);
        b.note(format!(
            "{label}: duality {} length {} rho {}",
            fibra.equality_everywhere().unwrap_or(false),
            length.equality_everywhere().unwrap_or(false),
            rho.equality_everywhere().unwrap_or(false),
        ));
    }
    b.flag("duality_equality", dual_eq)
        .flag("length_equality", length_eq)
        .flag("rho_equality", rho_eq)
        .flag("equality_everywhere", length_eq && rho_eq && dual_eq);
    for (flag, value) in [("duality", dual_eq), ("length", length_eq), ("rho", rho_eq)] {
        if value != target {
            b.counterexample(Evidence::new(
                format!("{flag}_disagrees"),
                vec![],
                vec![i64::from(value), i64::from(target)],
            ));
        }
    }
    Ok(b.finish())
}
