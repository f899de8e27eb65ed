//! Ways to build valid ideals: numerical semigroups, the node, products,
//! explicit data, and seeded random generation. Test fixtures live in
//! [`fixtures`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GsiError, Result};
use crate::fiber;
use crate::good_ideal::{check_same_dim, e2_violations, validate, validate_semigroup, RegionSet, SmallRep};
use crate::grid::Grid;
use crate::lattice::{check_dim_supported, IndexSet, IntBox, Point};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The numerical semigroup generated by `generators`, found by sieving until
/// a run of `min(generators)` consecutive members starts at the conductor.
pub fn numerical(generators: &[i64]) -> Result<SmallRep> {
    if generators.is_empty() || generators.iter().any(|&g| g <= 0) {
        return Err(GsiError::Malformed(
            "generators must be a nonempty list of positive integers".into(),
        ));
    }
    let g = generators.iter().fold(0, |acc, &x| gcd(acc, x));
    if g != 1 {
        return Err(GsiError::Gcd(generators.to_vec(), g));
    }
    let least = *generators.iter().min().unwrap() as usize;
    let mut member = vec![true];
    let mut run = 1usize;
    while run < least {
        let n = member.len();
        let hit = generators
            .iter()
            .any(|&g| (g as usize) <= n && member[n - g as usize]);
        member.push(hit);
        run = if hit { run + 1 } else { 0 };
    }
    let conductor = (member.len() - least) as i64;
    let small = (0..=conductor)
        .filter(|&v| member[v as usize])
        .map(|v| Point::new(vec![v]));
    SmallRep::new(Point::new(vec![0]), Point::new(vec![conductor]), small)
}

/// `{0} ∪ (e + N^r)`; for `r = 1` this is `N` itself.
pub fn node(r: usize) -> Result<SmallRep> {
    check_dim_supported(r)?;
    if r == 1 {
        return SmallRep::new(Point::zero(1), Point::zero(1), [Point::zero(1)]);
    }
    SmallRep::new(Point::zero(r), Point::ones(r), [Point::zero(r), Point::ones(r)])
}

pub fn product(a: &SmallRep, b: &SmallRep) -> Result<SmallRep> {
    let mut small = Vec::with_capacity(a.small_elements().len() * b.small_elements().len());
    for x in a.small_elements() {
        for y in b.small_elements() {
            small.push(x.concat(y)?);
        }
    }
    SmallRep::new(
        a.min_elem().concat(b.min_elem())?,
        a.conductor().concat(b.conductor())?,
        small,
    )
}

/// Validated construction from explicit data in dimension `r`.
pub fn from_small_elements(
    r: usize,
    min: Point,
    conductor: Point,
    elems: impl IntoIterator<Item = Point>,
) -> Result<SmallRep> {
    check_dim_supported(r)?;
    check_same_dim(r, &min)?;
    SmallRep::new(min, conductor, elems)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomBounds {
    /// Upper bound on each coordinate of `c − m`.
    pub max_span: i64,
    /// Probability that a box point is sampled before closure.
    pub density: f64,
    pub retries: u32,
}

impl Default for RandomBounds {
    fn default() -> Self {
        RandomBounds {
            max_span: 8,
            density: 0.15,
            retries: 64,
        }
    }
}

/// Points `t ∈ [0, span]` that arise as `min(s, span)` for some `s ∈ S`.
fn clamp_classes(s: &SmallRep, span: &Point) -> Vec<Point> {
    let r = s.dim();
    IntBox::new(Point::zero(r), span.clone())
        .expect("span is nonnegative")
        .points()
        .filter(|t| {
            let fixed = IndexSet::from_mask(
                (0..r)
                    .filter(|&k| t.get(k) < span.get(k))
                    .fold(0, |m, k| m | 1 << k),
            );
            fixed.is_empty() || fiber::closed_witness_raw(s.region(), t.coords(), fixed).is_some()
        })
        .collect()
}

fn clamp_into(grid: &Grid, x: &mut [i64]) {
    for (k, v) in x.iter_mut().enumerate() {
        *v = (*v).min(grid.hi()[k]);
    }
}

/// Close the grid under the given translations, under meets, and under E2
/// repair, until nothing changes. Additions are clamped to the top corner.
fn close(mut grid: Grid, shifts: impl Fn(&Grid) -> Vec<Point>) -> Grid {
    let r = grid.dim();
    let mut x = vec![0i64; r];
    loop {
        let mut changed = false;
        let members: Vec<Point> = grid.member_indices().map(|i| grid.point_at(i)).collect();
        for t in shifts(&grid) {
            for a in &members {
                for k in 0..r {
                    x[k] = a.get(k) + t.get(k);
                }
                clamp_into(&grid, &mut x);
                let idx = grid.index(&x);
                changed |= grid.set(idx, true);
            }
        }
        let members: Vec<Point> = grid.member_indices().map(|i| grid.point_at(i)).collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                let m = a.meet(b).expect("same dimension");
                let idx = grid.index(m.coords());
                changed |= grid.set(idx, true);
            }
        }
        if changed {
            continue;
        }
        let region = RegionSet::from_grid(grid.clone());
        for v in e2_violations(&region, usize::MAX) {
            let mut w = v.minimal_witness().into_coords();
            clamp_into(&grid, &mut w);
            let idx = grid.index(&w);
            changed |= grid.set(idx, true);
        }
        if !changed {
            return grid;
        }
    }
}

fn random_grid(rng: &mut ChaCha8Rng, lo: Point, bounds: &RandomBounds) -> Result<Grid> {
    let r = lo.dim();
    let span: Vec<i64> = (0..r).map(|_| rng.gen_range(0..=bounds.max_span.max(0))).collect();
    let hi = lo.checked_add(&Point::new(span))?;
    let mut grid = Grid::new(IntBox::new(lo.clone(), hi.clone())?)?;
    for idx in 0..grid.len() {
        if rng.gen_bool(bounds.density.clamp(0.0, 1.0)) {
            grid.set(idx, true);
        }
    }
    grid.set(grid.index(hi.coords()), true);
    grid.set(grid.index(lo.coords()), true);
    Ok(grid)
}

/// A seeded random good ideal over the good semigroup `S`: random points in a
/// box are closed under `S`-translation, meets and E2 repair, then promoted
/// and validated. Deterministic per `(S, seed, bounds)`.
pub fn random_good(s: &SmallRep, seed: u64, bounds: &RandomBounds) -> Result<SmallRep> {
    s.require_semigroup()?;
    let r = s.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..bounds.retries.max(1) {
        let lo = Point::new((0..r).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>());
        let grid = random_grid(&mut rng, lo, bounds)?;
        let grid = close(grid, |g| {
            let span = g.bounds().hi().checked_sub(g.bounds().lo()).expect("span");
            clamp_classes(s, &span)
        });
        let Ok(e) = RegionSet::from_grid(grid).promote() else {
            continue;
        };
        if validate(&e, Some(s)).passed {
            return Ok(e);
        }
    }
    Err(GsiError::RetryBudget(bounds.retries.max(1)))
}

/// A seeded random good semigroup of dimension `r`, built like
/// [`random_good`] but closed under addition of its own elements.
pub fn random_semigroup(r: usize, seed: u64, bounds: &RandomBounds) -> Result<SmallRep> {
    check_dim_supported(r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..bounds.retries.max(1) {
        let grid = random_grid(&mut rng, Point::zero(r), bounds)?;
        let grid = close(grid, |g| {
            g.member_indices().map(|i| g.point_at(i)).collect()
        });
        let Ok(e) = RegionSet::from_grid(grid).promote() else {
            continue;
        };
        if validate_semigroup(&e).passed {
            return Ok(e);
        }
    }
    Err(GsiError::RetryBudget(bounds.retries.max(1)))
}

/// The shipped example ideals, parsed from `fixtures/*.gsi`.
pub mod fixtures {
    use crate::good_ideal::SmallRep;
    use crate::gsi_format::{parse_gsi, parse_gsi_structural};

    pub const N1_GSI: &str = include_str!("../fixtures/N1.gsi");
    pub const N2_GSI: &str = include_str!("../fixtures/N2.gsi");
    pub const NODE2_GSI: &str = include_str!("../fixtures/NODE2.gsi");
    pub const EX2_GSI: &str = include_str!("../fixtures/EX2.gsi");
    pub const EX2_BROKEN_GSI: &str = include_str!("../fixtures/EX2_broken.gsi");

    /// `⟨3, 4, 5⟩`.
    pub fn n1() -> SmallRep {
        parse_gsi(N1_GSI).expect("N1 fixture")
    }

    /// `⟨2, 3⟩`.
    pub fn n2() -> SmallRep {
        parse_gsi(N2_GSI).expect("N2 fixture")
    }

    /// `node(2)`; other dimensions go through [`super::node`].
    pub fn node(r: usize) -> SmallRep {
        if r == 2 {
            parse_gsi(NODE2_GSI).expect("NODE2 fixture")
        } else {
            super::node(r).expect("node")
        }
    }

    /// A two-dimensional good semigroup with conductor `(5, 5)` and three
    /// maximal points.
    pub fn ex2() -> SmallRep {
        parse_gsi(EX2_GSI).expect("EX2 fixture")
    }

    /// `ex2` without `(3, 3)`; structurally fine, fails meet closure.
    pub fn ex2_without_33() -> SmallRep {
        parse_gsi_structural(EX2_BROKEN_GSI).expect("broken fixture").0
    }

    pub fn all() -> Vec<SmallRep> {
        vec![n1(), n2(), node(2), ex2()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn p<const N: usize>(a: [i64; N]) -> Point {
        Point::from(a)
    }

    #[test]
    fn numerical_examples() {
        assert_eq!(numerical(&[2, 3]).unwrap(), fixtures::n2());
        let n1 = numerical(&[3, 4, 5]).unwrap();
        assert_eq!(n1, fixtures::n1());
        assert_eq!(n1.frobenius(), p([2]));
        assert!(matches!(numerical(&[2, 4]), Err(GsiError::Gcd(_, 2))));
        assert!(numerical(&[]).is_err());
        assert_eq!(numerical(&[1]).unwrap(), node(1).unwrap());
    }

    #[test]
    fn numerical_matches_enumeration() {
        for gens in [vec![2, 3], vec![3, 4, 5], vec![5, 7], vec![4, 6, 9], vec![6, 10, 15]] {
            let s = numerical(&gens).unwrap();
            let bound = 3 * s.conductor().get(0);
            let expected = oracle::numerical_members(&gens, bound);
            for v in -2..=bound {
                assert_eq!(s.contains(&p([v])).unwrap(), expected.contains(&v), "{gens:?} {v}");
            }
        }
    }

    #[test]
    fn node_examples() {
        assert_eq!(node(2).unwrap(), fixtures::node(2));
        let n = node(1).unwrap();
        assert_eq!(n.conductor(), &p([0]));
        assert!(n.contains(&p([1])).unwrap() && n.contains(&p([0])).unwrap());
        assert!(node(0).is_err());
    }

    #[test]
    fn product_examples() {
        let n2n2 = product(&fixtures::n2(), &fixtures::n2()).unwrap();
        assert_eq!(n2n2.conductor(), &p([2, 2]));
        assert_eq!(oracle::brute_axioms(&n2n2), Ok(()));
        let pn = product(&fixtures::n1(), &node(1).unwrap()).unwrap();
        assert_eq!(pn.conductor(), &p([3, 0]));
    }

    #[test]
    fn explicit_data() {
        let ex2 = from_small_elements(
            2,
            p([0, 0]),
            p([5, 5]),
            [p([0, 0]), p([3, 3]), p([3, 4]), p([4, 3]), p([5, 5])],
        )
        .unwrap();
        assert_eq!(ex2, fixtures::ex2());
        let err = from_small_elements(
            2,
            p([0, 0]),
            p([5, 5]),
            [p([0, 0]), p([3, 4]), p([4, 3]), p([5, 5])],
        )
        .unwrap_err();
        match err {
            GsiError::Axiom(report) => assert!(report.counterexample("E1").is_some()),
            other => panic!("unexpected {other}"),
        }
        let nat = from_small_elements(1, p([0]), p([0]), [p([0])]).unwrap();
        assert!(nat.contains(&p([5])).unwrap());
        assert!(from_small_elements(3, p([0, 0]), p([0, 0]), [p([0, 0])]).is_err());
    }

    #[test]
    fn random_ideals_are_valid_and_deterministic() {
        let ex2 = fixtures::ex2();
        let b = RandomBounds::default();
        let e = random_good(&ex2, 1, &b).unwrap();
        assert!(validate(&e, Some(&ex2)).passed);
        assert_eq!(random_good(&ex2, 1, &b).unwrap(), e);
        let n1 = fixtures::n1();
        for seed in 0..100 {
            let e = random_good(&n1, seed, &b).unwrap();
            assert!(validate(&e, Some(&n1)).passed);
            assert!(fiber::fiber_empty(&e, &e.frobenius()).unwrap());
        }
    }

    #[test]
    fn random_semigroups_are_semigroups() {
        let b = RandomBounds {
            max_span: 5,
            ..RandomBounds::default()
        };
        for seed in 0..20 {
            let s = random_semigroup(2, seed, &b).unwrap();
            assert!(s.is_semigroup());
            assert_eq!(oracle::brute_axioms(&s), Ok(()));
        }
    }
}
