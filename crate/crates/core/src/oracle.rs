//! Independent verification machinery: Monte Carlo volumes from membership
//! tests, exact simplex and triangulation measures, a brute-force convex hull,
//! and gauge evaluation by bisection.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;

use crate::arith::{factorial, to_f64, BigRational};
use crate::combinatorics::{Inequality, PolytopeRep};
use crate::error::{domain, Error, Result};
use crate::face_lattice::{build_incidence, enumerate_faces_with_guard, FaceLattice};
use crate::linalg::{affine_basis, affine_dim, determinant, dot, normal_vector};
use crate::surd::SurdValue;

/// Largest dimension handled by the triangulation oracles.
pub const MAX_TRIANGULATION_DIM: usize = 6;

/// Number of Monte Carlo workers. Fixed so results do not depend on the host.
pub const MC_WORKERS: u64 = 8;

pub const MIN_MC_SAMPLES: u64 = 10_000;

/// xorshift64* generator.
///
/// Seeding: `state = splitmix64(seed)`, replaced by `0x9E3779B97F4A7C15` if zero.
/// Step: `x ^= x >> 12; x ^= x << 25; x ^= x >> 27; out = x * 0x2545F4914F6CDD1D`
/// (wrapping). A uniform double in `[0, 1)` is `(out >> 11) * 2^-53`.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = match splitmix64(seed) {
            0 => 0x9E37_79B9_7F4A_7C15,
            s => s,
        };
        XorShift64Star { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
}

impl McEstimate {
    /// `|estimate - exact|` in units of the standard error.
    pub fn z_score(&self, exact: f64) -> f64 {
        if self.stderr == 0.0 {
            if (self.estimate - exact).abs() <= 1e-12 * exact.abs().max(1.0) {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.estimate - exact).abs() / self.stderr
        }
    }
}

/// Uniform sampling of `[-w, w]^d`; hit fraction times the box volume.
///
/// Work is split over [`MC_WORKERS`] threads, worker `i` seeded with `seed + i`;
/// hit counts are merged in worker order, so the result is reproducible.
/// `member` builds a fresh predicate per worker (it may keep scratch buffers).
pub fn monte_carlo_volume<F, P>(
    make_member: F,
    d: usize,
    box_halfwidth: f64,
    samples: u64,
    seed: u64,
) -> Result<McEstimate>
where
    F: Fn() -> P + Sync,
    P: FnMut(&[f64]) -> bool,
{
    if samples < MIN_MC_SAMPLES {
        return Err(domain(format!(
            "Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {samples}"
        )));
    }
    if d == 0 || !(box_halfwidth > 0.0) {
        return Err(domain(
            "Monte Carlo needs d >= 1 and a positive box half-width",
        ));
    }
    let hits: Vec<u64> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..MC_WORKERS)
            .map(|worker| {
                let share = samples / MC_WORKERS + u64::from(worker < samples % MC_WORKERS);
                let make_member = &make_member;
                scope.spawn(move || {
                    let mut rng = XorShift64Star::new(seed.wrapping_add(worker));
                    let mut member = make_member();
                    let mut point = vec![0.0; d];
                    let mut hits = 0u64;
                    for _ in 0..share {
                        for c in point.iter_mut() {
                            *c = box_halfwidth * (2.0 * rng.next_f64() - 1.0);
                        }
                        hits += u64::from(member(&point));
                    }
                    hits
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("Monte Carlo worker panicked"))
            .collect()
    });
    let hits: u64 = hits.iter().sum();
    let box_volume = (2.0 * box_halfwidth).powi(d as i32);
    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: p * box_volume,
        stderr: (p * (1.0 - p) / samples as f64).sqrt() * box_volume,
        hits,
        samples,
    })
}

/// `m`-volume of the simplex on `m + 1` points: `sqrt(det(GᵀG)) / m!` with `G`
/// the matrix of edge vectors from the first point. Degenerate input gives zero.
pub fn simplex_measure(vertices: &[Vec<BigRational>]) -> SurdValue {
    let Some((origin, rest)) = vertices.split_first() else {
        return SurdValue::zero();
    };
    if rest.is_empty() {
        // A point has unit 0-volume.
        return SurdValue::rational(BigRational::from_integer(1.into()));
    }
    let edges: Vec<Vec<BigRational>> = rest
        .iter()
        .map(|v| v.iter().zip(origin).map(|(a, b)| a - b).collect())
        .collect();
    let gram: Vec<Vec<BigRational>> = edges
        .iter()
        .map(|a| edges.iter().map(|b| dot(a, b)).collect())
        .collect();
    let det = determinant(gram);
    if !det.is_positive() {
        return SurdValue::zero();
    }
    let m = rest.len() as u64;
    SurdValue::sqrt_rational(&det).scale(&BigRational::from_integer(factorial(m)).recip())
}

/// Coordinates of `points` in an affine chart of their hull: the differences
/// to the first point restricted to the pivot columns of an echelon basis.
/// The map is an affine bijection of the hull onto `Q^m`, so it preserves the
/// face structure.
fn chart(points: &[Vec<BigRational>]) -> (usize, Vec<Vec<BigRational>>) {
    let basis = affine_basis(points.iter().map(Vec::as_slice));
    let pivots = basis.pivots();
    let coords = points
        .iter()
        .map(|p| pivots.iter().map(|&c| p[c].clone()).collect())
        .collect();
    (basis.rank(), coords)
}

/// Facet inequalities of the hull of full-dimensional `points` in `Q^m`, by
/// testing the hyperplane through every affinely independent `m`-subset.
pub fn hull_inequalities(points: &[Vec<BigRational>]) -> Result<Vec<Inequality>> {
    let Some(first) = points.first() else {
        return Err(domain("hull of an empty point set"));
    };
    let m = first.len();
    if affine_dim(points.iter().map(Vec::as_slice)) != m {
        return Err(domain("hull_inequalities needs full-dimensional input"));
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for subset in (0..points.len()).combinations(m) {
        let base = &points[subset[0]];
        let rows: Vec<Vec<BigRational>> = subset[1..]
            .iter()
            .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let Some(mut normal) = normal_vector(&rows, m) else {
            continue;
        };
        let mut rhs = dot(&normal, base);
        let values: Vec<BigRational> = points.iter().map(|p| dot(&normal, p)).collect();
        let above = values.iter().any(|v| v > &rhs);
        let below = values.iter().any(|v| v < &rhs);
        if above && below {
            continue;
        }
        let tight: Vec<usize> = (0..points.len()).filter(|&i| values[i] == rhs).collect();
        if above {
            normal.iter_mut().for_each(|c| *c = -c.clone());
            rhs = -rhs;
        }
        if seen.insert(tight) {
            out.push(Inequality { normal, rhs });
        }
    }
    Ok(out)
}

/// Extreme points among `points` (duplicates and interior points removed),
/// preserving first-occurrence order.
fn extreme_points(points: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let unique: Vec<Vec<BigRational>> = points.iter().cloned().unique().collect();
    if unique.len() <= 1 {
        return Ok(unique);
    }
    let (_, coords) = chart(&unique);
    let hull = hull_inequalities(&coords)?;
    Ok(unique
        .into_iter()
        .zip(&coords)
        .filter(|(_, c)| {
            // A point is extreme iff the facets through it pin it down alone.
            let through: Vec<&Inequality> = hull.iter().filter(|h| h.eval(c) == h.rhs).collect();
            coords
                .iter()
                .filter(|other| through.iter().all(|h| h.eval(other) == h.rhs))
                .count()
                == 1
        })
        .map(|(p, _)| p)
        .collect())
}

struct Triangulator<'a> {
    lattice: &'a FaceLattice,
    sets: Vec<FixedBitSet>,
    memo: HashMap<usize, Vec<Vec<usize>>>,
}

impl<'a> Triangulator<'a> {
    fn new(lattice: &'a FaceLattice, n: usize) -> Self {
        let sets = lattice
            .faces
            .iter()
            .map(|f| {
                let mut s = FixedBitSet::with_capacity(n);
                f.vertex_set.iter().for_each(|&v| s.insert(v));
                s
            })
            .collect();
        Triangulator {
            lattice,
            sets,
            memo: HashMap::new(),
        }
    }

    /// Fan triangulation of a vertex set of dimension `dim` from `apex`,
    /// recursing into the faces of dimension `dim - 1` that miss the apex.
    fn fan(&mut self, set: &FixedBitSet, dim: usize, apex: usize) -> Vec<Vec<usize>> {
        if dim == 0 {
            return vec![set.ones().collect()];
        }
        let sub: Vec<usize> = (0..self.lattice.faces.len())
            .filter(|&i| {
                self.lattice.faces[i].dim == dim - 1
                    && self.sets[i].is_subset(set)
                    && !self.sets[i].contains(apex)
            })
            .collect();
        let mut out = Vec::new();
        for i in sub {
            for mut simplex in self.face_fan(i) {
                simplex.push(apex);
                out.push(simplex);
            }
        }
        out
    }

    fn face_fan(&mut self, face: usize) -> Vec<Vec<usize>> {
        if let Some(t) = self.memo.get(&face) {
            return t.clone();
        }
        let set = self.sets[face].clone();
        let apex = set.ones().next().expect("faces are nonempty");
        let t = self.fan(&set, self.lattice.faces[face].dim, apex);
        self.memo.insert(face, t.clone());
        t
    }
}

/// Simplices (as vertex-index lists) of a fan triangulation of a polytope from
/// the vertex with index `apex`.
pub fn fan_triangulation(rep: &PolytopeRep, apex: usize) -> Result<Vec<Vec<usize>>> {
    if apex >= rep.vertices.len() {
        return Err(domain(format!("apex index {apex} out of range")));
    }
    let m = build_incidence(rep)?;
    let lattice = enumerate_faces_with_guard(&m, rep, MAX_TRIANGULATION_DIM)?;
    let mut all = FixedBitSet::with_capacity(rep.vertices.len());
    all.insert_range(..);
    let mut tri = Triangulator::new(&lattice, rep.vertices.len());
    Ok(tri.fan(&all, lattice.improper.dim, apex))
}

/// Exact `d`-volume of a full-dimensional polytope by fan triangulation.
pub fn triangulated_volume(rep: &PolytopeRep, apex: usize) -> Result<SurdValue> {
    Ok(fan_triangulation(rep, apex)?
        .into_iter()
        .map(|s| {
            simplex_measure(
                &s.iter()
                    .map(|&i| rep.vertices[i].clone())
                    .collect::<Vec<_>>(),
            )
        })
        .sum())
}

/// Exact `m`-volume of `conv(points)`, `m` being the dimension of their affine
/// hull, by fan triangulation from `points[apex]` over the hull's own face
/// lattice. Simplex measures are taken in the original coordinates.
pub fn polytope_measure(points: &[Vec<BigRational>], apex: usize) -> Result<SurdValue> {
    if apex >= points.len() {
        return Err(domain(format!("apex index {apex} out of range")));
    }
    let apex_point = points[apex].clone();
    let verts = extreme_points(points)?;
    if verts.len() <= 1 {
        return Ok(simplex_measure(&verts));
    }
    // Apex must be a vertex; fall back to the first extreme point otherwise.
    let apex = verts.iter().position(|v| *v == apex_point).unwrap_or(0);
    let (m, coords) = chart(&verts);
    if m > MAX_TRIANGULATION_DIM {
        return Err(Error::GuardExceeded(format!(
            "triangulation limited to dimension {MAX_TRIANGULATION_DIM}, got {m}"
        )));
    }
    let local = PolytopeRep {
        dim: m,
        inequalities: hull_inequalities(&coords)?,
        vertices: coords,
    };
    let simplices = fan_triangulation(&local, apex)?;
    Ok(simplices
        .into_iter()
        .map(|s| simplex_measure(&s.iter().map(|&i| verts[i].clone()).collect::<Vec<_>>()))
        .sum())
}

/// `(d-1)`-volume of a facet of a `d`-polytope from its vertices.
pub fn facet_triangulation_measure(facet_vertices: &[Vec<BigRational>]) -> Result<SurdValue> {
    facet_triangulation_measure_from(facet_vertices, 0)
}

pub fn facet_triangulation_measure_from(
    facet_vertices: &[Vec<BigRational>],
    apex: usize,
) -> Result<SurdValue> {
    let Some(first) = facet_vertices.first() else {
        return Err(domain("facet with no vertices"));
    };
    let d = first.len();
    let span = affine_dim(facet_vertices.iter().map(Vec::as_slice));
    if span + 1 != d {
        return Err(domain(format!(
            "facet vertices span dimension {span}, expected {}",
            d.saturating_sub(1)
        )));
    }
    polytope_measure(facet_vertices, apex)
}

/// Vertices of the section `[-1,1]^d ∩ {a·x = c}`: hyperplane crossings of the
/// cube's edges, deduplicated.
pub fn cube_section_points(a: &[BigRational], c: &BigRational) -> Vec<Vec<BigRational>> {
    let d = a.len();
    let one = BigRational::from_integer(1.into());
    let mut pts: BTreeSet<Vec<BigRational>> = BTreeSet::new();
    for mask in 0..1usize << d {
        let v: Vec<BigRational> = (0..d)
            .map(|i| {
                if (mask >> i) & 1 == 1 {
                    -one.clone()
                } else {
                    one.clone()
                }
            })
            .collect();
        let s0 = dot(a, &v);
        if &s0 == c {
            pts.insert(v.clone());
        }
        for axis in 0..d {
            // Each edge once: from the +1 end along the axis.
            if (mask >> axis) & 1 == 1 {
                continue;
            }
            let s1 = &s0 - &a[axis] * BigRational::from_integer(BigInt::from(2));
            let lo = s0.clone().min(s1.clone());
            let hi = s0.clone().max(s1.clone());
            if c > &lo && c < &hi {
                let t = (c - &s0) / (&s1 - &s0);
                let mut p = v.clone();
                p[axis] = &one - t * BigRational::from_integer(BigInt::from(2));
                pts.insert(p);
            }
        }
    }
    pts.into_iter().collect()
}

/// `(d-1)`-volume of `[-1,1]^d ∩ {a·x = c}` by exact triangulation; zero when
/// the section is lower dimensional or empty.
pub fn cube_section_measure(a: &[BigRational], c: &BigRational) -> Result<SurdValue> {
    let pts = cube_section_points(a, c);
    if pts.is_empty() {
        return Ok(SurdValue::zero());
    }
    let span = affine_dim(pts.iter().map(Vec::as_slice));
    if span + 1 != a.len() {
        return Ok(SurdValue::zero());
    }
    polytope_measure(&pts, 0)
}

/// Gauge `inf{t > 0 : x/t ∈ body}` to within `tol`, by doubling/halving to
/// bracket the crossing and then bisecting.
pub fn gauge_bisection<F>(member: F, x: &[f64], tol: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> bool,
{
    if x.iter().all(|&v| v == 0.0) {
        return Err(domain("gauge of the zero vector"));
    }
    if !(tol > 0.0) {
        return Err(domain("gauge tolerance must be positive"));
    }
    let scaled = |t: f64| -> Vec<f64> { x.iter().map(|v| v / t).collect() };
    let mut hi = 1.0;
    while !member(&scaled(hi)) {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(domain("gauge bracketing diverged"));
        }
    }
    let mut lo = hi;
    while member(&scaled(lo)) {
        lo /= 2.0;
        if lo == 0.0 {
            return Err(domain("body does not look bounded along x"));
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if member(&scaled(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Converts exact coordinates for the float oracles.
pub fn to_f64_vec(x: &[BigRational]) -> Vec<f64> {
    x.iter().map(to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Params};
    use crate::combinatorics::{facet_vertex_sets, rep, rho_rep, vrep_rho, Family};
    use crate::norms::{
        dual_norm, in_rho_f64, in_rho_star_f64, knorm, member_rho, member_rho_star,
    };

    fn v(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rng_stream_is_pinned() {
        let mut a = XorShift64Star::new(42);
        let mut b = XorShift64Star::new(42);
        let first: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        assert_eq!(first, (0..4).map(|_| b.next_u64()).collect::<Vec<_>>());
        let mut c = XorShift64Star::new(43);
        assert_ne!(first[0], c.next_u64());
        let mut r = XorShift64Star::new(7);
        for _ in 0..1000 {
            let u = r.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn monte_carlo_cube_and_balls() {
        let cube = monte_carlo_volume(
            || |x: &[f64]| x.iter().all(|c| c.abs() <= 1.0),
            3,
            1.0,
            100_000,
            1,
        )
        .unwrap();
        assert_eq!(cube.hits, 100_000);
        assert_eq!(cube.estimate, 8.0);

        let p = Params::integer(3, 2).unwrap();
        let (fk, fr) = (p.floor_k(), to_f64(&p.frac_k()));
        let rho = monte_carlo_volume(
            || {
                let mut buf = Vec::new();
                move |x: &[f64]| in_rho_f64(x, fk, fr, &mut buf)
            },
            3,
            1.0,
            1_000_000,
            11,
        )
        .unwrap();
        assert!(rho.z_score(2.0) < 4.0, "{rho:?}");
        let star = monte_carlo_volume(
            || |x: &[f64]| in_rho_star_f64(x, 2.0),
            3,
            1.0,
            1_000_000,
            12,
        )
        .unwrap();
        assert!(star.z_score(20.0 / 3.0) < 4.0, "{star:?}");
    }

    #[test]
    fn monte_carlo_is_reproducible_and_checks_inputs() {
        let run = |seed| {
            monte_carlo_volume(
                || |x: &[f64]| x[0] * x[0] + x[1] * x[1] <= 1.0,
                2,
                1.0,
                50_000,
                seed,
            )
            .unwrap()
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5).hits, run(6).hits);
        assert!(monte_carlo_volume(|| |_: &[f64]| true, 2, 1.0, 10, 0).is_err());
    }

    #[test]
    fn simplex_examples() {
        assert_eq!(
            simplex_measure(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]),
            SurdValue::term(rat(1, 2), 3u32)
        );
        assert_eq!(
            simplex_measure(&[v(&[0, 0]), v(&[1, 0]), v(&[0, 1])]),
            SurdValue::rational(rat(1, 2))
        );
        assert!(simplex_measure(&[v(&[0, 0]), v(&[1, 1]), v(&[2, 2])]).is_zero());
    }

    #[test]
    fn facet_measure_examples() {
        let square = vec![
            v(&[1, 1, 1]),
            v(&[1, 1, -1]),
            v(&[1, -1, 1]),
            v(&[1, -1, -1]),
        ];
        assert_eq!(
            facet_triangulation_measure(&square).unwrap(),
            SurdValue::rational(int(4))
        );
        let h = rat(1, 2);
        let rhombus = vec![
            vec![h.clone(), h.clone(), h.clone()],
            vec![h.clone(), h.clone(), -h.clone()],
            v(&[1, 0, 0]),
            v(&[0, 1, 0]),
        ];
        assert_eq!(
            facet_triangulation_measure(&rhombus).unwrap(),
            SurdValue::term(rat(1, 2), 2u32)
        );
        let tri = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert_eq!(
            facet_triangulation_measure(&tri).unwrap(),
            SurdValue::term(rat(1, 2), 3u32)
        );
        assert!(facet_triangulation_measure(&[v(&[0, 0, 0]), v(&[1, 0, 0])]).is_err());
    }

    #[test]
    fn apex_choice_does_not_matter() {
        for (d, k) in [(3, "2"), (3, "3/2"), (4, "2"), (4, "5/2")] {
            let p = Params::parse(d, k).unwrap();
            let verts = vrep_rho(&p).unwrap();
            for set in facet_vertex_sets(&p).unwrap().iter().take(5) {
                let pts: Vec<_> = set.iter().map(|&i| verts[i].clone()).collect();
                let a = facet_triangulation_measure_from(&pts, 0).unwrap();
                let b = facet_triangulation_measure_from(&pts, pts.len() - 1).unwrap();
                assert_eq!(a, b, "{p}");
            }
        }
    }

    #[test]
    fn hull_recovers_known_hreps() {
        for (d, k) in [
            (3, "1"),
            (3, "2"),
            (3, "3/2"),
            (4, "2"),
            (4, "3"),
            (3, "5/2"),
        ] {
            let p = Params::parse(d, k).unwrap();
            let r = rho_rep(&p).unwrap();
            let hull = hull_inequalities(&r.vertices).unwrap();
            assert_eq!(hull.len(), r.inequalities.len(), "{p}");
            for h in &r.inequalities {
                // Same supporting hyperplane up to positive scaling.
                assert!(hull.iter().any(|g| {
                    let ratio = &g.rhs / &h.rhs;
                    ratio.is_positive()
                        && g.normal
                            .iter()
                            .zip(&h.normal)
                            .all(|(a, b)| *a == b * &ratio)
                }));
            }
        }
    }

    #[test]
    fn body_volume_by_triangulation() {
        let p = Params::integer(3, 2).unwrap();
        let vol = triangulated_volume(&rho_rep(&p).unwrap(), 0).unwrap();
        assert_eq!(vol, SurdValue::rational(int(2)));
        let dual = triangulated_volume(&rep(&p, Family::Dual).unwrap(), 3).unwrap();
        assert_eq!(dual, SurdValue::rational(rat(20, 3)));
    }

    #[test]
    fn cube_sections() {
        let pts = cube_section_points(&v(&[1, 1, 1]), &int(0));
        assert_eq!(pts.len(), 6);
        assert_eq!(
            cube_section_measure(&v(&[1, 1, 1]), &int(0)).unwrap(),
            // Regular hexagon with side sqrt(2).
            SurdValue::term(int(3), 3u32)
        );
        assert_eq!(
            cube_section_measure(&v(&[1, 1]), &int(0)).unwrap(),
            SurdValue::term(int(2), 2u32)
        );
        assert!(cube_section_measure(&v(&[1, 1]), &int(2))
            .unwrap()
            .is_zero());
        assert!(cube_section_measure(&v(&[1, 1]), &int(5))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn gauge_examples() {
        let p = Params::integer(3, 2).unwrap();
        let rho = |x: &[f64]| member_rho(x, &p).unwrap().is_member();
        let star = |x: &[f64]| member_rho_star(x, &p).unwrap().is_member();
        let g = gauge_bisection(rho, &[3.0, 1.0, -2.0], 1e-9).unwrap();
        assert!((g - 5.0).abs() <= 1e-9);
        assert!((gauge_bisection(rho, &[1.0, 0.0, 0.0], 1e-9).unwrap() - 1.0).abs() <= 1e-9);
        assert!((gauge_bisection(star, &[1.0, 0.0, 0.0], 1e-9).unwrap() - 1.0).abs() <= 1e-9);
        assert!((gauge_bisection(star, &[1.0, 1.0, 1.0], 1e-9).unwrap() - 1.5).abs() <= 1e-9);
        assert!(gauge_bisection(rho, &[0.0, 0.0, 0.0], 1e-9).is_err());
    }

    #[test]
    fn gauge_matches_norms_on_random_vectors() {
        let mut rng = XorShift64Star::new(2024);
        for trial in 0..500 {
            let d = 1 + (trial % 6);
            let twice_k = 2 + rng.next_u64() as usize % (2 * d - 1);
            let p = Params::new(d, rat(twice_k as i64, 2)).unwrap();
            let x: Vec<f64> = (0..d).map(|_| 10.0 * rng.next_f64() - 5.0).collect();
            let rho = |y: &[f64]| member_rho(y, &p).unwrap().is_member();
            let star = |y: &[f64]| member_rho_star(y, &p).unwrap().is_member();
            let g = gauge_bisection(rho, &x, 1e-10).unwrap();
            assert!((g - knorm(&x, &p).unwrap()).abs() <= 1e-9, "{p} {x:?}");
            let h = gauge_bisection(star, &x, 1e-10).unwrap();
            assert!((h - dual_norm(&x, &p).unwrap()).abs() <= 1e-9, "{p} {x:?}");
        }
    }
}
