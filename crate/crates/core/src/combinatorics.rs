//! Vertex and facet descriptions of `rho(d,k)` and `rho*(d,k)`, and their
//! closed-form face counts.
//!
//! Vertices of `rho(d,k)` are listed in a fixed order: first the `2^d` points
//! `(±1/k, …, ±1/k)` indexed by sign mask (bit `i` set means coordinate `i` is
//! negative), then the `2d` points `±e_i` at index `offset + 2i` (plus) and
//! `offset + 2i + 1` (minus). The cube block is absent when `k = d` and the
//! cross block when `k = 1`, because those points are then not vertices.
//!
//! Facets of `rho(d,k)` are enumerated in lockstep with their inequalities,
//! and the vertices of `rho*(d,k)` are exactly those inequality normals, so
//! vertex `j` of the polar corresponds to facet `j` of the primal and vice versa.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{binomial, int, BigRational, Params};
use crate::error::{Error, Result};

/// Largest dimension for which explicit vertex/facet lists are generated.
pub const MAX_REP_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Primal,
    Dual,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Primal => "primal",
            Family::Dual => "dual",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primal" => Ok(Family::Primal),
            "dual" => Ok(Family::Dual),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// Face counts `f_0, …, f_{d-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FVector {
    pub counts: Vec<BigInt>,
}

impl FVector {
    pub fn new(counts: Vec<BigInt>) -> Self {
        FVector { counts }
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        FVector::new(counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn reversed(&self) -> Self {
        FVector::new(self.counts.iter().rev().cloned().collect())
    }

    /// `Σ (-1)^i f_i`.
    pub fn euler_characteristic(&self) -> BigInt {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, f)| if i % 2 == 0 { f.clone() } else { -f })
            .sum()
    }

    /// Euler's relation for a `d`-polytope: `Σ (-1)^i f_i = 1 - (-1)^d`.
    pub fn satisfies_euler(&self) -> bool {
        let expected = if self.dim() % 2 == 0 { 0 } else { 2 };
        self.euler_characteristic() == BigInt::from(expected)
            && self.counts.iter().all(|f| f.is_positive())
    }

    /// Nonempty faces including the polytope itself.
    pub fn total_faces(&self) -> BigInt {
        BigInt::one() + self.counts.iter().sum::<BigInt>()
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.counts.iter().join(" "))
    }
}

/// `normal · x <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub normal: Vec<BigRational>,
    pub rhs: BigRational,
}

impl Inequality {
    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        self.normal.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeRep {
    pub dim: usize,
    pub vertices: Vec<Vec<BigRational>>,
    pub inequalities: Vec<Inequality>,
}

fn guard(p: &Params) -> Result<()> {
    if p.d() > MAX_REP_DIM {
        return Err(Error::GuardExceeded(format!(
            "explicit representations are limited to d <= {MAX_REP_DIM}, got d = {} ({} cube vertices)",
            p.d(),
            BigInt::from(2).pow(p.d() as u32)
        )));
    }
    Ok(())
}

/// Index bookkeeping for the vertex list of `rho(d,k)`.
#[derive(Debug, Clone, Copy)]
struct Layout {
    d: usize,
    cube: bool,
    cross: bool,
}

impl Layout {
    fn new(p: &Params) -> Self {
        Layout {
            d: p.d(),
            cube: p.k().is_one() || p.k() < &int(p.d() as i64),
            cross: !p.k().is_one(),
        }
    }

    fn cross_index(&self, axis: usize, negative: bool) -> Option<usize> {
        let offset = if self.cube { 1 << self.d } else { 0 };
        self.cross.then_some(offset + 2 * axis + negative as usize)
    }

    /// Cube-vertex indices whose signs on `axes` follow `signs` (bit j ↔ axes[j]).
    fn cube_face(&self, axes: &[usize], signs: usize) -> Vec<usize> {
        if !self.cube {
            return Vec::new();
        }
        (0..1usize << self.d)
            .filter(|mask| {
                axes.iter()
                    .enumerate()
                    .all(|(j, &a)| (mask >> a) & 1 == (signs >> j) & 1)
            })
            .collect()
    }
}

fn sign(bit: usize) -> BigRational {
    if bit & 1 == 1 {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

/// Vertices of `rho(d,k)` in the documented order.
pub fn vrep_rho(p: &Params) -> Result<Vec<Vec<BigRational>>> {
    guard(p)?;
    let layout = Layout::new(p);
    let d = p.d();
    let inv_k = p.k().recip();
    let mut out = Vec::new();
    if layout.cube {
        for mask in 0..1usize << d {
            out.push((0..d).map(|i| sign(mask >> i) * &inv_k).collect());
        }
    }
    if layout.cross {
        for axis in 0..d {
            for neg in [false, true] {
                let mut v = vec![BigRational::zero(); d];
                v[axis] = sign(neg as usize);
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// Each facet of `rho(d,k)` as (sorted vertex indices, supporting inequality).
///
/// Integer `k`: one facet per `(d-k)`-face of the cube, i.e. per `k`-subset `S`
/// of axes and signs `ε`, with inequality `Σ_{i∈S} ε_i x_i <= 1`.
/// Non-integer `k`: one facet per `(floor(k)+1)`-subset `S`, signs `ε`, and
/// axis `j ∈ S` whose pulled point is left out; the inequality is
/// `Σ_{i∈S∖j} ε_i x_i + (k - floor k) ε_j x_j <= 1`.
pub fn rho_facets(p: &Params) -> Result<Vec<(Vec<usize>, Inequality)>> {
    guard(p)?;
    let layout = Layout::new(p);
    let d = p.d();
    let frac = p.frac_k();
    let size = if p.is_integer_k() {
        p.floor_k()
    } else {
        p.floor_k() + 1
    };
    let mut out = Vec::new();
    for axes in (0..d).combinations(size) {
        for signs in 0..1usize << size {
            let cube = layout.cube_face(&axes, signs);
            let dropped: Vec<Option<usize>> = if p.is_integer_k() {
                vec![None]
            } else {
                (0..size).map(Some).collect()
            };
            for skip in dropped {
                let mut verts = cube.clone();
                let mut normal = vec![BigRational::zero(); d];
                for (j, &axis) in axes.iter().enumerate() {
                    let s = sign(signs >> j);
                    if skip == Some(j) {
                        normal[axis] = s * &frac;
                    } else {
                        normal[axis] = s;
                        verts.extend(layout.cross_index(axis, (signs >> j) & 1 == 1));
                    }
                }
                verts.sort_unstable();
                out.push((
                    verts,
                    Inequality {
                        normal,
                        rhs: BigRational::one(),
                    },
                ));
            }
        }
    }
    Ok(out)
}

pub fn facet_vertex_sets(p: &Params) -> Result<Vec<Vec<usize>>> {
    Ok(rho_facets(p)?.into_iter().map(|(v, _)| v).collect())
}

/// H-rep of `rho(d,k)` for integer `k`: `|x_{i_1}| + … + |x_{i_k}| <= 1` written
/// out as the `2^k C(d,k)` signed inequalities, paired with the V-rep.
pub fn hrep_rho(p: &Params) -> Result<PolytopeRep> {
    p.require_integer_k("the k-subset H-representation")?;
    rho_rep(p)
}

/// V-rep and H-rep of `rho(d,k)` for any rational `k`. For non-integer `k`
/// the inequalities are the polar vertices described in [`rho_facets`].
pub fn rho_rep(p: &Params) -> Result<PolytopeRep> {
    Ok(PolytopeRep {
        dim: p.d(),
        vertices: vrep_rho(p)?,
        inequalities: rho_facets(p)?.into_iter().map(|(_, h)| h).collect(),
    })
}

/// V-rep and H-rep of `rho*(d,k) = kβ_d ∩ γ_d`.
///
/// Vertices: points of `{0,±1}^d` with `k` nonzero coordinates for integer `k`;
/// otherwise `floor(k)` coordinates `±1` and one coordinate `±(k - floor k)`.
/// Inequalities: `<v, x> <= 1` for each vertex `v` of `rho(d,k)`.
pub fn rho_star_rep(p: &Params) -> Result<PolytopeRep> {
    let primal = rho_rep(p)?;
    Ok(PolytopeRep {
        dim: p.d(),
        vertices: primal.inequalities.into_iter().map(|h| h.normal).collect(),
        inequalities: primal
            .vertices
            .into_iter()
            .map(|v| Inequality {
                normal: v,
                rhs: BigRational::one(),
            })
            .collect(),
    })
}

pub fn rep(p: &Params, family: Family) -> Result<PolytopeRep> {
    match family {
        Family::Primal => rho_rep(p),
        Family::Dual => rho_star_rep(p),
    }
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

pub fn vertex_count(p: &Params, family: Family) -> Result<BigInt> {
    let d = p.d();
    match family {
        Family::Primal => Ok(if p.k().is_one() {
            pow2(d)
        } else if p.k() == &int(d as i64) {
            BigInt::from(2 * d)
        } else {
            pow2(d) + BigInt::from(2 * d)
        }),
        Family::Dual => {
            let k = p.require_integer_k("a closed-form vertex count of rho*")?;
            Ok(pow2(k) * binomial(d as u64, k as i64))
        }
    }
}

/// Facets of `rho(d,k)`; by polarity also the vertex count of `rho*(d,k)`.
pub fn facet_count(p: &Params) -> BigInt {
    let d = p.d() as u64;
    let m = p.floor_k();
    if p.is_integer_k() {
        pow2(m) * binomial(d, m as i64)
    } else {
        pow2(m + 1) * binomial(d, m as i64 + 1) * BigInt::from(m + 1)
    }
}

/// Number of `i`-faces of `rho(d,k)` that are faces of neither the cube `γ_d/k`
/// nor the cross-polytope `β_d`, for integer `1 < k < d` and `1 <= i <= d-2`.
///
/// Each summand (with its `C(d,k)` factor) counts a class of faces, so each
/// must divide exactly; a remainder is reported as an internal error.
pub fn f_star(d: usize, k: usize, i: usize) -> Result<BigInt> {
    if !(1 < k && k < d) || !(1 <= i && i + 2 <= d) {
        return Err(Error::Domain(format!(
            "f_star needs 1 < k < d and 1 <= i <= d-2, got d={d}, k={k}, i={i}"
        )));
    }
    let (d, k, i) = (d as i64, k as i64, i as i64);
    let lo = 0.max(i - k + 1);
    let hi = (i - 1).min(d - k - 1);
    let outer = binomial(d as u64, k);
    let mut total = BigInt::zero();
    for j in lo..=hi {
        let numer = &outer
            * pow2((d - j) as usize)
            * binomial((d - k) as u64, j)
            * binomial(k as u64, i - j);
        let denom = binomial((d - i) as u64, d - k - j);
        let (q, r) = numer.div_rem(&denom);
        if !r.is_zero() || denom.is_zero() {
            return Err(Error::Inconsistent(format!(
                "f_star summand j={j} for (d={d}, k={k}, i={i}) is not an integer"
            )));
        }
        total += q;
    }
    Ok(total)
}

pub fn cube_fvector(d: usize) -> FVector {
    FVector::new(
        (0..d)
            .map(|i| pow2(d - i) * binomial(d as u64, i as i64))
            .collect(),
    )
}

pub fn cross_fvector(d: usize) -> FVector {
    FVector::new(
        (0..d)
            .map(|i| pow2(i + 1) * binomial(d as u64, i as i64 + 1))
            .collect(),
    )
}

/// Closed-form f-vector for integer `k`. The dual family is the reversal.
pub fn f_vector(p: &Params, family: Family) -> Result<FVector> {
    let k = p.integer_k().ok_or_else(|| {
        Error::Unsupported(format!(
            "no closed-form f-vector for non-integer k (only the facet count {} is known)",
            facet_count(p)
        ))
    })?;
    let d = p.d();
    let primal = if k == 1 {
        cube_fvector(d)
    } else if k == d {
        cross_fvector(d)
    } else {
        let mut counts = Vec::with_capacity(d);
        for i in 0..d {
            if i == d - 1 {
                counts.push(facet_count(p));
                continue;
            }
            // Faces shared with β_d (dimension < k-1) and with γ_d/k (dimension < d-k).
            let mut f = if i == 0 {
                BigInt::zero()
            } else {
                f_star(d, k, i)?
            };
            if i + 1 < k {
                f += pow2(i + 1) * binomial(d as u64, i as i64 + 1);
            }
            if i + k < d {
                f += pow2(d - i) * binomial(d as u64, i as i64);
            }
            counts.push(f);
        }
        FVector::new(counts)
    };
    Ok(match family {
        Family::Primal => primal,
        Family::Dual => primal.reversed(),
    })
}

/// Total number of nonempty faces (the polytope itself included) and whether
/// it reaches `3^d`.
pub fn total_faces_and_kalai(p: &Params) -> Result<(BigInt, bool)> {
    let total = f_vector(p, Family::Primal)?.total_faces();
    let bound = BigInt::from(3).pow(p.d() as u32);
    let ok = total >= bound;
    Ok((total, ok))
}
