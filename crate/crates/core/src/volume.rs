//! Closed-form volumes: `rho(d,k)` and its boundary, `rho*(d,k)` and its
//! boundary, the cube half-space and hyperplane-section formulas they rest on,
//! and Mahler volumes.
//!
//! `d`-volumes are exact rationals; `(d-1)`-volumes that carry a square root
//! are [`SurdValue`]s.
//!
//! The published facet-volume and boundary-volume formulas for `rho(d,k)` are
//! short by a factor of `d` (the `k = 1` case must give the cube's surface
//! `d·2^d`, the `k = d` case the cross-polytope's `2^d·√d/(d-1)!`). Both the
//! printed and the corrected values are returned so the discrepancy stays
//! visible; the corrected one agrees with exact facet triangulation.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, factorial, int, pow, rational_string, BigRational, Params};
use crate::error::{domain, Result};
use crate::surd::SurdValue;

/// Largest dimension for the vertex sums over `{0,1}^d` / `{-1,1}^d`.
pub const MAX_VERTEX_SUM_DIM: usize = 25;

fn fact(n: usize) -> BigRational {
    BigRational::from_integer(factorial(n as u64))
}

fn pow2(e: i64) -> BigRational {
    pow(&int(2), e)
}

/// Distance from a vertex of the pulled simplex `α_{l-1}` to the affine span
/// of the cube face `γ_{d-l}` and `i` other vertices of `α_{l-1}`, in the
/// dilated picture `k·rho(d,k)`:
/// `k·sqrt((k² - 2(i+1)k + (i+1)l) / (k² - 2ik + il))`.
///
/// A zero radicand (the last apex when `l = k`) gives distance zero.
pub fn apex_distance(k: &BigRational, l: usize, i: usize) -> Result<SurdValue> {
    if l == 0 || int(l as i64) > *k || i >= l {
        return Err(domain(format!(
            "apex distance needs 1 <= l <= k and 0 <= i < l, got k={}, l={l}, i={i}",
            rational_string(k)
        )));
    }
    let (li, ii) = (int(l as i64), int(i as i64));
    let num = k * k - int(2) * (&ii + int(1)) * k + (&ii + int(1)) * &li;
    let den = k * k - int(2) * &ii * k + &ii * &li;
    if !den.is_positive() || num.is_negative() {
        return Err(domain(
            "apex distance radicand is negative or its denominator vanishes",
        ));
    }
    Ok(SurdValue::sqrt_rational(&(num / den)).scale(k))
}

/// Volume of the subdivision piece `conv(γ_{d-l} ∪ α_{l-1})` of `k·rho(d,k)`:
/// `2^{d-l} k^{l-1} (k-l) (d-l)!/d!`.
pub fn piece_volume(d: usize, k: &BigRational, l: usize) -> Result<BigRational> {
    if l > d || int(l as i64) > *k {
        return Err(domain(format!(
            "piece volume needs 0 <= l <= min(d, floor k), got d={d}, k={}, l={l}",
            rational_string(k)
        )));
    }
    let l_i = l as i64;
    Ok(pow2((d - l) as i64) * pow(k, l_i - 1) * (k - int(l_i)) * fact(d - l) / fact(d))
}

/// `Σ_{l=0}^{m} k^{l-1}(k-l)/l!`, which telescopes to `k^m/m!`.
pub fn telescoping_sum(k: &BigRational, m: usize) -> BigRational {
    (0..=m)
        .map(|l| pow(k, l as i64 - 1) * (k - int(l as i64)) / fact(l))
        .sum()
}

/// Volume of `rho(d,k)` before telescoping: `2^d Σ_l k^{l-1}(k-l)/l! / k^d`.
pub fn volume_rho_unsummed(p: &Params) -> BigRational {
    pow2(p.d() as i64) * telescoping_sum(p.k(), p.floor_k()) / pow(p.k(), p.d() as i64)
}

/// `2^d k^{floor(k)-d} / floor(k)!`.
pub fn volume_rho(p: &Params) -> BigRational {
    let m = p.floor_k();
    let closed = pow2(p.d() as i64) * pow(p.k(), m as i64 - p.d() as i64) / fact(m);
    assert_eq!(
        closed,
        volume_rho_unsummed(p),
        "telescoped volume disagrees for {p}"
    );
    closed
}

/// A quantity whose published formula is off by a factor of `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrataValue {
    pub as_printed: SurdValue,
    pub corrected: SurdValue,
}

impl ErrataValue {
    /// `corrected / as_printed`, when both are nonzero multiples of one surd.
    pub fn ratio(&self) -> Option<BigRational> {
        let (n, c) = self.corrected.terms().next()?;
        let (m, p) = self.as_printed.terms().next()?;
        (n == m && self.corrected.terms().count() == 1 && self.as_printed.terms().count() == 1)
            .then(|| c / p)
    }
}

/// `(d-1)`-volume of one facet of `rho(d,k)` for integer `k`.
///
/// Printed: `2^{d-k} k^{k-1/2} (d-k)!/d!`, divided by `k^{d-1}` to undo the
/// dilation. Corrected: the same with `(d-1)!` in place of `d!`.
pub fn facet_volume_rho(d: usize, k: usize) -> Result<ErrataValue> {
    if k == 0 || k > d {
        return Err(domain(format!(
            "facet volume needs integer 1 <= k <= d, got d={d}, k={k}"
        )));
    }
    let kq = int(k as i64);
    // k^{k-1/2} / k^{d-1} = k^{k-d} · sqrt(k)
    let common = pow2((d - k) as i64) * pow(&kq, k as i64 - d as i64) * fact(d - k);
    let sqrt_k = SurdValue::sqrt(k as u64);
    Ok(ErrataValue {
        as_printed: sqrt_k.scale(&(&common / fact(d))),
        corrected: sqrt_k.scale(&(&common / fact(d - 1))),
    })
}

/// Boundary volume of `rho(d,k)` for integer `k`: facet count times facet volume.
/// Printed `2^d k^{k-d+1/2}/k!`; corrected `d·2^d k^{k-d+1/2}/k!`.
pub fn boundary_volume_rho(p: &Params) -> Result<ErrataValue> {
    let k = p.require_integer_k("the boundary volume of rho")?;
    let facets = BigRational::from_integer(crate::combinatorics::facet_count(p));
    let facet = facet_volume_rho(p.d(), k)?;
    Ok(ErrataValue {
        as_printed: facet.as_printed.scale(&facets),
        corrected: facet.corrected.scale(&facets),
    })
}

/// Walks `{0,1}^d` in Gray-code order, yielding `(bit flipped, index)`.
fn gray_flips(d: usize) -> impl Iterator<Item = usize> {
    (1u64..1u64 << d).map(|i| i.trailing_zeros() as usize)
}

fn check_vertex_sum_input(a: &[BigRational]) -> Result<()> {
    if a.is_empty() || a.len() > MAX_VERTEX_SUM_DIM {
        return Err(domain(format!(
            "vertex-sum formulas need 1 <= d <= {MAX_VERTEX_SUM_DIM}, got d={}",
            a.len()
        )));
    }
    if a.iter().any(Zero::is_zero) {
        return Err(domain(
            "every coordinate of the normal vector must be nonzero",
        ));
    }
    Ok(())
}

/// Volume of `[0,1]^d ∩ {a·x <= c}`:
/// `Σ_{v ∈ {0,1}^d, a·v <= c} (-1)^{σ(v)} (c - a·v)^d / (d! π(a))`,
/// with `σ` the coordinate sum and `π` the coordinate product.
pub fn halfspace_cube_volume(a: &[BigRational], c: &BigRational) -> Result<BigRational> {
    check_vertex_sum_input(a)?;
    let d = a.len();
    let mut bits = vec![false; d];
    let mut dot = BigRational::zero();
    let mut odd = false;
    let mut total = BigRational::zero();
    let mut visit = |dot: &BigRational, odd: bool| {
        if dot <= c {
            let term = pow(&(c - dot), d as i64);
            if odd {
                total -= term;
            } else {
                total += term;
            }
        }
    };
    visit(&dot, odd);
    for flip in gray_flips(d) {
        bits[flip] = !bits[flip];
        if bits[flip] {
            dot += &a[flip];
        } else {
            dot -= &a[flip];
        }
        odd = !odd;
        visit(&dot, odd);
    }
    let prod: BigRational = a.iter().product();
    Ok(total / (fact(d) * prod))
}

/// Volume of `rho*(d,k) ∩ [0,1]^d`: `Σ_{i=0}^{floor k} (-1)^i (k-i)^d / (i!(d-i)!)`.
pub fn orthant_volume_rho_star(p: &Params) -> BigRational {
    let d = p.d();
    (0..=p.floor_k().min(d))
        .map(|i| {
            let term = pow(&(p.k() - int(i as i64)), d as i64) / (fact(i) * fact(d - i));
            if i % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `2^d` times the orthant volume.
pub fn volume_rho_star(p: &Params) -> BigRational {
    pow2(p.d() as i64) * orthant_volume_rho_star(p)
}

/// `(d-1)`-volume of `[-1,1]^d ∩ {a·x = c}`:
/// `‖a‖₂ Σ_{v ∈ {-1,1}^d} (a·v + c)^{d-1} s(a·v + c) π(v) / (2 (d-1)! π(a))`,
/// with `s` the sign function; vertices on the hyperplane contribute nothing.
/// `d = 1` is rejected (the sign convention at zero is then undetermined).
pub fn cube_section_volume(a: &[BigRational], c: &BigRational) -> Result<SurdValue> {
    check_vertex_sum_input(a)?;
    let d = a.len();
    if d < 2 {
        return Err(domain("cube sections need d >= 2"));
    }
    // Start at v = (1,…,1); bit set means coordinate -1.
    let mut bits = vec![false; d];
    let mut dot: BigRational = a.iter().sum();
    let mut negatives = 0usize;
    let mut total = BigRational::zero();
    let mut visit = |dot: &BigRational, negatives: usize| {
        let s = dot + c;
        if s.is_zero() {
            return;
        }
        let mut term = pow(&s.abs(), d as i64 - 1);
        // s^{d-1}·sign(s) = |s|^{d-1} · sign(s)^d
        if s.is_negative() && d % 2 == 1 {
            term = -term;
        }
        if negatives % 2 == 1 {
            term = -term;
        }
        total += term;
    };
    visit(&dot, negatives);
    for flip in gray_flips(d) {
        bits[flip] = !bits[flip];
        let step = &a[flip] * int(2);
        if bits[flip] {
            dot -= step;
            negatives += 1;
        } else {
            dot += step;
            negatives -= 1;
        }
        visit(&dot, negatives);
    }
    let prod: BigRational = a.iter().product();
    let norm_sq: BigRational = a.iter().map(|x| x * x).sum();
    Ok(SurdValue::sqrt_rational(&norm_sq).scale(&(total / (int(2) * fact(d - 1) * prod))))
}

/// `Σ_{i=0}^{d} (-1)^i C(d,i) (k-i)^{d-1}`, identically zero for `d >= 1`.
pub fn alternating_binomial_sum(d: usize, k: &BigRational) -> BigRational {
    (0..=d)
        .map(|i| {
            let term = BigRational::from_integer(binomial(d as u64, i as i64))
                * pow(&(k - int(i as i64)), d as i64 - 1);
            if i % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `(d-1)`-volume of `δ_{d-1,k} = [0,1]^d ∩ {Σx_i = k}`:
/// `√d/(d-1)! Σ_{i=0}^{floor k} (-1)^i C(d,i)(k-i)^{d-1}`. Zero at `k ∈ {0, d}`.
pub fn slice_volume_delta(d: usize, k: &BigRational) -> Result<SurdValue> {
    if d == 0 || k.is_negative() || *k > int(d as i64) {
        return Err(domain(format!(
            "slice volume needs d >= 1 and 0 <= k <= d, got d={d}, k={}",
            rational_string(k)
        )));
    }
    let m = k.floor().to_integer();
    let m: usize = m.try_into().expect("0 <= floor k <= d");
    let sum: BigRational = (0..=m)
        .map(|i| {
            let term = BigRational::from_integer(binomial(d as u64, i as i64))
                * pow(&(k - int(i as i64)), d as i64 - 1);
            if i % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum();
    if d >= 2 && (k.is_zero() || *k == int(d as i64)) {
        return Ok(SurdValue::zero());
    }
    Ok(SurdValue::sqrt(d as u64).scale(&(sum / fact(d - 1))))
}

/// Boundary volume of `rho*(d,k)`:
/// `2^d d [Σ_{i<floor k} (-1)^i (k-1-i)^{d-1}/(i!(d-1-i)!) + √d Σ_{i<=floor k} (-1)^i (k-i)^{d-1}/(i!(d-i)!)]`.
///
/// The first sum covers the `2d` facets lying in cube facets, the second the
/// `2^d` slanted facets.
pub fn boundary_volume_rho_star(p: &Params) -> SurdValue {
    let d = p.d();
    let k = p.k();
    let m = p.floor_k();
    let sign = |i: usize, t: BigRational| if i % 2 == 0 { t } else { -t };
    let cube_part: BigRational = (0..m.min(d))
        .map(|i| {
            sign(
                i,
                pow(&(k - int(1 + i as i64)), d as i64 - 1) / (fact(i) * fact(d - 1 - i)),
            )
        })
        .sum();
    let slant_part: BigRational = (0..=m.min(d))
        .map(|i| {
            sign(
                i,
                pow(&(k - int(i as i64)), d as i64 - 1) / (fact(i) * fact(d - i)),
            )
        })
        .sum();
    let scale = pow2(d as i64) * int(d as i64);
    let mut slant = SurdValue::sqrt(d as u64).scale(&(slant_part * &scale));
    // At k = d the slanted facets shrink to points; the sum is then 0^{d-1}-only.
    if d >= 2 && *k == int(d as i64) {
        slant = SurdValue::zero();
    }
    SurdValue::rational(cube_part * scale) + slant
}

/// `vol(rho) · vol(rho*)`.
pub fn mahler_volume(p: &Params) -> BigRational {
    volume_rho(p) * volume_rho_star(p)
}

/// `4^d / d!`, the cube/cross-polytope value.
pub fn mahler_bound(d: usize) -> BigRational {
    pow(&int(4), d as i64) / fact(d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MahlerRow {
    pub d: usize,
    pub k: usize,
    #[serde(serialize_with = "ser_rational")]
    pub mahler: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub bound: BigRational,
    pub satisfied: bool,
    pub equality: bool,
}

fn ser_rational<S: serde::Serializer>(
    q: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(q))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahlerReport {
    pub d_max: usize,
    pub rows: Vec<MahlerRow>,
    /// `(d, k)` pairs with Mahler volume below `4^d/d!`.
    pub violations: Vec<(usize, usize)>,
    /// `(d, k)` pairs with exact equality.
    pub equalities: Vec<(usize, usize)>,
    /// Per `d`, the smallest `k` attaining the minimal Mahler volume.
    pub minimizers: Vec<(usize, usize)>,
}

impl MahlerReport {
    /// Equality holds exactly at `k ∈ {1, d}` and nowhere else.
    pub fn equality_only_at_endpoints(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.equality == (r.k == 1 || r.k == r.d))
    }
}

/// Mahler volumes for all integer `1 <= k <= d <= d_max`, compared exactly to
/// `4^d/d!`. Rows are computed in parallel per `d` and returned in order.
pub fn mahler_sweep(d_max: usize) -> Result<MahlerReport> {
    if d_max == 0 {
        return Err(domain("mahler sweep needs d_max >= 1"));
    }
    let rows: Vec<MahlerRow> = (1..=d_max)
        .into_par_iter()
        .map(|d| {
            let bound = mahler_bound(d);
            (1..=d)
                .map(|k| {
                    let p = Params::integer(d, k).expect("1 <= k <= d");
                    let mahler = mahler_volume(&p);
                    MahlerRow {
                        d,
                        k,
                        satisfied: mahler >= bound,
                        equality: mahler == bound,
                        mahler,
                        bound: bound.clone(),
                    }
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();
    let violations = rows
        .iter()
        .filter(|r| !r.satisfied)
        .map(|r| (r.d, r.k))
        .collect();
    let equalities = rows
        .iter()
        .filter(|r| r.equality)
        .map(|r| (r.d, r.k))
        .collect();
    let minimizers = (1..=d_max)
        .map(|d| {
            let best = rows
                .iter()
                .filter(|r| r.d == d)
                .min_by(|a, b| a.mahler.cmp(&b.mahler).then(a.k.cmp(&b.k)))
                .expect("every d has rows");
            (d, best.k)
        })
        .collect();
    Ok(MahlerReport {
        d_max,
        rows,
        violations,
        equalities,
        minimizers,
    })
}

/// Orthant volume via Eulerian numbers for integer `k`: `Σ_{l<k} A(d,l)/d!`.
pub fn orthant_volume_eulerian(d: usize, k: usize) -> Result<BigRational> {
    let mut total = BigInt::zero();
    for l in 0..k.min(d) {
        total += crate::arith::eulerian(d as u64, l as u64)?;
    }
    Ok(BigRational::from_integer(total) / fact(d))
}

/// Checks `Σ_l 2^l C(d,l) piece_volume(d,k,l) = k^d vol(rho(d,k))`.
pub fn piece_decomposition_holds(p: &Params) -> Result<bool> {
    let d = p.d();
    let mut total = BigRational::zero();
    for l in 0..=p.floor_k() {
        total += pow2(l as i64)
            * BigRational::from_integer(binomial(d as u64, l as i64))
            * piece_volume(d, p.k(), l)?;
    }
    Ok(total == pow(p.k(), d as i64) * volume_rho(p))
}

impl MahlerRow {
    pub fn ratio(&self) -> BigRational {
        &self.mahler / &self.bound
    }
}
