//! The k-norm `‖x‖_(k) = inf{‖u‖₁ + k‖v‖∞ : u + v = x}`, its dual, and membership
//! in the two unit balls.
//!
//! Every function is generic over [`Scalar`], so the same code runs exactly on
//! [`BigRational`] coordinates and approximately on `f64`.
//!
//! # Evaluating the infimum
//!
//! Fix `t = ‖v‖∞`. The best split then takes `v_i = clamp(x_i, -t, t)`, leaving
//! `|u_i| = max(|x_i| - t, 0)`, so
//!
//! ```text
//! ‖x‖_(k) = min_{t ≥ 0} g(t),   g(t) = k·t + Σ_i max(|x_i| - t, 0).
//! ```
//!
//! `g` is convex and piecewise linear with breakpoints at the `|x_i|`, hence the
//! minimum sits at `0` or at one of them ([`knorm_variational`]). Walking the
//! breakpoints in decreasing order, the slope of `g` is `k - #{i : |x_i| > t}`,
//! which changes sign after `floor(k)` coordinates; evaluating there gives the
//! closed form used by [`knorm`]: the `floor(k)` largest `|x_i|` plus
//! `(k - floor(k))` times the next one.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::arith::{to_f64, BigRational, Params};
use crate::error::{domain, Error, Result};

pub trait Scalar: Clone + PartialOrd + Signed + fmt::Debug {
    fn from_rational(q: &BigRational) -> Self;

    /// Slack used by the membership classifiers: zero for exact types.
    fn default_tolerance() -> Self;
}

impl Scalar for f64 {
    fn from_rational(q: &BigRational) -> Self {
        to_f64(q)
    }

    fn default_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn default_tolerance() -> Self {
        BigRational::zero()
    }
}

/// Position of a point relative to a unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

impl Membership {
    /// Classifies a gauge value against 1 with slack `tol`.
    pub fn from_gauge<T: Scalar>(gauge: &T, tol: &T) -> Self {
        let one = T::one();
        if *gauge > one.clone() + tol.clone() {
            Membership::Exterior
        } else if *gauge < one - tol.clone() {
            Membership::Interior
        } else {
            Membership::Boundary
        }
    }

    pub fn is_member(self) -> bool {
        self != Membership::Exterior
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Interior => "interior",
            Membership::Boundary => "boundary",
            Membership::Exterior => "exterior",
        })
    }
}

fn check_dim<T>(x: &[T], d: usize) -> Result<()> {
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: x.len(),
        });
    }
    Ok(())
}

fn max_of<T: Scalar>(values: impl Iterator<Item = T>) -> T {
    values.fold(T::zero(), |m, v| if v > m { v } else { m })
}

/// Closed-form k-norm.
pub fn knorm<T: Scalar>(x: &[T], p: &Params) -> Result<T> {
    check_dim(x, p.d())?;
    let mut mags: Vec<T> = x.iter().map(Signed::abs).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).expect("coordinates must be comparable"));
    let m = p.floor_k();
    let mut total = mags[..m].iter().cloned().fold(T::zero(), |acc, v| acc + v);
    if m < p.d() {
        total = total + T::from_rational(&p.frac_k()) * mags[m].clone();
    }
    Ok(total)
}

/// The k-norm by direct minimization of `g(t) = k·t + Σ max(|x_i| - t, 0)`
/// over the breakpoints `{0} ∪ {|x_i|}`; see the module docs.
pub fn knorm_variational<T: Scalar>(x: &[T], p: &Params) -> Result<T> {
    check_dim(x, p.d())?;
    let k = T::from_rational(p.k());
    let mags: Vec<T> = x.iter().map(Signed::abs).collect();
    let g = |t: &T| {
        mags.iter().fold(k.clone() * t.clone(), |acc, a| {
            let excess = a.clone() - t.clone();
            if excess > T::zero() {
                acc + excess
            } else {
                acc
            }
        })
    };
    let mut best = g(&T::zero());
    for t in &mags {
        let v = g(t);
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// Gauge of `rho*(d,k) = kβ_d ∩ γ_d`: `max(‖x‖∞, ‖x‖₁ / k)`.
pub fn dual_norm<T: Scalar>(x: &[T], p: &Params) -> Result<T> {
    check_dim(x, p.d())?;
    let linf = max_of(x.iter().map(Signed::abs));
    let l1 = x.iter().fold(T::zero(), |acc, v| acc + v.abs());
    let scaled = l1 / T::from_rational(p.k());
    Ok(if scaled > linf { scaled } else { linf })
}

/// Number of nonzero coordinates.
pub fn zero_norm<T: Scalar>(x: &[T]) -> usize {
    x.iter().filter(|v| !v.is_zero()).count()
}

/// `‖x‖_(k) - ‖x‖_(l)` for integers `1 <= k < l <= d`. Never positive, and zero
/// exactly when `x` has at most `k` nonzero coordinates.
pub fn sparsity_gap<T: Scalar>(x: &[T], k: usize, l: usize) -> Result<T> {
    let d = x.len();
    if k == 0 || k >= l || l > d {
        return Err(domain(format!(
            "sparsity gap needs 1 <= k < l <= d, got k={k}, l={l}, d={d}"
        )));
    }
    Ok(knorm(x, &Params::integer(d, k)?)? - knorm(x, &Params::integer(d, l)?)?)
}

pub fn member_rho<T: Scalar>(x: &[T], p: &Params) -> Result<Membership> {
    member_rho_with_tol(x, p, &T::default_tolerance())
}

pub fn member_rho_with_tol<T: Scalar>(x: &[T], p: &Params, tol: &T) -> Result<Membership> {
    Ok(Membership::from_gauge(&knorm(x, p)?, tol))
}

pub fn member_rho_star<T: Scalar>(x: &[T], p: &Params) -> Result<Membership> {
    member_rho_star_with_tol(x, p, &T::default_tolerance())
}

pub fn member_rho_star_with_tol<T: Scalar>(x: &[T], p: &Params, tol: &T) -> Result<Membership> {
    Ok(Membership::from_gauge(&dual_norm(x, p)?, tol))
}

/// `‖x‖∞ <= 1` and `‖x‖₁ <= k`, checked directly from the intersection form.
pub fn in_rho_star_f64(x: &[f64], k: f64) -> bool {
    x.iter().all(|v| v.abs() <= 1.0) && x.iter().map(|v| v.abs()).sum::<f64>() <= k
}

/// Fast float membership in `rho(d,k)` without allocation beyond a small buffer;
/// used by the Monte Carlo oracle. `floor_k` and `frac_k` come from exact `Params`.
pub fn in_rho_f64(x: &[f64], floor_k: usize, frac_k: f64, buf: &mut Vec<f64>) -> bool {
    buf.clear();
    buf.extend(x.iter().map(|v| v.abs()));
    buf.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut total: f64 = buf[..floor_k].iter().sum();
    if floor_k < buf.len() {
        total += frac_k * buf[floor_k];
    }
    total <= 1.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::combinatorics::vrep_rho;
    use proptest::prelude::*;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&n| int(n)).collect()
    }

    fn params(d: usize, k: &str) -> Params {
        Params::parse(d, k).unwrap()
    }

    #[test]
    fn knorm_examples() {
        let x = q(&[3, 1, -2]);
        assert_eq!(knorm(&x, &params(3, "2")).unwrap(), int(5));
        assert_eq!(knorm(&x, &params(3, "5/2")).unwrap(), rat(11, 2));
        assert_eq!(knorm(&x, &params(3, "1")).unwrap(), int(3));
        assert_eq!(knorm(&x, &params(3, "3")).unwrap(), int(6));
        assert_eq!(knorm(&[3.0, 1.0, -2.0], &params(3, "2.5")).unwrap(), 5.5);
    }

    #[test]
    fn variational_examples() {
        let x = q(&[3, 1, -2]);
        assert_eq!(knorm_variational(&x, &params(3, "2")).unwrap(), int(5));
        assert_eq!(
            knorm_variational(&x, &params(3, "5/2")).unwrap(),
            rat(11, 2)
        );
        assert_eq!(
            knorm_variational(&q(&[1, 0, 0]), &params(3, "3/2")).unwrap(),
            int(1)
        );
        assert_eq!(
            knorm_variational(&q(&[0, 0, 0]), &params(3, "2")).unwrap(),
            int(0)
        );
    }

    #[test]
    fn dual_examples() {
        assert_eq!(
            dual_norm(&q(&[1, 1, 1]), &params(3, "2")).unwrap(),
            rat(3, 2)
        );
        assert_eq!(
            dual_norm(&q(&[1, 0, 0]), &params(3, "5/2")).unwrap(),
            int(1)
        );
        let x = q(&[3, 1, -2]);
        assert_eq!(dual_norm(&x, &params(3, "1")).unwrap(), int(6));
        assert_eq!(dual_norm(&x, &params(3, "3")).unwrap(), int(3));
    }

    #[test]
    fn dual_norm_is_support_function_of_rho() {
        // max over vertices of rho(3,2) of <x, v>
        let p = params(3, "2");
        let x = q(&[1, 1, 1]);
        let support = vrep_rho(&p)
            .unwrap()
            .iter()
            .map(|v| v.iter().zip(&x).map(|(a, b)| a * b).sum::<BigRational>())
            .max()
            .unwrap();
        assert_eq!(support, rat(3, 2));
        assert_eq!(dual_norm(&x, &p).unwrap(), support);
    }

    #[test]
    fn zero_norm_and_sparsity() {
        assert_eq!(zero_norm(&q(&[3, 0, -2])), 2);
        assert_eq!(zero_norm(&q(&[0, 0, 0])), 0);
        assert_eq!(zero_norm(&q(&[1, 1, 1, 1])), 4);
        assert_eq!(sparsity_gap(&q(&[3, 0, -2]), 2, 3).unwrap(), int(0));
        assert_eq!(sparsity_gap(&q(&[3, 1, -2]), 2, 3).unwrap(), int(-1));
        assert_eq!(sparsity_gap(&q(&[0, 0, 0]), 1, 2).unwrap(), int(0));
        assert!(matches!(
            sparsity_gap(&q(&[1, 2, 3]), 2, 2),
            Err(Error::Domain(_))
        ));
        assert!(sparsity_gap(&q(&[1, 2, 3]), 3, 2).is_err());
    }

    #[test]
    fn sparsity_equivalence_exhaustive() {
        for d in 2..=6usize {
            let total = 3usize.pow(d as u32);
            for code in 0..total {
                let mut c = code;
                let x: Vec<BigRational> = (0..d)
                    .map(|_| {
                        let v = (c % 3) as i64 - 1;
                        c /= 3;
                        int(v)
                    })
                    .collect();
                for k in 1..d {
                    for l in k + 1..=d {
                        let gap = sparsity_gap(&x, k, l).unwrap();
                        assert!(gap <= int(0));
                        assert_eq!(gap.is_zero(), zero_norm(&x) <= k, "{x:?} k={k} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let p = params(3, "2");
        assert_eq!(
            member_rho(&[rat(1, 2), rat(1, 2), int(0)], &p).unwrap(),
            Membership::Boundary
        );
        for k in ["1", "3/2", "2", "3"] {
            assert_eq!(
                member_rho(&q(&[1, 0, 0]), &params(3, k)).unwrap(),
                Membership::Boundary
            );
        }
        assert_eq!(
            member_rho(&[rat(3, 5), rat(3, 5), int(0)], &p).unwrap(),
            Membership::Exterior
        );
        assert_eq!(
            member_rho(&[0.6, 0.6, 0.0], &p).unwrap(),
            Membership::Exterior
        );
        assert_eq!(
            member_rho_star(&q(&[1, 1, 0]), &p).unwrap(),
            Membership::Boundary
        );
        assert_eq!(
            member_rho_star(&q(&[1, 1, 1]), &p).unwrap(),
            Membership::Exterior
        );
        assert_eq!(
            member_rho_star(&q(&[0, 0, 0]), &p).unwrap(),
            Membership::Interior
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p = params(3, "2");
        let err = knorm(&q(&[1, 2]), &p).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                expected: 3,
                found: 2
            }
        );
        assert!(knorm_variational(&q(&[1]), &p).is_err());
        assert!(dual_norm(&q(&[1, 2, 3, 4]), &p).is_err());
        assert!(member_rho_star(&q(&[1]), &p).is_err());
    }

    fn arb_case() -> impl Strategy<Value = (Vec<i64>, Params)> {
        (1usize..=8).prop_flat_map(|d| {
            (
                prop::collection::vec(-50i64..=50, d),
                (2i64..=2 * d as i64)
                    .prop_map(move |twice_k| Params::new(d, rat(twice_k, 2)).unwrap()),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn closed_form_matches_variational_exactly((coords, p) in arb_case()) {
            let x: Vec<BigRational> = coords.iter().map(|&c| rat(c, 7)).collect();
            prop_assert_eq!(knorm(&x, &p).unwrap(), knorm_variational(&x, &p).unwrap());
            let xf: Vec<f64> = coords.iter().map(|&c| c as f64 / 7.0).collect();
            let a = knorm(&xf, &p).unwrap();
            let b = knorm_variational(&xf, &p).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn knorm_is_monotone_in_k((coords, p) in arb_case()) {
            let x: Vec<BigRational> = coords.iter().map(|&c| int(c)).collect();
            let d = p.d();
            let mut prev = knorm(&x, &Params::integer(d, 1).unwrap()).unwrap();
            let linf = x.iter().map(|v| v.abs()).max().unwrap();
            prop_assert_eq!(&prev, &linf);
            for twice_k in 3..=2 * d as i64 {
                let cur = knorm(&x, &Params::new(d, rat(twice_k, 2)).unwrap()).unwrap();
                prop_assert!(cur >= prev);
                prev = cur;
            }
            let l1: BigRational = x.iter().map(|v| v.abs()).sum();
            prop_assert_eq!(prev, l1);
        }

        #[test]
        fn norm_axioms(
            (a, p) in arb_case(),
            seed in prop::collection::vec(-50i64..=50, 8),
            lambda in -9i64..=9,
        ) {
            let d = p.d();
            let x: Vec<BigRational> = a.iter().map(|&c| int(c)).collect();
            let y: Vec<BigRational> = seed[..d].iter().map(|&c| int(c)).collect();
            let sum: Vec<BigRational> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
            let scaled: Vec<BigRational> = x.iter().map(|u| u * int(lambda)).collect();
            for norm in [knorm::<BigRational>, dual_norm::<BigRational>] {
                let nx = norm(&x, &p).unwrap();
                prop_assert!(norm(&sum, &p).unwrap() <= &nx + norm(&y, &p).unwrap());
                prop_assert_eq!(norm(&scaled, &p).unwrap(), nx * int(lambda.abs()));
            }
        }

        #[test]
        fn dual_norm_matches_vertex_support((coords, p) in arb_case()) {
            prop_assume!(coords.iter().any(|&c| c != 0));
            let x: Vec<BigRational> = coords.iter().map(|&c| int(c)).collect();
            let support = vrep_rho(&p).unwrap()
                .iter()
                .map(|v| v.iter().zip(&x).map(|(a, b)| a * b).sum::<BigRational>())
                .max()
                .unwrap();
            prop_assert_eq!(support, dual_norm(&x, &p).unwrap());
        }

        #[test]
        fn gauge_consistency((coords, p) in arb_case()) {
            let x: Vec<BigRational> = coords.iter().map(|&c| rat(c, 40)).collect();
            let n = knorm(&x, &p).unwrap();
            prop_assert_eq!(member_rho(&x, &p).unwrap().is_member(), n <= int(1));
            let m = dual_norm(&x, &p).unwrap();
            prop_assert_eq!(member_rho_star(&x, &p).unwrap().is_member(), m <= int(1));
            let xf: Vec<f64> = x.iter().map(to_f64).collect();
            let mut buf = Vec::new();
            if (to_f64(&n) - 1.0).abs() > 1e-9 {
                prop_assert_eq!(in_rho_f64(&xf, p.floor_k(), to_f64(&p.frac_k()), &mut buf), n <= int(1));
            }
            if (to_f64(&m) - 1.0).abs() > 1e-9 {
                prop_assert_eq!(in_rho_star_f64(&xf, p.k_f64()), m <= int(1));
            }
        }
    }
}
