//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use polyball::arith::{int, rat, to_f64, BigRational, Params};
use polyball::combinatorics::{f_vector, rep, total_faces_and_kalai, FVector, Family};
use polyball::face_lattice::lattice_of;
use polyball::oracle::{cube_section_measure, monte_carlo_volume, XorShift64Star};
use polyball::suites::{self, SuiteConfig, BOUNDARY_CASES};
use polyball::volume::{
    boundary_volume_rho_star, cube_section_volume, halfspace_cube_volume, mahler_sweep, volume_rho,
    volume_rho_star,
};
use polyball::SurdValue;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn volume_constancy() -> Outcome {
    for d in 2..=50 {
        let v = volume_rho(&Params::integer(d, 2).map_err(err)?);
        ensure(v == int(2), || format!("d={d}: {v}"))?;
    }
    Ok("vol rho(d,2) = 2 for 2 <= d <= 50".into())
}

fn twenty_four_cell() -> Outcome {
    let p = Params::integer(4, 2).map_err(err)?;
    let expected = FVector::from_u64(&[24, 96, 96, 24]);
    let closed = f_vector(&p, Family::Primal).map_err(err)?;
    let (_, lattice) = lattice_of(&rep(&p, Family::Primal).map_err(err)?).map_err(err)?;
    ensure(closed == expected && lattice.fvector == expected, || {
        format!("closed {closed}, oracle {}", lattice.fvector)
    })?;
    Ok(format!("closed and oracle both {expected}"))
}

fn fvector_equivalence() -> Outcome {
    let mut cases = 0;
    for d in 3..=6 {
        for k in 1..=d {
            let p = Params::integer(d, k).map_err(err)?;
            let closed = f_vector(&p, Family::Primal).map_err(err)?;
            let closed_dual = f_vector(&p, Family::Dual).map_err(err)?;
            let (_, primal) = lattice_of(&rep(&p, Family::Primal).map_err(err)?).map_err(err)?;
            let (_, dual) = lattice_of(&rep(&p, Family::Dual).map_err(err)?).map_err(err)?;
            ensure(closed == primal.fvector, || {
                format!("{p}: closed {closed} vs oracle {}", primal.fvector)
            })?;
            ensure(dual.fvector == primal.fvector.reversed(), || {
                format!("{p}: dual oracle {} is not the reversal", dual.fvector)
            })?;
            ensure(closed_dual == closed.reversed(), || {
                format!("{p}: closed dual {closed_dual}")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (d,k) pairs, 3 <= d <= 6"))
}

fn mahler() -> Outcome {
    let report = mahler_sweep(100).map_err(err)?;
    ensure(report.rows.len() == 5050, || {
        format!("{} rows", report.rows.len())
    })?;
    ensure(report.violations.is_empty(), || {
        format!("violations at {:?}", report.violations)
    })?;
    ensure(report.equality_only_at_endpoints(), || {
        format!("equalities at {:?}", report.equalities)
    })?;
    Ok("5050 pairs, 0 violations, equality exactly at k in {1, d}".into())
}

fn kalai() -> Outcome {
    for d in 1..=12 {
        for k in 1..=d {
            let p = Params::integer(d, k).map_err(err)?;
            let (total, ok) = total_faces_and_kalai(&p).map_err(err)?;
            ensure(ok, || format!("{p}: {total} faces"))?;
        }
    }
    Ok("total faces >= 3^d for all integer k, d <= 12".into())
}

fn dual_volume() -> Outcome {
    let p = Params::integer(3, 2).map_err(err)?;
    let exact = volume_rho_star(&p);
    ensure(exact == rat(20, 3), || format!("closed form {exact}"))?;
    let est = monte_carlo_volume(
        || |x: &[f64]| polyball::norms::in_rho_star_f64(x, 2.0),
        3,
        1.0,
        10_000_000,
        20240601,
    )
    .map_err(err)?;
    let z = est.z_score(to_f64(&exact));
    ensure(z <= 4.0, || {
        format!("estimate {} ± {}, z = {z:.2}", est.estimate, est.stderr)
    })?;
    Ok(format!(
        "20/3 exact; Monte Carlo {:.5} ± {:.5} (z = {z:.2}, 10^7 samples)",
        est.estimate, est.stderr
    ))
}

fn dual_boundary() -> Outcome {
    let p = Params::integer(3, 2).map_err(err)?;
    let closed = boundary_volume_rho_star(&p);
    let expected = SurdValue::rational(int(12)) + SurdValue::term(int(4), 3u32);
    ensure(closed == expected, || format!("closed form {closed}"))?;
    let (cube, slanted) = suites::triangulated_boundary_rho_star(&p).map_err(err)?;
    ensure(cube == SurdValue::rational(int(12)), || {
        format!("square facets total {cube}")
    })?;
    ensure(slanted == SurdValue::term(int(4), 3u32), || {
        format!("triangle facets total {slanted}")
    })?;
    Ok(format!("{closed} = squares {cube} + triangles {slanted}"))
}

fn boundary_arbitration() -> Outcome {
    let mut lines = Vec::new();
    for (d, k) in BOUNDARY_CASES {
        let p = Params::integer(d, k).map_err(err)?;
        let (ok, detail) = suites::boundary_rho_case(&p).map_err(err)?;
        ensure(ok, || format!("{p}: {detail}"))?;
        lines.push(format!("    {p}: {detail}"));
    }
    println!("  boundary discrepancy report (printed formula vs facet triangulation):");
    for l in &lines {
        println!("{l}");
    }
    Ok("triangulation = corrected = d x printed in all 6 cases".into())
}

fn norms() -> Outcome {
    let cfg = SuiteConfig {
        d_max: 8,
        seed: 9,
        norm_trials: 1000,
        ..SuiteConfig::default()
    };
    let report = suites::norm_suite(&cfg);
    ensure(report.passed, || {
        report
            .failures()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ")
    })?;
    Ok(report.checks[0].detail.clone())
}

fn identities() -> Outcome {
    let mut names = Vec::new();
    for (name, r) in suites::identity_checks(10) {
        let (ok, detail) = r.map_err(|e| format!("{name}: {e}"))?;
        ensure(ok, || format!("{name}: {detail}"))?;
        names.push(name);
    }
    Ok(names.join(", "))
}

fn v(xs: &[i64]) -> Vec<BigRational> {
    xs.iter().map(|&x| int(x)).collect()
}

/// Nonzero integer coefficients in `[-3, 3]` and an integer offset within reach.
fn random_instance(rng: &mut XorShift64Star, d: usize) -> (Vec<i64>, i64) {
    let a: Vec<i64> = (0..d)
        .map(|_| {
            let m = 1 + (rng.next_u64() % 3) as i64;
            if rng.next_u64() & 1 == 1 {
                -m
            } else {
                m
            }
        })
        .collect();
    let reach: i64 = a.iter().map(|x| x.abs()).sum();
    let c = (rng.next_u64() % (2 * reach as u64 + 1)) as i64 - reach;
    (a, c)
}

fn halfspace_and_sections() -> Outcome {
    let trivial = [
        (
            halfspace_cube_volume(&v(&[1]), &rat(1, 2)).map_err(err)?,
            rat(1, 2),
        ),
        (
            halfspace_cube_volume(&v(&[1, 1]), &int(1)).map_err(err)?,
            rat(1, 2),
        ),
        (
            halfspace_cube_volume(&v(&[1, 1, 1]), &rat(3, 2)).map_err(err)?,
            rat(1, 2),
        ),
    ];
    for (got, want) in &trivial {
        ensure(got == want, || format!("half-space {got} vs {want}"))?;
    }
    let s = cube_section_volume(&v(&[1, 1]), &int(0)).map_err(err)?;
    ensure(s == SurdValue::term(int(2), 2u32), || {
        format!("diagonal section {s}")
    })?;
    let s = cube_section_volume(&v(&[1, 1]), &int(2)).map_err(err)?;
    ensure(s.is_zero(), || format!("corner section {s}"))?;

    let mut rng = XorShift64Star::new(77);
    let mut worst_z: f64 = 0.0;
    for trial in 0..20u64 {
        // Half-space: sample [-1,1]^d and map to the unit cube.
        let d = 1 + (rng.next_u64() % 5) as usize;
        let (a, c) = random_instance(&mut rng, d);
        let exact = halfspace_cube_volume(&v(&a), &int(c)).map_err(err)?;
        let af: Vec<f64> = a.iter().map(|&x| x as f64).collect();
        let cf = c as f64;
        let est = monte_carlo_volume(
            || {
                let af = af.clone();
                move |x: &[f64]| {
                    af.iter()
                        .zip(x)
                        .map(|(ai, xi)| ai * 0.5 * (xi + 1.0))
                        .sum::<f64>()
                        <= cf
                }
            },
            d,
            1.0,
            1_000_000,
            1000 + trial,
        )
        .map_err(err)?;
        let scale = f64::powi(2.0, d as i32);
        let z = est.z_score(to_f64(&exact) * scale);
        worst_z = worst_z.max(z);
        ensure(z <= 4.0, || {
            format!(
                "a={a:?}, c={c}: exact {exact}, estimate {} (z = {z:.2})",
                est.estimate / scale
            )
        })?;

        // Section of [-1,1]^d (d >= 2): closed form vs exact triangulation.
        let d = 2 + (rng.next_u64() % 4) as usize;
        let (a, c) = random_instance(&mut rng, d);
        let closed = cube_section_volume(&v(&a), &int(c)).map_err(err)?;
        let oracle = cube_section_measure(&v(&a), &int(c)).map_err(err)?;
        ensure(closed == oracle, || {
            format!("section a={a:?}, c={c}: {closed} vs {oracle}")
        })?;
    }
    Ok(format!(
        "5 symmetry cases exact; 20 random instances agree (max z = {worst_z:.2}, sections exact)"
    ))
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            title: "volume constancy of rho(d,2)",
            limit: Some(Duration::from_secs(1)),
            run: volume_constancy,
        },
        Criterion {
            id: 2,
            title: "24-cell f-vector",
            limit: Some(Duration::from_secs(10)),
            run: twenty_four_cell,
        },
        Criterion {
            id: 3,
            title: "f-vector oracle equivalence",
            limit: Some(Duration::from_secs(300)),
            run: fvector_equivalence,
        },
        Criterion {
            id: 4,
            title: "Mahler sweep to d = 100",
            limit: Some(Duration::from_secs(120)),
            run: mahler,
        },
        Criterion {
            id: 5,
            title: "3^d face bound",
            limit: None,
            run: kalai,
        },
        Criterion {
            id: 6,
            title: "dual volume",
            limit: Some(Duration::from_secs(30)),
            run: dual_volume,
        },
        Criterion {
            id: 7,
            title: "dual boundary",
            limit: None,
            run: dual_boundary,
        },
        Criterion {
            id: 8,
            title: "boundary erratum arbitration",
            limit: None,
            run: boundary_arbitration,
        },
        Criterion {
            id: 9,
            title: "norm oracle equivalence",
            limit: Some(Duration::from_secs(30)),
            run: norms,
        },
        Criterion {
            id: 10,
            title: "identity suite",
            limit: None,
            run: identities,
        },
        Criterion {
            id: 11,
            title: "half-space and section formulas",
            limit: None,
            run: halfspace_and_sections,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {} [{elapsed:.2?}]: {detail}", c.id, c.title),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {} [{elapsed:.2?}]: {detail}", c.id, c.title);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
