//! OFF export for `d = 3`: facet polygons ordered around their boundary edges
//! and oriented counter-clockwise seen from outside.

use std::fmt::Write as _;

use polyball::arith::to_f64;
use polyball::combinatorics::rep;
use polyball::face_lattice::lattice_of;
use polyball::{BigRational, Error, Family, Params};

fn sub(a: &[BigRational], b: &[BigRational]) -> [BigRational; 3] {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross(a: &[BigRational; 3], b: &[BigRational; 3]) -> [BigRational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn off_mesh(p: &Params, family: Family) -> anyhow::Result<String> {
    if p.d() != 3 {
        return Err(
            Error::Unsupported(format!("OFF export needs d = 3, got d = {}", p.d())).into(),
        );
    }
    let r = rep(p, family)?;
    let (incidence, lattice) = lattice_of(&r)?;
    let edges: Vec<&[usize]> = lattice
        .faces_of_dim(1)
        .map(|f| f.vertex_set.as_slice())
        .collect();

    let mut polygons = Vec::with_capacity(incidence.facet_count());
    for (facet, ineq) in incidence.facets.iter().zip(&r.inequalities) {
        let on: Vec<&[usize]> = edges
            .iter()
            .copied()
            .filter(|e| e.iter().all(|&v| facet.contains(v)))
            .collect();
        // Walk the boundary cycle of the polygon.
        let start = on[0][0];
        let mut cycle = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = on
                .iter()
                .find_map(|e| match (e[0], e[1]) {
                    (a, b) if a == cur && b != prev => Some(b),
                    (a, b) if b == cur && a != prev => Some(a),
                    _ => None,
                })
                .expect("facet boundary is a cycle");
            if next == start {
                break;
            }
            prev = cur;
            cur = next;
            cycle.push(cur);
        }
        let v = |i: usize| r.vertices[cycle[i]].as_slice();
        let n = cross(&sub(v(1), v(0)), &sub(v(2), v(0)));
        let outward: BigRational = n.iter().zip(&ineq.normal).map(|(a, b)| a * b).sum();
        if outward < BigRational::from_integer(0.into()) {
            cycle.reverse();
        }
        polygons.push(cycle);
    }

    let mut s = String::new();
    writeln!(s, "OFF").unwrap();
    writeln!(s, "{} {} {}", r.vertices.len(), polygons.len(), edges.len()).unwrap();
    for v in &r.vertices {
        let coords: Vec<String> = v.iter().map(|c| format!("{}", to_f64(c))).collect();
        writeln!(s, "{}", coords.join(" ")).unwrap();
    }
    for poly in &polygons {
        let idx: Vec<String> = poly.iter().map(usize::to_string).collect();
        writeln!(s, "{} {}", poly.len(), idx.join(" ")).unwrap();
    }
    Ok(s)
}
