//! Brute-force face lattice of a polytope given by matching V- and H-reps.
//!
//! Every proper face is an intersection of facets, so the faces are the
//! nonempty vertex sets reachable from the facet vertex sets by repeated
//! intersection with a facet. Dimensions come from exact affine rank.

use std::collections::{HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use serde::Serialize;

use crate::combinatorics::{FVector, PolytopeRep};
use crate::error::{Error, Result};
use crate::linalg::affine_dim;

pub const DEFAULT_MAX_DIM: usize = 6;

/// Vertex × facet incidences, stored column-wise as vertex bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub dim: usize,
    pub vertex_count: usize,
    pub facets: Vec<FixedBitSet>,
}

impl IncidenceMatrix {
    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn is_incident(&self, vertex: usize, facet: usize) -> bool {
        self.facets[facet].contains(vertex)
    }

    /// Facets through each vertex.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        (0..self.vertex_count)
            .map(|v| self.facets.iter().filter(|f| f.contains(v)).count())
            .collect()
    }
}

/// Exact tightness test of every vertex against every inequality.
pub fn build_incidence(rep: &PolytopeRep) -> Result<IncidenceMatrix> {
    let n = rep.vertices.len();
    let mut facets = Vec::with_capacity(rep.inequalities.len());
    for (j, h) in rep.inequalities.iter().enumerate() {
        let mut col = FixedBitSet::with_capacity(n);
        for (i, v) in rep.vertices.iter().enumerate() {
            let value = h.eval(v);
            if value > h.rhs {
                return Err(Error::Inconsistent(format!(
                    "vertex {i} violates inequality {j}"
                )));
            }
            if value == h.rhs {
                col.insert(i);
            }
        }
        if col.count_ones(..) < rep.dim {
            return Err(Error::Inconsistent(format!(
                "inequality {j} is tight at only {} vertices",
                col.count_ones(..)
            )));
        }
        facets.push(col);
    }
    let m = IncidenceMatrix {
        dim: rep.dim,
        vertex_count: n,
        facets,
    };
    if let Some(v) = m.vertex_degrees().iter().position(|&deg| deg < rep.dim) {
        return Err(Error::Inconsistent(format!(
            "vertex {v} lies on fewer than {} facets",
            rep.dim
        )));
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceRecord {
    pub vertex_set: Vec<usize>,
    pub facet_set: Vec<usize>,
    pub dim: usize,
}

#[derive(Debug, Clone)]
pub struct FaceLattice {
    pub dim: usize,
    /// Proper nonempty faces ordered by dimension, then vertex set.
    pub faces: Vec<FaceRecord>,
    /// The polytope itself.
    pub improper: FaceRecord,
    pub fvector: FVector,
}

#[derive(Serialize)]
struct LatticeDump<'a> {
    dim: usize,
    f_vector: Vec<String>,
    faces_by_dim: Vec<Vec<&'a [usize]>>,
}

impl FaceLattice {
    pub fn faces_of_dim(&self, dim: usize) -> impl Iterator<Item = &FaceRecord> {
        self.faces.iter().filter(move |f| f.dim == dim)
    }

    pub fn facets(&self) -> impl Iterator<Item = &FaceRecord> {
        self.faces_of_dim(self.dim.saturating_sub(1))
    }

    /// JSON listing of vertex indices per face, grouped by dimension.
    pub fn to_json(&self) -> String {
        let dump = LatticeDump {
            dim: self.dim,
            f_vector: self.fvector.counts.iter().map(BigInt::to_string).collect(),
            faces_by_dim: (0..self.dim)
                .map(|i| {
                    self.faces_of_dim(i)
                        .map(|f| f.vertex_set.as_slice())
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dump).expect("lattice dump serializes")
    }

    /// Every face's vertex set equals the intersection of its facets.
    pub fn is_galois_closed(&self, m: &IncidenceMatrix) -> bool {
        self.faces.iter().all(|f| {
            let mut common = FixedBitSet::with_capacity(m.vertex_count);
            common.insert_range(..);
            for &j in &f.facet_set {
                common.intersect_with(&m.facets[j]);
            }
            common.ones().collect::<Vec<_>>() == f.vertex_set
        })
    }
}

pub fn enumerate_faces(m: &IncidenceMatrix, rep: &PolytopeRep) -> Result<FaceLattice> {
    enumerate_faces_with_guard(m, rep, DEFAULT_MAX_DIM)
}

pub fn enumerate_faces_with_guard(
    m: &IncidenceMatrix,
    rep: &PolytopeRep,
    max_dim: usize,
) -> Result<FaceLattice> {
    if rep.dim > max_dim {
        return Err(Error::GuardExceeded(format!(
            "face enumeration is limited to d <= {max_dim}; d = {} with {} vertices and {} facets \
             may have up to {} faces",
            rep.dim,
            m.vertex_count,
            m.facet_count(),
            BigInt::from(m.facet_count()).pow(rep.dim as u32 - 1)
        )));
    }
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut queue: VecDeque<FixedBitSet> = VecDeque::new();
    for f in &m.facets {
        if seen.insert(f.clone()) {
            queue.push_back(f.clone());
        }
    }
    while let Some(face) = queue.pop_front() {
        for f in &m.facets {
            let mut meet = face.clone();
            meet.intersect_with(f);
            if meet.count_ones(..) == 0 || meet == face {
                continue;
            }
            if seen.insert(meet.clone()) {
                queue.push_back(meet);
            }
        }
    }

    let mut faces: Vec<FaceRecord> = seen
        .into_iter()
        .map(|set| {
            let vertex_set: Vec<usize> = set.ones().collect();
            let facet_set = (0..m.facet_count())
                .filter(|&j| set.is_subset(&m.facets[j]))
                .collect();
            let dim = affine_dim(vertex_set.iter().map(|&i| rep.vertices[i].as_slice()));
            FaceRecord {
                vertex_set,
                facet_set,
                dim,
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertex_set).cmp(&(b.dim, &b.vertex_set)));

    let improper_dim = affine_dim(rep.vertices.iter().map(Vec::as_slice));
    let mut counts = vec![BigInt::from(0); rep.dim];
    for f in &faces {
        if f.dim >= rep.dim {
            return Err(Error::Inconsistent(format!(
                "face {:?} has dimension {} in a {}-polytope",
                f.vertex_set, f.dim, rep.dim
            )));
        }
        counts[f.dim] += 1;
    }
    Ok(FaceLattice {
        dim: rep.dim,
        faces,
        improper: FaceRecord {
            vertex_set: (0..m.vertex_count).collect(),
            facet_set: Vec::new(),
            dim: improper_dim,
        },
        fvector: FVector::new(counts),
    })
}

/// Builds incidences and enumerates faces in one go.
pub fn lattice_of(rep: &PolytopeRep) -> Result<(IncidenceMatrix, FaceLattice)> {
    let m = build_incidence(rep)?;
    let lattice = enumerate_faces(&m, rep)?;
    Ok((m, lattice))
}
