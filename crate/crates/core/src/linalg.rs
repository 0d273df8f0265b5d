//! Small exact linear algebra over `BigRational`.

use num_traits::{One, Zero};

use crate::arith::BigRational;

/// Incrementally maintained row-echelon basis.
#[derive(Debug, Clone, Default)]
pub(crate) struct EchelonBasis {
    /// (pivot column, row normalized so the pivot is 1)
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl EchelonBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|(c, _)| *c).collect();
        p.sort_unstable();
        p
    }

    /// Reduces `v` against the basis and keeps it if independent.
    pub fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        for (col, row) in &self.rows {
            if !v[*col].is_zero() {
                let f = v[*col].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &f * b;
                }
            }
        }
        let Some(col) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[col].recip();
        for a in v.iter_mut() {
            *a *= &inv;
        }
        // Keep earlier rows reduced at the new pivot.
        for (_, row) in self.rows.iter_mut() {
            if !row[col].is_zero() {
                let f = row[col].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    *a -= &f * b;
                }
            }
        }
        self.rows.push((col, v));
        true
    }
}

/// Dimension of the affine hull of `points` (0 for a single point).
pub(crate) fn affine_dim<'a>(points: impl IntoIterator<Item = &'a [BigRational]>) -> usize {
    affine_basis(points).rank()
}

pub(crate) fn affine_basis<'a>(
    points: impl IntoIterator<Item = &'a [BigRational]>,
) -> EchelonBasis {
    let mut iter = points.into_iter();
    let mut basis = EchelonBasis::default();
    let Some(origin) = iter.next() else {
        return basis;
    };
    let ambient = origin.len();
    for p in iter {
        if basis.rank() == ambient {
            break;
        }
        basis.insert(p.iter().zip(origin).map(|(a, b)| a - b).collect());
    }
    basis
}

pub(crate) fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            let (top, bottom) = m.split_at_mut(r);
            for (a, b) in bottom[0].iter_mut().zip(&top[col]).skip(col) {
                *a -= &f * b;
            }
        }
    }
    det
}

/// A nonzero vector orthogonal to every row, when the rows have nullity exactly 1.
pub(crate) fn normal_vector(rows: &[Vec<BigRational>], ambient: usize) -> Option<Vec<BigRational>> {
    let mut basis = EchelonBasis::default();
    for r in rows {
        basis.insert(r.clone());
    }
    if basis.rank() + 1 != ambient {
        return None;
    }
    let pivots = basis.pivots();
    let free = (0..ambient).find(|c| !pivots.contains(c))?;
    let mut n = vec![BigRational::zero(); ambient];
    n[free] = BigRational::one();
    for (col, row) in &basis.rows {
        n[*col] = -row[free].clone();
    }
    Some(n)
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn v(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn affine_dimension() {
        let pts = [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert_eq!(affine_dim(pts.iter().map(|p| p.as_slice())), 2);
        let line = [v(&[0, 0]), v(&[1, 1]), v(&[2, 2])];
        assert_eq!(affine_dim(line.iter().map(|p| p.as_slice())), 1);
        assert_eq!(affine_dim([v(&[5, 5]).as_slice()]), 0);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(vec![v(&[2, 0]), v(&[0, 3])]), int(6));
        assert_eq!(determinant(vec![v(&[0, 1]), v(&[1, 0])]), int(-1));
        assert_eq!(determinant(vec![v(&[1, 2]), v(&[2, 4])]), int(0));
        let m = vec![
            vec![rat(1, 2), int(1), int(0)],
            vec![int(0), int(3), int(1)],
            vec![int(2), int(0), int(1)],
        ];
        // 1/2·3 - 1·(0 - 2) + 0 = 7/2
        assert_eq!(determinant(m), rat(7, 2));
    }

    #[test]
    fn normals() {
        let n = normal_vector(&[v(&[1, -1, 0]), v(&[1, 0, -1])], 3).unwrap();
        assert_eq!(dot(&n, &v(&[1, -1, 0])), int(0));
        assert_eq!(dot(&n, &v(&[1, 0, -1])), int(0));
        assert!(n.iter().any(|x| !x.is_zero()));
        assert!(normal_vector(&[v(&[1, 1, 0]), v(&[2, 2, 0])], 3).is_none());
    }
}
