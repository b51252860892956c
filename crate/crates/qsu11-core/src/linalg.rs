//! Exact linear algebra over the scalar field.
//!
//! Small dense routines backing the brute-force searches: an incremental
//! row space for membership tests and a nullspace computation for solving
//! homogeneous systems. Everything works by fraction-free-style Gaussian
//! elimination with exact division, so results are certificates, not
//! approximations.

use crate::scalar::Scalar;

/// A row space maintained in reduced echelon form.
#[derive(Debug, Default)]
pub struct RowSpace {
    /// Rows with strictly increasing pivot columns, each pivot normalized
    /// to one and cleared from every other stored row.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl RowSpace {
    pub fn new() -> RowSpace {
        RowSpace { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows in place.
    fn reduce(&self, v: &mut [Scalar]) {
        for (pivot, row) in &self.rows {
            let c = v[*pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (j, rj) in row.iter().enumerate() {
                if !rj.is_zero() {
                    v[j] = v[j].sub(&c.mul(rj));
                }
            }
        }
    }

    /// Inserts a vector; returns true when it enlarges the span.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        self.reduce(&mut v);
        let pivot = match v.iter().position(|c| !c.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let inv = v[pivot].recip().expect("nonzero pivot");
        for c in v.iter_mut() {
            if !c.is_zero() {
                *c = c.mul(&inv);
            }
        }
        // Clear the new pivot column from the existing rows.
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot].clone();
            if c.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    row[j] = row[j].sub(&c.mul(vj));
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, v));
        true
    }

    /// Membership test: true when `v` lies in the span.
    pub fn contains(&self, mut v: Vec<Scalar>) -> bool {
        self.reduce(&mut v);
        v.iter().all(|c| c.is_zero())
    }
}

/// Basis of the nullspace of the homogeneous system `rows * c = 0`, each
/// row a length-`n` equation over the unknowns.
pub fn nullspace(rows: &[Vec<Scalar>], n: usize) -> Vec<Vec<Scalar>> {
    let mut space = RowSpace::new();
    for r in rows {
        assert_eq!(r.len(), n, "equation width mismatch");
        space.insert(r.clone());
    }
    let pivots: Vec<usize> = space.rows.iter().map(|(p, _)| *p).collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); n];
        v[free] = Scalar::one();
        // Back-substitute each pivot row: c_pivot = -sum row[j] c_j.
        for (pivot, row) in &space.rows {
            v[*pivot] = row[free].neg();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_membership() {
        let mut space = RowSpace::new();
        assert!(space.insert(vec![s(1), s(2), s(0)]));
        assert!(space.insert(vec![s(0), s(1), s(1)]));
        assert!(!space.insert(vec![s(1), s(3), s(1)]));
        assert_eq!(space.rank(), 2);
        assert!(space.contains(vec![s(2), s(5), s(1)]));
        assert!(!space.contains(vec![s(0), s(0), s(1)]));
    }

    #[test]
    fn rational_function_pivots() {
        let q = Scalar::q_pow(1);
        let mut space = RowSpace::new();
        assert!(space.insert(vec![q.clone(), Scalar::one()]));
        assert!(!space.insert(vec![Scalar::one(), q.recip().unwrap()]));
        assert_eq!(space.rank(), 1);
    }

    #[test]
    fn nullspace_of_small_system() {
        // x + y - 2z = 0 and y - z = 0 has kernel spanned by (1, 1, 1).
        let rows = vec![
            vec![s(1), s(1), s(-2)],
            vec![s(0), s(1), s(-1)],
        ];
        let basis = nullspace(&rows, 3);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        let ratio = v[0].clone();
        assert!(!ratio.is_zero());
        assert_eq!(v[1], ratio);
        assert_eq!(v[2], ratio);
    }

    #[test]
    fn nullspace_vectors_satisfy_equations() {
        let q = Scalar::q_pow(1);
        let rows = vec![
            vec![s(1), q.clone(), s(0), s(0)],
            vec![s(0), s(0), s(1), q.neg()],
        ];
        let basis = nullspace(&rows, 4);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for r in &rows {
                let mut acc = Scalar::zero();
                for (a, b) in r.iter().zip(v.iter()) {
                    acc = acc.add(&a.mul(b));
                }
                assert!(acc.is_zero());
            }
        }
    }
}
