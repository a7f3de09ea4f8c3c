//! Exact rational linear algebra: reduced row echelon form, kernels, ranks
//! and deterministic pseudo-solves.
//!
//! Pivoting always prefers the smallest column index and the first usable
//! row, so every decomposition is deterministic. Solves are offered both
//! over the rationals and over any rational vector space (`QModule`), which
//! lets constant matrices act on `ExpPoly`-valued right-hand sides without
//! ever leaving exact arithmetic.

use crate::ring::Rational;
use num_traits::{One, Zero};

/// Dense rational matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

/// Anything that is a vector space over the rationals, elementwise.
pub trait QModule: Clone {
    fn q_zero_like(&self) -> Self;
    fn q_is_zero(&self) -> bool;
    fn q_add(&self, other: &Self) -> Self;
    fn q_scale(&self, c: &Rational) -> Self;
}

impl QModule for Rational {
    fn q_zero_like(&self) -> Self {
        Rational::zero()
    }
    fn q_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn q_add(&self, other: &Self) -> Self {
        self + other
    }
    fn q_scale(&self, c: &Rational) -> Self {
        self * c
    }
}

impl QModule for crate::ring::ExpPoly {
    fn q_zero_like(&self) -> Self {
        crate::ring::ExpPoly::zero(self.dim())
    }
    fn q_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn q_add(&self, other: &Self) -> Self {
        self.add(other).expect("chart dimensions agree")
    }
    fn q_scale(&self, c: &Rational) -> Self {
        self.scale(c)
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_cols(cols: Vec<Vec<Rational>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Mat::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Matrix times rational vector.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.apply_module(v)
    }

    /// Matrix times a vector with entries in any rational vector space.
    pub fn apply_module<V: QModule>(&self, v: &[V]) -> Vec<V> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc: Option<V> = None;
                for j in 0..self.cols {
                    if self[(i, j)].is_zero() {
                        continue;
                    }
                    let term = v[j].q_scale(&self[(i, j)]);
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.q_add(&term),
                    });
                }
                acc.unwrap_or_else(|| v[0].q_zero_like())
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form with the elimination transform.
///
/// Returns `(R, E, pivots)` with `R = E * A`, `R` in RREF and `pivots` the
/// pivot column indices in increasing order; `pivots[k]` is the pivot of
/// row `k`.
pub fn rref_with_transform(a: &Mat) -> (Mat, Mat, Vec<usize>) {
    let mut r = a.clone();
    let mut e = Mat::identity(a.rows);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..r.cols {
        if row == r.rows {
            break;
        }
        let pivot_row = (row..r.rows).find(|&i| !r[(i, col)].is_zero());
        let Some(p) = pivot_row else { continue };
        if p != row {
            for j in 0..r.cols {
                let tmp = r[(p, j)].clone();
                r[(p, j)] = r[(row, j)].clone();
                r[(row, j)] = tmp;
            }
            for j in 0..e.cols {
                let tmp = e[(p, j)].clone();
                e[(p, j)] = e[(row, j)].clone();
                e[(row, j)] = tmp;
            }
        }
        let inv = {
            let piv = r[(row, col)].clone();
            Rational::one() / piv
        };
        for j in 0..r.cols {
            let v = &r[(row, j)] * &inv;
            r[(row, j)] = v;
        }
        for j in 0..e.cols {
            let v = &e[(row, j)] * &inv;
            e[(row, j)] = v;
        }
        for i in 0..r.rows {
            if i == row || r[(i, col)].is_zero() {
                continue;
            }
            let factor = r[(i, col)].clone();
            for j in 0..r.cols {
                let v = &r[(i, j)] - &(&factor * &r[(row, j)]);
                r[(i, j)] = v;
            }
            for j in 0..e.cols {
                let v = &e[(i, j)] - &(&factor * &e[(row, j)]);
                e[(i, j)] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (r, e, pivots)
}

pub fn rank(a: &Mat) -> usize {
    rref_with_transform(a).2.len()
}

/// Basis of the kernel of `A`, one vector per free column. Free variables
/// are set to one, pivot variables solved; deterministic.
pub fn kernel_basis(a: &Mat) -> Vec<Vec<Rational>> {
    let (r, _, pivots) = rref_with_transform(a);
    let mut basis = Vec::new();
    for free in (0..a.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); a.cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[(row, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Precomputed elimination for repeated solves against one matrix.
#[derive(Debug, Clone)]
pub struct Solver {
    rref: Mat,
    transform: Mat,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(a: &Mat) -> Self {
        let (rref, transform, pivots) = rref_with_transform(a);
        Solver {
            rref,
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Deterministic particular solution of `A x = b` with free variables
    /// zero, over any rational vector space. `None` when inconsistent. The
    /// `zero` witness is needed because `V` has no nullary constructor.
    pub fn solve_with_zero<V: QModule>(&self, b: &[V], zero: &V) -> Option<Vec<V>> {
        assert_eq!(b.len(), self.rref.rows);
        let eb = self.transform.apply_module(b);
        // rows past the rank must vanish for consistency
        for item in eb.iter().skip(self.pivots.len()) {
            if !item.q_is_zero() {
                return None;
            }
        }
        let mut x = vec![zero.clone(); self.rref.cols];
        for (row, &pc) in self.pivots.iter().enumerate() {
            x[pc] = eb[row].clone();
        }
        Some(x)
    }

    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        self.solve_with_zero(b, &Rational::zero())
    }
}

pub fn solve(a: &Mat, b: &[Rational]) -> Option<Vec<Rational>> {
    Solver::new(a).solve(b)
}

/// Leading (pivot) coordinate indices of the span of the given vectors.
///
/// The complement of the result indexes standard basis vectors that
/// complete the span to the whole space.
pub fn leading_coordinates(vectors: &[Vec<Rational>], ambient_dim: usize) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Mat::from_rows(vectors.to_vec());
    debug_assert_eq!(m.cols, ambient_dim);
    let (_, _, pivots) = rref_with_transform(&m);
    pivots
}

/// Do the two lists of vectors span the same subspace? Exact rank check of
/// the stacked systems.
pub fn same_span(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> bool {
    if a.is_empty() && b.is_empty() {
        return true;
    }
    let ra = if a.is_empty() { 0 } else { rank(&Mat::from_rows(a.to_vec())) };
    let rb = if b.is_empty() { 0 } else { rank(&Mat::from_rows(b.to_vec())) };
    let mut all = a.to_vec();
    all.extend(b.to_vec());
    let rall = if all.is_empty() { 0 } else { rank(&Mat::from_rows(all)) };
    ra == rb && ra == rall
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat};

    #[test]
    fn rref_identity_transform() {
        let a = Mat::from_rows(vec![
            vec![int(2), int(4)],
            vec![int(1), int(3)],
        ]);
        let (r, e, pivots) = rref_with_transform(&a);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(e.mat_mul(&a), r);
        assert_eq!(r, Mat::identity(2));
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = Mat::from_rows(vec![vec![int(1), int(2), int(-1)]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_prefers_zero_free_vars() {
        let a = Mat::from_rows(vec![vec![int(1), int(1)]]);
        let x = solve(&a, &[int(3)]).unwrap();
        assert_eq!(x, vec![int(3), int(0)]);
    }

    #[test]
    fn inconsistent_system_detected() {
        let a = Mat::from_rows(vec![vec![int(1)], vec![int(1)]]);
        assert!(solve(&a, &[int(1), int(2)]).is_none());
    }

    #[test]
    fn solve_with_exppoly_rhs() {
        use crate::ring::ExpPoly;
        // x + y = q1, x - y = exp(q2)  =>  x = (q1+exp(q2))/2
        let a = Mat::from_rows(vec![
            vec![int(1), int(1)],
            vec![int(1), int(-1)],
        ]);
        let b = vec![
            ExpPoly::parse("q1", 2).unwrap(),
            ExpPoly::parse("exp(q2)", 2).unwrap(),
        ];
        let x = Solver::new(&a)
            .solve_with_zero(&b, &ExpPoly::zero(2))
            .unwrap();
        assert_eq!(x[0], ExpPoly::parse("1/2*q1 + 1/2*exp(q2)", 2).unwrap());
        assert_eq!(x[1], ExpPoly::parse("1/2*q1 - 1/2*exp(q2)", 2).unwrap());
    }

    #[test]
    fn leading_coordinates_smallest_index() {
        let vs = vec![vec![int(0), int(1), int(1)]];
        assert_eq!(leading_coordinates(&vs, 3), vec![1]);
    }

    #[test]
    fn same_span_up_to_basis_change() {
        let a = vec![vec![int(1), int(0)], vec![int(0), int(1)]];
        let b = vec![vec![int(1), int(1)], vec![rat(1, 2), int(-3)]];
        assert!(same_span(&a, &b));
        let c = vec![vec![int(1), int(1)]];
        assert!(!same_span(&a, &c));
    }
}
