//! Exact linear algebra over any field given by an arithmetic context.
//!
//! Vectors are rows; a subspace is the row space of a matrix. Every routine
//! works with exact equality, so reduced row-echelon form is a canonical
//! representative of a subspace.

use std::fmt::Debug;
use std::marker::PhantomData;

use crate::scalar::Scalar;

/// Field arithmetic supplied by a context value.
pub trait Field {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Option<Self::Elem>;

    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), x)
    }
}

/// The centre field viewed as a [`Field`] context.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZOps<F>(PhantomData<F>);

impl<F> ZOps<F> {
    pub fn new() -> Self {
        ZOps(PhantomData)
    }
}

impl<F: Scalar> Field for ZOps<F> {
    type Elem = F;
    fn zero(&self) -> F {
        F::zero()
    }
    fn one(&self) -> F {
        F::one()
    }
    fn is_zero(&self, x: &F) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &F, y: &F) -> F {
        x.add(y)
    }
    fn sub(&self, x: &F, y: &F) -> F {
        x.sub(y)
    }
    fn mul(&self, x: &F, y: &F) -> F {
        x.mul(y)
    }
    fn inv(&self, x: &F) -> Option<F> {
        x.inv()
    }
    fn neg(&self, x: &F) -> F {
        x.neg()
    }
}

pub type Matrix<E> = Vec<Vec<E>>;

pub fn dot<R: Field>(f: &R, x: &[R::Elem], y: &[R::Elem]) -> R::Elem {
    x.iter().zip(y).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
}

pub fn scale<R: Field>(f: &R, x: &[R::Elem], k: &R::Elem) -> Vec<R::Elem> {
    x.iter().map(|a| f.mul(a, k)).collect()
}

pub fn axpy<R: Field>(f: &R, x: &[R::Elem], k: &R::Elem, y: &[R::Elem]) -> Vec<R::Elem> {
    // x*k + y
    x.iter().zip(y).map(|(a, b)| f.add(&f.mul(a, k), b)).collect()
}

pub fn is_zero_vec<R: Field>(f: &R, x: &[R::Elem]) -> bool {
    x.iter().all(|a| f.is_zero(a))
}

/// Scales `x` so its first nonzero entry is one. Returns `None` for zero.
pub fn normalize<R: Field>(f: &R, x: &[R::Elem]) -> Option<Vec<R::Elem>> {
    let lead = x.iter().find(|a| !f.is_zero(a))?;
    let inv = f.inv(lead).expect("nonzero is invertible");
    Some(scale(f, x, &inv))
}

/// Reduces `rows` in place to reduced row-echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref<R: Field>(f: &R, rows: &mut Matrix<R::Elem>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(&rows[r][c]).expect("pivot is invertible");
        rows[r] = scale(f, &rows[r], &inv);
        for i in 0..rows.len() {
            if i != r && !f.is_zero(&rows[i][c]) {
                let factor = f.neg(&rows[i][c]);
                rows[i] = axpy(f, &rows[r], &factor, &rows[i]);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<R: Field>(f: &R, rows: &[Vec<R::Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Canonical basis of the row space.
pub fn row_space<R: Field>(f: &R, rows: &[Vec<R::Elem>]) -> Matrix<R::Elem> {
    let mut m = rows.to_vec();
    rref(f, &mut m);
    m
}

/// Basis of `{x : rows * x = 0}`.
pub fn nullspace<R: Field>(f: &R, rows: &[Vec<R::Elem>], ncols: usize) -> Matrix<R::Elem> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![f.zero(); ncols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(&m[r][fc]);
            }
            v
        })
        .collect()
}

/// Coefficients `c` with `sum c_i * basis_i = v`, if `v` is in the span.
pub fn solve_combination<R: Field>(f: &R, basis: &[Vec<R::Elem>], v: &[R::Elem]) -> Option<Vec<R::Elem>> {
    let n = basis.len();
    if n == 0 {
        return is_zero_vec(f, v).then(Vec::new);
    }
    // columns are basis vectors: solve B^T c = v
    let dim = v.len();
    let mut aug: Matrix<R::Elem> = (0..dim)
        .map(|j| {
            let mut row: Vec<R::Elem> = basis.iter().map(|b| b[j].clone()).collect();
            row.push(v[j].clone());
            row
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.contains(&n) {
        return None;
    }
    let mut c = vec![f.zero(); n];
    for (r, &pc) in pivots.iter().enumerate() {
        c[pc] = aug[r][n].clone();
    }
    Some(c)
}

pub fn in_span<R: Field>(f: &R, basis: &[Vec<R::Elem>], v: &[R::Elem]) -> bool {
    if is_zero_vec(f, v) {
        return true;
    }
    let r = rank(f, basis);
    let mut m = basis.to_vec();
    m.push(v.to_vec());
    rank(f, &m) == r
}

/// Canonical basis of the sum of two subspaces.
pub fn join<R: Field>(f: &R, u: &[Vec<R::Elem>], w: &[Vec<R::Elem>]) -> Matrix<R::Elem> {
    let mut m = u.to_vec();
    m.extend_from_slice(w);
    row_space(f, &m)
}

/// Canonical basis of the intersection of two subspaces of `K^n`.
pub fn meet<R: Field>(f: &R, u: &[Vec<R::Elem>], w: &[Vec<R::Elem>], n: usize) -> Matrix<R::Elem> {
    let u = row_space(f, u);
    let w = row_space(f, w);
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    // (alpha, beta) with alpha*U = beta*W: left kernel of [U; W]
    let k = u.len() + w.len();
    let transposed: Matrix<R::Elem> =
        (0..n).map(|j| u.iter().chain(w.iter()).map(|r| r[j].clone()).collect()).collect();
    let kernel = nullspace(f, &transposed, k);
    let vecs: Matrix<R::Elem> = kernel
        .iter()
        .map(|coeffs| {
            let mut acc = vec![f.zero(); n];
            for (c, row) in coeffs.iter().zip(&u) {
                acc = axpy(f, row, c, &acc);
            }
            acc
        })
        .collect();
    row_space(f, &vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rref_is_canonical() {
        let f = ZOps::<Rational>::new();
        let a = qm(&[&[1, 2, 3], &[2, 4, 7], &[3, 6, 10]]);
        let b = qm(&[&[0, 0, 1], &[5, 10, 0]]);
        assert_eq!(row_space(&f, &a), row_space(&f, &b));
        assert_eq!(rank(&f, &a), 2);
    }

    #[test]
    fn nullspace_annihilates() {
        let f = ZOps::<Rational>::new();
        let a = qm(&[&[1, 2, 3, 4], &[0, 1, -1, 2]]);
        let ns = nullspace(&f, &a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &a {
                assert!(dot(&f, r, v).is_zero());
            }
        }
    }

    #[test]
    fn meet_of_planes_is_line() {
        let f = ZOps::<Rational>::new();
        let u = qm(&[&[1, 0, 0], &[0, 1, 0]]);
        let w = qm(&[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(meet(&f, &u, &w, 3), qm(&[&[0, 1, 0]]));
        let x = qm(&[&[1, 1, 1]]);
        assert!(meet(&f, &u, &x, 3).is_empty());
    }

    #[test]
    fn solve_combination_recovers_coefficients() {
        let f = ZOps::<Rational>::new();
        let basis = qm(&[&[1, 0, 2], &[0, 1, 1]]);
        let v = qm(&[&[3, -2, 4]]).remove(0);
        assert_eq!(solve_combination(&f, &basis, &v), Some(vec![q(3), q(-2)]));
        assert_eq!(solve_combination(&f, &basis, &qm(&[&[0, 0, 1]])[0]), None);
    }
}
