//! The projective line over L as a spread of lines in P³(K).
//!
//! A vector of `L²` is split as `(l0, l1) = (x0 + i*x1, x2 + i*x3)`, which
//! identifies `L²` with `K⁴` as right K-vector spaces.

use std::collections::HashSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fieldtower::{AlgebraContext, KElement};
use crate::linalg::{self, Matrix};
use crate::quaternions::LElement;
use crate::scalar::Scalar;

/// A point `(l0, l1)L` of the projective line over L.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointP1L<F> {
    pub l0: LElement<F>,
    pub l1: LElement<F>,
}

/// A point of P³(K); the first nonzero coordinate is one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointP3K<F> {
    coords: Vec<KElement<F>>,
}

/// A line of P³(K) stored as a 2×4 matrix in reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LineP3K<F> {
    rows: Matrix<KElement<F>>,
}

/// A chain, given by one of its transversal lines.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain<F> {
    transversal: LineP3K<F>,
    galois: bool,
}

impl<F: Scalar> PointP3K<F> {
    pub fn coords(&self) -> &[KElement<F>] {
        &self.coords
    }
}

impl<F: Scalar> fmt::Display for PointP3K<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", c.join(", "))
    }
}

impl<F: Scalar> LineP3K<F> {
    pub fn rows(&self) -> &Matrix<KElement<F>> {
        &self.rows
    }
}

impl<F: Scalar> fmt::Display for LineP3K<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "{}", rows.join(";"))
    }
}

impl<F: Scalar> Chain<F> {
    pub fn transversal(&self) -> &LineP3K<F> {
        &self.transversal
    }
}

/// `(l0, l1)` as a vector of `K⁴`.
pub fn split_l2<F: Scalar>(l0: &LElement<F>, l1: &LElement<F>) -> Vec<KElement<F>> {
    vec![l0.u.clone(), l0.v.clone(), l1.u.clone(), l1.v.clone()]
}

/// A vector of `K⁴` as a pair in `L²`.
pub fn lift<F: Scalar>(x: &[KElement<F>]) -> (LElement<F>, LElement<F>) {
    (LElement::new(x[0].clone(), x[1].clone()), LElement::new(x[2].clone(), x[3].clone()))
}

impl<F: Scalar> AlgebraContext<F> {
    pub fn point(&self, coords: Vec<KElement<F>>) -> Result<PointP3K<F>> {
        if coords.len() != 4 {
            return Err(Error::DimensionError(format!("expected 4 coordinates, got {}", coords.len())));
        }
        let coords = linalg::normalize(self, &coords).ok_or_else(|| Error::DimensionError("zero vector".into()))?;
        Ok(PointP3K { coords })
    }

    pub fn point_from_l2(&self, l0: &LElement<F>, l1: &LElement<F>) -> Result<PointP3K<F>> {
        self.point(split_l2(l0, l1))
    }

    pub fn line(&self, rows: Vec<Vec<KElement<F>>>) -> Result<LineP3K<F>> {
        if rows.iter().any(|r| r.len() != 4) {
            return Err(Error::DimensionError("rows must have 4 entries".into()));
        }
        let rows = linalg::row_space(self, &rows);
        if rows.len() != 2 {
            return Err(Error::DimensionError(format!("rank {} instead of 2", rows.len())));
        }
        Ok(LineP3K { rows })
    }

    pub fn line_through(&self, p: &PointP3K<F>, q: &PointP3K<F>) -> Result<LineP3K<F>> {
        self.line(vec![p.coords.clone(), q.coords.clone()])
    }

    pub fn point_p1l(&self, l0: LElement<F>, l1: LElement<F>) -> Result<PointP1L<F>> {
        if !l0.is_zero() {
            let inv = self.q_inv(&l0)?;
            Ok(PointP1L { l0: LElement::one(), l1: self.q_mul(&l1, &inv) })
        } else if !l1.is_zero() {
            Ok(PointP1L { l0: LElement::zero(), l1: LElement::one() })
        } else {
            Err(Error::DimensionError("(0,0) is not a point".into()))
        }
    }

    /// `x*c` for `x` in `L² = K⁴` and `c` in L.
    pub fn l2_right_mul(&self, x: &[KElement<F>], c: &LElement<F>) -> Vec<KElement<F>> {
        let (l0, l1) = lift(x);
        split_l2(&self.q_mul(&l0, c), &self.q_mul(&l1, c))
    }

    /// The line `(l0, l1)L` as a K-subspace.
    pub fn spread_line_of(&self, p: &PointP1L<F>) -> LineP3K<F> {
        let x = split_l2(&p.l0, &p.l1);
        self.spread_line_vec(&x)
    }

    fn spread_line_vec(&self, x: &[KElement<F>]) -> LineP3K<F> {
        let xi = self.l2_right_mul(x, &LElement::i());
        self.line(vec![x.to_vec(), xi]).expect("x and x*i are independent")
    }

    /// The unique spread line through `p`.
    pub fn spread_line(&self, p: &PointP3K<F>) -> LineP3K<F> {
        self.spread_line_vec(&p.coords)
    }

    pub fn is_spread_line(&self, l: &LineP3K<F>) -> bool {
        l.rows.iter().all(|r| linalg::in_span(self, &l.rows, &self.l2_right_mul(r, &LElement::i())))
    }

    /// The spread line `(0,1)L`.
    pub fn infinity_line(&self) -> LineP3K<F> {
        self.spread_line_of(&PointP1L { l0: LElement::zero(), l1: LElement::one() })
    }

    pub fn point_on_line(&self, p: &PointP3K<F>, l: &LineP3K<F>) -> bool {
        linalg::in_span(self, &l.rows, &p.coords)
    }

    /// True when the lines share a point (in particular when they are equal).
    pub fn lines_meet(&self, l: &LineP3K<F>, m: &LineP3K<F>) -> bool {
        linalg::rank(self, &[l.rows.clone(), m.rows.clone()].concat()) < 4
    }

    /// The common point of two distinct lines, `None` when they are skew.
    pub fn line_meet(&self, l: &LineP3K<F>, m: &LineP3K<F>) -> Result<Option<PointP3K<F>>> {
        let mt = linalg::meet(self, &l.rows, &m.rows, 4);
        match mt.len() {
            0 => Ok(None),
            1 => Ok(Some(self.point(mt[0].clone())?)),
            _ => Err(Error::DimensionError("the lines coincide".into())),
        }
    }

    /// The plane spanned by a line and a point off it.
    pub fn join_line_point(&self, l: &LineP3K<F>, p: &PointP3K<F>) -> Result<Matrix<KElement<F>>> {
        let plane = linalg::join(self, &l.rows, std::slice::from_ref(&p.coords));
        if plane.len() != 3 {
            return Err(Error::DimensionError("the point lies on the line".into()));
        }
        Ok(plane)
    }

    /// The intersection of a line with a plane (3×4 rows), if it is a point.
    pub fn meet_line_plane(&self, l: &LineP3K<F>, plane: &[Vec<KElement<F>>]) -> Result<PointP3K<F>> {
        let mt = linalg::meet(self, &l.rows, plane, 4);
        match mt.len() {
            1 => self.point(mt[0].clone()),
            n => Err(Error::DimensionError(format!("line meets plane in dimension {n}"))),
        }
    }

    /// Three lines through one point and inside one plane.
    pub fn pencil_test(&self, p: &LineP3K<F>, t0: &LineP3K<F>, t1: &LineP3K<F>) -> bool {
        let common = linalg::meet(self, &linalg::meet(self, &p.rows, &t0.rows, 4), &t1.rows, 4);
        let span = linalg::rank(self, &[p.rows.clone(), t0.rows.clone(), t1.rows.clone()].concat());
        !common.is_empty() && span <= 3
    }

    /// `(l0, l1)K -> (l0 i, l1 i)K`.
    pub fn iota(&self, p: &PointP3K<F>) -> Result<PointP3K<F>> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        self.point(self.l2_right_mul(&p.coords, &LElement::i()))
    }

    pub fn iota_line(&self, l: &LineP3K<F>) -> Result<LineP3K<F>> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        let i = LElement::i();
        self.line(l.rows.iter().map(|r| self.l2_right_mul(r, &i)).collect())
    }

    pub fn chain_from_transversal(&self, t: &LineP3K<F>) -> Result<Chain<F>> {
        if self.is_spread_line(t) {
            return Err(Error::TransversalIsSpreadLine);
        }
        Ok(Chain { transversal: t.clone(), galois: self.is_galois() })
    }

    pub fn chain_transversals(&self, c: &Chain<F>) -> Vec<LineP3K<F>> {
        if c.galois {
            let ti = self.iota_line(&c.transversal).expect("Galois context");
            vec![c.transversal.clone(), ti]
        } else {
            vec![c.transversal.clone()]
        }
    }

    pub fn chain_contains(&self, c: &Chain<F>, s: &LineP3K<F>) -> Result<bool> {
        if !self.is_spread_line(s) {
            return Err(Error::NotSpreadLine);
        }
        Ok(self.lines_meet(&c.transversal, s))
    }

    /// Chains are equal iff their transversal sets are.
    pub fn chain_eq(&self, c0: &Chain<F>, c1: &Chain<F>) -> bool {
        self.chain_transversals(c0).contains(&c1.transversal)
    }

    /// `n` distinct members: spread lines through points of the transversal.
    /// The first is the spread line through the first basis row.
    pub fn chain_sample(&self, c: &Chain<F>, n: usize, seed: u64, height: u32) -> Vec<LineP3K<F>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = &c.transversal.rows;
        let mut out = Vec::with_capacity(n);
        let mut seen = HashSet::new();
        let mut candidates = vec![t[0].clone(), t[1].clone()].into_iter();
        while out.len() < n {
            let q = candidates.next().unwrap_or_else(|| {
                let k = self.random_k(&mut rng, height);
                linalg::axpy(self, &t[1], &k, &t[0])
            });
            let s = self.spread_line_vec(&q);
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
        out
    }

    pub fn chains_tangent_at(&self, c0: &Chain<F>, c1: &Chain<F>, p: &LineP3K<F>) -> Result<bool> {
        if !self.chain_contains(c0, p)? || !self.chain_contains(c1, p)? {
            return Err(Error::PointNotOnBothChains);
        }
        let t1s = self.chain_transversals(c1);
        Ok(self.chain_transversals(c0).iter().any(|t0| t1s.iter().any(|t1| self.pencil_test(p, t0, t1))))
    }

    pub fn chains_orthogonal(&self, c0: &Chain<F>, c1: &Chain<F>) -> Result<bool> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        let t1s = self.chain_transversals(c1);
        Ok(t1s.iter().all(|t1| self.lines_meet(&c0.transversal, t1)))
    }

    pub fn random_point<R: rand::Rng + ?Sized>(&self, rng: &mut R, height: u32) -> PointP3K<F> {
        loop {
            let v: Vec<_> = (0..4).map(|_| self.random_k(rng, height)).collect();
            if let Ok(p) = self.point(v) {
                return p;
            }
        }
    }

    pub fn random_line<R: rand::Rng + ?Sized>(&self, rng: &mut R, height: u32) -> LineP3K<F> {
        loop {
            let p = self.random_point(rng, height);
            let q = self.random_point(rng, height);
            if let Ok(l) = self.line_through(&p, &q) {
                return l;
            }
        }
    }

    /// A random line that is not a spread line, giving a chain.
    pub fn random_chain<R: rand::Rng + ?Sized>(&self, rng: &mut R, height: u32) -> Chain<F> {
        loop {
            if let Ok(c) = self.chain_from_transversal(&self.random_line(rng, height)) {
                return c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldtower::{ctx_f2, ctx_q};
    use crate::scalar::{F2RatFunc, Rational};

    fn k(xi: i64, eta: i64) -> KElement<Rational> {
        KElement::new(Rational::from_i64(xi), Rational::from_i64(eta))
    }

    fn v(c: [(i64, i64); 4]) -> Vec<KElement<Rational>> {
        c.iter().map(|&(x, y)| k(x, y)).collect()
    }

    #[test]
    fn spread_line_examples() {
        let q = ctx_q();
        let p = q.point(v([(0, 0), (0, 0), (1, 0), (0, 0)])).unwrap();
        assert_eq!(q.spread_line(&p), q.infinity_line());
        assert_eq!(
            q.infinity_line().rows().clone(),
            vec![v([(0, 0), (0, 0), (1, 0), (0, 0)]), v([(0, 0), (0, 0), (0, 0), (1, 0)])]
        );
        // x = (1, a+i)
        let p = q.point(v([(1, 0), (0, 0), (0, 1), (1, 0)])).unwrap();
        let expect = q.line(vec![v([(1, 0), (0, 0), (0, 1), (1, 0)]), v([(0, 0), (1, 0), (-1, 0), (0, -1)])]).unwrap();
        assert_eq!(q.spread_line(&p), expect);
        let p = q.point(v([(1, 0), (0, 0), (0, 0), (0, 0)])).unwrap();
        assert_eq!(
            q.spread_line(&p).rows().clone(),
            vec![v([(1, 0), (0, 0), (0, 0), (0, 0)]), v([(0, 0), (1, 0), (0, 0), (0, 0)])]
        );
    }

    #[test]
    fn is_spread_line_examples() {
        let q = ctx_q();
        assert!(q.is_spread_line(&q.infinity_line()));
        let l = q.line(vec![v([(1, 0), (0, 0), (0, 0), (0, 0)]), v([(0, 0), (0, 0), (1, 0), (0, 0)])]).unwrap();
        assert!(!q.is_spread_line(&l));
    }

    #[test]
    fn chain_zero_examples() {
        let q = ctx_q();
        let t = q.line(vec![v([(1, 0), (0, 0), (0, 0), (0, 0)]), v([(0, 0), (1, 0), (0, 0), (1, 0)])]).unwrap();
        let c0 = q.chain_from_transversal(&t).unwrap();
        let ts = q.chain_transversals(&c0);
        let t1 = q.line(vec![v([(0, 0), (1, 0), (0, 0), (0, 0)]), v([(1, 0), (0, 0), (1, 0), (0, 0)])]).unwrap();
        assert_eq!(ts, vec![t.clone(), t1]);

        let one_zero = q.spread_line(&q.point(v([(1, 0), (0, 0), (0, 0), (0, 0)])).unwrap());
        let one_one = q.spread_line(&q.point(v([(1, 0), (0, 0), (1, 0), (0, 0)])).unwrap());
        assert!(q.chain_contains(&c0, &one_zero).unwrap());
        assert!(q.chain_contains(&c0, &one_one).unwrap());
        assert!(!q.chain_contains(&c0, &q.infinity_line()).unwrap());
        assert_eq!(q.chain_contains(&c0, &t), Err(Error::NotSpreadLine));
        assert_eq!(q.line_meet(&t, &one_zero).unwrap(), Some(q.point(v([(1, 0), (0, 0), (0, 0), (0, 0)])).unwrap()));
        assert_eq!(q.line_meet(&q.infinity_line(), &one_zero).unwrap(), None);
        assert_eq!(q.chain_from_transversal(&q.infinity_line()), Err(Error::TransversalIsSpreadLine));
    }

    #[test]
    fn iota_examples() {
        let q = ctx_q();
        let p = q.point(v([(1, 0), (0, 0), (0, 0), (0, 0)])).unwrap();
        assert_eq!(q.iota(&p).unwrap(), q.point(v([(0, 0), (1, 0), (0, 0), (0, 0)])).unwrap());
        let f = ctx_f2();
        let p = f.point(vec![KElement::one(), KElement::zero(), KElement::zero(), KElement::zero()]);
        assert_eq!(f.iota(&p.unwrap()), Err(Error::NotGalois));
    }

    #[test]
    fn f2_chains_have_one_transversal() {
        let f = ctx_f2();
        let o = KElement::<F2RatFunc>::one();
        let z = KElement::<F2RatFunc>::zero();
        let t =
            f.line(vec![vec![o.clone(), z.clone(), z.clone(), z.clone()], vec![z.clone(), o.clone(), z, o]]).unwrap();
        let c = f.chain_from_transversal(&t).unwrap();
        assert_eq!(f.chain_transversals(&c).len(), 1);
    }

    #[test]
    fn chain_sample_is_deterministic_and_starts_at_first_row() {
        let q = ctx_q();
        let t = q.line(vec![v([(1, 0), (0, 0), (0, 0), (0, 0)]), v([(0, 0), (1, 0), (0, 0), (1, 0)])]).unwrap();
        let c = q.chain_from_transversal(&t).unwrap();
        let s1 = q.chain_sample(&c, 6, 9, 8);
        let s2 = q.chain_sample(&c, 6, 9, 8);
        assert_eq!(s1, s2);
        assert_eq!(s1[0], q.spread_line(&q.point(t.rows()[0].clone()).unwrap()));
        for s in &s1 {
            assert!(q.chain_contains(&c, s).unwrap());
        }
    }
}
