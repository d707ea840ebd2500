//! The quaternion skew field `L = K + iK`, elements written `u + iv`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fieldtower::{AlgebraContext, KElement};
use crate::poly2::Poly2;
use crate::scalar::{F2RatFunc, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LElement<F> {
    pub u: KElement<F>,
    pub v: KElement<F>,
}

impl<F: Scalar> LElement<F> {
    pub fn new(u: KElement<F>, v: KElement<F>) -> Self {
        LElement { u, v }
    }

    pub fn zero() -> Self {
        LElement::from_k(KElement::zero())
    }

    pub fn one() -> Self {
        LElement::from_k(KElement::one())
    }

    pub fn i() -> Self {
        LElement::new(KElement::zero(), KElement::one())
    }

    pub fn a() -> Self {
        LElement::from_k(KElement::a())
    }

    pub fn from_k(k: KElement<F>) -> Self {
        LElement::new(k, KElement::zero())
    }

    pub fn from_z(z: F) -> Self {
        LElement::from_k(KElement::from_z(z))
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn in_k(&self) -> bool {
        self.v.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        LElement::new(self.u.add(&o.u), self.v.add(&o.v))
    }

    pub fn sub(&self, o: &Self) -> Self {
        LElement::new(self.u.sub(&o.u), self.v.sub(&o.v))
    }

    pub fn neg(&self) -> Self {
        LElement::new(self.u.neg(), self.v.neg())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("expected '(<K>)+i(<K>)', got '{s}'"));
        let rest = s.strip_prefix('(').ok_or_else(bad)?;
        let (u, rest) = rest.split_once(")+i(").ok_or_else(bad)?;
        let v = rest.strip_suffix(')').ok_or_else(bad)?;
        Ok(LElement::new(KElement::parse(u)?, KElement::parse(v)?))
    }
}

impl<F: Scalar> fmt::Display for LElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})+i({})", self.u, self.v)
    }
}

impl<F: Scalar> AlgebraContext<F> {
    pub fn q_mul(&self, x: &LElement<F>, y: &LElement<F>) -> LElement<F> {
        let (u, v, u2, v2) = (&x.u, &x.v, &y.u, &y.v);
        let mu2 = KElement::from_z(self.mu2().clone());
        if self.is_galois() {
            // (u+iv)(u'+iv') = (uu' - mu2*conj(v)v') + i(conj(u)v' + vu')
            let s = self.k_mul(u, u2).sub(&self.k_mul(&mu2, &self.k_mul(&self.formal_conj(v), v2)));
            let t = self.k_mul(&self.formal_conj(u), v2).add(&self.k_mul(v, u2));
            LElement::new(s, t)
        } else {
            // ui = iu + u^D and i^2 = i + mu2
            let s = self.k_mul(u, u2).add(&self.k_mul(&self.derive(u), v2)).add(&self.k_mul(&mu2, &self.k_mul(v, v2)));
            let t =
                self.k_mul(u, v2).add(&self.k_mul(v, u2)).add(&self.k_mul(v, v2)).add(&self.k_mul(&self.derive(v), v2));
            LElement::new(s, t)
        }
    }

    /// The involutory antiautomorphism `A`. It maps K onto itself, acting as
    /// conjugation there when K/Z is Galois and as the identity otherwise.
    pub fn q_antiauto(&self, x: &LElement<F>) -> LElement<F> {
        if self.is_galois() {
            LElement::new(self.formal_conj(&x.u), x.v.neg())
        } else {
            let u = x.u.add(&x.v).add(&self.derive(&x.v));
            LElement::new(u, x.v.clone())
        }
    }

    /// `N(x) = x^A x`.
    pub fn q_norm(&self, x: &LElement<F>) -> KElement<F> {
        let (u, v) = (&x.u, &x.v);
        let mu2 = KElement::from_z(self.mu2().clone());
        if self.is_galois() {
            self.k_mul(&self.formal_conj(u), u).add(&self.k_mul(&mu2, &self.k_mul(&self.formal_conj(v), v)))
        } else {
            let uv = self.k_mul(u, v);
            self.k_mul(u, u).add(&uv).add(&self.derive(&uv)).add(&self.k_mul(&mu2, &self.k_mul(v, v)))
        }
    }

    pub fn q_inv(&self, x: &LElement<F>) -> Result<LElement<F>> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.q_norm(x);
        let ninv = self.k_inv(&n).map_err(|_| Error::NotDivisionAlgebra)?;
        Ok(self.q_mul(&self.q_antiauto(x), &LElement::from_k(ninv)))
    }

    /// `x * y^-1`
    pub fn q_div(&self, x: &LElement<F>, y: &LElement<F>) -> Result<LElement<F>> {
        Ok(self.q_mul(x, &self.q_inv(y)?))
    }

    /// Right multiplication by a K-scalar.
    pub fn q_scale(&self, x: &LElement<F>, k: &KElement<F>) -> LElement<F> {
        LElement::new(self.k_mul(&x.u, k), self.k_mul(&x.v, k))
    }

    pub fn in_l_circ(&self, c: &LElement<F>) -> bool {
        if self.is_galois() {
            !c.u.is_zero() && !c.v.is_zero()
        } else {
            !c.v.is_zero()
        }
    }

    pub fn random_l<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> LElement<F> {
        LElement::new(self.random_k(rng, height), self.random_k(rng, height))
    }

    pub fn random_nonzero_l<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> LElement<F> {
        loop {
            let x = self.random_l(rng, height);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

impl AlgebraContext<F2RatFunc> {
    /// Searches all `u + iv` whose four Z-coordinates are polynomials of
    /// degree at most `max_degree` for a nonzero element of norm zero.
    pub fn find_zero_divisor(&self, max_degree: usize) -> Option<LElement<F2RatFunc>> {
        let bits = max_degree + 1;
        let per = 1u64 << bits;
        let total = per.checked_pow(4).expect("search space too large");
        let poly = |code: u64| F2RatFunc::from_poly(Poly2::from_bits(code));
        for code in 1..total {
            let c = |k: u32| poly((code >> (k as usize * bits)) & (per - 1));
            let x = LElement::new(KElement::new(c(0), c(1)), KElement::new(c(2), c(3)));
            if self.q_norm(&x).is_zero() {
                return Some(x);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldtower::{ctx_f2, ctx_q};
    use crate::scalar::Rational;

    fn kq(xi: i64, eta: i64) -> KElement<Rational> {
        KElement::new(Rational::from_i64(xi), Rational::from_i64(eta))
    }

    fn lq(u: (i64, i64), v: (i64, i64)) -> LElement<Rational> {
        LElement::new(kq(u.0, u.1), kq(v.0, v.1))
    }

    #[test]
    fn q_mul_examples() {
        let q = ctx_q();
        let x = lq((0, 1), (1, 0));
        assert_eq!(q.q_mul(&x, &x), lq((-2, 0), (0, 0)));
        let i = LElement::<Rational>::i();
        assert_eq!(q.q_mul(&i, &i), lq((-1, 0), (0, 0)));

        let f = ctx_f2();
        let a = LElement::<F2RatFunc>::a();
        let i = LElement::<F2RatFunc>::i();
        assert_eq!(f.q_mul(&a, &i), f.q_mul(&i, &a).add(&a));
    }

    #[test]
    fn antiauto_examples() {
        let q = ctx_q();
        assert_eq!(q.q_antiauto(&lq((0, 1), (1, 0))), lq((0, -1), (-1, 0)));
        assert_eq!(q.q_antiauto(&lq((0, 1), (0, 0))), lq((0, -1), (0, 0)));
        let f = ctx_f2();
        assert_eq!(f.q_antiauto(&LElement::i()), LElement::new(KElement::one(), KElement::one()));
    }

    #[test]
    fn norm_examples() {
        let q = ctx_q();
        assert_eq!(q.q_norm(&LElement::one()), kq(1, 0));
        assert_eq!(q.q_norm(&lq((1, 0), (1, 0))), kq(2, 0));
        assert_eq!(q.q_norm(&lq((0, 1), (1, 0))), kq(2, 0));
    }

    #[test]
    fn inverse_examples() {
        let q = ctx_q();
        let half = Rational::new(1, 2);
        assert_eq!(
            q.q_inv(&lq((1, 0), (1, 0))).unwrap(),
            LElement::new(KElement::from_z(half.clone()), KElement::from_z(half.neg()))
        );
        assert_eq!(q.q_inv(&LElement::zero()), Err(Error::DivisionByZero));
        assert_eq!(q.q_inv(&lq((0, 1), (0, 0))).unwrap(), lq((0, -1), (0, 0)));
    }

    #[test]
    fn l_circ_examples() {
        let q = ctx_q();
        assert!(!q.in_l_circ(&lq((0, 1), (0, 0))));
        assert!(!q.in_l_circ(&lq((0, 0), (1, 0))));
        assert!(q.in_l_circ(&lq((0, 1), (1, 0))));
        let f = ctx_f2();
        assert!(f.in_l_circ(&LElement::i()));
        assert!(!f.in_l_circ(&LElement::a()));
    }

    #[test]
    fn split_parameters_are_detected() {
        let split = AlgebraContext::build(F2RatFunc::zero(), F2RatFunc::t(), F2RatFunc::one(), F2RatFunc::t()).unwrap();
        let x = LElement::new(KElement::a(), KElement::one());
        assert!(split.q_norm(&x).is_zero());
        assert_eq!(split.q_inv(&x), Err(Error::NotDivisionAlgebra));
        assert!(split.find_zero_divisor(1).is_some());
    }

    #[test]
    fn text_roundtrip() {
        let x = lq((3, -2), (0, 1));
        assert_eq!(x.to_string(), "(3+a-2)+i(0+a1)");
        assert_eq!(LElement::<Rational>::parse(&x.to_string()).unwrap(), x);
        assert!(LElement::<Rational>::parse("3+a-2").is_err());
    }
}
