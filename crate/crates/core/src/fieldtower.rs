//! The tower Z ⊂ K ⊂ L: the quadratic extension `K = Z(a)` and the context
//! object carrying the minimal equations of `a` and `i`.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::scalar::{F2RatFunc, Rational, Scalar, ZKind};

/// `xi + a*eta` with `xi, eta` in the centre.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct KElement<F> {
    pub xi: F,
    pub eta: F,
}

impl<F: Scalar> KElement<F> {
    pub fn new(xi: F, eta: F) -> Self {
        KElement { xi, eta }
    }

    pub fn zero() -> Self {
        KElement::new(F::zero(), F::zero())
    }

    pub fn one() -> Self {
        KElement::new(F::one(), F::zero())
    }

    /// The generator `a`.
    pub fn a() -> Self {
        KElement::new(F::zero(), F::one())
    }

    pub fn from_z(z: F) -> Self {
        KElement::new(z, F::zero())
    }

    pub fn from_i64(n: i64) -> Self {
        KElement::from_z(F::from_i64(n))
    }

    pub fn is_zero(&self) -> bool {
        self.xi.is_zero() && self.eta.is_zero()
    }

    /// True when the element lies in the centre.
    pub fn in_z(&self) -> bool {
        self.eta.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        KElement::new(self.xi.add(&o.xi), self.eta.add(&o.eta))
    }

    pub fn sub(&self, o: &Self) -> Self {
        KElement::new(self.xi.sub(&o.xi), self.eta.sub(&o.eta))
    }

    pub fn neg(&self) -> Self {
        KElement::new(self.xi.neg(), self.eta.neg())
    }

    pub fn scale_z(&self, z: &F) -> Self {
        KElement::new(self.xi.mul(z), self.eta.mul(z))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find('a') {
            None => Ok(KElement::from_z(F::parse_canonical(s)?)),
            Some(pos) => {
                let head = s[..pos].trim();
                let eta = F::parse_canonical(&s[pos + 1..])?;
                let xi = if head.is_empty() {
                    F::zero()
                } else {
                    let head = head
                        .strip_suffix('+')
                        .ok_or_else(|| Error::Parse(format!("expected '<Z>+a<Z>', got '{s}'")))?;
                    F::parse_canonical(head)?
                };
                Ok(KElement::new(xi, eta))
            }
        }
    }
}

impl<F: Scalar> fmt::Display for KElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+a{}", self.xi, self.eta)
    }
}

/// Parameters of `a^2 + a*lambda1 + mu1 = 0` and `i^2 + i*lambda2 + mu2 = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraContext<F> {
    lambda1: F,
    mu1: F,
    lambda2: F,
    mu2: F,
    galois: bool,
}

impl<F: Scalar> AlgebraContext<F> {
    /// Validates the parameters and derives the Galois flag.
    pub fn build(lambda1: F, mu1: F, lambda2: F, mu2: F) -> Result<Self> {
        let galois = F::characteristic() != 2 || !lambda1.is_zero();
        if quadratic_root_in_z(&lambda1, &mu1).is_some() {
            return Err(Error::ReduciblePolynomial(format!("x^2 + ({lambda1})x + ({mu1}) has a root in Z")));
        }
        if galois && !lambda2.is_zero() {
            return Err(Error::CharMismatch(format!("K/Z is Galois, so lambda2 must be 0 (got {lambda2})")));
        }
        if !galois && !lambda2.is_one() {
            return Err(Error::CharMismatch(format!("K/Z is not Galois, so lambda2 must be 1 (got {lambda2})")));
        }
        let ctx = AlgebraContext { lambda1, mu1, lambda2, mu2, galois };
        if quadratic_root_in_z(&ctx.lambda2, &ctx.mu2).is_some() {
            return Err(Error::ReduciblePolynomial(format!(
                "x^2 + ({})x + ({}) has a root in Z",
                ctx.lambda2, ctx.mu2
            )));
        }
        Ok(ctx)
    }

    pub fn z_kind(&self) -> ZKind {
        F::KIND
    }

    pub fn lambda1(&self) -> &F {
        &self.lambda1
    }
    pub fn mu1(&self) -> &F {
        &self.mu1
    }
    pub fn lambda2(&self) -> &F {
        &self.lambda2
    }
    pub fn mu2(&self) -> &F {
        &self.mu2
    }
    pub fn is_galois(&self) -> bool {
        self.galois
    }

    pub fn characteristic(&self) -> u32 {
        F::characteristic()
    }

    pub fn descriptor(&self) -> String {
        format!("{}(lambda1={}, mu1={}, lambda2={}, mu2={})", F::KIND, self.lambda1, self.mu1, self.lambda2, self.mu2)
    }

    pub fn k_mul(&self, x: &KElement<F>, y: &KElement<F>) -> KElement<F> {
        // a^2 = -lambda1*a - mu1
        let ee = x.eta.mul(&y.eta);
        let xi = x.xi.mul(&y.xi).sub(&self.mu1.mul(&ee));
        let eta = x.xi.mul(&y.eta).add(&x.eta.mul(&y.xi)).sub(&self.lambda1.mul(&ee));
        KElement::new(xi, eta)
    }

    /// The other root of the minimal polynomial substituted for `a`:
    /// `xi - (lambda1 + a)*eta`. Equals the conjugation when K/Z is Galois.
    pub(crate) fn formal_conj(&self, x: &KElement<F>) -> KElement<F> {
        KElement::new(x.xi.sub(&self.lambda1.mul(&x.eta)), x.eta.neg())
    }

    /// `x * formal_conj(x)`, an element of Z.
    pub fn k_norm(&self, x: &KElement<F>) -> F {
        self.k_mul(x, &self.formal_conj(x)).xi
    }

    pub fn k_inv(&self, x: &KElement<F>) -> Result<KElement<F>> {
        let n = self.k_norm(x).inv().ok_or(Error::DivisionByZero)?;
        Ok(self.formal_conj(x).scale_z(&n))
    }

    pub fn k_div(&self, x: &KElement<F>, y: &KElement<F>) -> Result<KElement<F>> {
        Ok(self.k_mul(x, &self.k_inv(y)?))
    }

    pub fn k_conj(&self, x: &KElement<F>) -> Result<KElement<F>> {
        if !self.galois {
            return Err(Error::NotGalois);
        }
        Ok(self.formal_conj(x))
    }

    pub fn k_derive(&self, x: &KElement<F>) -> Result<KElement<F>> {
        if self.galois {
            return Err(Error::NotNonGalois);
        }
        Ok(self.derive(x))
    }

    pub(crate) fn derive(&self, x: &KElement<F>) -> KElement<F> {
        KElement::new(F::zero(), x.eta.clone())
    }

    /// Exact square root in K.
    pub fn k_sqrt(&self, w: &KElement<F>) -> Option<KElement<F>> {
        if w.is_zero() {
            return Some(KElement::zero());
        }
        let root = if F::characteristic() == 2 { self.sqrt_char2(w) } else { self.sqrt_odd(w) }?;
        debug_assert_eq!(self.k_mul(&root, &root), *w);
        Some(root)
    }

    fn sqrt_odd(&self, w: &KElement<F>) -> Option<KElement<F>> {
        // work in the basis {1, b} with b = 2a + lambda1, b^2 = disc
        let two = F::from_i64(2);
        let half = two.inv().unwrap();
        let disc = self.lambda1.mul(&self.lambda1).sub(&F::from_i64(4).mul(&self.mu1));
        let beta = w.eta.mul(&half);
        let alpha = w.xi.sub(&self.lambda1.mul(&beta));
        let from_xy = |x: F, y: F| KElement::new(x.add(&y.mul(&self.lambda1)), y.mul(&two));
        if beta.is_zero() {
            if let Some(x) = alpha.sqrt() {
                return Some(from_xy(x, F::zero()));
            }
            let y = alpha.div(&disc)?.sqrt()?;
            return Some(from_xy(F::zero(), y));
        }
        let n = alpha.mul(&alpha).sub(&disc.mul(&beta).mul(&beta)).sqrt()?;
        for cand in [alpha.add(&n), alpha.sub(&n)] {
            if let Some(x) = cand.mul(&half).sqrt() {
                if x.is_zero() {
                    continue;
                }
                let y = beta.div(&two.mul(&x))?;
                return Some(from_xy(x, y));
            }
        }
        None
    }

    fn sqrt_char2(&self, w: &KElement<F>) -> Option<KElement<F>> {
        // (x + a*y)^2 = (x^2 + mu1*y^2) + a*lambda1*y^2
        if !self.lambda1.is_zero() {
            let y = w.eta.div(&self.lambda1)?.sqrt()?;
            let x = w.xi.sub(&self.mu1.mul(&y).mul(&y)).sqrt()?;
            return Some(KElement::new(x, y));
        }
        if !w.eta.is_zero() {
            return None;
        }
        let (x, y) = w.xi.square_split(&self.mu1)?;
        Some(KElement::new(x, y))
    }

    /// A root `y` in K of `y^2 + y = c` (characteristic 2 only).
    pub fn k_artin_schreier(&self, c: &KElement<F>) -> Option<KElement<F>> {
        if F::characteristic() != 2 {
            return None;
        }
        // y = x + a*z: a-part lambda1*z^2 + z = c.eta, Z-part x^2 + x = c.xi + mu1*z^2
        let zs: Vec<F> = if self.lambda1.is_zero() {
            vec![c.eta.clone()]
        } else {
            match self.lambda1.mul(&c.eta).artin_schreier_root() {
                None => vec![],
                Some(w) => {
                    let li = self.lambda1.inv().unwrap();
                    vec![w.mul(&li), w.add(&F::one()).mul(&li)]
                }
            }
        };
        for z in zs {
            if let Some(x) = c.xi.add(&self.mu1.mul(&z).mul(&z)).artin_schreier_root() {
                let y = KElement::new(x, z);
                debug_assert_eq!(self.k_mul(&y, &y).add(&y), *c);
                return Some(y);
            }
        }
        None
    }

    /// A root in K of `x^2 + b*x + c`, if there is one.
    pub fn quadratic_root(&self, b: &KElement<F>, c: &KElement<F>) -> Option<KElement<F>> {
        if F::characteristic() == 2 {
            if b.is_zero() {
                return self.k_sqrt(c);
            }
            // x = b*y: y^2 + y = c / b^2
            let b2 = self.k_mul(b, b);
            let y = self.k_artin_schreier(&self.k_div(c, &b2).ok()?)?;
            return Some(self.k_mul(b, &y));
        }
        let disc = self.k_mul(b, b).sub(&self.k_mul(c, &KElement::from_i64(4)));
        let s = self.k_sqrt(&disc)?;
        let half = KElement::from_z(F::from_i64(2).inv().unwrap());
        Some(self.k_mul(&s.sub(b), &half))
    }

    pub fn random_k<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> KElement<F> {
        KElement::new(F::random(rng, height), F::random(rng, height))
    }

    pub fn random_nonzero_k<R: Rng + ?Sized>(&self, rng: &mut R, height: u32) -> KElement<F> {
        loop {
            let k = self.random_k(rng, height);
            if !k.is_zero() {
                return k;
            }
        }
    }
}

/// A root in Z of `x^2 + b*x + c`.
fn quadratic_root_in_z<F: Scalar>(b: &F, c: &F) -> Option<F> {
    if F::characteristic() == 2 {
        if b.is_zero() {
            return c.sqrt();
        }
        let b2 = b.mul(b);
        return c.div(&b2)?.artin_schreier_root().map(|y| y.mul(b));
    }
    let disc = b.mul(b).sub(&F::from_i64(4).mul(c));
    let s = disc.sqrt()?;
    Some(s.sub(b).mul(&F::from_i64(2).inv().unwrap()))
}

impl<F: Scalar> Field for AlgebraContext<F> {
    type Elem = KElement<F>;
    fn zero(&self) -> KElement<F> {
        KElement::zero()
    }
    fn one(&self) -> KElement<F> {
        KElement::one()
    }
    fn is_zero(&self, x: &KElement<F>) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &KElement<F>, y: &KElement<F>) -> KElement<F> {
        x.add(y)
    }
    fn sub(&self, x: &KElement<F>, y: &KElement<F>) -> KElement<F> {
        x.sub(y)
    }
    fn mul(&self, x: &KElement<F>, y: &KElement<F>) -> KElement<F> {
        self.k_mul(x, y)
    }
    fn inv(&self, x: &KElement<F>) -> Option<KElement<F>> {
        self.k_inv(x).ok()
    }
    fn neg(&self, x: &KElement<F>) -> KElement<F> {
        x.neg()
    }
}

/// Hamilton quaternions over the rationals: `a^2 = -1`, `i^2 = -1`.
pub fn ctx_q() -> AlgebraContext<Rational> {
    AlgebraContext::build(Rational::zero(), Rational::one(), Rational::zero(), Rational::one()).expect("CTX-Q is valid")
}

/// Inseparable case over GF(2)(t): `a^2 = t`, `i^2 + i + 1 = 0`.
pub fn ctx_f2() -> AlgebraContext<F2RatFunc> {
    AlgebraContext::build(F2RatFunc::zero(), F2RatFunc::t(), F2RatFunc::one(), F2RatFunc::one())
        .expect("CTX-F2 is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kq(xi: i64, eta: i64) -> KElement<Rational> {
        KElement::new(Rational::from_i64(xi), Rational::from_i64(eta))
    }

    #[test]
    fn build_examples() {
        let q = ctx_q();
        assert!(q.is_galois());
        let f2 = AlgebraContext::build(F2RatFunc::zero(), F2RatFunc::t(), F2RatFunc::one(), F2RatFunc::t()).unwrap();
        assert!(!f2.is_galois());
        assert!(!ctx_f2().is_galois());
        let r = AlgebraContext::build(Rational::zero(), Rational::from_i64(-1), Rational::zero(), Rational::one());
        assert!(matches!(r, Err(Error::ReduciblePolynomial(_))));
    }

    #[test]
    fn build_rejects_bad_lambda2_and_reducible_i_equation() {
        let r = AlgebraContext::build(Rational::zero(), Rational::one(), Rational::one(), Rational::one());
        assert!(matches!(r, Err(Error::CharMismatch(_))));
        let r = AlgebraContext::build(F2RatFunc::zero(), F2RatFunc::t(), F2RatFunc::zero(), F2RatFunc::t());
        assert!(matches!(r, Err(Error::CharMismatch(_))));
        // a^2 = -1 and i^2 = 1: x^2 - 1 splits
        let r = AlgebraContext::build(Rational::zero(), Rational::one(), Rational::zero(), Rational::from_i64(-1));
        assert!(matches!(r, Err(Error::ReduciblePolynomial(_))));
        // (-2, -2) is positive definite, hence a skew field
        assert!(AlgebraContext::build(
            Rational::zero(),
            Rational::from_i64(2),
            Rational::zero(),
            Rational::from_i64(2),
        )
        .is_ok());
        // y^2 + y = t^2 + t has the root t
        let r = AlgebraContext::build(
            F2RatFunc::zero(),
            F2RatFunc::t(),
            F2RatFunc::one(),
            F2RatFunc::parse_canonical("t^2+t").unwrap(),
        );
        assert!(matches!(r, Err(Error::ReduciblePolynomial(_))));
        // a^2 = t^2 is reducible
        let r = AlgebraContext::build(
            F2RatFunc::zero(),
            F2RatFunc::parse_canonical("t^2").unwrap(),
            F2RatFunc::one(),
            F2RatFunc::one(),
        );
        assert!(matches!(r, Err(Error::ReduciblePolynomial(_))));
    }

    #[test]
    fn separable_char2_context() {
        // a^2 + a + t = 0 is irreducible over GF(2)(t); i^2 = t is not a square in K
        let ctx = AlgebraContext::build(F2RatFunc::one(), F2RatFunc::t(), F2RatFunc::zero(), F2RatFunc::t()).unwrap();
        assert!(ctx.is_galois());
        let a = KElement::<F2RatFunc>::a();
        assert_eq!(ctx.k_conj(&a).unwrap(), KElement::new(F2RatFunc::one(), F2RatFunc::one()));
    }

    #[test]
    fn k_mul_examples() {
        let q = ctx_q();
        let a = KElement::<Rational>::a();
        assert_eq!(q.k_mul(&a, &a), kq(-1, 0));
        assert_eq!(q.k_mul(&kq(1, 1), &kq(1, -1)), kq(2, 0));
        let f = ctx_f2();
        let a = KElement::<F2RatFunc>::a();
        assert_eq!(f.k_mul(&a, &a), KElement::from_z(F2RatFunc::t()));
    }

    #[test]
    fn k_inv_examples() {
        let q = ctx_q();
        assert_eq!(q.k_inv(&kq(2, 0)).unwrap(), KElement::from_z(Rational::new(1, 2)));
        assert_eq!(q.k_inv(&kq(0, 1)).unwrap(), kq(0, -1));
        assert_eq!(q.k_inv(&kq(0, 0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn conj_and_derivation_examples() {
        let q = ctx_q();
        assert_eq!(q.k_conj(&kq(0, 1)).unwrap(), kq(0, -1));
        assert_eq!(q.k_conj(&kq(3, 2)).unwrap(), kq(3, -2));
        assert_eq!(q.k_conj(&kq(5, 0)).unwrap(), kq(5, 0));
        assert_eq!(q.k_derive(&kq(0, 1)), Err(Error::NotNonGalois));

        let f = ctx_f2();
        let t = F2RatFunc::t();
        let a = KElement::<F2RatFunc>::a();
        assert_eq!(f.k_derive(&a).unwrap(), a);
        assert_eq!(f.k_derive(&KElement::from_z(t.clone())).unwrap(), KElement::zero());
        assert_eq!(f.k_derive(&KElement::new(t.clone(), t.clone())).unwrap(), KElement::new(F2RatFunc::zero(), t));
        assert_eq!(f.k_conj(&a), Err(Error::NotGalois));
    }

    #[test]
    fn sqrt_of_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let q = ctx_q();
        let f = ctx_f2();
        for _ in 0..100 {
            let x = q.random_k(&mut rng, 8);
            let s = q.k_sqrt(&q.k_mul(&x, &x)).unwrap();
            assert!(s == x || s == x.neg());
            let y = f.random_k(&mut rng, 8);
            let s = f.k_sqrt(&f.k_mul(&y, &y)).unwrap();
            assert_eq!(s, y);
        }
        assert_eq!(q.k_sqrt(&kq(-1, 0)), Some(kq(0, 1)).or(Some(kq(0, -1))));
        assert_eq!(q.k_sqrt(&kq(2, 0)), None);
        assert_eq!(f.k_sqrt(&KElement::a()), None);
    }

    #[test]
    fn artin_schreier_in_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let f = ctx_f2();
        for _ in 0..100 {
            let y = f.random_k(&mut rng, 8);
            let c = f.k_mul(&y, &y).add(&y);
            let r = f.k_artin_schreier(&c).unwrap();
            assert_eq!(f.k_mul(&r, &r).add(&r), c);
        }
        assert_eq!(f.k_artin_schreier(&KElement::one()), None);
    }

    #[test]
    fn text_roundtrip() {
        let k = kq(3, -2);
        assert_eq!(k.to_string(), "3+a-2");
        assert_eq!(KElement::<Rational>::parse("3+a-2").unwrap(), k);
        assert_eq!(KElement::<Rational>::parse("a1").unwrap(), kq(0, 1));
        assert_eq!(KElement::<Rational>::parse("7").unwrap(), kq(7, 0));
        let e =
            KElement::new(F2RatFunc::parse_canonical("t+1/t").unwrap(), F2RatFunc::parse_canonical("t^2/t+1").unwrap());
        assert_eq!(KElement::<F2RatFunc>::parse(&e.to_string()).unwrap(), e);
    }
}
