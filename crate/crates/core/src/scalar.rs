//! The centre field Z: the rationals, or rational functions over GF(2).

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly2::Poly2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZKind {
    Q,
    F2T,
}

impl fmt::Display for ZKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZKind::Q => write!(f, "Q"),
            ZKind::F2T => write!(f, "F2T"),
        }
    }
}

/// Exact arithmetic in the centre field. Values are always canonical.
pub trait Scalar: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const KIND: ZKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    /// Exact square root, if one exists in Z.
    fn sqrt(&self) -> Option<Self>;
    /// A root of `y^2 + y = self` (characteristic 2 only; `None` otherwise).
    fn artin_schreier_root(&self) -> Option<Self>;
    /// Writes `self = x^2 + m*y^2` for a non-square `m` (characteristic 2 only).
    fn square_split(&self, m: &Self) -> Option<(Self, Self)>;
    /// Parses the canonical text form; non-canonical spellings are rejected.
    fn parse_canonical(s: &str) -> Result<Self>;
    /// Random value with numerator and denominator size bounded by `height`.
    fn random<R: Rng + ?Sized>(rng: &mut R, height: u32) -> Self;

    fn characteristic() -> u32 {
        match Self::KIND {
            ZKind::Q => 0,
            ZKind::F2T => 2,
        }
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self.mul(&inv))
    }
}

// ---------------------------------------------------------------------------
// Rationals

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

fn bigint_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn parse_bigint_strict(s: &str, full: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad rational '{full}'")));
    }
    if (digits.len() > 1 && digits.starts_with('0')) || s == "-0" {
        return Err(Error::NotCanonical(full.to_string()));
    }
    s.parse::<BigInt>().map_err(|e| Error::Parse(format!("bad rational '{full}': {e}")))
}

impl Scalar for Rational {
    const KIND: ZKind = ZKind::Q;

    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn one() -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational(self.0.recip()))
    }
    fn sqrt(&self) -> Option<Self> {
        let n = bigint_sqrt(self.0.numer())?;
        let d = bigint_sqrt(self.0.denom())?;
        Some(Rational(BigRational::new(n, d)))
    }
    fn artin_schreier_root(&self) -> Option<Self> {
        None
    }
    fn square_split(&self, _m: &Self) -> Option<(Self, Self)> {
        None
    }
    fn parse_canonical(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Rational(BigRational::from_integer(parse_bigint_strict(s, s)?))),
            Some((n, d)) => {
                let num = parse_bigint_strict(n, s)?;
                let den = parse_bigint_strict(d, s)?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let r = BigRational::new(num.clone(), den.clone());
                if den.is_negative() || den.is_one() || *r.numer() != num || *r.denom() != den {
                    return Err(Error::NotCanonical(s.to_string()));
                }
                Ok(Rational(r))
            }
        }
    }
    fn random<R: Rng + ?Sized>(rng: &mut R, height: u32) -> Self {
        let h = height.max(1) as i64;
        let num = rng.random_range(-h..=h);
        let den = rng.random_range(1..=h);
        Rational::new(num, den)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

// ---------------------------------------------------------------------------
// Rational functions over GF(2)

/// `num / den` with `gcd(num, den) = 1`; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2RatFunc {
    num: Poly2,
    den: Poly2,
}

impl F2RatFunc {
    pub fn new(num: Poly2, den: Poly2) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(F2RatFunc::zero());
        }
        let g = num.gcd(&den);
        Some(F2RatFunc { num: num.div_rem(&g).0, den: den.div_rem(&g).0 })
    }

    pub fn from_poly(p: Poly2) -> Self {
        F2RatFunc { num: p, den: Poly2::one() }
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        F2RatFunc::from_poly(Poly2::monomial(1))
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    /// Writes `self = x^2 + t*y^2`, returning `(x, y)`.
    pub fn even_odd_roots(&self) -> (Self, Self) {
        // num/den = num*den / den^2
        let (e, o) = self.num.mul(&self.den).even_odd_roots();
        (
            F2RatFunc::new(e, self.den.clone()).expect("nonzero den"),
            F2RatFunc::new(o, self.den.clone()).expect("nonzero den"),
        )
    }
}

/// Solves `p^2 + q*p = n` over GF(2)[t]; the map is GF(2)-linear in `p`.
fn solve_as_poly(q: &Poly2, n: &Poly2) -> Option<Poly2> {
    if n.is_zero() {
        return Some(Poly2::zero());
    }
    let dq = q.degree().expect("q nonzero");
    let dn = n.degree().unwrap();
    let bound = dq.max(dn / 2);
    // pivot basis: leading degree -> (image, combination of unknowns)
    let mut basis: Vec<(usize, Poly2, Poly2)> = Vec::new();
    let reduce = |basis: &Vec<(usize, Poly2, Poly2)>, mut v: Poly2, mut c: Poly2| {
        while let Some((_, bv, bc)) = v.degree().and_then(|d| basis.iter().find(|(pd, _, _)| *pd == d)) {
            v = v.add(bv);
            c = c.add(bc);
        }
        (v, c)
    };
    for j in 0..=bound {
        let tj = Poly2::monomial(j);
        let image = tj.square().add(&q.mul(&tj));
        let (v, c) = reduce(&basis, image, tj);
        if let Some(d) = v.degree() {
            basis.push((d, v, c));
        }
    }
    let (rest, combo) = reduce(&basis, n.clone(), Poly2::zero());
    rest.is_zero().then_some(combo)
}

impl Scalar for F2RatFunc {
    const KIND: ZKind = ZKind::F2T;

    fn zero() -> Self {
        F2RatFunc { num: Poly2::zero(), den: Poly2::one() }
    }
    fn one() -> Self {
        F2RatFunc::from_poly(Poly2::one())
    }
    fn from_i64(n: i64) -> Self {
        if n.rem_euclid(2) == 1 {
            F2RatFunc::one()
        } else {
            F2RatFunc::zero()
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return F2RatFunc::new(self.num.add(&other.num), self.den.clone()).unwrap();
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        F2RatFunc::new(num, self.den.mul(&other.den)).unwrap()
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn neg(&self) -> Self {
        self.clone()
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return F2RatFunc::zero();
        }
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let n1 = self.num.div_rem(&g1).0;
        let d2 = other.den.div_rem(&g1).0;
        let n2 = other.num.div_rem(&g2).0;
        let d1 = self.den.div_rem(&g2).0;
        F2RatFunc { num: n1.mul(&n2), den: d1.mul(&d2) }
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| F2RatFunc { num: self.den.clone(), den: self.num.clone() })
    }
    fn sqrt(&self) -> Option<Self> {
        Some(F2RatFunc { num: self.num.sqrt()?, den: self.den.sqrt()? })
    }
    fn artin_schreier_root(&self) -> Option<Self> {
        // A reduced root p/q has y^2 + y = (p^2 + pq)/q^2 in lowest terms,
        // so the denominator must be a square q^2.
        let q = self.den.sqrt()?;
        let p = solve_as_poly(&q, &self.num)?;
        let y = F2RatFunc::new(p, q).unwrap();
        debug_assert_eq!(y.mul(&y).add(&y), *self);
        Some(y)
    }
    fn square_split(&self, m: &Self) -> Option<(Self, Self)> {
        // self = A^2 + t*B^2 and m = m0^2 + t*m1^2 give
        // self = (A + B*m0/m1)^2 + m*(B/m1)^2
        let (a, b) = self.even_odd_roots();
        let (m0, m1) = m.even_odd_roots();
        let y = b.div(&m1)?;
        let x = a.add(&y.mul(&m0));
        debug_assert_eq!(x.mul(&x).add(&m.mul(&y).mul(&y)), *self);
        Some((x, y))
    }
    fn parse_canonical(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            None => (s, None),
            Some((n, d)) => (n, Some(d)),
        };
        let num = parse_poly2(n, s)?;
        let den = match d {
            None => Poly2::one(),
            Some(d) => {
                let den = parse_poly2(d, s)?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                if den.is_one() {
                    return Err(Error::NotCanonical(s.to_string()));
                }
                den
            }
        };
        let r = F2RatFunc::new(num.clone(), den.clone()).unwrap();
        if r.num != num || r.den != den {
            return Err(Error::NotCanonical(s.to_string()));
        }
        Ok(r)
    }
    fn random<R: Rng + ?Sized>(rng: &mut R, height: u32) -> Self {
        let num_deg = (height / 2).max(1);
        let den_deg = height / 4;
        let num = Poly2::from_bits(rng.random_range(0..(1u64 << (num_deg + 1))));
        let den = loop {
            let d = Poly2::from_bits(rng.random_range(0..(1u64 << (den_deg + 1))));
            if !d.is_zero() {
                break d;
            }
        };
        F2RatFunc::new(num, den).unwrap()
    }
}

fn parse_poly2(s: &str, full: &str) -> Result<Poly2> {
    let s = s.trim();
    if s == "0" {
        return Ok(Poly2::zero());
    }
    let mut exps = Vec::new();
    for term in s.split('+') {
        let e = match term.trim() {
            "1" => 0,
            "t" => 1,
            other => {
                let k = other
                    .strip_prefix("t^")
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad polynomial term '{other}' in '{full}'")))?;
                if k < 2 {
                    return Err(Error::NotCanonical(full.to_string()));
                }
                k
            }
        };
        exps.push(e);
    }
    if exps.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::NotCanonical(full.to_string()));
    }
    Ok(Poly2::from_exponents(exps))
}

impl fmt::Display for F2RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
