//! Polynomials over the two-element field, packed into 64-bit limbs.
//!
//! Bit `k` of the limb vector is the coefficient of `t^k`. The limb vector
//! never carries trailing zero limbs, so structural equality is polynomial
//! equality.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    limbs: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2 { limbs: vec![1] }
    }

    /// `t^k`
    pub fn monomial(k: usize) -> Self {
        let mut p = Poly2::zero();
        p.set_bit(k, true);
        p
    }

    pub fn from_bits(bits: u64) -> Self {
        let mut p = Poly2 { limbs: vec![bits] };
        p.trim();
        p
    }

    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Poly2::zero();
        for e in exps {
            let b = p.bit(e);
            p.set_bit(e, !b);
        }
        p
    }

    fn trim(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn bit(&self, k: usize) -> bool {
        self.limbs.get(k / 64).is_some_and(|l| (l >> (k % 64)) & 1 == 1)
    }

    pub fn set_bit(&mut self, k: usize, value: bool) {
        let limb = k / 64;
        if limb >= self.limbs.len() {
            if !value {
                return;
            }
            self.limbs.resize(limb + 1, 0);
        }
        if value {
            self.limbs[limb] |= 1 << (k % 64);
        } else {
            self.limbs[limb] &= !(1 << (k % 64));
        }
        self.trim();
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (li, &limb) in self.limbs.iter().enumerate() {
            let mut l = limb;
            while l != 0 {
                let tz = l.trailing_zeros() as usize;
                out.push(li * 64 + tz);
                l &= l - 1;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.limbs.len() >= other.limbs.len() { (self, other) } else { (other, self) };
        let mut limbs = long.limbs.clone();
        for (d, s) in limbs.iter_mut().zip(&short.limbs) {
            *d ^= s;
        }
        let mut p = Poly2 { limbs };
        p.trim();
        p
    }

    /// `self ^= other << shift`
    fn xor_shifted(&mut self, other: &Self, shift: usize) {
        if other.is_zero() {
            return;
        }
        let limb_shift = shift / 64;
        let bit_shift = shift % 64;
        let need = other.limbs.len() + limb_shift + 1;
        if self.limbs.len() < need {
            self.limbs.resize(need, 0);
        }
        for (j, &l) in other.limbs.iter().enumerate() {
            self.limbs[j + limb_shift] ^= l << bit_shift;
            if bit_shift != 0 {
                self.limbs[j + limb_shift + 1] ^= l >> (64 - bit_shift);
            }
        }
        self.trim();
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly2::zero();
        }
        let (a, b) = if self.limbs.len() <= other.limbs.len() { (self, other) } else { (other, self) };
        let mut acc = Poly2 { limbs: vec![0; a.limbs.len() + b.limbs.len() + 1] };
        for k in a.exponents() {
            let limb_shift = k / 64;
            let bit_shift = k % 64;
            for (j, &l) in b.limbs.iter().enumerate() {
                acc.limbs[j + limb_shift] ^= l << bit_shift;
                if bit_shift != 0 {
                    acc.limbs[j + limb_shift + 1] ^= l >> (64 - bit_shift);
                }
            }
        }
        acc.trim();
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly2::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot.set_bit(shift, true);
            rem.xor_shifted(divisor, shift);
        }
        (quot, rem)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Square root if every exponent is even.
    pub fn sqrt(&self) -> Option<Self> {
        let exps = self.exponents();
        if exps.iter().any(|e| e % 2 == 1) {
            return None;
        }
        Some(Poly2::from_exponents(exps.into_iter().map(|e| e / 2)))
    }

    /// Splits `p = e(t)^2 + t * o(t)^2`, returning `(e, o)`.
    pub fn even_odd_roots(&self) -> (Self, Self) {
        let mut even = Poly2::zero();
        let mut odd = Poly2::zero();
        for e in self.exponents() {
            if e % 2 == 0 {
                even.set_bit(e / 2, true);
            } else {
                odd.set_bit(e / 2, true);
            }
        }
        (even, odd)
    }

    pub fn square(&self) -> Self {
        Poly2::from_exponents(self.exponents().into_iter().map(|e| 2 * e))
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_divide_roundtrip() {
        // (t^2+t+1)(t+1) = t^3+1
        let a = Poly2::from_bits(0b111);
        let b = Poly2::from_bits(0b11);
        let p = a.mul(&b);
        assert_eq!(p, Poly2::from_bits(0b1001));
        let (q, r) = p.div_rem(&b);
        assert_eq!(q, a);
        assert!(r.is_zero());
    }

    #[test]
    fn wide_multiplication_crosses_limbs() {
        let a = Poly2::monomial(70).add(&Poly2::one());
        let sq = a.mul(&a);
        assert_eq!(sq, Poly2::monomial(140).add(&Poly2::one()));
        assert_eq!(a.square(), sq);
        assert_eq!(sq.sqrt(), Some(a));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = Poly2::from_bits(0b1011); // t^3+t+1, irreducible
        let b = Poly2::from_bits(0b111);
        assert!(a.gcd(&b).is_one());
        let c = a.mul(&b);
        assert_eq!(c.gcd(&a.mul(&Poly2::from_bits(0b10))), a);
    }

    #[test]
    fn even_odd_split() {
        let p = Poly2::from_bits(0b110111);
        let (e, o) = p.even_odd_roots();
        assert_eq!(e.square().add(&Poly2::monomial(1).mul(&o.square())), p);
    }

    #[test]
    fn display() {
        assert_eq!(Poly2::from_bits(0b1011).to_string(), "t^3+t+1");
        assert_eq!(Poly2::zero().to_string(), "0");
    }
}
