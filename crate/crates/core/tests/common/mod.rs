#![allow(dead_code)]

use std::collections::BTreeMap;

use chaingeo_core::{AlgebraContext, F2RatFunc, KElement, LElement, Poly2, Rational, Scalar};
use proptest::prelude::*;

pub fn q_scalar() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d))
}

pub fn f2_scalar() -> impl Strategy<Value = F2RatFunc> {
    (0u64..256, 1u64..16).prop_map(|(n, d)| F2RatFunc::new(Poly2::from_bits(n), Poly2::from_bits(d)).unwrap())
}

pub fn kq() -> impl Strategy<Value = KElement<Rational>> {
    (q_scalar(), q_scalar()).prop_map(|(x, y)| KElement::new(x, y))
}

pub fn kf2() -> impl Strategy<Value = KElement<F2RatFunc>> {
    (f2_scalar(), f2_scalar()).prop_map(|(x, y)| KElement::new(x, y))
}

pub fn lq() -> impl Strategy<Value = LElement<Rational>> {
    (kq(), kq()).prop_map(|(u, v)| LElement::new(u, v))
}

pub fn lf2() -> impl Strategy<Value = LElement<F2RatFunc>> {
    (kf2(), kf2()).prop_map(|(u, v)| LElement::new(u, v))
}

pub fn qi(n: i64) -> Rational {
    Rational::from_i64(n)
}

pub fn f2(s: &str) -> F2RatFunc {
    F2RatFunc::parse_canonical(s).unwrap()
}

/// Separable characteristic-2 context: a^2 + a + t = 0, i^2 = t.
pub fn ctx_f2_separable() -> AlgebraContext<F2RatFunc> {
    AlgebraContext::build(F2RatFunc::one(), F2RatFunc::t(), F2RatFunc::zero(), F2RatFunc::t()).unwrap()
}

/// Multiplication in the Z-basis {1, a, i, ia} by rewriting words in the
/// generators, independent of the closed product formulas.
pub struct ZBasisOracle<'a, F> {
    ctx: &'a AlgebraContext<F>,
}

type Word = Vec<u8>;

impl<'a, F: Scalar> ZBasisOracle<'a, F> {
    pub fn new(ctx: &'a AlgebraContext<F>) -> Self {
        ZBasisOracle { ctx }
    }

    fn to_words(&self, x: &LElement<F>) -> BTreeMap<Word, F> {
        let mut m = BTreeMap::new();
        m.insert(vec![], x.u.xi.clone());
        m.insert(b"a".to_vec(), x.u.eta.clone());
        m.insert(b"i".to_vec(), x.v.xi.clone());
        m.insert(b"ia".to_vec(), x.v.eta.clone());
        m
    }

    fn rewrite(&self, word: &Word) -> Option<Vec<(Word, F)>> {
        let c = self.ctx;
        for p in 0..word.len().saturating_sub(1) {
            let pair = &word[p..p + 2];
            let repl: Vec<(Word, F)> = match pair {
                b"aa" => vec![(b"a".to_vec(), c.lambda1().neg()), (vec![], c.mu1().neg())],
                b"ii" => vec![(b"i".to_vec(), c.lambda2().neg()), (vec![], c.mu2().neg())],
                b"ai" if c.is_galois() => vec![(b"i".to_vec(), c.lambda1().neg()), (b"ia".to_vec(), F::one().neg())],
                b"ai" => vec![(b"ia".to_vec(), F::one()), (b"a".to_vec(), F::one())],
                _ => continue,
            };
            return Some(
                repl.into_iter()
                    .map(|(mid, k)| {
                        let mut w = word[..p].to_vec();
                        w.extend(mid);
                        w.extend_from_slice(&word[p + 2..]);
                        (w, k)
                    })
                    .collect(),
            );
        }
        None
    }

    pub fn mul(&self, x: &LElement<F>, y: &LElement<F>) -> LElement<F> {
        let mut todo: Vec<(Word, F)> = Vec::new();
        for (wx, cx) in self.to_words(x) {
            for (wy, cy) in self.to_words(y) {
                let mut w = wx.clone();
                w.extend(wy);
                todo.push((w, cx.mul(&cy)));
            }
        }
        let mut out: BTreeMap<Word, F> = BTreeMap::new();
        while let Some((w, k)) = todo.pop() {
            if k.is_zero() {
                continue;
            }
            match self.rewrite(&w) {
                Some(parts) => todo.extend(parts.into_iter().map(|(w2, k2)| (w2, k2.mul(&k)))),
                None => {
                    let e = out.entry(w).or_insert_with(F::zero);
                    *e = e.add(&k);
                }
            }
        }
        let get = |w: &[u8]| out.get(w).cloned().unwrap_or_else(F::zero);
        LElement::new(KElement::new(get(b""), get(b"a")), KElement::new(get(b"i"), get(b"ia")))
    }
}
