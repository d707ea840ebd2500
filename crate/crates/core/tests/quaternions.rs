mod common;

use chaingeo_core::{ctx_f2, ctx_q, AlgebraContext, KElement, LElement, Scalar};
use common::*;
use proptest::prelude::*;

fn algebra_laws<F: Scalar>(
    ctx: &AlgebraContext<F>,
    x: &LElement<F>,
    y: &LElement<F>,
    z: &LElement<F>,
) -> Result<(), TestCaseError> {
    let m = |p: &LElement<F>, q: &LElement<F>| ctx.q_mul(p, q);
    let oracle = ZBasisOracle::new(ctx);
    prop_assert_eq!(m(x, y), oracle.mul(x, y));
    prop_assert_eq!(m(&m(x, y), z), m(x, &m(y, z)));
    prop_assert_eq!(ctx.q_norm(&m(x, y)), ctx.k_mul(&ctx.q_norm(x), &ctx.q_norm(y)));
    let anti = |p: &LElement<F>| ctx.q_antiauto(p);
    prop_assert_eq!(anti(&anti(x)), x.clone());
    prop_assert_eq!(anti(&m(x, y)), m(&anti(y), &anti(x)));
    let n = LElement::from_k(ctx.q_norm(x));
    prop_assert_eq!(m(&anti(x), x), n.clone());
    prop_assert_eq!(m(x, &anti(x)), n);
    prop_assert!(ctx.q_norm(x).in_z());
    let zc = LElement::from_z(y.u.xi.clone());
    prop_assert_eq!(m(&zc, x), m(x, &zc));
    if !x.is_zero() {
        prop_assert!(!ctx.q_norm(x).is_zero());
        let inv = ctx.q_inv(x).unwrap();
        prop_assert_eq!(m(x, &inv), LElement::one());
        prop_assert_eq!(m(&inv, x), LElement::one());
    }
    Ok(())
}

fn k_relations<F: Scalar>(ctx: &AlgebraContext<F>, k: &KElement<F>) -> Result<(), TestCaseError> {
    let u = LElement::from_k(k.clone());
    let i = LElement::i();
    let a_u = ctx.q_antiauto(&u);
    prop_assert!(a_u.in_k());
    if ctx.is_galois() {
        let c = ctx.k_conj(k).unwrap();
        prop_assert_eq!(&a_u.u, &c);
        prop_assert_eq!(ctx.q_mul(&u, &i), ctx.q_mul(&i, &LElement::from_k(c)));
    } else {
        prop_assert_eq!(a_u, u.clone());
        let d = LElement::from_k(ctx.k_derive(k).unwrap());
        prop_assert_eq!(ctx.q_mul(&u, &i), ctx.q_mul(&i, &u).add(&d));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn laws_over_q(x in lq(), y in lq(), z in lq()) {
        algebra_laws(&ctx_q(), &x, &y, &z)?;
    }

    #[test]
    fn laws_over_f2t(x in lf2(), y in lf2(), z in lf2()) {
        algebra_laws(&ctx_f2(), &x, &y, &z)?;
    }

    #[test]
    fn laws_over_separable_char2(x in lf2(), y in lf2(), z in lf2()) {
        let ctx = ctx_f2_separable();
        let m = |p: &LElement<_>, q: &LElement<_>| ctx.q_mul(p, q);
        prop_assert_eq!(m(&x, &y), ZBasisOracle::new(&ctx).mul(&x, &y));
        prop_assert_eq!(m(&m(&x, &y), &z), m(&x, &m(&y, &z)));
        prop_assert_eq!(ctx.q_norm(&m(&x, &y)), ctx.k_mul(&ctx.q_norm(&x), &ctx.q_norm(&y)));
    }

    #[test]
    fn commutation_and_antiauto_on_k(k in kq(), l in kf2()) {
        k_relations(&ctx_q(), &k)?;
        k_relations(&ctx_f2(), &l)?;
        k_relations(&ctx_f2_separable(), &l)?;
    }

    #[test]
    fn text_roundtrip(x in lq(), y in lf2()) {
        prop_assert_eq!(LElement::parse(&x.to_string()).unwrap(), x);
        prop_assert_eq!(LElement::parse(&y.to_string()).unwrap(), y);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn norm_is_multiplicative_and_anisotropic(x in lq(), y in lq(), z in lf2(), w in lf2()) {
        let q = ctx_q();
        prop_assert_eq!(q.q_norm(&q.q_mul(&x, &y)), q.k_mul(&q.q_norm(&x), &q.q_norm(&y)));
        let f = ctx_f2();
        prop_assert_eq!(f.q_norm(&f.q_mul(&z, &w)), f.k_mul(&f.q_norm(&z), &f.q_norm(&w)));
        prop_assert_eq!(q.q_norm(&x).is_zero(), x.is_zero());
        prop_assert_eq!(f.q_norm(&z).is_zero(), z.is_zero());
    }
}

#[test]
fn minimal_equations_hold() {
    fn check<F: Scalar>(ctx: &AlgebraContext<F>) {
        let a = LElement::<F>::a();
        let i = LElement::<F>::i();
        let z = |s: &F| LElement::from_z(s.clone());
        let ea = ctx.q_mul(&a, &a).add(&ctx.q_mul(&a, &z(ctx.lambda1()))).add(&z(ctx.mu1()));
        let ei = ctx.q_mul(&i, &i).add(&ctx.q_mul(&i, &z(ctx.lambda2()))).add(&z(ctx.mu2()));
        assert!(ea.is_zero());
        assert!(ei.is_zero());
    }
    check(&ctx_q());
    check(&ctx_f2());
    check(&ctx_f2_separable());
}

#[test]
fn ctx_f2_has_no_small_zero_divisor() {
    assert_eq!(ctx_f2().find_zero_divisor(3), None);
}
