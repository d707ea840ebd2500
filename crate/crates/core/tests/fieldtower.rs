mod common;

use chaingeo_core::{ctx_f2, ctx_q, AlgebraContext, Error, F2RatFunc, KElement, Rational, Scalar};
use common::*;
use proptest::prelude::*;

fn field_axioms<F: Scalar>(
    ctx: &AlgebraContext<F>,
    x: &KElement<F>,
    y: &KElement<F>,
    z: &KElement<F>,
) -> Result<(), TestCaseError> {
    prop_assert_eq!(ctx.k_mul(&ctx.k_mul(x, y), z), ctx.k_mul(x, &ctx.k_mul(y, z)));
    prop_assert_eq!(ctx.k_mul(x, y), ctx.k_mul(y, x));
    prop_assert_eq!(ctx.k_mul(x, &y.add(z)), ctx.k_mul(x, y).add(&ctx.k_mul(x, z)));
    prop_assert_eq!(x.add(y).add(z), x.add(&y.add(z)));
    prop_assert_eq!(ctx.k_mul(x, &KElement::one()), x.clone());
    if x.is_zero() {
        prop_assert_eq!(ctx.k_inv(x), Err(Error::DivisionByZero));
    } else {
        prop_assert_eq!(ctx.k_mul(x, &ctx.k_inv(x).unwrap()), KElement::one());
    }
    Ok(())
}

fn conj_properties<F: Scalar>(
    ctx: &AlgebraContext<F>,
    x: &KElement<F>,
    y: &KElement<F>,
    z: &F,
) -> Result<(), TestCaseError> {
    let c = |k: &KElement<F>| ctx.k_conj(k).unwrap();
    prop_assert_eq!(c(&c(x)), x.clone());
    prop_assert_eq!(c(&ctx.k_mul(x, y)), ctx.k_mul(&c(x), &c(y)));
    prop_assert_eq!(c(&x.add(y)), c(x).add(&c(y)));
    let zk = KElement::from_z(z.clone());
    prop_assert_eq!(c(&zk), zk);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms_over_q(x in kq(), y in kq(), z in kq()) {
        field_axioms(&ctx_q(), &x, &y, &z)?;
    }

    #[test]
    fn field_axioms_over_f2t(x in kf2(), y in kf2(), z in kf2()) {
        field_axioms(&ctx_f2(), &x, &y, &z)?;
        field_axioms(&ctx_f2_separable(), &x, &y, &z)?;
    }

    #[test]
    fn conjugation_is_involutory_automorphism(x in kq(), y in kq(), z in q_scalar()) {
        conj_properties(&ctx_q(), &x, &y, &z)?;
    }

    #[test]
    fn conjugation_in_separable_char2(x in kf2(), y in kf2(), z in f2_scalar()) {
        conj_properties(&ctx_f2_separable(), &x, &y, &z)?;
    }

    #[test]
    fn derivation_rules(x in kf2(), y in kf2()) {
        let ctx = ctx_f2();
        let d = |k: &KElement<F2RatFunc>| ctx.k_derive(k).unwrap();
        prop_assert_eq!(
            d(&ctx.k_mul(&x, &y)),
            ctx.k_mul(&d(&x), &y).add(&ctx.k_mul(&x, &d(&y)))
        );
        prop_assert_eq!(d(&x.add(&y)), d(&x).add(&d(&y)));
        prop_assert_eq!(d(&d(&x)), d(&x));
    }

    #[test]
    fn canonical_text_is_idempotent(x in kq(), y in kf2()) {
        let once = KElement::<Rational>::parse(&x.to_string()).unwrap();
        prop_assert_eq!(&once, &x);
        prop_assert_eq!(KElement::<Rational>::parse(&once.to_string()).unwrap(), once);
        let once = KElement::<F2RatFunc>::parse(&y.to_string()).unwrap();
        prop_assert_eq!(&once, &y);
        prop_assert_eq!(KElement::<F2RatFunc>::parse(&once.to_string()).unwrap(), once);
    }

    #[test]
    fn square_roots_agree_with_squaring(x in kq(), y in kf2()) {
        let q = ctx_q();
        let s = q.k_sqrt(&q.k_mul(&x, &x)).unwrap();
        prop_assert!(s == x || s == x.neg());
        let f = ctx_f2_separable();
        prop_assert_eq!(f.k_sqrt(&f.k_mul(&y, &y)).unwrap(), y);
    }
}

#[test]
fn context_examples() {
    let q = ctx_q();
    assert!(q.is_galois());
    assert_eq!(q.z_kind().to_string(), "Q");
    let f = AlgebraContext::build(F2RatFunc::zero(), F2RatFunc::t(), F2RatFunc::one(), F2RatFunc::t()).unwrap();
    assert!(!f.is_galois());
    assert!(matches!(
        AlgebraContext::build(Rational::zero(), qi(-1), Rational::zero(), qi(1)),
        Err(Error::ReduciblePolynomial(_))
    ));
}

#[test]
fn non_canonical_scalars_are_rejected() {
    assert!(matches!(Rational::parse_canonical("4/2"), Err(Error::NotCanonical(_))));
    assert!(matches!(F2RatFunc::parse_canonical("t^2/t"), Err(Error::NotCanonical(_))));
    assert_eq!(f2("t^2+1/t").to_string(), "t^2+1/t");
}

#[test]
fn minimal_equation_of_a_holds() {
    let q = ctx_q();
    let a = KElement::<Rational>::a();
    let lhs = q.k_mul(&a, &a).add(&a.scale_z(q.lambda1())).add(&KElement::from_z(q.mu1().clone()));
    assert!(lhs.is_zero());
    let f = ctx_f2_separable();
    let a = KElement::<F2RatFunc>::a();
    let lhs = f.k_mul(&a, &a).add(&a.scale_z(f.lambda1())).add(&KElement::from_z(f.mu1().clone()));
    assert!(lhs.is_zero());
}
