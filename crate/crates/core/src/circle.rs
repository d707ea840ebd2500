//! The affine plane on L: the spread seen from the plane `x1 = 0` through the
//! line at infinity `(0,1)L`, its lines and circles, and the affine maps
//! `x -> m1 x^J m0 + m`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fieldtower::{AlgebraContext, KElement};
use crate::klein::CircleKind;
use crate::linalg::{self, Matrix, ZOps};
use crate::quaternions::LElement;
use crate::scalar::Scalar;
use crate::spread::{lift, split_l2, Chain, LineP3K, PointP1L, PointP3K};

/// A point of the affine plane, identified with `(1, x)K`.
pub type AffinePoint<F> = LElement<F>;

/// The affine line `dir*K + offset`, normalised so that `dir` has first
/// nonzero component one and `offset` has the matching component zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffLine<F> {
    dir: LElement<F>,
    offset: LElement<F>,
}

impl<F: Scalar> AffLine<F> {
    pub fn direction(&self) -> &LElement<F> {
        &self.dir
    }
    pub fn offset(&self) -> &LElement<F> {
        &self.offset
    }
}

impl<F: Scalar> fmt::Display for AffLine<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}K + {}", self.dir, self.offset)
    }
}

/// Written as the kind followed by the transversal matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circle<F> {
    chain: Chain<F>,
    kind: CircleKind,
    generator: Option<LElement<F>>,
}

impl<F: Scalar> Circle<F> {
    pub fn chain(&self) -> &Chain<F> {
        &self.chain
    }
    pub fn kind(&self) -> CircleKind {
        self.kind
    }
    /// `c` with the circle equal to `cKc^-1`, when built that way.
    pub fn generator(&self) -> Option<&LElement<F>> {
        self.generator.as_ref()
    }
}

impl<F: Scalar> fmt::Display for Circle<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.kind, self.chain.transversal())
    }
}

/// The affine trace of a chain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Trace<F> {
    Line(AffLine<F>),
    Circle(Circle<F>),
}

impl<F: Scalar> Trace<F> {
    pub fn kind(&self) -> CircleKind {
        match self {
            Trace::Line(_) => CircleKind::Line,
            Trace::Circle(c) => c.kind,
        }
    }
}

/// `x -> m1 * J(x) * m0 + m` with `J(x) = c^-1 x c`, or `c^-1 x^A c` when
/// `anti` is set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffMap<F> {
    pub m1: LElement<F>,
    pub m0: LElement<F>,
    pub m: LElement<F>,
    pub conj: LElement<F>,
    pub anti: bool,
}

/// Points `u + iv` with `N(u+iv) = eu + conj(eu)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HermitianVariety<F> {
    e: KElement<F>,
}

impl<F: Scalar> HermitianVariety<F> {
    pub fn e(&self) -> &KElement<F> {
        &self.e
    }
}

/// `{u*k + v*k'}` with `k'` the conjugate (Galois) or derivative of `k`,
/// together with a Z-basis of the same set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaerParam<F> {
    pub u: LElement<F>,
    pub v: LElement<F>,
    pub basis: [LElement<F>; 2],
}

fn k_to_l<F: Scalar>(k: &KElement<F>) -> LElement<F> {
    LElement::from_k(k.clone())
}

impl<F: Scalar> AlgebraContext<F> {
    // ---- points and lines of the affine plane

    pub fn rho(&self, s: &LineP3K<F>) -> Result<AffinePoint<F>> {
        if !self.is_spread_line(s) {
            return Err(Error::NotSpreadLine);
        }
        let (l0, l1) = lift(&s.rows()[0]);
        if l0.is_zero() {
            return Err(Error::InfinityLine);
        }
        self.q_div(&l1, &l0)
    }

    pub fn rho_inv(&self, x: &AffinePoint<F>) -> LineP3K<F> {
        self.spread_line_of(&PointP1L { l0: LElement::one(), l1: x.clone() })
    }

    /// The plane `(1,0)K ∨ ∞`, i.e. `x1 = 0`.
    pub fn affine_plane(&self) -> Matrix<KElement<F>> {
        [0, 2, 3].iter().map(|&j| unit(j)).collect()
    }

    pub fn aff_line(&self, dir: &LElement<F>, offset: &LElement<F>) -> Result<AffLine<F>> {
        let k = if !dir.u.is_zero() {
            self.k_inv(&dir.u)?
        } else {
            self.k_inv(&dir.v).map_err(|_| Error::DimensionError("zero direction".into()))?
        };
        let dir = self.q_scale(dir, &k);
        let offset = if !dir.u.is_zero() {
            offset.sub(&self.q_scale(&dir, &offset.u))
        } else {
            offset.sub(&self.q_scale(&dir, &offset.v))
        };
        Ok(AffLine { dir, offset })
    }

    pub fn aff_line_through(&self, p: &AffinePoint<F>, q: &AffinePoint<F>) -> Result<AffLine<F>> {
        self.aff_line(&q.sub(p), p)
    }

    pub fn aff_line_contains(&self, l: &AffLine<F>, x: &AffinePoint<F>) -> bool {
        let inv = self.q_inv(&l.dir).expect("nonzero direction");
        self.q_mul(&inv, &x.sub(&l.offset)).in_k()
    }

    pub fn collinear(&self, x: &AffinePoint<F>, y: &AffinePoint<F>, z: &AffinePoint<F>) -> bool {
        match self.q_inv(&y.sub(x)) {
            Ok(inv) => self.q_mul(&inv, &z.sub(x)).in_k(),
            Err(_) => true,
        }
    }

    pub fn aff_line_point(&self, l: &AffLine<F>, k: &KElement<F>) -> AffinePoint<F> {
        self.q_scale(&l.dir, k).add(&l.offset)
    }

    /// The chain with transversal `(1, offset)K ∨ (0, dir)K`.
    pub fn line_chain(&self, l: &AffLine<F>) -> Chain<F> {
        let t = self
            .line(vec![split_l2(&LElement::one(), &l.offset), split_l2(&LElement::zero(), &l.dir)])
            .expect("independent rows");
        self.chain_from_transversal(&t).expect("a line transversal is not a spread line")
    }

    fn affine_trace_of(&self, t: &LineP3K<F>) -> Result<AffLine<F>> {
        let at_inf = self
            .line_meet(t, &self.infinity_line())?
            .ok_or_else(|| Error::DimensionError("transversal misses the line at infinity".into()))?;
        let (_, dir) = lift(at_inf.coords());
        let finite = t
            .rows()
            .iter()
            .find(|r| !r[0].is_zero())
            .ok_or_else(|| Error::DimensionError("transversal lies at infinity".into()))?;
        let (l0, l1) = lift(finite);
        self.aff_line(&dir, &self.q_div(&l1, &l0)?)
    }

    fn in_affine_plane(&self, t: &LineP3K<F>) -> bool {
        t.rows().iter().all(|r| r[1].is_zero())
    }

    pub fn circle_classify(&self, c: &Chain<F>) -> Trace<F> {
        let inf = self.infinity_line();
        if !self.lines_meet(c.transversal(), &inf) {
            return Trace::Circle(Circle { chain: c.clone(), kind: CircleKind::Nondegenerate, generator: None });
        }
        for t in self.chain_transversals(c) {
            if self.in_affine_plane(&t) {
                let l = self.affine_trace_of(&t).expect("a transversal in the plane meets infinity");
                return Trace::Line(l);
            }
        }
        Trace::Circle(Circle { chain: c.clone(), kind: CircleKind::Degenerate, generator: None })
    }

    pub fn trace_contains(&self, c: &Chain<F>, x: &AffinePoint<F>) -> bool {
        self.chain_contains(c, &self.rho_inv(x)).expect("rho_inv gives spread lines")
    }

    /// Affine points of chain members, skipping the line at infinity.
    pub fn trace_sample(&self, c: &Chain<F>, n: usize, seed: u64, height: u32) -> Vec<AffinePoint<F>> {
        self.chain_sample(c, n + 1, seed, height).iter().filter_map(|s| self.rho(s).ok()).take(n).collect()
    }

    // ---- affine maps

    pub fn aff_map(
        &self,
        m1: LElement<F>,
        m0: LElement<F>,
        m: LElement<F>,
        conj: LElement<F>,
        anti: bool,
    ) -> Result<AffMap<F>> {
        if m1.is_zero() || m0.is_zero() || conj.is_zero() {
            return Err(Error::InvalidMap("m1, m0 and the conjugator must be nonzero".into()));
        }
        let f = AffMap { m1, m0, m, conj, anti };
        if !self.apply_j(&f, &LElement::a())?.in_k() {
            return Err(Error::InvalidMap("J does not map K onto K".into()));
        }
        Ok(f)
    }

    /// `x -> m1 x + m`.
    pub fn agl_map(&self, m1: LElement<F>, m: LElement<F>) -> Result<AffMap<F>> {
        self.aff_map(m1, LElement::one(), m, LElement::one(), false)
    }

    fn apply_j(&self, f: &AffMap<F>, x: &LElement<F>) -> Result<LElement<F>> {
        let x = if f.anti { self.q_antiauto(x) } else { x.clone() };
        Ok(self.q_mul(&self.q_inv(&f.conj)?, &self.q_mul(&x, &f.conj)))
    }

    pub fn apply_map(&self, f: &AffMap<F>, x: &AffinePoint<F>) -> AffinePoint<F> {
        let jx = self.apply_j(f, x).expect("conjugator is invertible");
        self.q_mul(&self.q_mul(&f.m1, &jx), &f.m0).add(&f.m)
    }

    pub fn is_affinity(&self, f: &AffMap<F>) -> bool {
        if f.anti {
            return false;
        }
        f.m0.in_k()
            || (self.is_galois() && self.q_inv(&LElement::i()).map(|ii| self.q_mul(&f.m0, &ii).in_k()).unwrap_or(false))
    }

    /// The spread-preserving collineation inducing a map with inner `J`:
    /// `(l0, l1) -> (m0'^-1 l0, m1' l1 + m m0'^-1 l0)` with `m1' = m1 c^-1`
    /// and `m0' = c m0`.
    pub fn map_line(&self, f: &AffMap<F>, l: &LineP3K<F>) -> Result<LineP3K<F>> {
        if f.anti {
            return Err(Error::InvalidMap("an anti-automorphic J induces a duality".into()));
        }
        let ci = self.q_inv(&f.conj)?;
        let m1 = self.q_mul(&f.m1, &ci);
        let m0i = self.q_inv(&self.q_mul(&f.conj, &f.m0))?;
        let rows = l
            .rows()
            .iter()
            .map(|r| {
                let (l0, l1) = lift(r);
                let n0 = self.q_mul(&m0i, &l0);
                let n1 = self.q_mul(&m1, &l1).add(&self.q_mul(&f.m, &n0));
                split_l2(&n0, &n1)
            })
            .collect();
        self.line(rows)
    }

    pub fn map_chain(&self, f: &AffMap<F>, c: &Chain<F>) -> Result<Chain<F>> {
        self.chain_from_transversal(&self.map_line(f, c.transversal())?)
    }

    // ---- degenerate circles

    pub fn deg_circle(&self, c: &LElement<F>) -> Result<Circle<F>> {
        if !self.in_l_circ(c) {
            return Err(Error::NotInLCirc);
        }
        let z = LElement::zero();
        let t = self.line(vec![split_l2(c, &z), split_l2(&z, c)])?;
        Ok(Circle { chain: self.chain_from_transversal(&t)?, kind: CircleKind::Degenerate, generator: Some(c.clone()) })
    }

    fn generator_of(&self, d: &Circle<F>) -> Result<LElement<F>> {
        match (&d.kind, &d.generator) {
            (CircleKind::Degenerate, Some(c)) => Ok(c.clone()),
            _ => Err(Error::NotDegenerate),
        }
    }

    /// Membership in `cKc^-1 = Z + Z*(c a c^-1)`, by linear algebra over Z.
    pub fn deg_circle_contains(&self, d: &Circle<F>, x: &AffinePoint<F>) -> Result<bool> {
        let c = self.generator_of(d)?;
        let w = self.q_mul(&self.q_mul(&c, &LElement::a()), &self.q_inv(&c)?);
        let z4 = |y: &LElement<F>| vec![y.u.xi.clone(), y.u.eta.clone(), y.v.xi.clone(), y.v.eta.clone()];
        let basis = vec![z4(&LElement::one()), z4(&w)];
        Ok(linalg::solve_combination(&ZOps::<F>::new(), &basis, &z4(x)).is_some())
    }

    pub fn absolute_directions(&self, d: &Circle<F>) -> Result<Vec<PointP3K<F>>> {
        if d.kind != CircleKind::Degenerate {
            return Err(Error::NotDegenerate);
        }
        let inf = self.infinity_line();
        let mut out: Vec<PointP3K<F>> = Vec::new();
        for t in self.chain_transversals(&d.chain) {
            if let Some(p) = self.line_meet(&t, &inf)? {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    pub fn baer_param(&self, d: &Circle<F>) -> Result<BaerParam<F>> {
        let c = self.generator_of(d)?;
        let ci = self.q_inv(&c)?;
        let (dd, e) = (k_to_l(&ci.u), k_to_l(&ci.v));
        let a = LElement::a();
        if self.is_galois() {
            let u = self.q_mul(&c, &dd);
            let v = self.q_mul(&self.q_mul(&c, &LElement::i()), &e);
            let la = LElement::from_z(self.lambda1().clone()).add(&a);
            let b1 = self.q_mul(&u, &a).sub(&self.q_mul(&v, &la));
            Ok(BaerParam { basis: [u.add(&v), b1], u, v })
        } else {
            let u = LElement::one();
            let v = self.q_mul(&c, &e);
            let b1 = self.q_mul(&u.add(&v), &a);
            Ok(BaerParam { basis: [u.clone(), b1], u, v })
        }
    }

    pub fn baer_param_point(&self, p: &BaerParam<F>, k: &KElement<F>) -> AffinePoint<F> {
        let k2 = if self.is_galois() { self.formal_conj(k) } else { self.derive(k) };
        self.q_scale(&p.u, k).add(&self.q_scale(&p.v, &k2))
    }

    /// Whether `x -> m1 x + m` maps sampled points of the circle into it, and
    /// its inverse does too.
    pub fn stabilizer_check(
        &self,
        d: &Circle<F>,
        m1: &LElement<F>,
        m: &LElement<F>,
        samples: usize,
        seed: u64,
    ) -> Result<bool> {
        let p = self.baer_param(d)?;
        let m1i = self.q_inv(m1)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = self.baer_param_point(&p, &self.random_k(&mut rng, 6));
            let fwd = self.q_mul(m1, &x).add(m);
            let back = self.q_mul(&m1i, &x.sub(m));
            if !self.deg_circle_contains(d, &fwd)? || !self.deg_circle_contains(d, &back)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // ---- the circle through 0 and 1 with transversal (1,0)K ∨ (i,i)K

    pub fn gamma0_chain(&self) -> Chain<F> {
        let t = self
            .line(vec![split_l2(&LElement::one(), &LElement::zero()), split_l2(&LElement::i(), &LElement::i())])
            .expect("independent rows");
        self.chain_from_transversal(&t).expect("not a spread line")
    }

    pub fn gamma0_point(&self, k0: &KElement<F>, k1: &KElement<F>) -> Result<AffinePoint<F>> {
        if k0.is_zero() && k1.is_zero() {
            return Err(Error::BothZero);
        }
        let ik1 = self.q_mul(&LElement::i(), &k_to_l(k1));
        let den = self.q_mul(&LElement::i(), &k_to_l(k1)).add(&k_to_l(k0));
        self.q_div(&ik1, &den)
    }

    pub fn gamma0_contains(&self, x: &AffinePoint<F>) -> bool {
        x.u == self.q_norm(x)
    }

    pub fn gamma0_params(&self, x: &AffinePoint<F>) -> Result<(KElement<F>, KElement<F>)> {
        if !self.gamma0_contains(x) {
            return Err(Error::NotOnGamma0);
        }
        if x.is_zero() {
            return Ok((KElement::one(), KElement::zero()));
        }
        // x = i(k0 + i)^-1 gives k0 = x^-1 i - i
        let i = LElement::i();
        let k0 = self.q_mul(&self.q_inv(x)?, &i).sub(&i);
        if !k0.in_k() {
            return Err(Error::NotOnGamma0);
        }
        Ok((k0.u, KElement::one()))
    }

    // ---- orthogonality

    pub fn star(&self, x: &LElement<F>, y: &LElement<F>) -> Result<KElement<F>> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        let mu2 = KElement::from_z(self.mu2().clone());
        Ok(self.k_mul(&self.formal_conj(&x.u), &y.u).add(&self.k_mul(&mu2, &self.k_mul(&self.formal_conj(&x.v), &y.v))))
    }

    /// `dir2` lies in the ray `dir1 * i * K`.
    pub fn directions_orthogonal(&self, d1: &LElement<F>, d2: &LElement<F>) -> Result<bool> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        let d1i = self.q_mul(d1, &LElement::i());
        Ok(self.q_mul(&self.q_inv(&d1i)?, d2).in_k())
    }

    pub fn lines_orthogonal(&self, l1: &AffLine<F>, l2: &AffLine<F>) -> Result<bool> {
        let by_star = self.star(&l1.dir, &l2.dir)?.is_zero();
        let by_ray = self.directions_orthogonal(&l1.dir, &l2.dir)?;
        assert_eq!(by_star, by_ray, "orthogonality criteria disagree for {l1} and {l2}");
        Ok(by_star)
    }

    // ---- regular points, tangents, midline

    fn nondegenerate_chain<'c>(&self, g: &'c Circle<F>) -> Result<&'c Chain<F>> {
        if g.kind != CircleKind::Nondegenerate {
            return Err(Error::NotNondegenerate);
        }
        Ok(&g.chain)
    }

    /// The regular points with the transversals they lie on.
    fn regular_points_with_transversals(&self, g: &Circle<F>) -> Result<Vec<(AffinePoint<F>, LineP3K<F>)>> {
        let chain = self.nondegenerate_chain(g)?;
        let plane = self.affine_plane();
        let mut out: Vec<(AffinePoint<F>, LineP3K<F>)> = Vec::new();
        for t in self.chain_transversals(chain) {
            let p = self.meet_line_plane(&t, &plane)?;
            let c = p.coords();
            let inv = self.k_inv(&c[0])?;
            let x = LElement::new(self.k_mul(&c[2], &inv), self.k_mul(&c[3], &inv));
            if !out.iter().any(|(y, _)| *y == x) {
                out.push((x, t));
            }
        }
        Ok(out)
    }

    pub fn regular_points(&self, g: &Circle<F>) -> Result<Vec<AffinePoint<F>>> {
        Ok(self.regular_points_with_transversals(g)?.into_iter().map(|(x, _)| x).collect())
    }

    pub fn tangent_line(&self, g: &Circle<F>, p: &AffinePoint<F>) -> Result<AffLine<F>> {
        let t = self
            .regular_points_with_transversals(g)?
            .into_iter()
            .find(|(x, _)| x == p)
            .map(|(_, t)| t)
            .ok_or(Error::NotRegularPoint)?;
        let s = self.rho_inv(p);
        let q = self.point(s.rows()[1].clone())?;
        let q = if self.point_on_line(&q, &t) { self.point(s.rows()[0].clone())? } else { q };
        let plane = self.join_line_point(&t, &q)?;
        let tl = self.line(linalg::meet(self, &plane, &self.affine_plane(), 4))?;
        self.affine_trace_of(&tl)
    }

    pub fn midline(&self, g: &Circle<F>) -> Result<AffLine<F>> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        let pts = self.regular_points(g)?;
        if pts.len() != 2 {
            return Err(Error::DimensionError(format!("{} regular points", pts.len())));
        }
        self.aff_line_through(&pts[0], &pts[1])
    }

    // ---- Hermitian varieties

    /// `n` distinct elements `e` of K with `e + conj(e) = 1`.
    pub fn e_sample(&self, n: usize, seed: u64, height: u32) -> Result<Vec<KElement<F>>> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        let base = if F::characteristic() == 2 {
            // a/lambda1 + Z
            KElement::new(F::zero(), self.lambda1().inv().expect("separable"))
        } else {
            KElement::from_z(F::from_i64(2).inv().unwrap())
        };
        let step = if F::characteristic() == 2 {
            KElement::one()
        } else {
            KElement::new(self.lambda1().clone(), F::from_i64(2))
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = vec![base.clone()];
        while out.len() < n {
            let z = F::random(&mut rng, height);
            let e = base.add(&step.scale_z(&z));
            if !out.contains(&e) {
                out.push(e);
            }
        }
        out.truncate(n);
        debug_assert!(out.iter().all(|e| e.add(&self.formal_conj(e)) == KElement::one()));
        Ok(out)
    }

    pub fn hermitian(&self, e: KElement<F>) -> Result<HermitianVariety<F>> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        if e.add(&self.formal_conj(&e)) != KElement::one() {
            return Err(Error::InvalidMap(format!("{e} + conj({e}) != 1")));
        }
        Ok(HermitianVariety { e })
    }

    fn trace_k(&self, k: &KElement<F>) -> KElement<F> {
        k.add(&self.formal_conj(k))
    }

    pub fn hermitian_contains(&self, h: &HermitianVariety<F>, x: &AffinePoint<F>) -> Result<bool> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        Ok(self.q_norm(x) == self.trace_k(&self.k_mul(&h.e, &x.u)))
    }

    /// A point of `H_e ∩ H_f` on the Z-line through 0 and `w`, where `w.u`
    /// is projected so that `trace((e - f) w.u) = 0`.
    pub fn hermitian_pair_point(
        &self,
        h: &HermitianVariety<F>,
        g: &HermitianVariety<F>,
        w: &LElement<F>,
    ) -> Result<Option<AffinePoint<F>>> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        let delta = h.e.sub(&g.e);
        // trace(delta * (xi + a*eta)) = xi*T(delta) + eta*T(delta*a)
        let ta = self.trace_k(&delta).xi;
        let tb = self.trace_k(&self.k_mul(&delta, &KElement::a())).xi;
        let w = if delta.is_zero() {
            w.clone()
        } else {
            LElement::new(KElement::new(tb, ta.neg()).scale_z(&w.u.xi), w.v.clone())
        };
        let n = self.q_norm(&w);
        if n.is_zero() {
            return Ok(None);
        }
        let lam = self.trace_k(&self.k_mul(&h.e, &w.u)).xi.div(&n.xi).unwrap();
        if lam.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.q_scale(&w, &KElement::from_z(lam))))
    }

    /// A point of Γ₀ on the Z-line through 0 and `w` (after dropping the
    /// a-part of `w.u`).
    pub fn gamma0_chord_point(&self, w: &LElement<F>) -> Option<AffinePoint<F>> {
        let w = LElement::new(KElement::from_z(w.u.xi.clone()), w.v.clone());
        let n = self.q_norm(&w);
        if n.is_zero() || w.u.is_zero() {
            return None;
        }
        let lam = w.u.xi.div(&n.xi)?;
        Some(self.q_scale(&w, &KElement::from_z(lam)))
    }

    // ---- the orbit of the circle through 0 and 1

    /// An affinity `x -> m1 x + m` taking the circle onto Γ₀.
    pub fn normalize_to_gamma0(&self, g: &Circle<F>) -> Result<AffMap<F>> {
        let regs = self.regular_points_with_transversals(g)?;
        if self.is_galois() {
            let (p0, p1) = (&regs[0].0, &regs[1].0);
            let m1 = self.q_inv(&p1.sub(p0))?;
            let m = self.q_mul(&m1, p0).neg();
            return self.agl_map(m1, m);
        }
        let (p0, t) = &regs[0];
        let shift = self.agl_map(LElement::one(), p0.neg())?;
        let t = self.map_line(&shift, t)?;
        // the transversal meets x0 = 0 in (i d, e + i f)K
        let plane: Matrix<KElement<F>> = [1, 2, 3].iter().map(|&j| unit(j)).collect();
        let q = self.meet_line_plane(&t, &plane)?;
        let (l0, l1) = lift(q.coords());
        let d = l0.v.clone();
        let m1 = self.q_div(&self.q_mul(&LElement::i(), &k_to_l(&d)), &l1)?;
        let m = self.q_mul(&m1, p0).neg();
        self.agl_map(m1, m)
    }

    // ---- change of affine plane

    /// The point where the spread line through `x` meets another plane
    /// through the line at infinity.
    pub fn beta_map(&self, plane: &[Vec<KElement<F>>], x: &AffinePoint<F>) -> Result<PointP3K<F>> {
        self.check_plane(plane)?;
        self.meet_line_plane(&self.rho_inv(x), plane)
    }

    fn check_plane(&self, plane: &[Vec<KElement<F>>]) -> Result<()> {
        if linalg::rank(self, plane) != 3 {
            return Err(Error::InvalidPlane("rank is not 3".into()));
        }
        if !self.infinity_line().rows().iter().all(|r| linalg::in_span(self, plane, r)) {
            return Err(Error::InvalidPlane("does not contain the line at infinity".into()));
        }
        Ok(())
    }

    /// A collinear triple of the affine plane whose images under `beta_map`
    /// are not collinear, if one is found among the samples.
    pub fn beta_collinearity_witness(
        &self,
        plane: &[Vec<KElement<F>>],
        samples: usize,
        seed: u64,
    ) -> Result<Option<[AffinePoint<F>; 3]>> {
        self.check_plane(plane)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let dir = self.random_nonzero_l(&mut rng, 4);
            let off = self.random_l(&mut rng, 4);
            let l = self.aff_line(&dir, &off)?;
            let pts: Vec<AffinePoint<F>> =
                (0..3).map(|_| self.aff_line_point(&l, &self.random_k(&mut rng, 4))).collect();
            let imgs: Vec<Vec<KElement<F>>> =
                pts.iter().map(|p| self.beta_map(plane, p).map(|q| q.coords().to_vec())).collect::<Result<_>>()?;
            if linalg::rank(self, &imgs) > 2 {
                return Ok(Some([pts[0].clone(), pts[1].clone(), pts[2].clone()]));
            }
        }
        Ok(None)
    }

    // ---- sampling

    pub fn random_nondegenerate_circle<R: rand::Rng + ?Sized>(&self, rng: &mut R, height: u32) -> Circle<F> {
        loop {
            if let Trace::Circle(c) = self.circle_classify(&self.random_chain(rng, height)) {
                if c.kind == CircleKind::Nondegenerate {
                    return c;
                }
            }
        }
    }

    pub fn random_l_circ<R: rand::Rng + ?Sized>(&self, rng: &mut R, height: u32) -> LElement<F> {
        loop {
            let c = self.random_l(rng, height);
            if self.in_l_circ(&c) {
                return c;
            }
        }
    }

    pub fn circle_of_chain(&self, c: &Chain<F>) -> Result<Circle<F>> {
        match self.circle_classify(c) {
            Trace::Circle(circ) => Ok(circ),
            Trace::Line(_) => Err(Error::NotNondegenerate),
        }
    }
}

fn unit<F: Scalar>(j: usize) -> Vec<KElement<F>> {
    let mut v = vec![KElement::zero(); 4];
    v[j] = KElement::one();
    v
}
