//! The Klein model: Plücker coordinates of lines of P³(K), the Klein quadric,
//! the Baer subspace Π_Z carrying the spread, and chains as quadric sections.
//!
//! Coordinates are ordered `(p01, p02, p03, p23, p31, p12)` with
//! `p_ij = x_i y_j - x_j y_i`; the quadric is `p01 p23 + p02 p31 + p03 p12`.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fieldtower::{AlgebraContext, KElement};
use crate::linalg::{self, Matrix, ZOps};
use crate::quaternions::LElement;
use crate::scalar::Scalar;
use crate::spread::{Chain, LineP3K, PointP1L};

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

/// A point of the Klein space P⁵(K), first nonzero coordinate one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PluckerVec<F> {
    coords: Vec<KElement<F>>,
}

impl<F: Scalar> PluckerVec<F> {
    pub fn coords(&self) -> &[KElement<F>] {
        &self.coords
    }
}

impl<F: Scalar> fmt::Display for PluckerVec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", c.join(", "))
    }
}

/// Seven points in general position spanning Π_Z: the Z-span of `w` is the
/// Z-structure `V_Z`, and the seventh point is the sum of the six.
#[derive(Clone, Debug)]
pub struct BaerFrame<F> {
    w: Matrix<KElement<F>>,
}

impl<F: Scalar> BaerFrame<F> {
    pub fn vectors(&self) -> &Matrix<KElement<F>> {
        &self.w
    }
}

/// Kinds of the affine trace of a chain.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CircleKind {
    Line,
    Degenerate,
    Nondegenerate,
}

impl fmt::Display for CircleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleKind::Line => write!(f, "line"),
            CircleKind::Degenerate => write!(f, "degenerate"),
            CircleKind::Nondegenerate => write!(f, "nondegenerate"),
        }
    }
}

/// The solid X spanned by the Klein images of a chain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainSpace<F> {
    x: Matrix<KElement<F>>,
}

impl<F: Scalar> ChainSpace<F> {
    pub fn rows(&self) -> &Matrix<KElement<F>> {
        &self.x
    }
}

/// Outcome of checking the three sphere conditions on a chain space.
#[derive(Clone, Debug)]
pub struct SphereCheck<F> {
    /// Dimension over Z of `X ∩ V_Z` (vector dimension; 4 is expected).
    pub z_dim: usize,
    /// Members whose images lie in X and in Π_Z.
    pub members_in_x: usize,
    pub members_checked: usize,
    /// Points of `X ∩ Π_Z ∩ Q` that pulled back to members of the chain.
    pub points_from_members: usize,
    pub points_checked: usize,
    /// Sampled pairs of member images whose joining line leaves the quadric.
    pub secants_off_quadric: usize,
    pub secants_checked: usize,
    /// A line of `X ∩ Q`, or the error explaining why none was found.
    pub line: Result<Matrix<KElement<F>>>,
}

impl<F: Scalar> AlgebraContext<F> {
    fn plucker_raw(&self, x: &[KElement<F>], y: &[KElement<F>]) -> Vec<KElement<F>> {
        PAIRS.iter().map(|&(i, j)| self.k_mul(&x[i], &y[j]).sub(&self.k_mul(&x[j], &y[i]))).collect()
    }

    /// The Klein image of a line.
    pub fn plucker(&self, l: &LineP3K<F>) -> PluckerVec<F> {
        let r = l.rows();
        self.plucker_vec(self.plucker_raw(&r[0], &r[1])).expect("a line has a nonzero image")
    }

    pub fn plucker_vec(&self, coords: Vec<KElement<F>>) -> Result<PluckerVec<F>> {
        if coords.len() != 6 {
            return Err(Error::DimensionError(format!("expected 6 coordinates, got {}", coords.len())));
        }
        let coords = linalg::normalize(self, &coords).ok_or_else(|| Error::DimensionError("zero vector".into()))?;
        Ok(PluckerVec { coords })
    }

    pub fn klein_quadric(&self, v: &[KElement<F>]) -> KElement<F> {
        self.k_mul(&v[0], &v[3]).add(&self.k_mul(&v[1], &v[4])).add(&self.k_mul(&v[2], &v[5]))
    }

    /// `q(v+w) - q(v) - q(w)`.
    pub fn klein_polar(&self, v: &[KElement<F>], w: &[KElement<F>]) -> KElement<F> {
        let mut acc = KElement::zero();
        for (a, b) in [(0, 3), (1, 4), (2, 5)] {
            acc = acc.add(&self.k_mul(&v[a], &w[b])).add(&self.k_mul(&v[b], &w[a]));
        }
        acc
    }

    /// The line whose Klein image is `v`.
    pub fn klein_inverse(&self, v: &[KElement<F>]) -> Result<LineP3K<F>> {
        if !self.klein_quadric(v).is_zero() {
            return Err(Error::DimensionError("point is not on the Klein quadric".into()));
        }
        let mut m = vec![vec![KElement::zero(); 4]; 4];
        for (idx, &(i, j)) in PAIRS.iter().enumerate() {
            m[i][j] = v[idx].clone();
            m[j][i] = v[idx].neg();
        }
        self.line(m)
    }

    /// Frame construction for Π_Z from seven spread lines.
    pub fn compute_pi_z(&self, seed: u64) -> Result<BaerFrame<F>> {
        const ATTEMPTS: usize = 50;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ATTEMPTS {
            let mut vs: Matrix<KElement<F>> = vec![self.plucker(&self.infinity_line()).coords];
            while vs.len() < 7 {
                let x = self.random_l(&mut rng, 4);
                let s = self.spread_line_of(&PointP1L { l0: LElement::one(), l1: x });
                vs.push(self.plucker(&s).coords);
            }
            let (six, seventh) = vs.split_at(6);
            if linalg::rank(self, six) < 6 {
                continue;
            }
            let Some(c) = linalg::solve_combination(self, six, &seventh[0]) else { continue };
            if c.iter().any(|ci| ci.is_zero()) {
                continue;
            }
            let w = six.iter().zip(&c).map(|(v, ci)| linalg::scale(self, v, ci)).collect();
            return Ok(BaerFrame { w });
        }
        Err(Error::FrameSearchFailed(ATTEMPTS))
    }

    /// Z-coordinates of a representative of `vK` in `V_Z`, if `vK` ∈ Π_Z.
    pub fn pi_z_coords(&self, frame: &BaerFrame<F>, v: &[KElement<F>]) -> Option<Vec<F>> {
        let beta = linalg::solve_combination(self, &frame.w, v)?;
        let pivot = beta.iter().find(|b| !b.is_zero())?;
        let inv = self.k_inv(pivot).ok()?;
        beta.iter()
            .map(|b| {
                let r = self.k_mul(b, &inv);
                r.in_z().then_some(r.xi)
            })
            .collect()
    }

    pub fn in_pi_z(&self, frame: &BaerFrame<F>, v: &[KElement<F>]) -> bool {
        self.pi_z_coords(frame, v).is_some()
    }

    /// The vector `sum w_i z_i` of `V_Z`.
    pub fn v_z_vector(&self, frame: &BaerFrame<F>, z: &[F]) -> Vec<KElement<F>> {
        let mut acc = vec![KElement::zero(); 6];
        for (w, zi) in frame.w.iter().zip(z) {
            acc = linalg::axpy(self, w, &KElement::from_z(zi.clone()), &acc);
        }
        acc
    }

    /// The Klein transform of `iota`: a semilinear map of the Klein space.
    pub fn baer_involution(&self, v: &[KElement<F>]) -> Result<Vec<KElement<F>>> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        let i = LElement::i();
        let images: Vec<Vec<KElement<F>>> = (0..4)
            .map(|j| {
                let mut e = vec![KElement::zero(); 4];
                e[j] = KElement::one();
                self.l2_right_mul(&e, &i)
            })
            .collect();
        let mut acc = vec![KElement::zero(); 6];
        for (idx, &(j, k)) in PAIRS.iter().enumerate() {
            let wedge = self.plucker_raw(&images[j], &images[k]);
            acc = linalg::axpy(self, &wedge, &self.formal_conj(&v[idx]), &acc);
        }
        Ok(acc)
    }

    /// The K-span of the Klein images of chain members.
    pub fn chain_space(&self, c: &Chain<F>, seed: u64) -> Result<ChainSpace<F>> {
        let members = self.chain_sample(c, 6, seed, 6);
        let rows: Matrix<KElement<F>> = members.iter().map(|s| self.plucker(s).coords).collect();
        let x = linalg::row_space(self, &rows);
        match x.len() {
            4 => Ok(ChainSpace { x }),
            n if n < 4 => Err(Error::DegenerateSpan),
            n => Err(Error::DimensionError(format!("chain images span dimension {n}"))),
        }
    }

    /// Basis over Z (as Z-coordinate vectors w.r.t. the frame) of `X ∩ V_Z`.
    pub fn chain_space_z_basis(&self, frame: &BaerFrame<F>, x: &ChainSpace<F>) -> Matrix<F> {
        let normals = linalg::nullspace(self, &x.x, 6);
        let mut eqs: Matrix<F> = Vec::new();
        for n in &normals {
            let vals: Vec<KElement<F>> = frame.w.iter().map(|w| linalg::dot(self, w, n)).collect();
            eqs.push(vals.iter().map(|k| k.xi.clone()).collect());
            eqs.push(vals.iter().map(|k| k.eta.clone()).collect());
        }
        linalg::nullspace(&ZOps::<F>::new(), &eqs, 6)
    }

    /// A line of the Klein space inside `X ∩ Q` through `y`, from splitting
    /// the tangent-plane section at `y` into two lines.
    pub fn find_line_on_quadric(&self, x: &ChainSpace<F>, y: &[KElement<F>]) -> Result<Matrix<KElement<F>>> {
        let polar = linalg::nullspace(self, &[self.polar_functional(y)], 6);
        let t = linalg::meet(self, &x.x, &polar, 6);
        if t.len() != 3 || !linalg::in_span(self, &t, y) {
            return Err(Error::DimensionError(format!("tangent section has dimension {}", t.len())));
        }
        let mut basis = vec![y.to_vec()];
        for r in &t {
            if !linalg::in_span(self, &basis, r) {
                basis.push(r.clone());
            }
        }
        let (b1, b2) = (&basis[1], &basis[2]);
        let qa = self.klein_quadric(b1);
        let qb = self.klein_polar(b1, b2);
        let qc = self.klein_quadric(b2);
        let dir = if qa.is_zero() {
            b1.clone()
        } else {
            let ia = self.k_inv(&qa)?;
            let beta =
                self.quadratic_root(&self.k_mul(&qb, &ia), &self.k_mul(&qc, &ia)).ok_or(Error::NoRationalLine)?;
            linalg::axpy(self, b1, &beta, b2)
        };
        let line = linalg::row_space(self, &[y.to_vec(), dir]);
        debug_assert!(self.klein_quadric(&line[0]).is_zero() && self.klein_quadric(&line[1]).is_zero());
        Ok(line)
    }

    /// The coefficient vector of `z -> B(y, z)`.
    fn polar_functional(&self, y: &[KElement<F>]) -> Vec<KElement<F>> {
        [3, 4, 5, 0, 1, 2].iter().map(|&j| y[j].clone()).collect()
    }

    /// Checks the sphere conditions for the chain space of `c`.
    pub fn check_sphere_conditions(
        &self,
        frame: &BaerFrame<F>,
        c: &Chain<F>,
        x: &ChainSpace<F>,
        seed: u64,
        pairs: usize,
    ) -> SphereCheck<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zb = self.chain_space_z_basis(frame, x);
        let members = self.chain_sample(c, pairs.max(2) + 1, seed ^ 0x5eed, 6);
        let images: Vec<Vec<KElement<F>>> = members.iter().map(|s| self.plucker(s).coords).collect();

        let members_in_x = images.iter().filter(|v| linalg::in_span(self, &x.x, v) && self.in_pi_z(frame, v)).count();

        // chords through a known point of X ∩ Π_Z ∩ Q
        let z0 = self
            .pi_z_coords(frame, &images[0])
            .map(|z| self.v_z_vector(frame, &z))
            .unwrap_or_else(|| images[0].clone());
        let zops = ZOps::<F>::new();
        let mut points_from_members = 0;
        let mut points_checked = 0;
        for _ in 0..pairs {
            let coeffs: Vec<F> = zb.iter().map(|_| F::random(&mut rng, 6)).collect();
            let mut zc = vec![F::zero(); 6];
            for (b, k) in zb.iter().zip(&coeffs) {
                zc = linalg::axpy(&zops, b, k, &zc);
            }
            let w = self.v_z_vector(frame, &zc);
            let qw = self.klein_quadric(&w);
            let p = if qw.is_zero() {
                w
            } else {
                let lam = self.klein_polar(&z0, &w).neg();
                let lam = self.k_mul(&lam, &self.k_inv(&qw).unwrap());
                linalg::axpy(self, &w, &lam, &z0)
            };
            if linalg::is_zero_vec(self, &p) {
                continue;
            }
            points_checked += 1;
            let ok = self.in_pi_z(frame, &p)
                && self
                    .klein_inverse(&p)
                    .ok()
                    .filter(|l| self.is_spread_line(l))
                    .is_some_and(|l| self.chain_contains(c, &l).unwrap_or(false));
            if ok {
                points_from_members += 1;
            }
        }

        let mut secants_off_quadric = 0;
        let mut secants_checked = 0;
        for k in 0..pairs {
            let (v1, v2) = (&images[k % images.len()], &images[(k + 1) % images.len()]);
            if v1 == v2 {
                continue;
            }
            secants_checked += 1;
            if !self.klein_polar(v1, v2).is_zero() {
                secants_off_quadric += 1;
            }
        }

        SphereCheck {
            z_dim: zb.len(),
            members_in_x,
            members_checked: images.len(),
            points_from_members,
            points_checked,
            secants_off_quadric,
            secants_checked,
            line: self.find_line_on_quadric(x, &images[0]),
        }
    }

    /// The plane 𝒵 of Klein images of lines inside the plane `x1 = 0`.
    pub fn z_plane(&self) -> Matrix<KElement<F>> {
        [1, 2, 3]
            .iter()
            .map(|&j| {
                let mut v = vec![KElement::zero(); 6];
                v[j] = KElement::one();
                v
            })
            .collect()
    }

    /// Projection with centre 𝒵 onto the plane `F = {p02 = p03 = p23 = 0}`,
    /// read in the coordinates `(p01, p31, p12)`.
    pub fn project_pi(&self, v: &[KElement<F>]) -> Result<Vec<KElement<F>>> {
        let img = vec![v[0].clone(), v[4].clone(), v[5].clone()];
        linalg::normalize(self, &img).ok_or(Error::CentreHit)
    }

    pub fn classify_via_klein(&self, x: &ChainSpace<F>) -> Result<CircleKind> {
        let m = linalg::meet(self, &x.x, &self.z_plane(), 6);
        let i_point = self.plucker(&self.infinity_line()).coords;
        let has_i = linalg::in_span(self, &m, &i_point);
        match (m.len(), has_i) {
            (2, true) => Ok(CircleKind::Line),
            (1, true) => Ok(CircleKind::Degenerate),
            (1, false) => Ok(CircleKind::Nondegenerate),
            (n, _) => Err(Error::UnexpectedIntersection(n)),
        }
    }

    /// Compares the tangent planes of the two quadric sections at `γ(p)`.
    pub fn tangent_criterion(&self, c0: &Chain<F>, c1: &Chain<F>, p: &LineP3K<F>, seed: u64) -> Result<bool> {
        if !self.chain_contains(c0, p)? || !self.chain_contains(c1, p)? {
            return Err(Error::PointNotOnBothChains);
        }
        let y = self.plucker(p).coords;
        let polar = linalg::nullspace(self, &[self.polar_functional(&y)], 6);
        let x0 = self.chain_space(c0, seed)?;
        let x1 = self.chain_space(c1, seed)?;
        Ok(linalg::meet(self, &x0.x, &polar, 6) == linalg::meet(self, &x1.x, &polar, 6))
    }

    /// `X0` contains the polar space of `X1`.
    pub fn orthogonal_criterion(&self, c0: &Chain<F>, c1: &Chain<F>, seed: u64) -> Result<bool> {
        if !self.is_galois() {
            return Err(Error::NotGalois);
        }
        let x0 = self.chain_space(c0, seed)?;
        let x1 = self.chain_space(c1, seed)?;
        let functionals: Matrix<KElement<F>> = x1.x.iter().map(|r| self.polar_functional(r)).collect();
        let perp = linalg::nullspace(self, &functionals, 6);
        Ok(perp.iter().all(|v| linalg::in_span(self, &x0.x, v)))
    }
}

/// The projective map of P² sending four points in general position to four
/// others, as a 3×3 matrix acting on column vectors.
pub fn collineation_from_frame<F: Scalar>(
    ctx: &AlgebraContext<F>,
    src: &[Vec<KElement<F>>; 4],
    dst: &[Vec<KElement<F>>; 4],
) -> Result<Matrix<KElement<F>>> {
    let scaled = |pts: &[Vec<KElement<F>>; 4]| -> Result<Matrix<KElement<F>>> {
        let c = linalg::solve_combination(ctx, &pts[..3], &pts[3])
            .filter(|c| c.iter().all(|x| !x.is_zero()))
            .ok_or_else(|| Error::InvalidMap("frame points not in general position".into()))?;
        // columns p_j * c_j
        Ok((0..3).map(|r| (0..3).map(|j| ctx.k_mul(&pts[j][r], &c[j])).collect()).collect())
    };
    let s = scaled(src)?;
    let d = scaled(dst)?;
    let s_inv = invert3(ctx, &s)?;
    Ok(mat_mul(ctx, &d, &s_inv))
}

pub fn mat_mul<F: Scalar>(
    ctx: &AlgebraContext<F>,
    a: &Matrix<KElement<F>>,
    b: &Matrix<KElement<F>>,
) -> Matrix<KElement<F>> {
    let n = b[0].len();
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    let col: Vec<KElement<F>> = b.iter().map(|r| r[j].clone()).collect();
                    linalg::dot(ctx, row, &col)
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Scalar>(ctx: &AlgebraContext<F>, a: &Matrix<KElement<F>>, v: &[KElement<F>]) -> Vec<KElement<F>> {
    a.iter().map(|row| linalg::dot(ctx, row, v)).collect()
}

fn invert3<F: Scalar>(ctx: &AlgebraContext<F>, m: &Matrix<KElement<F>>) -> Result<Matrix<KElement<F>>> {
    let n = m.len();
    let mut aug: Matrix<KElement<F>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { KElement::one() } else { KElement::zero() }));
            row
        })
        .collect();
    let piv = linalg::rref(ctx, &mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return Err(Error::InvalidMap("singular matrix".into()));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldtower::ctx_q;
    use crate::scalar::Rational;

    fn qv(c: &[i64]) -> Vec<KElement<Rational>> {
        c.iter().map(|&x| KElement::from_i64(x)).collect()
    }

    #[test]
    fn plucker_examples() {
        let q = ctx_q();
        let inf = q.plucker(&q.infinity_line());
        assert_eq!(inf.coords().to_vec(), qv(&[0, 0, 0, 1, 0, 0]));
        let l = q.line(vec![qv(&[1, 0, 0, 0]), qv(&[0, 1, 0, 0])]).unwrap();
        assert_eq!(q.plucker(&l).coords().to_vec(), qv(&[1, 0, 0, 0, 0, 0]));
        assert!(!q.klein_polar(inf.coords(), q.plucker(&l).coords()).is_zero());
    }

    #[test]
    fn inverse_klein_map_roundtrips() {
        let q = ctx_q();
        let l = q.line(vec![qv(&[1, 2, 0, 3]), qv(&[0, 1, 5, -1])]).unwrap();
        assert_eq!(q.klein_inverse(q.plucker(&l).coords()).unwrap(), l);
    }

    #[test]
    fn frame_contains_infinity_and_zero() {
        let q = ctx_q();
        let frame = q.compute_pi_z(1).unwrap();
        assert!(q.in_pi_z(&frame, q.plucker(&q.infinity_line()).coords()));
        let zero = q.line(vec![qv(&[1, 0, 0, 0]), qv(&[0, 1, 0, 0])]).unwrap();
        assert!(q.in_pi_z(&frame, q.plucker(&zero).coords()));
    }

    #[test]
    fn projection_of_infinity_hits_centre() {
        let q = ctx_q();
        assert_eq!(q.project_pi(q.plucker(&q.infinity_line()).coords()), Err(Error::CentreHit));
    }

    #[test]
    fn frame_collineation_maps_reference_points() {
        let q = ctx_q();
        let src = [qv(&[1, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 0, 1]), qv(&[1, 1, 1])];
        let dst = [qv(&[1, 0, 0]), qv(&[1, 1, 0]), qv(&[1, 0, 1]), qv(&[1, 2, 3])];
        let m = collineation_from_frame(&q, &src, &dst).unwrap();
        for (s, d) in src.iter().zip(&dst) {
            let img = mat_vec(&q, &m, s);
            assert_eq!(linalg::normalize(&q, &img), linalg::normalize(&q, d));
        }
    }
}
