//! One randomised verification suite per theorem.

use std::collections::BTreeMap;
use std::time::Instant;

use chaingeo_core::linalg;
use chaingeo_core::{AffLine, AffMap, AlgebraContext, Chain, CircleKind, Error, KElement, LElement, LineP3K, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::report::{Failure, VerificationReport, SCHEMA_VERSION};

pub const KERNEL: &str = "ALGEBRA-KERNEL";

pub struct Theorem {
    pub id: &'static str,
    pub default_samples: usize,
    pub galois_only: bool,
}

const fn th(id: &'static str, default_samples: usize, galois_only: bool) -> Theorem {
    Theorem { id, default_samples, galois_only }
}

pub const THEOREMS: [Theorem; 16] = [
    th("T-SPREAD-PARTITION", 100, false),
    th("T-KLEIN-BAER", 50, false),
    th("T-CHAIN-SPHERE", 20, false),
    th("T-TANGENT-KLEIN", 50, false),
    th("T-ORTHO-KLEIN", 50, true),
    th("T-AFFINITY", 50, false),
    th("L-UNIQUE-CHAIN", 50, false),
    th("L-BAER-SUBPLANE", 10, false),
    th("T-DEG-BAER", 10, false),
    th("T-ORBIT", 25, false),
    th("T-CIRCLE-EQ", 200, false),
    th("T-HERMITIAN", 5, true),
    th("T-PARALLEL-TANGENT", 30, false),
    th("T-MIDLINE", 10, true),
    th("T-BETA", 20, false),
    th("T-KLEIN-CLASSIFY", 100, false),
];

const KERNEL_THEOREM: Theorem = th(KERNEL, 500, false);

pub fn lookup(id: &str) -> Result<&'static Theorem, CliError> {
    if id == KERNEL {
        return Ok(&KERNEL_THEOREM);
    }
    THEOREMS.iter().find(|t| t.id == id).ok_or_else(|| CliError::UnknownTheorem(id.to_string()))
}

/// The seed a suite runs with: the first eight bytes of
/// `sha256(master seed, theorem id)`.
pub fn derive_seed(master: u64, id: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(id.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().unwrap())
}

pub enum Outcome {
    Pass,
    Skip,
    Fail(Failure),
}

type Sample = Result<Outcome, Failure>;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { inputs: String::new(), expected: "no error".into(), got: e.to_string() }
    }
}

fn failure(inputs: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) -> Failure {
    Failure { inputs: inputs.into(), expected: expected.into(), got: got.into() }
}

macro_rules! ensure {
    ($cond:expr, $inputs:expr, $expected:expr, $got:expr) => {
        if !$cond {
            return Ok(Outcome::Fail(failure($inputs, $expected, $got)));
        }
    };
}

macro_rules! ensure_eq {
    ($left:expr, $right:expr, $inputs:expr) => {{
        let (l, r) = (&$left, &$right);
        if l != r {
            return Ok(Outcome::Fail(failure($inputs, format!("{r}"), format!("{l}"))));
        }
    }};
}

fn check_example(failures: &mut Vec<Failure>, ok: bool, what: &str, expected: &str, got: impl FnOnce() -> String) {
    if !ok {
        failures.push(failure(format!("example: {what}"), expected, got()));
    }
}

pub struct Run {
    pub seed: u64,
    pub samples: usize,
    pub height: u32,
}

impl Run {
    fn rng(&self, n: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(n as u64);
        rng
    }

    fn sample_seed(&self, n: usize) -> u64 {
        self.seed.wrapping_add((n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Runs one suite. `master_seed` is recorded in the report; the suite
/// itself runs with the derived seed.
pub fn run_suite<F: Scalar>(
    ctx: &AlgebraContext<F>,
    id: &str,
    master_seed: u64,
    samples: Option<usize>,
    height: u32,
) -> Result<VerificationReport, CliError> {
    let theorem = lookup(id)?;
    if theorem.galois_only && !ctx.is_galois() {
        return Err(CliError::ContextUnsupported {
            theorem: id.to_string(),
            reason: "requires K/Z to be Galois".into(),
        });
    }
    let run = Run { seed: derive_seed(master_seed, id), samples: samples.unwrap_or(theorem.default_samples), height };
    let start = Instant::now();
    let (mut failures, outcomes) = dispatch(ctx, id, &run)?;
    let mut samples_run = 0;
    let mut skipped = 0;
    for o in outcomes {
        match o {
            Ok(Outcome::Pass) => samples_run += 1,
            Ok(Outcome::Skip) => skipped += 1,
            Ok(Outcome::Fail(f)) | Err(f) => {
                samples_run += 1;
                failures.push(f);
            }
        }
    }
    Ok(VerificationReport {
        schema_version: SCHEMA_VERSION.into(),
        theorem_id: id.to_string(),
        context: ctx.descriptor(),
        seed: master_seed,
        samples_requested: run.samples,
        samples_run,
        skipped,
        passed: failures.is_empty(),
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

type Outcomes = (Vec<Failure>, Vec<Sample>);

fn samples<F: Scalar>(
    ctx: &AlgebraContext<F>,
    run: &Run,
    f: impl Fn(&AlgebraContext<F>, &Run, usize, &mut ChaCha8Rng) -> Sample,
) -> Vec<Sample> {
    (0..run.samples).map(|n| f(ctx, run, n, &mut run.rng(n))).collect()
}

fn dispatch<F: Scalar>(ctx: &AlgebraContext<F>, id: &str, run: &Run) -> Result<Outcomes, CliError> {
    Ok(match id {
        KERNEL => (vec![], samples(ctx, run, kernel_sample)),
        "T-SPREAD-PARTITION" => (vec![], samples(ctx, run, spread_partition_sample)),
        "T-KLEIN-BAER" => klein_baer(ctx, run),
        "T-CHAIN-SPHERE" => chain_sphere(ctx, run),
        "T-TANGENT-KLEIN" => (tangent_examples(ctx), samples(ctx, run, tangent_sample)),
        "T-ORTHO-KLEIN" => (ortho_examples(ctx), samples(ctx, run, ortho_sample)),
        "T-AFFINITY" => (affinity_examples(ctx), samples(ctx, run, affinity_sample)),
        "L-UNIQUE-CHAIN" => (vec![], samples(ctx, run, unique_chain_sample)),
        "L-BAER-SUBPLANE" => (vec![], samples(ctx, run, baer_subplane_sample)),
        "T-DEG-BAER" => (vec![], samples(ctx, run, deg_baer_sample)),
        "T-ORBIT" => (vec![], samples(ctx, run, orbit_sample)),
        "T-CIRCLE-EQ" => (vec![], samples(ctx, run, circle_eq_sample)),
        "T-HERMITIAN" => (vec![], samples(ctx, run, hermitian_sample)),
        "T-PARALLEL-TANGENT" => (vec![], samples(ctx, run, parallel_tangent_sample)),
        "T-MIDLINE" => (vec![], samples(ctx, run, midline_sample)),
        "T-BETA" => (beta_examples(ctx), samples(ctx, run, beta_sample)),
        "T-KLEIN-CLASSIFY" => (vec![], samples(ctx, run, klein_classify_sample)),
        other => return Err(CliError::UnknownTheorem(other.to_string())),
    })
}

// ---- shared helpers

fn random_aff_line<F: Scalar, R: Rng>(ctx: &AlgebraContext<F>, rng: &mut R, h: u32) -> AffLine<F> {
    let dir = ctx.random_nonzero_l(rng, h);
    ctx.aff_line(&dir, &ctx.random_l(rng, h)).expect("nonzero direction")
}

fn random_affinity<F: Scalar, R: Rng>(ctx: &AlgebraContext<F>, rng: &mut R, h: u32) -> AffMap<F> {
    let m1 = ctx.random_nonzero_l(rng, h);
    let k0 = LElement::from_k(ctx.random_nonzero_k(rng, h));
    let m0 = if ctx.is_galois() && rng.random_bool(0.5) { ctx.q_mul(&k0, &LElement::i()) } else { k0 };
    ctx.aff_map(m1, m0, ctx.random_l(rng, h), LElement::one(), false).expect("valid map")
}

fn kl<F: Scalar>(k: &KElement<F>) -> LElement<F> {
    LElement::from_k(k.clone())
}

fn random_k_pair<F: Scalar, R: Rng>(ctx: &AlgebraContext<F>, rng: &mut R, h: u32) -> (KElement<F>, KElement<F>) {
    (ctx.random_k(rng, h), ctx.random_k(rng, h))
}

/// Multiplication in the Z-basis {1, a, i, ia} by rewriting words in the
/// generators.
struct ZBasisOracle<'a, F> {
    ctx: &'a AlgebraContext<F>,
}

impl<F: Scalar> ZBasisOracle<'_, F> {
    fn rewrite(&self, w: &[u8]) -> Option<Vec<(Vec<u8>, F)>> {
        let c = self.ctx;
        for p in 0..w.len().saturating_sub(1) {
            let repl: Vec<(&[u8], F)> = match &w[p..p + 2] {
                b"aa" => vec![(b"a", c.lambda1().neg()), (b"", c.mu1().neg())],
                b"ii" => vec![(b"i", c.lambda2().neg()), (b"", c.mu2().neg())],
                // a*i = i*conj(a) = -lambda1*i - i*a
                b"ai" if c.is_galois() => vec![(b"i", c.lambda1().neg()), (b"ia", F::one().neg())],
                // a*i = i*a + a^D with a^D = a
                b"ai" => vec![(b"ia", F::one()), (b"a", F::one())],
                _ => continue,
            };
            return Some(repl.into_iter().map(|(mid, k)| ([&w[..p], mid, &w[p + 2..]].concat(), k)).collect());
        }
        None
    }

    fn mul(&self, x: &LElement<F>, y: &LElement<F>) -> LElement<F> {
        let words = |x: &LElement<F>| -> Vec<(Vec<u8>, F)> {
            vec![
                (b"".to_vec(), x.u.xi.clone()),
                (b"a".to_vec(), x.u.eta.clone()),
                (b"i".to_vec(), x.v.xi.clone()),
                (b"ia".to_vec(), x.v.eta.clone()),
            ]
        };
        let mut todo = Vec::new();
        for (wx, cx) in words(x) {
            for (wy, cy) in words(y) {
                todo.push(([wx.as_slice(), &wy].concat(), cx.mul(&cy)));
            }
        }
        let mut out: BTreeMap<Vec<u8>, F> = BTreeMap::new();
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

// ---- algebra kernel

fn kernel_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, _n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let h = run.height;
    let (x, y) = (ctx.random_l(rng, h), ctx.random_l(rng, h));
    let inputs = format!("x = {x}, y = {y}");
    let xy = ctx.q_mul(&x, &y);
    ensure_eq!(ctx.q_norm(&xy), ctx.k_mul(&ctx.q_norm(&x), &ctx.q_norm(&y)), format!("N(xy); {inputs}"));
    ensure!(ctx.q_norm(&x).in_z(), format!("N(x) in Z; {inputs}"), "an element of Z", ctx.q_norm(&x).to_string());
    let a = |z: &LElement<F>| ctx.q_antiauto(z);
    ensure_eq!(a(&xy), ctx.q_mul(&a(&y), &a(&x)), format!("A(xy) = A(y)A(x); {inputs}"));
    ensure_eq!(a(&a(&x)), x, format!("A(A(x)) = x; {inputs}"));
    ensure_eq!(a(&x.add(&y)), a(&x).add(&a(&y)), format!("A(x+y); {inputs}"));
    ensure!(a(&kl(&x.u)).in_k(), format!("A(K) = K; {inputs}"), "an element of K", a(&kl(&x.u)).to_string());
    let k = kl(&x.u);
    let i = LElement::i();
    let rhs = if ctx.is_galois() {
        ctx.q_mul(&i, &kl(&ctx.k_conj(&x.u)?))
    } else {
        ctx.q_mul(&i, &k).add(&kl(&ctx.k_derive(&x.u)?))
    };
    ensure_eq!(ctx.q_mul(&k, &i), rhs, format!("k i commutation, k = {k}"));
    let oracle = ZBasisOracle { ctx };
    ensure_eq!(xy, oracle.mul(&x, &y), format!("q_mul vs Z-basis table; {inputs}"));
    if !x.is_zero() {
        ensure_eq!(ctx.q_mul(&x, &ctx.q_inv(&x)?), LElement::one(), format!("x x^-1; {inputs}"));
    }
    Ok(Outcome::Pass)
}

// ---- spread

fn spread_partition_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, _n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let p = ctx.random_point(rng, run.height);
    let s = ctx.spread_line(&p);
    let inputs = format!("p = {p}");
    ensure!(ctx.point_on_line(&p, &s) && ctx.is_spread_line(&s), inputs.clone(), "p on a spread line", s.to_string());
    let k = ctx.random_k(rng, run.height);
    let q = ctx.point(linalg::axpy(ctx, &s.rows()[1], &k, &s.rows()[0]))?;
    ensure_eq!(ctx.spread_line(&q), s, format!("{inputs}, q = {q} on the same spread line"));
    let other = ctx.spread_line(&ctx.random_point(rng, run.height));
    if other != s {
        ensure!(
            !ctx.lines_meet(&s, &other),
            format!("{inputs}, other = {other}"),
            "disjoint spread lines",
            "they meet"
        );
    }
    Ok(Outcome::Pass)
}

fn unique_chain_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let c0 = ctx.random_chain(rng, run.height);
    let c1 = ctx.random_chain(rng, run.height);
    if ctx.chain_eq(&c0, &c1) {
        return Ok(Outcome::Skip);
    }
    let members = ctx.chain_sample(&c0, 8, run.sample_seed(n), run.height);
    let mut finite = members.iter().filter(|s| **s != ctx.infinity_line());
    let found = finite.any(|s| !ctx.chain_contains(&c1, s).unwrap_or(true));
    ensure!(
        found,
        format!("c0 = [{}], c1 = [{}]", c0.transversal(), c1.transversal()),
        "a member of c0 not in c1",
        "all sampled members shared"
    );
    Ok(Outcome::Pass)
}

fn parallel_tangent_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let l0 = random_aff_line(ctx, rng, run.height);
    let l1 = if n.is_multiple_of(2) {
        ctx.aff_line(l0.direction(), &ctx.random_l(rng, run.height))?
    } else {
        random_aff_line(ctx, rng, run.height)
    };
    if l0 == l1 {
        return Ok(Outcome::Skip);
    }
    let tangent = ctx.chains_tangent_at(&ctx.line_chain(&l0), &ctx.line_chain(&l1), &ctx.infinity_line())?;
    ensure_eq!(tangent, l0.direction() == l1.direction(), format!("l0 = {l0}, l1 = {l1}"));
    Ok(Outcome::Pass)
}

// ---- Klein model

fn klein_baer<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run) -> Outcomes {
    let frame = match ctx.compute_pi_z(run.seed) {
        Ok(f) => f,
        Err(e) => return (vec![failure("compute_pi_z", "a frame", e.to_string())], vec![]),
    };
    let outcomes = samples(ctx, run, |ctx, run, _n, rng| {
        let x = ctx.random_l(rng, run.height);
        let s = ctx.rho_inv(&x);
        let v = ctx.plucker(&s);
        ensure!(ctx.in_pi_z(&frame, v.coords()), format!("spread line (1, {x})L"), "image in Pi_Z", "not in Pi_Z");
        if ctx.is_galois() {
            let z: Vec<F> = (0..6).map(|_| F::random(rng, run.height)).collect();
            let w = ctx.v_z_vector(&frame, &z);
            if linalg::is_zero_vec(ctx, &w) {
                return Ok(Outcome::Skip);
            }
            let img = ctx.baer_involution(&w)?;
            ensure!(
                linalg::rank(ctx, &[w, img]) == 1,
                format!("Pi_Z point with frame coordinates {}", join(&z)),
                "fixed by the Baer involution",
                "moved"
            );
        }
        Ok(Outcome::Pass)
    });
    (vec![], outcomes)
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn chain_sphere<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run) -> Outcomes {
    let frame = match ctx.compute_pi_z(run.seed) {
        Ok(f) => f,
        Err(e) => return (vec![failure("compute_pi_z", "a frame", e.to_string())], vec![]),
    };
    let outcomes = samples(ctx, run, |ctx, run, n, rng| {
        let c = ctx.random_chain(rng, run.height);
        let inputs = format!("chain [{}]", c.transversal());
        let x = ctx.chain_space(&c, run.sample_seed(n))?;
        let chk = ctx.check_sphere_conditions(&frame, &c, &x, run.sample_seed(n), 20);
        ensure_eq!(chk.z_dim, 4, format!("dim over Z of X ∩ V_Z; {inputs}"));
        ensure_eq!(chk.members_in_x, chk.members_checked, format!("members in X ∩ Pi_Z; {inputs}"));
        ensure_eq!(
            chk.points_from_members,
            chk.points_checked,
            format!("points of X ∩ Pi_Z ∩ Q from members; {inputs}")
        );
        ensure_eq!(chk.secants_off_quadric, chk.secants_checked, format!("secants leaving Q; {inputs}"));
        let line = match chk.line {
            Ok(l) => l,
            Err(e) => {
                return Ok(Outcome::Fail(failure(
                    format!("line on X ∩ Q; {inputs}"),
                    "a K-rational line",
                    e.to_string(),
                )))
            }
        };
        let on_q = line.iter().all(|r| ctx.klein_quadric(r).is_zero() && linalg::in_span(ctx, x.rows(), r))
            && ctx.klein_quadric(&linalg::axpy(ctx, &line[0], &KElement::one(), &line[1])).is_zero();
        ensure!(on_q, format!("line on X ∩ Q; {inputs}"), "a line inside X ∩ Q", "line leaves X ∩ Q");
        Ok(Outcome::Pass)
    });
    (vec![], outcomes)
}

fn tangent_examples<F: Scalar>(ctx: &AlgebraContext<F>) -> Vec<Failure> {
    let mut out = Vec::new();
    let g0 = ctx.gamma0_chain();
    let ik = ctx.line_chain(&ctx.aff_line(&LElement::i(), &LElement::zero()).unwrap());
    let p = ctx.rho_inv(&LElement::zero());
    let spread = ctx.chains_tangent_at(&g0, &ik, &p);
    let klein = ctx.tangent_criterion(&g0, &ik, &p, 1);
    check_example(
        &mut out,
        spread == Ok(true) && klein == Ok(true),
        "Γ₀ and iK at 0",
        "tangent in both models",
        || format!("spread {spread:?}, klein {klein:?}"),
    );
    out
}

/// A second chain through the member `p` of `c0`, tangent to it when `tangent`.
fn chain_through<F: Scalar, R: Rng>(
    ctx: &AlgebraContext<F>,
    c0: &Chain<F>,
    p: &LineP3K<F>,
    tangent: bool,
    rng: &mut R,
    h: u32,
) -> Option<Chain<F>> {
    let x0 = ctx.line_meet(c0.transversal(), p).ok()??;
    let y = if tangent {
        let plane = linalg::join(ctx, c0.transversal().rows(), p.rows());
        let mut acc = vec![KElement::zero(); 4];
        for r in &plane {
            acc = linalg::axpy(ctx, r, &ctx.random_k(rng, h), &acc);
        }
        ctx.point(acc).ok()?
    } else {
        ctx.random_point(rng, h)
    };
    let t1 = ctx.line_through(&x0, &y).ok()?;
    ctx.chain_from_transversal(&t1).ok()
}

fn tangent_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let c0 = ctx.random_chain(rng, run.height);
    let p = ctx.chain_sample(&c0, 1, run.sample_seed(n), run.height).remove(0);
    let Some(c1) = chain_through(ctx, &c0, &p, n.is_multiple_of(2), rng, run.height) else {
        return Ok(Outcome::Skip);
    };
    if ctx.chain_eq(&c0, &c1) {
        return Ok(Outcome::Skip);
    }
    let spread = ctx.chains_tangent_at(&c0, &c1, &p)?;
    let klein = ctx.tangent_criterion(&c0, &c1, &p, run.sample_seed(n))?;
    ensure_eq!(klein, spread, format!("c0 = [{}], c1 = [{}], p = [{}]", c0.transversal(), c1.transversal(), p));
    Ok(Outcome::Pass)
}

fn ortho_examples<F: Scalar>(ctx: &AlgebraContext<F>) -> Vec<Failure> {
    let mut out = Vec::new();
    let z = LElement::zero();
    let k = ctx.aff_line(&LElement::one(), &z).unwrap();
    let ik = ctx.aff_line(&LElement::i(), &z).unwrap();
    let (kc, ikc) = (ctx.line_chain(&k), ctx.line_chain(&ik));
    let spread = ctx.chains_orthogonal(&kc, &ikc);
    let klein = ctx.orthogonal_criterion(&kc, &ikc, 1);
    let lines = ctx.lines_orthogonal(&k, &ik);
    check_example(
        &mut out,
        spread == Ok(true) && klein == Ok(true) && lines == Ok(true),
        "K ⊥ iK",
        "orthogonal in every model",
        || format!("spread {spread:?}, klein {klein:?}, lines {lines:?}"),
    );
    let g0 = ctx.gamma0_chain();
    let mid = ctx.circle_of_chain(&g0).and_then(|g| ctx.midline(&g));
    check_example(&mut out, mid.as_ref() == Ok(&k), "midline of Γ₀", "K", || format!("{mid:?}"));
    let spread = ctx.chains_orthogonal(&kc, &g0);
    let klein = ctx.orthogonal_criterion(&kc, &g0, 1);
    check_example(&mut out, spread == Ok(true) && klein == Ok(true), "K ⊥ Γ₀", "orthogonal", || {
        format!("spread {spread:?}, klein {klein:?}")
    });
    out
}

fn ortho_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let c0 = ctx.random_chain(rng, run.height);
    let c1 = if n.is_multiple_of(2) {
        // transversal through a point of t0 and a point of t0^iota
        let ts = ctx.chain_transversals(&c0);
        let pick = |t: &LineP3K<F>, rng: &mut ChaCha8Rng| {
            ctx.point(linalg::axpy(ctx, &t.rows()[1], &ctx.random_k(rng, run.height), &t.rows()[0]))
        };
        let (x, y) = (pick(&ts[0], rng)?, pick(&ts[1], rng)?);
        match ctx.line_through(&x, &y).and_then(|t| ctx.chain_from_transversal(&t)) {
            Ok(c) => c,
            Err(_) => return Ok(Outcome::Skip),
        }
    } else {
        ctx.random_chain(rng, run.height)
    };
    let spread = ctx.chains_orthogonal(&c0, &c1)?;
    let klein = ctx.orthogonal_criterion(&c0, &c1, run.sample_seed(n))?;
    let inputs = format!("c0 = [{}], c1 = [{}]", c0.transversal(), c1.transversal());
    ensure_eq!(klein, spread, inputs.clone());
    ensure_eq!(ctx.chains_orthogonal(&c1, &c0)?, spread, format!("symmetry; {inputs}"));
    Ok(Outcome::Pass)
}

fn klein_classify_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let h = run.height.min(6);
    let c = match n % 4 {
        0 => ctx.line_chain(&random_aff_line(ctx, rng, h)),
        1 => {
            let d = ctx.deg_circle(&ctx.random_l_circ(rng, h))?;
            ctx.map_chain(&random_affinity(ctx, rng, h), d.chain())?
        }
        2 => ctx.random_nondegenerate_circle(rng, h).chain().clone(),
        _ => ctx.random_chain(rng, h),
    };
    let x = ctx.chain_space(&c, run.sample_seed(n))?;
    let inputs = format!("chain [{}]", c.transversal());
    let klein = match ctx.classify_via_klein(&x) {
        Ok(k) => k,
        Err(e) => return Ok(Outcome::Fail(failure(inputs, ctx.circle_classify(&c).kind().to_string(), e.to_string()))),
    };
    ensure_eq!(klein, ctx.circle_classify(&c).kind(), inputs);
    Ok(Outcome::Pass)
}

// ---- circle plane

fn affinity_examples<F: Scalar>(ctx: &AlgebraContext<F>) -> Vec<Failure> {
    let mut out = Vec::new();
    let one = LElement::<F>::one();
    let z = LElement::zero();
    let cases = [
        ("(1, i, 0, id)", LElement::i(), false, ctx.is_galois()),
        ("(1, 1+i, 0, id)", one.add(&LElement::i()), false, false),
        ("(1, 1, 0, anti)", one.clone(), true, false),
    ];
    for (name, m0, anti, want) in cases {
        let got = ctx.aff_map(one.clone(), m0, z.clone(), one.clone(), anti).map(|f| ctx.is_affinity(&f));
        check_example(&mut out, got == Ok(want), &format!("is_affinity{name}"), &want.to_string(), || {
            format!("{got:?}")
        });
    }
    out
}

/// Whether `f` maps each sampled line onto a line, checked on five points.
fn maps_lines_to_lines<F: Scalar, R: Rng>(ctx: &AlgebraContext<F>, f: &AffMap<F>, rng: &mut R, h: u32) -> bool {
    let mut lines = vec![
        ctx.aff_line(&LElement::one(), &LElement::zero()).unwrap(),
        ctx.aff_line(&LElement::i(), &LElement::zero()).unwrap(),
    ];
    lines.extend((0..4).map(|_| random_aff_line(ctx, rng, h)));
    lines.iter().all(|l| {
        let pts: Vec<_> = (0..5).map(|_| ctx.apply_map(f, &ctx.aff_line_point(l, &ctx.random_k(rng, h)))).collect();
        pts.windows(3).all(|w| ctx.collinear(&w[0], &w[1], &w[2]))
    })
}

fn affinity_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let h = run.height.min(4);
    let m1 = ctx.random_nonzero_l(rng, h);
    let m = ctx.random_l(rng, h);
    let (m0, anti) = match n % 4 {
        0 => (kl(&ctx.random_nonzero_k(rng, h)), false),
        1 => (ctx.random_nonzero_l(rng, h), false),
        2 => (ctx.q_mul(&kl(&ctx.random_nonzero_k(rng, h)), &LElement::i()), false),
        _ => (ctx.random_nonzero_l(rng, h), true),
    };
    let f = ctx.aff_map(m1, m0, m, LElement::one(), anti)?;
    let inputs = format!("m1 = {}, m0 = {}, m = {}, anti = {}", f.m1, f.m0, f.m, f.anti);
    let sampled = maps_lines_to_lines(ctx, &f, rng, h);
    ensure_eq!(sampled, ctx.is_affinity(&f), format!("lines to lines; {inputs}"));
    if ctx.is_affinity(&f) {
        let c = ctx.random_chain(rng, h);
        let image = ctx.map_chain(&f, &c)?;
        let ci = format!("{inputs}; chain [{}]", c.transversal());
        ensure_eq!(ctx.circle_classify(&image).kind(), ctx.circle_classify(&c).kind(), format!("kind; {ci}"));
        for x in ctx.trace_sample(&c, 4, run.sample_seed(n), h) {
            let y = ctx.apply_map(&f, &x);
            ensure!(ctx.trace_contains(&image, &y), format!("{ci}; x = {x}"), "f(x) on the image chain", y.to_string());
        }
        if ctx.is_galois() {
            let l0 = random_aff_line(ctx, rng, h);
            let l1 = ctx.aff_line(&ctx.q_mul(l0.direction(), &LElement::i()), &ctx.random_l(rng, h))?;
            let img = |l: &AffLine<F>| {
                let p = ctx.apply_map(&f, l.offset());
                ctx.aff_line_through(&p, &ctx.apply_map(&f, &l.offset().add(l.direction())))
            };
            let (i0, i1) = (img(&l0)?, img(&l1)?);
            ensure!(
                ctx.lines_orthogonal(&i0, &i1)?,
                format!("{inputs}; l0 = {l0}, l1 = {l1}"),
                "orthogonal images",
                format!("{i0}, {i1}")
            );
        }
    }
    Ok(Outcome::Pass)
}

fn baer_subplane_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, _n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let h = run.height.min(5);
    let c = ctx.random_l_circ(rng, h);
    let d = ctx.deg_circle(&c)?;
    let p = ctx.baer_param(&d)?;
    let inputs = format!("c = {c}, u = {}, v = {}", p.u, p.v);
    // independence over K: basis[1] is not in basis[0]*K
    let ratio = ctx.q_mul(&ctx.q_inv(&p.basis[0])?, &p.basis[1]);
    ensure!(!ratio.in_k(), format!("basis {}, {}; {inputs}", p.basis[0], p.basis[1]), "K-independent", "dependent");
    for _ in 0..50 {
        let (k1, k2) = random_k_pair(ctx, rng, h);
        let x1 = ctx.baer_param_point(&p, &k1);
        let via_basis = ctx
            .q_scale(&p.basis[0], &KElement::from_z(k1.xi.clone()))
            .add(&ctx.q_scale(&p.basis[1], &KElement::from_z(k1.eta.clone())));
        ensure_eq!(via_basis, x1, format!("k = {k1}; {inputs}"));
        let x2 = ctx.baer_param_point(&p, &k2);
        let z = KElement::from_z(F::random(rng, h));
        let comb = ctx.q_scale(&x1.sub(&x2), &z).add(&x2);
        let kc = ctx.k_mul(&k1.sub(&k2), &z).add(&k2);
        ensure_eq!(
            comb,
            ctx.baer_param_point(&p, &kc),
            format!("affine closure, k1 = {k1}, k2 = {k2}, z = {z}; {inputs}")
        );
    }
    Ok(Outcome::Pass)
}

fn deg_baer_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, _n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let h = run.height.min(5);
    let c = ctx.random_l_circ(rng, h);
    let d = ctx.deg_circle(&c)?;
    let inputs = format!("c = {c}");
    ensure_eq!(ctx.circle_classify(d.chain()).kind(), CircleKind::Degenerate, inputs.clone());
    let dirs = ctx.absolute_directions(&d)?.len();
    ensure_eq!(dirs, if ctx.is_galois() { 2 } else { 1 }, format!("absolute directions; {inputs}"));
    let p = ctx.baer_param(&d)?;
    let ci = ctx.q_inv(&c)?;
    for _ in 0..50 {
        let k = ctx.random_k(rng, h);
        let x = ctx.baer_param_point(&p, &k);
        let conj = ctx.q_mul(&ctx.q_mul(&c, &kl(&k)), &ci);
        ensure_eq!(x, conj, format!("c k c^-1, k = {k}; {inputs}"));
        ensure!(ctx.deg_circle_contains(&d, &x)?, format!("x = {x}; {inputs}"), "x in Δ", "not in Δ");
        ensure!(ctx.trace_contains(d.chain(), &x), format!("x = {x}; {inputs}"), "x on the chain", "off the chain");
        let y = ctx.random_l(rng, h);
        ensure_eq!(
            ctx.deg_circle_contains(&d, &y)?,
            ctx.trace_contains(d.chain(), &y),
            format!("membership tests agree, y = {y}; {inputs}")
        );
    }
    Ok(Outcome::Pass)
}

fn orbit_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let g = ctx.random_nondegenerate_circle(rng, run.height.min(5));
    let inputs = format!("circle {g}");
    let alpha = ctx.normalize_to_gamma0(&g)?;
    let ai = format!("{inputs}; α = x -> ({}) x + ({})", alpha.m1, alpha.m);
    ensure!(ctx.is_affinity(&alpha), ai.clone(), "an affinity", "not an affinity");
    let image = ctx.map_chain(&alpha, g.chain())?;
    ensure!(
        ctx.chain_eq(&image, &ctx.gamma0_chain()),
        ai.clone(),
        "image chain Γ₀",
        format!("[{}]", image.transversal())
    );
    for x in ctx.trace_sample(g.chain(), 20, run.sample_seed(n), 5) {
        let y = ctx.apply_map(&alpha, &x);
        ensure!(ctx.gamma0_contains(&y), format!("{ai}; x = {x}"), "α(x) on Γ₀", y.to_string());
    }
    Ok(Outcome::Pass)
}

fn circle_eq_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, _n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let (k0, k1) = random_k_pair(ctx, rng, run.height);
    if k0.is_zero() && k1.is_zero() {
        return Ok(Outcome::Skip);
    }
    let x = ctx.gamma0_point(&k0, &k1)?;
    let inputs = format!("k0 = {k0}, k1 = {k1}");
    ensure!(ctx.gamma0_contains(&x), inputs.clone(), "u = N(u+iv)", x.to_string());
    ensure!(ctx.trace_contains(&ctx.gamma0_chain(), &x), inputs.clone(), "on the chain of Γ₀", x.to_string());
    let (p0, p1) = ctx.gamma0_params(&x)?;
    ensure!(
        ctx.k_mul(&p0, &k1) == ctx.k_mul(&p1, &k0),
        inputs,
        "parameters proportional to (k0, k1)",
        format!("({p0}, {p1})")
    );
    // reverse: a solution of the equation, round-tripped through its parameters
    let y = loop {
        if let Some(y) = ctx.gamma0_chord_point(&ctx.random_l(rng, run.height)) {
            break y;
        }
    };
    ensure!(ctx.gamma0_contains(&y), format!("y = {y}"), "u = N(u+iv)", "not a solution");
    let (q0, q1) = ctx.gamma0_params(&y)?;
    ensure_eq!(ctx.gamma0_point(&q0, &q1)?, y, format!("y = {y}, params ({q0}, {q1})"));
    Ok(Outcome::Pass)
}

fn hermitian_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let es = ctx.e_sample(2, run.sample_seed(n), run.height)?;
    let (h, g) = (ctx.hermitian(es[0].clone())?, ctx.hermitian(es[1].clone())?);
    let inputs = format!("e = {}, f = {}", es[0], es[1]);
    let hh = run.height.min(5);
    for _ in 0..50 {
        let (k0, k1) = random_k_pair(ctx, rng, hh);
        let Ok(x) = ctx.gamma0_point(&k0, &k1) else { continue };
        ensure!(
            ctx.hermitian_contains(&h, &x)? && ctx.hermitian_contains(&g, &x)?,
            format!("x = {x}; {inputs}"),
            "Γ₀ point in both varieties",
            "missing"
        );
    }
    let mut found = 0;
    while found < 50 {
        let Some(x) = ctx.hermitian_pair_point(&h, &g, &ctx.random_l(rng, hh))? else { continue };
        found += 1;
        let both = ctx.hermitian_contains(&h, &x)? && ctx.hermitian_contains(&g, &x)?;
        ensure!(both, format!("x = {x}; {inputs}"), "constructed point in both varieties", "not in both");
        ensure!(ctx.gamma0_contains(&x), format!("x = {x}; {inputs}"), "on Γ₀", "off Γ₀");
    }
    // a point of H_e off Γ₀ on a chord through 0 in K
    let mut witness = None;
    for eta in 1..=3 {
        let w = LElement::from_k(KElement::new(F::one(), F::from_i64(eta)));
        let t = ctx.k_mul(h.e(), &w.u);
        let t = t.add(&ctx.k_conj(&t)?);
        let lam = t.xi.div(&ctx.q_norm(&w).xi).unwrap_or_else(F::zero);
        if !lam.is_zero() {
            witness = Some(ctx.q_scale(&w, &KElement::from_z(lam)));
            break;
        }
    }
    let Some(x) = witness else {
        return Ok(Outcome::Fail(failure(inputs, "a point of H_e off Γ₀", "no chord found")));
    };
    ensure!(
        ctx.hermitian_contains(&h, &x)? && !ctx.gamma0_contains(&x),
        format!("x = {x}; {inputs}"),
        "a point of H_e off Γ₀",
        "on Γ₀ or off H_e"
    );
    Ok(Outcome::Pass)
}

fn midline_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, _n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let g = ctx.random_nondegenerate_circle(rng, run.height.min(5));
    let inputs = format!("circle {g}");
    let m = ctx.midline(&g)?;
    ensure!(
        ctx.chains_orthogonal(&ctx.line_chain(&m), g.chain())?,
        format!("{inputs}; midline {m}"),
        "orthogonal",
        "not orthogonal"
    );
    let regs = ctx.regular_points(&g)?;
    for p in &regs {
        let t = ctx.tangent_line(&g, p)?;
        ensure!(ctx.lines_orthogonal(&m, &t)?, format!("{inputs}; tangent {t}"), "midline ⊥ tangent", "not orthogonal");
        let tangent = ctx.chains_tangent_at(&ctx.line_chain(&t), g.chain(), &ctx.rho_inv(p))?;
        ensure!(tangent, format!("{inputs}; tangent {t} at {p}"), "tangent chains", "not tangent");
    }
    for _ in 0..10 {
        let other = ctx.aff_line(&ctx.random_nonzero_l(rng, 4), &regs[0])?;
        if other == m {
            continue;
        }
        let orth = ctx.chains_orthogonal(&ctx.line_chain(&other), g.chain())?;
        ensure!(!orth, format!("{inputs}; line {other}"), "not orthogonal", "orthogonal");
    }
    Ok(Outcome::Pass)
}

fn unit<F: Scalar>(j: usize) -> Vec<KElement<F>> {
    let mut v = vec![KElement::zero(); 4];
    v[j] = KElement::one();
    v
}

fn witness_plane<F: Scalar>() -> Vec<Vec<KElement<F>>> {
    let mut diag = unit::<F>(0);
    diag[1] = KElement::one();
    vec![diag, unit(2), unit(3)]
}

fn beta_examples<F: Scalar>(ctx: &AlgebraContext<F>) -> Vec<Failure> {
    let mut out = Vec::new();
    let r = ctx.beta_collinearity_witness(&ctx.affine_plane(), 20, 1);
    check_example(&mut out, r == Ok(None), "plane x1 = 0", "an affinity", || format!("{r:?}"));
    if ctx.is_galois() {
        let r = ctx.beta_collinearity_witness(&[unit(1), unit(2), unit(3)], 20, 1);
        check_example(&mut out, r == Ok(None), "plane x0 = 0", "an affinity", || format!("{r:?}"));
    }
    let r = ctx.beta_collinearity_witness(&witness_plane(), 20, 1);
    check_example(&mut out, matches!(r, Ok(Some(_))), "plane x0 = x1", "a non-collinear image triple", || {
        format!("{r:?}")
    });
    out
}

fn beta_sample<F: Scalar>(ctx: &AlgebraContext<F>, run: &Run, _n: usize, rng: &mut ChaCha8Rng) -> Sample {
    let x = ctx.random_l(rng, run.height);
    let inputs = format!("x = {x}");
    let p = ctx.beta_map(&ctx.affine_plane(), &x)?;
    ensure_eq!(p, ctx.point_from_l2(&LElement::one(), &x)?, inputs.clone());
    let plane = witness_plane::<F>();
    let q = ctx.beta_map(&plane, &x)?;
    ensure!(
        ctx.point_on_line(&q, &ctx.rho_inv(&x)) && linalg::in_span(ctx, &plane, q.coords()),
        inputs.clone(),
        "a point of the spread line through x in the plane",
        q.to_string()
    );
    ensure_eq!(ctx.rho(&ctx.spread_line(&q))?, x, format!("inverse; {inputs}"));
    if ctx.is_galois() {
        let l = random_aff_line(ctx, rng, run.height);
        let pts: Vec<Vec<KElement<F>>> = (0..3)
            .map(|_| {
                let y = ctx.aff_line_point(&l, &ctx.random_k(rng, run.height));
                ctx.beta_map(&[unit(1), unit(2), unit(3)], &y).map(|p| p.coords().to_vec())
            })
            .collect::<Result<_, _>>()?;
        ensure!(linalg::rank(ctx, &pts) <= 2, format!("line {l}"), "collinear images in x0 = 0", "not collinear");
    }
    Ok(Outcome::Pass)
}
