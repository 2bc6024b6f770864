//! Seeded sample generation and the verification suites.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chain::{chain_injective_envelope, chain_projective_cover, chain_pullback, chain_pushout, ChainMap, ChainObject};
use crate::duality::{normalization_holds, represent, verify_representing};
use crate::error::{FrobError, Result};
use crate::functors::{
    delta, delta_map, full_turn_inner, full_turn_outer, gamma, gamma_map, polygon_edges, polygon_tags, predicted_theta_powers,
    sod_triangle, theta, theta_pow, theta_sigma_witness, mutate_left, mutate_right, AdjointPair, Interval, Mutation, Sod,
    SubcategoryTag,
};
use crate::linalg::{is_prime, Matrix};
use crate::module::{cokernel, noether_complete, LambdaModule, NoetherGrid, ShortExactSeq};
use crate::stable::{are_stably_isomorphic, chain_hom_basis, cone};

/// Counter-based stream: the same (seed, label, index) always yields the
/// same generator, independent of evaluation order.
pub fn trial_rng(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    // FNV-1a over the label keeps streams of different checks apart
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    rng.set_stream(index);
    rng
}

fn random_partition<R: Rng>(n: usize, dim: usize, rng: &mut R) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = dim;
    while left > 0 {
        let d = rng.gen_range(1..=n.min(left));
        parts.push(d);
        left -= d;
    }
    parts
}

fn random_invertible<R: Rng>(d: usize, p: u32, rng: &mut R) -> Matrix {
    loop {
        let data = (0..d * d).map(|_| rng.gen_range(0..p)).collect();
        let m = Matrix::from_flat(d, d, p, data);
        if m.rank() == d {
            return m;
        }
    }
}

/// A module of dimension at most `max_dim`, in a random basis.
pub fn random_module<R: Rng>(n: usize, p: u32, max_dim: usize, rng: &mut R) -> LambdaModule {
    let dim = rng.gen_range(0..=max_dim);
    let m = LambdaModule::from_partition(n, &random_partition(n, dim, rng), p);
    if dim == 0 {
        return m;
    }
    let g = random_invertible(dim, p, rng);
    let ginv = g.inverse().expect("invertible");
    LambdaModule::new(n, g.mul(m.action()).mul(&ginv)).expect("conjugate of a module")
}

/// The submodule generated by the columns of `gens`, with its inclusion.
pub fn generated_submodule(m: &LambdaModule, gens: &Matrix) -> (LambdaModule, Matrix) {
    let p = m.p();
    let mut cols = gens.clone();
    let mut cur = gens.clone();
    for _ in 1..m.n() {
        cur = m.action().mul(&cur);
        cols = cols.hstack(&cur);
    }
    let basis = cols.image_basis();
    if basis.cols() == 0 {
        return (LambdaModule::zero(m.n(), p), Matrix::zeros(m.dim(), 0, p));
    }
    let action = basis.solve(&m.action().mul(&basis)).expect("submodule is invariant");
    (LambdaModule::new(m.n(), action).expect("restricted action"), basis)
}

/// A chain of length l whose terms have dimension at most `max_dim`: a
/// random top term and a descending filtration by submodules generated
/// by random vectors.
pub fn random_chain<R: Rng>(n: usize, l: usize, p: u32, max_dim: usize, rng: &mut R) -> ChainObject {
    let top = random_module(n, p, max_dim, rng);
    let mut terms = vec![top.clone()];
    let mut maps: Vec<Matrix> = Vec::new();
    let mut cur = top;
    for _ in 0..l {
        let k = if cur.dim() == 0 { 0 } else { rng.gen_range(0..=2) };
        let data = (0..cur.dim() * k).map(|_| rng.gen_range(0..p)).collect();
        let gens = Matrix::from_flat(cur.dim(), k, p, data);
        let (sub, incl) = generated_submodule(&cur, &gens);
        terms.push(sub.clone());
        maps.push(incl);
        cur = sub;
    }
    terms.reverse();
    maps.reverse();
    ChainObject::new(terms, maps).expect("filtration is a chain of monics")
}

/// A direct sum of μ_j(Λ) summands.
pub fn random_projective_chain<R: Rng>(n: usize, l: usize, p: u32, max_summands: usize, rng: &mut R) -> ChainObject {
    let mut out = ChainObject::zero(l, n, p);
    for _ in 0..rng.gen_range(0..=max_summands) {
        let j = rng.gen_range(1..=l + 1);
        let lam = LambdaModule::free(n, 1, p);
        out = out.direct_sum(&ChainObject::mu(j, &lam, l).expect("valid summand"));
    }
    out
}

/// A random chain map X → Y, uniform over the exact hom space.
pub fn random_chain_map<R: Rng>(x: &ChainObject, y: &ChainObject, rng: &mut R) -> ChainMap {
    let basis = chain_hom_basis(x, y);
    let p = x.p();
    let mut out = ChainMap::zero(x, y);
    for b in &basis {
        let c = rng.gen_range(0..p);
        if c != 0 {
            out = out.add(&b.scale(c));
        }
    }
    out
}

/// A sample in `tag` ⊆ M_l, with free summands added on Γ-tags.
pub fn random_member<R: Rng>(tag: SubcategoryTag, l: usize, cfg: &SessionConfig, rng: &mut R) -> ChainObject {
    let base = random_chain(cfg.n, tag.base_length(l), cfg.p, cfg.max_dim, rng);
    let x = tag.embed(&base, l).expect("sample embeds");
    match tag {
        SubcategoryTag::Gamma(_) => x.direct_sum(&random_projective_chain(cfg.n, l, cfg.p, 1, rng)),
        SubcategoryTag::Delta(_) => x,
    }
}

/// The chain k = k = ⋯ = k of length l.
pub fn constant_simple(n: usize, l: usize, p: u32) -> ChainObject {
    let k = LambdaModule::simple(n, p);
    ChainObject::new(vec![k; l + 1], vec![Matrix::identity(1, p); l]).expect("identities are monic")
}

// ---------------------------------------------------------------------------
// sessions and reports

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub p: u32,
    pub n: usize,
    pub l: usize,
    pub seed: u64,
    pub trials: usize,
    pub max_dim: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig { p: 5, n: 2, l: 1, seed: 0, trials: 25, max_dim: 6 }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(FrobError::Precondition(format!("p = {} is not prime", self.p)));
        }
        if self.n < 2 {
            return Err(FrobError::Precondition(format!("n = {} must be at least 2", self.n)));
        }
        if self.trials == 0 {
            return Err(FrobError::Precondition("trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Exactness,
    Sod,
    Polygon,
    Mutations,
    ThetaSigma,
    Adjoints,
    Duality,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Exactness, Suite::Sod, Suite::Polygon, Suite::Mutations, Suite::ThetaSigma, Suite::Adjoints, Suite::Duality];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Exactness => "exactness",
            Suite::Sod => "sod",
            Suite::Polygon => "polygon",
            Suite::Mutations => "mutations",
            Suite::ThetaSigma => "theta-sigma",
            Suite::Adjoints => "adjoints",
            Suite::Duality => "duality",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = FrobError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| FrobError::Precondition(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl CheckResult {
    fn skip(check: String, why: &str) -> Self {
        CheckResult { check, trial: None, outcome: Outcome::Skip, detail: Some(why.into()), counterexample: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub suite: String,
    pub config: SessionConfig,
    pub summary: Summary,
    pub checks: Vec<CheckResult>,
    pub wall_clock_ms: f64,
}

pub const SCHEMA: &str = "frobmor/1";

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail)
    }

    /// Everything except the timing field.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("wall_clock_ms");
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "{} p={} n={} l={} seed={} trials={} max_dim={}: {} passed, {} failed, {} skipped ({:.0} ms)\n",
            self.suite,
            c.p,
            c.n,
            c.l,
            c.seed,
            c.trials,
            c.max_dim,
            self.summary.passed,
            self.summary.failed,
            self.summary.skipped,
            self.wall_clock_ms
        );
        for r in self.checks.iter().filter(|r| r.outcome != Outcome::Pass) {
            let trial = r.trial.map(|t| format!(" #{t}")).unwrap_or_default();
            let tag = if r.outcome == Outcome::Fail { "FAIL" } else { "skip" };
            out.push_str(&format!("  {tag} {}{trial}: {}\n", r.check, r.detail.as_deref().unwrap_or("")));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// trial driver

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Driver {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Driver {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Driver::Parallel;
        #[cfg(not(feature = "parallel"))]
        Driver::Sequential
    }
}

/// f(0), …, f(count − 1), in index order whatever the driver.
pub fn map_trials<T, F>(driver: Driver, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match driver {
        Driver::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        Driver::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
    }
}

struct Trial<'a> {
    cfg: &'a SessionConfig,
    suite: Suite,
    index: usize,
    out: Vec<CheckResult>,
}

impl<'a> Trial<'a> {
    fn new(cfg: &'a SessionConfig, suite: Suite, index: usize) -> Self {
        Trial { cfg, suite, index, out: Vec::new() }
    }

    fn rng(&self, label: &str) -> ChaCha8Rng {
        trial_rng(self.cfg.seed, &format!("{}/{label}", self.suite), self.index as u64)
    }

    /// Records one check; `objects` is attached to a failure.
    fn check(&mut self, name: impl Into<String>, objects: Value, f: impl FnOnce() -> Result<()>) {
        let (outcome, detail, counterexample) = match f() {
            Ok(()) => (Outcome::Pass, None, None),
            Err(e) => {
                let ce = json!({
                    "seed": self.cfg.seed,
                    "suite": self.suite.name(),
                    "trial": self.index,
                    "objects": objects,
                });
                (Outcome::Fail, Some(e.to_string()), Some(ce))
            }
        };
        self.out.push(CheckResult { check: name.into(), trial: Some(self.index), outcome, detail, counterexample });
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(FrobError::Precondition(what()))
    }
}

fn obj(x: &ChainObject) -> Value {
    serde_json::to_value(x).expect("chain serializes")
}

pub fn run_suite(suite: Suite, cfg: &SessionConfig) -> Result<Report> {
    run_suite_with(suite, cfg, Driver::default())
}

pub fn run_suite_with(suite: Suite, cfg: &SessionConfig, driver: Driver) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let mut checks = fixed_checks(suite, cfg);
    let per_trial = map_trials(driver, cfg.trials, |i| run_trial(suite, cfg, i));
    checks.extend(per_trial.into_iter().flatten());
    let mut summary = Summary::default();
    for c in &checks {
        match c.outcome {
            Outcome::Pass => summary.passed += 1,
            Outcome::Fail => summary.failed += 1,
            Outcome::Skip => summary.skipped += 1,
        }
    }
    Ok(Report {
        schema: SCHEMA.into(),
        suite: suite.name().into(),
        config: cfg.clone(),
        summary,
        checks,
        wall_clock_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// The checks of one trial; a failure's (seed, trial) reproduces it here.
pub fn run_trial(suite: Suite, cfg: &SessionConfig, index: usize) -> Vec<CheckResult> {
    let mut t = Trial::new(cfg, suite, index);
    match suite {
        Suite::Exactness => exactness_trial(&mut t),
        Suite::Sod => sod_trial(&mut t),
        Suite::Polygon => polygon_trial(&mut t),
        Suite::Mutations => mutations_trial(&mut t),
        Suite::ThetaSigma => theta_sigma_trial(&mut t),
        Suite::Adjoints => adjoints_trial(&mut t),
        Suite::Duality => duality_trial(&mut t),
    }
    t.out
}

/// Checks that do not depend on a trial index.
fn fixed_checks(suite: Suite, cfg: &SessionConfig) -> Vec<CheckResult> {
    let mut t = Trial::new(cfg, suite, 0);
    let l = cfg.l;
    match suite {
        Suite::Sod if l == 0 => t.out.push(CheckResult::skip("edges".into(), "no decompositions at l = 0")),
        Suite::Polygon | Suite::Mutations if l == 0 => t.out.push(CheckResult::skip("polygon".into(), "no polygon at l = 0")),
        Suite::Adjoints if AdjointPair::window(l).is_empty() => {
            t.out.push(CheckResult::skip("window".into(), "no adjoint pairs at l = 0"))
        }
        Suite::Polygon => {
            for s in 0..l {
                t.check(format!("tags s={s}"), json!({ "l": l, "s": s }), || {
                    let tags = polygon_tags(l, s)?;
                    polygon_edges(l, s)?;
                    ensure(tags.len() == 2 * l + 4, || format!("{} tags", tags.len()))?;
                    if l % 2 == 1 && s == (l - 1) / 2 {
                        let m = tags.len();
                        ensure((0..m).all(|i| tags[i] == tags[(i + l + 2) % m]), || "tag list is not (l+2)-periodic".into())?;
                    }
                    Ok(())
                });
            }
        }
        Suite::ThetaSigma => {
            let x = constant_simple(cfg.n, l, cfg.p);
            t.check("pinned constant simple", json!([obj(&x)]), || {
                theta_sigma_witness(&x)?.verify()?;
                ensure(are_stably_isomorphic(&theta_pow(&x, l + 2)?, &crate::stable::sigma_pow(&x, 2)), || "Θ^{l+2}X ≇ Σ²X".into())
            });
        }
        Suite::Duality => {
            let x = constant_simple(cfg.n, l, cfg.p);
            t.check("pinned constant simple", json!([obj(&x)]), || {
                let rep = represent(&x)?;
                let pm = rep.datum.pairing(&x)?;
                ensure(crate::duality::is_perfect_pairing(&pm), || "pairing of X with itself is not perfect".into())
            });
        }
        _ => {}
    }
    for c in &mut t.out {
        c.trial = None;
    }
    t.out
}

fn exactness_trial(t: &mut Trial) {
    let cfg = t.cfg.clone();
    let mut rng = t.rng("objects");
    let x = random_chain(cfg.n, cfg.l, cfg.p, cfg.max_dim, &mut rng);
    let y = random_chain(cfg.n, cfg.l, cfg.p, cfg.max_dim, &mut rng);
    let f = random_chain_map(&x, &y, &mut rng);
    let payload = json!([obj(&x), obj(&y)]);
    t.check("envelope", payload.clone(), || {
        let e = chain_injective_envelope(&x);
        e.ses.verify()?;
        ensure(crate::chain::is_injective_chain(e.injective()), || "envelope middle is not injective".into())
    });
    t.check("cover", payload.clone(), || {
        let c = chain_projective_cover(&x);
        c.ses.verify()?;
        ensure(crate::chain::is_projective_chain(c.projective()), || "cover middle is not projective".into())
    });
    t.check("noether", payload.clone(), || noether_check(&x));
    t.check("pushout", payload.clone(), || {
        let e = chain_injective_envelope(&x);
        let po = chain_pushout(e.mono(), &f)?;
        po.ses.verify()?;
        ensure(po.f_prime.compose(e.mono()) == po.i_prime.compose(&f), || "pushout square does not commute".into())
    });
    t.check("pullback", payload.clone(), || {
        let c = chain_projective_cover(&y);
        let pb = chain_pullback(c.epi(), &f)?;
        pb.ses.verify()?;
        ensure(c.epi().compose(&pb.g_prime) == f.compose(&pb.p_prime), || "pullback square does not commute".into())
    });
    t.check("cone", payload, || {
        let c = cone(&f)?;
        c.pushout.ses.verify()?;
        c.envelope.ses.verify()
    });
}

/// Third isomorphism theorem on X⁰ ⊆ Xˡ ⊆ I(Xˡ), termwise Noether completion.
fn noether_check(x: &ChainObject) -> Result<()> {
    let l = x.l();
    let i = x.composite_map(0, l);
    let j = x.term(l).injective_hull();
    let ji = j.compose(&i);
    let (ci, cji, cj) = (cokernel(&i), cokernel(&ji), cokernel(&j));
    let p_mod = &i.src;
    let zero = LambdaModule::zero(p_mod.n(), p_mod.p());
    let to_zero = |m: &LambdaModule| crate::module::ModuleMap::zero(m, &zero);
    let from_zero = |m: &LambdaModule| crate::module::ModuleMap::zero(&zero, m);
    let grid = NoetherGrid {
        top: ShortExactSeq::new(i.clone(), ci.proj.clone())?,
        middle: ShortExactSeq::new(ji.clone(), cji.proj.clone())?,
        bottom: ShortExactSeq::new(from_zero(&cj.module), cj.module.identity())?,
        left: ShortExactSeq::new(p_mod.identity(), to_zero(p_mod))?,
        center: ShortExactSeq::new(j.clone(), cj.proj.clone())?,
    };
    let third = noether_complete(&grid)?;
    third.verify()?;
    ensure(third.mono.src.dim() + third.epi.tgt.dim() == third.mono.tgt.dim(), || "third column has wrong dimensions".into())
}

fn sod_trial(t: &mut Trial) {
    let cfg = t.cfg.clone();
    let l = cfg.l;
    let mut rng = t.rng("objects");
    gamma_delta_checks(t, &mut rng);
    if l == 0 {
        return;
    }
    for sod in Sod::all(l) {
        let x = random_chain(cfg.n, l, cfg.p, cfg.max_dim, &mut rng);
        t.check(format!("triangle {sod}"), json!([obj(&x)]), || sod_triangle(&x, sod)?.verify(&x));
        let u = random_member(sod.left(l), l, &cfg, &mut rng);
        let v = random_member(sod.right(l), l, &cfg, &mut rng);
        t.check(format!("semiorthogonal {sod}"), json!([obj(&u), obj(&v)]), || {
            let d = crate::functors::hom_dim(&u, &v);
            ensure(d == 0, || format!("dim Hom(U, V) = {d}"))
        });
    }
}

/// γ^{[s,t]}δ^{[s,t+1]} = id and γ^{[s+1,t]}δ^{[s,t]} = id on objects and
/// maps whose expansion has length l.
fn gamma_delta_checks<R: Rng>(t: &mut Trial, rng: &mut R) {
    let cfg = t.cfg.clone();
    let l = cfg.l;
    let mut cases = Vec::new();
    for t_ in 0..l {
        for s in 0..=t_ {
            cases.push((Interval { s, t: t_ + 1 }, Interval { s, t: t_ }));
        }
    }
    for t_ in 1..=l {
        for s in 0..t_ {
            cases.push((Interval { s, t: t_ }, Interval { s: s + 1, t: t_ }));
        }
    }
    for (ex, co) in cases {
        let m = l - ex.width();
        if ex.s > m {
            continue;
        }
        let x = random_chain(cfg.n, m, cfg.p, cfg.max_dim, rng);
        let y = random_chain(cfg.n, m, cfg.p, cfg.max_dim, rng);
        let f = random_chain_map(&x, &y, rng);
        t.check(format!("γ{co}∘δ{ex} = id"), json!([obj(&x), obj(&y)]), || {
            ensure(gamma(&delta(&x, ex)?, co)? == x, || "objects differ".into())?;
            ensure(gamma_map(&delta_map(&f, ex)?, co)? == f, || "maps differ".into())
        });
    }
}

fn polygon_trial(t: &mut Trial) {
    let cfg = t.cfg.clone();
    let l = cfg.l;
    let mut rng = t.rng("objects");
    for s in 0..l {
        let Ok(edges) = polygon_edges(l, s) else { continue };
        for (pos, sod) in edges.iter().enumerate() {
            let x = random_chain(cfg.n, l, cfg.p, cfg.max_dim, &mut rng);
            t.check(format!("s={s} edge {pos} triangle {sod}"), json!([obj(&x)]), || sod_triangle(&x, *sod)?.verify(&x));
            let u = random_member(sod.left(l), l, &cfg, &mut rng);
            let v = random_member(sod.right(l), l, &cfg, &mut rng);
            t.check(format!("s={s} edge {pos} semiorthogonal {sod}"), json!([obj(&u), obj(&v)]), || {
                let d = crate::functors::hom_dim(&u, &v);
                ensure(d == 0, || format!("dim Hom(U, V) = {d}"))
            });
        }
        let (inner, outer) = predicted_theta_powers(l, s);
        let x = random_chain(cfg.n, s, cfg.p, cfg.max_dim, &mut rng);
        t.check(format!("s={s} full turn from Γ[0,{s}] ≅ Θ^{inner}"), json!([obj(&x)]), || {
            let turned = full_turn_inner(&x, l, s)?;
            ensure(are_stably_isomorphic(&turned, &theta_pow(&x, inner)?), || "full turn differs from the Θ-power".into())
        });
        let z = random_chain(cfg.n, l - s - 1, cfg.p, cfg.max_dim, &mut rng);
        t.check(format!("s={s} full turn from Δ[0,{}] ≅ Θ^{outer}", s + 1), json!([obj(&z)]), || {
            let turned = full_turn_outer(&z, l, s)?;
            ensure(are_stably_isomorphic(&turned, &theta_pow(&z, outer)?), || "full turn differs from the Θ-power".into())
        });
    }
}

/// The mutations between tags two apart on some polygon of length l.
pub fn polygon_mutation_edges(l: usize) -> Vec<Mutation> {
    let mut out: Vec<Mutation> = Vec::new();
    for s in 0..l {
        let tags = polygon_tags(l, s).expect("s < l");
        let m = tags.len();
        for i in 0..m {
            if let Some(mu) = Mutation::between(tags[i], tags[(i + 2) % m], l) {
                if !out.contains(&mu) {
                    out.push(mu);
                }
            }
        }
    }
    out
}

fn mutations_trial(t: &mut Trial) {
    let cfg = t.cfg.clone();
    let l = cfg.l;
    let mut rng = t.rng("objects");
    for mu in polygon_mutation_edges(l) {
        let x = random_member(mu.source(l), l, &cfg, &mut rng);
        t.check(format!("R∘L ≅ id {mu:?}"), json!([obj(&x)]), || {
            let y = mutate_left(&x, mu)?;
            mu.target(l).check(&y)?;
            ensure(are_stably_isomorphic(&mutate_right(&y, mu)?, &x), || "R(L(X)) ≇ X".into())
        });
        if let Mutation::GammaShift { s, t: tt } = mu {
            let base = random_chain(cfg.n, tt - s, cfg.p, cfg.max_dim, &mut rng);
            t.check(format!("{mu:?} agrees with Θ"), json!([obj(&base)]), || {
                let x = crate::functors::delta_complement(&base, Interval { s, t: tt }, l)?;
                let y = mutate_left(&x, mu)?;
                let back = crate::functors::gamma_complement(&y, Interval { s: s + 1, t: tt + 1 })?;
                ensure(are_stably_isomorphic(&back, &theta(&base)?), || "mutation differs from Θ".into())
            });
        }
    }
}

fn theta_sigma_trial(t: &mut Trial) {
    let cfg = t.cfg.clone();
    let mut rng = t.rng("objects");
    let x = random_chain(cfg.n, cfg.l, cfg.p, cfg.max_dim, &mut rng);
    t.check("Θ̃^{l+2}X ≅ Σ²X", json!([obj(&x)]), || theta_sigma_witness(&x)?.verify());
}

fn adjoints_trial(t: &mut Trial) {
    let cfg = t.cfg.clone();
    let l = cfg.l;
    let mut rng = t.rng("objects");
    for pair in AdjointPair::window(l) {
        let (la, lb) = pair.lengths(l);
        let a = random_chain(cfg.n, la, cfg.p, cfg.max_dim, &mut rng);
        let b = random_chain(cfg.n, lb, cfg.p, cfg.max_dim, &mut rng);
        let payload = json!([obj(&a), obj(&b)]);
        t.check(format!("{pair} dims"), payload.clone(), || {
            let (x, y) = pair.dims(&a, &b, l)?;
            ensure(x == y, || format!("dim Hom(LA, B) = {x}, dim Hom(A, RB) = {y}"))
        });
        if pair.transposition().is_some() {
            let (from, _) = match pair.transposition_spaces(&a, &b, l) {
                Ok(sp) => sp,
                Err(e) => {
                    t.check(format!("{pair} naturality"), payload, || Err(e));
                    continue;
                }
            };
            let m = from.random_element(&mut rng);
            let pre = random_chain_map(&a, &a, &mut rng);
            let post = random_chain_map(&b, &b, &mut rng);
            t.check(format!("{pair} naturality"), payload, || {
                let (x, _) = pair.dims(&a, &b, l)?;
                let r = pair.transposition_rank(&a, &b, l)?;
                ensure(r == x, || format!("transposition has rank {r} on a {x}-dimensional space"))?;
                ensure(pair.naturality_holds(&a, &b, l, &m, &pre, &post)?, || "transposition is not natural".into())
            });
        }
    }
}

pub const DUALITY_SAMPLES: usize = 10;

fn duality_trial(t: &mut Trial) {
    let cfg = t.cfg.clone();
    let mut rng = t.rng("objects");
    let x = random_chain(cfg.n, cfg.l, cfg.p, cfg.max_dim, &mut rng);
    let ys: Vec<ChainObject> = (0..DUALITY_SAMPLES).map(|_| random_chain(cfg.n, cfg.l, cfg.p, cfg.max_dim, &mut rng)).collect();
    let mut payload = vec![obj(&x)];
    payload.extend(ys.iter().map(obj));
    t.check("representing", Value::Array(payload), || {
        let rep = represent(&x)?;
        rep.grid.verify()?;
        ensure(normalization_holds(&rep.grid, &rep.datum.functional)?, || "normalization fails".into())?;
        let report = verify_representing(&rep.datum, &ys)?;
        let first = report.failures().next().cloned();
        match first {
            None => Ok(()),
            Some(c) => Err(FrobError::NoSolution(format!(
                "sample {}: {}×{} pairing of rank {}",
                c.sample, c.hom_to_rep, c.hom_from_obj, c.rank
            ))),
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, l: usize, seed: u64, trials: usize) -> SessionConfig {
        SessionConfig { n, l, seed, trials, ..SessionConfig::default() }
    }

    #[test]
    fn generators_respect_bounds() {
        let mut rng = trial_rng(3, "gen", 0);
        for l in 0..4 {
            for _ in 0..20 {
                let x = random_chain(3, l, 5, 6, &mut rng);
                assert_eq!(x.l(), l);
                assert!(x.terms().iter().all(|t| t.dim() <= 6));
                let y = random_chain(3, l, 5, 6, &mut rng);
                let f = random_chain_map(&x, &y, &mut rng);
                assert_eq!((f.src.clone(), f.tgt.clone()), (x, y));
            }
        }
    }

    #[test]
    fn streams_are_independent_of_order() {
        let a: Vec<u32> = (0..4).map(|i| trial_rng(9, "s", i).gen()).collect();
        let b: Vec<u32> = (0..4).rev().map(|i| trial_rng(9, "s", i).gen()).collect();
        assert_eq!(a, b.into_iter().rev().collect::<Vec<_>>());
        assert_ne!(trial_rng(9, "s", 0).gen::<u64>(), trial_rng(9, "t", 0).gen::<u64>());
    }

    #[test]
    fn config_validation() {
        assert!(SessionConfig::default().validate().is_ok());
        assert!(SessionConfig { p: 4, ..SessionConfig::default() }.validate().is_err());
        assert!(SessionConfig { n: 1, ..SessionConfig::default() }.validate().is_err());
        assert!(SessionConfig { trials: 0, ..SessionConfig::default() }.validate().is_err());
        assert!(run_suite(Suite::Sod, &SessionConfig { p: 6, ..SessionConfig::default() }).is_err());
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("spectral".parse::<Suite>().is_err());
    }

    #[test]
    fn theta_sigma_single_trial() {
        let r = run_suite(Suite::ThetaSigma, &cfg(2, 1, 1, 1)).unwrap();
        assert!(r.passed(), "{}", r.text());
        assert!(r.checks.iter().any(|c| c.check == "pinned constant simple" && c.outcome == Outcome::Pass));
        assert_eq!(r.schema, SCHEMA);
    }

    #[test]
    fn sod_at_length_zero_skips_edges() {
        let r = run_suite(Suite::Sod, &cfg(2, 0, 0, 3)).unwrap();
        assert!(r.passed());
        assert!(r.checks.iter().any(|c| c.check == "edges" && c.outcome == Outcome::Skip));
        assert!(r.summary.skipped >= 1);
    }

    #[test]
    fn duality_example_config() {
        let c = SessionConfig { p: 5, n: 3, l: 2, seed: 7, trials: 10, max_dim: 6 };
        let r = run_suite(Suite::Duality, &c).unwrap();
        assert!(r.passed(), "{}", r.text());
    }

    #[test]
    fn reports_are_deterministic_and_ordered() {
        let c = cfg(3, 2, 11, 6);
        for suite in [Suite::Exactness, Suite::Mutations, Suite::Adjoints] {
            let a = run_suite_with(suite, &c, Driver::Sequential).unwrap();
            let b = run_suite(suite, &c).unwrap();
            assert_eq!(a.payload(), b.payload());
            let trials: Vec<usize> = a.checks.iter().filter_map(|x| x.trial).collect();
            assert!(trials.windows(2).all(|w| w[0] <= w[1]));
            let third: Vec<&CheckResult> = a.checks.iter().filter(|x| x.trial == Some(3)).collect();
            assert_eq!(run_trial(suite, &c, 3).iter().collect::<Vec<_>>(), third);
        }
    }

    #[test]
    fn failures_carry_reproducible_payloads() {
        let c = cfg(2, 1, 4, 2);
        let mut t = Trial::new(&c, Suite::Exactness, 1);
        let x = constant_simple(2, 1, 5);
        t.check("always fails", json!([obj(&x)]), || Err(FrobError::Precondition("forced".into())));
        let r = &t.out[0];
        assert_eq!(r.outcome, Outcome::Fail);
        let ce = r.counterexample.as_ref().unwrap();
        assert_eq!(ce["seed"], 4);
        assert_eq!(ce["trial"], 1);
        let back: ChainObject = serde_json::from_value(ce["objects"][0].clone()).unwrap();
        assert_eq!(back, x);
    }
}
