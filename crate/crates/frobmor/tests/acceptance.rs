//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use frobmor::duality::represent;
use frobmor::functors::{hom_dim, Sod};
use frobmor::harness::{constant_simple, run_suite, run_suite_with, Driver, Outcome, Report, SessionConfig, Suite};
use frobmor::stable::are_stably_isomorphic;
use frobmor::{ChainObject, LambdaModule, Matrix};

const P: u32 = 5;
const TRIALS: usize = 25;

type Verdict = Result<String, String>;

struct Runs {
    reports: HashMap<(Suite, usize, usize), Report>,
}

impl Runs {
    fn get(&mut self, suite: Suite, n: usize, l: usize, trials: usize) -> &Report {
        self.reports.entry((suite, n, l)).or_insert_with(|| {
            let cfg = SessionConfig { p: P, n, l, seed: 2024, trials, max_dim: 6 };
            run_suite(suite, &cfg).expect("valid config")
        })
    }

    /// Checks whose name satisfies `pick`, across n ∈ {2, 3} and the given lengths.
    fn tally(&mut self, suite: Suite, ls: impl IntoIterator<Item = usize> + Clone, trials: usize, pick: impl Fn(&str) -> bool) -> Verdict {
        let (mut passed, mut skipped) = (0, 0);
        for n in [2, 3] {
            for l in ls.clone() {
                let r = self.get(suite, n, l, trials);
                for c in r.checks.iter().filter(|c| pick(&c.check)) {
                    match c.outcome {
                        Outcome::Pass => passed += 1,
                        Outcome::Skip => skipped += 1,
                        Outcome::Fail => {
                            return Err(format!(
                                "{suite} n={n} l={l} {} trial {:?}: {}",
                                c.check,
                                c.trial,
                                c.detail.as_deref().unwrap_or("")
                            ))
                        }
                    }
                }
            }
        }
        if passed == 0 {
            return Err(format!("{suite}: nothing was checked"));
        }
        Ok(format!("{passed} checks passed, {skipped} skipped"))
    }
}

fn module(n: usize, parts: &[usize]) -> LambdaModule {
    LambdaModule::from_partition(n, parts, P)
}

/// (k ↣ Λ) with Λ = k[x]/(x²).
fn simple_in_free() -> ChainObject {
    let socle = Matrix::from_rows(&[vec![0], vec![1]], P);
    ChainObject::new(vec![module(2, &[1]), module(2, &[2])], vec![socle]).unwrap()
}

/// (0 ↣ k) with n = 2.
fn zero_then_simple() -> ChainObject {
    ChainObject::new(vec![LambdaModule::zero(2, P), module(2, &[1])], vec![Matrix::zeros(1, 0, P)]).unwrap()
}

fn exactness(runs: &mut Runs) -> Verdict {
    runs.tally(Suite::Exactness, 0..=3, TRIALS, |_| true)
}

fn gamma_delta(runs: &mut Runs) -> Verdict {
    runs.tally(Suite::Sod, 0..=3, TRIALS, |c| c.starts_with('γ'))
}

fn semiorthogonality(runs: &mut Runs) -> Verdict {
    let tally = runs.tally(Suite::Sod, 1..=3, TRIALS, |c| c.starts_with("semiorthogonal"))?;
    let (u, v) = (zero_then_simple(), simple_in_free());
    let sod = Sod::all(1)
        .into_iter()
        .find(|s| s.left(1).check(&u).is_ok() && s.right(1).check(&v).is_ok())
        .ok_or("no decomposition separates (0 ↣ k) and (k ↣ Λ)")?;
    let (fwd, rev) = (hom_dim(&u, &v), hom_dim(&v, &u));
    if fwd != 0 || rev == 0 {
        return Err(format!("{sod}: Hom(U, V) = {fwd}, Hom(V, U) = {rev}"));
    }
    Ok(format!("{tally}; in {sod}, Hom((k ↣ Λ), (0 ↣ k)) has dimension {rev}"))
}

fn sod_triangles(runs: &mut Runs) -> Verdict {
    runs.tally(Suite::Sod, 1..=3, TRIALS, |c| c.starts_with("triangle"))
}

fn keystone(runs: &mut Runs) -> Verdict {
    let tally = runs.tally(Suite::ThetaSigma, 0..=3, TRIALS, |_| true)?;
    let pinned = runs.get(Suite::ThetaSigma, 2, 1, TRIALS).checks.iter().any(|c| c.check == "pinned constant simple" && c.outcome == Outcome::Pass);
    if !pinned {
        return Err("pinned (k = k) case missing at n = 2, l = 1".into());
    }
    Ok(tally)
}

fn mutations(runs: &mut Runs) -> Verdict {
    let m = runs.tally(Suite::Mutations, 1..=2, TRIALS, |_| true)?;
    let p = runs.tally(Suite::Polygon, 1..=2, TRIALS, |_| true)?;
    let reduced = runs.get(Suite::Polygon, 2, 1, TRIALS).checks.iter().any(|c| c.check == "tags s=0" && c.outcome == Outcome::Pass);
    if !reduced {
        return Err("reduced polygon at l = 1 not checked".into());
    }
    Ok(format!("mutations: {m}; polygons: {p}"))
}

fn adjoints(runs: &mut Runs) -> Verdict {
    runs.tally(Suite::Adjoints, 0..=3, TRIALS, |_| true)
}

fn duality(runs: &mut Runs) -> Verdict {
    let tally = runs.tally(Suite::Duality, 0..=2, 15, |_| true)?;
    let kk = constant_simple(2, 1, P);
    let rep = represent(&kk).map_err(|e| e.to_string())?;
    if !are_stably_isomorphic(&rep.datum.rep, &simple_in_free()) {
        return Err("the dual of (k = k) is not (k ↣ Λ)".into());
    }
    let pm = rep.datum.pairing(&kk).map_err(|e| e.to_string())?;
    if (pm.rows(), pm.cols()) != (1, 1) || pm.get(0, 0) == 0 {
        return Err(format!("pinned pairing is {}×{} with entry {}", pm.rows(), pm.cols(), pm.get(0, 0)));
    }
    Ok(format!("{tally}; (k = k) pairs with (k ↣ Λ) by {}", pm.get(0, 0)))
}

fn oracle() -> Verdict {
    let modules = common::oracle::check_modules(7)?;
    let (chains, nonzero) = common::oracle::check_chains(9, 15)?;
    Ok(format!("{modules} module pairs, {chains} chain pairs ({nonzero} with nonzero stable Hom)"))
}

fn determinism() -> Verdict {
    let cfg = SessionConfig { p: P, n: 3, l: 2, seed: 99, trials: 5, max_dim: 6 };
    for suite in Suite::ALL {
        let a = run_suite_with(suite, &cfg, Driver::Sequential).map_err(|e| e.to_string())?;
        let b = run_suite(suite, &cfg).map_err(|e| e.to_string())?;
        let c = run_suite(suite, &cfg).map_err(|e| e.to_string())?;
        if a.payload() != b.payload() || b.payload() != c.payload() {
            return Err(format!("{suite}: payloads differ between runs"));
        }
    }
    Ok(format!("{} suites reproduce their payloads", Suite::ALL.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut runs = Runs { reports: HashMap::new() };
    let results: Vec<(&str, Verdict)> = vec![
        ("exactness certificates", exactness(&mut runs)),
        ("γδ identities", gamma_delta(&mut runs)),
        ("semiorthogonality", semiorthogonality(&mut runs)),
        ("decomposition triangles", sod_triangles(&mut runs)),
        ("Θ̃^{l+2} ≅ Σ²", keystone(&mut runs)),
        ("mutations and polygons", mutations(&mut runs)),
        ("adjunctions", adjoints(&mut runs)),
        ("stable duality", duality(&mut runs)),
        ("brute-force oracle", oracle()),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(d) => println!("PASS  {:>2} {name}: {d}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL  {:>2} {name}: {e}", i + 1)
            }
        }
    }
    println!("acceptance: {} of {} criteria pass in {:.1}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
