//! Brute-force Hom and stable Hom dimensions.
//!
//! The oracle keeps its own modules in Jordan form, lists every Λ-map by
//! enumerating generator images, and spans the maps that factor through the
//! indecomposable projective chains μ_j(Λ) = (0, …, 0, Λ, …, Λ) by hand. The
//! library sees the same objects after a random change of basis on the top term.

use frobmor::stable::stable_hom;
use frobmor::{ChainObject, LambdaModule, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Vector = Vec<u32>;

#[derive(Clone, Debug)]
struct Jordan {
    n: usize,
    p: u32,
    parts: Vec<usize>,
}

impl Jordan {
    fn dim(&self) -> usize {
        self.parts.iter().sum()
    }

    fn offsets(&self) -> Vec<usize> {
        self.parts.iter().scan(0, |acc, &a| { let o = *acc; *acc += a; Some(o) }).collect()
    }

    fn act(&self, v: &[u32]) -> Vector {
        let mut w = vec![0; v.len()];
        for (o, &a) in self.offsets().into_iter().zip(&self.parts) {
            for t in 0..a - 1 {
                w[o + t + 1] = v[o + t];
            }
        }
        w
    }

    fn act_pow(&self, v: &[u32], e: usize) -> Vector {
        (0..e).fold(v.to_vec(), |w, _| self.act(&w))
    }

    fn action_matrix(&self) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d, self.p);
        for c in 0..d {
            let mut e = vec![0; d];
            e[c] = 1;
            for (r, x) in self.act(&e).into_iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }

    fn all_vectors(&self) -> Vec<Vector> {
        all_vectors(self.dim(), self.p)
    }

    /// Elements killed by x^a.
    fn killed_by(&self, a: usize) -> Vec<Vector> {
        self.all_vectors().into_iter().filter(|v| self.act_pow(v, a).iter().all(|&x| x == 0)).collect()
    }
}

fn all_vectors(d: usize, p: u32) -> Vec<Vector> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|v| (0..p).map(move |c| { let mut w = v.clone(); w.push(c); w })).collect();
    }
    out
}

fn inv(a: u32, p: u32) -> u32 {
    (1..p).find(|b| a * b % p == 1).unwrap()
}

/// Row echelon basis of a span, grown one vector at a time.
#[derive(Clone, Debug, Default)]
struct Span {
    p: u32,
    rows: Vec<(usize, Vector)>,
}

impl Span {
    fn new(p: u32) -> Self {
        Span { p, rows: Vec::new() }
    }

    fn reduce(&self, v: &[u32]) -> Vector {
        let p = self.p;
        let mut w = v.to_vec();
        for (piv, r) in &self.rows {
            let c = w[*piv];
            if c != 0 {
                for (x, y) in w.iter_mut().zip(r) {
                    *x = (*x + p - c * y % p) % p;
                }
            }
        }
        w
    }

    fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    fn insert(&mut self, v: &[u32]) -> bool {
        let p = self.p;
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|&x| x != 0) else { return false };
        let s = inv(w[piv], p);
        w.iter_mut().for_each(|x| *x = *x * s % p);
        for (_, r) in &mut self.rows {
            let c = r[piv];
            if c != 0 {
                for (x, y) in r.iter_mut().zip(&w) {
                    *x = (*x + p - c * y % p) % p;
                }
            }
        }
        self.rows.push((piv, w));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Coordinates of a member in `basis()` order.
    fn coords(&self, v: &[u32]) -> Vector {
        self.rows.iter().map(|(piv, _)| v[*piv]).collect()
    }
}

/// The submodule generated by `gens`.
fn generated(m: &Jordan, gens: &[Vector]) -> Span {
    let mut s = Span::new(m.p);
    for g in gens {
        for t in 0..m.n {
            s.insert(&m.act_pow(g, t));
        }
    }
    s
}

/// A Λ-map out of a Jordan module, by its generator images.
fn apply(src: &Jordan, tgt: &Jordan, images: &[Vector], v: &[u32]) -> Vector {
    let p = src.p;
    let mut out = vec![0; tgt.dim()];
    for ((o, &a), img) in src.offsets().into_iter().zip(&src.parts).zip(images) {
        for t in 0..a {
            let c = v[o + t];
            if c != 0 {
                for (x, y) in out.iter_mut().zip(tgt.act_pow(img, t)) {
                    *x = (*x + c * y) % p;
                }
            }
        }
    }
    out
}

/// Every Λ-map src → tgt, as generator image tuples.
fn all_maps(src: &Jordan, tgt: &Jordan) -> Vec<Vec<Vector>> {
    let choices: Vec<Vec<Vector>> = src.parts.iter().map(|&a| tgt.killed_by(a)).collect();
    let mut out: Vec<Vec<Vector>> = vec![vec![]];
    for c in &choices {
        out = out.into_iter().flat_map(|t| c.iter().map(move |v| { let mut w = t.clone(); w.push(v.clone()); w })).collect();
    }
    out
}

fn flat(images: &[Vector]) -> Vector {
    images.concat()
}

/// X⁰ ⊆ ⋯ ⊆ Xˡ = T inside a Jordan module.
#[derive(Clone, Debug)]
struct Flag {
    top: Jordan,
    subs: Vec<Span>,
}

impl Flag {
    fn l(&self) -> usize {
        self.subs.len()
    }

    fn term(&self, k: usize) -> Span {
        if k == self.l() {
            let mut s = Span::new(self.top.p);
            for c in 0..self.top.dim() {
                let mut e = vec![0; self.top.dim()];
                e[c] = 1;
                s.insert(&e);
            }
            s
        } else {
            self.subs[k].clone()
        }
    }

    fn total_dim(&self) -> usize {
        self.top.dim() + self.subs.iter().map(Span::dim).sum::<usize>()
    }

    /// The same chain for the library, with the top term in a random basis.
    fn to_chain(&self, change: &Matrix) -> ChainObject {
        let (n, p) = (self.top.n, self.top.p);
        let l = self.l();
        let top_action = self.top.action_matrix();
        let change_inv = change.inverse().unwrap();
        let mut terms = Vec::new();
        let mut maps = Vec::new();
        for k in 0..=l {
            let s = self.term(k);
            let basis = s.basis();
            let d = basis.len();
            let action = if k == l {
                change.mul(&top_action).mul(&change_inv)
            } else {
                let mut a = Matrix::zeros(d, d, p);
                for (c, b) in basis.iter().enumerate() {
                    for (r, x) in s.coords(&self.top.act(b)).into_iter().enumerate() {
                        a.set(r, c, x);
                    }
                }
                a
            };
            terms.push(LambdaModule::new(n, action).unwrap());
            if k > 0 {
                let below = self.term(k - 1).basis();
                let mut m = Matrix::zeros(d, below.len(), p);
                for (c, b) in below.iter().enumerate() {
                    for (r, x) in s.coords(b).into_iter().enumerate() {
                        m.set(r, c, x);
                    }
                }
                maps.push(if k == l { change.mul(&m) } else { m });
            }
        }
        ChainObject::new(terms, maps).unwrap()
    }
}

/// dim Hom(X, Y) and the dimension of the maps factoring through projectives.
fn oracle_dims(x: &Flag, y: &Flag) -> (usize, usize) {
    let l = x.l();
    assert_eq!(l, y.l());
    let p = x.top.p;
    let n = x.top.n;
    let mut hom = Span::new(p);
    let mut count = 0usize;
    let conds: Vec<(Vec<Vector>, Span)> = (0..l).map(|k| (x.term(k).basis(), y.term(k))).collect();
    for f in all_maps(&x.top, &y.top) {
        let ok = conds.iter().all(|(bs, target)| bs.iter().all(|b| target.contains(&apply(&x.top, &y.top, &f, b))));
        if ok {
            count += 1;
            hom.insert(&flat(&f));
        }
    }
    assert_eq!(count, (p as usize).pow(hom.dim() as u32), "Hom is not a subspace");
    let lam = Jordan { n, p, parts: vec![n] };
    let mut factoring = Span::new(p);
    for j in 0..=l {
        // X → μ_j(Λ): maps Xˡ → Λ killing X^{j-1}
        let killed: Vec<Vector> = if j == 0 { vec![] } else { x.term(j - 1).basis() };
        let mut gs = Span::new(p);
        for g in all_maps(&x.top, &lam) {
            if killed.iter().all(|b| apply(&x.top, &lam, &g, b).iter().all(|&c| c == 0)) {
                gs.insert(&flat(&g));
            }
        }
        // μ_j(Λ) → Y: the image of 1, anywhere in Y^j
        let ys = y.term(j).basis();
        for g in gs.basis() {
            for yv in &ys {
                let images: Vec<Vector> = g
                    .chunks(n)
                    .map(|lambda| {
                        let mut out = vec![0; y.top.dim()];
                        for (s, &c) in lambda.iter().enumerate() {
                            for (o, v) in out.iter_mut().zip(y.top.act_pow(yv, s)) {
                                *o = (*o + c * v) % p;
                            }
                        }
                        out
                    })
                    .collect();
                factoring.insert(&flat(&images));
            }
        }
    }
    for b in factoring.basis() {
        assert!(hom.contains(&b), "a factoring map is not a chain map");
    }
    (hom.dim(), factoring.dim())
}

fn partitions(n: usize, max_total: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for a in (1..=cap.min(n).min(left)).rev() {
            cur.push(a);
            go(n, left - a, a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, max_total, n, &mut Vec::new(), &mut out);
    out
}

fn random_change<R: Rng>(d: usize, p: u32, rng: &mut R) -> Matrix {
    loop {
        let m = Matrix::from_flat(d, d, p, (0..d * d).map(|_| rng.gen_range(0..p)).collect());
        if m.rank() == d {
            return m;
        }
    }
}

fn random_flag<R: Rng>(n: usize, p: u32, l: usize, max_top: usize, rng: &mut R) -> Flag {
    let all = partitions(n, max_top);
    loop {
        let top = Jordan { n, p, parts: all[rng.gen_range(0..all.len())].clone() };
        let mut subs: Vec<Span> = Vec::new();
        let mut ambient: Vec<Vector> = top.all_vectors();
        for _ in 0..l {
            let gens: Vec<Vector> = (0..rng.gen_range(0..=2)).map(|_| ambient[rng.gen_range(0..ambient.len())].clone()).collect();
            let s = generated(&top, &gens);
            ambient = top.all_vectors().into_iter().filter(|v| s.contains(v)).collect();
            subs.push(s);
        }
        subs.reverse();
        let flag = Flag { top, subs };
        if flag.total_dim() <= 8 {
            return flag;
        }
    }
}

fn module_flag(n: usize, p: u32, parts: &[usize]) -> Flag {
    Flag { top: Jordan { n, p, parts: parts.to_vec() }, subs: vec![] }
}

/// Every pair of modules of dimension ≤ 4 over F_2 (≤ 3 over F_3), n = 2, 3.
/// Returns the number of pairs compared.
pub fn check_modules(seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = 0;
    for (p, max) in [(2u32, 4usize), (3, 3)] {
        for n in 2..=3 {
            let parts = partitions(n, max);
            for a in &parts {
                for b in &parts {
                    let (x, y) = (module_flag(n, p, a), module_flag(n, p, b));
                    let (hom, fac) = oracle_dims(&x, &y);
                    let cx = x.to_chain(&random_change(x.top.dim(), p, &mut rng));
                    let cy = y.to_chain(&random_change(y.top.dim(), p, &mut rng));
                    let s = stable_hom(&cx, &cy);
                    if (s.full_dim(), s.stable_dim()) != (hom, hom - fac) {
                        return Err(format!(
                            "({a:?}, {b:?}) n={n} p={p}: library {}/{}, oracle {hom}/{}",
                            s.full_dim(),
                            s.stable_dim(),
                            hom - fac
                        ));
                    }
                    if a.len() == 1 && b.len() == 1 {
                        let (i, j) = (a[0], b[0]);
                        if hom - fac != i.min(j).min(n - i).min(n - j) {
                            return Err(format!("M_{i} → M_{j} n={n}: oracle gives {}", hom - fac));
                        }
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok(pairs)
}

/// Random chains of total dimension ≤ 8 at l = 1, 2. Returns the number of
/// pairs compared and how many had a nonzero stable Hom.
pub fn check_chains(seed: u64, per_case: usize) -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pairs, mut nonzero) = (0, 0);
    for (p, max_top) in [(2u32, 4usize), (3, 3)] {
        for n in 2..=3 {
            for l in 1..=2 {
                for _ in 0..per_case {
                    let x = random_flag(n, p, l, max_top, &mut rng);
                    let y = random_flag(n, p, l, max_top, &mut rng);
                    let (hom, fac) = oracle_dims(&x, &y);
                    let cx = x.to_chain(&random_change(x.top.dim(), p, &mut rng));
                    let cy = y.to_chain(&random_change(y.top.dim(), p, &mut rng));
                    let s = stable_hom(&cx, &cy);
                    if (s.full_dim(), s.stable_dim()) != (hom, hom - fac) {
                        return Err(format!(
                            "n={n} p={p} l={l}: library {}/{}, oracle {hom}/{}\n{x:?}\n{y:?}",
                            s.full_dim(),
                            s.stable_dim(),
                            hom - fac
                        ));
                    }
                    pairs += 1;
                    nonzero += usize::from(hom > fac);
                }
            }
        }
    }
    Ok((pairs, nonzero))
}
