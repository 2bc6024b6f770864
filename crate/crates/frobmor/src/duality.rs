//! Representing objects for dualized hom functors.
//!
//! In the base, Hom_stab(−, ΩA) is dual to Hom_stab(A, −) through a
//! searched linear form on Hom_stab(A, ΩA). For a chain X the representing
//! chain X̃ is read off a grid of pushouts, and the form e_X on
//! Hom_stab(X, X̃) is assembled by contracting one column at a time.

use crate::chain::{ChainMap, ChainObject};
use crate::error::{FrobError, Result};
use crate::functors::{gamma, gamma_map, Interval};
use crate::linalg::Matrix;
use crate::module::{hom_basis, pushout, LambdaModule, ModuleMap, ShortExactSeq};
use crate::stable::{is_stable_iso, solve_stably_family, stable_hom, StableHomSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Write as _;

const CANDIDATE_LIMIT: u64 = 4096;

fn single(m: &LambdaModule) -> ChainObject {
    ChainObject::single(m)
}

fn single_map(f: &ModuleMap) -> ChainMap {
    ChainMap::from_parts(&single(&f.src), &single(&f.tgt), vec![f.mat.clone()])
}

/// A linear form on a stable hom space, stored by its values on the
/// space's representatives.
#[derive(Clone, Debug)]
pub struct Functional {
    space: StableHomSpace,
    values: Vec<u32>,
}

impl Functional {
    pub fn new(space: StableHomSpace, values: Vec<u32>) -> Result<Self> {
        if values.len() != space.stable_dim() {
            return Err(FrobError::Bounds(format!("{} values for a {}-dimensional space", values.len(), space.stable_dim())));
        }
        Ok(Functional { space, values })
    }

    pub fn zero(space: StableHomSpace) -> Self {
        let values = vec![0; space.stable_dim()];
        Functional { space, values }
    }

    pub fn space(&self) -> &StableHomSpace {
        &self.space
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn scale(&self, c: u32) -> Functional {
        let p = self.space.src.p();
        let values = self.values.iter().map(|&v| crate::linalg::mul_mod(v, c, p)).collect();
        Functional { space: self.space.clone(), values }
    }

    pub fn eval(&self, f: &ChainMap) -> Result<u32> {
        Ok(self.eval_many(std::slice::from_ref(f))?[0])
    }

    pub fn eval_many(&self, fs: &[ChainMap]) -> Result<Vec<u32>> {
        let c = self.space.stable_coords_many(fs)?;
        Ok(self.contract(&c))
    }

    fn contract(&self, coords: &Matrix) -> Vec<u32> {
        let p = self.space.src.p();
        let row = Matrix::from_flat(1, self.values.len(), p, self.values.clone());
        row.mul(coords).row(0).to_vec()
    }
}

/// An object together with a representing object for the dual of its
/// covariant hom functor.
#[derive(Clone, Debug)]
pub struct DualityDatum {
    pub obj: ChainObject,
    pub rep: ChainObject,
    pub functional: Functional,
}

/// Matrix of (g, f) ↦ e(g ∘ f) over stable bases of Hom(Y, rep) (rows)
/// and Hom(obj, Y) (columns).
pub fn pairing_matrix(e: &Functional, y: &ChainObject) -> Result<Matrix> {
    let gs = stable_hom(y, &e.space.tgt).representatives();
    let fs = stable_hom(&e.space.src, y).representatives();
    let comps: Vec<ChainMap> = gs.iter().flat_map(|g| fs.iter().map(move |f| g.compose(f))).collect();
    let vals = e.eval_many(&comps)?;
    Ok(Matrix::from_flat(gs.len(), fs.len(), e.space.src.p(), vals))
}

pub fn is_perfect_pairing(m: &Matrix) -> bool {
    m.rows() == m.cols() && m.rank() == m.rows()
}

impl DualityDatum {
    pub fn pairing(&self, y: &ChainObject) -> Result<Matrix> {
        pairing_matrix(&self.functional, y)
    }

    /// Perfection against every indecomposable Λ-module.
    pub fn check_base(&self) -> Result<()> {
        let (n, p) = (self.obj.n(), self.obj.p());
        for b in 1..=n {
            let y = single(&LambdaModule::from_partition(n, &[b], p));
            if !is_perfect_pairing(&self.pairing(&y)?) {
                return Err(FrobError::NoSolution(format!("pairing against the indecomposable of length {b} is not perfect")));
            }
        }
        Ok(())
    }
}

/// The all-ones form, then uniform draws from a fixed stream.
fn candidates(d: usize, p: u32) -> impl Iterator<Item = Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    std::iter::once(vec![1; d]).chain(std::iter::repeat_with(move || (0..d).map(|_| rng.gen_range(0..p)).collect()))
}

/// Ã = ΩA with the first form, in a fixed enumeration, that pairs
/// perfectly against all indecomposables.
pub fn base_duality_datum(a: &LambdaModule) -> Result<DualityDatum> {
    let (n, p) = (a.n(), a.p());
    let obj = single(a);
    let rep = single(&a.loop_module());
    let space = stable_hom(&obj, &rep);
    let d = space.stable_dim();
    // per indecomposable: coordinates of all g ∘ f, and the pairing's shape
    let mut tensors = Vec::new();
    for b in 1..=n {
        let y = single(&LambdaModule::from_partition(n, &[b], p));
        let gs = stable_hom(&y, &rep).representatives();
        let fs = stable_hom(&obj, &y).representatives();
        if gs.len() != fs.len() {
            return Err(FrobError::NoSolution(format!("Hom dimensions {} and {} differ against length {b}", gs.len(), fs.len())));
        }
        if gs.is_empty() {
            continue;
        }
        let comps: Vec<ChainMap> = gs.iter().flat_map(|g| fs.iter().map(move |f| g.compose(f))).collect();
        tensors.push((gs.len(), space.stable_coords_many(&comps)?));
    }
    if d == 0 {
        return Ok(DualityDatum { obj, rep, functional: Functional::zero(space) });
    }
    let limit = CANDIDATE_LIMIT;
    for values in candidates(d, p).take(limit as usize) {
        let e = Functional { space: space.clone(), values };
        let perfect = tensors.iter().all(|(m, coords)| {
            let vals = e.contract(coords);
            Matrix::from_flat(*m, *m, p, vals).rank() == *m
        });
        if perfect {
            return Ok(DualityDatum { obj, rep, functional: e });
        }
    }
    Err(FrobError::NoSolution(format!("no perfect functional over F_{p} among {limit} candidates")))
}

/// The stable map f̃: Ã → B̃ with e_A(− ∘ f) = e_B(f̃ ∘ −) on Hom(B, Ã).
pub fn induced_dual_morphism(f: &ChainMap, da: &DualityDatum, db: &DualityDatum) -> Result<ChainMap> {
    if f.src != da.obj || f.tgt != db.obj {
        return Err(FrobError::Precondition("map does not match the duality data".into()));
    }
    let p = f.src.p();
    let unknown = stable_hom(&da.rep, &db.rep);
    let hs = unknown.representatives();
    let gs = stable_hom(&db.obj, &da.rep).representatives();
    if hs.is_empty() {
        return Ok(ChainMap::zero(&da.rep, &db.rep));
    }
    let lhs: Vec<ChainMap> = gs.iter().map(|g| g.compose(f)).collect();
    let rhs = da.functional.eval_many(&lhs)?;
    let mut a = Matrix::zeros(gs.len(), hs.len(), p);
    for (j, h) in hs.iter().enumerate() {
        let col: Vec<ChainMap> = gs.iter().map(|g| h.compose(g)).collect();
        for (i, v) in db.functional.eval_many(&col)?.into_iter().enumerate() {
            a.set(i, j, v);
        }
    }
    let sol = a
        .solve_all(&Matrix::from_flat(gs.len(), 1, p, rhs))
        .map_err(|_| FrobError::NoSolution("no dual morphism".into()))?;
    if sol.kernel.cols() > 0 {
        return Err(FrobError::NotUnique("dual morphism is not unique".into()));
    }
    Ok(unknown.combine(&sol.particular.col_vec(0)))
}

/// Whether e_X(− ∘ f) = e_Y(f̃ ∘ −) on Hom(Y, X̃).
pub fn dual_compatible(f: &ChainMap, dual: &ChainMap, dx: &DualityDatum, dy: &DualityDatum) -> Result<bool> {
    let gs = stable_hom(&dy.obj, &dx.rep).representatives();
    let lhs: Vec<ChainMap> = gs.iter().map(|g| g.compose(f)).collect();
    let rhs: Vec<ChainMap> = gs.iter().map(|g| dual.compose(g)).collect();
    Ok(dx.functional.eval_many(&lhs)? == dy.functional.eval_many(&rhs)?)
}

/// A commutative square A → B → D, A → C → D.
#[derive(Clone, Debug)]
pub struct Square {
    pub top: ChainMap,
    pub left: ChainMap,
    pub right: ChainMap,
    pub bottom: ChainMap,
}

impl Square {
    pub fn from_pushout(sq: &crate::module::PushoutSquare) -> Square {
        Square {
            top: single_map(&sq.i),
            left: single_map(&sq.f),
            right: single_map(&sq.f_prime),
            bottom: single_map(&sq.i_prime),
        }
    }

    pub fn commutes(&self) -> bool {
        self.right.compose(&self.top) == self.bottom.compose(&self.left)
    }
}

/// Given a homotopy cartesian square A, B, C, D, its dual square
/// Ã, B̃, C̃, D̃ and records for A, B, C compatible along the top and left
/// edges, the record for D on D̃ compatible along the right and bottom.
pub fn lift_square(sq: &Square, dual: &Square, da: &DualityDatum, db: &DualityDatum, dc: &DualityDatum) -> Result<DualityDatum> {
    if !sq.commutes() || !dual.commutes() {
        return Err(FrobError::Precondition("square does not commute".into()));
    }
    if !dual_compatible(&sq.top, &dual.top, da, db)? || !dual_compatible(&sq.left, &dual.left, da, dc)? {
        return Err(FrobError::Precondition("given records are not compatible along the square".into()));
    }
    let d_obj = sq.right.tgt.clone();
    let d_rep = dual.right.tgt.clone();
    if d_obj.l() != 0 {
        return Err(FrobError::Precondition("lift_square works in the base".into()));
    }
    let hat = base_duality_datum(d_obj.term(0))?;
    let b_hat = induced_dual_morphism(&sq.right, db, &hat)?;
    let d_hat = induced_dual_morphism(&sq.bottom, dc, &hat)?;
    // f: D̃ → D̂ with f ∘ (b̃ d̃) ≡ (b̂ d̂)
    let leg = ChainMap::row(&dual.right, &dual.bottom);
    let want = ChainMap::row(&b_hat, &d_hat);
    let unknown = stable_hom(&d_rep, &hat.rep);
    let target = stable_hom(&leg.src, &hat.rep);
    let (particular, kernel) = solve_stably_family(&unknown, |u| u.compose(&leg), &target, &want)?;
    let f = comparison_iso(particular, &kernel)?;
    let space = stable_hom(&d_obj, &d_rep);
    let pushed: Vec<ChainMap> = space.representatives().iter().map(|h| f.compose(h)).collect();
    let values = hat.functional.eval_many(&pushed)?;
    let out = DualityDatum { obj: d_obj, rep: d_rep, functional: Functional::new(space, values)? };
    if !dual_compatible(&sq.right, &dual.right, db, &out)? || !dual_compatible(&sq.bottom, &dual.bottom, dc, &out)? {
        return Err(FrobError::Precondition("lifted record fails compatibility".into()));
    }
    Ok(out)
}

/// The first stable iso among particular + Σ cᵢ kᵢ, in a fixed stream.
fn comparison_iso(particular: ChainMap, kernel: &[ChainMap]) -> Result<ChainMap> {
    if is_stable_iso(&particular) {
        return Ok(particular);
    }
    let p = particular.src.p();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..if kernel.is_empty() { 0 } else { CANDIDATE_LIMIT } {
        let mut f = particular.clone();
        for k in kernel {
            f = f.add(&k.scale(rng.gen_range(0..p)));
        }
        if is_stable_iso(&f) {
            return Ok(f);
        }
    }
    Err(FrobError::NoIso("triangle comparison is not a stable iso".into()))
}

fn grid_index(l: usize, i: usize, j: usize) -> usize {
    i * (l + 2) + j
}

/// Successive quotients X^{i,j} = X^j / X^{i-1}, i ≤ j, with monics
/// α^{i,j}: X^{i,j} ↣ X^{i,j+1} and epics β^{i,j}: X^{i,j} ↠ X^{i+1,j}.
#[derive(Clone, Debug)]
pub struct QuotientGrid {
    pub l: usize,
    entries: Vec<Option<LambdaModule>>,
    alpha: Vec<Option<ModuleMap>>,
    beta: Vec<Option<ModuleMap>>,
    squares: Vec<Option<(Square, ShortExactSeq)>>,
}

impl QuotientGrid {
    fn empty(l: usize) -> Self {
        let size = (l + 2) * (l + 2);
        QuotientGrid { l, entries: vec![None; size], alpha: vec![None; size], beta: vec![None; size], squares: vec![None; size] }
    }

    pub fn entry(&self, i: usize, j: usize) -> &LambdaModule {
        self.entries[grid_index(self.l, i, j)].as_ref().expect("grid entry i ≤ j ≤ l")
    }

    pub fn alpha(&self, i: usize, j: usize) -> &ModuleMap {
        self.alpha[grid_index(self.l, i, j)].as_ref().expect("α^{i,j} for i ≤ j < l")
    }

    pub fn beta(&self, i: usize, j: usize) -> &ModuleMap {
        self.beta[grid_index(self.l, i, j)].as_ref().expect("β^{i,j} for i < j ≤ l")
    }

    /// The square with top-left corner (i, j), i ≤ j < l, and its exact sequence.
    pub fn square(&self, i: usize, j: usize) -> &(Square, ShortExactSeq) {
        self.squares[grid_index(self.l, i, j)].as_ref().expect("square i ≤ j < l")
    }

    /// β^{k-1,l} ∘ ⋯ ∘ β^{0,l}: X^l ↠ X^{k,l}.
    pub fn column_quotient(&self, k: usize) -> ModuleMap {
        let mut out = self.entry(0, self.l).identity();
        for i in 0..k {
            out = self.beta(i, self.l).compose(&out);
        }
        out
    }

    pub fn verify(&self) -> Result<()> {
        for i in 0..self.l {
            for j in i..self.l {
                let (sq, ses) = self.square(i, j);
                ses.verify()?;
                if !sq.commutes() {
                    return Err(FrobError::NotExact(format!("quotient square ({i},{j}) does not commute")));
                }
            }
        }
        Ok(())
    }
}

pub fn build_quotient_grid(x: &ChainObject) -> Result<QuotientGrid> {
    let l = x.l();
    let mut g = QuotientGrid::empty(l);
    for j in 0..=l {
        g.entries[grid_index(l, 0, j)] = Some(x.term(j).clone());
        if j < l {
            g.alpha[grid_index(l, 0, j)] = Some(x.map(j));
        }
    }
    for i in 0..l {
        for j in i..l {
            let a = g.alpha(i, j).clone();
            let b = if j == i {
                ModuleMap::zero(&a.src, &LambdaModule::zero(x.n(), x.p()))
            } else {
                g.beta(i, j).clone()
            };
            let sq = pushout(&a, &b)?;
            sq.ses.verify()?;
            g.entries[grid_index(l, i + 1, j + 1)] = Some(sq.corner.clone());
            g.beta[grid_index(l, i, j + 1)] = Some(sq.f_prime.clone());
            if j > i {
                g.alpha[grid_index(l, i + 1, j)] = Some(sq.i_prime.clone());
            }
            g.squares[grid_index(l, i, j)] = Some((Square::from_pushout(&sq), sq.ses.clone()));
        }
    }
    Ok(g)
}

/// The dual grid: first row the base representing objects, I^j the
/// injective hull of X̃^{j,j} placed at (j+1, j), and pushouts below.
/// Every entry carries its duality record.
#[derive(Clone, Debug)]
pub struct DualGrid {
    pub l: usize,
    data: Vec<Option<DualityDatum>>,
    across: Vec<Option<ModuleMap>>,
    down: Vec<Option<ModuleMap>>,
    squares: Vec<Option<(Square, ShortExactSeq)>>,
}

impl DualGrid {
    pub fn datum(&self, i: usize, j: usize) -> &DualityDatum {
        self.data[grid_index(self.l, i, j)].as_ref().expect("dual entry i ≤ j + 1")
    }

    pub fn entry(&self, i: usize, j: usize) -> &LambdaModule {
        self.datum(i, j).rep.term(0)
    }

    /// β̃^{i,j}: X̃^{i,j} → X̃^{i,j+1}.
    pub fn across(&self, i: usize, j: usize) -> &ModuleMap {
        self.across[grid_index(self.l, i, j)].as_ref().expect("β̃^{i,j}")
    }

    /// α̃^{i,j}: X̃^{i,j} ↣ X̃^{i+1,j}.
    pub fn down(&self, i: usize, j: usize) -> &ModuleMap {
        self.down[grid_index(self.l, i, j)].as_ref().expect("α̃^{i,j}")
    }

    pub fn square(&self, i: usize, j: usize) -> &(Square, ShortExactSeq) {
        self.squares[grid_index(self.l, i, j)].as_ref().expect("dual square i ≤ j < l")
    }

    /// The rightmost column X̃^{0,l} ↣ ⋯ ↣ X̃^{l,l}.
    pub fn representing(&self) -> Result<ChainObject> {
        let l = self.l;
        let terms = (0..=l).map(|i| self.entry(i, l).clone()).collect();
        let maps = (0..l).map(|i| self.down(i, l).mat.clone()).collect();
        ChainObject::new(terms, maps)
    }

    pub fn verify(&self) -> Result<()> {
        for i in 0..self.l {
            if !self.entry(i + 1, i).is_projective() {
                return Err(FrobError::InvalidModule(format!("I^{i} is not free")));
            }
            for j in i..self.l {
                let (sq, ses) = self.square(i, j);
                ses.verify()?;
                if !sq.commutes() {
                    return Err(FrobError::NotExact(format!("dual square ({i},{j}) does not commute")));
                }
            }
            for j in i..=self.l {
                if !self.down(i, j).is_injective() {
                    return Err(FrobError::NotMonic(format!("α̃^{{{i},{j}}} is not injective")));
                }
            }
        }
        Ok(())
    }
}

pub fn build_dual_grid(q: &QuotientGrid) -> Result<DualGrid> {
    let l = q.l;
    let size = (l + 2) * (l + 2);
    let mut g = DualGrid { l, data: vec![None; size], across: vec![None; size], down: vec![None; size], squares: vec![None; size] };
    for j in 0..=l {
        g.data[grid_index(l, 0, j)] = Some(base_duality_datum(q.entry(0, j))?);
    }
    for j in 0..l {
        let a = single_map(q.alpha(0, j));
        let t = induced_dual_morphism(&a, g.datum(0, j), g.datum(0, j + 1))?;
        g.across[grid_index(l, 0, j)] = Some(t.component(0));
    }
    let (n, p) = (q.entry(0, 0).n(), q.entry(0, 0).p());
    let zero = single(&LambdaModule::zero(n, p));
    for i in 0..l {
        let hull = g.entry(i, i).injective_hull();
        let hull_rep = single(&hull.tgt);
        let hull_datum = DualityDatum { obj: zero.clone(), rep: hull_rep.clone(), functional: Functional::zero(stable_hom(&zero, &hull_rep)) };
        g.data[grid_index(l, i + 1, i)] = Some(hull_datum);
        g.down[grid_index(l, i, i)] = Some(hull);
        for j in i..l {
            let down = g.down(i, j).clone();
            let across = g.across(i, j).clone();
            let sq = pushout(&down, &across)?;
            sq.ses.verify()?;
            g.down[grid_index(l, i, j + 1)] = Some(sq.i_prime.clone());
            g.across[grid_index(l, i + 1, j)] = Some(sq.f_prime.clone());
            let (qsq, _) = q.square(i, j);
            // the dual square in the orientation of the quotient square
            let dual = Square {
                top: single_map(&across),
                left: single_map(&down),
                right: single_map(&sq.i_prime),
                bottom: single_map(&sq.f_prime),
            };
            let lower_left = if j == i {
                let c = g.datum(i + 1, i).clone();
                let bottom = ChainMap::zero(&c.obj, &qsq.bottom.tgt);
                let sq_fixed = Square { left: ChainMap::zero(&qsq.top.src, &c.obj), bottom, ..qsq.clone() };
                (sq_fixed, c)
            } else {
                (qsq.clone(), g.datum(i + 1, j).clone())
            };
            let (qsq, dc) = lower_left;
            let d = lift_square(&qsq, &dual, g.datum(i, j), g.datum(i, j + 1), &dc)?;
            g.data[grid_index(l, i + 1, j + 1)] = Some(d);
            g.squares[grid_index(l, i, j)] = Some((dual, sq.ses.clone()));
        }
    }
    Ok(g)
}

/// Both grids of a chain.
#[derive(Clone, Debug)]
pub struct RepGrid {
    pub quotient: QuotientGrid,
    pub dual: DualGrid,
}

pub fn build_rep_grid(x: &ChainObject) -> Result<RepGrid> {
    let quotient = build_quotient_grid(x)?;
    let dual = build_dual_grid(&quotient)?;
    Ok(RepGrid { quotient, dual })
}

#[derive(Clone, Debug, Serialize)]
struct GridCell {
    i: usize,
    j: usize,
    quotient: Option<Vec<usize>>,
    dual: Option<Vec<usize>>,
}

impl RepGrid {
    pub fn l(&self) -> usize {
        self.quotient.l
    }

    pub fn representing(&self) -> Result<ChainObject> {
        self.dual.representing()
    }

    pub fn verify(&self) -> Result<()> {
        self.quotient.verify()?;
        self.dual.verify()
    }

    /// Jordan types of every entry, as JSON.
    pub fn to_json(&self) -> serde_json::Value {
        let l = self.l();
        let mut cells = Vec::new();
        for i in 0..=l {
            for j in i.saturating_sub(1)..=l {
                let quotient = (i <= j).then(|| self.quotient.entry(i, j).jordan_type());
                let dual = Some(self.dual.entry(i, j).jordan_type());
                cells.push(GridCell { i, j, quotient, dual });
            }
        }
        serde_json::json!({ "l": l, "cells": cells })
    }

    /// Text art with Jordan types, quotient grid then dual grid.
    pub fn render(&self) -> String {
        let l = self.l();
        let show = |m: &LambdaModule| {
            let t = m.jordan_type();
            if t.is_empty() {
                "0".to_string()
            } else {
                format!("({})", t.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","))
            }
        };
        let mut out = String::new();
        for i in 0..=l {
            let row: Vec<String> = (0..=l).map(|j| if j < i { String::new() } else { show(self.quotient.entry(i, j)) }).collect();
            let _ = writeln!(out, "{}", row.iter().map(|c| format!("{c:>10}")).collect::<String>());
        }
        out.push('\n');
        for i in 0..=l {
            let row: Vec<String> = (0..=l).map(|j| if j + 1 < i { String::new() } else { show(self.dual.entry(i, j)) }).collect();
            let _ = writeln!(out, "{}", row.iter().map(|c| format!("{c:>10}")).collect::<String>());
        }
        out
    }
}

fn lift_functional_from(x: &ChainObject, xt: &ChainObject, column: &[DualityDatum], quotients: &[ModuleMap]) -> Result<Functional> {
    let m = x.l();
    if m == 0 {
        return Ok(column[0].functional.clone());
    }
    let xg = gamma(x, Interval::point(m - 1))?;
    let xtg = gamma(xt, Interval::point(m))?;
    let eg = lift_functional_from(&xg, &xtg, &column[..m], &quotients[..m])?;
    let (n, p) = (x.n(), x.p());

    // Ũ = (X̃^0 ↣ ⋯ ↣ X̃^{m-1} = X̃^{m-1}) and Ṽ = (0, …, 0, X̃^m)
    let mut ut_terms: Vec<LambdaModule> = (0..m).map(|k| xt.term(k).clone()).collect();
    ut_terms.push(xt.term(m - 1).clone());
    let mut ut_maps: Vec<Matrix> = xt.maps()[..m - 1].to_vec();
    ut_maps.push(Matrix::identity(xt.term(m - 1).dim(), p));
    let ut = ChainObject::new(ut_terms, ut_maps)?;
    let mut pc: Vec<Matrix> = (0..m).map(|k| Matrix::identity(xt.term(k).dim(), p)).collect();
    pc.push(xt.maps()[m - 1].clone());
    let pmap = ChainMap::new(ut.clone(), xt.clone(), pc)?;
    let mut vt_terms = vec![LambdaModule::zero(n, p); m];
    vt_terms.push(xt.term(m).clone());
    let vt_maps = (0..m).map(|k| Matrix::zeros(vt_terms[k + 1].dim(), 0, p)).collect();
    let vt = ChainObject::new(vt_terms, vt_maps)?;
    let mut qc: Vec<Matrix> = (0..m).map(|k| Matrix::zeros(xt.term(k).dim(), 0, p)).collect();
    qc.push(Matrix::identity(xt.term(m).dim(), p));
    let qmap = ChainMap::new(vt.clone(), xt.clone(), qc)?;

    let space = stable_hom(x, xt);
    let d = space.stable_dim();
    let mut lhs: Vec<ChainMap> = Vec::new();
    let mut rhs: Vec<u32> = Vec::new();
    let us = stable_hom(x, &ut).representatives();
    let contracted: Vec<ChainMap> = us.iter().map(|g| gamma_map(g, Interval::point(m - 1))).collect::<Result<_>>()?;
    rhs.extend(eg.eval_many(&contracted)?);
    lhs.extend(us.iter().map(|g| pmap.compose(g)));

    let top = &quotients[m];
    let sect = top.mat.right_inverse().map_err(|_| FrobError::NotEpic("column quotient is not onto".into()))?;
    let bottom = &column[m];
    let vs = stable_hom(x, &vt).representatives();
    let psis: Vec<ChainMap> = vs
        .iter()
        .map(|g| {
            let psi = g.comps[m].mul(&sect);
            ChainMap::from_parts(&bottom.obj, &bottom.rep, vec![psi])
        })
        .collect();
    rhs.extend(bottom.functional.eval_many(&psis)?);
    lhs.extend(vs.iter().map(|g| qmap.compose(g)));

    if d == 0 {
        if rhs.iter().any(|&v| v != 0) {
            return Err(FrobError::NoSolution("lift inconsistent: nonzero values on a zero space".into()));
        }
        return Ok(Functional::zero(space));
    }
    let coords = space.stable_coords_many(&lhs)?;
    let a = coords.transpose();
    let b = Matrix::from_flat(rhs.len(), 1, p, rhs);
    let sol = a.solve_all(&b).map_err(|_| FrobError::NoSolution("lift inconsistent".into()))?;
    Functional::new(space, sol.particular.col_vec(0))
}

/// The form e_X on Hom_stab(X, X̃), with X̃ the grid's representing chain.
pub fn lifted_functional(grid: &RepGrid) -> Result<Functional> {
    let l = grid.l();
    let x = chain_of_row(&grid.quotient)?;
    let xt = grid.representing()?;
    let column: Vec<DualityDatum> = (0..=l).map(|k| grid.dual.datum(k, l).clone()).collect();
    let quotients: Vec<ModuleMap> = (0..=l).map(|k| grid.quotient.column_quotient(k)).collect();
    lift_functional_from(&x, &xt, &column, &quotients)
}

fn chain_of_row(q: &QuotientGrid) -> Result<ChainObject> {
    let terms = (0..=q.l).map(|j| q.entry(0, j).clone()).collect();
    let maps = (0..q.l).map(|j| q.alpha(0, j).mat.clone()).collect();
    ChainObject::new(terms, maps)
}

/// e_X((0, …, 0, ψ ∘ β^{l-1,l} ⋯ β^{0,l})) = e_{X^{l,l}}(ψ̄) for every ψ
/// in a basis of Hom(X^{l,l}, X̃^l).
pub fn normalization_holds(grid: &RepGrid, e: &Functional) -> Result<bool> {
    let l = grid.l();
    let x = &e.space().src;
    let xt = &e.space().tgt;
    let bottom = grid.dual.datum(l, l);
    let quot = grid.quotient.column_quotient(l);
    let psis = hom_basis(grid.quotient.entry(l, l), xt.term(l));
    let mut top = Vec::new();
    let mut base = Vec::new();
    for psi in psis {
        let mut comps: Vec<Matrix> = (0..l).map(|k| Matrix::zeros(xt.term(k).dim(), x.term(k).dim(), x.p())).collect();
        comps.push(psi.mul(&quot.mat));
        top.push(ChainMap::new(x.clone(), xt.clone(), comps)?);
        base.push(ChainMap::from_parts(&bottom.obj, &bottom.rep, vec![psi]));
    }
    Ok(e.eval_many(&top)? == bottom.functional.eval_many(&base)?)
}

/// X̃ and e_X for a chain.
#[derive(Clone, Debug)]
pub struct Representation {
    pub grid: RepGrid,
    pub datum: DualityDatum,
}

pub fn represent(x: &ChainObject) -> Result<Representation> {
    let grid = build_rep_grid(x)?;
    let functional = lifted_functional(&grid)?;
    let rep = grid.representing()?;
    Ok(Representation { grid, datum: DualityDatum { obj: x.clone(), rep, functional } })
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingCheck {
    pub sample: usize,
    pub hom_to_rep: usize,
    pub hom_from_obj: usize,
    pub rank: usize,
    pub perfect: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepresentingReport {
    pub checks: Vec<PairingCheck>,
}

impl RepresentingReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.perfect)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairingCheck> {
        self.checks.iter().filter(|c| !c.perfect)
    }
}

/// For each Y: dim Hom_stab(Y, X̃) = dim Hom_stab(X, Y) and the pairing
/// (g, f) ↦ e_X(g ∘ f) is perfect.
pub fn verify_representing(datum: &DualityDatum, samples: &[ChainObject]) -> Result<RepresentingReport> {
    let mut checks = Vec::new();
    for (i, y) in samples.iter().enumerate() {
        let m = datum.pairing(y)?;
        let rank = m.rank();
        checks.push(PairingCheck {
            sample: i,
            hom_to_rep: m.rows(),
            hom_from_obj: m.cols(),
            rank,
            perfect: is_perfect_pairing(&m),
        });
    }
    Ok(RepresentingReport { checks })
}

/// Whether two parallel maps agree stably.
pub fn dual_maps_agree(f: &ChainMap, g: &ChainMap) -> bool {
    stable_hom(&f.src, &f.tgt).stably_equal(f, g)
}
