//! Finite-dimensional modules over Λ = k[x]/(x^n) and their maps.
//!
//! A module is a vector space with a nilpotent operator (multiplication by
//! x). Free modules Λ^b are the projective-injective objects. Hulls and
//! covers are taken in the Jordan basis produced by [`LambdaModule::jordan`].

use crate::error::{FrobError, Result};
use crate::linalg::{complete_within, independent_indices, span_rank, Matrix};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "crate::io::ModuleRepr", into = "crate::io::ModuleRepr")]
pub struct LambdaModule {
    n: usize,
    action: Matrix,
}

/// Jordan decomposition: blocks in decreasing size, basis columns
/// (v, xv, ..., x^{d-1}v) per block.
#[derive(Clone, Debug)]
pub struct Jordan {
    pub blocks: Vec<usize>,
    pub basis: Matrix,
    pub basis_inv: Matrix,
}

impl Jordan {
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.blocks.len());
        let mut acc = 0;
        for &b in &self.blocks {
            off.push(acc);
            acc += b;
        }
        off
    }
}

impl LambdaModule {
    pub fn new(n: usize, action: Matrix) -> Result<Self> {
        if n == 0 {
            return Err(FrobError::InvalidModule("nilpotency order must be positive".into()));
        }
        if !action.is_square() {
            return Err(FrobError::InvalidModule(format!("action is {}x{}", action.rows(), action.cols())));
        }
        if !action.pow(n).is_zero() {
            return Err(FrobError::InvalidModule(format!("action^{n} is nonzero")));
        }
        Ok(LambdaModule { n, action })
    }

    pub fn zero(n: usize, p: u32) -> Self {
        LambdaModule { n, action: Matrix::zeros(0, 0, p) }
    }

    /// ⊕ k[x]/(x^d) over `parts`, each block with basis 1, x, ..., x^{d-1}.
    pub fn from_partition(n: usize, parts: &[usize], p: u32) -> Self {
        assert!(parts.iter().all(|&d| d >= 1 && d <= n), "block sizes must lie in 1..=n");
        let dim: usize = parts.iter().sum();
        let mut a = Matrix::zeros(dim, dim, p);
        let mut off = 0;
        for &d in parts {
            for j in 0..d - 1 {
                a.set(off + j + 1, off + j, 1);
            }
            off += d;
        }
        LambdaModule { n, action: a }
    }

    pub fn free(n: usize, rank: usize, p: u32) -> Self {
        Self::from_partition(n, &vec![n; rank], p)
    }

    /// The simple module k = Λ/(x).
    pub fn simple(n: usize, p: u32) -> Self {
        Self::from_partition(n, &[1], p)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> u32 {
        self.action.p()
    }
    pub fn dim(&self) -> usize {
        self.action.rows()
    }
    pub fn action(&self) -> &Matrix {
        &self.action
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn direct_sum(&self, other: &LambdaModule) -> LambdaModule {
        assert_eq!(self.n, other.n);
        LambdaModule { n: self.n, action: self.action.block_diag(&other.action) }
    }

    pub fn direct_sum_all(mods: &[LambdaModule], n: usize, p: u32) -> LambdaModule {
        mods.iter().fold(LambdaModule::zero(n, p), |acc, m| acc.direct_sum(m))
    }

    pub fn jordan(&self) -> Jordan {
        let d = self.dim();
        let p = self.p();
        let n = self.n;
        let mut powers = vec![Matrix::identity(d, p)];
        for s in 1..=n {
            let next = powers[s - 1].mul(&self.action);
            powers.push(next);
        }
        let ks: Vec<Matrix> = powers.iter().map(|m| m.kernel_basis()).collect();
        let mut blocks = Vec::new();
        let mut cols = Vec::new();
        for s in (1..=n).rev() {
            let upper = if s < n { self.action.mul(&ks[s + 1]) } else { Matrix::zeros(d, 0, p) };
            let w = ks[s - 1].hstack(&upper);
            let gens = complete_within(&w, &ks[s]);
            for g in 0..gens.cols() {
                blocks.push(s);
                let mut cur = gens.select_cols(&[g]);
                for _ in 0..s {
                    let next = self.action.mul(&cur);
                    cols.push(cur);
                    cur = next;
                }
            }
        }
        let basis = Matrix::hcat(&cols, d, p);
        let basis_inv = basis.inverse().expect("Jordan chains form a basis");
        Jordan { blocks, basis, basis_inv }
    }

    /// Block sizes, decreasing.
    pub fn jordan_type(&self) -> Vec<usize> {
        // ranks of powers determine the partition
        let mut ranks = vec![self.dim()];
        let mut pw = Matrix::identity(self.dim(), self.p());
        for _ in 1..=self.n + 1 {
            pw = pw.mul(&self.action);
            ranks.push(pw.rank());
        }
        let mut out = Vec::new();
        for s in (1..=self.n).rev() {
            // blocks of size >= s: r_{s-1} - r_s
            let ge = |t: usize| ranks[t - 1] - ranks[t];
            let exact = ge(s) - if s < self.n { ge(s + 1) } else { 0 };
            out.extend(std::iter::repeat_n(s, exact));
        }
        out
    }

    /// Jordan type with the free summands removed.
    pub fn stable_type(&self) -> Vec<usize> {
        self.jordan_type().into_iter().filter(|&d| d < self.n).collect()
    }

    pub fn is_projective(&self) -> bool {
        if self.dim() == 0 {
            return true;
        }
        self.n * self.action.pow(self.n - 1).rank() == self.dim()
    }

    pub fn identity(&self) -> ModuleMap {
        ModuleMap { src: self.clone(), tgt: self.clone(), mat: Matrix::identity(self.dim(), self.p()) }
    }

    /// The fixed admissible monic into a free module; identity when free.
    pub fn injective_hull(&self) -> ModuleMap {
        if self.is_projective() {
            return self.identity();
        }
        let j = self.jordan();
        let n = self.n;
        let hull = LambdaModule::free(n, j.blocks.len(), self.p());
        let mut e = Matrix::zeros(hull.dim(), self.dim(), self.p());
        for (bi, (&d, off)) in j.blocks.iter().zip(j.offsets()).enumerate() {
            for jj in 0..d {
                e.set(bi * n + n - d + jj, off + jj, 1);
            }
        }
        ModuleMap { src: self.clone(), tgt: hull, mat: e.mul(&j.basis_inv) }
    }

    /// The fixed admissible epic from a free module; identity when free.
    pub fn projective_cover(&self) -> ModuleMap {
        if self.is_projective() {
            return self.identity();
        }
        let j = self.jordan();
        let n = self.n;
        let cover = LambdaModule::free(n, j.blocks.len(), self.p());
        let mut f = Matrix::zeros(self.dim(), cover.dim(), self.p());
        for (bi, (&d, off)) in j.blocks.iter().zip(j.offsets()).enumerate() {
            for jj in 0..d {
                f.set(off + jj, bi * n + jj, 1);
            }
        }
        ModuleMap { src: cover, tgt: self.clone(), mat: j.basis.mul(&f) }
    }

    /// M ↣ I(M) ↠ ΣM.
    pub fn suspension_ses(&self) -> ShortExactSeq {
        let i = self.injective_hull();
        let c = cokernel(&i);
        ShortExactSeq { mono: i, epi: c.proj }
    }

    /// ΩM ↣ P(M) ↠ M.
    pub fn loop_ses(&self) -> ShortExactSeq {
        let p = self.projective_cover();
        let k = kernel(&p);
        ShortExactSeq { mono: k.incl, epi: p }
    }

    pub fn suspend(&self) -> LambdaModule {
        self.suspension_ses().epi.tgt
    }

    pub fn loop_module(&self) -> LambdaModule {
        self.loop_ses().mono.src
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleMap {
    pub src: LambdaModule,
    pub tgt: LambdaModule,
    pub mat: Matrix,
}

impl ModuleMap {
    pub fn new(src: LambdaModule, tgt: LambdaModule, mat: Matrix) -> Result<Self> {
        if mat.rows() != tgt.dim() || mat.cols() != src.dim() {
            return Err(FrobError::NotLinear(format!(
                "matrix {}x{} for map of dims {} -> {}",
                mat.rows(),
                mat.cols(),
                src.dim(),
                tgt.dim()
            )));
        }
        if mat.mul(&src.action) != tgt.action.mul(&mat) {
            return Err(FrobError::NotLinear("does not commute with x".into()));
        }
        Ok(ModuleMap { src, tgt, mat })
    }

    /// Caller guarantees Λ-linearity; checked in debug builds.
    pub fn from_parts(src: &LambdaModule, tgt: &LambdaModule, mat: Matrix) -> Self {
        debug_assert_eq!((mat.rows(), mat.cols()), (tgt.dim(), src.dim()));
        debug_assert!(mat.mul(&src.action) == tgt.action.mul(&mat), "map is not Λ-linear");
        ModuleMap { src: src.clone(), tgt: tgt.clone(), mat }
    }

    pub fn zero(src: &LambdaModule, tgt: &LambdaModule) -> Self {
        ModuleMap { src: src.clone(), tgt: tgt.clone(), mat: Matrix::zeros(tgt.dim(), src.dim(), src.p()) }
    }

    /// self ∘ f
    pub fn compose(&self, f: &ModuleMap) -> ModuleMap {
        assert_eq!(f.tgt.dim(), self.src.dim(), "compose: dims");
        ModuleMap { src: f.src.clone(), tgt: self.tgt.clone(), mat: self.mat.mul(&f.mat) }
    }

    pub fn add(&self, o: &ModuleMap) -> ModuleMap {
        ModuleMap { src: self.src.clone(), tgt: self.tgt.clone(), mat: self.mat.add(&o.mat) }
    }

    pub fn sub(&self, o: &ModuleMap) -> ModuleMap {
        ModuleMap { src: self.src.clone(), tgt: self.tgt.clone(), mat: self.mat.sub(&o.mat) }
    }

    pub fn neg(&self) -> ModuleMap {
        ModuleMap { src: self.src.clone(), tgt: self.tgt.clone(), mat: self.mat.neg() }
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        ModuleMap { src: self.src.clone(), tgt: self.tgt.clone(), mat: self.mat.scale(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn is_injective(&self) -> bool {
        self.mat.rank() == self.src.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.mat.rank() == self.tgt.dim()
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && self.mat.is_identity()
    }

    /// (u w): A ⊕ B → C
    pub fn row(u: &ModuleMap, w: &ModuleMap) -> ModuleMap {
        ModuleMap { src: u.src.direct_sum(&w.src), tgt: u.tgt.clone(), mat: u.mat.hstack(&w.mat) }
    }

    /// (u; w): A → B ⊕ C
    pub fn column(u: &ModuleMap, w: &ModuleMap) -> ModuleMap {
        ModuleMap { src: u.src.clone(), tgt: u.tgt.direct_sum(&w.tgt), mat: u.mat.vstack(&w.mat) }
    }

    pub fn direct_sum(&self, o: &ModuleMap) -> ModuleMap {
        ModuleMap { src: self.src.direct_sum(&o.src), tgt: self.tgt.direct_sum(&o.tgt), mat: self.mat.block_diag(&o.mat) }
    }
}

/// Inclusion of the summand `which` (0 or 1) of a ⊕ b.
pub fn injection(a: &LambdaModule, b: &LambdaModule, which: usize) -> ModuleMap {
    let s = a.direct_sum(b);
    let p = a.p();
    let mat = if which == 0 {
        Matrix::identity(a.dim(), p).vstack(&Matrix::zeros(b.dim(), a.dim(), p))
    } else {
        Matrix::zeros(a.dim(), b.dim(), p).vstack(&Matrix::identity(b.dim(), p))
    };
    let src = if which == 0 { a.clone() } else { b.clone() };
    ModuleMap { src, tgt: s, mat }
}

/// Projection of a ⊕ b onto summand `which`.
pub fn projection(a: &LambdaModule, b: &LambdaModule, which: usize) -> ModuleMap {
    let i = injection(a, b, which);
    ModuleMap { src: i.tgt, tgt: i.src, mat: i.mat.transpose() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortExactSeq {
    pub mono: ModuleMap,
    pub epi: ModuleMap,
}

impl ShortExactSeq {
    pub fn new(mono: ModuleMap, epi: ModuleMap) -> Result<Self> {
        let s = ShortExactSeq { mono, epi };
        s.verify()?;
        Ok(s)
    }

    pub fn verify(&self) -> Result<()> {
        if self.mono.tgt != self.epi.src {
            return Err(FrobError::NotExact("middle terms differ".into()));
        }
        if !self.mono.is_injective() {
            return Err(FrobError::NotMonic("first map of sequence".into()));
        }
        if !self.epi.is_surjective() {
            return Err(FrobError::NotEpic("second map of sequence".into()));
        }
        if !self.epi.compose(&self.mono).is_zero() {
            return Err(FrobError::NotExact("composite is nonzero".into()));
        }
        if self.mono.src.dim() + self.epi.tgt.dim() != self.mono.tgt.dim() {
            return Err(FrobError::NotExact("dimensions do not add up".into()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, o: &ShortExactSeq) -> ShortExactSeq {
        ShortExactSeq { mono: self.mono.direct_sum(&o.mono), epi: self.epi.direct_sum(&o.epi) }
    }
}

/// Cokernel on coset representatives: `section` is a linear (not Λ-linear)
/// right inverse of `proj`.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub module: LambdaModule,
    pub proj: ModuleMap,
    pub section: Matrix,
}

pub fn cokernel(f: &ModuleMap) -> Cokernel {
    let b = &f.tgt;
    let s = f.mat.image_basis();
    let r = crate::linalg::quotient_basis(&s, b.dim()).expect("image basis is independent");
    let full = s.hstack(&r);
    let inv = full.inverse().expect("image plus complement is a basis");
    let q = inv.submatrix(s.cols(), r.cols(), 0, b.dim());
    let action = q.mul(&b.action).mul(&r);
    let module = LambdaModule { n: b.n, action };
    let proj = ModuleMap { src: b.clone(), tgt: module.clone(), mat: q };
    debug_assert!(proj.mat.mul(&b.action) == module.action.mul(&proj.mat));
    Cokernel { module, proj, section: r }
}

/// Kernel on a column basis: `retraction` is a linear left inverse of `incl`.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub module: LambdaModule,
    pub incl: ModuleMap,
    pub retraction: Matrix,
}

pub fn kernel(f: &ModuleMap) -> Kernel {
    let a = &f.src;
    let k = f.mat.kernel_basis();
    let l = k.left_inverse().expect("kernel basis is independent");
    let action = l.mul(&a.action).mul(&k);
    let module = LambdaModule { n: a.n, action };
    let incl = ModuleMap { src: module.clone(), tgt: a.clone(), mat: k };
    debug_assert!(incl.mat.mul(&module.action) == a.action.mul(&incl.mat));
    Kernel { module, incl, retraction: l }
}

/// Bicartesian square obtained by pushing the monic `i: A ↣ B` along `f: A → A'`.
/// Legs: `f_prime: B → D` and `i_prime: A' ↣ D`.
#[derive(Clone, Debug)]
pub struct PushoutSquare {
    pub i: ModuleMap,
    pub f: ModuleMap,
    pub corner: LambdaModule,
    pub f_prime: ModuleMap,
    pub i_prime: ModuleMap,
    /// A ↣ B ⊕ A' ↠ D
    pub ses: ShortExactSeq,
    reps: Matrix,
}

impl PushoutSquare {
    /// The map D → Z induced by u: B → Z and w: A' → Z with u i = w f.
    pub fn induced(&self, u: &ModuleMap, w: &ModuleMap) -> Result<ModuleMap> {
        if u.compose(&self.i).mat != w.compose(&self.f).mat {
            return Err(FrobError::Precondition("pushout cocone does not commute".into()));
        }
        let mat = u.mat.hstack(&w.mat).mul(&self.reps);
        Ok(ModuleMap::from_parts(&self.corner, &u.tgt, mat))
    }
}

pub fn pushout(i: &ModuleMap, f: &ModuleMap) -> Result<PushoutSquare> {
    if i.src != f.src {
        return Err(FrobError::Precondition("pushout legs have different sources".into()));
    }
    if !i.is_injective() {
        return Err(FrobError::NotMonic("pushout along a non-injective map".into()));
    }
    let p = i.src.p();
    let (b, a1) = (&i.tgt, &f.tgt);
    let mono = ModuleMap::column(i, &f.neg());
    if i.is_identity() {
        let epi = ModuleMap::row(f, &a1.identity());
        let reps = Matrix::zeros(b.dim(), a1.dim(), p).vstack(&Matrix::identity(a1.dim(), p));
        return Ok(PushoutSquare {
            i: i.clone(),
            f: f.clone(),
            corner: a1.clone(),
            f_prime: f.clone(),
            i_prime: a1.identity(),
            ses: ShortExactSeq { mono, epi },
            reps,
        });
    }
    if f.is_identity() {
        let epi = ModuleMap::row(&b.identity(), i);
        let reps = Matrix::identity(b.dim(), p).vstack(&Matrix::zeros(a1.dim(), b.dim(), p));
        return Ok(PushoutSquare {
            i: i.clone(),
            f: f.clone(),
            corner: b.clone(),
            f_prime: b.identity(),
            i_prime: i.clone(),
            ses: ShortExactSeq { mono, epi },
            reps,
        });
    }
    let c = cokernel(&mono);
    let q = &c.proj.mat;
    let f_prime = ModuleMap { src: b.clone(), tgt: c.module.clone(), mat: q.submatrix(0, q.rows(), 0, b.dim()) };
    let i_prime = ModuleMap { src: a1.clone(), tgt: c.module.clone(), mat: q.submatrix(0, q.rows(), b.dim(), a1.dim()) };
    Ok(PushoutSquare {
        i: i.clone(),
        f: f.clone(),
        corner: c.module.clone(),
        f_prime,
        i_prime,
        ses: ShortExactSeq { mono, epi: c.proj },
        reps: c.section,
    })
}

/// Bicartesian square obtained by pulling the epic `p: B ↠ C` back along `g: C' → C`.
/// Legs: `g_prime: D → B` and `p_prime: D ↠ C'`.
#[derive(Clone, Debug)]
pub struct PullbackSquare {
    pub p: ModuleMap,
    pub g: ModuleMap,
    pub corner: LambdaModule,
    pub g_prime: ModuleMap,
    pub p_prime: ModuleMap,
    /// D ↣ B ⊕ C' ↠ C
    pub ses: ShortExactSeq,
    retraction: Matrix,
}

impl PullbackSquare {
    /// The map Z → D induced by u: Z → B and w: Z → C' with p u = g w.
    pub fn induced(&self, u: &ModuleMap, w: &ModuleMap) -> Result<ModuleMap> {
        if self.p.compose(u).mat != self.g.compose(w).mat {
            return Err(FrobError::Precondition("pullback cone does not commute".into()));
        }
        let mat = self.retraction.mul(&u.mat.vstack(&w.mat));
        Ok(ModuleMap::from_parts(&u.src, &self.corner, mat))
    }
}

pub fn pullback(pm: &ModuleMap, g: &ModuleMap) -> Result<PullbackSquare> {
    if pm.tgt != g.tgt {
        return Err(FrobError::Precondition("pullback legs have different targets".into()));
    }
    if !pm.is_surjective() {
        return Err(FrobError::NotEpic("pullback along a non-surjective map".into()));
    }
    let pr = pm.src.p();
    let (b, c1) = (&pm.src, &g.src);
    let epi = ModuleMap::row(pm, &g.neg());
    if pm.is_identity() {
        let mono = ModuleMap::column(g, &c1.identity());
        let retraction = Matrix::zeros(c1.dim(), b.dim(), pr).hstack(&Matrix::identity(c1.dim(), pr));
        return Ok(PullbackSquare {
            p: pm.clone(),
            g: g.clone(),
            corner: c1.clone(),
            g_prime: g.clone(),
            p_prime: c1.identity(),
            ses: ShortExactSeq { mono, epi },
            retraction,
        });
    }
    if g.is_identity() {
        let mono = ModuleMap::column(&b.identity(), pm);
        let retraction = Matrix::identity(b.dim(), pr).hstack(&Matrix::zeros(b.dim(), c1.dim(), pr));
        return Ok(PullbackSquare {
            p: pm.clone(),
            g: g.clone(),
            corner: b.clone(),
            g_prime: b.identity(),
            p_prime: pm.clone(),
            ses: ShortExactSeq { mono, epi },
            retraction,
        });
    }
    let k = kernel(&epi);
    let km = &k.incl.mat;
    let g_prime = ModuleMap { src: k.module.clone(), tgt: b.clone(), mat: km.submatrix(0, b.dim(), 0, km.cols()) };
    let p_prime = ModuleMap { src: k.module.clone(), tgt: c1.clone(), mat: km.submatrix(b.dim(), c1.dim(), 0, km.cols()) };
    Ok(PullbackSquare {
        p: pm.clone(),
        g: g.clone(),
        corner: k.module.clone(),
        g_prime,
        p_prime,
        ses: ShortExactSeq { mono: k.incl, epi },
        retraction: k.retraction,
    })
}

/// Solid 3×3 diagram of the Noether lemma: rows `top`, `middle`, `bottom`
/// and the first two columns `left`, `center`.
#[derive(Clone, Debug)]
pub struct NoetherGrid {
    pub top: ShortExactSeq,
    pub middle: ShortExactSeq,
    pub bottom: ShortExactSeq,
    pub left: ShortExactSeq,
    pub center: ShortExactSeq,
}

/// The unique third column C' ↣ C ↠ C'' making the grid commute.
pub fn noether_complete(g: &NoetherGrid) -> Result<ShortExactSeq> {
    for s in [&g.top, &g.middle, &g.bottom, &g.left, &g.center] {
        s.verify()?;
    }
    if g.middle.mono.compose(&g.left.mono).mat != g.center.mono.compose(&g.top.mono).mat {
        return Err(FrobError::NotExact("upper-left square does not commute".into()));
    }
    if g.center.epi.compose(&g.middle.mono).mat != g.bottom.mono.compose(&g.left.epi).mat {
        return Err(FrobError::NotExact("lower-left square does not commute".into()));
    }
    let factor = |epi: &ModuleMap, target: &ModuleMap| -> Result<ModuleMap> {
        // u with u ∘ epi = target
        let r = epi.mat.right_inverse()?;
        let u = target.mat.mul(&r);
        if u.mul(&epi.mat) != target.mat {
            return Err(FrobError::NotExact("map does not factor through the cokernel".into()));
        }
        ModuleMap::new(epi.tgt.clone(), target.tgt.clone(), u)
    };
    let u = factor(&g.top.epi, &g.middle.epi.compose(&g.center.mono))?;
    let v = factor(&g.middle.epi, &g.bottom.epi.compose(&g.center.epi))?;
    ShortExactSeq::new(u, v)
}

/// Basis of Hom_Λ(a, b): each Jordan generator of `a` goes to a basis
/// vector of ker x^d in `b`.
pub fn hom_basis(a: &LambdaModule, b: &LambdaModule) -> Vec<Matrix> {
    let ja = a.jordan();
    hom_basis_with(a, &ja, b)
}

pub fn hom_basis_with(a: &LambdaModule, ja: &Jordan, b: &LambdaModule) -> Vec<Matrix> {
    let p = a.p();
    let nb = b.action();
    let mut out = Vec::new();
    let mut pow_cache: Vec<Matrix> = vec![Matrix::identity(b.dim(), p)];
    for (&d, off) in ja.blocks.iter().zip(ja.offsets()) {
        while pow_cache.len() <= d {
            let next = pow_cache.last().unwrap().mul(nb);
            pow_cache.push(next);
        }
        let kb = pow_cache[d].kernel_basis();
        for c in 0..kb.cols() {
            let mut h = Matrix::zeros(b.dim(), a.dim(), p);
            let mut cur = kb.select_cols(&[c]);
            for jj in 0..d {
                h.put(0, off + jj, &cur);
                cur = nb.mul(&cur);
            }
            out.push(h.mul(&ja.basis_inv));
        }
    }
    out
}

/// Hom space with the subspace of maps factoring through a projective.
#[derive(Clone, Debug)]
pub struct StableModuleHom {
    pub full: Vec<Matrix>,
    pub factoring: Vec<Matrix>,
}

impl StableModuleHom {
    pub fn stable_dim(&self) -> usize {
        self.full.len() - self.factoring.len()
    }
}

/// Factoring subspace = p_b ∘ Hom(a, P(b)).
pub fn stable_hom_basis(a: &LambdaModule, b: &LambdaModule) -> StableModuleHom {
    let ja = a.jordan();
    let full = hom_basis_with(a, &ja, b);
    let factoring = factoring_maps(a, &ja, b);
    StableModuleHom { full, factoring }
}

/// A basis of the maps a → b factoring through a projective.
pub fn factoring_maps(a: &LambdaModule, ja: &Jordan, b: &LambdaModule) -> Vec<Matrix> {
    let pb = b.projective_cover();
    let gens: Vec<Matrix> = hom_basis_with(a, ja, &pb.src).iter().map(|h| pb.mat.mul(h)).collect();
    let idx = independent_indices(&gens);
    idx.into_iter().map(|i| gens[i].clone()).collect()
}

pub fn stable_dim(a: &LambdaModule, b: &LambdaModule) -> usize {
    let s = stable_hom_basis(a, b);
    debug_assert_eq!(s.factoring.len(), span_rank(&s.factoring));
    s.stable_dim()
}

/// The Λ-map a → Λ whose coefficient of x^{n-1} is the functional `lam` (1 × dim a).
pub fn socle_lift(lam: &Matrix, a: &LambdaModule) -> Matrix {
    let n = a.n();
    let mut out = Matrix::zeros(n, a.dim(), a.p());
    let mut row = lam.clone();
    for j in (0..n).rev() {
        out.put(j, 0, &row);
        row = row.mul(a.action());
    }
    out
}

/// Extend h: A → F along a monic m: A ↣ B, for F free.
pub fn extend_to_injective(m: &ModuleMap, h: &ModuleMap) -> Result<ModuleMap> {
    if m.src.dim() != h.src.dim() {
        return Err(FrobError::Precondition("extension: sources differ".into()));
    }
    if !h.tgt.is_projective() {
        return Err(FrobError::Precondition("extension target is not injective".into()));
    }
    if !m.is_injective() {
        return Err(FrobError::NotMonic("extension along a non-injective map".into()));
    }
    let f = &h.tgt;
    let n = f.n();
    let p = f.p();
    if f.dim() == 0 {
        return Ok(ModuleMap::zero(&m.tgt, f));
    }
    let jf = f.jordan();
    let hs = jf.basis_inv.mul(&h.mat);
    let l = m.mat.left_inverse()?;
    let mut gs = Matrix::zeros(f.dim(), m.tgt.dim(), p);
    for c in 0..jf.blocks.len() {
        let lam = hs.submatrix(c * n + n - 1, 1, 0, hs.cols());
        let lam_b = lam.mul(&l);
        gs.put(c * n, 0, &socle_lift(&lam_b, &m.tgt));
    }
    let g = ModuleMap::from_parts(&m.tgt, f, jf.basis.mul(&gs));
    if g.compose(m).mat != h.mat {
        return Err(FrobError::NoSolution("extension does not restrict correctly".into()));
    }
    Ok(g)
}

/// Lift h: P → C through an epic e: B ↠ C, for P free.
pub fn lift_to_projective(h: &ModuleMap, e: &ModuleMap) -> Result<ModuleMap> {
    if !h.src.is_projective() {
        return Err(FrobError::Precondition("lifting source is not projective".into()));
    }
    if h.tgt.dim() != e.tgt.dim() {
        return Err(FrobError::Precondition("lifting: targets differ".into()));
    }
    let pmod = &h.src;
    let b = &e.src;
    let p = pmod.p();
    if pmod.dim() == 0 {
        return Ok(ModuleMap::zero(pmod, b));
    }
    let jp = pmod.jordan();
    let mut hm = Matrix::zeros(b.dim(), pmod.dim(), p);
    for (&d, off) in jp.blocks.iter().zip(jp.offsets()) {
        let y = h.mat.mul(&jp.basis.select_cols(&[off]));
        let mut z = e.mat.solve(&y).map_err(|_| FrobError::NotEpic("lifting through a non-surjective map".into()))?;
        for jj in 0..d {
            hm.put(0, off + jj, &z);
            z = b.action().mul(&z);
        }
    }
    let g = ModuleMap::from_parts(pmod, b, hm.mul(&jp.basis_inv));
    if e.compose(&g).mat != h.mat {
        return Err(FrobError::NoSolution("lift does not project correctly".into()));
    }
    Ok(g)
}

/// A Λ-linear left inverse of a monic into a module, when its source is free.
pub fn retraction(m: &ModuleMap) -> Result<ModuleMap> {
    extend_to_injective(m, &m.src.identity())
}

/// A Λ-linear right inverse of an epic onto a free module.
pub fn section(e: &ModuleMap) -> Result<ModuleMap> {
    lift_to_projective(&e.tgt.identity(), e)
}
