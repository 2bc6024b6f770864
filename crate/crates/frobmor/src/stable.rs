//! The stable category of chains: hom spaces modulo maps through projective
//! chains, Σ and Σ⁻¹, cones, cocones, and triangles with witnesses.

use crate::chain::{
    chain_cokernel, chain_extend, chain_injective_envelope, chain_lift, chain_projective_cover, chain_pullback,
    chain_pushout, induced_on_cokernels, is_projective_chain, ChainMap, ChainObject, ChainPullback, ChainPushout,
    ChainSES, Cover, Envelope,
};
use crate::error::{FrobError, Result};
use crate::linalg::Matrix;
use crate::module::{cokernel, hom_basis, hom_basis_with};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

fn flat_len(x: &ChainObject, y: &ChainObject) -> usize {
    (0..=x.l()).map(|k| x.term(k).dim() * y.term(k).dim()).sum()
}

/// Columns are flattened chain maps X → Y.
fn columns(maps: &[ChainMap], len: usize, p: u32) -> Matrix {
    let mut out = Matrix::zeros(len, maps.len(), p);
    for (j, m) in maps.iter().enumerate() {
        for (i, v) in m.flatten().into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    out
}

fn combine(x: &ChainObject, y: &ChainObject, basis: &[ChainMap], coeffs: &[u32]) -> ChainMap {
    let mut out = ChainMap::zero(x, y);
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            out = out.add(&b.scale(c));
        }
    }
    out
}

/// Basis of chain maps X → Y, from termwise Hom bases and the commuting-square constraints.
pub fn chain_hom_basis(x: &ChainObject, y: &ChainObject) -> Vec<ChainMap> {
    assert_eq!(x.l(), y.l(), "hom between chains of different lengths");
    let l = x.l();
    let p = x.p();
    let bases: Vec<Vec<Matrix>> = (0..=l).map(|k| hom_basis_with(x.term(k), &x.term(k).jordan(), y.term(k))).collect();
    let mut col_off = vec![0];
    for b in &bases {
        col_off.push(col_off.last().unwrap() + b.len());
    }
    let ncols = *col_off.last().unwrap();
    let nrows: usize = (0..l).map(|k| y.term(k + 1).dim() * x.term(k).dim()).sum();
    let mut a = Matrix::zeros(nrows, ncols, p);
    let mut row_off = 0;
    for k in 0..l {
        let (r, c) = (y.term(k + 1).dim(), x.term(k).dim());
        for (i, h) in bases[k].iter().enumerate() {
            let v = y.maps()[k].mul(h).neg();
            for (e, &val) in v.data().iter().enumerate() {
                a.set(row_off + e, col_off[k] + i, val);
            }
        }
        for (i, h) in bases[k + 1].iter().enumerate() {
            let v = h.mul(&x.maps()[k]);
            for (e, &val) in v.data().iter().enumerate() {
                a.set(row_off + e, col_off[k + 1] + i, val);
            }
        }
        row_off += r * c;
    }
    let ker = a.kernel_basis();
    (0..ker.cols())
        .map(|j| {
            let comps = (0..=l)
                .map(|k| {
                    let mut m = Matrix::zeros(y.term(k).dim(), x.term(k).dim(), p);
                    for (i, h) in bases[k].iter().enumerate() {
                        let c = ker.get(col_off[k] + i, j);
                        if c != 0 {
                            m = m.add(&h.scale(c));
                        }
                    }
                    m
                })
                .collect();
            ChainMap::from_parts(x, y, comps)
        })
        .collect()
}

/// A basis of the chain maps X → Y factoring through a projective chain,
/// as composites with the cover P(Y) ↠ Y. The summand μ(P(Y^k)) of the cover
/// receives maps determined by Hom(X^l / X^{k-1}, P(Y^k)).
pub fn factoring_basis(x: &ChainObject, y: &ChainObject) -> Vec<ChainMap> {
    let l = x.l();
    let p = x.p();
    let mut gens = Vec::new();
    for k in 0..=l {
        let pc = y.term(k).projective_cover();
        if pc.src.dim() == 0 {
            continue;
        }
        let (quot, qmat) = if k == 0 {
            (x.term(l).clone(), Matrix::identity(x.term(l).dim(), p))
        } else {
            let c = cokernel(&x.composite_map(k - 1, l));
            (c.module, c.proj.mat)
        };
        for phi in hom_basis(&quot, &pc.src) {
            let core = pc.mat.mul(&phi).mul(&qmat);
            let comps = (0..=l)
                .map(|j| {
                    if j < k {
                        Matrix::zeros(y.term(j).dim(), x.term(j).dim(), p)
                    } else {
                        y.composite(k, j).mul(&core).mul(&x.composite(j, l))
                    }
                })
                .collect();
            gens.push(ChainMap::from_parts(x, y, comps));
        }
    }
    let len = flat_len(x, y);
    let piv = columns(&gens, len, p).rref().pivots;
    piv.into_iter().map(|i| gens[i].clone()).collect()
}

#[derive(Clone, Debug)]
pub struct StableHomSpace {
    pub src: ChainObject,
    pub tgt: ChainObject,
    pub full_basis: Vec<ChainMap>,
    pub factoring_basis: Vec<ChainMap>,
    reps: Vec<usize>,
}

pub fn stable_hom(x: &ChainObject, y: &ChainObject) -> StableHomSpace {
    let full_basis = chain_hom_basis(x, y);
    let factoring_basis = factoring_basis(x, y);
    let len = flat_len(x, y);
    let p = x.p();
    let k = factoring_basis.len();
    let piv = columns(&factoring_basis, len, p).hstack(&columns(&full_basis, len, p)).rref().pivots;
    debug_assert!(piv.iter().take_while(|&&c| c < k).count() == k);
    let reps = piv.into_iter().filter(|&c| c >= k).map(|c| c - k).collect();
    StableHomSpace { src: x.clone(), tgt: y.clone(), full_basis, factoring_basis, reps }
}

impl StableHomSpace {
    pub fn full_dim(&self) -> usize {
        self.full_basis.len()
    }
    pub fn stable_dim(&self) -> usize {
        self.reps.len()
    }
    fn len(&self) -> usize {
        flat_len(&self.src, &self.tgt)
    }
    fn p(&self) -> u32 {
        self.src.p()
    }

    /// Full-basis elements whose classes form a basis of the stable hom space.
    pub fn representatives(&self) -> Vec<ChainMap> {
        self.reps.iter().map(|&i| self.full_basis[i].clone()).collect()
    }

    pub fn is_factoring(&self, f: &ChainMap) -> bool {
        if f.is_zero() {
            return true;
        }
        columns(&self.factoring_basis, self.len(), self.p()).solve(&f.as_flat_matrix()).is_ok()
    }

    pub fn stably_equal(&self, f: &ChainMap, g: &ChainMap) -> bool {
        self.is_factoring(&f.sub(g))
    }

    /// Coordinates of the class of f in the basis of [`Self::representatives`].
    pub fn stable_coords(&self, f: &ChainMap) -> Result<Vec<u32>> {
        let reps = self.representatives();
        let a = columns(&reps, self.len(), self.p()).hstack(&columns(&self.factoring_basis, self.len(), self.p()));
        let c = a.solve(&f.as_flat_matrix()).map_err(|_| FrobError::NoSolution("not a chain map in this space".into()))?;
        Ok((0..reps.len()).map(|i| c.get(i, 0)).collect())
    }

    /// Coordinates of several maps at once, one column per map.
    pub fn stable_coords_many(&self, fs: &[ChainMap]) -> Result<Matrix> {
        let d = self.stable_dim();
        if fs.is_empty() || d == 0 {
            return Ok(Matrix::zeros(d, fs.len(), self.p()));
        }
        let reps = self.representatives();
        let a = columns(&reps, self.len(), self.p()).hstack(&columns(&self.factoring_basis, self.len(), self.p()));
        let c = a
            .solve(&columns(fs, self.len(), self.p()))
            .map_err(|_| FrobError::NoSolution("not a chain map in this space".into()))?;
        Ok(c.submatrix(0, d, 0, fs.len()))
    }

    pub fn combine(&self, coeffs: &[u32]) -> ChainMap {
        combine(&self.src, &self.tgt, &self.representatives(), coeffs)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> ChainMap {
        let p = self.p();
        let coeffs: Vec<u32> = (0..self.full_dim()).map(|_| rng.gen_range(0..p)).collect();
        combine(&self.src, &self.tgt, &self.full_basis, &coeffs)
    }
}

/// Whether f factors through a projective chain.
pub fn is_stably_zero_map(f: &ChainMap) -> bool {
    if f.is_zero() {
        return true;
    }
    let fb = factoring_basis(&f.src, &f.tgt);
    columns(&fb, flat_len(&f.src, &f.tgt), f.src.p()).solve(&f.as_flat_matrix()).is_ok()
}

pub fn is_stably_zero(x: &ChainObject) -> bool {
    is_projective_chain(x)
}

pub fn sigma(x: &ChainObject) -> ChainObject {
    chain_injective_envelope(x).quotient().clone()
}

pub fn sigma_inv(x: &ChainObject) -> ChainObject {
    chain_projective_cover(x).kernel.obj
}

pub fn sigma_pow(x: &ChainObject, k: usize) -> ChainObject {
    (0..k).fold(x.clone(), |acc, _| sigma(&acc))
}

/// Σf: extend i_Y∘f along i_X and pass to cokernels.
pub fn sigma_map(f: &ChainMap) -> Result<ChainMap> {
    let ex = chain_injective_envelope(&f.src);
    let ey = chain_injective_envelope(&f.tgt);
    sigma_map_with(f, &ex, &ey)
}

pub fn sigma_map_with(f: &ChainMap, ex: &Envelope, ey: &Envelope) -> Result<ChainMap> {
    let g = chain_extend(ex.mono(), &ey.mono().compose(f), None)?;
    Ok(induced_on_cokernels(&g, &ex.coker, &ey.coker))
}

/// Σ⁻¹f: lift f∘p_X through p_Y and restrict to kernels.
pub fn sigma_inv_map(f: &ChainMap) -> Result<ChainMap> {
    let cx = chain_projective_cover(&f.src);
    let cy = chain_projective_cover(&f.tgt);
    sigma_inv_map_with(f, &cx, &cy)
}

pub fn sigma_inv_map_with(f: &ChainMap, cx: &Cover, cy: &Cover) -> Result<ChainMap> {
    let g = chain_lift(&f.compose(cx.epi()), cy.epi())?;
    let comps = (0..=f.l()).map(|k| cy.kernel.retractions[k].mul(&g.comps[k]).mul(&cx.kernel.incl.comps[k])).collect();
    ChainMap::new(cx.kernel.obj.clone(), cy.kernel.obj.clone(), comps)
}

/// The standard cone: pushout of i_X: X ↣ I(X) along f.
#[derive(Clone, Debug)]
pub struct Cone {
    pub obj: ChainObject,
    pub envelope: Envelope,
    pub pushout: ChainPushout,
    /// Y → C
    pub to_cone: ChainMap,
    /// C → ΣX
    pub to_shift: ChainMap,
}

pub fn cone(f: &ChainMap) -> Result<Cone> {
    let envelope = chain_injective_envelope(&f.src);
    cone_with(f, envelope)
}

pub fn cone_with(f: &ChainMap, envelope: Envelope) -> Result<Cone> {
    let po = chain_pushout(envelope.mono(), f)?;
    let zero = ChainMap::zero(&f.tgt, envelope.quotient());
    let to_shift = po.induced(&envelope.ses.epi, &zero)?;
    Ok(Cone { obj: po.corner.clone(), to_cone: po.i_prime.clone(), to_shift, envelope, pushout: po })
}

/// The standard cocone: pullback of p_Y: P(Y) ↠ Y along f.
#[derive(Clone, Debug)]
pub struct Cocone {
    pub obj: ChainObject,
    pub cover: Cover,
    pub pullback: ChainPullback,
    /// Σ⁻¹Y → D
    pub from_shift: ChainMap,
    /// D → X
    pub to_src: ChainMap,
}

pub fn cocone(f: &ChainMap) -> Result<Cocone> {
    let cover = chain_projective_cover(&f.tgt);
    let pb = chain_pullback(cover.epi(), f)?;
    let zero = ChainMap::zero(&cover.kernel.obj, &f.src);
    let from_shift = pb.induced(&cover.kernel.incl, &zero)?;
    Ok(Cocone { obj: pb.corner.clone(), to_src: pb.p_prime.clone(), from_shift, cover, pullback: pb })
}

pub fn is_stable_iso(f: &ChainMap) -> bool {
    cone(f).map(|c| is_projective_chain(&c.obj)).unwrap_or(false)
}

/// Search Hom(X, Y) for a stable isomorphism, deterministically.
pub fn find_stable_iso(x: &ChainObject, y: &ChainObject) -> Result<ChainMap> {
    let (zx, zy) = (is_stably_zero(x), is_stably_zero(y));
    if zx || zy {
        return if zx && zy { Ok(ChainMap::zero(x, y)) } else { Err(FrobError::NoIso("exactly one side is stably zero".into())) };
    }
    let sp = stable_hom(x, y);
    find_stable_iso_in(&sp)
}

pub fn find_stable_iso_in(sp: &StableHomSpace) -> Result<ChainMap> {
    let reps = sp.representatives();
    if reps.is_empty() {
        return Err(FrobError::NoIso("stable hom space is zero".into()));
    }
    if reps.len() == 1 {
        return if is_stable_iso(&reps[0]) { Ok(reps[0].clone()) } else { Err(FrobError::NoIso("the only class is not invertible".into())) };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f15);
    let p = sp.p();
    for _ in 0..96 {
        let coeffs: Vec<u32> = (0..reps.len()).map(|_| rng.gen_range(0..p)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        let f = sp.combine(&coeffs);
        if is_stable_iso(&f) {
            return Ok(f);
        }
    }
    Err(FrobError::NoIso(format!("no invertible class among 96 samples of a {}-dimensional space", reps.len())))
}

pub fn are_stably_isomorphic(x: &ChainObject, y: &ChainObject) -> bool {
    find_stable_iso(x, y).is_ok()
}

/// h with h∘e = g, where e is termwise surjective and g vanishes on ker e.
pub fn factor_through_epi(e: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let comps = (0..=e.l())
        .map(|k| {
            let s = e.comps[k].right_inverse().map_err(|_| FrobError::NotEpic(format!("component {k}")))?;
            let h = g.comps[k].mul(&s);
            if h.mul(&e.comps[k]) != g.comps[k] {
                return Err(FrobError::NoSolution(format!("map does not vanish on the kernel at index {k}")));
            }
            Ok(h)
        })
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(e.tgt.clone(), g.tgt.clone(), comps)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum TriangleWitness {
    Ses(ChainSES),
    Cone { envelope: ChainSES, pushout: ChainSES },
    /// the cone of f followed by a stable isomorphism onto the third vertex
    Comparison { envelope: ChainSES, pushout: ChainSES, comparison: ChainMap },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub vertex: String,
    pub tag: String,
    /// indices at which the vertex has a free term
    pub free_indices: Vec<usize>,
}

impl Membership {
    pub fn new(vertex: &str, tag: &str, x: &ChainObject) -> Self {
        Membership {
            vertex: vertex.into(),
            tag: tag.into(),
            free_indices: (0..=x.l()).filter(|&k| x.term(k).is_projective()).collect(),
        }
    }
}

/// X → Y → Z → ΣX with an explicit witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TriangleCertificate {
    pub x: ChainObject,
    pub y: ChainObject,
    pub z: ChainObject,
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainMap,
    pub witness: TriangleWitness,
    pub memberships: Vec<Membership>,
}

impl TriangleCertificate {
    pub fn verify(&self) -> Result<()> {
        for m in [&self.f, &self.g, &self.h] {
            m.check()?;
        }
        if self.f.tgt != self.y || self.g.src != self.y || self.g.tgt != self.z || self.h.src != self.z {
            return Err(FrobError::Precondition("triangle maps do not chain".into()));
        }
        match &self.witness {
            TriangleWitness::Ses(s) => {
                s.verify()?;
                if s.mono != self.f || s.epi != self.g {
                    return Err(FrobError::Precondition("witness sequence differs from the triangle".into()));
                }
            }
            TriangleWitness::Cone { envelope, pushout } => {
                envelope.verify()?;
                pushout.verify()?;
                if envelope.mono.src != self.x || pushout.epi.tgt != self.z {
                    return Err(FrobError::Precondition("cone witness does not match".into()));
                }
            }
            TriangleWitness::Comparison { envelope, pushout, comparison } => {
                envelope.verify()?;
                pushout.verify()?;
                comparison.check()?;
                if envelope.mono.src != self.x || pushout.epi.tgt != comparison.src || comparison.tgt != self.z {
                    return Err(FrobError::Precondition("cone witness does not match".into()));
                }
                // the cone receives Y through the second pushout leg
                let leg = pushout.epi.comps.iter().zip(self.y.terms()).map(|(m, t)| {
                    let c = m.cols();
                    m.submatrix(0, m.rows(), c - t.dim(), t.dim())
                });
                let leg = ChainMap::new(self.y.clone(), comparison.src.clone(), leg.collect())?;
                if comparison.compose(&leg) != self.g {
                    return Err(FrobError::Precondition("comparison does not restrict to g".into()));
                }
                if !is_stable_iso(comparison) {
                    return Err(FrobError::NoIso("comparison with the cone".into()));
                }
            }
        }
        Ok(())
    }

    /// g∘f and h∘g are stably zero.
    pub fn composites_vanish(&self) -> bool {
        is_stably_zero_map(&self.g.compose(&self.f)) && is_stably_zero_map(&self.h.compose(&self.g))
    }

    pub fn with_membership(mut self, vertex: &str, tag: &str) -> Self {
        let obj = match vertex {
            "x" => &self.x,
            "y" => &self.y,
            _ => &self.z,
        };
        let m = Membership::new(vertex, tag, obj);
        self.memberships.push(m);
        self
    }
}

/// The triangle X → Y → Z → ΣX of a short exact sequence of chains.
pub fn ses_to_triangle(s: &ChainSES) -> Result<TriangleCertificate> {
    s.verify()?;
    let x = &s.mono.src;
    let e = chain_injective_envelope(x);
    let ext = chain_extend(&s.mono, e.mono(), None)?;
    let h = factor_through_epi(&s.epi, &e.ses.epi.compose(&ext))?;
    Ok(TriangleCertificate {
        x: x.clone(),
        y: s.mono.tgt.clone(),
        z: s.epi.tgt.clone(),
        f: s.mono.clone(),
        g: s.epi.clone(),
        h,
        witness: TriangleWitness::Ses(s.clone()),
        memberships: vec![],
    })
}

/// The standard triangle X → Y → C(f) → ΣX.
pub fn cone_triangle(f: &ChainMap) -> Result<TriangleCertificate> {
    let c = cone(f)?;
    Ok(TriangleCertificate {
        x: f.src.clone(),
        y: f.tgt.clone(),
        z: c.obj.clone(),
        f: f.clone(),
        g: c.to_cone.clone(),
        h: c.to_shift.clone(),
        witness: TriangleWitness::Cone { envelope: c.envelope.ses.clone(), pushout: c.pushout.ses.clone() },
        memberships: vec![],
    })
}

/// u in the span of `basis` with op(u) = rhs exactly.
pub fn solve_exact(basis: &[ChainMap], op: impl Fn(&ChainMap) -> ChainMap, rhs: &ChainMap) -> Result<ChainMap> {
    let p = rhs.tgt.p();
    let len = flat_len(&rhs.src, &rhs.tgt);
    let images: Vec<ChainMap> = basis.iter().map(&op).collect();
    let a = columns(&images, len, p);
    let sol = a.solve(&rhs.as_flat_matrix()).map_err(|_| FrobError::NoSolution("linear system over a hom basis".into()))?;
    let (src, tgt) = match basis.first() {
        Some(b) => (b.src.clone(), b.tgt.clone()),
        None => return Err(FrobError::NoSolution("empty hom basis".into())),
    };
    let c: Vec<u32> = (0..basis.len()).map(|i| sol.get(i, 0)).collect();
    Ok(combine(&src, &tgt, basis, &c))
}

/// Certify A → B → C as a distinguished triangle: C is compared with the
/// cone of f through the map induced by g and an extension u of g∘f along
/// the envelope of A; h is the unique stable map with h∘comparison = the
/// cone's connecting map.
pub fn certify_triangle(f: &ChainMap, g: &ChainMap) -> Result<TriangleCertificate> {
    if f.tgt != g.src {
        return Err(FrobError::Precondition("maps do not compose".into()));
    }
    let c = cone(f)?;
    let gf = g.compose(f);
    let u = if gf.is_zero() {
        ChainMap::zero(c.envelope.injective(), &g.tgt)
    } else {
        let basis = chain_hom_basis(c.envelope.injective(), &g.tgt);
        solve_exact(&basis, |u| u.compose(c.envelope.mono()), &gf)
            .map_err(|_| FrobError::NotExact("g∘f does not factor through the envelope".into()))?
    };
    let comparison = c.pushout.induced(&u, g)?;
    if !is_stable_iso(&comparison) {
        return Err(FrobError::NoIso("third vertex is not the cone".into()));
    }
    let shift = c.to_shift.tgt.clone();
    let h = if is_stably_zero(&shift) || is_stably_zero(&g.tgt) {
        ChainMap::zero(&g.tgt, &shift)
    } else {
        let unknown = stable_hom(&g.tgt, &shift);
        let target = stable_hom(&c.obj, &shift);
        solve_stably(&unknown, |v| v.compose(&comparison), &target, &c.to_shift)?
    };
    Ok(TriangleCertificate {
        x: f.src.clone(),
        y: f.tgt.clone(),
        z: g.tgt.clone(),
        f: f.clone(),
        g: g.clone(),
        h,
        witness: TriangleWitness::Comparison { envelope: c.envelope.ses.clone(), pushout: c.pushout.ses.clone(), comparison },
        memberships: vec![],
    })
}

/// Solve op(u) ≡ rhs modulo maps through projectives, for u in `unknown`;
/// the solution must be unique in the stable hom space.
pub fn solve_stably(
    unknown: &StableHomSpace,
    op: impl Fn(&ChainMap) -> ChainMap,
    target: &StableHomSpace,
    rhs: &ChainMap,
) -> Result<ChainMap> {
    solve_stably_inner(unknown, op, target, rhs)
}

fn solve_stably_inner(
    unknown: &StableHomSpace,
    op: impl Fn(&ChainMap) -> ChainMap,
    target: &StableHomSpace,
    rhs: &ChainMap,
) -> Result<ChainMap> {
    let p = unknown.p();
    let len = target.len();
    let images: Vec<ChainMap> = unknown.full_basis.iter().map(&op).collect();
    let a = columns(&images, len, p).hstack(&columns(&target.factoring_basis, len, p));
    let sol = a.solve_all(&rhs.as_flat_matrix()).map_err(|_| FrobError::NoSolution("no stable fill-in".into()))?;
    let nfull = unknown.full_dim();
    for j in 0..sol.kernel.cols() {
        let c: Vec<u32> = (0..nfull).map(|i| sol.kernel.get(i, j)).collect();
        let u = combine(&unknown.src, &unknown.tgt, &unknown.full_basis, &c);
        if !unknown.is_factoring(&u) {
            return Err(FrobError::NotUnique("fill-in is not unique up to projectives".into()));
        }
    }
    let c: Vec<u32> = (0..nfull).map(|i| sol.particular.get(i, 0)).collect();
    Ok(combine(&unknown.src, &unknown.tgt, &unknown.full_basis, &c))
}

/// A particular solution of op(u) ≡ rhs and maps spanning the homogeneous
/// solutions, modulo nothing.
pub fn solve_stably_family(
    unknown: &StableHomSpace,
    op: impl Fn(&ChainMap) -> ChainMap,
    target: &StableHomSpace,
    rhs: &ChainMap,
) -> Result<(ChainMap, Vec<ChainMap>)> {
    let p = unknown.p();
    let len = target.len();
    let images: Vec<ChainMap> = unknown.full_basis.iter().map(&op).collect();
    let a = columns(&images, len, p).hstack(&columns(&target.factoring_basis, len, p));
    let sol = a.solve_all(&rhs.as_flat_matrix()).map_err(|_| FrobError::NoSolution("no stable fill-in".into()))?;
    let nfull = unknown.full_dim();
    let at = |m: &Matrix, j: usize| -> Vec<u32> { (0..nfull).map(|i| m.get(i, j)).collect() };
    let particular = combine(&unknown.src, &unknown.tgt, &unknown.full_basis, &at(&sol.particular, 0));
    let kernel = (0..sol.kernel.cols())
        .map(|j| combine(&unknown.src, &unknown.tgt, &unknown.full_basis, &at(&sol.kernel, j)))
        .filter(|u| !unknown.is_factoring(u))
        .collect();
    Ok((particular, kernel))
}

/// The unique stable maps a: X₁ → X₂ and c: Z₁ → Z₂ completing f: Y₁ → Y₂
/// to a map of triangles.
pub fn unique_fill_in(r1: &TriangleCertificate, r2: &TriangleCertificate, f: &ChainMap) -> Result<(ChainMap, ChainMap)> {
    let ux = stable_hom(&r1.x, &r2.x);
    let tx = stable_hom(&r1.x, &r2.y);
    let a = solve_stably(&ux, |u| r2.f.compose(u), &tx, &f.compose(&r1.f))?;
    let uz = stable_hom(&r1.z, &r2.z);
    let tz = stable_hom(&r1.y, &r2.z);
    let c = solve_stably(&uz, |u| u.compose(&r1.g), &tz, &r2.g.compose(f))?;
    Ok((a, c))
}

/// The envelope cokernel as an explicit chain, for callers needing sections.
pub fn envelope_cokernel(x: &ChainObject) -> Result<crate::chain::ChainCokernel> {
    chain_cokernel(chain_injective_envelope(x).mono())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::split_off_equalities;
    use crate::module::LambdaModule;

    const P: u32 = 5;

    fn k2() -> LambdaModule {
        LambdaModule::simple(2, P)
    }
    fn lam2() -> LambdaModule {
        LambdaModule::free(2, 1, P)
    }
    fn kk() -> ChainObject {
        ChainObject::new(vec![k2(), k2()], vec![Matrix::identity(1, P)]).unwrap()
    }
    fn k_lam() -> ChainObject {
        ChainObject::new(vec![k2(), lam2()], vec![k2().injective_hull().mat]).unwrap()
    }

    #[test]
    fn stable_hom_examples() {
        assert_eq!(stable_hom(&kk(), &kk()).stable_dim(), 1);
        let pch = ChainObject::mu(2, &lam2(), 1).unwrap();
        assert_eq!(stable_hom(&pch, &kk()).stable_dim(), 0);
        assert_eq!(stable_hom(&kk(), &k_lam()).stable_dim(), 1);
    }

    #[test]
    fn sigma_examples() {
        let pch = ChainObject::mu(2, &lam2(), 1).unwrap();
        assert!(is_stably_zero(&sigma(&pch)));
        let s = sigma(&kk());
        assert!(are_stably_isomorphic(&s, &kk()));
        let back = sigma_inv(&s);
        assert!(are_stably_isomorphic(&back, &kk()));
    }

    #[test]
    fn sigma_maps_are_functorial() {
        let x = k_lam();
        let id = sigma_map(&x.identity()).unwrap();
        let sp = stable_hom(&id.src, &id.tgt);
        assert!(sp.stably_equal(&id, &id.src.identity()));
        let z = sigma_inv_map(&ChainMap::zero(&x, &x)).unwrap();
        assert!(is_stably_zero_map(&z));
    }

    #[test]
    fn cone_examples() {
        let x = kk();
        let c = cone(&x.identity()).unwrap();
        assert!(is_stably_zero(&c.obj));
        let zero = ChainObject::zero(1, 2, P);
        let c = cone(&ChainMap::zero(&x, &zero)).unwrap();
        assert!(are_stably_isomorphic(&c.obj, &sigma(&x)));
        c.pushout.ses.verify().unwrap();
    }

    #[test]
    fn stable_iso_examples() {
        let x = kk();
        assert!(is_stable_iso(&x.identity()));
        assert!(!is_stable_iso(&ChainMap::zero(&x, &x)));
    }

    #[test]
    fn triangles() {
        let x = kk();
        let e = chain_injective_envelope(&x);
        let t = ses_to_triangle(&e.ses).unwrap();
        t.verify().unwrap();
        assert!(t.composites_vanish());
        assert!(is_stable_iso(&t.h));

        let s = split_off_equalities(&ChainObject::mu(2, &k2(), 1).unwrap()).unwrap();
        let t = ses_to_triangle(&s).unwrap();
        t.verify().unwrap();

        let ct = cone_triangle(&x.identity()).unwrap();
        ct.verify().unwrap();
        let json = serde_json::to_string(&ct).unwrap();
        assert!(json.contains("\"witness\""));
    }

    #[test]
    fn fill_in_identity_and_zero() {
        // split row kk ↣ kk ⊕ (0,k) ↠ (0,k); no stable maps from kk to (0,k) or its shifts
        let a0 = kk();
        let b0 = ChainObject::mu(1, &k2(), 1).unwrap();
        let ses = ChainSES::new(
            crate::chain::chain_injection(&a0, &b0, 0),
            crate::chain::chain_projection(&a0, &b0, 1),
        )
        .unwrap();
        let t = ses_to_triangle(&ses).unwrap();
        let (a, c) = unique_fill_in(&t, &t, &t.y.identity()).unwrap();
        assert!(stable_hom(&t.x, &t.x).stably_equal(&a, &t.x.identity()));
        assert!(stable_hom(&t.z, &t.z).stably_equal(&c, &t.z.identity()));
        let (a, c) = unique_fill_in(&t, &t, &ChainMap::zero(&t.y, &t.y)).unwrap();
        assert!(is_stably_zero_map(&a) && is_stably_zero_map(&c));
    }

    #[test]
    fn cocone_is_shifted_cone() {
        let x = k_lam();
        let zero = ChainObject::zero(1, 2, P);
        let cc = cocone(&ChainMap::zero(&zero, &x)).unwrap();
        assert!(are_stably_isomorphic(&cc.obj, &sigma_inv(&x)));
    }
}
