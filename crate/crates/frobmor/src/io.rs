//! JSON formats for modules, chains and chain maps.

use crate::chain::{ChainMap, ChainObject};
use crate::linalg::{is_prime, Matrix};
use crate::module::LambdaModule;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleRepr {
    pub n: usize,
    pub p: u32,
    pub dim: usize,
    pub action: Vec<Vec<u32>>,
}

impl From<LambdaModule> for ModuleRepr {
    fn from(m: LambdaModule) -> Self {
        ModuleRepr { n: m.n(), p: m.p(), dim: m.dim(), action: m.action().to_rows() }
    }
}

impl TryFrom<ModuleRepr> for LambdaModule {
    type Error = String;
    fn try_from(r: ModuleRepr) -> Result<Self, String> {
        if !is_prime(r.p) {
            return Err(format!("modulus {} is not prime", r.p));
        }
        let action = matrix_from_rows(&r.action, r.dim, r.dim, r.p, "action")?;
        LambdaModule::new(r.n, action).map_err(|e| e.to_string())
    }
}

pub fn matrix_from_rows(rows: &[Vec<u32>], nrows: usize, ncols: usize, p: u32, what: &str) -> Result<Matrix, String> {
    if rows.len() != nrows {
        return Err(format!("{what}: expected {nrows} rows, found {}", rows.len()));
    }
    let mut data = Vec::with_capacity(nrows * ncols);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(format!("{what}: row {i} has {} entries, expected {ncols}", row.len()));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= p {
                return Err(format!("{what}: entry ({i},{j}) = {v} is not reduced mod {p}"));
            }
            data.push(v);
        }
    }
    Ok(Matrix::from_flat(nrows, ncols, p, data))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainRepr {
    pub l: usize,
    pub terms: Vec<LambdaModule>,
    pub maps: Vec<Vec<Vec<u32>>>,
}

impl From<ChainObject> for ChainRepr {
    fn from(c: ChainObject) -> Self {
        ChainRepr { l: c.l(), terms: c.terms().to_vec(), maps: c.maps().iter().map(|m| m.to_rows()).collect() }
    }
}

impl TryFrom<ChainRepr> for ChainObject {
    type Error = String;
    fn try_from(r: ChainRepr) -> Result<Self, String> {
        if r.terms.len() != r.l + 1 {
            return Err(format!("l = {} but {} terms", r.l, r.terms.len()));
        }
        if r.maps.len() != r.l {
            return Err(format!("l = {} but {} maps", r.l, r.maps.len()));
        }
        let p = r.terms[0].p();
        let maps = r
            .maps
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_rows(m, r.terms[k + 1].dim(), r.terms[k].dim(), p, &format!("map {k}")))
            .collect::<Result<Vec<_>, _>>()?;
        ChainObject::new(r.terms, maps).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainMapRepr {
    pub src: ChainObject,
    pub tgt: ChainObject,
    pub comps: Vec<Vec<Vec<u32>>>,
}

impl From<ChainMap> for ChainMapRepr {
    fn from(f: ChainMap) -> Self {
        ChainMapRepr { comps: f.comps.iter().map(|m| m.to_rows()).collect(), src: f.src, tgt: f.tgt }
    }
}

impl TryFrom<ChainMapRepr> for ChainMap {
    type Error = String;
    fn try_from(r: ChainMapRepr) -> Result<Self, String> {
        if r.comps.len() != r.src.l() + 1 {
            return Err(format!("expected {} components, found {}", r.src.l() + 1, r.comps.len()));
        }
        let p = r.src.p();
        let comps = r
            .comps
            .iter()
            .enumerate()
            .map(|(k, m)| matrix_from_rows(m, r.tgt.term(k).dim(), r.src.term(k).dim(), p, &format!("component {k}")))
            .collect::<Result<Vec<_>, _>>()?;
        ChainMap::new(r.src, r.tgt, comps).map_err(|e| e.to_string())
    }
}

/// Round-trip a chain through JSON, rejecting malformed input.
pub fn chain_from_json(s: &str) -> Result<ChainObject, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

pub fn chain_to_json(c: &ChainObject) -> String {
    serde_json::to_string(c).expect("chain serializes")
}

pub fn module_from_json(s: &str) -> Result<LambdaModule, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

pub fn module_to_json(m: &LambdaModule) -> String {
    serde_json::to_string(m).expect("module serializes")
}

pub fn chain_map_from_json(s: &str) -> Result<ChainMap, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

pub fn chain_map_to_json(f: &ChainMap) -> String {
    serde_json::to_string(f).expect("chain map serializes")
}

/// A chain or a chain map read from disk.
#[derive(Clone, Debug, PartialEq)]
pub enum Fixture {
    Chain(ChainObject),
    Map(ChainMap),
}

impl Fixture {
    pub fn to_json(&self) -> String {
        match self {
            Fixture::Chain(c) => chain_to_json(c),
            Fixture::Map(f) => chain_map_to_json(f),
        }
    }
}

/// Objects carry `terms`, maps carry `comps`.
pub fn parse_fixture(s: &str) -> Result<Fixture, String> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| e.to_string())?;
    if v.get("comps").is_some() {
        chain_map_from_json(s).map(Fixture::Map)
    } else if v.get("terms").is_some() {
        chain_from_json(s).map(Fixture::Chain)
    } else {
        Err("neither a chain (terms) nor a chain map (comps)".into())
    }
}

/// Reads a fixture and checks that serializing it parses back to the same value.
pub fn io_roundtrip(path: impl AsRef<std::path::Path>) -> Result<Fixture, String> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let fx = parse_fixture(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let again = parse_fixture(&fx.to_json())?;
    if again != fx {
        return Err(format!("{}: value changed on a round trip", path.display()));
    }
    Ok(fx)
}
