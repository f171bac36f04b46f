//! The weighted torus algebra: multiplication, curvature and the operations
//! `mu^w_n` computed from tiling patterns, with a shared memo cache.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use once_cell::sync::OnceCell;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::algebra::{Basic, Chord, Element, Monomial};
use crate::tiling::enumerate_patterns;

/// Coefficient ring of the algebra: `F2[U]` or `F2[U,V]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Plain,
    Enriched,
}

/// Nonzero outputs of `mu_n` on one chord sequence, as (weight, monomial)
/// pairs with U-powers counted in plain mode.
pub type Outputs = Vec<(u32, Monomial)>;

type Slot = Arc<OnceCell<Arc<Outputs>>>;

/// Memo cache keyed by chord sequence. Each key is computed at most once,
/// even under concurrent access.
#[derive(Default)]
pub struct MuCache {
    slots: RwLock<HashMap<Vec<Chord>, Slot>>,
}

const CACHE_VERSION: u32 = 1;
const CACHE_FILE: &str = "mu-cache-v1.json";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    entries: Vec<(Vec<Chord>, Vec<(u32, u32, Basic)>)>,
}

impl MuCache {
    pub fn get_or_compute(&self, seq: &[Chord], f: impl FnOnce() -> Outputs) -> Arc<Outputs> {
        let slot = {
            let read = self.slots.read();
            read.get(seq).cloned()
        };
        let slot = match slot {
            Some(s) => s,
            None => self.slots.write().entry(seq.to_vec()).or_default().clone(),
        };
        slot.get_or_init(|| Arc::new(f())).clone()
    }

    pub fn len(&self) -> usize {
        self.slots.read().values().filter(|s| s.get().is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn snapshot(&self) -> CacheFile {
        let read = self.slots.read();
        let mut entries: Vec<_> = read
            .iter()
            .filter_map(|(k, s)| {
                s.get().map(|o| (k.clone(), o.iter().map(|(w, m)| (*w, m.u, m.basic)).collect()))
            })
            .collect();
        entries.sort();
        CacheFile { version: CACHE_VERSION, entries }
    }

    /// Write the cache to `dir`. The format is versioned JSON.
    pub fn save(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let text = serde_json::to_string(&self.snapshot())?;
        let tmp = dir.join(format!("{CACHE_FILE}.tmp"));
        fs::write(&tmp, text)?;
        fs::rename(tmp, dir.join(CACHE_FILE))
    }

    /// Load entries from `dir`; a missing file or a version mismatch loads nothing.
    pub fn load(&self, dir: &Path) -> std::io::Result<usize> {
        let path = dir.join(CACHE_FILE);
        if !path.exists() {
            return Ok(0);
        }
        let file: CacheFile = match serde_json::from_str(&fs::read_to_string(path)?) {
            Ok(f) => f,
            Err(_) => return Ok(0),
        };
        if file.version != CACHE_VERSION {
            return Ok(0);
        }
        let mut write = self.slots.write();
        let count = file.entries.len();
        for (seq, outs) in file.entries {
            let outs: Outputs = outs.into_iter().map(|(w, u, b)| (w, Monomial::new(u, 0, b))).collect();
            let cell = OnceCell::new();
            let _ = cell.set(Arc::new(outs));
            write.insert(seq, Arc::new(cell));
        }
        Ok(count)
    }
}

/// Cache directory named by `CABLEFLOER_CACHE_DIR`, if set.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os("CABLEFLOER_CACHE_DIR").map(PathBuf::from)
}

/// The weighted torus algebra in a fixed coefficient mode.
pub struct TorusAlgebra {
    mode: Mode,
    cache: Arc<MuCache>,
}

impl TorusAlgebra {
    pub fn new(mode: Mode) -> TorusAlgebra {
        TorusAlgebra { mode, cache: Arc::new(MuCache::default()) }
    }

    /// Share an existing memo cache (the cache stores plain-mode outputs).
    pub fn with_cache(mode: Mode, cache: Arc<MuCache>) -> TorusAlgebra {
        TorusAlgebra { mode, cache }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn cache(&self) -> &Arc<MuCache> {
        &self.cache
    }

    pub fn enriched(&self) -> bool {
        self.mode == Mode::Enriched
    }

    fn from_plain(&self, m: Monomial) -> Monomial {
        match self.mode {
            Mode::Plain => m,
            Mode::Enriched => Monomial { v: m.v + m.u, ..m },
        }
    }

    /// The product `mu^0_2`.
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        a.multiply(b)
    }

    /// `mu^w_0`: the four length-4 chords in weight one, zero otherwise.
    pub fn curvature(&self, w: u32) -> Element {
        if w != 1 {
            return Element::zero();
        }
        Chord::full_orbits().into_iter().map(Monomial::basic).collect()
    }

    /// All nonzero outputs of `mu_n` on a chord sequence, over every weight.
    pub fn chord_outputs(&self, seq: &[Chord]) -> Arc<Outputs> {
        if seq.len() < 3 {
            return Arc::new(Vec::new());
        }
        self.cache.get_or_compute(seq, || compute_outputs(seq))
    }

    /// `mu^w_n` on basic inputs.
    pub fn mu_basic(&self, w: u32, inputs: &[Basic]) -> Element {
        match (inputs.len(), w) {
            (0, _) => return self.curvature(w),
            (1, _) => return Element::zero(),
            (2, 0) => {
                return inputs[0].multiply(inputs[1]).map(Element::from).unwrap_or_default();
            }
            _ => {}
        }
        let mut chords = Vec::with_capacity(inputs.len());
        for b in inputs {
            match b.chord() {
                Some(c) => chords.push(c),
                None => return Element::zero(),
            }
        }
        if !crate::algebra::composable(&chords) {
            return Element::zero();
        }
        let mut out = Element::zero();
        for (pw, m) in self.chord_outputs(&chords).iter() {
            if *pw == w {
                out.toggle(self.from_plain(*m));
            }
        }
        out
    }

    /// `mu^w_n` on monomial inputs; U and V powers factor out.
    pub fn mu_monomials(&self, w: u32, inputs: &[Monomial]) -> Element {
        let (du, dv) = inputs.iter().fold((0, 0), |(u, v), m| (u + m.u, v + m.v));
        let basics: Vec<Basic> = inputs.iter().map(|m| m.basic).collect();
        self.mu_basic(w, &basics).shifted(du, dv)
    }

    /// `sum_w mu^w_n` on monomial inputs with `n >= 1`.
    pub fn mu_all_weights(&self, inputs: &[Monomial]) -> Element {
        let (du, dv) = inputs.iter().fold((0, 0), |(u, v), m| (u + m.u, v + m.v));
        if inputs.len() == 2 {
            return inputs[0].basic.multiply(inputs[1].basic).map(Element::from).unwrap_or_default().shifted(du, dv);
        }
        let mut chords = Vec::with_capacity(inputs.len());
        for m in inputs {
            match m.basic.chord() {
                Some(c) => chords.push(c),
                None => return Element::zero(),
            }
        }
        if inputs.len() < 3 || !crate::algebra::composable(&chords) {
            return Element::zero();
        }
        let mut out = Element::zero();
        for (_, m) in self.chord_outputs(&chords).iter() {
            out.toggle(self.from_plain(*m));
        }
        out.shifted(du, dv)
    }

    /// `mu^w_n` extended multilinearly.
    pub fn mu(&self, w: u32, inputs: &[Element]) -> Element {
        let mut out = Element::zero();
        let mut current = Vec::with_capacity(inputs.len());
        fn rec(
            alg: &TorusAlgebra,
            w: u32,
            inputs: &[Element],
            current: &mut Vec<Monomial>,
            out: &mut Element,
        ) {
            if current.len() == inputs.len() {
                out.add_assign_element(&alg.mu_monomials(w, current));
                return;
            }
            for m in inputs[current.len()].terms() {
                current.push(*m);
                rec(alg, w, inputs, current, out);
                current.pop();
            }
        }
        rec(self, w, inputs, &mut current, &mut out);
        out
    }
}

fn compute_outputs(seq: &[Chord]) -> Outputs {
    let mut parity: BTreeMap<(u32, Monomial), bool> = BTreeMap::new();
    for p in enumerate_patterns(seq) {
        let Ok(m) = p.output() else { continue };
        let key = (p.weight() as u32, m);
        let e = parity.entry(key).or_insert(false);
        *e = !*e;
    }
    parity.into_iter().filter(|(_, odd)| *odd).map(|(k, _)| k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_chord_list;

    fn mu(w: u32, s: &str) -> String {
        let alg = TorusAlgebra::new(Mode::Plain);
        let seq: Vec<Basic> = parse_chord_list(s).unwrap().into_iter().map(Basic::from).collect();
        alg.mu_basic(w, &seq).to_string()
    }

    #[test]
    fn extended_example() {
        assert_eq!(mu(0, "r4,r3,r2,r123"), "U*r23");
    }

    #[test]
    fn weight_one_example() {
        assert_eq!(mu(1, "r41,r4,r34,r3,r23,r2,r12,r1"), "U^4*i1");
    }

    #[test]
    fn single_crossing() {
        assert_eq!(mu(0, "r2,r1,r4,r3"), "U*i1");
    }

    #[test]
    fn enriched_doubles_powers() {
        let alg = TorusAlgebra::new(Mode::Enriched);
        let seq: Vec<Basic> = parse_chord_list("r4,r3,r2,r123").unwrap().into_iter().map(Basic::from).collect();
        assert_eq!(alg.mu_basic(0, &seq).to_string(), "U*V*r23");
    }

    #[test]
    fn units() {
        let alg = TorusAlgebra::new(Mode::Plain);
        let r2: Element = "r2".parse().unwrap();
        assert_eq!(alg.mu(0, &[r2.clone(), Element::one()]), r2);
        assert!(alg.mu(1, &[r2.clone(), "i0".parse().unwrap(), r2]).is_zero());
    }
}
