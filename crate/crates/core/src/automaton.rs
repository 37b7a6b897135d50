//! Carrier transport and the commuting time evolutions `T^(r)_l`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::content::{BlockId, SolitonContent};
use crate::error::{Error, Result};
use crate::path::{all_words, Path};
use crate::tableau::{Letter, RTable, Tableau};

type TableKey = (usize, usize, usize);

fn table_cache() -> &'static Mutex<HashMap<TableKey, Arc<RTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, Arc<RTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared R table for `B^{r,l} (x) B^{1,1}` over `n + 1` letters.
pub fn r_table(r: usize, l: usize, n: usize) -> Result<Arc<RTable>> {
    let key = (r, l, n);
    if let Some(t) = table_cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(t));
    }
    let built = Arc::new(RTable::build(r, l, n)?);
    let mut cache = table_cache().lock().unwrap();
    Ok(Arc::clone(cache.entry(key).or_insert(built)))
}

/// Level of a time evolution; `Infinite` saturates at the largest part of `mu^(r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(l) => write!(f, "{}", l),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Level::Infinite),
            other => other
                .parse::<usize>()
                .ok()
                .filter(|&l| l >= 1)
                .map(Level::Finite)
                .ok_or_else(|| Error::Parse { column: 1, message: format!("bad level {:?}", other) }),
        }
    }
}

/// Result of carrying `v` from left to right through a path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    pub path: Path,
    pub carrier: Tableau,
    pub energies: Vec<u8>,
    /// Carriers `v_1 .. v_{L+1}`; `carriers[k]` sits left of site `k + 1`.
    pub carriers: Vec<Tableau>,
}

fn transport_indices(table: &RTable, start: usize, letters: &[Letter]) -> (Vec<Letter>, usize, Vec<u8>) {
    let mut v = start;
    let mut out = Vec::with_capacity(letters.len());
    let mut energies = Vec::with_capacity(letters.len());
    for &b in letters {
        let (b2, v2, h) = table.apply(v, b);
        out.push(b2);
        energies.push(h);
        v = v2;
    }
    (out, v, energies)
}

pub fn transport(v: &Tableau, p: &Path) -> Result<Transport> {
    let r = v.rows().len();
    let l = v.rows().first().map_or(0, Vec::len);
    let table = r_table(r, l, p.n())?;
    let start = table
        .index_of(v)
        .ok_or_else(|| Error::InvalidTableau(format!("{} is not an element of B^{{{},{}}}", v, r, l)))?;
    let mut idx = start;
    let mut carriers = vec![v.clone()];
    let mut out = Vec::with_capacity(p.len());
    let mut energies = Vec::with_capacity(p.len());
    for &b in p.letters() {
        let (b2, v2, h) = table.apply(idx, b);
        out.push(b2);
        energies.push(h);
        idx = v2;
        carriers.push(table.tableaux[idx].clone());
    }
    Ok(Transport {
        path: Path::from_raw(out, p.n()),
        carrier: table.tableaux[idx].clone(),
        energies,
        carriers,
    })
}

/// A carrier with `v = v'` and what it produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub carrier: Tableau,
    pub path: Path,
    pub energies: Vec<u8>,
}

pub fn fixed_points(r: usize, l: usize, p: &Path) -> Result<Vec<FixedPoint>> {
    let table = r_table(r, l, p.n())?;
    let mut found = Vec::new();
    for start in 0..table.len() {
        let (out, end, energies) = transport_indices(&table, start, p.letters());
        if end == start {
            found.push(FixedPoint { carrier: table.tableaux[start].clone(), path: Path::from_raw(out, p.n()), energies });
        }
    }
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evolution {
    pub path: Path,
    pub energy: i64,
    pub energies: Vec<u8>,
    /// All fixed-point carriers (they agree on path and energies).
    pub carriers: Vec<Tableau>,
}

/// Uniqueness diagnostics for one evolution, used to test the footnoted expectation
/// that agreeing paths force agreeing local energies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Uniqueness {
    pub carriers: usize,
    pub paths_agree: bool,
    pub energies_agree: bool,
}

pub fn uniqueness(r: usize, l: usize, p: &Path) -> Result<Uniqueness> {
    let fps = fixed_points(r, l, p)?;
    let paths_agree = fps.windows(2).all(|w| w[0].path == w[1].path);
    let energies_agree = fps.windows(2).all(|w| w[0].energies == w[1].energies);
    Ok(Uniqueness { carriers: fps.len(), paths_agree, energies_agree })
}

/// `T^(r)_l(p)` and `E^(r)_l(p)` at a finite level.
pub fn evolve_finite(r: usize, l: usize, p: &Path) -> Result<Evolution> {
    let fps = fixed_points(r, l, p)?;
    let first = fps.first().ok_or_else(|| Error::NoCarrier { r, l, path: p.to_string() })?;
    if fps.iter().any(|fp| fp.path != first.path || fp.energies != first.energies) {
        return Err(Error::NonUniqueEvolution {
            r,
            l,
            path: p.to_string(),
            carriers: fps.iter().map(|fp| format!("{} -> {}", fp.carrier, fp.path)).collect(),
        });
    }
    Ok(Evolution {
        path: first.path.clone(),
        energy: first.energies.iter().map(|&e| e as i64).sum(),
        energies: first.energies.clone(),
        carriers: fps.iter().map(|fp| fp.carrier.clone()).collect(),
    })
}

/// `evolve_finite` restricted to evolutions admissible for the soliton content of `p`.
pub fn evolve_admissible(r: usize, l: usize, p: &Path) -> Result<Evolution> {
    if !soliton_content(p)?.is_admissible(r, l) {
        return Err(Error::Inadmissible { r, l });
    }
    evolve_finite(r, l, p)
}

/// Finite level realizing `level` on `p`.
pub fn resolve_level(r: usize, level: Level, p: &Path) -> Result<usize> {
    match level {
        Level::Finite(l) => Ok(l),
        Level::Infinite => {
            let energies = color_energies(r, p, EnergyMode::FixedPoint)?;
            Ok(largest_part_from_energies(&energies))
        }
    }
}

fn largest_part_from_energies(energies: &[i64]) -> usize {
    // energies[l-1] = E_l; the largest part is the last l where E grows.
    let mut largest = 1;
    let mut prev = 0;
    for (k, &e) in energies.iter().enumerate() {
        if e > prev {
            largest = k + 1;
        }
        prev = e;
    }
    largest
}

pub fn evolve(r: usize, level: Level, p: &Path) -> Result<Evolution> {
    let l = resolve_level(r, level, p)?;
    evolve_finite(r, l, p)
}

/// `p, T(p), T^2(p), ..., T^steps(p)`.
pub fn evolve_steps(r: usize, level: Level, p: &Path, steps: usize) -> Result<Vec<Path>> {
    let l = resolve_level(r, level, p)?;
    let mut rows = vec![p.clone()];
    let mut cur = p.clone();
    for _ in 0..steps {
        cur = evolve_finite(r, l, &cur)?.path;
        rows.push(cur.clone());
    }
    Ok(rows)
}

/// `T^t(p)` for a finite level.
pub fn evolve_power(r: usize, l: usize, p: &Path, times: u64) -> Result<Path> {
    let mut cur = p.clone();
    for _ in 0..times {
        cur = evolve_finite(r, l, &cur)?.path;
    }
    Ok(cur)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyMode {
    /// Energies from the periodic fixed-point carrier.
    FixedPoint,
    /// Energies from one pass of the highest carrier `u^{r,l}`.
    HighestCarrier,
}

pub fn energy(r: usize, l: usize, p: &Path, mode: EnergyMode) -> Result<i64> {
    match mode {
        EnergyMode::FixedPoint => Ok(evolve_finite(r, l, p)?.energy),
        EnergyMode::HighestCarrier => {
            let table = r_table(r, l, p.n())?;
            let start = table.index_of(&Tableau::highest(r, l)).expect("highest tableau present");
            let (_, _, energies) = transport_indices(&table, start, p.letters());
            Ok(energies.iter().map(|&e| e as i64).sum())
        }
    }
}

/// `E^(r)_1, E^(r)_2, ...` until two consecutive values agree (or `l = L + 1`).
fn color_energies(r: usize, p: &Path, mode: EnergyMode) -> Result<Vec<i64>> {
    let mut values: Vec<i64> = Vec::new();
    for l in 1..=p.len() + 1 {
        let e = energy(r, l, p, mode)?;
        let saturated = values.last() == Some(&e) || (l == 1 && e == 0);
        values.push(e);
        if saturated {
            break;
        }
    }
    Ok(values)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergySpectrum {
    /// `values[a-1][l-1] = E^(a)_l`, ending at the first repeated value.
    pub values: Vec<Vec<i64>>,
}

impl EnergySpectrum {
    pub fn get(&self, a: usize, l: usize) -> i64 {
        let row = &self.values[a - 1];
        if l == 0 {
            0
        } else {
            row[(l - 1).min(row.len() - 1)]
        }
    }

    /// Saturation level: largest part of `mu^(a)`, or 0 if empty.
    pub fn saturation(&self, a: usize) -> usize {
        let row = &self.values[a - 1];
        if row.iter().all(|&e| e == 0) {
            0
        } else {
            largest_part_from_energies(row)
        }
    }
}

pub fn energy_spectrum(p: &Path, mode: EnergyMode) -> Result<EnergySpectrum> {
    let values = (1..=p.n()).map(|r| color_energies(r, p, mode)).collect::<Result<Vec<_>>>()?;
    Ok(EnergySpectrum { values })
}

/// Inverts `E^(a)_l = sum min(l, l_i) m_i` by second differences.
pub fn content_from_spectrum(spectrum: &EnergySpectrum, length: usize, label: &str) -> Result<SolitonContent> {
    let mut partitions = Vec::new();
    for a in 1..=spectrum.values.len() {
        let top = spectrum.values[a - 1].len() + 1;
        let mut parts = Vec::new();
        for l in 1..=top {
            let m = -spectrum.get(a, l - 1) + 2 * spectrum.get(a, l) - spectrum.get(a, l + 1);
            if m < 0 {
                return Err(Error::NegativeMultiplicity(label.to_string()));
            }
            parts.extend(std::iter::repeat_n(l, m as usize));
        }
        partitions.push(parts);
    }
    Ok(SolitonContent::from_partitions(&partitions, length))
}

pub fn soliton_content(p: &Path) -> Result<SolitonContent> {
    let spectrum = energy_spectrum(p, EnergyMode::FixedPoint)?;
    content_from_spectrum(&spectrum, p.len(), &p.to_string())
}

/// `K_a`: exchange `a <-> 1` inside cyclically bracket-matched pairs (`a` opens, `1` closes).
pub fn k_move(a: usize, p: &Path) -> Result<Path> {
    if !p.in_b1() {
        return Err(Error::NotInB1(p.to_string()));
    }
    let letters = p.letters();
    let len = letters.len();
    let target = a as Letter;
    let mut out = letters.to_vec();
    if a == 1 {
        return Ok(p.clone());
    }
    let mut open: Vec<usize> = Vec::new();
    let mut closed = vec![false; len];
    for step in 0..2 * len {
        let k = step % len;
        if letters[k] == target && step < len {
            open.push(k);
        } else if letters[k] == 1 && !closed[k] {
            if let Some(j) = open.pop() {
                closed[k] = true;
                out[j] = 1;
                out[k] = target;
            }
        }
    }
    debug_assert!(open.is_empty());
    Ok(Path::from_raw(out, p.n()))
}

/// `T^(1)_inf = K_2 K_3 ... K_{n+1}` (rightmost applied first).
pub fn t1_infinity(p: &Path) -> Result<Path> {
    let mut cur = p.clone();
    for a in (2..=p.n() + 1).rev() {
        cur = k_move(a, &cur)?;
    }
    Ok(cur)
}

/// Evolvable under every `T^(r)_l` with `l <= L + 1`, returning its content.
pub fn level_set_member(p: &Path) -> Result<SolitonContent> {
    let n = p.n();
    let mut values = Vec::with_capacity(n);
    for r in 1..=n {
        let mut row = Vec::new();
        for l in 1..=p.len() + 1 {
            row.push(evolve_finite(r, l, p)?.energy);
        }
        values.push(row);
    }
    content_from_spectrum(&EnergySpectrum { values }, p.len(), &p.to_string())
}

/// All paths of `P` of length `length`, grouped by content; non-evolvable words are skipped.
#[derive(Clone, Debug, Default)]
pub struct LevelSets {
    pub by_content: BTreeMap<String, (SolitonContent, Vec<Path>)>,
    pub non_evolvable: Vec<Path>,
}

impl LevelSets {
    pub fn get(&self, mu: &SolitonContent) -> &[Path] {
        self.by_content.get(&mu.to_string()).map_or(&[], |(_, v)| v.as_slice())
    }
}

pub fn classify_paths(n: usize, length: usize, budget: u64) -> Result<LevelSets> {
    let total = ((n + 1) as u64).checked_pow(length as u32).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let words: Vec<Path> = all_words(length, n).filter(Path::in_p).collect();
    let workers = std::thread::available_parallelism().map_or(1, |k| k.get()).min(8);
    let chunk = words.len().div_ceil(workers).max(1);
    let results: Vec<Vec<(Path, Option<SolitonContent>)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = words
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|p| match level_set_member(p) {
                            Ok(mu) => Ok((p.clone(), Some(mu))),
                            Err(Error::NoCarrier { .. } | Error::NonUniqueEvolution { .. }) => Ok((p.clone(), None)),
                            Err(e) => Err(e),
                        })
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect::<Result<Vec<_>>>()
    })?;
    let mut sets = LevelSets::default();
    for (p, mu) in results.into_iter().flatten() {
        match mu {
            Some(mu) => sets.by_content.entry(mu.to_string()).or_insert_with(|| (mu, Vec::new())).1.push(p),
            None => sets.non_evolvable.push(p),
        }
    }
    Ok(sets)
}

/// `P(mu)` by filtering every word of `P`.
pub fn enumerate_level_set(mu: &SolitonContent, budget: u64) -> Result<Vec<Path>> {
    let n = mu.n();
    let length = mu.length;
    let total = ((n + 1) as u64).checked_pow(length as u32).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let target: Vec<usize> = mu.weights().iter().map(|&w| w.max(0) as usize).collect();
    if mu.weights().iter().any(|&w| w < 0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for p in all_words(length, n) {
        if p.weights() != target {
            continue;
        }
        match level_set_member(&p) {
            Ok(found) if &found == mu => out.push(p),
            Ok(_) | Err(Error::NoCarrier { .. } | Error::NonUniqueEvolution { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// One generator of the commuting family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub r: usize,
    pub l: usize,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{},{}]", self.r, self.l)
    }
}

/// `T^(1)_1` together with `T^(a)_{eta^(a)_i}`, `eta^(a)_i = l^(a)_{i+1} + 1`.
pub fn default_generators(mu: &SolitonContent) -> Vec<Generator> {
    let mut gens = vec![Generator { r: 1, l: 1 }];
    for id in mu.block_ids() {
        let g = Generator { r: id.color, l: mu.next_length(id) + 1 };
        if !gens.contains(&g) {
            gens.push(g);
        }
    }
    gens
}

/// Every admissible `T^(a)_l` with `l` up to the largest part of `mu^(a)`.
pub fn admissible_generators(mu: &SolitonContent) -> Vec<Generator> {
    let mut gens = Vec::new();
    for a in 1..=mu.n() {
        let top = mu.largest_part(a).unwrap_or(1);
        for l in 1..=top {
            if mu.is_admissible(a, l) {
                gens.push(Generator { r: a, l });
            }
        }
    }
    gens
}

/// `xi^(a)_i`: `l_i` on null convex blocks, `l_{i+1} + 1` otherwise.
pub fn xi(mu: &SolitonContent, id: BlockId) -> usize {
    if mu.is_null_convex(id) {
        mu.block(id).length
    } else {
        mu.next_length(id) + 1
    }
}

/// Breadth-first closure with one exponent word per reached path.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub generators: Vec<Generator>,
    pub words: BTreeMap<Path, Vec<u64>>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.words.contains_key(p)
    }
}

pub fn orbit_closure(p: &Path, generators: &[Generator], budget: usize) -> Result<Orbit> {
    let mut words: BTreeMap<Path, Vec<u64>> = BTreeMap::new();
    words.insert(p.clone(), vec![0; generators.len()]);
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(cur) = queue.pop_front() {
        let word = words[&cur].clone();
        for (k, g) in generators.iter().enumerate() {
            let next = evolve_finite(g.r, g.l, &cur)?.path;
            if !words.contains_key(&next) {
                if words.len() == budget {
                    return Err(Error::BudgetExceeded { budget: budget as u64 });
                }
                let mut w = word.clone();
                w[k] += 1;
                words.insert(next.clone(), w);
                queue.push_back(next);
            }
        }
    }
    Ok(Orbit { generators: generators.to_vec(), words })
}

/// Smallest `N >= 1` with `T^N(p) = p`, by simulation up to `limit` steps.
pub fn simulated_period(r: usize, l: usize, p: &Path, limit: u64) -> Result<Option<u64>> {
    let mut cur = p.clone();
    for step in 1..=limit {
        cur = evolve_finite(r, l, &cur)?.path;
        if &cur == p {
            return Ok(Some(step));
        }
    }
    Ok(None)
}
