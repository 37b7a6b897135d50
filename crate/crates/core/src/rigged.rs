//! Rigged configurations and the KKR bijection with highest paths.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::content::{cartan, BlockId, SolitonContent};
use crate::error::{Error, Result};
use crate::path::Path;
use crate::tableau::Letter;

/// Soliton content with riggings `riggings[a-1][i-1]` sorted nondecreasing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RiggedConfiguration {
    pub content: SolitonContent,
    pub riggings: Vec<Vec<Vec<i64>>>,
}

/// One row of a rigged configuration: `(color, length, rigging)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RcString {
    pub color: usize,
    pub length: usize,
    pub rigging: i64,
}

impl RiggedConfiguration {
    pub fn empty(n: usize, length: usize) -> Self {
        RiggedConfiguration { content: SolitonContent::empty(n, length), riggings: vec![Vec::new(); n] }
    }

    /// Riggings given per block; each block list is sorted on entry.
    pub fn new(content: SolitonContent, mut riggings: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        if riggings.len() != content.n() {
            return Err(Error::InvalidRiggedConfiguration("color count mismatch".into()));
        }
        for (a, blocks) in riggings.iter_mut().enumerate() {
            if blocks.len() != content.blocks(a + 1).len() {
                return Err(Error::InvalidRiggedConfiguration(format!("block count mismatch in color {}", a + 1)));
            }
            for (i, rig) in blocks.iter_mut().enumerate() {
                if rig.len() != content.blocks(a + 1)[i].multiplicity {
                    return Err(Error::InvalidRiggedConfiguration(format!(
                        "block ({},{}) has {} riggings for multiplicity {}",
                        a + 1,
                        i + 1,
                        rig.len(),
                        content.blocks(a + 1)[i].multiplicity
                    )));
                }
                rig.sort_unstable();
            }
        }
        Ok(RiggedConfiguration { content, riggings })
    }

    pub fn n(&self) -> usize {
        self.content.n()
    }

    pub fn length(&self) -> usize {
        self.content.length
    }

    pub fn block_riggings(&self, id: BlockId) -> &[i64] {
        &self.riggings[id.color - 1][id.block - 1]
    }

    /// Rigging vector over rows, block-major with `alpha` ascending.
    pub fn rigging_vector(&self) -> Vec<i64> {
        self.riggings.iter().flatten().flatten().copied().collect()
    }

    pub fn strings(&self) -> Vec<RcString> {
        let mut out = Vec::new();
        for id in self.content.block_ids() {
            let length = self.content.block(id).length;
            for &rigging in self.block_riggings(id) {
                out.push(RcString { color: id.color, length, rigging });
            }
        }
        out
    }

    pub fn from_strings(n: usize, length: usize, strings: &[RcString]) -> Self {
        let partitions: Vec<Vec<usize>> =
            (1..=n).map(|a| strings.iter().filter(|s| s.color == a).map(|s| s.length).collect()).collect();
        let content = SolitonContent::from_partitions(&partitions, length);
        let riggings = (1..=n)
            .map(|a| {
                content
                    .blocks(a)
                    .iter()
                    .map(|b| {
                        let mut rig: Vec<i64> = strings
                            .iter()
                            .filter(|s| s.color == a && s.length == b.length)
                            .map(|s| s.rigging)
                            .collect();
                        rig.sort_unstable();
                        rig
                    })
                    .collect()
            })
            .collect();
        RiggedConfiguration { content, riggings }
    }

    /// `p >= 0` and `0 <= r <= p` in every block, and path weights nonnegative.
    pub fn validate(&self) -> Result<()> {
        if self.content.weights().iter().any(|&w| w < 0) {
            return Err(Error::InvalidRiggedConfiguration(format!("content {} too large for L={}", self.content, self.length())));
        }
        for id in self.content.block_ids() {
            let p = self.content.vacancy(id);
            if p < 0 {
                return Err(Error::InvalidRiggedConfiguration(format!(
                    "negative vacancy {} at block ({},{})",
                    p, id.color, id.block
                )));
            }
            let rig = self.block_riggings(id);
            if rig.first().is_some_and(|&r| r < 0) || rig.last().is_some_and(|&r| r > p) {
                return Err(Error::InvalidRiggedConfiguration(format!(
                    "rigging outside [0,{}] at block ({},{})",
                    p, id.color, id.block
                )));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }
}

impl fmt::Display for RiggedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L={} mu={} r=", self.length(), self.content)?;
        let parts: Vec<String> = self
            .content
            .block_ids()
            .into_iter()
            .map(|id| {
                let rig: Vec<String> = self.block_riggings(id).iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", rig.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

impl fmt::Debug for RiggedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RiggedConfiguration({})", self)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonBlock {
    length: usize,
    riggings: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct JsonColor {
    blocks: Vec<JsonBlock>,
}

#[derive(Serialize, Deserialize)]
struct JsonRc {
    #[serde(rename = "L")]
    length: usize,
    colors: Vec<JsonColor>,
}

impl Serialize for RiggedConfiguration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let colors = (1..=self.n())
            .map(|a| JsonColor {
                blocks: self
                    .content
                    .blocks(a)
                    .iter()
                    .enumerate()
                    .map(|(i, b)| JsonBlock { length: b.length, riggings: self.riggings[a - 1][i].clone() })
                    .collect(),
            })
            .collect();
        JsonRc { length: self.length(), colors }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RiggedConfiguration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = JsonRc::deserialize(deserializer)?;
        let n = raw.colors.len();
        let mut strings = Vec::new();
        for (a, color) in raw.colors.iter().enumerate() {
            for block in &color.blocks {
                if block.length == 0 {
                    return Err(serde::de::Error::custom("block of length 0"));
                }
                for &rigging in &block.riggings {
                    strings.push(RcString { color: a + 1, length: block.length, rigging });
                }
            }
        }
        Ok(RiggedConfiguration::from_strings(n, raw.length, &strings))
    }
}

/// Working form of the bijection: a flat list of strings plus `L`.
#[derive(Clone, Debug)]
struct StringSet {
    n: usize,
    length: usize,
    strings: Vec<RcString>,
}

impl StringSet {
    fn vacancy(&self, a: usize, l: usize) -> i64 {
        let mut p = if a == 1 { self.length as i64 } else { 0 };
        for s in &self.strings {
            let c = cartan(a, s.color);
            if c != 0 {
                p -= c * l.min(s.length) as i64;
            }
        }
        p
    }

    fn singular_candidates(&self, c: usize) -> Vec<usize> {
        (0..self.strings.len())
            .filter(|&k| {
                let s = self.strings[k];
                s.color == c && s.rigging == self.vacancy(c, s.length)
            })
            .collect()
    }
}

/// Chooser among equally good candidates; receives the candidate positions.
type Chooser<'a> = &'a mut dyn FnMut(&[usize]) -> usize;

fn forward_step(set: &mut StringSet, d: usize, choose: Chooser<'_>) {
    if d >= 2 {
        let mut bound = usize::MAX;
        let mut selected: Vec<usize> = Vec::new();
        for c in (1..d).rev() {
            let candidates = set.singular_candidates(c);
            let best = candidates.iter().map(|&k| set.strings[k].length).filter(|&len| len <= bound).max();
            match best {
                Some(len) => {
                    let tied: Vec<usize> = candidates.into_iter().filter(|&k| set.strings[k].length == len).collect();
                    selected.push(tied[choose(&tied)]);
                    bound = len;
                }
                None => bound = 0,
            }
        }
        // Void selections (bound 0) cannot appear with length >= 1, so `selected`
        // holds exactly the non-void ones.
        let mut fresh = Vec::with_capacity(selected.len());
        for &k in &selected {
            set.strings[k].length += 1;
            fresh.push(k);
        }
        // New colors of lengthened-from-zero strings: colors below the last selection
        // with no singular candidate start a new string of length 1.
        let selected_colors: Vec<usize> = selected.iter().map(|&k| set.strings[k].color).collect();
        for c in (1..d).rev() {
            if !selected_colors.contains(&c) {
                set.strings.push(RcString { color: c, length: 1, rigging: 0 });
                fresh.push(set.strings.len() - 1);
            }
        }
        set.length += 1;
        for k in fresh {
            let s = set.strings[k];
            set.strings[k].rigging = set.vacancy(s.color, s.length);
        }
    } else {
        set.length += 1;
    }
}

fn forward_with(p: &Path, choose: Chooser<'_>) -> Result<RiggedConfiguration> {
    if !p.is_highest() {
        return Err(Error::NotHighest(p.to_string()));
    }
    let mut set = StringSet { n: p.n(), length: 0, strings: Vec::new() };
    for &d in p.letters() {
        forward_step(&mut set, d as usize, choose);
    }
    Ok(RiggedConfiguration::from_strings(set.n, set.length, &set.strings))
}

/// `phi`: highest path to rigged configuration.
pub fn kkr_forward(p: &Path) -> Result<RiggedConfiguration> {
    forward_with(p, &mut |tied: &[usize]| tied.len() - 1)
}

fn backward_step(set: &mut StringSet, choose: Chooser<'_>) -> usize {
    let mut lower = 1;
    let mut selected = Vec::new();
    let mut letter = set.n + 1;
    for c in 1..=set.n {
        let candidates = set.singular_candidates(c);
        let best = candidates.iter().map(|&k| set.strings[k].length).filter(|&len| len >= lower).min();
        match best {
            Some(len) => {
                let tied: Vec<usize> = candidates.into_iter().filter(|&k| set.strings[k].length == len).collect();
                selected.push(tied[choose(&tied)]);
                lower = len;
            }
            None => {
                letter = c;
                break;
            }
        }
    }
    for &k in &selected {
        set.strings[k].length -= 1;
    }
    set.length -= 1;
    let kept: Vec<usize> = selected.iter().copied().filter(|&k| set.strings[k].length > 0).collect();
    for &k in &kept {
        let s = set.strings[k];
        set.strings[k].rigging = set.vacancy(s.color, s.length);
    }
    set.strings.retain(|s| s.length > 0);
    letter
}

fn backward_with(rc: &RiggedConfiguration, choose: Chooser<'_>) -> Result<Path> {
    rc.validate()?;
    let mut set = StringSet { n: rc.n(), length: rc.length(), strings: rc.strings() };
    let mut letters = vec![1 as Letter; rc.length()];
    for k in (0..rc.length()).rev() {
        letters[k] = backward_step(&mut set, choose) as Letter;
    }
    if !set.strings.is_empty() {
        return Err(Error::InvalidRiggedConfiguration(format!("{} strings left over", set.strings.len())));
    }
    Path::new(letters, rc.n())
}

/// `phi^{-1}`: rigged configuration to highest path.
pub fn kkr_backward(rc: &RiggedConfiguration) -> Result<Path> {
    backward_with(rc, &mut |tied: &[usize]| tied.len() - 1)
}

/// Every output reachable by varying tie choices in `phi` (deduplicated).
pub fn kkr_forward_all_choices(p: &Path) -> Result<Vec<RiggedConfiguration>> {
    explore(|choose| forward_with(p, choose))
}

/// Every output reachable by varying tie choices in `phi^{-1}` (deduplicated).
pub fn kkr_backward_all_choices(rc: &RiggedConfiguration) -> Result<Vec<Path>> {
    explore(|choose| backward_with(rc, choose))
}

/// Depth-first over choice sequences; each run replays a prefix of decisions.
fn explore<T: PartialEq>(mut run: impl FnMut(Chooser<'_>) -> Result<T>) -> Result<Vec<T>> {
    let mut results: Vec<T> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let mut taken: Vec<(usize, usize)> = Vec::new();
        let mut chooser = |tied: &[usize]| {
            let pos = taken.len();
            let pick = if pos < prefix.len() { prefix[pos] } else { 0 };
            taken.push((pick, tied.len()));
            pick
        };
        let out = run(&mut chooser)?;
        for pos in prefix.len()..taken.len() {
            let (_, width) = taken[pos];
            for alt in 1..width {
                let mut next: Vec<usize> = taken[..pos].iter().map(|&(p, _)| p).collect();
                next.push(alt);
                stack.push(next);
            }
        }
        if !results.contains(&out) {
            results.push(out);
        }
    }
    Ok(results)
}

/// All rigged configurations with content `mu`.
pub fn enumerate_rc(mu: &SolitonContent) -> Vec<RiggedConfiguration> {
    if !mu.is_configuration() || mu.weights().iter().any(|&w| w < 0) {
        return Vec::new();
    }
    let ids = mu.block_ids();
    let per_block: Vec<Vec<Vec<i64>>> = ids
        .iter()
        .map(|&id| nondecreasing_sequences(mu.block(id).multiplicity, mu.vacancy(id)))
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; ids.len()];
    loop {
        let mut riggings: Vec<Vec<Vec<i64>>> = (1..=mu.n()).map(|a| vec![Vec::new(); mu.blocks(a).len()]).collect();
        for (k, id) in ids.iter().enumerate() {
            riggings[id.color - 1][id.block - 1] = per_block[k][choice[k]].clone();
        }
        out.push(RiggedConfiguration { content: mu.clone(), riggings });
        let mut k = 0;
        loop {
            if k == ids.len() {
                return out;
            }
            choice[k] += 1;
            if choice[k] < per_block[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Nondecreasing sequences of length `m` in `[0, p]`, lexicographic.
pub fn nondecreasing_sequences(m: usize, p: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(m: usize, low: i64, p: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for x in low..=p {
            cur.push(x);
            rec(m, x, p, cur, out);
            cur.pop();
        }
    }
    if p >= 0 {
        rec(m, 0, p, &mut cur, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> Path {
        Path::parse(s, 2).unwrap()
    }

    fn rc(mu: &str, length: usize, riggings: Vec<Vec<Vec<i64>>>) -> RiggedConfiguration {
        RiggedConfiguration::new(SolitonContent::parse(mu, length).unwrap(), riggings).unwrap()
    }

    #[test]
    fn forward_on_highest_paths() {
        let a = kkr_forward(&path("111221113221132113311322")).unwrap();
        assert_eq!(a, rc("((33222),(41))", 24, vec![vec![vec![2, 4], vec![1, 5, 6]], vec![vec![0], vec![0]]]));
        let b = kkr_forward(&path("111221322111221332111331")).unwrap();
        assert_eq!(b, rc("((33222),(41))", 24, vec![vec![vec![0, 1], vec![1, 3, 6]], vec![vec![2], vec![0]]]));
        assert_eq!(kkr_forward(&Path::all_ones(7, 2)).unwrap(), RiggedConfiguration::empty(2, 7));
        assert!(matches!(kkr_forward(&path("2111")), Err(Error::NotHighest(_))));
    }

    #[test]
    fn backward_small_example() {
        let x = rc("((211),(1))", 8, vec![vec![vec![1], vec![1, 2]], vec![vec![0]]]);
        assert_eq!(kkr_backward(&x).unwrap().to_string(), "11213122");
        assert_eq!(kkr_backward(&RiggedConfiguration::empty(2, 5)).unwrap().to_string(), "11111");
        let bad = rc("((211),(1))", 8, vec![vec![vec![2], vec![1, 2]], vec![vec![0]]]);
        assert!(matches!(kkr_backward(&bad), Err(Error::InvalidRiggedConfiguration(_))));
    }

    #[test]
    fn json_round_trip() {
        let x = rc("((211),(1))", 8, vec![vec![vec![1], vec![2, 1]], vec![vec![0]]]);
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"L":8,"colors":[{"blocks":[{"length":2,"riggings":[1]},{"length":1,"riggings":[1,2]}]},{"blocks":[{"length":1,"riggings":[0]}]}]}"#);
        let back: RiggedConfiguration = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn sequences_count() {
        assert_eq!(nondecreasing_sequences(2, 4).len(), 15);
        assert_eq!(nondecreasing_sequences(0, 3), vec![Vec::<i64>::new()]);
        let mu = SolitonContent::parse("((211),(1))", 8).unwrap();
        assert_eq!(enumerate_rc(&mu).len(), 40);
    }
}
