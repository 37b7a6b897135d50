//! Soliton content: the n-tuple of Young diagrams attached to a level set.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Rows of equal length `length` occurring `multiplicity` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub length: usize,
    pub multiplicity: usize,
}

/// Index of a block: color `a` (1-based) and block `i` (1-based) within it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockId {
    pub color: usize,
    pub block: usize,
}

/// `A_n` Cartan matrix entry.
pub fn cartan(a: usize, b: usize) -> i64 {
    if a == b {
        2
    } else if a.abs_diff(b) == 1 {
        -1
    } else {
        0
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolitonContent {
    pub length: usize,
    /// `colors[a-1]` lists the blocks of `mu^(a)` by strictly decreasing length.
    pub colors: Vec<Vec<Block>>,
}

impl SolitonContent {
    pub fn empty(n: usize, length: usize) -> Self {
        SolitonContent { length, colors: vec![Vec::new(); n] }
    }

    /// Builds blocks from partitions given as lists of parts in any order.
    pub fn from_partitions(partitions: &[Vec<usize>], length: usize) -> Self {
        let colors = partitions
            .iter()
            .map(|parts| {
                let mut sorted: Vec<usize> = parts.iter().copied().filter(|&x| x > 0).collect();
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                let mut blocks: Vec<Block> = Vec::new();
                for part in sorted {
                    match blocks.last_mut() {
                        Some(last) if last.length == part => last.multiplicity += 1,
                        _ => blocks.push(Block { length: part, multiplicity: 1 }),
                    }
                }
                blocks
            })
            .collect();
        SolitonContent { length, colors }
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn blocks(&self, a: usize) -> &[Block] {
        &self.colors[a - 1]
    }

    pub fn block(&self, id: BlockId) -> Block {
        self.colors[id.color - 1][id.block - 1]
    }

    pub fn partition(&self, a: usize) -> Vec<usize> {
        self.blocks(a).iter().flat_map(|b| std::iter::repeat_n(b.length, b.multiplicity)).collect()
    }

    /// `|mu^(a)|`, with `mu^(0) = (1^L)` and `mu^(n+1)` empty.
    pub fn size(&self, a: usize) -> usize {
        if a == 0 {
            self.length
        } else if a > self.n() {
            0
        } else {
            self.blocks(a).iter().map(|b| b.length * b.multiplicity).sum()
        }
    }

    pub fn largest_part(&self, a: usize) -> Option<usize> {
        self.blocks(a).first().map(|b| b.length)
    }

    pub fn is_empty(&self) -> bool {
        self.colors.iter().all(Vec::is_empty)
    }

    /// The block index set, color-major.
    pub fn block_ids(&self) -> Vec<BlockId> {
        let mut ids = Vec::new();
        for (a, blocks) in self.colors.iter().enumerate() {
            for i in 0..blocks.len() {
                ids.push(BlockId { color: a + 1, block: i + 1 });
            }
        }
        ids
    }

    /// `g`: the number of blocks.
    pub fn num_blocks(&self) -> usize {
        self.colors.iter().map(Vec::len).sum()
    }

    /// `G`: the number of rows over all colors.
    pub fn num_rows(&self) -> usize {
        self.colors.iter().flatten().map(|b| b.multiplicity).sum()
    }

    /// Rows as `(block id, alpha)` pairs, block-major, `alpha` 1-based.
    pub fn row_ids(&self) -> Vec<(BlockId, usize)> {
        self.block_ids()
            .into_iter()
            .flat_map(|id| (1..=self.block(id).multiplicity).map(move |alpha| (id, alpha)))
            .collect()
    }

    /// Expected letter counts `#(a) = |mu^(a-1)| - |mu^(a)|`; negative if not a content of paths.
    pub fn weights(&self) -> Vec<i64> {
        (1..=self.n() + 1).map(|a| self.size(a - 1) as i64 - self.size(a) as i64).collect()
    }

    /// `E^(a)_l = sum_i min(l, l_i) m_i`.
    pub fn energy(&self, a: usize, l: usize) -> i64 {
        self.blocks(a).iter().map(|b| (l.min(b.length) * b.multiplicity) as i64).sum()
    }

    pub fn vacancy(&self, id: BlockId) -> i64 {
        let length = self.block(id).length;
        let mut p = if id.color == 1 { self.length as i64 } else { 0 };
        for b in 1..=self.n() {
            let c = cartan(id.color, b);
            if c == 0 {
                continue;
            }
            for blk in self.blocks(b) {
                p -= c * (length.min(blk.length) * blk.multiplicity) as i64;
            }
        }
        p
    }

    /// Vacancy number for an arbitrary string length `l` of color `a`.
    pub fn vacancy_at(&self, a: usize, l: usize) -> i64 {
        let mut p = if a == 1 { self.length as i64 } else { 0 };
        for b in 1..=self.n() {
            let c = cartan(a, b);
            if c != 0 {
                p -= c * self.energy(b, l);
            }
        }
        p
    }

    pub fn vacancies(&self) -> Vec<Vec<i64>> {
        (1..=self.n())
            .map(|a| (1..=self.blocks(a).len()).map(|i| self.vacancy(BlockId { color: a, block: i })).collect())
            .collect()
    }

    pub fn vacancy_vector(&self) -> Vec<i64> {
        self.block_ids().into_iter().map(|id| self.vacancy(id)).collect()
    }

    pub fn is_configuration(&self) -> bool {
        self.block_ids().into_iter().all(|id| self.vacancy(id) >= 0)
    }

    pub fn all_vacancies_positive(&self) -> bool {
        self.block_ids().into_iter().all(|id| self.vacancy(id) >= 1)
    }

    /// `F_{ai,bj} = delta p^(a)_i + C_ab min(l^(a)_i, l^(b)_j) m^(b)_j` over the block set.
    pub fn f_matrix(&self) -> Matrix {
        let ids = self.block_ids();
        let g = ids.len();
        let mut f = Matrix::zeros(g, g);
        for (row, &x) in ids.iter().enumerate() {
            let bx = self.block(x);
            for (col, &y) in ids.iter().enumerate() {
                let by = self.block(y);
                let mut v = cartan(x.color, y.color) * (bx.length.min(by.length) * by.multiplicity) as i64;
                if x == y {
                    v += self.vacancy(x);
                }
                f.set(row, col, BigInt::from(v));
            }
        }
        f
    }

    /// `h^(r)_l` over the block set: `delta_{r b} min(l, l^(b)_j)`.
    pub fn velocity(&self, r: usize, l: usize) -> Vec<BigInt> {
        self.block_ids()
            .into_iter()
            .map(|id| if id.color == r { BigInt::from(l.min(self.block(id).length)) } else { BigInt::from(0) })
            .collect()
    }

    pub fn is_null(&self, id: BlockId) -> bool {
        self.vacancy(id) == 0
    }

    /// Whether `mu^(a-1) u mu^(a+1)` covers the doubled block `2 Box^(a)_i`.
    pub fn is_convex(&self, id: BlockId) -> bool {
        let a = id.color;
        let mut union: Vec<usize> = if a == 1 { vec![1; self.length] } else { self.partition(a - 1) };
        if a < self.n() {
            union.extend(self.partition(a + 1));
        }
        union.sort_unstable_by(|x, y| y.cmp(x));
        let rows_through: usize = self.blocks(a)[..id.block].iter().map(|b| b.multiplicity).sum();
        let needed = 2 * rows_through;
        let length = self.block(id).length;
        union.len() >= needed && union[needed - 1] >= length
    }

    pub fn is_null_convex(&self, id: BlockId) -> bool {
        self.is_null(id) && self.is_convex(id)
    }

    /// Length of the next block of the same color, zero past the last.
    pub fn next_length(&self, id: BlockId) -> usize {
        self.blocks(id.color).get(id.block).map_or(0, |b| b.length)
    }

    pub fn is_admissible(&self, r: usize, l: usize) -> bool {
        !self.blocks(r).iter().enumerate().any(|(i, b)| {
            let id = BlockId { color: r, block: i + 1 };
            self.is_null_convex(id) && b.length > l && l > self.next_length(id)
        })
    }
}

impl fmt::Display for SolitonContent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for a in 1..=self.n() {
            if a > 1 {
                write!(f, ",")?;
            }
            let parts = self.partition(a);
            let wide = parts.iter().any(|&x| x > 9);
            let joined: Vec<String> = parts.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", joined.join(if wide { "," } else { "" }))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for SolitonContent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SolitonContent{{L={}, mu={}}}", self.length, self)
    }
}

/// Parses `((33222),(41))` or `((10,3),(2))` into partitions.
pub fn parse_partitions(s: &str) -> Result<Vec<Vec<usize>>> {
    let trimmed = s.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| Error::Parse { column: 1, message: "expected outer parentheses".into() })?;
    let mut out = Vec::new();
    let mut rest = inner;
    let mut offset = 2;
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| Error::Parse { column: offset, message: "expected '('".into() })?;
        let close = rest[open..]
            .find(')')
            .map(|k| k + open)
            .ok_or_else(|| Error::Parse { column: offset + open, message: "unclosed '('".into() })?;
        let body = &rest[open + 1..close];
        let parts: Vec<usize> = if body.contains(',') {
            body.split(',')
                .map(|x| {
                    x.trim().parse::<usize>().map_err(|_| Error::Parse {
                        column: offset + open + 1,
                        message: format!("bad part {:?}", x),
                    })
                })
                .collect::<Result<_>>()?
        } else {
            body.chars()
                .enumerate()
                .map(|(k, ch)| {
                    ch.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Parse {
                        column: offset + open + 1 + k,
                        message: format!("unexpected character {:?}", ch),
                    })
                })
                .collect::<Result<_>>()?
        };
        out.push(parts);
        offset += close + 1;
        rest = rest[close + 1..].trim_start_matches([',', ' ']);
    }
    Ok(out)
}

impl SolitonContent {
    pub fn parse(s: &str, length: usize) -> Result<Self> {
        Ok(SolitonContent::from_partitions(&parse_partitions(s)?, length))
    }
}

impl FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (l, m) = s.split_once('^').ok_or_else(|| Error::Parse { column: 1, message: "expected l^m".into() })?;
        let parse = |x: &str, column| {
            x.trim().parse::<usize>().map_err(|_| Error::Parse { column, message: format!("bad integer {:?}", x) })
        };
        Ok(Block { length: parse(l, 1)?, multiplicity: parse(m, l.len() + 2)? })
    }
}

/// Partitions of `total` into parts at most `largest`, parts decreasing.
pub fn partitions(total: usize, largest: usize) -> Vec<Vec<usize>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=total.min(largest)).rev() {
        for rest in partitions(total - first, first) {
            let mut parts = vec![first];
            parts.extend(rest);
            out.push(parts);
        }
    }
    out
}

/// Every `n`-tuple of partitions of size at most `length` with nonnegative vacancy numbers.
pub fn enumerate_configurations(n: usize, length: usize) -> Vec<SolitonContent> {
    let all: Vec<Vec<usize>> = (0..=length).flat_map(|s| partitions(s, s)).collect();
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                all.iter().map(move |part| {
                    let mut next = t.clone();
                    next.push(part.clone());
                    next
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|t| SolitonContent::from_partitions(&t, length))
        .filter(SolitonContent::is_configuration)
        .collect()
}
