//! Semistandard tableaux, Schensted insertion and the combinatorial R.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Letter = u8;

/// Semistandard tableau of arbitrary Young shape (rows listed top to bottom).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Tableau {
    rows: Vec<Vec<Letter>>,
}

impl Tableau {
    pub fn empty() -> Self {
        Tableau { rows: Vec::new() }
    }

    pub fn from_rows(rows: Vec<Vec<Letter>>) -> Result<Self> {
        let t = Tableau { rows };
        t.check()?;
        Ok(t)
    }

    /// The highest element of `B^{r,l}`: row `j` filled with `j`.
    pub fn highest(r: usize, l: usize) -> Self {
        Tableau { rows: (1..=r).map(|j| vec![j as Letter; l]).collect() }
    }

    fn check(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.is_empty() {
                return Err(Error::InvalidTableau("empty row".into()));
            }
            if i > 0 && row.len() > self.rows[i - 1].len() {
                return Err(Error::InvalidTableau(format!("row {} longer than the row above", i + 1)));
            }
            if row.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::InvalidTableau(format!("row {} decreases", i + 1)));
            }
            if row.contains(&0) {
                return Err(Error::InvalidTableau("letter 0".into()));
            }
            if i > 0 && row.iter().zip(&self.rows[i - 1]).any(|(below, above)| below <= above) {
                return Err(Error::InvalidTableau(format!("column not strict at row {}", i + 1)));
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<Letter>] {
        &self.rows
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_rectangle(&self, r: usize, l: usize) -> bool {
        self.rows.len() == r && self.rows.iter().all(|row| row.len() == l)
    }

    pub fn max_letter(&self) -> Letter {
        self.rows.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Letter counts, index 0 holding letter 1.
    pub fn content(&self, alphabet: usize) -> Vec<usize> {
        let mut counts = vec![0; alphabet];
        for &x in self.rows.iter().flatten() {
            counts[x as usize - 1] += 1;
        }
        counts
    }

    /// Row reading word: bottom row first, each left to right.
    pub fn row_word(&self) -> Vec<Letter> {
        self.rows.iter().rev().flatten().copied().collect()
    }

    /// `self <- x`.
    pub fn row_insert(&self, x: Letter) -> Tableau {
        let mut rows = self.rows.clone();
        let mut carry = x;
        for row in rows.iter_mut() {
            match row.iter().position(|&y| y > carry) {
                Some(pos) => carry = std::mem::replace(&mut row[pos], carry),
                None => {
                    row.push(carry);
                    return Tableau { rows };
                }
            }
        }
        rows.push(vec![carry]);
        Tableau { rows }
    }

    /// `x -> self`.
    pub fn column_insert(&self, x: Letter) -> Tableau {
        let mut rows = self.rows.clone();
        let mut carry = x;
        let mut col = 0;
        loop {
            let height = rows.iter().take_while(|row| row.len() > col).count();
            match (0..height).find(|&i| rows[i][col] >= carry) {
                Some(i) => {
                    carry = std::mem::replace(&mut rows[i][col], carry);
                    col += 1;
                }
                None => {
                    if height == rows.len() {
                        rows.push(vec![carry]);
                    } else {
                        rows[height].push(carry);
                    }
                    return Tableau { rows };
                }
            }
        }
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows.is_empty() {
            return write!(f, "()");
        }
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "/")?;
            }
            for x in row {
                write!(f, "{}", x)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tableau({})", self)
    }
}

impl FromStr for Tableau {
    type Err = Error;

    /// Rows joined by `/`, one digit per letter, e.g. `112/223`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "()" {
            return Ok(Tableau::empty());
        }
        let mut rows = Vec::new();
        let mut column = 0;
        for part in trimmed.split('/') {
            let mut row = Vec::new();
            for ch in part.chars() {
                column += 1;
                let digit = ch.to_digit(10).filter(|&d| d >= 1).ok_or_else(|| Error::Parse {
                    column,
                    message: format!("unexpected character {:?}", ch),
                })?;
                row.push(digit as Letter);
            }
            column += 1;
            rows.push(row);
        }
        Tableau::from_rows(rows)
    }
}

/// All semistandard `r x l` rectangles over `{1..=n+1}`, in row-major
/// lexicographic order. Fails once more than `limit` would be produced.
pub fn enumerate_tableaux(r: usize, l: usize, n: usize, limit: usize) -> Result<Vec<Tableau>> {
    assert!(r >= 1 && l >= 1);
    let top = (n + 1) as Letter;
    let mut out = Vec::new();
    let mut grid = vec![vec![0 as Letter; l]; r];
    fn fill(
        cell: usize,
        r: usize,
        l: usize,
        top: Letter,
        grid: &mut Vec<Vec<Letter>>,
        out: &mut Vec<Tableau>,
        limit: usize,
    ) -> Result<()> {
        if cell == r * l {
            if out.len() == limit {
                return Err(Error::CapacityExceeded { limit });
            }
            out.push(Tableau { rows: grid.clone() });
            return Ok(());
        }
        let (i, j) = (cell / l, cell % l);
        let mut low: Letter = 1;
        if j > 0 {
            low = low.max(grid[i][j - 1]);
        }
        if i > 0 {
            low = low.max(grid[i - 1][j] + 1);
        }
        // Leave room for the strictly increasing column below.
        let high = top.saturating_sub((r - 1 - i) as Letter);
        for x in low..=high {
            grid[i][j] = x;
            fill(cell + 1, r, l, top, grid, out, limit)?;
        }
        Ok(())
    }
    if r <= n + 1 {
        fill(0, r, l, top, &mut grid, &mut out, limit)?;
    }
    Ok(out)
}

/// Default cap on carrier spaces.
pub const TABLEAU_LIMIT: usize = 2_000_000;

/// Local energy value of a product shape.
fn energy_of_shape(shape: &[usize], r: usize, l: usize) -> Result<u8> {
    let mut h0 = vec![l; r];
    h0[0] = l + 1;
    let mut h1 = vec![l; r];
    h1.push(1);
    if shape == h0.as_slice() {
        Ok(0)
    } else if shape == h1.as_slice() {
        Ok(1)
    } else {
        Err(Error::InternalInvariantViolation(format!("unexpected product shape {:?}", shape)))
    }
}

/// `R(b (x) c) = c' (x) b'` with local energy, found by exhaustive search
/// over `B^{1,1} x B^{r,l}`.
pub fn combinatorial_r(b: &Tableau, c: Letter, n: usize) -> Result<(Letter, Tableau, u8)> {
    let r = b.rows().len();
    let l = b.rows().first().map_or(0, Vec::len);
    if !b.is_rectangle(r, l) || r == 0 {
        return Err(Error::InvalidTableau(format!("{} is not a rectangle", b)));
    }
    let product = b.column_insert(c);
    let h = energy_of_shape(&product.shape(), r, l)?;
    let mut found = Vec::new();
    for candidate in enumerate_tableaux(r, l, n, TABLEAU_LIMIT)? {
        for c2 in 1..=(n + 1) as Letter {
            if candidate.row_insert(c2) == product {
                found.push((c2, candidate.clone()));
            }
        }
    }
    match found.len() {
        1 => {
            let (c2, b2) = found.pop().unwrap();
            Ok((c2, b2, h))
        }
        k => Err(Error::InternalInvariantViolation(format!("{} preimages for {} (x) {}", k, b, c))),
    }
}

/// Precomputed R on `B^{r,l} (x) B^{1,1}` with tableaux referenced by index.
#[derive(Clone, Debug)]
pub struct RTable {
    pub r: usize,
    pub l: usize,
    pub n: usize,
    pub tableaux: Vec<Tableau>,
    index: HashMap<Tableau, usize>,
    /// `entries[b * (n+1) + (c-1)] = (c', b', h)`
    entries: Vec<(Letter, u32, u8)>,
}

impl RTable {
    pub fn build(r: usize, l: usize, n: usize) -> Result<Self> {
        Self::build_with_limit(r, l, n, TABLEAU_LIMIT)
    }

    pub fn build_with_limit(r: usize, l: usize, n: usize, limit: usize) -> Result<Self> {
        let tableaux = enumerate_tableaux(r, l, n, limit)?;
        let index: HashMap<Tableau, usize> = tableaux.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let alphabet = n + 1;
        let mut by_product: HashMap<Tableau, (Letter, usize)> = HashMap::with_capacity(tableaux.len() * alphabet);
        for (idx, t) in tableaux.iter().enumerate() {
            for c in 1..=alphabet as Letter {
                if by_product.insert(t.row_insert(c), (c, idx)).is_some() {
                    return Err(Error::InternalInvariantViolation("row products collide".into()));
                }
            }
        }
        let mut entries = Vec::with_capacity(tableaux.len() * alphabet);
        for t in &tableaux {
            for c in 1..=alphabet as Letter {
                let product = t.column_insert(c);
                let h = energy_of_shape(&product.shape(), r, l)?;
                let &(c2, b2) = by_product.get(&product).ok_or_else(|| {
                    Error::InternalInvariantViolation(format!("no preimage for {} (x) {}", t, c))
                })?;
                entries.push((c2, b2 as u32, h));
            }
        }
        Ok(RTable { r, l, n, tableaux, index, entries })
    }

    pub fn len(&self) -> usize {
        self.tableaux.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tableaux.is_empty()
    }

    pub fn index_of(&self, t: &Tableau) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// `(c', b' index, h)` for carrier index `b` and letter `c`.
    #[inline]
    pub fn apply(&self, b: usize, c: Letter) -> (Letter, usize, u8) {
        let (c2, b2, h) = self.entries[b * (self.n + 1) + (c as usize - 1)];
        (c2, b2 as usize, h)
    }
}
