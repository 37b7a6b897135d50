//! Tropical tau function, period matrix `B` and the tropical Riemann theta function.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::automaton::r_table;
use crate::content::{cartan, BlockId, SolitonContent};
use crate::error::{Error, Result};
use crate::linalg::{rat, rat_int, solve_integer_rhs, Matrix, Rational};
use crate::path::Path;
use crate::rigged::RiggedConfiguration;
use crate::tableau::{Letter, Tableau};

/// Period matrix data over the row set `H`.
#[derive(Clone, Debug)]
pub struct ThetaData {
    pub content: SolitonContent,
    /// Rows `(block, alpha)`, block-major.
    pub rows: Vec<(BlockId, usize)>,
    pub b: Matrix,
    pub p_vec: Vec<i64>,
    b_small: Vec<Vec<i64>>,
    small: Option<Ldl<Ratio<i128>>>,
    big: Ldl<Rational>,
}

impl ThetaData {
    pub fn new(content: &SolitonContent) -> Result<Self> {
        let rows = content.row_ids();
        let size = rows.len();
        let mut b_small = vec![vec![0i64; size]; size];
        let mut p_vec = Vec::with_capacity(size);
        for (x, &(id_x, alpha_x)) in rows.iter().enumerate() {
            let lx = content.block(id_x).length;
            p_vec.push(content.vacancy(id_x));
            for (y, &(id_y, alpha_y)) in rows.iter().enumerate() {
                let ly = content.block(id_y).length;
                let mut v = cartan(id_x.color, id_y.color) * lx.min(ly) as i64;
                if x == y {
                    debug_assert_eq!((id_x, alpha_x), (id_y, alpha_y));
                    v += content.vacancy(id_x);
                }
                b_small[x][y] = v;
            }
        }
        let b = Matrix::from_i64(&b_small);
        let big = Ldl::<Rational>::new(&b_small).ok_or(Error::NotPositiveDefinite)?;
        let small = Ldl::<Ratio<i128>>::new(&b_small);
        Ok(ThetaData { content: content.clone(), rows, b, p_vec, b_small, small, big })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// `h^(c)_l` over `H`; `l = None` is `l = infinity`; `c = n + 1` gives zero.
    pub fn h(&self, c: usize, l: Option<usize>) -> Vec<i64> {
        self.rows
            .iter()
            .map(|&(id, _)| {
                if id.color == c {
                    let length = self.content.block(id).length;
                    l.map_or(length, |l| l.min(length)) as i64
                } else {
                    0
                }
            })
            .collect()
    }

    pub fn one_vec(&self) -> Vec<i64> {
        vec![1; self.dim()]
    }

    /// `B` symmetric, `B 1 = L h^(1)_1` and `1 . h^(c)_inf = |mu^(c)|`.
    pub fn identities_hold(&self) -> bool {
        let length = self.content.length as i64;
        let h11 = self.h(1, Some(1));
        let row_sums_ok = self.b_small.iter().zip(&h11).all(|(row, &h)| row.iter().sum::<i64>() == length * h);
        let sizes_ok = (1..=self.content.n())
            .all(|c| self.h(c, None).iter().sum::<i64>() == self.content.size(c) as i64);
        self.b.is_symmetric() && row_sums_ok && sizes_ok
    }

    /// `2 Theta(zz / 2) = -min_n (n B n + zz . n)` together with the lexicographically least minimizer.
    pub fn theta2(&self, zz: &[i64]) -> (i128, Vec<i64>) {
        assert_eq!(zz.len(), self.dim());
        if self.dim() == 0 {
            return (0, Vec::new());
        }
        let (value, n) = self
            .small
            .as_ref()
            .and_then(|ldl| minimize(ldl, &self.b_small, zz))
            .or_else(|| minimize(&self.big, &self.b_small, zz))
            .expect("arbitrary precision search cannot overflow");
        (-value, n)
    }

    /// `Theta(z)` for `z` with `2 z` integral.
    pub fn theta(&self, z: &[Rational]) -> Rational {
        let zz: Vec<i64> = z
            .iter()
            .map(|x| {
                let doubled = x * BigInt::from(2);
                assert!(doubled.is_integer(), "theta argument must be half-integral");
                doubled.to_integer().to_i64().expect("theta argument out of range")
            })
            .collect();
        Ratio::new(BigInt::from(self.theta2(&zz).0), BigInt::from(2))
    }

    /// `B^{-1} v` exactly.
    pub fn b_inverse(&self, v: &[i64]) -> Vec<Rational> {
        let rhs: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        solve_integer_rhs(&self.b, &rhs).expect("B is positive definite")
    }

    /// `x^t B^{-1} y`.
    pub fn pairing(&self, x: &[i64], y: &[i64]) -> Rational {
        let inv = self.b_inverse(y);
        x.iter().zip(inv).fold(Rational::zero(), |acc, (&a, b)| acc + b * BigInt::from(a))
    }

    /// Rigging vector of `rc` in the row order of this data.
    pub fn rigging_vector(&self, rc: &RiggedConfiguration) -> Vec<i64> {
        rc.rigging_vector()
    }
}

/// `B = L D L^t` over an exact field, with `L` unit lower triangular.
#[derive(Clone, Debug)]
struct Ldl<F> {
    lower: Vec<Vec<F>>,
    diag: Vec<F>,
}

trait Exact: Clone + PartialOrd + Sized {
    fn int(x: i128) -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn floor(&self) -> Option<i64>;
    fn positive(&self) -> bool;
}

impl Exact for Ratio<i128> {
    fn int(x: i128) -> Self {
        Ratio::from_integer(x)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn floor(&self) -> Option<i64> {
        let (n, d) = (*self.numer(), *self.denom());
        i64::try_from(n.div_euclid(d)).ok()
    }
    fn positive(&self) -> bool {
        *self.numer() > 0
    }
}

impl Exact for Rational {
    fn int(x: i128) -> Self {
        Ratio::from_integer(BigInt::from(x))
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn floor(&self) -> Option<i64> {
        Ratio::floor(self).to_integer().to_i64()
    }
    fn positive(&self) -> bool {
        self.is_positive()
    }
}

impl<F: Exact> Ldl<F> {
    /// `None` if `B` is not positive definite or arithmetic overflows.
    fn new(b: &[Vec<i64>]) -> Option<Self> {
        let size = b.len();
        let mut lower = vec![vec![F::int(0); size]; size];
        let mut diag: Vec<F> = Vec::with_capacity(size);
        for i in 0..size {
            for j in 0..=i {
                let mut s = F::int(b[i][j] as i128);
                for k in 0..j {
                    s = s.sub(&lower[i][k].mul(&lower[j][k])?.mul(&diag[k])?)?;
                }
                if i == j {
                    if !s.positive() {
                        return None;
                    }
                    lower[i][i] = F::int(1);
                    diag.push(s);
                } else {
                    lower[i][j] = s.div(&diag[j])?;
                }
            }
        }
        Some(Ldl { lower, diag })
    }

    /// `B^{-1} rhs`.
    #[allow(clippy::needless_range_loop)]
    fn solve(&self, rhs: &[F]) -> Option<Vec<F>> {
        let size = rhs.len();
        let mut y: Vec<F> = Vec::with_capacity(size);
        for i in 0..size {
            let mut s = rhs[i].clone();
            for k in 0..i {
                s = s.sub(&self.lower[i][k].mul(&y[k])?)?;
            }
            y.push(s);
        }
        let mut x = vec![F::int(0); size];
        for i in (0..size).rev() {
            let mut s = y[i].div(&self.diag[i])?;
            for k in i + 1..size {
                s = s.sub(&self.lower[k][i].mul(&x[k])?)?;
            }
            x[i] = s;
        }
        Some(x)
    }
}

fn quadratic_value(b: &[Vec<i64>], zz: &[i64], n: &[i64]) -> i128 {
    let mut v: i128 = 0;
    for i in 0..n.len() {
        if n[i] == 0 {
            continue;
        }
        let mut row: i128 = zz[i] as i128;
        for j in 0..n.len() {
            row += b[i][j] as i128 * n[j] as i128;
        }
        v += row * n[i] as i128;
    }
    v
}

struct Search<'a, F> {
    ldl: &'a Ldl<F>,
    b: &'a [Vec<i64>],
    zz: &'a [i64],
    center: Vec<F>,
    bound: F,
    best: Option<(i128, Vec<i64>)>,
    current: Vec<i64>,
}

impl<F: Exact> Search<'_, F> {
    /// Conditional center of coordinate `k` given the coordinates above it.
    fn level_center(&self, k: usize) -> Option<F> {
        let mut c = self.center[k].clone();
        for j in k + 1..self.current.len() {
            let y = F::int(self.current[j] as i128).sub(&self.center[j])?;
            c = c.sub(&self.ldl.lower[j][k].mul(&y)?)?;
        }
        Some(c)
    }

    fn term(&self, k: usize, t: i64, cen: &F) -> Option<F> {
        let d = F::int(t as i128).sub(cen)?;
        d.mul(&d)?.mul(&self.ldl.diag[k])
    }

    fn leaf(&mut self) {
        let value = quadratic_value(self.b, self.zz, &self.current);
        let better = match &self.best {
            None => true,
            Some((v, n)) => value < *v || (value == *v && self.current < *n),
        };
        if better {
            self.best = Some((value, self.current.clone()));
        }
    }

    fn descend(&mut self, k: usize, partial: F) -> Option<()> {
        let cen = self.level_center(k)?;
        let start = cen.floor()?;
        for direction in [-1i64, 1] {
            let mut t = if direction < 0 { start } else { start + 1 };
            loop {
                let total = partial.add(&self.term(k, t, &cen)?)?;
                if total > self.bound {
                    break;
                }
                self.current[k] = t;
                if k == 0 {
                    self.leaf();
                    if total < self.bound {
                        self.bound = total;
                    }
                } else {
                    self.descend(k - 1, total)?;
                }
                t += direction;
            }
        }
        Some(())
    }

    /// Nearest-plane point used as the first incumbent.
    fn babai(&mut self) -> Option<F> {
        let half = F::int(1).div(&F::int(2))?;
        let mut total = F::int(0);
        for k in (0..self.current.len()).rev() {
            let cen = self.level_center(k)?;
            let t = cen.add(&half)?.floor()?;
            self.current[k] = t;
            total = total.add(&self.term(k, t, &cen)?)?;
        }
        Some(total)
    }
}

fn minimize<F: Exact>(ldl: &Ldl<F>, b: &[Vec<i64>], zz: &[i64]) -> Option<(i128, Vec<i64>)> {
    let size = zz.len();
    let rhs: Vec<F> = zz.iter().map(|&x| F::int(-(x as i128))).collect::<Vec<_>>();
    let two = F::int(2);
    let center: Vec<F> = ldl.solve(&rhs)?.into_iter().map(|x| x.div(&two)).collect::<Option<_>>()?;
    let mut search =
        Search { ldl, b, zz, center, bound: F::int(0), best: None, current: vec![0; size] };
    search.bound = search.babai()?;
    search.leaf();
    search.descend(size - 1, F::int(0))?;
    search.best
}

/// Doubled argument `2 (r - p/2 - k h^(1)_1 + extra)` for the theta formulas.
fn doubled_argument(data: &ThetaData, r: &[i64], k: i64, extra: &[&[i64]]) -> Vec<i64> {
    let h11 = data.h(1, Some(1));
    (0..data.dim())
        .map(|x| 2 * r[x] - data.p_vec[x] - 2 * k * h11[x] + 2 * extra.iter().map(|v| v[x]).sum::<i64>())
        .collect()
}

struct ThetaCache<'a> {
    data: &'a ThetaData,
    memo: HashMap<Vec<i64>, i128>,
}

impl<'a> ThetaCache<'a> {
    fn new(data: &'a ThetaData) -> Self {
        ThetaCache { data, memo: HashMap::new() }
    }

    fn get(&mut self, zz: Vec<i64>) -> i128 {
        if let Some(&v) = self.memo.get(&zz) {
            return v;
        }
        let v = self.data.theta2(&zz).0;
        self.memo.insert(zz, v);
        v
    }
}

/// `h^(c)_inf` for `0 <= c <= n + 1`, where `c = 0` never occurs and `c = n + 1` is zero.
fn h_inf(data: &ThetaData, c: usize) -> Vec<i64> {
    if c > data.content.n() {
        vec![0; data.dim()]
    } else {
        data.h(c, None)
    }
}

fn halve(k: usize, color: usize, doubled: i128) -> Result<i64> {
    if doubled % 2 != 0 {
        return Err(Error::NonBinaryDigit { k, color, value: format!("{}/2", doubled) });
    }
    Ok((doubled / 2) as i64)
}

/// Path digits from the theta formula for the rigging vector `r` over `H`.
pub fn theta_path(data: &ThetaData, r: &[i64]) -> Result<Path> {
    let n = data.content.n();
    let length = data.content.length;
    let mut cache = ThetaCache::new(data);
    let mut letters: Vec<Letter> = Vec::with_capacity(length);
    for k in 1..=length {
        let mut letter = 1;
        let mut balls = 0;
        for a in 2..=n + 1 {
            let ha = h_inf(data, a);
            let hb = h_inf(data, a - 1);
            let ki = k as i64;
            let doubled = cache.get(doubled_argument(data, r, ki, &[&ha]))
                - cache.get(doubled_argument(data, r, ki - 1, &[&ha]))
                - cache.get(doubled_argument(data, r, ki, &[&hb]))
                + cache.get(doubled_argument(data, r, ki - 1, &[&hb]));
            let x = halve(k, a, doubled)?;
            if !(0..=1).contains(&x) {
                return Err(Error::NonBinaryDigit { k, color: a, value: x.to_string() });
            }
            if x == 1 {
                letter = a;
                balls += 1;
            }
        }
        if balls > 1 {
            return Err(Error::NonBinaryDigit { k, color: 1, value: (1 - balls).to_string() });
        }
        letters.push(letter as Letter);
    }
    Path::new(letters, n)
}

/// Carrier occupancies `(y_{k,1}, .., y_{k,n+1})` of `B^{1,l}` after site `k`.
pub fn theta_carrier(data: &ThetaData, r: &[i64], l: usize, k: usize) -> Result<Vec<i64>> {
    let n = data.content.n();
    let h1l = data.h(1, Some(l));
    let mut cache = ThetaCache::new(data);
    let ki = k as i64;
    let mut occupancy = vec![0i64; n + 1];
    for a in 2..=n + 1 {
        let ha = h_inf(data, a);
        let hb = h_inf(data, a - 1);
        let doubled = cache.get(doubled_argument(data, r, ki, &[&ha]))
            - cache.get(doubled_argument(data, r, ki, &[&h1l, &ha]))
            - cache.get(doubled_argument(data, r, ki, &[&hb]))
            + cache.get(doubled_argument(data, r, ki, &[&h1l, &hb]));
        occupancy[a - 1] = halve(k, a, doubled)?;
    }
    occupancy[0] = l as i64 - occupancy[1..].iter().sum::<i64>();
    for (a, &y) in occupancy.iter().enumerate() {
        if y < 0 {
            return Err(Error::NegativeOccupancy { k, color: a + 1, value: y.to_string() });
        }
    }
    Ok(occupancy)
}

/// `<y_{k,a}>_l = h^(1)_l B^{-1} (h^(a-1)_inf - h^(a)_inf)`; `l = None` is infinity.
pub fn time_average(data: &ThetaData, l: Option<usize>, a: usize) -> Rational {
    assert!(a >= 2 && a <= data.content.n() + 1, "color must lie in 2..=n+1");
    let diff: Vec<i64> = h_inf(data, a - 1).iter().zip(h_inf(data, a)).map(|(x, y)| x - y).collect();
    data.pairing(&data.h(1, l), &diff)
}

/// Occupancy of color `a` in a one-row tableau.
fn occupancy(t: &Tableau, a: usize) -> i64 {
    t.rows()[0].iter().filter(|&&x| x as usize == a).count() as i64
}

/// Carriers `y_0 .. y_L` for `T^(1)_l`: `y_0` is the carrier left behind by the all-1 row.
pub fn simulated_carriers(p: &Path, l: usize) -> Result<Vec<Tableau>> {
    let table = r_table(1, l, p.n())?;
    let top = table.index_of(&Tableau::highest(1, l)).expect("highest tableau is enumerated");
    let mut v = top;
    for &b in p.letters() {
        v = table.apply(v, b).1;
    }
    let mut carriers = vec![table.tableaux[v].clone()];
    let start = v;
    for &b in p.letters() {
        v = table.apply(v, b).1;
        carriers.push(table.tableaux[v].clone());
    }
    if v != start {
        return Err(Error::Mismatch(format!("carrier from the highest row is not periodic on {}", p)));
    }
    Ok(carriers)
}

/// Average over `period` steps of `T^(1)_l` of the color-`a` occupancy of the carrier after site `k`,
/// for every `k` in `0..L`.
pub fn simulated_averages(p: &Path, l: usize, a: usize, period: u64) -> Result<Vec<Rational>> {
    let mut sums = vec![0i64; p.len()];
    let mut cur = p.clone();
    for _ in 0..period {
        let carriers = simulated_carriers(&cur, l)?;
        for (k, sum) in sums.iter_mut().enumerate() {
            *sum += occupancy(&carriers[k], a);
        }
        cur = crate::automaton::evolve_finite(1, l, &cur)?.path;
    }
    if &cur != p {
        return Err(Error::Mismatch(format!("{} steps of T[1,{}] do not return to {}", period, l, p)));
    }
    Ok(sums.into_iter().map(|s| rat(s, period as i64)).collect())
}

/// `tau_{k,d}` by exhaustive minimization over `{0,1}^G`; `bar` adds `l delta_{a1}` to riggings.
pub fn tau(rc: &RiggedConfiguration, k: i64, d: usize, bar: bool) -> i64 {
    let mu = &rc.content;
    let rows = mu.row_ids();
    let r = rc.rigging_vector();
    let size = rows.len();
    assert!(size < 28, "tau enumeration over 2^{} candidates", size);
    let lengths: Vec<usize> = rows.iter().map(|&(id, _)| mu.block(id).length).collect();
    let colors: Vec<usize> = rows.iter().map(|&(id, _)| id.color).collect();
    let linear: Vec<i64> = (0..size)
        .map(|x| {
            let mut v = r[x];
            if colors[x] == 1 {
                v -= k;
                if bar {
                    v += lengths[x] as i64;
                }
            }
            if colors[x] == d {
                v += lengths[x] as i64;
            }
            v
        })
        .collect();
    let mut best = 0i64;
    for mask in 1u64..(1u64 << size) {
        let mut quad = 0i64;
        let mut lin = 0i64;
        for x in 0..size {
            if mask >> x & 1 == 0 {
                continue;
            }
            lin += linear[x];
            for y in 0..size {
                if mask >> y & 1 == 1 {
                    quad += cartan(colors[x], colors[y]) * lengths[x].min(lengths[y]) as i64;
                }
            }
        }
        best = best.min(quad / 2 + lin);
    }
    -best
}

/// Path from the tau double differences.
pub fn tau_path(rc: &RiggedConfiguration) -> Result<Path> {
    let n = rc.n();
    let mut letters = Vec::with_capacity(rc.length());
    for k in 1..=rc.length() as i64 {
        let mut letter = 1usize;
        let mut balls = 0;
        for a in 2..=n + 1 {
            let x = tau(rc, k, a, false) - tau(rc, k - 1, a, false) - tau(rc, k, a - 1, false)
                + tau(rc, k - 1, a - 1, false);
            if !(0..=1).contains(&x) {
                return Err(Error::NonBinaryDigit { k: k as usize, color: a, value: x.to_string() });
            }
            if x == 1 {
                letter = a;
                balls += 1;
            }
        }
        if balls > 1 {
            return Err(Error::NonBinaryDigit { k: k as usize, color: 1, value: (1 - balls).to_string() });
        }
        letters.push(letter as Letter);
    }
    Path::new(letters, n)
}

/// Tropical Hirota relation for `tau` at every `1 <= k <= L`, `2 <= d <= n + 1`.
pub fn tau_hirota_holds(rc: &RiggedConfiguration) -> bool {
    let n = rc.n();
    (1..=rc.length() as i64).all(|k| {
        (2..=n + 1).all(|d| {
            let lhs = tau(rc, k - 1, d, false) + tau(rc, k, d - 1, true);
            let rhs = (tau(rc, k, d, true) + tau(rc, k - 1, d - 1, false))
                .max(tau(rc, k, d, false) + tau(rc, k - 1, d - 1, true) - 1);
            lhs == rhs
        })
    })
}

/// Theta form of the Hirota relation at `J = r - p/2 - k h^(1)_1`, doubled.
pub fn theta_hirota_holds(data: &ThetaData, r: &[i64], k: i64) -> bool {
    let n = data.content.n();
    let h11 = data.h(1, Some(1));
    let h1inf = data.h(1, None);
    (2..=n + 1).all(|d| {
        let hd = h_inf(data, d);
        let hd1 = h_inf(data, d - 1);
        let t = |extra: &[&[i64]]| data.theta2(&doubled_argument(data, r, k, extra)).0;
        let lhs = t(&[&h1inf, &hd1]) + t(&[&h11, &hd]);
        let rhs = (t(&[&h1inf, &hd]) + t(&[&h11, &hd1])).max(t(&[&h11, &h1inf, &hd1]) + t(&[&hd]) - 2);
        lhs == rhs
    })
}

/// Quasi-periodicity `Theta(z + B m) = Theta(z) + (B m)^t B^{-1} (z + B m / 2)` with `z = zz / 2`.
pub fn quasi_periodicity_holds(data: &ThetaData, zz: &[i64], m: &[i64]) -> bool {
    let bm: Vec<i64> = data.b_small.iter().map(|row| row.iter().zip(m).map(|(x, y)| x * y).sum()).collect();
    let shifted: Vec<i64> = zz.iter().zip(&bm).map(|(z, v)| z + 2 * v).collect();
    let lhs = rat_int(&BigInt::from(data.theta2(&shifted).0)) / BigInt::from(2);
    // (Bm)^t B^{-1} (z + Bm/2) = m^t z + m^t B m / 2.
    let mz: i64 = m.iter().zip(zz).map(|(a, b)| a * b).sum();
    let mbm: i64 = m.iter().zip(&bm).map(|(a, b)| a * b).sum();
    let rhs = rat_int(&BigInt::from(data.theta2(zz).0)) / BigInt::from(2) + rat(mz, 2) + rat(mbm, 2);
    lhs == rhs
}

/// `tau^M` double differences from the replica-reduced form; `n_x` counts the leading ones among `M` replicas, so `n` ranges over `[0, M]^G`.
pub fn replica_path(rc: &RiggedConfiguration, replicas: usize) -> Result<Path> {
    let mu = &rc.content;
    let data = ThetaData::new(mu)?;
    let r = rc.rigging_vector();
    let size = data.dim();
    let total = (replicas as u64 + 1).checked_pow(size as u32).filter(|&t| t <= 5_000_000).ok_or(Error::BudgetExceeded {
        budget: 5_000_000,
    })?;
    let colors: Vec<usize> = data.rows.iter().map(|&(id, _)| id.color).collect();
    let lengths: Vec<i64> = data.rows.iter().map(|&(id, _)| mu.block(id).length as i64).collect();
    let n = mu.n();
    // Per candidate: the k-independent and d-independent parts, and the counts that k and d multiply.
    let mut base = Vec::with_capacity(total as usize);
    let mut color_one = Vec::with_capacity(total as usize);
    let mut per_color: Vec<Vec<i64>> = Vec::with_capacity(total as usize);
    let mut digits = vec![0i64; size];
    for _ in 0..total {
        let mut value = 0i64;
        for x in 0..size {
            for y in 0..size {
                value += data.b_small[x][y] * digits[x] * digits[y];
            }
            value -= data.p_vec[x] * digits[x] * digits[x];
        }
        let mut v = value / 2;
        let mut ones = 0i64;
        let mut by_color = vec![0i64; n + 2];
        for x in 0..size {
            v += r[x] * digits[x] + digits[x] * (digits[x] - 1) / 2 * data.p_vec[x];
            if colors[x] == 1 {
                ones += digits[x];
            }
            by_color[colors[x]] += lengths[x] * digits[x];
        }
        base.push(v);
        color_one.push(ones);
        per_color.push(by_color);
        for digit in digits.iter_mut() {
            *digit += 1;
            if *digit <= replicas as i64 {
                break;
            }
            *digit = 0;
        }
    }
    let tau_m = |k: i64, d: usize| -> i64 {
        let mut best = i64::MAX;
        for c in 0..base.len() {
            let extra = if d <= n { per_color[c][d] } else { 0 };
            best = best.min(base[c] - k * color_one[c] + extra);
        }
        -best
    };
    let length = mu.length * replicas;
    let mut letters = Vec::with_capacity(length);
    for k in 1..=length as i64 {
        let mut letter = 1usize;
        for a in 2..=n + 1 {
            let x = tau_m(k, a) - tau_m(k - 1, a) - tau_m(k, a - 1) + tau_m(k - 1, a - 1);
            if !(0..=1).contains(&x) {
                return Err(Error::NonBinaryDigit { k: k as usize, color: a, value: x.to_string() });
            }
            if x == 1 {
                letter = a;
            }
        }
        letters.push(letter as Letter);
    }
    Path::new(letters, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigged::{enumerate_rc, kkr_backward};

    fn running_rc() -> RiggedConfiguration {
        RiggedConfiguration::new(
            SolitonContent::parse("((33222),(41))", 24).unwrap(),
            vec![vec![vec![2, 4], vec![1, 5, 6]], vec![vec![0], vec![0]]],
        )
        .unwrap()
    }

    #[test]
    fn period_matrix_of_the_running_example() {
        let data = ThetaData::new(&running_rc().content).unwrap();
        assert_eq!(
            data.b.to_i64_rows(),
            vec![
                vec![10, 6, 4, 4, 4, -3, -1],
                vec![6, 10, 4, 4, 4, -3, -1],
                vec![4, 4, 11, 4, 4, -2, -1],
                vec![4, 4, 4, 11, 4, -2, -1],
                vec![4, 4, 4, 4, 11, -2, -1],
                vec![-3, -3, -2, -2, -2, 10, 2],
                vec![-1, -1, -1, -1, -1, 2, 3],
            ]
        );
        assert_eq!(data.p_vec, vec![4, 4, 7, 7, 7, 2, 1]);
        assert_eq!(data.h(1, None), vec![3, 3, 2, 2, 2, 0, 0]);
        assert_eq!(data.h(2, Some(3)), vec![0, 0, 0, 0, 0, 3, 1]);
        assert!(data.identities_hold());
        assert!(data.b.is_positive_definite());
    }

    #[test]
    fn theta_at_zero_and_small_cases() {
        let data = ThetaData::new(&running_rc().content).unwrap();
        assert_eq!(data.theta2(&[0; 7]).0, 0);
        let single = ThetaData::new(&SolitonContent::parse("((2))", 6).unwrap()).unwrap();
        // B = (2 + 4) = 6; -min(6 n^2 + zz n) at zz = 7 is at n = -1: 6 - 7 = -1.
        assert_eq!(single.theta2(&[7]), (1, vec![-1]));
        assert_eq!(single.theta2(&[6]), (0, vec![-1]));
    }

    #[test]
    fn theta_path_reproduces_highest_path() {
        let rc = running_rc();
        let data = ThetaData::new(&rc.content).unwrap();
        assert_eq!(theta_path(&data, &rc.rigging_vector()).unwrap().to_string(), "111221113221132113311322");
    }

    #[test]
    fn tau_matches_kkr_on_small_system() {
        let mu = SolitonContent::parse("((211),(1))", 8).unwrap();
        for rc in enumerate_rc(&mu) {
            let expected = kkr_backward(&rc).unwrap();
            assert_eq!(tau_path(&rc).unwrap(), expected);
            assert!(tau_hirota_holds(&rc));
        }
    }

    #[test]
    fn time_averages_of_the_running_example() {
        let data = ThetaData::new(&running_rc().content).unwrap();
        assert_eq!(time_average(&data, None, 2), rat(155, 194));
        assert_eq!(time_average(&data, None, 3), rat(109, 194));
        assert_eq!(time_average(&data, Some(1), 2), rat(7, 24));
        assert_eq!(time_average(&data, Some(2), 3), rat(5, 12));
    }
}
