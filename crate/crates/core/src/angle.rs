//! Angle variables, slides, torus data, state counting and dynamical periods.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::automaton::{admissible_generators, default_generators, evolve_power, orbit_closure, Generator, Orbit};
use crate::bethe::{fractional, string_centers};
use crate::content::{cartan, BlockId, SolitonContent};
use crate::error::{Error, Result};
use crate::linalg::{binomial_ext, det_bareiss, divisors, lcm_rationals, mobius, rat_int, solve_integer_rhs, Matrix, Rational};
use crate::path::Path;
use crate::rigged::{kkr_backward, kkr_forward, RiggedConfiguration};
use crate::tropical::{theta_path, ThetaData};

/// Orbit sizes beyond this abort the closure used by scattering.
pub const ORBIT_BUDGET: usize = 2_000_000;

/// An extended rigging split as `omega = r_1` and `lambda = r - r_1` per block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AngleVariable {
    pub content: SolitonContent,
    /// One entry per block, color-major.
    pub omega: Vec<i64>,
    /// One window `0 = lambda_1 <= .. <= lambda_m <= p` per block.
    pub lambda: Vec<Vec<i64>>,
}

impl AngleVariable {
    /// From one window `r_1 .. r_m` per block of a nondecreasing quasi-periodic sequence.
    pub fn from_windows(content: &SolitonContent, windows: Vec<Vec<i64>>) -> Result<Self> {
        let ids = content.block_ids();
        if windows.len() != ids.len() {
            return Err(Error::Mismatch(format!("{} windows for {} blocks", windows.len(), ids.len())));
        }
        let mut omega = Vec::with_capacity(ids.len());
        let mut lambda = Vec::with_capacity(ids.len());
        for (id, mut w) in ids.into_iter().zip(windows) {
            let block = content.block(id);
            w.sort_unstable();
            if w.len() != block.multiplicity {
                return Err(Error::Mismatch(format!("block ({},{}) window has {} entries", id.color, id.block, w.len())));
            }
            let p = content.vacancy(id);
            if w[w.len() - 1] - w[0] > p {
                return Err(Error::Mismatch(format!(
                    "block ({},{}) window {:?} spans more than p = {}",
                    id.color, id.block, w, p
                )));
            }
            omega.push(w[0]);
            lambda.push(w.iter().map(|x| x - w[0]).collect());
        }
        Ok(AngleVariable { content: content.clone(), omega, lambda })
    }

    pub fn from_rc(rc: &RiggedConfiguration) -> Self {
        let windows = rc.content.block_ids().into_iter().map(|id| rc.block_riggings(id).to_vec()).collect();
        AngleVariable::from_windows(&rc.content, windows).expect("riggings of a rigged configuration form windows")
    }

    pub fn windows(&self) -> Vec<Vec<i64>> {
        self.omega.iter().zip(&self.lambda).map(|(w, l)| l.iter().map(|x| x + w).collect()).collect()
    }

    /// Riggings over `H`, block-major with `alpha` ascending.
    pub fn rigging_vector(&self) -> Vec<i64> {
        self.windows().into_iter().flatten().collect()
    }

    /// `r_beta` of block `q` (index into the block list) for any integer `beta`, 1-based.
    pub fn extended(&self, q: usize, beta: i64) -> i64 {
        let m = self.lambda[q].len() as i64;
        let id = self.content.block_ids()[q];
        let (turns, rem) = ((beta - 1).div_euclid(m), (beta - 1).rem_euclid(m));
        self.omega[q] + self.lambda[q][rem as usize] + turns * self.content.vacancy(id)
    }

    /// The rigged configuration with these windows, if every rigging lies in `[0, p]`.
    pub fn to_rc(&self) -> Option<RiggedConfiguration> {
        let mut riggings: Vec<Vec<Vec<i64>>> =
            (1..=self.content.n()).map(|a| vec![Vec::new(); self.content.blocks(a).len()]).collect();
        for (id, w) in self.content.block_ids().into_iter().zip(self.windows()) {
            riggings[id.color - 1][id.block - 1] = w;
        }
        RiggedConfiguration::new(self.content.clone(), riggings).ok().filter(RiggedConfiguration::is_valid)
    }
}

/// `omega <- omega + t h^(r)_l`.
pub fn apply_time(av: &AngleVariable, r: usize, l: usize, t: i64) -> AngleVariable {
    let mut out = av.clone();
    for (q, id) in av.content.block_ids().into_iter().enumerate() {
        if id.color == r {
            out.omega[q] += t * l.min(av.content.block(id).length) as i64;
        }
    }
    out
}

/// `(s^(a)_i)^power` acting on the extended rigging.
pub fn apply_slide(av: &AngleVariable, id: BlockId, power: i64) -> AngleVariable {
    let mu = &av.content;
    let ids = mu.block_ids();
    let target = ids.iter().position(|&x| x == id).expect("slide block exists");
    let lt = mu.block(id).length;
    let mut windows = av.windows();
    let m = mu.block(id).multiplicity as i64;
    windows[target] = (1..=m).map(|beta| av.extended(target, beta + power)).collect();
    for (q, other) in ids.iter().enumerate() {
        let shift = power * cartan(id.color, other.color) * lt.min(mu.block(*other).length) as i64;
        for x in windows[q].iter_mut() {
            *x += shift;
        }
    }
    AngleVariable::from_windows(mu, windows).expect("slides preserve quasi-periodic windows")
}

/// Largest `gamma | gcd(m, p)` with `lambda_{alpha + m/gamma} = lambda_alpha + p/gamma`.
pub fn window_symmetry(lambda: &[i64], p: i64) -> u64 {
    let m = lambda.len() as u64;
    let g = m.gcd(&(p.max(0) as u64));
    let mut best = 1;
    for gamma in divisors(g) {
        let step = (m / gamma) as usize;
        let incr = p / gamma as i64;
        if (0..lambda.len() - step).all(|a| lambda[a + step] == lambda[a] + incr) {
            best = gamma;
        }
    }
    best
}

pub fn order_of_symmetry(av: &AngleVariable) -> Vec<u64> {
    av.content
        .block_ids()
        .into_iter()
        .zip(&av.lambda)
        .map(|(id, lambda)| window_symmetry(lambda, av.content.vacancy(id)))
        .collect()
}

/// `F_gamma = F diag(1 / gamma)`; entries stay integral since `gamma` divides `m` and `p`.
pub fn f_gamma(mu: &SolitonContent, gamma: &[u64]) -> Matrix {
    let f = mu.f_matrix();
    let mut out = f.clone();
    for i in 0..f.rows() {
        for (j, &g) in gamma.iter().enumerate() {
            let (q, r) = f.get(i, j).div_rem(&BigInt::from(g));
            assert!(r.is_zero(), "gamma does not divide column {}", j);
            out.set(i, j, q);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FMatrices {
    pub f: Matrix,
    pub f_gamma: Matrix,
    pub det_f: BigInt,
    pub det_f_gamma: BigInt,
}

pub fn f_matrices(mu: &SolitonContent, gamma: &[u64]) -> FMatrices {
    let f = mu.f_matrix();
    let fg = f_gamma(mu, gamma);
    FMatrices { det_f: det_bareiss(&f), det_f_gamma: det_bareiss(&fg), f, f_gamma: fg }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaCounts {
    pub total: BigInt,
    pub per_gamma: BTreeMap<u64, BigInt>,
}

/// `|Lambda_gamma(m, p)| = sum_{gamma | beta | gcd(m,p)} mobius(beta/gamma) C((p+m)/beta - 1, m/beta - 1)`.
pub fn lambda_gamma_count(m: u64, p: u64, gamma: u64) -> BigInt {
    let g = m.gcd(&p);
    if !g.is_multiple_of(gamma) {
        return BigInt::zero();
    }
    divisors(g)
        .into_iter()
        .filter(|beta| beta % gamma == 0)
        .map(|beta| {
            BigInt::from(mobius(beta / gamma))
                * binomial_ext(((p + m) / beta) as i64 - 1, (m / beta) as i64 - 1)
        })
        .sum()
}

pub fn lambda_counts(m: u64, p: u64) -> LambdaCounts {
    let total = binomial_ext((p + m) as i64 - 1, m as i64 - 1);
    let per_gamma = divisors(m.gcd(&p)).into_iter().map(|g| (g, lambda_gamma_count(m, p, g))).collect();
    LambdaCounts { total, per_gamma }
}

/// All windows `0 = lambda_1 <= .. <= lambda_m <= p`.
pub fn enumerate_lambda(m: usize, p: i64) -> Vec<Vec<i64>> {
    crate::rigged::nondecreasing_sequences(m - 1, p)
        .into_iter()
        .map(|tail| {
            let mut w = vec![0];
            w.extend(tail);
            w
        })
        .collect()
}

/// `Omega(mu) = det F prod (1/m) C(p + m - 1, m - 1)` with extended binomials.
pub fn omega_count(mu: &SolitonContent) -> Rational {
    let mut acc = rat_int(&det_bareiss(&mu.f_matrix()));
    for id in mu.block_ids() {
        let m = mu.block(id).multiplicity as i64;
        let p = mu.vacancy(id);
        acc = acc * rat_int(&binomial_ext(p + m - 1, m - 1)) / BigInt::from(m);
    }
    acc
}

/// Smallest `N >= 1` with `N v` in `F_gamma Z^g`: `LCM(det F_gamma / det F_gamma[bj])`.
pub fn dynamical_period(mu: &SolitonContent, gamma: &[u64], velocity: &[BigInt]) -> Result<BigInt> {
    if velocity.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVelocity);
    }
    let fg = f_gamma(mu, gamma);
    let det = det_bareiss(&fg);
    let ratios: Vec<Rational> = (0..fg.cols())
        .filter_map(|j| {
            let dj = det_bareiss(&fg.with_column(j, velocity));
            (!dj.is_zero()).then(|| Rational::new(det.clone(), dj))
        })
        .collect();
    lcm_rationals(&ratios).ok_or(Error::ZeroVelocity)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub gamma: Vec<u64>,
    pub torus_size: BigInt,
    pub orbit_count: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub strata: Vec<Stratum>,
    pub total: BigInt,
}

/// Level set as a union of tori `Z^g / F_gamma Z^g`, stratified by `gamma`.
pub fn decompose_level_set(mu: &SolitonContent) -> Decomposition {
    let ids = mu.block_ids();
    let choices: Vec<Vec<u64>> = ids
        .iter()
        .map(|&id| {
            let b = mu.block(id);
            divisors((b.multiplicity as u64).gcd(&(mu.vacancy(id).max(0) as u64)))
        })
        .collect();
    let mut strata = Vec::new();
    let mut total = BigInt::zero();
    let mut pick = vec![0usize; ids.len()];
    loop {
        let gamma: Vec<u64> = pick.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
        let mut count = Rational::one();
        for (q, &id) in ids.iter().enumerate() {
            let b = mu.block(id);
            let m = b.multiplicity as u64;
            let lam = lambda_gamma_count(m, mu.vacancy(id).max(0) as u64, gamma[q]);
            count = count * rat_int(&lam) / BigInt::from(m / gamma[q]);
        }
        if !count.is_zero() {
            assert!(count.is_integer(), "orbit count {} is not integral", count);
            let torus_size = det_bareiss(&f_gamma(mu, &gamma));
            let orbit_count = count.to_integer();
            total += &torus_size * &orbit_count;
            strata.push(Stratum { gamma, torus_size, orbit_count });
        }
        let mut k = 0;
        loop {
            if k == ids.len() {
                return Decomposition { strata, total };
            }
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralLattice {
    pub xi: Vec<(BlockId, usize)>,
    /// `prod (l_i - l_{i+1})` over null convex blocks.
    pub volume: BigInt,
    pub det_f_gamma: BigInt,
    pub orbit_size: Rational,
}

pub fn general_case_lattice(mu: &SolitonContent, gamma: &[u64]) -> GeneralLattice {
    let xi = mu.block_ids().into_iter().map(|id| (id, crate::automaton::xi(mu, id))).collect();
    let volume: BigInt = mu
        .block_ids()
        .into_iter()
        .filter(|&id| mu.is_null_convex(id))
        .map(|id| BigInt::from(mu.block(id).length - mu.next_length(id)))
        .product();
    let det_f_gamma = det_bareiss(&f_gamma(mu, gamma));
    let orbit_size = Rational::new(det_f_gamma.clone(), volume.clone());
    GeneralLattice { xi, volume, det_f_gamma, orbit_size }
}

/// Generators used to explore `Sigma(p)`.
pub fn scattering_generators(mu: &SolitonContent) -> Vec<Generator> {
    if mu.all_vacancies_positive() {
        default_generators(mu)
    } else {
        admissible_generators(mu)
    }
}

/// Output of the direct scattering map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scattering {
    pub angle: AngleVariable,
    pub gamma: Vec<u64>,
    /// Fractional parts of `F_gamma^{-1} v` with `v` the displacement from the anchor.
    pub torus: Vec<Rational>,
    pub anchor: Path,
    /// Exponents taking the input to the anchor.
    pub word: Vec<(Generator, u64)>,
}

/// Angle variable of the orbit's base point `p` read through the highest member `highest`.
pub fn angle_via(orbit: &Orbit, highest: &Path) -> Result<(AngleVariable, Vec<i64>)> {
    let word = orbit.words.get(highest).ok_or_else(|| Error::Mismatch(format!("{} is not in the orbit", highest)))?;
    let mut av = AngleVariable::from_rc(&kkr_forward(highest)?);
    let mut displacement = vec![0i64; av.omega.len()];
    for (g, &e) in orbit.generators.iter().zip(word) {
        av = apply_time(&av, g.r, g.l, -(e as i64));
        for (q, id) in av.content.block_ids().into_iter().enumerate() {
            if id.color == g.r {
                displacement[q] -= e as i64 * g.l.min(av.content.block(id).length) as i64;
            }
        }
    }
    Ok((av, displacement))
}

pub fn direct_scattering(p: &Path) -> Result<Scattering> {
    let mu = crate::automaton::soliton_content(p)?;
    let gens = scattering_generators(&mu);
    let orbit = orbit_closure(p, &gens, ORBIT_BUDGET)?;
    let anchor =
        orbit.words.keys().find(|q| q.is_highest()).cloned().ok_or_else(|| Error::NoHighestPathInOrbit(p.to_string()))?;
    let (angle, displacement) = angle_via(&orbit, &anchor)?;
    let gamma = order_of_symmetry(&angle);
    let v: Vec<BigInt> = displacement.iter().map(|&x| BigInt::from(x)).collect();
    let torus = solve_integer_rhs(&f_gamma(&mu, &gamma), &v)?.iter().map(fractional).collect();
    let word = gens.iter().copied().zip(orbit.words[&anchor].iter().copied()).collect();
    Ok(Scattering { angle, gamma, torus, anchor, word })
}

/// Per-block string-center multisets mod 1.
pub fn angle_key(av: &AngleVariable) -> Result<Vec<(BlockId, Vec<Rational>)>> {
    Ok(string_centers(&av.content, &av.rigging_vector())?.centers)
}

pub fn angle_equal(x: &AngleVariable, y: &AngleVariable) -> Result<bool> {
    if x.content != y.content {
        return Ok(false);
    }
    Ok(angle_key(x)? == angle_key(y)?)
}

pub fn inverse_by_theta(av: &AngleVariable) -> Result<Path> {
    let data = ThetaData::new(&av.content)?;
    theta_path(&data, &av.rigging_vector())
}

/// `omega = 0` via the triangular generator basis, `phi^{-1}`, then the generator word.
pub fn inverse_by_kkr(av: &AngleVariable) -> Result<Path> {
    let mu = &av.content;
    let ids = mu.block_ids();
    let basis: Vec<Generator> = ids.iter().map(|&id| Generator { r: id.color, l: mu.next_length(id) + 1 }).collect();
    let mut m = Matrix::zeros(ids.len(), ids.len());
    for (j, g) in basis.iter().enumerate() {
        for (i, h) in mu.velocity(g.r, g.l).into_iter().enumerate() {
            m.set(i, j, h);
        }
    }
    let omega: Vec<BigInt> = av.omega.iter().map(|&x| BigInt::from(x)).collect();
    let exponents = solve_integer_rhs(&m, &omega)?;
    let zero = AngleVariable { content: mu.clone(), omega: vec![0; ids.len()], lambda: av.lambda.clone() };
    let rc = zero.to_rc().ok_or_else(|| Error::InvalidRiggedConfiguration(format!("lambda {:?}", av.lambda)))?;
    let mut path = kkr_backward(&rc)?;
    let gamma = order_of_symmetry(av);
    for (g, d) in basis.iter().zip(exponents) {
        if !d.is_integer() {
            return Err(Error::Mismatch(format!("omega {:?} is not an integer combination of velocities", av.omega)));
        }
        let period = dynamical_period(mu, &gamma, &mu.velocity(g.r, g.l))?;
        let steps = d.to_integer().mod_floor(&period);
        let steps: u64 = steps.try_into().map_err(|_| Error::BudgetExceeded { budget: u64::MAX })?;
        path = evolve_power(g.r, g.l, &path, steps)?;
    }
    Ok(path)
}

/// Both routes; they must agree.
pub fn inverse_scattering(av: &AngleVariable) -> Result<Path> {
    if !av.content.all_vacancies_positive() {
        return Err(Error::Mismatch(format!("inverse scattering needs every vacancy >= 1 for {}", av.content)));
    }
    let theta = inverse_by_theta(av)?;
    let kkr = inverse_by_kkr(av)?;
    if theta != kkr {
        return Err(Error::RoutesDisagree {
            theta: theta.to_string(),
            kkr: kkr.to_string(),
            detail: format!("omega {:?} lambda {:?} mu {}", av.omega, av.lambda, av.content),
        });
    }
    Ok(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn running() -> SolitonContent {
        SolitonContent::parse("((33222),(41))", 24).unwrap()
    }

    fn av(windows: Vec<Vec<i64>>) -> AngleVariable {
        AngleVariable::from_windows(&running(), windows).unwrap()
    }

    fn id(color: usize, block: usize) -> BlockId {
        BlockId { color, block }
    }

    #[test]
    fn split_of_highest_rigging() {
        let x = av(vec![vec![2, 4], vec![1, 5, 6], vec![0], vec![0]]);
        assert_eq!(x.omega, vec![2, 1, 0, 0]);
        assert_eq!(x.lambda, vec![vec![0, 2], vec![0, 4, 5], vec![0], vec![0]]);
        assert_eq!(x.windows(), vec![vec![2, 4], vec![1, 5, 6], vec![0], vec![0]]);
    }

    #[test]
    fn slide_matches_the_worked_identification() {
        let left = av(vec![vec![-1, 1], vec![-2, 2, 3], vec![-3], vec![-3]]);
        let right = apply_slide(&left, id(1, 2), 1);
        assert_eq!(right.windows(), vec![vec![3, 5], vec![6, 7, 9], vec![-5], vec![-4]]);
        assert_eq!(apply_slide(&right, id(1, 2), -1), left);
        assert_eq!(apply_slide(&left, id(2, 1), 0), left);
        assert!(angle_equal(&left, &right).unwrap());
        assert!(!angle_equal(&left, &apply_time(&left, 1, 1, 1)).unwrap());
    }

    #[test]
    fn all_slides_make_one_cyclic_turn() {
        let x = av(vec![vec![2, 4], vec![1, 5, 6], vec![0], vec![0]]);
        let mut y = x.clone();
        for q in running().block_ids() {
            y = apply_slide(&y, q, running().block(q).multiplicity as i64);
        }
        assert_eq!(y, apply_time(&x, 1, 1, 24));
    }

    #[test]
    fn symmetry_orders() {
        let left = av(vec![vec![-1, 1], vec![-2, 2, 3], vec![-3], vec![-3]]);
        assert_eq!(order_of_symmetry(&left), vec![2, 1, 1, 1]);
        let other = av(vec![vec![-21, -20], vec![-20, -18, -15], vec![1], vec![-1]]);
        assert_eq!(order_of_symmetry(&other), vec![1, 1, 1, 1]);
    }

    #[test]
    fn f_matrices_and_counts() {
        let f = f_matrices(&running(), &[2, 1, 1, 1]);
        assert_eq!(f.det_f, BigInt::from(4656));
        assert_eq!(f.det_f_gamma, BigInt::from(2328));
        assert_eq!(f.f_gamma.to_i64_rows()[0], vec![8, 12, -3, -1]);
        let c = lambda_counts(2, 4);
        assert_eq!(c.per_gamma[&1], BigInt::from(4));
        assert_eq!(c.per_gamma[&2], BigInt::from(1));
        assert_eq!(lambda_counts(3, 7).per_gamma[&1], BigInt::from(36));
        assert_eq!(lambda_counts(1, 5).total, BigInt::from(1));
        assert_eq!(omega_count(&running()), rat(139680, 1));
    }

    #[test]
    fn small_level_set_sums() {
        let total = |list: &[&str]| -> Rational {
            list.iter().map(|s| omega_count(&SolitonContent::parse(s, 6).unwrap())).sum()
        };
        assert_eq!(total(&["((3),(1))", "((21),(1))", "((111),(1))"]), rat(60, 1));
        assert_eq!(total(&["((1),(3))", "((1),(21))", "((1),(111))"]), rat(0, 1));
    }

    #[test]
    fn periods_of_the_running_example() {
        let mu = running();
        let expected = [((1, 1), 24), ((1, 2), 12), ((1, 3), 194), ((2, 1), 1164), ((2, 2), 776), ((2, 3), 582), ((2, 4), 2328)];
        for gamma in [[2u64, 1, 1, 1], [1, 1, 1, 1]] {
            for ((r, l), n) in expected {
                assert_eq!(dynamical_period(&mu, &gamma, &mu.velocity(r, l)).unwrap(), BigInt::from(n), "T[{},{}]", r, l);
            }
        }
        assert_eq!(dynamical_period(&mu, &[1, 1, 1, 1], &vec![BigInt::zero(); 4]), Err(Error::ZeroVelocity));
    }

    #[test]
    fn decomposition_of_the_running_example() {
        let d = decompose_level_set(&running());
        assert_eq!(d.total, BigInt::from(139680));
        let split: Vec<(Vec<u64>, i64, i64)> = d
            .strata
            .iter()
            .map(|s| (s.gamma.clone(), s.orbit_count.clone().try_into().unwrap(), s.torus_size.clone().try_into().unwrap()))
            .collect();
        assert_eq!(split, vec![(vec![1, 1, 1, 1], 24, 4656), (vec![2, 1, 1, 1], 12, 2328)]);
    }

    #[test]
    fn general_case_orbit_sizes() {
        let p3 = SolitonContent::parse("((3111111111),(33),(3))", 18).unwrap();
        let g3 = general_case_lattice(&p3, &[1, 9, 1, 1]);
        assert_eq!(g3.det_f_gamma, BigInt::from(432));
        assert_eq!(g3.orbit_size, rat(72, 1));
    }
}
