//! Named verification suites behind `verify`; each returns a machine-readable report.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::angle::{
    angle_key, apply_time, decompose_level_set, direct_scattering, dynamical_period, general_case_lattice,
    inverse_by_kkr, inverse_by_theta, omega_count, order_of_symmetry, AngleVariable,
};
use crate::automaton::{
    admissible_generators, classify_paths, evolve_admissible, evolve_power, evolve_steps, orbit_closure,
    simulated_period, soliton_content, Level,
};
use crate::bethe::{eigenvalue_phase, n_prime, phase_condition_holds, string_centers};
use crate::content::{enumerate_configurations, SolitonContent};
use crate::error::{Error, Result};
use crate::fixtures::*;
use crate::linalg::{divisors, rat};
use crate::path::Path;
use crate::rigged::{enumerate_rc, kkr_backward, kkr_forward};
use crate::tableau::{combinatorial_r, Tableau};
use crate::tropical::{
    quasi_periodicity_holds, simulated_averages, tau_path, theta_hirota_holds, theta_path, time_average, ThetaData,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(suite: &str) -> Self {
        Report { suite: suite.to_string(), checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    /// Records `got == want`, with both values in the detail on failure.
    fn expect_eq<T: PartialEq + std::fmt::Debug>(&mut self, name: impl Into<String>, got: T, want: T) {
        let passed = got == want;
        let detail = if passed { String::new() } else { format!("got {:?}, expected {:?}", got, want) };
        self.check(name, passed, detail);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub const CASES: [&str; 12] = [
    "r-matrix",
    "example-1.1",
    "kkr",
    "counting",
    "decomposition",
    "ivp",
    "theta-oracle",
    "theta-identities",
    "averages",
    "general-case",
    "bethe",
    "small-level-set",
];

fn parse(word: &str, n: usize) -> Result<Path> {
    Path::parse(word, n)
}

fn running() -> Result<SolitonContent> {
    SolitonContent::parse(RUNNING_CONTENT, RUNNING_LENGTH)
}

fn small() -> Result<SolitonContent> {
    SolitonContent::parse(SMALL_CONTENT, SMALL_LENGTH)
}

fn r_matrix() -> Result<Report> {
    let mut report = Report::new("r-matrix");
    let tableau = |rows: &[&[u8]]| Tableau::from_rows(rows.iter().map(|r| r.to_vec()).collect());
    for (b, c, c2, b2, h) in R_CASES {
        let got = combinatorial_r(&tableau(b)?, c, 2)?;
        report.expect_eq(format!("R({:?} x {})", b, c), got, (c2, tableau(b2)?, h));
    }
    Ok(report)
}

fn evolution_tables() -> Result<Report> {
    let mut report = Report::new("example-1.1");
    let start = parse(EVOLUTION_START, 2)?;
    for (r, l, table) in [(1, 3, &EVOLUTION_T13), (2, 4, &EVOLUTION_T24)] {
        let rows: Vec<String> = evolve_steps(r, Level::Finite(l), &start, 9)?.iter().map(Path::to_string).collect();
        report.expect_eq(format!("T[{},{}] table", r, l), rows, table.iter().map(|s| s.to_string()).collect());
    }
    let mu = running()?;
    let gamma = order_of_symmetry(&direct_scattering(&start)?.angle);
    for ((r, l), want) in RUNNING_PERIODS {
        let formula = dynamical_period(&mu, &gamma, &mu.velocity(r, l))?;
        report.expect_eq(format!("period formula T[{},{}]", r, l), formula, BigInt::from(want));
        report.expect_eq(format!("period simulation T[{},{}]", r, l), simulated_period(r, l, &start, want)?, Some(want));
    }
    Ok(report)
}

fn kkr() -> Result<Report> {
    let mut report = Report::new("kkr");
    for (word, riggings) in RUNNING_HIGHEST {
        let p = parse(word, 2)?;
        let rc = kkr_forward(&p)?;
        report.expect_eq(format!("phi({})", word), rc.rigging_vector(), riggings.to_vec());
        report.expect_eq(format!("round trip {}", word), kkr_backward(&rc)?, p);
    }
    for (word, printed) in SMALL_HIGHEST {
        let rc = kkr_forward(&parse(word, 2)?)?;
        report.expect_eq(format!("phi({})", word), rc.rigging_vector(), small_rigging_vector(printed).to_vec());
    }
    let ([r11, r21, r22, r2], word) = KKR_INVERSE_EXAMPLE;
    let rc = crate::rigged::RiggedConfiguration::new(small()?, vec![vec![vec![r11], vec![r21, r22]], vec![vec![r2]]])?;
    report.expect_eq("phi^-1 worked example", kkr_backward(&rc)?.to_string(), word.to_string());
    Ok(report)
}

/// `|P(mu)| = Omega(mu)` for every configuration with all vacancies positive.
pub fn level_set_counts(n: usize, length: usize, budget: u64) -> Result<Report> {
    let mut report = Report::new(&format!("counting n={} L={}", n, length));
    let sets = classify_paths(n, length, budget)?;
    for mu in enumerate_configurations(n, length).into_iter().filter(SolitonContent::all_vacancies_positive) {
        report.expect_eq(format!("|P({})|", mu), rat(sets.get(&mu).len() as i64, 1), omega_count(&mu));
    }
    Ok(report)
}

/// Counting plus theta/tau oracles on every rigged configuration of the given size.
pub fn small_system_suite(n: usize, length: usize, budget: u64) -> Result<Report> {
    let mut report = level_set_counts(n, length, budget)?;
    report.suite = format!("level sets n={} L={}", n, length);
    for mu in enumerate_configurations(n, length) {
        let data = match ThetaData::new(&mu) {
            Ok(data) => Some(data),
            Err(Error::NotPositiveDefinite) => None,
            Err(e) => return Err(e),
        };
        let mut mismatches = Vec::new();
        let rcs = enumerate_rc(&mu);
        for rc in &rcs {
            let kkr = kkr_backward(rc)?;
            let other = match &data {
                Some(data) => theta_path(data, &rc.rigging_vector())?,
                None => tau_path(rc)?,
            };
            if other != kkr {
                mismatches.push(format!("{:?}", rc.rigging_vector()));
            }
        }
        if !rcs.is_empty() {
            let route = if data.is_some() { "theta" } else { "tau" };
            report.check(format!("{} oracle on RC({})", route, mu), mismatches.is_empty(), mismatches.join(" "));
        }
    }
    Ok(report)
}

fn counting() -> Result<Report> {
    let mut report = level_set_counts(2, 8, 1 << 20)?;
    report.suite = "counting".into();
    report.expect_eq("Omega(running)", omega_count(&running()?), rat(139680, 1));
    let total = |list: &[&str]| -> Result<crate::linalg::Rational> {
        list.iter().map(|s| Ok(omega_count(&SolitonContent::parse(s, 6)?))).sum()
    };
    report.expect_eq("L=6 sum over color 1", total(&["((3),(1))", "((21),(1))", "((111),(1))"])?, rat(60, 1));
    report.expect_eq("L=6 sum over color 2", total(&["((1),(3))", "((1),(21))", "((1),(111))"])?, rat(0, 1));
    Ok(report)
}

fn decomposition() -> Result<Report> {
    let mut report = Report::new("decomposition");
    let d = decompose_level_set(&running()?);
    let split: Vec<(Vec<u64>, BigInt, BigInt)> =
        d.strata.iter().map(|s| (s.gamma.clone(), s.orbit_count.clone(), s.torus_size.clone())).collect();
    report.expect_eq(
        "strata",
        split,
        vec![
            (vec![1, 1, 1, 1], BigInt::from(24), BigInt::from(4656)),
            (vec![2, 1, 1, 1], BigInt::from(12), BigInt::from(2328)),
        ],
    );
    let mu = small()?;
    let sets = classify_paths(2, 8, 1 << 20)?;
    let mut remaining: BTreeSet<Path> = sets.get(&mu).iter().cloned().collect();
    let mut sizes = Vec::new();
    while let Some(seed) = remaining.iter().next().cloned() {
        let orbit = orbit_closure(&seed, &crate::automaton::default_generators(&mu), 1 << 20)?;
        for p in orbit.words.keys() {
            remaining.remove(p);
        }
        sizes.push(orbit.len());
    }
    report.expect_eq("orbits of ((211),(1))", sizes, vec![72, 72]);
    report.expect_eq("det F of ((211),(1))", crate::linalg::det_bareiss(&mu.f_matrix()), BigInt::from(72));
    Ok(report)
}

fn ivp() -> Result<Report> {
    let mut report = Report::new("ivp");
    let mut cases = Vec::new();
    let start = parse(IVP_START, 2)?;
    let angle = direct_scattering(&start)?.angle;
    for ((r, l), want) in IVP_RESULTS {
        cases.push((start.clone(), apply_time(&angle, r, l, IVP_STEPS), (r, l), want));
    }
    let other = parse(EVOLUTION_START, 2)?;
    cases.push((other.clone(), apply_time(&direct_scattering(&other)?.angle, 1, 3, IVP_STEPS), (1, 3), IVP_T13_OF_START));
    for (p, av, (r, l), want) in cases {
        let name = format!("T[{},{}]^{} of {}", r, l, IVP_STEPS, p);
        report.expect_eq(format!("{} via theta", name), inverse_by_theta(&av)?.to_string(), want.to_string());
        report.expect_eq(format!("{} via kkr", name), inverse_by_kkr(&av)?.to_string(), want.to_string());
        report.expect_eq(
            format!("{} by simulation", name),
            evolve_power(r, l, &p, IVP_STEPS as u64)?.to_string(),
            want.to_string(),
        );
    }
    Ok(report)
}

fn theta_oracle() -> Result<Report> {
    let mut report = Report::new("theta-oracle");
    let mu = small()?;
    let data = ThetaData::new(&mu)?;
    for rc in enumerate_rc(&mu) {
        report.expect_eq(
            format!("theta_path {:?}", rc.rigging_vector()),
            theta_path(&data, &rc.rigging_vector())?,
            kkr_backward(&rc)?,
        );
    }
    Ok(report)
}

/// Deterministic xorshift so sampled arguments depend only on `seed`.
struct Sampler(u64);

impl Sampler {
    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        lo + (self.0 % (hi - lo + 1) as u64) as i64
    }
}

fn theta_identities(seed: u64) -> Result<Report> {
    let mut report = Report::new("theta-identities");
    let data = ThetaData::new(&running()?)?;
    let mut sampler = Sampler(seed.max(1));
    let g = data.dim();
    let mut bad = Vec::new();
    for _ in 0..100 {
        let zz: Vec<i64> = (0..g).map(|_| sampler.range(-60, 60)).collect();
        let m: Vec<i64> = (0..g).map(|_| sampler.range(-3, 3)).collect();
        if !quasi_periodicity_holds(&data, &zz, &m) {
            bad.push(format!("z/2={:?} m={:?}", zz, m));
        }
    }
    report.check("quasi-periodicity, 100 samples", bad.is_empty(), bad.join("; "));
    let mut bad = Vec::new();
    for _ in 0..100 {
        let r: Vec<i64> = (0..g).map(|_| sampler.range(-40, 40)).collect();
        let k = sampler.range(-30, 30);
        if !theta_hirota_holds(&data, &r, k) {
            bad.push(format!("r={:?} k={}", r, k));
        }
    }
    report.check("Hirota, 100 samples", bad.is_empty(), bad.join("; "));
    Ok(report)
}

fn averages() -> Result<Report> {
    let mut report = Report::new("averages");
    let p = parse(AVERAGE_PATH, 1)?;
    let mu = soliton_content(&p)?;
    let data = ThetaData::new(&mu)?;
    let largest = mu.largest_part(1).unwrap_or(1);
    type Entry<'a> = (Path, &'a ThetaData, usize, Option<usize>, (i64, i64));
    let mut entries: Vec<Entry> = Vec::new();
    for (l, want) in AVERAGE_TABLE {
        entries.push((p.clone(), &data, 2, l, want));
    }
    let start = parse(EVOLUTION_START, 2)?;
    let running_data = ThetaData::new(&running()?)?;
    for (a, l, want) in RUNNING_AVERAGES {
        entries.push((start.clone(), &running_data, a, Some(l), want));
    }
    for (p, data, a, l, (num, den)) in entries {
        let want = rat(num, den);
        let label = l.map_or("inf".to_string(), |x| x.to_string());
        report.expect_eq(format!("<y_{}>_{} formula on {}", a, label, p), time_average(data, l, a), want.clone());
        let level = l.unwrap_or(largest);
        let period = simulated_period(1, level, &p, 1 << 20)?.ok_or(Error::BudgetExceeded { budget: 1 << 20 })?;
        let sim: BTreeSet<_> = simulated_averages(&p, level, a, period)?.into_iter().collect();
        report.expect_eq(format!("<y_{}>_{} simulation on {}", a, label, p), sim, BTreeSet::from([want]));
    }
    Ok(report)
}

fn general_case() -> Result<Report> {
    let mut report = Report::new("general-case");
    for (word, n, size, inadmissible) in GENERAL_CASES {
        let p = parse(word, n)?;
        let mu = soliton_content(&p)?;
        let orbit = orbit_closure(&p, &admissible_generators(&mu), 1 << 20)?;
        report.expect_eq(format!("orbit of {}", word), orbit.len() as u64, size);
        let highest = orbit.words.keys().find(|q| q.is_highest()).ok_or(Error::NoHighestPathInOrbit(p.to_string()))?;
        let gamma = order_of_symmetry(&AngleVariable::from_rc(&kkr_forward(highest)?));
        report.expect_eq(
            format!("lattice formula for {}", word),
            general_case_lattice(&mu, &gamma).orbit_size,
            rat(size as i64, 1),
        );
        let mut rejected = Vec::new();
        for r in 1..=n {
            for l in 1..=p.len() {
                if matches!(evolve_admissible(r, l, &p), Err(Error::Inadmissible { .. })) {
                    rejected.push((r, l));
                }
            }
        }
        report.expect_eq(format!("inadmissible on {}", word), rejected, inadmissible.to_vec());
    }
    Ok(report)
}

fn bethe() -> Result<Report> {
    let mut report = Report::new("bethe");
    let mu = running()?;
    let mut angles = Vec::new();
    for (word, _) in RUNNING_HIGHEST {
        angles.push(AngleVariable::from_rc(&kkr_forward(&parse(word, 2)?)?));
    }
    for ((r, l), _) in RUNNING_PERIODS {
        let np = n_prime(&mu, r, l);
        report.expect_eq(format!("N' forms agree T[{},{}]", r, l), np.via_a.clone(), np.via_f.clone());
        let np = np.via_a.ok_or(Error::ZeroVelocity)?;
        for av in &angles {
            let phase = eigenvalue_phase(&mu, r, l, &string_centers(&mu, &av.rigging_vector())?);
            report.check(
                format!("N' phase in Z/2 for T[{},{}] at {:?}", r, l, av.rigging_vector()),
                phase_condition_holds(&np, &phase),
                format!("N' = {}, phase = {}", np, phase),
            );
        }
    }
    let keys: BTreeSet<_> =
        enumerate_rc(&small()?).iter().map(|rc| angle_key(&AngleVariable::from_rc(rc))).collect::<Result<_>>()?;
    report.expect_eq("distinct string-center keys", keys.len(), 40);
    Ok(report)
}

fn periods_are_minimal(report: &mut Report) -> Result<()> {
    let p = parse(EVOLUTION_START, 2)?;
    for ((r, l), n) in RUNNING_PERIODS {
        let mut cur = p.clone();
        let mut done = 0;
        let mut early = None;
        for d in divisors(n).into_iter().filter(|&d| d < n) {
            cur = evolve_power(r, l, &cur, d - done)?;
            done = d;
            if cur == p {
                early = Some(d);
                break;
            }
        }
        report.expect_eq(format!("no proper divisor period T[{},{}]", r, l), early, None);
    }
    Ok(())
}

/// Runs one named case; `seed` only changes sampled arguments of randomized checks.
pub fn run_case(name: &str, seed: u64) -> Result<Report> {
    match name {
        "r-matrix" => r_matrix(),
        "example-1.1" => {
            let mut report = evolution_tables()?;
            periods_are_minimal(&mut report)?;
            Ok(report)
        }
        "kkr" => kkr(),
        "counting" => counting(),
        "decomposition" => decomposition(),
        "ivp" => ivp(),
        "theta-oracle" => theta_oracle(),
        "theta-identities" => theta_identities(seed),
        "averages" => averages(),
        "general-case" => general_case(),
        "bethe" => bethe(),
        "small-level-set" => small_system_suite(2, 8, 1 << 20),
        other => Err(Error::Mismatch(format!("unknown case {:?}; known: {}", other, CASES.join(", ")))),
    }
}

/// Runs the given cases on worker threads; reports come back in input order.
pub fn run_cases(names: &[&str], seed: u64) -> Vec<(String, Result<Report>)> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = names.iter().map(|&name| scope.spawn(move || run_case(name, seed))).collect();
        names
            .iter()
            .zip(handles)
            .map(|(name, h)| (name.to_string(), h.join().unwrap_or_else(|_| Err(Error::Mismatch("suite panicked".into())))))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_cases_pass() {
        for name in ["r-matrix", "kkr", "theta-oracle", "bethe", "general-case"] {
            let report = run_case(name, 1).unwrap();
            assert!(report.passed(), "{:?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        }
    }

    #[test]
    fn unknown_case_is_an_error() {
        assert!(run_case("nope", 0).is_err());
    }

    #[test]
    fn seed_does_not_change_verdicts() {
        for seed in [1, 2, 99] {
            assert!(run_case("theta-identities", seed).unwrap().passed());
        }
    }
}
