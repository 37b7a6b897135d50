use std::collections::BTreeSet;
use std::io::Read;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use soliton_core::angle::{
    apply_time, decompose_level_set, direct_scattering, dynamical_period, f_matrices, inverse_by_theta, omega_count,
    AngleVariable,
};
use soliton_core::automaton::{
    classify_paths, default_generators, energy_spectrum, enumerate_level_set, evolve_steps, orbit_closure,
    simulated_period, soliton_content,
};
use soliton_core::bethe::{eigenvalue_phase, n_prime, phase_condition_holds, string_centers};
use soliton_core::rigged::{kkr_backward, kkr_forward};
use soliton_core::tropical::{time_average, ThetaData};
use soliton_core::verify::{self, Report};
use soliton_core::{EnergyMode, Error, Level, Path, RiggedConfiguration, SolitonContent};

use crate::render::{block, frac, frac_text, fracs, int, matrix};
use crate::{ContentInput, PathInput};

fn read_source(source: &str) -> Result<String> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(source).with_context(|| format!("reading {}", source))
    }
}

fn load_path(input: &PathInput) -> Result<Path> {
    if let Some(word) = &input.path {
        return Ok(Path::parse(word.trim(), input.n)?);
    }
    let file = input.path_file.as_ref().expect("clap requires --path or --path-file");
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let (line, word) =
        text.lines().enumerate().find(|(_, l)| !l.trim().is_empty()).context("no path word in file")?;
    Path::parse(word.trim(), input.n).with_context(|| format!("{}: line {}", file.display(), line + 1))
}

fn load_rc(source: &str) -> Result<RiggedConfiguration> {
    let rc: RiggedConfiguration =
        serde_json::from_str(&read_source(source)?).with_context(|| format!("parsing rigged configuration {}", source))?;
    rc.validate()?;
    Ok(rc)
}

fn load_content(input: &ContentInput) -> Result<SolitonContent> {
    let mu = SolitonContent::parse(&input.content, input.length)?;
    if !mu.is_configuration() {
        bail!("{} is not a configuration at L = {}: some vacancy is negative", mu, input.length);
    }
    Ok(mu)
}

/// Parses "T[r,l]" with `l` a positive integer or "inf".
pub fn parse_op(op: &str, n: usize) -> Result<(usize, Level)> {
    let inner = op
        .trim()
        .strip_prefix("T[")
        .and_then(|s| s.strip_suffix(']'))
        .with_context(|| format!("operator {:?} is not of the form T[r,l]", op))?;
    let (r, l) = inner.split_once(',').with_context(|| format!("operator {:?} needs two indices", op))?;
    let r: usize = r.trim().parse().with_context(|| format!("bad color in {:?}", op))?;
    if r == 0 || r > n {
        bail!("color {} of {} lies outside 1..={}", r, op, n);
    }
    Ok((r, l.parse::<Level>()?))
}

fn finite_level(r: usize, level: Level, p: &Path) -> Result<usize> {
    Ok(soliton_core::automaton::resolve_level(r, level, p)?)
}

pub fn evolve(input: &PathInput, op: &str, steps: usize) -> Result<bool> {
    let p = load_path(input)?;
    let (r, level) = parse_op(op, p.n())?;
    for row in evolve_steps(r, level, &p, steps)? {
        println!("{}", row);
    }
    Ok(true)
}

pub fn kkr(input: &PathInput) -> Result<bool> {
    let rc = kkr_forward(&load_path(input)?)?;
    println!("{}", serde_json::to_string_pretty(&rc)?);
    Ok(true)
}

pub fn kkr_inv(source: &str) -> Result<bool> {
    println!("{}", kkr_backward(&load_rc(source)?)?);
    Ok(true)
}

fn content_json(mu: &SolitonContent) -> Value {
    json!({
        "text": mu.to_string(),
        "L": mu.length,
        "partitions": (1..=mu.n()).map(|a| mu.partition(a)).collect::<Vec<_>>(),
    })
}

fn period_table(mu: &SolitonContent, gamma: &[u64]) -> Vec<Value> {
    let mut rows = Vec::new();
    for r in 1..=mu.n() {
        for l in 1..=mu.largest_part(r).unwrap_or(1) {
            let period = dynamical_period(mu, gamma, &mu.velocity(r, l)).ok();
            rows.push(json!({ "op": format!("T[{},{}]", r, l), "period": period.as_ref().map(int) }));
        }
    }
    rows
}

fn decomposition_json(mu: &SolitonContent) -> Value {
    let d = decompose_level_set(mu);
    json!({
        "strata": d.strata.iter().map(|s| json!({
            "gamma": s.gamma,
            "torus_size": int(&s.torus_size),
            "orbit_count": int(&s.orbit_count),
        })).collect::<Vec<_>>(),
        "total": int(&d.total),
    })
}

pub fn analyze_report(p: &Path) -> Result<Value> {
    let mu = soliton_content(p)?;
    let spectrum = energy_spectrum(p, EnergyMode::FixedPoint)?;
    let scattering = direct_scattering(p)?;
    let gamma = &scattering.gamma;
    let f = f_matrices(&mu, gamma);
    Ok(json!({
        "path": p.to_string(),
        "n": p.n(),
        "L": p.len(),
        "mu": content_json(&mu),
        "energies": spectrum.values,
        "vacancy": mu.vacancies(),
        "F": matrix(&f.f),
        "detF": int(&f.det_f),
        "gamma": gamma,
        "F_gamma": matrix(&f.f_gamma),
        "detF_gamma": int(&f.det_f_gamma),
        "omega": frac(&omega_count(&mu)),
        "decomposition": decomposition_json(&mu),
        "periods": period_table(&mu, gamma),
        "angle": {
            "omega": scattering.angle.omega,
            "lambda": scattering.angle.lambda,
            "riggings": scattering.angle.rigging_vector(),
        },
        "anchor": scattering.anchor.to_string(),
        "torus": fracs(&scattering.torus),
    }))
}

pub fn analyze(input: &PathInput) -> Result<bool> {
    println!("{}", serde_json::to_string_pretty(&analyze_report(&load_path(input)?)?)?);
    Ok(true)
}

pub fn period(input: &PathInput, op: &str, simulate: bool, budget: u64) -> Result<bool> {
    let p = load_path(input)?;
    let (r, level) = parse_op(op, p.n())?;
    let l = finite_level(r, level, &p)?;
    let mu = soliton_content(&p)?;
    let gamma = direct_scattering(&p)?.gamma;
    let formula = dynamical_period(&mu, &gamma, &mu.velocity(r, l))?;
    println!("T[{},{}] period {}", r, l, formula);
    if !simulate {
        return Ok(true);
    }
    match simulated_period(r, l, &p, budget)? {
        Some(found) => {
            println!("T[{},{}] simulated {}", r, l, found);
            Ok(num_bigint::BigInt::from(found) == formula)
        }
        None => Err(Error::BudgetExceeded { budget }.into()),
    }
}

pub fn count(input: &ContentInput, brute: bool, budget: u64) -> Result<bool> {
    let mu = load_content(input)?;
    let omega = omega_count(&mu);
    println!("Omega{} = {}", mu, omega);
    if !brute {
        return Ok(true);
    }
    let found = classify_paths(mu.n(), mu.length, budget)?.get(&mu).len();
    println!("|P{}| = {}", mu, found);
    Ok(soliton_core::linalg::rat(found as i64, 1) == omega)
}

pub fn decompose(input: &ContentInput, brute: bool, budget: u64) -> Result<bool> {
    let mu = load_content(input)?;
    let mut report = decomposition_json(&mu);
    if brute {
        let mut remaining: BTreeSet<Path> = enumerate_level_set(&mu, budget)?.into_iter().collect();
        let generators = default_generators(&mu);
        let mut orbits = Vec::new();
        while let Some(seed) = remaining.iter().next().cloned() {
            let orbit = orbit_closure(&seed, &generators, budget as usize)?;
            remaining.retain(|q| !orbit.contains(q));
            orbits.push(json!({ "representative": seed.to_string(), "size": orbit.len() }));
        }
        report["orbits"] = Value::Array(orbits);
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(true)
}

fn parse_shift(text: &str) -> Result<(usize, usize, i64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if let [r, l, t] = parts[..] {
        Ok((r.parse()?, l.parse()?, t.parse()?))
    } else {
        bail!("shift {:?} is not of the form r,l,t", text)
    }
}

pub fn theta_path(source: &str, shifts: &[String]) -> Result<bool> {
    let rc = load_rc(source)?;
    let mut av = AngleVariable::from_rc(&rc);
    for shift in shifts {
        let (r, l, t) = parse_shift(shift)?;
        av = apply_time(&av, r, l, t);
    }
    println!("{}", inverse_by_theta(&av)?);
    Ok(true)
}

pub fn averages(input: &PathInput, color: Option<usize>, level: Option<&str>) -> Result<bool> {
    let p = load_path(input)?;
    let mu = soliton_content(&p)?;
    let data = ThetaData::new(&mu)?;
    let colors: Vec<usize> = match color {
        Some(a) if (2..=p.n() + 1).contains(&a) => vec![a],
        Some(a) => bail!("color {} lies outside 2..={}", a, p.n() + 1),
        None => (2..=p.n() + 1).collect(),
    };
    let levels: Vec<Option<usize>> = match level.map(str::parse::<Level>).transpose()? {
        Some(Level::Finite(l)) => vec![Some(l)],
        Some(Level::Infinite) => vec![None],
        None => (1..=mu.largest_part(1).unwrap_or(1)).map(Some).chain([None]).collect(),
    };
    for a in colors {
        for &l in &levels {
            let label = l.map_or("inf".to_string(), |l| l.to_string());
            println!("<y_{}>_{} = {}", a, label, frac_text(&time_average(&data, l, a)));
        }
    }
    Ok(true)
}

pub fn bethe(input: &PathInput) -> Result<bool> {
    let p = load_path(input)?;
    let mu = soliton_content(&p)?;
    let av = direct_scattering(&p)?.angle;
    let root = string_centers(&mu, &av.rigging_vector())?;
    let centers: Vec<Value> =
        root.key().iter().map(|(id, cs)| json!({ "block": block(*id), "centers": fracs(cs) })).collect();
    let mut evolutions = Vec::new();
    for r in 1..=mu.n() {
        for l in 1..=mu.largest_part(r).unwrap_or(1) {
            let phase = eigenvalue_phase(&mu, r, l, &root);
            let np = n_prime(&mu, r, l);
            let holds = np.via_a.as_ref().map(|n| phase_condition_holds(n, &phase));
            evolutions.push(json!({
                "op": format!("T[{},{}]", r, l),
                "phase": frac(&phase),
                "n_prime": np.via_a.as_ref().map(int),
                "n_prime_via_f": np.via_f.as_ref().map(int),
                "phase_condition": holds,
            }));
        }
    }
    println!("{}", serde_json::to_string_pretty(&json!({ "centers": centers, "evolutions": evolutions }))?);
    Ok(true)
}

fn print_report(report: &Report) {
    for check in &report.checks {
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        if check.detail.is_empty() {
            println!("{} {}: {}", verdict, report.suite, check.name);
        } else {
            println!("{} {}: {} ({})", verdict, report.suite, check.name, check.detail);
        }
    }
}

pub fn verify(cases: &[String], size: Option<(usize, usize)>, budget: u64, seed: u64, as_json: bool) -> Result<bool> {
    let mut names: Vec<&str> = cases.iter().map(String::as_str).collect();
    if names.is_empty() && size.is_none() {
        names = verify::CASES.to_vec();
    }
    let mut reports: Vec<Report> = Vec::new();
    for (name, outcome) in verify::run_cases(&names, seed) {
        reports.push(outcome.with_context(|| format!("case {}", name))?);
    }
    if let Some((n, length)) = size {
        reports.push(verify::small_system_suite(n, length, budget)?);
    }
    let total: usize = reports.iter().map(|r| r.checks.len()).sum();
    let passed: usize = reports.iter().map(|r| r.checks.iter().filter(|c| c.passed).count()).sum();
    if as_json {
        let summary = json!({ "reports": reports, "checks": total, "passed": passed, "ok": passed == total });
        println!("{}", serde_json::to_string_pretty(&summary)?);
    } else {
        reports.iter().for_each(print_report);
        println!("summary: {}/{} checks passed", passed, total);
    }
    Ok(passed == total)
}
