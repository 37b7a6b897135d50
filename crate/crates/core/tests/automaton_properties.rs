use proptest::prelude::*;

use soliton_core::automaton::{classify_paths, energy, evolve_finite, evolve_power, EnergyMode, Generator};
use soliton_core::content::enumerate_configurations;
use soliton_core::{Error, Path};

const SMALL_GENERATORS: [Generator; 6] = [
    Generator { r: 1, l: 1 },
    Generator { r: 1, l: 2 },
    Generator { r: 1, l: 3 },
    Generator { r: 2, l: 1 },
    Generator { r: 2, l: 2 },
    Generator { r: 2, l: 3 },
];

fn step(g: Generator, p: &Path) -> Option<Path> {
    match evolve_finite(g.r, g.l, p) {
        Ok(ev) => Some(ev.path),
        Err(Error::NoCarrier { .. } | Error::NonUniqueEvolution { .. }) => None,
        Err(e) => panic!("{}", e),
    }
}

#[test]
fn evolutions_commute_conserve_energy_and_weights() {
    let mut checked = 0;
    for length in 1..=8 {
        let sets = classify_paths(2, length, 1 << 20).unwrap();
        for (mu, members) in sets.by_content.values() {
            for p in members {
                let images: Vec<Path> = SMALL_GENERATORS.iter().map(|&g| step(g, p).unwrap()).collect();
                let energies: Vec<i64> =
                    SMALL_GENERATORS.iter().map(|g| energy(g.r, g.l, p, EnergyMode::FixedPoint).unwrap()).collect();
                for (i, gi) in SMALL_GENERATORS.iter().enumerate() {
                    let q = &images[i];
                    assert_eq!(q.weights(), p.weights(), "{} under {}", p, gi);
                    for (j, gj) in SMALL_GENERATORS.iter().enumerate().skip(i + 1) {
                        // With a zero vacancy an image may leave the evolvable set; compare where defined.
                        let (Some(ij), Some(ji)) = (step(*gi, &images[j]), step(*gj, q)) else {
                            assert!(!mu.all_vacancies_positive(), "{} then {} undefined on {}", gi, gj, p);
                            continue;
                        };
                        assert_eq!(ij, ji, "{} and {} on {}", gi, gj, p);
                        assert_eq!(energy(gj.r, gj.l, q, EnergyMode::FixedPoint).unwrap(), energies[j]);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 30_000, "only {} pairs checked", checked);
}

#[test]
fn level_sets_are_stable() {
    for length in 1..=8 {
        let sets = classify_paths(2, length, 1 << 20).unwrap();
        for mu in enumerate_configurations(2, length).into_iter().filter(|mu| mu.all_vacancies_positive()) {
            for p in sets.get(&mu) {
                for r in 1..=2 {
                    for l in 1..=length + 1 {
                        let ev = evolve_finite(r, l, p).unwrap_or_else(|e| panic!("{} on {}: {}", mu, p, e));
                        assert!(sets.get(&mu).contains(&ev.path), "T[{},{}] leaves {}", r, l, mu);
                    }
                }
            }
        }
    }
}

fn any_path() -> impl Strategy<Value = Path> {
    (1usize..=3, 1usize..=14).prop_flat_map(|(n, length)| {
        proptest::collection::vec(1u8..=(n as u8 + 1), length).prop_map(move |letters| Path::new(letters, n).unwrap())
    })
}

proptest! {
    #[test]
    fn single_box_evolution_is_cyclic_shift(p in any_path()) {
        let ev = evolve_finite(1, 1, &p).unwrap();
        prop_assert_eq!(ev.path, p.cyclic_shift());
    }

    #[test]
    fn single_box_evolution_has_period_dividing_length(p in any_path()) {
        prop_assert_eq!(evolve_power(1, 1, &p, p.len() as u64).unwrap(), p);
    }

    #[test]
    fn rotation_commutes_with_evolution(p in any_path(), r in 1usize..=2, l in 1usize..=3) {
        prop_assume!(r <= p.n());
        if let Some(q) = step(Generator { r, l }, &p) {
            prop_assert_eq!(step(Generator { r, l }, &p.cyclic_shift()), Some(q.cyclic_shift()));
        }
    }
}
