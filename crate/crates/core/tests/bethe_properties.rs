use std::collections::BTreeSet;

use proptest::prelude::*;

use soliton_core::angle::{angle_key, apply_time, direct_scattering, omega_count, AngleVariable};
use soliton_core::automaton::classify_paths;
use soliton_core::bethe::{eigenvalue_phase, fractional, n_prime, string_centers};
use soliton_core::content::enumerate_configurations;
use soliton_core::linalg::rat;
use soliton_core::rigged::enumerate_rc;
use soliton_core::SolitonContent;

#[test]
fn bethe_roots_count_the_level_set() {
    let mu = SolitonContent::parse("((211),(1))", 8).unwrap();
    let sets = classify_paths(2, 8, 1 << 20).unwrap();
    let keys: BTreeSet<_> =
        sets.get(&mu).iter().map(|p| angle_key(&direct_scattering(p).unwrap().angle).unwrap()).collect();
    assert_eq!(rat(keys.len() as i64, 1), omega_count(&mu));
    assert_eq!(keys.len(), 144);
}

#[test]
fn n_prime_forms_agree_on_small_systems() {
    for length in 2..=8 {
        for mu in enumerate_configurations(2, length).into_iter().filter(|mu| mu.all_vacancies_positive()) {
            for r in 1..=2 {
                for l in 1..=mu.largest_part(r).unwrap_or(1) {
                    let np = n_prime(&mu, r, l);
                    assert_eq!(np.via_a, np.via_f, "{} T[{},{}]", mu, r, l);
                }
            }
        }
    }
}

fn running_angle(pick: usize) -> AngleVariable {
    let mu = SolitonContent::parse("((33222),(41))", 24).unwrap();
    let all = enumerate_rc(&mu);
    AngleVariable::from_rc(&all[pick % all.len()])
}

const EVOLUTIONS: [(usize, usize); 7] = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (2, 4)];

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn centers_move_linearly(pick in 0usize..10_000, gen in 0usize..7, t1 in -40i64..=40, t2 in -40i64..=40) {
        let av = running_angle(pick);
        let (r, l) = EVOLUTIONS[gen];
        let centers = |t: i64| string_centers(&av.content, &apply_time(&av, r, l, t).rigging_vector()).unwrap().raw;
        let (u0, u1, u2, u12) = (centers(0), centers(t1), centers(t2), centers(t1 + t2));
        for x in 0..u0.len() {
            prop_assert_eq!(&u12[x] - &u0[x], (&u1[x] - &u0[x]) + (&u2[x] - &u0[x]));
        }
    }

    #[test]
    fn phases_add_under_composition(pick in 0usize..10_000, g1 in 0usize..7, g2 in 0usize..7) {
        let av = running_angle(pick);
        let root = string_centers(&av.content, &av.rigging_vector()).unwrap();
        let (r1, l1) = EVOLUTIONS[g1];
        let (r2, l2) = EVOLUTIONS[g2];
        let p1 = eigenvalue_phase(&av.content, r1, l1, &root);
        let p2 = eigenvalue_phase(&av.content, r2, l2, &root);
        // The composite acts on the half-shifted centers by the summed velocity.
        let half = rat(1, 2);
        let composite = root.raw.iter().zip(av.content.row_ids()).fold(rat(0, 1), |acc, (u, (id, _))| {
            let len = av.content.block(id).length;
            let weight = [(r1, l1), (r2, l2)].iter().filter(|(r, _)| *r == id.color).map(|(_, l)| (*l).min(len) as i64).sum::<i64>();
            acc + (u + &half) * rat(weight, 1)
        });
        prop_assert_eq!(fractional(&composite), fractional(&(p1 + p2)));
    }
}
