//! Shared workloads for the criterion benches under `benches/`.

use soliton_core::fixtures::{EVOLUTION_START, RUNNING_CONTENT, RUNNING_HIGHEST, RUNNING_LENGTH};
use soliton_core::{Path, RiggedConfiguration, SolitonContent};

/// The L = 24, n = 2 starting path of the evolution tables.
pub fn running_path() -> Path {
    Path::parse(EVOLUTION_START, 2).expect("fixture parses")
}

pub fn running_highest() -> Path {
    Path::parse(RUNNING_HIGHEST[0].0, 2).expect("fixture parses")
}

pub fn running_content() -> SolitonContent {
    SolitonContent::parse(RUNNING_CONTENT, RUNNING_LENGTH).expect("fixture parses")
}

pub fn running_rc() -> RiggedConfiguration {
    soliton_core::rigged::kkr_forward(&running_highest()).expect("highest path")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_consistent() {
        assert_eq!(running_rc().content, running_content());
        assert_eq!(soliton_core::automaton::soliton_content(&running_path()).unwrap(), running_content());
    }
}
