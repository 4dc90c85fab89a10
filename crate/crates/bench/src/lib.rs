//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use arcat::commclass::random_longest_word;
use arcat::{CommClass, FoldedType, QDatum, RootSystem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn root_system(ty: &str) -> Arc<RootSystem> {
    Arc::new(RootSystem::parse(ty).expect("built-in diagram"))
}

/// A fixed pseudo-random class of the given type.
pub fn class(ty: &str, seed: u64) -> CommClass {
    let rs = root_system(ty);
    let w = random_longest_word(&rs, &mut ChaCha8Rng::seed_from_u64(seed));
    CommClass::new(&rs, &w).expect("random longest words are reduced")
}

pub fn standard(ty: &str) -> QDatum {
    QDatum::standard(ty.parse::<FoldedType>().expect("built-in type")).expect("standard datum")
}
