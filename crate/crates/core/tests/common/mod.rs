#![allow(dead_code)]

pub mod dot;

use emdm_er::{parse_schema, EmdmSchema};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn genealogy() -> EmdmSchema {
    parse_schema(emdm_er::corpus::GENEALOGY).unwrap().schema
}

/// Random schema with at most 50 sets and 200 structural functions.
pub fn random_schema(seed: u64) -> (String, EmdmSchema) {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sets = rng.gen_range(1..=50);
    let funcs = rng.gen_range(0..=200);
    let src = emdm_er::synth::random(sets, funcs, &mut rng);
    let schema = parse_schema(&src).unwrap_or_else(|e| panic!("seed {seed}: {e}")).schema;
    (src, schema)
}
