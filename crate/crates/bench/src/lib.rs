//! Fixtures shared by the benchmarks in `benches/`.

use mixcens::simulation::{generate_population, sample_dataset};
use mixcens::{Dataset, DgpParams, NuisanceValues, Population};

pub fn population(n_pop: usize) -> Population {
    generate_population(&DgpParams { n_pop, ..DgpParams::default() }).expect("default design is valid")
}

/// A sample of `n` units with the true nuisance values at each unit.
pub fn sample(pop: &Population, n: usize) -> (Dataset, NuisanceValues) {
    let d = sample_dataset(pop, n, 1).expect("sample fits in population");
    let eta = NuisanceValues::from_fn(d.len(), |i| pop.params.true_eta(d.observations[i].x[0]));
    (d, eta)
}
