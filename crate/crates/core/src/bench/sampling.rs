//! Low-discrepancy sampling of the search domain.
//!
//! Dimensions up to 10 use a Sobol sequence (Joe-Kuo direction numbers)
//! with a seeded digital shift so repetitions get independent streams.
//! Higher dimensions fall back to a seeded stratified Latin hypercube.

use rand::Rng;
use rand::seq::SliceRandom;

use crate::bench::{DOMAIN, EvalBudget, ProblemInstance};
use crate::error::{Error, Result};
use crate::seed;

const SOBOL_MAX_DIM: usize = 10;
const BITS: usize = 32;

/// Joe-Kuo parameters (s, a, m) for dimensions 2..=10; dimension 1 is the
/// van der Corput sequence in base 2.
const JOE_KUO: [(u32, u32, &[u32]); 9] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
];

fn direction_numbers(dim_index: usize) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    if dim_index == 0 {
        for (c, slot) in v.iter_mut().enumerate() {
            *slot = 1u32 << (31 - c);
        }
        return v;
    }
    let (s, a, m) = JOE_KUO[dim_index - 1];
    let s = s as usize;
    for c in 0..s.min(BITS) {
        v[c] = m[c] << (31 - c);
    }
    for c in s..BITS {
        let mut val = v[c - s] ^ (v[c - s] >> s);
        for k in 1..s {
            if (a >> (s - 1 - k)) & 1 == 1 {
                val ^= v[c - k];
            }
        }
        v[c] = val;
    }
    v
}

/// Gray-code Sobol generator over `[0,1)^dim` with a per-seed digital shift.
struct SobolStream {
    dirs: Vec<[u32; BITS]>,
    state: Vec<u32>,
    shift: Vec<u32>,
    index: u64,
}

impl SobolStream {
    fn new(dim: usize, seed_value: u64) -> Self {
        let mut rng = seed::rng(seed_value, "bench.sobol.shift", &[dim as u64]);
        SobolStream {
            dirs: (0..dim).map(direction_numbers).collect(),
            state: vec![0; dim],
            shift: (0..dim).map(|_| rng.random::<u32>()).collect(),
            index: 0,
        }
    }

    fn next_point(&mut self) -> Vec<f64> {
        if self.index > 0 {
            let bit = self.index.trailing_zeros() as usize;
            for (d, s) in self.state.iter_mut().enumerate() {
                *s ^= self.dirs[d][bit];
            }
        }
        self.index += 1;
        self.state
            .iter()
            .zip(&self.shift)
            .map(|(s, sh)| (s ^ sh) as f64 / (1u64 << 32) as f64)
            .collect()
    }
}

/// Seeded stratified Latin hypercube: one point per stratum per dimension.
fn latin_hypercube(dim: usize, k: usize, seed_value: u64) -> Vec<Vec<f64>> {
    let mut rng = seed::rng(seed_value, "bench.lhs", &[dim as u64, k as u64]);
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut strata: Vec<usize> = (0..k).collect();
        strata.shuffle(&mut rng);
        let column: Vec<f64> =
            strata.iter().map(|&s| (s as f64 + rng.random::<f64>()) / k as f64).collect();
        columns.push(column);
    }
    (0..k).map(|i| columns.iter().map(|col| col[i]).collect()).collect()
}

/// Draw `k` low-discrepancy points over the search domain and evaluate each.
pub fn low_discrepancy_sample(
    instance: &ProblemInstance,
    k: usize,
    seed_value: u64,
    budget: &mut EvalBudget,
) -> Result<Vec<(Vec<f64>, f64)>> {
    if k < 1 {
        return Err(Error::domain("sample count must be >= 1"));
    }
    budget.ensure(k as u64)?;

    let unit_points: Vec<Vec<f64>> = if instance.dim <= SOBOL_MAX_DIM {
        let mut stream = SobolStream::new(instance.dim, seed_value);
        (0..k).map(|_| stream.next_point()).collect()
    } else {
        latin_hypercube(instance.dim, k, seed_value)
    };

    let width = DOMAIN.1 - DOMAIN.0;
    let mut out = Vec::with_capacity(k);
    for unit in unit_points {
        let x: Vec<f64> = unit.iter().map(|u| DOMAIN.0 + width * u).collect();
        let f = instance.evaluate(&x, budget)?;
        out.push((x, f));
    }
    Ok(out)
}
