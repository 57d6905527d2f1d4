//! Harmony search over bounded integer-lattice vectors.
//!
//! A small memory of candidate vectors is improvised on, one candidate per
//! iteration: each component is either copied from a random memory entry
//! (and optionally pitch-adjusted by a bounded random step) or drawn fresh,
//! then the candidate replaces the worst memory entry if it is strictly
//! better. Fitness is minimized. The block-matching layer drives the same
//! primitives with its own fitness strategy, so improvisation exposes a
//! pluggable fresh-draw rule.

use crate::error::{Error, Result};
use rand::Rng;

/// Optimizer parameters: memory size, memory-consideration and
/// pitch-adjustment rates, bandwidth of a pitch step, and iteration count.
#[derive(Clone, Copy, Debug)]
pub struct HsParams {
    pub hms: usize,
    pub hmcr: f64,
    pub par: f64,
    pub bw: f64,
    pub ni: u32,
}

impl HsParams {
    pub fn validate(&self) -> Result<()> {
        if self.hms == 0 {
            return Err(Error::InvalidParameter("hms must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.hmcr) {
            return Err(Error::InvalidParameter(format!(
                "hmcr {} outside [0, 1]",
                self.hmcr
            )));
        }
        if !(0.0..=1.0).contains(&self.par) {
            return Err(Error::InvalidParameter(format!(
                "par {} outside [0, 1]",
                self.par
            )));
        }
        if !self.bw.is_finite() || self.bw < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "bw {} must be finite and non-negative",
                self.bw
            )));
        }
        if self.ni == 0 {
            return Err(Error::InvalidParameter("ni must be at least 1".into()));
        }
        Ok(())
    }
}

/// Inclusive per-dimension bounds of the search lattice.
#[derive(Clone, Debug)]
pub struct Bounds {
    lower: Vec<i32>,
    upper: Vec<i32>,
}

impl Bounds {
    pub fn new(lower: Vec<i32>, upper: Vec<i32>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::InvalidParameter(
                "bounds need matching, non-empty lower/upper vectors".into(),
            ));
        }
        for (l, u) in lower.iter().zip(&upper) {
            if l > u {
                return Err(Error::InvalidParameter(format!(
                    "lower bound {l} above upper bound {u}"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// Symmetric square bounds [-r, r]^dims.
    pub fn symmetric(radius: i32, dims: usize) -> Self {
        Self {
            lower: vec![-radius; dims],
            upper: vec![radius; dims],
        }
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self, j: usize) -> i32 {
        self.lower[j]
    }

    pub fn upper(&self, j: usize) -> i32 {
        self.upper[j]
    }

    pub fn contains(&self, x: &[i32]) -> bool {
        x.len() == self.dims()
            && x.iter()
                .enumerate()
                .all(|(j, &c)| self.lower[j] <= c && c <= self.upper[j])
    }

    pub fn clamp(&self, j: usize, value: i32) -> i32 {
        value.clamp(self.lower[j], self.upper[j])
    }
}

/// Whether a stored fitness came from an exact evaluation or was copied
/// from a neighbour by the approximation strategy.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    Evaluated,
    Estimated,
}

/// A fitness value tagged with how it was obtained.
#[derive(Clone, Copy, Debug)]
pub struct Fitness {
    pub value: f64,
    pub provenance: Provenance,
}

impl Fitness {
    pub fn evaluated(value: f64) -> Self {
        Self {
            value,
            provenance: Provenance::Evaluated,
        }
    }

    pub fn estimated(value: f64) -> Self {
        Self {
            value,
            provenance: Provenance::Estimated,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MemoryEntry {
    pub vector: Vec<i32>,
    pub fitness: Option<Fitness>,
}

/// The harmony memory: a fixed-size population of lattice vectors.
/// Fitness values stay unassigned until the first evaluation pass.
#[derive(Clone, Debug)]
pub struct HarmonyMemory {
    entries: Vec<MemoryEntry>,
}

impl HarmonyMemory {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MemoryEntry] {
        &self.entries
    }

    pub fn vector(&self, i: usize) -> &[i32] {
        &self.entries[i].vector
    }

    pub fn assign(&mut self, i: usize, fitness: Fitness) {
        self.entries[i].fitness = Some(fitness);
    }

    fn fitness_value(&self, i: usize) -> f64 {
        self.entries[i]
            .fitness
            .expect("memory entry fitness assigned before use")
            .value
    }

    /// Index and fitness of the worst (highest-fitness) entry; ties go to
    /// the lowest index.
    pub fn worst(&self) -> (usize, f64) {
        let mut idx = 0;
        let mut val = self.fitness_value(0);
        for i in 1..self.len() {
            let f = self.fitness_value(i);
            if f > val {
                idx = i;
                val = f;
            }
        }
        (idx, val)
    }

    /// Index and fitness of the best (lowest-fitness) entry; ties go to the
    /// lowest index.
    pub fn best(&self) -> (usize, f64) {
        let mut idx = 0;
        let mut val = self.fitness_value(0);
        for i in 1..self.len() {
            let f = self.fitness_value(i);
            if f < val {
                idx = i;
                val = f;
            }
        }
        (idx, val)
    }
}

/// How a component is drawn when memory consideration is skipped.
#[derive(Clone, Copy, Debug)]
pub enum RandomReinit {
    /// Uniform over the dimension's inclusive bounds.
    Uniform,
    /// round(r * amplitude) with r drawn from (-1, 1), clamped to bounds.
    ScaledRound { amplitude: f64 },
    /// 1 + round(r * amplitude), clamped to bounds. Kept selectable for
    /// experiments; the offset biases draws one lattice step positive.
    OffsetScaledRound { amplitude: f64 },
}

/// Builds the initial memory: either the provided seed vectors (exactly
/// `hms` of them, each inside bounds) or uniform random lattice points.
pub fn initialize_memory(
    bounds: &Bounds,
    params: &HsParams,
    seeds: Option<&[Vec<i32>]>,
    rng: &mut impl Rng,
) -> Result<HarmonyMemory> {
    params.validate()?;
    let entries = match seeds {
        Some(seeds) => {
            if seeds.len() != params.hms {
                return Err(Error::SeedCountMismatch {
                    got: seeds.len(),
                    hms: params.hms,
                });
            }
            for (index, s) in seeds.iter().enumerate() {
                if !bounds.contains(s) {
                    return Err(Error::SeedOutOfBounds { index });
                }
            }
            seeds
                .iter()
                .map(|s| MemoryEntry {
                    vector: s.clone(),
                    fitness: None,
                })
                .collect()
        }
        None => (0..params.hms)
            .map(|_| MemoryEntry {
                vector: (0..bounds.dims())
                    .map(|j| rng.gen_range(bounds.lower(j)..=bounds.upper(j)))
                    .collect(),
                fitness: None,
            })
            .collect(),
    };
    Ok(HarmonyMemory { entries })
}

/// Round half away from zero, the lattice rounding used by pitch
/// adjustment and scaled fresh draws.
fn round_to_lattice(x: f64) -> i32 {
    x.round() as i32
}

/// Improvises one candidate. Per dimension, independently: with
/// probability `hmcr` copy the component of a uniformly random memory
/// entry, then with probability `par` shift it by a random step of at most
/// `bw` (sign equiprobable, drawn separately); otherwise draw fresh via
/// `reinit`. Components are clamped to bounds either way.
pub fn improvise_with(
    memory: &HarmonyMemory,
    bounds: &Bounds,
    params: &HsParams,
    reinit: RandomReinit,
    rng: &mut impl Rng,
) -> Vec<i32> {
    let mut out = Vec::with_capacity(bounds.dims());
    for j in 0..bounds.dims() {
        let r1: f64 = rng.gen();
        let value = if r1 < params.hmcr {
            let a = rng.gen_range(0..memory.len());
            let mut c = memory.vector(a)[j];
            let r2: f64 = rng.gen();
            if r2 < params.par {
                let negative = rng.gen::<bool>();
                let step: f64 = rng.gen::<f64>() * params.bw;
                let shifted = c as f64 + if negative { -step } else { step };
                c = round_to_lattice(shifted);
            }
            c
        } else {
            match reinit {
                RandomReinit::Uniform => rng.gen_range(bounds.lower(j)..=bounds.upper(j)),
                RandomReinit::ScaledRound { amplitude } => {
                    let r: f64 = rng.gen_range(-1.0..1.0);
                    round_to_lattice(r * amplitude)
                }
                RandomReinit::OffsetScaledRound { amplitude } => {
                    let r: f64 = rng.gen_range(-1.0..1.0);
                    1 + round_to_lattice(r * amplitude)
                }
            }
        };
        out.push(bounds.clamp(j, value));
    }
    out
}

/// [`improvise_with`] using the uniform fresh draw.
pub fn improvise(
    memory: &HarmonyMemory,
    bounds: &Bounds,
    params: &HsParams,
    rng: &mut impl Rng,
) -> Vec<i32> {
    improvise_with(memory, bounds, params, RandomReinit::Uniform, rng)
}

/// Replaces the worst memory entry when the candidate is strictly better.
/// Returns whether a replacement happened.
pub fn update_memory(memory: &mut HarmonyMemory, candidate: Vec<i32>, fitness: Fitness) -> bool {
    let (worst_idx, worst_val) = memory.worst();
    if fitness.value < worst_val {
        memory.entries[worst_idx] = MemoryEntry {
            vector: candidate,
            fitness: Some(fitness),
        };
        true
    } else {
        false
    }
}

/// Result of a full optimization run.
#[derive(Clone, Debug)]
pub struct OptimizeResult {
    pub best: Vec<i32>,
    pub best_fitness: f64,
    /// Best-so-far after initialization and after each improvisation
    /// (`ni + 1` entries); non-increasing by construction.
    pub trace: Vec<f64>,
}

/// Plain harmony-search minimization of `fitness` over the bounded
/// lattice: every candidate is evaluated exactly.
pub fn optimize(
    mut fitness: impl FnMut(&[i32]) -> f64,
    bounds: &Bounds,
    params: &HsParams,
    seeds: Option<&[Vec<i32>]>,
    rng: &mut impl Rng,
) -> Result<OptimizeResult> {
    let mut memory = initialize_memory(bounds, params, seeds, rng)?;
    for i in 0..memory.len() {
        let value = fitness(memory.vector(i));
        memory.assign(i, Fitness::evaluated(value));
    }
    let (best_idx, mut best_val) = memory.best();
    let mut best_vec = memory.vector(best_idx).to_vec();
    let mut trace = Vec::with_capacity(params.ni as usize + 1);
    trace.push(best_val);
    for _ in 0..params.ni {
        let candidate = improvise(&memory, bounds, params, rng);
        let value = fitness(&candidate);
        if value < best_val {
            best_val = value;
            best_vec = candidate.clone();
        }
        update_memory(&mut memory, candidate, Fitness::evaluated(value));
        trace.push(best_val);
    }
    Ok(OptimizeResult {
        best: best_vec,
        best_fitness: best_val,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params() -> HsParams {
        HsParams {
            hms: 5,
            hmcr: 0.7,
            par: 0.3,
            bw: 8.0,
            ni: 25,
        }
    }

    #[test]
    fn initialize_uses_seeds_verbatim() {
        let bounds = Bounds::symmetric(8, 2);
        let seeds: Vec<Vec<i32>> = vec![
            vec![0, 0],
            vec![-4, 0],
            vec![4, 0],
            vec![0, -4],
            vec![0, 4],
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let memory = initialize_memory(&bounds, &params(), Some(&seeds), &mut rng).unwrap();
        assert_eq!(memory.len(), 5);
        for (entry, seed) in memory.entries().iter().zip(&seeds) {
            assert_eq!(&entry.vector, seed);
            assert!(entry.fitness.is_none());
        }
    }

    #[test]
    fn initialize_rejects_seed_count_mismatch() {
        let bounds = Bounds::symmetric(8, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let err = initialize_memory(&bounds, &params(), Some(&[vec![0, 0]]), &mut rng);
        assert!(err.is_err());
    }

    #[test]
    fn initialize_rejects_out_of_bounds_seed() {
        let bounds = Bounds::symmetric(8, 2);
        let seeds: Vec<Vec<i32>> =
            vec![vec![0, 0], vec![9, 0], vec![4, 0], vec![0, -4], vec![0, 4]];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(initialize_memory(&bounds, &params(), Some(&seeds), &mut rng).is_err());
    }

    #[test]
    fn initialize_random_respects_degenerate_bounds() {
        let bounds = Bounds::new(vec![0, 0], vec![0, 0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let memory = initialize_memory(&bounds, &params(), None, &mut rng).unwrap();
        for entry in memory.entries() {
            assert_eq!(entry.vector, vec![0, 0]);
        }
    }

    #[test]
    fn initialize_random_stays_in_bounds() {
        let bounds = Bounds::symmetric(8, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let memory = initialize_memory(&bounds, &params(), None, &mut rng).unwrap();
            for entry in memory.entries() {
                assert!(bounds.contains(&entry.vector));
            }
        }
    }

    #[test]
    fn improvise_pure_memory_copy() {
        // hmcr = 1 forces memory consideration, par = 0 disables pitch
        // adjustment: each output component must appear in the memory.
        let bounds = Bounds::symmetric(8, 2);
        let p = HsParams {
            hmcr: 1.0,
            par: 0.0,
            ..params()
        };
        let seeds: Vec<Vec<i32>> =
            vec![vec![1, 2], vec![-3, 4], vec![5, -6], vec![7, -8], vec![0, 0]];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let memory = initialize_memory(&bounds, &p, Some(&seeds), &mut rng).unwrap();
        for _ in 0..200 {
            let cand = improvise(&memory, &bounds, &p, &mut rng);
            for j in 0..2 {
                assert!(seeds.iter().any(|s| s[j] == cand[j]));
            }
        }
    }

    #[test]
    fn improvise_uniform_reinit_statistics() {
        // hmcr = 0 forces the fresh draw on every component; over many
        // draws the mean should sit near the bounds' midpoint.
        let bounds = Bounds::symmetric(8, 2);
        let p = HsParams {
            hmcr: 0.0,
            ..params()
        };
        let seeds: Vec<Vec<i32>> = vec![vec![8, 8]; 5];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let memory = initialize_memory(&bounds, &p, Some(&seeds), &mut rng).unwrap();
        let draws = 10_000;
        let mut sum = 0i64;
        for _ in 0..draws {
            let cand = improvise(&memory, &bounds, &p, &mut rng);
            sum += (cand[0] + cand[1]) as i64;
        }
        let mean = sum as f64 / (2 * draws) as f64;
        // Uniform on {-8..8}: sigma^2 = (17^2 - 1) / 12, three standard
        // errors of the mean of 20k draws.
        let se = ((17.0f64 * 17.0 - 1.0) / 12.0 / (2.0 * draws as f64)).sqrt();
        assert!(mean.abs() < 3.0 * se, "mean {mean} exceeds 3 se {}", 3.0 * se);
    }

    #[test]
    fn improvise_pitch_adjustment_clamps_at_bounds() {
        // Memory pinned at the upper bound with a huge bandwidth: any
        // positive step clamps back to the bound, negative steps stay in
        // range. Both signs must occur.
        let bounds = Bounds::symmetric(8, 1);
        let p = HsParams {
            hms: 1,
            hmcr: 1.0,
            par: 1.0,
            bw: 100.0,
            ni: 1,
        };
        let seeds: Vec<Vec<i32>> = vec![vec![8]];
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let memory = initialize_memory(&bounds, &p, Some(&seeds), &mut rng).unwrap();
        let mut at_bound = 0;
        let mut below = 0;
        for _ in 0..200 {
            let cand = improvise(&memory, &bounds, &p, &mut rng);
            assert!(bounds.contains(&cand));
            if cand[0] == 8 {
                at_bound += 1;
            } else {
                below += 1;
            }
        }
        assert!(at_bound > 0 && below > 0);
    }

    #[test]
    fn update_memory_replaces_strictly_worse_only() {
        let bounds = Bounds::symmetric(8, 2);
        let seeds: Vec<Vec<i32>> =
            vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![3, 0], vec![4, 0]];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut memory = initialize_memory(&bounds, &params(), Some(&seeds), &mut rng).unwrap();
        for (i, f) in [5.0, 3.0, 9.0, 1.0, 9.0].iter().enumerate() {
            memory.assign(i, Fitness::evaluated(*f));
        }
        // Strictly better than the worst (9.0 at index 2, lowest index
        // among the tie) replaces it.
        assert!(update_memory(&mut memory, vec![7, 7], Fitness::evaluated(8.0)));
        assert_eq!(memory.vector(2), &[7, 7]);
        // Equal to the new worst (9.0 at index 4) does not replace.
        assert!(!update_memory(&mut memory, vec![6, 6], Fitness::evaluated(9.0)));
        // Worse does not replace.
        assert!(!update_memory(&mut memory, vec![5, 5], Fitness::evaluated(11.0)));
        assert_eq!(memory.len(), 5);
    }

    #[test]
    fn optimize_converges_on_quadratic_bowl() {
        let bounds = Bounds::symmetric(8, 2);
        let p = HsParams {
            ni: 200,
            ..params()
        };
        let mut hits = 0;
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let result = optimize(
                |x| {
                    let dx = (x[0] - 3) as f64;
                    let dy = (x[1] - 3) as f64;
                    dx * dx + dy * dy
                },
                &bounds,
                &p,
                None,
                &mut rng,
            )
            .unwrap();
            if result.best_fitness == 0.0 {
                assert_eq!(result.best, vec![3, 3]);
                hits += 1;
            }
        }
        assert!(hits >= 95, "only {hits}/100 runs reached the optimum");
    }

    #[test]
    fn optimize_trace_is_monotone() {
        let bounds = Bounds::symmetric(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let result = optimize(
            |x| (x[0] * x[0] + x[1] * x[1]) as f64,
            &bounds,
            &params(),
            None,
            &mut rng,
        )
        .unwrap();
        assert_eq!(result.trace.len(), 26);
        assert!(result.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*result.trace.last().unwrap(), result.best_fitness);
    }

    #[test]
    fn optimize_constant_fitness_returns_memory_entry() {
        let bounds = Bounds::symmetric(8, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let result = optimize(|_| 42.0, &bounds, &params(), None, &mut rng).unwrap();
        assert_eq!(result.best_fitness, 42.0);
        assert!(bounds.contains(&result.best));
    }

    #[test]
    fn zero_iterations_rejected() {
        let p = HsParams { ni: 0, ..params() };
        assert!(p.validate().is_err());
        let bounds = Bounds::symmetric(8, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        assert!(optimize(|_| 0.0, &bounds, &p, None, &mut rng).is_err());
    }

    #[test]
    fn invalid_rates_rejected() {
        assert!(HsParams {
            hmcr: 1.5,
            ..params()
        }
        .validate()
        .is_err());
        assert!(HsParams {
            par: -0.1,
            ..params()
        }
        .validate()
        .is_err());
        assert!(HsParams { hms: 0, ..params() }.validate().is_err());
    }
}
