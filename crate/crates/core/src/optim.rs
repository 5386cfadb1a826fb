//! Multi-start Nelder-Mead over small angle spaces.
//!
//! The objectives here are smooth, low-dimensional (8 or 12 parameters) and
//! multimodal, which is exactly where restarted simplex search earns its
//! keep: no gradients, no dependencies, and bit-reproducible runs. Restart
//! initial points are drawn from a counter-based splitmix stream keyed by
//! `(seed, restart index)`, so results do not depend on evaluation order.

/// Splitmix-style counter PRNG. Small state, full 64-bit avalanche per step.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Stream for one restart: decorrelated from neighbours by the golden
    /// ratio increment.
    pub fn for_restart(seed: u64, restart: u64) -> Self {
        Self::new(seed ^ (restart.wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Termination report of one Nelder-Mead run.
#[derive(Debug, Clone)]
pub struct NelderMeadRun {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimize `f` from `start` with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2). Stops when the
/// simplex diameter falls below `diameter_tol` or after `max_iters`.
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    start: &[f64],
    step: f64,
    diameter_tol: f64,
    max_iters: usize,
) -> NelderMeadRun {
    let dim = start.len();
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim + 1);
    simplex.push((f(start), start.to_vec()));
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += step;
        simplex.push((f(&v), v));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        iterations += 1;
        simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite objective"));

        let diameter = simplex[1..]
            .iter()
            .map(|(_, v)| {
                v.iter().zip(&simplex[0].1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < diameter_tol {
            converged = true;
            break;
        }

        let worst = simplex[dim].clone();
        let second_worst_value = simplex[dim - 1].0;
        let best_value = simplex[0].0;

        let mut centroid = vec![0.0; dim];
        for (_, v) in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let reflect: Vec<f64> = centroid.iter().zip(&worst.1).map(|(c, w)| c + (c - w)).collect();
        let f_reflect = f(&reflect);

        if f_reflect < best_value {
            let expand: Vec<f64> =
                centroid.iter().zip(&reflect).map(|(c, r)| c + 2.0 * (r - c)).collect();
            let f_expand = f(&expand);
            simplex[dim] =
                if f_expand < f_reflect { (f_expand, expand) } else { (f_reflect, reflect) };
        } else if f_reflect < second_worst_value {
            simplex[dim] = (f_reflect, reflect);
        } else {
            let (toward, f_toward) = if f_reflect < worst.0 {
                (reflect.clone(), f_reflect)
            } else {
                (worst.1.clone(), worst.0)
            };
            let contract: Vec<f64> =
                centroid.iter().zip(&toward).map(|(c, t)| c + 0.5 * (t - c)).collect();
            let f_contract = f(&contract);
            if f_contract < f_toward {
                simplex[dim] = (f_contract, contract);
            } else {
                // Shrink everything toward the best vertex.
                let best = simplex[0].1.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> =
                        best.iter().zip(&entry.1).map(|(b, x)| b + 0.5 * (x - b)).collect();
                    *entry = (f(&v), v);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite objective"));
    let (best_value, best_point) = simplex.swap_remove(0);
    NelderMeadRun { best_point, best_value, iterations, converged }
}

/// Max absolute component of the central-difference gradient of `f` at `x`.
pub fn stationarity_residual(f: &mut dyn FnMut(&[f64]) -> f64, x: &[f64], step: f64) -> f64 {
    let mut worst = 0.0f64;
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        probe[i] = x[i] + step;
        let up = f(&probe);
        probe[i] = x[i] - step;
        let down = f(&probe);
        probe[i] = x[i];
        worst = worst.max(((up - down) / (2.0 * step)).abs());
    }
    worst
}
