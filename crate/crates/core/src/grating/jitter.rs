//! Monte Carlo model of domain-wall placement errors.
//!
//! Every interior wall is displaced by an independent N(0, σ²) offset. Walls
//! that overtake their neighbour annihilate in pairs (the thin domain between
//! them disappears); walls pushed out of `[0, L]` are dropped.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use super::pattern::{pattern_fourier, DomainPattern};
use crate::error::{Error, Result};
use crate::warnings::Warning;

/// Crossing rate above which a warning is attached.
const CROSSING_WARN_RATE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JitterStats {
    pub sigma_um: f64,
    pub trials: usize,
    pub mean_abs: f64,
    pub std_abs: f64,
    pub crossing_rate: f64,
    pub warning: Option<Warning>,
}

/// Statistics of |pattern_fourier| at `spatial_freq` over `trials` jittered
/// copies of `p`. Trial `k` draws from a ChaCha8 stream `(seed, k)`, so the
/// result does not depend on thread scheduling.
pub fn poling_error_mc(
    p: &DomainPattern,
    sigma: f64,
    trials: usize,
    spatial_freq: f64,
    seed: u64,
) -> Result<JitterStats> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput(format!("jitter sigma must be >= 0, got {sigma}")));
    }
    if trials == 0 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    if sigma == 0.0 {
        return Ok(JitterStats {
            sigma_um: 0.0,
            trials,
            mean_abs: pattern_fourier(p, spatial_freq)?.norm(),
            std_abs: 0.0,
            crossing_rate: 0.0,
            warning: None,
        });
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidInput(e.to_string()))?;

    let results: Vec<Result<(f64, bool)>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let (jittered, crossed) = jitter_once(p, |_| normal.sample(&mut rng))?;
            Ok((pattern_fourier(&jittered, spatial_freq)?.norm(), crossed))
        })
        .collect();

    let mut values = Vec::with_capacity(trials);
    let mut crossings = 0usize;
    for r in results {
        let (v, crossed) = r?;
        values.push(v);
        crossings += crossed as usize;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let crossing_rate = crossings as f64 / n;
    Ok(JitterStats {
        sigma_um: sigma,
        trials,
        mean_abs: mean,
        std_abs: std,
        crossing_rate,
        warning: (crossing_rate > CROSSING_WARN_RATE)
            .then_some(Warning::BoundaryCrossings { rate: crossing_rate }),
    })
}

/// Applies `offset` to every wall and rebuilds a valid pattern. Returns
/// whether any pair of walls crossed.
fn jitter_once(
    p: &DomainPattern,
    mut offset: impl FnMut(usize) -> f64,
) -> Result<(DomainPattern, bool)> {
    let length = p.length();
    let mut sign = p.initial_sign();
    let mut kept: Vec<f64> = Vec::with_capacity(p.boundaries().len());
    let mut crossed = false;
    for (i, &b) in p.boundaries().iter().enumerate() {
        let x = b + offset(i);
        if x <= 0.0 {
            // The leading domain vanished.
            if kept.is_empty() {
                sign = -sign;
            } else {
                kept.pop();
                crossed = true;
            }
            continue;
        }
        if x >= length {
            continue;
        }
        match kept.last() {
            Some(&last) if x <= last => {
                kept.pop();
                crossed = true;
            }
            _ => kept.push(x),
        }
    }
    Ok((DomainPattern::new(kept, sign, length)?, crossed))
}
