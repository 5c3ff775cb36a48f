//! Physical domain patterns synthesized from a [`DualGrating`].

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use super::{Duty, DualGrating};
use crate::error::{Error, Result};

/// Alternating-sign domain structure on `[0, length]`.
///
/// `boundaries` are the interior domain walls in increasing order; the first
/// domain has sign `initial_sign` and signs alternate across every wall.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainPattern {
    boundaries: Vec<f64>,
    initial_sign: i8,
    length: f64,
}

impl DomainPattern {
    pub fn new(boundaries: Vec<f64>, initial_sign: i8, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "pattern length must be positive, got {length}"
            )));
        }
        if initial_sign != 1 && initial_sign != -1 {
            return Err(Error::InvalidInput("initial sign must be +1 or -1".into()));
        }
        let mut prev = 0.0;
        for &b in &boundaries {
            if !(b > prev) {
                return Err(Error::InvalidInput(format!(
                    "domain walls must be strictly increasing inside (0, L); {b} follows {prev}"
                )));
            }
            prev = b;
        }
        if prev >= length && !boundaries.is_empty() {
            return Err(Error::InvalidInput("domain wall at or beyond the pattern end".into()));
        }
        Ok(Self {
            boundaries,
            initial_sign,
            length,
        })
    }

    /// A plain periodic pattern with one period and duty cycle.
    pub fn single_period(period: f64, duty: Duty, length: f64) -> Result<Self> {
        if !(period > 0.0) || length < period {
            return Err(Error::InvalidInput(format!(
                "need 0 < period <= length, got period {period}, length {length}"
            )));
        }
        let mut walls = Vec::new();
        let mut k = 0u64;
        loop {
            let start = k as f64 * period;
            let mid = start + duty.value() * period;
            if start > 0.0 && start < length {
                walls.push(start);
            }
            if mid >= length {
                break;
            }
            walls.push(mid);
            k += 1;
        }
        Self::new(walls, 1, length)
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn initial_sign(&self) -> i8 {
        self.initial_sign
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Iterates over `(start, end, sign)` for every domain.
    pub fn domains(&self) -> impl Iterator<Item = (f64, f64, i8)> + '_ {
        let edges = std::iter::once(0.0)
            .chain(self.boundaries.iter().copied())
            .chain(std::iter::once(self.length));
        let mut sign = -self.initial_sign;
        edges
            .clone()
            .zip(edges.skip(1))
            .map(move |(a, b)| {
                sign = -sign;
                (a, b, sign)
            })
    }

    /// Sign of the domain containing `x`.
    pub fn sign_at(&self, x: f64) -> i8 {
        let crossed = self.boundaries.partition_point(|&b| b <= x);
        if crossed % 2 == 0 {
            self.initial_sign
        } else {
            -self.initial_sign
        }
    }

    /// Mean of the sign function over the pattern.
    pub fn mean_sign(&self) -> f64 {
        self.domains().map(|(a, b, s)| s as f64 * (b - a)).sum::<f64>() / self.length
    }

    fn header(&self, grating: Option<&DualGrating>, extra: &[(String, String)]) -> String {
        let mut out = String::from("# dual-periodic domain pattern\n");
        if let Some(g) = grating {
            let _ = writeln!(out, "# lambda1_um = {:.6}", g.lambda1());
            let _ = writeln!(out, "# lambda2_um = {:.6}", g.lambda2());
            let _ = writeln!(out, "# duty1 = {}", g.duty1());
            let _ = writeln!(out, "# duty2 = {}", g.duty2());
            match g.l() {
                Some(l) => {
                    let _ = writeln!(out, "# l = {l}");
                }
                None => out.push_str("# l = none\n"),
            }
        }
        let _ = writeln!(out, "# total_length_um = {:.6}", self.length);
        for (k, v) in extra {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out
    }

    /// Rows of (wall position, sign of the domain ending there); the last row
    /// is the end of the pattern.
    fn rows(&self) -> impl Iterator<Item = (f64, i8)> + '_ {
        self.domains().map(|(_, end, sign)| (end, sign))
    }

    /// Plain-text export: comment header then `position sign` rows.
    pub fn to_text(&self, grating: Option<&DualGrating>, extra: &[(String, String)]) -> String {
        let mut out = self.header(grating, extra);
        out.push_str("# boundary_um ending_sign\n");
        for (x, s) in self.rows() {
            let _ = writeln!(out, "{x:.6} {s:+}");
        }
        out
    }

    /// CSV export with the same columns as [`DomainPattern::to_text`].
    pub fn to_csv(&self, grating: Option<&DualGrating>, extra: &[(String, String)]) -> String {
        let mut out = self.header(grating, extra);
        out.push_str("boundary_um,ending_sign\n");
        for (x, s) in self.rows() {
            let _ = writeln!(out, "{x:.6},{s:+}");
        }
        out
    }
}

fn square_sign(x: f64, period: f64, duty: Duty) -> i8 {
    let frac = (x / period).rem_euclid(1.0);
    if frac < duty.value() {
        1
    } else {
        -1
    }
}

/// Builds the domain pattern of g₁(x)·g₂(x) on `[0, total_length]`.
///
/// For constraint-compliant gratings every wall sits on a multiple of Λ₁/2,
/// so walls are generated on that integer lattice and coincident transitions
/// of the two square waves cancel exactly.
pub fn synthesize_pattern(g: &DualGrating, total_length: f64) -> Result<DomainPattern> {
    if !(total_length >= g.lambda2()) || !total_length.is_finite() {
        return Err(Error::InvalidInput(format!(
            "pattern length {total_length} um is shorter than Λ2 = {} um",
            g.lambda2()
        )));
    }
    match g.l() {
        Some(l) => synthesize_on_lattice(g, l, total_length),
        None => synthesize_general(g, total_length),
    }
}

fn synthesize_on_lattice(g: &DualGrating, l: u32, total_length: f64) -> Result<DomainPattern> {
    let half = g.lambda1() / 2.0;
    let plus2 = (l / 2) as u64;
    let sign_of_step = |k: u64| -> i8 {
        let s1 = if k % 2 == 0 { 1 } else { -1 };
        let s2 = if k % l as u64 <= plus2 - 1 { 1 } else { -1 };
        s1 * s2
    };
    let steps = (total_length / half).ceil() as u64;
    let mut walls = Vec::new();
    let mut prev = sign_of_step(0);
    for k in 1..steps {
        let s = sign_of_step(k);
        if s != prev {
            let x = k as f64 * half;
            if x < total_length {
                walls.push(x);
            }
        }
        prev = s;
    }
    DomainPattern::new(walls, sign_of_step(0), total_length)
}

fn synthesize_general(g: &DualGrating, total_length: f64) -> Result<DomainPattern> {
    let mut candidates = Vec::new();
    for (period, duty) in [(g.lambda1(), g.duty1()), (g.lambda2(), g.duty2())] {
        let mut k = 0u64;
        loop {
            let start = k as f64 * period;
            if start >= total_length {
                break;
            }
            if start > 0.0 {
                candidates.push(start);
            }
            let mid = start + duty.value() * period;
            if mid < total_length {
                candidates.push(mid);
            }
            k += 1;
        }
    }
    candidates.sort_by(f64::total_cmp);
    let eps = 1e-9 * g.lambda1();
    candidates.dedup_by(|b, a| (*b - *a).abs() <= eps);

    let sign = |x: f64| square_sign(x, g.lambda1(), g.duty1()) * square_sign(x, g.lambda2(), g.duty2());
    let mut edges = Vec::with_capacity(candidates.len() + 2);
    edges.push(0.0);
    edges.extend(candidates);
    edges.push(total_length);

    let mut walls = Vec::new();
    let mut prev = sign(0.5 * (edges[0] + edges[1]));
    let initial = prev;
    for w in edges.windows(3) {
        let s = sign(0.5 * (w[1] + w[2]));
        if s != prev {
            walls.push(w[1]);
        }
        prev = s;
    }
    DomainPattern::new(walls, initial, total_length)
}

/// (1/L)∫₀ᴸ g(x) e^{+iGx} dx, integrated exactly domain by domain.
pub fn pattern_fourier(p: &DomainPattern, spatial_freq: f64) -> Result<Complex64> {
    if p.length <= 0.0 {
        return Err(Error::InvalidInput("empty pattern".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b, s) in p.domains() {
        let w = b - a;
        let half_phase = 0.5 * spatial_freq * w;
        let sinc = if half_phase.abs() < 1e-8 {
            1.0 - half_phase * half_phase / 6.0
        } else {
            half_phase.sin() / half_phase
        };
        acc += Complex64::from_polar(s as f64 * w * sinc, 0.5 * spatial_freq * (a + b));
    }
    Ok(acc / p.length)
}

/// Smallest gap between consecutive interior walls; falls back to the
/// shortest domain when there are fewer than two walls.
pub fn min_domain(p: &DomainPattern) -> f64 {
    if p.boundaries.len() < 2 {
        return p.domains().map(|(a, b, _)| b - a).fold(f64::INFINITY, f64::min);
    }
    p.boundaries
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}
