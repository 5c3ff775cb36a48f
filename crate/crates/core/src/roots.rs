//! Bracketing root finder (Brent's method).

/// Why a bracketed solve did not converge.
#[derive(Debug, Clone, PartialEq)]
pub enum RootError {
    /// f(a) and f(b) have the same sign.
    NotBracketed { fa: f64, fb: f64 },
    /// The function returned NaN inside the bracket.
    NotFinite { x: f64 },
    IterationLimit { last_x: f64, last_f: f64 },
}

impl std::fmt::Display for RootError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootError::NotBracketed { fa, fb } => {
                write!(f, "root not bracketed (f(a) = {fa}, f(b) = {fb})")
            }
            RootError::NotFinite { x } => write!(f, "function not finite at x = {x}"),
            RootError::IterationLimit { last_x, last_f } => {
                write!(f, "iteration limit reached at x = {last_x} (f = {last_f})")
            }
        }
    }
}

impl std::error::Error for RootError {}

/// Convergence settings. The solve stops as soon as |f| <= `f_tol` or the
/// bracket has shrunk below `x_tol`.
#[derive(Debug, Clone, Copy)]
pub struct BrentOptions {
    pub f_tol: f64,
    pub x_tol: f64,
    pub max_iter: usize,
}

impl Default for BrentOptions {
    fn default() -> Self {
        Self {
            f_tol: 1e-9,
            x_tol: 1e-14,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[a, b]` with Brent's method (inverse quadratic
/// interpolation, secant and bisection steps).
pub fn brent<F>(mut f: F, a: f64, b: f64, opts: BrentOptions) -> Result<f64, RootError>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() {
        return Err(RootError::NotFinite { x: a });
    }
    if !fb.is_finite() {
        return Err(RootError::NotFinite { x: b });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NotBracketed { fa, fb });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.x_tol;
        let m = 0.5 * (c - b);
        if fb.abs() <= opts.f_tol || m.abs() <= tol {
            return Ok(b);
        }

        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(RootError::NotFinite { x: b });
        }
    }
    Err(RootError::IterationLimit {
        last_x: b,
        last_f: fb,
    })
}

/// Scans `[lo, hi]` in `steps` equal intervals and refines every sign change
/// with [`brent`]. Roots are returned in increasing order.
pub fn all_roots<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    steps: usize,
    opts: BrentOptions,
) -> Result<Vec<f64>, RootError>
where
    F: FnMut(f64) -> f64,
{
    let steps = steps.max(1);
    let h = (hi - lo) / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0);
    for k in 1..=steps {
        let x1 = if k == steps { hi } else { lo + h * k as f64 };
        let f1 = f(x1);
        if !f0.is_finite() {
            return Err(RootError::NotFinite { x: x0 });
        }
        if f0 == 0.0 {
            roots.push(x0);
        } else if f1.is_finite() && f0.signum() != f1.signum() && f1 != 0.0 {
            roots.push(brent(&mut f, x0, x1, opts)?);
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(x0);
    }
    Ok(roots)
}
