//! Powell's direction-set method with golden-section line maximisation.

const GOLDEN: f64 = 1.618_033_988_749_895;
const INV_GOLDEN: f64 = 0.618_033_988_749_895;
const LINE_TOL: f64 = 1e-9;
const BRACKET_GROWTH_LIMIT: usize = 60;

#[derive(Debug, Clone, Copy)]
pub struct PowellOptions {
    pub max_iterations: usize,
    /// A sweep counts as converged when it improves `f` by less than
    /// `tolerance · max(1, |f|)`.
    pub tolerance: f64,
    pub initial_step: f64,
}

impl Default for PowellOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tolerance: 1e-12,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PowellResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

struct Counted<F> {
    f: F,
    calls: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.calls += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }
}

fn along(x: &[f64], d: &[f64], t: f64, out: &mut [f64]) {
    for ((o, xi), di) in out.iter_mut().zip(x).zip(d) {
        *o = xi + t * di;
    }
}

/// Maximises `f` along `x + t d` and moves `x` to the best point found.
/// Returns the new value.
fn line_maximize<F: FnMut(&[f64]) -> f64>(
    f: &mut Counted<F>,
    x: &mut [f64],
    fx: f64,
    d: &[f64],
    step: f64,
) -> f64 {
    let mut buf = vec![0.0; x.len()];
    let at = |f: &mut Counted<F>, t: f64, buf: &mut Vec<f64>| {
        along(x, d, t, buf);
        f.eval(buf)
    };

    // Bracket a maximum: find a < b < c with f(b) >= f(a), f(c).
    let (mut a, mut fa) = (0.0, fx);
    let (mut b, mut fb) = (step, at(f, step, &mut buf));
    if fb < fa {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = b + GOLDEN * (b - a);
    let mut fc = at(f, c, &mut buf);
    let mut growth = 0;
    while fc > fb && growth < BRACKET_GROWTH_LIMIT {
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        c = b + GOLDEN * (b - a);
        fc = at(f, c, &mut buf);
        growth += 1;
    }
    let _ = fa;
    if fc > fb {
        along(x, d, c, &mut buf);
        x.copy_from_slice(&buf);
        return fc;
    }

    // Golden-section search on [lo, hi] around b.
    let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
    let mut x1 = hi - INV_GOLDEN * (hi - lo);
    let mut x2 = lo + INV_GOLDEN * (hi - lo);
    let mut f1 = at(f, x1, &mut buf);
    let mut f2 = at(f, x2, &mut buf);
    while (hi - lo).abs() > LINE_TOL * (1.0 + x1.abs() + x2.abs()) {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_GOLDEN * (hi - lo);
            f1 = at(f, x1, &mut buf);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_GOLDEN * (hi - lo);
            f2 = at(f, x2, &mut buf);
        }
    }
    let (t, ft) = [(b, fb), (x1, f1), (x2, f2)]
        .into_iter()
        .fold(
            (0.0, fx),
            |best, cand| if cand.1 > best.1 { cand } else { best },
        );
    along(x, d, t, &mut buf);
    x.copy_from_slice(&buf);
    ft
}

/// Maximises `f` from `x0` with the coordinate axes as initial directions.
pub fn powell_maximize<F: FnMut(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    opts: &PowellOptions,
) -> PowellResult {
    let n = x0.len();
    let mut f = Counted { f, calls: 0 };
    let mut x = x0.to_vec();
    let mut fx = f.eval(&x);
    let mut dirs: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut d = vec![0.0; n];
            d[i] = 1.0;
            d
        })
        .collect();
    let mut iterations = 0;
    let mut converged = false;
    let mut step = opts.initial_step;
    while iterations < opts.max_iterations {
        iterations += 1;
        let start = x.clone();
        let f_start = fx;
        let mut biggest = 0.0;
        let mut biggest_at = 0;
        for (i, d) in dirs.iter().enumerate() {
            let before = fx;
            fx = line_maximize(&mut f, &mut x, fx, d, step);
            if fx - before > biggest {
                biggest = fx - before;
                biggest_at = i;
            }
        }
        let gain = fx - f_start;
        if gain <= opts.tolerance * fx.abs().max(1.0) {
            converged = true;
            break;
        }
        let moved: Vec<f64> = x.iter().zip(&start).map(|(a, b)| a - b).collect();
        let norm = moved.iter().map(|v| v * v).sum::<f64>().sqrt();
        step = (2.0 * norm).clamp(1e-6, opts.initial_step);
        if norm == 0.0 {
            continue;
        }
        let mut extrapolated = vec![0.0; n];
        along(&x, &moved, 1.0, &mut extrapolated);
        let fe = f.eval(&extrapolated);
        if fe > f_start {
            let t = -2.0 * (f_start - 2.0 * fx + fe) * (fx - f_start - biggest).powi(2)
                - biggest * (fe - f_start).powi(2);
            if t < 0.0 {
                let unit: Vec<f64> = moved.iter().map(|v| v / norm).collect();
                fx = line_maximize(&mut f, &mut x, fx, &unit, norm);
                dirs.remove(biggest_at);
                dirs.push(unit);
            }
        }
    }
    PowellResult {
        x,
        value: fx,
        iterations,
        evaluations: f.calls,
        converged,
    }
}
