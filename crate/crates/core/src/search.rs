//! Golden-section search for a unimodal function on a closed interval.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimises `f` on `[lo, hi]`, stopping once the bracket is narrower than
/// `tol`. The returned point is the best of the bracket midpoint and the two
/// interior probes.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Minimum {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let tol = tol.max(f64::EPSILON * a.abs().max(b.abs()));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evaluations = 2;

    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evaluations += 1;
    }

    let mid = 0.5 * (a + b);
    let fm = f(mid);
    evaluations += 1;
    let (x, value) = [(mid, fm), (c, fc), (d, fd)]
        .into_iter()
        .fold((mid, fm), |best, cand| if cand.1 < best.1 { cand } else { best });
    Minimum { x, value, evaluations }
}
