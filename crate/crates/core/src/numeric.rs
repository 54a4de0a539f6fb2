//! Root finding and adaptive quadrature shared by the period and transit integrals.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Brent's method on a sign-changing bracket.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64, rtol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoBracket(format!("f({a:e})={fa:e}, f({b:e})={fb:e}")));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * (xtol + rtol * b.abs());
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
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
            return Err(Error::NoBracket(format!("non-finite value at {b:e}")));
        }
    }
    Ok(b)
}

/// First point of the geometric grid start, 2·start, 4·start, ... (up to 2^60·start)
/// where `pred` holds; returns the bracket `(previous, hit)`.
pub fn geometric_bracket<P: FnMut(f64) -> bool>(mut pred: P, start: f64) -> Option<(f64, f64)> {
    let mut prev = 0.0;
    let mut x = start;
    for _ in 0..=(60 + 27) {
        if pred(x) {
            return Some((prev, x));
        }
        prev = x;
        x *= 2.0;
    }
    None
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

#[derive(Debug, Clone, Copy)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Adaptive Gauss-Kronrod (7/15) with global error control.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<Quad> {
    if a == b {
        return Ok(Quad { value: 0.0, error: 0.0, evals: 0 });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, val: v, err: e });
    let (mut total, mut err) = (v, e);
    let mut evals = 15;
    while err > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() > 4000 || !total.is_finite() {
            return Err(Error::Quadrature { value: total, error: err });
        }
        let p = heap.pop().unwrap();
        let m = 0.5 * (p.a + p.b);
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        evals += 30;
        total += v1 + v2 - p.val;
        err += e1 + e2 - p.err;
        heap.push(Piece { a: p.a, b: m, val: v1, err: e1 });
        heap.push(Piece { a: m, b: p.b, val: v2, err: e2 });
        if err <= abs_tol.max(rel_tol * total.abs()) {
            // re-sum to shed accumulated rounding in the running totals
            total = heap.iter().map(|q| q.val).sum();
            err = heap.iter().map(|q| q.err).sum();
        }
    }
    Ok(Quad { value: total, error: err, evals })
}

/// ∫_0^len g(δ) dδ where g has an integrable singularity at δ = 0 of order
/// below 1 − 1/k. The substitution δ = len·w^k makes the integrand bounded.
pub fn integrate_from_singular<F: FnMut(f64) -> f64>(mut g: F, len: f64, k: u32, abs_tol: f64, rel_tol: f64) -> Result<Quad> {
    if len <= 0.0 {
        return Ok(Quad { value: 0.0, error: 0.0, evals: 0 });
    }
    let kf = k as f64;
    integrate(
        |w: f64| {
            if w <= 0.0 {
                return 0.0;
            }
            let wk1 = w.powi(k as i32 - 1);
            let delta = len * wk1 * w;
            if delta <= 0.0 {
                return 0.0;
            }
            g(delta) * len * kf * wk1
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cube_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-15, 1e-15).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn brent_rejects_non_bracket() {
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 1e-12).is_err());
    }

    #[test]
    fn gk_polynomial_and_smooth() {
        let q = integrate(|x| x.powi(5), 0.0, 1.0, 1e-14, 1e-14).unwrap();
        assert!((q.value - 1.0 / 6.0).abs() < 1e-14);
        let q = integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-13, 1e-13).unwrap();
        assert!((q.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn singular_substitution_arcsine() {
        // ∫_0^1 dx/√(1−x²) = π/2, singular at x = 1; δ = 1 − x
        let q = integrate_from_singular(|d| 1.0 / (d * (2.0 - d)).sqrt(), 1.0, 2, 1e-13, 1e-13).unwrap();
        assert!((q.value - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        // order 3/4 needs k = 4
        let q = integrate_from_singular(|d| d.powf(-0.75), 1.0, 4, 1e-13, 1e-13).unwrap();
        assert!((q.value - 4.0).abs() < 1e-11);
    }

    #[test]
    fn geometric_bracket_walks_out() {
        let (lo, hi) = geometric_bracket(|x| x > 3.0, 1e-8).unwrap();
        assert!(lo <= 3.0 && hi > 3.0 && hi <= 6.0 + 1e-9);
    }
}
