//! Quadrature primitives.
//!
//! Two kinds of integrals appear throughout: smooth integrands that need an
//! adaptive rule (the closed-form potential), and integrals of piecewise-linear
//! grid functions against the weight `e^{-t}`, which have exact per-segment
//! formulas. Both live here.

use crate::num::Scalar;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Uses the standard halving recursion with Richardson correction; integrands
/// in this crate are smooth, so the 50-level depth cap is never reached in
/// practice.
pub fn adaptive_simpson<S: Scalar>(f: &dyn Fn(S) -> S, a: S, b: S, tol: S) -> S {
    if b <= a {
        return S::zero();
    }
    let two = S::lit(2.0);
    let m = (a + b) / two;
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

#[inline]
fn simpson<S: Scalar>(a: S, b: S, fa: S, fm: S, fb: S) -> S {
    (b - a) / S::lit(6.0) * (fa + S::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<S: Scalar>(
    f: &dyn Fn(S) -> S,
    a: S,
    b: S,
    fa: S,
    fm: S,
    fb: S,
    whole: S,
    tol: S,
    depth: u32,
) -> S {
    let two = S::lit(2.0);
    let m = (a + b) / two;
    let lm = (a + m) / two;
    let rm = (m + b) / two;
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= S::lit(15.0) * tol {
        return left + right + delta / S::lit(15.0);
    }
    let half = tol / two;
    simpson_rec(f, a, m, fa, flm, fm, left, half, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, half, depth - 1)
}

/// Exact `\int_a^b e^{-t} dt`.
#[inline]
pub fn exp_mass<S: Scalar>(a: S, b: S) -> S {
    if b <= a {
        S::zero()
    } else {
        (-a).exp() - (-b).exp()
    }
}

/// Exact `\int_a^b e^{-t} L(t) dt` for the linear interpolant with `L(a) = fa`,
/// `L(b) = fb`.
#[inline]
pub fn exp_weighted_segment<S: Scalar>(a: S, b: S, fa: S, fb: S) -> S {
    let (wa, wb) = exp_segment_weights(a, b);
    wa * fa + wb * fb
}

/// Weights `(wa, wb)` such that `\int_a^b e^{-t} L(t) dt = wa*L(a) + wb*L(b)`
/// for any linear `L`. Both weights are non-negative.
#[inline]
pub fn exp_segment_weights<S: Scalar>(a: S, b: S) -> (S, S) {
    if b <= a {
        return (S::zero(), S::zero());
    }
    let ea = (-a).exp();
    let eb = (-b).exp();
    let one = S::one();
    let e0 = ea - eb;
    let e1 = (a + one) * ea - (b + one) * eb;
    let d = b - a;
    ((b * e0 - e1) / d, (e1 - a * e0) / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_matches_analytic_exponential() {
        let v = adaptive_simpson(&|t: f64| (-t).exp(), 0.0, 2.0, 1e-12);
        assert!((v - (1.0 - (-2.0f64).exp())).abs() < 1e-11);
    }

    #[test]
    fn simpson_handles_empty_interval() {
        assert_eq!(adaptive_simpson(&|t: f64| t, 1.0, 1.0, 1e-10), 0.0);
    }

    #[test]
    fn exp_segment_exact_for_linear() {
        // against adaptive simpson on a linear integrand
        let (a, b, fa, fb) = (0.3, 1.1, 0.2, 0.9);
        let lin = move |t: f64| fa + (fb - fa) * (t - a) / (b - a);
        let want = adaptive_simpson(&|t: f64| (-t).exp() * lin(t), a, b, 1e-13);
        let got = exp_weighted_segment(a, b, fa, fb);
        assert!((want - got).abs() < 1e-12, "{want} vs {got}");
    }

    #[test]
    fn exp_weights_nonnegative() {
        let (wa, wb) = exp_segment_weights(0.0f64, 1e-3);
        assert!(wa > 0.0 && wb > 0.0);
    }
}
