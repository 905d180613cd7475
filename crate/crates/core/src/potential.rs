//! Potential functions for gain sharing.
//!
//! A potential `f` is a non-decreasing function of the load that splits the
//! gain of each matched edge between its endpoints: the offline side collects
//! the `f(l)` fraction, the online side `1 - f(l)`. Two closed forms are
//! implemented (the equal-probability solution and the explicit
//! unequal-probability solution), plus tabulated potentials produced by the
//! iterative solver in [`crate::solve`]. Tables extend as the constant
//! `1 - 1/e` above their last grid point.

use std::io::{BufRead, Write};

use crate::num::Scalar;
use crate::quad::{adaptive_simpson, exp_mass, exp_segment_weights, exp_weighted_segment};

/// Provenance of a tabulated potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// Closed form for equal probabilities, tabulated on `[0, 1]`.
    EqualClosed,
    /// Explicit closed form for unequal probabilities, tabulated on `[0, 1]`.
    UnequalClosed,
    /// Output of iteration `k` of the alternating f/g solver, on `[0, 2]`.
    UnequalIterated(u32),
    /// Constant potential (diagnostics and negative controls).
    Constant,
}

#[derive(Debug, thiserror::Error)]
pub enum PotentialError {
    #[error("potential values must be non-decreasing (index {0})")]
    NotMonotone(usize),
    #[error("potential values must lie in [0, 1] (index {0})")]
    OutOfRange(usize),
    #[error("table needs at least two grid points")]
    TooFewPoints,
    #[error("right boundary must equal 1 - 1/e for kind {0:?} (got {1})")]
    RightBoundary(TableKind, f64),
    #[error("cutoff values must satisfy 0 <= g(x) <= x (index {0})")]
    CutoffRange(usize),
    #[error("malformed table csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Non-decreasing potential tabulated on a uniform grid `0..=l_max`,
/// extended as the constant `values[n]` above `l_max`.
#[derive(Debug, Clone)]
pub struct PotentialTable<S: Scalar> {
    kind: TableKind,
    l_max: S,
    values: Vec<S>,
    /// `1 - values[0]`.
    gamma: S,
    /// `F(x_i) = int_0^{x_i} f`.
    cum: Vec<S>,
    /// `Phi(x_i) = int_0^{x_i} e^{-t} f(t) dt`.
    cum_exp: Vec<S>,
}

impl<S: Scalar> PotentialTable<S> {
    /// Build a table from raw grid values, validating the type invariants.
    /// Dips below monotone up to `1e-7` (LP solver noise) are clamped.
    pub fn from_values(kind: TableKind, l_max: S, values: Vec<S>) -> Result<Self, PotentialError> {
        if values.len() < 2 {
            return Err(PotentialError::TooFewPoints);
        }
        let slop = S::lit(1e-7);
        let mut vals = values;
        for i in 0..vals.len() {
            if vals[i] < -slop || vals[i] > S::one() + slop {
                return Err(PotentialError::OutOfRange(i));
            }
            vals[i] = vals[i].max(S::zero()).min(S::one());
            if i > 0 {
                if vals[i] < vals[i - 1] - slop {
                    return Err(PotentialError::NotMonotone(i));
                }
                vals[i] = vals[i].max(vals[i - 1]);
            }
        }
        if kind != TableKind::Constant {
            let last = *vals.last().unwrap();
            if (last - S::one_minus_inv_e()).abs() > S::lit(1e-6) {
                return Err(PotentialError::RightBoundary(
                    kind,
                    last.to_f64().unwrap_or(f64::NAN),
                ));
            }
        }
        let n = vals.len() - 1;
        let h = l_max / S::from_usize(n).unwrap();
        let mut cum = Vec::with_capacity(n + 1);
        let mut cum_exp = Vec::with_capacity(n + 1);
        cum.push(S::zero());
        cum_exp.push(S::zero());
        for i in 0..n {
            let (a, b) = (h * S::from_usize(i).unwrap(), h * S::from_usize(i + 1).unwrap());
            let t = cum[i] + h * (vals[i] + vals[i + 1]) / S::lit(2.0);
            cum.push(t);
            let e = cum_exp[i] + exp_weighted_segment(a, b, vals[i], vals[i + 1]);
            cum_exp.push(e);
        }
        let gamma = S::one() - vals[0];
        Ok(Self { kind, l_max, values: vals, gamma, cum, cum_exp })
    }

    /// Tabulate the equal-probabilities closed form on `[0, 1]` with `n` cells.
    pub fn equal_closed(n: usize) -> Self {
        let values = tabulate_f_equal(n);
        Self::from_values(TableKind::EqualClosed, S::one(), values)
            .expect("closed form satisfies the table invariants")
    }

    /// Tabulate the explicit unequal-probabilities closed form on `[0, 1]`.
    pub fn unequal_closed(n: usize) -> Self {
        let h = S::one() / S::from_usize(n).unwrap();
        let values = (0..=n).map(|i| f_unequal_closed(h * S::from_usize(i).unwrap())).collect();
        Self::from_values(TableKind::UnequalClosed, S::one(), values)
            .expect("closed form satisfies the table invariants")
    }

    /// Constant potential `f == c` on `[0, l_max]`.
    pub fn constant(c: S, l_max: S, n: usize) -> Self {
        Self::from_values(TableKind::Constant, l_max, vec![c; n + 1])
            .expect("constant table satisfies the invariants")
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    /// Competitive ratio certified by this potential, `1 - f(0)`.
    pub fn gamma(&self) -> S {
        self.gamma
    }

    pub fn l_max(&self) -> S {
        self.l_max
    }

    /// Number of grid cells.
    pub fn cells(&self) -> usize {
        self.values.len() - 1
    }

    pub fn grid_step(&self) -> S {
        self.l_max / S::from_usize(self.cells()).unwrap()
    }

    pub fn grid_point(&self, i: usize) -> S {
        self.grid_step() * S::from_usize(i).unwrap()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    fn locate(&self, x: S) -> (usize, S) {
        // cell index and offset within it, for 0 <= x < l_max
        let h = self.grid_step();
        let mut i = (x / h).to_usize().unwrap_or(0);
        if i >= self.cells() {
            i = self.cells() - 1;
        }
        // guard against x/h rounding up across a node
        let xi = h * S::from_usize(i).unwrap();
        if x < xi && i > 0 {
            i -= 1;
        }
        (i, x - h * S::from_usize(i).unwrap())
    }

    /// `f(x)`: piecewise linear on the grid, constant beyond `l_max`.
    pub fn eval(&self, x: S) -> S {
        if x <= S::zero() {
            return self.values[0];
        }
        if x >= self.l_max {
            return *self.values.last().unwrap();
        }
        let h = self.grid_step();
        let (i, t) = self.locate(x);
        self.values[i] + (self.values[i + 1] - self.values[i]) * t / h
    }

    /// `F(x) = int_0^x f`.
    pub fn integral(&self, x: S) -> S {
        if x <= S::zero() {
            return S::zero();
        }
        if x >= self.l_max {
            return *self.cum.last().unwrap() + (x - self.l_max) * *self.values.last().unwrap();
        }
        let h = self.grid_step();
        let (i, t) = self.locate(x);
        let slope = (self.values[i + 1] - self.values[i]) / h;
        self.cum[i] + t * self.values[i] + t * t * slope / S::lit(2.0)
    }

    /// `int_0^x (1 - f) = x - F(x)`, the online side's cumulative share.
    pub fn co_integral(&self, x: S) -> S {
        if x <= S::zero() {
            S::zero()
        } else {
            x - self.integral(x)
        }
    }

    /// `Phi(x) = int_0^x e^{-t} f(t) dt`, exact for the piecewise-linear table.
    pub fn exp_integral(&self, x: S) -> S {
        if x <= S::zero() {
            return S::zero();
        }
        if x >= self.l_max {
            return *self.cum_exp.last().unwrap()
                + *self.values.last().unwrap() * exp_mass(self.l_max, x);
        }
        let (i, _) = self.locate(x);
        let xi = self.grid_point(i);
        self.cum_exp[i] + exp_weighted_segment(xi, x, self.values[i], self.eval(x))
    }

    /// Largest load with `f(load) <= c`; `None` encodes `+infinity`
    /// (the table is eventually constant, so any `c` at or above the final
    /// value is never exceeded).
    pub fn sup_load_with_value_at_most(&self, c: S) -> Option<S> {
        let last = *self.values.last().unwrap();
        if c >= last {
            return None;
        }
        if c < self.values[0] {
            return Some(S::zero());
        }
        // last node with value <= c
        let mut lo = 0usize;
        let mut hi = self.values.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.values[mid] <= c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.grid_step();
        let (vi, vj) = (self.values[lo], self.values[lo + 1]);
        let x = if vj > vi {
            self.grid_point(lo) + h * (c - vi) / (vj - vi)
        } else {
            self.grid_point(lo)
        };
        Some(x.min(self.l_max))
    }

    /// Serialize as `x,f` CSV with 12 significant digits.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<(), PotentialError> {
        write_grid_csv(w, "x,f", self.l_max, &self.values)
    }

    /// Read a table written by [`PotentialTable::write_csv`]. The kind is not
    /// stored in the file; the caller declares it.
    pub fn read_csv<R: BufRead>(r: R, kind: TableKind) -> Result<Self, PotentialError> {
        let (l_max, values) = read_grid_csv(r, "f")?;
        Self::from_values(kind, l_max, values)
    }
}

/// Load cutoff `g` on the same uniform grid as its potential; see the
/// alternating solver in [`crate::solve`].
#[derive(Debug, Clone)]
pub struct CutoffTable<S: Scalar> {
    l_max: S,
    values: Vec<S>,
}

impl<S: Scalar> CutoffTable<S> {
    pub fn from_values(l_max: S, values: Vec<S>) -> Result<Self, PotentialError> {
        if values.len() < 2 {
            return Err(PotentialError::TooFewPoints);
        }
        let n = values.len() - 1;
        let h = l_max / S::from_usize(n).unwrap();
        let slop = S::lit(1e-9);
        for (i, &v) in values.iter().enumerate() {
            let x = h * S::from_usize(i).unwrap();
            if v < -slop || v > x + slop {
                return Err(PotentialError::CutoffRange(i));
            }
        }
        Ok(Self { l_max, values })
    }

    pub fn l_max(&self) -> S {
        self.l_max
    }

    pub fn cells(&self) -> usize {
        self.values.len() - 1
    }

    pub fn grid_step(&self) -> S {
        self.l_max / S::from_usize(self.cells()).unwrap()
    }

    pub fn grid_point(&self, i: usize) -> S {
        self.grid_step() * S::from_usize(i).unwrap()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<(), PotentialError> {
        write_grid_csv(w, "x,g", self.l_max, &self.values)
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, PotentialError> {
        let (l_max, values) = read_grid_csv(r, "g")?;
        Self::from_values(l_max, values)
    }
}

fn write_grid_csv<S: Scalar, W: Write>(
    w: &mut W,
    header: &str,
    l_max: S,
    values: &[S],
) -> Result<(), PotentialError> {
    writeln!(w, "{header}")?;
    let n = values.len() - 1;
    for (i, v) in values.iter().enumerate() {
        let x = l_max.to_f64().unwrap() * i as f64 / n as f64;
        writeln!(w, "{:.11e},{:.11e}", x, v.to_f64().unwrap())?;
    }
    Ok(())
}

fn read_grid_csv<S: Scalar, R: BufRead>(r: R, col: &str) -> Result<(S, Vec<S>), PotentialError> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| PotentialError::Csv("empty file".into()))??;
    if header.trim() != format!("x,{col}") {
        return Err(PotentialError::Csv(format!("expected header 'x,{col}', got '{header}'")));
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, ',');
        let x = parts
            .next()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| PotentialError::Csv(format!("line {}: bad x", lineno + 2)))?;
        let v = parts
            .next()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| PotentialError::Csv(format!("line {}: bad {col}", lineno + 2)))?;
        xs.push(x);
        values.push(S::lit(v));
    }
    if values.len() < 2 {
        return Err(PotentialError::Csv("need at least two rows".into()));
    }
    Ok((S::lit(*xs.last().unwrap()), values))
}

/// `g(x) = 1 / (2 - x - e^{-x})`, the kernel of the equal-probabilities
/// closed form. On `[0, 1]` the denominator stays in `[1 - 1/e, 1]`.
fn equal_kernel<S: Scalar>(x: S) -> S {
    let den = S::lit(2.0) - x - (-x).exp();
    debug_assert!(
        den > S::lit(0.3),
        "kernel denominator left its certified range"
    );
    den.recip()
}

/// Equal-probabilities potential. For `x > 1` the value is `1 - 1/e`; on
/// `[0, 1]` it is `(1 - 1/e + int_x^1 (1 - e^{-y}) g(y) h(y) dy) / h(x)` with
/// `h(x) = exp(int_x^1 g)`, evaluated by adaptive quadrature.
pub fn f_equal<S: Scalar>(x: S) -> S {
    if x >= S::one() {
        return S::one_minus_inv_e();
    }
    let x = x.max(S::zero());
    let tol = S::lit(1e-12).max(S::epsilon() * S::lit(100.0));
    let h_at = |y: S| adaptive_simpson(&equal_kernel::<S>, y, S::one(), tol).exp();
    let outer = adaptive_simpson(
        &|y: S| (S::one() - (-y).exp()) * equal_kernel(y) * h_at(y),
        x,
        S::one(),
        tol,
    );
    (S::one_minus_inv_e() + outer) / h_at(x)
}

/// `1 - f_equal(0)`, approximately `0.576102`.
pub fn gamma_equal<S: Scalar>() -> S {
    S::one() - f_equal(S::zero())
}

/// Explicit unequal-probabilities potential:
/// `1 - e^{-x}/2 - e^{x-2}/2` on `[0, 1]`, `1 - 1/e` above.
pub fn f_unequal_closed<S: Scalar>(x: S) -> S {
    if x >= S::one() {
        return S::one_minus_inv_e();
    }
    let x = x.max(S::zero());
    let half = S::lit(0.5);
    S::one() - half * (-x).exp() - half * (x - S::lit(2.0)).exp()
}

/// `1 - f_unequal_closed(0) = (1 + e^{-2}) / 2`.
pub fn gamma_unequal_closed<S: Scalar>() -> S {
    (S::one() + S::lit(-2.0).exp()) / S::lit(2.0)
}

/// Tabulate `f_equal` on `[0, 1]` by marching the two defining integrals from
/// the right boundary with per-cell Gauss-Legendre quadrature. Much faster
/// than pointwise adaptive evaluation, and an independent route the tests
/// compare against [`f_equal`].
fn tabulate_f_equal<S: Scalar>(n: usize) -> Vec<S> {
    // 5-point Gauss-Legendre on [-1, 1]
    const GL_X: [f64; 5] = [
        -0.906_179_845_938_664,
        -0.538_469_310_105_683,
        0.0,
        0.538_469_310_105_683,
        0.906_179_845_938_664,
    ];
    const GL_W: [f64; 5] = [
        0.236_926_885_056_189,
        0.478_628_670_499_366,
        0.568_888_888_888_889,
        0.478_628_670_499_366,
        0.236_926_885_056_189,
    ];
    let gauss = |f: &dyn Fn(S) -> S, a: S, b: S| -> S {
        let c = (a + b) / S::lit(2.0);
        let r = (b - a) / S::lit(2.0);
        let mut acc = S::zero();
        for k in 0..5 {
            acc += S::lit(GL_W[k]) * f(c + r * S::lit(GL_X[k]));
        }
        acc * r
    };

    let h = S::one() / S::from_usize(n).unwrap();
    let mut values = vec![S::zero(); n + 1];
    values[n] = S::one_minus_inv_e();
    let mut int_g = S::zero(); // int_{x_i}^1 g
    let mut int_outer = S::zero(); // int_{x_i}^1 (1 - e^{-y}) g(y) h(y) dy
    for i in (0..n).rev() {
        let a = h * S::from_usize(i).unwrap();
        let b = h * S::from_usize(i + 1).unwrap();
        let int_g_from_b = int_g;
        let outer_cell = gauss(
            &|y: S| {
                let tail = gauss(&equal_kernel::<S>, y, b);
                (S::one() - (-y).exp()) * equal_kernel(y) * (int_g_from_b + tail).exp()
            },
            a,
            b,
        );
        int_outer += outer_cell;
        int_g += gauss(&equal_kernel::<S>, a, b);
        values[i] = (S::one_minus_inv_e() + int_outer) / int_g.exp();
    }
    values
}
