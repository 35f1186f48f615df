//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate falls below `max(abs_tol, rel_tol·|result|)`. Per-interval error
//! estimates use the QUADPACK `qk21` heuristic.

#![allow(clippy::excessive_precision)]

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances and truncation for the improper integrals in this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Infinite ranges are cut at ±`tail_sigmas` times the integrand's
    /// Gaussian scale.
    pub tail_sigmas: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 1 << 14,
            tail_sigmas: 12.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter {
                field: "abs_tol",
                value: self.abs_tol,
                constraint: "abs_tol > 0",
            });
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter {
                field: "rel_tol",
                value: self.rel_tol,
                constraint: "rel_tol > 0",
            });
        }
        if !(self.tail_sigmas >= 8.0) {
            return Err(Error::InvalidParameter {
                field: "tail_sigmas",
                value: self.tail_sigmas,
                constraint: "tail_sigmas >= 8",
            });
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter {
                field: "max_subdivisions",
                value: 0.0,
                constraint: "max_subdivisions >= 1",
            });
        }
        Ok(())
    }

    /// The truncated stand-in for (−∞, ∞) around a Gaussian of the given width.
    pub fn tail_range(&self, center: f64, scale: f64) -> (f64, f64) {
        let half = self.tail_sigmas * scale;
        (center - half, center + half)
    }

    pub fn with_tolerances(self, abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..self
        }
    }
}

// Kronrod abscissae on [-1, 1] (non-negative half, descending). Odd indices
// are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208037094850,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Scalar types the integrator can accumulate.
pub trait Integrand:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    const ZERO: Self;
    fn magnitude(self) -> f64;
}

impl Integrand for f64 {
    const ZERO: Self = 0.0;
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    /// Rounding floor 50ε∫|f|; bisection cannot push `error` below it.
    floor: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T> Eq for Segment<T> {}

impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Segment<T> {
    // Largest error first; ties broken by position so the refinement order
    // is fully deterministic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod21<T: Integrand, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Segment<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut res_k = f_center * WGK[10];
    let mut res_g = T::ZERO;
    let mut res_abs = f_center.magnitude() * WGK[10];
    let mut values = [(T::ZERO, T::ZERO); 10];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1 + f2;
        res_k = res_k + pair * WGK[j];
        if j % 2 == 1 {
            res_g = res_g + pair * WG[j / 2];
        }
        res_abs += WGK[j] * (f1.magnitude() + f2.magnitude());
        *slot = (f1, f2);
    }

    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (f_center - mean).magnitude();
    for (j, (f1, f2)) in values.iter().enumerate() {
        res_asc += WGK[j] * ((*f1 - mean).magnitude() + (*f2 - mean).magnitude());
    }

    let width = half.abs();
    res_abs *= width;
    res_asc *= width;
    let mut error = ((res_k - res_g) * half).magnitude();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }

    Segment {
        a,
        b,
        value: res_k * half,
        error,
        floor,
    }
}

/// Integrates `f` over the union of consecutive intervals between
/// `breakpoints`, starting the adaptive refinement from that partition.
///
/// Useful for oscillatory integrands where a single starting interval would
/// alias. `max_subdivisions` bounds the bisections on top of the partition.
pub fn integrate_partitioned<T, F>(f: F, breakpoints: &[f64], spec: &QuadratureSpec) -> Result<T>
where
    T: Integrand,
    F: Fn(f64) -> T,
{
    spec.validate()?;
    if breakpoints.len() < 2 {
        return Err(Error::InvalidGrid(
            "quadrature partition needs at least two breakpoints".into(),
        ));
    }
    for w in breakpoints.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::InvalidBracket { lo: w[0], hi: w[1] });
        }
    }

    let mut heap: BinaryHeap<Segment<T>> = breakpoints
        .windows(2)
        .map(|w| kronrod21(&f, w[0], w[1]))
        .collect();
    let mut result = heap.iter().fold(T::ZERO, |acc, s| acc + s.value);
    let mut error: f64 = heap.iter().map(|s| s.error).sum();

    let mut floor: f64 = heap.iter().map(|s| s.floor).sum();

    let mut splits = 0;
    loop {
        // A tolerance below the summed rounding floor is unreachable, so the
        // floor itself counts as converged.
        let target = spec
            .abs_tol
            .max(spec.rel_tol * result.magnitude())
            .max(floor * (1.0 + 1e-9));
        if error <= target {
            // Re-sum from scratch so incremental drift cannot fake convergence.
            let exact_error: f64 = heap.iter().map(|s| s.error).sum();
            if exact_error <= target {
                break;
            }
            error = exact_error;
        }
        if splits >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                subdivisions: splits,
                error_estimate: error,
                target,
            });
        }
        let worst = heap.pop().expect("partition is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval collapsed to adjacent floats; nothing left to refine.
            return Err(Error::NonConvergence {
                subdivisions: splits,
                error_estimate: error,
                target,
            });
        }
        let left = kronrod21(&f, worst.a, mid);
        let right = kronrod21(&f, mid, worst.b);
        result = result - worst.value + left.value + right.value;
        error += left.error + right.error - worst.error;
        floor += left.floor + right.floor - worst.floor;
        heap.push(left);
        heap.push(right);
        splits += 1;
    }

    // Sum in position order for a scheduling-independent result.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(segments.iter().fold(T::ZERO, |acc, s| acc + s.value))
}

/// Adaptive estimate of ∫ₐᵇ f(t) dt for complex-valued `f`.
pub fn integrate<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    integrate_partitioned(f, &[a, b], spec)
}

/// Real-valued counterpart of [`integrate`].
pub fn integrate_real<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_partitioned(f, &[a, b], spec)
}

/// [`integrate_real`] for integrands that can themselves fail, such as an
/// inner quadrature. The first inner error aborts with that error.
pub fn try_integrate_real<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let value = integrate_real(
        |t| match f(t) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        spec,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => value,
    }
}
