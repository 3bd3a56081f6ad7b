//! Adaptive composite Gauss-Legendre quadrature.
//!
//! Intervals are bisected globally, worst error first, until the summed error
//! estimate drops below the requested tolerance. Each interval's error is the
//! difference between the 15-point rule on the whole interval and on its halves.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 15;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_LEVELS: u32 = 40;

/// Abscissae and weights of the Gauss-Legendre rule on `[-1, 1]`.
fn gauss_legendre() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER as f64;
        let mut rule = [(0.0, 0.0); ORDER];
        for (i, slot) in rule.iter_mut().enumerate() {
            // Tricomi initial guess, then Newton on P_n
            let k = (i + 1) as f64;
            let mut x = (PI * (k - 0.25) / (n + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(ORDER, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-17 {
                    break;
                }
            }
            let (_, d) = legendre(ORDER, x);
            if d.is_finite() {
                dp = d;
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * gauss_legendre()
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    level: u32,
}

impl Segment {
    fn evaluate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, level: u32) -> Segment {
        let mid = 0.5 * (a + b);
        let value = gauss15(f, a, mid) + gauss15(f, mid, b);
        Segment {
            a,
            b,
            value,
            error: (value - whole).abs(),
            level,
        }
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Result of a converged integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: usize,
}

/// Integration settings: relative tolerance and maximum bisection depth.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_levels: u32,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: 1e-300,
            max_levels: DEFAULT_MAX_LEVELS,
        }
    }
}

impl Quadrature {
    /// Integrates `f` over `[a, b]`, splitting first at each of `breakpoints` inside the range.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64, breakpoints: &[f64]) -> Result<Integral> {
        if a == b {
            return Ok(Integral {
                value: 0.0,
                error_bound: 0.0,
                evaluations: 0,
            });
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

        let mut cuts: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&x| x > lo && x < hi)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut edges = Vec::with_capacity(cuts.len() + 2);
        edges.push(lo);
        edges.extend(cuts);
        edges.push(hi);

        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        for w in edges.windows(2) {
            let whole = gauss15(&f, w[0], w[1]);
            heap.push(Segment::evaluate(&f, w[0], w[1], whole, 0));
            evaluations += 3 * ORDER;
        }

        loop {
            let total: f64 = heap.iter().map(|s| s.value).sum();
            let error: f64 = heap.iter().map(|s| s.error).sum();
            if !total.is_finite() || !error.is_finite() {
                return Err(Error::Quadrature {
                    estimate: sign * total,
                    error_bound: error,
                });
            }
            if error <= (self.rel_tol * total.abs()).max(self.abs_tol) {
                return Ok(Integral {
                    value: sign * total,
                    error_bound: error,
                    evaluations,
                });
            }
            let worst = heap.pop().expect("at least one segment");
            if worst.level >= self.max_levels {
                return Err(Error::Quadrature {
                    estimate: sign * total,
                    error_bound: error,
                });
            }
            let mid = 0.5 * (worst.a + worst.b);
            let left_whole = gauss15(&f, worst.a, mid);
            let right_whole = gauss15(&f, mid, worst.b);
            heap.push(Segment::evaluate(&f, worst.a, mid, left_whole, worst.level + 1));
            heap.push(Segment::evaluate(&f, mid, worst.b, right_whole, worst.level + 1));
            evaluations += 6 * ORDER;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_symmetric_and_sums_to_two() {
        let rule = gauss_legendre();
        let weights: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((weights - 2.0).abs() < 1e-14);
        for i in 0..ORDER {
            let (x, w) = rule[i];
            let (xm, wm) = rule[ORDER - 1 - i];
            assert!((x + xm).abs() < 1e-15);
            assert!((w - wm).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_for_degree_29_polynomials() {
        let q = Quadrature::default();
        let r = gauss15(&|x: f64| x.powi(28) + x.powi(29), 0.0, 1.0);
        assert!((r - (1.0 / 29.0 + 1.0 / 30.0)).abs() < 1e-15);
        let r = q.integrate(|x: f64| 3.0 * x * x, -1.0, 2.0, &[]).unwrap();
        assert!((r.value - 9.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = Quadrature::default();
        let r = q.integrate(f64::exp, 1.0, 0.0, &[]).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn handles_discontinuity_without_breakpoint() {
        let q = Quadrature::default();
        let step = |x: f64| if x < 0.3 { 1.0 } else { 2.0 };
        let r = q.integrate(step, 0.0, 1.0, &[]).unwrap();
        assert!((r.value - 1.7).abs() < 1e-9, "{r:?}");
        let r = q.integrate(step, 0.0, 1.0, &[0.3]).unwrap();
        assert!((r.value - 1.7).abs() < 1e-14);
        assert_eq!(r.evaluations, 6 * ORDER);
    }

    #[test]
    fn square_root_endpoint_singularity_converges() {
        // without the substitution the singular endpoint limits the attainable accuracy
        let q = Quadrature {
            rel_tol: 1e-7,
            ..Quadrature::default()
        };
        let r = q.integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &[]).unwrap();
        assert!((r.value - 2.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn reports_failure_with_estimate() {
        let q = Quadrature {
            max_levels: 3,
            ..Quadrature::default()
        };
        let err = q.integrate(|x: f64| 1.0 / x, 0.0, 1.0, &[]).unwrap_err();
        match err {
            Error::Quadrature { estimate, error_bound } => {
                assert!(estimate > 0.0 && error_bound > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
