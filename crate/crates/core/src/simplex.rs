//! Nelder-Mead downhill simplex minimization.
//!
//! Coefficients, the initial simplex and the stopping rule follow the common
//! `fminsearch` conventions: reflection 1, expansion 2, contraction 1/2,
//! shrink 1/2; the initial simplex perturbs each coordinate by 5% (0.00025 for
//! zero coordinates); iteration stops once both the vertex spread and the
//! function-value spread fall below their tolerances.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMead<T> {
    pub max_iterations: usize,
    /// Stop when every vertex lies within this distance (per coordinate) of the best.
    pub x_tolerance: T,
    /// ... and every vertex value lies within this distance of the best value.
    pub f_tolerance: T,
    /// Relative perturbation used to build the initial simplex.
    pub initial_step: T,
}

impl<T: Scalar> Default for NelderMead<T> {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            x_tolerance: T::lit(1e-4),
            f_tolerance: T::lit(1e-4),
            initial_step: T::lit(0.05),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIterations,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum<T, const N: usize> {
    pub point: [T; N],
    pub value: T,
    pub iterations: usize,
    pub evaluations: usize,
    pub termination: Termination,
}

impl<T: Scalar> NelderMead<T> {
    pub fn with_tolerances(mut self, x_tolerance: T, f_tolerance: T) -> Self {
        self.x_tolerance = x_tolerance;
        self.f_tolerance = f_tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    /// Minimizes `f` starting from `x0`. `f` may return `+inf` to reject a point.
    pub fn minimize<const N: usize, F>(&self, f: F, x0: [T; N]) -> Minimum<T, N>
    where
        F: FnMut(&[T; N]) -> T,
    {
        let steps = x0.map(|x| {
            if x != T::zero() {
                x * self.initial_step
            } else {
                T::lit(0.00025)
            }
        });
        self.minimize_with_steps(f, x0, steps)
    }

    /// Like [`minimize`](Self::minimize) with explicit, signed offsets for the
    /// initial simplex vertices.
    pub fn minimize_with_steps<const N: usize, F>(
        &self,
        mut f: F,
        x0: [T; N],
        steps: [T; N],
    ) -> Minimum<T, N>
    where
        F: FnMut(&[T; N]) -> T,
    {
        let (alpha, gamma, beta, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
        let mut evaluations = 0usize;
        let mut eval = |x: &[T; N]| {
            evaluations += 1;
            let v = f(x);
            if v.is_nan() {
                T::infinity()
            } else {
                v
            }
        };

        let mut simplex: Vec<([T; N], T)> = Vec::with_capacity(N + 1);
        simplex.push((x0, eval(&x0)));
        for i in 0..N {
            let mut v = x0;
            v[i] = v[i] + steps[i];
            let fv = eval(&v);
            simplex.push((v, fv));
        }

        let combine = |a: &[T; N], b: &[T; N], t: T| -> [T; N] {
            // a + t * (b - a)
            let mut out = *a;
            for k in 0..N {
                out[k] = a[k] + t * (b[k] - a[k]);
            }
            out
        };

        let mut iterations = 0;
        let termination = loop {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            let (best, f_best) = simplex[0];
            let x_spread = simplex[1..]
                .iter()
                .flat_map(|(v, _)| v.iter().zip(best.iter()).map(|(a, b)| (*a - *b).abs()))
                .fold(T::zero(), T::max);
            let f_spread = simplex[1..]
                .iter()
                .map(|(_, fv)| (*fv - f_best).abs())
                .fold(T::zero(), T::max);
            if x_spread <= self.x_tolerance && f_spread <= self.f_tolerance {
                break Termination::Converged;
            }
            if iterations >= self.max_iterations {
                break Termination::MaxIterations;
            }
            iterations += 1;

            let (worst, f_worst) = simplex[N];
            let f_second = simplex[N - 1].1;
            let mut centroid = [T::zero(); N];
            for (v, _) in &simplex[..N] {
                for k in 0..N {
                    centroid[k] = centroid[k] + v[k];
                }
            }
            let n = T::lit(N as f64);
            for c in &mut centroid {
                *c = *c / n;
            }

            let reflected = combine(&centroid, &worst, -alpha);
            let f_reflected = eval(&reflected);
            if f_reflected < f_best {
                let expanded = combine(&centroid, &worst, -alpha * gamma);
                let f_expanded = eval(&expanded);
                simplex[N] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
                continue;
            }
            if f_reflected < f_second {
                simplex[N] = (reflected, f_reflected);
                continue;
            }
            if f_reflected < f_worst {
                let outside = combine(&centroid, &reflected, beta);
                let f_outside = eval(&outside);
                if f_outside <= f_reflected {
                    simplex[N] = (outside, f_outside);
                    continue;
                }
            } else {
                let inside = combine(&centroid, &worst, beta);
                let f_inside = eval(&inside);
                if f_inside < f_worst {
                    simplex[N] = (inside, f_inside);
                    continue;
                }
            }
            for vertex in simplex.iter_mut().skip(1) {
                let shrunk = combine(&best, &vertex.0, sigma);
                *vertex = (shrunk, eval(&shrunk));
            }
        };

        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        Minimum {
            point: simplex[0].0,
            value: simplex[0].1,
            iterations,
            evaluations,
            termination,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let nm = NelderMead::<f64>::default().with_tolerances(1e-10, 1e-14);
        let m = nm.minimize(
            |x| (x[0] - 3.0).powi(2) + 10.0 * (x[1] + 1.5).powi(2),
            [0.0, 0.0],
        );
        assert_eq!(m.termination, Termination::Converged);
        assert!((m.point[0] - 3.0).abs() < 1e-8);
        assert!((m.point[1] + 1.5).abs() < 1e-8);
    }

    #[test]
    fn rosenbrock() {
        let nm = NelderMead::<f64>::default()
            .with_tolerances(1e-10, 1e-14)
            .with_max_iterations(2000);
        let m = nm.minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            [-1.2, 1.0],
        );
        assert_eq!(m.termination, Termination::Converged);
        assert!((m.point[0] - 1.0).abs() < 1e-6, "{:?}", m.point);
        assert!((m.point[1] - 1.0).abs() < 1e-6, "{:?}", m.point);
    }

    #[test]
    fn infinite_penalty_region_is_avoided() {
        let nm = NelderMead::<f64>::default().with_tolerances(1e-9, 1e-12);
        let m = nm.minimize(
            |x| {
                if x[0] > x[1] {
                    f64::INFINITY
                } else {
                    (x[0] - 1.0).powi(2) + (x[1] - 2.0).powi(2)
                }
            },
            [0.5, 3.0],
        );
        assert!(m.point[0] <= m.point[1]);
        assert!(m.value < 1e-12);
    }

    #[test]
    fn iteration_budget_is_respected() {
        let nm = NelderMead::<f64>::default()
            .with_tolerances(0.0, 0.0)
            .with_max_iterations(7);
        let m = nm.minimize(|x| x[0].powi(2), [5.0]);
        assert_eq!(m.iterations, 7);
        assert_eq!(m.termination, Termination::MaxIterations);
    }

    #[test]
    fn single_precision() {
        let nm = NelderMead::<f32>::default().with_tolerances(1e-5, 1e-9);
        let m = nm.minimize(|x| (x[0] - 0.25).powi(2) + (x[1] - 4.0).powi(2), [1.0, 1.0]);
        assert!((m.point[0] - 0.25).abs() < 1e-3);
        assert!((m.point[1] - 4.0).abs() < 1e-3);
    }
}
