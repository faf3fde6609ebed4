//! Entropic updating of a prior under expectation constraints.
//!
//! The posterior maximizing entropy relative to the prior `q` subject to
//! `<f_k> = kappa_k` has the Gibbs form
//!
//! ```text
//! p(x) = q(x) exp(-sum_k beta_k f_k(x)) / Z(beta)
//! ```
//!
//! and `beta` minimizes the convex dual `ln Z(beta) + beta . kappa`, whose
//! gradient is `kappa - <f>_p` and whose Hessian is the covariance of `f`
//! under `p`. We run Newton's method from `beta = 0` (the prior itself) with
//! step halving on the dual objective.

use nalgebra::{DMatrix, DVector};

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::info::block_information;
use crate::partition::Partition;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;
const MAX_HALVINGS: usize = 200;

/// `<f> = target` for a function tabulated row-major over the joint support.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentConstraint {
    values: Vec<f64>,
    target: f64,
}

impl MomentConstraint {
    pub fn new(values: Vec<f64>, target: f64) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::OutOfRange(format!(
                "constraint value at cell {index} is not finite"
            )));
        }
        if !target.is_finite() {
            return Err(Error::OutOfRange("constraint target is not finite".into()));
        }
        Ok(MomentConstraint { values, target })
    }

    /// Tabulates `f` over the per-axis label positions of every cell.
    pub fn from_fn(
        dist: &JointDistribution,
        target: f64,
        f: impl Fn(&[usize]) -> f64,
    ) -> Result<Self> {
        let cards = dist.cards();
        let mut coords = vec![0; cards.len()];
        let values = (0..dist.cell_count())
            .map(|cell| {
                crate::tensor::unravel(cell, &cards, &mut coords);
                f(&coords)
            })
            .collect();
        MomentConstraint::new(values, target)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    /// `<f>` under `dist`.
    pub fn expectation(&self, dist: &JointDistribution) -> f64 {
        self.values
            .iter()
            .zip(dist.probs())
            .map(|(f, p)| f * p)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxEntResult {
    pub posterior: JointDistribution,
    /// Lagrange multipliers, sign as in `p ~ q exp(-beta f)`.
    pub multipliers: Vec<f64>,
    /// `<f_k>_posterior - kappa_k`.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl MaxEntResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Turns a non-converged result into [`Error::NotConverged`].
    pub fn into_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                iterations: self.iterations,
                residual: self.max_residual(),
            })
        }
    }
}

/// Updates `prior` to the minimum-divergence distribution meeting every constraint.
///
/// An empty constraint list returns the prior unchanged. Hitting the
/// iteration cap is not an error: the result comes back with
/// `converged == false` (see [`MaxEntResult::into_converged`]).
pub fn maxent_update(
    prior: &JointDistribution,
    constraints: &[MomentConstraint],
    options: SolverOptions,
) -> Result<MaxEntResult> {
    if constraints.is_empty() {
        return Ok(MaxEntResult {
            posterior: prior.clone(),
            multipliers: Vec::new(),
            residuals: Vec::new(),
            iterations: 0,
            converged: true,
        });
    }
    let q = prior.probs();
    for c in constraints {
        if c.values.len() != q.len() {
            return Err(Error::ShapeMismatch {
                expected: q.len(),
                found: c.values.len(),
            });
        }
    }
    check_feasible(q, constraints, options.tolerance)?;

    let support: Vec<usize> = (0..q.len()).filter(|&i| q[i] > 0.0).collect();
    let log_q: Vec<f64> = support.iter().map(|&i| q[i].ln()).collect();
    let table: Vec<Vec<f64>> = constraints
        .iter()
        .map(|c| support.iter().map(|&i| c.values[i]).collect())
        .collect();
    let targets: Vec<f64> = constraints.iter().map(|c| c.target).collect();
    let dual = Dual {
        log_q: &log_q,
        table: &table,
        targets: &targets,
    };

    let k = constraints.len();
    let mut beta = vec![0.0; k];
    let mut state = dual.evaluate(&beta);
    let mut iterations = 0;
    let mut converged = state.max_residual() <= options.tolerance;
    while !converged && iterations < options.max_iterations {
        iterations += 1;
        let step = dual.newton_direction(&state);
        // directional derivative of the dual along the step: g . step with g = -residual
        let slope: f64 = -state
            .residuals
            .iter()
            .zip(&step)
            .map(|(r, s)| r * s)
            .sum::<f64>();
        // near-singular covariance gives huge steps, so halving may need many rounds
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = beta.iter().zip(&step).map(|(b, s)| b + t * s).collect();
            let candidate = dual.evaluate(&trial);
            let armijo = state.objective + 1e-4 * t * slope;
            let slack = 1e-14 * state.objective.abs().max(1.0);
            if candidate.objective <= armijo + slack {
                accepted = Some((trial, candidate));
                break;
            }
            t *= 0.5;
        }
        let Some(next) = accepted else {
            break;
        };
        beta = next.0;
        state = next.1;
        converged = state.max_residual() <= options.tolerance;
    }

    let mut probs = vec![0.0; q.len()];
    for (&cell, &p) in support.iter().zip(&state.probs) {
        probs[cell] = p;
    }
    Ok(MaxEntResult {
        posterior: JointDistribution::from_parts(prior.axes().to_vec(), probs),
        multipliers: beta,
        residuals: state.residuals,
        iterations,
        converged,
    })
}

fn check_feasible(q: &[f64], constraints: &[MomentConstraint], tolerance: f64) -> Result<()> {
    for (index, c) in constraints.iter().enumerate() {
        let (min, max) = q
            .iter()
            .zip(&c.values)
            .filter(|(&p, _)| p > 0.0)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, &f)| {
                (lo.min(f), hi.max(f))
            });
        let target = c.target;
        let feasible = if min == max {
            (target - min).abs() <= tolerance
        } else {
            min < target && target < max
        };
        if !feasible {
            return Err(Error::InfeasibleConstraint {
                index,
                target,
                min,
                max,
            });
        }
    }
    Ok(())
}

struct Dual<'a> {
    log_q: &'a [f64],
    /// constraint k, support cell i
    table: &'a [Vec<f64>],
    targets: &'a [f64],
}

struct DualState {
    objective: f64,
    probs: Vec<f64>,
    means: Vec<f64>,
    residuals: Vec<f64>,
}

impl DualState {
    fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

impl Dual<'_> {
    fn evaluate(&self, beta: &[f64]) -> DualState {
        let log_w: Vec<f64> = (0..self.log_q.len())
            .map(|i| {
                self.log_q[i]
                    - beta
                        .iter()
                        .zip(self.table)
                        .map(|(b, f)| b * f[i])
                        .sum::<f64>()
            })
            .collect();
        let shift = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = log_w.iter().map(|w| (w - shift).exp()).sum();
        let log_z = shift + z.ln();
        let probs: Vec<f64> = log_w.iter().map(|w| (w - log_z).exp()).collect();
        let means: Vec<f64> = self
            .table
            .iter()
            .map(|f| f.iter().zip(&probs).map(|(v, p)| v * p).sum())
            .collect();
        let residuals = means.iter().zip(self.targets).map(|(m, t)| m - t).collect();
        let objective = log_z
            + beta
                .iter()
                .zip(self.targets)
                .map(|(b, t)| b * t)
                .sum::<f64>();
        DualState {
            objective,
            probs,
            means,
            residuals,
        }
    }

    /// Solves `Cov(f) step = residual`, using a pseudo-inverse when the
    /// constraints are linearly dependent on the support.
    fn newton_direction(&self, state: &DualState) -> Vec<f64> {
        let k = self.table.len();
        let hessian = DMatrix::from_fn(k, k, |a, b| {
            self.table[a]
                .iter()
                .zip(&self.table[b])
                .zip(&state.probs)
                .map(|((fa, fb), p)| p * (fa - state.means[a]) * (fb - state.means[b]))
                .sum()
        });
        let rhs = DVector::from_column_slice(&state.residuals);
        let solved = hessian
            .clone()
            .cholesky()
            .map(|c| c.solve(&rhs))
            .or_else(|| {
                let scale = hessian.abs().max().max(f64::MIN_POSITIVE);
                hessian.svd(true, true).solve(&rhs, scale * 1e-13).ok()
            })
            .unwrap_or_else(|| rhs.clone());
        solved.iter().copied().collect()
    }
}

/// Bayes' rule as the special case of updating on an observed label: the
/// conditional distribution over the remaining axes.
pub fn bayes_update(
    dist: &JointDistribution,
    observed_axis: usize,
    observed_label: &str,
) -> Result<JointDistribution> {
    dist.condition(observed_axis, observed_label)
}

/// `NPI(after) - NPI(before)` under the same partition: positive when an
/// update created correlations between the blocks, negative when it destroyed them.
pub fn correlation_delta(
    before: &JointDistribution,
    after: &JointDistribution,
    partition: &Partition,
) -> Result<f64> {
    if !before.same_axes(after) {
        return Err(Error::AxisMismatch);
    }
    partition.check_for(before)?;
    Ok(
        block_information(after, partition.blocks())
            - block_information(before, partition.blocks()),
    )
}
