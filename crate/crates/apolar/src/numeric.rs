//! Floating-point Waring decomposition by Levenberg-Marquardt with random
//! restarts.
//!
//! The solver minimizes the squared Bombieri-norm residual of
//! `sum_i alpha_i H_i^m - F` over the point coordinates and coefficients.
//! The Bombieri weight of the monomial `x^gamma` is `gamma!/m!`, which makes
//! the objective invariant under orthogonal changes of variables. Floats
//! never mix silently with the exact side: forms are converted explicitly
//! via [`form_to_dense`].
//!
//! Each restart draws its own sub-seed (`seed ^ restart`), so runs are
//! deterministic for a fixed seed and the merge order does not depend on
//! scheduling: solutions are sorted by `(residual, restart)` and
//! deduplicated up to entry permutation and the scale ambiguity
//! `(H, alpha) ~ (cH, alpha/c^m)`.

use nalgebra::{DMatrix, DVector};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::form::{monomials_of_degree, multinomial, Form, MultiIndex};

/// Configuration for [`waring_decompose_numeric`]. `tol` bounds the squared
/// Bombieri residual accepted as a solution.
#[derive(Clone, Debug)]
pub struct DecomposeConfig {
    pub restarts: u32,
    pub max_iter: u32,
    pub tol: f64,
    pub seed: u64,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig {
            restarts: 200,
            max_iter: 200,
            tol: 1e-9,
            seed: 0,
        }
    }
}

/// One float power-sum summand.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericEntry {
    pub coords: Vec<f64>,
    pub alpha: f64,
}

/// A float power-sum representation together with its Bombieri residual.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericRepresentation {
    pub m: u32,
    pub nvars: usize,
    pub entries: Vec<NumericEntry>,
    pub residual: f64,
}

/// Status of a decomposition run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecomposeStatus {
    Solved,
    NoConvergence,
}

/// All distinct local solutions found, sorted by `(residual, restart)`.
#[derive(Clone, Debug)]
pub struct DecomposeResult {
    pub solutions: Vec<NumericRepresentation>,
    pub status: DecomposeStatus,
}

/// Explicit conversion of an exact form to dense float coefficients in the
/// graded-lex descending monomial basis.
pub fn form_to_dense(f: &Form) -> (Vec<MultiIndex>, Vec<f64>) {
    let basis = monomials_of_degree(f.nvars(), f.degree());
    let coeffs = basis
        .iter()
        .map(|idx| f.coefficient(idx).to_f64().unwrap_or(f64::NAN))
        .collect();
    (basis, coeffs)
}

fn bombieri_weights(basis: &[MultiIndex], m: u32) -> Vec<f64> {
    basis
        .iter()
        .map(|gamma| {
            // gamma!/m! = 1/multinomial(m, gamma)
            1.0 / multinomial(m, gamma).to_f64().unwrap()
        })
        .collect()
}

/// Bombieri norm of the difference between a representation's expansion and
/// the target coefficients.
fn residual_norm(model: &ModelGeometry, params: &[f64], target: &[f64]) -> f64 {
    model.residual(params, target).norm()
}

struct ModelGeometry {
    nvars: usize,
    n: usize,
    m: u32,
    basis: Vec<MultiIndex>,
    multinomials: Vec<f64>,
    sqrt_weights: Vec<f64>,
}

impl ModelGeometry {
    fn new(nvars: usize, n: usize, m: u32) -> Self {
        let basis = monomials_of_degree(nvars, m);
        let multinomials = basis
            .iter()
            .map(|gamma| multinomial(m, gamma).to_f64().unwrap())
            .collect();
        let sqrt_weights = bombieri_weights(&basis, m).iter().map(|w| w.sqrt()).collect();
        ModelGeometry {
            nvars,
            n,
            m,
            basis,
            multinomials,
            sqrt_weights,
        }
    }

    fn param_count(&self) -> usize {
        self.n * (self.nvars + 1)
    }

    fn coords<'a>(&self, params: &'a [f64], i: usize) -> &'a [f64] {
        &params[i * self.nvars..(i + 1) * self.nvars]
    }

    fn alpha(&self, params: &[f64], i: usize) -> f64 {
        params[self.n * self.nvars + i]
    }

    /// Powers `h_j^e` for `e = 0..=m`, per coordinate of one entry.
    fn power_table(&self, coords: &[f64]) -> Vec<Vec<f64>> {
        coords
            .iter()
            .map(|&h| {
                let mut row = Vec::with_capacity(self.m as usize + 1);
                let mut acc = 1.0;
                row.push(1.0);
                for _ in 0..self.m {
                    acc *= h;
                    row.push(acc);
                }
                row
            })
            .collect()
    }

    fn residual(&self, params: &[f64], target: &[f64]) -> DVector<f64> {
        let tables: Vec<_> = (0..self.n).map(|i| self.power_table(self.coords(params, i))).collect();
        DVector::from_iterator(
            self.basis.len(),
            self.basis.iter().enumerate().map(|(g, gamma)| {
                let mut model = 0.0;
                for i in 0..self.n {
                    let mut mono = 1.0;
                    for (j, &e) in gamma.exponents().iter().enumerate() {
                        mono *= tables[i][j][e as usize];
                    }
                    model += self.alpha(params, i) * self.multinomials[g] * mono;
                }
                self.sqrt_weights[g] * (model - target[g])
            }),
        )
    }

    fn jacobian(&self, params: &[f64]) -> DMatrix<f64> {
        let tables: Vec<_> = (0..self.n).map(|i| self.power_table(self.coords(params, i))).collect();
        let mut jac = DMatrix::zeros(self.basis.len(), self.param_count());
        for (g, gamma) in self.basis.iter().enumerate() {
            let w = self.sqrt_weights[g] * self.multinomials[g];
            for i in 0..self.n {
                let mut mono = 1.0;
                for (j, &e) in gamma.exponents().iter().enumerate() {
                    mono *= tables[i][j][e as usize];
                }
                // d/d alpha_i
                jac[(g, self.n * self.nvars + i)] = w * mono;
                // d/d h_ij
                let alpha = self.alpha(params, i);
                for (j, &e) in gamma.exponents().iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let mut partial = e as f64;
                    for (j2, &e2) in gamma.exponents().iter().enumerate() {
                        let exp = if j2 == j { e2 - 1 } else { e2 };
                        partial *= tables[i][j2][exp as usize];
                    }
                    jac[(g, i * self.nvars + j)] = w * alpha * partial;
                }
            }
        }
        jac
    }
}

/// Damped least-squares iteration; returns the parameters and the final
/// squared residual.
fn levenberg_marquardt(
    model: &ModelGeometry,
    target: &[f64],
    mut params: Vec<f64>,
    max_iter: u32,
) -> (Vec<f64>, f64) {
    let mut lambda = 1e-3;
    let mut r = model.residual(&params, target);
    let mut sq = r.norm_squared();
    for _ in 0..max_iter {
        // polish all the way down; acceptance against tol happens outside
        if sq <= 1e-28 {
            break;
        }
        let jac = model.jacobian(&params);
        let grad = jac.transpose() * &r;
        if grad.amax() < 1e-14 {
            break;
        }
        let hess = jac.transpose() * &jac;
        let mut improved = false;
        for _ in 0..25 {
            let mut damped = hess.clone();
            for d in 0..damped.nrows() {
                let scaled = hess[(d, d)] * lambda;
                damped[(d, d)] += if scaled.abs() > 1e-12 { scaled } else { lambda * 1e-6 + 1e-12 };
            }
            let Some(step) = damped.lu().solve(&(-&grad)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = params.iter().zip(step.iter()).map(|(p, s)| p + s).collect();
            let trial_r = model.residual(&trial, target);
            let trial_sq = trial_r.norm_squared();
            if trial_sq.is_finite() && trial_sq < sq {
                params = trial;
                r = trial_r;
                sq = trial_sq;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
            if lambda > 1e10 {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    (params, sq)
}

/// Least-squares init for the coefficients given fixed points.
fn init_alphas(model: &ModelGeometry, params: &mut [f64], target: &[f64]) {
    let tables: Vec<_> = (0..model.n)
        .map(|i| model.power_table(model.coords(params, i)))
        .collect();
    let design = DMatrix::from_fn(model.basis.len(), model.n, |g, i| {
        let mut mono = 1.0;
        for (j, &e) in model.basis[g].exponents().iter().enumerate() {
            mono *= tables[i][j][e as usize];
        }
        model.sqrt_weights[g] * model.multinomials[g] * mono
    });
    let rhs = DVector::from_iterator(
        target.len(),
        target.iter().zip(&model.sqrt_weights).map(|(t, w)| t * w),
    );
    let mut normal = design.transpose() * &design;
    for d in 0..model.n {
        normal[(d, d)] += 1e-9;
    }
    if let Some(alphas) = normal.lu().solve(&(design.transpose() * rhs)) {
        for i in 0..model.n {
            params[model.n * model.nvars + i] = alphas[i];
        }
    }
}

impl NumericRepresentation {
    /// Scale every entry so its first significant coordinate is 1 and sort
    /// the entries lexicographically, resolving the `(H, alpha) ~ (cH,
    /// alpha/c^m)` ambiguity.
    pub fn canonicalized(&self) -> NumericRepresentation {
        let mut entries: Vec<NumericEntry> = self
            .entries
            .iter()
            .map(|entry| {
                let maxabs = entry.coords.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
                let pivot = entry
                    .coords
                    .iter()
                    .find(|c| c.abs() > 1e-9_f64.max(1e-6 * maxabs))
                    .copied();
                match pivot {
                    Some(c) if c != 0.0 => NumericEntry {
                        coords: entry.coords.iter().map(|x| x / c).collect(),
                        alpha: entry.alpha * c.powi(self.m as i32),
                    },
                    _ => entry.clone(),
                }
            })
            .collect();
        entries.sort_by(|a, b| {
            a.coords
                .iter()
                .zip(&b.coords)
                .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        NumericRepresentation {
            m: self.m,
            nvars: self.nvars,
            entries,
            residual: self.residual,
        }
    }

    /// Max absolute difference of coordinates and coefficients against
    /// another representation, entry by entry after canonicalization.
    pub fn max_difference(&self, other: &NumericRepresentation) -> f64 {
        if self.entries.len() != other.entries.len() {
            return f64::INFINITY;
        }
        let a = self.canonicalized();
        let b = other.canonicalized();
        let mut worst = 0.0_f64;
        for (x, y) in a.entries.iter().zip(&b.entries) {
            for (c, d) in x.coords.iter().zip(&y.coords) {
                worst = worst.max((c - d).abs());
            }
            worst = worst.max((x.alpha - y.alpha).abs());
        }
        worst
    }
}

fn same_solution(a: &NumericRepresentation, b: &NumericRepresentation) -> bool {
    if a.entries.len() != b.entries.len() {
        return false;
    }
    a.entries.iter().zip(&b.entries).all(|(x, y)| {
        x.coords
            .iter()
            .zip(&y.coords)
            .all(|(c, d)| (c - d).abs() <= 1e-6 * (1.0 + c.abs().max(d.abs())))
            && (x.alpha - y.alpha).abs() <= 1e-6 * (1.0 + x.alpha.abs().max(y.alpha.abs()))
    })
}

/// Bombieri residual of a float representation against an exact form,
/// converted explicitly to floats.
pub fn verify_representation_numeric(f: &Form, rep: &NumericRepresentation) -> f64 {
    let (_, target) = form_to_dense(f);
    let model = ModelGeometry::new(f.nvars(), rep.entries.len(), rep.m);
    let mut params = vec![0.0; model.param_count()];
    for (i, entry) in rep.entries.iter().enumerate() {
        params[i * model.nvars..(i + 1) * model.nvars].copy_from_slice(&entry.coords);
        params[model.n * model.nvars + i] = entry.alpha;
    }
    residual_norm(&model, &params, &target)
}

/// Search for length-`n` power-sum decompositions of `f` (converted to
/// floats) by Levenberg-Marquardt with `config.restarts` random restarts.
/// Returns every distinct local solution with squared residual at most
/// `config.tol`; an empty solution list carries the `NoConvergence` status.
pub fn waring_decompose_numeric(f: &Form, n: usize, config: &DecomposeConfig) -> DecomposeResult {
    let (_, raw_target) = form_to_dense(f);
    let model = ModelGeometry::new(f.nvars(), n, f.degree());
    // Solve against the unit-norm target so damping thresholds and the
    // stall cutoffs are scale-free; alphas are rescaled on the way out and
    // the residual gate stays on the caller's absolute tolerance.
    let norm_scale = raw_target
        .iter()
        .zip(bombieri_weights(&model.basis, model.m))
        .map(|(c, w)| c * c * w)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    let target: Vec<f64> = raw_target.iter().map(|c| c / norm_scale).collect();

    let mut found: Vec<(f64, u32, NumericRepresentation)> = Vec::new();
    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ u64::from(restart));
        // widen the initial point box over the restart cycle to reach
        // decompositions with large coordinates
        let width = [1.0, 2.0, 4.0, 8.0][(restart % 4) as usize];
        let mut params = vec![0.0; model.param_count()];
        for p in params.iter_mut().take(n * model.nvars) {
            *p = rng.gen_range(-width..width);
        }
        init_alphas(&model, &mut params, &target);
        let (params, sq) = levenberg_marquardt(&model, &target, params, config.max_iter);
        let sq_absolute = sq * norm_scale * norm_scale;
        if !(sq_absolute <= config.tol) {
            continue;
        }
        let rep = NumericRepresentation {
            m: model.m,
            nvars: model.nvars,
            entries: (0..n)
                .map(|i| NumericEntry {
                    coords: model.coords(&params, i).to_vec(),
                    alpha: model.alpha(&params, i) * norm_scale,
                })
                .collect(),
            residual: sq_absolute.sqrt(),
        }
        .canonicalized();
        if rep
            .entries
            .iter()
            .any(|e| e.coords.iter().any(|c| !c.is_finite()) || !e.alpha.is_finite())
        {
            continue;
        }
        found.push((rep.residual, restart, rep));
    }
    found.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });
    let mut solutions: Vec<NumericRepresentation> = Vec::new();
    for (_, _, rep) in found {
        if !solutions.iter().any(|kept| same_solution(kept, &rep)) {
            solutions.push(rep);
        }
    }
    let status = if solutions.is_empty() {
        DecomposeStatus::NoConvergence
    } else {
        DecomposeStatus::Solved
    };
    DecomposeResult { solutions, status }
}
