//! Poisson, Helmholtz and biharmonic drivers with zero boundary data built
//! into the weighted bases, plus lifting of θ-dependent Dirichlet data.

pub mod catalog;
mod lift;

pub use lift::{boundary_fourier, lift_boundary, BoundaryLift};

use crate::basis::{BasisSpec, CapPoint, CoefficientVector, Evaluator};
use crate::error::{Error, Result};
use crate::operators::{assemble, biharmonic, helmholtz, Multiplication, OperatorKind, OperatorSpec};
use crate::structured::{solve, BandedBlockBanded};
use crate::transforms::expand;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

pub type PointFn = Arc<dyn Fn(&CapPoint) -> f64 + Send + Sync>;
/// Boundary data as a function of `θ`.
pub type AngleFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    Poisson,
    Helmholtz,
    Biharmonic,
}

/// `Δu = f`, `Δu + k² v u = f` or `Δ²u = f` on the cap, with `u = c(θ)` (or
/// zero) on `z = α`; the biharmonic problem also has zero normal derivative.
#[derive(Clone)]
pub struct PdeProblem {
    pub kind: ProblemKind,
    pub alpha: f64,
    pub degree: usize,
    pub f: PointFn,
    pub v: Option<PointFn>,
    pub k_wave: Option<f64>,
    pub boundary: Option<AngleFn>,
}

impl fmt::Debug for PdeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PdeProblem")
            .field("kind", &self.kind)
            .field("alpha", &self.alpha)
            .field("degree", &self.degree)
            .field("k_wave", &self.k_wave)
            .field("has_v", &self.v.is_some())
            .field("has_boundary", &self.boundary.is_some())
            .finish()
    }
}

impl PdeProblem {
    pub fn poisson(alpha: f64, degree: usize, f: PointFn) -> Self {
        PdeProblem {
            kind: ProblemKind::Poisson,
            alpha,
            degree,
            f,
            v: None,
            k_wave: None,
            boundary: None,
        }
    }

    pub fn helmholtz(alpha: f64, degree: usize, f: PointFn, v: PointFn, k_wave: f64) -> Self {
        PdeProblem {
            kind: ProblemKind::Helmholtz,
            alpha,
            degree,
            f,
            v: Some(v),
            k_wave: Some(k_wave),
            boundary: None,
        }
    }

    pub fn biharmonic(alpha: f64, degree: usize, f: PointFn) -> Self {
        PdeProblem {
            kind: ProblemKind::Biharmonic,
            alpha,
            degree,
            f,
            v: None,
            k_wave: None,
            boundary: None,
        }
    }

    pub fn with_boundary(mut self, c: AngleFn) -> Self {
        self.boundary = Some(c);
        self
    }

    pub fn validate(&self) -> Result<()> {
        BasisSpec::new(self.alpha, 0, self.degree)?;
        match self.kind {
            ProblemKind::Helmholtz if self.v.is_none() || self.k_wave.is_none() => Err(Error::ParameterDomain(
                "Helmholtz problems need both v and k_wave".into(),
            )),
            ProblemKind::Biharmonic if self.boundary.is_some() => Err(Error::ParameterDomain(
                "biharmonic problems take zero Dirichlet and Neumann data only".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Parameter `a` of the weighted solution basis.
    pub fn solution_a(&self) -> usize {
        if self.kind == ProblemKind::Biharmonic {
            2
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub expand: f64,
    pub assemble: f64,
    pub solve: f64,
}

#[derive(Clone)]
pub struct PdeSolution {
    /// Coefficients against the weighted basis `w^{(a,0)} Q^{(a)}`.
    pub coeffs: CoefficientVector,
    /// Right-hand side coefficients in `Q^{(a)}`.
    pub rhs: CoefficientVector,
    /// `‖A u − f‖_∞` in coefficient space.
    pub residual_norm: f64,
    pub block_norms: Vec<f64>,
    pub decoupled: bool,
    pub timings: Timings,
    /// Boundary data added back on evaluation.
    pub boundary: Option<AngleFn>,
}

impl fmt::Debug for PdeSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PdeSolution")
            .field("degree", &self.coeffs.spec.degree)
            .field("residual_norm", &self.residual_norm)
            .field("decoupled", &self.decoupled)
            .field("timings", &self.timings)
            .finish()
    }
}

impl PdeSolution {
    pub fn evaluator(&self) -> Result<SolutionEvaluator> {
        Ok(SolutionEvaluator {
            inner: Evaluator::new(&self.coeffs)?,
            boundary: self.boundary.clone(),
        })
    }

    pub fn evaluate(&self, p: &CapPoint) -> Result<f64> {
        self.evaluator()?.eval(p)
    }
}

pub struct SolutionEvaluator {
    inner: Evaluator,
    boundary: Option<AngleFn>,
}

impl SolutionEvaluator {
    pub fn eval(&self, p: &CapPoint) -> Result<f64> {
        let u = self.inner.eval(p)?;
        Ok(match &self.boundary {
            Some(c) => u + c(p.theta()),
            None => u,
        })
    }
}

/// Dispatch on `problem.kind`.
pub fn solve_problem(problem: &PdeProblem) -> Result<PdeSolution> {
    match problem.kind {
        ProblemKind::Poisson => solve_poisson(problem),
        ProblemKind::Helmholtz => solve_helmholtz(problem),
        ProblemKind::Biharmonic => solve_biharmonic(problem),
    }
}

fn expect_kind(problem: &PdeProblem, kind: ProblemKind) -> Result<()> {
    problem.validate()?;
    if problem.kind != kind {
        return Err(Error::ParameterDomain(format!("expected a {kind:?} problem, got {:?}", problem.kind)));
    }
    Ok(())
}

pub fn solve_poisson(problem: &PdeProblem) -> Result<PdeSolution> {
    expect_kind(problem, ProblemKind::Poisson)?;
    let (p, boundary) = lifted(problem)?;
    let op = OperatorSpec::new(OperatorKind::WeightedLaplacianA1, p.alpha, 1, 0, p.degree)?;
    run(&p, 1, boundary, || assemble(&op))
}

pub fn solve_helmholtz(problem: &PdeProblem) -> Result<PdeSolution> {
    expect_kind(problem, ProblemKind::Helmholtz)?;
    let (p, boundary) = lifted(problem)?;
    let v = p.v.clone().expect("validated");
    let k = p.k_wave.expect("validated");
    run(&p, 1, boundary, || {
        let mult = Multiplication::from_function(|q: &CapPoint| v(q), p.alpha, p.degree)?;
        helmholtz(p.alpha, p.degree, k, &mult)
    })
}

pub fn solve_biharmonic(problem: &PdeProblem) -> Result<PdeSolution> {
    expect_kind(problem, ProblemKind::Biharmonic)?;
    run(problem, 2, None, || biharmonic(problem.alpha, problem.degree))
}

fn lifted(problem: &PdeProblem) -> Result<(PdeProblem, Option<AngleFn>)> {
    match &problem.boundary {
        Some(c) => Ok((lift_boundary(problem)?, Some(c.clone()))),
        None => Ok((problem.clone(), None)),
    }
}

fn run(
    problem: &PdeProblem,
    a: usize,
    boundary: Option<AngleFn>,
    build: impl FnOnce() -> Result<BandedBlockBanded>,
) -> Result<PdeSolution> {
    let spec = BasisSpec::new(problem.alpha, a, problem.degree)?;
    let t0 = Instant::now();
    let f = problem.f.clone();
    let rhs = expand(move |p: &CapPoint| f(p), &spec)?;
    let t1 = Instant::now();
    let op = build()?;
    let t2 = Instant::now();
    let out = solve(&op, &rhs)?;
    let t3 = Instant::now();
    let mut coeffs = out.solution;
    coeffs.weighted = true;
    Ok(PdeSolution {
        block_norms: coeffs.block_norms(),
        coeffs,
        rhs,
        residual_norm: out.residual,
        decoupled: out.decoupled,
        timings: Timings {
            expand: (t1 - t0).as_secs_f64(),
            assemble: (t2 - t1).as_secs_f64(),
            solve: (t3 - t2).as_secs_f64(),
        },
        boundary,
    })
}

/// Seconds to build and solve `[Δ + v(z)] u = f` for `v = cos z` at degree
/// `N`, excluding the expansion of `f`.
pub fn time_zonal_helmholtz(alpha: f64, degree: usize) -> Result<f64> {
    let problem = PdeProblem::helmholtz(
        alpha,
        degree,
        catalog::poisson_manufactured_rhs(alpha),
        Arc::new(|p: &CapPoint| p.z.cos()),
        1.0,
    );
    let sol = solve_helmholtz(&problem)?;
    Ok(sol.timings.assemble + sol.timings.solve)
}
