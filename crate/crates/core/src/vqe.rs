//! Variational energy minimization over ansatz parameters.
//!
//! Gradients are central finite differences; the optimizer is L-BFGS with
//! Armijo backtracking.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::ansatz::{Circuit, ExponentialTerm};
use crate::pauli::PauliSum;
use crate::simulator::{SimulatorError, StateVector};

const LBFGS_MEMORY: usize = 10;
const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VqeError {
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("objective returned a non-finite value at evaluation {0}")]
    NonFinite(usize),
    #[error("invalid optimizer setting: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub gradient_step: f64,
    pub energy_tolerance: f64,
    pub gradient_tolerance: f64,
    pub max_evaluations: usize,
    /// Starting point; `None` means all zeros (the reference state).
    pub initial: Option<Vec<f64>>,
    pub gradient: GradientMethod,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            gradient_step: 1e-6,
            energy_tolerance: 1e-9,
            gradient_tolerance: 1e-7,
            max_evaluations: 10_000,
            initial: None,
            gradient: GradientMethod::CentralDifference,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<(), VqeError> {
        if !(self.gradient_step > 0.0 && self.gradient_step.is_finite()) {
            return Err(VqeError::InvalidConfig(format!("gradient step {}", self.gradient_step)));
        }
        if !(self.energy_tolerance >= 0.0) || !(self.gradient_tolerance >= 0.0) {
            return Err(VqeError::InvalidConfig("tolerances must be non-negative".into()));
        }
        if self.max_evaluations == 0 {
            return Err(VqeError::InvalidConfig("evaluation budget is zero".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    EnergyChange,
    GradientNorm,
    BudgetExhausted,
    LineSearchStalled,
}

impl StopReason {
    pub fn converged(self) -> bool {
        matches!(self, StopReason::EnergyChange | StopReason::GradientNorm)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeResult {
    pub energy: f64,
    pub parameters: Vec<f64>,
    /// `(evaluation index, energy)` of accepted iterates, starting with the
    /// initial point.
    pub trace: Vec<(usize, f64)>,
    /// Objective evaluations, including those spent on gradients.
    pub evaluations: usize,
    pub iterations: usize,
    pub reason: StopReason,
}

impl VqeResult {
    pub fn converged(&self) -> bool {
        self.reason.converged()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientMethod {
    #[default]
    CentralDifference,
    /// Reverse-mode sweep through the rotation schedule; one forward and one
    /// backward pass per gradient.
    Adjoint,
}

#[derive(Debug, Clone)]
enum AnsatzForm {
    Gates(Circuit),
    Rotations { n_parameters: usize, schedule: Vec<ExponentialTerm> },
}

/// Energy `⟨ψ(θ)|H|ψ(θ)⟩` of reference preparation followed by the ansatz.
#[derive(Debug, Clone)]
pub struct EnergyObjective {
    hamiltonian: PauliSum,
    reference: Circuit,
    ansatz: AnsatzForm,
}

impl EnergyObjective {
    /// Ansatz simulated gate by gate.
    pub fn new(hamiltonian: PauliSum, reference: Circuit, ansatz: Circuit) -> Result<Self, VqeError> {
        Self::check(&hamiltonian, &reference, ansatz.n_qubits())?;
        Ok(EnergyObjective { hamiltonian, reference, ansatz: AnsatzForm::Gates(ansatz) })
    }

    /// Ansatz given as a sequence of Pauli-string exponentials, each applied
    /// in a single pass. Equivalent to the compiled gate circuit.
    pub fn from_schedule(
        hamiltonian: PauliSum,
        reference: Circuit,
        n_parameters: usize,
        schedule: Vec<ExponentialTerm>,
    ) -> Result<Self, VqeError> {
        let n = hamiltonian.num_qubits();
        Self::check(&hamiltonian, &reference, n)?;
        for t in &schedule {
            if t.string.num_qubits() != n {
                return Err(SimulatorError::QubitMismatch { state: n, operand: t.string.num_qubits() }.into());
            }
            if let Some(k) = t.angle.slot.filter(|&k| k >= n_parameters) {
                return Err(VqeError::ParameterCount { expected: n_parameters, got: k + 1 });
            }
        }
        Ok(EnergyObjective { hamiltonian, reference, ansatz: AnsatzForm::Rotations { n_parameters, schedule } })
    }

    fn check(hamiltonian: &PauliSum, reference: &Circuit, ansatz_qubits: usize) -> Result<(), VqeError> {
        let n = hamiltonian.num_qubits();
        for m in [reference.n_qubits(), ansatz_qubits] {
            if m != n {
                return Err(SimulatorError::QubitMismatch { state: n, operand: m }.into());
            }
        }
        if reference.n_parameters() != 0 {
            return Err(VqeError::ParameterCount { expected: 0, got: reference.n_parameters() });
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.hamiltonian.num_qubits()
    }

    pub fn n_parameters(&self) -> usize {
        match &self.ansatz {
            AnsatzForm::Gates(c) => c.n_parameters(),
            AnsatzForm::Rotations { n_parameters, .. } => *n_parameters,
        }
    }

    pub fn hamiltonian(&self) -> &PauliSum {
        &self.hamiltonian
    }

    pub fn state(&self, theta: &[f64]) -> Result<StateVector, VqeError> {
        if theta.len() != self.n_parameters() {
            return Err(VqeError::ParameterCount { expected: self.n_parameters(), got: theta.len() });
        }
        let mut s = StateVector::zero(self.n_qubits())?;
        s.run(&self.reference, &[])?;
        match &self.ansatz {
            AnsatzForm::Gates(c) => s.run(c, theta)?,
            AnsatzForm::Rotations { schedule, .. } => {
                for t in schedule {
                    s.apply_pauli_rotation(&t.string, t.angle.resolve(theta))?;
                }
            }
        }
        Ok(s)
    }

    pub fn energy(&self, theta: &[f64]) -> Result<f64, VqeError> {
        Ok(self.state(theta)?.expectation(&self.hamiltonian)?)
    }

    /// Exact gradient by a reverse sweep; `None` for gate-level ansätze.
    pub fn adjoint_gradient(&self, theta: &[f64]) -> Option<Result<Vec<f64>, VqeError>> {
        let AnsatzForm::Rotations { schedule, .. } = &self.ansatz else {
            return None;
        };
        Some((|| {
            let mut psi = self.state(theta)?;
            let mut lambda = StateVector::from_amplitudes(psi.apply_observable(&self.hamiltonian)?)?;
            let mut grad = vec![0.0; theta.len()];
            for t in schedule.iter().rev() {
                let phi = t.angle.resolve(theta);
                if let Some(k) = t.angle.slot {
                    // dE/dφ = 2 Re ⟨λ|iP|ψ⟩ = −2 Im ⟨λ|P|ψ⟩.
                    let m = lambda.pauli_element(&t.string, &psi)?;
                    grad[k] += -2.0 * m.im * t.angle.scale;
                }
                psi.apply_pauli_rotation(&t.string, -phi)?;
                lambda.apply_pauli_rotation(&t.string, -phi)?;
            }
            Ok(grad)
        })())
    }
}

struct Counted<'a, F> {
    f: &'a F,
    count: AtomicUsize,
}

impl<F> Counted<'_, F>
where
    F: Fn(&[f64]) -> Result<f64, VqeError> + Sync,
{
    fn eval(&self, x: &[f64]) -> Result<f64, VqeError> {
        let k = self.count.fetch_add(1, Ordering::Relaxed) + 1;
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(VqeError::NonFinite(k));
        }
        Ok(v)
    }

    fn count(&self) -> usize {
        self.count.load(Ordering::Relaxed)
    }

    /// Central differences, one component per task.
    fn gradient(&self, x: &[f64], h: f64) -> Result<Vec<f64>, VqeError> {
        (0..x.len())
            .into_par_iter()
            .map(|k| {
                let mut p = x.to_vec();
                p[k] = x[k] + h;
                let up = self.eval(&p)?;
                p[k] = x[k] - h;
                let down = self.eval(&p)?;
                Ok((up - down) / (2.0 * h))
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Central-difference gradient of `f` at `x`.
pub fn numerical_gradient<F>(f: &F, x: &[f64], step: f64) -> Result<Vec<f64>, VqeError>
where
    F: Fn(&[f64]) -> Result<f64, VqeError> + Sync,
{
    Counted { f, count: AtomicUsize::new(0) }.gradient(x, step)
}

/// Minimizes `f` from `theta0` with finite-difference gradients.
pub fn minimize<F>(f: &F, theta0: &[f64], config: &OptimizerConfig) -> Result<VqeResult, VqeError>
where
    F: Fn(&[f64]) -> Result<f64, VqeError> + Sync,
{
    minimize_with(f, None::<&fn(&[f64]) -> Result<Vec<f64>, VqeError>>, theta0, config)
}

/// Minimizes `f` using `gradient` when given; each gradient call counts as
/// one evaluation.
fn minimize_with<F, G>(
    f: &F,
    gradient: Option<&G>,
    theta0: &[f64],
    config: &OptimizerConfig,
) -> Result<VqeResult, VqeError>
where
    F: Fn(&[f64]) -> Result<f64, VqeError> + Sync,
    G: Fn(&[f64]) -> Result<Vec<f64>, VqeError>,
{
    config.validate()?;
    let obj = Counted { f, count: AtomicUsize::new(0) };
    let grad_cost = if gradient.is_some() { 1 } else { 2 * theta0.len() };
    let grad = |x: &[f64]| -> Result<Vec<f64>, VqeError> {
        match gradient {
            Some(g) => {
                obj.count.fetch_add(1, Ordering::Relaxed);
                g(x)
            }
            None => obj.gradient(x, config.gradient_step),
        }
    };
    let n = theta0.len();
    let mut x = theta0.to_vec();
    let mut fx = obj.eval(&x)?;
    let mut trace = vec![(obj.count(), fx)];
    let finish = |x: Vec<f64>, fx: f64, trace: Vec<(usize, f64)>, iterations, reason, obj: &Counted<F>| VqeResult {
        energy: fx,
        parameters: x,
        trace,
        evaluations: obj.count(),
        iterations,
        reason,
    };
    if n == 0 {
        return Ok(finish(x, fx, trace, 0, StopReason::GradientNorm, &obj));
    }
    let mut g = grad(&x)?;
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut iterations = 0;
    loop {
        if norm(&g) <= config.gradient_tolerance {
            return Ok(finish(x, fx, trace, iterations, StopReason::GradientNorm, &obj));
        }
        if obj.count() + grad_cost + 1 > config.max_evaluations {
            return Ok(finish(x, fx, trace, iterations, StopReason::BudgetExhausted, &obj));
        }

        // Two-loop recursion.
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &d);
            for (di, yi) in d.iter_mut().zip(y) {
                *di -= a * yi;
            }
            alphas.push(a);
        }
        if let Some((s, y, _)) = history.back() {
            let gamma = dot(s, y) / dot(y, y);
            d.iter_mut().for_each(|v| *v *= gamma);
        }
        for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &d);
            for (di, si) in d.iter_mut().zip(s) {
                *di += (a - b) * si;
            }
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            history.clear();
            d = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }

        let mut step = if history.is_empty() { (1.0 / norm(&g)).min(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            if obj.count() + 1 > config.max_evaluations {
                return Ok(finish(x, fx, trace, iterations, StopReason::BudgetExhausted, &obj));
            }
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            let ft = obj.eval(&trial)?;
            if ft <= fx + ARMIJO_C1 * step * slope {
                accepted = Some((trial, ft, obj.count()));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new, at)) = accepted else {
            return Ok(finish(x, fx, trace, iterations, StopReason::LineSearchStalled, &obj));
        };
        iterations += 1;
        let change = fx - f_new;
        trace.push((at, f_new));
        if change.abs() < config.energy_tolerance {
            return Ok(finish(x_new, f_new, trace, iterations, StopReason::EnergyChange, &obj));
        }
        if obj.count() + grad_cost > config.max_evaluations {
            return Ok(finish(x_new, f_new, trace, iterations, StopReason::BudgetExhausted, &obj));
        }
        let g_new = grad(&x_new)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) && sy > 0.0 {
            if history.len() == LBFGS_MEMORY {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        x = x_new;
        fx = f_new;
        g = g_new;
    }
}

/// `⟨ψ(θ)|H|ψ(θ)⟩` with `|ψ(θ)⟩ = ansatz(θ) · reference |0…0⟩`.
pub fn energy_at(
    theta: &[f64],
    hamiltonian: &PauliSum,
    ansatz: &Circuit,
    reference: &Circuit,
) -> Result<f64, VqeError> {
    EnergyObjective::new(hamiltonian.clone(), reference.clone(), ansatz.clone())?.energy(theta)
}

/// Minimizes the energy of `objective`, starting from `config.initial` or
/// from zero.
pub fn vqe_minimize(objective: &EnergyObjective, config: &OptimizerConfig) -> Result<VqeResult, VqeError> {
    let n = objective.n_parameters();
    let theta0 = config.initial.clone().unwrap_or_else(|| vec![0.0; n]);
    if theta0.len() != n {
        return Err(VqeError::ParameterCount { expected: n, got: theta0.len() });
    }
    let f = |t: &[f64]| objective.energy(t);
    match config.gradient {
        GradientMethod::CentralDifference => minimize(&f, &theta0, config),
        GradientMethod::Adjoint => {
            if objective.adjoint_gradient(&theta0).is_none() {
                return Err(VqeError::InvalidConfig("adjoint gradients need a rotation-schedule ansatz".into()));
            }
            let g = |t: &[f64]| objective.adjoint_gradient(t).expect("rotation schedule");
            minimize_with(&f, Some(&g), &theta0, config)
        }
    }
}
