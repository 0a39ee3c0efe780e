//! The binary-signal model: randomized-response flip probability, cascade
//! threshold, correct-cascade probability, privacy-budget breakpoints,
//! heterogeneous-budget variants, a gambler's-ruin linear-solve oracle, and
//! a seeded cascade simulator.

use crate::core::{BinaryParams, BudgetSpec, WorldState};
use crate::montecarlo::AgentRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BinaryError {
    #[error("distributional budget has no single flip probability; use expected_flip")]
    DistributionalBudget,
    #[error("no cascade: reports carry no information (effective flip probability 1/2)")]
    NoCascade,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Randomized-response flip probability `u = 1/(1 + e^eps)` for a fixed
/// budget; the non-private baseline never flips.
pub fn flip_prob(budget: BudgetSpec) -> Result<f64, BinaryError> {
    match budget {
        BudgetSpec::Fixed(eps) => Ok(1.0 / (1.0 + eps.exp())),
        BudgetSpec::Infinite => Ok(0.0),
        BudgetSpec::UniformDist { .. } => Err(BinaryError::DistributionalBudget),
    }
}

/// Population-expected flip probability `u-bar = E[1/(1+e^eps)]`.
///
/// For a uniform budget this is the exact antiderivative form
/// `[log(1+e^-lo) - log(1+e^-hi)] / (hi - lo)`.
pub fn expected_flip(budget: BudgetSpec) -> f64 {
    match budget {
        BudgetSpec::Fixed(eps) => 1.0 / (1.0 + eps.exp()),
        BudgetSpec::Infinite => 0.0,
        BudgetSpec::UniformDist { lo, hi } => {
            ((-lo).exp().ln_1p() - (-hi).exp().ln_1p()) / (hi - lo)
        }
    }
}

/// Probability that a pre-cascade report matches the true state:
/// `u-tilde = u(1-p) + p(1-u)`.
pub fn report_match_prob(p: f64, u: f64) -> f64 {
    u * (1.0 - p) + p * (1.0 - u)
}

/// `rho = (1 - u-tilde)/u-tilde`, the down/up odds of the report walk.
pub fn walk_odds(p: f64, u: f64) -> f64 {
    let ut = report_match_prob(p, u);
    (1.0 - ut) / ut
}

fn resolve_flip(budget: BudgetSpec) -> f64 {
    expected_flip(budget)
}

/// Cascade threshold `k = floor(log_rho((1-p)/p)) + 1`.
///
/// Intervals of constant k are closed on the right: when the log ratio is an
/// exact integer m (u at a breakpoint), k = m + 1. An exact-integer snap of
/// 1e-9 keeps that convention stable under floating-point evaluation.
pub fn cascade_threshold(p: f64, budget: BudgetSpec) -> Result<u32, BinaryError> {
    let u = resolve_flip(budget);
    let ut = report_match_prob(p, u);
    if ut == 0.5 {
        return Err(BinaryError::NoCascade);
    }
    let rho = (1.0 - ut) / ut;
    let alpha = (1.0 - p) / p;
    let mut ratio = alpha.ln() / rho.ln();
    let nearest = ratio.round();
    if (ratio - nearest).abs() < 1e-9 {
        ratio = nearest;
    }
    Ok(ratio.floor() as u32 + 1)
}

/// Probability of a correct cascade, `(rho^k - 1)/(rho^2k - 1) = 1/(rho^k + 1)`.
pub fn correct_cascade_prob(p: f64, budget: BudgetSpec) -> Result<f64, BinaryError> {
    let k = cascade_threshold(p, budget)?;
    let u = resolve_flip(budget);
    let rho = walk_odds(p, u);
    Ok(1.0 / (rho.powi(k as i32) + 1.0))
}

/// One row of the breakpoint table: at `eps = eps_k` the flip probability
/// equals `v_k` and the cascade threshold switches between k and k-1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Breakpoint {
    pub k: u32,
    pub v: f64,
    pub eps: f64,
}

/// Breakpoints `eps_k` for k = 3..=k_max. `eps_2` is infinite (v_2 = 0):
/// the non-private threshold k = 2 persists for every finite budget above
/// `eps_3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakpointTable {
    pub p: f64,
    pub entries: Vec<Breakpoint>,
}

pub fn epsilon_breakpoints(p: f64, k_max: u32) -> Result<BreakpointTable, BinaryError> {
    if k_max < 3 {
        return Err(BinaryError::Invalid(format!("k_max must be >= 3, got {k_max}")));
    }
    let alpha = (1.0 - p) / p;
    let mut entries = Vec::with_capacity((k_max - 2) as usize);
    for k in 3..=k_max {
        let kf = k as f64;
        let head = 1.0 - alpha.powf((kf - 2.0) / (kf - 1.0));
        let v = head / (head + alpha.powf(-1.0 / (kf - 1.0)) - alpha);
        let eps = ((1.0 - v) / v).ln();
        entries.push(Breakpoint { k, v, eps });
    }
    Ok(BreakpointTable { p, entries })
}

/// Absorption probability at +2k for a +/-1 walk started at k with
/// up-probability `u_tilde`, absorbing at 0 and 2k.
///
/// Solved as the (2k-1)-unknown tridiagonal system of the first-step
/// recurrence, with no appeal to the closed form; this is the independent
/// oracle for [`correct_cascade_prob`].
pub fn gambler_ruin_oracle(u_tilde: f64, k: u32) -> Result<f64, BinaryError> {
    if !(u_tilde > 0.0 && u_tilde < 1.0) {
        return Err(BinaryError::Invalid(format!("u_tilde must be in (0,1), got {u_tilde}")));
    }
    if u_tilde == 0.5 {
        return Err(BinaryError::NoCascade);
    }
    if k == 0 {
        return Err(BinaryError::Invalid("k must be >= 1".into()));
    }
    let m = (2 * k - 1) as usize; // unknowns s(1)..s(2k-1)
    // s(i) - ut*s(i+1) - (1-ut)*s(i-1) = 0, s(0) = 0, s(2k) = 1.
    let mut sub = vec![-(1.0 - u_tilde); m];
    let mut diag = vec![1.0; m];
    let mut sup = vec![-u_tilde; m];
    let mut rhs = vec![0.0; m];
    rhs[m - 1] = u_tilde; // from the s(2k) = 1 boundary
    sub[0] = 0.0;
    sup[m - 1] = 0.0;
    // Thomas algorithm.
    for i in 1..m {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut s = vec![0.0; m];
    s[m - 1] = rhs[m - 1] / diag[m - 1];
    for i in (0..m - 1).rev() {
        s[i] = (rhs[i] - sup[i] * s[i + 1]) / diag[i];
    }
    Ok(s[(k - 1) as usize]) // start state k is the k-th unknown
}

/// Per-agent record of a simulated binary run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryStep {
    pub n: u64,
    pub eps_n: f64,
    pub s_n: i8,
    pub a_n: i8,
    pub x_n: i8,
    /// Public LLR seen by agent n before acting.
    pub l_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryTrajectory {
    pub steps: Vec<BinaryStep>,
    pub theta: WorldState,
    pub seed: u64,
}

/// Cascade outcome of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CascadeOutcome {
    Correct { onset: u64 },
    Wrong { onset: u64 },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryRunSummary {
    pub outcome: CascadeOutcome,
    /// First index with x_n = theta; None if censored at the horizon.
    pub tau: Option<u64>,
    /// Incorrect reports within the horizon.
    pub w: u64,
    /// True when the run ended in a wrong cascade or no correct report was
    /// seen, so `w` is a lower bound only.
    pub w_censored: bool,
    pub horizon: u64,
}

/// Simulate one binary run. Pre-cascade agents act on their private signal
/// and flip with their own drawn `u_n`; public bookkeeping uses the
/// population-expected flip probability, so cascade onset is the
/// reported-count difference hitting the threshold k. Post-cascade reports
/// herd truthfully.
pub fn simulate_binary(
    params: &BinaryParams,
    theta: WorldState,
    n_agents: u64,
    seed: u64,
) -> (BinaryTrajectory, BinaryRunSummary) {
    simulate_binary_rep(params, theta, n_agents, seed, 0)
}

/// Replication variant: draws come from the stream keyed by
/// `(seed, replication, agent, draw)`, so ensembles are order-independent.
pub fn simulate_binary_rep(
    params: &BinaryParams,
    theta: WorldState,
    n_agents: u64,
    seed: u64,
    replication: u64,
) -> (BinaryTrajectory, BinaryRunSummary) {
    let u_bar = expected_flip(params.budget);
    let ut_bar = report_match_prob(params.p, u_bar);
    let k = cascade_threshold(params.p, params.budget).ok();
    // Per-report LLR step under the u-bar-weighted public inference.
    let llr_step = if ut_bar != 0.5 { (ut_bar / (1.0 - ut_bar)).ln() } else { 0.0 };

    let rng = AgentRng::new(seed, replication);
    let mut steps = Vec::with_capacity(n_agents.min(1 << 20) as usize);
    let mut diff: i64 = 0; // reported +1 count minus -1 count
    let mut herd: Option<(i8, u64)> = None;
    let mut tau = None;
    let mut w = 0u64;
    let theta_sign = theta.sign() as i8;

    for n in 1..=n_agents {
        let l_n = diff as f64 * llr_step;
        let (eps_n, s_n, a_n, x_n) = match herd {
            Some((side, _)) => (f64::INFINITY, side_signal(&rng, n, params, theta_sign), side, side),
            None => {
                let eps_n = match params.budget {
                    BudgetSpec::Fixed(e) => e,
                    BudgetSpec::Infinite => f64::INFINITY,
                    BudgetSpec::UniformDist { lo, hi } => lo + (hi - lo) * rng.uniform(n, 0),
                };
                let u_n = if eps_n.is_infinite() { 0.0 } else { 1.0 / (1.0 + eps_n.exp()) };
                let s_n = side_signal(&rng, n, params, theta_sign);
                let a_n = s_n;
                let x_n = if rng.uniform(n, 2) < u_n { -a_n } else { a_n };
                (eps_n, s_n, a_n, x_n)
            }
        };
        diff += x_n as i64;
        if herd.is_none() {
            if let Some(k) = k {
                if diff.unsigned_abs() >= k as u64 {
                    herd = Some((diff.signum() as i8, n));
                }
            }
        }
        if x_n == theta_sign {
            tau.get_or_insert(n);
        } else {
            w += 1;
        }
        steps.push(BinaryStep { n, eps_n, s_n, a_n, x_n, l_n });
    }

    let outcome = match herd {
        Some((side, onset)) if side == theta_sign => CascadeOutcome::Correct { onset },
        Some((_, onset)) => CascadeOutcome::Wrong { onset },
        None => CascadeOutcome::None,
    };
    let w_censored = match outcome {
        CascadeOutcome::Correct { .. } => false,
        _ => true,
    };
    let summary = BinaryRunSummary { outcome, tau, w, w_censored, horizon: n_agents };
    (BinaryTrajectory { steps, theta, seed }, summary)
}

fn side_signal(rng: &AgentRng, n: u64, params: &BinaryParams, theta_sign: i8) -> i8 {
    if rng.uniform(n, 1) < params.p {
        theta_sign
    } else {
        -theta_sign
    }
}

/// Run `reps` independent cascades and report how often the cascade (or,
/// absent one, the final report majority) matched the true state.
pub fn cascade_frequency(
    params: &BinaryParams,
    theta: WorldState,
    n_agents: u64,
    reps: u64,
    seed: u64,
) -> (f64, f64) {
    use rayon::prelude::*;
    let correct: u64 = (0..reps)
        .into_par_iter()
        .map(|r| {
            let (_, s) = simulate_binary_rep(params, theta, n_agents, seed, r);
            matches!(s.outcome, CascadeOutcome::Correct { .. }) as u64
        })
        .sum();
    let freq = correct as f64 / reps as f64;
    let se = (freq * (1.0 - freq) / reps as f64).sqrt();
    (freq, se)
}
