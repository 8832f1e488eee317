//! Node significance rankings from walk stationary distributions.
//!
//! The classical baseline is the stationary distribution of the damped
//! column-stochastic rates, found by (lazy) power iteration. The quantum
//! ranking evolves the density matrix from the uniform mixture under the
//! Lindblad dynamics and reads off the diagonal. Hubs are classified against
//! the 1/N and c/N thresholds with strict inequalities: a node sitting
//! exactly on c/N is a secondary hub, one exactly on 1/N belongs to the rest.

use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{DensityMatrix, Liouvillian};
use crate::integrator::{evolve, EvolutionResult, IntegratorError, Rkf45Config};
use crate::net::Network;
use crate::operators::{OperatorError, RateMatrix, WalkParameters};
use crate::scalar::Scalar;

/// Iteration guard for the classical power iteration.
const POWER_ITERATION_LIMIT: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum RankError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
    #[error("power iteration did not converge: residual {residual:.3e} after {iterations} sweeps")]
    NonConvergence { residual: f64, iterations: usize },
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
    #[error("hub constant c={0} must exceed 1")]
    InvalidHubConstant(f64),
}

/// Occupation probability per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector<T> {
    p: Vec<T>,
}

impl<T: Scalar> ProbabilityVector<T> {
    /// Validates Σp = 1 within 1e-8 and entries ≥ −1e-10.
    pub fn new(p: Vec<T>) -> Result<Self, RankError> {
        let sum: T = p.iter().copied().sum();
        if ((sum - T::one()).abs() > T::lit(1e-8)) || !sum.is_finite() {
            return Err(RankError::InvalidProbability(format!(
                "sum {sum} differs from 1 by more than 1e-8"
            )));
        }
        if let Some(bad) = p.iter().find(|&&v| v < T::lit(-1e-10)) {
            return Err(RankError::InvalidProbability(format!("entry {bad} below -1e-10")));
        }
        Ok(Self { p })
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.p
    }

    pub fn get(&self, i: usize) -> T {
        self.p[i]
    }

    /// Values with tiny negatives clipped to zero, for reporting.
    pub fn clipped(&self) -> Vec<T> {
        self.p.iter().map(|&v| v.max(T::zero())).collect()
    }

    /// max |p − other| over nodes.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.p
            .iter()
            .zip(&other.p)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
    }
}

/// Hub classification of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HubClass {
    Main,
    Secondary,
    Rest,
}

impl std::fmt::Display for HubClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            HubClass::Main => "main",
            HubClass::Secondary => "secondary",
            HubClass::Rest => "rest",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct HubCounts {
    pub main: usize,
    pub secondary: usize,
    pub rest: usize,
}

/// Classifies each node: main if p > c/n, secondary if 1/n < p ≤ c/n,
/// rest otherwise. Both thresholds are strict.
pub fn classify_hubs<T: Scalar>(
    p: &ProbabilityVector<T>,
    c: T,
) -> Result<(Vec<HubClass>, HubCounts), RankError> {
    if !(c > T::one()) {
        return Err(RankError::InvalidHubConstant(c.to_f64().unwrap_or(f64::NAN)));
    }
    let n = T::of_usize(p.len());
    let main_threshold = c / n;
    let secondary_threshold = T::one() / n;
    let mut counts = HubCounts::default();
    let classes = p
        .values()
        .iter()
        .map(|&v| {
            if v > main_threshold {
                counts.main += 1;
                HubClass::Main
            } else if v > secondary_threshold {
                counts.secondary += 1;
                HubClass::Secondary
            } else {
                counts.rest += 1;
                HubClass::Rest
            }
        })
        .collect();
    Ok((classes, counts))
}

/// One row of a ranking.
#[derive(Debug, Clone, Serialize)]
pub struct RankEntry<T> {
    pub rank: usize,
    #[serde(skip)]
    pub index: usize,
    pub label: String,
    pub probability: T,
    pub hub_class: HubClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
}

/// Nodes sorted by descending probability; ties broken by ascending index.
#[derive(Debug, Clone, Serialize)]
pub struct Ranking<T> {
    pub ranking: Vec<RankEntry<T>>,
    pub hub_counts: HubCounts,
}

impl<T: Scalar> Ranking<T> {
    /// CSV rendering: `rank,label,probability,hub_class` with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,label,probability,hub_class\n");
        for e in &self.ranking {
            out.push_str(&format!("{},{},{},{}\n", e.rank, e.label, e.probability, e.hub_class));
        }
        out
    }

    /// Attaches node coordinates from the network for plotting output.
    pub fn with_coords(mut self, net: &Network) -> Self {
        for e in &mut self.ranking {
            if let Some((lon, lat)) = net.coords()[e.index] {
                e.lon = Some(lon);
                e.lat = Some(lat);
            }
        }
        self
    }
}

/// Builds the ranking: stable descending sort with index tie-break, with hub
/// classes from [`classify_hubs`] at constant `c`.
pub fn rank_nodes<T: Scalar>(
    p: &ProbabilityVector<T>,
    labels: &[String],
    c: T,
) -> Result<Ranking<T>, RankError> {
    assert_eq!(p.len(), labels.len(), "one label per node");
    let (classes, hub_counts) = classify_hubs(p, c)?;
    let clipped = p.clipped();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| {
        clipped[b].partial_cmp(&clipped[a]).unwrap().then(a.cmp(&b))
    });
    let ranking = order
        .into_iter()
        .enumerate()
        .map(|(pos, idx)| RankEntry {
            rank: pos + 1,
            index: idx,
            label: labels[idx].clone(),
            probability: clipped[idx],
            hub_class: classes[idx],
            lon: None,
            lat: None,
        })
        .collect();
    Ok(Ranking { ranking, hub_counts })
}

/// Stationary distribution of the damped rates by lazy power iteration.
///
/// Iterates p ← ½p + ½Wp, which has the same fixed point as p = Wp but also
/// converges for periodic rate matrices (an undamped cycle at q = 1), and
/// stops when max|Wp − p| ≤ eps.
pub fn classical_pagerank<T: Scalar>(
    w: &RateMatrix<T>,
    eps: T,
) -> Result<ProbabilityVector<T>, RankError> {
    let n = w.n();
    let uniform = T::one() / T::of_usize(n);
    let mut p = vec![uniform; n];
    let half = T::lit(0.5);
    let mut residual = T::infinity();
    for sweep in 0..POWER_ITERATION_LIMIT {
        let mut wp = vec![T::zero(); n];
        for i in 0..n {
            let mut acc = T::zero();
            for j in 0..n {
                acc += w.get(i, j) * p[j];
            }
            wp[i] = acc;
        }
        residual = wp.iter().zip(&p).map(|(&a, &b)| (a - b).abs()).fold(T::zero(), T::max);
        if residual <= eps {
            let sum: T = p.iter().copied().sum();
            let p = p.into_iter().map(|v| v / sum).collect();
            return ProbabilityVector::new(p);
        }
        for i in 0..n {
            p[i] = half * p[i] + half * wp[i];
        }
        if sweep % 64 == 0 {
            let sum: T = p.iter().copied().sum();
            for v in &mut p {
                *v /= sum;
            }
        }
    }
    Err(RankError::NonConvergence {
        residual: residual.to_f64().unwrap_or(f64::NAN),
        iterations: POWER_ITERATION_LIMIT,
    })
}

/// Initial condition of the quantum evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialState {
    /// Uniform classical mixture I/n.
    #[default]
    MaximallyMixed,
    /// Uniform coherent superposition |s⟩⟨s|.
    UniformSuperposition,
}

/// Quantum ranking distribution: evolves ρ(0) = I/n under the walk dynamics
/// and returns the diagonal of the final state plus evolution diagnostics.
pub fn quantum_pagerank<T: Scalar>(
    net: &Network,
    params: &WalkParameters<T>,
    config: &Rkf45Config<T>,
) -> Result<(ProbabilityVector<T>, EvolutionResult<T>), RankError> {
    quantum_pagerank_with_initial(net, params, config, InitialState::MaximallyMixed)
}

/// [`quantum_pagerank`] with an explicit initial state.
pub fn quantum_pagerank_with_initial<T: Scalar>(
    net: &Network,
    params: &WalkParameters<T>,
    config: &Rkf45Config<T>,
    initial: InitialState,
) -> Result<(ProbabilityVector<T>, EvolutionResult<T>), RankError> {
    let liouvillian = Liouvillian::new(net, params)?;
    let rho0 = match initial {
        InitialState::MaximallyMixed => DensityMatrix::maximally_mixed(net.n()),
        InitialState::UniformSuperposition => DensityMatrix::uniform_superposition(net.n()),
    };
    let result = evolve(&liouvillian.rhs_fn(), &rho0, config)?;
    let p = ProbabilityVector::new(result.rho_final.occupation_probabilities())?;
    Ok((p, result))
}
