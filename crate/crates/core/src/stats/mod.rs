//! Likelihood evaluation for decomposable multinomial, Gaussian and
//! conditional Gaussian models, with the edge scores used by the searches.

mod margin;
mod model;
mod pairwise;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MeasureKind;

pub use margin::{margin_loglik, MarginSpec};
pub use model::{delta_stepw, fit, model_dim, model_formula, Generator, ModelDim, ModelFormula};
pub use pairwise::{ci_test, pairwise_weight, CiTest};

pub(crate) use margin::edge_evidence;
pub(crate) use pairwise::pairwise_evidence;

/// Fit summary of a decomposable model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FitResult {
    pub num_params: f64,
    #[serde(rename = "minus2logL")]
    pub minus2_log_l: f64,
    pub aic: f64,
    pub bic: f64,
}

impl FitResult {
    pub(crate) fn new(num_params: f64, minus2_log_l: f64, n: usize) -> Self {
        Self {
            num_params,
            minus2_log_l,
            aic: minus2_log_l + 2.0 * num_params,
            bic: minus2_log_l + (n as f64).ln() * num_params,
        }
    }
}

impl fmt::Display for FitResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Number of parameters   -2*Log-likelihood        AIC        BIC")?;
        writeln!(
            f,
            "{:>20.4}{:>20.4}{:>11.4}{:>11.4}",
            self.num_params, self.minus2_log_l, self.aic, self.bic
        )
    }
}

/// Evidence for one edge: the deviance between the margin with and without
/// the edge, and the number of parameters the edge adds.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeEvidence {
    /// 1-based endpoints, `u < v`.
    pub u: usize,
    pub v: usize,
    /// 1-based conditioning set (empty for pairwise scores).
    pub separator: Vec<usize>,
    pub deviance: f64,
    pub df: f64,
    pub n: usize,
}

type ScoreFn = dyn Fn(&EdgeEvidence) -> f64 + Send + Sync;

/// Caller-supplied edge score. Negative values mark improving edges.
#[derive(Clone)]
pub struct UserMeasure {
    label: String,
    score: Arc<ScoreFn>,
}

impl UserMeasure {
    pub fn new<F>(label: impl Into<String>, score: F) -> Self
    where
        F: Fn(&EdgeEvidence) -> f64 + Send + Sync + 'static,
    {
        Self { label: label.into(), score: Arc::new(score) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for UserMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UserMeasure").field("label", &self.label).finish_non_exhaustive()
    }
}

/// Score minimised by the searches.
#[derive(Clone, Debug)]
pub enum Measure {
    Lr,
    Aic,
    Bic,
    User(UserMeasure),
}

impl Measure {
    pub fn kind(&self) -> MeasureKind {
        match self {
            Measure::Lr => MeasureKind::Lr,
            Measure::Aic => MeasureKind::Aic,
            Measure::Bic => MeasureKind::Bic,
            Measure::User(_) => MeasureKind::User,
        }
    }

    /// Change in the measure caused by adding the edge.
    pub fn score(&self, ev: &EdgeEvidence) -> f64 {
        match self {
            Measure::Lr => -ev.deviance,
            Measure::Aic => -ev.deviance + 2.0 * ev.df,
            Measure::Bic => -ev.deviance + (ev.n as f64).ln() * ev.df,
            Measure::User(u) => (u.score)(ev),
        }
    }

    pub(crate) fn user_label(&self) -> Option<String> {
        match self {
            Measure::User(u) => Some(u.label.clone()),
            _ => None,
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lr" => Ok(Measure::Lr),
            "aic" => Ok(Measure::Aic),
            "bic" => Ok(Measure::Bic),
            other => Err(Error::InvalidArgument(format!("unknown measure {other:?}"))),
        }
    }
}
