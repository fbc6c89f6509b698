//! Exact bound assemblies for the two dimension constants, their closed-form
//! identity checks, sign thresholds, and a sampled-LP subsolution optimizer.

pub mod chain;
mod identities;
mod optimize;
mod simplex;
mod threshold;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfn::{sign_scan, BetaConstant, DimensionRange, ExactError, RationalFn, ScanEntry};
use crate::profile::ProfileError;

pub use identities::{
    assembly_identities, chain_identities, ode_identities, reference_ode_solutions, verify_all, IdentityCheck,
    IdentityGroup,
};
pub use optimize::{optimize_subsolution, standard_basis, CandidateReport, OptimizeOptions, SubsolutionCandidate};
pub use simplex::{maximize, LpSolution};
pub use threshold::{threshold_report, ThresholdEntry, ThresholdReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("{target} total differs from its closed form by {difference}")]
    IdentityFailure { target: Target, difference: RationalFn },
    #[error("basis element {index} rejected: {reason}")]
    InvalidBasis { index: usize, reason: String },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("iteration budget of {0} pivots exhausted")]
    BudgetExhausted(usize),
}

/// Which geometric situation a constant belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// First constant: the boundary has a nonumbilic point; source `s`.
    Nonumbilic,
    /// Second constant: umbilic boundary; source `s²`.
    Umbilic,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Nonumbilic => "nonumbilic",
            Case::Umbilic => "umbilic",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nonumbilic" | "1" | "C1" => Ok(Case::Nonumbilic),
            "umbilic" | "2" | "C2" => Ok(Case::Umbilic),
            _ => Err(format!("unknown case '{s}' (expected nonumbilic or umbilic)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    #[serde(rename = "C1_lower")]
    C1Lower,
    #[serde(rename = "C1_upper")]
    C1Upper,
    #[serde(rename = "C2_lower")]
    C2Lower,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::C1Lower, Target::C1Upper, Target::C2Lower];

    pub fn name(self) -> &'static str {
        match self {
            Target::C1Lower => "C1_lower",
            Target::C1Upper => "C1_upper",
            Target::C2Lower => "C2_lower",
        }
    }

    pub fn case(self) -> Case {
        match self {
            Target::C1Lower | Target::C1Upper => Case::Nonumbilic,
            Target::C2Lower => Case::Umbilic,
        }
    }

    /// The closed-form total each assembly must reproduce.
    pub fn closed_form(self) -> RationalFn {
        let s = match self {
            Target::C1Lower => "(n^2 - 8*n - 5) / (4*(n + 2)*(n + 1)*(n - 1)^2*(n - 3))",
            Target::C1Upper => "(3*n^2 - 11*n - 6) / (8*(n + 1)*n*(n - 1)*(n - 2)*(n - 3))",
            Target::C2Lower => {
                "(3*n^3 - 24*n^2 + 27*n + 34) / (2*(n - 5)*(n - 4)*(n - 3)*(n - 2)*(n - 1)^2*(n + 1)*(n + 2))"
            }
        };
        s.parse().expect("valid literal")
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One additive term: `prefactor · integral`, or a bare constant when the
/// prefactor is one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub label: String,
    pub prefactor: RationalFn,
    pub integral: BetaConstant,
    pub anchor: String,
}

impl Contribution {
    pub fn new(label: &str, prefactor: RationalFn, integral: BetaConstant, anchor: &str) -> Self {
        assert!(!anchor.is_empty(), "contribution anchors must be nonempty");
        Contribution { label: label.into(), prefactor, integral, anchor: anchor.into() }
    }

    pub fn value(&self) -> BetaConstant {
        BetaConstant::new(&self.prefactor * &self.integral.coeff)
    }
}

/// Labeled ledger of contributions with their exact sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundAssembly {
    pub target: Target,
    pub contributions: Vec<Contribution>,
    pub total: BetaConstant,
}

impl BoundAssembly {
    pub fn new(target: Target, contributions: Vec<Contribution>) -> Self {
        let total = contributions.iter().map(|c| c.value().coeff).sum();
        BoundAssembly { target, contributions, total: BetaConstant::new(total) }
    }

    pub fn residual(&self) -> RationalFn {
        &self.total.coeff - &self.target.closed_form()
    }

    pub fn verify(&self) -> Result<(), BoundsError> {
        let difference = self.residual();
        if difference.is_zero() {
            Ok(())
        } else {
            Err(BoundsError::IdentityFailure { target: self.target, difference })
        }
    }

    pub fn contribution(&self, label: &str) -> Option<&Contribution> {
        self.contributions.iter().find(|c| c.label == label)
    }

    /// Multiplies the named contribution's integral by `factor`; used for
    /// fault-injection runs of the verifier.
    pub fn corrupt(&mut self, label: &str, factor: &RationalFn) -> bool {
        let Some(c) = self.contributions.iter_mut().find(|c| c.label == label) else {
            return false;
        };
        c.integral = BetaConstant::new(&c.integral.coeff * factor);
        *self = BoundAssembly::new(self.target, std::mem::take(&mut self.contributions));
        true
    }

    pub fn report(&self, range: DimensionRange) -> AssemblyReport {
        AssemblyReport {
            target: self.target,
            contributions: self
                .contributions
                .iter()
                .map(|c| ContributionReport {
                    label: c.label.clone(),
                    coeff: c.value().coeff.to_string(),
                    anchor: c.anchor.clone(),
                })
                .collect(),
            total_coeff: self.total.coeff.to_string(),
            closed_form_coeff: self.target.closed_form().to_string(),
            identity_ok: self.residual().is_zero(),
            sign_scan: sign_scan(&self.total.coeff, range)
                .into_iter()
                .map(|(n, e)| SignScanRow { n, sign: e.label().to_string(), entry: e })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContributionReport {
    pub label: String,
    pub coeff: String,
    pub anchor: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignScanRow {
    pub n: i64,
    pub sign: String,
    #[serde(skip)]
    pub entry: ScanEntry,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssemblyReport {
    pub target: Target,
    pub contributions: Vec<ContributionReport>,
    pub total_coeff: String,
    pub closed_form_coeff: String,
    pub identity_ok: bool,
    pub sign_scan: Vec<SignScanRow>,
}

pub const LEADING: &str = "leading term";
pub const LINEAR_MAIN: &str = "linear, main";
pub const LINEAR_CORRECTION: &str = "linear, correction";
pub const QUADRATIC_SQUARE: &str = "quadratic, square";
pub const QUADRATIC_CROSS: &str = "quadratic, cross";
pub const QUADRATIC_DISCARDED: &str = "quadratic, remainder squared (discarded, >= 0)";
pub const LINEAR_UPPER: &str = "linear upper";
pub const QUADRATIC_UPPER: &str = "quadratic upper";

fn lower_contributions(case: Case) -> Result<Vec<Contribution>, BoundsError> {
    let cd = chain::CaseData::new(case);
    let f = cd.subsolution()?;
    let (w, v) = match case {
        Case::Nonumbilic => ("x_n^2 |x+e_n|^(-n-4)", "V"),
        Case::Umbilic => ("x_n^3 |x+e_n|^(-n-4)", "Lambda"),
    };
    let cross = chain::quadratic_cross(&cd, &f, None)?
        .ok_or_else(|| BoundsError::Infeasible("cross-term adjoint profile is not expressible".into()))?;
    Ok(vec![
        Contribution::new(
            LEADING,
            RationalFn::one(),
            BetaConstant::new(cd.leading.clone()),
            "leading coefficient of the volume expansion",
        ),
        Contribution::new(
            LINEAR_MAIN,
            cd.linear_prefactor.clone(),
            chain::linear_main(&cd, &f)?,
            &format!("int {w} * [f(s) |x+e_n|^(-n)] x_1^4, f = {f}"),
        ),
        Contribution::new(
            LINEAR_CORRECTION,
            cd.linear_prefactor.clone(),
            chain::linear_correction(&cd, &f)?,
            &format!("int {w} * ({v} - f |x+e_n|^(-n)) x_1^4 via the adjoint subsolution {}", cd.adjoint_profile()?),
        ),
        Contribution::new(
            QUADRATIC_SQUARE,
            cd.quadratic_prefactor.clone(),
            chain::quadratic_square(&f)?,
            "int |x+e_n|^(-4) [f(s) |x+e_n|^(-n)]^2 x_1^4",
        ),
        Contribution::new(
            QUADRATIC_CROSS,
            cd.quadratic_prefactor.clone(),
            cross,
            &format!(
                "2 int |x+e_n|^(-4) f |x+e_n|^(-n) ({v} - f |x+e_n|^(-n)) x_1^4 via the adjoint problem with source 2f"
            ),
        ),
        Contribution::new(
            QUADRATIC_DISCARDED,
            cd.quadratic_prefactor.clone(),
            BetaConstant::zero(),
            &format!("int |x+e_n|^(-4) ({v} - f |x+e_n|^(-n))^2 x_1^4 >= 0, dropped"),
        ),
    ])
}

fn upper_contributions() -> Result<Vec<Contribution>, BoundsError> {
    let cd = chain::CaseData::new(Case::Nonumbilic);
    let sup = chain::supersolution();
    Ok(vec![
        Contribution::new(
            LEADING,
            RationalFn::one(),
            BetaConstant::new(cd.leading.clone()),
            "leading coefficient of the volume expansion",
        ),
        Contribution::new(
            LINEAR_UPPER,
            cd.linear_prefactor.clone(),
            chain::linear_main(&cd, &sup)?,
            &format!("int x_n^2 |x+e_n|^(-n-4) V x_1^4 with V <= {sup} |x+e_n|^(-n)"),
        ),
        Contribution::new(
            QUADRATIC_UPPER,
            cd.quadratic_prefactor.clone(),
            chain::quadratic_square(&sup)?,
            &format!("int |x+e_n|^(-4) V^2 x_1^4 with V <= {sup} |x+e_n|^(-n)"),
        ),
    ])
}

/// Builds an assembly without checking its closed form.
pub(crate) fn build(target: Target) -> Result<BoundAssembly, BoundsError> {
    let contributions = match target {
        Target::C1Lower => lower_contributions(Case::Nonumbilic)?,
        Target::C1Upper => upper_contributions()?,
        Target::C2Lower => lower_contributions(Case::Umbilic)?,
    };
    Ok(BoundAssembly::new(target, contributions))
}

/// Builds the assembly for `target` and checks its total against the closed
/// form as an exact identity.
pub fn assemble(target: Target) -> Result<BoundAssembly, BoundsError> {
    let a = build(target)?;
    a.verify()?;
    Ok(a)
}

pub fn assemble_c1_lower() -> Result<BoundAssembly, BoundsError> {
    assemble(Target::C1Lower)
}

pub fn assemble_c1_upper() -> Result<BoundAssembly, BoundsError> {
    assemble(Target::C1Upper)
}

pub fn assemble_c2_lower() -> Result<BoundAssembly, BoundsError> {
    assemble(Target::C2Lower)
}
