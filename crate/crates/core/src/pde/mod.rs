//! Finite-volume solves of the reduced Poisson problems
//! `−(u_rr + ((n+2)/r) u_r + u_ss) = source` on the `(r, s)` quarter plane.

mod convergence;
mod export;
mod field;
mod grid;
mod operator;
mod sandwich;
mod solver;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::Case;
use crate::exactfn::{ExactError, RationalFn};
use crate::profile::{ode_solve, Exponent, KernelProfile, ProfileError, ProfileFn};

pub use convergence::{convergence_study, ConvergenceReport, ConvergenceStudy};
pub use export::{read_binary, write_binary, write_csv, FieldData, FieldHeader};
pub use field::{solve, solve_profile, solve_with, FieldReport, HalfPlaneField, Problem};
pub use grid::{GridSpec, RadialGrid, SpacingSummary};
pub use operator::Stencil;
pub use sandwich::{sandwich_check, SandwichReport, Violation};
pub use solver::{PoissonSolver, SolveStats, RESIDUAL_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PdeError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid too coarse near the source peak: first spacing {spacing} > {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },
    #[error("solver did not converge: relative residual {residual:e} > {tolerance:e}")]
    NotConverged { residual: f64, tolerance: f64 },
    #[error("grids are not nested: {0}")]
    NotNested(String),
    #[error("no closed-form bounds registered for problem {0}")]
    NoBounds(String),
    #[error("dimension n = {n} outside the supported range (n >= {min})")]
    Domain { n: i64, min: i64 },
    #[error("field format: {0}")]
    Format(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

impl From<ExactError> for PdeError {
    fn from(e: ExactError) -> Self {
        PdeError::Profile(ProfileError::Exact(e))
    }
}

impl From<std::io::Error> for PdeError {
    fn from(e: std::io::Error) -> Self {
        PdeError::Io(e.to_string())
    }
}

/// Smallest dimension accepted by the tagged solves.
pub const MIN_DIMENSION: i64 = 6;

/// The named auxiliary problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProfileTag {
    V,
    Lambda,
    U1,
    U2,
    V1,
    V2,
    W1,
    W2,
}

/// Which closed-form bound supplies the Dirichlet data on `r = R` and `s = R`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FarField {
    #[default]
    Subsolution,
    Supersolution,
}

fn rf(s: &str) -> RationalFn {
    s.parse().expect("valid literal")
}

impl ProfileTag {
    pub const ALL: [ProfileTag; 8] = [
        ProfileTag::V,
        ProfileTag::Lambda,
        ProfileTag::U1,
        ProfileTag::U2,
        ProfileTag::V1,
        ProfileTag::V2,
        ProfileTag::W1,
        ProfileTag::W2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProfileTag::V => "V",
            ProfileTag::Lambda => "Lambda",
            ProfileTag::U1 => "u1",
            ProfileTag::U2 => "u2",
            ProfileTag::V1 => "v1",
            ProfileTag::V2 => "v2",
            ProfileTag::W1 => "w1",
            ProfileTag::W2 => "w2",
        }
    }

    pub fn case(self) -> Case {
        match self {
            ProfileTag::V | ProfileTag::U1 | ProfileTag::V1 | ProfileTag::W1 => Case::Nonumbilic,
            _ => Case::Umbilic,
        }
    }

    /// Right-hand side of `−Δu = source`.
    pub fn source(self) -> KernelProfile {
        let n_plus_2 = Exponent::affine(1, 2);
        let n_plus_4 = Exponent::affine(1, 4);
        let over_one_plus_s = |p: ProfileFn| p.shift_power(Exponent::int(-1));
        match self {
            ProfileTag::V => KernelProfile::new(ProfileFn::s_pow(1), n_plus_2),
            ProfileTag::Lambda => KernelProfile::new(ProfileFn::s_pow(2), n_plus_2),
            ProfileTag::U1 => {
                KernelProfile::new(ProfileFn::term(rf("1 / (2*n)"), Exponent::int(-3), false), Exponent::affine(1, 0))
            }
            ProfileTag::U2 => KernelProfile::new(
                (ProfileFn::one() - ProfileFn::power(Exponent::int(-3))).scale(&rf("1 / (3*n)")),
                Exponent::affine(1, 0),
            ),
            ProfileTag::V1 => KernelProfile::new(ProfileFn::s_pow(2), n_plus_4),
            ProfileTag::V2 => KernelProfile::new(ProfileFn::s_pow(3), n_plus_4),
            ProfileTag::W1 => KernelProfile::new(over_one_plus_s(ProfileFn::s_pow(2)), n_plus_4),
            ProfileTag::W2 => KernelProfile::new(over_one_plus_s(ProfileFn::s_pow(3)), n_plus_4),
        }
    }

    /// Closed-form lower bound `u ≥ f(s) ρ^{−α/2}`.
    pub fn subsolution(self) -> Result<KernelProfile, ProfileError> {
        let src = self.source();
        match self {
            ProfileTag::V | ProfileTag::Lambda => {
                Ok(KernelProfile::new(ode_solve(&RationalFn::n(), &src.profile)?, Exponent::affine(1, 0)))
            }
            ProfileTag::U1 | ProfileTag::U2 => Ok(KernelProfile::new(ProfileFn::zero(), Exponent::affine(1, 0))),
            _ => Ok(KernelProfile::new(ode_solve(&RationalFn::n_plus(2), &src.profile)?, Exponent::affine(1, 2))),
        }
    }

    /// Closed-form upper bound, where one is known.
    pub fn supersolution(self) -> Option<KernelProfile> {
        let quarter = rf("1 / (4*n)");
        match self {
            ProfileTag::V => Some(KernelProfile::new(ProfileFn::s_pow(1).scale(&quarter), Exponent::affine(1, 0))),
            ProfileTag::U1 => Some(KernelProfile::new(
                (ProfileFn::one() - ProfileFn::power(Exponent::int(-1))).scale(&quarter),
                Exponent::affine(1, 0),
            )),
            _ => None,
        }
    }

    /// Boundary data for the given far-field choice.
    pub fn far_field(self, far: FarField) -> Result<KernelProfile, PdeError> {
        match far {
            FarField::Subsolution => Ok(self.subsolution()?),
            FarField::Supersolution => {
                self.supersolution().ok_or_else(|| PdeError::NoBounds(format!("{self} (supersolution)")))
            }
        }
    }
}

impl fmt::Display for ProfileTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProfileTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t = match s.trim() {
            "V" | "v" => ProfileTag::V,
            "Lambda" | "lambda" | "L" | "Λ" => ProfileTag::Lambda,
            "u1" => ProfileTag::U1,
            "u2" => ProfileTag::U2,
            "v1" => ProfileTag::V1,
            "v2" => ProfileTag::V2,
            "w1" => ProfileTag::W1,
            "w2" => ProfileTag::W2,
            other => return Err(format!("unknown profile tag {other:?}")),
        };
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::neg_laplacian_bracket;

    #[test]
    fn subsolutions_match_closed_forms() {
        let n = 9;
        let sub = ProfileTag::V.subsolution().unwrap();
        let expect = |s: f64| s * s / (4.0 * 9.0 * (1.0 + s));
        let lambda = ProfileTag::Lambda.subsolution().unwrap();
        let v1 = ProfileTag::V1.subsolution().unwrap();
        let v2 = ProfileTag::V2.subsolution().unwrap();
        let w1 = ProfileTag::W1.subsolution().unwrap();
        let w2 = ProfileTag::W2.subsolution().unwrap();
        let c = 1.0 / (2.0 * 11.0);
        for s in [0.0, 0.3, 1.0, 7.5] {
            let t: f64 = 1.0 + s;
            let h1 = t.powi(3) / 3.0 - 1.5 * t * t + 3.0 * t - t.ln() - 11.0 / 6.0;
            let h2 = t * t / 2.0 - 3.0 * t + 3.0 * t.ln() + 1.0 / t + 1.5;
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-13 * (1.0 + b.abs());
            assert!(close(sub.profile.eval(s, n).unwrap(), expect(s)));
            assert!(close(lambda.profile.eval(s, n).unwrap(), s.powi(3) / (6.0 * 9.0 * t)));
            assert!(close(v1.profile.eval(s, n).unwrap(), c * (s * s / 2.0 - s + t.ln())));
            assert!(close(v2.profile.eval(s, n).unwrap(), c * h1));
            assert!(close(w1.profile.eval(s, n).unwrap(), c * (t - 2.0 * t.ln() - 1.0 / t)));
            assert!(close(w2.profile.eval(s, n).unwrap(), c * h2));
        }
    }

    #[test]
    fn u1_source_is_defect_of_v_subsolution() {
        let sub = ProfileTag::V.subsolution().unwrap();
        let br = neg_laplacian_bracket(&sub.profile, &RationalFn::n());
        assert_eq!(br.a, ProfileFn::s_pow(1));
        assert_eq!(br.b, ProfileTag::U1.source().profile);
    }

    #[test]
    fn tag_names_round_trip() {
        for t in ProfileTag::ALL {
            assert_eq!(t.name().parse::<ProfileTag>().unwrap(), t);
        }
        assert!("x9".parse::<ProfileTag>().is_err());
        assert!(ProfileTag::Lambda.far_field(FarField::Supersolution).is_err());
    }
}
