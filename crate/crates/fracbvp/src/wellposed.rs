//! The 3x3 classification of fractional equation forms against Neumann-type
//! boundary conditions, the compatibility constraints of the solvable cells,
//! and the obstruction certificates of the unsolvable ones.
//!
//! Five of the nine combinations admit solutions; the other four fail for
//! generic boundary data, each with a concrete closed-form obstruction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{singular_pairing, Profile};
use crate::special::{gamma, FracOrder, Side};

/// The three forms of the order-(2-beta) equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationForm {
    /// `-CaputoD^(2-beta) u = f`
    Caputo,
    /// `-D(CaputoD^(1-beta) u) = f`, flux-divergence structure
    ConservativeCaputo,
    /// `-RlD^(2-beta) u = f`
    RiemannLiouville,
}

/// The three Neumann-type boundary conditions: which flux is prescribed at
/// the endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcType {
    /// `Du = a0, a1`
    Classical,
    /// `CaputoD^(1-beta) u = a0, a1`
    Caputo,
    /// `RlD^(1-beta) u = a0, a1`
    RiemannLiouville,
}

pub const ALL_FORMS: [EquationForm; 3] = [
    EquationForm::Caputo,
    EquationForm::ConservativeCaputo,
    EquationForm::RiemannLiouville,
];

pub const ALL_BCS: [BcType; 3] = [BcType::Classical, BcType::Caputo, BcType::RiemannLiouville];

/// A fully specified boundary-value problem.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub form: EquationForm,
    pub bc: BcType,
    pub order: FracOrder,
    pub f: Profile,
    pub a0: f64,
    pub a1: f64,
    /// Grid resolution used by sampled data and residual checks.
    pub n: usize,
}

impl ProblemSpec {
    pub fn new(
        form: EquationForm,
        bc: BcType,
        beta: f64,
        f: Profile,
        a0: f64,
        a1: f64,
        n: usize,
    ) -> Result<Self> {
        let order = FracOrder::new(beta)?;
        if n < crate::grid::MIN_INTERVALS {
            return Err(Error::InvalidInput(format!(
                "resolution n = {n} below minimum {}",
                crate::grid::MIN_INTERVALS
            )));
        }
        if !(a0.is_finite() && a1.is_finite()) {
            return Err(Error::InvalidInput("boundary data must be finite".into()));
        }
        Ok(Self { form, bc, order, f, a0, a1, n })
    }
}

/// Solvability status of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    WellPosedUpToConstant,
    WellPosedUpToSingularKernel,
    UniqueSolution,
    IllPosedInGeneral,
}

impl Status {
    pub fn is_well_posed(self) -> bool {
        !matches!(self, Status::IllPosedInGeneral)
    }
}

/// Which linear constraint on `(f, a0, a1)` the cell requires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `<f, (1-x)^(-beta)> + Gamma(1-beta) (a1 - a0) = 0`
    WeightedPairing,
    /// `<f, 1> + a1 - a0 = 0`
    PlainIntegral,
    None,
}

pub const KERNEL_CONSTANT: &str = "additive constant";
pub const KERNEL_SINGULAR: &str = "C*x^(-beta)";

/// Classification outcome for one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub form: EquationForm,
    pub bc: BcType,
    pub status: Status,
    /// Description of the nonuniqueness family, when there is one.
    pub kernel: Option<String>,
    pub constraint_kind: ConstraintKind,
    /// Residual of the constraint for concrete data; `None` in the data-free
    /// table.
    pub constraint_residual: Option<f64>,
    pub certificate: String,
}

/// The fixed nine-cell table.
///
/// Both lines of each boundary condition prescribe the left-sided flux
/// operator, evaluated at `x = 0` and `x = 1`; that is the convention under
/// which the closed-form families below meet their boundary data.
pub fn classify(form: EquationForm, bc: BcType) -> Verdict {
    use BcType as B;
    use EquationForm as E;
    let (status, kernel, constraint_kind, certificate): (Status, Option<&str>, ConstraintKind, &str) =
        match (form, bc) {
            (E::Caputo, B::Classical) => (
                Status::WellPosedUpToConstant,
                Some(KERNEL_CONSTANT),
                ConstraintKind::WeightedPairing,
                "unique mean-zero solution once <f,(1-x)^(-beta)> + Gamma(1-beta)(a1-a0) = 0; \
                 general solution adds an arbitrary constant",
            ),
            (E::Caputo, B::Caputo) | (E::Caputo, B::RiemannLiouville) => (
                Status::IllPosedInGeneral,
                None,
                ConstraintKind::None,
                "the Caputo flux of every solution of the non-conservative Caputo equation \
                 vanishes at x = 0, so a0 != 0 cannot be matched; no solution in general",
            ),
            (E::ConservativeCaputo, B::Caputo) => (
                Status::WellPosedUpToConstant,
                Some(KERNEL_CONSTANT),
                ConstraintKind::PlainIntegral,
                "unique mean-zero solution once <f,1> + a1 - a0 = 0; general solution adds \
                 an arbitrary constant",
            ),
            (E::ConservativeCaputo, B::RiemannLiouville) => (
                Status::UniqueSolution,
                None,
                ConstraintKind::PlainIntegral,
                "unique solution: the RL flux condition at x = 0 kills both free constants \
                 of the flux-form family",
            ),
            (E::ConservativeCaputo, B::Classical) => (
                Status::IllPosedInGeneral,
                None,
                ConstraintKind::None,
                "reducing to a Dirichlet problem for the slope w = Du leaves a forcing term \
                 a0(beta-1)/(Gamma(beta) x^(2-beta)) too singular for a weak solution; \
                 solvable if and only if a0 = 0",
            ),
            (E::RiemannLiouville, B::RiemannLiouville) => (
                Status::WellPosedUpToSingularKernel,
                Some(KERNEL_SINGULAR),
                ConstraintKind::PlainIntegral,
                "x^(-beta) solves the homogeneous problem, so solutions form a one-parameter \
                 family u* + C x^(-beta); u* is fixed by a mean-zero condition on I^beta u",
            ),
            (E::RiemannLiouville, B::Caputo) => (
                Status::UniqueSolution,
                None,
                ConstraintKind::PlainIntegral,
                "unique solution with u(0) = 0: the Caputo flux is undefined on the singular \
                 kernel, which removes the x^(-beta) freedom",
            ),
            (E::RiemannLiouville, B::Classical) => (
                Status::IllPosedInGeneral,
                None,
                ConstraintKind::None,
                "every solution has slope Du ~ C0/(Gamma(1-beta) x^beta) near x = 0, so a \
                 finite prescribed Du(0) = a0 != 0 cannot be matched; no solution in general",
            ),
        };
    Verdict {
        form,
        bc,
        status,
        kernel: kernel.map(str::to_owned),
        constraint_kind,
        constraint_residual: None,
        certificate: certificate.to_owned(),
    }
}

/// All nine cells in a fixed order (forms outer, boundary conditions inner).
pub fn classification_table() -> Vec<Verdict> {
    let mut cells = Vec::with_capacity(9);
    for form in ALL_FORMS {
        for bc in ALL_BCS {
            cells.push(classify(form, bc));
        }
    }
    cells
}

/// Residual of the cell's compatibility constraint for concrete data.
///
/// Weighted cells return `<f,(1-x)^(-beta)> + Gamma(1-beta)(a1-a0)`; plain
/// cells return `<f,1> + a1 - a0`. Cells without a constraint are rejected.
pub fn compatibility_residual(spec: &ProblemSpec) -> Result<f64> {
    match classify(spec.form, spec.bc).constraint_kind {
        ConstraintKind::WeightedPairing => {
            let pairing = singular_pairing(&spec.f, spec.order.beta(), Side::Right)?;
            Ok(pairing + gamma(1.0 - spec.order.beta())? * (spec.a1 - spec.a0))
        }
        ConstraintKind::PlainIntegral => Ok(spec.f.integral()? + spec.a1 - spec.a0),
        ConstraintKind::None => Err(Error::Unconstrained),
    }
}

/// Structured evidence that an ill-posed cell rejects the given data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub form: EquationForm,
    pub bc: BcType,
    /// The necessary condition on the data, always `a0 = 0` here.
    pub condition: String,
    /// Whether the supplied data satisfy that condition.
    pub condition_met: bool,
    /// Coefficient of the obstruction term, when the cell has a concrete one.
    pub obstruction_coefficient: Option<f64>,
    /// Exponent of `x` in the obstruction term.
    pub obstruction_exponent: Option<f64>,
    pub detail: String,
}

/// Produce the cell's obstruction certificate. Fails on well-posed cells.
pub fn illposedness_certificate(spec: &ProblemSpec) -> Result<Certificate> {
    let beta = spec.order.beta();
    let a0 = spec.a0;
    use BcType as B;
    use EquationForm as E;
    let cert = match (spec.form, spec.bc) {
        (E::ConservativeCaputo, B::Classical) => {
            // Splitting off the boundary interpolant of the induced Dirichlet
            // problem for w = Du moves the data into the forcing term
            //   f_b = (a1-a0)(1+beta)/(Gamma(beta) x^(1-beta))
            //       + a0 (beta-1)/(Gamma(beta) x^(2-beta)).
            // The first term is integrable; the second is not weak-admissible
            // unless its coefficient vanishes.
            let coef = a0 * (beta - 1.0) / gamma(beta)?;
            Certificate {
                form: spec.form,
                bc: spec.bc,
                condition: "a0 = 0".into(),
                condition_met: a0 == 0.0,
                obstruction_coefficient: Some(coef),
                obstruction_exponent: Some(beta - 2.0),
                detail: format!(
                    "slope w = Du satisfies a Dirichlet problem with forcing shifted by \
                     f_b; its second term {coef}*x^({}) falls outside the admissible dual \
                     space unless a0 = 0; solvable if and only if a0 = 0 (here a0 = {a0})",
                    beta - 2.0
                ),
            }
        }
        (E::Caputo, B::Caputo) | (E::Caputo, B::RiemannLiouville) => {
            // Integrating the equation twice gives the family
            //   u = I^(2-beta)(-f) + C0 x + C1,
            // whose Caputo flux CaputoD^(1-beta) u = I^1(-f) + C0 x^beta/Gamma(1+beta)
            // vanishes at x = 0 for every C0, C1; the RL flux additionally
            // carries C1/(Gamma(beta) x^(1-beta)), which must be dropped for
            // a finite endpoint value. Either way a0 = 0 is forced.
            Certificate {
                form: spec.form,
                bc: spec.bc,
                condition: "a0 = 0".into(),
                condition_met: a0 == 0.0,
                obstruction_coefficient: None,
                obstruction_exponent: None,
                detail: if a0 == 0.0 {
                    "the fractional flux of the solution family vanishes at x = 0, matching \
                     a0 = 0; this special case is solvable"
                        .into()
                } else {
                    format!(
                        "the fractional flux of every solution vanishes at x = 0, so the \
                         prescribed a0 = {a0} cannot be matched; no solution exists"
                    )
                },
            }
        }
        (E::RiemannLiouville, B::Classical) => {
            // From the closed-form family, Du = x^(1-beta)-type regular part
            // plus C0/(Gamma(1-beta) x^beta) (+ an even steeper C1 term): a
            // finite classical slope at x = 0 forces C0 = C1 = 0 and then
            // Du(0) = 0, so a0 != 0 is unreachable.
            let coef = a0 / gamma(1.0 - beta)?;
            Certificate {
                form: spec.form,
                bc: spec.bc,
                condition: "a0 = 0".into(),
                condition_met: a0 == 0.0,
                obstruction_coefficient: Some(coef),
                obstruction_exponent: Some(-beta),
                detail: format!(
                    "matching Du(0) = a0 needs the singular slope term {coef}*x^(-{beta}), \
                     which no admissible solution carries; a0 = 0 is necessary (here a0 = {a0})"
                ),
            }
        }
        _ => return Err(Error::CertificateUnavailable),
    };
    Ok(cert)
}

/// Classify and, where a constraint exists, evaluate its residual for the
/// given data.
pub fn classify_with_data(spec: &ProblemSpec) -> Result<Verdict> {
    let mut verdict = classify(spec.form, spec.bc);
    if verdict.constraint_kind != ConstraintKind::None {
        verdict.constraint_residual = Some(compatibility_residual(spec)?);
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::PowerSum;
    use approx::assert_relative_eq;

    fn spec(form: EquationForm, bc: BcType, f: Profile, a0: f64, a1: f64) -> ProblemSpec {
        ProblemSpec::new(form, bc, 0.5, f, a0, a1, 64).unwrap()
    }

    #[test]
    fn table_shape() {
        let table = classification_table();
        assert_eq!(table.len(), 9);
        let well_posed = table.iter().filter(|v| v.status.is_well_posed()).count();
        assert_eq!(well_posed, 5);
        let ill = table
            .iter()
            .filter(|v| v.status == Status::IllPosedInGeneral)
            .count();
        assert_eq!(ill, 4);
        let singular = table
            .iter()
            .filter(|v| v.kernel.as_deref() == Some(KERNEL_SINGULAR))
            .count();
        assert_eq!(singular, 1);
        let constants = table
            .iter()
            .filter(|v| v.kernel.as_deref() == Some(KERNEL_CONSTANT))
            .count();
        assert_eq!(constants, 2);
        let unique = table
            .iter()
            .filter(|v| v.status == Status::UniqueSolution)
            .count();
        assert_eq!(unique, 2);
        for v in &table {
            // Kernel string and status agree; ill-posed cells explain themselves.
            assert_eq!(
                v.status == Status::WellPosedUpToSingularKernel,
                v.kernel.as_deref() == Some(KERNEL_SINGULAR)
            );
            if v.status == Status::IllPosedInGeneral {
                assert!(!v.certificate.is_empty());
                assert_eq!(v.constraint_kind, ConstraintKind::None);
            } else {
                assert_ne!(v.constraint_kind, ConstraintKind::None);
            }
        }
    }

    #[test]
    fn expected_cells() {
        let v = classify(EquationForm::RiemannLiouville, BcType::RiemannLiouville);
        assert_eq!(v.status, Status::WellPosedUpToSingularKernel);
        assert_eq!(v.kernel.as_deref(), Some(KERNEL_SINGULAR));

        let v = classify(EquationForm::ConservativeCaputo, BcType::Classical);
        assert_eq!(v.status, Status::IllPosedInGeneral);

        let v = classify(EquationForm::Caputo, BcType::Classical);
        assert_eq!(v.status, Status::WellPosedUpToConstant);
        assert_eq!(v.constraint_kind, ConstraintKind::WeightedPairing);

        let v = classify(EquationForm::RiemannLiouville, BcType::Caputo);
        assert_eq!(v.status, Status::UniqueSolution);

        let v = classify(EquationForm::ConservativeCaputo, BcType::RiemannLiouville);
        assert_eq!(v.status, Status::UniqueSolution);
        assert_eq!(v.constraint_kind, ConstraintKind::PlainIntegral);
    }

    #[test]
    fn weighted_residual_for_constant_source() {
        // f = -1, beta = 0.5: residual = -2 + sqrt(pi) (a1 - a0), zero iff
        // a1 - a0 = 1/Gamma(1.5).
        let delta = 1.0 / gamma(1.5).unwrap();
        let s = spec(EquationForm::Caputo, BcType::Classical, Profile::constant(-1.0), 0.0, delta);
        assert_relative_eq!(compatibility_residual(&s).unwrap(), 0.0, epsilon = 1e-12);
        let s = spec(EquationForm::Caputo, BcType::Classical, Profile::constant(-1.0), 0.0, 0.0);
        assert_relative_eq!(compatibility_residual(&s).unwrap(), -2.0, epsilon = 1e-12);
        // 1/Gamma(3/2) = 2/sqrt(pi); the std constant is an independent oracle.
        assert_relative_eq!(delta, std::f64::consts::FRAC_2_SQRT_PI, epsilon = 1e-13);
    }

    #[test]
    fn plain_residual_for_constant_source() {
        let s = spec(
            EquationForm::ConservativeCaputo,
            BcType::Caputo,
            Profile::constant(-1.0),
            0.2,
            1.2,
        );
        assert_relative_eq!(compatibility_residual(&s).unwrap(), 0.0, epsilon = 1e-14);
        let s = spec(
            EquationForm::ConservativeCaputo,
            BcType::Caputo,
            Profile::constant(-1.0),
            0.0,
            0.0,
        );
        assert_relative_eq!(compatibility_residual(&s).unwrap(), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_data_is_compatible_everywhere() {
        for form in ALL_FORMS {
            for bc in ALL_BCS {
                if classify(form, bc).constraint_kind == ConstraintKind::None {
                    continue;
                }
                let s = spec(form, bc, Profile::Exact(PowerSum::zero()), 0.0, 0.0);
                assert_eq!(compatibility_residual(&s).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn residual_is_linear_in_the_data() {
        for (form, bc) in [
            (EquationForm::Caputo, BcType::Classical),
            (EquationForm::ConservativeCaputo, BcType::Caputo),
            (EquationForm::RiemannLiouville, BcType::RiemannLiouville),
        ] {
            let base = spec(
                form,
                bc,
                Profile::Exact(PowerSum::single(2.0, 1.0, Side::Left)),
                0.4,
                -0.7,
            );
            let r1 = compatibility_residual(&base).unwrap();
            let c = -3.5;
            let scaled = spec(
                form,
                bc,
                Profile::Exact(PowerSum::single(2.0 * c, 1.0, Side::Left)),
                0.4 * c,
                -0.7 * c,
            );
            let rc = compatibility_residual(&scaled).unwrap();
            assert_relative_eq!(rc, c * r1, max_relative = 1e-12);
        }
    }

    #[test]
    fn shifting_f_by_the_residual_closes_plain_constraints() {
        let s = spec(
            EquationForm::ConservativeCaputo,
            BcType::Caputo,
            Profile::Exact(PowerSum::single(1.0, 2.0, Side::Left)),
            0.3,
            -0.9,
        );
        let r = compatibility_residual(&s).unwrap();
        let shifted = spec(
            EquationForm::ConservativeCaputo,
            BcType::Caputo,
            Profile::Exact(
                PowerSum::single(1.0, 2.0, Side::Left).add(&PowerSum::constant(-r)),
            ),
            0.3,
            -0.9,
        );
        assert_relative_eq!(compatibility_residual(&shifted).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn certificate_for_conservative_classical() {
        let s = spec(
            EquationForm::ConservativeCaputo,
            BcType::Classical,
            Profile::constant(-1.0),
            0.3,
            1.3,
        );
        let cert = illposedness_certificate(&s).unwrap();
        assert!(!cert.condition_met);
        let beta = 0.5;
        assert_relative_eq!(
            cert.obstruction_coefficient.unwrap(),
            0.3 * (beta - 1.0) / gamma(beta).unwrap(),
            max_relative = 1e-13
        );
        assert_relative_eq!(cert.obstruction_exponent.unwrap(), beta - 2.0);
    }

    #[test]
    fn certificate_marks_zero_a0_special_case() {
        let s = spec(
            EquationForm::Caputo,
            BcType::Caputo,
            Profile::constant(-1.0),
            0.0,
            1.0,
        );
        let cert = illposedness_certificate(&s).unwrap();
        assert!(cert.condition_met);
        assert!(cert.detail.contains("solvable"));
    }

    #[test]
    fn certificate_unavailable_for_well_posed_cells() {
        let s = spec(
            EquationForm::Caputo,
            BcType::Classical,
            Profile::constant(0.0),
            0.0,
            0.0,
        );
        assert!(matches!(
            illposedness_certificate(&s),
            Err(Error::CertificateUnavailable)
        ));
    }
}
