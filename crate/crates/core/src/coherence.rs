//! Lower bounds on coherence measures from the same single-fidelity data.
//!
//! The reference state `phi` is now profiled against a fixed orthonormal
//! basis instead of against bipartitions: the relevant number is its largest
//! squared basis amplitude `|d_max|^2`, and the certified ratio is
//! `D = max(F / |d_max|^2, 1)` with `1 <= D <= m` for an `m`-dimensional
//! space. `D > 1` certifies coherence; three measure-specific bounds
//! quantify it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gme::{BoundValue, gamma};
use crate::tensor::{DensityOperator, PureState, VALIDATION_TOL, fidelity_pure};

#[derive(Debug, Clone)]
enum BasisKind {
    Computational,
    Custom(DMatrix<C64>),
}

/// The incoherent reference basis. Either the computational product basis
/// or an explicit unitary whose columns are the basis vectors.
#[derive(Debug, Clone)]
pub struct Basis {
    kind: BasisKind,
}

impl Basis {
    pub fn computational() -> Self {
        Basis {
            kind: BasisKind::Computational,
        }
    }

    /// A custom basis given by the columns of `mat`, which must be unitary.
    pub fn custom(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let gram = mat.adjoint() * &mat;
        let mut dev = 0.0f64;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let expect = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                dev = dev.max((gram[(i, j)] - expect).norm());
            }
        }
        if dev > VALIDATION_TOL {
            return Err(Error::BasisNotOrthonormal { deviation: dev });
        }
        Ok(Basis {
            kind: BasisKind::Custom(mat),
        })
    }

    pub fn is_computational(&self) -> bool {
        matches!(self.kind, BasisKind::Computational)
    }

    /// Amplitudes of `psi` in this basis.
    pub fn amplitudes_of(&self, psi: &PureState) -> Result<DVector<C64>> {
        match &self.kind {
            BasisKind::Computational => Ok(psi.amplitudes().clone()),
            BasisKind::Custom(mat) => {
                if mat.nrows() != psi.dim() {
                    return Err(Error::DimensionMismatch {
                        left: vec![mat.nrows()],
                        right: vec![psi.dim()],
                    });
                }
                Ok(mat.adjoint() * psi.amplitudes())
            }
        }
    }
}

/// The coherence analogue of the Schmidt profile: the largest squared basis
/// amplitude of the reference state and the space dimension.
#[derive(Debug, Clone, Copy)]
pub struct CoherenceProfile {
    pub d_max_sq: f64,
    pub m: usize,
}

/// Profiles `phi` against the given incoherent basis.
pub fn coherence_profile(phi: &PureState, basis: &Basis) -> Result<CoherenceProfile> {
    let amps = basis.amplitudes_of(phi)?;
    let d_max_sq = amps.iter().map(|a| a.norm_sqr()).fold(0.0f64, f64::max);
    Ok(CoherenceProfile {
        d_max_sq,
        m: phi.dim(),
    })
}

/// The certified ratio `D = max(F / |d_max|^2, 1)`.
pub fn d_value(fidelity: f64, d_max_sq: f64) -> Result<f64> {
    if !(-VALIDATION_TOL..=1.0 + VALIDATION_TOL).contains(&fidelity) {
        return Err(Error::OutOfDomain {
            name: "fidelity",
            value: fidelity,
            domain: "[0, 1]",
        });
    }
    if !(d_max_sq > 0.0 && d_max_sq <= 1.0 + VALIDATION_TOL) {
        return Err(Error::OutOfDomain {
            name: "|d_max|^2",
            value: d_max_sq,
            domain: "(0, 1]",
        });
    }
    Ok((fidelity.clamp(0.0, 1.0) / d_max_sq).max(1.0))
}

/// Lower bound `D - 1` on the convex-roof l1 coherence.
pub fn l1_lb(d: f64) -> f64 {
    debug_assert!(d >= 1.0);
    d - 1.0
}

/// Lower bound `1 - gamma(D, m)` on the geometric coherence.
pub fn geom_coherence_lb(d: f64, m: usize) -> Result<f64> {
    Ok(1.0 - gamma(d, m)?)
}

/// Binary Shannon entropy in bits, with the conventional continuous
/// extension `H(0) = H(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-VALIDATION_TOL..=1.0 + VALIDATION_TOL).contains(&x) {
        return Err(Error::OutOfDomain {
            name: "probability",
            value: x,
            domain: "[0, 1]",
        });
    }
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Which regime of the coherence-of-formation bound applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormationBranch {
    /// `D <= 4(m-1)/m`: entropy form `H(gamma) + (1 - gamma) log2(m-1)`.
    Entropy,
    /// `D >= 4(m-1)/m`: linear form `(D - m) log2(m-1)/(m-2) + log2(m)`.
    Linear,
}

impl FormationBranch {
    pub fn index(self) -> u8 {
        match self {
            FormationBranch::Entropy => 1,
            FormationBranch::Linear => 2,
        }
    }
}

/// Lower bound on the coherence of formation. Piecewise in `D` with the two
/// pieces meeting continuously at `D = 4(m-1)/m`; returns the value together
/// with the branch that produced it.
pub fn formation_lb(d: f64, m: usize) -> Result<(f64, FormationBranch)> {
    if m < 2 {
        return Err(Error::OutOfDomain {
            name: "m",
            value: m as f64,
            domain: "[2, inf)",
        });
    }
    let mf = m as f64;
    if !(1.0 - VALIDATION_TOL..=mf + VALIDATION_TOL).contains(&d) {
        return Err(Error::OutOfDomain {
            name: "D",
            value: d,
            domain: "[1, m]",
        });
    }
    let d = d.clamp(1.0, mf);
    let threshold = 4.0 * (mf - 1.0) / mf;
    if d <= threshold {
        let g = gamma(d, m)?;
        let val = binary_entropy(g)? + (1.0 - g) * (mf - 1.0).log2();
        Ok((val.max(0.0), FormationBranch::Entropy))
    } else {
        // threshold < d requires m >= 3, so the divisor is safe
        let val = (d - mf) * (mf - 1.0).log2() / (mf - 2.0) + mf.log2();
        Ok((val.max(0.0), FormationBranch::Linear))
    }
}

/// Expectation value `|d_max|^2 - <phi| rho |phi>` of the coherence witness
/// built from the reference state. Negative iff `D > 1`.
pub fn coherence_witness_value(
    rho: &DensityOperator,
    phi: &PureState,
    profile: &CoherenceProfile,
) -> Result<f64> {
    let f = fidelity_pure(rho, phi)?;
    Ok(profile.d_max_sq - f)
}

/// Everything the fidelity certifies about coherence measures of the
/// measured state, relative to one reference profile.
#[derive(Debug, Clone)]
pub struct CoherenceBoundReport {
    pub fidelity: f64,
    pub d_max_sq: f64,
    pub m: usize,
    pub d: f64,
    pub witness_value: f64,
    pub l1: BoundValue,
    pub geometric: BoundValue,
    pub formation: BoundValue,
    pub formation_branch: FormationBranch,
}

/// Evaluates all three coherence lower bounds from a fidelity measurement.
pub fn coherence_bounds_from_fidelity(
    fidelity: f64,
    profile: &CoherenceProfile,
) -> Result<CoherenceBoundReport> {
    let d = d_value(fidelity, profile.d_max_sq)?;
    let (formation, branch) = formation_lb(d, profile.m)?;
    Ok(CoherenceBoundReport {
        fidelity: fidelity.clamp(0.0, 1.0),
        d_max_sq: profile.d_max_sq,
        m: profile.m,
        d,
        witness_value: profile.d_max_sq - fidelity.clamp(0.0, 1.0),
        l1: BoundValue::floored(l1_lb(d)),
        geometric: BoundValue::floored(geom_coherence_lb(d, profile.m)?),
        formation: BoundValue::floored(formation),
        formation_branch: branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, w_state};
    use crate::tensor::PureState;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn computational_profile_of_ghz() {
        let phi = ghz(3).unwrap();
        let prof = coherence_profile(&phi, &Basis::computational()).unwrap();
        assert_abs_diff_eq!(prof.d_max_sq, 0.5, epsilon = 1e-14);
        assert_eq!(prof.m, 8);
    }

    #[test]
    fn custom_basis_must_be_unitary() {
        let mut m = DMatrix::identity(4, 4);
        assert!(Basis::custom(m.clone()).is_ok());
        m[(0, 0)] = C64::new(2.0, 0.0);
        assert!(matches!(
            Basis::custom(m),
            Err(Error::BasisNotOrthonormal { .. })
        ));
    }

    #[test]
    fn custom_basis_rotates_profile() {
        // measuring GHZ3 against the basis containing itself: |d_max|^2 = 1
        let phi = ghz(3).unwrap();
        let mut cols = DMatrix::identity(8, 8);
        let a = 1.0 / 2f64.sqrt();
        cols[(0, 0)] = C64::new(a, 0.0);
        cols[(7, 0)] = C64::new(a, 0.0);
        cols[(0, 7)] = C64::new(a, 0.0);
        cols[(7, 7)] = C64::new(-a, 0.0);
        let basis = Basis::custom(cols).unwrap();
        let prof = coherence_profile(&phi, &basis).unwrap();
        assert_abs_diff_eq!(prof.d_max_sq, 1.0, epsilon = 1e-14);
        // fully coherent w.r.t. this basis is impossible to certify: D = 1
        let rep = coherence_bounds_from_fidelity(1.0, &prof).unwrap();
        assert_eq!(rep.l1.value, 0.0);
    }

    #[test]
    fn maximally_coherent_state_saturates() {
        // |+>^n has |d_max|^2 = 1/m; F = 1 gives D = m
        let n = 3;
        let m = 1usize << n;
        let amps = DVector::from_element(m, C64::new(1.0 / (m as f64).sqrt(), 0.0));
        let phi = PureState::new(vec![2; n], amps).unwrap();
        let prof = coherence_profile(&phi, &Basis::computational()).unwrap();
        let rep = coherence_bounds_from_fidelity(1.0, &prof).unwrap();
        assert_abs_diff_eq!(rep.d, m as f64, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.l1.value, m as f64 - 1.0, epsilon = 1e-9);
        // gamma has square-root slope at D = m, so the last-ulp error in
        // |d_max|^2 shows up amplified to ~1e-8 here
        assert_abs_diff_eq!(rep.geometric.value, 1.0 - 1.0 / m as f64, epsilon = 1e-7);
        assert_abs_diff_eq!(rep.formation.value, (m as f64).log2(), epsilon = 1e-9);
        assert_eq!(rep.formation_branch, FormationBranch::Linear);
    }

    #[test]
    fn formation_branches_meet_continuously() {
        for m in [3usize, 4, 8, 16, 64] {
            let mf = m as f64;
            let dstar = 4.0 * (mf - 1.0) / mf;
            let (v1, b1) = formation_lb(dstar, m).unwrap();
            let g = gamma(dstar, m).unwrap();
            let entropy_side = binary_entropy(g).unwrap() + (1.0 - g) * (mf - 1.0).log2();
            let linear_side = (dstar - mf) * (mf - 1.0).log2() / (mf - 2.0) + mf.log2();
            assert_eq!(b1, FormationBranch::Entropy);
            assert_abs_diff_eq!(v1, entropy_side, epsilon = 1e-13);
            assert_abs_diff_eq!(entropy_side, linear_side, epsilon = 1e-10);
        }
    }

    #[test]
    fn formation_on_qubits_never_needs_the_linear_branch() {
        // m = 2: the branch point is D = 2 = m, so the entropy form covers
        // the whole domain and equals 1 bit at the top
        let (v, b) = formation_lb(2.0, 2).unwrap();
        assert_eq!(b, FormationBranch::Entropy);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
        let (v, _) = formation_lb(1.0, 2).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn binary_entropy_conventions() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert!(binary_entropy(1.5).is_err());
    }

    #[test]
    fn witness_sign_matches_d() {
        let phi = w_state(3).unwrap();
        let prof = coherence_profile(&phi, &Basis::computational()).unwrap();
        let rho = crate::states::white_noise_mix(&phi, 0.9).unwrap();
        let w = coherence_witness_value(&rho, &phi, &prof).unwrap();
        let f = fidelity_pure(&rho, &phi).unwrap();
        let d = d_value(f, prof.d_max_sq).unwrap();
        assert_eq!(w < 0.0, d > 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn formation_bound_is_monotone_in_d(m in 3usize..=32, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let mf = m as f64;
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let d1 = 1.0 + lo * (mf - 1.0);
            let d2 = 1.0 + hi * (mf - 1.0);
            let (v1, _) = formation_lb(d1, m).unwrap();
            let (v2, _) = formation_lb(d2, m).unwrap();
            prop_assert!(v2 >= v1 - 1e-12);
        }

        #[test]
        fn l1_and_geometric_stay_in_range(f in 0.0f64..=1.0, k in 1usize..=8) {
            let m = 1usize << k;
            let dmax = 1.0 / m as f64;
            let d = d_value(f, dmax).unwrap();
            prop_assert!((1.0..=m as f64 + 1e-9).contains(&d));
            prop_assert!(l1_lb(d) >= 0.0);
            let g = geom_coherence_lb(d, m).unwrap();
            prop_assert!((0.0..=1.0).contains(&g));
        }
    }
}
