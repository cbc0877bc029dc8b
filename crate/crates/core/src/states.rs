//! Factories for the standard state families the bounds are exercised on:
//! GHZ states and the full GHZ basis, W and linear cluster states,
//! GHZ-diagonal mixtures, and white-noise admixtures.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tensor::{DensityOperator, PureState, VALIDATION_TOL};

fn qubit_dims(n: usize) -> Result<Vec<usize>> {
    let dims = vec![2; n];
    crate::tensor::check_dims(&dims)?;
    Ok(dims)
}

/// `(|0...0> + |1...1>)/sqrt(2)` on `n` qubits.
pub fn ghz(n: usize) -> Result<PureState> {
    ghz_with(n, 0.0, 0)
}

/// Generalized GHZ state `(|pattern> + e^{i phase} |~pattern>)/sqrt(2)`,
/// where `~pattern` flips every qubit. Bit `n-1-p` of `pattern` is party
/// `p`'s value, i.e. the pattern is read as the big-endian basis index.
pub fn ghz_with(n: usize, phase: f64, pattern: u64) -> Result<PureState> {
    let dims = qubit_dims(n)?;
    let d = 1usize << n;
    if pattern >= d as u64 {
        return Err(Error::OutOfDomain {
            name: "pattern",
            value: pattern as f64,
            domain: "[0, 2^n)",
        });
    }
    let p = pattern as usize;
    let pbar = d - 1 - p;
    let a = 1.0 / 2f64.sqrt();
    let mut amps = DVector::zeros(d);
    amps[p] = C64::new(a, 0.0);
    amps[pbar] = C64::from_polar(a, phase);
    PureState::new(dims, amps)
}

/// The orthonormal basis of `2^n` GHZ-type states. Member `2k` is
/// `(|k> + |~k>)/sqrt(2)` and member `2k+1` is `(|k> - |~k>)/sqrt(2)` for
/// `k` in `[0, 2^{n-1})`, so patterns are enumerated with party 0 fixed to 0.
pub fn ghz_basis(n: usize) -> Result<Vec<PureState>> {
    qubit_dims(n)?;
    let half = 1u64 << (n - 1);
    let mut basis = Vec::with_capacity(1 << n);
    for k in 0..half {
        basis.push(ghz_with(n, 0.0, k)?);
        basis.push(ghz_with(n, std::f64::consts::PI, k)?);
    }
    Ok(basis)
}

/// The `n`-qubit W state: equal superposition of all single-excitation
/// basis states.
pub fn w_state(n: usize) -> Result<PureState> {
    let dims = qubit_dims(n)?;
    let d = 1usize << n;
    let a = 1.0 / (n as f64).sqrt();
    let mut amps = DVector::zeros(d);
    for k in 0..n {
        amps[1usize << k] = C64::new(a, 0.0);
    }
    PureState::new(dims, amps)
}

/// Linear cluster state on `n` qubits: `|+>^n` followed by controlled-Z
/// gates on every nearest-neighbor pair of the open chain.
pub fn linear_cluster(n: usize) -> Result<PureState> {
    let dims = qubit_dims(n)?;
    let d = 1usize << n;
    let a = 1.0 / (d as f64).sqrt();
    let mut amps = DVector::from_element(d, C64::new(a, 0.0));
    for idx in 0..d {
        let mut sign = 1.0;
        for p in 0..n - 1 {
            // party p occupies bit n-1-p of the big-endian index
            let b1 = idx >> (n - 1 - p) & 1;
            let b2 = idx >> (n - 2 - p) & 1;
            if b1 == 1 && b2 == 1 {
                sign = -sign;
            }
        }
        if sign < 0.0 {
            amps[idx] = -amps[idx];
        }
    }
    PureState::new(dims, amps)
}

/// Checks a probability vector for a GHZ-diagonal mixture: length `2^n`
/// with `n >= 2`, entries nonnegative, sum within tolerance of one (then
/// renormalized exactly). Returns `(n, probabilities)`.
pub(crate) fn normalized_ghz_probs(probs: &[f64]) -> Result<(usize, Vec<f64>)> {
    let len = probs.len();
    if len < 4 || !len.is_power_of_two() {
        return Err(Error::BadProbabilities {
            reason: format!("expected 2^n entries with n >= 2, got {len}"),
        });
    }
    let n = len.trailing_zeros() as usize;
    if let Some(&bad) = probs.iter().find(|&&p| p.is_nan() || p < 0.0) {
        return Err(Error::BadProbabilities {
            reason: format!("negative or non-finite entry {bad}"),
        });
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > VALIDATION_TOL {
        return Err(Error::BadProbabilities {
            reason: format!("entries sum to {sum}, not 1"),
        });
    }
    Ok((n, probs.iter().map(|&p| p / sum).collect()))
}

/// Mixture `sum_i p_i |g_i><g_i|` over the GHZ basis of [`ghz_basis`], in
/// the same member order. Such states are exactly the ones diagonal in that
/// basis.
pub fn ghz_diagonal(probs: &[f64]) -> Result<DensityOperator> {
    let (n, probs) = normalized_ghz_probs(probs)?;
    let d = 1usize << n;
    let mut mat = DMatrix::zeros(d, d);
    let half = 1usize << (n - 1);
    for k in 0..half {
        let plus = probs[2 * k];
        let minus = probs[2 * k + 1];
        let pbar = d - 1 - k;
        // (|k><k| + |k~><k~|)(q+ + q-)/2 off-diagonal (q+ - q-)/2
        let diag = 0.5 * (plus + minus);
        let off = 0.5 * (plus - minus);
        mat[(k, k)] = C64::new(diag, 0.0);
        mat[(pbar, pbar)] = C64::new(diag, 0.0);
        mat[(k, pbar)] = C64::new(off, 0.0);
        mat[(pbar, k)] = C64::new(off, 0.0);
    }
    Ok(DensityOperator::from_trusted(vec![2; n], mat))
}

/// `p |psi><psi| + (1-p) 1/D`: the state after sending `psi` through a
/// global white-noise (depolarizing) channel with visibility `p`.
pub fn white_noise_mix(psi: &PureState, p: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfDomain {
            name: "visibility",
            value: p,
            domain: "[0, 1]",
        });
    }
    let d = psi.dim();
    let mut mat = psi.amplitudes() * psi.amplitudes().adjoint() * C64::new(p, 0.0);
    let bg = C64::new((1.0 - p) / d as f64, 0.0);
    for i in 0..d {
        mat[(i, i)] += bg;
    }
    Ok(DensityOperator::from_trusted(psi.dims().to_vec(), mat))
}

/// Pure state from a raw amplitude slice (row-major big-endian index
/// convention, validated and normalized like [`PureState::new`]).
pub fn from_amplitudes(dims: &[usize], amps: &[C64]) -> Result<PureState> {
    PureState::new(dims.to_vec(), DVector::from_column_slice(amps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{enumerate_bipartitions, fidelity_pure, schmidt_spectrum};
    use approx::assert_abs_diff_eq;

    #[test]
    fn ghz_has_flat_schmidt_spectra() {
        let psi = ghz(4).unwrap();
        for cut in enumerate_bipartitions(psi.dims()).unwrap() {
            let s = schmidt_spectrum(&psi, &cut).unwrap();
            assert_eq!(s.rank(), 2);
            assert_abs_diff_eq!(s.largest(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn ghz_with_phase_is_orthogonal_partner() {
        let plus = ghz(3).unwrap();
        let minus = ghz_with(3, std::f64::consts::PI, 0).unwrap();
        let ov = plus.overlap(&minus).unwrap();
        assert!(ov.norm() < 1e-15);
    }

    #[test]
    fn ghz_basis_is_orthonormal() {
        let basis = ghz_basis(3).unwrap();
        assert_eq!(basis.len(), 8);
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let ov = a.overlap(b).unwrap().norm();
                if i == j {
                    assert_abs_diff_eq!(ov, 1.0, epsilon = 1e-14);
                } else {
                    assert!(ov < 1e-14, "members {i},{j} overlap {ov}");
                }
            }
        }
    }

    #[test]
    fn w_state_amplitude_support() {
        let psi = w_state(3).unwrap();
        let a = 1.0 / 3f64.sqrt();
        for (idx, amp) in psi.amplitudes().iter().enumerate() {
            if idx == 1 || idx == 2 || idx == 4 {
                assert_abs_diff_eq!(amp.re, a, epsilon = 1e-14);
            } else {
                assert_eq!(amp.norm(), 0.0);
            }
        }
    }

    #[test]
    fn cluster_two_qubits_sign_pattern() {
        let psi = linear_cluster(2).unwrap();
        let amps = psi.amplitudes();
        assert!(amps[0].re > 0.0 && amps[1].re > 0.0 && amps[2].re > 0.0);
        assert!(amps[3].re < 0.0);
    }

    #[test]
    fn cluster_single_cut_spectrum_is_flat_at_half() {
        // every single-party cut of the open chain has Schmidt values 1/2, 1/2
        for n in [3, 4, 5] {
            let psi = linear_cluster(n).unwrap();
            let cut = crate::tensor::Bipartition::new(1, psi.dims()).unwrap();
            let s = schmidt_spectrum(&psi, &cut).unwrap();
            assert_abs_diff_eq!(s.largest(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn ghz_diagonal_with_flat_probs_is_maximally_mixed() {
        let probs = vec![0.125; 8];
        let rho = ghz_diagonal(&probs).unwrap();
        let mm = DensityOperator::maximally_mixed(vec![2; 3]).unwrap();
        assert!((rho.matrix() - mm.matrix()).norm() < 1e-14);
    }

    #[test]
    fn ghz_diagonal_fidelities_recover_probs() {
        let probs = [0.4, 0.1, 0.2, 0.05, 0.1, 0.05, 0.06, 0.04];
        let rho = ghz_diagonal(&probs).unwrap();
        let basis = ghz_basis(3).unwrap();
        for (p, member) in probs.iter().zip(&basis) {
            let f = fidelity_pure(&rho, member).unwrap();
            assert_abs_diff_eq!(f, *p, epsilon = 1e-13);
        }
    }

    #[test]
    fn ghz_diagonal_rejects_bad_probs() {
        assert!(ghz_diagonal(&[0.5, 0.5]).is_err()); // n = 1
        assert!(ghz_diagonal(&[0.3; 6]).is_err()); // not a power of two
        assert!(ghz_diagonal(&[0.5, 0.6, -0.1, 0.0]).is_err());
        assert!(ghz_diagonal(&[0.5, 0.1, 0.1, 0.1]).is_err()); // sums to 0.8
    }

    #[test]
    fn white_noise_endpoints() {
        let psi = ghz(3).unwrap();
        let pure = white_noise_mix(&psi, 1.0).unwrap();
        assert!((pure.matrix() - psi.to_density().matrix()).norm() < 1e-14);
        let mixed = white_noise_mix(&psi, 0.0).unwrap();
        let mm = DensityOperator::maximally_mixed(vec![2; 3]).unwrap();
        assert!((mixed.matrix() - mm.matrix()).norm() < 1e-14);
        assert!(white_noise_mix(&psi, 1.2).is_err());
    }

    #[test]
    fn white_noise_fidelity_closed_form() {
        // F = p + (1-p)/D against the seed state
        let psi = w_state(3).unwrap();
        let p = 0.8;
        let rho = white_noise_mix(&psi, p).unwrap();
        let f = fidelity_pure(&rho, &psi).unwrap();
        assert_abs_diff_eq!(f, p + (1.0 - p) / 8.0, epsilon = 1e-13);
    }
}
