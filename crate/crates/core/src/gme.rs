//! Lower bounds on genuine multipartite entanglement (GME) measures from a
//! single fidelity measurement.
//!
//! Everything here is driven by two numbers extracted from a reference pure
//! state `phi`: the largest squared Schmidt coefficient over all
//! bipartitions,
//!
//! ```text
//! s1' = max_cuts max_k mu_k(cut),
//! ```
//!
//! and the largest Schmidt-number ceiling `m' = max_cuts min(d_alpha,
//! d_beta)`. Given an experimental fidelity `F = <phi| rho |phi>`, the ratio
//! `S = max(F / s1', 1)` feeds four measure-specific lower bounds. `S > 1`
//! certifies genuine multipartite entanglement of `rho`; the bounds then
//! quantify it.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tensor::{
    Bipartition, DensityOperator, PureState, SchmidtSpectrum, VALIDATION_TOL,
    enumerate_bipartitions, fidelity_pure, schmidt_spectrum,
};

/// Per-cut Schmidt data of a reference state, plus the two aggregates the
/// bounds need.
#[derive(Debug, Clone)]
pub struct PhiProfile {
    dims: Vec<usize>,
    s1_prime: f64,
    m_prime: usize,
    m_prime_rank: usize,
    spectra: Vec<(Bipartition, SchmidtSpectrum)>,
}

impl PhiProfile {
    /// Largest squared Schmidt coefficient over all bipartitions.
    pub fn s1_prime(&self) -> f64 {
        self.s1_prime
    }

    /// Dimension ceiling `max_cuts min(d_alpha, d_beta)`. This is the `m'`
    /// the bounds use: it dominates the Schmidt rank of every pure state in
    /// every decomposition, which is what makes the bounds valid for mixed
    /// states.
    pub fn m_prime(&self) -> usize {
        self.m_prime
    }

    /// Largest Schmidt rank of the reference state itself. Diagnostic only:
    /// at most [`m_prime`](Self::m_prime), and using it in the bounds would
    /// not be sound for arbitrary mixed states.
    pub fn m_prime_rank(&self) -> usize {
        self.m_prime_rank
    }

    /// Schmidt spectrum per canonical bipartition, ascending mask order.
    pub fn spectra(&self) -> &[(Bipartition, SchmidtSpectrum)] {
        &self.spectra
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }
}

/// Scans every bipartition of `phi` and assembles its [`PhiProfile`]. Cuts
/// are processed in parallel; the result is deterministic.
pub fn profile_phi(phi: &PureState) -> Result<PhiProfile> {
    let cuts = enumerate_bipartitions(phi.dims())?;
    let spectra = cuts
        .par_iter()
        .map(|cut| schmidt_spectrum(phi, cut).map(|s| (*cut, s)))
        .collect::<Result<Vec<_>>>()?;
    let s1_prime = spectra
        .iter()
        .map(|(_, s)| s.largest())
        .fold(0.0f64, f64::max);
    let m_prime = spectra.iter().map(|(b, _)| b.d_min()).max().unwrap();
    let m_prime_rank = spectra.iter().map(|(_, s)| s.rank()).max().unwrap();
    debug_assert!(m_prime_rank <= m_prime);
    Ok(PhiProfile {
        dims: phi.dims().to_vec(),
        s1_prime,
        m_prime,
        m_prime_rank,
        spectra,
    })
}

/// The certified ratio `S = max(F / s1', 1)`. Values of `F` within
/// [`VALIDATION_TOL`] of the unit interval are clamped into it; anything
/// further out is rejected, as is a nonsensical `s1'`.
pub fn s_value(fidelity: f64, s1_prime: f64) -> Result<f64> {
    if !(-VALIDATION_TOL..=1.0 + VALIDATION_TOL).contains(&fidelity) {
        return Err(Error::OutOfDomain {
            name: "fidelity",
            value: fidelity,
            domain: "[0, 1]",
        });
    }
    if !(s1_prime > 0.0 && s1_prime <= 1.0 + VALIDATION_TOL) {
        return Err(Error::OutOfDomain {
            name: "s1'",
            value: s1_prime,
            domain: "(0, 1]",
        });
    }
    Ok((fidelity.clamp(0.0, 1.0) / s1_prime).max(1.0))
}

/// A single lower bound before and after clamping to its trivial floor.
/// `raw` can be negative (the bound certifies nothing); `value` is what the
/// measure is actually bounded by.
#[derive(Debug, Clone, Copy)]
pub struct BoundValue {
    pub raw: f64,
    pub value: f64,
    pub clamped: bool,
}

impl BoundValue {
    pub(crate) fn floored(raw: f64) -> Self {
        let value = raw.max(0.0);
        BoundValue {
            raw,
            value,
            clamped: value != raw,
        }
    }
}

/// Lower bound `S - 1` on the renormalized-negativity GME measure.
pub fn cren_lb(s: f64) -> f64 {
    debug_assert!(s >= 1.0);
    s - 1.0
}

/// Lower bound `sqrt(2 / (m'(m'-1))) (S - 1)` on the GME concurrence.
pub fn concurrence_lb(s: f64, m_prime: usize) -> Result<f64> {
    if m_prime < 2 {
        return Err(Error::OutOfDomain {
            name: "m'",
            value: m_prime as f64,
            domain: "[2, inf)",
        });
    }
    let m = m_prime as f64;
    Ok((2.0 / (m * (m - 1.0))).sqrt() * (s - 1.0))
}

/// Lower bound `S - m' + 1` on the G-concurrence GME measure, before
/// clamping. Negative values certify nothing.
pub fn gconcurrence_raw(s: f64, m_prime: usize) -> f64 {
    s - m_prime as f64 + 1.0
}

/// Clamped version of [`gconcurrence_raw`].
pub fn gconcurrence_lb(s: f64, m_prime: usize) -> f64 {
    gconcurrence_raw(s, m_prime).max(0.0)
}

/// The overlap ceiling
///
/// ```text
/// gamma(S, m) = (sqrt(S) + sqrt((m-1)(m-S)))^2 / m^2,
/// ```
///
/// evaluated in expanded form so the endpoints `gamma(1, m) = 1` and
/// `gamma(m, m) = 1/m` come out exact in floating point. Decreasing in `S`,
/// with domain `1 <= S <= m`.
pub fn gamma(s: f64, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::OutOfDomain {
            name: "m",
            value: m as f64,
            domain: "[2, inf)",
        });
    }
    let mf = m as f64;
    if !(1.0 - VALIDATION_TOL..=mf + VALIDATION_TOL).contains(&s) {
        return Err(Error::OutOfDomain {
            name: "S",
            value: s,
            domain: "[1, m]",
        });
    }
    let s = s.clamp(1.0, mf);
    let rest = (mf - 1.0) * (mf - s);
    Ok((s + rest + 2.0 * (s * rest).max(0.0).sqrt()) / (mf * mf))
}

/// Lower bound `1 - gamma(S, m')` on the geometric GME measure.
pub fn geometric_lb(s: f64, m_prime: usize) -> Result<f64> {
    Ok(1.0 - gamma(s, m_prime)?)
}

/// Expectation value `s1' - <phi| rho |phi>` of the projector witness built
/// from the reference state. Negative iff the fidelity certifies GME, i.e.
/// iff `S > 1`.
pub fn gme_witness_value(
    rho: &DensityOperator,
    phi: &PureState,
    profile: &PhiProfile,
) -> Result<f64> {
    if profile.dims() != phi.dims() {
        return Err(Error::DimensionMismatch {
            left: profile.dims().to_vec(),
            right: phi.dims().to_vec(),
        });
    }
    let f = fidelity_pure(rho, phi)?;
    Ok(profile.s1_prime() - f)
}

/// Everything the fidelity `F` certifies about GME measures of the measured
/// state, relative to one reference profile.
#[derive(Debug, Clone)]
pub struct GmeBoundReport {
    pub fidelity: f64,
    pub s1_prime: f64,
    pub m_prime: usize,
    pub s: f64,
    /// `S` evaluated at `F -/+ sigma` when a fidelity uncertainty was given.
    pub s_interval: Option<(f64, f64)>,
    pub witness_value: f64,
    pub cren: BoundValue,
    pub concurrence: BoundValue,
    pub gconcurrence: BoundValue,
    pub geometric: BoundValue,
}

/// Evaluates all four GME lower bounds from a fidelity measurement against
/// the profiled reference state. `sigma`, if given, is a symmetric fidelity
/// uncertainty propagated to an interval on `S`.
pub fn bounds_from_fidelity(
    fidelity: f64,
    sigma: Option<f64>,
    profile: &PhiProfile,
) -> Result<GmeBoundReport> {
    let s1 = profile.s1_prime();
    let mp = profile.m_prime();
    let s = s_value(fidelity, s1)?;
    let s_interval = match sigma {
        None => None,
        Some(sg) => {
            if sg.is_nan() || sg < 0.0 {
                return Err(Error::OutOfDomain {
                    name: "sigma",
                    value: sg,
                    domain: "[0, inf)",
                });
            }
            let lo = s_value((fidelity - sg).clamp(0.0, 1.0), s1)?;
            let hi = s_value((fidelity + sg).clamp(0.0, 1.0), s1)?;
            Some((lo, hi))
        }
    };
    Ok(GmeBoundReport {
        fidelity: fidelity.clamp(0.0, 1.0),
        s1_prime: s1,
        m_prime: mp,
        s,
        s_interval,
        witness_value: s1 - fidelity.clamp(0.0, 1.0),
        cren: BoundValue::floored(cren_lb(s)),
        concurrence: BoundValue::floored(concurrence_lb(s, mp)?),
        gconcurrence: BoundValue::floored(gconcurrence_raw(s, mp)),
        geometric: BoundValue::floored(geometric_lb(s, mp)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, linear_cluster, w_state, white_noise_mix};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn ghz_profile_aggregates() {
        let profile = profile_phi(&ghz(4).unwrap()).unwrap();
        assert_abs_diff_eq!(profile.s1_prime(), 0.5, epsilon = 1e-12);
        assert_eq!(profile.m_prime(), 4); // half/half cut of four qubits
        assert_eq!(profile.m_prime_rank(), 2);
        assert_eq!(profile.spectra().len(), 7);
    }

    #[test]
    fn w3_profile_s1_prime() {
        let profile = profile_phi(&w_state(3).unwrap()).unwrap();
        assert_abs_diff_eq!(profile.s1_prime(), 2.0 / 3.0, epsilon = 1e-12);
        assert_eq!(profile.m_prime(), 2);
    }

    #[test]
    fn m_prime_grows_as_two_to_half_n() {
        for n in 2..=8 {
            let profile = profile_phi(&ghz(n).unwrap()).unwrap();
            assert_eq!(profile.m_prime(), 1 << (n / 2));
        }
    }

    #[test]
    fn s_value_clamps_at_one() {
        assert_eq!(s_value(0.3, 0.5).unwrap(), 1.0);
        assert_abs_diff_eq!(s_value(0.8, 0.5).unwrap(), 1.6, epsilon = 1e-15);
        assert!(s_value(1.2, 0.5).is_err());
        assert!(s_value(0.8, 0.0).is_err());
    }

    #[test]
    fn gamma_endpoints_are_exact() {
        for m in 2..=64usize {
            assert_eq!(gamma(1.0, m).unwrap(), 1.0);
            assert_eq!(gamma(m as f64, m).unwrap(), 1.0 / m as f64);
        }
    }

    #[test]
    fn gamma_matches_unexpanded_form_in_the_interior() {
        for m in [2usize, 3, 8, 32] {
            let mf = m as f64;
            for k in 1..20 {
                let s = 1.0 + (mf - 1.0) * k as f64 / 20.0;
                let direct = (s.sqrt() + ((mf - 1.0) * (mf - s)).sqrt()).powi(2) / (mf * mf);
                assert_abs_diff_eq!(gamma(s, m).unwrap(), direct, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn bounds_for_pure_ghz_hit_their_maxima() {
        // F = 1 against GHZ itself: S = 2, m' = 2 for three qubits
        let profile = profile_phi(&ghz(3).unwrap()).unwrap();
        let rep = bounds_from_fidelity(1.0, None, &profile).unwrap();
        assert_abs_diff_eq!(rep.s, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rep.cren.value, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rep.concurrence.value, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rep.gconcurrence.value, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rep.geometric.value, 0.5, epsilon = 1e-14);
        assert!(!rep.gconcurrence.clamped);
    }

    #[test]
    fn white_noise_ghz3_cren_closed_form() {
        // F = p + (1-p)/8, s1' = 1/2 -> cren = max(2F - 1, 0)
        let phi = ghz(3).unwrap();
        let profile = profile_phi(&phi).unwrap();
        for p in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
            let rho = white_noise_mix(&phi, p).unwrap();
            let f = crate::tensor::fidelity_pure(&rho, &phi).unwrap();
            let rep = bounds_from_fidelity(f, None, &profile).unwrap();
            let expect = (2.0 * f - 1.0).max(0.0);
            assert_abs_diff_eq!(rep.cren.value, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn witness_sign_agrees_with_s() {
        let phi = ghz(3).unwrap();
        let profile = profile_phi(&phi).unwrap();
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let rho = white_noise_mix(&phi, p).unwrap();
            let w = gme_witness_value(&rho, &phi, &profile).unwrap();
            let f = crate::tensor::fidelity_pure(&rho, &phi).unwrap();
            let s = s_value(f, profile.s1_prime()).unwrap();
            assert_eq!(w < 0.0, s > 1.0);
        }
    }

    #[test]
    fn sigma_interval_brackets_s() {
        let profile = profile_phi(&linear_cluster(4).unwrap()).unwrap();
        let rep = bounds_from_fidelity(0.9, Some(0.05), &profile).unwrap();
        let (lo, hi) = rep.s_interval.unwrap();
        assert!(lo <= rep.s && rep.s <= hi);
        assert_abs_diff_eq!(lo, 0.85 / 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 0.95 / 0.5, epsilon = 1e-12);
        assert!(bounds_from_fidelity(0.9, Some(-0.1), &profile).is_err());
    }

    #[test]
    fn clamped_bound_reports_raw_value() {
        let profile = profile_phi(&ghz(6).unwrap()).unwrap();
        // m' = 8: a modest fidelity leaves the g-concurrence bound negative
        let rep = bounds_from_fidelity(0.71, None, &profile).unwrap();
        assert!(rep.gconcurrence.clamped);
        assert!(rep.gconcurrence.raw < 0.0);
        assert_eq!(rep.gconcurrence.value, 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gamma_is_monotone_decreasing_in_s(m in 2usize..=32, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let mf = m as f64;
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let s1 = 1.0 + lo * (mf - 1.0);
            let s2 = 1.0 + hi * (mf - 1.0);
            let g1 = gamma(s1, m).unwrap();
            let g2 = gamma(s2, m).unwrap();
            prop_assert!(g2 <= g1 + 1e-12);
        }

        #[test]
        fn bounds_are_nonnegative_and_cren_detects_iff_s_above_one(
            f in 0.0f64..=1.0, s1 in 0.01f64..=1.0, m in 2usize..=16
        ) {
            let s = s_value(f, s1).unwrap();
            let cren = cren_lb(s);
            prop_assert!(cren >= 0.0);
            prop_assert_eq!(cren > 0.0, s > 1.0);
            let conc = concurrence_lb(s.min(m as f64), m).unwrap();
            prop_assert!(conc >= 0.0);
        }
    }
}
