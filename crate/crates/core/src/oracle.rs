//! Independent reference values to hold the bounds against: exact measures
//! for pure states (where every measure reduces to a Schmidt-spectrum or
//! amplitude formula), a closed form for GHZ-diagonal mixtures, and a
//! randomized ensemble search that upper-bounds convex-roof extensions for
//! general mixed states.
//!
//! The negativity is deliberately computed along two independent routes
//! (partial-transpose trace norm vs. Schmidt coefficients) and cross-checked;
//! a disagreement is reported as an error rather than silently averaged.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::coherence::Basis;
use crate::error::{Error, Result};
use crate::states::normalized_ghz_probs;
use crate::tensor::{
    Bipartition, DensityOperator, PureState, RANK_EPS, enumerate_bipartitions, partial_transpose,
    schmidt_spectrum, side_values, trace_norm,
};

/// Maximum tolerated disagreement between the two negativity routes.
pub const DUAL_PATH_TOL: f64 = 1e-8;

/// Eigenvalues of a mixed state below this weight are dropped from the
/// ensemble search.
pub const EIG_CUTOFF: f64 = 1e-10;

const REFINE_STEPS: usize = 50;

/// Entanglement measures the pure-state oracle knows, each evaluated per
/// bipartition and minimized over cuts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmeMeasure {
    /// Renormalized negativity `(sum_k sqrt(mu_k))^2 - 1`.
    Cren,
    /// Concurrence `sqrt(2 (1 - sum_k mu_k^2))`.
    Concurrence,
    /// G-concurrence `m (prod_k mu_k)^{1/m}` over the smaller side dimension.
    GConcurrence,
    /// Geometric measure `1 - mu_max`.
    Geometric,
}

/// Coherence measures the pure-state oracle knows, evaluated from basis
/// amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoherenceMeasure {
    /// l1 coherence `(sum_i |a_i|)^2 - 1`.
    L1,
    /// Geometric coherence `1 - max_i |a_i|^2`.
    Geometric,
    /// Coherence of formation: Shannon entropy of `|a_i|^2` in bits.
    Formation,
}

/// Any measure the convex-roof search can run on. Coherence measures are
/// evaluated in the computational basis; rotate the state first for any
/// other basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Gme(GmeMeasure),
    Coherence(CoherenceMeasure),
}

fn gme_from_mu(mu: &[f64], d_min: usize, measure: GmeMeasure) -> f64 {
    match measure {
        GmeMeasure::Cren => {
            let s: f64 = mu.iter().map(|&m| m.max(0.0).sqrt()).sum();
            (s * s - 1.0).max(0.0)
        }
        GmeMeasure::Concurrence => {
            let s2: f64 = mu.iter().map(|&m| m * m).sum();
            (2.0 * (1.0 - s2)).max(0.0).sqrt()
        }
        GmeMeasure::GConcurrence => {
            if mu.iter().filter(|&&m| m > RANK_EPS).count() < d_min {
                return 0.0;
            }
            let log_mean: f64 = mu.iter().map(|&m| m.ln()).sum::<f64>() / d_min as f64;
            d_min as f64 * log_mean.exp()
        }
        GmeMeasure::Geometric => {
            let top = mu.iter().cloned().fold(0.0f64, f64::max);
            (1.0 - top).max(0.0)
        }
    }
}

fn coherence_from_amps(amps: &[C64], inv_p: f64, measure: CoherenceMeasure) -> f64 {
    match measure {
        CoherenceMeasure::L1 => {
            let s: f64 = amps.iter().map(|a| a.norm()).sum();
            (s * s * inv_p - 1.0).max(0.0)
        }
        CoherenceMeasure::Geometric => {
            let top = amps.iter().map(|a| a.norm_sqr()).fold(0.0f64, f64::max);
            (1.0 - top * inv_p).max(0.0)
        }
        CoherenceMeasure::Formation => {
            let mut h = 0.0;
            for a in amps {
                let q = a.norm_sqr() * inv_p;
                if q > 1e-300 {
                    h -= q * q.log2();
                }
            }
            h.max(0.0)
        }
    }
}

/// Both negativity routes across one cut: the partial-transpose trace norm
/// `|| rho^{T_alpha} ||_1 - 1` and the Schmidt form
/// `(sum_k sqrt(mu_k))^2 - 1`, in that order. They agree for exact
/// arithmetic; comparing them catches indexing and decomposition bugs.
pub fn negativity_routes(psi: &PureState, alpha: &Bipartition) -> Result<(f64, f64)> {
    let rho = psi.to_density();
    let pt = partial_transpose(&rho, alpha)?;
    let via_pt = trace_norm(&pt)? - 1.0;
    let spec = schmidt_spectrum(psi, alpha)?;
    let via_schmidt = gme_from_mu(spec.coeffs_sq(), alpha.d_min(), GmeMeasure::Cren);
    Ok((via_pt, via_schmidt))
}

/// Negativity of a pure state across one cut, cross-checked along both
/// routes within [`DUAL_PATH_TOL`]. Returns the Schmidt-form value.
pub fn negativity_pure(psi: &PureState, alpha: &Bipartition) -> Result<f64> {
    let (via_pt, via_schmidt) = negativity_routes(psi, alpha)?;
    let dev = (via_pt - via_schmidt).abs();
    if dev > DUAL_PATH_TOL {
        return Err(Error::NumericalInconsistency {
            context: "negativity dual evaluation",
            deviation: dev,
            tol: DUAL_PATH_TOL,
        });
    }
    Ok(via_schmidt)
}

/// Concurrence of a pure state across one cut.
pub fn concurrence_pure(psi: &PureState, alpha: &Bipartition) -> Result<f64> {
    let spec = schmidt_spectrum(psi, alpha)?;
    Ok(gme_from_mu(spec.coeffs_sq(), alpha.d_min(), GmeMeasure::Concurrence))
}

/// G-concurrence of a pure state across one cut, normalized to the smaller
/// side: `m (det rho_small)^{1/m}` with `m = min(d_alpha, d_beta)`. Zero
/// whenever the Schmidt rank is below `m`.
pub fn gconcurrence_pure(psi: &PureState, alpha: &Bipartition) -> Result<f64> {
    let spec = schmidt_spectrum(psi, alpha)?;
    Ok(gme_from_mu(spec.coeffs_sq(), alpha.d_min(), GmeMeasure::GConcurrence))
}

/// Geometric measure of a pure state across one cut.
pub fn geometric_pure(psi: &PureState, alpha: &Bipartition) -> Result<f64> {
    let spec = schmidt_spectrum(psi, alpha)?;
    Ok(gme_from_mu(spec.coeffs_sq(), alpha.d_min(), GmeMeasure::Geometric))
}

/// GME value of a pure state: the chosen measure minimized over all
/// bipartitions.
pub fn gme_measure_pure(psi: &PureState, measure: GmeMeasure) -> Result<f64> {
    let cuts = enumerate_bipartitions(psi.dims())?;
    let mut best = f64::INFINITY;
    for cut in &cuts {
        let spec = schmidt_spectrum(psi, cut)?;
        let v = gme_from_mu(spec.coeffs_sq(), cut.d_min(), measure);
        best = best.min(v);
    }
    Ok(best)
}

/// Coherence of a pure state with respect to `basis`.
pub fn coherence_pure(psi: &PureState, measure: CoherenceMeasure, basis: &Basis) -> Result<f64> {
    let amps = basis.amplitudes_of(psi)?;
    Ok(coherence_from_amps(amps.as_slice(), 1.0, measure))
}

/// Exact GME negativity of a GHZ-diagonal state: `max(2 p_max - 1, 0)`
/// where `p_max` is the largest mixing probability.
pub fn ghz_diagonal_analytic(probs: &[f64]) -> Result<f64> {
    let (_, probs) = normalized_ghz_probs(probs)?;
    let top = probs.iter().cloned().fold(0.0f64, f64::max);
    Ok((2.0 * top - 1.0).max(0.0))
}

/// One bipartition's index tables, smaller side first, for Gram-matrix
/// Schmidt spectra inside the ensemble search.
struct CutTable {
    small: Vec<usize>,
    big: Vec<usize>,
}

struct Evaluator {
    measure: Measure,
    tables: Vec<CutTable>,
}

impl Evaluator {
    fn new(dims: &[usize], measure: Measure) -> Result<Self> {
        let tables = match measure {
            Measure::Coherence(_) => Vec::new(),
            Measure::Gme(_) => enumerate_bipartitions(dims)?
                .into_iter()
                .map(|cut| {
                    let full = (1u64 << cut.n_parties()) - 1;
                    let av = side_values(dims, cut.mask());
                    let bv = side_values(dims, !cut.mask() & full);
                    if av.len() <= bv.len() {
                        CutTable { small: av, big: bv }
                    } else {
                        CutTable { small: bv, big: av }
                    }
                })
                .collect(),
        };
        Ok(Evaluator { measure, tables })
    }

    /// Measure of the normalized state `a / sqrt(p)`, where `p = |a|^2` is
    /// supplied by the caller. Gram matrices of the smaller reshape side
    /// keep this a few-flop operation for the cut spectra.
    fn eval(&self, a: &[C64], p: f64) -> f64 {
        let inv_p = 1.0 / p;
        match self.measure {
            Measure::Coherence(cm) => coherence_from_amps(a, inv_p, cm),
            Measure::Gme(gm) => {
                let mut best = f64::INFINITY;
                let mut mu = Vec::new();
                for table in &self.tables {
                    cut_mu(a, inv_p, table, &mut mu);
                    best = best.min(gme_from_mu(&mu, table.small.len(), gm));
                }
                best
            }
        }
    }
}

/// Squared Schmidt coefficients of the (unnormalized) amplitude slice `a`
/// across one cut, written into `mu`.
fn cut_mu(a: &[C64], inv_p: f64, table: &CutTable, mu: &mut Vec<f64>) {
    let dmin = table.small.len();
    mu.clear();
    match dmin {
        1 => mu.push(1.0),
        2 => {
            let (r0, r1) = (table.small[0], table.small[1]);
            let mut g00 = 0.0f64;
            let mut g11 = 0.0f64;
            let mut g01 = C64::new(0.0, 0.0);
            for &c in &table.big {
                let x = a[r0 + c];
                let y = a[r1 + c];
                g00 += x.norm_sqr();
                g11 += y.norm_sqr();
                g01 += x * y.conj();
            }
            let mid = 0.5 * (g00 + g11);
            let disc = (0.25 * (g00 - g11) * (g00 - g11) + g01.norm_sqr()).sqrt();
            mu.push(((mid + disc) * inv_p).max(0.0));
            mu.push(((mid - disc) * inv_p).max(0.0));
        }
        _ => {
            let g = DMatrix::from_fn(dmin, dmin, |r, rp| {
                let mut acc = C64::new(0.0, 0.0);
                for &c in &table.big {
                    acc += a[table.small[r] + c] * a[table.small[rp] + c].conj();
                }
                acc
            });
            let eig = g.symmetric_eigen();
            for &l in eig.eigenvalues.iter() {
                mu.push((l * inv_p).max(0.0));
            }
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed.wrapping_add(splitmix64(trial + 1))))
}

fn col_norm_sq(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// One random ensemble: a Haar isometry applied to the eigenensemble,
/// greedily refined by two-state unitary mixes. Returns the best ensemble
/// average seen.
fn run_trial(m_cols: &DMatrix<C64>, r: usize, ev: &Evaluator, seed: u64, trial: u64) -> f64 {
    let mut rng = trial_rng(seed, trial);
    let d = m_cols.nrows();
    let k = rng.gen_range(r..=2 * r);

    let g = DMatrix::from_fn(k, r, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let rmat = qr.r();
    for j in 0..r {
        let diag = rmat[(j, j)];
        if diag.norm() > 0.0 {
            let phase = diag / diag.norm();
            for i in 0..k {
                q[(i, j)] *= phase;
            }
        }
    }

    // psi = M V^T with V^dag V = 1 preserves sum_j psi_j psi_j^dag = rho
    let mut psi = m_cols * q.transpose();
    let mut weight = vec![0.0f64; k];
    let mut val = vec![0.0f64; k];
    for j in 0..k {
        let col = &psi.as_slice()[j * d..(j + 1) * d];
        weight[j] = col_norm_sq(col);
        val[j] = if weight[j] > 1e-14 {
            ev.eval(col, weight[j])
        } else {
            0.0
        };
    }
    let mut obj: f64 = weight.iter().zip(&val).map(|(w, e)| w * e).sum();

    let mut new1 = vec![C64::new(0.0, 0.0); d];
    let mut new2 = vec![C64::new(0.0, 0.0); d];
    let mut scale = 1.0f64;
    for _ in 0..REFINE_STEPS {
        let j1 = rng.gen_range(0..k);
        let mut j2 = rng.gen_range(0..k - 1);
        if j2 >= j1 {
            j2 += 1;
        }
        let theta = scale * std::f64::consts::FRAC_PI_4 * rng.gen_range(-1.0..1.0f64);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let (c, s) = (theta.cos(), theta.sin());
        let eip = C64::from_polar(1.0, phi);
        {
            let cols = psi.as_slice();
            let a1 = &cols[j1 * d..(j1 + 1) * d];
            let a2 = &cols[j2 * d..(j2 + 1) * d];
            for i in 0..d {
                new1[i] = a1[i] * c + a2[i] * (eip * s);
                new2[i] = a2[i] * c - a1[i] * (eip.conj() * s);
            }
        }
        let w1 = col_norm_sq(&new1);
        let w2 = col_norm_sq(&new2);
        let e1 = if w1 > 1e-14 { ev.eval(&new1, w1) } else { 0.0 };
        let e2 = if w2 > 1e-14 { ev.eval(&new2, w2) } else { 0.0 };
        let delta = w1 * e1 + w2 * e2 - (weight[j1] * val[j1] + weight[j2] * val[j2]);
        if delta < 0.0 {
            let cols = psi.as_mut_slice();
            cols[j1 * d..(j1 + 1) * d].copy_from_slice(&new1);
            cols[j2 * d..(j2 + 1) * d].copy_from_slice(&new2);
            weight[j1] = w1;
            weight[j2] = w2;
            val[j1] = e1;
            val[j2] = e2;
            obj += delta;
        } else {
            scale *= 0.5;
        }
    }
    obj
}

/// Randomized upper bound on the convex-roof extension of a pure-state
/// measure: the minimum ensemble average over the eigenensemble itself plus
/// `trials` random ensembles of up to `2 rank` states, each greedily
/// refined. Deterministic for fixed `(trials, seed)`; for a pure input the
/// exact pure value is returned regardless of `trials`.
pub fn convex_roof_upper(
    rho: &DensityOperator,
    measure: Measure,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let ev = Evaluator::new(rho.dims(), measure)?;
    let d = rho.dim();
    let eig = rho.matrix().clone().symmetric_eigen();
    let mut comps: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l > EIG_CUTOFF)
        .map(|(kk, &l)| (l, kk))
        .collect();
    if comps.is_empty() {
        return Err(Error::EigFailed);
    }
    comps.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let wsum: f64 = comps.iter().map(|(l, _)| l).sum();
    let r = comps.len();

    let mut m_cols = DMatrix::zeros(d, r);
    for (j, &(l, kk)) in comps.iter().enumerate() {
        let scale = (l / wsum).sqrt();
        for i in 0..d {
            m_cols[(i, j)] = eig.eigenvectors[(i, kk)] * scale;
        }
    }

    // the eigenensemble itself is always a candidate
    let mut best = 0.0f64;
    for j in 0..r {
        let col = &m_cols.as_slice()[j * d..(j + 1) * d];
        let w = col_norm_sq(col);
        best += w * ev.eval(col, w);
    }
    if r == 1 || trials == 0 {
        return Ok(best);
    }

    let trial_best = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(&m_cols, r, &ev, seed, t))
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best.min(trial_best))
}

/// Haar-random pure state on the given register.
pub fn haar_pure<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let total = crate::tensor::check_dims(dims)?;
    loop {
        let mut amps = nalgebra::DVector::from_fn(total, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let n = amps.norm();
        if n > 1e-6 {
            amps /= C64::new(n, 0.0);
            return PureState::new(dims.to_vec(), amps);
        }
    }
}

/// Random rank-`rank` mixed state: Haar pure states combined with a flat
/// Dirichlet weight vector.
pub fn random_density<R: Rng + ?Sized>(
    dims: &[usize],
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    let total = crate::tensor::check_dims(dims)?;
    if rank == 0 || rank > total {
        return Err(Error::OutOfDomain {
            name: "rank",
            value: rank as f64,
            domain: "[1, D]",
        });
    }
    let mut weights = Vec::with_capacity(rank);
    for _ in 0..rank {
        let u: f64 = rng.gen_range(0.0..1.0);
        weights.push(-(1.0 - u).ln());
    }
    let wsum: f64 = weights.iter().sum();
    let mut mat = DMatrix::zeros(total, total);
    for w in weights {
        let psi = haar_pure(dims, rng)?;
        mat += psi.amplitudes() * psi.amplitudes().adjoint() * C64::new(w / wsum, 0.0);
    }
    Ok(DensityOperator::from_trusted(dims.to_vec(), mat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz, ghz_diagonal, w_state};
    use crate::tensor::PureState;
    use approx::assert_abs_diff_eq;

    fn qubits(n: usize) -> Vec<usize> {
        vec![2; n]
    }

    #[test]
    fn ghz3_pure_measures() {
        let psi = ghz(3).unwrap();
        assert_abs_diff_eq!(
            gme_measure_pure(&psi, GmeMeasure::Cren).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gme_measure_pure(&psi, GmeMeasure::Concurrence).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gme_measure_pure(&psi, GmeMeasure::GConcurrence).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gme_measure_pure(&psi, GmeMeasure::Geometric).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn w3_negativity_single_cut() {
        let psi = w_state(3).unwrap();
        let cut = Bipartition::new(0b001, &qubits(3)).unwrap();
        let neg = negativity_pure(&psi, &cut).unwrap();
        // (sqrt(2/3) + sqrt(1/3))^2 - 1 = 2 sqrt(2) / 3
        assert_abs_diff_eq!(neg, 0.94280904158206, epsilon = 1e-11);
    }

    #[test]
    fn w3_gme_measures_against_closed_forms() {
        let psi = w_state(3).unwrap();
        let expect = 2.0 * 2f64.sqrt() / 3.0;
        assert_abs_diff_eq!(
            gme_measure_pure(&psi, GmeMeasure::Cren).unwrap(),
            expect,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gme_measure_pure(&psi, GmeMeasure::Concurrence).unwrap(),
            expect,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gme_measure_pure(&psi, GmeMeasure::GConcurrence).unwrap(),
            expect,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            gme_measure_pure(&psi, GmeMeasure::Geometric).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn product_state_measures_vanish() {
        let psi = PureState::basis_state(qubits(3), 3).unwrap();
        for m in [
            GmeMeasure::Cren,
            GmeMeasure::Concurrence,
            GmeMeasure::GConcurrence,
            GmeMeasure::Geometric,
        ] {
            assert_abs_diff_eq!(gme_measure_pure(&psi, m).unwrap(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn coherence_pure_reference_points() {
        let basis = Basis::computational();
        let ghz3 = ghz(3).unwrap();
        assert_abs_diff_eq!(
            coherence_pure(&ghz3, CoherenceMeasure::L1, &basis).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            coherence_pure(&ghz3, CoherenceMeasure::Geometric, &basis).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            coherence_pure(&ghz3, CoherenceMeasure::Formation, &basis).unwrap(),
            1.0,
            epsilon = 1e-12
        );

        let m = 8usize;
        let amps =
            nalgebra::DVector::from_element(m, C64::new(1.0 / (m as f64).sqrt(), 0.0));
        let plus = PureState::new(qubits(3), amps).unwrap();
        assert_abs_diff_eq!(
            coherence_pure(&plus, CoherenceMeasure::L1, &basis).unwrap(),
            7.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            coherence_pure(&plus, CoherenceMeasure::Formation, &basis).unwrap(),
            3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn dual_negativity_routes_agree_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let psi = haar_pure(&qubits(3), &mut rng).unwrap();
            for cut in enumerate_bipartitions(&qubits(3)).unwrap() {
                let (a, b) = negativity_routes(&psi, &cut).unwrap();
                assert!((a - b).abs() <= DUAL_PATH_TOL, "routes differ: {a} vs {b}");
            }
        }
    }

    #[test]
    fn convex_roof_on_pure_state_is_exact() {
        let psi = ghz(3).unwrap();
        let rho = psi.to_density();
        for (measure, expect) in [
            (Measure::Gme(GmeMeasure::Cren), 1.0),
            (Measure::Gme(GmeMeasure::Geometric), 0.5),
            (Measure::Coherence(CoherenceMeasure::L1), 1.0),
            (Measure::Coherence(CoherenceMeasure::Formation), 1.0),
        ] {
            let v = convex_roof_upper(&rho, measure, 5, 1).unwrap();
            assert_abs_diff_eq!(v, expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn convex_roof_never_undercuts_ghz_diagonal_closed_form() {
        let probs = [0.6, 0.15, 0.1, 0.05, 0.04, 0.03, 0.02, 0.01];
        let rho = ghz_diagonal(&probs).unwrap();
        let exact = ghz_diagonal_analytic(&probs).unwrap();
        assert_abs_diff_eq!(exact, 0.2, epsilon = 1e-15);
        let upper = convex_roof_upper(&rho, Measure::Gme(GmeMeasure::Cren), 100, 3).unwrap();
        assert!(upper >= exact - 1e-12, "upper {upper} below exact {exact}");
    }

    #[test]
    fn convex_roof_search_tightens_rank_two_mixture() {
        // two GHZ-basis members: eigenensemble average is 1, the true roof
        // is 2 p - 1; the search must get well below the baseline
        let mut probs = vec![0.0; 8];
        probs[0] = 0.9;
        probs[1] = 0.1;
        let rho = ghz_diagonal(&probs).unwrap();
        let exact = ghz_diagonal_analytic(&probs).unwrap();
        let upper = convex_roof_upper(&rho, Measure::Gme(GmeMeasure::Cren), 300, 5).unwrap();
        assert!(upper >= exact - 1e-12);
        assert!(upper < 0.95, "search failed to improve on baseline: {upper}");
    }

    #[test]
    fn convex_roof_is_deterministic_and_monotone_in_trials() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = random_density(&qubits(3), 3, &mut rng).unwrap();
        let m = Measure::Gme(GmeMeasure::Concurrence);
        let a = convex_roof_upper(&rho, m, 40, 9).unwrap();
        let b = convex_roof_upper(&rho, m, 40, 9).unwrap();
        assert_eq!(a, b);
        // trial t's ensemble depends only on (seed, t), so more trials can
        // only lower the minimum
        let c = convex_roof_upper(&rho, m, 80, 9).unwrap();
        assert!(c <= a);
    }

    #[test]
    fn random_density_is_valid_and_rank_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(&qubits(3), 2, &mut rng).unwrap();
        let diag = crate::tensor::validate_density(rho.matrix(), rho.dims()).unwrap();
        assert!(diag.min_eigenvalue > -1e-12);
        let eig = rho.matrix().clone().symmetric_eigen();
        let rank = eig.eigenvalues.iter().filter(|&&l| l > 1e-9).count();
        assert!(rank <= 2);
    }

    #[test]
    fn ghz_diagonal_analytic_thresholds() {
        let mut probs = vec![0.0; 8];
        probs[0] = 0.5;
        probs[1] = 0.5;
        assert_eq!(ghz_diagonal_analytic(&probs).unwrap(), 0.0);
        probs[0] = 1.0;
        probs[1] = 0.0;
        assert_eq!(ghz_diagonal_analytic(&probs).unwrap(), 1.0);
    }
}
