//! Dense multipartite state representations and the tensor manipulations the
//! bound machinery is built on: bipartition bookkeeping, reshapes, Schmidt
//! spectra, partial trace / transpose, and density-operator validation.
//!
//! A register of `N` parties with local dimensions `d_0, ..., d_{N-1}` is
//! stored in row-major (big-endian) convention: basis index
//! `i = x_0 * (d_1 d_2 ... d_{N-1}) + x_1 * (d_2 ... d_{N-1}) + ... + x_{N-1}`,
//! so party 0 is the most significant digit. A bipartition is a bitmask over
//! parties with bit `p` selecting party `p` into side `alpha`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance for normalization, trace, Hermiticity, fidelity-imaginary-part
/// and positivity checks on user-supplied data.
pub const VALIDATION_TOL: f64 = 1e-9;

/// Threshold below which a Schmidt coefficient (squared) counts as zero when
/// ranks are computed.
pub const RANK_EPS: f64 = 1e-12;

/// Hard cap on the total Hilbert-space dimension of a dense register.
pub const MAX_DENSE_DIM: usize = 1 << 26;

pub(crate) fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.len() < 2 {
        return Err(Error::TooFewParties {
            required: 2,
            got: dims.len(),
        });
    }
    if dims.len() > 63 {
        return Err(Error::TooFewParties {
            required: 2,
            got: dims.len(),
        });
    }
    let mut total: usize = 1;
    for (party, &d) in dims.iter().enumerate() {
        if d < 2 {
            return Err(Error::BadLocalDimension { party, dim: d });
        }
        total = total.saturating_mul(d);
        if total > MAX_DENSE_DIM {
            return Err(Error::RegisterTooLarge {
                dim: total,
                limit: MAX_DENSE_DIM,
            });
        }
    }
    Ok(total)
}

/// Strides of the full register index: `strides[p]` is the weight of party
/// `p`'s digit in the flattened basis index.
fn strides(dims: &[usize]) -> Vec<usize> {
    let n = dims.len();
    let mut s = vec![1usize; n];
    for p in (0..n.saturating_sub(1)).rev() {
        s[p] = s[p + 1] * dims[p + 1];
    }
    s
}

/// Flattened-index contributions of the joint index running over the parties
/// selected by `mask`, in ascending-party big-endian order. The returned
/// vector has one entry per joint index value; adding an alpha-side entry to
/// a complement-side entry reconstructs the full register index.
pub(crate) fn side_values(dims: &[usize], mask: u64) -> Vec<usize> {
    let st = strides(dims);
    let mut vals = vec![0usize];
    for (p, &d) in dims.iter().enumerate() {
        if mask >> p & 1 == 1 {
            let mut next = Vec::with_capacity(vals.len() * d);
            for &v in &vals {
                for x in 0..d {
                    next.push(v + x * st[p]);
                }
            }
            vals = next;
        }
    }
    vals
}

/// A nonempty proper subset of the parties, stored as a bitmask (bit `p`
/// selects party `p`). Carries the side dimensions so downstream code can
/// sanity-check it against the register it is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bipartition {
    mask: u64,
    n_parties: usize,
    d_alpha: usize,
    d_beta: usize,
}

impl Bipartition {
    /// Build a bipartition from a bitmask over the register described by
    /// `dims`. The mask must select a nonempty proper subset.
    pub fn new(mask: u64, dims: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        let n = dims.len();
        let full: u64 = (1u64 << n) - 1;
        if mask == 0 || mask & !full != 0 || mask == full {
            return Err(Error::InvalidBipartition {
                mask,
                n_parties: n,
            });
        }
        let mut d_alpha = 1usize;
        let mut d_beta = 1usize;
        for (p, &d) in dims.iter().enumerate() {
            if mask >> p & 1 == 1 {
                d_alpha *= d;
            } else {
                d_beta *= d;
            }
        }
        Ok(Bipartition {
            mask,
            n_parties: n,
            d_alpha,
            d_beta,
        })
    }

    /// Build from an explicit list of 0-based party indices.
    pub fn from_parties(parties: &[usize], dims: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &p in parties {
            if p >= dims.len() {
                return Err(Error::InvalidBipartition {
                    mask: 1u64 << p.min(62),
                    n_parties: dims.len(),
                });
            }
            mask |= 1u64 << p;
        }
        Self::new(mask, dims)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    /// Dimension of the alpha side (the masked parties).
    pub fn d_alpha(&self) -> usize {
        self.d_alpha
    }

    /// Dimension of the complement side.
    pub fn d_beta(&self) -> usize {
        self.d_beta
    }

    /// The smaller of the two side dimensions. Schmidt spectra across this
    /// cut have at most this many nonzero entries.
    pub fn d_min(&self) -> usize {
        self.d_alpha.min(self.d_beta)
    }

    /// 0-based party indices on the alpha side, ascending.
    pub fn parties(&self) -> Vec<usize> {
        (0..self.n_parties)
            .filter(|p| self.mask >> p & 1 == 1)
            .collect()
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// The same cut described from the other side.
    pub fn complement(&self) -> Self {
        let full = (1u64 << self.n_parties) - 1;
        Bipartition {
            mask: !self.mask & full,
            n_parties: self.n_parties,
            d_alpha: self.d_beta,
            d_beta: self.d_alpha,
        }
    }

    /// Canonical representatives contain party 0, which picks exactly one of
    /// the two masks describing the same cut.
    pub fn is_canonical(&self) -> bool {
        self.mask & 1 == 1
    }

    /// Errors unless this bipartition was built for a register with exactly
    /// these dimensions.
    pub fn check_compatible(&self, dims: &[usize]) -> Result<()> {
        if dims.len() != self.n_parties {
            return Err(Error::InvalidBipartition {
                mask: self.mask,
                n_parties: dims.len(),
            });
        }
        let mut d_alpha = 1usize;
        for (p, &d) in dims.iter().enumerate() {
            if self.mask >> p & 1 == 1 {
                d_alpha *= d;
            }
        }
        if d_alpha != self.d_alpha {
            return Err(Error::InvalidBipartition {
                mask: self.mask,
                n_parties: dims.len(),
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.parties().into_iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// All distinct bipartitions of the register, one canonical representative
/// per cut (the one containing party 0), ordered by ascending mask. For `N`
/// parties this yields `2^(N-1) - 1` cuts.
pub fn enumerate_bipartitions(dims: &[usize]) -> Result<Vec<Bipartition>> {
    check_dims(dims)?;
    let n = dims.len();
    let full: u64 = (1u64 << n) - 1;
    let mut out = Vec::with_capacity((1usize << (n - 1)) - 1);
    let mut mask = 1u64;
    while mask < full {
        out.push(Bipartition::new(mask, dims)?);
        mask += 2;
    }
    Ok(out)
}

/// A normalized pure state of a multipartite register.
#[derive(Debug, Clone)]
pub struct PureState {
    dims: Vec<usize>,
    amps: DVector<C64>,
}

impl PureState {
    /// Validates dimensions and normalization. Amplitude vectors within
    /// [`VALIDATION_TOL`] of unit norm are rescaled to exactly unit norm;
    /// anything further off is rejected.
    pub fn new(dims: Vec<usize>, amps: DVector<C64>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amps.len() != total {
            return Err(Error::AmplitudeLength {
                got: amps.len(),
                expected: total,
            });
        }
        let n2 = amps.norm_squared();
        let dev = (n2 - 1.0).abs();
        if dev > VALIDATION_TOL {
            return Err(Error::NotNormalized {
                deviation: dev,
                tol: VALIDATION_TOL,
            });
        }
        let amps = if dev > 0.0 {
            amps * C64::new(1.0 / n2.sqrt(), 0.0)
        } else {
            amps
        };
        Ok(PureState { dims, amps })
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(dims: Vec<usize>, index: usize) -> Result<Self> {
        let total = check_dims(&dims)?;
        if index >= total {
            return Err(Error::OutOfDomain {
                name: "basis index",
                value: index as f64,
                domain: "[0, D)",
            });
        }
        let mut amps = DVector::zeros(total);
        amps[index] = C64::new(1.0, 0.0);
        Ok(PureState { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                left: self.dims.clone(),
                right: other.dims.clone(),
            });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// The projector `|self><self|` as a density operator.
    pub fn to_density(&self) -> DensityOperator {
        let mat = &self.amps * self.amps.adjoint();
        DensityOperator {
            dims: self.dims.clone(),
            mat,
        }
    }
}

/// Measured deviations from the density-operator axioms.
#[derive(Debug, Clone, Copy)]
pub struct DensityDiagnostics {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
}

/// Checks that `mat` is a density operator on the register described by
/// `dims`: square of matching dimension, Hermitian, unit trace and positive
/// semidefinite, each within [`VALIDATION_TOL`]. Returns the measured
/// deviations on success and the first violated axiom otherwise.
pub fn validate_density(mat: &DMatrix<C64>, dims: &[usize]) -> Result<DensityDiagnostics> {
    let total = check_dims(dims)?;
    if mat.nrows() != mat.ncols() {
        return Err(Error::NotSquare {
            rows: mat.nrows(),
            cols: mat.ncols(),
        });
    }
    if mat.nrows() != total {
        return Err(Error::DimensionMismatch {
            left: vec![mat.nrows()],
            right: vec![total],
        });
    }
    let mut herm_dev = 0.0f64;
    for i in 0..mat.nrows() {
        for j in i..mat.ncols() {
            let d = (mat[(i, j)] - mat[(j, i)].conj()).norm();
            herm_dev = herm_dev.max(d);
        }
    }
    if herm_dev > VALIDATION_TOL {
        return Err(Error::NotHermitian {
            deviation: herm_dev,
            tol: VALIDATION_TOL,
        });
    }
    let tr: C64 = mat.diagonal().iter().sum();
    let tr_dev = (tr - C64::new(1.0, 0.0)).norm();
    if tr_dev > VALIDATION_TOL {
        return Err(Error::TraceNotOne {
            deviation: tr_dev,
            tol: VALIDATION_TOL,
        });
    }
    let sym = symmetrize(mat);
    let eig = sym.symmetric_eigen();
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig < -VALIDATION_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min_eig,
        });
    }
    Ok(DensityDiagnostics {
        hermiticity_deviation: herm_dev,
        trace_deviation: tr_dev,
        min_eigenvalue: min_eig,
    })
}

fn symmetrize(mat: &DMatrix<C64>) -> DMatrix<C64> {
    let adj = mat.adjoint();
    (mat + adj) * C64::new(0.5, 0.0)
}

/// A validated density operator. The stored matrix is exactly Hermitian
/// (symmetrized on construction); trace and positivity hold within
/// [`VALIDATION_TOL`].
#[derive(Debug, Clone)]
pub struct DensityOperator {
    dims: Vec<usize>,
    mat: DMatrix<C64>,
}

impl DensityOperator {
    pub fn new(dims: Vec<usize>, mat: DMatrix<C64>) -> Result<Self> {
        validate_density(&mat, &dims)?;
        Ok(DensityOperator {
            dims,
            mat: symmetrize(&mat),
        })
    }

    /// Wraps a matrix that is valid by construction, only symmetrizing away
    /// floating-point asymmetry. Not exposed: callers go through `new`.
    pub(crate) fn from_trusted(dims: Vec<usize>, mat: DMatrix<C64>) -> Self {
        DensityOperator {
            dims,
            mat: symmetrize(&mat),
        }
    }

    /// The maximally mixed state `1/D` on the given register.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let total = check_dims(&dims)?;
        let mat = DMatrix::from_diagonal_element(
            total,
            total,
            C64::new(1.0 / total as f64, 0.0),
        );
        Ok(DensityOperator { dims, mat })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }
}

/// Squared Schmidt coefficients across one cut, descending, normalized to
/// sum to one. `rank` counts entries above [`RANK_EPS`].
#[derive(Debug, Clone)]
pub struct SchmidtSpectrum {
    coeffs_sq: Vec<f64>,
    rank: usize,
}

impl SchmidtSpectrum {
    pub(crate) fn from_raw(mut coeffs_sq: Vec<f64>) -> Result<Self> {
        let sum: f64 = coeffs_sq.iter().sum();
        let dev = (sum - 1.0).abs();
        if dev > VALIDATION_TOL {
            return Err(Error::NotNormalized {
                deviation: dev,
                tol: VALIDATION_TOL,
            });
        }
        if dev > 0.0 {
            let inv = 1.0 / sum;
            for c in coeffs_sq.iter_mut() {
                *c *= inv;
            }
        }
        coeffs_sq.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let rank = coeffs_sq.iter().filter(|&&c| c > RANK_EPS).count();
        Ok(SchmidtSpectrum { coeffs_sq, rank })
    }

    /// Squared coefficients, descending.
    pub fn coeffs_sq(&self) -> &[f64] {
        &self.coeffs_sq
    }

    /// Largest squared coefficient.
    pub fn largest(&self) -> f64 {
        self.coeffs_sq[0]
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.coeffs_sq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs_sq.is_empty()
    }
}

/// Rearranges the amplitude vector into a `d_alpha x d_beta` matrix whose
/// row indexes the joint state of the alpha parties (ascending party order,
/// big-endian) and whose column indexes the complement. Singular values of
/// this matrix are the Schmidt coefficients of the cut.
pub fn reshape_by_bipartition(psi: &PureState, alpha: &Bipartition) -> Result<DMatrix<C64>> {
    alpha.check_compatible(psi.dims())?;
    let full = (1u64 << alpha.n_parties()) - 1;
    let av = side_values(psi.dims(), alpha.mask());
    let bv = side_values(psi.dims(), !alpha.mask() & full);
    let amps = psi.amplitudes();
    Ok(DMatrix::from_fn(av.len(), bv.len(), |r, c| {
        amps[av[r] + bv[c]]
    }))
}

fn svd_values(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let svd = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, 1_000_000)
        .ok_or(Error::SvdFailed)?;
    Ok(svd.singular_values.iter().cloned().collect())
}

/// Schmidt spectrum of `psi` across the cut `alpha`, via singular values of
/// the bipartition reshape. Invariant under swapping the cut for its
/// complement.
pub fn schmidt_spectrum(psi: &PureState, alpha: &Bipartition) -> Result<SchmidtSpectrum> {
    let m = reshape_by_bipartition(psi, alpha)?;
    let sv = svd_values(&m)?;
    SchmidtSpectrum::from_raw(sv.into_iter().map(|s| s * s).collect())
}

/// `<phi| rho |phi>`. The result is real for Hermitian `rho`; a residual
/// imaginary part above [`VALIDATION_TOL`] is treated as numerical breakage.
pub fn fidelity_pure(rho: &DensityOperator, phi: &PureState) -> Result<f64> {
    if rho.dims() != phi.dims() {
        return Err(Error::DimensionMismatch {
            left: rho.dims().to_vec(),
            right: phi.dims().to_vec(),
        });
    }
    let y = rho.matrix() * phi.amplitudes();
    let val = phi.amplitudes().dotc(&y);
    if val.im.abs() > VALIDATION_TOL {
        return Err(Error::NumericalInconsistency {
            context: "imaginary part of a fidelity",
            deviation: val.im.abs(),
            tol: VALIDATION_TOL,
        });
    }
    let f = val.re;
    if !(-VALIDATION_TOL..=1.0 + VALIDATION_TOL).contains(&f) {
        return Err(Error::OutOfDomain {
            name: "fidelity",
            value: f,
            domain: "[0, 1]",
        });
    }
    Ok(f.clamp(0.0, 1.0))
}

/// Traces out the complement of `keep`, returning the reduced state on the
/// kept parties (ascending party order).
pub fn partial_trace(rho: &DensityOperator, keep: &Bipartition) -> Result<DensityOperator> {
    keep.check_compatible(rho.dims())?;
    let full = (1u64 << keep.n_parties()) - 1;
    let kv = side_values(rho.dims(), keep.mask());
    let tv = side_values(rho.dims(), !keep.mask() & full);
    let m = rho.matrix();
    let dk = kv.len();
    let mut out = DMatrix::zeros(dk, dk);
    for r in 0..dk {
        for c in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &tv {
                acc += m[(kv[r] + t, kv[c] + t)];
            }
            out[(r, c)] = acc;
        }
    }
    let kept_dims: Vec<usize> = keep
        .parties()
        .into_iter()
        .map(|p| rho.dims()[p])
        .collect();
    Ok(DensityOperator::from_trusted(kept_dims, out))
}

/// Transposes the alpha subsystem of `rho`, leaving the complement alone.
/// The result is Hermitian but in general not positive; it is returned as a
/// plain matrix.
pub fn partial_transpose(rho: &DensityOperator, alpha: &Bipartition) -> Result<DMatrix<C64>> {
    alpha.check_compatible(rho.dims())?;
    let full = (1u64 << alpha.n_parties()) - 1;
    let av = side_values(rho.dims(), alpha.mask());
    let bv = side_values(rho.dims(), !alpha.mask() & full);
    let m = rho.matrix();
    let d = m.nrows();
    let mut out = DMatrix::zeros(d, d);
    for &va1 in av.iter() {
        for &va2 in av.iter() {
            for &vb1 in bv.iter() {
                for &vb2 in bv.iter() {
                    // <a2 b1| rho^{T_alpha} |a1 b2> = <a1 b1| rho |a2 b2>
                    out[(va2 + vb1, va1 + vb2)] = m[(va1 + vb1, va2 + vb2)];
                }
            }
        }
    }
    Ok(out)
}

/// Trace norm (sum of singular values).
pub fn trace_norm(m: &DMatrix<C64>) -> Result<f64> {
    Ok(svd_values(m)?.iter().sum())
}
