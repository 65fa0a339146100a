//! Descending-ordered eigendecomposition of symmetric 3x3 matrices and
//! analytic sensitivities of eigenvalues and eigenvectors along the five
//! independent directions.
//!
//! Eigenvalues come from the characteristic cubic in closed (trigonometric)
//! form, polished with one Newton step per root. Eigenvectors solve the
//! rank-2 system (K - lambda M) phi = 0 with one row replaced by a
//! normalization condition. Sensitivities implement the generalized forms
//! for a pencil (K, M); orientation work binds K := a and M := identity.

use crate::tensor::basis_all;
use crate::{Error, Mat3, Result, Vec3};
use nalgebra::SMatrix;

/// Default minimum eigenvalue gap below which eigenvector sensitivities are
/// refused.
pub const DEFAULT_GAP_TOL: f64 = 1e-8;

/// How eigenvector sensitivities are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensMethod {
    /// Augmented-row linear solve on the singular pencil.
    DirectAugmented,
    /// Nelson's substitution (inherently mass-normalized).
    Nelson,
}

/// Normalization condition pinning the eigenvector scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// phi' M phi = 1.
    Mass,
    /// Preassign component m (0-based) to the given value.
    Component(usize, f64),
    /// Euclidean norm fixed to the given value.
    Norm(f64),
}

/// Eigenvalues sorted descending with matched orthonormal eigenvectors as
/// columns of `phi`. The sign convention makes each column's
/// largest-magnitude entry positive so sensitivities are well defined.
#[derive(Debug, Clone, Copy)]
pub struct EigenSystem {
    pub lambda: [f64; 3],
    pub phi: Mat3,
}

impl EigenSystem {
    /// Smallest pairwise eigenvalue separation.
    pub fn min_gap(&self) -> f64 {
        let [a, b, c] = self.lambda;
        (a - b).abs().min((b - c).abs()).min((a - c).abs())
    }
}

/// Sensitivities of eigenvalues (3x5) and eigenvectors (column k of slice r
/// is d phi_k / d v_r) along the independent basis.
#[derive(Debug, Clone)]
pub struct EigenSensitivities {
    pub d_lambda: SMatrix<f64, 3, 5>,
    pub d_phi: [Mat3; 5],
}

/// Characteristic-cubic eigenvalues of a symmetric matrix, descending.
///
/// The closed trigonometric form locates the roots; the best-separated one
/// is polished by Newton (quadratically convergent for a simple root) and
/// the remaining pair comes from the deflated quadratic, which keeps full
/// accuracy even for clustered roots where Newton would stall.
fn eigvals_desc(a: &Mat3) -> [f64; 3] {
    let q = a.trace() / 3.0;
    let p1 = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
    let p2 = (a[(0, 0)] - q).powi(2) + (a[(1, 1)] - q).powi(2) + (a[(2, 2)] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p < 1e-14 * (1.0 + q.abs()) {
        return [q, q, q];
    }
    let b = (a - q * Mat3::identity()) / p;
    let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let l1 = q + 2.0 * p * phi.cos();
    let l3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let l2 = 3.0 * q - l1 - l3;
    let est = [l1, l2, l3];

    // Characteristic polynomial p(x) = -x^3 + c2 x^2 - c1 x + c0.
    let c2 = a.trace();
    let c1 = 0.5 * (c2 * c2 - (a * a).trace());
    let c0 = a.determinant();

    // Pick the root farthest from the other two and polish it.
    let sep = |k: usize| {
        (0..3)
            .filter(|&j| j != k)
            .map(|j| (est[k] - est[j]).abs())
            .fold(f64::INFINITY, f64::min)
    };
    let far = (0..3).max_by(|&x, &y| sep(x).partial_cmp(&sep(y)).unwrap()).unwrap();
    let mut root = est[far];
    for _ in 0..2 {
        let f = -root.powi(3) + c2 * root.powi(2) - c1 * root + c0;
        let df = -3.0 * root.powi(2) + 2.0 * c2 * root - c1;
        if df.abs() > 1e-30 {
            root -= f / df;
        }
    }

    // Deflate: p(x) = -(x - root)(x^2 + beta x + gamma).
    let beta = root - c2;
    let gamma = root * beta + c1;
    let disc = (beta * beta - 4.0 * gamma).max(0.0).sqrt();
    let qq = -0.5 * (beta + beta.signum() * disc);
    let (r1, r2) = if qq.abs() > 0.0 {
        (qq, gamma / qq)
    } else {
        (-0.5 * beta, -0.5 * beta)
    };

    let mut l = [root, r1, r2];
    l.sort_by(|x, y| y.partial_cmp(x).unwrap());
    l
}

/// Unit eigenvector for a simple eigenvalue via the largest cross product of
/// rows of S = A - lambda I; returns None when S has rank < 2 (degenerate).
fn eigvec_cross(a: &Mat3, lambda: f64, scale: f64) -> Option<Vec3> {
    let s = a - lambda * Mat3::identity();
    let r0 = Vec3::new(s[(0, 0)], s[(0, 1)], s[(0, 2)]);
    let r1 = Vec3::new(s[(1, 0)], s[(1, 1)], s[(1, 2)]);
    let r2 = Vec3::new(s[(2, 0)], s[(2, 1)], s[(2, 2)]);
    let cands = [r0.cross(&r1), r0.cross(&r2), r1.cross(&r2)];
    let best = cands
        .iter()
        .max_by(|x, y| x.norm_squared().partial_cmp(&y.norm_squared()).unwrap())
        .copied()
        .unwrap();
    if best.norm() > 1e-11 * scale * scale {
        Some(best / best.norm())
    } else {
        None
    }
}

/// Polish an eigenvector by the augmented-row solve: replace row k of
/// (A - lambda I) with e_k' (preassigning component k) and solve against
/// e_k, then renormalize.
fn eigvec_polish(a: &Mat3, lambda: f64, v: &Vec3) -> Vec3 {
    let k = v.iamax();
    let mut s = a - lambda * Mat3::identity();
    let mut rhs = Vec3::zeros();
    for c in 0..3 {
        s[(k, c)] = if c == k { 1.0 } else { 0.0 };
    }
    rhs[k] = v[k].signum();
    match s.lu().solve(&rhs) {
        Some(x) if x.norm() > 1e-8 && x.iter().all(|e| e.is_finite()) => x / x.norm(),
        _ => *v,
    }
}

fn fix_sign(v: &mut Vec3) {
    if v[v.iamax()] < 0.0 {
        *v = -*v;
    }
}

/// Descending-ordered eigendecomposition of a symmetric 3x3 matrix.
///
/// Handles degenerate spectra by completing the eigenvector set to an
/// orthonormal basis; the reconstruction identity still holds there.
pub fn eig_desc(a: &Mat3) -> EigenSystem {
    let lambda = eigvals_desc(a);
    let scale = lambda[0].abs().max(lambda[2].abs()).max(1.0);
    let mut cols: [Option<Vec3>; 3] = [None, None, None];
    for k in 0..3 {
        // Skip duplicates of an earlier root; the rank-deficient cross
        // products could only return an already-claimed direction.
        let dup = (0..k).any(|j| (lambda[j] - lambda[k]).abs() <= 1e-10 * scale);
        if !dup {
            cols[k] =
                eigvec_cross(a, lambda[k], scale).map(|v| eigvec_polish(a, lambda[k], &v));
        }
    }
    // Gram-Schmidt in descending order; columns the cross products could
    // not resolve (degenerate subspaces) are completed orthogonally.
    let mut full: [Vec3; 3] = [Vec3::x(), Vec3::y(), Vec3::z()];
    for k in 0..3 {
        let mut v = cols[k].unwrap_or_else(|| {
            [Vec3::x(), Vec3::y(), Vec3::z()]
                .into_iter()
                .map(|e| {
                    let mut w = e;
                    for f in full.iter().take(k) {
                        w -= f * f.dot(&w);
                    }
                    w
                })
                .max_by(|x, y| x.norm_squared().partial_cmp(&y.norm_squared()).unwrap())
                .unwrap()
        });
        for f in full.iter().take(k) {
            v -= f * f.dot(&v);
        }
        if v.norm() < 1e-8 {
            // The candidate collapsed onto earlier columns; fall back to a
            // plain orthogonal completion.
            v = [Vec3::x(), Vec3::y(), Vec3::z()]
                .into_iter()
                .map(|e| {
                    let mut w = e;
                    for f in full.iter().take(k) {
                        w -= f * f.dot(&w);
                    }
                    w
                })
                .max_by(|x, y| x.norm_squared().partial_cmp(&y.norm_squared()).unwrap())
                .unwrap();
        }
        full[k] = v / v.norm();
        fix_sign(&mut full[k]);
    }
    let phi = Mat3::from_columns(&full);
    EigenSystem { lambda, phi }
}

/// d lambda_k / d v_r for the orientation binding K = a, M = identity:
/// the Rayleigh-quotient directional derivative phi_k' E_r phi_k.
/// Valid whenever the eigenvalue is simple; at degeneracies the values
/// depend on the eigenvector choice but symmetric functions of them stay
/// well defined.
pub fn eigenvalue_sensitivities_for(eig: &EigenSystem) -> SMatrix<f64, 3, 5> {
    let es = basis_all();
    let mut d = SMatrix::<f64, 3, 5>::zeros();
    for k in 0..3 {
        let phi = eig.phi.column(k);
        for (r, e) in es.iter().enumerate() {
            d[(k, r)] = (e * phi).dot(&phi);
        }
    }
    d
}

/// Convenience wrapper: eigendecompose and return eigenvalue sensitivities.
pub fn eigenvalue_sensitivities(a: &Mat3) -> SMatrix<f64, 3, 5> {
    eigenvalue_sensitivities_for(&eig_desc(a))
}

/// Generalized eigenvalue sensitivity for the pencil (K, M) at a known pair
/// (lambda, phi): d lambda = phi' (dK - lambda dM) phi / (phi' M phi).
pub fn general_lambda_sensitivity(m: &Mat3, lambda: f64, phi: &Vec3, dk: &Mat3, dm: &Mat3) -> f64 {
    let num = (dk - lambda * dm) * phi;
    phi.dot(&num) / phi.dot(&(m * phi))
}

/// Generalized eigenvector sensitivity by the augmented-row solve: row `n`
/// of S = K - lambda M is replaced by dG/dphi, and the right-hand side row
/// by dG/da, per the chosen normalization.
#[allow(clippy::too_many_arguments)]
pub fn general_vector_sensitivity_direct(
    k: &Mat3,
    m: &Mat3,
    lambda: f64,
    phi: &Vec3,
    d_lambda: f64,
    dk: &Mat3,
    dm: &Mat3,
    normalization: Normalization,
) -> Result<Vec3> {
    let s = k - lambda * m;
    let mut f = -((dk - d_lambda * m - lambda * dm) * phi);
    let mut jac = s;
    let n = match normalization {
        Normalization::Component(idx, _) => idx,
        _ => phi.iamax(),
    };
    match normalization {
        Normalization::Mass => {
            let grad = 2.0 * (m * phi);
            for c in 0..3 {
                jac[(n, c)] = grad[c];
            }
            f[n] = -phi.dot(&(dm * phi));
        }
        Normalization::Component(idx, _) => {
            for c in 0..3 {
                jac[(n, c)] = if c == idx { 1.0 } else { 0.0 };
            }
            f[n] = 0.0;
        }
        Normalization::Norm(_) => {
            for c in 0..3 {
                jac[(n, c)] = phi[c];
            }
            f[n] = 0.0;
        }
    }
    jac.lu()
        .solve(&f)
        .filter(|x| x.iter().all(|e| e.is_finite()))
        .ok_or(Error::SingularJacobian)
}

/// Generalized eigenvector sensitivity by Nelson's method with pivot row
/// `n` (the eigenvector's largest-magnitude component); mass-normalized.
#[allow(clippy::too_many_arguments)]
pub fn general_vector_sensitivity_nelson(
    k: &Mat3,
    m: &Mat3,
    lambda: f64,
    phi: &Vec3,
    d_lambda: f64,
    dk: &Mat3,
    dm: &Mat3,
) -> Result<Vec3> {
    let n = phi.iamax();
    let mut sp = k - lambda * m;
    for c in 0..3 {
        sp[(n, c)] = 0.0;
        sp[(c, n)] = 0.0;
    }
    sp[(n, n)] = 1.0;
    let mut f = -((dk - d_lambda * m - lambda * dm) * phi);
    f[n] = 0.0;
    let v = sp
        .lu()
        .solve(&f)
        .filter(|x| x.iter().all(|e| e.is_finite()))
        .ok_or(Error::SingularJacobian)?;
    let c = -phi.dot(&(m * v)) - 0.5 * phi.dot(&(dm * phi));
    Ok(v + c * phi)
}

/// Eigenvalue and eigenvector sensitivities along the five independent
/// directions for the orientation binding K = a, M = identity.
///
/// Errors with [`Error::DegenerateEigenvalues`] when the minimum eigenvalue
/// gap drops below `gap_tol` (eigenvector sensitivities are only defined for
/// simple eigenvalues).
pub fn eig_sensitivities_with_gap(
    a: &Mat3,
    method: SensMethod,
    normalization: Normalization,
    gap_tol: f64,
) -> Result<EigenSensitivities> {
    let eig = eig_desc(a);
    eig_sensitivities_for(a, &eig, method, normalization, gap_tol)
}

/// As [`eig_sensitivities_with_gap`] but reusing an existing decomposition.
pub fn eig_sensitivities_for(
    a: &Mat3,
    eig: &EigenSystem,
    method: SensMethod,
    normalization: Normalization,
    gap_tol: f64,
) -> Result<EigenSensitivities> {
    let gap = eig.min_gap();
    if gap < gap_tol {
        return Err(Error::DegenerateEigenvalues {
            gap,
            tol: gap_tol,
            context: "eigenvector sensitivities",
        });
    }
    let ident = Mat3::identity();
    let zero = Mat3::zeros();
    let es = basis_all();
    let mut d_lambda = SMatrix::<f64, 3, 5>::zeros();
    let mut d_phi = [Mat3::zeros(); 5];
    for (r, e) in es.iter().enumerate() {
        for k in 0..3 {
            let phi = Vec3::from(eig.phi.column(k));
            let dl = general_lambda_sensitivity(&ident, eig.lambda[k], &phi, e, &zero);
            d_lambda[(k, r)] = dl;
            let dv = match method {
                SensMethod::DirectAugmented => general_vector_sensitivity_direct(
                    a,
                    &ident,
                    eig.lambda[k],
                    &phi,
                    dl,
                    e,
                    &zero,
                    normalization,
                )?,
                SensMethod::Nelson => general_vector_sensitivity_nelson(
                    a,
                    &ident,
                    eig.lambda[k],
                    &phi,
                    dl,
                    e,
                    &zero,
                )?,
            };
            for row in 0..3 {
                d_phi[r][(row, k)] = dv[row];
            }
        }
    }
    Ok(EigenSensitivities { d_lambda, d_phi })
}

/// Default entry point: Nelson's method with mass normalization and the
/// default gap tolerance.
pub fn eig_sensitivities(a: &Mat3, method: SensMethod, normalization: Normalization) -> Result<EigenSensitivities> {
    eig_sensitivities_with_gap(a, method, normalization, DEFAULT_GAP_TOL)
}
