//! Orientation-tensor algebra: contracted indexing, the trace-constrained
//! derivative basis, full symmetrization, double contractions, and tensor
//! invariants with their derivatives.
//!
//! All derivatives "with respect to a_ij" in this crate are directional
//! derivatives along the five trace-free basis tensors returned by
//! [`basis`], so that 5x5 Jacobians respect trace conservation. Perturbing
//! independent component r of an [`Indep5`] vector moves the full tensor
//! along `basis(r)` because `unpack` rebuilds a33 = 1 - a11 - a22.

use crate::spectral;
use crate::{Error, Indep5, Mat3, Result};

/// Absolute tolerance for symmetry and trace checks on construction.
pub const SYM_TOL: f64 = 1e-12;

/// Eigenvalue slack allowed when flagging a state as physical.
pub const PHYSICAL_SLACK: f64 = 1e-9;

/// Symmetric, unit-trace second-order orientation tensor.
///
/// Construction enforces exact symmetry and trace 1 within [`SYM_TOL`];
/// eigenvalue physicality is reported by [`OrientationState::is_physical`]
/// but never enforced, since Newton iterates may transiently leave the
/// physical set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientationState {
    m: Mat3,
}

impl OrientationState {
    /// Builds a state from a full matrix, validating symmetry and trace.
    pub fn new(m: Mat3) -> Result<Self> {
        let asym = (m - m.transpose()).abs().max();
        if asym > SYM_TOL {
            return Err(Error::InvalidParameter(format!(
                "orientation tensor not symmetric (max |a - a'| = {asym:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - 1.0).abs() > SYM_TOL {
            return Err(Error::InvalidParameter(format!(
                "orientation tensor trace {tr} != 1"
            )));
        }
        Ok(Self {
            m: 0.5 * (m + m.transpose()),
        })
    }

    /// The isotropic state I/3.
    pub fn isotropic() -> Self {
        Self {
            m: Mat3::identity() / 3.0,
        }
    }

    /// Fully aligned state e_axis (x) e_axis, axis in 0..3.
    pub fn uniaxial(axis: usize) -> Self {
        let mut m = Mat3::zeros();
        m[(axis, axis)] = 1.0;
        Self { m }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    /// Contracts to the five independent components (a11, a12, a13, a22, a23).
    pub fn indep(&self) -> Indep5 {
        pack(self)
    }

    /// True when all eigenvalues lie in [-1e-9, 1 + 1e-9].
    pub fn is_physical(&self) -> bool {
        let eig = spectral::eig_desc(&self.m);
        eig.lambda[0] <= 1.0 + PHYSICAL_SLACK && eig.lambda[2] >= -PHYSICAL_SLACK
    }
}

/// Contracts a symmetric unit-trace tensor to (a11, a12, a13, a22, a23).
///
/// The index map is r(m,n) = n - (m-1)(m-6)/2 for the upper triangle rows
/// m = 1, 2.
pub fn pack(a: &OrientationState) -> Indep5 {
    let m = a.matrix();
    Indep5::new(m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 1)], m[(1, 2)])
}

/// Rebuilds the full symmetric matrix, forcing a33 = 1 - a11 - a22 so the
/// trace is exactly 1.
pub fn unpack(v: &Indep5) -> OrientationState {
    let m = Mat3::new(
        v[0],
        v[1],
        v[2],
        v[1],
        v[3],
        v[4],
        v[2],
        v[4],
        1.0 - v[0] - v[3],
    );
    OrientationState { m }
}

/// The trace-free derivative basis (1-based index r in 1..=5):
///
/// ```text
/// E1 = diag(1,0,-1)   E2 = e1e2'+e2e1'   E3 = e1e3'+e3e1'
/// E4 = diag(0,1,-1)   E5 = e2e3'+e3e2'
/// ```
///
/// The -1 entries at (3,3) come from the a33 = 1 - a11 - a22 constraint.
/// Panics if r is outside 1..=5.
pub fn basis(r: usize) -> Mat3 {
    match r {
        1 => Mat3::from_diagonal(&crate::Vec3::new(1.0, 0.0, -1.0)),
        2 => Mat3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0),
        3 => Mat3::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0),
        4 => Mat3::from_diagonal(&crate::Vec3::new(0.0, 1.0, -1.0)),
        5 => Mat3::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0),
        _ => panic!("basis index {r} out of range 1..=5"),
    }
}

/// All five basis tensors, indexed 0..5 for slice r+1.
pub fn basis_all() -> [Mat3; 5] {
    [basis(1), basis(2), basis(3), basis(4), basis(5)]
}

/// Contracted index for symmetric pairs: r = i when i = j, 9 - i - j
/// otherwise (1-based i, j in 1..=3, result in 1..=6).
pub fn contracted_index(i: usize, j: usize) -> usize {
    debug_assert!((1..=3).contains(&i) && (1..=3).contains(&j));
    if i == j {
        i
    } else {
        9 - i - j
    }
}

/// Contracts the rate tensor to the residual 5-vector (same packing as
/// [`pack`] but without the trace constraint on the input).
pub fn pack_sym(m: &Mat3) -> Indep5 {
    Indep5::new(m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 1)], m[(1, 2)])
}

/// Dense fourth-order tensor over 3 dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4(pub [[[[f64; 3]; 3]; 3]; 3]);

/// The 24 permutations of four index slots, used by [`Tensor4::sym24`].
const PERMS4: [[usize; 4]; 24] = [
    [0, 1, 2, 3],
    [0, 1, 3, 2],
    [0, 2, 1, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 2, 3],
    [1, 0, 3, 2],
    [1, 2, 0, 3],
    [1, 2, 3, 0],
    [1, 3, 0, 2],
    [1, 3, 2, 0],
    [2, 0, 1, 3],
    [2, 0, 3, 1],
    [2, 1, 0, 3],
    [2, 1, 3, 0],
    [2, 3, 0, 1],
    [2, 3, 1, 0],
    [3, 0, 1, 2],
    [3, 0, 2, 1],
    [3, 1, 0, 2],
    [3, 1, 2, 0],
    [3, 2, 0, 1],
    [3, 2, 1, 0],
];

impl Tensor4 {
    pub fn zeros() -> Self {
        Tensor4([[[[0.0; 3]; 3]; 3]; 3])
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0[i][j][k][l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.0[i][j][k][l] = v;
    }

    /// Outer product x (x) y as a raw (unsymmetrized) tensor.
    pub fn dyad(x: &Mat3, y: &Mat3) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        t.0[i][j][k][l] = x[(i, j)] * y[(k, l)];
                    }
                }
            }
        }
        t
    }

    /// Symmetrized dyad S(x (x) y) for symmetric x, y: the 24-permutation
    /// average collapses to six pairings.
    pub fn sym_dyad(x: &Mat3, y: &Mat3) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        t.0[i][j][k][l] = (x[(i, j)] * y[(k, l)]
                            + x[(k, l)] * y[(i, j)]
                            + x[(i, k)] * y[(j, l)]
                            + x[(j, l)] * y[(i, k)]
                            + x[(i, l)] * y[(j, k)]
                            + x[(j, k)] * y[(i, l)])
                            / 6.0;
                    }
                }
            }
        }
        t
    }

    /// Average over all 24 index permutations.
    pub fn sym24(&self) -> Self {
        let mut t = Self::zeros();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let idx = [i, j, k, l];
                        let mut s = 0.0;
                        for p in &PERMS4 {
                            s += self.0[idx[p[0]]][idx[p[1]]][idx[p[2]]][idx[p[3]]];
                        }
                        t.0[i][j][k][l] = s / 24.0;
                    }
                }
            }
        }
        t
    }

    /// Double contraction with a second-order tensor on the trailing pair:
    /// `out_ij = sum_kl A_ijkl B_kl`.
    pub fn ddot2(&self, b: &Mat3) -> Mat3 {
        let mut out = Mat3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        s += self.0[i][j][k][l] * b[(k, l)];
                    }
                }
                out[(i, j)] = s;
            }
        }
        out
    }

    /// Double contraction of two fourth-order tensors on the middle pair:
    /// `out_mnkl = sum_rs self_mnrs other_rskl`.
    pub fn ddot4(&self, other: &Self) -> Self {
        let mut out = Self::zeros();
        for m in 0..3 {
            for n in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let mut s = 0.0;
                        for r in 0..3 {
                            for c in 0..3 {
                                s += self.0[m][n][r][c] * other.0[r][c][k][l];
                            }
                        }
                        out.0[m][n][k][l] = s;
                    }
                }
            }
        }
        out
    }

    /// Rotation with one matrix per index slot:
    /// `out_ijkl = q0_im q1_jn q2_kp q3_lq self_mnpq`.
    pub fn rotate_with(&self, qs: [&Mat3; 4]) -> Self {
        // Contract one slot at a time; 4 * 3^5 multiplies total.
        let mut cur = self.clone();
        for (slot, q) in qs.iter().enumerate() {
            let mut next = Self::zeros();
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            let row = [i, j, k, l][slot];
                            let mut s = 0.0;
                            for m in 0..3 {
                                let mut idx = [i, j, k, l];
                                idx[slot] = m;
                                s += q[(row, m)] * cur.0[idx[0]][idx[1]][idx[2]][idx[3]];
                            }
                            next.0[i][j][k][l] = s;
                        }
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// Rotation by a single matrix in all four slots.
    pub fn rotate(&self, q: &Mat3) -> Self {
        self.rotate_with([q, q, q, q])
    }

    /// Largest absolute entry difference against another tensor.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        m = m.max((self.0[i][j][k][l] - other.0[i][j][k][l]).abs());
                    }
                }
            }
        }
        m
    }

    pub fn scale(&mut self, s: f64) {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        self.0[i][j][k][l] *= s;
                    }
                }
            }
        }
    }

    /// self += s * other.
    pub fn axpy(&mut self, s: f64, other: &Self) {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        self.0[i][j][k][l] += s * other.0[i][j][k][l];
                    }
                }
            }
        }
    }
}

/// Free-function form of [`Tensor4::ddot2`], matching the operation name
/// used throughout the model equations.
pub fn ddot42(a4: &Tensor4, b: &Mat3) -> Mat3 {
    a4.ddot2(b)
}

/// Scalar double contraction a : b.
pub fn ddot22(a: &Mat3, b: &Mat3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += a[(i, j)] * b[(i, j)];
        }
    }
    s
}

/// Principal invariants of a unit-trace orientation tensor together with the
/// directional derivatives of II and III along the independent basis.
#[derive(Debug, Clone, Copy)]
pub struct Invariants3 {
    pub i: f64,
    pub ii: f64,
    pub iii: f64,
    pub d_ii: Indep5,
    pub d_iii: Indep5,
}

/// II = l1 l2 + l2 l3 + l3 l1 and III = l1 l2 l3 with derivatives chained
/// through the eigenvalue sensitivities (the symmetric-function combination
/// stays well defined even at degenerate spectra).
pub fn invariants(a: &OrientationState) -> Invariants3 {
    let eig = spectral::eig_desc(a.matrix());
    let [l1, l2, l3] = eig.lambda;
    let dl = spectral::eigenvalue_sensitivities_for(&eig);
    let mut d_ii = Indep5::zeros();
    let mut d_iii = Indep5::zeros();
    for r in 0..5 {
        d_ii[r] = (l2 + l3) * dl[(0, r)] + (l1 + l3) * dl[(1, r)] + (l1 + l2) * dl[(2, r)];
        d_iii[r] = l2 * l3 * dl[(0, r)] + l1 * l3 * dl[(1, r)] + l1 * l2 * dl[(2, r)];
    }
    Invariants3 {
        i: l1 + l2 + l3,
        ii: l1 * l2 + l2 * l3 + l3 * l1,
        iii: l1 * l2 * l3,
        d_ii,
        d_iii,
    }
}

/// The paper's randomly generated validation state a0.
pub fn paper_state_a0() -> OrientationState {
    unpack(&Indep5::new(0.0622, 0.0765, 0.0398, 0.5521, 0.0186))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn a0() -> OrientationState {
        paper_state_a0()
    }

    #[test]
    fn pack_isotropic() {
        let v = pack(&OrientationState::isotropic());
        assert_relative_eq!(v[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(v[1], 0.0);
        assert_eq!(v[2], 0.0);
        assert_relative_eq!(v[3], 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(v[4], 0.0);
    }

    #[test]
    fn pack_paper_state() {
        let v = pack(&a0());
        assert_eq!(v[0], 0.0622);
        assert_eq!(v[1], 0.0765);
        assert_eq!(v[2], 0.0398);
        assert_eq!(v[3], 0.5521);
        assert_eq!(v[4], 0.0186);
        // a33 forced by the trace constraint
        assert_relative_eq!(a0().matrix()[(2, 2)], 0.3857, epsilon = 1e-12);
    }

    #[test]
    fn unpack_forces_unit_trace() {
        let v = Indep5::new(0.9, -0.3, 0.2, 0.7, 0.1);
        let a = unpack(&v);
        assert_eq!(a.matrix().trace(), 1.0);
        assert_eq!(pack(&a), v);
    }

    #[test]
    fn basis_matches_trace_constraint() {
        assert_eq!(basis(1), Mat3::from_diagonal(&crate::Vec3::new(1.0, 0.0, -1.0)));
        let e2 = basis(2);
        assert_eq!(e2[(0, 1)], 1.0);
        assert_eq!(e2[(1, 0)], 1.0);
        for r in 1..=5 {
            let e = basis(r);
            assert_eq!(e.trace(), 0.0, "basis {r} not trace-free");
            assert_eq!(e, e.transpose(), "basis {r} not symmetric");
        }
    }

    #[test]
    fn basis_linearly_independent() {
        // Stack the packed basis tensors into a 5x5 matrix; it must be
        // invertible.
        let mut m = crate::Mat5::zeros();
        for r in 0..5 {
            let e = basis(r + 1);
            let p = pack_sym(&e);
            for c in 0..5 {
                m[(r, c)] = p[c];
            }
        }
        assert!(m.determinant().abs() > 0.5);
    }

    #[test]
    #[should_panic]
    fn basis_out_of_range_panics() {
        let _ = basis(6);
    }

    #[test]
    fn contracted_index_examples() {
        assert_eq!(contracted_index(1, 1), 1);
        assert_eq!(contracted_index(2, 3), 4);
        assert_eq!(contracted_index(1, 2), 6);
        assert_eq!(contracted_index(3, 1), 5);
    }

    #[test]
    fn sym24_of_identity_dyad() {
        let t = Tensor4::dyad(&Mat3::identity(), &Mat3::identity()).sym24();
        assert_relative_eq!(t.get(0, 0, 0, 0), 1.0, epsilon = 1e-15);
        assert_relative_eq!(t.get(0, 0, 1, 1), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(t.get(0, 1, 0, 1), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn sym24_idempotent_and_permutation_invariant() {
        // A deterministic non-symmetric tensor.
        let mut t = Tensor4::zeros();
        let mut x: f64 = 0.13;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        x = (x * 97.0 + 31.0).rem_euclid(7.3) - 3.0;
                        t.set(i, j, k, l, x);
                    }
                }
            }
        }
        let s = t.sym24();
        assert!(s.sym24().max_abs_diff(&s) < 1e-14);
        for p in &super::PERMS4 {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        for l in 0..3 {
                            let idx = [i, j, k, l];
                            let v = s.get(idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]);
                            assert_relative_eq!(v, s.get(i, j, k, l), epsilon = 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sym_dyad_matches_sym24_of_dyad() {
        let x = a0().matrix().to_owned();
        let y = Mat3::new(0.4, -0.1, 0.2, -0.1, 0.3, 0.05, 0.2, 0.05, -0.7);
        let fast = Tensor4::sym_dyad(&x, &y);
        let slow = Tensor4::dyad(&x, &y).sym24();
        assert!(fast.max_abs_diff(&slow) < 1e-14);
    }

    #[test]
    fn ddot42_against_scalar_loop_oracle() {
        // Deterministic pseudo-random tensor and matrix.
        let mut a4 = Tensor4::zeros();
        let mut x: f64 = 0.7;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        x = (x * 73.0 + 17.0).rem_euclid(5.1) - 2.5;
                        a4.set(i, j, k, l, x);
                    }
                }
            }
        }
        let b = Mat3::new(0.2, 1.1, -0.4, 0.9, -0.3, 0.6, -0.8, 0.5, 0.1);
        let fast = ddot42(&a4, &b);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        s += a4.get(i, j, k, l) * b[(k, l)];
                    }
                }
                assert_eq!(fast[(i, j)], s);
            }
        }
    }

    #[test]
    fn invariants_at_anchors() {
        let iso = invariants(&OrientationState::isotropic());
        assert_relative_eq!(iso.i, 1.0, epsilon = 1e-12);
        assert_relative_eq!(iso.ii, 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(iso.iii, 1.0 / 27.0, epsilon = 1e-12);

        let uni = invariants(&OrientationState::uniaxial(0));
        assert_relative_eq!(uni.ii, 0.0, epsilon = 1e-12);
        assert_relative_eq!(uni.iii, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn invariants_match_matrix_expressions() {
        let a = a0();
        let inv = invariants(&a);
        let aa = ddot22(a.matrix(), a.matrix());
        assert_relative_eq!(inv.ii, 0.5 * (1.0 - aa), epsilon = 1e-12);
        assert_relative_eq!(inv.iii, a.matrix().determinant(), epsilon = 1e-12);
    }

    #[test]
    fn invariant_derivatives_match_finite_differences() {
        let a = a0();
        let v0 = pack(&a);
        let inv = invariants(&a);
        let delta = 1e-6;
        for r in 0..5 {
            let mut vp = v0;
            let mut vm = v0;
            vp[r] += delta;
            vm[r] -= delta;
            let ip = invariants(&unpack(&vp));
            let im = invariants(&unpack(&vm));
            let fd_ii = (ip.ii - im.ii) / (2.0 * delta);
            let fd_iii = (ip.iii - im.iii) / (2.0 * delta);
            assert_relative_eq!(inv.d_ii[r], fd_ii, epsilon = 1e-7);
            assert_relative_eq!(inv.d_iii[r], fd_iii, epsilon = 1e-7);
        }
    }
}
