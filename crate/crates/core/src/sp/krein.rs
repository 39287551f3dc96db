//! Krein signature of unit-circle eigenvalues.
//!
//! The form is `G(xi) = sqrt(-1) * (J xi) . conj(xi)`, Hermitian on the root
//! space of an eigenvalue on the unit circle. For a basic rotation block the
//! signature at `e^{i theta}` is (0, 1); signatures add under diamond sums and
//! are invariant under symplectic conjugation. For non-semisimple `N2` blocks
//! the signature on the root space is always (1, 1); the trivial/non-trivial
//! distinction is carried by a second-order invariant (see
//! [`n2_triviality_from_matrix`]), validated against the numeric splitting
//! oracle.

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SikError};
use crate::sp::block::N2Class;
use crate::sp::matrix::{standard_j, SymplecticMatrix};

type CMat = DMatrix<Complex<f64>>;
type CVec = DVector<Complex<f64>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KreinSignature {
    pub omega_re: f64,
    pub omega_im: f64,
    pub pos: usize,
    pub neg: usize,
}

pub(crate) fn to_complex(m: &DMatrix<f64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |r, c| Complex::new(m[(r, c)], 0.0))
}

/// Orthonormal basis of the (numerical) kernel of `a`, columns of the result.
pub(crate) fn kernel_basis(a: &CMat, tol: f64) -> CMat {
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("svd with v requested");
    let scale = svd.singular_values.iter().fold(0.0f64, |m, s| m.max(*s)).max(1.0);
    let mut cols: Vec<CVec> = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= tol * scale {
            cols.push(vt.row(i).transpose().map(|z| z.conj()));
        }
    }
    if cols.is_empty() {
        return CMat::zeros(a.nrows(), 0);
    }
    CMat::from_columns(&cols)
}

/// Root space of `omega`: kernel of `(M - omega I)^k` grown until stable.
pub(crate) fn root_space(m: &CMat, omega: Complex<f64>, tol: f64) -> CMat {
    let dim = m.nrows();
    let shifted = m - CMat::identity(dim, dim) * omega;
    let mut power = shifted.clone();
    let mut prev = kernel_basis(&power, tol);
    for _ in 1..dim {
        power = &power * &shifted;
        // Normalize to keep singular values in range.
        let norm = power.norm();
        if norm > 0.0 {
            power /= Complex::new(norm, 0.0);
        }
        let next = kernel_basis(&power, tol);
        if next.ncols() == prev.ncols() {
            return prev;
        }
        prev = next;
    }
    prev
}

/// Hermitian matrix of the Krein form on the given (column) basis.
fn krein_gram(basis: &CMat, n: usize) -> CMat {
    let j = to_complex(&standard_j::<f64>(n));
    let i = Complex::new(0.0, 1.0);
    // G(x, y) = y^* (i J) x; Gram[(a,b)] = G(v_b, v_a)? We want the matrix of the
    // sesquilinear form: Gram = basis^* (iJ) basis, Hermitian.
    basis.adjoint() * (j * basis.clone()).map(|z| z * i)
}

/// Signature (pos, neg) of the Krein form on the root space of `omega`.
///
/// `omega` must be a unit-circle eigenvalue different from +-1 for the spec
/// contract, although the computation itself is generic.
pub fn krein_signs(m: &SymplecticMatrix, omega: Complex<f64>, tol: f64) -> Result<KreinSignature> {
    let mc = to_complex(m.matrix());
    let basis = root_space(&mc, omega, tol.max(1e-12).sqrt() * 1e-2);
    if basis.ncols() == 0 {
        return Err(SikError::InvalidInput(format!(
            "omega = {omega} is not an eigenvalue"
        )));
    }
    let gram = krein_gram(&basis, m.n());
    let herm = (gram.clone() + gram.adjoint()) * Complex::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(1e-30);
    let mut pos = 0;
    let mut neg = 0;
    for e in eig.eigenvalues.iter() {
        if *e > 1e-8 * scale {
            pos += 1;
        } else if *e < -1e-8 * scale {
            neg += 1;
        } else {
            return Err(SikError::UnsupportedStructure(format!(
                "Krein form degenerate on root space of {omega}"
            )));
        }
    }
    if pos + neg != basis.ncols() {
        return Err(SikError::InternalInconsistency(
            "Krein signature does not fill the root space".into(),
        ));
    }
    Ok(KreinSignature {
        omega_re: omega.re,
        omega_im: omega.im,
        pos,
        neg,
    })
}

/// Second-order Krein invariant deciding `N2` triviality from a raw matrix.
///
/// For an eigenvalue `omega = e^{i theta}` (theta != 0, pi) with a one
/// dimensional eigenspace inside a two dimensional root space, take an
/// eigenvector `u` and a Jordan vector `w` with `(M - omega) w = u`. The
/// number `Re[G(u, w)] * sign(sin theta)` is invariant up to positive scaling
/// and is negative exactly for the non-trivial class.
pub fn n2_triviality_from_matrix(
    m: &DMatrix<f64>,
    omega: Complex<f64>,
    tol: f64,
) -> Result<N2Class> {
    let n = m.nrows() / 2;
    let mc = to_complex(m);
    let dim = mc.nrows();
    let shifted = &mc - CMat::identity(dim, dim) * omega;
    let eigvecs = kernel_basis(&shifted, tol);
    if eigvecs.ncols() != 1 {
        return Err(SikError::UnsupportedStructure(format!(
            "expected geometric multiplicity 1 at {omega}, got {}",
            eigvecs.ncols()
        )));
    }
    let u: CVec = eigvecs.column(0).into();
    // Minimum-norm solution of (M - omega) w = u.
    let svd = shifted.clone().svd(true, true);
    let w = svd
        .solve(&u, tol)
        .map_err(|e| SikError::UnsupportedStructure(format!("Jordan solve failed: {e}")))?;
    let resid = (&shifted * &w - &u).norm();
    if resid > 1e-6 {
        return Err(SikError::UnsupportedStructure(format!(
            "no Jordan vector at {omega}: residual {resid:.3e}"
        )));
    }
    let j = to_complex(&standard_j::<f64>(n));
    let i = Complex::new(0.0, 1.0);
    let g_uw = (w.adjoint() * (&j * &u))[(0, 0)] * i;
    let sin_sign = if omega.im > 0.0 { 1.0 } else { -1.0 };
    let kappa = g_uw.re * sin_sign;
    if kappa.abs() < 1e-10 * u.norm() * w.norm().max(1.0) {
        return Err(SikError::UnsupportedStructure(
            "N2 triviality invariant too close to zero".into(),
        ));
    }
    Ok(if kappa < 0.0 { N2Class::NonTrivial } else { N2Class::Trivial })
}
