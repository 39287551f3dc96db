//! Recovery of the homotopy normal-form decomposition from a raw matrix.
//!
//! Supported unit-circle structures: eigenvalues +-1 of algebraic multiplicity
//! at most two, simple or doubled rotation pairs, `N2`-type doubled pairs with
//! one-dimensional eigenspaces, plus an arbitrary circle-free hyperbolic part.
//! Anything else (higher multiplicity at +-1, coinciding angle clusters beyond
//! multiplicity two, ambiguous circle distances) is an explicit
//! unsupported-structure error, never a silent guess.

use nalgebra::{Complex, DMatrix};

use super::krein::{kernel_basis, n2_triviality_from_matrix, root_space, to_complex};
use super::matrix::{standard_j, SymplecticMatrix};
use super::spectrum::{spectrum_of, CLUSTER_TOL};
use crate::error::{Result, SikError};
use crate::idx::decomp::NormalFormDecomposition;
use crate::num::Angle;
use crate::sp::block::N2Class;

/// Accuracy assumed for eigenvalue angles extracted from the solver.
const ANGLE_ABS_ERR: f64 = 1e-12;

pub fn recover_decomposition(
    m: &SymplecticMatrix,
    circle_tol: f64,
) -> Result<NormalFormDecomposition> {
    let n = m.n();
    let mat = m.matrix();
    let spec = spectrum_of(mat, circle_tol)?;

    let mut p = [0u32; 3];
    let mut q = [0u32; 3];
    let mut thetas: Vec<Angle> = Vec::new();
    let mut alphas: Vec<Angle> = Vec::new();
    let mut betas: Vec<Angle> = Vec::new();
    let mut hyp_dim = 0usize;

    let mc = to_complex(mat);

    for f in &spec {
        let v = f.value();
        // Ambiguous circle distance is a loud error.
        if !f.on_unit_circle && f.circle_margin < 30.0 * circle_tol {
            return Err(SikError::UnsupportedStructure(format!(
                "eigenvalue {v} at ambiguous distance {:.3e} from the unit circle",
                f.circle_margin
            )));
        }
        if !f.on_unit_circle {
            hyp_dim += f.multiplicity;
            continue;
        }
        // Unit-circle eigenvalue.
        if (v - Complex::new(1.0, 0.0)).norm() < CLUSTER_TOL {
            classify_unipotent(mat, f.multiplicity, 1.0, &mut p)?;
        } else if (v + Complex::new(1.0, 0.0)).norm() < CLUSTER_TOL {
            classify_unipotent(mat, f.multiplicity, -1.0, &mut q)?;
        } else if v.im > 0.0 {
            classify_pair(&mc, n, v, f.multiplicity, &mut thetas, &mut alphas, &mut betas)?;
        }
        // Lower-half conjugates are handled together with their upper partner.
    }

    let sort_key = |a: &Angle| a.to_f64();
    thetas.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
    alphas.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
    betas.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());

    let dec = NormalFormDecomposition {
        n,
        p,
        q,
        thetas_over_2pi: thetas,
        alphas_over_2pi: alphas,
        betas_over_2pi: betas,
        hyp_dim,
    };
    dec.validate().map_err(|e| {
        SikError::InternalInconsistency(format!("recovered decomposition inconsistent: {e}"))
    })?;
    Ok(dec)
}

/// Classify the blocks at eigenvalue +1 or -1 into `[b>0, b=0 (identity), b<0]` counts.
fn classify_unipotent(
    mat: &DMatrix<f64>,
    multiplicity: usize,
    lambda: f64,
    counts: &mut [u32; 3],
) -> Result<()> {
    if multiplicity != 2 {
        return Err(SikError::UnsupportedStructure(format!(
            "eigenvalue {lambda} has multiplicity {multiplicity}, only 2 is supported"
        )));
    }
    let dim = mat.nrows();
    let shifted = mat - DMatrix::<f64>::identity(dim, dim) * lambda;
    // Root space basis from the squared shift.
    let shifted2 = &shifted * &shifted;
    let basis = real_kernel(&shifted2, 1e-7);
    if basis.ncols() != 2 {
        return Err(SikError::UnsupportedStructure(format!(
            "root space of {lambda} has dimension {}, expected 2",
            basis.ncols()
        )));
    }
    // Restriction of (M - lambda) to the root space, in basis coordinates.
    let a_ambient = &shifted * &basis;
    let a_coord = basis.transpose() * &a_ambient;
    let scale = mat.amax().max(1.0);
    if a_coord.amax() < 1e-8 * scale {
        counts[1] += 1; // identity-type block
        return Ok(());
    }
    // Rank-one shear: pick w with (M - lambda) w != 0, set v = (M - lambda) w.
    let col = if a_coord.column(0).amax() >= a_coord.column(1).amax() { 0 } else { 1 };
    let w = basis.column(col).into_owned();
    let v = &shifted * &w;
    let j = standard_j::<f64>(dim / 2);
    let kappa = (v.transpose() * &j * &w)[(0, 0)];
    if kappa.abs() < 1e-9 * scale {
        return Err(SikError::UnsupportedStructure(format!(
            "shear invariant at {lambda} too close to zero"
        )));
    }
    if kappa < 0.0 {
        counts[0] += 1; // b > 0
    } else {
        counts[2] += 1; // b < 0
    }
    Ok(())
}

/// Classify a conjugate pair at `omega` (upper half) of the given multiplicity.
fn classify_pair(
    mc: &DMatrix<Complex<f64>>,
    n: usize,
    omega: Complex<f64>,
    multiplicity: usize,
    thetas: &mut Vec<Angle>,
    alphas: &mut Vec<Angle>,
    betas: &mut Vec<Angle>,
) -> Result<()> {
    let t_upper = {
        let mut t = omega.arg() / std::f64::consts::TAU;
        if t < 0.0 {
            t += 1.0;
        }
        t
    };
    let angle_at = |t: f64| Angle::from_f64_approx(t, ANGLE_ABS_ERR);
    let dim = mc.nrows();
    let shifted = mc - DMatrix::<Complex<f64>>::identity(dim, dim) * omega;
    let eigvecs = kernel_basis(&shifted, 1e-9);
    let geom = eigvecs.ncols();
    let j = to_complex(&standard_j::<f64>(n));
    let i_unit = Complex::new(0.0, 1.0);
    match (multiplicity, geom) {
        (1, 1) => {
            // Simple rotation pair: the block angle is the Krein-negative side.
            let u: nalgebra::DVector<Complex<f64>> = eigvecs.column(0).into();
            let g = ((u.adjoint() * (&j * &u))[(0, 0)] * i_unit).re;
            let t = if g < 0.0 { t_upper } else { 1.0 - t_upper };
            thetas.push(angle_at(t)?);
        }
        (2, 2) => {
            // Two semisimple rotation blocks; split sides by the Krein signature.
            let basis = root_space(mc, omega, 1e-9);
            if basis.ncols() != 2 {
                return Err(SikError::UnsupportedStructure(format!(
                    "semisimple pair at angle {t_upper} with bad root space"
                )));
            }
            let gram = basis.adjoint() * ((&j * &basis).map(|z| z * i_unit));
            let herm = (gram.clone() + gram.adjoint()) * Complex::new(0.5, 0.0);
            let eig = herm.symmetric_eigen();
            for e in eig.eigenvalues.iter() {
                let t = if *e < 0.0 { t_upper } else { 1.0 - t_upper };
                thetas.push(angle_at(t)?);
            }
        }
        (2, 1) => {
            // N2-type pair; canonical upper-half angle, triviality by the
            // second-order Krein invariant.
            let mreal = DMatrix::from_fn(dim, dim, |r, c| mc[(r, c)].re);
            let class = n2_triviality_from_matrix(&mreal, omega, 1e-9)?;
            let t = angle_at(t_upper)?;
            match class {
                N2Class::NonTrivial => alphas.push(t),
                N2Class::Trivial => betas.push(t),
            }
        }
        _ => {
            return Err(SikError::UnsupportedStructure(format!(
                "angle cluster at {t_upper} with multiplicity {multiplicity}, \
                 geometric multiplicity {geom}"
            )));
        }
    }
    Ok(())
}

/// Orthonormal basis of the kernel of a real matrix, columns of the result.
fn real_kernel(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("svd with v");
    let scale = svd.singular_values.iter().fold(0.0f64, |m, s| m.max(*s)).max(1.0);
    let mut cols = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= rel_tol * scale {
            cols.push(vt.row(i).transpose());
        }
    }
    if cols.is_empty() {
        return DMatrix::zeros(a.nrows(), 0);
    }
    DMatrix::from_columns(&cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Angle;
    use crate::sp::block::{materialize_product, n2_from_sigma, BasicBlock};

    fn angle(t: f64) -> Angle {
        Angle::from_f64_approx(t, 1e-15).unwrap()
    }

    fn recover(blocks: &[BasicBlock]) -> NormalFormDecomposition {
        let m = SymplecticMatrix::new(materialize_product(blocks).unwrap()).unwrap();
        recover_decomposition(&m, 1e-9).unwrap()
    }

    #[test]
    fn already_normal_form() {
        let d = recover(&[
            BasicBlock::N1 { lambda: 1, b: 1.0 },
            BasicBlock::R { theta: angle(0.23) },
            BasicBlock::R { theta: angle(0.71) },
        ]);
        assert_eq!(d.p, [1, 0, 0]);
        assert_eq!(d.q, [0, 0, 0]);
        assert_eq!(d.r(), 2);
        assert_eq!(d.hyp_dim, 0);
        let ts: Vec<f64> = d.thetas_over_2pi.iter().map(|a| a.to_f64()).collect();
        assert!((ts[0] - 0.23).abs() < 1e-9);
        assert!((ts[1] - 0.71).abs() < 1e-9);
    }

    #[test]
    fn shear_signs_distinguished() {
        let d = recover(&[BasicBlock::N1 { lambda: 1, b: -2.0 }, BasicBlock::D { lambda: 3.0 }]);
        assert_eq!(d.p, [0, 0, 1]);
        assert_eq!(d.hyp_dim, 2);
        let d2 = recover(&[
            BasicBlock::N1 { lambda: -1, b: 1.0 },
            BasicBlock::N1 { lambda: 1, b: 1.0 },
        ]);
        assert_eq!(d2.q, [1, 0, 0]);
        assert_eq!(d2.p, [1, 0, 0]);
        let d3 = recover(&[
            BasicBlock::N1 { lambda: -1, b: -0.5 },
            BasicBlock::N1 { lambda: 1, b: 1.0 },
        ]);
        assert_eq!(d3.q, [0, 0, 1]);
    }

    #[test]
    fn n2_blocks_split_by_triviality() {
        let nontriv = n2_from_sigma(angle(0.2), 1.0, 0.1, 0.7).unwrap();
        let triv = n2_from_sigma(angle(0.35), -0.8, 0.2, -0.9).unwrap();
        let d = recover(&[BasicBlock::N1 { lambda: 1, b: 1.0 }, nontriv, triv]);
        assert_eq!(d.n, 5);
        assert_eq!(d.r_star(), 1);
        assert_eq!(d.r_zero(), 1);
        assert!((d.alphas_over_2pi[0].to_f64() - 0.2).abs() < 1e-9);
        assert!((d.betas_over_2pi[0].to_f64() - 0.35).abs() < 1e-9);
        assert!(d.is_elliptic_nondegenerate_shape());
    }

    #[test]
    fn rotation_angle_beyond_pi_kept() {
        // R(theta) with theta/2pi = 0.71: eigenvalue e^{2 pi i 0.71} lies in the
        // lower half plane; the Krein pick must return 0.71, not 0.29.
        let d = recover(&[BasicBlock::N1 { lambda: 1, b: 1.0 }, BasicBlock::R { theta: angle(0.71) }]);
        assert_eq!(d.r(), 1);
        assert!((d.thetas_over_2pi[0].to_f64() - 0.71).abs() < 1e-9);
    }

    #[test]
    fn quadruple_one_rejected() {
        let m = SymplecticMatrix::new(
            materialize_product(&[
                BasicBlock::N1 { lambda: 1, b: 1.0 },
                BasicBlock::N1 { lambda: 1, b: 0.0 },
            ])
            .unwrap(),
        )
        .unwrap();
        assert!(matches!(
            recover_decomposition(&m, 1e-9),
            Err(SikError::UnsupportedStructure(_))
        ));
    }

    #[test]
    fn doubled_rotation_pair_split() {
        let d = recover(&[
            BasicBlock::N1 { lambda: 1, b: 1.0 },
            BasicBlock::R { theta: angle(0.23) },
            BasicBlock::R { theta: angle(0.77) },
        ]);
        // 0.23 and 0.77 are conjugate angles: e^{+-2 pi i 0.23} as a cluster of
        // multiplicity 2, semisimple, one Krein-negative on each side.
        assert_eq!(d.r(), 2);
        let ts: Vec<f64> = d.thetas_over_2pi.iter().map(|a| a.to_f64()).collect();
        assert!((ts[0] - 0.23).abs() < 1e-9 && (ts[1] - 0.77).abs() < 1e-9);
    }
}
