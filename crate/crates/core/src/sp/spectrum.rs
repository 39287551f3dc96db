//! Floquet spectrum extraction and ellipticity classification.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SikError};
use crate::num::cf;
use crate::sp::matrix::SymplecticMatrix;

/// Default tolerance for |lambda| - 1 when deciding circle membership.
pub const CIRCLE_TOL: f64 = 1e-9;
/// Clustering radius for grouping nearby eigenvalues into one multiplier.
/// Defective eigenvalues of a 2-block split numerically like sqrt(eps), so
/// this must sit well above 1.5e-8.
pub const CLUSTER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FloquetMultiplier {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub on_unit_circle: bool,
    /// ||lambda| - 1| for this multiplier.
    pub circle_margin: f64,
}

impl FloquetMultiplier {
    pub fn value(&self) -> Complex<f64> {
        Complex::new(self.re, self.im)
    }
}

/// Eigenvalues clustered into multipliers, in deterministic order
/// (by angle, then by |lambda|).
pub fn floquet_spectrum(m: &SymplecticMatrix, tol: f64) -> Result<Vec<FloquetMultiplier>> {
    spectrum_of(m.matrix(), tol)
}

pub(crate) fn spectrum_of(mat: &DMatrix<f64>, tol: f64) -> Result<Vec<FloquetMultiplier>> {
    let eig = mat.complex_eigenvalues();
    if eig.iter().any(|l| !l.re.is_finite() || !l.im.is_finite()) {
        return Err(SikError::Oracle("eigen-solver returned non-finite values".into()));
    }
    let mut vals: Vec<Complex<f64>> = eig.iter().copied().collect();
    vals.sort_by(|a, b| {
        let ka = (a.arg(), a.norm());
        let kb = (b.arg(), b.norm());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut clusters: Vec<(Complex<f64>, usize)> = Vec::new();
    'outer: for v in vals {
        for (c, count) in clusters.iter_mut() {
            if (v - *c).norm() < CLUSTER_TOL {
                // Running mean keeps the representative centered.
                *c = (*c * (*count as f64) + v) / (*count as f64 + 1.0);
                *count += 1;
                continue 'outer;
            }
        }
        clusters.push((v, 1));
    }
    let mut out: Vec<FloquetMultiplier> = clusters
        .into_iter()
        .map(|(v, mult)| {
            let margin = (v.norm() - 1.0).abs();
            // Snap near-real clusters onto the axis for readability.
            let (re, im) = if v.im.abs() < CLUSTER_TOL { (v.re, 0.0) } else { (v.re, v.im) };
            FloquetMultiplier {
                re,
                im,
                multiplicity: mult,
                on_unit_circle: margin <= tol,
                circle_margin: margin,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (a.value().arg(), a.value().norm())
            .partial_cmp(&(b.value().arg(), b.value().norm()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let total: usize = out.iter().map(|f| f.multiplicity).sum();
    if total != mat.nrows() {
        return Err(SikError::InternalInconsistency(format!(
            "multiplicities sum to {total}, expected {}",
            mat.nrows()
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticityClass {
    Elliptic,
    Hyperbolic,
    IrrationallyElliptic,
    Mixed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Classification {
    pub nondegenerate: bool,
    pub class: EllipticityClass,
    /// min ||lambda| - 1| over multipliers assigned to the circle (borderline visibility).
    pub min_circle_margin_on: f64,
    /// min ||lambda| - 1| over multipliers assigned off the circle.
    pub min_circle_margin_off: f64,
    pub spectrum: Vec<FloquetMultiplier>,
}

/// Classify a closed-characteristic monodromy.
///
/// Requires eigenvalue 1 with algebraic multiplicity >= 2; errors otherwise.
/// Irrationality of the rotation angles is decided by the continued-fraction
/// test at the given knobs.
pub fn classify(m: &SymplecticMatrix, tol: f64) -> Result<Classification> {
    classify_with(m, tol, cf::DEFAULT_Q_MAX, cf::DEFAULT_TOL)
}

pub fn classify_with(
    m: &SymplecticMatrix,
    tol: f64,
    q_max: u64,
    rat_tol: f64,
) -> Result<Classification> {
    let spec = floquet_spectrum(m, tol)?;
    let one = spec
        .iter()
        .find(|f| (f.value() - Complex::new(1.0, 0.0)).norm() < CLUSTER_TOL)
        .ok_or(SikError::NotAMonodromy)?;
    if one.multiplicity < 2 {
        return Err(SikError::NotAMonodromy);
    }
    let nondegenerate = one.multiplicity == 2;
    let all_on = spec.iter().all(|f| f.on_unit_circle);
    let others_off = spec
        .iter()
        .filter(|f| (f.value() - Complex::new(1.0, 0.0)).norm() >= CLUSTER_TOL)
        .all(|f| !f.on_unit_circle);

    let class = if all_on {
        let mut irrational = nondegenerate;
        for f in &spec {
            let v = f.value();
            if (v - Complex::new(1.0, 0.0)).norm() < CLUSTER_TOL {
                continue;
            }
            // angle as a fraction of 2pi; irrational multiple of pi <=> t*2 irrational,
            // which is equivalent to t irrational.
            let mut t = v.arg() / std::f64::consts::TAU;
            if t < 0.0 {
                t += 1.0;
            }
            let verdict = cf::detect_rational_f64(t, q_max, rat_tol);
            if verdict.rational {
                irrational = false;
                break;
            }
        }
        if irrational && nondegenerate {
            EllipticityClass::IrrationallyElliptic
        } else {
            EllipticityClass::Elliptic
        }
    } else if nondegenerate && others_off {
        EllipticityClass::Hyperbolic
    } else {
        EllipticityClass::Mixed
    };

    let min_on = spec
        .iter()
        .filter(|f| f.on_unit_circle)
        .map(|f| f.circle_margin)
        .fold(f64::INFINITY, f64::min);
    let min_off = spec
        .iter()
        .filter(|f| !f.on_unit_circle)
        .map(|f| f.circle_margin)
        .fold(f64::INFINITY, f64::min);

    Ok(Classification {
        nondegenerate,
        class,
        min_circle_margin_on: min_on,
        min_circle_margin_off: min_off,
        spectrum: spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Angle;
    use crate::sp::block::{materialize_product, BasicBlock};

    fn sym(blocks: &[BasicBlock]) -> SymplecticMatrix {
        SymplecticMatrix::new(materialize_product(blocks).unwrap()).unwrap()
    }

    #[test]
    fn rotation_spectrum() {
        let m = sym(&[BasicBlock::R {
            theta: Angle::rational(1, 6).unwrap(),
        }]);
        let s = floquet_spectrum(&m, CIRCLE_TOL).unwrap();
        assert_eq!(s.len(), 2);
        for f in &s {
            assert!(f.on_unit_circle);
            assert_eq!(f.multiplicity, 1);
        }
        // e^{+-i pi/3}
        assert!(s.iter().any(|f| (f.im - (std::f64::consts::PI / 3.0).sin()).abs() < 1e-9));
    }

    #[test]
    fn shear_double_one() {
        let m = sym(&[BasicBlock::N1 { lambda: 1, b: 1.0 }]);
        let s = floquet_spectrum(&m, CIRCLE_TOL).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].multiplicity, 2);
        assert!((s[0].value() - Complex::new(1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn d_block_off_circle() {
        let m = sym(&[BasicBlock::D { lambda: 2.0 }]);
        let s = floquet_spectrum(&m, CIRCLE_TOL).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|f| !f.on_unit_circle));
        assert!(s.iter().any(|f| (f.re - 2.0).abs() < 1e-12));
        assert!(s.iter().any(|f| (f.re - 0.5).abs() < 1e-12));
    }

    #[test]
    fn classify_irrationally_elliptic() {
        // N1(1,1) diamond R(sqrt(2) * pi): angle t = sqrt(2)/2 mod 1 irrational.
        let t = std::f64::consts::SQRT_2 / 2.0;
        let m = sym(&[
            BasicBlock::N1 { lambda: 1, b: 1.0 },
            BasicBlock::R {
                theta: Angle::from_f64_approx(t, 1e-15).unwrap(),
            },
        ]);
        let c = classify(&m, CIRCLE_TOL).unwrap();
        assert!(c.nondegenerate);
        assert_eq!(c.class, EllipticityClass::IrrationallyElliptic);
    }

    #[test]
    fn classify_hyperbolic() {
        let m = sym(&[
            BasicBlock::N1 { lambda: 1, b: 1.0 },
            BasicBlock::D { lambda: 2.0 },
        ]);
        let c = classify(&m, CIRCLE_TOL).unwrap();
        assert_eq!(c.class, EllipticityClass::Hyperbolic);
    }

    #[test]
    fn classify_rejects_non_monodromy() {
        let m = sym(&[BasicBlock::R {
            theta: Angle::rational(1, 6).unwrap(),
        }]);
        assert!(matches!(classify(&m, CIRCLE_TOL), Err(SikError::NotAMonodromy)));
    }

    #[test]
    fn classify_rational_rotation_elliptic_not_irrational() {
        let m = sym(&[
            BasicBlock::N1 { lambda: 1, b: 1.0 },
            BasicBlock::R {
                theta: Angle::rational(1, 3).unwrap(),
            },
        ]);
        let c = classify(&m, CIRCLE_TOL).unwrap();
        assert_eq!(c.class, EllipticityClass::Elliptic);
    }
}
