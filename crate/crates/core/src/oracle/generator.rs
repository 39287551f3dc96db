//! Explicit generator paths whose time-1 maps are the basic blocks.

use nalgebra::{DMatrix, Matrix2};

use super::path::{PathSegment, PathSpec};
use crate::error::{Result, SikError};
use crate::sp::block::{rot2, BasicBlock};

/// A path with `evolve(1) = materialize(block)`.
///
/// For `N2` blocks the path first performs the full plane rotation and then
/// grows the off-diagonal part, so that on the second half it runs through
/// `N2(e^{i theta}, s B)`, `s` in (0, 1]: the unit-circle spectrum and its
/// nullities match the endpoint's throughout that half.
pub fn generator_path_for(block: &BasicBlock) -> Result<PathSpec<f64>> {
    block.validate()?;
    match block {
        BasicBlock::N1 { lambda: 1, b } => PathSpec::new(
            1,
            vec![PathSegment {
                s: DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, -b]),
                dt: 1.0,
            }],
        ),
        BasicBlock::N1 { lambda: -1, b } => {
            // Shear to N1(1, -b) on [0, 1/2], then rotate by pi.
            let shear = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 2.0 * b]);
            let spin = DMatrix::from_diagonal_element(2, 2, 2.0 * std::f64::consts::PI);
            PathSpec::new(
                1,
                vec![
                    PathSegment { s: shear, dt: 0.5 },
                    PathSegment { s: spin, dt: 0.5 },
                ],
            )
        }
        BasicBlock::N1 { .. } => Err(SikError::InvalidInput("N1 lambda must be +-1".into())),
        BasicBlock::D { lambda } => {
            let mu = lambda.abs().ln();
            if *lambda > 0.0 {
                let stretch = DMatrix::from_row_slice(2, 2, &[0.0, -mu, -mu, 0.0]);
                PathSpec::new(1, vec![PathSegment { s: stretch, dt: 1.0 }])
            } else {
                // D(|lambda|) on [0, 1/2], then rotate by pi: R(pi) D(|l|) = D(lambda).
                let stretch =
                    DMatrix::from_row_slice(2, 2, &[0.0, -2.0 * mu, -2.0 * mu, 0.0]);
                let spin = DMatrix::from_diagonal_element(2, 2, 2.0 * std::f64::consts::PI);
                PathSpec::new(
                    1,
                    vec![
                        PathSegment { s: stretch, dt: 0.5 },
                        PathSegment { s: spin, dt: 0.5 },
                    ],
                )
            }
        }
        BasicBlock::R { theta } => {
            let th = theta.to_f64() * std::f64::consts::TAU;
            PathSpec::new(
                1,
                vec![PathSegment {
                    s: DMatrix::from_diagonal_element(2, 2, th),
                    dt: 1.0,
                }],
            )
        }
        BasicBlock::N2 { theta, b } => {
            let th = theta.to_f64() * std::f64::consts::TAU;
            // Segment 1: both planes rotate to diag(R, R).
            let k = Matrix2::new(0.0, -1.0, 1.0, 0.0);
            let mut s1 = DMatrix::zeros(4, 4);
            for r in 0..2 {
                for c in 0..2 {
                    s1[(r, 2 + c)] = 2.0 * th * k[(r, c)];
                    s1[(2 + r, c)] = -2.0 * th * k[(r, c)];
                }
            }
            // Segment 2: unipotent factor [[I, C], [0, I]] with C = B R(-theta).
            let bm = Matrix2::new(b[0][0], b[0][1], b[1][0], b[1][1]);
            let c = bm * rot2(-th);
            let sym_defect = (c - c.transpose()).amax();
            if sym_defect > 1e-9 {
                return Err(SikError::InvalidInput(format!(
                    "N2 block is not symplectic: C asymmetry {sym_defect:.3e}"
                )));
            }
            let c = (c + c.transpose()) * 0.5;
            let mut s2 = DMatrix::zeros(4, 4);
            for r in 0..2 {
                for col in 0..2 {
                    s2[(2 + r, 2 + col)] = -2.0 * c[(r, col)];
                }
            }
            PathSpec::new(
                2,
                vec![
                    PathSegment { s: s1, dt: 0.5 },
                    PathSegment { s: s2, dt: 0.5 },
                ],
            )
        }
    }
}

/// Diamond of the generator paths of several blocks.
pub fn generator_product_path(blocks: &[BasicBlock]) -> Result<PathSpec<f64>> {
    let mut paths = blocks.iter().map(generator_path_for);
    let first = paths
        .next()
        .ok_or_else(|| SikError::InvalidInput("empty block list".into()))??;
    paths.try_fold(first, |acc, p| acc.diamond(&p?))
}

/// Endpoint accuracy check used by tests and fixtures.
pub fn endpoint_matches(block: &BasicBlock) -> Result<f64> {
    let p = generator_path_for(block)?;
    let end = p.evolve(1.0)?;
    Ok((end - block.materialize()).amax())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Angle;
    use crate::sp::block::n2_from_sigma;
    use crate::sp::spectrum::spectrum_of;

    fn angle(t: f64) -> Angle {
        Angle::from_f64_approx(t, 1e-15).unwrap()
    }

    #[test]
    fn all_generators_hit_their_blocks() {
        let blocks = vec![
            BasicBlock::R { theta: angle(0.23) },
            BasicBlock::R { theta: angle(0.77) },
            BasicBlock::N1 { lambda: 1, b: 1.0 },
            BasicBlock::N1 { lambda: 1, b: -1.0 },
            BasicBlock::N1 { lambda: -1, b: 1.0 },
            BasicBlock::N1 { lambda: -1, b: -1.0 },
            BasicBlock::D { lambda: 2.0 },
            BasicBlock::D { lambda: -2.0 },
            n2_from_sigma(angle(0.2), 1.0, 0.1, 0.8).unwrap(),
            n2_from_sigma(angle(0.8), -1.0, 0.2, -0.5).unwrap(),
        ];
        for b in blocks {
            let err = endpoint_matches(&b).unwrap();
            assert!(err < 1e-10, "{b:?}: endpoint error {err:.3e}");
        }
    }

    #[test]
    fn hyperbolic_generator_leaves_circle() {
        let p = generator_path_for(&BasicBlock::D { lambda: 2.0 }).unwrap();
        let spec = spectrum_of(&p.evolve(0.6).unwrap(), 1e-9).unwrap();
        assert!(spec.iter().all(|f| !f.on_unit_circle));
    }

    #[test]
    fn n2_second_half_keeps_spectrum() {
        let blk = n2_from_sigma(angle(0.2), 1.0, 0.1, 0.8).unwrap();
        let p = generator_path_for(&blk).unwrap();
        for t in [0.6, 0.75, 0.9, 1.0] {
            let spec = spectrum_of(&p.evolve(t).unwrap(), 1e-9).unwrap();
            let mut angles: Vec<f64> = spec
                .iter()
                .map(|f| {
                    let mut a = f.value().arg() / std::f64::consts::TAU;
                    if a < 0.0 {
                        a += 1.0;
                    }
                    a
                })
                .collect();
            angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!(
                (angles[0] - 0.2).abs() < 1e-7 && (angles[1] - 0.8).abs() < 1e-7,
                "t={t}: spectrum moved: {angles:?}"
            );
        }
    }

    #[test]
    fn product_path_endpoint() {
        let blocks = vec![
            BasicBlock::N1 { lambda: 1, b: 1.0 },
            BasicBlock::R { theta: angle(0.3) },
        ];
        let p = generator_product_path(&blocks).unwrap();
        let end = p.endpoint();
        let expect = crate::sp::block::materialize_product(&blocks).unwrap();
        assert!((end - expect).amax() < 1e-10);
    }
}
