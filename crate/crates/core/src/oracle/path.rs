//! Piecewise-generator symplectic paths `gamma' = J S(t) gamma`, `gamma(0) = I`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SikError};
use crate::scalar::Scalar;
use crate::sp::matrix::{diamond, standard_j, symplectic_defect};

pub const SYMMETRY_TOL: f64 = 1e-12;
/// Allowed symplectic drift at segment boundaries.
pub const DRIFT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct PathSegment<F: Scalar = f64> {
    /// Symmetric generator.
    pub s: DMatrix<F>,
    pub dt: F,
}

#[derive(Debug, Clone)]
pub struct PathSpec<F: Scalar = f64> {
    pub n: usize,
    pub segments: Vec<PathSegment<F>>,
}

impl<F: Scalar> PathSpec<F> {
    pub fn new(n: usize, segments: Vec<PathSegment<F>>) -> Result<Self> {
        let p = PathSpec { n, segments };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(SikError::InvalidInput("path needs at least one segment".into()));
        }
        let dim = 2 * self.n;
        let mut total = F::zero();
        for (i, seg) in self.segments.iter().enumerate() {
            if seg.s.nrows() != dim || seg.s.ncols() != dim {
                return Err(SikError::InvalidInput(format!(
                    "segment {i}: generator must be {dim}x{dim}"
                )));
            }
            let asym = (&seg.s - seg.s.transpose()).amax();
            if asym > F::approx(SYMMETRY_TOL) {
                return Err(SikError::InvalidInput(format!(
                    "segment {i}: generator asymmetry {:.3e}",
                    num_traits::ToPrimitive::to_f64(&asym).unwrap_or(f64::NAN)
                )));
            }
            if seg.dt <= F::zero() {
                return Err(SikError::InvalidInput(format!(
                    "segment {i}: non-positive duration"
                )));
            }
            total += seg.dt;
        }
        if total <= F::zero() {
            return Err(SikError::InvalidInput("total duration must be positive".into()));
        }
        Ok(())
    }

    pub fn total_duration(&self) -> F {
        self.segments.iter().fold(F::zero(), |acc, s| acc + s.dt)
    }

    /// `exp(dt J S)` for one segment.
    pub fn segment_step(&self, seg: &PathSegment<F>, dt: F) -> DMatrix<F> {
        let j = standard_j::<F>(self.n);
        ((j * &seg.s) * dt).exp()
    }

    /// Endpoints of every segment prefix: `gamma(t_1), ..., gamma(t_k)`.
    pub fn prefix_endpoints(&self) -> Vec<DMatrix<F>> {
        let dim = 2 * self.n;
        let mut acc = DMatrix::<F>::identity(dim, dim);
        let mut out = Vec::with_capacity(self.segments.len());
        for seg in &self.segments {
            acc = self.segment_step(seg, seg.dt) * acc;
            out.push(acc.clone());
        }
        out
    }

    /// `gamma(t)` for `0 <= t <= total_duration`.
    pub fn evolve(&self, t: F) -> Result<DMatrix<F>> {
        if t < F::zero() {
            return Err(SikError::InvalidInput("evolve at negative time".into()));
        }
        let dim = 2 * self.n;
        let mut acc = DMatrix::<F>::identity(dim, dim);
        let mut remaining = t;
        for seg in &self.segments {
            if remaining <= seg.dt {
                return Ok(self.segment_step(seg, remaining) * acc);
            }
            acc = self.segment_step(seg, seg.dt) * acc;
            remaining -= seg.dt;
        }
        let eps = F::approx(1e-9);
        if remaining <= eps {
            return Ok(acc);
        }
        Err(SikError::InvalidInput(
            "evolve time exceeds total duration; iterate the path first".into(),
        ))
    }

    /// Endpoint `gamma(tau)`.
    pub fn endpoint(&self) -> DMatrix<F> {
        self.prefix_endpoints().pop().expect("non-empty path")
    }

    /// The m-th iterate `gamma^m(t) = gamma(t - j tau) gamma(tau)^j`, realized
    /// by repeating the segment list m times.
    pub fn iterate(&self, m: u64) -> Result<PathSpec<F>> {
        if m == 0 {
            return Err(SikError::InvalidInput("iterate requires m >= 1".into()));
        }
        let mut segments = Vec::with_capacity(self.segments.len() * m as usize);
        for _ in 0..m {
            segments.extend(self.segments.iter().cloned());
        }
        PathSpec::new(self.n, segments)
    }

    /// Diamond sum of two paths; segment boundaries are merged.
    pub fn diamond(&self, other: &PathSpec<F>) -> Result<PathSpec<F>> {
        let ta = self.total_duration();
        let tb = other.total_duration();
        let rel = nalgebra::ComplexField::abs(ta - tb)
            / nalgebra::RealField::max(ta, nalgebra::RealField::max(tb, F::one()));
        if rel > F::approx(1e-12) {
            return Err(SikError::InvalidInput(
                "diamond of paths with different durations".into(),
            ));
        }
        // Merge breakpoints.
        let breaks = |p: &PathSpec<F>| -> Vec<F> {
            let mut acc = F::zero();
            let mut out = vec![F::zero()];
            for s in &p.segments {
                acc += s.dt;
                out.push(acc);
            }
            out
        };
        let mut cuts: Vec<F> = breaks(self).into_iter().chain(breaks(other)).collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| nalgebra::ComplexField::abs(*a - *b) < F::approx(1e-14));
        let gen_at = |p: &PathSpec<F>, t: F| -> DMatrix<F> {
            let mut acc = F::zero();
            for s in &p.segments {
                acc += s.dt;
                if t < acc {
                    return s.s.clone();
                }
            }
            p.segments.last().expect("non-empty").s.clone()
        };
        let mut segments = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = (a + b) * F::approx(0.5);
            let s = diamond(&gen_at(self, mid), &gen_at(other, mid))?;
            segments.push(PathSegment { s, dt: b - a });
        }
        PathSpec::new(self.n + other.n, segments)
    }

    /// Conjugated path `P^{-1} gamma P`; generators map to `P^T S P`.
    pub fn conjugate(&self, p: &DMatrix<F>) -> Result<PathSpec<F>> {
        let defect = symplectic_defect(p)?;
        if defect > F::approx(1e-9) {
            return Err(SikError::NotSymplectic {
                defect: num_traits::ToPrimitive::to_f64(&defect).unwrap_or(f64::NAN),
                tol: 1e-9,
            });
        }
        let segments = self
            .segments
            .iter()
            .map(|seg| PathSegment {
                s: p.transpose() * &seg.s * p,
                dt: seg.dt,
            })
            .collect();
        PathSpec::new(self.n, segments)
    }

    /// Symplectic drift max over segment boundaries.
    pub fn boundary_drift(&self) -> Result<F> {
        let mut worst = F::zero();
        for e in self.prefix_endpoints() {
            worst = nalgebra::RealField::max(worst, symplectic_defect(&e)?);
        }
        Ok(worst)
    }
}

/// JSON schema: {"n": int, "segments": [{"S": [[...]], "dt": real}]}
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpecJson {
    pub n: usize,
    pub segments: Vec<PathSegmentJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSegmentJson {
    #[serde(rename = "S")]
    pub s: Vec<Vec<f64>>,
    pub dt: f64,
}

impl PathSpecJson {
    pub fn to_path(&self) -> Result<PathSpec<f64>> {
        let dim = 2 * self.n;
        let segments = self
            .segments
            .iter()
            .enumerate()
            .map(|(i, seg)| {
                if seg.s.len() != dim || seg.s.iter().any(|r| r.len() != dim) {
                    return Err(SikError::InvalidInput(format!(
                        "segment {i}: S must be {dim}x{dim}"
                    )));
                }
                Ok(PathSegment {
                    s: DMatrix::from_fn(dim, dim, |r, c| seg.s[r][c]),
                    dt: seg.dt,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PathSpec::new(self.n, segments)
    }

    pub fn from_path(p: &PathSpec<f64>) -> Self {
        PathSpecJson {
            n: p.n,
            segments: p
                .segments
                .iter()
                .map(|seg| PathSegmentJson {
                    s: (0..seg.s.nrows())
                        .map(|r| (0..seg.s.ncols()).map(|c| seg.s[(r, c)]).collect())
                        .collect(),
                    dt: seg.dt,
                })
                .collect(),
        }
    }
}
