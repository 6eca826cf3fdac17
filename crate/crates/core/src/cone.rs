//! Hyperbolic cones of radius `r0` over a finite base.
//!
//! The distance between `(y, r)` and `(y', r')` is the hyperbolic law of
//! cosines with angle `min(π, d(y,y') / sinh r0)`, evaluated in a form that
//! stays accurate when the two points are close.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::group::{quotient_metric, GroupAction};
use crate::metric::{FiniteMetricSpace, PointId};

/// Default number of sampled radii.
pub const DEFAULT_RADII: usize = 8;

/// A point of a cone: the apex or a base point at some radius.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum ConePoint {
    Apex,
    At { base: usize, r: f64 },
}

impl ConePoint {
    pub fn radius(&self) -> f64 {
        match *self {
            ConePoint::Apex => 0.0,
            ConePoint::At { r, .. } => r,
        }
    }
}

/// Angle between two base points seen from the apex.
pub fn angle(base_distance: f64, r0: f64) -> f64 {
    (base_distance / r0.sinh()).min(PI)
}

/// `arccosh(cosh r cosh r' − sinh r sinh r' cos θ)` computed via
/// `log1p(u + sqrt(u(u+2)))` with `u` the argument minus one.
#[inline]
pub fn law_of_cosines(r: f64, r2: f64, theta: f64) -> f64 {
    let half = 0.5 * (r - r2);
    let s = (0.5 * theta).sin();
    let u = 2.0 * half.sinh().powi(2) + 2.0 * r.sinh() * r2.sinh() * s * s;
    if u <= 0.0 {
        return 0.0;
    }
    (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

/// Cone distance from radii and the base distance of the two points.
#[inline]
pub fn cone_formula(r: f64, r2: f64, base_distance: f64, r0: f64) -> f64 {
    law_of_cosines(r, r2, angle(base_distance, r0))
}

/// Distance at the rim as a function of the base distance.
pub fn mu(t: f64, r0: f64) -> f64 {
    cone_formula(r0, r0, t, r0)
}

/// Lower and upper comparison bounds `2 min(r,r') θ/π` and
/// `|r−r'| + sqrt(sinh r sinh r') θ` for a pair of cone points.
pub fn distance_bounds(r: f64, r2: f64, theta: f64) -> (f64, f64) {
    (2.0 * r.min(r2) * theta / PI, (r - r2).abs() + (r.sinh() * r2.sinh()).sqrt() * theta)
}

/// Radii `r0·k/m` for `k = 1..=m`.
pub fn default_radii(r0: f64, m: usize) -> Vec<f64> {
    (1..=m).map(|k| if k == m { r0 } else { r0 * k as f64 / m as f64 }).collect()
}

/// The cone over a finite base with a finite set of sampled radii.
#[derive(Clone, Debug)]
pub struct ConeSpace {
    base: FiniteMetricSpace,
    r0: f64,
    radii: Vec<f64>,
}

impl ConeSpace {
    /// Radii are sorted, deduplicated and completed with `r0`.
    pub fn new(base: FiniteMetricSpace, r0: f64, mut radii: Vec<f64>) -> Result<Self> {
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidParameter(format!("cone radius must be positive, got {r0}")));
        }
        if let Some(bad) = radii.iter().find(|&&r| !(r > 0.0 && r <= r0)) {
            return Err(Error::InvalidParameter(format!("sample radius {bad} outside (0, {r0}]")));
        }
        radii.push(r0);
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        Ok(Self { base, r0, radii })
    }

    pub fn with_default_radii(base: FiniteMetricSpace, r0: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("at least one radius sample is required".into()));
        }
        Self::new(base, r0, default_radii(r0, m))
    }

    pub fn base(&self) -> &FiniteMetricSpace {
        &self.base
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angle(&self, y: PointId, y2: PointId) -> Result<f64> {
        Ok(angle(self.base.distance(y, y2)?, self.r0))
    }

    fn check_point(&self, p: ConePoint) -> Result<()> {
        match p {
            ConePoint::Apex => Ok(()),
            ConePoint::At { base, r } => {
                self.base.check(PointId(base))?;
                if r > 0.0 && r <= self.r0 {
                    Ok(())
                } else {
                    Err(Error::ForeignConePoint(format!("radius {r} outside (0, {}]", self.r0)))
                }
            }
        }
    }

    pub fn distance(&self, a: ConePoint, b: ConePoint) -> Result<f64> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    fn distance_unchecked(&self, a: ConePoint, b: ConePoint) -> f64 {
        match (a, b) {
            (ConePoint::Apex, ConePoint::Apex) => 0.0,
            (ConePoint::Apex, p) | (p, ConePoint::Apex) => p.radius(),
            (ConePoint::At { base: y, r }, ConePoint::At { base: y2, r: r2 }) => {
                cone_formula(r, r2, self.base.d(y, y2), self.r0)
            }
        }
    }

    pub fn iota(&self, y: PointId) -> Result<ConePoint> {
        Ok(ConePoint::At { base: self.base.check(y)?, r: self.r0 })
    }

    pub fn proj(&self, x: ConePoint) -> Result<PointId> {
        self.check_point(x)?;
        match x {
            ConePoint::Apex => Err(Error::ApexProjection),
            ConePoint::At { base, .. } => Ok(PointId(base)),
        }
    }

    pub fn mu(&self, t: f64) -> f64 {
        mu(t, self.r0)
    }

    /// Number of materialized points: the apex plus every base point at every radius.
    pub fn point_count(&self) -> usize {
        1 + self.base.len() * self.radii.len()
    }

    /// Materialized point by index: 0 is the apex, then base-major order.
    pub fn point(&self, index: usize) -> ConePoint {
        if index == 0 {
            return ConePoint::Apex;
        }
        let m = self.radii.len();
        ConePoint::At { base: (index - 1) / m, r: self.radii[(index - 1) % m] }
    }

    pub fn points(&self) -> Vec<ConePoint> {
        (0..self.point_count()).map(|i| self.point(i)).collect()
    }

    /// The distance matrix on all materialized points. With `validate` the
    /// metric axioms are checked exhaustively.
    pub fn materialize(&self, validate: bool) -> Result<FiniteMetricSpace> {
        let pts = self.points();
        FiniteMetricSpace::from_fn(pts.len(), validate, |i, j| self.distance_unchecked(pts[i], pts[j]))
    }

    /// The cone over the quotient of the base by `action`.
    pub fn quotient(&self, action: &GroupAction, cap: usize) -> Result<ConeSpace> {
        if action.space().matrix() != self.base.matrix() {
            return Err(Error::InvalidParameter("action is not defined on this cone's base".into()));
        }
        let q = quotient_metric(action, cap)?;
        ConeSpace::new(q.metric, self.r0, self.radii.clone())
    }
}
