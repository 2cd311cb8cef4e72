//! Continuous logarithm of `t ↦ det(𝟙 − tX)` along a path from `t = 0`.
//!
//! The zeros of the determinant sit at `t = 1/λ` for the eigenvalues `λ` of
//! `X`. Among a few candidate paths from `0` to `1` the one keeping farthest
//! from them is used. Along it steps are bisected until consecutive
//! determinant values differ in argument by less than π/2 and a midpoint
//! check agrees, with the step also capped by the distance to the zeros so
//! a double zero cannot be stepped over unnoticed. `det(𝟙 − tX)` is the
//! square of a polynomial for the products of antisymmetric maps used here,
//! so every zero-avoiding path yields the same square root.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{FermiError, Result};
use crate::linalg::{self, CMat, C64};

/// Paths closer than this to a zero are not used.
pub const MIN_CLEARANCE: f64 = 1e-6;
/// Smallest admissible step in the path parameter.
pub const MIN_STEP: f64 = 1e-12;
const MAX_EVALUATIONS: usize = 2_000_000;
const MIDPOINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// No continuation needed (`X = 0`).
    Trivial,
    RealSegment,
    UpperArc,
    LowerArc,
    /// Real segment to `1 − ρ`, then once around the circle `|t − 1| = ρ`.
    Contour,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Trivial => "trivial",
            Route::RealSegment => "real-segment",
            Route::UpperArc => "upper-arc",
            Route::LowerArc => "lower-arc",
            Route::Contour => "contour",
        }
    }
}

/// How the square-root branch was fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPath {
    pub route: Route,
    pub evaluations: usize,
    /// Distance from the path to the nearest zero of `det(𝟙 − tX)`.
    pub clearance: f64,
    /// Circle radius for [`Route::Contour`].
    pub radius: Option<f64>,
}

impl BranchPath {
    pub fn describe(&self) -> String {
        match self.radius {
            Some(r) => format!("{} (radius {r}, clearance {:.2e})", self.route.name(), self.clearance),
            None => format!("{} (clearance {:.2e})", self.route.name(), self.clearance),
        }
    }
}

/// Straight segment or circular arc in the `t`-plane, parametrized by `s ∈ [0,1]`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Path {
    Segment {
        from: C64,
        to: C64,
    },
    Arc {
        center: C64,
        radius: f64,
        from: f64,
        to: f64,
    },
}

impl Path {
    fn at(&self, s: f64) -> C64 {
        match *self {
            Path::Segment { from, to } => from + (to - from) * s,
            Path::Arc {
                center,
                radius,
                from,
                to,
            } => center + C64::from_polar(radius, from + (to - from) * s),
        }
    }

    fn length(&self) -> f64 {
        match *self {
            Path::Segment { from, to } => (to - from).norm(),
            Path::Arc { radius, from, to, .. } => radius * (to - from).abs(),
        }
    }

    fn distance(&self, z: C64) -> f64 {
        match *self {
            Path::Segment { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (z - from).norm();
                }
                let u = ((z - from) * d.conj()).re / len2;
                (z - self.at(u.clamp(0.0, 1.0))).norm()
            }
            Path::Arc {
                center,
                radius,
                from,
                to,
            } => {
                let (lo, hi) = if from <= to { (from, to) } else { (to, from) };
                let w = z - center;
                if hi - lo >= 2.0 * PI {
                    return (w.norm() - radius).abs();
                }
                let ends = (z - self.at(0.0)).norm().min((z - self.at(1.0)).norm());
                let mut angle = w.arg();
                while angle < lo {
                    angle += 2.0 * PI;
                }
                if angle <= hi && w.norm() > 0.0 {
                    (w.norm() - radius).abs().min(ends)
                } else {
                    ends
                }
            }
        }
    }
}

/// Zeros `1/λ` of `det(𝟙 − tX)`.
pub(crate) fn det_zeros(x: &CMat) -> Vec<C64> {
    linalg::eigenvalues(x)
        .into_iter()
        .filter(|l| l.norm() > 1e-300)
        .map(|l| C64::new(1.0, 0.0) / l)
        .collect()
}

fn clearance(path: &Path, zeros: &[C64]) -> f64 {
    zeros.iter().map(|z| path.distance(*z)).fold(f64::INFINITY, f64::min)
}

/// Running state of a continuation: current `log det` and `det`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Tracked {
    pub log: C64,
    pub det: C64,
    pub evaluations: usize,
}

impl Tracked {
    pub fn start() -> Self {
        Self {
            log: C64::new(0.0, 0.0),
            det: C64::new(1.0, 0.0),
            evaluations: 0,
        }
    }
}

pub(crate) fn det_at(x: &CMat, t: C64) -> C64 {
    let n = x.nrows();
    linalg::determinant(&(linalg::identity(n) - x * t))
}

/// Continue `state` along `path`; `path.at(0)` must be the point where
/// `state` was computed. On failure returns the offending `t`.
pub(crate) fn continue_along(
    x: &CMat,
    zeros: &[C64],
    path: &Path,
    mut state: Tracked,
) -> std::result::Result<Tracked, C64> {
    let inverse_distances: f64 = zeros.iter().map(|z| 1.0 / path.distance(*z)).sum();
    let length = path.length();
    if length == 0.0 {
        return Ok(state);
    }
    // the true change of arg over a step of length h is below h·Σ 1/dᵢ
    let cap = if inverse_distances > 0.0 {
        (FRAC_PI_4 / inverse_distances / length).min(0.125)
    } else {
        0.125
    };
    let mut s = 0.0;
    let mut h = cap;
    while s < 1.0 {
        if state.evaluations > MAX_EVALUATIONS {
            return Err(path.at(s));
        }
        let s1 = (s + h).min(1.0);
        let t1 = path.at(s1);
        let f1 = det_at(x, t1);
        let fm = det_at(x, path.at(0.5 * (s + s1)));
        state.evaluations += 2;
        if f1.norm() == 0.0 || fm.norm() == 0.0 {
            return Err(t1);
        }
        let d = (f1 / state.det).ln();
        let split = (fm / state.det).ln() + (f1 / fm).ln();
        if d.im.abs() >= std::f64::consts::FRAC_PI_2 || (split - d).norm() > MIDPOINT_TOL {
            h *= 0.5;
            if h < MIN_STEP {
                return Err(t1);
            }
            continue;
        }
        state.log += d;
        state.det = f1;
        s = s1;
        h = (h * 2.0).min(cap);
    }
    Ok(state)
}

/// Candidate paths from 0 to 1: the real segment and circular arcs through
/// both endpoints bulging up or down by the given heights.
fn candidate_paths() -> Vec<(Route, Path)> {
    let mut paths = vec![(
        Route::RealSegment,
        Path::Segment {
            from: C64::new(0.0, 0.0),
            to: C64::new(1.0, 0.0),
        },
    )];
    for height in [0.5, 0.25, 1.0, 0.1] {
        for up in [true, false] {
            // circle through 0 and 1 with apex at ½ ± i·height
            let c = (height * height - 0.25) / (2.0 * height);
            let center = C64::new(0.5, if up { c } else { -c });
            let radius = height - c;
            let start = (C64::new(0.0, 0.0) - center).arg();
            let end = (C64::new(1.0, 0.0) - center).arg();
            // go the long way when the centre is on the far side of the apex
            let (from, to) = if up {
                let mut to = end;
                while to > start {
                    to -= 2.0 * PI;
                }
                (start, to)
            } else {
                let mut to = end;
                while to < start {
                    to += 2.0 * PI;
                }
                (start, to)
            };
            let route = if up { Route::UpperArc } else { Route::LowerArc };
            paths.push((
                route,
                Path::Arc {
                    center,
                    radius,
                    from,
                    to,
                },
            ));
        }
    }
    paths
}

/// Continuous `log det(𝟙 − X)` from `t = 0` along the candidate path with
/// the largest clearance from the zeros.
pub fn continued_log_det(x: &CMat) -> Result<(C64, BranchPath)> {
    if linalg::max_abs(x) == 0.0 {
        let path = BranchPath {
            route: Route::Trivial,
            evaluations: 0,
            clearance: f64::INFINITY,
            radius: None,
        };
        return Ok((C64::new(0.0, 0.0), path));
    }
    let zeros = det_zeros(x);
    let mut candidates: Vec<(f64, Route, Path)> = candidate_paths()
        .into_iter()
        .map(|(route, path)| (clearance(&path, &zeros), route, path))
        .collect();
    // the real segment is preferred whenever it is reasonably clear
    candidates.sort_by(|a, b| {
        let score = |c: &(f64, Route, Path)| {
            if c.1 == Route::RealSegment && c.0 >= 0.05 {
                f64::INFINITY
            } else {
                c.0
            }
        };
        score(b).total_cmp(&score(a))
    });
    let mut failure = None;
    for (clear, route, path) in candidates {
        if clear < MIN_CLEARANCE {
            failure.get_or_insert(path.at(0.5));
            continue;
        }
        match continue_along(x, &zeros, &path, Tracked::start()) {
            Ok(state) => {
                let branch = BranchPath {
                    route,
                    evaluations: state.evaluations,
                    clearance: clear,
                    radius: None,
                };
                return Ok((state.log, branch));
            }
            Err(t) => {
                failure.get_or_insert(t);
            }
        }
    }
    Err(FermiError::BranchAmbiguity {
        t: failure.map_or(f64::NAN, |t| t.re),
    })
}

/// `det(𝟙 − X)^{1/2}` on the branch continued from `t = 0`.
pub fn continued_sqrt_det(x: &CMat) -> Result<(C64, BranchPath)> {
    let (log, path) = continued_log_det(x)?;
    Ok(((log * 0.5).exp(), path))
}

/// Values of `log det(𝟙 − tX)` at `t_k = 1 − ρe^{2πik/N}`, continued from
/// `t = 0` along the real axis to `1 − ρ` and then around the circle. The
/// radius is chosen for clearance from the zeros.
pub(crate) fn circle_log_dets(x: &CMat, points: usize) -> Result<(Vec<C64>, BranchPath)> {
    let zeros = det_zeros(x);
    let best = [0.5, 0.4, 0.6, 0.3, 0.7, 0.25, 0.8, 0.2]
        .into_iter()
        .map(|rho| {
            let lead = Path::Segment {
                from: C64::new(0.0, 0.0),
                to: C64::new(1.0 - rho, 0.0),
            };
            let circle = Path::Arc {
                center: C64::new(1.0, 0.0),
                radius: rho,
                from: PI,
                to: 3.0 * PI,
            };
            (clearance(&lead, &zeros).min(clearance(&circle, &zeros)), rho)
        })
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("radius candidates");
    let (clear, radius) = best;
    if clear < MIN_CLEARANCE {
        return Err(FermiError::BranchAmbiguity { t: 1.0 - radius });
    }
    let fail = |t: C64| FermiError::BranchAmbiguity { t: t.re };
    let lead = Path::Segment {
        from: C64::new(0.0, 0.0),
        to: C64::new(1.0 - radius, 0.0),
    };
    let mut state = continue_along(x, &zeros, &lead, Tracked::start()).map_err(fail)?;
    let mut logs = Vec::with_capacity(points);
    logs.push(state.log);
    let step = 2.0 * PI / points as f64;
    for k in 0..points - 1 {
        let theta = PI + k as f64 * step;
        let arc = Path::Arc {
            center: C64::new(1.0, 0.0),
            radius,
            from: theta,
            to: theta + step,
        };
        state = continue_along(x, &zeros, &arc, state).map_err(fail)?;
        logs.push(state.log);
    }
    let branch = BranchPath {
        route: Route::Contour,
        evaluations: state.evaluations,
        clearance: clear,
        radius: Some(radius),
    };
    Ok((logs, branch))
}

/// Points `t_k` matching [`circle_log_dets`].
pub(crate) fn circle_point(radius: f64, points: usize, k: usize) -> C64 {
    C64::new(1.0, 0.0) + C64::from_polar(radius, PI + 2.0 * PI * k as f64 / points as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::sample;

    #[test]
    fn trivial_and_small() {
        let (log, path) = continued_log_det(&CMat::zeros(3, 3)).unwrap();
        assert_eq!(log, c(0.0, 0.0));
        assert_eq!(path.route, Route::Trivial);
        let mut rng = sample::trial_rng(50, 0);
        let x = sample::matrix(&mut rng, 3, 0.1);
        let (log, path) = continued_log_det(&x).unwrap();
        let principal = linalg::determinant(&(linalg::identity(3) - &x)).ln();
        assert!((log - principal).norm() < 1e-12);
        assert_eq!(path.route, Route::RealSegment);
    }

    #[test]
    fn winding_is_tracked() {
        // det(1 − tX) = (1 − tz)²; its endpoint value alone does not fix the branch
        let z = c(-3.0, 0.3);
        let x = CMat::from_diagonal_element(2, 2, z);
        let (log, _) = continued_log_det(&x).unwrap();
        let expected = (c(1.0, 0.0) - z).ln() * 2.0;
        assert!((log - expected).norm() < 1e-10);
    }

    #[test]
    fn detours_around_a_double_zero() {
        // eigenvalue 2 twice puts a double zero at t = ½ on the real segment
        let x = CMat::from_diagonal_element(2, 2, c(2.0, 0.0));
        let (sqrt, path) = continued_sqrt_det(&x).unwrap();
        assert_ne!(path.route, Route::RealSegment);
        // the polynomial square root is 1 − 2t, i.e. −1 at t = 1
        assert!((sqrt - c(-1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn candidate_paths_join_zero_and_one() {
        for (_, p) in candidate_paths() {
            assert!(p.at(0.0).norm() < 1e-12, "{p:?}");
            assert!((p.at(1.0) - c(1.0, 0.0)).norm() < 1e-12, "{p:?}");
        }
    }

    #[test]
    fn arc_routes_bulge_the_right_way() {
        for (route, p) in candidate_paths() {
            let mid = p.at(0.5);
            match route {
                Route::UpperArc => assert!(mid.im > 0.0),
                Route::LowerArc => assert!(mid.im < 0.0),
                _ => assert!(mid.im.abs() < 1e-15),
            }
        }
    }

    #[test]
    fn circle_values_match_closed_form() {
        let mut rng = sample::trial_rng(51, 0);
        let x = sample::matrix(&mut rng, 3, 0.3);
        let (logs, branch) = circle_log_dets(&x, 16).unwrap();
        let r = branch.radius.unwrap();
        for (k, log) in logs.iter().enumerate() {
            let t = circle_point(r, 16, k);
            assert!((log.exp() - det_at(&x, t)).norm() < 1e-10);
        }
    }
}
