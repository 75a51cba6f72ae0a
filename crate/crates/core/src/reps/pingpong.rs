use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{sphere_grid, ProjectivePoint, SquareMatrix};

use super::Representation;

/// Certificates with a smaller margin are rejected as numerically unsafe.
pub const MIN_CERTIFIED_MARGIN: f64 = 1e-3;

/// Resolution of the first, coarse grid pass.
const COARSE_RESOLUTION: f64 = 0.01;

/// Largest grid the certifier will build.
const MAX_GRID_POINTS: f64 = 2.0e6;

/// Closed projective ball (an interval when `d = 2`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighborhood {
    pub center: ProjectivePoint,
    pub radius: f64,
}

/// One neighborhood per letter, in letter order (`a, a⁻¹, b, b⁻¹, …`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PingPongScheme {
    pub neighborhoods: Vec<Neighborhood>,
}

impl PingPongScheme {
    pub fn new(neighborhoods: Vec<Neighborhood>) -> Self {
        Self { neighborhoods }
    }

    /// Moves every center by `k`; radii are kept, which is exact for orthogonal `k`.
    pub fn transformed(&self, k: &SquareMatrix) -> Result<Self> {
        let neighborhoods = self
            .neighborhoods
            .iter()
            .map(|n| Ok(Neighborhood { center: n.center.act(k)?, radius: n.radius }))
            .collect::<Result<_>>()?;
        Ok(Self { neighborhoods })
    }
}

/// Outcome of [`verify_ping_pong`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PingPongReport {
    pub certified: bool,
    /// Smallest slack over the disjointness and mapping conditions.
    pub margin: f64,
    pub disjointness_margin: f64,
    pub mapping_margin: f64,
    /// Grid resolution of the final pass.
    pub resolution: f64,
    pub violation: Option<String>,
}

impl PingPongReport {
    fn failed(violation: String, disjointness_margin: f64, mapping_margin: f64, resolution: f64) -> Self {
        Self {
            certified: false,
            margin: disjointness_margin.min(mapping_margin),
            disjointness_margin,
            mapping_margin,
            resolution,
            violation: Some(violation),
        }
    }
}

fn grid_size(dim: usize, resolution: f64) -> f64 {
    if dim == 2 {
        std::f64::consts::PI / resolution
    } else {
        let step = 1.8 * resolution / ((dim - 1) as f64).sqrt();
        dim as f64 * ((2.0 / step).ceil() + 1.0).powi(dim as i32 - 1)
    }
}

/// Smallest `r_l − dist(g_l·x, c_l)` over grid points `x` outside the
/// neighborhood of `l⁻¹`, with the letter attaining it.
fn mapping_slack(rep: &Representation, scheme: &PingPongScheme, grid: &[Vec<f64>]) -> (f64, String) {
    let gens = rep.generators();
    let mut worst = (f64::INFINITY, String::new());
    for l in gens.letters() {
        let target = &scheme.neighborhoods[l.index()];
        let source = &scheme.neighborhoods[l.inverse().index()];
        let g = rep.matrix(l);
        for v in grid {
            let p = ProjectivePoint::new(v).expect("grid vectors are unit");
            if p.distance(&source.center) <= source.radius {
                continue;
            }
            let slack = match p.act(g) {
                Ok(q) => target.radius - q.distance(&target.center),
                Err(_) => f64::NEG_INFINITY,
            };
            if slack < worst.0 {
                worst = (slack, gens.label(l));
            }
        }
    }
    worst
}

/// Checks the ping-pong conditions: neighborhoods pairwise disjoint, and each
/// letter maps the complement of its inverse's neighborhood strictly inside its
/// own. The mapping condition is checked on a coarse grid, then again at a
/// quarter of the margin found.
pub fn verify_ping_pong(rep: &Representation, scheme: &PingPongScheme) -> PingPongReport {
    let n = rep.generators().letter_count();
    let nbs = &scheme.neighborhoods;
    if nbs.len() != n {
        return PingPongReport::failed(
            format!("scheme has {} neighborhoods for {n} letters", nbs.len()),
            f64::NAN,
            f64::NAN,
            0.0,
        );
    }
    if let Some(bad) = nbs.iter().find(|nb| nb.center.dim() != rep.dim() || !(nb.radius > 0.0)) {
        return PingPongReport::failed(
            format!("neighborhood centered in dimension {} with radius {}", bad.center.dim(), bad.radius),
            f64::NAN,
            f64::NAN,
            0.0,
        );
    }
    let gens = rep.generators();
    let mut disjoint = f64::INFINITY;
    let mut overlap = None;
    for i in 0..n {
        for j in i + 1..n {
            let gap = nbs[i].center.distance(&nbs[j].center) - nbs[i].radius - nbs[j].radius;
            if gap < disjoint {
                disjoint = gap;
                if gap <= 0.0 {
                    let li = crate::groups::Letter::from_index(i);
                    let lj = crate::groups::Letter::from_index(j);
                    overlap = Some(format!("neighborhoods of {} and {} overlap", gens.label(li), gens.label(lj)));
                }
            }
        }
    }
    if let Some(v) = overlap {
        return PingPongReport::failed(v, disjoint, f64::NAN, 0.0);
    }

    let (coarse, who) = mapping_slack(rep, scheme, &sphere_grid(rep.dim(), COARSE_RESOLUTION));
    if coarse <= 0.0 {
        return PingPongReport::failed(
            format!("{who} does not map the complement of its inverse's neighborhood into its own"),
            disjoint,
            coarse,
            COARSE_RESOLUTION,
        );
    }
    let resolution = disjoint.min(coarse) / 4.0;
    if grid_size(rep.dim(), resolution) > MAX_GRID_POINTS {
        return PingPongReport::failed(
            format!("grid at resolution {resolution:e} is too large in dimension {}", rep.dim()),
            disjoint,
            coarse,
            resolution,
        );
    }
    let (fine, who) = mapping_slack(rep, scheme, &sphere_grid(rep.dim(), resolution));
    let margin = disjoint.min(fine);
    if fine <= 0.0 {
        return PingPongReport::failed(
            format!("{who} fails the mapping condition on the fine grid"),
            disjoint,
            fine,
            resolution,
        );
    }
    if margin < MIN_CERTIFIED_MARGIN {
        return PingPongReport::failed(
            format!("margin {margin:e} is below {MIN_CERTIFIED_MARGIN:e}"),
            disjoint,
            fine,
            resolution,
        );
    }
    PingPongReport {
        certified: true,
        margin,
        disjointness_margin: disjoint,
        mapping_margin: fine,
        resolution,
        violation: None,
    }
}
