//! Seeded random instances.

use rand::Rng;
use rand_distr::{Distribution as _, Normal};
use thiserror::Error;

use crate::geometry::Point;
use crate::graph::PointSet;
use crate::rng;

/// Standard deviation of cluster offsets.
pub const CLUSTER_SIGMA: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distribution {
    Uniform,
    /// `ceil(n/5)` uniform centers with Gaussian offsets around them.
    Clustered,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceSpec {
    pub n: usize,
    pub width: f64,
    pub height: f64,
    pub seed: u64,
    pub distribution: Distribution,
}

impl InstanceSpec {
    pub fn uniform(n: usize, width: f64, height: f64, seed: u64) -> Self {
        InstanceSpec {
            n,
            width,
            height,
            seed,
            distribution: Distribution::Uniform,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("box dimensions must be positive and finite, got {0} x {1}")]
    BadBox(f64, f64),
}

pub fn generate_instance(spec: &InstanceSpec) -> Result<PointSet, GenerateError> {
    let ok = |v: f64| v > 0.0 && v.is_finite();
    if !ok(spec.width) || !ok(spec.height) {
        return Err(GenerateError::BadBox(spec.width, spec.height));
    }
    let mut r = rng::stream(spec.seed, 0);
    let uniform = |r: &mut rand_chacha::ChaCha8Rng| {
        Point::new(
            r.random_range(0.0..spec.width),
            r.random_range(0.0..spec.height),
        )
    };
    let points = match spec.distribution {
        Distribution::Uniform => (0..spec.n).map(|_| uniform(&mut r)).collect(),
        Distribution::Clustered => {
            let centers: Vec<Point> = (0..spec.n.div_ceil(5)).map(|_| uniform(&mut r)).collect();
            let normal = Normal::new(0.0, CLUSTER_SIGMA).expect("positive sigma");
            (0..spec.n)
                .map(|_| {
                    let c = centers[r.random_range(0..centers.len())];
                    Point::new(c.x + normal.sample(&mut r), c.y + normal.sample(&mut r))
                })
                .collect()
        }
    };
    Ok(PointSet::new(points).expect("finite coordinates"))
}
