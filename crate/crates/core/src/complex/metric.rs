use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use super::graph::ColoredGraph;

/// Edge length of the geodesic metric at one level. Always positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeodesicScale(BigRational);

impl GeodesicScale {
    pub fn new(kappa: BigRational) -> Result<Self, MetricError> {
        if kappa.is_positive() {
            Ok(GeodesicScale(kappa))
        } else {
            Err(MetricError::NonPositiveScale(kappa.to_string()))
        }
    }

    pub fn unit() -> Self {
        GeodesicScale(BigRational::from_integer(BigInt::from(1)))
    }

    pub fn kappa(&self) -> &BigRational {
        &self.0
    }

    /// Length of `hops` edges at this scale.
    pub fn length(&self, hops: u64) -> BigRational {
        &self.0 * BigRational::from_integer(BigInt::from(hops))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(String),
}

/// Geodesic distance between two vertices when every edge has length
/// `scale`. `None` when they lie in different components.
pub fn geodesic_distance(
    g: &ColoredGraph,
    scale: &GeodesicScale,
    u: &str,
    v: &str,
) -> Result<Option<BigRational>, MetricError> {
    let a = g.vertex_index(u).ok_or_else(|| MetricError::UnknownVertex(u.to_string()))?;
    let b = g.vertex_index(v).ok_or_else(|| MetricError::UnknownVertex(v.to_string()))?;
    Ok(g.hop_distances(a)[b].map(|h| scale.length(u64::from(h))))
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
