use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Edge length per level, `κ_1, κ_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetricSchedule {
    /// `κ_i = κ_1 · 2^(1 - i)`.
    Halving { kappa1: BigRational },
    Constant { kappa: BigRational },
    /// Explicit values for the first levels; later levels keep halving the
    /// last entry.
    List(Vec<BigRational>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("scale must be positive, got {0}")]
    NonPositive(String),
    #[error("list schedule needs at least one entry")]
    EmptyList,
    #[error("cannot read `{0}` as a rational number")]
    BadRational(String),
    #[error("unknown schedule `{0}` (expected halving, constant or list:q1,q2,...)")]
    UnknownRule(String),
}

pub fn parse_rational(s: &str) -> Result<BigRational, ScheduleError> {
    let bad = || ScheduleError::BadRational(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn positive(q: BigRational) -> Result<BigRational, ScheduleError> {
    if q.is_positive() {
        Ok(q)
    } else {
        Err(ScheduleError::NonPositive(q.to_string()))
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn halved(q: &BigRational, times: usize) -> BigRational {
    let mut out = q.clone();
    for _ in 0..times {
        out *= half();
    }
    out
}

impl MetricSchedule {
    pub fn halving(kappa1: BigRational) -> Result<Self, ScheduleError> {
        Ok(MetricSchedule::Halving { kappa1: positive(kappa1)? })
    }

    pub fn constant(kappa: BigRational) -> Result<Self, ScheduleError> {
        Ok(MetricSchedule::Constant { kappa: positive(kappa)? })
    }

    pub fn list(values: Vec<BigRational>) -> Result<Self, ScheduleError> {
        if values.is_empty() {
            return Err(ScheduleError::EmptyList);
        }
        Ok(MetricSchedule::List(values.into_iter().map(positive).collect::<Result<_, _>>()?))
    }

    /// Halving from 1.
    pub fn standard() -> Self {
        MetricSchedule::Halving { kappa1: BigRational::one() }
    }

    /// Reads `halving`, `constant` or `list:q1,q2,...`; `kappa` seeds the
    /// first two.
    pub fn parse(rule: &str, kappa: BigRational) -> Result<Self, ScheduleError> {
        match rule.trim() {
            "halving" => Self::halving(kappa),
            "constant" => Self::constant(kappa),
            other => match other.strip_prefix("list:") {
                Some(items) => Self::list(
                    items.split(',').filter(|s| !s.trim().is_empty()).map(parse_rational).collect::<Result<_, _>>()?,
                ),
                None => Err(ScheduleError::UnknownRule(other.to_string())),
            },
        }
    }

    /// Edge length at level `i >= 1`.
    pub fn kappa(&self, i: usize) -> BigRational {
        assert!(i >= 1, "levels start at 1");
        match self {
            MetricSchedule::Halving { kappa1 } => halved(kappa1, i - 1),
            MetricSchedule::Constant { kappa } => kappa.clone(),
            MetricSchedule::List(v) if i <= v.len() => v[i - 1].clone(),
            MetricSchedule::List(v) => halved(v.last().expect("non-empty"), i - v.len()),
        }
    }

    /// `Σ_{j > i} κ_j`, or `None` when the series diverges.
    pub fn tail_sum(&self, i: usize) -> Option<BigRational> {
        match self {
            MetricSchedule::Halving { .. } => Some(self.kappa(i)),
            MetricSchedule::Constant { .. } => None,
            MetricSchedule::List(v) => {
                let m = v.len();
                if i >= m {
                    Some(self.kappa(i))
                } else {
                    let explicit: BigRational = v[i..].iter().cloned().sum();
                    Some(explicit + &v[m - 1])
                }
            }
        }
    }
}

impl fmt::Display for MetricSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricSchedule::Halving { kappa1 } => write!(f, "halving(kappa1={kappa1})"),
            MetricSchedule::Constant { kappa } => write!(f, "constant(kappa={kappa})"),
            MetricSchedule::List(v) => {
                let items: Vec<String> = v.iter().map(|q| q.to_string()).collect();
                write!(f, "list({})", items.join(","))
            }
        }
    }
}
