//! Calming functions `eta^eps: R^2 -> R^2`.
//!
//! | kind     | eta(x)                  | sup of max_i |eta_i| | defect bound        |
//! |----------|-------------------------|----------------------|---------------------|
//! | identity | x                       | unbounded            | none                |
//! | type1    | x / (1 + eps |x|)       | 1 / eps              | eps |x|^2           |
//! | type2    | x / (1 + eps^2 |x|^2)   | 1 / (2 eps)          | eps^2 |x|^3         |
//! | type3    | arctan(eps x) / eps     | pi / (2 eps)         | eps^2 |x|^3         |
//!
//! `|x|` is the Euclidean norm; type 3 applies the arctangent per component.
//! All three are 1-Lipschitz and odd, and every denominator is at least 1.

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CalmingKind {
    Identity,
    Type1,
    Type2,
    Type3,
}

impl CalmingKind {
    pub const ALL: [CalmingKind; 4] = [
        CalmingKind::Identity,
        CalmingKind::Type1,
        CalmingKind::Type2,
        CalmingKind::Type3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CalmingKind::Identity => "identity",
            CalmingKind::Type1 => "type1",
            CalmingKind::Type2 => "type2",
            CalmingKind::Type3 => "type3",
        }
    }
}

impl fmt::Display for CalmingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CalmingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "identity" => Ok(CalmingKind::Identity),
            "type1" => Ok(CalmingKind::Type1),
            "type2" => Ok(CalmingKind::Type2),
            "type3" => Ok(CalmingKind::Type3),
            other => Err(Error::InvalidParameter(format!(
                "unknown calming kind '{other}' (expected identity, type1, type2 or type3)"
            ))),
        }
    }
}

/// Constants of the pointwise defect estimate `|eta(x) - x| <= c eps^alpha |x|^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectBound {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
}

impl DefectBound {
    pub fn evaluate(&self, epsilon: f64, magnitude: f64) -> f64 {
        self.c * epsilon.powf(self.alpha) * magnitude.powf(self.beta)
    }
}

/// A calming function together with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calming {
    kind: CalmingKind,
    epsilon: f64,
}

impl Calming {
    pub fn new(kind: CalmingKind, epsilon: f64) -> Result<Self> {
        if kind != CalmingKind::Identity && !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{kind} calming needs a finite epsilon > 0, got {epsilon}"
            )));
        }
        Ok(Calming { kind, epsilon })
    }

    pub fn identity() -> Self {
        Calming {
            kind: CalmingKind::Identity,
            epsilon: 0.0,
        }
    }

    pub fn kind(&self) -> CalmingKind {
        self.kind
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_identity(&self) -> bool {
        self.kind == CalmingKind::Identity
    }

    #[inline]
    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let eps = self.epsilon;
        match self.kind {
            CalmingKind::Identity => v,
            CalmingKind::Type1 => {
                let d = 1.0 + eps * v[0].hypot(v[1]);
                [v[0] / d, v[1] / d]
            }
            CalmingKind::Type2 => {
                let d = 1.0 + eps * eps * (v[0] * v[0] + v[1] * v[1]);
                [v[0] / d, v[1] / d]
            }
            CalmingKind::Type3 => [(eps * v[0]).atan() / eps, (eps * v[1]).atan() / eps],
        }
    }

    /// Supremum over `R^2` of the largest component magnitude of `eta`;
    /// infinite for the identity.
    ///
    /// For types 1 and 2 this coincides with the supremum of the Euclidean
    /// magnitude. For type 3 the Euclidean supremum is larger by `sqrt(2)`,
    /// see [`Calming::euclidean_sup`].
    pub fn sup_norm(&self) -> f64 {
        let eps = self.epsilon;
        match self.kind {
            CalmingKind::Identity => f64::INFINITY,
            CalmingKind::Type1 => 1.0 / eps,
            CalmingKind::Type2 => 1.0 / (2.0 * eps),
            CalmingKind::Type3 => FRAC_PI_2 / eps,
        }
    }

    /// Supremum over `R^2` of `|eta(x)|` in the Euclidean norm.
    pub fn euclidean_sup(&self) -> f64 {
        match self.kind {
            CalmingKind::Type3 => SQRT_2 * self.sup_norm(),
            _ => self.sup_norm(),
        }
    }

    pub fn defect_bound(&self) -> Result<DefectBound> {
        match self.kind {
            CalmingKind::Identity => Err(Error::NoDefectBound),
            CalmingKind::Type1 => Ok(DefectBound {
                alpha: 1.0,
                beta: 2.0,
                c: 1.0,
            }),
            CalmingKind::Type2 | CalmingKind::Type3 => Ok(DefectBound {
                alpha: 2.0,
                beta: 3.0,
                c: 1.0,
            }),
        }
    }
}

impl fmt::Display for Calming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CalmingKind::Identity => f.write_str("identity"),
            kind => write!(f, "{kind}(eps={})", self.epsilon),
        }
    }
}
