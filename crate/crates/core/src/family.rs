use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four optimal kernel families.
///
/// Each `Lp` family is named after the norm of `f^(n)` its bound is sharp
/// for, not after the norm the kernel itself minimizes: `L1` uses the
/// sup-norm minimizer (Chebyshev T), `L2` the Legendre polynomial, `Linf`
/// the 1-norm minimizer (Chebyshev U). `Alexiewicz` uses `2^(1-n)(T_n - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleFamily {
    L1,
    L2,
    Linf,
    #[serde(rename = "alex")]
    Alexiewicz,
}

impl RuleFamily {
    pub const ALL: [RuleFamily; 4] = [RuleFamily::L1, RuleFamily::L2, RuleFamily::Linf, RuleFamily::Alexiewicz];

    pub const LEBESGUE: [RuleFamily; 3] = [RuleFamily::L1, RuleFamily::L2, RuleFamily::Linf];

    /// Short name used on the command line and in CSV output.
    pub fn short_name(self) -> &'static str {
        match self {
            RuleFamily::L1 => "l1",
            RuleFamily::L2 => "l2",
            RuleFamily::Linf => "linf",
            RuleFamily::Alexiewicz => "alex",
        }
    }

    /// The norm of `f^(n)` for which this family's constant is sharp.
    pub fn natural_norm(self) -> NormKind {
        match self {
            RuleFamily::L1 => NormKind::Lp(1.0),
            RuleFamily::L2 => NormKind::Lp(2.0),
            RuleFamily::Linf => NormKind::Lp(f64::INFINITY),
            RuleFamily::Alexiewicz => NormKind::Alexiewicz,
        }
    }

    pub fn is_lebesgue(self) -> bool {
        !matches!(self, RuleFamily::Alexiewicz)
    }
}

impl fmt::Display for RuleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for RuleFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l1" => Ok(RuleFamily::L1),
            "l2" => Ok(RuleFamily::L2),
            "linf" | "l_inf" | "inf" => Ok(RuleFamily::Linf),
            "alex" | "alexiewicz" => Ok(RuleFamily::Alexiewicz),
            _ => Err(Error::UnknownFamily(s.to_owned())),
        }
    }
}

/// A norm on `f^(n)`: Lebesgue `p` in `[1, inf]` or the Alexiewicz norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    Lp(f64),
    Alexiewicz,
}

impl NormKind {
    pub fn validate(self) -> Result<Self> {
        match self {
            NormKind::Lp(p) if !(p >= 1.0) => Err(Error::InvalidExponent(p)),
            other => Ok(other),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Lp(p) if p.is_infinite() => f.write_str("inf"),
            NormKind::Lp(p) => write!(f, "{p}"),
            NormKind::Alexiewicz => f.write_str("alexiewicz"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "alex" | "alexiewicz" => Ok(NormKind::Alexiewicz),
            "inf" | "infinity" => Ok(NormKind::Lp(f64::INFINITY)),
            _ => s
                .parse::<f64>()
                .map_err(|_| Error::InvalidExponent(f64::NAN))
                .and_then(|p| NormKind::Lp(p).validate()),
        }
    }
}

/// Conjugate exponent `q` with `1/p + 1/q = 1` and `1/inf = 0`.
pub fn conjugate(p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    Ok(if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    })
}

/// `1/q` with `1/inf = 0`.
pub(crate) fn reciprocal(q: f64) -> f64 {
    if q.is_infinite() {
        0.0
    } else {
        1.0 / q
    }
}
