//! Local r-orbi-conifold charts `W_r = {xy - z^{2r} + t^2 = 0} / mu_r(a, -a, 1, 0)`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::{rat, Rational};
use crate::error::{Error, Result};

/// Which small resolution of the singular point the chart uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "s")]
    S,
    #[serde(rename = "sf")]
    Sf,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::S => Side::Sf,
            Side::Sf => Side::S,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::S => "s",
            Side::Sf => "sf",
        })
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(Side::S),
            "sf" => Ok(Side::Sf),
            other => Err(Error::Parse(format!("side must be `s` or `sf`, got `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LocalModel {
    r: u32,
    a: u32,
    side: Side,
}

/// Checks `r >= 1`, `1 <= a < r` (only `a = 0` when `r = 1`) and `gcd(a, r) = 1`.
pub fn validate_model(r: u32, a: u32, side: Side) -> Result<LocalModel> {
    if r == 0 {
        return Err(Error::InvalidModel("r must be at least 1".into()));
    }
    if r == 1 {
        if a != 0 {
            return Err(Error::InvalidModel(format!(
                "for r = 1 the weight a must be 0, got {a}"
            )));
        }
    } else if a == 0 || a >= r {
        return Err(Error::InvalidModel(format!(
            "weight a = {a} outside 1..{r}"
        )));
    }
    if a.gcd(&r) != 1 {
        return Err(Error::InvalidModel(format!(
            "gcd(a, r) = gcd({a}, {r}) = {} is not 1",
            a.gcd(&r)
        )));
    }
    Ok(LocalModel { r, a, side })
}

/// All weights `a` accepted by [`validate_model`] for this `r`.
pub fn valid_weights(r: u32) -> Vec<u32> {
    if r == 1 {
        vec![0]
    } else {
        (1..r).filter(|a| a.gcd(&r) == 1).collect()
    }
}

impl LocalModel {
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// The same `(r, a)` with the other small resolution.
    pub fn flopped(&self) -> LocalModel {
        LocalModel {
            side: self.side.flipped(),
            ..*self
        }
    }

    /// Name of the Novikov variable `q^[Gamma]` of this chart's exceptional curve.
    pub fn ray_variable(&self) -> &'static str {
        match self.side {
            Side::S => "G_s",
            Side::Sf => "G_sf",
        }
    }

    /// `H(Gamma)` for this chart's degree-2 generator.
    ///
    /// `H^sf` is the class that agrees with `H^s` away from the exceptional curves, so
    /// it evaluates to `-1` on `Gamma^sf`.
    pub fn h_on_ray(&self) -> Rational {
        match self.side {
            Side::S => rat(1, 1),
            Side::Sf => rat(-1, 1),
        }
    }
}

impl fmt::Display for LocalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W^{}_{} (a = {})", self.side, self.r, self.a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        assert!(validate_model(2, 1, Side::S).is_ok());
        assert!(validate_model(4, 2, Side::S).is_err());
        assert!(validate_model(5, 3, Side::Sf).is_ok());
        assert!(validate_model(1, 0, Side::S).is_ok());
        assert!(validate_model(1, 1, Side::S).is_err());
        assert!(validate_model(3, 0, Side::S).is_err());
        assert!(validate_model(3, 3, Side::S).is_err());
        assert!(validate_model(0, 0, Side::S).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(valid_weights(6), vec![1, 5]);
        assert_eq!(valid_weights(5), vec![1, 2, 3, 4]);
        assert_eq!(valid_weights(1), vec![0]);
    }
}
