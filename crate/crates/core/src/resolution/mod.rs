//! Which small resolutions of a global orbi-conifold carry symplectic structures.
//!
//! A resolution exists for the sign pattern `sigma` when the Thom-class relation
//! `sum_i lambda_i Theta_i = 0` has a solution with `sign(lambda_i) = sigma_i` for
//! every `i`. With the `Theta_i` as the columns of `M`, this is an exact linear
//! feasibility problem, decided by [`simplex::feasible_point`].

pub mod simplex;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, Rational, RationalMatrix};
use crate::error::{Error, Result};
use crate::local::{validate_model, Side};

/// Default bound on `kappa` for pattern enumeration.
pub const DEFAULT_CAP: usize = 20;

/// Orientation of the local resolution at one singular point.
pub const CONVENTION: &str =
    "lambda_i < 0 selects W^s at p_i, lambda_i > 0 selects W^sf (convention-dependent)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be +1 or -1, got {v}")),
        }
    }
}

impl Sign {
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn of(q: &Rational) -> Option<Sign> {
        if q.is_positive() {
            Some(Sign::Plus)
        } else if q.is_negative() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn as_rational(self) -> Rational {
        Rational::from_integer(i8::from(self).into())
    }
}

/// Prescribed signs of `(lambda_1, ..., lambda_kappa)`. Sorts with `+` before `-`
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignPattern(pub Vec<Sign>);

impl SignPattern {
    /// Pattern number `bits` of length `kappa`: bit `i` set means `sigma_i = -`.
    pub fn from_bits(bits: u64, kappa: usize) -> Self {
        SignPattern(
            (0..kappa)
                .map(|i| if bits >> i & 1 == 1 { Sign::Minus } else { Sign::Plus })
                .collect(),
        )
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !matches!(c, ',' | ' ' | '(' | ')'))
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                _ => Err(Error::Parse(format!("bad sign character `{c}` in `{s}`"))),
            })
            .collect::<Result<_>>()
            .map(SignPattern)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        SignPattern(self.0.iter().map(|s| s.flipped()).collect())
    }

    /// Choice of small resolution under [`CONVENTION`].
    pub fn choice(&self) -> ResolutionChoice {
        ResolutionChoice(
            self.0
                .iter()
                .map(|s| match s {
                    Sign::Minus => Side::S,
                    Sign::Plus => Side::Sf,
                })
                .collect(),
        )
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self
            .0
            .iter()
            .map(|s| if *s == Sign::Plus { "+" } else { "-" })
            .collect();
        write!(f, "({})", s.join(","))
    }
}

/// Local side `s` or `sf` at each singular point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ResolutionChoice(pub Vec<Side>);

impl fmt::Display for ResolutionChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", s.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Singularity {
    pub r: u32,
    pub a: u32,
}

#[derive(Deserialize)]
struct ConfigWire {
    kappa: usize,
    singularities: Vec<Singularity>,
    #[serde(with = "crate::algebra::rational::serde_mat")]
    theta: Vec<Vec<Rational>>,
}

/// A global orbi-conifold described by its singular points and the coordinates of
/// their Thom classes; column `i` of `theta` is `Theta_{r_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConifoldConfig {
    kappa: usize,
    singularities: Vec<Singularity>,
    theta: RationalMatrix,
}

impl ConifoldConfig {
    pub fn new(singularities: Vec<Singularity>, theta: RationalMatrix) -> Result<Self> {
        let kappa = singularities.len();
        if kappa == 0 {
            return Err(Error::Config("kappa must be at least 1".into()));
        }
        if theta.cols() != kappa {
            return Err(Error::Config(format!(
                "theta has {} columns but there are {kappa} singularities",
                theta.cols()
            )));
        }
        for (i, s) in singularities.iter().enumerate() {
            validate_model(s.r, s.a, Side::S)
                .map_err(|e| Error::Config(format!("singularity {i}: {e}")))?;
        }
        Ok(ConifoldConfig {
            kappa,
            singularities,
            theta,
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let w: ConfigWire =
            serde_json::from_str(s).map_err(|e| Error::Config(format!("malformed config: {e}")))?;
        if w.singularities.len() != w.kappa {
            return Err(Error::Config(format!(
                "kappa is {} but {} singularities are listed",
                w.kappa,
                w.singularities.len()
            )));
        }
        for (i, row) in w.theta.iter().enumerate() {
            if row.len() != w.kappa {
                return Err(Error::Config(format!(
                    "theta row {i} has {} entries, expected kappa = {}",
                    row.len(),
                    w.kappa
                )));
            }
        }
        let theta = RationalMatrix::from_rows(w.theta, w.kappa)?;
        Self::new(w.singularities, theta)
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singularities
    }

    pub fn theta(&self) -> &RationalMatrix {
        &self.theta
    }
}

/// A feasible pattern and a kernel vector `v` with `M v = 0` and `sigma_i v_i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasiblePattern {
    pub signs: SignPattern,
    #[serde(with = "crate::algebra::rational::serde_vec")]
    pub certificate: Vec<Rational>,
}

/// Solves `M v = 0, sigma_i v_i >= 1`, returning `v`.
///
/// Substituting `v_i = sigma_i (1 + w_i)` turns this into
/// `(M diag sigma) w = -M sigma, w >= 0`.
///
/// # Panics
/// If `sigma` does not have one entry per column of `m`.
pub fn pattern_certificate(m: &RationalMatrix, sigma: &SignPattern) -> Option<Vec<Rational>> {
    assert_eq!(sigma.len(), m.cols(), "one sign per column");
    let s: Vec<Rational> = sigma.0.iter().map(|x| x.as_rational()).collect();
    let mut a = m.clone();
    for (j, sj) in s.iter().enumerate() {
        a.scale_column(j, sj);
    }
    let b: Vec<Rational> = m
        .mul_vec(&s)
        .expect("dimensions checked")
        .into_iter()
        .map(|x| -x)
        .collect();
    let w = simplex::feasible_point(&a, &b)?;
    Some(
        s.iter()
            .zip(w)
            .map(|(sj, wj)| sj * (BigRational::one() + wj))
            .collect(),
    )
}

/// Whether some `lambda` in the kernel of `m` has exactly the signs `sigma`.
pub fn pattern_feasible(m: &RationalMatrix, sigma: &SignPattern) -> bool {
    pattern_certificate(m, sigma).is_some()
}

/// All feasible patterns of `m`, sorted. Only patterns with `sigma_1 = +` are solved;
/// the rest follow by negating the certificate.
pub fn feasible_patterns_of(m: &RationalMatrix, cap: usize) -> Result<Vec<FeasiblePattern>> {
    let kappa = m.cols();
    if kappa > cap || kappa >= 64 {
        return Err(Error::CapExceeded { kappa, cap });
    }
    if kappa == 0 {
        return Ok(Vec::new());
    }
    let half = 1u64 << (kappa - 1);
    let found: Vec<FeasiblePattern> = (0..half)
        .into_par_iter()
        .filter_map(|bits| {
            // bit 0 clear keeps sigma_1 = +
            let signs = SignPattern::from_bits(bits << 1, kappa);
            let certificate = pattern_certificate(m, &signs)?;
            Some(FeasiblePattern { signs, certificate })
        })
        .collect();
    let mut out: Vec<FeasiblePattern> = found
        .into_iter()
        .flat_map(|p| {
            let neg = FeasiblePattern {
                signs: p.signs.negated(),
                certificate: p.certificate.iter().map(|x| -x).collect(),
            };
            [p, neg]
        })
        .collect();
    out.sort_by(|x, y| x.signs.cmp(&y.signs));
    Ok(out)
}

pub fn feasible_patterns(config: &ConifoldConfig, cap: usize) -> Result<Vec<FeasiblePattern>> {
    feasible_patterns_of(config.theta(), cap)
}

/// The small resolutions that admit a symplectic structure, one per feasible
/// pattern, under [`CONVENTION`].
pub fn symplectic_resolutions(config: &ConifoldConfig, cap: usize) -> Result<Vec<ResolutionChoice>> {
    Ok(feasible_patterns(config, cap)?
        .iter()
        .map(|p| p.signs.choice())
        .collect())
}

/// Sign patterns of random integer combinations of a kernel basis, keeping only
/// vectors with no zero coordinate. Always a subset of the feasible patterns.
pub fn sampling_oracle(m: &RationalMatrix, trials: usize, seed: u64) -> BTreeSet<SignPattern> {
    let basis = m.kernel();
    let mut out = BTreeSet::new();
    if basis.is_empty() {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut v = vec![Rational::zero(); m.cols()];
        for b in &basis {
            let c = Rational::from_integer(rng.gen_range(-20i64..=20).into());
            if c.is_zero() {
                continue;
            }
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += &c * bi;
            }
        }
        if let Some(signs) = v.iter().map(Sign::of).collect::<Option<Vec<_>>>() {
            out.insert(SignPattern(signs));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternVerdict {
    pub signs: SignPattern,
    pub choice: ResolutionChoice,
    /// Kernel vector `lambda` with the prescribed signs, as exact rationals.
    #[serde(with = "crate::algebra::rational::serde_vec")]
    pub certificate: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    pub kappa: usize,
    pub singularities: Vec<Singularity>,
    pub kernel_dimension: usize,
    pub convention: &'static str,
    pub patterns_examined: u64,
    pub feasible: Vec<PatternVerdict>,
}

impl ResolutionReport {
    pub fn summary(&self) -> String {
        let mut s = format!(
            "kappa = {}, kernel dimension {}, {} of {} small resolutions symplectic\n",
            self.kappa,
            self.kernel_dimension,
            self.feasible.len(),
            self.patterns_examined
        );
        for v in &self.feasible {
            let cert: Vec<String> = v.certificate.iter().map(format_rational).collect();
            s.push_str(&format!("  {}  {}  lambda = [{}]\n", v.signs, v.choice, cert.join(", ")));
        }
        s.push_str(&format!("  convention: {CONVENTION}\n"));
        s
    }
}

pub fn resolve(config: &ConifoldConfig, cap: usize) -> Result<ResolutionReport> {
    let feasible = feasible_patterns(config, cap)?
        .into_iter()
        .map(|p| PatternVerdict {
            choice: p.signs.choice(),
            signs: p.signs,
            certificate: p.certificate,
        })
        .collect();
    Ok(ResolutionReport {
        kappa: config.kappa(),
        singularities: config.singularities().to_vec(),
        kernel_dimension: config.kappa() - config.theta().rank(),
        convention: CONVENTION,
        patterns_examined: 1u64 << config.kappa(),
        feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn pat(s: &str) -> SignPattern {
        SignPattern::parse(s).unwrap()
    }

    fn signs(v: &[FeasiblePattern]) -> Vec<SignPattern> {
        v.iter().map(|p| p.signs.clone()).collect()
    }

    #[test]
    fn single_row_examples() {
        let m = RationalMatrix::from_i64(&[&[1, 1]]);
        assert!(pattern_feasible(&m, &pat("+-")));
        assert!(!pattern_feasible(&m, &pat("++")));
        let c = pattern_certificate(&m, &pat("+-")).unwrap();
        assert_eq!(c, vec![int(1), int(-1)]);
        assert_eq!(signs(&feasible_patterns_of(&m, 20).unwrap()), vec![pat("+-"), pat("-+")]);
    }

    #[test]
    fn trivial_kernel() {
        let m = RationalMatrix::identity(2);
        for bits in 0..4 {
            assert!(!pattern_feasible(&m, &SignPattern::from_bits(bits, 2)));
        }
        assert!(sampling_oracle(&m, 100, 1).is_empty());
    }

    #[test]
    fn chain_kernel() {
        let m = RationalMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1]]);
        assert_eq!(
            signs(&feasible_patterns_of(&m, 20).unwrap()),
            vec![pat("+-+"), pat("-+-")]
        );
    }

    #[test]
    fn zero_matrix_everything_feasible() {
        let m = RationalMatrix::zeros(1, 3);
        assert_eq!(feasible_patterns_of(&m, 20).unwrap().len(), 8);
        let m = RationalMatrix::zeros(1, 2);
        assert_eq!(sampling_oracle(&m, 1000, 7).len(), 4);
    }

    #[test]
    fn resolutions_and_convention() {
        let one = Singularity { r: 2, a: 1 };
        let cfg = ConifoldConfig::new(vec![one, one], RationalMatrix::from_i64(&[&[1, 1]])).unwrap();
        let got: BTreeSet<String> = symplectic_resolutions(&cfg, 20)
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(got, ["(s, sf)", "(sf, s)"].map(String::from).into());

        let cfg = ConifoldConfig::new(vec![one], RationalMatrix::zeros(1, 1)).unwrap();
        let got: Vec<String> = symplectic_resolutions(&cfg, 20)
            .unwrap()
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(got, vec!["(sf)", "(s)"]);

        let cfg = ConifoldConfig::new(vec![one; 2], RationalMatrix::identity(2)).unwrap();
        assert!(symplectic_resolutions(&cfg, 20).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let m = RationalMatrix::zeros(1, 5);
        assert_eq!(
            feasible_patterns_of(&m, 4),
            Err(Error::CapExceeded { kappa: 5, cap: 4 })
        );
    }

    #[test]
    fn config_json() {
        let cfg = ConifoldConfig::from_json(
            r#"{"kappa": 2, "singularities": [{"r": 3, "a": 1}, {"r": 2, "a": 1}],
                "theta": [[1, "-1/2"]]}"#,
        )
        .unwrap();
        let rep = resolve(&cfg, 20).unwrap();
        assert_eq!(rep.feasible.len(), 2);
        assert_eq!(rep.kernel_dimension, 1);

        let err = ConifoldConfig::from_json(
            r#"{"kappa": 2, "singularities": [{"r": 3, "a": 1}, {"r": 4, "a": 2}], "theta": [[1, 1]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("singularity 1"), "{err}");
        assert!(ConifoldConfig::from_json(r#"{"kappa": 2, "singularities": [], "theta": []}"#).is_err());
        assert!(ConifoldConfig::from_json(
            r#"{"kappa": 1, "singularities": [{"r": 2, "a": 1}], "theta": [[1, 2]]}"#
        )
        .is_err());
        // no rows: the zero map
        let cfg = ConifoldConfig::from_json(
            r#"{"kappa": 2, "singularities": [{"r": 2, "a": 1}, {"r": 2, "a": 1}], "theta": []}"#,
        )
        .unwrap();
        assert_eq!(resolve(&cfg, 20).unwrap().feasible.len(), 4);
    }
}
