//! Analytic data functions for initial and boundary data.
//!
//! Inflow ghost values need exact derivatives of the boundary datum and
//! cell-average projections want an antiderivative, so data are carried as
//! closed-form oracles (sine, cosine, polynomial, constant, plus value
//! scaling and argument shift) rather than as black-box callables. Nothing
//! here is differentiated numerically; that would pollute every observed
//! convergence order downstream.
//!
//! Oracles are addressable by name (`"sin"`, `"cos"`, `"neg_sin"`,
//! `"poly:[c0,c1,...]"`, `"const:c"`, with optional `;scale=` / `;shift=`
//! modifiers), which is the form configuration files use.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)] // float math in no_std builds; std shadows it
use num_traits::Float;

/// Error from evaluating an oracle.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("derivative order {requested} exceeds the oracle cap {max}")]
    DerivativeOrderTooHigh { requested: usize, max: usize },
}

/// Error from parsing an oracle name.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleParseError {
    #[error("unknown oracle name `{0}`")]
    UnknownName(String),
    #[error("invalid number `{0}` in oracle spec")]
    InvalidNumber(String),
    #[error("malformed oracle spec `{0}`")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq)]
enum BaseFn {
    Sin,
    Cos,
    Const(f64),
    /// Coefficients `c_0 + c_1 x + c_2 x^2 + ...`.
    Poly(Vec<f64>),
}

/// A closed-form data function `x -> scale * base(x - shift)` exposing
/// exact derivatives of every order and, when enabled, an antiderivative.
#[derive(Debug, Clone, PartialEq)]
pub struct DataOracle {
    base: BaseFn,
    scale: f64,
    shift: f64,
    /// Optional cap on the derivative order the oracle will serve.
    max_order: Option<usize>,
    antiderivative_enabled: bool,
}

impl DataOracle {
    fn from_base(base: BaseFn) -> Self {
        Self {
            base,
            scale: 1.0,
            shift: 0.0,
            max_order: None,
            antiderivative_enabled: true,
        }
    }

    pub fn sin() -> Self {
        Self::from_base(BaseFn::Sin)
    }

    pub fn cos() -> Self {
        Self::from_base(BaseFn::Cos)
    }

    pub fn neg_sin() -> Self {
        Self::sin().scaled(-1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::from_base(BaseFn::Const(c))
    }

    pub fn poly(coeffs: &[f64]) -> Self {
        Self::from_base(BaseFn::Poly(coeffs.to_vec()))
    }

    /// Multiplies the value scale.
    pub fn scaled(mut self, s: f64) -> Self {
        self.scale *= s;
        self
    }

    /// Shifts the argument: the result evaluates the old oracle at `x - x0`.
    pub fn shifted(mut self, x0: f64) -> Self {
        self.shift += x0;
        self
    }

    /// Caps the derivative order the oracle will serve.
    pub fn with_max_derivative_order(mut self, max: usize) -> Self {
        self.max_order = Some(max);
        self
    }

    /// Disables the closed-form antiderivative, forcing quadrature paths.
    pub fn without_antiderivative(mut self) -> Self {
        self.antiderivative_enabled = false;
        self
    }

    /// `None` means derivatives of every order are available.
    pub fn max_derivative_order(&self) -> Option<usize> {
        self.max_order
    }

    pub fn value(&self, x: f64) -> f64 {
        self.derivative_unchecked(0, x)
    }

    /// Exact derivative of the given order; order 0 is the value itself.
    pub fn derivative(&self, order: usize, x: f64) -> Result<f64, OracleError> {
        if let Some(max) = self.max_order {
            if order > max {
                return Err(OracleError::DerivativeOrderTooHigh {
                    requested: order,
                    max,
                });
            }
        }
        Ok(self.derivative_unchecked(order, x))
    }

    fn derivative_unchecked(&self, order: usize, x: f64) -> f64 {
        let u = x - self.shift;
        let raw = match &self.base {
            BaseFn::Sin => match order % 4 {
                0 => u.sin(),
                1 => u.cos(),
                2 => -u.sin(),
                _ => -u.cos(),
            },
            BaseFn::Cos => match order % 4 {
                0 => u.cos(),
                1 => -u.sin(),
                2 => -u.cos(),
                _ => u.sin(),
            },
            BaseFn::Const(c) => {
                if order == 0 {
                    *c
                } else {
                    0.0
                }
            }
            BaseFn::Poly(coeffs) => poly_derivative(coeffs, order, u),
        };
        raw * self.scale
    }

    /// Closed-form antiderivative, if enabled. The additive constant is
    /// arbitrary but fixed, so differences over intervals are exact.
    pub fn antiderivative(&self, x: f64) -> Option<f64> {
        if !self.antiderivative_enabled {
            return None;
        }
        let u = x - self.shift;
        let raw = match &self.base {
            BaseFn::Sin => -u.cos(),
            BaseFn::Cos => u.sin(),
            BaseFn::Const(c) => c * u,
            BaseFn::Poly(coeffs) => {
                // Horner on sum c_i u^{i+1} / (i+1)
                let mut acc = 0.0;
                for (i, c) in coeffs.iter().enumerate().rev() {
                    acc = acc * u + c / (i as f64 + 1.0);
                }
                acc * u
            }
        };
        Some(raw * self.scale)
    }
}

/// Value of the `order`-th derivative of the polynomial at `u`.
fn poly_derivative(coeffs: &[f64], order: usize, u: f64) -> f64 {
    if order >= coeffs.len() {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in (order..coeffs.len()).rev() {
        let mut falling = 1.0;
        for q in 0..order {
            falling *= (i - q) as f64;
        }
        acc = acc * u + coeffs[i] * falling;
    }
    acc
}

impl FromStr for DataOracle {
    type Err = OracleParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split(';');
        let head = parts.next().unwrap_or("").trim();
        let mut oracle = if head == "sin" {
            Self::sin()
        } else if head == "cos" {
            Self::cos()
        } else if head == "neg_sin" {
            Self::neg_sin()
        } else if let Some(num) = head.strip_prefix("const:") {
            Self::constant(parse_number(num)?)
        } else if let Some(list) = head.strip_prefix("poly:") {
            let inner = list
                .trim()
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| OracleParseError::Malformed(s.to_string()))?;
            let coeffs = inner
                .split(',')
                .map(parse_number)
                .collect::<Result<Vec<f64>, _>>()?;
            if coeffs.is_empty() {
                return Err(OracleParseError::Malformed(s.to_string()));
            }
            Self::poly(&coeffs)
        } else {
            return Err(OracleParseError::UnknownName(head.to_string()));
        };
        for part in parts {
            let part = part.trim();
            if let Some(v) = part.strip_prefix("scale=") {
                oracle = oracle.scaled(parse_number(v)?);
            } else if let Some(v) = part.strip_prefix("shift=") {
                oracle = oracle.shifted(parse_number(v)?);
            } else {
                return Err(OracleParseError::Malformed(part.to_string()));
            }
        }
        Ok(oracle)
    }
}

fn parse_number(s: &str) -> Result<f64, OracleParseError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| OracleParseError::InvalidNumber(s.trim().to_string()))
}

impl fmt::Display for DataOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut scale = self.scale;
        match &self.base {
            BaseFn::Sin if scale < 0.0 => {
                write!(f, "neg_sin")?;
                scale = -scale;
            }
            BaseFn::Sin => write!(f, "sin")?,
            BaseFn::Cos => write!(f, "cos")?,
            BaseFn::Const(c) => write!(f, "const:{c}")?,
            BaseFn::Poly(coeffs) => {
                write!(f, "poly:[")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "]")?;
            }
        }
        if scale != 1.0 {
            write!(f, ";scale={scale}")?;
        }
        if self.shift != 0.0 {
            write!(f, ";shift={}", self.shift)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_derivative_cycle() {
        let o = DataOracle::sin();
        let x = 0.7;
        assert_eq!(o.derivative(0, x).unwrap(), x.sin());
        assert_eq!(o.derivative(1, x).unwrap(), x.cos());
        assert_eq!(o.derivative(2, x).unwrap(), -x.sin());
        assert_eq!(o.derivative(3, x).unwrap(), -x.cos());
        assert_eq!(o.derivative(4, x).unwrap(), x.sin());
    }

    #[test]
    fn derivative_order_zero_is_value() {
        for o in [
            DataOracle::neg_sin(),
            DataOracle::poly(&[1.0, -2.0, 0.5]),
            DataOracle::constant(3.0),
            DataOracle::cos().scaled(2.0).shifted(0.25),
        ] {
            assert_eq!(o.derivative(0, 1.3).unwrap(), o.value(1.3));
        }
    }

    #[test]
    fn poly_derivatives_and_antiderivative() {
        // q(x) = 1 - 2x + 3x^2
        let o = DataOracle::poly(&[1.0, -2.0, 3.0]);
        assert_eq!(o.value(2.0), 9.0);
        assert_eq!(o.derivative(1, 2.0).unwrap(), 10.0);
        assert_eq!(o.derivative(2, 2.0).unwrap(), 6.0);
        assert_eq!(o.derivative(3, 2.0).unwrap(), 0.0);
        // antiderivative x - x^2 + x^3
        let q = |x: f64| x - x * x + x * x * x;
        let (a, b) = (0.5, 2.0);
        let diff = o.antiderivative(b).unwrap() - o.antiderivative(a).unwrap();
        assert!((diff - (q(b) - q(a))).abs() < 1e-13);
    }

    #[test]
    fn scale_and_shift_compose() {
        let o = DataOracle::sin().scaled(2.0).shifted(0.3);
        let x = 1.1;
        assert!((o.value(x) - 2.0 * (x - 0.3).sin()).abs() < 1e-15);
        assert!((o.derivative(1, x).unwrap() - 2.0 * (x - 0.3).cos()).abs() < 1e-15);
        let anti = |x: f64| -2.0 * (x - 0.3).cos();
        let got = o.antiderivative(x).unwrap();
        assert!((got - anti(x)).abs() < 1e-15);
    }

    #[test]
    fn derivative_cap_is_enforced() {
        let o = DataOracle::sin().with_max_derivative_order(2);
        assert!(o.derivative(2, 0.0).is_ok());
        assert_eq!(
            o.derivative(3, 0.0),
            Err(OracleError::DerivativeOrderTooHigh {
                requested: 3,
                max: 2
            })
        );
    }

    #[test]
    fn antiderivative_can_be_suppressed() {
        let o = DataOracle::poly(&[0.0, 0.0, 1.0]).without_antiderivative();
        assert_eq!(o.antiderivative(1.0), None);
        assert_eq!(o.value(3.0), 9.0);
    }

    #[test]
    fn parse_catalog_names() {
        let g: DataOracle = "neg_sin".parse().unwrap();
        assert!((g.value(0.4) + 0.4f64.sin()).abs() < 1e-15);
        let c: DataOracle = "const:2.5".parse().unwrap();
        assert_eq!(c.value(100.0), 2.5);
        let p: DataOracle = "poly:[1, -2, 3]".parse().unwrap();
        assert_eq!(p.value(2.0), 9.0);
        let s: DataOracle = "sin;scale=2;shift=0.5".parse().unwrap();
        assert!((s.value(1.0) - 2.0 * 0.5f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn parse_rejects_bad_specs() {
        assert!(matches!(
            "sinn".parse::<DataOracle>(),
            Err(OracleParseError::UnknownName(_))
        ));
        assert!(matches!(
            "const:abc".parse::<DataOracle>(),
            Err(OracleParseError::InvalidNumber(_))
        ));
        assert!(matches!(
            "poly:1,2".parse::<DataOracle>(),
            Err(OracleParseError::Malformed(_))
        ));
        assert!(matches!(
            "sin;speed=2".parse::<DataOracle>(),
            Err(OracleParseError::Malformed(_))
        ));
    }

    #[test]
    fn display_round_trips_through_parse() {
        for spec in ["sin", "neg_sin", "cos;shift=0.5", "poly:[1,-2,3];scale=2", "const:4"] {
            let o: DataOracle = spec.parse().unwrap();
            let echoed = alloc::format!("{o}");
            let back: DataOracle = echoed.parse().unwrap();
            assert_eq!(o, back, "spec `{spec}` echoed as `{echoed}`");
        }
    }
}
