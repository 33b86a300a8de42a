use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent β, linear weights (c, d) and ambient dimension n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub beta: f64,
    pub c: f64,
    pub d: f64,
    #[serde(default = "default_dimension")]
    pub n: u32,
}

fn default_dimension() -> u32 {
    3
}

impl ParamSet {
    pub fn new(beta: f64, c: f64, d: f64) -> Self {
        ParamSet { beta, c, d, n: 3 }
    }

    pub fn with_dimension(self, n: u32) -> Self {
        ParamSet { n, ..self }
    }

    /// Smallest admissible exponent, (n−2)/(n−1).
    pub fn beta_threshold(n: u32) -> f64 {
        (n as f64 - 2.0) / (n as f64 - 1.0)
    }

    /// (n−1)/(n−2).
    pub fn k(&self) -> f64 {
        let n = self.n as f64;
        (n - 1.0) / (n - 2.0)
    }

    pub fn a_beta(&self) -> f64 {
        0.25 * self.beta * (self.beta - Self::beta_threshold(self.n))
    }

    fn check_dimension(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::Inadmissible(format!("dimension n = {} must be at least 3", self.n)));
        }
        if !(self.beta.is_finite() && self.c.is_finite() && self.d.is_finite()) {
            return Err(Error::Inadmissible("parameters must be finite".into()));
        }
        Ok(())
    }

    /// Admissibility for the divergence identity: β ≥ 0.
    pub fn validate_for_identity(&self) -> Result<()> {
        self.check_dimension()?;
        if self.beta < 0.0 {
            return Err(Error::Inadmissible(format!("beta = {} is negative", self.beta)));
        }
        Ok(())
    }

    /// Admissibility for inequalities and monotonicity:
    /// c + d ≥ 0, d ≥ 0, β ≥ (n−2)/(n−1).
    pub fn validate(&self) -> Result<()> {
        self.check_dimension()?;
        let mut problems = Vec::new();
        if self.c + self.d < 0.0 {
            problems.push(format!("c + d = {} is negative", self.c + self.d));
        }
        if self.d < 0.0 {
            problems.push(format!("d = {} is negative", self.d));
        }
        let threshold = Self::beta_threshold(self.n);
        // Accept the threshold itself when written with finite precision.
        if self.beta < threshold - 1e-12 {
            problems.push(format!("beta = {} is below (n-2)/(n-1) = {threshold}", self.beta));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Inadmissible(problems.join("; ")))
        }
    }

    /// F(u) = (cu + d)·u^{1 − kβ}.
    pub fn coeff_f(&self, u: f64) -> Result<f64> {
        check_level(u)?;
        Ok((self.c * u + self.d) * u.powf(1.0 - self.k() * self.beta))
    }

    /// G(u) = −(kβ/u)·F(u) + d·u^{−kβ}.
    pub fn coeff_g(&self, u: f64) -> Result<f64> {
        let f = self.coeff_f(u)?;
        let kb = self.k() * self.beta;
        Ok(-kb * f / u + self.d * u.powf(-kb))
    }

    /// Derivative of F with respect to u.
    pub fn coeff_f_prime(&self, u: f64) -> Result<f64> {
        check_level(u)?;
        let e = 1.0 - self.k() * self.beta;
        Ok(self.c * u.powf(e) + (self.c * u + self.d) * e * u.powf(e - 1.0))
    }
}

fn check_level(u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("potential value u = {u} must be positive")))
    }
}

pub fn coeff_f(u: f64, p: &ParamSet) -> Result<f64> {
    p.coeff_f(u)
}

pub fn coeff_g(u: f64, p: &ParamSet) -> Result<f64> {
    p.coeff_g(u)
}
