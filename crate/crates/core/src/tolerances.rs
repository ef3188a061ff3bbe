use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every module. All are overridable by name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative eigenpair residual.
    pub eig: f64,
    /// Relative pivot threshold for the Gauss factorization.
    pub minor: f64,
    pub exp: f64,
    /// Minimal absolute gap between real parts of eigenvalues inside the chamber.
    pub chamber: f64,
    /// Relative singular-value cutoff for numerical kernels.
    pub kernel: f64,
    /// Distance from the Kostant section, and the inverse-section residual.
    pub section: f64,
    /// Relative residual of Ad_g(x) = x for stabilizer membership.
    pub stabilizer: f64,
    pub triangular: f64,
    pub torus: f64,
    /// Relative residual of Ad_g(theta) = theta accepted by tau.
    pub centralizing: f64,
    pub lstsq: f64,
    pub fd_step: f64,
    /// Smallest modulus of a simple-root coordinate on the Toda phase space.
    pub root_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig: 1e-10,
            minor: 1e-12,
            exp: 1e-13,
            chamber: 1e-9,
            kernel: 1e-8,
            section: 1e-10,
            stabilizer: 1e-9,
            triangular: 1e-12,
            torus: 1e-10,
            centralizing: 1e-8,
            lstsq: 1e-10,
            fd_step: 1e-6,
            root_min: 1e-13,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 13] = [
        "eig",
        "minor",
        "exp",
        "chamber",
        "kernel",
        "section",
        "stabilizer",
        "triangular",
        "torus",
        "centralizing",
        "lstsq",
        "fd_step",
        "root_min",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "eig" => &mut self.eig,
            "minor" => &mut self.minor,
            "exp" => &mut self.exp,
            "chamber" => &mut self.chamber,
            "kernel" => &mut self.kernel,
            "section" => &mut self.section,
            "stabilizer" => &mut self.stabilizer,
            "triangular" => &mut self.triangular,
            "torus" => &mut self.torus,
            "centralizing" => &mut self.centralizing,
            "lstsq" => &mut self.lstsq,
            "fd_step" => &mut self.fd_step,
            "root_min" => &mut self.root_min,
            _ => return None,
        })
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.clone().slot(name).map(|v| *v)
    }

    /// Returns `Ok(false)` when `name` is not a tolerance, so callers can try other namespaces.
    pub fn set(&mut self, name: &str, value: f64) -> Result<bool> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance {name} must be positive and finite, got {value}"
            )));
        }
        match self.slot(name) {
            Some(v) => {
                *v = value;
                Ok(true)
            }
            None => Ok(false),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_is_addressable() {
        let mut t = Tolerances::default();
        for name in Tolerances::NAMES {
            assert!(t.get(name).is_some());
            assert!(t.set(name, 0.5).unwrap());
            assert_eq!(t.get(name), Some(0.5));
        }
        assert!(!t.set("nonsense", 1.0).unwrap());
        assert!(t.set("eig", -1.0).is_err());
    }
}
