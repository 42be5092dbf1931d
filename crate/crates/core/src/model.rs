use crate::error::{Error, Result};

/// `n` qutrits sharing one bath, with decay weights `A2` (`|1⟩ → |0⟩`) and
/// `A3` (`|2⟩ → |0⟩`). Rates are in units of the global dissipation rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    a2: f64,
    a3: f64,
}

impl ModelParams {
    pub fn new(n: usize, a2: f64, a3: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one qutrit".into()));
        }
        if !(a2.is_finite() && a3.is_finite()) || a2 < 0.0 || a3 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "decay weights must be finite and non-negative (A2 = {a2}, A3 = {a3})"
            )));
        }
        if a2 + a3 <= 0.0 {
            return Err(Error::InvalidParameter("A2 + A3 must be positive".into()));
        }
        let p = Self { n, a2, a3 };
        let identity_gap = (p.beta() - (p.gamma() - a2)).abs();
        if identity_gap > 1e-12 * p.gamma().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "beta = gamma - A2 fails by {identity_gap:e}"
            )));
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn a3(&self) -> f64 {
        self.a3
    }

    /// `β = (n − 1) A2 + n A3`.
    pub fn beta(&self) -> f64 {
        (self.n as f64 - 1.0) * self.a2 + self.n as f64 * self.a3
    }

    /// `γ = n (A2 + A3)`, the slow relaxation rate.
    pub fn gamma(&self) -> f64 {
        self.n as f64 * (self.a2 + self.a3)
    }

    /// `3^n`.
    pub fn hilbert_dim(&self) -> usize {
        3usize.pow(self.n as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_rates() {
        let p = ModelParams::new(2, 1.0, 1.0).unwrap();
        assert_eq!(p.beta(), 3.0);
        assert_eq!(p.gamma(), 4.0);
        let p = ModelParams::new(5, 0.5, 0.25).unwrap();
        assert!((p.beta() - (p.gamma() - p.a2())).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid() {
        assert!(ModelParams::new(0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(2, 0.0, 0.0).is_err());
        assert!(ModelParams::new(2, -1.0, 1.0).is_err());
        assert!(ModelParams::new(2, f64::NAN, 1.0).is_err());
        assert!(ModelParams::new(2, 0.0, 1.0).is_ok());
    }
}
