use serde::Serialize;

use crate::error::{Error, Result};

/// Two bonded half-planes: `mu_plus` above the interface, `mu_minus` below.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bimaterial {
    mu_plus: f64,
    mu_minus: f64,
    eta: f64,
}

impl Bimaterial {
    pub fn new(mu_plus: f64, mu_minus: f64) -> Result<Self> {
        for (field, mu) in [("mu_plus", mu_plus), ("mu_minus", mu_minus)] {
            if !(mu.is_finite() && mu > 0.0) {
                return Err(Error::domain(
                    field,
                    format!("shear modulus must be finite and positive, got {mu}"),
                ));
            }
        }
        Ok(Bimaterial {
            mu_plus,
            mu_minus,
            eta: (mu_minus - mu_plus) / (mu_minus + mu_plus),
        })
    }

    /// Both half-planes share one modulus.
    pub fn homogeneous(mu: f64) -> Result<Self> {
        Self::new(mu, mu)
    }

    pub fn mu_plus(&self) -> f64 {
        self.mu_plus
    }

    pub fn mu_minus(&self) -> f64 {
        self.mu_minus
    }

    /// Contrast parameter `(mu_minus - mu_plus) / (mu_minus + mu_plus)`, in `(-1, 1)`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn mu_sum(&self) -> f64 {
        self.mu_plus + self.mu_minus
    }

    /// `mu_plus * mu_minus / (mu_plus + mu_minus)`.
    pub fn harmonic_factor(&self) -> f64 {
        self.mu_plus * self.mu_minus / self.mu_sum()
    }

    /// Modulus of the half-plane containing a point at polar angle `phi`.
    pub fn modulus_at(&self, phi: f64) -> f64 {
        if phi.sin() > 0.0 {
            self.mu_plus
        } else {
            self.mu_minus
        }
    }

    /// Modulus of the half-plane opposite to the point at polar angle `phi`.
    pub fn opposite_modulus(&self, phi: f64) -> f64 {
        if phi.sin() > 0.0 {
            self.mu_minus
        } else {
            self.mu_plus
        }
    }

    /// The same pair of materials with the half-planes exchanged.
    pub fn swapped(&self) -> Self {
        Bimaterial {
            mu_plus: self.mu_minus,
            mu_minus: self.mu_plus,
            eta: -self.eta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_materials_have_zero_contrast() {
        assert_eq!(Bimaterial::new(1.0, 1.0).unwrap().eta(), 0.0);
    }

    #[test]
    fn contrast_for_tenfold_ratios() {
        let soft_top = Bimaterial::new(0.1, 1.0).unwrap();
        assert!((soft_top.eta() - 9.0 / 11.0).abs() < 1e-15);
        let stiff_top = Bimaterial::new(10.0, 1.0).unwrap();
        assert!((stiff_top.eta() + 9.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive_moduli() {
        assert!(matches!(
            Bimaterial::new(0.0, 1.0),
            Err(Error::Domain { field: "mu_plus", .. })
        ));
        assert!(matches!(
            Bimaterial::new(1.0, -2.0),
            Err(Error::Domain { field: "mu_minus", .. })
        ));
        assert!(Bimaterial::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn eta_is_antisymmetric_under_exchange() {
        for (a, b) in [(0.3, 2.0), (5.0, 0.01), (1.0, 1.0)] {
            let ab = Bimaterial::new(a, b).unwrap();
            let ba = Bimaterial::new(b, a).unwrap();
            assert_eq!(ab.eta(), -ba.eta());
            assert_eq!(ab.swapped(), ba);
        }
    }
}
