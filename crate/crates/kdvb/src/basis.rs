//! Extended cubic B-spline basis.
//!
//! The basis function `E_i` is a one-parameter deformation of the classical
//! cubic B-spline: each of its four polynomial pieces picks up a quartic term
//! weighted by the extension parameter `lambda`, while support, C² smoothness
//! and partition of unity are preserved. `lambda = 0` recovers the classical
//! cubic B-spline exactly.
//!
//! Knots are implicit: a uniform grid is described by an origin and the
//! spacing `h` stored in [`BasisConfig`], never by a knot vector.

use crate::error::{Error, Result};

/// Extension parameter and grid spacing defining one spline family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisConfig {
    lambda: f64,
    h: f64,
}

/// Values of `E_i` and its derivatives at the grid nodes, as coefficients of
/// the three-term nodal formulas:
///
/// ```text
/// U_i   = alpha1 d_{i-1} + alpha2 d_i + alpha1 d_{i+1}
/// U'_i  = beta1 (d_{i-1} - d_{i+1})
/// U''_i = gamma1 d_{i-1} + gamma2 d_i + gamma1 d_{i+1}
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalTable {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

/// Values of `E_i` and its first derivative at the cell midpoints.
///
/// At `x_{m+1/2}` exactly four splines are active, `E_{m-1}..E_{m+2}`.
/// Values are symmetric, derivatives antisymmetric:
///
/// ```text
/// value: (outer, inner, inner, outer)
/// deriv: (d_outer, d_inner, -d_inner, -d_outer)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidpointTable {
    pub value_outer: f64,
    pub value_inner: f64,
    pub deriv_outer: f64,
    pub deriv_inner: f64,
}

impl MidpointTable {
    /// Weights of `(E_{m-1}, E_m, E_{m+1}, E_{m+2})` values at `x_{m+1/2}`.
    pub fn values(&self) -> [f64; 4] {
        [
            self.value_outer,
            self.value_inner,
            self.value_inner,
            self.value_outer,
        ]
    }

    /// Weights of `(E'_{m-1}, E'_m, E'_{m+1}, E'_{m+2})` at `x_{m+1/2}`.
    pub fn derivs(&self) -> [f64; 4] {
        [
            self.deriv_outer,
            self.deriv_inner,
            -self.deriv_inner,
            -self.deriv_outer,
        ]
    }
}

impl BasisConfig {
    /// Requires `h > 0` and finite parameters.
    pub fn new(lambda: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() || !lambda.is_finite() {
            return Err(Error::NonPositiveSpacing(h));
        }
        Ok(Self { lambda, h })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Nodal coefficients of the spline family.
    pub fn nodal_table(&self) -> NodalTable {
        let (lambda, h) = (self.lambda, self.h);
        NodalTable {
            alpha1: (4.0 - lambda) / 24.0,
            alpha2: (8.0 + lambda) / 12.0,
            beta1: -1.0 / (2.0 * h),
            gamma1: (2.0 + lambda) / (2.0 * h * h),
            gamma2: -(4.0 + 2.0 * lambda) / (2.0 * h * h),
        }
    }

    /// Midpoint coefficients of the spline family.
    pub fn midpoint_table(&self) -> MidpointTable {
        let (lambda, h) = (self.lambda, self.h);
        MidpointTable {
            value_outer: (8.0 - 5.0 * lambda) / 384.0,
            value_inner: (184.0 + 5.0 * lambda) / 384.0,
            deriv_outer: (lambda - 2.0) / (16.0 * h),
            deriv_inner: -(3.0 * lambda + 10.0) / (16.0 * h),
        }
    }

    /// Dimensionless offset of `x` from the spline center, in units of `h`.
    fn offset(&self, center_index: i64, x: f64, origin: f64) -> f64 {
        (x - origin) / self.h - center_index as f64
    }

    /// Value of `E_i(x)` for the spline centered at node `center_index` of
    /// the uniform grid starting at `origin`. Zero outside the support
    /// `[x_{i-2}, x_{i+2}]`.
    pub fn eval(&self, center_index: i64, x: f64, origin: f64) -> f64 {
        let lambda = self.lambda;
        let r = self.offset(center_index, x, origin);
        // Pieces are half-open [knot, knot+1), the last one closed at r = 2.
        if r < -2.0 || r > 2.0 {
            0.0
        } else if r < -1.0 {
            let q = r + 2.0;
            (4.0 * (1.0 - lambda) * q.powi(3) + 3.0 * lambda * q.powi(4)) / 24.0
        } else if r < 0.0 {
            let q = r + 1.0;
            ((4.0 - lambda)
                + 12.0 * q
                + 6.0 * (2.0 + lambda) * q * q
                - 12.0 * q.powi(3)
                - 3.0 * lambda * q.powi(4))
                / 24.0
        } else if r < 1.0 {
            let q = r - 1.0;
            ((4.0 - lambda) - 12.0 * q + 6.0 * (2.0 + lambda) * q * q
                + 12.0 * q.powi(3)
                - 3.0 * lambda * q.powi(4))
                / 24.0
        } else {
            let q = r - 2.0;
            (4.0 * (lambda - 1.0) * q.powi(3) + 3.0 * lambda * q.powi(4)) / 24.0
        }
    }

    /// First or second derivative of `E_i` at `x`.
    ///
    /// Only orders 1 and 2 exist for this family (the pieces are C² but not
    /// C³ across knots); any other order is rejected.
    pub fn eval_deriv(&self, center_index: i64, x: f64, origin: f64, order: usize) -> Result<f64> {
        let lambda = self.lambda;
        let h = self.h;
        let r = self.offset(center_index, x, origin);
        if r < -2.0 || r > 2.0 {
            return match order {
                1 | 2 => Ok(0.0),
                _ => Err(Error::UnsupportedDerivative(order)),
            };
        }
        let (q, sd, sv) = if r < -1.0 {
            (r + 2.0, 1.0, 1.0) // rising outer piece
        } else if r < 0.0 {
            (r + 1.0, 0.0, 0.0) // handled separately below
        } else if r < 1.0 {
            (r - 1.0, 0.0, 0.0)
        } else {
            (r - 2.0, -1.0, 1.0) // falling outer piece mirrors the rising one
        };
        let value = match order {
            1 => {
                if r < -1.0 || r >= 1.0 {
                    // outer pieces: d/dx [4 s (1-l) q^3 + 3 l q^4] / 24h with s = +-1
                    (12.0 * sd * (1.0 - lambda) * q * q * sv + 12.0 * lambda * q.powi(3))
                        / (24.0 * h)
                } else if r < 0.0 {
                    (12.0 + 12.0 * (2.0 + lambda) * q - 36.0 * q * q - 12.0 * lambda * q.powi(3))
                        / (24.0 * h)
                } else {
                    (-12.0 + 12.0 * (2.0 + lambda) * q + 36.0 * q * q - 12.0 * lambda * q.powi(3))
                        / (24.0 * h)
                }
            }
            2 => {
                if r < -1.0 || r >= 1.0 {
                    (24.0 * sd * (1.0 - lambda) * q * sv + 36.0 * lambda * q * q) / (24.0 * h * h)
                } else if r < 0.0 {
                    (12.0 * (2.0 + lambda) - 72.0 * q - 36.0 * lambda * q * q) / (24.0 * h * h)
                } else {
                    (12.0 * (2.0 + lambda) + 72.0 * q - 36.0 * lambda * q * q) / (24.0 * h * h)
                }
            }
            other => return Err(Error::UnsupportedDerivative(other)),
        };
        Ok(value)
    }
}
