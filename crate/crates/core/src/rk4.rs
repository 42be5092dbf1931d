//! Classical fixed-step fourth-order Runge-Kutta.

use crate::linalg::{ComplexMatrix, C64};

/// A state that can be combined linearly by the integrator.
pub trait OdeState: Clone {
    /// `self += alpha * other`.
    fn axpy(&mut self, alpha: f64, other: &Self);
}

impl OdeState for ComplexMatrix {
    fn axpy(&mut self, alpha: f64, other: &Self) {
        self.add_scaled(C64::new(alpha, 0.0), other);
    }
}

impl<const N: usize> OdeState for [f64; N] {
    fn axpy(&mut self, alpha: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += alpha * b;
        }
    }
}

/// One RK4 step of `dy/dt = f(y)`.
pub fn rk4_step<S: OdeState>(y: &S, dt: f64, f: impl Fn(&S) -> S) -> S {
    let k1 = f(y);
    let mut tmp = y.clone();
    tmp.axpy(0.5 * dt, &k1);
    let k2 = f(&tmp);
    let mut tmp = y.clone();
    tmp.axpy(0.5 * dt, &k2);
    let k3 = f(&tmp);
    let mut tmp = y.clone();
    tmp.axpy(dt, &k3);
    let k4 = f(&tmp);

    let mut out = y.clone();
    out.axpy(dt / 6.0, &k1);
    out.axpy(dt / 3.0, &k2);
    out.axpy(dt / 3.0, &k3);
    out.axpy(dt / 6.0, &k4);
    out
}
