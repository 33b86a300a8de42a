//! Second-order forward-mode differentiation in three variables.
//!
//! A [`Jet`] carries a value together with its gradient and Hessian with
//! respect to a point of R³. It is used to get exact normals and curvatures
//! of implicitly described surfaces.

use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: Vector3<f64>,
    pub hess: Matrix3<f64>,
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            grad: Vector3::zeros(),
            hess: Matrix3::zeros(),
        }
    }

    /// The coordinate functions x, y, z at `p`.
    pub fn coordinates(p: &Vector3<f64>) -> [Jet; 3] {
        let mut out = [Jet::constant(0.0); 3];
        for (i, jet) in out.iter_mut().enumerate() {
            jet.value = p[i];
            jet.grad[i] = 1.0;
        }
        out
    }

    /// Applies a scalar function given its value and first two derivatives.
    fn chain(self, f: f64, df: f64, d2f: f64) -> Jet {
        Jet {
            value: f,
            grad: self.grad * df,
            hess: self.hess * df + self.grad * self.grad.transpose() * d2f,
        }
    }

    pub fn sqrt(self) -> Jet {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.value))
    }

    pub fn recip(self) -> Jet {
        let r = 1.0 / self.value;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn powi(self, k: i32) -> Jet {
        match k {
            0 => Jet::constant(1.0),
            1 => self,
            _ => {
                let x = self.value;
                let kf = f64::from(k);
                self.chain(x.powi(k), kf * x.powi(k - 1), kf * (kf - 1.0) * x.powi(k - 2))
            }
        }
    }

    pub fn scale(self, s: f64) -> Jet {
        Jet {
            value: self.value * s,
            grad: self.grad * s,
            hess: self.hess * s,
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            value: self.value + o.value,
            grad: self.grad + o.grad,
            hess: self.hess + o.hess,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            value: self.value - o.value,
            grad: self.grad - o.grad,
            hess: self.hess - o.hess,
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let cross = self.grad * o.grad.transpose();
        Jet {
            value: self.value * o.value,
            grad: self.grad * o.value + o.grad * self.value,
            hess: self.hess * o.value + o.hess * self.value + cross + cross.transpose(),
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, s: f64) -> Jet {
        self.value += s;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, s: f64) -> Jet {
        self.value -= s;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        self.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: impl Fn(&Vector3<f64>) -> Jet, p: Vector3<f64>) {
        let jet = f(&p);
        let h = 1e-5;
        for i in 0..3 {
            let mut e = Vector3::zeros();
            e[i] = h;
            let gp = f(&(p + e));
            let gm = f(&(p - e));
            let dv = (gp.value - gm.value) / (2.0 * h);
            assert!((dv - jet.grad[i]).abs() < 1e-7 * (1.0 + dv.abs()), "grad {i}");
            let dg = (gp.grad - gm.grad) / (2.0 * h);
            for j in 0..3 {
                assert!(
                    (dg[j] - jet.hess[(j, i)]).abs() < 1e-6 * (1.0 + dg[j].abs()),
                    "hess {j}{i}: {} vs {}",
                    dg[j],
                    jet.hess[(j, i)]
                );
            }
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let f = |p: &Vector3<f64>| {
            let [x, y, z] = Jet::coordinates(p);
            let r = (x * x + y * y + z * z).sqrt();
            (x * y.powi(3) + z) / r - (y * z).recip() * 0.3
        };
        fd_check(f, Vector3::new(0.3, -1.2, 0.7));
        fd_check(f, Vector3::new(1.5, 0.4, -0.2));
    }
}
