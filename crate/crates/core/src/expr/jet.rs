use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::real::Real;

/// Truncated Taylor jet: a value with its first three derivatives in `s`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Jet3<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

impl<T: Real> Jet3<T> {
    pub const fn new(value: T, d1: T, d2: T, d3: T) -> Self {
        Self { value, d1, d2, d3 }
    }

    pub fn constant(value: T) -> Self {
        Self::new(value, T::zero(), T::zero(), T::zero())
    }

    /// The independent variable itself, evaluated at `s`.
    pub fn variable(s: T) -> Self {
        Self::new(s, T::one(), T::zero(), T::zero())
    }

    pub fn scale(self, k: T) -> Self {
        Self::new(self.value * k, self.d1 * k, self.d2 * k, self.d3 * k)
    }

    /// Composes an outer scalar function with this jet (Faà di Bruno to order 3).
    ///
    /// `f` holds the outer function's value and first three derivatives,
    /// evaluated at `self.value`.
    pub fn compose(self, f: [T; 4]) -> Self {
        let [f0, f1, f2, f3] = f;
        let (u1, u2, u3) = (self.d1, self.d2, self.d3);
        let three = T::lit(3.0);
        Self::new(
            f0,
            f1 * u1,
            f2 * u1 * u1 + f1 * u2,
            f3 * u1 * u1 * u1 + three * f2 * u1 * u2 + f1 * u3,
        )
    }

    /// `1 / self`; the caller guarantees a nonzero value.
    pub fn recip(self) -> Self {
        let u = self.value;
        let r = u.recip();
        let r2 = r * r;
        self.compose([r, -r2, T::lit(2.0) * r2 * r, T::lit(-6.0) * r2 * r2])
    }

    /// `self^n` for an integer exponent.
    pub fn powi(self, n: i32) -> Self {
        let u = self.value;
        let nf = T::lit(f64::from(n));
        let one = T::one();
        let two = T::lit(2.0);
        // u^(n-k) with integer powers stays exact for u = 0 when n - k >= 0.
        let p = |k: i32| if n - k == 0 { one } else { u.powi(n - k) };
        let c1 = nf;
        let c2 = nf * (nf - one);
        let c3 = c2 * (nf - two);
        let f1 = if n == 0 { T::zero() } else { c1 * p(1) };
        let f2 = if n == 0 || n == 1 { T::zero() } else { c2 * p(2) };
        let f3 = if (0..=2).contains(&n) { T::zero() } else { c3 * p(3) };
        self.compose([p(0), f1, f2, f3])
    }

    /// `self^a` for a real exponent; the caller guarantees a positive base.
    pub fn powf(self, a: T) -> Self {
        let u = self.value;
        let one = T::one();
        let two = T::lit(2.0);
        let f0 = u.powf(a);
        self.compose([
            f0,
            a * u.powf(a - one),
            a * (a - one) * u.powf(a - two),
            a * (a - one) * (a - two) * u.powf(a - T::lit(3.0)),
        ])
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn tan(self) -> Self {
        let t = self.value.tan();
        let one = T::one();
        let two = T::lit(2.0);
        let sec2 = one + t * t;
        self.compose([t, sec2, two * t * sec2, two * sec2 * (one + T::lit(3.0) * t * t)])
    }

    pub fn atan(self) -> Self {
        let u = self.value;
        let one = T::one();
        let q = one + u * u;
        self.compose([
            u.atan(),
            q.recip(),
            T::lit(-2.0) * u / (q * q),
            (T::lit(6.0) * u * u - T::lit(2.0)) / (q * q * q),
        ])
    }

    /// Square root; the caller guarantees a positive argument.
    pub fn sqrt(self) -> Self {
        let r = self.value.sqrt();
        let half = T::lit(0.5);
        // d^k/du^k sqrt(u) = r, r/(2u), -r/(4u^2), 3r/(8u^3)
        let u = self.value;
        self.compose([r, half * r / u, T::lit(-0.25) * r / (u * u), T::lit(0.375) * r / (u * u * u)])
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose([e, e, e, e])
    }

    /// Natural logarithm; the caller guarantees a positive argument.
    pub fn ln(self) -> Self {
        let r = self.value.recip();
        self.compose([self.value.ln(), r, -r * r, T::lit(2.0) * r * r * r])
    }

    /// Absolute value, using the right-hand derivative at zero.
    pub fn abs(self) -> Self {
        if self.value < T::zero() {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite() && self.d3.is_finite()
    }
}

impl<T: Real> Add for Jet3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)
    }
}

impl<T: Real> Sub for Jet3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2, self.d3 - o.d3)
    }
}

impl<T: Real> Neg for Jet3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, -self.d1, -self.d2, -self.d3)
    }
}

impl<T: Real> Mul for Jet3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        Self::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + two * self.d1 * o.d1 + self.value * o.d2,
            self.d3 * o.value + three * (self.d2 * o.d1 + self.d1 * o.d2) + self.value * o.d3,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn leibniz_rule_on_polynomials() {
        // (s^2)(s^3) = s^5 at s = 2: 32, 80, 160, 240
        let s = Jet3::variable(2.0);
        let p = (s * s) * (s * s * s);
        assert!(close(p.value, 32.0));
        assert!(close(p.d1, 80.0));
        assert!(close(p.d2, 160.0));
        assert!(close(p.d3, 240.0));
    }

    #[test]
    fn powi_matches_repeated_product() {
        let s = Jet3::variable(-1.5);
        let a = s.powi(4);
        let b = s * s * s * s;
        for (x, y) in [(a.value, b.value), (a.d1, b.d1), (a.d2, b.d2), (a.d3, b.d3)] {
            assert!(close(x, y));
        }
        let z = Jet3::variable(0.0).powi(2);
        assert_eq!((z.value, z.d1, z.d2, z.d3), (0.0, 0.0, 2.0, 0.0));
    }

    #[test]
    fn negative_integer_power_is_reciprocal() {
        let s = Jet3::variable(1.7);
        let a = s.powi(-1);
        let b = s.recip();
        assert!(close(a.d3, b.d3) && close(a.d2, b.d2));
    }

    #[test]
    fn sqrt_squared_is_identity() {
        let s = Jet3::variable(2.3);
        let r = s.sqrt();
        let back = r * r;
        assert!(close(back.value, 2.3));
        assert!(close(back.d1, 1.0));
        assert!(back.d2.abs() < 1e-13 && back.d3.abs() < 1e-13);
    }

    #[test]
    fn exp_of_log_is_identity() {
        let s = Jet3::variable(0.7);
        let e = s.ln().exp();
        assert!(close(e.value, 0.7) && close(e.d1, 1.0));
        assert!(e.d2.abs() < 1e-13 && e.d3.abs() < 1e-13);
    }
}
