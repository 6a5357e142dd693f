//! First-order dual numbers and the scalar abstraction that lets every
//! field recipe run both in plain `f64` and with a tangent direction attached.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Scalars the geometric recipes are generic over.
pub trait Scalar:
    Copy
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn constant(v: f64) -> Self;
    fn value(self) -> f64;
    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;

    fn scale(self, c: f64) -> Self {
        self * Self::constant(c)
    }
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn value(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

/// `value + derivative·ε` with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub derivative: f64,
}

impl Jet {
    pub const fn new(value: f64, derivative: f64) -> Self {
        Self { value, derivative }
    }

    pub const fn variable(value: f64) -> Self {
        Self::new(value, 1.0)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.derivative + o.derivative)
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.value - o.value, self.derivative - o.derivative)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.value * o.value,
            self.derivative * o.value + self.value * o.derivative,
        )
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let q = self.value / o.value;
        Jet::new(q, (self.derivative - q * o.derivative) / o.value)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.value, -self.derivative)
    }
}

impl Zero for Jet {
    fn zero() -> Self {
        Jet::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.value == 0.0 && self.derivative == 0.0
    }
}

impl One for Jet {
    fn one() -> Self {
        Jet::new(1.0, 0.0)
    }
}

impl Scalar for Jet {
    fn constant(v: f64) -> Self {
        Jet::new(v, 0.0)
    }
    fn value(self) -> f64 {
        self.value
    }
    fn sqrt(self) -> Self {
        let r = self.value.sqrt();
        Jet::new(r, self.derivative / (2.0 * r))
    }
    fn sin(self) -> Self {
        Jet::new(self.value.sin(), self.derivative * self.value.cos())
    }
    fn cos(self) -> Self {
        Jet::new(self.value.cos(), -self.derivative * self.value.sin())
    }
}
