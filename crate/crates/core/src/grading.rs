//! Grassmann parity and ghost number.
//!
//! The two gradings are independent: parity drives Koszul signs, ghost
//! number is plain bookkeeping. Nothing here assumes parity = ghost mod 2.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Add;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u8) -> Self {
        if b & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// (-1)^{self * other}: the Koszul factor for transposing two factors.
    pub fn koszul(self, other: Parity) -> i8 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() ^ rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// Combined (parity, ghost) grading of a generator or homogeneous expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Grading {
    pub parity: Parity,
    pub ghost: i32,
}

impl Grading {
    pub const fn even() -> Self {
        Grading { parity: Parity::Even, ghost: 0 }
    }

    pub fn new(parity: Parity, ghost: i32) -> Self {
        Grading { parity, ghost }
    }
}

impl Add for Grading {
    type Output = Grading;
    fn add(self, rhs: Grading) -> Grading {
        Grading { parity: self.parity + rhs.parity, ghost: self.ghost + rhs.ghost }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, gh {})", self.parity, self.ghost)
    }
}
