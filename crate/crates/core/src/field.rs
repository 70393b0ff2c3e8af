//! Arithmetic in the prime field GF(p) for odd primes p < 256.
//!
//! Residues are plain `u8` values; every container that holds them carries the
//! [`Field`] it belongs to.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A residue mod p, `0 <= value < p`.
pub type Scalar = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime below 256")]
    BadModulus(u32),
}

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    p: u8,
}

impl TryFrom<u32> for Field {
    type Error = FieldError;
    fn try_from(p: u32) -> Result<Self, FieldError> {
        Field::new(p)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.p as u32
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl Field {
    pub fn new(p: u32) -> Result<Field, FieldError> {
        if p == 2 || p >= 256 || !is_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        Ok(Field { p: p as u8 })
    }

    /// GF(3), the field every construction in the second half of the library uses.
    pub const fn three() -> Field {
        Field { p: 3 }
    }

    #[inline]
    pub fn p(self) -> u8 {
        self.p
    }

    #[inline]
    pub fn is_three(self) -> bool {
        self.p == 3
    }

    #[inline]
    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        let s = a as u16 + b as u16;
        if s >= self.p as u16 {
            (s - self.p as u16) as u8
        } else {
            s as u8
        }
    }

    #[inline]
    pub fn neg(self, a: Scalar) -> Scalar {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    pub fn pow(self, mut a: Scalar, mut e: u32) -> Scalar {
        let mut r = 1u8;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: Scalar) -> Scalar {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        self.pow(a, self.p as u32 - 2)
    }

    /// The inverse of 2, `(p+1)/2`.
    #[inline]
    pub fn inv2(self) -> Scalar {
        self.p.div_ceil(2)
    }

    /// Reduces a signed integer mod p.
    #[inline]
    pub fn from_i64(self, v: i64) -> Scalar {
        v.rem_euclid(self.p as i64) as u8
    }

    /// Symmetric lift into `(-p/2, p/2]`, handy for display.
    pub fn to_signed(self, a: Scalar) -> i64 {
        if a as u16 * 2 > self.p as u16 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// `y += c * x` entrywise.
    #[inline]
    pub fn axpy(self, y: &mut [Scalar], c: Scalar, x: &[Scalar]) {
        debug_assert_eq!(y.len(), x.len());
        if c == 0 {
            return;
        }
        if self.p == 3 {
            // values stay below 2 + 2*2 = 6, so two conditional subtractions reduce
            for (a, &b) in y.iter_mut().zip(x) {
                let mut v = *a + c * b;
                v -= 3 * (v >= 3) as u8;
                v -= 3 * (v >= 3) as u8;
                *a = v;
            }
        } else {
            let p = self.p as u16;
            for (a, &b) in y.iter_mut().zip(x) {
                *a = ((*a as u16 + c as u16 * b as u16) % p) as u8;
            }
        }
    }

    /// `x *= c` entrywise.
    pub fn scale(self, x: &mut [Scalar], c: Scalar) {
        for a in x.iter_mut() {
            *a = self.mul(*a, c);
        }
    }

    pub fn dot(self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let p = self.p as u32;
        let mut acc = 0u32;
        for (&a, &b) in x.iter().zip(y) {
            acc += a as u32 * b as u32;
            if acc >= 1 << 30 {
                acc %= p;
            }
        }
        (acc % p) as u8
    }

    /// Entrywise `x + y`.
    pub fn add_vec(self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        x.iter().zip(y).map(|(&a, &b)| self.add(a, b)).collect()
    }

    /// Entrywise `x - y`.
    pub fn sub_vec(self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        x.iter().zip(y).map(|(&a, &b)| self.sub(a, b)).collect()
    }

    pub fn scaled(self, x: &[Scalar], c: Scalar) -> Vec<Scalar> {
        x.iter().map(|&a| self.mul(a, c)).collect()
    }

    /// Standard basis vector `e_i` of length `n`.
    pub fn unit_vec(self, n: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 257, 1000] {
            assert!(Field::new(p).is_err(), "{p}");
        }
        for p in [3, 5, 7, 251] {
            assert!(Field::new(p).is_ok(), "{p}");
        }
    }

    #[test]
    fn inverses_and_half() {
        for p in [3u32, 5, 7, 13, 251] {
            let f = Field::new(p).unwrap();
            for a in 1..p as u8 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            assert_eq!(f.mul(2, f.inv2()), 1);
        }
        assert_eq!(Field::three().inv2(), 2);
    }

    #[test]
    fn axpy_fast_path_matches_generic_formula() {
        let f = Field::three();
        for c in 0..3u8 {
            for a in 0..3u8 {
                for b in 0..3u8 {
                    let mut y = [a];
                    f.axpy(&mut y, c, &[b]);
                    assert_eq!(y[0], (a + c * b) % 3);
                }
            }
        }
    }

    #[test]
    fn signed_lift() {
        let f = Field::new(7).unwrap();
        assert_eq!(f.to_signed(6), -1);
        assert_eq!(f.to_signed(3), 3);
        assert_eq!(f.from_i64(-1), 6);
    }
}
