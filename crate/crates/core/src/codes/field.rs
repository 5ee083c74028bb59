//! GF(2^m) arithmetic with log/antilog tables.

use crate::error::{Error, Result};

/// Binary extension field GF(2^m), `2 <= m <= 10`, with a fixed primitive modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF2mField {
    m: usize,
    modulus: u32,
    log: Vec<u32>,
    antilog: Vec<u32>,
}

/// Primitive polynomial per degree, bit `i` is the coefficient of `x^i`.
fn primitive_modulus(m: usize) -> Option<u32> {
    Some(match m {
        2 => 0b111,
        3 => 0b1011,
        4 => 0b1_0011,
        5 => 0b10_0101,
        6 => 0b100_0011,
        7 => 0b1000_0011,
        8 => 0x11D,
        9 => 0x211,
        10 => 0x409,
        _ => return None,
    })
}

impl GF2mField {
    pub fn new(m: usize) -> Result<Self> {
        let modulus = primitive_modulus(m)
            .ok_or_else(|| Error::Validation(format!("extension degree {m} outside 2..=10")))?;
        let q = 1usize << m;
        let mut antilog = vec![0u32; q - 1];
        let mut log = vec![0u32; q];
        let mut x = 1u32;
        for (i, slot) in antilog.iter_mut().enumerate() {
            if i > 0 && x == 1 {
                return Err(Error::Internal(format!("modulus {modulus:#x} is not primitive")));
            }
            *slot = x;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= modulus;
            }
        }
        debug_assert_eq!(x, 1);
        Ok(GF2mField { m, modulus, log, antilog })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Field size `2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Multiplicative group order `2^m - 1`.
    pub fn order(&self) -> usize {
        self.size() - 1
    }

    /// `α^e`.
    pub fn exp(&self, e: usize) -> u32 {
        self.antilog[e % self.order()]
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: u32) -> usize {
        debug_assert_ne!(x, 0);
        self.log[x as usize] as usize
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp(self.log(a) + self.log(b))
    }

    /// Cyclotomic coset of `i` modulo `2^m - 1` under doubling.
    pub fn cyclotomic_coset(&self, i: usize) -> Vec<usize> {
        let n = self.order();
        let mut coset = vec![i % n];
        let mut j = (2 * i) % n;
        while j != i % n {
            coset.push(j);
            j = (2 * j) % n;
        }
        coset
    }

    /// Minimal polynomial of `α^i` over GF(2); entry `d` is the coefficient of `x^d`.
    pub fn minimal_polynomial(&self, i: usize) -> Vec<u8> {
        // product of (x + α^j) over the coset, computed in GF(2^m)[x]
        let mut poly: Vec<u32> = vec![1];
        for j in self.cyclotomic_coset(i) {
            let root = self.exp(j);
            let mut next = vec![0u32; poly.len() + 1];
            for (d, &c) in poly.iter().enumerate() {
                next[d + 1] ^= c;
                next[d] ^= self.mul(c, root);
            }
            poly = next;
        }
        poly.into_iter()
            .map(|c| {
                debug_assert!(c <= 1, "minimal polynomial has a coefficient outside GF(2)");
                c as u8
            })
            .collect()
    }
}
