//! Fixed-width bit words indexing computational basis states.
//!
//! Convention: qubit 1 is the most significant bit, so the string `"0101"`
//! reads left-to-right as qubits 1..m.

use std::fmt;

use crate::Error;

pub const MAX_QUBITS: u8 = 16;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString {
    bits: u16,
    m: u8,
}

impl BitString {
    pub fn new(bits: u16, m: u8) -> Result<Self, Error> {
        if m == 0 || m > MAX_QUBITS {
            return Err(Error::QubitCount(m));
        }
        if m < 16 && bits >= 1 << m {
            return Err(Error::BitsOutOfRange { bits, m });
        }
        Ok(BitString { bits, m })
    }

    /// All-zero word on `m` qubits.
    pub fn zeros(m: u8) -> Self {
        BitString::new(0, m).expect("valid qubit count")
    }

    pub fn ones(m: u8) -> Self {
        let bits = if m >= 16 { u16::MAX } else { (1u16 << m) - 1 };
        BitString { bits, m }
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn weight(&self) -> u8 {
        self.bits.count_ones() as u8
    }

    /// Bit of qubit `j` (1-based, qubit 1 = MSB).
    pub fn get(&self, j: u8) -> bool {
        debug_assert!(j >= 1 && j <= self.m);
        (self.bits >> (self.m - j)) & 1 == 1
    }

    pub fn with_bit(&self, j: u8, value: bool) -> Self {
        debug_assert!(j >= 1 && j <= self.m);
        let mask = 1u16 << (self.m - j);
        let bits = if value {
            self.bits | mask
        } else {
            self.bits & !mask
        };
        BitString { bits, m: self.m }
    }

    /// 1-based qubit positions of set bits, ascending.
    pub fn support(&self) -> Vec<u8> {
        (1..=self.m).filter(|&j| self.get(j)).collect()
    }

    /// Word with support `s` (1-based positions).
    pub fn indicator(s: &[u8], m: u8) -> Result<Self, Error> {
        let mut b = BitString::zeros(m);
        for &j in s {
            if j < 1 || j > m {
                return Err(Error::IndexOutOfRange { index: j, m });
            }
            b = b.with_bit(j, true);
        }
        Ok(b)
    }

    pub fn complement(&self) -> Self {
        BitString {
            bits: !self.bits & BitString::ones(self.m).bits,
            m: self.m,
        }
    }

    pub fn and(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        BitString {
            bits: self.bits & other.bits,
            m: self.m,
        }
    }

    pub fn or(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        BitString {
            bits: self.bits | other.bits,
            m: self.m,
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        BitString {
            bits: self.bits ^ other.bits,
            m: self.m,
        }
    }

    /// supp(self) ⊆ supp(other).
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn parse(s: &str, m: u8) -> Result<Self, Error> {
        if s.len() != m as usize {
            return Err(Error::BitStringParse(s.to_string()));
        }
        let mut bits = 0u16;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(Error::BitStringParse(s.to_string())),
            }
        }
        BitString::new(bits, m)
    }

    /// All 2^m words in lexicographic order.
    pub fn all(m: u8) -> impl Iterator<Item = BitString> {
        (0..(1u32 << m)).map(move |b| BitString {
            bits: b as u16,
            m,
        })
    }

    /// All words of Hamming weight `l` in lexicographic order.
    pub fn all_of_weight(m: u8, l: u8) -> impl Iterator<Item = BitString> {
        BitString::all(m).filter(move |b| b.weight() == l)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.m {
            write!(f, "{}", if self.get(j) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
