//! Bit-packed binary action profiles.
//!
//! Agent `i` owns bit `i % 64` of word `i / 64`. When a profile is read as an
//! integer (`from_index`, `index`, hex encoding) agent `i` is bit `i`, so
//! agent 0 is the least significant bit.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ActionProfile {
    words: Vec<u64>,
    len: usize,
    ones: usize,
}

impl ActionProfile {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
            ones: 0,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut words = vec![u64::MAX; len.div_ceil(WORD)];
        if !len.is_multiple_of(WORD) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (len % WORD)) - 1;
            }
        }
        Self {
            words,
            len,
            ones: len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut p = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                p.set(i, true);
            }
        }
        p
    }

    /// Profile whose agent `i` plays bit `i` of `index`. Requires `len <= 64`.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= WORD, "from_index supports at most 64 agents");
        let masked = if len == WORD {
            index
        } else {
            index & ((1u64 << len) - 1)
        };
        let words = if len == 0 { Vec::new() } else { vec![masked] };
        Self {
            words,
            len,
            ones: masked.count_ones() as usize,
        }
    }

    /// Integer encoding of the profile, `None` beyond 64 agents.
    pub fn index(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of active agents, `m = ‖a‖₁`.
    #[inline]
    pub fn ones_count(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "agent {i} out of range for {} agents",
            self.len
        );
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if self.get(i) != value {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "agent {i} out of range for {} agents",
            self.len
        );
        let mask = 1u64 << (i % WORD);
        let w = &mut self.words[i / WORD];
        *w ^= mask;
        if *w & mask != 0 {
            self.ones += 1;
        } else {
            self.ones -= 1;
        }
    }

    /// Copy with agent `i`'s action flipped.
    pub fn flipped(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.flip(i);
        p
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn is_all_zeros(&self) -> bool {
        self.ones == 0
    }

    pub fn is_all_ones(&self) -> bool {
        self.ones == self.len
    }

    fn nibble(&self, d: usize) -> u8 {
        let bit = 4 * d;
        let word = self.words[bit / WORD];
        ((word >> (bit % WORD)) & 0xf) as u8
    }

    /// Hex digits of the integer encoding, most significant first, padded to
    /// `ceil(len / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4);
        (0..digits)
            .rev()
            .map(|d| char::from_digit(u32::from(self.nibble(d)), 16).unwrap())
            .collect()
    }

    pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
        let mut p = Self::zeros(len);
        for (d, c) in hex.chars().rev().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidParameter(format!("bad hex digit {c:?}")))?;
            for b in 0..4 {
                if (v >> b) & 1 == 1 {
                    let i = 4 * d + b;
                    if i >= len {
                        return Err(Error::InvalidParameter(format!(
                            "hex profile {hex:?} does not fit in {len} agents"
                        )));
                    }
                    p.set(i, true);
                }
            }
        }
        Ok(p)
    }
}

impl fmt::Display for ActionProfile {
    /// Agent order, agent 0 first: `1100` means agents 0 and 1 are active.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ActionProfile({self})")
    }
}

impl FromStr for ActionProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidParameter(format!(
                    "bad profile character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

impl Serialize for ActionProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ones_masks_tail() {
        let p = ActionProfile::ones(70);
        assert_eq!(p.ones_count(), 70);
        assert!(p.get(69));
        assert_eq!(p.words[1], (1 << 6) - 1);
    }

    #[test]
    fn display_is_agent_order() {
        let p: ActionProfile = "1100".parse().unwrap();
        assert!(p.get(0) && p.get(1) && !p.get(2));
        assert_eq!(p.index(), Some(0b0011));
        assert_eq!(p.to_string(), "1100");
        assert_eq!(p.to_hex(), "3");
    }

    #[test]
    fn hex_rejects_overflowing_digits() {
        assert!(ActionProfile::from_hex(4, "1f").is_err());
        assert!(ActionProfile::from_hex(5, "1f").is_ok());
    }

    proptest! {
        #[test]
        fn flips_keep_popcount(bits in proptest::collection::vec(any::<bool>(), 1..150), picks in proptest::collection::vec(any::<usize>(), 0..40)) {
            let mut p = ActionProfile::from_bools(&bits);
            for i in picks {
                p.flip(i % bits.len());
                let pop: u32 = p.words.iter().map(|w| w.count_ones()).sum();
                prop_assert_eq!(pop as usize, p.ones_count());
            }
        }

        #[test]
        fn hex_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..150)) {
            let p = ActionProfile::from_bools(&bits);
            prop_assert_eq!(ActionProfile::from_hex(bits.len(), &p.to_hex()).unwrap(), p);
        }
    }
}
