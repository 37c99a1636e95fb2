//! Self-delimiting integer codes and bookkeeping records.
//!
//! `s(n)` is the (n+1)-st binary string in shortlex order: ε, 0, 1, 00, ...
//! A number is written `11 s1 0 s2 0 ... sm 0 11`.

use crate::error::{Error, Result};
use crate::symbol::{Alphabet, Sym};

/// The (n+1)-st string of {0,1}* in shortlex order: binary of n+1 without its leading 1.
pub fn shortlex_bits(n: u64) -> Vec<bool> {
    let v = n + 1;
    let width = 64 - v.leading_zeros();
    (0..width - 1).rev().map(|i| (v >> i) & 1 == 1).collect()
}

pub fn shortlex_index(bits: &[bool]) -> u64 {
    bits.iter().fold(1u64, |acc, &b| acc * 2 + u64::from(b)) - 1
}

pub fn encode_sd(n: u64) -> Vec<bool> {
    let mut out = vec![true, true];
    for b in shortlex_bits(n) {
        out.push(b);
        out.push(false);
    }
    out.extend([true, true]);
    out
}

/// Decodes a prefix of `bits`; returns the number and the bits consumed.
pub fn decode_sd(bits: &[bool]) -> Result<(u64, usize)> {
    let bad = |msg: &str| Error::Precondition(format!("malformed self-delimiting code: {msg}"));
    if bits.len() < 2 || !bits[0] || !bits[1] {
        return Err(bad("missing start marker"));
    }
    let mut s = Vec::new();
    let mut i = 2;
    loop {
        match (bits.get(i), bits.get(i + 1)) {
            (Some(true), Some(true)) => break,
            (Some(&b), Some(false)) => s.push(b),
            (Some(false), Some(true)) => return Err(bad("pair ends in 1")),
            _ => return Err(bad("truncated")),
        }
        i += 2;
        if s.len() > 62 {
            return Err(bad("value too large"));
        }
    }
    Ok((shortlex_index(&s), i + 2))
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn string_to_bits(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}

/// Upper bound on the code length for `n`: `2⌈log2(n+1)⌉ + 4`.
pub fn sd_length_bound(n: u64) -> usize {
    let v = n + 1;
    let ceil_log = if v.is_power_of_two() { v.trailing_zeros() } else { 64 - v.leading_zeros() };
    2 * ceil_log as usize + 4
}

/// Injective code for the noninput symbols Γ − Σ, `k = ⌈log2 |Γ − Σ|⌉` bits each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCode {
    pub symbols: Vec<Sym>,
    pub k: usize,
}

impl GammaCode {
    pub fn new(sigma: &Alphabet, gamma: &Alphabet) -> Self {
        let symbols = gamma.minus(sigma);
        let mut k = 0;
        while (1usize << k) < symbols.len() {
            k += 1;
        }
        GammaCode { symbols, k }
    }

    pub fn encode(&self, g: Sym) -> Vec<bool> {
        let i = self.symbols.iter().position(|&s| s == g).expect("noninput symbol");
        (0..self.k).rev().map(|b| (i >> b) & 1 == 1).collect()
    }

    pub fn decode(&self, bits: &[bool]) -> Option<Sym> {
        let i = bits.iter().fold(0usize, |acc, &b| acc * 2 + usize::from(b));
        self.symbols.get(i).copied()
    }
}

/// One noninput symbol: its identity and signed distance from the head.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Record {
    /// Leftmost record in the bookkeeping area.
    pub f1: bool,
    /// Rightmost record.
    pub f2: bool,
    /// Updated during the current pass.
    pub f3: bool,
    pub gamma: Sym,
    pub distance: i64,
}

impl Record {
    /// Layout `f1 f2 f3 g(γ) σ h(|d|)`; σ = 1 for symbols right of the head.
    pub fn encode(&self, code: &GammaCode) -> Vec<bool> {
        let mut out = vec![self.f1, self.f2, self.f3];
        out.extend(code.encode(self.gamma));
        out.push(self.distance > 0);
        out.extend(encode_sd(self.distance.unsigned_abs()));
        out
    }

    pub fn decode(bits: &[bool], code: &GammaCode) -> Result<(Record, usize)> {
        let head = 4 + code.k;
        if bits.len() < head {
            return Err(Error::Precondition("truncated record".into()));
        }
        let gamma = code
            .decode(&bits[3..3 + code.k])
            .ok_or_else(|| Error::Precondition("record names an unknown symbol".into()))?;
        let (n, used) = decode_sd(&bits[head..])?;
        let distance = if bits[3 + code.k] { n as i64 } else { -(n as i64) };
        Ok((Record { f1: bits[0], f2: bits[1], f3: bits[2], gamma, distance }, head + used))
    }

    pub fn encoded_len(distance: u64, code: &GammaCode) -> usize {
        4 + code.k + 4 + 2 * shortlex_bits(distance).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_codes() {
        assert_eq!(bits_to_string(&encode_sd(0)), "1111");
        assert_eq!(bits_to_string(&encode_sd(1)), "110011");
        assert_eq!(bits_to_string(&encode_sd(2)), "111011");
        assert_eq!(bits_to_string(&encode_sd(3)), "11000011");
    }

    #[test]
    fn shortlex_order() {
        let strs: Vec<String> = (0..7).map(|n| bits_to_string(&shortlex_bits(n))).collect();
        assert_eq!(strs, vec!["", "0", "1", "00", "01", "10", "11"]);
        for n in 0..500 {
            assert_eq!(shortlex_index(&shortlex_bits(n)), n);
        }
    }

    #[test]
    fn decode_ignores_trailing_bits() {
        let mut b = encode_sd(5);
        let len = b.len();
        b.extend(encode_sd(9));
        assert_eq!(decode_sd(&b).unwrap(), (5, len));
        assert!(decode_sd(&string_to_bits("1101")).is_err());
        assert!(decode_sd(&string_to_bits("10")).is_err());
    }

    #[test]
    fn length_bound() {
        assert_eq!(sd_length_bound(0), 4);
        assert_eq!(sd_length_bound(1), 6);
        assert_eq!(sd_length_bound(2), 8);
        assert_eq!(sd_length_bound(3), 8);
        assert_eq!(sd_length_bound(4), 10);
    }

    #[test]
    fn record_round_trip() {
        let code = GammaCode::new(&Alphabet::from_chars("01"), &Alphabet::from_chars("01ABC"));
        assert_eq!(code.k, 2);
        let r = Record { f1: true, f2: false, f3: true, gamma: 'C', distance: -37 };
        let bits = r.encode(&code);
        assert_eq!(bits.len(), Record::encoded_len(37, &code));
        assert_eq!(Record::decode(&bits, &code).unwrap(), (r, bits.len()));
    }

    #[test]
    fn single_noninput_symbol_has_empty_code() {
        let code = GammaCode::new(&Alphabet::from_chars("01"), &Alphabet::from_chars("01A"));
        assert_eq!(code.k, 0);
        assert!(code.encode('A').is_empty());
        assert_eq!(code.decode(&[]), Some('A'));
    }
}
