//! Expected bit-error counts from the cumulative BER sources and seeded
//! bit-flip injection on word arrays, with optional MSB/LSB dual-bank BERs.
//!
//! Each bit flips independently with its bank's cumulative BER. The decision
//! for a bit is a pure function of `(seed, word index, bit index)` via a
//! counter-based mixer, so results are identical no matter how the array is
//! traversed or partitioned across workers.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Per-bit error probabilities of the three sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BerTriple {
    /// Retention-failure probability per bit.
    pub ber_rf: f64,
    /// Read-disturb probability per bit.
    pub ber_rd: f64,
    /// Write-error probability per bit.
    pub ber_we: f64,
}

impl Default for BerTriple {
    fn default() -> Self {
        BerTriple { ber_rf: 1e-9, ber_rd: 1e-9, ber_we: 1e-9 }
    }
}

impl BerTriple {
    pub fn uniform(p: f64) -> Self {
        BerTriple { ber_rf: p, ber_rd: p, ber_we: p }
    }

    /// Worst-case cumulative BER: the sum of the three sources. At rates of
    /// 1e-5 and below the difference from the exact union is below 1e-9
    /// relative.
    pub fn cumulative(&self) -> f64 {
        self.ber_rf + self.ber_rd + self.ber_we
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("ber_rf", self.ber_rf), ("ber_rd", self.ber_rd), ("ber_we", self.ber_we)]
        {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::Domain(format!("{name} must lie in [0,1), got {p}")));
            }
        }
        if self.cumulative() >= 1.0 {
            return Err(Error::Domain("cumulative BER must stay below 1".to_string()));
        }
        Ok(())
    }
}

/// Separate BER triples for the significant (MSB) and relaxed (LSB) halves
/// of each word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BankSplit {
    pub msb_bank: BerTriple,
    pub lsb_bank: BerTriple,
    /// First bit index belonging to the MSB bank; must equal half the word
    /// width of the injected array.
    pub split_bit: u32,
}

/// Error-rate profile of a memory, single-bank or dual-bank.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BerProfile {
    pub ber_rf: f64,
    pub ber_rd: f64,
    pub ber_we: f64,
    pub bank_split: Option<BankSplit>,
}

impl BerProfile {
    pub fn single(triple: BerTriple) -> Self {
        BerProfile {
            ber_rf: triple.ber_rf,
            ber_rd: triple.ber_rd,
            ber_we: triple.ber_we,
            bank_split: None,
        }
    }

    /// Dual-bank profile with a robust MSB bank and a relaxed LSB bank.
    pub fn dual(msb: BerTriple, lsb: BerTriple, word_width: u32) -> Self {
        BerProfile {
            ber_rf: msb.ber_rf,
            ber_rd: msb.ber_rd,
            ber_we: msb.ber_we,
            bank_split: Some(BankSplit { msb_bank: msb, lsb_bank: lsb, split_bit: word_width / 2 }),
        }
    }

    pub fn base(&self) -> BerTriple {
        BerTriple { ber_rf: self.ber_rf, ber_rd: self.ber_rd, ber_we: self.ber_we }
    }

    pub fn validate(&self) -> Result<()> {
        self.base().validate()?;
        if let Some(split) = &self.bank_split {
            split.msb_bank.validate()?;
            split.lsb_bank.validate()?;
        }
        Ok(())
    }
}

/// Masks selecting the upper and lower half of a word.
pub fn split_masks(word_width: u32) -> Result<(u64, u64)> {
    match word_width {
        8 => Ok((0xF0, 0x0F)),
        16 => Ok((0xFF00, 0x00FF)),
        other => Err(Error::Validation(format!(
            "unsupported word width {other}, expected 8 or 16"
        ))),
    }
}

/// Expected number of flipped bits over `n_bits` stored bits. With a bank
/// split, half the bits see each bank's cumulative BER.
pub fn expected_flips(n_bits: u64, profile: &BerProfile) -> f64 {
    match &profile.bank_split {
        None => n_bits as f64 * profile.base().cumulative(),
        Some(split) => {
            let half = n_bits as f64 / 2.0;
            half * split.msb_bank.cumulative() + half * split.lsb_bank.cumulative()
        }
    }
}

/// A word array of one of the supported widths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Words {
    W8(Vec<u8>),
    W16(Vec<u16>),
}

impl Words {
    pub fn word_width(&self) -> u32 {
        match self {
            Words::W8(_) => 8,
            Words::W16(_) => 16,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Words::W8(v) => v.len(),
            Words::W16(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Interpret little-endian bytes as a word array of the given width.
    pub fn from_le_bytes(word_width: u32, bytes: &[u8]) -> Result<Self> {
        match word_width {
            8 => Ok(Words::W8(bytes.to_vec())),
            16 => {
                if bytes.len() % 2 != 0 {
                    return Err(Error::Validation(
                        "16-bit word array needs an even byte count".to_string(),
                    ));
                }
                Ok(Words::W16(
                    bytes.chunks_exact(2).map(|c| u16::from_le_bytes([c[0], c[1]])).collect(),
                ))
            }
            other => Err(Error::Validation(format!(
                "unsupported word width {other}, expected 8 or 16"
            ))),
        }
    }

    pub fn to_le_bytes(&self) -> Vec<u8> {
        match self {
            Words::W8(v) => v.clone(),
            Words::W16(v) => v.iter().flat_map(|w| w.to_le_bytes()).collect(),
        }
    }
}

/// Position of a flipped bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlipPosition {
    pub word: u64,
    pub bit: u32,
}

/// Outcome of an injection run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectStats {
    pub seed: u64,
    pub word_width: u32,
    pub words: u64,
    pub total_flips: u64,
    /// Flips landing in the upper half of words.
    pub msb_flips: u64,
    /// Flips landing in the lower half of words.
    pub lsb_flips: u64,
    pub positions: Vec<FlipPosition>,
}

// splitmix64 finalizer; full avalanche on 64 bits.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Map a probability to a 64-bit comparison threshold: a uniform draw `u`
/// flips the bit iff `u < threshold`.
#[inline]
fn threshold(p: f64) -> u64 {
    if p <= 0.0 {
        0
    } else if p >= 1.0 {
        u64::MAX
    } else {
        (p * 1.844_674_407_370_955_2e19) as u64 // p * 2^64, saturating cast
    }
}

/// Flip bits in place. Each bit flips with its bank's cumulative BER; the
/// draw depends only on `(seed, word index, bit index)`.
pub fn inject(words: &mut Words, profile: &BerProfile, seed: u64) -> Result<InjectStats> {
    profile.validate()?;
    if words.is_empty() {
        return Err(Error::Validation("word array must be non-empty".to_string()));
    }
    let width = words.word_width();
    let (msb_mask, _) = split_masks(width)?;
    let (msb_threshold, lsb_threshold) = match &profile.bank_split {
        None => {
            let t = threshold(profile.base().cumulative());
            (t, t)
        }
        Some(split) => {
            if split.split_bit != width / 2 {
                return Err(Error::Validation(format!(
                    "split_bit {} must equal half the word width ({})",
                    split.split_bit,
                    width / 2
                )));
            }
            (
                threshold(split.msb_bank.cumulative()),
                threshold(split.lsb_bank.cumulative()),
            )
        }
    };
    let split_bit = width / 2;
    let seed_h = mix64(seed ^ 0x9E37_79B9_7F4A_7C15);
    let mut stats = InjectStats {
        seed,
        word_width: width,
        words: words.len() as u64,
        total_flips: 0,
        msb_flips: 0,
        lsb_flips: 0,
        positions: Vec::new(),
    };
    let mut flip_word = |word_idx: u64, word: &mut u64| {
        let word_h = mix64(seed_h ^ word_idx);
        for bit in 0..width {
            let gate = if bit >= split_bit { msb_threshold } else { lsb_threshold };
            if gate == 0 {
                continue;
            }
            if mix64(word_h ^ bit as u64) < gate {
                *word ^= 1u64 << bit;
                stats.total_flips += 1;
                if (1u64 << bit) & msb_mask != 0 {
                    stats.msb_flips += 1;
                } else {
                    stats.lsb_flips += 1;
                }
                stats.positions.push(FlipPosition { word: word_idx, bit });
            }
        }
    };
    match words {
        Words::W8(v) => {
            for (i, w) in v.iter_mut().enumerate() {
                let mut bits = *w as u64;
                flip_word(i as u64, &mut bits);
                *w = bits as u8;
            }
        }
        Words::W16(v) => {
            for (i, w) in v.iter_mut().enumerate() {
                let mut bits = *w as u64;
                flip_word(i as u64, &mut bits);
                *w = bits as u16;
            }
        }
    }
    Ok(stats)
}
