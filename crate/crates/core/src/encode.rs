//! Bitstring vertex labels and encoding cost.
//!
//! Two conventions are fixed here and used everywhere else:
//! - [`index_to_bits`] is big-endian: the first bit is the most significant.
//! - Qubit `j` is bit position `j` counted from the least-significant end, so
//!   flipping qubit `j` maps index `v` to `v ^ (1 << j)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest label width supported.
pub const MAX_WIDTH: usize = 63;

/// A vertex index together with its label width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitLabel {
    value: u64,
    width: usize,
}

impl BitLabel {
    pub fn new(value: u64, width: usize) -> Result<Self> {
        check_width(width)?;
        if value >= 1u64 << width {
            return Err(Error::IndexOutOfRange {
                index: value as usize,
                bound: 1usize << width,
            });
        }
        Ok(BitLabel { value, width })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Bit of qubit `j` (0 = least significant).
    pub fn qubit(&self, j: usize) -> bool {
        (self.value >> j) & 1 == 1
    }
}

impl std::fmt::Display for BitLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:0width$b}", self.value, width = self.width)
    }
}

fn check_width(width: usize) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        Err(invalid(format!(
            "bit width must be in 1..={MAX_WIDTH}, got {width}"
        )))
    } else {
        Ok(())
    }
}

fn check_vertex(j: usize, width: usize) -> Result<()> {
    check_width(width)?;
    if (j as u64) >> width != 0 {
        Err(Error::IndexOutOfRange {
            index: j,
            bound: 1usize << width,
        })
    } else {
        Ok(())
    }
}

/// Big-endian bits of `j` in `width` positions.
pub fn index_to_bits(j: usize, width: usize) -> Result<Vec<bool>> {
    check_vertex(j, width)?;
    Ok((0..width).rev().map(|b| (j >> b) & 1 == 1).collect())
}

/// Inverse of [`index_to_bits`].
pub fn bits_to_index(bits: &[bool]) -> Result<usize> {
    check_width(bits.len())?;
    Ok(bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize))
}

/// `j` rendered as a `width`-character string of `0`/`1`.
pub fn bitstring(j: usize, width: usize) -> Result<String> {
    Ok(index_to_bits(j, width)?
        .into_iter()
        .map(|b| if b { '1' } else { '0' })
        .collect())
}

/// Parses a `0`/`1` string, most significant bit first.
pub fn parse_bitstring(s: &str) -> Result<usize> {
    let bits = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("invalid bit '{other}'"))),
        })
        .collect::<Result<Vec<_>>>()?;
    bits_to_index(&bits)
}

/// Indices reached by flipping each qubit in turn: `(j ^ 1, j ^ 2, ..., j ^ 2^(n-1))`.
pub fn hamming_neighbors(j: usize, width: usize) -> Result<Vec<usize>> {
    check_vertex(j, width)?;
    Ok((0..width).map(|b| j ^ (1 << b)).collect())
}

/// Cost of writing one of `N` values in unary versus binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingCost {
    pub problem_size: u64,
    pub unary_symbols: u64,
    pub binary_bits: u32,
}

/// Unary needs `N` marks; binary needs `ceil(log2 N)` bits (at least one).
pub fn encoding_cost(problem_size: u64) -> Result<EncodingCost> {
    if problem_size == 0 {
        return Err(invalid("problem size must be at least 1"));
    }
    let binary_bits = if problem_size <= 2 {
        1
    } else {
        u64::BITS - (problem_size - 1).leading_zeros()
    };
    Ok(EncodingCost {
        problem_size,
        unary_symbols: problem_size,
        binary_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_of_small_indices() {
        assert_eq!(bitstring(5, 3).unwrap(), "101");
        assert_eq!(bitstring(0, 3).unwrap(), "000");
        assert_eq!(bitstring(7, 3).unwrap(), "111");
        assert_eq!(index_to_bits(6, 3).unwrap(), vec![true, true, false]);
        assert!(index_to_bits(8, 3).is_err());
        assert!(index_to_bits(0, 0).is_err());
    }

    #[test]
    fn round_trip_up_to_twelve_bits() {
        for j in 0..1usize << 12 {
            assert_eq!(bits_to_index(&index_to_bits(j, 12).unwrap()).unwrap(), j);
        }
        assert_eq!(parse_bitstring("101").unwrap(), 5);
        assert!(parse_bitstring("1x1").is_err());
    }

    #[test]
    fn neighbors_flip_each_qubit() {
        assert_eq!(hamming_neighbors(0, 3).unwrap(), vec![1, 2, 4]);
        assert_eq!(hamming_neighbors(7, 3).unwrap(), vec![6, 5, 3]);
        assert!(hamming_neighbors(8, 3).is_err());
    }

    #[test]
    fn encoding_costs() {
        let c = encoding_cost(8).unwrap();
        assert_eq!((c.unary_symbols, c.binary_bits), (8, 3));
        let c = encoding_cost(2).unwrap();
        assert_eq!((c.unary_symbols, c.binary_bits), (2, 1));
        let c = encoding_cost(1).unwrap();
        assert_eq!((c.unary_symbols, c.binary_bits), (1, 1));
        assert_eq!(encoding_cost(5).unwrap().binary_bits, 3);
        assert!(encoding_cost(0).is_err());
        for n in 1..=30u32 {
            assert_eq!(encoding_cost(1u64 << n).unwrap().binary_bits, n);
        }
    }

    #[test]
    fn bit_label_display_and_qubits() {
        let l = BitLabel::new(5, 4).unwrap();
        assert_eq!(l.to_string(), "0101");
        assert!(l.qubit(0) && !l.qubit(1) && l.qubit(2) && !l.qubit(3));
        assert!(BitLabel::new(16, 4).is_err());
    }
}
