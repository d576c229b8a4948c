//! Radius-3 rule tables and their 32-digit hexadecimal form.
//!
//! A rule maps each 7-cell neighborhood to an output bit. The neighborhood
//! of cell `x` is read left to right, `x-3 .. x+3`, as a 7-bit integer whose
//! most significant bit is the leftmost cell.
//!
//! In hex form every digit expands to four bits, most significant first, and
//! the concatenated 128-bit string gives the outputs in neighborhood order:
//! its leftmost bit is the output for neighborhood 0.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, LineError, Result};

/// Cells on each side of the center that a rule reads.
pub const RADIUS: usize = 3;
/// Cells in a neighborhood.
pub const NEIGHBORHOOD: usize = 2 * RADIUS + 1;
/// Entries in a rule table.
pub const TABLE_SIZE: usize = 1 << NEIGHBORHOOD;
/// Digits in the hex form of a rule.
pub const HEX_DIGITS: usize = TABLE_SIZE / 4;

/// Output bits for all 128 neighborhoods; bit `n` of the word is the output
/// for neighborhood `n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RuleTable(u128);

impl RuleTable {
    pub const ZERO: RuleTable = RuleTable(0);
    pub const ONES: RuleTable = RuleTable(u128::MAX);

    pub const fn from_bits(bits: u128) -> Self {
        RuleTable(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// Rule whose output is the current value of the center cell.
    pub fn center_projection() -> Self {
        RuleTable::from_fn(|n| n & (1 << RADIUS) != 0)
    }

    pub fn from_fn(mut f: impl FnMut(usize) -> bool) -> Self {
        let mut bits = 0u128;
        for n in 0..TABLE_SIZE {
            if f(n) {
                bits |= 1 << n;
            }
        }
        RuleTable(bits)
    }

    #[inline]
    pub fn output(self, neighborhood: usize) -> bool {
        debug_assert!(neighborhood < TABLE_SIZE);
        (self.0 >> neighborhood) & 1 == 1
    }

    pub fn with_flipped(self, neighborhood: usize) -> Self {
        RuleTable(self.0 ^ (1 << neighborhood))
    }

    pub fn hamming(self, other: RuleTable) -> u32 {
        (self.0 ^ other.0).count_ones()
    }

    pub fn parse_hex(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        for (position, &c) in chars.iter().enumerate().take(HEX_DIGITS) {
            if !c.is_ascii_hexdigit() {
                return Err(Error::HexDigit { position, found: c });
            }
        }
        if chars.len() != HEX_DIGITS {
            return Err(Error::HexLength {
                len: chars.len(),
                position: chars.len().min(HEX_DIGITS),
            });
        }
        let mut bits = 0u128;
        for (digit_index, c) in chars.iter().enumerate() {
            let digit = c.to_digit(16).expect("checked above");
            for b in 0..4 {
                if (digit >> (3 - b)) & 1 == 1 {
                    bits |= 1 << (4 * digit_index + b);
                }
            }
        }
        Ok(RuleTable(bits))
    }

    pub fn to_hex(self) -> String {
        let mut out = String::with_capacity(HEX_DIGITS);
        for digit_index in 0..HEX_DIGITS {
            let mut digit = 0u32;
            for b in 0..4 {
                if self.output(4 * digit_index + b) {
                    digit |= 1 << (3 - b);
                }
            }
            out.push(char::from_digit(digit, 16).unwrap().to_ascii_uppercase());
        }
        out
    }
}

impl fmt::Display for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RuleTable({})", self.to_hex())
    }
}

impl FromStr for RuleTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleTable::parse_hex(s)
    }
}

/// Parses a rule-list file: one hex rule per line, blank lines and `#`
/// comments skipped. Every bad line is reported, not just the first.
pub fn parse_rule_list(text: &str) -> Result<Vec<RuleTable>> {
    let mut rules = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match RuleTable::parse_hex(line) {
            Ok(rule) => rules.push(rule),
            Err(e) => errors.push(LineError {
                line: i + 1,
                message: e.to_string(),
            }),
        }
    }
    if errors.is_empty() {
        Ok(rules)
    } else {
        Err(Error::RuleList(errors))
    }
}

pub fn format_rule_list<'a>(rules: impl IntoIterator<Item = &'a RuleTable>) -> String {
    let mut out = String::new();
    for rule in rules {
        out.push_str(&rule.to_hex());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const DAS: &str = "000F730F001FFF0F000FFF0F001FFF1F";

    #[test]
    fn zero_and_ones() {
        let zero = RuleTable::parse_hex("00000000000000000000000000000000").unwrap();
        assert_eq!(zero, RuleTable::ZERO);
        assert!((0..TABLE_SIZE).all(|n| !zero.output(n)));
        assert_eq!(RuleTable::ZERO.to_hex(), "0".repeat(32));
        assert_eq!(RuleTable::ONES.to_hex(), "F".repeat(32));
    }

    #[test]
    fn leftmost_bit_is_neighborhood_zero() {
        let r = RuleTable::parse_hex("80000000000000000000000000000000").unwrap();
        assert!(r.output(0));
        assert_eq!(r.bits().count_ones(), 1);
        let r = RuleTable::parse_hex("00000000000000000000000000000001").unwrap();
        assert!(r.output(127));
        assert_eq!(r.bits().count_ones(), 1);
    }

    #[test]
    fn das_round_trip() {
        let r = RuleTable::parse_hex(DAS).unwrap();
        assert_eq!(r.to_hex(), DAS);
        let lower = DAS.to_ascii_lowercase();
        assert_eq!(RuleTable::parse_hex(&lower).unwrap().to_hex(), DAS);
    }

    #[test]
    fn das_maps_quiescent_states_to_themselves() {
        let r = RuleTable::parse_hex(DAS).unwrap();
        assert!(!r.output(0));
        assert!(r.output(127));
    }

    #[test]
    fn errors_name_position() {
        match RuleTable::parse_hex("000F730F001FFF0F000FFF0F001FFF1") {
            Err(Error::HexLength { len: 31, position: 31 }) => {}
            other => panic!("{other:?}"),
        }
        match RuleTable::parse_hex("000F730F001FFF0F000FFF0F001FFF1F0") {
            Err(Error::HexLength { len: 33, position: 32 }) => {}
            other => panic!("{other:?}"),
        }
        match RuleTable::parse_hex("000F730F0G1FFF0F000FFF0F001FFF1F") {
            Err(Error::HexDigit { position: 9, found: 'G' }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn center_projection_reads_bit_three() {
        let r = RuleTable::center_projection();
        assert!(r.output(0b0001000));
        assert!(!r.output(0b1110111));
    }

    #[test]
    fn rule_list_skips_comments_and_reports_lines() {
        let text = format!("# header\n\n{DAS}\n  \n{}\n", "F".repeat(32));
        let rules = parse_rule_list(&text).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(format_rule_list(&rules), format!("{DAS}\n{}\n", "F".repeat(32)));

        let bad = format!("{DAS}\nxyz\n# ok\n{}\n", "0".repeat(31));
        match parse_rule_list(&bad) {
            Err(Error::RuleList(errs)) => {
                assert_eq!(errs.iter().map(|e| e.line).collect::<Vec<_>>(), vec![2, 4]);
            }
            other => panic!("{other:?}"),
        }
    }
}
