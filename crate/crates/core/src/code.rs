//! Symbolic codes `i_1 i_2 ... i_k` addressing cylinders and cloud points.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// A code over the alphabet `{0, .., m-1}`, outermost map first.
///
/// For a cloud point of generation `g` the code has length `g + 1`: the
/// first `g` symbols name the applied maps and the last names the fixed
/// point they are applied to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Code(Vec<u16>);

impl Code {
    pub fn new(symbols: Vec<u16>) -> Self {
        Code(symbols)
    }

    pub fn symbols(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `i_1`, the first-level cylinder containing the point.
    pub fn first(&self) -> Option<u16> {
        self.0.first().copied()
    }

    /// Shortest code naming the same point: trailing repeats of the last
    /// symbol are dropped, since `f_j` fixes the fixed point of `f_j`.
    pub fn canonical(&self) -> Code {
        Code(canonical_slice(&self.0).to_vec())
    }
}

pub(crate) fn canonical_slice(symbols: &[u16]) -> &[u16] {
    let Some(&last) = symbols.last() else {
        return symbols;
    };
    let mut end = symbols.len();
    while end > 1 && symbols[end - 2] == last {
        end -= 1;
    }
    &symbols[..end]
}

impl From<&[u16]> for Code {
    fn from(s: &[u16]) -> Self {
        Code(s.to_vec())
    }
}

/// Digit string when every symbol is below 10, dot-separated otherwise.
impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.0.iter().all(|&s| s < 10);
        for (i, s) in self.0.iter().enumerate() {
            if !compact && i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseCodeError(pub String);

impl fmt::Display for ParseCodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid code '{}'", self.0)
    }
}

impl core::error::Error for ParseCodeError {}

impl FromStr for Code {
    type Err = ParseCodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseCodeError(s.into());
        if s.is_empty() {
            return Err(err());
        }
        let symbols = if s.contains('.') {
            s.split('.').map(|t| t.parse::<u16>().map_err(|_| err())).collect::<Result<_, _>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as u16).ok_or_else(err)).collect::<Result<_, _>>()?
        };
        Ok(Code(symbols))
    }
}
