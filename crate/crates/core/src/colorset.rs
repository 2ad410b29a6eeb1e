use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A color is a small nonnegative integer.
pub type Color = u8;

/// Largest color index representable in a [`ColorSet`].
pub const MAX_COLOR: Color = 63;

/// A finite set of colors in `0..=63`, stored as a 64-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ColorSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(c: Color) -> Self {
        debug_assert!(c <= MAX_COLOR);
        ColorSet(1u64 << c)
    }

    /// `{lo, lo+1, ..., hi-1}`.
    pub fn range(lo: Color, hi: Color) -> Self {
        (lo..hi).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, c: Color) -> bool {
        c <= MAX_COLOR && self.0 & (1u64 << c) != 0
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= 1u64 << c;
    }

    pub fn remove(&mut self, c: Color) {
        self.0 &= !(1u64 << c);
    }

    pub fn without(self, c: Color) -> Self {
        ColorSet(self.0 & !(1u64 << c))
    }

    pub fn union(self, other: ColorSet) -> Self {
        ColorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ColorSet) -> Self {
        ColorSet(self.0 & other.0)
    }

    pub fn difference(self, other: ColorSet) -> Self {
        ColorSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn min(self) -> Option<Color> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as Color)
        }
    }

    pub fn iter(self) -> ColorIter {
        ColorIter(self.0)
    }
}

pub struct ColorIter(u64);

impl Iterator for ColorIter {
    type Item = Color;

    fn next(&mut self) -> Option<Color> {
        if self.0 == 0 {
            return None;
        }
        let c = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(c as Color)
    }
}

impl IntoIterator for ColorSet {
    type Item = Color;
    type IntoIter = ColorIter;

    fn into_iter(self) -> ColorIter {
        self.iter()
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut s = ColorSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for ColorSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ColorSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<u8> = Vec::deserialize(d)?;
        if let Some(bad) = v.iter().find(|&&c| c > MAX_COLOR) {
            return Err(serde::de::Error::custom(format!("color {bad} out of range 0..=63")));
        }
        Ok(v.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: ColorSet = [1, 2, 3].into_iter().collect();
        let b = ColorSet::range(2, 6);
        assert_eq!(a.len(), 3);
        assert_eq!(a.intersection(b).iter().collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(a.difference(b), ColorSet::singleton(1));
        assert!(ColorSet::singleton(63).contains(63));
        assert_eq!(a.min(), Some(1));
        assert_eq!(ColorSet::EMPTY.min(), None);
        assert_eq!(format!("{a}"), "{1,2,3}");
    }

    #[test]
    fn serde_roundtrip() {
        let a: ColorSet = [0, 5, 63].into_iter().collect();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[0,5,63]");
        let back: ColorSet = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
        assert!(serde_json::from_str::<ColorSet>("[64]").is_err());
    }
}
