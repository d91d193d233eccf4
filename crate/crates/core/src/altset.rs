use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pref::Alt;

/// Set of alternatives as a 64-bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AltSet(pub u64);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);

    pub fn full(m: usize) -> Self {
        if m >= 64 {
            AltSet(u64::MAX)
        } else {
            AltSet((1u64 << m) - 1)
        }
    }

    pub fn single(a: Alt) -> Self {
        AltSet(1u64 << a.0)
    }

    #[inline]
    pub fn contains(self, a: Alt) -> bool {
        self.0 >> a.0 & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, a: Alt) {
        self.0 |= 1u64 << a.0;
    }

    #[inline]
    pub fn remove(&mut self, a: Alt) {
        self.0 &= !(1u64 << a.0);
    }

    pub fn with(self, a: Alt) -> Self {
        AltSet(self.0 | 1u64 << a.0)
    }

    pub fn without(self, a: Alt) -> Self {
        AltSet(self.0 & !(1u64 << a.0))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: AltSet) -> Self {
        AltSet(self.0 | o.0)
    }

    pub fn intersection(self, o: AltSet) -> Self {
        AltSet(self.0 & o.0)
    }

    pub fn difference(self, o: AltSet) -> Self {
        AltSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: AltSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_strict_subset(self, o: AltSet) -> bool {
        self.is_subset(o) && self != o
    }

    /// Lowest-id member.
    pub fn first(self) -> Option<Alt> {
        (self.0 != 0).then(|| Alt(self.0.trailing_zeros() as u8))
    }

    /// Members in increasing id order.
    pub fn iter(self) -> impl Iterator<Item = Alt> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let a = bits.trailing_zeros() as u8;
                bits &= bits - 1;
                Some(Alt(a))
            }
        })
    }
}

impl FromIterator<Alt> for AltSet {
    fn from_iter<I: IntoIterator<Item = Alt>>(iter: I) -> Self {
        let mut s = AltSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Debug for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}
