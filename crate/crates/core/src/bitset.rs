//! Small index sets used throughout: vertex sets (arbitrary size) and
//! color sets (at most 128 colors).

/// A set of vertex indices, backed by 64-bit blocks.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    blocks: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        VertexSet {
            blocks: vec![0; n.div_ceil(64)],
            len: 0,
        }
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) -> bool {
        let (b, bit) = (v / 64, 1u64 << (v % 64));
        if b >= self.blocks.len() {
            self.blocks.resize(b + 1, 0);
        }
        if self.blocks[b] & bit == 0 {
            self.blocks[b] |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let (b, bit) = (v / 64, 1u64 << (v % 64));
        if b < self.blocks.len() && self.blocks[b] & bit != 0 {
            self.blocks[b] &= !bit;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        let b = v / 64;
        b < self.blocks.len() && self.blocks[b] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let t = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(i * 64 + t)
                }
            })
        })
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.blocks
            .iter()
            .enumerate()
            .all(|(i, &b)| b & !other.blocks.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .any(|(&a, &b)| a & b != 0)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_iter(iter)
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A set of colors drawn from `1..=128`, packed into a `u128`.
///
/// Color `c` occupies bit `c - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ColorSet(pub u128);

pub const MAX_COLORS: u32 = 128;

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// All colors `1..=k`.
    pub fn full(k: u32) -> Self {
        debug_assert!(k <= MAX_COLORS);
        if k == 0 {
            ColorSet(0)
        } else if k == MAX_COLORS {
            ColorSet(u128::MAX)
        } else {
            ColorSet((1u128 << k) - 1)
        }
    }

    pub fn insert(&mut self, c: u32) {
        debug_assert!((1..=MAX_COLORS).contains(&c));
        self.0 |= 1 << (c - 1);
    }

    pub fn remove(&mut self, c: u32) {
        self.0 &= !(1u128 << (c - 1));
    }

    pub fn contains(self, c: u32) -> bool {
        c >= 1 && c <= MAX_COLORS && self.0 & (1 << (c - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    pub fn difference(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    /// Smallest color in the set, if any.
    pub fn min(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() + 1)
        }
    }

    /// Colors in increasing order.
    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let c = bits.trailing_zeros() + 1;
                bits &= bits - 1;
                Some(c)
            }
        })
    }
}

impl std::fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
