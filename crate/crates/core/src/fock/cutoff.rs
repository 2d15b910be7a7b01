/// Single-mode truncation: the basis is `|0⟩ … |n_max⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockCutoff {
    n_max: usize,
}

impl FockCutoff {
    pub const fn new(n_max: usize) -> Self {
        Self { n_max }
    }

    pub const fn n_max(self) -> usize {
        self.n_max
    }

    /// Single-mode dimension, `n_max + 1`.
    pub const fn dim(self) -> usize {
        self.n_max + 1
    }

    /// Dimension of the square two-mode space, `(n_max + 1)²`.
    pub const fn two_mode_dim(self) -> usize {
        self.dim() * self.dim()
    }

    pub const fn raised(self, by: usize) -> Self {
        Self::new(self.n_max + by)
    }
}

/// Truncation of a two-mode space, one cutoff per mode.
///
/// Basis states are indexed row-major over the first mode:
/// `index = n_first · (n_max_second + 1) + n_second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoModeCutoff {
    pub first: FockCutoff,
    pub second: FockCutoff,
}

impl TwoModeCutoff {
    pub const fn new(first: FockCutoff, second: FockCutoff) -> Self {
        Self { first, second }
    }

    pub const fn square(n_max: usize) -> Self {
        Self::new(FockCutoff::new(n_max), FockCutoff::new(n_max))
    }

    pub const fn is_square(self) -> bool {
        self.first.n_max == self.second.n_max
    }

    pub const fn dim(self) -> usize {
        self.first.dim() * self.second.dim()
    }

    #[inline]
    pub const fn index(self, n_first: usize, n_second: usize) -> usize {
        n_first * self.second.dim() + n_second
    }

    #[inline]
    pub const fn occupations(self, index: usize) -> (usize, usize) {
        (index / self.second.dim(), index % self.second.dim())
    }

    /// Iterates `(index, n_first, n_second)` over the whole basis.
    pub fn basis(self) -> impl Iterator<Item = (usize, usize, usize)> {
        (0..self.dim()).map(move |i| {
            let (n, m) = self.occupations(i);
            (i, n, m)
        })
    }
}

impl From<FockCutoff> for TwoModeCutoff {
    fn from(c: FockCutoff) -> Self {
        Self::new(c, c)
    }
}
