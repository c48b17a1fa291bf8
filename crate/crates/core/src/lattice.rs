//! Periodic hypercubic qubit lattices.
//!
//! Sites are flattened row-major: the coordinate `(c_0, …, c_{d-1})` maps to
//! `Σ c_a · M^{d-1-a}`. Distances are graph distances with nearest-neighbor
//! edges along each axis, i.e. the sum of the wrapped 1D distances.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeGeometry {
    pub dimension: usize,
    pub linear_size: usize,
}

impl LatticeGeometry {
    pub fn new(dimension: usize, linear_size: usize) -> Result<Self> {
        if dimension == 0 || linear_size == 0 {
            return arg("lattice dimension and linear size must be positive");
        }
        if linear_size.checked_pow(dimension as u32).is_none_or(|n| n > 1 << 30) {
            return arg("lattice too large");
        }
        Ok(Self {
            dimension,
            linear_size,
        })
    }

    /// A ring of `n` sites.
    pub fn chain(n: usize) -> Self {
        Self::new(1, n).expect("chain length must be positive")
    }

    pub fn total_sites(&self) -> usize {
        self.linear_size.pow(self.dimension as u32)
    }

    /// Largest distance between two sites.
    pub fn diameter(&self) -> usize {
        self.dimension * (self.linear_size / 2)
    }

    pub fn coordinates(&self, site: usize) -> Vec<usize> {
        let m = self.linear_size;
        let mut c = vec![0; self.dimension];
        let mut rest = site;
        for a in (0..self.dimension).rev() {
            c[a] = rest % m;
            rest /= m;
        }
        c
    }

    pub fn site(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .fold(0, |acc, &c| acc * self.linear_size + c % self.linear_size)
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.total_sites() {
            return arg(format!(
                "site {i} out of range for {} sites",
                self.total_sites()
            ));
        }
        Ok(())
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.distance_unchecked(i, j))
    }

    pub(crate) fn distance_unchecked(&self, i: usize, j: usize) -> usize {
        let m = self.linear_size;
        let (mut a, mut b) = (i, j);
        let mut d = 0;
        for _ in 0..self.dimension {
            let (x, y) = (a % m, b % m);
            let diff = x.abs_diff(y);
            d += diff.min(m - diff);
            a /= m;
            b /= m;
        }
        d
    }

    /// Number of sites within distance `range` of any fixed site.
    ///
    /// The torus is vertex-transitive, so the ball around site 0 is enumerated.
    pub fn neighborhood_cardinality(&self, range: usize) -> usize {
        if range >= self.diameter() {
            return self.total_sites();
        }
        (0..self.total_sites())
            .filter(|&x| self.distance_unchecked(0, x) <= range)
            .count()
    }

    /// Nearest-neighbor pairs `(i, j)` along `axis` whose coordinate on that
    /// axis has the given parity. The wrap-around bond is included only
    /// when it does not collide with another pair of the same layer.
    pub fn brick_pairs(&self, axis: usize, parity: usize) -> Vec<(usize, usize)> {
        let m = self.linear_size;
        if m < 2 {
            return Vec::new();
        }
        let mut pairs = Vec::new();
        for site in 0..self.total_sites() {
            let mut c = self.coordinates(site);
            let x = c[axis];
            if x % 2 != parity % 2 {
                continue;
            }
            if x + 1 == m && (m % 2 == 1 || m == 2) {
                continue;
            }
            c[axis] = (x + 1) % m;
            pairs.push((site, self.site(&c)));
        }
        pairs
    }
}

/// Range of the brickwork circuit family: one site of spread per layer.
pub fn lightcone_range(depth: usize, _geometry: &LatticeGeometry) -> usize {
    depth
}
