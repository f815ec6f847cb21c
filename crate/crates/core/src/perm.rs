//! Permutations of a dense half-edge index range.
//!
//! Composition is right-to-left everywhere in this crate:
//! `a.compose(&b)` maps `h` to `a(b(h))`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image {image} of {index} is outside 0..{size}")]
    OutOfRange { index: usize, image: usize, size: usize },
    #[error("{image} is the image of both {first} and {second}")]
    NotInjective { image: usize, first: usize, second: usize },
    #[error("{0} appears in more than one cycle")]
    RepeatedInCycle(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(size: usize) -> Self {
        Self { images: (0..size).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let size = images.len();
        let mut preimage = vec![usize::MAX; size];
        for (index, &image) in images.iter().enumerate() {
            if image >= size {
                return Err(PermError::OutOfRange { index, image, size });
            }
            if preimage[image] != usize::MAX {
                return Err(PermError::NotInjective { image, first: preimage[image], second: index });
            }
            preimage[image] = index;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from disjoint cycles; indices not mentioned are fixed.
    pub fn from_cycles(size: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..size).collect();
        let mut seen = vec![false; size];
        for cycle in cycles {
            for (pos, &h) in cycle.iter().enumerate() {
                if h >= size {
                    return Err(PermError::OutOfRange { index: h, image: h, size });
                }
                if seen[h] {
                    return Err(PermError::RepeatedInCycle(h));
                }
                seen[h] = true;
                images[h] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, h: usize) -> usize {
        self.images[h]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.size()];
        for (h, &image) in self.images.iter().enumerate() {
            images[image] = h;
        }
        Self { images }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.size(), other.size(), "composing permutations of different sizes");
        Self { images: other.images.iter().map(|&h| self.images[h]).collect() }
    }

    pub fn is_involution_without_fixed_points(&self) -> bool {
        self.images.iter().enumerate().all(|(h, &image)| image != h && self.images[image] == h)
    }

    /// Cycles ordered by their least element, each starting at that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size()];
        let mut cycles = Vec::new();
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                cycle.push(h);
                h = self.images[h];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// For every index, the position of its cycle in [`Permutation::cycles`].
    pub fn cycle_index(&self) -> Vec<usize> {
        let mut index = vec![0; self.size()];
        for (i, cycle) in self.cycles().iter().enumerate() {
            for &h in cycle {
                index[h] = i;
            }
        }
        index
    }

    /// Conjugates by a relabeling: the result maps `relabel(h)` to `relabel(self(h))`.
    pub fn relabeled(&self, relabel: &[usize]) -> Self {
        let mut images = vec![0; self.size()];
        for (h, &image) in self.images.iter().enumerate() {
            images[relabel[h]] = relabel[image];
        }
        Self { images }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (i, h) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{h}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
