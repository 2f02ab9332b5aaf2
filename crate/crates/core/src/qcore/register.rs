use crate::error::{Error, Result};

/// An ordered list of subsystem dimensions.
///
/// Flattening is big-endian: the first register is the most significant
/// index, so a joint basis state `(i_0, ..., i_{r-1})` sits at
/// `((i_0 * d_1 + i_1) * d_2 + i_2) * ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterShape {
    dims: Vec<usize>,
    total: usize,
}

impl RegisterShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::BadShape("no registers".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::BadShape(format!("zero-dimensional register in {dims:?}")));
        }
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        match total {
            Some(total) => Ok(Self { dims, total }),
            None => Err(Error::BadShape(format!("total dimension of {dims:?} overflows"))),
        }
    }

    /// Single register of dimension `dim`.
    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![dim])
    }

    /// `n` qubit registers.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n.max(1)])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Stride of each register in the flattened index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dims.len()];
        for r in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[r] = strides[r + 1] * self.dims[r + 1];
        }
        strides
    }

    pub fn flatten(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dims.len());
        let mut idx = 0;
        for (&m, &d) in multi.iter().zip(&self.dims) {
            debug_assert!(m < d);
            idx = idx * d + m;
        }
        idx
    }

    pub fn unflatten(&self, mut idx: usize) -> Vec<usize> {
        debug_assert!(idx < self.total);
        let mut multi = vec![0usize; self.dims.len()];
        for r in (0..self.dims.len()).rev() {
            multi[r] = idx % self.dims[r];
            idx /= self.dims[r];
        }
        multi
    }

    /// Shape obtained by concatenating the registers of `self` and `other`.
    pub fn concat(&self, other: &RegisterShape) -> Result<RegisterShape> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        RegisterShape::new(dims)
    }

    /// Shape restricted to the given register indices, in the given order.
    pub fn select(&self, regs: &[usize]) -> Result<RegisterShape> {
        self.check_register_set(regs)?;
        RegisterShape::new(regs.iter().map(|&r| self.dims[r]).collect())
    }

    /// Validates that `regs` is a nonempty set of distinct in-range indices.
    pub fn check_register_set(&self, regs: &[usize]) -> Result<()> {
        if regs.is_empty() {
            return Err(Error::BadRegisterSet("empty register set".into()));
        }
        let mut seen = vec![false; self.dims.len()];
        for &r in regs {
            if r >= self.dims.len() {
                return Err(Error::BadRegisterSet(format!(
                    "register {r} out of range for {} registers",
                    self.dims.len()
                )));
            }
            if seen[r] {
                return Err(Error::BadRegisterSet(format!("register {r} repeated")));
            }
            seen[r] = true;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_is_big_endian() {
        let shape = RegisterShape::new(vec![2, 3, 2]).unwrap();
        assert_eq!(shape.total(), 12);
        assert_eq!(shape.flatten(&[1, 0, 0]), 6);
        assert_eq!(shape.flatten(&[0, 2, 1]), 5);
        assert_eq!(shape.unflatten(7), vec![1, 0, 1]);
        assert_eq!(shape.strides(), vec![6, 2, 1]);
    }

    #[test]
    fn roundtrip_all_indices() {
        let shape = RegisterShape::new(vec![3, 2, 5]).unwrap();
        for idx in 0..shape.total() {
            assert_eq!(shape.flatten(&shape.unflatten(idx)), idx);
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(RegisterShape::new(vec![]).is_err());
        assert!(RegisterShape::new(vec![2, 0]).is_err());
        assert!(RegisterShape::new(vec![usize::MAX, 4]).is_err());
    }
}
