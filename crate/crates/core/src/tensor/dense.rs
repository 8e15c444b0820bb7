use serde::{Deserialize, Serialize};

use crate::symcore::{simplify, Expr};

use super::TensorError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variance {
    Upper,
    Lower,
}

impl Variance {
    pub fn flipped(self) -> Variance {
        match self {
            Variance::Upper => Variance::Lower,
            Variance::Lower => Variance::Upper,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    None,
    /// Components are equal under exchange of the two slots.
    Symmetric(usize, usize),
    /// Components change sign under exchange of the two slots.
    Antisymmetric(usize, usize),
}

/// Dense tensor over a fixed dimension with per-slot variance.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    dim: usize,
    variance: Vec<Variance>,
    comps: Vec<Expr>,
    symmetry: Symmetry,
}

impl Tensor {
    pub fn zeros(dim: usize, variance: &[Variance]) -> Tensor {
        let len = dim.pow(variance.len() as u32);
        Tensor { dim, variance: variance.to_vec(), comps: vec![Expr::zero(); len], symmetry: Symmetry::None }
    }

    pub fn from_fn(dim: usize, variance: &[Variance], mut f: impl FnMut(&[usize]) -> Expr) -> Tensor {
        let mut t = Tensor::zeros(dim, variance);
        let mut idx = vec![0; variance.len()];
        for flat in 0..t.comps.len() {
            t.unflatten(flat, &mut idx);
            t.comps[flat] = f(&idx);
        }
        t
    }

    /// Rank-2 tensor built from the upper triangle and mirrored, so the
    /// symmetry holds node for node.
    pub fn symmetric2(dim: usize, variance: [Variance; 2], mut f: impl FnMut(usize, usize) -> Expr) -> Tensor {
        let mut t = Tensor::zeros(dim, &variance);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                t.comps[i * dim + j] = v.clone();
                t.comps[j * dim + i] = v;
            }
        }
        t.symmetry = Symmetry::Symmetric(0, 1);
        t
    }

    /// Rank-2 antisymmetric tensor built from the strict upper triangle.
    pub fn antisymmetric2(dim: usize, variance: [Variance; 2], mut f: impl FnMut(usize, usize) -> Expr) -> Tensor {
        let mut t = Tensor::zeros(dim, &variance);
        for i in 0..dim {
            for j in i + 1..dim {
                let v = f(i, j);
                t.comps[j * dim + i] = -&v;
                t.comps[i * dim + j] = v;
            }
        }
        t.symmetry = Symmetry::Antisymmetric(0, 1);
        t
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Tensor {
        self.symmetry = symmetry;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn components(&self) -> &[Expr] {
        &self.comps
    }

    fn flatten(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank(), "index arity");
        idx.iter().fold(0, |acc, &i| {
            assert!(i < self.dim, "index {i} out of range");
            acc * self.dim + i
        })
    }

    fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.dim;
            flat /= self.dim;
        }
    }

    pub fn get(&self, idx: &[usize]) -> &Expr {
        &self.comps[self.flatten(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Expr) {
        let k = self.flatten(idx);
        self.comps[k] = value;
    }

    /// Apply `f` to every component, keeping shape and symmetry.
    pub fn map(&self, f: impl Fn(&Expr) -> Expr + Sync + Send) -> Tensor {
        use rayon::prelude::*;
        Tensor {
            dim: self.dim,
            variance: self.variance.clone(),
            comps: self.comps.par_iter().map(f).collect(),
            symmetry: self.symmetry,
        }
    }

    pub fn simplified(&self) -> Tensor {
        self.map(simplify)
    }

    pub fn scale(&self, s: &Expr) -> Tensor {
        self.map(|c| s * c)
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        if self.dim != other.dim || self.variance != other.variance {
            return Err(TensorError::ShapeMismatch);
        }
        let symmetry = if self.symmetry == other.symmetry { self.symmetry } else { Symmetry::None };
        Ok(Tensor {
            dim: self.dim,
            variance: self.variance.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
            symmetry,
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        self.add(&other.scale(&Expr::int(-1)))
    }

    /// All multi-indices in row-major order.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.comps.len());
        let mut idx = vec![0; self.rank()];
        for flat in 0..self.comps.len() {
            self.unflatten(flat, &mut idx);
            out.push(idx.clone());
        }
        out
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_builder_mirrors() {
        let t = Tensor::symmetric2(3, [Variance::Lower; 2], |i, j| Expr::int((10 * i + j) as i64));
        assert_eq!(t.get(&[2, 0]), t.get(&[0, 2]));
        assert_eq!(t.get(&[0, 2]), &Expr::int(2));
    }

    #[test]
    fn antisymmetric_builder_has_zero_diagonal() {
        let t = Tensor::antisymmetric2(4, [Variance::Lower; 2], |i, j| Expr::int((i + j) as i64));
        assert!(t.get(&[1, 1]).is_zero());
        assert_eq!(t.get(&[3, 1]), &Expr::int(-4));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = Tensor::zeros(6, &[Variance::Lower]);
        let b = Tensor::zeros(6, &[Variance::Upper]);
        assert_eq!(a.add(&b), Err(TensorError::ShapeMismatch));
    }
}
