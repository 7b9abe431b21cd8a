use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::{BlockSpace, Scalar};

/// Ordered list of equal-shape blocks `V_1, …, V_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockBasis<M> {
    blocks: Vec<M>,
}

impl<M: BlockSpace> BlockBasis<M> {
    pub fn new() -> Self {
        BlockBasis { blocks: Vec::new() }
    }

    /// Wraps existing blocks; all must share a shape.
    pub fn from_blocks(blocks: Vec<M>) -> Result<Self> {
        if let Some(first) = blocks.first() {
            let dims = first.dims();
            if let Some(bad) = blocks.iter().find(|b| b.dims() != dims) {
                return Err(Error::mismatch("BlockBasis", dims, bad.dims()));
            }
        }
        Ok(BlockBasis { blocks })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[M] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &M {
        &self.blocks[i]
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.blocks.first().map(BlockSpace::dims)
    }

    pub(crate) fn push(&mut self, v: M) {
        self.blocks.push(v);
    }

    pub fn truncated(&self, k: usize) -> BlockBasis<M> {
        BlockBasis {
            blocks: self.blocks[..k.min(self.len())].to_vec(),
        }
    }

    /// `max |⟨V_i, V_j⟩ − δ_ij|` over all pairs.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, vi) in self.blocks.iter().enumerate() {
            for (j, vj) in self.blocks.iter().enumerate() {
                let mut g = vi.inner(vj);
                if i == j {
                    g = g - M::Scalar::one();
                }
                worst = worst.max(g.modulus());
            }
        }
        worst
    }
}

impl<M: BlockSpace> Default for BlockBasis<M> {
    fn default() -> Self {
        Self::new()
    }
}

/// `𝒱 * α = Σ V_i α_i`, coefficients on the right.
pub fn star_vec<M: BlockSpace>(basis: &BlockBasis<M>, alpha: &[M::Scalar]) -> Result<M> {
    if alpha.len() != basis.len() {
        return Err(Error::mismatch(
            "star_vec",
            (basis.len(), 1),
            (alpha.len(), 1),
        ));
    }
    let (rows, cols) = basis
        .dims()
        .ok_or_else(|| Error::InvalidArgument("star_vec on an empty basis".into()))?;
    let mut out = M::zeros(rows, cols);
    for (v, &a) in basis.blocks().iter().zip(alpha) {
        out.axpy_right(v, a);
    }
    Ok(out)
}

/// `𝒱 * W`: block `p` of the result is `𝒱 * W[:, p]`.
pub fn star_mat<M: BlockSpace>(basis: &BlockBasis<M>, w: &DMatrix<M::Scalar>) -> Result<Vec<M>> {
    if w.nrows() != basis.len() {
        return Err(Error::mismatch(
            "star_mat",
            (basis.len(), w.ncols()),
            w.shape(),
        ));
    }
    (0..w.ncols())
        .map(|p| {
            let col: Vec<M::Scalar> = w.column(p).iter().copied().collect();
            star_vec(basis, &col)
        })
        .collect()
}

/// `𝒱* ⊠ [Z_1, …, Z_k]`: entry `(p, q)` is `tr(V_p* Z_q) = ⟨Z_q, V_p⟩`.
pub fn boxtimes<M: BlockSpace>(basis: &BlockBasis<M>, images: &[M]) -> Result<DMatrix<M::Scalar>> {
    let k = basis.len();
    if images.len() != k {
        return Err(Error::mismatch("boxtimes", (k, 1), (images.len(), 1)));
    }
    if let (Some(dims), Some(bad)) = (
        basis.dims(),
        images.iter().find(|z| Some(z.dims()) != basis.dims()),
    ) {
        return Err(Error::mismatch("boxtimes", dims, bad.dims()));
    }
    let mut out = DMatrix::from_element(k, k, M::Scalar::zero());
    for (p, vp) in basis.blocks().iter().enumerate() {
        for (q, zq) in images.iter().enumerate() {
            out[(p, q)] = zq.inner(vp);
        }
    }
    Ok(out)
}
