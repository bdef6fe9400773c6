//! Finite-dimensional von Neumann algebras as direct sums of full matrix
//! blocks, their elements, centers, and faithful normal states.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numerics::{self, herm_eig, Real, Tolerances};
use crate::{CMat, C};

/// A multi-matrix algebra `⊕_i M_{n_i}(C)`, described by its block sizes.
///
/// The center is spanned by the block identities; the algebra is a factor
/// exactly when there is a single block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMatrixAlgebra {
    block_dims: Vec<usize>,
}

impl MultiMatrixAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::validation("algebra needs at least one block"));
        }
        if block_dims.iter().any(|&n| n == 0) {
            return Err(Error::validation("block dimensions must be positive"));
        }
        Ok(MultiMatrixAlgebra { block_dims })
    }

    pub fn factor(n: usize) -> Self {
        MultiMatrixAlgebra::new(vec![n]).expect("positive dimension")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    pub fn block_dim(&self, i: usize) -> usize {
        self.block_dims[i]
    }

    /// Linear dimension `Σ n_i²`.
    pub fn dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    /// Dimension of the defining representation space `⊕ C^{n_i}`.
    pub fn rep_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn is_factor(&self) -> bool {
        self.block_dims.len() == 1
    }

    pub fn identity<R: Real>(&self) -> AlgebraElement<R> {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.block_dims.iter().map(|&n| numerics::eye(n)).collect(),
        }
    }

    pub fn zero<R: Real>(&self) -> AlgebraElement<R> {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self
                .block_dims
                .iter()
                .map(|&n| CMat::<R>::zeros(n, n))
                .collect(),
        }
    }

    /// Element supported on a single block.
    pub fn embed_block<R: Real>(&self, i: usize, m: CMat<R>) -> Result<AlgebraElement<R>> {
        if i >= self.num_blocks() || m.nrows() != self.block_dims[i] || !m.is_square() {
            return Err(Error::validation("embed_block: shape mismatch"));
        }
        let mut e = self.zero();
        e.blocks[i] = m;
        Ok(e)
    }
}

/// An element of a [`MultiMatrixAlgebra`]: one matrix per block.
#[derive(Debug, Clone)]
pub struct AlgebraElement<R: Real> {
    algebra: MultiMatrixAlgebra,
    blocks: Vec<CMat<R>>,
}

impl<R: Real> AlgebraElement<R> {
    pub fn new(algebra: MultiMatrixAlgebra, blocks: Vec<CMat<R>>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::validation("element: wrong number of blocks"));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.nrows() != algebra.block_dim(i) || b.ncols() != algebra.block_dim(i) {
                return Err(Error::validation(format!(
                    "element: block {i} is {}x{}, expected {}",
                    b.nrows(),
                    b.ncols(),
                    algebra.block_dim(i)
                )));
            }
        }
        Ok(AlgebraElement { algebra, blocks })
    }

    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn block(&self, i: usize) -> &CMat<R> {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[CMat<R>] {
        &self.blocks
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.algebra, other.algebra, "algebra mismatch");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, z: C<R>) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.map(|x| x * z)).collect(),
        }
    }

    /// Un-normalized trace `Σ_i tr(x_i)`.
    pub fn trace(&self) -> C<R> {
        self.blocks
            .iter()
            .map(|b| b.trace())
            .fold(Complex::zero(), |a, b| a + b)
    }

    pub fn norm(&self) -> R {
        let mut s = R::zero();
        for b in &self.blocks {
            let n = b.norm();
            s += n * n;
        }
        numerics::rsqrt(s)
    }

    /// The element as one block-diagonal matrix on `⊕ C^{n_i}`.
    pub fn block_diagonal(&self) -> CMat<R> {
        let total = self.algebra.rep_dim();
        let mut out = CMat::<R>::zeros(total, total);
        let mut off = 0;
        for b in &self.blocks {
            let n = b.nrows();
            out.view_mut((off, off), (n, n)).copy_from(b);
            off += n;
        }
        out
    }

    pub fn is_close(&self, other: &Self, tol: R) -> bool {
        self.sub(other).norm() <= tol
    }
}

/// Minimal central projections: atom `i` is the identity on block `i` and
/// zero elsewhere. They are mutually orthogonal and sum to the identity.
pub fn central_atoms<R: Real>(algebra: &MultiMatrixAlgebra) -> Vec<AlgebraElement<R>> {
    (0..algebra.num_blocks())
        .map(|i| {
            algebra
                .embed_block(i, numerics::eye(algebra.block_dim(i)))
                .expect("atom shape")
        })
        .collect()
}

/// A faithful-or-not normal state, stored factored: nonnegative block
/// weights summing to one and a trace-one density matrix per block, so that
/// `φ(x) = Σ_i μ_i tr(ρ_i x_i)`.
#[derive(Debug, Clone)]
pub struct State<R: Real> {
    algebra: MultiMatrixAlgebra,
    weights: Vec<R>,
    densities: Vec<CMat<R>>,
    faithful: bool,
}

impl<R: Real> State<R> {
    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn weights(&self) -> &[R] {
        &self.weights
    }

    pub fn density(&self, i: usize) -> &CMat<R> {
        &self.densities[i]
    }

    /// `μ_i · ρ_i`, the un-normalized density of block `i`.
    pub fn weighted_density(&self, i: usize) -> CMat<R> {
        self.densities[i].map(|z| z.scale(self.weights[i]))
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    pub fn evaluate(&self, x: &AlgebraElement<R>) -> C<R> {
        assert_eq!(self.algebra, *x.algebra(), "state/element algebra mismatch");
        let mut acc = C::<R>::zero();
        for i in 0..self.algebra.num_blocks() {
            acc += (self.weighted_density(i) * x.block(i)).trace();
        }
        acc
    }

    /// The normalized trace: block weights `μ_i = n_i / Σ n_k` with
    /// maximally mixed block densities.
    pub fn tracial(algebra: &MultiMatrixAlgebra) -> Self {
        let total: usize = algebra.rep_dim();
        let weights: Vec<R> = algebra
            .block_dims()
            .iter()
            .map(|&n| numerics::r::<R>(n as f64 / total as f64))
            .collect();
        let densities: Vec<CMat<R>> = algebra
            .block_dims()
            .iter()
            .map(|&n| numerics::eye::<R>(n).unscale(numerics::r(n as f64)))
            .collect();
        State {
            algebra: algebra.clone(),
            weights,
            densities,
            faithful: true,
        }
    }

    /// Random faithful state: Ginibre-induced densities and interior weights.
    pub fn random_faithful<RNG: rand::Rng>(
        rng: &mut RNG,
        algebra: &MultiMatrixAlgebra,
        tol: &Tolerances<R>,
    ) -> Self {
        let k = algebra.num_blocks();
        let mut weights: Vec<R> = (0..k)
            .map(|_| numerics::r::<R>(rng.gen_range(0.2..1.0)))
            .collect();
        let sum: R = weights.iter().fold(R::zero(), |a, &b| a + b);
        for w in weights.iter_mut() {
            *w /= sum;
        }
        let densities: Vec<CMat<R>> = algebra
            .block_dims()
            .iter()
            .map(|&n| {
                let g = numerics::random_pd::<R, _>(rng, n);
                let t = g.trace().re;
                g.map(|z| z.unscale(t))
            })
            .collect();
        validate_state(algebra.clone(), weights, densities, tol).expect("random state is valid")
    }
}

/// Validates and canonicalizes state data: positive-semidefinite blocks are
/// trace-normalized, the weight vector is normalized to sum one, and the
/// faithfulness flag is computed. A genuinely negative eigenvalue is a
/// validation error.
pub fn validate_state<R: Real>(
    algebra: MultiMatrixAlgebra,
    weights: Vec<R>,
    densities: Vec<CMat<R>>,
    tol: &Tolerances<R>,
) -> Result<State<R>> {
    if weights.len() != algebra.num_blocks() || densities.len() != algebra.num_blocks() {
        return Err(Error::validation(
            "state: weight/density count must match block count",
        ));
    }
    let mut wsum = R::zero();
    for (i, w) in weights.iter().enumerate() {
        if *w < R::zero() {
            return Err(Error::validation(format!("state: weight {i} is negative")));
        }
        wsum += *w;
    }
    if wsum <= R::zero() {
        return Err(Error::validation("state: weights sum to zero"));
    }

    let mut faithful = true;
    let mut norm_weights = Vec::with_capacity(weights.len());
    let mut norm_densities = Vec::with_capacity(densities.len());
    for (i, (w, rho)) in weights.iter().zip(densities.into_iter()).enumerate() {
        if rho.nrows() != algebra.block_dim(i) || !rho.is_square() {
            return Err(Error::validation(format!(
                "state: density {i} has wrong shape"
            )));
        }
        let spec = herm_eig(&rho, tol)?;
        let floor = tol.positivity_rel * numerics::rmax(spec.max_eig(), R::zero());
        if spec.min_eig() < -floor - tol.hermitian_rel {
            return Err(Error::validation(format!(
                "state: density {i} has negative eigenvalue {:e}",
                num_traits::ToPrimitive::to_f64(&spec.min_eig()).unwrap_or(f64::NAN)
            )));
        }
        let tr = spec.eigenvalues.iter().fold(R::zero(), |a, &b| a + b);
        if tr <= R::zero() {
            return Err(Error::validation(format!("state: density {i} is zero")));
        }
        if spec.min_eig() <= floor {
            faithful = false;
        }
        let w = *w / wsum;
        if w == R::zero() {
            faithful = false;
        }
        norm_weights.push(w);
        norm_densities.push(rho.map(|z| z.unscale(tr)));
    }
    Ok(State {
        algebra,
        weights: norm_weights,
        densities: norm_densities,
        faithful,
    })
}

/// The algebra `N ⊗ M^o` realized concretely with one block per pair
/// `(i, j)` of central atoms, of size `n_i · m_j`. The opposite algebra is
/// modelled by transposition on the second tensor slot, which makes the
/// anti-isomorphism `m ↦ m^o` explicit and testable.
#[derive(Debug, Clone)]
pub struct OppositeTensor {
    left: MultiMatrixAlgebra,
    right: MultiMatrixAlgebra,
    algebra: MultiMatrixAlgebra,
}

pub fn opposite_tensor(n: &MultiMatrixAlgebra, m: &MultiMatrixAlgebra) -> OppositeTensor {
    let mut dims = Vec::with_capacity(n.num_blocks() * m.num_blocks());
    for &ni in n.block_dims() {
        for &mj in m.block_dims() {
            dims.push(ni * mj);
        }
    }
    OppositeTensor {
        left: n.clone(),
        right: m.clone(),
        algebra: MultiMatrixAlgebra::new(dims).expect("nonempty"),
    }
}

impl OppositeTensor {
    pub fn algebra(&self) -> &MultiMatrixAlgebra {
        &self.algebra
    }

    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        i * self.right.num_blocks() + j
    }

    /// `n ⊗ 1`.
    pub fn embed_left<R: Real>(&self, x: &AlgebraElement<R>) -> AlgebraElement<R> {
        assert_eq!(*x.algebra(), self.left, "embed_left: algebra mismatch");
        let blocks = self
            .pairs()
            .map(|(i, j)| x.block(i).kronecker(&numerics::eye(self.right.block_dim(j))))
            .collect();
        AlgebraElement::new(self.algebra.clone(), blocks).expect("shapes agree")
    }

    /// `1 ⊗ m^o`, with `m^o` realized as the transpose of `m`.
    pub fn embed_right_op<R: Real>(&self, x: &AlgebraElement<R>) -> AlgebraElement<R> {
        assert_eq!(*x.algebra(), self.right, "embed_right_op: algebra mismatch");
        let blocks = self
            .pairs()
            .map(|(i, j)| numerics::eye(self.left.block_dim(i)).kronecker(&x.block(j).transpose()))
            .collect();
        AlgebraElement::new(self.algebra.clone(), blocks).expect("shapes agree")
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.right.num_blocks();
        (0..self.left.num_blocks()).flat_map(move |i| (0..m).map(move |j| (i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{fro_norm, random_ginibre};
    use crate::C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn tracial_state_is_faithful() {
        let m2 = MultiMatrixAlgebra::factor(2);
        let s = State::<f64>::tracial(&m2);
        assert!(s.is_faithful());
        let id = m2.identity::<f64>();
        assert!((s.evaluate(&id).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_state_flagged() {
        let m2 = MultiMatrixAlgebra::factor(2);
        let mut rho = CMat::<f64>::zeros(2, 2);
        rho[(0, 0)] = C64::new(1.0, 0.0);
        let s = validate_state(m2, vec![1.0], vec![rho], &tol()).unwrap();
        assert!(!s.is_faithful());
    }

    #[test]
    fn mixed_algebra_random_state_valid() {
        let alg = MultiMatrixAlgebra::new(vec![2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let s = State::<f64>::random_faithful(&mut rng, &alg, &tol());
        assert!(s.is_faithful());
        let wsum: f64 = s.weights().iter().sum();
        assert!((wsum - 1.0).abs() < 1e-12);
        for i in 0..2 {
            assert!((s.density(i).trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_density_rejected() {
        let m2 = MultiMatrixAlgebra::factor(2);
        let mut rho = CMat::<f64>::zeros(2, 2);
        rho[(0, 0)] = C64::new(1.5, 0.0);
        rho[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(validate_state(m2, vec![1.0], vec![rho], &tol()).is_err());
    }

    #[test]
    fn validate_is_idempotent() {
        let alg = MultiMatrixAlgebra::new(vec![2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = State::<f64>::random_faithful(&mut rng, &alg, &tol());
        let s2 = validate_state(
            alg.clone(),
            s.weights().to_vec(),
            (0..2).map(|i| s.density(i).clone()).collect(),
            &tol(),
        )
        .unwrap();
        for i in 0..2 {
            assert!((s.weights()[i] - s2.weights()[i]).abs() < 1e-12);
            assert!(fro_norm(&(s.density(i) - s2.density(i))) < 1e-12);
        }
    }

    #[test]
    fn atoms_resolve_identity() {
        let alg = MultiMatrixAlgebra::new(vec![2, 3, 1]).unwrap();
        let atoms = central_atoms::<f64>(&alg);
        assert_eq!(atoms.len(), 3);
        let mut sum = alg.zero::<f64>();
        for (i, a) in atoms.iter().enumerate() {
            // idempotent and self-adjoint
            assert!(a.mul(a).is_close(a, 1e-14));
            assert!(a.adjoint().is_close(a, 1e-14));
            for (j, b) in atoms.iter().enumerate() {
                if i != j {
                    assert!(a.mul(b).norm() < 1e-14);
                }
            }
            sum = sum.add(a);
        }
        assert!(sum.is_close(&alg.identity(), 1e-14));
    }

    #[test]
    fn factor_has_one_atom_classical_bit_two() {
        assert_eq!(central_atoms::<f64>(&MultiMatrixAlgebra::factor(3)).len(), 1);
        let bit = MultiMatrixAlgebra::new(vec![1, 1]).unwrap();
        assert_eq!(central_atoms::<f64>(&bit).len(), 2);
    }

    #[test]
    fn opposite_tensor_dims() {
        let m2 = MultiMatrixAlgebra::factor(2);
        let t = opposite_tensor(&m2, &m2);
        assert_eq!(t.algebra().block_dims(), &[4]);
        assert_eq!(t.algebra().dim(), 16);

        let bit = MultiMatrixAlgebra::new(vec![1, 1]).unwrap();
        let t2 = opposite_tensor(&bit, &m2);
        assert_eq!(t2.algebra().block_dims(), &[2, 2]);
    }

    #[test]
    fn embeddings_commute() {
        let n = MultiMatrixAlgebra::new(vec![2, 1]).unwrap();
        let m = MultiMatrixAlgebra::factor(3);
        let t = opposite_tensor(&n, &m);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..5 {
            let x = AlgebraElement::new(
                n.clone(),
                vec![
                    random_ginibre::<f64, _>(&mut rng, 2, 2),
                    random_ginibre::<f64, _>(&mut rng, 1, 1),
                ],
            )
            .unwrap();
            let y = AlgebraElement::new(m.clone(), vec![random_ginibre::<f64, _>(&mut rng, 3, 3)])
                .unwrap();
            let a = t.embed_left(&x).mul(&t.embed_right_op(&y));
            let b = t.embed_right_op(&y).mul(&t.embed_left(&x));
            assert!(a.is_close(&b, 1e-12));
        }
    }

    #[test]
    fn right_embedding_is_anti_homomorphism() {
        let n = MultiMatrixAlgebra::factor(1);
        let m = MultiMatrixAlgebra::factor(3);
        let t = opposite_tensor(&n, &m);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = AlgebraElement::new(m.clone(), vec![random_ginibre::<f64, _>(&mut rng, 3, 3)])
            .unwrap();
        let b = AlgebraElement::new(m.clone(), vec![random_ginibre::<f64, _>(&mut rng, 3, 3)])
            .unwrap();
        let lhs = t.embed_right_op(&a.mul(&b));
        let rhs = t.embed_right_op(&b).mul(&t.embed_right_op(&a));
        assert!(lhs.is_close(&rhs, 1e-12));
    }
}
