//! Finite-dimensional Frobenius algebras used as the diagonal cores of
//! triangular matrix algebras, together with modules over truncated
//! polynomial cores.
//!
//! Two flavors coexist: truncated polynomial rings `k[x]/(x^c)` (the only
//! cores the algebra builders use, with closed-form bases throughout) and
//! general structure-constant algebras, which can be constructed and
//! checked (associativity, Frobenius property, split locality) standalone.

use crate::field::{Field, Scalar};
use crate::matrix::{intertwiner_space, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Fixed seed for the Las Vegas searches below; results are deterministic.
const SEARCH_SEED: u64 = 0xF0B;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("structure constants are not associative at basis triple ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("provided unit is not a two-sided unit")]
    NoUnit,
    #[error("no nondegenerate associative pairing found (best rank {best_rank} of {dim})")]
    NotFrobenius { best_rank: usize, dim: usize },
    #[error("split locality test needs the characteristic not to divide the dimension")]
    UnsupportedCharacteristic,
    #[error("operation requires a truncated polynomial core")]
    NotTruncatedPoly,
    #[error("module action does not satisfy the core relation")]
    BadAction,
}

/// How the core was constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreKind {
    /// `k[x]/(x^c)`, basis `1, x, ..., x^{c-1}`.
    TruncatedPoly { c: u64 },
    /// Arbitrary structure constants.
    General,
}

/// A finite-dimensional unital algebra given by left multiplication
/// matrices of its basis elements (column-vector convention).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusCore {
    field: Field,
    dim: usize,
    left_mult: Vec<Matrix>,
    unit: Vec<Scalar>,
    kind: CoreKind,
}

impl FrobeniusCore {
    /// The truncated polynomial core `k[x]/(x^c)`.
    pub fn truncated_poly(field: Field, c: u64) -> FrobeniusCore {
        assert!(c >= 1, "truncation exponent must be positive");
        let dim = c as usize;
        let mut shift = Matrix::zero(field, dim, dim);
        for j in 0..dim - 1 {
            shift.set(j + 1, j, field.one());
        }
        let left_mult = (0..dim).map(|i| shift.pow(i as u64)).collect();
        let mut unit = vec![field.zero(); dim];
        unit[0] = field.one();
        FrobeniusCore {
            field,
            dim,
            left_mult,
            unit,
            kind: CoreKind::TruncatedPoly { c },
        }
    }

    /// Builds a general core from the products `e_i * e_j` (each a coordinate
    /// vector), validating associativity and the unit.
    pub fn from_structure_constants(
        field: Field,
        products: &[Vec<Vec<Scalar>>],
        unit: Vec<Scalar>,
    ) -> Result<FrobeniusCore, CoreError> {
        let dim = products.len();
        assert!(dim > 0, "empty algebra");
        assert!(products.iter().all(|row| row.len() == dim), "ragged product table");
        assert_eq!(unit.len(), dim, "unit length mismatch");
        let left_mult: Vec<Matrix> = (0..dim)
            .map(|i| Matrix::from_fn(field, dim, dim, |l, j| products[i][j][l].clone()))
            .collect();
        let core = FrobeniusCore { field, dim, left_mult, unit, kind: CoreKind::General };
        // Associativity: L_{e_i e_j} = L_i L_j.
        for i in 0..dim {
            for j in 0..dim {
                let prod_coords = &products[i][j];
                let l_prod = core.element_left_mult(prod_coords);
                if l_prod != core.left_mult[i].matmul(&core.left_mult[j]) {
                    return Err(CoreError::NotAssociative(i, j, 0));
                }
            }
        }
        // Unit: left multiplication by the unit is the identity, and
        // e_i * unit = e_i for all i.
        if !core.element_left_mult(&core.unit).is_identity() {
            return Err(CoreError::NoUnit);
        }
        for i in 0..dim {
            let ei: Vec<Scalar> = (0..dim)
                .map(|l| if l == i { field.one() } else { field.zero() })
                .collect();
            if core.multiply(&ei, &core.unit) != ei {
                return Err(CoreError::NoUnit);
            }
        }
        Ok(core)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &CoreKind {
        &self.kind
    }

    /// The truncation exponent, for truncated polynomial cores.
    pub fn truncation(&self) -> Option<u64> {
        match self.kind {
            CoreKind::TruncatedPoly { c } => Some(c),
            CoreKind::General => None,
        }
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Left multiplication matrix of the element with the given coordinates.
    pub fn element_left_mult(&self, coords: &[Scalar]) -> Matrix {
        assert_eq!(coords.len(), self.dim, "coordinate length mismatch");
        let mut acc = Matrix::zero(self.field, self.dim, self.dim);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.left_mult[i].scale(c));
            }
        }
        acc
    }

    /// Product of two elements in coordinates.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.element_left_mult(x).mul_vec(y)
    }

    /// Multiplication by the generator `x` of a truncated polynomial core.
    /// For truncation 1 the generator is zero.
    pub fn generator_action(&self) -> Matrix {
        match self.kind {
            CoreKind::TruncatedPoly { c } => {
                if c == 1 {
                    Matrix::zero(self.field, 1, 1)
                } else {
                    self.left_mult[1].clone()
                }
            }
            CoreKind::General => panic!("generator_action requires a truncated polynomial core"),
        }
    }

    /// The regular module over a truncated polynomial core.
    pub fn regular_module(&self) -> CoreModule {
        match self.kind {
            CoreKind::TruncatedPoly { .. } => CoreModule::new(self.generator_action()),
            CoreKind::General => panic!("regular_module requires a truncated polynomial core"),
        }
    }

    /// Searches for a linear functional whose induced pairing
    /// `(a, b) -> f(ab)` is nondegenerate, certifying the Frobenius
    /// property; returns the functional's coordinates.  The pairing is
    /// automatically associative, so only nondegeneracy is at stake.
    pub fn frobenius_functional(&self) -> Result<Vec<Scalar>, CoreError> {
        let pairing_rank = |lambda: &[Scalar]| -> usize {
            // P[i][j] = lambda(e_i e_j); column j of L_i holds e_i e_j.
            let p = Matrix::from_fn(self.field, self.dim, self.dim, |i, j| {
                let mut acc = self.field.zero();
                for l in 0..self.dim {
                    let c = self.left_mult[i].get(l, j);
                    if !c.is_zero() {
                        acc = &acc + &(c * &lambda[l]);
                    }
                }
                acc
            });
            p.rank()
        };
        let mut best = 0usize;
        // Dual basis vectors first, then seeded random combinations.
        for m in 0..self.dim {
            let lambda: Vec<Scalar> = (0..self.dim)
                .map(|l| if l == m { self.field.one() } else { self.field.zero() })
                .collect();
            let r = pairing_rank(&lambda);
            if r == self.dim {
                return Ok(lambda);
            }
            best = best.max(r);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
        for _ in 0..64 {
            let lambda: Vec<Scalar> =
                (0..self.dim).map(|_| self.field.from_i64(rng.gen_range(1..=7))).collect();
            let r = pairing_rank(&lambda);
            if r == self.dim {
                return Ok(lambda);
            }
            best = best.max(r);
        }
        Err(CoreError::NotFrobenius { best_rank: best, dim: self.dim })
    }

    /// Whether the algebra splits as `k + J` with `J` a nilpotent ideal
    /// (local with residue field `k`).  Truncated polynomial cores qualify
    /// by construction.  For general cores the candidate functional is
    /// `x -> trace(L_x)/dim`, which requires the characteristic not to
    /// divide the dimension.
    pub fn is_split_local(&self) -> Result<bool, CoreError> {
        if matches!(self.kind, CoreKind::TruncatedPoly { .. }) {
            return Ok(true);
        }
        let dim_in_field = self.field.from_i64(self.dim as i64);
        if dim_in_field.is_zero() {
            return Err(CoreError::UnsupportedCharacteristic);
        }
        let inv_dim = dim_in_field.inv().expect("nonzero");
        // If the algebra is k + J, the scalar part of x is trace(L_x)/dim.
        let lambda: Vec<Scalar> =
            (0..self.dim).map(|i| &self.left_mult[i].trace() * &inv_dim).collect();
        // J = ker(lambda) must have codimension 1 (lambda(1) = 1 holds by
        // construction) and be a two-sided ideal: lambda(j e) = lambda(e j)
        // = 0 for j in J, e in the basis.
        let lambda_row = Matrix::from_rows(self.field, vec![lambda.clone()]);
        let j_basis = lambda_row.kernel_basis(); // dim x (dim-1)
        if j_basis.cols() + 1 != self.dim {
            return Ok(false);
        }
        let lambda_of = |v: &[Scalar]| -> Scalar {
            let mut acc = self.field.zero();
            for (c, l) in v.iter().zip(&lambda) {
                acc = &acc + &(c * l);
            }
            acc
        };
        for jc in 0..j_basis.cols() {
            let j = j_basis.col(jc);
            for e in 0..self.dim {
                let ev: Vec<Scalar> = (0..self.dim)
                    .map(|l| if l == e { self.field.one() } else { self.field.zero() })
                    .collect();
                if !lambda_of(&self.multiply(&j, &ev)).is_zero()
                    || !lambda_of(&self.multiply(&ev, &j)).is_zero()
                {
                    return Ok(false);
                }
            }
        }
        // J must be nilpotent: iterate products until the span stabilizes.
        let mut current = j_basis.clone();
        for _ in 0..self.dim {
            if current.cols() == 0 {
                return Ok(true);
            }
            // Span of { j * j' : j in J-basis, j' in current }.
            let mut prods: Vec<Vec<Scalar>> = Vec::new();
            for a in 0..j_basis.cols() {
                for b in 0..current.cols() {
                    prods.push(self.multiply(&j_basis.col(a), &current.col(b)));
                }
            }
            let stacked = Matrix::from_rows(self.field, prods);
            let next = stacked.image_basis(); // columns span J * current
            if next.cols() >= current.cols() {
                return Ok(false); // stabilized at a nonzero power
            }
            current = next;
        }
        Ok(current.cols() == 0)
    }
}

/// A module over a truncated polynomial core, given by the nilpotent action
/// of the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreModule {
    action: Matrix,
}

impl CoreModule {
    pub fn new(action: Matrix) -> CoreModule {
        assert_eq!(action.rows(), action.cols(), "action must be square");
        CoreModule { action }
    }

    pub fn zero(field: Field) -> CoreModule {
        CoreModule { action: Matrix::zero(field, 0, 0) }
    }

    /// The free module of the given rank: block-diagonal copies of the
    /// regular module, basis ordered copy-major.
    pub fn free(core: &FrobeniusCore, rank: usize) -> CoreModule {
        let blocks: Vec<Matrix> = (0..rank).map(|_| core.generator_action()).collect();
        CoreModule { action: Matrix::block_diag(core.field(), &blocks) }
    }

    pub fn dim(&self) -> usize {
        self.action.rows()
    }

    pub fn field(&self) -> Field {
        self.action.field()
    }

    pub fn action(&self) -> &Matrix {
        &self.action
    }

    /// Checks the defining relation `action^c = 0`.
    pub fn is_valid_over(&self, core: &FrobeniusCore) -> bool {
        match core.truncation() {
            Some(c) => self.action.pow(c).is_zero(),
            None => false,
        }
    }

    /// The action of the element with the given coordinates.
    pub fn element_action(&self, core: &FrobeniusCore, coords: &[Scalar]) -> Matrix {
        assert_eq!(coords.len(), core.dim(), "coordinate length mismatch");
        let mut acc = Matrix::zero(self.field(), self.dim(), self.dim());
        let mut power = Matrix::identity(self.field(), self.dim());
        for c in coords {
            if !c.is_zero() {
                acc = acc.add(&power.scale(c));
            }
            power = power.matmul(&self.action);
        }
        acc
    }

    /// The rank as a free module, or `None` if not free: every block of the
    /// nilpotent action must have the full size `c`.
    pub fn free_rank(&self, core: &FrobeniusCore) -> Option<usize> {
        let c = core.truncation()? as usize;
        if !self.is_valid_over(core) {
            return None;
        }
        if self.dim() == 0 {
            return Some(0);
        }
        let profile = self.action.nilpotent_block_profile().ok()?;
        let full_blocks = profile.get(c - 1).copied().unwrap_or(0);
        if full_blocks * c == self.dim()
            && profile.iter().take(c - 1).all(|&m| m == 0)
        {
            Some(full_blocks)
        } else {
            None
        }
    }

    /// For a free module, an invertible matrix whose columns are a free
    /// basis in copy-major order `g_1, N g_1, ..., N^{c-1} g_1, g_2, ...`.
    pub fn free_basis(&self, core: &FrobeniusCore) -> Option<Matrix> {
        let rank = self.free_rank(core)?;
        let c = core.truncation()? as usize;
        // Lift a basis of the quotient by the image of the action.
        let (_, sigma) = self.action.cokernel();
        debug_assert_eq!(sigma.cols(), rank);
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(rank * c);
        for s in 0..rank {
            let mut v = sigma.col(s);
            for _ in 0..c {
                cols.push(v.clone());
                v = self.action.mul_vec(&v);
            }
        }
        let basis = Matrix::from_cols(self.field(), self.dim(), cols);
        basis.inverse().map(|_| basis)
    }

    /// A basis of the space of module homomorphisms into `other`.
    pub fn hom(&self, other: &CoreModule) -> Vec<Matrix> {
        intertwiner_space(
            self.field(),
            &[(&self.action, &other.action)],
            other.dim(),
            self.dim(),
        )
    }
}
