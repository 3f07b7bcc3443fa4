//! Module categories over triangular algebras.
//!
//! A representation assigns to each vertex a module over its core and to
//! each arrow `(i, j)` a structure map from the tensor model
//! `B_ij (x) X_j` (one copy of `X_j` per right basis element of the arrow
//! bimodule) into `X_i`, linear over the core at `i`.
//!
//! Besides the basic category operations (hom spaces, direct sums, random
//! objects, Fitting decompositions, isomorphism testing) this module builds
//! the indecomposable projectives from chain combinatorics, tensors them
//! against core modules, and dualizes representations of the opposite
//! algebra, which yields the indecomposable injectives.

use crate::bimod::{poly_action, shift_matrix, Bimodule};
use crate::field::{Field, Scalar};
use crate::frobcore::CoreModule;
use crate::matrix::{intertwiner_space, Matrix};
use crate::triangalg::TriangularAlgebra;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepError {
    #[error("vertex {0} carries an invalid module action")]
    BadModule(usize),
    #[error("structure map at ({0},{1}) has shape {2}x{3}, expected {4}x{5}")]
    BadShape(usize, usize, usize, usize, usize, usize),
    #[error("structure map at ({0},{1}) is not linear over the target core")]
    NotLinear(usize, usize),
    #[error("structure maps do not match the arrow set")]
    ArrowMismatch,
    #[error("endomorphism ring analysis is only exact over the rationals")]
    NeedsRationals,
    #[error("representation is not locally free")]
    NotLocallyFree,
}

/// A morphism of representations: one matrix per vertex.
pub type Morphism = Vec<Matrix>;

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    modules: Vec<CoreModule>,
    maps: BTreeMap<(usize, usize), Matrix>,
}

impl Representation {
    pub fn new(modules: Vec<CoreModule>, maps: BTreeMap<(usize, usize), Matrix>) -> Representation {
        Representation { modules, maps }
    }

    /// The representation with a free module of the given rank at one vertex
    /// and zero elsewhere.
    pub fn free_at(alg: &TriangularAlgebra, v: usize, rank: usize) -> Representation {
        let mut ranks = vec![0; alg.n()];
        ranks[v] = rank;
        let modules: Vec<CoreModule> =
            (0..alg.n()).map(|w| CoreModule::free(alg.core(w), ranks[w])).collect();
        let maps = zero_maps(alg, &modules);
        Representation { modules, maps }
    }

    /// The free rank-one representation concentrated at a vertex.
    pub fn vertex_simple(alg: &TriangularAlgebra, v: usize) -> Representation {
        Representation::free_at(alg, v, 1)
    }

    pub fn zero(alg: &TriangularAlgebra) -> Representation {
        let modules: Vec<CoreModule> = (0..alg.n()).map(|_| CoreModule::zero(alg.field())).collect();
        let maps = zero_maps(alg, &modules);
        Representation { modules, maps }
    }

    pub fn module(&self, v: usize) -> &CoreModule {
        &self.modules[v]
    }

    pub fn map(&self, i: usize, j: usize) -> &Matrix {
        &self.maps[&(i, j)]
    }

    pub fn maps(&self) -> impl Iterator<Item = (&(usize, usize), &Matrix)> {
        self.maps.iter()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modules.iter().map(|m| m.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.modules.iter().map(|m| m.dim()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn validate(&self, alg: &TriangularAlgebra) -> Result<(), RepError> {
        if self.modules.len() != alg.n() {
            return Err(RepError::ArrowMismatch);
        }
        for v in 0..alg.n() {
            if !self.modules[v].is_valid_over(alg.core(v)) {
                return Err(RepError::BadModule(v));
            }
        }
        let arrow_keys: Vec<(usize, usize)> = alg.arrows().map(|(&k, _)| k).collect();
        if self.maps.keys().copied().collect::<Vec<_>>() != arrow_keys {
            return Err(RepError::ArrowMismatch);
        }
        for (&(i, j), b) in alg.arrows() {
            let phi = &self.maps[&(i, j)];
            let (xi, xj) = (self.modules[i].dim(), self.modules[j].dim());
            let want_cols = b.right_rank() * xj;
            if phi.rows() != xi || phi.cols() != want_cols {
                return Err(RepError::BadShape(i, j, phi.rows(), phi.cols(), xi, want_cols));
            }
            let model = b.tensor_left_action(&self.modules[j]);
            if self.modules[i].action().matmul(phi) != phi.matmul(&model) {
                return Err(RepError::NotLinear(i, j));
            }
        }
        Ok(())
    }

    /// Free ranks at every vertex, or `None` if some vertex module is not
    /// free over its core.
    pub fn rank_vector(&self, alg: &TriangularAlgebra) -> Option<Vec<i64>> {
        (0..alg.n())
            .map(|v| self.modules[v].free_rank(alg.core(v)).map(|r| r as i64))
            .collect()
    }

    pub fn is_locally_free(&self, alg: &TriangularAlgebra) -> bool {
        self.rank_vector(alg).is_some()
    }

    /// All structure maps into a vertex, stacked side by side in ascending
    /// source order; returns the matrix and the ordered arrow keys.
    pub fn in_map(&self, alg: &TriangularAlgebra, v: usize) -> (Matrix, Vec<(usize, usize)>) {
        let keys = alg.arrows_into(v);
        let blocks: Vec<Matrix> = keys.iter().map(|k| self.maps[k].clone()).collect();
        let m = if blocks.is_empty() {
            Matrix::zero(self.modules[v].field(), self.modules[v].dim(), 0)
        } else {
            Matrix::hstack(self.modules[v].field(), &blocks)
        };
        (m, keys)
    }

    pub fn direct_sum(alg: &TriangularAlgebra, parts: &[&Representation]) -> Representation {
        let field = alg.field();
        let modules: Vec<CoreModule> = (0..alg.n())
            .map(|v| {
                let blocks: Vec<Matrix> =
                    parts.iter().map(|p| p.modules[v].action().clone()).collect();
                CoreModule::new(Matrix::block_diag(field, &blocks))
            })
            .collect();
        let mut maps = BTreeMap::new();
        for (&(i, j), b) in alg.arrows() {
            let rr = b.right_rank();
            let mut r_blocks = Vec::with_capacity(rr);
            for r in 0..rr {
                let pieces: Vec<Matrix> = parts
                    .iter()
                    .map(|p| col_block(p.map(i, j), r, p.modules[j].dim()))
                    .collect();
                r_blocks.push(Matrix::block_diag(field, &pieces));
            }
            let m = if r_blocks.is_empty() {
                Matrix::zero(field, modules[i].dim(), 0)
            } else {
                Matrix::hstack(field, &r_blocks)
            };
            maps.insert((i, j), m);
        }
        Representation { modules, maps }
    }

    /// A random representation with free vertex modules of rank at most
    /// `max_rank` and structure maps sampled from the space of linear ones.
    pub fn random_locally_free(
        alg: &TriangularAlgebra,
        rng: &mut impl Rng,
        max_rank: usize,
    ) -> Representation {
        let ranks: Vec<usize> = (0..alg.n()).map(|_| rng.gen_range(0..=max_rank)).collect();
        Representation::random_with_ranks(alg, rng, &ranks)
    }

    pub fn random_with_ranks(
        alg: &TriangularAlgebra,
        rng: &mut impl Rng,
        ranks: &[usize],
    ) -> Representation {
        let field = alg.field();
        let modules: Vec<CoreModule> =
            (0..alg.n()).map(|v| CoreModule::free(alg.core(v), ranks[v])).collect();
        let mut maps = BTreeMap::new();
        for (&(i, j), b) in alg.arrows() {
            let (xi, xj) = (modules[i].dim(), modules[j].dim());
            let cols = b.right_rank() * xj;
            let mut m = Matrix::zero(field, xi, cols);
            if xi > 0 && cols > 0 {
                let model = b.tensor_left_action(&modules[j]);
                let basis = intertwiner_space(field, &[(&model, modules[i].action())], xi, cols);
                for f in &basis {
                    let c = field.from_i64(rng.gen_range(-3..=3));
                    m = m.add(&f.scale(&c));
                }
            }
            maps.insert((i, j), m);
        }
        Representation { modules, maps }
    }
}

fn zero_maps(
    alg: &TriangularAlgebra,
    modules: &[CoreModule],
) -> BTreeMap<(usize, usize), Matrix> {
    let mut maps = BTreeMap::new();
    for (&(i, j), b) in alg.arrows() {
        let m = Matrix::zero(alg.field(), modules[i].dim(), b.right_rank() * modules[j].dim());
        maps.insert((i, j), m);
    }
    maps
}

/// Column block `r` of a structure map whose columns come in `inner`-wide
/// blocks.
pub fn col_block(m: &Matrix, r: usize, inner: usize) -> Matrix {
    m.submatrix(0, m.rows(), r * inner, (r + 1) * inner)
}

fn add_entry(m: &mut Matrix, i: usize, j: usize, v: &Scalar) {
    let cur = m.get(i, j).clone();
    m.set(i, j, &cur + v);
}

fn sub_entry(m: &mut Matrix, i: usize, j: usize, v: &Scalar) {
    let cur = m.get(i, j).clone();
    m.set(i, j, &cur - v);
}

/// A basis of the space of morphisms `x -> y`, computed as the kernel of
/// the combined linearity and intertwining conditions.
pub fn hom_space(
    alg: &TriangularAlgebra,
    x: &Representation,
    y: &Representation,
) -> Vec<Morphism> {
    let field = alg.field();
    let n = alg.n();
    let xd = x.dims();
    let yd = y.dims();
    let mut off = vec![0usize; n + 1];
    for v in 0..n {
        off[v + 1] = off[v] + yd[v] * xd[v];
    }
    let unknowns = off[n];
    let mut eq_rows = 0;
    for v in 0..n {
        eq_rows += yd[v] * xd[v];
    }
    for (&(i, j), b) in alg.arrows() {
        eq_rows += yd[i] * b.right_rank() * xd[j];
    }
    let mut e = Matrix::zero(field, eq_rows, unknowns);
    let mut row0 = 0;
    for v in 0..n {
        let nx = x.module(v).action();
        let ny = y.module(v).action();
        for p in 0..yd[v] {
            for q in 0..xd[v] {
                let row = row0 + p * xd[v] + q;
                for m in 0..xd[v] {
                    add_entry(&mut e, row, off[v] + p * xd[v] + m, nx.get(m, q));
                }
                for m in 0..yd[v] {
                    sub_entry(&mut e, row, off[v] + m * xd[v] + q, ny.get(p, m));
                }
            }
        }
        row0 += yd[v] * xd[v];
    }
    for (&(i, j), b) in alg.arrows() {
        let rr = b.right_rank();
        let phix = x.map(i, j);
        let phiy = y.map(i, j);
        let width = rr * xd[j];
        for p in 0..yd[i] {
            for c in 0..width {
                let row = row0 + p * width + c;
                for m in 0..xd[i] {
                    add_entry(&mut e, row, off[i] + p * xd[i] + m, phix.get(m, c));
                }
                let r = c / xd[j];
                let l = c % xd[j];
                for m in 0..yd[j] {
                    sub_entry(&mut e, row, off[j] + m * xd[j] + l, phiy.get(p, r * yd[j] + m));
                }
            }
        }
        row0 += yd[i] * width;
    }
    let kernel = e.kernel_basis();
    let mut out = Vec::with_capacity(kernel.cols());
    for k in 0..kernel.cols() {
        let col = kernel.col(k);
        let mut f = Vec::with_capacity(n);
        for v in 0..n {
            let flat = col[off[v]..off[v + 1]].to_vec();
            f.push(Matrix::from_flat(field, yd[v], xd[v], flat));
        }
        out.push(f);
    }
    out
}

pub fn hom_dim(alg: &TriangularAlgebra, x: &Representation, y: &Representation) -> usize {
    hom_space(alg, x, y).len()
}

pub fn is_morphism(
    alg: &TriangularAlgebra,
    x: &Representation,
    y: &Representation,
    f: &Morphism,
) -> bool {
    if f.len() != alg.n() {
        return false;
    }
    for v in 0..alg.n() {
        if f[v].rows() != y.module(v).dim() || f[v].cols() != x.module(v).dim() {
            return false;
        }
        if f[v].matmul(x.module(v).action()) != y.module(v).action().matmul(&f[v]) {
            return false;
        }
    }
    for (&(i, j), b) in alg.arrows() {
        let lhs = f[i].matmul(x.map(i, j));
        let rhs = y
            .map(i, j)
            .matmul(&Matrix::identity(alg.field(), b.right_rank()).kron(&f[j]));
        if lhs != rhs {
            return false;
        }
    }
    true
}

pub fn compose(f: &Morphism, g: &Morphism) -> Morphism {
    f.iter().zip(g.iter()).map(|(a, b)| a.matmul(b)).collect()
}

pub fn add_morphisms(f: &Morphism, g: &Morphism) -> Morphism {
    f.iter().zip(g.iter()).map(|(a, b)| a.add(b)).collect()
}

pub fn identity_morphism(alg: &TriangularAlgebra, x: &Representation) -> Morphism {
    (0..alg.n())
        .map(|v| Matrix::identity(alg.field(), x.module(v).dim()))
        .collect()
}

pub fn morphism_is_iso(f: &Morphism) -> bool {
    f.iter().all(|m| m.rows() == m.cols() && m.rank() == m.rows())
}

/// Whether two representations are isomorphic.  A positive answer is
/// certified by an explicit isomorphism; a negative answer is certain when
/// the dimensions differ and otherwise comes from a seeded search over the
/// hom space, which succeeds with overwhelming probability when an
/// isomorphism exists.
pub fn modules_isomorphic(
    alg: &TriangularAlgebra,
    x: &Representation,
    y: &Representation,
    seed: u64,
) -> bool {
    find_isomorphism(alg, x, y, seed).is_some()
}

pub fn find_isomorphism(
    alg: &TriangularAlgebra,
    x: &Representation,
    y: &Representation,
    seed: u64,
) -> Option<Morphism> {
    if x.dims() != y.dims() {
        return None;
    }
    if x.total_dim() == 0 {
        return Some(identity_morphism(alg, x));
    }
    let basis = hom_space(alg, x, y);
    if basis.is_empty() {
        return None;
    }
    for f in &basis {
        if morphism_is_iso(f) {
            return Some(f.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..64u64 {
        let bound = 3 + (trial / 8) as i64;
        let mut f: Morphism = (0..alg.n())
            .map(|v| Matrix::zero(alg.field(), y.module(v).dim(), x.module(v).dim()))
            .collect();
        for b in &basis {
            let c = alg.field().from_i64(rng.gen_range(-bound..=bound));
            for v in 0..alg.n() {
                f[v] = f[v].add(&b[v].scale(&c));
            }
        }
        if morphism_is_iso(&f) {
            return Some(f);
        }
    }
    None
}

/// Restricts a representation to an invariant family of column spans (one
/// full-column-rank matrix per vertex); panics if the spans are not closed
/// under the actions and structure maps.
pub fn restrict(alg: &TriangularAlgebra, x: &Representation, cols: &[Matrix]) -> Representation {
    let field = alg.field();
    let modules: Vec<CoreModule> = (0..alg.n())
        .map(|v| {
            let nb = x.module(v).action().matmul(&cols[v]);
            CoreModule::new(cols[v].solve(&nb).expect("span not action-invariant"))
        })
        .collect();
    let mut maps = BTreeMap::new();
    for (&(i, j), b) in alg.arrows() {
        let big = x
            .map(i, j)
            .matmul(&Matrix::identity(field, b.right_rank()).kron(&cols[j]));
        maps.insert((i, j), cols[i].solve(&big).expect("span not map-invariant"));
    }
    Representation { modules, maps }
}

/// Decomposes a representation into direct summands by Fitting splittings
/// along seeded endomorphisms.  Pieces that resist every sampled splitting
/// are returned whole, so the output may in rare cases be coarser than the
/// full decomposition.
pub fn summand_split(
    alg: &TriangularAlgebra,
    x: &Representation,
    seed: u64,
) -> Vec<Representation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    split_rec(alg, x, &mut rng)
}

fn split_rec(
    alg: &TriangularAlgebra,
    x: &Representation,
    rng: &mut ChaCha8Rng,
) -> Vec<Representation> {
    let total = x.total_dim();
    if total == 0 {
        return Vec::new();
    }
    let basis = hom_space(alg, x, x);
    if basis.len() <= 1 {
        return vec![x.clone()];
    }
    let mut candidates: Vec<Morphism> = basis.clone();
    for a in 0..basis.len() {
        for b in (a + 1)..basis.len() {
            candidates.push(add_morphisms(&basis[a], &basis[b]));
        }
    }
    for _ in 0..32 {
        let mut f: Morphism = identity_morphism(alg, x)
            .iter()
            .map(|m| m.scale(&alg.field().from_i64(0)))
            .collect();
        for b in &basis {
            let c = alg.field().from_i64(rng.gen_range(-3..=3));
            for v in 0..alg.n() {
                f[v] = f[v].add(&b[v].scale(&c));
            }
        }
        candidates.push(f);
    }
    for f in &candidates {
        let powers: Vec<Matrix> = f.iter().map(|m| m.pow(total as u64)).collect();
        let kers: Vec<Matrix> = powers.iter().map(|m| m.kernel_basis()).collect();
        let kdim: usize = kers.iter().map(|k| k.cols()).sum();
        if kdim == 0 || kdim == total {
            continue;
        }
        let ims: Vec<Matrix> = powers.iter().map(|m| m.image_basis()).collect();
        let k_rep = restrict(alg, x, &kers);
        let i_rep = restrict(alg, x, &ims);
        let mut out = split_rec(alg, &k_rep, rng);
        out.extend(split_rec(alg, &i_rep, rng));
        return out;
    }
    vec![x.clone()]
}

fn flatten_morphism(f: &Morphism) -> Vec<Scalar> {
    let mut out = Vec::new();
    for m in f {
        out.extend(m.vectorize());
    }
    out
}

/// Dimension of the endomorphism ring modulo its radical, computed from the
/// trace form of the regular action; the representation is certified
/// indecomposable with scalar endomorphisms exactly when this is 1.
pub fn end_residue_dim(alg: &TriangularAlgebra, x: &Representation) -> Result<usize, RepError> {
    if alg.field() != Field::Rationals {
        return Err(RepError::NeedsRationals);
    }
    let basis = hom_space(alg, x, x);
    let e = basis.len();
    if e == 0 {
        return Ok(0);
    }
    let flat_len = flatten_morphism(&basis[0]).len();
    let bmat = Matrix::from_cols(
        alg.field(),
        flat_len,
        basis.iter().map(flatten_morphism).collect(),
    );
    let mut lmats = Vec::with_capacity(e);
    for p in 0..e {
        let mut cols = Vec::with_capacity(e);
        for q in 0..e {
            let prod = flatten_morphism(&compose(&basis[p], &basis[q]));
            let rhs = Matrix::from_cols(alg.field(), flat_len, vec![prod]);
            let coords = bmat.solve(&rhs).expect("endomorphisms closed under composition");
            cols.push(coords.col(0));
        }
        lmats.push(Matrix::from_cols(alg.field(), e, cols));
    }
    let gram = Matrix::from_fn(alg.field(), e, e, |p, q| lmats[p].matmul(&lmats[q]).trace());
    Ok(gram.rank())
}

/// One direct summand of the vertex decomposition of a projective module:
/// a descending vertex chain, the index ranges of its tensor-model basis
/// (right-basis indices of each arrow factor, then a power of the final
/// core generator), and its offset in the vertex component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBlock {
    pub chain: Vec<usize>,
    pub sizes: Vec<usize>,
    pub offset: usize,
}

impl ChainBlock {
    pub fn dim(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Number of free generators over the final core: the product of all
    /// index ranges except the last.
    pub fn prefix_count(&self) -> usize {
        self.sizes[..self.sizes.len() - 1].iter().product()
    }
}

/// The indecomposable projective at a vertex, with its representation
/// structure, the commuting right action of the vertex core, and the chain
/// layout of each vertex component.
#[derive(Debug, Clone)]
pub struct ProjectiveData {
    vertex: usize,
    rep: Representation,
    right_action: Vec<Matrix>,
    layout: Vec<Vec<ChainBlock>>,
}

fn chain_left_action(alg: &TriangularAlgebra, chain: &[usize]) -> Matrix {
    if chain.len() == 1 {
        shift_matrix(alg.field(), alg.trunc(chain[0]) as usize)
    } else {
        let b = alg.arrow(chain[0], chain[1]).expect("chain follows arrows");
        let tail = chain_left_action(alg, &chain[1..]);
        b.tensor_left_action(&CoreModule::new(tail))
    }
}

impl ProjectiveData {
    pub fn new(alg: &TriangularAlgebra, t: usize) -> ProjectiveData {
        let field = alg.field();
        let n = alg.n();
        let ct = alg.trunc(t) as usize;
        let mut layout: Vec<Vec<ChainBlock>> = Vec::with_capacity(n);
        let mut left_actions = Vec::with_capacity(n);
        let mut right_actions = Vec::with_capacity(n);
        for v in 0..n {
            let chains = alg.chains(v, t);
            let mut blocks = Vec::with_capacity(chains.len());
            let mut offset = 0;
            let mut lefts = Vec::with_capacity(chains.len());
            let mut rights = Vec::with_capacity(chains.len());
            for chain in chains {
                let mut sizes = Vec::with_capacity(chain.len());
                for w in chain.windows(2) {
                    sizes.push(alg.arrow(w[0], w[1]).unwrap().right_rank());
                }
                sizes.push(ct);
                let block = ChainBlock { chain: chain.clone(), sizes, offset };
                offset += block.dim();
                lefts.push(chain_left_action(alg, &chain));
                rights.push(
                    Matrix::identity(field, block.prefix_count())
                        .kron(&shift_matrix(field, ct)),
                );
                blocks.push(block);
            }
            layout.push(blocks);
            left_actions.push(Matrix::block_diag(field, &lefts));
            right_actions.push(Matrix::block_diag(field, &rights));
        }
        let modules: Vec<CoreModule> = left_actions.into_iter().map(CoreModule::new).collect();
        // Structure maps: prepend an arrow's right basis element to a chain.
        let mut maps = BTreeMap::new();
        for (&(v, w), b) in alg.arrows() {
            let rr = b.right_rank();
            let (pv, pw) = (modules[v].dim(), modules[w].dim());
            let mut phi = Matrix::zero(field, pv, rr * pw);
            for wb in &layout[w] {
                let mut target_chain = vec![v];
                target_chain.extend_from_slice(&wb.chain);
                let tb = layout[v]
                    .iter()
                    .find(|cb| cb.chain == target_chain)
                    .expect("prepended chain exists");
                let d = wb.dim();
                for r in 0..rr {
                    for q in 0..d {
                        phi.set(tb.offset + r * d + q, r * pw + wb.offset + q, field.one());
                    }
                }
            }
            maps.insert((v, w), phi);
        }
        let rep = Representation { modules, maps };
        ProjectiveData { vertex: t, rep, right_action: right_actions, layout }
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn right_action(&self, v: usize) -> &Matrix {
        &self.right_action[v]
    }

    pub fn layout(&self, v: usize) -> &[ChainBlock] {
        &self.layout[v]
    }

    /// Number of free generators of the vertex component over the core at
    /// the projective's own vertex.
    pub fn right_rank(&self, v: usize) -> usize {
        self.layout[v].iter().map(|b| b.prefix_count()).sum()
    }

    /// Columns embedding the free generators (prefix tuples with zero final
    /// power) into the vertex component.
    pub fn generator_cols(&self, v: usize) -> Matrix {
        let field = self.rep.modules[v].field();
        let pv = self.rep.modules[v].dim();
        let sv = self.right_rank(v);
        let mut m = Matrix::zero(field, pv, sv);
        let mut pi = 0;
        for block in &self.layout[v] {
            let ct = *block.sizes.last().unwrap();
            for p in 0..block.prefix_count() {
                m.set(block.offset + p * ct, pi, field.one());
                pi += 1;
            }
        }
        m
    }

    /// The contraction of the vertex component against a module over the
    /// final core: maps plain tensor coordinates onto the generator model,
    /// sending generator-power `a` columns through the `a`-th power of the
    /// module action.
    pub fn contraction(&self, v: usize, m: &CoreModule) -> Matrix {
        let field = m.field();
        let md = m.dim();
        let pv = self.rep.modules[v].dim();
        let sv = self.right_rank(v);
        let mut c = Matrix::zero(field, sv * md, pv * md);
        let mut pows = vec![Matrix::identity(field, md)];
        let ct_global = self
            .layout
            .iter()
            .flat_map(|bs| bs.iter())
            .map(|b| *b.sizes.last().unwrap())
            .max()
            .unwrap_or(1);
        for _ in 1..ct_global {
            pows.push(pows.last().unwrap().matmul(m.action()));
        }
        let mut pi = 0;
        for block in &self.layout[v] {
            let ct = *block.sizes.last().unwrap();
            for p in 0..block.prefix_count() {
                for a in 0..ct {
                    let u = block.offset + p * ct + a;
                    c.set_block(pi * md, u * md, &pows[a]);
                }
                pi += 1;
            }
        }
        c
    }

    /// The tensor product of this projective with a module over its vertex
    /// core, as a representation on the generator models.
    pub fn tensor_module(&self, alg: &TriangularAlgebra, m: &CoreModule) -> Representation {
        let field = alg.field();
        let md = m.dim();
        let im = Matrix::identity(field, md);
        let mut modules = Vec::with_capacity(alg.n());
        let mut contractions = Vec::with_capacity(alg.n());
        let mut sections = Vec::with_capacity(alg.n());
        for v in 0..alg.n() {
            let c = self.contraction(v, m);
            let s = self.generator_cols(v).kron(&im);
            let act = c
                .matmul(&self.rep.modules[v].action().kron(&im))
                .matmul(&s);
            modules.push(CoreModule::new(act));
            contractions.push(c);
            sections.push(s);
        }
        let mut maps = BTreeMap::new();
        for (&(i, j), b) in alg.arrows() {
            let rr = b.right_rank();
            let plain = self.rep.map(i, j).matmul(
                &Matrix::identity(field, rr).kron(&self.generator_cols(j)),
            );
            maps.insert((i, j), contractions[i].matmul(&plain.kron(&im)));
        }
        Representation { modules, maps }
    }

    /// The evaluation of the tensor representation against `x` at a vertex:
    /// each generator column acts by composing structure-map blocks along
    /// its chain.
    pub fn ev_map(&self, x: &Representation, v: usize) -> Matrix {
        let field = x.module(v).field();
        let xt = x.module(self.vertex).dim();
        let xv = x.module(v).dim();
        let sv = self.right_rank(v);
        let mut ev = Matrix::zero(field, xv, sv * xt);
        let mut pi = 0;
        for block in &self.layout[v] {
            let m = block.sizes.len() - 1;
            let mut tuple = vec![0usize; m];
            loop {
                let mut acc = Matrix::identity(field, xv);
                for (s, &r) in tuple.iter().enumerate() {
                    let (a, bvert) = (block.chain[s], block.chain[s + 1]);
                    acc = acc.matmul(&col_block(x.map(a, bvert), r, x.module(bvert).dim()));
                }
                ev.set_block(0, pi * xt, &acc);
                pi += 1;
                // Odometer over the prefix tuple.
                let mut pos = m;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    tuple[pos] += 1;
                    if tuple[pos] < block.sizes[pos] {
                        break;
                    }
                    tuple[pos] = 0;
                }
                if tuple.iter().all(|&r| r == 0) {
                    break;
                }
            }
        }
        ev
    }

    /// Right multiplication of the free generators by the right basis
    /// elements of an outgoing arrow bimodule, in plain coordinates of the
    /// target projective: appends one index to the chain tuple.
    pub fn append_map(
        &self,
        target: &ProjectiveData,
        arrow: (usize, usize),
        b: &Bimodule,
        v: usize,
    ) -> Matrix {
        let field = self.rep.modules[v].field();
        let rr = b.right_rank();
        let si = self.right_rank(v);
        let pj = target.rep.modules[v].dim();
        let mut m = Matrix::zero(field, pj, si * rr);
        let mut pi = 0;
        for block in &self.layout[v] {
            let mut target_chain = block.chain.clone();
            target_chain.push(arrow.1);
            let tb = target
                .layout[v]
                .iter()
                .find(|cb| cb.chain == target_chain)
                .expect("appended chain exists");
            let cj = *tb.sizes.last().unwrap();
            for p in 0..block.prefix_count() {
                for r in 0..rr {
                    let row = tb.offset + (p * rr + r) * cj;
                    m.set(row, pi * rr + r, field.one());
                }
                pi += 1;
            }
        }
        m
    }
}

/// The dual of a representation of the opposite algebra, as a
/// representation of the original: vertex components are dual spaces in
/// reversed vertex order, and each structure-map block is the transpose of
/// the opposite-side action assembled through the left dual basis.
pub fn dual_rep(
    alg: &TriangularAlgebra,
    op: &TriangularAlgebra,
    y: &Representation,
) -> Representation {
    let field = alg.field();
    let n = alg.n();
    let rev = |v: usize| n - 1 - v;
    let modules: Vec<CoreModule> = (0..n)
        .map(|v| CoreModule::new(y.module(rev(v)).action().transpose()))
        .collect();
    let mut maps = BTreeMap::new();
    for (&(i, j), b) in alg.arrows() {
        let phi_op = y.map(rev(j), rev(i));
        let y_src = y.module(rev(i));
        let rr = b.right_rank();
        let lr = b.left_rank();
        let mut blocks = Vec::with_capacity(rr);
        for r in 0..rr {
            let rcol = Matrix::from_cols(field, b.dim(), vec![b.right_basis().col(r)]);
            let mut mr = Matrix::zero(field, y.module(rev(j)).dim(), y_src.dim());
            for l in 0..lr {
                let coeff = b.left_dual(l).matmul(&rcol);
                let act = poly_action(y_src.action(), &coeff.col(0));
                mr = mr.add(&col_block(phi_op, l, y_src.dim()).matmul(&act));
            }
            blocks.push(mr.transpose());
        }
        let m = if blocks.is_empty() {
            Matrix::zero(field, modules[i].dim(), 0)
        } else {
            Matrix::hstack(field, &blocks)
        };
        maps.insert((i, j), m);
    }
    let _ = op;
    Representation { modules, maps }
}

/// The indecomposable injective at a vertex: the dual of the opposite
/// algebra's projective at the mirrored vertex.
pub fn injective(alg: &TriangularAlgebra, v: usize) -> Representation {
    let op = alg.opposite();
    let p = ProjectiveData::new(&op, alg.n() - 1 - v);
    dual_rep(alg, &op, p.rep())
}
