//! Triangular matrix algebras: truncated polynomial cores on the diagonal,
//! bifree arrow bimodules off the diagonal, stored sinks-first (every arrow
//! points from a larger vertex to a smaller one).
//!
//! The algebra is a tensor algebra over its cores, so it is determined by
//! the cores and the arrow bimodules; path spaces between vertices are
//! derived data, enumerated by ascending vertex chains.
//!
//! The key structural operation is [`TriangularAlgebra::rotate`]: reflect at
//! the sink `0` and cycle the labels, replacing each arrow bimodule at the
//! sink by its mirror dual.  Because mirror duality is an involution on
//! string data, `n` rotations return the identical algebra, which is what
//! lets Coxeter functors land in the original category on the nose.

use crate::bimod::{BimodError, Bimodule, StringParams};
use crate::cartan::{CartanError, CartanMatrix, Quiver};
use crate::field::Field;
use crate::frobcore::{CoreModule, FrobeniusCore};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TriangError {
    #[error("underlying diagram is not connected")]
    NotConnected,
    #[error("arrow ({0},{1}) violates the sinks-first order")]
    NotSinksFirst(usize, usize),
    #[error("core at vertex {0} must be a truncated polynomial ring of dimension d_{0}")]
    CoreMismatch(usize),
    #[error("bimodule at ({0},{1}) has rank ({2},{3}) but the Cartan matrix requires ({4},{5})")]
    RankMismatch(usize, usize, usize, usize, usize, usize),
    #[error("bimodule at ({0},{1}) is not free over the expected cores")]
    NotBifreeAt(usize, usize),
    #[error("rotation requires string provenance on every arrow at the sink")]
    NeedsStrings,
    #[error(transparent)]
    Bimod(#[from] BimodError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Bookkeeping for one rotation step: which arrows at the sink flipped, and
/// the string parameters of the original bimodules (needed to transport
/// structure maps across the reflection).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationStep {
    pub n: usize,
    pub rotated: Vec<RotatedArrow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RotatedArrow {
    /// Old arrow was `(0, old_source)`.
    pub old_source: usize,
    /// New arrow is `(old_source - 1, n - 1)`.
    pub new_target: usize,
    /// String parameters of the original sink bimodule.
    pub params: StringParams,
    /// Truncation of the pivot core (old vertex 0).
    pub pivot_trunc: u64,
    /// Truncation of the other core.
    pub other_trunc: u64,
}

/// A connected triangular matrix algebra over truncated polynomial cores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularAlgebra {
    field: Field,
    cores: Vec<FrobeniusCore>,
    /// Key `(i, j)` with `i < j` is the arrow `j -> i`; the bimodule has the
    /// core at `i` on the left and the core at `j` on the right.
    arrows: BTreeMap<(usize, usize), Bimodule>,
    cartan: CartanMatrix,
}

impl TriangularAlgebra {
    /// Assembles and validates an algebra from parts.
    pub fn from_parts(
        field: Field,
        cores: Vec<FrobeniusCore>,
        arrows: BTreeMap<(usize, usize), Bimodule>,
        cartan: CartanMatrix,
    ) -> Result<TriangularAlgebra, TriangError> {
        let alg = TriangularAlgebra { field, cores, arrows, cartan };
        alg.validate()?;
        Ok(alg)
    }

    /// The weighted tensor algebra of a symmetrizable Cartan matrix with the
    /// orientation induced by the vertex order (edges point from larger to
    /// smaller index).  Arrow `(i, j)` carries `gcd(|c_ij|, |c_ji|)` strings
    /// with `a_bound = |c_ji|/gcd` and `carry = |c_ij|/gcd`.
    pub fn weighted(field: Field, cartan: &CartanMatrix) -> Result<TriangularAlgebra, TriangError> {
        let n = cartan.n();
        let cores: Vec<FrobeniusCore> =
            (0..n).map(|i| FrobeniusCore::truncated_poly(field, cartan.d(i))).collect();
        let mut arrows = BTreeMap::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let cij = cartan.entry(i, j).unsigned_abs() as usize;
                let cji = cartan.entry(j, i).unsigned_abs() as usize;
                if cij == 0 {
                    continue;
                }
                let g = gcd(cij, cji);
                let params = StringParams { count: g, a_bound: cji / g, carry: cij / g };
                let b = Bimodule::string(field, params, cartan.d(i), cartan.d(j))?;
                arrows.insert((i, j), b);
            }
        }
        TriangularAlgebra::from_parts(field, cores, arrows, cartan.clone())
    }

    /// The path algebra of an acyclic quiver with every vertex carrying the
    /// same core `k[x]/(x^c)`; each arrow contributes one string summand of
    /// the core itself.
    pub fn path_algebra_over_core(
        field: Field,
        quiver: &Quiver,
        c: u64,
    ) -> Result<TriangularAlgebra, TriangError> {
        if !quiver.is_sinks_first() {
            let &(t, s) = quiver
                .arrows
                .iter()
                .find(|&&(t, s)| t >= s)
                .expect("some arrow violates the order");
            return Err(TriangError::NotSinksFirst(t, s));
        }
        let n = quiver.n;
        let mut rows = vec![vec![0i64; n]; n];
        for v in 0..n {
            rows[v][v] = 2;
        }
        for &(t, s) in &quiver.arrows {
            rows[t][s] -= 1;
            rows[s][t] -= 1;
        }
        let cartan = CartanMatrix::new(rows, vec![c; n])?;
        let cores: Vec<FrobeniusCore> =
            (0..n).map(|_| FrobeniusCore::truncated_poly(field, c)).collect();
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(t, s) in &quiver.arrows {
            *counts.entry((t, s)).or_insert(0) += 1;
        }
        let mut arrows = BTreeMap::new();
        for ((i, j), m) in counts {
            let b = Bimodule::string(field, StringParams { count: m, a_bound: 1, carry: 1 }, c, c)?;
            arrows.insert((i, j), b);
        }
        TriangularAlgebra::from_parts(field, cores, arrows, cartan)
    }

    /// The generalized path algebra of an acyclic quiver with vertex cores
    /// `k[x]/(x^{d_v})`; each arrow contributes a full tensor product of the
    /// two cores.
    pub fn generalized_path_algebra(
        field: Field,
        quiver: &Quiver,
        d: &[u64],
    ) -> Result<TriangularAlgebra, TriangError> {
        if !quiver.is_sinks_first() {
            let &(t, s) = quiver
                .arrows
                .iter()
                .find(|&&(t, s)| t >= s)
                .expect("some arrow violates the order");
            return Err(TriangError::NotSinksFirst(t, s));
        }
        let cartan = CartanMatrix::from_quiver(quiver, d)?;
        let cores: Vec<FrobeniusCore> =
            (0..quiver.n).map(|v| FrobeniusCore::truncated_poly(field, d[v])).collect();
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &(t, s) in &quiver.arrows {
            *counts.entry((t, s)).or_insert(0) += 1;
        }
        let mut arrows = BTreeMap::new();
        for ((i, j), m) in counts {
            let params = StringParams {
                count: m,
                a_bound: d[i] as usize,
                carry: d[j] as usize,
            };
            arrows.insert((i, j), Bimodule::string(field, params, d[i], d[j])?);
        }
        TriangularAlgebra::from_parts(field, cores, arrows, cartan)
    }

    pub fn n(&self) -> usize {
        self.cores.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn core(&self, v: usize) -> &FrobeniusCore {
        &self.cores[v]
    }

    /// Truncation exponent of the core at `v`.
    pub fn trunc(&self, v: usize) -> u64 {
        self.cores[v].truncation().expect("cores are truncated polynomial rings")
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn arrow(&self, i: usize, j: usize) -> Option<&Bimodule> {
        self.arrows.get(&(i, j))
    }

    pub fn arrows(&self) -> impl Iterator<Item = (&(usize, usize), &Bimodule)> {
        self.arrows.iter()
    }

    /// Arrow keys `(v, j)` for arrows pointing into `v`.
    pub fn arrows_into(&self, v: usize) -> Vec<(usize, usize)> {
        self.arrows.keys().copied().filter(|&(i, _)| i == v).collect()
    }

    /// Arrow keys `(i, v)` for arrows leaving `v`.
    pub fn arrows_out_of(&self, v: usize) -> Vec<(usize, usize)> {
        self.arrows.keys().copied().filter(|&(_, j)| j == v).collect()
    }

    /// Structural validation: connectivity, sinks-first keys, bimodule
    /// invariants, and Cartan consistency via honestly computed free ranks.
    pub fn validate(&self) -> Result<(), TriangError> {
        let n = self.n();
        assert!(n >= 1, "empty algebra");
        if !self.cartan.is_connected() {
            return Err(TriangError::NotConnected);
        }
        for (v, core) in self.cores.iter().enumerate() {
            if core.truncation() != Some(self.cartan.d(v)) {
                return Err(TriangError::CoreMismatch(v));
            }
        }
        for (&(i, j), b) in &self.arrows {
            if i >= j || j >= n {
                return Err(TriangError::NotSinksFirst(i, j));
            }
            if b.left_trunc() != self.trunc(i) || b.right_trunc() != self.trunc(j) {
                return Err(TriangError::CoreMismatch(i));
            }
            b.validate()?;
            // Honest rank computation from the actions.
            let left_free = CoreModule::new(b.left_gen().clone())
                .free_rank(&self.cores[i])
                .ok_or(TriangError::NotBifreeAt(i, j))?;
            let right_free = CoreModule::new(b.right_gen().clone())
                .free_rank(&self.cores[j])
                .ok_or(TriangError::NotBifreeAt(i, j))?;
            let expect_left = self.cartan.entry(i, j).unsigned_abs() as usize;
            let expect_right = self.cartan.entry(j, i).unsigned_abs() as usize;
            if left_free != expect_left
                || right_free != expect_right
                || b.left_rank() != expect_left
                || b.right_rank() != expect_right
            {
                return Err(TriangError::RankMismatch(
                    i,
                    j,
                    left_free,
                    right_free,
                    expect_left,
                    expect_right,
                ));
            }
        }
        // Cartan zero entries must match missing arrows.
        for i in 0..n {
            for j in (i + 1)..n {
                let has_edge = self.cartan.entry(i, j) != 0;
                if has_edge != self.arrows.contains_key(&(i, j)) {
                    return Err(TriangError::RankMismatch(i, j, 0, 0, 0, 0));
                }
            }
        }
        Ok(())
    }

    /// Ascending vertex chains `v = k_0 < k_1 < ... < k_m = t` following
    /// arrows `(k_{s-1}, k_s)`; the recursion branches in ascending order of
    /// the next vertex, which fixes a deterministic chain order.
    pub fn chains(&self, v: usize, t: usize) -> Vec<Vec<usize>> {
        if v == t {
            return vec![vec![t]];
        }
        if v > t {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (i, j) in self.arrows_into(v) {
            debug_assert_eq!(i, v);
            for mut chain in self.chains(j, t) {
                chain.insert(0, v);
                out.push(chain);
            }
        }
        out
    }

    /// Dimension of the path space from `j` down to `i` (the `(i, j)` block
    /// of the algebra): the sum over chains of the product of right ranks of
    /// all factors but the last, times the last factor's full dimension.
    pub fn path_space_dim(&self, i: usize, j: usize) -> usize {
        if i == j {
            return self.trunc(i) as usize;
        }
        if i > j {
            return 0;
        }
        self.chains(i, j)
            .iter()
            .map(|chain| {
                let mut acc = 1usize;
                for w in chain.windows(2).take(chain.len().saturating_sub(2)) {
                    acc *= self.arrows[&(w[0], w[1])].right_rank();
                }
                let last = &chain[chain.len() - 2..];
                acc * self.arrows[&(last[0], last[1])].dim()
            })
            .sum()
    }

    /// Total dimension over the base field.
    pub fn dim(&self) -> usize {
        let n = self.n();
        let mut total = 0;
        for i in 0..n {
            for j in i..n {
                total += self.path_space_dim(i, j);
            }
        }
        total
    }

    /// Reflects at the sink `0` and relabels `v -> v - 1`, `0 -> n - 1`:
    /// arrows not at the sink shift down; each sink arrow `(0, j)` becomes
    /// `(j - 1, n - 1)` carrying the mirror dual bimodule.  Returns the new
    /// algebra and the transport bookkeeping.
    pub fn rotate(&self) -> Result<(TriangularAlgebra, RotationStep), TriangError> {
        let n = self.n();
        let mut cores: Vec<FrobeniusCore> = self.cores[1..].to_vec();
        cores.push(self.cores[0].clone());
        // Relabel the Cartan data: old v -> (v + n - 1) mod n.
        let relabel = |v: usize| (v + n - 1) % n;
        let mut rows = vec![vec![0i64; n]; n];
        let mut d = vec![0u64; n];
        for u in 0..n {
            d[relabel(u)] = self.cartan.d(u);
            for v in 0..n {
                rows[relabel(u)][relabel(v)] = self.cartan.entry(u, v);
            }
        }
        let cartan = CartanMatrix::new(rows, d)?;
        let mut arrows = BTreeMap::new();
        let mut rotated = Vec::new();
        for (&(i, j), b) in &self.arrows {
            if i > 0 {
                arrows.insert((i - 1, j - 1), b.clone());
            } else {
                let params = b.strings().ok_or(TriangError::NeedsStrings)?;
                arrows.insert((j - 1, n - 1), b.dual_left()?);
                rotated.push(RotatedArrow {
                    old_source: j,
                    new_target: j - 1,
                    params,
                    pivot_trunc: b.left_trunc(),
                    other_trunc: b.right_trunc(),
                });
            }
        }
        let alg = TriangularAlgebra::from_parts(self.field, cores, arrows, cartan)?;
        Ok((alg, RotationStep { n, rotated }))
    }

    /// The opposite algebra: vertices reversed (`v -> n - 1 - v`), every
    /// bimodule with its two actions exchanged.
    pub fn opposite(&self) -> TriangularAlgebra {
        let n = self.n();
        let rev = |v: usize| n - 1 - v;
        let cores: Vec<FrobeniusCore> = (0..n).map(|v| self.cores[rev(v)].clone()).collect();
        let mut rows = vec![vec![0i64; n]; n];
        let mut d = vec![0u64; n];
        for u in 0..n {
            d[rev(u)] = self.cartan.d(u);
            for v in 0..n {
                rows[rev(u)][rev(v)] = self.cartan.entry(u, v);
            }
        }
        let cartan = CartanMatrix::new(rows, d).expect("relabeling preserves validity");
        let mut arrows = BTreeMap::new();
        for (&(i, j), b) in &self.arrows {
            arrows.insert((rev(j), rev(i)), b.swap_sides());
        }
        TriangularAlgebra::from_parts(self.field, cores, arrows, cartan)
            .expect("opposite of a valid algebra is valid")
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn b2() -> TriangularAlgebra {
        TriangularAlgebra::weighted(q(), &CartanMatrix::type_b(2)).unwrap()
    }

    fn g2() -> TriangularAlgebra {
        TriangularAlgebra::weighted(q(), &CartanMatrix::type_g2()).unwrap()
    }

    #[test]
    fn weighted_b2_shapes() {
        let alg = b2();
        assert_eq!(alg.n(), 2);
        assert_eq!((alg.trunc(0), alg.trunc(1)), (2, 1));
        let b = alg.arrow(0, 1).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!((b.left_rank(), b.right_rank()), (1, 2));
        assert_eq!(alg.dim(), 5);
        alg.validate().unwrap();
    }

    #[test]
    fn weighted_g2_shapes() {
        let alg = g2();
        assert_eq!((alg.trunc(0), alg.trunc(1)), (3, 1));
        let b = alg.arrow(0, 1).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!((b.left_rank(), b.right_rank()), (1, 3));
        assert_eq!(alg.dim(), 3 + 1 + 3);
    }

    #[test]
    fn linear_a3_path_algebra_dimension() {
        let quiver = Quiver::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let alg = TriangularAlgebra::path_algebra_over_core(q(), &quiver, 1).unwrap();
        assert_eq!(alg.dim(), 6);
        assert_eq!(alg.chains(0, 2), vec![vec![0, 1, 2]]);
        assert_eq!(alg.path_space_dim(0, 2), 1);
        // With a core of size 2 every path space doubles... and the tensor
        // over the middle core keeps one copy: dim = 3*2 + 3*2 = 12.
        let alg2 = TriangularAlgebra::path_algebra_over_core(q(), &quiver, 2).unwrap();
        assert_eq!(alg2.dim(), 12);
    }

    #[test]
    fn commutative_square_has_two_chains() {
        // Arrows 3 -> 1 -> 0 and 3 -> 2 -> 0.
        let quiver = Quiver::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let alg = TriangularAlgebra::path_algebra_over_core(q(), &quiver, 1).unwrap();
        assert_eq!(alg.chains(0, 3).len(), 2);
        assert_eq!(alg.path_space_dim(0, 3), 2);
        // 4 vertices + 4 arrows + 2 paths of length 2.
        assert_eq!(alg.dim(), 10);
    }

    #[test]
    fn kronecker_algebra() {
        let quiver = Quiver::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let alg = TriangularAlgebra::path_algebra_over_core(q(), &quiver, 1).unwrap();
        let b = alg.arrow(0, 1).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!((b.left_rank(), b.right_rank()), (2, 2));
        assert_eq!(alg.cartan().entry(0, 1), -2);
    }

    #[test]
    fn generalized_path_algebra_full_tensor() {
        let quiver = Quiver::new(2, vec![(0, 1)]).unwrap();
        let alg = TriangularAlgebra::generalized_path_algebra(q(), &quiver, &[2, 3]).unwrap();
        let b = alg.arrow(0, 1).unwrap();
        assert_eq!(b.dim(), 6);
        assert_eq!((b.left_rank(), b.right_rank()), (3, 2));
        assert_eq!(alg.cartan().entry(0, 1), -3);
        assert_eq!(alg.cartan().entry(1, 0), -2);
    }

    #[test]
    fn rotation_cycles_back_to_identical_data() {
        for (alg, n) in [
            (b2(), 2usize),
            (g2(), 2),
            (TriangularAlgebra::weighted(q(), &CartanMatrix::type_a(3)).unwrap(), 3),
            (
                TriangularAlgebra::weighted(q(), &CartanMatrix::type_f4()).unwrap(),
                4,
            ),
        ] {
            let mut cur = alg.clone();
            for _ in 0..n {
                let (next, _) = cur.rotate().unwrap();
                next.validate().unwrap();
                cur = next;
            }
            assert_eq!(cur, alg, "rotations failed to close up");
        }
    }

    #[test]
    fn single_rotation_of_b2() {
        let (rot, step) = b2().rotate().unwrap();
        assert_eq!((rot.trunc(0), rot.trunc(1)), (1, 2));
        let b = rot.arrow(0, 1).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!((b.left_rank(), b.right_rank()), (2, 1));
        assert_eq!(step.rotated.len(), 1);
        assert_eq!(step.rotated[0].old_source, 1);
        assert_eq!(step.rotated[0].new_target, 0);
        assert_eq!(step.rotated[0].pivot_trunc, 2);
    }

    #[test]
    fn opposite_swaps_everything() {
        let alg = b2();
        let op = alg.opposite();
        op.validate().unwrap();
        assert_eq!((op.trunc(0), op.trunc(1)), (1, 2));
        let b = op.arrow(0, 1).unwrap();
        assert_eq!((b.left_rank(), b.right_rank()), (2, 1));
        // Double opposite restores the actions and the Cartan data.
        let opop = alg.opposite().opposite();
        assert_eq!(opop.cartan(), alg.cartan());
        for (k, b) in alg.arrows() {
            let bb = opop.arrow(k.0, k.1).unwrap();
            assert_eq!(bb.left_gen(), b.left_gen());
            assert_eq!(bb.right_gen(), b.right_gen());
        }
    }

    #[test]
    fn disconnected_input_rejected() {
        let c = CartanMatrix::new(
            vec![vec![2, 0], vec![0, 2]],
            vec![1, 1],
        )
        .unwrap();
        assert!(matches!(
            TriangularAlgebra::weighted(q(), &c),
            Err(TriangError::NotConnected)
        ));
    }

    #[test]
    fn misordered_quiver_rejected() {
        let quiver = Quiver::new(2, vec![(1, 0)]).unwrap();
        assert!(matches!(
            TriangularAlgebra::path_algebra_over_core(q(), &quiver, 1),
            Err(TriangError::NotSinksFirst(1, 0))
        ));
    }
}
