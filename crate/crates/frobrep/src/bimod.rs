//! Arrow bimodules between truncated polynomial cores.
//!
//! Every bimodule here is free as a left module and free as a right module
//! ("bifree"), and carries explicit free bases with dual functionals on both
//! sides.  The builders produce "string" bimodules: direct sums of `count`
//! identical strings with basis `(s, a, b)` (`a < a_bound`, `b < right
//! truncation`), where the left generator advances `a` and wraps by adding
//! `carry` to `b`, and the right generator advances `b`.  String form gives
//! closed-form bases, closed-form left duals, and an explicit mirror
//! construction for the dual over the left core — no linear solves and, for
//! the double dual, literal data equality.

use crate::field::{Field, Scalar};
use crate::frobcore::{CoreModule, FrobeniusCore};
use crate::matrix::Matrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BimodError {
    #[error("string parameters are inconsistent: need carry | right truncation and a_bound * right = left * carry (got count={count}, a_bound={a_bound}, carry={carry}, left={left}, right={right})")]
    BadStringParams { count: usize, a_bound: usize, carry: usize, left: u64, right: u64 },
    #[error("generator action is not nilpotent of the required order on the {0} side")]
    NotNilpotent(&'static str),
    #[error("left and right actions do not commute")]
    NotCommuting,
    #[error("bimodule is not free as a {0} module")]
    NotBifree(&'static str),
    #[error("operation requires string provenance")]
    NeedsStringProvenance,
    #[error("dual basis data is inconsistent on the {0} side")]
    BadDualBasis(&'static str),
}

/// `sum_p coords[p] * gen^p` — the action of a polynomial in a generator.
pub fn poly_action(gen: &Matrix, coords: &[Scalar]) -> Matrix {
    let n = gen.rows();
    let mut acc = Matrix::zero(gen.field(), n, n);
    let mut power = Matrix::identity(gen.field(), n);
    for c in coords {
        if !c.is_zero() {
            acc = acc.add(&power.scale(c));
        }
        power = power.matmul(gen);
    }
    acc
}

/// Parameters of a string-form bimodule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StringParams {
    /// Number of parallel strings.
    pub count: usize,
    /// Length of the `a`-coordinate; the right rank is `count * a_bound`.
    pub a_bound: usize,
    /// Carry added to `b` when `a` wraps; the left rank is `count * carry`.
    pub carry: usize,
}

/// A bimodule over truncated polynomial cores `k[x]/(x^left_trunc)` (acting
/// on the left) and `k[x]/(x^right_trunc)` (acting on the right), free on
/// both sides, with chosen free bases and dual functionals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bimodule {
    field: Field,
    left_trunc: u64,
    right_trunc: u64,
    dim: usize,
    left_gen: Matrix,
    right_gen: Matrix,
    /// Columns: a left free basis (`dim x left_rank`).
    left_basis: Matrix,
    /// `left_dual[l]` maps a bimodule vector to the left-core coordinates of
    /// its `l`-th coefficient (`left_trunc x dim` each).
    left_dual: Vec<Matrix>,
    right_basis: Matrix,
    right_dual: Vec<Matrix>,
    strings: Option<StringParams>,
}

impl Bimodule {
    /// Builds the string bimodule with the given parameters.
    pub fn string(
        field: Field,
        params: StringParams,
        left_trunc: u64,
        right_trunc: u64,
    ) -> Result<Bimodule, BimodError> {
        let StringParams { count, a_bound, carry } = params;
        let cj = right_trunc as usize;
        let ci = left_trunc as usize;
        let consistent = count >= 1
            && a_bound >= 1
            && carry >= 1
            && carry <= cj
            && cj % carry == 0
            && a_bound * cj == ci * carry;
        if !consistent {
            return Err(BimodError::BadStringParams {
                count,
                a_bound,
                carry,
                left: left_trunc,
                right: right_trunc,
            });
        }
        let dim = count * a_bound * cj;
        let flat = |s: usize, a: usize, b: usize| s * a_bound * cj + a * cj + b;

        let mut left_gen = Matrix::zero(field, dim, dim);
        let mut right_gen = Matrix::zero(field, dim, dim);
        for s in 0..count {
            for a in 0..a_bound {
                for b in 0..cj {
                    if a + 1 < a_bound {
                        left_gen.set(flat(s, a + 1, b), flat(s, a, b), field.one());
                    } else if b + carry < cj {
                        left_gen.set(flat(s, 0, b + carry), flat(s, a, b), field.one());
                    }
                    if b + 1 < cj {
                        right_gen.set(flat(s, a, b + 1), flat(s, a, b), field.one());
                    }
                }
            }
        }

        // Right free generators (s, a, 0), ordered s-major then a.
        let right_rank = count * a_bound;
        let mut right_basis = Matrix::zero(field, dim, right_rank);
        let mut right_dual = Vec::with_capacity(right_rank);
        for s in 0..count {
            for a in 0..a_bound {
                let r = s * a_bound + a;
                right_basis.set(flat(s, a, 0), r, field.one());
                let mut d = Matrix::zero(field, cj, dim);
                for b in 0..cj {
                    d.set(b, flat(s, a, b), field.one());
                }
                right_dual.push(d);
            }
        }

        // Left free generators (s, 0, b) for b < carry, ordered s-major.
        let left_rank = count * carry;
        let mut left_basis = Matrix::zero(field, dim, left_rank);
        let mut left_dual = Vec::with_capacity(left_rank);
        for s in 0..count {
            for b in 0..carry {
                let l = s * carry + b;
                left_basis.set(flat(s, 0, b), l, field.one());
                let mut d = Matrix::zero(field, ci, dim);
                for a in 0..a_bound {
                    for b0 in (0..cj).filter(|b0| b0 % carry == b) {
                        let exponent = a + (b0 / carry) * a_bound;
                        debug_assert!(exponent < ci);
                        d.set(exponent, flat(s, a, b0), field.one());
                    }
                }
                left_dual.push(d);
            }
        }

        let bm = Bimodule {
            field,
            left_trunc,
            right_trunc,
            dim,
            left_gen,
            right_gen,
            left_basis,
            left_dual,
            right_basis,
            right_dual,
            strings: Some(params),
        };
        bm.validate()?;
        Ok(bm)
    }

    /// Builds a bimodule from explicit generator actions, extracting free
    /// bases and dual functionals by linear algebra.  Fails unless the
    /// actions commute, are nilpotent of the right orders, and the module is
    /// free on both sides.
    pub fn from_actions(
        field: Field,
        left_trunc: u64,
        right_trunc: u64,
        left_gen: Matrix,
        right_gen: Matrix,
    ) -> Result<Bimodule, BimodError> {
        let dim = left_gen.rows();
        assert_eq!(left_gen.cols(), dim);
        assert_eq!((right_gen.rows(), right_gen.cols()), (dim, dim));
        if !left_gen.pow(left_trunc).is_zero() {
            return Err(BimodError::NotNilpotent("left"));
        }
        if !right_gen.pow(right_trunc).is_zero() {
            return Err(BimodError::NotNilpotent("right"));
        }
        if left_gen.matmul(&right_gen) != right_gen.matmul(&left_gen) {
            return Err(BimodError::NotCommuting);
        }
        let left_core = FrobeniusCore::truncated_poly(field, left_trunc);
        let right_core = FrobeniusCore::truncated_poly(field, right_trunc);
        let extract = |gen: &Matrix,
                       core: &FrobeniusCore,
                       side: &'static str|
         -> Result<(Matrix, Vec<Matrix>), BimodError> {
            let module = CoreModule::new(gen.clone());
            let full = module.free_basis(core).ok_or(BimodError::NotBifree(side))?;
            let c = core.dim();
            let rank = full.cols() / c;
            let generators: Vec<usize> = (0..rank).map(|s| s * c).collect();
            let basis = full.select_cols(&generators);
            let inv = full.inverse().expect("free basis is invertible");
            let duals = (0..rank)
                .map(|s| inv.select_rows(&(s * c..(s + 1) * c).collect::<Vec<_>>()))
                .collect();
            Ok((basis, duals))
        };
        let (left_basis, left_dual) = extract(&left_gen, &left_core, "left")?;
        let (right_basis, right_dual) = extract(&right_gen, &right_core, "right")?;
        let bm = Bimodule {
            field,
            left_trunc,
            right_trunc,
            dim,
            left_gen,
            right_gen,
            left_basis,
            left_dual,
            right_basis,
            right_dual,
            strings: None,
        };
        bm.validate()?;
        Ok(bm)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_trunc(&self) -> u64 {
        self.left_trunc
    }

    pub fn right_trunc(&self) -> u64 {
        self.right_trunc
    }

    pub fn left_rank(&self) -> usize {
        self.left_basis.cols()
    }

    pub fn right_rank(&self) -> usize {
        self.right_basis.cols()
    }

    pub fn strings(&self) -> Option<StringParams> {
        self.strings
    }

    pub fn left_gen(&self) -> &Matrix {
        &self.left_gen
    }

    pub fn right_gen(&self) -> &Matrix {
        &self.right_gen
    }

    pub fn left_basis(&self) -> &Matrix {
        &self.left_basis
    }

    pub fn right_basis(&self) -> &Matrix {
        &self.right_basis
    }

    pub fn left_dual(&self, l: usize) -> &Matrix {
        &self.left_dual[l]
    }

    pub fn right_dual(&self, r: usize) -> &Matrix {
        &self.right_dual[r]
    }

    /// Action of a left-core element given by coordinates.
    pub fn left_element_action(&self, coords: &[Scalar]) -> Matrix {
        assert_eq!(coords.len(), self.left_trunc as usize);
        poly_action(&self.left_gen, coords)
    }

    /// Action of a right-core element given by coordinates.
    pub fn right_element_action(&self, coords: &[Scalar]) -> Matrix {
        assert_eq!(coords.len(), self.right_trunc as usize);
        poly_action(&self.right_gen, coords)
    }

    /// Full structural validation: nilpotency, commutation, dual linearity,
    /// and the two-sided dual-basis identities.
    pub fn validate(&self) -> Result<(), BimodError> {
        if !self.left_gen.pow(self.left_trunc).is_zero() {
            return Err(BimodError::NotNilpotent("left"));
        }
        if !self.right_gen.pow(self.right_trunc).is_zero() {
            return Err(BimodError::NotNilpotent("right"));
        }
        if self.left_gen.matmul(&self.right_gen) != self.right_gen.matmul(&self.left_gen) {
            return Err(BimodError::NotCommuting);
        }
        let nl = shift_matrix(self.field, self.left_trunc as usize);
        let nr = shift_matrix(self.field, self.right_trunc as usize);
        for d in &self.left_dual {
            if d.matmul(&self.left_gen) != nl.matmul(d) {
                return Err(BimodError::BadDualBasis("left"));
            }
        }
        for d in &self.right_dual {
            if d.matmul(&self.right_gen) != nr.matmul(d) {
                return Err(BimodError::BadDualBasis("right"));
            }
        }
        if !self.dual_basis_identity_left() {
            return Err(BimodError::BadDualBasis("left"));
        }
        if !self.dual_basis_identity_right() {
            return Err(BimodError::BadDualBasis("right"));
        }
        Ok(())
    }

    /// `b = sum_l (left action of l*(b)) . l` for every vector `b`,
    /// verified as a matrix identity.
    pub fn dual_basis_identity_left(&self) -> bool {
        let mut acc = Matrix::zero(self.field, self.dim, self.dim);
        for (l, dual) in self.left_dual.iter().enumerate() {
            // Column contribution: act(l*(e_v)) applied to basis vector l.
            // Reassemble as sum over powers p of (gen^p basis_l) x dual_row_p.
            let mut powered = Matrix::from_cols(self.field, self.dim, vec![self.left_basis.col(l)]);
            for p in 0..self.left_trunc as usize {
                let outer = powered.matmul(&dual.select_rows(&[p]));
                acc = acc.add(&outer);
                powered = self.left_gen.matmul(&powered);
            }
        }
        acc.is_identity()
    }

    /// `b = sum_r r . (right action of r*(b))` for every vector `b`.
    pub fn dual_basis_identity_right(&self) -> bool {
        let mut acc = Matrix::zero(self.field, self.dim, self.dim);
        for (r, dual) in self.right_dual.iter().enumerate() {
            let mut powered = Matrix::from_cols(self.field, self.dim, vec![self.right_basis.col(r)]);
            for p in 0..self.right_trunc as usize {
                let outer = powered.matmul(&dual.select_rows(&[p]));
                acc = acc.add(&outer);
                powered = self.right_gen.matmul(&powered);
            }
        }
        acc.is_identity()
    }

    /// The same underlying space with the two core actions exchanged (the
    /// bimodule of the opposite algebra).  The closed-form string layout
    /// does not survive the exchange, so string provenance is dropped.
    pub fn swap_sides(&self) -> Bimodule {
        Bimodule {
            field: self.field,
            left_trunc: self.right_trunc,
            right_trunc: self.left_trunc,
            dim: self.dim,
            left_gen: self.right_gen.clone(),
            right_gen: self.left_gen.clone(),
            left_basis: self.right_basis.clone(),
            left_dual: self.right_dual.clone(),
            right_basis: self.left_basis.clone(),
            right_dual: self.left_dual.clone(),
            strings: None,
        }
    }

    /// The dual over the left core, for string bimodules: the mirror string
    /// with `a_bound` and `carry` exchanged, over the swapped cores.  The
    /// identification sends the new basis vector `(s, a', b')` to the
    /// functional taking the left generator `(s, 0, b0)` to
    /// `delta(b0 = carry-1-a') x^{b'}`; the double dual is then literally
    /// the original data again.
    pub fn dual_left(&self) -> Result<Bimodule, BimodError> {
        let p = self.strings.ok_or(BimodError::NeedsStringProvenance)?;
        Bimodule::string(
            self.field,
            StringParams { count: p.count, a_bound: p.carry, carry: p.a_bound },
            self.right_trunc,
            self.left_trunc,
        )
    }

    /// The dual over the left core computed generically (model: one copy of
    /// the left core per left generator).  Used as an independent
    /// cross-check of [`Bimodule::dual_left`].
    pub fn dual_left_generic(&self) -> Result<Bimodule, BimodError> {
        let ci = self.left_trunc as usize;
        let rank = self.left_rank();
        let dim = rank * ci;
        // Right action (by the old left core) is componentwise.
        let right_gen = Matrix::identity(self.field, rank).kron(&shift_matrix(self.field, ci));
        // Left action (by the old right core): (y f)(l) = f(l y); expanding
        // l.y in the left basis gives block (l, l') = regular action of
        // l'*(l . y).
        let mut left_gen = Matrix::zero(self.field, dim, dim);
        let reg = shift_matrix(self.field, ci);
        for l in 0..rank {
            let moved = self.right_gen.matmul(&Matrix::from_cols(
                self.field,
                self.dim,
                vec![self.left_basis.col(l)],
            ));
            for lp in 0..rank {
                let coeff = self.left_dual[lp].matmul(&moved); // ci x 1
                let block = poly_action(&reg, &coeff.col(0));
                left_gen.set_block(l * ci, lp * ci, &block);
            }
        }
        Bimodule::from_actions(self.field, self.right_trunc, self.left_trunc, left_gen, right_gen)
    }

    /// The left generator action on the tensor model `B (x) X` over the
    /// right core, where the model is one copy of `X` per right basis
    /// element: block `(r', r)` is the `X`-action of `r'*(gen . r)`.
    pub fn tensor_left_action(&self, x: &CoreModule) -> Matrix {
        let rr = self.right_rank();
        let xd = x.dim();
        let mut out = Matrix::zero(self.field, rr * xd, rr * xd);
        for r in 0..rr {
            let moved = self.left_gen.matmul(&Matrix::from_cols(
                self.field,
                self.dim,
                vec![self.right_basis.col(r)],
            ));
            for rp in 0..rr {
                let coeff = self.right_dual[rp].matmul(&moved);
                let block = poly_action(x.action(), &coeff.col(0));
                out.set_block(rp * xd, r * xd, &block);
            }
        }
        out
    }

    /// The left action of the right core on the hom model `Hom(B, Y)` over
    /// the left core, where the model is one copy of `Y` per left basis
    /// element: `(y f)(l) = f(l y)` gives block `(l, l')` equal to the
    /// `Y`-action of `l'*(l . gen)`.
    pub fn hom_left_action(&self, y: &CoreModule) -> Matrix {
        let lr = self.left_rank();
        let yd = y.dim();
        let mut out = Matrix::zero(self.field, lr * yd, lr * yd);
        for l in 0..lr {
            let moved = self.right_gen.matmul(&Matrix::from_cols(
                self.field,
                self.dim,
                vec![self.left_basis.col(l)],
            ));
            for lp in 0..lr {
                let coeff = self.left_dual[lp].matmul(&moved);
                let block = poly_action(y.action(), &coeff.col(0));
                out.set_block(l * yd, lp * yd, &block);
            }
        }
        out
    }

    /// Adjunction, tensor form to hom form: given `phi : B (x) X -> Y` as a
    /// matrix on the right-basis model, returns `psi : X -> Hom(B, Y)` on
    /// the left-basis model, with `psi_l = sum_r phi_r . act_X(r*(l))`.
    pub fn to_hom_form(&self, phi: &Matrix, x: &CoreModule, y: &CoreModule) -> Matrix {
        let (rr, lr) = (self.right_rank(), self.left_rank());
        let (xd, yd) = (x.dim(), y.dim());
        assert_eq!((phi.rows(), phi.cols()), (yd, rr * xd), "phi shape");
        let mut out = Matrix::zero(self.field, lr * yd, xd);
        for l in 0..lr {
            let mut block = Matrix::zero(self.field, yd, xd);
            for r in 0..rr {
                let coeff = self.right_dual[r].matmul(&Matrix::from_cols(
                    self.field,
                    self.dim,
                    vec![self.left_basis.col(l)],
                ));
                let act = poly_action(x.action(), &coeff.col(0));
                let phi_r = phi.submatrix(0, yd, r * xd, (r + 1) * xd);
                block = block.add(&phi_r.matmul(&act));
            }
            out.set_block(l * yd, 0, &block);
        }
        out
    }

    /// Adjunction, hom form to tensor form: given `psi : X -> Hom(B, Y)` on
    /// the left-basis model, returns `phi : B (x) X -> Y` with
    /// `phi_r = sum_l act_Y(l*(r)) . psi_l`.
    pub fn to_tensor_form(&self, psi: &Matrix, x: &CoreModule, y: &CoreModule) -> Matrix {
        let (rr, lr) = (self.right_rank(), self.left_rank());
        let (xd, yd) = (x.dim(), y.dim());
        assert_eq!((psi.rows(), psi.cols()), (lr * yd, xd), "psi shape");
        let mut out = Matrix::zero(self.field, yd, rr * xd);
        for r in 0..rr {
            let mut block = Matrix::zero(self.field, yd, xd);
            for l in 0..lr {
                let coeff = self.left_dual[l].matmul(&Matrix::from_cols(
                    self.field,
                    self.dim,
                    vec![self.right_basis.col(r)],
                ));
                let act = poly_action(y.action(), &coeff.col(0));
                let psi_l = psi.submatrix(l * yd, (l + 1) * yd, 0, xd);
                block = block.add(&act.matmul(&psi_l));
            }
            out.set_block(0, r * xd, &block);
        }
        out
    }
}

/// The nilpotent shift of size `n` (regular action of the core generator).
pub fn shift_matrix(field: Field, n: usize) -> Matrix {
    let mut m = Matrix::zero(field, n, n);
    for j in 0..n.saturating_sub(1) {
        m.set(j + 1, j, field.one());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::intertwiner_space;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rationals
    }

    /// The standard catalog: string parameters arising from rank-2 Cartan
    /// data and from path algebras over a core.
    fn catalog() -> Vec<(Bimodule, &'static str)> {
        vec![
            // Simply-laced arrow over equal cores c = 2 (the core itself).
            (
                Bimodule::string(q(), StringParams { count: 1, a_bound: 1, carry: 1 }, 2, 2).unwrap(),
                "equal cores c=2",
            ),
            // Weighted arrow with cores (2, 1).
            (
                Bimodule::string(q(), StringParams { count: 1, a_bound: 2, carry: 1 }, 2, 1).unwrap(),
                "cores (2,1)",
            ),
            // Weighted arrow with cores (3, 1).
            (
                Bimodule::string(q(), StringParams { count: 1, a_bound: 3, carry: 1 }, 3, 1).unwrap(),
                "cores (3,1)",
            ),
            // Two parallel strings over trivial cores.
            (
                Bimodule::string(q(), StringParams { count: 2, a_bound: 1, carry: 1 }, 1, 1).unwrap(),
                "double arrow",
            ),
            // Tensor-of-cores string over (2, 3).
            (
                Bimodule::string(q(), StringParams { count: 1, a_bound: 2, carry: 3 }, 2, 3).unwrap(),
                "cores (2,3) full tensor",
            ),
            // Nontrivial gcd structure over (4, 2).
            (
                Bimodule::string(q(), StringParams { count: 1, a_bound: 2, carry: 1 }, 4, 2).unwrap(),
                "cores (4,2) half carry",
            ),
        ]
    }

    #[test]
    fn string_shapes_and_ranks() {
        let b = Bimodule::string(q(), StringParams { count: 1, a_bound: 2, carry: 1 }, 2, 1).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.left_rank(), 1);
        assert_eq!(b.right_rank(), 2);
        let d = b.dual_left().unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.left_rank(), 2);
        assert_eq!(d.right_rank(), 1);
    }

    #[test]
    fn bad_string_params_rejected() {
        // carry must divide the right truncation.
        assert!(Bimodule::string(q(), StringParams { count: 1, a_bound: 1, carry: 2 }, 1, 3).is_err());
        // balance condition a_bound * right = left * carry.
        assert!(Bimodule::string(q(), StringParams { count: 1, a_bound: 2, carry: 2 }, 2, 1).is_err());
    }

    #[test]
    fn catalog_validates() {
        for (b, name) in catalog() {
            b.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            // Both dual-basis identities hold on every basis vector.
            assert!(b.dual_basis_identity_left(), "{name}");
            assert!(b.dual_basis_identity_right(), "{name}");
        }
    }

    #[test]
    fn double_dual_is_literal_identity() {
        for (b, name) in catalog() {
            let dd = b.dual_left().unwrap().dual_left().unwrap();
            assert_eq!(b, dd, "{name}");
        }
    }

    #[test]
    fn mirror_dual_matches_generic_dual() {
        for (b, name) in catalog() {
            let mirror = b.dual_left().unwrap();
            let generic = b.dual_left_generic().unwrap();
            assert_eq!(mirror.dim(), generic.dim(), "{name}");
            assert_eq!(mirror.left_rank(), generic.left_rank(), "{name}");
            assert_eq!(mirror.right_rank(), generic.right_rank(), "{name}");
            // The two duals are isomorphic as bimodules: the intertwiner
            // space for both generator actions contains an invertible map.
            let space = intertwiner_space(
                q(),
                &[
                    (mirror.left_gen(), generic.left_gen()),
                    (mirror.right_gen(), generic.right_gen()),
                ],
                generic.dim(),
                mirror.dim(),
            );
            assert!(!space.is_empty(), "{name}");
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let found = (0..64).any(|_| {
                let mut acc = Matrix::zero(q(), generic.dim(), mirror.dim());
                for f in &space {
                    acc = acc.add(&f.scale(&q().from_i64(rng.gen_range(-3..=3))));
                }
                acc.inverse().is_some()
            });
            assert!(found, "{name}: no invertible intertwiner found");
        }
    }

    #[test]
    fn from_actions_recovers_string_data() {
        for (b, name) in catalog() {
            let rebuilt = Bimodule::from_actions(
                q(),
                b.left_trunc(),
                b.right_trunc(),
                b.left_gen().clone(),
                b.right_gen().clone(),
            )
            .unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(rebuilt.left_rank(), b.left_rank(), "{name}");
            assert_eq!(rebuilt.right_rank(), b.right_rank(), "{name}");
            rebuilt.validate().unwrap();
        }
    }

    #[test]
    fn non_bifree_actions_rejected() {
        // Left truncation 2 but zero left action on a 2-dimensional space:
        // not free over k[x]/(x^2).
        let z = Matrix::zero(q(), 2, 2);
        let err = Bimodule::from_actions(q(), 2, 1, z.clone(), z).unwrap_err();
        assert!(matches!(err, BimodError::NotBifree("left")));
    }

    fn random_module(rng: &mut ChaCha8Rng, c: u64, rank: usize) -> CoreModule {
        // A free module of the given rank in a scrambled basis.
        let core = FrobeniusCore::truncated_poly(q(), c);
        let free = CoreModule::free(&core, rank);
        let d = free.dim();
        loop {
            let g = Matrix::from_fn(q(), d, d, |_, _| q().from_i64(rng.gen_range(-2..=2)));
            if let Some(ginv) = g.inverse() {
                return CoreModule::new(g.matmul(free.action()).matmul(&ginv));
            }
        }
    }

    #[test]
    fn adjunction_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (b, name) in catalog() {
            let x = random_module(&mut rng, b.right_trunc(), 2);
            let y = random_module(&mut rng, b.left_trunc(), 2);
            // Model-linear maps phi: intertwine the model left action with
            // the action on Y.
            let model_act = b.tensor_left_action(&x);
            let phis = intertwiner_space(
                q(),
                &[(&model_act, y.action())],
                y.dim(),
                model_act.rows(),
            );
            assert!(!phis.is_empty(), "{name}: no linear maps at all?");
            for phi in phis.iter().take(4) {
                let psi = b.to_hom_form(phi, &x, &y);
                let back = b.to_tensor_form(&psi, &x, &y);
                assert_eq!(&back, phi, "{name}: tensor->hom->tensor");
            }
            // And the other direction: psi intertwines X with the hom model.
            let hom_act = b.hom_left_action(&y);
            let psis = intertwiner_space(
                q(),
                &[(x.action(), &hom_act)],
                hom_act.rows(),
                x.dim(),
            );
            for psi in psis.iter().take(4) {
                let phi = b.to_tensor_form(psi, &x, &y);
                let back = b.to_hom_form(&phi, &x, &y);
                assert_eq!(&back, psi, "{name}: hom->tensor->hom");
            }
            // The adjunction is a bijection between the two linear-map
            // spaces; in particular the dimensions agree.
            assert_eq!(
                phis.len(),
                intertwiner_space(q(), &[(x.action(), &hom_act)], hom_act.rows(), x.dim()).len(),
                "{name}"
            );
        }
    }

    #[test]
    fn tensor_model_action_is_nilpotent_and_commutes() {
        for (b, name) in catalog() {
            let core = FrobeniusCore::truncated_poly(q(), b.right_trunc());
            let x = CoreModule::free(&core, 2);
            let act = b.tensor_left_action(&x);
            assert!(act.pow(b.left_trunc()).is_zero(), "{name}");
            // The model is a free left module of rank right_rank * (free
            // rank of X) * (right_trunc / left_trunc ratio accounted by the
            // string balance): check freeness via the profile directly.
            let left_core = FrobeniusCore::truncated_poly(q(), b.left_trunc());
            let module = CoreModule::new(act);
            let fr = module.free_rank(&left_core);
            assert!(fr.is_some(), "{name}: tensor model not left-free");
            // dim = left_trunc * rank.
            assert_eq!(fr.unwrap() * b.left_trunc() as usize, b.right_rank() * x.dim(), "{name}");
        }
    }
}
