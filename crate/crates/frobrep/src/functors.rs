//! Reflection functors at the sink, their composites, and the translation
//! they induce on module categories.
//!
//! Reflecting at the sink `0` sends a representation of an algebra to one
//! of its rotation: the pivot component is replaced by the kernel of the
//! assembled in-map, vertex modules shift down one label, and the maps on
//! arrows at the pivot are transported through the string structure of the
//! mirrored bimodules.  Reflecting back replaces the pivot component by a
//! cokernel.  Composing all `n` sink reflections lands in the original
//! algebra on the nose; together with the sign twist this realizes the
//! translation `tau` and its inverse.

use crate::frobcore::CoreModule;
use crate::matrix::Matrix;
use crate::repcat::{col_block, Representation};
use crate::triangalg::{RotationStep, TriangError, TriangularAlgebra};
use std::collections::BTreeMap;

/// The full cycle of rotated algebras, cached so that repeated reflections
/// reuse the same bimodule data.
#[derive(Debug, Clone)]
pub struct ReflectionTower {
    levels: Vec<(TriangularAlgebra, RotationStep)>,
}

impl ReflectionTower {
    pub fn new(base: &TriangularAlgebra) -> Result<ReflectionTower, TriangError> {
        let mut levels = Vec::with_capacity(base.n());
        let mut cur = base.clone();
        for _ in 0..base.n() {
            let (next, step) = cur.rotate()?;
            levels.push((cur, step));
            cur = next;
        }
        assert_eq!(&cur, base, "rotations must close up");
        Ok(ReflectionTower { levels })
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn base(&self) -> &TriangularAlgebra {
        &self.levels[0].0
    }

    /// The algebra after `t` rotations, for `t` up to and including `n`
    /// (which wraps around to the base).
    pub fn algebra(&self, t: usize) -> &TriangularAlgebra {
        &self.levels[t % self.levels.len()].0
    }

    pub fn step(&self, t: usize) -> &RotationStep {
        &self.levels[t % self.levels.len()].1
    }
}

/// Reflects at the sink of the level-`t` algebra, producing a
/// representation of the level-`t+1` algebra.  The new source component is
/// the kernel of the assembled in-map with its induced core action.
pub fn reflect_plus(tower: &ReflectionTower, t: usize, x: &Representation) -> Representation {
    let alg = tower.algebra(t);
    let field = alg.field();
    let n = alg.n();
    let (in_map, keys) = x.in_map(alg, 0);
    let kernel = in_map.kernel_basis();
    let kdim = kernel.cols();
    let big_blocks: Vec<Matrix> = keys
        .iter()
        .map(|&(_, j)| alg.arrow(0, j).unwrap().tensor_left_action(x.module(j)))
        .collect();
    let big_act = Matrix::block_diag(field, &big_blocks);
    let induced = kernel
        .solve(&big_act.matmul(&kernel))
        .expect("kernel is invariant under the pivot core");
    let mut modules: Vec<CoreModule> = (1..n).map(|v| x.module(v).clone()).collect();
    modules.push(CoreModule::new(induced));
    let mut maps = BTreeMap::new();
    for (&(i, j), _) in alg.arrows() {
        if i > 0 {
            maps.insert((i - 1, j - 1), x.map(i, j).clone());
        }
    }
    let mut offset = 0;
    for &(_, j) in &keys {
        let b = alg.arrow(0, j).unwrap();
        let params = b.strings().expect("tower arrows carry string data");
        let xj = x.module(j).dim();
        let nj = x.module(j).action();
        let mut blocks = Vec::with_capacity(params.count * params.carry);
        for s in 0..params.count {
            let top_row = offset + (s * params.a_bound + (params.a_bound - 1)) * xj;
            let psi_top = kernel.submatrix(top_row, top_row + xj, 0, kdim);
            let mut pow = psi_top;
            for _ in 0..params.carry {
                blocks.push(pow.clone());
                pow = nj.matmul(&pow);
            }
        }
        maps.insert((j - 1, n - 1), Matrix::hstack(field, &blocks));
        offset += b.right_rank() * xj;
    }
    Representation::new(modules, maps)
}

/// Reflects a representation of the level-`t+1` algebra back to level `t`:
/// the maps out of the source are transported into a stacked column map,
/// and the new sink component is its cokernel with the descended action.
pub fn reflect_minus(tower: &ReflectionTower, t: usize, y: &Representation) -> Representation {
    let alg = tower.algebra(t);
    let field = alg.field();
    let n = alg.n();
    let keys = alg.arrows_into(0);
    let ny = y.module(n - 1).action();
    let ydim = y.module(n - 1).dim();
    let mut rows = Vec::new();
    let mut big_blocks = Vec::new();
    for &(_, j) in &keys {
        let b = alg.arrow(0, j).unwrap();
        let params = b.strings().expect("tower arrows carry string data");
        let phi = y.map(j - 1, n - 1);
        for s in 0..params.count {
            let phi_s0 = col_block(phi, s * params.carry, ydim);
            for a in 0..params.a_bound {
                rows.push(phi_s0.matmul(&ny.pow((params.a_bound - 1 - a) as u64)));
            }
        }
        big_blocks.push(b.tensor_left_action(y.module(j - 1)));
    }
    let out_map = Matrix::vstack(field, &rows);
    let big_act = Matrix::block_diag(field, &big_blocks);
    debug_assert_eq!(
        big_act.matmul(&out_map),
        out_map.matmul(ny),
        "stacked column map must intertwine the pivot action"
    );
    let (pi, sigma) = out_map.cokernel();
    let descended = pi.matmul(&big_act).matmul(&sigma);
    assert_eq!(
        descended.matmul(&pi),
        pi.matmul(&big_act),
        "pivot action must descend to the cokernel"
    );
    let mut modules = vec![CoreModule::new(descended)];
    for v in 1..n {
        modules.push(y.module(v - 1).clone());
    }
    let mut maps = BTreeMap::new();
    for (&(i, j), _) in alg.arrows() {
        if i > 0 {
            maps.insert((i, j), y.map(i - 1, j - 1).clone());
        }
    }
    let mut offset = 0;
    for &(_, j) in &keys {
        let b = alg.arrow(0, j).unwrap();
        let w = b.right_rank() * y.module(j - 1).dim();
        maps.insert((0, j), pi.submatrix(0, pi.rows(), offset, offset + w));
        offset += w;
    }
    Representation::new(modules, maps)
}

/// All `n` sink reflections in sequence; the result lives over the base
/// algebra again.
pub fn coxeter_plus(tower: &ReflectionTower, x: &Representation) -> Representation {
    let mut cur = x.clone();
    for t in 0..tower.n() {
        cur = reflect_plus(tower, t, &cur);
    }
    cur
}

/// The reverse composite of backward reflections.
pub fn coxeter_minus(tower: &ReflectionTower, y: &Representation) -> Representation {
    let mut cur = y.clone();
    for t in (0..tower.n()).rev() {
        cur = reflect_minus(tower, t, &cur);
    }
    cur
}

/// Negates every structure map; an involution, and naturally isomorphic to
/// the identity whenever the underlying graph is bipartite.
pub fn twist(alg: &TriangularAlgebra, x: &Representation) -> Representation {
    let modules: Vec<CoreModule> = (0..alg.n()).map(|v| x.module(v).clone()).collect();
    let mut maps = BTreeMap::new();
    for (&k, _) in alg.arrows() {
        maps.insert(k, x.map(k.0, k.1).neg());
    }
    Representation::new(modules, maps)
}

/// The translation: the full forward Coxeter composite followed by the
/// sign twist.
pub fn tau(tower: &ReflectionTower, x: &Representation) -> Representation {
    twist(tower.base(), &coxeter_plus(tower, x))
}

/// The inverse translation: the sign twist followed by the full backward
/// composite.
pub fn tau_minus(tower: &ReflectionTower, y: &Representation) -> Representation {
    coxeter_minus(tower, &twist(tower.base(), y))
}

/// Rank vectors along both translation orbits, walked until the orbit dies
/// or a step stops being locally free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauOrbit {
    /// Ranks of the forward translates, ending with the zero vector when
    /// the orbit terminates within the step bound.
    pub forward: Vec<Vec<i64>>,
    pub backward: Vec<Vec<i64>>,
    pub all_locally_free: bool,
    pub forward_terminated: bool,
    pub backward_terminated: bool,
}

pub fn tau_orbit(tower: &ReflectionTower, x: &Representation, max_steps: usize) -> TauOrbit {
    let alg = tower.base();
    let mut all_lf = x.is_locally_free(alg);
    let walk = |forward: bool, all_lf: &mut bool| -> (Vec<Vec<i64>>, bool) {
        let mut ranks = Vec::new();
        let mut cur = x.clone();
        let mut terminated = false;
        for _ in 0..max_steps {
            cur = if forward { tau(tower, &cur) } else { tau_minus(tower, &cur) };
            match cur.rank_vector(alg) {
                Some(r) => {
                    let dead = r.iter().all(|&v| v == 0);
                    ranks.push(r);
                    if dead {
                        terminated = true;
                        break;
                    }
                }
                None => {
                    *all_lf = false;
                    break;
                }
            }
        }
        (ranks, terminated)
    };
    let (forward, forward_terminated) = walk(true, &mut all_lf);
    let (backward, backward_terminated) = walk(false, &mut all_lf);
    TauOrbit { forward, backward, all_locally_free: all_lf, forward_terminated, backward_terminated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanMatrix;
    use crate::field::Field;
    use crate::repcat::{hom_dim, modules_isomorphic, ProjectiveData};
    use crate::weyl;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rationals
    }

    fn tower_of(c: CartanMatrix) -> ReflectionTower {
        let alg = TriangularAlgebra::weighted(q(), &c).unwrap();
        ReflectionTower::new(&alg).unwrap()
    }

    #[test]
    fn towers_close_up() {
        for c in [
            CartanMatrix::type_a(2),
            CartanMatrix::type_a(3),
            CartanMatrix::type_b(2),
            CartanMatrix::type_g2(),
        ] {
            let alg = TriangularAlgebra::weighted(q(), &c).unwrap();
            let tower = ReflectionTower::new(&alg).unwrap();
            assert_eq!(tower.algebra(tower.n()), &alg);
        }
    }

    #[test]
    fn reflecting_kills_the_pivot_simples() {
        let tower = tower_of(CartanMatrix::type_b(2));
        let e0 = Representation::vertex_simple(tower.base(), 0);
        let fwd = reflect_plus(&tower, 0, &e0);
        fwd.validate(tower.algebra(1)).unwrap();
        assert!(fwd.is_zero());
        let source_simple = Representation::vertex_simple(tower.algebra(1), 1);
        let back = reflect_minus(&tower, 0, &source_simple);
        back.validate(tower.base()).unwrap();
        assert!(back.is_zero());
    }

    #[test]
    fn reflection_shifts_projectives() {
        for c in [CartanMatrix::type_b(2), CartanMatrix::type_a(3)] {
            let tower = tower_of(c);
            for k in 1..tower.n() {
                let p = ProjectiveData::new(tower.base(), k);
                let moved = reflect_plus(&tower, 0, p.rep());
                moved.validate(tower.algebra(1)).unwrap();
                let target = ProjectiveData::new(tower.algebra(1), k - 1);
                assert!(
                    modules_isomorphic(tower.algebra(1), &moved, target.rep(), 9),
                    "reflected projective at {k}"
                );
            }
        }
    }

    #[test]
    fn rank_rule_under_surjective_in_maps() {
        for c in [CartanMatrix::type_b(2), CartanMatrix::type_g2()] {
            let tower = tower_of(c);
            let alg = tower.base();
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            let mut surjective_cases = 0;
            for _ in 0..12 {
                let x = Representation::random_locally_free(alg, &mut rng, 2);
                let (in_map, _) = x.in_map(alg, 0);
                if in_map.rank() != x.module(0).dim() {
                    continue;
                }
                surjective_cases += 1;
                let r = x.rank_vector(alg).unwrap();
                let moved = reflect_plus(&tower, 0, &x);
                moved.validate(tower.algebra(1)).unwrap();
                let got = moved
                    .rank_vector(tower.algebra(1))
                    .expect("kernel stays locally free");
                let s0 = weyl::simple_reflection(alg.cartan(), 0, &r);
                let mut want: Vec<i64> = r[1..].to_vec();
                want.push(s0[0]);
                assert_eq!(got, want, "reflected rank vector");
            }
            assert!(surjective_cases >= 4, "not enough surjective samples");
        }
    }

    #[test]
    fn reflections_are_mutually_inverse_off_the_pivot() {
        let tower = tower_of(CartanMatrix::type_b(2));
        let alg = tower.base();
        let next = tower.algebra(1);
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        let mut checked = 0;
        for _ in 0..14 {
            let x = Representation::random_locally_free(alg, &mut rng, 2);
            let (in_map, _) = x.in_map(alg, 0);
            if in_map.rank() != x.module(0).dim() {
                continue;
            }
            checked += 1;
            let round = reflect_minus(&tower, 0, &reflect_plus(&tower, 0, &x));
            round.validate(alg).unwrap();
            assert!(modules_isomorphic(alg, &round, &x, 13), "minus after plus");
        }
        assert!(checked >= 4);
        let mut checked_back = 0;
        for _ in 0..14 {
            let y = Representation::random_locally_free(next, &mut rng, 2);
            let keys = alg.arrows_into(0);
            // The backward round trip is the identity when the stacked
            // column map out of the source is injective.
            let probe = reflect_minus(&tower, 0, &y);
            let redone = reflect_plus(&tower, 0, &probe);
            let out_rank: usize = {
                let ydim = y.module(alg.n() - 1).dim();
                let mut rows = Vec::new();
                for &(_, j) in &keys {
                    let b = alg.arrow(0, j).unwrap();
                    let params = b.strings().unwrap();
                    let phi = y.map(j - 1, alg.n() - 1);
                    for s in 0..params.count {
                        let phi_s0 = col_block(phi, s * params.carry, ydim);
                        for a in 0..params.a_bound {
                            rows.push(phi_s0.matmul(
                                &y.module(alg.n() - 1)
                                    .action()
                                    .pow((params.a_bound - 1 - a) as u64),
                            ));
                        }
                    }
                }
                Matrix::vstack(q(), &rows).rank()
            };
            if out_rank != y.module(alg.n() - 1).dim() {
                continue;
            }
            checked_back += 1;
            redone.validate(next).unwrap();
            assert!(modules_isomorphic(next, &redone, &y, 13), "plus after minus");
        }
        assert!(checked_back >= 4);
    }

    #[test]
    fn coxeter_composites_kill_projectives_and_injectives() {
        for c in [CartanMatrix::type_b(2), CartanMatrix::type_a(3)] {
            let tower = tower_of(c);
            let alg = tower.base();
            for k in 0..alg.n() {
                let p = ProjectiveData::new(alg, k);
                assert!(coxeter_plus(&tower, p.rep()).is_zero(), "forward kills projective {k}");
                assert!(tau(&tower, p.rep()).is_zero());
                let i = crate::repcat::injective(alg, k);
                assert!(coxeter_minus(&tower, &i).is_zero(), "backward kills injective {k}");
                assert!(tau_minus(&tower, &i).is_zero());
            }
        }
    }

    #[test]
    fn translation_matches_the_classical_picture_in_rank_two() {
        let tower = tower_of(CartanMatrix::type_a(2));
        let alg = tower.base();
        let e1 = Representation::vertex_simple(alg, 1);
        let moved = tau(&tower, &e1);
        moved.validate(alg).unwrap();
        let e0 = Representation::vertex_simple(alg, 0);
        assert!(modules_isomorphic(alg, &moved, &e0, 17));
        let back = tau_minus(&tower, &e0);
        assert!(modules_isomorphic(alg, &back, &e1, 17));
    }

    #[test]
    fn adjunction_dimensions_agree() {
        let tower = tower_of(CartanMatrix::type_b(2));
        let alg = tower.base();
        let next = tower.algebra(1);
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..10 {
            let x = Representation::random_locally_free(alg, &mut rng, 2);
            let y = Representation::random_locally_free(next, &mut rng, 2);
            let lhs = hom_dim(alg, &reflect_minus(&tower, 0, &y), &x);
            let rhs = hom_dim(next, &y, &reflect_plus(&tower, 0, &x));
            assert_eq!(lhs, rhs, "adjunction dimension identity");
        }
    }

    #[test]
    fn twist_is_an_involution_and_trivial_on_trees() {
        let alg = TriangularAlgebra::weighted(q(), &CartanMatrix::type_a(3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let x = Representation::random_locally_free(&alg, &mut rng, 2);
        assert_eq!(twist(&alg, &twist(&alg, &x)), x);
        assert!(modules_isomorphic(&alg, &twist(&alg, &x), &x, 19));
    }

    #[test]
    fn frozen_orbit_of_the_sink_projective_over_b2() {
        let tower = tower_of(CartanMatrix::type_b(2));
        let p0 = ProjectiveData::new(tower.base(), 0);
        let orbit = tau_orbit(&tower, p0.rep(), 10);
        assert!(orbit.all_locally_free);
        assert!(orbit.forward_terminated && orbit.backward_terminated);
        assert_eq!(orbit.forward, vec![vec![0, 0]]);
        assert_eq!(orbit.backward, vec![vec![1, 2], vec![0, 0]]);
    }
}
