//! Symmetrizable generalized Cartan matrices, their quadratic forms, exact
//! definiteness classification, finite-type shape recognition, and acyclic
//! quivers with a sinks-first relabeling utility.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CartanError {
    #[error("matrix must be square and nonempty")]
    BadShape,
    #[error("diagonal entry at {0} must be 2")]
    BadDiagonal(usize),
    #[error("off-diagonal entry at ({0},{1}) must be <= 0")]
    BadSign(usize, usize),
    #[error("entries ({0},{1}) and ({1},{0}) must vanish together")]
    AsymmetricZero(usize, usize),
    #[error("symmetrizer must consist of positive integers")]
    BadSymmetrizer,
    #[error("symmetrizer does not symmetrize: d[{0}]*c[{0}][{1}] != d[{1}]*c[{1}][{0}]")]
    NotSymmetrized(usize, usize),
    #[error("quiver has a directed cycle")]
    CyclicQuiver,
    #[error("quiver arrow endpoint out of range")]
    BadArrow,
    #[error("dimension mismatch: expected {0}, got {1}")]
    SizeMismatch(usize, usize),
}

/// A symmetrizable generalized Cartan matrix together with a fixed
/// symmetrizer `D = diag(d_1, ..., d_n)`, all data exact integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanMatrix {
    n: usize,
    entries: Vec<i64>,
    symmetrizer: Vec<u64>,
}

/// Outcome of exact definiteness analysis of the symmetrized quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
}

/// Finite-type diagram shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynkinShape {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl DynkinShape {
    /// Number of positive roots of the corresponding root system.
    pub fn positive_root_count(&self) -> usize {
        match *self {
            DynkinShape::A(n) => n * (n + 1) / 2,
            DynkinShape::B(n) | DynkinShape::C(n) => n * n,
            DynkinShape::D(n) => n * (n - 1),
            DynkinShape::E(6) => 36,
            DynkinShape::E(7) => 63,
            DynkinShape::E(8) => 120,
            DynkinShape::E(_) => unreachable!("only E6, E7, E8 exist"),
            DynkinShape::F4 => 24,
            DynkinShape::G2 => 6,
        }
    }
}

impl CartanMatrix {
    /// Validates and wraps a symmetrizable Cartan matrix with its symmetrizer.
    pub fn new(rows: Vec<Vec<i64>>, symmetrizer: Vec<u64>) -> Result<CartanMatrix, CartanError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(CartanError::BadShape);
        }
        if symmetrizer.len() != n {
            return Err(CartanError::SizeMismatch(n, symmetrizer.len()));
        }
        if symmetrizer.iter().any(|&d| d == 0) {
            return Err(CartanError::BadSymmetrizer);
        }
        for i in 0..n {
            if rows[i][i] != 2 {
                return Err(CartanError::BadDiagonal(i));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if rows[i][j] > 0 {
                    return Err(CartanError::BadSign(i, j));
                }
                if (rows[i][j] == 0) != (rows[j][i] == 0) {
                    return Err(CartanError::AsymmetricZero(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = symmetrizer[i] as i128 * rows[i][j] as i128;
                let rhs = symmetrizer[j] as i128 * rows[j][i] as i128;
                if lhs != rhs {
                    return Err(CartanError::NotSymmetrized(i, j));
                }
            }
        }
        let entries = rows.into_iter().flatten().collect();
        Ok(CartanMatrix { n, entries, symmetrizer })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `c[i][j]`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    /// Symmetrizer entry `d_i`.
    pub fn d(&self, i: usize) -> u64 {
        self.symmetrizer[i]
    }

    pub fn symmetrizer(&self) -> &[u64] {
        &self.symmetrizer
    }

    /// The symmetric Gram matrix `D * C` (entries `d_i c_ij`).
    pub fn gram(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.symmetrizer[i] as i64 * self.entry(i, j)).collect())
            .collect()
    }

    /// The quadratic form `q(x) = sum_i d_i x_i^2 - sum_{i<j} d_i |c_ij| x_i x_j`,
    /// normalized so `x^T (DC) x = 2 q(x)`.
    pub fn quadratic_form(&self, x: &[i64]) -> i128 {
        assert_eq!(x.len(), self.n, "vector length mismatch");
        let mut q: i128 = 0;
        for i in 0..self.n {
            q += self.symmetrizer[i] as i128 * (x[i] as i128) * (x[i] as i128);
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let m = self.symmetrizer[i] as i128 * (-self.entry(i, j)) as i128;
                q -= m * x[i] as i128 * x[j] as i128;
            }
        }
        q
    }

    /// Exact definiteness of the symmetrized form via symmetric Gaussian
    /// elimination over the rationals.
    pub fn definiteness(&self) -> Definiteness {
        let n = self.n;
        let mut m: Vec<Vec<BigRational>> = self
            .gram()
            .into_iter()
            .map(|row| row.into_iter().map(|v| BigRational::from_integer(BigInt::from(v))).collect())
            .collect();
        let mut degenerate = false;
        for k in 0..n {
            let d = m[k][k].clone();
            if d.is_negative() {
                return Definiteness::Indefinite;
            }
            if d.is_zero() {
                // A zero pivot with a surviving off-diagonal entry yields a
                // hyperbolic 2x2 block, hence an indefinite form.
                if (k + 1..n).any(|j| !m[k][j].is_zero()) {
                    return Definiteness::Indefinite;
                }
                degenerate = true;
                continue;
            }
            for i in (k + 1)..n {
                let factor = &m[i][k] / &d;
                if factor.is_zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let delta = &factor * &m[k][j];
                    m[i][j] = &m[i][j] - &delta;
                }
            }
        }
        if degenerate {
            Definiteness::PositiveSemidefinite
        } else {
            Definiteness::PositiveDefinite
        }
    }

    /// Leading principal minors of the symmetric Gram matrix, computed by
    /// exact elimination.
    pub fn gram_minors(&self) -> Vec<i128> {
        let n = self.n;
        (1..=n)
            .map(|k| {
                let mut m: Vec<Vec<BigRational>> = (0..k)
                    .map(|i| {
                        (0..k)
                            .map(|j| {
                                BigRational::from_integer(BigInt::from(
                                    self.symmetrizer[i] as i64 * self.entry(i, j),
                                ))
                            })
                            .collect()
                    })
                    .collect();
                let mut det = BigRational::one();
                for c in 0..k {
                    let pivot = match (c..k).find(|&r| !m[r][c].is_zero()) {
                        Some(p) => p,
                        None => return 0,
                    };
                    if pivot != c {
                        m.swap(pivot, c);
                        det = -det;
                    }
                    det *= &m[c][c];
                    for r in (c + 1)..k {
                        let factor = &m[r][c] / &m[c][c];
                        for j in c..k {
                            let delta = &factor * &m[c][j];
                            m[r][j] = &m[r][j] - &delta;
                        }
                    }
                }
                assert!(det.is_integer(), "minor of an integer matrix is an integer");
                i128::try_from(det.to_integer()).expect("minor fits in 128 bits")
            })
            .collect()
    }

    /// Vertices adjacent to `i` in the underlying diagram.
    fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| j != i && self.entry(i, j) != 0).collect()
    }

    /// Whether the underlying diagram is connected.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Recognizes the finite-type shape of a connected diagram, if any.
    ///
    /// This is purely combinatorial and serves as an independent cross-check
    /// of [`CartanMatrix::definiteness`].
    pub fn dynkin_shape(&self) -> Option<DynkinShape> {
        let n = self.n;
        if !self.is_connected() {
            return None;
        }
        if n == 1 {
            return Some(DynkinShape::A(1));
        }
        let mut edges: Vec<(usize, usize, i64)> = Vec::new(); // (i, j, c_ij*c_ji)
        for i in 0..n {
            for j in (i + 1)..n {
                if self.entry(i, j) != 0 {
                    edges.push((i, j, self.entry(i, j) * self.entry(j, i)));
                }
            }
        }
        if edges.len() != n - 1 {
            return None; // a connected diagram that is not a tree has a cycle
        }
        if edges.iter().any(|&(_, _, m)| m >= 4) {
            return None;
        }
        let degree: Vec<usize> = (0..n).map(|i| self.neighbors(i).len()).collect();
        if degree.iter().any(|&d| d > 3) {
            return None;
        }
        let branches: Vec<usize> = (0..n).filter(|&i| degree[i] == 3).collect();
        let specials: Vec<&(usize, usize, i64)> = edges.iter().filter(|&&(_, _, m)| m > 1).collect();
        if branches.len() > 1 || specials.len() > 1 {
            return None;
        }
        if !branches.is_empty() && !specials.is_empty() {
            return None;
        }

        if let Some(&&(u, v, m)) = specials.first() {
            // A path with a single multiply-laced edge.
            if m == 3 {
                return if n == 2 { Some(DynkinShape::G2) } else { None };
            }
            // m == 2.
            if n == 2 {
                return Some(DynkinShape::B(2));
            }
            let end = if degree[u] == 1 {
                Some(u)
            } else if degree[v] == 1 {
                Some(v)
            } else {
                None
            };
            match end {
                Some(e) => {
                    let other = if e == u { v } else { u };
                    // The vertex whose row carries the -2 is the short root.
                    if self.entry(e, other) == -2 {
                        Some(DynkinShape::B(n))
                    } else {
                        Some(DynkinShape::C(n))
                    }
                }
                None => {
                    // Doubly-laced edge strictly inside a path: only the
                    // middle edge of a 4-vertex path works.
                    if n == 4 && degree[u] == 2 && degree[v] == 2 {
                        Some(DynkinShape::F4)
                    } else {
                        None
                    }
                }
            }
        } else if let Some(&b) = branches.first() {
            // Simply-laced tree with one branch vertex: measure arm lengths.
            let mut arms: Vec<usize> = self
                .neighbors(b)
                .into_iter()
                .map(|start| {
                    let mut len = 1;
                    let (mut prev, mut cur) = (b, start);
                    loop {
                        let next: Vec<usize> =
                            self.neighbors(cur).into_iter().filter(|&w| w != prev).collect();
                        match next.as_slice() {
                            [] => break len,
                            [w] => {
                                prev = cur;
                                cur = *w;
                                len += 1;
                            }
                            _ => break usize::MAX, // second branch; already excluded
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, _] => Some(DynkinShape::D(n)),
                [1, 2, 2..=4] => Some(DynkinShape::E(n)),
                _ => None,
            }
        } else {
            // Simply-laced path.
            Some(DynkinShape::A(n))
        }
    }

    // ----- standard constructions -----

    pub fn type_a(n: usize) -> CartanMatrix {
        assert!(n >= 1);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
            if i + 1 < n {
                rows[i][i + 1] = -1;
                rows[i + 1][i] = -1;
            }
        }
        CartanMatrix::new(rows, vec![1; n]).expect("valid by construction")
    }

    /// Type B: short root at the last vertex, symmetrizer `(2, ..., 2, 1)`.
    pub fn type_b(n: usize) -> CartanMatrix {
        assert!(n >= 2);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
        }
        for i in 0..n - 1 {
            rows[i][i + 1] = -1;
            rows[i + 1][i] = -1;
        }
        rows[n - 1][n - 2] = -2;
        let mut d = vec![2u64; n];
        d[n - 1] = 1;
        CartanMatrix::new(rows, d).expect("valid by construction")
    }

    /// Type C: transpose of type B, symmetrizer `(1, ..., 1, 2)`.
    pub fn type_c(n: usize) -> CartanMatrix {
        assert!(n >= 2);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
        }
        for i in 0..n - 1 {
            rows[i][i + 1] = -1;
            rows[i + 1][i] = -1;
        }
        rows[n - 2][n - 1] = -2;
        let mut d = vec![1u64; n];
        d[n - 1] = 2;
        CartanMatrix::new(rows, d).expect("valid by construction")
    }

    pub fn type_d(n: usize) -> CartanMatrix {
        assert!(n >= 4);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
        }
        for i in 0..n - 2 {
            rows[i][i + 1] = -1;
            rows[i + 1][i] = -1;
        }
        rows[n - 3][n - 1] = -1;
        rows[n - 1][n - 3] = -1;
        CartanMatrix::new(rows, vec![1; n]).expect("valid by construction")
    }

    pub fn type_e(n: usize) -> CartanMatrix {
        assert!((6..=8).contains(&n));
        let all_edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
        }
        for &(i, j) in &all_edges[..n - 1] {
            rows[i][j] = -1;
            rows[j][i] = -1;
        }
        CartanMatrix::new(rows, vec![1; n]).expect("valid by construction")
    }

    pub fn type_f4() -> CartanMatrix {
        CartanMatrix::new(
            vec![
                vec![2, -1, 0, 0],
                vec![-1, 2, -1, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ],
            vec![2, 2, 1, 1],
        )
        .expect("valid by construction")
    }

    /// Type G2 with symmetrizer `(3, 1)`.
    pub fn type_g2() -> CartanMatrix {
        CartanMatrix::new(vec![vec![2, -1], vec![-3, 2]], vec![3, 1]).expect("valid by construction")
    }

    /// The Cartan matrix of a quiver with vertex weights `d`: each arrow
    /// between `i` and `j` contributes `-d_j` to `c_ij` and `-d_i` to `c_ji`.
    pub fn from_quiver(quiver: &Quiver, d: &[u64]) -> Result<CartanMatrix, CartanError> {
        if d.len() != quiver.n {
            return Err(CartanError::SizeMismatch(quiver.n, d.len()));
        }
        let n = quiver.n;
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            rows[i][i] = 2;
        }
        for &(i, j) in &quiver.arrows {
            rows[i][j] -= d[j] as i64;
            rows[j][i] -= d[i] as i64;
        }
        CartanMatrix::new(rows, d.to_vec())
    }
}

/// The quadratic form of a vertex-weighted quiver:
/// `sum_i d_i x_i^2 - sum_{arrows a} d_{s(a)} d_{t(a)} x_{s(a)} x_{t(a)}`,
/// counting parallel arrows with multiplicity.
pub fn weighted_quiver_form(quiver: &Quiver, d: &[u64], x: &[i64]) -> i128 {
    assert_eq!(d.len(), quiver.n);
    assert_eq!(x.len(), quiver.n);
    let mut q: i128 = 0;
    for i in 0..quiver.n {
        q += d[i] as i128 * (x[i] as i128) * (x[i] as i128);
    }
    for &(i, j) in &quiver.arrows {
        q -= d[i] as i128 * d[j] as i128 * x[i] as i128 * x[j] as i128;
    }
    q
}

/// A finite quiver on vertices `0..n`.  An arrow is stored as `(target,
/// source)`; parallel arrows are allowed, loops are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    pub n: usize,
    pub arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(n: usize, arrows: Vec<(usize, usize)>) -> Result<Quiver, CartanError> {
        for &(t, s) in &arrows {
            if t >= n || s >= n || t == s {
                return Err(CartanError::BadArrow);
            }
        }
        Ok(Quiver { n, arrows })
    }

    /// Whether every arrow points from a larger to a smaller vertex index.
    pub fn is_sinks_first(&self) -> bool {
        self.arrows.iter().all(|&(t, s)| t < s)
    }

    /// A relabeling `new_of_old` that makes the quiver sinks-first, found by
    /// Kahn's algorithm with deterministic smallest-index tie-breaking.
    /// Errs on directed cycles.
    pub fn sinks_first_relabeling(&self) -> Result<Vec<usize>, CartanError> {
        let mut outdeg = vec![0usize; self.n];
        for &(_, s) in &self.arrows {
            outdeg[s] += 1;
        }
        let mut new_of_old = vec![usize::MAX; self.n];
        let mut removed = vec![false; self.n];
        for next_label in 0..self.n {
            let Some(v) = (0..self.n).find(|&v| !removed[v] && outdeg[v] == 0) else {
                return Err(CartanError::CyclicQuiver);
            };
            new_of_old[v] = next_label;
            removed[v] = true;
            for &(t, s) in &self.arrows {
                if t == v && !removed[s] {
                    outdeg[s] -= 1;
                }
            }
        }
        Ok(new_of_old)
    }

    /// Applies a relabeling `new_of_old` to vertices and arrows.
    pub fn relabel(&self, new_of_old: &[usize]) -> Quiver {
        assert_eq!(new_of_old.len(), self.n);
        Quiver {
            n: self.n,
            arrows: self.arrows.iter().map(|&(t, s)| (new_of_old[t], new_of_old[s])).collect(),
        }
    }
}
