//! JSON file formats for the command-line surface: Cartan data, algebra
//! descriptions, and modules.  Scalars are rendered as exact strings
//! (`"2/3"` over the rationals, residues over a prime field) and vertices
//! are numbered from 1 in files while the engine numbers them from 0.

use serde::{Deserialize, Serialize};

use thiserror::Error;

use crate::cartan::{CartanError, CartanMatrix, Quiver};
use crate::field::{Field, FieldError};
use crate::frobcore::CoreModule;
use crate::matrix::Matrix;
use crate::repcat::{RepError, Representation};
use crate::triangalg::{TriangError, TriangularAlgebra};

pub const CARTAN_SCHEMA: &str = "frobrep/cartan/1";
pub const ALGEBRA_SCHEMA: &str = "frobrep/algebra/1";
pub const MODULE_SCHEMA: &str = "frobrep/module/1";
pub const REPORT_SCHEMA: &str = "frobrep/report/1";

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("unsupported schema {found:?} (expected {expected:?})")]
    Schema { expected: &'static str, found: String },
    #[error("malformed file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Triang(#[from] TriangError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

pub fn check_schema(found: &str, expected: &'static str) -> Result<(), JsonError> {
    if found == expected {
        Ok(())
    } else {
        Err(JsonError::Schema { expected, found: found.to_string() })
    }
}

/// A symmetrizable Cartan matrix with its symmetrizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanFile {
    pub schema: String,
    pub matrix: Vec<Vec<i64>>,
    pub symmetrizer: Vec<u64>,
}

pub fn cartan_to_file(c: &CartanMatrix) -> CartanFile {
    let n = c.n();
    CartanFile {
        schema: CARTAN_SCHEMA.to_string(),
        matrix: (0..n).map(|i| (0..n).map(|j| c.entry(i, j)).collect()).collect(),
        symmetrizer: c.symmetrizer().to_vec(),
    }
}

pub fn cartan_from_file(f: &CartanFile) -> Result<CartanMatrix, JsonError> {
    check_schema(&f.schema, CARTAN_SCHEMA)?;
    Ok(CartanMatrix::new(f.matrix.clone(), f.symmetrizer.clone())?)
}

/// An algebra description: either a Cartan matrix for the weighted
/// construction, or an acyclic quiver with a uniform core dimension for
/// the path construction.  Exactly one of the two must be present.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub schema: String,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<CartanSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiver: Option<QuiverSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanSpec {
    pub matrix: Vec<Vec<i64>>,
    pub symmetrizer: Vec<u64>,
}

/// Arrows are `[target, source]` pairs, numbered from 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub vertices: usize,
    pub arrows: Vec<[usize; 2]>,
    pub truncation: u64,
}

pub fn algebra_from_file(f: &AlgebraFile) -> Result<TriangularAlgebra, JsonError> {
    check_schema(&f.schema, ALGEBRA_SCHEMA)?;
    let field = Field::parse(&f.field)?;
    match (&f.cartan, &f.quiver) {
        (Some(c), None) => {
            let cartan = CartanMatrix::new(c.matrix.clone(), c.symmetrizer.clone())?;
            Ok(TriangularAlgebra::weighted(field, &cartan)?)
        }
        (None, Some(q)) => {
            let arrows: Vec<(usize, usize)> = q
                .arrows
                .iter()
                .map(|&[t, s]| {
                    if t == 0 || s == 0 || t > q.vertices || s > q.vertices {
                        Err(JsonError::Malformed(format!(
                            "arrow [{t},{s}] out of range (vertices are numbered from 1)"
                        )))
                    } else {
                        Ok((t - 1, s - 1))
                    }
                })
                .collect::<Result<_, _>>()?;
            let quiver = Quiver::new(q.vertices, arrows)?;
            Ok(TriangularAlgebra::path_algebra_over_core(field, &quiver, q.truncation)?)
        }
        _ => Err(JsonError::Malformed(
            "exactly one of \"cartan\" or \"quiver\" must be present".to_string(),
        )),
    }
}

/// A module over a triangular algebra: per-vertex nilpotent actions and
/// per-arrow structure maps, all entries as exact scalar strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub schema: String,
    pub field: String,
    /// Square action matrix of the core generator at each vertex, in
    /// vertex order; the matrix size is the vertex dimension.
    pub vertices: Vec<Vec<Vec<String>>>,
    /// One entry per arrow of the algebra, in arrow order.
    pub maps: Vec<ArrowMapFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrowMapFile {
    pub target: usize,
    pub source: usize,
    pub entries: Vec<Vec<String>>,
}

pub fn matrix_to_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_display_string()).collect())
        .collect()
}

pub fn matrix_from_rows(
    field: Field,
    rows: usize,
    cols: usize,
    data: &[Vec<String>],
) -> Result<Matrix, JsonError> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return Err(JsonError::Malformed(format!(
            "expected a {rows}x{cols} matrix, found {} row(s)",
            data.len()
        )));
    }
    let mut m = Matrix::zero(field, rows, cols);
    for (i, row) in data.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, field.parse_scalar(s)?);
        }
    }
    Ok(m)
}

pub fn module_to_file(alg: &TriangularAlgebra, x: &Representation) -> ModuleFile {
    ModuleFile {
        schema: MODULE_SCHEMA.to_string(),
        field: alg.field().to_string(),
        vertices: (0..alg.n()).map(|v| matrix_to_rows(x.module(v).action())).collect(),
        maps: alg
            .arrows()
            .map(|(&(i, j), _)| ArrowMapFile {
                target: i + 1,
                source: j + 1,
                entries: matrix_to_rows(x.map(i, j)),
            })
            .collect(),
    }
}

pub fn module_from_file(
    alg: &TriangularAlgebra,
    f: &ModuleFile,
) -> Result<Representation, JsonError> {
    check_schema(&f.schema, MODULE_SCHEMA)?;
    let field = Field::parse(&f.field)?;
    if field != alg.field() {
        return Err(JsonError::Malformed(format!(
            "module file is over {} but the algebra is over {}",
            field,
            alg.field()
        )));
    }
    if f.vertices.len() != alg.n() {
        return Err(JsonError::Malformed(format!(
            "module file has {} vertices but the algebra has {}",
            f.vertices.len(),
            alg.n()
        )));
    }
    let mut modules = Vec::with_capacity(alg.n());
    for rows in &f.vertices {
        let d = rows.len();
        modules.push(CoreModule::new(matrix_from_rows(field, d, d, rows)?));
    }
    let expected_keys: Vec<(usize, usize)> = alg.arrows().map(|(&k, _)| k).collect();
    let found_keys: Vec<(usize, usize)> = f
        .maps
        .iter()
        .map(|m| {
            if m.target == 0 || m.source == 0 {
                Err(JsonError::Malformed(
                    "vertices are numbered from 1 in files".to_string(),
                ))
            } else {
                Ok((m.target - 1, m.source - 1))
            }
        })
        .collect::<Result<_, _>>()?;
    if found_keys != expected_keys {
        return Err(JsonError::Malformed(format!(
            "arrow set mismatch: file has {found_keys:?}, algebra has {expected_keys:?}"
        )));
    }
    let mut maps = std::collections::BTreeMap::new();
    for m in &f.maps {
        let (i, j) = (m.target - 1, m.source - 1);
        let rr = alg.arrow(i, j).expect("key checked above").right_rank();
        let rows = modules[i].dim();
        let cols = rr * modules[j].dim();
        maps.insert((i, j), matrix_from_rows(field, rows, cols, &m.entries)?);
    }
    let x = Representation::new(modules, maps);
    x.validate(alg)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cartan_file_round_trips_as_a_fixed_point() {
        let c = CartanMatrix::type_b(2);
        let file = cartan_to_file(&c);
        let text = serde_json::to_string_pretty(&file).unwrap();
        let parsed: CartanFile = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&parsed).unwrap();
        assert_eq!(text, again);
        let back = cartan_from_file(&parsed).unwrap();
        assert_eq!(back.entry(1, 0), -2);
        assert_eq!(back.symmetrizer(), &[2, 1]);
    }

    #[test]
    fn algebra_file_builds_both_constructions() {
        let weighted = AlgebraFile {
            schema: ALGEBRA_SCHEMA.to_string(),
            field: "rational".to_string(),
            cartan: Some(CartanSpec {
                matrix: vec![vec![2, -1], vec![-2, 2]],
                symmetrizer: vec![2, 1],
            }),
            quiver: None,
        };
        let alg = algebra_from_file(&weighted).unwrap();
        assert_eq!(alg.n(), 2);
        assert_eq!(alg.trunc(0), 2);

        let path = AlgebraFile {
            schema: ALGEBRA_SCHEMA.to_string(),
            field: "rational".to_string(),
            cartan: None,
            quiver: Some(QuiverSpec {
                vertices: 2,
                arrows: vec![[1, 2], [1, 2]],
                truncation: 1,
            }),
        };
        let kron = algebra_from_file(&path).unwrap();
        assert_eq!(kron.arrow(0, 1).unwrap().right_rank(), 2);

        let neither = AlgebraFile {
            schema: ALGEBRA_SCHEMA.to_string(),
            field: "rational".to_string(),
            cartan: None,
            quiver: None,
        };
        assert!(matches!(algebra_from_file(&neither), Err(JsonError::Malformed(_))));
    }

    #[test]
    fn module_files_round_trip_with_exact_fractions() {
        let c = CartanMatrix::type_b(2);
        let alg = TriangularAlgebra::weighted(Field::Rationals, &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut x = Representation::random_with_ranks(&alg, &mut rng, &[2, 1]);
        let half = Field::Rationals.parse_scalar("1/2").unwrap();
        let scaled = x.map(0, 1).scale(&half);
        x = Representation::new(
            (0..2).map(|v| x.module(v).clone()).collect(),
            [((0usize, 1usize), scaled)].into_iter().collect(),
        );
        x.validate(&alg).unwrap();

        let file = module_to_file(&alg, &x);
        let text = serde_json::to_string_pretty(&file).unwrap();
        assert!(text.contains('/'), "a fractional entry should serialize with a slash");
        let parsed: ModuleFile = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&parsed).unwrap(), text);
        let back = module_from_file(&alg, &parsed).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn module_files_round_trip_over_a_prime_field() {
        let c = CartanMatrix::type_a(2);
        let alg = TriangularAlgebra::weighted(Field::parse("fp:5").unwrap(), &c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = Representation::random_locally_free(&alg, &mut rng, 2);
        let file = module_to_file(&alg, &x);
        let back = module_from_file(&alg, &file).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn wrong_schema_and_wrong_field_are_refused() {
        let c = CartanMatrix::type_a(2);
        let alg = TriangularAlgebra::weighted(Field::Rationals, &c).unwrap();
        let x = Representation::zero(&alg);
        let mut file = module_to_file(&alg, &x);
        file.schema = "frobrep/module/9".to_string();
        assert!(matches!(module_from_file(&alg, &file), Err(JsonError::Schema { .. })));
        let mut file = module_to_file(&alg, &x);
        file.field = "fp:5".to_string();
        assert!(matches!(module_from_file(&alg, &file), Err(JsonError::Malformed(_))));
    }
}
