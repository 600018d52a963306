//! Rigidity matrices, self-stresses and stress-weighted Laplacians for
//! frameworks in lp-space.
//!
//! The measurement of an edge `ij` is `sum_k (p_i[k] - p_j[k])^p`. Its
//! Jacobian, with the constant factor `p` dropped, is the rigidity matrix: the
//! row of `ij` holds `(p_i[k] - p_j[k])^(p-1)` in the columns of vertex `i`
//! and the negation in those of vertex `j`. Columns are vertex-major
//! (`i * d + k`). A self-stress is a vector in its left kernel.

mod generic;

use serde::Serialize;
use thiserror::Error;

use crate::field::Field;
use crate::graph::Graph;
use crate::linalg::{self, Matrix};

pub use generic::{
    derive_seed, generic_local_rigidity, random_generic_stress, random_stress_combination,
    sample_configuration, stress_condition_report, GenericParams, LocalRigidity, StressCertificate,
    StressConditionReport, DEFAULT_TRIALS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RigidityError {
    #[error("p = {0} is not an even integer >= 4")]
    InvalidExponent(u32),
    #[error("configuration has {config} points but the graph has {graph} vertices")]
    DimensionMismatch { graph: usize, config: usize },
    #[error("configuration needs {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("axis {axis} out of range for dimension {d}")]
    InvalidAxis { axis: usize, d: usize },
    #[error("edge vector has {got} entries, graph has {expected} edges")]
    EdgeVectorLength { expected: usize, got: usize },
    #[error("the framework has no nonzero self-stress")]
    NoStress,
}

/// The exponent `p` of the lp-norm. Only even `p >= 4` is supported: the
/// measurement map is then polynomial and `p - 2` is even, so coordinated
/// stresses do not depend on edge orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PExponent(u32);

impl PExponent {
    pub fn new(p: u32) -> Result<Self, RigidityError> {
        if p >= 4 && p % 2 == 0 {
            Ok(Self(p))
        } else {
            Err(RigidityError::InvalidExponent(p))
        }
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

/// `n` points in `d` dimensions, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration<E> {
    n: usize,
    d: usize,
    coords: Vec<E>,
}

impl<E: Clone> Configuration<E> {
    pub fn new(n: usize, d: usize, coords: Vec<E>) -> Result<Self, RigidityError> {
        if coords.len() != n * d {
            return Err(RigidityError::CoordinateCount {
                expected: n * d,
                got: coords.len(),
            });
        }
        Ok(Self { n, d, coords })
    }

    /// From one coordinate vector per point; all must have length `d`.
    pub fn from_points(d: usize, points: Vec<Vec<E>>) -> Result<Self, RigidityError> {
        let n = points.len();
        let mut coords = Vec::with_capacity(n * d);
        for pt in points {
            if pt.len() != d {
                return Err(RigidityError::CoordinateCount {
                    expected: n * d,
                    got: coords.len() + pt.len(),
                });
            }
            coords.extend(pt);
        }
        Self::new(n, d, coords)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coord(&self, i: usize, k: usize) -> &E {
        &self.coords[i * self.d + k]
    }

    pub fn point(&self, i: usize) -> &[E] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    /// Appends a point, returning its index.
    pub fn push_point(&mut self, point: Vec<E>) -> usize {
        assert_eq!(point.len(), self.d);
        self.coords.extend(point);
        self.n += 1;
        self.n - 1
    }

    /// Translates every point by `shift`.
    pub fn translate<F: Field<Elem = E>>(&self, field: &F, shift: &[E]) -> Self {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(idx, c)| field.add(c, &shift[idx % self.d]))
            .collect();
        Self {
            n: self.n,
            d: self.d,
            coords,
        }
    }

    /// Same points with axes reordered: new axis `k` is old axis `order[k]`.
    pub fn permute_axes(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.d);
        let coords = (0..self.n)
            .flat_map(|i| order.iter().map(move |&k| (i, k)))
            .map(|(i, k)| self.coord(i, k).clone())
            .collect();
        Self {
            n: self.n,
            d: self.d,
            coords,
        }
    }
}

impl<E: Clone + PartialEq> Configuration<E> {
    /// Axes on which two points share a coordinate.
    pub fn degenerate_axes(&self) -> Vec<usize> {
        (0..self.d)
            .filter(|&k| {
                (0..self.n).any(|i| (i + 1..self.n).any(|j| self.coord(i, k) == self.coord(j, k)))
            })
            .collect()
    }
}

/// Edge-indexed self-stress (indexed like `Graph::edges`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stress<E>(pub Vec<E>);

impl<E> Stress<E> {
    pub fn values(&self) -> &[E] {
        &self.0
    }
}

/// `omega^k(ij) = omega(ij) * (p_j[k] - p_i[k])^(p-2)` for one axis `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinatedStress<E> {
    pub axis: usize,
    pub values: Vec<E>,
}

fn check_sizes<E: Clone>(g: &Graph, c: &Configuration<E>) -> Result<(), RigidityError> {
    if g.n() != c.n() {
        return Err(RigidityError::DimensionMismatch {
            graph: g.n(),
            config: c.n(),
        });
    }
    Ok(())
}

fn diff<F: Field>(field: &F, c: &Configuration<F::Elem>, i: usize, j: usize, k: usize) -> F::Elem {
    field.sub(c.coord(i, k), c.coord(j, k))
}

/// `sum_k (p_i[k] - p_j[k])^p` for every edge `ij`.
pub fn measurement<F: Field>(
    field: &F,
    g: &Graph,
    c: &Configuration<F::Elem>,
    p: PExponent,
) -> Result<Vec<F::Elem>, RigidityError> {
    check_sizes(g, c)?;
    Ok(g.edges()
        .iter()
        .map(|&(i, j)| {
            (0..c.d()).fold(field.zero(), |acc, k| {
                field.add(&acc, &field.pow(&diff(field, c, i, j, k), p.value()))
            })
        })
        .collect())
}

/// `|E| x dn` Jacobian of the edge measurements, without the factor `p`.
pub fn rigidity_matrix<F: Field>(
    field: &F,
    g: &Graph,
    c: &Configuration<F::Elem>,
    p: PExponent,
) -> Result<Matrix<F::Elem>, RigidityError> {
    check_sizes(g, c)?;
    let d = c.d();
    let mut m = Matrix::filled(g.m(), d * g.n(), field.zero());
    for (row, &(i, j)) in g.edges().iter().enumerate() {
        for k in 0..d {
            let entry = field.pow(&diff(field, c, i, j, k), p.value() - 1);
            m.set(row, j * d + k, field.neg(&entry));
            m.set(row, i * d + k, entry);
        }
    }
    Ok(m)
}

/// `omega^T J`: zero exactly when `omega` is a self-stress.
pub fn equilibrium_residual<F: Field>(
    field: &F,
    g: &Graph,
    c: &Configuration<F::Elem>,
    p: PExponent,
    omega: &[F::Elem],
) -> Result<Vec<F::Elem>, RigidityError> {
    if omega.len() != g.m() {
        return Err(RigidityError::EdgeVectorLength {
            expected: g.m(),
            got: omega.len(),
        });
    }
    let j = rigidity_matrix(field, g, c, p)?;
    Ok(linalg::vec_mat_mul(field, omega, &j))
}

pub fn is_self_stress<F: Field>(
    field: &F,
    g: &Graph,
    c: &Configuration<F::Elem>,
    p: PExponent,
    omega: &[F::Elem],
) -> Result<bool, RigidityError> {
    Ok(equilibrium_residual(field, g, c, p, omega)?
        .iter()
        .all(|x| field.is_zero(x)))
}

/// Basis of the self-stress space, each vector normalized to lead with 1.
pub fn stress_basis<F: Field>(
    field: &F,
    g: &Graph,
    c: &Configuration<F::Elem>,
    p: PExponent,
) -> Result<Vec<Stress<F::Elem>>, RigidityError> {
    let j = rigidity_matrix(field, g, c, p)?;
    let basis = linalg::left_kernel_basis(field, &j);
    for w in &basis {
        assert!(
            linalg::vec_mat_mul(field, w, &j)
                .iter()
                .all(|x| field.is_zero(x)),
            "kernel vector violates equilibrium"
        );
    }
    Ok(basis.into_iter().map(Stress).collect())
}

pub fn coordinated_stress<F: Field>(
    field: &F,
    g: &Graph,
    stress: &Stress<F::Elem>,
    c: &Configuration<F::Elem>,
    axis: usize,
    p: PExponent,
) -> Result<CoordinatedStress<F::Elem>, RigidityError> {
    check_sizes(g, c)?;
    if axis >= c.d() {
        return Err(RigidityError::InvalidAxis { axis, d: c.d() });
    }
    if stress.0.len() != g.m() {
        return Err(RigidityError::EdgeVectorLength {
            expected: g.m(),
            got: stress.0.len(),
        });
    }
    let values = g
        .edges()
        .iter()
        .zip(&stress.0)
        .map(|(&(i, j), w)| field.mul(w, &field.pow(&diff(field, c, j, i, axis), p.value() - 2)))
        .collect();
    Ok(CoordinatedStress { axis, values })
}

/// Laplacian of `g` weighted by `w`: `-w(ij)` off the diagonal on edges, zero
/// row sums.
pub fn weighted_laplacian<F: Field>(
    field: &F,
    g: &Graph,
    w: &[F::Elem],
) -> Result<Matrix<F::Elem>, RigidityError> {
    if w.len() != g.m() {
        return Err(RigidityError::EdgeVectorLength {
            expected: g.m(),
            got: w.len(),
        });
    }
    let mut l = Matrix::filled(g.n(), g.n(), field.zero());
    for (&(i, j), wij) in g.edges().iter().zip(w) {
        let neg = field.neg(wij);
        l.set(i, j, neg.clone());
        l.set(j, i, neg);
        let di = field.add(l.get(i, i), wij);
        l.set(i, i, di);
        let dj = field.add(l.get(j, j), wij);
        l.set(j, j, dj);
    }
    Ok(l)
}

/// Rank of `L_{G, omega^k}` for every axis `k`.
pub fn coordinated_laplacian_ranks<F: Field>(
    field: &F,
    g: &Graph,
    stress: &Stress<F::Elem>,
    c: &Configuration<F::Elem>,
    p: PExponent,
) -> Result<Vec<usize>, RigidityError> {
    (0..c.d())
        .map(|k| {
            let wk = coordinated_stress(field, g, stress, c, k, p)?;
            let l = weighted_laplacian(field, g, &wk.values)?;
            Ok(linalg::rank(field, &l))
        })
        .collect()
}
