//! Spectral radii of the adjacency matrix `A(G)` and the signless
//! Laplacian `Q(G) = D(G) + A(G)`, with nonnegative unit Perron vectors.
//!
//! Each connected component is handled separately. Power iteration is the
//! fast path; a dense symmetric eigensolve is the fallback when the
//! iteration budget runs out. `Q` is positive semidefinite, so its largest
//! eigenvalue dominates in modulus and no shift is needed. `A` of a
//! bipartite component has `-λ` in its spectrum, so the adjacency iteration
//! runs on `A + cI` with `0 < c <= λ/2`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::SpectralError;
use crate::graph::{bits, Adjacency, Graph};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Relative width within which two component radii count as tied.
const TIE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Adjacency,
    SignlessLaplacian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Power,
    Dense,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub kind: MatrixKind,
    pub value: f64,
    /// Unit, entrywise nonnegative, zero outside the winning component.
    pub vector: Vec<f64>,
    /// `‖Mx − value·x‖₂`.
    pub residual: f64,
    pub iterations: usize,
    pub method: Method,
}

struct Local {
    lists: Vec<Vec<usize>>,
}

impl Local {
    fn degree(&self, i: usize) -> usize {
        self.lists[i].len()
    }

    /// `y = (M + shift·I) x`, where the diagonal of `M` is the degree for `Q`.
    fn apply(&self, kind: MatrixKind, shift: f64, x: &[f64], y: &mut [f64]) {
        for (i, l) in self.lists.iter().enumerate() {
            let diag = match kind {
                MatrixKind::SignlessLaplacian => l.len() as f64,
                MatrixKind::Adjacency => 0.0,
            };
            y[i] = (diag + shift) * x[i] + l.iter().map(|&j| x[j]).sum::<f64>();
        }
    }

    fn residual(&self, kind: MatrixKind, value: f64, x: &[f64]) -> f64 {
        let mut y = vec![0.0; x.len()];
        self.apply(kind, 0.0, x, &mut y);
        y.iter().zip(x).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt()
    }
}

struct Part {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
    iterations: usize,
    method: Method,
}

fn power_iteration(local: &Local, kind: MatrixKind, tol: f64) -> Option<Part> {
    let m = local.lists.len();
    let shift = match kind {
        MatrixKind::SignlessLaplacian => 0.0,
        MatrixKind::Adjacency => {
            // Average degree and sqrt(max degree) both bound λ from below.
            let avg = local.lists.iter().map(Vec::len).sum::<usize>() as f64 / m as f64;
            let max = local.lists.iter().map(Vec::len).max().unwrap_or(0) as f64;
            avg.max(max.sqrt()) / 2.0
        }
    };
    let budget = (100.0 * m as f64 * (m as f64).ln().max(1.0)).ceil() as usize;
    let mut x: Vec<f64> = (0..m).map(|i| local.degree(i) as f64 + 1.0).collect();
    normalize(&mut x);
    let mut y = vec![0.0; m];
    for it in 1..=budget {
        local.apply(kind, shift, &x, &mut y);
        let theta: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let residual = y.iter().zip(&x).map(|(a, b)| (a - theta * b).powi(2)).sum::<f64>().sqrt();
        if residual <= tol {
            return Some(Part { value: theta - shift, vector: x, residual, iterations: it, method: Method::Power });
        }
        std::mem::swap(&mut x, &mut y);
        normalize(&mut x);
    }
    None
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}

fn dense_matrix(lists: &[Vec<usize>], kind: MatrixKind) -> DMatrix<f64> {
    let m = lists.len();
    let mut mat = DMatrix::<f64>::zeros(m, m);
    for (i, l) in lists.iter().enumerate() {
        if kind == MatrixKind::SignlessLaplacian {
            mat[(i, i)] = l.len() as f64;
        }
        for &j in l {
            mat[(i, j)] = 1.0;
        }
    }
    mat
}

/// Largest eigenvalue and a unit eigenvector of a dense symmetric matrix,
/// signs chosen so that entries are nonnegative.
fn dense_top(mat: DMatrix<f64>) -> (f64, Vec<f64>) {
    let eig = mat.symmetric_eigen();
    let (idx, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("matrix is nonempty");
    let mut v: Vec<f64> = eig.eigenvectors.column(idx).iter().map(|x| x.abs()).collect();
    normalize(&mut v);
    (value, v)
}

fn dense_part(local: &Local, kind: MatrixKind, tol: f64) -> Option<Part> {
    let (value, vector) = dense_top(dense_matrix(&local.lists, kind));
    let residual = local.residual(kind, value, &vector);
    (residual <= tol.max(1e-8)).then_some(Part { value, vector, residual, iterations: 0, method: Method::Dense })
}

fn components<G: Adjacency + ?Sized>(g: &G) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut comp_of = vec![usize::MAX; n];
    let mut comps = Vec::new();
    for s in 0..n {
        if comp_of[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        comp_of[s] = id;
        let mut members = vec![s];
        let mut head = 0;
        while head < members.len() {
            let u = members[head];
            head += 1;
            for v in g.neighbors(u) {
                if comp_of[v] == usize::MAX {
                    comp_of[v] = id;
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

fn localize<G: Adjacency + ?Sized>(g: &G, members: &[usize]) -> Local {
    let lists = members
        .iter()
        .map(|&u| g.neighbors(u).into_iter().map(|v| members.binary_search(&v).expect("same component")).collect())
        .collect();
    Local { lists }
}

/// Spectral radius of `A(G)` or `Q(G)` with a nonnegative unit eigenvector.
///
/// For disconnected graphs the radius is the largest over components and the
/// vector is supported on the winning component. Components whose radii agree
/// to within a relative `1e-9` are ordered by the canonical form of the
/// component, then by lowest vertex.
pub fn spectral_radius<G: Adjacency + ?Sized>(g: &G, kind: MatrixKind, tol: f64) -> Result<SpectralResult, SpectralError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(SpectralError::Tolerance(tol));
    }
    let n = g.order();
    let mut best: Option<(Part, Vec<usize>, Option<String>)> = None;
    for members in components(g) {
        let part = if members.len() == 1 {
            Part { value: 0.0, vector: vec![1.0], residual: 0.0, iterations: 0, method: Method::Power }
        } else {
            let local = localize(g, &members);
            power_iteration(&local, kind, tol)
                .or_else(|| dense_part(&local, kind, tol))
                .ok_or(SpectralError::NoConvergence)?
        };
        best = match best {
            None => Some((part, members, None)),
            Some((b, bm, bkey)) => {
                let scale = b.value.abs().max(part.value.abs()).max(1.0);
                if part.value > b.value + TIE_EPS * scale {
                    Some((part, members, None))
                } else if part.value < b.value - TIE_EPS * scale {
                    Some((b, bm, bkey))
                } else {
                    let bkey = bkey.unwrap_or_else(|| g.component_key(&bm));
                    let key = g.component_key(&members);
                    if key < bkey {
                        Some((part, members, Some(key)))
                    } else {
                        Some((b, bm, Some(bkey)))
                    }
                }
            }
        };
    }
    let (part, members, _) = best.expect("graph has at least one vertex");
    let mut vector = vec![0.0; n];
    for (&u, &x) in members.iter().zip(&part.vector) {
        vector[u] = x;
    }
    Ok(SpectralResult {
        kind,
        value: part.value,
        vector,
        residual: part.residual,
        iterations: part.iterations,
        method: part.method,
    })
}

/// `q(G)` at the default tolerance.
pub fn q_index(g: &Graph) -> f64 {
    spectral_radius(g, MatrixKind::SignlessLaplacian, DEFAULT_TOL).expect("dense fallback converges").value
}

/// `λ(G)` at the default tolerance.
pub fn adjacency_index(g: &Graph) -> f64 {
    spectral_radius(g, MatrixKind::Adjacency, DEFAULT_TOL).expect("dense fallback converges").value
}

/// Dense eigensolve of the whole matrix, without the component split.
/// Used as an independent cross-check of [`spectral_radius`].
pub fn dense_spectral_radius<G: Adjacency + ?Sized>(g: &G, kind: MatrixKind) -> f64 {
    let lists: Vec<Vec<usize>> = (0..g.order()).map(|u| g.neighbors(u)).collect();
    dense_top(dense_matrix(&lists, kind)).0
}

fn check_unit(g: &Graph, x: &[f64], slack: f64) -> Result<(), SpectralError> {
    if x.len() != g.n() {
        return Err(SpectralError::Length { got: x.len(), n: g.n() });
    }
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > slack {
        return Err(SpectralError::NotUnit(norm));
    }
    Ok(())
}

/// `xᵀQ(G)x = Σ_{ij∈E} (x_i + x_j)²` for a unit vector `x`.
pub fn rayleigh_q(g: &Graph, x: &[f64]) -> Result<f64, SpectralError> {
    check_unit(g, x, 1e-9)?;
    Ok(g.edges().map(|(i, j)| (x[i] + x[j]).powi(2)).sum())
}

/// `xᵀA(G)x = 2 Σ_{ij∈E} x_i x_j` for a unit vector `x`.
pub fn rayleigh_a(g: &Graph, x: &[f64]) -> Result<f64, SpectralError> {
    check_unit(g, x, 1e-9)?;
    Ok(g.edges().map(|(i, j)| 2.0 * x[i] * x[j]).sum())
}

/// `μ = min_i x_i`; zero whenever the vector misses a component.
pub fn min_perron_entry(r: &SpectralResult) -> f64 {
    r.vector.iter().copied().fold(f64::INFINITY, f64::min).max(0.0)
}

/// First vertex attaining [`min_perron_entry`].
pub fn min_perron_vertex(r: &SpectralResult) -> usize {
    let mu = r.vector.iter().copied().fold(f64::INFINITY, f64::min);
    r.vector.iter().position(|&x| x == mu).expect("nonempty vector")
}

/// `|(value − diag(u))·x_u − Σ_{j∈N(u)} x_j|`, the eigen-equation defect at `u`,
/// where `diag(u)` is `d(u)` for `Q` and `0` for `A`.
pub fn eigen_equation_residual(g: &Graph, r: &SpectralResult, u: usize) -> f64 {
    let diag = match r.kind {
        MatrixKind::SignlessLaplacian => g.degree(u) as f64,
        MatrixKind::Adjacency => 0.0,
    };
    let sum: f64 = bits(g.row(u)).map(|j| r.vector[j]).sum();
    ((r.value - diag) * r.vector[u] - sum).abs()
}

/// `max_{xy∈E} (d(x) + d(y))`, zero for edgeless graphs.
pub fn max_edge_degree_sum(g: &Graph) -> usize {
    g.edges().map(|(u, v)| g.degree(u) + g.degree(v)).max().unwrap_or(0)
}
