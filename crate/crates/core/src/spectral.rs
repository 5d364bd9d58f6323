//! Spectral radius and Perron vector by shifted power iteration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::json::{sig17, sig17_vec};

/// Fixed numerical tolerances used across the crate.
pub mod tol {
    /// Relative eigen-residual at which power iteration stops.
    pub const CONVERGENCE: f64 = 1e-12;
    /// Eigen-identity and inequality arithmetic checks.
    pub const IDENTITY: f64 = 1e-8;
    /// Comparisons of spectral radii against each other and against closed forms.
    pub const COMPARE: f64 = 1e-9;
    /// Perron entries within this of the maximum tie for the extremal vertex.
    pub const TIE: f64 = 1e-9;
    /// Window for the λ = √m equality case of triangle-free graphs.
    pub const NOSAL_EQUALITY: f64 = 1e-6;
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
    #[error("power iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            tolerance: tol::CONVERGENCE,
            max_iterations: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    #[serde(serialize_with = "sig17")]
    pub lambda: f64,
    #[serde(serialize_with = "sig17")]
    pub residual: f64,
    pub iterations: usize,
    /// Unit Perron vector indexed by vertex.
    #[serde(serialize_with = "sig17_vec")]
    pub perron: Vec<f64>,
}

pub fn spectral_radius(g: &Graph) -> Result<SpectralResult, SpectralError> {
    spectral_radius_with(g, &SpectralConfig::default())
}

/// Power iteration on A + I from the all-ones vector.
///
/// The shift makes λ + 1 strictly dominant in modulus even for bipartite
/// graphs, whose spectrum is symmetric about zero. λ is the Rayleigh
/// quotient of A at the current iterate; iteration stops once
/// ‖Ax − λx‖∞ ≤ tolerance · max(1, λ).
pub fn spectral_radius_with(g: &Graph, cfg: &SpectralConfig) -> Result<SpectralResult, SpectralError> {
    if g.n() == 0 {
        return Err(SpectralError::Empty);
    }
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    power_iteration(g.n(), cfg, |x, out| multiply(g, x, out))
}

/// [`spectral_radius`] for graphs given as neighbour lists, with no vertex
/// limit. Lists must be symmetric and loop-free; this is not checked.
pub fn spectral_radius_lists(adj: &[Vec<usize>]) -> Result<SpectralResult, SpectralError> {
    let n = adj.len();
    if n == 0 {
        return Err(SpectralError::Empty);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !std::mem::replace(&mut seen[u], true) {
                stack.push(u);
            }
        }
    }
    if seen.contains(&false) {
        return Err(SpectralError::Disconnected);
    }
    power_iteration(n, &SpectralConfig::default(), |x, out| {
        for (o, row) in out.iter_mut().zip(adj) {
            *o = row.iter().map(|&u| x[u]).sum();
        }
    })
}

fn power_iteration(
    n: usize,
    cfg: &SpectralConfig,
    apply: impl Fn(&[f64], &mut [f64]),
) -> Result<SpectralResult, SpectralError> {
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut ax = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iterations in 0..=cfg.max_iterations {
        apply(&x, &mut ax);
        let lambda: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        residual = x
            .iter()
            .zip(&ax)
            .map(|(xi, axi)| (axi - lambda * xi).abs())
            .fold(0.0, f64::max);
        if residual <= cfg.tolerance * lambda.max(1.0) {
            return Ok(SpectralResult {
                lambda,
                residual,
                iterations,
                perron: x,
            });
        }
        for (xi, axi) in x.iter_mut().zip(&ax) {
            *xi += axi;
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    }
    Err(SpectralError::NoConvergence {
        iterations: cfg.max_iterations,
        residual,
    })
}

fn multiply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (v, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(v).iter().map(|u| x[u]).sum();
    }
}

/// λ of an arbitrary graph: the largest over its components. Zero for edgeless graphs.
pub fn radius_by_components(g: &Graph) -> Result<f64, SpectralError> {
    let mut best = 0.0f64;
    for c in g.components() {
        if c.len() > 1 {
            let h = g.induced(c).expect("component is in range");
            best = best.max(spectral_radius(&h)?.lambda);
        }
    }
    Ok(best)
}

/// Smallest vertex whose Perron entry is within [`tol::TIE`] of the maximum.
pub fn extremal_vertex(res: &SpectralResult) -> usize {
    let max = res.perron.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    res.perron
        .iter()
        .position(|&x| x >= max - tol::TIE)
        .expect("perron vector is non-empty")
}

/// (1 + √(4m − 3)) / 2, the spectral radius of K₂ ∨ ((m−1)/2)K₁ for odd m.
pub fn bound_value(m: usize) -> f64 {
    assert!(m >= 1, "bound_value needs at least one edge");
    (1.0 + ((4 * m - 3) as f64).sqrt()) / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NosalReport {
    pub triangle_free: bool,
    #[serde(serialize_with = "sig17")]
    pub lambda: f64,
    #[serde(serialize_with = "sig17")]
    pub sqrt_m: f64,
    /// λ ≤ √m, and λ = √m only for a complete bipartite graph. Vacuous when triangles exist.
    pub satisfied: bool,
    /// Part sizes when λ = √m within tolerance and the graph is complete bipartite.
    pub equality_structure: Option<(usize, usize)>,
}

/// Checks λ ≤ √m for triangle-free graphs, with the complete bipartite
/// equality case. Disconnected input is measured through its largest component.
pub fn check_nosal(g: &Graph) -> Result<NosalReport, SpectralError> {
    let lambda = radius_by_components(g)?;
    let sqrt_m = (g.m() as f64).sqrt();
    let triangle_free = g.is_triangle_free();
    let mut satisfied = true;
    let mut equality_structure = None;
    if triangle_free && g.m() > 0 {
        satisfied = lambda <= sqrt_m + tol::COMPARE;
        if (lambda - sqrt_m).abs() <= tol::NOSAL_EQUALITY {
            equality_structure = g.complete_bipartite_parts();
            satisfied &= equality_structure.is_some();
        }
    }
    Ok(NosalReport {
        triangle_free,
        lambda,
        sqrt_m,
        satisfied,
        equality_structure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityResiduals {
    /// |λ·x(u*) − Σ_{u∈U} x(u)|
    #[serde(serialize_with = "sig17")]
    pub first_order: f64,
    /// |λ²·x(u*) − (|U|·x(u*) + Σ_{u∈U₊} d_U(u)·x(u) + Σ_{w∈W} d_U(w)·x(w))|
    #[serde(serialize_with = "sig17")]
    pub second_order: f64,
}

impl IdentityResiduals {
    pub fn within(&self, tolerance: f64) -> bool {
        self.first_order <= tolerance && self.second_order <= tolerance
    }
}

/// Evaluates the first- and second-order eigen-identities at `ustar`
/// through the U / W decomposition around it. Both hold for any vertex of
/// a connected graph, not only the extremal one.
pub fn eigen_identity_check(g: &Graph, res: &SpectralResult, ustar: usize) -> IdentityResiduals {
    let d = crate::verify::decompose_at(g, ustar);
    let x = &res.perron;
    let lambda = res.lambda;
    let first: f64 = d.u.iter().map(|u| x[u]).sum();
    let d_u = |v: usize| g.neighbors(v).intersection(d.u).len() as f64;
    let second = d.u.len() as f64 * x[ustar]
        + d.u_plus.iter().map(|u| d_u(u) * x[u]).sum::<f64>()
        + d.w.iter().map(|w| d_u(w) * x[w]).sum::<f64>();
    IdentityResiduals {
        first_order: (lambda * x[ustar] - first).abs(),
        second_order: (lambda * lambda * x[ustar] - second).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::*;

    fn lambda(g: &Graph) -> f64 {
        spectral_radius(g).unwrap().lambda
    }

    #[test]
    fn closed_form_values() {
        assert!((lambda(&complete(2).unwrap()) - 1.0).abs() < 1e-12);
        assert!((lambda(&star(5).unwrap()) - 2.0).abs() < 1e-12);
        assert!((lambda(&book(3).unwrap()) - 3.0).abs() < 1e-12);
        assert!((lambda(&book(28).unwrap()) - 8.0).abs() < 1e-9);
        assert_eq!(lambda(&Graph::empty(1).unwrap()), 0.0);
    }

    #[test]
    fn bound_values() {
        assert_eq!(bound_value(57), 8.0);
        assert_eq!(bound_value(3), 2.0);
        assert_eq!(bound_value(7), 3.0);
        assert!((bound_value(4) - (1.0 + 13f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(spectral_radius(&g), Err(SpectralError::Disconnected));
        assert_eq!(spectral_radius(&Graph::empty(0).unwrap()), Err(SpectralError::Empty));
        let cfg = SpectralConfig {
            tolerance: 1e-12,
            max_iterations: 2,
        };
        assert!(matches!(
            spectral_radius_with(&path(20).unwrap(), &cfg),
            Err(SpectralError::NoConvergence { iterations: 2, .. })
        ));
        assert!((radius_by_components(&g).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extremal_vertices() {
        let r = spectral_radius(&star(6).unwrap()).unwrap();
        assert_eq!(extremal_vertex(&r), 0);
        let r = spectral_radius(&book(3).unwrap()).unwrap();
        assert_eq!(extremal_vertex(&r), 0);
        let r = spectral_radius(&cycle(6).unwrap()).unwrap();
        assert_eq!(extremal_vertex(&r), 0);
        // leaf-labelled star: centre is vertex 3
        let g = star(5).unwrap().permuted(&[3, 0, 1, 2, 4]);
        assert_eq!(extremal_vertex(&spectral_radius(&g).unwrap()), 3);
    }

    #[test]
    fn perron_vector_is_positive_unit() {
        for g in [path(9).unwrap(), complete_bipartite(3, 5).unwrap(), book(7).unwrap()] {
            let r = spectral_radius(&g).unwrap();
            assert!(r.perron.iter().all(|&x| x > 0.0));
            let norm = r.perron.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nosal_cases() {
        let r = check_nosal(&complete_bipartite(2, 4).unwrap()).unwrap();
        assert!(r.triangle_free && r.satisfied);
        assert_eq!(r.equality_structure, Some((2, 4)));
        let r = check_nosal(&cycle(5).unwrap()).unwrap();
        assert!(r.satisfied && r.equality_structure.is_none());
        assert!((r.lambda - 2.0).abs() < 1e-12);
        let r = check_nosal(&path(4).unwrap()).unwrap();
        assert!((r.lambda - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!(r.lambda < r.sqrt_m && r.satisfied);
        let r = check_nosal(&complete(3).unwrap()).unwrap();
        assert!(!r.triangle_free && r.satisfied);
    }

    #[test]
    fn identities_at_every_vertex() {
        for g in [book(3).unwrap(), star(7).unwrap(), cycle(6).unwrap(), path(5).unwrap()] {
            let r = spectral_radius(&g).unwrap();
            for v in 0..g.n() {
                assert!(eigen_identity_check(&g, &r, v).within(1e-10), "{g:?} at {v}");
            }
        }
    }

    #[test]
    fn json_output() {
        let r = spectral_radius(&complete(2).unwrap()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.starts_with(r#"{"lambda":9.99999999999999"#), "{s}");
        assert!(s.contains(r#""perron":[7.07106781186547"#), "{s}");
        let back: SpectralResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
