use nalgebra::DMatrix;
use num_traits::One;
use serde::Serialize;

use super::graph::{distances, LabeledGraph};
use crate::error::{Error, Result};
use crate::level_ops::LevelMatrix;
use crate::limits;

/// Largest vertex count for which the full diameter is computed.
pub const FULL_DIAMETER_MAX_VERTICES: usize = 243;

/// `γ(i)`: number of vertices at distance `i` from the basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthSeries {
    pub coefficients: Vec<u64>,
}

impl GrowthSeries {
    /// Number of vertices within distance `r`.
    pub fn ball(&self, r: usize) -> u64 {
        self.coefficients.iter().take(r + 1).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthReport {
    pub growth: GrowthSeries,
    pub eccentricity: usize,
    /// Only for graphs with at most [`FULL_DIAMETER_MAX_VERTICES`] vertices.
    pub diameter: Option<usize>,
}

/// Growth series and eccentricity of the basepoint in the undirected view,
/// ignoring loops.
pub fn growth_and_diameter(g: &LabeledGraph) -> Result<GrowthReport> {
    let adj = g.neighbours();
    let dist = distances(&adj, g.basepoint);
    let dist: Vec<usize> = dist
        .into_iter()
        .collect::<Option<_>>()
        .ok_or(Error::Disconnected)?;
    let eccentricity = dist.iter().copied().max().unwrap_or(0);
    let mut coefficients = vec![0u64; eccentricity + 1];
    for d in dist {
        coefficients[d] += 1;
    }
    let diameter = (g.vertex_count() <= FULL_DIAMETER_MAX_VERTICES).then(|| {
        (0..g.vertex_count())
            .map(|v| {
                distances(&adj, v)
                    .into_iter()
                    .map(|d| d.unwrap_or(0))
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    });
    Ok(GrowthReport {
        growth: GrowthSeries { coefficients },
        eccentricity,
        diameter,
    })
}

/// Coefficients of `∏_{i<n} (1 + 2X^{2^i})`.
pub fn product_growth_polynomial(n: usize) -> Vec<u64> {
    let mut poly = vec![1u64];
    for i in 0..n {
        let shift = 1usize << i;
        let mut next = vec![0u64; poly.len() + shift];
        for (k, &c) in poly.iter().enumerate() {
            next[k] += c;
            next[k + shift] += 2 * c;
        }
        poly = next;
    }
    poly
}

/// Least-squares slope of `log |B(r)|` against `log r` over the given radii.
pub fn growth_exponent_fit(growth: &GrowthSeries, radii: &[usize]) -> Result<f64> {
    if radii.len() < 2 || radii.contains(&0) {
        return Err(Error::InvalidInput(
            "need at least two positive radii".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| ((r as f64).ln(), (growth.ball(r) as f64).ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Adjacency matrix with loops, `A[t][s]` counting edges `s → t`.
pub fn graph_adjacency(g: &LabeledGraph) -> Result<LevelMatrix> {
    let n = g.vertex_count();
    if n > limits::dense_dim_cap() {
        return Err(Error::ResourceLimit {
            dim: n,
            cap: limits::dense_dim_cap(),
        });
    }
    let mut m = LevelMatrix::zeros(n);
    let one = num_rational::BigRational::one();
    for &(s, t, _) in &g.edges {
        m.add_at(t, s, &one);
    }
    Ok(m)
}

pub fn graph_adjacency_f64(g: &LabeledGraph) -> Result<DMatrix<f64>> {
    let n = g.vertex_count();
    if n > limits::dense_dim_cap() {
        return Err(Error::ResourceLimit {
            dim: n,
            cap: limits::dense_dim_cap(),
        });
    }
    let mut m = DMatrix::zeros(n, n);
    for &(s, t, _) in &g.edges {
        m[(t, s)] += 1.0;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level_ops::hecke_operator;
    use crate::schreier::action_graph;
    use crate::tree_groups::GroupPreset;

    #[test]
    fn growth_of_gamma() {
        let r = growth_and_diameter(&action_graph(GroupPreset::Gamma, 3).unwrap()).unwrap();
        assert_eq!(r.growth.coefficients, product_growth_polynomial(3));
        assert_eq!(r.eccentricity, 7);
        let r0 = growth_and_diameter(&action_graph(GroupPreset::Gamma, 0).unwrap()).unwrap();
        assert_eq!(r0.growth.coefficients, vec![1]);
        assert_eq!(r0.diameter, Some(0));
        assert_eq!(product_growth_polynomial(2), vec![1, 2, 2, 4]);
    }

    #[test]
    fn adjacency_is_hecke() {
        let g = action_graph(GroupPreset::G, 3).unwrap();
        let a = graph_adjacency(&g).unwrap();
        assert_eq!(
            a.entries(),
            hecke_operator(GroupPreset::G, 3).unwrap().entries()
        );
        assert!(a
            .row_sums()
            .iter()
            .all(|s| *s == crate::level_ops::integer(4)));
    }

    #[test]
    fn disconnected_is_an_error() {
        let mut g = action_graph(GroupPreset::G, 1).unwrap();
        g.edges.retain(|e| e.2 != 0);
        assert!(matches!(growth_and_diameter(&g), Err(Error::Disconnected)));
    }
}
