//! Neighbourhood-overlap features over a chosen neighbourhood scope:
//! Jaccard similarity and the Adamic/Adar coefficient.
//!
//! The pair's own nodes are excluded from each other's neighbourhood before
//! any set arithmetic, so an existing link between `i` and `j` never feeds
//! the feature that is supposed to predict it. Common-neighbour weights use
//! the raw degree of the common neighbour in the same scope.

use crate::error::{Error, Result};
use crate::graph::{sorted_intersection, sorted_union, LayerId, MultilayerGraph, NodeId};

/// Which neighbourhood a pair feature is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighbourhoodScope {
    /// One layer's neighbourhood.
    SingleLayer(LayerId),
    /// Union of neighbourhoods across all layers.
    Global,
    /// Intersection of neighbourhoods across all layers.
    Core,
}

/// Sorted neighbour list of `i` under the given scope.
pub fn scoped_neighbourhood(
    g: &MultilayerGraph,
    i: NodeId,
    scope: NeighbourhoodScope,
) -> Result<Vec<u32>> {
    match scope {
        NeighbourhoodScope::SingleLayer(layer) => Ok(g.layer_neighbours(layer, i)?.to_vec()),
        NeighbourhoodScope::Global => g.global_neighbourhood(i),
        NeighbourhoodScope::Core => g.core_neighbourhood(i),
    }
}

fn pair_neighbourhoods(
    g: &MultilayerGraph,
    i: NodeId,
    j: NodeId,
    scope: NeighbourhoodScope,
) -> Result<(Vec<u32>, Vec<u32>)> {
    if i == j {
        return Err(Error::IdenticalNodes);
    }
    let mut ni = scoped_neighbourhood(g, i, scope)?;
    let mut nj = scoped_neighbourhood(g, j, scope)?;
    ni.retain(|&z| z != j.0);
    nj.retain(|&z| z != i.0);
    Ok((ni, nj))
}

/// Jaccard overlap of the two scoped neighbourhoods; 0 when both are empty.
pub fn jaccard(
    g: &MultilayerGraph,
    i: NodeId,
    j: NodeId,
    scope: NeighbourhoodScope,
) -> Result<f64> {
    let (ni, nj) = pair_neighbourhoods(g, i, j, scope)?;
    let union = sorted_union(&ni, &nj);
    if union.is_empty() {
        return Ok(0.0);
    }
    let common = sorted_intersection(&ni, &nj);
    Ok(common.len() as f64 / union.len() as f64)
}

/// Adamic/Adar: sum of `1 / ln(deg(z))` over common neighbours `z`, where
/// `deg` is taken in the same scope. Common neighbours of scoped degree <= 1
/// are skipped so the term is always finite and positive.
pub fn adamic_adar(
    g: &MultilayerGraph,
    i: NodeId,
    j: NodeId,
    scope: NeighbourhoodScope,
) -> Result<f64> {
    let (ni, nj) = pair_neighbourhoods(g, i, j, scope)?;
    let common = sorted_intersection(&ni, &nj);
    let mut score = 0.0;
    for &z in &common {
        let deg = scoped_neighbourhood(g, NodeId(z), scope)?.len();
        if deg > 1 {
            score += 1.0 / (deg as f64).ln();
        }
    }
    Ok(score)
}
