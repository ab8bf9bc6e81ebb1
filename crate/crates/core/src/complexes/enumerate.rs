use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::complex::{Caps, SimplicialComplex, VertexLabel};
use crate::error::{Error, Result};

/// Enumerates the simplices of a complex given by a graph and a monotone
/// acceptance test.
///
/// A simplex is a clique `σ` of `adj` such that every prefix extension
/// (in increasing vertex order) is accepted by `accept(σ, v)`. Each worker
/// thread gets its own state from `init`.
pub(crate) fn clique_complex<S, I, A>(
    labels: Vec<VertexLabel>,
    adj: &[Vec<bool>],
    caps: &Caps,
    init: I,
    accept: A,
) -> Result<SimplicialComplex>
where
    I: Fn() -> S + Sync,
    A: Fn(&mut S, &[u32], u32) -> Result<bool> + Sync,
{
    let nv = labels.len();
    if nv > caps.max_vertices {
        return Err(Error::CapExceeded { what: "vertices", value: nv, cap: caps.max_vertices });
    }
    let max_len = caps.max_dim.map_or(usize::MAX, |d| d + 1);
    let count = AtomicUsize::new(0);
    let up: Vec<Vec<u32>> =
        (0..nv).map(|v| ((v + 1)..nv).filter(|&w| adj[v][w]).map(|w| w as u32).collect()).collect();

    let per_root: Vec<Result<Vec<Vec<Vec<u32>>>>> = (0..nv as u32)
        .into_par_iter()
        .map_init(&init, |state, root| {
            let mut out: Vec<Vec<Vec<u32>>> = vec![vec![vec![root]]];
            count.fetch_add(1, Ordering::Relaxed);
            let mut stack: Vec<(Vec<u32>, Vec<u32>)> = vec![(vec![root], up[root as usize].clone())];
            while let Some((sigma, cands)) = stack.pop() {
                if sigma.len() >= max_len {
                    continue;
                }
                for (i, &c) in cands.iter().enumerate() {
                    if !accept(state, &sigma, c)? {
                        continue;
                    }
                    let mut tau = sigma.clone();
                    tau.push(c);
                    let next: Vec<u32> = cands[i + 1..].iter().copied().filter(|&w| adj[c as usize][w as usize]).collect();
                    let d = tau.len() - 1;
                    if out.len() <= d {
                        out.resize(d + 1, Vec::new());
                    }
                    out[d].push(tau.clone());
                    let total = count.fetch_add(1, Ordering::Relaxed) + 1;
                    if total > caps.max_simplices {
                        return Err(Error::CapExceeded { what: "simplices", value: total, cap: caps.max_simplices });
                    }
                    if !next.is_empty() {
                        stack.push((tau, next));
                    }
                }
            }
            Ok(out)
        })
        .collect();

    let mut by_dim: Vec<Vec<Vec<u32>>> = Vec::new();
    for r in per_root {
        for (d, lvl) in r?.into_iter().enumerate() {
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].extend(lvl);
        }
    }
    Ok(SimplicialComplex::from_levels(labels, by_dim))
}
