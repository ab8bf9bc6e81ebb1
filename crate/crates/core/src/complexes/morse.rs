use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::complex::{SimplicialComplex, VertexLabel};
use crate::error::{Error, Result};

/// A complex `X`, a set `S` of its simplices, the subcomplex `Y` of
/// simplices with no face in `S`, and the links of the members of `S`.
#[derive(Debug, Clone)]
pub struct MorseInstance {
    pub x: SimplicialComplex,
    pub s: Vec<Vec<u32>>,
    pub y: SimplicialComplex,
    pub links: Vec<SimplicialComplex>,
}

fn is_face(f: &[u32], t: &[u32]) -> bool {
    f.iter().all(|v| t.binary_search(v).is_ok())
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let s: BTreeSet<u32> = a.iter().chain(b).copied().collect();
    s.into_iter().collect()
}

/// Derives `Y` from `S` and checks that no two members of `S` span a simplex.
pub fn morse_check(x: &SimplicialComplex, s: &[Vec<u32>]) -> Result<MorseInstance> {
    let mut sorted: Vec<Vec<u32>> = Vec::with_capacity(s.len());
    for sigma in s {
        let mut t = sigma.clone();
        t.sort_unstable();
        t.dedup();
        x.check_contains(&t)?;
        if t.is_empty() {
            return Err(Error::InvalidArgument("S may not contain the empty simplex".into()));
        }
        sorted.push(t);
    }
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if x.contains(&union(&sorted[i], &sorted[j])) {
                return Err(Error::HypothesisViolated { which: "ii", first: sorted[i].clone(), second: sorted[j].clone() });
            }
        }
    }
    let y = SimplicialComplex::from_levels(
        x.labels().to_vec(),
        (0..=x.dim().max(-1) as usize)
            .take((x.dim() + 1) as usize)
            .map(|d| x.simplices(d).filter(|t| !sorted.iter().any(|f| is_face(f, t))).map(<[u32]>::to_vec).collect())
            .collect(),
    );
    let links = sorted.iter().map(|t| x.link(t)).collect::<Result<Vec<_>>>()?;
    Ok(MorseInstance { x: x.clone(), s: sorted, y, links })
}

/// As [`morse_check`], also checking hypothesis (i) for a caller-supplied `Y`:
/// a simplex lies in `Y` iff none of its faces lies in `S`.
pub fn morse_check_with(x: &SimplicialComplex, s: &[Vec<u32>], y: &SimplicialComplex) -> Result<MorseInstance> {
    let inst = morse_check(x, s)?;
    for t in x.all_simplices() {
        let in_y = y.contains(t);
        let derived = inst.y.contains(t);
        if in_y != derived {
            let witness = inst.s.iter().find(|f| is_face(f, t)).cloned().unwrap_or_default();
            return Err(Error::HypothesisViolated { which: "i", first: t.to_vec(), second: witness });
        }
    }
    if !y.is_subcomplex_of(x) {
        return Err(Error::NotASubcomplex);
    }
    Ok(inst)
}

/// A random complex on `nv` vertices from `facets` random facets of size up
/// to `max_size`, and a set `S` of simplices chosen greedily so that no two
/// span a simplex.
pub fn random_morse_input<R: Rng>(rng: &mut R, nv: usize, facets: usize, max_size: usize) -> (SimplicialComplex, Vec<Vec<u32>>) {
    let labels: Vec<VertexLabel> = (0..nv).map(|i| VertexLabel::Point(format!("v{i}"))).collect();
    let verts: Vec<u32> = (0..nv as u32).collect();
    let mut fs = Vec::with_capacity(facets);
    for _ in 0..facets {
        let k = rng.gen_range(1..=max_size.min(nv));
        fs.push(verts.choose_multiple(rng, k).copied().collect::<Vec<u32>>());
    }
    let x = SimplicialComplex::from_simplices(labels, fs);
    let mut all: Vec<Vec<u32>> = x.all_simplices().map(<[u32]>::to_vec).collect();
    all.shuffle(rng);
    let want = rng.gen_range(1..=4usize);
    let mut s: Vec<Vec<u32>> = Vec::new();
    for t in all {
        if s.len() >= want {
            break;
        }
        if s.iter().all(|u| !x.contains(&union(u, &t))) {
            s.push(t);
        }
    }
    (x, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SimplicialComplex {
        let labels = (0..3).map(|i| VertexLabel::Point(i.to_string())).collect();
        SimplicialComplex::from_simplices(labels, vec![vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    #[test]
    fn vertex_of_triangle() {
        let m = morse_check(&triangle(), &[vec![0]]).unwrap();
        assert_eq!(m.y.f_vector(), vec![2, 1]);
        assert_eq!(m.links[0].f_vector(), vec![2]);
    }

    #[test]
    fn edge_endpoints_violate_ii() {
        let e = morse_check(&triangle(), &[vec![0], vec![1]]).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolated { which: "ii", .. }));
    }

    #[test]
    fn wrong_y_violates_i() {
        let x = triangle();
        let e = morse_check_with(&x, &[vec![0]], &x).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolated { which: "i", .. }));
    }
}
