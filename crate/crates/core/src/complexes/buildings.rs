use std::collections::HashMap;

use super::complex::{Caps, SimplicialComplex, VertexLabel};
use super::enumerate::clique_complex;
use crate::cbp::{has_cbp_ie, CbpCache, Collection};
use crate::error::{Error, Result};
use crate::exactlin::{FieldLattice, Submodule};

/// Ordered complementary pairs `(P, Q)` of proper nonzero subspaces, sorted.
pub fn splitting_pairs(lat: &FieldLattice) -> Vec<(u32, u32)> {
    let (z, t) = (lat.zero_id(), lat.top_id());
    let proper = lat.proper_ids();
    let mut out = Vec::new();
    for &p in &proper {
        for &q in &proper {
            if lat.meet(p, q) == z && lat.join(p, q) == t {
                out.push((p, q));
            }
        }
    }
    out
}

fn split_lt(lat: &FieldLattice, a: (u32, u32), b: (u32, u32)) -> bool {
    a.0 != b.0 && a.1 != b.1 && lat.leq(a.0, b.0) && lat.leq(b.1, a.1)
}

fn module_label(lat: &FieldLattice, id: u32) -> VertexLabel {
    VertexLabel::Module(lat.submodule(id).clone())
}

fn pair_label(lat: &FieldLattice, (p, q): (u32, u32)) -> VertexLabel {
    VertexLabel::Splitting(lat.submodule(p).clone(), lat.submodule(q).clone())
}

fn lattice_for(n: usize, p: u32, caps: &Caps) -> Result<FieldLattice> {
    let lat = FieldLattice::new(p, n)?;
    if lat.len() > caps.max_vertices + 2 {
        return Err(Error::CapExceeded { what: "vertices", value: lat.len() - 2, cap: caps.max_vertices });
    }
    Ok(lat)
}

/// The Tits building of `F_p^n`: proper nonzero subspaces, simplices are flags.
pub fn tits(n: usize, p: u32, caps: &Caps) -> Result<SimplicialComplex> {
    let lat = lattice_for(n, p, caps)?;
    tits_in(&lat, caps)
}

pub fn tits_in(lat: &FieldLattice, caps: &Caps) -> Result<SimplicialComplex> {
    let ids = lat.proper_ids();
    let adj: Vec<Vec<bool>> = ids
        .iter()
        .map(|&a| ids.iter().map(|&b| a != b && (lat.leq(a, b) || lat.leq(b, a))).collect())
        .collect();
    let labels = ids.iter().map(|&i| module_label(lat, i)).collect();
    clique_complex(labels, &adj, caps, || (), |_, _, _| Ok(true))
}

/// The split Tits building: complementary pairs, ordered by
/// `(P, Q) < (P', Q')` iff `P ⊊ P'` and `Q' ⊊ Q`.
pub fn split_tits(n: usize, p: u32, caps: &Caps) -> Result<SimplicialComplex> {
    let lat = lattice_for(n, p, caps)?;
    split_tits_in(&lat, caps)
}

pub fn split_tits_in(lat: &FieldLattice, caps: &Caps) -> Result<SimplicialComplex> {
    let pairs = splitting_pairs(lat);
    let adj: Vec<Vec<bool>> = pairs
        .iter()
        .map(|&a| pairs.iter().map(|&b| split_lt(lat, a, b) || split_lt(lat, b, a)).collect())
        .collect();
    let labels = pairs.iter().map(|&x| pair_label(lat, x)).collect();
    clique_complex(labels, &adj, caps, || (), |_, _, _| Ok(true))
}

/// The splitting `(P_0, P_1 ∩ Q_0, .., P_p ∩ Q_{p-1}, Q_p)` of a simplex of
/// the split building.
pub fn simplex_to_splitting(k: &SimplicialComplex, s: &[u32]) -> Result<Vec<Submodule>> {
    let mut chain: Vec<(Submodule, Submodule)> = s
        .iter()
        .map(|&v| match k.label(v) {
            VertexLabel::Splitting(p, q) => Ok((p.clone(), q.clone())),
            _ => Err(Error::InvalidArgument("vertex is not a splitting".into())),
        })
        .collect::<Result<_>>()?;
    chain.sort_by_key(|x| x.0.rank());
    let mut parts = vec![chain[0].0.clone()];
    for i in 1..chain.len() {
        parts.push(chain[i].0.intersect(&chain[i - 1].1)?);
    }
    parts.push(chain.last().unwrap().1.clone());
    Ok(parts)
}

/// Inverse of [`simplex_to_splitting`]: `P_i = M_0 ⊕ .. ⊕ M_i`,
/// `Q_i = M_{i+1} ⊕ .. ⊕ M_{p+1}`. Returns `None` if some vertex is missing.
pub fn splitting_to_simplex(k: &SimplicialComplex, parts: &[Submodule]) -> Result<Option<Vec<u32>>> {
    if parts.len() < 2 {
        return Err(Error::InvalidArgument("a splitting needs at least two parts".into()));
    }
    let index: HashMap<&VertexLabel, u32> = k.labels().iter().enumerate().map(|(i, l)| (l, i as u32)).collect();
    let mut out = Vec::new();
    for i in 0..parts.len() - 1 {
        let mut p = parts[0].clone();
        for m in &parts[1..=i] {
            p = p.sum(m)?;
        }
        let mut q = parts[i + 1].clone();
        for m in &parts[i + 2..] {
            q = q.sum(m)?;
        }
        match index.get(&VertexLabel::Splitting(p, q)) {
            Some(&v) => out.push(v),
            None => return Ok(None),
        }
    }
    out.sort_unstable();
    Ok(k.contains(&out).then_some(out))
}

/// Proper nonzero subspaces; a set is a simplex iff it has a common basis.
pub fn common_basis_complex(n: usize, p: u32, caps: &Caps) -> Result<SimplicialComplex> {
    let lat = lattice_for(n, p, caps)?;
    common_basis_complex_in(&lat, caps)
}

pub fn common_basis_complex_in(lat: &FieldLattice, caps: &Caps) -> Result<SimplicialComplex> {
    let ids = lat.proper_ids();
    let adj: Vec<Vec<bool>> = ids.iter().map(|&a| ids.iter().map(|&b| a != b).collect()).collect();
    let labels = ids.iter().map(|&i| module_label(lat, i)).collect();
    let ids_ref = &ids;
    clique_complex(labels, &adj, caps, || (CbpCache::new(lat), Vec::new()), move |(cache, buf), sigma, v| {
        buf.clear();
        buf.extend(sigma.iter().map(|&x| ids_ref[x as usize]));
        buf.push(ids_ref[v as usize]);
        cache.check(buf)
    })
}

/// A vertex of a higher building: its slot and the subspaces it carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum HVertex {
    Flag(usize, u32),
    Split(usize, (u32, u32)),
}

impl HVertex {
    fn slot(&self) -> usize {
        match self {
            HVertex::Flag(s, _) | HVertex::Split(s, _) => *s,
        }
    }

    fn push_modules(&self, out: &mut Vec<u32>) {
        match *self {
            HVertex::Flag(_, m) => out.push(m),
            HVertex::Split(_, (p, q)) => {
                out.push(p);
                out.push(q);
            }
        }
    }
}

/// Lattice ids of the members of a field collection.
pub fn collection_ids(lat: &FieldLattice, sigma: &Collection) -> Result<Vec<u32>> {
    sigma
        .members()
        .iter()
        .map(|m| lat.id_of(m).ok_or_else(|| Error::AmbientMismatch(format!("{m:?} is not a subspace of the lattice"))))
        .collect()
}

/// The higher building `T^{a,b}(F_p^n, σ)`: the subcomplex of the join of
/// `a` Tits buildings and `b` split buildings whose simplices, together
/// with the members of `σ`, have a common basis.
///
/// With `a + b = 1` the vertices are not slot-tagged.
pub fn higher_tits(a: usize, b: usize, n: usize, p: u32, sigma: &Collection, caps: &Caps) -> Result<SimplicialComplex> {
    let lat = lattice_for(n, p, caps)?;
    higher_tits_in(&lat, a, b, sigma, caps)
}

pub fn higher_tits_in(lat: &FieldLattice, a: usize, b: usize, sigma: &Collection, caps: &Caps) -> Result<SimplicialComplex> {
    if a + b == 0 {
        return Err(Error::InvalidArgument("need a + b >= 1".into()));
    }
    if sigma.ring() != lat.ring() || sigma.ambient_rank() != lat.n() {
        return Err(Error::AmbientMismatch("sigma lives in a different ambient".into()));
    }
    let sig = collection_ids(lat, sigma)?;
    let mut base = CbpCache::new(lat);
    if !base.check(&sig)? {
        return Err(Error::InvalidArgument("sigma does not have a common basis".into()));
    }
    let proper = lat.proper_ids();
    let pairs = splitting_pairs(lat);
    let tag = a + b > 1;
    let mut verts = Vec::new();
    let mut labels = Vec::new();
    for s in 0..a + b {
        if s < a {
            for &m in &proper {
                verts.push(HVertex::Flag(s, m));
                let l = module_label(lat, m);
                labels.push(if tag { VertexLabel::slot(s, l) } else { l });
            }
        } else {
            for &x in &pairs {
                verts.push(HVertex::Split(s, x));
                let l = pair_label(lat, x);
                labels.push(if tag { VertexLabel::slot(s, l) } else { l });
            }
        }
    }
    let mut buf = sig.clone();
    let ok: Vec<bool> = verts
        .iter()
        .map(|v| {
            buf.truncate(sig.len());
            v.push_modules(&mut buf);
            base.check(&buf)
        })
        .collect::<Result<_>>()?;
    let keep: Vec<usize> = (0..verts.len()).filter(|&i| ok[i]).collect();
    let verts: Vec<HVertex> = keep.iter().map(|&i| verts[i]).collect();
    let labels: Vec<VertexLabel> = keep.iter().map(|&i| labels[i].clone()).collect();

    let related = |u: &HVertex, v: &HVertex| -> bool {
        match (*u, *v) {
            (HVertex::Flag(s, x), HVertex::Flag(t, y)) if s == t => x != y && (lat.leq(x, y) || lat.leq(y, x)),
            (HVertex::Split(s, x), HVertex::Split(t, y)) if s == t => split_lt(lat, x, y) || split_lt(lat, y, x),
            _ => u.slot() != v.slot(),
        }
    };
    let mut adj = vec![vec![false; verts.len()]; verts.len()];
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            if related(&verts[i], &verts[j]) {
                buf.truncate(sig.len());
                verts[i].push_modules(&mut buf);
                verts[j].push_modules(&mut buf);
                let e = base.check(&buf)?;
                adj[i][j] = e;
                adj[j][i] = e;
            }
        }
    }
    let verts_ref = &verts;
    let sig_ref = &sig;
    clique_complex(labels, &adj, caps, || (CbpCache::new(lat), Vec::new()), move |(cache, buf), sigma, v| {
        buf.clear();
        buf.extend_from_slice(sig_ref);
        for &x in sigma {
            verts_ref[x as usize].push_modules(buf);
        }
        verts_ref[v as usize].push_modules(buf);
        cache.check(buf)
    })
}

/// Membership of a collection of summands of `Z^n` (or `F_p^n`) as a simplex
/// of the common basis complex, without enumerating it.
pub fn is_simplex_over_z(members: &Collection) -> Result<bool> {
    has_cbp_ie(members)
}
