use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Ring, Submodule};

/// Default caps for enumerated complexes.
pub const DEFAULT_MAX_VERTICES: usize = 5000;
pub const DEFAULT_MAX_SIMPLICES: usize = 2_000_000;

/// Construction limits. `max_dim` of `None` means the full complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_vertices: usize,
    pub max_simplices: usize,
    pub max_dim: Option<usize>,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { max_vertices: DEFAULT_MAX_VERTICES, max_simplices: DEFAULT_MAX_SIMPLICES, max_dim: None }
    }
}

/// Payload attached to a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexLabel {
    Module(Submodule),
    /// An ordered pair `(P, Q)` with `P ⊕ Q` the ambient module.
    Splitting(Submodule, Submodule),
    /// A vertex of the `i`-th factor of a join.
    Slot(usize, Box<VertexLabel>),
    Point(String),
}

impl VertexLabel {
    pub fn slot(i: usize, inner: VertexLabel) -> VertexLabel {
        VertexLabel::Slot(i, Box::new(inner))
    }

    /// Submodules carried by the label (both halves of a splitting).
    pub fn modules(&self) -> Vec<&Submodule> {
        match self {
            VertexLabel::Module(m) => vec![m],
            VertexLabel::Splitting(p, q) => vec![p, q],
            VertexLabel::Slot(_, inner) => inner.modules(),
            VertexLabel::Point(_) => Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            VertexLabel::Module(m) => format!("sub {}", module_token(m)),
            VertexLabel::Splitting(p, q) => format!("split {} {}", module_token(p), module_token(q)),
            VertexLabel::Slot(i, inner) => format!("slot {i} {}", inner.to_text()),
            VertexLabel::Point(s) => format!("pt {s}"),
        }
    }

    pub fn parse(s: &str) -> std::result::Result<VertexLabel, String> {
        let s = s.trim();
        let (tag, rest) = s.split_once(' ').unwrap_or((s, ""));
        match tag {
            "sub" => Ok(VertexLabel::Module(parse_module_token(rest)?)),
            "split" => {
                let (p, q) = rest.split_once(' ').ok_or("splitting needs two modules")?;
                Ok(VertexLabel::Splitting(parse_module_token(p)?, parse_module_token(q)?))
            }
            "slot" => {
                let (i, inner) = rest.split_once(' ').ok_or("slot needs an index and a label")?;
                let i = i.parse().map_err(|_| "bad slot index")?;
                Ok(VertexLabel::slot(i, VertexLabel::parse(inner)?))
            }
            "pt" => Ok(VertexLabel::Point(rest.to_string())),
            _ => Err(format!("unknown label tag {tag:?}")),
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `F2/3/1,0,0;0,1,0`: ring, ambient rank, then the canonical rows.
fn module_token(m: &Submodule) -> String {
    let rows: Vec<String> = (0..m.rank())
        .map(|i| m.basis().row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .collect();
    format!("{}/{}/{}", m.ring(), m.ambient_rank(), rows.join(";"))
}

fn parse_module_token(s: &str) -> std::result::Result<Submodule, String> {
    let mut parts = s.trim().splitn(3, '/');
    let ring: Ring = parts.next().ok_or("missing ring")?.parse().map_err(|e: Error| e.to_string())?;
    let n: usize = parts.next().ok_or("missing rank")?.parse().map_err(|_| "bad ambient rank")?;
    let body = parts.next().unwrap_or("");
    if body.is_empty() {
        return Ok(Submodule::zero(ring, n));
    }
    let mut rows = Vec::new();
    for r in body.split(';') {
        let row: std::result::Result<Vec<BigInt>, _> = r.split(',').map(str::parse).collect();
        let row = row.map_err(|_| "bad integer")?;
        if row.len() != n {
            return Err("row length differs from ambient rank".into());
        }
        rows.push(row);
    }
    let k = rows.len();
    let m = Submodule::canonicalize(&Matrix::from_bigint_rows(ring, n, rows));
    if m.rank() != k {
        return Err("dependent rows".into());
    }
    Ok(m)
}

/// Simplices of one dimension, stored as a sorted flat array of sorted
/// vertex tuples.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Level {
    width: usize,
    data: Vec<u32>,
}

impl Level {
    fn len(&self) -> usize {
        if self.width == 0 {
            0
        } else {
            self.data.len() / self.width
        }
    }

    fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    fn position(&self, s: &[u32]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(s) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// A finite abstract simplicial complex with labelled vertices.
///
/// Vertex `i` carries `labels[i]`; the vertices of the complex are its
/// 0-simplices, so a subcomplex may keep the labels of its ambient complex.
/// All faces are stored; the empty simplex is implicit.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    labels: Vec<VertexLabel>,
    levels: Vec<Level>,
}

impl SimplicialComplex {
    pub fn empty() -> SimplicialComplex {
        SimplicialComplex { labels: Vec::new(), levels: Vec::new() }
    }

    /// Builds a complex from an arbitrary set of simplices, adding all faces.
    pub fn from_simplices<I>(labels: Vec<VertexLabel>, simplices: I) -> SimplicialComplex
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut by_dim: Vec<BTreeSet<Vec<u32>>> = Vec::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            assert!(s.iter().all(|&v| (v as usize) < labels.len()), "vertex out of range");
            add_with_faces(&mut by_dim, s);
        }
        SimplicialComplex::from_levels(labels, by_dim.into_iter().map(|l| l.into_iter().collect()).collect())
    }

    /// Trusts that `by_dim[d]` lists closed, deduplicated `d`-simplices.
    pub(crate) fn from_levels(labels: Vec<VertexLabel>, by_dim: Vec<Vec<Vec<u32>>>) -> SimplicialComplex {
        let mut levels = Vec::with_capacity(by_dim.len());
        for (d, mut list) in by_dim.into_iter().enumerate() {
            list.sort_unstable();
            list.dedup();
            let mut data = Vec::with_capacity(list.len() * (d + 1));
            for s in list {
                debug_assert_eq!(s.len(), d + 1);
                data.extend_from_slice(&s);
            }
            levels.push(Level { width: d + 1, data });
        }
        while levels.last().is_some_and(|l| l.len() == 0) {
            levels.pop();
        }
        SimplicialComplex { labels, levels }
    }

    /// Complex on the given labels with every vertex a 0-simplex.
    pub fn discrete(labels: Vec<VertexLabel>) -> SimplicialComplex {
        let n = labels.len() as u32;
        SimplicialComplex::from_simplices(labels, (0..n).map(|v| vec![v]))
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &VertexLabel {
        &self.labels[v as usize]
    }

    /// Dimension; `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.levels.len() as isize - 1
    }

    pub fn num_simplices(&self, d: usize) -> usize {
        self.levels.get(d).map_or(0, Level::len)
    }

    pub fn total_simplices(&self) -> usize {
        self.levels.iter().map(Level::len).sum()
    }

    /// f-vector `(f_0, f_1, ...)`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.levels.iter().map(Level::len).collect()
    }

    pub fn simplex(&self, d: usize, i: usize) -> &[u32] {
        self.levels[d].get(i)
    }

    pub fn simplices(&self, d: usize) -> impl Iterator<Item = &[u32]> + '_ {
        let lvl = self.levels.get(d);
        (0..lvl.map_or(0, Level::len)).map(move |i| lvl.unwrap().get(i))
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.levels.len()).flat_map(move |d| self.simplices(d))
    }

    /// Index of a sorted simplex within its dimension.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.levels.get(s.len() - 1)?.position(s)
    }

    /// Membership; the empty simplex is always a member.
    pub fn contains(&self, s: &[u32]) -> bool {
        if s.is_empty() {
            return true;
        }
        let mut t = s.to_vec();
        t.sort_unstable();
        t.dedup();
        t.len() == s.len() && self.index_of(&t).is_some()
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.simplices(0).map(|s| s[0]).collect()
    }

    pub fn vertex_by_label(&self, l: &VertexLabel) -> Option<u32> {
        self.labels.iter().position(|x| x == l).map(|i| i as u32)
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for d in 0..self.levels.len() {
            let mut covered: BTreeSet<&[u32]> = BTreeSet::new();
            let mut face = Vec::with_capacity(d + 1);
            for t in self.simplices(d + 1) {
                for skip in 0..t.len() {
                    face.clear();
                    face.extend(t.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    if let Some(i) = self.index_of(&face) {
                        covered.insert(self.simplex(d, i));
                    }
                }
            }
            out.extend(self.simplices(d).filter(|s| !covered.contains(s)).map(<[u32]>::to_vec));
        }
        out
    }

    /// True iff every face of every stored simplex is stored.
    pub fn is_closed(&self) -> bool {
        let mut face = Vec::new();
        for d in 1..self.levels.len() {
            for s in self.simplices(d) {
                for skip in 0..s.len() {
                    face.clear();
                    face.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    if self.index_of(&face).is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff every simplex of `self` is a simplex of `other` (same
    /// vertex numbering).
    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.all_simplices().all(|s| other.index_of(s).is_some())
    }

    pub fn check_contains(&self, s: &[u32]) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::NotASimplex(s.to_vec()))
        }
    }

    /// The simplices not containing any of `s`'s vertices whose union with
    /// `s` is a simplex.
    pub fn link(&self, s: &[u32]) -> Result<SimplicialComplex> {
        self.check_contains(s)?;
        let sig: BTreeSet<u32> = s.iter().copied().collect();
        let mut by_dim: Vec<Vec<Vec<u32>>> = Vec::new();
        for d in sig.len()..self.levels.len() {
            for t in self.simplices(d) {
                if sig.iter().all(|v| t.binary_search(v).is_ok()) {
                    let rest: Vec<u32> = t.iter().copied().filter(|v| !sig.contains(v)).collect();
                    if rest.is_empty() {
                        continue;
                    }
                    let k = rest.len() - 1;
                    if by_dim.len() <= k {
                        by_dim.resize(k + 1, Vec::new());
                    }
                    by_dim[k].push(rest);
                }
            }
        }
        Ok(SimplicialComplex::from_levels(self.labels.clone(), by_dim))
    }

    /// Closed star: all faces of simplices containing `s`.
    pub fn star(&self, s: &[u32]) -> Result<SimplicialComplex> {
        self.check_contains(s)?;
        let cofaces = self
            .all_simplices()
            .filter(|t| s.iter().all(|v| t.binary_search(v).is_ok()))
            .map(<[u32]>::to_vec)
            .collect::<Vec<_>>();
        Ok(SimplicialComplex::from_simplices(self.labels.clone(), cofaces))
    }

    /// Full subcomplex on the given vertices, renumbered in increasing order
    /// of the original indices.
    pub fn full_subcomplex(&self, vertices: &[u32]) -> SimplicialComplex {
        let keep: BTreeSet<u32> = vertices.iter().copied().filter(|&v| self.index_of(&[v]).is_some()).collect();
        let renumber: HashMap<u32, u32> = keep.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let labels: Vec<VertexLabel> = keep.iter().map(|&v| self.labels[v as usize].clone()).collect();
        let mut by_dim = Vec::new();
        for d in 0..self.levels.len() {
            let lvl: Vec<Vec<u32>> = self
                .simplices(d)
                .filter(|s| s.iter().all(|v| keep.contains(v)))
                .map(|s| s.iter().map(|v| renumber[v]).collect())
                .collect();
            if lvl.is_empty() {
                break;
            }
            by_dim.push(lvl);
        }
        SimplicialComplex::from_levels(labels, by_dim)
    }

    /// Drops labels that are not vertices, renumbering.
    pub fn compact(&self) -> SimplicialComplex {
        self.full_subcomplex(&self.vertices())
    }

    /// Join with vertices tagged by slot 0 (for `self`) and slot 1.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let a = self.compact();
        let b = other.compact();
        let off = a.labels.len() as u32;
        let mut labels: Vec<VertexLabel> = a.labels.iter().map(|l| VertexLabel::slot(0, l.clone())).collect();
        labels.extend(b.labels.iter().map(|l| VertexLabel::slot(1, l.clone())));
        let mut by_dim: Vec<Vec<Vec<u32>>> = vec![Vec::new(); (a.dim() + b.dim() + 2).max(0) as usize];
        let left: Vec<&[u32]> = std::iter::once(&[][..]).chain(a.all_simplices()).collect();
        let right: Vec<&[u32]> = std::iter::once(&[][..]).chain(b.all_simplices()).collect();
        for s in &left {
            for t in &right {
                if s.is_empty() && t.is_empty() {
                    continue;
                }
                let mut u: Vec<u32> = s.to_vec();
                u.extend(t.iter().map(|v| v + off));
                by_dim[u.len() - 1].push(u);
            }
        }
        SimplicialComplex::from_levels(labels, by_dim)
    }

    /// Simplices common to both complexes, matching vertices by label.
    /// Vertex numbering follows `self`.
    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let index: HashMap<&VertexLabel, u32> = other.labels.iter().enumerate().map(|(i, l)| (l, i as u32)).collect();
        let map: Vec<Option<u32>> = self.labels.iter().map(|l| index.get(l).copied()).collect();
        let mut by_dim = Vec::new();
        for d in 0..self.levels.len() {
            let mut lvl = Vec::new();
            let mut img = Vec::with_capacity(d + 1);
            for s in self.simplices(d) {
                img.clear();
                if s.iter().all(|&v| map[v as usize].map(|w| img.push(w)).is_some()) {
                    img.sort_unstable();
                    if other.index_of(&img).is_some() {
                        lvl.push(s.to_vec());
                    }
                }
            }
            if lvl.is_empty() {
                break;
            }
            by_dim.push(lvl);
        }
        SimplicialComplex::from_levels(self.labels.clone(), by_dim).compact()
    }

    /// Simplices of `self` (as label sets) equal those of `other`.
    pub fn same_simplices_by_label(&self, other: &SimplicialComplex) -> bool {
        let key = |k: &SimplicialComplex| -> BTreeSet<Vec<VertexLabel>> {
            k.all_simplices()
                .map(|s| {
                    let mut v: Vec<VertexLabel> = s.iter().map(|&x| k.labels[x as usize].clone()).collect();
                    v.sort();
                    v
                })
                .collect()
        };
        self.f_vector() == other.f_vector() && key(self) == key(other)
    }

    /// File form: `#vertices V`, `V` label lines, then one simplex per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("#vertices {}\n", self.labels.len());
        for l in &self.labels {
            s.push_str(&l.to_text());
            s.push('\n');
        }
        for t in self.all_simplices() {
            let v: Vec<String> = t.iter().map(ToString::to_string).collect();
            s.push_str(&v.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<SimplicialComplex> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let v: usize = header
            .strip_prefix("#vertices ")
            .and_then(|x| x.trim().parse().ok())
            .ok_or(Error::Parse { line: 1, msg: "expected `#vertices V`".into() })?;
        let mut labels = Vec::with_capacity(v);
        for _ in 0..v {
            let (ln, l) = lines.next().ok_or(Error::Parse { line: v + 1, msg: "missing label".into() })?;
            labels.push(VertexLabel::parse(l).map_err(|msg| Error::Parse { line: ln + 1, msg })?);
        }
        let mut simplices = Vec::new();
        for (ln, l) in lines {
            if l.trim().is_empty() {
                continue;
            }
            let s: std::result::Result<Vec<u32>, _> = l.split_whitespace().map(str::parse).collect();
            let s = s.map_err(|_| Error::Parse { line: ln + 1, msg: "bad vertex index".into() })?;
            if s.iter().any(|&x| x as usize >= v) {
                return Err(Error::Parse { line: ln + 1, msg: "vertex index out of range".into() });
            }
            simplices.push(s);
        }
        Ok(SimplicialComplex::from_simplices(labels, simplices))
    }
}

fn add_with_faces(by_dim: &mut Vec<BTreeSet<Vec<u32>>>, s: Vec<u32>) {
    let d = s.len() - 1;
    if by_dim.len() <= d {
        by_dim.resize(d + 1, BTreeSet::new());
    }
    if by_dim[d].contains(&s) {
        return;
    }
    if s.len() > 1 {
        for skip in 0..s.len() {
            let f: Vec<u32> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            add_with_faces(by_dim, f);
        }
    }
    by_dim[d].insert(s);
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex(f = {:?})", self.f_vector())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn points(n: usize) -> Vec<VertexLabel> {
        (0..n).map(|i| VertexLabel::Point(i.to_string())).collect()
    }

    fn triangle_boundary() -> SimplicialComplex {
        SimplicialComplex::from_simplices(points(3), vec![vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    #[test]
    fn faces_are_added() {
        let k = SimplicialComplex::from_simplices(points(3), vec![vec![2, 0, 1]]);
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        assert!(k.is_closed());
        assert_eq!(k.facets(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn join_of_three_points() {
        let a = SimplicialComplex::discrete(points(3));
        let j = a.join(&a);
        assert_eq!(j.f_vector(), vec![6, 9]);
    }

    #[test]
    fn link_and_star() {
        let t = triangle_boundary();
        let l = t.link(&[0]).unwrap();
        assert_eq!(l.f_vector(), vec![2]);
        assert_eq!(l.vertices(), vec![1, 2]);
        let s = t.star(&[0]).unwrap();
        assert_eq!(s.f_vector(), vec![3, 2]);
        assert!(t.link(&[0, 1, 2]).is_err());
        assert_eq!(t.full_subcomplex(&[0, 1, 2]), t);
    }

    #[test]
    fn text_round_trip() {
        let t = triangle_boundary().join(&SimplicialComplex::discrete(points(2)));
        let s = t.to_text();
        let back = SimplicialComplex::from_text(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), s);
        let e = SimplicialComplex::empty();
        assert_eq!(SimplicialComplex::from_text(&e.to_text()).unwrap(), e);
    }

    #[test]
    fn module_labels_round_trip() {
        let m = Submodule::from_rows(Ring::Integers, 3, &[vec![1, -1, 0]]);
        let l = VertexLabel::slot(2, VertexLabel::Splitting(m.clone(), Submodule::zero(Ring::Integers, 3)));
        assert_eq!(VertexLabel::parse(&l.to_text()).unwrap(), l);
    }

    #[test]
    fn intersection_by_labels() {
        let k = SimplicialComplex::from_simplices(points(3), vec![vec![0, 1], vec![1, 2]]);
        let l = SimplicialComplex::from_simplices(points(3), vec![vec![0, 1], vec![0, 2]]);
        let i = k.intersection(&l);
        assert_eq!(i.f_vector(), vec![3, 1]);
    }
}
