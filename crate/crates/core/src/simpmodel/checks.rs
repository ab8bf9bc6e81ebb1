use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::{d_model, face_seq, seq_is_base, strict_splittings, Cell, Face, SemiSimplicialModel, SlotKind};
use crate::cbp::{CbpCache, Collection};
use crate::complexes::{higher_tits, Caps};
use crate::error::{Error, Result};
use crate::exactlin::{FieldLattice, Ring};
use crate::homology::{reduced_homology, HomologyProfile};

/// Homology of the higher building and of the model, which should differ by
/// a shift of `a + b + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct SuspensionReport {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub p: u32,
    pub building: HomologyProfile,
    pub model: HomologyProfile,
    pub shift: i64,
    pub pass: bool,
}

pub fn check_suspension(a: usize, b: usize, n: usize, p: u32, caps: &Caps) -> Result<SuspensionReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("the comparison needs n >= 1".into()));
    }
    let empty = Collection::new(Ring::prime_field(p as u64)?, n, Vec::new())?;
    let building = reduced_homology(&higher_tits(a, b, n, p, &empty, caps)?);
    let model = d_model(a, b, n, p, caps)?.homology();
    let shift = (a + b + 1) as i64;
    let pass = building.shift(shift) == model;
    Ok(SuspensionReport { a, b, n, p, building, model, shift, pass })
}

/// Counts of nondegenerate simplices on both sides at one multidegree; the
/// last entry of `multidegree` is the bar direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BidegreeCount {
    pub multidegree: Vec<usize>,
    pub bar: usize,
    pub model: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BarModelReport {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub p: u32,
    pub cutoff: usize,
    pub counts: Vec<BidegreeCount>,
    pub injective: bool,
    pub faces_checked: usize,
    pub face_mismatches: usize,
    pub pass: bool,
}

/// A simplex of the bar construction: an ordered decomposition into nonzero
/// parts and, for each part, a (possibly degenerate) simplex of the model
/// of that part.
#[derive(Debug, Clone)]
struct BarSimplex {
    parts: Vec<u32>,
    xs: Vec<Cell>,
}

/// Non-basepoint simplices of `D(A)` at a fixed multidegree, degenerate ones
/// included, inside the ambient lattice.
fn part_simplices(lat: &FieldLattice, kinds: &[SlotKind], within: u32, md: &[usize], cache: &mut CbpCache) -> Result<Vec<Cell>> {
    let below: Vec<u32> = (0..lat.len() as u32).filter(|&x| lat.leq(x, within)).collect();
    let z = lat.zero_id();
    let slot_options: Vec<Vec<Vec<u32>>> = kinds
        .iter()
        .zip(md)
        .map(|(&k, &p)| match k {
            SlotKind::Flag => {
                let mut out = Vec::new();
                let mut cur = vec![z];
                weak_flags(lat, &below, within, p, &mut cur, &mut out);
                out
            }
            SlotKind::Split => {
                let mut out = Vec::new();
                let mut cur = vec![z];
                weak_splits(lat, &below, within, p, z, &mut cur, &mut out);
                out
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut cur: Cell = Vec::new();
    let mut ids = vec![within];
    product_with_cbp(&slot_options, cache, &mut cur, &mut ids, &mut out)?;
    Ok(out)
}

fn weak_flags(lat: &FieldLattice, below: &[u32], top: u32, p: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if p == 0 {
        if cur[0] == top {
            out.push(cur.clone());
        }
        return;
    }
    if cur.len() == p {
        let last = *cur.last().unwrap();
        if lat.leq(last, top) {
            let mut f = cur.clone();
            f.push(top);
            out.push(f);
        }
        return;
    }
    let last = *cur.last().unwrap();
    for &x in below {
        if lat.leq(last, x) {
            cur.push(x);
            weak_flags(lat, below, top, p, cur, out);
            cur.pop();
        }
    }
}

fn weak_splits(lat: &FieldLattice, below: &[u32], top: u32, p: usize, sum: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let z = lat.zero_id();
    if cur.len() == p + 1 {
        if sum == top {
            let mut s = cur.clone();
            s.push(z);
            out.push(s);
        }
        return;
    }
    for &x in below {
        if lat.meet(sum, x) == z {
            cur.push(x);
            weak_splits(lat, below, top, p, lat.join(sum, x), cur, out);
            cur.pop();
        }
    }
}

fn product_with_cbp(
    options: &[Vec<Vec<u32>>],
    cache: &mut CbpCache,
    cur: &mut Cell,
    ids: &mut Vec<u32>,
    out: &mut Vec<Cell>,
) -> Result<()> {
    if cur.len() == options.len() {
        out.push(cur.clone());
        return Ok(());
    }
    for seq in &options[cur.len()] {
        let mark = ids.len();
        ids.extend_from_slice(seq);
        if cache.check(ids)? {
            cur.push(seq.clone());
            product_with_cbp(options, cache, cur, ids, out)?;
            cur.pop();
        }
        ids.truncate(mark);
    }
    Ok(())
}

fn jointly_degenerate(lat: &FieldLattice, kinds: &[SlotKind], xs: &[Cell]) -> bool {
    let z = lat.zero_id();
    kinds.iter().enumerate().any(|(j, &k)| {
        let p = k.degree(&xs[0][j]);
        (0..p).any(|i| {
            xs.iter().all(|x| match k {
                SlotKind::Flag => x[j][i] == x[j][i + 1],
                SlotKind::Split => x[j][i + 1] == z,
            })
        })
    })
}

/// The comparison map to `D^{a,b+1}`: blockwise sums, and the decomposition
/// as the new split slot.
fn to_model(lat: &FieldLattice, s: &BarSimplex) -> Cell {
    let z = lat.zero_id();
    let slots = s.xs[0].len();
    let mut cell: Cell = (0..slots)
        .map(|j| {
            let len = s.xs[0][j].len();
            (0..len).map(|k| s.xs.iter().fold(z, |acc, x| lat.join(acc, x[j][k]))).collect()
        })
        .collect();
    let mut split = vec![z];
    split.extend_from_slice(&s.parts);
    split.push(z);
    cell.push(split);
    cell
}

fn bar_face_slot(lat: &FieldLattice, kinds: &[SlotKind], s: &BarSimplex, j: usize, k: usize) -> Option<BarSimplex> {
    let mut xs = s.xs.clone();
    for (x, &part) in xs.iter_mut().zip(&s.parts) {
        x[j] = face_seq(kinds[j], lat, &x[j], k);
        if seq_is_base(kinds[j], lat, &x[j], part) {
            return None;
        }
    }
    Some(BarSimplex { parts: s.parts.clone(), xs })
}

fn bar_face_merge(lat: &FieldLattice, s: &BarSimplex, i: usize) -> BarSimplex {
    let mut parts = s.parts.clone();
    let merged = lat.join(parts[i], parts[i + 1]);
    parts.splice(i..i + 2, [merged]);
    let mut xs = s.xs.clone();
    let prod: Cell = xs[i].iter().zip(&xs[i + 1]).map(|(u, v)| u.iter().zip(v).map(|(&a, &b)| lat.join(a, b)).collect()).collect();
    xs.splice(i..i + 2, [prod]);
    BarSimplex { parts, xs }
}

/// Verifies the bijection between nondegenerate simplices of the bar
/// construction on `D^{a,b}_n` and of `D^{a,b+1}_n` in multidegrees up to
/// `cutoff`, together with all face maps.
pub fn check_bar_model(a: usize, b: usize, n: usize, p: u32, cutoff: usize, caps: &Caps) -> Result<BarModelReport> {
    let target: SemiSimplicialModel = d_model(a, b + 1, n, p, caps)?;
    let lat = target.lattice().clone();
    let k = a + b;
    let kinds: Vec<SlotKind> = (0..k).map(|s| if s < a { SlotKind::Flag } else { SlotKind::Split }).collect();
    let mut cache = CbpCache::new(&lat);

    let decomps: Vec<Vec<u32>> = strict_splittings(&lat)
        .into_iter()
        .map(|s| s[1..s.len() - 1].to_vec())
        .filter(|parts| parts.len() <= cutoff)
        .collect();
    let mut mds: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        mds = mds.into_iter().flat_map(|m| (0..=cutoff).map(move |x| [m.clone(), vec![x]].concat())).collect();
    }

    let mut bar: Vec<BarSimplex> = Vec::new();
    for parts in &decomps {
        if parts.is_empty() {
            // the empty decomposition is the unit, present only for n = 0
            bar.push(BarSimplex { parts: Vec::new(), xs: Vec::new() });
            continue;
        }
        for md in &mds {
            let per_part: Vec<Vec<Cell>> =
                parts.iter().map(|&part| part_simplices(&lat, &kinds, part, md, &mut cache)).collect::<Result<_>>()?;
            let mut idx = vec![0usize; parts.len()];
            if per_part.iter().any(Vec::is_empty) {
                continue;
            }
            loop {
                let xs: Vec<Cell> = idx.iter().zip(&per_part).map(|(&i, l)| l[i].clone()).collect();
                if !jointly_degenerate(&lat, &kinds, &xs) {
                    bar.push(BarSimplex { parts: parts.clone(), xs });
                    if bar.len() > caps.max_simplices {
                        return Err(Error::CapExceeded { what: "bar simplices", value: bar.len(), cap: caps.max_simplices });
                    }
                }
                let mut j = 0;
                while j < idx.len() {
                    idx[j] += 1;
                    if idx[j] < per_part[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == idx.len() {
                    break;
                }
            }
        }
    }

    let mut counts: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
    let mut images = HashSet::new();
    let mut injective = true;
    let mut faces_checked = 0usize;
    let mut face_mismatches = 0usize;
    for s in &bar {
        let img = if s.parts.is_empty() {
            // n = 0: the unit maps to the single simplex of D^{a,b+1}(0)
            (0..k).map(|j| if kinds[j] == SlotKind::Flag { vec![lat.zero_id()] } else { vec![lat.zero_id(); 2] }).chain([vec![lat.zero_id(); 2]]).collect()
        } else {
            to_model(&lat, s)
        };
        let md = target.multidegree(&img);
        counts.entry(md.clone()).or_default().0 += 1;
        match target.classify(img.clone()) {
            Face::Cell(_) if target.index_of(&img).is_some() => {}
            _ => {
                face_mismatches += 1;
                continue;
            }
        }
        if !images.insert(img.clone()) {
            injective = false;
        }
        if s.parts.is_empty() {
            continue;
        }
        let q = s.parts.len();
        for i in 0..=q {
            let expect = target.face(&img, k, i);
            let got = if i == 0 || i == q {
                Face::Base
            } else {
                let f = bar_face_merge(&lat, s, i - 1);
                if jointly_degenerate(&lat, &kinds, &f.xs) {
                    Face::Degenerate
                } else {
                    Face::Cell(to_model(&lat, &f))
                }
            };
            faces_checked += 1;
            if got != expect {
                face_mismatches += 1;
            }
        }
        for (j, &mdj) in md.iter().enumerate().take(k) {
            for f in 0..=mdj {
                let expect = target.face(&img, j, f);
                let got = match bar_face_slot(&lat, &kinds, s, j, f) {
                    None => Face::Base,
                    Some(t) if jointly_degenerate(&lat, &kinds, &t.xs) => Face::Degenerate,
                    Some(t) => Face::Cell(to_model(&lat, &t)),
                };
                faces_checked += 1;
                if got != expect {
                    face_mismatches += 1;
                }
            }
        }
    }
    for d in 0..=target.top_degree() {
        for c in target.cells(d) {
            let md = target.multidegree(c);
            if md.iter().all(|&x| x <= cutoff) {
                counts.entry(md).or_default().1 += 1;
            }
        }
    }
    let counts: Vec<BidegreeCount> =
        counts.into_iter().map(|(multidegree, (bar, model))| BidegreeCount { multidegree, bar, model }).collect();
    let pass = injective && face_mismatches == 0 && counts.iter().all(|c| c.bar == c.model);
    Ok(BarModelReport { a, b, n, p, cutoff, counts, injective, faces_checked, face_mismatches, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suspension_small() {
        for (a, b, n) in [(1, 0, 1), (1, 0, 2), (2, 0, 2), (0, 1, 2), (1, 1, 2)] {
            let r = check_suspension(a, b, n, 2, &Caps::default()).unwrap();
            assert!(r.pass, "{a} {b} {n}: {:?} vs {:?}", r.building, r.model);
        }
        let r = check_suspension(2, 0, 2, 2, &Caps::default()).unwrap();
        assert_eq!(r.model, HomologyProfile::from_bettis(&[(4, 4)]));
    }

    #[test]
    fn bar_model_small() {
        for n in [0, 1, 2] {
            let r = check_bar_model(1, 0, n, 2, 3, &Caps::default()).unwrap();
            assert!(r.pass, "n={n}: {r:?}");
        }
    }

    #[test]
    fn bar_model_rank_one_matches_split_model() {
        let r = check_bar_model(1, 0, 1, 2, 3, &Caps::default()).unwrap();
        let m = d_model(1, 1, 1, 2, &Caps::default()).unwrap();
        let total: usize = r.counts.iter().map(|c| c.bar).sum();
        assert_eq!(total, m.num_cells());
    }
}
