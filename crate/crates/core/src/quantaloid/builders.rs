//! Quantaloids used as bases for tests, fixtures and the oracle.
//!
//! Every builder returns a quantaloid that has passed [`Quantaloid::verify`].

use std::collections::BTreeMap;

use super::{Quantaloid, QuantaloidError};
use crate::order::FiniteLattice;

const MAX_POWERSET_BITS: usize = 4;
const MAX_ENDO_LATTICE: usize = 6;

fn verified(q: Quantaloid) -> Result<Quantaloid, QuantaloidError> {
    match q.verify().into_iter().next() {
        None => Ok(q),
        Some(v) => Err(QuantaloidError::NotAQuantaloid(v)),
    }
}

/// The two-element locale `{0 < 1}` with `∘ = ∧` and unit `1`. Categories over it are preorders.
pub fn boolean_quantale() -> Quantaloid {
    let two = FiniteLattice::chain(2);
    Quantaloid::quantale("*", two, |g, f| g.min(f), 1).expect("boolean quantale tables are well-shaped")
}

/// Truncated addition on `{0, 1, ..., n}` with `n` playing the role of `∞`.
///
/// The order is reversed (`0` is the top and the unit, `n` the bottom) and composition is
/// `min(g + f, n)`. Element `i` has index `i`.
pub fn chain_quantale(n: usize) -> Result<Quantaloid, QuantaloidError> {
    if n == 0 {
        return Err(QuantaloidError::Builder("chain_quantale needs n >= 1".into()));
    }
    let names = (0..=n).map(|i| if i == n { "inf".to_string() } else { i.to_string() }).collect();
    let lattice = FiniteLattice::from_named_order(names, |i, j| i >= j)?;
    verified(Quantaloid::quantale("*", lattice, |g, f| (g + f).min(n), 0)?)
}

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    table: Vec<Vec<usize>>,
    unit: usize,
}

impl FiniteMonoid {
    pub fn new(table: Vec<Vec<usize>>, unit: usize) -> Result<Self, QuantaloidError> {
        let n = table.len();
        let bad = |msg: &str| Err(QuantaloidError::Builder(format!("monoid: {msg}")));
        if n == 0 || unit >= n {
            return bad("needs a unit inside a non-empty carrier");
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&e| e >= n)) {
            return bad("table is not square over the carrier");
        }
        for a in 0..n {
            if table[unit][a] != a || table[a][unit] != a {
                return bad("unit law fails");
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("multiplication is not associative");
                    }
                }
            }
        }
        Ok(Self { table, unit })
    }

    /// The cyclic group `Z/n` under addition.
    pub fn cyclic(n: usize) -> Result<Self, QuantaloidError> {
        Self::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(), 0)
    }

    /// `{1, a}` with `a·a = a`.
    pub fn idempotent() -> Self {
        Self::new(vec![vec![0, 1], vec![1, 1]], 0).expect("idempotent monoid")
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

/// Subsets of a monoid `M`, ordered by inclusion, with `T ∘ S = {t·s | t ∈ T, s ∈ S}` and
/// unit `{e}`. The underlying lattice is Boolean, hence a locale.
pub fn powerset_monoid_quantale(m: &FiniteMonoid) -> Result<Quantaloid, QuantaloidError> {
    let k = m.len();
    if k > MAX_POWERSET_BITS {
        return Err(QuantaloidError::Builder(format!(
            "monoid has {k} elements; at most {MAX_POWERSET_BITS} supported"
        )));
    }
    let lattice = FiniteLattice::powerset(k);
    let product = |t: usize, s: usize| {
        let mut out = 0usize;
        for a in (0..k).filter(|a| t >> a & 1 == 1) {
            for b in (0..k).filter(|b| s >> b & 1 == 1) {
                out |= 1 << m.mul(a, b);
            }
        }
        out
    };
    verified(Quantaloid::quantale("*", lattice, product, 1 << m.unit)?)
}

/// A finite directed graph given by vertex count and edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DiGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        Self { vertices, edges }
    }
}

const MAX_PATHS: usize = 4;

/// The free quantaloid on an acyclic graph: `Q(x,y)` is the powerset of paths from `x`
/// to `y`, composition is elementwise concatenation and `1_x = {empty path}`.
pub fn free_quantaloid_on_graph(g: &DiGraph) -> Result<Quantaloid, QuantaloidError> {
    let n = g.vertices;
    if n == 0 {
        return Err(QuantaloidError::Builder("graph has no vertices".into()));
    }
    if let Some(&(s, t)) = g.edges.iter().find(|&&(s, t)| s >= n || t >= n) {
        return Err(QuantaloidError::Builder(format!("edge {s}->{t} leaves the vertex set")));
    }
    // paths[x][y], each path a list of edge indices
    let mut paths = vec![vec![Vec::<Vec<usize>>::new(); n]; n];
    for x in 0..n {
        let mut stack = vec![(x, Vec::<usize>::new())];
        while let Some((v, path)) = stack.pop() {
            if path.len() > g.edges.len() {
                return Err(QuantaloidError::Builder("graph has a cycle".into()));
            }
            for (e, &(s, t)) in g.edges.iter().enumerate() {
                if s == v {
                    let mut next = path.clone();
                    next.push(e);
                    stack.push((t, next));
                }
            }
            paths[x][v].push(path);
        }
    }
    for x in 0..n {
        for y in 0..n {
            paths[x][y].sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            if paths[x][y].len() > MAX_PATHS {
                return Err(QuantaloidError::Builder(format!(
                    "{} paths from {x} to {y}; at most {MAX_PATHS} supported",
                    paths[x][y].len()
                )));
            }
        }
    }
    let index: Vec<Vec<BTreeMap<Vec<usize>, usize>>> = paths
        .iter()
        .map(|row| row.iter().map(|ps| ps.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()).collect())
        .collect();
    let path_name = |p: &Vec<usize>| {
        if p.is_empty() {
            "id".to_string()
        } else {
            p.iter().map(|e| format!("e{e}")).collect::<Vec<_>>().join(".")
        }
    };
    let mut homs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let ps = &paths[x][y];
            let k = ps.len();
            let names = (0..1usize << k)
                .map(|m| {
                    let items: Vec<String> = (0..k).filter(|i| m >> i & 1 == 1).map(|i| path_name(&ps[i])).collect();
                    format!("{{{}}}", items.join(","))
                })
                .collect();
            homs.push(FiniteLattice::from_named_order(names, |i, j| i & !j == 0)?);
        }
    }
    let mut tables = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (pxy, pyz) = (&paths[x][y], &paths[y][z]);
                let table = (0..1usize << pyz.len())
                    .map(|gm| {
                        (0..1usize << pxy.len())
                            .map(|fm| {
                                let mut out = 0usize;
                                let fs = pxy.iter().enumerate().filter(|(i, _)| fm >> i & 1 == 1);
                                for (_, p) in fs {
                                    let gs = pyz.iter().enumerate().filter(|(j, _)| gm >> j & 1 == 1);
                                    for (_, q) in gs {
                                        let mut pq = p.clone();
                                        pq.extend_from_slice(q);
                                        out |= 1 << index[x][z][&pq];
                                    }
                                }
                                out
                            })
                            .collect()
                    })
                    .collect();
                tables.push(table);
            }
        }
    }
    // the empty path is the only path from x to x, so {id} has mask 1
    let units = vec![1; n];
    let names = (0..n).map(|v| format!("v{v}")).collect();
    verified(Quantaloid::new(names, homs, tables, units)?)
}

/// Sup-preserving endomaps of `L`, ordered pointwise, composed as maps, with the identity
/// as unit. For non-distributive `L` the hom-lattice is non-distributive too.
pub fn endo_quantale(l: &FiniteLattice) -> Result<Quantaloid, QuantaloidError> {
    let n = l.len();
    if n > MAX_ENDO_LATTICE {
        return Err(QuantaloidError::Builder(format!(
            "lattice has {n} elements; at most {MAX_ENDO_LATTICE} supported"
        )));
    }
    let maps = sup_endomaps(l);
    let names = maps.iter().map(|m| m.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")).collect();
    let lattice = FiniteLattice::from_named_order(names, |i, j| (0..n).all(|x| l.leq(maps[i][x], maps[j][x])))?;
    let index: BTreeMap<&[usize], usize> = maps.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let identity: Vec<usize> = (0..n).collect();
    let unit = index[identity.as_slice()];
    let compose = |g: usize, f: usize| {
        let gf: Vec<usize> = (0..n).map(|x| maps[g][maps[f][x]]).collect();
        index[gf.as_slice()]
    };
    verified(Quantaloid::quantale("*", lattice, compose, unit)?)
}

/// All maps `L → L` preserving the empty join and binary joins, in lexicographic order.
fn sup_endomaps(l: &FiniteLattice) -> Vec<Vec<usize>> {
    let n = l.len();
    let mut out = Vec::new();
    let mut map = vec![0usize; n];
    let total = n.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for slot in map.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        if map[l.bottom()] != l.bottom() {
            continue;
        }
        let preserves = (0..n).all(|x| (0..n).all(|y| map[l.join2(x, y)] == l.join2(map[x], map[y])));
        if preserves {
            out.push(map.clone());
        }
    }
    out
}
