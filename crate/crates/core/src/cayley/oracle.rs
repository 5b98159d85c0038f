//! Brute-force digraph isomorphism: backtracking over vertex individualization
//! with colour refinement on both digraphs under a shared palette.
//!
//! Uses nothing but the adjacency matrices, so it can referee the key and
//! multiplier machinery.

use super::CayleyDigraph;
use crate::error::{Error, Result};

pub const DEFAULT_ORACLE_CUTOFF: u64 = 12;

/// Returns a vertex bijection `φ` with `(x, y)` an arc of `a` iff `(φx, φy)`
/// is an arc of `b`, or `None` when the digraphs are not isomorphic.
///
/// Refuses inputs with more than `cutoff` vertices.
pub fn brute_force_isomorphic(a: &CayleyDigraph, b: &CayleyDigraph, cutoff: u64) -> Result<Option<Vec<u64>>> {
    if a.n() != b.n() {
        return Err(Error::ModulusMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    if a.connection().mode() != b.connection().mode() {
        return Err(Error::ModeMismatch);
    }
    if a.n() > cutoff {
        return Err(Error::OracleCutoff { n: a.n(), cutoff });
    }
    let search = Search {
        a: a.adjacency(),
        b: b.adjacency(),
    };
    let arcs = |m: &[Vec<bool>]| m.iter().flatten().filter(|&&x| x).count();
    if arcs(search.a) != arcs(search.b) {
        return Ok(None);
    }
    let n = a.n() as usize;
    Ok(search
        .extend(vec![0; n], vec![0; n])
        .map(|phi| phi.into_iter().map(|w| w as u64).collect()))
}

struct Search<'a> {
    a: &'a [Vec<bool>],
    b: &'a [Vec<bool>],
}

type Signature = (usize, Vec<usize>, Vec<usize>);

fn signatures(adj: &[Vec<bool>], colors: &[usize]) -> Vec<Signature> {
    let n = adj.len();
    (0..n)
        .map(|v| {
            let mut outs: Vec<usize> = (0..n).filter(|&u| adj[v][u]).map(|u| colors[u]).collect();
            let mut ins: Vec<usize> = (0..n).filter(|&u| adj[u][v]).map(|u| colors[u]).collect();
            outs.sort_unstable();
            ins.sort_unstable();
            (colors[v], outs, ins)
        })
        .collect()
}

fn histogram(colors: &[usize], size: usize) -> Vec<usize> {
    let mut h = vec![0; size];
    for &c in colors {
        h[c] += 1;
    }
    h
}

impl Search<'_> {
    /// Refines both colourings to a stable joint colouring. Returns false as
    /// soon as the colour class sizes differ between the two sides.
    fn refine(&self, ca: &mut Vec<usize>, cb: &mut Vec<usize>) -> bool {
        let mut classes = usize::MAX;
        loop {
            let sa = signatures(self.a, ca);
            let sb = signatures(self.b, cb);
            let mut palette: Vec<&Signature> = sa.iter().chain(&sb).collect();
            palette.sort_unstable();
            palette.dedup();
            let index = |s: &Signature| palette.binary_search(&s).expect("signature in palette");
            *ca = sa.iter().map(index).collect();
            *cb = sb.iter().map(index).collect();
            if histogram(ca, palette.len()) != histogram(cb, palette.len()) {
                return false;
            }
            if palette.len() == classes {
                return true;
            }
            classes = palette.len();
        }
    }

    fn extend(&self, mut ca: Vec<usize>, mut cb: Vec<usize>) -> Option<Vec<usize>> {
        if !self.refine(&mut ca, &mut cb) {
            return None;
        }
        let palette = ca.iter().max().map_or(0, |m| m + 1);
        let sizes = histogram(&ca, palette);
        let target = (0..palette).filter(|&c| sizes[c] > 1).min_by_key(|&c| sizes[c]);
        let Some(color) = target else {
            return self.verify(&ca, &cb);
        };
        let v = ca.iter().position(|&c| c == color)?;
        for w in (0..cb.len()).filter(|&w| cb[w] == color) {
            let (mut na, mut nb) = (ca.clone(), cb.clone());
            na[v] = palette;
            nb[w] = palette;
            if let Some(phi) = self.extend(na, nb) {
                return Some(phi);
            }
        }
        None
    }

    /// With a discrete colouring, the map pairs equal colours; check it.
    fn verify(&self, ca: &[usize], cb: &[usize]) -> Option<Vec<usize>> {
        let n = ca.len();
        let mut by_color = vec![0; n];
        for (w, &c) in cb.iter().enumerate() {
            by_color[c] = w;
        }
        let phi: Vec<usize> = ca.iter().map(|&c| by_color[c]).collect();
        let ok = (0..n).all(|x| (0..n).all(|y| self.a[x][y] == self.b[phi[x]][phi[y]]));
        ok.then_some(phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::{build_cayley, ConnectionSet, Mode};

    fn cay(n: u64, s: &[u64], mode: Mode) -> CayleyDigraph {
        build_cayley(&ConnectionSet::new(n, s.to_vec(), mode).unwrap())
    }

    fn check_witness(a: &CayleyDigraph, b: &CayleyDigraph, phi: &[u64]) {
        let mut sorted = phi.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..a.n()).collect::<Vec<_>>());
        for (x, y) in a.arcs() {
            assert!(b.has_arc(phi[x as usize], phi[y as usize]));
        }
    }

    #[test]
    fn classical_pair_on_z8() {
        let a = cay(8, &[1, 2, 5], Mode::Digraph);
        let b = cay(8, &[1, 5, 6], Mode::Digraph);
        let phi = brute_force_isomorphic(&a, &b, 12).unwrap().expect("isomorphic");
        check_witness(&a, &b, &phi);
        let c = cay(8, &[1, 2, 3], Mode::Digraph);
        assert_eq!(brute_force_isomorphic(&a, &c, 12).unwrap(), None);
    }

    #[test]
    fn directed_cycles() {
        let a = cay(5, &[1], Mode::Digraph);
        let b = cay(5, &[2], Mode::Digraph);
        let phi = brute_force_isomorphic(&a, &b, 12).unwrap().unwrap();
        check_witness(&a, &b, &phi);
    }

    #[test]
    fn non_isomorphic_same_degree() {
        // two 3-cycles versus a 6-cycle
        let a = cay(6, &[2, 4], Mode::Graph);
        let b = cay(6, &[1, 5], Mode::Graph);
        assert_eq!(brute_force_isomorphic(&a, &b, 12).unwrap(), None);
    }

    #[test]
    fn refusals() {
        let a = cay(13, &[1], Mode::Digraph);
        let err = brute_force_isomorphic(&a, &a, 12).unwrap_err();
        assert_eq!(err, Error::OracleCutoff { n: 13, cutoff: 12 });
        assert!(err.to_string().contains("oracle cutoff exceeded"));
        assert!(brute_force_isomorphic(&a, &a, 13).unwrap().is_some());
        let b = cay(12, &[1], Mode::Digraph);
        assert!(matches!(
            brute_force_isomorphic(&a, &b, 20),
            Err(Error::ModulusMismatch { .. })
        ));
        let g = cay(12, &[1, 11], Mode::Graph);
        let d = cay(12, &[1, 11], Mode::Digraph);
        assert_eq!(brute_force_isomorphic(&g, &d, 12), Err(Error::ModeMismatch));
    }
}
