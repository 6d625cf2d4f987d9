//! Geometry and Z2 homology of the L×L torus.
//!
//! Sites live on an L×L periodic grid in row-major order. Each site owns
//! two edges: a horizontal edge toward its right neighbor and a vertical
//! edge toward its lower neighbor, so there are 2L² edges, indexed
//!
//! - horizontal edge of site (r, c): `r*L + c`
//! - vertical edge of site (r, c): `L² + r*L + c`
//!
//! Every site has a 4-edge star, every plaquette a 4-edge boundary, and
//! each edge belongs to exactly two of either, so the products of all star
//! (or all plaquette) operators are the identity: the torus carries two
//! leftover logical degrees of freedom, the winding parities (k_v, k_t).

use serde::Serialize;

use crate::{Error, Result};

/// Direction tag of an edge relative to its owning site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeDir {
    Horizontal,
    Vertical,
}

/// Winding parities of a closed chain around the two torus cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    pub k_v: bool,
    pub k_t: bool,
}

impl HomologyClass {
    pub const TRIVIAL: HomologyClass = HomologyClass {
        k_v: false,
        k_t: false,
    };

    /// Classes compose bitwise under chain addition.
    pub fn xor(self, other: HomologyClass) -> HomologyClass {
        HomologyClass {
            k_v: self.k_v ^ other.k_v,
            k_t: self.k_t ^ other.k_t,
        }
    }

    /// Fixed enumeration (0,0) → 0, (1,0) → 1, (0,1) → 2, (1,1) → 3,
    /// which is also the decoder's tie-breaking order.
    pub fn index(self) -> usize {
        usize::from(self.k_v) + 2 * usize::from(self.k_t)
    }

    pub fn from_index(i: usize) -> HomologyClass {
        HomologyClass {
            k_v: i & 1 != 0,
            k_t: i & 2 != 0,
        }
    }
}

/// A set of edges mod 2; error chains, corrections and logical loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainZ2 {
    edges: Vec<bool>,
}

impl ChainZ2 {
    pub fn empty(n_edges: usize) -> ChainZ2 {
        ChainZ2 {
            edges: vec![false; n_edges],
        }
    }

    pub fn from_edges(n_edges: usize, members: &[usize]) -> ChainZ2 {
        let mut c = ChainZ2::empty(n_edges);
        for &e in members {
            c.edges[e] = !c.edges[e];
        }
        c
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.iter().all(|&b| !b)
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges[edge]
    }

    pub fn toggle(&mut self, edge: usize) {
        self.edges[edge] = !self.edges[edge];
    }

    /// Number of edges in the chain.
    pub fn weight(&self) -> usize {
        self.edges.iter().filter(|&&b| b).count()
    }

    /// Symmetric difference; the group operation of the chain complex.
    pub fn xor(&self, other: &ChainZ2) -> ChainZ2 {
        assert_eq!(self.edges.len(), other.edges.len());
        ChainZ2 {
            edges: self
                .edges
                .iter()
                .zip(&other.edges)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        }
    }

    pub fn iter_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(e, _)| e)
    }
}

/// JSON debug form of a lattice: `{L, edge_list: [(site, dir), ...]}`.
#[derive(Debug, Serialize)]
pub struct LatticeJson {
    #[serde(rename = "L")]
    pub l: usize,
    pub edge_list: Vec<(usize, EdgeDir)>,
}

/// The L×L torus: sites, edges, stars, plaquettes and homology cuts.
#[derive(Debug, Clone)]
pub struct TorusLattice {
    l: usize,
    /// Edge endpoints (site, site), horizontal block then vertical block.
    endpoints: Vec<(usize, usize)>,
    stars: Vec<[usize; 4]>,
    plaquettes: Vec<[usize; 4]>,
    cut_v: Vec<usize>,
    cut_h: Vec<usize>,
}

impl TorusLattice {
    /// Build the torus; `l < 2` is rejected (homology degenerate).
    pub fn new(l: usize) -> Result<TorusLattice> {
        if l < 2 {
            return Err(Error::LatticeTooSmall(l));
        }
        let n = l * l;
        let mut endpoints = Vec::with_capacity(2 * n);
        for r in 0..l {
            for c in 0..l {
                endpoints.push((r * l + c, r * l + (c + 1) % l));
            }
        }
        for r in 0..l {
            for c in 0..l {
                endpoints.push((r * l + c, ((r + 1) % l) * l + c));
            }
        }
        let h = |r: usize, c: usize| (r % l) * l + (c % l);
        let v = |r: usize, c: usize| n + (r % l) * l + (c % l);
        let mut stars = Vec::with_capacity(n);
        let mut plaquettes = Vec::with_capacity(n);
        for r in 0..l {
            for c in 0..l {
                stars.push([h(r, c), h(r, c + l - 1), v(r, c), v(r + l - 1, c)]);
                plaquettes.push([h(r, c), h(r + 1, c), v(r, c), v(r, c + 1)]);
            }
        }
        let cut_v = (0..l).map(|r| h(r, 0)).collect();
        let cut_h = (0..l).map(|c| v(0, c)).collect();
        Ok(TorusLattice {
            l,
            endpoints,
            stars,
            plaquettes,
            cut_v,
            cut_h,
        })
    }

    pub fn size(&self) -> usize {
        self.l
    }

    pub fn n_sites(&self) -> usize {
        self.l * self.l
    }

    pub fn n_edges(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn n_plaquettes(&self) -> usize {
        self.l * self.l
    }

    /// Endpoint sites of an edge.
    pub fn edge_endpoints(&self, edge: usize) -> (usize, usize) {
        self.endpoints[edge]
    }

    /// Index of the edge owned by `site` in direction `dir`.
    pub fn edge_index(&self, site: usize, dir: EdgeDir) -> usize {
        match dir {
            EdgeDir::Horizontal => site,
            EdgeDir::Vertical => self.l * self.l + site,
        }
    }

    /// (owning site, direction) of an edge.
    pub fn edge_label(&self, edge: usize) -> (usize, EdgeDir) {
        let n = self.l * self.l;
        if edge < n {
            (edge, EdgeDir::Horizontal)
        } else {
            (edge - n, EdgeDir::Vertical)
        }
    }

    /// The 4 edges incident to a site.
    pub fn star(&self, site: usize) -> [usize; 4] {
        self.stars[site]
    }

    /// The 4 boundary edges of a plaquette.
    pub fn plaquette(&self, p: usize) -> [usize; 4] {
        self.plaquettes[p]
    }

    /// Edges crossed by the vertical homology cut (horizontal edges in
    /// column 0). Crossing parity gives k_v.
    pub fn cut_v(&self) -> &[usize] {
        &self.cut_v
    }

    /// Edges crossed by the horizontal homology cut (vertical edges in
    /// row 0). Crossing parity gives k_t.
    pub fn cut_h(&self) -> &[usize] {
        &self.cut_h
    }

    /// The two plaquettes sharing an edge.
    pub fn edge_plaquettes(&self, edge: usize) -> (usize, usize) {
        let l = self.l;
        let n = l * l;
        if edge < n {
            let (r, c) = (edge / l, edge % l);
            (((r + l - 1) % l) * l + c, r * l + c)
        } else {
            let e = edge - n;
            let (r, c) = (e / l, e % l);
            (r * l + (c + l - 1) % l, r * l + c)
        }
    }

    /// Dual edge under the site↔plaquette swap. An involution-free
    /// bijection: the dual lattice is again indexed as an L×L torus.
    pub fn dual_edge(&self, edge: usize) -> usize {
        let l = self.l;
        let n = l * l;
        if edge < n {
            // horizontal edge at (r, c) separates plaquettes (r-1, c) and (r, c):
            // a vertical edge of the dual lattice owned by dual site (r-1, c)
            let (r, c) = (edge / l, edge % l);
            n + ((r + l - 1) % l) * l + c
        } else {
            // vertical edge at (r, c) separates plaquettes (r, c-1) and (r, c)
            let e = edge - n;
            let (r, c) = (e / l, e % l);
            r * l + (c + l - 1) % l
        }
    }

    /// Sites incident to an odd number of chain edges: the syndrome ∂E.
    pub fn boundary(&self, chain: &ChainZ2) -> Vec<usize> {
        assert_eq!(chain.len(), self.n_edges());
        let mut odd = vec![false; self.n_sites()];
        for e in chain.iter_edges() {
            let (u, v) = self.endpoints[e];
            odd[u] = !odd[u];
            odd[v] = !odd[v];
        }
        (0..self.n_sites()).filter(|&s| odd[s]).collect()
    }

    /// Winding class of a closed chain; non-closed chains are rejected.
    pub fn homology_class(&self, chain: &ChainZ2) -> Result<HomologyClass> {
        if !self.boundary(chain).is_empty() {
            return Err(Error::InvalidParameter(
                "homology class of a chain with nonempty boundary".into(),
            ));
        }
        Ok(self.homology_class_unchecked(chain))
    }

    /// Winding parity against the two cuts, without the closedness check.
    pub fn homology_class_unchecked(&self, chain: &ChainZ2) -> HomologyClass {
        let parity = |cut: &[usize]| cut.iter().filter(|&&e| chain.contains(e)).count() % 2 == 1;
        HomologyClass {
            k_v: parity(&self.cut_v),
            k_t: parity(&self.cut_h),
        }
    }

    /// Two closed chains of length L with classes (1,0) and (0,1): the
    /// straight horizontal cycle in row 0 and vertical cycle in column 0.
    pub fn logical_representatives(&self) -> (ChainZ2, ChainZ2) {
        let l = self.l;
        let n = l * l;
        let lv = ChainZ2::from_edges(2 * n, &(0..l).collect::<Vec<_>>());
        let lt = ChainZ2::from_edges(2 * n, &(0..l).map(|r| n + r * l).collect::<Vec<_>>());
        (lv, lt)
    }

    /// Debug serialization; emitted by the CLI, consumed by nobody.
    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            l: self.l,
            edge_list: (0..self.n_edges()).map(|e| self.edge_label(e)).collect(),
        }
    }
}
