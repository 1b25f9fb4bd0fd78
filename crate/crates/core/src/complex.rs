//! Abstract simplicial complexes: construction from facets, face enumeration,
//! links, skeleta, induced subcomplexes, simplicial neighborhoods, stellar
//! subdivision, and chordality / stackedness tests.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Vertex identifiers are dense non-negative integers.
pub type VertexId = u32;

/// Cap on full face-set materialization.
pub const FACE_MATERIALIZATION_CAP: u64 = 1_000_000;

/// A face of a simplicial complex: a strictly increasing sequence of vertex
/// identifiers. The empty sequence is the valid empty face of dimension -1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face(Vec<VertexId>);

impl Face {
    /// Builds a face from an arbitrary vertex list; duplicates collapse.
    pub fn new(mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Face(vertices)
    }

    pub fn empty() -> Self {
        Face(Vec::new())
    }

    pub fn vertex(v: VertexId) -> Self {
        Face(vec![v])
    }

    /// Dimension: one less than the number of vertices (-1 for the empty face).
    pub fn dim(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Subset test on sorted vertex lists.
    pub fn is_subset_of(&self, other: &Face) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                match w.cmp(v) {
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Less => {}
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Face::new(v)
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| other.contains_vertex(*v)).collect())
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| !other.contains_vertex(*v)).collect())
    }

    pub fn meets(&self, vertices: &BTreeSet<VertexId>) -> bool {
        self.0.iter().any(|v| vertices.contains(v))
    }

    /// All subsets with `size` vertices, in lexicographic order.
    pub fn subsets_of_len(&self, size: usize) -> Vec<Face> {
        self.0.iter().copied().combinations(size).map(Face).collect()
    }

    /// Codimension-one subfaces (drop one vertex each).
    pub fn boundary(&self) -> Vec<Face> {
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                Face(v)
            })
            .collect()
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A finite abstract simplicial complex, stored by its inclusion-maximal
/// faces. The empty face is a face of every complex, so the complex with no
/// facets is the void complex with f = (1).
#[derive(Clone)]
pub struct SimplicialComplex {
    facets: Vec<Face>,
    vertices: Vec<VertexId>,
    face_counts: OnceLock<Vec<u64>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}
impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex{:?}", self.facets)
    }
}

impl SimplicialComplex {
    /// The void complex: only the empty face.
    pub fn void() -> Self {
        SimplicialComplex { facets: Vec::new(), vertices: Vec::new(), face_counts: OnceLock::new() }
    }

    /// Builds a complex from a list of candidate facets. Inclusion-dominated
    /// entries are absorbed; duplicates collapse.
    pub fn from_facets<I, V>(facet_list: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: IntoIterator<Item = VertexId>,
    {
        let mut faces: Vec<Face> =
            facet_list.into_iter().map(|f| Face::new(f.into_iter().collect())).collect();
        // Sorting by decreasing size lets each face only be absorbed by earlier ones.
        faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        faces.dedup();
        let mut facets: Vec<Face> = Vec::with_capacity(faces.len());
        for face in faces {
            if face.is_empty() {
                continue;
            }
            if !facets.iter().any(|kept| face.is_subset_of(kept)) {
                facets.push(face);
            }
        }
        facets.sort();
        let vertices: BTreeSet<VertexId> =
            facets.iter().flat_map(|f| f.vertices().iter().copied()).collect();
        SimplicialComplex {
            facets,
            vertices: vertices.into_iter().collect(),
            face_counts: OnceLock::new(),
        }
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn vertex_set(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Dimension of the complex: max facet dimension, -1 for the void complex.
    pub fn dim(&self) -> i64 {
        self.facets.iter().map(|f| f.dim()).max().unwrap_or(-1)
    }

    /// Membership test: a face belongs to the complex iff it is contained in
    /// some facet. The empty face always belongs.
    pub fn contains(&self, face: &Face) -> bool {
        face.is_empty() || self.facets.iter().any(|t| face.is_subset_of(t))
    }

    /// True when every facet of `other` is a face of `self`.
    pub fn has_subcomplex(&self, other: &SimplicialComplex) -> bool {
        other.facets.iter().all(|f| self.contains(f))
    }

    /// The set of i-dimensional faces. `i = -1` yields the empty face alone;
    /// values above the dimension yield the empty set.
    pub fn faces_of_dim(&self, i: i64) -> Vec<Face> {
        if i < -1 {
            return Vec::new();
        }
        if i == -1 {
            return vec![Face::empty()];
        }
        let size = (i + 1) as usize;
        let mut out: BTreeSet<Face> = BTreeSet::new();
        for facet in &self.facets {
            if facet.len() >= size {
                for sub in facet.vertices().iter().copied().combinations(size) {
                    out.insert(Face(sub));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Per-dimension face counts (f_{-1}, f_0, ..., f_{dim}); memoized.
    pub fn face_counts(&self) -> &[u64] {
        self.face_counts.get_or_init(|| {
            let d = self.dim();
            let mut counts = vec![1u64];
            for i in 0..=d {
                counts.push(self.faces_of_dim(i).len() as u64);
            }
            counts
        })
    }

    /// Number of i-dimensional faces.
    pub fn f(&self, i: i64) -> u64 {
        if i < -1 || i > self.dim() {
            return 0;
        }
        self.face_counts()[(i + 1) as usize]
    }

    /// All faces including the empty face; guarded by the materialization cap.
    pub fn all_faces(&self) -> Result<Vec<Face>> {
        let bound: u64 = self.facets.iter().map(|f| 1u64 << f.len().min(62)).sum();
        if bound > 8 * FACE_MATERIALIZATION_CAP {
            return Err(Error::TooManyFaces(bound));
        }
        let mut out: BTreeSet<Face> = BTreeSet::new();
        out.insert(Face::empty());
        for facet in &self.facets {
            for size in 1..=facet.len() {
                for sub in facet.vertices().iter().copied().combinations(size) {
                    out.insert(Face(sub));
                }
            }
        }
        let total = out.len() as u64;
        if total > FACE_MATERIALIZATION_CAP {
            return Err(Error::TooManyFaces(total));
        }
        Ok(out.into_iter().collect())
    }

    /// Euler characteristic over the non-empty faces.
    pub fn euler_characteristic(&self) -> i64 {
        let counts = self.face_counts();
        counts[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// link(F) = { G : F ∩ G = ∅ and F ∪ G ∈ K }.
    pub fn link(&self, face: &Face) -> Result<SimplicialComplex> {
        if !self.contains(face) {
            return Err(Error::FaceNotInComplex(face.clone()));
        }
        Ok(SimplicialComplex::from_facets(
            self.facets
                .iter()
                .filter(|t| face.is_subset_of(t))
                .map(|t| t.difference(face).0),
        ))
    }

    /// Induced subcomplex on a vertex set W: all faces with vertices in W.
    pub fn induced(&self, w: &[VertexId]) -> Result<SimplicialComplex> {
        let wset: BTreeSet<VertexId> = w.iter().copied().collect();
        for &v in &wset {
            if self.vertices.binary_search(&v).is_err() {
                return Err(Error::UnknownVertex(v));
            }
        }
        // Every face of K inside W is contained in T ∩ W for some facet T,
        // and each T ∩ W is itself a face of K.
        Ok(SimplicialComplex::from_facets(self.facets.iter().map(|t| {
            t.vertices().iter().copied().filter(|v| wset.contains(v)).collect::<Vec<_>>()
        })))
    }

    /// Simplicial neighborhood of a subcomplex S: the subcomplex generated by
    /// all facets of K having a vertex in V(S).
    pub fn simplicial_neighborhood(&self, s: &SimplicialComplex) -> Result<SimplicialComplex> {
        if !self.has_subcomplex(s) {
            return Err(Error::NotSubcomplex);
        }
        let sv: BTreeSet<VertexId> = s.vertices.iter().copied().collect();
        Ok(SimplicialComplex::from_facets(
            self.facets.iter().filter(|t| t.meets(&sv)).map(|t| t.0.clone()),
        ))
    }

    /// i-th skeleton.
    pub fn skeleton(&self, i: i64) -> SimplicialComplex {
        if i < 0 {
            return SimplicialComplex::void();
        }
        let size = (i + 1) as usize;
        SimplicialComplex::from_facets(self.facets.iter().flat_map(|t| {
            if t.len() <= size {
                vec![t.0.clone()]
            } else {
                t.vertices().iter().copied().combinations(size).collect()
            }
        }))
    }

    /// Graph-metric ball N_r(v): vertices at 1-skeleton distance <= r from v,
    /// obtained by repeated simplicial neighborhoods in the 1-skeleton.
    pub fn graph_ball(&self, v: VertexId, r: usize) -> Result<Vec<VertexId>> {
        if self.vertices.binary_search(&v).is_err() {
            return Err(Error::UnknownVertex(v));
        }
        let skel = self.skeleton(1);
        let mut ball = SimplicialComplex::from_facets([[v]]);
        for _ in 0..r {
            ball = skel.simplicial_neighborhood(&ball)?;
        }
        Ok(ball.vertices.clone())
    }

    /// Stellar subdivision at a face F with a fresh vertex: faces containing F
    /// are replaced by cones over their F-boundary with the new apex.
    pub fn stellar_subdivide(&self, face: &Face, new_vertex: VertexId) -> Result<SimplicialComplex> {
        if !self.contains(face) {
            return Err(Error::FaceNotInComplex(face.clone()));
        }
        if face.dim() < 1 {
            return Err(Error::FaceTooSmall);
        }
        if self.vertices.binary_search(&new_vertex).is_ok() {
            return Err(Error::VertexCollision(new_vertex));
        }
        let mut facets: Vec<Face> = Vec::new();
        for t in &self.facets {
            if face.is_subset_of(t) {
                for x in face.vertices() {
                    let mut v: Vec<VertexId> =
                        t.vertices().iter().copied().filter(|u| u != x).collect();
                    v.push(new_vertex);
                    facets.push(Face::new(v));
                }
            } else {
                facets.push(t.clone());
            }
        }
        Ok(SimplicialComplex::from_facets(facets.into_iter().map(|f| f.0)))
    }

    /// Iterated stellar subdivision of all faces of dimension >= 1 meeting
    /// V(S), in order of decreasing dimension. Returns the subdivided complex
    /// together with the subdivided copy S' of S, which is induced in the
    /// result.
    pub fn subdivide_along(&self, s: &SimplicialComplex) -> Result<(SimplicialComplex, SimplicialComplex)> {
        if !self.has_subcomplex(s) {
            return Err(Error::NotSubcomplex);
        }
        let sv: BTreeSet<VertexId> = s.vertices.iter().copied().collect();
        let mut targets: Vec<Face> = Vec::new();
        for d in (1..=self.dim()).rev() {
            for f in self.faces_of_dim(d) {
                if f.meets(&sv) {
                    targets.push(f);
                }
            }
        }
        let mut next_vertex = self.vertices.last().map_or(0, |v| v + 1);
        let mut k = self.clone();
        let mut s_sub = s.clone();
        for f in targets {
            let nv = next_vertex;
            next_vertex += 1;
            k = k.stellar_subdivide(&f, nv)?;
            if s_sub.contains(&f) && f.dim() >= 1 {
                s_sub = s_sub.stellar_subdivide(&f, nv)?;
            }
        }
        Ok((k, s_sub))
    }

    /// Adjacency structure of the 1-skeleton.
    pub fn one_skeleton_graph(&self) -> Graph {
        let index: BTreeMap<VertexId, usize> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![BTreeSet::new(); self.vertices.len()];
        for facet in &self.facets {
            for pair in facet.vertices().iter().combinations(2) {
                let (a, b) = (index[pair[0]], index[pair[1]]);
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        Graph {
            labels: self.vertices.clone(),
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// Validates the simplicial 2-sphere conditions: pure of dimension 2,
    /// every edge in exactly two triangles, connected, Euler characteristic 2.
    pub fn check_2sphere(&self) -> Result<()> {
        if self.dim() != 2 {
            return Err(Error::NotA2Sphere(format!("dimension {} != 2", self.dim())));
        }
        if self.facets.iter().any(|f| f.dim() != 2) {
            return Err(Error::NotA2Sphere("not pure of dimension 2".into()));
        }
        let mut edge_degree: BTreeMap<Face, usize> = BTreeMap::new();
        for t in &self.facets {
            for e in t.boundary() {
                *edge_degree.entry(e).or_insert(0) += 1;
            }
        }
        if edge_degree.values().any(|&d| d != 2) {
            return Err(Error::NotA2Sphere("an edge is not in exactly 2 triangles".into()));
        }
        if !self.one_skeleton_graph().is_connected() {
            return Err(Error::NotA2Sphere("not connected".into()));
        }
        if self.euler_characteristic() != 2 {
            return Err(Error::NotA2Sphere(format!(
                "Euler characteristic {} != 2",
                self.euler_characteristic()
            )));
        }
        Ok(())
    }

    /// Serializes in the complex text format: `dim n_facets` header, then one
    /// facet per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.dim(), self.facets.len());
        for f in &self.facets {
            out.push_str(&f.vertices().iter().map(|v| v.to_string()).join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SimplicialComplex> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty complex file".into()))?;
        let mut parts = header.split_whitespace();
        let _dim: i64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad complex header".into()))?;
        let n_facets: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad complex header".into()))?;
        let mut facets = Vec::with_capacity(n_facets);
        for _ in 0..n_facets {
            let line = lines.next().ok_or_else(|| Error::Parse("missing facet line".into()))?;
            let facet: std::result::Result<Vec<VertexId>, _> =
                line.split_whitespace().map(|t| t.parse()).collect();
            facets.push(facet.map_err(|e| Error::Parse(format!("bad facet line: {e}")))?);
        }
        Ok(SimplicialComplex::from_facets(facets))
    }
}

/// An undirected graph with labelled vertices, as produced from 1-skeleta.
#[derive(Clone, Debug)]
pub struct Graph {
    labels: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(labels: Vec<VertexId>, edges: &[(usize, usize)]) -> Graph {
        let mut adj = vec![BTreeSet::new(); labels.len()];
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Graph { labels, adj: adj.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, ns) in self.adj.iter().enumerate() {
            for &j in ns {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.labels.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.labels.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for &j in &self.adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == self.labels.len()
    }
}

/// Chordality via maximum-cardinality search followed by verification of the
/// resulting perfect elimination ordering.
pub fn is_chordal(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    // Maximum-cardinality search: repeatedly pick an unvisited vertex with the
    // most visited neighbors.
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&i| !visited[i])
            .max_by_key(|&i| (weight[i], std::cmp::Reverse(i)))
            .unwrap();
        visited[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !visited[u] {
                weight[u] += 1;
            }
        }
    }
    // The reverse of an MCS order is a perfect elimination ordering iff the
    // graph is chordal. Verify: for each vertex, its earlier-ordered
    // neighborhood must be dominated through its latest earlier neighbor.
    let mut position = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }
    let adj_sets: Vec<HashSet<usize>> =
        g.adj.iter().map(|ns| ns.iter().copied().collect()).collect();
    for (pos, &v) in order.iter().enumerate() {
        let earlier: Vec<usize> =
            g.neighbors(v).iter().copied().filter(|&u| position[u] < pos).collect();
        if let Some(&parent) = earlier.iter().max_by_key(|&&u| position[u]) {
            for &u in &earlier {
                if u != parent && !adj_sets[parent].contains(&u) {
                    return false;
                }
            }
        }
    }
    true
}

/// Stackedness of a simplicial 2-sphere: validated as a 2-sphere, then tested
/// through chordality of the 1-skeleton.
pub fn is_stacked_2sphere(k: &SimplicialComplex) -> Result<bool> {
    k.check_2sphere()?;
    Ok(is_chordal(&k.one_skeleton_graph()))
}
