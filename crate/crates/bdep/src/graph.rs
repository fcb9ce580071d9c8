//! Finite simple connected graphs with per-vertex growth intensities.
//!
//! Vertices are dense indices `0..n`. Construction validates that the edge
//! relation is irreflexive and symmetric and that the graph is connected;
//! everything downstream relies on those invariants. Intensities are positive
//! integer weights (default 1) giving each vertex's relative growth rate;
//! they arise when equivalent vertices are merged by [`Graph::reduce_equivalent`].

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted neighbour lists, no self entries.
    neighbours: Vec<Vec<usize>>,
    intensities: Vec<u64>,
}

impl Graph {
    /// Build a graph from an edge list. Duplicate edges are rejected, as are
    /// self-loops, out-of-range endpoints and disconnected results.
    pub fn new(n: usize, edges: &[(usize, usize)], intensities: Option<Vec<u64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut neighbours = vec![Vec::new(); n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, vertices: n });
                }
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
            }
            if neighbours[a].contains(&b) {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{a}, {b}}}")));
            }
            neighbours[a].push(b);
            neighbours[b].push(a);
        }
        for list in &mut neighbours {
            list.sort_unstable();
        }
        let intensities = match intensities {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::InvalidGraph(format!(
                        "{} intensities for {} vertices",
                        w.len(),
                        n
                    )));
                }
                if w.iter().any(|&x| x == 0) {
                    return Err(Error::InvalidGraph("intensities must be >= 1".into()));
                }
                w
            }
            None => vec![1; n],
        };
        let g = Graph { n, neighbours, intensities };
        if !g.is_connected() {
            return Err(Error::NotConnected);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.neighbours.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// Edges as ordered pairs (a, b) with a < b.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..self.n {
            for &b in &self.neighbours[a] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn neighbours(&self, x: usize) -> &[usize] {
        &self.neighbours[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.neighbours[x].len()
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.neighbours[a].binary_search(&b).is_ok()
    }

    pub fn intensity(&self, x: usize) -> u64 {
        self.intensities[x]
    }

    pub fn intensities(&self) -> &[u64] {
        &self.intensities
    }

    /// Sum of all vertex intensities (the total jump rate of the
    /// continuous-time growth process).
    pub fn total_intensity(&self) -> u64 {
        self.intensities.iter().sum()
    }

    pub fn with_intensities(&self, intensities: Vec<u64>) -> Result<Self> {
        Graph::new(self.n, &self.edges(), Some(intensities))
    }

    /// The closed neighbourhood [x] = {x} union N(x), sorted.
    pub fn closed_neighbourhood(&self, x: usize) -> Result<Vec<usize>> {
        self.check_vertex(x)?;
        let mut nb = self.neighbours[x].clone();
        let pos = nb.partition_point(|&v| v < x);
        nb.insert(pos, x);
        Ok(nb)
    }

    /// A vertex adjacent to every other vertex ([x] = V).
    pub fn is_dominant(&self, x: usize) -> bool {
        self.degree(x) == self.n - 1
    }

    pub fn dominant_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.is_dominant(x)).collect()
    }

    fn check_vertex(&self, x: usize) -> Result<()> {
        if x >= self.n {
            return Err(Error::VertexOutOfRange { vertex: x, vertices: self.n });
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.neighbours[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Single-source BFS distances.
    pub fn bfs_distances(&self, root: usize) -> Result<Vec<u32>> {
        self.check_vertex(root)?;
        let mut dist = vec![u32::MAX; self.n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.neighbours[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Vertex order sorted by (BFS distance from root, vertex id). Growing
    /// vertices in this order from any height profile drives the surface back
    /// into the bounded core of its state space; see the surface module.
    pub fn non_decreasing_permutation(&self, root: usize) -> Result<Vec<usize>> {
        let dist = self.bfs_distances(root)?;
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (dist[v], v));
        Ok(order)
    }

    pub fn metrics(&self) -> GraphMetrics {
        let degrees: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let max_degree = *degrees.iter().max().unwrap();
        let min_degree = *degrees.iter().min().unwrap();
        let distances: Vec<Vec<u32>> =
            (0..self.n).map(|v| self.bfs_distances(v).unwrap()).collect();
        let diameter = distances
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap() as usize;
        GraphMetrics {
            vertices: self.n,
            edges: self.edge_count(),
            max_degree,
            min_degree,
            is_regular: max_degree == min_degree,
            girth: self.girth(),
            diameter,
            dominant_vertices: self.dominant_vertices(),
            distances,
        }
    }

    /// Length of a shortest cycle; `None` if the graph is acyclic.
    ///
    /// For every edge {u, v} the shortest cycle through it has length
    /// 1 + dist(u, v) in the graph with that edge removed.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (u, v) in self.edges() {
            let mut dist = vec![u32::MAX; self.n];
            dist[u] = 0;
            let mut queue = VecDeque::from([u]);
            'bfs: while let Some(a) = queue.pop_front() {
                for &b in &self.neighbours[a] {
                    if (a == u && b == v) || (a == v && b == u) {
                        continue;
                    }
                    if dist[b] == u32::MAX {
                        dist[b] = dist[a] + 1;
                        if b == v {
                            break 'bfs;
                        }
                        queue.push_back(b);
                    }
                }
            }
            if dist[v] != u32::MAX {
                let cycle = dist[v] as usize + 1;
                best = Some(best.map_or(cycle, |g| g.min(cycle)));
            }
        }
        best
    }

    /// Merge every class of vertices with identical closed neighbourhoods
    /// into a single vertex whose intensity is the class's intensity sum.
    /// Returns the merged graph and the map original vertex -> merged vertex.
    /// Idempotent: the result has pairwise distinct closed neighbourhoods.
    pub fn reduce_equivalent(&self) -> (Graph, Vec<usize>) {
        let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            classes
                .entry(self.closed_neighbourhood(v).unwrap())
                .or_default()
                .push(v);
        }
        let mut members: Vec<Vec<usize>> = classes.into_values().collect();
        // Stable ids: classes ordered by their smallest original vertex.
        members.sort_by_key(|c| c[0]);
        let mut map = vec![0usize; self.n];
        for (id, class) in members.iter().enumerate() {
            for &v in class {
                map[v] = id;
            }
        }
        let k = members.len();
        let mut edges = Vec::new();
        for a in 0..k {
            for b in (a + 1)..k {
                // Adjacency between classes is representative-independent:
                // equal closed neighbourhoods see the same outside vertices.
                if self.is_edge(members[a][0], members[b][0]) {
                    edges.push((a, b));
                }
            }
        }
        let intensities: Vec<u64> = members
            .iter()
            .map(|c| c.iter().map(|&v| self.intensities[v]).sum())
            .collect();
        let reduced = Graph::new(k, &edges, Some(intensities))
            .expect("quotient of a connected graph is connected");
        (reduced, map)
    }

    /// Inverse of [`Graph::reduce_equivalent`]: expand vertex x into
    /// `copies[x] * intensity(x)` mutually adjacent unit-intensity
    /// representatives, each wired to all representatives of x's neighbours.
    /// Merging the result back recovers this graph with intensities
    /// multiplied by `copies` (after merging any classes this graph already
    /// had).
    pub fn clone_vertices(&self, copies: &[usize]) -> Result<Graph> {
        if copies.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "{} copy counts for {} vertices",
                copies.len(),
                self.n
            )));
        }
        if copies.iter().any(|&c| c == 0) {
            return Err(Error::InvalidParameter("copy counts must be >= 1".into()));
        }
        let reps: Vec<usize> = (0..self.n)
            .map(|v| copies[v] * self.intensities[v] as usize)
            .collect();
        let mut offset = vec![0usize; self.n + 1];
        for v in 0..self.n {
            offset[v + 1] = offset[v] + reps[v];
        }
        let total = offset[self.n];
        let mut edges = Vec::new();
        for v in 0..self.n {
            for i in offset[v]..offset[v + 1] {
                for j in (i + 1)..offset[v + 1] {
                    edges.push((i, j));
                }
            }
            for &w in &self.neighbours[v] {
                if w > v {
                    for i in offset[v]..offset[v + 1] {
                        for j in offset[w]..offset[w + 1] {
                            edges.push((i, j));
                        }
                    }
                }
            }
        }
        Graph::new(total, &edges, None)
    }
}

/// Metrics bundle computed by [`Graph::metrics`].
#[derive(Clone, Debug, Serialize)]
pub struct GraphMetrics {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub is_regular: bool,
    /// `None` means acyclic (infinite girth).
    pub girth: Option<usize>,
    pub diameter: usize,
    pub dominant_vertices: Vec<usize>,
    /// All-pairs BFS distances, `distances[u][v]`.
    pub distances: Vec<Vec<u32>>,
}

impl fmt::Display for GraphMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices:  {}", self.vertices)?;
        writeln!(f, "edges:     {}", self.edges)?;
        writeln!(f, "degree:    max {}, min {}", self.max_degree, self.min_degree)?;
        writeln!(f, "regular:   {}", self.is_regular)?;
        match self.girth {
            Some(g) => writeln!(f, "girth:     {g}")?,
            None => writeln!(f, "girth:     infinite (acyclic)")?,
        }
        writeln!(f, "diameter:  {}", self.diameter)?;
        write!(f, "dominant:  {:?}", self.dominant_vertices)
    }
}

/// True iff `embedding` maps `sub` edge-preservingly and injectively into
/// `sup` (a subgraph embedding; it need not be induced).
pub fn is_subgraph(sub: &Graph, sup: &Graph, embedding: &[usize]) -> Result<bool> {
    if embedding.len() != sub.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "embedding has {} entries for {} vertices",
            embedding.len(),
            sub.vertex_count()
        )));
    }
    for &img in embedding {
        if img >= sup.vertex_count() {
            return Err(Error::VertexOutOfRange { vertex: img, vertices: sup.vertex_count() });
        }
    }
    let mut seen = vec![false; sup.vertex_count()];
    for &img in embedding {
        if seen[img] {
            return Err(Error::InvalidParameter("embedding is not injective".into()));
        }
        seen[img] = true;
    }
    Ok(sub
        .edges()
        .iter()
        .all(|&(a, b)| sup.is_edge(embedding[a], embedding[b])))
}

// ---------------------------------------------------------------------------
// Standard families
// ---------------------------------------------------------------------------

/// Cycle on n >= 3 vertices.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges, None)
}

/// Path on n >= 1 vertices.
pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("path needs n >= 1".into()));
    }
    let edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::new(n, &edges, None)
}

/// Star on n >= 1 vertices: vertex 0 is the centre, 1..n are leaves.
/// star(1) is the single vertex, star(2) a single edge.
pub fn star(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("star needs n >= 1".into()));
    }
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (0, i)).collect();
    Graph::new(n, &edges, None)
}

/// Complete graph on n >= 1 vertices.
pub fn complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("complete graph needs n >= 1".into()));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            edges.push((a, b));
        }
    }
    Graph::new(n, &edges, None)
}

/// Cocktail-party graph on an even number m >= 4 of vertices: the complete
/// graph minus the perfect matching {i, i + m/2}. (m = 2 would be two
/// isolated vertices, which is rejected as disconnected.)
pub fn cocktail_party(m: usize) -> Result<Graph> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "cocktail-party graph needs even m >= 2, got {m}"
        )));
    }
    let half = m / 2;
    let mut edges = Vec::new();
    for a in 0..m {
        for b in (a + 1)..m {
            if b != a + half {
                edges.push((a, b));
            }
        }
    }
    Graph::new(m, &edges, None)
}

/// The bowtie of two triangles sharing one vertex: centre 0, wing pairs
/// {1, 2} and {3, 4}.
pub fn butterfly() -> Graph {
    Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)], None).unwrap()
}

/// Petersen graph: 3-regular on 10 vertices with girth 5. Outer cycle 0..5,
/// inner pentagram 5..10, spokes i -- i+5.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, &edges, None).unwrap()
}

/// The exactly solvable family: take the cocktail-party graph on `party`
/// vertices, replace every vertex by `clones` mutually adjacent copies, and
/// add `hubs` dominant vertices adjacent to everything (including each
/// other). Layout: hubs are 0..hubs, then block c of the party occupies the
/// next `clones` indices each.
///
/// `party` must be even; `party = 2` needs `hubs >= 1` to stay connected.
/// `gamma_hub_party` in the surface module gives this family's exact growth
/// rate.
pub fn hub_party(hubs: usize, clones: usize, party: usize) -> Result<Graph> {
    if clones == 0 {
        return Err(Error::InvalidParameter("clones must be >= 1".into()));
    }
    if party < 2 || party % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "party size must be even and >= 2, got {party}"
        )));
    }
    if party == 2 && hubs == 0 {
        return Err(Error::InvalidParameter(
            "party size 2 with no hub is disconnected".into(),
        ));
    }
    let n = hubs + clones * party;
    let block = |c: usize| -> std::ops::Range<usize> {
        let s = hubs + c * clones;
        s..s + clones
    };
    let mut edges = Vec::new();
    for h in 0..hubs {
        for v in (h + 1)..n {
            edges.push((h, v));
        }
    }
    let half = party / 2;
    for c in 0..party {
        for i in block(c) {
            for j in block(c) {
                if i < j {
                    edges.push((i, j));
                }
            }
        }
        for d in (c + 1)..party {
            if d == c + half {
                continue; // matched pair of the party graph: not adjacent
            }
            for i in block(c) {
                for j in block(d) {
                    edges.push((i, j));
                }
            }
        }
    }
    Graph::new(n, &edges, None)
}

// ---------------------------------------------------------------------------
// Exchange format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    intensities: Option<Vec<u64>>,
}

impl Graph {
    pub fn to_json(&self) -> String {
        let file = GraphFile {
            vertices: self.n,
            edges: self.edges(),
            intensities: if self.intensities.iter().all(|&w| w == 1) {
                None
            } else {
                Some(self.intensities.clone())
            },
        };
        serde_json::to_string_pretty(&file).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Graph::new(file.vertices, &file.edges, file.intensities)
    }

    pub fn from_file(path: &Path) -> Result<Graph> {
        Graph::from_json(&std::fs::read_to_string(path)?)
    }

    /// Parse a family descriptor like `cycle:7`, `star:4`, `complete:5`,
    /// `path:3`, `cocktail:6`, `butterfly`, `petersen` or
    /// `hubparty:1,2,2` (hubs, clones, party; `theorem1:` is accepted as an
    /// alias for `hubparty:`).
    pub fn from_family_str(s: &str) -> Result<Graph> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let one = |args: Option<&str>| -> Result<usize> {
            args.ok_or_else(|| Error::Parse(format!("family {name} needs a size, e.g. {name}:5")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad size for {name}: {e}")))
        };
        match name {
            "cycle" => cycle(one(args)?),
            "path" => path(one(args)?),
            "star" => star(one(args)?),
            "complete" => complete(one(args)?),
            "cocktail" | "cocktail_party" => cocktail_party(one(args)?),
            "butterfly" => Ok(butterfly()),
            "petersen" => Ok(petersen()),
            "hubparty" | "theorem1" => {
                let args = args.ok_or_else(|| {
                    Error::Parse("hubparty needs three arguments: hubs,clones,party".into())
                })?;
                let parts: Vec<&str> = args.split(',').map(str::trim).collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(
                        "hubparty needs three arguments: hubs,clones,party".into(),
                    ));
                }
                let nums: Vec<usize> = parts
                    .iter()
                    .map(|p| p.parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
                    .collect::<Result<_>>()?;
                hub_party(nums[0], nums[1], nums[2])
            }
            other => Err(Error::Parse(format!("unknown graph family: {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_graphs() {
        assert!(Graph::new(0, &[], None).is_err());
        assert!(Graph::new(2, &[(0, 0)], None).is_err());
        assert!(Graph::new(2, &[(0, 2)], None).is_err());
        assert!(Graph::new(2, &[(0, 1), (1, 0)], None).is_err());
        assert!(Graph::new(3, &[(0, 1)], None).is_err()); // disconnected
        assert!(Graph::new(2, &[(0, 1)], Some(vec![1, 0])).is_err());
        assert!(Graph::new(2, &[(0, 1)], Some(vec![1])).is_err());
    }

    #[test]
    fn closed_neighbourhoods() {
        let c4 = cycle(4).unwrap();
        assert_eq!(c4.closed_neighbourhood(0).unwrap(), vec![0, 1, 3]);
        assert_eq!(c4.closed_neighbourhood(2).unwrap(), vec![1, 2, 3]);
        let s4 = star(4).unwrap();
        assert_eq!(s4.closed_neighbourhood(0).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(s4.closed_neighbourhood(2).unwrap(), vec![0, 2]);
        assert!(s4.closed_neighbourhood(4).is_err());
    }

    #[test]
    fn dominant_vertices_match_definition() {
        assert_eq!(complete(5).unwrap().dominant_vertices(), vec![0, 1, 2, 3, 4]);
        assert_eq!(star(4).unwrap().dominant_vertices(), vec![0]);
        assert_eq!(butterfly().dominant_vertices(), vec![0]);
        assert!(cycle(4).unwrap().dominant_vertices().is_empty());
        // cycle(3) = complete(3): every vertex dominant.
        assert_eq!(cycle(3).unwrap().dominant_vertices().len(), 3);
    }

    #[test]
    fn metric_values_on_families() {
        let m = petersen().metrics();
        assert_eq!((m.max_degree, m.min_degree, m.is_regular), (3, 3, true));
        assert_eq!(m.girth, Some(5));
        assert_eq!(m.diameter, 2);

        let m = cycle(7).unwrap().metrics();
        assert_eq!(m.girth, Some(7));
        assert!(m.is_regular);
        assert_eq!(m.diameter, 3);

        let m = star(5).unwrap().metrics();
        assert_eq!(m.girth, None);
        assert!(!m.is_regular);
        assert_eq!(m.max_degree, 4);

        let m = complete(4).unwrap().metrics();
        assert_eq!(m.girth, Some(3));
        assert_eq!(m.diameter, 1);

        let m = path(4).unwrap().metrics();
        assert_eq!(m.girth, None);
        assert_eq!(m.diameter, 3);

        // distances: symmetric, zero diagonal, triangle check on a cycle
        let c6 = cycle(6).unwrap().metrics();
        assert_eq!(c6.distances[0][3], 3);
        assert_eq!(c6.distances[1][5], 2);
        for u in 0..6 {
            assert_eq!(c6.distances[u][u], 0);
            for v in 0..6 {
                assert_eq!(c6.distances[u][v], c6.distances[v][u]);
            }
        }
    }

    #[test]
    fn bfs_order_is_distance_sorted_with_id_tiebreak() {
        let c6 = cycle(6).unwrap();
        assert_eq!(c6.non_decreasing_permutation(0).unwrap(), vec![0, 1, 5, 2, 4, 3]);
        let s5 = star(5).unwrap();
        assert_eq!(s5.non_decreasing_permutation(3).unwrap(), vec![3, 0, 1, 2, 4]);
        // Every vertex appears exactly once and distances never decrease.
        let g = petersen();
        for root in 0..10 {
            let order = g.non_decreasing_permutation(root).unwrap();
            let dist = g.bfs_distances(root).unwrap();
            let mut sorted = order.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..10).collect::<Vec<_>>());
            for w in order.windows(2) {
                assert!(dist[w[0]] <= dist[w[1]]);
            }
        }
    }

    #[test]
    fn merging_equivalent_vertices() {
        // Butterfly: the two wing pairs are equivalence classes.
        let (red, map) = butterfly().reduce_equivalent();
        assert_eq!(red.vertex_count(), 3);
        assert_eq!(red.intensities(), &[1, 2, 2]);
        assert_eq!(map, vec![0, 1, 1, 2, 2]);
        assert_eq!(red.edges(), vec![(0, 1), (0, 2)]); // a star with weighted leaves

        // Complete graph collapses to a point of intensity n.
        let (red, _) = complete(5).unwrap().reduce_equivalent();
        assert_eq!(red.vertex_count(), 1);
        assert_eq!(red.intensities(), &[5]);

        // Cycles of length >= 5 and the Petersen graph are already fully
        // merged; cycle(4) too. cycle(3) = complete(3) collapses.
        for g in [cycle(4).unwrap(), cycle(5).unwrap(), petersen()] {
            let (red, _) = g.reduce_equivalent();
            assert_eq!(red.vertex_count(), g.vertex_count());
        }
        assert_eq!(cycle(3).unwrap().reduce_equivalent().0.vertex_count(), 1);

        // Idempotent.
        let (once, _) = hub_party(2, 3, 4).unwrap().reduce_equivalent();
        let (twice, map) = once.reduce_equivalent();
        assert_eq!(once, twice);
        assert_eq!(map, (0..once.vertex_count()).collect::<Vec<_>>());
    }

    #[test]
    fn cloning_expands_intensities() {
        // Weighted star (1, 2, 2) cloned once expands to the 5-vertex
        // butterfly shape: one centre block of 1, two leaf blocks of 2.
        let weighted = Graph::new(3, &[(0, 1), (0, 2)], Some(vec![1, 2, 2])).unwrap();
        let expanded = weighted.clone_vertices(&[1, 1, 1]).unwrap();
        assert_eq!(expanded.vertex_count(), 5);
        assert_eq!(expanded.edge_count(), butterfly().edge_count());
        let (back, _) = expanded.reduce_equivalent();
        assert_eq!(back, weighted);

        // Doubling every vertex of the 4-cycle gives the hub-free party
        // expansion on 8 vertices.
        let doubled = cycle(4).unwrap().clone_vertices(&[2; 4]).unwrap();
        assert_eq!(doubled.vertex_count(), 8);
        let expected = hub_party(0, 2, 4).unwrap();
        assert_eq!(doubled.edge_count(), expected.edge_count());

        assert!(cycle(4).unwrap().clone_vertices(&[1, 2, 0, 1]).is_err());
        assert!(cycle(4).unwrap().clone_vertices(&[1, 2]).is_err());
    }

    #[test]
    fn family_constructors_validate() {
        assert!(cycle(2).is_err());
        assert!(star(0).is_err());
        assert!(complete(0).is_err());
        assert!(cocktail_party(5).is_err());
        assert!(cocktail_party(2).is_err()); // disconnected
        assert!(hub_party(0, 1, 2).is_err()); // disconnected
        assert!(hub_party(1, 0, 4).is_err());
        assert!(hub_party(1, 1, 3).is_err());
        assert_eq!(star(1).unwrap().vertex_count(), 1);
        assert_eq!(cocktail_party(4).unwrap().edge_count(), 4); // = cycle(4)
    }

    #[test]
    fn hub_party_instances() {
        // (1,1,2): one hub joining two non-adjacent vertices = star(3).
        let g = hub_party(1, 1, 2).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.is_dominant(0));
        assert!(!g.is_edge(1, 2));

        // (2,1,2): complete(4) minus one edge.
        let g = hub_party(2, 1, 2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 5);
        assert!(!g.is_edge(2, 3));

        // (0,1,4): the 4-cycle; (0,1,6): cocktail party of 6.
        assert_eq!(hub_party(0, 1, 4).unwrap().edge_count(), 4);
        let g = hub_party(0, 1, 6).unwrap();
        assert_eq!(g.edge_count(), cocktail_party(6).unwrap().edge_count());
        assert!(g.metrics().is_regular);

        // (1,2,2): five vertices, centre dominant, wings in adjacent pairs.
        let g = hub_party(1, 2, 2).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), butterfly().edge_count());
        assert!(g.is_edge(1, 2) && g.is_edge(3, 4) && !g.is_edge(1, 3));

        // (1,1,4): the wheel on 4+1 vertices.
        let g = hub_party(1, 1, 4).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 8);
    }

    #[test]
    fn subgraph_embeddings() {
        let c4 = cycle(4).unwrap();
        let k4 = complete(4).unwrap();
        assert!(is_subgraph(&c4, &k4, &[0, 1, 2, 3]).unwrap());
        assert!(!is_subgraph(&k4, &c4, &[0, 1, 2, 3]).unwrap());
        let p3 = path(3).unwrap();
        assert!(is_subgraph(&p3, &c4, &[0, 1, 2]).unwrap());
        assert!(!is_subgraph(&p3, &c4, &[0, 2, 1]).unwrap()); // 0-2 not an edge
        assert!(is_subgraph(&p3, &c4, &[0, 1]).is_err());
        assert!(is_subgraph(&p3, &c4, &[0, 1, 1]).is_err());
        assert!(is_subgraph(&p3, &c4, &[0, 1, 7]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::new(3, &[(0, 1), (0, 2)], Some(vec![1, 2, 2])).unwrap();
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        let plain = petersen();
        assert_eq!(Graph::from_json(&plain.to_json()).unwrap(), plain);
        assert!(Graph::from_json("{\"vertices\": 2}").is_err());
        assert!(Graph::from_json("{\"vertices\": 2, \"edges\": [[0,1],[0,1]]}").is_err());
    }

    #[test]
    fn family_strings() {
        assert_eq!(Graph::from_family_str("cycle:7").unwrap(), cycle(7).unwrap());
        assert_eq!(Graph::from_family_str("star:4").unwrap(), star(4).unwrap());
        assert_eq!(Graph::from_family_str("butterfly").unwrap(), butterfly());
        assert_eq!(Graph::from_family_str("petersen").unwrap(), petersen());
        assert_eq!(
            Graph::from_family_str("hubparty:1,2,2").unwrap(),
            hub_party(1, 2, 2).unwrap()
        );
        assert_eq!(
            Graph::from_family_str("theorem1: 1, 2, 2").unwrap(),
            hub_party(1, 2, 2).unwrap()
        );
        assert_eq!(
            Graph::from_family_str("cocktail:6").unwrap(),
            cocktail_party(6).unwrap()
        );
        assert!(Graph::from_family_str("moebius:5").is_err());
        assert!(Graph::from_family_str("cycle").is_err());
        assert!(Graph::from_family_str("cycle:x").is_err());
        assert!(Graph::from_family_str("hubparty:1,2").is_err());
    }
}
